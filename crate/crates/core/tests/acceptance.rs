//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{Dir, OObj};
use diagraph::constraints::ger::{ger_partition, ger_partition_slice, Ger};
use diagraph::geometry::{numeric_textp, Tag};
use diagraph::grammar::{g1, g2, parse_rules, validate_grammar, G1_SOURCE, G2_SOURCE};
use diagraph::io::fixture;
use diagraph::parser::TraceEvent;
use diagraph::spatial::{Axis, Direction};
use diagraph::{Config, Node, Parser, Scene, SpatialIndex, TaggedSet};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture_scene(name: &str) -> Scene {
    let d = fixture(name).unwrap().to_diagram::<f64>().unwrap();
    Scene::new(d.primitives, Config::default()).unwrap()
}

fn id_of(scene: &Scene, tag: Tag) -> String {
    scene.primitive(tag).map(|p| p.display_id()).unwrap_or_default()
}

fn leaf_ids(scene: &Scene, node: &Node) -> BTreeSet<String> {
    node.tags()
        .iter()
        .filter_map(|t| scene.primitive(t))
        .map(|p| p.display_id())
        .collect()
}

fn fig2() -> Outcome {
    let mut scene = fixture_scene("fig2-ticks");
    let g = g1();
    let start = Instant::now();
    let out = Parser::new(&g, &mut scene)
        .parse("X-Ticks")
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let sols = &out.forest.solutions;
    ensure(sols.len() == 2, || format!("{} solutions, expected 2", sols.len()))?;
    let mut b_ticks = None;
    for s in sols {
        let ids = leaf_ids(&scene, s);
        ensure(!ids.iter().any(|i| i.starts_with("c-") || i.starts_with("d-")), || {
            format!("solution uses region c or d: {ids:?}")
        })?;
        if ids.contains("b-line") {
            let ticks = s.child("Ticks").map(|t| t.children().count()).unwrap_or(0);
            b_ticks = Some(ticks);
        }
    }
    ensure(b_ticks == Some(4), || {
        format!("region-b solution ticks = {b_ticks:?}, expected 4")
    })?;
    ensure(elapsed.as_secs_f64() < 1.0, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "2 solutions, region b has 4 ticks, {:.1} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn fig3() -> Outcome {
    let mut scene = fixture_scene("fig3-micro");
    let g = g1();
    let out = Parser::new(&g, &mut scene)
        .with_trace(true)
        .parse("X-Ticks")
        .map_err(|e| e.to_string())?;
    let trace = &out.trace;
    let space = trace
        .iter()
        .find_map(|e| match e {
            TraceEvent::Space { constituent, space, .. } if constituent.is("X-Line") => Some(space.clone()),
            _ => None,
        })
        .ok_or("no X-Line space event")?;
    let leaves: BTreeSet<u32> = space
        .iter()
        .flat_map(|t| scene.leaves(t).iter().collect::<Vec<_>>())
        .map(|t| t.0)
        .collect();
    ensure(leaves == BTreeSet::from([3]), || {
        format!("X-Line space leaves {leaves:?}, expected {{D=3}}")
    })?;
    let ctx = trace
        .iter()
        .find_map(|e| match e {
            TraceEvent::Context {
                constituent, context, ..
            } if constituent.is("Ticks") => Some(context.clone()),
            _ => None,
        })
        .ok_or("no Ticks context event")?;
    // B, C, the top endpoints of B and C, and both endpoints of D
    let expected = TaggedSet::from_tags([1, 2, 7, 9, 11, 12].map(Tag));
    ensure(ctx == expected, || format!("Ticks context {ctx}, expected {expected}"))?;
    let bc = TaggedSet::from_tags([Tag(1), Tag(2)]);
    let group_at = trace
        .iter()
        .position(|e| matches!(e, TraceEvent::Group { members, .. } if *members == bc))
        .ok_or("no {B, C} group")?;
    let rejected = trace[group_at..].iter().any(|e| {
        matches!(e, TraceEvent::Reject { constituent, constraint, .. }
            if constituent.is("Ticks") && constraint.contains("number-of"))
    });
    ensure(rejected, || "group {B, C} never rejected by number-of".into())?;
    ensure(out.forest.is_empty(), || {
        format!("{} solutions, expected 0", out.forest.len())
    })?;
    Ok("space {D}, context {B, C, 7, 9, 11, 12}, {B, C} rejected by cardinality".into())
}

fn of_type<'a>(node: &'a Node, name: &str, out: &mut Vec<&'a Node>) {
    if let Node::Derived {
        type_name, children, ..
    } = node
    {
        if type_name.is(name) {
            out.push(node);
        }
        for (_, c) in children {
            of_type(c, name, out);
        }
    }
}

fn datagraph() -> Outcome {
    let mut scene = fixture_scene("datagraph4");
    ensure(scene.primitive_count() == 133, || {
        format!("{} primitives", scene.primitive_count())
    })?;
    let g = g2();
    let out = Parser::new(&g, &mut scene)
        .parse("XY-Data-Graph")
        .map_err(|e| e.to_string())?;
    let sols = &out.forest.solutions;
    ensure(sols.len() == 4, || format!("{} solutions, expected 4", sols.len()))?;
    let mut title_hits = [0usize; 2];
    for (k, s) in sols.iter().enumerate() {
        let x_axis = s
            .child("X-Axis")
            .filter(|n| !matches!(n, Node::Null))
            .ok_or(format!("solution {k}: null X-Axis"))?;
        let ticks = x_axis.child("X-Ticks").map(|t| t.children().count()).unwrap_or(0);
        ensure(ticks >= 2, || format!("solution {k}: {ticks} x ticks"))?;
        let labels = x_axis.child("X-Labels").ok_or(format!("solution {k}: no X-Labels"))?;
        ensure(labels.children().count() > 0, || {
            format!("solution {k}: empty X-Labels")
        })?;
        for l in labels.children() {
            let t = l.tag().unwrap();
            let numeric =
                matches!(&scene.primitive(t).unwrap().shape, diagraph::Shape::Text { text, .. } if numeric_textp(text));
            ensure(numeric, || {
                format!("solution {k}: label {} not numeric", id_of(&scene, t))
            })?;
        }
        let mut lines = Vec::new();
        of_type(s, "Data-Line", &mut lines);
        ensure(!lines.is_empty(), || format!("solution {k}: no data lines"))?;
        for l in &lines {
            let len = scene.a_length(l.tag().unwrap()).unwrap();
            ensure(len > scene.very_long(), || {
                format!("solution {k}: data line length {len} <= very-long")
            })?;
        }
        let mut clusters = Vec::new();
        of_type(s, "Data-Cluster", &mut clusters);
        ensure(!clusters.is_empty(), || format!("solution {k}: no data clusters"))?;
        for c in &clusters {
            let members = TaggedSet::from_tags(c.children().filter_map(Node::tag));
            let parts = ger_partition(&members, Ger::SameType, &scene);
            ensure(parts.len() == 1, || {
                format!("solution {k}: cluster splits into {} same-type groups", parts.len())
            })?;
        }
        let ids = leaf_ids(&scene, s);
        for (hit, title) in title_hits.iter_mut().zip(["x-title", "y-title"]) {
            if ids.contains(title) {
                *hit += 1;
            }
        }
    }
    ensure(title_hits.iter().all(|&n| n >= 2), || {
        format!("title occurrences {title_hits:?}")
    })?;
    Ok(format!(
        "4 solutions; x-title in {}, y-title in {} trees",
        title_hits[0], title_hits[1]
    ))
}

fn to_dir(d: Dir) -> Direction {
    match d {
        Dir::Left => Direction::Left,
        Dir::Right => Direction::Right,
        Dir::Above => Direction::Above,
        Dir::Below => Direction::Below,
    }
}

fn groups_of(parts: &[TaggedSet]) -> BTreeSet<Vec<u32>> {
    parts.iter().map(|g| g.iter().map(|t| t.0).collect()).collect()
}

fn index_oracle() -> Outcome {
    let mut queries = 0usize;
    for seed in 0..50u64 {
        let mut r = common::rng(seed);
        let n = r.gen_range(1..=200);
        let prims = common::random_diagram(&mut r, n);
        let objs = common::oracle_objects(&prims);
        let index = SpatialIndex::build(&prims, 7).map_err(|e| e.to_string())?;
        ensure(index.len() == objs.len(), || {
            format!("seed {seed}: {} objects, oracle {}", index.len(), objs.len())
        })?;
        for (a, o) in objs.iter().enumerate() {
            let got: BTreeSet<u32> = index
                .objects_touching(Tag(o.tag))
                .unwrap()
                .iter()
                .map(|t| t.0)
                .collect();
            let want = common::touching(&objs, a);
            ensure(got == want, || {
                format!("seed {seed}: touching({}) = {got:?}, oracle {want:?}", o.tag)
            })?;
            for d in [Dir::Left, Dir::Right, Dir::Above, Dir::Below] {
                for strip in [false, true] {
                    let (set, _) = index.directional_query(Tag(o.tag), to_dir(d), strip).unwrap();
                    let got: BTreeSet<u32> = set.iter().map(|t| t.0).collect();
                    let want = common::directional(&objs, a, d, strip);
                    ensure(got == want, || {
                        format!("seed {seed}: {d:?} strip={strip} from {}: {got:?} vs {want:?}", o.tag)
                    })?;
                    queries += 1;
                }
            }
        }
        for _ in 0..4 {
            let members: Vec<&OObj> = objs.iter().filter(|_| r.gen_bool(0.4)).collect();
            let set = TaggedSet::from_tags(members.iter().map(|o| Tag(o.tag)));
            for (axis, horizontal) in [(Axis::Horizontal, true), (Axis::Vertical, false)] {
                let got = groups_of(&index.aligned_partition(&set, axis, 6));
                let want = common::aligned(&members, horizontal);
                ensure(got == want, || format!("seed {seed}: aligned {axis:?} differs"))?;
            }
        }
    }
    Ok(format!("50 diagrams, {queries} directional queries match"))
}

fn g1_solutions(prims: Vec<diagraph::Primitive>) -> Result<BTreeSet<(u32, Vec<u32>)>, String> {
    let mut scene = Scene::new(prims, Config::default()).map_err(|e| e.to_string())?;
    let g = g1();
    let out = Parser::new(&g, &mut scene)
        .parse("X-Ticks")
        .map_err(|e| e.to_string())?;
    let mut set = BTreeSet::new();
    for s in &out.forest.solutions {
        let line = s
            .child("X-Line")
            .and_then(|x| x.child("Line"))
            .and_then(Node::tag)
            .ok_or("no X-Line leaf")?;
        let ticks: Vec<u32> = s
            .child("Ticks")
            .ok_or("no Ticks")?
            .children()
            .filter_map(Node::tag)
            .map(|t| t.0)
            .collect();
        set.insert((line.0, ticks));
    }
    ensure(set.len() == out.forest.len(), || "duplicate solutions".into())?;
    Ok(set)
}

fn parser_oracle() -> Outcome {
    let mut total = 0;
    for seed in 0..25u64 {
        let mut r = common::rng(1000 + seed);
        let prims = common::random_tick_diagram(&mut r);
        ensure(prims.len() <= 30, || format!("seed {seed}: N = {}", prims.len()))?;
        let want = common::g1_oracle(&prims);
        let got = g1_solutions(prims)?;
        ensure(got == want, || format!("seed {seed}: parser {got:?}, oracle {want:?}"))?;
        total += want.len();
    }
    Ok(format!("25 diagrams, {total} solutions match enumeration"))
}

fn ger_properties() -> Outcome {
    for rel in Ger::ALL {
        for k in 0..100u64 {
            let mut r = common::rng(5000 + k);
            let n = r.gen_range(2..=80);
            let prims = common::random_diagram(&mut r, n);
            let objs = common::oracle_objects(&prims);
            let (h, _) = common::lengths(&objs, &prims);
            let scene = Scene::new(prims.clone(), Config::default()).map_err(|e| e.to_string())?;
            let mut chosen: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.6)).collect();
            let set = TaggedSet::from_tags(chosen.iter().map(|&i| Tag(i as u32)));
            let parts = ger_partition(&set, rel, &scene);
            let mut seen = Vec::new();
            for p in &parts {
                ensure(!p.is_empty(), || format!("{rel}: empty group"))?;
                seen.extend(p.iter());
            }
            seen.sort();
            ensure(seen.len() == set.len() && seen.iter().copied().eq(set.iter()), || {
                format!("{rel} #{k}: not a disjoint cover")
            })?;
            chosen.shuffle(&mut r);
            let shuffled: Vec<Tag> = chosen.iter().map(|&i| Tag(i as u32)).collect();
            let again = ger_partition_slice(&shuffled, rel, &scene);
            ensure(groups_of(&again) == groups_of(&parts), || {
                format!("{rel} #{k}: order-sensitive")
            })?;
            chosen.sort();
            let want: BTreeSet<Vec<u32>> = common::components(chosen.len(), |a, b| {
                common::ger_pair(rel.name(), &objs[chosen[a]], &objs[chosen[b]], h)
            })
            .into_iter()
            .map(|c| c.into_iter().map(|i| chosen[i] as u32).collect())
            .collect();
            ensure(groups_of(&parts) == want, || {
                format!("{rel} #{k}: differs from brute force")
            })?;
        }
    }
    Ok("5 relations x 100 sets".into())
}

fn performance() -> Outcome {
    let file = fixture("datagraph4").unwrap();
    let g = g2();
    let start = Instant::now();
    let d = file.to_diagram::<f64>().unwrap();
    let mut scene = Scene::new(d.primitives, Config::default()).map_err(|e| e.to_string())?;
    let built = start.elapsed();
    let out = Parser::new(&g, &mut scene)
        .parse("XY-Data-Graph")
        .map_err(|e| e.to_string())?;
    let total = start.elapsed();
    ensure(out.forest.len() == 4, || format!("{} solutions", out.forest.len()))?;
    ensure(total.as_secs_f64() < 2.0, || format!("index + parse took {total:?}"))?;
    let mut worst = 0;
    for (seed, n) in [(1u64, 10usize), (2, 100), (3, 1000), (4, 4000)] {
        let mut r = common::rng(9000 + seed);
        let prims = common::random_diagram(&mut r, n);
        let index = SpatialIndex::build(&prims, 7).map_err(|e| e.to_string())?;
        for t in 0..index.len() as u32 {
            for d in [Direction::Left, Direction::Right, Direction::Above, Direction::Below] {
                let (_, cost) = index.directional_query(Tag(t), d, false).unwrap();
                worst = worst.max(cost.cells_inspected);
            }
        }
    }
    ensure(worst <= 14, || format!("a directional query inspected {worst} cells"))?;
    Ok(format!(
        "index {:.1} ms, index+parse {:.1} ms, max {worst} cells per directional query",
        built.as_secs_f64() * 1e3,
        total.as_secs_f64() * 1e3
    ))
}

fn grammar_round_trip() -> Outcome {
    let mut failures = Vec::new();
    for (name, src) in [("g1", G1_SOURCE), ("g2", G2_SOURCE)] {
        let g = parse_rules(src).map_err(|e| format!("{name}: {e}"))?;
        let diags = validate_grammar(&g);
        ensure(diags.is_empty(), || format!("{name}: {} diagnostics", diags.len()))?;
        let printed = g.to_string();
        let again = parse_rules(&printed).map_err(|e| format!("{name} reprint: {e}"))?;
        ensure(again == g, || format!("{name}: reprint differs"))?;
    }
    let g = g2();
    let alts = |n: &str| g.rules.iter().filter(|r| r.lhs.is(n)).count();
    ensure(alts("Data-Line") == 2 && alts("Data-Point") == 2, || {
        format!("Data-Line x{}, Data-Point x{}", alts("Data-Line"), alts("Data-Point"))
    })?;
    if g.rules.len() != 17 {
        failures.push(format!(
            "G2 has {} rules, expected 17. The published listing has {} distinct left-hand sides plus second \
             Data-Line and Data-Point alternatives; no reading of it yields 17",
            g.rules.len(),
            g.rules.iter().map(|r| r.lhs.key()).collect::<BTreeSet<_>>().len()
        ));
    }
    if failures.is_empty() {
        Ok("zero diagnostics, reprint identical, 17 rules".into())
    } else {
        Err(failures.join("; "))
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 fig2 reproduction", fig2),
        ("2 fig3 micro-trace", fig3),
        ("3 datagraph4 four graphs", datagraph),
        ("4 index oracle", index_oracle),
        ("5 parser oracle", parser_oracle),
        ("6 GER properties", ger_properties),
        ("7 performance", performance),
        ("8 grammar round-trip", grammar_round_trip),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match result {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
