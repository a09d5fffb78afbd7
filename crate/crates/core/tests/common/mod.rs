//! Brute-force oracles and seeded generators shared by the integration tests.
//! Nothing here consults the spatial index.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use diagraph::geometry::{Orientation, Point, Primitive, Shape, Tag};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CELL: f64 = 128.0;
pub const EXTENT: f64 = 8191.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn p(x: f64, y: f64) -> Point<f64> {
    Point::new(x, y)
}

fn clamp(v: f64) -> f64 {
    v.clamp(1.0, EXTENT - 1.0)
}

fn random_line(r: &mut ChaCha8Rng) -> Shape<f64> {
    let (x, y) = (r.gen_range(50.0..8100.0), r.gen_range(50.0..8100.0));
    let len = r.gen_range(30.0..3000.0);
    let angle: f64 = match r.gen_range(0..3) {
        0 => 0.0,
        1 => std::f64::consts::FRAC_PI_2,
        _ => r.gen_range(0.0..std::f64::consts::PI),
    };
    let (x2, y2) = (clamp(x + len * angle.cos()), clamp(y + len * angle.sin()));
    if (x2 - x).abs() < 1.0 && (y2 - y).abs() < 1.0 {
        return Shape::line(p(x, y), p(x + 10.0, y));
    }
    Shape::line(p(x, y), p(x2, y2))
}

/// Lines, circles and texts with coordinates already in grid units.
pub fn random_diagram(r: &mut ChaCha8Rng, n: usize) -> Vec<Primitive<f64>> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let roll = r.gen_range(0..100);
        let shape = if roll < 65 {
            random_line(r)
        } else if roll < 85 {
            let radius = r.gen_range(5.0..250.0);
            let c = p(
                r.gen_range(radius + 1.0..EXTENT - radius - 1.0),
                r.gen_range(radius + 1.0..EXTENT - radius - 1.0),
            );
            Shape::Circle { center: c, radius }
        } else {
            let height = r.gen_range(40.0..200.0);
            let chars = r.gen_range(1..6);
            let text: String = (0..chars).map(|k| char::from(b'0' + ((i + k) % 10) as u8)).collect();
            let extent = (0.6 * height * chars as f64).max(height);
            let orientation = if r.gen_bool(0.8) {
                Orientation::Horizontal
            } else {
                Orientation::Vertical
            };
            Shape::Text {
                text,
                anchor: p(
                    r.gen_range(1.0..EXTENT - extent - 2.0),
                    r.gen_range(1.0..EXTENT - extent - 2.0),
                ),
                height,
                orientation,
            }
        };
        out.push(Primitive::new(Tag(i as u32), shape).unwrap());
    }
    out
}

/// One or more long horizontal lines with ticks hanging above or below, plus
/// detached ticks and distractors. At most 30 primitives.
pub fn random_tick_diagram(r: &mut ChaCha8Rng) -> Vec<Primitive<f64>> {
    let mut shapes = vec![
        // fixes W near 7000 so h is near 109: short <= ~328, long >= ~1750
        Shape::line(p(500.0, 200.0), p(500.0, 2400.0)),
        Shape::line(p(7500.0, 200.0), p(7500.0, 2400.0)),
    ];
    let lines = r.gen_range(1..=3);
    for k in 0..lines {
        let y = 2800.0 + 1700.0 * k as f64 + r.gen_range(0.0..300.0);
        let x0 = r.gen_range(700.0..2500.0);
        let x1 = x0 + r.gen_range(2000.0..4700.0);
        let tilt = if r.gen_bool(0.2) {
            r.gen_range(-900.0..900.0)
        } else {
            0.0
        };
        shapes.push(Shape::line(p(x0, y), p(x1.min(7400.0), y + tilt)));
        let ticks = r.gen_range(0..=6);
        let up = r.gen_bool(0.5);
        for _ in 0..ticks {
            let x = r.gen_range(x0 + 10.0..x1.min(7400.0) - 10.0);
            let len = r.gen_range(60.0..300.0);
            let ty = y + tilt * (x - x0) / (x1.min(7400.0) - x0);
            let shift = if r.gen_bool(0.25) {
                r.gen_range(-400.0..400.0)
            } else {
                0.0
            };
            let (a, b) = if up {
                (ty + shift, ty + shift + len)
            } else {
                (ty + shift, ty + shift - len)
            };
            let lean = if r.gen_bool(0.15) {
                r.gen_range(-120.0..120.0)
            } else {
                0.0
            };
            shapes.push(Shape::line(p(x, a), p(x + lean, b)));
        }
    }
    while shapes.len() < 30 && r.gen_bool(0.5) {
        let x = r.gen_range(700.0..7300.0);
        let y = r.gen_range(300.0..7800.0);
        let len = r.gen_range(60.0..2500.0);
        shapes.push(Shape::line(p(x, y), p(x, (y + len).min(8000.0))));
    }
    shapes.truncate(30);
    shapes
        .into_iter()
        .enumerate()
        .map(|(i, s)| Primitive::new(Tag(i as u32), s).unwrap())
        .collect()
}

#[derive(Debug, Clone)]
pub struct OObj {
    pub tag: u32,
    /// `[xmin, ymin, xmax, ymax]`
    pub bbox: [f64; 4],
    pub cells: BTreeSet<(i64, i64)>,
    pub anchors: Vec<(f64, f64)>,
    pub kind: String,
    /// Line or curve end points.
    pub ends: Option<((f64, f64), (f64, f64))>,
    pub length: Option<f64>,
}

fn cell(v: f64) -> i64 {
    (v / CELL).floor() as i64
}

/// Liang-Barsky: does segment `a-b` meet the closed box?
fn segment_hits_box(a: (f64, f64), b: (f64, f64), bx: [f64; 4]) -> bool {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (pk, qk) in [
        (-dx, a.0 - bx[0]),
        (dx, bx[2] - a.0),
        (-dy, a.1 - bx[1]),
        (dy, bx[3] - a.1),
    ] {
        if pk == 0.0 {
            if qk < 0.0 {
                return false;
            }
        } else {
            let t = qk / pk;
            if pk < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
            if t0 > t1 {
                return false;
            }
        }
    }
    true
}

fn segment_cells(a: (f64, f64), b: (f64, f64), out: &mut BTreeSet<(i64, i64)>) {
    for i in cell(a.0.min(b.0))..=cell(a.0.max(b.0)) {
        for j in cell(a.1.min(b.1))..=cell(a.1.max(b.1)) {
            let bx = [
                i as f64 * CELL,
                j as f64 * CELL,
                (i + 1) as f64 * CELL,
                (j + 1) as f64 * CELL,
            ];
            if segment_hits_box(a, b, bx) {
                out.insert((i, j));
            }
        }
    }
}

fn box_cells(b: [f64; 4], out: &mut BTreeSet<(i64, i64)>) {
    for i in cell(b[0])..=cell(b[2]) {
        for j in cell(b[1])..=cell(b[3]) {
            out.insert((i, j));
        }
    }
}

fn xy(p: Point<f64>) -> (f64, f64) {
    (p.x, p.y)
}

/// Primitives followed by two endpoint objects per line, in line order.
pub fn oracle_objects(prims: &[Primitive<f64>]) -> Vec<OObj> {
    let mut out = Vec::new();
    for prim in prims {
        let mut cells = BTreeSet::new();
        let (bbox, anchors, ends, length) = match &prim.shape {
            Shape::Line { p1, p2 } => {
                let (a, b) = (xy(*p1), xy(*p2));
                segment_cells(a, b, &mut cells);
                let bbox = [a.0.min(b.0), a.1.min(b.1), a.0.max(b.0), a.1.max(b.1)];
                (bbox, vec![a, b], Some((a, b)), Some((b.0 - a.0).hypot(b.1 - a.1)))
            }
            Shape::Circle { center, radius } => {
                let bbox = [
                    center.x - radius,
                    center.y - radius,
                    center.x + radius,
                    center.y + radius,
                ];
                box_cells(bbox, &mut cells);
                (bbox, vec![(center.x, center.y)], None, None)
            }
            Shape::Text {
                text,
                anchor,
                height,
                orientation,
            } => {
                let w = 0.6 * height * text.chars().count() as f64;
                let (dx, dy) = match orientation {
                    Orientation::Horizontal => (w, *height),
                    Orientation::Vertical => (*height, w),
                };
                let bbox = [anchor.x, anchor.y, anchor.x + dx, anchor.y + dy];
                box_cells(bbox, &mut cells);
                (
                    bbox,
                    vec![((bbox[0] + bbox[2]) / 2.0, (bbox[1] + bbox[3]) / 2.0)],
                    None,
                    None,
                )
            }
            Shape::Polygon { vertices, closed } => {
                let mut pts: Vec<(f64, f64)> = vertices.iter().map(|v| xy(*v)).collect();
                if *closed {
                    pts.push(pts[0]);
                }
                for w in pts.windows(2) {
                    segment_cells(w[0], w[1], &mut cells);
                }
                let bbox = [
                    pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min),
                    pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
                    pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max),
                    pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max),
                ];
                (
                    bbox,
                    vec![((bbox[0] + bbox[2]) / 2.0, (bbox[1] + bbox[3]) / 2.0)],
                    None,
                    None,
                )
            }
            Shape::Bezier { .. } => panic!("oracle generators never emit curves"),
        };
        out.push(OObj {
            tag: prim.tag.0,
            bbox,
            cells,
            anchors,
            kind: prim.kind().name().to_string(),
            ends,
            length,
        });
    }
    let mut next = prims.len() as u32;
    for prim in prims {
        if let Shape::Line { p1, p2 } = &prim.shape {
            for q in [*p1, *p2] {
                let mut cells = BTreeSet::new();
                cells.insert((cell(q.x), cell(q.y)));
                out.push(OObj {
                    tag: next,
                    bbox: [q.x, q.y, q.x, q.y],
                    cells,
                    anchors: vec![(q.x, q.y)],
                    kind: "Endpoint".into(),
                    ends: None,
                    length: None,
                });
                next += 1;
            }
        }
    }
    out
}

pub fn touching(objs: &[OObj], a: usize) -> BTreeSet<u32> {
    objs.iter()
        .filter(|b| b.tag != objs[a].tag && !b.cells.is_disjoint(&objs[a].cells))
        .map(|b| b.tag)
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub enum Dir {
    Left,
    Right,
    Above,
    Below,
}

pub fn beyond(a: [f64; 4], c: [f64; 4], dir: Dir, strip: bool) -> bool {
    let side = match dir {
        Dir::Right => c[0] >= a[2],
        Dir::Left => c[2] <= a[0],
        Dir::Above => c[1] >= a[3],
        Dir::Below => c[3] <= a[1],
    };
    let band = match dir {
        Dir::Left | Dir::Right => c[1] <= a[3] && c[3] >= a[1],
        Dir::Above | Dir::Below => c[0] <= a[2] && c[2] >= a[0],
    };
    side && (!strip || band)
}

pub fn directional(objs: &[OObj], a: usize, dir: Dir, strip: bool) -> BTreeSet<u32> {
    objs.iter()
        .filter(|b| b.tag != objs[a].tag && beyond(objs[a].bbox, b.bbox, dir, strip))
        .map(|b| b.tag)
        .collect()
}

/// Connected components of `related` over `0..n`, each sorted, ordered by
/// first element.
pub fn components(n: usize, related: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![s];
        let mut comp = Vec::new();
        label[s] = id;
        while let Some(u) = stack.pop() {
            comp.push(u);
            for (v, l) in label.iter_mut().enumerate() {
                if *l == usize::MAX && related(u, v) {
                    *l = id;
                    stack.push(v);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

pub fn slots(o: &OObj, horizontal: bool) -> BTreeSet<i64> {
    o.anchors
        .iter()
        .map(|a| cell(if horizontal { a.1 } else { a.0 }))
        .collect()
}

pub fn aligned(members: &[&OObj], horizontal: bool) -> BTreeSet<Vec<u32>> {
    let s: Vec<BTreeSet<i64>> = members.iter().map(|o| slots(o, horizontal)).collect();
    components(members.len(), |i, j| !s[i].is_disjoint(&s[j]))
        .into_iter()
        .map(|c| c.into_iter().map(|i| members[i].tag).collect())
        .collect()
}

/// `(h, W)` from text heights and the union bbox width.
pub fn lengths(objs: &[OObj], prims: &[Primitive<f64>]) -> (f64, f64) {
    let prim_objs = &objs[..prims.len()];
    let w = prim_objs.iter().map(|o| o.bbox[2]).fold(f64::NEG_INFINITY, f64::max)
        - prim_objs.iter().map(|o| o.bbox[0]).fold(f64::INFINITY, f64::min);
    let h = prims
        .iter()
        .filter_map(|p| match &p.shape {
            Shape::Text { height, .. } => Some(*height),
            _ => None,
        })
        .fold(f64::INFINITY, f64::min);
    (if h.is_finite() { h } else { w / 64.0 }, w)
}

pub fn default_tiny(h: f64) -> f64 {
    (h / 2.0).max(2.0 * CELL)
}

/// Pairwise relations of the five GERs, straight from geometry.
pub fn ger_pair(name: &str, a: &OObj, b: &OObj, h: f64) -> bool {
    if a.tag == b.tag {
        return true;
    }
    let tiny = default_tiny(h);
    match name {
        "near" => {
            let r = (tiny / CELL).ceil() as i64;
            a.cells
                .iter()
                .any(|x| b.cells.iter().any(|y| (x.0 - y.0).abs() <= r && (x.1 - y.1).abs() <= r))
        }
        "horiz-aligned" => !slots(a, true).is_disjoint(&slots(b, true)),
        "vert-aligned" => !slots(a, false).is_disjoint(&slots(b, false)),
        "connected" => match (a.ends, b.ends) {
            (Some((a1, a2)), Some((b1, b2))) => [a1, a2]
                .iter()
                .any(|p| [b1, b2].iter().any(|q| (p.0 - q.0).hypot(p.1 - q.1) <= tiny)),
            _ => false,
        },
        "same-type" => {
            let (wa, ha) = (a.bbox[2] - a.bbox[0], a.bbox[3] - a.bbox[1]);
            let (wb, hb) = (b.bbox[2] - b.bbox[0], b.bbox[3] - b.bbox[1]);
            a.kind.eq_ignore_ascii_case(&b.kind) && (wa - wb).abs() <= h / 2.0 && (ha - hb).abs() <= h / 2.0
        }
        other => panic!("unknown relation {other}"),
    }
}

/// Exhaustive G1 `X-Ticks` enumeration: every horizontal long line, every
/// subset of the vertical short lines touching it that is a maximal
/// horizontally aligned set with more than two members.
pub fn g1_oracle(prims: &[Primitive<f64>]) -> BTreeSet<(u32, Vec<u32>)> {
    let objs = oracle_objects(prims);
    let (h, w) = lengths(&objs, prims);
    let tan = 5.0f64.to_radians().tan();
    let is_line = |o: &OObj| o.kind == "Line";
    let horiz = |o: &OObj| {
        o.ends
            .is_some_and(|(a, b)| (b.1 - a.1).abs() <= tan * (b.0 - a.0).abs())
    };
    let vert = |o: &OObj| {
        o.ends
            .is_some_and(|(a, b)| (b.0 - a.0).abs() <= tan * (b.1 - a.1).abs())
    };
    let long = |o: &OObj| o.length.is_some_and(|l| l >= (10.0 * h).max(0.25 * w));
    let short = |o: &OObj| o.length.is_some_and(|l| l <= 3.0 * h);
    let by_tag: HashMap<u32, &OObj> = objs.iter().map(|o| (o.tag, o)).collect();
    let mut out = BTreeSet::new();
    for (i, x) in objs.iter().enumerate() {
        if !(is_line(x) && horiz(x) && long(x)) {
            continue;
        }
        let cands: Vec<&OObj> = touching(&objs, i)
            .into_iter()
            .map(|t| by_tag[&t])
            .filter(|o| is_line(o) && vert(o) && short(o))
            .collect();
        assert!(cands.len() <= 16, "generator produced {} candidates", cands.len());
        let k = cands.len();
        let rel = |a: usize, b: usize| ger_pair("horiz-aligned", cands[a], cands[b], h);
        for mask in 1u32..(1u32 << k) {
            let members: Vec<usize> = (0..k).filter(|b| mask & (1 << b) != 0).collect();
            if members.len() <= 2 {
                continue;
            }
            let connected = components(members.len(), |a, b| rel(members[a], members[b])).len() == 1;
            let maximal = (0..k)
                .filter(|o| mask & (1 << o) == 0)
                .all(|o| members.iter().all(|&m| !rel(m, o)));
            if connected && maximal {
                out.insert((x.tag, members.iter().map(|&m| cands[m].tag).collect()));
            }
        }
    }
    out
}
