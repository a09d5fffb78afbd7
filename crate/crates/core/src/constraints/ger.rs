//! Generalized equivalence relations and their maximal-set partitions.

use std::collections::HashMap;
use std::fmt;

use super::TaggedSet;
use crate::geometry::{Coord, Point, Tag};
use crate::scene::Scene;
use crate::spatial::{Axis, Cell};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ger {
    Near,
    HorizAligned,
    VertAligned,
    Connected,
    SameType,
}

impl Ger {
    pub const ALL: [Ger; 5] = [
        Ger::Near,
        Ger::HorizAligned,
        Ger::VertAligned,
        Ger::Connected,
        Ger::SameType,
    ];

    pub fn from_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "near" => Some(Ger::Near),
            "horiz-aligned" => Some(Ger::HorizAligned),
            "vert-aligned" => Some(Ger::VertAligned),
            "connected" => Some(Ger::Connected),
            "same-type" => Some(Ger::SameType),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ger::Near => "near",
            Ger::HorizAligned => "horiz-aligned",
            Ger::VertAligned => "vert-aligned",
            Ger::Connected => "connected",
            Ger::SameType => "same-type",
        }
    }
}

impl fmt::Display for Ger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `near` radius in cells at the alignment level: `ceil(tiny / cell size)`.
pub fn near_radius<T: Coord>(scene: &Scene<T>) -> usize {
    let level = scene.config().align_level;
    let cs = scene.index().cell_size(level);
    (scene.tiny() / cs).ceil().to_usize().unwrap_or(0)
}

fn coarse_cells<T: Coord>(tag: Tag, scene: &Scene<T>) -> Vec<Cell> {
    let level = scene.config().align_level as u8;
    scene
        .index()
        .cells_of(tag)
        .map(|c| c.coarsen(level).cells().to_vec())
        .unwrap_or_default()
}

pub(crate) fn near_pair<T: Coord>(a: Tag, b: Tag, scene: &Scene<T>) -> bool {
    let r = near_radius(scene) as i32;
    let (ca, cb) = (coarse_cells(a, scene), coarse_cells(b, scene));
    ca.iter().any(|x| {
        cb.iter()
            .any(|y| (i32::from(x.i) - i32::from(y.i)).abs() <= r && (i32::from(x.j) - i32::from(y.j)).abs() <= r)
    })
}

fn slots<T: Coord>(tag: Tag, axis: Axis, scene: &Scene<T>) -> Vec<u16> {
    let index = scene.index();
    let level = scene.config().align_level;
    index
        .alignment_points(tag)
        .unwrap_or(&[])
        .iter()
        .map(|p| {
            let c = index.cell_of_point(*p, level);
            match axis {
                Axis::Horizontal => c.j,
                Axis::Vertical => c.i,
            }
        })
        .collect()
}

fn endpoints<T: Coord>(tag: Tag, scene: &Scene<T>) -> Vec<Point<T>> {
    scene.curve_endpoints(tag).map(|(a, b)| vec![a, b]).unwrap_or_default()
}

fn same_type_pair<T: Coord>(a: Tag, b: Tag, scene: &Scene<T>) -> bool {
    if scene.kind_signature(a) != scene.kind_signature(b) {
        return false;
    }
    let (Some(x), Some(y)) = (scene.bbox(a), scene.bbox(b)) else {
        return false;
    };
    let tol = scene.lengths().h / T::lit(2.0);
    (x.width() - y.width()).abs() <= tol && (x.height() - y.height()).abs() <= tol
}

/// The pairwise relation itself (reflexive, symmetric, not transitive).
pub fn ger_related<T: Coord>(a: Tag, b: Tag, rel: Ger, scene: &Scene<T>) -> bool {
    if a == b {
        return true;
    }
    match rel {
        Ger::Near => near_pair(a, b, scene),
        Ger::HorizAligned | Ger::VertAligned => {
            let axis = if rel == Ger::HorizAligned {
                Axis::Horizontal
            } else {
                Axis::Vertical
            };
            let sb = slots(b, axis, scene);
            slots(a, axis, scene).iter().any(|s| sb.contains(s))
        }
        Ger::Connected => {
            let tiny = scene.tiny();
            let eb = endpoints(b, scene);
            endpoints(a, scene)
                .iter()
                .any(|p| eb.iter().any(|q| p.distance(*q) <= tiny))
        }
        Ger::SameType => same_type_pair(a, b, scene),
    }
}

type Bucketed<T> = (usize, Point<T>);

fn groups_of(tags: &[Tag], mut uf: UnionFind) -> Vec<TaggedSet> {
    let mut groups: Vec<TaggedSet> = uf
        .groups()
        .into_iter()
        .map(|g| TaggedSet::from_tags(g.into_iter().map(|i| tags[i])))
        .collect();
    groups.sort_by_key(|g| g.first());
    groups
}

/// Partition of `tags` (any order, no duplicates) into connected components of
/// `rel`. Groups come out sorted and ordered by smallest tag.
pub fn ger_partition_slice<T: Coord>(tags: &[Tag], rel: Ger, scene: &Scene<T>) -> Vec<TaggedSet> {
    let mut uf = UnionFind::new(tags.len());
    match rel {
        Ger::HorizAligned | Ger::VertAligned => {
            let axis = if rel == Ger::HorizAligned {
                Axis::Horizontal
            } else {
                Axis::Vertical
            };
            let mut first: HashMap<u16, usize> = HashMap::new();
            for (i, &t) in tags.iter().enumerate() {
                for s in slots(t, axis, scene) {
                    let j = *first.entry(s).or_insert(i);
                    uf.union(i, j);
                }
            }
        }
        Ger::Near => {
            let r = near_radius(scene) as i32;
            let mut by_cell: HashMap<Cell, Vec<usize>> = HashMap::new();
            let cells: Vec<Vec<Cell>> = tags.iter().map(|&t| coarse_cells(t, scene)).collect();
            for (i, cs) in cells.iter().enumerate() {
                for c in cs {
                    by_cell.entry(*c).or_default().push(i);
                }
            }
            for (i, cs) in cells.iter().enumerate() {
                for c in cs {
                    for di in -r..=r {
                        for dj in -r..=r {
                            let (x, y) = (i32::from(c.i) + di, i32::from(c.j) + dj);
                            if x < 0 || y < 0 {
                                continue;
                            }
                            if let Some(others) = by_cell.get(&Cell::new(x as u16, y as u16)) {
                                for &j in others {
                                    uf.union(i, j);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ger::Connected => {
            let tiny = scene.tiny();
            let bucket_size = if tiny > T::zero() { tiny } else { T::one() };
            let key = |p: Point<T>| {
                (
                    (p.x / bucket_size).floor().to_i64().unwrap_or(0),
                    (p.y / bucket_size).floor().to_i64().unwrap_or(0),
                )
            };
            let mut buckets: HashMap<(i64, i64), Vec<Bucketed<T>>> = HashMap::new();
            let ends: Vec<Vec<Point<T>>> = tags.iter().map(|&t| endpoints(t, scene)).collect();
            for (i, ps) in ends.iter().enumerate() {
                for &p in ps {
                    buckets.entry(key(p)).or_default().push((i, p));
                }
            }
            for (i, ps) in ends.iter().enumerate() {
                for &p in ps {
                    let (kx, ky) = key(p);
                    for dx in -1..=1 {
                        for dy in -1..=1 {
                            if let Some(others) = buckets.get(&(kx + dx, ky + dy)) {
                                for &(j, q) in others {
                                    if p.distance(q) <= tiny {
                                        uf.union(i, j);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ger::SameType => {
            let mut by_sig: HashMap<String, Vec<usize>> = HashMap::new();
            for (i, &t) in tags.iter().enumerate() {
                by_sig.entry(scene.kind_signature(t)).or_default().push(i);
            }
            for members in by_sig.values() {
                for (k, &i) in members.iter().enumerate() {
                    for &j in &members[k + 1..] {
                        if same_type_pair(tags[i], tags[j], scene) {
                            uf.union(i, j);
                        }
                    }
                }
            }
        }
    }
    groups_of(tags, uf)
}

/// Maximal sets of `objects` under `rel`. Alignment uses the index projections.
pub fn ger_partition<T: Coord>(objects: &TaggedSet, rel: Ger, scene: &Scene<T>) -> Vec<TaggedSet> {
    match rel {
        Ger::HorizAligned => scene
            .index()
            .aligned_partition(objects, Axis::Horizontal, scene.config().align_level),
        Ger::VertAligned => scene
            .index()
            .aligned_partition(objects, Axis::Vertical, scene.config().align_level),
        _ => ger_partition_slice(objects.as_slice(), rel, scene),
    }
}

/// Common refinement: two elements share a group iff they share one in every
/// input partition.
pub fn refine(universe: &TaggedSet, partitions: &[Vec<TaggedSet>]) -> Vec<TaggedSet> {
    let mut label: HashMap<Tag, Vec<usize>> = universe.iter().map(|t| (t, Vec::new())).collect();
    for p in partitions {
        for (g, group) in p.iter().enumerate() {
            for t in group.iter() {
                if let Some(l) = label.get_mut(&t) {
                    l.push(g);
                }
            }
        }
    }
    let mut by_label: HashMap<Vec<usize>, Vec<Tag>> = HashMap::new();
    for t in universe.iter() {
        by_label
            .entry(label.remove(&t).unwrap_or_default())
            .or_default()
            .push(t);
    }
    let mut out: Vec<TaggedSet> = by_label.into_values().map(TaggedSet::from_tags).collect();
    out.sort_by_key(|g| g.first());
    out
}
