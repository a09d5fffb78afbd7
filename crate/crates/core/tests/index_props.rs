mod common;

use std::collections::BTreeSet;

use common::Dir;
use diagraph::geometry::{Point, Tag};
use diagraph::spatial::{dyadic_cover, Axis, Direction};
use diagraph::{Rect, SpatialIndex, TaggedSet};
use proptest::prelude::*;

fn build(seed: u64, n: usize) -> (Vec<common::OObj>, SpatialIndex) {
    let mut r = common::rng(seed);
    let prims = common::random_diagram(&mut r, n);
    let objs = common::oracle_objects(&prims);
    (objs, SpatialIndex::build(&prims, 7).unwrap())
}

fn tags(set: &TaggedSet) -> BTreeSet<u32> {
    set.iter().map(|t| t.0).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rasterized_cells_match_clip_test(seed in any::<u64>(), n in 1usize..120) {
        let (objs, index) = build(seed, n);
        for o in &objs {
            let cells: BTreeSet<(i64, i64)> = index
                .cells_of(Tag(o.tag))
                .unwrap()
                .cells()
                .iter()
                .map(|c| (i64::from(c.i), i64::from(c.j)))
                .collect();
            prop_assert_eq!(&cells, &o.cells, "object {}", o.tag);
        }
    }

    #[test]
    fn touching_is_symmetric_and_exact(seed in any::<u64>(), n in 1usize..120) {
        let (objs, index) = build(seed, n);
        for (a, o) in objs.iter().enumerate() {
            let got = tags(&index.objects_touching(Tag(o.tag)).unwrap());
            prop_assert!(!got.contains(&o.tag));
            prop_assert_eq!(&got, &common::touching(&objs, a));
            for b in &got {
                prop_assert!(tags(&index.objects_touching(Tag(*b)).unwrap()).contains(&o.tag));
            }
        }
    }

    #[test]
    fn directional_matches_brute_force(seed in any::<u64>(), n in 1usize..120, strip in any::<bool>()) {
        let (objs, index) = build(seed, n);
        for (a, o) in objs.iter().enumerate().step_by(3) {
            for (d, dir) in [
                (Dir::Left, Direction::Left),
                (Dir::Right, Direction::Right),
                (Dir::Above, Direction::Above),
                (Dir::Below, Direction::Below),
            ] {
                let (set, cost) = index.directional_query(Tag(o.tag), dir, strip).unwrap();
                prop_assert!(cost.cells_inspected <= 2 * index.depth());
                prop_assert_eq!(tags(&set), common::directional(&objs, a, d, strip));
            }
        }
    }

    #[test]
    fn within_is_closed_containment(
        seed in any::<u64>(),
        n in 1usize..120,
        x in 0.0f64..8000.0,
        y in 0.0f64..8000.0,
        w in 0.0f64..4000.0,
        h in 0.0f64..4000.0,
    ) {
        let (objs, index) = build(seed, n);
        let rect = [x, y, (x + w).min(8191.0), (y + h).min(8191.0)];
        let got = tags(&index.objects_within(Rect::new(Point::new(rect[0], rect[1]), Point::new(rect[2], rect[3]))));
        let want: BTreeSet<u32> = objs
            .iter()
            .filter(|o| o.bbox[0] >= rect[0] && o.bbox[1] >= rect[1] && o.bbox[2] <= rect[2] && o.bbox[3] <= rect[3])
            .map(|o| o.tag)
            .collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn aligned_partition_matches_components(seed in any::<u64>(), n in 1usize..120, keep in 0.1f64..1.0) {
        let (objs, index) = build(seed, n);
        let mut r = common::rng(seed ^ 0x5eed);
        let members: Vec<&common::OObj> = objs.iter().filter(|_| rand::Rng::gen_bool(&mut r, keep)).collect();
        let set = TaggedSet::from_tags(members.iter().map(|o| Tag(o.tag)));
        for (axis, horizontal) in [(Axis::Horizontal, true), (Axis::Vertical, false)] {
            let got: BTreeSet<Vec<u32>> = index
                .aligned_partition(&set, axis, 6)
                .iter()
                .map(|g| g.iter().map(|t| t.0).collect())
                .collect();
            prop_assert_eq!(got, common::aligned(&members, horizontal));
        }
    }

    #[test]
    fn dyadic_cover_is_exact(lo in 0usize..64, len in 0usize..64) {
        let hi = (lo + len).min(63);
        let blocks = dyadic_cover(lo, hi, 6);
        let mut covered = Vec::new();
        for &(level, k) in &blocks {
            let span = 1usize << (6 - level);
            covered.extend(k * span..(k + 1) * span);
        }
        covered.sort();
        prop_assert_eq!(covered, (lo..=hi).collect::<Vec<_>>());
        for level in 0..=6 {
            prop_assert!(blocks.iter().filter(|b| b.0 == level).count() <= 2);
        }
    }
}
