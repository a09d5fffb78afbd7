mod common;

use std::collections::{BTreeSet, HashMap};

use diagraph::constraints::ger::{ger_partition, ger_partition_slice, refine, Ger};
use diagraph::{Config, Scene, Tag, TaggedSet};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn groups(parts: &[TaggedSet]) -> BTreeSet<Vec<u32>> {
    parts.iter().map(|g| g.iter().map(|t| t.0).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partition_is_connected_components(seed in any::<u64>(), n in 1usize..90, which in 0usize..5) {
        let rel = Ger::ALL[which];
        let mut r = common::rng(seed);
        let prims = common::random_diagram(&mut r, n);
        let objs = common::oracle_objects(&prims);
        let (h, _) = common::lengths(&objs, &prims);
        let scene = Scene::new(prims, Config::default()).unwrap();
        let all = TaggedSet::from_tags((0..n as u32).map(Tag));
        let parts = ger_partition(&all, rel, &scene);

        let flat: Vec<Tag> = parts.iter().flat_map(|g| g.iter()).collect();
        prop_assert_eq!(flat.len(), n);
        prop_assert_eq!(TaggedSet::from_tags(flat), all.clone());

        let mut order: Vec<Tag> = all.iter().collect();
        order.shuffle(&mut r);
        prop_assert_eq!(groups(&ger_partition_slice(&order, rel, &scene)), groups(&parts));

        let want: BTreeSet<Vec<u32>> = common::components(n, |a, b| common::ger_pair(rel.name(), &objs[a], &objs[b], h))
            .into_iter()
            .map(|c| c.into_iter().map(|i| i as u32).collect())
            .collect();
        prop_assert_eq!(groups(&parts), want);
    }

    #[test]
    fn refine_splits_exactly_by_labels(labels in prop::collection::vec(prop::collection::vec(0u8..3, 3), 1..40)) {
        let n = labels.len();
        let universe = TaggedSet::from_tags((0..n as u32).map(Tag));
        let partitions: Vec<Vec<TaggedSet>> = (0..3)
            .map(|p| {
                let mut by: HashMap<u8, Vec<Tag>> = HashMap::new();
                for (i, l) in labels.iter().enumerate() {
                    by.entry(l[p]).or_default().push(Tag(i as u32));
                }
                by.into_values().map(TaggedSet::from_tags).collect()
            })
            .collect();
        let out = refine(&universe, &partitions);
        let mut group_of = vec![usize::MAX; n];
        for (g, set) in out.iter().enumerate() {
            for t in set.iter() {
                prop_assert_eq!(group_of[t.index()], usize::MAX);
                group_of[t.index()] = g;
            }
        }
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(group_of[a] == group_of[b], labels[a] == labels[b]);
            }
        }
    }
}
