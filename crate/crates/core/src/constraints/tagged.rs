//! Sets of graphical objects keyed by tag, iterated in ascending tag order.

use std::fmt;

use crate::geometry::Tag;

/// Sorted, duplicate-free tag set. Intersection and union are linear merges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TaggedSet {
    tags: Vec<Tag>,
}

impl TaggedSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_tags<I: IntoIterator<Item = Tag>>(tags: I) -> Self {
        let mut tags: Vec<Tag> = tags.into_iter().collect();
        tags.sort_unstable();
        tags.dedup();
        Self { tags }
    }

    /// Caller guarantees `tags` is strictly ascending.
    pub(crate) fn from_sorted(tags: Vec<Tag>) -> Self {
        debug_assert!(tags.windows(2).all(|w| w[0] < w[1]));
        Self { tags }
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn contains(&self, tag: Tag) -> bool {
        self.tags.binary_search(&tag).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Tag> + '_ {
        self.tags.iter().copied()
    }

    pub fn as_slice(&self) -> &[Tag] {
        &self.tags
    }

    pub fn first(&self) -> Option<Tag> {
        self.tags.first().copied()
    }

    pub fn insert(&mut self, tag: Tag) -> bool {
        match self.tags.binary_search(&tag) {
            Ok(_) => false,
            Err(pos) => {
                self.tags.insert(pos, tag);
                true
            }
        }
    }

    pub fn remove(&mut self, tag: Tag) -> bool {
        match self.tags.binary_search(&tag) {
            Ok(pos) => {
                self.tags.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn retain(&mut self, f: impl FnMut(&Tag) -> bool) {
        self.tags.retain(f);
    }

    pub fn filter(&self, mut f: impl FnMut(Tag) -> bool) -> Self {
        Self {
            tags: self.tags.iter().copied().filter(|t| f(*t)).collect(),
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.intersect_counted(other).0
    }

    /// Intersection plus the number of element visits the merge made
    /// (always at most `self.len() + other.len()`).
    pub fn intersect_counted(&self, other: &Self) -> (Self, usize) {
        let (a, b) = (&self.tags, &other.tags);
        let (mut i, mut j, mut visits) = (0, 0, 0);
        let mut out = Vec::with_capacity(a.len().min(b.len()));
        while i < a.len() && j < b.len() {
            visits += 1;
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        (Self { tags: out }, visits)
    }

    pub fn union(&self, other: &Self) -> Self {
        let (a, b) = (&self.tags, &other.tags);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self { tags: out }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.filter(|t| !other.contains(t))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.intersect(other).len() == self.len()
    }
}

impl FromIterator<Tag> for TaggedSet {
    fn from_iter<I: IntoIterator<Item = Tag>>(iter: I) -> Self {
        Self::from_tags(iter)
    }
}

impl<'a> IntoIterator for &'a TaggedSet {
    type Item = Tag;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, Tag>>;

    fn into_iter(self) -> Self::IntoIter {
        self.tags.iter().copied()
    }
}

impl fmt::Display for TaggedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, t) in self.tags.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", t.0)?;
        }
        f.write_str("}")
    }
}
