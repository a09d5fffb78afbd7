//! All graphical objects of one diagram: primitives, line endpoints and
//! derived objects, together with their spatial index.

use std::collections::HashMap;

use thiserror::Error;

use crate::config::Config;
use crate::constraints::eval::Value;
use crate::constraints::TaggedSet;
use crate::geometry::{
    CharacteristicLengths, Coord, GeometryError, Point, Primitive, PrimitiveKind, Rect, Shape, SizeRules, Tag,
};
use crate::grammar::Symbol;
use crate::spatial::{IndexError, SpatialIndex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SceneError {
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("primitive tags must be 0..{expected} in order; found {found} at position {position}")]
    TagOrder {
        expected: usize,
        found: Tag,
        position: usize,
    },
}

/// Constituents of a derived object.
#[derive(Debug, Clone, PartialEq)]
pub enum Members {
    /// Ordinary rule: one entry per declared constituent, `None` when null.
    Tuple(Vec<(Symbol, Option<Tag>)>),
    /// Set rule: the elements.
    Set(TaggedSet),
}

impl Members {
    /// Non-null constituent tags in declaration (or ascending) order.
    pub fn tags(&self) -> Vec<Tag> {
        match self {
            Members::Tuple(items) => items.iter().filter_map(|(_, t)| *t).collect(),
            Members::Set(set) => set.iter().collect(),
        }
    }

    pub fn get(&self, name: &Symbol) -> Option<Option<Tag>> {
        match self {
            Members::Tuple(items) => items.iter().find(|(n, _)| n == name).map(|(_, t)| *t),
            Members::Set(_) => None,
        }
    }

    fn key(&self) -> Vec<Option<Tag>> {
        match self {
            Members::Tuple(items) => items.iter().map(|(_, t)| *t).collect(),
            Members::Set(set) => set.iter().map(Some).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedObject<T> {
    pub tag: Tag,
    pub type_name: Symbol,
    /// Index of the producing rule in the grammar.
    pub rule: usize,
    pub members: Members,
    pub bbox: Rect<T>,
    pub slots: Vec<(Symbol, Value<T>)>,
    /// Primitive leaves of the constituent tree.
    pub leaves: TaggedSet,
}

impl<T> DerivedObject<T> {
    pub fn slot(&self, name: &str) -> Option<&Value<T>> {
        self.slots.iter().find(|(n, _)| n.is(name)).map(|(_, v)| v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Object<T> {
    Primitive(Primitive<T>),
    Endpoint { line: Tag, point: Point<T> },
    Derived(DerivedObject<T>),
}

#[derive(Debug, Clone)]
pub struct Scene<T> {
    objects: Vec<Object<T>>,
    index: SpatialIndex<T>,
    lengths: CharacteristicLengths<T>,
    config: Config,
    size_rules: SizeRules,
    tiny: T,
    very_long: T,
    primitives: usize,
    base: TaggedSet,
    endpoints_of: HashMap<Tag, [Tag; 2]>,
    derived_keys: HashMap<(String, Vec<Option<Tag>>), Tag>,
}

impl<T: Coord> Scene<T> {
    /// Indexes a normalized diagram. Primitive tags must be `0..N` in order.
    pub fn new(primitives: Vec<Primitive<T>>, config: Config) -> Result<Self, SceneError> {
        for (i, p) in primitives.iter().enumerate() {
            if p.tag.index() != i {
                return Err(SceneError::TagOrder {
                    expected: primitives.len(),
                    found: p.tag,
                    position: i,
                });
            }
        }
        let index = SpatialIndex::build(&primitives, config.depth)?;
        let lengths = if primitives.is_empty() {
            CharacteristicLengths {
                h: T::one(),
                w: T::one(),
            }
        } else {
            crate::geometry::characteristic_lengths(&primitives)?
        };
        let cell = index.cell_size(index.finest_level());
        let tiny = match config.tiny {
            Some(v) => T::lit(v),
            None => (lengths.h / T::lit(2.0)).max(cell * T::lit(2.0)),
        };
        let very_long = match config.very_long {
            Some(v) => T::lit(v),
            None => lengths.w / T::lit(2.0),
        };
        let primitive_count = primitives.len();
        let mut objects: Vec<Object<T>> = primitives.into_iter().map(Object::Primitive).collect();
        let mut endpoints_of: HashMap<Tag, [Tag; 2]> = HashMap::new();
        for e in index.endpoints() {
            debug_assert_eq!(e.tag.index(), objects.len());
            objects.push(Object::Endpoint {
                line: e.line,
                point: e.point,
            });
            endpoints_of
                .entry(e.line)
                .and_modify(|pair| pair[1] = e.tag)
                .or_insert([e.tag, e.tag]);
        }
        let base = TaggedSet::from_tags((0..objects.len() as u32).map(Tag));
        Ok(Self {
            objects,
            index,
            lengths,
            size_rules: config.size_rules(),
            config,
            tiny,
            very_long,
            primitives: primitive_count,
            base,
            endpoints_of,
            derived_keys: HashMap::new(),
        })
    }

    pub fn index(&self) -> &SpatialIndex<T> {
        &self.index
    }

    pub fn lengths(&self) -> CharacteristicLengths<T> {
        self.lengths
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn size_rules(&self) -> &SizeRules {
        &self.size_rules
    }

    pub fn tiny(&self) -> T {
        self.tiny
    }

    pub fn very_long(&self) -> T {
        self.very_long
    }

    pub fn angle_tan(&self) -> T {
        self.size_rules.angle_tan()
    }

    pub fn primitive_count(&self) -> usize {
        self.primitives
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Primitives and endpoint objects: the context a parse starts from.
    pub fn base_context(&self) -> &TaggedSet {
        &self.base
    }

    pub fn object(&self, tag: Tag) -> Option<&Object<T>> {
        self.objects.get(tag.index())
    }

    pub fn primitive(&self, tag: Tag) -> Option<&Primitive<T>> {
        match self.object(tag)? {
            Object::Primitive(p) => Some(p),
            _ => None,
        }
    }

    pub fn primitives(&self) -> impl Iterator<Item = &Primitive<T>> {
        self.objects[..self.primitives].iter().filter_map(|o| match o {
            Object::Primitive(p) => Some(p),
            _ => None,
        })
    }

    pub fn derived(&self, tag: Tag) -> Option<&DerivedObject<T>> {
        match self.object(tag)? {
            Object::Derived(d) => Some(d),
            _ => None,
        }
    }

    pub fn derived_objects(&self) -> impl Iterator<Item = &DerivedObject<T>> {
        self.objects.iter().filter_map(|o| match o {
            Object::Derived(d) => Some(d),
            _ => None,
        })
    }

    /// Endpoint object tags of a line primitive.
    pub fn endpoint_objects(&self, line: Tag) -> Option<[Tag; 2]> {
        self.endpoints_of.get(&line).copied()
    }

    pub fn bbox(&self, tag: Tag) -> Option<Rect<T>> {
        match self.object(tag)? {
            Object::Primitive(p) => Some(p.bbox()),
            Object::Endpoint { point, .. } => Some(Rect::new(*point, *point)),
            Object::Derived(d) => Some(d.bbox),
        }
    }

    /// Primitive leaves; an endpoint object is its own leaf.
    pub fn leaves(&self, tag: Tag) -> TaggedSet {
        match self.object(tag) {
            Some(Object::Derived(d)) => d.leaves.clone(),
            Some(_) => TaggedSet::from_tags([tag]),
            None => TaggedSet::new(),
        }
    }

    /// Leaves plus the endpoint objects of leaf lines.
    pub fn parts(&self, tag: Tag) -> TaggedSet {
        let leaves = self.leaves(tag);
        let mut extra = Vec::new();
        for l in leaves.iter() {
            if let Some(pair) = self.endpoint_objects(l) {
                extra.extend(pair);
            }
        }
        leaves.union(&TaggedSet::from_tags(extra))
    }

    /// Geometry of a primitive, or of the single primitive leaf of a derived object.
    pub fn shape(&self, tag: Tag) -> Option<&Shape<T>> {
        match self.object(tag)? {
            Object::Primitive(p) => Some(&p.shape),
            Object::Derived(d) if d.leaves.len() == 1 => self.shape(d.leaves.first()?),
            _ => None,
        }
    }

    pub fn is_kind(&self, tag: Tag, kind: PrimitiveKind) -> bool {
        self.primitive(tag).is_some_and(|p| p.kind() == kind)
    }

    pub fn type_name(&self, tag: Tag) -> String {
        match self.object(tag) {
            Some(Object::Primitive(p)) => p.kind().name().to_string(),
            Some(Object::Endpoint { .. }) => "Endpoint".to_string(),
            Some(Object::Derived(d)) => d.type_name.to_string(),
            None => "?".to_string(),
        }
    }

    /// Kind used by `same-type`: a derived object with one leaf takes the
    /// leaf's kind.
    pub fn kind_signature(&self, tag: Tag) -> String {
        match self.object(tag) {
            Some(Object::Derived(d)) if d.leaves.len() == 1 => match d.leaves.first() {
                Some(l) => self.kind_signature(l),
                None => d.type_name.key(),
            },
            Some(Object::Derived(d)) => d.type_name.key(),
            Some(Object::Primitive(p)) => p.kind().name().to_ascii_lowercase(),
            Some(Object::Endpoint { .. }) => "endpoint".to_string(),
            None => String::new(),
        }
    }

    /// Arc length: lines and curves directly, derived objects as the sum over
    /// their constituents.
    pub fn a_length(&self, tag: Tag) -> Option<T> {
        match self.object(tag)? {
            Object::Primitive(p) => p.shape.a_length().ok(),
            Object::Derived(d) => {
                let mut total = T::zero();
                for m in d.members.tags() {
                    total = total + self.a_length(m)?;
                }
                Some(total)
            }
            Object::Endpoint { .. } => None,
        }
    }

    /// First and last points of a line or curve (possibly wrapped).
    pub fn curve_endpoints(&self, tag: Tag) -> Option<(Point<T>, Point<T>)> {
        self.shape(tag)?.endpoints()
    }

    pub fn touches(&self, a: Tag, b: Tag) -> bool {
        let (Ok(ca), Ok(cb)) = (self.index.cells_of(a), self.index.cells_of(b)) else {
            return false;
        };
        if !ca.intersects(cb) {
            return false;
        }
        !self.config.strict_touch
            || match (self.bbox(a), self.bbox(b)) {
                (Some(x), Some(y)) => x.intersects(y),
                _ => false,
            }
    }

    /// Looks up a derived object by type and constituents.
    pub fn find_derived(&self, type_name: &Symbol, members: &Members) -> Option<Tag> {
        self.derived_keys.get(&(type_name.key(), members.key())).copied()
    }

    /// Creates and indexes a derived object unless one with the same type and
    /// constituents exists. Returns the tag and whether it was created.
    pub fn install_derived(
        &mut self,
        type_name: &Symbol,
        rule: usize,
        members: Members,
    ) -> Result<(Tag, bool), SceneError> {
        if let Some(tag) = self.find_derived(type_name, &members) {
            return Ok((tag, false));
        }
        let parts = members.tags();
        let tag = Tag(self.objects.len() as u32);
        let mut bbox: Option<Rect<T>> = None;
        let mut leaves = TaggedSet::new();
        for &p in &parts {
            let b = self.bbox(p).ok_or(IndexError::UnknownTag(p))?;
            bbox = Some(bbox.map_or(b, |u| u.union(b)));
            leaves = leaves.union(&self.leaves(p));
        }
        let bbox = bbox.ok_or(IndexError::EmptyComposite(tag))?;
        self.index.install_composite(tag, &parts, bbox)?;
        self.derived_keys.insert((type_name.key(), members.key()), tag);
        self.objects.push(Object::Derived(DerivedObject {
            tag,
            type_name: type_name.clone(),
            rule,
            members,
            bbox,
            slots: Vec::new(),
            leaves,
        }));
        Ok((tag, true))
    }

    pub(crate) fn set_slots(&mut self, tag: Tag, slots: Vec<(Symbol, Value<T>)>) {
        if let Some(Object::Derived(d)) = self.objects.get_mut(tag.index()) {
            d.slots = slots;
        }
    }

    /// Short label for traces: `p3` for primitives, `e7` for endpoints,
    /// `Type#12` for derived objects.
    pub fn label(&self, tag: Tag) -> String {
        match self.object(tag) {
            Some(Object::Primitive(p)) => p.display_id(),
            Some(Object::Endpoint { .. }) => format!("e{}", tag.0),
            Some(Object::Derived(d)) => format!("{}#{}", d.type_name, tag.0),
            None => format!("?{}", tag.0),
        }
    }
}
