//! Pyramidal occupancy index over the normalized `2^13 x 2^13` square.
//!
//! Level `n` is a `2^n x 2^n` grid; the finest level (64 x 64 by default)
//! is rasterized from geometry and every coarser level is its coarsening.
//! Each level also keeps X and Y projections (the union of a column or row)
//! and the index keeps the inverse map from object to finest cells.

use thiserror::Error;

use crate::constraints::tagged::TaggedSet;
use crate::geometry::{Coord, Point, Primitive, Rect, Shape, Tag, GRID_EXTENT};
use crate::union_find::UnionFind;

pub const DEFAULT_DEPTH: usize = 7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IndexError {
    #[error("unnormalized input: object {tag} has coordinate ({x}, {y}) outside [0, 8192)")]
    Unnormalized { tag: Tag, x: f64, y: f64 },
    #[error("object {0} is already installed")]
    DuplicateTag(Tag),
    #[error("object {0} is not installed")]
    UnknownTag(Tag),
    #[error("derived object {0} has no installed constituents")]
    EmptyComposite(Tag),
    #[error("pyramid depth must be between 1 and 14, got {0}")]
    BadDepth(usize),
}

/// Column `i`, row `j` of a grid level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub i: u16,
    pub j: u16,
}

impl Cell {
    pub fn new(i: u16, j: u16) -> Self {
        Self { i, j }
    }

    fn coarsen(self, shift: u32) -> Self {
        Self::new(self.i >> shift, self.j >> shift)
    }
}

/// Sorted set of cells at one level.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CellSet {
    pub level: u8,
    cells: Vec<Cell>,
}

impl CellSet {
    pub fn new(level: u8, cells: impl IntoIterator<Item = Cell>) -> Self {
        let mut cells: Vec<Cell> = cells.into_iter().collect();
        cells.sort_unstable();
        cells.dedup();
        Self { level, cells }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cells.binary_search(&c).is_ok()
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        debug_assert_eq!(self.level, other.level);
        CellSet::new(self.level, self.cells.iter().chain(&other.cells).copied())
    }

    pub fn intersects(&self, other: &CellSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.cells.len() && j < other.cells.len() {
            match self.cells[i].cmp(&other.cells[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// The same footprint at a coarser `level`.
    pub fn coarsen(&self, level: u8) -> CellSet {
        assert!(level <= self.level);
        let shift = u32::from(self.level - level);
        CellSet::new(level, self.cells.iter().map(|c| c.coarsen(shift)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
    Above,
    Below,
}

impl Direction {
    pub fn opposite(self) -> Self {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
            Direction::Above => Direction::Below,
            Direction::Below => Direction::Above,
        }
    }
}

/// Whether `cand` lies beyond `anchor` in `dir` (bbox-disjoint, gap >= 0),
/// optionally restricted to the anchor's perpendicular extent.
pub fn is_beyond<T: Coord>(anchor: Rect<T>, cand: Rect<T>, dir: Direction, strip: bool) -> bool {
    let beyond = match dir {
        Direction::Right => cand.min.x >= anchor.max.x,
        Direction::Left => cand.max.x <= anchor.min.x,
        Direction::Above => cand.min.y >= anchor.max.y,
        Direction::Below => cand.max.y <= anchor.min.y,
    };
    if !beyond {
        return false;
    }
    if !strip {
        return true;
    }
    match dir {
        Direction::Left | Direction::Right => cand.min.y <= anchor.max.y && cand.max.y >= anchor.min.y,
        Direction::Above | Direction::Below => cand.min.x <= anchor.max.x && cand.max.x >= anchor.min.x,
    }
}

/// Gap between `anchor` and `cand` along `dir` (meaningful when `cand` is beyond).
pub fn directional_gap<T: Coord>(anchor: Rect<T>, cand: Rect<T>, dir: Direction) -> T {
    match dir {
        Direction::Right => cand.min.x - anchor.max.x,
        Direction::Left => anchor.min.x - cand.max.x,
        Direction::Above => cand.min.y - anchor.max.y,
        Direction::Below => anchor.min.y - cand.max.y,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Grouping by shared row (Y projection).
    Horizontal,
    /// Grouping by shared column (X projection).
    Vertical,
}

/// Instrumentation for directional queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QueryCost {
    pub cells_inspected: usize,
}

#[derive(Debug, Clone, PartialEq)]
struct Entry<T> {
    bbox: Rect<T>,
    cells: CellSet,
    anchors: Vec<Point<T>>,
}

/// Endpoint of a line, installed as its own point object.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointRecord<T> {
    pub tag: Tag,
    pub line: Tag,
    pub point: Point<T>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelStats {
    pub level: usize,
    pub grid: usize,
    pub occupied_cells: usize,
    pub total_entries: usize,
    pub max_per_cell: usize,
    /// `histogram[k]` = number of cells holding exactly `k` objects (k >= 1).
    pub histogram: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexStats {
    pub objects: usize,
    pub inverse_cells: usize,
    pub levels: Vec<LevelStats>,
}

#[derive(Debug, Clone)]
pub struct SpatialIndex<T> {
    depth: usize,
    grids: Vec<Vec<Vec<Tag>>>,
    xproj: Vec<Vec<Vec<Tag>>>,
    yproj: Vec<Vec<Vec<Tag>>>,
    entries: Vec<Option<Entry<T>>>,
    endpoints: Vec<EndpointRecord<T>>,
    installed: usize,
}

fn insert_sorted(v: &mut Vec<Tag>, tag: Tag) {
    if let Err(pos) = v.binary_search(&tag) {
        v.insert(pos, tag);
    }
}

impl<T: Coord> SpatialIndex<T> {
    pub fn new(depth: usize) -> Result<Self, IndexError> {
        if depth == 0 || depth > 14 {
            return Err(IndexError::BadDepth(depth));
        }
        let grids = (0..depth).map(|n| vec![Vec::new(); 1 << (2 * n)]).collect();
        let proj = || (0..depth).map(|n| vec![Vec::new(); 1 << n]).collect();
        Ok(Self {
            depth,
            grids,
            xproj: proj(),
            yproj: proj(),
            entries: Vec::new(),
            endpoints: Vec::new(),
            installed: 0,
        })
    }

    /// Installs every primitive plus two point objects per line (its endpoints).
    /// Endpoint tags follow the largest primitive tag, in primitive order.
    pub fn build(diagram: &[Primitive<T>], depth: usize) -> Result<Self, IndexError> {
        let mut index = Self::new(depth)?;
        for p in diagram {
            index.install_shape(p.tag, &p.shape)?;
        }
        let mut next = diagram.iter().map(|p| p.tag.0 + 1).max().unwrap_or(0);
        for p in diagram {
            if let Shape::Line { p1, p2 } = p.shape {
                for point in [p1, p2] {
                    let tag = Tag(next);
                    next += 1;
                    index.install_point(tag, point)?;
                    index.endpoints.push(EndpointRecord {
                        tag,
                        line: p.tag,
                        point,
                    });
                }
            }
        }
        Ok(index)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn finest_level(&self) -> usize {
        self.depth - 1
    }

    pub fn grid_size(&self, level: usize) -> usize {
        1 << level
    }

    pub fn cell_size(&self, level: usize) -> T {
        T::lit(GRID_EXTENT / (1u64 << level) as f64)
    }

    pub fn len(&self) -> usize {
        self.installed
    }

    pub fn is_empty(&self) -> bool {
        self.installed == 0
    }

    pub fn endpoints(&self) -> &[EndpointRecord<T>] {
        &self.endpoints
    }

    pub fn contains(&self, tag: Tag) -> bool {
        self.entry(tag).is_some()
    }

    pub fn installed(&self) -> TaggedSet {
        TaggedSet::from_sorted(
            self.entries
                .iter()
                .enumerate()
                .filter(|(_, e)| e.is_some())
                .map(|(i, _)| Tag(i as u32))
                .collect(),
        )
    }

    fn entry(&self, tag: Tag) -> Option<&Entry<T>> {
        self.entries.get(tag.index()).and_then(Option::as_ref)
    }

    pub fn bbox_of(&self, tag: Tag) -> Option<Rect<T>> {
        self.entry(tag).map(|e| e.bbox)
    }

    /// Points used for alignment: line endpoints, else the bbox center.
    pub fn alignment_points(&self, tag: Tag) -> Option<&[Point<T>]> {
        self.entry(tag).map(|e| e.anchors.as_slice())
    }

    pub fn cells_of(&self, tag: Tag) -> Result<&CellSet, IndexError> {
        self.entry(tag).map(|e| &e.cells).ok_or(IndexError::UnknownTag(tag))
    }

    fn axis_index(&self, v: T, level: usize) -> u16 {
        let n = self.grid_size(level);
        let k = (v / self.cell_size(level)).floor();
        let k = k.to_i64().unwrap_or(0).clamp(0, n as i64 - 1);
        k as u16
    }

    pub fn cell_of_point(&self, p: Point<T>, level: usize) -> Cell {
        Cell::new(self.axis_index(p.x, level), self.axis_index(p.y, level))
    }

    /// Finest-level cells the geometry passes through. Circles and text use
    /// their bbox footprint.
    pub fn rasterize(&self, shape: &Shape<T>) -> CellSet {
        let level = self.finest_level();
        let mut cells = Vec::new();
        match shape {
            Shape::Circle { .. } | Shape::Text { .. } => {
                self.rect_cells(shape.bbox(), level, &mut cells);
            }
            _ => {
                let pl = shape.polyline();
                for w in pl.windows(2) {
                    self.segment_cells(w[0], w[1], level, &mut cells);
                }
            }
        }
        CellSet::new(level as u8, cells)
    }

    fn rect_cells(&self, r: Rect<T>, level: usize, out: &mut Vec<Cell>) {
        let lo = self.cell_of_point(r.min, level);
        let hi = self.cell_of_point(r.max, level);
        for i in lo.i..=hi.i {
            for j in lo.j..=hi.j {
                out.push(Cell::new(i, j));
            }
        }
    }

    /// Column sweep: for each column the segment crosses, the rows covered by
    /// the part of the segment inside that column.
    fn segment_cells(&self, a: Point<T>, b: Point<T>, level: usize, out: &mut Vec<Cell>) {
        let (a, b) = if a.x <= b.x { (a, b) } else { (b, a) };
        let cs = self.cell_size(level);
        let c0 = self.axis_index(a.x, level);
        let c1 = self.axis_index(b.x, level);
        let dx = b.x - a.x;
        for c in c0..=c1 {
            let (ya, yb) = if dx > T::zero() {
                let left = a.x.max(T::lit(f64::from(c)) * cs);
                let right = b.x.min(T::lit(f64::from(c) + 1.0) * cs);
                let y_at = |x: T| a.y + (x - a.x) * (b.y - a.y) / dx;
                (y_at(left), y_at(right))
            } else {
                (a.y, b.y)
            };
            let r0 = self.axis_index(ya.min(yb), level);
            let r1 = self.axis_index(ya.max(yb), level);
            for r in r0..=r1 {
                out.push(Cell::new(c, r));
            }
        }
    }

    fn check_range(&self, tag: Tag, shape: &Shape<T>) -> Result<(), IndexError> {
        let limit = T::lit(GRID_EXTENT);
        let b = shape.bbox();
        for p in [b.min, b.max] {
            if !(p.x >= T::zero() && p.x < limit && p.y >= T::zero() && p.y < limit) {
                return Err(IndexError::Unnormalized {
                    tag,
                    x: p.x.as_f64(),
                    y: p.y.as_f64(),
                });
            }
        }
        Ok(())
    }

    pub fn install_shape(&mut self, tag: Tag, shape: &Shape<T>) -> Result<CellSet, IndexError> {
        self.check_range(tag, shape)?;
        let cells = self.rasterize(shape);
        let anchors = match shape.endpoints() {
            Some((p1, p2)) if matches!(shape, Shape::Line { .. }) => vec![p1, p2],
            _ => vec![shape.bbox().center()],
        };
        self.insert_entry(
            tag,
            Entry {
                bbox: shape.bbox(),
                cells: cells.clone(),
                anchors,
            },
        )?;
        Ok(cells)
    }

    pub fn install_point(&mut self, tag: Tag, p: Point<T>) -> Result<CellSet, IndexError> {
        let probe = Shape::Circle {
            center: p,
            radius: T::zero(),
        };
        self.check_range(tag, &probe)?;
        let level = self.finest_level();
        let cells = CellSet::new(level as u8, [self.cell_of_point(p, level)]);
        self.insert_entry(
            tag,
            Entry {
                bbox: Rect::new(p, p),
                cells: cells.clone(),
                anchors: vec![p],
            },
        )?;
        Ok(cells)
    }

    /// Installs a higher-level object on the union of its parts' cells; no
    /// geometry is rescanned.
    pub fn install_composite(&mut self, tag: Tag, parts: &[Tag], bbox: Rect<T>) -> Result<CellSet, IndexError> {
        if self.contains(tag) {
            return Err(IndexError::DuplicateTag(tag));
        }
        let mut cells = CellSet::new(self.finest_level() as u8, []);
        for &p in parts {
            cells = cells.union(self.cells_of(p)?);
        }
        if cells.is_empty() {
            return Err(IndexError::EmptyComposite(tag));
        }
        self.insert_entry(
            tag,
            Entry {
                bbox,
                cells: cells.clone(),
                anchors: vec![bbox.center()],
            },
        )?;
        Ok(cells)
    }

    fn insert_entry(&mut self, tag: Tag, entry: Entry<T>) -> Result<(), IndexError> {
        if self.contains(tag) {
            return Err(IndexError::DuplicateTag(tag));
        }
        for level in 0..self.depth {
            let coarse = entry.cells.coarsen(level as u8);
            let n = self.grid_size(level);
            let mut cols: Vec<u16> = Vec::new();
            let mut rows: Vec<u16> = Vec::new();
            for c in coarse.cells() {
                insert_sorted(&mut self.grids[level][c.j as usize * n + c.i as usize], tag);
                cols.push(c.i);
                rows.push(c.j);
            }
            cols.sort_unstable();
            cols.dedup();
            rows.sort_unstable();
            rows.dedup();
            for i in cols {
                insert_sorted(&mut self.xproj[level][i as usize], tag);
            }
            for j in rows {
                insert_sorted(&mut self.yproj[level][j as usize], tag);
            }
        }
        if self.entries.len() <= tag.index() {
            self.entries.resize(tag.index() + 1, None);
        }
        self.entries[tag.index()] = Some(entry);
        self.installed += 1;
        Ok(())
    }

    pub fn cell_contents(&self, level: usize, cell: Cell) -> &[Tag] {
        let n = self.grid_size(level);
        &self.grids[level][cell.j as usize * n + cell.i as usize]
    }

    /// Union of column `i` at `level`.
    pub fn xproj(&self, level: usize, i: usize) -> &[Tag] {
        &self.xproj[level][i]
    }

    /// Union of row `j` at `level`.
    pub fn yproj(&self, level: usize, j: usize) -> &[Tag] {
        &self.yproj[level][j]
    }

    fn gather(&self, level: usize, cells: impl IntoIterator<Item = Cell>) -> TaggedSet {
        let mut out: Vec<Tag> = Vec::new();
        for c in cells {
            out.extend_from_slice(self.cell_contents(level, c));
        }
        TaggedSet::from_tags(out)
    }

    pub fn objects_in_cells(&self, cells: &CellSet) -> TaggedSet {
        self.gather(cells.level as usize, cells.cells().iter().copied())
    }

    /// Everything sharing a finest-level cell with `anchor`, minus `anchor`.
    pub fn objects_touching(&self, anchor: Tag) -> Result<TaggedSet, IndexError> {
        let cells = self.cells_of(anchor)?;
        let mut out = self.objects_in_cells(cells);
        out.remove(anchor);
        Ok(out)
    }

    /// Contents of the finest cell containing `p`.
    pub fn objects_at_point(&self, p: Point<T>) -> TaggedSet {
        let level = self.finest_level();
        TaggedSet::from_tags(self.cell_contents(level, self.cell_of_point(p, level)).iter().copied())
    }

    /// Objects occupying a cell within Chebyshev distance `radius` (in cells at
    /// `level`) of one of `anchor`'s cells, minus `anchor`.
    pub fn objects_near(&self, anchor: Tag, level: usize, radius: usize) -> Result<TaggedSet, IndexError> {
        let coarse = self.cells_of(anchor)?.coarsen(level as u8);
        let n = self.grid_size(level) as i64;
        let r = radius as i64;
        let mut dilated = Vec::new();
        for c in coarse.cells() {
            for di in -r..=r {
                for dj in -r..=r {
                    let (i, j) = (i64::from(c.i) + di, i64::from(c.j) + dj);
                    if (0..n).contains(&i) && (0..n).contains(&j) {
                        dilated.push(Cell::new(i as u16, j as u16));
                    }
                }
            }
        }
        let mut out = self.objects_in_cells(&CellSet::new(level as u8, dilated));
        out.remove(anchor);
        Ok(out)
    }

    /// Objects whose bbox is closed-contained in `rect`.
    pub fn objects_within(&self, rect: Rect<T>) -> TaggedSet {
        let level = self.finest_level();
        let mut cells = Vec::new();
        self.rect_cells(rect, level, &mut cells);
        let candidates = self.gather(level, cells);
        candidates.filter(|t| self.bbox_of(t).is_some_and(|b| rect.contains_rect(b)))
    }

    /// All objects strictly beyond `anchor` in `dir`, via a pyramid descent over
    /// one projection: at most two projection cells per level are read.
    pub fn directional_query(
        &self,
        anchor: Tag,
        dir: Direction,
        strip: bool,
    ) -> Result<(TaggedSet, QueryCost), IndexError> {
        let bbox = self.bbox_of(anchor).ok_or(IndexError::UnknownTag(anchor))?;
        let (mut set, cost) = self.directional_from_rect(bbox, dir, strip);
        set.remove(anchor);
        Ok((set, cost))
    }

    pub fn directional_from_rect(&self, anchor: Rect<T>, dir: Direction, strip: bool) -> (TaggedSet, QueryCost) {
        let finest = self.finest_level();
        let last = self.grid_size(finest) - 1;
        let (lo, hi, proj) = match dir {
            Direction::Right => (self.axis_index(anchor.max.x, finest) as usize, last, &self.xproj),
            Direction::Left => (0, self.axis_index(anchor.min.x, finest) as usize, &self.xproj),
            Direction::Above => (self.axis_index(anchor.max.y, finest) as usize, last, &self.yproj),
            Direction::Below => (0, self.axis_index(anchor.min.y, finest) as usize, &self.yproj),
        };
        let nodes = dyadic_cover(lo, hi, finest);
        let mut raw: Vec<Tag> = Vec::new();
        for &(level, k) in &nodes {
            raw.extend_from_slice(&proj[level][k]);
        }
        let candidates = TaggedSet::from_tags(raw);
        let out = candidates.filter(|t| self.bbox_of(t).is_some_and(|b| is_beyond(anchor, b, dir, strip)));
        (
            out,
            QueryCost {
                cells_inspected: nodes.len(),
            },
        )
    }

    /// Partition of `objects` into maximal groups whose alignment points share
    /// a projection cell at `level` (rows for horizontal, columns for vertical),
    /// closed transitively. Groups are ordered by smallest tag.
    pub fn aligned_partition(&self, objects: &TaggedSet, axis: Axis, level: usize) -> Vec<TaggedSet> {
        let tags = objects.as_slice();
        let n = self.grid_size(level);
        let mut first_in_slot: Vec<usize> = vec![usize::MAX; n];
        let mut uf = UnionFind::new(tags.len());
        for (idx, &t) in tags.iter().enumerate() {
            let Some(points) = self.alignment_points(t) else {
                continue;
            };
            for &p in points {
                let c = self.cell_of_point(p, level);
                let slot = match axis {
                    Axis::Horizontal => c.j,
                    Axis::Vertical => c.i,
                } as usize;
                if first_in_slot[slot] == usize::MAX {
                    first_in_slot[slot] = idx;
                } else {
                    uf.union(first_in_slot[slot], idx);
                }
            }
        }
        uf.groups()
            .into_iter()
            .map(|g| TaggedSet::from_sorted(g.into_iter().map(|i| tags[i]).collect()))
            .collect()
    }

    pub fn stats(&self) -> IndexStats {
        let inverse_cells = self.entries.iter().flatten().map(|e| e.cells.len()).sum();
        let levels = (0..self.depth)
            .map(|level| {
                let grid = &self.grids[level];
                let max_per_cell = grid.iter().map(Vec::len).max().unwrap_or(0);
                let mut histogram = vec![0; max_per_cell + 1];
                for cell in grid {
                    histogram[cell.len()] += 1;
                }
                histogram[0] = 0;
                LevelStats {
                    level,
                    grid: self.grid_size(level),
                    occupied_cells: grid.iter().filter(|c| !c.is_empty()).count(),
                    total_entries: grid.iter().map(Vec::len).sum(),
                    max_per_cell,
                    histogram,
                }
            })
            .collect();
        IndexStats {
            objects: self.installed,
            inverse_cells,
            levels,
        }
    }
}

/// Minimal set of aligned blocks `(level, index)` covering finest indices
/// `lo..=hi`; at most two blocks per level.
pub fn dyadic_cover(lo: usize, hi: usize, finest: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let (mut l, mut r) = (lo, hi + 1);
    let mut level = finest as isize;
    while l < r && level >= 0 {
        if l & 1 == 1 {
            out.push((level as usize, l));
            l += 1;
        }
        if r & 1 == 1 {
            r -= 1;
            out.push((level as usize, r));
        }
        l >>= 1;
        r >>= 1;
        level -= 1;
    }
    out
}
