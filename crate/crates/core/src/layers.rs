//! Peeling all convex layers with four hull trees.
//!
//! Tree `k` is built over the input rotated `k` quarter turns clockwise, so
//! its root chain is, in input coordinates, the north-west (`k = 0`),
//! south-west, south-east or north-east part of the current hull. Each
//! iteration removes the four root chains, stitches them into one
//! counterclockwise polygon and marks its points in a shared [`MarkSet`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::geometry::Point;
use crate::hull_tree::{HullTree, ScanCounters};

/// One of the four quarter-turn frames.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quadrant {
    NW,
    SW,
    SE,
    NE,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::NW, Quadrant::SW, Quadrant::SE, Quadrant::NE];

    /// Number of clockwise quarter turns applied by [`Quadrant::forward`].
    pub fn turns(self) -> u32 {
        match self {
            Quadrant::NW => 0,
            Quadrant::SW => 1,
            Quadrant::SE => 2,
            Quadrant::NE => 3,
        }
    }

    /// Input frame to tree frame.
    pub fn forward(self, x: i64, y: i64) -> (i64, i64) {
        rotate_cw(x, y, self.turns())
    }

    /// Tree frame to input frame.
    pub fn inverse(self, x: i64, y: i64) -> (i64, i64) {
        rotate_cw(x, y, (4 - self.turns()) % 4)
    }

    pub fn transform(self, p: &Point) -> Point {
        let (x, y) = self.forward(p.x, p.y);
        Point { id: p.id, x, y }
    }
}

/// `turns` clockwise quarter turns about the origin, `(x, y) -> (y, -x)`.
pub fn rotate_cw(x: i64, y: i64, turns: u32) -> (i64, i64) {
    match turns % 4 {
        0 => (x, y),
        1 => (y, -x),
        2 => (-x, -y),
        _ => (-y, x),
    }
}

/// Which points have been assigned a layer, shared by all four trees.
#[derive(Clone, Debug)]
pub struct MarkSet {
    layer_of: Vec<u32>,
    marked: usize,
}

impl MarkSet {
    const UNSET: u32 = u32::MAX;

    pub fn new(n: usize) -> Self {
        MarkSet { layer_of: vec![Self::UNSET; n], marked: 0 }
    }

    #[inline]
    pub fn is_marked(&self, id: u32) -> bool {
        self.layer_of[id as usize] != Self::UNSET
    }

    /// Marks `id` with 1-based `layer`.
    ///
    /// # Panics
    /// If `id` is already marked.
    pub fn mark(&mut self, id: u32, layer: u32) {
        assert!(!self.is_marked(id), "point {id} marked twice");
        self.layer_of[id as usize] = layer;
        self.marked += 1;
    }

    pub fn layer_of(&self, id: u32) -> Option<u32> {
        let l = self.layer_of[id as usize];
        (l != Self::UNSET).then_some(l)
    }

    pub fn marked_count(&self) -> usize {
        self.marked
    }

    pub fn all_marked(&self) -> bool {
        self.marked == self.layer_of.len()
    }
}

/// How marked points are kept out of later layers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Purge marked runs from every root chain before extracting it.
    #[default]
    Purge,
    /// Extract each root chain and discard its marked points afterwards.
    Literal,
}

/// Runs one closure per item, in any order or concurrently; results come
/// back in item order.
pub trait Schedule {
    fn map<T, R, F>(&self, items: &mut [T], f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(usize, &mut T) -> R + Sync;
}

/// Runs every closure on the calling thread, in order.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Schedule for Sequential {
    fn map<T, R, F>(&self, items: &mut [T], f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(usize, &mut T) -> R + Sync,
    {
        items.iter_mut().enumerate().map(|(i, t)| f(i, t)).collect()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PeelOptions {
    pub mode: Mode,
    /// Stop after this many layers; remaining points get no depth.
    pub max_layers: Option<usize>,
    /// Run the hull-tree validator after every mutation.
    pub validate: bool,
}

/// The convex layers of a point set, outermost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerSet {
    /// Each layer counterclockwise, starting at its lexicographically
    /// smallest `(x, y)` point.
    pub layers: Vec<Vec<Point>>,
    depth: Vec<Option<u32>>,
    /// Work done by the four tree constructions.
    pub build_counters: ScanCounters,
    /// Work done while peeling.
    pub peel_counters: ScanCounters,
}

impl LayerSet {
    /// Wraps already computed layers over ids `0..n`; counters are zero.
    ///
    /// # Panics
    /// If an id is out of range or appears twice.
    pub fn from_layers(n: usize, layers: Vec<Vec<Point>>) -> Self {
        let mut depth = vec![None; n];
        for (i, layer) in layers.iter().enumerate() {
            for p in layer {
                let slot = &mut depth[p.id as usize];
                assert!(slot.is_none(), "point {} in two layers", p.id);
                *slot = Some(i as u32 + 1);
            }
        }
        LayerSet { layers, depth, build_counters: ScanCounters::default(), peel_counters: ScanCounters::default() }
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// 1-based layer index of point `id`, or `None` for points left over by
    /// an early stop.
    pub fn depth(&self, id: u32) -> Option<u32> {
        self.depth.get(id as usize).copied().flatten()
    }

    /// Layer index per point id.
    pub fn depths(&self) -> &[Option<u32>] {
        &self.depth
    }

    /// Layers as id lists, for comparisons that ignore counters.
    pub fn id_layers(&self) -> Vec<Vec<u32>> {
        self.layers.iter().map(|l| l.iter().map(|p| p.id).collect()).collect()
    }
}

/// Rotates a cyclic polygon so that it starts at its smallest `(x, y)`.
pub fn normalize_start(poly: &mut [Point]) {
    if let Some((i, _)) = poly.iter().enumerate().min_by_key(|(_, p)| p.x_key()) {
        poly.rotate_left(i);
    }
}

/// The ten-point set on which extracting before filtering marked points
/// reports a layer-2 point one layer late.
pub fn counterexample_fixture() -> Vec<Point> {
    const XY: [(i64, i64); 10] = [
        (-100, 0),
        (0, 100),
        (10, 99),
        (100, -3),
        (5, -100),
        (-50, 5),
        (20, 50),
        (25, 52),
        (30, 4),
        (-2, -50),
    ];
    XY.iter().enumerate().map(|(i, &(x, y))| Point::new(i as u32, x, y)).collect()
}

/// Computes every convex layer of `points`, whose ids must be `0..n` in
/// order and whose coordinates must be distinct.
pub fn peel_layers<S: Schedule>(points: &[Point], opts: PeelOptions, schedule: &S) -> Result<LayerSet, Error> {
    let mut peeler = Peeler::new(points, opts, schedule)?;
    while peeler.next_layer(schedule)?.is_some() {}
    Ok(peeler.finish())
}

/// Layer-at-a-time peeling, for callers that inspect the trees in between.
#[derive(Clone, Debug)]
pub struct Peeler<'a> {
    points: &'a [Point],
    opts: PeelOptions,
    trees: Vec<HullTree>,
    marks: MarkSet,
    layers: Vec<Vec<Point>>,
    build_counters: ScanCounters,
}

impl<'a> Peeler<'a> {
    /// Builds the four trees.
    pub fn new<S: Schedule>(points: &'a [Point], opts: PeelOptions, schedule: &S) -> Result<Self, Error> {
        let mut frames: Vec<Vec<Point>> =
            Quadrant::ALL.iter().map(|q| points.iter().map(|p| q.transform(p)).collect()).collect();
        let built = schedule.map(&mut frames, |_, pts| {
            if opts.validate {
                HullTree::build_checked(pts)
            } else {
                HullTree::build(pts)
            }
        });
        let mut trees = built.into_iter().collect::<Result<Vec<_>, _>>()?;
        let mut build_counters = ScanCounters::default();
        for t in &mut trees {
            build_counters.add(t.counters());
            t.counters_mut().reset();
        }
        Ok(Peeler {
            points,
            opts,
            trees,
            marks: MarkSet::new(points.len()),
            layers: Vec::new(),
            build_counters,
        })
    }

    /// The four trees, in [`Quadrant::ALL`] order.
    pub fn trees(&self) -> &[HullTree] {
        &self.trees
    }

    pub fn marks(&self) -> &MarkSet {
        &self.marks
    }

    pub fn layers(&self) -> &[Vec<Point>] {
        &self.layers
    }

    /// Peels the next layer, or returns `None` once every point is placed
    /// or the layer limit is reached.
    pub fn next_layer<S: Schedule>(&mut self, schedule: &S) -> Result<Option<&[Point]>, Error> {
        let opts = self.opts;
        loop {
            if self.marks.all_marked() || opts.max_layers.is_some_and(|m| self.layers.len() >= m) {
                return Ok(None);
            }
            if self.trees.iter().all(|t| t.is_empty()) {
                return Ok(None);
            }
            let marks = &self.marks;
            let chains = schedule.map(&mut self.trees, |_, t| -> Result<Vec<u32>, Error> {
                if t.is_empty() {
                    return Ok(Vec::new());
                }
                match opts.mode {
                    Mode::Purge => {
                        t.purge_marked(|id| marks.is_marked(id))?;
                        if t.is_empty() {
                            return Ok(Vec::new());
                        }
                        t.extract_hull()
                    }
                    Mode::Literal => {
                        let mut ids = t.extract_hull()?;
                        ids.retain(|&id| !marks.is_marked(id));
                        Ok(ids)
                    }
                }
            });
            let chains = chains.into_iter().collect::<Result<Vec<_>, _>>()?;
            let layer_no = self.layers.len() as u32 + 1;
            let mut poly: Vec<Point> = Vec::new();
            // chains run clockwise in their own frames; stitch them reversed
            for ids in &chains {
                for &id in ids.iter().rev() {
                    if !self.marks.is_marked(id) {
                        self.marks.mark(id, layer_no);
                        poly.push(self.points[id as usize]);
                    }
                }
            }
            if poly.is_empty() {
                continue;
            }
            normalize_start(&mut poly);
            self.layers.push(poly);
            return Ok(self.layers.last().map(Vec::as_slice));
        }
    }

    pub fn finish(self) -> LayerSet {
        let mut peel_counters = ScanCounters::default();
        for t in &self.trees {
            peel_counters.add(t.counters());
        }
        let depth = (0..self.points.len() as u32).map(|id| self.marks.layer_of(id)).collect();
        LayerSet { layers: self.layers, depth, build_counters: self.build_counters, peel_counters }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(xy: &[(i64, i64)]) -> Vec<Point> {
        xy.iter().enumerate().map(|(i, &(x, y))| Point::new(i as u32, x, y)).collect()
    }

    fn xy(layer: &[Point]) -> Vec<(i64, i64)> {
        layer.iter().map(|p| (p.x, p.y)).collect()
    }

    #[test]
    fn rotation_round_trip() {
        for q in Quadrant::ALL {
            assert_eq!(q.inverse(q.forward(3, -7).0, q.forward(3, -7).1), (3, -7));
        }
        assert_eq!(Quadrant::SW.forward(1, 2), (2, -1));
    }

    #[test]
    fn square_with_centre() {
        let p = pts(&[(0, 0), (10, 1), (9, 11), (-1, 10), (5, 5)]);
        let ls = peel_layers(&p, PeelOptions::default(), &Sequential).unwrap();
        assert_eq!(xy(&ls.layers[0]), [(-1, 10), (0, 0), (10, 1), (9, 11)]);
        assert_eq!(xy(&ls.layers[1]), [(5, 5)]);
        assert_eq!(ls.depth(4), Some(2));
        assert_eq!(ls.depth(0), Some(1));
    }

    #[test]
    fn fixture_purge_has_two_layers() {
        let p = counterexample_fixture();
        let ls = peel_layers(&p, PeelOptions { validate: true, ..Default::default() }, &Sequential).unwrap();
        assert_eq!(xy(&ls.layers[0]), [(-100, 0), (5, -100), (100, -3), (10, 99), (0, 100)]);
        assert_eq!(xy(&ls.layers[1]), [(-50, 5), (-2, -50), (30, 4), (25, 52), (20, 50)]);
        assert_eq!(ls.depth(6), Some(2));
    }

    #[test]
    fn fixture_literal_delays_one_point() {
        let p = counterexample_fixture();
        let opts = PeelOptions { mode: Mode::Literal, validate: true, ..Default::default() };
        let ls = peel_layers(&p, opts, &Sequential).unwrap();
        assert_eq!(ls.len(), 3);
        assert_eq!(ls.depth(6), Some(3));
        for id in [5, 7, 8, 9] {
            assert_eq!(ls.depth(id), Some(2));
        }
    }

    #[test]
    fn collinear_points_defer_inward() {
        let p = pts(&[(0, 0), (1, 1), (2, 2), (3, 3)]);
        let ls = peel_layers(&p, PeelOptions::default(), &Sequential).unwrap();
        assert_eq!(ls.id_layers(), vec![vec![0, 3], vec![1, 2]]);
    }

    #[test]
    fn max_layers_stops_early() {
        let p = counterexample_fixture();
        let opts = PeelOptions { max_layers: Some(1), ..Default::default() };
        let ls = peel_layers(&p, opts, &Sequential).unwrap();
        assert_eq!(ls.len(), 1);
        assert_eq!(ls.depth(6), None);
    }

    #[test]
    fn empty_input() {
        let ls = peel_layers(&[], PeelOptions::default(), &Sequential).unwrap();
        assert!(ls.is_empty());
    }
}
