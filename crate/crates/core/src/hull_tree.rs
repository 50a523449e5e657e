//! The hull tree: a rank-indexed binary tree of north-west monotone convex
//! hull chains.
//!
//! Each node holds the hull chain of all points stored in its subtree; the
//! points that are not on that chain are partitioned between the two children
//! by the bit of their x rank at the node's depth (0 left, 1 right). Ranks are
//! fixed at construction, so the implicit skeleton has height `ceil(log2 n)`.
//!
//! Two cursors per node (`l`, `r`, with `l` never east of `r`) record where
//! the previous scans stopped. All tangent, bridge and `below` searches start
//! from the cursors, which is what makes construction and a full peel
//! O(n log n) in total. [`ScanCounters`] records the work for inspection.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::chain::{Chain, Links, NIL};
use crate::error::{Error, Invariant, ValidationError};
use crate::geometry::{above, above_line, cmp_slope, dominates, ExtPoint, Point};

/// Work counters for the amortised analysis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScanCounters {
    /// Cursor steps past a chain node.
    pub scan_events: u64,
    /// Points moved one level down by `insert`.
    pub evictions: u64,
    /// Points moved one level up by `delete`.
    pub promotions: u64,
    pub delete_calls: u64,
    pub insert_calls: u64,
}

impl ScanCounters {
    pub fn reset(&mut self) {
        *self = ScanCounters::default();
    }

    pub fn add(&mut self, other: &ScanCounters) {
        self.scan_events += other.scan_events;
        self.evictions += other.evictions;
        self.promotions += other.promotions;
        self.delete_calls += other.delete_calls;
        self.insert_calls += other.insert_calls;
    }
}

/// `key=value` lines, one per counter.
impl fmt::Display for ScanCounters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scan_events={}", self.scan_events)?;
        writeln!(f, "evictions={}", self.evictions)?;
        writeln!(f, "promotions={}", self.promotions)?;
        writeln!(f, "delete_calls={}", self.delete_calls)?;
        write!(f, "insert_calls={}", self.insert_calls)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum State {
    Pending,
    Live,
    Removed,
}

#[derive(Clone, Debug)]
struct Node {
    hull: Chain,
    l: u32,
    r: u32,
    kids: [u32; 2],
    depth: u32,
}

impl Node {
    fn new(depth: u32) -> Self {
        Node { hull: Chain::EMPTY, l: NIL, r: NIL, kids: [NIL, NIL], depth }
    }
}

const ROOT: usize = 0;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cursor {
    L,
    R,
}

/// A hull tree over a fixed point set whose ids are `0..n`.
#[derive(Clone, Debug)]
pub struct HullTree {
    pts: Vec<Point>,
    rank: Vec<u32>,
    bits: u32,
    state: Vec<State>,
    links: Links,
    nodes: Vec<Node>,
    live: usize,
    counters: ScanCounters,
    checked: bool,
    literal_ties: bool,
}

impl HullTree {
    /// An empty tree over `points`; ranks are computed here and never again.
    /// Points must carry ids `0..n` in order.
    pub fn new(points: &[Point]) -> Result<Self, Error> {
        for (i, p) in points.iter().enumerate() {
            if p.id as usize != i {
                return Err(Error::NonDenseIds { position: i, found: p.id });
            }
            if !p.in_bounds() {
                return Err(Error::OutOfBounds { id: p.id });
            }
        }
        let n = points.len();
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_unstable_by(|&a, &b| points[a as usize].cmp_x(&points[b as usize]));
        for w in order.windows(2) {
            let (a, b) = (points[w[0] as usize], points[w[1] as usize]);
            if a.x_key() == b.x_key() {
                return Err(Error::Duplicate { first: a.id.min(b.id), second: a.id.max(b.id) });
            }
        }
        let mut rank = vec![0u32; n];
        for (r, &id) in order.iter().enumerate() {
            rank[id as usize] = r as u32;
        }
        let bits = if n <= 1 { 0 } else { usize::BITS - (n - 1).leading_zeros() };
        Ok(HullTree {
            pts: points.to_vec(),
            rank,
            bits,
            state: vec![State::Pending; n],
            links: Links::new(n),
            nodes: vec![Node::new(0)],
            live: 0,
            counters: ScanCounters::default(),
            checked: false,
            literal_ties: false,
        })
    }

    /// Builds the tree by a bottom-to-top plane sweep: one single-point
    /// insertion per point in increasing y order.
    pub fn build(points: &[Point]) -> Result<Self, Error> {
        Self::build_with(points, false)
    }

    /// [`HullTree::build`] with the validator run after every insertion.
    pub fn build_checked(points: &[Point]) -> Result<Self, Error> {
        Self::build_with(points, true)
    }

    fn build_with(points: &[Point], checked: bool) -> Result<Self, Error> {
        let mut tree = Self::new(points)?;
        tree.checked = checked;
        let mut order: Vec<u32> = (0..points.len() as u32).collect();
        order.sort_unstable_by(|&a, &b| points[a as usize].cmp_y(&points[b as usize]));
        for id in order {
            tree.insert_chain(&[id])?;
        }
        Ok(tree)
    }

    /// Enables or disables validation after every public mutation.
    pub fn set_checked(&mut self, on: bool) {
        self.checked = on;
    }

    /// Selects the Case 2 / Case 3 tests of `delete` in their transcribed
    /// argument order instead of the tangent-shadow tests. Kept for
    /// regression fixtures only; see the `literal_case_predicates` tests.
    #[doc(hidden)]
    pub fn set_literal_case_predicates(&mut self, on: bool) {
        self.literal_ties = on;
    }

    pub fn is_checked(&self) -> bool {
        self.checked
    }

    pub fn is_empty(&self) -> bool {
        self.nodes[ROOT].hull.is_empty()
    }

    /// Number of points currently stored.
    pub fn live_points(&self) -> usize {
        self.live
    }

    /// Height of the implicit skeleton, `ceil(log2 n)`.
    pub fn skeleton_height(&self) -> u32 {
        self.bits
    }

    pub fn counters(&self) -> &ScanCounters {
        &self.counters
    }

    pub fn counters_mut(&mut self) -> &mut ScanCounters {
        &mut self.counters
    }

    pub fn point(&self, id: u32) -> &Point {
        &self.pts[id as usize]
    }

    pub fn rank(&self, id: u32) -> u32 {
        self.rank[id as usize]
    }

    /// The root hull chain, west to east.
    pub fn root_hull(&self) -> Vec<Point> {
        self.hull_points(ROOT)
    }

    /// Hull chain of the node reached by following `path` (`'L'`/`'R'`).
    pub fn hull_at(&self, path: &str) -> Option<Vec<Point>> {
        self.node_at(path).map(|n| self.hull_points(n))
    }

    /// Cursor positions `(l, r)` of the root, if the root is nonempty.
    pub fn root_cursors(&self) -> Option<(Point, Point)> {
        let n = &self.nodes[ROOT];
        (!n.hull.is_empty()).then(|| (self.pts[n.l as usize], self.pts[n.r as usize]))
    }

    /// Depth of the chain currently holding `id`, if the point is live.
    pub fn level_of(&self, id: u32) -> Option<u32> {
        if self.state.get(id as usize) != Some(&State::Live) {
            return None;
        }
        let mut n = ROOT;
        loop {
            if self.links.iter(self.nodes[n].hull).any(|v| v == id) {
                return Some(self.nodes[n].depth);
            }
            let d = self.nodes[n].depth;
            if d >= self.bits {
                return None;
            }
            let k = self.nodes[n].kids[self.bit(id, d)];
            if k == NIL {
                return None;
            }
            n = k as usize;
        }
    }

    /// Number of nodes on all chains of the tree (walks every chain).
    pub fn chain_node_census(&self) -> usize {
        self.nodes.iter().map(|n| self.links.len(n.hull)).sum()
    }

    fn node_at(&self, path: &str) -> Option<usize> {
        let mut n = ROOT;
        for c in path.chars() {
            let k = match c {
                'L' | 'l' | '0' => self.nodes[n].kids[0],
                'R' | 'r' | '1' => self.nodes[n].kids[1],
                _ => return None,
            };
            if k == NIL {
                return None;
            }
            n = k as usize;
        }
        Some(n)
    }

    fn hull_points(&self, n: usize) -> Vec<Point> {
        self.links.iter(self.nodes[n].hull).map(|i| self.pts[i as usize]).collect()
    }

    #[inline]
    fn p(&self, id: u32) -> &Point {
        &self.pts[id as usize]
    }

    #[inline]
    fn bit(&self, id: u32, depth: u32) -> usize {
        debug_assert!(depth < self.bits);
        ((self.rank[id as usize] >> (self.bits - 1 - depth)) & 1) as usize
    }

    fn child(&mut self, n: usize, side: usize) -> usize {
        let k = self.nodes[n].kids[side];
        if k != NIL {
            return k as usize;
        }
        let idx = self.nodes.len();
        let depth = self.nodes[n].depth + 1;
        self.nodes.push(Node::new(depth));
        self.nodes[n].kids[side] = idx as u32;
        idx
    }

    fn kid(&self, n: usize, side: usize) -> Option<usize> {
        let k = self.nodes[n].kids[side];
        (k != NIL && !self.nodes[k as usize].hull.is_empty()).then_some(k as usize)
    }

    fn post_mutation(&self) -> Result<(), Error> {
        if self.checked {
            self.validate().map_err(Error::Invariant)?;
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // cursors and tangent scans
    // ------------------------------------------------------------------

    /// Moves cursor `which` of node `n` to `v`, pushing the other cursor so
    /// that `l` stays west of (or at) `r`.
    fn set_cursor(&mut self, n: usize, which: Cursor, v: u32) {
        let node = &self.nodes[n];
        match which {
            Cursor::L => {
                let push = self.pts[node.r as usize].left_of(&self.pts[v as usize]);
                self.nodes[n].l = v;
                if push {
                    self.nodes[n].r = v;
                }
            }
            Cursor::R => {
                let push = self.pts[v as usize].left_of(&self.pts[node.l as usize]);
                self.nodes[n].r = v;
                if push {
                    self.nodes[n].l = v;
                }
            }
        }
    }

    fn cursor(&self, n: usize, which: Cursor) -> u32 {
        match which {
            Cursor::L => self.nodes[n].l,
            Cursor::R => self.nodes[n].r,
        }
    }

    /// The hull vertex west of `a` where a line through `a` touches the hull
    /// from above: minimises the slope of `v -> a`, westmost among ties.
    /// Requires the head to be west of `a`.
    fn scan_west_tangent(&mut self, n: usize, a: &Point, which: Cursor) -> u32 {
        let mut v = self.cursor(n, which);
        let mut steps = 0u64;
        while !self.p(v).left_of(a) {
            v = self.links.pred(v).expect("hull head must lie west of the query point");
            steps += 1;
        }
        let west_better =
            |t: &Self, u: u32, v: u32| cmp_slope(t.p(u), a, t.p(v), a) != Ordering::Greater;
        if self.links.pred(v).is_some_and(|u| west_better(self, u, v)) {
            while let Some(u) = self.links.pred(v) {
                if !west_better(self, u, v) {
                    break;
                }
                v = u;
                steps += 1;
            }
        } else {
            while let Some(w) = self.links.succ(v) {
                if !self.p(w).left_of(a) || west_better(self, v, w) {
                    break;
                }
                v = w;
                steps += 1;
            }
        }
        self.counters.scan_events += steps;
        self.set_cursor(n, which, v);
        v
    }

    /// The hull vertex east of `a` where a line through `a` touches the hull
    /// from above: maximises the slope of `a -> v`, eastmost among ties.
    /// Requires the tail to be east of `a`.
    fn scan_east_tangent(&mut self, n: usize, a: &Point, which: Cursor) -> u32 {
        let mut v = self.cursor(n, which);
        let mut steps = 0u64;
        while !a.left_of(self.p(v)) {
            v = self.links.succ(v).expect("hull tail must lie east of the query point");
            steps += 1;
        }
        let east_better =
            |t: &Self, v: u32, w: u32| cmp_slope(a, t.p(w), a, t.p(v)) != Ordering::Less;
        if self.links.succ(v).is_some_and(|w| east_better(self, v, w)) {
            while let Some(w) = self.links.succ(v) {
                if !east_better(self, v, w) {
                    break;
                }
                v = w;
                steps += 1;
            }
        } else {
            while let Some(u) = self.links.pred(v) {
                if !a.left_of(self.p(u)) || east_better(self, u, v) {
                    break;
                }
                v = u;
                steps += 1;
            }
        }
        self.counters.scan_events += steps;
        self.set_cursor(n, which, v);
        v
    }

    /// Insertion tangents of node `n` for a chain running from `a_l` to
    /// `a_r`; `None` marks the degenerate (sentinel) tangent.
    fn insert_tangents(&mut self, n: usize, a_l: &Point, a_r: &Point) -> (Option<u32>, Option<u32>) {
        let hull = self.nodes[n].hull;
        let head = hull.head().expect("tangents on an empty tree");
        let tail = hull.tail().unwrap();
        let q_l = self.p(head).south_west_of(a_l).then(|| self.scan_west_tangent(n, a_l, Cursor::L));
        let q_r = a_r.south_west_of(self.p(tail)).then(|| self.scan_east_tangent(n, a_r, Cursor::R));
        (q_l, q_r)
    }

    /// Tangents from two points outside the tree to the root hull, as used by
    /// insertion. `q_l` is the left sentinel when the head of the hull is not
    /// south-west of `a_l`, `q_r` the right sentinel when `a_r` is not
    /// south-west of the tail. Moves the root cursors.
    ///
    /// # Panics
    /// On an empty tree.
    pub fn tangents(&mut self, a_l: &Point, a_r: &Point) -> (ExtPoint, ExtPoint) {
        let hull = self.nodes[ROOT].hull;
        assert!(!hull.is_empty(), "tangents on an empty tree");
        let (q_l, q_r) = self.insert_tangents(ROOT, a_l, a_r);
        let head = *self.p(hull.head().unwrap());
        let tail = *self.p(hull.tail().unwrap());
        (
            q_l.map_or(ExtPoint::LeftSentinel(head), |v| ExtPoint::Finite(*self.p(v))),
            q_r.map_or(ExtPoint::RightSentinel(tail), |v| ExtPoint::Finite(*self.p(v))),
        )
    }

    // ------------------------------------------------------------------
    // insertion
    // ------------------------------------------------------------------

    /// Inserts a north-west chain of not-yet-inserted points, none of which
    /// is dominated by the current root hull.
    pub fn insert_chain(&mut self, ids: &[u32]) -> Result<(), Error> {
        assert!(!ids.is_empty(), "insert of an empty chain");
        let mut chain = Chain::EMPTY;
        for &id in ids {
            if id as usize >= self.pts.len() || self.state[id as usize] != State::Pending {
                return Err(Error::UnknownId(id));
            }
            self.links.push_back(&mut chain, id);
            self.state[id as usize] = State::Live;
        }
        debug_assert!(ids.windows(2).all(|w| self.p(w[0]).south_west_of(self.p(w[1]))));
        self.live += ids.len();
        self.insert_at(ROOT, chain);
        if self.checked {
            self.post_mutation()?;
            let tail = self.nodes[ROOT].hull.tail();
            if ids.len() == 1 && tail != Some(ids[0]) {
                return Err(Error::Invariant(ValidationError {
                    invariant: Invariant::TailAfterInsert,
                    path: String::new(),
                    detail: format!("inserted {} but tail is {:?}", ids[0], tail),
                }));
            }
        }
        Ok(())
    }

    fn insert_at(&mut self, n: usize, chain: Chain) {
        self.counters.insert_calls += 1;
        if self.nodes[n].hull.is_empty() {
            let node = &mut self.nodes[n];
            node.hull = chain;
            node.l = chain.head().unwrap();
            node.r = chain.tail().unwrap();
            return;
        }
        let a_l = *self.p(chain.head().unwrap());
        let a_r = *self.p(chain.tail().unwrap());
        let (q_l, q_r) = self.insert_tangents(n, &a_l, &a_r);
        let mut hull = self.nodes[n].hull;
        let displaced = self.links.splice_replace(&mut hull, q_l, q_r, chain);
        let node = &mut self.nodes[n];
        node.hull = hull;
        node.l = q_l.unwrap_or(a_l.id);
        node.r = q_r.unwrap_or(a_r.id);
        if displaced.is_empty() {
            return;
        }
        let depth = self.nodes[n].depth;
        let mut parts = [Chain::EMPTY; 2];
        let mut v = displaced.head();
        while let Some(id) = v {
            v = self.links.succ(id);
            let side = self.bit(id, depth);
            self.links.push_back(&mut parts[side], id);
            self.counters.evictions += 1;
            self.counters.scan_events += 1;
        }
        for (side, part) in parts.into_iter().enumerate() {
            if !part.is_empty() {
                let k = self.child(n, side);
                self.insert_at(k, part);
            }
        }
    }

    // ------------------------------------------------------------------
    // peeling
    // ------------------------------------------------------------------

    /// `below` for node `n` against the roof through `a_l` and `a_r` (`None`
    /// = sentinel). When it returns false and both ends are finite, one of
    /// the cursors rests on a hull point strictly above the roof line.
    fn below_at(&mut self, n: usize, a_l: Option<u32>, a_r: Option<u32>) -> bool {
        if self.nodes[n].hull.is_empty() {
            return true;
        }
        let (Some(a_l), Some(a_r)) = (a_l, a_r) else {
            return false;
        };
        let (pl, pr) = (*self.p(a_l), *self.p(a_r));
        let r = self.nodes[n].r;
        let mut steps = 0;
        let result = match self.links.pred(r) {
            Some(u) if cmp_slope(self.p(u), self.p(r), &pl, &pr) == Ordering::Less => {
                // height above the roof falls into r: the top is further west
                let mut v = r;
                while !above_line(&pl, &pr, self.p(v)) {
                    match self.links.pred(v) {
                        Some(u) if cmp_slope(self.p(u), self.p(v), &pl, &pr) == Ordering::Less => {
                            v = u;
                            steps += 1;
                        }
                        _ => break,
                    }
                }
                self.set_cursor(n, Cursor::R, v);
                !above_line(&pl, &pr, self.p(v))
            }
            _ => {
                let mut v = self.nodes[n].l;
                while !above_line(&pl, &pr, self.p(v)) {
                    match self.links.succ(v) {
                        Some(w) if cmp_slope(self.p(v), self.p(w), &pl, &pr) == Ordering::Greater => {
                            v = w;
                            steps += 1;
                        }
                        _ => break,
                    }
                }
                self.set_cursor(n, Cursor::L, v);
                !above_line(&pl, &pr, self.p(v))
            }
        };
        self.counters.scan_events += steps;
        result
    }

    /// True iff no point of the root hull lies strictly above the line
    /// through `p_l` and `p_r`. Returns false when either end is a sentinel
    /// and the tree is nonempty; true on an empty tree. `p_l` must be west of
    /// `p_r`, and the hull may rise above the line only between them.
    pub fn below(&mut self, p_l: &ExtPoint, p_r: &ExtPoint) -> bool {
        if self.is_empty() {
            return true;
        }
        let (Some(a), Some(b)) = (p_l.finite(), p_r.finite()) else {
            return false;
        };
        assert!(a.left_of(&b), "below: line ends out of order");
        // the roof ends are not tree points; route through a scratch copy of
        // the point table so that the node-level routine can address them
        let saved = self.pts.len();
        let (ia, ib) = (saved as u32, saved as u32 + 1);
        self.pts.push(Point { id: ia, ..a });
        self.pts.push(Point { id: ib, ..b });
        let res = self.below_at(ROOT, Some(ia), Some(ib));
        self.pts.truncate(saved);
        res
    }

    /// The span `(first, last)` of node `n`'s hull that rises above the roof
    /// `a_l .. a_r` once the roof is rebuilt from this subtree alone, or
    /// `None` when nothing rises above it.
    fn roof_tangents(&mut self, n: usize, a_l: Option<u32>, a_r: Option<u32>) -> Option<(u32, u32)> {
        let hull = self.nodes[n].hull;
        let (head, tail) = (hull.head()?, hull.tail()?);
        match (a_l, a_r) {
            (None, None) => Some((head, tail)),
            (None, Some(r)) => {
                let ar = *self.p(r);
                if !self.p(head).left_of(&ar) {
                    return None;
                }
                let last = self.scan_west_tangent(n, &ar, Cursor::R);
                self.nodes[n].l = head;
                Some((head, last))
            }
            (Some(l), None) => {
                let al = *self.p(l);
                if !al.lower_than(self.p(tail)) {
                    return None;
                }
                let first = self.scan_east_tangent(n, &al, Cursor::L);
                self.nodes[n].r = tail;
                Some((first, tail))
            }
            (Some(l), Some(r)) => {
                let (al, ar) = (*self.p(l), *self.p(r));
                let first = self.scan_east_tangent(n, &al, Cursor::L);
                let last = self.scan_west_tangent(n, &ar, Cursor::R);
                debug_assert!(!self.p(last).left_of(self.p(first)));
                Some((first, last))
            }
        }
    }

    /// Bridge between the root hulls of two sibling nodes. Moves `left.l`
    /// and `right.r` onto the bridge ends.
    fn bridge_at(&mut self, left: usize, right: usize) -> (u32, u32) {
        let mut u = self.nodes[left].l;
        let mut v = self.nodes[right].r;
        let (steps, u2, v2) = bridge_walk(&self.links, &self.pts, u, &self.links, &self.pts, v);
        u = u2;
        v = v2;
        self.counters.scan_events += steps;
        self.set_cursor(left, Cursor::L, u);
        self.set_cursor(right, Cursor::R, v);
        (u, v)
    }

    /// Bridge between two trees, the first preceding the second. Degenerate
    /// cases follow the sentinel conventions: an empty left tree yields
    /// `(-inf, -inf)` on the left; an empty right tree or a left tail higher
    /// than the right tail yields `(+inf, -inf)` on the right, paired with the
    /// left tail.
    ///
    /// # Panics
    /// If both trees are empty.
    pub fn get_bridge(left: &mut HullTree, right: &mut HullTree) -> (ExtPoint, ExtPoint) {
        assert!(!(left.is_empty() && right.is_empty()), "get_bridge on two empty trees");
        if left.is_empty() {
            let tail = right.nodes[ROOT].hull.tail().unwrap();
            return (ExtPoint::NegInfinity, ExtPoint::Finite(*right.p(tail)));
        }
        let ltail = *left.p(left.nodes[ROOT].hull.tail().unwrap());
        if right.is_empty() || right.p(right.nodes[ROOT].hull.tail().unwrap()).lower_than(&ltail) {
            return (ExtPoint::Finite(ltail), ExtPoint::Degenerate);
        }
        let u = left.nodes[ROOT].l;
        let v = right.nodes[ROOT].r;
        let (steps, u, v) = bridge_walk(&left.links, &left.pts, u, &right.links, &right.pts, v);
        left.counters.scan_events += steps;
        left.set_cursor(ROOT, Cursor::L, u);
        right.set_cursor(ROOT, Cursor::R, v);
        (ExtPoint::Finite(*left.p(u)), ExtPoint::Finite(*right.p(v)))
    }

    /// Cuts `first..=last` out of node `n`'s hull, rebuilds the roof from the
    /// subtrees and returns the cut run.
    fn delete_run(&mut self, n: usize, first: u32, last: u32) -> Chain {
        self.counters.delete_calls += 1;
        let a_l = self.links.pred(first);
        let a_r = self.links.succ(last);
        let mut hull = self.nodes[n].hull;
        let run = self.links.cut(&mut hull, first, last);
        self.nodes[n].hull = hull;
        self.repair(n, a_l, a_r, (first, last));
        run
    }

    fn ext(&self, a: Option<u32>, sentinel: ExtPoint) -> ExtPoint {
        a.map_or(sentinel, |v| ExtPoint::Finite(*self.p(v)))
    }

    fn repair(&mut self, n: usize, a_l: Option<u32>, a_r: Option<u32>, cut: (u32, u32)) {
        let kl = self.kid(n, 0);
        let kr = self.kid(n, 1);
        let use_l = kl.is_some_and(|k| !self.below_at(k, a_l, a_r));
        let use_r = kr.is_some_and(|k| !self.below_at(k, a_l, a_r));
        let span_l = if use_l { self.roof_tangents(kl.unwrap(), a_l, a_r) } else { None };
        let span_r = if use_r { self.roof_tangents(kr.unwrap(), a_l, a_r) } else { None };

        let promoted = match (span_l, span_r) {
            // neither subtree reaches above the roof
            (None, None) => Chain::EMPTY,
            (None, Some((rl, rr))) => self.delete_run(kr.unwrap(), rl, rr),
            (Some((ll, lr)), None) => self.delete_run(kl.unwrap(), ll, lr),
            (Some((ll, lr)), Some((rl, rr))) => {
                let (kl, kr) = (kl.unwrap(), kr.unwrap());
                if self.literal_ties {
                    let el = self.ext(a_l, ExtPoint::LeftSentinel(*self.p(cut.0)));
                    let er = self.ext(a_r, ExtPoint::RightSentinel(*self.p(cut.1)));
                    let (fll, frl, flr) =
                        (ExtPoint::Finite(*self.p(ll)), ExtPoint::Finite(*self.p(rl)), ExtPoint::Finite(*self.p(lr)));
                    let case4 = above(&el, &frl, self.p(ll)) && above(&flr, &er, self.p(rr));
                    let promoted = if above(&er, &fll, self.p(rl)) {
                        self.delete_run(kr, rl, rr)
                    } else if above(&frl, &el, self.p(lr)) {
                        self.delete_run(kl, ll, lr)
                    } else if case4 {
                        let (ql, qr) = self.bridge_at(kl, kr);
                        let cl = self.delete_run(kl, ll, ql);
                        let cr = self.delete_run(kr, qr, rr);
                        self.links.concat(cl, cr)
                    } else {
                        Chain::EMPTY
                    };
                    self.finish_repair(n, a_l, a_r, promoted);
                    return;
                }
                let left_shows = match a_l {
                    None => true,
                    Some(al) => above_line(self.p(al), self.p(rl), self.p(ll)),
                };
                let right_shows = match a_r {
                    None => self.p(lr).lower_than(self.p(rr)),
                    Some(ar) => above_line(self.p(lr), self.p(ar), self.p(rr)),
                };
                if !left_shows {
                    self.delete_run(kr, rl, rr)
                } else if !right_shows {
                    self.delete_run(kl, ll, lr)
                } else {
                    let (ql, qr) = self.bridge_at(kl, kr);
                    debug_assert!(!self.p(ql).left_of(self.p(ll)));
                    debug_assert!(!self.p(rr).left_of(self.p(qr)));
                    let cl = self.delete_run(kl, ll, ql);
                    let cr = self.delete_run(kr, qr, rr);
                    self.links.concat(cl, cr)
                }
            }
        };
        self.finish_repair(n, a_l, a_r, promoted);
    }

    fn finish_repair(&mut self, n: usize, a_l: Option<u32>, a_r: Option<u32>, promoted: Chain) {
        let moved = self.links.len(promoted) as u64;
        self.counters.promotions += moved;
        self.counters.scan_events += moved;
        let mut hull = self.nodes[n].hull;
        let gap = self.links.splice_replace(&mut hull, a_l, a_r, promoted);
        debug_assert!(gap.is_empty());
        let node = &mut self.nodes[n];
        node.hull = hull;
        if let (Some(h), Some(t)) = (hull.head(), hull.tail()) {
            node.l = a_l.unwrap_or(h);
            node.r = a_r.unwrap_or(t);
        } else {
            node.l = NIL;
            node.r = NIL;
        }
    }

    /// Removes the root hull chain and returns its points west to east; the
    /// tree is left holding the remaining points.
    pub fn extract_hull(&mut self) -> Result<Vec<u32>, Error> {
        let hull = self.nodes[ROOT].hull;
        let (Some(first), Some(last)) = (hull.head(), hull.tail()) else {
            return Err(Error::EmptyTree);
        };
        let run = self.delete_run(ROOT, first, last);
        let ids = self.links.to_vec(run);
        for &id in &ids {
            self.state[id as usize] = State::Removed;
        }
        self.live -= ids.len();
        self.post_mutation()?;
        Ok(ids)
    }

    /// Deletes a contiguous run of the root hull given by its end points.
    pub fn delete_root_run(&mut self, first: u32, last: u32) -> Result<Vec<u32>, Error> {
        debug_assert!(self.links.iter(self.nodes[ROOT].hull).any(|v| v == first));
        let run = self.delete_run(ROOT, first, last);
        let ids = self.links.to_vec(run);
        for &id in &ids {
            self.state[id as usize] = State::Removed;
        }
        self.live -= ids.len();
        self.post_mutation()?;
        Ok(ids)
    }

    /// Deletes every maximal run of marked points from the root hull until
    /// the root hull holds no marked point. Only promoted nodes are rescanned
    /// after each deletion. Returns the number of purged points.
    pub fn purge_marked<F: Fn(u32) -> bool>(&mut self, is_marked: F) -> Result<usize, Error> {
        let mut purged = 0usize;
        let mut v = self.nodes[ROOT].hull.head();
        while let Some(x) = v {
            if !is_marked(x) {
                v = self.links.succ(x);
                continue;
            }
            let mut last = x;
            while let Some(w) = self.links.succ(last).filter(|&w| is_marked(w)) {
                last = w;
            }
            let a_l = self.links.pred(x);
            let run = self.delete_run(ROOT, x, last);
            for id in self.links.iter(run) {
                self.state[id as usize] = State::Removed;
                purged += 1;
            }
            v = match a_l {
                Some(a) => self.links.succ(a),
                None => self.nodes[ROOT].hull.head(),
            };
        }
        self.live -= purged;
        self.post_mutation()?;
        Ok(purged)
    }

    // ------------------------------------------------------------------
    // validation
    // ------------------------------------------------------------------

    /// Checks every hull-tree invariant: chain links, strict monotone
    /// convexity, cursor placement and order, domination of each child hull
    /// by its parent hull, rank-bit residency, empty nodes having empty
    /// subtrees, and the one-node-per-live-point census.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let mut seen = vec![false; self.pts.len()];
        let mut count = 0usize;
        let mut stack: Vec<(usize, String, Option<Vec<Point>>)> = vec![(ROOT, String::new(), None)];
        while let Some((n, path, parent)) = stack.pop() {
            let err = |inv: Invariant, detail: String| ValidationError { invariant: inv, path: path.clone(), detail };
            let node = &self.nodes[n];
            // links
            let ids = self.links.to_vec(node.hull);
            if let Some(&h) = ids.first() {
                if self.links.pred(h).is_some() || self.links.succ(*ids.last().unwrap()).is_some() {
                    return Err(err(Invariant::Links, "chain ends are linked outward".into()));
                }
            }
            for w in ids.windows(2) {
                if self.links.pred(w[1]) != Some(w[0]) {
                    return Err(err(Invariant::Links, format!("asymmetric link {} -> {}", w[0], w[1])));
                }
            }
            let hull: Vec<Point> = ids.iter().map(|&i| self.pts[i as usize]).collect();
            for &id in &ids {
                if seen[id as usize] || self.state[id as usize] != State::Live {
                    return Err(err(Invariant::Census, format!("point {id} is not a unique live node")));
                }
                seen[id as usize] = true;
                count += 1;
                // every bit above this depth must match the path
                for (d, c) in path.chars().enumerate() {
                    if self.bit(id, d as u32) != (c == 'R') as usize {
                        return Err(err(Invariant::RankResidency, format!("point {id} routed wrongly at depth {d}")));
                    }
                }
            }
            for w in hull.windows(2) {
                if !w[0].south_west_of(&w[1]) {
                    return Err(err(Invariant::Monotonicity, format!("{:?} -> {:?}", w[0], w[1])));
                }
            }
            for w in hull.windows(3) {
                if crate::geometry::cross(&w[0], &w[1], &w[2]) >= 0 {
                    return Err(err(Invariant::Convexity, format!("{:?} {:?} {:?}", w[0], w[1], w[2])));
                }
            }
            if hull.is_empty() {
                if node.kids.iter().any(|&k| k != NIL && !self.subtree_empty(k as usize)) {
                    return Err(err(Invariant::EmptyHullWithChildren, "empty hull above live points".into()));
                }
                continue;
            }
            let pos = |id: u32| ids.iter().position(|&v| v == id);
            match (pos(node.l), pos(node.r)) {
                (Some(a), Some(b)) if a <= b => {}
                (Some(_), Some(_)) => {
                    return Err(err(Invariant::CursorOrder, "l is east of r".into()));
                }
                _ => return Err(err(Invariant::Cursor, "cursor off the hull chain".into())),
            }
            if let Some(parent) = &parent {
                if let Some(q) = hull.iter().find(|q| !dominates(parent, q)) {
                    return Err(err(Invariant::Domination, format!("{q:?} not dominated by parent hull")));
                }
            }
            for side in 0..2 {
                let k = node.kids[side];
                if k != NIL {
                    let mut p = path.clone();
                    p.push(if side == 0 { 'L' } else { 'R' });
                    stack.push((k as usize, p, Some(hull.clone())));
                }
            }
        }
        if count != self.live {
            return Err(ValidationError {
                invariant: Invariant::Census,
                path: String::new(),
                detail: format!("{count} chain nodes for {} live points", self.live),
            });
        }
        Ok(())
    }

    fn subtree_empty(&self, n: usize) -> bool {
        self.nodes[n].hull.is_empty()
            && self.nodes[n].kids.iter().all(|&k| k == NIL || self.subtree_empty(k as usize))
    }

    /// Moves a stored point without touching the structure, for exercising
    /// the validator.
    #[doc(hidden)]
    pub fn with_point_moved(mut self, id: u32, x: i64, y: i64) -> Self {
        self.pts[id as usize] = Point { id, x, y };
        self
    }
}

/// Iterative two-cursor bridge search. Each iteration moves one cursor by
/// one node toward the common tangent.
fn bridge_walk(
    lk: &Links,
    lp: &[Point],
    mut u: u32,
    rk: &Links,
    rp: &[Point],
    mut v: u32,
) -> (u64, u32, u32) {
    let guard = 2 * (lp.len() + rp.len()) + 8;
    let mut steps = 0u64;
    loop {
        let (pu, pv) = (&lp[u as usize], &rp[v as usize]);
        if let Some(w) = lk.succ(u).filter(|&w| above_line(pu, pv, &lp[w as usize])) {
            u = w;
        } else if let Some(w) = lk.pred(u).filter(|&w| above_line(pu, pv, &lp[w as usize])) {
            u = w;
        } else if let Some(w) = rk.succ(v).filter(|&w| above_line(pu, pv, &rp[w as usize])) {
            v = w;
        } else if let Some(w) = rk.pred(v).filter(|&w| above_line(pu, pv, &rp[w as usize])) {
            v = w;
        } else {
            break;
        }
        steps += 1;
        assert!((steps as usize) < guard, "bridge search failed to converge");
    }
    // collinear neighbours on the bridge line: keep only its outer ends
    while let Some(w) = lk.pred(u).filter(|&w| {
        crate::geometry::cross(&lp[u as usize], &rp[v as usize], &lp[w as usize]) == 0
    }) {
        u = w;
        steps += 1;
    }
    while let Some(w) = rk.succ(v).filter(|&w| {
        crate::geometry::cross(&lp[u as usize], &rp[v as usize], &rp[w as usize]) == 0
    }) {
        v = w;
        steps += 1;
    }
    (steps, u, v)
}
