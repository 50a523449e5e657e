//! Exact planar primitives.
//!
//! Coordinates are integers bounded by [`COORD_LIMIT`] in absolute value, so
//! every orientation determinant is evaluated exactly in 128-bit arithmetic.
//!
//! Coordinate ties are broken lexicographically: "x order" compares `(x, y)`
//! and "y order" compares `(y, x)`. This is the same as applying the
//! infinitesimal shear `(x + εy, y + εx)`, which is linear, keeps every
//! orientation sign and leaves collinear points collinear. Collinear points
//! stay degenerate and are handled by the strict (vertex-only) hull policy.

use core::cmp::Ordering;

/// Largest admissible absolute coordinate value.
pub const COORD_LIMIT: i64 = 1 << 30;

/// An identified input point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub id: u32,
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(id: u32, x: i64, y: i64) -> Self {
        Point { id, x, y }
    }

    pub fn in_bounds(&self) -> bool {
        self.x.abs() <= COORD_LIMIT && self.y.abs() <= COORD_LIMIT
    }

    /// `(x, y)` lexicographic key.
    #[inline]
    pub fn x_key(&self) -> (i64, i64) {
        (self.x, self.y)
    }

    /// `(y, x)` lexicographic key.
    #[inline]
    pub fn y_key(&self) -> (i64, i64) {
        (self.y, self.x)
    }

    #[inline]
    pub fn cmp_x(&self, other: &Point) -> Ordering {
        self.x_key().cmp(&other.x_key())
    }

    #[inline]
    pub fn cmp_y(&self, other: &Point) -> Ordering {
        self.y_key().cmp(&other.y_key())
    }

    /// Strictly west of `other` in x order.
    #[inline]
    pub fn left_of(&self, other: &Point) -> bool {
        self.x_key() < other.x_key()
    }

    /// Strictly south of `other` in y order.
    #[inline]
    pub fn lower_than(&self, other: &Point) -> bool {
        self.y_key() < other.y_key()
    }

    /// True when `self` is strictly south-west of `other` in both key orders.
    #[inline]
    pub fn south_west_of(&self, other: &Point) -> bool {
        self.left_of(other) && self.lower_than(other)
    }
}

/// Sign of the cross product `(q - p) x (r - p)`: `+1` when `r` is strictly
/// left of the directed line `p -> q`, `0` when collinear, `-1` otherwise.
#[inline]
pub fn orientation(p: &Point, q: &Point, r: &Point) -> i32 {
    let det = cross(p, q, r);
    match det.cmp(&0) {
        Ordering::Greater => 1,
        Ordering::Equal => 0,
        Ordering::Less => -1,
    }
}

/// The raw determinant behind [`orientation`].
#[inline]
pub fn cross(p: &Point, q: &Point, r: &Point) -> i128 {
    let (ux, uy) = ((q.x - p.x) as i128, (q.y - p.y) as i128);
    let (vx, vy) = ((r.x - p.x) as i128, (r.y - p.y) as i128);
    ux * vy - uy * vx
}

/// `r` strictly above the line through two finite points (order irrelevant).
#[inline]
pub fn above_line(p: &Point, q: &Point, r: &Point) -> bool {
    if p.left_of(q) {
        cross(p, q, r) > 0
    } else {
        cross(q, p, r) > 0
    }
}

/// Compares the slope of `a -> b` with the slope of `c -> d`. Both vectors
/// must point east in x order.
#[inline]
pub fn cmp_slope(a: &Point, b: &Point, c: &Point, d: &Point) -> Ordering {
    debug_assert!(a.left_of(b) && c.left_of(d));
    let (ux, uy) = ((b.x - a.x) as i128, (b.y - a.y) as i128);
    let (vx, vy) = ((d.x - c.x) as i128, (d.y - c.y) as i128);
    // slope(u) < slope(v)  <=>  u x v > 0
    0.cmp(&(ux * vy - uy * vx))
}

/// A chain endpoint that may carry a symbolic infinite coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtPoint {
    Finite(Point),
    /// `(head.x, -inf)`: the sentinel before the head of a full chain.
    LeftSentinel(Point),
    /// `(+inf, tail.y)`: the sentinel after the tail of a full chain.
    RightSentinel(Point),
    /// `(-inf, -inf)`: bridge end for an empty left tree.
    NegInfinity,
    /// `(+inf, -inf)`: right end of a degenerate bridge.
    Degenerate,
}

impl ExtPoint {
    pub fn finite(&self) -> Option<Point> {
        match self {
            ExtPoint::Finite(p) => Some(*p),
            _ => None,
        }
    }

    pub fn is_sentinel(&self) -> bool {
        !matches!(self, ExtPoint::Finite(_))
    }
}

/// `r` strictly above the (extended) line through `p` and `q`.
///
/// Sentinels are resolved by their directional limits: a left sentinel
/// `(x_h, -inf)` makes the line vertical at `x_h`, so `r` is above iff it is
/// west of `x_h`; a right sentinel `(+inf, y_t)` makes the line horizontal at
/// `y_t`, so `r` is above iff it is north of `y_t`.
///
/// # Panics
/// If both `p` and `q` are sentinels, or either is a bridge-only infinity.
pub fn above(p: &ExtPoint, q: &ExtPoint, r: &Point) -> bool {
    use ExtPoint::*;
    match (p, q) {
        (Finite(a), Finite(b)) => above_line(a, b, r),
        (LeftSentinel(h), Finite(_)) | (Finite(_), LeftSentinel(h)) => r.left_of(h),
        (RightSentinel(t), Finite(_)) | (Finite(_), RightSentinel(t)) => t.lower_than(r),
        _ => panic!("above: both line points are sentinels ({p:?}, {q:?})"),
    }
}

/// True iff the full chain over `chain` (sentinels attached) dominates `r`:
/// `r` lies on or below one of its segments `(p_i, p_i+1)`, the right
/// sentinel segment included and the left one excluded. Points of the chain
/// itself are never dominated.
pub fn dominates(chain: &[Point], r: &Point) -> bool {
    if chain.is_empty() || chain.iter().any(|p| p.id == r.id) {
        return false;
    }
    let tail = chain[chain.len() - 1];
    if !r.left_of(&tail) {
        return !tail.lower_than(r);
    }
    if r.left_of(&chain[0]) {
        return false;
    }
    // first vertex strictly east of r; r lies on segment (idx-1, idx)
    let idx = chain.partition_point(|p| !r.left_of(p));
    let (a, b) = (chain[idx - 1], chain[idx]);
    cross(&a, &b, r) <= 0
}

/// Checks that `chain` is a strict north-west monotone convex chain.
pub fn is_nw_chain(chain: &[Point]) -> bool {
    chain.windows(2).all(|w| w[0].south_west_of(&w[1]))
        && chain.windows(3).all(|w| cross(&w[0], &w[1], &w[2]) < 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::new(0, x, y)
    }

    fn pid(id: u32, x: i64, y: i64) -> Point {
        Point::new(id, x, y)
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(&p(0, 0), &p(4, 0), &p(2, 1)), 1);
        assert_eq!(orientation(&p(0, 0), &p(4, 0), &p(2, 0)), 0);
        assert_eq!(orientation(&p(0, 0), &p(2, 3), &p(1, 1)), -1);
    }

    #[test]
    fn orientation_extreme_coordinates_is_exact() {
        let m = COORD_LIMIT;
        let a = p(-m, -m);
        let b = p(m, m - 1);
        let c = p(m - 1, m - 2);
        // (2m)(2m-2) - (2m-1)(2m-1) = -1
        assert_eq!(cross(&a, &b, &c), -1);
        assert_eq!(orientation(&a, &b, &c), -1);
    }

    #[test]
    fn above_examples() {
        let f = ExtPoint::Finite;
        assert!(above(&f(p(0, 0)), &f(p(4, 0)), &p(2, 1)));
        assert!(above(&f(p(5, 7)), &ExtPoint::RightSentinel(p(5, 7)), &p(6, 8)));
        assert!(above(&ExtPoint::LeftSentinel(p(3, 4)), &f(p(3, 4)), &p(2, 0)));
        assert!(!above(&f(p(0, 0)), &f(p(4, 0)), &p(2, 0)));
    }

    #[test]
    #[should_panic]
    fn above_rejects_two_sentinels() {
        above(&ExtPoint::LeftSentinel(p(0, 0)), &ExtPoint::RightSentinel(p(1, 1)), &p(0, 5));
    }

    #[test]
    fn dominates_examples() {
        let c = [pid(0, 0, 0), pid(1, 2, 3), pid(2, 5, 4)];
        assert!(dominates(&c, &pid(9, 1, 1)));
        assert!(dominates(&c, &pid(9, 6, 2)));
        assert!(!dominates(&c, &pid(9, 1, 2)));
        assert!(!dominates(&c, &c[1]));
        // left of the head is never dominated
        assert!(!dominates(&c, &pid(9, -1, -5)));
        // on a segment counts as dominated
        assert!(dominates(&[pid(0, 0, 0), pid(1, 2, 2)], &pid(9, 1, 1)));
        // directly below the head is west of it in x order
        assert!(!dominates(&c, &pid(9, 0, -3)));
    }

    #[test]
    fn chain_shape_check() {
        assert!(is_nw_chain(&[p(0, 0), p(2, 3), p(5, 4)]));
        assert!(!is_nw_chain(&[p(0, 0), p(1, 1), p(2, 2)]));
        assert!(!is_nw_chain(&[p(0, 0), p(2, 1), p(3, 3)]));
    }

    #[test]
    fn slope_comparison() {
        assert_eq!(cmp_slope(&p(0, 0), &p(1, 1), &p(0, 0), &p(1, 2)), Ordering::Less);
        assert_eq!(cmp_slope(&p(0, 0), &p(2, 2), &p(5, 5), &p(6, 6)), Ordering::Equal);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn coord() -> impl Strategy<Value = i64> {
            -COORD_LIMIT..=COORD_LIMIT
        }

        fn big_det(p: &Point, q: &Point, r: &Point) -> i32 {
            // split each coordinate into 16-bit limbs and evaluate the
            // determinant in a wider signed accumulation
            let f = |a: i64, b: i64| -> [i64; 2] { [(a - b) >> 16, (a - b) & 0xffff] };
            let (ux, uy, vx, vy) = (f(q.x, p.x), f(q.y, p.y), f(r.x, p.x), f(r.y, p.y));
            let mul = |a: [i64; 2], b: [i64; 2]| -> [i128; 3] {
                [
                    (a[0] * b[0]) as i128,
                    (a[0] * b[1] + a[1] * b[0]) as i128,
                    (a[1] * b[1]) as i128,
                ]
            };
            let l = mul(ux, vy);
            let rr = mul(uy, vx);
            let v = ((l[0] - rr[0]) << 32) + ((l[1] - rr[1]) << 16) + (l[2] - rr[2]);
            v.signum() as i32
        }

        proptest! {
            #[test]
            fn orientation_matches_limb_arithmetic(
                a in (coord(), coord()), b in (coord(), coord()), c in (coord(), coord())
            ) {
                let (a, b, c) = (p(a.0, a.1), p(b.0, b.1), p(c.0, c.1));
                prop_assert_eq!(orientation(&a, &b, &c), big_det(&a, &b, &c));
            }

            #[test]
            fn above_finite_is_left_turn(
                a in (-1000i64..1000, -1000i64..1000), b in (-1000i64..1000, -1000i64..1000),
                c in (-1000i64..1000, -1000i64..1000)
            ) {
                let (a, b, c) = (p(a.0, a.1), p(b.0, b.1), p(c.0, c.1));
                prop_assume!(a.x < b.x);
                let f = ExtPoint::Finite;
                prop_assert_eq!(above(&f(a), &f(b), &c), orientation(&a, &b, &c) == 1);
            }
        }
    }
}
