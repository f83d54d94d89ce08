//! Exact rational kernel: coordinates, points, segments and the predicates
//! every other module is built on. Nothing in here rounds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::GeomError;

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact division; `None` on a zero divisor.
pub fn checked_div(a: &Rat, b: &Rat) -> Option<Rat> {
    if b.is_zero() {
        None
    } else {
        Some(a / b)
    }
}

/// Parse `p`, `-p` or `p/q` into a reduced rational.
pub fn parse_rat(s: &str) -> Result<Rat, GeomError> {
    let bad = || GeomError::BadRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let ok = |t: &str| {
        let digits = t.strip_prefix('-').unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok(num) || !ok(den) || den.starts_with('-') {
        return Err(bad());
    }
    let n = BigInt::from_str(num).map_err(|_| bad())?;
    let d = BigInt::from_str(den).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(GeomError::DivisionByZero);
    }
    Ok(Rat::new(n, d))
}

/// Integers print bare, everything else as a reduced `p/q`.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point::new(rat(x), rat(y))
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn scale(&self, k: &Rat) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", format_rat(&self.x), format_rat(&self.y))
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-&self.x, -&self.y)
    }
}

impl Mul<&Rat> for &Point {
    type Output = Point;
    fn mul(self, k: &Rat) -> Point {
        self.scale(k)
    }
}

/// A closed segment. The endpoint order is kept as given, but equality of
/// segments as point sets is [`Segment::same_set`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub p: Point,
    pub q: Point,
}

impl Segment {
    pub fn new(p: Point, q: Point) -> Result<Self, GeomError> {
        if p == q {
            return Err(GeomError::ZeroLength(p));
        }
        Ok(Segment { p, q })
    }

    pub fn int(x1: i64, y1: i64, x2: i64, y2: i64) -> Self {
        Segment::new(Point::int(x1, y1), Point::int(x2, y2)).expect("zero-length segment")
    }

    pub fn endpoint(&self, end: usize) -> &Point {
        if end == 0 {
            &self.p
        } else {
            &self.q
        }
    }

    pub fn same_set(&self, other: &Segment) -> bool {
        (self.p == other.p && self.q == other.q) || (self.p == other.q && self.q == other.p)
    }

    pub fn is_horizontal(&self) -> bool {
        self.p.y == self.q.y
    }

    pub fn is_vertical(&self) -> bool {
        self.p.x == self.q.x
    }

    /// Slope as a rational, `None` for vertical segments.
    pub fn slope(&self) -> Option<Rat> {
        checked_div(&(&self.q.y - &self.p.y), &(&self.q.x - &self.p.x))
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.p, self.q)
    }
}

/// Intersection semantics for [`segments_intersect`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    ClosedClosed,
    /// The first segment is open (its endpoints are excluded).
    OpenClosed,
}

/// Minimal interface the intersection routines need, so the same code runs
/// over big rationals and over the machine-integer fast path.
pub trait Planar: Clone + PartialEq {
    type Coord: Ord + Clone;
    fn x(&self) -> &Self::Coord;
    fn y(&self) -> &Self::Coord;
    /// Sign of (b - a) x (c - a).
    fn orient(a: &Self, b: &Self, c: &Self) -> i8;

    fn lex_cmp(&self, other: &Self) -> Ordering {
        self.x().cmp(other.x()).then_with(|| self.y().cmp(other.y()))
    }
}

impl Planar for Point {
    type Coord = Rat;
    fn x(&self) -> &Rat {
        &self.x
    }
    fn y(&self) -> &Rat {
        &self.y
    }
    fn orient(a: &Self, b: &Self, c: &Self) -> i8 {
        let cross = (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x);
        sign_of(&cross)
    }
}

/// Integer point used when every coordinate of an instance is an integer of
/// modest size. Cross products are evaluated in `i128`, which stays exact for
/// coordinates below [`IntPoint::LIMIT`] in absolute value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntPoint {
    pub x: i64,
    pub y: i64,
}

impl IntPoint {
    pub const LIMIT: i64 = 1 << 61;

    pub fn from_point(p: &Point) -> Option<IntPoint> {
        if !p.is_integral() {
            return None;
        }
        let x = p.x.numer().to_i64()?;
        let y = p.y.numer().to_i64()?;
        if x.abs() >= Self::LIMIT || y.abs() >= Self::LIMIT {
            return None;
        }
        Some(IntPoint { x, y })
    }
}

impl Planar for IntPoint {
    type Coord = i64;
    fn x(&self) -> &i64 {
        &self.x
    }
    fn y(&self) -> &i64 {
        &self.y
    }
    #[inline]
    fn orient(a: &Self, b: &Self, c: &Self) -> i8 {
        let cross = (b.x - a.x) as i128 * (c.y - a.y) as i128
            - (b.y - a.y) as i128 * (c.x - a.x) as i128;
        cross.signum() as i8
    }
}

fn sign_of(r: &Rat) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of the cross product (b - a) x (c - a): +1 counterclockwise, -1
/// clockwise, 0 collinear.
pub fn orientation(a: &Point, b: &Point, c: &Point) -> i8 {
    Point::orient(a, b, c)
}

fn ordered<'a, P: Planar>(a: &'a P, b: &'a P) -> (&'a P, &'a P) {
    if a.lex_cmp(b) == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    }
}

/// `r` lies on the closed segment `pq`, given that the three are collinear.
fn within_collinear<P: Planar>(p: &P, q: &P, r: &P) -> bool {
    let (lo, hi) = ordered(p, q);
    r.lex_cmp(lo) != Ordering::Less && r.lex_cmp(hi) != Ordering::Greater
}

/// Closed segments `ab` and `cd` share a point.
pub fn closed_closed<P: Planar>(a: &P, b: &P, c: &P, d: &P) -> bool {
    let o1 = P::orient(a, b, c);
    let o2 = P::orient(a, b, d);
    if o1 != 0 && o1 == o2 {
        return false;
    }
    let o3 = P::orient(c, d, a);
    let o4 = P::orient(c, d, b);
    if o3 != 0 && o3 == o4 {
        return false;
    }
    if o1 == 0 && o2 == 0 {
        // Collinear: the lexicographic ranges must overlap.
        let (lo1, hi1) = ordered(a, b);
        let (lo2, hi2) = ordered(c, d);
        return lo2.lex_cmp(hi1) != Ordering::Greater && lo1.lex_cmp(hi2) != Ordering::Greater;
    }
    if o1 == 0 {
        return within_collinear(a, b, c);
    }
    if o2 == 0 {
        return within_collinear(a, b, d);
    }
    if o3 == 0 {
        return within_collinear(c, d, a);
    }
    if o4 == 0 {
        return within_collinear(c, d, b);
    }
    true
}

/// Open segment `pq` (endpoints excluded) meets closed segment `rs`.
pub fn open_closed<P: Planar>(p: &P, q: &P, r: &P, s: &P) -> bool {
    let o1 = P::orient(p, q, r);
    let o2 = P::orient(p, q, s);
    if o1 != 0 && o1 == o2 {
        return false;
    }
    if o1 == 0 && o2 == 0 {
        // Open interval (lo, hi) against closed [lo2, hi2] along the line.
        let (lo, hi) = ordered(p, q);
        let (lo2, hi2) = ordered(r, s);
        return lo2.lex_cmp(hi) == Ordering::Less && hi2.lex_cmp(lo) == Ordering::Greater;
    }
    // The supporting lines cross in a single point, which lies on the closed
    // segment rs. It is interior to pq iff p and q are strictly apart from rs.
    let o3 = P::orient(r, s, p);
    let o4 = P::orient(r, s, q);
    o3 * o4 < 0
}

pub fn segments_intersect(s1: &Segment, s2: &Segment, mode: Mode) -> bool {
    match mode {
        Mode::ClosedClosed => closed_closed(&s1.p, &s1.q, &s2.p, &s2.q),
        Mode::OpenClosed => open_closed(&s1.p, &s1.q, &s2.p, &s2.q),
    }
}

/// A witness point of the intersection of two closed segments, if any.
pub fn intersection_point(s1: &Segment, s2: &Segment) -> Option<Point> {
    if !segments_intersect(s1, s2, Mode::ClosedClosed) {
        return None;
    }
    let (a, b, c, d) = (&s1.p, &s1.q, &s2.p, &s2.q);
    if orientation(a, b, c) == 0 && orientation(a, b, d) == 0 {
        // Collinear overlap: the larger of the two lower ends lies in both.
        let (lo1, _) = ordered(a, b);
        let (lo2, _) = ordered(c, d);
        return Some(if lo1 < lo2 { lo2.clone() } else { lo1.clone() });
    }
    let r = b - a;
    let s = d - c;
    let denom = &r.x * &s.y - &r.y * &s.x;
    let ca = c - a;
    let t = (&ca.x * &s.y - &ca.y * &s.x) / denom;
    Some(a + &(&r * &t))
}

/// Exact comparison of two unsigned angles in [0, pi]: is the angle at `u`
/// between rays u->a and u->b smaller than the angle at `v` between v->c and
/// v->d?
pub fn angle_less(
    u: &Point,
    a: &Point,
    b: &Point,
    v: &Point,
    c: &Point,
    d: &Point,
) -> Result<bool, GeomError> {
    if a == u || b == u || c == v || d == v {
        return Err(GeomError::DegenerateRay);
    }
    let (c1, d1) = cross_dot(&(a - u), &(b - u));
    let (c2, d2) = cross_dot(&(c - v), &(d - v));
    Ok(angle_cmp(&c1.abs(), &d1, &c2.abs(), &d2) == Ordering::Less)
}

fn cross_dot(p: &Point, q: &Point) -> (Rat, Rat) {
    let cross = &p.x * &q.y - &p.y * &q.x;
    let dot = &p.x * &q.x + &p.y * &q.y;
    (cross, dot)
}

/// Compare angles atan2(s1, c1) and atan2(s2, c2) with s1, s2 >= 0, i.e.
/// both angles in [0, pi]. Uses the quadrant first, then cross-multiplied
/// cotangents within a quadrant.
fn angle_cmp(s1: &Rat, c1: &Rat, s2: &Rat, c2: &Rat) -> Ordering {
    // Quadrant: 0 for angle 0, 1 for (0, pi/2), 2 for pi/2, 3 for (pi/2, pi), 4 for pi.
    fn quadrant(s: &Rat, c: &Rat) -> u8 {
        match (s.is_zero(), sign_of(c)) {
            (true, 1) => 0,
            (true, _) => 4,
            (false, 1) => 1,
            (false, 0) => 2,
            (false, _) => 3,
        }
    }
    let q1 = quadrant(s1, c1);
    let q2 = quadrant(s2, c2);
    if q1 != q2 {
        return q1.cmp(&q2);
    }
    match q1 {
        // On (0, pi) the cotangent c/s is strictly decreasing in the angle.
        1 | 3 => (c2 * s1).cmp(&(c1 * s2)),
        _ => Ordering::Equal,
    }
}

/// Componentwise minimum and maximum.
pub fn bounding_box<'a, I>(points: I) -> Result<(Point, Point), GeomError>
where
    I: IntoIterator<Item = &'a Point>,
{
    let mut it = points.into_iter();
    let first = it.next().ok_or(GeomError::EmptyPointSet)?;
    let mut lo = first.clone();
    let mut hi = first.clone();
    for p in it {
        if p.x < lo.x {
            lo.x = p.x.clone();
        }
        if p.y < lo.y {
            lo.y = p.y.clone();
        }
        if p.x > hi.x {
            hi.x = p.x.clone();
        }
        if p.y > hi.y {
            hi.y = p.y.clone();
        }
    }
    Ok((lo, hi))
}

/// Smallest positive integer `k` with `k >= r` (for positive `r`).
pub fn ceil_positive(r: &Rat) -> BigInt {
    let c = r.ceil().to_integer();
    if c < BigInt::one() {
        BigInt::one()
    } else {
        c
    }
}
