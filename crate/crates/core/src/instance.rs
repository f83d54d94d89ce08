//! Segment families: the data model, disjointness classification, incidence
//! discovery and the `.segs` text format.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::InstanceError;
use crate::geom::{
    closed_closed, format_rat, intersection_point, orientation, parse_rat, IntPoint, Planar, Point, Segment,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    /// Pairwise disjoint closed segments.
    Disjoint,
    /// Segments may share endpoints, nothing else.
    InteriorDisjoint,
}

impl Class {
    pub fn tag(self) -> &'static str {
        match self {
            Class::Disjoint => "disjoint",
            Class::InteriorDisjoint => "interior-disjoint",
        }
    }
}

impl FromStr for Class {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "disjoint" => Ok(Class::Disjoint),
            "interior-disjoint" => Ok(Class::InteriorDisjoint),
            other => Err(format!("unknown class `{other}`")),
        }
    }
}

/// Reference to one end of a segment: `end` is 0 for `p`, 1 for `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndRef {
    pub seg: usize,
    pub end: usize,
}

impl EndRef {
    pub fn new(seg: usize, end: usize) -> Self {
        EndRef { seg, end }
    }

    /// Dense numbering `2 * seg + end`.
    pub fn index(self) -> usize {
        2 * self.seg + self.end
    }

    pub fn from_index(i: usize) -> Self {
        EndRef { seg: i / 2, end: i % 2 }
    }

    pub fn mate(self) -> Self {
        EndRef { seg: self.seg, end: 1 - self.end }
    }
}

impl fmt::Display for EndRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.seg, self.end)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentFamily {
    pub segments: Vec<Segment>,
    pub class: Class,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Two segments meet somewhere the declared class forbids.
    Intersect { a: usize, b: usize, at: Point },
    /// An endpoint is shared by two parallel segments or by more than two.
    Crowded { at: Point, segments: Vec<usize> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Intersect { a, b, at } => {
                write!(f, "segments {a} and {b} intersect at {at}")
            }
            Violation::Crowded { at, segments } => {
                write!(f, "endpoint {at} is shared by segments {segments:?}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid(Class),
    Invalid(Violation),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endpoint {
    pub point: Point,
    pub ends: Vec<EndRef>,
}

impl Endpoint {
    pub fn segments(&self) -> Vec<usize> {
        self.ends.iter().map(|e| e.seg).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    RightUp,
    LeftUp,
    RightDown,
    LeftDown,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::RightUp,
        Variant::LeftUp,
        Variant::RightDown,
        Variant::LeftDown,
    ];

    pub fn from_directions(right: bool, up: bool) -> Self {
        match (right, up) {
            (true, true) => Variant::RightUp,
            (false, true) => Variant::LeftUp,
            (true, false) => Variant::RightDown,
            (false, false) => Variant::LeftDown,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Variant::RightUp => "right-up",
            Variant::LeftUp => "left-up",
            Variant::RightDown => "right-down",
            Variant::LeftDown => "left-down",
        }
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Variant::ALL
            .into_iter()
            .find(|v| v.tag() == s)
            .ok_or_else(|| format!("unknown variant `{s}`"))
    }
}

/// A shared endpoint of one horizontal and one vertical segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub o: Point,
    pub h_index: usize,
    pub v_index: usize,
    pub variant: Variant,
}

impl SegmentFamily {
    pub fn new(segments: Vec<Segment>, class: Class) -> Self {
        SegmentFamily { segments, class }
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.segments.iter().flat_map(|s| [&s.p, &s.q])
    }

    pub fn point(&self, e: EndRef) -> &Point {
        self.segments[e.seg].endpoint(e.end)
    }

    /// Check the declared class. Returns the first violating pair in index
    /// order together with a witness point.
    pub fn validate(&self) -> Result<Verdict, InstanceError> {
        for (i, s) in self.segments.iter().enumerate() {
            if s.p == s.q {
                return Err(InstanceError::ZeroLength(i));
            }
        }
        // Machine-integer copies let most pairs be dismissed cheaply.
        let ints: Vec<Option<[IntPoint; 2]>> = self
            .segments
            .iter()
            .map(|s| Some([IntPoint::from_point(&s.p)?, IntPoint::from_point(&s.q)?]))
            .collect();
        for i in 0..self.segments.len() {
            for j in i + 1..self.segments.len() {
                if let (Some([p, q]), Some([r, t])) = (&ints[i], &ints[j]) {
                    if !closed_closed(p, q, r, t) {
                        continue;
                    }
                }
                let (a, b) = (&self.segments[i], &self.segments[j]);
                if a.same_set(b) {
                    return Err(InstanceError::Duplicate(i, j));
                }
                if let Some(at) = self.pair_violation(a, b) {
                    return Ok(Verdict::Invalid(Violation::Intersect { a: i, b: j, at }));
                }
            }
        }
        if self.class == Class::InteriorDisjoint {
            for ep in self.endpoints() {
                let crowded = match ep.ends.as_slice() {
                    [_] => false,
                    [x, y] => parallel(&self.segments[x.seg], &self.segments[y.seg]),
                    _ => true,
                };
                if crowded {
                    return Ok(Verdict::Invalid(Violation::Crowded {
                        at: ep.point.clone(),
                        segments: ep.segments(),
                    }));
                }
            }
        }
        Ok(Verdict::Valid(self.class))
    }

    fn pair_violation(&self, a: &Segment, b: &Segment) -> Option<Point> {
        let at = intersection_point(a, b)?;
        if self.class == Class::Disjoint {
            return Some(at);
        }
        let shared = [&a.p, &a.q].into_iter().find(|p| **p == b.p || **p == b.q);
        let Some(c) = shared else {
            return Some(at);
        };
        let a_far = if a.p == *c { &a.q } else { &a.p };
        let b_far = if b.p == *c { &b.q } else { &b.p };
        if orientation(c, a_far, b_far) != 0 {
            return None;
        }
        // Collinear from a common endpoint: fine only if they leave it in
        // opposite directions.
        if a_far.lex_cmp(c) != b_far.lex_cmp(c) {
            return None;
        }
        Some(nearer(c, a_far, b_far).clone())
    }

    /// Deduplicated endpoints in order of first appearance, each with the
    /// segment ends that sit on it.
    pub fn endpoints(&self) -> Vec<Endpoint> {
        let mut index: HashMap<&Point, usize> = HashMap::new();
        let mut out: Vec<Endpoint> = Vec::new();
        for (i, s) in self.segments.iter().enumerate() {
            for (end, p) in [&s.p, &s.q].into_iter().enumerate() {
                let e = EndRef::new(i, end);
                match index.get(p) {
                    Some(&k) => out[k].ends.push(e),
                    None => {
                        index.insert(p, out.len());
                        out.push(Endpoint {
                            point: p.clone(),
                            ends: vec![e],
                        });
                    }
                }
            }
        }
        out
    }

    /// One incidence per endpoint shared by a horizontal and a vertical
    /// segment, classified by the directions both segments leave it in.
    pub fn find_incidences(&self) -> Result<Vec<Incidence>, InstanceError> {
        for (i, s) in self.segments.iter().enumerate() {
            if !s.is_horizontal() && !s.is_vertical() {
                return Err(InstanceError::NotAxisParallel(i));
            }
        }
        let mut out = Vec::new();
        for ep in self.endpoints() {
            let [x, y] = match ep.ends.as_slice() {
                [_] => continue,
                [x, y] => [*x, *y],
                _ => {
                    let s = ep.segments();
                    return Err(InstanceError::ParallelAtEndpoint {
                        point: ep.point,
                        a: s[0],
                        b: s[1],
                    });
                }
            };
            let (sx, sy) = (&self.segments[x.seg], &self.segments[y.seg]);
            let (h, v) = match (sx.is_horizontal(), sy.is_horizontal()) {
                (true, false) => (x, y),
                (false, true) => (y, x),
                _ => {
                    return Err(InstanceError::ParallelAtEndpoint {
                        point: ep.point,
                        a: x.seg,
                        b: y.seg,
                    })
                }
            };
            let h_far = self.point(h.mate());
            let v_far = self.point(v.mate());
            let variant = Variant::from_directions(h_far.x > ep.point.x, v_far.y > ep.point.y);
            out.push(Incidence {
                o: ep.point,
                h_index: h.seg,
                v_index: v.seg,
                variant,
            });
        }
        Ok(out)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("segs v1\nclass {}\n", self.class.tag());
        for s in &self.segments {
            out.push_str(&format!(
                "{} {} {} {}\n",
                format_rat(&s.p.x),
                format_rat(&s.p.y),
                format_rat(&s.q.x),
                format_rat(&s.q.y)
            ));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let err = |line: usize, msg: String| InstanceError::Parse { line, msg };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, "segs v1")) => {}
            Some((n, l)) => return Err(err(n, format!("expected `segs v1`, found `{l}`"))),
            None => return Err(err(0, "empty input".into())),
        }
        let class = match lines.next() {
            Some((n, l)) => {
                let tag = l
                    .strip_prefix("class ")
                    .ok_or_else(|| err(n, format!("expected class line, found `{l}`")))?;
                Class::from_str(tag.trim()).map_err(|m| err(n, m))?
            }
            None => return Err(err(0, "missing class line".into())),
        };
        let mut segments = Vec::new();
        for (n, l) in lines {
            let fields: Vec<&str> = l.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(err(n, format!("expected 4 coordinates, found {}", fields.len())));
            }
            let mut c = Vec::with_capacity(4);
            for f in fields {
                c.push(parse_rat(f).map_err(|e| err(n, e.to_string()))?);
            }
            let [x1, y1, x2, y2]: [_; 4] = c.try_into().expect("four coordinates");
            let s = Segment::new(Point::new(x1, y1), Point::new(x2, y2)).map_err(|e| err(n, e.to_string()))?;
            segments.push(s);
        }
        Ok(SegmentFamily { segments, class })
    }
}

fn parallel(a: &Segment, b: &Segment) -> bool {
    let d1 = &a.q - &a.p;
    let d2 = &b.q - &b.p;
    &d1.x * &d2.y == &d1.y * &d2.x
}

/// Of two points on a common ray from `c`, the one closer to `c`.
fn nearer<'a>(c: &Point, a: &'a Point, b: &'a Point) -> &'a Point {
    let da = &(a - c);
    let db = &(b - c);
    let na = &da.x * &da.x + &da.y * &da.y;
    let nb = &db.x * &db.x + &db.y * &db.y;
    if na <= nb {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(segs: &[(i64, i64, i64, i64)], class: Class) -> SegmentFamily {
        SegmentFamily::new(
            segs.iter().map(|&(a, b, c, d)| Segment::int(a, b, c, d)).collect(),
            class,
        )
    }

    #[test]
    fn validate_examples() {
        let l = fam(&[(0, 0, 2, 0), (0, 0, 0, 2)], Class::InteriorDisjoint);
        assert_eq!(l.validate().unwrap(), Verdict::Valid(Class::InteriorDisjoint));
        let t = fam(&[(0, 0, 2, 0), (1, 0, 1, 2)], Class::InteriorDisjoint);
        assert_eq!(
            t.validate().unwrap(),
            Verdict::Invalid(Violation::Intersect { a: 0, b: 1, at: Point::int(1, 0) })
        );
        // The L shape is not disjoint.
        let l2 = fam(&[(0, 0, 2, 0), (0, 0, 0, 2)], Class::Disjoint);
        assert_eq!(
            l2.validate().unwrap(),
            Verdict::Invalid(Violation::Intersect { a: 0, b: 1, at: Point::int(0, 0) })
        );
    }

    #[test]
    fn validate_errors_and_crowding() {
        let dup = fam(&[(0, 0, 2, 0), (2, 0, 0, 0)], Class::Disjoint);
        assert_eq!(dup.validate(), Err(InstanceError::Duplicate(0, 1)));
        let mut zero = fam(&[(0, 0, 2, 0)], Class::Disjoint);
        zero.segments[0].q = Point::int(0, 0);
        assert_eq!(zero.validate(), Err(InstanceError::ZeroLength(0)));
        // Collinear continuation through a shared endpoint.
        let straight = fam(&[(0, 0, 1, 0), (1, 0, 3, 0)], Class::InteriorDisjoint);
        assert!(matches!(
            straight.validate().unwrap(),
            Verdict::Invalid(Violation::Crowded { .. })
        ));
        // Collinear overlap from a shared endpoint.
        let fold = fam(&[(0, 0, 3, 0), (0, 0, 1, 0)], Class::InteriorDisjoint);
        assert_eq!(
            fold.validate().unwrap(),
            Verdict::Invalid(Violation::Intersect { a: 0, b: 1, at: Point::int(1, 0) })
        );
        let star = fam(&[(0, 0, 1, 0), (0, 0, 0, 1), (0, 0, -1, -1)], Class::InteriorDisjoint);
        assert!(matches!(
            star.validate().unwrap(),
            Verdict::Invalid(Violation::Crowded { .. })
        ));
    }

    #[test]
    fn endpoint_examples() {
        let l = fam(&[(0, 0, 2, 0), (0, 0, 0, 2)], Class::InteriorDisjoint);
        let eps = l.endpoints();
        assert_eq!(eps.len(), 3);
        assert_eq!(eps[0].point, Point::int(0, 0));
        assert_eq!(eps[0].segments(), vec![0, 1]);
        let d = fam(&[(0, 0, 1, 0), (0, 1, 1, 1), (5, 5, 6, 7)], Class::Disjoint);
        assert_eq!(d.endpoints().len(), 6);
    }

    #[test]
    fn incidence_examples() {
        let l = fam(&[(0, 0, 2, 0), (0, 0, 0, 2)], Class::InteriorDisjoint);
        let inc = l.find_incidences().unwrap();
        assert_eq!(
            inc,
            vec![Incidence { o: Point::int(0, 0), h_index: 0, v_index: 1, variant: Variant::RightUp }]
        );
        let rect = fam(
            &[(0, 0, 2, 0), (2, 0, 2, 1), (2, 1, 0, 1), (0, 1, 0, 0)],
            Class::InteriorDisjoint,
        );
        let mut vs: Vec<Variant> = rect.find_incidences().unwrap().iter().map(|i| i.variant).collect();
        vs.sort();
        assert_eq!(vs, Variant::ALL.to_vec());
        let none = fam(&[(0, 0, 2, 0), (0, 1, 0, 2)], Class::InteriorDisjoint);
        assert!(none.find_incidences().unwrap().is_empty());
        let diag = fam(&[(0, 0, 2, 2)], Class::InteriorDisjoint);
        assert_eq!(diag.find_incidences(), Err(InstanceError::NotAxisParallel(0)));
        let par = fam(&[(0, 0, 1, 0), (1, 0, 3, 0)], Class::InteriorDisjoint);
        assert!(matches!(par.find_incidences(), Err(InstanceError::ParallelAtEndpoint { .. })));
    }

    #[test]
    fn parse_examples() {
        let t = "segs v1\nclass interior-disjoint\n0 0 2 0\n0 0 0 2\n";
        let f = SegmentFamily::parse(t).unwrap();
        assert_eq!(f, fam(&[(0, 0, 2, 0), (0, 0, 0, 2)], Class::InteriorDisjoint));
        assert_eq!(f.serialize(), t);
        let messy = "# header comment\nsegs v1\n\nclass disjoint # trailing\n 3/1 -4/2  1/3 0 # c\n";
        let g = SegmentFamily::parse(messy).unwrap();
        assert_eq!(g.serialize(), "segs v1\nclass disjoint\n3 -2 1/3 0\n");
        assert_eq!(SegmentFamily::parse(&g.serialize()).unwrap(), g);
    }

    #[test]
    fn parse_errors() {
        let cases = [
            ("", 0),
            ("segs v2\n", 1),
            ("segs v1\nclass weird\n", 2),
            ("segs v1\nclass disjoint\n0 0 1\n", 3),
            ("segs v1\nclass disjoint\n0 0 0 0\n", 3),
            ("segs v1\nclass disjoint\n0 0 1 x\n", 3),
            ("segs v1\nclass disjoint\n0 0 1 1/0\n", 3),
        ];
        for (text, line) in cases {
            match SegmentFamily::parse(text) {
                Err(InstanceError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }
}
