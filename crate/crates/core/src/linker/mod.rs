//! Deciding whether a family can be linked into a simple polygon (circuit)
//! or a simple polygonal chain (path) by adding edges between endpoints.
//!
//! A [`Linking`] lists every segment end once, in walk order: positions
//! `2k, 2k + 1` are the two ends of one segment, and each following pair is an
//! added edge. Ends sitting on the same point (segments sharing an endpoint)
//! are joined by a zero-length added edge.

mod oracle;
mod search;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::LinkError;
use crate::geom::{closed_closed, open_closed, IntPoint, Planar, Point};
use crate::instance::{EndRef, SegmentFamily};

pub use oracle::{oracle_decide, ORACLE_CAP};
pub use search::{decide, decide_circuit, decide_path};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinkMode {
    Circuit,
    Path,
}

impl LinkMode {
    pub fn tag(self) -> &'static str {
        match self {
            LinkMode::Circuit => "circuit",
            LinkMode::Path => "path",
        }
    }
}

impl FromStr for LinkMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "circuit" => Ok(LinkMode::Circuit),
            "path" => Ok(LinkMode::Path),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linking {
    pub mode: LinkMode,
    pub order: Vec<EndRef>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    No,
    Yes(Linking),
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn witness(&self) -> Option<&Linking> {
        match self {
            Decision::Yes(w) => Some(w),
            Decision::No => None,
        }
    }
}

impl Linking {
    pub fn segment_count(&self) -> usize {
        self.order.len() / 2
    }

    /// End pairs joined by added edges, in walk order.
    pub fn added_edges(&self) -> Vec<(EndRef, EndRef)> {
        let m = self.order.len();
        let count = match self.mode {
            LinkMode::Circuit => m / 2,
            LinkMode::Path => (m / 2).saturating_sub(1),
        };
        (0..count)
            .map(|k| (self.order[2 * k + 1], self.order[(2 * k + 2) % m]))
            .collect()
    }

    /// Segment indices in walk order.
    pub fn segment_order(&self) -> Vec<usize> {
        self.order.iter().step_by(2).map(|e| e.seg).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.mode.tag());
        for e in &self.order {
            out.push_str(&format!("{e}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Linking, LinkError> {
        let bad = |m: String| LinkError::Parse(m);
        let mut tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(|l| l.split_whitespace());
        let mode = tokens
            .next()
            .ok_or_else(|| bad("empty witness".into()))
            .and_then(|t| LinkMode::from_str(t).map_err(bad))?;
        let mut order = Vec::new();
        for t in tokens {
            let inner = t
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| bad(format!("expected `(seg,end)`, found `{t}`")))?;
            let (s, e) = inner
                .split_once(',')
                .ok_or_else(|| bad(format!("expected `(seg,end)`, found `{t}`")))?;
            let seg = s.trim().parse().map_err(|_| bad(format!("bad segment index in `{t}`")))?;
            let end: usize = e.trim().parse().map_err(|_| bad(format!("bad end flag in `{t}`")))?;
            if end > 1 {
                return Err(bad(format!("end flag must be 0 or 1 in `{t}`")));
            }
            order.push(EndRef::new(seg, end));
        }
        Ok(Linking { mode, order })
    }
}

impl fmt::Display for Linking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Why a linking is not a simple polygon or chain through the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinkViolation {
    Empty,
    WrongLength { expected: usize, found: usize },
    UnknownEnd(EndRef),
    RepeatedEnd(EndRef),
    /// Positions `2k, 2k + 1` are not the two ends of one segment.
    NotAlternating(usize),
    /// An added edge joins the two ends of one segment.
    SelfLoop(usize),
    NotVisible(Point, Point),
    RepeatedVertex(Point),
    TooFewVertices(usize),
    /// Consecutive edges fold back over each other.
    Overlap(Point),
    /// Two non-consecutive edges meet.
    Crossing { first: (Point, Point), second: (Point, Point) },
}

impl fmt::Display for LinkViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use LinkViolation::*;
        match self {
            Empty => write!(f, "empty family"),
            WrongLength { expected, found } => {
                write!(f, "expected {expected} ends, found {found}")
            }
            UnknownEnd(e) => write!(f, "end {e} does not exist"),
            RepeatedEnd(e) => write!(f, "end {e} appears twice"),
            NotAlternating(k) => write!(f, "positions {} and {} are not one segment", 2 * k, 2 * k + 1),
            SelfLoop(s) => write!(f, "added edge closes segment {s} on itself"),
            NotVisible(p, q) => write!(f, "added edge {p}-{q} is not a visibility edge"),
            RepeatedVertex(p) => write!(f, "vertex {p} is visited twice"),
            TooFewVertices(k) => write!(f, "a polygon needs 3 vertices, found {k}"),
            Overlap(p) => write!(f, "consecutive edges overlap at {p}"),
            Crossing { first, second } => write!(
                f,
                "edges {}-{} and {}-{} meet",
                first.0, first.1, second.0, second.1
            ),
        }
    }
}

/// Independent checker: is `w` a simple polygon (or chain) through every
/// segment of `family`, using only the exact predicates?
pub fn verify_linking(family: &SegmentFamily, w: &Linking) -> Result<(), LinkViolation> {
    let n = family.len();
    if n == 0 {
        return Err(LinkViolation::Empty);
    }
    if w.order.len() != 2 * n {
        return Err(LinkViolation::WrongLength {
            expected: 2 * n,
            found: w.order.len(),
        });
    }
    let mut seen = HashSet::new();
    for e in &w.order {
        if e.seg >= n || e.end > 1 {
            return Err(LinkViolation::UnknownEnd(*e));
        }
        if !seen.insert(*e) {
            return Err(LinkViolation::RepeatedEnd(*e));
        }
    }
    for k in 0..n {
        if w.order[2 * k].mate() != w.order[2 * k + 1] {
            return Err(LinkViolation::NotAlternating(k));
        }
    }
    for (a, b) in w.added_edges() {
        if a.seg == b.seg {
            return Err(LinkViolation::SelfLoop(a.seg));
        }
    }

    let points: Vec<&Point> = w.order.iter().map(|e| family.point(*e)).collect();
    let int_pts: Option<Vec<IntPoint>> = points.iter().map(|p| IntPoint::from_point(p)).collect();
    let int_segs: Option<Vec<[IntPoint; 2]>> = family
        .segments
        .iter()
        .map(|s| Some([IntPoint::from_point(&s.p)?, IntPoint::from_point(&s.q)?]))
        .collect();
    match (int_pts, int_segs) {
        (Some(ip), Some(segs)) => check_geometry(w, &ip, &segs, &points),
        _ => {
            let own: Vec<Point> = points.iter().map(|p| (*p).clone()).collect();
            let segs: Vec<[Point; 2]> = family
                .segments
                .iter()
                .map(|s| [s.p.clone(), s.q.clone()])
                .collect();
            check_geometry(w, &own, &segs, &points)
        }
    }
}

/// `pts[i]` is the point of `w.order[i]`; `orig` the same points as
/// rationals, for reporting.
fn check_geometry<P: Planar + std::hash::Hash + Eq>(
    w: &Linking,
    pts: &[P],
    segs: &[[P; 2]],
    orig: &[&Point],
) -> Result<(), LinkViolation> {
    let m = pts.len();
    let circuit = w.mode == LinkMode::Circuit;
    // Added edges are visibility edges, unless they are zero-length joins.
    let added = if circuit { m / 2 } else { m / 2 - 1 };
    for k in 0..added {
        let (i, j) = (2 * k + 1, (2 * k + 2) % m);
        if pts[i] == pts[j] {
            continue;
        }
        if segs.iter().any(|[a, b]| open_closed(&pts[i], &pts[j], a, b)) {
            return Err(LinkViolation::NotVisible(orig[i].clone(), orig[j].clone()));
        }
    }

    // Polygon vertices after collapsing joins.
    let mut verts: Vec<usize> = Vec::with_capacity(m);
    for i in 0..m {
        if verts.last().map_or(true, |&l| pts[l] != pts[i]) {
            verts.push(i);
        }
    }
    if circuit && verts.len() > 1 && pts[verts[0]] == pts[*verts.last().unwrap()] {
        verts.pop();
    }
    let mut distinct = HashSet::new();
    for &v in &verts {
        if !distinct.insert(&pts[v]) {
            return Err(LinkViolation::RepeatedVertex(orig[v].clone()));
        }
    }
    let k = verts.len();
    if circuit && k < 3 {
        return Err(LinkViolation::TooFewVertices(k));
    }
    let edge_count = if circuit { k } else { k - 1 };
    let edge = |i: usize| (verts[i], verts[(i + 1) % k]);
    for i in 0..edge_count {
        for j in i + 1..edge_count {
            let (a, b) = edge(i);
            let (c, d) = edge(j);
            let adjacent = j == i + 1 || (circuit && i == 0 && j == edge_count - 1);
            if adjacent {
                // Shared vertex and the two far ends.
                let (far1, shared, far2) = if b == c { (a, b, d) } else { (b, a, c) };
                if P::orient(&pts[far1], &pts[shared], &pts[far2]) == 0
                    && pts[far1].lex_cmp(&pts[shared]) == pts[far2].lex_cmp(&pts[shared])
                {
                    return Err(LinkViolation::Overlap(orig[shared].clone()));
                }
            } else if closed_closed(&pts[a], &pts[b], &pts[c], &pts[d]) {
                return Err(LinkViolation::Crossing {
                    first: (orig[a].clone(), orig[b].clone()),
                    second: (orig[c].clone(), orig[d].clone()),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Segment;
    use crate::instance::Class;

    fn fam(segs: &[(i64, i64, i64, i64)]) -> SegmentFamily {
        SegmentFamily::new(
            segs.iter().map(|&(a, b, c, d)| Segment::int(a, b, c, d)).collect(),
            Class::Disjoint,
        )
    }

    fn ends(v: &[(usize, usize)]) -> Vec<EndRef> {
        v.iter().map(|&(s, e)| EndRef::new(s, e)).collect()
    }

    #[test]
    fn rectangle_witness() {
        let f = fam(&[(0, 0, 1, 0), (0, 1, 1, 1)]);
        // (0,0)->(1,0) then (1,0)-(1,1), (1,1)->(0,1), (0,1)-(0,0).
        let good = Linking { mode: LinkMode::Circuit, order: ends(&[(0, 0), (0, 1), (1, 1), (1, 0)]) };
        assert_eq!(verify_linking(&f, &good), Ok(()));
        let crossed = Linking { mode: LinkMode::Circuit, order: ends(&[(0, 0), (0, 1), (1, 0), (1, 1)]) };
        assert!(matches!(verify_linking(&f, &crossed), Err(LinkViolation::Crossing { .. })));
    }

    #[test]
    fn structural_violations() {
        let f = fam(&[(0, 0, 1, 0), (0, 1, 1, 1)]);
        let short = Linking { mode: LinkMode::Path, order: ends(&[(0, 0), (0, 1)]) };
        assert!(matches!(verify_linking(&f, &short), Err(LinkViolation::WrongLength { .. })));
        let split = Linking { mode: LinkMode::Path, order: ends(&[(0, 0), (1, 1), (0, 1), (1, 0)]) };
        assert_eq!(verify_linking(&f, &split), Err(LinkViolation::NotAlternating(0)));
        let rep = Linking { mode: LinkMode::Path, order: ends(&[(0, 0), (0, 1), (0, 0), (0, 1)]) };
        assert!(matches!(verify_linking(&f, &rep), Err(LinkViolation::RepeatedEnd(_))));
        let one = fam(&[(0, 0, 1, 0)]);
        let loop1 = Linking { mode: LinkMode::Circuit, order: ends(&[(0, 0), (0, 1)]) };
        assert_eq!(verify_linking(&one, &loop1), Err(LinkViolation::SelfLoop(0)));
        let chain1 = Linking { mode: LinkMode::Path, order: ends(&[(0, 1), (0, 0)]) };
        assert_eq!(verify_linking(&one, &chain1), Ok(()));
    }

    #[test]
    fn collinear_cases() {
        let f = fam(&[(0, 0, 1, 0), (2, 0, 3, 0)]);
        let bridge = Linking { mode: LinkMode::Path, order: ends(&[(0, 0), (0, 1), (1, 0), (1, 1)]) };
        assert_eq!(verify_linking(&f, &bridge), Ok(()));
        let fold = Linking { mode: LinkMode::Path, order: ends(&[(0, 0), (0, 1), (1, 1), (1, 0)]) };
        assert!(matches!(verify_linking(&f, &fold), Err(LinkViolation::NotVisible(..))));
        let closed = Linking { mode: LinkMode::Circuit, order: ends(&[(0, 0), (0, 1), (1, 0), (1, 1)]) };
        assert!(matches!(verify_linking(&f, &closed), Err(LinkViolation::NotVisible(..))));
    }

    #[test]
    fn shared_endpoint_joins() {
        let l = SegmentFamily::new(
            vec![Segment::int(0, 0, 2, 0), Segment::int(0, 0, 0, 2)],
            Class::InteriorDisjoint,
        );
        let tri = Linking { mode: LinkMode::Circuit, order: ends(&[(0, 0), (0, 1), (1, 1), (1, 0)]) };
        assert_eq!(verify_linking(&l, &tri), Ok(()));
        let chain = Linking { mode: LinkMode::Path, order: ends(&[(0, 1), (0, 0), (1, 0), (1, 1)]) };
        assert_eq!(verify_linking(&l, &chain), Ok(()));
        // Not using the join revisits the corner.
        let bad = Linking { mode: LinkMode::Path, order: ends(&[(0, 0), (0, 1), (1, 1), (1, 0)]) };
        assert!(verify_linking(&l, &bad).is_err());
    }

    #[test]
    fn witness_text() {
        let w = Linking { mode: LinkMode::Circuit, order: ends(&[(0, 0), (0, 1), (1, 1), (1, 0)]) };
        let t = w.to_text();
        assert_eq!(t, "circuit\n(0,0)\n(0,1)\n(1,1)\n(1,0)\n");
        assert_eq!(Linking::parse(&t).unwrap(), w);
        assert_eq!(Linking::parse("path (0,1) ( 0 , 0 )").ok(), None);
        assert_eq!(
            Linking::parse("path (0,1) (0,0)").unwrap().order,
            ends(&[(0, 1), (0, 0)])
        );
        assert!(Linking::parse("").is_err());
        assert!(Linking::parse("loop (0,0)").is_err());
        assert!(Linking::parse("path (0,2)").is_err());
        assert!(Linking::parse("path 0,1").is_err());
    }
}
