//! Gadget compiler: replaces every horizontal-vertical incidence of an
//! interior-disjoint axis-parallel family by a small cluster of disjoint
//! segments whose only consistent linkage is a fixed alternating walk.
//!
//! All gadgets are instances of one template, written relative to the
//! incidence point `o` for the right-up case (horizontal `oa` leaving to the
//! right, vertical `ob` leaving upward). The other three cases map the
//! template through a linear frame; see [`Frame`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::TransformError;
use crate::geom::{bounding_box, ceil_positive, format_rat, parse_rat, rat, Point, Rat, Segment};
use crate::instance::{Class, Incidence, SegmentFamily, Variant, Verdict};
use crate::linker::LinkMode;

pub const CIRCUIT_SCALE: i64 = 40;
pub const PATH_SCALE: i64 = 80;

/// Role of a segment inside a gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    /// The carried segment lengthened to `o'`.
    OA,
    /// The carried segment shortened to `o''`.
    OB,
    A1,
    B1,
    /// Connector `a'b'`.
    AB,
    B2,
    A2,
    A3,
    B3,
    A4,
    B4,
    A5,
    B5,
    A6,
    B6,
    /// Outer connector `a''b''` of the extended gadget.
    AB2,
}

impl Role {
    pub const BASIC: [Role; 5] = [Role::A1, Role::B1, Role::AB, Role::B2, Role::A2];
    pub const EXTRA: [Role; 9] = [
        Role::A3,
        Role::B3,
        Role::A4,
        Role::B4,
        Role::A5,
        Role::B5,
        Role::A6,
        Role::B6,
        Role::AB2,
    ];
    /// The walk every gadget forces, carried segments included.
    pub const FORCED: [Role; 7] = [
        Role::OA,
        Role::A1,
        Role::B1,
        Role::AB,
        Role::B2,
        Role::A2,
        Role::OB,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Role::OA => "oa",
            Role::OB => "ob",
            Role::A1 => "a1",
            Role::B1 => "b1",
            Role::AB => "ab",
            Role::B2 => "b2",
            Role::A2 => "a2",
            Role::A3 => "a3",
            Role::B3 => "b3",
            Role::A4 => "a4",
            Role::B4 => "b4",
            Role::A5 => "a5",
            Role::B5 => "b5",
            Role::A6 => "a6",
            Role::B6 => "b6",
            Role::AB2 => "ab2",
        }
    }

    pub fn all() -> impl Iterator<Item = Role> {
        [Role::OA, Role::OB]
            .into_iter()
            .chain(Role::BASIC)
            .chain(Role::EXTRA)
    }

    /// Template segment in right-up coordinates relative to `o`. For `A1`
    /// the first endpoint is the lowered end `a1'`.
    pub fn template(self, delta: &Rat) -> Option<(Point, Point)> {
        let p = Point::int;
        let s = match self {
            Role::OA | Role::OB => return None,
            Role::A1 => (Point::new(rat(8), rat(3) - delta), p(8, 7)),
            Role::B1 => (p(9, 4), p(9, 5)),
            Role::AB => (p(16, 1), p(1, 16)),
            Role::B2 => (p(4, 9), p(5, 9)),
            Role::A2 => (p(3, 8), p(7, 8)),
            Role::A3 => (p(10, 9), p(15, 9)),
            Role::B3 => (p(12, 8), p(13, 8)),
            Role::A4 => (p(9, 10), p(9, 15)),
            Role::B4 => (p(8, 12), p(8, 13)),
            Role::A5 => (p(16, 10), p(16, 15)),
            Role::B5 => (p(17, 12), p(17, 13)),
            Role::A6 => (p(10, 16), p(15, 16)),
            Role::B6 => (p(12, 17), p(13, 17)),
            Role::AB2 => (p(32, 1), p(1, 32)),
        };
        Some(s)
    }
}

impl FromStr for Role {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Role::all()
            .find(|r| r.tag() == s)
            .ok_or_else(|| format!("unknown role `{s}`"))
    }
}

/// Template anchor points, right-up frame.
pub mod template {
    use crate::geom::Point;

    pub fn o_prime() -> Point {
        Point::int(-4, 0)
    }
    pub fn o_dprime() -> Point {
        Point::int(0, 1)
    }
    pub fn a1() -> Point {
        Point::int(8, 3)
    }
    pub fn a_prime() -> Point {
        Point::int(16, 1)
    }
    pub fn b_prime() -> Point {
        Point::int(1, 16)
    }
}

/// Linear map from template coordinates to world offsets from `o`.
///
/// Right-up is the identity and left-up mirrors x. The two downward cases
/// swap which carried segment plays `oa`: right-down is a quarter turn
/// clockwise and left-down mirrors across the anti-diagonal. With these four
/// frames the sight line from `a1'` through the gap between `o'` and `o''`
/// has slope near 1/4, -1/4, -4 and 4 respectively, so no two variants share
/// a slope range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frame {
    m: [[i64; 2]; 2],
}

impl Frame {
    pub fn of(v: Variant) -> Frame {
        let m = match v {
            Variant::RightUp => [[1, 0], [0, 1]],
            Variant::LeftUp => [[-1, 0], [0, 1]],
            Variant::RightDown => [[0, 1], [-1, 0]],
            Variant::LeftDown => [[0, -1], [-1, 0]],
        };
        Frame { m }
    }

    pub fn apply(&self, p: &Point) -> Point {
        let [[a, b], [c, d]] = self.m;
        Point::new(
            &p.x * rat(a) + &p.y * rat(b),
            &p.x * rat(c) + &p.y * rat(d),
        )
    }

    pub fn det(&self) -> i64 {
        let [[a, b], [c, d]] = self.m;
        a * d - b * c
    }

    /// The `oa` role goes to the horizontal input segment.
    pub fn oa_is_horizontal(&self) -> bool {
        self.m[1][0] == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetInstance {
    /// Incidence point in initially scaled coordinates.
    pub anchor: Point,
    pub variant: Variant,
    pub extended: bool,
    pub roles: BTreeMap<Role, usize>,
}

impl GadgetInstance {
    pub fn segment(&self, r: Role) -> usize {
        self.roles[&r]
    }

    /// Indices of the segments the gadget adds (carried segments excluded).
    pub fn added(&self) -> Vec<usize> {
        self.roles
            .iter()
            .filter(|(r, _)| !matches!(r, Role::OA | Role::OB))
            .map(|(_, &i)| i)
            .collect()
    }

    /// Added segments plus the two carried ones.
    pub fn members(&self) -> Vec<usize> {
        self.roles.values().copied().collect()
    }

    /// A template point expressed in output coordinates.
    pub fn world(&self, template_point: &Point, final_scale: &Rat) -> Point {
        let off = Frame::of(self.variant).apply(template_point);
        (&self.anchor + &off).scale(final_scale)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformParams {
    pub mode: LinkMode,
    pub initial_scale: i64,
    pub delta: Rat,
    /// Multiplier of the last rescale, the denominator of `delta`.
    pub final_scale: Rat,
    /// Bounding box of the gadgetized instance before the last rescale.
    pub bound: (Point, Point),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformReport {
    pub params: TransformParams,
    pub gadgets: Vec<GadgetInstance>,
    /// Input segment index to output segment index.
    pub carry_map: Vec<usize>,
    pub segment_count: usize,
}

/// Largest admissible delta for a coordinate span `W + H`: the gap angle
/// at `o''` toward any other integer point exceeds 1 / (5 (W + H)), and the
/// sliver opened by lowering `a1` is below delta / 8.
pub fn delta_bound(span: &Rat) -> Rat {
    rat(8) / (rat(5) * span)
}

/// `1 / K` for the smallest positive integer `K` with `1 / K <= delta_bound`.
pub fn choose_delta(family: &SegmentFamily) -> Result<Rat, TransformError> {
    if let Some(p) = family.points().find(|p| !p.is_integral()) {
        return Err(TransformError::NonInteger(p.clone()));
    }
    let (lo, hi) = bounding_box(family.points()).map_err(|_| TransformError::Empty)?;
    let span = (&hi.x - &lo.x) + (&hi.y - &lo.y);
    Ok(delta_for_span(&span))
}

pub fn delta_for_span(span: &Rat) -> Rat {
    let k = ceil_positive(&(rat(5) * span / rat(8)));
    Rat::new(BigInt::one(), k)
}

/// Instantiate one gadget at `anchor`. Returns its added segments in role
/// order together with the template images of `o'` and `o''`.
pub fn build_gadget(
    variant: Variant,
    anchor: &Point,
    delta: &Rat,
    extended: bool,
) -> Result<(Vec<(Role, Segment)>, Point, Point), TransformError> {
    if !delta.is_positive() {
        return Err(TransformError::NonPositiveDelta);
    }
    Ok(gadget_segments(variant, anchor, delta, extended))
}

fn gadget_segments(
    variant: Variant,
    anchor: &Point,
    delta: &Rat,
    extended: bool,
) -> (Vec<(Role, Segment)>, Point, Point) {
    let frame = Frame::of(variant);
    let place = |p: &Point| anchor + &frame.apply(p);
    let roles = Role::BASIC
        .into_iter()
        .chain(Role::EXTRA.into_iter().filter(|_| extended));
    let segs = roles
        .map(|r| {
            let (p, q) = r.template(delta).expect("gadget role");
            (r, Segment { p: place(&p), q: place(&q) })
        })
        .collect();
    (segs, place(&template::o_prime()), place(&template::o_dprime()))
}

#[derive(Clone, Debug, Default)]
pub struct TransformOptions {
    /// Use this delta instead of the computed one.
    pub delta: Option<Rat>,
}

pub fn transform_circuit(
    family: &SegmentFamily,
) -> Result<(SegmentFamily, TransformReport), TransformError> {
    transform(family, LinkMode::Circuit, &TransformOptions::default())
}

pub fn transform_path(
    family: &SegmentFamily,
) -> Result<(SegmentFamily, TransformReport), TransformError> {
    transform(family, LinkMode::Path, &TransformOptions::default())
}

pub fn transform(
    family: &SegmentFamily,
    mode: LinkMode,
    opts: &TransformOptions,
) -> Result<(SegmentFamily, TransformReport), TransformError> {
    match family.validate()? {
        Verdict::Valid(_) => {}
        Verdict::Invalid(v) => return Err(TransformError::Invalid(v.to_string())),
    }
    if family.is_empty() {
        return Err(TransformError::Empty);
    }
    if let Some(p) = family.points().find(|p| !p.is_integral()) {
        return Err(TransformError::NonInteger(p.clone()));
    }
    let mut incidences = family.find_incidences()?;
    incidences.sort_by(|a, b| a.o.cmp(&b.o));
    if mode == LinkMode::Path && incidences.is_empty() {
        return Err(TransformError::NoIncidence);
    }
    let initial_scale = match mode {
        LinkMode::Circuit => CIRCUIT_SCALE,
        LinkMode::Path => PATH_SCALE,
    };
    let k = rat(initial_scale);

    // Scale, then pull the carried endpoints apart at every incidence.
    let mut carried: Vec<Segment> = family
        .segments
        .iter()
        .map(|s| Segment { p: s.p.scale(&k), q: s.q.scale(&k) })
        .collect();
    let anchors: Vec<Point> = incidences.iter().map(|i| i.o.scale(&k)).collect();
    for (inc, o) in incidences.iter().zip(&anchors) {
        let frame = Frame::of(inc.variant);
        let (oa, ob) = carried_roles(inc, &frame);
        move_end(&mut carried[oa], o, o + &frame.apply(&template::o_prime()));
        move_end(&mut carried[ob], o, o + &frame.apply(&template::o_dprime()));
    }
    for (i, (new, old)) in carried.iter().zip(&family.segments).enumerate() {
        let (d_new, d_old) = (&new.q - &new.p, &old.q - &old.p);
        let same_dir = d_new.x.signum() == d_old.x.signum() && d_new.y.signum() == d_old.y.signum();
        if new.p == new.q || !same_dir {
            return Err(TransformError::HostCollapse(i));
        }
    }

    let extended_at = |g: usize| mode == LinkMode::Path && g == 0;
    // Delta depends on the extent of the integer part of the instance.
    let mut probe = carried.clone();
    for (g, (inc, o)) in incidences.iter().zip(&anchors).enumerate() {
        let (segs, _, _) = gadget_segments(inc.variant, o, &Rat::zero(), extended_at(g));
        probe.extend(segs.into_iter().map(|(_, s)| s));
    }
    let probe = SegmentFamily::new(probe, Class::Disjoint);
    let bound = bounding_box(probe.points()).map_err(|_| TransformError::Empty)?;
    let delta = match &opts.delta {
        Some(d) if !d.is_positive() => return Err(TransformError::NonPositiveDelta),
        Some(d) => d.clone(),
        None => choose_delta(&probe)?,
    };
    let final_scale = Rat::from_integer(delta.denom().clone());

    let mut out = carried;
    let mut gadgets = Vec::with_capacity(incidences.len());
    for (g, (inc, o)) in incidences.iter().zip(&anchors).enumerate() {
        let frame = Frame::of(inc.variant);
        let (oa, ob) = carried_roles(inc, &frame);
        let mut roles = BTreeMap::new();
        roles.insert(Role::OA, oa);
        roles.insert(Role::OB, ob);
        let (segs, _, _) = gadget_segments(inc.variant, o, &delta, extended_at(g));
        for (r, s) in segs {
            roles.insert(r, out.len());
            out.push(s);
        }
        gadgets.push(GadgetInstance {
            anchor: o.clone(),
            variant: inc.variant,
            extended: extended_at(g),
            roles,
        });
    }
    let out: Vec<Segment> = out
        .into_iter()
        .map(|s| Segment { p: s.p.scale(&final_scale), q: s.q.scale(&final_scale) })
        .collect();
    let result = SegmentFamily::new(out, Class::Disjoint);
    if opts.delta.is_none() {
        check_disjoint(&result)?;
    }
    let report = TransformReport {
        params: TransformParams {
            mode,
            initial_scale,
            delta,
            final_scale,
            bound,
        },
        gadgets,
        carry_map: (0..family.len()).collect(),
        segment_count: result.len(),
    };
    Ok((result, report))
}

fn check_disjoint(f: &SegmentFamily) -> Result<(), TransformError> {
    match f.validate()? {
        Verdict::Valid(_) => Ok(()),
        Verdict::Invalid(crate::instance::Violation::Intersect { a, b, at }) => {
            Err(TransformError::Overlap { a, b, at })
        }
        Verdict::Invalid(v) => Err(TransformError::Invalid(v.to_string())),
    }
}

/// (oa, ob) input segment indices for an incidence under its frame.
fn carried_roles(inc: &Incidence, frame: &Frame) -> (usize, usize) {
    if frame.oa_is_horizontal() {
        (inc.h_index, inc.v_index)
    } else {
        (inc.v_index, inc.h_index)
    }
}

fn move_end(s: &mut Segment, from: &Point, to: Point) {
    if s.p == *from {
        s.p = to;
    } else {
        debug_assert!(s.q == *from);
        s.q = to;
    }
}

/// Rebuild a transformed instance with every `a1'` lowered to `new_delta`
/// instead of the chosen delta. Meant for negative controls: the result is
/// generally not a valid hardness instance.
pub fn sabotage_delta(
    family: &SegmentFamily,
    report: &TransformReport,
    new_delta: &Rat,
) -> (SegmentFamily, TransformReport) {
    let mut out = family.clone();
    let mut rep = report.clone();
    let scale = &report.params.final_scale;
    for g in &report.gadgets {
        let i = g.segment(Role::A1);
        let lowered = Point::new(rat(8), rat(3) - new_delta);
        out.segments[i].p = g.world(&lowered, scale);
    }
    rep.params.delta = new_delta.clone();
    (out, rep)
}

impl TransformReport {
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = String::from("report v1\n");
        out.push_str(&format!("mode {}\n", p.mode.tag()));
        out.push_str(&format!("initial-scale {}\n", p.initial_scale));
        out.push_str(&format!("delta {}\n", format_rat(&p.delta)));
        out.push_str(&format!("final-scale {}\n", format_rat(&p.final_scale)));
        let (lo, hi) = &p.bound;
        out.push_str(&format!(
            "bound {} {} {} {}\n",
            format_rat(&lo.x),
            format_rat(&lo.y),
            format_rat(&hi.x),
            format_rat(&hi.y)
        ));
        out.push_str(&format!("segments {}\n", self.segment_count));
        for (i, j) in self.carry_map.iter().enumerate() {
            out.push_str(&format!("carry {i} {j}\n"));
        }
        for (k, g) in self.gadgets.iter().enumerate() {
            out.push_str(&format!(
                "gadget {k} anchor {} {} variant {} extended {}",
                format_rat(&g.anchor.x),
                format_rat(&g.anchor.y),
                g.variant.tag(),
                g.extended as u8
            ));
            for (r, i) in &g.roles {
                out.push_str(&format!(" {} {i}", r.tag()));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<TransformReport, TransformError> {
        let bad = |n: usize, m: &str| TransformError::Report(format!("line {n}: {m}"));
        let mut mode = None;
        let mut initial_scale = None;
        let mut delta = None;
        let mut final_scale = None;
        let mut bound = None;
        let mut segment_count = None;
        let mut carry: Vec<(usize, usize)> = Vec::new();
        let mut gadgets = Vec::new();
        let mut header = false;
        for (n, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l)) {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if !header {
                if line != "report v1" {
                    return Err(bad(n, "expected `report v1`"));
                }
                header = true;
                continue;
            }
            let num = |s: &str| s.parse::<usize>().map_err(|_| bad(n, "bad integer"));
            let r = |s: &str| parse_rat(s).map_err(|e| bad(n, &e.to_string()));
            match (f[0], f.len()) {
                ("mode", 2) => mode = Some(LinkMode::from_str(f[1]).map_err(|e| bad(n, &e))?),
                ("initial-scale", 2) => {
                    initial_scale = Some(f[1].parse::<i64>().map_err(|_| bad(n, "bad integer"))?)
                }
                ("delta", 2) => delta = Some(r(f[1])?),
                ("final-scale", 2) => final_scale = Some(r(f[1])?),
                ("bound", 5) => {
                    bound = Some((
                        Point::new(r(f[1])?, r(f[2])?),
                        Point::new(r(f[3])?, r(f[4])?),
                    ))
                }
                ("segments", 2) => segment_count = Some(num(f[1])?),
                ("carry", 3) => carry.push((num(f[1])?, num(f[2])?)),
                ("gadget", len) if len >= 9 && len % 2 == 1 => {
                    if num(f[1])? != gadgets.len() || f[2] != "anchor" || f[5] != "variant" || f[7] != "extended" {
                        return Err(bad(n, "malformed gadget line"));
                    }
                    let anchor = Point::new(r(f[3])?, r(f[4])?);
                    let variant = Variant::from_str(f[6]).map_err(|e| bad(n, &e))?;
                    let extended = match f[8] {
                        "0" => false,
                        "1" => true,
                        _ => return Err(bad(n, "extended must be 0 or 1")),
                    };
                    let mut roles = BTreeMap::new();
                    for pair in f[9..].chunks(2) {
                        let role = Role::from_str(pair[0]).map_err(|e| bad(n, &e))?;
                        roles.insert(role, num(pair[1])?);
                    }
                    gadgets.push(GadgetInstance { anchor, variant, extended, roles });
                }
                _ => return Err(bad(n, &format!("unexpected `{line}`"))),
            }
        }
        let missing = |what: &str| TransformError::Report(format!("missing `{what}`"));
        carry.sort_unstable();
        if carry.iter().enumerate().any(|(i, &(k, _))| i != k) {
            return Err(TransformError::Report("carry map is not total".into()));
        }
        Ok(TransformReport {
            params: TransformParams {
                mode: mode.ok_or_else(|| missing("mode"))?,
                initial_scale: initial_scale.ok_or_else(|| missing("initial-scale"))?,
                delta: delta.ok_or_else(|| missing("delta"))?,
                final_scale: final_scale.ok_or_else(|| missing("final-scale"))?,
                bound: bound.ok_or_else(|| missing("bound"))?,
            },
            gadgets,
            carry_map: carry.into_iter().map(|(_, j)| j).collect(),
            segment_count: segment_count.ok_or_else(|| missing("segments"))?,
        })
    }
}

impl fmt::Display for TransformReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Distinct slopes of a family, `None` standing for vertical.
pub fn slope_set(family: &SegmentFamily) -> Vec<Option<Rat>> {
    let mut out: Vec<Option<Rat>> = family.segments.iter().map(|s| s.slope()).collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{orientation, ratio};

    fn fam(segs: &[(i64, i64, i64, i64)]) -> SegmentFamily {
        SegmentFamily::new(
            segs.iter().map(|&(a, b, c, d)| Segment::int(a, b, c, d)).collect(),
            Class::InteriorDisjoint,
        )
    }

    fn seg_of(v: &[(Role, Segment)], r: Role) -> Segment {
        v.iter().find(|(x, _)| *x == r).unwrap().1.clone()
    }

    #[test]
    fn right_up_coordinates() {
        let d = ratio(1, 800);
        let (segs, o1, o2) = build_gadget(Variant::RightUp, &Point::int(0, 0), &d, false).unwrap();
        assert_eq!(segs.len(), 5);
        assert_eq!(o1, Point::int(-4, 0));
        assert_eq!(o2, Point::int(0, 1));
        let a1 = seg_of(&segs, Role::A1);
        assert_eq!(a1.p, Point::new(rat(8), rat(3) - &d));
        assert_eq!(a1.q, Point::int(8, 7));
        assert_eq!(seg_of(&segs, Role::AB), Segment::int(16, 1, 1, 16));
    }

    #[test]
    fn left_down_frame() {
        let (_, o1, o2) = build_gadget(Variant::LeftDown, &Point::int(0, 0), &ratio(1, 8), false).unwrap();
        // Anti-diagonal mirror: o' = (0, 4), o'' = (-1, 0).
        assert_eq!(o1, Point::int(0, 4));
        assert_eq!(o2, Point::int(-1, 0));
        assert_eq!(Frame::of(Variant::LeftUp).apply(&Point::int(-4, 0)), Point::int(4, 0));
        assert!(build_gadget(Variant::RightUp, &Point::int(0, 0), &rat(0), false).is_err());
    }

    #[test]
    fn template_collinear_in_every_frame() {
        for v in Variant::ALL {
            let f = Frame::of(v);
            assert_eq!(f.det().abs(), 1);
            let (a, b, c) = (
                f.apply(&template::o_prime()),
                f.apply(&template::o_dprime()),
                f.apply(&template::a1()),
            );
            assert_eq!(orientation(&a, &b, &c), 0, "{v:?}");
        }
    }

    #[test]
    fn sight_slopes_differ_between_variants() {
        let mut slopes: Vec<Rat> = Variant::ALL
            .iter()
            .map(|&v| {
                let f = Frame::of(v);
                let d = &f.apply(&template::a1()) - &f.apply(&template::o_prime());
                &d.y / &d.x
            })
            .collect();
        slopes.sort();
        assert_eq!(slopes, vec![rat(-4), ratio(-1, 4), ratio(1, 4), rat(4)]);
    }

    #[test]
    fn template_is_disjoint() {
        let d = ratio(1, 1000);
        let (segs, _, _) = build_gadget(Variant::RightUp, &Point::int(0, 0), &d, true).unwrap();
        assert_eq!(segs.len(), 14);
        let f = SegmentFamily::new(segs.into_iter().map(|(_, s)| s).collect(), Class::Disjoint);
        assert!(f.validate().unwrap().is_valid());
    }

    #[test]
    fn delta_examples() {
        // Box 100 x 60.
        let f = SegmentFamily::new(vec![Segment::int(0, 0, 100, 60)], Class::Disjoint);
        assert_eq!(choose_delta(&f).unwrap(), ratio(1, 100));
        let g = SegmentFamily::new(vec![Segment::int(0, 0, 1, 0)], Class::Disjoint);
        assert_eq!(choose_delta(&g).unwrap(), rat(1));
        let empty = SegmentFamily::new(vec![], Class::Disjoint);
        assert_eq!(choose_delta(&empty), Err(TransformError::Empty));
    }

    #[test]
    fn l_instance_transform() {
        let l = fam(&[(0, 0, 2, 0), (0, 0, 0, 2)]);
        let (out, rep) = transform_circuit(&l).unwrap();
        assert_eq!(out.len(), 7);
        assert_eq!(rep.gadgets.len(), 1);
        assert!(out.points().all(|p| p.is_integral()));
        let k = &rep.params.final_scale;
        assert_eq!(&rep.params.delta * k, rat(1));
        // Carried segments moved to o' and o''.
        assert_eq!(out.segments[0].p, Point::int(-4, 0).scale(k));
        assert_eq!(out.segments[1].p, Point::int(0, 1).scale(k));
        let text = rep.to_text();
        assert_eq!(TransformReport::parse(&text).unwrap(), rep);
    }

    #[test]
    fn path_needs_an_incidence() {
        let f = fam(&[(0, 0, 2, 0), (0, 1, 0, 3)]);
        assert_eq!(transform_path(&f).unwrap_err(), TransformError::NoIncidence);
        let (out, rep) = transform_circuit(&f).unwrap();
        assert_eq!(out.len(), 2);
        assert!(rep.gadgets.is_empty());
    }

    #[test]
    fn rejects_bad_inputs() {
        let diag = SegmentFamily::new(vec![Segment::int(0, 0, 1, 1)], Class::InteriorDisjoint);
        assert!(matches!(transform_circuit(&diag), Err(TransformError::Instance(_))));
        let touching = fam(&[(0, 0, 2, 0), (1, 0, 1, 2)]);
        assert!(matches!(transform_circuit(&touching), Err(TransformError::Invalid(_))));
        let frac = SegmentFamily::new(
            vec![Segment::new(Point::new(ratio(1, 2), rat(0)), Point::int(2, 0)).unwrap()],
            Class::InteriorDisjoint,
        );
        assert!(matches!(transform_circuit(&frac), Err(TransformError::NonInteger(_))));
    }

    #[test]
    fn report_parse_errors() {
        assert!(TransformReport::parse("").is_err());
        assert!(TransformReport::parse("report v1\nmode circuit\n").is_err());
        assert!(TransformReport::parse("report v2\n").is_err());
        let l = fam(&[(0, 0, 2, 0), (0, 0, 0, 2)]);
        let (_, rep) = transform_path(&l).unwrap();
        let text = rep.to_text().replace("carry 0 0\n", "");
        assert!(TransformReport::parse(&text).is_err());
    }
}
