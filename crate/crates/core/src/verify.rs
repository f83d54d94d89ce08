//! Instance-level checks of the structural facts the gadget compiler relies
//! on. Each check yields one [`CheckLine`] per gadget.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::VerifyError;
use crate::gadget::{template, Frame, GadgetInstance, Role, TransformReport};
use crate::geom::{angle_less, format_rat, Point, Rat, Segment};
use crate::instance::{EndRef, SegmentFamily};
use crate::linker::{LinkMode, Linking};
use crate::visibility::{graph_of, Scene, VisibilityGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Invisibility,
    AngleBound,
    SlopeRanges,
    ForcedSequence,
}

impl Check {
    pub fn tag(self) -> &'static str {
        match self {
            Check::Invisibility => "invisibility",
            Check::AngleBound => "angle-bound",
            Check::SlopeRanges => "slope-ranges",
            Check::ForcedSequence => "forced-sequence",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub gadget: usize,
    pub check: Check,
    pub pass: bool,
    /// Points exhibiting the failure.
    pub witness: Vec<Point>,
    pub detail: String,
}

impl CheckLine {
    fn pass(gadget: usize, check: Check) -> Self {
        CheckLine { gadget, check, pass: true, witness: vec![], detail: String::new() }
    }

    fn fail(gadget: usize, check: Check, witness: Vec<Point>, detail: String) -> Self {
        CheckLine { gadget, check, pass: false, witness, detail }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "pass" } else { "fail" };
        write!(f, "gadget {} {} {}", self.gadget, self.check.tag(), verdict)?;
        for p in &self.witness {
            write!(f, " {p}")?;
        }
        if !self.detail.is_empty() {
            write!(f, " # {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| !l.pass)
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.lines.extend(other.lines);
        self.lines.sort_by_key(|l| (l.gadget, l.check));
    }

    pub fn to_text(&self) -> String {
        self.lines.iter().map(|l| format!("{l}\n")).collect()
    }
}

/// Shared precomputation for the visibility-based checks.
pub struct Context<'a> {
    pub family: &'a SegmentFamily,
    pub report: &'a TransformReport,
    pub scene: Scene,
    pub graph: VisibilityGraph,
}

impl<'a> Context<'a> {
    pub fn new(family: &'a SegmentFamily, report: &'a TransformReport) -> Result<Self, VerifyError> {
        check_consistency(family, report)?;
        let scene = Scene::new(family);
        let graph = graph_of(&scene);
        Ok(Context { family, report, scene, graph })
    }

    fn pairs(&self, a: usize, b: usize) -> Vec<(usize, usize)> {
        let (sa, sb) = (self.scene.segs[a], self.scene.segs[b]);
        sa.iter()
            .flat_map(|&p| sb.iter().map(move |&q| (p, q)))
            .filter(|&(p, q)| self.graph.contains(p, q))
            .collect()
    }

    fn seen_by(&self, a: usize) -> BTreeSet<usize> {
        (0..self.family.len())
            .filter(|&b| b != a && !self.pairs(a, b).is_empty())
            .collect()
    }

    fn final_scale(&self) -> &Rat {
        &self.report.params.final_scale
    }
}

/// The report must describe this family: sizes, indices and every added
/// segment's position recomputed from anchor, variant and delta.
pub fn check_consistency(family: &SegmentFamily, report: &TransformReport) -> Result<(), VerifyError> {
    let bad = |m: String| Err(VerifyError::Mismatch(m));
    if report.segment_count != family.len() {
        return bad(format!(
            "report lists {} segments, family has {}",
            report.segment_count,
            family.len()
        ));
    }
    if let Some(&j) = report.carry_map.iter().find(|&&j| j >= family.len()) {
        return bad(format!("carried index {j} out of range"));
    }
    let k = &report.params.final_scale;
    let delta = &report.params.delta;
    for (g, gi) in report.gadgets.iter().enumerate() {
        for r in Role::all() {
            let wanted = matches!(r, Role::OA | Role::OB)
                || Role::BASIC.contains(&r)
                || gi.extended;
            match (gi.roles.get(&r), wanted) {
                (Some(&i), true) if i < family.len() => {}
                (Some(i), true) => return bad(format!("gadget {g}: index {i} out of range")),
                (None, true) => return bad(format!("gadget {g}: missing role {}", r.tag())),
                (Some(_), false) => return bad(format!("gadget {g}: unexpected role {}", r.tag())),
                (None, false) => {}
            }
        }
        for (r, &i) in &gi.roles {
            let s = &family.segments[i];
            let ok = match r.template(delta) {
                Some((p, q)) => *s == Segment { p: gi.world(&p, k), q: gi.world(&q, k) },
                None => {
                    let end = if *r == Role::OA { template::o_prime() } else { template::o_dprime() };
                    let w = gi.world(&end, k);
                    s.p == w || s.q == w
                }
            };
            if !ok {
                return bad(format!("gadget {g}: segment {i} does not match role {}", r.tag()));
            }
        }
    }
    Ok(())
}

fn a1_prime(g: &GadgetInstance, family: &SegmentFamily) -> Point {
    family.segments[g.segment(Role::A1)].p.clone()
}

/// Gadget segments must be hidden from every other gadget, and see only
/// their designated neighbours inside their own gadget.
pub fn verify_invisibility(family: &SegmentFamily, report: &TransformReport) -> Result<CheckReport, VerifyError> {
    let ctx = Context::new(family, report)?;
    Ok(invisibility(&ctx))
}

pub fn invisibility(ctx: &Context) -> CheckReport {
    let lines = ctx
        .report
        .gadgets
        .par_iter()
        .enumerate()
        .map(|(g, gi)| invisibility_of(ctx, g, gi))
        .collect();
    CheckReport { lines }
}

fn invisibility_of(ctx: &Context, g: usize, gi: &GadgetInstance) -> CheckLine {
    let members: BTreeSet<usize> = gi.members().into_iter().collect();
    let mut hidden = vec![Role::A1, Role::B1, Role::A2, Role::B2];
    if gi.extended {
        hidden.extend([
            Role::A3,
            Role::B3,
            Role::A4,
            Role::B4,
            Role::A5,
            Role::B5,
            Role::A6,
            Role::B6,
        ]);
    }
    let fail = |pair: (usize, usize), what: String| {
        let w = vec![ctx.scene.point(pair.0).clone(), ctx.scene.point(pair.1).clone()];
        CheckLine::fail(g, Check::Invisibility, w, what)
    };
    for &r in &hidden {
        let x = gi.segment(r);
        for y in (0..ctx.family.len()).filter(|y| !members.contains(y)) {
            if let Some(&p) = ctx.pairs(x, y).first() {
                return fail(p, format!("{} sees segment {y} of another gadget", r.tag()));
            }
        }
    }

    let mut only: Vec<(Role, Vec<Role>)> = vec![
        (Role::B1, vec![Role::A1, Role::AB]),
        (Role::B2, vec![Role::A2, Role::AB]),
    ];
    if gi.extended {
        for (b, a) in [
            (Role::B3, Role::A3),
            (Role::B4, Role::A4),
            (Role::B5, Role::A5),
            (Role::B6, Role::A6),
        ] {
            only.push((b, vec![a, Role::AB, Role::AB2]));
        }
    }
    for (b, allowed) in only {
        let allowed: BTreeSet<usize> = allowed.iter().map(|&r| gi.segment(r)).collect();
        let x = gi.segment(b);
        if let Some(y) = ctx.seen_by(x).into_iter().find(|y| !allowed.contains(y)) {
            return fail(ctx.pairs(x, y)[0], format!("{} sees segment {y}", b.tag()));
        }
    }

    let k = ctx.final_scale();
    let (oa, ob) = (gi.segment(Role::OA), gi.segment(Role::OB));
    let a2 = gi.segment(Role::A2);
    if let Some(&p) = ctx.pairs(a2, oa).first() {
        return fail(p, "a2 sees the oa segment".into());
    }
    let o2 = gi.world(&template::o_dprime(), k);
    if let Some(p) = ctx.pairs(a2, ob).into_iter().find(|&(_, q)| *ctx.scene.point(q) != o2) {
        return fail(p, "a2 sees the ob segment away from o''".into());
    }
    let o1 = gi.world(&template::o_prime(), k);
    let a1 = gi.segment(Role::A1);
    if let Some(p) = ctx.pairs(a1, oa).into_iter().find(|&(_, q)| *ctx.scene.point(q) != o1) {
        return fail(p, "a1' sees the oa segment away from o'".into());
    }
    CheckLine::pass(g, Check::Invisibility)
}

/// The sliver opened at `a1'` is narrower, seen from `o''`, than the angle
/// to any endpoint on the far side of the line through `o''` and `o'`.
pub fn verify_angle_bound(family: &SegmentFamily, report: &TransformReport) -> Result<CheckReport, VerifyError> {
    check_consistency(family, report)?;
    let lines = report
        .gadgets
        .par_iter()
        .enumerate()
        .map(|(g, gi)| angle_bound_of(family, report, g, gi))
        .collect();
    Ok(CheckReport { lines })
}

fn angle_bound_of(family: &SegmentFamily, report: &TransformReport, g: usize, gi: &GadgetInstance) -> CheckLine {
    let k = &report.params.final_scale;
    let o1 = gi.world(&template::o_prime(), k);
    let o2 = gi.world(&template::o_dprime(), k);
    let a1 = gi.world(&template::a1(), k);
    let a1p = a1_prime(gi, family);
    let det = Frame::of(gi.variant).det();
    let ray = &o1 - &o2;
    let points: BTreeSet<&Point> = family.points().collect();
    for p in points {
        let v = p - &o2;
        let cross = &ray.x * &v.y - &ray.y * &v.x;
        let side = if det > 0 { cross.is_negative() } else { cross.is_positive() };
        if !side {
            continue;
        }
        match angle_less(&o2, &a1, &a1p, &o2, &o1, p) {
            Ok(true) => {}
            Ok(false) => {
                return CheckLine::fail(
                    g,
                    Check::AngleBound,
                    vec![p.clone()],
                    "endpoint inside the sight cone of a1'".into(),
                )
            }
            Err(e) => return CheckLine::fail(g, Check::AngleBound, vec![p.clone()], e.to_string()),
        }
    }
    CheckLine::pass(g, Check::AngleBound)
}

/// Slopes of lines through `a1'` and the gap between `o'` and `o''`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlopeRange {
    Closed(Rat, Rat),
    /// Contains vertical: every slope `<= lo` or `>= hi`.
    Wrapped(Rat, Rat),
}

impl SlopeRange {
    pub fn through(apex: &Point, u: &Point, v: &Point) -> SlopeRange {
        let (du, dv) = (u - apex, v - apex);
        let finite: Vec<Rat> = [&du, &dv]
            .iter()
            .filter(|d| !d.x.is_zero())
            .map(|d| &d.y / &d.x)
            .collect();
        let lo = finite.iter().min().cloned().unwrap_or_default();
        let hi = finite.iter().max().cloned().unwrap_or_default();
        let same_side = (du.x.is_positive() && dv.x.is_positive()) || (du.x.is_negative() && dv.x.is_negative());
        if same_side {
            SlopeRange::Closed(lo, hi)
        } else {
            SlopeRange::Wrapped(lo, hi)
        }
    }

    pub fn meets(&self, other: &SlopeRange) -> bool {
        use SlopeRange::*;
        match (self, other) {
            (Closed(a, b), Closed(c, d)) => a <= d && c <= b,
            (Closed(a, b), Wrapped(lo, hi)) | (Wrapped(lo, hi), Closed(a, b)) => a <= lo || b >= hi,
            (Wrapped(..), Wrapped(..)) => true,
        }
    }
}

impl fmt::Display for SlopeRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeRange::Closed(a, b) => write!(f, "[{}, {}]", format_rat(a), format_rat(b)),
            SlopeRange::Wrapped(a, b) => write!(f, "outside ({}, {})", format_rat(a), format_rat(b)),
        }
    }
}

pub fn slope_range(family: &SegmentFamily, report: &TransformReport, g: &GadgetInstance) -> SlopeRange {
    let k = &report.params.final_scale;
    SlopeRange::through(
        &a1_prime(g, family),
        &g.world(&template::o_prime(), k),
        &g.world(&template::o_dprime(), k),
    )
}

/// Sight ranges of differently oriented gadgets never share a slope, and no
/// two `a1'` points see each other.
pub fn verify_slope_ranges(family: &SegmentFamily, report: &TransformReport) -> Result<CheckReport, VerifyError> {
    let ctx = Context::new(family, report)?;
    Ok(slope_ranges(&ctx))
}

pub fn slope_ranges(ctx: &Context) -> CheckReport {
    let gadgets = &ctx.report.gadgets;
    let ranges: Vec<SlopeRange> = gadgets.iter().map(|g| slope_range(ctx.family, ctx.report, g)).collect();
    let a1p: Vec<usize> = gadgets
        .iter()
        .map(|g| ctx.scene.point_of(EndRef::new(g.segment(Role::A1), 0)))
        .collect();
    let lines = (0..gadgets.len())
        .map(|g| {
            for h in (0..gadgets.len()).filter(|&h| h != g) {
                if gadgets[g].variant != gadgets[h].variant && ranges[g].meets(&ranges[h]) {
                    return CheckLine::fail(
                        g,
                        Check::SlopeRanges,
                        vec![],
                        format!("range {} meets {} of gadget {h}", ranges[g], ranges[h]),
                    );
                }
                if ctx.graph.contains(a1p[g], a1p[h]) {
                    return CheckLine::fail(
                        g,
                        Check::SlopeRanges,
                        vec![ctx.scene.point(a1p[g]).clone(), ctx.scene.point(a1p[h]).clone()],
                        format!("a1' sees a1' of gadget {h}"),
                    );
                }
            }
            CheckLine::pass(g, Check::SlopeRanges)
        })
        .collect();
    CheckReport { lines }
}

/// Every plain gadget appears in the witness as its forced run of seven
/// segments, and a chain starts and ends inside the extended gadget.
pub fn verify_forced_sequence(
    family: &SegmentFamily,
    report: &TransformReport,
    witness: &Linking,
) -> Result<CheckReport, VerifyError> {
    check_consistency(family, report)?;
    if witness.segment_count() != family.len() {
        return Err(VerifyError::Mismatch(format!(
            "witness covers {} segments, family has {}",
            witness.segment_count(),
            family.len()
        )));
    }
    let order = witness.segment_order();
    let n = order.len();
    let mut pos = vec![usize::MAX; family.len()];
    for (i, &s) in order.iter().enumerate() {
        pos[s] = i;
    }
    let cyclic = witness.mode == LinkMode::Circuit;
    let lines = report
        .gadgets
        .iter()
        .enumerate()
        .map(|(g, gi)| {
            if gi.extended {
                let ends = [order[0], order[n - 1]];
                let members = gi.members();
                return match ends.iter().find(|s| !members.contains(s)) {
                    _ if cyclic => CheckLine::fail(g, Check::ForcedSequence, vec![], "circuit through an extended gadget".into()),
                    Some(s) => CheckLine::fail(g, Check::ForcedSequence, vec![], format!("chain end {s} outside the extended gadget")),
                    None => CheckLine::pass(g, Check::ForcedSequence),
                };
            }
            let run: Vec<usize> = Role::FORCED.iter().map(|&r| gi.segment(r)).collect();
            let start = pos[run[0]];
            let step = |dir: isize| {
                run.iter().enumerate().all(|(i, &s)| {
                    let at = start as isize + dir * i as isize;
                    let at = if cyclic { at.rem_euclid(n as isize) } else { at };
                    at >= 0 && (at as usize) < n && order[at as usize] == s
                })
            };
            if step(1) || step(-1) {
                CheckLine::pass(g, Check::ForcedSequence)
            } else {
                let seen: Vec<String> = run.iter().map(|s| pos[*s].to_string()).collect();
                CheckLine::fail(
                    g,
                    Check::ForcedSequence,
                    vec![gi.anchor.clone()],
                    format!("positions {}", seen.join(" ")),
                )
            }
        })
        .collect();
    Ok(CheckReport { lines })
}

/// Invisibility, angle bound and slope ranges together.
pub fn verify_all(family: &SegmentFamily, report: &TransformReport) -> Result<CheckReport, VerifyError> {
    let ctx = Context::new(family, report)?;
    let mut out = invisibility(&ctx);
    out.merge(verify_angle_bound(family, report)?);
    out.merge(slope_ranges(&ctx));
    Ok(out)
}
