use seglink::corpus;
use seglink::gadget::{sabotage_delta, transform, transform_circuit, transform_path, Role, TransformOptions};
use seglink::geom::{rat, ratio, Rat};
use seglink::linker::{decide_circuit, decide_path, verify_linking, LinkMode, Linking};
use seglink::verify::{
    check_consistency, verify_all, verify_angle_bound, verify_forced_sequence, verify_invisibility,
    verify_slope_ranges, Check,
};
use seglink::{EndRef, Segment, SegmentFamily};
use seglink::Class;

fn fam(segs: &[(i64, i64, i64, i64)]) -> SegmentFamily {
    SegmentFamily::new(
        segs.iter().map(|&(a, b, c, d)| Segment::int(a, b, c, d)).collect(),
        Class::InteriorDisjoint,
    )
}

fn span(rep: &seglink::gadget::TransformReport) -> Rat {
    let (lo, hi) = &rep.params.bound;
    (&hi.x - &lo.x) + (&hi.y - &lo.y)
}

#[test]
fn corpus_passes_every_check() {
    for f in [corpus::l_instance(), corpus::rectangle(), corpus::nested_loops()] {
        for (out, rep) in [transform_circuit(&f).unwrap(), transform_path(&f).unwrap()] {
            let r = verify_all(&out, &rep).unwrap();
            assert!(r.all_pass(), "{}", r.to_text());
            assert_eq!(r.lines.len(), 3 * rep.gadgets.len());
        }
    }
}

#[test]
fn sabotaged_delta_is_caught() {
    for f in [corpus::l_instance(), corpus::rectangle(), corpus::nested_loops()] {
        let (out, rep) = transform_circuit(&f).unwrap();
        let big = &rep.params.delta * rat(10) * span(&rep);
        let (bad, bad_rep) = sabotage_delta(&out, &rep, &big);
        let inv = verify_invisibility(&bad, &bad_rep).unwrap();
        let fail = inv.failures().next().expect("invisibility must fail");
        assert_eq!(fail.witness.len(), 2);
        assert!(!verify_all(&bad, &bad_rep).unwrap().all_pass());
    }
}

#[test]
fn angle_bound_fails_for_unit_delta() {
    // An endpoint far out along the sight line of the corner gadget.
    let f = fam(&[(0, 0, 2, 0), (0, 0, 0, 2), (-16, -3, -16, -10)]);
    let (out, rep) = transform_circuit(&f).unwrap();
    assert!(verify_angle_bound(&out, &rep).unwrap().all_pass());
    let (bad, bad_rep) = sabotage_delta(&out, &rep, &rat(1));
    let r = verify_angle_bound(&bad, &bad_rep).unwrap();
    let line = r.failures().next().expect("angle bound must fail");
    assert_eq!(line.check, Check::AngleBound);
    let scale = &rep.params.final_scale;
    assert_eq!(line.witness[0], seglink::Point::int(-16 * 40, -3 * 40).scale(scale));
}

#[test]
fn angle_bound_is_monotone_in_delta() {
    for f in [corpus::rectangle(), corpus::nested_loops()] {
        let (out, rep) = transform_circuit(&f).unwrap();
        let mut d = rep.params.delta.clone();
        for _ in 0..4 {
            d /= rat(2);
            let (o, r) = sabotage_delta(&out, &rep, &d);
            assert!(verify_angle_bound(&o, &r).unwrap().all_pass());
        }
    }
}

#[test]
fn single_gadget_is_vacuous_across_gadgets() {
    let (out, rep) = transform_circuit(&corpus::l_instance()).unwrap();
    assert!(verify_slope_ranges(&out, &rep).unwrap().all_pass());
    assert!(verify_invisibility(&out, &rep).unwrap().all_pass());
}

#[test]
fn same_variant_gadgets_far_apart() {
    let f = fam(&[(0, 0, 2, 0), (0, 0, 0, 2), (10, 0, 12, 0), (10, 0, 10, 2)]);
    let (out, rep) = transform_circuit(&f).unwrap();
    assert_eq!(rep.gadgets[0].variant, rep.gadgets[1].variant);
    assert!(verify_slope_ranges(&out, &rep).unwrap().all_pass());
}

#[test]
fn report_mismatch_is_an_error() {
    let (out, rep) = transform_circuit(&corpus::rectangle()).unwrap();
    let mut short = out.clone();
    short.segments.pop();
    assert!(check_consistency(&short, &rep).is_err());
    let mut moved = out.clone();
    let i = rep.gadgets[0].segment(Role::B1);
    moved.segments[i] = Segment::int(0, 0, 1, 1);
    assert!(verify_invisibility(&moved, &rep).is_err());
}

#[test]
fn forced_sequence_on_witnesses() {
    for f in [corpus::l_instance(), corpus::rectangle()] {
        let (out, rep) = transform_circuit(&f).unwrap();
        let d = decide_circuit(&out);
        let w = d.witness().unwrap();
        assert!(verify_forced_sequence(&out, &rep, w).unwrap().all_pass());
    }
    let (out, rep) = transform_path(&corpus::l_instance()).unwrap();
    let d = decide_path(&out);
    let r = verify_forced_sequence(&out, &rep, d.witness().unwrap()).unwrap();
    assert!(r.all_pass(), "{}", r.to_text());
}

#[test]
fn permuted_witness_is_rejected() {
    let (out, rep) = transform_circuit(&corpus::rectangle()).unwrap();
    let w = decide_circuit(&out).witness().unwrap().clone();
    // Swap two whole segments in the walk.
    let mut order = w.order.clone();
    order.swap(2, 6);
    order.swap(3, 7);
    let bad = Linking { mode: LinkMode::Circuit, order };
    let caught = verify_linking(&out, &bad).is_err()
        || !verify_forced_sequence(&out, &rep, &bad).unwrap().all_pass();
    assert!(caught);
    // Even a structurally fine walk that breaks one gadget's run is reported.
    let n = out.len();
    let order: Vec<EndRef> = (0..2 * n).map(EndRef::from_index).collect();
    let plain = Linking { mode: LinkMode::Circuit, order };
    assert!(!verify_forced_sequence(&out, &rep, &plain).unwrap().all_pass());
}

#[test]
fn halved_delta_transform_still_verifies() {
    let f = corpus::rectangle();
    let (_, rep) = transform_circuit(&f).unwrap();
    let opts = TransformOptions { delta: Some(&rep.params.delta / rat(2)) };
    let (out, rep2) = transform(&f, LinkMode::Circuit, &opts).unwrap();
    assert_eq!(rep2.params.delta, &rep.params.delta * ratio(1, 2));
    assert!(verify_all(&out, &rep2).unwrap().all_pass());
}
