use proptest::prelude::*;

use seglink::corpus::rectilinear_loop;
use seglink::gadget::{slope_set, transform_circuit, transform_path, TransformReport};
use seglink::geom::rat;
use seglink::verify::verify_all;
use seglink::{Class, Segment, SegmentFamily};

/// Rectangles and L shapes placed in separate cells of a coarse grid.
fn family() -> impl Strategy<Value = SegmentFamily> {
    let shape = (0u8..3, 1i64..4, 1i64..4);
    prop::collection::vec(prop::option::of(shape), 1..5).prop_map(|cells| {
        let mut segs = Vec::new();
        for (k, cell) in cells.into_iter().enumerate() {
            let Some((kind, w, h)) = cell else { continue };
            let (x, y) = (5 * (k as i64 % 2), 5 * (k as i64 / 2));
            match kind {
                0 => segs.extend(rectilinear_loop(&[(x, y), (x + w, y), (x + w, y + h), (x, y + h)])),
                1 => {
                    segs.push(Segment::int(x, y, x + w, y));
                    segs.push(Segment::int(x + w, y, x + w, y + h));
                }
                _ => segs.push(Segment::int(x, y, x, y + h)),
            }
        }
        if segs.is_empty() {
            segs.push(Segment::int(0, 0, 1, 0));
        }
        SegmentFamily::new(segs, Class::InteriorDisjoint)
    })
}

fn check_output(f: &SegmentFamily, out: &SegmentFamily, rep: &TransformReport) -> Result<(), TestCaseError> {
    prop_assert!(out.validate().unwrap().is_valid());
    prop_assert!(out.points().all(|p| p.is_integral()));
    let allowed = [None, Some(rat(0)), Some(rat(1)), Some(rat(-1))];
    prop_assert!(slope_set(out).iter().all(|s| allowed.contains(s)));
    let incidences = f.find_incidences().unwrap().len();
    let extra = rep.gadgets.iter().filter(|g| g.extended).count() * 9;
    prop_assert_eq!(out.len(), f.len() + 5 * incidences + extra);
    prop_assert_eq!(TransformReport::parse(&rep.to_text()).unwrap(), rep.clone());
    let checks = verify_all(out, rep).unwrap();
    prop_assert!(checks.all_pass(), "{}", checks.to_text());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn circuit_transform_invariants(f in family()) {
        let (out, rep) = transform_circuit(&f).unwrap();
        check_output(&f, &out, &rep)?;
        prop_assert!(rep.gadgets.iter().all(|g| !g.extended));
    }

    #[test]
    fn path_transform_invariants(f in family()) {
        match transform_path(&f) {
            Ok((out, rep)) => {
                check_output(&f, &out, &rep)?;
                let ext: Vec<_> = rep.gadgets.iter().filter(|g| g.extended).collect();
                prop_assert_eq!(ext.len(), 1);
                prop_assert!(rep.gadgets.iter().all(|g| g.anchor >= ext[0].anchor));
            }
            Err(e) => {
                prop_assert_eq!(f.find_incidences().unwrap().len(), 0);
                prop_assert_eq!(e, seglink::TransformError::NoIncidence);
            }
        }
    }

    #[test]
    fn transform_is_deterministic(f in family()) {
        prop_assert_eq!(transform_circuit(&f).unwrap(), transform_circuit(&f).unwrap());
    }
}
