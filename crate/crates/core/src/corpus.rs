//! Small named instances and seeded random families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::Segment;
use crate::instance::{Class, SegmentFamily};

/// Closed axis-parallel loop through the given corners.
pub fn rectilinear_loop(corners: &[(i64, i64)]) -> Vec<Segment> {
    (0..corners.len())
        .map(|i| {
            let (a, b) = corners[i];
            let (c, d) = corners[(i + 1) % corners.len()];
            Segment::int(a, b, c, d)
        })
        .collect()
}

fn rect(x: i64, y: i64, w: i64, h: i64) -> Vec<Segment> {
    rectilinear_loop(&[(x, y), (x + w, y), (x + w, y + h), (x, y + h)])
}

/// Two segments meeting at a right angle.
pub fn l_instance() -> SegmentFamily {
    SegmentFamily::new(
        vec![Segment::int(0, 0, 2, 0), Segment::int(0, 0, 0, 2)],
        Class::InteriorDisjoint,
    )
}

pub fn rectangle() -> SegmentFamily {
    SegmentFamily::new(rect(0, 0, 2, 1), Class::InteriorDisjoint)
}

/// A rectangle inside another; the pair cannot form one polygon.
pub fn nested_loops() -> SegmentFamily {
    let mut segs = rect(0, 0, 6, 4);
    segs.extend(rect(2, 1, 2, 2));
    SegmentFamily::new(segs, Class::InteriorDisjoint)
}

/// `cols * rows` disjoint rectangles, four incidences each.
pub fn rectangle_grid(cols: i64, rows: i64) -> SegmentFamily {
    let mut segs = Vec::new();
    for i in 0..cols {
        for j in 0..rows {
            segs.extend(rect(3 * i, 2 * j, 2, 1));
        }
    }
    SegmentFamily::new(segs, Class::InteriorDisjoint)
}

/// `n` pairwise disjoint segments with endpoints on a small integer grid,
/// drawn by rejection from a seeded generator.
pub fn random_disjoint(n: usize, seed: u64) -> SegmentFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = 2 + 2 * n as i64;
    let mut segs: Vec<Segment> = Vec::with_capacity(n);
    while segs.len() < n {
        let mut c = || rng.gen_range(0..=side);
        let (a, b, x, y) = (c(), c(), c(), c());
        if (a, b) == (x, y) {
            continue;
        }
        let cand = Segment::int(a, b, x, y);
        segs.push(cand);
        let f = SegmentFamily::new(segs.clone(), Class::Disjoint);
        if !f.validate().map(|v| v.is_valid()).unwrap_or(false) {
            segs.pop();
        }
    }
    SegmentFamily::new(segs, Class::Disjoint)
}

pub fn named(name: &str) -> Option<SegmentFamily> {
    match name {
        "l" => Some(l_instance()),
        "rect" => Some(rectangle()),
        "nested" => Some(nested_loops()),
        _ => None,
    }
}
