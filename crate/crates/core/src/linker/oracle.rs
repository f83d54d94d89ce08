//! Brute-force ground truth: enumerate every walk order in lexicographic
//! order and return the first one [`verify_linking`] accepts.

use super::{verify_linking, Decision, LinkMode, Linking};
use crate::error::LinkError;
use crate::instance::{EndRef, SegmentFamily};

pub const ORACLE_CAP: usize = 7;

pub fn oracle_decide(
    family: &SegmentFamily,
    mode: LinkMode,
    cap: usize,
) -> Result<Decision, LinkError> {
    let n = family.len();
    if n > cap {
        return Err(LinkError::CapExceeded { cap, n });
    }
    if n == 0 {
        return Ok(Decision::No);
    }
    let mut walk = Walk {
        family,
        mode,
        order: Vec::with_capacity(2 * n),
        used: vec![false; n],
    };
    let starts: Vec<usize> = match mode {
        // A circuit can always be rotated to start with end (0,0) followed by (0,1).
        LinkMode::Circuit => vec![0],
        LinkMode::Path => (0..2 * n).collect(),
    };
    for s in starts {
        if let Some(w) = walk.from_start(EndRef::from_index(s)) {
            return Ok(Decision::Yes(w));
        }
    }
    Ok(Decision::No)
}

struct Walk<'a> {
    family: &'a SegmentFamily,
    mode: LinkMode,
    order: Vec<EndRef>,
    used: Vec<bool>,
}

impl Walk<'_> {
    fn from_start(&mut self, start: EndRef) -> Option<Linking> {
        self.place(start);
        let found = self.extend();
        self.unplace(start);
        found
    }

    fn place(&mut self, e: EndRef) {
        self.order.push(e);
        self.order.push(e.mate());
        self.used[e.seg] = true;
    }

    fn unplace(&mut self, e: EndRef) {
        self.order.truncate(self.order.len() - 2);
        self.used[e.seg] = false;
    }

    fn extend(&mut self) -> Option<Linking> {
        let n = self.family.len();
        if self.order.len() == 2 * n {
            let w = Linking {
                mode: self.mode,
                order: self.order.clone(),
            };
            return verify_linking(self.family, &w).is_ok().then_some(w);
        }
        for i in 0..2 * n {
            let e = EndRef::from_index(i);
            if self.used[e.seg] {
                continue;
            }
            self.place(e);
            let found = self.extend();
            self.unplace(e);
            if found.is_some() {
                return found;
            }
        }
        None
    }
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

    #[test]
    fn reproduces_small_answers() {
        let one = fam(&[(0, 0, 1, 0)]);
        assert_eq!(oracle_decide(&one, LinkMode::Circuit, 7).unwrap(), Decision::No);
        assert!(oracle_decide(&one, LinkMode::Path, 7).unwrap().is_yes());
        let col = fam(&[(0, 0, 1, 0), (2, 0, 3, 0)]);
        assert_eq!(oracle_decide(&col, LinkMode::Circuit, 7).unwrap(), Decision::No);
        assert!(oracle_decide(&col, LinkMode::Path, 7).unwrap().is_yes());
        let par = fam(&[(0, 0, 1, 0), (0, 1, 1, 1)]);
        assert!(oracle_decide(&par, LinkMode::Circuit, 7).unwrap().is_yes());
    }

    #[test]
    fn cap_is_enforced() {
        let f = fam(&[(0, 0, 1, 0), (0, 1, 1, 1), (0, 2, 1, 2)]);
        assert_eq!(
            oracle_decide(&f, LinkMode::Path, 2),
            Err(LinkError::CapExceeded { cap: 2, n: 3 })
        );
    }
}
