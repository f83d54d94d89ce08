//! Exact backtracking search for a linking.
//!
//! Segment ends are matched to each other along visibility edges. The search
//! keeps, for every chain of already-linked segments, the pair of ends that
//! bound it, so closing a cycle early is rejected in O(1). Candidate edges
//! carry a precomputed conflict list (edges they touch), and a placed edge
//! blocks all of its conflicts. Before every branch the state is propagated:
//! an end with no candidate kills the branch, an end with exactly one is
//! linked at once.
//!
//! The returned witness is the lexicographically least walk order. It is
//! built by fixing the walk one added edge at a time, always taking the
//! smallest partner for which a completion still exists.

use rayon::prelude::*;

use super::{verify_linking, Decision, LinkMode, Linking};
use crate::instance::{EndRef, SegmentFamily};
use crate::visibility::Scene;

const UNSET: u32 = u32::MAX;
const FREE: u32 = u32::MAX - 1;

struct Problem {
    mode: LinkMode,
    /// Candidate partners of each end as (other end, edge id), ascending.
    adj: Vec<Vec<(u32, u32)>>,
    /// Edge ids that may not coexist with each edge.
    conflicts: Vec<Vec<u32>>,
}

#[derive(Clone)]
struct State {
    partner: Vec<u32>,
    /// For an end bounding a chain, the end at the chain's other extremity.
    tail: Vec<u32>,
    blocked: Vec<u16>,
    /// Ends ruled out as chain ends.
    pinned: Vec<bool>,
    open: usize,
    free: usize,
}

pub fn decide_circuit(family: &SegmentFamily) -> Decision {
    decide(family, LinkMode::Circuit)
}

pub fn decide_path(family: &SegmentFamily) -> Decision {
    decide(family, LinkMode::Path)
}

/// Decide the family in the given mode. A `Yes` always carries the canonical
/// witness, and that witness has passed [`verify_linking`].
pub fn decide(family: &SegmentFamily, mode: LinkMode) -> Decision {
    if family.is_empty() {
        return Decision::No;
    }
    let scene = Scene::new(family);
    let (problem, root) = match Problem::build(&scene, mode) {
        Some(x) => x,
        None => return Decision::No,
    };
    let Some(order) = problem.canonical(root) else {
        return Decision::No;
    };
    let w = Linking {
        mode,
        order: order.into_iter().map(|e| EndRef::from_index(e as usize)).collect(),
    };
    if let Err(v) = verify_linking(family, &w) {
        panic!("solver produced an invalid witness ({v}):\n{w}");
    }
    Decision::Yes(w)
}

impl Problem {
    /// Candidate graph plus the root state with shared-point joins applied.
    /// `None` when some point carries more than two ends.
    fn build(scene: &Scene, mode: LinkMode) -> Option<(Problem, State)> {
        let m = scene.end_point.len();
        let mut joins = Vec::new();
        for ep in &scene.endpoints {
            match ep.ends.as_slice() {
                [_] => {}
                [a, b] => joins.push((a.index(), b.index())),
                _ => return None,
            }
        }
        let joined: Vec<bool> = {
            let mut j = vec![false; m];
            for &(a, b) in &joins {
                j[a] = true;
                j[b] = true;
            }
            j
        };
        let joined = &joined;
        let mut edges: Vec<(usize, usize)> = (0..m)
            .into_par_iter()
            .filter(|&a| !joined[a])
            .flat_map_iter(|a| {
                let pa = scene.end_point[a];
                (a + 1..m)
                    .filter(move |&b| {
                        !joined[b]
                            && b / 2 != a / 2
                            && scene.sees(pa, scene.end_point[b])
                    })
                    .map(move |b| (a, b))
            })
            .collect();
        edges.sort_unstable();
        let conflicts: Vec<Vec<u32>> = (0..edges.len())
            .into_par_iter()
            .map(|i| {
                let (a, b) = edges[i];
                let (pa, pb) = (scene.end_point[a], scene.end_point[b]);
                edges
                    .iter()
                    .enumerate()
                    .filter(|&(j, &(c, d))| {
                        j != i
                            && c != a
                            && c != b
                            && d != a
                            && d != b
                            && scene.closed_meet(pa, pb, scene.end_point[c], scene.end_point[d])
                    })
                    .map(|(j, _)| j as u32)
                    .collect()
            })
            .collect();
        let mut adj = vec![Vec::new(); m];
        for (id, &(a, b)) in edges.iter().enumerate() {
            adj[a].push((b as u32, id as u32));
            adj[b].push((a as u32, id as u32));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut state = State {
            partner: vec![UNSET; m],
            tail: (0..m as u32).map(|e| e ^ 1).collect(),
            blocked: vec![0; edges.len()],
            pinned: vec![false; m],
            open: m,
            free: 0,
        };
        let problem = Problem {
            mode,
            adj,
            conflicts,
        };
        for (a, b) in joins {
            if state.partner[a] != UNSET || state.partner[b] != UNSET {
                return None;
            }
            if state.tail[a] == b as u32 && !problem.may_close(&state) {
                return None;
            }
            problem.link(&mut state, a as u32, b as u32, None);
        }
        Some((problem, state))
    }

    fn may_close(&self, s: &State) -> bool {
        self.mode == LinkMode::Circuit && s.open == 2
    }

    fn link(&self, s: &mut State, a: u32, b: u32, edge: Option<u32>) {
        let (a, b) = (a as usize, b as usize);
        s.partner[a] = b as u32;
        s.partner[b] = a as u32;
        s.open -= 2;
        let (ta, tb) = (s.tail[a] as usize, s.tail[b] as usize);
        if ta != b {
            s.tail[ta] = tb as u32;
            s.tail[tb] = ta as u32;
        }
        if let Some(id) = edge {
            for &c in &self.conflicts[id as usize] {
                s.blocked[c as usize] += 1;
            }
        }
    }

    fn mark_free(&self, s: &mut State, e: u32) {
        s.partner[e as usize] = FREE;
        s.open -= 1;
        s.free += 1;
    }

    fn candidates<'a>(&'a self, s: &'a State, e: u32) -> impl Iterator<Item = (u32, u32)> + 'a {
        let closing_ok = self.may_close(s);
        let tail = s.tail[e as usize];
        self.adj[e as usize].iter().copied().filter(move |&(f, id)| {
            s.partner[f as usize] == UNSET
                && s.blocked[id as usize] == 0
                && (f != tail || closing_ok)
        })
    }

    fn can_free(&self, s: &State, e: u32) -> bool {
        self.mode == LinkMode::Path
            && s.free < 2
            && !s.pinned[e as usize]
            && (s.partner[s.tail[e as usize] as usize] != FREE || s.open == 1)
    }

    /// Apply forced moves until none is left. `false` on contradiction.
    fn propagate(&self, s: &mut State) -> bool {
        loop {
            let mut changed = false;
            for e in 0..s.partner.len() as u32 {
                if s.partner[e as usize] != UNSET {
                    continue;
                }
                let (first, more) = {
                    let mut it = self.candidates(s, e);
                    (it.next(), it.next().is_some())
                };
                let freeable = self.can_free(s, e);
                match (first, more, freeable) {
                    (None, _, false) => return false,
                    (None, _, true) => self.mark_free(s, e),
                    (Some((f, id)), false, false) => self.link(s, e, f, Some(id)),
                    _ => continue,
                }
                changed = true;
            }
            if !changed {
                return true;
            }
        }
    }

    /// Any completion of `s`, or `None`.
    fn solve(&self, mut s: State) -> Option<State> {
        if !self.propagate(&mut s) {
            return None;
        }
        if s.open == 0 {
            return Some(s);
        }
        // Branch on the most constrained open end.
        let mut best: Option<(usize, u32)> = None;
        for e in 0..s.partner.len() as u32 {
            if s.partner[e as usize] != UNSET {
                continue;
            }
            let options = self.candidates(&s, e).take(8).count() + self.can_free(&s, e) as usize;
            if best.map_or(true, |(k, _)| options < k) {
                best = Some((options, e));
                if options <= 2 {
                    break;
                }
            }
        }
        let (_, e) = best?;
        let cands: Vec<(u32, u32)> = self.candidates(&s, e).collect();
        for (f, id) in cands {
            let mut next = s.clone();
            self.link(&mut next, e, f, Some(id));
            if let Some(done) = self.solve(next) {
                return Some(done);
            }
        }
        if self.can_free(&s, e) {
            let mut next = s;
            self.mark_free(&mut next, e);
            return self.solve(next);
        }
        None
    }

    fn feasible(&self, s: &State) -> bool {
        self.solve(s.clone()).is_some()
    }

    /// Lexicographically least walk order, as end indices.
    fn canonical(&self, root: State) -> Option<Vec<u32>> {
        let mut st = root;
        if !self.propagate(&mut st) {
            return None;
        }
        let m = st.partner.len();
        let mut order: Vec<u32> = Vec::with_capacity(m);
        let start = match self.mode {
            LinkMode::Circuit => {
                if !self.feasible(&st) {
                    return None;
                }
                0
            }
            // The first chain end is the smallest end that can be one; every
            // smaller end is pinned as it gets ruled out.
            LinkMode::Path => {
                let mut chosen = None;
                for e in 0..m as u32 {
                    match st.partner[e as usize] {
                        FREE => {
                            chosen = Some(e);
                            break;
                        }
                        UNSET if self.can_free(&st, e) => {
                            let mut s2 = st.clone();
                            self.mark_free(&mut s2, e);
                            if self.propagate(&mut s2) && self.feasible(&s2) {
                                st = s2;
                                chosen = Some(e);
                                break;
                            }
                            st.pinned[e as usize] = true;
                            if !self.propagate(&mut st) {
                                return None;
                            }
                        }
                        _ => {}
                    }
                }
                chosen?
            }
        };
        order.push(start);
        order.push(start ^ 1);
        while order.len() < m {
            let cur = *order.last().unwrap();
            let next = match st.partner[cur as usize] {
                UNSET => {
                    let cands: Vec<(u32, u32)> = self.candidates(&st, cur).collect();
                    let mut chosen = None;
                    for (f, id) in cands {
                        let mut s2 = st.clone();
                        self.link(&mut s2, cur, f, Some(id));
                        if self.propagate(&mut s2) && self.feasible(&s2) {
                            st = s2;
                            chosen = Some(f);
                            break;
                        }
                    }
                    chosen.expect("a feasible state has a feasible extension")
                }
                FREE => unreachable!("chain ended before covering every segment"),
                f => f,
            };
            order.push(next);
            order.push(next ^ 1);
        }
        Some(order)
    }
}
