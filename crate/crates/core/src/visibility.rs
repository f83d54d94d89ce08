//! Endpoint visibility: two points see each other when the open segment
//! between them misses every closed segment of the family.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::InstanceError;
use crate::geom::{closed_closed, open_closed, IntPoint, Mode, Planar, Point, Segment};
use crate::instance::{EndRef, Endpoint, SegmentFamily};

/// Point-level view of a family with the arithmetic picked once: machine
/// integers when every coordinate allows it, big rationals otherwise.
#[derive(Clone, Debug)]
pub struct Scene {
    pub endpoints: Vec<Endpoint>,
    /// Point index of each segment end, indexed by [`EndRef::index`].
    pub end_point: Vec<usize>,
    /// Point indices of each segment's two ends.
    pub segs: Vec<[usize; 2]>,
    coords: Coords,
}

#[derive(Clone, Debug)]
enum Coords {
    Int {
        pts: Vec<IntPoint>,
        /// Per segment: min x, max x, min y, max y.
        boxes: Vec<[i64; 4]>,
    },
    Rat(Vec<Point>),
}

impl Scene {
    pub fn new(family: &SegmentFamily) -> Scene {
        let endpoints = family.endpoints();
        let mut end_point = vec![0; 2 * family.len()];
        for (k, ep) in endpoints.iter().enumerate() {
            for e in &ep.ends {
                end_point[e.index()] = k;
            }
        }
        let segs: Vec<[usize; 2]> = (0..family.len())
            .map(|s| [end_point[2 * s], end_point[2 * s + 1]])
            .collect();
        let ints: Option<Vec<IntPoint>> =
            endpoints.iter().map(|e| IntPoint::from_point(&e.point)).collect();
        let coords = match ints {
            Some(pts) => {
                let boxes = segs
                    .iter()
                    .map(|[a, b]| {
                        let (p, q) = (pts[*a], pts[*b]);
                        [p.x.min(q.x), p.x.max(q.x), p.y.min(q.y), p.y.max(q.y)]
                    })
                    .collect();
                Coords::Int { pts, boxes }
            }
            None => Coords::Rat(endpoints.iter().map(|e| e.point.clone()).collect()),
        };
        Scene {
            endpoints,
            end_point,
            segs,
            coords,
        }
    }

    pub fn point_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.endpoints[i].point
    }

    pub fn point_of(&self, e: EndRef) -> usize {
        self.end_point[e.index()]
    }

    pub fn is_integral(&self) -> bool {
        matches!(self.coords, Coords::Int { .. })
    }

    /// Points `i` and `j` see each other.
    pub fn sees(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        match &self.coords {
            Coords::Int { pts, boxes } => {
                let (p, q) = (pts[i], pts[j]);
                let (x0, x1) = (p.x.min(q.x), p.x.max(q.x));
                let (y0, y1) = (p.y.min(q.y), p.y.max(q.y));
                !self.segs.iter().zip(boxes).any(|([a, b], bx)| {
                    bx[0] <= x1
                        && bx[1] >= x0
                        && bx[2] <= y1
                        && bx[3] >= y0
                        && open_closed(&p, &q, &pts[*a], &pts[*b])
                })
            }
            Coords::Rat(pts) => !self
                .segs
                .iter()
                .any(|[a, b]| open_closed(&pts[i], &pts[j], &pts[*a], &pts[*b])),
        }
    }

    /// Closed segments between point pairs `(a, b)` and `(c, d)` meet.
    pub fn closed_meet(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        match &self.coords {
            Coords::Int { pts, .. } => closed_closed(&pts[a], &pts[b], &pts[c], &pts[d]),
            Coords::Rat(pts) => closed_closed(&pts[a], &pts[b], &pts[c], &pts[d]),
        }
    }

    /// Sign of the orientation of three points.
    pub fn orient(&self, a: usize, b: usize, c: usize) -> i8 {
        match &self.coords {
            Coords::Int { pts, .. } => IntPoint::orient(&pts[a], &pts[b], &pts[c]),
            Coords::Rat(pts) => Point::orient(&pts[a], &pts[b], &pts[c]),
        }
    }

    /// `c` and `a` lie on the same side of `b` along a common line.
    pub fn same_side(&self, a: usize, b: usize, c: usize) -> bool {
        match &self.coords {
            Coords::Int { pts, .. } => pts[a].lex_cmp(&pts[b]) == pts[c].lex_cmp(&pts[b]),
            Coords::Rat(pts) => pts[a].lex_cmp(&pts[b]) == pts[c].lex_cmp(&pts[b]),
        }
    }

    /// Some endpoint of segment `a` sees some endpoint of segment `b`.
    pub fn segments_see(&self, a: usize, b: usize) -> bool {
        self.seeing_pairs(a, b).next().is_some()
    }

    /// All (point of `a`, point of `b`) pairs that see each other.
    pub fn seeing_pairs(&self, a: usize, b: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (sa, sb) = (self.segs[a], self.segs[b]);
        sa.into_iter()
            .flat_map(move |p| sb.into_iter().map(move |q| (p, q)))
            .filter(move |&(p, q)| self.sees(p, q))
    }
}

/// Rational reference implementation of point visibility.
pub fn points_see(p: &Point, q: &Point, family: &SegmentFamily) -> Result<bool, InstanceError> {
    if p == q {
        return Err(InstanceError::SamePoint);
    }
    let chord = Segment { p: p.clone(), q: q.clone() };
    Ok(!family
        .segments
        .iter()
        .any(|s| crate::geom::segments_intersect(&chord, s, Mode::OpenClosed)))
}

pub fn segments_see(a: usize, b: usize, family: &SegmentFamily) -> Result<bool, InstanceError> {
    let n = family.len();
    for i in [a, b] {
        if i >= n {
            return Err(InstanceError::IndexOutOfRange(i));
        }
    }
    if a == b {
        return Err(InstanceError::SamePoint);
    }
    let (sa, sb) = (&family.segments[a], &family.segments[b]);
    for p in [&sa.p, &sa.q] {
        for q in [&sb.p, &sb.q] {
            if p != q && points_see(p, q, family)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisibilityGraph {
    pub vertices: Vec<Endpoint>,
    /// Unordered pairs `(i, j)` with `i < j`.
    pub edges: BTreeSet<(usize, usize)>,
}

impl VisibilityGraph {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// One `i j` pair per line, preceded by the vertex list.
    pub fn to_text(&self) -> String {
        let mut out = format!("vertices {}\n", self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            out.push_str(&format!("v {} {}\n", i, v.point));
        }
        out.push_str(&format!("edges {}\n", self.edges.len()));
        for (a, b) in &self.edges {
            out.push_str(&format!("e {a} {b}\n"));
        }
        out
    }
}

pub fn visibility_graph(family: &SegmentFamily) -> VisibilityGraph {
    graph_of(&Scene::new(family))
}

pub fn graph_of(scene: &Scene) -> VisibilityGraph {
    let m = scene.point_count();
    let edges: BTreeSet<(usize, usize)> = (0..m)
        .into_par_iter()
        .flat_map_iter(|i| {
            (i + 1..m)
                .filter(move |&j| scene.sees(i, j))
                .map(move |j| (i, j))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    VisibilityGraph {
        vertices: scene.endpoints.clone(),
        edges,
    }
}
