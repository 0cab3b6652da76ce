//! Quadrilateral cells of the contracting wave and their coordinate charts.
//!
//! A segment sits between two consecutive boundary tiers: corners `a`, `b`
//! on the outer tier and `d`, `c` beneath them on the inner tier, listed
//! counter-clockwise as a-b-c-d. Chart coordinates are `depth` (0 on the
//! outer edge a-b, 1 on the inner edge d-c) and `side` (0 on the a-d side,
//! 1 on the b-c side).
//!
//! The chart is piecewise affine: the quad splits along an interior
//! diagonal into two triangles, each mapped affinely from its half of the
//! coordinate box. The a-c diagonal is interior for convex quads and quads
//! reflex at c; a quad reflex at d (the only other shape a wave cell can
//! take, since its outer corners are convex) splits along b-d instead.
//! Affine pieces make the chart exactly invertible, and every edge is the
//! affine parameterization of its corner pair, so adjacent segments and
//! consecutive tiers agree on shared edges no matter which split either
//! side uses. Fully collinear quads collapse to their midline, with depth
//! the only meaningful coordinate and side pinned to one half.

use crate::geom::point::{collinear, orient2d, Point};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SegmentDegeneracy {
    None,
    Partial,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegCoord<S> {
    pub depth: S,
    pub side: S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Chart {
    SplitAC,
    SplitBD,
    Midline,
}

#[derive(Debug, Clone)]
pub struct WaveSegment<S> {
    pub slot: usize,
    pub a: Point<S>,
    pub b: Point<S>,
    pub c: Point<S>,
    pub d: Point<S>,
    pub degeneracy: SegmentDegeneracy,
    chart: Chart,
    scale: S,
    bbox_min: Point<S>,
    bbox_max: Point<S>,
}

impl<S: Scalar> WaveSegment<S> {
    pub fn new(slot: usize, a: Point<S>, b: Point<S>, c: Point<S>, d: Point<S>) -> Self {
        let scale = a
            .dist(b)
            .max(b.dist(c))
            .max(c.dist(d))
            .max(d.dist(a))
            .max(S::lit(1e-12));
        let area_tol = scale * scale * S::lit(1e-12);
        let triples = [
            collinear(a, b, c, area_tol),
            collinear(a, b, d, area_tol),
            collinear(a, c, d, area_tol),
            collinear(b, c, d, area_tol),
        ];
        let hits = triples.iter().filter(|t| **t).count();
        let degeneracy = match hits {
            0 => SegmentDegeneracy::None,
            4 => SegmentDegeneracy::Full,
            _ => SegmentDegeneracy::Partial,
        };
        let chart = if degeneracy == SegmentDegeneracy::Full {
            Chart::Midline
        } else if orient2d(c, d, a) < -area_tol {
            // Reflex at d: only the b-d diagonal is interior.
            Chart::SplitBD
        } else {
            Chart::SplitAC
        };
        let xs = [a.x, b.x, c.x, d.x];
        let ys = [a.y, b.y, c.y, d.y];
        let fold_min = |v: [S; 4]| v.iter().copied().fold(S::infinity(), S::min);
        let fold_max = |v: [S; 4]| v.iter().copied().fold(S::neg_infinity(), S::max);
        WaveSegment {
            slot,
            a,
            b,
            c,
            d,
            degeneracy,
            chart,
            scale,
            bbox_min: Point::new(fold_min(xs), fold_min(ys)),
            bbox_max: Point::new(fold_max(xs), fold_max(ys)),
        }
    }

    pub fn from_coord(&self, coord: SegCoord<S>) -> Point<S> {
        let SegCoord { depth, side } = coord;
        match self.chart {
            Chart::Midline => {
                let m0 = self.a.lerp(self.b, S::lit(0.5));
                let m1 = self.d.lerp(self.c, S::lit(0.5));
                m0 + (m1 - m0) * depth
            }
            Chart::SplitAC => {
                if side >= depth {
                    // Triangle a-b-c covers the coordinates above the
                    // (0,0)-(1,1) diagonal.
                    self.a + (self.b - self.a) * (side - depth) + (self.c - self.a) * depth
                } else {
                    self.a + (self.d - self.a) * (depth - side) + (self.c - self.a) * side
                }
            }
            Chart::SplitBD => {
                if depth + side <= S::one() {
                    // Triangle a-b-d covers the coordinates below the
                    // (0,1)-(1,0) anti-diagonal.
                    self.a + (self.b - self.a) * side + (self.d - self.a) * depth
                } else {
                    self.b + (self.c - self.b) * depth + (self.c - self.d) * (side - S::one())
                }
            }
        }
    }

    /// The two affine pieces of the chart as corner triangles. Degenerate
    /// quads yield zero-area slivers, which area tests treat as empty.
    pub fn triangles(&self) -> [[Point<S>; 3]; 2] {
        match self.chart {
            Chart::SplitBD => [[self.a, self.b, self.d], [self.b, self.c, self.d]],
            _ => [[self.a, self.b, self.c], [self.a, self.c, self.d]],
        }
    }

    /// Chart coordinates of `p` if it lies in this segment, allowing
    /// `box_tol` of slack outside the unit box.
    pub fn to_coord(&self, p: Point<S>, box_tol: S) -> Option<SegCoord<S>> {
        let slack = self.scale * box_tol + box_tol;
        if p.x < self.bbox_min.x - slack
            || p.x > self.bbox_max.x + slack
            || p.y < self.bbox_min.y - slack
            || p.y > self.bbox_max.y + slack
        {
            return None;
        }
        let cand = match self.chart {
            Chart::Midline => self.to_coord_midline(p, box_tol),
            Chart::SplitAC => self.to_coord_split_ac(p),
            Chart::SplitBD => self.to_coord_split_bd(p),
        }?;
        let violation = box_violation(cand.depth).max(box_violation(cand.side));
        if violation <= box_tol {
            // Positional confirmation: rejects points that are only near
            // the chart's extension outside the quad.
            let back = self.from_coord(SegCoord {
                depth: clamp01(cand.depth),
                side: clamp01(cand.side),
            });
            if back.dist(p) <= self.scale * box_tol + box_tol {
                return Some(cand);
            }
        }
        None
    }

    fn to_coord_midline(&self, p: Point<S>, box_tol: S) -> Option<SegCoord<S>> {
        let m0 = self.a.lerp(self.b, S::lit(0.5));
        let m1 = self.d.lerp(self.c, S::lit(0.5));
        let axis = m1 - m0;
        let len_sq = axis.norm_sq();
        if len_sq <= self.scale * self.scale * S::lit(1e-24) {
            // The whole segment is one point.
            return (p.dist(m0) <= self.scale * box_tol + box_tol).then_some(SegCoord {
                depth: S::zero(),
                side: S::lit(0.5),
            });
        }
        let depth = (p - m0).dot(axis) / len_sq;
        let off = (p - (m0 + axis * depth)).norm();
        if off > self.scale * box_tol + box_tol {
            return None;
        }
        Some(SegCoord {
            depth,
            side: S::lit(0.5),
        })
    }

    /// Minimum denominator magnitude for a triangle solve; below this the
    /// triangle is a sliver and the other one carries the chart.
    fn solve_tol(&self) -> S {
        self.scale * self.scale * S::lit(1e-13)
    }

    fn to_coord_split_ac(&self, p: Point<S>) -> Option<SegCoord<S>> {
        let w = p - self.a;
        let diag = self.c - self.a;
        let mut best: Option<(S, SegCoord<S>)> = None;
        let den1 = (self.b - self.a).cross(diag);
        if den1.abs() > self.solve_tol() {
            // w = alpha*(b - a) + beta*(c - a); depth = beta, side = alpha + beta.
            let alpha = w.cross(diag) / den1;
            let beta = (self.b - self.a).cross(w) / den1;
            let tv = (-alpha).max(-beta).max(alpha + beta - S::one()).max(S::zero());
            consider(&mut best, tv, SegCoord {
                depth: beta,
                side: alpha + beta,
            });
        }
        let den2 = (self.d - self.a).cross(diag);
        if den2.abs() > self.solve_tol() {
            // w = gamma*(d - a) + delta*(c - a); depth = gamma + delta, side = delta.
            let gamma = w.cross(diag) / den2;
            let delta = (self.d - self.a).cross(w) / den2;
            let tv = (-gamma).max(-delta).max(gamma + delta - S::one()).max(S::zero());
            consider(&mut best, tv, SegCoord {
                depth: gamma + delta,
                side: delta,
            });
        }
        best.map(|(_, c)| c)
    }

    fn to_coord_split_bd(&self, p: Point<S>) -> Option<SegCoord<S>> {
        let mut best: Option<(S, SegCoord<S>)> = None;
        let den1 = (self.b - self.a).cross(self.d - self.a);
        if den1.abs() > self.solve_tol() {
            // p - a = side*(b - a) + depth*(d - a).
            let w = p - self.a;
            let side = w.cross(self.d - self.a) / den1;
            let depth = (self.b - self.a).cross(w) / den1;
            let tv = (-side).max(-depth).max(depth + side - S::one()).max(S::zero());
            consider(&mut best, tv, SegCoord { depth, side });
        }
        let e1 = self.c - self.b;
        let e2 = self.c - self.d;
        let den2 = e1.cross(e2);
        if den2.abs() > self.solve_tol() {
            // p - b = depth*(c - b) + (side - 1)*(c - d).
            let w = p - self.b;
            let depth = w.cross(e2) / den2;
            let side = S::one() + e1.cross(w) / den2;
            let tv = (depth - S::one())
                .max(side - S::one())
                .max(S::one() - depth - side)
                .max(S::zero());
            consider(&mut best, tv, SegCoord { depth, side });
        }
        best.map(|(_, c)| c)
    }
}

fn consider<S: Scalar>(best: &mut Option<(S, SegCoord<S>)>, tv: S, coord: SegCoord<S>) {
    if !coord.depth.is_finite() || !coord.side.is_finite() {
        return;
    }
    if best.map_or(true, |(s, _)| tv < s) {
        *best = Some((tv, coord));
    }
}

fn box_violation<S: Scalar>(x: S) -> S {
    (-x).max(x - S::one()).max(S::zero())
}

fn clamp01<S: Scalar>(x: S) -> S {
    x.max(S::zero()).min(S::one())
}
