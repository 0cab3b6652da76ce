use crate::geom::point::Point;
use crate::scalar::Scalar;

/// Uniform bucket grid over a point set for fast proximity queries.
pub struct CellGrid<S> {
    cell: S,
    min: Point<S>,
    cols: i64,
    rows: i64,
    buckets: Vec<Vec<u32>>,
    points: Vec<Point<S>>,
}

impl<S: Scalar> CellGrid<S> {
    pub fn build(points: &[Point<S>], cell: S) -> Self {
        assert!(cell > S::zero(), "cell size must be positive");
        let mut min = points[0];
        let mut max = points[0];
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        let cols = ((max.x - min.x) / cell).floor().to_i64().unwrap_or(0) + 1;
        let rows = ((max.y - min.y) / cell).floor().to_i64().unwrap_or(0) + 1;
        let mut buckets = vec![Vec::new(); (cols * rows) as usize];
        for (i, p) in points.iter().enumerate() {
            let (cx, cy) = Self::cell_of(min, cell, cols, rows, *p);
            buckets[(cy * cols + cx) as usize].push(i as u32);
        }
        CellGrid {
            cell,
            min,
            cols,
            rows,
            buckets,
            points: points.to_vec(),
        }
    }

    fn cell_of(min: Point<S>, cell: S, cols: i64, rows: i64, p: Point<S>) -> (i64, i64) {
        let cx = ((p.x - min.x) / cell).floor().to_i64().unwrap_or(0);
        let cy = ((p.y - min.y) / cell).floor().to_i64().unwrap_or(0);
        (cx.clamp(0, cols - 1), cy.clamp(0, rows - 1))
    }

    /// Minimum distance from `p` to any stored point, clipped at `cap`: the
    /// returned value is exact when below `cap`, otherwise at least `cap`.
    pub fn min_dist_capped(&self, p: Point<S>, cap: S) -> S {
        let raw_cx = ((p.x - self.min.x) / self.cell).floor().to_i64().unwrap_or(0);
        let raw_cy = ((p.y - self.min.y) / self.cell).floor().to_i64().unwrap_or(0);
        let mut best = S::infinity();
        let max_ring = self.cols.max(self.rows);
        let mut ring = 0;
        loop {
            // Points in cells of Chebyshev ring k are at least (k-1)*cell away.
            let ring_floor = S::of_usize(ring.max(1) as usize - 1) * self.cell;
            if ring > 0 && (ring_floor >= best || ring_floor >= cap) {
                break;
            }
            let mut any_cell = false;
            for cy in (raw_cy - ring)..=(raw_cy + ring) {
                if cy < 0 || cy >= self.rows {
                    continue;
                }
                for cx in (raw_cx - ring)..=(raw_cx + ring) {
                    if cx < 0 || cx >= self.cols {
                        continue;
                    }
                    let on_ring = ring == 0
                        || (cy - raw_cy).abs() == ring
                        || (cx - raw_cx).abs() == ring;
                    if !on_ring {
                        continue;
                    }
                    any_cell = true;
                    for &idx in &self.buckets[(cy * self.cols + cx) as usize] {
                        best = best.min(p.dist(self.points[idx as usize]));
                    }
                }
            }
            ring += 1;
            if ring > max_ring && !any_cell {
                break;
            }
            if ring > 2 * max_ring + 2 {
                break;
            }
        }
        best
    }

    /// Indices of stored points within `radius` of `p`, ascending.
    pub fn within(&self, p: Point<S>, radius: S) -> Vec<usize> {
        let lo = Self::cell_of(self.min, self.cell, self.cols, self.rows, p - Point::new(radius, radius));
        let hi = Self::cell_of(self.min, self.cell, self.cols, self.rows, p + Point::new(radius, radius));
        let r_sq = radius * radius;
        let mut out = Vec::new();
        for cy in lo.1..=hi.1 {
            for cx in lo.0..=hi.0 {
                for &idx in &self.buckets[(cy * self.cols + cx) as usize] {
                    if p.dist_sq(self.points[idx as usize]) <= r_sq {
                        out.push(idx as usize);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}
