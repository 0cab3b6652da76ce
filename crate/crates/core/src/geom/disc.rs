use crate::geom::config::Configuration;
use crate::geom::point::Point;
use crate::scalar::Scalar;

/// Undirected proximity graph: robots are adjacent iff their distance is at
/// most `radius` (plus the absolute tolerance used at construction).
#[derive(Clone, Debug)]
pub struct DiscGraph<S> {
    radius: S,
    neighbors: Vec<Vec<usize>>,
}

/// Builds the disc graph of a configuration. Adjacency uses
/// `dist <= radius + tol` so that exact-range pairs (e.g. unit grid
/// neighbors at distance exactly 1) are kept stable under rounding.
pub fn disc_graph<S: Scalar>(config: &Configuration<S>, radius: S, tol: S) -> DiscGraph<S> {
    let pts = config.positions();
    let n = pts.len();
    let limit = radius + tol;
    let limit_sq = limit * limit;
    let mut neighbors = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if pts[i].dist_sq(pts[j]) <= limit_sq {
                neighbors[i].push(j);
                neighbors[j].push(i);
            }
        }
    }
    DiscGraph { radius, neighbors }
}

impl<S: Scalar> DiscGraph<S> {
    #[inline]
    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    #[inline]
    pub fn radius(&self) -> S {
        self.radius
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(|adj| adj.len()).sum::<usize>() / 2
    }

    /// Breadth-first reachability from robot 0.
    pub fn is_connected(&self) -> bool {
        let n = self.neighbors.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        seen[0] = true;
        queue.push_back(0);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.neighbors[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }
}

/// True iff every pair of robots is within `range` (plus tolerance); in
/// particular the swarm forms a clique of the range-`range` disc graph.
pub fn is_near_gathering<S: Scalar>(config: &Configuration<S>, range: S, tol: S) -> bool {
    let pts = config.positions();
    let limit = range + tol;
    let limit_sq = limit * limit;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if pts[i].dist_sq(pts[j]) > limit_sq {
                return false;
            }
        }
    }
    true
}

/// Convenience for callers that track raw point slices.
pub fn max_pairwise_dist<S: Scalar>(pts: &[Point<S>]) -> S {
    let mut best = S::zero();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            best = best.max(pts[i].dist(pts[j]));
        }
    }
    best
}
