use crate::geom::point::Point;
use crate::geom::GeometryError;
use crate::scalar::Scalar;

/// Positions of all robots at one instant, indexed by robot id.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration<S> {
    positions: Vec<Point<S>>,
}

impl<S: Scalar> Configuration<S> {
    /// Validates that the swarm is nonempty and every coordinate is finite.
    pub fn new(positions: Vec<Point<S>>) -> Result<Self, GeometryError> {
        if positions.is_empty() {
            return Err(GeometryError::EmptyConfiguration);
        }
        for (index, p) in positions.iter().enumerate() {
            if !p.is_finite() {
                return Err(GeometryError::NonFinitePosition { index });
            }
        }
        Ok(Configuration { positions })
    }

    pub fn from_pairs(pairs: &[(S, S)]) -> Result<Self, GeometryError> {
        Self::new(pairs.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    #[inline]
    pub fn positions(&self) -> &[Point<S>] {
        &self.positions
    }

    #[inline]
    pub fn point(&self, index: usize) -> Point<S> {
        self.positions[index]
    }

    /// Largest pairwise distance; zero for a single robot.
    pub fn diameter(&self) -> S {
        let mut best = S::zero();
        for i in 0..self.positions.len() {
            for j in (i + 1)..self.positions.len() {
                best = best.max(self.positions[i].dist(self.positions[j]));
            }
        }
        best
    }

    /// Smallest pairwise distance; infinity for a single robot.
    pub fn min_pairwise_dist(&self) -> S {
        let mut best = S::infinity();
        for i in 0..self.positions.len() {
            for j in (i + 1)..self.positions.len() {
                best = best.min(self.positions[i].dist(self.positions[j]));
            }
        }
        best
    }

    /// Arithmetic mean of all positions.
    pub fn centroid(&self) -> Point<S> {
        let mut sum = Point::zero();
        for &p in &self.positions {
            sum += p;
        }
        sum / S::of_usize(self.positions.len())
    }
}

impl<S: Scalar> core::ops::Index<usize> for Configuration<S> {
    type Output = Point<S>;
    #[inline]
    fn index(&self, index: usize) -> &Point<S> {
        &self.positions[index]
    }
}
