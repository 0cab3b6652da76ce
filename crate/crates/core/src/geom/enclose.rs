use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::point::Point;
use crate::geom::GeometryError;
use crate::scalar::Scalar;

/// A circle given by center and radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle<S> {
    pub center: Point<S>,
    pub radius: S,
}

impl<S: Scalar> Circle<S> {
    #[inline]
    pub fn diameter(&self) -> S {
        self.radius * S::lit(2.0)
    }

    #[inline]
    fn contains(&self, p: Point<S>, slack: S) -> bool {
        self.center.dist(p) <= self.radius + slack
    }
}

/// Smallest circle enclosing all points, by randomized incremental
/// construction over a fixed-seed shuffle so results are reproducible.
pub fn smallest_enclosing_circle<S: Scalar>(points: &[Point<S>]) -> Result<Circle<S>, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::EmptyConfiguration);
    }
    let mut order: Vec<Point<S>> = points.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ec5_eed5);
    order.shuffle(&mut rng);

    let slack = relative_slack(points);
    let mut circle = Circle {
        center: order[0],
        radius: S::zero(),
    };
    for i in 1..order.len() {
        if circle.contains(order[i], slack) {
            continue;
        }
        circle = circle_with_one(&order[..=i], order[i], slack);
    }
    Ok(circle)
}

fn relative_slack<S: Scalar>(points: &[Point<S>]) -> S {
    let mut scale = S::one();
    for p in points {
        scale = scale.max(p.x.abs()).max(p.y.abs());
    }
    scale * S::lit(1e-12)
}

fn circle_with_one<S: Scalar>(points: &[Point<S>], p: Point<S>, slack: S) -> Circle<S> {
    let mut circle = Circle {
        center: p,
        radius: S::zero(),
    };
    for (i, &q) in points.iter().enumerate() {
        if q == p || circle.contains(q, slack) {
            continue;
        }
        circle = circle_with_two(&points[..=i], p, q, slack);
    }
    circle
}

fn circle_with_two<S: Scalar>(points: &[Point<S>], p: Point<S>, q: Point<S>, slack: S) -> Circle<S> {
    let mut circle = diameter_circle(p, q);
    for &r in points {
        if circle.contains(r, slack) {
            continue;
        }
        circle = circumscribed(p, q, r).unwrap_or(circle);
    }
    circle
}

fn diameter_circle<S: Scalar>(a: Point<S>, b: Point<S>) -> Circle<S> {
    let center = (a + b) * S::lit(0.5);
    Circle {
        center,
        radius: center.dist(a).max(center.dist(b)),
    }
}

fn circumscribed<S: Scalar>(a: Point<S>, b: Point<S>, c: Point<S>) -> Option<Circle<S>> {
    let center = crate::geom::point::circumcenter(a, b, c, S::lit(1e-30))?;
    let radius = center.dist(a).max(center.dist(b)).max(center.dist(c));
    Some(Circle { center, radius })
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Point<f64>;

    fn assert_encloses(points: &[P], c: &Circle<f64>) {
        for p in points {
            assert!(
                c.center.dist(*p) <= c.radius + 1e-9,
                "point {:?} escapes circle {:?}",
                p,
                c
            );
        }
    }

    /// Brute-force oracle: the optimum is supported by two or three points,
    /// so try all pair-diameter and triple-circumscribed circles.
    fn brute_force(points: &[P]) -> Circle<f64> {
        let mut best = Circle {
            center: points[0],
            radius: f64::INFINITY,
        };
        if points.len() == 1 {
            return Circle {
                center: points[0],
                radius: 0.0,
            };
        }
        let encloses = |c: &Circle<f64>| points.iter().all(|p| c.center.dist(*p) <= c.radius + 1e-9);
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let c = diameter_circle(points[i], points[j]);
                if encloses(&c) && c.radius < best.radius {
                    best = c;
                }
                for k in (j + 1)..points.len() {
                    if let Some(c) = circumscribed(points[i], points[j], points[k]) {
                        if encloses(&c) && c.radius < best.radius {
                            best = c;
                        }
                    }
                }
            }
        }
        best
    }

    #[test]
    fn unit_square_circumcircle() {
        let pts = vec![
            P::new(0.0, 0.0),
            P::new(1.0, 0.0),
            P::new(1.0, 1.0),
            P::new(0.0, 1.0),
        ];
        let c = smallest_enclosing_circle(&pts).unwrap();
        assert!((c.center.x - 0.5).abs() < 1e-9);
        assert!((c.center.y - 0.5).abs() < 1e-9);
        assert!((c.radius - 0.5_f64 * 2.0_f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn single_and_pair() {
        let one = smallest_enclosing_circle(&[P::new(3.0, 4.0)]).unwrap();
        assert_eq!(one.radius, 0.0);
        let two = smallest_enclosing_circle(&[P::new(0.0, 0.0), P::new(2.0, 0.0)]).unwrap();
        assert!((two.radius - 1.0).abs() < 1e-12);
        assert!((two.center.x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_brute_force_on_random_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let n = rng.gen_range(1..25);
            let pts: Vec<P> = (0..n)
                .map(|_| P::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)))
                .collect();
            let fast = smallest_enclosing_circle(&pts).unwrap();
            let slow = brute_force(&pts);
            assert_encloses(&pts, &fast);
            assert!(
                (fast.radius - slow.radius).abs() <= 1e-7,
                "fast {} vs brute {}",
                fast.radius,
                slow.radius
            );
        }
    }

    #[test]
    fn deterministic_across_calls() {
        let pts: Vec<P> = (0..40)
            .map(|i| {
                let a = i as f64 * 0.7;
                P::new(a.sin() * 3.0, a.cos() * 2.0)
            })
            .collect();
        let a = smallest_enclosing_circle(&pts).unwrap();
        let b = smallest_enclosing_circle(&pts).unwrap();
        assert_eq!(a, b);
    }
}
