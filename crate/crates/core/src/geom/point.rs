use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::scalar::Scalar;

/// A point (or vector) in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    #[inline]
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn zero() -> Self {
        Point {
            x: S::zero(),
            y: S::zero(),
        }
    }

    #[inline]
    pub fn dot(self, other: Self) -> S {
        self.x * other.x + self.y * other.y
    }

    /// Z-component of the cross product of the two vectors.
    #[inline]
    pub fn cross(self, other: Self) -> S {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm_sq(self) -> S {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> S {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn dist(self, other: Self) -> S {
        (self - other).norm()
    }

    #[inline]
    pub fn dist_sq(self, other: Self) -> S {
        (self - other).norm_sq()
    }

    /// Counterclockwise rotation about the origin.
    #[inline]
    pub fn rotated(self, angle: S) -> Self {
        let (sin, cos) = angle.sin_cos();
        Point {
            x: cos * self.x - sin * self.y,
            y: sin * self.x + cos * self.y,
        }
    }

    /// Linear interpolation: `self` at t = 0, `other` at t = 1.
    #[inline]
    pub fn lerp(self, other: Self, t: S) -> Self {
        self + (other - self) * t
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<S: Scalar> Add for Point<S> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<S: Scalar> Sub for Point<S> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<S: Scalar> Neg for Point<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Point::new(-self.x, -self.y)
    }
}

impl<S: Scalar> Mul<S> for Point<S> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: S) -> Self {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl<S: Scalar> Div<S> for Point<S> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: S) -> Self {
        Point::new(self.x / rhs, self.y / rhs)
    }
}

impl<S: Scalar> AddAssign for Point<S> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl<S: Scalar> SubAssign for Point<S> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

/// Twice the signed area of triangle (a, b, c); positive for counterclockwise.
#[inline]
pub fn orient2d<S: Scalar>(a: Point<S>, b: Point<S>, c: Point<S>) -> S {
    (b - a).cross(c - a)
}

/// Collinearity within an absolute area tolerance.
#[inline]
pub fn collinear<S: Scalar>(a: Point<S>, b: Point<S>, c: Point<S>, tol: S) -> bool {
    orient2d(a, b, c).abs() <= tol
}

/// Distance from `p` to the segment [a, b].
pub fn point_segment_dist<S: Scalar>(p: Point<S>, a: Point<S>, b: Point<S>) -> S {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == S::zero() {
        return p.dist(a);
    }
    let t = (p - a).dot(ab) / len_sq;
    let t = t.max(S::zero()).min(S::one());
    p.dist(a + ab * t)
}

/// Parameter of the orthogonal projection of `p` onto the line through a, b
/// (0 at a, 1 at b); the line must not be degenerate.
#[inline]
pub fn project_param<S: Scalar>(p: Point<S>, a: Point<S>, b: Point<S>) -> S {
    let ab = b - a;
    (p - a).dot(ab) / ab.norm_sq()
}

/// Intersection of the lines through (p, p + pd) and (q, q + qd), as the
/// parameter pair (t, u) with crossing point p + pd * t. None for parallels.
pub fn line_intersection_params<S: Scalar>(
    p: Point<S>,
    pd: Point<S>,
    q: Point<S>,
    qd: Point<S>,
    parallel_tol: S,
) -> Option<(S, S)> {
    let denom = pd.cross(qd);
    if denom.abs() <= parallel_tol {
        return None;
    }
    let diff = q - p;
    let t = diff.cross(qd) / denom;
    let u = diff.cross(pd) / denom;
    Some((t, u))
}

/// Minimal distance between segments [a, b] and [c, d].
pub fn segment_segment_dist<S: Scalar>(
    a: Point<S>,
    b: Point<S>,
    c: Point<S>,
    d: Point<S>,
) -> S {
    if segments_intersect(a, b, c, d) {
        return S::zero();
    }
    point_segment_dist(a, c, d)
        .min(point_segment_dist(b, c, d))
        .min(point_segment_dist(c, a, b))
        .min(point_segment_dist(d, a, b))
}

fn segments_intersect<S: Scalar>(a: Point<S>, b: Point<S>, c: Point<S>, d: Point<S>) -> bool {
    let d1 = orient2d(c, d, a);
    let d2 = orient2d(c, d, b);
    let d3 = orient2d(a, b, c);
    let d4 = orient2d(a, b, d);
    ((d1 > S::zero() && d2 < S::zero()) || (d1 < S::zero() && d2 > S::zero()))
        && ((d3 > S::zero() && d4 < S::zero()) || (d3 < S::zero() && d4 > S::zero()))
}

/// Circumcenter of three points; None when the triangle is (near-)degenerate.
pub fn circumcenter<S: Scalar>(a: Point<S>, b: Point<S>, c: Point<S>, tol: S) -> Option<Point<S>> {
    // Work relative to `a` for conditioning.
    let b = b - a;
    let c = c - a;
    let d = S::lit(2.0) * b.cross(c);
    if d.abs() <= tol {
        return None;
    }
    let bs = b.norm_sq();
    let cs = c.norm_sq();
    let ux = (c.y * bs - b.y * cs) / d;
    let uy = (b.x * cs - c.x * bs) / d;
    Some(a + Point::new(ux, uy))
}
