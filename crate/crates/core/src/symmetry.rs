//! Rotational symmetry of robot configurations.
//!
//! All rotations are about the center of the smallest enclosing circle.
//! A symmetry element pairs a rotation with the robot relabeling it
//! induces; the elements fixing a configuration form a finite cyclic
//! group (or the identity alone when a robot occupies the center and the
//! rest share no rotation).

use crate::geom::{smallest_enclosing_circle, Configuration, GeometryError, Point};
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum SymmetryError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("robots {first} and {second} both sit within tolerance of the rotated image of robot {subject}")]
    AmbiguousMatch {
        subject: usize,
        first: usize,
        second: usize,
    },
}

/// Rotation by `angle` radians (counter-clockwise) about `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation<S> {
    pub angle: S,
    pub center: Point<S>,
}

impl<S: Scalar> Rotation<S> {
    pub fn apply(&self, p: Point<S>) -> Point<S> {
        self.center + (p - self.center).rotated(self.angle)
    }
}

/// A rotation together with the relabeling it induces: applying the
/// element to configuration `z` yields `out[i] = rotation(z[perm[i]])`,
/// and an element fixes `z` when `out == z` within tolerance.
#[derive(Debug, Clone)]
pub struct SymmetryElement<S> {
    pub rotation: Rotation<S>,
    /// perm[i] is the robot whose rotated position lands on robot i.
    pub perm: Vec<usize>,
}

/// The cyclic group of rotations fixing a configuration.
#[derive(Debug, Clone)]
pub struct SymmetryGroup<S> {
    pub center: Point<S>,
    /// Group order; elements hold exactly this many entries, identity first.
    pub order: usize,
    pub elements: Vec<SymmetryElement<S>>,
}

impl<S: Scalar> SymmetryGroup<S> {
    /// Non-identity rotation angles, ascending.
    pub fn angles(&self) -> Vec<S> {
        self.elements
            .iter()
            .skip(1)
            .map(|e| e.rotation.angle)
            .collect()
    }
}

/// Applies `element` to the configuration: robot i moves to the rotated
/// position of robot `perm[i]`.
pub fn apply_symmetry<S: Scalar>(
    config: &Configuration<S>,
    element: &SymmetryElement<S>,
) -> Configuration<S> {
    let pts: Vec<Point<S>> = element
        .perm
        .iter()
        .map(|&j| element.rotation.apply(config[j]))
        .collect();
    Configuration::new(pts).expect("rotations preserve finiteness")
}

/// Sizes of the distance classes of `points` around `center`: points are
/// grouped when consecutive sorted distances differ by at most `tol`.
fn radius_class_sizes<S: Scalar>(points: &[Point<S>], center: Point<S>, tol: S) -> Vec<usize> {
    let mut dists: Vec<S> = points.iter().map(|p| p.dist(center)).collect();
    dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut sizes = Vec::new();
    let mut run = 1usize;
    for w in dists.windows(2) {
        if w[1] - w[0] <= tol {
            run += 1;
        } else {
            sizes.push(run);
            run = 1;
        }
    }
    sizes.push(run);
    sizes
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Divisors of `n`, descending.
fn divisors_desc(n: usize) -> Vec<usize> {
    let mut d: Vec<usize> = (1..=n).filter(|k| n % k == 0).collect();
    d.reverse();
    d
}

/// Tries to realize the rotation by `angle` about `center` as a relabeling
/// of `points`. Returns the permutation if every rotated point matches
/// exactly one robot, `None` if some rotated point matches no robot, and
/// an error if any rotated point matches two (coincident robots within
/// tolerance make the relabeling ill-defined).
fn match_rotation<S: Scalar>(
    points: &[Point<S>],
    center: Point<S>,
    angle: S,
    tol: S,
) -> Result<Option<Vec<usize>>, SymmetryError> {
    let n = points.len();
    let rot = Rotation { angle, center };
    // target_of[j] = robot the rotated image of j lands on.
    let mut target_of = vec![usize::MAX; n];
    let mut hit_by = vec![usize::MAX; n];
    for j in 0..n {
        let image = rot.apply(points[j]);
        let mut found = None;
        for (i, p) in points.iter().enumerate() {
            if p.dist(image) <= tol {
                match found {
                    None => found = Some(i),
                    Some(first) => {
                        return Err(SymmetryError::AmbiguousMatch {
                            subject: j,
                            first,
                            second: i,
                        })
                    }
                }
            }
        }
        let Some(i) = found else {
            return Ok(None);
        };
        if hit_by[i] != usize::MAX {
            // Two rotated robots land on one robot: their sources coincide
            // within tolerance, so the relabeling is ill-defined too.
            return Err(SymmetryError::AmbiguousMatch {
                subject: j,
                first: hit_by[i],
                second: i,
            });
        }
        hit_by[i] = j;
        target_of[j] = i;
    }
    // perm[i] = source robot mapping onto i.
    Ok(Some(hit_by))
}

/// Largest `m` such that the configuration splits into regular `m`-gons
/// concentric with its smallest enclosing circle. A robot on the center
/// forces 1; rotation angles whose matching is ambiguous are skipped.
pub fn symmetricity<S: Scalar>(config: &Configuration<S>, tol: S) -> Result<usize, GeometryError> {
    let pts = config.positions();
    let center = smallest_enclosing_circle(pts)?.center;
    if pts.iter().any(|p| p.dist(center) <= tol) {
        return Ok(1);
    }
    let g = radius_class_sizes(pts, center, tol)
        .into_iter()
        .fold(0usize, gcd);
    for m in divisors_desc(g) {
        if m == 1 {
            break;
        }
        let angle = S::TAU() / S::of_usize(m);
        if let Ok(Some(_)) = match_rotation(pts, center, angle, tol) {
            return Ok(m);
        }
    }
    Ok(1)
}

/// All rotations about the smallest-enclosing-circle center that fix the
/// configuration, as a cyclic group with the identity first and angles
/// ascending. A robot on the center is allowed: it must map to itself, and
/// candidate orders come from the remaining robots.
pub fn detect_symmetries<S: Scalar>(
    config: &Configuration<S>,
    tol: S,
) -> Result<SymmetryGroup<S>, SymmetryError> {
    let pts = config.positions();
    let n = pts.len();
    let center = smallest_enclosing_circle(pts).map_err(SymmetryError::Geometry)?;
    let center = center.center;
    let identity = SymmetryElement {
        rotation: Rotation {
            angle: S::zero(),
            center,
        },
        perm: (0..n).collect(),
    };

    let off_center: Vec<Point<S>> = pts
        .iter()
        .copied()
        .filter(|p| p.dist(center) > tol)
        .collect();
    if off_center.is_empty() {
        // Single robot (or all robots on the center): only the identity is
        // a well-defined relabeling.
        return Ok(SymmetryGroup {
            center,
            order: 1,
            elements: vec![identity],
        });
    }

    let g = radius_class_sizes(&off_center, center, tol)
        .into_iter()
        .fold(0usize, gcd);
    let mut order = 1usize;
    for m in divisors_desc(g) {
        if m == 1 {
            break;
        }
        let angle = S::TAU() / S::of_usize(m);
        if match_rotation(pts, center, angle, tol)?.is_some() {
            order = m;
            break;
        }
    }

    let mut elements = vec![identity];
    for j in 1..order {
        let angle = S::TAU() * S::of_usize(j) / S::of_usize(order);
        let perm = match_rotation(pts, center, angle, tol)?
            .expect("powers of a fixing rotation fix the configuration");
        elements.push(SymmetryElement {
            rotation: Rotation { angle, center },
            perm,
        });
    }
    Ok(SymmetryGroup {
        center,
        order,
        elements,
    })
}

/// Maximum per-robot distance between `step(element(z))` and
/// `element(step(z))`: zero means the dynamics commute with the symmetry.
pub fn check_equivariance<S, E, F>(
    config: &Configuration<S>,
    element: &SymmetryElement<S>,
    step: F,
) -> Result<S, E>
where
    S: Scalar,
    F: Fn(&Configuration<S>) -> Result<Configuration<S>, E>,
{
    let moved_then_step = step(&apply_symmetry(config, element))?;
    let step_then_moved = apply_symmetry(&step(config)?, element);
    let mut worst = S::zero();
    for i in 0..config.len() {
        worst = worst.max(moved_then_step[i].dist(step_then_moved[i]));
    }
    Ok(worst)
}

/// How the non-identity rotation angles changed between two groups.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryChange<S> {
    pub preserved: Vec<S>,
    pub lost: Vec<S>,
    pub gained: Vec<S>,
}

impl<S> SymmetryChange<S> {
    pub fn is_preserving(&self) -> bool {
        self.lost.is_empty()
    }
}

/// Compares rotation angle sets before and after a step, pairing angles
/// within `angle_tol`.
pub fn symmetry_preserved<S: Scalar>(
    before: &SymmetryGroup<S>,
    after: &SymmetryGroup<S>,
    angle_tol: S,
) -> SymmetryChange<S> {
    let mut preserved = Vec::new();
    let mut lost = Vec::new();
    let after_angles = after.angles();
    let mut matched = vec![false; after_angles.len()];
    for a in before.angles() {
        let mut hit = None;
        for (k, &b) in after_angles.iter().enumerate() {
            if !matched[k] && (a - b).abs() <= angle_tol {
                hit = Some(k);
                break;
            }
        }
        match hit {
            Some(k) => {
                matched[k] = true;
                preserved.push(a);
            }
            None => lost.push(a),
        }
    }
    let gained = after_angles
        .into_iter()
        .zip(matched)
        .filter_map(|(b, m)| (!m).then_some(b))
        .collect();
    SymmetryChange {
        preserved,
        lost,
        gained,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::default_symmetry_tol;

    fn config(pts: &[(f64, f64)]) -> Configuration<f64> {
        Configuration::from_pairs(pts).unwrap()
    }

    /// Independent symmetricity oracle: per radius class, the sorted angle
    /// multiset must be invariant under a shift of 2*pi/m.
    fn symmetricity_oracle(pts: &[(f64, f64)]) -> usize {
        let cfg = config(pts);
        let center = smallest_enclosing_circle(cfg.positions()).unwrap().center;
        let tol = 1e-6;
        if cfg.positions().iter().any(|p| p.dist(center) <= tol) {
            return 1;
        }
        'outer: for m in (1..=pts.len()).rev() {
            if pts.len() % m != 0 {
                continue;
            }
            // Group by radius.
            let mut classes: Vec<(f64, Vec<f64>)> = Vec::new();
            for p in cfg.positions() {
                let d = p.dist(center);
                let ang = (p.y - center.y).atan2(p.x - center.x);
                match classes.iter_mut().find(|(r, _)| (*r - d).abs() <= tol) {
                    Some((_, v)) => v.push(ang),
                    None => classes.push((d, vec![ang])),
                }
            }
            for (r, angles) in &classes {
                if angles.len() % m != 0 {
                    continue 'outer;
                }
                let step = std::f64::consts::TAU / m as f64;
                let mut orig = angles.clone();
                let mut shifted: Vec<f64> = angles
                    .iter()
                    .map(|a| {
                        let mut s = a + step;
                        if s > std::f64::consts::PI {
                            s -= std::f64::consts::TAU;
                        }
                        s
                    })
                    .collect();
                orig.sort_by(|a, b| a.partial_cmp(b).unwrap());
                shifted.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let ang_tol = tol / r.max(1e-9);
                if !orig
                    .iter()
                    .zip(&shifted)
                    .all(|(a, b)| (a - b).abs() <= ang_tol || (a - b).abs() >= std::f64::consts::TAU - ang_tol)
                {
                    continue 'outer;
                }
            }
            return m;
        }
        1
    }

    /// Exhaustive group oracle: for every index permutation, solve for the
    /// rotation about the center realizing it and verify all robots.
    fn group_order_oracle(pts: &[(f64, f64)]) -> usize {
        let cfg = config(pts);
        let center = smallest_enclosing_circle(cfg.positions()).unwrap().center;
        let n = pts.len();
        let mut angles: Vec<f64> = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        let tol = 1e-6;
        loop {
            // perm[i] = source robot: rotation must send source -> i.
            let mut angle: Option<f64> = None;
            let mut ok = true;
            for i in 0..n {
                let src = cfg[perm[i]] - center;
                let dst = cfg[i] - center;
                if src.norm() <= tol && dst.norm() <= tol {
                    continue;
                }
                if (src.norm() - dst.norm()).abs() > tol {
                    ok = false;
                    break;
                }
                let a = dst.y.atan2(dst.x) - src.y.atan2(src.x);
                let a = a.rem_euclid(std::f64::consts::TAU);
                match angle {
                    None => angle = Some(a),
                    Some(prev) => {
                        let diff = (a - prev).abs();
                        if diff > 1e-6 && (diff - std::f64::consts::TAU).abs() > 1e-6 {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if ok {
                if let Some(a) = angle {
                    // Confirm positions, not just angles.
                    let rot = Rotation {
                        angle: a,
                        center,
                    };
                    if (0..n).all(|i| rot.apply(cfg[perm[i]]).dist(cfg[i]) <= 1e-6) {
                        let canon = a.rem_euclid(std::f64::consts::TAU);
                        if !angles.iter().any(|x| (x - canon).abs() < 1e-9) {
                            angles.push(canon);
                        }
                    }
                } else {
                    // Everything at center.
                    if !angles.iter().any(|x| *x < 1e-9) {
                        angles.push(0.0);
                    }
                }
            }
            // Next permutation in lexicographic order.
            let mut i = n as isize - 2;
            while i >= 0 && perm[i as usize] >= perm[i as usize + 1] {
                i -= 1;
            }
            if i < 0 {
                break;
            }
            let i = i as usize;
            let mut j = n - 1;
            while perm[j] <= perm[i] {
                j -= 1;
            }
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        angles.len()
    }

    fn regular_polygon(m: usize, radius: f64, phase: f64) -> Vec<(f64, f64)> {
        (0..m)
            .map(|k| {
                let a = phase + std::f64::consts::TAU * k as f64 / m as f64;
                (radius * a.cos(), radius * a.sin())
            })
            .collect()
    }

    #[test]
    fn regular_pentagon_has_order_five() {
        let pts = regular_polygon(5, 2.0, 0.3);
        let cfg = config(&pts);
        let tol = default_symmetry_tol::<f64>();
        assert_eq!(symmetricity(&cfg, tol).unwrap(), 5);
        let group = detect_symmetries(&cfg, tol).unwrap();
        assert_eq!(group.order, 5);
        assert_eq!(group.elements.len(), 5);
        // Identity first, angles ascending.
        assert_eq!(group.elements[0].rotation.angle, 0.0);
        for (j, e) in group.elements.iter().enumerate() {
            let expect = std::f64::consts::TAU * j as f64 / 5.0;
            assert!((e.rotation.angle - expect).abs() < 1e-12);
            // Element actually fixes the configuration.
            let moved = apply_symmetry(&cfg, e);
            for i in 0..cfg.len() {
                assert!(moved[i].dist(cfg[i]) < 1e-9);
            }
        }
    }

    #[test]
    fn concentric_offset_squares_have_order_four() {
        let mut pts = regular_polygon(4, 2.0, 0.0);
        pts.extend(regular_polygon(4, 1.0, std::f64::consts::FRAC_PI_4));
        let cfg = config(&pts);
        let tol = default_symmetry_tol::<f64>();
        assert_eq!(symmetricity(&cfg, tol).unwrap(), 4);
        assert_eq!(detect_symmetries(&cfg, tol).unwrap().order, 4);
    }

    #[test]
    fn center_robot_forces_symmetricity_one_but_group_survives() {
        let mut pts = regular_polygon(3, 1.5, 0.1);
        pts.push((0.0, 0.0));
        let cfg = config(&pts);
        let tol = default_symmetry_tol::<f64>();
        assert_eq!(symmetricity(&cfg, tol).unwrap(), 1);
        let group = detect_symmetries(&cfg, tol).unwrap();
        assert_eq!(group.order, 3);
        // The center robot is a fixed point of every element.
        let center_idx = 3;
        for e in &group.elements {
            assert_eq!(e.perm[center_idx], center_idx);
        }
    }

    #[test]
    fn asymmetric_configuration_has_trivial_group() {
        let cfg = config(&[(0.0, 0.0), (1.0, 0.1), (2.0, -0.3), (0.7, 0.9)]);
        let tol = default_symmetry_tol::<f64>();
        assert_eq!(symmetricity(&cfg, tol).unwrap(), 1);
        assert_eq!(detect_symmetries(&cfg, tol).unwrap().order, 1);
    }

    #[test]
    fn near_coincident_robots_are_ambiguous() {
        // Two nearly coincident pairs on a diameter: the half-turn image of
        // the right pair lands within tolerance of both left robots.
        let pts = [
            (1.0, 0.0),
            (1.0 + 5e-7, 0.0),
            (-1.0, 0.0),
            (-1.0 - 5e-7, 0.0),
        ];
        let cfg = config(&pts);
        let err = detect_symmetries(&cfg, 1e-6);
        assert!(matches!(err, Err(SymmetryError::AmbiguousMatch { .. })));
    }

    #[test]
    fn matches_angle_multiset_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let tol = default_symmetry_tol::<f64>();
        for _ in 0..40 {
            let m = *[1usize, 2, 3, 4].iter().nth(rng.gen_range(0..4)).unwrap();
            let per = rng.gen_range(1..=2);
            let mut pts: Vec<(f64, f64)> = Vec::new();
            for _ in 0..per {
                let r = rng.gen_range(0.5..3.0);
                let phase = rng.gen_range(0.0..std::f64::consts::TAU);
                for k in 0..m {
                    let a = phase + std::f64::consts::TAU * k as f64 / m as f64;
                    pts.push((r * a.cos(), r * a.sin()));
                }
            }
            let cfg = config(&pts);
            let got = symmetricity(&cfg, tol).unwrap();
            let want = symmetricity_oracle(&pts);
            assert_eq!(got, want, "pts {:?}", pts);
            // Construction guarantees at least m-fold symmetry.
            assert_eq!(got % m, 0, "pts {:?}", pts);
        }
    }

    #[test]
    fn matches_exhaustive_permutation_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let tol = default_symmetry_tol::<f64>();
        for trial in 0..25 {
            let m = 1 + trial % 3;
            let per = 1 + trial % 2;
            let mut pts: Vec<(f64, f64)> = Vec::new();
            for _ in 0..per {
                let r = rng.gen_range(0.5..2.0);
                let phase = rng.gen_range(0.0..std::f64::consts::TAU);
                for k in 0..m {
                    let a = phase + std::f64::consts::TAU * k as f64 / m as f64;
                    pts.push((r * a.cos(), r * a.sin()));
                }
            }
            if pts.len() > 6 {
                continue;
            }
            let cfg = config(&pts);
            let got = detect_symmetries(&cfg, tol).unwrap().order;
            let want = group_order_oracle(&pts);
            assert_eq!(got, want, "pts {:?}", pts);
        }
    }

    #[test]
    fn equivariance_of_a_pure_rotation_step() {
        // A step that rotates everything about the origin commutes with
        // any rotation about the origin.
        let pts = regular_polygon(6, 1.0, 0.0);
        let cfg = config(&pts);
        let tol = default_symmetry_tol::<f64>();
        let group = detect_symmetries(&cfg, tol).unwrap();
        assert_eq!(group.order, 6);
        let step = |c: &Configuration<f64>| -> Result<Configuration<f64>, GeometryError> {
            Configuration::new(c.positions().iter().map(|p| p.rotated(0.3)).collect())
        };
        for e in &group.elements {
            let dev = check_equivariance(&cfg, e, step).unwrap();
            assert!(dev < 1e-12, "deviation {}", dev);
        }
    }

    #[test]
    fn change_report_tracks_lost_and_gained_angles() {
        let square = config(&regular_polygon(4, 1.0, 0.0));
        let pair: Vec<(f64, f64)> = regular_polygon(2, 1.0, 0.0);
        let pair = config(&pair);
        let tol = default_symmetry_tol::<f64>();
        let g4 = detect_symmetries(&square, tol).unwrap();
        let g2 = detect_symmetries(&pair, tol).unwrap();
        let down = symmetry_preserved(&g4, &g2, 1e-9);
        assert_eq!(down.preserved.len(), 1); // pi survives
        assert_eq!(down.lost.len(), 2); // pi/2 and 3pi/2 lost
        assert!(!down.is_preserving());
        let up = symmetry_preserved(&g2, &g4, 1e-9);
        assert_eq!(up.gained.len(), 2);
        assert!(up.is_preserving());
    }
}
