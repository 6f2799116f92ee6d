//! Rotation-invariant Feller processes on the unit sphere `S^{d-1}`:
//! spherical Brownian motion (generator `c_sph` times the Laplace-Beltrami
//! operator) plus compound-Poisson jumps whose law is invariant under
//! rotations fixing the current point.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Beta, Distribution, Exp, StandardNormal};

use crate::geom::{self, UnitVector};
use crate::path::{CadlagPath, JumpRecord};
use crate::{Error, Result};

/// Jump angles below this threshold are discarded together with their mass;
/// this is how infinite-activity angular jump measures are approximated by
/// a compound-Poisson one.
pub const MIN_JUMP_ANGLE: f64 = 1e-3;

/// Distribution of the geodesic angle of an angular jump, supported in
/// `(0, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub enum AngleLaw {
    /// Every jump turns by exactly this angle.
    PointMass(f64),
    /// Angle uniform on `(0, pi]`.
    Uniform,
    /// `pi` times a Beta(a, b) variable.
    BetaScaled { a: f64, b: f64 },
}

impl AngleLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AngleLaw::PointMass(angle) => {
                if angle > 0.0 && angle <= core::f64::consts::PI {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter {
                        name: "jump_angle",
                        reason: alloc::format!("must lie in (0, pi], got {angle}"),
                    })
                }
            }
            AngleLaw::BetaScaled { a, b } => {
                if a > 0.0 && b > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter {
                        name: "jump_angle_law",
                        reason: alloc::format!("beta shape parameters must be positive, got ({a}, {b})"),
                    })
                }
            }
            AngleLaw::Uniform => Ok(()),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            AngleLaw::PointMass(angle) => angle,
            // random_range samples [0, pi); mapping u -> pi - u gives (0, pi].
            AngleLaw::Uniform => core::f64::consts::PI - rng.random_range(0.0..core::f64::consts::PI),
            AngleLaw::BetaScaled { a, b } => {
                let beta = Beta::new(a, b).expect("validated shape parameters");
                core::f64::consts::PI * beta.sample(rng)
            }
        }
    }

    /// Expectation of `g` under the law, with an absolute error estimate.
    pub fn expectation(&self, g: &dyn Fn(f64) -> f64) -> (f64, f64) {
        match *self {
            AngleLaw::PointMass(angle) => (g(angle), 0.0),
            AngleLaw::Uniform => {
                let density = 1.0 / core::f64::consts::PI;
                crate::stats::quad::adaptive_simpson(
                    &|x| g(x) * density,
                    0.0,
                    core::f64::consts::PI,
                    1e-10,
                )
            }
            AngleLaw::BetaScaled { a, b } => {
                let log_norm = libm::lgamma(a + b) - libm::lgamma(a) - libm::lgamma(b);
                let density = move |u: f64| {
                    (log_norm + (a - 1.0) * u.ln() + (b - 1.0) * (1.0 - u).ln()).exp()
                };
                // Integrate over the unit interval; clip endpoint singularities.
                let eps = 1e-12;
                crate::stats::quad::adaptive_simpson(
                    &|u| g(core::f64::consts::PI * u) * density(u),
                    eps,
                    1.0 - eps,
                    1e-10,
                )
            }
        }
    }
}

/// Parameters of a rotation-invariant spherical process: dimension,
/// Laplace-Beltrami coefficient, and a finite-activity angular jump part.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularSpec {
    dim: usize,
    c_sph: f64,
    jump_rate: f64,
    jump_angle_law: AngleLaw,
}

impl AngularSpec {
    pub fn new(dim: usize, c_sph: f64, jump_rate: f64, jump_angle_law: AngleLaw) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: alloc::format!("sphere requires dimension >= 2, got {dim}"),
            });
        }
        if !(c_sph >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "c_sph",
                reason: alloc::format!("must be non-negative, got {c_sph}"),
            });
        }
        if !(jump_rate >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "jump_rate",
                reason: alloc::format!("must be non-negative, got {jump_rate}"),
            });
        }
        jump_angle_law.validate()?;
        Ok(Self {
            dim,
            c_sph,
            jump_rate,
            jump_angle_law,
        })
    }

    /// A purely diffusive spec (no jumps).
    pub fn diffusion(dim: usize, c_sph: f64) -> Result<Self> {
        Self::new(dim, c_sph, 0.0, AngleLaw::Uniform)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c_sph(&self) -> f64 {
        self.c_sph
    }

    pub fn jump_rate(&self) -> f64 {
        self.jump_rate
    }

    pub fn jump_angle_law(&self) -> &AngleLaw {
        &self.jump_angle_law
    }
}

/// Standard Gaussian vector in the tangent space at `theta`, obtained by
/// projecting an ambient Gaussian onto the orthogonal complement of `theta`.
fn tangent_gaussian<R: Rng + ?Sized>(theta: &[f64], rng: &mut R) -> Vec<f64> {
    let mut g: Vec<f64> = (0..theta.len())
        .map(|_| StandardNormal.sample(rng))
        .collect();
    let c = geom::dot(&g, theta);
    for (gi, ti) in g.iter_mut().zip(theta) {
        *gi -= c * ti;
    }
    g
}

/// Moves from `theta` along the great circle towards the unit tangent
/// direction `dir` by geodesic angle `angle`.
fn geodesic_move(theta: &[f64], dir: &[f64], angle: f64) -> UnitVector {
    let (s, c) = angle.sin_cos();
    let mut out: Vec<f64> = theta
        .iter()
        .zip(dir)
        .map(|(&t, &u)| c * t + s * u)
        .collect();
    let n = geom::norm(&out);
    for x in &mut out {
        *x /= n;
    }
    UnitVector::from_normalized_unchecked(out)
}

/// One weak-order-1 step of spherical Brownian motion with generator
/// `c_sph * Laplace-Beltrami` over a time step `h`: a geodesic move of
/// length `sqrt(2 c_sph h) |g|` towards the tangent Gaussian `g`.
///
/// With `c_sph = 0` the input is returned unchanged.
pub fn brownian_step<R: Rng + ?Sized>(
    theta: &UnitVector,
    c_sph: f64,
    h: f64,
    rng: &mut R,
) -> UnitVector {
    if c_sph == 0.0 {
        return theta.clone();
    }
    let g = tangent_gaussian(theta.as_slice(), rng);
    let len = geom::norm(&g);
    if len == 0.0 {
        return theta.clone();
    }
    let dir: Vec<f64> = g.iter().map(|x| x / len).collect();
    geodesic_move(theta.as_slice(), &dir, (2.0 * c_sph * h).sqrt() * len)
}

/// Rotates `theta` by geodesic angle `angle` in a uniformly random tangent
/// direction; the output law is invariant under every rotation fixing
/// `theta`.
pub fn angular_jump<R: Rng + ?Sized>(
    theta: &UnitVector,
    angle: f64,
    rng: &mut R,
) -> Result<UnitVector> {
    if !(angle > 0.0 && angle <= core::f64::consts::PI) {
        return Err(Error::InvalidParameter {
            name: "angle",
            reason: alloc::format!("must lie in (0, pi], got {angle}"),
        });
    }
    // Rejection keeps the direction exactly uniform on the tangent sphere.
    let dir = loop {
        let g = tangent_gaussian(theta.as_slice(), rng);
        let len = geom::norm(&g);
        if len > 1e-12 {
            break g.into_iter().map(|x| x / len).collect::<Vec<f64>>();
        }
    };
    Ok(geodesic_move(theta.as_slice(), &dir, angle))
}

/// Simulates the spherical process on `[0, t_end]`: diffusive steps on a
/// grid of spacing `h`, compound-Poisson jumps at rate `jump_rate` with
/// angles drawn from the jump law, recorded as exact [`JumpRecord`]s. Jump
/// angles below [`MIN_JUMP_ANGLE`] are discarded.
///
/// The returned path lives on the sphere embedded in `R^d`; every state is
/// unit norm.
pub fn simulate_angular<R: Rng + ?Sized>(
    spec: &AngularSpec,
    theta0: &UnitVector,
    t_end: f64,
    h: f64,
    rng: &mut R,
) -> Result<CadlagPath> {
    if theta0.dim() != spec.dim {
        return Err(Error::DimensionMismatch {
            expected: spec.dim,
            got: theta0.dim(),
        });
    }
    if !(t_end > 0.0 && h > 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_end/h",
            reason: alloc::string::String::from("horizon and grid step must be positive"),
        });
    }

    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut jumps = Vec::new();

    let mut theta = theta0.clone();
    let mut t = 0.0;
    times.push(0.0);
    states.extend_from_slice(theta.as_slice());

    let mut next_jump = draw_arrival(0.0, spec.jump_rate, rng);
    let mut grid_index = 1u64;
    loop {
        let next_grid = grid_time(grid_index, h, t_end);
        let (next_t, is_jump) = if next_jump < next_grid {
            (next_jump, true)
        } else {
            (next_grid, false)
        };
        if next_t > t_end {
            break;
        }
        theta = brownian_step(&theta, spec.c_sph, next_t - t, rng);
        if is_jump {
            let angle = spec.jump_angle_law.sample(rng);
            if angle >= MIN_JUMP_ANGLE {
                let left = theta.clone();
                theta = angular_jump(&theta, angle, rng)?;
                jumps.push(JumpRecord {
                    time: next_t,
                    left: left.into_vec(),
                    right: theta.as_slice().to_vec(),
                });
            }
            next_jump = draw_arrival(next_t, spec.jump_rate, rng);
        } else {
            grid_index += 1;
        }
        t = next_t;
        times.push(t);
        states.extend_from_slice(theta.as_slice());
        if t == t_end {
            break;
        }
    }

    CadlagPath::new(spec.dim, times, states, jumps, f64::INFINITY)
}

/// Next compound-Poisson arrival strictly after `t`; infinity at rate 0.
pub(crate) fn draw_arrival<R: Rng + ?Sized>(t: f64, rate: f64, rng: &mut R) -> f64 {
    if rate > 0.0 {
        let gap: f64 = Exp::new(rate).expect("positive rate").sample(rng);
        t + gap.max(1e-300)
    } else {
        f64::INFINITY
    }
}

/// `index`-th grid point, snapped exactly onto `t_end` at the horizon.
pub(crate) fn grid_time(index: u64, h: f64, t_end: f64) -> f64 {
    let t = index as f64 * h;
    if t >= t_end {
        t_end
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Seed;
    use alloc::vec;

    #[test]
    fn zero_diffusion_step_is_identity() {
        let theta = UnitVector::axis(3);
        let mut rng = Seed::new(1).rng();
        let out = brownian_step(&theta, 0.0, 0.1, &mut rng);
        assert_eq!(out, theta);
    }

    #[test]
    fn steps_stay_on_the_sphere() {
        let mut rng = Seed::new(2).rng();
        let mut theta = UnitVector::axis(4);
        for _ in 0..1000 {
            theta = brownian_step(&theta, 1.3, 1e-2, &mut rng);
            assert!((geom::norm(theta.as_slice()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_variance_matches_generator() {
        // On the circle the generator c * d^2/dphi^2 gives angle variance
        // 2 c t; tolerance 3% relative at 1e5 paths.
        let c = 1.0;
        let h = 1e-3;
        let steps = 100;
        let t = h * steps as f64;
        let n = 100_000;
        let theta0 = UnitVector::axis(2);
        let mut sum_sq = 0.0;
        for i in 0..n {
            let mut rng = Seed::new(3).child(i).rng();
            let mut theta = theta0.clone();
            let mut angle = 0.0f64; // unwrapped signed angle increment
            for _ in 0..steps {
                let next = brownian_step(&theta, c, h, &mut rng);
                let step = theta.angle_to(&next);
                // sign from the 2-d cross product
                let cross = theta.as_slice()[0] * next.as_slice()[1]
                    - theta.as_slice()[1] * next.as_slice()[0];
                angle += if cross >= 0.0 { step } else { -step };
                theta = next;
            }
            sum_sq += angle * angle;
        }
        let var = sum_sq / n as f64;
        let expected = 2.0 * c * t;
        assert!(
            (var - expected).abs() < 0.03 * expected,
            "variance {var}, expected {expected}"
        );
    }

    #[test]
    fn jump_angle_is_exact() {
        let mut rng = Seed::new(4).rng();
        let theta = UnitVector::axis(3);
        for &angle in &[0.3, 1.2, core::f64::consts::FRAC_PI_2] {
            let out = angular_jump(&theta, angle, &mut rng).unwrap();
            assert!((theta.angle_to(&out) - angle).abs() < 1e-10);
        }
    }

    #[test]
    fn antipodal_jump_on_the_circle() {
        let mut rng = Seed::new(5).rng();
        let theta = UnitVector::new(vec![0.6, 0.8]).unwrap();
        let out = angular_jump(&theta, core::f64::consts::PI, &mut rng).unwrap();
        for (a, b) in out.as_slice().iter().zip(theta.as_slice()) {
            assert!((a + b).abs() < 1e-10);
        }
    }

    #[test]
    fn orthogonal_jump_leaves_the_axis() {
        let mut rng = Seed::new(6).rng();
        let theta = UnitVector::axis(5);
        for _ in 0..50 {
            let out = angular_jump(&theta, core::f64::consts::FRAC_PI_2, &mut rng).unwrap();
            assert!(out.as_slice()[4].abs() < 1e-10);
        }
    }

    #[test]
    fn jump_direction_is_uniform_on_the_latitude_circle() {
        // From the pole of S^2, the longitude of the jumped point must be
        // uniform: chi-square over 16 bins at 1e4 samples.
        let mut rng = Seed::new(7).rng();
        let theta = UnitVector::axis(3);
        let n = 10_000;
        let bins = 16;
        let mut counts = vec![0usize; bins];
        for _ in 0..n {
            let out = angular_jump(&theta, 0.9, &mut rng).unwrap();
            let lon = out.as_slice()[1].atan2(out.as_slice()[0]);
            let frac = (lon + core::f64::consts::PI) / (2.0 * core::f64::consts::PI);
            let b = ((frac * bins as f64) as usize).min(bins - 1);
            counts[b] += 1;
        }
        let expected = n as f64 / bins as f64;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        let report =
            crate::stats::chi_square_pvalue(chi2, (bins - 1) as f64);
        assert!(report > 0.01, "chi2 {chi2}, p {report}");
    }

    #[test]
    fn rejects_out_of_range_angles() {
        let mut rng = Seed::new(8).rng();
        let theta = UnitVector::axis(2);
        assert!(angular_jump(&theta, 0.0, &mut rng).is_err());
        assert!(angular_jump(&theta, -0.5, &mut rng).is_err());
        assert!(angular_jump(&theta, 3.3, &mut rng).is_err());
    }

    #[test]
    fn frozen_spec_gives_constant_path() {
        let spec = AngularSpec::new(3, 0.0, 0.0, AngleLaw::Uniform).unwrap();
        let theta0 = UnitVector::axis(3);
        let mut rng = Seed::new(9).rng();
        let path = simulate_angular(&spec, &theta0, 1.0, 0.1, &mut rng).unwrap();
        assert!(path.jumps().is_empty());
        for i in 0..path.len() {
            assert_eq!(path.state(i), theta0.as_slice());
        }
    }

    #[test]
    fn poisson_jump_count_matches_rate() {
        // rate 2 over horizon 10: mean count 20 within 3% over 1e4 paths.
        let spec = AngularSpec::new(2, 0.0, 2.0, AngleLaw::PointMass(1.0)).unwrap();
        let theta0 = UnitVector::axis(2);
        let n = 10_000;
        let mut total = 0usize;
        for i in 0..n {
            let mut rng = Seed::new(10).child(i).rng();
            let path = simulate_angular(&spec, &theta0, 10.0, 0.5, &mut rng).unwrap();
            total += path.jumps().len();
        }
        let mean = total as f64 / n as f64;
        assert!((mean - 20.0).abs() < 0.03 * 20.0, "mean count {mean}");
    }

    #[test]
    fn grid_times_and_event_times_are_all_stored() {
        let spec = AngularSpec::new(2, 0.4, 3.0, AngleLaw::PointMass(0.5)).unwrap();
        let theta0 = UnitVector::axis(2);
        let mut rng = Seed::new(11).rng();
        let path = simulate_angular(&spec, &theta0, 2.0, 0.25, &mut rng).unwrap();
        for k in 0..=8 {
            assert!(path.index_of_time(k as f64 * 0.25).is_some());
        }
        for j in path.jumps() {
            assert!(path.index_of_time(j.time).is_some());
        }
        assert_eq!(path.last_time(), 2.0);
        for i in 0..path.len() {
            assert!((geom::norm(path.state(i)) - 1.0).abs() < 1e-12);
        }
    }
}
