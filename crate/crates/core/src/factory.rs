//! Construction of the three process families under study:
//!
//! * scale-invariant processes `xbar = rho * xi` built from a multiplicative
//!   radial Lévy process and an independent rotation-invariant spherical
//!   process, optionally killed at an exponential rate;
//! * isotropic self-similar processes with a skew product, obtained from the
//!   invariant family by the inverse Lamperti time change;
//! * isotropic stable processes, whose radial and angular parts jump
//!   together and which therefore have no skew product.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, Exp, StandardNormal};

use crate::geom::{self, UnitVector};
use crate::lamperti::{self, Alpha};
use crate::path::{CadlagPath, JumpRecord};
use crate::rng::{stream, Seed};
use crate::sphere::{self, AngularSpec};
use crate::{Error, Result};

/// A state is considered to have hit the origin when its norm falls below
/// this guard; the path is killed there.
pub const ORIGIN_GUARD: f64 = 1e-12;

/// Distribution of a log-radial jump size `u != 0` (the radial jump measure
/// in logarithmic coordinates, where the multiplicative group is additive).
#[derive(Debug, Clone, PartialEq)]
pub enum RadialJumpLaw {
    /// Every jump multiplies the radius by `exp(u)`.
    PointMass(f64),
    Gaussian { mean: f64, sd: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl RadialJumpLaw {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: alloc::string::String| {
            Err(Error::InvalidParameter {
                name: "radial_jump_law",
                reason,
            })
        };
        match *self {
            RadialJumpLaw::PointMass(u) => {
                if u == 0.0 || !u.is_finite() {
                    bad(alloc::format!("point mass must be finite and nonzero, got {u}"))
                } else {
                    Ok(())
                }
            }
            RadialJumpLaw::Gaussian { mean, sd } => {
                if sd > 0.0 && mean.is_finite() {
                    Ok(())
                } else {
                    bad(alloc::format!("gaussian requires sd > 0, got ({mean}, {sd})"))
                }
            }
            RadialJumpLaw::Uniform { lo, hi } => {
                if lo < hi && lo.is_finite() && hi.is_finite() {
                    Ok(())
                } else {
                    bad(alloc::format!("uniform requires lo < hi, got ({lo}, {hi})"))
                }
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            RadialJumpLaw::PointMass(u) => u,
            RadialJumpLaw::Gaussian { mean, sd } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + sd * z
            }
            RadialJumpLaw::Uniform { lo, hi } => rng.random_range(lo..hi),
        }
    }

    /// Expectation of `g` under the law, with an absolute error estimate.
    pub fn expectation(&self, g: &dyn Fn(f64) -> f64) -> (f64, f64) {
        match *self {
            RadialJumpLaw::PointMass(u) => (g(u), 0.0),
            RadialJumpLaw::Gaussian { mean, sd } => {
                let density = move |u: f64| {
                    let z = (u - mean) / sd;
                    (-0.5 * z * z).exp() / (sd * (2.0 * core::f64::consts::PI).sqrt())
                };
                crate::stats::quad::adaptive_simpson(
                    &|u| g(u) * density(u),
                    mean - 10.0 * sd,
                    mean + 10.0 * sd,
                    1e-10,
                )
            }
            RadialJumpLaw::Uniform { lo, hi } => {
                let density = 1.0 / (hi - lo);
                crate::stats::quad::adaptive_simpson(&|u| g(u) * density, lo, hi, 1e-10)
            }
        }
    }
}

/// Normal-form generator data of a scale-invariant process: self-similarity
/// index, radial diffusion and drift, spherical diffusion coefficient,
/// finite radial and angular jump measures, and a killing rate.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    dim: usize,
    alpha: Alpha,
    a11: f64,
    c1: f64,
    angular: AngularSpec,
    radial_jump_rate: f64,
    radial_jump_law: RadialJumpLaw,
    gamma: f64,
}

impl GeneratorSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        dim: usize,
        alpha: Alpha,
        a11: f64,
        c1: f64,
        angular: AngularSpec,
        radial_jump_rate: f64,
        radial_jump_law: RadialJumpLaw,
        gamma: f64,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: alloc::format!("must be at least 2, got {dim}"),
            });
        }
        if angular.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: angular.dim(),
            });
        }
        for (name, v) in [("a11", a11), ("radial_jump_rate", radial_jump_rate), ("gamma", gamma)] {
            if !(v >= 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: alloc::format!("must be non-negative, got {v}"),
                });
            }
        }
        if !c1.is_finite() {
            return Err(Error::InvalidParameter {
                name: "c1",
                reason: alloc::format!("must be finite, got {c1}"),
            });
        }
        radial_jump_law.validate()?;
        Ok(Self {
            dim,
            alpha,
            a11,
            c1,
            angular,
            radial_jump_rate,
            radial_jump_law,
            gamma,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn alpha(&self) -> Alpha {
        self.alpha
    }
    pub fn a11(&self) -> f64 {
        self.a11
    }
    pub fn c1(&self) -> f64 {
        self.c1
    }
    pub fn angular(&self) -> &AngularSpec {
        &self.angular
    }
    pub fn radial_jump_rate(&self) -> f64 {
        self.radial_jump_rate
    }
    pub fn radial_jump_law(&self) -> &RadialJumpLaw {
        &self.radial_jump_law
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Parameters of an isotropic stable process: index `beta` in (0, 2),
/// truncation radius below which jumps are replaced by a matched-variance
/// Gaussian, and the starting point.
#[derive(Debug, Clone, PartialEq)]
pub struct StableSpec {
    dim: usize,
    beta: f64,
    eps_trunc: f64,
    x0: Vec<f64>,
}

impl StableSpec {
    pub fn new(dim: usize, beta: f64, eps_trunc: f64, x0: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: alloc::format!("must be at least 2, got {dim}"),
            });
        }
        if !(beta > 0.0 && beta < 2.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                reason: alloc::format!("stable index must lie in (0, 2), got {beta}"),
            });
        }
        if !(eps_trunc > 0.0) {
            return Err(Error::InvalidParameter {
                name: "eps_trunc",
                reason: alloc::format!("must be positive, got {eps_trunc}"),
            });
        }
        if x0.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: x0.len(),
            });
        }
        if !(geom::norm(&x0) > 0.0) {
            return Err(Error::LeftDomain { index: 0 });
        }
        Ok(Self {
            dim,
            beta,
            eps_trunc,
            x0,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn eps_trunc(&self) -> f64 {
        self.eps_trunc
    }
    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    /// Arrival rate of jumps larger than the truncation radius, with the
    /// jump measure normalised to radial density `r^(-1-beta)` on the
    /// radius.
    pub fn large_jump_rate(&self) -> f64 {
        self.eps_trunc.powf(-self.beta) / self.beta
    }

    /// Per-coordinate variance rate of the Gaussian standing in for the
    /// truncated small jumps: the integral of `r^(1-beta)` over
    /// `(0, eps_trunc)` spread evenly over the `dim` coordinates.
    pub fn small_jump_variance(&self) -> f64 {
        self.eps_trunc.powf(2.0 - self.beta) / ((2.0 - self.beta) * self.dim as f64)
    }
}

/// Simulates the radial Lévy process `rho(t) = r0 * exp(L(t))` on `[0,
/// t_end]`, where `L` has Gaussian coefficient `a11`, drift `c1` and
/// compound-Poisson jumps from the radial jump law. Returns a 1-d path of
/// strictly positive values with exact jump records.
pub fn simulate_radial<R: Rng + ?Sized>(
    spec: &GeneratorSpec,
    r0: f64,
    t_end: f64,
    h: f64,
    rng: &mut R,
) -> Result<CadlagPath> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "r0",
            reason: alloc::format!("must be positive, got {r0}"),
        });
    }
    check_horizon(t_end, h)?;

    let sigma = spec.a11.sqrt();
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut jumps = Vec::new();

    let mut log_rho = 0.0f64;
    let mut t = 0.0;
    times.push(0.0);
    states.push(r0);

    let mut next_jump = sphere::draw_arrival(0.0, spec.radial_jump_rate, rng);
    let mut grid_index = 1u64;
    loop {
        let next_grid = sphere::grid_time(grid_index, h, t_end);
        let (next_t, is_jump) = if next_jump < next_grid {
            (next_jump, true)
        } else {
            (next_grid, false)
        };
        if next_t > t_end {
            break;
        }
        let dt = next_t - t;
        let z: f64 = if sigma > 0.0 { StandardNormal.sample(rng) } else { 0.0 };
        log_rho += spec.c1 * dt + sigma * dt.sqrt() * z;
        if is_jump {
            let left = r0 * log_rho.exp();
            log_rho += spec.radial_jump_law.sample(rng);
            let right = r0 * log_rho.exp();
            jumps.push(JumpRecord {
                time: next_t,
                left: alloc::vec![left],
                right: alloc::vec![right],
            });
            next_jump = sphere::draw_arrival(next_t, spec.radial_jump_rate, rng);
        } else {
            grid_index += 1;
        }
        t = next_t;
        times.push(t);
        states.push(r0 * log_rho.exp());
        if t == t_end {
            break;
        }
    }

    CadlagPath::new(1, times, states, jumps, f64::INFINITY)
}

/// Simulates the scale-invariant process `xbar(t) = rho(t) * xi(t)` with
/// independent radial and angular drivers, killed at an independent
/// exponential time of rate `gamma` (finite lifetime recorded when the kill
/// lands inside the horizon).
///
/// The radial driver, angular driver and killing clock draw from separate
/// rng streams derived from `seed`, so their independence holds by
/// construction.
pub fn simulate_invariant(
    spec: &GeneratorSpec,
    x0: &[f64],
    t_end: f64,
    h: f64,
    seed: Seed,
) -> Result<CadlagPath> {
    check_horizon(t_end, h)?;
    if x0.len() != spec.dim {
        return Err(Error::DimensionMismatch {
            expected: spec.dim,
            got: x0.len(),
        });
    }
    let r0 = geom::norm(x0);
    if !(r0 > 0.0) {
        return Err(Error::LeftDomain { index: 0 });
    }
    let theta0 = UnitVector::from_direction(x0)?;

    let mut radial_rng = seed.child(stream::RADIAL).rng();
    let mut angular_rng = seed.child(stream::ANGULAR).rng();
    let kill_time = if spec.gamma > 0.0 {
        let mut kill_rng = seed.child(stream::KILLING).rng();
        let draw: f64 = Exp::new(spec.gamma).expect("gamma > 0").sample(&mut kill_rng);
        draw.max(1e-300)
    } else {
        f64::INFINITY
    };

    let sigma = spec.a11.sqrt();
    let c_sph = spec.angular.c_sph();
    let dim = spec.dim;

    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut jumps = Vec::new();

    let mut log_rho = 0.0f64;
    let mut theta = theta0;
    let mut t = 0.0;
    times.push(0.0);
    states.extend(theta.as_slice().iter().map(|v| r0 * v));

    let mut next_radial = sphere::draw_arrival(0.0, spec.radial_jump_rate, &mut radial_rng);
    let mut next_angular = sphere::draw_arrival(0.0, spec.angular.jump_rate(), &mut angular_rng);
    let mut grid_index = 1u64;
    loop {
        let next_grid = sphere::grid_time(grid_index, h, t_end);
        let next_t = next_grid.min(next_radial).min(next_angular);
        if next_t > t_end || next_t >= kill_time {
            break;
        }
        let dt = next_t - t;
        let z: f64 = if sigma > 0.0 {
            StandardNormal.sample(&mut radial_rng)
        } else {
            0.0
        };
        log_rho += spec.c1 * dt + sigma * dt.sqrt() * z;
        theta = sphere::brownian_step(&theta, c_sph, dt, &mut angular_rng);

        let radial_jumps = next_t == next_radial;
        let angular_jumps = next_t == next_angular;
        if radial_jumps || angular_jumps {
            let left: Vec<f64> = theta
                .as_slice()
                .iter()
                .map(|v| r0 * log_rho.exp() * v)
                .collect();
            let mut jumped = false;
            if radial_jumps {
                log_rho += spec.radial_jump_law.sample(&mut radial_rng);
                jumped = true;
                next_radial =
                    sphere::draw_arrival(next_t, spec.radial_jump_rate, &mut radial_rng);
            }
            if angular_jumps {
                let angle = spec.angular.jump_angle_law().sample(&mut angular_rng);
                if angle >= sphere::MIN_JUMP_ANGLE {
                    theta = sphere::angular_jump(&theta, angle, &mut angular_rng)?;
                    jumped = true;
                }
                next_angular =
                    sphere::draw_arrival(next_t, spec.angular.jump_rate(), &mut angular_rng);
            }
            if jumped {
                let right: Vec<f64> = theta
                    .as_slice()
                    .iter()
                    .map(|v| r0 * log_rho.exp() * v)
                    .collect();
                jumps.push(JumpRecord {
                    time: next_t,
                    left,
                    right,
                });
            }
        } else {
            grid_index += 1;
        }
        t = next_t;
        let rho = r0 * log_rho.exp();
        times.push(t);
        states.extend(theta.as_slice().iter().map(|v| rho * v));
        if t == t_end {
            break;
        }
    }

    let lifetime = if kill_time <= t_end {
        kill_time
    } else {
        f64::INFINITY
    };
    CadlagPath::new(dim, times, states, jumps, lifetime)
}

/// Builds an isotropic self-similar path with a skew product: simulates the
/// scale-invariant process and pulls it back through the inverse Lamperti
/// time change. The invariant simulation horizon is grown geometrically
/// until the recovered path covers `t_end` (or the path is killed first);
/// regrowing replays the same rng streams, so the result is deterministic in
/// `seed`.
pub fn build_self_similar(
    spec: &GeneratorSpec,
    x0: &[f64],
    t_end: f64,
    h: f64,
    seed: Seed,
) -> Result<CadlagPath> {
    check_horizon(t_end, h)?;
    let r0 = geom::norm(x0);
    if !(r0 > 0.0) {
        return Err(Error::LeftDomain { index: 0 });
    }
    let alpha = spec.alpha();
    let mut horizon = (t_end * r0.powf(-1.0 / alpha.get())).max(h);
    for _ in 0..48 {
        let xbar = simulate_invariant(spec, x0, horizon, h, seed)?;
        let clock = lamperti::inverse_clock(&xbar, alpha)?;
        let killed = xbar.lifetime().is_finite();
        let coverage = clock.value_at(xbar.last_time()).unwrap();
        if killed || coverage >= t_end {
            let path = lamperti::inverse_transform(&xbar, alpha)?;
            return Ok(path.truncated(t_end));
        }
        horizon *= 2.0;
    }
    // The inverse clock saturates: the process reaches the origin before
    // t_end. Return everything that exists.
    let xbar = simulate_invariant(spec, x0, horizon, h, seed)?;
    let path = lamperti::inverse_transform(&xbar, alpha)?;
    Ok(path.truncated(t_end))
}

/// The forward time change of a [`build_self_similar`] path, grown until it
/// covers `t_end` in the invariant time scale. Composing the two transforms
/// exercises the full round trip; up to discretisation the result is the
/// scale-invariant process itself.
pub fn transformed_self_similar(
    spec: &GeneratorSpec,
    x0: &[f64],
    t_end: f64,
    h: f64,
    seed: Seed,
) -> Result<CadlagPath> {
    check_horizon(t_end, h)?;
    let r0 = geom::norm(x0);
    if !(r0 > 0.0) {
        return Err(Error::LeftDomain { index: 0 });
    }
    let alpha = spec.alpha();
    let mut horizon = (t_end * r0.powf(1.0 / alpha.get())).max(h);
    let mut rounds = 0;
    loop {
        let path = build_self_similar(spec, x0, horizon, h, seed)?;
        let xbar = lamperti::forward_transform(&path, alpha)?;
        let killed = xbar.lifetime() <= t_end;
        if killed || xbar.last_time() >= t_end || rounds >= 48 {
            return Ok(xbar.truncated(t_end));
        }
        horizon *= 2.0;
        rounds += 1;
    }
}

/// Simulates an isotropic stable process: compound-Poisson jumps with
/// radius density proportional to `r^(-1-beta)` beyond `eps_trunc` and
/// uniform direction, plus a Brownian part with the variance of the
/// discarded small jumps. The path is killed if a state's norm falls below
/// [`ORIGIN_GUARD`].
pub fn simulate_stable(spec: &StableSpec, t_end: f64, h: f64, seed: Seed) -> Result<CadlagPath> {
    check_horizon(t_end, h)?;
    let mut diff_rng = seed.child(stream::DIFFUSION).rng();
    let mut jump_rng = seed.child(stream::JUMPS).rng();

    let dim = spec.dim;
    let rate = spec.large_jump_rate();
    let sigma = spec.small_jump_variance().sqrt();

    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut jumps = Vec::new();

    let mut x = spec.x0.clone();
    let mut t = 0.0;
    times.push(0.0);
    states.extend_from_slice(&x);

    let mut next_jump = sphere::draw_arrival(0.0, rate, &mut jump_rng);
    let mut grid_index = 1u64;
    let mut lifetime = f64::INFINITY;
    loop {
        let next_grid = sphere::grid_time(grid_index, h, t_end);
        let (next_t, is_jump) = if next_jump < next_grid {
            (next_jump, true)
        } else {
            (next_grid, false)
        };
        if next_t > t_end {
            break;
        }
        let dt = next_t - t;
        let scale = sigma * dt.sqrt();
        for xi in &mut x {
            let z: f64 = StandardNormal.sample(&mut diff_rng);
            *xi += scale * z;
        }
        if geom::norm(&x) < ORIGIN_GUARD {
            lifetime = next_t;
            break;
        }
        if is_jump {
            let left = x.clone();
            let u: f64 = 1.0 - jump_rng.random::<f64>(); // in (0, 1]
            let radius = spec.eps_trunc * u.powf(-1.0 / spec.beta);
            let dir = loop {
                let g: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut jump_rng)).collect();
                let n = geom::norm(&g);
                if n > 1e-12 {
                    break g.into_iter().map(|v| v / n).collect::<Vec<f64>>();
                }
            };
            for (xi, di) in x.iter_mut().zip(&dir) {
                *xi += radius * di;
            }
            if geom::norm(&x) < ORIGIN_GUARD {
                lifetime = next_t;
                break;
            }
            jumps.push(JumpRecord {
                time: next_t,
                left,
                right: x.clone(),
            });
            next_jump = sphere::draw_arrival(next_t, rate, &mut jump_rng);
        } else {
            grid_index += 1;
        }
        t = next_t;
        times.push(t);
        states.extend_from_slice(&x);
        if t == t_end {
            break;
        }
    }

    CadlagPath::new(dim, times, states, jumps, lifetime)
}

fn check_horizon(t_end: f64, h: f64) -> Result<()> {
    if t_end > 0.0 && h > 0.0 && t_end.is_finite() && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "t_end/h",
            reason: alloc::format!("horizon and grid step must be positive finite, got ({t_end}, {h})"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::{classify_jump, JumpClass, DEFAULT_JUMP_TOL};
    use crate::sphere::AngleLaw;
    use alloc::vec;

    fn quiet_spec(dim: usize) -> GeneratorSpec {
        GeneratorSpec::new(
            dim,
            Alpha::new(1.0).unwrap(),
            0.0,
            0.0,
            AngularSpec::diffusion(dim, 0.0).unwrap(),
            0.0,
            RadialJumpLaw::PointMass(0.5),
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn spec_validation() {
        let ang = AngularSpec::diffusion(2, 1.0).unwrap();
        let alpha = Alpha::new(1.0).unwrap();
        // negative a11
        assert!(GeneratorSpec::new(2, alpha, -1.0, 0.0, ang.clone(), 0.0,
            RadialJumpLaw::PointMass(1.0), 0.0).is_err());
        // jump law with an atom at zero
        assert!(GeneratorSpec::new(2, alpha, 0.0, 0.0, ang.clone(), 1.0,
            RadialJumpLaw::PointMass(0.0), 0.0).is_err());
        // angular dimension mismatch
        assert!(GeneratorSpec::new(3, alpha, 0.0, 0.0, ang, 0.0,
            RadialJumpLaw::PointMass(1.0), 0.0).is_err());
        // stable index out of range
        assert!(StableSpec::new(2, 2.0, 0.1, vec![1.0, 0.0]).is_err());
        assert!(StableSpec::new(2, 0.0, 0.1, vec![1.0, 0.0]).is_err());
        assert!(StableSpec::new(2, 1.0, 0.1, vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn frozen_radial_path_is_constant() {
        let spec = quiet_spec(2);
        let mut rng = Seed::new(1).rng();
        let path = simulate_radial(&spec, 2.5, 1.0, 0.125, &mut rng).unwrap();
        assert!(path.jumps().is_empty());
        for i in 0..path.len() {
            assert_eq!(path.state(i), &[2.5]);
        }
    }

    #[test]
    fn pure_drift_radial_path_is_deterministic_exponential() {
        let mu = 0.7;
        let spec = GeneratorSpec::new(
            2,
            Alpha::new(1.0).unwrap(),
            0.0,
            mu,
            AngularSpec::diffusion(2, 0.0).unwrap(),
            0.0,
            RadialJumpLaw::PointMass(0.5),
            0.0,
        )
        .unwrap();
        let mut rng = Seed::new(2).rng();
        let r0 = 1.5;
        let path = simulate_radial(&spec, r0, 2.0, 0.25, &mut rng).unwrap();
        for i in 0..path.len() {
            let expected = r0 * (mu * path.time(i)).exp();
            assert!((path.state(i)[0] - expected).abs() <= 1e-12 * expected);
        }
    }

    #[test]
    fn radial_brownian_variance() {
        // a11 = 1, c1 = 0: Var(log rho(t) / r0) = t; exact in law at any
        // grid, so a coarse grid suffices. 3% relative at 1e5 paths.
        let spec = GeneratorSpec::new(
            2,
            Alpha::new(1.0).unwrap(),
            1.0,
            0.0,
            AngularSpec::diffusion(2, 0.0).unwrap(),
            0.0,
            RadialJumpLaw::PointMass(0.5),
            0.0,
        )
        .unwrap();
        let n = 100_000;
        let t = 1.0;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for i in 0..n {
            let mut rng = Seed::new(3).child(i).rng();
            let path = simulate_radial(&spec, 1.0, t, 0.25, &mut rng).unwrap();
            let l = path.state(path.len() - 1)[0].ln();
            sum += l;
            sum_sq += l * l;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        assert!((var - t).abs() < 0.03 * t, "variance {var}");
    }

    #[test]
    fn frozen_invariant_path_is_constant() {
        let spec = quiet_spec(3);
        let x0 = [1.0, 2.0, -2.0];
        let path = simulate_invariant(&spec, &x0, 1.0, 0.125, Seed::new(4)).unwrap();
        assert!(path.lifetime().is_infinite());
        for i in 0..path.len() {
            for (a, b) in path.state(i).iter().zip(&x0) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    fn busy_spec(dim: usize) -> GeneratorSpec {
        GeneratorSpec::new(
            dim,
            Alpha::new(1.0).unwrap(),
            0.5,
            -0.1,
            AngularSpec::new(dim, 0.8, 1.5, AngleLaw::Uniform).unwrap(),
            2.0,
            RadialJumpLaw::Gaussian { mean: 0.2, sd: 0.5 },
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn invariant_jumps_are_never_joint() {
        let spec = busy_spec(3);
        let x0 = [0.0, 0.0, 2.0];
        let mut radial = 0;
        let mut angular = 0;
        for k in 0..50 {
            let path = simulate_invariant(&spec, &x0, 2.0, 0.05, Seed::new(5).child(k)).unwrap();
            for j in path.jumps() {
                match classify_jump(j, DEFAULT_JUMP_TOL, DEFAULT_JUMP_TOL) {
                    JumpClass::RadialOnly => radial += 1,
                    JumpClass::AngularOnly => angular += 1,
                    other => panic!("unexpected class {other:?}"),
                }
            }
        }
        assert!(radial > 50 && angular > 50, "radial {radial}, angular {angular}");
    }

    #[test]
    fn exponential_killing_distribution() {
        // gamma = 1 with a generous horizon cap: empirical lifetimes match
        // Exp(1) by KS at the 1% level over 1e4 paths.
        let spec = GeneratorSpec::new(
            2,
            Alpha::new(1.0).unwrap(),
            0.0,
            0.0,
            AngularSpec::diffusion(2, 0.0).unwrap(),
            0.0,
            RadialJumpLaw::PointMass(0.5),
            1.0,
        )
        .unwrap();
        let x0 = [1.0, 0.0];
        let n = 10_000;
        let mut lifetimes = Vec::new();
        for k in 0..n {
            let path = simulate_invariant(&spec, &x0, 25.0, 0.5, Seed::new(6).child(k)).unwrap();
            if path.lifetime().is_finite() {
                lifetimes.push(path.lifetime());
            }
        }
        assert!(lifetimes.len() > n as usize * 9 / 10);
        // Transform through the Exp(1) cdf and test uniformity.
        let unif: Vec<f64> = lifetimes.iter().map(|&x| 1.0 - (-x).exp()).collect();
        let report = crate::stats::ks_uniform(&unif, 0.0, 1.0).unwrap();
        assert!(report.p_value > 0.01, "ks p {}", report.p_value);
    }

    #[test]
    fn self_similar_path_covers_the_horizon() {
        let spec = busy_spec(2);
        let x0 = [3.0, 4.0];
        let path = build_self_similar(&spec, &x0, 2.0, 0.01, Seed::new(7)).unwrap();
        assert!(path.last_time() <= 2.0);
        assert!(path.state_at(1.9).is_some());
        assert_eq!(path.state(0), &x0);
    }

    #[test]
    fn self_similar_is_deterministic_in_the_seed() {
        let spec = busy_spec(2);
        let x0 = [1.0, 1.0];
        let a = build_self_similar(&spec, &x0, 1.0, 0.02, Seed::new(8)).unwrap();
        let b = build_self_similar(&spec, &x0, 1.0, 0.02, Seed::new(8)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn constant_invariant_gives_constant_self_similar() {
        let spec = quiet_spec(2);
        let x0 = [0.0, 1.0];
        let path = build_self_similar(&spec, &x0, 1.0, 0.125, Seed::new(9)).unwrap();
        for i in 0..path.len() {
            for (a, b) in path.state(i).iter().zip(&x0) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn stable_jumps_are_joint() {
        let spec = StableSpec::new(2, 1.0, 0.01, vec![1.0, 0.0]).unwrap();
        let mut joint = 0usize;
        let mut total = 0usize;
        for k in 0..20 {
            let path = simulate_stable(&spec, 1.0, 0.01, Seed::new(10).child(k)).unwrap();
            for j in path.jumps() {
                total += 1;
                if classify_jump(j, DEFAULT_JUMP_TOL, DEFAULT_JUMP_TOL) == JumpClass::Joint {
                    joint += 1;
                }
            }
        }
        assert!(total > 1000, "only {total} jumps");
        assert!(joint as f64 / total as f64 > 0.99);
    }

    #[test]
    fn stable_jump_count_is_poisson_with_tail_mass_rate() {
        // beta near 2 and a large truncation radius: jump count over the
        // horizon has mean rate * t within 5%.
        let spec = StableSpec::new(2, 1.8, 1.0, vec![1.0, 0.0]).unwrap();
        let rate = spec.large_jump_rate();
        let t_end = 4.0;
        let n = 4000;
        let mut total = 0usize;
        for k in 0..n {
            let path = simulate_stable(&spec, t_end, 0.1, Seed::new(11).child(k)).unwrap();
            total += path.jumps().len();
        }
        let mean = total as f64 / n as f64;
        let expected = rate * t_end;
        assert!((mean - expected).abs() < 0.05 * expected, "mean {mean}, expected {expected}");
    }
}
