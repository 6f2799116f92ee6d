//! Monte Carlo hypothesis tests for the defining properties of the process
//! families: distributional equality under time/space scaling, rotations and
//! dilations (two-sample Kolmogorov-Smirnov on scalar functionals), radial /
//! angular independence (permutation test on the Spearman rank correlation),
//! joint-jump counting, and a numeric evaluation of the generator for
//! cross-checking simulations against their infinitesimal description.
//!
//! Distributional equality is tested on scalar functionals of the state
//! (norm, probe coordinate, geodesic displacement) rather than on full
//! d-dimensional laws; the significance level used by callers is 1%
//! throughout, with Bonferroni across functionals.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::factory::GeneratorSpec;
use crate::geom::{self, Rotation};
use crate::lamperti::Alpha;
use crate::path::{classify_jump, CadlagPath, JumpClass};
use crate::rng::Seed;
use crate::{Error, Result};

/// Default number of permutations for [`independence_check`]; p-value
/// resolution 1e-3.
pub const DEFAULT_NUM_PERM: usize = 999;

/// Outcome of one hypothesis test.
#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub name: String,
    pub statistic: f64,
    /// Probability, under the null, of a statistic at least this extreme.
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
    /// Test parameters as key/value pairs, for reporting.
    pub params: Vec<(String, String)>,
}

impl TestReport {
    fn new(name: &str, statistic: f64, p_value: f64, n1: usize, n2: usize) -> Self {
        debug_assert!((0.0..=1.0).contains(&p_value));
        Self {
            name: name.to_string(),
            statistic,
            p_value,
            n1,
            n2,
            params: Vec::new(),
        }
    }

    fn with_params(mut self, params: &[(&str, String)]) -> Self {
        self.params = params
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect();
        self
    }
}

/// Survival function of the Kolmogorov distribution,
/// `Q(x) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 x^2)`, evaluated through the
/// theta-function form for small arguments where the alternating series
/// converges poorly.
pub fn kolmogorov_pvalue(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.18 {
        // 1 - cdf with cdf = sqrt(2 pi)/x * sum_{j odd} exp(-j^2 pi^2 / (8 x^2))
        let f = core::f64::consts::PI * core::f64::consts::PI / (8.0 * x * x);
        let mut cdf = 0.0;
        for j in (1..40).step_by(2) {
            let term = (-(j * j) as f64 * f).exp();
            cdf += term;
            if term < 1e-18 {
                break;
            }
        }
        let sqrt_2pi = (2.0 * core::f64::consts::PI).sqrt();
        (1.0 - sqrt_2pi / x * cdf).clamp(0.0, 1.0)
    } else {
        let mut q = 0.0;
        for j in 1..200 {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            let term = sign * 2.0 * (-2.0 * (j * j) as f64 * x * x).exp();
            q += term;
            if term.abs() < 1e-18 {
                break;
            }
        }
        q.clamp(0.0, 1.0)
    }
}

/// Upper tail of the chi-square distribution with `dof` degrees of freedom:
/// the regularized incomplete gamma function `Q(dof/2, x/2)`.
pub fn chi_square_pvalue(x: f64, dof: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_q(dof / 2.0, x / 2.0)
}

/// Regularized upper incomplete gamma `Q(a, x)`: series for `x < a + 1`,
/// continued fraction otherwise.
fn gamma_q(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        // P(a, x) by series, Q = 1 - P.
        let mut ap = a;
        let mut sum = 1.0 / a;
        let mut del = sum;
        for _ in 0..500 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-15 {
                break;
            }
        }
        let p = sum * (-x + a * x.ln() - libm::lgamma(a)).exp();
        (1.0 - p).clamp(0.0, 1.0)
    } else {
        // Q(a, x) by Lentz continued fraction.
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-15 {
                break;
            }
        }
        (h * (-x + a * x.ln() - libm::lgamma(a)).exp()).clamp(0.0, 1.0)
    }
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_unstable_by(f64::total_cmp);
    s
}

/// Two-sample Kolmogorov-Smirnov test: statistic is the sup-norm distance
/// between empirical CDFs, p-value from the asymptotic Kolmogorov
/// distribution at effective sample size `n1 n2 / (n1 + n2)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TestReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("sample"));
    }
    let xs = sorted(a);
    let ys = sorted(b);
    let (n, m) = (xs.len(), ys.len());
    let mut i = 0;
    let mut j = 0;
    let mut stat = 0.0f64;
    while i < n && j < m {
        let current = xs[i].min(ys[j]);
        while i < n && xs[i] == current {
            i += 1;
        }
        while j < m && ys[j] == current {
            j += 1;
        }
        let diff = (i as f64 / n as f64 - j as f64 / m as f64).abs();
        stat = stat.max(diff);
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    let p = kolmogorov_pvalue(ne.sqrt() * stat);
    Ok(TestReport::new("ks_two_sample", stat, p, n, m))
}

/// One-sample Kolmogorov-Smirnov test against the uniform distribution on
/// `[lo, hi]`.
pub fn ks_uniform(sample: &[f64], lo: f64, hi: f64) -> Result<TestReport> {
    if sample.is_empty() {
        return Err(Error::Empty("sample"));
    }
    if !(lo < hi) {
        return Err(Error::InvalidParameter {
            name: "interval",
            reason: format!("requires lo < hi, got ({lo}, {hi})"),
        });
    }
    let xs = sorted(sample);
    let n = xs.len();
    let mut stat = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let cdf = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
        stat = stat
            .max((cdf - i as f64 / n as f64).abs())
            .max(((i + 1) as f64 / n as f64 - cdf).abs());
    }
    let p = kolmogorov_pvalue((n as f64).sqrt() * stat);
    Ok(TestReport::new("ks_uniform", stat, p, n, n))
}

/// Samples n paths indexed 0..n from independent seed children and collects
/// a functional of each, skipping paths that are dead at the evaluation
/// time. Parallel when the `parallel` feature is on; the result does not
/// depend on scheduling.
fn collect_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n as u64).into_par_iter().filter_map(|i| f(i)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n as u64).filter_map(|i| f(i)).collect()
    }
}

/// A family sampler: produces the path started at `x0` over the requested
/// horizon, driven by the given seed.
pub trait PathSampler: Sync {
    fn sample(&self, x0: &[f64], t_end: f64, seed: Seed) -> CadlagPath;
}

impl<F> PathSampler for F
where
    F: Fn(&[f64], f64, Seed) -> CadlagPath + Sync,
{
    fn sample(&self, x0: &[f64], t_end: f64, seed: Seed) -> CadlagPath {
        self(x0, t_end, seed)
    }
}

fn check_mc_params(lambda: f64, t_star: f64, n: usize) -> Result<()> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            reason: format!("must be positive, got {lambda}"),
        });
    }
    if !(t_star > 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_star",
            reason: format!("must be positive, got {t_star}"),
        });
    }
    if n == 0 {
        return Err(Error::Empty("sample"));
    }
    Ok(())
}

/// Tests the self-similarity identity: the state at time `lambda t*`
/// started from `x0` must match `lambda^alpha` times the state at `t*`
/// started from `lambda^{-alpha} x0`, in law. Returns one KS report for the
/// norm functional and one for the first coordinate; the null is
/// self-similarity with the given index.
pub fn self_similarity_check<S: PathSampler>(
    sampler: &S,
    x0: &[f64],
    alpha: Alpha,
    lambda: f64,
    t_star: f64,
    n: usize,
    seed: Seed,
) -> Result<Vec<TestReport>> {
    check_mc_params(lambda, t_star, n)?;
    let scale = lambda.powf(alpha.get());
    let x0_scaled: Vec<f64> = x0.iter().map(|v| v / scale).collect();
    let t_long = lambda * t_star;

    let s1 = seed.child(1);
    let arm1 = collect_map(n, |i| {
        let p = sampler.sample(x0, t_long, s1.child(i));
        p.state_at(t_long).map(|x| (geom::norm(x), x[0]))
    });
    let s2 = seed.child(2);
    let arm2 = collect_map(n, |i| {
        let p = sampler.sample(&x0_scaled, t_star, s2.child(i));
        p.state_at(t_star).map(|x| (scale * geom::norm(x), scale * x[0]))
    });

    let params = [
        ("lambda", format!("{lambda}")),
        ("t_star", format!("{t_star}")),
        ("alpha", format!("{}", alpha.get())),
        ("seed", format!("{}", seed.value())),
    ];
    let norms = ks_two_sample(
        &arm1.iter().map(|v| v.0).collect::<Vec<_>>(),
        &arm2.iter().map(|v| v.0).collect::<Vec<_>>(),
    )?;
    let coords = ks_two_sample(
        &arm1.iter().map(|v| v.1).collect::<Vec<_>>(),
        &arm2.iter().map(|v| v.1).collect::<Vec<_>>(),
    )?;
    Ok(alloc::vec![
        TestReport {
            name: "self_similarity_norm".to_string(),
            ..norms
        }
        .with_params(&params),
        TestReport {
            name: "self_similarity_coord".to_string(),
            ..coords
        }
        .with_params(&params),
    ])
}

/// Tests rotation invariance: `phi` applied to the state at `t*` started
/// from `x0` must match, in law, the state at `t*` started from `phi(x0)`.
/// Compared through the inner product with a fixed probe vector.
pub fn isotropy_check<S: PathSampler>(
    sampler: &S,
    x0: &[f64],
    rotation: &Rotation,
    t_star: f64,
    n: usize,
    seed: Seed,
) -> Result<TestReport> {
    check_mc_params(1.0, t_star, n)?;
    if rotation.dim() != x0.len() {
        return Err(Error::DimensionMismatch {
            expected: x0.len(),
            got: rotation.dim(),
        });
    }
    let dim = x0.len();
    // Fixed probe with distinct weights per coordinate, so that no
    // coordinate permutation or reflection hides behind it.
    let probe = {
        let raw: Vec<f64> = (1..=dim).map(|k| k as f64).collect();
        let nrm = geom::norm(&raw);
        raw.into_iter().map(|v| v / nrm).collect::<Vec<f64>>()
    };
    let x0_rot = rotation.apply(x0);

    let s1 = seed.child(1);
    let arm1 = collect_map(n, |i| {
        let p = sampler.sample(x0, t_star, s1.child(i));
        p.state_at(t_star)
            .map(|x| geom::dot(&rotation.apply(x), &probe))
    });
    let s2 = seed.child(2);
    let arm2 = collect_map(n, |i| {
        let p = sampler.sample(&x0_rot, t_star, s2.child(i));
        p.state_at(t_star).map(|x| geom::dot(x, &probe))
    });

    let report = ks_two_sample(&arm1, &arm2)?;
    Ok(TestReport {
        name: "isotropy_probe".to_string(),
        ..report
    }
    .with_params(&[
        ("t_star", format!("{t_star}")),
        ("seed", format!("{}", seed.value())),
    ]))
}

/// Tests dilation invariance: `lambda` times the state at `t*` started from
/// `x0` must match, in law, the state at `t*` started from `lambda x0`.
/// Returns KS reports for the norm and the first coordinate.
pub fn multiplicative_invariance_check<S: PathSampler>(
    sampler: &S,
    x0: &[f64],
    lambda: f64,
    t_star: f64,
    n: usize,
    seed: Seed,
) -> Result<Vec<TestReport>> {
    check_mc_params(lambda, t_star, n)?;
    let x0_scaled: Vec<f64> = x0.iter().map(|v| v * lambda).collect();

    let s1 = seed.child(1);
    let arm1 = collect_map(n, |i| {
        let p = sampler.sample(x0, t_star, s1.child(i));
        p.state_at(t_star)
            .map(|x| (lambda * geom::norm(x), lambda * x[0]))
    });
    let s2 = seed.child(2);
    let arm2 = collect_map(n, |i| {
        let p = sampler.sample(&x0_scaled, t_star, s2.child(i));
        p.state_at(t_star).map(|x| (geom::norm(x), x[0]))
    });

    let params = [
        ("lambda", format!("{lambda}")),
        ("t_star", format!("{t_star}")),
        ("seed", format!("{}", seed.value())),
    ];
    let norms = ks_two_sample(
        &arm1.iter().map(|v| v.0).collect::<Vec<_>>(),
        &arm2.iter().map(|v| v.0).collect::<Vec<_>>(),
    )?;
    let coords = ks_two_sample(
        &arm1.iter().map(|v| v.1).collect::<Vec<_>>(),
        &arm2.iter().map(|v| v.1).collect::<Vec<_>>(),
    )?;
    Ok(alloc::vec![
        TestReport {
            name: "mult_invariance_norm".to_string(),
            ..norms
        }
        .with_params(&params),
        TestReport {
            name: "mult_invariance_coord".to_string(),
            ..coords
        }
        .with_params(&params),
    ])
}

/// Average ranks (ties shared) of a sample, 1-based.
fn ranks(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_unstable_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = alloc::vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    if va == 0.0 || vb == 0.0 {
        0.0
    } else {
        cov / (va * vb).sqrt()
    }
}

/// Permutation test of independence on paired functionals, using the
/// absolute Spearman rank correlation as the statistic. The p-value is the
/// add-one-smoothed fraction of permuted statistics at least as large as
/// the observed one; it is invariant under strictly increasing transforms
/// of either coordinate.
pub fn independence_check<R: Rng + ?Sized>(
    pairs: &[(f64, f64)],
    num_perm: usize,
    rng: &mut R,
) -> Result<TestReport> {
    if pairs.len() < 2 {
        return Err(Error::Empty("pairs"));
    }
    if num_perm == 0 {
        return Err(Error::InvalidParameter {
            name: "num_perm",
            reason: "must be at least 1".to_string(),
        });
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let rx = ranks(&xs);
    let mut ry = ranks(&ys);
    let observed = pearson(&rx, &ry).abs();

    let mut exceed = 0usize;
    for _ in 0..num_perm {
        ry.shuffle(rng);
        if pearson(&rx, &ry).abs() >= observed {
            exceed += 1;
        }
    }
    let p = (exceed + 1) as f64 / (num_perm + 1) as f64;
    Ok(
        TestReport::new("independence_spearman", observed, p, pairs.len(), num_perm)
            .with_params(&[("num_perm", format!("{num_perm}"))]),
    )
}

/// Joint-jump census of a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpFraction {
    pub joint: usize,
    pub total: usize,
    /// `joint / total`; 0 when the path has no jumps at all.
    pub fraction: f64,
}

/// Classifies every jump record and reports the fraction classified joint.
pub fn simultaneous_jump_fraction(path: &CadlagPath, tol_r: f64, tol_theta: f64) -> JumpFraction {
    let mut joint = 0usize;
    let total = path.jumps().len();
    for j in path.jumps() {
        if classify_jump(j, tol_r, tol_theta) == JumpClass::Joint {
            joint += 1;
        }
    }
    JumpFraction {
        joint,
        total,
        fraction: if total == 0 {
            0.0
        } else {
            joint as f64 / total as f64
        },
    }
}

/// Test functions for the generator check: products
/// `f(x) = g(log|x|) h(<x/|x|, axis>)` with `g` a polynomial times an
/// optional Gaussian envelope and `h` a polynomial, so that all derivatives
/// appearing in the generator have closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    /// Ascending coefficients of the log-radial polynomial.
    pub radial_poly: Vec<f64>,
    /// Width of the Gaussian envelope `exp(-s^2 / (2 w^2))`; `None` leaves
    /// the bare polynomial.
    pub radial_width: Option<f64>,
    /// Ascending coefficients of the polynomial in the cosine of the angle
    /// to the last-coordinate axis.
    pub angular_poly: Vec<f64>,
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

impl TestFunction {
    /// The constant function 1.
    pub fn one() -> Self {
        Self {
            radial_poly: alloc::vec![1.0],
            radial_width: None,
            angular_poly: alloc::vec![1.0],
        }
    }

    /// Radial factor and its first two derivatives in `s = log |x|`.
    pub fn radial(&self, s: f64) -> (f64, f64, f64) {
        let p = poly_eval(&self.radial_poly, s);
        let dp_coeffs = poly_derivative(&self.radial_poly);
        let dp = poly_eval(&dp_coeffs, s);
        let ddp = poly_eval(&poly_derivative(&dp_coeffs), s);
        match self.radial_width {
            None => (p, dp, ddp),
            Some(w) => {
                let iw2 = 1.0 / (w * w);
                let env = (-0.5 * s * s * iw2).exp();
                let g = p * env;
                let g1 = (dp - p * s * iw2) * env;
                let g2 = (ddp - 2.0 * dp * s * iw2 - p * iw2 + p * s * s * iw2 * iw2) * env;
                (g, g1, g2)
            }
        }
    }

    /// Angular factor and its first two derivatives in `c = cos(angle)`.
    pub fn angular(&self, c: f64) -> (f64, f64, f64) {
        let h = poly_eval(&self.angular_poly, c);
        let dh_coeffs = poly_derivative(&self.angular_poly);
        let h1 = poly_eval(&dh_coeffs, c);
        let h2 = poly_eval(&poly_derivative(&dh_coeffs), c);
        (h, h1, h2)
    }

    /// Value of the function at a state of the punctured space.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let r = geom::norm(x);
        debug_assert!(r > 0.0);
        let c = x[x.len() - 1] / r;
        let (g, _, _) = self.radial(r.ln());
        let (h, _, _) = self.angular(c);
        g * h
    }
}

/// Generator value together with the absolute quadrature error accumulated
/// over the jump integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorValue {
    pub value: f64,
    pub quad_error: f64,
}

/// Evaluates the generator of the scale-invariant process on a test
/// function at a point `x = r * axis` on the positive last-coordinate axis
/// (by rotation invariance there is no loss in this choice, and it keeps
/// both jump integrals one-dimensional).
///
/// The diffusion/drift part uses the closed-form derivatives of the test
/// function; each jump part is an expectation against the corresponding
/// jump law, evaluated by adaptive quadrature with the reported error
/// bound. The killing term is not included.
pub fn apply_generator(
    spec: &GeneratorSpec,
    f: &TestFunction,
    x: &[f64],
) -> Result<GeneratorValue> {
    let dim = spec.dim();
    if x.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: x.len(),
        });
    }
    if x[..dim - 1].iter().any(|&v| v != 0.0) || !(x[dim - 1] > 0.0) {
        return Err(Error::InvalidParameter {
            name: "x",
            reason: "evaluation point must lie on the positive last-coordinate axis".to_string(),
        });
    }
    let s = x[dim - 1].ln();
    let (g, g1, g2) = f.radial(s);
    let (h, h1, _) = f.angular(1.0);

    // Diffusion and drift: radial part in log coordinates; the spherical
    // part uses the Laplace-Beltrami operator of the zonal factor at the
    // axis, -(d-1) h'(1).
    let mut value = (0.5 * spec.a11() * g2 + spec.c1() * g1) * h
        + spec.angular().c_sph() * g * (-((dim - 1) as f64) * h1);
    let mut quad_error = 0.0;

    if spec.radial_jump_rate() > 0.0 {
        let (ev, err) = spec
            .radial_jump_law()
            .expectation(&|u| f.radial(s + u).0 - g);
        value += spec.radial_jump_rate() * h * ev;
        quad_error += spec.radial_jump_rate() * h.abs() * err;
    }
    if spec.angular().jump_rate() > 0.0 {
        let (ev, err) = spec
            .angular()
            .jump_angle_law()
            .expectation(&|angle| f.angular(angle.cos()).0 - h);
        value += spec.angular().jump_rate() * g * ev;
        quad_error += spec.angular().jump_rate() * g.abs() * err;
    }

    Ok(GeneratorValue { value, quad_error })
}

/// Numerical quadrature used by the jump-law expectations.
pub mod quad {
    #[allow(unused_imports)]
    use num_traits::Float;

    /// Adaptive Simpson integration of `f` on `[a, b]`; returns the
    /// integral and an absolute error estimate.
    pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
        fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (fa + 4.0 * fm + fb)
        }
        #[allow(clippy::too_many_arguments)]
        fn recurse(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> (f64, f64) {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = simpson(fa, flm, fm, a, m);
            let right = simpson(fm, frm, fb, m, b);
            let err = (left + right - whole) / 15.0;
            if err.abs() <= tol || depth == 0 {
                (left + right + err, err.abs())
            } else {
                let (li, le) = recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1);
                let (ri, re) = recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
                (li + ri, le + re)
            }
        }
        if a == b {
            return (0.0, 0.0);
        }
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(m), f(b));
        let whole = simpson(fa, fm, fb, a, b);
        recurse(f, a, b, fa, fm, fb, whole, tol, 40)
    }
}
