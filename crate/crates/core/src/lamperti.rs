//! The Lamperti-Kiu time change between self-similar and scale-invariant
//! processes.
//!
//! For a path `x` and index `alpha`, the forward clock is the additive
//! functional `A(t) = integral of |x(s)|^(-1/alpha) ds`; its inverse `T`
//! reparameterises `x` into the time-changed process `xbar(t) = x(T(t))`.
//! Conversely `T(t) = integral of |xbar(u)|^(1/alpha) du` is recoverable from
//! the time-changed path alone, and applying its inverse undoes the
//! transform. Clocks are evaluated by exact piecewise-constant quadrature
//! over the stored grid, with the integrand held at its right-limit value on
//! each cell, so a forward/inverse round trip reproduces the original sample
//! times to floating-point accuracy and the states and jump values exactly.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::path::{CadlagPath, JumpRecord};
use crate::{Error, Result};

/// The self-similarity index; strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidParameter {
                name: "alpha",
                reason: alloc::format!("must be a positive finite real, got {alpha}"),
            })
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// A continuous strictly increasing clock through the origin, stored as
/// piecewise-linear knots `(t, value)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeChange {
    ts: Vec<f64>,
    vs: Vec<f64>,
}

impl TimeChange {
    /// Validates knots: both coordinates strictly increasing, first knot
    /// exactly `(0, 0)`.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::Empty("time change"));
        }
        if knots[0] != (0.0, 0.0) {
            return Err(Error::BadTimeChange { index: 0 });
        }
        for i in 1..knots.len() {
            if !(knots[i].0 > knots[i - 1].0 && knots[i].1 > knots[i - 1].1) {
                return Err(Error::BadTimeChange { index: i });
            }
        }
        let (ts, vs) = knots.into_iter().unzip();
        Ok(Self { ts, vs })
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.ts.iter().copied().zip(self.vs.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        false // validated non-empty at construction
    }

    /// End of the domain (largest knot time).
    pub fn last_time(&self) -> f64 {
        *self.ts.last().unwrap()
    }

    /// Value at the end of the domain.
    pub fn last_value(&self) -> f64 {
        *self.vs.last().unwrap()
    }

    /// Evaluates the clock at `t`; exact at knots, linear in between,
    /// `None` outside the domain.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        if !(t >= 0.0) || t > self.last_time() {
            return None;
        }
        match self.ts.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => Some(self.vs[i]),
            Err(i) => {
                // t lies strictly inside the cell [ts[i-1], ts[i]].
                let (t0, t1) = (self.ts[i - 1], self.ts[i]);
                let (v0, v1) = (self.vs[i - 1], self.vs[i]);
                Some(v0 + (t - t0) / (t1 - t0) * (v1 - v0))
            }
        }
    }

    /// As [`Self::value_at`], but beyond the last knot the clock continues
    /// with its final slope (slope 1 for a single-knot clock). Used to map
    /// a kill time that lies past the sampled horizon.
    pub fn value_at_extended(&self, t: f64) -> f64 {
        if t <= self.last_time() {
            return self.value_at(t).unwrap();
        }
        let n = self.ts.len();
        let slope = if n >= 2 {
            (self.vs[n - 1] - self.vs[n - 2]) / (self.ts[n - 1] - self.ts[n - 2])
        } else {
            1.0
        };
        self.last_value() + slope * (t - self.last_time())
    }

    /// The inverse clock: every knot `(t, v)` becomes `(v, t)`. An exact
    /// involution.
    pub fn inverted(&self) -> TimeChange {
        TimeChange {
            ts: self.vs.clone(),
            vs: self.ts.clone(),
        }
    }
}

/// Shared quadrature for both clock directions: knot at every sample time,
/// increments `|x(t_i)|^exponent * (t_{i+1} - t_i)`, plus a final knot at
/// the lifetime (integrand held at its last value) when the path is killed.
fn modulus_clock(path: &CadlagPath, exponent: f64) -> Result<TimeChange> {
    let n = path.len();
    let mut knots = Vec::with_capacity(n + 1);
    knots.push((0.0, 0.0));
    let mut acc = 0.0;
    for i in 1..n {
        acc += path.radius(i - 1).powf(exponent) * (path.time(i) - path.time(i - 1));
        knots.push((path.time(i), acc));
    }
    let lifetime = path.lifetime();
    if lifetime.is_finite() {
        acc += path.radius(n - 1).powf(exponent) * (lifetime - path.last_time());
        knots.push((lifetime, acc));
    }
    TimeChange::new(knots)
}

/// The clock `A(t) = integral of |x(s)|^(-1/alpha) ds` driving the forward
/// transform.
pub fn forward_clock(path: &CadlagPath, alpha: Alpha) -> Result<TimeChange> {
    modulus_clock(path, -1.0 / alpha.get())
}

/// The clock `T(t) = integral of |xbar(u)|^(1/alpha) du` recovered from a
/// time-changed path; drives the inverse transform.
pub fn inverse_clock(xbar: &CadlagPath, alpha: Alpha) -> Result<TimeChange> {
    modulus_clock(xbar, 1.0 / alpha.get())
}

/// Reparameterises a path through a clock: the output at time `t` is the
/// input state at `tc(t)`.
///
/// Every input sample time `s` within the clock's range maps to the output
/// time `tc^{-1}(s)` (exact when `s` is a knot value, as it always is for
/// clocks built by [`forward_clock`] / [`inverse_clock`] on the same path);
/// sample times beyond the range are dropped. Jump records keep their left
/// and right values unchanged. A finite lifetime maps through `tc^{-1}`,
/// extended by its final slope when the kill time lies past the last knot.
///
/// Fails with [`Error::HorizonExceeded`] when the clock requests input
/// times past the path's lifetime.
pub fn apply_time_change(path: &CadlagPath, tc: &TimeChange) -> Result<CadlagPath> {
    let v_max = tc.last_value();
    if v_max > path.lifetime() {
        return Err(Error::HorizonExceeded {
            requested: v_max,
            lifetime: path.lifetime(),
        });
    }
    let inv = tc.inverted();
    let dim = path.dim();

    let kept = path.times().partition_point(|&s| s <= v_max);
    debug_assert!(kept >= 1);
    let mut times = Vec::with_capacity(kept);
    for i in 0..kept {
        times.push(inv.value_at(path.time(i)).unwrap());
    }
    let states: Vec<f64> = (0..kept).flat_map(|i| path.state(i).iter().copied()).collect();
    debug_assert_eq!(states.len(), kept * dim);

    let last_kept = path.time(kept - 1);
    let jumps: Vec<JumpRecord> = path
        .jumps()
        .iter()
        .filter(|j| j.time <= last_kept)
        .map(|j| JumpRecord {
            time: inv.value_at(j.time).unwrap(),
            left: j.left.clone(),
            right: j.right.clone(),
        })
        .collect();

    let lifetime = if path.lifetime().is_finite() {
        inv.value_at_extended(path.lifetime())
    } else {
        f64::INFINITY
    };

    CadlagPath::new(dim, times, states, jumps, lifetime)
}

/// Time change into the scale-invariant picture:
/// `xbar(t) = x(T(t))` with `T` the inverse of the forward clock. The output
/// horizon is the forward clock evaluated at the input's final time; there
/// is no extrapolation.
pub fn forward_transform(path: &CadlagPath, alpha: Alpha) -> Result<CadlagPath> {
    let clock = forward_clock(path, alpha)?;
    apply_time_change(path, &clock.inverted())
}

/// Inverse of [`forward_transform`]: recovers the self-similar path
/// `x(t) = xbar(A(t))` from the time-changed path alone.
pub fn inverse_transform(xbar: &CadlagPath, alpha: Alpha) -> Result<CadlagPath> {
    let clock = inverse_clock(xbar, alpha)?;
    apply_time_change(xbar, &clock.inverted())
}
