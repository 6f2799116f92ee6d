//! Sampled càdlàg paths in the punctured space `R^d \ {0}`, their polar
//! decomposition and jump bookkeeping.
//!
//! A path is stored at discrete sample times plus exact event times; between
//! stored times it is undefined (no interpolation contract). Jump records
//! carry exact left and right values so that jump classification is free of
//! discretization artifacts.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::geom::{self, geodesic_angle};
use crate::{Error, Result};

/// Default tolerance for [`classify_jump`] on exact jump records; guards
/// only floating-point noise.
pub const DEFAULT_JUMP_TOL: f64 = 1e-9;

/// One jump event: time, left limit and right limit of the path.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpRecord {
    pub time: f64,
    /// State just before the jump, `x(t-)`.
    pub left: Vec<f64>,
    /// State at the jump time, `x(t)`.
    pub right: Vec<f64>,
}

/// How a jump moves the radial and angular parts of the path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpClass {
    RadialOnly,
    AngularOnly,
    Joint,
    Negligible,
}

impl JumpClass {
    pub fn as_str(self) -> &'static str {
        match self {
            JumpClass::RadialOnly => "radial_only",
            JumpClass::AngularOnly => "angular_only",
            JumpClass::Joint => "joint",
            JumpClass::Negligible => "negligible",
        }
    }
}

/// A sampled càdlàg trajectory with explicit jump records and an optional
/// finite lifetime (kill time).
///
/// `states` is row-major: the state at `times[i]` occupies
/// `states[i * dim .. (i + 1) * dim]` and is the right limit at that time.
#[derive(Debug, Clone, PartialEq)]
pub struct CadlagPath {
    dim: usize,
    times: Vec<f64>,
    states: Vec<f64>,
    jumps: Vec<JumpRecord>,
    lifetime: f64,
}

impl CadlagPath {
    /// Validates and assembles a path.
    ///
    /// Requirements: `times` strictly increasing starting at 0, every state
    /// of positive norm, all times strictly below `lifetime`, and every jump
    /// record anchored at a stored time with `right` equal to the stored
    /// state there.
    pub fn new(
        dim: usize,
        times: Vec<f64>,
        states: Vec<f64>,
        jumps: Vec<JumpRecord>,
        lifetime: f64,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: alloc::format!("must be at least 1, got {dim}"),
            });
        }
        if times.is_empty() {
            return Err(Error::Empty("path"));
        }
        if times[0] != 0.0 {
            return Err(Error::BadTimeGrid { index: 0 });
        }
        for i in 1..times.len() {
            if !(times[i] > times[i - 1]) {
                return Err(Error::BadTimeGrid { index: i });
            }
        }
        if states.len() != dim * times.len() {
            return Err(Error::DimensionMismatch {
                expected: dim * times.len(),
                got: states.len(),
            });
        }
        for i in 0..times.len() {
            if !(geom::norm(&states[i * dim..(i + 1) * dim]) > 0.0) {
                return Err(Error::LeftDomain { index: i });
            }
        }
        if !(lifetime > *times.last().unwrap()) {
            return Err(Error::InvalidParameter {
                name: "lifetime",
                reason: alloc::string::String::from("must exceed the last sample time"),
            });
        }
        let path = Self {
            dim,
            times,
            states,
            jumps: Vec::new(),
            lifetime,
        };
        let mut prev_time = f64::NEG_INFINITY;
        for (k, j) in jumps.iter().enumerate() {
            if j.left.len() != dim || j.right.len() != dim {
                return Err(Error::BadJump {
                    index: k,
                    reason: "dimension mismatch",
                });
            }
            if !(j.time > prev_time) {
                return Err(Error::BadJump {
                    index: k,
                    reason: "jump times not strictly increasing",
                });
            }
            prev_time = j.time;
            if j.left == j.right {
                return Err(Error::BadJump {
                    index: k,
                    reason: "left and right values coincide",
                });
            }
            if !(geom::norm(&j.left) > 0.0 && geom::norm(&j.right) > 0.0) {
                return Err(Error::BadJump {
                    index: k,
                    reason: "jump value has zero norm",
                });
            }
            match path.index_of_time(j.time) {
                Some(i) if path.state(i) == j.right.as_slice() => {}
                Some(_) => {
                    return Err(Error::BadJump {
                        index: k,
                        reason: "right value differs from the stored state",
                    })
                }
                None => {
                    return Err(Error::BadJump {
                        index: k,
                        reason: "jump time is not a stored sample time",
                    })
                }
            }
        }
        Ok(Self { jumps, ..path })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a valid path always stores the time 0
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn time(&self, i: usize) -> f64 {
        self.times[i]
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i * self.dim..(i + 1) * self.dim]
    }

    /// Euclidean norm of the state at sample index `i`.
    pub fn radius(&self, i: usize) -> f64 {
        geom::norm(self.state(i))
    }

    pub fn jumps(&self) -> &[JumpRecord] {
        &self.jumps
    }

    /// Kill time; `f64::INFINITY` when the path is never killed.
    pub fn lifetime(&self) -> f64 {
        self.lifetime
    }

    pub fn last_time(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Index of the exact stored time `t`, if present.
    pub fn index_of_time(&self, t: f64) -> Option<usize> {
        self.times
            .binary_search_by(|x| x.partial_cmp(&t).unwrap())
            .ok()
    }

    /// State observed at time `t`: the stored state at the largest sample
    /// time `<= t` (càdlàg evaluation on the stored grid). `None` when `t`
    /// is negative, at or past the lifetime, or beyond the sampled horizon.
    pub fn state_at(&self, t: f64) -> Option<&[f64]> {
        if !(t >= 0.0) || t >= self.lifetime || t > self.last_time() {
            return None;
        }
        let i = self.times.partition_point(|&x| x <= t) - 1;
        Some(self.state(i))
    }

    /// Norm of the state observed at time `t`.
    pub fn radius_at(&self, t: f64) -> Option<f64> {
        self.state_at(t).map(geom::norm)
    }

    /// The path restricted to sample times `<= t_max`; jump records beyond
    /// are dropped, the lifetime is kept when it still exceeds the kept
    /// horizon.
    pub fn truncated(&self, t_max: f64) -> CadlagPath {
        let n = self.times.partition_point(|&x| x <= t_max).max(1);
        let last = self.times[n - 1];
        CadlagPath {
            dim: self.dim,
            times: self.times[..n].to_vec(),
            states: self.states[..n * self.dim].to_vec(),
            jumps: self
                .jumps
                .iter()
                .filter(|j| j.time <= last)
                .cloned()
                .collect(),
            lifetime: self.lifetime,
        }
    }
}

/// Radial and angular coordinates of a path: `r[i] = |x_i|` and
/// `theta[i] = x_i / r[i]`, stored with the same layout as the path.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarView {
    pub times: Vec<f64>,
    pub r: Vec<f64>,
    /// Unit directions, row-major with the path's dimension as stride.
    pub theta: Vec<f64>,
    pub dim: usize,
}

impl PolarView {
    pub fn theta_at(&self, i: usize) -> &[f64] {
        &self.theta[i * self.dim..(i + 1) * self.dim]
    }
}

/// Splits a path into its radial and angular parts.
///
/// Fails with [`Error::LeftDomain`] if any state has zero norm; the
/// pointwise product `r[i] * theta[i]` reproduces the states to within
/// 1e-12 relative error.
pub fn polar_decompose(path: &CadlagPath) -> Result<PolarView> {
    let dim = path.dim();
    let mut r = Vec::with_capacity(path.len());
    let mut theta = Vec::with_capacity(path.len() * dim);
    for i in 0..path.len() {
        let x = path.state(i);
        let n = geom::norm(x);
        if !(n > 0.0) {
            return Err(Error::LeftDomain { index: i });
        }
        r.push(n);
        theta.extend(x.iter().map(|v| v / n));
    }
    Ok(PolarView {
        times: path.times().to_vec(),
        r,
        theta,
        dim,
    })
}

/// Classifies a jump by which of the radial and angular coordinates it moves.
///
/// `Joint` when both the radius changes by more than `tol_r` and the
/// direction turns by more than `tol_theta`; `RadialOnly` / `AngularOnly`
/// when exactly one does; `Negligible` otherwise.
pub fn classify_jump(jump: &JumpRecord, tol_r: f64, tol_theta: f64) -> JumpClass {
    debug_assert!(tol_r > 0.0 && tol_theta > 0.0);
    let dr = (geom::norm(&jump.right) - geom::norm(&jump.left)).abs();
    let dtheta = geodesic_angle(&jump.right, &jump.left);
    match (dr > tol_r, dtheta > tol_theta) {
        (true, true) => JumpClass::Joint,
        (true, false) => JumpClass::RadialOnly,
        (false, true) => JumpClass::AngularOnly,
        (false, false) => JumpClass::Negligible,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn constant_path(dim: usize, value: Vec<f64>, n: usize) -> CadlagPath {
        let times: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let mut states = Vec::new();
        for _ in 0..n {
            states.extend_from_slice(&value);
        }
        CadlagPath::new(dim, times, states, vec![], f64::INFINITY).unwrap()
    }

    #[test]
    fn rejects_malformed_paths() {
        // does not start at zero
        assert!(CadlagPath::new(1, vec![1.0], vec![1.0], vec![], f64::INFINITY).is_err());
        // non-increasing grid
        assert!(
            CadlagPath::new(1, vec![0.0, 0.0], vec![1.0, 1.0], vec![], f64::INFINITY).is_err()
        );
        // zero state
        assert!(
            CadlagPath::new(2, vec![0.0], vec![0.0, 0.0], vec![], f64::INFINITY).is_err()
        );
        // lifetime before the last sample
        assert!(CadlagPath::new(1, vec![0.0, 2.0], vec![1.0, 1.0], vec![], 1.5).is_err());
        // empty
        assert!(CadlagPath::new(1, vec![], vec![], vec![], f64::INFINITY).is_err());
    }

    #[test]
    fn rejects_inconsistent_jump_records() {
        let mk = |jumps| CadlagPath::new(1, vec![0.0, 1.0], vec![1.0, 2.0], jumps, f64::INFINITY);
        // time not on the grid
        assert!(mk(vec![JumpRecord {
            time: 0.5,
            left: vec![1.0],
            right: vec![2.0],
        }])
        .is_err());
        // right value differs from the stored state
        assert!(mk(vec![JumpRecord {
            time: 1.0,
            left: vec![1.0],
            right: vec![3.0],
        }])
        .is_err());
        // not a genuine jump
        assert!(mk(vec![JumpRecord {
            time: 1.0,
            left: vec![2.0],
            right: vec![2.0],
        }])
        .is_err());
        // well-formed record passes
        assert!(mk(vec![JumpRecord {
            time: 1.0,
            left: vec![1.0],
            right: vec![2.0],
        }])
        .is_ok());
    }

    #[test]
    fn polar_of_constant_axis_path() {
        let mut v = vec![0.0; 4];
        v[3] = 1.0;
        let p = constant_path(4, v.clone(), 5);
        let polar = polar_decompose(&p).unwrap();
        assert!(polar.r.iter().all(|&r| r == 1.0));
        assert_eq!(polar.theta_at(2), v.as_slice());
    }

    #[test]
    fn polar_of_three_four_five() {
        let p = constant_path(2, vec![3.0, 4.0], 1);
        let polar = polar_decompose(&p).unwrap();
        assert_eq!(polar.r[0], 5.0);
        assert_eq!(polar.theta_at(0), &[0.6, 0.8]);
    }

    #[test]
    fn state_at_uses_cadlag_convention() {
        let p = CadlagPath::new(
            1,
            vec![0.0, 1.0, 2.0],
            vec![1.0, 2.0, 3.0],
            vec![],
            2.5,
        )
        .unwrap();
        assert_eq!(p.state_at(0.0), Some(&[1.0][..]));
        assert_eq!(p.state_at(0.99), Some(&[1.0][..]));
        assert_eq!(p.state_at(1.0), Some(&[2.0][..]));
        assert_eq!(p.state_at(2.0), Some(&[3.0][..]));
        assert_eq!(p.state_at(2.4), None); // beyond the sampled horizon
        assert_eq!(p.state_at(2.5), None); // dead
        assert_eq!(p.state_at(-0.1), None);
    }

    #[test]
    fn classify_jump_examples() {
        let tol = DEFAULT_JUMP_TOL;
        let radial = JumpRecord {
            time: 1.0,
            left: vec![0.0, 1.0],
            right: vec![0.0, 2.0],
        };
        assert_eq!(classify_jump(&radial, tol, tol), JumpClass::RadialOnly);

        let angular = JumpRecord {
            time: 1.0,
            left: vec![0.0, 1.0],
            right: vec![1.0, 0.0],
        };
        assert_eq!(classify_jump(&angular, tol, tol), JumpClass::AngularOnly);

        let joint = JumpRecord {
            time: 1.0,
            left: vec![0.0, 1.0],
            right: vec![2.0, 0.0],
        };
        assert_eq!(classify_jump(&joint, tol, tol), JumpClass::Joint);
    }

    #[test]
    fn scalar_multiple_jumps_are_radial_only() {
        // right = lambda * left stays radial for tolerances below
        // |lambda - 1| * |left|.
        for &lambda in &[0.5, 2.0, 10.0] {
            let left = vec![1.0, 2.0, 2.0];
            let right: Vec<f64> = left.iter().map(|x| x * lambda).collect();
            let j = JumpRecord {
                time: 0.0,
                left,
                right,
            };
            let tol_r = 0.9 * ((lambda - 1.0f64).abs() * 3.0);
            assert_eq!(
                classify_jump(&j, tol_r, DEFAULT_JUMP_TOL),
                JumpClass::RadialOnly
            );
        }
    }

    #[test]
    fn truncation_keeps_prefix_and_jumps() {
        let j = JumpRecord {
            time: 1.0,
            left: vec![1.0],
            right: vec![2.0],
        };
        let p = CadlagPath::new(
            1,
            vec![0.0, 1.0, 2.0],
            vec![1.0, 2.0, 3.0],
            vec![j.clone()],
            f64::INFINITY,
        )
        .unwrap();
        let t = p.truncated(1.5);
        assert_eq!(t.times(), &[0.0, 1.0]);
        assert_eq!(t.jumps(), &[j]);
        let t0 = p.truncated(0.0);
        assert_eq!(t0.times(), &[0.0]);
        assert!(t0.jumps().is_empty());
    }
}
