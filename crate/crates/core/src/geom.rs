//! Euclidean and spherical geometry helpers: norms, unit vectors,
//! geodesic angles and orthogonal transformations.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Euclidean norm of a vector.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Inner product of two vectors of equal length.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Geodesic angle in `[0, pi]` between two directions.
///
/// Computed from the two-argument arc formula `atan2(|v_perp|, <u, v>)`,
/// where `v_perp` is the component of `v` orthogonal to `u`. Unlike
/// `acos(<u, v>)` this stays accurate near 0 and pi. Inputs need not be
/// normalised; only their directions enter.
pub fn geodesic_angle(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    let nu = norm(u);
    let nv = norm(v);
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    let c = dot(u, v) / (nu * nv);
    let perp2: f64 = u
        .iter()
        .zip(v)
        .map(|(&ui, &vi)| {
            let p = vi / nv - c * ui / nu;
            p * p
        })
        .sum();
    perp2.sqrt().atan2(c)
}

/// A point on the unit sphere `S^{d-1}`, embedded in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Tolerance on `| |v| - 1 |` accepted by [`UnitVector::new`].
    pub const NORM_TOL: f64 = 1e-12;

    /// Wraps a vector that is already unit length to within [`Self::NORM_TOL`].
    pub fn new(v: Vec<f64>) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: v.len(),
            });
        }
        let n = norm(&v);
        if (n - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::InvalidParameter {
                name: "unit_vector",
                reason: alloc::format!("norm {n} differs from 1 beyond tolerance"),
            });
        }
        Ok(Self(v))
    }

    /// Normalises an arbitrary nonzero vector onto the sphere.
    pub fn from_direction(v: &[f64]) -> Result<Self> {
        let n = norm(v);
        if n == 0.0 {
            return Err(Error::LeftDomain { index: 0 });
        }
        Ok(Self(v.iter().map(|x| x / n).collect()))
    }

    /// Unit vector along the last coordinate axis, the base point of the sphere.
    pub fn axis(dim: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[dim - 1] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Geodesic distance to another point of the sphere.
    pub fn angle_to(&self, other: &UnitVector) -> f64 {
        geodesic_angle(&self.0, &other.0)
    }

    pub(crate) fn from_normalized_unchecked(v: Vec<f64>) -> Self {
        debug_assert!((norm(&v) - 1.0).abs() <= 1e-9);
        Self(v)
    }
}

/// An orthogonal transformation of `R^d`, stored as a dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    dim: usize,
    rows: Vec<f64>,
}

impl Rotation {
    const ORTHO_TOL: f64 = 1e-9;

    /// Identity transformation.
    pub fn identity(dim: usize) -> Self {
        let mut rows = vec![0.0; dim * dim];
        for i in 0..dim {
            rows[i * dim + i] = 1.0;
        }
        Self { dim, rows }
    }

    /// Builds a rotation as a product of Givens rotations; each entry rotates
    /// the `(i, j)` coordinate plane by `angle` radians.
    pub fn from_givens(dim: usize, planes: &[(usize, usize, f64)]) -> Result<Self> {
        let mut r = Self::identity(dim);
        for &(i, j, angle) in planes {
            if i >= dim || j >= dim || i == j {
                return Err(Error::InvalidParameter {
                    name: "givens_plane",
                    reason: alloc::format!("axes ({i}, {j}) invalid for dimension {dim}"),
                });
            }
            let (s, c) = angle.sin_cos();
            // Left-multiply by the plane rotation: touches rows i and j only.
            for k in 0..dim {
                let a = r.rows[i * dim + k];
                let b = r.rows[j * dim + k];
                r.rows[i * dim + k] = c * a - s * b;
                r.rows[j * dim + k] = s * a + c * b;
            }
        }
        Ok(r)
    }

    /// Validates an explicit matrix as orthogonal (`R R^T = I` within 1e-9).
    pub fn from_matrix(dim: usize, rows: Vec<f64>) -> Result<Self> {
        if rows.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: rows.len(),
            });
        }
        let r = Self { dim, rows };
        for i in 0..dim {
            for j in 0..dim {
                let mut s = 0.0;
                for k in 0..dim {
                    s += r.rows[i * dim + k] * r.rows[j * dim + k];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                if (s - target).abs() > Self::ORTHO_TOL {
                    return Err(Error::InvalidParameter {
                        name: "rotation",
                        reason: alloc::format!("matrix is not orthogonal at ({i}, {j})"),
                    });
                }
            }
        }
        Ok(r)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Applies the transformation to a vector.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| dot(&self.rows[i * self.dim..(i + 1) * self.dim], v))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_and_dot() {
        assert_eq!(norm(&[3.0, 4.0]), 5.0);
        assert_eq!(dot(&[1.0, 2.0], &[3.0, -1.0]), 1.0);
    }

    #[test]
    fn geodesic_angle_matches_known_values() {
        let e1 = [1.0, 0.0];
        let e2 = [0.0, 1.0];
        assert!((geodesic_angle(&e1, &e2) - core::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((geodesic_angle(&e1, &[-1.0, 0.0]) - core::f64::consts::PI).abs() < 1e-15);
        assert_eq!(geodesic_angle(&e1, &e1), 0.0);
    }

    #[test]
    fn geodesic_angle_is_stable_near_zero() {
        // acos of the dot product would lose half the digits here.
        let u = [1.0, 0.0];
        let eps = 1e-9;
        let v = [1.0, eps];
        let angle = geodesic_angle(&u, &v);
        assert!((angle - eps).abs() < 1e-15);
    }

    #[test]
    fn unit_vector_validation() {
        assert!(UnitVector::new(vec![0.6, 0.8]).is_ok());
        assert!(UnitVector::new(vec![0.6, 0.9]).is_err());
        let v = UnitVector::from_direction(&[3.0, 4.0]).unwrap();
        assert_eq!(v.as_slice(), &[0.6, 0.8]);
    }

    #[test]
    fn givens_rotation_is_orthogonal() {
        let r = Rotation::from_givens(3, &[(0, 1, 0.7), (1, 2, -1.3)]).unwrap();
        let x = [1.0, 2.0, 3.0];
        let y = r.apply(&x);
        assert!((norm(&y) - norm(&x)).abs() < 1e-12);
        // Re-validating the matrix exercises the orthogonality check.
        assert!(Rotation::from_matrix(3, r.rows.clone()).is_ok());
    }

    #[test]
    fn rejects_non_orthogonal_matrix() {
        let rows = vec![1.0, 0.5, 0.0, 1.0];
        assert!(Rotation::from_matrix(2, rows).is_err());
    }
}
