//! Small dense linear algebra helpers shared across the crate.
//!
//! All physical 3-vectors and 3x3 matrices are plain `nalgebra` types.
//! Damping and inertia matrices must be symmetric positive definite;
//! definiteness is checked through symmetric eigenvalues so callers also
//! get a margin (the minimum eigenvalue), not just a yes/no.

use nalgebra::{Matrix3, Matrix6, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;
pub type Mat6 = Matrix6<f64>;

/// Relative tolerance for the symmetry check on damping/inertia matrices.
pub const SYMMETRY_REL_TOL: f64 = 1e-12;

pub fn vec_finite(v: &Vec3) -> bool {
    v.iter().all(|c| c.is_finite())
}

pub fn mat_finite(m: &Mat3) -> bool {
    m.iter().all(|c| c.is_finite())
}

/// Maximum asymmetry |m - m^T| relative to the matrix magnitude.
pub fn symmetry_error(m: &Mat3) -> f64 {
    let scale = m.amax().max(1.0);
    let mut worst = 0.0_f64;
    for i in 0..3 {
        for j in (i + 1)..3 {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst / scale
}

/// Smallest eigenvalue of a symmetric 3x3 matrix.
pub fn min_eigenvalue(m: &Mat3) -> f64 {
    m.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Smallest eigenvalue of a symmetric 6x6 matrix.
pub fn min_eigenvalue6(m: &Mat6) -> f64 {
    m.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Checks that `m` is finite, symmetric within [`SYMMETRY_REL_TOL`] and
/// positive definite. `what` names the offending matrix in the error.
pub fn check_spd(m: &Mat3, what: &str) -> Result<()> {
    if !mat_finite(m) {
        return Err(Error::InvalidParameter(format!("{what} has non-finite entries")));
    }
    if symmetry_error(m) > SYMMETRY_REL_TOL {
        return Err(Error::InvalidParameter(format!("{what} must be symmetric")));
    }
    let min_eig = min_eigenvalue(m);
    if min_eig <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "{what} must be positive definite (min eigenvalue {min_eig:.3e})"
        )));
    }
    Ok(())
}

/// Projection onto the horizontal plane: (x, y, 0).
pub fn horizontal(v: &Vec3) -> Vec3 {
    Vec3::new(v.x, v.y, 0.0)
}

pub fn horizontal_norm(v: &Vec3) -> f64 {
    v.x.hypot(v.y)
}

/// If `m` is a scalar multiple of the identity, returns the scalar.
pub fn isotropic_scale(m: &Mat3) -> Option<f64> {
    let d = m[(0, 0)];
    let tol = 1e-12 * d.abs().max(1.0);
    let diagonal_equal = (m[(1, 1)] - d).abs() <= tol && (m[(2, 2)] - d).abs() <= tol;
    let off_diagonal_zero = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .all(|(i, j)| m[(i, j)].abs() <= tol);
    (diagonal_equal && off_diagonal_zero).then_some(d)
}
