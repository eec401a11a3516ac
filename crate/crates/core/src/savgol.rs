//! Savitzky-Golay endpoint differentiation.
//!
//! The controller needs a causal velocity estimate, so the polynomial is
//! fit over a trailing window and its derivative is evaluated at the newest
//! sample. The filter reduces to a fixed set of weights computed once per
//! (window, order) pair.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::Vec3;

/// First-derivative filter evaluated at the newest sample of a trailing
/// window of uniformly spaced samples.
#[derive(Debug, Clone)]
pub struct SavitzkyGolay {
    window: usize,
    weights: Vec<f64>,
}

impl SavitzkyGolay {
    /// Builds the endpoint-derivative weights for `window` samples and a
    /// fit polynomial of degree `order`.
    pub fn new(window: usize, order: usize) -> Result<Self> {
        if window < 5 || window % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "savitzky-golay window must be odd and at least 5, got {window}"
            )));
        }
        if order < 2 || order >= window {
            return Err(Error::InvalidParameter(format!(
                "savitzky-golay order must lie in [2, window-1], got {order}"
            )));
        }

        // Fit p(tau) over tau in [-1, 0] (newest sample at tau = 0) for
        // conditioning; the caller's time step is reintroduced in `estimate`.
        let scale = (window - 1) as f64;
        let a = DMatrix::from_fn(window, order + 1, |i, j| {
            let tau = (i as f64 - scale) / scale;
            tau.powi(j as i32)
        });
        let ata = a.transpose() * &a;
        let chol = ata
            .cholesky()
            .ok_or(Error::SingularMatrix("savitzky-golay normal equations"))?;
        // Row of the pseudoinverse picking the linear coefficient, which is
        // dp/dtau at tau = 0.
        let mut e1 = DVector::zeros(order + 1);
        e1[1] = 1.0;
        let coeff_row = chol.solve(&e1);
        let weights = (a * coeff_row).iter().map(|w| w / scale).collect();

        Ok(Self { window, weights })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Derivative at the newest of the trailing `window` samples in
    /// `positions`, spaced `dt` apart.
    ///
    /// Warm-up fallback: with fewer than `window` samples available the
    /// estimate degrades to a two-point difference, and to zero at the very
    /// first sample.
    pub fn estimate(&self, positions: &[Vec3], dt: f64) -> Vec3 {
        let n = positions.len();
        if n >= self.window {
            let tail = &positions[n - self.window..];
            let mut acc = Vec3::zeros();
            for (w, p) in self.weights.iter().zip(tail) {
                acc += *p * *w;
            }
            acc / dt
        } else if n >= 2 {
            (positions[n - 1] - positions[n - 2]) / dt
        } else {
            Vec3::zeros()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn sample(f: impl Fn(f64) -> Vec3, n: usize, dt: f64) -> Vec<Vec3> {
        (0..n).map(|k| f(k as f64 * dt)).collect()
    }

    #[test]
    fn rejects_bad_window_and_order() {
        assert!(SavitzkyGolay::new(4, 2).is_err());
        assert!(SavitzkyGolay::new(10, 3).is_err());
        assert!(SavitzkyGolay::new(11, 1).is_err());
        assert!(SavitzkyGolay::new(11, 11).is_err());
        assert!(SavitzkyGolay::new(11, 3).is_ok());
    }

    #[test]
    fn constant_positions_give_zero_velocity() {
        let sg = SavitzkyGolay::new(11, 3).unwrap();
        let positions = vec![Vec3::new(1.0, -2.0, 0.5); 30];
        assert_relative_eq!(sg.estimate(&positions, 0.01).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn exact_on_linear_motion() {
        let sg = SavitzkyGolay::new(11, 3).unwrap();
        let positions = sample(|t| Vec3::new(0.2 * t, 0.0, 1.0), 40, 0.01);
        let v = sg.estimate(&positions, 0.01);
        assert_relative_eq!(v, Vec3::new(0.2, 0.0, 0.0), epsilon = 1e-10);
    }

    #[test]
    fn exact_on_quadratic_motion() {
        let sg = SavitzkyGolay::new(11, 3).unwrap();
        let dt = 0.01;
        let n = 101; // newest sample at t = 1
        let positions = sample(|t| Vec3::new(t * t, 0.0, 1.0), n, dt);
        let v = sg.estimate(&positions, dt);
        assert_relative_eq!(v.x, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn warmup_falls_back_to_finite_differences() {
        let sg = SavitzkyGolay::new(11, 3).unwrap();
        assert_eq!(sg.estimate(&[Vec3::new(1.0, 0.0, 0.0)], 0.01), Vec3::zeros());
        let two = [Vec3::zeros(), Vec3::new(0.01, 0.0, 0.0)];
        assert_relative_eq!(sg.estimate(&two, 0.01).x, 1.0, epsilon = 1e-12);
    }

    proptest! {
        /// The fit reproduces any polynomial up to its order, so the
        /// derivative estimate is exact on those signals.
        #[test]
        fn exact_on_polynomials_up_to_order(
            c0 in -2.0..2.0f64, c1 in -2.0..2.0f64, c2 in -2.0..2.0f64, c3 in -2.0..2.0f64,
        ) {
            let sg = SavitzkyGolay::new(11, 3).unwrap();
            let dt = 0.01;
            let n = 60;
            let positions = sample(
                |t| Vec3::new(c0 + c1 * t + c2 * t * t + c3 * t * t * t, 0.0, 0.0),
                n, dt,
            );
            let t_end = (n - 1) as f64 * dt;
            let expected = c1 + 2.0 * c2 * t_end + 3.0 * c3 * t_end * t_end;
            let v = sg.estimate(&positions, dt);
            prop_assert!((v.x - expected).abs() < 1e-10);
        }
    }
}
