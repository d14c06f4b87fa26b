use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepGuess<T> {
    pub alpha: T,
    /// The interpolant was unusable and the step fell back to `alpha_prev / 2`.
    pub fallback: bool,
}

/// Minimizer of the quadratic through `phi(0)`, `phi'(0)` and `phi(alpha_prev)`.
///
/// Falls back to `alpha_prev / 2` when the interpolant is not convex or its
/// minimizer lies outside `(0, 10 alpha_prev]`.
pub fn quadratic_step<T: Real>(phi0: T, dphi0: T, alpha_prev: T, phi_prev: T) -> StepGuess<T> {
    let denom = T::lit(2.0) * (phi_prev - dphi0 * alpha_prev - phi0);
    let half = StepGuess { alpha: alpha_prev / T::lit(2.0), fallback: true };
    if !(denom > T::zero()) {
        return half;
    }
    let alpha = -dphi0 * alpha_prev * alpha_prev / denom;
    if alpha > T::zero() && alpha <= T::lit(10.0) * alpha_prev && alpha.is_finite() {
        StepGuess { alpha, fallback: false }
    } else {
        half
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_quadratic_recovered() {
        // phi(x) = (x - 1)^2 sampled at 0 and 2.
        let s = quadratic_step(1.0, -2.0, 2.0, 1.0);
        assert!(!s.fallback);
        assert!((s.alpha - 1.0_f64).abs() < 1e-15);
        // phi(x) = 3x^2 - 4x + 7 from alpha_prev = 0.1.
        let phi = |x: f64| 3.0 * x * x - 4.0 * x + 7.0;
        let s = quadratic_step(phi(0.0), -4.0, 0.1, phi(0.1));
        assert!((s.alpha - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn linear_phi_falls_back() {
        let s = quadratic_step(1.0_f64, -1.0, 0.5, 0.5);
        assert!(s.fallback);
        assert_eq!(s.alpha, 0.25);
    }

    #[test]
    fn far_minimizer_falls_back() {
        // Nearly linear decrease puts the minimizer beyond ten previous steps.
        let s = quadratic_step(1.0_f64, -1.0, 0.01, 1.0 - 0.01 + 1e-9);
        assert!(s.fallback);
    }
}
