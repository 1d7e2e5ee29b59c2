//! Log-gamma, the regularized incomplete beta function and the Student t
//! tail, via `statrs`.

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Regularized incomplete beta `I_x(a, b)` for `a, b > 0`. `x` is clamped to
/// `[0, 1]`.
pub fn incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    statrs::function::beta::beta_reg(a, b, x.clamp(0.0, 1.0))
}

/// Two-tailed tail probability `P(|T| ≥ |t|)` of Student's t with `df` degrees
/// of freedom.
pub fn student_t_two_tailed(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    incomplete_beta(df / 2.0, 0.5, df / (df + t * t))
}
