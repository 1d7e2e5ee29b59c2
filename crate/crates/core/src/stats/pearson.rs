use super::special::incomplete_beta;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationResult {
    pub r: f64,
    pub n: usize,
    pub p_two_tailed: f64,
}

impl CorrelationResult {
    pub(crate) fn perfect(n: usize) -> Self {
        CorrelationResult {
            r: 1.0,
            n,
            p_two_tailed: 0.0,
        }
    }
}

/// Pearson's r with its two-tailed significance.
///
/// r is computed as
///
/// ```text
///            n·Σxy − Σx·Σy
/// r = ─────────────────────────────────────
///     √(n·Σx² − (Σx)²) · √(n·Σy² − (Σy)²)
/// ```
///
/// on mean-shifted inputs (r is shift invariant; the shift keeps the
/// differences of large sums from cancelling). The significance tests
/// `t = r·√((n−2)/(1−r²))` against Student's t with `n − 2` degrees of
/// freedom, which reduces to `I_{1−r²}((n−2)/2, 1/2)`.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    if x.len() != y.len() {
        return Err(Error::Shape {
            what: "correlation pair",
            expected: x.len(),
            got: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    if x.iter().any(|v| !v.is_finite()) || y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("correlation input"));
    }
    if is_constant(x) {
        return Err(Error::ZeroVariance("first correlation vector"));
    }
    if is_constant(y) {
        return Err(Error::ZeroVariance("second correlation vector"));
    }

    let nf = n as f64;
    let mean_x = x.iter().sum::<f64>() / nf;
    let mean_y = y.iter().sum::<f64>() / nf;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (a, b) = (a - mean_x, b - mean_y);
        sx += a;
        sy += b;
        sxx += a * a;
        syy += b * b;
        sxy += a * b;
    }
    let var_x = nf * sxx - sx * sx;
    let var_y = nf * syy - sy * sy;
    if var_x <= 0.0 {
        return Err(Error::ZeroVariance("first correlation vector"));
    }
    if var_y <= 0.0 {
        return Err(Error::ZeroVariance("second correlation vector"));
    }
    let r = ((nf * sxy - sx * sy) / (var_x.sqrt() * var_y.sqrt())).clamp(-1.0, 1.0);

    Ok(CorrelationResult {
        r,
        n,
        p_two_tailed: two_tailed_p(r, n),
    })
}

fn is_constant(v: &[f64]) -> bool {
    v.iter().all(|&a| a == v[0])
}

fn two_tailed_p(r: f64, n: usize) -> f64 {
    let df = (n - 2) as f64;
    let x = 1.0 - r * r;
    incomplete_beta(df / 2.0, 0.5, x).clamp(0.0, 1.0)
}
