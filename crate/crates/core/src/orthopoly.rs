//! Univariate classical orthogonal polynomials on [-1, 1].
//!
//! Jacobi polynomials `P_n^{(a,b)}` are orthogonal against `(1-x)^a (1+x)^b`,
//! Gegenbauer polynomials `C_n^l` against `(1-x^2)^{l-1/2}`. Everything here
//! is evaluated by three-term recurrence; Gamma-ratio constants go through
//! log-Gamma so that moderate degrees with fractional parameters do not
//! overflow.

use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Result};

/// Parameters of the Jacobi weight `(1-x)^alpha (1+x)^beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0) || !(beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return invalid(format!(
                "Jacobi parameters must satisfy alpha > -1, beta > -1 (got {alpha}, {beta})"
            ));
        }
        Ok(Self { alpha, beta })
    }

    /// Chebyshev first kind, `alpha = beta = -1/2`.
    pub fn chebyshev() -> Self {
        Self { alpha: -0.5, beta: -0.5 }
    }

    /// Legendre, `alpha = beta = 0`.
    pub fn legendre() -> Self {
        Self { alpha: 0.0, beta: 0.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The weight `(1-x)^alpha (1+x)^beta`.
    pub fn weight(&self, x: f64) -> f64 {
        (1.0 - x).powf(self.alpha) * (1.0 + x).powf(self.beta)
    }

    /// Total mass `2^{a+b+1} B(a+1, b+1)` of the weight on [-1, 1].
    pub fn total_mass(&self) -> f64 {
        jacobi_norm_const(0, self)
    }
}

/// Rising factorial `(a)_j = a (a+1) ... (a+j-1)`; the empty product is 1.
pub fn pochhammer(a: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, k| acc * (a + k as f64))
}

/// `Beta(a, b)` through log-Gamma. Both arguments must be positive.
pub fn beta_fn(a: f64, b: f64) -> f64 {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

/// `binomial(n + d - 1, n)`, the number of monomials of degree exactly `n`
/// in `d` variables.
pub fn dim_poly_space(n: usize, d: usize) -> usize {
    assert!(d >= 1, "dimension must be at least 1");
    // C(n+d-1, d-1) accumulated so every intermediate is an integer.
    let k = d - 1;
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc * (n as u128 + i) / i;
    }
    acc as usize
}

/// Cesàro weight `c_{n,j}^delta = (-n)_j / (-n-delta)_j`.
///
/// Evaluated as the product of `(n-k+1)/(n+delta-k+1)` for `k = 1..=j`, which
/// is the same ratio with the signs cancelled. For `delta = 0` every factor is
/// exactly 1.
pub fn cesaro_coeff(n: usize, j: usize, delta: f64) -> Result<f64> {
    if j > n {
        return invalid(format!("Cesàro index j = {j} exceeds n = {n}"));
    }
    if !(delta >= 0.0) || !delta.is_finite() {
        return invalid(format!("Cesàro order must be finite and >= 0 (got {delta})"));
    }
    Ok(cesaro_coeff_unchecked(n, j, delta))
}

fn cesaro_coeff_unchecked(n: usize, j: usize, delta: f64) -> f64 {
    let nf = n as f64;
    (1..=j).fold(1.0, |acc, k| {
        let num = nf - k as f64 + 1.0;
        acc * (num / (num + delta))
    })
}

/// Precomputed `(C, delta)` weights `c_{n,0}^delta, ..., c_{n,n}^delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct CesaroPlan {
    n: usize,
    delta: f64,
    coeffs: Vec<f64>,
}

impl CesaroPlan {
    pub fn new(n: usize, delta: f64) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return invalid(format!("Cesàro order must be finite and >= 0 (got {delta})"));
        }
        // Running product: c_{n,j} = c_{n,j-1} * (n-j+1)/(n+delta-j+1).
        let nf = n as f64;
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut c = 1.0;
        coeffs.push(c);
        for j in 1..=n {
            let num = nf - j as f64 + 1.0;
            c *= num / (num + delta);
            coeffs.push(c);
        }
        Ok(Self { n, delta, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs[j]
    }
}

/// Values `P_0(x), ..., P_n(x)` of the Jacobi polynomials.
pub fn jacobi_all(n: usize, p: &JacobiParams, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    jacobi_fill(p, x, &mut out);
    out
}

/// Fills `out[k] = P_k^{(a,b)}(x)` for `k < out.len()`.
pub fn jacobi_fill(p: &JacobiParams, x: f64, out: &mut [f64]) {
    let (a, b) = (p.alpha, p.beta);
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    let ab2 = a * a - b * b;
    for k in 2..out.len() {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let c0 = 2.0 * kf * (kf + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + ab2);
        let c2 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * s;
        out[k] = (c1 * out[k - 1] - c2 * out[k - 2]) / c0;
    }
}

/// `P_n^{(a,b)}(x)` by the three-term recurrence.
pub fn eval_jacobi(n: usize, p: &JacobiParams, x: f64) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    let ab2 = a * a - b * b;
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let c0 = 2.0 * kf * (kf + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + ab2);
        let c2 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * s;
        let next = (c1 * cur - c2 * prev) / c0;
        prev = cur;
        cur = next;
    }
    cur
}

/// Squared norm `∫ P_n^2 w` of the Jacobi polynomial:
/// `2^{a+b+1}/(2n+a+b+1) * Γ(n+a+1)Γ(n+b+1) / (Γ(n+1)Γ(n+a+b+1))`.
///
/// At `n = 0` the factor `(a+b+1)Γ(a+b+1)` is folded into `Γ(a+b+2)`, which
/// keeps `a + b = -1` well defined.
pub fn jacobi_norm_const(n: usize, p: &JacobiParams) -> f64 {
    let (a, b) = (p.alpha, p.beta);
    let nf = n as f64;
    let log2 = (a + b + 1.0) * std::f64::consts::LN_2;
    if n == 0 {
        return (log2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)).exp();
    }
    let lg = ln_gamma(nf + a + 1.0) + ln_gamma(nf + b + 1.0)
        - ln_gamma(nf + 1.0)
        - ln_gamma(nf + a + b + 1.0);
    (log2 + lg).exp() / (2.0 * nf + a + b + 1.0)
}

/// Orthonormal Jacobi polynomial `P_n / sqrt(jacobi_norm_const(n))`.
pub fn eval_orthonormal_jacobi(n: usize, p: &JacobiParams, x: f64) -> f64 {
    eval_jacobi(n, p, x) / jacobi_norm_const(n, p).sqrt()
}

/// Orthonormal Jacobi polynomials up to a fixed degree, with the
/// normalisation constants computed once.
#[derive(Debug, Clone)]
pub struct OrthonormalJacobi {
    params: JacobiParams,
    inv_norms: Vec<f64>,
}

impl OrthonormalJacobi {
    pub fn new(params: JacobiParams, max_degree: usize) -> Self {
        let inv_norms = (0..=max_degree)
            .map(|k| 1.0 / jacobi_norm_const(k, &params).sqrt())
            .collect();
        Self { params, inv_norms }
    }

    pub fn params(&self) -> &JacobiParams {
        &self.params
    }

    pub fn max_degree(&self) -> usize {
        self.inv_norms.len() - 1
    }

    /// Fills `out[k] = p̂_k(x)` for `k < out.len()`; `out` may not be longer
    /// than `max_degree + 1`.
    pub fn fill(&self, x: f64, out: &mut [f64]) {
        jacobi_fill(&self.params, x, out);
        for (v, s) in out.iter_mut().zip(&self.inv_norms) {
            *v *= s;
        }
    }

    pub fn eval_all(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.inv_norms.len()];
        self.fill(x, &mut out);
        out
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return invalid(format!("Gegenbauer parameter must be > 0 (got {lambda})"));
    }
    Ok(())
}

/// Fills `out[k] = C_k^lambda(x)`. No check on `lambda`.
pub(crate) fn gegenbauer_fill(lambda: f64, x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = 2.0 * lambda * x;
    for k in 2..out.len() {
        let kf = k as f64;
        out[k] = (2.0 * x * (kf + lambda - 1.0) * out[k - 1]
            - (kf + 2.0 * lambda - 2.0) * out[k - 2])
            / kf;
    }
}

/// `C_n^lambda(x)` by the three-term recurrence, `lambda > 0`.
pub fn eval_gegenbauer(n: usize, lambda: f64, x: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let mut out = vec![0.0; n + 1];
    gegenbauer_fill(lambda, x, &mut out);
    Ok(out[n])
}

/// `ln C_n^lambda(1) = ln((2 lambda)_n / n!)`.
fn ln_gegenbauer_at_one(n: usize, lambda: f64) -> f64 {
    let nf = n as f64;
    ln_gamma(nf + 2.0 * lambda) - ln_gamma(2.0 * lambda) - ln_gamma(nf + 1.0)
}

/// Mean square of `C_n^lambda` against the probability measure proportional
/// to `(1-x^2)^{lambda-1/2}`: `lambda / (n + lambda) * C_n^lambda(1)`.
pub fn gegenbauer_mean_square(n: usize, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(lambda / (n as f64 + lambda) * ln_gegenbauer_at_one(n, lambda).exp())
}

/// `C̃_n^lambda(x) = C_n^lambda(x) / sqrt(h_n)`, normalised to unit mean
/// square against the probability measure `∝ (1-x^2)^{lambda-1/2}`.
///
/// With this scaling `(n+lambda)/lambda * C_n(x) = C̃_n(1) C̃_n(x)`.
pub fn eval_normalized_gegenbauer(n: usize, lambda: f64, x: f64) -> Result<f64> {
    let h = gegenbauer_mean_square(n, lambda)?;
    Ok(eval_gegenbauer(n, lambda, x)? / h.sqrt())
}

/// Chebyshev polynomial of the first kind, `T_n(x)`.
pub fn chebyshev_t(n: usize, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for _ in 2..=n {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Fills `out[k] = (k + lambda)/lambda * C_k^lambda(x)`.
///
/// At `lambda = 0` the limit is taken: 1 for `k = 0` and `2 T_k(x)` otherwise.
pub fn zonal_fill(lambda: f64, x: f64, out: &mut [f64]) {
    if lambda == 0.0 {
        let mut prev = 1.0;
        let mut cur = x;
        for (k, v) in out.iter_mut().enumerate() {
            *v = match k {
                0 => 1.0,
                1 => 2.0 * x,
                _ => {
                    let next = 2.0 * x * cur - prev;
                    prev = cur;
                    cur = next;
                    2.0 * cur
                }
            };
        }
        return;
    }
    gegenbauer_fill(lambda, x, out);
    for (k, v) in out.iter_mut().enumerate() {
        *v *= (k as f64 + lambda) / lambda;
    }
}
