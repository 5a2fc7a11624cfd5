//! Orthonormal polynomials on the ball `B^d` (d = 1, 2) for the weight
//! `w_mu(y) = (1 - |y|^2)^{mu - 1/2}`, and the reproducing kernel of the
//! degree-`n` subspace.
//!
//! On `B^1` the basis is the orthonormal Jacobi family with
//! `alpha = beta = mu - 1/2` (Chebyshev when `mu = 0`). On `B^2` it is
//!
//! ```text
//! c_{j,k} p̂_j^{(mu-1/2, k)}(2|y|^2 - 1) r^k S_{tag,k}(theta),   k = n - 2j,
//! ```
//!
//! with `S_{1,k} = sin(k(pi/2 - theta))/sqrt(pi)`, `S_{2,k} = cos(k(pi/2 - theta))/sqrt(pi)`.
//! For `mu = 1/2` the scaling `c_{j,k} = 2^{k/2 + 1}` is the classical one;
//! the constant harmonic `S_{2,0} = 1/sqrt(pi)` has squared norm 2 on the
//! circle, so `k = 0` elements carry an extra `1/sqrt 2`.
//!
//! The kernel `sum_elements s(y) s(y')` is available both as a direct sum
//! and through the Gegenbauer compact formula; the latter works for every
//! `mu >= 0` and is what the cylinder code uses.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};
use crate::orthopoly::{beta_fn, chebyshev_t, zonal_fill, JacobiParams, OrthonormalJacobi};
use crate::quadrature::{gauss_jacobi_rule, QuadratureRule};

/// One element of the ball basis of total degree `n`.
///
/// On `B^1`, `j = 0` and `tag = 0`. On `B^2`, `0 <= 2j <= n` and `tag` is 1
/// (sine) or 2 (cosine); when `n = 2j` only `tag = 2` exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BallBasisElement {
    pub n: usize,
    pub j: usize,
    pub tag: u8,
}

impl BallBasisElement {
    pub fn interval(n: usize) -> Self {
        Self { n, j: 0, tag: 0 }
    }

    pub fn disk(n: usize, j: usize, tag: u8) -> Result<Self> {
        let e = Self { n, j, tag };
        e.validate(2)?;
        Ok(e)
    }

    /// Degree of the angular harmonic, `n - 2j`.
    pub fn harmonic_degree(&self) -> usize {
        self.n - 2 * self.j
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        match d {
            1 if self.j == 0 && self.tag == 0 => Ok(()),
            1 => Err(Error::InvalidIndex(format!("{self:?} is not an element on B^1"))),
            2 => {
                if 2 * self.j > self.n {
                    return Err(Error::InvalidIndex(format!("radial index j = {} exceeds n/2", self.j)));
                }
                match (self.harmonic_degree(), self.tag) {
                    (0, 2) => Ok(()),
                    (0, _) => Err(Error::InvalidIndex(
                        "degree-0 harmonic admits only the constant (tag 2)".into(),
                    )),
                    (_, 1 | 2) => Ok(()),
                    _ => Err(Error::InvalidIndex(format!("harmonic tag {} not in {{1, 2}}", self.tag))),
                }
            }
            _ => invalid(format!("ball dimension d = {d} is not supported (1 or 2)")),
        }
    }
}

/// Elements of degree exactly `n`, ordered by radial index then tag.
pub fn ball_elements(d: usize, n: usize) -> Vec<BallBasisElement> {
    match d {
        1 => vec![BallBasisElement::interval(n)],
        _ => {
            let mut out = Vec::with_capacity(n + 1);
            for j in 0..=n / 2 {
                if n == 2 * j {
                    out.push(BallBasisElement { n, j, tag: 2 });
                } else {
                    out.push(BallBasisElement { n, j, tag: 1 });
                    out.push(BallBasisElement { n, j, tag: 2 });
                }
            }
            out
        }
    }
}

fn check_ball(d: usize, mu: f64) -> Result<()> {
    if d != 1 && d != 2 {
        return invalid(format!("ball dimension d = {d} is not supported (1 or 2)"));
    }
    if !(mu >= 0.0) || !mu.is_finite() {
        return invalid(format!("ball weight exponent mu must be >= 0 (got {mu})"));
    }
    Ok(())
}

/// `∫_{B^d} (1-|y|^2)^{mu-1/2} dy = pi^{d/2} Γ(mu+1/2) / Γ(mu+1/2+d/2)`.
pub fn ball_mass(d: usize, mu: f64) -> f64 {
    let h = d as f64 / 2.0;
    (h * PI.ln() + ln_gamma(mu + 0.5) - ln_gamma(mu + 0.5 + h)).exp()
}

/// Angular factor `S_{tag,n}(theta)` exactly as the classical sine/cosine pair.
pub fn eval_spherical_harmonic(tag: u8, n: usize, theta: f64) -> Result<f64> {
    let arg = n as f64 * (PI / 2.0 - theta);
    match tag {
        1 => Ok(arg.sin() / PI.sqrt()),
        2 => Ok(arg.cos() / PI.sqrt()),
        _ => Err(Error::InvalidIndex(format!("harmonic tag {tag} not in {{1, 2}}"))),
    }
}

/// Scaling `2^{n/2 - j + 1}` of the `mu = 1/2` disk basis as classically
/// printed. Correct for `n > 2j`; see [`disk_constant_report`].
pub fn printed_disk_constant(n: usize, j: usize) -> f64 {
    2f64.powf(n as f64 / 2.0 - j as f64 + 1.0)
}

/// Unit-norm scaling of the `B^2` element with harmonic degree `k` for a
/// general `mu`: `2^{(k + mu + 3/2)/2}`, with `1/sqrt 2` more when `k = 0`.
fn disk_scale(k: usize, mu: f64) -> f64 {
    let s = 2f64.powf((k as f64 + mu + 1.5) / 2.0);
    if k == 0 {
        s * FRAC_1_SQRT_2
    } else {
        s
    }
}

/// `r^k S_{tag,k}(theta)` for `y = r (cos theta, sin theta)`.
fn solid_harmonic(tag: u8, k: usize, y: &[f64]) -> f64 {
    if k == 0 {
        return 1.0 / PI.sqrt();
    }
    let r = (y[0] * y[0] + y[1] * y[1]).sqrt();
    if r == 0.0 {
        return 0.0;
    }
    let theta = y[1].atan2(y[0]);
    let arg = k as f64 * (PI / 2.0 - theta);
    let ang = if tag == 1 { arg.sin() } else { arg.cos() };
    r.powi(k as i32) * ang / PI.sqrt()
}

/// Orthonormal Chebyshev basis on `[-1, 1]` (`d = 1, mu = 0`).
pub fn eval_cheb_basis(n: usize, y: f64) -> f64 {
    if n == 0 {
        1.0 / PI.sqrt()
    } else {
        (2.0 / PI).sqrt() * chebyshev_t(n, y)
    }
}

/// Evaluator for the orthonormal ball basis up to a fixed degree.
#[derive(Debug, Clone)]
pub struct BallBasis {
    d: usize,
    mu: f64,
    max_degree: usize,
    /// d = 1: one family; d = 2: one family per harmonic degree k.
    radial: Vec<OrthonormalJacobi>,
}

impl BallBasis {
    pub fn new(d: usize, mu: f64, max_degree: usize) -> Result<Self> {
        check_ball(d, mu)?;
        let radial = if d == 1 {
            vec![OrthonormalJacobi::new(JacobiParams::new(mu - 0.5, mu - 0.5)?, max_degree)]
        } else {
            (0..=max_degree)
                .map(|k| {
                    Ok(OrthonormalJacobi::new(
                        JacobiParams::new(mu - 0.5, k as f64)?,
                        (max_degree - k) / 2,
                    ))
                })
                .collect::<Result<_>>()?
        };
        Ok(Self { d, mu, max_degree, radial })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn eval(&self, e: &BallBasisElement, y: &[f64]) -> Result<f64> {
        e.validate(self.d)?;
        if e.n > self.max_degree {
            return Err(Error::InvalidIndex(format!(
                "degree {} exceeds basis degree {}",
                e.n, self.max_degree
            )));
        }
        Ok(self.eval_unchecked(e, y))
    }

    fn eval_unchecked(&self, e: &BallBasisElement, y: &[f64]) -> f64 {
        if self.d == 1 {
            let mut buf = vec![0.0; e.n + 1];
            self.radial[0].fill(y[0], &mut buf);
            return buf[e.n];
        }
        let k = e.harmonic_degree();
        let u = 2.0 * (y[0] * y[0] + y[1] * y[1]) - 1.0;
        let mut buf = vec![0.0; e.j + 1];
        self.radial[k].fill(u, &mut buf);
        disk_scale(k, self.mu) * buf[e.j] * solid_harmonic(e.tag, k, y)
    }

    /// Values of every element of degree `<= max_degree` at `y`, in the order
    /// of [`ball_elements`] for degrees `0, 1, ...`.
    pub fn eval_all(&self, y: &[f64]) -> Vec<f64> {
        let mut out = Vec::new();
        if self.d == 1 {
            out.resize(self.max_degree + 1, 0.0);
            self.radial[0].fill(y[0], &mut out);
            return out;
        }
        let u = 2.0 * (y[0] * y[0] + y[1] * y[1]) - 1.0;
        let radial: Vec<Vec<f64>> = self
            .radial
            .iter()
            .map(|fam| {
                let mut b = vec![0.0; fam.max_degree() + 1];
                fam.fill(u, &mut b);
                b
            })
            .collect();
        let harm: Vec<[f64; 2]> = (0..=self.max_degree)
            .map(|k| [solid_harmonic(1, k, y), solid_harmonic(2, k, y)])
            .collect();
        for n in 0..=self.max_degree {
            for e in ball_elements(2, n) {
                let k = e.harmonic_degree();
                let h = harm[k][(e.tag - 1) as usize];
                out.push(disk_scale(k, self.mu) * radial[k][e.j] * h);
            }
        }
        out
    }
}

/// Element of the `mu = 1/2` disk basis.
pub fn eval_disk_basis(e: &BallBasisElement, y: &[f64]) -> Result<f64> {
    e.validate(2)?;
    if y.len() != 2 || y[0] * y[0] + y[1] * y[1] > 1.0 + 1e-12 {
        return invalid("disk basis needs a point of the closed unit disk");
    }
    BallBasis::new(2, 0.5, e.n)?.eval(e, y)
}

/// Per-element comparison of the printed `mu = 1/2` constant against the
/// unit-norm scaling, with the quadrature norm of the printed-scaled element.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskConstantCheck {
    pub element: BallBasisElement,
    pub printed: f64,
    pub unit_norm: f64,
    /// `∫ (printed-scaled element)^2 w`, by quadrature.
    pub printed_norm_sq: f64,
}

/// Validates the printed disk constants up to `max_n` with `rule`, which
/// must be exact to degree `2 max_n` on `B^2` with `mu = 1/2`.
pub fn disk_constant_report(max_n: usize, rule: &QuadratureRule) -> Result<Vec<DiskConstantCheck>> {
    let basis = BallBasis::new(2, 0.5, max_n)?;
    let mut out = Vec::new();
    for n in 0..=max_n {
        for e in ball_elements(2, n) {
            let k = e.harmonic_degree();
            let unit = disk_scale(k, 0.5);
            let printed = printed_disk_constant(n, e.j);
            let ratio = printed / unit;
            let norm_sq = rule
                .points()
                .zip(rule.weights())
                .map(|(y, w)| w * (ratio * basis.eval_unchecked(&e, y)).powi(2))
                .sum();
            out.push(DiskConstantCheck { element: e, printed, unit_norm: unit, printed_norm_sq: norm_sq });
        }
    }
    Ok(out)
}

/// `sum_{|e| = n} s_e(y) s_e(y')` over the orthonormal basis.
pub fn ball_kernel_direct(n: usize, d: usize, mu: f64, y: &[f64], yp: &[f64]) -> Result<f64> {
    check_ball(d, mu)?;
    let basis = BallBasis::new(d, mu, n)?;
    Ok(ball_elements(d, n)
        .iter()
        .map(|e| basis.eval_unchecked(e, y) * basis.eval_unchecked(e, yp))
        .sum())
}

/// Degree slices `P_0(y,y'), ..., P_n(y,y')` of the ball reproducing kernel
/// through the Gegenbauer compact formula.
///
/// With `lambda = mu + (d-1)/2`, `a = <y,y'>`, `b = sqrt(1-|y|^2) sqrt(1-|y'|^2)`:
/// for `mu > 0`
/// `P_k = (1/mass) * c_mu ∫ Z_k(a + t b) (1-t^2)^{mu-1} dt`, `c_mu = 1/B(1/2, mu)`;
/// for `mu = 0`
/// `P_k = (1/mass) * (Z_k(a + b) + Z_k(a - b)) / 2`,
/// where `Z_k = (k+lambda)/lambda C_k^lambda` (`2 T_k` in the `lambda = 0` limit).
#[derive(Debug, Clone)]
pub struct BallKernel {
    d: usize,
    mu: f64,
    lambda: f64,
    max_degree: usize,
    inv_mass: f64,
    /// Gauss rule in `t` for `(1-t^2)^{mu-1}`, pre-scaled by `c_mu`.
    t_rule: Option<(Vec<f64>, Vec<f64>)>,
}

impl BallKernel {
    pub fn new(d: usize, mu: f64, max_degree: usize) -> Result<Self> {
        Self::with_t_nodes(d, mu, max_degree, (max_degree + 2) / 2 + 2)
    }

    /// As [`BallKernel::new`] with an explicit `t`-node count (ignored at `mu = 0`).
    pub fn with_t_nodes(d: usize, mu: f64, max_degree: usize, t_nodes: usize) -> Result<Self> {
        check_ball(d, mu)?;
        let lambda = mu + (d as f64 - 1.0) / 2.0;
        let t_rule = if mu > 0.0 {
            let rule = gauss_jacobi_rule(t_nodes, &JacobiParams::new(mu - 1.0, mu - 1.0)?)?;
            let c = 1.0 / beta_fn(0.5, mu);
            Some((rule.abscissae(), rule.weights().map(|w| w * c).collect()))
        } else {
            None
        };
        Ok(Self { d, mu, lambda, max_degree, inv_mass: 1.0 / ball_mass(d, mu), t_rule })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Fills `out[k]` with the degree-`k` slice at `(y, y')`; `out` may be
    /// shorter than `max_degree + 1`.
    pub fn fill(&self, y: &[f64], yp: &[f64], out: &mut [f64]) {
        let dot: f64 = y.iter().zip(yp).map(|(a, b)| a * b).sum();
        let ny: f64 = y.iter().map(|v| v * v).sum();
        let nyp: f64 = yp.iter().map(|v| v * v).sum();
        let b = ((1.0 - ny).max(0.0) * (1.0 - nyp).max(0.0)).sqrt();
        let mut z = vec![0.0; out.len()];
        out.iter_mut().for_each(|v| *v = 0.0);
        match &self.t_rule {
            Some((ts, ws)) => {
                for (t, w) in ts.iter().zip(ws) {
                    zonal_fill(self.lambda, (dot + t * b).clamp(-1.0, 1.0), &mut z);
                    for (o, zk) in out.iter_mut().zip(&z) {
                        *o += w * zk;
                    }
                }
            }
            None => {
                for arg in [dot + b, dot - b] {
                    zonal_fill(self.lambda, arg.clamp(-1.0, 1.0), &mut z);
                    for (o, zk) in out.iter_mut().zip(&z) {
                        *o += 0.5 * zk;
                    }
                }
            }
        }
        for o in out.iter_mut() {
            *o *= self.inv_mass;
        }
    }

    pub fn slices(&self, y: &[f64], yp: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.max_degree + 1];
        self.fill(y, yp, &mut out);
        out
    }
}

/// Degree-`n` ball kernel through the compact formula.
pub fn ball_kernel_compact(n: usize, d: usize, mu: f64, y: &[f64], yp: &[f64]) -> Result<f64> {
    let k = BallKernel::new(d, mu, n)?;
    Ok(k.slices(y, yp)[n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::ball_rule;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_disk_point(rng: &mut StdRng) -> [f64; 2] {
        let r = rng.random::<f64>().sqrt();
        let t = rng.random::<f64>() * 2.0 * PI;
        [r * t.cos(), r * t.sin()]
    }

    #[test]
    fn harmonic_examples() {
        let t = 0.77;
        assert!((eval_spherical_harmonic(2, 0, t).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-15);
        assert_eq!(eval_spherical_harmonic(1, 0, t).unwrap(), 0.0);
        assert!(eval_spherical_harmonic(3, 1, t).is_err());
        // 64-point trapezoid is exact for trigonometric degree 6
        let m = 64;
        let s: f64 = (0..m)
            .map(|i| eval_spherical_harmonic(2, 3, 2.0 * PI * i as f64 / m as f64).unwrap().powi(2))
            .sum::<f64>()
            * 2.0
            * PI
            / m as f64;
        assert!((s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn element_validation() {
        assert!(BallBasisElement::disk(4, 2, 2).is_ok());
        assert!(BallBasisElement::disk(4, 2, 1).is_err());
        assert!(BallBasisElement::disk(4, 3, 1).is_err());
        assert!(BallBasisElement::disk(3, 1, 0).is_err());
        assert!(BallBasisElement { n: 2, j: 1, tag: 0 }.validate(1).is_err());
        for n in 0..9 {
            assert_eq!(ball_elements(2, n).len(), n + 1);
        }
    }

    #[test]
    fn constant_disk_element() {
        let e = BallBasisElement::disk(0, 0, 2).unwrap();
        let v = eval_disk_basis(&e, &[0.0, 0.0]).unwrap();
        assert!((v - 1.0 / PI.sqrt()).abs() < 1e-15);
        assert!(eval_disk_basis(&e, &[1.0, 1.0]).is_err());
    }

    fn gram(d: usize, mu: f64, max_n: usize) -> f64 {
        let basis = BallBasis::new(d, mu, max_n).unwrap();
        let rule = ball_rule(d, mu, 2 * max_n + 2).unwrap();
        let vals: Vec<Vec<f64>> = rule.points().map(|y| basis.eval_all(y)).collect();
        let size = vals[0].len();
        let mut worst: f64 = 0.0;
        for a in 0..size {
            for b in 0..size {
                let g: f64 = vals.iter().zip(rule.weights()).map(|(v, w)| w * v[a] * v[b]).sum();
                let t = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((g - t).abs());
            }
        }
        worst
    }

    #[test]
    fn disk_gram_is_identity() {
        assert!(gram(2, 0.5, 6) < 1e-9);
        assert!(gram(2, 0.0, 6) < 1e-9);
        assert!(gram(2, 1.7, 5) < 1e-9);
        assert!(gram(1, 0.0, 10) < 1e-12);
        assert!(gram(1, 1.25, 10) < 1e-12);
    }

    #[test]
    fn eval_all_order_matches_eval() {
        let basis = BallBasis::new(2, 0.5, 5).unwrap();
        let y = [0.3, -0.45];
        let all = basis.eval_all(&y);
        let elems: Vec<_> = (0..=5).flat_map(|n| ball_elements(2, n)).collect();
        assert_eq!(all.len(), elems.len());
        for (e, v) in elems.iter().zip(&all) {
            assert!((basis.eval(e, &y).unwrap() - v).abs() < 1e-15);
        }
    }

    #[test]
    fn printed_constant_report() {
        let rule = ball_rule(2, 0.5, 14).unwrap();
        for c in disk_constant_report(6, &rule).unwrap() {
            if c.element.harmonic_degree() == 0 {
                assert!((c.printed_norm_sq - 2.0).abs() < 1e-10);
            } else {
                assert!((c.printed / c.unit_norm - 1.0).abs() < 1e-15);
                assert!((c.printed_norm_sq - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cheb_basis() {
        assert!((eval_cheb_basis(0, 0.3) - 1.0 / PI.sqrt()).abs() < 1e-15);
        assert!((eval_cheb_basis(2, 1.0) - (2.0 / PI).sqrt()).abs() < 1e-15);
        let basis = BallBasis::new(1, 0.0, 10).unwrap();
        for &y in &[-0.9, 0.1, 0.6] {
            let all = basis.eval_all(&[y]);
            for n in 0..=10 {
                assert!((all[n] - eval_cheb_basis(n, y)).abs() < 1e-13);
            }
        }
        let rule = ball_rule(1, 0.0, 21).unwrap();
        for a in 0..=10 {
            for b in 0..=10 {
                let g: f64 = rule
                    .points()
                    .zip(rule.weights())
                    .map(|(y, w)| w * eval_cheb_basis(a, y[0]) * eval_cheb_basis(b, y[0]))
                    .sum();
                let t = if a == b { 1.0 } else { 0.0 };
                assert!((g - t).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn direct_kernel_examples() {
        let v = ball_kernel_direct(0, 2, 0.5, &[0.1, 0.2], &[-0.3, 0.5]).unwrap();
        assert!((v - 1.0 / PI).abs() < 1e-14);
        let v = ball_kernel_direct(3, 1, 0.0, &[1.0], &[1.0]).unwrap();
        assert!((v - 2.0 / PI).abs() < 1e-13);
        let a = ball_kernel_direct(4, 2, 0.5, &[0.1, 0.2], &[-0.3, 0.5]).unwrap();
        let b = ball_kernel_direct(4, 2, 0.5, &[-0.3, 0.5], &[0.1, 0.2]).unwrap();
        assert!((a - b).abs() < 1e-14);
        assert!(ball_kernel_direct(1, 3, 0.5, &[0.0; 3], &[0.0; 3]).is_err());
    }

    #[test]
    fn compact_matches_direct_on_disk() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let y = random_disk_point(&mut rng);
            let yp = random_disk_point(&mut rng);
            for &mu in &[0.5, 0.0, 1.3] {
                let kern = BallKernel::new(2, mu, 10).unwrap();
                let s = kern.slices(&y, &yp);
                for n in 0..=10 {
                    let direct = ball_kernel_direct(n, 2, mu, &y, &yp).unwrap();
                    assert!((s[n] - direct).abs() < 1e-8, "mu={mu} n={n}");
                }
            }
        }
    }

    #[test]
    fn compact_matches_direct_on_interval() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let y = [rng.random_range(-1.0..1.0)];
            let yp = [rng.random_range(-1.0..1.0)];
            for &mu in &[0.0, 0.5, 2.0] {
                for n in 0..=10 {
                    let c = ball_kernel_compact(n, 1, mu, &y, &yp).unwrap();
                    let d = ball_kernel_direct(n, 1, mu, &y, &yp).unwrap();
                    assert!((c - d).abs() < 1e-10, "mu={mu} n={n}");
                }
            }
        }
        let c = ball_kernel_compact(0, 1, 0.0, &[0.3], &[0.8]).unwrap();
        assert!((c - 1.0 / PI).abs() < 1e-15);
        let c = ball_kernel_compact(0, 2, 1.5, &[0.3, 0.1], &[0.0, 0.8]).unwrap();
        assert!((c - 2.0 / PI).abs() < 1e-14);
    }

    #[test]
    fn t_rule_is_exact() {
        let mut rng = StdRng::seed_from_u64(3);
        for &mu in &[0.5, 1.0, 2.5] {
            let base = BallKernel::new(2, mu, 12).unwrap();
            let doubled = BallKernel::with_t_nodes(2, mu, 12, 2 * ((12 + 2) / 2 + 2)).unwrap();
            for _ in 0..5 {
                let y = random_disk_point(&mut rng);
                let yp = random_disk_point(&mut rng);
                let (a, b) = (base.slices(&y, &yp), doubled.slices(&y, &yp));
                let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                for k in 0..=12 {
                    assert!((a[k] - b[k]).abs() < 1e-12 * scale, "mu={mu} k={k} {} {}", a[k], b[k]);
                }
            }
        }
    }

    #[test]
    fn rotational_covariance() {
        let (c, s) = (0.83f64.cos(), 0.83f64.sin());
        let rot = |p: [f64; 2]| [c * p[0] - s * p[1], s * p[0] + c * p[1]];
        let y = [0.2, 0.55];
        let yp = [-0.6, 0.1];
        for n in 0..8 {
            let a = ball_kernel_direct(n, 2, 0.5, &y, &yp).unwrap();
            let b = ball_kernel_direct(n, 2, 0.5, &rot(y), &rot(yp)).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn reproducing_property_and_positivity() {
        let mut rng = StdRng::seed_from_u64(5);
        for &(d, mu) in &[(1usize, 0.0), (1, 0.8), (2, 0.5), (2, 0.0), (2, 2.0)] {
            let n = 6;
            let kern = BallKernel::new(d, mu, n).unwrap();
            let rule = ball_rule(d, mu, 2 * n).unwrap();
            // random polynomial of degree <= n in d variables
            let coeffs: Vec<f64> = (0..(n + 1) * (n + 1)).map(|_| rng.random_range(-1.0..1.0)).collect();
            let q = |y: &[f64]| {
                let mut acc = 0.0;
                for a in 0..=n {
                    for b in 0..=(n - a) {
                        let yb = if d == 2 { y[1].powi(b as i32) } else if b == 0 { 1.0 } else { 0.0 };
                        acc += coeffs[a * (n + 1) + b] * y[0].powi(a as i32) * yb;
                    }
                }
                acc
            };
            for _ in 0..4 {
                let yp: Vec<f64> = if d == 2 {
                    random_disk_point(&mut rng).to_vec()
                } else {
                    vec![rng.random_range(-1.0..1.0)]
                };
                let val: f64 = rule
                    .points()
                    .zip(rule.weights())
                    .map(|(y, w)| w * q(y) * kern.slices(y, &yp).iter().sum::<f64>())
                    .sum();
                assert!((val - q(&yp)).abs() < 1e-8, "d={d} mu={mu}");
                assert!(kern.slices(&yp, &yp).iter().sum::<f64>() > 0.0);
            }
        }
    }

    #[test]
    fn ball_masses() {
        assert!((ball_mass(2, 0.5) - PI).abs() < 1e-14);
        assert!((ball_mass(2, 1.5) - PI / 2.0).abs() < 1e-14);
        assert!((ball_mass(1, 0.0) - PI).abs() < 1e-14);
        assert!((ball_mass(1, 0.5) - 2.0).abs() < 1e-14);
    }
}
