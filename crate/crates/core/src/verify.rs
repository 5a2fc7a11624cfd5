//! Identity suite behind `cesaro verify`. Every check returns its largest
//! deviation and the tolerance it was held to.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::analysis::dlambda_identity_check;
use crate::ballbasis::{ball_kernel_compact, ball_kernel_direct};
use crate::cylinder::{CylinderBasis, CylinderKernel, CylinderSpace};
use crate::error::{invalid, Error, Result};
use crate::orthopoly::{cesaro_coeff, CesaroPlan};
use crate::quadrature::cylinder_rule;

/// Factor applied to one basis element by the sensitivity hook.
pub const PERTURBATION: f64 = 1.0 + 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Gram,
    CompactKernel,
    Reproducing,
    CesaroCoeff,
    DeltaZero,
    Dlambda,
}

impl Check {
    pub const ALL: [Check; 6] =
        [Check::Gram, Check::CompactKernel, Check::Reproducing, Check::CesaroCoeff, Check::DeltaZero, Check::Dlambda];

    pub fn name(self) -> &'static str {
        match self {
            Check::Gram => "gram",
            Check::CompactKernel => "compact_kernel",
            Check::Reproducing => "reproducing",
            Check::CesaroCoeff => "cesaro_coeff",
            Check::DeltaZero => "delta_zero",
            Check::Dlambda => "dlambda",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown check `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub check: Check,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub seconds: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

fn gram_spaces() -> Vec<CylinderSpace> {
    vec![
        CylinderSpace::chebyshev(),
        CylinderSpace::new(2, 1, 0.5, vec![0.0], vec![0.0]).expect("valid space"),
    ]
}

fn random_point(space: &CylinderSpace, rng: &mut StdRng) -> (Vec<f64>, Vec<f64>) {
    let x = (0..space.m()).map(|_| rng.random_range(-1.0..1.0)).collect();
    (x, random_ball_point(space.d(), rng))
}

fn random_ball_point(d: usize, rng: &mut StdRng) -> Vec<f64> {
    if d == 1 {
        vec![rng.random_range(-1.0..1.0)]
    } else {
        let r = rng.random::<f64>().sqrt();
        let t = rng.random::<f64>() * 2.0 * PI;
        vec![r * t.cos(), r * t.sin()]
    }
}

/// `max |G - I|` for the basis through total degree `n`. With `perturb`, the
/// second basis element is scaled by [`PERTURBATION`].
pub fn gram_deviation(space: &CylinderSpace, n: usize, perturb: bool) -> Result<f64> {
    let basis = CylinderBasis::new(space, n)?;
    let rule = cylinder_rule(space, 2 * n)?;
    let m = space.m();
    let vals: Vec<Vec<f64>> = rule
        .points()
        .map(|p| {
            let mut v = basis.eval_all(&p[..m], &p[m..]);
            if perturb && v.len() > 1 {
                v[1] *= PERTURBATION;
            }
            v
        })
        .collect();
    let mut worst: f64 = 0.0;
    for a in 0..basis.len() {
        for b in a..basis.len() {
            let g: f64 = vals.iter().zip(rule.weights()).map(|(v, w)| w * v[a] * v[b]).sum();
            worst = worst.max((g - if a == b { 1.0 } else { 0.0 }).abs());
        }
    }
    Ok(worst)
}

fn check_gram(perturb: bool) -> Result<f64> {
    gram_spaces().iter().map(|s| gram_deviation(s, 6, perturb)).try_fold(0.0, |a, v| Ok(f64::max(a, v?)))
}

/// Compact vs direct ball kernel, `n <= 10`, 20 random pairs per space.
fn check_compact() -> Result<f64> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut worst: f64 = 0.0;
    for &(d, mu) in &[(1usize, 0.0), (1, 0.8), (2, 0.5), (2, 0.0), (2, 1.5)] {
        for _ in 0..20 {
            let y = random_ball_point(d, &mut rng);
            let yp = random_ball_point(d, &mut rng);
            for n in 0..=10 {
                let a = ball_kernel_compact(n, d, mu, &y, &yp)?;
                let b = ball_kernel_direct(n, d, mu, &y, &yp)?;
                worst = worst.max((a - b).abs());
            }
        }
    }
    Ok(worst)
}

fn monomials(dim: usize, deg: usize) -> Vec<Vec<i32>> {
    fn rec(dim: usize, left: usize, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if cur.len() == dim {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e as i32);
            rec(dim, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, deg, &mut Vec::new(), &mut out);
    out
}

/// `∫ K_n(., p') P w = P(p')` for random `P` of degree `n`, `n in {1, 3, 5}`.
fn check_reproducing() -> Result<f64> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let mut spaces = gram_spaces();
    spaces.push(CylinderSpace::new(1, 2, 1.2, vec![0.3, -0.5], vec![-0.2, 0.5])?);
    let mut worst: f64 = 0.0;
    for sp in &spaces {
        let m = sp.m();
        for n in [1usize, 3, 5] {
            let poly: Vec<(f64, Vec<i32>)> =
                monomials(m + sp.d(), n).into_iter().map(|e| (rng.random_range(-1.0..1.0), e)).collect();
            let eval = |x: &[f64], y: &[f64]| -> f64 {
                poly.iter()
                    .map(|(c, e)| c * x.iter().chain(y).zip(e).map(|(v, &k)| v.powi(k)).product::<f64>())
                    .sum()
            };
            let kern = CylinderKernel::new(sp, n)?;
            let rule = cylinder_rule(sp, 2 * n)?;
            for _ in 0..3 {
                let (xp, yp) = random_point(sp, &mut rng);
                let v: f64 = rule
                    .points()
                    .zip(rule.weights())
                    .map(|(p, w)| w * eval(&p[..m], &p[m..]) * kern.kernel(&p[..m], &xp, &p[m..], &yp))
                    .sum();
                worst = worst.max((v - eval(&xp, &yp)).abs());
            }
        }
    }
    Ok(worst)
}

/// Relative error of `c_{n,j}^delta` against `A_{n-j}^delta / A_n^delta`,
/// `A_k^delta = binom(k + delta, k)`.
fn check_cesaro_coeff() -> Result<f64> {
    let binom = |k: usize, delta: f64| (1..=k).fold(1.0, |acc, i| acc * (delta + i as f64) / i as f64);
    let mut worst: f64 = 0.0;
    for &delta in &[0.0, 0.5, 1.0, 2.3] {
        for n in 0..=50 {
            for j in 0..=n {
                let oracle = binom(n - j, delta) / binom(n, delta);
                let c = cesaro_coeff(n, j, delta)?;
                worst = worst.max((c - oracle).abs() / oracle.abs().max(f64::MIN_POSITIVE));
            }
        }
    }
    Ok(worst)
}

/// `K_n^0` and `K_n` must agree bit for bit; the deviation counts mismatches.
fn check_delta_zero() -> Result<f64> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    let mut spaces = gram_spaces();
    spaces.push(CylinderSpace::new(1, 2, 0.0, vec![-0.5, -0.5], vec![-0.5, -0.5])?);
    let mut mismatches = 0usize;
    for sp in &spaces {
        for n in [0usize, 1, 4, 9] {
            let kern = CylinderKernel::new(sp, n)?;
            let plan = CesaroPlan::new(n, 0.0)?;
            for _ in 0..10 {
                let (x, y) = random_point(sp, &mut rng);
                let (xp, yp) = random_point(sp, &mut rng);
                let a = kern.kernel(&x, &xp, &y, &yp);
                let b = kern.cesaro(&plan, &x, &xp, &y, &yp);
                if a.to_bits() != b.to_bits() {
                    mismatches += 1;
                }
            }
        }
    }
    Ok(mismatches as f64)
}

fn check_dlambda() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &lambda in &[1.0, 1.5, 3.0] {
        for &(v, u) in &[(0.3, -0.4), (0.0, 0.0), (0.85, 0.6), (-0.7, 0.2)] {
            let (est, exact) = dlambda_identity_check(lambda, v, u, 200)?;
            worst = worst.max((est - exact).abs());
        }
    }
    Ok(worst)
}

pub fn tolerance(check: Check) -> f64 {
    match check {
        Check::Gram => 1e-9,
        Check::CompactKernel => 1e-8,
        Check::Reproducing => 1e-8,
        Check::CesaroCoeff => 1e-12,
        Check::DeltaZero => 0.0,
        Check::Dlambda => 1e-5,
    }
}

pub fn run_check(check: Check, perturb_basis: bool) -> Result<CheckResult> {
    let start = Instant::now();
    let max_deviation = match check {
        Check::Gram => check_gram(perturb_basis)?,
        Check::CompactKernel => check_compact()?,
        Check::Reproducing => check_reproducing()?,
        Check::CesaroCoeff => check_cesaro_coeff()?,
        Check::DeltaZero => check_delta_zero()?,
        Check::Dlambda => check_dlambda()?,
    };
    Ok(CheckResult { check, max_deviation, tolerance: tolerance(check), seconds: start.elapsed().as_secs_f64() })
}

/// Runs `checks` in order. An empty selection is an error.
pub fn run_checks(checks: &[Check], perturb_basis: bool) -> Result<Vec<CheckResult>> {
    if checks.is_empty() {
        return invalid("no checks selected");
    }
    checks.iter().map(|&c| run_check(c, perturb_basis)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
        }
        assert!("nope".parse::<Check>().is_err());
    }

    #[test]
    fn empty_selection_is_error() {
        assert!(run_checks(&[], false).is_err());
    }

    #[test]
    fn perturbation_breaks_gram() {
        let ok = run_check(Check::Gram, false).unwrap();
        assert!(ok.passed(), "{ok:?}");
        let bad = run_check(Check::Gram, true).unwrap();
        assert!(!bad.passed());
        assert!(bad.max_deviation > 1e-3);
    }

    #[test]
    fn cheap_checks_pass() {
        for c in [Check::CesaroCoeff, Check::DeltaZero, Check::Dlambda] {
            let r = run_check(c, false).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}
