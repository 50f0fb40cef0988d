//! Floating-point evaluation of eta products on the upper half-plane and numerical
//! measurement of multipliers `v(L) = f(L tau) / ((c tau + d)^k f(tau))` on Gamma0(N).

use std::collections::HashSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eta::EtaProduct;

/// Smallest imaginary part accepted by [`eval_eta_product`].
pub const MIN_IM: f64 = 0.5;
/// Smallest number of product terms accepted by [`eval_eta_product`].
pub const MIN_TERMS: usize = 50;
/// Cap on the adaptive term count used for transformed points near the real axis.
pub const MAX_ADAPTIVE_TERMS: usize = 2_000_000;
/// Target bound on the dropped tail `sum_{n > N} |q|^n`.
const TAIL_EPS: f64 = 1e-18;
const SINGULAR_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperHalfPoint {
    pub re: f64,
    pub im: f64,
}

impl UpperHalfPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if im.is_nan() || im <= 0.0 || !re.is_finite() || !im.is_finite() {
            return Err(Error::ConvergenceDomain { im });
        }
        Ok(Self { re, im })
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GammaZeroElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GammaZeroElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64, level: u64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::InvalidArgument(format!(
                "det of ({a},{b};{c},{d}) is not 1"
            )));
        }
        if level == 0 || c.rem_euclid(level as i64) != 0 {
            return Err(Error::InvalidArgument(format!(
                "c = {c} is not divisible by N = {level}"
            )));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    pub fn compose(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn act(&self, tau: Complex64) -> Complex64 {
        (tau * self.a as f64 + self.b as f64) / (tau * self.c as f64 + self.d as f64)
    }

    pub fn automorphy(&self, tau: Complex64) -> Complex64 {
        tau * self.c as f64 + self.d as f64
    }
}

/// Terms needed so that the dropped tail of `sum log(1 - q^n)` is below `TAIL_EPS`.
fn adaptive_terms(q_abs: f64, floor: usize) -> Result<usize> {
    if q_abs <= 0.0 {
        return Ok(floor);
    }
    // |tail| <= |q|^{N+1} / (1 - |q|)^2 for the log series
    let denom = (1.0 - q_abs).powi(2);
    let n = ((TAIL_EPS * denom).ln() / q_abs.ln()).ceil();
    if !n.is_finite() || n > MAX_ADAPTIVE_TERMS as f64 {
        return Err(Error::ConvergenceDomain {
            im: -q_abs.ln() / (2.0 * PI),
        });
    }
    Ok(floor.max(n as usize))
}

/// `log eta(m tau)` with the branch fixed by `q^{1/24} = exp(2 pi i m tau / 24)` and a sum of
/// principal logarithms. Returns the value and the number of terms used.
fn log_eta(tau: Complex64, m: u64, floor: usize) -> Result<(Complex64, usize)> {
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let mt = tau * m as f64;
    let q_abs = (-2.0 * PI * mt.im).exp();
    let terms = adaptive_terms(q_abs, floor)?;
    let mut acc = two_pi_i * mt / 24.0;
    for n in 1..=terms {
        let qn = (two_pi_i * mt * n as f64).exp();
        acc += (Complex64::new(1.0, 0.0) - qn).ln();
    }
    Ok((acc, terms))
}

/// `log f(tau)` for any point of the upper half-plane; the term count grows with `1/Im(tau)`.
pub fn log_eta_product(
    p: &EtaProduct,
    tau: UpperHalfPoint,
    terms: usize,
) -> Result<(Complex64, usize)> {
    let z = tau.as_complex();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut used = 0;
    for (&m, &a) in p.exponents() {
        if a == 0 {
            continue;
        }
        let (l, t) = log_eta(z, m, terms)?;
        acc += l * a as f64;
        used = used.max(t);
    }
    Ok((acc, used))
}

/// `f(tau)` by truncated products with at least `terms` factors; requires `Im(tau) >= 0.5`.
pub fn eval_eta_product(p: &EtaProduct, tau: UpperHalfPoint, terms: usize) -> Result<Complex64> {
    if tau.im < MIN_IM {
        return Err(Error::ConvergenceDomain { im: tau.im });
    }
    if terms < MIN_TERMS {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_TERMS} product terms are required"
        )));
    }
    Ok(log_eta_product(p, tau, terms)?.0.exp())
}

/// Upper bound `max_m |q^m|^terms` on the relative truncation error at `tau`.
pub fn truncation_bound(p: &EtaProduct, tau: UpperHalfPoint, terms: usize) -> f64 {
    let m = p
        .exponents()
        .iter()
        .filter(|(_, &a)| a != 0)
        .map(|(&m, _)| m)
        .min()
        .unwrap_or(1);
    (-2.0 * PI * m as f64 * tau.im * terms as f64).exp()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultiplierMeasurement {
    pub value: Complex64,
    /// `max_i |r(tau_i) - value|`.
    pub residual: f64,
    /// Largest number of product terms needed at any transformed point.
    pub terms_used: usize,
}

/// Measures `f(L tau) / ((c tau + d)^k f(tau))` at each point with `k` the weight of `p`.
pub fn measure_multiplier(
    p: &EtaProduct,
    l: &GammaZeroElement,
    taus: &[UpperHalfPoint],
    terms: usize,
) -> Result<MultiplierMeasurement> {
    let k = p.weight().to_f64().expect("finite weight");
    measure_multiplier_with_weight(p, l, taus, terms, k)
}

/// As [`measure_multiplier`] with an explicit weight, for control experiments.
pub fn measure_multiplier_with_weight(
    p: &EtaProduct,
    l: &GammaZeroElement,
    taus: &[UpperHalfPoint],
    terms: usize,
    weight: f64,
) -> Result<MultiplierMeasurement> {
    if taus.len() < 2 {
        return Err(Error::InvalidArgument(
            "at least two test points are required".into(),
        ));
    }
    if let Some(bad) = taus.iter().find(|t| t.im < MIN_IM) {
        return Err(Error::ConvergenceDomain { im: bad.im });
    }
    let mut ratios = Vec::with_capacity(taus.len());
    let mut terms_used = terms;
    for &tau in taus {
        let (lf, _) = log_eta_product(p, tau, terms)?;
        if lf.re.exp() < SINGULAR_EPS {
            return Err(Error::NumericallySingular {
                modulus: lf.re.exp(),
            });
        }
        let z = tau.as_complex();
        let lt = UpperHalfPoint::from_complex(l.act(z))?;
        let (lflt, used) = log_eta_product(p, lt, terms)?;
        terms_used = terms_used.max(used);
        // principal branch of (c tau + d)^k
        let log_j = l.automorphy(z).ln() * weight;
        ratios.push((lflt - lf - log_j).exp());
    }
    let value = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
    let residual = ratios
        .iter()
        .map(|r| (r - value).norm())
        .fold(0.0, f64::max);
    Ok(MultiplierMeasurement {
        value,
        residual,
        terms_used,
    })
}

/// Deterministic sample of distinct elements of Gamma0(N) with entries bounded by `bound`.
pub fn random_gamma0(
    level: u64,
    bound: i64,
    count: usize,
    seed: u64,
) -> Result<Vec<GammaZeroElement>> {
    if level == 0 || bound < 1 {
        return Err(Error::EmptySample { level, bound });
    }
    let n = level as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let cmax = bound / n;
    for _ in 0..count.saturating_mul(200).max(1000) {
        if out.len() >= count {
            break;
        }
        let c = n * rng.gen_range(-cmax..=cmax);
        let d = rng.gen_range(-bound..=bound);
        let Some(el) = complete_row(c, d, bound, &mut rng) else {
            continue;
        };
        if seen.insert(el) {
            out.push(el);
        }
    }
    if out.is_empty() {
        return Err(Error::EmptySample { level, bound });
    }
    Ok(out)
}

/// Picks `(a, b)` with `ad - bc = 1` and both entries bounded, uniformly among solutions.
fn complete_row(c: i64, d: i64, bound: i64, rng: &mut ChaCha8Rng) -> Option<GammaZeroElement> {
    let g = c.extended_gcd(&d);
    if g.gcd != 1 {
        return None;
    }
    // x c + y d = 1, so a = y, b = -x is one solution; the rest are (a + t c, b + t d)
    let (a0, b0) = (g.y, -g.x);
    let sols: Vec<(i64, i64)> = (-2 * bound - 2..=2 * bound + 2)
        .map(|t| (a0 + t * c, b0 + t * d))
        .filter(|(a, b)| a.abs() <= bound && b.abs() <= bound)
        .collect();
    let sols = if c == 0 && d == 0 {
        Vec::new()
    } else {
        dedup(sols)
    };
    if sols.is_empty() {
        return None;
    }
    let (a, b) = sols[rng.gen_range(0..sols.len())];
    Some(GammaZeroElement { a, b, c, d })
}

fn dedup(mut v: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    v.sort();
    v.dedup();
    v
}

pub fn default_points() -> Vec<UpperHalfPoint> {
    vec![
        UpperHalfPoint { re: 0.3, im: 1.1 },
        UpperHalfPoint { re: -0.2, im: 1.7 },
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixResult {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub value_re: f64,
    pub value_im: f64,
    pub residual: f64,
    pub modulus_error: f64,
    /// Residuals with the weight shifted by -1/2 and +1/2; only measured when `c != 0`.
    pub wrong_weight_residuals: Option<[f64; 2]>,
    /// `|v^24 - 1|` for integer weight.
    pub pow24_error: Option<f64>,
    pub terms_used: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModularReport {
    pub row_id: u8,
    pub level: u64,
    pub weight_num: i64,
    pub weight_den: i64,
    pub points: Vec<UpperHalfPoint>,
    pub terms: usize,
    pub tolerance: f64,
    pub wrong_weight_threshold: f64,
    pub matrices: Vec<MatrixResult>,
    pub pass: bool,
}

pub const WRONG_WEIGHT_THRESHOLD: f64 = 1e-3;

/// Measures multipliers of `p` on the given matrices, with the shifted-weight control.
#[allow(clippy::too_many_arguments)]
pub fn modular_report(
    row_id: u8,
    p: &EtaProduct,
    matrices: &[GammaZeroElement],
    points: &[UpperHalfPoint],
    terms: usize,
    tol: f64,
) -> Result<ModularReport> {
    let w: Rational64 = p.weight();
    let k = w.to_f64().expect("finite");
    let mut results = Vec::with_capacity(matrices.len());
    for l in matrices {
        let m = measure_multiplier(p, l, points, terms)?;
        let modulus_error = (m.value.norm() - 1.0).abs();
        let wrong = if l.c != 0 {
            let lo = measure_multiplier_with_weight(p, l, points, terms, k - 0.5)?.residual;
            let hi = measure_multiplier_with_weight(p, l, points, terms, k + 0.5)?.residual;
            Some([lo, hi])
        } else {
            None
        };
        let pow24_error = w.is_integer().then(|| (m.value.powu(24) - 1.0).norm());
        let pass = m.residual < tol
            && modulus_error <= tol
            && wrong
                .is_none_or(|[lo, hi]| lo > WRONG_WEIGHT_THRESHOLD && hi > WRONG_WEIGHT_THRESHOLD)
            && pow24_error.is_none_or(|e| e < tol * 100.0);
        results.push(MatrixResult {
            a: l.a,
            b: l.b,
            c: l.c,
            d: l.d,
            value_re: m.value.re,
            value_im: m.value.im,
            residual: m.residual,
            modulus_error,
            wrong_weight_residuals: wrong,
            pow24_error,
            terms_used: m.terms_used,
            pass,
        });
    }
    let pass = results.iter().all(|r| r.pass);
    Ok(ModularReport {
        row_id,
        level: p.level(),
        weight_num: *w.numer(),
        weight_den: *w.denom(),
        points: points.to_vec(),
        terms,
        tolerance: tol,
        wrong_weight_threshold: WRONG_WEIGHT_THRESHOLD,
        matrices: results,
        pass,
    })
}
