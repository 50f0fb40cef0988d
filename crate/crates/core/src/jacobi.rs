//! The weak Jacobi form `phi_{-2,1}` via its product form, and the genus basis
//! `t^h` with `t = y + 2 + y^{-1} = (y^{1/2} + y^{-1/2})^2`.
//!
//! Half-integer powers of `y` never appear: every expression is written in terms of
//! `t` or `(y^{1/2} - y^{-1/2})^2 = y - 2 + y^{-1}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eta::euler_product_qm;
use crate::series::{LaurentPoly, TwoVarSeries};

/// `(y^{1/2} - y^{-1/2})^2 = y - 2 + y^{-1}`.
pub fn phi_prefactor() -> LaurentPoly {
    LaurentPoly::from_i64s(-1, &[1, -2, 1])
}

/// `phi_{-2,1}(q, y) = (y - 2 + y^{-1}) prod (1 - y q^n)^2 (1 - y^{-1} q^n)^2 / (1 - q^n)^4`.
pub fn phi_m2_1(truncation: usize) -> TwoVarSeries {
    let denom = euler_product_qm(1, truncation)
        .pow(-4)
        .expect("leading coefficient is 1");
    let mut s = TwoVarSeries::from_int_series(&denom).expect("integer offset");
    for n in 1..truncation {
        for _ in 0..2 {
            s.mul_binomial(-1, 1, n);
            s.mul_binomial(-1, -1, n);
        }
    }
    s.mul_laurent(&phi_prefactor())
}

/// `-t / phi_{-2,1}(q^k, -y) = prod (1 - q^{kn})^4 / ((1 + y q^{kn})^2 (1 + y^{-1} q^{kn})^2)`.
///
/// Substituting `y -> -y` turns the prefactor of `phi_{-2,1}` into `-t`, which cancels
/// against the `-t` numerator, so no division by a non-unit is needed.
pub fn neg_t_over_phi(k: usize, truncation: usize) -> TwoVarSeries {
    assert!(k >= 1);
    let num = euler_product_qm(k, truncation)
        .pow(4)
        .expect("nonnegative power");
    let mut s = TwoVarSeries::from_int_series(&num).expect("integer offset");
    let mut m = k;
    while m < truncation {
        for _ in 0..2 {
            s.div_binomial(1, 1, m);
            s.div_binomial(1, -1, m);
        }
        m += k;
    }
    s
}

/// Integers `n_h` with `p = sum_h n_h t^h`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<usize, String>", into = "BTreeMap<usize, String>")]
pub struct GenusExpansion {
    coeffs: BTreeMap<usize, BigInt>,
}

impl GenusExpansion {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, BigInt)>) -> Self {
        Self {
            coeffs: pairs.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// `n_h`, zero when absent.
    pub fn get(&self, h: usize) -> BigInt {
        self.coeffs.get(&h).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, BigInt> {
        &self.coeffs
    }

    pub fn max_genus(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn reconstruct(&self) -> LaurentPoly {
        let t = LaurentPoly::genus_t();
        self.coeffs
            .iter()
            .fold(LaurentPoly::zero(), |acc, (&h, c)| {
                acc.add(&t.pow(h as u32).scale(c))
            })
    }
}

impl From<GenusExpansion> for BTreeMap<usize, String> {
    fn from(g: GenusExpansion) -> Self {
        g.coeffs
            .into_iter()
            .map(|(h, c)| (h, c.to_string()))
            .collect()
    }
}

impl TryFrom<BTreeMap<usize, String>> for GenusExpansion {
    type Error = Error;
    fn try_from(m: BTreeMap<usize, String>) -> Result<Self> {
        let pairs = m
            .into_iter()
            .map(|(h, s)| {
                s.parse::<BigInt>()
                    .map(|c| (h, c))
                    .map_err(|e| Error::Parse(format!("n_{h}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_pairs(pairs))
    }
}

/// Rewrites a palindromic Laurent polynomial in the basis `t^h`.
///
/// `t^h` has top term `y^h` with coefficient 1, so stripping the top degree
/// each step stays in the integers.
pub fn genus_expand(p: &LaurentPoly) -> Result<GenusExpansion> {
    if !p.is_palindromic() {
        return Err(Error::NotPalindromic);
    }
    let t = LaurentPoly::genus_t();
    let mut rest = p.clone();
    let mut pairs = Vec::new();
    while let Some(h) = rest.hi() {
        debug_assert!(h >= 0);
        let c = rest.coeff(h);
        rest = rest.sub(&t.pow(h as u32).scale(&c));
        pairs.push((h as usize, c));
    }
    Ok(GenusExpansion::from_pairs(pairs))
}

/// `p(-1)`, which equals `n_0` because `t` vanishes at `y = -1`.
pub fn genus_evaluate_at_minus_one(p: &LaurentPoly) -> Result<BigInt> {
    if !p.is_palindromic() {
        return Err(Error::NotPalindromic);
    }
    p.eval_unit(-1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(lo: i64, c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_i64s(lo, c)
    }

    fn ge(pairs: &[(usize, i64)]) -> GenusExpansion {
        GenusExpansion::from_pairs(pairs.iter().map(|&(h, c)| (h, BigInt::from(c))))
    }

    /// Brute force: multiply out the finite product with a map keyed by (q, y) exponents.
    fn phi_brute(order: usize) -> BTreeMap<(usize, i64), i64> {
        type Poly = BTreeMap<(usize, i64), i64>;
        fn mul(a: &Poly, b: &Poly, order: usize) -> Poly {
            let mut out = Poly::new();
            for (&(qa, ya), &ca) in a {
                for (&(qb, yb), &cb) in b {
                    if qa + qb < order {
                        *out.entry((qa + qb, ya + yb)).or_default() += ca * cb;
                    }
                }
            }
            out.retain(|_, c| *c != 0);
            out
        }
        let mut acc: Poly = [((0, -1), 1), ((0, 0), -2), ((0, 1), 1)]
            .into_iter()
            .collect();
        for n in 1..order {
            let f1: Poly = [((0, 0), 1), ((n, 1), -1)].into_iter().collect();
            let f2: Poly = [((0, 0), 1), ((n, -1), -1)].into_iter().collect();
            // 1/(1-q^n) as a geometric sum
            let geo: Poly = (0..)
                .map(|j| j * n)
                .take_while(|&e| e < order)
                .map(|e| ((e, 0), 1))
                .collect();
            for _ in 0..2 {
                acc = mul(&acc, &f1, order);
                acc = mul(&acc, &f2, order);
            }
            for _ in 0..4 {
                acc = mul(&acc, &geo, order);
            }
        }
        acc
    }

    #[test]
    fn phi_leading_terms() {
        let phi = phi_m2_1(6);
        assert_eq!(phi.coeff(0), &lp(-1, &[1, -2, 1]));
        assert_eq!(phi.coeff(1), &lp(-2, &[-2, 8, -12, 8, -2]));
        assert!(phi.is_symmetric());
    }

    #[test]
    fn phi_matches_brute_force_expansion() {
        let order = 7;
        let phi = phi_m2_1(order);
        let brute = phi_brute(order);
        for d in 0..order {
            let lo = -(d as i64) - 2;
            let expected: Vec<i64> = (lo..=-lo)
                .map(|j| brute.get(&(d, j)).copied().unwrap_or(0))
                .collect();
            assert_eq!(phi.coeff(d), &lp(lo, &expected), "q^{d}");
        }
    }

    #[test]
    fn phi_q0_in_genus_basis() {
        let phi = phi_m2_1(3);
        assert_eq!(genus_expand(phi.coeff(0)).unwrap(), ge(&[(0, -4), (1, 1)]));
        assert_eq!(phi.coeff(0).eval_unit(1).unwrap(), BigInt::zero());
    }

    #[test]
    fn neg_t_over_phi_cancels_prefactor() {
        let order = 12;
        for k in [1, 2, 3] {
            let phi_k = phi_m2_1(order).substitute(k, true).truncate(order);
            let prod = phi_k.mul(&neg_t_over_phi(k, order));
            let expected = TwoVarSeries::one(order).mul_laurent(&LaurentPoly::genus_t().neg());
            assert_eq!(prod, expected, "k = {k}");
        }
    }

    #[test]
    fn genus_examples() {
        assert_eq!(
            genus_expand(&LaurentPoly::genus_t()).unwrap(),
            ge(&[(1, 1)])
        );
        assert_eq!(genus_expand(&LaurentPoly::one()).unwrap(), ge(&[(0, 1)]));
        assert_eq!(
            genus_expand(&lp(-1, &[1, -2, 1])).unwrap(),
            ge(&[(0, -4), (1, 1)])
        );
        assert_eq!(
            genus_expand(&LaurentPoly::zero()).unwrap(),
            GenusExpansion::default()
        );
        assert!(matches!(
            genus_expand(&lp(0, &[1, 1])),
            Err(Error::NotPalindromic)
        ));
    }

    #[test]
    fn evaluate_at_minus_one_examples() {
        let t = LaurentPoly::genus_t();
        assert_eq!(genus_evaluate_at_minus_one(&t).unwrap(), BigInt::zero());
        assert_eq!(
            genus_evaluate_at_minus_one(&lp(-1, &[1, -2, 1])).unwrap(),
            BigInt::from(-4)
        );
        let p = t.mul(&t).add(&LaurentPoly::constant(BigInt::from(5)));
        assert_eq!(genus_evaluate_at_minus_one(&p).unwrap(), BigInt::from(5));
        assert!(genus_evaluate_at_minus_one(&lp(1, &[1])).is_err());
    }

    #[test]
    fn json_map() {
        let g = ge(&[(0, -4), (1, 1)]);
        let j = serde_json::to_string(&g).unwrap();
        assert_eq!(j, r#"{"0":"-4","1":"1"}"#);
        assert_eq!(serde_json::from_str::<GenusExpansion>(&j).unwrap(), g);
    }

    fn palindromic(half: Vec<i64>) -> LaurentPoly {
        let deg = half.len() as i64 - 1;
        let mut full = half.clone();
        full.extend(half.iter().rev().skip(1));
        lp(-deg, &full)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn genus_round_trip(half in proptest::collection::vec(-1000i64..1000, 1..13)) {
            let p = palindromic(half);
            let g = genus_expand(&p).unwrap();
            prop_assert_eq!(g.reconstruct(), p.clone());
            prop_assert_eq!(genus_evaluate_at_minus_one(&p).unwrap(), g.get(0));
        }
    }
}
