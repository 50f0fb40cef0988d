use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer Laurent polynomial in `y`, stored densely from exponent `lo`.
///
/// Normalized so the first and last stored coefficients are nonzero; the zero
/// polynomial has no coefficients and `lo == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LaurentRepr", into = "LaurentRepr")]
pub struct LaurentPoly {
    lo: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn new(lo: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { lo, coeffs };
        p.normalize();
        p
    }

    pub fn from_i64s(lo: i64, coeffs: &[i64]) -> Self {
        Self::new(lo, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self {
            lo: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: BigInt) -> Self {
        Self::new(exp, vec![c])
    }

    /// `t = y + 2 + y^{-1}`, the square of `y^{1/2} + y^{-1/2}`.
    pub fn genus_t() -> Self {
        Self::from_i64s(-1, &[1, 2, 1])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest exponent present; `None` for zero.
    pub fn hi(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.lo + self.coeffs.len() as i64 - 1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        let i = exp - self.lo;
        if i < 0 {
            return BigInt::zero();
        }
        self.coeffs.get(i as usize).cloned().unwrap_or_default()
    }

    /// Iterates `(exponent, coefficient)` over nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        let lo = self.lo;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (lo + i as i64, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().unwrap().max(other.hi().unwrap());
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in self.terms().chain(other.terms()) {
            coeffs[(e - lo) as usize] += c;
        }
        Self::new(lo, coeffs)
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.lo, self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Multiplies by `y^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            lo: self.lo + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        Self::new(
            self.lo + other.lo,
            super::schoolbook(&self.coeffs, &other.coeffs, n),
        )
    }

    /// `self += k * y^shift * other`, in place.
    pub fn add_scaled_shifted(&mut self, other: &Self, k: &BigInt, shift: i64) {
        if other.is_zero() || k.is_zero() {
            return;
        }
        let olo = other.lo + shift;
        let ohi = other.hi().unwrap() + shift;
        if self.is_zero() {
            self.lo = olo;
        }
        let lo = self.lo.min(olo);
        let hi = self.hi().map_or(ohi, |h| h.max(ohi));
        if lo < self.lo {
            let pad = (self.lo - lo) as usize;
            self.coeffs
                .splice(0..0, std::iter::repeat_with(BigInt::zero).take(pad));
            self.lo = lo;
        }
        let need = (hi - self.lo + 1) as usize;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, BigInt::zero());
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            if !c.is_zero() {
                self.coeffs[(olo - self.lo) as usize + i] += c * k;
            }
        }
        self.normalize();
    }

    /// `y -> -y`: the coefficient of `y^j` picks up `(-1)^j`.
    pub fn substitute_neg_y(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if (self.lo + i as i64).rem_euclid(2) == 1 {
                    -c
                } else {
                    c.clone()
                }
            })
            .collect();
        Self {
            lo: self.lo,
            coeffs,
        }
    }

    /// `y -> y^{-1}`.
    pub fn reflect(&self) -> Self {
        match self.hi() {
            None => Self::zero(),
            Some(hi) => Self {
                lo: -hi,
                coeffs: self.coeffs.iter().rev().cloned().collect(),
            },
        }
    }

    pub fn is_palindromic(&self) -> bool {
        match self.hi() {
            None => true,
            Some(hi) => hi == -self.lo && self.coeffs.iter().eq(self.coeffs.iter().rev()),
        }
    }

    /// Value at an integer point `y`; negative exponents need `y = ±1`.
    pub fn eval_unit(&self, y: i64) -> Result<BigInt> {
        if self.is_zero() {
            return Ok(BigInt::zero());
        }
        match y {
            1 => Ok(self.coeffs.iter().sum()),
            -1 => Ok(self.substitute_neg_y().coeffs.iter().sum()),
            _ if self.lo >= 0 => {
                let yb = BigInt::from(y);
                let mut acc = BigInt::zero();
                for c in self.coeffs.iter().rev() {
                    acc = acc * &yb + c;
                }
                Ok(acc * num_traits::pow(yb, self.lo as usize))
            }
            _ => Err(Error::InvalidArgument(format!(
                "cannot evaluate a polynomial with negative exponents at y = {y}"
            ))),
        }
    }

    /// `y^j` with coefficient `±1`, the units of the Laurent ring.
    pub fn as_unit(&self) -> Option<(i64, BigInt)> {
        (self.coeffs.len() == 1 && self.coeffs[0].abs().is_one())
            .then(|| (self.lo, self.coeffs[0].clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            match (e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => f.write_str("y")?,
                (1, false) => write!(f, "{a}y")?,
                (_, true) => write!(f, "y^{e}")?,
                (_, false) => write!(f, "{a}y^{e}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    lo: i64,
    coeffs: Vec<String>,
}

impl From<LaurentPoly> for LaurentRepr {
    fn from(p: LaurentPoly) -> Self {
        Self {
            lo: p.lo,
            coeffs: p.coeffs.iter().map(ToString::to_string).collect(),
        }
    }
}

impl TryFrom<LaurentRepr> for LaurentPoly {
    type Error = Error;
    fn try_from(r: LaurentRepr) -> Result<Self> {
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("coefficient {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LaurentPoly::new(r.lo, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(lo: i64, c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_i64s(lo, c)
    }

    #[test]
    fn normalization_trims_zeros() {
        let p = lp(-3, &[0, 0, 1, 2, 0]);
        assert_eq!(p.lo(), -1);
        assert_eq!(p.hi(), Some(0));
        assert!(lp(5, &[0, 0]).is_zero());
        assert_eq!(lp(5, &[0]).lo(), 0);
    }

    #[test]
    fn mul_examples() {
        let a = lp(-1, &[1, -2, 1]);
        assert_eq!(a.mul(&LaurentPoly::one()), a);
        let t = LaurentPoly::genus_t();
        assert_eq!(t.mul(&t), lp(-2, &[1, 4, 6, 4, 1]));
        assert_eq!(a.mul(&t), lp(-2, &[1, 0, -2, 0, 1]));
    }

    #[test]
    fn neg_y_examples() {
        assert_eq!(
            LaurentPoly::genus_t().substitute_neg_y(),
            lp(-1, &[-1, 2, -1])
        );
        assert_eq!(LaurentPoly::one().substitute_neg_y(), LaurentPoly::one());
        assert_eq!(
            lp(-2, &[1, 4, 6, 4, 1]).substitute_neg_y(),
            lp(-2, &[1, -4, 6, -4, 1])
        );
    }

    #[test]
    fn palindromes() {
        assert!(LaurentPoly::genus_t().is_palindromic());
        assert!(LaurentPoly::zero().is_palindromic());
        assert!(LaurentPoly::constant(BigInt::from(7)).is_palindromic());
        assert!(!lp(0, &[1, 1]).is_palindromic());
        assert!(!lp(-1, &[1, 2, 3]).is_palindromic());
    }

    #[test]
    fn evaluation() {
        let t = LaurentPoly::genus_t();
        assert_eq!(t.eval_unit(1).unwrap(), BigInt::from(4));
        assert_eq!(t.eval_unit(-1).unwrap(), BigInt::zero());
        assert_eq!(lp(1, &[1, 1]).eval_unit(3).unwrap(), BigInt::from(12));
        assert!(t.eval_unit(2).is_err());
    }

    #[test]
    fn add_scaled_shifted_matches_add() {
        let mut a = lp(-1, &[1, 2, 3]);
        let b = lp(0, &[5, -1]);
        let expected = a.add(&b.shift(-3).scale(&BigInt::from(2)));
        a.add_scaled_shifted(&b, &BigInt::from(2), -3);
        assert_eq!(a, expected);
        let mut z = LaurentPoly::zero();
        z.add_scaled_shifted(&b, &BigInt::from(-1), 4);
        assert_eq!(z, b.neg().shift(4));
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_string(&LaurentPoly::genus_t()).unwrap();
        assert_eq!(j, r#"{"lo":-1,"coeffs":["1","2","1"]}"#);
        assert_eq!(
            serde_json::from_str::<LaurentPoly>(&j).unwrap(),
            LaurentPoly::genus_t()
        );
    }

    #[test]
    fn display() {
        assert_eq!(lp(-1, &[1, -2, 1]).to_string(), "y - 2 + y^-1");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn neg_y_is_involution(lo in -6i64..6, c in proptest::collection::vec(-20i64..20, 0..10)) {
            let p = lp(lo, &c);
            prop_assert_eq!(p.substitute_neg_y().substitute_neg_y(), p);
        }

        #[test]
        fn neg_y_is_multiplicative(a in proptest::collection::vec(-9i64..9, 0..6), b in proptest::collection::vec(-9i64..9, 0..6), la in -3i64..3, lb in -3i64..3) {
            let (a, b) = (lp(la, &a), lp(lb, &b));
            prop_assert_eq!(a.mul(&b).substitute_neg_y(), a.substitute_neg_y().mul(&b.substitute_neg_y()));
        }
    }
}
