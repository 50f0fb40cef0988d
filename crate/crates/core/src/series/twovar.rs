use num_bigint::BigInt;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{IntSeries, LaurentPoly};
use crate::error::{Error, Result};

/// Truncated series in `q` with Laurent-polynomial coefficients in `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoVarSeries {
    qoffset: i64,
    qcoeffs: Vec<LaurentPoly>,
}

impl TwoVarSeries {
    pub fn new(qoffset: i64, qcoeffs: Vec<LaurentPoly>) -> Self {
        Self { qoffset, qcoeffs }
    }

    pub fn zero(truncation: usize) -> Self {
        Self::new(0, vec![LaurentPoly::zero(); truncation])
    }

    pub fn one(truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        if truncation > 0 {
            s.qcoeffs[0] = LaurentPoly::one();
        }
        s
    }

    /// Lifts a `y`-free series; its offset must be an integer.
    pub fn from_int_series(s: &IntSeries) -> Result<Self> {
        let off = s.offset();
        if !off.is_integer() {
            return Err(Error::IncompatibleOffsets {
                left: off.to_string(),
                right: "0".into(),
            });
        }
        Ok(Self::new(
            off.to_integer(),
            s.coeffs()
                .iter()
                .map(|c| LaurentPoly::constant(c.clone()))
                .collect(),
        ))
    }

    pub fn qoffset(&self) -> i64 {
        self.qoffset
    }

    pub fn qcoeffs(&self) -> &[LaurentPoly] {
        &self.qcoeffs
    }

    pub fn truncation_order(&self) -> usize {
        self.qcoeffs.len()
    }

    /// Laurent coefficient of `q^(qoffset + i)`.
    pub fn coeff(&self, i: usize) -> &LaurentPoly {
        &self.qcoeffs[i]
    }

    pub fn truncate(&self, truncation: usize) -> Self {
        Self::new(
            self.qoffset,
            self.qcoeffs.iter().take(truncation).cloned().collect(),
        )
    }

    pub fn is_symmetric(&self) -> bool {
        self.qcoeffs.iter().all(LaurentPoly::is_palindromic)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.qcoeffs.len().min(other.qcoeffs.len());
        let mut out = vec![LaurentPoly::zero(); n];
        for (i, a) in self.qcoeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.qcoeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(self.qoffset + other.qoffset, out)
    }

    pub fn mul_int_series(&self, s: &IntSeries) -> Result<Self> {
        Ok(self.mul(&Self::from_int_series(s)?))
    }

    /// Multiplies every `q`-coefficient by the same Laurent polynomial.
    pub fn mul_laurent(&self, p: &LaurentPoly) -> Self {
        Self::new(
            self.qoffset,
            self.qcoeffs.iter().map(|c| c.mul(p)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.qoffset != other.qoffset {
            return Err(Error::IncompatibleOffsets {
                left: self.qoffset.to_string(),
                right: other.qoffset.to_string(),
            });
        }
        let n = self.qcoeffs.len().min(other.qcoeffs.len());
        Ok(Self::new(
            self.qoffset,
            (0..n)
                .map(|i| self.qcoeffs[i].add(&other.qcoeffs[i]))
                .collect(),
        ))
    }

    /// Inverse; the `q^0` coefficient must be `±y^j`.
    pub fn inverse(&self) -> Result<Self> {
        let lead = self
            .qcoeffs
            .first()
            .ok_or_else(|| Error::NonUnitLeadingCoefficient {
                leading: "<empty>".into(),
            })?;
        let (j, sign) = lead
            .as_unit()
            .ok_or_else(|| Error::NonUnitLeadingCoefficient {
                leading: lead.to_string(),
            })?;
        let lead_inv = LaurentPoly::monomial(-j, sign);
        let n = self.qcoeffs.len();
        let mut out: Vec<LaurentPoly> = Vec::with_capacity(n);
        out.push(lead_inv.clone());
        for k in 1..n {
            let mut acc = LaurentPoly::zero();
            for i in 1..=k {
                if !self.qcoeffs[i].is_zero() {
                    acc = acc.add(&self.qcoeffs[i].mul(&out[k - i]));
                }
            }
            out.push(acc.mul(&lead_inv).neg());
        }
        Ok(Self::new(-self.qoffset, out))
    }

    /// `q -> q^m` and optionally `y -> -y`.
    pub fn substitute(&self, m: usize, neg_y: bool) -> Self {
        assert!(m >= 1, "substitution exponent must be positive");
        let n = self.qcoeffs.len() * m;
        let mut out = vec![LaurentPoly::zero(); n];
        for (i, c) in self.qcoeffs.iter().enumerate() {
            out[i * m] = if neg_y {
                c.substitute_neg_y()
            } else {
                c.clone()
            };
        }
        Self::new(self.qoffset * m as i64, out)
    }

    pub fn substitute_neg_y(&self) -> Self {
        self.substitute(1, true)
    }

    /// Evaluates each coefficient at `y = ±1` (or any integer when no negative exponents).
    pub fn eval_y(&self, y: i64) -> Result<IntSeries> {
        let coeffs = self
            .qcoeffs
            .iter()
            .map(|c| c.eval_unit(y))
            .collect::<Result<Vec<BigInt>>>()?;
        IntSeries::new(Rational64::from_integer(self.qoffset), coeffs)
    }

    /// Multiplies in place by `(1 + c y^j q^m)`.
    pub fn mul_binomial(&mut self, c: i64, j: i64, m: usize) {
        let k = BigInt::from(c);
        for n in (m..self.qcoeffs.len()).rev() {
            let (head, tail) = self.qcoeffs.split_at_mut(n);
            tail[0].add_scaled_shifted(&head[n - m], &k, j);
        }
    }

    /// Divides in place by `(1 + c y^j q^m)` with `c = ±1`.
    pub fn div_binomial(&mut self, c: i64, j: i64, m: usize) {
        let k = BigInt::from(-c);
        for n in m..self.qcoeffs.len() {
            let (head, tail) = self.qcoeffs.split_at_mut(n);
            tail[0].add_scaled_shifted(&head[n - m], &k, j);
        }
    }
}
