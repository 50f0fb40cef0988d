//! Exact truncated power series in `q` over arbitrary-precision integers.
//!
//! An [`IntSeries`] stores `q^offset * (c_0 + c_1 q + ... + c_{T-1} q^{T-1})` where `T` is
//! the truncation order: coefficients are known for exponents `< offset + T`.
//! The offset is a rational whose denominator divides 24, so eta factors
//! (`q^{1/24}`) can be carried without rescaling the variable.

mod convolve;
mod laurent;
mod twovar;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use convolve::{convolve_truncated, karatsuba, schoolbook, KARATSUBA_THRESHOLD};
pub use laurent::LaurentPoly;
pub use twovar::TwoVarSeries;

/// Default truncation order used throughout the CLI.
pub const DEFAULT_TRUNCATION: usize = 200;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "IntSeriesRepr", into = "IntSeriesRepr")]
pub struct IntSeries {
    offset: Rational64,
    coeffs: Vec<BigInt>,
}

/// Outcome of comparing two series on their common window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesComparison {
    pub equal: bool,
    pub compared: usize,
    pub first_mismatch: Option<usize>,
}

fn check_offset(offset: Rational64) -> Result<Rational64> {
    if 24 % offset.denom() != 0 {
        return Err(Error::InvalidOffset {
            offset: offset.to_string(),
        });
    }
    Ok(offset)
}

impl IntSeries {
    pub fn new(offset: Rational64, coeffs: Vec<BigInt>) -> Result<Self> {
        Ok(Self {
            offset: check_offset(offset)?,
            coeffs,
        })
    }

    /// Integer-offset series from machine integers.
    pub fn from_i64s(offset: i64, coeffs: &[i64]) -> Self {
        Self {
            offset: Rational64::from_integer(offset),
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        Self {
            offset: Rational64::zero(),
            coeffs,
        }
    }

    pub fn zero(truncation: usize) -> Self {
        Self::from_coeffs(vec![BigInt::zero(); truncation])
    }

    pub fn one(truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        if truncation > 0 {
            s.coeffs[0] = BigInt::one();
        }
        s
    }

    /// Builds a truncated series from a sparse list of `(exponent, coefficient)` pairs.
    pub fn from_sparse(truncation: usize, terms: &[(usize, i64)]) -> Self {
        let mut s = Self::zero(truncation);
        for &(e, c) in terms {
            if e < truncation {
                s.coeffs[e] += c;
            }
        }
        s
    }

    pub fn offset(&self) -> Rational64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `q^(offset + i)`; zero past the truncation window is *not* implied,
    /// callers must stay below [`Self::truncation_order`].
    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    /// Coefficient of the absolute exponent `q^e`, if it lies in the known window.
    pub fn coeff_at(&self, exponent: Rational64) -> Option<BigInt> {
        let rel = exponent - self.offset;
        if rel < Rational64::zero() {
            return Some(BigInt::zero());
        }
        let idx = rel.to_integer() as usize;
        if idx >= self.coeffs.len() {
            None
        } else if rel.is_integer() {
            Some(self.coeffs[idx].clone())
        } else {
            Some(BigInt::zero())
        }
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.first()
    }

    pub fn with_offset(mut self, offset: Rational64) -> Result<Self> {
        self.offset = check_offset(offset)?;
        Ok(self)
    }

    pub fn truncate(&self, truncation: usize) -> Self {
        Self {
            offset: self.offset,
            coeffs: self.coeffs.iter().take(truncation).cloned().collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Sum of two series whose offsets differ by an integer.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let shift = other.offset - self.offset;
        if !shift.is_integer() {
            return Err(Error::IncompatibleOffsets {
                left: self.offset.to_string(),
                right: other.offset.to_string(),
            });
        }
        let (lo, hi, gap) = if shift >= Rational64::zero() {
            (self, other, shift.to_integer() as usize)
        } else {
            (other, self, (-shift).to_integer() as usize)
        };
        let len = lo.coeffs.len().min(gap + hi.coeffs.len());
        let mut coeffs = lo.coeffs[..len].to_vec();
        for (i, c) in hi.coeffs.iter().enumerate() {
            if gap + i >= len {
                break;
            }
            coeffs[gap + i] += c;
        }
        Ok(Self {
            offset: lo.offset,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    /// Product truncated to the smaller window; offsets add.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        Self {
            offset: self.offset + other.offset,
            coeffs: convolve_truncated(&self.coeffs, &other.coeffs, n),
        }
    }

    /// Multiplies by a sparse integer-offset-0 polynomial given as `(exponent, coefficient)` pairs.
    pub fn mul_sparse(&self, terms: &[(usize, i64)]) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![BigInt::zero(); n];
        for &(e, c) in terms {
            if e >= n || c == 0 {
                continue;
            }
            for (i, x) in self.coeffs[..n - e].iter().enumerate() {
                if !x.is_zero() {
                    out[i + e] += x * c;
                }
            }
        }
        Self {
            offset: self.offset,
            coeffs: out,
        }
    }

    /// Divides by a sparse polynomial with constant term 1.
    pub fn div_sparse(&self, terms: &[(usize, i64)]) -> Self {
        debug_assert!(terms.iter().any(|&(e, c)| e == 0 && c == 1));
        let mut out = self.coeffs.clone();
        for n in 0..out.len() {
            let mut acc = BigInt::zero();
            for &(e, c) in terms {
                if e == 0 || e > n || c == 0 {
                    continue;
                }
                acc += &out[n - e] * c;
            }
            out[n] -= acc;
        }
        Self {
            offset: self.offset,
            coeffs: out,
        }
    }

    fn unit_leading(&self) -> Result<BigInt> {
        match self.coeffs.first() {
            Some(c) if c.abs().is_one() => Ok(c.clone()),
            Some(c) => Err(Error::NonUnitLeadingCoefficient {
                leading: c.to_string(),
            }),
            None => Err(Error::NonUnitLeadingCoefficient {
                leading: "<empty>".into(),
            }),
        }
    }

    /// Multiplicative inverse; the leading coefficient must be `±1`.
    pub fn inverse(&self) -> Result<Self> {
        let lead = self.unit_leading()?;
        let n = self.coeffs.len();
        let mut out: Vec<BigInt> = Vec::with_capacity(n);
        out.push(lead.clone());
        for k in 1..n {
            let mut acc = BigInt::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += a * &out[k - j];
                }
            }
            // lead is its own inverse
            out.push(-(acc * &lead));
        }
        Ok(Self {
            offset: -self.offset,
            coeffs: out,
        })
    }

    /// `self^e` by repeated squaring; negative `e` goes through [`Self::inverse`].
    pub fn pow(&self, e: i64) -> Result<Self> {
        let n = self.coeffs.len();
        let offset = check_offset(self.offset * e)?;
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut base = Self {
            offset: Rational64::zero(),
            coeffs: base.coeffs,
        };
        let mut acc = Self::one(n);
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc.offset = offset;
        Ok(acc)
    }

    /// Replaces `q` by `q^m`. The known window scales to `m * T` coefficients.
    pub fn substitute_qm(&self, m: usize) -> Self {
        assert!(m >= 1, "substitution exponent must be positive");
        let n = self.coeffs.len() * m;
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * m] = c.clone();
        }
        Self {
            offset: self.offset * m as i64,
            coeffs: out,
        }
    }

    /// The series `b` with leading coefficient 1 and `b^n = self`.
    ///
    /// Uses the power recurrence `k n a_0 b_k = sum_{j=1..k} (j - n (k - j)) a_j b_{k-j}`;
    /// each division must be exact or the input is not an `n`-th power over the integers.
    pub fn nth_root(&self, n: u32) -> Result<Self> {
        assert!(n >= 1, "root degree must be positive");
        match self.coeffs.first() {
            Some(c) if c.is_one() => {}
            Some(c) => {
                return Err(Error::NonUnitLeadingCoefficient {
                    leading: c.to_string(),
                })
            }
            None => {
                return Err(Error::NonUnitLeadingCoefficient {
                    leading: "<empty>".into(),
                })
            }
        }
        let offset = check_offset(self.offset / n as i64)?;
        let len = self.coeffs.len();
        let nn = BigInt::from(n);
        let mut out: Vec<BigInt> = Vec::with_capacity(len);
        out.push(BigInt::one());
        for k in 1..len {
            let mut acc = BigInt::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if a.is_zero() {
                    continue;
                }
                let weight = BigInt::from(j as i64) - &nn * BigInt::from((k - j) as i64);
                acc += weight * a * &out[k - j];
            }
            let denom = &nn * BigInt::from(k as i64);
            let (q, r) = acc.div_rem(&denom);
            if !r.is_zero() {
                return Err(Error::InexactRoot {
                    degree: n,
                    index: k,
                });
            }
            out.push(q);
        }
        Ok(Self {
            offset,
            coeffs: out,
        })
    }

    /// Compares on the common window; offsets must agree exactly.
    pub fn compare(&self, other: &Self) -> SeriesComparison {
        let compared = self.coeffs.len().min(other.coeffs.len());
        if self.offset != other.offset {
            return SeriesComparison {
                equal: false,
                compared: 0,
                first_mismatch: Some(0),
            };
        }
        let first_mismatch = (0..compared).find(|&i| self.coeffs[i] != other.coeffs[i]);
        SeriesComparison {
            equal: first_mismatch.is_none(),
            compared,
            first_mismatch,
        }
    }

    pub fn is_one(&self) -> bool {
        self.offset.is_zero()
            && self.coeffs.first().is_some_and(|c| c.is_one())
            && self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    /// Coefficients as `i64`, or `None` if any overflows.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl PartialEq for IntSeries {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other).equal
    }
}

impl std::ops::Mul for &IntSeries {
    type Output = IntSeries;
    fn mul(self, rhs: &IntSeries) -> IntSeries {
        IntSeries::mul(self, rhs)
    }
}

impl fmt::Display for IntSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.offset.is_zero() {
            write!(f, "q^({}) * (", self.offset)?;
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{a}q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{a}q^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.coeffs.len())?;
        if !self.offset.is_zero() {
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct IntSeriesRepr {
    offset_num: i64,
    offset_den: i64,
    coeffs: Vec<String>,
}

impl From<IntSeries> for IntSeriesRepr {
    fn from(s: IntSeries) -> Self {
        Self {
            offset_num: *s.offset.numer(),
            offset_den: *s.offset.denom(),
            coeffs: s.coeffs.iter().map(ToString::to_string).collect(),
        }
    }
}

impl TryFrom<IntSeriesRepr> for IntSeries {
    type Error = Error;
    fn try_from(r: IntSeriesRepr) -> Result<Self> {
        if r.offset_den == 0 {
            return Err(Error::Parse("offset_den must be nonzero".into()));
        }
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("coefficient {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        IntSeries::new(Rational64::new(r.offset_num, r.offset_den), coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(coeffs: &[i64]) -> IntSeries {
        IntSeries::from_i64s(0, coeffs)
    }

    fn euler_direct(n: usize) -> IntSeries {
        let mut acc = IntSeries::one(n);
        for k in 1..n {
            acc = acc.mul_sparse(&[(0, 1), (k, -1)]);
        }
        acc
    }

    /// Number of partitions of `n` by explicit enumeration of non-increasing part lists.
    fn count_partitions(n: usize) -> u64 {
        fn go(rem: usize, max: usize) -> u64 {
            if rem == 0 {
                return 1;
            }
            (1..=max.min(rem)).map(|p| go(rem - p, p)).sum()
        }
        go(n, n)
    }

    #[test]
    fn geometric_inverse_product() {
        let a = s(&[1, -1, 0, 0, 0, 0]);
        let b = s(&[1, 1, 1, 1, 1, 1]);
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn offsets_add_in_product() {
        let a = IntSeries::new(Rational64::new(1, 24), vec![BigInt::one(); 1]).unwrap();
        let p = a.mul(&a);
        assert_eq!(p.offset(), Rational64::new(1, 12));
        assert_eq!(p.coeffs(), &[BigInt::one()]);
    }

    #[test]
    fn rejects_bad_offset_denominator() {
        assert!(matches!(
            IntSeries::new(Rational64::new(1, 5), vec![]),
            Err(Error::InvalidOffset { .. })
        ));
    }

    #[test]
    fn euler_times_inverse_is_one() {
        let e = euler_direct(10);
        assert!(e.mul(&e.inverse().unwrap()).is_one());
        assert!(e.inverse().unwrap().mul(&e).is_one());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(s(&[1, -1, 0, 0]).inverse().unwrap(), s(&[1, 1, 1, 1]));
        assert_eq!(s(&[1, 0, 0]).inverse().unwrap(), s(&[1, 0, 0]));
        assert_eq!(s(&[-1, 0, 0]).inverse().unwrap(), s(&[-1, 0, 0]));
        assert!(matches!(
            s(&[2, 1]).inverse(),
            Err(Error::NonUnitLeadingCoefficient { .. })
        ));
        assert!(matches!(
            s(&[0, 1]).inverse(),
            Err(Error::NonUnitLeadingCoefficient { .. })
        ));
    }

    #[test]
    fn partition_numbers_from_inverse_euler() {
        let p = euler_direct(31).inverse().unwrap();
        assert_eq!(p.coeff(10), &BigInt::from(42));
        for n in 0..=30 {
            assert_eq!(p.coeff(n), &BigInt::from(count_partitions(n)), "p({n})");
        }
    }

    #[test]
    fn pow_examples() {
        assert_eq!(s(&[1, -1, 0, 0]).pow(2).unwrap(), s(&[1, -2, 1, 0]));
        assert_eq!(s(&[3, 5, 7]).pow(0).unwrap(), s(&[1, 0, 0]));
        let k3 = euler_direct(4).pow(-24).unwrap();
        assert_eq!(k3.coeff(1), &BigInt::from(24));
        assert!(matches!(
            s(&[2, 1]).pow(-1),
            Err(Error::NonUnitLeadingCoefficient { .. })
        ));
    }

    #[test]
    fn pow_scales_offset() {
        let eta = euler_direct(5).with_offset(Rational64::new(1, 24)).unwrap();
        assert_eq!(eta.pow(24).unwrap().offset(), Rational64::from_integer(1));
        assert_eq!(eta.pow(-8).unwrap().offset(), Rational64::new(-1, 3));
    }

    #[test]
    fn substitute_examples() {
        let a = s(&[1, 1]);
        assert_eq!(a.substitute_qm(2).coeffs(), s(&[1, 0, 1, 0]).coeffs());
        assert_eq!(a.substitute_qm(1), a);
        let eta = euler_direct(6).with_offset(Rational64::new(1, 24)).unwrap();
        let e2 = eta.substitute_qm(2);
        assert_eq!(e2.offset(), Rational64::new(1, 12));
        assert_eq!(e2.truncation_order(), 12);
        // direct expansion of prod (1 - q^{2n}) below q^12
        let mut direct = IntSeries::one(12);
        for k in 1..6 {
            direct = direct.mul_sparse(&[(0, 1), (2 * k, -1)]);
        }
        assert_eq!(e2.coeffs(), direct.coeffs());
        assert!(e2.coeffs().iter().skip(1).step_by(2).all(Zero::is_zero));
    }

    #[test]
    fn nth_root_examples() {
        assert_eq!(
            s(&[1, 2, 1, 0, 0]).nth_root(2).unwrap(),
            s(&[1, 1, 0, 0, 0])
        );
        let a = s(&[1, 7, -3, 2]);
        assert_eq!(a.nth_root(1).unwrap(), a);
        let base = s(&[1, -1, 0, 0, 0, 0, 0, 0]);
        let m4 = base.pow(-4).unwrap();
        let m2 = base.pow(-2).unwrap();
        assert_eq!(m4.nth_root(2).unwrap(), m2);
        assert_eq!(m2.coeffs()[..3], s(&[1, 2, 3]).coeffs()[..]);
    }

    #[test]
    fn nth_root_errors() {
        assert!(matches!(
            s(&[1, 1, 0]).nth_root(2),
            Err(Error::InexactRoot {
                degree: 2,
                index: 1
            })
        ));
        assert!(matches!(
            s(&[-1, 0]).nth_root(2),
            Err(Error::NonUnitLeadingCoefficient { .. })
        ));
        let odd = IntSeries::new(Rational64::new(1, 24), vec![BigInt::one()]).unwrap();
        assert!(matches!(odd.nth_root(2), Err(Error::InvalidOffset { .. })));
    }

    #[test]
    fn add_aligns_integer_offsets() {
        let a = IntSeries::from_i64s(0, &[1, 1, 1]);
        let b = IntSeries::from_i64s(1, &[1, 1, 1]);
        let c = a.checked_add(&b).unwrap();
        assert_eq!(c.offset(), Rational64::zero());
        assert_eq!(c.coeffs(), s(&[1, 2, 2]).coeffs());
        let half = IntSeries::new(Rational64::new(1, 2), vec![BigInt::one()]).unwrap();
        assert!(matches!(
            a.checked_add(&half),
            Err(Error::IncompatibleOffsets { .. })
        ));
    }

    #[test]
    fn comparison_reports_window() {
        let a = s(&[1, 2, 3, 4]);
        let b = s(&[1, 2, 3]);
        assert_eq!(
            a.compare(&b),
            SeriesComparison {
                equal: true,
                compared: 3,
                first_mismatch: None
            }
        );
        let c = s(&[1, 2, 5]);
        assert_eq!(a.compare(&c).first_mismatch, Some(2));
    }

    #[test]
    fn sparse_division_inverts_sparse_multiplication() {
        let a = s(&[3, -1, 4, 1, -5, 9, 2, 6]);
        let terms = [(0, 1), (2, -1), (5, 3)];
        assert_eq!(a.mul_sparse(&terms).div_sparse(&terms), a);
    }

    #[test]
    fn json_round_trip() {
        let a = IntSeries::new(
            Rational64::new(-1, 24),
            vec![
                BigInt::from(1),
                BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap(),
            ],
        )
        .unwrap();
        let j = serde_json::to_string(&a).unwrap();
        assert_eq!(
            j,
            r#"{"offset_num":-1,"offset_den":24,"coeffs":["1","123456789012345678901234567890"]}"#
        );
        let back: IntSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<IntSeries>(
            r#"{"offset_num":1,"offset_den":7,"coeffs":[]}"#
        )
        .is_err());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(s(&[1, -2, 0, 5]).to_string(), "1 - 2q + 5q^3 + O(q^4)");
    }

    fn arb_series(len: usize) -> impl Strategy<Value = IntSeries> {
        proptest::collection::vec(-50i64..50, len).prop_map(|v| IntSeries::from_i64s(0, &v))
    }

    fn arb_unit_series(len: usize) -> impl Strategy<Value = IntSeries> {
        (
            prop::bool::ANY,
            proptest::collection::vec(-50i64..50, len - 1),
        )
            .prop_map(|(neg, rest)| {
                let mut v = vec![if neg { -1 } else { 1 }];
                v.extend(rest);
                IntSeries::from_i64s(0, &v)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(a in arb_series(12), b in arb_series(12), c in arb_series(12)) {
            let bc = b.checked_add(&c).unwrap();
            prop_assert_eq!(a.mul(&bc), a.mul(&b).checked_add(&a.mul(&c)).unwrap());
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn inverse_is_two_sided(a in arb_unit_series(12)) {
            let inv = a.inverse().unwrap();
            prop_assert!(a.mul(&inv).is_one());
            prop_assert!(inv.mul(&a).is_one());
        }

        #[test]
        fn root_of_power_round_trips(mut b in arb_series(10), n in 1u32..5) {
            b.coeffs[0] = BigInt::one();
            let a = b.pow(n as i64).unwrap();
            let r = a.nth_root(n).unwrap();
            prop_assert_eq!(&r, &b);
            prop_assert_eq!(r.pow(n as i64).unwrap(), a);
        }

        #[test]
        fn substitution_composes(a in arb_series(8), m1 in 1usize..4, m2 in 1usize..4) {
            prop_assert_eq!(a.substitute_qm(m1).substitute_qm(m2), a.substitute_qm(m1 * m2));
        }
    }
}
