//! Dedekind eta expansions and symbolic eta products `prod_{m | N} eta(q^m)^{a_m}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::IntSeries;

/// Nonzero terms of `prod_{n>=1} (1 - q^{m n})` below `q^truncation`, from Euler's
/// pentagonal number theorem: `sum_k (-1)^k q^{m k(3k-1)/2}`.
pub fn pentagonal_terms(m: usize, truncation: usize) -> Vec<(usize, i64)> {
    assert!(m >= 1);
    let mut terms = vec![(0, 1)];
    for k in 1.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let p1 = m * (k * (3 * k - 1) / 2);
        if p1 >= truncation {
            break;
        }
        terms.push((p1, sign));
        let p2 = m * (k * (3 * k + 1) / 2);
        if p2 < truncation {
            terms.push((p2, sign));
        }
    }
    terms.sort_unstable();
    terms
}

/// `prod_{n>=1} (1 - q^{m n})` with `truncation` coefficients and offset 0.
pub fn euler_product_qm(m: usize, truncation: usize) -> IntSeries {
    IntSeries::from_sparse(truncation, &pentagonal_terms(m, truncation))
}

/// `prod_{n>=1} (1 - q^n)` with offset 0.
pub fn euler_product(truncation: usize) -> IntSeries {
    euler_product_qm(1, truncation)
}

/// `prod_{n>=1}^{truncation} (1 - q^n)` multiplied out factor by factor.
pub fn euler_product_direct(truncation: usize) -> IntSeries {
    let mut acc = IntSeries::one(truncation);
    for n in 1..truncation {
        acc = acc.mul_sparse(&[(0, 1), (n, -1)]);
    }
    acc
}

/// `eta(q) = q^{1/24} prod (1 - q^n)`.
pub fn eta_expansion(truncation: usize) -> IntSeries {
    euler_product(truncation)
        .with_offset(Rational64::new(1, 24))
        .expect("1/24 is a valid offset")
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// An eta quotient of a fixed level. Every divisor of the level has an entry, zero allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "EtaProductRepr", into = "EtaProductRepr")]
pub struct EtaProduct {
    level: u64,
    exponents: BTreeMap<u64, i64>,
}

impl EtaProduct {
    pub fn new(level: u64, exponents: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidArgument("level must be positive".into()));
        }
        let mut map: BTreeMap<u64, i64> = divisors(level).into_iter().map(|d| (d, 0)).collect();
        for (m, a) in exponents {
            match map.get_mut(&m) {
                Some(slot) => *slot += a,
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "{m} does not divide level {level}"
                    )))
                }
            }
        }
        Ok(Self {
            level,
            exponents: map,
        })
    }

    pub fn trivial(level: u64) -> Self {
        Self::new(level, []).expect("level is positive")
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.exponents
    }

    pub fn exponent(&self, m: u64) -> i64 {
        self.exponents.get(&m).copied().unwrap_or(0)
    }

    /// Twice the weight, `sum a_m`.
    pub fn weight_twice(&self) -> i64 {
        self.exponents.values().sum()
    }

    /// The weight `(1/2) sum a_m`, a half-integer.
    pub fn weight(&self) -> Rational64 {
        Rational64::new(self.weight_twice(), 2)
    }

    /// `(1/24) sum m a_m`.
    pub fn order_at_infinity(&self) -> Rational64 {
        let s: i64 = self.exponents.iter().map(|(&m, &a)| m as i64 * a).sum();
        Rational64::new(s, 24)
    }

    pub fn inverse(&self) -> Self {
        Self {
            level: self.level,
            exponents: self.exponents.iter().map(|(&m, &a)| (m, -a)).collect(),
        }
    }

    /// Product of two eta quotients at the lcm of their levels.
    pub fn merge(&self, other: &Self) -> Self {
        let level = self.level.lcm(&other.level);
        Self::new(
            level,
            self.exponents
                .iter()
                .chain(other.exponents.iter())
                .map(|(&m, &a)| (m, a)),
        )
        .expect("divisors of either level divide the lcm")
    }

    /// Exact `q`-expansion with offset equal to the order at infinity.
    pub fn expansion(&self, truncation: usize) -> IntSeries {
        let mut acc = IntSeries::one(truncation);
        for (&m, &a) in &self.exponents {
            if a == 0 {
                continue;
            }
            let terms = pentagonal_terms(m as usize, truncation);
            for _ in 0..a.unsigned_abs() {
                acc = if a > 0 {
                    acc.mul_sparse(&terms)
                } else {
                    acc.div_sparse(&terms)
                };
            }
        }
        acc.with_offset(self.order_at_infinity())
            .expect("m a_m / 24 has denominator dividing 24")
    }

    /// Köhler's holomorphy test at the cusps of `Gamma0(N)`.
    pub fn koehler_check(&self) -> CuspReport {
        let entries = divisors(self.level)
            .into_iter()
            .map(|c| {
                let value = self
                    .exponents
                    .iter()
                    .map(|(&m, &a)| {
                        let g = c.gcd(&m) as i64;
                        Rational64::new(g * g * a, m as i64)
                    })
                    .fold(Rational64::zero(), |acc, x| acc + x);
                let sign = if value.is_positive() {
                    CuspSign::Positive
                } else if value.is_zero() {
                    CuspSign::Zero
                } else {
                    CuspSign::Negative
                };
                CuspEntry {
                    divisor: c,
                    value_num: *value.numer(),
                    value_den: *value.denom(),
                    sign,
                }
            })
            .collect::<Vec<_>>();
        let classification = if entries.iter().any(|e| e.sign == CuspSign::Negative) {
            CuspClass::NonHolomorphic
        } else if entries.iter().all(|e| e.sign == CuspSign::Positive) {
            CuspClass::Cuspidal
        } else {
            CuspClass::Holomorphic
        };
        CuspReport {
            level: self.level,
            entries,
            classification,
        }
    }

    pub fn parse_with_level(s: &str, level: u64) -> Result<Self> {
        let factors = parse_factors(s)?;
        Self::new(level, factors)
    }
}

fn parse_factors(s: &str) -> Result<Vec<(u64, i64)>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "1" {
        return Ok(Vec::new());
    }
    let err = |msg: &str| Error::Parse(format!("{msg} in eta product {s:?}"));
    compact
        .split('*')
        .map(|tok| {
            let rest = tok
                .strip_prefix("eta(q")
                .ok_or_else(|| err("expected `eta(q`"))?;
            let close = rest.find(')').ok_or_else(|| err("missing `)`"))?;
            let m = match &rest[..close] {
                "" => 1,
                inner => inner
                    .strip_prefix('^')
                    .and_then(|v| v.parse::<u64>().ok())
                    .filter(|&v| v > 0)
                    .ok_or_else(|| err("bad argument exponent"))?,
            };
            let tail = &rest[close + 1..];
            let a = match tail {
                "" => 1,
                _ => {
                    let raw = tail.strip_prefix('^').ok_or_else(|| err("expected `^`"))?;
                    let raw = raw
                        .strip_prefix('(')
                        .and_then(|r| r.strip_suffix(')'))
                        .unwrap_or(raw);
                    raw.parse::<i64>().map_err(|_| err("bad exponent"))?
                }
            };
            Ok((m, a))
        })
        .collect()
}

impl FromStr for EtaProduct {
    type Err = Error;

    /// Parses `eta(q^m)^a * ...`; the level is the lcm of the arguments that appear.
    fn from_str(s: &str) -> Result<Self> {
        let factors = parse_factors(s)?;
        let level = factors.iter().fold(1u64, |l, &(m, _)| l.lcm(&m));
        Self::new(level, factors)
    }
}

impl fmt::Display for EtaProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exponents
            .iter()
            .filter(|(_, &a)| a != 0)
            .map(|(m, a)| format!("eta(q^{m})^{a}"))
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" * "))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct EtaProductRepr {
    level: u64,
    exponents: BTreeMap<u64, i64>,
}

impl From<EtaProduct> for EtaProductRepr {
    fn from(p: EtaProduct) -> Self {
        Self {
            level: p.level,
            exponents: p.exponents,
        }
    }
}

impl TryFrom<EtaProductRepr> for EtaProduct {
    type Error = Error;
    fn try_from(r: EtaProductRepr) -> Result<Self> {
        EtaProduct::new(r.level, r.exponents)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CuspSign {
    Positive,
    Zero,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CuspClass {
    /// Holomorphic at every cusp and nonvanishing at some cusp.
    Holomorphic,
    Cuspidal,
    NonHolomorphic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspEntry {
    pub divisor: u64,
    pub value_num: i64,
    pub value_den: i64,
    pub sign: CuspSign,
}

impl CuspEntry {
    pub fn value(&self) -> Rational64 {
        Rational64::new(self.value_num, self.value_den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspReport {
    pub level: u64,
    pub entries: Vec<CuspEntry>,
    pub classification: CuspClass,
}

impl CuspReport {
    pub fn is_holomorphic(&self) -> bool {
        self.classification != CuspClass::NonHolomorphic
    }

    pub fn is_cuspidal(&self) -> bool {
        self.classification == CuspClass::Cuspidal
    }

    pub fn has_zero_cusp(&self) -> bool {
        self.entries.iter().any(|e| e.sign == CuspSign::Zero)
    }
}
