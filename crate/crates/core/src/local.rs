//! Normalized local partition functions `Zhat = q^{1/24} Z` of the ADE singularities.
//!
//! A-type factors are `1 / prod (1 - q^n)` for every `n`. D- and E-type factors are solved
//! out of the catalog eta products and then matched against the eta-quotient template
//! `eta^2(q^2) eta(q^{4E}) / (eta(q) eta(q^{2E}) eta(q^{2F}) eta(q^{2V}))`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::catalog::{row, AdeType};
use crate::error::{Error, Result};
use crate::eta::{euler_product, euler_product_qm, pentagonal_terms, EtaProduct};
use crate::series::IntSeries;

/// Eta-quotient template parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Template {
    #[serde(rename = "E")]
    pub e: u32,
    #[serde(rename = "F")]
    pub f: u32,
    #[serde(rename = "V")]
    pub v: u32,
}

impl Template {
    /// The `q^{1/24}` prefactors cancel exactly when `F + V = E + 2`.
    pub fn offset_cancels(&self) -> bool {
        self.f + self.v == self.e + 2
    }

    /// `Z_Delta` (not normalized) as an eta product.
    pub fn eta_product(&self) -> EtaProduct {
        let (e, f, v) = (self.e as u64, self.f as u64, self.v as u64);
        let mut ex: BTreeMap<u64, i64> = BTreeMap::new();
        for (m, a) in [
            (2, 2),
            (4 * e, 1),
            (1, -1),
            (2 * e, -1),
            (2 * f, -1),
            (2 * v, -1),
        ] {
            *ex.entry(m).or_default() += a;
        }
        let level = ex.keys().fold(1u64, |l, &m| l.lcm(&m));
        EtaProduct::new(level, ex).expect("every index divides the lcm")
    }

    /// `q^{1/24}`-normalized expansion of the template.
    pub fn expansion(&self, truncation: usize) -> IntSeries {
        let p = self.eta_product();
        let s = p.expansion(truncation);
        let off = s.offset() + Rational64::new(1, 24);
        s.with_offset(off).expect("offset denominator divides 24")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalFactor {
    pub delta: AdeType,
    pub stabilizer_order: u32,
    /// Offset 0, leading coefficient 1.
    pub series: IntSeries,
    pub template: Option<Template>,
    pub derived_from_rows: Vec<u8>,
}

/// Local factors keyed by ADE type.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LocalFactorSet {
    factors: BTreeMap<AdeType, LocalFactor>,
}

impl LocalFactorSet {
    pub fn insert(&mut self, f: LocalFactor) {
        self.factors.insert(f.delta, f);
    }

    pub fn get(&self, t: AdeType) -> Option<&LocalFactor> {
        self.factors.get(&t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LocalFactor> {
        self.factors.values()
    }

    /// The four A-type factors only.
    pub fn a_types(truncation: usize) -> Self {
        let mut set = Self::default();
        for t in AdeType::ALL.into_iter().filter(|t| t.is_a_type()) {
            set.insert(local_a_type(t, truncation).expect("A-type"));
        }
        set
    }

    /// A-type factors plus D4, D5, E6 derived in dependency order.
    pub fn derive_all(truncation: usize) -> Result<Self> {
        let mut set = Self::a_types(truncation);
        let d4 = derive_from_row(6, AdeType::D4, &set, truncation)?;
        set.insert(d4);
        let d5 = derive_from_row(9, AdeType::D5, &set, truncation)?;
        set.insert(d5);
        let e6 = derive_from_row(10, AdeType::E6, &set, truncation)?;
        set.insert(e6);
        Ok(set)
    }
}

/// `1 / prod (1 - q^n)`; the same series for every A_n.
pub fn local_a_type(delta: AdeType, truncation: usize) -> Result<LocalFactor> {
    if !delta.is_a_type() {
        return Err(Error::InvalidArgument(format!("{delta} is not of type A")));
    }
    Ok(LocalFactor {
        delta,
        stabilizer_order: delta.stabilizer_order(),
        series: euler_product(truncation).inverse()?,
        template: None,
        derived_from_rows: Vec::new(),
    })
}

/// Solves the assembly identity of catalog row `row_id` for the factor of type `unknown`,
/// taking every other factor from `known`.
pub fn derive_from_row(
    row_id: u8,
    unknown: AdeType,
    known: &LocalFactorSet,
    truncation: usize,
) -> Result<LocalFactor> {
    let r = row(row_id)?;
    let k = r.order;
    let mult = r.sing_type.count(unknown);
    if mult == 0 {
        return Err(Error::InconsistentDerivation(format!(
            "row {row_id} has no {unknown} point"
        )));
    }
    if k != unknown.stabilizer_order() {
        return Err(Error::InconsistentDerivation(format!(
            "{unknown} enters row {row_id} at q^{}, not at q",
            k / unknown.stabilizer_order()
        )));
    }
    let exponent = r.sing_type.r() as i64 - r.euler_quotient;
    let mut rest = r.reference_product.expansion(truncation).inverse()?;
    if rest.offset() != Rational64::from_integer(0) {
        return Err(Error::InconsistentDerivation(format!(
            "row {row_id} has order {} at infinity",
            rest.offset()
        )));
    }
    rest = rest.mul(&euler_product_qm(k as usize, truncation).pow(-exponent)?);
    let mut rows = vec![row_id];
    for (&t, &c) in r.sing_type.counts() {
        if t == unknown {
            continue;
        }
        let f = known.get(t).ok_or(Error::MissingLocalFactor(t))?;
        let m = (k / t.stabilizer_order()) as usize;
        let scaled = f.series.substitute_qm(m);
        if scaled.truncation_order() < truncation {
            return Err(Error::InconsistentDerivation(format!(
                "{t} is known to order {}, row {row_id} needs {}",
                f.series.truncation_order(),
                truncation.div_ceil(m)
            )));
        }
        rest = rest.mul(&scaled.truncate(truncation).pow(-(c as i64))?);
        for &src in &f.derived_from_rows {
            if !rows.contains(&src) {
                rows.push(src);
            }
        }
    }
    let series = rest.nth_root(mult)?;
    Ok(LocalFactor {
        delta: unknown,
        stabilizer_order: unknown.stabilizer_order(),
        series,
        template: None,
        derived_from_rows: rows,
    })
}

/// Derives a D- or E-type factor from its primary catalog row.
pub fn derive_local_de(delta: AdeType, truncation: usize) -> Result<LocalFactor> {
    let a = LocalFactorSet::a_types(truncation);
    match delta {
        AdeType::D4 => derive_from_row(6, delta, &a, truncation),
        AdeType::D5 => derive_from_row(9, delta, &a, truncation),
        AdeType::E6 => {
            let mut known = a;
            known.insert(derive_from_row(6, AdeType::D4, &known, truncation)?);
            derive_from_row(10, delta, &known, truncation)
        }
        other => Err(Error::InvalidArgument(format!(
            "{other} is not of type D or E"
        ))),
    }
}

/// D4 derived independently from the two catalog rows containing it with only A-type partners.
pub fn d4_cross_derivation(truncation: usize) -> Result<(LocalFactor, LocalFactor)> {
    let a = LocalFactorSet::a_types(truncation);
    Ok((
        derive_from_row(6, AdeType::D4, &a, truncation)?,
        derive_from_row(7, AdeType::D4, &a, truncation)?,
    ))
}

const PREFILTER_LEN: usize = 24;

/// Every template with `1 <= E, F, V <= bound` whose normalized expansion equals `factor`
/// to its full truncation order, in lexicographic order.
pub fn all_template_matches(factor: &LocalFactor, bound: u32) -> Vec<Template> {
    let target = &factor.series;
    let n = target.truncation_order();
    if bound == 0 || n == 0 || target.offset() != Rational64::from_integer(0) {
        return Vec::new();
    }
    let short = n.min(PREFILTER_LEN);
    // eta^2(q^2) / eta(q) without prefactors
    let base_full = euler_product_qm(2, n)
        .pow(2)
        .expect("power")
        .mul(&euler_product(n).inverse().expect("unit"));
    let base_short = base_full.truncate(short);
    let target_short = target.truncate(short);

    let build = |base: &IntSeries, t: &Template, len: usize| {
        base.mul_sparse(&pentagonal_terms(4 * t.e as usize, len))
            .div_sparse(&pentagonal_terms(2 * t.e as usize, len))
            .div_sparse(&pentagonal_terms(2 * t.f as usize, len))
            .div_sparse(&pentagonal_terms(2 * t.v as usize, len))
    };

    let mut out = Vec::new();
    for e in 1..=bound {
        for f in 1..=bound {
            let Some(v) = (e + 2).checked_sub(f) else {
                continue;
            };
            if v == 0 || v > bound {
                continue;
            }
            let t = Template { e, f, v };
            debug_assert!(t.offset_cancels());
            if build(&base_short, &t, short) != target_short {
                continue;
            }
            if build(&base_full, &t, n) == *target {
                out.push(t);
            }
        }
    }
    out
}

/// Lexicographically first template match.
pub fn match_template(factor: &LocalFactor, bound: u32) -> Option<Template> {
    all_template_matches(factor, bound).into_iter().next()
}

/// One entry of the golden local-factor file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFactorRecord {
    pub delta: AdeType,
    pub stabilizer_order: u32,
    pub coeffs: Vec<String>,
    pub template: Option<Template>,
    pub all_templates: Vec<Template>,
    pub derived_from_rows: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFactorFile {
    pub schema_version: u32,
    pub truncation: usize,
    pub template_search_bound: u32,
    pub factors: Vec<LocalFactorRecord>,
}

pub const LOCAL_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_TEMPLATE_BOUND: u32 = 30;

impl LocalFactorRecord {
    pub fn series(&self) -> Result<IntSeries> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("{}: {e}", self.delta)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntSeries::from_coeffs(coeffs))
    }
}

/// Derives D4, D5, E6, searches templates, and packages everything for the golden file.
pub fn derive_local_file(truncation: usize, bound: u32) -> Result<LocalFactorFile> {
    let set = LocalFactorSet::derive_all(truncation)?;
    let (row6, row7) = d4_cross_derivation(truncation)?;
    if row6.series != row7.series {
        let i = row6
            .series
            .compare(&row7.series)
            .first_mismatch
            .unwrap_or(0);
        return Err(Error::InconsistentDerivation(format!(
            "D4 from rows 6 and 7 differ at q^{i}"
        )));
    }
    let factors = [AdeType::D4, AdeType::D5, AdeType::E6]
        .into_iter()
        .map(|t| {
            let f = set.get(t).expect("derived");
            let all = all_template_matches(f, bound);
            let mut rows = f.derived_from_rows.clone();
            if t == AdeType::D4 {
                rows.push(7);
            }
            LocalFactorRecord {
                delta: t,
                stabilizer_order: f.stabilizer_order,
                coeffs: f.series.coeffs().iter().map(BigInt::to_string).collect(),
                template: all.first().copied(),
                all_templates: all,
                derived_from_rows: rows,
            }
        })
        .collect();
    Ok(LocalFactorFile {
        schema_version: LOCAL_SCHEMA_VERSION,
        truncation,
        template_search_bound: bound,
        factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partitions(n: usize) -> u64 {
        fn count(n: usize, max: usize) -> u64 {
            if n == 0 {
                return 1;
            }
            (1..=max.min(n)).map(|p| count(n - p, p)).sum()
        }
        count(n, n)
    }

    #[test]
    fn a_type_is_partition_generating_function() {
        let f = local_a_type(AdeType::A3, 31).unwrap();
        for n in 0..=30 {
            assert_eq!(f.series.coeff(n), &BigInt::from(partitions(n)), "q^{n}");
        }
        assert_eq!(f.series.coeff(5), &BigInt::from(7));
        assert!(local_a_type(AdeType::D4, 5).is_err());
    }

    #[test]
    fn d4_rows_agree() {
        let (a, b) = d4_cross_derivation(80).unwrap();
        assert_eq!(a.series, b.series);
        assert_eq!(a.series.coeff(0), &BigInt::from(1));
    }

    #[test]
    fn templates_found() {
        let set = LocalFactorSet::derive_all(60).unwrap();
        let d4 = set.get(AdeType::D4).unwrap();
        assert_eq!(match_template(d4, 30), Some(Template { e: 2, f: 2, v: 2 }));
        let d5 = set.get(AdeType::D5).unwrap();
        assert_eq!(
            all_template_matches(d5, 30),
            vec![Template { e: 3, f: 2, v: 3 }, Template { e: 3, f: 3, v: 2 }]
        );
        let e6 = set.get(AdeType::E6).unwrap();
        assert_eq!(match_template(e6, 30), Some(Template { e: 6, f: 4, v: 4 }));
    }

    #[test]
    fn template_expansion_matches_search_kernel() {
        let set = LocalFactorSet::derive_all(40).unwrap();
        let e6 = set.get(AdeType::E6).unwrap();
        let t = match_template(e6, 10).unwrap();
        assert_eq!(t.expansion(40), e6.series);
        assert_eq!(t.eta_product().level(), 24);
    }

    #[test]
    fn corrupted_series_has_no_template() {
        let mut d4 = derive_local_de(AdeType::D4, 40).unwrap();
        let mut c = d4.series.coeffs().to_vec();
        c[7] += 1;
        d4.series = IntSeries::from_coeffs(c);
        assert_eq!(match_template(&d4, 30), None);
    }

    #[test]
    fn zero_bound_has_no_template() {
        let d4 = derive_local_de(AdeType::D4, 20).unwrap();
        assert_eq!(match_template(&d4, 0), None);
    }

    #[test]
    fn e6_uses_d4_from_row_six() {
        let e6 = derive_local_de(AdeType::E6, 20).unwrap();
        assert_eq!(e6.derived_from_rows, vec![10, 6]);
        assert_eq!(e6.series.coeff(0), &BigInt::from(1));
    }

    #[test]
    fn wrong_row_is_rejected() {
        let a = LocalFactorSet::a_types(10);
        assert!(matches!(
            derive_from_row(2, AdeType::D4, &a, 10),
            Err(Error::InconsistentDerivation(_))
        ));
        assert!(matches!(
            derive_from_row(10, AdeType::E6, &a, 10),
            Err(Error::MissingLocalFactor(AdeType::D4))
        ));
    }

    #[test]
    fn golden_file_prefix_matches() {
        let golden: LocalFactorFile =
            serde_json::from_str(include_str!("../data/local_factors.json")).unwrap();
        let fresh = derive_local_file(50, DEFAULT_TEMPLATE_BOUND).unwrap();
        for (g, f) in golden.factors.iter().zip(&fresh.factors) {
            assert_eq!(g.delta, f.delta);
            assert_eq!(&g.coeffs[..50], &f.coeffs[..]);
            assert_eq!(g.template, f.template);
            assert_eq!(g.derived_from_rows, f.derived_from_rows);
        }
    }
}
