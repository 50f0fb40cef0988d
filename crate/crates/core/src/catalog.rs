//! Symplectic translation-free group actions on abelian surfaces, their singularity
//! types, and the assembly of the global partition function from local factors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eta::{euler_product_qm, EtaProduct};
use crate::local::LocalFactorSet;
use crate::series::IntSeries;
use crate::tables::{allowed_stabilizers, ACTION_ROWS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AdeType {
    A1,
    A2,
    A3,
    A5,
    D4,
    D5,
    E6,
}

impl AdeType {
    pub const ALL: [AdeType; 7] = [
        Self::A1,
        Self::A2,
        Self::A3,
        Self::A5,
        Self::D4,
        Self::D5,
        Self::E6,
    ];

    /// Order `k` of the stabilizer subgroup of SL(2, C).
    pub fn stabilizer_order(self) -> u32 {
        match self {
            Self::A1 => 2,
            Self::A2 => 3,
            Self::A3 => 4,
            Self::A5 => 6,
            Self::D4 => 8,
            Self::D5 => 12,
            Self::E6 => 24,
        }
    }

    /// Euler characteristic `c` of the exceptional fibre of the minimal resolution
    /// (rank of the root system plus one).
    pub fn exceptional_euler(self) -> u32 {
        match self {
            Self::A1 => 2,
            Self::A2 => 3,
            Self::A3 => 4,
            Self::A5 => 6,
            Self::D4 => 5,
            Self::D5 => 6,
            Self::E6 => 7,
        }
    }

    /// `c - 1/k`, the contribution of one singular point to `e(Y)`.
    pub fn contribution(self) -> Rational64 {
        Rational64::from_integer(self.exceptional_euler() as i64)
            - Rational64::new(1, self.stabilizer_order() as i64)
    }

    pub fn is_a_type(self) -> bool {
        matches!(self, Self::A1 | Self::A2 | Self::A3 | Self::A5)
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for AdeType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown ADE type {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GroupTag {
    #[serde(rename = "trivial")]
    Trivial,
    Z2,
    Z3,
    Z4,
    Z6,
    Q,
    D,
    T,
}

impl GroupTag {
    pub const ALL: [GroupTag; 8] = [
        Self::Trivial,
        Self::Z2,
        Self::Z3,
        Self::Z4,
        Self::Z6,
        Self::Q,
        Self::D,
        Self::T,
    ];

    pub fn order(self) -> u32 {
        match self {
            Self::Trivial => 1,
            Self::Z2 => 2,
            Self::Z3 => 3,
            Self::Z4 => 4,
            Self::Z6 => 6,
            Self::Q => 8,
            Self::D => 12,
            Self::T => 24,
        }
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Trivial => f.write_str("trivial"),
            other => fmt::Debug::fmt(other, f),
        }
    }
}

impl FromStr for GroupTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Self::ALL
            .into_iter()
            .find(|g| g.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown group {s:?}")))
    }
}

/// Multiset of ADE singularities on `A/G`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SingularityType {
    counts: BTreeMap<AdeType, u32>,
}

impl SingularityType {
    pub fn new(counts: impl IntoIterator<Item = (AdeType, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (t, c) in counts {
            *map.entry(t).or_insert(0) += c;
        }
        map.retain(|_, c| *c > 0);
        Self { counts: map }
    }

    pub fn counts(&self) -> &BTreeMap<AdeType, u32> {
        &self.counts
    }

    pub fn count(&self, t: AdeType) -> u32 {
        self.counts.get(&t).copied().unwrap_or(0)
    }

    /// Counts in the fixed order a1, a2, a3, a5, d4, d5, e6.
    pub fn count_vector(&self) -> [u32; 7] {
        AdeType::ALL.map(|t| self.count(t))
    }

    pub fn r(&self) -> u32 {
        self.counts.values().sum()
    }

    pub fn smooth_locus_euler(&self) -> Rational64 {
        -self
            .counts
            .iter()
            .map(|(t, &c)| Rational64::new(c as i64, t.stabilizer_order() as i64))
            .sum::<Rational64>()
    }

    pub fn exceptional_euler(&self) -> u32 {
        self.counts
            .iter()
            .map(|(t, &c)| c * t.exceptional_euler())
            .sum()
    }

    pub fn resolution_euler(&self) -> Rational64 {
        self.smooth_locus_euler() + Rational64::from_integer(self.exceptional_euler() as i64)
    }

    /// `sum counts * (c - 1/k)`; equals `resolution_euler`.
    pub fn constraint_value(&self) -> Rational64 {
        self.counts
            .iter()
            .map(|(t, &c)| t.contribution() * c as i64)
            .sum()
    }
}

impl fmt::Display for SingularityType {
    /// Largest types first, e.g. `E6 + D4 + 4A2 + A1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return f.write_str("smooth");
        }
        let parts: Vec<String> = self
            .counts
            .iter()
            .rev()
            .map(|(t, &c)| {
                if c == 1 {
                    t.to_string()
                } else {
                    format!("{c}{t}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionRecord {
    pub row_id: u8,
    pub group: GroupTag,
    pub order: u32,
    pub sing_type: SingularityType,
    pub euler_quotient: i64,
    /// The eta product for `Z_{A,G}^{-1}`.
    pub reference_product: EtaProduct,
    pub weight_num: i64,
    pub weight_den: i64,
}

impl ActionRecord {
    pub fn weight(&self) -> Rational64 {
        Rational64::new(self.weight_num, self.weight_den)
    }
}

fn record_from_spec(spec: &crate::tables::RowSpec) -> ActionRecord {
    let sing_type = SingularityType::new(spec.singularities.iter().copied());
    let k = spec.group.order();
    let reference_product = EtaProduct::new(k as u64, spec.eta.iter().copied())
        .expect("table exponents index divisors of k");
    let weight = Rational64::new(spec.weight_twice, 2);
    ActionRecord {
        row_id: spec.row_id,
        group: spec.group,
        order: k,
        euler_quotient: (sing_type.smooth_locus_euler()
            + Rational64::from_integer(sing_type.r() as i64))
        .to_integer(),
        sing_type,
        reference_product,
        weight_num: *weight.numer(),
        weight_den: *weight.denom(),
    }
}

/// All eleven translation-free actions.
pub fn catalog() -> Vec<ActionRecord> {
    ACTION_ROWS.iter().map(record_from_spec).collect()
}

pub fn row(row_id: u8) -> Result<ActionRecord> {
    ACTION_ROWS
        .iter()
        .find(|s| s.row_id == row_id)
        .map(record_from_spec)
        .ok_or(Error::UnknownRow(row_id))
}

/// Versioned on-disk form of the catalog.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogFile {
    pub schema_version: u32,
    pub rows: Vec<ActionRecord>,
}

pub const CATALOG_SCHEMA_VERSION: u32 = 1;

pub fn catalog_file() -> CatalogFile {
    CatalogFile {
        schema_version: CATALOG_SCHEMA_VERSION,
        rows: catalog(),
    }
}

/// Free action of a translation subgroup `T` of order `a*b`, composed with a base action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationExtension {
    pub base_row: u8,
    pub translation_order: u32,
}

impl TranslationExtension {
    pub fn new(base_row: u8, translation_order: u32) -> Result<Self> {
        if translation_order == 0 {
            return Err(Error::InvalidArgument(
                "translation order must be positive".into(),
            ));
        }
        row(base_row)?;
        Ok(Self {
            base_row,
            translation_order,
        })
    }

    pub fn effective_level(&self) -> Result<u64> {
        Ok(row(self.base_row)?.order as u64 * self.translation_order as u64)
    }

    /// Eta product for `Z^{-1}` of the extended action: every `eta(q^m)` becomes `eta(q^{m|T|})`.
    pub fn reference_product(&self) -> Result<EtaProduct> {
        let base = row(self.base_row)?.reference_product;
        let t = self.translation_order as u64;
        EtaProduct::new(
            self.effective_level()?,
            base.exponents().iter().map(|(&m, &a)| (m * t, a)),
        )
    }
}

pub fn apply_translation(z: &IntSeries, t: &TranslationExtension) -> IntSeries {
    z.substitute_qm(t.translation_order as usize)
}

/// `Z_{A,G} = prod (1 - q^{kn})^{r - e} * prod_i Zhat_i(q^{k/k_i})`.
pub fn assemble_z(
    row: &ActionRecord,
    locals: &LocalFactorSet,
    truncation: usize,
) -> Result<IntSeries> {
    let k = row.order;
    let st = &row.sing_type;
    let exponent = st.r() as i64 - row.euler_quotient;

    // q^{1/24} bookkeeping: eta(q^k)^{r-e} contributes k(r-e)/24 and each Z_i(q^{k/k_i})
    // contributes -(k/k_i)/24; the sum must vanish so that Zhat can be used throughout.
    let mut offset = Rational64::new(k as i64 * exponent, 24);
    for (&t, &c) in st.counts() {
        let ki = t.stabilizer_order();
        if !k.is_multiple_of(ki) {
            return Err(Error::DivisibilityViolation {
                group_order: k,
                stabilizer_order: ki,
            });
        }
        offset -= Rational64::new((k / ki) as i64 * c as i64, 24);
    }
    if offset != Rational64::from_integer(0) {
        return Err(Error::InconsistentDerivation(format!(
            "row {}: q-prefactors leave q^({offset}); e(A/G) = {} does not match the singularities",
            row.row_id, row.euler_quotient
        )));
    }

    let mut z = euler_product_qm(k as usize, truncation).pow(exponent)?;
    for (&t, &c) in st.counts() {
        let factor = locals.get(t).ok_or(Error::MissingLocalFactor(t))?;
        let m = (k / t.stabilizer_order()) as usize;
        let scaled = factor.series.substitute_qm(m);
        if scaled.truncation_order() < truncation {
            return Err(Error::InconsistentDerivation(format!(
                "local factor {t} known to order {} but order {} is needed at q^{m}",
                factor.series.truncation_order(),
                truncation.div_ceil(m)
            )));
        }
        z = z.mul(&scaled.truncate(truncation).pow(c as i64)?);
    }
    Ok(z)
}

/// All nonnegative solutions of `sum counts * (c - 1/k) = 24` over `allowed`,
/// sorted lexicographically by the count vector (a1, a2, a3, a5, d4, d5, e6).
pub fn solve_singularity_types(allowed: &[AdeType]) -> Vec<SingularityType> {
    let mut types: Vec<AdeType> = allowed.to_vec();
    types.sort();
    types.dedup();
    // work in units of 1/24 so every contribution is an integer
    let weights: Vec<i64> = types
        .iter()
        .map(|t| (t.contribution() * 24).to_integer())
        .collect();
    let mut out = Vec::new();
    let mut counts = vec![0u32; types.len()];
    fn recurse(
        i: usize,
        remaining: i64,
        weights: &[i64],
        counts: &mut Vec<u32>,
        types: &[AdeType],
        out: &mut Vec<SingularityType>,
    ) {
        if i == weights.len() {
            if remaining == 0 && !weights.is_empty() {
                out.push(SingularityType::new(
                    types.iter().copied().zip(counts.iter().copied()),
                ));
            }
            return;
        }
        let mut c = 0;
        while c as i64 * weights[i] <= remaining {
            counts[i] = c;
            recurse(
                i + 1,
                remaining - c as i64 * weights[i],
                weights,
                counts,
                types,
                out,
            );
            c += 1;
        }
        counts[i] = 0;
    }
    recurse(0, 24 * 24, &weights, &mut counts, &types, &mut out);
    out.sort_by_key(|s| s.count_vector());
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedType {
    pub sing_type: SingularityType,
    pub label: String,
    /// Catalog rows realizing this type for the group.
    pub realized_by: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub group: GroupTag,
    pub allowed: Vec<AdeType>,
    pub solutions: Vec<ClassifiedType>,
}

pub fn classify(group: GroupTag) -> Classification {
    let allowed = allowed_stabilizers(group).to_vec();
    let rows: Vec<ActionRecord> = catalog().into_iter().filter(|r| r.group == group).collect();
    let solutions = solve_singularity_types(&allowed)
        .into_iter()
        .map(|s| ClassifiedType {
            label: s.to_string(),
            realized_by: rows
                .iter()
                .filter(|r| r.sing_type == s)
                .map(|r| r.row_id)
                .collect(),
            sing_type: s,
        })
        .collect();
    Classification {
        group,
        allowed,
        solutions,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowReport {
    pub row_id: u8,
    pub group: GroupTag,
    pub sing_type: String,
    pub eta_product: String,
    pub truncation: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Runs every exactly checkable property of one action.
pub fn verify_row(row: &ActionRecord, locals: &LocalFactorSet, truncation: usize) -> RowReport {
    let mut checks = Vec::new();
    let st = &row.sing_type;
    let eta = &row.reference_product;

    match assemble_z(row, locals, truncation) {
        Ok(z) => {
            let prod = z.mul(&eta.expansion(truncation));
            let cmp = prod.compare(&IntSeries::one(truncation));
            let detail = match cmp.first_mismatch {
                None => format!("Z * eta-product = 1 + O(q^{truncation})"),
                Some(i) => format!("product differs from 1 at q^{i}"),
            };
            checks.push(Check::new("assembly_matches_reference", cmp.equal, detail));
            let lead_ok = z.offset() == Rational64::from_integer(0)
                && z.leading().is_some_and(|c| *c == 1.into());
            checks.push(Check::new(
                "leading_coefficient_one",
                lead_ok,
                format!("Z = {}", z.truncate(4)),
            ));
        }
        Err(e) => {
            checks.push(Check::new(
                "assembly_matches_reference",
                false,
                e.to_string(),
            ));
            checks.push(Check::new(
                "leading_coefficient_one",
                false,
                "assembly failed",
            ));
        }
    }

    let cusps = eta.koehler_check();
    checks.push(Check::new(
        "koehler_holomorphic_non_cuspidal",
        cusps.is_holomorphic() && cusps.has_zero_cusp(),
        format!("{:?}", cusps.classification).to_lowercase(),
    ));

    let ord = eta.order_at_infinity();
    checks.push(Check::new(
        "order_at_infinity_zero",
        ord == Rational64::from_integer(0),
        format!("{ord}"),
    ));

    let w = eta.weight();
    let half_e = Rational64::new(row.euler_quotient, 2);
    checks.push(Check::new(
        "weight_is_half_euler",
        w == half_e && w == row.weight(),
        format!(
            "eta weight {w}, e(A/G)/2 = {half_e}, listed {}",
            row.weight()
        ),
    ));

    checks.push(Check::new(
        "level_is_group_order",
        eta.level() == row.order as u64,
        format!("level {}, |G| = {}", eta.level(), row.order),
    ));

    let e_re = st.smooth_locus_euler() + Rational64::from_integer(st.r() as i64);
    checks.push(Check::new(
        "euler_quotient_consistent",
        e_re == Rational64::from_integer(row.euler_quotient),
        format!("e(smooth) + r = {e_re}, listed {}", row.euler_quotient),
    ));

    if row.group == GroupTag::Trivial {
        checks.push(Check::new(
            "resolution_euler_24",
            true,
            "not applicable to the trivial action",
        ));
    } else {
        let ey = st.resolution_euler();
        checks.push(Check::new(
            "resolution_euler_24",
            ey == Rational64::from_integer(24),
            format!("e(Y) = {ey}"),
        ));
    }

    let pass = checks.iter().all(|c| c.pass);
    RowReport {
        row_id: row.row_id,
        group: row.group,
        sing_type: st.to_string(),
        eta_product: eta.to_string(),
        truncation,
        checks,
        pass,
    }
}
