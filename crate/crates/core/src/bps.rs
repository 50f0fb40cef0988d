//! Enumerative generating series: normalized chi_y genera of invariant Hilbert schemes,
//! tau-BPS invariants, hyperelliptic counts, and the K3 reference series.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::catalog::{ActionRecord, GroupTag};
use crate::error::{Error, Result};
use crate::eta::{euler_product, euler_product_qm, EtaProduct};
use crate::jacobi::{genus_expand, neg_t_over_phi, phi_m2_1, GenusExpansion};
use crate::series::{IntSeries, LaurentPoly, TwoVarSeries};
use crate::tables::BPS_REFERENCE;

/// Reference BPS values are stored as `n_d(h) / 16`.
pub const NORMALIZATION: i64 = 16;

/// `-t Z_{A,G}(q) / phi_{-2,1}(q^{|G|}, -y)`; the coefficient of `q^d` is the normalized
/// chi_y genus of the invariant Hilbert scheme of `d` points.
pub fn chi_y_series(row: &ActionRecord, truncation: usize) -> Result<TwoVarSeries> {
    if row.group == GroupTag::Trivial {
        return Err(Error::InvalidArgument(
            "chi_y series needs a non-trivial action".into(),
        ));
    }
    let z = row.reference_product.expansion(truncation).inverse()?;
    neg_t_over_phi(row.order as usize, truncation).mul_int_series(&z)
}

/// `prod (1-q^{2n})^8 / (1-q^n)^16`.
pub fn genus_zero_series(truncation: usize) -> IntSeries {
    euler_product_qm(2, truncation)
        .pow(8)
        .and_then(|num| Ok(num.mul(&euler_product(truncation).pow(-16)?)))
        .expect("leading coefficient 1")
}

/// `prod (1-q^{2n})^12 / ((1-q^n)^16 (1+q^{2n}y)^2 (1+q^{2n}y^{-1})^2)`, expanded directly.
pub fn bps_generating_series(truncation: usize) -> TwoVarSeries {
    let base = euler_product_qm(2, truncation)
        .pow(12)
        .and_then(|num| Ok(num.mul(&euler_product(truncation).pow(-16)?)))
        .expect("leading coefficient 1");
    let mut s = TwoVarSeries::from_int_series(&base).expect("integer offset");
    for m in (2..truncation).step_by(2) {
        for _ in 0..2 {
            s.div_binomial(1, 1, m);
            s.div_binomial(1, -1, m);
        }
    }
    s
}

fn big_strings(rows: &[Vec<BigInt>]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(BigInt::to_string).collect())
        .collect()
}

fn csv_table(rows: &[Vec<BigInt>], col: &str, first_col: usize) -> String {
    let width = rows.first().map_or(0, Vec::len);
    let mut out = String::from("d");
    for j in 0..width {
        out.push_str(&format!(",{col}={}", j + first_col));
    }
    out.push('\n');
    for (d, r) in rows.iter().enumerate() {
        out.push_str(&d.to_string());
        for v in r {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

/// Normalized tau-BPS invariants `n_d(h) / 16`, indexed `[d][h]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BpsTable {
    pub dmax: usize,
    pub hmax: usize,
    pub normalized: Vec<Vec<BigInt>>,
}

#[derive(Serialize, Deserialize)]
struct BpsTableJson {
    dmax: usize,
    hmax: usize,
    normalization: i64,
    normalized: Vec<Vec<String>>,
    raw: Vec<Vec<String>>,
}

impl BpsTable {
    pub fn get(&self, d: usize, h: usize) -> BigInt {
        self.normalized
            .get(d)
            .and_then(|r| r.get(h))
            .cloned()
            .unwrap_or_default()
    }

    pub fn raw(&self) -> Vec<Vec<BigInt>> {
        let n = BigInt::from(NORMALIZATION);
        self.normalized
            .iter()
            .map(|r| r.iter().map(|v| v * &n).collect())
            .collect()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(BpsTableJson {
            dmax: self.dmax,
            hmax: self.hmax,
            normalization: NORMALIZATION,
            normalized: big_strings(&self.normalized),
            raw: big_strings(&self.raw()),
        })
        .expect("plain data")
    }

    /// `d` rows, `h` columns.
    pub fn to_csv(&self) -> String {
        csv_table(&self.normalized, "h", 0)
    }

    /// Compares every printed entry of the reference table that lies inside this table.
    pub fn check_against_reference(&self) -> ReferenceCheck {
        let mut compared = 0;
        let mut mismatches = Vec::new();
        for (h, row) in BPS_REFERENCE.iter().enumerate() {
            for (d, &expected) in row.iter().enumerate() {
                if d > self.dmax || h > self.hmax {
                    continue;
                }
                compared += 1;
                let got = self.get(d, h);
                if got != BigInt::from(expected) {
                    mismatches.push(Mismatch {
                        d,
                        h,
                        expected: expected.to_string(),
                        computed: got.to_string(),
                    });
                }
            }
        }
        ReferenceCheck {
            compared,
            pass: mismatches.is_empty(),
            mismatches,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub d: usize,
    pub h: usize,
    pub expected: String,
    pub computed: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceCheck {
    pub compared: usize,
    pub pass: bool,
    pub mismatches: Vec<Mismatch>,
}

/// Genus-expands the BPS generating series through `q^dmax`.
pub fn bps_table(dmax: usize, hmax: usize) -> Result<BpsTable> {
    let s = bps_generating_series(dmax + 1);
    let mut normalized = Vec::with_capacity(dmax + 1);
    for d in 0..=dmax {
        let g = genus_expand(s.coeff(d))?;
        normalized.push((0..=hmax).map(|h| g.get(h)).collect());
    }
    Ok(BpsTable {
        dmax,
        hmax,
        normalized,
    })
}

/// Hyperelliptic counts `h_d(g)` for `g = 1..=gmax`, indexed `[d][g - 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticTable {
    pub dmax: usize,
    pub gmax: usize,
    pub entries: Vec<Vec<BigInt>>,
}

#[derive(Serialize, Deserialize)]
struct HyperellipticJson {
    dmax: usize,
    gmax: usize,
    genus_offset: usize,
    entries: Vec<Vec<String>>,
}

impl HyperellipticTable {
    pub fn get(&self, d: usize, g: usize) -> BigInt {
        if g == 0 {
            return BigInt::zero();
        }
        self.entries
            .get(d)
            .and_then(|r| r.get(g - 1))
            .cloned()
            .unwrap_or_default()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(HyperellipticJson {
            dmax: self.dmax,
            gmax: self.gmax,
            genus_offset: 1,
            entries: big_strings(&self.entries),
        })
        .expect("plain data")
    }

    /// `d` rows, `g` columns starting at `g = 1`.
    pub fn to_csv(&self) -> String {
        csv_table(&self.entries, "g", 1)
    }
}

/// `4 phi_{-2,1}(q, -w)^2` through `q^dmax`.
pub fn hyperelliptic_series(dmax: usize) -> TwoVarSeries {
    let phi = phi_m2_1(dmax + 1).substitute_neg_y();
    phi.mul(&phi)
        .mul_laurent(&LaurentPoly::constant(BigInt::from(4)))
}

/// Reads `h_d(g)` off the coefficient of `t^{g+1}`.
pub fn hyperelliptic_table(dmax: usize) -> Result<HyperellipticTable> {
    let gmax = dmax + 1;
    let s = hyperelliptic_series(dmax);
    let mut entries = Vec::with_capacity(dmax + 1);
    for d in 0..=dmax {
        let g: GenusExpansion = genus_expand(s.coeff(d))?;
        for power in [0, 1] {
            let v = g.get(power);
            if !v.is_zero() {
                return Err(Error::BasisOffsetViolation {
                    d,
                    power,
                    value: v.to_string(),
                });
            }
        }
        if let Some(top) = g.max_genus() {
            if top > gmax + 1 {
                return Err(Error::InconsistentDerivation(format!(
                    "q^{d} has a t^{top} term beyond genus {gmax}"
                )));
            }
        }
        entries.push((1..=gmax).map(|genus| g.get(genus + 1)).collect());
    }
    Ok(HyperellipticTable {
        dmax,
        gmax,
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbBopyLine {
    pub d: usize,
    /// `n_d(0)`, not normalized.
    pub n_d0: String,
    /// `sum_g h_d(g) 4^g`.
    pub weighted_sum: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbBopyReport {
    pub dmax: usize,
    pub lines: Vec<HilbBopyLine>,
    pub pass: bool,
}

/// Checks `n_d(0) = sum_g h_d(g) 2^{2g}` for every `d <= dmax`.
pub fn verify_hilb_bopy_with(table: &HyperellipticTable) -> HilbBopyReport {
    let g0 = genus_zero_series(table.dmax + 1);
    let lines: Vec<HilbBopyLine> = (0..=table.dmax)
        .map(|d| {
            let lhs = g0.coeff(d) * NORMALIZATION;
            let mut rhs = BigInt::zero();
            let mut four = BigInt::one();
            for g in 1..=table.gmax {
                four *= 4;
                rhs += table.get(d, g) * &four;
            }
            HilbBopyLine {
                d,
                pass: lhs == rhs,
                n_d0: lhs.to_string(),
                weighted_sum: rhs.to_string(),
            }
        })
        .collect();
    HilbBopyReport {
        dmax: table.dmax,
        pass: lines.iter().all(|l| l.pass),
        lines,
    }
}

pub fn verify_hilb_bopy(dmax: usize) -> Result<HilbBopyReport> {
    Ok(verify_hilb_bopy_with(&hyperelliptic_table(dmax)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub truncation: usize,
    pub pass: bool,
    pub first_mismatch: Option<usize>,
}

/// `16 eta(q^2)^8 / eta(q)^16 = phi_{-2,1}(q, -1)^2`, coefficientwise.
///
/// `y -> -1` is a ring map, so `phi` is specialized before squaring.
pub fn verify_phi_square_identity(truncation: usize) -> Result<IdentityCheck> {
    let lhs = EtaProduct::new(2, [(2, 8), (1, -16)])?
        .expansion(truncation)
        .scale(&BigInt::from(NORMALIZATION));
    let phi1 = phi_m2_1(truncation).eval_y(-1)?;
    let rhs = phi1.mul(&phi1);
    let cmp = lhs.compare(&rhs);
    Ok(IdentityCheck {
        truncation,
        pass: cmp.equal && cmp.compared == truncation,
        first_mismatch: cmp.first_mismatch,
    })
}

/// K3 reference series.
#[derive(Clone, Debug, PartialEq)]
pub struct K3Reference {
    /// `q^{-1} prod (1 - q^n)^{-24}`; the coefficient of `q^{d-1}` is `e(Hilb^d(K3))`.
    pub euler: IntSeries,
    /// `q^{-1} prod 1 / ((1-q^n)^20 (1+yq^n)^2 (1+y^{-1}q^n)^2)`.
    pub kkv: TwoVarSeries,
}

/// Builds both K3 series and checks that the product form of the KKV series equals
/// `-t / (Delta(q) phi_{-2,1}(q, -y))`, i.e. `kkv * Delta * phi(q, -y) = -t`.
pub fn k3_reference_series(truncation: usize) -> Result<K3Reference> {
    let euler = euler_product(truncation)
        .pow(-24)?
        .with_offset((-1).into())?;

    let base = euler_product(truncation).pow(-20)?;
    let mut kkv = TwoVarSeries::from_int_series(&base)?;
    for n in 1..truncation {
        for _ in 0..2 {
            kkv.div_binomial(1, 1, n);
            kkv.div_binomial(1, -1, n);
        }
    }
    let kkv = TwoVarSeries::new(-1, kkv.qcoeffs().to_vec());

    let delta = euler_product(truncation).pow(24)?.with_offset(1.into())?;
    let phi = phi_m2_1(truncation).substitute_neg_y().truncate(truncation);
    let check = kkv.mul_int_series(&delta)?.mul(&phi);
    let expected = TwoVarSeries::one(truncation).mul_laurent(&LaurentPoly::genus_t().neg());
    if check != expected {
        let i = (0..truncation)
            .find(|&i| check.coeff(i) != expected.coeff(i))
            .unwrap_or(0);
        return Err(Error::InconsistentDerivation(format!(
            "KKV product and quotient forms differ at q^{}",
            i
        )));
    }
    Ok(K3Reference { euler, kkv })
}
