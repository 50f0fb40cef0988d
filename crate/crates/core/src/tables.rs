//! Reviewed reference constants: the translation-free action table (eta exponents,
//! singularity counts, weights), the normalized tau-BPS table, and the per-group list
//! of stabilizer types. Everything else in the crate is computed.

use crate::catalog::{AdeType, GroupTag};

use AdeType::*;

pub struct RowSpec {
    pub row_id: u8,
    pub group: GroupTag,
    pub singularities: &'static [(AdeType, u32)],
    /// Exponents `(m, a_m)` of the eta product for `Z_{A,G}^{-1}`.
    pub eta: &'static [(u64, i64)],
    /// Twice the printed weight column `e(A/G) / 2`.
    pub weight_twice: i64,
}

pub const ACTION_ROWS: [RowSpec; 11] = [
    // Row 1, trivial group: Z^{-1} = 1, weight 0
    RowSpec {
        row_id: 1,
        group: GroupTag::Trivial,
        singularities: &[],
        eta: &[],
        weight_twice: 0,
    },
    // Row 2, Z2: 16A1, eta^16(q) / eta^8(q^2), weight 4
    RowSpec {
        row_id: 2,
        group: GroupTag::Z2,
        singularities: &[(A1, 16)],
        eta: &[(1, 16), (2, -8)],
        weight_twice: 8,
    },
    // Row 3, Z3: 9A2, eta^9(q) / eta^3(q^3), weight 3
    RowSpec {
        row_id: 3,
        group: GroupTag::Z3,
        singularities: &[(A2, 9)],
        eta: &[(1, 9), (3, -3)],
        weight_twice: 6,
    },
    // Row 4, Z4: 4A3 + 6A1, eta^6(q^2) eta^4(q) / eta^4(q^4), weight 3
    RowSpec {
        row_id: 4,
        group: GroupTag::Z4,
        singularities: &[(A3, 4), (A1, 6)],
        eta: &[(2, 6), (1, 4), (4, -4)],
        weight_twice: 6,
    },
    // Row 5, Z6: A5 + 4A2 + 5A1, eta^5(q^3) eta^4(q^2) eta(q) / eta^4(q^6), weight 3
    RowSpec {
        row_id: 5,
        group: GroupTag::Z6,
        singularities: &[(A5, 1), (A2, 4), (A1, 5)],
        eta: &[(3, 5), (2, 4), (1, 1), (6, -4)],
        weight_twice: 6,
    },
    // Row 6, Q: 2D4 + 3A3 + 2A1, eta^8(q^4) eta^2(q) / (eta^4(q^8) eta(q^2)), weight 5/2
    RowSpec {
        row_id: 6,
        group: GroupTag::Q,
        singularities: &[(D4, 2), (A3, 3), (A1, 2)],
        eta: &[(4, 8), (1, 2), (8, -4), (2, -1)],
        weight_twice: 5,
    },
    // Row 7, Q: 4D4 + 3A1, eta^15(q^4) eta^4(q) / (eta^6(q^8) eta^8(q^2)), weight 5/2
    RowSpec {
        row_id: 7,
        group: GroupTag::Q,
        singularities: &[(D4, 4), (A1, 3)],
        eta: &[(4, 15), (1, 4), (8, -6), (2, -8)],
        weight_twice: 5,
    },
    // Row 8, Q: 6A3 + A1, eta(q^4) eta^6(q^2) / eta^2(q^8), weight 5/2
    RowSpec {
        row_id: 8,
        group: GroupTag::Q,
        singularities: &[(A3, 6), (A1, 1)],
        eta: &[(4, 1), (2, 6), (8, -2)],
        weight_twice: 5,
    },
    // Row 9, D: D5 + 3A3 + 2A2 + A1,
    // eta^3(q^6) eta^3(q^4) eta^3(q^3) eta(q) / (eta^3(q^12) eta^2(q^2)), weight 5/2
    RowSpec {
        row_id: 9,
        group: GroupTag::D,
        singularities: &[(D5, 1), (A3, 3), (A2, 2), (A1, 1)],
        eta: &[(6, 3), (4, 3), (3, 3), (1, 1), (12, -3), (2, -2)],
        weight_twice: 5,
    },
    // Row 10, T: E6 + D4 + 4A2 + A1,
    // eta^5(q^12) eta^6(q^8) eta(q^3) eta(q) / (eta^4(q^24) eta^2(q^6) eta^2(q^2)), weight 5/2
    RowSpec {
        row_id: 10,
        group: GroupTag::T,
        singularities: &[(E6, 1), (D4, 1), (A2, 4), (A1, 1)],
        eta: &[(12, 5), (8, 6), (3, 1), (1, 1), (24, -4), (6, -2), (2, -2)],
        weight_twice: 5,
    },
    // Row 11, T: A5 + 2A3 + 4A2, eta^4(q^8) eta^2(q^6) eta(q^4) / eta^2(q^24), weight 5/2
    RowSpec {
        row_id: 11,
        group: GroupTag::T,
        singularities: &[(A5, 1), (A3, 2), (A2, 4)],
        eta: &[(8, 4), (6, 2), (4, 1), (24, -2)],
        weight_twice: 5,
    },
];

/// Normalized invariants `n_d(h) / 16`, rows `h = 0..=4`, columns `d = 0..=7`.
pub const BPS_REFERENCE: [[i64; 8]; 5] = [
    [1, 16, 144, 960, 5264, 25056, 106944, 418176],
    [0, 0, -2, -32, -294, -2016, -11400, -56000],
    [0, 0, 0, 0, 3, 48, 448, 3136],
    [0, 0, 0, 0, 0, 0, -4, -64],
    [0, 0, 0, 0, 0, 0, 0, 0],
];

/// The only nonzero hyperelliptic count in degree 0 is `h_0(1) = 4`.
pub const H0_GENUS1: i64 = 4;

/// Stabilizer types that may occur for each group, read off the table above together
/// with the subgroup structure (Q has type D4, D has type D5, T has type E6 and
/// contains Q as its unique normal subgroup of order 8).
pub fn allowed_stabilizers(group: GroupTag) -> &'static [AdeType] {
    match group {
        GroupTag::Trivial => &[],
        GroupTag::Z2 => &[A1],
        GroupTag::Z3 => &[A2],
        GroupTag::Z4 => &[A1, A3],
        GroupTag::Z6 => &[A1, A2, A5],
        GroupTag::Q => &[A1, A3, D4],
        GroupTag::D => &[A1, A2, A3, D5],
        GroupTag::T => &[A1, A2, A3, A5, D4, E6],
    }
}
