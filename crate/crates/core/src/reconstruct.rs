//! Reconstruction of spin matrices from expectation values on the six
//! canonical qubit states, and the test for whether those statistics can come
//! from a triple obeying the spin algebra.
//!
//! For Hermitian `S_k = Σ_n s_kn σ_n` (with `σ_0 = 1`) and the states `ρ_{±l}`
//! with Bloch vectors `±e_l`, `tr(S_k ρ_{±l}) = s_k0 ± s_kl`. The ± pairs
//! therefore pin the trace parts, and the +l column gives
//! `S_k = Σ_l s̄_k(ρ_l) σ_l` once those vanish.

use std::collections::BTreeMap;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, real, CMatrix2};
use crate::spinops::{self, OperatorKind, SpinTriple};
use crate::{Error, Result};

/// Default verdict tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Canonical state labels, in column order.
pub const STATE_LABELS: [&str; 6] = ["+x", "-x", "+y", "-y", "+z", "-z"];
pub const COMPONENT_LABELS: [&str; 3] = ["x", "y", "z"];

/// Column index of `ρ_{+l}` / `ρ_{−l}` for axis `l`.
#[inline]
fn plus(l: usize) -> usize {
    2 * l
}

#[inline]
fn minus(l: usize) -> usize {
    2 * l + 1
}

/// The six density matrices with Bloch vectors `+x̂, −x̂, +ŷ, −ŷ, +ẑ, −ẑ`.
pub fn canonical_states() -> [CMatrix2; 6] {
    std::array::from_fn(|col| {
        let axis = col / 2;
        let sign = if col % 2 == 0 { 0.5 } else { -0.5 };
        CMatrix2::identity() * real(0.5) + linalg::pauli(axis) * real(sign)
    })
}

/// `s̄_k(ρ_l)` for `k ∈ {x, y, z}` and the six canonical states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, f64>", into = "BTreeMap<String, f64>")]
pub struct ExpectationTable {
    values: [[f64; 6]; 3],
}

impl ExpectationTable {
    /// Rows are components `x, y, z`; columns follow [`STATE_LABELS`].
    pub fn new(values: [[f64; 6]; 3]) -> Result<Self> {
        for (k, row) in values.iter().enumerate() {
            for (l, &v) in row.iter().enumerate() {
                if !v.is_finite() || v.abs() > 0.5 + 1e-12 {
                    return Err(Error::ExpectationOutOfRange {
                        entry: entry_name(k, l),
                        value: v,
                    });
                }
            }
        }
        Ok(Self { values })
    }

    /// Table of `tr(S_k ρ_l)` for an arbitrary triple, without range checks.
    pub fn from_triple(t: &SpinTriple) -> Self {
        let states = canonical_states();
        let mut values = [[0.0; 6]; 3];
        for (k, row) in values.iter_mut().enumerate() {
            for (l, rho) in states.iter().enumerate() {
                row[l] = (t.component(k) * rho).trace().re;
            }
        }
        Self { values }
    }

    pub fn get(&self, component: usize, state: usize) -> f64 {
        self.values[component][state]
    }

    pub fn values(&self) -> &[[f64; 6]; 3] {
        &self.values
    }

    /// `max_{k,l} |s̄_k(ρ_l) + s̄_k(ρ_{−l})| / 2`, the largest inferred `|s_k0|`.
    pub fn trace_part_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for row in &self.values {
            for l in 0..3 {
                worst = worst.max(0.5 * (row[plus(l)] + row[minus(l)]).abs());
            }
        }
        worst
    }

    /// `c[(l, k)] = s̄_k(ρ_{+l})`.
    fn plus_columns(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|l, k| self.values[k][plus(l)])
    }
}

fn entry_name(k: usize, l: usize) -> String {
    format!("s{}({})", COMPONENT_LABELS[k], STATE_LABELS[l])
}

impl From<ExpectationTable> for BTreeMap<String, f64> {
    fn from(t: ExpectationTable) -> Self {
        let mut map = BTreeMap::new();
        for k in 0..3 {
            for l in 0..6 {
                map.insert(entry_name(k, l), t.values[k][l]);
            }
        }
        map
    }
}

impl TryFrom<BTreeMap<String, f64>> for ExpectationTable {
    type Error = Error;

    fn try_from(mut map: BTreeMap<String, f64>) -> Result<Self> {
        let mut values = [[0.0; 6]; 3];
        for (k, row) in values.iter_mut().enumerate() {
            for (l, slot) in row.iter_mut().enumerate() {
                let name = entry_name(k, l);
                *slot = map
                    .remove(&name)
                    .ok_or_else(|| Error::InvalidArgument(format!("missing table entry `{name}`")))?;
            }
        }
        if let Some(extra) = map.keys().next() {
            return Err(Error::InvalidArgument(format!("unknown table entry `{extra}`")));
        }
        Self::new(values)
    }
}

/// `s̄_k(ρ_l) = tr(S_k ρ_l)` for the chosen kind at momentum `p`.
pub fn expectation_table(kind: OperatorKind, m: f64, p: &nalgebra::Vector3<f64>) -> Result<ExpectationTable> {
    let triple = spinops::restricted_spin(kind, m, p)?;
    ExpectationTable::new(ExpectationTable::from_triple(&triple).values)
}

/// `S_k = Σ_l s̄_k(ρ_l) σ_l`, at the default tolerance for the trace-part check.
pub fn reconstruct_operators(t: &ExpectationTable) -> Result<SpinTriple> {
    reconstruct_operators_with_tolerance(t, DEFAULT_TOLERANCE)
}

pub fn reconstruct_operators_with_tolerance(t: &ExpectationTable, tolerance: f64) -> Result<SpinTriple> {
    let residual = t.trace_part_residual();
    if residual > tolerance {
        return Err(Error::InconsistentTable { residual, tolerance });
    }
    Ok(reconstruct_unchecked(t))
}

fn reconstruct_unchecked(t: &ExpectationTable) -> SpinTriple {
    // from_pauli_coefficients builds Σ_l c_lk σ_l / 2, so double the coefficients.
    SpinTriple::from_pauli_coefficients(&(t.plus_columns() * 2.0))
}

/// Outcome of the necessary-and-sufficient algebra test on a table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma2Report {
    pub triple: SpinTriple,
    /// Largest inferred trace part `|s_k0|`.
    pub trace_residual: f64,
    /// `max |2 Σ_{m,n} s̄_j(ρ_m) s̄_k(ρ_n) ε_mnp − Σ_l ε_jkl s̄_l(ρ_p)|`.
    pub epsilon_residual: f64,
    /// `(j, k, p)` attaining `epsilon_residual`.
    pub epsilon_worst: (usize, usize, usize),
    /// Commutator defect of the reconstructed triple.
    pub algebra_residual: f64,
    pub tolerance: f64,
    /// Verdict from the table identity alone.
    pub epsilon_pass: bool,
    /// Verdict from the reconstructed operators alone.
    pub commutator_pass: bool,
    /// Both residuals (trace part and algebra) below tolerance.
    pub pass: bool,
}

impl Lemma2Report {
    pub fn verdicts_agree(&self) -> bool {
        self.epsilon_pass == self.commutator_pass
    }
}

/// Evaluates the table identity for spin-½ normalization,
/// `2 s̄_j(ρ_m) s̄_k(ρ_n) ε_mnp = ε_jkl s̄_l(ρ_p)` over the `+` states, for all
/// 27 `(j, k, p)`, alongside the commutator defect of the reconstruction.
pub fn lemma2_check(t: &ExpectationTable, tolerance: f64) -> Lemma2Report {
    let c = t.plus_columns();
    // s(j, m) = s̄_j(ρ_m)
    let s = |j: usize, m: usize| c[(m, j)];
    let mut epsilon_residual = 0.0f64;
    let mut epsilon_worst = (0, 0, 0);
    for j in 0..3 {
        for k in 0..3 {
            for p in 0..3 {
                let mut lhs = 0.0;
                for m in 0..3 {
                    for n in 0..3 {
                        lhs += 2.0 * s(j, m) * s(k, n) * linalg::levi_civita(m, n, p);
                    }
                }
                let rhs: f64 = (0..3).map(|l| linalg::levi_civita(j, k, l) * s(l, p)).sum();
                let r = (lhs - rhs).abs();
                if r > epsilon_residual {
                    epsilon_residual = r;
                    epsilon_worst = (j, k, p);
                }
            }
        }
    }
    let triple = reconstruct_unchecked(t);
    let trace_residual = t.trace_part_residual();
    let algebra_residual = spinops::commutator_defect(&triple);
    let epsilon_pass = epsilon_residual < tolerance;
    let commutator_pass = algebra_residual < tolerance;
    Lemma2Report {
        triple,
        trace_residual,
        epsilon_residual,
        epsilon_worst,
        algebra_residual,
        tolerance,
        epsilon_pass,
        commutator_pass,
        pass: trace_residual < tolerance && epsilon_pass,
    }
}
