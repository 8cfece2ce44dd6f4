//! Full two-mode Hamiltonian on a truncated Fock basis.
//!
//! The basis is block-complete: every anchor |1,n₁,n₂⟩ with n₁ ≤ N1max and
//! n₂ ≤ N2max comes with both partners |2,n₁−1,n₂⟩ and |3,n₁−1,n₂+1⟩, so each
//! kept block evolves exactly and truncation only acts through the field
//! amplitudes that are dropped. The uncoupled singletons |1,0,n₂⟩ and |3,n₁,0⟩
//! are included as well.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{EitError, Result};
use crate::hamiltonian::Mat3;
use crate::params::SystemParams;

pub const DEFAULT_DIMENSION_CAP: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomLevel {
    One,
    Two,
    Three,
}

impl AtomLevel {
    pub fn index(&self) -> usize {
        match self {
            AtomLevel::One => 0,
            AtomLevel::Two => 1,
            AtomLevel::Three => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    pub level: AtomLevel,
    pub n1: u32,
    pub n2: u32,
}

impl BasisState {
    pub fn new(level: AtomLevel, n1: u32, n2: u32) -> Self {
        Self { level, n1, n2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingKind {
    Probe,
    Coupling,
}

/// One off-diagonal pair (i < j) with the value at unit coupling scale.
#[derive(Debug, Clone, Copy)]
struct OffDiagonal {
    i: usize,
    j: usize,
    value: f64,
    kind: CouplingKind,
}

#[derive(Debug, Clone)]
pub struct TruncatedHamiltonian {
    pub n1_max: u32,
    pub n2_max: u32,
    basis: Vec<BasisState>,
    index: HashMap<BasisState, usize>,
    diagonal: Vec<f64>,
    off: Vec<OffDiagonal>,
    scale_g1: f64,
    scale_g2: f64,
}

pub fn build_truncated_hamiltonian(
    params: &SystemParams,
    n1_max: u32,
    n2_max: u32,
    scale_g1: f64,
    scale_g2: f64,
) -> Result<TruncatedHamiltonian> {
    TruncatedHamiltonian::build(params, n1_max, n2_max, scale_g1, scale_g2, DEFAULT_DIMENSION_CAP)
}

impl TruncatedHamiltonian {
    /// Block-complete basis size for the given anchor ranges.
    pub fn dimension_for(n1_max: u32, n2_max: u32) -> usize {
        let (n1, n2) = (n1_max as usize, n2_max as usize);
        (n2 + 1) * (3 * n1 + 1) + (n1 + 1)
    }

    pub fn build(
        params: &SystemParams,
        n1_max: u32,
        n2_max: u32,
        scale_g1: f64,
        scale_g2: f64,
        cap: usize,
    ) -> Result<Self> {
        for (name, value) in [("scale_g1", scale_g1), ("scale_g2", scale_g2)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(EitError::InvalidParameter {
                    name,
                    value,
                    reason: "coupling scale must lie in [0, 1]",
                });
            }
        }
        let dim = Self::dimension_for(n1_max, n2_max);
        if dim > cap {
            return Err(EitError::DimensionCap { dim, cap });
        }

        let mut basis = Vec::with_capacity(dim);
        for n1 in 0..=n1_max {
            for n2 in 0..=n2_max {
                basis.push(BasisState::new(AtomLevel::One, n1, n2));
                if n1 >= 1 {
                    basis.push(BasisState::new(AtomLevel::Two, n1 - 1, n2));
                    basis.push(BasisState::new(AtomLevel::Three, n1 - 1, n2 + 1));
                }
            }
        }
        for n1 in 0..=n1_max {
            basis.push(BasisState::new(AtomLevel::Three, n1, 0));
        }
        debug_assert_eq!(basis.len(), dim);

        let index: HashMap<BasisState, usize> =
            basis.iter().enumerate().map(|(i, s)| (*s, i)).collect();

        let diagonal = basis
            .iter()
            .map(|s| match s.level {
                AtomLevel::One => 0.0,
                AtomLevel::Two => params.delta1,
                AtomLevel::Three => params.delta1 - params.delta2,
            })
            .collect();

        // −g₁ a₁|2⟩⟨1|: ⟨2,n₁−1,n₂| a₁ |1,n₁,n₂⟩ = √n₁
        // −g₂ a₂|2⟩⟨3|: ⟨2,m,n₂| a₂ |3,m,n₂+1⟩ = √(n₂+1)
        let mut off = Vec::new();
        for (i, s) in basis.iter().enumerate() {
            match s.level {
                AtomLevel::One if s.n1 >= 1 => {
                    let j = index[&BasisState::new(AtomLevel::Two, s.n1 - 1, s.n2)];
                    off.push(OffDiagonal {
                        i: i.min(j),
                        j: i.max(j),
                        value: -params.g1 * f64::from(s.n1).sqrt(),
                        kind: CouplingKind::Probe,
                    });
                }
                AtomLevel::Two => {
                    let j = index[&BasisState::new(AtomLevel::Three, s.n1, s.n2 + 1)];
                    off.push(OffDiagonal {
                        i: i.min(j),
                        j: i.max(j),
                        value: -params.g2 * f64::from(s.n2 + 1).sqrt(),
                        kind: CouplingKind::Coupling,
                    });
                }
                _ => {}
            }
        }

        Ok(Self {
            n1_max,
            n2_max,
            basis,
            index,
            diagonal,
            off,
            scale_g1,
            scale_g2,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (3, self.n1_max as usize + 1, self.n2_max as usize + 1)
    }

    pub fn basis(&self) -> &[BasisState] {
        &self.basis
    }

    pub fn index_of(&self, state: BasisState) -> Option<usize> {
        self.index.get(&state).copied()
    }

    pub fn set_scales(&mut self, scale_g1: f64, scale_g2: f64) {
        self.scale_g1 = scale_g1;
        self.scale_g2 = scale_g2;
    }

    fn scale(&self, kind: CouplingKind) -> f64 {
        match kind {
            CouplingKind::Probe => self.scale_g1,
            CouplingKind::Coupling => self.scale_g2,
        }
    }

    /// Matrix element ⟨i|H|j⟩.
    pub fn element(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diagonal[i];
        }
        let (lo, hi) = (i.min(j), i.max(j));
        self.off
            .iter()
            .find(|o| o.i == lo && o.j == hi)
            .map_or(0.0, |o| o.value * self.scale(o.kind))
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut m = vec![0.0; n * n];
        for (i, d) in self.diagonal.iter().enumerate() {
            m[i * n + i] = *d;
        }
        for o in &self.off {
            let v = o.value * self.scale(o.kind);
            m[o.i * n + o.j] = v;
            m[o.j * n + o.i] = v;
        }
        m
    }

    /// Largest |Hᵢⱼ − Hⱼᵢ| relative to the Frobenius norm.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let m = self.to_dense();
        let norm = m.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((m[i * n + j] - m[j * n + i]).abs());
            }
        }
        worst / norm
    }

    /// 3×3 restriction to the block anchored at |1,n₁,n₂⟩ (n₁ ≥ 1).
    pub fn block_submatrix(&self, n1: u32, n2: u32) -> Option<Mat3> {
        if n1 == 0 {
            return None;
        }
        let idx = [
            self.index_of(BasisState::new(AtomLevel::One, n1, n2))?,
            self.index_of(BasisState::new(AtomLevel::Two, n1 - 1, n2))?,
            self.index_of(BasisState::new(AtomLevel::Three, n1 - 1, n2 + 1))?,
        ];
        let mut m = [[0.0; 3]; 3];
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                m[r][c] = self.element(i, j);
            }
        }
        Some(m)
    }

    /// Largest Rabi-type frequency in the basis: max over blocks of
    /// 2√(g₁²n₁ + g₂²(n₂+1)) at the current scales, plus the detunings.
    pub fn max_frequency(&self) -> f64 {
        let mut acc = vec![0.0f64; self.dim()];
        for o in &self.off {
            let v = (o.value * self.scale(o.kind)).powi(2);
            acc[o.i] += v;
            acc[o.j] += v;
        }
        let coupling = acc.iter().fold(0.0f64, |m, v| m.max(*v)).sqrt() * 2.0;
        let detuning = self.diagonal.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        coupling + detuning
    }

    /// out = −i·H·psi with separate probe/coupling scales.
    pub(crate) fn apply_minus_i(
        &self,
        scale_g1: f64,
        scale_g2: f64,
        psi: &[Complex64],
        out: &mut [Complex64],
    ) {
        for ((o, p), d) in out.iter_mut().zip(psi).zip(&self.diagonal) {
            *o = p * *d;
        }
        for od in &self.off {
            let v = od.value
                * match od.kind {
                    CouplingKind::Probe => scale_g1,
                    CouplingKind::Coupling => scale_g2,
                };
            out[od.i] += psi[od.j] * v;
            out[od.j] += psi[od.i] * v;
        }
        for o in out.iter_mut() {
            *o = Complex64::new(o.im, -o.re);
        }
    }
}
