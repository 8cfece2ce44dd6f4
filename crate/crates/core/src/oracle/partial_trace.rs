//! Brute-force reduced density matrix: expand |Ψ⟩ on the product basis
//! |m, n₁, n₂⟩ and trace out the photons directly.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::oracle::truncated::{AtomLevel, BasisState};
use crate::state::AdiabaticState;
use crate::summation::ComplexNeumaierSum;

/// Amplitudes of a state on the atom ⊗ two-mode product basis.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BasisAmplitudes {
    pub amplitudes: BTreeMap<BasisState, Complex64>,
}

impl BasisAmplitudes {
    /// Each dark term spreads over |1,n₁,n₂⟩, |2,n₁−1,n₂⟩, |3,n₁−1,n₂+1⟩.
    pub fn from_state(state: &AdiabaticState) -> Self {
        let mut amplitudes = BTreeMap::new();
        let mut put = |s: BasisState, v: Complex64| {
            if v != Complex64::new(0.0, 0.0) {
                *amplitudes.entry(s).or_insert(Complex64::new(0.0, 0.0)) += v;
            }
        };
        for term in &state.terms {
            let w = term.amplitude;
            put(BasisState::new(AtomLevel::One, term.n1, term.n2), w * term.triple.a);
            if term.n1 >= 1 {
                put(BasisState::new(AtomLevel::Two, term.n1 - 1, term.n2), w * term.triple.b);
                put(
                    BasisState::new(AtomLevel::Three, term.n1 - 1, term.n2 + 1),
                    w * term.triple.c,
                );
            }
        }
        Self { amplitudes }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|c| c.norm_sqr()).sum()
    }
}

/// ρᴬᵢⱼ = Σ_{n₁,n₂} ψ(i,n₁,n₂) ψ*(j,n₁,n₂).
pub fn partial_trace(psi: &BasisAmplitudes) -> [[Complex64; 3]; 3] {
    let mut by_photons: BTreeMap<(u32, u32), [Complex64; 3]> = BTreeMap::new();
    for (s, v) in &psi.amplitudes {
        by_photons.entry((s.n1, s.n2)).or_insert([Complex64::new(0.0, 0.0); 3])[s.level.index()] =
            *v;
    }
    let mut acc = [[ComplexNeumaierSum::new(); 3]; 3];
    for column in by_photons.values() {
        for i in 0..3 {
            for j in 0..3 {
                acc[i][j] += column[i] * column[j].conj();
            }
        }
    }
    let mut rho = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            rho[i][j] = acc[i][j].value();
        }
    }
    rho
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::params::SystemParams;
    use crate::state::{adiabatic_state, reduced_density_matrix};

    #[test]
    fn matches_d_coefficient_assembly() {
        let mut p = SystemParams::dimensionless(0.7, 1.2, 0.03, -0.01);
        p.omega1 = 5.0;
        p.omega2 = 6.5;
        let fields = [
            FieldSpec::coherent(1.5, 2.0),
            FieldSpec::fock(2, 3),
            FieldSpec::product(
                vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.48), Complex64::new(0.64, 0.0)],
                vec![Complex64::new(0.8, 0.0), Complex64::new(0.6, 0.0)],
            ),
        ];
        for f in &fields {
            for t in [0.0, 0.9] {
                let state = adiabatic_state(&p, f, t);
                let brute = partial_trace(&BasisAmplitudes::from_state(&state));
                let assembled = reduced_density_matrix(&p, f, t);
                assert!(assembled.max_abs_diff(&brute) < 1e-12);
            }
        }
    }

    #[test]
    fn basis_norm_equals_state_norm() {
        let p = SystemParams::dimensionless(1.0, 1.0, 0.05, 0.0);
        let state = adiabatic_state(&p, &FieldSpec::coherent(1.0, 1.0), 0.3);
        let b = BasisAmplitudes::from_state(&state);
        assert!((b.norm_sqr() - state.norm_sqr()).abs() < 1e-14);
    }
}
