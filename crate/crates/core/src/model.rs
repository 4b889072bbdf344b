//! Double-dot Hamiltonian and its perturbative effective models.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{annihilation_operator, creation_operator, number_operator, Dot, Mode, Operator, Spin, C64, DIM};

/// Basis indices of `{|0101>, |0110>, |1001>, |1010>}`, the full-model
/// states identified with the two-qubit basis `{|00>, |01>, |10>, |11>}`.
pub const TWO_QUBIT_EMBEDDING: [usize; 4] = [5, 6, 9, 10];

/// Basis index of `|0110>` (one electron `1↑`, one electron `2↓`).
pub const PAIR_STATE_A: usize = 6;
/// Basis index of `|1001>` (one electron `1↓`, one electron `2↑`).
pub const PAIR_STATE_B: usize = 9;

const DENOMINATOR_EPS: f64 = 1e-12;

/// Hamiltonian couplings, all in units of `J'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    /// Zeeman splitting of dot 1 (δ₁).
    pub zeeman1: f64,
    /// Zeeman splitting of dot 2 (δ₂).
    pub zeeman2: f64,
    /// Intra-dot Coulomb repulsion (J).
    pub coulomb_intra: f64,
    /// Inter-dot Coulomb repulsion (J').
    pub coulomb_inter: f64,
    /// Crossed Andreev reflection amplitude (Δ).
    pub car: f64,
    /// Spin-preserving cotunneling amplitude (γ).
    pub cotunneling: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::benchmark()
    }
}

impl ModelParams {
    /// `Δ = 0.05`, `γ = 0.005`, `J = 4`, `J' = 1`, `δ₁ = δ₂ = 0.5`.
    pub const fn benchmark() -> Self {
        ModelParams {
            zeeman1: 0.5,
            zeeman2: 0.5,
            coulomb_intra: 4.0,
            coulomb_inter: 1.0,
            car: 0.05,
            cotunneling: 0.005,
        }
    }

    /// Same parameters with the off-diagonal couplings switched off.
    pub fn uncoupled(self) -> Self {
        ModelParams {
            car: 0.0,
            cotunneling: 0.0,
            ..self
        }
    }

    /// Checks finiteness, `J' > 0` and the perturbative denominators.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("zeeman1", self.zeeman1),
            ("zeeman2", self.zeeman2),
            ("coulomb_intra", self.coulomb_intra),
            ("coulomb_inter", self.coulomb_inter),
            ("car", self.car),
            ("cotunneling", self.cotunneling),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParameters(format!("{name} = {v} is not finite")));
        }
        if self.coulomb_inter <= 0.0 {
            return Err(Error::InvalidParameters(format!(
                "coulomb_inter must be positive, got {}",
                self.coulomb_inter
            )));
        }
        self.check_denominators()
    }

    fn check_denominators(&self) -> Result<()> {
        let (j, jp) = (self.coulomb_intra, self.coulomb_inter);
        if jp.abs() < DENOMINATOR_EPS {
            return Err(Error::DegenerateParameters("J' = 0"));
        }
        if (jp - j).abs() < DENOMINATOR_EPS {
            return Err(Error::DegenerateParameters("J = J'"));
        }
        if (2.0 * j + 3.0 * jp).abs() < DENOMINATOR_EPS {
            return Err(Error::DegenerateParameters("2J + 3J' = 0"));
        }
        Ok(())
    }
}

/// The four terms of the double-dot Hamiltonian.
#[derive(Debug, Clone)]
pub struct HamiltonianTerms {
    pub zeeman: Operator,
    pub coulomb: Operator,
    pub car: Operator,
    pub cotunneling: Operator,
}

impl HamiltonianTerms {
    pub fn new(p: &ModelParams) -> Self {
        let n = |dot, spin| number_operator(Mode::new(dot, spin));
        let d = |dot, spin| annihilation_operator(Mode::new(dot, spin));
        let dd = |dot, spin| creation_operator(Mode::new(dot, spin));
        use Dot::{One, Two};
        use Spin::{Down, Up};

        let zeeman =
            (n(One, Up) - n(One, Down)).scale(p.zeeman1 / 2.0) + (n(Two, Up) - n(Two, Down)).scale(p.zeeman2 / 2.0);

        let dot1 = n(One, Up) + n(One, Down);
        let dot2 = n(Two, Up) + n(Two, Down);
        let coulomb = (n(One, Up) * n(One, Down) + n(Two, Up) * n(Two, Down)).scale(p.coulomb_intra)
            + (dot1 * dot2).scale(p.coulomb_inter);

        let pair = (dd(One, Up) * dd(Two, Down) - dd(One, Down) * dd(Two, Up)).scale(p.car);
        let car = &pair + pair.adjoint();

        let hop = (dd(One, Up) * d(Two, Up) + dd(One, Down) * d(Two, Down)).scale(p.cotunneling);
        let cotunneling = &hop + hop.adjoint();

        HamiltonianTerms {
            zeeman,
            coulomb,
            car,
            cotunneling,
        }
    }

    /// Diagonal part `H_Z + H_C`.
    pub fn diagonal(&self) -> Operator {
        &self.zeeman + &self.coulomb
    }

    /// Off-diagonal part `H_CAR + H_CT`.
    pub fn coupling(&self) -> Operator {
        &self.car + &self.cotunneling
    }

    pub fn total(&self) -> Operator {
        self.diagonal() + self.coupling()
    }
}

/// Full `16x16` Hamiltonian `H_Z + H_C + H_CAR + H_CT`.
pub fn build_hamiltonian(p: &ModelParams) -> Operator {
    HamiltonianTerms::new(p).total()
}

/// Second-order effective coupling Ω between `|0110>` and `|1001>`.
pub fn effective_coupling(p: &ModelParams) -> Result<f64> {
    p.check_denominators()?;
    let (j, jp, car, ct) = (p.coulomb_intra, p.coulomb_inter, p.car, p.cotunneling);
    Ok(-car * car * (1.0 / jp - 1.0 / (2.0 * j + 3.0 * jp)) - 2.0 * ct * ct / (jp - j))
}

/// Second-order effective diagonal energy ε₀ of `|0110>` and `|1001>`.
pub fn effective_onsite(p: &ModelParams) -> Result<f64> {
    p.check_denominators()?;
    let (j, jp, car, ct) = (p.coulomb_intra, p.coulomb_inter, p.car, p.cotunneling);
    Ok(jp + 2.0 * ct * ct / (jp - j) + car * car / jp - car * car / (2.0 * j + 3.0 * jp))
}

/// Quantities of the two-level / two-qubit reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveModel {
    /// Effective coupling Ω.
    pub omega: f64,
    /// Effective diagonal energy ε₀.
    pub eps0: f64,
    /// Second-order shift ξ = ε₀ - J'.
    pub xi: f64,
    /// Mean Zeeman splitting δ = δ₁/2 + δ₂/2.
    pub delta: f64,
}

impl EffectiveModel {
    pub fn new(p: &ModelParams) -> Result<Self> {
        let omega = effective_coupling(p)?;
        let eps0 = effective_onsite(p)?;
        Ok(EffectiveModel {
            omega,
            eps0,
            xi: eps0 - p.coulomb_inter,
            delta: p.zeeman1 / 2.0 + p.zeeman2 / 2.0,
        })
    }
}

/// Which two-qubit Hamiltonian to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoQubitForm {
    /// Shifted four-level form `diag(δ-ξ, 0, 0, -δ-ξ)` with Ω on the inner
    /// off-diagonal.
    #[default]
    Shifted,
    /// Pure exchange `Ω/2 (σx⊗σx + σy⊗σy)`, sufficient when only
    /// `{|01>, |10>}` is populated.
    Exchange,
}

/// Two-qubit effective Hamiltonian in the basis `{|00>, |01>, |10>, |11>}`.
pub fn build_2qb_hamiltonian(p: &ModelParams, form: TwoQubitForm) -> Result<Operator> {
    let eff = EffectiveModel::new(p)?;
    let mut h = Operator::zeros(4, 4);
    h[(1, 2)] = C64::new(eff.omega, 0.0);
    h[(2, 1)] = C64::new(eff.omega, 0.0);
    if form == TwoQubitForm::Shifted {
        h[(0, 0)] = C64::new(eff.delta - eff.xi, 0.0);
        h[(3, 3)] = C64::new(-eff.delta - eff.xi, 0.0);
    }
    Ok(h)
}

/// Closed-system amplitudes `(cos θ, -i sin θ)` over `(|0110>, |1001>)`,
/// dropping the global phase.
pub fn analytic_state(theta: f64) -> [C64; 2] {
    [C64::new(theta.cos(), 0.0), C64::new(0.0, -theta.sin())]
}

/// [`analytic_state`] embedded in the 16-level space.
pub fn analytic_state_vector(theta: f64) -> DVector<C64> {
    let [a, b] = analytic_state(theta);
    let mut psi = DVector::zeros(DIM);
    psi[PAIR_STATE_A] = a;
    psi[PAIR_STATE_B] = b;
    psi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{total_number_operator, OccupationState};
    use crate::linalg::{hermiticity_deviation, kron, max_abs};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn diag_params() -> ModelParams {
        ModelParams::benchmark().uncoupled()
    }

    #[test]
    fn uncoupled_hamiltonian_matches_closed_forms() {
        let p = diag_params();
        let h = build_hamiltonian(&p);
        let off: f64 = (0..DIM)
            .flat_map(|i| (0..DIM).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| h[(i, j)].norm())
            .fold(0.0, f64::max);
        assert_eq!(off, 0.0);
        let (j, jp, d1, d2) = (4.0, 1.0, 0.5, 0.5);
        let expected: [(&str, f64); 16] = [
            ("0000", 2.0 * j + 4.0 * jp),
            ("0001", j + 2.0 * jp + d2 / 2.0),
            ("0010", j + 2.0 * jp - d2 / 2.0),
            ("0011", j),
            ("0100", j + 2.0 * jp + d1 / 2.0),
            ("0101", jp + d1 / 2.0 + d2 / 2.0),
            ("0110", jp + d1 / 2.0 - d2 / 2.0),
            ("0111", d1 / 2.0),
            ("1000", j + 2.0 * jp - d1 / 2.0),
            ("1001", jp - d1 / 2.0 + d2 / 2.0),
            ("1010", jp - d1 / 2.0 - d2 / 2.0),
            ("1011", -d1 / 2.0),
            ("1100", j),
            ("1101", d2 / 2.0),
            ("1110", -d2 / 2.0),
            ("1111", 0.0),
        ];
        for (i, (label, e)) in expected.iter().enumerate() {
            assert_eq!(OccupationState::from_index(i).unwrap().ket_label(), *label);
            assert!((h[(i, i)].re - e).abs() < 1e-12, "{label}: {} vs {e}", h[(i, i)]);
        }
        assert_eq!(h[(6, 6)].re, 1.0);
        assert_eq!(h[(10, 10)].re, 0.5);
        assert_eq!(h[(5, 5)].re, 1.5);
        assert_eq!(h[(0, 0)].re, 12.0);
    }

    #[test]
    fn pair_states_not_directly_coupled() {
        for p in [
            ModelParams::benchmark(),
            ModelParams {
                car: 0.3,
                cotunneling: 0.2,
                ..ModelParams::benchmark()
            },
        ] {
            let h = build_hamiltonian(&p);
            assert_eq!(h[(PAIR_STATE_A, PAIR_STATE_B)], c(0.0));
            assert_eq!(h[(PAIR_STATE_B, PAIR_STATE_A)], c(0.0));
        }
    }

    #[test]
    fn hamiltonian_is_exactly_hermitian() {
        let h = build_hamiltonian(&ModelParams::benchmark());
        assert_eq!(hermiticity_deviation(&h), 0.0);
    }

    #[test]
    fn hamiltonian_has_no_odd_particle_number_blocks() {
        let h = build_hamiltonian(&ModelParams::benchmark());
        let n = total_number_operator();
        for i in 0..DIM {
            for j in 0..DIM {
                let diff = (n[(i, i)].re - n[(j, j)].re).abs() as usize;
                if diff % 2 == 1 {
                    assert_eq!(h[(i, j)], c(0.0));
                }
            }
        }
    }

    #[test]
    fn benchmark_effective_coupling() {
        let p = ModelParams::benchmark();
        // -0.0025 * (1 - 1/11) - 2 * 2.5e-5 / (1 - 4)
        let expected = -0.0025 * (10.0 / 11.0) + 5e-5 / 3.0;
        let omega = effective_coupling(&p).unwrap();
        assert_relative_eq!(omega, expected, max_relative = 1e-14);
        assert!((omega - -2.25606e-3).abs() < 1e-8);
        let eps0 = effective_onsite(&p).unwrap();
        assert!((eps0 - 1.00225606).abs() < 1e-8);
        assert_eq!(effective_coupling(&diag_params()).unwrap(), 0.0);
        assert_eq!(effective_onsite(&diag_params()).unwrap(), 1.0);
    }

    #[test]
    fn degenerate_parameters_rejected() {
        let base = ModelParams::benchmark();
        let same = ModelParams {
            coulomb_intra: 1.0,
            ..base
        };
        assert!(matches!(effective_coupling(&same), Err(Error::DegenerateParameters(_))));
        let zero = ModelParams {
            coulomb_inter: 0.0,
            ..base
        };
        assert!(effective_onsite(&zero).is_err());
        let cancel = ModelParams {
            coulomb_intra: -1.5,
            ..base
        };
        assert!(EffectiveModel::new(&cancel).is_err());
        assert!(build_2qb_hamiltonian(&same, TwoQubitForm::Shifted).is_err());
        assert!(ModelParams { car: f64::NAN, ..base }.validate().is_err());
        assert!(ModelParams {
            coulomb_inter: -1.0,
            ..base
        }
        .validate()
        .is_err());
    }

    #[test]
    fn two_qubit_hamiltonian_blocks() {
        let p = ModelParams::benchmark();
        let omega = effective_coupling(&p).unwrap();
        let h = build_2qb_hamiltonian(&p, TwoQubitForm::Shifted).unwrap();
        assert_eq!(h[(1, 1)], c(0.0));
        assert_eq!(h[(2, 2)], c(0.0));
        assert_eq!(h[(1, 2)], c(omega));
        assert_eq!(h[(2, 1)], c(omega));

        let h0 = build_2qb_hamiltonian(&diag_params(), TwoQubitForm::Shifted).unwrap();
        let expected = Operator::from_diagonal(&DVector::from_vec(vec![c(0.5), c(0.0), c(0.0), c(-0.5)]));
        assert!(max_abs(&(h0 - expected)) < 1e-15);
    }

    fn pauli() -> (Operator, Operator, Operator, Operator) {
        let i = Operator::identity(2, 2);
        let x = Operator::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let y = Operator::from_row_slice(2, 2, &[c(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), c(0.0)]);
        let z = Operator::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
        (i, x, y, z)
    }

    /// Pauli-operator construction of the shifted two-qubit Hamiltonian. The
    /// Zeeman part is `δ/2 (σz⊗I + I⊗σz)`, which is what produces
    /// `diag(1, 0, 0, -1)`.
    #[test]
    fn two_qubit_hamiltonian_matches_pauli_decomposition() {
        let (i, x, y, z) = pauli();
        for p in [
            ModelParams::benchmark(),
            ModelParams {
                car: 0.2,
                cotunneling: 0.07,
                zeeman1: 0.3,
                zeeman2: 0.9,
                ..ModelParams::benchmark()
            },
        ] {
            let eff = EffectiveModel::new(&p).unwrap();
            let pauli_form = (kron(&x, &x) + kron(&y, &y)).scale(eff.omega / 2.0)
                - (kron(&z, &z) + kron(&i, &i)).scale(eff.xi / 2.0)
                + (kron(&z, &i) + kron(&i, &z)).scale(eff.delta / 2.0);
            let h = build_2qb_hamiltonian(&p, TwoQubitForm::Shifted).unwrap();
            assert!(max_abs(&(h - &pauli_form)) < 1e-12);

            let exchange = (kron(&x, &x) + kron(&y, &y)).scale(eff.omega / 2.0);
            let h = build_2qb_hamiltonian(&p, TwoQubitForm::Exchange).unwrap();
            assert!(max_abs(&(h - exchange)) < 1e-12);
        }
    }

    #[test]
    fn analytic_state_examples() {
        let s0 = analytic_state(0.0);
        assert_eq!(s0, [c(1.0), C64::new(0.0, -0.0)]);
        let s = analytic_state(std::f64::consts::FRAC_PI_4);
        assert!((s[0].norm_sqr() - 0.5).abs() < 1e-15);
        assert!((s[1].norm_sqr() - 0.5).abs() < 1e-15);
        let s = analytic_state(std::f64::consts::FRAC_PI_2);
        assert!(s[0].norm() < 1e-15);
        assert!((s[1] - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn onsite_plus_coupling_is_inter_coulomb(
            j in -10.0f64..10.0,
            jp in 0.1f64..5.0,
            car in -1.0f64..1.0,
            ct in -1.0f64..1.0,
        ) {
            let p = ModelParams { coulomb_intra: j, coulomb_inter: jp, car, cotunneling: ct, ..ModelParams::benchmark() };
            prop_assume!((jp - j).abs() > 1e-3 && (2.0 * j + 3.0 * jp).abs() > 1e-3);
            let eff = EffectiveModel::new(&p).unwrap();
            let scale = 1.0 + eff.eps0.abs() + eff.omega.abs();
            prop_assert!((eff.eps0 + eff.omega - jp).abs() <= 1e-12 * scale);
            prop_assert!((eff.xi + eff.omega).abs() <= 1e-12 * scale);
        }

        #[test]
        fn analytic_state_is_normalised(theta in -20.0f64..20.0) {
            let s = analytic_state(theta);
            prop_assert!((s[0].norm_sqr() + s[1].norm_sqr() - 1.0).abs() < 1e-14);
        }

        #[test]
        fn hamiltonian_hermitian_for_random_params(
            d1 in -2.0f64..2.0, d2 in -2.0f64..2.0, j in 0.0f64..8.0,
            car in -1.0f64..1.0, ct in -1.0f64..1.0,
        ) {
            let p = ModelParams { zeeman1: d1, zeeman2: d2, coulomb_intra: j, coulomb_inter: 1.0, car, cotunneling: ct };
            let h = build_hamiltonian(&p);
            prop_assert_eq!(hermiticity_deviation(&h), 0.0);
        }
    }
}
