//! Occupation basis, Jordan–Wigner fermion operators and bipartite
//! subsystem algebra for the two-dot, four-mode system.
//!
//! Each spin-resolved dot level is a two-level subsystem whose local basis is
//! ordered `|0> = occupied`, `|1> = empty`. The four modes are tensored in the
//! order `(1↑, 1↓, 2↑, 2↓)` with the leftmost factor most significant, so the
//! ket label `(1-n1↑, 1-n1↓, 2-n2↑, 1-n2↓)` read as a big-endian binary number
//! is the basis index. QD1 is the leading 4-dimensional factor and QD2 the
//! trailing one.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

pub type C64 = num_complex::Complex64;

/// Dense complex matrix used for Hamiltonians, observables and superoperators.
pub type Operator = DMatrix<C64>;

/// Dimension of the full two-dot Hilbert space.
pub const DIM: usize = 16;
/// Dimension of a single dot (two spin levels).
pub const DOT_DIM: usize = 4;

const TRACE_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Dot {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Up => "up",
            Spin::Down => "dn",
        })
    }
}

/// One spin-resolved dot level, i.e. one fermionic mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Mode {
    pub dot: Dot,
    pub spin: Spin,
}

impl Mode {
    pub const fn new(dot: Dot, spin: Spin) -> Self {
        Mode { dot, spin }
    }

    /// Position in the Jordan–Wigner ordering `(1↑, 1↓, 2↑, 2↓)`.
    pub fn position(self) -> usize {
        let d = match self.dot {
            Dot::One => 0,
            Dot::Two => 2,
        };
        let s = match self.spin {
            Spin::Up => 0,
            Spin::Down => 1,
        };
        d + s
    }
}

/// All four modes in Jordan–Wigner order.
pub const MODES: [Mode; 4] = [
    Mode::new(Dot::One, Spin::Up),
    Mode::new(Dot::One, Spin::Down),
    Mode::new(Dot::Two, Spin::Up),
    Mode::new(Dot::Two, Spin::Down),
];

/// Occupation numbers `(n1↑, n1↓, n2↑, n2↓)` of one computational basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OccupationState {
    occupied: [bool; 4],
}

impl OccupationState {
    /// Builds a state from 0/1 occupation numbers.
    pub fn new(n1up: u8, n1dn: u8, n2up: u8, n2dn: u8) -> Result<Self> {
        let mut occupied = [false; 4];
        for (slot, n) in occupied.iter_mut().zip([n1up, n1dn, n2up, n2dn]) {
            *slot = match n {
                0 => false,
                1 => true,
                _ => {
                    return Err(Error::InvalidParameters(format!(
                        "occupation number must be 0 or 1, got {n}"
                    )))
                }
            };
        }
        Ok(OccupationState { occupied })
    }

    /// Inverse of [`basis_index`].
    pub fn from_index(index: usize) -> Result<Self> {
        if index >= DIM {
            return Err(Error::OutOfRange { index, len: DIM });
        }
        let mut occupied = [false; 4];
        for (k, slot) in occupied.iter_mut().enumerate() {
            // ket bit set means the level is empty
            *slot = (index >> (3 - k)) & 1 == 0;
        }
        Ok(OccupationState { occupied })
    }

    pub fn is_occupied(&self, mode: Mode) -> bool {
        self.occupied[mode.position()]
    }

    pub fn occupations(&self) -> [u8; 4] {
        self.occupied.map(u8::from)
    }

    pub fn particle_number(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    /// Ket label such as `0110`.
    pub fn ket_label(&self) -> String {
        self.occupied.iter().map(|&o| if o { '0' } else { '1' }).collect()
    }
}

impl fmt::Display for OccupationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}>", self.ket_label())
    }
}

/// Index of the computational basis state with the given occupations.
pub fn basis_index(occ: &OccupationState) -> usize {
    occ.occupied.iter().fold(0, |acc, &o| (acc << 1) | usize::from(!o))
}

/// Particle number of basis state `index`.
pub fn particle_number(index: usize) -> usize {
    4 - (index & 0xF).count_ones() as usize
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn sigma_minus() -> CMatrix {
    // maps occupied |0> to empty |1>
    CMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(1.0), c(0.0)])
}

fn sigma_z() -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0), c(-1.0)]))
}

/// Jordan–Wigner annihilation operator `d_{jσ}` on the 16-level space.
pub fn annihilation_operator(mode: Mode) -> Operator {
    let pos = mode.position();
    let factors: Vec<CMatrix> = (0..4)
        .map(|k| match k.cmp(&pos) {
            std::cmp::Ordering::Less => sigma_z(),
            std::cmp::Ordering::Equal => sigma_minus(),
            std::cmp::Ordering::Greater => CMatrix::identity(2, 2),
        })
        .collect();
    linalg::kron_all(&factors)
}

pub fn creation_operator(mode: Mode) -> Operator {
    annihilation_operator(mode).adjoint()
}

/// Number operator `N_{jσ} = d† d`.
pub fn number_operator(mode: Mode) -> Operator {
    let d = annihilation_operator(mode);
    d.adjoint() * d
}

/// Total particle number operator.
pub fn total_number_operator() -> Operator {
    MODES
        .iter()
        .fold(Operator::zeros(DIM, DIM), |acc, &m| acc + number_operator(m))
}

/// `|i><i|` projector on a `dim`-dimensional space.
pub fn basis_projector(dim: usize, index: usize) -> Operator {
    let mut p = Operator::zeros(dim, dim);
    p[(index, index)] = c(1.0);
    p
}

/// Which dot a bipartite operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Subsystem {
    Qd1,
    Qd2,
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: Operator,
}

impl DensityMatrix {
    /// Validates trace (1e-10), Hermiticity (1e-10) and positivity (-1e-8).
    pub fn new(matrix: Operator) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", matrix.nrows(), matrix.ncols()),
            });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
        }
        let herm = linalg::hermiticity_deviation(&matrix);
        if herm > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation: herm });
        }
        let tr = linalg::trace(&matrix);
        if (tr - c(1.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let min_eig = linalg::eigvalsh(&matrix)[0];
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(DensityMatrix { matrix })
    }

    /// Wraps a matrix without validation. Intended for states produced by
    /// trace-preserving maps, where invariants are checked separately.
    pub fn new_unchecked(matrix: Operator) -> Self {
        DensityMatrix { matrix }
    }

    /// `|ψ><ψ|` for a (not necessarily normalised) nonzero vector.
    pub fn pure(psi: &DVector<C64>) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidDensityMatrix("zero state vector".into()));
        }
        let psi = psi.unscale(norm);
        Ok(DensityMatrix {
            matrix: &psi * psi.adjoint(),
        })
    }

    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::OutOfRange { index, len: dim });
        }
        Ok(DensityMatrix {
            matrix: basis_projector(dim, index),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: Operator::identity(dim, dim).unscale(dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Operator {
        &self.matrix
    }

    pub fn into_matrix(self) -> Operator {
        self.matrix
    }

    pub fn trace(&self) -> C64 {
        linalg::trace(&self.matrix)
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        linalg::trace_product(&self.matrix, &self.matrix).re
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    /// `Tr(ρ A)`.
    pub fn expectation(&self, observable: &Operator) -> C64 {
        linalg::trace_product(&self.matrix, observable)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }
}

fn require_full(m: &Operator) -> Result<()> {
    if m.nrows() != DIM || m.ncols() != DIM {
        return Err(Error::DimensionMismatch {
            expected: format!("{DIM}x{DIM}"),
            found: format!("{}x{}", m.nrows(), m.ncols()),
        });
    }
    Ok(())
}

/// Partial trace of any `16x16` operator, keeping one dot.
pub fn partial_trace_operator(m: &Operator, keep: Subsystem) -> Result<Operator> {
    require_full(m)?;
    let d = DOT_DIM;
    let out = Operator::from_fn(d, d, |r, s| {
        (0..d)
            .map(|k| match keep {
                Subsystem::Qd1 => m[(r * d + k, s * d + k)],
                Subsystem::Qd2 => m[(k * d + r, k * d + s)],
            })
            .sum()
    });
    Ok(out)
}

/// Reduced `4x4` density matrix of the kept dot.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    partial_trace_operator(rho.matrix(), keep).map(DensityMatrix::new_unchecked)
}

/// Partial transpose of any `16x16` operator with respect to one dot.
pub fn partial_transpose_operator(m: &Operator, subsystem: Subsystem) -> Result<Operator> {
    require_full(m)?;
    let d = DOT_DIM;
    let out = Operator::from_fn(DIM, DIM, |row, col| {
        let (a, b) = (row / d, row % d);
        let (a2, b2) = (col / d, col % d);
        match subsystem {
            Subsystem::Qd1 => m[(a2 * d + b, a * d + b2)],
            Subsystem::Qd2 => m[(a * d + b2, a2 * d + b)],
        }
    });
    Ok(out)
}

pub fn partial_transpose(rho: &DensityMatrix, subsystem: Subsystem) -> Result<Operator> {
    partial_transpose_operator(rho.matrix(), subsystem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    fn occ(a: u8, b: u8, c_: u8, d: u8) -> OccupationState {
        OccupationState::new(a, b, c_, d).unwrap()
    }

    fn bell() -> DensityMatrix {
        let mut psi = DVector::zeros(DIM);
        psi[6] = c(1.0);
        psi[9] = C64::new(0.0, -1.0);
        DensityMatrix::pure(&psi).unwrap()
    }

    #[test]
    fn basis_index_examples() {
        assert_eq!(basis_index(&occ(1, 1, 1, 1)), 0);
        assert_eq!(basis_index(&occ(0, 0, 0, 0)), 15);
        assert_eq!(basis_index(&occ(1, 0, 0, 1)), 6);
        assert_eq!(occ(1, 0, 0, 1).ket_label(), "0110");
    }

    #[test]
    fn basis_index_round_trip() {
        for i in 0..DIM {
            let s = OccupationState::from_index(i).unwrap();
            assert_eq!(basis_index(&s), i);
            assert_eq!(s.particle_number(), particle_number(i));
        }
        assert!(OccupationState::from_index(16).is_err());
        assert!(OccupationState::new(2, 0, 0, 0).is_err());
    }

    #[test]
    fn first_annihilator_is_sigma_minus_on_leading_factor() {
        let expected = sigma_minus().kronecker(&CMatrix::identity(8, 8));
        assert_eq!(annihilation_operator(MODES[0]), expected);
    }

    #[test]
    fn annihilators_are_nilpotent() {
        for m in MODES {
            let d = annihilation_operator(m);
            assert!(max_abs(&(&d * &d)) == 0.0);
        }
    }

    #[test]
    fn canonical_anticommutation() {
        let id = Operator::identity(DIM, DIM);
        for a in MODES {
            for b in MODES {
                let da = annihilation_operator(a);
                let db = annihilation_operator(b);
                let dbd = db.adjoint();
                let aa = &da * &db + &db * &da;
                assert!(max_abs(&aa) <= 1e-12, "{{d{a:?}, d{b:?}}} != 0");
                let mixed = &da * &dbd + &dbd * &da;
                let expected = if a == b { id.clone() } else { Operator::zeros(DIM, DIM) };
                assert!(max_abs(&(mixed - expected)) <= 1e-12);
            }
        }
    }

    #[test]
    fn number_operator_matches_occupation_bits() {
        for m in MODES {
            let n = number_operator(m);
            for i in 0..DIM {
                for j in 0..DIM {
                    let expected = if i == j && OccupationState::from_index(i).unwrap().is_occupied(m) {
                        1.0
                    } else {
                        0.0
                    };
                    assert!((n[(i, j)] - c(expected)).norm() < 1e-14);
                }
            }
        }
        let n1up = number_operator(MODES[0]);
        assert_eq!(n1up[(6, 6)], c(1.0));
        assert_eq!(n1up[(15, 15)], c(0.0));
        assert_eq!(linalg::trace(&n1up), c(8.0));
    }

    #[test]
    fn partial_trace_of_basis_state() {
        let rho = DensityMatrix::basis_state(DIM, 6).unwrap();
        let r1 = partial_trace(&rho, Subsystem::Qd1).unwrap();
        // |01> on QD1 is index 1
        assert_eq!(r1.matrix(), &basis_projector(DOT_DIM, 1));
        let r2 = partial_trace(&rho, Subsystem::Qd2).unwrap();
        assert_eq!(r2.matrix(), &basis_projector(DOT_DIM, 2));
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let r1 = partial_trace(&bell(), Subsystem::Qd1).unwrap();
        let expected = Operator::from_diagonal(&DVector::from_vec(vec![c(0.0), c(0.5), c(0.5), c(0.0)]));
        assert!(max_abs(&(r1.matrix() - expected)) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_wrong_dimension() {
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            partial_trace(&rho, Subsystem::Qd1),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(partial_transpose(&rho, Subsystem::Qd2).is_err());
    }

    #[test]
    fn partial_transpose_of_bell_has_negative_half_eigenvalue() {
        for s in [Subsystem::Qd1, Subsystem::Qd2] {
            let pt = partial_transpose(&bell(), s).unwrap();
            let ev = linalg::eigvalsh(&pt);
            assert!((ev[0] + 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_transpose_is_involution_and_keeps_product_spectrum() {
        let a = DensityMatrix::new(Operator::from_row_slice(
            4,
            4,
            &[
                c(0.4),
                C64::new(0.1, 0.1),
                c(0.0),
                c(0.0),
                C64::new(0.1, -0.1),
                c(0.3),
                c(0.0),
                c(0.05),
                c(0.0),
                c(0.0),
                c(0.2),
                c(0.0),
                c(0.0),
                c(0.05),
                c(0.0),
                c(0.1),
            ],
        ))
        .unwrap();
        let b = DensityMatrix::maximally_mixed(4);
        let prod = a.tensor(&b);
        let pt = partial_transpose(&prod, Subsystem::Qd1).unwrap();
        let back = partial_transpose_operator(&pt, Subsystem::Qd1).unwrap();
        assert!(max_abs(&(back - prod.matrix())) < 1e-15);
        let ev0 = prod.eigenvalues();
        let ev1 = linalg::eigvalsh(&pt);
        for (x, y) in ev0.iter().zip(&ev1) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn density_matrix_validation() {
        let mut m = Operator::identity(4, 4);
        assert!(DensityMatrix::new(m.clone()).is_err());
        m = m.unscale(4.0);
        assert!(DensityMatrix::new(m.clone()).is_ok());
        m[(0, 1)] = c(0.1);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian { .. })));
        let neg = Operator::from_diagonal(&DVector::from_vec(vec![c(1.1), c(-0.1)]));
        assert!(DensityMatrix::new(neg).is_err());
    }
}
