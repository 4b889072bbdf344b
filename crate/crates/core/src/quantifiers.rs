//! Entanglement quantifiers and the spin-resolved occupation covariance.
//!
//! Entropies are in bits. Eigenvalues and probabilities below
//! [`CLIP_THRESHOLD`] are treated as zero before logarithms and square roots.

use nalgebra::Schur;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{
    number_operator, partial_trace, partial_transpose, DensityMatrix, Dot, Mode, Operator, Spin, Subsystem, C64, DIM,
    DOT_DIM,
};
use crate::linalg::{self, kron};
use crate::model::TWO_QUBIT_EMBEDDING;

pub const CLIP_THRESHOLD: f64 = 1e-12;

/// Spin pairs `(σ, σ')` of `Cov(N_{1σ}, N_{2σ'})` in the column order used
/// for covariance tables.
pub const COVARIANCE_PAIRS: [(Spin, Spin); 4] = [
    (Spin::Up, Spin::Down),
    (Spin::Down, Spin::Up),
    (Spin::Down, Spin::Down),
    (Spin::Up, Spin::Up),
];

fn clip(x: f64) -> f64 {
    if x < CLIP_THRESHOLD {
        0.0
    } else {
        x
    }
}

/// Shannon entropy (bits) of a probability list, `0 log 0 = 0`.
pub fn shannon_entropy(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    probabilities
        .into_iter()
        .map(clip)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// `-Tr(ρ log₂ ρ)` of any density matrix.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(rho.eigenvalues())
}

/// Von Neumann entropy of a reduced (subsystem) density matrix.
pub fn svne(rho_sub: &DensityMatrix) -> f64 {
    von_neumann_entropy(rho_sub)
}

/// Entanglement entropy of QD1 for a full-system state.
pub fn svne_of(rho: &DensityMatrix, subsystem: Subsystem) -> Result<f64> {
    Ok(svne(&partial_trace(rho, subsystem)?))
}

/// Quantum mutual information `S(ρ₁) + S(ρ₂) - S(ρ)`.
pub fn qmi(rho: &DensityMatrix) -> Result<f64> {
    let s1 = svne_of(rho, Subsystem::Qd1)?;
    let s2 = svne_of(rho, Subsystem::Qd2)?;
    Ok(s1 + s2 - von_neumann_entropy(rho))
}

/// Negativity from the partial transpose with respect to `subsystem`.
pub fn negativity_wrt(rho: &DensityMatrix, subsystem: Subsystem) -> Result<f64> {
    let pt = partial_transpose(rho, subsystem)?;
    Ok(linalg::eigvalsh(&pt).iter().map(|&l| 0.5 * (l.abs() - l)).sum())
}

/// Negativity `½ Σ(|L_k| - L_k)` over the spectrum of `ρ^{T₁}`.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    negativity_wrt(rho, Subsystem::Qd1)
}

/// Product measurement basis for tomographic entropies. Columns of each
/// unitary are the single-dot basis vectors; the full-system basis is their
/// tensor product.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographicBasis {
    qd1: Operator,
    qd2: Operator,
}

impl TomographicBasis {
    /// Occupation (computational) basis on both dots.
    pub fn computational() -> Self {
        TomographicBasis {
            qd1: Operator::identity(DOT_DIM, DOT_DIM),
            qd2: Operator::identity(DOT_DIM, DOT_DIM),
        }
    }

    /// Custom product basis; both matrices must be `4x4` unitaries.
    pub fn new(qd1: Operator, qd2: Operator) -> Result<Self> {
        for u in [&qd1, &qd2] {
            if u.nrows() != DOT_DIM || u.ncols() != DOT_DIM {
                return Err(Error::DimensionMismatch {
                    expected: "4x4".into(),
                    found: format!("{}x{}", u.nrows(), u.ncols()),
                });
            }
            let dev = linalg::max_abs(&(u.adjoint() * u - Operator::identity(DOT_DIM, DOT_DIM)));
            if dev > 1e-10 {
                return Err(Error::InvalidParameters(format!(
                    "tomographic basis is not orthonormal (deviation {dev:e})"
                )));
            }
        }
        Ok(TomographicBasis { qd1, qd2 })
    }

    fn probabilities(u: &Operator, rho: &Operator) -> Vec<f64> {
        (u.adjoint() * rho * u).diagonal().iter().map(|z| z.re).collect()
    }
}

impl Default for TomographicBasis {
    fn default() -> Self {
        Self::computational()
    }
}

/// Shannon entropies of basis-projection probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TomographicEntropies {
    pub s12: f64,
    pub s1: f64,
    pub s2: f64,
}

impl TomographicEntropies {
    /// Tomographic entanglement indicator `S₁ + S₂ - S₁₂`.
    pub fn indicator(&self) -> f64 {
        self.s1 + self.s2 - self.s12
    }
}

pub fn tomographic_entropies(rho: &DensityMatrix, basis: &TomographicBasis) -> Result<TomographicEntropies> {
    let r1 = partial_trace(rho, Subsystem::Qd1)?;
    let r2 = partial_trace(rho, Subsystem::Qd2)?;
    let full = kron(&basis.qd1, &basis.qd2);
    Ok(TomographicEntropies {
        s12: shannon_entropy(TomographicBasis::probabilities(&full, rho.matrix())),
        s1: shannon_entropy(TomographicBasis::probabilities(&basis.qd1, r1.matrix())),
        s2: shannon_entropy(TomographicBasis::probabilities(&basis.qd2, r2.matrix())),
    })
}

/// Tomographic entanglement indicator `ε_tei = S₁ + S₂ - S₁₂`.
pub fn tei(rho: &DensityMatrix, basis: &TomographicBasis) -> Result<f64> {
    Ok(tomographic_entropies(rho, basis)?.indicator())
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: "4x4 two-qubit state".into(),
            found: format!("{0}x{0}", rho.dim()),
        });
    }
    Ok(())
}

fn sigma_y_sigma_y() -> Operator {
    let z = C64::new(0.0, 0.0);
    let y = Operator::from_row_slice(2, 2, &[z, C64::new(0.0, -1.0), C64::new(0.0, 1.0), z]);
    kron(&y, &y)
}

/// Spin-flipped state `(σy⊗σy) ρ* (σy⊗σy)`.
pub fn spin_flip(rho: &DensityMatrix) -> Result<Operator> {
    require_two_qubit(rho)?;
    let yy = sigma_y_sigma_y();
    Ok(&yy * rho.matrix().conjugate() * &yy)
}

fn wootters(mut lambdas: Vec<f64>) -> f64 {
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}

/// Wootters concurrence via the Hermitian operator
/// `R = sqrt(sqrt(ρ) ρ̃ sqrt(ρ))`.
pub fn concurrence(rho2: &DensityMatrix) -> Result<f64> {
    let flipped = spin_flip(rho2)?;
    let sqrt_rho = linalg::hermitian_map(rho2.matrix(), |x| clip(x).sqrt());
    let inner = &sqrt_rho * flipped * &sqrt_rho;
    let lambdas = linalg::eigvalsh(&inner).into_iter().map(|x| clip(x).sqrt()).collect();
    Ok(wootters(lambdas))
}

/// Concurrence from square roots of the (non-Hermitian) product `ρ ρ̃`
/// spectrum; independent route to [`concurrence`].
pub fn concurrence_from_product_spectrum(rho2: &DensityMatrix) -> Result<f64> {
    let flipped = spin_flip(rho2)?;
    let product = rho2.matrix() * flipped;
    // complex Schur form is upper triangular: eigenvalues on the diagonal
    let (_, t) = Schur::new(product).unpack();
    let lambdas = t.diagonal().iter().map(|z| clip(z.re).sqrt()).collect();
    Ok(wootters(lambdas))
}

/// Concurrence of a full-model state after projection on the two-qubit
/// subspace `span{|0101>, |0110>, |1001>, |1010>}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectedConcurrence {
    pub concurrence: f64,
    /// Population of the two-qubit subspace before renormalisation.
    pub weight: f64,
}

/// Restricts a 16-level state to the two-qubit subspace and renormalises.
/// Returns `None` when the subspace is unpopulated.
pub fn project_two_qubit(rho: &DensityMatrix) -> Result<Option<(DensityMatrix, f64)>> {
    if rho.dim() != DIM {
        return Err(Error::DimensionMismatch {
            expected: format!("{DIM}x{DIM}"),
            found: format!("{0}x{0}", rho.dim()),
        });
    }
    let m = rho.matrix();
    let block = Operator::from_fn(4, 4, |i, j| m[(TWO_QUBIT_EMBEDDING[i], TWO_QUBIT_EMBEDDING[j])]);
    let weight = linalg::trace(&block).re;
    if weight <= CLIP_THRESHOLD {
        return Ok(None);
    }
    Ok(Some((DensityMatrix::new_unchecked(block.unscale(weight)), weight)))
}

/// Embeds a two-qubit state into the 16-level space.
pub fn embed_two_qubit(rho2: &DensityMatrix) -> Result<DensityMatrix> {
    require_two_qubit(rho2)?;
    let mut full = Operator::zeros(DIM, DIM);
    for (i, &a) in TWO_QUBIT_EMBEDDING.iter().enumerate() {
        for (j, &b) in TWO_QUBIT_EMBEDDING.iter().enumerate() {
            full[(a, b)] = rho2.matrix()[(i, j)];
        }
    }
    Ok(DensityMatrix::new_unchecked(full))
}

pub fn concurrence_projected(rho: &DensityMatrix) -> Result<ProjectedConcurrence> {
    Ok(match project_two_qubit(rho)? {
        Some((rho2, weight)) => ProjectedConcurrence {
            concurrence: concurrence(&rho2)?,
            weight,
        },
        None => ProjectedConcurrence {
            concurrence: 0.0,
            weight: 0.0,
        },
    })
}

/// Scaled covariance `4 |<N_{1σ} N_{2σ'}> - <N_{1σ}><N_{2σ'}>|`.
pub fn covariance(rho: &DensityMatrix, sigma1: Spin, sigma2: Spin) -> Result<f64> {
    if rho.dim() != DIM {
        return Err(Error::DimensionMismatch {
            expected: format!("{DIM}x{DIM}"),
            found: format!("{0}x{0}", rho.dim()),
        });
    }
    // number operators are diagonal, so only populations enter
    let n1 = number_operator(Mode::new(Dot::One, sigma1));
    let n2 = number_operator(Mode::new(Dot::Two, sigma2));
    let m = rho.matrix();
    let (mut joint, mut a, mut b) = (0.0, 0.0, 0.0);
    for i in 0..DIM {
        let p = m[(i, i)].re;
        let (x, y) = (n1[(i, i)].re, n2[(i, i)].re);
        joint += p * x * y;
        a += p * x;
        b += p * y;
    }
    Ok(4.0 * (joint - a * b).abs())
}

/// The four covariances in [`COVARIANCE_PAIRS`] order.
pub fn covariances(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let mut out = [0.0; 4];
    for (slot, (s1, s2)) in out.iter_mut().zip(COVARIANCE_PAIRS) {
        *slot = covariance(rho, s1, s2)?;
    }
    Ok(out)
}

/// Closed-form covariance `4 cos²θ sin²θ` of the effective two-level state.
pub fn covariance_analytic(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    4.0 * c * c * s * s
}

/// All quantifiers evaluated on one full-system state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndicatorSet {
    /// Entanglement entropy of QD1.
    pub svne: f64,
    pub qmi: f64,
    /// `qmi / 2`.
    pub qmi_scaled: f64,
    pub neg: f64,
    /// `2 neg`.
    pub neg_scaled: f64,
    pub tei: f64,
    /// Concurrence of the state projected on the two-qubit subspace.
    pub concurrence: ProjectedConcurrence,
    /// Covariances in [`COVARIANCE_PAIRS`] order.
    pub covariances: [f64; 4],
}

impl IndicatorSet {
    pub fn evaluate(rho: &DensityMatrix) -> Result<Self> {
        let qmi = qmi(rho)?;
        let neg = negativity(rho)?;
        Ok(IndicatorSet {
            svne: svne_of(rho, Subsystem::Qd1)?,
            qmi,
            qmi_scaled: qmi / 2.0,
            neg,
            neg_scaled: 2.0 * neg,
            tei: tei(rho, &TomographicBasis::computational())?,
            concurrence: concurrence_projected(rho)?,
            covariances: covariances(rho)?,
        })
    }
}
