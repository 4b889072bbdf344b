//! Eigen-analysis of the full Hamiltonian: spectrum, basis projections,
//! set classification and per-eigenstate covariances.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{particle_number, DensityMatrix, OccupationState, Operator, Subsystem, C64, DIM};
use crate::linalg;
use crate::model::{build_hamiltonian, EffectiveModel, ModelParams, PAIR_STATE_A, PAIR_STATE_B};
use crate::quantifiers::{self, TomographicBasis};

/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERACY_GAP: f64 = 1e-9;

const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenpairs of a Hermitian operator, energies ascending.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    energies: Vec<f64>,
    /// Eigenvectors as columns.
    vectors: Operator,
}

impl Eigensystem {
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn vectors(&self) -> &Operator {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn vector(&self, n: usize) -> DVector<C64> {
        self.vectors.column(n).into_owned()
    }

    pub fn state(&self, n: usize) -> DensityMatrix {
        DensityMatrix::new_unchecked(self.vector(n) * self.vector(n).adjoint())
    }
}

fn dominant_index(v: &Operator, col: usize) -> usize {
    (0..v.nrows())
        .max_by(|&a, &b| v[(a, col)].norm_sqr().total_cmp(&v[(b, col)].norm_sqr()))
        .unwrap_or(0)
}

/// Diagonalises a Hermitian operator.
///
/// Within a degenerate cluster eigenvectors are ordered by the index of
/// their dominant basis projection. Each eigenvector's largest component is
/// made real and positive.
pub fn eigensystem(h: &Operator) -> Result<Eigensystem> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", h.nrows(), h.ncols()),
        });
    }
    let scale = 1.0_f64.max(linalg::max_abs(h));
    let dev = linalg::hermiticity_deviation(h);
    if dev > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let (energies, mut vectors) = linalg::eigh(h);
    let n = energies.len();

    for col in 0..n {
        let k = dominant_index(&vectors, col);
        let z = vectors[(k, col)];
        if z.norm() > 0.0 {
            let phase = z.conj() / z.norm();
            for row in 0..n {
                vectors[(row, col)] *= phase;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && energies[end] - energies[end - 1] < DEGENERACY_GAP {
            end += 1;
        }
        order[start..end].sort_by_key(|&c| dominant_index(&vectors, c));
        start = end;
    }
    let energies = order.iter().map(|&k| energies[k]).collect();
    let vectors = Operator::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    Ok(Eigensystem { energies, vectors })
}

/// `|<Φ_i|ψ_n>|²`: row `n` is eigenstate `ψ_n`, column `i` basis state `Φ_i`.
pub fn projection_table(es: &Eigensystem) -> DMatrix<f64> {
    let v = es.vectors();
    DMatrix::from_fn(v.ncols(), v.nrows(), |n, i| v[(i, n)].norm_sqr())
}

/// The four eigenstate sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigenstateClass {
    Pure,
    OneParticleEntangled,
    TwoParticleEntangled,
    ThreeParticleEntangled,
}

/// Classification outcome for one eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Classification {
    Classified {
        class: EigenstateClass,
        particle_number: usize,
    },
    /// No particle-number sector holds the required weight, or a high
    /// entropy appeared in a sector that cannot host entanglement.
    Ambiguous { dominant_sector: usize, sector_weight: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassificationConfig {
    /// Minimum QD1 entropy (bits) to call an eigenstate highly entangled.
    pub svne_threshold: f64,
    /// Minimum projection weight of the dominant particle-number sector.
    pub sector_weight: f64,
}

impl Default for ClassificationConfig {
    fn default() -> Self {
        ClassificationConfig {
            svne_threshold: 0.9,
            sector_weight: 0.99,
        }
    }
}

/// Weight of each particle-number sector `0..=4` in one projection row.
pub fn sector_weights(projections: &DMatrix<f64>, n: usize) -> [f64; 5] {
    let mut w = [0.0; 5];
    for i in 0..projections.ncols() {
        w[particle_number(i)] += projections[(n, i)];
    }
    w
}

/// Assigns each eigenstate to one of the four sets, using its dominant
/// particle-number sector and its QD1 entropy.
pub fn classify_eigenstates(
    projections: &DMatrix<f64>,
    svne: &[f64],
    config: &ClassificationConfig,
) -> Vec<Classification> {
    (0..projections.nrows())
        .map(|n| {
            let w = sector_weights(projections, n);
            let (sector, &weight) = w
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .expect("five sectors");
            if weight < config.sector_weight {
                return Classification::Ambiguous {
                    dominant_sector: sector,
                    sector_weight: weight,
                };
            }
            let class = if svne[n] < config.svne_threshold {
                EigenstateClass::Pure
            } else {
                match sector {
                    1 => EigenstateClass::OneParticleEntangled,
                    2 => EigenstateClass::TwoParticleEntangled,
                    3 => EigenstateClass::ThreeParticleEntangled,
                    _ => {
                        return Classification::Ambiguous {
                            dominant_sector: sector,
                            sector_weight: weight,
                        }
                    }
                }
            };
            Classification::Classified {
                class,
                particle_number: sector,
            }
        })
        .collect()
}

/// Covariances of each eigenstate, columns in
/// [`quantifiers::COVARIANCE_PAIRS`] order.
pub fn eigenstate_covariances(es: &Eigensystem) -> Result<Vec<[f64; 4]>> {
    (0..es.len()).map(|n| quantifiers::covariances(&es.state(n))).collect()
}

/// Half the splitting of the anticrossing pair built from `|0110>` and
/// `|1001>`: the two eigenstates with the largest weight on those basis
/// states.
pub fn anticrossing_half_gap(es: &Eigensystem) -> f64 {
    let p = projection_table(es);
    let mut idx: Vec<usize> = (0..es.len()).collect();
    let weight = |n: usize| p[(n, PAIR_STATE_A)] + p[(n, PAIR_STATE_B)];
    idx.sort_by(|&a, &b| weight(b).total_cmp(&weight(a)));
    (es.energies()[idx[0]] - es.energies()[idx[1]]).abs() / 2.0
}

/// One eigenstate row of a [`SpectralReport`].
#[derive(Debug, Clone, Serialize)]
pub struct EigenstateReport {
    pub index: usize,
    pub energy: f64,
    /// `|<Φ_i|ψ_n>|²` for `i = 0..16`.
    pub projections: Vec<f64>,
    pub dominant_basis_state: String,
    pub svne: f64,
    pub tei: f64,
    /// Covariances `(1↑,2↓), (1↓,2↑), (1↓,2↓), (1↑,2↑)`.
    pub covariances: [f64; 4],
    pub classification: Classification,
}

/// Full eigen-analysis of the model Hamiltonian.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub params: ModelParams,
    pub effective: Option<EffectiveModel>,
    pub anticrossing_half_gap: f64,
    pub eigenstates: Vec<EigenstateReport>,
}

impl SpectralReport {
    pub fn new(params: &ModelParams, config: &ClassificationConfig) -> Result<Self> {
        let h = build_hamiltonian(params);
        let es = eigensystem(&h)?;
        let proj = projection_table(&es);
        let covs = eigenstate_covariances(&es)?;
        let basis = TomographicBasis::computational();
        let mut svne = Vec::with_capacity(DIM);
        let mut tei = Vec::with_capacity(DIM);
        for n in 0..es.len() {
            let rho = es.state(n);
            svne.push(quantifiers::svne_of(&rho, Subsystem::Qd1)?);
            tei.push(quantifiers::tei(&rho, &basis)?);
        }
        let classes = classify_eigenstates(&proj, &svne, config);
        let eigenstates = (0..es.len())
            .map(|n| {
                let dom = (0..DIM)
                    .max_by(|&a, &b| proj[(n, a)].total_cmp(&proj[(n, b)]))
                    .unwrap_or(0);
                EigenstateReport {
                    index: n,
                    energy: es.energies()[n],
                    projections: proj.row(n).iter().copied().collect(),
                    dominant_basis_state: OccupationState::from_index(dom)
                        .map(|s| s.ket_label())
                        .unwrap_or_default(),
                    svne: svne[n],
                    tei: tei[n],
                    covariances: covs[n],
                    classification: classes[n],
                }
            })
            .collect();
        Ok(SpectralReport {
            params: *params,
            effective: EffectiveModel::new(params).ok(),
            anticrossing_half_gap: anticrossing_half_gap(&es),
            eigenstates,
        })
    }

    /// Eigenstate indices grouped by class.
    pub fn sets(&self) -> ClassifiedSets {
        let mut sets = ClassifiedSets::default();
        for e in &self.eigenstates {
            match e.classification {
                Classification::Classified { class, .. } => match class {
                    EigenstateClass::Pure => sets.pure.push(e.index),
                    EigenstateClass::OneParticleEntangled => sets.one_particle.push(e.index),
                    EigenstateClass::TwoParticleEntangled => sets.two_particle.push(e.index),
                    EigenstateClass::ThreeParticleEntangled => sets.three_particle.push(e.index),
                },
                Classification::Ambiguous { .. } => sets.ambiguous.push(e.index),
            }
        }
        sets
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ClassifiedSets {
    pub pure: Vec<usize>,
    pub one_particle: Vec<usize>,
    pub two_particle: Vec<usize>,
    pub three_particle: Vec<usize>,
    pub ambiguous: Vec<usize>,
}
