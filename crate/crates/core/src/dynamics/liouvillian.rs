//! GKSL generators in matrix and vectorized (superoperator) form.
//!
//! Vectorization stacks columns, matching nalgebra's storage order:
//! `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.

use crate::error::{Error, Result};
use crate::hilbert::{Operator, C64};
use crate::linalg::{hermiticity_deviation, kron, max_abs};

const HERMITICITY_TOL: f64 = 1e-12;

/// One Lindblad channel `Γ (L ρ L† - ½{L†L, ρ})`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub rate: f64,
    pub jump: Operator,
}

impl Channel {
    pub fn new(rate: f64, jump: Operator) -> Self {
        Channel { rate, jump }
    }
}

fn validate(h: &Operator, channels: &[Channel]) -> Result<()> {
    let d = h.nrows();
    if h.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: "square Hamiltonian".into(),
            found: format!("{}x{}", h.nrows(), h.ncols()),
        });
    }
    let dev = hermiticity_deviation(h);
    if dev > HERMITICITY_TOL * max_abs(h).max(1.0) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    for (i, c) in channels.iter().enumerate() {
        if c.rate.is_nan() || c.rate < 0.0 || !c.rate.is_finite() {
            return Err(Error::NegativeRate {
                channel: i,
                rate: c.rate,
            });
        }
        if c.jump.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: format!("{d}x{d} jump operator"),
                found: format!("{}x{}", c.jump.nrows(), c.jump.ncols()),
            });
        }
    }
    Ok(())
}

/// Matrix-form generator, applied without building the superoperator.
///
/// Uses `dρ/dt = -i(H_eff ρ - ρ H_eff†) + Σ Γ L ρ L†` with
/// `H_eff = H - i/2 Σ Γ L†L`.
#[derive(Debug, Clone)]
pub struct Lindbladian {
    h: Operator,
    h_eff: Operator,
    channels: Vec<Channel>,
    // nonzero entries of each jump operator, scaled by sqrt(rate)
    sparse_jumps: Vec<Vec<(usize, usize, C64)>>,
}

impl Lindbladian {
    pub fn new(h: &Operator, channels: &[Channel]) -> Result<Self> {
        validate(h, channels)?;
        let d = h.nrows();
        let mut h_eff = h.clone();
        let mut sparse_jumps = Vec::new();
        for c in channels.iter().filter(|c| c.rate > 0.0) {
            let ldl = c.jump.adjoint() * &c.jump;
            h_eff -= ldl.scale(0.5 * c.rate) * C64::new(0.0, 1.0);
            let s = c.rate.sqrt();
            let mut nz = Vec::new();
            for j in 0..d {
                for i in 0..d {
                    let v = c.jump[(i, j)];
                    if v != C64::new(0.0, 0.0) {
                        nz.push((i, j, v * s));
                    }
                }
            }
            sparse_jumps.push(nz);
        }
        Ok(Lindbladian {
            h: h.clone(),
            h_eff,
            channels: channels.to_vec(),
            sparse_jumps,
        })
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.h
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    /// `dρ/dt` for a column-major `d*d` slice, written into `out`.
    pub fn apply_slice(&self, rho: &[C64], out: &mut [C64]) {
        let d = self.dim();
        let h = &self.h_eff;
        let i = C64::new(0.0, 1.0);
        // out = -i H_eff ρ + i ρ H_eff†
        for c in 0..d {
            for r in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..d {
                    acc += h[(r, k)] * rho[c * d + k] - rho[k * d + r] * h[(c, k)].conj();
                }
                out[c * d + r] = -i * acc;
            }
        }
        for nz in &self.sparse_jumps {
            for &(a, i1, x) in nz {
                for &(b, j1, y) in nz {
                    out[b * d + a] += x * rho[j1 * d + i1] * y.conj();
                }
            }
        }
    }

    pub fn apply(&self, rho: &Operator) -> Operator {
        let d = self.dim();
        let mut out = Operator::zeros(d, d);
        self.apply_slice(rho.as_slice(), out.as_mut_slice());
        out
    }

    /// Heisenberg-picture generator `i[H, A] + Σ Γ (L†AL - ½{L†L, A})`.
    pub fn apply_adjoint(&self, a: &Operator) -> Operator {
        let i = C64::new(0.0, 1.0);
        let mut out = (&self.h * a - a * &self.h) * i;
        for c in self.channels.iter().filter(|c| c.rate > 0.0) {
            let ld = c.jump.adjoint();
            let ldl = &ld * &c.jump;
            out += (&ld * a * &c.jump - (&ldl * a + a * &ldl).scale(0.5)).scale(c.rate);
        }
        out
    }

    /// The `d² x d²` superoperator acting on column-stacked density matrices.
    pub fn superoperator(&self) -> Operator {
        let d = self.dim();
        let id = Operator::identity(d, d);
        let i = C64::new(0.0, 1.0);
        let mut l = (kron(&id, &self.h) - kron(&self.h.transpose(), &id)) * (-i);
        for c in self.channels.iter().filter(|c| c.rate > 0.0) {
            let ldl = c.jump.adjoint() * &c.jump;
            let term = kron(&c.jump.conjugate(), &c.jump)
                - kron(&id, &ldl).scale(0.5)
                - kron(&ldl.transpose(), &id).scale(0.5);
            l += term.scale(c.rate);
        }
        l
    }
}

/// Vectorized GKSL generator for `H` and `channels`.
pub fn liouvillian(h: &Operator, channels: &[Channel]) -> Result<Operator> {
    Ok(Lindbladian::new(h, channels)?.superoperator())
}
