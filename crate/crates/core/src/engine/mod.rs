//! Spectral and dynamical workhorse: sector ground states and unitary time
//! evolution e^{−iHT}.
//!
//! Small systems (dim ≤ `dense_threshold`) go through full exact
//! diagonalization, which doubles as the oracle for the Krylov path; large
//! ones use adaptive Lanczos propagation with sub-steps bounded by
//! `dt_max` and a per-step error budget proportional to the step fraction.

mod dense;
mod lanczos;

pub use dense::{sym_eig, sym_tridiag_eig, SymEig};

use crate::cvec::{self, C64};
use crate::hamiltonian::SparseHamiltonian;
use crate::rng::SplitMix64;
use crate::{Error, Result};
use lanczos::{lanczos_complex, lanczos_real};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

const MAX_RESTARTS: usize = 500;
const MAX_HALVINGS: usize = 60;

/// Which evolution algorithm to run. `Auto` picks exact diagonalization
/// up to `dense_threshold` and Krylov beyond it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvolveMethod {
    #[default]
    Auto,
    ExactDiagonalization,
    Krylov,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EvolveParams {
    pub method: EvolveMethod,
    pub dt_max: f64,
    pub krylov_dim: usize,
    pub tol: f64,
    pub dense_threshold: usize,
}

impl Default for EvolveParams {
    fn default() -> Self {
        Self {
            method: EvolveMethod::Auto,
            dt_max: 1.0,
            krylov_dim: 30,
            tol: 1e-10,
            dense_threshold: 4096,
        }
    }
}

impl EvolveParams {
    pub fn validate(&self) -> Result<()> {
        if self.krylov_dim < 2 {
            return Err(Error::InvalidInput("krylov_dim must be at least 2".into()));
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::InvalidInput("tol must be positive".into()));
        }
        if !self.dt_max.is_finite() || self.dt_max <= 0.0 {
            return Err(Error::InvalidInput("dt_max must be positive".into()));
        }
        Ok(())
    }

    fn use_dense(&self, dim: usize) -> bool {
        match self.method {
            EvolveMethod::ExactDiagonalization => true,
            EvolveMethod::Krylov => false,
            EvolveMethod::Auto => dim <= self.dense_threshold,
        }
    }
}

/// Converged eigenpair. H is real symmetric, so the vector is real; use
/// [`EigResult::state`] for the complex view.
#[derive(Debug, Clone)]
pub struct EigResult {
    pub energy: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    /// Distance to the next Ritz/eigen value, when available. A tiny gap
    /// flags a degenerate subspace: the returned vector is then just one
    /// converged representative.
    pub gap: Option<f64>,
}

impl EigResult {
    pub fn state(&self) -> Vec<C64> {
        cvec::from_real(&self.vector)
    }
}

/// Lowest eigenpair of H. Deterministic for a fixed seed: the Lanczos
/// start vector comes from a seeded PRNG.
pub fn ground_state(
    h: &SparseHamiltonian,
    params: &EvolveParams,
    seed: u64,
) -> Result<EigResult> {
    params.validate()?;
    let dim = h.dim();
    if dim == 0 {
        return Err(Error::EmptySector);
    }

    if params.use_dense(dim) {
        let eig = sym_eig(&h.to_dense(), dim)?;
        let vector = eig.vector(0).to_vec();
        let residual = eigen_residual(h, &vector, eig.values[0]);
        return Ok(EigResult {
            energy: eig.values[0],
            vector,
            residual,
            iterations: 0,
            gap: (dim > 1).then(|| eig.values[1] - eig.values[0]),
        });
    }

    let mut rng = SplitMix64::new(seed);
    let mut v: Vec<f64> = (0..dim).map(|_| rng.next_symmetric()).collect();
    let mut iterations = 0;
    let mut last_residual = f64::INFINITY;
    for _ in 0..MAX_RESTARTS {
        let kb = lanczos_real(h, &v, params.krylov_dim);
        let m = kb.alphas.len();
        iterations += m;
        let teig = sym_tridiag_eig(&kb.alphas, &kb.betas)?;
        let ritz = teig.vector(0);
        let mut y = vec![0.0; dim];
        for (j, basis_vec) in kb.vectors.iter().enumerate() {
            let c = ritz[j];
            for (yi, bi) in y.iter_mut().zip(basis_vec) {
                *yi += c * bi;
            }
        }
        let norm = y.iter().map(|x| x * x).sum::<f64>().sqrt();
        y.iter_mut().for_each(|x| *x /= norm);
        let energy = teig.values[0];
        let residual = eigen_residual(h, &y, energy);
        last_residual = residual;
        if residual <= params.tol {
            return Ok(EigResult {
                energy,
                vector: y,
                residual,
                iterations,
                gap: (m > 1).then(|| teig.values[1] - teig.values[0]),
            });
        }
        v = y;
    }
    Err(Error::NoConvergence {
        iterations,
        residual: last_residual,
    })
}

fn eigen_residual(h: &SparseHamiltonian, v: &[f64], energy: f64) -> f64 {
    let mut hv = vec![0.0; v.len()];
    h.matvec_real(v, &mut hv);
    hv.iter()
        .zip(v)
        .map(|(a, b)| {
            let d = a - energy * b;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Reusable e^{−iHt} applier. Building one amortizes the dense
/// eigendecomposition across a sweep of evolution times.
#[derive(Debug)]
pub enum Propagator {
    Dense(SymEig),
    Krylov {
        h: Arc<SparseHamiltonian>,
        params: EvolveParams,
    },
}

/// Prepares a propagator for `h` under `params`.
pub fn propagator(h: &Arc<SparseHamiltonian>, params: &EvolveParams) -> Result<Propagator> {
    params.validate()?;
    let dim = h.dim();
    if dim == 0 {
        return Err(Error::EmptySector);
    }
    if params.use_dense(dim) {
        Ok(Propagator::Dense(sym_eig(&h.to_dense(), dim)?))
    } else {
        Ok(Propagator::Krylov {
            h: Arc::clone(h),
            params: *params,
        })
    }
}

impl Propagator {
    pub fn dim(&self) -> usize {
        match self {
            Propagator::Dense(eig) => eig.n,
            Propagator::Krylov { h, .. } => h.dim(),
        }
    }

    /// Applies e^{−iHt}. Linear: any input norm is preserved.
    pub fn apply(&self, psi: &[C64], t: f64) -> Result<Vec<C64>> {
        if psi.len() != self.dim() {
            return Err(Error::LengthMismatch {
                got: psi.len(),
                dim: self.dim(),
            });
        }
        if t == 0.0 {
            return Ok(psi.to_vec());
        }
        match self {
            Propagator::Dense(eig) => Ok(dense_apply(eig, psi, t)),
            Propagator::Krylov { h, params } => krylov_apply(h, psi, t, params),
        }
    }
}

fn dense_apply(eig: &SymEig, psi: &[C64], t: f64) -> Vec<C64> {
    let n = eig.n;
    let mut out = cvec::zeros(n);
    for k in 0..n {
        let col = eig.vector(k);
        let mut c = C64::new(0.0, 0.0);
        for (vi, pi) in col.iter().zip(psi) {
            c += pi * *vi;
        }
        c *= C64::from_polar(1.0, -eig.values[k] * t);
        for (oi, vi) in out.iter_mut().zip(col) {
            *oi += c * *vi;
        }
    }
    out
}

fn krylov_apply(
    h: &SparseHamiltonian,
    psi: &[C64],
    t: f64,
    params: &EvolveParams,
) -> Result<Vec<C64>> {
    let norm0 = cvec::norm(psi);
    if norm0 == 0.0 {
        return Ok(psi.to_vec());
    }
    let total = t.abs();
    let sign = t.signum();
    let mut state = psi.to_vec();
    let mut done = 0.0;
    let mut steps = 0usize;
    let mut halvings = 0usize;
    let mut dt = params.dt_max.min(total);
    while done < total {
        dt = dt.min(total - done);
        if done + dt == done {
            break; // remaining step below representable resolution
        }
        let (candidate, est) = krylov_step(h, &state, sign * dt, params.krylov_dim);
        let budget = params.tol * (dt / total).max(f64::EPSILON);
        if est <= budget {
            state = candidate;
            done += dt;
            steps += 1;
            // ease the step back up after a successful stretch
            dt = (dt * 2.0).min(params.dt_max);
        } else {
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Err(Error::NoConvergence {
                    iterations: steps,
                    residual: est,
                });
            }
            dt /= 2.0;
        }
    }
    Ok(state)
}

/// One Krylov sub-step: project onto the Lanczos subspace, exponentiate
/// the tridiagonal matrix there, and expand back. The error estimate is
/// the classic residual coupling β_m |last component| scaled by the step.
fn krylov_step(
    h: &SparseHamiltonian,
    psi: &[C64],
    dt: f64,
    krylov_dim: usize,
) -> (Vec<C64>, f64) {
    let beta0 = cvec::norm(psi);
    let kb = lanczos_complex(h, psi, krylov_dim);
    let m = kb.alphas.len();
    let teig = sym_tridiag_eig(&kb.alphas, &kb.betas).expect("tridiagonal eig");
    // y = S exp(−iΘ dt) Sᵀ e₁ in the Krylov basis
    let mut y = cvec::zeros(m);
    for k in 0..m {
        let sk = teig.vector(k);
        let phase = C64::from_polar(1.0, -teig.values[k] * dt);
        let c = phase * sk[0];
        for (yi, &ski) in y.iter_mut().zip(sk) {
            *yi += c * ski;
        }
    }
    let mut out = cvec::zeros(psi.len());
    for (j, basis_vec) in kb.vectors.iter().enumerate() {
        cvec::axpy(&mut out, y[j] * beta0, basis_vec);
    }
    let est = beta0 * kb.residual_beta * y[m - 1].norm() * dt.abs();
    (out, est)
}

/// e^{−iHT} psi0 in one call; build a [`Propagator`] instead when sweeping
/// many times against the same H.
pub fn evolve(
    h: &Arc<SparseHamiltonian>,
    psi0: &[C64],
    t: f64,
    params: &EvolveParams,
) -> Result<Vec<C64>> {
    propagator(h, params)?.apply(psi0, t)
}

/// Re⟨psi|H|psi⟩. The imaginary part vanishes for Hermitian H and is
/// asserted to stay below 1e-12 (relative).
pub fn expectation(h: &SparseHamiltonian, psi: &[C64]) -> f64 {
    let hpsi = h.matvec(psi).expect("dimension mismatch in expectation");
    let val = cvec::inner(psi, &hpsi);
    assert!(
        val.im.abs() <= 1e-12 * val.re.abs().max(1.0),
        "non-real expectation value: {val}"
    );
    val.re
}
