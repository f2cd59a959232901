//! Lanczos tridiagonalization with full reorthogonalization, in real
//! arithmetic for ground-state searches and complex arithmetic for Krylov
//! propagation. Full reorthogonalization (two Gram-Schmidt passes against
//! the whole basis) costs O(m²n) but keeps the basis orthonormal to
//! machine precision at the subspace sizes used here.

use crate::cvec::{self, C64};
use crate::hamiltonian::SparseHamiltonian;

/// Krylov factorization H V ≈ V T + β_m v_m e_mᵀ.
pub(crate) struct KrylovBasis<T> {
    pub alphas: Vec<f64>,
    /// betas[j] couples vectors j and j+1; len = steps - 1.
    pub betas: Vec<f64>,
    pub vectors: Vec<Vec<T>>,
    /// Coupling out of the spanned subspace; 0 on breakdown (invariant
    /// subspace, factorization exact).
    pub residual_beta: f64,
}

fn breakdown_floor(scale: f64) -> f64 {
    1e-12 * scale.max(1e-300)
}

pub(crate) fn lanczos_real(
    h: &SparseHamiltonian,
    start: &[f64],
    m_max: usize,
) -> KrylovBasis<f64> {
    let dim = h.dim();
    let m_max = m_max.min(dim);
    let mut v = start.to_vec();
    let norm0 = l2(&v);
    assert!(norm0 > 0.0, "lanczos needs a nonzero start vector");
    v.iter_mut().for_each(|x| *x /= norm0);

    let mut vectors: Vec<Vec<f64>> = vec![v];
    let mut alphas = Vec::with_capacity(m_max);
    let mut betas = Vec::new();
    let mut residual_beta = 0.0;
    let mut w = vec![0.0; dim];

    for j in 0..m_max {
        h.matvec_real(&vectors[j], &mut w);
        let scale = l2(&w);
        let alpha: f64 = dot(&vectors[j], &w);
        alphas.push(alpha);
        for (wi, vi) in w.iter_mut().zip(&vectors[j]) {
            *wi -= alpha * vi;
        }
        if j > 0 {
            let beta_prev = betas[j - 1];
            for (wi, vi) in w.iter_mut().zip(&vectors[j - 1]) {
                *wi -= beta_prev * vi;
            }
        }
        for _ in 0..2 {
            for prev in &vectors {
                let overlap: f64 = dot(prev, &w);
                for (wi, pi) in w.iter_mut().zip(prev) {
                    *wi -= overlap * pi;
                }
            }
        }
        let beta = l2(&w);
        if j + 1 == m_max {
            residual_beta = beta;
            break;
        }
        if beta <= breakdown_floor(scale) {
            residual_beta = 0.0;
            break;
        }
        betas.push(beta);
        vectors.push(w.iter().map(|x| x / beta).collect());
    }

    KrylovBasis {
        alphas,
        betas,
        vectors,
        residual_beta,
    }
}

pub(crate) fn lanczos_complex(
    h: &SparseHamiltonian,
    start: &[C64],
    m_max: usize,
) -> KrylovBasis<C64> {
    let dim = h.dim();
    let m_max = m_max.min(dim);
    let mut v = start.to_vec();
    let norm0 = cvec::normalize(&mut v);
    assert!(norm0 > 0.0, "lanczos needs a nonzero start vector");

    let mut vectors: Vec<Vec<C64>> = vec![v];
    let mut alphas = Vec::with_capacity(m_max);
    let mut betas: Vec<f64> = Vec::new();
    let mut residual_beta = 0.0;
    let mut w = cvec::zeros(dim);

    for j in 0..m_max {
        h.matvec_into(&vectors[j], &mut w);
        let scale = cvec::norm(&w);
        // H is Hermitian: the diagonal recurrence coefficient is real
        let alpha = cvec::inner(&vectors[j], &w).re;
        alphas.push(alpha);
        cvec::axpy(&mut w, C64::new(-alpha, 0.0), &vectors[j]);
        if j > 0 {
            cvec::axpy(&mut w, C64::new(-betas[j - 1], 0.0), &vectors[j - 1]);
        }
        for _ in 0..2 {
            for prev in &vectors {
                let overlap = cvec::inner(prev, &w);
                cvec::axpy(&mut w, -overlap, prev);
            }
        }
        let beta = cvec::norm(&w);
        if j + 1 == m_max {
            residual_beta = beta;
            break;
        }
        if beta <= breakdown_floor(scale) {
            residual_beta = 0.0;
            break;
        }
        betas.push(beta);
        let mut next = w.clone();
        cvec::scale(&mut next, C64::new(1.0 / beta, 0.0));
        vectors.push(next);
    }

    KrylovBasis {
        alphas,
        betas,
        vectors,
        residual_beta,
    }
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
