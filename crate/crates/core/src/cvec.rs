//! Small helpers over complex state vectors stored as `Vec<Complex64>`.

pub use num_complex::Complex64 as C64;

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian inner product `⟨a|b⟩ = Σ conj(a_i) b_i`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `y += s * x`
pub fn axpy(y: &mut [C64], s: C64, x: &[C64]) {
    debug_assert_eq!(y.len(), x.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}

pub fn scale(v: &mut [C64], s: C64) {
    for z in v.iter_mut() {
        *z *= s;
    }
}

/// Normalizes in place; returns the prior norm (vector untouched if zero).
pub fn normalize(v: &mut [C64]) -> f64 {
    let n = norm(v);
    if n > 0.0 {
        scale(v, C64::new(1.0 / n, 0.0));
    }
    n
}

pub fn zeros(dim: usize) -> Vec<C64> {
    vec![C64::new(0.0, 0.0); dim]
}

/// Unit basis vector `e_k`.
pub fn basis_vector(dim: usize, k: usize) -> Vec<C64> {
    let mut v = zeros(dim);
    v[k] = C64::new(1.0, 0.0);
    v
}

pub fn from_real(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_is_conjugate_linear_in_first_slot() {
        let a = vec![C64::new(1.0, 2.0), C64::new(0.0, -1.0)];
        let b = vec![C64::new(3.0, 0.0), C64::new(1.0, 1.0)];
        let ab = inner(&a, &b);
        let ba = inner(&b, &a);
        assert!((ab - ba.conj()).norm() < 1e-15);
    }

    #[test]
    fn normalize_returns_prior_norm() {
        let mut v = vec![C64::new(3.0, 0.0), C64::new(0.0, 4.0)];
        let n = normalize(&mut v);
        assert!((n - 5.0).abs() < 1e-15);
        assert!((norm(&v) - 1.0).abs() < 1e-15);
    }
}
