//! Dense real-symmetric eigendecomposition: Householder reduction to
//! tridiagonal form followed by implicit-shift QL iteration, the classic
//! EISPACK tred2/tql2 pair. Exact diagonalization at these dimensions is
//! both the production path for small sectors and the oracle for the
//! Krylov propagator.

use crate::{Error, Result};

/// Eigendecomposition of a real symmetric matrix.
///
/// `values` are ascending; eigenvector k occupies
/// `vectors[k*n .. (k+1)*n]` (column-contiguous).
#[derive(Debug, Clone)]
pub struct SymEig {
    pub n: usize,
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
}

impl SymEig {
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }
}

/// Full eigendecomposition of a symmetric `n × n` matrix given row-major.
pub fn sym_eig(a: &[f64], n: usize) -> Result<SymEig> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let mut z = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut z, n, &mut d, &mut e);
    tql2(&mut d, &mut e, &mut z, n)?;
    Ok(sorted(n, d, z))
}

/// Eigendecomposition of a symmetric tridiagonal matrix with diagonal
/// `diag` and subdiagonal `off` (`off[i]` couples i and i+1).
pub fn sym_tridiag_eig(diag: &[f64], off: &[f64]) -> Result<SymEig> {
    let n = diag.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    assert_eq!(off.len(), n.saturating_sub(1));
    let mut d = diag.to_vec();
    // tql2 expects the subdiagonal shifted into e[1..]
    let mut e = vec![0.0; n];
    e[1..].copy_from_slice(off);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql2(&mut d, &mut e, &mut z, n)?;
    Ok(sorted(n, d, z))
}

/// Reorders eigenpairs ascending and transposes `z` (row-major with
/// eigenvectors in columns) into column-contiguous storage.
fn sorted(n: usize, d: Vec<f64>, z: Vec<f64>) -> SymEig {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let mut values = Vec::with_capacity(n);
    let mut vectors = vec![0.0; n * n];
    for (slot, &k) in order.iter().enumerate() {
        values.push(d[k]);
        for i in 0..n {
            vectors[slot * n + i] = z[i * n + k];
        }
    }
    SymEig { n, values, vectors }
}

/// Householder reduction of a real symmetric matrix to tridiagonal form.
/// On exit `a` holds the accumulated orthogonal transformation Q
/// (A = Q T Qᵀ), `d` the diagonal and `e[1..]` the subdiagonal of T.
fn tred2(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    a[j * n + i] = a[i * n + j] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * a[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += a[i * n + k] * a[k * n + j];
                }
                for k in 0..i {
                    a[k * n + j] -= g * a[k * n + i];
                }
            }
        }
        d[i] = a[i * n + i];
        a[i * n + i] = 1.0;
        for j in 0..i {
            a[j * n + i] = 0.0;
            a[i * n + j] = 0.0;
        }
    }
}

fn sign_of(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// QL iteration with implicit shifts on a tridiagonal matrix, rotating the
/// columns of `z` along. `e[1..]` must hold the subdiagonal on entry.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0usize;
        'restart: loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::NoConvergence {
                    iterations: iter,
                    residual: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + sign_of(r, g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    continue 'restart;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * f;
                    z[k * n + i] = c * z[k * n + i] - s * f;
                }
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
