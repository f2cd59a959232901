//! Sparse Kogut-Susskind Hamiltonian restricted to one charge sector:
//!
//! ```text
//! H = (g²/2) Σ_links h_E(e)  −  1/(2g²) Σ_plaquettes (P + P†)
//! ```
//!
//! with P raising the two forward links and lowering the two backward links
//! of each square. The electric part is diagonal in the flux basis; each
//! plaquette move lands inside the sector basis or annihilates (truncated
//! U(1)), so the operator never leaves the sector. All entries are real and
//! stored symmetrically; states are complex only through time evolution.

use crate::cvec::C64;
use crate::sector::GaugeSector;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{self, Write};
use std::sync::Arc;

/// Rows below this stay on the sequential mat-vec kernel.
#[cfg(feature = "parallel")]
const PAR_MIN_DIM: usize = 4096;

/// Gauge coupling. The electric and magnetic prefactors are always derived
/// from g², never set independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    g2: f64,
    magnetic_enabled: bool,
}

impl Couplings {
    pub fn new(g2: f64) -> Result<Self> {
        if !g2.is_finite() || g2 <= 0.0 {
            return Err(Error::BadCoupling(g2));
        }
        Ok(Self {
            g2,
            magnetic_enabled: true,
        })
    }

    /// Electric term only; flux strings become exact eigenstates.
    pub fn electric_only(g2: f64) -> Result<Self> {
        Ok(Self {
            magnetic_enabled: false,
            ..Self::new(g2)?
        })
    }

    pub fn with_magnetic(mut self, enabled: bool) -> Self {
        self.magnetic_enabled = enabled;
        self
    }

    pub fn g2(&self) -> f64 {
        self.g2
    }

    pub fn lambda_e(&self) -> f64 {
        self.g2 / 2.0
    }

    pub fn lambda_b(&self) -> f64 {
        1.0 / (2.0 * self.g2)
    }

    pub fn magnetic_enabled(&self) -> bool {
        self.magnetic_enabled
    }
}

/// Hermitian sparse operator over a sector basis: real diagonal plus a
/// compressed-row off-diagonal part.
#[derive(Debug, Clone)]
pub struct SparseHamiltonian {
    sector: Option<Arc<GaugeSector>>,
    dim: usize,
    diagonal: Vec<f64>,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

/// Builds H for a non-empty sector. The magnetic term is skipped when
/// disabled or when the lattice has no plaquettes (1D is always electric).
pub fn assemble(sector: &Arc<GaugeSector>, couplings: &Couplings) -> Result<SparseHamiltonian> {
    let dim = sector.dim();
    if dim == 0 {
        return Err(Error::EmptySector);
    }
    let spec = sector.spec();
    let group = sector.group();

    let lambda_e = couplings.lambda_e();
    let diagonal: Vec<f64> = sector
        .basis_iter()
        .map(|state| {
            lambda_e
                * state
                    .iter()
                    .map(|&e| group.electric_energy(e))
                    .sum::<f64>()
        })
        .collect();

    let mut coo: Vec<(usize, usize, f64)> = Vec::new();
    let magnetic = couplings.magnetic_enabled() && !spec.plaquettes().is_empty();
    if magnetic {
        let lambda_b = couplings.lambda_b();
        // For mod-2 groups raising equals lowering, so P = P† and the
        // conjugate direction would double-count the same move.
        let directions: &[i32] = if group.modulus() == Some(2) {
            &[1]
        } else {
            &[1, -1]
        };
        let mut moved = vec![0i32; spec.num_links()];
        for i in 0..dim {
            let state = sector.basis_state(i);
            for plaq in spec.plaquettes() {
                'dir: for &dir in directions {
                    moved.copy_from_slice(state);
                    for (&link, &sign) in plaq.links.iter().zip(&plaq.signs) {
                        match group.raise(moved[link], dir * sign as i32) {
                            Some(e) => moved[link] = e,
                            None => continue 'dir,
                        }
                    }
                    if let Some(j) = sector.position(&moved) {
                        coo.push((j, i, -lambda_b));
                    }
                }
            }
        }
    }

    let (row_ptr, col_idx, values) = coo_to_csr(dim, coo);
    Ok(SparseHamiltonian {
        sector: Some(Arc::clone(sector)),
        dim,
        diagonal,
        row_ptr,
        col_idx,
        values,
    })
}

fn coo_to_csr(
    dim: usize,
    mut coo: Vec<(usize, usize, f64)>,
) -> (Vec<usize>, Vec<usize>, Vec<f64>) {
    coo.sort_unstable_by_key(|&(r, c, _)| (r, c));
    let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(coo.len());
    for (r, c, v) in coo {
        match merged.last_mut() {
            Some(last) if last.0 == r && last.1 == c => last.2 += v,
            _ => merged.push((r, c, v)),
        }
    }
    let mut row_ptr = vec![0usize; dim + 1];
    for &(r, _, _) in &merged {
        row_ptr[r + 1] += 1;
    }
    for i in 0..dim {
        row_ptr[i + 1] += row_ptr[i];
    }
    let col_idx = merged.iter().map(|e| e.1).collect();
    let values = merged.iter().map(|e| e.2).collect();
    (row_ptr, col_idx, values)
}

impl SparseHamiltonian {
    /// Builds a Hermitian operator from an explicit diagonal and a
    /// symmetric off-diagonal entry list (both (i,j) and (j,i) present).
    pub fn from_triplets(
        dim: usize,
        diagonal: Vec<f64>,
        offdiag: &[(usize, usize, f64)],
    ) -> Result<Self> {
        if diagonal.len() != dim {
            return Err(Error::LengthMismatch {
                got: diagonal.len(),
                dim,
            });
        }
        let mut seen = std::collections::HashMap::new();
        for &(r, c, v) in offdiag {
            if r >= dim || c >= dim {
                return Err(Error::LengthMismatch { got: r.max(c), dim });
            }
            if r == c {
                return Err(Error::InvalidInput(
                    "diagonal entries belong in `diagonal`, not the off-diagonal list".into(),
                ));
            }
            *seen.entry((r, c)).or_insert(0.0) += v;
        }
        for (&(r, c), &v) in &seen {
            match seen.get(&(c, r)) {
                Some(&mirror) if (mirror - v).abs() <= 1e-12 * v.abs().max(1.0) => {}
                _ => return Err(Error::NotSymmetric { row: r, col: c }),
            }
        }
        let (row_ptr, col_idx, values) = coo_to_csr(dim, offdiag.to_vec());
        Ok(Self {
            sector: None,
            dim,
            diagonal,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn sector(&self) -> Option<&Arc<GaugeSector>> {
        self.sector.as_ref()
    }

    pub fn nnz_offdiag(&self) -> usize {
        self.values.len()
    }

    /// y = H x. Errors on a length mismatch.
    pub fn matvec(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.dim {
            return Err(Error::LengthMismatch {
                got: x.len(),
                dim: self.dim,
            });
        }
        let mut y = vec![C64::new(0.0, 0.0); self.dim];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    /// Row-parallel kernel when the `parallel` feature is on and the system
    /// is large enough; each row is an independent fixed-order sum, so the
    /// result is identical to the sequential kernel.
    pub fn matvec_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        #[cfg(feature = "parallel")]
        {
            if self.dim >= PAR_MIN_DIM {
                use rayon::prelude::*;
                y.par_iter_mut().enumerate().for_each(|(i, yi)| {
                    *yi = self.row_apply(i, x);
                });
                return;
            }
        }
        self.matvec_into_seq(x, y);
    }

    /// Reference single-threaded kernel.
    pub fn matvec_into_seq(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.dim);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row_apply(i, x);
        }
    }

    #[inline]
    fn row_apply(&self, i: usize, x: &[C64]) -> C64 {
        let mut acc = x[i] * self.diagonal[i];
        for k in self.row_ptr[i]..self.row_ptr[i + 1] {
            acc += x[self.col_idx[k]] * self.values[k];
        }
        acc
    }

    /// Real-arithmetic mat-vec for the real-symmetric eigensolver path.
    pub fn matvec_real(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for i in 0..self.dim {
            let mut acc = self.diagonal[i] * x[i];
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            y[i] = acc;
        }
    }

    /// Dense row-major copy, used by the exact-diagonalization path.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let mut dense = vec![0.0; n * n];
        for i in 0..n {
            dense[i * n + i] = self.diagonal[i];
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                dense[i * n + self.col_idx[k]] += self.values[k];
            }
        }
        dense
    }

    /// Text dump (dimension, nnz, then `row col value` triplets including
    /// the diagonal) for offline inspection.
    pub fn write_triplets<W: Write>(&self, w: &mut W) -> io::Result<()> {
        let nnz = self.values.len() + self.diagonal.iter().filter(|&&d| d != 0.0).count();
        writeln!(w, "dim {} nnz {}", self.dim, nnz)?;
        for i in 0..self.dim {
            if self.diagonal[i] != 0.0 {
                writeln!(w, "{} {} {:.16e}", i, i, self.diagonal[i])?;
            }
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                writeln!(w, "{} {} {:.16e}", i, self.col_idx[k], self.values[k])?;
            }
        }
        Ok(())
    }
}
