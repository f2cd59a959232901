//! Fringe frequency estimation: coarse spectral peak search followed by
//! damped Gauss-Newton least squares on the model
//!
//! ```text
//! P(T) = a·sin²(ωT/2) + c
//! ```
//!
//! The spectral stage evaluates |Σ (P_k − mean) e^{−iωT_k}|² on an
//! oversampled frequency grid up to the Nyquist limit of the sampling; the
//! refinement stage converges quadratically from that start.

use crate::{Error, Result};

pub(crate) const MIN_SAMPLES: usize = 8;
const MAX_ITERATIONS: usize = 100;
const STEP_TOL: f64 = 1e-12;
/// Peaks separated by more than this many resolution widths are treated as
/// genuine competitors, not main-lobe structure.
const LOBE_WIDTH: f64 = 4.0;

#[derive(Debug, Clone, Copy)]
pub(crate) struct FitOutput {
    pub omega: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub rms_residual: f64,
    pub omega_stderr: f64,
    pub covariance: [f64; 3],
    pub iterations: usize,
    pub degenerate: bool,
}

pub(crate) fn fit_sin_squared(ts: &[f64], ps: &[f64]) -> Result<FitOutput> {
    let n = ts.len();
    if n < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            got: n,
            need: MIN_SAMPLES,
        });
    }
    assert_eq!(ts.len(), ps.len());

    let mean = ps.iter().sum::<f64>() / n as f64;
    let var = ps.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / n as f64;
    if var < 1e-16 {
        return Ok(FitOutput {
            omega: 0.0,
            amplitude: 0.0,
            offset: mean,
            rms_residual: var.sqrt(),
            omega_stderr: 0.0,
            covariance: [0.0; 3],
            iterations: 0,
            degenerate: true,
        });
    }

    let omega0 = spectral_peak(ts, ps, mean)?;
    let p_max = ps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let p_min = ps.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut theta = [omega0, p_max - p_min, p_min];

    let mut ssr = sum_sq_residuals(ts, ps, &theta);
    let mut iterations = 0;
    for _ in 0..MAX_ITERATIONS {
        iterations += 1;
        let (jtj, jtr) = normal_equations(ts, ps, &theta);
        let delta = match solve3(jtj, jtr) {
            Some(d) => d,
            None => break, // singular normal matrix: nothing left to refine
        };
        let step_size = delta.iter().map(|d| d.abs()).sum::<f64>();
        let mut scale = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let trial = [
                theta[0] - scale * delta[0],
                theta[1] - scale * delta[1],
                theta[2] - scale * delta[2],
            ];
            let trial_ssr = sum_sq_residuals(ts, ps, &trial);
            if trial_ssr <= ssr {
                theta = trial;
                ssr = trial_ssr;
                improved = true;
                break;
            }
            scale /= 2.0;
        }
        if !improved {
            if step_size < 1e-6 {
                break; // at the optimum within noise
            }
            return Err(Error::FitDiverged(format!(
                "residual not reduced at iteration {iterations} (rss {ssr:.3e})"
            )));
        }
        if scale * step_size < STEP_TOL {
            break;
        }
    }

    theta[0] = theta[0].abs();
    let (jtj, _) = normal_equations(ts, ps, &theta);
    let dof = n.saturating_sub(3).max(1) as f64;
    let sigma2 = ssr / dof;
    let covariance = invert3_diag(jtj).map(|d| [sigma2 * d[0], sigma2 * d[1], sigma2 * d[2]]);
    let covariance = covariance.unwrap_or([0.0; 3]);

    Ok(FitOutput {
        omega: theta[0],
        amplitude: theta[1],
        offset: theta[2],
        rms_residual: (ssr / n as f64).sqrt(),
        omega_stderr: covariance[0].max(0.0).sqrt(),
        covariance,
        iterations,
        degenerate: false,
    })
}

/// Largest peak of the centered periodogram; errors if a second distant
/// peak comes within 10% of its power.
fn spectral_peak(ts: &[f64], ps: &[f64], mean: f64) -> Result<f64> {
    let span = ts[ts.len() - 1] - ts[0];
    let dt_min = ts
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if span <= 0.0 || dt_min <= 0.0 {
        return Err(Error::InvalidInput("time grid must be increasing".into()));
    }
    let omega_res = std::f64::consts::TAU / span;
    let step = omega_res / 8.0;
    let omega_max = std::f64::consts::PI / dt_min;

    let mut powers = Vec::new();
    let mut omega = step;
    while omega <= omega_max {
        let (mut re, mut im) = (0.0, 0.0);
        for (&t, &p) in ts.iter().zip(ps) {
            let q = p - mean;
            re += q * (omega * t).cos();
            im -= q * (omega * t).sin();
        }
        powers.push((omega, re * re + im * im));
        omega += step;
    }

    let mut peaks: Vec<(f64, f64)> = Vec::new();
    for i in 0..powers.len() {
        let here = powers[i].1;
        let left = if i > 0 { powers[i - 1].1 } else { -1.0 };
        let right = if i + 1 < powers.len() {
            powers[i + 1].1
        } else {
            -1.0
        };
        if here >= left && here >= right {
            peaks.push(powers[i]);
        }
    }
    let &(best_omega, best_power) = peaks
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::FitDiverged("no spectral peak found".into()))?;
    for &(omega, power) in &peaks {
        if (omega - best_omega).abs() > LOBE_WIDTH * omega_res && power >= 0.9 * best_power {
            return Err(Error::AmbiguousFrequency {
                omega_a: best_omega,
                omega_b: omega,
            });
        }
    }
    Ok(best_omega)
}

fn model(t: f64, theta: &[f64; 3]) -> f64 {
    let s = (theta[0] * t / 2.0).sin();
    theta[1] * s * s + theta[2]
}

fn sum_sq_residuals(ts: &[f64], ps: &[f64], theta: &[f64; 3]) -> f64 {
    ts.iter()
        .zip(ps)
        .map(|(&t, &p)| {
            let r = model(t, theta) - p;
            r * r
        })
        .sum()
}

/// JᵀJ and Jᵀr for the residuals r_k = model(t_k) − p_k.
fn normal_equations(ts: &[f64], ps: &[f64], theta: &[f64; 3]) -> ([[f64; 3]; 3], [f64; 3]) {
    let mut jtj = [[0.0; 3]; 3];
    let mut jtr = [0.0; 3];
    for (&t, &p) in ts.iter().zip(ps) {
        let r = model(t, theta) - p;
        let j = [
            theta[1] * (t / 2.0) * (theta[0] * t).sin(),
            (theta[0] * t / 2.0).sin().powi(2),
            1.0,
        ];
        for a in 0..3 {
            jtr[a] += j[a] * r;
            for b in 0..3 {
                jtj[a][b] += j[a] * j[b];
            }
        }
    }
    (jtj, jtr)
}

/// Gaussian elimination with partial pivoting; None when singular.
#[allow(clippy::needless_range_loop)]
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in (row + 1)..3 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Diagonal of the inverse of a symmetric positive 3×3 matrix.
fn invert3_diag(a: [[f64; 3]; 3]) -> Option<[f64; 3]> {
    let mut diag = [0.0; 3];
    for k in 0..3 {
        let mut e = [0.0; 3];
        e[k] = 1.0;
        let col = solve3(a, e)?;
        diag[k] = col[k];
    }
    Some(diag)
}
