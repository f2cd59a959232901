//! Abelian gauge groups and their electric link variables.
//!
//! Each link carries an electric eigenvalue `e`; the group fixes the value
//! range, the electric energy density, and how raising operators act:
//!
//! - `Z2`: e ∈ {0, 1}, energy e, raising flips mod 2.
//! - `ZN(n)`: e ∈ {0, …, n-1}, clock energy 1 − cos(2πe/n), raising mod n.
//! - `U1Truncated(Λ)`: e ∈ {−Λ, …, Λ}, energy e², raising past ±Λ
//!   annihilates the state.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaugeGroup {
    Z2,
    ZN(u32),
    U1Truncated(u32),
}

impl GaugeGroup {
    pub fn zn(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("ZN needs N >= 2, got {n}")));
        }
        Ok(GaugeGroup::ZN(n))
    }

    pub fn u1_truncated(lambda: u32) -> Result<Self> {
        if lambda < 1 {
            return Err(Error::InvalidInput("U(1) truncation needs Λ >= 1".into()));
        }
        Ok(GaugeGroup::U1Truncated(lambda))
    }

    /// Electric eigenvalues in ascending order.
    pub fn electric_values(&self) -> Vec<i32> {
        match *self {
            GaugeGroup::Z2 => vec![0, 1],
            GaugeGroup::ZN(n) => (0..n as i32).collect(),
            GaugeGroup::U1Truncated(l) => (-(l as i32)..=l as i32).collect(),
        }
    }

    pub fn num_values(&self) -> usize {
        match *self {
            GaugeGroup::Z2 => 2,
            GaugeGroup::ZN(n) => n as usize,
            GaugeGroup::U1Truncated(l) => 2 * l as usize + 1,
        }
    }

    /// Electric energy density h_E(e). Minimized at the flux-free value 0.
    pub fn electric_energy(&self, e: i32) -> f64 {
        match *self {
            GaugeGroup::Z2 => e as f64,
            GaugeGroup::ZN(n) => 1.0 - (TAU * e as f64 / n as f64).cos(),
            GaugeGroup::U1Truncated(_) => (e as f64) * (e as f64),
        }
    }

    /// Shifts `e` by `steps` flux units: cyclic for Z2/ZN, None past the
    /// truncation bound for U(1).
    pub fn raise(&self, e: i32, steps: i32) -> Option<i32> {
        match *self {
            GaugeGroup::Z2 => Some((e + steps).rem_euclid(2)),
            GaugeGroup::ZN(n) => Some((e + steps).rem_euclid(n as i32)),
            GaugeGroup::U1Truncated(l) => {
                let raised = e + steps;
                (raised.abs() <= l as i32).then_some(raised)
            }
        }
    }

    /// Cyclic modulus, None for the truncated U(1) (exact integer flux).
    pub fn modulus(&self) -> Option<u32> {
        match *self {
            GaugeGroup::Z2 => Some(2),
            GaugeGroup::ZN(n) => Some(n),
            GaugeGroup::U1Truncated(_) => None,
        }
    }

    /// Canonical representative of a charge: reduced mod N for cyclic
    /// groups, unchanged for U(1).
    pub fn normalize_charge(&self, q: i64) -> i64 {
        match self.modulus() {
            Some(n) => q.rem_euclid(n as i64),
            None => q,
        }
    }
}

impl fmt::Display for GaugeGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GaugeGroup::Z2 => write!(f, "Z2"),
            GaugeGroup::ZN(n) => write!(f, "Z{n}"),
            GaugeGroup::U1Truncated(l) => write!(f, "U(1) Λ={l}"),
        }
    }
}
