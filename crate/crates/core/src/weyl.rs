//! Translation with wraparound on [0, a] and the failure of the Weyl
//! commutation relation.
//!
//! With periodic boundary conditions the exponential of the momentum
//! operator acts as e^{itP} f(x) = f(x + tℏ − a·m_{x,t}), where m_{x,t} is
//! the unique integer putting the argument back into [0, a). Comparing the
//! two operator orders pointwise,
//!
//! ```text
//! e^{itP} e^{isQ} f(x) = e^{i(stℏ − s·a·m_{x,t})} · e^{isQ} e^{itP} f(x),
//! ```
//!
//! so the naive Weyl factor e^{istℏ} is correct exactly on the grid points
//! that do not wrap (m_{x,t} = 0).

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

/// An N-point sample grid on [0, a) with periodic boundary conditions.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct WeylGrid {
    a: f64,
    n: usize,
    hbar: f64,
}

impl WeylGrid {
    pub fn new(a: f64, n: usize, hbar: f64) -> Result<Self> {
        if !(a > 0.0) || !(hbar > 0.0) {
            return Err(Error::Domain(
                "interval length and ℏ must be positive".into(),
            ));
        }
        if n < 2 {
            return Err(Error::Domain(format!("need at least 2 grid points, got {n}")));
        }
        Ok(WeylGrid { a, n, hbar })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Grid point x_k = a·k/N.
    pub fn point(&self, k: usize) -> f64 {
        self.a * k as f64 / self.n as f64
    }
}

/// The shift data of e^{itP} on a grid: t·ℏ expressed in whole grid steps.
#[derive(Copy, Clone, Debug)]
pub struct WraparoundShift {
    t: f64,
    t_hbar: f64,
    steps: i64,
}

impl WraparoundShift {
    /// Requires t·ℏ·N/a to be an integer so the translation lands on the
    /// grid; otherwise reports the nearest admissible t.
    pub fn new(grid: &WeylGrid, t: f64) -> Result<Self> {
        let steps_f = t * grid.hbar * grid.n as f64 / grid.a;
        let steps = steps_f.round();
        if (steps_f - steps).abs() > 1e-9 * steps_f.abs().max(1.0) {
            let nearest = steps * grid.a / (grid.hbar * grid.n as f64);
            return Err(Error::Grid(format!(
                "shift t·ℏ·N/a = {steps_f} is off-grid; nearest admissible t ≈ {nearest}"
            )));
        }
        Ok(WraparoundShift {
            t,
            t_hbar: t * grid.hbar,
            steps: steps as i64,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// The translation distance t·ℏ.
    pub fn t_hbar(&self) -> f64 {
        self.t_hbar
    }

    /// The translation in grid steps (may exceed N or be negative).
    pub fn steps(&self) -> i64 {
        self.steps
    }

    /// m_{x,t} at grid point k: the unique integer with
    /// 0 ≤ x_k + tℏ − a·m < a.
    pub fn wrap_count(&self, grid: &WeylGrid, k: usize) -> i64 {
        (k as i64 + self.steps).div_euclid(grid.n as i64)
    }

    /// The wrapped target index of grid point k.
    pub fn target(&self, grid: &WeylGrid, k: usize) -> usize {
        (k as i64 + self.steps).rem_euclid(grid.n as i64) as usize
    }
}

/// e^{itP} on sampled data: the cyclic index shift by tℏ·N/a steps. Exact
/// permutation, norm preserved identically.
pub fn translate(grid: &WeylGrid, t: f64, samples: &[C64]) -> Result<Vec<C64>> {
    if samples.len() != grid.n {
        return Err(Error::DimensionMismatch(format!(
            "{} samples on an N = {} grid",
            samples.len(),
            grid.n
        )));
    }
    let shift = WraparoundShift::new(grid, t)?;
    Ok((0..grid.n)
        .map(|k| samples[shift.target(grid, k)])
        .collect())
}

/// The pointwise factor by which the operator order e^{itP} e^{isQ}
/// differs from e^{isQ} e^{itP} on `samples` at grid point k. Equals
/// e^{i(stℏ − s·a·m_{x,t})}; fails if the function vanishes at the
/// shifted point.
pub fn weyl_commutator(
    grid: &WeylGrid,
    s: f64,
    t: f64,
    k: usize,
    samples: &[C64],
) -> Result<C64> {
    if samples.len() != grid.n {
        return Err(Error::DimensionMismatch(format!(
            "{} samples on an N = {} grid",
            samples.len(),
            grid.n
        )));
    }
    if k >= grid.n {
        return Err(Error::Domain(format!(
            "grid index {k} out of range for N = {}",
            grid.n
        )));
    }
    let shift = WraparoundShift::new(grid, t)?;
    let shifted = samples[shift.target(grid, k)];
    // (e^{isQ} e^{itP} f)(x_k) = e^{is·x_k} f(x_k + tℏ − a·m)
    let x = grid.point(k);
    let qp = C64::from_polar(1.0, s * x) * shifted;
    if qp.norm() < 1e-12 {
        return Err(Error::UndefinedRatio(format!(
            "test function vanishes at the shifted grid point (k = {k})"
        )));
    }
    // (e^{itP} e^{isQ} f)(x_k) = e^{is·(x_k + tℏ − a·m)} f(x_k + tℏ − a·m)
    let m = shift.wrap_count(grid, k);
    let y = x + shift.t_hbar() - grid.a * m as f64;
    let pq = C64::from_polar(1.0, s * y) * shifted;
    Ok(pq / qp)
}

/// The factor e^{i(stℏ − s·a·m_{x,t})} predicted at grid point k.
pub fn expected_commutator(grid: &WeylGrid, s: f64, t: f64, k: usize) -> Result<C64> {
    let shift = WraparoundShift::new(grid, t)?;
    let m = shift.wrap_count(grid, k);
    Ok(C64::from_polar(
        1.0,
        s * shift.t_hbar() - s * grid.a * m as f64,
    ))
}

/// How much of the grid the naive Weyl factor e^{istℏ} gets wrong.
#[derive(Clone, Debug, Serialize)]
pub struct ViolationReport {
    /// Grid size.
    pub n: usize,
    /// Translation distance t·ℏ.
    pub t_hbar: f64,
    /// Translation in grid steps.
    pub shift_steps: i64,
    /// Number of grid points with m_{x,t} ≠ 0.
    pub wrapped_count: usize,
    /// wrapped_count / N.
    pub fraction: f64,
    /// The uniform phase s·tℏ the naive relation predicts everywhere.
    pub naive_phase: f64,
    /// The corrected phase s·tℏ − s·a on the wrapped points (single-wrap
    /// shifts).
    pub wrapped_phase: f64,
}

/// Count the grid points where the commutator differs from the naive
/// e^{istℏ}, i.e. where the translation wraps.
pub fn violation_report(grid: &WeylGrid, s: f64, t: f64) -> Result<ViolationReport> {
    let shift = WraparoundShift::new(grid, t)?;
    let wrapped_count = (0..grid.n)
        .filter(|&k| shift.wrap_count(grid, k) != 0)
        .count();
    Ok(ViolationReport {
        n: grid.n,
        t_hbar: shift.t_hbar(),
        shift_steps: shift.steps(),
        wrapped_count,
        fraction: wrapped_count as f64 / grid.n as f64,
        naive_phase: s * shift.t_hbar(),
        wrapped_phase: s * shift.t_hbar() - s * grid.a,
    })
}
