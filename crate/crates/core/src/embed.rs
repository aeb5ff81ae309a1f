//! Embedding sampled L₂([0, a]) functions into H_N.
//!
//! A function f enters as its samples at the grid points a_k = a·k/N and is
//! mapped to Σ_k (a/N)^{1/2} f(a_k) u(k). On the Fourier modes
//! f_n = a^{−1/2} e^{i2πnx/a} the embedding is exact: f_n lands on the basis
//! vector v(n mod N), with the amplitudes produced through the same exact
//! phase path as the basis change, so the identification holds bit for bit.
//!
//! The module also provides the exponentiated-square diagonals
//! e^{iαQ²} (u-basis phases α(ka/N)²) and e^{iαP²} (v-basis phases α(bk)²),
//! in float-phase form for arbitrary real α and in exact form when α/π
//! (resp. α·b²/π) is rational.

use num_complex::Complex64 as C64;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Basis, DiagonalOp, ExactDiagonal, FiniteModel, StateVector};
use crate::par;
use crate::phase::RationalPhase;

/// Analytic descriptor of where the samples came from, when known.
///
/// The `Mode` descriptor lets [`embed`] follow the exact phase path instead
/// of multiplying √(a/N)·a^{−1/2} in floating point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FunctionKind {
    /// f_n = a^{−1/2} e^{i2πnx/a}.
    Mode { index: i64 },
    /// Real polynomial Σ c_j x^j, coefficients in ascending degree.
    Polynomial { coeffs: Vec<f64> },
    /// exp(−(x−center)²/(2·width²)), unnormalized.
    Gaussian { center: f64, width: f64 },
    /// Raw samples with no analytic description.
    Samples,
}

/// A function on [0, a] known through its N samples at a_k = a·k/N.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    a: Rational64,
    samples: Vec<C64>,
    kind: FunctionKind,
}

impl SampledFunction {
    /// The Fourier mode f_n sampled on the grid. Rejects aliased indices:
    /// |n| must stay below N/2.
    pub fn mode(a: Rational64, n: usize, index: i64) -> Result<Self> {
        check_interval(a)?;
        if 2 * index.unsigned_abs() >= n as u64 {
            return Err(Error::Domain(format!(
                "mode index {index} is aliased on an N = {n} grid; need |index| < N/2"
            )));
        }
        let inv_sqrt_a = (ratio_to_f64(a)).sqrt().recip();
        let samples = (0..n)
            .map(|k| {
                // f_n(a_k) = a^{−1/2} e^{i2πnk/N}
                RationalPhase::from_i128(2 * index as i128 * k as i128, n as i128)
                    .map(|ph| ph.to_complex() * inv_sqrt_a)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SampledFunction {
            a,
            samples,
            kind: FunctionKind::Mode { index },
        })
    }

    /// A real polynomial sampled on the grid.
    pub fn polynomial(a: Rational64, n: usize, coeffs: &[f64]) -> Result<Self> {
        check_interval(a)?;
        let af = ratio_to_f64(a);
        let samples = (0..n)
            .map(|k| {
                let x = af * k as f64 / n as f64;
                let y = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
                C64::new(y, 0.0)
            })
            .collect();
        Ok(SampledFunction {
            a,
            samples,
            kind: FunctionKind::Polynomial {
                coeffs: coeffs.to_vec(),
            },
        })
    }

    /// An unnormalized Gaussian bump sampled on the grid.
    pub fn gaussian(a: Rational64, n: usize, center: f64, width: f64) -> Result<Self> {
        check_interval(a)?;
        if width <= 0.0 {
            return Err(Error::Domain("gaussian width must be positive".into()));
        }
        let af = ratio_to_f64(a);
        let samples = (0..n)
            .map(|k| {
                let x = af * k as f64 / n as f64;
                let z = (x - center) / width;
                C64::new((-0.5 * z * z).exp(), 0.0)
            })
            .collect();
        Ok(SampledFunction {
            a,
            samples,
            kind: FunctionKind::Gaussian { center, width },
        })
    }

    /// Raw samples (e.g. read from CSV).
    pub fn from_samples(a: Rational64, samples: Vec<C64>) -> Result<Self> {
        check_interval(a)?;
        if samples.is_empty() {
            return Err(Error::Domain("need at least one sample".into()));
        }
        Ok(SampledFunction {
            a,
            samples,
            kind: FunctionKind::Samples,
        })
    }

    pub fn a(&self) -> Rational64 {
        self.a
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }
}

fn check_interval(a: Rational64) -> Result<()> {
    if a <= Rational64::zero() {
        return Err(Error::Domain(format!(
            "interval length a must be positive, got {a}"
        )));
    }
    Ok(())
}

pub(crate) fn ratio_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// F_N(f) = Σ_k (a/N)^{1/2} f(a_k) u(k).
///
/// For `Mode` functions the amplitude N^{−1/2} e^{i2πnk/N} is formed through
/// the exact phase path, making F_N(f_n) literally equal to the basis vector
/// v(n mod N) expressed in u coordinates.
pub fn embed(model: &FiniteModel, f: &SampledFunction) -> Result<StateVector> {
    if f.len() != model.dim() {
        return Err(Error::DimensionMismatch(format!(
            "function has {} samples, model dimension is {}",
            f.len(),
            model.dim()
        )));
    }
    if f.a() != model.a() {
        return Err(Error::DimensionMismatch(format!(
            "function interval a = {} vs model a = {}",
            f.a(),
            model.a()
        )));
    }
    let n = model.dim();
    let amplitudes = match f.kind {
        FunctionKind::Mode { index } => {
            let scale = 1.0 / (n as f64).sqrt();
            (0..n)
                .map(|k| {
                    RationalPhase::from_i128(2 * index as i128 * k as i128, n as i128)
                        .map(|ph| ph.to_complex() * scale)
                })
                .collect::<Result<Vec<_>>>()?
        }
        _ => {
            let scale = (ratio_to_f64(f.a) / n as f64).sqrt();
            f.samples.iter().map(|&s| s * scale).collect()
        }
    };
    Ok(StateVector::new(Basis::U, amplitudes))
}

/// ‖F_N(f)‖² = (a/N) Σ_k |f(a_k)|², the left Riemann sum for ∫₀ᵃ |f|².
pub fn embedded_norm_sq(model: &FiniteModel, f: &SampledFunction) -> Result<f64> {
    if f.len() != model.dim() {
        return Err(Error::DimensionMismatch(format!(
            "function has {} samples, model dimension is {}",
            f.len(),
            model.dim()
        )));
    }
    let weight = ratio_to_f64(f.a) / f.len() as f64;
    Ok(weight * f.samples.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

/// A diagonal unitary with double-precision phase angles.
///
/// Used for e^{iαQ²} and e^{iαP²} with irrational α where no exact phase
/// representation exists. The angles grow like α·(bN)² along the diagonal,
/// so for large N and α·b²/π far from rational the evaluated factors lose
/// relative phase accuracy; prefer the exact constructors when the phase
/// ratio is rational.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatDiagonal {
    basis: Basis,
    angles: Vec<f64>,
}

impl FloatDiagonal {
    pub fn new(basis: Basis, angles: Vec<f64>) -> Self {
        FloatDiagonal { basis, angles }
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }
}

impl DiagonalOp for FloatDiagonal {
    fn basis(&self) -> Basis {
        self.basis
    }

    fn dim(&self) -> usize {
        self.angles.len()
    }

    fn factor(&self, k: usize) -> C64 {
        C64::from_polar(1.0, self.angles[k])
    }
}

/// e^{iαQ²} on the u basis: angle α·(ka/N)² at index k.
pub fn exp_q2_float(model: &FiniteModel, alpha: f64) -> FloatDiagonal {
    let n = model.dim();
    let af = ratio_to_f64(model.a());
    let angles = par::map_indexed(n, move |k| {
        let x = af * k as f64 / n as f64;
        alpha * x * x
    });
    FloatDiagonal::new(Basis::U, angles)
}

/// e^{iαQ²} with α = π·r for rational r: exact phases r·(ka/N)² in units
/// of π.
pub fn exp_q2_exact(model: &FiniteModel, alpha_over_pi: Rational64) -> Result<ExactDiagonal> {
    let n = model.dim() as i128;
    let a = model.a();
    let phases = (0..model.dim())
        .map(|k| {
            let k = k as i128;
            RationalPhase::from_i128(
                *alpha_over_pi.numer() as i128
                    * *a.numer() as i128
                    * *a.numer() as i128
                    * k
                    * k,
                *alpha_over_pi.denom() as i128 * *a.denom() as i128 * *a.denom() as i128 * n * n,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExactDiagonal::new(Basis::U, phases))
}

/// e^{iαP²} on the v basis: angle α·(bk)² at index k. See the type-level
/// note on phase accuracy at large N.
pub fn exp_p2_float(model: &FiniteModel, alpha: f64) -> FloatDiagonal {
    let n = model.dim();
    let bf = ratio_to_f64(model.b());
    let angles = par::map_indexed(n, move |k| {
        let p = bf * k as f64;
        alpha * p * p
    });
    FloatDiagonal::new(Basis::V, angles)
}

/// e^{iαP²} with α·b²/π = r rational: exact phases r·k² in units of π.
pub fn exp_p2_exact(model: &FiniteModel, alpha_b2_over_pi: Rational64) -> Result<ExactDiagonal> {
    let phases = (0..model.dim())
        .map(|k| {
            let k = k as i128;
            RationalPhase::from_i128(
                *alpha_b2_over_pi.numer() as i128 * k * k,
                *alpha_b2_over_pi.denom() as i128,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExactDiagonal::new(Basis::V, phases))
}
