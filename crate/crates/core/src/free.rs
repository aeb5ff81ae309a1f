//! Free-particle time evolution and the propagator ⟨x₁|K^t|x₀⟩.
//!
//! Under the scaling a = ht/m, b = m/t the evolution operator is diagonal in
//! the v basis with K^t v(x) = e^{−iπx²/a} v(x), and the propagator between
//! the position eigenstates |x₀⟩ = u(Nx₀/a) and |x₁⟩ collapses to
//!
//! ```text
//! ⟨x₁|K^t|x₀⟩ = (1/N) Σ_{n<N} e^{iπ(2(x₁−x₀)n − n²)/a}     (full sum)
//!            = (1/a) Σ_{n<a} e^{iπ(2(x₁−x₀)n − n²)/a}      (reduced sum)
//!            = a^{−1/2} e^{iπ(−1/4 + (x₀−x₁)²/a)}          (closed form)
//! ```
//!
//! for even integer a, integer x₁−x₀ and a | N. The reduction from N to a
//! terms is an exact multiset identity on the term phases; the closed form
//! comes out of Gauss-sum reciprocity with (c, d, g) = (−1, 2(x₁−x₀), a).
//! The `conjugate` variant flips the kernel sign (time-dependent-Hamiltonian
//! reading) and produces the complex conjugate throughout.

use num_complex::Complex64 as C64;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{gauss_sum_reciprocity, GaussSumParams};
use crate::model::{
    apply_diagonal, basis_vector, change_basis, Basis, ExactDiagonal, FiniteModel,
};
use crate::par;
use crate::phase::RationalPhase;

/// Kernel sign convention.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// K^t v(x) = e^{−iπx²/a} v(x); matches the continuum kernel
    /// (m/2πiℏt)^{1/2} e^{imΔ²/2ℏt}.
    Standard,
    /// K^t v(x) = e^{+iπx²/a} v(x); complex conjugate of the standard
    /// result.
    Conjugate,
}

/// Evaluation route for a propagator.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FullSum,
    ReducedSum,
    ClosedForm,
    Matrix,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::FullSum => "full_sum",
            Method::ReducedSum => "reduced_sum",
            Method::ClosedForm => "closed_form",
            Method::Matrix => "matrix",
        }
    }
}

/// A computed propagator amplitude together with the reference value it is
/// checked against.
#[derive(Copy, Clone, Debug)]
pub struct PropagatorResult {
    pub value: C64,
    pub method: Method,
    pub reference: C64,
    pub abs_dev: f64,
    pub rel_dev: f64,
}

impl PropagatorResult {
    pub fn new(value: C64, method: Method, reference: C64) -> Self {
        let abs_dev = (value - reference).norm();
        let rel_dev = if reference.norm() > 0.0 {
            abs_dev / reference.norm()
        } else {
            abs_dev
        };
        PropagatorResult {
            value,
            method,
            reference,
            abs_dev,
            rel_dev,
        }
    }
}

/// Validated parameters of a free-particle propagator evaluation.
#[derive(Clone, Debug)]
pub struct FreeParams {
    a: i64,
    x0: Rational64,
    x1: Rational64,
    n: usize,
    variant: Variant,
}

/// Endpoint checks shared with the oscillator: x ∈ [0, a), x₁−x₀ integer,
/// and N·x/a integer so both endpoints are grid points.
pub(crate) fn validate_endpoints(
    a: i64,
    n: usize,
    x0: Rational64,
    x1: Rational64,
) -> Result<(usize, usize, i64)> {
    let a_rat = Rational64::from_integer(a);
    for (name, x) in [("x0", x0), ("x1", x1)] {
        if x < Rational64::zero() || x >= a_rat {
            return Err(Error::Domain(format!(
                "{name} = {x} must lie in [0, a) with a = {a}"
            )));
        }
    }
    let diff = x1 - x0;
    if !diff.is_integer() {
        return Err(Error::Domain(format!(
            "x1 − x0 must be an integer (unit-of-length assumption), got {diff}"
        )));
    }
    if n % (a as usize) != 0 {
        return Err(Error::Divisibility(format!(
            "a must divide N: a = {a}, N = {n}, minimal admissible N = {}",
            minimal_admissible_n(a, x0, x1)
        )));
    }
    let n_rat = Rational64::from_integer(n as i64);
    let mut idx = [0usize; 2];
    for (slot, (name, x)) in idx.iter_mut().zip([("x0", x0), ("x1", x1)]) {
        let scaled = x * n_rat / a_rat;
        if !scaled.is_integer() {
            return Err(Error::Divisibility(format!(
                "N·{name}/a must be an integer: got {scaled} (N = {n}, a = {a}), \
                 minimal admissible N = {}",
                minimal_admissible_n(a, x0, x1)
            )));
        }
        *slot = scaled.to_integer() as usize;
    }
    Ok((idx[0], idx[1], diff.to_integer()))
}

/// Smallest N satisfying a | N with N·x0/a and N·x1/a integers.
pub fn minimal_admissible_n(a: i64, x0: Rational64, x1: Rational64) -> i64 {
    use num_integer::Integer;
    let mut n = a;
    for x in [x0, x1] {
        // N·p/(q·a) integer with gcd(p, q) = 1 requires (q·a)/gcd(p, q·a) | N.
        let p = *x.numer();
        let qa = *x.denom() * a;
        let need = qa / p.gcd(&qa);
        n = n.lcm(&need);
    }
    n
}

impl FreeParams {
    /// Checks every model assumption: a even positive (a = 0 would be the
    /// t = 0 point-space), endpoints in [0, a) differing by an integer and
    /// landing on the N-point grid, a | N.
    pub fn new(a: i64, x0: Rational64, x1: Rational64, n: usize, variant: Variant) -> Result<Self> {
        if a == 0 {
            return Err(Error::SingularTime(
                "a = 0 (t = 0): the space degenerates to a single point".into(),
            ));
        }
        if a < 0 {
            return Err(Error::Domain(format!("a must be positive, got {a}")));
        }
        if a % 2 != 0 {
            return Err(Error::Domain(format!("a must be even, got {a}")));
        }
        validate_endpoints(a, n, x0, x1)?;
        Ok(FreeParams {
            a,
            x0,
            x1,
            n,
            variant,
        })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn x0(&self) -> Rational64 {
        self.x0
    }

    pub fn x1(&self) -> Rational64 {
        self.x1
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// x₁ − x₀ as an exact integer.
    pub fn delta(&self) -> i64 {
        (self.x1 - self.x0).to_integer()
    }

    fn quad_sign(&self) -> i64 {
        match self.variant {
            Variant::Standard => -1,
            Variant::Conjugate => 1,
        }
    }

    /// The dimensionless H_N the matrix route evolves in.
    pub fn model(&self) -> Result<FiniteModel> {
        FiniteModel::dimensionless(self.n, Rational64::from_integer(self.a))
    }

    fn grid_index(&self, x: Rational64) -> usize {
        (x * Rational64::from_integer(self.n as i64) / Rational64::from_integer(self.a))
            .to_integer() as usize
    }
}

/// The evolution operator as an exact diagonal in the v basis:
/// phase at x is (∓x²/a)·π (− for standard, + for conjugate).
pub fn free_kernel(model: &FiniteModel, params: &FreeParams) -> Result<ExactDiagonal> {
    if model.dim() != params.n {
        return Err(Error::DimensionMismatch(format!(
            "model dimension {} vs params N = {}",
            model.dim(),
            params.n
        )));
    }
    let sign = params.quad_sign() as i128;
    let phases = (0..params.n)
        .map(|x| {
            let x = x as i128;
            RationalPhase::from_i128(sign * x * x, params.a as i128)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExactDiagonal::new(Basis::V, phases))
}

/// The exact term phases (±n² + 2Δn)/a of the propagator sum, for `len`
/// terms (N for the full sum, a for the reduced one).
pub fn propagator_term_phases(params: &FreeParams, len: usize) -> Result<Vec<RationalPhase>> {
    let d = 2 * params.delta() as i128;
    let sign = params.quad_sign() as i128;
    let a = params.a as i128;
    (0..len)
        .map(|n| {
            let n = n as i128;
            RationalPhase::from_i128(sign * n * n + d * n, a)
        })
        .collect()
}

fn mean_of_phase_terms(params: &FreeParams, len: usize) -> Result<C64> {
    let d = 2 * params.delta() as i128;
    let sign = params.quad_sign() as i128;
    let a = params.a as i128;
    let terms = par::map_indexed(len, move |n| {
        let n = n as i128;
        RationalPhase::from_i128(sign * n * n + d * n, a).map(|p| p.to_complex())
    });
    let sum: C64 = terms.into_iter().sum::<Result<C64>>()?;
    Ok(sum / len as f64)
}

/// The continuum value a^{−1/2} e^{iπ(∓1/4 ± Δ²/a)} used as the reference
/// in every [`PropagatorResult`]; equals the physicists' kernel under
/// a = ht/m.
pub fn continuum_reference(params: &FreeParams) -> Result<C64> {
    let d2 = params.delta() as i128 * params.delta() as i128;
    let a = params.a as i128;
    let phase = RationalPhase::from_i128(4 * d2 - a, 4 * a)?;
    let phase = match params.variant {
        Variant::Standard => phase,
        Variant::Conjugate => phase.neg()?,
    };
    Ok(phase.to_complex() / (params.a as f64).sqrt())
}

fn closed_form(params: &FreeParams) -> Result<C64> {
    // §-free restatement: the reduced sum is a quadratic Gauss sum; apply
    // reciprocity with (c, d, g) = (−1, 2(x1−x0), a) for the standard kernel
    // and (1, 2(x0−x1), a) for the conjugate. The e^{∓iπ/4} prefactor falls
    // out of the identity.
    let p = match params.variant {
        Variant::Standard => GaussSumParams::new(-1, 2 * params.delta(), params.a),
        Variant::Conjugate => GaussSumParams::new(1, -2 * params.delta(), params.a),
    };
    Ok(gauss_sum_reciprocity(&p)? / params.a as f64)
}

fn matrix_contraction(params: &FreeParams) -> Result<C64> {
    let model = params.model()?;
    let kernel = free_kernel(&model, params)?;
    let start = basis_vector(&model, Basis::U, params.grid_index(params.x0))?;
    let evolved = apply_diagonal(&model, &kernel, &start);
    let back = change_basis(&model, &evolved, Basis::U);
    Ok(back.amplitudes()[params.grid_index(params.x1)])
}

/// Evaluate ⟨x₁|K^t|x₀⟩ by the requested route.
pub fn free_propagator(params: &FreeParams, method: Method) -> Result<PropagatorResult> {
    let reference = continuum_reference(params)?;
    let value = match method {
        Method::FullSum => mean_of_phase_terms(params, params.n)?,
        Method::ReducedSum => mean_of_phase_terms(params, params.a as usize)?,
        Method::ClosedForm => closed_form(params)?,
        Method::Matrix => matrix_contraction(params)?,
    };
    Ok(PropagatorResult::new(value, method, reference))
}

/// The physicists' continuum kernel (m/2πiℏt)^{1/2} e^{im(x₀−x₁)²/2ℏt}
/// evaluated directly from physical parameters (conjugate variant:
/// (m/−2πiℏt)^{1/2} e^{−im(x₀−x₁)²/2ℏt}).
pub fn physics_reference(
    m: f64,
    t: f64,
    hbar: f64,
    x0: f64,
    x1: f64,
    variant: Variant,
) -> Result<C64> {
    if t == 0.0 {
        return Err(Error::SingularTime(
            "t = 0: the continuum kernel is singular".into(),
        ));
    }
    if m <= 0.0 || hbar <= 0.0 {
        return Err(Error::Domain("mass and ℏ must be positive".into()));
    }
    let delta2 = (x0 - x1) * (x0 - x1);
    let sign = match variant {
        Variant::Standard => 1.0,
        Variant::Conjugate => -1.0,
    };
    let prefactor = (C64::new(m, 0.0)
        / C64::new(0.0, sign * 2.0 * std::f64::consts::PI * hbar * t))
    .sqrt();
    let exponent = C64::from_polar(1.0, sign * m * delta2 / (2.0 * hbar * t));
    Ok(prefactor * exponent)
}

/// Dimensionless size of the space at time `t`: a = h·t/(mass·unit²) with
/// `unit` the chosen length unit in meters. Returns (a, length in meters).
pub fn space_size(mass_kg: f64, t_s: f64, h: f64, unit_m: f64) -> Result<(f64, f64)> {
    if mass_kg <= 0.0 {
        return Err(Error::Domain(format!(
            "mass must be positive, got {mass_kg}"
        )));
    }
    if t_s < 0.0 {
        return Err(Error::Domain(format!("time must be ≥ 0, got {t_s}")));
    }
    if h <= 0.0 || unit_m <= 0.0 {
        return Err(Error::Domain(
            "Planck constant and length unit must be positive".into(),
        ));
    }
    let a = h * t_s / (mass_kg * unit_m * unit_m);
    Ok((a, a * unit_m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{ELECTRON_MASS_KG, PLANCK_H};
    use approx::assert_abs_diff_eq;
    use std::collections::HashMap;

    fn rat(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    fn params(a: i64, x0: i64, x1: i64, n: usize, variant: Variant) -> FreeParams {
        FreeParams::new(a, rat(x0), rat(x1), n, variant).unwrap()
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            FreeParams::new(0, rat(0), rat(0), 4, Variant::Standard),
            Err(Error::SingularTime(_))
        ));
        let err = FreeParams::new(3, rat(0), rat(1), 6, Variant::Standard).unwrap_err();
        assert!(err.to_string().contains("even"), "{err}");
        let err = FreeParams::new(2, rat(0), Rational64::new(1, 2), 4, Variant::Standard)
            .unwrap_err();
        assert!(err.to_string().contains("integer"), "{err}");
        let err = FreeParams::new(2, rat(0), rat(1), 5, Variant::Standard).unwrap_err();
        assert!(err.to_string().contains("divide"), "{err}");
    }

    #[test]
    fn minimal_n_reported() {
        // x0 = 1/2 needs N·(1/2)/2 integer, i.e. 4 | N.
        let err = FreeParams::new(
            2,
            Rational64::new(1, 2),
            Rational64::new(3, 2),
            2,
            Variant::Standard,
        )
        .unwrap_err();
        assert!(err.to_string().contains("minimal admissible N = 4"), "{err}");
        assert_eq!(minimal_admissible_n(2, Rational64::new(1, 2), rat(1)), 4);
    }

    #[test]
    fn kernel_phases() {
        let p = params(2, 0, 0, 4, Variant::Standard);
        let model = p.model().unwrap();
        let k = free_kernel(&model, &p).unwrap();
        assert_eq!(k.phase_at(1), RationalPhase::new(3, 2).unwrap());
        assert_eq!(k.phase_at(2), RationalPhase::ZERO);
        assert_eq!(k.phase_at(0), RationalPhase::ZERO);
    }

    #[test]
    fn coincident_endpoints() {
        let p = params(2, 0, 0, 4, Variant::Standard);
        for method in [
            Method::FullSum,
            Method::ReducedSum,
            Method::ClosedForm,
            Method::Matrix,
        ] {
            let r = free_propagator(&p, method).unwrap();
            assert_abs_diff_eq!(r.value.re, 0.5, epsilon = 1e-12);
            assert_abs_diff_eq!(r.value.im, -0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn unit_displacement() {
        let p = params(2, 0, 1, 4, Variant::Standard);
        for method in [
            Method::FullSum,
            Method::ReducedSum,
            Method::ClosedForm,
            Method::Matrix,
        ] {
            let r = free_propagator(&p, method).unwrap();
            assert_abs_diff_eq!(r.value.re, 0.5, epsilon = 1e-12);
            assert_abs_diff_eq!(r.value.im, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn conjugate_variant_conjugates() {
        let std = free_propagator(&params(2, 0, 1, 4, Variant::Standard), Method::ClosedForm)
            .unwrap()
            .value;
        let conj = free_propagator(&params(2, 0, 1, 4, Variant::Conjugate), Method::ClosedForm)
            .unwrap()
            .value;
        assert_abs_diff_eq!(conj.re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(conj.im, -0.5, epsilon = 1e-12);
        assert!((conj - std.conj()).norm() < 1e-12);
    }

    #[test]
    fn reduction_is_an_exact_multiset_identity() {
        for (a, delta, n) in [(2i64, 1i64, 8usize), (6, 4, 24), (10, 7, 640)] {
            let p = params(a, 0, delta, n, Variant::Standard);
            let full = propagator_term_phases(&p, n).unwrap();
            let reduced = propagator_term_phases(&p, a as usize).unwrap();
            let mut counts: HashMap<RationalPhase, i64> = HashMap::new();
            for ph in &full {
                *counts.entry(*ph).or_default() += 1;
            }
            let copies = (n as i64) / a;
            for ph in &reduced {
                *counts.entry(*ph).or_default() -= copies;
            }
            assert!(counts.values().all(|&c| c == 0), "a={a} Δ={delta} N={n}");
        }
    }

    #[test]
    fn modulus_law() {
        for a in [2i64, 4, 10, 20] {
            for delta in 0..a {
                let p = params(a, 0, delta, a as usize, Variant::Standard);
                let r = free_propagator(&p, Method::ClosedForm).unwrap();
                assert_abs_diff_eq!(
                    r.value.norm(),
                    1.0 / (a as f64).sqrt(),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn translation_covariance() {
        // The propagator depends on the endpoints only through (x1 − x0) mod a.
        let a = 6;
        let n = 24;
        let base = free_propagator(&params(a, 0, 2, n, Variant::Standard), Method::ReducedSum)
            .unwrap()
            .value;
        for shift in 1..4i64 {
            let (x0, x1) = (shift, (2 + shift) % a);
            let p = params(a, x0, x1, n, Variant::Standard);
            let v = free_propagator(&p, Method::ReducedSum).unwrap().value;
            assert!((v - base).norm() < 1e-12, "shift={shift}");
        }
    }

    #[test]
    fn physics_reference_matches_closed_form() {
        // Unit system with ℏ = 1, a = ht/m an even integer.
        let hbar = 1.0;
        let t = 1.3;
        for a in [2i64, 8, 20] {
            let m = 2.0 * std::f64::consts::PI * t / a as f64;
            for delta in [0i64, 1, a - 1] {
                let p = params(a, 0, delta, a as usize, Variant::Standard);
                let core = free_propagator(&p, Method::ClosedForm).unwrap().value;
                let cont =
                    physics_reference(m, t, hbar, 0.0, delta as f64, Variant::Standard).unwrap();
                assert!((core - cont).norm() < 1e-12, "a={a} Δ={delta}");
                let conj =
                    physics_reference(m, t, hbar, 0.0, delta as f64, Variant::Conjugate).unwrap();
                assert!((conj - cont.conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn physics_reference_modulus() {
        let v = physics_reference(1.0, 2.0, 1.0, 0.3, 4.3, Variant::Standard).unwrap();
        let a = 2.0 * std::f64::consts::PI * 2.0; // ht/m with ℏ = 1
        assert_abs_diff_eq!(v.norm(), 1.0 / a.sqrt(), epsilon = 1e-14);
        assert!(physics_reference(1.0, 0.0, 1.0, 0.0, 0.0, Variant::Standard).is_err());
    }

    #[test]
    fn space_size_reproduces_known_figures() {
        // Electron, 1 s, centimetre unit.
        let (a, len) = space_size(ELECTRON_MASS_KG, 1.0, PLANCK_H, 1e-2).unwrap();
        assert!((a - 7.27).abs() / 7.27 < 0.01, "a = {a}");
        assert!((len - 0.0727).abs() / 0.0727 < 0.01);
        // One hour.
        let (_, len) = space_size(ELECTRON_MASS_KG, 3600.0, PLANCK_H, 1e-2).unwrap();
        assert!((len - 262.0).abs() / 262.0 < 0.01, "len = {len}");
        // Millimetre unit.
        let (a, len) = space_size(ELECTRON_MASS_KG, 1.0, PLANCK_H, 1e-3).unwrap();
        assert!((a - 727.0).abs() / 727.0 < 0.01, "a = {a}");
        assert!((len - 0.73).abs() / 0.73 < 0.01, "len = {len}");
        // t = 0 collapses the space to a point.
        let (a, len) = space_size(ELECTRON_MASS_KG, 0.0, PLANCK_H, 1e-2).unwrap();
        assert_eq!((a, len), (0.0, 0.0));
        assert!(space_size(-1.0, 1.0, PLANCK_H, 1e-2).is_err());
    }
}
