//! Harmonic-oscillator evolution via the symmetric three-factor splitting
//! and the propagator checked against the Mehler kernel.
//!
//! For operators with [A, B] = C, [A, C] = 2γA, [B, C] = −2γB the splitting
//!
//! ```text
//! e^{A+B} = e^{αA} e^{βB} e^{αA},   α = tan(√γ/2)/√γ,  β = sin(√γ)/√γ
//! ```
//!
//! applied to the oscillator Hamiltonian H = P²/2m + mω²Q²/2 with γ = (ωt)²
//! gives K^t = e^{iαQ²} e^{iβP²} e^{iαQ²} with α = −mω·tan(ωt/2)/2ℏ and
//! β = −sin(ωt)/2ωmℏ. Under the scaling a = h·sin(ωt)/(mω) the middle
//! factor's v-basis phases are exactly −πk²/a (β/a = −π/h²), so the
//! propagator reduces to the same quadratic Gauss sum as the free particle,
//! with the α-dependent prefactor e^{iα(x₀²+x₁²)} outside.

use num_complex::Complex64 as C64;
use num_rational::Rational64;
use std::f64::consts::PI;

use crate::embed::{exp_p2_exact, exp_q2_float, ratio_to_f64};
use crate::error::{Error, Result};
use crate::free::{validate_endpoints, Method, PropagatorResult};
use crate::gauss::{gauss_sum_reciprocity, GaussSumParams};
use crate::model::{apply_diagonal, basis_vector, Basis, FiniteModel};
use crate::par;
use crate::phase::RationalPhase;

/// Below this magnitude, sin(ωt) and cos(ωt/2) count as vanished.
const TRIG_FLOOR: f64 = 1e-12;

/// Splitting coefficients for e^{A+B} = e^{αA} e^{βB} e^{αA} under the
/// commutator algebra [A,B] = C, [A,C] = 2γA, [B,C] = −2γB.
///
/// As γ → 0⁺ the coefficients tend to the symmetric Strang limit (1/2, 1).
/// Fails where tan(√γ/2) is singular (√γ an odd multiple of π).
pub fn factor_coefficients_generic(gamma: f64) -> Result<(f64, f64)> {
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!(
            "splitting parameter γ must be positive, got {gamma}"
        )));
    }
    let x = gamma.sqrt();
    if (x / 2.0).cos().abs() < 1e-9 {
        return Err(Error::Singularity(format!(
            "tan(√γ/2) singular: √γ = {x} is an odd multiple of π"
        )));
    }
    Ok(((x / 2.0).tan() / x, x.sin() / x))
}

/// Physical oscillator parameters with the factorization-singular times
/// rejected at construction.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct OscParams {
    m: f64,
    omega: f64,
    t: f64,
    hbar: f64,
}

impl OscParams {
    pub fn new(m: f64, omega: f64, t: f64, hbar: f64) -> Result<Self> {
        if m <= 0.0 || omega <= 0.0 || hbar <= 0.0 {
            return Err(Error::Domain(
                "mass, angular frequency and ℏ must be positive".into(),
            ));
        }
        if !t.is_finite() {
            return Err(Error::Domain("time must be finite".into()));
        }
        let wt = omega * t;
        if wt.sin().abs() < TRIG_FLOOR {
            return Err(Error::Singularity(format!(
                "sin(ωt) = 0: propagator singular (ωt = {wt})"
            )));
        }
        if (wt / 2.0).cos().abs() < TRIG_FLOOR {
            return Err(Error::Singularity(format!(
                "cos(ωt/2) = 0: factorization singular (ωt = {wt})"
            )));
        }
        Ok(OscParams { m, omega, t, hbar })
    }

    /// Unit-mode parametrization: ℏ = ω = 1, t = ωt, and the mass chosen so
    /// the scaling a = h·sin(ωt)/(mω) comes out as the given even integer.
    pub fn unit_mode(omega_t: f64, a: i64) -> Result<Self> {
        if a <= 0 || a % 2 != 0 {
            return Err(Error::Domain(format!(
                "scaling a must be an even positive integer, got {a}"
            )));
        }
        let s = omega_t.sin();
        if s <= TRIG_FLOOR {
            return Err(Error::Domain(format!(
                "unit-mode parameters need sin(ωt) > 0, got sin({omega_t}) = {s}"
            )));
        }
        let m = 2.0 * PI * s / a as f64;
        OscParams::new(m, 1.0, omega_t, 1.0)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// γ = (ωt)².
    pub fn gamma(&self) -> f64 {
        (self.omega * self.t).powi(2)
    }

    /// α = −mω·tan(ωt/2)/2ℏ.
    pub fn alpha(&self) -> f64 {
        -self.m * self.omega * (self.omega * self.t / 2.0).tan() / (2.0 * self.hbar)
    }

    /// β = −sin(ωt)/2ωmℏ.
    pub fn beta(&self) -> f64 {
        -(self.omega * self.t).sin() / (2.0 * self.omega * self.m * self.hbar)
    }

    /// The propagator scaling a = h·sin(ωt)/(mω).
    pub fn scale_a(&self) -> f64 {
        2.0 * PI * self.hbar * (self.omega * self.t).sin() / (self.m * self.omega)
    }
}

/// Oscillator parameters snapped onto a model grid: the scaling a is an
/// even positive integer dividing N.
#[derive(Copy, Clone, Debug)]
pub struct OscGrid {
    params: OscParams,
    a: i64,
    n: usize,
}

impl OscGrid {
    pub fn new(params: OscParams, n: usize) -> Result<Self> {
        let af = params.scale_a();
        if af <= 0.0 {
            return Err(Error::Domain(format!(
                "scaling a = h·sin(ωt)/(mω) must be positive, got {af}"
            )));
        }
        let a = af.round() as i64;
        if a == 0 || (af - a as f64).abs() > 1e-9 * (a.max(1)) as f64 {
            return Err(Error::Domain(format!(
                "scaling a = {af} is not an integer; adjust m, ω or t (nearest integer {a})"
            )));
        }
        if a % 2 != 0 {
            return Err(Error::Domain(format!(
                "scaling a must be even for the Gauss-sum reduction, got {a}"
            )));
        }
        if n % (a as usize) != 0 {
            return Err(Error::Divisibility(format!(
                "a must divide N: a = {a}, N = {n}"
            )));
        }
        // β/a = −π·h⁻² is forced by the scaling; breaching it means the
        // derived quantities disagree internally.
        let h = 2.0 * PI * params.hbar();
        let want = -PI / (h * h);
        let got = params.beta() / af;
        if (got - want).abs() > 1e-12 * want.abs() {
            return Err(Error::Internal(format!(
                "β/a = {got} deviates from −π/h² = {want}"
            )));
        }
        Ok(OscGrid { params, a, n })
    }

    pub fn params(&self) -> &OscParams {
        &self.params
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn model(&self) -> Result<FiniteModel> {
        FiniteModel::dimensionless(self.n, Rational64::from_integer(self.a))
    }
}

fn prefactor(params: &OscParams, x0: f64, x1: f64) -> C64 {
    C64::from_polar(1.0, params.alpha() * (x0 * x0 + x1 * x1))
}

fn reduced_sum(grid: &OscGrid, delta: i64, len: usize) -> Result<C64> {
    let a = grid.a as i128;
    let d = 2 * delta as i128;
    let terms = par::map_indexed(len, move |y| {
        let y = y as i128;
        RationalPhase::from_i128(-(y * y) + d * y, a).map(|p| p.to_complex())
    });
    let sum: C64 = terms.into_iter().sum::<Result<C64>>()?;
    Ok(sum / len as f64)
}

fn closed_form(grid: &OscGrid, delta: i64) -> Result<C64> {
    let p = GaussSumParams::new(-1, 2 * delta, grid.a);
    Ok(gauss_sum_reciprocity(&p)? / grid.a as f64)
}

fn matrix_contraction(grid: &OscGrid, idx0: usize, idx1: usize) -> Result<C64> {
    let model = grid.model()?;
    let a_diag = exp_q2_float(&model, grid.params.alpha());
    // β·b²/π = −1/a exactly under the scaling; the middle factor is the
    // same exact diagonal as the free kernel.
    let b_diag = exp_p2_exact(&model, Rational64::new(-1, grid.a))?;
    let start = basis_vector(&model, Basis::U, idx0)?;
    let step1 = apply_diagonal(&model, &a_diag, &start);
    let step2 = apply_diagonal(&model, &b_diag, &step1);
    let step3 = apply_diagonal(&model, &a_diag, &step2);
    debug_assert_eq!(step3.basis(), Basis::U);
    Ok(step3.amplitudes()[idx1])
}

/// ⟨x₁|K^t_N|x₀⟩ with K^t_N the three-factor product, by the requested
/// route. The reference value is the Mehler kernel.
pub fn osc_propagator(
    grid: &OscGrid,
    x0: Rational64,
    x1: Rational64,
    method: Method,
) -> Result<PropagatorResult> {
    let (idx0, idx1, delta) = validate_endpoints(grid.a, grid.n, x0, x1)?;
    let x0f = ratio_to_f64(x0);
    let x1f = ratio_to_f64(x1);
    let reference = mehler_reference(&grid.params, x0f, x1f)?;
    let pre = prefactor(&grid.params, x0f, x1f);
    let value = match method {
        Method::FullSum => pre * reduced_sum(grid, delta, grid.n)?,
        Method::ReducedSum => pre * reduced_sum(grid, delta, grid.a as usize)?,
        Method::ClosedForm => pre * closed_form(grid, delta)?,
        Method::Matrix => matrix_contraction(grid, idx0, idx1)?,
    };
    Ok(PropagatorResult::new(value, method, reference))
}

/// The Mehler kernel
/// √(mω/2πiℏ·sin ωt) · exp(i·mω(cos ωt·(x₀²+x₁²) − 2x₀x₁)/2ℏ·sin ωt),
/// evaluated directly from physical parameters (principal square root).
pub fn mehler_reference(params: &OscParams, x0: f64, x1: f64) -> Result<C64> {
    let wt = params.omega * params.t;
    let s = wt.sin();
    if s.abs() < TRIG_FLOOR {
        return Err(Error::Singularity(format!(
            "sin(ωt) = 0: Mehler kernel singular (ωt = {wt})"
        )));
    }
    let mw = params.m * params.omega;
    let root = (C64::new(mw, 0.0) / C64::new(0.0, 2.0 * PI * params.hbar * s)).sqrt();
    let angle = mw * (wt.cos() * (x0 * x0 + x1 * x1) - 2.0 * x0 * x1) / (2.0 * params.hbar * s);
    Ok(root * C64::from_polar(1.0, angle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::{physics_reference, Variant};
    use crate::model::StateVector;
    use approx::assert_abs_diff_eq;

    fn rat(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn generic_coefficients() {
        // Strang limit as γ → 0⁺.
        let (a, b) = factor_coefficients_generic(1e-12).unwrap();
        assert_abs_diff_eq!(a, 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(b, 1.0, epsilon = 1e-9);
        // γ = (π/2)².
        let (a, b) = factor_coefficients_generic((PI / 2.0).powi(2)).unwrap();
        assert_abs_diff_eq!(a, 2.0 / PI, epsilon = 1e-13);
        assert_abs_diff_eq!(b, 2.0 / PI, epsilon = 1e-13);
        // γ = π² hits the tangent pole.
        assert!(matches!(
            factor_coefficients_generic(PI * PI),
            Err(Error::Singularity(_))
        ));
        assert!(factor_coefficients_generic(-1.0).is_err());
    }

    #[test]
    fn oscillator_coefficients() {
        let p = OscParams::new(1.0, 1.0, PI / 2.0, 1.0).unwrap();
        assert_abs_diff_eq!(p.alpha(), -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(p.beta(), -0.5, epsilon = 1e-14);
        // Free-particle limit ωt → 0: α → 0 like −mω²t/4ℏ, β → −t/2mℏ.
        let p = OscParams::new(1.0, 1.0, 1e-4, 1.0).unwrap();
        assert_abs_diff_eq!(p.alpha(), -1e-4 / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.beta(), -1e-4 / 2.0, epsilon = 1e-12);
        // ωt = π is singular.
        assert!(matches!(
            OscParams::new(1.0, 1.0, PI, 1.0),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn coefficients_come_from_the_generic_splitting() {
        // α = −(tmω²/2ℏ)·α_g(γ), β = −(t/2mℏ)·β_g(γ) with γ = (ωt)².
        let p = OscParams::new(1.7, 0.9, 1.1, 1.3).unwrap();
        let (ag, bg) = factor_coefficients_generic(p.gamma()).unwrap();
        let alpha = -(p.t() * p.m() * p.omega() * p.omega() / (2.0 * p.hbar())) * ag;
        let beta = -(p.t() / (2.0 * p.m() * p.hbar())) * bg;
        assert_abs_diff_eq!(alpha, p.alpha(), epsilon = 1e-13);
        assert_abs_diff_eq!(beta, p.beta(), epsilon = 1e-13);
    }

    #[test]
    fn beta_over_a_identity() {
        for (wt, a) in [(PI / 6.0, 2i64), (PI / 4.0, 6), (PI / 2.0, 20)] {
            let p = OscParams::unit_mode(wt, a).unwrap();
            let h = 2.0 * PI * p.hbar();
            assert_abs_diff_eq!(
                p.beta() / p.scale_a(),
                -PI / (h * h),
                epsilon = 1e-14
            );
            assert_abs_diff_eq!(p.scale_a(), a as f64, epsilon = 1e-9);
        }
    }

    #[test]
    fn grid_validation() {
        let p = OscParams::unit_mode(PI / 2.0, 4).unwrap();
        assert!(OscGrid::new(p, 16).is_ok());
        assert!(matches!(
            OscGrid::new(p, 18),
            Err(Error::Divisibility(_))
        ));
        // Generic parameters whose a is irrational are rejected.
        let p = OscParams::new(1.0, 1.0, PI / 2.0, 1.0).unwrap();
        assert!(OscGrid::new(p, 16).is_err());
    }

    #[test]
    fn mehler_at_origin() {
        let p = OscParams::new(1.0, 1.0, PI / 2.0, 1.0).unwrap();
        let v = mehler_reference(&p, 0.0, 0.0).unwrap();
        let want_mod = (1.0 / (2.0 * PI)).sqrt();
        assert_abs_diff_eq!(v.norm(), want_mod, epsilon = 1e-14);
        assert_abs_diff_eq!(v.arg(), -PI / 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.re, 0.39894 * 0.70711, epsilon = 1e-5);
        assert_abs_diff_eq!(v.im, -0.39894 * 0.70711, epsilon = 1e-5);
    }

    #[test]
    fn mehler_modulus_is_position_independent() {
        let p = OscParams::new(1.3, 0.7, 0.9, 1.1).unwrap();
        let m0 = mehler_reference(&p, 0.0, 0.0).unwrap().norm();
        for (x0, x1) in [(0.5, 1.5), (2.0, -1.0), (3.3, 3.3)] {
            let m = mehler_reference(&p, x0, x1).unwrap().norm();
            assert_abs_diff_eq!(m, m0, epsilon = 1e-13);
        }
    }

    #[test]
    fn all_methods_agree_and_match_mehler() {
        for (wt, a) in [(PI / 6.0, 2i64), (PI / 4.0, 4), (PI / 2.0, 8)] {
            let params = OscParams::unit_mode(wt, a).unwrap();
            let grid = OscGrid::new(params, 4 * a as usize).unwrap();
            for delta in 0..a.min(4) {
                let x0 = rat(0);
                let x1 = rat(delta);
                let mut values = Vec::new();
                for method in [Method::Matrix, Method::ReducedSum, Method::ClosedForm] {
                    let r = osc_propagator(&grid, x0, x1, method).unwrap();
                    assert!(
                        r.abs_dev <= 1e-10,
                        "ωt={wt} a={a} Δ={delta} {}: dev from Mehler {}",
                        method.name(),
                        r.abs_dev
                    );
                    values.push(r.value);
                }
                for v in &values {
                    for w in &values {
                        assert!((v - w).norm() <= 1e-8 * w.norm());
                    }
                }
            }
        }
    }

    #[test]
    fn evolution_is_unitary() {
        use rand::prelude::*;
        let params = OscParams::unit_mode(PI / 4.0, 6).unwrap();
        let grid = OscGrid::new(params, 24).unwrap();
        let model = grid.model().unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let amps: Vec<C64> = (0..model.dim())
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let s = StateVector::new(Basis::U, amps);
        let a_diag = exp_q2_float(&model, grid.params().alpha());
        let b_diag = exp_p2_exact(&model, Rational64::new(-1, grid.a())).unwrap();
        let out = apply_diagonal(
            &model,
            &a_diag,
            &apply_diagonal(&model, &b_diag, &apply_diagonal(&model, &a_diag, &s)),
        );
        assert!((out.norm() - s.norm()).abs() <= 1e-11 * (model.dim() as f64).sqrt());
    }

    #[test]
    fn free_particle_limit() {
        // ωt → 0 with ht/m fixed: the Mehler kernel approaches the free
        // kernel; at ωt = 1e−3 the ratio is within 1e−4 of unity.
        let hbar = 1.0;
        let m = 1.0;
        let t = 0.8;
        let omega = 1e-3 / t;
        let p = OscParams::new(m, omega, t, hbar).unwrap();
        for (x0, x1) in [(0.0, 1.0), (0.4, 2.1)] {
            let osc = mehler_reference(&p, x0, x1).unwrap();
            let free = physics_reference(m, t, hbar, x0, x1, Variant::Standard).unwrap();
            let ratio = osc / free;
            assert!(
                (ratio - C64::new(1.0, 0.0)).norm() < 1e-4,
                "ratio = {ratio}"
            );
        }
    }

    // Splitting identity on matrices that genuinely satisfy the commutator
    // algebra: spin-(d−1)/2 triples E, F, H with A = sE, B = uF, su = −γ.
    mod factorization {
        use super::*;

        fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
            let mut c = vec![0.0; n * n];
            for i in 0..n {
                for k in 0..n {
                    let aik = a[i * n + k];
                    if aik == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        c[i * n + j] += aik * b[k * n + j];
                    }
                }
            }
            c
        }

        fn expm(m: &[f64], n: usize) -> Vec<f64> {
            // Scaling and squaring with a plain Taylor series; ample for the
            // sizes and norms used here.
            let norm: f64 = (0..n)
                .map(|i| (0..n).map(|j| m[i * n + j].abs()).sum::<f64>())
                .fold(0.0, f64::max);
            let squarings = norm.max(1.0).log2().ceil().max(0.0) as u32 + 2;
            let scale = (2.0f64).powi(-(squarings as i32));
            let scaled: Vec<f64> = m.iter().map(|x| x * scale).collect();
            let mut result = identity(n);
            let mut term = identity(n);
            for j in 1..=24 {
                term = matmul(&term, &scaled, n);
                for t in &mut term {
                    *t /= j as f64;
                }
                for (r, t) in result.iter_mut().zip(&term) {
                    *r += t;
                }
            }
            for _ in 0..squarings {
                result = matmul(&result, &result, n);
            }
            result
        }

        fn identity(n: usize) -> Vec<f64> {
            let mut id = vec![0.0; n * n];
            for i in 0..n {
                id[i * n + i] = 1.0;
            }
            id
        }

        fn ladder_pair(dim: usize) -> (Vec<f64>, Vec<f64>) {
            // E raising, F = Eᵀ lowering: [E, F] = H, [H, E] = 2E, [H, F] = −2F.
            let mut e = vec![0.0; dim * dim];
            for k in 1..dim {
                e[(k - 1) * dim + k] = (k as f64 * (dim - k) as f64).sqrt();
            }
            let mut f = vec![0.0; dim * dim];
            for k in 1..dim {
                f[k * dim + (k - 1)] = e[(k - 1) * dim + k];
            }
            (e, f)
        }

        fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
            a.iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        }

        fn check_splitting(dim: usize, gamma: f64, s: f64) {
            let (alpha, beta) = factor_coefficients_generic(gamma).unwrap();
            let u = -gamma / s;
            let (e, f) = ladder_pair(dim);
            let a: Vec<f64> = e.iter().map(|x| s * x).collect();
            let b: Vec<f64> = f.iter().map(|x| u * x).collect();
            let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let lhs = expm(&sum, dim);
            let ea: Vec<f64> = expm(&a.iter().map(|x| alpha * x).collect::<Vec<_>>(), dim);
            let eb: Vec<f64> = expm(&b.iter().map(|x| beta * x).collect::<Vec<_>>(), dim);
            let rhs = matmul(&matmul(&ea, &eb, dim), &ea, dim);
            let dev = max_abs_diff(&lhs, &rhs);
            assert!(dev <= 1e-6, "dim={dim} γ={gamma} s={s}: ‖lhs − rhs‖ = {dev}");
        }

        #[test]
        fn splitting_identity_on_exact_algebra() {
            // Balanced s = −u = √γ makes the generator antisymmetric and its
            // exponential orthogonal. The single factors e^{αA} are still
            // unipotent with entries ~e^{tan(√γ/2)·dim/2}, which the triple
            // product cancels back to O(1), so γ shrinks with the dimension
            // to keep the evaluation above the 1e−6 float noise floor.
            let grid: &[(usize, &[f64])] = &[
                (2, &[0.25, 1.0, 2.0]),
                (5, &[0.25, 1.0, 2.0]),
                (16, &[0.25, 1.0, 2.0]),
                (32, &[0.0625, 0.25]),
                (64, &[0.01, 0.04]),
            ];
            for &(dim, gammas) in grid {
                for &gamma in gammas {
                    check_splitting(dim, gamma, gamma.sqrt());
                }
            }
            // Unbalanced pairs at small dimension, where the squeeze factor
            // of the representation stays tame.
            for dim in [2usize, 5, 16] {
                for gamma in [0.25f64, 1.0, 2.0] {
                    check_splitting(dim, gamma, 0.8);
                }
            }
        }
    }
}
