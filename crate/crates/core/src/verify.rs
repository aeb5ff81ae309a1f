//! The full invariant suite: every property family with its tolerance
//! pinned as a constant.
//!
//! Each family runs a grid of checks and reports the worst deviation seen.
//! The acceptance test target runs these same families and asserts on the
//! outcome; the `verify` command exposes them at the command line.

use num_complex::Complex64 as C64;
use num_rational::Rational64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;

use crate::constants::{ELECTRON_MASS_KG, PLANCK_H};
use crate::embed::{embed, embedded_norm_sq, SampledFunction};
use crate::error::Result;
use crate::free::{
    free_propagator, physics_reference, propagator_term_phases, space_size, FreeParams, Method,
    Variant,
};
use crate::gauss::{gauss_sum_direct, gauss_sum_reciprocity, GaussSumParams};
use crate::model::{
    basis_vector, change_basis, commutator_phase, FiniteModel, Basis, UTime, VTime,
};
use crate::osc::{mehler_reference, osc_propagator, OscGrid, OscParams};
use crate::par;
use crate::phase::RationalPhase;
use crate::sweep::{run_sweep, Quantity, RationalParam, SweepSpec};
use crate::weyl::{violation_report, weyl_commutator, WeylGrid};

/// Relative tolerance between the summation routes and the closed form of
/// the free propagator.
pub const FREE_METHOD_REL_TOL: f64 = 1e-9;
/// Absolute tolerance between the closed form and the continuum kernel.
pub const CONTINUUM_ABS_TOL: f64 = 1e-12;
/// Gauss reciprocity vs direct summation: |dev| ≤ this × |g|.
pub const GAUSS_ABS_TOL_PER_G: f64 = 1e-10;
/// Relative tolerance between the oscillator evaluation routes.
pub const OSC_METHOD_REL_TOL: f64 = 1e-8;
/// Absolute tolerance between the oscillator closed form and the Mehler
/// kernel.
pub const OSC_MEHLER_ABS_TOL: f64 = 1e-10;
/// Riemann norm of f(x) = x on [0, 1] must be within 2/N of 1/3.
pub const RIEMANN_ABS_TOL_TIMES_N: f64 = 2.0;
/// Pointwise tolerance on the Weyl commutator phases.
pub const WEYL_ABS_TOL: f64 = 1e-12;
/// Relative tolerance on the reproduced space-size figures.
pub const SPACE_SIZE_REL_TOL: f64 = 0.01;

/// Outcome of one property family.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Number of individual checks run.
    pub checks: usize,
    /// Worst deviation observed, in the family's own metric.
    pub max_dev: f64,
    pub detail: String,
}

impl FamilyOutcome {
    fn new(name: &'static str, passed: bool, checks: usize, max_dev: f64, detail: String) -> Self {
        FamilyOutcome {
            name,
            passed,
            checks,
            max_dev,
            detail,
        }
    }

    fn failed(name: &'static str, err: &crate::Error) -> Self {
        FamilyOutcome::new(name, false, 0, f64::INFINITY, format!("error: {err}"))
    }
}

fn run_family(
    name: &'static str,
    body: impl FnOnce() -> Result<(bool, usize, f64, String)>,
) -> FamilyOutcome {
    match body() {
        Ok((passed, checks, max_dev, detail)) => {
            FamilyOutcome::new(name, passed, checks, max_dev, detail)
        }
        Err(e) => FamilyOutcome::failed(name, &e),
    }
}

/// Criterion grid: every even a in the set, every integer Δ in [0, a),
/// N ∈ {a, 4a, 64a}. Full sum must equal the reduced sum at the exact phase
/// level and both must match the closed form within [`FREE_METHOD_REL_TOL`].
pub fn free_exact_agreement() -> FamilyOutcome {
    run_family("free-propagator-exact-agreement", || {
        let grid: Vec<(i64, i64, usize)> = [2i64, 4, 6, 8, 10, 20]
            .iter()
            .flat_map(|&a| {
                (0..a).flat_map(move |delta| {
                    [1usize, 4, 64].map(move |k| (a, delta, k * a as usize))
                })
            })
            .collect();
        let devs = par::map_indexed(grid.len(), |i| -> Result<f64> {
            let (a, delta, n) = grid[i];
            let params = FreeParams::new(
                a,
                Rational64::from_integer(0),
                Rational64::from_integer(delta),
                n,
                Variant::Standard,
            )?;
            // Exact phase-level identity: the N-term multiset is N/a copies
            // of the a-term multiset.
            let full = propagator_term_phases(&params, n)?;
            let reduced = propagator_term_phases(&params, a as usize)?;
            let mut counts: HashMap<RationalPhase, i64> = HashMap::new();
            for ph in &full {
                *counts.entry(*ph).or_default() += 1;
            }
            for ph in &reduced {
                *counts.entry(*ph).or_default() -= (n as i64) / a;
            }
            if counts.values().any(|&c| c != 0) {
                return Err(crate::Error::Internal(format!(
                    "phase multiset mismatch at a={a} Δ={delta} N={n}"
                )));
            }
            let full_v = free_propagator(&params, Method::FullSum)?.value;
            let reduced_v = free_propagator(&params, Method::ReducedSum)?.value;
            let closed_v = free_propagator(&params, Method::ClosedForm)?.value;
            let scale = closed_v.norm();
            let dev = ((full_v - closed_v).norm() / scale)
                .max((reduced_v - closed_v).norm() / scale)
                .max((full_v - reduced_v).norm() / scale);
            Ok(dev)
        });
        let mut max_dev: f64 = 0.0;
        let mut checks = 0;
        for d in devs {
            max_dev = max_dev.max(d?);
            checks += 1;
        }
        Ok((
            max_dev <= FREE_METHOD_REL_TOL,
            checks,
            max_dev,
            format!("max relative method deviation {max_dev:.3e} (tol {FREE_METHOD_REL_TOL:.0e})"),
        ))
    })
}

/// 50 sampled (m, t) pairs with a = ht/m an even integer: the closed form
/// matches the continuum kernel within [`CONTINUUM_ABS_TOL`], and the
/// conjugate variant is its complex conjugate.
pub fn continuum_match() -> FamilyOutcome {
    run_family("free-propagator-continuum-match", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
        let hbar = 1.0;
        let mut max_dev: f64 = 0.0;
        let mut checks = 0;
        for _ in 0..50 {
            let a = 2 * rng.gen_range(1..=20i64);
            let t = rng.gen_range(0.3..3.0);
            let m = 2.0 * std::f64::consts::PI * t / a as f64;
            let delta = rng.gen_range(0..a);
            let params = FreeParams::new(
                a,
                Rational64::from_integer(0),
                Rational64::from_integer(delta),
                a as usize,
                Variant::Standard,
            )?;
            let closed = free_propagator(&params, Method::ClosedForm)?.value;
            let reference = physics_reference(m, t, hbar, 0.0, delta as f64, Variant::Standard)?;
            let conj_params = FreeParams::new(
                a,
                Rational64::from_integer(0),
                Rational64::from_integer(delta),
                a as usize,
                Variant::Conjugate,
            )?;
            let conj = free_propagator(&conj_params, Method::ClosedForm)?.value;
            let dev = (closed - reference)
                .norm()
                .max((conj - closed.conj()).norm());
            max_dev = max_dev.max(dev);
            checks += 1;
        }
        Ok((
            max_dev <= CONTINUUM_ABS_TOL,
            checks,
            max_dev,
            format!("max |closed − continuum| {max_dev:.3e} (tol {CONTINUUM_ABS_TOL:.0e})"),
        ))
    })
}

/// 1000 pseudo-random admissible (c, d, g) with |c|, |g| ≤ 40: reciprocity
/// matches the direct-sum oracle within [`GAUSS_ABS_TOL_PER_G`]·|g|.
pub fn gauss_reciprocity_fuzz() -> FamilyOutcome {
    run_family("gauss-reciprocity-vs-direct", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
        let samples: Vec<GaussSumParams> = (0..1000)
            .map(|_| {
                let nonzero = |rng: &mut ChaCha8Rng| {
                    let v = rng.gen_range(1..=40i64);
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                };
                let c = nonzero(&mut rng);
                let g = nonzero(&mut rng);
                let d = 2 * rng.gen_range(-60..=60i64) + (c * g).rem_euclid(2);
                GaussSumParams::new(c, d, g)
            })
            .collect();
        let devs = par::map_indexed(samples.len(), |i| -> Result<f64> {
            let p = samples[i];
            let direct = gauss_sum_direct(&p)?;
            let recip = gauss_sum_reciprocity(&p)?;
            Ok((direct - recip).norm() / (p.g.unsigned_abs() as f64))
        });
        let mut max_dev: f64 = 0.0;
        for d in devs {
            max_dev = max_dev.max(d?);
        }
        Ok((
            max_dev <= GAUSS_ABS_TOL_PER_G,
            samples.len(),
            max_dev,
            format!("max |direct − reciprocity|/|g| {max_dev:.3e} (tol {GAUSS_ABS_TOL_PER_G:.0e})"),
        ))
    })
}

/// For N ∈ {12, 60}: the unstarred law V^w U^t = q^{wv·tu} U^t V^w holds
/// exactly for every integer pair in [0, N)², and the starred law holds for
/// every tu ∈ [0, N), wv ∈ {k/N}. Exact phase equality, zero tolerance.
pub fn commutator_suite() -> FamilyOutcome {
    run_family("commutator-laws-exact", || {
        let mut checks = 0;
        for n in [12usize, 60] {
            let model = FiniteModel::dimensionless(n, Rational64::from_integer(1))?;
            let pairs: Vec<(i64, i64)> = (0..n as i64)
                .flat_map(|t| (0..n as i64).map(move |w| (t, w)))
                .collect();
            let unstarred = par::map_indexed(pairs.len(), |i| -> Result<bool> {
                let (tu, wv) = pairs[i];
                let got = commutator_phase(&model, UTime::integer(tu), VTime::integer(wv), false)?;
                let want = model.q_power(wv as i128 * tu as i128)?;
                Ok(got == want)
            });
            for ok in unstarred {
                if !ok? {
                    return Ok((false, checks, 1.0, format!("unstarred law failed at N={n}")));
                }
                checks += 1;
            }
            let starred = par::map_indexed(pairs.len(), |i| -> Result<bool> {
                let (tu, k) = pairs[i];
                let wv = Rational64::new(k, n as i64);
                let got = commutator_phase(&model, UTime::integer(tu), VTime(wv), true)?;
                let want = RationalPhase::from_ratio(
                    Rational64::from_integer(2 * tu) * wv,
                )?;
                Ok(got == want)
            });
            for ok in starred {
                if !ok? {
                    return Ok((false, checks, 1.0, format!("starred law failed at N={n}")));
                }
                checks += 1;
            }
        }
        Ok((
            true,
            checks,
            0.0,
            "all commutator phases exact (zero tolerance)".into(),
        ))
    })
}

/// Oscillator grid: matrix, reduced-sum and closed-form routes agree within
/// [`OSC_METHOD_REL_TOL`] and the closed form matches the Mehler kernel
/// within [`OSC_MEHLER_ABS_TOL`].
pub fn oscillator_methods() -> FamilyOutcome {
    run_family("oscillator-methods-and-mehler", || {
        // (ωt, a, N): even a ≤ 20, N ≤ 4096 including one full-size grid.
        let cases: &[(f64, i64, usize)] = &[
            (std::f64::consts::PI / 6.0, 2, 8),
            (std::f64::consts::PI / 6.0, 10, 40),
            (std::f64::consts::PI / 4.0, 4, 16),
            (std::f64::consts::PI / 4.0, 16, 4096),
            (std::f64::consts::PI / 2.0, 6, 24),
            (std::f64::consts::PI / 2.0, 20, 80),
        ];
        let mut max_method_dev: f64 = 0.0;
        let mut max_mehler_dev: f64 = 0.0;
        let mut checks = 0;
        for &(wt, a, n) in cases {
            let params = OscParams::unit_mode(wt, a)?;
            let grid = OscGrid::new(params, n)?;
            for x0 in [0i64, 1] {
                for delta in [0i64, 1, a / 2, a - 1] {
                    let x1 = (x0 + delta).rem_euclid(a);
                    let x0r = Rational64::from_integer(x0);
                    let x1r = Rational64::from_integer(x1);
                    let matrix = osc_propagator(&grid, x0r, x1r, Method::Matrix)?;
                    let reduced = osc_propagator(&grid, x0r, x1r, Method::ReducedSum)?;
                    let closed = osc_propagator(&grid, x0r, x1r, Method::ClosedForm)?;
                    let scale = closed.value.norm();
                    let method_dev = ((matrix.value - closed.value).norm() / scale)
                        .max((reduced.value - closed.value).norm() / scale)
                        .max((matrix.value - reduced.value).norm() / scale);
                    let mehler = mehler_reference(grid.params(), x0 as f64, x1 as f64)?;
                    let mehler_dev = (closed.value - mehler).norm();
                    max_method_dev = max_method_dev.max(method_dev);
                    max_mehler_dev = max_mehler_dev.max(mehler_dev);
                    checks += 1;
                }
            }
        }
        let passed = max_method_dev <= OSC_METHOD_REL_TOL && max_mehler_dev <= OSC_MEHLER_ABS_TOL;
        Ok((
            passed,
            checks,
            max_method_dev.max(max_mehler_dev),
            format!(
                "max method rel dev {max_method_dev:.3e} (tol {OSC_METHOD_REL_TOL:.0e}), \
                 max |closed − Mehler| {max_mehler_dev:.3e} (tol {OSC_MEHLER_ABS_TOL:.0e})"
            ),
        ))
    })
}

/// Embedding: F_N(f_n) equals v(n mod N) bit-exactly for every alias-free n
/// at N ∈ {16, 256}, and the Riemann norm of f(x) = x on [0, 1] is within
/// 2/N of 1/3 at N ∈ {100, 1000, 10000} with ratio-consistent decay.
pub fn embedding_suite() -> FamilyOutcome {
    run_family("embedding-modes-and-riemann", || {
        let mut checks = 0;
        for n in [16usize, 256] {
            let model = FiniteModel::dimensionless(n, Rational64::from_integer(1))?;
            let half = (n as i64 - 1) / 2;
            for index in -half..=half {
                let f = SampledFunction::mode(model.a(), n, index)?;
                let embedded = embed(&model, &f)?;
                let wrapped = index.rem_euclid(n as i64) as usize;
                let v = change_basis(&model, &basis_vector(&model, Basis::V, wrapped)?, Basis::U);
                if embedded.amplitudes() != v.amplitudes() {
                    return Ok((
                        false,
                        checks,
                        1.0,
                        format!("F_N(f_{index}) ≠ v({wrapped}) at N = {n}"),
                    ));
                }
                checks += 1;
            }
        }
        let mut errors = Vec::new();
        for n in [100usize, 1000, 10_000] {
            let model = FiniteModel::dimensionless(n, Rational64::from_integer(1))?;
            let f = SampledFunction::polynomial(model.a(), n, &[0.0, 1.0])?;
            let err = (embedded_norm_sq(&model, &f)? - 1.0 / 3.0).abs();
            if err > RIEMANN_ABS_TOL_TIMES_N / n as f64 {
                return Ok((
                    false,
                    checks,
                    err,
                    format!("Riemann error {err:.3e} exceeds 2/N at N = {n}"),
                ));
            }
            errors.push(err);
            checks += 1;
        }
        // Error is ~1/(2N): each decade of N shrinks it by close to 10.
        let decay_consistent = errors[0] / errors[1] > 8.0
            && errors[0] / errors[1] < 12.0
            && errors[1] / errors[2] > 8.0
            && errors[1] / errors[2] < 12.0;
        Ok((
            decay_consistent,
            checks,
            errors[2],
            format!(
                "modes exact; Riemann errors {:.3e}/{:.3e}/{:.3e} with ~10× decay",
                errors[0], errors[1], errors[2]
            ),
        ))
    })
}

/// Weyl failure on an N = 64 grid with tℏ = a/2: the commutator equals
/// e^{istℏ} on exactly half the grid and e^{i(stℏ−sa)} on the other half,
/// each within [`WEYL_ABS_TOL`]; the violation fraction is exactly 0.5.
pub fn weyl_failure() -> FamilyOutcome {
    run_family("weyl-relation-failure", || {
        let n = 64;
        let a = 1.0;
        let grid = WeylGrid::new(a, n, 1.0)?;
        let s = 1.0;
        let t = a / 2.0; // tℏ = a/2 with ℏ = 1
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
        let samples: Vec<C64> = (0..n)
            .map(|_| {
                C64::from_polar(
                    rng.gen_range(0.5..1.5),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        let naive = C64::from_polar(1.0, s * t);
        let wrapped = C64::from_polar(1.0, s * t - s * a);
        let mut naive_count = 0;
        let mut wrapped_count = 0;
        let mut max_dev: f64 = 0.0;
        for k in 0..n {
            let got = weyl_commutator(&grid, s, t, k, &samples)?;
            let (dev, is_wrapped) = {
                let dn = (got - naive).norm();
                let dw = (got - wrapped).norm();
                if dn <= dw {
                    (dn, false)
                } else {
                    (dw, true)
                }
            };
            if is_wrapped {
                wrapped_count += 1;
            } else {
                naive_count += 1;
            }
            max_dev = max_dev.max(dev);
        }
        let report = violation_report(&grid, s, t)?;
        let passed = max_dev <= WEYL_ABS_TOL
            && naive_count == n / 2
            && wrapped_count == n / 2
            && report.fraction == 0.5;
        Ok((
            passed,
            n,
            max_dev,
            format!(
                "{naive_count} naive + {wrapped_count} wrapped points, \
                 fraction {}, max phase dev {max_dev:.3e}",
                report.fraction
            ),
        ))
    })
}

/// The space-size calculator reproduces the reference figures: 7.27 cm
/// (electron, 1 s, cm unit), 262 m (1 h), 727 / 73 cm (mm unit), each
/// within 1%.
pub fn space_size_figures() -> FamilyOutcome {
    run_family("space-size-figures", || {
        let cases: &[(f64, f64, f64, &str)] = &[
            // (time, unit in meters, expected value, which quantity)
            (1.0, 1e-2, 7.27, "a"),
            (3600.0, 1e-2, 262.0, "length_m"),
            (1.0, 1e-3, 727.0, "a"),
            (1.0, 1e-3, 0.73, "length_m"),
        ];
        let mut max_rel: f64 = 0.0;
        for &(t, unit, want, which) in cases {
            let (a, length) = space_size(ELECTRON_MASS_KG, t, PLANCK_H, unit)?;
            let got = if which == "a" { a } else { length };
            max_rel = max_rel.max((got - want).abs() / want);
        }
        Ok((
            max_rel <= SPACE_SIZE_REL_TOL,
            cases.len(),
            max_rel,
            format!("max relative deviation {max_rel:.3e} (tol {SPACE_SIZE_REL_TOL})"),
        ))
    })
}

/// Sweep engine stand-in for the divisibility limit: exact quantities show
/// zero deviation along the whole chain, Riemann quantities shrink
/// monotonically on ratio-≥4 chains.
pub fn sweep_stabilization() -> FamilyOutcome {
    run_family("sweep-stabilization", || {
        let exact = SweepSpec {
            quantity: Quantity::FreePropagator {
                a: 2,
                x0: RationalParam(Rational64::from_integer(0)),
                x1: RationalParam(Rational64::from_integer(1)),
                variant: Variant::Standard,
                method: Method::FullSum,
            },
            chain: vec![2, 8, 64],
            tolerance: 1e-9,
        };
        let report = run_sweep(&exact)?;
        let exact_ok = report.stabilized
            && report.stabilized_at == Some(2)
            && report
                .entries
                .iter()
                .filter_map(|e| e.deviation)
                .all(|d| d <= 1e-12);

        let riemann = SweepSpec {
            quantity: Quantity::EmbeddedNormSq {
                a: RationalParam(Rational64::from_integer(1)),
                family: crate::embed::FunctionKind::Polynomial {
                    coeffs: vec![0.0, 1.0],
                },
            },
            chain: vec![100, 1000, 10_000],
            tolerance: 1e-6,
        };
        let report = run_sweep(&riemann)?;
        let devs: Vec<f64> = report.entries.iter().filter_map(|e| e.deviation).collect();
        let riemann_ok = !report.stabilized && devs.windows(2).all(|w| w[1] < w[0]);

        Ok((
            exact_ok && riemann_ok,
            2,
            0.0,
            format!(
                "exact chain stabilized at N = 2: {exact_ok}; \
                 Riemann deviations strictly decreasing: {riemann_ok}"
            ),
        ))
    })
}

/// Basis-change unitarity: inner products preserved within 1e−11·N on
/// random states, round trips within 1e−12·N componentwise.
pub fn unitarity_suite() -> FamilyOutcome {
    run_family("basis-change-unitarity", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000b);
        let mut max_scaled_dev: f64 = 0.0;
        let mut checks = 0;
        for n in [8usize, 60, 256] {
            let model = FiniteModel::dimensionless(n, Rational64::from_integer(1))?;
            for _ in 0..4 {
                let s = crate::model::StateVector::new(
                    Basis::U,
                    (0..n)
                        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect(),
                );
                let t = crate::model::StateVector::new(
                    Basis::U,
                    (0..n)
                        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect(),
                );
                let sv = change_basis(&model, &s, Basis::V);
                let tv = change_basis(&model, &t, Basis::V);
                let dev = (s.inner(&t) - sv.inner(&tv)).norm() / n as f64;
                max_scaled_dev = max_scaled_dev.max(dev / 1e-11);
                let back = change_basis(&model, &sv, Basis::U);
                let round = s
                    .amplitudes()
                    .iter()
                    .zip(back.amplitudes())
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max)
                    / n as f64;
                max_scaled_dev = max_scaled_dev.max(round / 1e-12);
                checks += 1;
            }
        }
        Ok((
            max_scaled_dev <= 1.0,
            checks,
            max_scaled_dev,
            format!("worst deviation at {max_scaled_dev:.3}× its tolerance"),
        ))
    })
}

/// Run every family.
pub fn run_all() -> Vec<FamilyOutcome> {
    vec![
        free_exact_agreement(),
        continuum_match(),
        gauss_reciprocity_fuzz(),
        commutator_suite(),
        oscillator_methods(),
        embedding_suite(),
        weyl_failure(),
        space_size_figures(),
        sweep_stabilization(),
        unitarity_suite(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_family_passes() {
        for outcome in run_all() {
            assert!(
                outcome.passed,
                "{}: {} (max dev {})",
                outcome.name, outcome.detail, outcome.max_dev
            );
        }
    }
}
