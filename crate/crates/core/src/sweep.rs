//! Stabilization sweeps along divisibility chains of N.
//!
//! "Holds for all sufficiently divisible N" is operationalized as: evaluate
//! the quantity at every N in a chain where each entry divides the next,
//! and report whether the values have stabilized. Stabilization is a
//! two-point criterion on the final pair of values — the report observes
//! stabilization, it never asserts convergence.

use num_complex::Complex64 as C64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::embed::{embed, embedded_norm_sq, FunctionKind, SampledFunction};
use crate::error::{Error, Result};
use crate::free::{free_propagator, FreeParams, Method, Variant};
use crate::model::{commutator_phase, FiniteModel, UTime, VTime};
use crate::osc::{osc_propagator, OscGrid, OscParams};
use crate::par;
use crate::phase::parse_rational;

/// Exact rational parameter that (de)serializes as an integer or a "p/q" /
/// decimal string.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct RationalParam(pub Rational64);

impl Serialize for RationalParam {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalParam {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        let r = match Raw::deserialize(d)? {
            Raw::Int(i) => Rational64::from_integer(i),
            Raw::Text(t) => parse_rational(&t).map_err(D::Error::custom)?,
        };
        Ok(RationalParam(r))
    }
}

/// A named computation with fixed parameters, evaluated at a given N.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "quantity", content = "params", rename_all = "kebab-case")]
pub enum Quantity {
    /// ⟨x₁|K^t|x₀⟩ for the free particle.
    FreePropagator {
        a: i64,
        x0: RationalParam,
        x1: RationalParam,
        variant: Variant,
        method: Method,
    },
    /// ⟨x₁|K^t_N|x₀⟩ for the oscillator in unit-mode parametrization.
    OscPropagator {
        omega_t: f64,
        a: i64,
        x0: RationalParam,
        x1: RationalParam,
        method: Method,
    },
    /// ‖F_N(f)‖² for a named function family on [0, a].
    EmbeddedNormSq { a: RationalParam, family: FunctionKind },
    /// The exact commutator phase of (V^w, U^t), as a unit complex number.
    CommutatorPhase {
        t_u: RationalParam,
        w_v: RationalParam,
        starred: bool,
    },
}

impl Quantity {
    /// Evaluate at dimension `n`; real-valued quantities return a complex
    /// number with zero imaginary part.
    pub fn evaluate(&self, n: usize) -> Result<C64> {
        match self {
            Quantity::FreePropagator {
                a,
                x0,
                x1,
                variant,
                method,
            } => {
                let params = FreeParams::new(*a, x0.0, x1.0, n, *variant)?;
                Ok(free_propagator(&params, *method)?.value)
            }
            Quantity::OscPropagator {
                omega_t,
                a,
                x0,
                x1,
                method,
            } => {
                let params = OscParams::unit_mode(*omega_t, *a)?;
                let grid = OscGrid::new(params, n)?;
                Ok(osc_propagator(&grid, x0.0, x1.0, *method)?.value)
            }
            Quantity::EmbeddedNormSq { a, family } => {
                let f = sampled_from_kind(a.0, n, family)?;
                let model = FiniteModel::dimensionless(n, a.0)?;
                // Run the embedding itself so the quantity exercises F_N,
                // not only the sample array.
                let _ = embed(&model, &f)?;
                Ok(C64::new(embedded_norm_sq(&model, &f)?, 0.0))
            }
            Quantity::CommutatorPhase { t_u, w_v, starred } => {
                let model = FiniteModel::dimensionless(n, Rational64::from_integer(1))?;
                let ph = commutator_phase(&model, UTime(t_u.0), VTime(w_v.0), *starred)?;
                Ok(ph.to_complex())
            }
        }
    }
}

/// Build a sampled function from its serializable description.
pub fn sampled_from_kind(a: Rational64, n: usize, kind: &FunctionKind) -> Result<SampledFunction> {
    match kind {
        FunctionKind::Mode { index } => SampledFunction::mode(a, n, *index),
        FunctionKind::Polynomial { coeffs } => SampledFunction::polynomial(a, n, coeffs),
        FunctionKind::Gaussian { center, width } => {
            SampledFunction::gaussian(a, n, *center, *width)
        }
        FunctionKind::Samples => Err(Error::Domain(
            "raw-sample functions cannot be regenerated at other N; use a named family".into(),
        )),
    }
}

/// A sweep: a quantity, a divisibility chain of N values, and the
/// stabilization tolerance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSpec {
    #[serde(flatten)]
    pub quantity: Quantity,
    pub chain: Vec<usize>,
    pub tolerance: f64,
}

/// One evaluated chain entry.
#[derive(Clone, Debug, Serialize)]
pub struct SweepEntry {
    pub n: usize,
    pub value_re: f64,
    pub value_im: f64,
    /// |value − previous value|; absent on the first entry.
    pub deviation: Option<f64>,
}

/// The outcome of a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub entries: Vec<SweepEntry>,
    /// Whether the final two values differ by less than the tolerance.
    pub stabilized: bool,
    /// First N of the maximal stable suffix, when stabilized.
    pub stabilized_at: Option<usize>,
}

/// Evaluate the quantity along the chain. Chain entries must be strictly
/// increasing with each dividing the next; evaluation errors name the
/// failing N.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    if spec.chain.is_empty() {
        return Err(Error::Domain("sweep chain must be non-empty".into()));
    }
    if !(spec.tolerance > 0.0) {
        return Err(Error::Domain(format!(
            "stabilization tolerance must be positive, got {}",
            spec.tolerance
        )));
    }
    for pair in spec.chain.windows(2) {
        if pair[1] <= pair[0] || pair[1] % pair[0] != 0 {
            return Err(Error::Domain(format!(
                "chain must be strictly increasing with each N dividing the next; \
                 {} does not divide into {}",
                pair[0], pair[1]
            )));
        }
    }
    let values = par::map_indexed(spec.chain.len(), |i| {
        let n = spec.chain[i];
        spec.quantity
            .evaluate(n)
            .map_err(|e| e.with_context(&format!("N = {n}")))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut entries = Vec::with_capacity(values.len());
    for (i, (&n, &v)) in spec.chain.iter().zip(&values).enumerate() {
        let deviation = (i > 0).then(|| (v - values[i - 1]).norm());
        entries.push(SweepEntry {
            n,
            value_re: v.re,
            value_im: v.im,
            deviation,
        });
    }

    let stabilized = entries
        .last()
        .and_then(|e| e.deviation)
        .map(|d| d < spec.tolerance)
        .unwrap_or(false);
    let stabilized_at = if stabilized {
        // Walk back through the maximal suffix of stable deviations.
        let mut start = entries.len() - 1;
        while start > 0 && entries[start].deviation.map(|d| d < spec.tolerance) == Some(true) {
            start -= 1;
        }
        Some(entries[start].n)
    } else {
        None
    };

    Ok(SweepReport {
        entries,
        stabilized,
        stabilized_at,
    })
}

/// Write the report in the sweep CSV format: header row, one row per N.
pub fn write_csv<W: std::io::Write>(report: &SweepReport, mut w: W) -> std::io::Result<()> {
    writeln!(w, "N,value_re,value_im,deviation")?;
    for e in &report.entries {
        match e.deviation {
            Some(d) => writeln!(w, "{},{},{},{}", e.n, e.value_re, e.value_im, d)?,
            None => writeln!(w, "{},{},{},", e.n, e.value_re, e.value_im)?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(n: i64, d: i64) -> RationalParam {
        RationalParam(Rational64::new(n, d))
    }

    #[test]
    fn exact_quantities_stabilize_at_the_first_n() {
        let spec = SweepSpec {
            quantity: Quantity::FreePropagator {
                a: 2,
                x0: rp(0, 1),
                x1: rp(1, 1),
                variant: Variant::Standard,
                method: Method::FullSum,
            },
            chain: vec![2, 8, 64],
            tolerance: 1e-9,
        };
        let report = run_sweep(&spec).unwrap();
        assert!(report.stabilized);
        assert_eq!(report.stabilized_at, Some(2));
        for e in &report.entries {
            if let Some(d) = e.deviation {
                assert!(d <= 1e-12, "N = {}: deviation {d}", e.n);
            }
        }
    }

    #[test]
    fn riemann_quantities_shrink_but_do_not_stabilize() {
        let spec = SweepSpec {
            quantity: Quantity::EmbeddedNormSq {
                a: rp(1, 1),
                family: FunctionKind::Polynomial {
                    coeffs: vec![0.0, 1.0],
                },
            },
            chain: vec![100, 1000, 10_000],
            tolerance: 1e-6,
        };
        let report = run_sweep(&spec).unwrap();
        assert!(!report.stabilized);
        assert_eq!(report.stabilized_at, None);
        let values: Vec<f64> = report.entries.iter().map(|e| e.value_re).collect();
        assert!((values[0] - 0.32835).abs() < 1e-4);
        assert!((values[1] - 0.33283).abs() < 1e-4);
        assert!((values[2] - 0.33328).abs() < 1e-4);
        let devs: Vec<f64> = report.entries[1..]
            .iter()
            .map(|e| e.deviation.unwrap())
            .collect();
        // Deviations shrink by roughly the chain ratio.
        assert!(devs[1] < devs[0] / 4.0);
    }

    #[test]
    fn chain_validation() {
        let q = Quantity::CommutatorPhase {
            t_u: rp(1, 1),
            w_v: rp(1, 1),
            starred: false,
        };
        let empty = SweepSpec {
            quantity: q.clone(),
            chain: vec![],
            tolerance: 1e-9,
        };
        assert!(run_sweep(&empty).is_err());
        let bad = SweepSpec {
            quantity: q,
            chain: vec![4, 6],
            tolerance: 1e-9,
        };
        let err = run_sweep(&bad).unwrap_err();
        assert!(err.to_string().contains("divide"), "{err}");
    }

    #[test]
    fn evaluation_errors_name_the_failing_n() {
        let spec = SweepSpec {
            quantity: Quantity::FreePropagator {
                a: 4,
                x0: rp(0, 1),
                x1: rp(1, 1),
                variant: Variant::Standard,
                method: Method::ReducedSum,
            },
            chain: vec![2, 4],
            tolerance: 1e-9,
        };
        let err = run_sweep(&spec).unwrap_err();
        assert!(err.to_string().contains("N = 2"), "{err}");
    }

    #[test]
    fn spec_round_trips_through_json() {
        let text = r#"{
            "quantity": "free-propagator",
            "params": {"a": 2, "x0": 0, "x1": "1", "variant": "standard", "method": "reduced-sum"},
            "chain": [2, 8, 64],
            "tolerance": 1e-9
        }"#;
        let spec: SweepSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec.chain, vec![2, 8, 64]);
        let report = run_sweep(&spec).unwrap();
        assert!(report.stabilized);
        let mut csv = Vec::new();
        write_csv(&report, &mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert!(csv.starts_with("N,value_re,value_im,deviation\n"));
        assert_eq!(csv.lines().count(), 4);
    }
}
