//! Subcommand implementations.

use clap::{Args, ValueEnum};
use num_complex::Complex64 as C64;
use num_rational::Rational64;
use serde::Serialize;

use finq::constants::{particle_mass_kg, PLANCK_H};
use finq::error::{Error, Result};
use finq::free::{
    free_propagator, physics_reference, space_size, FreeParams, Method,
    Variant,
};
use finq::gauss::{gauss_sum_direct, gauss_sum_reciprocity, GaussSumParams};
use finq::osc::{osc_propagator, OscGrid, OscParams};
use finq::parse_rational;
use finq::sweep::{run_sweep, write_csv, SweepSpec};
use finq::verify;
use finq::weyl::{translate, violation_report, weyl_commutator, WeylGrid};

use crate::output::{emit, ComplexOut, Envelope, ErrorBody, ErrorOut, Meta, SCHEMA_VERSION};

fn envelope<I: Serialize, O: Serialize, D: Serialize>(
    command: &'static str,
    inputs: I,
    outputs: O,
    deviations: D,
    warnings: Vec<String>,
    no_meta: bool,
) -> Envelope<I, O, D> {
    Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        inputs,
        outputs,
        deviations,
        warnings,
        meta: (!no_meta).then(Meta::now),
    }
}

pub fn emit_error(command: &'static str, e: &Error) -> i32 {
    let (kind, code) = if e.is_validation() {
        ("validation", 2)
    } else if e.is_singularity() {
        ("singularity", 3)
    } else {
        ("internal", 4)
    };
    emit(&ErrorOut {
        schema_version: SCHEMA_VERSION,
        command,
        error: ErrorBody {
            kind,
            message: e.to_string(),
        },
    });
    code
}

/// Echo of a rational flag after exact snapping.
#[derive(Serialize)]
struct SnappedRational {
    given: String,
    snapped: String,
}

fn snap(given: &str) -> Result<(Rational64, SnappedRational)> {
    let r = parse_rational(given)?;
    Ok((
        r,
        SnappedRational {
            given: given.to_string(),
            snapped: r.to_string(),
        },
    ))
}

// ---------------------------------------------------------------------------
// free

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    All,
    FullSum,
    ReducedSum,
    ClosedForm,
    Matrix,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::All => vec![
                Method::FullSum,
                Method::ReducedSum,
                Method::ClosedForm,
                Method::Matrix,
            ],
            MethodArg::FullSum => vec![Method::FullSum],
            MethodArg::ReducedSum => vec![Method::ReducedSum],
            MethodArg::ClosedForm => vec![Method::ClosedForm],
            MethodArg::Matrix => vec![Method::Matrix],
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Standard,
    Conjugate,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Standard => Variant::Standard,
            VariantArg::Conjugate => Variant::Conjugate,
        }
    }
}

#[derive(Args, Debug)]
pub struct FreeArgs {
    /// Space size a = ht/m as an even positive integer (dimensionless mode).
    #[arg(long, conflicts_with_all = ["mass", "time"])]
    a: Option<i64>,
    /// Particle mass in kg (physical mode; requires --time).
    #[arg(long, requires = "time")]
    mass: Option<f64>,
    /// Elapsed time in seconds (physical mode; requires --mass).
    #[arg(long, requires = "mass")]
    time: Option<f64>,
    /// Length unit in meters for physical mode.
    #[arg(long, default_value_t = 1e-2)]
    unit: f64,
    /// Planck constant override, J·s.
    #[arg(long, default_value_t = PLANCK_H)]
    planck: f64,
    /// Start position (rational: "3", "1/2", "0.25").
    #[arg(long)]
    x0: String,
    /// End position (rational).
    #[arg(long)]
    x1: String,
    /// Model dimension N (a must divide N).
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = VariantArg::Standard)]
    variant: VariantArg,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,
}

#[derive(Serialize)]
struct FreeInputs {
    a: i64,
    x0: SnappedRational,
    x1: SnappedRational,
    n: usize,
    variant: String,
    method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    physical: Option<PhysicalEcho>,
}

#[derive(Serialize)]
struct PhysicalEcho {
    mass_kg: f64,
    time_s: f64,
    unit_m: f64,
    planck: f64,
    derived_a: f64,
}

#[derive(Serialize)]
struct MethodValue {
    method: String,
    value: ComplexOut,
    abs_dev: f64,
    rel_dev: f64,
}

#[derive(Serialize)]
struct FreeOutputs {
    results: Vec<MethodValue>,
    reference: ComplexOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    physics_reference: Option<ComplexOut>,
}

#[derive(Serialize)]
struct CrossDeviations {
    max_cross_method: f64,
    max_vs_reference: f64,
}

pub fn cmd_free(args: &FreeArgs, no_meta: bool) -> Result<()> {
    let mut warnings = Vec::new();
    let (a, physical) = match (args.mass, args.time) {
        (Some(mass), Some(time)) => {
            let (a_f, _) = space_size(mass, time, args.planck, args.unit)?;
            let a = 2 * (a_f / 2.0).round() as i64;
            if a < 2 {
                return Err(Error::Domain(format!(
                    "derived a = {a_f} is too small to snap to an even positive integer; \
                     shrink the length unit"
                )));
            }
            let rel = (a_f - a as f64).abs() / a as f64;
            if rel > 1e-9 {
                warnings.push(format!(
                    "derived a = {a_f} snapped to {a} (relative adjustment {rel:.3e})"
                ));
            }
            (
                a,
                Some(PhysicalEcho {
                    mass_kg: mass,
                    time_s: time,
                    unit_m: args.unit,
                    planck: args.planck,
                    derived_a: a_f,
                }),
            )
        }
        _ => {
            let a = args.a.ok_or_else(|| {
                Error::Domain("either --a or both --mass and --time are required".into())
            })?;
            (a, None)
        }
    };
    let (x0, x0_echo) = snap(&args.x0)?;
    let (x1, x1_echo) = snap(&args.x1)?;
    let variant: Variant = args.variant.into();
    let params = FreeParams::new(a, x0, x1, args.n, variant)?;

    let mut results = Vec::new();
    let mut values: Vec<C64> = Vec::new();
    let mut reference = C64::new(0.0, 0.0);
    for method in args.method.methods() {
        let r = free_propagator(&params, method)?;
        reference = r.reference;
        values.push(r.value);
        results.push(MethodValue {
            method: method.name().to_string(),
            value: r.value.into(),
            abs_dev: r.abs_dev,
            rel_dev: r.rel_dev,
        });
    }
    let max_cross = values
        .iter()
        .flat_map(|v| values.iter().map(move |w| (v - w).norm()))
        .fold(0.0, f64::max);
    let max_vs_ref = values
        .iter()
        .map(|v| (v - reference).norm())
        .fold(0.0, f64::max);

    let physics = physical
        .as_ref()
        .map(|p| physics_reference(p.mass_kg, p.time_s, p.planck / std::f64::consts::TAU, 0.0, 0.0, variant))
        .transpose()?;

    emit(&envelope(
        "free",
        FreeInputs {
            a,
            x0: x0_echo,
            x1: x1_echo,
            n: args.n,
            variant: format!("{:?}", args.variant).to_lowercase(),
            method: format!("{:?}", args.method).to_lowercase(),
            physical,
        },
        FreeOutputs {
            results,
            reference: reference.into(),
            physics_reference: physics.map(ComplexOut::from),
        },
        CrossDeviations {
            max_cross_method: max_cross,
            max_vs_reference: max_vs_ref,
        },
        warnings,
        no_meta,
    ));
    Ok(())
}

// ---------------------------------------------------------------------------
// oscillator

#[derive(Args, Debug)]
pub struct OscArgs {
    /// Dimensionless form: ωt in radians (with --a; ℏ = ω = 1).
    #[arg(long, conflicts_with_all = ["mass", "omega", "time", "hbar"])]
    omega_t: Option<f64>,
    /// Dimensionless form: scaling a = h·sin(ωt)/(mω) as an even integer.
    #[arg(long)]
    a: Option<i64>,
    /// Physical form: mass.
    #[arg(long)]
    mass: Option<f64>,
    /// Physical form: angular frequency, rad/time.
    #[arg(long)]
    omega: Option<f64>,
    /// Physical form: time.
    #[arg(long)]
    time: Option<f64>,
    /// Physical form: ℏ.
    #[arg(long)]
    hbar: Option<f64>,
    /// Start position (rational).
    #[arg(long)]
    x0: String,
    /// End position (rational).
    #[arg(long)]
    x1: String,
    /// Model dimension N (a must divide N).
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = OscMethodArg::All)]
    method: OscMethodArg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OscMethodArg {
    All,
    Matrix,
    ReducedSum,
    ClosedForm,
}

impl OscMethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            OscMethodArg::All => vec![Method::Matrix, Method::ReducedSum, Method::ClosedForm],
            OscMethodArg::Matrix => vec![Method::Matrix],
            OscMethodArg::ReducedSum => vec![Method::ReducedSum],
            OscMethodArg::ClosedForm => vec![Method::ClosedForm],
        }
    }
}

#[derive(Serialize)]
struct OscInputs {
    m: f64,
    omega: f64,
    t: f64,
    hbar: f64,
    a: i64,
    alpha: f64,
    beta: f64,
    x0: SnappedRational,
    x1: SnappedRational,
    n: usize,
    method: String,
}

#[derive(Serialize)]
struct OscOutputs {
    results: Vec<MethodValue>,
    mehler: ComplexOut,
}

#[derive(Serialize)]
struct OscDeviations {
    max_cross_method: f64,
    max_vs_mehler: f64,
}

pub fn cmd_oscillator(args: &OscArgs, no_meta: bool) -> Result<()> {
    let params = match (args.omega_t, args.mass, args.omega, args.time, args.hbar) {
        (Some(wt), None, None, None, None) => {
            let a = args.a.ok_or_else(|| {
                Error::Domain("--omega-t requires --a (even integer scaling)".into())
            })?;
            OscParams::unit_mode(wt, a)?
        }
        (None, Some(m), Some(omega), Some(t), hbar) => {
            OscParams::new(m, omega, t, hbar.unwrap_or(1.0))?
        }
        _ => {
            return Err(Error::Domain(
                "use either --omega-t with --a, or --mass --omega --time [--hbar]".into(),
            ))
        }
    };
    let grid = OscGrid::new(params, args.n)?;
    let (x0, x0_echo) = snap(&args.x0)?;
    let (x1, x1_echo) = snap(&args.x1)?;

    let mut results = Vec::new();
    let mut values = Vec::new();
    let mut mehler = C64::new(0.0, 0.0);
    for method in args.method.methods() {
        let r = osc_propagator(&grid, x0, x1, method)?;
        mehler = r.reference;
        values.push(r.value);
        results.push(MethodValue {
            method: method.name().to_string(),
            value: r.value.into(),
            abs_dev: r.abs_dev,
            rel_dev: r.rel_dev,
        });
    }
    let max_cross = values
        .iter()
        .flat_map(|v| values.iter().map(move |w| (v - w).norm()))
        .fold(0.0, f64::max);
    let max_vs_mehler = values
        .iter()
        .map(|v| (v - mehler).norm())
        .fold(0.0, f64::max);

    let p = grid.params();
    emit(&envelope(
        "oscillator",
        OscInputs {
            m: p.m(),
            omega: p.omega(),
            t: p.t(),
            hbar: p.hbar(),
            a: grid.a(),
            alpha: p.alpha(),
            beta: p.beta(),
            x0: x0_echo,
            x1: x1_echo,
            n: args.n,
            method: format!("{:?}", args.method).to_lowercase(),
        },
        OscOutputs {
            results,
            mehler: mehler.into(),
        },
        OscDeviations {
            max_cross_method: max_cross,
            max_vs_mehler,
        },
        Vec::new(),
        no_meta,
    ));
    Ok(())
}

// ---------------------------------------------------------------------------
// gauss

#[derive(Args, Debug)]
pub struct GaussArgs {
    #[arg(long, allow_hyphen_values = true)]
    c: i64,
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    #[arg(long, allow_hyphen_values = true)]
    g: i64,
    /// Also evaluate the reciprocity identity and report the deviation.
    #[arg(long)]
    check: bool,
}

#[derive(Serialize)]
struct GaussInputs {
    c: i64,
    d: i64,
    g: i64,
    check: bool,
}

#[derive(Serialize)]
struct GaussOutputs {
    direct: ComplexOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    reciprocity: Option<ComplexOut>,
}

#[derive(Serialize)]
struct GaussDeviations {
    #[serde(skip_serializing_if = "Option::is_none")]
    direct_vs_reciprocity: Option<f64>,
}

pub fn cmd_gauss(args: &GaussArgs, no_meta: bool) -> Result<()> {
    let p = GaussSumParams::new(args.c, args.d, args.g);
    let direct = gauss_sum_direct(&p)?;
    let recip = if args.check {
        Some(gauss_sum_reciprocity(&p)?)
    } else {
        None
    };
    emit(&envelope(
        "gauss",
        GaussInputs {
            c: args.c,
            d: args.d,
            g: args.g,
            check: args.check,
        },
        GaussOutputs {
            direct: direct.into(),
            reciprocity: recip.map(ComplexOut::from),
        },
        GaussDeviations {
            direct_vs_reciprocity: recip.map(|r| (r - direct).norm()),
        },
        Vec::new(),
        no_meta,
    ));
    Ok(())
}

// ---------------------------------------------------------------------------
// space-size

#[derive(Args, Debug)]
pub struct SpaceSizeArgs {
    /// Particle preset: electron, proton or neutron.
    #[arg(long, conflicts_with = "mass")]
    particle: Option<String>,
    /// Mass override, kg.
    #[arg(long)]
    mass: Option<f64>,
    /// Elapsed time, seconds.
    #[arg(long)]
    time: f64,
    /// Length unit: m, cm, mm, um, nm, or a value in meters.
    #[arg(long, default_value = "m")]
    unit: String,
    /// Planck constant override, J·s.
    #[arg(long, default_value_t = PLANCK_H)]
    planck: f64,
}

#[derive(Serialize)]
struct SpaceSizeInputs {
    mass_kg: f64,
    time_s: f64,
    unit_m: f64,
    planck: f64,
}

#[derive(Serialize)]
struct SpaceSizeOutputs {
    /// Dimensionless space size in the chosen unit.
    a: f64,
    /// Physical length in meters.
    length_m: f64,
    /// Physical length in the chosen unit.
    length_units: f64,
}

fn parse_unit(text: &str) -> Result<f64> {
    match text {
        "m" => Ok(1.0),
        "cm" => Ok(1e-2),
        "mm" => Ok(1e-3),
        "um" | "µm" => Ok(1e-6),
        "nm" => Ok(1e-9),
        other => other.parse::<f64>().map_err(|_| {
            Error::Domain(format!(
                "unknown unit '{other}': use m, cm, mm, um, nm or a value in meters"
            ))
        }),
    }
}

pub fn cmd_space_size(args: &SpaceSizeArgs, no_meta: bool) -> Result<()> {
    let mass = match (&args.particle, args.mass) {
        (Some(name), None) => particle_mass_kg(name)
            .ok_or_else(|| Error::Domain(format!("unknown particle preset '{name}'")))?,
        (None, Some(m)) => m,
        (None, None) => {
            return Err(Error::Domain(
                "either --particle or --mass is required".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflict"),
    };
    let unit = parse_unit(&args.unit)?;
    let (a, length_m) = space_size(mass, args.time, args.planck, unit)?;
    emit(&envelope(
        "space-size",
        SpaceSizeInputs {
            mass_kg: mass,
            time_s: args.time,
            unit_m: unit,
            planck: args.planck,
        },
        SpaceSizeOutputs {
            a,
            length_m,
            length_units: a,
        },
        serde_json::json!({}),
        Vec::new(),
        no_meta,
    ));
    Ok(())
}

// ---------------------------------------------------------------------------
// weyl

#[derive(Args, Debug)]
pub struct WeylArgs {
    /// Interval length.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Grid size.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// Parameter of e^{isQ}.
    #[arg(long, allow_hyphen_values = true)]
    s: f64,
    /// Parameter of e^{itP}; t·ℏ·N/a must be an integer.
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
}

#[derive(Serialize)]
struct WeylInputs {
    a: f64,
    n: usize,
    hbar: f64,
    s: f64,
    t: f64,
}

#[derive(Serialize)]
struct WeylOutputs {
    report: finq::weyl::ViolationReport,
    /// Worst |computed − predicted| commutator deviation over the grid, on
    /// a deterministic non-vanishing test function.
    max_pointwise_dev: f64,
}

pub fn cmd_weyl(args: &WeylArgs, no_meta: bool) -> Result<()> {
    let grid = WeylGrid::new(args.a, args.n, args.hbar)?;
    // Non-vanishing test function 2 + e^{i2πx/a}: |f| ≥ 1 everywhere.
    let samples: Vec<C64> = (0..args.n)
        .map(|k| {
            let x = grid.point(k);
            C64::new(2.0, 0.0) + C64::from_polar(1.0, std::f64::consts::TAU * x / args.a)
        })
        .collect();
    // Exercise the translation itself as part of the report.
    let _ = translate(&grid, args.t, &samples)?;
    let report = violation_report(&grid, args.s, args.t)?;
    let mut max_dev: f64 = 0.0;
    for k in 0..args.n {
        let got = weyl_commutator(&grid, args.s, args.t, k, &samples)?;
        let want = finq::weyl::expected_commutator(&grid, args.s, args.t, k)?;
        max_dev = max_dev.max((got - want).norm());
    }
    emit(&envelope(
        "weyl",
        WeylInputs {
            a: args.a,
            n: args.n,
            hbar: args.hbar,
            s: args.s,
            t: args.t,
        },
        WeylOutputs {
            report,
            max_pointwise_dev: max_dev,
        },
        serde_json::json!({}),
        Vec::new(),
        no_meta,
    ));
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Path to the sweep spec JSON: {quantity, params, chain, tolerance}.
    #[arg(long)]
    spec: std::path::PathBuf,
    /// Write the CSV here instead of stdout (a JSON summary goes to stdout).
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Serialize)]
struct SweepInputs {
    spec: String,
}

#[derive(Serialize)]
struct SweepOutputs {
    stabilized: bool,
    stabilized_at: Option<usize>,
    entries: usize,
    csv: String,
}

pub fn cmd_sweep(args: &SweepArgs, no_meta: bool) -> Result<()> {
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", args.spec.display())))?;
    let spec: SweepSpec = serde_json::from_str(&text)
        .map_err(|e| Error::Domain(format!("invalid sweep spec: {e}")))?;
    let report = run_sweep(&spec)?;
    match &args.out {
        None => {
            let mut out = Vec::new();
            write_csv(&report, &mut out)
                .map_err(|e| Error::Internal(format!("csv write failed: {e}")))?;
            print!("{}", String::from_utf8_lossy(&out));
        }
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| Error::Domain(format!("cannot create {}: {e}", path.display())))?;
            write_csv(&report, file)
                .map_err(|e| Error::Internal(format!("csv write failed: {e}")))?;
            emit(&envelope(
                "sweep",
                SweepInputs {
                    spec: args.spec.display().to_string(),
                },
                SweepOutputs {
                    stabilized: report.stabilized,
                    stabilized_at: report.stabilized_at,
                    entries: report.entries.len(),
                    csv: path.display().to_string(),
                },
                serde_json::json!({}),
                Vec::new(),
                no_meta,
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify

#[derive(Args, Debug)]
pub struct VerifyArgs {}

#[derive(Serialize)]
struct VerifyOutputs {
    families: Vec<finq::verify::FamilyOutcome>,
    passed: usize,
    failed: usize,
}

pub fn cmd_verify(_args: &VerifyArgs, no_meta: bool) -> Result<()> {
    let families = verify::run_all();
    let passed = families.iter().filter(|f| f.passed).count();
    let failed = families.len() - passed;
    emit(&envelope(
        "verify",
        serde_json::json!({}),
        VerifyOutputs {
            families,
            passed,
            failed,
        },
        serde_json::json!({}),
        Vec::new(),
        no_meta,
    ));
    if failed > 0 {
        return Err(Error::Internal(format!(
            "{failed} property families failed"
        )));
    }
    Ok(())
}
