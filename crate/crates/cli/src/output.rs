//! The JSON envelope every command emits.
//!
//! Field order is fixed by struct declaration order, so identical inputs
//! produce byte-identical JSON; `--no-meta` drops the timestamp block for
//! fully reproducible output.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct Envelope<I: Serialize, O: Serialize, D: Serialize> {
    pub schema_version: u32,
    pub command: &'static str,
    pub inputs: I,
    pub outputs: O,
    pub deviations: D,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

#[derive(Serialize)]
pub struct Meta {
    pub generated_at: String,
}

impl Meta {
    pub fn now() -> Self {
        // Seconds since the epoch; enough to mark a run without pulling in a
        // date-time dependency.
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Meta {
            generated_at: format!("{secs}"),
        }
    }
}

/// A complex value in the output schema.
#[derive(Serialize)]
pub struct ComplexOut {
    pub re: f64,
    pub im: f64,
}

impl From<num_complex::Complex64> for ComplexOut {
    fn from(z: num_complex::Complex64) -> Self {
        ComplexOut { re: z.re, im: z.im }
    }
}

/// Machine-readable failure payload printed before a nonzero exit.
#[derive(Serialize)]
pub struct ErrorOut {
    pub schema_version: u32,
    pub command: &'static str,
    pub error: ErrorBody,
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
}

pub fn emit<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("output serialization cannot fail")
    );
}
