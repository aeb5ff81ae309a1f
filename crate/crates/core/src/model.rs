//! The finite model H_N: two DFT-conjugate bases and the diagonal unitary
//! families built on them.
//!
//! H_N is an N-dimensional complex inner-product space with orthonormal
//! basis u(0), …, u(N−1). With q = e^{i2π/N}, the conjugate basis is
//!
//! ```text
//! v(x) = N^{-1/2} Σ_y q^{xy} u(y),     u(x) = N^{-1/2} Σ_y q^{-xy} v(y).
//! ```
//!
//! The operator families are diagonal in one of the two bases:
//! U^t u(x) = q^{x·tu} u(x) and V^t v(x) = q^{x·tv} v(x) with the reduced
//! parameters tu = at/2π, tv = bt/2π, plus V^t_* = (V^t)^N. For integer tv
//! the V family acts on the u basis as the cyclic shift u(x) ↦ u(x − tv),
//! and the families satisfy the twisted commutation law
//! V^w U^t = q^{wv·tu} U^t V^w, exactly at the phase level.

use num_complex::Complex64 as C64;
use num_rational::Rational64;
use num_traits::Zero;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::par;
use crate::phase::RationalPhase;

/// Hard cap on the model dimension; dense vectors only.
pub const MAX_DIM: usize = 1 << 20;

/// Direct O(N²) basis change is used strictly below this size, the FFT path
/// at and above it.
pub const FFT_THRESHOLD: usize = 4096;

/// The two distinguished bases of H_N.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Basis {
    /// Position-like eigenbasis u(x).
    U,
    /// Momentum-like eigenbasis v(x).
    V,
}

impl Basis {
    pub fn other(self) -> Basis {
        match self {
            Basis::U => Basis::V,
            Basis::V => Basis::U,
        }
    }
}

/// The space H_N together with its scaling constants.
///
/// `a` scales position, `b` momentum, and the two are tied by a·b = h.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    n: usize,
    a: Rational64,
    b: Rational64,
    h: Rational64,
}

impl FiniteModel {
    /// Build the model with dimension `n`, position scaling `a` and Planck
    /// constant `h`; the momentum scaling is derived as b = h/a.
    pub fn new(n: usize, a: Rational64, h: Rational64) -> Result<Self> {
        if n <= 1 {
            return Err(Error::Domain(format!("dimension must exceed 1, got {n}")));
        }
        if n > MAX_DIM {
            return Err(Error::Domain(format!(
                "dimension {n} exceeds the dense cap {MAX_DIM}"
            )));
        }
        if a <= Rational64::zero() || h <= Rational64::zero() {
            return Err(Error::Domain(
                "scaling constants a and h must be positive".into(),
            ));
        }
        let b = h / a;
        Ok(FiniteModel { n, a, b, h })
    }

    /// Dimensionless model: position scaling `a`, h = 1.
    pub fn dimensionless(n: usize, a: Rational64) -> Result<Self> {
        Self::new(n, a, Rational64::new(1, 1))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> Rational64 {
        self.a
    }

    pub fn b(&self) -> Rational64 {
        self.b
    }

    pub fn h(&self) -> Rational64 {
        self.h
    }

    /// The exact phase of q^k = e^{i2πk/N}, i.e. (2k/N)·π.
    pub fn q_power(&self, k: i128) -> Result<RationalPhase> {
        RationalPhase::from_i128(2 * k, self.n as i128)
    }
}

/// A state as a dense amplitude vector tagged with the basis the amplitudes
/// refer to.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: Basis,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(basis: Basis, amplitudes: Vec<C64>) -> Self {
        StateVector { basis, amplitudes }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ⟨self|other⟩, conjugate-linear in `self`. Both vectors must be
    /// expressed in the same basis.
    pub fn inner(&self, other: &StateVector) -> C64 {
        assert_eq!(self.basis, other.basis, "inner product across bases");
        assert_eq!(self.len(), other.len(), "inner product length mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(x, y)| x.conj() * y)
            .sum()
    }
}

/// The basis vector u(x) or v(x), expressed in its own basis.
pub fn basis_vector(model: &FiniteModel, basis: Basis, x: usize) -> Result<StateVector> {
    if x >= model.n {
        return Err(Error::Domain(format!(
            "basis index {x} out of range for dimension {}",
            model.n
        )));
    }
    let mut amplitudes = vec![C64::zero(); model.n];
    amplitudes[x] = C64::new(1.0, 0.0);
    Ok(StateVector::new(basis, amplitudes))
}

fn dft_roots(model: &FiniteModel) -> Vec<C64> {
    par::map_indexed(model.n, |m| {
        model
            .q_power(m as i128)
            .expect("q-power phase cannot overflow for m < N ≤ 2^20")
            .to_complex()
    })
}

fn direct_transform(model: &FiniteModel, amps: &[C64], conjugate_kernel: bool) -> Vec<C64> {
    let n = model.n;
    let roots = dft_roots(model);
    let scale = 1.0 / (n as f64).sqrt();
    par::map_indexed(n, move |i| {
        let mut acc = C64::zero();
        for (j, amp) in amps.iter().enumerate() {
            let m = (i * j) % n;
            let idx = if conjugate_kernel && m != 0 { n - m } else { m };
            acc += roots[idx] * amp;
        }
        acc * scale
    })
}

fn fft_transform(amps: &[C64], forward: bool) -> Vec<C64> {
    let n = amps.len();
    let mut planner = FftPlanner::new();
    let fft = if forward {
        planner.plan_fft_forward(n)
    } else {
        planner.plan_fft_inverse(n)
    };
    let mut buf = amps.to_vec();
    fft.process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    for z in &mut buf {
        *z *= scale;
    }
    buf
}

/// Express `s` in the target basis.
///
/// Uses the definitional O(N²) kernel below [`FFT_THRESHOLD`] and an FFT
/// above; the two paths agree within 1e−10 (see tests). The transform is
/// unitary and the U→V / V→U pair are inverses of each other.
pub fn change_basis(model: &FiniteModel, s: &StateVector, target: Basis) -> StateVector {
    if s.basis == target {
        return s.clone();
    }
    if model.n < FFT_THRESHOLD {
        change_basis_direct(model, s, target)
    } else {
        change_basis_fft(model, s, target)
    }
}

/// Definitional O(N²) basis change; the oracle path.
pub fn change_basis_direct(model: &FiniteModel, s: &StateVector, target: Basis) -> StateVector {
    if s.basis == target {
        return s.clone();
    }
    assert_eq!(s.len(), model.n, "state length does not match model");
    // U-coefficients from V-coefficients use the kernel q^{+xy}; the reverse
    // direction conjugates it.
    let conjugate_kernel = target == Basis::V;
    StateVector::new(target, direct_transform(model, &s.amplitudes, conjugate_kernel))
}

/// FFT-backed basis change, identical in contract to
/// [`change_basis_direct`].
pub fn change_basis_fft(model: &FiniteModel, s: &StateVector, target: Basis) -> StateVector {
    if s.basis == target {
        return s.clone();
    }
    assert_eq!(s.len(), model.n, "state length does not match model");
    // rustfft's forward transform uses e^{−2πi·xy/N}, which is the U→V
    // kernel; V→U is the inverse transform.
    let forward = target == Basis::V;
    StateVector::new(target, fft_transform(&s.amplitudes, forward))
}

/// Common surface of the exact and float-phase diagonal unitaries.
pub trait DiagonalOp: Sync {
    fn basis(&self) -> Basis;
    fn dim(&self) -> usize;
    /// The unit-modulus factor applied at index k.
    fn factor(&self, k: usize) -> C64;
}

/// A diagonal unitary with every eigenvalue an exact rational multiple of π.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDiagonal {
    basis: Basis,
    phases: Vec<RationalPhase>,
}

impl ExactDiagonal {
    pub fn new(basis: Basis, phases: Vec<RationalPhase>) -> Self {
        ExactDiagonal { basis, phases }
    }

    pub fn identity(basis: Basis, n: usize) -> Self {
        ExactDiagonal::new(basis, vec![RationalPhase::ZERO; n])
    }

    pub fn phases(&self) -> &[RationalPhase] {
        &self.phases
    }

    pub fn phase_at(&self, k: usize) -> RationalPhase {
        self.phases[k]
    }

    pub fn is_identity(&self) -> bool {
        self.phases.iter().all(RationalPhase::is_zero)
    }

    /// Pointwise product of two diagonals in the same basis; exact.
    pub fn compose(&self, other: &ExactDiagonal) -> Result<ExactDiagonal> {
        if self.basis != other.basis {
            return Err(Error::Domain(
                "cannot compose diagonals over different bases".into(),
            ));
        }
        if self.phases.len() != other.phases.len() {
            return Err(Error::DimensionMismatch(format!(
                "diagonal lengths {} and {}",
                self.phases.len(),
                other.phases.len()
            )));
        }
        let phases = self
            .phases
            .iter()
            .zip(&other.phases)
            .map(|(p, q)| p.add(*q))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactDiagonal::new(self.basis, phases))
    }
}

impl DiagonalOp for ExactDiagonal {
    fn basis(&self) -> Basis {
        self.basis
    }

    fn dim(&self) -> usize {
        self.phases.len()
    }

    fn factor(&self, k: usize) -> C64 {
        self.phases[k].to_complex()
    }
}

/// Apply a diagonal unitary; a basis mismatch triggers an internal
/// [`change_basis`]. The result is expressed in the diagonal's basis.
pub fn apply_diagonal<D: DiagonalOp>(model: &FiniteModel, d: &D, s: &StateVector) -> StateVector {
    assert_eq!(d.dim(), model.dim(), "diagonal does not match model");
    let s = change_basis(model, s, d.basis());
    let amps = s.amplitudes();
    let out = par::map_indexed(model.dim(), |k| d.factor(k) * amps[k]);
    StateVector::new(d.basis(), out)
}

/// Reduced time parameter tu = a·t/2π for the U family.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct UTime(pub Rational64);

/// Reduced time parameter tv = b·t/2π for the V and V_* families.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct VTime(pub Rational64);

impl UTime {
    pub fn integer(t: i64) -> Self {
        UTime(Rational64::from_integer(t))
    }
}

impl VTime {
    pub fn integer(t: i64) -> Self {
        VTime(Rational64::from_integer(t))
    }
}

fn reduced_diagonal(model: &FiniteModel, t: Rational64, basis: Basis) -> Result<ExactDiagonal> {
    let phases = (0..model.n)
        .map(|x| {
            RationalPhase::from_i128(
                2 * x as i128 * *t.numer() as i128,
                *t.denom() as i128 * model.n as i128,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExactDiagonal::new(basis, phases))
}

/// U^t as a diagonal in the u basis: phase at x is (2·x·tu/N)·π.
pub fn op_u(model: &FiniteModel, t: UTime) -> Result<ExactDiagonal> {
    reduced_diagonal(model, t.0, Basis::U)
}

/// V^t as a diagonal in the v basis: phase at x is (2·x·tv/N)·π.
pub fn op_v(model: &FiniteModel, t: VTime) -> Result<ExactDiagonal> {
    reduced_diagonal(model, t.0, Basis::V)
}

/// V^t_* = (V^t)^N: phase at x is (2·x·tv)·π, carrying real-world momentum
/// units.
pub fn op_v_star(model: &FiniteModel, t: VTime) -> Result<ExactDiagonal> {
    let phases = (0..model.n)
        .map(|x| {
            RationalPhase::from_i128(
                2 * x as i128 * *t.0.numer() as i128,
                *t.0.denom() as i128,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExactDiagonal::new(Basis::V, phases))
}

fn require_integer(r: Rational64, what: &str) -> Result<i64> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(Error::Divisibility(format!(
            "{what} must be an integer, got {r}"
        )))
    }
}

/// The exact phase θ with V^w U^t = e^{iθ} U^t V^w, verified by applying
/// both operator orders to every basis vector u(x).
///
/// Unstarred law: requires integer tu and wv; θ is the phase of q^{wv·tu}.
/// Starred law (V_* in place of V): requires integer tu and integer N·wv;
/// θ is the phase of e^{i2π·tu·wv}.
pub fn commutator_phase(
    model: &FiniteModel,
    t: UTime,
    w: VTime,
    starred: bool,
) -> Result<RationalPhase> {
    let tu = require_integer(t.0, "t_u")?;
    let shift = if starred {
        let nw = w.0 * Rational64::from_integer(model.n as i64);
        require_integer(nw, "N·w_v")?
    } else {
        require_integer(w.0, "w_v")?
    };
    let n = model.n as i64;
    // V^w (starred or not) shifts the u basis by `shift` places, so
    //   V^w U^t u(x) = q^{x·tu}            u(x − shift)
    //   U^t V^w u(x) = q^{((x−shift) mod N)·tu} u(x − shift)
    // and the ratio must come out the same at every x.
    let mut ratio: Option<RationalPhase> = None;
    for x in 0..n {
        let target = (x - shift).rem_euclid(n);
        let vu = model.q_power(x as i128 * tu as i128)?;
        let uv = model.q_power(target as i128 * tu as i128)?;
        let r = vu.sub(uv)?;
        match ratio {
            None => ratio = Some(r),
            Some(prev) => {
                if prev != r {
                    return Err(Error::Internal(format!(
                        "commutator ratio not constant: {prev} at x=0 vs {r} at x={x}"
                    )));
                }
            }
        }
    }
    Ok(ratio.expect("dimension > 1"))
}
