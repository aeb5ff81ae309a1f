//! Quadratic Gauss sums, evaluated directly and through reciprocity.
//!
//! For integers c, d, g with g ≠ 0 the quadratic sum is
//!
//! ```text
//! S(c, d, g) = Σ_{n=0}^{|g|−1} e^{πi(cn² + dn)/g}
//! ```
//!
//! [`gauss_sum_direct`] computes it by literal summation with every term
//! phase formed exactly before numeric evaluation; it is the brute-force
//! oracle. [`gauss_sum_reciprocity`] evaluates the reciprocity identity
//!
//! ```text
//! S(c, d, g) = |g/c|^{1/2} · e^{πi(|cg|−d²)/4cg} · Σ_{n=0}^{|c|−1} e^{−πi(gn²+dn)/c}
//! ```
//!
//! which holds whenever cg ≠ 0 and cg − d is even, and turns a length-|g|
//! sum into a length-|c| one.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::phase::RationalPhase;

/// Parameters (c, d, g) of a quadratic Gauss sum.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GaussSumParams {
    pub c: i64,
    pub d: i64,
    pub g: i64,
}

impl GaussSumParams {
    pub fn new(c: i64, d: i64, g: i64) -> Self {
        GaussSumParams { c, d, g }
    }
}

/// The exact phases (in units of π) of the |g| terms of the direct sum.
pub fn direct_term_phases(p: &GaussSumParams) -> Result<Vec<RationalPhase>> {
    if p.g == 0 {
        return Err(Error::Domain("gauss sum requires g ≠ 0".into()));
    }
    let (c, d, g) = (p.c as i128, p.d as i128, p.g as i128);
    (0..p.g.unsigned_abs())
        .map(|n| {
            let n = n as i128;
            RationalPhase::from_i128(c * n * n + d * n, g)
        })
        .collect()
}

/// Literal summation of the |g| unit-modulus terms.
pub fn gauss_sum_direct(p: &GaussSumParams) -> Result<C64> {
    Ok(direct_term_phases(p)?
        .iter()
        .map(RationalPhase::to_complex)
        .sum())
}

/// Right-hand side of the reciprocity identity.
///
/// Requires c·g ≠ 0 and c·g − d even; the prefactor phase (|cg|−d²)/4cg is
/// normalized exactly and only the square root and the final term sum are
/// evaluated in floating point.
pub fn gauss_sum_reciprocity(p: &GaussSumParams) -> Result<C64> {
    let (c, d, g) = (p.c as i128, p.d as i128, p.g as i128);
    let cg = c * g;
    if cg == 0 {
        return Err(Error::Domain(format!(
            "reciprocity requires c·g ≠ 0 (c = {}, g = {})",
            p.c, p.g
        )));
    }
    if (cg - d).rem_euclid(2) != 0 {
        return Err(Error::Domain(format!(
            "reciprocity requires c·g − d even (c = {}, d = {}, g = {})",
            p.c, p.d, p.g
        )));
    }
    let scale = ((p.g as f64) / (p.c as f64)).abs().sqrt();
    let prefactor = RationalPhase::from_i128(cg.abs() - d * d, 4 * cg)?.to_complex();
    let inner: C64 = (0..p.c.unsigned_abs())
        .map(|n| {
            let n = n as i128;
            RationalPhase::from_i128(-(g * n * n + d * n), c).map(|ph| ph.to_complex())
        })
        .sum::<Result<C64>>()?;
    Ok(scale * prefactor * inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn assert_close(z: C64, re: f64, im: f64) {
        assert_abs_diff_eq!(z.re, re, epsilon = 1e-12);
        assert_abs_diff_eq!(z.im, im, epsilon = 1e-12);
    }

    #[test]
    fn direct_examples() {
        assert_close(
            gauss_sum_direct(&GaussSumParams::new(-1, 0, 2)).unwrap(),
            1.0,
            -1.0,
        );
        assert_close(
            gauss_sum_direct(&GaussSumParams::new(1, 0, 1)).unwrap(),
            1.0,
            0.0,
        );
        assert_close(
            gauss_sum_direct(&GaussSumParams::new(-1, 2, 4)).unwrap(),
            2.0,
            0.0,
        );
    }

    #[test]
    fn direct_degenerate_sum_of_ones() {
        let z = gauss_sum_direct(&GaussSumParams::new(0, 0, 7)).unwrap();
        assert_eq!(z, C64::new(7.0, 0.0));
    }

    #[test]
    fn direct_rejects_zero_g() {
        assert!(gauss_sum_direct(&GaussSumParams::new(1, 0, 0)).is_err());
    }

    #[test]
    fn reciprocity_examples() {
        assert_close(
            gauss_sum_reciprocity(&GaussSumParams::new(-1, 0, 2)).unwrap(),
            1.0,
            -1.0,
        );
        assert_close(
            gauss_sum_reciprocity(&GaussSumParams::new(-1, 2, 4)).unwrap(),
            2.0,
            0.0,
        );
        assert_close(
            gauss_sum_reciprocity(&GaussSumParams::new(1, 0, 2)).unwrap(),
            1.0,
            1.0,
        );
    }

    #[test]
    fn reciprocity_preconditions() {
        let err = gauss_sum_reciprocity(&GaussSumParams::new(0, 0, 2)).unwrap_err();
        assert!(err.to_string().contains("c·g ≠ 0"), "{err}");
        let err = gauss_sum_reciprocity(&GaussSumParams::new(1, 1, 2)).unwrap_err();
        assert!(err.to_string().contains("even"), "{err}");
    }

    proptest! {
        #[test]
        fn reciprocity_matches_direct(
            c in prop::sample::select((1i64..=40).chain(-40..=-1).collect::<Vec<_>>()),
            g in prop::sample::select((1i64..=40).chain(-40..=-1).collect::<Vec<_>>()),
            k in -60i64..60,
        ) {
            // Pick d with the same parity as c·g.
            let d = 2 * k + (c * g).rem_euclid(2);
            let p = GaussSumParams::new(c, d, g);
            let direct = gauss_sum_direct(&p).unwrap();
            let recip = gauss_sum_reciprocity(&p).unwrap();
            prop_assert!(
                (direct - recip).norm() <= 1e-10 * g.unsigned_abs() as f64,
                "c={c} d={d} g={g}: direct={direct} recip={recip}"
            );
        }
    }
}
