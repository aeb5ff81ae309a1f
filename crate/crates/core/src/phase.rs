//! Exact phases as reduced rational multiples of π.
//!
//! Every exponent of the form e^{iπ·r} with rational r flows through
//! [`RationalPhase`], which keeps the angle as a reduced integer pair modulo
//! 2π. Arithmetic is exact: periodicity reductions collapse to equalities of
//! canonical pairs, and floating point enters only at the final
//! [`RationalPhase::to_complex`] evaluation. Overflow in the integer
//! arithmetic is a checked error, never silent wraparound.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;
use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Error, Result};

/// An angle `numerator·π/denominator`, reduced and canonicalized so that
/// `gcd(|numerator|, denominator) = 1` and `0 ≤ numerator/denominator < 2`.
///
/// Equality, hashing and ordering all act on the canonical representative,
/// i.e. they compare phases modulo 2π.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPhase {
    num: i64,
    den: i64,
}

impl RationalPhase {
    /// The zero phase.
    pub const ZERO: RationalPhase = RationalPhase { num: 0, den: 1 };

    /// The phase π (factor −1).
    pub const PI: RationalPhase = RationalPhase { num: 1, den: 1 };

    /// Canonical representative of `(num/den)·π` modulo 2π.
    ///
    /// Fails if `den = 0`.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        Self::from_i128(num as i128, den as i128)
    }

    /// Same as [`RationalPhase::new`] with wide intermediates; used
    /// internally so products like `d²` and `4cg` cannot overflow before
    /// reduction.
    pub(crate) fn from_i128(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("phase denominator must be nonzero".into()));
        }
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        // gcd(num, den) = 1 is preserved by reduction modulo 2·den.
        num = num.rem_euclid(2 * den);
        let num = i64::try_from(num)
            .map_err(|_| Error::PhaseOverflow(format!("numerator {num} exceeds i64")))?;
        let den = i64::try_from(den)
            .map_err(|_| Error::PhaseOverflow(format!("denominator {den} exceeds i64")))?;
        Ok(RationalPhase { num, den })
    }

    /// Phase of the rational `r` (in units of π).
    pub fn from_ratio(r: Rational64) -> Result<Self> {
        Self::from_i128(*r.numer() as i128, *r.denom() as i128)
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    /// The canonical representative as an exact rational in [0, 2).
    pub fn as_ratio(&self) -> Rational64 {
        Rational64::new_raw(self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Exact sum modulo 2π.
    pub fn add(self, other: Self) -> Result<Self> {
        Self::from_i128(
            self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128,
            self.den as i128 * other.den as i128,
        )
    }

    /// Exact difference modulo 2π.
    pub fn sub(self, other: Self) -> Result<Self> {
        self.add(other.neg()?)
    }

    /// Exact negation modulo 2π.
    ///
    /// Fails only when the canonical representative 2·den − num does not fit
    /// an i64 (denominator close to i64::MAX).
    pub fn neg(self) -> Result<Self> {
        Self::from_i128(-(self.num as i128), self.den as i128)
    }

    /// Exact integer multiple modulo 2π.
    pub fn scale(self, k: i64) -> Result<Self> {
        Self::from_i128(self.num as i128 * k as i128, self.den as i128)
    }

    /// Exact rational multiple modulo 2π.
    pub fn scale_ratio(self, r: Rational64) -> Result<Self> {
        Self::from_i128(
            self.num as i128 * *r.numer() as i128,
            self.den as i128 * *r.denom() as i128,
        )
    }

    /// The angle in radians, in [0, 2π).
    pub fn angle(&self) -> f64 {
        PI * (self.num as f64) / (self.den as f64)
    }

    /// Evaluate e^{iπ·num/den} as a unit-modulus complex number.
    ///
    /// Quarter turns are returned exactly; everything else goes through
    /// `sin_cos` of the canonical angle (relative error a few machine
    /// epsilons).
    pub fn to_complex(&self) -> C64 {
        match (self.num, self.den) {
            (0, 1) => C64::new(1.0, 0.0),
            (1, 1) => C64::new(-1.0, 0.0),
            (1, 2) => C64::new(0.0, 1.0),
            (3, 2) => C64::new(0.0, -1.0),
            _ => {
                let (s, c) = self.angle().sin_cos();
                C64::new(c, s)
            }
        }
    }
}

impl PartialOrd for RationalPhase {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RationalPhase {
    fn cmp(&self, other: &Self) -> Ordering {
        // Canonical representatives are in [0, 2), so cross-multiplication
        // compares the underlying angles.
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for RationalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else if self.den == 1 {
            write!(f, "{}π", self.num)
        } else {
            write!(f, "{}π/{}", self.num, self.den)
        }
    }
}

/// Parse an exact rational from decimal ("0.5", "-3", "2.25e-2" is not
/// accepted) or fraction ("p/q") notation.
///
/// Decimal text is snapped exactly: "0.5" becomes 1/2, with no binary
/// rounding on the way.
pub fn parse_rational(text: &str) -> Result<Rational64> {
    let text = text.trim();
    let bad = |why: &str| Error::Domain(format!("cannot parse '{text}' as a rational: {why}"));
    if let Some((p, q)) = text.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad("bad numerator"))?;
        let q: i64 = q.trim().parse().map_err(|_| bad("bad denominator"))?;
        if q == 0 {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational64::new(p, q));
    }
    let (sign, digits) = match text.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1i64, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("empty"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad("expected digits, '.', or 'p/q'"));
    }
    let mut numer: i128 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| bad("integer part too large"))?
    };
    let mut denom: i128 = 1;
    for c in frac_part.chars() {
        numer = numer
            .checked_mul(10)
            .and_then(|n| n.checked_add((c as u8 - b'0') as i128))
            .ok_or_else(|| bad("too many digits"))?;
        denom = denom.checked_mul(10).ok_or_else(|| bad("too many digits"))?;
    }
    let g = numer.gcd(&denom);
    if g > 1 {
        numer /= g;
        denom /= g;
    }
    let numer = i64::try_from(sign as i128 * numer).map_err(|_| bad("out of range"))?;
    let denom = i64::try_from(denom).map_err(|_| bad("out of range"))?;
    Ok(Rational64::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ph(n: i64, d: i64) -> RationalPhase {
        RationalPhase::new(n, d).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(ph(5, 2), ph(1, 2));
        assert_eq!(ph(0, 7), RationalPhase::ZERO);
        assert_eq!(ph(0, 7).denom(), 1);
        assert_eq!(ph(-1, 4), ph(7, 4));
        assert_eq!(ph(4, 2), RationalPhase::ZERO);
        assert_eq!(ph(3, -2), ph(1, 2));
        assert!(RationalPhase::new(1, 0).is_err());
    }

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(ph(0, 1).to_complex(), C64::new(1.0, 0.0));
        assert_eq!(ph(1, 1).to_complex(), C64::new(-1.0, 0.0));
        assert_eq!(ph(1, 2).to_complex(), C64::new(0.0, 1.0));
        assert_eq!(ph(3, 2).to_complex(), C64::new(0.0, -1.0));
    }

    #[test]
    fn eighth_turn() {
        let z = ph(1, 4).to_complex();
        let r = 0.5_f64.sqrt();
        assert!((z.re - r).abs() < 1e-15);
        assert!((z.im - r).abs() < 1e-15);
    }

    #[test]
    fn overflow_is_checked() {
        let big = ph(i64::MAX - 2, i64::MAX - 1);
        assert!(matches!(
            big.add(ph(1, i64::MAX - 6)),
            Err(Error::PhaseOverflow(_))
        ));
    }

    #[test]
    fn ordering_is_by_angle() {
        assert!(ph(1, 3) < ph(1, 2));
        assert!(ph(3, 2) > ph(1, 1));
        assert_eq!(ph(2, 4).cmp(&ph(1, 2)), Ordering::Equal);
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("0.5").unwrap(), Rational64::new(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), Rational64::new(-1, 4));
        assert_eq!(parse_rational("3").unwrap(), Rational64::new(3, 1));
        assert_eq!(parse_rational("7/4").unwrap(), Rational64::new(7, 4));
        assert_eq!(parse_rational(" -3/9 ").unwrap(), Rational64::new(-1, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(n in -100_000i64..100_000, d in 1i64..100_000) {
            let p = ph(n, d);
            prop_assert_eq!(RationalPhase::new(p.numer(), p.denom()).unwrap(), p);
        }

        #[test]
        fn addition_commutes_and_associates(
            a in (-1000i64..1000, 1i64..1000),
            b in (-1000i64..1000, 1i64..1000),
            c in (-1000i64..1000, 1i64..1000),
        ) {
            let (a, b, c) = (ph(a.0, a.1), ph(b.0, b.1), ph(c.0, c.1));
            prop_assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
            prop_assert_eq!(
                a.add(b).unwrap().add(c).unwrap(),
                a.add(b.add(c).unwrap()).unwrap()
            );
        }

        #[test]
        fn sub_inverts_add(a in (-1000i64..1000, 1i64..1000), b in (-1000i64..1000, 1i64..1000)) {
            let (a, b) = (ph(a.0, a.1), ph(b.0, b.1));
            prop_assert_eq!(a.add(b).unwrap().sub(b).unwrap(), a);
        }

        #[test]
        fn unit_modulus(n in -100_000i64..100_000, d in 1i64..100_000) {
            let z = ph(n, d).to_complex();
            prop_assert!((z.norm() - 1.0).abs() <= 4.0 * f64::EPSILON);
        }
    }
}
