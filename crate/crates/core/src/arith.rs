//! Exact amplitudes.
//!
//! Measure factors are rationals; amplitudes are finite sums of rational
//! multiples of roots of unity, stored as elements of the group ring
//! `Q[Z_L]`. Nothing here ever rounds; [`PhaseSum::eval`] is only used for
//! tolerance comparisons and reporting.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_from_order(order: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(order.clone()))
}

/// `"num/den"` with the denominator always present.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.trim().parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Serde adapters for report fields: rationals as `"n/d"`, big orders as
/// JSON integers (strings once they leave `u64`).
pub mod serde_exact {
    use super::*;

    pub fn rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn order<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match n.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&n.to_string()),
        }
    }
}

/// `Σ coeff(e) · exp(2πi e / L)` with rational coefficients.
///
/// Always held in canonical form: no zero coefficients, exponents in
/// `0..L`, and `L` the smallest modulus keeping every exponent integral
/// (the zero sum has `L = 1`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhaseSum {
    modulus: u64,
    terms: BTreeMap<u64, Rational>,
}

impl PhaseSum {
    pub fn zero() -> Self {
        PhaseSum {
            modulus: 1,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::new(1, [(0, r)])
    }

    /// The single root of unity `exp(2πi e / L)`.
    pub fn root_of_unity(exponent: u64, modulus: u64) -> Self {
        Self::new(modulus, [(exponent, Rational::one())])
    }

    /// Builds a sum from `(exponent, coefficient)` pairs; exponents are taken
    /// mod `modulus` and repeated exponents are merged.
    pub fn new(modulus: u64, terms: impl IntoIterator<Item = (u64, Rational)>) -> Self {
        assert!(modulus > 0, "phase modulus must be positive");
        let mut map: BTreeMap<u64, Rational> = BTreeMap::new();
        for (e, c) in terms {
            let slot = map.entry(e % modulus).or_insert_with(Rational::zero);
            *slot += c;
        }
        let mut out = PhaseSum {
            modulus,
            terms: map,
        };
        out.canonicalize();
        out
    }

    fn canonicalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.is_empty() {
            self.modulus = 1;
            return;
        }
        let g = self
            .terms
            .keys()
            .fold(self.modulus, |g, &e| g.gcd(&e));
        if g > 1 {
            self.modulus /= g;
            self.terms = std::mem::take(&mut self.terms)
                .into_iter()
                .map(|(e, c)| (e / g, c))
                .collect();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coefficient(&self, exponent: u64) -> Option<&Rational> {
        self.terms.get(&exponent)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(r)` when the sum is structurally a single rational term.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 if self.modulus == 1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    fn rescaled(&self, modulus: u64) -> impl Iterator<Item = (u64, Rational)> + '_ {
        let factor = modulus / self.modulus;
        self.terms.iter().map(move |(&e, c)| (e * factor, c.clone()))
    }

    pub fn add(&self, other: &PhaseSum) -> PhaseSum {
        let l = self.modulus.lcm(&other.modulus);
        PhaseSum::new(l, self.rescaled(l).chain(other.rescaled(l)))
    }

    pub fn mul(&self, other: &PhaseSum) -> PhaseSum {
        let l = self.modulus.lcm(&other.modulus);
        let fa = l / self.modulus;
        let fb = l / other.modulus;
        let mut out: BTreeMap<u64, Rational> = BTreeMap::new();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &other.terms {
                let e = (ea * fa + eb * fb) % l;
                *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        PhaseSum::new(l, out)
    }

    pub fn scale(&self, r: &Rational) -> PhaseSum {
        PhaseSum::new(
            self.modulus,
            self.terms.iter().map(|(&e, c)| (e, c * r)),
        )
    }

    /// Complex conjugation: `e ↦ (L − e) mod L`.
    pub fn conj(&self) -> PhaseSum {
        let l = self.modulus;
        PhaseSum::new(l, self.terms.iter().map(|(&e, c)| ((l - e) % l, c.clone())))
    }

    pub fn eval(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&e, c) in &self.terms {
            let angle = std::f64::consts::TAU * (e as f64) / (self.modulus as f64);
            acc += Complex64::from_polar(1.0, angle) * rational_to_f64(c);
        }
        acc
    }

    /// Structural equality short-circuits; otherwise compares numerically.
    pub fn approx_eq(&self, other: &PhaseSum, tol: f64) -> bool {
        self == other || (self.eval() - other.eval()).norm() <= tol
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a PhaseSum>) -> PhaseSum {
        items
            .into_iter()
            .fold(PhaseSum::zero(), |acc, x| acc.add(x))
    }
}

impl Default for PhaseSum {
    fn default() -> Self {
        PhaseSum::zero()
    }
}

impl Add for &PhaseSum {
    type Output = PhaseSum;
    fn add(self, rhs: &PhaseSum) -> PhaseSum {
        PhaseSum::add(self, rhs)
    }
}

impl Mul for &PhaseSum {
    type Output = PhaseSum;
    fn mul(self, rhs: &PhaseSum) -> PhaseSum {
        PhaseSum::mul(self, rhs)
    }
}

impl Neg for &PhaseSum {
    type Output = PhaseSum;
    fn neg(self) -> PhaseSum {
        self.scale(&-Rational::one())
    }
}

impl From<Rational> for PhaseSum {
    fn from(r: Rational) -> Self {
        PhaseSum::from_rational(r)
    }
}

impl fmt::Display for PhaseSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in &self.terms {
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let mag = c.abs();
            if e == 0 {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}·ζ{}^{e}", self.modulus)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PhaseSumRepr {
    #[serde(rename = "L")]
    modulus: u64,
    terms: Vec<(u64, String)>,
}

impl Serialize for PhaseSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PhaseSumRepr {
            modulus: self.modulus,
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e, format_rational(c)))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PhaseSum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PhaseSumRepr::deserialize(deserializer)?;
        if repr.modulus == 0 {
            return Err(de::Error::custom("phase modulus must be positive"));
        }
        let mut terms = Vec::with_capacity(repr.terms.len());
        for (e, s) in repr.terms {
            let c = parse_rational(&s)
                .ok_or_else(|| de::Error::custom(format!("bad rational `{s}`")))?;
            terms.push((e, c));
        }
        Ok(PhaseSum::new(repr.modulus, terms))
    }
}
