//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored lowest degree first and are always trimmed, so the
//! zero polynomial is the empty vector and every other polynomial has a
//! nonzero leading coefficient.

mod fractions;
mod roots;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use fractions::{lagrange_interpolate, partial_fractions, reconstruct_numerator, residues_at};
pub use roots::{
    isolate_real_roots, min_abs_critical_value, simplest_rational_between, strongly_interlaces,
    Root, RootSet, RootValue, SturmSequence,
};

/// Exact rational scalar. Always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial division left a nonzero remainder")]
    NotDivisible,
    #[error("polynomial has non-real roots")]
    NonRealRoots,
    #[error("expected deg(low) < deg(high), got {low} and {high}")]
    DegreeOrder { low: usize, high: usize },
    #[error("duplicate interpolation abscissa {0}")]
    DuplicateAbscissa(Rational),
    #[error("repeated pole {0}")]
    RepeatedPole(Rational),
    #[error("denominator has a pole that is not rational")]
    IrrationalPole,
    #[error("denominator must be monic")]
    NotMonic,
    #[error("polynomial must have simple real roots")]
    NotSimpleRealRooted,
    #[error("cannot parse rational {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`. Decimal notation is refused: the whole pipeline is
/// exact, so inputs have to be given as fractions.
pub fn parse_rational(s: &str) -> Result<Rational, PolyError> {
    let t = s.trim();
    let err = |reason: &str| PolyError::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    if t.contains(['.', 'e', 'E']) {
        return Err(err("decimal input is not accepted; write the value as an exact fraction p/q"));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| err("bad denominator"))?;
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// `"num/den"`, with the denominator omitted when it is 1.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite float.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// gcd of a list of rationals: gcd of numerators over lcm of denominators.
pub fn rational_gcd<'a, I: IntoIterator<Item = &'a Rational>>(items: I) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for r in items {
        num = num.gcd(r.numer());
        den = den.lcm(r.denom());
    }
    Rational::new(num, den)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn x() -> Self {
        Poly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// `x - r`
    pub fn linear(r: &Rational) -> Self {
        Poly::new(vec![-r.clone(), Rational::one()])
    }

    /// Monic polynomial vanishing on `roots` (repeats allowed).
    pub fn from_roots(roots: &[Rational]) -> Self {
        let mut coeffs = vec![Rational::one()];
        for r in roots {
            // multiply by (x - r) in place
            coeffs.push(Rational::zero());
            for k in (0..coeffs.len()).rev() {
                let lower = if k > 0 { coeffs[k - 1].clone() } else { Rational::zero() };
                coeffs[k] = lower - r * &coeffs[k];
            }
        }
        Poly::new(coeffs)
    }

    pub fn from_int_roots(roots: &[i64]) -> Self {
        let roots: Vec<Rational> = roots.iter().map(|&r| int(r)).collect();
        Poly::from_roots(&roots)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    /// Sign of `p(x)` as -1, 0 or 1.
    pub fn sign_at(&self, x: &Rational) -> i32 {
        sign(&self.eval(x))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides through by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    /// Positive rescaling to integer coefficients with unit content. Signs of
    /// values are preserved, which is all the Sturm machinery needs.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let mut content = BigInt::zero();
        for c in &ints {
            content = content.gcd(c);
        }
        Poly::new(
            ints.into_iter()
                .map(|c| Rational::from_integer(c / &content))
                .collect(),
        )
    }

    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if nd < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = &rem[k + dd] * &lc_inv;
            if !q.is_zero() {
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &q * c;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Quotient of an exact division.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::NotDivisible)
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_ok_and(|r| r.is_zero())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor").primitive();
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    /// `(-1)^deg p(-x)`: reflects the roots through the origin and keeps a monic
    /// polynomial monic.
    pub fn reflect(&self) -> Poly {
        let Some(deg) = self.degree() else {
            return Poly::zero();
        };
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if (deg - k) % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `p(x)` with `x` replaced by `x + shift`.
    pub fn shift(&self, shift: &Rational) -> Poly {
        let mut acc = Poly::zero();
        let xs = Poly::new(vec![shift.clone(), Rational::one()]);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &xs) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }
}

pub(crate) fn sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
                if k > 0 {
                    write!(f, "*")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn from_roots_examples() {
        assert_eq!(Poly::from_roots(&[]), Poly::one());
        assert_eq!(Poly::from_int_roots(&[1, -1, 2, -2]), Poly::from_ints(&[4, 0, -5, 0, 1]));
        // expanded independently: (x+8)(x+4)x(x-8)(x-9)
        assert_eq!(
            Poly::from_int_roots(&[-8, -4, 0, 8, 9]),
            Poly::from_ints(&[0, 2304, 320, -100, -5, 1])
        );
    }

    #[test]
    fn display_is_readable() {
        let p = Poly::new(vec![rat(-315, 4), int(144), int(40), int(-25), rat(-5, 2), int(1)]);
        assert_eq!(p.to_string(), "x^5 - 5/2*x^4 - 25*x^3 + 40*x^2 + 144*x - 315/4");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!((-Poly::x()).to_string(), "-x");
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&rat(10, 2)), "5");
        assert_eq!(format_rational(&rat(-1, 3)), "-1/3");
    }

    #[test]
    fn gcd_and_reflect() {
        let a = Poly::from_int_roots(&[1, 2, 3]);
        let b = Poly::from_int_roots(&[2, 3, 5]).scale(&int(7));
        assert_eq!(a.gcd(&b), Poly::from_int_roots(&[2, 3]));
        assert_eq!(Poly::zero().gcd(&Poly::zero()), Poly::zero());
        assert_eq!(Poly::from_int_roots(&[1, 4]).reflect(), Poly::from_int_roots(&[-1, -4]));
        assert!(Poly::from_int_roots(&[1, 4, 7]).reflect().is_monic());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Poly::x().div_rem(&Poly::zero()), Err(PolyError::DivisionByZero));
        assert_eq!(Poly::x().exact_div(&Poly::from_ints(&[1, 1])), Err(PolyError::NotDivisible));
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = Poly::from_ints(&[3, -1, 0, 2]);
        let s = p.shift(&rat(1, 2));
        for x in [-3, 0, 5] {
            assert_eq!(s.eval(&int(x)), p.eval(&(int(x) + rat(1, 2))));
        }
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((-9i64..=9, 1i64..=4), 0..7)
            .prop_map(|v| Poly::new(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn div_rem_round_trip(p in small_poly(), q in small_poly()) {
            prop_assume!(!q.is_zero());
            let (quot, rem) = p.div_rem(&q).unwrap();
            prop_assert_eq!(&(&q * &quot) + &rem, p);
            if let Some(rd) = rem.degree() {
                prop_assert!(rd < q.degree().unwrap());
            }
        }

        #[test]
        fn gcd_divides_both_and_is_monic(p in small_poly(), q in small_poly(), r in small_poly()) {
            let a = &p * &r;
            let b = &q * &r;
            let g = a.gcd(&b);
            if a.is_zero() && b.is_zero() {
                prop_assert!(g.is_zero());
            } else {
                prop_assert!(g.is_monic());
                prop_assert!(g.divides(&a));
                prop_assert!(g.divides(&b));
                if !r.is_zero() {
                    prop_assert!(g.degree() >= r.degree());
                }
            }
        }
    }
}
