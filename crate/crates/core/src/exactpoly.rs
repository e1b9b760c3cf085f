//! Exact polynomial arithmetic over the integers and rationals.
//!
//! Provides dense univariate polynomials with `BigInt` coefficients
//! ([`IntPolynomial`]) and `BigRational` coefficients ([`QPolynomial`]),
//! sparse bivariate polynomials ([`BiPolynomial`]) with Sylvester resultants
//! computed by fraction-free Bareiss elimination, and sparse polynomials in
//! arbitrarily many variables ([`MultiPolynomial`]). All arithmetic is exact;
//! nothing in this module rounds.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number used throughout the crate.
pub type Rational = BigRational;

/// Errors raised by exact polynomial operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    /// An operation received a zero polynomial where a nonzero one is required.
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    /// The elimination variable occurs in neither resultant input.
    #[error("variable {0:?} occurs in neither input")]
    NoVariable(String),
    /// Polynomial division left a nonzero remainder.
    #[error("polynomial division left a nonzero remainder")]
    InexactDivision,
}

/// Convenience constructor for a rational from two machine integers.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Convenience constructor for an integer-valued rational.
pub fn rat(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `base^exp` for rationals with a machine-integer exponent.
pub fn rational_pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

fn decimal_string(r: &Rational, places: u32, round_half_even: bool) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let num = r.numer().abs() * &scale;
    let den = r.denom().clone();
    let (mut q, rem) = num.div_rem(&den);
    if round_half_even {
        let twice = BigInt::from(2) * rem;
        if twice > den || (twice == den && q.is_odd()) {
            q += 1;
        }
    }
    let (int_part, frac_part) = q.div_rem(&scale);
    let sign = if r.is_negative() && !q.is_zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = frac_part.to_string();
    let pad = "0".repeat(places as usize - frac.len());
    format!("{sign}{int_part}.{pad}{frac}")
}

/// Decimal string of `r` with `places` fractional digits, rounding the last
/// digit half-to-even.
pub fn decimal_round_half_even(r: &Rational, places: u32) -> String {
    decimal_string(r, places, true)
}

/// Decimal string of `r` with `places` fractional digits, truncated toward
/// zero.
pub fn decimal_truncate(r: &Rational, places: u32) -> String {
    decimal_string(r, places, false)
}

/// Compact exact display: integers bare, other rationals as `num/den`.
pub fn rational_display(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses an exact rational from integer (`"42"`), fraction (`"3/7"`),
/// decimal (`"0.125"`), or scientific (`"2.5e-3"`) notation.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".to_string());
    }
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = a
            .trim()
            .parse()
            .map_err(|_| format!("invalid numerator {a:?}"))?;
        let den: BigInt = b
            .trim()
            .parse()
            .map_err(|_| format!("invalid denominator {b:?}"))?;
        if den.is_zero() {
            return Err("zero denominator".to_string());
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (
            m,
            e.parse::<i32>()
                .map_err(|_| format!("invalid exponent {e:?}"))?,
        ),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if frac_part.chars().any(|c| !c.is_ascii_digit()) {
        return Err(format!("invalid number {s:?}"));
    }
    let digits = format!("{int_part}{frac_part}");
    let value: BigInt = digits
        .parse()
        .map_err(|_| format!("invalid number {s:?}"))?;
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        Rational::from_integer(value * ten.pow(shift as u32))
    } else {
        Rational::new(value, ten.pow(shift.unsigned_abs()))
    })
}

// ---------------------------------------------------------------------------
// IntPolynomial
// ---------------------------------------------------------------------------

/// Dense univariate polynomial with `BigInt` coefficients.
///
/// Coefficients are stored in ascending degree order with no trailing zeros;
/// the zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    /// Name of the variable, carried for display and sanity checks.
    pub var: String,
    /// Coefficients in ascending degree order, trailing zeros trimmed.
    pub coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(var: &str, mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial {
            var: var.to_string(),
            coeffs,
        }
    }

    /// Builds a polynomial from ascending machine-integer coefficients.
    pub fn from_i64(var: &str, coeffs: &[i64]) -> Self {
        Self::new(var, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The zero polynomial.
    pub fn zero(var: &str) -> Self {
        IntPolynomial {
            var: var.to_string(),
            coeffs: Vec::new(),
        }
    }

    /// A constant polynomial.
    pub fn constant(var: &str, c: BigInt) -> Self {
        Self::new(var, vec![c])
    }

    /// The monomial `c * var^degree`.
    pub fn monomial(var: &str, c: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(var, coeffs)
    }

    /// True when the polynomial is identically zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `var^k` (zero when `k` exceeds the degree).
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Leading coefficient, or `None` for the zero polynomial.
    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Evaluates at a rational point by Horner's rule.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    /// Evaluates at an integer point by Horner's rule.
    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect();
        Self::new(&self.var, coeffs)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(&self.var, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `self^exp` by repeated squaring.
    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::constant(&self.var, BigInt::one());
        let mut sq = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Non-negative gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the content, preserving sign (zero stays zero).
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Self::new(&self.var, self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Primitive part with a positive leading coefficient.
    pub fn primitive_positive(&self) -> Self {
        let pp = self.primitive_part();
        match pp.leading() {
            Some(l) if l.is_negative() => pp.scale(&BigInt::from(-1)),
            _ => pp,
        }
    }

    /// Exact quotient `self / divisor`.
    ///
    /// Errors with [`PolyError::ZeroPolynomial`] when the divisor is zero and
    /// with [`PolyError::InexactDivision`] when the division leaves any
    /// remainder (including non-integer quotient coefficients).
    pub fn exact_divide(&self, divisor: &Self) -> Result<Self, PolyError> {
        assert_eq!(self.var, divisor.var, "variable mismatch in exact_divide");
        if divisor.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.var));
        }
        let df = self.degree().unwrap();
        let dd = divisor.degree().unwrap();
        if df < dd {
            return Err(PolyError::InexactDivision);
        }
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); df - dd + 1];
        for k in (0..=df - dd).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            let (t, r) = c.div_rem(lead);
            if !r.is_zero() {
                return Err(PolyError::InexactDivision);
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                let prod = &t * d;
                rem[k + i] -= prod;
            }
            quot[k] = t;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(PolyError::InexactDivision);
        }
        Ok(Self::new(&self.var, quot))
    }

    /// Pseudo-remainder of `self` by `g`: the remainder of
    /// `lead(g)^(deg self - deg g + 1) * self` divided by `g`.
    ///
    /// Panics when `g` is zero or `deg self < deg g`.
    pub fn pseudo_rem(&self, g: &Self) -> Self {
        assert_eq!(self.var, g.var, "variable mismatch in pseudo_rem");
        let dg = g.degree().expect("pseudo_rem by zero polynomial");
        let df = self.degree().expect("pseudo_rem of zero polynomial");
        assert!(df >= dg, "pseudo_rem requires deg(self) >= deg(g)");
        let lg = g.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        for k in (dg..=df).rev() {
            let rk = rem[k].clone();
            for c in rem.iter_mut() {
                *c *= &lg;
            }
            for (i, gc) in g.coeffs.iter().enumerate() {
                let prod = &rk * gc;
                rem[k - dg + i] -= prod;
            }
        }
        rem.truncate(dg);
        Self::new(&self.var, rem)
    }

    /// Primitive gcd with positive leading coefficient, via the primitive
    /// pseudo-remainder sequence.
    pub fn gcd(&self, other: &Self) -> Self {
        assert_eq!(self.var, other.var, "variable mismatch in gcd");
        if self.is_zero() {
            return other.primitive_positive();
        }
        if other.is_zero() {
            return self.primitive_positive();
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            if a.degree() < b.degree() {
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_positive()
    }

    /// `self(var + a)` for an integer shift, as an integer polynomial.
    pub fn shift_int(&self, a: &BigInt) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        // Repeated synthetic division by (var - a): the k-th remainder is the
        // coefficient of var^k in self(var + a).
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(work.len());
        for k in 0..self.coeffs.len() {
            for i in (k..work.len() - 1).rev() {
                let carry = &work[i + 1] * a;
                work[i] += carry;
            }
            out.push(work[k].clone());
        }
        Self::new(&self.var, out)
    }

    /// `self(var + a)` for a rational shift, as a rational polynomial.
    pub fn taylor_shift(&self, a: &Rational) -> QPolynomial {
        self.to_q().taylor_shift(a)
    }

    /// The same polynomial with rational coefficients.
    pub fn to_q(&self) -> QPolynomial {
        QPolynomial::new(
            &self.var,
            self.coeffs
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// The same polynomial renamed to use variable `var`.
    pub fn rename(&self, var: &str) -> Self {
        IntPolynomial {
            var: var.to_string(),
            coeffs: self.coeffs.clone(),
        }
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if k == 1 {
                    write!(f, "{}", self.var)?;
                } else {
                    write!(f, "{}^{}", self.var, k)?;
                }
            }
        }
        Ok(())
    }
}

impl std::ops::Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(&self.var, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl std::ops::Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        assert_eq!(self.var, rhs.var, "variable mismatch in add");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let mut c = self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero);
            if let Some(d) = rhs.coeffs.get(k) {
                c += d;
            }
            coeffs.push(c);
        }
        IntPolynomial::new(&self.var, coeffs)
    }
}

impl std::ops::Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl std::ops::Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        assert_eq!(self.var, rhs.var, "variable mismatch in mul");
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero(&self.var);
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let prod = a * b;
                coeffs[i + j] += prod;
            }
        }
        IntPolynomial::new(&self.var, coeffs)
    }
}

// ---------------------------------------------------------------------------
// QPolynomial
// ---------------------------------------------------------------------------

/// Dense univariate polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct QPolynomial {
    /// Name of the variable.
    pub var: String,
    /// Coefficients in ascending degree order, trailing zeros trimmed.
    pub coeffs: Vec<Rational>,
}

impl QPolynomial {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(var: &str, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPolynomial {
            var: var.to_string(),
            coeffs,
        }
    }

    /// True when the polynomial is identically zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `var^k` (zero when `k` exceeds the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Evaluates at a rational point by Horner's rule.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `self(var + a)` by repeated synthetic division.
    pub fn taylor_shift(&self, a: &Rational) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(work.len());
        for k in 0..self.coeffs.len() {
            for i in (k..work.len() - 1).rev() {
                let carry = work[i + 1].clone() * a;
                work[i] += carry;
            }
            out.push(work[k].clone());
        }
        Self::new(&self.var, out)
    }

    /// Clears denominators: returns `(g, m)` with integer `g` and positive
    /// integer `m` such that `self = g / m`.
    pub fn clear_denominators(&self) -> (IntPolynomial, BigInt) {
        let mut m = BigInt::one();
        for c in &self.coeffs {
            m = m.lcm(c.denom());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let scaled = c * Rational::from_integer(m.clone());
                debug_assert!(scaled.is_integer());
                scaled.to_integer()
            })
            .collect();
        (IntPolynomial::new(&self.var, coeffs), m)
    }

    /// Converts to an integer polynomial when every coefficient is integral.
    pub fn to_int(&self) -> Option<IntPolynomial> {
        if self.coeffs.iter().all(Rational::is_integer) {
            Some(IntPolynomial::new(
                &self.var,
                self.coeffs.iter().map(Rational::to_integer).collect(),
            ))
        } else {
            None
        }
    }
}

// ---------------------------------------------------------------------------
// BiPolynomial
// ---------------------------------------------------------------------------

/// Selects one of the two variables of a [`BiPolynomial`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BiVar {
    /// The first variable.
    First,
    /// The second variable.
    Second,
}

/// Sparse bivariate polynomial with `BigInt` coefficients.
///
/// Terms map exponent pairs `(i, j)` (for `vars.0^i * vars.1^j`) to nonzero
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPolynomial {
    /// Names of the two variables.
    pub vars: (String, String),
    /// Map from exponent pairs to nonzero coefficients.
    pub terms: BTreeMap<(u32, u32), BigInt>,
}

impl BiPolynomial {
    /// The zero polynomial in the given variables.
    pub fn zero(v1: &str, v2: &str) -> Self {
        BiPolynomial {
            vars: (v1.to_string(), v2.to_string()),
            terms: BTreeMap::new(),
        }
    }

    /// A constant polynomial.
    pub fn constant(v1: &str, v2: &str, c: BigInt) -> Self {
        let mut poly = Self::zero(v1, v2);
        poly.add_term((0, 0), c);
        poly
    }

    /// The monomial `c * v1^i * v2^j`.
    pub fn monomial(v1: &str, v2: &str, c: BigInt, (i, j): (u32, u32)) -> Self {
        let mut poly = Self::zero(v1, v2);
        poly.add_term((i, j), c);
        poly
    }

    /// The first variable as a polynomial.
    pub fn var1(v1: &str, v2: &str) -> Self {
        Self::monomial(v1, v2, BigInt::one(), (1, 0))
    }

    /// The second variable as a polynomial.
    pub fn var2(v1: &str, v2: &str) -> Self {
        Self::monomial(v1, v2, BigInt::one(), (0, 1))
    }

    /// Adds `c * v1^i * v2^j` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, exps: (u32, u32), c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    /// True when the polynomial is identically zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree in the selected variable, or `None` for the zero polynomial.
    pub fn degree_in(&self, which: BiVar) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| match which {
                BiVar::First => i,
                BiVar::Second => j,
            })
            .max()
    }

    /// Coefficient of `which^k` as a univariate polynomial in the other variable.
    pub fn coeff_in(&self, which: BiVar, k: u32) -> IntPolynomial {
        let (other_name, extract): (&str, fn((u32, u32)) -> (u32, u32)) = match which {
            BiVar::First => (&self.vars.1, |(i, j)| (i, j)),
            BiVar::Second => (&self.vars.0, |(i, j)| (j, i)),
        };
        let mut coeffs: Vec<BigInt> = Vec::new();
        for (&exps, c) in &self.terms {
            let (sel, other) = extract(exps);
            if sel == k {
                let idx = other as usize;
                if coeffs.len() <= idx {
                    coeffs.resize(idx + 1, BigInt::zero());
                }
                coeffs[idx] += c;
            }
        }
        IntPolynomial::new(other_name, coeffs)
    }

    /// Evaluates at a rational point `(x, y)`.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            acc += Rational::from_integer(c.clone()) * rational_pow(x, i) * rational_pow(y, j);
        }
        acc
    }

    /// Instantiates the selected variable at an integer, returning a
    /// univariate polynomial in the other variable.
    pub fn eval_var_int(&self, which: BiVar, value: &BigInt) -> IntPolynomial {
        let deg = self.degree_in(which).unwrap_or(0);
        let other = match which {
            BiVar::First => BiVar::Second,
            BiVar::Second => BiVar::First,
        };
        // Horner in the selected variable with IntPolynomial coefficients.
        let mut acc = IntPolynomial::zero(match which {
            BiVar::First => &self.vars.1,
            BiVar::Second => &self.vars.0,
        });
        let _ = other;
        for k in (0..=deg).rev() {
            acc = &acc.scale(value) + &self.coeff_in(which, k);
        }
        acc
    }

    /// Instantiates the selected variable at a rational, returning a
    /// univariate rational polynomial in the other variable.
    pub fn eval_var_rational(&self, which: BiVar, value: &Rational) -> QPolynomial {
        let deg = self.degree_in(which).unwrap_or(0);
        let other_name = match which {
            BiVar::First => &self.vars.1,
            BiVar::Second => &self.vars.0,
        };
        let mut acc = QPolynomial::new(other_name, Vec::new());
        for k in (0..=deg).rev() {
            let coeff = self.coeff_in(which, k).to_q();
            let n = acc.coeffs.len().max(coeff.coeffs.len());
            let mut next = Vec::with_capacity(n);
            for idx in 0..n {
                let mut c = acc
                    .coeffs
                    .get(idx)
                    .map(|c| c * value)
                    .unwrap_or_else(Rational::zero);
                if let Some(d) = coeff.coeffs.get(idx) {
                    c += d;
                }
                next.push(c);
            }
            acc = QPolynomial::new(other_name, next);
        }
        acc
    }

    /// Substitutes `g` for the selected variable (Horner in that variable).
    ///
    /// `g` is interpreted in the same pair of variables as `self`.
    pub fn substitute(&self, which: BiVar, g: &Self) -> Self {
        let deg = match self.degree_in(which) {
            None => return self.clone(),
            Some(d) => d,
        };
        let coeff_as_bipoly = |k: u32| -> Self {
            let mut out = Self::zero(&self.vars.0, &self.vars.1);
            for (&(i, j), c) in &self.terms {
                let (sel, other) = match which {
                    BiVar::First => (i, j),
                    BiVar::Second => (j, i),
                };
                if sel == k {
                    let exps = match which {
                        BiVar::First => (0, other),
                        BiVar::Second => (other, 0),
                    };
                    out.add_term(exps, c.clone());
                }
            }
            out
        };
        let mut acc = Self::zero(&self.vars.0, &self.vars.1);
        for k in (0..=deg).rev() {
            acc = &(&acc * g) + &coeff_as_bipoly(k);
        }
        acc
    }

    /// The same polynomial with both variables renamed.
    pub fn rename(&self, v1: &str, v2: &str) -> Self {
        BiPolynomial {
            vars: (v1.to_string(), v2.to_string()),
            terms: self.terms.clone(),
        }
    }

    /// `self^exp` by repeated squaring.
    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::constant(&self.vars.0, &self.vars.1, BigInt::one());
        let mut sq = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars.0, &self.vars.1);
        }
        let mut out = self.clone();
        for coeff in out.terms.values_mut() {
            *coeff *= c;
        }
        out
    }
}

impl std::ops::Neg for &BiPolynomial {
    type Output = BiPolynomial;
    fn neg(self) -> BiPolynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }
}

impl std::ops::Add for &BiPolynomial {
    type Output = BiPolynomial;
    fn add(self, rhs: &BiPolynomial) -> BiPolynomial {
        assert_eq!(self.vars, rhs.vars, "variable mismatch in add");
        let mut out = self.clone();
        for (&exps, c) in &rhs.terms {
            out.add_term(exps, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &BiPolynomial {
    type Output = BiPolynomial;
    fn sub(self, rhs: &BiPolynomial) -> BiPolynomial {
        assert_eq!(self.vars, rhs.vars, "variable mismatch in sub");
        let mut out = self.clone();
        for (&exps, c) in &rhs.terms {
            out.add_term(exps, -c.clone());
        }
        out
    }
}

impl std::ops::Mul for &BiPolynomial {
    type Output = BiPolynomial;
    fn mul(self, rhs: &BiPolynomial) -> BiPolynomial {
        assert_eq!(self.vars, rhs.vars, "variable mismatch in mul");
        let mut out = BiPolynomial::zero(&self.vars.0, &self.vars.1);
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }
}

/// Resultant of `f` and `g` with respect to the selected variable, as a
/// univariate polynomial in the remaining variable.
///
/// Computed as the determinant of the standard Sylvester matrix (rows list
/// the coefficients of `f` first, then `g`, in descending degree) by
/// fraction-free Bareiss elimination over the polynomial ring in the
/// remaining variable. With this convention `res(x - 1, x - 2) = -1`.
///
/// Errors with [`PolyError::ZeroPolynomial`] when either input is zero and
/// with [`PolyError::NoVariable`] when the elimination variable occurs in
/// neither input.
pub fn resultant(
    f: &BiPolynomial,
    g: &BiPolynomial,
    which: BiVar,
) -> Result<IntPolynomial, PolyError> {
    assert_eq!(f.vars, g.vars, "variable mismatch in resultant");
    if f.is_zero() || g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let m = f.degree_in(which).unwrap() as usize;
    let n = g.degree_in(which).unwrap() as usize;
    let elim_name = match which {
        BiVar::First => &f.vars.0,
        BiVar::Second => &f.vars.1,
    };
    let other_name = match which {
        BiVar::First => f.vars.1.clone(),
        BiVar::Second => f.vars.0.clone(),
    };
    if m == 0 && n == 0 {
        return Err(PolyError::NoVariable(elim_name.clone()));
    }
    let dim = m + n;
    let zero = IntPolynomial::zero(&other_name);
    let mut mat = vec![vec![zero.clone(); dim]; dim];
    // n rows of f coefficients (descending), then m rows of g coefficients.
    for row in 0..n {
        for k in 0..=m {
            mat[row][row + k] = f.coeff_in(which, (m - k) as u32);
        }
    }
    for row in 0..m {
        for k in 0..=n {
            mat[n + row][row + k] = g.coeff_in(which, (n - k) as u32);
        }
    }
    // Fraction-free Bareiss elimination over Z[other]; every division is exact.
    let mut sign = 1i8;
    let mut prev = IntPolynomial::constant(&other_name, BigInt::one());
    for k in 0..dim - 1 {
        if mat[k][k].is_zero() {
            let Some(swap) = (k + 1..dim).find(|&i| !mat[i][k].is_zero()) else {
                return Ok(zero);
            };
            mat.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..dim {
            for j in k + 1..dim {
                let num = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = num
                    .exact_divide(&prev)
                    .expect("Bareiss pivot division is exact by construction");
            }
            mat[i][k] = zero.clone();
        }
        prev = mat[k][k].clone();
    }
    let det = mat[dim - 1][dim - 1].clone();
    Ok(if sign < 0 { -&det } else { det })
}

// ---------------------------------------------------------------------------
// MultiPolynomial
// ---------------------------------------------------------------------------

/// Sparse polynomial in an arbitrary list of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPolynomial {
    /// Names of the variables, fixing the exponent-vector order.
    pub vars: Vec<String>,
    /// Map from exponent vectors to nonzero coefficients.
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPolynomial {
    /// The zero polynomial in the given variables.
    pub fn zero(vars: &[&str]) -> Self {
        MultiPolynomial {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    /// A constant polynomial.
    pub fn constant(vars: &[&str], c: BigInt) -> Self {
        let mut poly = Self::zero(vars);
        poly.add_term(vec![0; poly.vars.len()], c);
        poly
    }

    /// The `index`-th variable as a polynomial.
    pub fn var(vars: &[&str], index: usize) -> Self {
        let mut poly = Self::zero(vars);
        let mut exps = vec![0; poly.vars.len()];
        exps[index] = 1;
        poly.add_term(exps, BigInt::one());
        poly
    }

    /// Adds a term in place, dropping it if it cancels.
    pub fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        assert_eq!(exps.len(), self.vars.len(), "exponent arity mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    /// True when the polynomial is identically zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluates at a rational point (one value per variable).
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len(), "point arity mismatch");
        let mut acc = Rational::zero();
        for (exps, c) in &self.terms {
            let mut term = Rational::from_integer(c.clone());
            for (x, &e) in point.iter().zip(exps.iter()) {
                if e > 0 {
                    term *= rational_pow(x, e);
                }
            }
            acc += term;
        }
        acc
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            let names: Vec<&str> = self.vars.iter().map(String::as_str).collect();
            return Self::zero(&names);
        }
        let mut out = self.clone();
        for coeff in out.terms.values_mut() {
            *coeff *= c;
        }
        out
    }
}

impl std::ops::Neg for &MultiPolynomial {
    type Output = MultiPolynomial;
    fn neg(self) -> MultiPolynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }
}

impl std::ops::Add for &MultiPolynomial {
    type Output = MultiPolynomial;
    fn add(self, rhs: &MultiPolynomial) -> MultiPolynomial {
        assert_eq!(self.vars, rhs.vars, "variable mismatch in add");
        let mut out = self.clone();
        for (exps, c) in &rhs.terms {
            out.add_term(exps.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &MultiPolynomial {
    type Output = MultiPolynomial;
    fn sub(self, rhs: &MultiPolynomial) -> MultiPolynomial {
        assert_eq!(self.vars, rhs.vars, "variable mismatch in sub");
        let mut out = self.clone();
        for (exps, c) in &rhs.terms {
            out.add_term(exps.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Mul for &MultiPolynomial {
    type Output = MultiPolynomial;
    fn mul(self, rhs: &MultiPolynomial) -> MultiPolynomial {
        assert_eq!(self.vars, rhs.vars, "variable mismatch in mul");
        let names: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let mut out = MultiPolynomial::zero(&names);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let exps: Vec<u32> = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                out.add_term(exps, c1 * c2);
            }
        }
        out
    }
}
