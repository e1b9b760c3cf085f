//! Real-root counting, isolation, refinement, and positivity certificates.
//!
//! Root counting uses Sturm sequences built from integer pseudo-remainders
//! (normalized to primitive polynomials by positive factors only), evaluated
//! exactly at rational points. Intervals are half-open `(lo, hi]`: a root at
//! `hi` is counted, a root at `lo` is not. Isolation and refinement proceed
//! by bisection, so every reported endpoint is an exact rational.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactpoly::{IntPolynomial, Rational};

/// Errors raised by root-counting operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootError {
    /// Every candidate nudge of an endpoint evaluated to a root.
    #[error("could not move an interval endpoint off a root")]
    EndpointRoot,
}

/// Half-open interval `(lo, hi]` with exact rational endpoints and `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalInterval {
    /// Excluded lower endpoint.
    pub lo: Rational,
    /// Included upper endpoint.
    pub hi: Rational,
}

impl RationalInterval {
    /// Builds an interval, panicking unless `lo < hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo < hi, "RationalInterval requires lo < hi");
        RationalInterval { lo, hi }
    }

    /// Interval width `hi - lo`.
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Midpoint `(lo + hi) / 2`.
    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    /// True when `x` lies in `(lo, hi]`.
    pub fn contains(&self, x: &Rational) -> bool {
        *x > self.lo && *x <= self.hi
    }
}

/// Record of a shifted-basis positivity check.
///
/// A `true` verdict certifies that the polynomial is strictly positive on
/// `[shift, +inf)` for the last shift applied: expanding around the shift
/// point produced only nonnegative coefficients with a positive constant
/// term.
#[derive(Clone, Debug, PartialEq)]
pub struct PositivityCertificate {
    /// Shift points applied, innermost first.
    pub shifts: Vec<Rational>,
    /// Coefficients of the fully shifted polynomial, ascending degree.
    pub terminal_coefficients: Vec<Rational>,
    /// Whether the expansion certifies strict positivity.
    pub verdict: bool,
}

/// Square-free part `f / gcd(f, f')`, primitive with positive leading
/// coefficient. The zero polynomial is returned unchanged.
pub fn squarefree_part(f: &IntPolynomial) -> IntPolynomial {
    if f.is_zero() {
        return f.clone();
    }
    if f.degree() == Some(0) {
        return IntPolynomial::constant(&f.var, BigInt::one());
    }
    let g = f.gcd(&f.derivative());
    let quotient = match f.exact_divide(&g) {
        Ok(q) => q,
        // The primitive gcd divides a scalar multiple of f; scale once.
        Err(_) => f
            .scale(g.leading().expect("nonzero gcd"))
            .exact_divide(&g)
            .expect("gcd divides a scalar multiple of f"),
    };
    quotient.primitive_positive()
}

/// Sturm chain of the square-free primitive part of `f`.
///
/// Successive elements are pseudo-remainders negated and scaled by positive
/// factors only, so sign variations match the classical rational chain.
pub fn sturm_chain(f: &IntPolynomial) -> Vec<IntPolynomial> {
    let p0 = squarefree_part(f);
    if p0.is_zero() || p0.degree() == Some(0) {
        return vec![p0];
    }
    let mut chain = vec![p0.clone(), p0.derivative().primitive_part()];
    loop {
        let a = &chain[chain.len() - 2];
        let b = &chain[chain.len() - 1];
        if b.is_zero() || a.degree() < b.degree() {
            break;
        }
        let delta = a.degree().unwrap() - b.degree().unwrap();
        let rem = a.pseudo_rem(b);
        if rem.is_zero() {
            break;
        }
        // pseudo_rem scaled `a` by lead(b)^(delta+1); flip the result when
        // that factor is negative so the net scale stays positive.
        let lead_negative = b.leading().unwrap().is_negative();
        let odd_power = (delta + 1) % 2 == 1;
        let next = if lead_negative && odd_power {
            rem
        } else {
            -&rem
        };
        chain.push(next.primitive_part());
    }
    chain
}

fn sign_variations(chain: &[IntPolynomial], x: &Rational) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for p in chain {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let positive = v.is_positive();
        if let Some(prev) = last {
            if prev != positive {
                count += 1;
            }
        }
        last = Some(positive);
    }
    count
}

/// Moves `point` into the interior of `(lo, hi)` away from a root of `sf`.
///
/// Tries displacements `width / 2^k` for `k = 64, 63, .., 1` (smallest first)
/// in the direction `dir` (+1 or -1), returning the first point where `sf`
/// does not vanish. Root counts stay exact as long as the root separation of
/// `sf` exceeds `width / 2^64`.
fn nudge(
    sf: &IntPolynomial,
    point: &Rational,
    width: &Rational,
    dir: i32,
) -> Result<Rational, RootError> {
    let two = Rational::from_integer(BigInt::from(2));
    let mut step = width.clone();
    let mut steps = Vec::with_capacity(64);
    for _ in 0..64 {
        step /= &two;
        steps.push(step.clone());
    }
    for delta in steps.into_iter().rev() {
        let candidate = if dir >= 0 {
            point + &delta
        } else {
            point - &delta
        };
        if !sf.eval(&candidate).is_zero() {
            return Ok(candidate);
        }
    }
    Err(RootError::EndpointRoot)
}

/// Number of distinct real roots of `f` in the half-open interval `(lo, hi]`.
///
/// Counts roots of the square-free part, so multiplicities do not inflate the
/// count. Panics on the zero polynomial.
pub fn sturm_count(f: &IntPolynomial, interval: &RationalInterval) -> Result<usize, RootError> {
    assert!(!f.is_zero(), "root count of the zero polynomial");
    let chain = sturm_chain(f);
    let sf = &chain[0];
    if sf.degree() == Some(0) {
        return Ok(0);
    }
    let width = interval.width();
    let lo = if sf.eval(&interval.lo).is_zero() {
        // A root exactly at lo is excluded from (lo, hi]; move inward.
        nudge(sf, &interval.lo, &width, 1)?
    } else {
        interval.lo.clone()
    };
    let mut bonus = 0;
    let hi = if sf.eval(&interval.hi).is_zero() {
        // A root exactly at hi belongs to (lo, hi]; count it, then move inward.
        bonus = 1;
        nudge(sf, &interval.hi, &width, -1)?
    } else {
        interval.hi.clone()
    };
    if lo >= hi {
        return Ok(bonus);
    }
    let at_lo = sign_variations(&chain, &lo);
    let at_hi = sign_variations(&chain, &hi);
    debug_assert!(at_lo >= at_hi, "sign variations must not increase");
    Ok(at_lo - at_hi + bonus)
}

/// Cauchy root bound: every complex root of `f` has absolute value at most
/// `1 + max |c_i| / |c_d|`. Panics on the zero polynomial.
pub fn cauchy_bound(f: &IntPolynomial) -> Rational {
    let d = f.degree().expect("Cauchy bound of the zero polynomial");
    let lead = f.leading().unwrap().abs();
    let mut max = BigInt::zero();
    for c in &f.coeffs[..d] {
        let a = c.abs();
        if a > max {
            max = a;
        }
    }
    Rational::one() + Rational::new(max, lead)
}

/// Isolates the distinct real roots of `f` inside `window`.
///
/// Returns disjoint half-open intervals in ascending order, each containing
/// exactly one root of `f`.
pub fn isolate_roots(
    f: &IntPolynomial,
    window: &RationalInterval,
) -> Result<Vec<RationalInterval>, RootError> {
    let sf = squarefree_part(f);
    if sf.is_zero() || sf.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut work = vec![window.clone()];
    while let Some(interval) = work.pop() {
        let count = sturm_count(&sf, &interval)?;
        match count {
            0 => {}
            1 => out.push(interval),
            _ => {
                let mid = interval.midpoint();
                let left = RationalInterval::new(interval.lo.clone(), mid.clone());
                let right = RationalInterval::new(mid, interval.hi.clone());
                work.push(right);
                work.push(left);
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// Shrinks an isolating interval around its single root until its width is at
/// most `target_width`, by Sturm-guided bisection.
pub fn refine_root(
    f: &IntPolynomial,
    isolated: &RationalInterval,
    target_width: &Rational,
) -> Result<RationalInterval, RootError> {
    assert!(target_width.is_positive(), "target width must be positive");
    let sf = squarefree_part(f);
    let mut lo = isolated.lo.clone();
    let mut hi = isolated.hi.clone();
    let two = Rational::from_integer(BigInt::from(2));
    while &hi - &lo > *target_width {
        let mid = (&lo + &hi) / &two;
        let left = RationalInterval::new(lo.clone(), mid.clone());
        if sturm_count(&sf, &left)? >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(RationalInterval::new(lo, hi))
}

/// Counts the strictly positive real roots of `f`, using the Cauchy bound as
/// the upper end of the window `(0, bound]`.
pub fn count_positive_roots(f: &IntPolynomial) -> Result<usize, RootError> {
    assert!(!f.is_zero(), "root count of the zero polynomial");
    if f.degree() == Some(0) {
        return Ok(0);
    }
    let window = RationalInterval::new(Rational::zero(), cauchy_bound(f));
    sturm_count(f, &window)
}

/// Attempts to certify `f(x) > 0` for all `x >= from` by expanding `f` around
/// `from` and checking for nonnegative coefficients.
///
/// The verdict is `true` when every coefficient of `f(x + from)` is
/// nonnegative and the constant term (that is, `f(from)`) is strictly
/// positive; the expansion coefficients are reported either way. A `false`
/// verdict is inconclusive, not a disproof.
pub fn certify_positive(f: &IntPolynomial, from: &Rational) -> PositivityCertificate {
    let shifted = f.taylor_shift(from);
    let coeffs = shifted.coeffs.clone();
    let verdict =
        !coeffs.is_empty() && coeffs.iter().all(|c| !c.is_negative()) && coeffs[0].is_positive();
    PositivityCertificate {
        shifts: vec![from.clone()],
        terminal_coefficients: coeffs,
        verdict,
    }
}
