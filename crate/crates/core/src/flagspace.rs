//! Geometry of the flag manifold SO(2n)/U(p) x U(n-p).
//!
//! The isotropy representation splits into four irreducible summands, so an
//! invariant metric is a 4-tuple of positive numbers `(x1, x2, x3, x4)`. This
//! module computes the summand dimensions and the two nonzero triple
//! constants, the Ricci components of an invariant metric, its scalar
//! curvature, and the scale-invariant quantity `V^(1/d) * S`. Metric
//! components are exact rationals or certified rational enclosures; all
//! curvature arithmetic goes through closed interval arithmetic with exact
//! rational endpoints, so exact inputs stay exact (point intervals) and
//! enclosures stay certified.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::exactpoly::{decimal_round_half_even, decimal_truncate, rational_pow, Rational};
use crate::realroots::RationalInterval;

/// Errors raised by flag-manifold computations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlagError {
    /// The pair (n, p) does not define a flag manifold in range: requires
    /// `n >= 4` and `2 <= p <= n - 2`.
    #[error("invalid parameters (n, p) = ({n}, {p}): need n >= 4 and 2 <= p <= n - 2")]
    InvalidParams {
        /// Requested n.
        n: u32,
        /// Requested p.
        p: u32,
    },
    /// Mismatched lengths or out-of-range indices in a curvature request.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Parameters (n, p) of the flag manifold SO(2n)/U(p) x U(n-p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlagParams {
    /// Half-rank parameter of SO(2n).
    pub n: u32,
    /// Block size of the first unitary factor.
    pub p: u32,
}

impl FlagParams {
    /// Validates and builds the parameter pair.
    pub fn new(n: u32, p: u32) -> Result<Self, FlagError> {
        if n >= 4 && p >= 2 && p + 2 <= n {
            Ok(FlagParams { n, p })
        } else {
            Err(FlagError::InvalidParams { n, p })
        }
    }

    /// The dual pair `(n, n - p)`, which defines an isometric manifold.
    pub fn dual(&self) -> FlagParams {
        FlagParams {
            n: self.n,
            p: self.n - self.p,
        }
    }

    /// n as a big integer.
    pub fn n_int(&self) -> BigInt {
        BigInt::from(self.n)
    }

    /// p as a big integer.
    pub fn p_int(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// n as a rational.
    pub fn n_rat(&self) -> Rational {
        Rational::from_integer(self.n_int())
    }

    /// p as a rational.
    pub fn p_rat(&self) -> Rational {
        Rational::from_integer(self.p_int())
    }
}

impl std::fmt::Display for FlagParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.n, self.p)
    }
}

/// Dimensions and triple constants of the four isotropy summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyData {
    /// Dimension of the first summand: `2p(n-p)`.
    pub d1: BigInt,
    /// Dimension of the second summand: `(n-p)(n-p-1)`.
    pub d2: BigInt,
    /// Dimension of the third summand: `2p(n-p)`.
    pub d3: BigInt,
    /// Dimension of the fourth summand: `p(p-1)`.
    pub d4: BigInt,
    /// Triple constant [123] = `p(n-p)(n-p-1) / (2(n-1))`.
    pub c123: Rational,
    /// Triple constant [134] = `p(p-1)(n-p) / (2(n-1))`.
    pub c134: Rational,
    /// Total dimension `d = d1 + d2 + d3 + d4` of the manifold.
    pub total_dimension: BigInt,
}

/// Computes the isotropy dimensions and the two nonzero triple constants.
pub fn isotropy_data(params: &FlagParams) -> IsotropyData {
    let n = params.n_int();
    let p = params.p_int();
    let q = &n - &p; // n - p
    let one = BigInt::one();
    let d1 = BigInt::from(2) * &p * &q;
    let d2 = &q * (&q - &one);
    let d3 = d1.clone();
    let d4 = &p * (&p - &one);
    let two_n_minus_2 = BigInt::from(2) * (&n - &one);
    let c123 = Rational::new(&p * &q * (&q - &one), two_n_minus_2.clone());
    let c134 = Rational::new(&p * (&p - &one) * &q, two_n_minus_2);
    let total_dimension = &d1 + &d2 + &d3 + &d4;
    IsotropyData {
        d1,
        d2,
        d3,
        d4,
        c123,
        c134,
        total_dimension,
    }
}

// ---------------------------------------------------------------------------
// Interval arithmetic
// ---------------------------------------------------------------------------

/// Closed interval `[lo, hi]` with exact rational endpoints (`lo <= hi`).
///
/// A point interval (`lo == hi`) represents an exact value; arithmetic on
/// point intervals is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    /// Lower endpoint.
    pub lo: Rational,
    /// Upper endpoint.
    pub hi: Rational,
}

impl Interval {
    /// Builds an interval, panicking unless `lo <= hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "Interval requires lo <= hi");
        Interval { lo, hi }
    }

    /// The point interval `[r, r]`.
    pub fn point(r: Rational) -> Self {
        Interval {
            lo: r.clone(),
            hi: r,
        }
    }

    /// Closed hull of a half-open root interval.
    pub fn from_root_interval(iv: &RationalInterval) -> Self {
        Interval {
            lo: iv.lo.clone(),
            hi: iv.hi.clone(),
        }
    }

    /// Width `hi - lo`.
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Midpoint `(lo + hi) / 2`.
    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    /// True when the interval is a single point.
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// True when every element is strictly positive.
    pub fn strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// True when `x` lies in `[lo, hi]`.
    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    /// True when the intervals share at least one point.
    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Reciprocal; panics when the interval contains zero.
    pub fn recip(&self) -> Interval {
        assert!(
            self.lo.is_positive() || self.hi.is_negative(),
            "reciprocal of an interval containing zero"
        );
        Interval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        }
    }

    /// Multiplies by an exact rational scalar.
    pub fn scale(&self, c: &Rational) -> Interval {
        if c.is_negative() {
            Interval {
                lo: &self.hi * c,
                hi: &self.lo * c,
            }
        } else {
            Interval {
                lo: &self.lo * c,
                hi: &self.hi * c,
            }
        }
    }

    /// `self^exp` for a strictly positive interval.
    pub fn pos_pow(&self, exp: u32) -> Interval {
        assert!(
            self.strictly_positive(),
            "pos_pow requires a positive interval"
        );
        Interval {
            lo: rational_pow(&self.lo, exp),
            hi: rational_pow(&self.hi, exp),
        }
    }

    /// Half-even rounded decimal with `places` fractional digits, or `None`
    /// when the endpoints round differently.
    pub fn round_decimals(&self, places: u32) -> Option<String> {
        let lo = decimal_round_half_even(&self.lo, places);
        let hi = decimal_round_half_even(&self.hi, places);
        (lo == hi).then_some(lo)
    }

    /// Truncated decimal with `places` fractional digits, or `None` when the
    /// endpoints truncate differently.
    pub fn trunc_decimals(&self, places: u32) -> Option<String> {
        let lo = decimal_truncate(&self.lo, places);
        let hi = decimal_truncate(&self.hi, places);
        (lo == hi).then_some(lo)
    }
}

/// Evaluates `compute` at increasing enclosure precision until the rounded
/// decimal is decided; panics if four refinements never settle it.
pub fn decided_round_decimals(compute: impl Fn(u32) -> Interval, places: u32) -> String {
    for digits in [12u32, 18, 24, 32] {
        if let Some(s) = compute(digits).round_decimals(places) {
            return s;
        }
    }
    panic!("enclosure straddles a rounding boundary at every precision");
}

impl std::ops::Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }
}

impl std::ops::Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl std::ops::Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl std::ops::Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let candidates = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        Interval { lo, hi }
    }
}

impl std::ops::Div for &Interval {
    type Output = Interval;
    fn div(self, rhs: &Interval) -> Interval {
        self * &rhs.recip()
    }
}

/// Certified enclosure of the d-th root of a strictly positive interval.
///
/// Endpoints land on the grid `k / 10^9`, computed by integer d-th roots of
/// scaled numerators, so the result widens the exact root interval by at most
/// `2e-9`.
pub fn dth_root(v: &Interval, d: u32) -> Interval {
    dth_root_with_digits(v, d, 9)
}

/// [`dth_root`] with a caller-chosen decimal grid: endpoints land on
/// `k / 10^digits`, giving at most `2 * 10^-digits` of added width.
pub fn dth_root_with_digits(v: &Interval, d: u32, digits: u32) -> Interval {
    assert!(
        v.strictly_positive(),
        "dth_root requires a positive interval"
    );
    assert!(d >= 1);
    let scale = BigInt::from(10).pow(digits);
    let big_scale = BigInt::from(10).pow(digits * d);
    // Lower endpoint: floor((lo * 10^(9d))^(1/d)) / 10^9. All quantities are
    // positive, so truncating division is floor division.
    let t_lo = (v.lo.numer() * &big_scale) / v.lo.denom();
    let root_lo = t_lo.nth_root(d);
    // Upper endpoint: (floor(ceil(hi * 10^(9d))^(1/d)) + 1) / 10^9.
    let t_hi = (v.hi.numer() * &big_scale + v.hi.denom() - BigInt::one()) / v.hi.denom();
    let root_hi = t_hi.nth_root(d) + BigInt::one();
    Interval::new(
        Rational::new(root_lo, scale.clone()),
        Rational::new(root_hi, scale),
    )
}

// ---------------------------------------------------------------------------
// Metrics and curvature
// ---------------------------------------------------------------------------

/// One component of an invariant metric: exact or a certified enclosure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricComponent {
    /// Exactly known rational value.
    Exact(Rational),
    /// Certified enclosure of an algebraic value.
    Enclosure(Interval),
}

impl MetricComponent {
    /// Views the component as a (possibly point) interval.
    pub fn interval(&self) -> Interval {
        match self {
            MetricComponent::Exact(r) => Interval::point(r.clone()),
            MetricComponent::Enclosure(iv) => iv.clone(),
        }
    }

    /// The exact value, if the component is exact.
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            MetricComponent::Exact(r) => Some(r),
            MetricComponent::Enclosure(_) => None,
        }
    }
}

/// Invariant metric `(x1, x2, x3, x4)` on the four isotropy summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    /// The four positive components.
    pub components: [MetricComponent; 4],
}

impl Metric {
    /// Builds a metric from exact rational components.
    pub fn exact(values: [Rational; 4]) -> Self {
        Metric {
            components: values.map(MetricComponent::Exact),
        }
    }

    /// Builds a metric from machine-integer components (tests, examples).
    pub fn from_i64(values: [i64; 4]) -> Self {
        Metric::exact(values.map(|v| Rational::from_integer(BigInt::from(v))))
    }

    /// The four components as intervals.
    pub fn intervals(&self) -> [Interval; 4] {
        [
            self.components[0].interval(),
            self.components[1].interval(),
            self.components[2].interval(),
            self.components[3].interval(),
        ]
    }

    /// True when every component is exact.
    pub fn is_exact(&self) -> bool {
        self.components.iter().all(|c| c.exact().is_some())
    }

    /// Scales every component by a positive rational.
    pub fn scale(&self, c: &Rational) -> Metric {
        assert!(c.is_positive(), "metric scaling requires a positive factor");
        let scale_one = |mc: &MetricComponent| match mc {
            MetricComponent::Exact(r) => MetricComponent::Exact(r * c),
            MetricComponent::Enclosure(iv) => MetricComponent::Enclosure(iv.scale(c)),
        };
        Metric {
            components: [
                scale_one(&self.components[0]),
                scale_one(&self.components[1]),
                scale_one(&self.components[2]),
                scale_one(&self.components[3]),
            ],
        }
    }

    /// Swaps the second and fourth components (the duality permutation).
    pub fn swap_24(&self) -> Metric {
        let c = &self.components;
        Metric {
            components: [c[0].clone(), c[3].clone(), c[2].clone(), c[1].clone()],
        }
    }

    /// Swaps the first and third components (an equal-dimension relabeling).
    pub fn swap_13(&self) -> Metric {
        let c = &self.components;
        Metric {
            components: [c[2].clone(), c[1].clone(), c[0].clone(), c[3].clone()],
        }
    }
}

/// Enclosures of the four Ricci components of an invariant metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RicciComponents {
    /// Enclosures of `r1, r2, r3, r4`.
    pub r: [Interval; 4],
}

impl RicciComponents {
    /// Upper bound for `max |r_i - r_j|`: the spread `max hi - min lo`.
    pub fn spread(&self) -> Rational {
        let mut max_hi = self.r[0].hi.clone();
        let mut min_lo = self.r[0].lo.clone();
        for iv in &self.r[1..] {
            if iv.hi > max_hi {
                max_hi = iv.hi.clone();
            }
            if iv.lo < min_lo {
                min_lo = iv.lo.clone();
            }
        }
        max_hi - min_lo
    }

    /// True when all four enclosures share a common point.
    pub fn mutually_intersect(&self) -> bool {
        for i in 0..4 {
            for j in i + 1..4 {
                if !self.r[i].intersects(&self.r[j]) {
                    return false;
                }
            }
        }
        true
    }
}

fn half() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2))
}

/// Ricci components of an invariant metric on SO(2n)/U(p) x U(n-p).
///
/// Uses the structured form with the two nonzero triples [123] and [134]:
/// for a summand k in a triple {i, j, k},
/// `r_k` gains `[ijk]/(2 d_k) * (x_k/(x_i x_j) - x_i/(x_k x_j) - x_j/(x_k x_i))`.
/// Panics unless every metric component is strictly positive.
pub fn ricci_components(params: &FlagParams, metric: &Metric) -> RicciComponents {
    let iso = isotropy_data(params);
    let [x1, x2, x3, x4] = metric.intervals();
    for x in [&x1, &x2, &x3, &x4] {
        assert!(x.strictly_positive(), "metric components must be positive");
    }
    let f123 =
        |d: &BigInt| -> Rational { &iso.c123 / (Rational::from_integer(d * BigInt::from(2))) };
    let f134 =
        |d: &BigInt| -> Rational { &iso.c134 / (Rational::from_integer(d * BigInt::from(2))) };
    let term = |a: &Interval, b: &Interval, c: &Interval| -> Interval {
        // a / (b c)
        a * &(b * c).recip()
    };
    let half_recip = |x: &Interval| x.recip().scale(&half());

    let t123_1 = &(&term(&x1, &x2, &x3) - &term(&x2, &x1, &x3)) - &term(&x3, &x1, &x2);
    let t123_2 = &(&term(&x2, &x1, &x3) - &term(&x1, &x2, &x3)) - &term(&x3, &x2, &x1);
    let t123_3 = &(&term(&x3, &x1, &x2) - &term(&x1, &x3, &x2)) - &term(&x2, &x3, &x1);
    let t134_1 = &(&term(&x1, &x3, &x4) - &term(&x3, &x1, &x4)) - &term(&x4, &x1, &x3);
    let t134_3 = &(&term(&x3, &x1, &x4) - &term(&x1, &x3, &x4)) - &term(&x4, &x3, &x1);
    let t134_4 = &(&term(&x4, &x1, &x3) - &term(&x1, &x4, &x3)) - &term(&x3, &x4, &x1);

    let r1 = &half_recip(&x1) + &(&t123_1.scale(&f123(&iso.d1)) + &t134_1.scale(&f134(&iso.d1)));
    let r2 = &half_recip(&x2) + &t123_2.scale(&f123(&iso.d2));
    let r3 = &half_recip(&x3) + &(&t123_3.scale(&f123(&iso.d3)) + &t134_3.scale(&f134(&iso.d3)));
    let r4 = &half_recip(&x4) + &t134_4.scale(&f134(&iso.d4));
    RicciComponents {
        r: [r1, r2, r3, r4],
    }
}

/// An unordered triple `{i, j, k}` (0-based indices) with its symmetric
/// bracket value.
#[derive(Clone, Debug, PartialEq)]
pub struct Triple {
    /// The three distinct summand indices.
    pub indices: [usize; 3],
    /// The symmetric bracket value [ijk].
    pub value: Rational,
}

/// Ricci components for a general isotropy decomposition.
///
/// `dims[k]` is the dimension of the k-th summand and `triples` lists the
/// nonzero symmetric brackets. For each summand k,
/// `r_k = 1/(2 x_k) + sum over triples {i,j,k}:
///        [ijk]/(2 d_k) * (x_k/(x_i x_j) - x_i/(x_k x_j) - x_j/(x_k x_i))`.
/// Errors with [`FlagError::DimensionMismatch`] when lengths disagree or an
/// index is out of range or repeated.
pub fn general_ricci(
    dims: &[BigInt],
    triples: &[Triple],
    metric: &[MetricComponent],
) -> Result<Vec<Interval>, FlagError> {
    if dims.len() != metric.len() {
        return Err(FlagError::DimensionMismatch(format!(
            "{} summand dimensions but {} metric components",
            dims.len(),
            metric.len()
        )));
    }
    let count = dims.len();
    for t in triples {
        let [i, j, k] = t.indices;
        if i >= count || j >= count || k >= count {
            return Err(FlagError::DimensionMismatch(format!(
                "triple index out of range: {:?} with {count} summands",
                t.indices
            )));
        }
        if i == j || j == k || i == k {
            return Err(FlagError::DimensionMismatch(format!(
                "triple indices must be distinct: {:?}",
                t.indices
            )));
        }
    }
    let x: Vec<Interval> = metric.iter().map(MetricComponent::interval).collect();
    for iv in &x {
        assert!(iv.strictly_positive(), "metric components must be positive");
    }
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let mut r = x[k].recip().scale(&half());
        for t in triples {
            if !t.indices.contains(&k) {
                continue;
            }
            let others: Vec<usize> = t.indices.iter().copied().filter(|&m| m != k).collect();
            let (i, j) = (others[0], others[1]);
            let factor = &t.value / Rational::from_integer(&dims[k] * BigInt::from(2));
            let combo = &(&(&x[k] / &(&x[i] * &x[j])) - &(&x[i] / &(&x[k] * &x[j])))
                - &(&x[j] / &(&x[k] * &x[i]));
            r = &r + &combo.scale(&factor);
        }
        out.push(r);
    }
    Ok(out)
}

/// Scalar curvature of an invariant metric.
///
/// `S = 1/2 sum d_i/x_i - [123]/2 * (x1/(x2 x3) + x2/(x1 x3) + x3/(x1 x2))
///  - [134]/2 * (x1/(x3 x4) + x3/(x1 x4) + x4/(x1 x3))`.
pub fn scalar_curvature(params: &FlagParams, metric: &Metric) -> Interval {
    let iso = isotropy_data(params);
    let [x1, x2, x3, x4] = metric.intervals();
    for x in [&x1, &x2, &x3, &x4] {
        assert!(x.strictly_positive(), "metric components must be positive");
    }
    let term = |a: &Interval, b: &Interval, c: &Interval| -> Interval { a * &(b * c).recip() };
    let dims_part = &(&x1.recip().scale(&Rational::from_integer(iso.d1.clone()))
        + &x2.recip().scale(&Rational::from_integer(iso.d2.clone())))
        + &(&x3.recip().scale(&Rational::from_integer(iso.d3.clone()))
            + &x4.recip().scale(&Rational::from_integer(iso.d4.clone())));
    let sum123 = &(&term(&x1, &x2, &x3) + &term(&x2, &x1, &x3)) + &term(&x3, &x1, &x2);
    let sum134 = &(&term(&x1, &x3, &x4) + &term(&x3, &x1, &x4)) + &term(&x4, &x1, &x3);
    let minus_half_c123 = -(&iso.c123 * half());
    let minus_half_c134 = -(&iso.c134 * half());
    &(&dims_part.scale(&half()) + &sum123.scale(&minus_half_c123)) + &sum134.scale(&minus_half_c134)
}

/// Volume monomial `V = prod x_i^(d_i)` of an invariant metric.
pub fn volume(params: &FlagParams, metric: &Metric) -> Interval {
    let iso = isotropy_data(params);
    let [x1, x2, x3, x4] = metric.intervals();
    let dims = [&iso.d1, &iso.d2, &iso.d3, &iso.d4];
    let xs = [&x1, &x2, &x3, &x4];
    let mut v = Interval::point(Rational::one());
    for (x, d) in xs.iter().zip(dims.iter()) {
        let exp = u32::try_from(*d).expect("summand dimension fits in u32");
        v = &v * &x.pos_pow(exp);
    }
    v
}

/// The normalized scale invariant `H = V^(1/d) * S`.
///
/// Homogeneous of degree zero in the metric, so invariant under common
/// rescaling; computed as a certified enclosure (exact inputs give an
/// enclosure whose width comes only from the d-th root grid, at most 2e-9).
pub fn scale_invariant(params: &FlagParams, metric: &Metric) -> Interval {
    scale_invariant_with_digits(params, metric, 9)
}

/// [`scale_invariant`] with the d-th root enclosed on the `10^-digits` grid.
pub fn scale_invariant_with_digits(params: &FlagParams, metric: &Metric, digits: u32) -> Interval {
    let iso = isotropy_data(params);
    let d = u32::try_from(&iso.total_dimension).expect("total dimension fits in u32");
    let v = volume(params, metric);
    let root = dth_root_with_digits(&v, d, digits);
    let s = scalar_curvature(params, metric);
    &root * &s
}

/// The Kähler–Einstein metrics of the flag manifold, labeled, in the scale
/// used throughout: for n != 2p the two metrics
/// `g1 = (n/2, n+p-1, n/2+p-1, p-1)` and `g2 = (n/2, n-p-1, 3n/2-p-1, 2n-p-1)`;
/// for n = 2p the single metric `(p, p-1, 2p-1, 3p-1)`.
pub fn kahler_einstein_metrics(params: &FlagParams) -> Vec<(String, Metric)> {
    let n = params.n_rat();
    let p = params.p_rat();
    let one = Rational::one();
    let two = Rational::from_integer(BigInt::from(2));
    if params.n == 2 * params.p {
        let metric = Metric::exact([
            p.clone(),
            &p - &one,
            &two * &p - &one,
            Rational::from_integer(BigInt::from(3)) * &p - &one,
        ]);
        return vec![("g1".to_string(), metric)];
    }
    let g1 = Metric::exact([
        &n / &two,
        &(&n + &p) - &one,
        &(&n / &two + &p) - &one,
        &p - &one,
    ]);
    let g2 = Metric::exact([
        &n / &two,
        &(&n - &p) - &one,
        &(Rational::from_integer(BigInt::from(3)) * &n / &two - &p) - &one,
        &(&two * &n - &p) - &one,
    ]);
    vec![("g1".to_string(), g1), ("g2".to_string(), g2)]
}

/// The duality map: `(n, p, metric)` to `(n, n-p, metric with x2 and x4
/// swapped)`, an isometry of flag manifolds.
pub fn dual_map(params: &FlagParams, metric: &Metric) -> (FlagParams, Metric) {
    (params.dual(), metric.swap_24())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, ratio};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn params(n: u32, p: u32) -> FlagParams {
        FlagParams::new(n, p).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(FlagParams::new(4, 2).is_ok());
        assert!(FlagParams::new(30, 28).is_ok());
        assert_eq!(
            FlagParams::new(4, 3),
            Err(FlagError::InvalidParams { n: 4, p: 3 })
        );
        assert_eq!(
            FlagParams::new(5, 1),
            Err(FlagError::InvalidParams { n: 5, p: 1 })
        );
        assert_eq!(
            FlagParams::new(3, 2),
            Err(FlagError::InvalidParams { n: 3, p: 2 })
        );
    }

    #[test]
    fn isotropy_data_examples() {
        let iso = isotropy_data(&params(7, 3));
        assert_eq!(iso.d1, BigInt::from(24));
        assert_eq!(iso.d2, BigInt::from(12));
        assert_eq!(iso.d3, BigInt::from(24));
        assert_eq!(iso.d4, BigInt::from(6));
        assert_eq!(iso.c123, rat(3));
        assert_eq!(iso.c134, rat(2));
        assert_eq!(iso.total_dimension, BigInt::from(66));

        let iso52 = isotropy_data(&params(5, 2));
        assert_eq!(iso52.c123, ratio(3, 2));
        assert_eq!(iso52.c134, ratio(3, 4));
        assert_eq!(iso52.total_dimension, BigInt::from(32));
    }

    #[test]
    fn total_dimension_identity() {
        // d = n(2n - 1) - p^2 - (n - p)^2 for every valid pair.
        for n in 4..=20u32 {
            for p in 2..=n - 2 {
                let iso = isotropy_data(&params(n, p));
                let nn = BigInt::from(n);
                let pp = BigInt::from(p);
                let expected =
                    &nn * (BigInt::from(2) * &nn - 1) - &pp * &pp - (&nn - &pp) * (&nn - &pp);
                assert_eq!(iso.total_dimension, expected);
            }
        }
    }

    #[test]
    fn kahler_metrics_are_einstein_with_known_constant() {
        // Both canonical Kähler metrics have Ricci = 1/(2(n-1)) * metric.
        for n in 4..=16u32 {
            for p in 2..=n - 2 {
                let pr = params(n, p);
                let expected = Rational::new(BigInt::one(), BigInt::from(2 * (n - 1)));
                for (label, metric) in kahler_einstein_metrics(&pr) {
                    let ricci = ricci_components(&pr, &metric);
                    for (k, r) in ricci.r.iter().enumerate() {
                        assert!(r.is_point(), "exact metric must give exact Ricci");
                        assert_eq!(
                            r.lo, expected,
                            "component {k} of {label} at (n,p)=({n},{p})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn kahler_metric_count() {
        assert_eq!(kahler_einstein_metrics(&params(8, 4)).len(), 1);
        assert_eq!(kahler_einstein_metrics(&params(8, 3)).len(), 2);
        assert_eq!(kahler_einstein_metrics(&params(8, 5)).len(), 2);
    }

    #[test]
    fn ricci_of_dual_metric_is_permuted() {
        let pr = params(9, 3);
        let metric = Metric::exact([rat(2), ratio(5, 3), ratio(7, 4), rat(1)]);
        let (dual_params, dual_metric) = dual_map(&pr, &metric);
        assert_eq!(dual_params, params(9, 6));
        let r = ricci_components(&pr, &metric);
        let rd = ricci_components(&dual_params, &dual_metric);
        assert_eq!(rd.r[0], r.r[0]);
        assert_eq!(rd.r[1], r.r[3]);
        assert_eq!(rd.r[2], r.r[2]);
        assert_eq!(rd.r[3], r.r[1]);
        // Scalar curvature and scale invariant are preserved exactly.
        assert_eq!(
            scalar_curvature(&pr, &metric),
            scalar_curvature(&dual_params, &dual_metric)
        );
        assert_eq!(
            scale_invariant(&pr, &metric),
            scale_invariant(&dual_params, &dual_metric)
        );
    }

    #[test]
    fn general_ricci_matches_specialized() {
        let pr = params(11, 4);
        let iso = isotropy_data(&pr);
        let metric = Metric::exact([ratio(3, 2), ratio(7, 5), rat(2), ratio(9, 8)]);
        let specialized = ricci_components(&pr, &metric);
        let dims = [
            iso.d1.clone(),
            iso.d2.clone(),
            iso.d3.clone(),
            iso.d4.clone(),
        ];
        let triples = [
            Triple {
                indices: [0, 1, 2],
                value: iso.c123.clone(),
            },
            Triple {
                indices: [0, 2, 3],
                value: iso.c134.clone(),
            },
        ];
        let general = general_ricci(&dims, &triples, &metric.components).unwrap();
        for k in 0..4 {
            assert_eq!(general[k], specialized.r[k], "component {k}");
        }
    }

    #[test]
    fn general_ricci_validates_shapes() {
        let dims = [BigInt::from(2), BigInt::from(3)];
        let metric = [
            MetricComponent::Exact(rat(1)),
            MetricComponent::Exact(rat(2)),
            MetricComponent::Exact(rat(1)),
        ];
        assert!(matches!(
            general_ricci(&dims, &[], &metric),
            Err(FlagError::DimensionMismatch(_))
        ));
        let metric2 = [
            MetricComponent::Exact(rat(1)),
            MetricComponent::Exact(rat(2)),
        ];
        let bad_triple = [Triple {
            indices: [0, 1, 2],
            value: rat(1),
        }];
        assert!(matches!(
            general_ricci(&dims, &bad_triple, &metric2),
            Err(FlagError::DimensionMismatch(_))
        ));
        let repeated = [Triple {
            indices: [0, 1, 1],
            value: rat(1),
        }];
        assert!(matches!(
            general_ricci(&dims, &repeated, &metric2),
            Err(FlagError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn scalar_curvature_is_weighted_ricci_trace() {
        // S = sum d_i r_i, exactly, for exact metrics.
        let pr = params(8, 3);
        let iso = isotropy_data(&pr);
        let metric = Metric::exact([ratio(5, 4), rat(2), ratio(3, 2), ratio(7, 6)]);
        let ricci = ricci_components(&pr, &metric);
        let s = scalar_curvature(&pr, &metric);
        assert!(s.is_point());
        let dims = [&iso.d1, &iso.d2, &iso.d3, &iso.d4];
        let mut trace = Rational::zero();
        for (r, d) in ricci.r.iter().zip(dims.iter()) {
            assert!(r.is_point());
            trace += &r.lo * Rational::from_integer((*d).clone());
        }
        assert_eq!(s.lo, trace);
    }

    #[test]
    fn dth_root_encloses_known_roots() {
        let eight = Interval::point(rat(8));
        let r = dth_root(&eight, 3);
        assert!(r.contains(&rat(2)));
        assert!(r.width() <= ratio(2, 1_000_000_000));
        // Non-perfect power: certify by powering the endpoints back.
        let v = Interval::point(ratio(22, 7));
        let root = dth_root(&v, 5);
        assert!(rational_pow(&root.lo, 5) <= ratio(22, 7));
        assert!(rational_pow(&root.hi, 5) >= ratio(22, 7));
        assert!(root.width() <= ratio(2, 1_000_000_000));
    }

    #[test]
    fn volume_and_scalar_homogeneity() {
        let pr = params(6, 2);
        let iso = isotropy_data(&pr);
        let metric = Metric::exact([rat(1), ratio(3, 2), rat(2), ratio(5, 6)]);
        let c = ratio(7, 3);
        let scaled = metric.scale(&c);
        // V(c g) = c^d V(g) and S(c g) = S(g) / c, exactly.
        let d = u32::try_from(&iso.total_dimension).unwrap();
        let v = volume(&pr, &metric);
        let vs = volume(&pr, &scaled);
        assert_eq!(vs.lo, &v.lo * rational_pow(&c, d));
        let s = scalar_curvature(&pr, &metric);
        let ss = scalar_curvature(&pr, &scaled);
        assert_eq!(ss.lo, &s.lo / &c);
        // The scale invariant enclosures of g and c*g must overlap.
        let h = scale_invariant(&pr, &metric);
        let hs = scale_invariant(&pr, &scaled);
        assert!(h.intersects(&hs));
        assert!(h.width() <= ratio(1, 10_000_000));
    }

    #[test]
    fn interval_arithmetic_basics() {
        let a = Interval::new(rat(-1), rat(2));
        let b = Interval::new(rat(3), rat(4));
        assert_eq!(&a + &b, Interval::new(rat(2), rat(6)));
        assert_eq!(&a - &b, Interval::new(rat(-5), rat(-1)));
        assert_eq!(&a * &b, Interval::new(rat(-4), rat(8)));
        assert_eq!(b.recip(), Interval::new(ratio(1, 4), ratio(1, 3)));
        assert_eq!(-&a, Interval::new(rat(-2), rat(1)));
        assert_eq!(a.scale(&rat(-2)), Interval::new(rat(-4), rat(2)));
    }

    #[test]
    fn interval_decimals_require_agreeing_endpoints() {
        let tight = Interval::new(ratio(12341, 10000), ratio(123411, 100000));
        assert_eq!(tight.round_decimals(4), Some("1.2341".to_string()));
        assert_eq!(tight.trunc_decimals(4), Some("1.2341".to_string()));
        let straddle = Interval::new(ratio(12344, 10000), ratio(12346, 10000));
        assert_eq!(straddle.round_decimals(4), None);
        assert_eq!(straddle.trunc_decimals(3), Some("1.234".to_string()));
        let decided = decided_round_decimals(
            |digits| {
                let w = Rational::new(BigInt::one(), BigInt::from(10u32).pow(digits));
                let lo = ratio(1, 3);
                Interval::new(lo.clone(), lo + w)
            },
            4,
        );
        assert_eq!(decided, "0.3333");
    }

    #[test]
    fn tighter_digits_shrink_scale_invariant() {
        let params = FlagParams::new(6, 2).unwrap();
        let (_, metric) = &kahler_einstein_metrics(&params)[0];
        let coarse = scale_invariant(&params, metric);
        let fine = scale_invariant_with_digits(&params, metric, 20);
        assert!(fine.width() < coarse.width());
        assert!(coarse.intersects(&fine));
        assert_eq!(fine.round_decimals(4), coarse.round_decimals(4));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ricci_scales_inversely(
            n in 4u32..12,
            poffset in 0u32..8,
            nums in [1i64..40, 1i64..40, 1i64..40, 1i64..40],
            dens in [1i64..12, 1i64..12, 1i64..12, 1i64..12],
            cn in 1i64..20,
            cd in 1i64..20,
        ) {
            let p = 2 + poffset % (n - 3);
            let pr = params(n, p);
            let metric = Metric::exact([
                ratio(nums[0], dens[0]),
                ratio(nums[1], dens[1]),
                ratio(nums[2], dens[2]),
                ratio(nums[3], dens[3]),
            ]);
            let c = ratio(cn, cd);
            let r = ricci_components(&pr, &metric);
            let rs = ricci_components(&pr, &metric.scale(&c));
            for k in 0..4 {
                prop_assert!(r.r[k].is_point());
                prop_assert_eq!(&rs.r[k].lo, &(&r.r[k].lo / &c));
            }
        }

        #[test]
        fn enclosures_contain_exact_values(
            n in 4u32..10,
            poffset in 0u32..6,
            nums in [1i64..30, 1i64..30, 1i64..30, 1i64..30],
            dens in [1i64..10, 1i64..10, 1i64..10, 1i64..10],
        ) {
            // Widen each exact component into an interval; the interval
            // Ricci must contain the exact point Ricci.
            let p = 2 + poffset % (n - 3);
            let pr = params(n, p);
            let values = [
                ratio(nums[0], dens[0]),
                ratio(nums[1], dens[1]),
                ratio(nums[2], dens[2]),
                ratio(nums[3], dens[3]),
            ];
            let exact = Metric::exact(values.clone());
            let eps = ratio(1, 1000);
            let widened = Metric {
                components: values
                    .clone()
                    .map(|v| MetricComponent::Enclosure(Interval::new(&v - &eps, &v + &eps))),
            };
            let re = ricci_components(&pr, &exact);
            let rw = ricci_components(&pr, &widened);
            for k in 0..4 {
                prop_assert!(rw.r[k].contains(&re.r[k].lo));
            }
            let se = scalar_curvature(&pr, &exact);
            let sw = scalar_curvature(&pr, &widened);
            prop_assert!(sw.contains(&se.lo));
        }
    }
}
