//! Exact construction and certified solution of the invariant Einstein
//! equations on SO(2n)/U(p) x U(n-p).
//!
//! The Einstein condition for an invariant metric `(x1, x2, x3, x4)` reduces
//! to three polynomial equations. Solutions split into the Kähler–Einstein
//! metrics and two algebraic cases: metrics with `x1 = x3` (normalized to
//! `x1 = x3 = 1`), governed by a quartic in `x2`, and metrics with
//! `x1 = 1, x3 != 1`, where eliminating `x3` leaves a bivariate system whose
//! resultants factor completely into known linear factors (the Kähler
//! solutions in disguise) and a quartic cofactor with no positive roots.
//! Everything here is exact: root counts come from Sturm chains, root values
//! are rational enclosures refined by bisection, and every frozen polynomial
//! is cross-checked against the Ricci tensor by exact rational sampling in
//! the test suite.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactpoly::{
    resultant, BiPolynomial, BiVar, IntPolynomial, MultiPolynomial, PolyError, Rational,
};
use crate::flagspace::{
    dth_root_with_digits, kahler_einstein_metrics, ricci_components, scale_invariant, FlagError,
    FlagParams, Interval, Metric, MetricComponent,
};
use crate::realroots::{
    count_positive_roots, isolate_roots, refine_root, RationalInterval, RootError,
};

/// Errors raised while solving or verifying the Einstein equations.
#[derive(Debug, Error)]
pub enum EinsteinError {
    /// Invalid flag-manifold parameters or shapes.
    #[error(transparent)]
    Flag(#[from] FlagError),
    /// Polynomial arithmetic failure.
    #[error(transparent)]
    Poly(#[from] PolyError),
    /// Root isolation failure.
    #[error(transparent)]
    Root(#[from] RootError),
    /// An enclosure could not be refined to the requested certainty.
    #[error("could not certify sign or width: {0}")]
    UncertifiedSign(String),
    /// A resultant did not factor into the expected closed form.
    #[error("unexpected resultant factorization: {0}")]
    UnexpectedFactorization(String),
    /// A quartic cofactor has a positive root where none is admissible.
    #[error("unexpected positive root: {0}")]
    UnexpectedPositiveRoot(String),
    /// A rational solution branch failed its consistency checks.
    #[error("branch verification failed: {0}")]
    BranchMismatch(String),
    /// A solution count contradicts the expected classification.
    #[error("classification mismatch: {0}")]
    TheoremMismatch(String),
}

/// The eleven parameter pairs with four (rather than two) invariant Einstein
/// metrics that are not Kähler.
pub const EXCEPTIONAL_PAIRS: [(u32, u32); 11] = [
    (4, 2),
    (5, 2),
    (5, 3),
    (6, 2),
    (6, 3),
    (6, 4),
    (7, 3),
    (7, 4),
    (8, 4),
    (10, 5),
    (12, 6),
];

/// Expected number of non-Kähler Einstein metrics (up to isometry and scale).
pub fn expected_non_kahler_count(params: &FlagParams) -> usize {
    if EXCEPTIONAL_PAIRS.contains(&(params.n, params.p)) {
        4
    } else {
        2
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

// ---------------------------------------------------------------------------
// Case x1 = x3 = 1: a quartic in x2
// ---------------------------------------------------------------------------

/// The quartic in `x2` whose roots in the admissible window are exactly the
/// non-Kähler Einstein metrics with `x1 = x3 = 1`.
pub fn case_a_quartic(params: &FlagParams) -> IntPolynomial {
    let n = params.n_int();
    let p = params.p_int();
    let n2 = &n * &n;
    let n3 = &n2 * &n;
    let p2 = &p * &p;
    let p3 = &p2 * &p;
    let nm1 = &n - big(1);
    let nmp1 = &n - &p - big(1);
    let c4 = &nm1 * &n * (&n + &p - big(1));
    let c3 = big(-4) * &nm1 * (big(2) * &n2 - big(2) * &n - &p2 + &p);
    let c2 = big(2)
        * (big(12) * &n3 - big(11) * &n2 * &p - big(25) * &n2 - big(2) * &n * &p2
            + big(20) * &n * &p
            + big(14) * &n
            + big(2) * &p3
            - big(2) * &p2
            - big(6) * &p
            - big(2));
    let c1 = big(-8) * &nm1 * (big(4) * &n - big(3) * &p - big(1)) * &nmp1;
    let c0 = big(8) * &nmp1 * &nmp1 * (big(2) * &n - &p - big(1));
    IntPolynomial::new("x2", vec![c0, c1, c2, c3, c4])
}

/// The companion quartic in `x4` for the same family, equal to
/// [`case_a_quartic`] of the dual pair `(n, n-p)`.
pub fn case_a_dual_quartic(params: &FlagParams) -> IntPolynomial {
    let n = params.n_int();
    let p = params.p_int();
    let n2 = &n * &n;
    let n3 = &n2 * &n;
    let p2 = &p * &p;
    let p3 = &p2 * &p;
    let nm1 = &n - big(1);
    let pm1 = &p - big(1);
    let c4 = &nm1 * &n * (big(2) * &n - &p - big(1));
    let c3 = big(-4) * &nm1 * (&n2 + big(2) * &n * &p - &n - &p2 - &p);
    let c2 = big(2)
        * (&n3 + big(9) * &n2 * &p - big(7) * &n2 + big(4) * &n * &p2 - big(16) * &n * &p
            + big(8) * &n
            - big(2) * &p3
            - big(2) * &p2
            + big(6) * &p
            - big(2));
    let c1 = big(-8) * &nm1 * &pm1 * (&n + big(3) * &p - big(1));
    let c0 = big(8) * &pm1 * &pm1 * (&n + &p - big(1));
    IntPolynomial::new("x4", vec![c0, c1, c2, c3, c4])
}

/// The two Einstein equations of the `x1 = x3 = 1` family as polynomials in
/// `(x2, x4)`: the first is linear in `x4`, the second quadratic.
///
/// At a metric `(1, x2, 1, x4)` the Ricci differences satisfy
/// `r1 - r2 = -eq1 / (8(n-1) x2)` and `r3 - r4 = -eq2 / (8(n-1) x4)`,
/// while `r1 = r3` holds identically. Eliminating `x4` gives
/// `res(eq1, eq2) = 2 * case_a_quartic`, and eliminating `x2` gives
/// `2 * case_a_dual_quartic`.
pub fn case_a_equations(params: &FlagParams) -> (BiPolynomial, BiPolynomial) {
    let n = params.n_int();
    let p = params.p_int();
    let mut eq1 = BiPolynomial::zero("x2", "x4");
    eq1.add_term((2, 0), &n + &p - big(1));
    eq1.add_term((1, 0), big(-4) * (&n - big(1)));
    eq1.add_term((1, 1), &p - big(1));
    eq1.add_term((0, 0), big(4) * (&n - &p - big(1)));
    let mut eq2 = BiPolynomial::zero("x2", "x4");
    eq2.add_term((1, 1), &n - &p - big(1));
    eq2.add_term((0, 2), big(2) * &n - &p - big(1));
    eq2.add_term((0, 1), big(-4) * (&n - big(1)));
    eq2.add_term((0, 0), big(4) * (&p - big(1)));
    (eq1, eq2)
}

/// Open window `(2(n-p-1)/(n+p-1), 2)` that contains every admissible root
/// of [`case_a_quartic`].
pub fn case_a_window(params: &FlagParams) -> (Rational, Rational) {
    let n = params.n_rat();
    let p = params.p_rat();
    let one = Rational::one();
    let two = Rational::from_integer(big(2));
    let lo = &two * (&(&n - &p) - &one) / (&(&n + &p) - &one);
    (lo, two)
}

/// Solves the first family equation for `x4` given `x2`:
/// `x4 = (2 - x2)((n+p-1) x2 - 2(n-p-1)) / ((p-1) x2)`.
pub fn x4_from_x2(params: &FlagParams, x2: &Rational) -> Rational {
    assert!(!x2.is_zero());
    let n = params.n_rat();
    let p = params.p_rat();
    let one = Rational::one();
    let two = Rational::from_integer(big(2));
    let num = (&two - x2) * ((&(&n + &p) - &one) * x2 - &two * (&(&n - &p) - &one));
    num / ((&p - &one) * x2)
}

/// Solves the second family equation for `x2` given `x4`:
/// `x2 = (2 - x4)((2n-p-1) x4 - 2(p-1)) / ((n-p-1) x4)`.
pub fn x2_from_x4(params: &FlagParams, x4: &Rational) -> Rational {
    assert!(!x4.is_zero());
    let n = params.n_rat();
    let p = params.p_rat();
    let one = Rational::one();
    let two = Rational::from_integer(big(2));
    let num = (&two - x4)
        * ((&(Rational::from_integer(big(2)) * &n - &p) - &one) * x4 - &two * (&p - &one));
    num / ((&(&n - &p) - &one) * x4)
}

/// Interval version of [`x4_from_x2`] for a strictly positive enclosure.
pub fn x4_interval_from_x2(params: &FlagParams, x2: &Interval) -> Interval {
    assert!(x2.strictly_positive());
    let n = params.n_rat();
    let p = params.p_rat();
    let one = Rational::one();
    let two = Interval::point(Rational::from_integer(big(2)));
    let a = &two - x2;
    let b = &x2.scale(&(&(&n + &p) - &one))
        - &Interval::point(Rational::from_integer(big(2)) * (&(&n - &p) - &one));
    let num = &a * &b;
    let den = x2.scale(&(&p - &one));
    &num / &den
}

/// One certified solution of the `x1 = x3 = 1` family.
#[derive(Clone, Debug)]
pub struct CaseASolution {
    /// Enclosure of the `x2` component.
    pub x2: Interval,
    /// Enclosure of the `x4` component.
    pub x4: Interval,
    /// The metric `(1, x2, 1, x4)`.
    pub metric: Metric,
}

fn case_a_solution(x2: Interval, x4: Interval) -> CaseASolution {
    let metric = Metric {
        components: [
            MetricComponent::Exact(Rational::one()),
            MetricComponent::Enclosure(x2.clone()),
            MetricComponent::Exact(Rational::one()),
            MetricComponent::Enclosure(x4.clone()),
        ],
    };
    CaseASolution { x2, x4, metric }
}

/// Finds every root of [`case_a_quartic`] in the admissible window and
/// refines each, together with its mapped `x4` value, below `target_width`.
///
/// The quartic is strictly positive at both window endpoints, so the window
/// is half-open-safe and the returned solutions (sorted by increasing `x2`)
/// are exactly the non-Kähler Einstein metrics with `x1 = x3`.
pub fn solve_case_a(
    params: &FlagParams,
    target_width: &Rational,
) -> Result<Vec<CaseASolution>, EinsteinError> {
    assert!(target_width.is_positive());
    let h = case_a_quartic(params);
    let (lo, hi) = case_a_window(params);
    assert!(h.eval(&lo).is_positive() && h.eval(&hi).is_positive());
    let window = RationalInterval::new(lo, hi);
    let isolated = isolate_roots(&h, &window)?;
    let expected = isolated.len();
    let mut out = Vec::with_capacity(expected);
    for iv in isolated {
        let mut root = refine_root(&h, &iv, target_width)?;
        for _ in 0..256 {
            let x2 = Interval::from_root_interval(&root);
            let x4 = x4_interval_from_x2(params, &x2);
            if x4.strictly_positive() && x4.width() <= *target_width {
                out.push(case_a_solution(x2, x4));
                break;
            }
            let next_width = root.width() / Rational::from_integer(big(16));
            root = refine_root(&h, &root, &next_width)?;
        }
    }
    if out.len() != expected {
        return Err(EinsteinError::UncertifiedSign(format!(
            "failed to certify positivity of x4 enclosures at {params}"
        )));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Equal blocks n = 2p: closed-form factorization
// ---------------------------------------------------------------------------

/// For `n = 2p` the family quartic factors as `2 * f1 * f2` with
/// `f1 = (2p-1) x2^2 - 2(2p-1) x2 + 2(p-1)` and
/// `f2 = p(3p-1) x2^2 - 4p(2p-1) x2 + 2(p-1)(3p-1)`.
pub fn equal_blocks_factors(p: u32) -> (IntPolynomial, IntPolynomial) {
    assert!(p >= 2);
    let p = big(p as i64);
    let f1 = IntPolynomial::new(
        "x2",
        vec![
            big(2) * (&p - big(1)),
            big(-2) * (big(2) * &p - big(1)),
            big(2) * &p - big(1),
        ],
    );
    let f2 = IntPolynomial::new(
        "x2",
        vec![
            big(2) * (&p - big(1)) * (big(3) * &p - big(1)),
            big(-4) * &p * (big(2) * &p - big(1)),
            &p * (big(3) * &p - big(1)),
        ],
    );
    (f1, f2)
}

/// Encloses both roots of a quadratic with positive leading coefficient, or
/// returns nothing when the discriminant is negative. Exact rational roots
/// come back as point intervals; irrational ones as square-root enclosures on
/// the `10^-digits` grid.
fn quadratic_root_enclosures(f: &IntPolynomial, digits: u32) -> Vec<Interval> {
    assert_eq!(f.degree(), Some(2));
    let a = f.coeff(2);
    let b = f.coeff(1);
    let c = f.coeff(0);
    assert!(a.is_positive());
    let disc = &b * &b - big(4) * &a * &c;
    if disc.is_negative() {
        return Vec::new();
    }
    let sqrt_disc = {
        let s = disc.sqrt();
        if &s * &s == disc {
            Interval::point(Rational::from_integer(s))
        } else {
            dth_root_with_digits(&Interval::point(Rational::from_integer(disc)), 2, digits)
        }
    };
    let inv_2a = Rational::new(BigInt::one(), big(2) * &a);
    let minus_b = Interval::point(Rational::from_integer(-&b));
    let plus = (&minus_b + &sqrt_disc).scale(&inv_2a);
    let minus = (&minus_b - &sqrt_disc).scale(&inv_2a);
    vec![minus, plus]
}

/// Closed-form solutions of the `x1 = x3 = 1` family for `n = 2p`, from the
/// quadratic factorization: four metrics for `p <= 6`, two for `p >= 7`,
/// enclosed on the `10^-digits` grid and sorted by increasing `x2`.
pub fn closed_form_equal_blocks(p: u32, digits: u32) -> Vec<CaseASolution> {
    let params = FlagParams::new(2 * p, p).expect("equal blocks parameters are valid");
    let (f1, f2) = equal_blocks_factors(p);
    let mut solutions = Vec::new();
    for f in [&f1, &f2] {
        for x2 in quadratic_root_enclosures(f, digits) {
            assert!(x2.strictly_positive());
            let x4 = x4_interval_from_x2(&params, &x2);
            assert!(x4.strictly_positive());
            solutions.push(case_a_solution(x2, x4));
        }
    }
    solutions.sort_by(|a, b| a.x2.lo.cmp(&b.x2.lo));
    solutions
}

// ---------------------------------------------------------------------------
// Case x1 = 1, x3 eliminated: the bivariate system and its resultants
// ---------------------------------------------------------------------------

/// The `x1 = 1, x3 != x1` family after eliminating `x3`.
///
/// The equation `r1 = r3` is linear in `x3` and solves to
/// `x3 = x3_numerator / x3_denominator`. Substituting into the remaining two
/// Einstein equations and clearing denominators leaves the bivariate
/// polynomials `f` and `g` in `(x2, x4)`: with `x3` so chosen,
/// `r1 - r2 = -f / (8(n-1) x2 N D)` and `r3 - r4 = g / (8(n-1) x4 N D)`
/// where `N, D` are the numerator and denominator of `x3`.
#[derive(Clone, Debug)]
pub struct CaseBSystem {
    /// Cleared numerator of `r2 - r1`.
    pub f: BiPolynomial,
    /// Cleared numerator of `r3 - r4`.
    pub g: BiPolynomial,
    /// Numerator of the eliminated `x3`: `2(n-1) x2 x4 - (n-p-1) x4 - (p-1) x2`.
    pub x3_numerator: BiPolynomial,
    /// Denominator of the eliminated `x3`: `(n-p-1) x4 + (p-1) x2`.
    pub x3_denominator: BiPolynomial,
}

/// Builds the eliminated bivariate system for the `x1 = 1, x3 != x1` family.
pub fn case_b_system(params: &FlagParams) -> CaseBSystem {
    let n = params.n_int();
    let p = params.p_int();
    let n2 = &n * &n;
    let n3 = &n2 * &n;
    let p2 = &p * &p;
    let p3 = &p2 * &p;
    let nm1 = &n - big(1);
    let pm1 = &p - big(1);
    let q = &n - &p - big(1); // n - p - 1
    let npm1 = &n + &p - big(1); // n + p - 1
    let tnpm1 = big(2) * &n - &p - big(1); // 2n - p - 1

    let mut f = BiPolynomial::zero("x2", "x4");
    f.add_term((4, 0), &pm1 * &pm1 * &npm1);
    f.add_term(
        (3, 1),
        -(&pm1 * (big(2) * &n2 - big(4) * &n + &p2 + big(2) * &p + big(1))),
    );
    f.add_term(
        (2, 2),
        -(big(3) * &n3 + big(5) * &n2 * &p - big(9) * &n2 - &n * &p2 - big(6) * &n * &p
            + big(7) * &n
            + &p3
            - big(3) * &p2
            + big(3) * &p
            - big(1)),
    );
    f.add_term((2, 1), big(8) * &nm1 * &pm1 * &npm1);
    f.add_term((2, 0), big(-4) * &pm1 * &pm1 * &npm1);
    f.add_term((1, 3), &pm1 * &q * &q);
    f.add_term((1, 2), big(8) * &nm1 * &q * &npm1);
    f.add_term((1, 1), big(-8) * &pm1 * &q * &npm1);
    f.add_term((0, 2), big(-4) * &q * &q * &npm1);

    let mut g = BiPolynomial::zero("x2", "x4");
    g.add_term(
        (1, 3),
        &q * (big(3) * &n2 - big(2) * &n * &p - big(2) * &n + &p2 - big(2) * &p + big(1)),
    );
    g.add_term(
        (2, 2),
        big(8) * &n3 - big(6) * &n2 * &p - big(18) * &n2
            + big(2) * &n * &p2
            + big(12) * &n * &p
            + big(10) * &n
            - &p3
            - big(3) * &p2
            - big(3) * &p
            - big(1),
    );
    g.add_term((3, 1), -(&pm1 * &pm1 * &q));
    g.add_term((2, 1), big(-8) * &nm1 * &pm1 * &tnpm1);
    g.add_term((2, 0), big(4) * &pm1 * &pm1 * &tnpm1);
    g.add_term((1, 2), big(-8) * &nm1 * &q * &tnpm1);
    g.add_term((1, 1), big(8) * &pm1 * &q * &tnpm1);
    g.add_term((0, 4), -(&q * &q * &tnpm1));
    g.add_term((0, 2), big(4) * &q * &q * &tnpm1);

    let mut x3_numerator = BiPolynomial::zero("x2", "x4");
    x3_numerator.add_term((1, 1), big(2) * &nm1);
    x3_numerator.add_term((0, 1), -&q);
    x3_numerator.add_term((1, 0), -&pm1);
    let mut x3_denominator = BiPolynomial::zero("x2", "x4");
    x3_denominator.add_term((0, 1), q.clone());
    x3_denominator.add_term((1, 0), pm1.clone());

    CaseBSystem {
        f,
        g,
        x3_numerator,
        x3_denominator,
    }
}

/// The eliminated `x3` value at a rational point `(x2, x4)`.
pub fn x3_from_case_b(params: &FlagParams, x2: &Rational, x4: &Rational) -> Rational {
    let sys = case_b_system(params);
    sys.x3_numerator.eval(x2, x4) / sys.x3_denominator.eval(x2, x4)
}

/// Quartic cofactor of the resultant eliminating `x2`, a polynomial in `x4`
/// with no positive roots when `2p <= n`.
pub fn resultant_quartic_x4(params: &FlagParams) -> IntPolynomial {
    let n = params.n_int();
    let p = params.p_int();
    let n2 = &n * &n;
    let n3 = &n2 * &n;
    let n4 = &n3 * &n;
    let n5 = &n4 * &n;
    let p2 = &p * &p;
    let p3 = &p2 * &p;
    let p4 = &p3 * &p;
    let nm1 = &n - big(1);
    let pm1 = &p - big(1);
    let nm2p = &n - big(2) * &p;
    let npm1 = &n + &p - big(1);
    let tnpm1 = big(2) * &n - &p - big(1);
    let c4 = &nm1 * &n2 * (big(3) * &n - big(4)) * &tnpm1;
    let c3 = big(4)
        * &nm1
        * &n
        * &tnpm1
        * (&n2 - big(4) * &n * &p - big(2) * &p2 + big(8) * &p - big(2));
    let c2 = big(2)
        * (&n5 - big(19) * &n4 * &p + big(11) * &n4 + big(36) * &n3 * &p2 + big(18) * &n3 * &p
            - big(30) * &n3
            + big(22) * &n2 * &p3
            - big(130) * &n2 * &p2
            + big(54) * &n2 * &p
            + big(22) * &n2
            - big(16) * &n * &p4
            - big(4) * &n * &p3
            + big(108) * &n * &p2
            - big(68) * &n * &p
            - big(4) * &n
            + big(16) * &p4
            - big(16) * &p3
            - big(16) * &p2
            + big(16) * &p);
    let c1 = big(-8)
        * &pm1
        * &nm2p
        * &npm1
        * (&n2 - big(6) * &n * &p + big(2) * &n + big(2) * &p2 + big(4) * &p - big(2));
    let c0 = big(8) * &pm1 * &pm1 * &nm2p * &nm2p * &npm1;
    IntPolynomial::new("x4", vec![c0, c1, c2, c3, c4])
}

/// Quartic cofactor of the resultant eliminating `x4`, a polynomial in `x2`
/// with no positive roots when `2p >= n`; equals [`resultant_quartic_x4`] of
/// the dual pair.
pub fn resultant_quartic_x2(params: &FlagParams) -> IntPolynomial {
    let n = params.n_int();
    let p = params.p_int();
    let n2 = &n * &n;
    let n3 = &n2 * &n;
    let n4 = &n3 * &n;
    let n5 = &n4 * &n;
    let p2 = &p * &p;
    let p3 = &p2 * &p;
    let p4 = &p3 * &p;
    let nm1 = &n - big(1);
    let q = &n - &p - big(1);
    let nm2p = &n - big(2) * &p;
    let npm1 = &n + &p - big(1);
    let tnpm1 = big(2) * &n - &p - big(1);
    let c4 = &nm1 * &n2 * (big(3) * &n - big(4)) * &npm1;
    let c3 = big(-4)
        * &nm1
        * &n
        * &npm1
        * (big(5) * &n2 - big(8) * &n * &p - big(8) * &n + big(2) * &p2 + big(8) * &p + big(2));
    let c2 = big(2)
        * (big(24) * &n5 - big(55) * &n4 * &p - big(89) * &n4
            + big(6) * &n3 * &p2
            + big(190) * &n3 * &p
            + big(116) * &n3
            + big(42) * &n2 * &p3
            - big(46) * &n2 * &p2
            - big(222) * &n2 * &p
            - big(62) * &n2
            - big(16) * &n * &p4
            - big(60) * &n * &p3
            + big(60) * &n * &p2
            + big(100) * &n * &p
            + big(12) * &n
            + big(16) * &p4
            + big(16) * &p3
            - big(16) * &p2
            - big(16) * &p);
    let c1 = big(-8)
        * &nm2p
        * &q
        * &tnpm1
        * (big(3) * &n2 - big(2) * &n * &p - big(6) * &n - big(2) * &p2 + big(4) * &p + big(2));
    let c0 = big(8) * &nm2p * &nm2p * &q * &q * &tnpm1;
    IntPolynomial::new("x2", vec![c0, c1, c2, c3, c4])
}

/// Linear factors of the `x4` resultant; each vanishes at the `x4` value of
/// one rational solution branch.
pub fn branch_linears_x4(params: &FlagParams) -> [IntPolynomial; 4] {
    let n = params.n_int();
    let p = params.p_int();
    let pm1 = &p - big(1);
    let tnpm1 = big(2) * &n - &p - big(1);
    [
        IntPolynomial::new("x4", vec![big(-2) * &pm1, n.clone()]),
        IntPolynomial::new("x4", vec![big(-2) * &tnpm1, n.clone()]),
        IntPolynomial::new(
            "x4",
            vec![big(-2) * &tnpm1, big(3) * &n - big(2) * &p - big(2)],
        ),
        IntPolynomial::new("x4", vec![big(-2) * &pm1, &n + big(2) * &p - big(2)]),
    ]
}

/// Linear factors of the `x2` resultant; each vanishes at the `x2` value of
/// one rational solution branch.
pub fn branch_linears_x2(params: &FlagParams) -> [IntPolynomial; 4] {
    let n = params.n_int();
    let p = params.p_int();
    let q = &n - &p - big(1);
    let npm1 = &n + &p - big(1);
    [
        IntPolynomial::new("x2", vec![big(-2) * &npm1, n.clone()]),
        IntPolynomial::new("x2", vec![big(-2) * &q, n.clone()]),
        IntPolynomial::new("x2", vec![big(-2) * &q, big(3) * &n - big(2) * &p - big(2)]),
        IntPolynomial::new("x2", vec![big(-2) * &npm1, &n + big(2) * &p - big(2)]),
    ]
}

/// A rational solution of the eliminated system: a Kähler–Einstein metric in
/// the `x1 = 1` normalization.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchSolution {
    /// Branch label ("b1" .. "b4").
    pub label: String,
    /// Exact `x2` component.
    pub x2: Rational,
    /// Exact `x3` component.
    pub x3: Rational,
    /// Exact `x4` component.
    pub x4: Rational,
    /// Which Kähler–Einstein metric this branch is, up to scale and the
    /// `x1 <-> x3` relabeling.
    pub kahler_match: String,
    /// Positive roots of `gcd(f(., x4), g(., x4))` at the branch's `x4`
    /// (always 1: the branch's `x2`).
    pub gcd_roots_in_x2: usize,
    /// Positive roots of `gcd(f(x2, .), g(x2, .))` at the branch's `x2`
    /// (always 1: the branch's `x4`).
    pub gcd_roots_in_x4: usize,
}

fn kahler_formula_metrics(params: &FlagParams) -> (Metric, Metric) {
    let n = params.n_rat();
    let p = params.p_rat();
    let one = Rational::one();
    let two = Rational::from_integer(big(2));
    let three = Rational::from_integer(big(3));
    let g1 = Metric::exact([
        &n / &two,
        &(&n + &p) - &one,
        &(&n / &two + &p) - &one,
        &p - &one,
    ]);
    let g2 = Metric::exact([
        &n / &two,
        &(&n - &p) - &one,
        &(&three * &n / &two - &p) - &one,
        &(&two * &n - &p) - &one,
    ]);
    (g1, g2)
}

/// Constructs and verifies the four rational branches of the eliminated
/// system: each satisfies both bivariate equations, reproduces its `x3` from
/// the elimination formula, is exactly Einstein, and coincides with a scaled
/// (possibly `x1 <-> x3` relabeled) Kähler–Einstein metric.
///
/// Each branch also carries two slice certificates: freezing either
/// coordinate at the branch value, the gcd of the two sliced equations has
/// exactly one positive root, the branch value of the other coordinate. Since
/// the branch values exhaust the positive roots of the resultant linear
/// factors, this pins down every positive solution of the eliminated system
/// on whichever side the quartic cofactor is root-free.
pub fn case_b_branches(params: &FlagParams) -> Result<Vec<BranchSolution>, EinsteinError> {
    let sys = case_b_system(params);
    let n = params.n_rat();
    let p = params.p_rat();
    let one = Rational::one();
    let two = Rational::from_integer(big(2));
    let npm1 = &(&n + &p) - &one;
    let nmpm1 = &(&n - &p) - &one;
    let tnpm1 = &(&two * &n - &p) - &one;
    let den3 = &(Rational::from_integer(big(3)) * &n - &two * &p) - &two;
    let den4 = &(&n + &two * &p) - &two;
    let (g1, g2) = kahler_formula_metrics(params);
    let branches = [
        (
            "b1",
            &two * &npm1 / &n,
            (&n + &two * &p - &two) / &n,
            &two * (&p - &one) / &n,
            g1.scale(&(&two / &n)),
            "g1",
        ),
        (
            "b2",
            &two * &nmpm1 / &n,
            &den3 / &n,
            &two * &tnpm1 / &n,
            g2.scale(&(&two / &n)),
            "g2",
        ),
        (
            "b3",
            &two * &nmpm1 / &den3,
            &n / &den3,
            &two * &tnpm1 / &den3,
            g2.swap_13().scale(&(&two / &den3)),
            "g2 with x1 <-> x3",
        ),
        (
            "b4",
            &two * &npm1 / &den4,
            &n / &den4,
            &two * (&p - &one) / &den4,
            g1.swap_13().scale(&(&two / &den4)),
            "g1 with x1 <-> x3",
        ),
    ];
    let mut out = Vec::with_capacity(4);
    for (label, x2, x3, x4, expected_metric, kahler_match) in branches {
        if sys.f.eval(&x2, &x4) != Rational::zero() || sys.g.eval(&x2, &x4) != Rational::zero() {
            return Err(EinsteinError::BranchMismatch(format!(
                "branch {label} at {params} does not satisfy the eliminated system"
            )));
        }
        let x3_check = sys.x3_numerator.eval(&x2, &x4) / sys.x3_denominator.eval(&x2, &x4);
        if x3_check != x3 {
            return Err(EinsteinError::BranchMismatch(format!(
                "branch {label} at {params} disagrees with the elimination formula for x3"
            )));
        }
        let metric = Metric::exact([one.clone(), x2.clone(), x3.clone(), x4.clone()]);
        if einstein_residual(params, &metric) != Rational::zero() {
            return Err(EinsteinError::BranchMismatch(format!(
                "branch {label} at {params} is not an Einstein metric"
            )));
        }
        if metric != expected_metric {
            return Err(EinsteinError::BranchMismatch(format!(
                "branch {label} at {params} does not match {kahler_match}"
            )));
        }
        let slice = |which: BiVar, at: &Rational, root: &Rational| {
            let (fq, _) = sys.f.eval_var_rational(which, at).clear_denominators();
            let (gq, _) = sys.g.eval_var_rational(which, at).clear_denominators();
            let common = fq.gcd(&gq);
            if common.eval(root) != Rational::zero() {
                return Err(EinsteinError::BranchMismatch(format!(
                    "branch {label} at {params} is not a root of the slice gcd"
                )));
            }
            Ok(count_positive_roots(&common)?)
        };
        let gcd_roots_in_x2 = slice(BiVar::Second, &x4, &x2)?;
        let gcd_roots_in_x4 = slice(BiVar::First, &x2, &x4)?;
        if gcd_roots_in_x2 != 1 || gcd_roots_in_x4 != 1 {
            return Err(EinsteinError::BranchMismatch(format!(
                "branch {label} at {params}: slice gcds have {gcd_roots_in_x2} and \
                 {gcd_roots_in_x4} positive roots, expected exactly one each"
            )));
        }
        out.push(BranchSolution {
            label: label.to_string(),
            x2,
            x3,
            x4,
            kahler_match: kahler_match.to_string(),
            gcd_roots_in_x2,
            gcd_roots_in_x4,
        });
    }
    Ok(out)
}

/// Certified factorization report for the resultants of the eliminated
/// system.
#[derive(Clone, Debug)]
pub struct CaseBReport {
    /// The parameter pair.
    pub params: FlagParams,
    /// Sign relating the `x4` resultant to its closed-form factorization.
    pub sign_x4: i8,
    /// Sign relating the `x2` resultant to its closed-form factorization.
    pub sign_x2: i8,
    /// Quartic cofactor in `x4`.
    pub quartic_x4: IntPolynomial,
    /// Quartic cofactor in `x2`.
    pub quartic_x2: IntPolynomial,
    /// Number of positive roots of the `x4` cofactor (0 when `2p <= n`).
    pub positive_roots_x4: usize,
    /// Number of positive roots of the `x2` cofactor (0 when `2p >= n`).
    pub positive_roots_x2: usize,
    /// The four verified rational branches with their slice certificates.
    pub branches: Vec<BranchSolution>,
}

fn divide_out(
    res: &IntPolynomial,
    constant: BigInt,
    monomial_degree: usize,
    linears: &[IntPolynomial; 4],
    context: &str,
) -> Result<IntPolynomial, EinsteinError> {
    let var = &res.var;
    let stage = |what: &str| format!("{context}: not divisible by {what}");
    let mut q = res
        .exact_divide(&IntPolynomial::constant(var, constant))
        .map_err(|_| EinsteinError::UnexpectedFactorization(stage("the constant prefactor")))?;
    q = q
        .exact_divide(&IntPolynomial::monomial(
            var,
            BigInt::one(),
            monomial_degree,
        ))
        .map_err(|_| EinsteinError::UnexpectedFactorization(stage("the monomial prefactor")))?;
    for linear in linears {
        q = q
            .exact_divide(linear)
            .map_err(|_| EinsteinError::UnexpectedFactorization(stage("a branch linear")))?;
    }
    Ok(q)
}

/// Computes both resultants of the eliminated system, certifies that they
/// factor as `sign * 128 (n-1)^6 (p-1)^a (n-p-1)^b * x^8 * (four branch
/// linears) * quartic` with the frozen quartic cofactors, counts the
/// cofactors' positive roots exactly, and verifies the rational branches.
///
/// The quartic cofactor on the side matching the duality orientation is
/// certified root-free (the `x4` cofactor for `2p <= n`, the `x2` cofactor
/// for `2p >= n`; both at equality). Any positive common solution must then
/// come from a resultant linear factor on that side, and the branch slice
/// certificates show those are exactly the four Kähler branches.
pub fn case_b_report(params: &FlagParams) -> Result<CaseBReport, EinsteinError> {
    let sys = case_b_system(params);
    let n = params.n_int();
    let p = params.p_int();
    let nm1 = &n - big(1);
    let pm1 = &p - big(1);
    let q = &n - &p - big(1);
    let prefactor = |a: u32, b: u32| big(128) * nm1.pow(6) * pm1.pow(a) * q.pow(b);

    let res_x4 = resultant(&sys.f, &sys.g, BiVar::First)?;
    let expected_t = resultant_quartic_x4(params);
    let quotient_t = divide_out(
        &res_x4,
        prefactor(2, 4),
        8,
        &branch_linears_x4(params),
        "resultant in x4",
    )?;
    let sign_x4 = if quotient_t == expected_t {
        1
    } else if quotient_t == -&expected_t {
        -1
    } else {
        return Err(EinsteinError::UnexpectedFactorization(format!(
            "resultant in x4 at {params}: quartic cofactor mismatch"
        )));
    };

    let res_x2 = resultant(&sys.f, &sys.g, BiVar::Second)?;
    let expected_s = resultant_quartic_x2(params);
    let quotient_s = divide_out(
        &res_x2,
        prefactor(4, 2),
        8,
        &branch_linears_x2(params),
        "resultant in x2",
    )?;
    let sign_x2 = if quotient_s == expected_s {
        1
    } else if quotient_s == -&expected_s {
        -1
    } else {
        return Err(EinsteinError::UnexpectedFactorization(format!(
            "resultant in x2 at {params}: quartic cofactor mismatch"
        )));
    };

    let positive_roots_x4 = count_positive_roots(&expected_t)?;
    let positive_roots_x2 = count_positive_roots(&expected_s)?;
    if 2 * params.p <= params.n && positive_roots_x4 != 0 {
        return Err(EinsteinError::UnexpectedPositiveRoot(format!(
            "{params}: x4 cofactor has {positive_roots_x4} positive roots"
        )));
    }
    if 2 * params.p >= params.n && positive_roots_x2 != 0 {
        return Err(EinsteinError::UnexpectedPositiveRoot(format!(
            "{params}: x2 cofactor has {positive_roots_x2} positive roots"
        )));
    }
    let branches = case_b_branches(params)?;
    Ok(CaseBReport {
        params: *params,
        sign_x4,
        sign_x2,
        quartic_x4: expected_t,
        quartic_x2: expected_s,
        positive_roots_x4,
        positive_roots_x2,
        branches,
    })
}

// ---------------------------------------------------------------------------
// The full Einstein system and residuals
// ---------------------------------------------------------------------------

/// The invariant Einstein system as three polynomials in `(x1, x2, x3, x4)`.
///
/// With `r_i` the Ricci components, the three polynomials equal
/// `4(n-1) x1 x2 x3 x4 (r1 - r3)`, `8(n-1) x1 x2 x3 x4 (r1 - r2)` and
/// `8(n-1) x1 x2 x3 x4 (r3 - r4)`; their common positive zeros are exactly
/// the invariant Einstein metrics.
pub fn einstein_system(params: &FlagParams) -> [MultiPolynomial; 3] {
    let n = params.n_int();
    let p = params.p_int();
    let vars = ["x1", "x2", "x3", "x4"];
    let nm1 = &n - big(1);
    let pm1 = &p - big(1);
    let q = &n - &p - big(1);

    // First equation: (x1 - x3) * k with k linear in each variable.
    let mut k = MultiPolynomial::zero(&vars);
    k.add_term(vec![1, 1, 0, 0], pm1.clone());
    k.add_term(vec![0, 1, 1, 0], pm1.clone());
    k.add_term(vec![1, 0, 0, 1], q.clone());
    k.add_term(vec![0, 0, 1, 1], q.clone());
    k.add_term(vec![0, 1, 0, 1], big(-2) * &nm1);
    let mut x1_minus_x3 = MultiPolynomial::zero(&vars);
    x1_minus_x3.add_term(vec![1, 0, 0, 0], BigInt::one());
    x1_minus_x3.add_term(vec![0, 0, 1, 0], -BigInt::one());
    let s1 = &x1_minus_x3 * &k;

    let mut s2 = MultiPolynomial::zero(&vars);
    s2.add_term(vec![0, 1, 1, 1], big(4) * &nm1);
    s2.add_term(vec![1, 0, 1, 1], big(-4) * &nm1);
    s2.add_term(vec![2, 0, 0, 1], &n + &p - big(1));
    s2.add_term(vec![0, 2, 0, 1], -(&n + &p - big(1)));
    s2.add_term(vec![0, 0, 2, 1], -(&n - big(3) * &p - big(1)));
    s2.add_term(vec![2, 1, 0, 0], pm1.clone());
    s2.add_term(vec![0, 1, 2, 0], -&pm1);
    s2.add_term(vec![0, 1, 0, 2], -&pm1);

    let mut s3 = MultiPolynomial::zero(&vars);
    s3.add_term(vec![1, 1, 0, 1], big(4) * &nm1);
    s3.add_term(vec![1, 1, 1, 0], big(-4) * &nm1);
    s3.add_term(vec![0, 1, 2, 0], big(2) * &n - &p - big(1));
    s3.add_term(vec![0, 1, 0, 2], -(big(2) * &n - &p - big(1)));
    s3.add_term(vec![2, 1, 0, 0], big(2) * &n - big(3) * &p + big(1));
    s3.add_term(vec![0, 0, 2, 1], q.clone());
    s3.add_term(vec![2, 0, 0, 1], -&q);
    s3.add_term(vec![0, 2, 0, 1], -&q);

    [s1, s2, s3]
}

/// Upper bound for `max |r_i - r_j|` over the metric enclosure: zero exactly
/// when an exact metric is Einstein.
pub fn einstein_residual(params: &FlagParams, metric: &Metric) -> Rational {
    ricci_components(params, metric).spread()
}

// ---------------------------------------------------------------------------
// Vertex concavity of the family quartic
// ---------------------------------------------------------------------------

/// The inflection midpoint `(2n^2 - 2n - p^2 + p) / (n(n+p-1))` of the
/// family quartic, where its second derivative is minimal.
pub fn vertex_point(params: &FlagParams) -> Rational {
    let n = params.n_rat();
    let p = params.p_rat();
    let two = Rational::from_integer(big(2));
    let num = &(&two * &n * &n - &two * &n - &p * &p) + &p;
    let den = &n * &(&(&n + &p) - &Rational::one());
    num / den
}

/// Second derivative of the family quartic at [`vertex_point`]; negative
/// exactly when the quartic can have four window roots.
pub fn vertex_concavity(params: &FlagParams) -> Rational {
    let h = case_a_quartic(params);
    h.derivative().derivative().eval(&vertex_point(params))
}

/// The bivariate indicator `m(n, p)` with
/// `vertex_concavity = 4 m / (n (n+p-1))`.
pub fn vertex_concavity_indicator() -> MultiPolynomial {
    let vars = ["n", "p"];
    let mut m = MultiPolynomial::zero(&vars);
    m.add_term(vec![4, 1], big(1));
    m.add_term(vec![4, 0], big(-1));
    m.add_term(vec![3, 2], big(-1));
    m.add_term(vec![3, 1], big(-6));
    m.add_term(vec![3, 0], big(3));
    m.add_term(vec![2, 2], big(-4));
    m.add_term(vec![2, 1], big(12));
    m.add_term(vec![2, 0], big(-4));
    m.add_term(vec![1, 4], big(-1));
    m.add_term(vec![1, 3], big(2));
    m.add_term(vec![1, 2], big(5));
    m.add_term(vec![1, 1], big(-8));
    m.add_term(vec![1, 0], big(2));
    m.add_term(vec![0, 4], big(3));
    m.add_term(vec![0, 3], big(-6));
    m.add_term(vec![0, 2], big(3));
    m
}

/// The indicator as a univariate polynomial in `n` for fixed `p`.
pub fn vertex_concavity_indicator_in_n(p: u32) -> IntPolynomial {
    let m = vertex_concavity_indicator();
    let pv = big(p as i64);
    let mut coeffs: Vec<BigInt> = Vec::new();
    for (exps, c) in &m.terms {
        let (en, ep) = (exps[0] as usize, exps[1]);
        if coeffs.len() <= en {
            coeffs.resize(en + 1, BigInt::zero());
        }
        coeffs[en] += c * pv.pow(ep);
    }
    IntPolynomial::new("n", coeffs)
}

/// Coefficients `a0 .. a4` (polynomials in `p`) of the indicator expanded in
/// powers of `y = n - 2p - 5`: `m = sum a_k(p) y^k` with `a4 = p - 1`.
///
/// Each coefficient is positive for every `p >= 4` (certified by Taylor
/// shifts), which bounds the region where four window roots can occur.
pub fn indicator_offset_coefficients() -> [IntPolynomial; 5] {
    [
        IntPolynomial::from_i64("p", &[-340, -491, -309, -64, 22, 6]),
        IntPolynomial::from_i64("p", &[-313, -274, -26, 62, 19]),
        IntPolynomial::from_i64("p", &[-109, -30, 41, 18]),
        IntPolynomial::from_i64("p", &[-17, 6, 7]),
        IntPolynomial::from_i64("p", &[-1, 1]),
    ]
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

/// A Kähler–Einstein solution with its certified scale invariant.
#[derive(Clone, Debug)]
pub struct KahlerSolution {
    /// Metric label ("g1" or "g2").
    pub label: String,
    /// The exact metric.
    pub metric: Metric,
    /// Enclosure of the scale invariant `V^(1/d) S`.
    pub scale_invariant: Interval,
    /// The exact Einstein constant `1/(2(n-1))`.
    pub einstein_constant: Rational,
}

/// A certified non-Kähler solution in the `x1 = x3 = 1` normalization.
#[derive(Clone, Debug)]
pub struct NonKahlerSolution {
    /// Enclosure of `x2`.
    pub x2: Interval,
    /// Enclosure of `x4`.
    pub x4: Interval,
    /// The metric `(1, x2, 1, x4)`.
    pub metric: Metric,
    /// Enclosure of the scale invariant `V^(1/d) S`.
    pub scale_invariant: Interval,
    /// Certified upper bound for `max |r_i - r_j|` over the enclosure.
    pub residual_bound: Rational,
}

/// Every invariant Einstein metric on SO(2n)/U(p) x U(n-p), up to isometry
/// and scale.
#[derive(Clone, Debug)]
pub struct SolutionSet {
    /// The parameter pair.
    pub params: FlagParams,
    /// The Kähler–Einstein metrics (two, or one when n = 2p).
    pub kahler: Vec<KahlerSolution>,
    /// The non-Kähler metrics, sorted by increasing `x2`.
    pub non_kahler: Vec<NonKahlerSolution>,
}

/// Solves the Einstein equations at the given parameters: exact Kähler
/// metrics plus certified enclosures of every non-Kähler solution, each
/// refined below `target_width`.
pub fn classify(
    params: &FlagParams,
    target_width: &Rational,
) -> Result<SolutionSet, EinsteinError> {
    let mut kahler = Vec::new();
    for (label, metric) in kahler_einstein_metrics(params) {
        let ricci = ricci_components(params, &metric);
        let constant = ricci.r[0].lo.clone();
        for r in &ricci.r {
            assert!(
                r.is_point() && r.lo == constant,
                "Kähler metric must be Einstein"
            );
        }
        let scale = scale_invariant(params, &metric);
        kahler.push(KahlerSolution {
            label,
            metric,
            scale_invariant: scale,
            einstein_constant: constant,
        });
    }
    let mut non_kahler = Vec::new();
    for sol in solve_case_a(params, target_width)? {
        let scale = scale_invariant(params, &sol.metric);
        let residual = einstein_residual(params, &sol.metric);
        non_kahler.push(NonKahlerSolution {
            x2: sol.x2,
            x4: sol.x4,
            metric: sol.metric,
            scale_invariant: scale,
            residual_bound: residual,
        });
    }
    Ok(SolutionSet {
        params: *params,
        kahler,
        non_kahler,
    })
}

// ---------------------------------------------------------------------------
// Full verification
// ---------------------------------------------------------------------------

/// Summary of a verified parameter pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremCheck {
    /// The parameter pair.
    pub params: FlagParams,
    /// Whether the pair is one of the eleven exceptional ones.
    pub exceptional: bool,
    /// Number of Kähler–Einstein metrics.
    pub kahler_count: usize,
    /// Expected number of non-Kähler Einstein metrics.
    pub expected_non_kahler: usize,
    /// Number found by certified root isolation.
    pub found_non_kahler: usize,
    /// Positive-root counts of the two resultant cofactors (the first is 0
    /// when `2p <= n`, the second when `2p >= n`).
    pub cofactor_positive_roots: (usize, usize),
}

/// Verifies the full classification at one parameter pair: the certified
/// count of `x1 = x3` solutions matches the expected count, and the
/// eliminated system contributes no solutions beyond the Kähler branches.
pub fn verify_pair(
    params: &FlagParams,
    target_width: &Rational,
) -> Result<TheoremCheck, EinsteinError> {
    let solutions = solve_case_a(params, target_width)?;
    let expected = expected_non_kahler_count(params);
    if solutions.len() != expected {
        return Err(EinsteinError::TheoremMismatch(format!(
            "{params}: found {} non-Kähler solutions, expected {expected}",
            solutions.len()
        )));
    }
    let report = case_b_report(params)?;
    Ok(TheoremCheck {
        params: *params,
        exceptional: expected == 4,
        kahler_count: kahler_einstein_metrics(params).len(),
        expected_non_kahler: expected,
        found_non_kahler: solutions.len(),
        cofactor_positive_roots: (report.positive_roots_x4, report.positive_roots_x2),
    })
}

/// All valid parameter pairs with `n <= n_max`.
pub fn parameter_pairs(n_max: u32) -> Vec<FlagParams> {
    let mut pairs = Vec::new();
    for n in 4..=n_max {
        for p in 2..=n - 2 {
            pairs.push(FlagParams::new(n, p).expect("pair in range"));
        }
    }
    pairs
}

/// Runs [`verify_pair`] over every pair with `n <= n_max`, in parallel.
pub fn verify_main_theorem(
    n_max: u32,
    target_width: &Rational,
) -> Result<Vec<TheoremCheck>, EinsteinError> {
    let mut checks: Vec<TheoremCheck> = parameter_pairs(n_max)
        .par_iter()
        .map(|pr| verify_pair(pr, target_width))
        .collect::<Result<_, _>>()?;
    checks.sort_by_key(|c| (c.params.n, c.params.p));
    Ok(checks)
}
