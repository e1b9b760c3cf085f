//! Release-gating acceptance checks, one test per criterion.
//!
//! Each numbered test prints a single pass/fail line under `cargo test
//! --test acceptance`, covering: the full classification sweep, the frozen
//! solution and scale-invariant tables, exactness of the Kähler–Einstein
//! metrics, the quartic duality identity, the resultant and positivity
//! certificates, the equal-block closed forms, residual bounds, and the
//! randomized property suites.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use flag_einstein::einstein::{
    case_a_dual_quartic, case_a_quartic, case_b_report, classify, closed_form_equal_blocks,
    indicator_offset_coefficients, parameter_pairs, solve_case_a, verify_main_theorem,
    vertex_concavity_indicator_in_n, CaseASolution, EXCEPTIONAL_PAIRS,
};
use flag_einstein::exactpoly::{rat, resultant, BiPolynomial, BiVar, IntPolynomial, Rational};
use flag_einstein::flagspace::{
    decided_round_decimals, kahler_einstein_metrics, ricci_components, scalar_curvature,
    scale_invariant_with_digits, FlagParams, Metric,
};
use flag_einstein::realroots::{certify_positive, count_positive_roots};

fn params(n: u32, p: u32) -> FlagParams {
    FlagParams::new(n, p).expect("valid parameters")
}

fn width(digits: u32) -> Rational {
    Rational::new(1.into(), BigInt::from(10u32).pow(digits))
}

/// Solutions in table order: ascending `x4` when `2p < n`, ascending `x2`
/// otherwise.
fn table_ordered(pr: &FlagParams, digits: u32) -> Vec<CaseASolution> {
    let mut sols = solve_case_a(pr, &width(digits)).expect("family solves");
    if 2 * pr.p < pr.n {
        sols.sort_by(|a, b| a.x4.lo.cmp(&b.x4.lo));
    }
    sols
}

#[test]
fn criterion_01_classification_counts_for_all_pairs_up_to_n_20() {
    let checks = verify_main_theorem(20, &width(8)).expect("sweep verifies");
    assert_eq!(checks.len(), 153);
    for c in &checks {
        let expected = if c.exceptional { 4 } else { 2 };
        assert_eq!(c.expected_non_kahler, expected, "{}", c.params);
        assert_eq!(c.found_non_kahler, expected, "{}", c.params);
    }
    let mut found: Vec<(u32, u32)> = checks
        .iter()
        .filter(|c| c.exceptional)
        .map(|c| (c.params.n, c.params.p))
        .collect();
    found.sort_unstable();
    let mut expected = EXCEPTIONAL_PAIRS.to_vec();
    expected.sort_unstable();
    assert_eq!(found, expected);
}

/// Frozen four-decimal reference digits for the non-Kähler solutions at the
/// six exceptional pairs with unequal blocks, as `(x2, x4)` per row. The
/// reference digits truncate rather than round in all but one entry, so a
/// reproduced value must match the truncation or the half-even rounding of
/// its certified enclosure (either way it is within 1e-4 of the true value).
const SOLUTION_TABLE: [(u32, u32, [[&str; 2]; 4]); 6] = [
    (
        7,
        4,
        [
            ["0.4661", "0.7256"],
            ["0.6614", "1.7636"],
            ["1.4144", "1.3999"],
            ["1.5722", "1.0631"],
        ],
    ),
    (
        7,
        3,
        [
            ["0.7256", "0.4661"],
            ["1.7636", "0.6614"],
            ["1.3999", "1.4144"],
            ["1.0631", "1.5722"],
        ],
    ),
    (
        6,
        4,
        [
            ["0.2680", "0.8876"],
            ["0.3631", "1.9057"],
            ["1.3782", "1.5645"],
            ["1.5461", "1.1658"],
        ],
    ),
    (
        6,
        2,
        [
            ["0.8876", "0.2680"],
            ["1.9057", "0.3631"],
            ["1.5645", "1.3782"],
            ["1.1658", "1.5461"],
        ],
    ),
    (
        5,
        3,
        [
            ["0.3241", "0.6954"],
            ["0.4361", "1.8876"],
            ["1.4331", "1.5883"],
            ["1.6922", "0.8952"],
        ],
    ),
    (
        5,
        2,
        [
            ["0.6954", "0.3241"],
            ["1.8876", "0.4361"],
            ["1.5883", "1.4331"],
            ["0.8952", "1.6922"],
        ],
    ),
];

/// Truncated and rounded 4-decimal strings for both coordinates of every
/// solution, refining until all of them are decided.
fn decided_coordinate_digits(pr: &FlagParams) -> Vec<[(String, String); 2]> {
    'digits: for digits in [12u32, 18, 24, 32] {
        let sols = table_ordered(pr, digits);
        let mut rows = Vec::new();
        for s in &sols {
            let mut row: Vec<(String, String)> = Vec::new();
            for iv in [&s.x2, &s.x4] {
                match (iv.trunc_decimals(4), iv.round_decimals(4)) {
                    (Some(t), Some(r)) => row.push((t, r)),
                    _ => continue 'digits,
                }
            }
            rows.push([row[0].clone(), row[1].clone()]);
        }
        return rows;
    }
    panic!("{pr}: coordinate enclosure straddles a decimal boundary at every precision");
}

#[test]
fn criterion_02_solution_table_reproduced_to_four_decimals() {
    for (n, p, expected_rows) in SOLUTION_TABLE {
        let pr = params(n, p);
        let rows = decided_coordinate_digits(&pr);
        assert_eq!(rows.len(), 4, "{pr}");
        for (i, (row, expected)) in rows.iter().zip(expected_rows).enumerate() {
            for (coord, ((trunc, round), digits)) in row.iter().zip(expected).enumerate() {
                assert!(
                    digits == trunc.as_str() || digits == round.as_str(),
                    "{pr} row {} coordinate {}: reference {digits}, computed {trunc} / {round}",
                    i + 1,
                    if coord == 0 { "x2" } else { "x4" },
                );
            }
        }
    }
}

/// Frozen four-decimal scale invariants for the same six pairs, rows g1..g4
/// in table order; dual pairs carry identical columns.
const INVARIANT_TABLE: [(u32, u32, [&str; 4]); 6] = [
    (7, 4, ["25.2814", "25.5264", "25.6020", "25.5943"]),
    (7, 3, ["25.2814", "25.5264", "25.6020", "25.5943"]),
    (6, 4, ["17.9698", "18.1243", "18.2540", "18.2446"]),
    (6, 2, ["17.9698", "18.1243", "18.2540", "18.2446"]),
    (5, 3, ["12.4373", "12.6088", "12.7050", "12.6700"]),
    (5, 2, ["12.4373", "12.6088", "12.7050", "12.6700"]),
];

fn invariant_column(pr: &FlagParams) -> [String; 4] {
    std::array::from_fn(|i| {
        decided_round_decimals(
            |digits| {
                let sols = table_ordered(pr, digits);
                scale_invariant_with_digits(pr, &sols[i].metric, digits)
            },
            4,
        )
    })
}

#[test]
fn criterion_03_scale_invariant_table_reproduced_to_four_decimals() {
    let columns: Vec<[String; 4]> = INVARIANT_TABLE
        .as_slice()
        .par_iter()
        .map(|&(n, p, _)| invariant_column(&params(n, p)))
        .collect();
    for ((n, p, expected), column) in INVARIANT_TABLE.iter().zip(&columns) {
        for (value, reference) in column.iter().zip(expected) {
            assert_eq!(value.as_str(), *reference, "({n}, {p})");
        }
    }
    // The dual pairs produce identical columns: the block swap is an isometry.
    for (a, b) in [(0usize, 1), (2, 3), (4, 5)] {
        assert_eq!(columns[a], columns[b]);
    }
}

#[test]
fn criterion_04_kahler_einstein_metrics_are_exactly_einstein_up_to_n_30() {
    for pr in parameter_pairs(30) {
        let constant = Rational::new(1.into(), BigInt::from(2 * (pr.n - 1)));
        let metrics = kahler_einstein_metrics(&pr);
        let expected_count = if pr.n == 2 * pr.p { 1 } else { 2 };
        assert_eq!(metrics.len(), expected_count, "{pr}");
        for (label, metric) in metrics {
            let ricci = ricci_components(&pr, &metric);
            for r in &ricci.r {
                assert!(r.is_point(), "{pr} {label}");
                assert_eq!(r.lo, constant, "{pr} {label}");
            }
        }
        if pr.n == 2 * pr.p {
            let p = i64::from(pr.p);
            let special = Metric::from_i64([p, p - 1, 2 * p - 1, 3 * p - 1]);
            let ricci = ricci_components(&pr, &special);
            for r in &ricci.r {
                assert!(r.is_point(), "{pr} special");
                assert_eq!(r.lo, constant, "{pr} special");
            }
        }
    }
}

#[test]
fn criterion_05_dual_quartic_identity_up_to_n_20() {
    for pr in parameter_pairs(20) {
        assert_eq!(
            case_a_dual_quartic(&pr),
            case_a_quartic(&pr.dual()).rename("x4"),
            "{pr}"
        );
    }
}

/// Thirty sample pairs for the elimination certificates: every pair with
/// n <= 9 plus nine larger ones spanning both orientations and the diagonal.
fn certificate_sample() -> Vec<(u32, u32)> {
    let mut pairs: Vec<(u32, u32)> = (4u32..=9)
        .flat_map(|n| (2..=n - 2).map(move |p| (n, p)))
        .collect();
    pairs.extend([
        (10, 5),
        (12, 6),
        (13, 5),
        (13, 8),
        (16, 3),
        (20, 9),
        (20, 11),
        (24, 2),
        (30, 15),
    ]);
    pairs
}

#[test]
fn criterion_06_resultant_certificates_on_thirty_pairs() {
    let sample = certificate_sample();
    assert_eq!(sample.len(), 30);
    for required in [(5, 2), (7, 3), (7, 4), (8, 4), (13, 5), (20, 9)] {
        assert!(sample.contains(&required));
    }
    sample.par_iter().for_each(|&(n, p)| {
        let pr = params(n, p);
        let report = case_b_report(&pr).expect("certificates verify");
        // Exact factorization happened with the recorded signs.
        assert_eq!(report.sign_x4, 1, "{pr}");
        assert_eq!(report.sign_x2, -1, "{pr}");
        // The cofactor on the duality side has no positive roots; the other
        // side has exactly two (none on either side for equal blocks).
        if 2 * p <= n {
            assert_eq!(report.positive_roots_x4, 0, "{pr}");
        } else {
            assert_eq!(report.positive_roots_x4, 2, "{pr}");
        }
        if 2 * p >= n {
            assert_eq!(report.positive_roots_x2, 0, "{pr}");
        } else {
            assert_eq!(report.positive_roots_x2, 2, "{pr}");
        }
        // Each linear branch recovers exactly one Kähler–Einstein metric.
        assert_eq!(report.branches.len(), 4, "{pr}");
        for b in &report.branches {
            assert!(b.kahler_match.starts_with('g'), "{pr} {}", b.label);
            assert_eq!(b.gcd_roots_in_x2, 1, "{pr} {}", b.label);
            assert_eq!(b.gcd_roots_in_x4, 1, "{pr} {}", b.label);
        }
    });
}

#[test]
fn criterion_07_equal_block_closed_forms_match_isolated_roots() {
    let tolerance = width(10);
    for p in 2..=10u32 {
        let pr = params(2 * p, p);
        let expected = if p <= 6 { 4 } else { 2 };
        let mut closed = closed_form_equal_blocks(p, 24);
        assert_eq!(closed.len(), expected, "{pr}");
        let solved = table_ordered(&pr, 12);
        assert_eq!(solved.len(), expected, "{pr}");
        closed.sort_by(|a, b| a.x2.lo.cmp(&b.x2.lo));
        for (c, s) in closed.iter().zip(&solved) {
            assert!(c.x2.intersects(&s.x2), "{pr}");
            assert!(c.x4.intersects(&s.x4), "{pr}");
            assert!(
                (c.x2.midpoint() - s.x2.midpoint()).abs() < tolerance,
                "{pr}"
            );
            assert!(
                (c.x4.midpoint() - s.x4.midpoint()).abs() < tolerance,
                "{pr}"
            );
        }
    }
}

#[test]
fn criterion_08_positivity_certificates_for_the_concavity_indicator() {
    // Frozen coefficient polynomials of the expansion in y = n - 2p - 5.
    let expected: [&[i64]; 5] = [
        &[-340, -491, -309, -64, 22, 6],
        &[-313, -274, -26, 62, 19],
        &[-109, -30, 41, 18],
        &[-17, 6, 7],
        &[-1, 1],
    ];
    let coeffs = indicator_offset_coefficients();
    for (a, e) in coeffs.iter().zip(expected) {
        assert_eq!(*a, IntPolynomial::from_i64("p", e));
    }
    // The expansion reconstructs the indicator exactly on a grid.
    for p in 2i64..=12 {
        let m = vertex_concavity_indicator_in_n(p as u32);
        for n in 4i64..=40 {
            let y = BigInt::from(n - 2 * p - 5);
            let mut total = BigInt::from(0);
            let mut power = BigInt::from(1);
            for a in &coeffs {
                total += a.eval_int(&p.into()) * &power;
                power *= &y;
            }
            assert_eq!(total, m.eval_int(&n.into()), "p = {p}, n = {n}");
        }
    }
    // Every coefficient is positive for p >= 4, so the indicator is positive
    // whenever p >= 4 and n >= 2p + 5.
    for a in &coeffs {
        assert!(certify_positive(a, &rat(4)).verdict, "{a}");
    }
    // Shifting the p = 2 and p = 3 specializations to n = 13 reproduces the
    // recorded coefficient tuples, certifying positivity for n >= 13.
    let cert2 = certify_positive(&vertex_concavity_indicator_in_n(2), &rat(13));
    assert!(cert2.verdict);
    assert_eq!(
        cert2.terminal_coefficients,
        [766, 2307, 511, 39, 1].map(rat).to_vec()
    );
    let m3 = vertex_concavity_indicator_in_n(3).primitive_positive();
    let cert3 = certify_positive(&m3, &rat(13));
    assert!(cert3.verdict);
    assert_eq!(
        cert3.terminal_coefficients,
        [1887, 2650, 544, 40, 1].map(rat).to_vec()
    );
}

#[test]
fn criterion_09_residuals_below_1e8_at_width_1e10() {
    let spread_bound = width(8);
    parameter_pairs(20).par_iter().for_each(|pr| {
        let set = classify(pr, &width(10)).expect("classification succeeds");
        assert!(!set.non_kahler.is_empty(), "{pr}");
        for s in &set.non_kahler {
            assert!(s.residual_bound < spread_bound, "{pr}");
            let ricci = ricci_components(pr, &s.metric);
            assert!(ricci.mutually_intersect(), "{pr}");
            assert!(ricci.spread() < spread_bound, "{pr}");
        }
    });
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(
        rng.gen_range(1i64..=20).into(),
        rng.gen_range(1i64..=20).into(),
    )
}

fn random_poly(rng: &mut ChaCha8Rng, var: &str, degree: usize) -> IntPolynomial {
    let coeffs: Vec<BigInt> = (0..=degree)
        .map(|_| rng.gen_range(-9i64..=9).into())
        .collect();
    IntPolynomial::new(var, coeffs)
}

fn lift(f: &IntPolynomial) -> BiPolynomial {
    let mut lifted = BiPolynomial::zero("x", "y");
    for (k, c) in f.coeffs.iter().enumerate() {
        lifted.add_term((k as u32, 0), c.clone());
    }
    lifted
}

#[test]
fn criterion_10_randomized_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9d2c_5681);

    // Ring laws and shift round-trips on random integer polynomials.
    for _ in 0..200 {
        let f = random_poly(&mut rng, "x", 5);
        let g = random_poly(&mut rng, "x", 4);
        let h = random_poly(&mut rng, "x", 3);
        assert_eq!(&f * &g, &g * &f);
        assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        let a = BigInt::from(rng.gen_range(-6i64..=6));
        assert_eq!(f.shift_int(&a).shift_int(&(-&a)), f);
    }

    // Resultant multiplicativity in the first argument.
    for _ in 0..60 {
        let f = random_poly(&mut rng, "x", 3);
        let g = random_poly(&mut rng, "x", 2);
        let h = random_poly(&mut rng, "x", 3);
        if f.is_zero() || g.is_zero() || h.is_zero() {
            continue;
        }
        let res = |a: &IntPolynomial, b: &IntPolynomial| {
            resultant(&lift(a), &lift(b), BiVar::First).expect("nonzero inputs")
        };
        assert_eq!(res(&(&f * &g), &h), &res(&f, &h) * &res(&g, &h));
    }

    // Positive-root counting agrees with products of known linear factors.
    for _ in 0..200 {
        let target = rng.gen_range(0usize..=4);
        let mut roots: Vec<Rational> = Vec::new();
        while roots.len() < target {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let candidate = random_rational(&mut rng) * rat(sign);
            if !roots.contains(&candidate) {
                roots.push(candidate);
            }
        }
        let mut f = IntPolynomial::from_i64("x", &[1]);
        for r in &roots {
            let linear = IntPolynomial::new("x", vec![-r.numer().clone(), r.denom().clone()]);
            f = &f * &linear;
        }
        if rng.gen_bool(0.5) {
            // An extra factor with no real roots must not change the count.
            f = &f * &IntPolynomial::from_i64("x", &[1, 0, 1]);
        }
        let expected = roots.iter().filter(|r| **r > rat(0)).count();
        assert_eq!(count_positive_roots(&f).expect("countable"), expected);
    }

    // Homogeneity: scaling an exact metric by c divides every Ricci component
    // and the scalar curvature by c, and leaves the scale invariant unchanged.
    for _ in 0..40 {
        let n = rng.gen_range(4u32..=10);
        let pr = params(n, rng.gen_range(2..=n - 2));
        let metric = Metric::exact(std::array::from_fn(|_| random_rational(&mut rng)));
        let c = random_rational(&mut rng);
        let scaled = metric.scale(&c);

        let base = ricci_components(&pr, &metric);
        let after = ricci_components(&pr, &scaled);
        for (b, a) in base.r.iter().zip(&after.r) {
            assert!(b.is_point() && a.is_point());
            assert_eq!(a.lo, &b.lo / &c);
        }

        let s_base = scalar_curvature(&pr, &metric);
        let s_after = scalar_curvature(&pr, &scaled);
        assert_eq!(s_after.lo, &s_base.lo / &c);

        let h_base = scale_invariant_with_digits(&pr, &metric, 12);
        let h_after = scale_invariant_with_digits(&pr, &scaled, 12);
        assert!(h_base.intersects(&h_after));
    }
}
