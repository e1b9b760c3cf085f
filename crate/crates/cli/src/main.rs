//! Command-line interface for solving and verifying the invariant Einstein
//! equations on SO(2n)/U(p) x U(n-p).
//!
//! Subcommands: `solve` one parameter pair, `sweep` solution counts over a
//! range, `table` the solution and scale-invariant tables for the exceptional
//! pairs with unequal blocks, `verify` the full certified classification,
//! `certify` the machine-checked certificates behind it, and `plot-data` for
//! sampling the relevant polynomials. Exit codes: 0 success, 2 usage or
//! parameter error, 3 verification failure.

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use flag_einstein::einstein::{
    case_a_dual_quartic, case_a_quartic, case_a_window, case_b_report, classify,
    closed_form_equal_blocks, equal_blocks_factors, indicator_offset_coefficients,
    resultant_quartic_x2, resultant_quartic_x4, solve_case_a, verify_main_theorem,
    vertex_concavity_indicator_in_n, EinsteinError, NonKahlerSolution, SolutionSet,
    EXCEPTIONAL_PAIRS,
};
use flag_einstein::exactpoly::{
    decimal_round_half_even, parse_rational, rat, rational_display, IntPolynomial, Rational,
};
use flag_einstein::flagspace::{
    decided_round_decimals, isotropy_data, kahler_einstein_metrics, ricci_components,
    scale_invariant_with_digits, FlagError, FlagParams, Interval, Metric, MetricComponent,
};
use flag_einstein::realroots::{cauchy_bound, certify_positive};

#[derive(Parser)]
#[command(
    name = "flag-einstein",
    version,
    about = "Exact solver and verifier for invariant Einstein metrics on SO(2n)/U(p) x U(n-p)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the Einstein equations at one parameter pair
    Solve {
        /// Half-rank n of SO(2n)
        #[arg(short = 'n', long)]
        n: u32,
        /// Block size p of U(p) x U(n-p)
        #[arg(short = 'p', long)]
        p: u32,
        /// Target enclosure width (rational, decimal, or scientific)
        #[arg(long, default_value = "1e-10")]
        width: String,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Tabulate solution counts for every pair in a range
    Sweep {
        /// Smallest n to include
        #[arg(long, default_value_t = 4)]
        n_min: u32,
        /// Largest n to include
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        /// Target enclosure width for root isolation
        #[arg(long, default_value = "1e-8")]
        width: String,
        /// Worker threads (default: available parallelism)
        #[arg(long)]
        jobs: Option<usize>,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the solution or scale-invariant table for the exceptional pairs
    /// with unequal blocks
    Table {
        /// Which table to print
        #[arg(long, value_enum)]
        which: TableKind,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the certified classification over a range and report every check
    Verify {
        /// Largest n to verify
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        /// Target enclosure width for root isolation
        #[arg(long, default_value = "1e-8")]
        width: String,
        /// Worker threads (default: available parallelism)
        #[arg(long)]
        jobs: Option<usize>,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the machine-checked certificates behind the classification
    Certify {
        /// Which certificate family to check
        #[arg(long, value_enum)]
        target: CertifyTarget,
        /// Largest n to cover where a range applies
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Sample one of the classification polynomials for plotting
    PlotData {
        /// Half-rank n of SO(2n)
        #[arg(short = 'n', long)]
        n: u32,
        /// Block size p of U(p) x U(n-p)
        #[arg(short = 'p', long)]
        p: u32,
        /// Which polynomial to sample
        #[arg(long, value_enum, default_value_t = PolyKind::Family)]
        poly: PolyKind,
        /// Left end of the sampling range (default: the natural window)
        #[arg(long)]
        from: Option<String>,
        /// Right end of the sampling range (default: the natural window)
        #[arg(long)]
        to: Option<String>,
        /// Number of sample points (at least 2), evenly spaced inclusive of
        /// both ends
        #[arg(long, default_value_t = 200)]
        samples: u32,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    /// Metric components of the four non-Kähler solutions
    Solutions,
    /// Scale invariants of the four non-Kähler solutions
    Invariants,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolyKind {
    /// Quartic for metrics with x1 = x3 = 1, in x2, over its window
    Family,
    /// Companion quartic in x4 over the dual window
    FamilyDual,
    /// Resultant quartic cofactor in x4, over (0, Cauchy bound]
    CofactorX4,
    /// Resultant quartic cofactor in x2, over (0, Cauchy bound]
    CofactorX2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CertifyTarget {
    /// Resultant factorizations and root-free cofactors of the eliminated
    /// system
    Resultants,
    /// Positivity certificates for the window-concavity indicator
    Vertex,
    /// Coefficientwise identity between the family quartic and its dual
    Duality,
    /// Closed-form factorization of the family quartic at n = 2p
    EqualBlocks,
    /// Exactness of the Kähler–Einstein metrics
    Kahler,
}

enum CliError {
    Usage(String),
    Verification(String),
}

impl From<EinsteinError> for CliError {
    fn from(e: EinsteinError) -> Self {
        match &e {
            EinsteinError::Flag(FlagError::InvalidParams { .. }) => CliError::Usage(e.to_string()),
            _ => CliError::Verification(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

const SCHEMA: &str = "flag-einstein/1";

/// The exceptional pairs with unequal block sizes, in table order.
const UNEQUAL_EXCEPTIONAL: [(u32, u32); 6] = [(7, 4), (7, 3), (6, 4), (6, 2), (5, 3), (5, 2)];

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve {
            n,
            p,
            width,
            format,
        } => cmd_solve(n, p, &width, format),
        Command::Sweep {
            n_min,
            n_max,
            width,
            jobs,
            format,
        } => cmd_sweep(n_min, n_max, &width, jobs, format),
        Command::Table { which, format } => cmd_table(which, format),
        Command::Verify {
            n_max,
            width,
            jobs,
            format,
        } => cmd_verify(n_max, &width, jobs, format),
        Command::Certify {
            target,
            n_max,
            format,
        } => cmd_certify(target, n_max, format),
        Command::PlotData {
            n,
            p,
            poly,
            from,
            to,
            samples,
            format,
        } => cmd_plot_data(n, p, poly, from.as_deref(), to.as_deref(), samples, format),
    }
}

fn parse_params(n: u32, p: u32) -> Result<FlagParams, CliError> {
    FlagParams::new(n, p).map_err(|e| usage(e.to_string()))
}

fn parse_width(s: &str) -> Result<Rational, CliError> {
    let w = parse_rational(s).map_err(usage)?;
    if w <= rat(0) {
        return Err(usage(format!("width must be positive, got {s}")));
    }
    Ok(w)
}

/// Runs `f` on a Rayon pool with the requested thread count, or on the
/// default pool when no count is given.
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(usage("need at least one job")),
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| usage(format!("could not build worker pool: {e}"))),
    }
}

fn space_name(params: &FlagParams) -> String {
    format!(
        "SO({})/U({}) x U({})",
        2 * params.n,
        params.p,
        params.n - params.p
    )
}

fn big_u64(v: &BigInt) -> u64 {
    u64::try_from(v).expect("dimension fits in u64")
}

fn params_value(params: &FlagParams) -> Value {
    json!({"n": params.n, "p": params.p})
}

fn interval_value(iv: &Interval) -> Value {
    json!([rational_display(&iv.lo), rational_display(&iv.hi)])
}

fn component_value(c: &MetricComponent) -> Value {
    match c {
        MetricComponent::Exact(r) => json!(rational_display(r)),
        MetricComponent::Enclosure(iv) => interval_value(iv),
    }
}

fn enclosure_decimals(iv: &Interval) -> String {
    iv.round_decimals(4)
        .unwrap_or_else(|| decimal_round_half_even(&iv.midpoint(), 4))
}

fn display_scale_invariant(params: &FlagParams, metric: &Metric) -> String {
    let iv = scale_invariant_with_digits(params, metric, 12);
    enclosure_decimals(&iv)
}

fn residual_decimals(bound: &Rational) -> String {
    if bound == &rat(0) {
        return "0".to_string();
    }
    let mut places = 4;
    loop {
        let s = decimal_round_half_even(bound, places);
        if s.chars().any(|c| c != '0' && c != '.' && c != '-') || places > 40 {
            return s;
        }
        places += 4;
    }
}

fn csv_out<I, R>(rows: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut writer = csv::Writer::from_writer(std::io::stdout().lock());
    for row in rows {
        writer
            .write_record(row.into_iter().collect::<Vec<_>>())
            .map_err(|e| CliError::Verification(format!("csv output failed: {e}")))?;
    }
    writer
        .flush()
        .map_err(|e| CliError::Verification(format!("csv output failed: {e}")))
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable value")
    );
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

fn cmd_solve(n: u32, p: u32, width: &str, format: Format) -> Result<(), CliError> {
    let params = parse_params(n, p)?;
    let width = parse_width(width)?;
    let set = classify(&params, &width)?;
    match format {
        Format::Text => {
            solve_text(&params, &set);
            Ok(())
        }
        Format::Json => {
            print_json(&solve_json(&params, &set));
            Ok(())
        }
        Format::Csv => solve_csv(&params, &set),
    }
}

fn solve_text(params: &FlagParams, set: &SolutionSet) {
    let iso = isotropy_data(params);
    println!(
        "{}   (n = {}, p = {})",
        space_name(params),
        params.n,
        params.p
    );
    println!(
        "summand dimensions ({}, {}, {}, {}), total {}",
        iso.d1, iso.d2, iso.d3, iso.d4, iso.total_dimension
    );
    println!(
        "triple constants [123] = {}, [134] = {}",
        rational_display(&iso.c123),
        rational_display(&iso.c134)
    );
    println!();
    println!("Kähler–Einstein metrics:");
    for k in &set.kahler {
        let parts: Vec<String> = k
            .metric
            .components
            .iter()
            .map(|c| match c {
                MetricComponent::Exact(r) => rational_display(r),
                MetricComponent::Enclosure(iv) => enclosure_decimals(iv),
            })
            .collect();
        println!(
            "  {}: ({})   Einstein constant {}   scale invariant {}",
            k.label,
            parts.join(", "),
            rational_display(&k.einstein_constant),
            display_scale_invariant(params, &k.metric),
        );
    }
    println!();
    println!("non-Kähler Einstein metrics, normalized to x1 = x3 = 1:");
    for (i, s) in set.non_kahler.iter().enumerate() {
        println!(
            "  {}: x2 = {}  x4 = {}   scale invariant {}   residual bound {}",
            i + 1,
            enclosure_decimals(&s.x2),
            enclosure_decimals(&s.x4),
            display_scale_invariant(params, &s.metric),
            residual_decimals(&s.residual_bound),
        );
    }
}

fn solve_json(params: &FlagParams, set: &SolutionSet) -> Value {
    let iso = isotropy_data(params);
    let kahler: Vec<Value> = set
        .kahler
        .iter()
        .map(|k| {
            json!({
                "label": k.label,
                "metric": k.metric.components.iter().map(component_value).collect::<Vec<_>>(),
                "einsteinConstant": rational_display(&k.einstein_constant),
                "scaleInvariant": interval_value(&k.scale_invariant),
                "scaleInvariantDecimals": display_scale_invariant(params, &k.metric),
            })
        })
        .collect();
    let non_kahler: Vec<Value> = set
        .non_kahler
        .iter()
        .map(|s| {
            json!({
                "x2": interval_value(&s.x2),
                "x4": interval_value(&s.x4),
                "x2Decimals": enclosure_decimals(&s.x2),
                "x4Decimals": enclosure_decimals(&s.x4),
                "scaleInvariant": interval_value(&s.scale_invariant),
                "scaleInvariantDecimals": display_scale_invariant(params, &s.metric),
                "residualBound": rational_display(&s.residual_bound),
            })
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "params": params_value(params),
        "space": space_name(params),
        "dimensions": {
            "d1": big_u64(&iso.d1),
            "d2": big_u64(&iso.d2),
            "d3": big_u64(&iso.d3),
            "d4": big_u64(&iso.d4),
            "total": big_u64(&iso.total_dimension),
        },
        "tripleConstants": {
            "c123": rational_display(&iso.c123),
            "c134": rational_display(&iso.c134),
        },
        "counts": {"kahler": set.kahler.len(), "nonKahler": set.non_kahler.len()},
        "kahler": kahler,
        "nonKahler": non_kahler,
    })
}

fn solve_csv(params: &FlagParams, set: &SolutionSet) -> Result<(), CliError> {
    let header = [
        "kind",
        "label",
        "x1",
        "x2",
        "x3",
        "x4",
        "einsteinConstant",
        "scaleInvariant",
        "residualBound",
    ]
    .map(String::from)
    .to_vec();
    let mut rows = vec![header];
    for k in &set.kahler {
        let comp = |i: usize| match &k.metric.components[i] {
            MetricComponent::Exact(r) => rational_display(r),
            MetricComponent::Enclosure(iv) => enclosure_decimals(iv),
        };
        rows.push(vec![
            "kahler".to_string(),
            k.label.clone(),
            comp(0),
            comp(1),
            comp(2),
            comp(3),
            rational_display(&k.einstein_constant),
            display_scale_invariant(params, &k.metric),
            String::new(),
        ]);
    }
    for (i, s) in set.non_kahler.iter().enumerate() {
        rows.push(vec![
            "nonKahler".to_string(),
            (i + 1).to_string(),
            "1".to_string(),
            enclosure_decimals(&s.x2),
            "1".to_string(),
            enclosure_decimals(&s.x4),
            String::new(),
            display_scale_invariant(params, &s.metric),
            residual_decimals(&s.residual_bound),
        ]);
    }
    csv_out(rows)
}

// ---------------------------------------------------------------------------
// sweep and verify
// ---------------------------------------------------------------------------

fn cmd_sweep(
    n_min: u32,
    n_max: u32,
    width: &str,
    jobs: Option<usize>,
    format: Format,
) -> Result<(), CliError> {
    if n_min < 4 || n_max < n_min {
        return Err(usage("need 4 <= n-min <= n-max"));
    }
    let width = parse_width(width)?;
    let checks: Vec<_> = with_jobs(jobs, || verify_main_theorem(n_max, &width))??
        .into_iter()
        .filter(|c| c.params.n >= n_min)
        .collect();
    let exceptional = checks.iter().filter(|c| c.exceptional).count();
    match format {
        Format::Text => {
            println!(
                "{:>4} {:>4} {:>7} {:>11} {:>12}",
                "n", "p", "kahler", "non-kahler", "exceptional"
            );
            for c in &checks {
                println!(
                    "{:>4} {:>4} {:>7} {:>11} {:>12}",
                    c.params.n,
                    c.params.p,
                    c.kahler_count,
                    c.found_non_kahler,
                    if c.exceptional { "yes" } else { "no" }
                );
            }
            println!();
            println!(
                "{} pairs verified ({} exceptional); every count matches the classification",
                checks.len(),
                exceptional
            );
            Ok(())
        }
        Format::Json => {
            let pairs: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({
                        "params": params_value(&c.params),
                        "kahler": c.kahler_count,
                        "nonKahler": c.found_non_kahler,
                        "exceptional": c.exceptional,
                    })
                })
                .collect();
            print_json(&json!({
                "schema": SCHEMA,
                "nMin": n_min,
                "nMax": n_max,
                "pairs": pairs,
                "exceptionalPairs": exceptional,
            }));
            Ok(())
        }
        Format::Csv => {
            let header = ["n", "p", "kahler", "nonKahler", "exceptional"]
                .map(String::from)
                .to_vec();
            let rows = checks.iter().map(|c| {
                vec![
                    c.params.n.to_string(),
                    c.params.p.to_string(),
                    c.kahler_count.to_string(),
                    c.found_non_kahler.to_string(),
                    c.exceptional.to_string(),
                ]
            });
            csv_out(std::iter::once(header).chain(rows))
        }
    }
}

fn cmd_verify(
    n_max: u32,
    width: &str,
    jobs: Option<usize>,
    format: Format,
) -> Result<(), CliError> {
    if n_max < 4 {
        return Err(usage("need n-max >= 4"));
    }
    let width = parse_width(width)?;
    let checks = with_jobs(jobs, || verify_main_theorem(n_max, &width))??;
    let exceptional = checks.iter().filter(|c| c.exceptional).count();
    match format {
        Format::Text => {
            for c in &checks {
                println!(
                    "{}: kahler {}, non-kahler {} (expected {}), cofactor positive roots ({}, {}) ... ok",
                    c.params,
                    c.kahler_count,
                    c.found_non_kahler,
                    c.expected_non_kahler,
                    c.cofactor_positive_roots.0,
                    c.cofactor_positive_roots.1,
                );
            }
            println!();
            println!(
                "verified {} pairs up to n = {}; {} exceptional pairs carry four non-Kähler metrics, all others two",
                checks.len(),
                n_max,
                exceptional
            );
            Ok(())
        }
        Format::Json => {
            let pairs: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({
                        "params": params_value(&c.params),
                        "kahler": c.kahler_count,
                        "nonKahler": c.found_non_kahler,
                        "expectedNonKahler": c.expected_non_kahler,
                        "exceptional": c.exceptional,
                        "cofactorPositiveRoots": [
                            c.cofactor_positive_roots.0,
                            c.cofactor_positive_roots.1,
                        ],
                    })
                })
                .collect();
            print_json(&json!({
                "schema": SCHEMA,
                "nMax": n_max,
                "pairs": pairs,
                "exceptionalPairs": exceptional,
                "allVerified": true,
            }));
            Ok(())
        }
        Format::Csv => Err(usage("csv output is not available for verify")),
    }
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

/// Non-Kähler solutions in table order: ascending `x4` when `2p < n`,
/// ascending `x2` otherwise; labeled g1 .. g4.
fn table_rows(params: &FlagParams, set: &SolutionSet) -> Vec<NonKahlerSolution> {
    let mut sols = set.non_kahler.clone();
    if 2 * params.p < params.n {
        sols.sort_by(|a, b| a.x4.lo.cmp(&b.x4.lo));
    }
    sols
}

fn cmd_table(which: TableKind, format: Format) -> Result<(), CliError> {
    let width = parse_rational("1e-10").expect("fixed width parses");
    let mut per_pair = Vec::new();
    for (n, p) in UNEQUAL_EXCEPTIONAL {
        let params = FlagParams::new(n, p).expect("table pair is valid");
        let set = classify(&params, &width)?;
        let rows = table_rows(&params, &set);
        if rows.len() != 4 {
            return Err(CliError::Verification(format!(
                "{params}: expected four non-Kähler metrics, found {}",
                rows.len()
            )));
        }
        per_pair.push((params, rows));
    }
    match which {
        TableKind::Solutions => table_solutions(&per_pair, format),
        TableKind::Invariants => table_invariants(&per_pair, format),
    }
}

fn table_solutions(
    per_pair: &[(FlagParams, Vec<NonKahlerSolution>)],
    format: Format,
) -> Result<(), CliError> {
    match format {
        Format::Text => {
            println!(
                "{:<8} {:<6} {:>4} {:>9} {:>4} {:>9}",
                "pair", "metric", "x1", "x2", "x3", "x4"
            );
            for (params, rows) in per_pair {
                for (i, s) in rows.iter().enumerate() {
                    println!(
                        "{:<8} {:<6} {:>4} {:>9} {:>4} {:>9}",
                        params.to_string(),
                        format!("g{}", i + 1),
                        "1",
                        enclosure_decimals(&s.x2),
                        "1",
                        enclosure_decimals(&s.x4),
                    );
                }
            }
            Ok(())
        }
        Format::Json => {
            let pairs: Vec<Value> = per_pair
                .iter()
                .map(|(params, rows)| {
                    let metrics: Vec<Value> = rows
                        .iter()
                        .enumerate()
                        .map(|(i, s)| {
                            json!({
                                "label": format!("g{}", i + 1),
                                "x1": "1",
                                "x2": enclosure_decimals(&s.x2),
                                "x3": "1",
                                "x4": enclosure_decimals(&s.x4),
                            })
                        })
                        .collect();
                    json!({"params": params_value(params), "metrics": metrics})
                })
                .collect();
            print_json(&json!({"schema": SCHEMA, "table": "solutions", "pairs": pairs}));
            Ok(())
        }
        Format::Csv => {
            let header = ["n", "p", "metric", "x1", "x2", "x3", "x4"]
                .map(String::from)
                .to_vec();
            let mut rows = Vec::new();
            for (params, sols) in per_pair {
                for (i, s) in sols.iter().enumerate() {
                    rows.push(vec![
                        params.n.to_string(),
                        params.p.to_string(),
                        format!("g{}", i + 1),
                        "1".to_string(),
                        enclosure_decimals(&s.x2),
                        "1".to_string(),
                        enclosure_decimals(&s.x4),
                    ]);
                }
            }
            csv_out(std::iter::once(header).chain(rows))
        }
    }
}

/// Decided four-decimal scale invariant of the `index`-th table row,
/// recomputing at growing precision until the digits settle.
fn decided_invariant(params: &FlagParams, index: usize) -> String {
    decided_round_decimals(
        |digits| {
            let width = Rational::new(1.into(), BigInt::from(10u32).pow(digits));
            let sols = solve_case_a(params, &width).expect("table pair solves");
            let set = SolutionSet {
                params: *params,
                kahler: Vec::new(),
                non_kahler: sols
                    .into_iter()
                    .map(|s| NonKahlerSolution {
                        scale_invariant: scale_invariant_with_digits(params, &s.metric, digits),
                        x2: s.x2,
                        x4: s.x4,
                        metric: s.metric,
                        residual_bound: rat(0),
                    })
                    .collect(),
            };
            table_rows(params, &set)[index].scale_invariant.clone()
        },
        4,
    )
}

fn table_invariants(
    per_pair: &[(FlagParams, Vec<NonKahlerSolution>)],
    format: Format,
) -> Result<(), CliError> {
    let labels = ["g1", "g2", "g3", "g4"];
    let values: Vec<Vec<String>> = per_pair
        .iter()
        .map(|(params, _)| (0..4).map(|i| decided_invariant(params, i)).collect())
        .collect();
    match format {
        Format::Text => {
            print!("{:<10}", "invariant");
            for (params, _) in per_pair {
                print!(" {:>9}", params.to_string());
            }
            println!();
            for (i, label) in labels.iter().enumerate() {
                print!("{:<10}", format!("H({label})"));
                for cols in &values {
                    print!(" {:>9}", cols[i]);
                }
                println!();
            }
            Ok(())
        }
        Format::Json => {
            let pairs: Vec<Value> = per_pair
                .iter()
                .zip(&values)
                .map(|((params, _), cols)| {
                    json!({
                        "params": params_value(params),
                        "g1": cols[0],
                        "g2": cols[1],
                        "g3": cols[2],
                        "g4": cols[3],
                    })
                })
                .collect();
            print_json(&json!({"schema": SCHEMA, "table": "invariants", "pairs": pairs}));
            Ok(())
        }
        Format::Csv => {
            let header = ["n", "p", "metric", "scaleInvariant"]
                .map(String::from)
                .to_vec();
            let mut rows = Vec::new();
            for ((params, _), cols) in per_pair.iter().zip(&values) {
                for (label, value) in labels.iter().zip(cols) {
                    rows.push(vec![
                        params.n.to_string(),
                        params.p.to_string(),
                        label.to_string(),
                        value.clone(),
                    ]);
                }
            }
            csv_out(std::iter::once(header).chain(rows))
        }
    }
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

fn cmd_certify(target: CertifyTarget, n_max: u32, format: Format) -> Result<(), CliError> {
    if format == Format::Csv {
        return Err(usage("csv output is not available for certify"));
    }
    if n_max < 4 {
        return Err(usage("need n-max >= 4"));
    }
    match target {
        CertifyTarget::Resultants => certify_resultants(n_max, format),
        CertifyTarget::Vertex => certify_vertex(format),
        CertifyTarget::Duality => certify_duality(n_max, format),
        CertifyTarget::EqualBlocks => certify_equal_blocks(n_max, format),
        CertifyTarget::Kahler => certify_kahler(n_max, format),
    }
}

fn certify_resultants(n_max: u32, format: Format) -> Result<(), CliError> {
    let mut entries = Vec::new();
    for n in 4..=n_max {
        for p in 2..=n - 2 {
            let params = FlagParams::new(n, p).expect("pair in range");
            let report = case_b_report(&params)?;
            entries.push(report);
        }
    }
    match format {
        Format::Text => {
            for r in &entries {
                let branches: Vec<String> = r
                    .branches
                    .iter()
                    .map(|b| format!("{} = {}", b.label, b.kahler_match))
                    .collect();
                println!(
                    "{}: signs ({:+}, {:+}), cofactor positive roots ({}, {}); {}",
                    r.params,
                    r.sign_x4,
                    r.sign_x2,
                    r.positive_roots_x4,
                    r.positive_roots_x2,
                    branches.join(", "),
                );
            }
            println!();
            println!(
                "verified {} pairs: both resultants factor into the branch linears and \
                 a quartic cofactor that is root-free on the duality side",
                entries.len()
            );
            Ok(())
        }
        _ => {
            let pairs: Vec<Value> = entries
                .iter()
                .map(|r| {
                    json!({
                        "params": params_value(&r.params),
                        "signX4": r.sign_x4,
                        "signX2": r.sign_x2,
                        "positiveRootsX4": r.positive_roots_x4,
                        "positiveRootsX2": r.positive_roots_x2,
                        "quarticX4": r.quartic_x4.to_string(),
                        "quarticX2": r.quartic_x2.to_string(),
                        "branches": r.branches.iter().map(|b| json!({
                            "label": b.label,
                            "x2": rational_display(&b.x2),
                            "x3": rational_display(&b.x3),
                            "x4": rational_display(&b.x4),
                            "kahlerMatch": b.kahler_match,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            print_json(&json!({"schema": SCHEMA, "certificates": "resultants", "pairs": pairs}));
            Ok(())
        }
    }
}

fn certificate_value(label: &str, poly: &IntPolynomial, from: i64) -> Result<Value, CliError> {
    let cert = certify_positive(poly, &rat(from));
    if !cert.verdict {
        return Err(CliError::Verification(format!(
            "positivity certificate for {label} failed at shift {from}"
        )));
    }
    Ok(json!({
        "label": label,
        "polynomial": poly.to_string(),
        "shift": from,
        "shiftedCoefficients": cert
            .terminal_coefficients
            .iter()
            .map(rational_display)
            .collect::<Vec<_>>(),
        "certified": cert.verdict,
    }))
}

fn certify_vertex(format: Format) -> Result<(), CliError> {
    // The family quartic can only have four window roots when the indicator
    // m(n, p) is negative; these certificates bound where that can happen.
    let mut certificates = Vec::new();
    for p in [2u32, 3] {
        let m = vertex_concavity_indicator_in_n(p);
        certificates.push(certificate_value(
            &format!("m(n, {p}) for n >= 13"),
            &m,
            13,
        )?);
    }
    let coeffs = indicator_offset_coefficients();
    let centers = [4i64, 3, 2, 2, 2];
    for (k, (a, center)) in coeffs.iter().zip(centers).enumerate() {
        certificates.push(certificate_value(
            &format!("offset coefficient a{k}(p) for p >= {center}"),
            a,
            center,
        )?);
    }
    let exceptional: Vec<Value> = EXCEPTIONAL_PAIRS
        .iter()
        .map(|&(n, p)| {
            let m = vertex_concavity_indicator_in_n(p);
            let value = m.eval_int(&n.into());
            json!({"params": {"n": n, "p": p}, "indicator": value.to_string()})
        })
        .collect();
    match format {
        Format::Text => {
            println!("positivity certificates (all coefficients of the shifted polynomial are nonnegative with positive constant):");
            for c in &certificates {
                println!(
                    "  {}: shift {}, certified {}",
                    c["label"].as_str().unwrap(),
                    c["shift"],
                    c["certified"],
                );
            }
            println!();
            println!("indicator values at the exceptional pairs (all negative):");
            for e in &exceptional {
                println!(
                    "  ({}, {}): {}",
                    e["params"]["n"],
                    e["params"]["p"],
                    e["indicator"].as_str().unwrap()
                );
            }
            println!();
            println!(
                "offset expansion: m(n, p) = sum a_k(p) (n - 2p - 5)^k, so m > 0 whenever \
                 p >= 4 and n >= 2p + 5; with the p = 2, 3 certificates, four-root windows \
                 are confined to finitely many pairs"
            );
            Ok(())
        }
        _ => {
            print_json(&json!({
                "schema": SCHEMA,
                "certificates": "vertex",
                "positivity": certificates,
                "exceptionalValues": exceptional,
            }));
            Ok(())
        }
    }
}

fn certify_duality(n_max: u32, format: Format) -> Result<(), CliError> {
    let mut checked = 0u32;
    for n in 4..=n_max {
        for p in 2..=n - 2 {
            let params = FlagParams::new(n, p).expect("pair in range");
            let direct = case_a_dual_quartic(&params);
            let renamed = case_a_quartic(&params.dual()).rename("x4");
            if direct != renamed {
                return Err(CliError::Verification(format!(
                    "{params}: dual quartic differs from the family quartic at ({}, {})",
                    params.n,
                    params.n - params.p
                )));
            }
            checked += 1;
        }
    }
    match format {
        Format::Text => {
            println!(
                "verified for {checked} pairs with n <= {n_max}: the companion quartic in x4 \
                 equals the family quartic of the dual pair (p -> n - p), coefficient by \
                 coefficient"
            );
            Ok(())
        }
        _ => {
            print_json(&json!({
                "schema": SCHEMA,
                "certificates": "duality",
                "nMax": n_max,
                "pairsChecked": checked,
                "verified": true,
            }));
            Ok(())
        }
    }
}

fn certify_equal_blocks(n_max: u32, format: Format) -> Result<(), CliError> {
    let mut entries = Vec::new();
    for p in 2..=n_max / 2 {
        let params = FlagParams::new(2 * p, p).expect("equal blocks pair");
        let (f1, f2) = equal_blocks_factors(p);
        let product = (&f1 * &f2).scale(&2.into());
        if product != case_a_quartic(&params) {
            return Err(CliError::Verification(format!(
                "factorization of the family quartic failed at {params}"
            )));
        }
        let closed = closed_form_equal_blocks(p, 24);
        entries.push((params, f1, f2, closed));
    }
    match format {
        Format::Text => {
            for (params, f1, f2, closed) in &entries {
                println!("{params}: family quartic = 2 ({f1}) ({f2})");
                for (i, s) in closed.iter().enumerate() {
                    println!(
                        "  root {}: x2 = {}  x4 = {}",
                        i + 1,
                        enclosure_decimals(&s.x2),
                        enclosure_decimals(&s.x4),
                    );
                }
            }
            println!();
            println!(
                "verified the closed-form factorization for {} equal-block pairs",
                entries.len()
            );
            Ok(())
        }
        _ => {
            let pairs: Vec<Value> = entries
                .iter()
                .map(|(params, f1, f2, closed)| {
                    json!({
                        "params": params_value(params),
                        "factor1": f1.to_string(),
                        "factor2": f2.to_string(),
                        "solutions": closed.iter().map(|s| json!({
                            "x2": interval_value(&s.x2),
                            "x4": interval_value(&s.x4),
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            print_json(&json!({"schema": SCHEMA, "certificates": "equal-blocks", "pairs": pairs}));
            Ok(())
        }
    }
}

fn certify_kahler(n_max: u32, format: Format) -> Result<(), CliError> {
    let mut entries = Vec::new();
    for n in 4..=n_max {
        for p in 2..=n - 2 {
            let params = FlagParams::new(n, p).expect("pair in range");
            for (label, metric) in kahler_einstein_metrics(&params) {
                let ricci = ricci_components(&params, &metric);
                let constant = ricci.r[0].lo.clone();
                let exact = ricci.r.iter().all(|r| r.is_point() && r.lo == constant);
                if !exact {
                    return Err(CliError::Verification(format!(
                        "{params}: metric {label} is not exactly Einstein"
                    )));
                }
                entries.push((params, label, constant));
            }
        }
    }
    match format {
        Format::Text => {
            for (params, label, constant) in &entries {
                println!(
                    "{params} {label}: Einstein constant {}",
                    rational_display(constant)
                );
            }
            println!();
            println!(
                "verified {} Kähler–Einstein metrics exactly; each has constant 1/(2(n-1))",
                entries.len()
            );
            Ok(())
        }
        _ => {
            let metrics: Vec<Value> = entries
                .iter()
                .map(|(params, label, constant)| {
                    json!({
                        "params": params_value(params),
                        "label": label,
                        "einsteinConstant": rational_display(constant),
                    })
                })
                .collect();
            print_json(&json!({"schema": SCHEMA, "certificates": "kahler", "metrics": metrics}));
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// plot-data
// ---------------------------------------------------------------------------

fn cmd_plot_data(
    n: u32,
    p: u32,
    poly: PolyKind,
    from: Option<&str>,
    to: Option<&str>,
    samples: u32,
    format: Format,
) -> Result<(), CliError> {
    let params = parse_params(n, p)?;
    if samples < 2 {
        return Err(usage("need at least two sample points"));
    }
    let (f, window) = match poly {
        PolyKind::Family => (case_a_quartic(&params), case_a_window(&params)),
        PolyKind::FamilyDual => (case_a_dual_quartic(&params), case_a_window(&params.dual())),
        PolyKind::CofactorX4 => {
            let f = resultant_quartic_x4(&params);
            let hi = cauchy_bound(&f);
            (f, (rat(0), hi))
        }
        PolyKind::CofactorX2 => {
            let f = resultant_quartic_x2(&params);
            let hi = cauchy_bound(&f);
            (f, (rat(0), hi))
        }
    };
    let lo = match from {
        Some(s) => parse_rational(s).map_err(usage)?,
        None => window.0,
    };
    let hi = match to {
        Some(s) => parse_rational(s).map_err(usage)?,
        None => window.1,
    };
    if lo >= hi {
        return Err(usage(format!(
            "invalid range: need from < to, got [{}, {}]",
            rational_display(&lo),
            rational_display(&hi)
        )));
    }
    let step = (&hi - &lo) / rat(i64::from(samples) - 1);
    let points: Vec<(String, String)> = (0..samples)
        .map(|i| {
            let x = &lo + &step * rat(i64::from(i));
            let y = f.eval(&x);
            (
                decimal_round_half_even(&x, 20),
                decimal_round_half_even(&y, 20),
            )
        })
        .collect();
    match format {
        Format::Text => {
            println!(
                "{} over [{}, {}]",
                f,
                rational_display(&lo),
                rational_display(&hi)
            );
            for (x, y) in &points {
                println!("{x} {y}");
            }
            Ok(())
        }
        Format::Json => {
            let rows: Vec<Value> = points.iter().map(|(x, y)| json!([x, y])).collect();
            print_json(&json!({
                "schema": SCHEMA,
                "params": params_value(&params),
                "polynomial": f.to_string(),
                "points": rows,
            }));
            Ok(())
        }
        Format::Csv => {
            let header = ["x", "value"].map(String::from).to_vec();
            let rows = points.into_iter().map(|(x, y)| vec![x, y]);
            csv_out(std::iter::once(header).chain(rows))
        }
    }
}
