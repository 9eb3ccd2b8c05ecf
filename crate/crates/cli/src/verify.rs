use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use detrep::constructions;
use detrep::exactmath::{IntMatrix, DEFAULT_PRIMES};
use detrep::pencil::{
    json, pencil_pit_equal, symbolic_det_with_bound, Mode, PathEvaluator, PitConfig, VerificationReport,
    Witness, DEFAULT_SYMBOLIC_BOUND,
};
use detrep::symmetry::{check_regularity, equivariance_suite, Family};
use detrep::{Construction, PencilMatrix};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Outcome, UsageError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IdentityMode {
    Symbolic,
    Pit,
    Structured,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Equivariance {
    None,
    Left,
    Full,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Construction name, or `waring`.
    pub construction: Option<String>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Waring: number of variables (defaults to --m).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub symmetric: bool,
    /// Verify a pencil exported with `build` instead of building one.
    #[arg(long, conflicts_with = "construction")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "all")]
    pub mode: IdentityMode,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "none")]
    pub equivariance: Equivariance,
    /// Group elements drawn per equivariance family.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Worker threads for randomized trials.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Machine-readable report on stdout.
    #[arg(long)]
    pub json: bool,
}

#[derive(Serialize)]
struct Summary {
    construction: String,
    m: usize,
    n: usize,
    seed: u64,
    verdict: &'static str,
    reports: Vec<VerificationReport>,
}

fn symbolic_bound() -> Result<usize, UsageError> {
    match std::env::var("DETREP_SYMBOLIC_BOUND") {
        Ok(v) => v
            .parse()
            .map_err(|_| UsageError(format!("DETREP_SYMBOLIC_BOUND={v:?} is not a number"))),
        Err(_) => Ok(DEFAULT_SYMBOLIC_BOUND),
    }
}

fn symbolic_report(p: &PencilMatrix, bound: usize) -> Result<VerificationReport, detrep::Error> {
    let got = symbolic_det_with_bound(p, bound)?;
    let meta = p.meta();
    let want = meta.target().polynomial(p.shape())?.scale(&meta.multiplier());
    let diff = &got - &want;
    let detail = format!("det(A(y)) = {} * {}", meta.multiplier(), meta.target().name());
    let leading = diff.terms().next().map(|(mono, c)| format!("{c}*{mono}"));
    Ok(match leading {
        None => VerificationReport::pass("identity", Mode::Symbolic),
        Some(leading) => VerificationReport::fail(
            "identity",
            Mode::Symbolic,
            Witness::Residue {
                terms: diff.num_terms(),
                leading,
            },
        ),
    }
    .with_detail(detail))
}

/// `path_det` at seeded integer points against the exact target.
fn structured_report(p: &PencilMatrix, eval: &PathEvaluator, trials: usize, seed: u64) -> VerificationReport {
    let (rows, cols) = p.shape();
    let meta = p.meta();
    for trial in 0..trials.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
        let point = IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-5i64..=5)));
        let lhs = eval.eval(&point).expect("shape matches").value;
        let rhs = meta.multiplier() * meta.target().eval(&point).expect("square argument");
        if lhs != rhs {
            let mut r = VerificationReport::fail(
                "identity",
                Mode::Structured,
                Witness::IntegerPoint {
                    point: point.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                },
            );
            r.trials = trial + 1;
            r.seed = Some(seed);
            return r;
        }
    }
    let mut r = VerificationReport::pass("identity", Mode::Structured)
        .with_trials(trials.max(1))
        .with_detail(format!("epsilon = {}, {} multiply-adds", eval.epsilon(), eval.op_count()));
    r.seed = Some(seed);
    r
}

fn identity_reports(p: &PencilMatrix, args: &VerifyArgs) -> Result<Vec<VerificationReport>, UsageError> {
    let mut out = Vec::new();
    let bound = symbolic_bound()?;
    let want = |m: IdentityMode| args.mode == m || args.mode == IdentityMode::All;
    if want(IdentityMode::Symbolic) {
        match symbolic_report(p, bound) {
            Ok(r) => out.push(r),
            Err(detrep::Error::SymbolicBoundExceeded { .. }) if args.mode == IdentityMode::All => {}
            Err(e) => return Err(e.into()),
        }
    }
    if want(IdentityMode::Pit) {
        let cfg = PitConfig {
            trials: args.trials,
            primes: DEFAULT_PRIMES.to_vec(),
            seed: args.seed,
            jobs: args.jobs,
        };
        out.push(pencil_pit_equal(p, &cfg));
    }
    if want(IdentityMode::Structured) {
        match PathEvaluator::new(p) {
            Ok(eval) => out.push(structured_report(p, &eval, args.trials, args.seed)),
            Err(_) if args.mode == IdentityMode::All => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

fn equivariance_reports(p: &PencilMatrix, args: &VerifyArgs) -> Result<Vec<VerificationReport>, UsageError> {
    let families: &[Family] = match args.equivariance {
        Equivariance::None => return Ok(Vec::new()),
        Equivariance::Left => &[Family::Left],
        Equivariance::Full => match p.meta().construction {
            Construction::EquivariantPerm | Construction::EquivariantDet => {
                &[Family::Left, Family::Right, Family::Pair, Family::Transpose]
            }
            _ => &[Family::Left, Family::Right, Family::Transpose],
        },
    };
    let (rows, cols) = p.shape();
    if matches!(p.meta().construction, Construction::QuadricHalf | Construction::QuadricFull) {
        return Err(UsageError(format!(
            "{} is not acted on by matrix groups; equivariance checks cover the permanent and determinant pencils",
            p.meta().construction
        )));
    }
    if rows != cols {
        return Err(UsageError(format!(
            "{} has a {rows}x{cols} argument; equivariance checks need a square one",
            p.meta().construction
        )));
    }
    Ok(families
        .iter()
        .map(|&f| {
            let samples = if f == Family::Transpose { args.samples.min(5) } else { args.samples };
            equivariance_suite(p, f, samples, args.seed)
        })
        .collect())
}

fn waring_reports(args: &VerifyArgs) -> Result<(usize, Vec<VerificationReport>), UsageError> {
    let n = args
        .n
        .or(args.m)
        .ok_or_else(|| UsageError("waring needs --n".into()))?;
    let w = constructions::waring_terms(n, args.symmetric)?;
    let expected = 1usize << if args.symmetric { n } else { n - 1 };
    let report = if w.terms.len() != expected {
        VerificationReport::fail(
            "waring-identity",
            Mode::Symbolic,
            Witness::Rank {
                expected,
                actual: w.terms.len(),
            },
        )
    } else if w.is_exact() {
        VerificationReport::pass("waring-identity", Mode::Symbolic)
    } else {
        let diff = w.scaled_expansion();
        VerificationReport::fail(
            "waring-identity",
            Mode::Symbolic,
            Witness::Residue {
                terms: diff.num_terms(),
                leading: diff.to_string(),
            },
        )
    };
    Ok((n, vec![report.with_detail(format!("{} terms", w.terms.len()))]))
}

fn print_human(s: &Summary) {
    println!("{} m={} n={}", s.construction, s.m, s.n);
    for r in &s.reports {
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        let mode = serde_json::to_value(r.mode).expect("serializable");
        let mode = mode.as_str().unwrap_or("?");
        let detail = r.detail.as_deref().map(|d| format!(" [{d}]")).unwrap_or_default();
        println!("  {verdict} {:<22} {mode:<10} trials={}{detail}", r.check, r.trials);
        if let Some(w) = &r.witness {
            println!("       witness: {}", serde_json::to_string(w).expect("serializable"));
        }
    }
    println!("{}", s.verdict);
}

pub fn run(args: VerifyArgs) -> Result<Outcome, UsageError> {
    let (name, m, n, reports) = if args.construction.as_deref() == Some("waring") {
        let (n, reports) = waring_reports(&args)?;
        ("waring".to_string(), n, n, reports)
    } else {
        let p = match (&args.input, &args.construction) {
            (Some(path), _) => {
                let text = fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
                json::import_json(&text)?
            }
            (None, Some(name)) => {
                let c = Construction::from_str(name)?;
                let m = args.m.ok_or_else(|| UsageError("missing --m".into()))?;
                constructions::build(c, m)?
            }
            (None, None) => return Err(UsageError("give a construction or --input".into())),
        };
        let mut reports = identity_reports(&p, &args)?;
        // Ã = y has zero constant part and makes no regularity claim
        if p.meta().construction != Construction::TrivialDet {
            reports.push(check_regularity(&p));
        }
        reports.extend(equivariance_reports(&p, &args)?);
        (p.meta().construction.to_string(), p.m(), p.n(), reports)
    };
    let pass = reports.iter().all(VerificationReport::passed);
    let summary = Summary {
        construction: name,
        m,
        n,
        seed: args.seed,
        verdict: if pass { "pass" } else { "fail" },
        reports,
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
    } else {
        print_human(&summary);
    }
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}
