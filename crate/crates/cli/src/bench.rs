use std::time::Instant;

use clap::{Args, ValueEnum};
use detrep::constructions;
use detrep::exactmath::modular;
use detrep::exactmath::IntMatrix;
use detrep::oracles::{self, NAIVE_MAX};
use detrep::pencil::PathEvaluator;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Outcome, UsageError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Ryser,
    Naive,
    PencilDense,
    PencilPath,
}

impl Strategy {
    fn name(&self) -> &'static str {
        match self {
            Strategy::Ryser => "ryser",
            Strategy::Naive => "naive",
            Strategy::PencilDense => "pencil-dense",
            Strategy::PencilPath => "pencil-path",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Inclusive range such as `2..7`, `2-7` or a single size.
    #[arg(long, default_value = "2..7")]
    pub m_range: String,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "ryser,naive,pencil-dense,pencil-path"
    )]
    pub strategies: Vec<Strategy>,
    /// Seeded matrices per size.
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Keep wall-clock columns in JSON output (which makes it non-reproducible).
    #[arg(long)]
    pub include_timings: bool,
    /// Largest m for which the dense O(n^3) pencil determinant runs.
    #[arg(long, default_value_t = 7)]
    pub dense_max: usize,
    /// Worker threads per (m, strategy) cell.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Serialize)]
struct Row {
    construction: &'static str,
    m: usize,
    n: usize,
    strategy: &'static str,
    trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    median_ns: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    build_ns: Option<u128>,
    checksum: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    ops: Option<u64>,
}

#[derive(Serialize)]
struct Refusal {
    m: usize,
    strategy: &'static str,
    reason: String,
}

#[derive(Serialize)]
struct Report {
    seed: u64,
    trials: usize,
    agree: bool,
    rows: Vec<Row>,
    refused: Vec<Refusal>,
}

pub fn parse_range(s: &str) -> Result<(usize, usize), UsageError> {
    let s = s.trim();
    let parts: Vec<&str> = if let Some((a, b)) = s.split_once("..=") {
        vec![a, b]
    } else if let Some((a, b)) = s.split_once("..") {
        vec![a, b]
    } else if let Some((a, b)) = s.split_once('-') {
        vec![a, b]
    } else {
        vec![s, s]
    };
    let num = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| UsageError(format!("bad m range {s:?}")))
    };
    let (lo, hi) = (num(parts[0])?, num(parts[1])?);
    if lo == 0 || lo > hi {
        return Err(UsageError(format!("empty m range {s:?}")));
    }
    Ok((lo, hi))
}

fn matrices(m: usize, trials: usize, seed: u64) -> Vec<IntMatrix> {
    (0..trials)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add((m as u64) << 32).wrapping_add(i as u64));
            IntMatrix::from_fn(m, m, |_, _| BigInt::from(rng.gen_range(-3i64..=3)))
        })
        .collect()
}

/// Evaluates `f` on every input, `jobs` at a time, keeping input order.
fn timed<F>(inputs: &[IntMatrix], jobs: usize, f: F) -> Vec<(BigInt, u128)>
where
    F: Fn(&IntMatrix) -> BigInt + Sync,
{
    let run = |x: &IntMatrix| {
        let start = Instant::now();
        let v = f(x);
        (v, start.elapsed().as_nanos())
    };
    if jobs <= 1 || inputs.len() <= 1 {
        return inputs.iter().map(run).collect();
    }
    let chunk = inputs.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = inputs
            .chunks(chunk)
            .map(|c| {
                let run = &run;
                s.spawn(move || c.iter().map(run).collect::<Vec<_>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("bench worker panicked"))
            .collect()
    })
}

fn median(mut xs: Vec<u128>) -> u128 {
    xs.sort_unstable();
    xs.get(xs.len() / 2).copied().unwrap_or(0)
}

fn checksum(values: &[BigInt]) -> u64 {
    let p = modular::DEFAULT_PRIMES[0];
    values
        .iter()
        .fold(0, |acc, v| modular::add_mod(acc, modular::reduce(v, p), p))
}

pub fn run(args: BenchArgs) -> Result<Outcome, UsageError> {
    let (lo, hi) = parse_range(&args.m_range)?;
    if hi > constructions::MAX_HALF_M {
        return Err(UsageError(format!("m = {hi} exceeds {}", constructions::MAX_HALF_M)));
    }
    let trials = args.trials.max(1);
    let mut rows = Vec::new();
    let mut refused = Vec::new();
    let mut agree = true;
    for m in lo..=hi {
        let inputs = matrices(m, trials, args.seed);
        let mut reference: Option<(&'static str, Vec<BigInt>)> = None;
        for &strategy in &args.strategies {
            let guard = match strategy {
                Strategy::Naive if m > NAIVE_MAX => Some(format!("perm_naive is limited to m <= {NAIVE_MAX}")),
                Strategy::PencilDense if m > args.dense_max => {
                    Some(format!("dense evaluation is limited to m <= {} (--dense-max)", args.dense_max))
                }
                Strategy::PencilDense | Strategy::PencilPath if m < 2 => Some("pencils need m >= 2".into()),
                _ => None,
            };
            if let Some(reason) = guard {
                eprintln!("refused: {} at m = {m}: {reason}", strategy.name());
                refused.push(Refusal {
                    m,
                    strategy: strategy.name(),
                    reason,
                });
                continue;
            }
            let (construction, n, build_ns, ops, results) = match strategy {
                Strategy::Ryser => (
                    "none",
                    m,
                    None,
                    None,
                    timed(&inputs, args.jobs, |x| oracles::perm_ryser(x).expect("square")),
                ),
                Strategy::Naive => (
                    "none",
                    m,
                    None,
                    None,
                    timed(&inputs, args.jobs, |x| oracles::perm_naive(x).expect("guarded")),
                ),
                Strategy::PencilDense => {
                    let start = Instant::now();
                    let p = constructions::grenet(m, true)?;
                    let built = start.elapsed().as_nanos();
                    let res = timed(&inputs, args.jobs, |x| p.dense_det(x).expect("square"));
                    ("grenet", p.n(), Some(built), None, res)
                }
                Strategy::PencilPath => {
                    let start = Instant::now();
                    let p = constructions::grenet(m, true)?;
                    let eval = PathEvaluator::new(&p)?;
                    let built = start.elapsed().as_nanos();
                    let ops = eval.op_count();
                    let closed = m as u64 * (1u64 << (m - 1));
                    if ops != closed {
                        eprintln!("operation count {ops} differs from m * 2^(m-1) = {closed} at m = {m}");
                        agree = false;
                    }
                    let res = timed(&inputs, args.jobs, |x| eval.eval(x).expect("square").value);
                    ("grenet", p.n(), Some(built), Some(ops), res)
                }
            };
            let (values, times): (Vec<BigInt>, Vec<u128>) = results.into_iter().unzip();
            match &reference {
                None => reference = Some((strategy.name(), values.clone())),
                Some((name, want)) => {
                    if let Some(i) = (0..values.len()).find(|&i| values[i] != want[i]) {
                        eprintln!(
                            "mismatch at m = {m}, matrix {i}: {} gives {} but {name} gives {}",
                            strategy.name(),
                            values[i],
                            want[i]
                        );
                        agree = false;
                    }
                }
            }
            rows.push(Row {
                construction,
                m,
                n,
                strategy: strategy.name(),
                trials,
                median_ns: Some(median(times)),
                build_ns,
                checksum: checksum(&values),
                ops,
            });
        }
    }
    match args.format {
        Format::Csv => {
            println!("construction,m,n,strategy,trials,median_ns,checksum");
            for r in &rows {
                println!(
                    "{},{},{},{},{},{},{}",
                    r.construction,
                    r.m,
                    r.n,
                    r.strategy,
                    r.trials,
                    r.median_ns.unwrap_or(0),
                    r.checksum
                );
            }
        }
        Format::Json => {
            if !args.include_timings {
                for r in &mut rows {
                    r.median_ns = None;
                    r.build_ns = None;
                }
            }
            let report = Report {
                seed: args.seed,
                trials,
                agree,
                rows,
                refused,
            };
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
        }
    }
    Ok(if agree { Outcome::Pass } else { Outcome::Fail })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..7").unwrap(), (2, 7));
        assert_eq!(parse_range("2..=7").unwrap(), (2, 7));
        assert_eq!(parse_range("3-5").unwrap(), (3, 5));
        assert_eq!(parse_range("12").unwrap(), (12, 12));
        assert!(parse_range("7..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn checksums_are_order_independent_sums() {
        let a = [BigInt::from(3), BigInt::from(-1)];
        let b = [BigInt::from(-1), BigInt::from(3)];
        assert_eq!(checksum(&a), checksum(&b));
        assert_eq!(checksum(&a), 2);
    }
}
