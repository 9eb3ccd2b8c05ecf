//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit
//! if any fails. Run with `cargo test -p detrep-cli --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use detrep::constructions::{self, waring_terms};
use detrep::exactmath::{rank_exact, IntMatrix};
use detrep::oracles::{det_polynomial, perm_naive, perm_polynomial, perm_ryser};
use detrep::pencil::{
    pencil_pit_equal, pencil_symbolic_det, symbolic_det_with_bound, PathEvaluator, PitConfig, Variable, Witness,
};
use detrep::symmetry::{check_regularity, equivariance_suite, Family};
use detrep::{Construction, PencilMatrix};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn detrep(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_detrep"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8"))
}

fn factorial(m: usize) -> BigInt {
    (1..=m).map(BigInt::from).product()
}

fn grid(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .filter(|r: &Vec<String>| !r.is_empty())
        .collect()
}

/// `det(Ã) = multiplier · target` by the path product at seeded integer points.
fn structured(p: &PencilMatrix, trials: usize, seed: u64) -> Result<(), String> {
    let eval = PathEvaluator::new(p).map_err(|e| e.to_string())?;
    let (rows, cols) = p.shape();
    let meta = p.meta();
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + t as u64);
        let y = IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-5i64..=5)));
        let lhs = eval.eval(&y).map_err(|e| e.to_string())?.value;
        let rhs = meta.multiplier() * meta.target().eval(&y).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("{} m={}: path {lhs} vs {rhs}", meta.construction, p.m()))?;
    }
    Ok(())
}

fn pit(p: &PencilMatrix, seed: u64) -> Result<(), String> {
    let r = pencil_pit_equal(p, &PitConfig::with_seed(seed));
    ensure(r.passed(), || format!("{} m={}: PIT {:?}", p.meta().construction, p.m(), r.witness))
}

fn c1() -> Outcome {
    for m in 2..=4 {
        let p = constructions::grenet(m, true).map_err(|e| e.to_string())?;
        let got = pencil_symbolic_det(&p).map_err(|e| e.to_string())?;
        let want = perm_polynomial(m).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("m={m}: det differs from perm"))?;
    }
    Ok("det(grenet(m)) = perm_m for m = 2, 3, 4 (n = 3, 7, 15)".into())
}

const GRENET3: &str = "
    0      0      0      0      y^3_3  y^3_2  y^3_1
    y^1_1  1      0      0      0      0      0
    y^1_2  0      1      0      0      0      0
    y^1_3  0      0      1      0      0      0
    0      y^2_2  y^2_1  0      1      0      0
    0      y^2_3  0      y^2_1  0      1      0
    0      0      y^2_3  y^2_2  0      0      1";

const REGULAR3: &str = "
    0      0       0       0      y^3_3  -y^3_2  y^3_1
    y^1_1  1       0       0      0      0       0
    y^1_2  0       1       0      0      0       0
    y^1_3  0       0       1      0      0       0
    0      -y^2_2  y^2_1   0      1      0       0
    0      -y^2_3  0       y^2_1  0      1       0
    0      0       -y^2_3  y^2_2  0      0       1";

fn c2() -> Outcome {
    for (name, want) in [("grenet", GRENET3), ("regular-det", REGULAR3)] {
        let (code, out) = detrep(&["build", name, "--m", "3", "--pretty"]);
        ensure(code == 0, || format!("build {name} exited {code}"))?;
        ensure(grid(&out) == grid(want), || format!("{name}(3) differs:\n{out}"))?;
    }
    let (_, out) = detrep(&["build", "regular-det", "--m", "2", "--pretty"]);
    let want = grid("0 -y^2_2 y^2_1\ny^1_1 1 0\ny^1_2 0 1");
    ensure(grid(&out) == want, || format!("regular-det(2) differs:\n{out}"))?;
    Ok("grenet(3), regular_det(2), regular_det(3) match the displays entrywise".into())
}

fn c3() -> Outcome {
    let law = |m: usize| if matches!(m % 4, 1 | 2) { 1 } else { -1 };
    for m in 2..=7 {
        let p = constructions::regular_det(m).map_err(|e| e.to_string())?;
        ensure(p.meta().sign == law(m), || format!("m={m}: recorded sign {}", p.meta().sign))?;
        if m <= 5 {
            let got = symbolic_det_with_bound(&p, p.n()).map_err(|e| e.to_string())?;
            let want = det_polynomial(m).map_err(|e| e.to_string())?.scale(&BigInt::from(law(m)));
            ensure(got == want, || format!("m={m}: det(regular_det) != {} det", law(m)))?;
        } else {
            pit(&p, 2024)?;
            let flipped = p.clone().with_meta(detrep::pencil::Metadata {
                sign: -law(m),
                ..p.meta().clone()
            });
            let r = pencil_pit_equal(&flipped, &PitConfig::with_seed(2024));
            ensure(!r.passed(), || format!("m={m}: PIT cannot tell the signs apart"))?;
        }
    }
    Ok("sign +1 iff m = 1,2 mod 4; exact for m = 2..5, PIT (20 trials x 3 primes, seed 2024) for m = 6, 7".into())
}

fn c4() -> Outcome {
    for c in [Construction::EquivariantPerm, Construction::EquivariantDet] {
        let sizes: Vec<usize> = (2..=4).map(|m| constructions::build(c, m).unwrap().n()).collect();
        ensure(sizes == [5, 19, 69], || format!("{c}: sizes {sizes:?}"))?;
        for m in 2..=4 {
            let p = constructions::build(c, m).map_err(|e| e.to_string())?;
            let meta = p.meta();
            let sign = if m % 2 == 1 { 1 } else { -1 };
            ensure(meta.sign == sign && meta.expected_factor == factorial(m), || {
                format!("{c} m={m}: metadata {} * {}", meta.sign, meta.expected_factor)
            })?;
            let rank = rank_exact(&p.constant_matrix());
            ensure(rank == p.n() - 1, || format!("{c} m={m}: rank {rank}"))?;
            ensure(check_regularity(&p).passed(), || format!("{c} m={m}: not regular"))?;
            if m == 2 {
                let target = match c {
                    Construction::EquivariantPerm => perm_polynomial(2),
                    _ => det_polynomial(2),
                }
                .map_err(|e| e.to_string())?;
                let got = pencil_symbolic_det(&p).map_err(|e| e.to_string())?;
                ensure(got == target.scale(&BigInt::from(-2)), || format!("{c}: det != -2 * target"))?;
            } else {
                structured(&p, 10, 11)?;
                pit(&p, 11)?;
            }
        }
    }
    Ok("n = 5, 19, 69; rank A(0) = n-1; det = (-1)^(m+1) m! P, symbolic at m = 2, path + PIT at m = 3, 4".into())
}

fn c5() -> Outcome {
    for m in 2..=5 {
        let p = constructions::grenet(m, true).map_err(|e| e.to_string())?;
        let left = equivariance_suite(&p, Family::Left, 100, 500 + m as u64);
        ensure(left.passed(), || format!("grenet m={m}: left check failed: {:?}", left.witness))?;
        let right = equivariance_suite(&p, Family::Right, 20, 500 + m as u64);
        ensure(!right.passed(), || format!("grenet m={m}: every right check passed"))?;
        ensure(matches!(right.witness, Some(Witness::Obstruction { .. })), || {
            format!("grenet m={m}: right failure without an obstruction: {:?}", right.witness)
        })?;
    }
    for m in 2..=5 {
        let p = constructions::regular_det(m).map_err(|e| e.to_string())?;
        let r = equivariance_suite(&p, Family::Left, 50, 900 + m as u64);
        ensure(r.passed(), || format!("regular_det m={m}: GL check failed: {:?}", r.witness))?;
    }
    for c in [Construction::EquivariantPerm, Construction::EquivariantDet] {
        for m in 2..=4 {
            let p = constructions::build(c, m).map_err(|e| e.to_string())?;
            for (family, samples) in [(Family::Left, 20), (Family::Right, 20), (Family::Transpose, 5)] {
                let r = equivariance_suite(&p, family, samples, 700 + m as u64);
                ensure(r.passed(), || format!("{c} m={m}: {} failed: {:?}", family.name(), r.witness))?;
            }
        }
    }
    Ok("grenet: 100 left passes and an obstructed right action (m = 2..5); regular_det: 50 GL passes; equivariant: left/right/transpose (m = 2..4)".into())
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..500 {
        let m = 1 + i % 7;
        let a = IntMatrix::from_fn(m, m, |_, _| BigInt::from(rng.gen_range(-9i64..=9)));
        let (r, n) = (perm_ryser(&a).unwrap(), perm_naive(&a).unwrap());
        ensure(r == n, || format!("matrix {i} (m={m}): ryser {r} vs naive {n}"))?;
    }
    for m in 1..=12 {
        let v = perm_ryser(&IntMatrix::filled(m, m, 1)).unwrap();
        ensure(v == factorial(m), || format!("perm(J_{m}) = {v}"))?;
    }
    Ok("ryser = naive on 500 seeded matrices (m <= 7); perm(J_m) = m! for m <= 12".into())
}

fn c7() -> Outcome {
    for n in 1..=6 {
        for symmetric in [false, true] {
            let w = waring_terms(n, symmetric).map_err(|e| e.to_string())?;
            let count = 1usize << if symmetric { n } else { n - 1 };
            ensure(w.terms.len() == count, || format!("n={n}: {} terms", w.terms.len()))?;
            ensure(w.is_exact(), || format!("n={n} symmetric={symmetric}: residue {}", w.scaled_expansion()))?;
        }
    }
    Ok("x1...xn exactly for n <= 6, 2^(n-1) and 2^n terms".into())
}

fn c8() -> Outcome {
    use detrep::exactmath::Polynomial;
    let v = |r, c| Polynomial::var(Variable::new(r, c));
    for s in 1..=5 {
        for c in [Construction::QuadricHalf, Construction::QuadricFull] {
            let p = constructions::build(c, s).map_err(|e| e.to_string())?;
            let want = (1..=s).fold(Polynomial::zero(), |acc, j| match c {
                Construction::QuadricHalf => acc + &v(1, j) * &v(2, j),
                _ => acc + &v(1, j) * &v(1, j),
            });
            let got = pencil_symbolic_det(&p).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("{c}({s}): det = {got}"))?;
            let rank = rank_exact(&p.constant_matrix());
            ensure(rank == s, || format!("{c}({s}): rank {rank}"))?;
        }
    }
    Ok("sum x_j y^j and sum z_j^2 for s, M <= 5 with rank A(0) = s, M".into())
}

fn c9() -> Outcome {
    let limit = Duration::from_secs(5);
    let p = constructions::grenet(10, true).map_err(|e| e.to_string())?;
    ensure(p.n() == 1023, || format!("n = {}", p.n()))?;
    let eval = PathEvaluator::new(&p).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = (Duration::ZERO, Duration::ZERO);
    for _ in 0..3 {
        let a = IntMatrix::from_fn(10, 10, |_, _| BigInt::from(rng.gen_range(-9i64..=9)));
        let start = Instant::now();
        let path = eval.eval(&a).map_err(|e| e.to_string())?.value;
        let tp = start.elapsed();
        let start = Instant::now();
        let ryser = perm_ryser(&a).unwrap();
        let tr = start.elapsed();
        ensure(path == ryser, || format!("path {path} vs ryser {ryser}"))?;
        worst = (worst.0.max(tp), worst.1.max(tr));
    }
    ensure(worst.0 < limit && worst.1 < limit, || format!("too slow: {worst:?}"))?;
    let (code, _) = detrep(&[
        "bench",
        "--m-range",
        "2..10",
        "--strategies",
        "ryser,pencil-dense,pencil-path",
        "--trials",
        "3",
        "--format",
        "json",
    ]);
    ensure(code == 0, || format!("bench cross-check exited {code}"))?;
    Ok(format!(
        "m = 10: path {:?} and ryser {:?} per evaluation, equal; dense agrees for m <= 7",
        worst.0, worst.1
    ))
}

fn c10() -> Outcome {
    let runs: [&[&str]; 5] = [
        &["verify", "grenet", "--m", "3", "--equivariance", "full", "--seed", "7", "--json"],
        &["verify", "regular-det", "--m", "4", "--equivariance", "full", "--seed", "7", "--json"],
        &["verify", "equivariant-perm", "--m", "2", "--equivariance", "full", "--seed", "7", "--json"],
        &["verify", "waring", "--n", "4", "--json"],
        &["bench", "--m-range", "2..6", "--seed", "7", "--format", "json"],
    ];
    for args in runs {
        let a = detrep(args).1;
        let b = detrep(args).1;
        ensure(!a.is_empty() && a == b, || format!("{args:?} differs between runs"))?;
        let mut threaded = args.to_vec();
        threaded.extend(["--jobs", "4"]);
        let c = detrep(&threaded).1;
        ensure(a == c, || format!("{args:?} differs with --jobs 4"))?;
    }
    Ok("verify and bench JSON byte-identical across repeated runs and thread counts".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("exact identity, small", c1, 10),
        ("displayed matrices", c2, 60),
        ("sign law of regular_det", c3, 30),
        ("equivariant sizes and factors", c4, 120),
        ("equivariance suites", c5, 120),
        ("oracle concordance", c6, 60),
        ("waring identities", c7, 60),
        ("quadrics", c8, 60),
        ("performance sanity", c9, 120),
        ("determinism", c10, 120),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > Duration::from_secs(*budget) => {
                Err(format!("took {elapsed:.1?}, budget {budget} s"))
            }
            r => r,
        };
        match result {
            Ok(detail) => println!("PASS criterion {:>2} ({name}): {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} ({name}): {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
