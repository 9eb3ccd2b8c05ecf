use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Mode, PencilMatrix, VerificationReport, Witness};
use crate::exactmath::{det_mod_p, modular, DEFAULT_PRIMES};

/// Parameters of a randomized identity test. Trial `i` draws its points from
/// a generator seeded with `seed + i`, so results do not depend on `jobs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PitConfig {
    pub trials: usize,
    pub primes: Vec<u64>,
    pub seed: u64,
    pub jobs: usize,
}

impl Default for PitConfig {
    fn default() -> Self {
        PitConfig {
            trials: 20,
            primes: DEFAULT_PRIMES.to_vec(),
            seed: 0,
            jobs: 1,
        }
    }
}

impl PitConfig {
    pub fn with_seed(seed: u64) -> Self {
        PitConfig {
            seed,
            ..Self::default()
        }
    }
}

/// Compares `det(Ã(y))` with `sign · factor · target(y)` at seeded uniform
/// points of `F_p` for every configured prime.
pub fn pencil_pit_equal(p: &PencilMatrix, cfg: &PitConfig) -> VerificationReport {
    let target = p.meta().target();
    let shape = p.shape();
    pit_against(p, cfg, |point: &[u64], prime: u64| target.eval_mod(point, shape, prime))
}

/// As [`pencil_pit_equal`] with an explicit target evaluator; the metadata
/// multiplier is still applied on the target side.
pub fn pit_against<F>(p: &PencilMatrix, cfg: &PitConfig, target: F) -> VerificationReport
where
    F: Fn(&[u64], u64) -> u64 + Sync,
{
    let trials = cfg.trials.max(1);
    let jobs = cfg.jobs.clamp(1, trials);
    let run = |i: usize| run_trial(p, cfg, i, &target);
    let first_failure = if jobs == 1 {
        (0..trials).find_map(run)
    } else {
        let chunk = trials.div_ceil(jobs);
        let found: Vec<Option<Witness>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..jobs)
                .map(|j| {
                    let run = &run;
                    s.spawn(move || (j * chunk..((j + 1) * chunk).min(trials)).find_map(run))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("pit worker panicked")).collect()
        });
        // chunks are in trial order, so the first hit is the smallest trial
        found.into_iter().flatten().next()
    };
    let mut report = match first_failure {
        None => VerificationReport::pass("identity", Mode::Pit),
        Some(w) => VerificationReport::fail("identity", Mode::Pit, w),
    };
    report.trials = trials;
    report.primes = cfg.primes.clone();
    report.seed = Some(cfg.seed);
    report.detail = Some(format!(
        "det(A(y)) = {} * {}",
        p.meta().multiplier(),
        p.meta().target().name()
    ));
    report
}

fn run_trial<F>(p: &PencilMatrix, cfg: &PitConfig, trial: usize, target: &F) -> Option<Witness>
where
    F: Fn(&[u64], u64) -> u64,
{
    let (rows, cols) = p.shape();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(trial as u64));
    let multiplier = p.meta().multiplier();
    for &prime in &cfg.primes {
        let point: Vec<u64> = (0..rows * cols).map(|_| rng.gen_range(0..prime)).collect();
        let m = p.eval_mod(&point, prime).expect("point has pencil shape");
        let lhs = det_mod_p(&m, p.n(), prime);
        let rhs = modular::mul_mod(modular::reduce(&multiplier, prime), target(&point, prime), prime);
        if lhs != rhs {
            return Some(Witness::ModularPoint {
                prime,
                trial,
                point: point.chunks(cols).map(<[u64]>::to_vec).collect(),
                lhs,
                rhs,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions;
    use crate::pencil::AffineForm;

    #[test]
    fn grenet_five_against_ryser() {
        let p = constructions::grenet(5, true).unwrap();
        let report = pencil_pit_equal(&p, &PitConfig::with_seed(3));
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.primes.len(), 3);
    }

    #[test]
    fn corrupted_pencil_is_caught() {
        let p = constructions::grenet(3, true).unwrap();
        let (r, c, f) = p.entries().find(|(_, _, f)| !f.is_constant()).unwrap();
        let (v, coeff) = f.linear()[0].clone();
        let flipped = AffineForm::term(v, -coeff);
        assert_ne!(&flipped, f);
        let bad = p.with_entry(r, c, flipped);
        let report = pencil_pit_equal(&bad, &PitConfig::with_seed(3));
        assert!(!report.passed());
        assert!(matches!(report.witness, Some(Witness::ModularPoint { .. })));
    }

    #[test]
    fn parallel_trials_give_identical_reports() {
        let p = constructions::grenet(3, true).unwrap();
        let bad = p.with_entry(0, p.n() - 1, AffineForm::zero());
        let serial = PitConfig::with_seed(9);
        let parallel = PitConfig { jobs: 4, ..serial.clone() };
        assert_eq!(pencil_pit_equal(&bad, &serial), pencil_pit_equal(&bad, &parallel));
        assert_eq!(pencil_pit_equal(&p, &serial), pencil_pit_equal(&p, &parallel));
    }
}
