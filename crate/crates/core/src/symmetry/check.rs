use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{induced_action, random_element, GroupElement, LiftedPair};
use crate::error::Error;
use crate::exactmath::rational::{self, QMatrix};
use crate::exactmath::Rational;
use crate::pencil::{AffineForm, Mode, PencilMatrix, Target, VerificationReport, Witness};

/// Which kind of group elements a suite draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Acting on `E` only.
    Left,
    /// Acting on `F` only, with a non-trivial permutation part.
    Right,
    /// Acting on both factors.
    Pair,
    /// Both factors, followed by transposition.
    Transpose,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Left => "left",
            Family::Right => "right",
            Family::Pair => "pair",
            Family::Transpose => "transpose",
        }
    }
}

/// `P(g·y) / P(y)` for the target, when it is a constant.
fn expected_character(target: Target, g: &GroupElement) -> Option<Rational> {
    let (a, b) = g.matrices();
    match target {
        Target::Determinant => Some(rational::det(&a) / rational::det(&b)),
        Target::Permanent => {
            let product = |x: &QMatrix| -> Option<Rational> {
                let mut acc = Rational::one();
                for j in 0..x.len() {
                    let mut nz = x.iter().map(|r| &r[j]).filter(|v| !v.is_zero());
                    acc *= nz.next()?;
                    if nz.next().is_some() {
                        return None;
                    }
                }
                Some(acc)
            };
            Some(product(&a)? / product(&b)?)
        }
        Target::BilinearForm | Target::SumOfSquares => g.is_identity().then(Rational::one),
    }
}

type SparseRows = Vec<Vec<(usize, Rational)>>;

fn block_rows(blocks: &[QMatrix]) -> SparseRows {
    let mut out = Vec::new();
    let mut off = 0;
    for b in blocks {
        for row in b {
            out.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (off + j, x.clone()))
                    .collect(),
            );
        }
        off += b.len();
    }
    out
}

/// First nonzero entry of `Ã(g·y)·B₂ - B₁·Ã(y)`.
fn first_residue(
    p: &PencilMatrix,
    g: &GroupElement,
    lift: &LiftedPair,
) -> Option<(usize, usize, AffineForm<Rational>)> {
    let q = p.to_rational();
    let n = q.n();
    let images = g.symbolic_images();
    let b1 = block_rows(&lift.b1);
    let b2 = block_rows(&lift.b2);
    for r in 0..n {
        let mut acc: BTreeMap<usize, AffineForm<Rational>> = BTreeMap::new();
        for (c, f) in q.row(r) {
            let moved = f.substitute(|v| images[v.row as usize - 1][v.col as usize - 1].clone());
            for (j, x) in &b2[*c] {
                acc.entry(*j).or_insert_with(AffineForm::zero).add_scaled(&moved, x);
            }
        }
        let minus_one = -Rational::one();
        for (c, x) in &b1[r] {
            let scale = x * &minus_one;
            for (j, f) in q.row(*c) {
                acc.entry(*j).or_insert_with(AffineForm::zero).add_scaled(f, &scale);
            }
        }
        if let Some((j, f)) = acc.into_iter().find(|(_, f)| !f.is_zero()) {
            return Some((r, j, f));
        }
    }
    None
}

/// Linear part `A(y)` at a numeric argument.
fn linear_image(p: &PencilMatrix, y: &QMatrix) -> QMatrix {
    let n = p.n();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for (r, c, f) in p.entries() {
        for (v, k) in f.linear() {
            let x = &y[v.row as usize - 1][v.col as usize - 1];
            if !x.is_zero() {
                out[r][c] += Rational::from_integer(k.clone()) * x;
            }
        }
    }
    out
}

/// `(dim Σ column spaces, dim Σ row spaces)` of `A(w)` over a spanning set.
fn span_ranks(p: &PencilMatrix, args: &[QMatrix]) -> (usize, usize) {
    let images: Vec<QMatrix> = args.iter().map(|y| linear_image(p, y)).collect();
    let n = p.n();
    let wide: QMatrix = (0..n)
        .map(|r| images.iter().flat_map(|a| a[r].iter().cloned()).collect())
        .collect();
    let tall: QMatrix = images.iter().flat_map(|a| a.iter().cloned()).collect();
    (rational::rank(&wide), rational::rank(&tall))
}

/// Searches coordinate rows and columns of the argument for a subspace `W`
/// whose image spans change under `g`. Any lift would conjugate `A(W)` into
/// `A(g·W)`, so a change rules out every lift.
fn find_obstruction(p: &PencilMatrix, g: &GroupElement) -> Option<Witness> {
    let (rows, cols) = p.shape();
    if rows != cols || g.m() != rows {
        return None;
    }
    let m = rows;
    let unit = |r: usize, c: usize| {
        let mut y = vec![vec![Rational::zero(); m]; m];
        y[r][c] = Rational::one();
        y
    };
    let mut subspaces: Vec<(String, Vec<QMatrix>)> = Vec::new();
    for c in 0..m {
        subspaces.push((format!("column {}", c + 1), (0..m).map(|r| unit(r, c)).collect()));
    }
    for r in 0..m {
        subspaces.push((format!("row {}", r + 1), (0..m).map(|c| unit(r, c)).collect()));
    }
    for (name, basis) in subspaces {
        let moved: Vec<QMatrix> = basis.iter().map(|y| g.act(y).expect("square argument")).collect();
        let before = span_ranks(p, &basis);
        let after = span_ranks(p, &moved);
        if before.0 != after.0 {
            return Some(Witness::Obstruction {
                subspace: name,
                invariant: "column span".into(),
                before: before.0,
                after: after.0,
            });
        }
        if before.1 != after.1 {
            return Some(Witness::Obstruction {
                subspace: name,
                invariant: "row span".into(),
                before: before.1,
                after: after.1,
            });
        }
    }
    None
}

/// Verifies `Ã(g·y)·B₂ = B₁·Ã(y)` exactly over the rationals together with
/// `det B₁ / det B₂ = P(g·y) / P(y)`.
pub fn check_equivariance(p: &PencilMatrix, g: &GroupElement) -> VerificationReport {
    const CHECK: &str = "equivariance";
    let lift = match induced_action(p, g) {
        Ok(lift) => lift,
        Err(Error::IncompatibleElement { reason, .. }) => {
            let witness = find_obstruction(p, g).unwrap_or(Witness::NoLift { reason: reason.clone() });
            return VerificationReport::fail(CHECK, Mode::Exact, witness).with_detail(reason);
        }
        Err(e) => {
            return VerificationReport::fail(CHECK, Mode::Exact, Witness::NoLift { reason: e.to_string() })
        }
    };
    if let Some((r, c, f)) = first_residue(p, g, &lift) {
        let layout = p.layout();
        let (block_row, row) = layout.locate(r);
        let (block_col, col) = layout.locate(c);
        return VerificationReport::fail(
            CHECK,
            Mode::Exact,
            Witness::Block {
                block_row,
                block_col,
                row,
                col,
                residue: f.to_string(),
            },
        );
    }
    let expected = expected_character(p.meta().target(), g);
    if expected.as_ref() != Some(&lift.chi) {
        return VerificationReport::fail(
            CHECK,
            Mode::Exact,
            Witness::Character {
                expected: expected.map_or_else(|| "undefined".into(), |x| x.to_string()),
                actual: lift.chi.to_string(),
            },
        );
    }
    VerificationReport::pass(CHECK, Mode::Exact).with_detail(format!("chi = {}", lift.chi))
}

/// Passes iff `rank Ã(0) = n - 1`.
pub fn check_regularity(p: &PencilMatrix) -> VerificationReport {
    let n = p.n();
    let rank = p.constant_matrix().rank();
    if n > 0 && rank == n - 1 {
        VerificationReport::pass("regularity", Mode::Exact).with_detail(format!("rank {rank} of {n}"))
    } else {
        VerificationReport::fail(
            "regularity",
            Mode::Exact,
            Witness::Rank {
                expected: n.saturating_sub(1),
                actual: rank,
            },
        )
    }
}

/// Checks `samples` seeded elements of one family; element `i` is drawn from
/// a generator seeded with `seed + i`. Stops at the first failure.
pub fn equivariance_suite(p: &PencilMatrix, family: Family, samples: usize, seed: u64) -> VerificationReport {
    let c = p.meta().construction;
    let m = p.m();
    let check = format!("equivariance-{}", family.name());
    let samples = samples.max(1);
    for i in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let g = random_element(c, m, family, &mut rng);
        let report = check_equivariance(p, &g);
        if !report.passed() {
            let mut out = VerificationReport {
                check,
                trials: i + 1,
                seed: Some(seed),
                ..report
            };
            out.detail = Some(format!("element {i}: {:?}", g.action()));
            return out;
        }
    }
    let mut out = VerificationReport::pass(check, Mode::Exact).with_trials(samples);
    out.seed = Some(seed);
    out
}
