//! Builders for the explicit representations.
//!
//! All cyclic constructions share one layout: blocks `k = 0, .., L-1` in
//! order, identities on the diagonal of blocks `1..L`, linear maps from block
//! `k` into block `k + 1` and a corner map from the last block back to the
//! scalar block 0.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::{binomial, Subset};
use crate::error::{Error, Result};
use crate::exactmath::{Monomial, Polynomial, Rational};
use crate::pencil::{AffineForm, BasisKind, Block, BlockLayout, Construction, Metadata, PencilMatrix, Variable};

pub const MAX_HALF_M: usize = 16;
pub const MAX_PAIR_M: usize = 8;
pub const MAX_QUADRIC: usize = 4096;
pub const MAX_WARING: usize = 20;

fn check_range(what: &'static str, m: usize, min: usize, max: usize) -> Result<()> {
    if m < min || m > max {
        return Err(Error::SizeOutOfRange { what, m, min, max });
    }
    Ok(())
}

fn factorial(m: usize) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, k| acc * k)
}

fn alternating(e: usize) -> i8 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The canonical block layout of a construction; JSON import checks against it.
pub fn layout(c: Construction, m: usize) -> Result<BlockLayout> {
    let subset_blocks = |name: &dyn Fn(usize) -> String, pairs: bool| {
        let blocks = (0..m)
            .map(|k| {
                let d = binomial(m, k) as usize;
                Block {
                    label: name(k),
                    dim: if pairs { d * d } else { d },
                    basis: match (k, pairs) {
                        (0, _) => BasisKind::Scalar,
                        (_, false) => BasisKind::Subsets { k, m },
                        (_, true) => BasisKind::SubsetPairs { k, m },
                    },
                }
            })
            .collect();
        BlockLayout::new(blocks)
    };
    match c {
        Construction::Grenet => {
            check_range("grenet", m, 2, MAX_HALF_M)?;
            subset_blocks(&|k| format!("S{k}E_reg"), false)
        }
        Construction::RegularDet => {
            check_range("regular-det", m, 2, MAX_HALF_M)?;
            subset_blocks(&|k| format!("L{k}E"), false)
        }
        Construction::EquivariantPerm => {
            check_range("equivariant-perm", m, 2, MAX_PAIR_M)?;
            subset_blocks(&|k| format!("S{k}E_reg*S{k}F_reg"), true)
        }
        Construction::EquivariantDet => {
            check_range("equivariant-det", m, 2, MAX_PAIR_M)?;
            subset_blocks(&|k| format!("L{k}E*L{k}F"), true)
        }
        Construction::QuadricHalf | Construction::QuadricFull => {
            check_range(c.name(), m, 1, MAX_QUADRIC)?;
            BlockLayout::new(vec![
                Block {
                    label: "scalar".into(),
                    dim: 1,
                    basis: BasisKind::Scalar,
                },
                Block {
                    label: "coords".into(),
                    dim: m,
                    basis: BasisKind::Coordinates,
                },
            ])
        }
        Construction::TrivialDet => {
            check_range("trivial-det", m, 1, MAX_QUADRIC)?;
            BlockLayout::new(vec![Block {
                label: "coords".into(),
                dim: m,
                basis: BasisKind::Coordinates,
            }])
        }
    }
}

/// Builds a construction with default options; grenet gets the exact sign.
pub fn build(c: Construction, m: usize) -> Result<PencilMatrix> {
    match c {
        Construction::Grenet => grenet(m, true),
        Construction::RegularDet => regular_det(m),
        Construction::EquivariantPerm => equivariant_perm(m),
        Construction::EquivariantDet => equivariant_det(m),
        Construction::QuadricHalf => quadric_half(m),
        Construction::QuadricFull => quadric_full(m),
        Construction::TrivialDet => trivial_det(m),
    }
}

type Triplet = (usize, usize, AffineForm);

fn identities(layout: &BlockLayout, block_one_sign: i8) -> Vec<Triplet> {
    let offsets = layout.offsets();
    let mut out = Vec::new();
    for k in 1..layout.len() {
        let s = if k == 1 { block_one_sign } else { 1 };
        for i in offsets[k]..offsets[k + 1] {
            out.push((i, i, AffineForm::constant(BigInt::from(s))));
        }
    }
    out
}

/// `s_k` or `ex_k`: `e_I ↦ e_i · e_I` into block `k + 1 mod m`, variable `y^{k+1}_i`.
fn half_links(m: usize, offsets: &[usize], signed: bool) -> Result<Vec<Triplet>> {
    let mut out = Vec::new();
    for k in 0..m {
        let target = (k + 1) % m;
        for set in Subset::all(m, k)? {
            let col = offsets[k] + set.rank() as usize;
            for i in 1..=m {
                let Some(up) = set.insert(i)? else { continue };
                let sign = if signed { set.wedge_sign(i)? } else { 1 };
                let row = offsets[target] + up.rank() as usize;
                out.push((row, col, AffineForm::term(Variable::new(i, k + 1), BigInt::from(sign))));
            }
        }
    }
    Ok(out)
}

/// `S_k` or `EX_k`: `e_I ⊗ f_J ↦ e_i e_I ⊗ f_j f_J`, variable `y^j_i`.
fn pair_links(m: usize, offsets: &[usize], signed: bool) -> Result<Vec<Triplet>> {
    let mut out = Vec::new();
    for k in 0..m {
        let target = (k + 1) % m;
        let width = binomial(m, k) as usize;
        let up_width = binomial(m, k + 1) as usize;
        let sets = Subset::all(m, k)?;
        for a in &sets {
            for b in &sets {
                let col = offsets[k] + a.rank() as usize * width + b.rank() as usize;
                for i in 1..=m {
                    let Some(ai) = a.insert(i)? else { continue };
                    for j in 1..=m {
                        let Some(bj) = b.insert(j)? else { continue };
                        let sign = if signed { a.wedge_sign(i)? * b.wedge_sign(j)? } else { 1 };
                        let row = offsets[target] + ai.rank() as usize * up_width + bj.rank() as usize;
                        out.push((row, col, AffineForm::term(Variable::new(i, j), BigInt::from(sign))));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn assemble(
    construction: Construction,
    m: usize,
    sign: i8,
    factor: BigInt,
    exponent: usize,
    links: impl FnOnce(&[usize]) -> Result<Vec<Triplet>>,
    block_one_sign: i8,
) -> Result<PencilMatrix> {
    let layout = layout(construction, m)?;
    let offsets = layout.offsets();
    let mut triplets = identities(&layout, block_one_sign);
    triplets.extend(links(&offsets)?);
    let meta = Metadata {
        construction,
        m,
        sign,
        scaling_exponent: exponent,
        expected_factor: factor,
    };
    PencilMatrix::from_triplets(meta, layout, triplets)
}

/// Grenet's representation of `perm_m`, size `2^m - 1`.
///
/// Without `exact_sign` the determinant is `(-1)^(m+1) perm_m`; with it the
/// block-1 identity is multiplied by `(-1)^(m+1)` and the determinant is `perm_m`.
pub fn grenet(m: usize, exact_sign: bool) -> Result<PencilMatrix> {
    let flip = alternating(m + 1);
    let (sign, block_one) = if exact_sign { (1, flip) } else { (flip, 1) };
    assemble(
        Construction::Grenet,
        m,
        sign,
        BigInt::one(),
        0,
        |off| half_links(m, off, false),
        block_one,
    )
}

/// Regular representation of `det_m` through exterior multiplication.
/// The identity sign is `+1` for `m ≡ 1, 2 (mod 4)` and `-1` otherwise.
pub fn regular_det(m: usize) -> Result<PencilMatrix> {
    let sign = if matches!(m % 4, 1 | 2) { 1 } else { -1 };
    assemble(
        Construction::RegularDet,
        m,
        sign,
        BigInt::one(),
        0,
        |off| half_links(m, off, true),
        1,
    )
}

/// Equivariant representation of `perm_m` of size `binom(2m, m) - 1`, unscaled:
/// `det = (-1)^(m+1) m! perm_m`. Scaling the constant part by
/// `(m!)^(-1/(n-m))` removes the factor.
pub fn equivariant_perm(m: usize) -> Result<PencilMatrix> {
    check_range("equivariant-perm", m, 2, MAX_PAIR_M)?;
    let n = binomial(2 * m, m) as usize - 1;
    assemble(
        Construction::EquivariantPerm,
        m,
        alternating(m + 1),
        factorial(m),
        n - m,
        |off| pair_links(m, off, false),
        1,
    )
}

/// Equivariant regular representation of `det_m`, unscaled like [`equivariant_perm`].
pub fn equivariant_det(m: usize) -> Result<PencilMatrix> {
    check_range("equivariant-det", m, 2, MAX_PAIR_M)?;
    let n = binomial(2 * m, m) as usize - 1;
    assemble(
        Construction::EquivariantDet,
        m,
        alternating(m + 1),
        factorial(m),
        n - m,
        |off| pair_links(m, off, true),
        1,
    )
}

fn quadric(c: Construction, s: usize, left: impl Fn(usize) -> Variable, right: impl Fn(usize) -> Variable) -> Result<PencilMatrix> {
    let layout = layout(c, s)?;
    let mut triplets = identities(&layout, 1);
    for j in 1..=s {
        triplets.push((0, j, AffineForm::term(left(j), -BigInt::one())));
        triplets.push((j, 0, AffineForm::term(right(j), BigInt::one())));
    }
    let meta = Metadata {
        construction: c,
        m: s,
        sign: 1,
        scaling_exponent: 0,
        expected_factor: BigInt::one(),
    };
    PencilMatrix::from_triplets(meta, layout, triplets)
}

/// `[[0, -x^T], [y, I_s]]` with determinant `Σ x_j y^j`; `x` is row 1 and
/// `y` row 2 of the `2 × s` argument.
pub fn quadric_half(s: usize) -> Result<PencilMatrix> {
    quadric(Construction::QuadricHalf, s, |j| Variable::new(1, j), |j| Variable::new(2, j))
}

/// `[[0, -z^T], [z, I_M]]` with determinant `Σ z_j²`.
pub fn quadric_full(big_m: usize) -> Result<PencilMatrix> {
    quadric(Construction::QuadricFull, big_m, |j| Variable::new(1, j), |j| Variable::new(1, j))
}

/// `Ã(y) = y`: equivariant, but with zero constant part.
pub fn trivial_det(m: usize) -> Result<PencilMatrix> {
    let layout = layout(Construction::TrivialDet, m)?;
    let triplets = (0..m).flat_map(|r| {
        (0..m).map(move |c| (r, c, AffineForm::term(Variable::new(r + 1, c + 1), BigInt::one())))
    });
    let meta = Metadata {
        construction: Construction::TrivialDet,
        m,
        sign: 1,
        scaling_exponent: 0,
        expected_factor: BigInt::one(),
    };
    PencilMatrix::from_triplets(meta, layout, triplets)
}

/// `x_1 ⋯ x_n = Σ coeff · (Σ_j ε_j x_j)^n` over sign vectors `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaringDecomposition {
    pub n: usize,
    pub terms: Vec<(Rational, Vec<i64>)>,
    pub symmetric: bool,
}

/// Index of a variable `x_i` in a Waring expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct X(pub usize);

impl std::fmt::Display for X {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl WaringDecomposition {
    /// Common denominator `2^(n-1) n!` (or `2^n n!` when symmetric).
    pub fn denominator(&self) -> BigInt {
        let twos = if self.symmetric { self.n } else { self.n - 1 };
        (BigInt::one() << twos) * factorial(self.n)
    }

    /// `denominator · Σ coeff · ℓ^n`, an integer polynomial.
    pub fn scaled_expansion(&self) -> Polynomial<X> {
        let d = Rational::from_integer(self.denominator());
        let mut acc = Polynomial::zero();
        for (coeff, eps) in &self.terms {
            let form = Polynomial::from_terms(
                eps.iter()
                    .enumerate()
                    .map(|(j, &e)| (Monomial::var(X(j + 1)), BigInt::from(e))),
            );
            let scale = (coeff * &d).to_integer();
            acc += &form.pow(self.n as u32).scale(&scale);
        }
        acc
    }

    /// Whether the decomposition sums to `x_1 ⋯ x_n` exactly.
    pub fn is_exact(&self) -> bool {
        let product = Monomial::from_pairs((1..=self.n).map(|j| (X(j), 1)));
        self.scaled_expansion() == Polynomial::from_terms([(product, self.denominator())])
    }
}

/// Fischer's formula with `2^(n-1)` terms (`ε_1 = 1`), or the symmetric
/// version over all `2^n` sign vectors.
pub fn waring_terms(n: usize, symmetric: bool) -> Result<WaringDecomposition> {
    check_range("waring", n, 1, MAX_WARING)?;
    let free = if symmetric { n } else { n - 1 };
    let mut out = WaringDecomposition {
        n,
        terms: Vec::with_capacity(1 << free),
        symmetric,
    };
    let denominator = out.denominator();
    for mask in 0u64..1 << free {
        let mut eps = Vec::with_capacity(n);
        if !symmetric {
            eps.push(1);
        }
        eps.extend((0..free).map(|b| if mask >> b & 1 == 1 { -1i64 } else { 1 }));
        let negative = eps.iter().filter(|&&e| e < 0).count();
        let coeff = Rational::new(BigInt::from(alternating(negative)), denominator.clone());
        out.terms.push((coeff, eps));
    }
    debug_assert!(out.terms.iter().all(|(c, _)| !c.is_zero()));
    Ok(out)
}
