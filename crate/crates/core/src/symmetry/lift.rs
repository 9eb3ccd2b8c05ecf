use num_traits::{One, Zero};

use super::GroupElement;
use crate::combinatorics::{binomial, Subset};
use crate::error::{Error, Result};
use crate::exactmath::rational::{self, QMatrix};
use crate::exactmath::Rational;
use crate::pencil::{Construction, PencilMatrix};

/// Block-diagonal pair `(B₁, B₂)` with `Ã(g·y) B₂ = B₁ Ã(y)`, stored blockwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedPair {
    pub b1: Vec<QMatrix>,
    pub b2: Vec<QMatrix>,
    /// `det B₁ / det B₂`.
    pub chi: Rational,
}

fn dense(blocks: &[QMatrix]) -> QMatrix {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut out = vec![vec![Rational::zero(); n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                out[off + i][off + j] = x.clone();
            }
        }
        off += b.len();
    }
    out
}

impl LiftedPair {
    fn new(b1: Vec<QMatrix>, b2: Vec<QMatrix>) -> Result<Self> {
        // blocks shared by both sides cancel in the ratio
        let mut chi = Rational::one();
        for (x, y) in b1.iter().zip(&b2) {
            if x != y {
                let (dx, dy) = (rational::det(x), rational::det(y));
                if dx.is_zero() || dy.is_zero() {
                    return Err(Error::Internal("lift is singular".into()));
                }
                chi *= dx / dy;
            }
        }
        Ok(LiftedPair { b1, b2, chi })
    }

    pub fn dense_b1(&self) -> QMatrix {
        dense(&self.b1)
    }

    pub fn dense_b2(&self) -> QMatrix {
        dense(&self.b2)
    }

    /// Blockwise product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let prod = |x: &[QMatrix], y: &[QMatrix]| -> Vec<QMatrix> {
            x.iter().zip(y).map(|(a, b)| rational::mul(a, b)).collect()
        };
        if self.b1.len() != other.b1.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} blocks", self.b1.len()),
                actual: other.b1.len().to_string(),
            });
        }
        LiftedPair::new(prod(&self.b1, &other.b1), prod(&self.b2, &other.b2))
    }
}

/// Pattern of a monomial matrix: `C e_i = coeff[i] · e_{row[i]}`.
fn monomial_pattern(c: &QMatrix) -> Option<(Vec<usize>, Vec<Rational>)> {
    let m = c.len();
    let mut rows = Vec::with_capacity(m);
    let mut coeffs = Vec::with_capacity(m);
    let mut used = vec![false; m];
    for j in 0..m {
        let mut nz = (0..m).filter(|&i| !c[i][j].is_zero());
        let i = nz.next()?;
        if nz.next().is_some() || std::mem::replace(&mut used[i], true) {
            return None;
        }
        rows.push(i);
        coeffs.push(c[i][j].clone());
    }
    Some((rows, coeffs))
}

/// Induced action of a monomial matrix on square-free degree-`k` monomials:
/// `e_I ↦ Π_{i∈I} c_i · e_{σ(I)}` with no signs. `None` when `c` is not monomial.
pub fn regular_power(c: &QMatrix, k: usize) -> Option<QMatrix> {
    let m = c.len();
    let (rows, coeffs) = monomial_pattern(c)?;
    let d = binomial(m, k) as usize;
    let mut out = vec![vec![Rational::zero(); d]; d];
    for set in Subset::all(m, k).expect("ground set in range") {
        let image: Vec<usize> = set.members().map(|i| rows[i - 1] + 1).collect();
        let target = Subset::new(m, &image).expect("members in range");
        let coeff = set.members().fold(Rational::one(), |acc, i| acc * &coeffs[i - 1]);
        out[target.rank() as usize][set.rank() as usize] = coeff;
    }
    Some(out)
}

/// `c^{∧k}` in the colex basis: entry `(J, I)` is the minor `det c[J, I]`.
pub fn exterior_power(c: &QMatrix, k: usize) -> QMatrix {
    let m = c.len();
    let sets = Subset::all(m, k).expect("ground set in range");
    sets.iter()
        .map(|rows| {
            sets.iter()
                .map(|cols| {
                    let sub: QMatrix = rows
                        .members()
                        .map(|i| cols.members().map(|j| c[i - 1][j - 1].clone()).collect())
                        .collect();
                    rational::det(&sub)
                })
                .collect()
        })
        .collect()
}

fn kron(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let (p, q) = (a.len(), b.len());
    let mut out = vec![vec![Rational::zero(); p * q]; p * q];
    for i in 0..p {
        for j in 0..p {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..q {
                for l in 0..q {
                    if !b[k][l].is_zero() {
                        out[i * q + k][j * q + l] = &a[i][j] * &b[k][l];
                    }
                }
            }
        }
    }
    out
}

/// Permutation `e_(I,J) ↦ e_(J,I)` on a pair block of width `w`.
fn swap_pairs(w: usize) -> QMatrix {
    let mut out = vec![vec![Rational::zero(); w * w]; w * w];
    for a in 0..w {
        for b in 0..w {
            out[b * w + a][a * w + b] = Rational::one();
        }
    }
    out
}

fn diagonal(b: &QMatrix) -> Option<Vec<Rational>> {
    for (i, row) in b.iter().enumerate() {
        if row.iter().enumerate().any(|(j, x)| i != j && !x.is_zero()) {
            return None;
        }
    }
    Some(b.iter().enumerate().map(|(i, r)| r[i].clone()).collect())
}

fn scaled(a: &QMatrix, s: &Rational) -> QMatrix {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

/// Builds `(B₁, B₂)` for `g`, or [`Error::IncompatibleElement`] when the
/// construction carries no lift of this kind.
pub fn induced_action(p: &PencilMatrix, g: &GroupElement) -> Result<LiftedPair> {
    let c = p.meta().construction;
    let m = p.m();
    let incompatible = |reason: &str| Error::IncompatibleElement {
        construction: c.name().to_string(),
        reason: reason.to_string(),
    };
    let layout = p.layout();
    if g.is_identity() {
        let id: Vec<QMatrix> = layout.blocks().iter().map(|b| rational::identity(b.dim)).collect();
        return LiftedPair::new(id.clone(), id);
    }
    if p.shape() != (m, m) || g.m() != m {
        return Err(incompatible("only the identity acts on this argument shape"));
    }
    let (a, b) = g.matrices();
    let exterior = matches!(c, Construction::RegularDet | Construction::EquivariantDet);
    let power = |x: &QMatrix, k: usize| -> Result<QMatrix> {
        if exterior {
            Ok(exterior_power(x, k))
        } else {
            regular_power(x, k).ok_or_else(|| incompatible("factor is not a monomial matrix"))
        }
    };
    match c {
        Construction::Grenet | Construction::RegularDet => {
            if g.transposes() {
                return Err(incompatible("transposition mixes rows and levels"));
            }
            let u = diagonal(&b).ok_or_else(|| incompatible("right factor must be diagonal"))?;
            // column k of y feeds block k-1 -> k; scaling it by 1/u_k is absorbed blockwise
            let mut b2 = Vec::with_capacity(m);
            let mut s = Rational::one();
            for k in 0..m {
                if k > 0 {
                    s /= &u[k - 1];
                }
                b2.push(scaled(&power(&a, k)?, &s));
            }
            let corner = &power(&a, m)?[0][0] * (s / &u[m - 1]);
            let mut b1 = b2.clone();
            b1[0] = vec![vec![corner]];
            LiftedPair::new(b1, b2)
        }
        Construction::EquivariantPerm | Construction::EquivariantDet => {
            let b_inv = rational::inverse(&b).expect("validated invertible");
            let gf = rational::transpose(&b_inv);
            let mut b2 = Vec::with_capacity(m);
            for k in 0..m {
                let mut blk = kron(&power(&a, k)?, &power(&gf, k)?);
                if g.transposes() {
                    blk = rational::mul(&swap_pairs(binomial(m, k) as usize), &blk);
                }
                b2.push(blk);
            }
            let corner = &power(&a, m)?[0][0] * &power(&gf, m)?[0][0];
            let mut b1 = b2.clone();
            b1[0] = vec![vec![corner]];
            LiftedPair::new(b1, b2)
        }
        Construction::TrivialDet => {
            if g.transposes() {
                return Err(incompatible("transposition of the identity pencil is not two-sided"));
            }
            LiftedPair::new(vec![a], vec![b])
        }
        Construction::QuadricHalf | Construction::QuadricFull => {
            Err(incompatible("only the identity acts on this argument shape"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions;
    use crate::exactmath::rational::rat;
    use crate::symmetry::{random_element, Action, Family, MonomialMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_lifts_to_identity() {
        let p = constructions::equivariant_det(2).unwrap();
        let lift = induced_action(&p, &GroupElement::identity(2)).unwrap();
        assert_eq!(lift.dense_b1(), rational::identity(5));
        assert_eq!(lift.dense_b2(), rational::identity(5));
        assert_eq!(lift.chi, Rational::one());
    }

    #[test]
    fn cyclic_shift_acts_on_block_one_by_its_permutation_matrix() {
        let p = constructions::grenet(3, true).unwrap();
        let sigma = MonomialMatrix::permutation(vec![1, 2, 0]).unwrap();
        let want = sigma.matrix();
        let g = GroupElement::new(3, Action::PermSide(sigma), false).unwrap();
        let lift = induced_action(&p, &g).unwrap();
        assert_eq!(lift.b2[1], want);
        assert_eq!(lift.b2[0], vec![vec![Rational::one()]]);
    }

    #[test]
    fn second_exterior_power_is_the_matrix_of_minors() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g = loop {
            let g: QMatrix = (0..3).map(|_| (0..3).map(|_| rat(rng.gen_range(-2..=2))).collect()).collect();
            if rational::det(&g) == rat(2) {
                break g;
            }
        };
        let p = constructions::regular_det(3).unwrap();
        let lift = induced_action(&p, &GroupElement::new(3, Action::GlSide(g.clone()), false).unwrap()).unwrap();
        // colex basis {1,2}, {1,3}, {2,3}
        let basis = [(0, 1), (0, 2), (1, 2)];
        for (r, &(i, k)) in basis.iter().enumerate() {
            for (c, &(j, l)) in basis.iter().enumerate() {
                let minor = &g[i][j] * &g[k][l] - &g[i][l] * &g[k][j];
                assert_eq!(lift.b2[2][r][c], minor);
            }
        }
        assert_eq!(lift.chi, rat(2));
    }

    #[test]
    fn lifts_are_homomorphic() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let cases = [
            (Construction::Grenet, Family::Left),
            (Construction::RegularDet, Family::Left),
            (Construction::EquivariantPerm, Family::Pair),
            (Construction::EquivariantDet, Family::Pair),
            (Construction::TrivialDet, Family::Pair),
        ];
        for (c, family) in cases {
            for m in 2..=4 {
                let p = constructions::build(c, m).unwrap();
                for _ in 0..20 {
                    let g = random_element(c, m, family, &mut rng);
                    let h = random_element(c, m, family, &mut rng);
                    let gh = g.compose(&h).unwrap();
                    let composed = induced_action(&p, &g)
                        .unwrap()
                        .compose(&induced_action(&p, &h).unwrap())
                        .unwrap();
                    assert_eq!(induced_action(&p, &gh).unwrap(), composed, "{c} m={m}");
                }
            }
        }
    }

    #[test]
    fn monomial_detection() {
        let m = MonomialMatrix::new(vec![2, 0, 1], vec![rat(2), rat(-1), rat(3)]).unwrap();
        assert!(monomial_pattern(&m.matrix()).is_some());
        let mut dense = m.matrix();
        dense[0][0] = rat(1);
        assert!(monomial_pattern(&dense).is_none());
        assert!(regular_power(&dense, 1).is_none());
    }
}
