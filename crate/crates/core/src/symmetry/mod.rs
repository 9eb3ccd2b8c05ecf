//! Executable equivariance.
//!
//! A group element acts on arguments by `y ↦ A y B⁻¹` (rows of `y` index `E`,
//! columns index `F`), optionally followed by transposition. For a pencil the
//! lift is a pair of block-diagonal matrices with `Ã(g·y) B₂ = B₁ Ã(y)`.

mod check;
mod lift;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactmath::rational::{self, QMatrix};
use crate::exactmath::Rational;
use crate::pencil::{AffineForm, Construction, Variable};

pub use check::{check_equivariance, check_regularity, equivariance_suite, Family};
pub use lift::{exterior_power, induced_action, regular_power, LiftedPair};

/// `diag(t) · P_σ` with `P_σ e_i = e_{σ(i)}`; indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMatrix {
    pub sigma: Vec<usize>,
    pub t: Vec<Rational>,
}

impl MonomialMatrix {
    pub fn new(sigma: Vec<usize>, t: Vec<Rational>) -> Result<Self> {
        let m = sigma.len();
        let mut seen = vec![false; m];
        for &s in &sigma {
            if s >= m || std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidGroupElement(format!("{sigma:?} is not a permutation")));
            }
        }
        if t.len() != m || t.iter().any(Zero::is_zero) {
            return Err(Error::InvalidGroupElement("diagonal must have m nonzero entries".into()));
        }
        Ok(MonomialMatrix { sigma, t })
    }

    pub fn identity(m: usize) -> Self {
        MonomialMatrix {
            sigma: (0..m).collect(),
            t: vec![Rational::one(); m],
        }
    }

    /// A pure permutation, given 0-based.
    pub fn permutation(sigma: Vec<usize>) -> Result<Self> {
        let m = sigma.len();
        Self::new(sigma, vec![Rational::one(); m])
    }

    pub fn matrix(&self) -> QMatrix {
        let m = self.sigma.len();
        let mut out = vec![vec![Rational::zero(); m]; m];
        for (i, &s) in self.sigma.iter().enumerate() {
            out[s][i] = self.t[s].clone();
        }
        out
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        // diag(t) P_σ diag(t') P_τ = diag(t · σ(t')) P_{στ}
        let m = self.sigma.len();
        let mut t = self.t.clone();
        for (i, &s) in self.sigma.iter().enumerate() {
            t[s] = &t[s] * &other.t[i];
        }
        MonomialMatrix {
            sigma: (0..m).map(|i| self.sigma[other.sigma[i]]).collect(),
            t,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    Identity,
    /// Monomial matrix acting on `E` only.
    PermSide(MonomialMatrix),
    /// Monomial matrices acting on `E` and `F`.
    PermPair(MonomialMatrix, MonomialMatrix),
    /// Invertible matrix acting on `E` only.
    GlSide(QMatrix),
    GlPair(QMatrix, QMatrix),
}

/// `y ↦ A y B⁻¹`, then `y ↦ yᵀ` when `transpose` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    m: usize,
    action: Action,
    transpose: bool,
}

fn check_invertible(g: &QMatrix, m: usize) -> Result<()> {
    if g.len() != m || g.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidGroupElement(format!("expected a {m}x{m} matrix")));
    }
    if rational::det(g).is_zero() {
        return Err(Error::InvalidGroupElement("matrix is singular".into()));
    }
    Ok(())
}

impl GroupElement {
    pub fn new(m: usize, action: Action, transpose: bool) -> Result<Self> {
        match &action {
            Action::Identity => {}
            Action::PermSide(a) => {
                if a.sigma.len() != m {
                    return Err(Error::InvalidGroupElement(format!("expected size {m}")));
                }
            }
            Action::PermPair(a, b) => {
                if a.sigma.len() != m || b.sigma.len() != m {
                    return Err(Error::InvalidGroupElement(format!("expected size {m}")));
                }
            }
            Action::GlSide(a) => check_invertible(a, m)?,
            Action::GlPair(a, b) => {
                check_invertible(a, m)?;
                check_invertible(b, m)?;
            }
        }
        Ok(GroupElement { m, action, transpose })
    }

    pub fn identity(m: usize) -> Self {
        GroupElement {
            m,
            action: Action::Identity,
            transpose: false,
        }
    }

    pub fn transposition(m: usize) -> Self {
        GroupElement {
            m,
            action: Action::Identity,
            transpose: true,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn transposes(&self) -> bool {
        self.transpose
    }

    pub fn is_identity(&self) -> bool {
        let (a, b) = self.matrices();
        let id = rational::identity(self.m);
        !self.transpose && a == id && b == id
    }

    /// `(A, B)` with `g·y = A y B⁻¹` before any transposition.
    pub fn matrices(&self) -> (QMatrix, QMatrix) {
        let id = || rational::identity(self.m);
        match &self.action {
            Action::Identity => (id(), id()),
            Action::PermSide(a) => (a.matrix(), id()),
            Action::PermPair(a, b) => (a.matrix(), b.matrix()),
            Action::GlSide(a) => (a.clone(), id()),
            Action::GlPair(a, b) => (a.clone(), b.clone()),
        }
    }

    /// `self · other`, acting as `other` first. Transposing elements do not compose here.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.m != other.m || self.transpose || other.transpose {
            return Err(Error::InvalidGroupElement(
                "composition needs equal sizes and no transposition".into(),
            ));
        }
        let action = match (&self.action, &other.action) {
            (Action::Identity, a) | (a, Action::Identity) => a.clone(),
            (Action::PermSide(a), Action::PermSide(b)) => Action::PermSide(a.compose(b)),
            (Action::PermPair(a, b), Action::PermPair(c, d)) => Action::PermPair(a.compose(c), b.compose(d)),
            (Action::GlSide(a), Action::GlSide(b)) => Action::GlSide(rational::mul(a, b)),
            _ => {
                let (a, b) = self.matrices();
                let (c, d) = other.matrices();
                Action::GlPair(rational::mul(&a, &c), rational::mul(&b, &d))
            }
        };
        Ok(GroupElement {
            m: self.m,
            action,
            transpose: false,
        })
    }

    /// Numeric action on an `m × m` rational argument.
    pub fn act(&self, y: &QMatrix) -> Result<QMatrix> {
        if y.len() != self.m || y.iter().any(|r| r.len() != self.m) {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0} argument", self.m),
                actual: format!("{} rows", y.len()),
            });
        }
        let (a, b) = self.matrices();
        let b_inv = rational::inverse(&b).expect("validated invertible");
        let out = rational::mul(&rational::mul(&a, y), &b_inv);
        Ok(if self.transpose { rational::transpose(&out) } else { out })
    }

    /// `(g·y)_{ab}` as a linear form in the entries of `y`, indexed `[a][b]`.
    pub fn symbolic_images(&self) -> Vec<Vec<AffineForm<Rational>>> {
        let m = self.m;
        let (a, b) = self.matrices();
        let b_inv = rational::inverse(&b).expect("validated invertible");
        let mut out = vec![vec![AffineForm::zero(); m]; m];
        for (r, out_row) in out.iter_mut().enumerate() {
            for (c, cell) in out_row.iter_mut().enumerate() {
                for k in 0..m {
                    if a[r][k].is_zero() {
                        continue;
                    }
                    for l in 0..m {
                        if !b_inv[l][c].is_zero() {
                            cell.add_term(Variable::new(k + 1, l + 1), &a[r][k] * &b_inv[l][c]);
                        }
                    }
                }
            }
        }
        if self.transpose {
            let t = out.clone();
            for (r, row) in out.iter_mut().enumerate() {
                for (c, cell) in row.iter_mut().enumerate() {
                    *cell = t[c][r].clone();
                }
            }
        }
        out
    }
}

/// `g·y` for a numeric argument.
pub fn act_on_argument(g: &GroupElement, y: &QMatrix) -> Result<QMatrix> {
    g.act(y)
}

const SMALL: [i64; 6] = [-3, -2, -1, 1, 2, 3];

/// Uniform permutation with diagonal entries in `{±1, ±2, ±3}`.
pub fn random_monomial<R: Rng + ?Sized>(m: usize, rng: &mut R) -> MonomialMatrix {
    let mut sigma: Vec<usize> = (0..m).collect();
    sigma.shuffle(rng);
    let t = (0..m).map(|_| rational::rat(*SMALL.choose(rng).expect("nonempty"))).collect();
    MonomialMatrix { sigma, t }
}

/// A monomial matrix whose permutation is not the identity.
pub fn random_nontrivial_monomial<R: Rng + ?Sized>(m: usize, rng: &mut R) -> MonomialMatrix {
    loop {
        let g = random_monomial(m, rng);
        if m < 2 || g.sigma.iter().enumerate().any(|(i, &s)| i != s) {
            return g;
        }
    }
}

/// Invertible matrix with entries `p / q`, `|p| ≤ 3`, `q ∈ {1, 2}`.
pub fn random_gl<R: Rng + ?Sized>(m: usize, rng: &mut R) -> QMatrix {
    loop {
        let g: QMatrix = (0..m)
            .map(|_| {
                (0..m)
                    .map(|_| {
                        Rational::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=2).into())
                    })
                    .collect()
            })
            .collect();
        if !rational::det(&g).is_zero() {
            return g;
        }
    }
}

/// A group element of the given family suited to the construction's symmetries.
pub fn random_element<R: Rng + ?Sized>(c: Construction, m: usize, family: Family, rng: &mut R) -> GroupElement {
    let general = matches!(
        c,
        Construction::RegularDet | Construction::EquivariantDet | Construction::TrivialDet
    );
    let action = match (family, general) {
        (Family::Left, false) => Action::PermSide(random_monomial(m, rng)),
        (Family::Left, true) => Action::GlSide(random_gl(m, rng)),
        (Family::Right, false) => Action::PermPair(MonomialMatrix::identity(m), random_nontrivial_monomial(m, rng)),
        (Family::Right, true) => Action::GlPair(rational::identity(m), random_gl(m, rng)),
        (Family::Pair, false) => Action::PermPair(random_monomial(m, rng), random_monomial(m, rng)),
        (Family::Pair, true) => Action::GlPair(random_gl(m, rng), random_gl(m, rng)),
        (Family::Transpose, false) => Action::PermPair(random_monomial(m, rng), random_monomial(m, rng)),
        (Family::Transpose, true) => Action::GlPair(random_gl(m, rng), random_gl(m, rng)),
    };
    GroupElement {
        m,
        action,
        transpose: family == Family::Transpose,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;
    use crate::exactmath::IntMatrix;
    use crate::oracles;
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit(m: usize, r: usize, c: usize) -> QMatrix {
        let mut y = vec![vec![Rational::zero(); m]; m];
        y[r][c] = Rational::one();
        y
    }

    #[test]
    fn identity_leaves_arguments_alone() {
        let y: QMatrix = (0..3).map(|i| (0..3).map(|j| rat((i * 3 + j) as i64)).collect()).collect();
        assert_eq!(act_on_argument(&GroupElement::identity(3), &y).unwrap(), y);
    }

    #[test]
    fn transposition_of_first_two_rows() {
        let swap = MonomialMatrix::permutation(vec![1, 0, 2]).unwrap();
        let g = GroupElement::new(3, Action::PermSide(swap), false).unwrap();
        assert_eq!(g.act(&unit(3, 0, 0)).unwrap(), unit(3, 1, 0));
    }

    #[test]
    fn monomial_composition_matches_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = random_monomial(4, &mut rng);
            let b = random_monomial(4, &mut rng);
            assert_eq!(a.compose(&b).matrix(), rational::mul(&a.matrix(), &b.matrix()));
        }
    }

    #[test]
    fn symbolic_images_agree_with_numeric_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = random_element(Construction::EquivariantDet, 3, Family::Transpose, &mut rng);
        let y: QMatrix = (0..3)
            .map(|_| (0..3).map(|_| rat(rng.gen_range(-4..=4))).collect())
            .collect();
        let images = g.symbolic_images();
        let numeric = g.act(&y).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let mut v = images[a][b].constant_part().clone();
                for (var, k) in images[a][b].linear() {
                    v += k * &y[var.row as usize - 1][var.col as usize - 1];
                }
                assert_eq!(v, numeric[a][b]);
            }
        }
    }

    #[test]
    fn permanent_is_invariant_under_unimodular_torus() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut a = random_monomial(3, &mut rng);
            let mut b = random_monomial(3, &mut rng);
            // force Π t = 1 on both sides
            a.t = vec![rat(2), rat(-1), Rational::new((-1).into(), 2.into())];
            b.t = vec![rat(-3), Rational::new(1.into(), 3.into()), rat(-1)];
            let g = GroupElement::new(3, Action::PermPair(a, b), false).unwrap();
            let y: QMatrix = (0..3).map(|_| (0..3).map(|_| rat(rng.gen_range(-5..=5))).collect()).collect();
            let gy = g.act(&y).unwrap();
            let scale: BigInt = BigInt::from(6);
            let as_int = |q: &QMatrix| {
                IntMatrix::from_fn(3, 3, |i, j| (&q[i][j] * Rational::from_integer(scale.clone())).to_integer())
            };
            // perm is homogeneous of degree 3
            assert_eq!(
                oracles::perm_naive(&as_int(&gy)).unwrap(),
                oracles::perm_naive(&as_int(&y)).unwrap()
            );
        }
    }

    #[test]
    fn rejects_invalid_elements() {
        assert!(MonomialMatrix::new(vec![0, 0], vec![rat(1), rat(1)]).is_err());
        assert!(MonomialMatrix::new(vec![1, 0], vec![rat(0), rat(1)]).is_err());
        let singular = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert!(GroupElement::new(2, Action::GlSide(singular), false).is_err());
    }
}
