use num_traits::{One, Zero};

use super::PencilMatrix;
use crate::error::{Error, Result};
use crate::exactmath::rational::{self, QMatrix};
use crate::exactmath::Rational;

/// `left · Ã · right` with `(left · Ã · right)(0) = Λ_{n-1}`, the matrix with
/// ones on the last `n - 1` diagonal entries and zeros elsewhere.
#[derive(Clone, Debug)]
pub struct NormalizedPencil {
    pub pencil: PencilMatrix<Rational>,
    pub left: QMatrix,
    pub right: QMatrix,
    /// `det(left) · det(right)`; the new determinant is this times the old one.
    pub det_scale: Rational,
}

impl NormalizedPencil {
    /// The normalized pencil with integer coefficients, when it has them.
    pub fn integral(&self) -> Option<PencilMatrix> {
        if self
            .pencil
            .entries()
            .any(|(_, _, f)| !f.constant_part().is_integer() || f.linear().iter().any(|(_, c)| !c.is_integer()))
        {
            return None;
        }
        Some(self.pencil.map_coeffs(|c| c.to_integer()))
    }
}

/// Reduces a regular pencil to constant part `Λ_{n-1}` by constant rational
/// row and column operations.
pub fn normalize_regular<T>(p: &PencilMatrix<T>) -> Result<NormalizedPencil>
where
    T: super::Coeff + Into<Rational>,
{
    let n = p.n();
    let constant: QMatrix = p
        .constant_part()
        .into_iter()
        .map(|row| row.into_iter().map(Into::into).collect())
        .collect();
    let (l0, reduced, pivots) = rational::rref_with_transform(&constant);
    if n == 0 || pivots.len() != n - 1 {
        return Err(Error::NotRegular {
            rank: pivots.len(),
            expected: n.saturating_sub(1),
        });
    }
    let free = (0..n)
        .find(|c| !pivots.contains(c))
        .expect("exactly one non-pivot column");
    // clear the free column against the pivot columns
    let mut r0 = rational::identity(n);
    for (i, &pc) in pivots.iter().enumerate() {
        r0[pc][free] = -reduced[i][free].clone();
    }
    // row n-1 of the rref is zero; move it to the top, pivots follow in order
    let mut row_perm: QMatrix = vec![vec![Rational::zero(); n]; n];
    row_perm[0][n - 1] = Rational::one();
    for k in 1..n {
        row_perm[k][k - 1] = Rational::one();
    }
    let mut col_perm: QMatrix = vec![vec![Rational::zero(); n]; n];
    col_perm[free][0] = Rational::one();
    for (k, &pc) in pivots.iter().enumerate() {
        col_perm[pc][k + 1] = Rational::one();
    }
    let left = rational::mul(&row_perm, &l0);
    let right = rational::mul(&r0, &col_perm);
    let det_scale = rational::det(&left) * rational::det(&right);
    let pencil = p.map_coeffs(|c| c.clone().into()).sandwich(&left, &right)?;
    let check = pencil.constant_part();
    for (i, row) in check.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let want = if i == j && i > 0 { Rational::one() } else { Rational::zero() };
            if *x != want {
                return Err(Error::Internal(format!(
                    "normal form entry ({i}, {j}) is {x}, expected {want}"
                )));
            }
        }
    }
    Ok(NormalizedPencil {
        pencil,
        left,
        right,
        det_scale,
    })
}
