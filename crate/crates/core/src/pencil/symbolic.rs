use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{AffineForm, PencilMatrix, Variable};
use crate::error::{Error, Result};
use crate::exactmath::Polynomial;

/// Largest `n` expanded symbolically unless the caller raises the bound.
pub const DEFAULT_SYMBOLIC_BOUND: usize = 24;

/// Exact expansion of `det_n(Ã(y))`.
pub fn pencil_symbolic_det(p: &PencilMatrix) -> Result<Polynomial<Variable>> {
    symbolic_det_with_bound(p, DEFAULT_SYMBOLIC_BOUND)
}

/// Row-by-row Laplace expansion memoized on the set of used columns.
///
/// State after processing rows `0..r` maps each `r`-subset of columns to the
/// signed sum over all partial permutations onto it. Sparse rows keep the
/// reachable state count far below `2^n` for the block-bidiagonal pencils.
pub fn symbolic_det_with_bound(p: &PencilMatrix, bound: usize) -> Result<Polynomial<Variable>> {
    let n = p.n();
    if n > bound || n > 63 {
        return Err(Error::SymbolicBoundExceeded {
            n,
            bound: bound.min(63),
        });
    }
    let mut states: HashMap<u64, Polynomial<Variable>> = HashMap::new();
    states.insert(0, Polynomial::one());
    for r in 0..n {
        let mut next: HashMap<u64, Polynomial<Variable>> = HashMap::with_capacity(states.len());
        for (mask, poly) in &states {
            for (c, form) in p.row(r) {
                let bit = 1u64 << c;
                if mask & bit != 0 {
                    continue;
                }
                let negative = (mask >> (c + 1)).count_ones() % 2 == 1;
                let slot = next.entry(mask | bit).or_default();
                accumulate(slot, poly, form, negative);
            }
        }
        next.retain(|_, poly| !poly.is_zero());
        states = next;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(states.remove(&full).unwrap_or_else(Polynomial::zero))
}

/// `target ±= poly · form`
fn accumulate(
    target: &mut Polynomial<Variable>,
    poly: &Polynomial<Variable>,
    form: &AffineForm<BigInt>,
    negative: bool,
) {
    let signed = |c: BigInt| if negative { -c } else { c };
    let constant = form.constant_part();
    if !constant.is_zero() {
        for (mono, c) in poly.terms() {
            target.add_term(mono.clone(), signed(c * constant));
        }
    }
    for (v, coeff) in form.linear() {
        for (mono, c) in poly.terms() {
            target.add_term(mono.mul_var(v), signed(c * coeff));
        }
    }
}
