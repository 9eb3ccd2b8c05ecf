//! Structured evaluation of cyclic block-bidiagonal pencils.
//!
//! For a pencil whose block 0 diagonal is zero, blocks `1..L` carry `±I` on the
//! diagonal, the linear part sits in the sub-diagonal blocks `B_0..B_{L-2}` and
//! in the corner block `B_{L-1}` (block `L-1` to block 0), the determinant
//! collapses to `ε · B_{L-1} ⋯ B_1 B_0`, a 1×1 product.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AffineForm, PencilMatrix, Variable};
use crate::error::{Error, Result};
use crate::exactmath::{IntMatrix, Monomial, Polynomial};

/// Pencils up to this size calibrate `ε` against a dense exact determinant.
pub const CALIBRATION_LIMIT: usize = 128;

type SignKey = (Vec<usize>, Vec<i8>);

fn sign_cache() -> &'static Mutex<HashMap<SignKey, i8>> {
    static CACHE: OnceLock<Mutex<HashMap<SignKey, i8>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathValue {
    pub value: BigInt,
    /// Multiply-adds spent propagating through the linear blocks.
    pub ops: u64,
}

/// Extracted chain `B_0, .., B_{L-1}` with the calibrated sign.
#[derive(Clone, Debug)]
pub struct PathEvaluator {
    dims: Vec<usize>,
    shape: (usize, usize),
    /// `steps[k]` maps block `k` to block `(k + 1) mod L` as (local row, local col, form).
    steps: Vec<Vec<(usize, usize, AffineForm)>>,
    diagonal_signs: Vec<i8>,
    epsilon: i8,
}

impl PathEvaluator {
    pub fn new(p: &PencilMatrix) -> Result<Self> {
        let layout = p.layout();
        let blocks = layout.len();
        let dims: Vec<usize> = layout.blocks().iter().map(|b| b.dim).collect();
        if blocks < 2 {
            return Err(Error::NotCyclicBidiagonal("fewer than two blocks".into()));
        }
        if dims[0] != 1 {
            return Err(Error::NotCyclicBidiagonal("block 0 must be one-dimensional".into()));
        }
        let mut steps: Vec<Vec<(usize, usize, AffineForm)>> = vec![Vec::new(); blocks];
        let mut diagonal: Vec<Vec<Option<i8>>> = dims.iter().map(|&d| vec![None; d]).collect();
        for (r, c, f) in p.entries() {
            let (br, lr) = layout.locate(r);
            let (bc, lc) = layout.locate(c);
            if br == bc {
                let unit = if f.is_constant() && lr == lc && br > 0 {
                    unit_sign(f.constant_part())
                } else {
                    None
                };
                match unit {
                    Some(s) => diagonal[br][lr] = Some(s),
                    None => {
                        return Err(Error::NotCyclicBidiagonal(format!(
                            "diagonal block {br} entry ({lr}, {lc}) is {f}"
                        )))
                    }
                }
            } else if br == (bc + 1) % blocks {
                if !f.constant_part().is_zero() {
                    return Err(Error::NotCyclicBidiagonal(format!(
                        "linear block {bc} -> {br} has a constant term"
                    )));
                }
                steps[bc].push((lr, lc, f.clone()));
            } else {
                return Err(Error::NotCyclicBidiagonal(format!(
                    "entry in block ({br}, {bc}) off the cyclic path"
                )));
            }
        }
        let mut diagonal_signs = vec![0i8; blocks];
        for (k, entries) in diagonal.iter().enumerate().skip(1) {
            let first = entries[0].ok_or_else(|| {
                Error::NotCyclicBidiagonal(format!("block {k} has a zero diagonal entry"))
            })?;
            if entries.iter().any(|s| *s != Some(first)) {
                return Err(Error::NotCyclicBidiagonal(format!(
                    "block {k} diagonal is not ±I"
                )));
            }
            diagonal_signs[k] = first;
        }
        let mut eval = PathEvaluator {
            dims,
            shape: p.shape(),
            steps,
            diagonal_signs,
            epsilon: 1,
        };
        eval.epsilon = eval.derive_sign(p)?;
        Ok(eval)
    }

    /// `(-1)^(L-1) · Π_{k≥1} d_k^(dim_k + 1)` from the block Schur complement.
    pub fn closed_form_sign(&self) -> i8 {
        let blocks = self.dims.len();
        let mut sign: i8 = if (blocks - 1) % 2 == 0 { 1 } else { -1 };
        for k in 1..blocks {
            if self.diagonal_signs[k] < 0 && (self.dims[k] + 1) % 2 == 1 {
                sign = -sign;
            }
        }
        sign
    }

    fn derive_sign(&self, p: &PencilMatrix) -> Result<i8> {
        let key = (self.dims.clone(), self.diagonal_signs.clone());
        if let Some(&s) = sign_cache().lock().expect("sign cache poisoned").get(&key) {
            return Ok(s);
        }
        let closed = self.closed_form_sign();
        let sign = if p.n() <= CALIBRATION_LIMIT {
            self.calibrate(p)?
        } else {
            closed
        };
        if sign != closed {
            return Err(Error::Internal(format!(
                "calibrated path sign {sign} disagrees with block formula {closed}"
            )));
        }
        sign_cache().lock().expect("sign cache poisoned").insert(key, sign);
        Ok(sign)
    }

    fn calibrate(&self, p: &PencilMatrix) -> Result<i8> {
        let (rows, cols) = self.shape;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..32 {
            let point = IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-3i64..=3)));
            let chain = self.chain(&point).value;
            if chain.is_zero() {
                continue;
            }
            let dense = p.dense_det(&point)?;
            if dense == chain {
                return Ok(1);
            }
            if dense == -&chain {
                return Ok(-1);
            }
            return Err(Error::Internal(format!(
                "dense determinant {dense} is not ± path product {chain}"
            )));
        }
        Err(Error::Internal("path product vanished at every calibration point".into()))
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    /// Total multiply-adds of one evaluation.
    pub fn op_count(&self) -> u64 {
        self.steps.iter().map(|s| s.len() as u64).sum()
    }

    fn chain(&self, point: &IntMatrix) -> PathValue {
        let blocks = self.dims.len();
        let mut v = vec![BigInt::one()];
        let mut ops = 0u64;
        for k in 0..blocks {
            let mut next = vec![BigInt::zero(); self.dims[(k + 1) % blocks]];
            for (lr, lc, f) in &self.steps[k] {
                ops += 1;
                if v[*lc].is_zero() {
                    continue;
                }
                let x = f.eval(point);
                if !x.is_zero() {
                    next[*lr] += x * &v[*lc];
                }
            }
            v = next;
        }
        PathValue {
            value: v.swap_remove(0),
            ops,
        }
    }

    /// `det(Ã(point))` through the path product.
    pub fn eval(&self, point: &IntMatrix) -> Result<PathValue> {
        if (point.rows(), point.cols()) != self.shape {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{} argument", self.shape.0, self.shape.1),
                actual: format!("{}x{}", point.rows(), point.cols()),
            });
        }
        let mut out = self.chain(point);
        if self.epsilon < 0 {
            out.value = -out.value;
        }
        Ok(out)
    }

    /// The same product with polynomial entries.
    pub fn eval_symbolic(&self) -> Polynomial<Variable> {
        let blocks = self.dims.len();
        let mut v: Vec<Polynomial<Variable>> = vec![Polynomial::one()];
        for k in 0..blocks {
            let mut next = vec![Polynomial::zero(); self.dims[(k + 1) % blocks]];
            for (lr, lc, f) in &self.steps[k] {
                for (var, c) in f.linear() {
                    next[*lr].add_scaled_shift(&v[*lc], c, &Monomial::var(*var));
                }
            }
            v = next;
        }
        let out = v.swap_remove(0);
        if self.epsilon < 0 {
            -out
        } else {
            out
        }
    }
}

fn unit_sign(c: &BigInt) -> Option<i8> {
    if c.is_one() {
        Some(1)
    } else if (-c).is_one() {
        Some(-1)
    } else {
        None
    }
}

pub fn path_det(p: &PencilMatrix, point: &IntMatrix) -> Result<BigInt> {
    Ok(PathEvaluator::new(p)?.eval(point)?.value)
}

pub fn path_det_symbolic(p: &PencilMatrix) -> Result<Polynomial<Variable>> {
    Ok(PathEvaluator::new(p)?.eval_symbolic())
}
