use num_traits::ToPrimitive;

use super::PencilMatrix;
use crate::error::{Error, Result};
use crate::exactmath::IntMatrix;

/// Outcome of evaluating the pencil with its constant part scaled by
/// `factor^(-1/scaling_exponent)` in floating point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatCheck {
    pub det: f64,
    pub expected: f64,
    pub relative_error: f64,
}

/// Floating-point view of the scaled representation: with the constant part
/// multiplied by the real root, `det` should equal `sign · target` with no factor.
pub fn scaled_float_check(p: &PencilMatrix, point: &IntMatrix) -> Result<FloatCheck> {
    let meta = p.meta();
    let factor = meta
        .expected_factor
        .to_f64()
        .ok_or_else(|| Error::Internal("factor does not fit in f64".into()))?;
    let lambda = if meta.scaling_exponent == 0 {
        1.0
    } else {
        factor.powf(-1.0 / meta.scaling_exponent as f64)
    };
    let n = p.n();
    let mut a = vec![0.0f64; n * n];
    for (r, c, f) in p.entries() {
        let mut x = f.constant_part().to_f64().unwrap_or(f64::NAN) * lambda;
        for (v, k) in f.linear() {
            let y = point[(v.row as usize - 1, v.col as usize - 1)].to_f64().unwrap_or(f64::NAN);
            x += k.to_f64().unwrap_or(f64::NAN) * y;
        }
        a[r * n + c] = x;
    }
    let det = lu_det(&mut a, n);
    let target = meta.target().eval(point)?.to_f64().unwrap_or(f64::NAN);
    let unscaled_factor = if meta.scaling_exponent == 0 { factor } else { 1.0 };
    let expected = f64::from(meta.sign) * unscaled_factor * target;
    let relative_error = if expected == 0.0 {
        det.abs()
    } else {
        ((det - expected) / expected).abs()
    };
    Ok(FloatCheck {
        det,
        expected,
        relative_error,
    })
}

fn lu_det(a: &mut [f64], n: usize) -> f64 {
    let mut det = 1.0;
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
            .expect("nonempty range");
        if a[piv * n + k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for i in k + 1..n {
            let f = a[i * n + k] / pivot;
            if f != 0.0 {
                for j in k..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions;
    use num_bigint::BigInt;

    #[test]
    fn scaled_equivariant_pencils_represent_the_target() {
        for m in 2..=3 {
            let point = IntMatrix::from_fn(m, m, |i, j| BigInt::from((2 * i + j) as i64 % 5 - 1));
            for p in [
                constructions::equivariant_perm(m).unwrap(),
                constructions::equivariant_det(m).unwrap(),
            ] {
                let check = scaled_float_check(&p, &point).unwrap();
                assert!(check.relative_error < 1e-9, "{check:?}");
            }
        }
    }
}
