//! Reference evaluators for the permanent and determinant, independent of
//! every pencil.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::modular::{add_mod, inv_mod, mul_mod, pow_mod, sub_mod};
use crate::exactmath::{IntMatrix, Monomial, Polynomial};
use crate::pencil::Variable;

/// Largest size accepted by the factorial-time expansions.
pub const NAIVE_MAX: usize = 10;

fn square(m: &IntMatrix) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(m.rows())
}

fn guard_naive(n: usize) -> Result<()> {
    if n > NAIVE_MAX {
        return Err(Error::SizeOutOfRange {
            what: "permutation expansion",
            m: n,
            min: 0,
            max: NAIVE_MAX,
        });
    }
    Ok(())
}

/// Sum over permutations, optionally signed, by depth-first prefix products.
fn permutation_sum(m: &IntMatrix, signed: bool) -> BigInt {
    fn go(m: &IntMatrix, row: usize, used: u32, prefix: &BigInt, negative: bool, signed: bool, acc: &mut BigInt) {
        let n = m.rows();
        if row == n {
            if negative {
                *acc -= prefix;
            } else {
                *acc += prefix;
            }
            return;
        }
        for c in 0..n {
            if used & (1 << c) != 0 || m[(row, c)].is_zero() {
                continue;
            }
            // inversions introduced: earlier rows sitting in later columns
            let flips = signed && (used >> (c + 1)).count_ones() % 2 == 1;
            let next = prefix * &m[(row, c)];
            go(m, row + 1, used | (1 << c), &next, negative ^ flips, signed, acc);
        }
    }
    let mut acc = BigInt::zero();
    go(m, 0, 0, &BigInt::one(), false, signed, &mut acc);
    acc
}

/// `Σ_σ Π_i y^i_{σ(i)}` by direct enumeration.
pub fn perm_naive(m: &IntMatrix) -> Result<BigInt> {
    let n = square(m)?;
    guard_naive(n)?;
    Ok(permutation_sum(m, false))
}

/// Signed permutation expansion of the determinant.
pub fn det_naive(m: &IntMatrix) -> Result<BigInt> {
    let n = square(m)?;
    guard_naive(n)?;
    Ok(permutation_sum(m, true))
}

/// Result of a Gray-code permanent evaluation with its step count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RyserRun {
    pub value: BigInt,
    /// Number of sign vectors visited, `2^(m-1)`.
    pub terms: u64,
    /// Number of single-coordinate flips performed, `2^(m-1) - 1`.
    pub flips: u64,
}

/// Permanent by the Ryser–Glynn ±1 expansion with Gray-code enumeration.
pub fn perm_ryser(m: &IntMatrix) -> Result<BigInt> {
    perm_ryser_counted(m).map(|run| run.value)
}

pub fn perm_ryser_counted(m: &IntMatrix) -> Result<RyserRun> {
    let n = square(m)?;
    if n == 0 {
        return Ok(RyserRun {
            value: BigInt::one(),
            terms: 1,
            flips: 0,
        });
    }
    if n > 63 {
        return Err(Error::SizeOutOfRange {
            what: "Gray-code permanent",
            m: n,
            min: 1,
            max: 63,
        });
    }
    // delta_j = +1 for all j initially; row sums S_i = Σ_j delta_j y_ij
    let mut delta = vec![true; n];
    let mut sums: Vec<BigInt> = (0..n).map(|i| m.row(i).iter().sum()).collect();
    let mut positive = true;
    let mut total = BigInt::zero();
    let steps: u64 = 1 << (n - 1);
    let mut flips = 0u64;
    for g in 0..steps {
        if g > 0 {
            let j = 1 + g.trailing_zeros() as usize;
            let was_plus = delta[j];
            delta[j] = !was_plus;
            positive = !positive;
            flips += 1;
            for (i, s) in sums.iter_mut().enumerate() {
                let x = &m[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let twice: BigInt = x << 1;
                if was_plus {
                    *s -= twice;
                } else {
                    *s += twice;
                }
            }
        }
        let prod: BigInt = sums.iter().product();
        if positive {
            total += prod;
        } else {
            total -= prod;
        }
    }
    let divisor = BigInt::one() << (n - 1);
    let (q, r) = total.div_rem(&divisor);
    if !r.is_zero() {
        return Err(Error::Internal(format!(
            "Ryser–Glynn sum not divisible by 2^{}",
            n - 1
        )));
    }
    Ok(RyserRun {
        value: q,
        terms: steps,
        flips,
    })
}

/// Permanent modulo an odd prime, same Gray-code recurrence over F_p.
pub fn perm_mod_p(point: &[u64], n: usize, p: u64) -> u64 {
    assert_eq!(point.len(), n * n);
    if n == 0 {
        return 1 % p;
    }
    let mut delta = vec![true; n];
    let mut sums: Vec<u64> = (0..n)
        .map(|i| point[i * n..(i + 1) * n].iter().fold(0, |a, &x| add_mod(a, x % p, p)))
        .collect();
    let mut positive = true;
    let mut total = 0u64;
    let steps: u64 = 1 << (n - 1);
    for g in 0..steps {
        if g > 0 {
            let j = 1 + g.trailing_zeros() as usize;
            let was_plus = delta[j];
            delta[j] = !was_plus;
            positive = !positive;
            for (i, s) in sums.iter_mut().enumerate() {
                let twice = mul_mod(2, point[i * n + j] % p, p);
                *s = if was_plus {
                    sub_mod(*s, twice, p)
                } else {
                    add_mod(*s, twice, p)
                };
            }
        }
        let prod = sums.iter().fold(1 % p, |a, &s| mul_mod(a, s, p));
        total = if positive {
            add_mod(total, prod, p)
        } else {
            sub_mod(total, prod, p)
        };
    }
    mul_mod(total, inv_mod(pow_mod(2, n as u64 - 1, p), p), p)
}

fn permutation_polynomial(n: usize, signed: bool) -> Result<Polynomial<Variable>> {
    guard_naive(n)?;
    let mut out = Polynomial::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    // Heap's algorithm; each swap flips the sign
    let mut c = vec![0usize; n];
    let mut negative = false;
    let emit = |perm: &[usize], negative: bool, out: &mut Polynomial<Variable>| {
        let mono = Monomial::from_pairs(perm.iter().enumerate().map(|(i, &j)| (Variable::new(i + 1, j + 1), 1)));
        let coeff = if signed && negative { -BigInt::one() } else { BigInt::one() };
        out.add_term(mono, coeff);
    };
    emit(&perm, negative, &mut out);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            negative = !negative;
            emit(&perm, negative, &mut out);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(out)
}

/// `perm_n` as a polynomial in the variables `y^j_i`.
pub fn perm_polynomial(n: usize) -> Result<Polynomial<Variable>> {
    permutation_polynomial(n, false)
}

/// `det_n` as a polynomial in the variables `y^j_i`.
pub fn det_polynomial(n: usize) -> Result<Polynomial<Variable>> {
    permutation_polynomial(n, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{det_exact, modular, DEFAULT_PRIMES};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn random(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
        IntMatrix::from_fn(n, n, |_, _| BigInt::from(rng.gen_range(-9i64..=9)))
    }

    #[test]
    fn naive_examples() {
        assert_eq!(perm_naive(&IntMatrix::filled(3, 3, 1)).unwrap(), BigInt::from(6));
        let d = mat(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]);
        assert_eq!(perm_naive(&d).unwrap(), BigInt::from(30));
        let m = mat(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(perm_naive(&m).unwrap(), BigInt::from(10));
        assert_eq!(det_naive(&m).unwrap(), BigInt::from(-2));
        assert_eq!(det_naive(&IntMatrix::identity(5)).unwrap(), BigInt::one());
        assert!(perm_naive(&IntMatrix::identity(11)).is_err());
        assert!(perm_naive(&IntMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn ryser_examples() {
        assert_eq!(perm_ryser(&IntMatrix::identity(6)).unwrap(), BigInt::one());
        let mut fact = BigInt::one();
        for n in 1..=12u32 {
            fact *= n;
            assert_eq!(perm_ryser(&IntMatrix::filled(n as usize, n as usize, 1)).unwrap(), fact);
        }
    }

    #[test]
    fn ryser_gray_code_flips_once_per_step() {
        for n in 1..=9 {
            let run = perm_ryser_counted(&IntMatrix::filled(n, n, 1)).unwrap();
            assert_eq!(run.terms, 1 << (n - 1));
            assert_eq!(run.flips, run.terms - 1);
        }
    }

    #[test]
    fn ryser_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(500);
        for t in 0..200 {
            let m = random(&mut rng, 1 + t % 6);
            assert_eq!(perm_ryser(&m).unwrap(), perm_naive(&m).unwrap());
        }
    }

    #[test]
    fn det_naive_matches_bareiss() {
        let mut rng = ChaCha8Rng::seed_from_u64(501);
        for t in 0..200 {
            let m = random(&mut rng, 1 + t % 6);
            assert_eq!(det_naive(&m).unwrap(), det_exact(&m).unwrap());
        }
    }

    #[test]
    fn modular_permanent_matches_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(502);
        for t in 0..50 {
            let n = 1 + t % 7;
            let m = random(&mut rng, n);
            let exact = perm_naive(&m).unwrap();
            for &p in &DEFAULT_PRIMES {
                let residues: Vec<u64> = m.entries().iter().map(|x| modular::reduce(x, p)).collect();
                assert_eq!(perm_mod_p(&residues, n, p), modular::reduce(&exact, p));
            }
        }
    }

    #[test]
    fn symbolic_expansions() {
        let p2 = perm_polynomial(2).unwrap();
        assert_eq!(p2.to_string(), "y^1_1*y^2_2 + y^2_1*y^1_2");
        let d3 = det_polynomial(3).unwrap();
        assert_eq!(d3.num_terms(), 6);
        let mut rng = ChaCha8Rng::seed_from_u64(503);
        for n in 1..=4 {
            let m = random(&mut rng, n);
            let lookup = |v: &Variable| Some(m[(v.row as usize - 1, v.col as usize - 1)].clone());
            assert_eq!(perm_polynomial(n).unwrap().eval_with(lookup).unwrap(), perm_naive(&m).unwrap());
            assert_eq!(det_polynomial(n).unwrap().eval_with(lookup).unwrap(), det_naive(&m).unwrap());
        }
    }
}
