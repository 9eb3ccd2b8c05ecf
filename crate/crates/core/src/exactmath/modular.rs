//! Arithmetic in F_p for word-sized primes, used by randomized identity testing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// The Mersenne prime 2^61 - 1 and the two primes immediately below it.
pub const DEFAULT_PRIMES: [u64; 3] = [
    2_305_843_009_213_693_951,
    2_305_843_009_213_693_921,
    2_305_843_009_213_693_907,
];

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn neg_mod(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0, "zero has no inverse");
    pow_mod(a, p - 2, p)
}

/// Reduces an integer into [0, p).
pub fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

pub fn reduce_i64(x: i64, p: u64) -> u64 {
    (x as i128).rem_euclid(p as i128) as u64
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Determinant over F_p by Gaussian elimination on a row-major square matrix.
/// Singular input yields 0.
pub fn det_mod_p(entries: &[u64], n: usize, p: u64) -> u64 {
    assert_eq!(entries.len(), n * n, "det_mod_p expects an n x n matrix");
    let mut a: Vec<u64> = entries.iter().map(|&x| x % p).collect();
    let mut det = 1 % p;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i * n + k] != 0) else {
            return 0;
        };
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            det = neg_mod(det, p);
        }
        let pivot = a[k * n + k];
        det = mul_mod(det, pivot, p);
        let inv = inv_mod(pivot, p);
        for i in k + 1..n {
            let factor = mul_mod(a[i * n + k], inv, p);
            if factor == 0 {
                continue;
            }
            for j in k..n {
                let t = mul_mod(factor, a[k * n + j], p);
                a[i * n + j] = sub_mod(a[i * n + j], t, p);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{det_exact, IntMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn default_primes_are_prime_and_distinct() {
        for &p in &DEFAULT_PRIMES {
            assert!(is_prime(p), "{p}");
            assert!(p < 1 << 61);
        }
        assert_eq!(DEFAULT_PRIMES[0], (1u64 << 61) - 1);
        assert!(DEFAULT_PRIMES.windows(2).all(|w| w[0] > w[1]));
        // nothing prime strictly between consecutive entries
        for w in DEFAULT_PRIMES.windows(2) {
            assert!((w[1] + 1..w[0]).all(|q| !is_prime(q)));
        }
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        let naive = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..5000 {
            assert_eq!(is_prime(n), naive(n), "{n}");
        }
    }

    #[test]
    fn identity_and_swap() {
        for &p in &[7u64, 101, DEFAULT_PRIMES[0]] {
            let id = [1, 0, 0, 0, 1, 0, 0, 0, 1];
            assert_eq!(det_mod_p(&id, 3, p), 1);
            assert_eq!(det_mod_p(&[0, 1, 1, 0], 2, p), p - 1);
        }
        assert_eq!(det_mod_p(&[1, 2, 2, 4], 2, 101), 0);
    }

    #[test]
    fn agrees_with_exact_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let m = IntMatrix::from_fn(6, 6, |_, _| BigInt::from(rng.gen_range(-50i64..=50)));
            let exact = det_exact(&m).unwrap();
            for &p in &DEFAULT_PRIMES {
                let residues: Vec<u64> = m.entries().iter().map(|x| reduce(x, p)).collect();
                assert_eq!(det_mod_p(&residues, 6, p), reduce(&exact, p));
            }
        }
    }
}
