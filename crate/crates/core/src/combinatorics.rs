//! k-subsets of `[m] = {1, .., m}` stored as bitmasks, their colexicographic
//! ranking, and the signs produced by exterior multiplication.

use std::fmt;

use crate::error::{Error, Result};

/// Largest ground set a [`Subset`] supports.
pub const MAX_GROUND: usize = 32;

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// A subset of `[m]`; bit `i - 1` is set iff `i` is a member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    m: u8,
    bits: u32,
}

impl Subset {
    pub fn empty(m: usize) -> Result<Self> {
        if m > MAX_GROUND {
            return Err(Error::GroundSetTooLarge(m));
        }
        Ok(Subset { m: m as u8, bits: 0 })
    }

    pub fn full(m: usize) -> Result<Self> {
        let mut s = Self::empty(m)?;
        s.bits = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
        Ok(s)
    }

    /// Builds a subset from 1-based members in any order; duplicates are merged.
    pub fn new(m: usize, members: &[usize]) -> Result<Self> {
        let mut s = Self::empty(m)?;
        for &i in members {
            if i == 0 || i > m {
                return Err(Error::ElementOutOfRange { element: i, m });
            }
            s.bits |= 1 << (i - 1);
        }
        Ok(s)
    }

    pub fn ground(&self) -> usize {
        self.m as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.ground() && self.bits & (1 << (i - 1)) != 0
    }

    /// Members in increasing order, 1-based.
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.ground()).filter(move |&i| self.contains(i))
    }

    /// Colexicographic rank among subsets of the same size.
    pub fn rank(&self) -> u64 {
        self.members()
            .enumerate()
            .map(|(t, c)| binomial(c - 1, t + 1))
            .sum()
    }

    /// Inverse of [`Subset::rank`].
    pub fn unrank(k: usize, m: usize, rank: u64) -> Result<Self> {
        if m > MAX_GROUND {
            return Err(Error::GroundSetTooLarge(m));
        }
        if k > m || rank >= binomial(m, k) {
            return Err(Error::RankOutOfRange { k, m, rank });
        }
        let mut s = Self::empty(m)?;
        let mut r = rank;
        let mut upper = m;
        for t in (1..=k).rev() {
            // largest c with binom(c - 1, t) <= r
            let mut c = upper;
            while binomial(c - 1, t) > r {
                c -= 1;
            }
            r -= binomial(c - 1, t);
            s.bits |= 1 << (c - 1);
            upper = c - 1;
        }
        Ok(s)
    }

    /// `I ∪ {i}`, or `None` when `i ∈ I` (the square-free projection kills it).
    pub fn insert(&self, i: usize) -> Result<Option<Self>> {
        if i == 0 || i > self.ground() {
            return Err(Error::ElementOutOfRange {
                element: i,
                m: self.ground(),
            });
        }
        if self.contains(i) {
            return Ok(None);
        }
        Ok(Some(Subset {
            m: self.m,
            bits: self.bits | (1 << (i - 1)),
        }))
    }

    /// Sign of `e_i ∧ e_I` relative to the sorted basis vector `e_{I ∪ {i}}`.
    pub fn wedge_sign(&self, i: usize) -> Result<i8> {
        if i == 0 || i > self.ground() {
            return Err(Error::ElementOutOfRange {
                element: i,
                m: self.ground(),
            });
        }
        if self.contains(i) {
            return Err(Error::ElementPresent(i));
        }
        let below = (self.bits & ((1u32 << (i - 1)) - 1)).count_ones();
        Ok(if below % 2 == 0 { 1 } else { -1 })
    }

    /// All k-subsets of `[m]` in colex order.
    pub fn all(m: usize, k: usize) -> Result<Vec<Self>> {
        (0..binomial(m, k)).map(|r| Self::unrank(k, m, r)).collect()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.members().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn colex_less(a: &Subset, b: &Subset) -> bool {
        // compare largest differing element
        let diff = a.bits() ^ b.bits();
        diff != 0 && b.bits() & (1 << (31 - diff.leading_zeros())) != 0
    }

    fn bubble_sign(i: usize, set: &Subset) -> i8 {
        let mut word: Vec<usize> = std::iter::once(i).chain(set.members()).collect();
        let mut swaps = 0;
        for a in 0..word.len() {
            for b in 0..word.len() - 1 - a {
                if word[b] > word[b + 1] {
                    word.swap(b, b + 1);
                    swaps += 1;
                }
            }
        }
        if swaps % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn rank_base_cases() {
        assert_eq!(Subset::empty(4).unwrap().rank(), 0);
        assert_eq!(Subset::new(4, &[1]).unwrap().rank(), 0);
        assert_eq!(Subset::new(4, &[4]).unwrap().rank(), 3);
    }

    #[test]
    fn two_subsets_of_three() {
        let listed: Vec<String> = Subset::all(3, 2).unwrap().iter().map(|s| s.to_string()).collect();
        assert_eq!(listed, ["{1,2}", "{1,3}", "{2,3}"]);
    }

    #[test]
    fn rank_unrank_bijection() {
        for m in 0..=12 {
            for k in 0..=m {
                let mut prev: Option<Subset> = None;
                for r in 0..binomial(m, k) {
                    let s = Subset::unrank(k, m, r).unwrap();
                    assert_eq!(s.len(), k);
                    assert_eq!(s.rank(), r);
                    if let Some(p) = prev {
                        assert!(colex_less(&p, &s), "{p} !< {s}");
                    }
                    prev = Some(s);
                }
                assert!(Subset::unrank(k, m, binomial(m, k)).is_err());
            }
        }
    }

    #[test]
    fn insert_cases() {
        let s = Subset::new(3, &[1, 3]).unwrap();
        assert_eq!(s.insert(2).unwrap(), Some(Subset::new(3, &[1, 2, 3]).unwrap()));
        let one = Subset::new(3, &[1]).unwrap();
        assert_eq!(one.insert(1).unwrap(), None);
        assert_eq!(
            Subset::empty(3).unwrap().insert(3).unwrap(),
            Some(Subset::new(3, &[3]).unwrap())
        );
        assert!(s.insert(4).is_err());
    }

    #[test]
    fn wedge_sign_cases() {
        assert_eq!(Subset::new(3, &[2, 3]).unwrap().wedge_sign(1).unwrap(), 1);
        assert_eq!(Subset::new(2, &[1]).unwrap().wedge_sign(2).unwrap(), -1);
        assert!(matches!(
            Subset::new(2, &[1]).unwrap().wedge_sign(1),
            Err(Error::ElementPresent(1))
        ));
    }

    #[test]
    fn wedge_sign_matches_bubble_sort() {
        for m in 1..=6 {
            for k in 0..=m.min(4) {
                for s in Subset::all(m, k).unwrap() {
                    for i in (1..=m).filter(|&i| !s.contains(i)) {
                        assert_eq!(s.wedge_sign(i).unwrap(), bubble_sign(i, &s));
                    }
                }
            }
        }
    }

    #[test]
    fn wedge_antisymmetry() {
        // e_i ∧ (e_j ∧ e_I) = - e_j ∧ (e_i ∧ e_I)
        for m in 2..=6 {
            for k in 0..=m - 2 {
                for s in Subset::all(m, k).unwrap() {
                    for i in (1..=m).filter(|&i| !s.contains(i)) {
                        for j in (1..=m).filter(|&j| j != i && !s.contains(j)) {
                            let sj = s.insert(j).unwrap().unwrap();
                            let si = s.insert(i).unwrap().unwrap();
                            let lhs = sj.wedge_sign(i).unwrap() * s.wedge_sign(j).unwrap();
                            let rhs = si.wedge_sign(j).unwrap() * s.wedge_sign(i).unwrap();
                            assert_eq!(lhs, -rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn wide_ground_set() {
        let s = Subset::full(32).unwrap();
        assert_eq!(s.len(), 32);
        assert_eq!(s.rank(), 0);
        assert!(Subset::empty(33).is_err());
    }
}
