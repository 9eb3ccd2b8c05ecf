//! Sparse multivariate polynomials with arbitrary-precision integer coefficients.
//!
//! Polynomials are generic over the variable type; the pencil module supplies
//! the canonical [`Variable`](crate::pencil::Variable) ids.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// Bound collecting what a polynomial variable needs.
pub trait Var: Clone + Ord + fmt::Display {}
impl<T: Clone + Ord + fmt::Display> Var for T {}

/// A power product. Exponents are kept sorted by variable and never zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial<V> {
    exps: Vec<(V, u32)>,
}

impl<V: Var> Monomial<V> {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: V) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    /// Builds a monomial from arbitrary (variable, exponent) pairs, merging
    /// repeats and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (V, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<V, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial {
            exps: map.into_iter().filter(|&(_, e)| e > 0).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &V) -> u32 {
        self.exps
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&V, u32)> {
        self.exps.iter().map(|(v, e)| (v, *e))
    }

    pub fn mul_var(&self, v: &V) -> Self {
        let mut exps = self.exps.clone();
        match exps.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) => exps[i].1 += 1,
            Err(i) => exps.insert(i, (v.clone(), 1)),
        }
        Monomial { exps }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut a, mut b) = (self.exps.iter().peekable(), other.exps.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    std::cmp::Ordering::Less => {
                        out.push((va.clone(), *ea));
                        a.next();
                    }
                    std::cmp::Ordering::Greater => {
                        out.push((vb.clone(), *eb));
                        b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        out.push((va.clone(), ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => {
                    out.extend(a.cloned());
                    break;
                }
                (None, Some(_)) => {
                    out.extend(b.cloned());
                    break;
                }
                (None, None) => break,
            }
        }
        Monomial { exps: out }
    }
}

impl<V: Var> fmt::Display for Monomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial; the term map never stores a zero coefficient, so
/// structural equality is ring equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<V> {
    terms: BTreeMap<Monomial<V>, BigInt>,
}

impl<V: Var> Default for Polynomial<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Var> Polynomial<V> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: V) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::var(v), BigInt::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial<V>, BigInt)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `coeff * mono` in place.
    pub fn add_term(&mut self, mono: Monomial<V>, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial<V>) -> BigInt {
        self.terms.get(mono).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self += coeff * product` where product is given by monomial factor.
    pub fn add_scaled_shift(&mut self, other: &Self, coeff: &BigInt, mono: &Monomial<V>) {
        for (m, c) in &other.terms {
            self.add_term(m.mul(mono), c * coeff);
        }
    }

    /// Evaluates with a lookup closure; the first unassigned variable is an error.
    pub fn eval_with<F>(&self, mut lookup: F) -> Result<BigInt>
    where
        F: FnMut(&V) -> Option<BigInt>,
    {
        let mut cache: BTreeMap<V, BigInt> = BTreeMap::new();
        let mut total = BigInt::zero();
        for (mono, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in mono.iter() {
                let value = match cache.get(v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = lookup(v).ok_or_else(|| Error::UnassignedVariable(v.to_string()))?;
                        cache.insert(v.clone(), x.clone());
                        x
                    }
                };
                term *= Pow::pow(&value, e);
            }
            total += term;
        }
        Ok(total)
    }

    pub fn eval(&self, point: &BTreeMap<V, BigInt>) -> Result<BigInt> {
        self.eval_with(|v| point.get(v).cloned())
    }

    /// All variables that occur in some term.
    pub fn variables(&self) -> Vec<V> {
        let mut vs: Vec<V> = self
            .terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v.clone()))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

impl<V: Var> fmt::Display for Polynomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<V: Var> AddAssign<&Polynomial<V>> for Polynomial<V> {
    fn add_assign(&mut self, rhs: &Polynomial<V>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<V: Var> SubAssign<&Polynomial<V>> for Polynomial<V> {
    fn sub_assign(&mut self, rhs: &Polynomial<V>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl<V: Var> Add for &Polynomial<V> {
    type Output = Polynomial<V>;
    fn add(self, rhs: &Polynomial<V>) -> Polynomial<V> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<V: Var> Add for Polynomial<V> {
    type Output = Polynomial<V>;
    fn add(mut self, rhs: Polynomial<V>) -> Polynomial<V> {
        self += &rhs;
        self
    }
}

impl<V: Var> Sub for &Polynomial<V> {
    type Output = Polynomial<V>;
    fn sub(self, rhs: &Polynomial<V>) -> Polynomial<V> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<V: Var> Sub for Polynomial<V> {
    type Output = Polynomial<V>;
    fn sub(mut self, rhs: Polynomial<V>) -> Polynomial<V> {
        self -= &rhs;
        self
    }
}

impl<V: Var> Neg for &Polynomial<V> {
    type Output = Polynomial<V>;
    fn neg(self) -> Polynomial<V> {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl<V: Var> Neg for Polynomial<V> {
    type Output = Polynomial<V>;
    fn neg(self) -> Polynomial<V> {
        -&self
    }
}

impl<V: Var> Mul for &Polynomial<V> {
    type Output = Polynomial<V>;
    fn mul(self, rhs: &Polynomial<V>) -> Polynomial<V> {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl<V: Var> Mul for Polynomial<V> {
    type Output = Polynomial<V>;
    fn mul(self, rhs: Polynomial<V>) -> Polynomial<V> {
        &self * &rhs
    }
}
