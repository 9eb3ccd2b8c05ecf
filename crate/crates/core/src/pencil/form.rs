use std::fmt;
use std::ops::{AddAssign, Mul, Neg};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmath::{modular, IntMatrix, Rational};

/// The entry at row `row`, column `col` (both 1-based) of the argument matrix.
///
/// Rows index the left factor `E` and columns the right factor `F`; in the
/// superscript notation `y^j_i` of the displayed representations this variable
/// is `y^{col}_{row}`, which is how it prints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub row: u16,
    pub col: u16,
}

impl Variable {
    pub fn new(row: usize, col: usize) -> Self {
        debug_assert!(row >= 1 && col >= 1);
        Variable {
            row: row as u16,
            col: col as u16,
        }
    }

    /// Canonical integer id, ordered like the variable itself.
    pub fn id(&self) -> u32 {
        (u32::from(self.row) << 16) | u32::from(self.col)
    }

    pub fn from_id(id: u32) -> Self {
        Variable {
            row: (id >> 16) as u16,
            col: (id & 0xffff) as u16,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^{}_{}", self.col, self.row)
    }
}

/// Coefficient ring of an affine form: the integers, or the rationals once
/// constant rational transformations are applied.
pub trait Coeff:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone
        + fmt::Debug
        + fmt::Display
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + for<'a> AddAssign<&'a T>
        + for<'a> Mul<&'a T, Output = T>
{
}

/// `constant + Σ coeff · variable`, linear terms sorted by variable and nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineForm<T = BigInt> {
    constant: T,
    linear: Vec<(Variable, T)>,
}

impl<T: Coeff> AffineForm<T> {
    pub fn zero() -> Self {
        AffineForm {
            constant: T::zero(),
            linear: Vec::new(),
        }
    }

    pub fn constant(c: T) -> Self {
        AffineForm {
            constant: c,
            linear: Vec::new(),
        }
    }

    pub fn term(v: Variable, coeff: T) -> Self {
        let mut f = Self::zero();
        f.add_term(v, coeff);
        f
    }

    pub fn constant_part(&self) -> &T {
        &self.constant
    }

    pub fn linear(&self) -> &[(Variable, T)] {
        &self.linear
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.linear.is_empty()
    }

    pub fn coeff(&self, v: &Variable) -> T {
        self.linear
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.linear[i].1.clone())
            .unwrap_or_else(|_| T::zero())
    }

    pub fn add_constant(&mut self, c: &T) {
        self.constant += c;
    }

    pub fn add_term(&mut self, v: Variable, coeff: T) {
        if coeff.is_zero() {
            return;
        }
        match self.linear.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => {
                self.linear[i].1 += &coeff;
                if self.linear[i].1.is_zero() {
                    self.linear.remove(i);
                }
            }
            Err(i) => self.linear.insert(i, (v, coeff)),
        }
    }

    /// `self += scale * other`
    pub fn add_scaled(&mut self, other: &Self, scale: &T) {
        if scale.is_zero() {
            return;
        }
        self.constant += &(other.constant.clone() * scale);
        for (v, c) in &other.linear {
            self.add_term(*v, c.clone() * scale);
        }
    }

    pub fn scaled(&self, scale: &T) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, scale);
        out
    }

    pub fn map_coeffs<U: Coeff, F: Fn(&T) -> U>(&self, f: F) -> AffineForm<U> {
        let mut out = AffineForm::constant(f(&self.constant));
        for (v, c) in &self.linear {
            out.add_term(*v, f(c));
        }
        out
    }

    /// Replaces every variable by an affine form (given per variable).
    pub fn substitute<F>(&self, mut image: F) -> Self
    where
        F: FnMut(&Variable) -> AffineForm<T>,
    {
        let mut out = Self::constant(self.constant.clone());
        for (v, c) in &self.linear {
            out.add_scaled(&image(v), c);
        }
        out
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.linear.iter().map(|(v, _)| v)
    }
}

impl AffineForm<BigInt> {
    /// Value at an integer point; the caller guarantees the shape covers every variable.
    pub fn eval(&self, point: &IntMatrix) -> BigInt {
        let mut acc = self.constant.clone();
        for (v, c) in &self.linear {
            let x = &point[(v.row as usize - 1, v.col as usize - 1)];
            if !x.is_zero() {
                acc += c * x;
            }
        }
        acc
    }

    /// Value at a point of residues stored row-major with `cols` columns.
    pub fn eval_mod(&self, point: &[u64], cols: usize, p: u64) -> u64 {
        let mut acc = modular::reduce(&self.constant, p);
        for (v, c) in &self.linear {
            let x = point[(v.row as usize - 1) * cols + v.col as usize - 1];
            let c = modular::reduce(c, p);
            acc = modular::add_mod(acc, modular::mul_mod(c, x, p), p);
        }
        acc
    }

    pub fn to_rational(&self) -> AffineForm<Rational> {
        self.map_coeffs(|c| Rational::from_integer(c.clone()))
    }
}

impl<T: Coeff> fmt::Display for AffineForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_form(f, self, |v| v.to_string())
    }
}

/// Writes a form with custom variable names; used by the pretty printers.
pub(crate) fn write_form<T: Coeff, W: fmt::Write, N: Fn(&Variable) -> String>(
    out: &mut W,
    form: &AffineForm<T>,
    name: N,
) -> fmt::Result {
    let mut first = true;
    if !form.constant.is_zero() || form.linear.is_empty() {
        write!(out, "{}", form.constant)?;
        first = false;
    }
    for (v, c) in &form.linear {
        let text = c.to_string();
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        };
        let coef = if body == "1" { String::new() } else { format!("{body}*") };
        match (first, neg) {
            (true, true) => write!(out, "-{coef}{}", name(v))?,
            (true, false) => write!(out, "{coef}{}", name(v))?,
            (false, true) => write!(out, " - {coef}{}", name(v))?,
            (false, false) => write!(out, " + {coef}{}", name(v))?,
        }
        first = false;
    }
    Ok(())
}

/// True when every coefficient of the form is `±1` or zero.
pub fn has_unit_coefficients(form: &AffineForm<BigInt>) -> bool {
    form.linear().iter().all(|(_, c)| c.abs().is_one())
}
