//! Affine matrix pencils `Ã(y) = Λ + A(y)` and everything that evaluates them:
//! numeric and modular evaluation, symbolic determinants, randomized identity
//! testing, the structured cyclic-path evaluator, normal-form reduction and
//! JSON interchange.

mod form;
pub mod json;
mod normalize;
mod path;
mod pit;
mod report;
mod scaled;
mod symbolic;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactmath::{IntMatrix, Polynomial, Rational};
use crate::oracles;

pub use form::{has_unit_coefficients, AffineForm, Coeff, Variable};
pub use normalize::{normalize_regular, NormalizedPencil};
pub use path::{path_det, path_det_symbolic, PathEvaluator, PathValue};
pub use pit::{pencil_pit_equal, PitConfig};
pub use report::{Mode, Verdict, VerificationReport, Witness};
pub use scaled::{scaled_float_check, FloatCheck};
pub use symbolic::{pencil_symbolic_det, symbolic_det_with_bound, DEFAULT_SYMBOLIC_BOUND};

/// Every builder this crate knows about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Construction {
    Grenet,
    RegularDet,
    EquivariantPerm,
    EquivariantDet,
    QuadricHalf,
    QuadricFull,
    TrivialDet,
}

impl Construction {
    pub const ALL: [Construction; 7] = [
        Construction::Grenet,
        Construction::RegularDet,
        Construction::EquivariantPerm,
        Construction::EquivariantDet,
        Construction::QuadricHalf,
        Construction::QuadricFull,
        Construction::TrivialDet,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Construction::Grenet => "grenet",
            Construction::RegularDet => "regular-det",
            Construction::EquivariantPerm => "equivariant-perm",
            Construction::EquivariantDet => "equivariant-det",
            Construction::QuadricHalf => "quadric-half",
            Construction::QuadricFull => "quadric-full",
            Construction::TrivialDet => "trivial-det",
        }
    }

    pub fn target(&self) -> Target {
        match self {
            Construction::Grenet | Construction::EquivariantPerm => Target::Permanent,
            Construction::RegularDet | Construction::EquivariantDet | Construction::TrivialDet => {
                Target::Determinant
            }
            Construction::QuadricHalf => Target::BilinearForm,
            Construction::QuadricFull => Target::SumOfSquares,
        }
    }

    /// Shape of the argument matrix for size parameter `m`.
    pub fn arg_shape(&self, m: usize) -> (usize, usize) {
        match self {
            Construction::QuadricHalf => (2, m),
            Construction::QuadricFull => (1, m),
            _ => (m, m),
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownConstruction(s.to_string()))
    }
}

/// The polynomial a pencil is meant to represent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Permanent,
    Determinant,
    /// `Σ x_j y^j` with `x` the first and `y` the second row of a `2 × s` argument.
    BilinearForm,
    /// `Σ z_j²` over a `1 × M` argument.
    SumOfSquares,
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::Permanent => "perm",
            Target::Determinant => "det",
            Target::BilinearForm => "bilinear-quadric",
            Target::SumOfSquares => "sum-of-squares",
        }
    }

    /// Exact value at an integer argument.
    pub fn eval(&self, point: &IntMatrix) -> Result<BigInt> {
        match self {
            Target::Permanent => oracles::perm_ryser(point),
            Target::Determinant => point.det(),
            Target::BilinearForm => Ok((0..point.cols())
                .map(|j| &point[(0, j)] * &point[(1, j)])
                .sum()),
            Target::SumOfSquares => Ok(point.row(0).iter().map(|z| z * z).sum()),
        }
    }

    /// Value modulo `p` at a row-major residue point of the given shape.
    pub fn eval_mod(&self, point: &[u64], shape: (usize, usize), p: u64) -> u64 {
        use crate::exactmath::modular::{add_mod, mul_mod};
        let (rows, cols) = shape;
        match self {
            Target::Permanent => oracles::perm_mod_p(point, rows, p),
            Target::Determinant => crate::exactmath::det_mod_p(point, rows, p),
            Target::BilinearForm => (0..cols).fold(0, |acc, j| {
                add_mod(acc, mul_mod(point[j], point[cols + j], p), p)
            }),
            Target::SumOfSquares => point
                .iter()
                .fold(0, |acc, &z| add_mod(acc, mul_mod(z, z, p), p)),
        }
    }

    /// The target as a polynomial in the argument variables.
    pub fn polynomial(&self, shape: (usize, usize)) -> Result<Polynomial<Variable>> {
        let (rows, cols) = shape;
        match self {
            Target::Permanent => oracles::perm_polynomial(rows),
            Target::Determinant => oracles::det_polynomial(rows),
            Target::BilinearForm => Ok((1..=cols)
                .map(|j| {
                    &Polynomial::var(Variable::new(1, j)) * &Polynomial::var(Variable::new(2, j))
                })
                .fold(Polynomial::zero(), |acc, t| acc + t)),
            Target::SumOfSquares => Ok((1..=cols)
                .map(|j| Polynomial::var(Variable::new(1, j)).pow(2))
                .fold(Polynomial::zero(), |acc, t| acc + t)),
        }
    }
}

/// How a block's basis is indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// One-dimensional block.
    Scalar,
    /// k-subsets of `[m]` in colex order.
    Subsets { k: usize, m: usize },
    /// Pairs `(I, J)` of k-subsets, index `rank(I) · binom(m, k) + rank(J)`.
    SubsetPairs { k: usize, m: usize },
    /// Plain coordinates `1..=dim`.
    Coordinates,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub label: String,
    pub dim: usize,
    pub basis: BasisKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockLayout {
    blocks: Vec<Block>,
}

impl BlockLayout {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        for (i, b) in blocks.iter().enumerate() {
            if blocks[..i].iter().any(|c| c.label == b.label) {
                return Err(Error::Json(format!("duplicate block label {}", b.label)));
            }
        }
        Ok(BlockLayout { blocks })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }

    /// Start index of every block, plus the total as a final entry.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.blocks.len() + 1);
        let mut acc = 0;
        for b in &self.blocks {
            out.push(acc);
            acc += b.dim;
        }
        out.push(acc);
        out
    }

    /// Block containing global index `i`, and the offset inside it.
    pub fn locate(&self, i: usize) -> (usize, usize) {
        let mut acc = 0;
        for (k, b) in self.blocks.iter().enumerate() {
            if i < acc + b.dim {
                return (k, i - acc);
            }
            acc += b.dim;
        }
        panic!("index {i} outside layout of size {acc}");
    }
}

/// The identity `det_n ∘ Ã = sign · expected_factor · target` a pencil claims,
/// where the constant part carries coefficient 1 instead of the scaling
/// `expected_factor^(-1/scaling_exponent)` when `scaling_exponent > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Metadata {
    pub construction: Construction,
    pub m: usize,
    pub sign: i8,
    pub scaling_exponent: usize,
    pub expected_factor: BigInt,
}

impl Metadata {
    pub fn target(&self) -> Target {
        self.construction.target()
    }

    /// `sign · expected_factor` as one integer.
    pub fn multiplier(&self) -> BigInt {
        if self.sign < 0 {
            -self.expected_factor.clone()
        } else {
            self.expected_factor.clone()
        }
    }
}

/// An `n × n` matrix of affine forms, stored by sparse rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PencilMatrix<T = BigInt> {
    n: usize,
    shape: (usize, usize),
    rows: Vec<Vec<(usize, AffineForm<T>)>>,
    layout: BlockLayout,
    meta: Metadata,
}

impl<T: Coeff> PencilMatrix<T> {
    /// Assembles a pencil from `(row, col, form)` triplets; repeated positions add up.
    pub fn from_triplets<I>(meta: Metadata, layout: BlockLayout, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, AffineForm<T>)>,
    {
        let n = layout.total_dim();
        let shape = meta.construction.arg_shape(meta.m);
        let mut rows: Vec<Vec<(usize, AffineForm<T>)>> = vec![Vec::new(); n];
        for (r, c, form) in triplets {
            if r >= n || c >= n {
                return Err(Error::DimensionMismatch {
                    expected: format!("indices below {n}"),
                    actual: format!("({r}, {c})"),
                });
            }
            for v in form.variables() {
                if v.row == 0 || v.col == 0 || v.row as usize > shape.0 || v.col as usize > shape.1 {
                    return Err(Error::DimensionMismatch {
                        expected: format!("variables inside a {}x{} argument", shape.0, shape.1),
                        actual: format!("{v:?}"),
                    });
                }
            }
            let row = &mut rows[r];
            match row.binary_search_by(|(cc, _)| cc.cmp(&c)) {
                Ok(i) => row[i].1.add_scaled(&form, &T::one()),
                Err(i) => row.insert(i, (c, form)),
            }
        }
        for row in &mut rows {
            row.retain(|(_, f)| !f.is_zero());
        }
        Ok(PencilMatrix {
            n,
            shape,
            rows,
            layout,
            meta,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.meta.m
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn meta(&self) -> &Metadata {
        &self.meta
    }

    pub fn row(&self, r: usize) -> &[(usize, AffineForm<T>)] {
        &self.rows[r]
    }

    pub fn entry(&self, r: usize, c: usize) -> Option<&AffineForm<T>> {
        let row = &self.rows[r];
        row.binary_search_by(|(cc, _)| cc.cmp(&c)).ok().map(|i| &row[i].1)
    }

    /// All nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &AffineForm<T>)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, f)| (r, *c, f)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Dense constant part `Ã(0)`.
    pub fn constant_part(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.n]; self.n];
        for (r, c, f) in self.entries() {
            out[r][c] = f.constant_part().clone();
        }
        out
    }

    /// Returns a copy with the entry at `(r, c)` replaced.
    pub fn with_entry(&self, r: usize, c: usize, form: AffineForm<T>) -> Self {
        let mut out = self.clone();
        let row = &mut out.rows[r];
        match row.binary_search_by(|(cc, _)| cc.cmp(&c)) {
            Ok(i) if form.is_zero() => {
                row.remove(i);
            }
            Ok(i) => row[i].1 = form,
            Err(_) if form.is_zero() => {}
            Err(i) => row.insert(i, (c, form)),
        }
        out
    }

    pub fn with_meta(mut self, meta: Metadata) -> Self {
        self.meta = meta;
        self
    }

    /// `left · Ã · right` for constant square matrices.
    pub fn sandwich(&self, left: &[Vec<T>], right: &[Vec<T>]) -> Result<Self> {
        let n = self.n;
        if left.len() != n || right.len() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n} transformations"),
                actual: format!("{} and {} rows", left.len(), right.len()),
            });
        }
        // (L Ã)[i][c] = Σ_r L[i][r] Ã[r][c]
        let mut la: Vec<Vec<AffineForm<T>>> = vec![vec![AffineForm::zero(); n]; n];
        for (i, lrow) in left.iter().enumerate() {
            for (r, lv) in lrow.iter().enumerate() {
                if lv.is_zero() {
                    continue;
                }
                for (c, f) in &self.rows[r] {
                    la[i][*c].add_scaled(f, lv);
                }
            }
        }
        let mut triplets = Vec::new();
        for (i, row) in la.iter().enumerate() {
            let mut acc: Vec<AffineForm<T>> = vec![AffineForm::zero(); n];
            for (c, f) in row.iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                for (j, acc_j) in acc.iter_mut().enumerate() {
                    let rv = &right[c][j];
                    if !rv.is_zero() {
                        acc_j.add_scaled(f, rv);
                    }
                }
            }
            triplets.extend(acc.into_iter().enumerate().map(|(j, f)| (i, j, f)));
        }
        PencilMatrix::from_triplets(self.meta.clone(), self.layout.clone(), triplets)
    }

    pub fn map_coeffs<U: Coeff, F: Fn(&T) -> U>(&self, f: F) -> PencilMatrix<U> {
        PencilMatrix {
            n: self.n,
            shape: self.shape,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|(c, form)| (*c, form.map_coeffs(&f))).collect())
                .collect(),
            layout: self.layout.clone(),
            meta: self.meta.clone(),
        }
    }

    /// Human-readable aligned matrix; zero entries print as `0`.
    pub fn pretty(&self) -> String {
        let names = self.variable_namer();
        let cells: Vec<Vec<String>> = (0..self.n)
            .map(|r| {
                (0..self.n)
                    .map(|c| match self.entry(r, c) {
                        Some(f) => {
                            let mut s = String::new();
                            form::write_form(&mut s, f, &names).expect("string write");
                            s
                        }
                        None => "0".to_string(),
                    })
                    .collect()
            })
            .collect();
        let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
        let mut out = String::new();
        for row in &cells {
            let padded: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            out.push_str(&padded.join("  "));
            out.push('\n');
        }
        out
    }

    fn variable_namer(&self) -> impl Fn(&Variable) -> String {
        let construction = self.meta.construction;
        move |v: &Variable| match construction {
            Construction::QuadricHalf if v.row == 1 => format!("x_{}", v.col),
            Construction::QuadricHalf => format!("y^{}", v.col),
            Construction::QuadricFull => format!("z_{}", v.col),
            _ => v.to_string(),
        }
    }
}

impl PencilMatrix<BigInt> {
    fn check_point(&self, rows: usize, cols: usize) -> Result<()> {
        if (rows, cols) != self.shape {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{} argument", self.shape.0, self.shape.1),
                actual: format!("{rows}x{cols}"),
            });
        }
        Ok(())
    }

    /// Entrywise evaluation `Ã(point)`.
    pub fn eval(&self, point: &IntMatrix) -> Result<IntMatrix> {
        self.check_point(point.rows(), point.cols())?;
        let mut out = IntMatrix::zeros(self.n, self.n);
        for (r, c, f) in self.entries() {
            out[(r, c)] = f.eval(point);
        }
        Ok(out)
    }

    /// Evaluation modulo `p` at a row-major residue point; dense row-major output.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> Result<Vec<u64>> {
        let (rows, cols) = self.shape;
        if point.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} residues", rows * cols),
                actual: point.len().to_string(),
            });
        }
        let mut out = vec![0u64; self.n * self.n];
        for (r, c, f) in self.entries() {
            out[r * self.n + c] = f.eval_mod(point, cols, p);
        }
        Ok(out)
    }

    pub fn constant_matrix(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.n, self.n);
        for (r, c, f) in self.entries() {
            out[(r, c)] = f.constant_part().clone();
        }
        out
    }

    pub fn to_rational(&self) -> PencilMatrix<Rational> {
        self.map_coeffs(|c| Rational::from_integer(c.clone()))
    }

    /// `det(Ã(point))` computed densely by fraction-free elimination.
    pub fn dense_det(&self, point: &IntMatrix) -> Result<BigInt> {
        self.eval(point)?.det()
    }

    /// Integer sandwich `left · Ã · right`.
    pub fn sandwich_int(&self, left: &IntMatrix, right: &IntMatrix) -> Result<Self> {
        self.sandwich(&left.to_rows(), &right.to_rows())
    }

    /// Whether `Ã(0)` has rank `n - 1`.
    pub fn is_regular(&self) -> bool {
        self.n > 0 && self.constant_matrix().rank() == self.n - 1
    }
}
