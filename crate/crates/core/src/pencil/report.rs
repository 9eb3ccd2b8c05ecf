use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Pit,
    Structured,
    Exact,
}

/// Evidence attached to a failing check. Integers are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A point modulo `prime` where the two sides differ.
    ModularPoint {
        prime: u64,
        trial: usize,
        point: Vec<Vec<u64>>,
        lhs: u64,
        rhs: u64,
    },
    /// An integer point where the two sides differ.
    IntegerPoint {
        point: Vec<Vec<String>>,
        lhs: String,
        rhs: String,
    },
    /// Symbolic determinant minus expected polynomial.
    Residue { terms: usize, leading: String },
    Rank { expected: usize, actual: usize },
    /// First entry of `Ã(g·y)·B₂ - B₁·Ã(y)` that is nonzero.
    Block {
        block_row: usize,
        block_col: usize,
        row: usize,
        col: usize,
        residue: String,
    },
    Character { expected: String, actual: String },
    /// A subspace of arguments whose image rank invariant changes under the element,
    /// which rules out any constant lift.
    Obstruction {
        subspace: String,
        invariant: String,
        before: usize,
        after: usize,
    },
    /// No lift could be constructed and no obstruction was found.
    NoLift { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub verdict: Verdict,
    pub mode: Mode,
    pub trials: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub primes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl VerificationReport {
    pub fn pass(check: impl Into<String>, mode: Mode) -> Self {
        VerificationReport {
            check: check.into(),
            verdict: Verdict::Pass,
            mode,
            trials: 1,
            primes: Vec::new(),
            seed: None,
            witness: None,
            detail: None,
        }
    }

    pub fn fail(check: impl Into<String>, mode: Mode, witness: Witness) -> Self {
        VerificationReport {
            check: check.into(),
            verdict: Verdict::Fail,
            mode,
            trials: 1,
            primes: Vec::new(),
            seed: None,
            witness: Some(witness),
            detail: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }
}
