use std::fmt;

use crate::error::{format, Error, Result};
use crate::statevector::StateVector;

/// Names accepted by [`OracleSpec::builtin`].
pub const BUILTIN_ORACLES: [&str; 4] = ["parity", "parity-low4", "constant0", "constant1"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    Constant,
    Balanced,
    Other,
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleKind::Constant => "constant",
            OracleKind::Balanced => "balanced",
            OracleKind::Other => "other",
        })
    }
}

/// A boolean function on `n`-bit inputs, as a truth table in index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSpec {
    n: usize,
    table: Vec<bool>,
}

impl OracleSpec {
    pub fn from_table(n: usize, table: Vec<bool>) -> Result<Self> {
        if n == 0 || n >= usize::BITS as usize || table.len() != 1usize << n {
            return format(format!(
                "truth table has {} entries, expected 2^{n}",
                table.len()
            ));
        }
        Ok(Self { n, table })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        if n == 0 || n >= usize::BITS as usize {
            return format(format!("cannot tabulate a function on {n} bits"));
        }
        Self::from_table(n, (0..1usize << n).map(f).collect())
    }

    /// Parses a string of `'0'`/`'1'` characters; whitespace is ignored.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let table = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Format(format!("unexpected character {other:?} in truth table"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(n, table)
    }

    /// `parity`: odd parity of `x`. `parity-low4`: odd parity of bits
    /// `x₃x₂x₁x₀`. `constant0` / `constant1`: constant functions.
    pub fn builtin(name: &str, n: usize) -> Result<Self> {
        match name {
            "parity" => Self::from_fn(n, |x| x.count_ones() % 2 == 1),
            "parity-low4" => Self::from_fn(n, |x| (x & 0xf).count_ones() % 2 == 1),
            "constant0" => Self::from_fn(n, |_| false),
            "constant1" => Self::from_fn(n, |_| true),
            _ => Err(Error::Usage(format!(
                "unknown oracle '{name}', expected one of {}",
                BUILTIN_ORACLES.join(", ")
            ))),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn eval(&self, x: usize) -> bool {
        self.table[x]
    }

    pub fn kind(&self) -> OracleKind {
        let ones = self.table.iter().filter(|&&b| b).count();
        if ones == 0 || ones == self.table.len() {
            OracleKind::Constant
        } else if 2 * ones == self.table.len() {
            OracleKind::Balanced
        } else {
            OracleKind::Other
        }
    }
}

/// One bracketed AND-term of the disjunctive normal form of `f`: true on
/// exactly one input `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minterm {
    x: usize,
    /// Bit positions that enter the term complemented (`x_i = 0`).
    complemented: Vec<usize>,
}

impl Minterm {
    pub fn new(n: usize, x: usize) -> Self {
        let complemented = (0..n).filter(|i| x >> i & 1 == 0).collect();
        Self { x, complemented }
    }

    pub fn input(&self) -> usize {
        self.x
    }

    pub fn complemented(&self) -> &[usize] {
        &self.complemented
    }

    /// The block as a circuit: X on the complemented bits, an `n`-controlled
    /// NOT onto a work qubit held in `(|0⟩-|1⟩)/√2`, X again. With the work
    /// qubit traced out this is a sign flip on `|x⟩` alone.
    pub fn apply(&self, s: &mut StateVector) -> Result<()> {
        s.apply_reflection(self.x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DnfDecomposition {
    n: usize,
    minterms: Vec<Minterm>,
}

impl DnfDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn minterms(&self) -> &[Minterm] {
        &self.minterms
    }

    pub fn len(&self) -> usize {
        self.minterms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.minterms.is_empty()
    }
}

/// One minterm per satisfying input, ascending.
pub fn dnf_decompose(f: &OracleSpec) -> DnfDecomposition {
    let minterms = f
        .table
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(x, _)| Minterm::new(f.n, x))
        .collect();
    DnfDecomposition { n: f.n, minterms }
}
