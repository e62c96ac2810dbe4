//! Exact symbolic construction of the Sklyanin determinant of a reflection
//! algebra, computed by several independent routes that are cross-checked
//! against each other.
//!
//! The layers, bottom to top:
//!
//! * [`scalars`] — arbitrary-precision rationals, dense polynomials in `u`,
//!   rational functions of `u` in canonical form, and expansion at `u = ∞`.
//! * [`freealg`] — the free noncommutative algebra on symbols `b[p,q](u-s)`
//!   with rational-function coefficients, plus expansion into mode symbols.
//! * [`permcomb`] — symmetric-group machinery: cycles, word restriction,
//!   the index set `I_n`, the `κ ↔ η` bijection, and the `α` coefficients.
//! * [`tensorop`] — sparse operators on `(C^n)^⊗n`: slot permutations,
//!   `R`-matrices, antisymmetrizers, the `Π_k` correctors, and embedded
//!   generating matrices.
//! * [`sdetcore`] — the determinant itself by seven routes, the extraction
//!   that defines it, cross-checking, and diagonal specialization.
//! * [`emit`] — deterministic text / JSON / LaTeX serialization and golden
//!   file comparison.
//!
//! All arithmetic is exact; nothing here ever rounds. No relation between
//! the generator symbols is ever used: every identity asserted by this
//! crate holds in the free algebra.

use std::fmt;

pub mod scalars;
pub mod freealg;
pub mod permcomb;
pub mod tensorop;
pub mod sdetcore;
pub mod emit;

/// Errors surfaced by the partial operations in this crate. Everything that
/// can be total is total; these cover the genuinely partial cases.
#[derive(Debug)]
pub enum Error {
    /// Evaluation of a rational function at a root of its denominator.
    Pole(String),
    /// Expansion at infinity of a rational function with numerator degree
    /// exceeding denominator degree.
    Improper(String),
    /// The alternating-structure assertion inside the determinant
    /// extraction failed. This signals an implementation bug; it must
    /// never trigger on any input this crate constructs.
    Extraction(String),
    /// Malformed textual input, with a position.
    Parse { line: usize, col: usize, msg: String },
    /// A value had the wrong shape for the requested operation
    /// (word length, slot range, JSON schema, ...).
    Shape(String),
    /// An argument was outside the supported range.
    Range(String),
    /// A memory-budget cap (see `SDET_MEM_CAP_MB`) was exceeded.
    Budget(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole(m) => write!(f, "pole: {m}"),
            Error::Improper(m) => write!(f, "not proper at infinity: {m}"),
            Error::Extraction(m) => write!(f, "extraction inconsistency: {m}"),
            Error::Parse { line, col, msg } => {
                write!(f, "parse error at line {line}, column {col}: {msg}")
            }
            Error::Shape(m) => write!(f, "shape error: {m}"),
            Error::Range(m) => write!(f, "range error: {m}"),
            Error::Budget(m) => write!(f, "memory budget exceeded: {m}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
