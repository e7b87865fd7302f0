//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An element's coordinate vector does not match the group signature.
    DimensionMismatch { expected: usize, got: usize },
    /// A torsion modulus below 2 was supplied.
    InvalidTorsionModulus(i64),
    /// Element enumeration requested on a group with free rank > 0.
    NotEnumerable,
    /// A degree vector was empty or contained a part < 1.
    InvalidDegreeVector,
    /// An index set does not meet every block in exactly d_k indices.
    InvalidRelation,
    /// A configuration does not contain exactly 2g points.
    PointCountMismatch { expected: usize, got: usize },
    /// Divisor point lists do not match the declared (t, g).
    DivisorDegreeMismatch { expected: usize, got: usize },
    /// A stated invariant of the bielliptic data fails.
    BiellipticInvariant(&'static str),
    /// Vector length does not match the matrix column count.
    VectorLengthMismatch { expected: usize, got: usize },
    /// Matrix entry list does not fill rows × cols.
    MatrixShapeMismatch {
        rows: usize,
        cols: usize,
        entries: usize,
    },
    /// Genus outside the operation's valid range.
    GenusOutOfRange { min: u32, got: u32 },
    /// t outside 0 ≤ t ≤ g/2.
    TOutOfRange { g: u32, t: u32 },
    /// The case tag is inconsistent with (g, t).
    CaseMismatch { g: u32, t: u32, case: &'static str },
    /// xi exceeds the value at which the degree formula reaches zero.
    XiExceedsDegree { xi: u64, max_xi: String },
    /// Search requested on an infinite group.
    InfiniteGroup,
    /// find_xi_value targets must be even.
    OddTarget(u64),
    /// Exhaustive enumeration refused: reduced space exceeds the ceiling.
    SearchSpaceTooLarge { estimated: String, ceiling: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "element has {got} coordinates, group expects {expected}")
            }
            Error::InvalidTorsionModulus(m) => write!(f, "torsion modulus {m} is below 2"),
            Error::NotEnumerable => write!(f, "group with free rank > 0 is not enumerable"),
            Error::InvalidDegreeVector => {
                write!(f, "degree vector must be nonempty with all parts >= 1")
            }
            Error::InvalidRelation => {
                write!(f, "index set is not a relation for this degree vector")
            }
            Error::PointCountMismatch { expected, got } => {
                write!(f, "configuration has {got} points, expected {expected}")
            }
            Error::DivisorDegreeMismatch { expected, got } => {
                write!(f, "divisor has {got} points, expected {expected}")
            }
            Error::BiellipticInvariant(msg) => {
                write!(f, "bielliptic data invariant violated: {msg}")
            }
            Error::VectorLengthMismatch { expected, got } => {
                write!(f, "vector has length {got}, matrix has {expected} columns")
            }
            Error::MatrixShapeMismatch {
                rows,
                cols,
                entries,
            } => {
                write!(
                    f,
                    "matrix {rows}x{cols} needs {} entries, got {entries}",
                    rows * cols
                )
            }
            Error::GenusOutOfRange { min, got } => {
                write!(
                    f,
                    "genus {got} is outside the operation's range (minimum {min})"
                )
            }
            Error::TOutOfRange { g, t } => write!(f, "t = {t} outside 0 <= t <= g/2 for g = {g}"),
            Error::CaseMismatch { g, t, case } => {
                write!(f, "case {case} is inconsistent with (g, t) = ({g}, {t})")
            }
            Error::XiExceedsDegree { xi, max_xi } => {
                write!(f, "xi = {xi} exceeds the zero-degree threshold {max_xi}")
            }
            Error::InfiniteGroup => write!(f, "search requires a finite group"),
            Error::OddTarget(t) => write!(
                f,
                "target {t} is odd; xi is always even on zero-sum configurations"
            ),
            Error::SearchSpaceTooLarge { estimated, ceiling } => {
                write!(f, "exhaustive space estimated at {estimated} candidates exceeds ceiling {ceiling}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
