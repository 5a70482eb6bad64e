//! Error taxonomy shared by every module.
//!
//! Errors split into two groups: the input is malformed (bad distance matrix,
//! non-stochastic kernel, ...) versus the input is well formed but the
//! requested operation has an infeasible precondition (outside the Delta_k
//! polytope, radius past the separation window, ...). The CLI maps the first
//! group to exit code 1 and the second to exit code 2.

use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Triangle inequality fails: d(i,k) > d(i,j) + d(j,k).
    TriangleViolation { i: usize, j: usize, k: usize },
    AsymmetricDistance { i: usize, j: usize },
    /// Measure entries negative or not summing to one; carries the residual.
    BadMeasure { residual: f64 },
    ZeroMeasureState { index: usize },
    NotStochastic { row: usize },
    NotReversible { residual: f64 },
    DisconnectedGraph,
    BadAdjacency,
    EmptySet,
    DimensionMismatch,
    DegenerateBasis,
    OutOfRangeEntry { index: usize },
    BadPartition,
    NegativeInput,
    BadExponent,
    /// Measure vector outside Delta_k; carries the index of the violated
    /// constraint (k = the sum constraint, i < k = the i-th lower constraint).
    NotInDeltaK { constraint: usize },
    RadiusTooLarge,
    EmptyComplement,
    ZeroSeparation,
    NoFeasibleFamily,
    BadParameters,
    NotLipschitzOnA { i: usize, j: usize },
    NotAnExtension { index: usize },
    OverlappingIntervals,
}

impl Error {
    /// True for errors meaning "well-formed input, infeasible precondition".
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::NotInDeltaK { .. }
                | Error::RadiusTooLarge
                | Error::EmptyComplement
                | Error::ZeroSeparation
                | Error::NoFeasibleFamily
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::TriangleViolation { i, j, k } => {
                write!(f, "TriangleViolation({i},{k},{j}): d({i},{k}) > d({i},{j}) + d({j},{k})")
            }
            Error::AsymmetricDistance { i, j } => {
                write!(f, "AsymmetricDistance: dist[{i}][{j}] != dist[{j}][{i}]")
            }
            Error::BadMeasure { residual } => {
                write!(f, "BadMeasure: entries must be >= 0 and sum to 1 (residual {residual:e})")
            }
            Error::ZeroMeasureState { index } => {
                write!(f, "ZeroMeasureState: mu[{index}] = 0 is not allowed for chains")
            }
            Error::NotStochastic { row } => {
                write!(f, "NotStochastic: row {row} of p does not sum to 1 or has negative entries")
            }
            Error::NotReversible { residual } => {
                write!(f, "NotReversible: detailed balance residual {residual:e}")
            }
            Error::DisconnectedGraph => write!(f, "DisconnectedGraph: support graph is not connected"),
            Error::BadAdjacency => {
                write!(f, "BadAdjacency: adjacency must be symmetric 0/1 with zero diagonal")
            }
            Error::EmptySet => write!(f, "EmptySet: index set must be non-empty"),
            Error::DimensionMismatch => write!(f, "DimensionMismatch"),
            Error::DegenerateBasis => write!(f, "DegenerateBasis: vectors are linearly dependent"),
            Error::OutOfRangeEntry { index } => {
                write!(f, "OutOfRangeEntry: entry {index} outside [0,1]")
            }
            Error::BadPartition => write!(f, "BadPartition: blocks must be disjoint and cover the index range"),
            Error::NegativeInput => write!(f, "NegativeInput: argument must be >= 0"),
            Error::BadExponent => write!(f, "BadExponent: p must be > 1"),
            Error::NotInDeltaK { constraint } => {
                write!(f, "NotInDeltaK: constraint {constraint} violated")
            }
            Error::RadiusTooLarge => write!(f, "RadiusTooLarge: radius exceeds half the family separation"),
            Error::EmptyComplement => write!(f, "EmptyComplement: mu(A_0) = 0"),
            Error::ZeroSeparation => write!(f, "ZeroSeparation: sets must be pairwise positively separated"),
            Error::NoFeasibleFamily => write!(f, "NoFeasibleFamily: no Delta_k-feasible separated family found"),
            Error::BadParameters => write!(f, "BadParameters"),
            Error::NotLipschitzOnA { i, j } => {
                write!(f, "NotLipschitzOnA: pair ({i},{j}) violates the 1-Lipschitz bound on A")
            }
            Error::NotAnExtension { index } => {
                write!(f, "NotAnExtension: g differs from f at index {index} of A")
            }
            Error::OverlappingIntervals => write!(f, "OverlappingIntervals"),
        }
    }
}
