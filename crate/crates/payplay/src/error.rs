//! Crate-wide error type.

use thiserror::Error;

use crate::gadgets::dimacs::DimacsError;
use crate::game::{Coalition, PlayerId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // -- construction ------------------------------------------------------
    #[error("game must have between 1 and {max} players, got {n}")]
    BadPlayerCount { n: usize, max: usize },
    #[error("tabular cost models support at most {max} players, got {n}")]
    TabularTooLarge { n: usize, max: usize },
    #[error("player {player}: pay cost must be finite and nonnegative, got {value}")]
    BadPayCost { player: PlayerId, value: f64 },
    #[error("player {player}: cost for {coalition} must be finite and nonnegative, got {value}")]
    BadCostValue {
        player: PlayerId,
        coalition: Coalition,
        value: f64,
    },
    #[error("player {player}: table entry for {coalition} does not contain the owner")]
    EntryWithoutOwner { player: PlayerId, coalition: Coalition },
    #[error("player {player}: table lacks an entry for {coalition}")]
    IncompleteTable { player: PlayerId, coalition: Coalition },
    #[error("duplicate table entry for {coalition}")]
    DuplicateTableEntry { coalition: Coalition },
    #[error("player {player}: anonymous cost array has {len} entries, expected {expected}")]
    BadAnonymousLength {
        player: PlayerId,
        len: usize,
        expected: usize,
    },
    #[error("pay probability {value} for player {player} is outside [0, 1]")]
    BadProbability { player: PlayerId, value: f64 },
    #[error("profile has {got} entries but the game has {expected} players")]
    ProfileLengthMismatch { got: usize, expected: usize },
    #[error("tolerance must be a positive finite number, got {0}")]
    BadTolerance(f64),

    // -- evaluation --------------------------------------------------------
    #[error("player {player}: no cost entry for {coalition}")]
    MissingTableEntry { player: PlayerId, coalition: Coalition },
    #[error("player {player}: derived cost for {coalition} is {value}, expected finite nonnegative")]
    InvalidDerivedCost {
        player: PlayerId,
        coalition: Coalition,
        value: f64,
    },

    // -- exhaustive scans --------------------------------------------------
    #[error("operation supports at most {cap} players, game has {n}")]
    CapExceeded { n: usize, cap: usize },

    // -- equilibrium -------------------------------------------------------
    #[error("game is not symmetric")]
    NotSymmetric,
    #[error("game is not symmetric anonymous")]
    NotSymmetricAnonymous,
    #[error("profile is not a Nash equilibrium")]
    NotAnEquilibrium,
    #[error("best-response dynamics did not converge within {max_iters} iterations{}", match cycle_len { Some(k) => format!(" (cycle of {} profiles detected)", k), None => String::new() })]
    NonConvergence {
        max_iters: usize,
        cycle_len: Option<usize>,
    },

    // -- efficiency --------------------------------------------------------
    #[error("optimum social cost {cost} is within tolerance of zero; ratios are undefined")]
    ZeroOptimum { cost: f64 },

    // -- vaccination -------------------------------------------------------
    #[error("vaccine cost must be positive and finite, got {0}")]
    BadVaccineCost(f64),
    #[error("loss must be positive and finite, got {0}")]
    BadLoss(f64),
    #[error("edge ({u}, {v}) is invalid for a graph on {n} vertices")]
    BadEdge { u: usize, v: usize, n: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("pareto repair stalled: {reason}")]
    RepairStalled { reason: String },

    // -- gadget parameters -------------------------------------------------
    #[error("epsilon {value} is invalid: {reason}")]
    BadEpsilon { value: f64, reason: String },
    #[error("bad parameters: {0}")]
    BadParameters(String),

    // -- input formats -----------------------------------------------------
    #[error("DIMACS parse error: {0}")]
    Dimacs(#[from] DimacsError),
    #[error("load error: {0}")]
    Load(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Load(format!(
            "invalid JSON at line {}, column {}: {}",
            e.line(),
            e.column(),
            e
        ))
    }
}
