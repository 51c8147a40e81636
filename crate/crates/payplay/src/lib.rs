//! Pay-or-play games: every player either *pays* a fixed cost or *plays* an
//! action whose cost depends on the set of players who also play.
//!
//! The crate covers:
//!
//! - game representation with tabular, anonymous (count-based), shared, and
//!   oracle-backed play-cost models, plus the structural predicates
//!   (monotone, symmetric, anonymous, submodular, generic) — [`game`];
//! - pure/mixed Nash equilibrium enumeration and verification, a greedy
//!   solver for symmetric games, strong and semi-strong deviation
//!   certificates, and best-response dynamics — [`equilibrium`];
//! - social optimum, Pareto-efficiency certification, and price of
//!   anarchy/stability — [`efficiency`];
//! - vaccination games on networks, with the component-threshold
//!   equilibrium characterization and a repair procedure that produces
//!   Pareto-efficient equilibria — [`vaccination`];
//! - generators for the counterexample instances, the 3-SAT and
//!   set-disjointness reduction games, the lottery pricing game, and a
//!   DIMACS CNF parser — [`gadgets`];
//! - deterministic JSON input/output — [`json`] — and analysis reports —
//!   [`report`];
//! - seeded random-instance samplers for the property suites — [`sampler`].

pub mod efficiency;
pub mod equilibrium;
mod error;
pub mod gadgets;
pub mod game;
pub mod json;
pub mod report;
pub mod sampler;
pub mod vaccination;

pub use error::{Error, Result};
pub use game::{
    Coalition, CostModel, CostTable, Game, MixedProfile, PlayerId, PlayerSpec, PureProfile,
    Tolerance,
};
