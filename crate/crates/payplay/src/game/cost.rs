//! Play-cost models: tabular, anonymous (count-based), shared, and derived
//! (oracle-backed).

use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::game::{Coalition, PlayerId};

/// Cost oracle for play-cost models computed on demand rather than stored in
/// a table (e.g. graph-derived costs). `members` always contains the owner.
pub trait CoalitionCost: Send + Sync {
    fn cost(&self, members: Coalition) -> f64;

    /// Short tag for Debug output.
    fn describe(&self) -> String {
        "derived".to_string()
    }
}

/// Dense map from coalitions of an `n`-player game to costs. Absent entries
/// are stored as NaN.
#[derive(Clone)]
pub struct CostTable {
    n: usize,
    entries: Vec<f64>,
}

impl CostTable {
    pub fn new(n: usize) -> Self {
        CostTable {
            n,
            entries: vec![f64::NAN; 1usize << n],
        }
    }

    pub fn from_entries<I>(n: usize, entries: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (Coalition, f64)>,
    {
        let mut table = CostTable::new(n);
        for (set, cost) in entries {
            table.insert(set, cost)?;
        }
        Ok(table)
    }

    /// Fill every coalition matched by `keep` from `f`.
    pub fn from_fn(n: usize, keep: impl Fn(Coalition) -> bool, f: impl Fn(Coalition) -> f64) -> Self {
        let mut table = CostTable::new(n);
        for bits in 0..(1u32 << n) {
            let set = Coalition::from_bits(bits);
            if keep(set) {
                table.entries[bits as usize] = f(set);
            }
        }
        table
    }

    pub fn insert(&mut self, set: Coalition, cost: f64) -> Result<(), Error> {
        let idx = set.bits() as usize;
        if idx >= self.entries.len() {
            return Err(Error::Load(format!(
                "coalition {} out of range for {} players",
                set, self.n
            )));
        }
        if !self.entries[idx].is_nan() {
            return Err(Error::DuplicateTableEntry { coalition: set });
        }
        self.entries[idx] = cost;
        Ok(())
    }

    pub fn get(&self, set: Coalition) -> Option<f64> {
        let v = *self.entries.get(set.bits() as usize)?;
        if v.is_nan() {
            None
        } else {
            Some(v)
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Defined entries in ascending coalition-bitmask order.
    pub fn iter(&self) -> impl Iterator<Item = (Coalition, f64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_nan())
            .map(|(i, &v)| (Coalition::from_bits(i as u32), v))
    }
}

impl fmt::Debug for CostTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CostTable(n={}, {} entries)", self.n, self.iter().count())
    }
}

/// How a player's play cost maps coalitions to numbers.
#[derive(Clone)]
pub enum CostModel {
    /// Explicit per-coalition table; must define a cost for every coalition
    /// containing the owner.
    Tabular(CostTable),
    /// Cost depends only on how many players play: `by_count[m-1]` is the
    /// cost when `m` players (including the owner) play.
    Anonymous(Vec<f64>),
    /// One table shared by several players (symmetric games).
    Shared(Arc<CostTable>),
    /// Oracle-backed cost, e.g. derived from a graph.
    Derived(Arc<dyn CoalitionCost>),
}

impl CostModel {
    /// Play cost for `owner` when `members` play. `members` must contain
    /// `owner`.
    pub fn evaluate(&self, owner: PlayerId, members: Coalition) -> Result<f64, Error> {
        debug_assert!(members.contains(owner));
        match self {
            CostModel::Tabular(t) => t.get(members).ok_or(Error::MissingTableEntry {
                player: owner,
                coalition: members,
            }),
            CostModel::Anonymous(w) => {
                w.get(members.len() - 1)
                    .copied()
                    .ok_or(Error::MissingTableEntry {
                        player: owner,
                        coalition: members,
                    })
            }
            CostModel::Shared(t) => t.get(members).ok_or(Error::MissingTableEntry {
                player: owner,
                coalition: members,
            }),
            CostModel::Derived(oracle) => {
                let v = oracle.cost(members);
                if v.is_finite() && v >= 0.0 {
                    Ok(v)
                } else {
                    Err(Error::InvalidDerivedCost {
                        player: owner,
                        coalition: members,
                        value: v,
                    })
                }
            }
        }
    }

    pub fn is_anonymous_model(&self) -> bool {
        matches!(self, CostModel::Anonymous(_))
    }
}

impl fmt::Debug for CostModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostModel::Tabular(t) => write!(f, "Tabular({:?})", t),
            CostModel::Anonymous(w) => write!(f, "Anonymous({:?})", w),
            CostModel::Shared(t) => write!(f, "Shared({:?})", t),
            CostModel::Derived(o) => write!(f, "Derived({})", o.describe()),
        }
    }
}

/// One player's costs: the fixed pay cost and the play-cost model.
#[derive(Clone, Debug)]
pub struct PlayerSpec {
    pub pay_cost: f64,
    pub play_cost: CostModel,
}

impl PlayerSpec {
    pub fn new(pay_cost: f64, play_cost: CostModel) -> Self {
        PlayerSpec {
            pay_cost,
            play_cost,
        }
    }
}
