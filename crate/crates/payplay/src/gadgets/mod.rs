//! Instance generators: counterexample games, inefficiency families, the
//! 3-SAT and set-disjointness reductions, and the lottery pricing game.

pub mod dimacs;

pub use dimacs::{parse_dimacs, CnfFormula, DimacsError};

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::Error;
use crate::game::{
    CoalitionCost, Coalition, CostModel, CostTable, Game, PlayerId, PlayerSpec, MAX_PLAYERS,
};
use crate::json::format_f64;

/// Play cost of position `pos` in the three-player rotation pattern, given
/// which of its two partners also play: cheap with only the successor,
/// expensive once the predecessor joins. No pure profile of the pattern is
/// stable.
fn rotation_cost(has_prev: bool, has_next: bool) -> f64 {
    match (has_prev, has_next) {
        (false, false) => 1.0, // alone
        (false, true) => 1.0,  // with successor
        (true, false) => 2.0,  // with predecessor
        (true, true) => 2.0,   // full triple
    }
}

fn rotation_cost_in(family: [u32; 3], pos: usize, bits: u32) -> f64 {
    let prev = family[(pos + 2) % 3];
    let next = family[(pos + 1) % 3];
    rotation_cost(bits & prev != 0, bits & next != 0)
}

/// The 3-player game with pay cost 1.5 and rotation play costs
/// (indices mod 3): no pure Nash equilibrium exists although all costs are
/// monotone and submodular.
pub fn triangle_gadget() -> Game {
    let family = [1u32 << 0, 1 << 1, 1 << 2];
    let players = (0..3)
        .map(|i| {
            let table = CostTable::from_fn(
                3,
                |set| set.contains(PlayerId(i)),
                |set| rotation_cost_in(family, i, set.bits()),
            );
            PlayerSpec::new(1.5, CostModel::Tabular(table))
        })
        .collect();
    Game::new(players, Some("triangle".to_string())).expect("triangle gadget is valid")
}

/// A 4-player variant of the rotation pattern in which equilibria exist but
/// some players are exactly indifferent between their strategies: players
/// 0-2 use the rotation costs with the cheap pairing raised to 1.5 (ties
/// their pay cost), and player 3 pays 10 or plays for the size of the play
/// set. The game is not generic.
pub fn indifference_gadget() -> Game {
    let mut players: Vec<PlayerSpec> = (0..3)
        .map(|i| {
            let prev = 1u32 << ((i + 2) % 3);
            let next = 1u32 << ((i + 1) % 3);
            let table = CostTable::from_fn(
                4,
                |set| set.contains(PlayerId(i)),
                // Player 3's membership is irrelevant to the rotation players.
                |set| match (set.bits() & prev != 0, set.bits() & next != 0) {
                    (false, false) => 1.0,
                    (false, true) => 1.5,
                    (true, false) => 2.0,
                    (true, true) => 2.0,
                },
            );
            PlayerSpec::new(1.5, CostModel::Tabular(table))
        })
        .collect();
    let size_table = CostTable::from_fn(
        4,
        |set| set.contains(PlayerId(3)),
        |set| set.len() as f64,
    );
    players.push(PlayerSpec::new(10.0, CostModel::Tabular(size_table)));
    Game::new(players, Some("indifference".to_string())).expect("indifference gadget is valid")
}

/// The symmetric 2-player game with pay cost `2 + epsilon`, solo play cost 1
/// and joint play cost 2. Its unique pure equilibrium (both play) admits a
/// profitable joint mixed deviation.
pub fn two_player_example(epsilon: f64) -> Result<Game, Error> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::BadEpsilon {
            value: epsilon,
            reason: "must be positive".to_string(),
        });
    }
    let table = Arc::new(
        CostTable::from_entries(
            2,
            [
                (Coalition::from_indices([0]), 1.0),
                (Coalition::from_indices([1]), 1.0),
                (Coalition::from_indices([0, 1]), 2.0),
            ],
        )
        .expect("distinct entries"),
    );
    let players = (0..2)
        .map(|_| PlayerSpec::new(2.0 + epsilon, CostModel::Shared(Arc::clone(&table))))
        .collect();
    Game::new(
        players,
        Some(format!("two-player eps={}", format_f64(epsilon))),
    )
}

/// Player-specific anonymous family with a price of stability linear in `n`:
/// player 0 pays `n + epsilon` or plays for the play-set size, everyone else
/// pays `2*epsilon` or plays for `epsilon`. The unique equilibrium has all
/// players playing while the optimum has player 0 playing alone.
pub fn pos_player_specific(n: usize, epsilon: f64) -> Result<Game, Error> {
    if !(2..=MAX_PLAYERS).contains(&n) {
        return Err(Error::BadParameters(format!(
            "n must be between 2 and {}, got {}",
            MAX_PLAYERS, n
        )));
    }
    if !epsilon.is_finite() || epsilon <= 0.0 || epsilon >= 1.0 / (4.0 * n as f64) {
        return Err(Error::BadEpsilon {
            value: epsilon,
            reason: format!("must lie in (0, 1/(4n)) = (0, {})", 1.0 / (4.0 * n as f64)),
        });
    }
    let mut players = Vec::with_capacity(n);
    players.push(PlayerSpec::new(
        n as f64 + epsilon,
        CostModel::Anonymous((1..=n).map(|m| m as f64).collect()),
    ));
    for _ in 1..n {
        players.push(PlayerSpec::new(
            2.0 * epsilon,
            CostModel::Anonymous(vec![epsilon; n]),
        ));
    }
    Game::new(
        players,
        Some(format!(
            "pos-player-specific n={} eps={}",
            n,
            format_f64(epsilon)
        )),
    )
}

/// Symmetric submodular family with a price of stability linear in `n`:
/// everyone shares pay cost `1 + epsilon` and the membership-based play cost
/// that is 1 whenever player 0 plays and 0 otherwise. All players playing is
/// the unique equilibrium (cost `n`); the optimum has player 0 paying
/// (cost `1 + epsilon`).
pub fn pos_submodular(n: usize, epsilon: f64) -> Result<Game, Error> {
    if !(2..=crate::game::MAX_TABULAR_PLAYERS).contains(&n) {
        return Err(Error::BadParameters(format!(
            "n must be between 2 and {}, got {}",
            crate::game::MAX_TABULAR_PLAYERS,
            n
        )));
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::BadEpsilon {
            value: epsilon,
            reason: "must be positive".to_string(),
        });
    }
    let table = Arc::new(CostTable::from_fn(
        n,
        |set| !set.is_empty(),
        |set| {
            if set.contains(PlayerId(0)) {
                1.0
            } else {
                0.0
            }
        },
    ));
    let players = (0..n)
        .map(|_| PlayerSpec::new(1.0 + epsilon, CostModel::Shared(Arc::clone(&table))))
        .collect();
    Game::new(
        players,
        Some(format!("pos-submodular n={} eps={}", n, format_f64(epsilon))),
    )
}

// ---------------------------------------------------------------------------
// 3-SAT reduction
// ---------------------------------------------------------------------------

/// Mutual repulsion between a variable's two players: playing costs 2 when
/// the partner also plays, 1 otherwise, against a pay cost of 1.5. In any
/// equilibrium exactly one of the pair plays.
struct PairRepulsionCost {
    partner_bit: u32,
}

impl CoalitionCost for PairRepulsionCost {
    fn cost(&self, members: Coalition) -> f64 {
        if members.bits() & self.partner_bit != 0 {
            2.0
        } else {
            1.0
        }
    }

    fn describe(&self) -> String {
        "pair repulsion".to_string()
    }
}

/// Clause-player cost: 1 whenever some satisfying-literal player is absent
/// from the play set; otherwise the rotation costs over the clause's own
/// three players apply, leaving them with no stable pure configuration.
struct ClauseCost {
    /// Bits of the three literal players; all present means the play set
    /// falsifies the clause.
    required: u32,
    family: [u32; 3],
    pos: usize,
}

impl CoalitionCost for ClauseCost {
    fn cost(&self, members: Coalition) -> f64 {
        if members.bits() & self.required != self.required {
            1.0
        } else {
            rotation_cost_in(self.family, self.pos, members.bits())
        }
    }

    fn describe(&self) -> String {
        "clause".to_string()
    }
}

/// Player index of the literal's representative: the `t` player for a
/// positive literal, the `f` player for a negative one. A variable's truth
/// value maps to its `t` player paying.
pub fn literal_player(lit: i32) -> usize {
    let var = lit.unsigned_abs() as usize;
    if lit > 0 {
        2 * (var - 1)
    } else {
        2 * (var - 1) + 1
    }
}

/// Builds the reduction game for a 3-CNF formula: players
/// `[t_1, f_1, ..., t_m, f_m, a_0, a_1, ...]`, all with pay cost 1.5. The
/// game has a pure Nash equilibrium iff the formula is satisfiable, with
/// variable `v` true exactly when `t_v` pays.
pub fn sat_to_game(cnf: &CnfFormula) -> Result<Game, Error> {
    let m = cnf.num_vars();
    if m == 0 {
        return Err(Error::BadParameters(
            "formula must have at least one variable".to_string(),
        ));
    }
    let n = 2 * m + 3 * cnf.clauses().len();
    if n > MAX_PLAYERS {
        return Err(Error::CapExceeded {
            n,
            cap: MAX_PLAYERS,
        });
    }
    let mut players = Vec::with_capacity(n);
    for var in 0..m {
        let t = 2 * var;
        let f = 2 * var + 1;
        players.push(PlayerSpec::new(
            1.5,
            CostModel::Derived(Arc::new(PairRepulsionCost {
                partner_bit: 1 << f,
            })),
        ));
        players.push(PlayerSpec::new(
            1.5,
            CostModel::Derived(Arc::new(PairRepulsionCost {
                partner_bit: 1 << t,
            })),
        ));
    }
    for (i, clause) in cnf.clauses().iter().enumerate() {
        let base = 2 * m + 3 * i;
        let required = clause
            .iter()
            .fold(0u32, |acc, &lit| acc | 1 << literal_player(lit));
        let family = [
            1u32 << base,
            1 << (base + 1),
            1 << (base + 2),
        ];
        for pos in 0..3 {
            players.push(PlayerSpec::new(
                1.5,
                CostModel::Derived(Arc::new(ClauseCost {
                    required,
                    family,
                    pos,
                })),
            ));
        }
    }
    Game::new(
        players,
        Some(format!(
            "sat vars={} clauses={}",
            m,
            cnf.clauses().len()
        )),
    )
}

// ---------------------------------------------------------------------------
// Set-disjointness reduction
// ---------------------------------------------------------------------------

/// A two-party set-disjointness instance: each party holds a subset of
/// `{1, .., r}` where element `j` names the `j`-th `k`-subset of
/// `{1, .., 2k}` in lexicographic order.
#[derive(Clone, Debug)]
pub struct DisjointnessInstance {
    k: usize,
    a1: BTreeSet<usize>,
    a2: BTreeSet<usize>,
}

impl DisjointnessInstance {
    pub fn new(k: usize, a1: BTreeSet<usize>, a2: BTreeSet<usize>) -> Result<Self, Error> {
        if k == 0 {
            return Err(Error::BadParameters("k must be positive".to_string()));
        }
        let n = 4 * k + 6;
        if n > MAX_PLAYERS {
            return Err(Error::CapExceeded {
                n,
                cap: MAX_PLAYERS,
            });
        }
        let r = k_subsets_lex(2 * k, k).len();
        for set in [&a1, &a2] {
            if let Some(&bad) = set.iter().find(|&&j| j == 0 || j > r) {
                return Err(Error::BadParameters(format!(
                    "element {} outside the universe 1..={}",
                    bad, r
                )));
            }
        }
        Ok(DisjointnessInstance { k, a1, a2 })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Total player count `4k + 6`.
    pub fn n(&self) -> usize {
        4 * self.k + 6
    }

    pub fn universe_size(&self) -> usize {
        k_subsets_lex(2 * self.k, self.k).len()
    }

    pub fn intersects(&self) -> bool {
        self.a1.intersection(&self.a2).next().is_some()
    }
}

/// All `k`-subsets of `{1, .., m}` in lexicographic order, as bitmasks with
/// bit `j-1` for element `j`.
fn k_subsets_lex(m: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (1..=k).collect();
    loop {
        out.push(idx.iter().fold(0u32, |acc, &e| acc | 1 << (e - 1)));
        // advance to the next combination
        let mut i = k;
        while i > 0 && idx[i - 1] == m - (k - i) {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// Cost of a guard player (`t` or `w` family): 2 once the watched side's
/// play pattern covers one of the trigger patterns, otherwise the rotation
/// costs over the player's own triple.
struct CoverOrRotationCost {
    /// Bit of the pair player carrying element `j` (index `j-1`).
    element_bits: Vec<u32>,
    /// Element masks whose full presence in the play set triggers cost 2.
    triggers: Vec<u32>,
    family: [u32; 3],
    pos: usize,
}

impl CoalitionCost for CoverOrRotationCost {
    fn cost(&self, members: Coalition) -> f64 {
        let mut pattern = 0u32;
        for (idx, &bit) in self.element_bits.iter().enumerate() {
            if members.bits() & bit != 0 {
                pattern |= 1 << idx;
            }
        }
        if self.triggers.iter().any(|&t| pattern | t == pattern) {
            2.0
        } else {
            rotation_cost_in(self.family, self.pos, members.bits())
        }
    }

    fn describe(&self) -> String {
        "cover-or-rotation".to_string()
    }
}

/// Builds the reduction game: `2k` mutually repelling pairs `(v_j, u_j)`,
/// three guards watching the `v` side for the patterns in `A1`, and three
/// guards watching the `u` side for the complements of the patterns in `A2`.
/// A pure Nash equilibrium exists iff `A1` and `A2` intersect.
pub fn disjointness_to_game(inst: &DisjointnessInstance) -> Result<Game, Error> {
    let k = inst.k;
    let pairs = 2 * k;
    let n = inst.n();
    let subsets = k_subsets_lex(pairs, k);
    let full_elements = (1u32 << pairs) - 1;

    let v_index = |j: usize| 2 * (j - 1); // element j (1-based)
    let u_index = |j: usize| 2 * (j - 1) + 1;

    let mut players = Vec::with_capacity(n);
    for j in 1..=pairs {
        players.push(PlayerSpec::new(
            1.5,
            CostModel::Derived(Arc::new(PairRepulsionCost {
                partner_bit: 1 << u_index(j),
            })),
        ));
        players.push(PlayerSpec::new(
            1.5,
            CostModel::Derived(Arc::new(PairRepulsionCost {
                partner_bit: 1 << v_index(j),
            })),
        ));
    }

    let t_base = 4 * k;
    let w_base = 4 * k + 3;
    let v_bits: Vec<u32> = (1..=pairs).map(|j| 1u32 << v_index(j)).collect();
    let u_bits: Vec<u32> = (1..=pairs).map(|j| 1u32 << u_index(j)).collect();
    let t_triggers: Vec<u32> = inst.a1.iter().map(|&j| subsets[j - 1]).collect();
    let w_triggers: Vec<u32> = inst
        .a2
        .iter()
        .map(|&j| full_elements & !subsets[j - 1])
        .collect();
    let t_family = [
        1u32 << t_base,
        1 << (t_base + 1),
        1 << (t_base + 2),
    ];
    let w_family = [
        1u32 << w_base,
        1 << (w_base + 1),
        1 << (w_base + 2),
    ];
    for pos in 0..3 {
        players.push(PlayerSpec::new(
            1.5,
            CostModel::Derived(Arc::new(CoverOrRotationCost {
                element_bits: v_bits.clone(),
                triggers: t_triggers.clone(),
                family: t_family,
                pos,
            })),
        ));
    }
    for pos in 0..3 {
        players.push(PlayerSpec::new(
            1.5,
            CostModel::Derived(Arc::new(CoverOrRotationCost {
                element_bits: u_bits.clone(),
                triggers: w_triggers.clone(),
                family: w_family,
                pos,
            })),
        ));
    }

    // The w guards sit after the t guards in the player order.
    debug_assert_eq!(players.len(), n);
    let a_fmt = |set: &BTreeSet<usize>| {
        let items: Vec<String> = set.iter().map(|j| j.to_string()).collect();
        format!("{{{}}}", items.join(","))
    };
    Game::new(
        players,
        Some(format!(
            "disjointness k={} a1={} a2={}",
            k,
            a_fmt(&inst.a1),
            a_fmt(&inst.a2)
        )),
    )
}

// ---------------------------------------------------------------------------
// Lottery pricing
// ---------------------------------------------------------------------------

/// The differential-pricing game: buy at the fixed price `p`, or enter a
/// lottery that assigns `k` units uniformly among the `m` entrants at the
/// discounted price `q`. With more than `k` entrants a loser pays
/// `no_win_loss` (default `p`: buying at the fixed price afterwards), so a
/// participant expects `(k/m)*q + (1-k/m)*no_win_loss`. Anonymous,
/// symmetric, and a congestion game, so pure equilibria always exist.
pub fn pricing_game(
    n: usize,
    k: usize,
    p: f64,
    q: f64,
    no_win_loss: Option<f64>,
) -> Result<Game, Error> {
    if !(2..=MAX_PLAYERS).contains(&n) || k == 0 || k >= n {
        return Err(Error::BadParameters(format!(
            "need 1 <= k < n <= {}, got n={} k={}",
            MAX_PLAYERS, n, k
        )));
    }
    if !p.is_finite() || !q.is_finite() || q < 0.0 || q >= p {
        return Err(Error::BadParameters(format!(
            "need 0 <= q < p, got p={} q={}",
            p, q
        )));
    }
    let loss = no_win_loss.unwrap_or(p);
    if !loss.is_finite() || q > loss {
        return Err(Error::BadParameters(format!(
            "no-win loss {} must be at least q={} to keep costs monotone",
            loss, q
        )));
    }
    let w: Vec<f64> = (1..=n)
        .map(|m| {
            if m <= k {
                q
            } else {
                let win = k as f64 / m as f64;
                win * q + (1.0 - win) * loss
            }
        })
        .collect();
    let players = (0..n)
        .map(|_| PlayerSpec::new(p, CostModel::Anonymous(w.clone())))
        .collect();
    Game::new(
        players,
        Some(format!(
            "pricing n={} k={} p={} q={} loss={}",
            n,
            k,
            format_f64(p),
            format_f64(q),
            format_f64(loss)
        )),
    )
}

#[cfg(test)]
mod tests;
