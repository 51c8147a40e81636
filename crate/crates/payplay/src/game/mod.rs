//! Game representation and cost evaluation.
//!
//! A pay-or-play game has `n` players, each choosing between a *pay* action
//! with fixed cost `h_i` and a *play* action whose cost `g_i(A)` depends on
//! the set `A` of players who also play. Play costs must be monotone
//! nondecreasing in the play set; [`Game::check_monotone`] verifies this.

mod checks;
mod coalition;
mod cost;
mod profile;

pub use checks::{MonotoneReport, MonotoneViolation};
pub use coalition::{Coalition, PlayerId};
pub use cost::{CoalitionCost, CostModel, CostTable, PlayerSpec};
pub use profile::{MixedProfile, PureProfile};

use crate::error::Error;

/// Hard player-count limit; every exhaustive scan in this crate is
/// exponential in `n`, so games are kept desk-scale.
pub const MAX_PLAYERS: usize = 24;

/// Player-count limit for tabular and shared models, whose full tables hold
/// an entry per coalition.
pub const MAX_TABULAR_PLAYERS: usize = 16;

pub const DEFAULT_EPS: f64 = 1e-9;

/// Comparison slack for floating-point cost tests. "Strictly less" means
/// `a < b - eps`; "equal" means `|a - b| <= eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

impl Tolerance {
    pub fn new(eps: f64) -> Result<Self, Error> {
        if eps.is_finite() && eps > 0.0 {
            Ok(Tolerance { eps })
        } else {
            Err(Error::BadTolerance(eps))
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.eps
    }

    pub fn lt(&self, a: f64, b: f64) -> bool {
        a < b - self.eps
    }

    pub fn le(&self, a: f64, b: f64) -> bool {
        a <= b + self.eps
    }

    pub fn gt(&self, a: f64, b: f64) -> bool {
        b < a - self.eps
    }

    pub fn ge(&self, a: f64, b: f64) -> bool {
        b <= a + self.eps
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: DEFAULT_EPS }
    }
}

/// An immutable pay-or-play game. All operations are pure functions of their
/// inputs; values are safe to share across threads.
#[derive(Clone, Debug)]
pub struct Game {
    players: Vec<PlayerSpec>,
    label: Option<String>,
}

impl Game {
    /// Builds and validates a game. Tabular and shared models must be
    /// complete (an entry for every coalition containing the owner) and all
    /// costs finite and nonnegative.
    pub fn new(players: Vec<PlayerSpec>, label: Option<String>) -> Result<Self, Error> {
        let n = players.len();
        if n == 0 || n > MAX_PLAYERS {
            return Err(Error::BadPlayerCount { n, max: MAX_PLAYERS });
        }
        for (i, spec) in players.iter().enumerate() {
            let player = PlayerId(i);
            if !spec.pay_cost.is_finite() || spec.pay_cost < 0.0 {
                return Err(Error::BadPayCost {
                    player,
                    value: spec.pay_cost,
                });
            }
            match &spec.play_cost {
                CostModel::Tabular(table) => {
                    validate_table_size(n, table.n())?;
                    // Entries must exist exactly for the coalitions containing
                    // the owner.
                    for bits in 1..(1u32 << n) {
                        let set = Coalition::from_bits(bits);
                        match (set.contains(player), table.get(set)) {
                            (true, Some(v)) => validate_cost(player, set, v)?,
                            (true, None) => {
                                return Err(Error::IncompleteTable {
                                    player,
                                    coalition: set,
                                })
                            }
                            (false, Some(_)) => {
                                return Err(Error::EntryWithoutOwner {
                                    player,
                                    coalition: set,
                                })
                            }
                            (false, None) => {}
                        }
                    }
                    if table.get(Coalition::empty()).is_some() {
                        return Err(Error::EntryWithoutOwner {
                            player,
                            coalition: Coalition::empty(),
                        });
                    }
                }
                CostModel::Shared(table) => {
                    validate_table_size(n, table.n())?;
                    // A shared table serves every player, so it must cover all
                    // nonempty coalitions.
                    for bits in 1..(1u32 << n) {
                        let set = Coalition::from_bits(bits);
                        match table.get(set) {
                            Some(v) => validate_cost(player, set, v)?,
                            None => {
                                return Err(Error::IncompleteTable {
                                    player,
                                    coalition: set,
                                })
                            }
                        }
                    }
                }
                CostModel::Anonymous(w) => {
                    if w.len() != n {
                        return Err(Error::BadAnonymousLength {
                            player,
                            len: w.len(),
                            expected: n,
                        });
                    }
                    for (m, &v) in w.iter().enumerate() {
                        let set = Coalition::full(m + 1);
                        validate_cost(player, set, v)?;
                    }
                }
                CostModel::Derived(_) => {}
            }
        }
        Ok(Game { players, label })
    }

    pub fn n(&self) -> usize {
        self.players.len()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn player(&self, player: PlayerId) -> &PlayerSpec {
        &self.players[player.0]
    }

    pub fn player_specs(&self) -> &[PlayerSpec] {
        &self.players
    }

    pub fn players(&self) -> impl Iterator<Item = PlayerId> {
        (0..self.n()).map(PlayerId)
    }

    /// Fixed cost of the pay strategy for `player`.
    pub fn pay_cost(&self, player: PlayerId) -> f64 {
        self.players[player.0].pay_cost
    }

    /// Cost of the play strategy for `player` when `members` (which must
    /// contain `player`) choose to play.
    pub fn play_cost(&self, player: PlayerId, members: Coalition) -> Result<f64, Error> {
        self.players[player.0].play_cost.evaluate(player, members)
    }

    fn check_profile(&self, profile: &PureProfile) -> Result<(), Error> {
        if profile.n() != self.n() {
            return Err(Error::ProfileLengthMismatch {
                got: profile.n(),
                expected: self.n(),
            });
        }
        Ok(())
    }

    fn check_mixed(&self, profile: &MixedProfile) -> Result<(), Error> {
        if profile.n() != self.n() {
            return Err(Error::ProfileLengthMismatch {
                got: profile.n(),
                expected: self.n(),
            });
        }
        Ok(())
    }

    /// Cost of `player` under a pure profile: `h_i` when paying, `g_i(A(x))`
    /// when playing.
    pub fn pure_cost(&self, profile: &PureProfile, player: PlayerId) -> Result<f64, Error> {
        self.check_profile(profile)?;
        if profile.pays(player) {
            Ok(self.pay_cost(player))
        } else {
            self.play_cost(player, profile.play_set())
        }
    }

    /// Expected play cost of `player` given that `player` plays, under the
    /// independent product distribution induced by the other players'
    /// pay probabilities.
    pub fn play_branch_cost(&self, profile: &MixedProfile, player: PlayerId) -> Result<f64, Error> {
        self.check_mixed(profile)?;
        let n = self.n();
        let others: Vec<usize> = (0..n).filter(|&j| j != player.0).collect();
        let mut total = 0.0;
        for sub in 0u32..(1u32 << others.len()) {
            let mut weight = 1.0;
            let mut members = Coalition::singleton(player);
            for (k, &j) in others.iter().enumerate() {
                let p_pay = profile.pay_prob(PlayerId(j));
                if sub & (1 << k) != 0 {
                    weight *= 1.0 - p_pay;
                    members = members.with(PlayerId(j));
                } else {
                    weight *= p_pay;
                }
            }
            // Zero-probability branches contribute nothing; skipping them also
            // makes the expectation at a 0/1 vector exactly equal to the pure
            // cost.
            if weight == 0.0 {
                continue;
            }
            total += weight * self.play_cost(player, members)?;
        }
        Ok(total)
    }

    /// Expected cost of `player` under a mixed profile: the full
    /// product-measure expectation
    /// `x_i*h_i + (1-x_i) * sum_S prod_{j in S}(1-x_j) prod_{j notin S} x_j * g_i(S+i)`.
    pub fn mixed_cost(&self, profile: &MixedProfile, player: PlayerId) -> Result<f64, Error> {
        self.check_mixed(profile)?;
        let p_pay = profile.pay_prob(player);
        let pay_part = p_pay * self.pay_cost(player);
        if p_pay == 1.0 {
            return Ok(pay_part);
        }
        Ok(pay_part + (1.0 - p_pay) * self.play_branch_cost(profile, player)?)
    }

    /// Sum of all players' costs under a pure profile.
    pub fn social_cost(&self, profile: &PureProfile) -> Result<f64, Error> {
        let mut total = 0.0;
        for i in self.players() {
            total += self.pure_cost(profile, i)?;
        }
        Ok(total)
    }

    /// Dense per-coalition play costs for `player`: index by coalition bits;
    /// coalitions not containing the player hold NaN. Requires
    /// `n <= MAX_TABULAR_PLAYERS`.
    pub(crate) fn dense_play_costs(&self, player: PlayerId) -> Result<Vec<f64>, Error> {
        let n = self.n();
        debug_assert!(n <= MAX_TABULAR_PLAYERS);
        let mut out = vec![f64::NAN; 1usize << n];
        for bits in 1..(1u32 << n) {
            let set = Coalition::from_bits(bits);
            if set.contains(player) {
                out[bits as usize] = self.play_cost(player, set)?;
            }
        }
        Ok(out)
    }
}

fn validate_table_size(n: usize, table_n: usize) -> Result<(), Error> {
    if n > MAX_TABULAR_PLAYERS {
        return Err(Error::TabularTooLarge {
            n,
            max: MAX_TABULAR_PLAYERS,
        });
    }
    if table_n != n {
        return Err(Error::Load(format!(
            "table built for {} players used in a {}-player game",
            table_n, n
        )));
    }
    Ok(())
}

fn validate_cost(player: PlayerId, set: Coalition, value: f64) -> Result<(), Error> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::BadCostValue {
            player,
            coalition: set,
            value,
        })
    }
}
