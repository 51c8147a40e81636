//! Structural predicates: monotone, symmetric, anonymous, submodular,
//! generic.
//!
//! Tabular-backed games (`n <= MAX_TABULAR_PLAYERS`) are checked
//! exhaustively. Derived models on larger games fall back to deterministic
//! random sampling and report `exhaustive = false` where the result type
//! carries that flag.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::game::{Coalition, CostModel, Game, PlayerId, Tolerance, MAX_TABULAR_PLAYERS};

/// Number of random probes per player used when a check cannot be exhaustive.
pub const DEFAULT_SAMPLE_PAIRS: usize = 10_000;

const SAMPLE_SEED: u64 = 0x7061_7970_6c61_7973;

/// Maximum number of violations reported by [`Game::check_monotone`].
const MAX_REPORTED_VIOLATIONS: usize = 1_000;

/// A witnessed failure of monotonicity: `smaller` is a subset of `larger`
/// yet costs strictly more (beyond tolerance) for `player`.
#[derive(Clone, Debug)]
pub struct MonotoneViolation {
    pub player: PlayerId,
    pub smaller: Coalition,
    pub larger: Coalition,
    pub smaller_cost: f64,
    pub larger_cost: f64,
}

/// Outcome of a monotonicity check.
#[derive(Clone, Debug)]
pub struct MonotoneReport {
    pub violations: Vec<MonotoneViolation>,
    /// False when the check had to sample instead of scanning every
    /// subset pair.
    pub exhaustive: bool,
}

impl MonotoneReport {
    pub fn is_monotone(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Game {
    /// Checks that every player's play cost is monotone nondecreasing:
    /// `g_i(S) <= g_i(T)` whenever `S ⊆ T` and `i ∈ S`. Returns every
    /// witnessed violation exceeding tolerance (capped at 1000 entries).
    pub fn check_monotone(&self, tol: Tolerance) -> Result<MonotoneReport, Error> {
        self.check_monotone_sampled(tol, DEFAULT_SAMPLE_PAIRS)
    }

    /// As [`check_monotone`](Game::check_monotone), with an explicit probe
    /// count for the sampled fallback.
    pub fn check_monotone_sampled(
        &self,
        tol: Tolerance,
        sample_pairs: usize,
    ) -> Result<MonotoneReport, Error> {
        let n = self.n();
        let mut violations = Vec::new();
        let mut exhaustive = true;
        for player in self.players() {
            if violations.len() >= MAX_REPORTED_VIOLATIONS {
                break;
            }
            match &self.player(player).play_cost {
                CostModel::Anonymous(w) => {
                    anonymous_monotone_violations(player, w, n, tol, &mut violations);
                }
                _ if n <= MAX_TABULAR_PLAYERS => {
                    let dense = self.dense_play_costs(player)?;
                    dense_monotone_violations(player, &dense, n, tol, &mut violations);
                }
                _ => {
                    exhaustive = false;
                    self.sampled_monotone_violations(
                        player,
                        tol,
                        sample_pairs,
                        &mut violations,
                    )?;
                }
            }
        }
        violations.truncate(MAX_REPORTED_VIOLATIONS);
        Ok(MonotoneReport {
            violations,
            exhaustive,
        })
    }

    fn sampled_monotone_violations(
        &self,
        player: PlayerId,
        tol: Tolerance,
        sample_pairs: usize,
        out: &mut Vec<MonotoneViolation>,
    ) -> Result<(), Error> {
        let n = self.n();
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ player.0 as u64);
        let full = Coalition::full(n).bits();
        let me = 1u32 << player.0;
        for _ in 0..sample_pairs {
            let larger = (rng.gen::<u32>() & full) | me;
            let smaller = (rng.gen::<u32>() & larger) | me;
            if smaller == larger {
                continue;
            }
            let s = Coalition::from_bits(smaller);
            let l = Coalition::from_bits(larger);
            let cs = self.play_cost(player, s)?;
            let cl = self.play_cost(player, l)?;
            if tol.gt(cs, cl) {
                out.push(MonotoneViolation {
                    player,
                    smaller: s,
                    larger: l,
                    smaller_cost: cs,
                    larger_cost: cl,
                });
                if out.len() >= MAX_REPORTED_VIOLATIONS {
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    /// True iff all players share one pay cost and one play-cost function:
    /// every coalition costs each of its members the same amount (within
    /// tolerance).
    pub fn check_symmetric(&self, tol: Tolerance) -> Result<bool, Error> {
        let n = self.n();
        if n == 1 {
            return Ok(true);
        }
        let h0 = self.pay_cost(PlayerId(0));
        if self.players().any(|i| !tol.eq(self.pay_cost(i), h0)) {
            return Ok(false);
        }
        // One table shared by every player is symmetric by construction.
        if let CostModel::Shared(first) = &self.player(PlayerId(0)).play_cost {
            if self.player_specs().iter().all(|spec| {
                matches!(&spec.play_cost, CostModel::Shared(t) if std::sync::Arc::ptr_eq(t, first))
            }) {
                return Ok(true);
            }
        }
        if n <= MAX_TABULAR_PLAYERS {
            for bits in 1..(1u32 << n) {
                let set = Coalition::from_bits(bits);
                if !self.members_agree(set, tol)? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        // Large games: exact comparison for anonymous arrays, otherwise a
        // deterministic sample of coalitions.
        if self
            .player_specs()
            .iter()
            .all(|s| s.play_cost.is_anonymous_model())
        {
            let w0 = match &self.player(PlayerId(0)).play_cost {
                CostModel::Anonymous(w) => w.clone(),
                _ => unreachable!(),
            };
            for spec in self.player_specs() {
                if let CostModel::Anonymous(w) = &spec.play_cost {
                    if w.len() != w0.len()
                        || w.iter().zip(&w0).any(|(&a, &b)| !tol.eq(a, b))
                    {
                        return Ok(false);
                    }
                }
            }
            return Ok(true);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        let full = Coalition::full(n).bits();
        for _ in 0..2048 {
            let bits = rng.gen::<u32>() & full;
            if bits == 0 {
                continue;
            }
            if !self.members_agree(Coalition::from_bits(bits), tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn members_agree(&self, set: Coalition, tol: Tolerance) -> Result<bool, Error> {
        let mut first = None;
        for member in set.iter() {
            let c = self.play_cost(member, set)?;
            match first {
                None => first = Some(c),
                Some(f) => {
                    if !tol.eq(c, f) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// True iff `player`'s play cost depends only on how many players play:
    /// equal-size coalitions containing the player cost the same (within
    /// tolerance).
    pub fn check_anonymous(&self, player: PlayerId, tol: Tolerance) -> Result<bool, Error> {
        let n = self.n();
        if self.player(player).play_cost.is_anonymous_model() {
            return Ok(true);
        }
        if n <= MAX_TABULAR_PLAYERS {
            let dense = self.dense_play_costs(player)?;
            let mut by_size: Vec<Option<f64>> = vec![None; n + 1];
            for bits in 1..(1u32 << n) {
                let set = Coalition::from_bits(bits);
                if !set.contains(player) {
                    continue;
                }
                let c = dense[bits as usize];
                match by_size[set.len()] {
                    None => by_size[set.len()] = Some(c),
                    Some(f) => {
                        if !tol.eq(c, f) {
                            return Ok(false);
                        }
                    }
                }
            }
            return Ok(true);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ 0x11 ^ player.0 as u64);
        for _ in 0..DEFAULT_SAMPLE_PAIRS {
            let size = rng.gen_range(1..=n);
            let a = random_set_of_size(&mut rng, n, size, player);
            let b = random_set_of_size(&mut rng, n, size, player);
            if !tol.eq(self.play_cost(player, a)?, self.play_cost(player, b)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True iff `player`'s play cost has diminishing marginal cost:
    /// `g(T+j) - g(T) <= g(S+j) - g(S)` for all `S ⊆ T` containing the
    /// player and all `j ∉ T` (within tolerance).
    pub fn check_submodular(&self, player: PlayerId, tol: Tolerance) -> Result<bool, Error> {
        let n = self.n();
        if let CostModel::Anonymous(w) = &self.player(player).play_cost {
            // Anonymity reduces submodularity to nonincreasing differences of
            // the count-indexed array.
            let mut min_diff = f64::INFINITY;
            for m in 1..n {
                let diff = w[m] - w[m - 1];
                if diff > min_diff + tol.eps() {
                    return Ok(false);
                }
                min_diff = min_diff.min(diff);
            }
            return Ok(true);
        }
        if n <= MAX_TABULAR_PLAYERS {
            let dense = self.dense_play_costs(player)?;
            let me = 1u32 << player.0;
            let full = Coalition::full(n).bits();
            for t in 1..(1u32 << n) {
                if t & me == 0 {
                    continue;
                }
                let mut rest = full & !t;
                while rest != 0 {
                    let j = rest & rest.wrapping_neg();
                    rest &= rest - 1;
                    let marginal_t = dense[(t | j) as usize] - dense[t as usize];
                    // Proper and improper submasks of t containing the player.
                    let mut s = t;
                    loop {
                        if s & me != 0 {
                            let marginal_s = dense[(s | j) as usize] - dense[s as usize];
                            if marginal_t > marginal_s + tol.eps() {
                                return Ok(false);
                            }
                        }
                        if s == 0 {
                            break;
                        }
                        s = (s - 1) & t;
                    }
                }
            }
            return Ok(true);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ 0x22 ^ player.0 as u64);
        let full = Coalition::full(n).bits();
        let me = 1u32 << player.0;
        for _ in 0..DEFAULT_SAMPLE_PAIRS {
            let t = (rng.gen::<u32>() & full) | me;
            if t == full {
                continue;
            }
            let s = (rng.gen::<u32>() & t) | me;
            let outside: Vec<u32> = (0..n as u32)
                .filter(|&j| t & (1 << j) == 0)
                .collect();
            let j = 1u32 << outside[rng.gen_range(0..outside.len())];
            let g = |bits: u32| self.play_cost(player, Coalition::from_bits(bits));
            let marginal_t = g(t | j)? - g(t)?;
            let marginal_s = g(s | j)? - g(s)?;
            if marginal_t > marginal_s + tol.eps() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True iff no player's pay cost ever ties a play cost: `|h_i - g_i(S)|`
    /// exceeds tolerance for every player `i` and coalition `S` containing
    /// `i`. Games with this property have unique best responses.
    pub fn check_generic(&self, tol: Tolerance) -> Result<bool, Error> {
        let n = self.n();
        for player in self.players() {
            let h = self.pay_cost(player);
            match &self.player(player).play_cost {
                CostModel::Anonymous(w) => {
                    if w.iter().any(|&v| tol.eq(v, h)) {
                        return Ok(false);
                    }
                }
                _ if n <= MAX_TABULAR_PLAYERS => {
                    let dense = self.dense_play_costs(player)?;
                    for bits in 1..(1u32 << n) {
                        if bits & (1 << player.0) != 0 && tol.eq(dense[bits as usize], h) {
                            return Ok(false);
                        }
                    }
                }
                _ => {
                    let mut rng =
                        ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ 0x33 ^ player.0 as u64);
                    let full = Coalition::full(n).bits();
                    let me = 1u32 << player.0;
                    for _ in 0..DEFAULT_SAMPLE_PAIRS {
                        let bits = (rng.gen::<u32>() & full) | me;
                        if tol.eq(self.play_cost(player, Coalition::from_bits(bits))?, h) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

fn random_set_of_size<R: Rng>(rng: &mut R, n: usize, size: usize, must: PlayerId) -> Coalition {
    let mut set = Coalition::singleton(must);
    while set.len() < size {
        let v = PlayerId(rng.gen_range(0..n));
        set = set.with(v);
    }
    set
}

/// The first `size` players with `player` swapped in: a canonical witness
/// set for anonymous models.
fn canonical_set(player: PlayerId, size: usize, n: usize) -> Coalition {
    let mut set = Coalition::singleton(player);
    let mut next = 0;
    while set.len() < size {
        debug_assert!(next < n);
        set = set.with(PlayerId(next));
        next += 1;
    }
    set
}

fn anonymous_monotone_violations(
    player: PlayerId,
    w: &[f64],
    n: usize,
    tol: Tolerance,
    out: &mut Vec<MonotoneViolation>,
) {
    for small in 1..=n {
        for large in (small + 1)..=n {
            if tol.gt(w[small - 1], w[large - 1]) {
                let smaller = canonical_set(player, small, n);
                let mut larger = smaller;
                let mut next = 0;
                while larger.len() < large {
                    larger = larger.with(PlayerId(next));
                    next += 1;
                }
                out.push(MonotoneViolation {
                    player,
                    smaller,
                    larger,
                    smaller_cost: w[small - 1],
                    larger_cost: w[large - 1],
                });
                if out.len() >= MAX_REPORTED_VIOLATIONS {
                    return;
                }
            }
        }
    }
}

fn dense_monotone_violations(
    player: PlayerId,
    dense: &[f64],
    n: usize,
    tol: Tolerance,
    out: &mut Vec<MonotoneViolation>,
) {
    let me = 1u32 << player.0;
    let full = Coalition::full(n).bits();
    // Fast path: a function is monotone iff it never decreases across any
    // single-element extension.
    let mut clean = true;
    'outer: for s in 1..(1u32 << n) {
        if s & me == 0 {
            continue;
        }
        let mut rest = full & !s;
        while rest != 0 {
            let j = rest & rest.wrapping_neg();
            rest &= rest - 1;
            if dense[s as usize] > dense[(s | j) as usize] {
                clean = false;
                break 'outer;
            }
        }
    }
    if clean {
        return;
    }
    // Some decrease exists; collect every subset pair that violates beyond
    // tolerance.
    for t in 1..(1u32 << n) {
        if t & me == 0 {
            continue;
        }
        let ct = dense[t as usize];
        let mut s = (t - 1) & t;
        loop {
            if s & me != 0 && tol.gt(dense[s as usize], ct) {
                out.push(MonotoneViolation {
                    player,
                    smaller: Coalition::from_bits(s),
                    larger: Coalition::from_bits(t),
                    smaller_cost: dense[s as usize],
                    larger_cost: ct,
                });
                if out.len() >= MAX_REPORTED_VIOLATIONS {
                    return;
                }
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & t;
        }
    }
}
