//! Pure and mixed Nash equilibria: enumeration, verification, the greedy
//! solver for symmetric games, strong/semi-strong certificates, coalition
//! deviation search, and best-response dynamics.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::game::{
    Coalition, Game, MixedProfile, PlayerId, PureProfile, Tolerance, MAX_PLAYERS,
};

/// Default player cap for exhaustive profile scans.
pub const DEFAULT_ENUM_CAP: usize = MAX_PLAYERS;

/// Player cap for the grid-based coalition deviation search, which is
/// `(grid+1)^n` per coalition.
pub const MAX_GRID_SEARCH_PLAYERS: usize = 6;

/// The strategies that minimize a player's cost holding everyone else fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BestResponses {
    pub pay: bool,
    pub play: bool,
}

/// All pure Nash equilibria of a game, in ascending pay-mask order.
#[derive(Clone, Debug)]
pub struct EquilibriumSet {
    pub pure_equilibria: Vec<PureProfile>,
    /// True when all `2^n` profiles were scanned.
    pub exhaustive: bool,
}

impl EquilibriumSet {
    pub fn is_empty(&self) -> bool {
        self.pure_equilibria.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pure_equilibria.len()
    }
}

/// A joint deviation in which every deviator strictly improves.
#[derive(Clone, Debug)]
pub struct CoalitionDeviation {
    pub deviators: Coalition,
    /// The full deviated profile (non-deviators keep their original
    /// strategies).
    pub new_profile: MixedProfile,
    /// Cost improvement per deviator, aligned with `deviators` in ascending
    /// player order; every entry exceeds tolerance.
    pub improvements: Vec<f64>,
}

/// Verdict of the strong-equilibrium check restricted to pure deviations.
#[derive(Clone, Debug)]
pub enum StrongCheck {
    Strong,
    /// A pure joint deviation strictly improving every deviator. For
    /// monotone games this contradicts the theory and signals a model
    /// violation; it is surfaced, not suppressed.
    Deviation(CoalitionDeviation),
}

/// Why a joint deviation `y` from an equilibrium `x` is unstable.
#[derive(Clone, Debug, PartialEq)]
pub enum SemiStrongWitness {
    /// Some deviator fails to strictly improve in `y` (it leaves them no
    /// better off, possibly strictly worse), so the deviation is not a
    /// genuine coalition threat.
    Property1 { player: PlayerId },
    /// Some deviator has a further strictly improving move against `y`.
    Property2 { player: PlayerId, better_pay_prob: f64 },
    /// Neither property holds. Must not occur for mixed equilibria of
    /// monotone games; returned (not panicked) so suites can surface it as a
    /// counterexample.
    Violation,
}

/// Outcome of the grid-based coalition deviation search.
#[derive(Clone, Debug)]
pub enum DeviationSearch {
    Found(CoalitionDeviation),
    NotFound,
}

/// Interior symmetric mixed equilibrium, or the reason none exists.
#[derive(Clone, Debug)]
pub enum SymmetricMixedOutcome {
    /// Every player pays with the same probability; passes
    /// [`is_mixed_nash`].
    Interior(MixedProfile),
    /// The pay cost lies outside the range of the expected play cost; the
    /// suggested pure profile is the dominant-strategy equilibrium.
    NoInteriorSolution {
        play_dominates: bool,
        suggestion: PureProfile,
    },
}

/// Player scheduling policy for best-response dynamics.
#[derive(Clone, Copy, Debug)]
pub enum UpdateOrder {
    /// Lowest-index improvable player first; cycle detection enabled.
    Fixed,
    /// Uniformly random improvable player; bounded by `max_iters` only.
    Random { seed: u64 },
}

/// Result of best-response dynamics.
#[derive(Clone, Debug)]
pub enum DynamicsOutcome {
    Converged {
        profile: PureProfile,
        iterations: usize,
    },
    NonConvergence {
        /// Visited-profile cycle, when the fixed order detects one.
        cycle: Option<Vec<PureProfile>>,
        last: PureProfile,
    },
}

/// The set of cost-minimizing strategies for `player` against the rest of
/// `profile`; both strategies are returned on indifference within tolerance.
pub fn best_responses(
    game: &Game,
    profile: &PureProfile,
    player: PlayerId,
    tol: Tolerance,
) -> Result<BestResponses, Error> {
    let pay = game.pay_cost(player);
    let play = game.play_cost(player, profile.play_set().with(player))?;
    Ok(BestResponses {
        pay: tol.le(pay, play),
        play: tol.le(play, pay),
    })
}

/// True iff no player can strictly improve (beyond tolerance) by a
/// unilateral deviation.
pub fn is_pure_nash(game: &Game, profile: &PureProfile, tol: Tolerance) -> Result<bool, Error> {
    for player in game.players() {
        let current = game.pure_cost(profile, player)?;
        let flipped = game.pure_cost(&profile.with_flipped(player), player)?;
        if tol.lt(flipped, current) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Scans all `2^n` pure profiles and returns every Nash equilibrium.
pub fn enumerate_pure_nash(game: &Game, tol: Tolerance) -> Result<EquilibriumSet, Error> {
    enumerate_pure_nash_capped(game, tol, DEFAULT_ENUM_CAP)
}

/// As [`enumerate_pure_nash`] with an explicit player cap.
pub fn enumerate_pure_nash_capped(
    game: &Game,
    tol: Tolerance,
    cap: usize,
) -> Result<EquilibriumSet, Error> {
    check_cap(game, cap)?;
    let mut pure_equilibria = Vec::new();
    for profile in PureProfile::enumerate_all(game.n()) {
        if is_pure_nash(game, &profile, tol)? {
            pure_equilibria.push(profile);
        }
    }
    Ok(EquilibriumSet {
        pure_equilibria,
        exhaustive: true,
    })
}

/// First pure Nash equilibrium in pay-mask order, if any. Early-exits, so
/// cheaper than full enumeration when only existence matters.
pub fn any_pure_nash(game: &Game, tol: Tolerance) -> Result<Option<PureProfile>, Error> {
    check_cap(game, DEFAULT_ENUM_CAP)?;
    for profile in PureProfile::enumerate_all(game.n()) {
        if is_pure_nash(game, &profile, tol)? {
            return Ok(Some(profile));
        }
    }
    Ok(None)
}

fn check_cap(game: &Game, cap: usize) -> Result<(), Error> {
    if game.n() > cap {
        return Err(Error::CapExceeded { n: game.n(), cap });
    }
    Ok(())
}

/// Greedy equilibrium construction for symmetric games: starting from
/// all-pay, repeatedly lets the lowest-index payer whose play cost would be
/// strictly below the pay cost switch to play. The result is always a pure
/// Nash equilibrium.
pub fn greedy_symmetric_nash(game: &Game, tol: Tolerance) -> Result<PureProfile, Error> {
    let priority: Vec<PlayerId> = game.players().collect();
    greedy_symmetric_nash_with_order(game, tol, &priority)
}

/// As [`greedy_symmetric_nash`], breaking ties by the first eligible player
/// in `priority` instead of the lowest index. Any priority yields an
/// equilibrium.
pub fn greedy_symmetric_nash_with_order(
    game: &Game,
    tol: Tolerance,
    priority: &[PlayerId],
) -> Result<PureProfile, Error> {
    if !game.check_symmetric(tol)? {
        return Err(Error::NotSymmetric);
    }
    let mut profile = PureProfile::all_pay(game.n());
    loop {
        let mut flipped = false;
        for &candidate in priority {
            if !profile.pays(candidate) {
                continue;
            }
            let joined = profile.play_set().with(candidate);
            if tol.lt(game.play_cost(candidate, joined)?, game.pay_cost(candidate)) {
                profile = profile.with_pay(candidate, false);
                flipped = true;
                break;
            }
        }
        if !flipped {
            return Ok(profile);
        }
    }
}

/// True iff `profile` is a mixed Nash equilibrium. Because the expected
/// cost is affine in each player's own probability, it suffices to compare
/// the two pure alternatives: interior probabilities require indifference,
/// and pure coordinates require the chosen branch to be weakly cheaper.
pub fn is_mixed_nash(game: &Game, profile: &MixedProfile, tol: Tolerance) -> Result<bool, Error> {
    if profile.n() != game.n() {
        return Err(Error::ProfileLengthMismatch {
            got: profile.n(),
            expected: game.n(),
        });
    }
    for player in game.players() {
        let h = game.pay_cost(player);
        let play = game.play_branch_cost(profile, player)?;
        let p = profile.pay_prob(player);
        let ok = if p == 1.0 {
            tol.le(h, play)
        } else if p == 0.0 {
            tol.le(play, h)
        } else {
            tol.eq(h, play)
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Solves the symmetric indifference condition `h = E[w(1 + Bin(n-1, 1-p))]`
/// for the common pay probability `p` by bisection. Requires a symmetric
/// game in which every player's cost is anonymous.
pub fn symmetric_mixed_nash(
    game: &Game,
    tol: Tolerance,
) -> Result<SymmetricMixedOutcome, Error> {
    let n = game.n();
    let symmetric = game.check_symmetric(tol)?;
    let mut anonymous = true;
    for player in game.players() {
        if !game.check_anonymous(player, tol)? {
            anonymous = false;
            break;
        }
    }
    if !symmetric || !anonymous {
        return Err(Error::NotSymmetricAnonymous);
    }
    let h = game.pay_cost(PlayerId(0));
    // Count-indexed costs, read through canonical coalitions so any model
    // representation works.
    let mut w = Vec::with_capacity(n);
    for m in 1..=n {
        w.push(game.play_cost(PlayerId(0), Coalition::full(m))?);
    }
    // expected play cost when every other player pays with probability p
    let expected = |p: f64| -> f64 {
        let mut total = 0.0;
        for (m, &cost) in w.iter().enumerate() {
            let others_playing =
                binomial(n - 1, m) * (1.0 - p).powi(m as i32) * p.powi((n - 1 - m) as i32);
            total += others_playing * cost;
        }
        total
    };
    let at_all_play = expected(0.0); // = w[n-1], the maximum
    let at_all_pay = expected(1.0); // = w[0], the minimum
    if tol.gt(h, at_all_play) {
        return Ok(SymmetricMixedOutcome::NoInteriorSolution {
            play_dominates: true,
            suggestion: PureProfile::all_play(n),
        });
    }
    if tol.lt(h, at_all_pay) {
        return Ok(SymmetricMixedOutcome::NoInteriorSolution {
            play_dominates: false,
            suggestion: PureProfile::all_pay(n),
        });
    }
    // E is nonincreasing in p (w is monotone), so bisect.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut p = 0.5;
    for _ in 0..200 {
        p = 0.5 * (lo + hi);
        let e = expected(p);
        if (e - h).abs() <= tol.eps() * 0.5 {
            break;
        }
        if e > h {
            lo = p;
        } else {
            hi = p;
        }
    }
    Ok(SymmetricMixedOutcome::Interior(MixedProfile::uniform(
        n, p,
    )?))
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut result = 1.0;
    for i in 0..k {
        result *= (n - i) as f64 / (i + 1) as f64;
    }
    result
}

/// Checks whether a pure Nash equilibrium is strong with respect to pure
/// deviations: no pure profile strictly improves every player that changes
/// strategy. Errors if `profile` is not an equilibrium.
pub fn is_strong_pure(
    game: &Game,
    profile: &PureProfile,
    tol: Tolerance,
) -> Result<StrongCheck, Error> {
    check_cap(game, DEFAULT_ENUM_CAP)?;
    if !is_pure_nash(game, profile, tol)? {
        return Err(Error::NotAnEquilibrium);
    }
    let n = game.n();
    let mut base_costs = Vec::with_capacity(n);
    for player in game.players() {
        base_costs.push(game.pure_cost(profile, player)?);
    }
    'profiles: for candidate in PureProfile::enumerate_all(n) {
        let deviators = Coalition::from_bits(candidate.pay_mask() ^ profile.pay_mask());
        if deviators.is_empty() {
            continue;
        }
        let mut improvements = Vec::with_capacity(deviators.len());
        for player in deviators.iter() {
            let new_cost = game.pure_cost(&candidate, player)?;
            if !tol.lt(new_cost, base_costs[player.0]) {
                continue 'profiles;
            }
            improvements.push(base_costs[player.0] - new_cost);
        }
        return Ok(StrongCheck::Deviation(CoalitionDeviation {
            deviators,
            new_profile: candidate.to_mixed(),
            improvements,
        }));
    }
    Ok(StrongCheck::Strong)
}

/// Classifies a joint deviation `y` from a mixed equilibrium `x`: some
/// deviator fails to strictly improve (Property1), or every deviator
/// strictly gains but some deviator has a further strictly improving move
/// against `y` (Property2). Property1 is checked first and the lowest-index
/// qualifying player is reported.
///
/// A deviation only threatens an equilibrium when every deviator strictly
/// gains, so Property1 tests for the absence of a strict gain rather than
/// for a strict loss; a deviator pinned at its pay cost (e.g. one leaving
/// an interior mixed strategy for pure pay) ties rather than loses, and a
/// tie already disqualifies the coalition.
pub fn semi_strong_witness(
    game: &Game,
    x: &MixedProfile,
    y: &MixedProfile,
    tol: Tolerance,
) -> Result<SemiStrongWitness, Error> {
    if x.probs() == y.probs() {
        return Err(Error::BadParameters(
            "deviation must differ from the equilibrium".to_string(),
        ));
    }
    if !is_mixed_nash(game, x, tol)? {
        return Err(Error::NotAnEquilibrium);
    }
    let deviators: Vec<PlayerId> = game
        .players()
        .filter(|&i| x.pay_prob(i) != y.pay_prob(i))
        .collect();
    for &player in &deviators {
        let before = game.mixed_cost(x, player)?;
        let after = game.mixed_cost(y, player)?;
        if !tol.lt(after, before) {
            return Ok(SemiStrongWitness::Property1 { player });
        }
    }
    // The expected cost is affine in the player's own probability, so only
    // the pure endpoints need checking.
    for &player in &deviators {
        let current = game.mixed_cost(y, player)?;
        let mut best: Option<(f64, f64)> = None; // (cost, endpoint)
        for endpoint in [0.0, 1.0] {
            if y.pay_prob(player) == endpoint {
                continue;
            }
            let cost = game.mixed_cost(&y.with_pay_prob(player, endpoint)?, player)?;
            if tol.lt(cost, current) && best.is_none_or(|(c, _)| cost < c) {
                best = Some((cost, endpoint));
            }
        }
        if let Some((_, endpoint)) = best {
            return Ok(SemiStrongWitness::Property2 {
                player,
                better_pay_prob: endpoint,
            });
        }
    }
    Ok(SemiStrongWitness::Violation)
}

/// Searches every nonempty coalition and every grid-valued reassignment of
/// its members' pay probabilities for a joint deviation strictly improving
/// each deviator. Returns the deviation maximizing the minimum improvement.
pub fn search_coalition_mixed_deviation(
    game: &Game,
    x: &MixedProfile,
    grid_resolution: usize,
    tol: Tolerance,
) -> Result<DeviationSearch, Error> {
    check_cap(game, MAX_GRID_SEARCH_PLAYERS)?;
    if grid_resolution == 0 {
        return Err(Error::BadParameters(
            "grid resolution must be positive".to_string(),
        ));
    }
    if !is_mixed_nash(game, x, tol)? {
        return Err(Error::NotAnEquilibrium);
    }
    let n = game.n();
    let mut base_costs = Vec::with_capacity(n);
    for player in game.players() {
        base_costs.push(game.mixed_cost(x, player)?);
    }
    let grid: Vec<f64> = (0..=grid_resolution)
        .map(|t| t as f64 / grid_resolution as f64)
        .collect();
    let mut best: Option<(f64, CoalitionDeviation)> = None;
    for coalition_bits in 1..(1u32 << n) {
        let deviators = Coalition::from_bits(coalition_bits);
        let members: Vec<PlayerId> = deviators.iter().collect();
        let mut assignment = vec![0usize; members.len()];
        'assignments: loop {
            // Every member must actually change strategy.
            let mut candidate = x.clone();
            let mut valid = true;
            for (slot, &player) in members.iter().enumerate() {
                let value = grid[assignment[slot]];
                if value == x.pay_prob(player) {
                    valid = false;
                    break;
                }
                candidate = candidate.with_pay_prob(player, value)?;
            }
            if valid {
                let mut min_improvement = f64::INFINITY;
                let mut improvements = Vec::with_capacity(members.len());
                for &player in &members {
                    let improvement =
                        base_costs[player.0] - game.mixed_cost(&candidate, player)?;
                    if improvement <= tol.eps() {
                        min_improvement = f64::NEG_INFINITY;
                        break;
                    }
                    improvements.push(improvement);
                    min_improvement = min_improvement.min(improvement);
                }
                if min_improvement > tol.eps()
                    && best.as_ref().is_none_or(|(m, _)| min_improvement > *m)
                {
                    best = Some((
                        min_improvement,
                        CoalitionDeviation {
                            deviators,
                            new_profile: candidate.clone(),
                            improvements,
                        },
                    ));
                }
            }
            // next assignment in lexicographic order
            for slot in (0..assignment.len()).rev() {
                if assignment[slot] < grid_resolution {
                    assignment[slot] += 1;
                    continue 'assignments;
                }
                assignment[slot] = 0;
            }
            break;
        }
    }
    Ok(match best {
        Some((_, deviation)) => DeviationSearch::Found(deviation),
        None => DeviationSearch::NotFound,
    })
}

/// How far `profile` is from satisfying every player's mixed-equilibrium
/// condition: the largest per-player residual (indifference gap for interior
/// probabilities, one-sided excess for pure ones). Zero residual means a
/// mixed Nash equilibrium.
pub fn mixed_nash_residual(game: &Game, profile: &MixedProfile) -> Result<f64, Error> {
    let mut worst = 0.0f64;
    for player in game.players() {
        let h = game.pay_cost(player);
        let play = game.play_branch_cost(profile, player)?;
        let p = profile.pay_prob(player);
        let r = if p == 1.0 {
            (h - play).max(0.0)
        } else if p == 0.0 {
            (play - h).max(0.0)
        } else {
            (h - play).abs()
        };
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Desk-scale mixed-equilibrium search for small games without a pure
/// equilibrium: seed with the best point of a uniform grid, then polish by
/// coordinate-wise ternary descent on the residual. Not a general solver;
/// returns a profile only when it verifies via [`is_mixed_nash`].
pub fn search_mixed_nash(
    game: &Game,
    grid_resolution: usize,
    tol: Tolerance,
) -> Result<Option<MixedProfile>, Error> {
    let n = game.n();
    if n > 3 {
        return Err(Error::CapExceeded { n, cap: 3 });
    }
    if grid_resolution == 0 {
        return Err(Error::BadParameters(
            "grid resolution must be positive".to_string(),
        ));
    }
    let mut best: Option<(f64, MixedProfile)> = None;
    let points = grid_resolution + 1;
    let mut index = vec![0usize; n];
    loop {
        let probs: Vec<f64> = index
            .iter()
            .map(|&t| t as f64 / grid_resolution as f64)
            .collect();
        let candidate = MixedProfile::new(probs)?;
        let residual = mixed_nash_residual(game, &candidate)?;
        if best.as_ref().is_none_or(|(r, _)| residual < *r) {
            best = Some((residual, candidate));
        }
        let mut slot = 0;
        loop {
            if slot == n {
                break;
            }
            index[slot] += 1;
            if index[slot] < points {
                break;
            }
            index[slot] = 0;
            slot += 1;
        }
        if slot == n {
            break;
        }
    }
    let (_, mut current) = best.expect("grid has at least one point");
    // coordinate-wise ternary descent
    for _pass in 0..8 {
        for player in game.players() {
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            for _ in 0..60 {
                let a = lo + (hi - lo) / 3.0;
                let b = hi - (hi - lo) / 3.0;
                let ra = mixed_nash_residual(game, &current.with_pay_prob(player, a)?)?;
                let rb = mixed_nash_residual(game, &current.with_pay_prob(player, b)?)?;
                if ra <= rb {
                    hi = b;
                } else {
                    lo = a;
                }
            }
            let mid = 0.5 * (lo + hi);
            let candidate = current.with_pay_prob(player, mid)?;
            if mixed_nash_residual(game, &candidate)? <= mixed_nash_residual(game, &current)? {
                current = candidate;
            }
        }
    }
    if is_mixed_nash(game, &current, tol)? {
        Ok(Some(current))
    } else {
        Ok(None)
    }
}

/// Repeatedly flips one player with a strictly improving deviation until an
/// equilibrium is reached or `max_iters` flips have been made. Under the
/// fixed order, revisiting a profile proves a best-response cycle, which is
/// returned as a witness.
pub fn best_response_dynamics(
    game: &Game,
    start: &PureProfile,
    max_iters: usize,
    order: UpdateOrder,
) -> Result<DynamicsOutcome, Error> {
    if start.n() != game.n() {
        return Err(Error::ProfileLengthMismatch {
            got: start.n(),
            expected: game.n(),
        });
    }
    let tol = Tolerance::default();
    let mut rng = match order {
        UpdateOrder::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        UpdateOrder::Fixed => None,
    };
    let mut current = *start;
    let mut visited: HashMap<u32, usize> = HashMap::new();
    let mut path: Vec<PureProfile> = Vec::new();
    if rng.is_none() {
        visited.insert(current.pay_mask(), 0);
        path.push(current);
    }
    for iteration in 0..max_iters {
        let mut improvable: Vec<PlayerId> = Vec::new();
        for player in game.players() {
            let cur = game.pure_cost(&current, player)?;
            let alt = game.pure_cost(&current.with_flipped(player), player)?;
            if tol.lt(alt, cur) {
                improvable.push(player);
                if rng.is_none() {
                    break; // fixed order wants only the lowest index
                }
            }
        }
        let Some(&chosen) = (match &mut rng {
            None => improvable.first(),
            Some(r) => {
                if improvable.is_empty() {
                    None
                } else {
                    let k = r.gen_range(0..improvable.len());
                    improvable.get(k)
                }
            }
        }) else {
            return Ok(DynamicsOutcome::Converged {
                profile: current,
                iterations: iteration,
            });
        };
        current = current.with_flipped(chosen);
        if rng.is_none() {
            if let Some(&first_seen) = visited.get(&current.pay_mask()) {
                return Ok(DynamicsOutcome::NonConvergence {
                    cycle: Some(path[first_seen..].to_vec()),
                    last: current,
                });
            }
            visited.insert(current.pay_mask(), path.len());
            path.push(current);
        }
    }
    if is_pure_nash(game, &current, tol)? {
        return Ok(DynamicsOutcome::Converged {
            profile: current,
            iterations: max_iters,
        });
    }
    Ok(DynamicsOutcome::NonConvergence {
        cycle: None,
        last: current,
    })
}
