//! Social optimum, Pareto-efficiency certification, and price of
//! anarchy/stability over pure equilibria.

use crate::equilibrium::{enumerate_pure_nash_capped, DEFAULT_ENUM_CAP};
use crate::error::Error;
use crate::game::{Game, PureProfile, Tolerance};

/// A Pareto-dominating profile together with per-player cost deltas.
#[derive(Clone, Debug)]
pub struct ParetoWitness {
    pub profile: PureProfile,
    /// `cost(witness) - cost(x)` per player; all within tolerance of zero or
    /// below, at least one strictly below.
    pub deltas: Vec<f64>,
}

/// Verdict of the pure-deviation Pareto efficiency scan.
#[derive(Clone, Debug)]
pub struct ParetoVerdict {
    pub efficient: bool,
    /// When inefficient: the dominating profile with the most strictly
    /// improved players (ties broken by smallest pay mask).
    pub witness: Option<ParetoWitness>,
}

/// Optimum and equilibrium social costs with their ratios. `poa`/`pos` are
/// absent exactly when the game has no pure Nash equilibrium.
#[derive(Clone, Debug)]
pub struct EfficiencyRatios {
    pub optimum_cost: f64,
    pub optimum_profile: PureProfile,
    pub worst_ne_cost: Option<f64>,
    pub best_ne_cost: Option<f64>,
    pub poa: Option<f64>,
    pub pos: Option<f64>,
}

/// Exhaustive minimizer of the social cost; ties broken by the smallest
/// pay mask.
pub fn optimum(game: &Game) -> Result<(PureProfile, f64), Error> {
    if game.n() > DEFAULT_ENUM_CAP {
        return Err(Error::CapExceeded {
            n: game.n(),
            cap: DEFAULT_ENUM_CAP,
        });
    }
    let mut best: Option<(PureProfile, f64)> = None;
    for profile in PureProfile::enumerate_all(game.n()) {
        let cost = game.social_cost(&profile)?;
        if best.as_ref().is_none_or(|(_, c)| cost < *c) {
            best = Some((profile, cost));
        }
    }
    Ok(best.expect("n >= 1 guarantees at least one profile"))
}

/// Scans all pure profiles for one that weakly improves every player and
/// strictly improves at least one (within tolerance).
pub fn is_pareto_efficient_pure(
    game: &Game,
    x: &PureProfile,
    tol: Tolerance,
) -> Result<ParetoVerdict, Error> {
    if game.n() > DEFAULT_ENUM_CAP {
        return Err(Error::CapExceeded {
            n: game.n(),
            cap: DEFAULT_ENUM_CAP,
        });
    }
    let n = game.n();
    let mut base = Vec::with_capacity(n);
    for player in game.players() {
        base.push(game.pure_cost(x, player)?);
    }
    let mut best: Option<(usize, ParetoWitness)> = None;
    'profiles: for candidate in PureProfile::enumerate_all(n) {
        if candidate == *x {
            continue;
        }
        let mut deltas = Vec::with_capacity(n);
        let mut strict = 0usize;
        for player in game.players() {
            let delta = game.pure_cost(&candidate, player)? - base[player.0];
            if delta > tol.eps() {
                continue 'profiles; // someone is hurt
            }
            if delta < -tol.eps() {
                strict += 1;
            }
            deltas.push(delta);
        }
        if strict == 0 {
            continue;
        }
        if best.as_ref().is_none_or(|(s, _)| strict > *s) {
            best = Some((
                strict,
                ParetoWitness {
                    profile: candidate,
                    deltas,
                },
            ));
        }
    }
    Ok(match best {
        Some((_, witness)) => ParetoVerdict {
            efficient: false,
            witness: Some(witness),
        },
        None => ParetoVerdict {
            efficient: true,
            witness: None,
        },
    })
}

/// Computes the social optimum, enumerates pure equilibria, and fills in the
/// price of anarchy (worst equilibrium / optimum) and price of stability
/// (best equilibrium / optimum). Errors with [`Error::ZeroOptimum`] when
/// equilibria exist but the optimum cost is within tolerance of zero, since
/// the ratios are then undefined.
pub fn efficiency_ratios(game: &Game, tol: Tolerance) -> Result<EfficiencyRatios, Error> {
    let (optimum_profile, optimum_cost) = optimum(game)?;
    let equilibria = enumerate_pure_nash_capped(game, tol, DEFAULT_ENUM_CAP)?;
    if equilibria.is_empty() {
        return Ok(EfficiencyRatios {
            optimum_cost,
            optimum_profile,
            worst_ne_cost: None,
            best_ne_cost: None,
            poa: None,
            pos: None,
        });
    }
    let mut worst = f64::NEG_INFINITY;
    let mut best = f64::INFINITY;
    for ne in &equilibria.pure_equilibria {
        let cost = game.social_cost(ne)?;
        worst = worst.max(cost);
        best = best.min(cost);
    }
    if optimum_cost <= tol.eps() {
        return Err(Error::ZeroOptimum { cost: optimum_cost });
    }
    Ok(EfficiencyRatios {
        optimum_cost,
        optimum_profile,
        worst_ne_cost: Some(worst),
        best_ne_cost: Some(best),
        poa: Some(worst / optimum_cost),
        pos: Some(best / optimum_cost),
    })
}

#[cfg(test)]
mod tests;
