//! Seeded random-instance generators for the property suites.
//!
//! Monotone tabular costs are built by cumulative sums of nonnegative
//! increments along the subset lattice; anonymous costs by cumulative sums
//! over counts; submodular anonymous costs by concave (nonincreasing-
//! increment) sums. Callers pass a seeded RNG, so every suite is
//! reproducible.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use std::sync::Arc;

use crate::game::{CostModel, CostTable, Game, PlayerId, PlayerSpec, Tolerance};
use crate::vaccination::UndirectedGraph;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Monotone tabular cost for one player: start from a base value on the
/// singleton and add a nonnegative increment on every set extension, taking
/// the max over removals so the lattice stays consistent.
fn monotone_table<R: Rng>(n: usize, owner: PlayerId, rng: &mut R) -> CostTable {
    let mut dense = vec![f64::NAN; 1usize << n];
    let me = 1u32 << owner.0;
    let increment = 2.5 / n as f64;
    for bits in 1..(1u32 << n) {
        if bits & me == 0 {
            continue;
        }
        if bits == me {
            dense[bits as usize] = rng.gen_range(0.0..1.2);
            continue;
        }
        let mut floor: f64 = 0.0;
        let mut rest = bits & !me;
        while rest != 0 {
            let j = rest & rest.wrapping_neg();
            rest &= rest - 1;
            floor = floor.max(dense[(bits & !j) as usize]);
        }
        dense[bits as usize] = floor + rng.gen_range(0.0..increment);
    }
    CostTable::from_fn(
        n,
        |set| set.contains(owner),
        |set| dense[set.bits() as usize],
    )
}

/// A monotone shared table over all nonempty coalitions.
fn monotone_shared_table<R: Rng>(n: usize, rng: &mut R) -> CostTable {
    let mut dense = vec![f64::NAN; 1usize << n];
    let increment = 2.5 / n as f64;
    for bits in 1..(1u32 << n) {
        if bits.count_ones() == 1 {
            dense[bits as usize] = rng.gen_range(0.0..1.2);
            continue;
        }
        let mut floor: f64 = 0.0;
        let mut rest = bits;
        while rest != 0 {
            let j = rest & rest.wrapping_neg();
            rest &= rest - 1;
            floor = floor.max(dense[(bits & !j) as usize]);
        }
        dense[bits as usize] = floor + rng.gen_range(0.0..increment);
    }
    CostTable::from_fn(n, |set| !set.is_empty(), |set| dense[set.bits() as usize])
}

/// Random monotone game with player-specific tabular costs and pay costs
/// uniform in `[0, 2]`.
pub fn random_monotone_game<R: Rng>(n: usize, rng: &mut R) -> Game {
    let players = (0..n)
        .map(|i| {
            PlayerSpec::new(
                rng.gen_range(0.0..2.0),
                CostModel::Tabular(monotone_table(n, PlayerId(i), rng)),
            )
        })
        .collect();
    Game::new(players, None).expect("sampled game is valid")
}

/// Random monotone game that is also generic (no pay cost ever ties a play
/// cost). Continuous sampling makes collisions vanishingly rare; resample
/// on the off chance.
pub fn random_generic_monotone_game<R: Rng>(n: usize, rng: &mut R, tol: Tolerance) -> Game {
    loop {
        let game = random_monotone_game(n, rng);
        if game.check_generic(tol).expect("tabular check") {
            return game;
        }
    }
}

/// Random symmetric game: one pay cost and one shared monotone table.
pub fn random_symmetric_game<R: Rng>(n: usize, rng: &mut R) -> Game {
    let table = Arc::new(monotone_shared_table(n, rng));
    let h = rng.gen_range(0.0..2.0);
    let players = (0..n)
        .map(|_| PlayerSpec::new(h, CostModel::Shared(Arc::clone(&table))))
        .collect();
    Game::new(players, None).expect("sampled game is valid")
}

/// Random player-specific anonymous game: per-player nondecreasing count
/// arrays.
pub fn random_anonymous_game<R: Rng>(n: usize, rng: &mut R) -> Game {
    let players = (0..n)
        .map(|_| {
            let mut w = Vec::with_capacity(n);
            let mut value = rng.gen_range(0.0..1.2);
            for _ in 0..n {
                w.push(value);
                value += rng.gen_range(0.0..2.5 / n as f64);
            }
            PlayerSpec::new(rng.gen_range(0.0..2.0), CostModel::Anonymous(w))
        })
        .collect();
    Game::new(players, None).expect("sampled game is valid")
}

/// Random symmetric anonymous game with a concave (hence submodular)
/// nondecreasing count array.
pub fn random_symmetric_anonymous_submodular<R: Rng>(n: usize, rng: &mut R) -> Game {
    let mut w = Vec::with_capacity(n);
    let mut value = rng.gen_range(0.0..1.0);
    let mut step: f64 = rng.gen_range(0.0..0.8);
    for _ in 0..n {
        w.push(value);
        value += step;
        step = rng.gen_range(0.0..=step.max(f64::MIN_POSITIVE));
    }
    let h = rng.gen_range(0.0..2.0);
    let players = (0..n)
        .map(|_| PlayerSpec::new(h, CostModel::Anonymous(w.clone())))
        .collect();
    Game::new(players, None).expect("sampled game is valid")
}

/// Random monotone submodular tabular game: concave-of-cardinality values
/// plus small monotone perturbations, rejection-sampled through the
/// submodularity check. Intended for small `n`.
pub fn random_monotone_submodular_tabular<R: Rng>(
    n: usize,
    rng: &mut R,
    tol: Tolerance,
) -> Game {
    loop {
        let players: Vec<PlayerSpec> = (0..n)
            .map(|i| {
                // concave base by size
                let mut by_size = Vec::with_capacity(n);
                let mut value = rng.gen_range(0.0..1.0);
                let mut step: f64 = rng.gen_range(0.0..0.8);
                for _ in 0..n {
                    by_size.push(value);
                    value += step;
                    step = rng.gen_range(0.0..=step.max(f64::MIN_POSITIVE));
                }
                let jitter = rng.gen_range(0.0..0.02);
                let owner = PlayerId(i);
                let table = CostTable::from_fn(
                    n,
                    |set| set.contains(owner),
                    |set| by_size[set.len() - 1] + jitter * set.bits() as f64 / (1 << n) as f64,
                );
                PlayerSpec::new(rng.gen_range(0.0..2.0), CostModel::Tabular(table))
            })
            .collect();
        let game = Game::new(players, None).expect("sampled game is valid");
        let submodular = (0..n).all(|i| {
            game.check_submodular(PlayerId(i), tol)
                .expect("tabular check")
        });
        let monotone = game
            .check_monotone(tol)
            .expect("tabular check")
            .is_monotone();
        if submodular && monotone {
            return game;
        }
    }
}

/// Erdős–Rényi random graph: each pair is an edge independently with
/// probability `p`.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> UndirectedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    UndirectedGraph::new(n, &edges).expect("sampled graph is valid")
}
