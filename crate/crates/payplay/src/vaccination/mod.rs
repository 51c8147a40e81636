//! Vaccination games on networks.
//!
//! Each node either buys a vaccine at fixed cost `c` or risks infection:
//! one node is struck uniformly at random and the infection spreads through
//! unvaccinated neighbors, so an unvaccinated node in an attack-graph
//! component of size `k` expects to lose `(k/n) * l`. With `alpha = c*n/l`,
//! a profile is an equilibrium iff every attack component has size at most
//! `alpha` and every vaccinated node would rejoin a component of size at
//! least `alpha`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::equilibrium::{best_response_dynamics, DynamicsOutcome, UpdateOrder};
use crate::error::Error;
use crate::game::{
    CoalitionCost, Coalition, CostModel, Game, PlayerId, PlayerSpec, PureProfile, Tolerance,
    MAX_PLAYERS,
};

/// A simple undirected graph: no self-loops, no duplicate edges.
#[derive(Clone, Debug)]
pub struct UndirectedGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl UndirectedGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        let mut adj = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        let mut canonical = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(Error::BadEdge { u: a, v: b, n });
            }
            let (u, v) = (a.min(b), a.max(b));
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge { u, v });
            }
            adj[u].push(v);
            adj[v].push(u);
            canonical.push((u, v));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        canonical.sort_unstable();
        Ok(UndirectedGraph {
            n,
            adj,
            edges: canonical,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Connected components of the subgraph induced on `members`, ordered by
    /// smallest vertex, each sorted ascending.
    pub fn induced_components(&self, members: Coalition) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] || !members.contains(PlayerId(start)) {
                continue;
            }
            let mut component = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                component.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] && members.contains(PlayerId(w)) {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    /// Size of `v`'s component in the subgraph induced on `members ∪ {v}`.
    fn component_size_with(&self, members: Coalition, v: usize) -> usize {
        let with_v = members.with(PlayerId(v));
        let mut seen = vec![false; self.n];
        let mut stack = vec![v];
        seen[v] = true;
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &w in &self.adj[u] {
                if !seen[w] && with_v.contains(PlayerId(w)) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        size
    }

    /// True when the subgraph induced on `set` minus `v` is connected (or
    /// empty).
    fn connected_without(&self, set: &[usize], v: usize) -> bool {
        let rest: Vec<usize> = set.iter().copied().filter(|&u| u != v).collect();
        if rest.is_empty() {
            return true;
        }
        let members = Coalition::from_indices(rest.iter().copied());
        let mut seen = vec![false; self.n];
        let mut stack = vec![rest[0]];
        seen[rest[0]] = true;
        let mut count = 0;
        while let Some(u) = stack.pop() {
            count += 1;
            for &w in &self.adj[u] {
                if !seen[w] && members.contains(PlayerId(w)) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        count == rest.len()
    }
}

/// Attack-graph components of the players choosing not to vaccinate.
#[derive(Clone, Debug)]
pub struct AttackComponents {
    pub components: Vec<Vec<usize>>,
    pub sizes: Vec<usize>,
}

/// Connected components of the attack graph: the network induced on nodes
/// that play (do not vaccinate) under `profile`.
pub fn attack_components(graph: &UndirectedGraph, profile: &PureProfile) -> AttackComponents {
    let components = graph.induced_components(profile.play_set());
    let sizes = components.iter().map(|c| c.len()).collect();
    AttackComponents { components, sizes }
}

/// A vaccination game: a network plus the vaccine cost `c` and infection
/// loss `l`.
#[derive(Clone, Debug)]
pub struct VaccinationGame {
    graph: UndirectedGraph,
    vaccine_cost: f64,
    loss: f64,
}

impl VaccinationGame {
    pub fn new(graph: UndirectedGraph, vaccine_cost: f64, loss: f64) -> Result<Self, Error> {
        if !vaccine_cost.is_finite() || vaccine_cost <= 0.0 {
            return Err(Error::BadVaccineCost(vaccine_cost));
        }
        if !loss.is_finite() || loss <= 0.0 {
            return Err(Error::BadLoss(loss));
        }
        Ok(VaccinationGame {
            graph,
            vaccine_cost,
            loss,
        })
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn vaccine_cost(&self) -> f64 {
        self.vaccine_cost
    }

    pub fn loss(&self) -> f64 {
        self.loss
    }

    /// The equilibrium threshold `alpha = c*n/l` on component sizes.
    pub fn alpha(&self) -> f64 {
        self.vaccine_cost * self.graph.n as f64 / self.loss
    }

    /// The pay-or-play form: pay cost `c` for every node, play cost
    /// `(component size) * l / n` computed from the graph. Component sizes
    /// are memoized per coalition and shared across all players.
    pub fn as_game(&self) -> Result<Game, Error> {
        let n = self.graph.n;
        if n == 0 || n > MAX_PLAYERS {
            return Err(Error::CapExceeded {
                n,
                cap: MAX_PLAYERS,
            });
        }
        let ctx = Arc::new(ComponentContext {
            graph: self.graph.clone(),
            scale: self.loss / n as f64,
            cache: Mutex::new(HashMap::new()),
        });
        let players = (0..n)
            .map(|v| {
                PlayerSpec::new(
                    self.vaccine_cost,
                    CostModel::Derived(Arc::new(ComponentCost {
                        ctx: Arc::clone(&ctx),
                        vertex: v,
                    })),
                )
            })
            .collect();
        Game::new(
            players,
            Some(format!(
                "vaccination n={} c={} l={}",
                n, self.vaccine_cost, self.loss
            )),
        )
    }
}

struct ComponentContext {
    graph: UndirectedGraph,
    scale: f64, // l / n
    cache: Mutex<HashMap<u32, Arc<Vec<u16>>>>,
}

impl ComponentContext {
    /// Per-vertex component size under the subgraph induced on `members`;
    /// zero for vertices outside `members`.
    fn sizes(&self, members: Coalition) -> Arc<Vec<u16>> {
        let mut cache = self.cache.lock().expect("component cache poisoned");
        if let Some(hit) = cache.get(&members.bits()) {
            return Arc::clone(hit);
        }
        let mut sizes = vec![0u16; self.graph.n];
        for component in self.graph.induced_components(members) {
            for &v in &component {
                sizes[v] = component.len() as u16;
            }
        }
        let sizes = Arc::new(sizes);
        cache.insert(members.bits(), Arc::clone(&sizes));
        sizes
    }
}

struct ComponentCost {
    ctx: Arc<ComponentContext>,
    vertex: usize,
}

impl CoalitionCost for ComponentCost {
    fn cost(&self, members: Coalition) -> f64 {
        let sizes = self.ctx.sizes(members);
        sizes[self.vertex] as f64 * self.ctx.scale
    }

    fn describe(&self) -> String {
        format!("vaccination component cost, vertex {}", self.vertex)
    }
}

/// Detailed result of the threshold characterization of equilibria.
#[derive(Clone, Debug)]
pub struct CharacterizationReport {
    pub alpha: f64,
    /// Condition (1): every attack component has size at most `alpha`.
    pub components_within_alpha: bool,
    /// Condition (2): every vaccinated node, re-added to the attack graph,
    /// would sit in a component of size at least `alpha`.
    pub vaccinators_at_threshold: bool,
    pub component_sizes: Vec<usize>,
    /// Components exceeding `alpha` (indices into `component_sizes`).
    pub oversized_components: Vec<usize>,
    /// Vaccinated nodes whose re-entry component is smaller than `alpha`.
    pub loose_vaccinators: Vec<PlayerId>,
}

impl CharacterizationReport {
    pub fn is_equilibrium(&self) -> bool {
        self.components_within_alpha && self.vaccinators_at_threshold
    }
}

/// Evaluates both threshold conditions for `profile`. The conjunction
/// matches `is_pure_nash` on [`VaccinationGame::as_game`].
pub fn check_equilibrium_characterization(
    vg: &VaccinationGame,
    profile: &PureProfile,
    tol: Tolerance,
) -> CharacterizationReport {
    let alpha = vg.alpha();
    let comps = attack_components(&vg.graph, profile);
    let oversized: Vec<usize> = comps
        .sizes
        .iter()
        .enumerate()
        .filter(|&(_, &k)| k as f64 > alpha + tol.eps())
        .map(|(i, _)| i)
        .collect();
    let play = profile.play_set();
    let mut loose = Vec::new();
    for v in 0..vg.graph.n {
        if profile.pays(PlayerId(v)) {
            let k = vg.graph.component_size_with(play, v);
            if (k as f64) < alpha - tol.eps() {
                loose.push(PlayerId(v));
            }
        }
    }
    CharacterizationReport {
        alpha,
        components_within_alpha: oversized.is_empty(),
        vaccinators_at_threshold: loose.is_empty(),
        component_sizes: comps.sizes,
        oversized_components: oversized,
        loose_vaccinators: loose,
    }
}

/// Computes a pure Nash equilibrium by best-response dynamics on the
/// pay-or-play form, starting from the all-vaccinated profile. Entries into
/// the play set are gated on strict improvement, so attack components stay
/// strictly below `alpha` and the dynamics converge; non-convergence is
/// surfaced as an error because it would falsify the existence guarantee.
pub fn find_equilibrium(
    vg: &VaccinationGame,
    max_iters: usize,
    seed: Option<u64>,
) -> Result<PureProfile, Error> {
    let game = vg.as_game()?;
    let order = match seed {
        Some(seed) => UpdateOrder::Random { seed },
        None => UpdateOrder::Fixed,
    };
    let start = PureProfile::all_pay(game.n());
    match best_response_dynamics(&game, &start, max_iters, order)? {
        DynamicsOutcome::Converged { profile, .. } => Ok(profile),
        DynamicsOutcome::NonConvergence { cycle, .. } => Err(Error::NonConvergence {
            max_iters,
            cycle_len: cycle.map(|c| c.len()),
        }),
    }
}

/// Transforms an equilibrium into one whose attack components are all
/// strictly below `alpha`, so that every playing node's cost is strictly
/// below the vaccine cost and the profile is Pareto efficient with respect
/// to pure deviations.
///
/// While some component is tight (size within tolerance of `alpha`): the
/// lowest-index vertex whose removal keeps the component connected switches
/// to pay, and each of its vaccinated neighbors re-enters the play set
/// whenever the component it would join (excluding itself) has size at most
/// `alpha - 2`, i.e. its re-entry component stays strictly below `alpha`.
/// The loop invariant — the profile remains an equilibrium and the number
/// of tight components strictly decreases — is asserted every iteration and
/// any breach is surfaced as [`Error::RepairStalled`].
pub fn pareto_repair(
    vg: &VaccinationGame,
    x: &PureProfile,
    tol: Tolerance,
) -> Result<PureProfile, Error> {
    let report = check_equilibrium_characterization(vg, x, tol);
    if !report.is_equilibrium() {
        return Err(Error::NotAnEquilibrium);
    }
    let alpha = vg.alpha();
    let n = vg.graph.n;
    let is_tight = |size: usize| (size as f64 - alpha).abs() <= tol.eps();
    let mut current = *x;
    let mut tight_count = attack_components(&vg.graph, &current)
        .sizes
        .iter()
        .filter(|&&k| is_tight(k))
        .count();
    for _round in 0..=n {
        if tight_count == 0 {
            return Ok(current);
        }
        let comps = attack_components(&vg.graph, &current);
        let target = comps
            .components
            .iter()
            .find(|c| is_tight(c.len()))
            .expect("tight count positive")
            .clone();
        // A connected graph always has a vertex whose removal keeps it
        // connected; in a tree those are exactly the leaves.
        let v = *target
            .iter()
            .find(|&&v| vg.graph.connected_without(&target, v))
            .expect("connected component has a non-cut vertex");
        current = current.with_pay(PlayerId(v), true);
        for &j in vg.graph.neighbors(v) {
            if !current.pays(PlayerId(j)) {
                continue;
            }
            let rejoin = vg.graph.component_size_with(current.play_set(), j);
            if (rejoin as f64 - 1.0) <= alpha - 2.0 + tol.eps() {
                current = current.with_pay(PlayerId(j), false);
            }
        }
        let after = check_equilibrium_characterization(vg, &current, tol);
        if !after.is_equilibrium() {
            return Err(Error::RepairStalled {
                reason: format!(
                    "profile {} left the equilibrium set after vaccinating node {}",
                    current, v
                ),
            });
        }
        let new_tight = after.component_sizes.iter().filter(|&&k| is_tight(k)).count();
        if new_tight >= tight_count {
            return Err(Error::RepairStalled {
                reason: format!(
                    "tight component count did not decrease ({} -> {})",
                    tight_count, new_tight
                ),
            });
        }
        tight_count = new_tight;
    }
    if tight_count == 0 {
        Ok(current)
    } else {
        Err(Error::RepairStalled {
            reason: "repair loop exceeded the component budget".to_string(),
        })
    }
}

#[cfg(test)]
mod tests;
