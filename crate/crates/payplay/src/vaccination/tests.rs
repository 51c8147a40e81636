use crate::efficiency::is_pareto_efficient_pure;
use crate::equilibrium::is_pure_nash;
use crate::error::Error;
use crate::game::{PlayerId, PureProfile, Tolerance};
use crate::sampler::{random_graph, rng_from_seed};
use crate::vaccination::*;

const EPS: f64 = 1e-9;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn path4() -> UndirectedGraph {
    UndirectedGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap()
}

fn path4_game() -> VaccinationGame {
    VaccinationGame::new(path4(), 0.5, 1.0).unwrap()
}

#[test]
fn graph_construction_rejects_bad_edges() {
    assert!(matches!(
        UndirectedGraph::new(3, &[(0, 0)]),
        Err(Error::BadEdge { .. })
    ));
    assert!(matches!(
        UndirectedGraph::new(3, &[(0, 5)]),
        Err(Error::BadEdge { .. })
    ));
    assert!(matches!(
        UndirectedGraph::new(3, &[(0, 1), (1, 0)]),
        Err(Error::DuplicateEdge { .. })
    ));
}

#[test]
fn attack_components_examples() {
    let graph = path4();
    // vaccinating the second node splits the path
    let profile = PureProfile::from_pay_flags(&[false, true, false, false]);
    let comps = attack_components(&graph, &profile);
    assert_eq!(comps.components, vec![vec![0], vec![2, 3]]);
    assert_eq!(comps.sizes, vec![1, 2]);

    // everyone vaccinated: no components
    let comps = attack_components(&graph, &PureProfile::all_pay(4));
    assert!(comps.components.is_empty());

    // a triangle with nobody vaccinated is one component
    let triangle = UndirectedGraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let comps = attack_components(&triangle, &PureProfile::all_play(3));
    assert_eq!(comps.sizes, vec![3]);
}

#[test]
fn game_form_costs_follow_component_sizes() {
    let vg = path4_game();
    let game = vg.as_game().unwrap();
    let profile = PureProfile::from_pay_flags(&[false, true, false, false]);
    // node 0 is alone: 1/4; nodes 2 and 3 sit in a pair: 2/4
    assert!((game.pure_cost(&profile, PlayerId(0)).unwrap() - 0.25).abs() <= EPS);
    assert!((game.pure_cost(&profile, PlayerId(2)).unwrap() - 0.5).abs() <= EPS);
    assert!((game.pure_cost(&profile, PlayerId(3)).unwrap() - 0.5).abs() <= EPS);
    // the vaccinated node pays exactly c
    assert_eq!(game.pure_cost(&profile, PlayerId(1)).unwrap(), 0.5);

    // complete graph, nobody vaccinated: everyone expects the full loss
    let k4 = UndirectedGraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let vg = VaccinationGame::new(k4, 0.5, 1.0).unwrap();
    let game = vg.as_game().unwrap();
    for i in game.players() {
        assert!((game.pure_cost(&PureProfile::all_play(4), i).unwrap() - 1.0).abs() <= EPS);
    }
}

#[test]
fn cost_formula_matches_component_sizes_everywhere() {
    let mut rng = rng_from_seed(31);
    for _ in 0..20 {
        use rand::Rng;
        let n = rng.gen_range(2..=8);
        let graph = random_graph(n, 0.4, &mut rng);
        let vg = VaccinationGame::new(graph, 0.3, 1.5).unwrap();
        let game = vg.as_game().unwrap();
        for profile in PureProfile::enumerate_all(n) {
            let comps = attack_components(vg.graph(), &profile);
            for i in game.players() {
                if profile.plays(i) {
                    let size = comps
                        .components
                        .iter()
                        .find(|c| c.contains(&i.0))
                        .map(|c| c.len())
                        .unwrap();
                    let cost = game.pure_cost(&profile, i).unwrap();
                    assert!((cost * n as f64 / 1.5 - size as f64).abs() <= 1e-6);
                }
            }
        }
    }
}

#[test]
fn game_form_is_monotone() {
    let mut rng = rng_from_seed(32);
    for _ in 0..20 {
        use rand::Rng;
        let n = rng.gen_range(2..=9);
        let graph = random_graph(n, 0.4, &mut rng);
        let vg = VaccinationGame::new(graph, 0.4, 1.0).unwrap();
        let game = vg.as_game().unwrap();
        let report = game.check_monotone(tol()).unwrap();
        assert!(report.is_monotone());
        assert!(report.exhaustive);
    }
}

#[test]
fn characterization_examples() {
    let vg = path4_game();
    assert!((vg.alpha() - 2.0).abs() <= EPS);

    // vaccinate node 1: components {0} and {2,3}, re-entry spans the path
    let profile = PureProfile::from_pay_flags(&[false, true, false, false]);
    let report = check_equilibrium_characterization(&vg, &profile, tol());
    assert!(report.is_equilibrium());
    assert!(report.components_within_alpha && report.vaccinators_at_threshold);

    // vaccinate node 0: the remaining path {1,2,3} exceeds alpha = 2
    let profile = PureProfile::from_pay_flags(&[true, false, false, false]);
    let report = check_equilibrium_characterization(&vg, &profile, tol());
    assert!(!report.components_within_alpha);
    assert!(!report.is_equilibrium());

    // no edges and alpha > 1: everyone playing alone is an equilibrium
    let empty = UndirectedGraph::new(3, &[]).unwrap();
    let vg = VaccinationGame::new(empty, 0.5, 1.0).unwrap();
    assert!(vg.alpha() > 1.0);
    let report =
        check_equilibrium_characterization(&vg, &PureProfile::all_play(3), tol());
    assert!(report.is_equilibrium());
}

#[test]
fn characterization_agrees_with_nash_verification_exhaustively() {
    let mut rng = rng_from_seed(33);
    for _ in 0..30 {
        use rand::Rng;
        let n = rng.gen_range(2..=8);
        let p = if rng.gen_bool(0.5) { 0.2 } else { 0.5 };
        let alpha = [1.5, 2.0, 3.0][rng.gen_range(0..3)];
        let graph = random_graph(n, p, &mut rng);
        let vg = VaccinationGame::new(graph, alpha / n as f64, 1.0).unwrap();
        let game = vg.as_game().unwrap();
        for profile in PureProfile::enumerate_all(n) {
            let by_threshold =
                check_equilibrium_characterization(&vg, &profile, tol()).is_equilibrium();
            let by_costs = is_pure_nash(&game, &profile, tol()).unwrap();
            assert_eq!(by_threshold, by_costs, "n={} profile={}", n, profile);
        }
    }
}

#[test]
fn find_equilibrium_examples() {
    // path: dynamics reach a profile passing the characterization
    let vg = path4_game();
    let eq = find_equilibrium(&vg, 10_000, None).unwrap();
    assert!(check_equilibrium_characterization(&vg, &eq, tol()).is_equilibrium());

    // single vertex, vaccine cheaper than the certain loss: vaccinate
    let single = UndirectedGraph::new(1, &[]).unwrap();
    let vg = VaccinationGame::new(single, 0.5, 1.0).unwrap();
    let eq = find_equilibrium(&vg, 100, None).unwrap();
    assert_eq!(eq, PureProfile::all_pay(1));

    // no edges, vaccine dearer than the 1/n infection risk: all play
    let empty = UndirectedGraph::new(4, &[]).unwrap();
    let vg = VaccinationGame::new(empty, 0.5, 1.0).unwrap();
    let eq = find_equilibrium(&vg, 100, None).unwrap();
    assert_eq!(eq, PureProfile::all_play(4));
}

#[test]
fn repair_splits_the_tight_path_component() {
    let vg = path4_game();
    let start = PureProfile::from_pay_flags(&[false, true, false, false]);
    let repaired = pareto_repair(&vg, &start, tol()).unwrap();
    assert_eq!(
        repaired,
        PureProfile::from_pay_flags(&[false, true, true, false])
    );
    let comps = attack_components(vg.graph(), &repaired);
    assert!(comps.sizes.iter().all(|&k| (k as f64) < vg.alpha() - EPS));
    let game = vg.as_game().unwrap();
    assert!(is_pareto_efficient_pure(&game, &repaired, tol())
        .unwrap()
        .efficient);
}

#[test]
fn repair_leaves_strict_equilibria_unchanged() {
    // C4 with opposite corners vaccinated: components are singletons
    let c4 = UndirectedGraph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
    let vg = VaccinationGame::new(c4, 0.5, 1.0).unwrap();
    let start = PureProfile::from_pay_flags(&[true, false, true, false]);
    assert!(check_equilibrium_characterization(&vg, &start, tol()).is_equilibrium());
    assert_eq!(pareto_repair(&vg, &start, tol()).unwrap(), start);
}

#[test]
fn repair_rejects_non_equilibria() {
    let vg = path4_game();
    let not_eq = PureProfile::from_pay_flags(&[true, false, false, false]);
    assert!(matches!(
        pareto_repair(&vg, &not_eq, tol()),
        Err(Error::NotAnEquilibrium)
    ));
}

#[test]
fn repair_unvaccinates_neighbors_stranded_by_the_split() {
    // Path 0-1-2 of playing nodes (size 3 = alpha) with vaccinated node 3
    // hanging off node 0 and playing node 4 beyond it; 5 is isolated.
    // Vaccinating 0 strands 3 (its re-entry would shrink to {3,4}), so the
    // repair lets 3 play again.
    let graph =
        UndirectedGraph::new(6, &[(0, 1), (1, 2), (0, 3), (3, 4)]).unwrap();
    let vg = VaccinationGame::new(graph, 0.5, 1.0).unwrap();
    assert!((vg.alpha() - 3.0).abs() <= EPS);
    let start = PureProfile::from_pay_flags(&[false, false, false, true, false, false]);
    assert!(check_equilibrium_characterization(&vg, &start, tol()).is_equilibrium());
    let repaired = pareto_repair(&vg, &start, tol()).unwrap();
    assert_eq!(
        repaired,
        PureProfile::from_pay_flags(&[true, false, false, false, false, false])
    );
    let report = check_equilibrium_characterization(&vg, &repaired, tol());
    assert!(report.is_equilibrium());
    assert!(report.component_sizes.iter().all(|&k| (k as f64) < 3.0 - EPS));
}

#[test]
fn repair_pipeline_holds_on_random_instances() {
    let mut rng = rng_from_seed(34);
    for _ in 0..40 {
        use rand::Rng;
        let n = rng.gen_range(2..=9);
        let p = if rng.gen_bool(0.5) { 0.2 } else { 0.5 };
        let alpha = [1.5, 2.0, 3.0][rng.gen_range(0..3)];
        let graph = random_graph(n, p, &mut rng);
        let vg = VaccinationGame::new(graph, alpha / n as f64, 1.0).unwrap();
        let eq = find_equilibrium(&vg, 10_000, None).unwrap();
        let repaired = pareto_repair(&vg, &eq, tol()).unwrap();
        let game = vg.as_game().unwrap();
        assert!(is_pareto_efficient_pure(&game, &repaired, tol())
            .unwrap()
            .efficient);
    }
}

#[test]
fn vaccination_game_rejects_bad_parameters() {
    assert!(matches!(
        VaccinationGame::new(path4(), 0.0, 1.0),
        Err(Error::BadVaccineCost(_))
    ));
    assert!(matches!(
        VaccinationGame::new(path4(), 0.5, 0.0),
        Err(Error::BadLoss(_))
    ));
}
