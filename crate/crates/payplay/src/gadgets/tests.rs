use std::collections::BTreeSet;

use crate::equilibrium::{
    any_pure_nash, best_response_dynamics, enumerate_pure_nash, DynamicsOutcome, UpdateOrder,
};
use crate::error::Error;
use crate::gadgets::*;
use crate::game::{Coalition, PlayerId, PureProfile, Tolerance};

const EPS: f64 = 1e-9;

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn all_generators_produce_monotone_games() {
    let inst = DisjointnessInstance::new(
        1,
        [1usize].into_iter().collect(),
        [1usize, 2].into_iter().collect(),
    )
    .unwrap();
    let cnf = parse_dimacs("p cnf 2 1\n1 -2 0\n").unwrap();
    let games = vec![
        triangle_gadget(),
        indifference_gadget(),
        two_player_example(0.1).unwrap(),
        pos_player_specific(5, 0.01).unwrap(),
        pos_submodular(5, 0.01).unwrap(),
        pricing_game(5, 2, 10.0, 4.0, None).unwrap(),
        sat_to_game(&cnf).unwrap(),
        disjointness_to_game(&inst).unwrap(),
    ];
    for game in games {
        let report = game.check_monotone(tol()).unwrap();
        assert!(
            report.is_monotone() && report.exhaustive,
            "game {:?}",
            game.label()
        );
    }
}

#[test]
fn triangle_gadget_has_the_advertised_structure() {
    let game = triangle_gadget();
    assert!(enumerate_pure_nash(&game, tol()).unwrap().is_empty());
    assert!(game.check_generic(tol()).unwrap());
    for i in game.players() {
        assert!(game.check_submodular(i, tol()).unwrap());
    }
    match best_response_dynamics(&game, &PureProfile::all_play(3), 100, UpdateOrder::Fixed)
        .unwrap()
    {
        DynamicsOutcome::NonConvergence { cycle: Some(c), .. } => assert_eq!(c.len(), 6),
        other => panic!("expected a cycle, got {:?}", other),
    }
}

#[test]
fn indifference_gadget_examples() {
    let game = indifference_gadget();
    assert!(!game.check_generic(tol()).unwrap());
    let set = enumerate_pure_nash(&game, tol()).unwrap();
    assert!(!set.is_empty());
    // player 3's cost counts every playing player, itself included
    let all_play = PureProfile::all_play(4);
    assert_eq!(game.pure_cost(&all_play, PlayerId(3)).unwrap(), 4.0);
}

#[test]
fn two_player_example_examples() {
    let game = two_player_example(0.1).unwrap();
    let set = enumerate_pure_nash(&game, tol()).unwrap();
    assert_eq!(set.pure_equilibria, vec![PureProfile::all_play(2)]);
    assert!(matches!(
        two_player_example(0.0),
        Err(Error::BadEpsilon { .. })
    ));
    assert!(matches!(
        two_player_example(-1.0),
        Err(Error::BadEpsilon { .. })
    ));
}

#[test]
fn pos_player_specific_examples() {
    let game = pos_player_specific(4, 0.01).unwrap();
    let set = enumerate_pure_nash(&game, tol()).unwrap();
    assert_eq!(set.pure_equilibria, vec![PureProfile::all_play(4)]);
    let (opt, _) = crate::efficiency::optimum(&game).unwrap();
    assert_eq!(opt, PureProfile::from_pay_flags(&[false, true, true, true]));

    // epsilon guard: 2*eps must stay below the relevant gaps
    assert!(matches!(
        pos_player_specific(4, 0.1),
        Err(Error::BadEpsilon { .. })
    ));
    assert!(matches!(
        pos_player_specific(1, 0.01),
        Err(Error::BadParameters(_))
    ));
}

#[test]
fn pos_submodular_examples() {
    let game = pos_submodular(4, 0.01).unwrap();
    let set = enumerate_pure_nash(&game, tol()).unwrap();
    assert_eq!(set.pure_equilibria, vec![PureProfile::all_play(4)]);
    assert!((game.social_cost(&PureProfile::all_play(4)).unwrap() - 4.0).abs() <= EPS);
    for i in game.players() {
        assert!(game.check_submodular(i, tol()).unwrap());
    }
    assert!(game.check_symmetric(tol()).unwrap());
}

#[test]
fn sat_reduction_tracks_satisfiability() {
    // single satisfiable clause: nine players, equilibrium exists
    let cnf = parse_dimacs("p cnf 3 1\n1 -2 3 0\n").unwrap();
    let game = sat_to_game(&cnf).unwrap();
    assert_eq!(game.n(), 9);
    assert!(any_pure_nash(&game, tol()).unwrap().is_some());

    // contradiction: eight players, no equilibrium
    let cnf = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap();
    let game = sat_to_game(&cnf).unwrap();
    assert_eq!(game.n(), 8);
    assert!(any_pure_nash(&game, tol()).unwrap().is_none());

    // no clauses at all: the variable pairs anti-align freely
    let cnf = CnfFormula::new(2, vec![]).unwrap();
    let game = sat_to_game(&cnf).unwrap();
    assert_eq!(game.n(), 4);
    let ne = any_pure_nash(&game, tol()).unwrap().unwrap();
    for var in 0..2 {
        assert_ne!(ne.pays(PlayerId(2 * var)), ne.pays(PlayerId(2 * var + 1)));
    }
}

#[test]
fn sat_equilibria_decode_to_satisfying_assignments() {
    let cnf = parse_dimacs("p cnf 2 2\n1 2 0\n-1 2 0\n").unwrap();
    let game = sat_to_game(&cnf).unwrap();
    for ne in enumerate_pure_nash(&game, tol()).unwrap().pure_equilibria {
        // variable v true <=> its t player pays
        let mut bits = 0u32;
        for var in 0..cnf.num_vars() {
            if ne.pays(PlayerId(2 * var)) {
                bits |= 1 << var;
            }
        }
        assert!(cnf.satisfied_by(bits), "profile {} decodes to {:b}", ne, bits);
    }
}

#[test]
fn clause_triples_reproduce_the_triangle_table_when_blocked() {
    // One clause over (v1 or not v2 or v3): when t1, f2, t3 all play and the
    // clause players' membership varies, their costs match the 3-player
    // rotation gadget entry for entry.
    let cnf = parse_dimacs("p cnf 3 1\n1 -2 3 0\n").unwrap();
    let game = sat_to_game(&cnf).unwrap();
    let triangle = triangle_gadget();
    let blockers = [
        literal_player(1),  // t1
        literal_player(-2), // f2
        literal_player(3),  // t3
    ];
    let base = Coalition::from_indices(blockers.iter().copied());
    for pattern in 1u32..8 {
        let tri_set = Coalition::from_bits(pattern);
        let mut full = base;
        for r in 0..3 {
            if pattern & (1 << r) != 0 {
                full = full.with(PlayerId(6 + r));
            }
        }
        for r in 0..3 {
            if pattern & (1 << r) == 0 {
                continue;
            }
            let expected = triangle
                .play_cost(PlayerId(r), tri_set)
                .expect("triangle table is complete");
            let got = game.play_cost(PlayerId(6 + r), full).unwrap();
            assert_eq!(got, expected, "pattern {:03b} player {}", pattern, r);
        }
    }
}

#[test]
fn sat_reduction_rejects_oversized_and_empty_inputs() {
    let big = CnfFormula::new(12, vec![[1, 2, 3]; 1]).unwrap();
    assert!(matches!(
        sat_to_game(&big),
        Err(Error::CapExceeded { .. })
    ));
    let empty_vars = CnfFormula::new(0, vec![]).unwrap();
    assert!(matches!(
        sat_to_game(&empty_vars),
        Err(Error::BadParameters(_))
    ));
}

#[test]
fn disjointness_equivalence_spot_checks() {
    let set = |items: &[usize]| items.iter().copied().collect::<BTreeSet<_>>();

    // intersecting sides admit an equilibrium
    let inst = DisjointnessInstance::new(1, set(&[1]), set(&[1, 2])).unwrap();
    let game = disjointness_to_game(&inst).unwrap();
    assert_eq!(game.n(), 10);
    assert!(any_pure_nash(&game, tol()).unwrap().is_some());

    // disjoint sides do not
    let inst = DisjointnessInstance::new(1, set(&[1]), set(&[2])).unwrap();
    let game = disjointness_to_game(&inst).unwrap();
    assert!(any_pure_nash(&game, tol()).unwrap().is_none());

    // both empty: the guard triples stay in rotation forever
    let inst = DisjointnessInstance::new(1, set(&[]), set(&[])).unwrap();
    let game = disjointness_to_game(&inst).unwrap();
    assert!(any_pure_nash(&game, tol()).unwrap().is_none());
}

#[test]
fn disjointness_equilibrium_structure_matches_the_witness_pattern() {
    let set = |items: &[usize]| items.iter().copied().collect::<BTreeSet<_>>();
    let inst = DisjointnessInstance::new(1, set(&[2]), set(&[2])).unwrap();
    let game = disjointness_to_game(&inst).unwrap();
    let nes = enumerate_pure_nash(&game, tol()).unwrap().pure_equilibria;
    assert!(!nes.is_empty());
    for ne in &nes {
        // pairs anti-aligned, all guards pay
        for j in 0..2 {
            assert_ne!(ne.pays(PlayerId(2 * j)), ne.pays(PlayerId(2 * j + 1)));
        }
        for guard in 4..10 {
            assert!(ne.pays(PlayerId(guard)));
        }
    }
}

#[test]
fn disjointness_instance_validation() {
    let set = |items: &[usize]| items.iter().copied().collect::<BTreeSet<_>>();
    assert!(matches!(
        DisjointnessInstance::new(0, set(&[]), set(&[])),
        Err(Error::BadParameters(_))
    ));
    // r = C(2,1) = 2 for k = 1
    assert!(matches!(
        DisjointnessInstance::new(1, set(&[3]), set(&[])),
        Err(Error::BadParameters(_))
    ));
    // k = 5 would need 26 players
    assert!(matches!(
        DisjointnessInstance::new(5, set(&[]), set(&[])),
        Err(Error::CapExceeded { .. })
    ));
    let inst = DisjointnessInstance::new(2, set(&[1, 6]), set(&[3])).unwrap();
    assert_eq!(inst.n(), 14);
    assert_eq!(inst.universe_size(), 6);
    assert!(!inst.intersects());
}

#[test]
fn pricing_game_examples() {
    let game = pricing_game(4, 2, 10.0, 4.0, None).unwrap();
    // lottery expectations: q while supply lasts, then the mixture
    let w: Vec<f64> = (1..=4)
        .map(|m| game.play_cost(PlayerId(0), Coalition::full(m)).unwrap())
        .collect();
    assert_eq!(w, vec![4.0, 4.0, 6.0, 7.0]);

    assert!(game.check_symmetric(tol()).unwrap());
    for i in game.players() {
        assert!(game.check_anonymous(i, tol()).unwrap());
    }
    assert!(!enumerate_pure_nash(&game, tol()).unwrap().is_empty());

    assert!(matches!(
        pricing_game(4, 2, 10.0, 12.0, None),
        Err(Error::BadParameters(_))
    ));
    assert!(matches!(
        pricing_game(4, 2, 10.0, 4.0, Some(1.0)),
        Err(Error::BadParameters(_))
    ));
    assert!(matches!(
        pricing_game(4, 4, 10.0, 4.0, None),
        Err(Error::BadParameters(_))
    ));
}

#[test]
fn pricing_dynamics_converge_from_every_start() {
    let game = pricing_game(6, 3, 10.0, 4.0, None).unwrap();
    for start in PureProfile::enumerate_all(6) {
        match best_response_dynamics(&game, &start, 10_000, UpdateOrder::Fixed).unwrap() {
            DynamicsOutcome::Converged { .. } => {}
            other => panic!("expected convergence from {}, got {:?}", start, other),
        }
    }
}

#[test]
fn generator_labels_echo_parameters() {
    assert_eq!(triangle_gadget().label(), Some("triangle"));
    assert_eq!(
        two_player_example(0.1).unwrap().label(),
        Some("two-player eps=0.1")
    );
    assert_eq!(
        pricing_game(4, 2, 10.0, 4.0, None).unwrap().label(),
        Some("pricing n=4 k=2 p=10 q=4 loss=10")
    );
    let inst = DisjointnessInstance::new(
        1,
        [1usize].into_iter().collect(),
        [2usize].into_iter().collect(),
    )
    .unwrap();
    assert_eq!(
        disjointness_to_game(&inst).unwrap().label(),
        Some("disjointness k=1 a1={1} a2={2}")
    );
}
