use crate::efficiency::*;
use crate::equilibrium::enumerate_pure_nash;
use crate::error::Error;
use crate::gadgets::{
    indifference_gadget, pos_player_specific, pos_submodular, triangle_gadget,
};
use crate::game::{
    Coalition, CostModel, CostTable, Game, PlayerSpec, PureProfile, Tolerance,
};
use crate::sampler::{random_generic_monotone_game, random_monotone_game, rng_from_seed};

const EPS: f64 = 1e-9;

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn optimum_of_the_player_specific_family() {
    let game = pos_player_specific(4, 0.01).unwrap();
    let (profile, cost) = optimum(&game).unwrap();
    // the heavy player plays alone
    assert_eq!(profile, PureProfile::from_pay_flags(&[false, true, true, true]));
    assert!((cost - 1.06).abs() <= EPS);
}

#[test]
fn optimum_of_the_membership_family() {
    let game = pos_submodular(4, 0.01).unwrap();
    let (profile, cost) = optimum(&game).unwrap();
    // player 0 pays, the others play for free
    assert_eq!(profile, PureProfile::from_pay_flags(&[true, false, false, false]));
    assert!((cost - 1.01).abs() <= EPS);
}

#[test]
fn optimum_of_a_single_player_game() {
    let table = CostTable::from_entries(1, [(Coalition::from_indices([0]), 2.0)]).unwrap();
    let game = Game::new(vec![PlayerSpec::new(0.5, CostModel::Tabular(table))], None).unwrap();
    let (profile, cost) = optimum(&game).unwrap();
    assert_eq!(profile, PureProfile::all_pay(1));
    assert_eq!(cost, 0.5);
}

#[test]
fn equilibria_of_generic_games_are_pareto_efficient() {
    let mut rng = rng_from_seed(111);
    for _ in 0..300 {
        use rand::Rng;
        let n = rng.gen_range(2..=6);
        let game = random_generic_monotone_game(n, &mut rng, tol());
        for ne in enumerate_pure_nash(&game, tol()).unwrap().pure_equilibria {
            let verdict = is_pareto_efficient_pure(&game, &ne, tol()).unwrap();
            assert!(verdict.efficient, "n={} ne={}", n, ne);
        }
    }
}

#[test]
fn indifference_gadget_equilibria_follow_the_oracle() {
    // Brute-force oracle over all 16 profiles: the stable profiles are
    // exactly those where two of the rotation players pay and player 3
    // plays. Direct cost scans confirm each of them is Pareto efficient
    // (lowering player 3's cost requires shrinking the play set, which
    // raises a rotation player's cost).
    let game = indifference_gadget();
    let set = enumerate_pure_nash(&game, tol()).unwrap();
    let masks: Vec<u32> = set.pure_equilibria.iter().map(|p| p.pay_mask()).collect();
    assert_eq!(masks, vec![0b0011, 0b0101, 0b0110]);
    for ne in &set.pure_equilibria {
        let verdict = is_pareto_efficient_pure(&game, ne, tol()).unwrap();
        assert!(verdict.efficient, "ne={}", ne);
    }
}

#[test]
fn pareto_witnesses_reverify_by_direct_cost_evaluation() {
    let mut rng = rng_from_seed(222);
    let mut witnessed = 0;
    for _ in 0..400 {
        use rand::Rng;
        let n = rng.gen_range(2..=5);
        let game = random_monotone_game(n, &mut rng);
        let x = PureProfile::from_pay_mask(n, rng.gen::<u32>());
        let verdict = is_pareto_efficient_pure(&game, &x, tol()).unwrap();
        if let Some(w) = verdict.witness {
            witnessed += 1;
            let mut strict = 0;
            for i in game.players() {
                let before = game.pure_cost(&x, i).unwrap();
                let after = game.pure_cost(&w.profile, i).unwrap();
                assert!(after <= before + EPS);
                assert!((after - before - w.deltas[i.0]).abs() <= EPS);
                if after < before - EPS {
                    strict += 1;
                }
            }
            assert!(strict >= 1);
        }
    }
    assert!(witnessed > 0, "suite should exercise the witness path");
}

#[test]
fn optimum_with_distinct_costs_is_pareto_efficient() {
    let game = pos_player_specific(4, 0.01).unwrap();
    let (profile, _) = optimum(&game).unwrap();
    let verdict = is_pareto_efficient_pure(&game, &profile, tol()).unwrap();
    assert!(verdict.efficient);
}

#[test]
fn efficiency_ratio_examples() {
    let eps = 0.01;
    let game = pos_player_specific(4, eps).unwrap();
    let ratios = efficiency_ratios(&game, tol()).unwrap();
    let expected = (4.0 + 3.0 * eps) / (1.0 + 6.0 * eps);
    assert!((ratios.pos.unwrap() - expected).abs() <= EPS);
    assert!((ratios.poa.unwrap() - expected).abs() <= EPS);

    let game = pos_submodular(4, eps).unwrap();
    let ratios = efficiency_ratios(&game, tol()).unwrap();
    let expected = 4.0 / (1.0 + eps);
    assert!((ratios.pos.unwrap() - expected).abs() <= EPS);

    // no pure equilibrium: ratios absent
    let ratios = efficiency_ratios(&triangle_gadget(), tol()).unwrap();
    assert!(ratios.poa.is_none() && ratios.pos.is_none());
    assert!(ratios.worst_ne_cost.is_none());
}

#[test]
fn zero_optimum_is_an_error_when_equilibria_exist() {
    let game = Game::new(
        (0..2)
            .map(|_| PlayerSpec::new(0.0, CostModel::Anonymous(vec![0.0, 0.0])))
            .collect(),
        None,
    )
    .unwrap();
    assert!(matches!(
        efficiency_ratios(&game, tol()),
        Err(Error::ZeroOptimum { .. })
    ));
}

#[test]
fn ratio_dominance_chain_holds_on_random_games() {
    let mut rng = rng_from_seed(333);
    for _ in 0..300 {
        use rand::Rng;
        let n = rng.gen_range(2..=6);
        let game = random_monotone_game(n, &mut rng);
        let ratios = match efficiency_ratios(&game, tol()) {
            Ok(r) => r,
            Err(Error::ZeroOptimum { .. }) => continue,
            Err(e) => panic!("{}", e),
        };
        if let (Some(best), Some(worst)) = (ratios.best_ne_cost, ratios.worst_ne_cost) {
            assert!(best >= ratios.optimum_cost - EPS);
            assert!(worst >= best - EPS);
            assert!(ratios.poa.unwrap() >= ratios.pos.unwrap() - EPS);
            assert!(ratios.pos.unwrap() >= 1.0 - EPS);
        }
    }
}

#[test]
fn cheap_players_make_equilibria_pareto_efficient() {
    // Whenever every playing player's cost sits strictly below its pay
    // cost, the equilibrium is Pareto efficient, generic or not.
    let mut rng = rng_from_seed(444);
    let mut hits = 0;
    for _ in 0..400 {
        use rand::Rng;
        let n = rng.gen_range(2..=5);
        let game = random_monotone_game(n, &mut rng);
        for ne in enumerate_pure_nash(&game, tol()).unwrap().pure_equilibria {
            let strictly_below = game.players().all(|i| {
                ne.pays(i)
                    || game.pure_cost(&ne, i).unwrap() < game.pay_cost(i) - EPS
            });
            if strictly_below {
                hits += 1;
                let verdict = is_pareto_efficient_pure(&game, &ne, tol()).unwrap();
                assert!(verdict.efficient);
            }
        }
    }
    assert!(hits > 0, "suite should exercise the strict-cost case");
}
