use crate::error::Error;
use crate::gadgets::{
    parse_dimacs, pricing_game, sat_to_game, triangle_gadget, two_player_example,
};
use crate::game::{Coalition, Game, PlayerId};
use crate::json::*;

#[test]
fn float_formatting_is_shortest_and_capped() {
    assert_eq!(format_f64(0.0), "0");
    assert_eq!(format_f64(-0.0), "0");
    assert_eq!(format_f64(2.0), "2");
    assert_eq!(format_f64(1.5), "1.5");
    assert_eq!(format_f64(0.5), "0.5");
    assert_eq!(format_f64(-3.25), "-3.25");
    assert_eq!(format_f64(1e-9), "0.000000001");
    assert_eq!(format_f64(1.06), "1.06");
    assert_eq!(format_f64(10.0), "10");
    assert_eq!(format_f64(1e15), "1000000000000000");
    // 17 significant digits get rounded to 12
    assert_eq!(format_f64(std::f64::consts::PI), "3.14159265359");
    // the capped value parses back within one part in 1e12
    let x = 0.1 + 0.2; // 0.30000000000000004
    assert_eq!(format_f64(x), "0.3");
}

fn assert_same_costs(a: &Game, b: &Game) {
    assert_eq!(a.n(), b.n());
    for i in a.players() {
        assert_eq!(a.pay_cost(i), b.pay_cost(i));
        for bits in 1u32..(1 << a.n()) {
            let set = Coalition::from_bits(bits);
            if set.contains(i) {
                assert_eq!(
                    a.play_cost(i, set).unwrap(),
                    b.play_cost(i, set).unwrap(),
                    "player {} set {}",
                    i,
                    set
                );
            }
        }
    }
}

#[test]
fn tabular_games_round_trip() {
    let game = triangle_gadget();
    let text = game_to_json(&game).unwrap();
    let loaded = game_from_json(&text).unwrap();
    assert_eq!(loaded.label(), Some("triangle"));
    assert_same_costs(&game, &loaded);
    // writing again is byte-identical
    assert_eq!(game_to_json(&loaded).unwrap(), text);
}

#[test]
fn shared_tables_round_trip_through_a_named_table() {
    let game = two_player_example(0.25).unwrap();
    let text = game_to_json(&game).unwrap();
    assert!(text.contains("\"shared_tables\""));
    assert!(text.contains("\"ref\":\"g0\""));
    let loaded = game_from_json(&text).unwrap();
    assert_same_costs(&game, &loaded);
}

#[test]
fn anonymous_games_round_trip() {
    let game = pricing_game(4, 2, 10.0, 4.0, None).unwrap();
    let text = game_to_json(&game).unwrap();
    assert!(text.contains("\"by_count\""));
    let loaded = game_from_json(&text).unwrap();
    assert_same_costs(&game, &loaded);
}

#[test]
fn derived_games_serialize_as_explicit_tables() {
    let cnf = parse_dimacs("p cnf 2 1\n1 -2 0\n").unwrap();
    let game = sat_to_game(&cnf).unwrap();
    let text = game_to_json(&game).unwrap();
    assert!(text.contains("\"tabular\""));
    let loaded = game_from_json(&text).unwrap();
    assert_same_costs(&game, &loaded);
}

#[test]
fn loader_rejects_malformed_games() {
    // duplicate entry for one coalition
    let text = r#"{"n":1,"players":[{"h":1,"g":{"type":"tabular","entries":[
        {"set":[0],"cost":1},{"set":[0],"cost":2}]}}]}"#;
    assert!(matches!(
        game_from_json(text),
        Err(Error::DuplicateTableEntry { .. })
    ));

    // unsorted coalition array
    let text = r#"{"n":2,"players":[
        {"h":1,"g":{"type":"tabular","entries":[{"set":[1,0],"cost":1}]}},
        {"h":1,"g":{"type":"anonymous","by_count":[1,1]}}]}"#;
    assert!(matches!(game_from_json(text), Err(Error::Load(_))));

    // dangling shared reference
    let text = r#"{"n":1,"players":[{"h":1,"g":{"type":"shared","ref":"nope"}}]}"#;
    assert!(matches!(game_from_json(text), Err(Error::Load(_))));

    // player count mismatch
    let text = r#"{"n":2,"players":[{"h":1,"g":{"type":"anonymous","by_count":[1,1]}}]}"#;
    assert!(matches!(game_from_json(text), Err(Error::Load(_))));

    // syntactically broken JSON reports a position
    let err = game_from_json("{\"n\": 1,").unwrap_err();
    let msg = format!("{}", err);
    assert!(msg.contains("line"), "{}", msg);
}

#[test]
fn loader_rejects_entries_missing_the_owner() {
    let text = r#"{"n":2,"players":[
        {"h":1,"g":{"type":"tabular","entries":[
            {"set":[0],"cost":1},{"set":[1],"cost":1},{"set":[0,1],"cost":1}]}},
        {"h":1,"g":{"type":"anonymous","by_count":[1,1]}}]}"#;
    assert!(matches!(
        game_from_json(text),
        Err(Error::EntryWithoutOwner { .. })
    ));
}

#[test]
fn graph_round_trip_and_validation() {
    let g = crate::vaccination::UndirectedGraph::new(4, &[(2, 3), (0, 1)]).unwrap();
    let text = graph_to_json(&g);
    assert_eq!(text, r#"{"n":4,"edges":[[0,1],[2,3]]}"#);
    let loaded = graph_from_json(&text).unwrap();
    assert_eq!(loaded.edges(), g.edges());

    assert!(matches!(
        graph_from_json(r#"{"n":3,"edges":[[0,0]]}"#),
        Err(Error::BadEdge { .. })
    ));
    assert!(matches!(
        graph_from_json(r#"{"n":3,"edges":[[0,1],[1,0]]}"#),
        Err(Error::DuplicateEdge { .. })
    ));
}

#[test]
fn writer_is_deterministic() {
    let game = pricing_game(5, 2, 10.0, 4.0, None).unwrap();
    assert_eq!(game_to_json(&game).unwrap(), game_to_json(&game).unwrap());
}

#[test]
fn writer_escapes_labels() {
    let game = triangle_gadget().with_label("odd \"label\"\nwith control");
    let text = game_to_json(&game).unwrap();
    let loaded = game_from_json(&text).unwrap();
    assert_eq!(loaded.label(), Some("odd \"label\"\nwith control"));
}

#[test]
fn profile_values_render_pay_play_arrays() {
    let p = crate::game::PureProfile::from_pay_flags(&[true, false]);
    assert_eq!(profile_value(&p).render(), r#"["pay","play"]"#);
    let _ = PlayerId(0);
}
