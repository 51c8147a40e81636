//! `payplay`: analyze pay-or-play games, solve vaccination games on graphs,
//! and generate the bundled game families.
//!
//! Exit codes: 0 on success (a game without pure equilibria is a finding,
//! not a failure), 2 on load or parameter errors, 3 when a requested
//! exhaustive scan exceeds the player cap.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use payplay::efficiency::is_pareto_efficient_pure;
use payplay::equilibrium::{any_pure_nash, DEFAULT_ENUM_CAP};
use payplay::gadgets::{
    disjointness_to_game, indifference_gadget, parse_dimacs, pos_player_specific,
    pos_submodular, pricing_game, sat_to_game, triangle_gadget, two_player_example,
    DisjointnessInstance,
};
use payplay::json::{
    format_f64, game_from_json, game_to_json, graph_from_json, obj, profile_value, JsonValue,
};
use payplay::report::{analyze, mixed_verdict_to_json, verify_mixed};
use payplay::vaccination::{
    attack_components, check_equilibrium_characterization, find_equilibrium, pareto_repair,
    VaccinationGame,
};
use payplay::{Error, Game, MixedProfile, Tolerance};

#[derive(Parser)]
#[command(
    name = "payplay",
    version,
    about = "Pay-or-play games: equilibria, efficiency, vaccination, and instance generators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Floating-point comparison tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps: f64,

    /// Seed for randomized fallbacks (sampled checks on oversized games).
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Player cap for exhaustive scans. Defaults to 16 for table-backed
    /// games and 24 for purely anonymous ones.
    #[arg(long, global = true, env = "PAYPLAY_MAX_N")]
    max_n: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run structural checks, equilibrium enumeration, efficiency ratios,
    /// and Pareto verdicts on a game file.
    Analyze {
        /// Game JSON file.
        game_file: PathBuf,
    },
    /// Solve a vaccination game: equilibrium, component sizes, threshold
    /// characterization, and the Pareto-efficient repair.
    Vaccinate {
        /// Graph JSON file: {"n": ..., "edges": [[u, v], ...]}.
        graph_file: PathBuf,
        /// Vaccine cost (per node).
        #[arg(long)]
        cost: f64,
        /// Loss incurred on infection.
        #[arg(long)]
        loss: f64,
        /// Best-response iteration budget.
        #[arg(long, default_value_t = 100_000)]
        max_iters: usize,
    },
    /// Build the 3-SAT reduction game from a DIMACS CNF file.
    FromCnf {
        /// DIMACS CNF file.
        cnf_file: PathBuf,
        /// Also report equilibrium existence, brute-force satisfiability,
        /// and whether the two verdicts agree.
        #[arg(long)]
        check: bool,
    },
    /// Emit one of the bundled game families as a game file.
    Gadget {
        /// One of: triangle, indifference, two-player, pos-player-specific,
        /// pos-submodular, pricing, disjointness.
        name: String,
        /// Player count (pos-player-specific, pos-submodular, pricing).
        #[arg(long)]
        n: Option<usize>,
        /// Lottery size (pricing) or instance size (disjointness).
        #[arg(long)]
        k: Option<usize>,
        /// Fixed price (pricing).
        #[arg(long)]
        p: Option<f64>,
        /// Discounted lottery price, below p (pricing).
        #[arg(long)]
        q: Option<f64>,
        /// Cost borne by a lottery loser; defaults to p (pricing).
        #[arg(long)]
        loss: Option<f64>,
        /// Gap parameter (two-player, pos-player-specific, pos-submodular).
        #[arg(long)]
        epsilon: Option<f64>,
        /// Comma-separated first set, e.g. "1,2" (disjointness).
        #[arg(long)]
        a1: Option<String>,
        /// Comma-separated second set (disjointness).
        #[arg(long)]
        a2: Option<String>,
    },
    /// Check a mixed profile against the equilibrium conditions.
    VerifyMixed {
        /// Game JSON file.
        game_file: PathBuf,
        /// Comma-separated pay probabilities, one per player.
        #[arg(long)]
        probs: String,
    },
}

/// Parameter bundle for `gadget <name>`.
struct GadgetParams {
    n: Option<usize>,
    k: Option<usize>,
    p: Option<f64>,
    q: Option<f64>,
    loss: Option<f64>,
    epsilon: Option<f64>,
    a1: Option<String>,
    a2: Option<String>,
}

const GADGET_NAMES: &[&str] = &[
    "triangle",
    "indifference",
    "two-player",
    "pos-player-specific",
    "pos-submodular",
    "pricing",
    "disjointness",
];

struct CliError {
    code: u8,
    message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } | Error::TabularTooLarge { .. } => 3,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let tol = Tolerance::new(cli.eps).map_err(CliError::from)?;
    let output = match &cli.command {
        Command::Analyze { game_file } => cmd_analyze(cli, game_file, tol)?,
        Command::Vaccinate {
            graph_file,
            cost,
            loss,
            max_iters,
        } => cmd_vaccinate(cli, graph_file, *cost, *loss, *max_iters, tol)?,
        Command::FromCnf { cnf_file, check } => cmd_from_cnf(cli, cnf_file, *check, tol)?,
        Command::Gadget {
            name,
            n,
            k,
            p,
            q,
            loss,
            epsilon,
            a1,
            a2,
        } => cmd_gadget(
            cli,
            name,
            &GadgetParams {
                n: *n,
                k: *k,
                p: *p,
                q: *q,
                loss: *loss,
                epsilon: *epsilon,
                a1: a1.clone(),
                a2: a2.clone(),
            },
        )?,
        Command::VerifyMixed { game_file, probs } => {
            cmd_verify_mixed(cli, game_file, probs, tol)?
        }
    };
    emit(cli, output)
}

fn emit(cli: &Cli, mut text: String) -> Result<(), CliError> {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => {
            use std::io::Write;
            // A closed pipe (e.g. `payplay ... | head`) is not an error.
            if let Err(e) = std::io::stdout().write_all(text.as_bytes()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}

/// Exhaustive scans default to 16 players for table-backed games and 24
/// for purely anonymous ones; `--max-n` overrides.
fn effective_cap(cli: &Cli, game: &Game) -> usize {
    cli.max_n.unwrap_or_else(|| {
        let all_anonymous = game
            .player_specs()
            .iter()
            .all(|s| s.play_cost.is_anonymous_model());
        if all_anonymous {
            DEFAULT_ENUM_CAP
        } else {
            payplay::game::MAX_TABULAR_PLAYERS
        }
    })
}

fn require_cap(game: &Game, cap: usize) -> Result<(), CliError> {
    if game.n() > cap {
        return Err(Error::CapExceeded { n: game.n(), cap }.into());
    }
    Ok(())
}

fn cmd_analyze(cli: &Cli, game_file: &PathBuf, tol: Tolerance) -> Result<String, CliError> {
    let text = fs::read_to_string(game_file)?;
    let game = game_from_json(&text).map_err(CliError::from)?;
    require_cap(&game, effective_cap(cli, &game))?;
    let report = analyze(&game, tol).map_err(CliError::from)?;
    Ok(if cli.pretty {
        report.to_pretty()
    } else {
        report.to_json()
    })
}

fn cmd_vaccinate(
    cli: &Cli,
    graph_file: &PathBuf,
    cost: f64,
    loss: f64,
    max_iters: usize,
    tol: Tolerance,
) -> Result<String, CliError> {
    let text = fs::read_to_string(graph_file)?;
    let graph = graph_from_json(&text).map_err(CliError::from)?;
    let vg = VaccinationGame::new(graph, cost, loss).map_err(CliError::from)?;
    let game = vg.as_game().map_err(CliError::from)?;
    let mut notes: Vec<String> = Vec::new();
    if cost >= loss {
        notes.push(format!(
            "vaccine cost {} >= loss {}: vaccinating is never strictly beneficial",
            format_f64(cost),
            format_f64(loss)
        ));
    }

    let equilibrium = find_equilibrium(&vg, max_iters, None).map_err(CliError::from)?;
    let characterization = check_equilibrium_characterization(&vg, &equilibrium, tol);
    let repaired = pareto_repair(&vg, &equilibrium, tol).map_err(CliError::from)?;
    let sizes_of = |p| attack_components(vg.graph(), p).sizes;
    let eq_sizes = sizes_of(&equilibrium);
    let repaired_sizes = sizes_of(&repaired);

    // The Pareto verdict needs a full profile scan.
    let pareto_efficient = if game.n() <= effective_cap(cli, &game) {
        Some(
            is_pareto_efficient_pure(&game, &repaired, tol)
                .map_err(CliError::from)?
                .efficient,
        )
    } else {
        notes.push(format!(
            "{} players exceed the scan cap; Pareto verdict skipped",
            game.n()
        ));
        None
    };

    if cli.pretty {
        let mut out = String::new();
        out.push_str(&format!(
            "vaccination game: {} nodes, cost {}, loss {}, alpha {}\n",
            vg.graph().num_vertices(),
            format_f64(cost),
            format_f64(loss),
            format_f64(vg.alpha())
        ));
        out.push_str(&format!(
            "equilibrium: {} (component sizes {:?})\n",
            equilibrium, eq_sizes
        ));
        out.push_str(&format!(
            "characterization: components within alpha = {}, vaccinators at threshold = {}\n",
            characterization.components_within_alpha,
            characterization.vaccinators_at_threshold
        ));
        out.push_str(&format!(
            "repaired: {} (component sizes {:?})\n",
            repaired, repaired_sizes
        ));
        match pareto_efficient {
            Some(v) => out.push_str(&format!("pareto efficient: {}\n", v)),
            None => out.push_str("pareto efficient: skipped\n"),
        }
        for note in &notes {
            out.push_str(&format!("note: {}\n", note));
        }
        return Ok(out);
    }

    let usize_arr =
        |v: &[usize]| JsonValue::Arr(v.iter().map(|&k| JsonValue::Int(k as i64)).collect());
    Ok(obj(vec![
        ("n", JsonValue::Int(vg.graph().num_vertices() as i64)),
        ("vaccine_cost", JsonValue::Num(cost)),
        ("loss", JsonValue::Num(loss)),
        ("alpha", JsonValue::Num(vg.alpha())),
        ("equilibrium", profile_value(&equilibrium)),
        ("component_sizes", usize_arr(&eq_sizes)),
        (
            "characterization",
            obj(vec![
                (
                    "components_within_alpha",
                    JsonValue::Bool(characterization.components_within_alpha),
                ),
                (
                    "vaccinators_at_threshold",
                    JsonValue::Bool(characterization.vaccinators_at_threshold),
                ),
            ]),
        ),
        ("repaired", profile_value(&repaired)),
        ("repaired_component_sizes", usize_arr(&repaired_sizes)),
        (
            "pareto_efficient",
            match pareto_efficient {
                Some(v) => JsonValue::Bool(v),
                None => JsonValue::Null,
            },
        ),
        (
            "notes",
            JsonValue::Arr(notes.iter().map(|s| JsonValue::Str(s.clone())).collect()),
        ),
    ])
    .render())
}

fn cmd_from_cnf(
    cli: &Cli,
    cnf_file: &PathBuf,
    check: bool,
    tol: Tolerance,
) -> Result<String, CliError> {
    let text = fs::read_to_string(cnf_file)?;
    let cnf = parse_dimacs(&text).map_err(Error::from).map_err(CliError::from)?;
    let game = sat_to_game(&cnf).map_err(CliError::from)?;
    let game_json = game_to_json(&game).map_err(CliError::from)?;
    if !check {
        return Ok(game_json);
    }
    require_cap(&game, effective_cap(cli, &game))?;
    let has_equilibrium = any_pure_nash(&game, tol)
        .map_err(CliError::from)?
        .is_some();
    let satisfiable = cnf.brute_force_satisfiable();
    // Re-embed the already-rendered game verbatim.
    let mut out = String::from("{\"game\":");
    out.push_str(&game_json);
    out.push_str(",\"check\":");
    out.push_str(
        &obj(vec![
            ("pure_nash_exists", JsonValue::Bool(has_equilibrium)),
            ("satisfiable", JsonValue::Bool(satisfiable)),
            ("agree", JsonValue::Bool(has_equilibrium == satisfiable)),
        ])
        .render(),
    );
    out.push('}');
    Ok(out)
}

fn parse_index_set(text: &str) -> Result<BTreeSet<usize>, CliError> {
    let mut out = BTreeSet::new();
    for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let value = token.parse::<usize>().map_err(|_| CliError {
            code: 2,
            message: format!("invalid set element '{}'", token),
        })?;
        out.insert(value);
    }
    Ok(out)
}

fn require<T>(value: Option<T>, flag: &str, gadget: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError {
        code: 2,
        message: format!("gadget '{}' requires --{}", gadget, flag),
    })
}

fn cmd_gadget(cli: &Cli, name: &str, params: &GadgetParams) -> Result<String, CliError> {
    let game = match name {
        "triangle" => triangle_gadget(),
        "indifference" => indifference_gadget(),
        "two-player" => {
            two_player_example(params.epsilon.unwrap_or(0.1)).map_err(CliError::from)?
        }
        "pos-player-specific" => pos_player_specific(
            require(params.n, "n", name)?,
            params.epsilon.unwrap_or(0.01),
        )
        .map_err(CliError::from)?,
        "pos-submodular" => pos_submodular(
            require(params.n, "n", name)?,
            params.epsilon.unwrap_or(0.01),
        )
        .map_err(CliError::from)?,
        "pricing" => pricing_game(
            require(params.n, "n", name)?,
            require(params.k, "k", name)?,
            require(params.p, "p", name)?,
            require(params.q, "q", name)?,
            params.loss,
        )
        .map_err(CliError::from)?,
        "disjointness" => {
            let inst = DisjointnessInstance::new(
                require(params.k, "k", name)?,
                parse_index_set(params.a1.as_deref().unwrap_or(""))?,
                parse_index_set(params.a2.as_deref().unwrap_or(""))?,
            )
            .map_err(CliError::from)?;
            disjointness_to_game(&inst).map_err(CliError::from)?
        }
        other => {
            return Err(CliError {
                code: 2,
                message: format!(
                    "unknown gadget '{}'; valid names: {}",
                    other,
                    GADGET_NAMES.join(", ")
                ),
            })
        }
    };
    if cli.pretty {
        let mut out = String::new();
        out.push_str(&format!(
            "game: {} ({} players)\n",
            game.label().unwrap_or("(unlabeled)"),
            game.n()
        ));
        for i in game.players() {
            out.push_str(&format!(
                "  player {}: pay cost {}\n",
                i,
                format_f64(game.pay_cost(i))
            ));
        }
        return Ok(out);
    }
    game_to_json(&game).map_err(CliError::from)
}

fn cmd_verify_mixed(
    cli: &Cli,
    game_file: &PathBuf,
    probs: &str,
    tol: Tolerance,
) -> Result<String, CliError> {
    let text = fs::read_to_string(game_file)?;
    let game = game_from_json(&text).map_err(CliError::from)?;
    let mut values = Vec::new();
    for token in probs.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        values.push(token.parse::<f64>().map_err(|_| CliError {
            code: 2,
            message: format!("invalid probability '{}'", token),
        })?);
    }
    if values.len() != game.n() {
        return Err(CliError {
            code: 2,
            message: format!(
                "{} probabilities given but the game has {} players",
                values.len(),
                game.n()
            ),
        });
    }
    let profile = MixedProfile::new(values).map_err(CliError::from)?;
    let (is_equilibrium, rows) = verify_mixed(&game, &profile, tol).map_err(CliError::from)?;
    if cli.pretty {
        let mut out = format!(
            "mixed equilibrium: {}\n",
            if is_equilibrium { "yes" } else { "no" }
        );
        for (i, row) in rows.iter().enumerate() {
            out.push_str(&format!(
                "  player {}: pay prob {}, pay cost {}, play branch {}, residual {}\n",
                i,
                format_f64(row.pay_prob),
                format_f64(row.pay_cost),
                format_f64(row.play_branch_cost),
                format_f64(row.residual)
            ));
        }
        return Ok(out);
    }
    Ok(mixed_verdict_to_json(is_equilibrium, tol.eps(), &rows))
}
