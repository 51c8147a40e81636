//! Game and graph JSON formats, plus the deterministic writer used for all
//! machine-readable output.
//!
//! Reading goes through serde; writing uses a small canonical emitter with
//! fixed key order and floats printed as the shortest round-trip decimal
//! capped at 12 significant digits, so identical inputs always produce
//! byte-identical output.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::Error;
use crate::game::{
    Coalition, CostModel, CostTable, Game, PlayerId, PlayerSpec, MAX_TABULAR_PLAYERS,
};
use crate::vaccination::UndirectedGraph;

// ---------------------------------------------------------------------------
// Float formatting
// ---------------------------------------------------------------------------

/// Shortest decimal that parses back to `x`, capped at 12 significant
/// digits (rounding to 12 when no shorter representation round-trips).
pub fn format_f64(x: f64) -> String {
    assert!(x.is_finite(), "only finite values are serialized");
    if x == 0.0 {
        return "0".to_string();
    }
    for sig in 1..=12usize {
        let candidate = format!("{:.*e}", sig - 1, x);
        if candidate.parse::<f64>() == Ok(x) {
            return scientific_to_plain(&candidate);
        }
    }
    scientific_to_plain(&format!("{:.11e}", x))
}

/// Converts Rust's `{:e}` output (e.g. `-1.25e-3`) to plain decimal.
fn scientific_to_plain(s: &str) -> String {
    let (mantissa, exp) = s.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("valid exponent");
    let negative = mantissa.starts_with('-');
    let mantissa = mantissa.trim_start_matches('-');
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    // value = 0.digits * 10^(exp + 1)
    let point = exp + 1;
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..-point {
            out.push('0');
        }
        out.push_str(digits);
    } else if (point as usize) >= digits.len() {
        out.push_str(digits);
        for _ in 0..(point as usize - digits.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    out
}

// ---------------------------------------------------------------------------
// Canonical JSON emitter
// ---------------------------------------------------------------------------

/// JSON value with caller-controlled member order.
#[derive(Clone, Debug)]
pub enum JsonValue {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<JsonValue>),
    Obj(Vec<(String, JsonValue)>),
}

/// Object with fields in the given order.
pub fn obj(fields: Vec<(&str, JsonValue)>) -> JsonValue {
    JsonValue::Obj(
        fields
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
    )
}

impl JsonValue {
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            JsonValue::Null => out.push_str("null"),
            JsonValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            JsonValue::Int(i) => out.push_str(&i.to_string()),
            JsonValue::Num(x) => out.push_str(&format_f64(*x)),
            JsonValue::Str(s) => {
                out.push('"');
                for c in s.chars() {
                    match c {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        '\r' => out.push_str("\\r"),
                        '\t' => out.push_str("\\t"),
                        c if (c as u32) < 0x20 => {
                            out.push_str(&format!("\\u{:04x}", c as u32));
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            JsonValue::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            JsonValue::Obj(fields) => {
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    JsonValue::Str(key.clone()).write(out);
                    out.push(':');
                    value.write(out);
                }
                out.push('}');
            }
        }
    }
}

/// `["pay","play",...]` representation of a pure profile.
pub fn profile_value(profile: &crate::game::PureProfile) -> JsonValue {
    JsonValue::Arr(
        (0..profile.n())
            .map(|i| {
                JsonValue::Str(
                    if profile.pays(PlayerId(i)) {
                        "pay"
                    } else {
                        "play"
                    }
                    .to_string(),
                )
            })
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// Game format
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct GameFile {
    n: usize,
    #[serde(default)]
    label: Option<String>,
    players: Vec<PlayerFile>,
    #[serde(default)]
    shared_tables: BTreeMap<String, TableFile>,
}

#[derive(Deserialize)]
struct PlayerFile {
    h: f64,
    g: ModelFile,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum ModelFile {
    Tabular {
        entries: Vec<EntryFile>,
    },
    Anonymous {
        by_count: Vec<f64>,
    },
    Shared {
        #[serde(rename = "ref")]
        table: String,
    },
}

#[derive(Deserialize)]
struct TableFile {
    entries: Vec<EntryFile>,
}

#[derive(Deserialize)]
struct EntryFile {
    set: Vec<usize>,
    cost: f64,
}

fn entries_to_table(n: usize, entries: &[EntryFile]) -> Result<CostTable, Error> {
    let mut table = CostTable::new(n);
    for entry in entries {
        // Sets must be strictly ascending player ids.
        for pair in entry.set.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::Load(format!(
                    "coalition {:?} is not sorted strictly ascending",
                    entry.set
                )));
            }
        }
        if let Some(&last) = entry.set.last() {
            if last >= n {
                return Err(Error::Load(format!(
                    "player id {} out of range for n={}",
                    last, n
                )));
            }
        }
        table.insert(Coalition::from_indices(entry.set.iter().copied()), entry.cost)?;
    }
    Ok(table)
}

/// Parses a game from its JSON representation and validates it.
pub fn game_from_json(text: &str) -> Result<Game, Error> {
    let file: GameFile = serde_json::from_str(text)?;
    if file.players.len() != file.n {
        return Err(Error::Load(format!(
            "n={} but {} players given",
            file.n,
            file.players.len()
        )));
    }
    let mut shared: BTreeMap<String, Arc<CostTable>> = BTreeMap::new();
    for (name, table) in &file.shared_tables {
        shared.insert(
            name.clone(),
            Arc::new(entries_to_table(file.n, &table.entries)?),
        );
    }
    let mut players = Vec::with_capacity(file.n);
    for spec in &file.players {
        let model = match &spec.g {
            ModelFile::Tabular { entries } => {
                CostModel::Tabular(entries_to_table(file.n, entries)?)
            }
            ModelFile::Anonymous { by_count } => CostModel::Anonymous(by_count.clone()),
            ModelFile::Shared { table } => {
                let Some(t) = shared.get(table) else {
                    return Err(Error::Load(format!("unknown shared table '{}'", table)));
                };
                CostModel::Shared(Arc::clone(t))
            }
        };
        players.push(PlayerSpec::new(spec.h, model));
    }
    Game::new(players, file.label)
}

fn table_entries_value(table: &CostTable) -> JsonValue {
    JsonValue::Arr(
        table
            .iter()
            .map(|(set, cost)| {
                obj(vec![
                    (
                        "set",
                        JsonValue::Arr(
                            set.iter()
                                .map(|p| JsonValue::Int(p.0 as i64))
                                .collect(),
                        ),
                    ),
                    ("cost", JsonValue::Num(cost)),
                ])
            })
            .collect(),
    )
}

/// Serializes a game to canonical JSON. Derived models are expanded to
/// explicit tables, which requires `n <= MAX_TABULAR_PLAYERS`.
pub fn game_to_json(game: &Game) -> Result<String, Error> {
    let n = game.n();
    // Shared tables referenced by pointer identity, named in first-use order.
    let mut shared_names: Vec<(*const CostTable, String, Arc<CostTable>)> = Vec::new();
    let mut players = Vec::with_capacity(n);
    for (i, spec) in game.player_specs().iter().enumerate() {
        let player = PlayerId(i);
        let g = match &spec.play_cost {
            CostModel::Tabular(table) => obj(vec![
                ("type", JsonValue::Str("tabular".to_string())),
                ("entries", table_entries_value(table)),
            ]),
            CostModel::Anonymous(w) => obj(vec![
                ("type", JsonValue::Str("anonymous".to_string())),
                (
                    "by_count",
                    JsonValue::Arr(w.iter().map(|&v| JsonValue::Num(v)).collect()),
                ),
            ]),
            CostModel::Shared(table) => {
                let ptr = Arc::as_ptr(table);
                let name = match shared_names.iter().find(|(p, _, _)| *p == ptr) {
                    Some((_, name, _)) => name.clone(),
                    None => {
                        let name = format!("g{}", shared_names.len());
                        shared_names.push((ptr, name.clone(), Arc::clone(table)));
                        name
                    }
                };
                obj(vec![
                    ("type", JsonValue::Str("shared".to_string())),
                    ("ref", JsonValue::Str(name)),
                ])
            }
            CostModel::Derived(_) => {
                if n > MAX_TABULAR_PLAYERS {
                    return Err(Error::CapExceeded {
                        n,
                        cap: MAX_TABULAR_PLAYERS,
                    });
                }
                let mut table = CostTable::new(n);
                for bits in 1..(1u32 << n) {
                    let set = Coalition::from_bits(bits);
                    if set.contains(player) {
                        table
                            .insert(set, game.play_cost(player, set)?)
                            .expect("fresh table");
                    }
                }
                obj(vec![
                    ("type", JsonValue::Str("tabular".to_string())),
                    ("entries", table_entries_value(&table)),
                ])
            }
        };
        players.push(obj(vec![
            ("h", JsonValue::Num(spec.pay_cost)),
            ("g", g),
        ]));
    }
    let mut fields = vec![("n", JsonValue::Int(n as i64))];
    if let Some(label) = game.label() {
        fields.push(("label", JsonValue::Str(label.to_string())));
    }
    fields.push(("players", JsonValue::Arr(players)));
    if !shared_names.is_empty() {
        fields.push((
            "shared_tables",
            JsonValue::Obj(
                shared_names
                    .iter()
                    .map(|(_, name, table)| {
                        (
                            name.clone(),
                            obj(vec![("entries", table_entries_value(table))]),
                        )
                    })
                    .collect(),
            ),
        ));
    }
    Ok(obj(fields).render())
}

// ---------------------------------------------------------------------------
// Graph format
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// Parses `{ "n": ..., "edges": [[u, v], ...] }`; self-loops, out-of-range
/// endpoints, and duplicate edges are load errors.
pub fn graph_from_json(text: &str) -> Result<UndirectedGraph, Error> {
    let file: GraphFile = serde_json::from_str(text)?;
    UndirectedGraph::new(file.n, &file.edges)
}

pub fn graph_to_json(graph: &UndirectedGraph) -> String {
    obj(vec![
        ("n", JsonValue::Int(graph.num_vertices() as i64)),
        (
            "edges",
            JsonValue::Arr(
                graph
                    .edges()
                    .iter()
                    .map(|&(u, v)| {
                        JsonValue::Arr(vec![
                            JsonValue::Int(u as i64),
                            JsonValue::Int(v as i64),
                        ])
                    })
                    .collect(),
            ),
        ),
    ])
    .render()
}

#[cfg(test)]
mod tests;
