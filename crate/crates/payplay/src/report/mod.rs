//! Analysis reports: structural flags, equilibria, efficiency ratios, and
//! Pareto verdicts, with deterministic JSON output.

use crate::efficiency::{
    efficiency_ratios, is_pareto_efficient_pure, EfficiencyRatios, ParetoVerdict,
};
use crate::equilibrium::{enumerate_pure_nash, EquilibriumSet};
use crate::error::Error;
use crate::game::{Game, PureProfile, Tolerance};
use crate::json::{obj, profile_value, JsonValue};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralFlags {
    pub monotone: bool,
    /// False when monotonicity was sampled rather than scanned exhaustively.
    pub monotone_exhaustive: bool,
    pub symmetric: bool,
    /// Every player's play cost depends only on the play-set size.
    pub anonymous: bool,
    /// Every player's play cost is submodular.
    pub submodular: bool,
    pub generic: bool,
}

#[derive(Clone, Debug)]
pub struct ParetoEntry {
    pub profile: PureProfile,
    pub verdict: ParetoVerdict,
}

/// Everything the analyzer derives from one game.
#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub game_label: String,
    pub n: usize,
    pub structural: StructuralFlags,
    pub equilibria: EquilibriumSet,
    /// Absent when the optimum cost is within tolerance of zero (the ratios
    /// are undefined there); the reason lands in `notes`.
    pub efficiency: Option<EfficiencyRatios>,
    pub pareto: Vec<ParetoEntry>,
    pub notes: Vec<String>,
}

/// Runs the structural checks, equilibrium enumeration, efficiency ratios,
/// and per-equilibrium Pareto scans.
pub fn analyze(game: &Game, tol: Tolerance) -> Result<AnalysisReport, Error> {
    let mut notes = Vec::new();
    let monotone_report = game.check_monotone(tol)?;
    if !monotone_report.exhaustive {
        notes.push(
            "monotonicity was sampled, not proved: derived cost models on a large game"
                .to_string(),
        );
    }
    if !monotone_report.is_monotone() {
        notes.push(format!(
            "{} monotonicity violation(s) found; equilibrium guarantees do not apply",
            monotone_report.violations.len()
        ));
    }
    let mut anonymous = true;
    let mut submodular = true;
    for player in game.players() {
        anonymous &= game.check_anonymous(player, tol)?;
        submodular &= game.check_submodular(player, tol)?;
    }
    let structural = StructuralFlags {
        monotone: monotone_report.is_monotone(),
        monotone_exhaustive: monotone_report.exhaustive,
        symmetric: game.check_symmetric(tol)?,
        anonymous,
        submodular,
        generic: game.check_generic(tol)?,
    };
    let equilibria = enumerate_pure_nash(game, tol)?;
    if equilibria.is_empty() {
        notes.push("no pure Nash equilibrium exists".to_string());
    }
    let efficiency = match efficiency_ratios(game, tol) {
        Ok(r) => Some(r),
        Err(Error::ZeroOptimum { cost }) => {
            notes.push(format!(
                "optimum social cost {} is within tolerance of zero; ratios undefined",
                cost
            ));
            None
        }
        Err(e) => return Err(e),
    };
    let mut pareto = Vec::with_capacity(equilibria.len());
    for profile in &equilibria.pure_equilibria {
        pareto.push(ParetoEntry {
            profile: *profile,
            verdict: is_pareto_efficient_pure(game, profile, tol)?,
        });
    }
    Ok(AnalysisReport {
        game_label: game.label().unwrap_or("").to_string(),
        n: game.n(),
        structural,
        equilibria,
        efficiency,
        pareto,
        notes,
    })
}

fn opt_num(v: Option<f64>) -> JsonValue {
    match v {
        Some(x) => JsonValue::Num(x),
        None => JsonValue::Null,
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let structural = obj(vec![
            ("monotone", JsonValue::Bool(self.structural.monotone)),
            (
                "monotone_exhaustive",
                JsonValue::Bool(self.structural.monotone_exhaustive),
            ),
            ("symmetric", JsonValue::Bool(self.structural.symmetric)),
            ("anonymous", JsonValue::Bool(self.structural.anonymous)),
            ("submodular", JsonValue::Bool(self.structural.submodular)),
            ("generic", JsonValue::Bool(self.structural.generic)),
        ]);
        let equilibria = obj(vec![
            (
                "exhaustive",
                JsonValue::Bool(self.equilibria.exhaustive),
            ),
            (
                "pure",
                JsonValue::Arr(
                    self.equilibria
                        .pure_equilibria
                        .iter()
                        .map(profile_value)
                        .collect(),
                ),
            ),
        ]);
        let efficiency = match &self.efficiency {
            None => JsonValue::Null,
            Some(r) => obj(vec![
                ("optimum_cost", JsonValue::Num(r.optimum_cost)),
                ("optimum_profile", profile_value(&r.optimum_profile)),
                ("worst_ne_cost", opt_num(r.worst_ne_cost)),
                ("best_ne_cost", opt_num(r.best_ne_cost)),
                ("poa", opt_num(r.poa)),
                ("pos", opt_num(r.pos)),
            ]),
        };
        let pareto = JsonValue::Arr(
            self.pareto
                .iter()
                .map(|entry| {
                    let witness = match &entry.verdict.witness {
                        None => JsonValue::Null,
                        Some(w) => obj(vec![
                            ("profile", profile_value(&w.profile)),
                            (
                                "deltas",
                                JsonValue::Arr(
                                    w.deltas.iter().map(|&d| JsonValue::Num(d)).collect(),
                                ),
                            ),
                        ]),
                    };
                    obj(vec![
                        ("profile", profile_value(&entry.profile)),
                        ("efficient", JsonValue::Bool(entry.verdict.efficient)),
                        ("witness", witness),
                    ])
                })
                .collect(),
        );
        obj(vec![
            ("game_label", JsonValue::Str(self.game_label.clone())),
            ("n", JsonValue::Int(self.n as i64)),
            ("structural", structural),
            ("equilibria", equilibria),
            ("efficiency", efficiency),
            ("pareto", pareto),
            (
                "notes",
                JsonValue::Arr(
                    self.notes
                        .iter()
                        .map(|s| JsonValue::Str(s.clone()))
                        .collect(),
                ),
            ),
        ])
        .render()
    }

    /// Parses a report previously produced by [`AnalysisReport::to_json`].
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        let n = v["n"]
            .as_u64()
            .ok_or_else(|| Error::Load("missing n".to_string()))? as usize;
        let profile_from = |value: &serde_json::Value| -> Result<PureProfile, Error> {
            let arr = value
                .as_array()
                .ok_or_else(|| Error::Load("profile must be an array".to_string()))?;
            let mut flags = Vec::with_capacity(arr.len());
            for item in arr {
                match item.as_str() {
                    Some("pay") => flags.push(true),
                    Some("play") => flags.push(false),
                    _ => return Err(Error::Load("profile entries are 'pay'/'play'".to_string())),
                }
            }
            Ok(PureProfile::from_pay_flags(&flags))
        };
        let s = &v["structural"];
        let flag = |key: &str| -> Result<bool, Error> {
            s[key]
                .as_bool()
                .ok_or_else(|| Error::Load(format!("missing structural.{}", key)))
        };
        let structural = StructuralFlags {
            monotone: flag("monotone")?,
            monotone_exhaustive: flag("monotone_exhaustive")?,
            symmetric: flag("symmetric")?,
            anonymous: flag("anonymous")?,
            submodular: flag("submodular")?,
            generic: flag("generic")?,
        };
        let eq = &v["equilibria"];
        let mut pure_equilibria = Vec::new();
        for p in eq["pure"]
            .as_array()
            .ok_or_else(|| Error::Load("missing equilibria.pure".to_string()))?
        {
            pure_equilibria.push(profile_from(p)?);
        }
        let equilibria = EquilibriumSet {
            pure_equilibria,
            exhaustive: eq["exhaustive"].as_bool().unwrap_or(true),
        };
        let efficiency = if v["efficiency"].is_null() {
            None
        } else {
            let e = &v["efficiency"];
            Some(EfficiencyRatios {
                optimum_cost: e["optimum_cost"]
                    .as_f64()
                    .ok_or_else(|| Error::Load("missing optimum_cost".to_string()))?,
                optimum_profile: profile_from(&e["optimum_profile"])?,
                worst_ne_cost: e["worst_ne_cost"].as_f64(),
                best_ne_cost: e["best_ne_cost"].as_f64(),
                poa: e["poa"].as_f64(),
                pos: e["pos"].as_f64(),
            })
        };
        let mut pareto = Vec::new();
        for entry in v["pareto"]
            .as_array()
            .ok_or_else(|| Error::Load("missing pareto".to_string()))?
        {
            let witness = if entry["witness"].is_null() {
                None
            } else {
                let w = &entry["witness"];
                let deltas = w["deltas"]
                    .as_array()
                    .ok_or_else(|| Error::Load("missing witness.deltas".to_string()))?
                    .iter()
                    .map(|d| d.as_f64().unwrap_or(f64::NAN))
                    .collect();
                Some(crate::efficiency::ParetoWitness {
                    profile: profile_from(&w["profile"])?,
                    deltas,
                })
            };
            pareto.push(ParetoEntry {
                profile: profile_from(&entry["profile"])?,
                verdict: ParetoVerdict {
                    efficient: entry["efficient"].as_bool().unwrap_or(false),
                    witness,
                },
            });
        }
        let notes = v["notes"]
            .as_array()
            .map(|arr| {
                arr.iter()
                    .filter_map(|s| s.as_str().map(str::to_string))
                    .collect()
            })
            .unwrap_or_default();
        Ok(AnalysisReport {
            game_label: v["game_label"].as_str().unwrap_or("").to_string(),
            n,
            structural,
            equilibria,
            efficiency,
            pareto,
            notes,
        })
    }

    /// Human-readable table of the same content.
    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        let label = if self.game_label.is_empty() {
            "(unlabeled)"
        } else {
            &self.game_label
        };
        out.push_str(&format!("game: {} ({} players)\n", label, self.n));
        out.push_str(&format!(
            "structure: monotone={}{} symmetric={} anonymous={} submodular={} generic={}\n",
            self.structural.monotone,
            if self.structural.monotone_exhaustive {
                ""
            } else {
                " (sampled)"
            },
            self.structural.symmetric,
            self.structural.anonymous,
            self.structural.submodular,
            self.structural.generic,
        ));
        if self.equilibria.is_empty() {
            out.push_str("pure equilibria: none\n");
        } else {
            out.push_str(&format!(
                "pure equilibria ({}):\n",
                self.equilibria.len()
            ));
            for entry in &self.pareto {
                let pareto = if entry.verdict.efficient {
                    "pareto-efficient"
                } else {
                    "pareto-dominated"
                };
                out.push_str(&format!("  {}  [{}]\n", entry.profile, pareto));
            }
        }
        if let Some(e) = &self.efficiency {
            out.push_str(&format!(
                "optimum: {} cost {}\n",
                e.optimum_profile,
                crate::json::format_f64(e.optimum_cost)
            ));
            match (e.poa, e.pos) {
                (Some(poa), Some(pos)) => out.push_str(&format!(
                    "price of anarchy: {}  price of stability: {}\n",
                    crate::json::format_f64(poa),
                    crate::json::format_f64(pos)
                )),
                _ => out.push_str("price of anarchy/stability: undefined (no pure equilibrium)\n"),
            }
        }
        for note in &self.notes {
            out.push_str(&format!("note: {}\n", note));
        }
        out
    }
}

/// Per-player verdict of a mixed-profile equilibrium check, for reporting.
#[derive(Clone, Debug)]
pub struct MixedVerdictRow {
    pub pay_prob: f64,
    pub pay_cost: f64,
    pub play_branch_cost: f64,
    /// How far the profile is from satisfying the player's equilibrium
    /// condition: indifference gap for interior probabilities, one-sided
    /// excess for pure ones.
    pub residual: f64,
}

/// Evaluates the mixed-equilibrium conditions player by player.
pub fn verify_mixed(
    game: &Game,
    profile: &crate::game::MixedProfile,
    tol: Tolerance,
) -> Result<(bool, Vec<MixedVerdictRow>), Error> {
    let verdict = crate::equilibrium::is_mixed_nash(game, profile, tol)?;
    let mut rows = Vec::with_capacity(game.n());
    for i in game.players() {
        let p = profile.pay_prob(i);
        let pay_cost = game.pay_cost(i);
        let play = game.play_branch_cost(profile, i)?;
        let residual = if p == 1.0 {
            (pay_cost - play).max(0.0)
        } else if p == 0.0 {
            (play - pay_cost).max(0.0)
        } else {
            (pay_cost - play).abs()
        };
        rows.push(MixedVerdictRow {
            pay_prob: p,
            pay_cost,
            play_branch_cost: play,
            residual,
        });
    }
    Ok((verdict, rows))
}

pub fn mixed_verdict_to_json(is_equilibrium: bool, eps: f64, rows: &[MixedVerdictRow]) -> String {
    obj(vec![
        ("is_mixed_nash", JsonValue::Bool(is_equilibrium)),
        ("eps", JsonValue::Num(eps)),
        (
            "players",
            JsonValue::Arr(
                rows.iter()
                    .map(|r| {
                        obj(vec![
                            ("pay_prob", JsonValue::Num(r.pay_prob)),
                            ("pay_cost", JsonValue::Num(r.pay_cost)),
                            ("play_branch_cost", JsonValue::Num(r.play_branch_cost)),
                            ("residual", JsonValue::Num(r.residual)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ])
    .render()
}
