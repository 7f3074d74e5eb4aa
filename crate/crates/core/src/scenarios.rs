//! Parliament and scenario documents, the bundled datasets, and exponent sweeps.
//!
//! A document is TOML with a `schema_version`, one `[parliament]` table and a
//! list of `[[scenarios]]`. See `data/*.toml` for complete examples.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coalition::{build_weighted_majority, Coalition, PlayerSet, SimpleGame};
use crate::cohesion::{
    explicit_cohesion, range_cohesion, CohesionStructure, DefaultRule, IdeologyProfile,
};
use crate::error::{Error, Result};
use crate::values::{power_index, Branch, PowerProfile, MAX_EXPONENT};

pub const SCHEMA_VERSION: u32 = 1;

/// Prefix that selects a bundled dataset instead of a file path.
pub const BUILTIN_PREFIX: &str = "builtin:";

const BUILTIN_DOCUMENTS: [(&str, &str); 5] = [
    ("apex-3", include_str!("../data/apex-3.toml")),
    (
        "bundestag-2025",
        include_str!("../data/bundestag-2025.toml"),
    ),
    ("wende-1980", include_str!("../data/wende-1980.toml")),
    (
        "france-2024-bloc",
        include_str!("../data/france-2024-bloc.toml"),
    ),
    (
        "france-2024-party",
        include_str!("../data/france-2024-party.toml"),
    ),
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    schema_version: u32,
    parliament: RawParliament,
    #[serde(default)]
    scenarios: Vec<RawScenario>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParliament {
    name: String,
    quota: u64,
    #[serde(default)]
    notes: String,
    parties: Vec<Party>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    #[serde(default = "default_branch")]
    branch: Branch,
    cohesion: RawCohesion,
    #[serde(default)]
    pariahs: Vec<String>,
    #[serde(default)]
    overrides: BTreeMap<String, f64>,
    #[serde(default)]
    sweep: Option<RawSweep>,
}

fn default_branch() -> Branch {
    Branch::Shapley
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RawCohesion {
    Range,
    Explicit {
        entries: Vec<CohesionEntry>,
        #[serde(default)]
        default_rule: DefaultRule,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    min: Option<f64>,
    max: Option<f64>,
    steps: Option<u64>,
    values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Party {
    pub label: String,
    pub seats: u64,
    #[serde(default)]
    pub position: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParliamentSpec {
    pub name: String,
    pub quota: u64,
    pub notes: String,
    pub parties: Vec<Party>,
}

impl ParliamentSpec {
    pub fn total_seats(&self) -> u64 {
        self.parties.iter().map(|p| p.seats).sum()
    }

    pub fn players(&self) -> PlayerSet {
        PlayerSet::new(self.parties.iter().map(|p| p.label.as_str())).expect("validated labels")
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.parties.iter().map(|p| p.label.as_str())
    }

    /// The weighted majority game: a coalition wins with at least `quota` seats.
    pub fn game(&self) -> Result<SimpleGame> {
        build_weighted_majority(
            self.players(),
            self.parties.iter().map(|p| p.seats as f64).collect(),
            self.quota as f64,
        )
    }

    /// Positions after applying `overrides`; every party must end up with one.
    pub fn positions(&self, overrides: &BTreeMap<String, f64>) -> Result<IdeologyProfile> {
        let positions = self
            .parties
            .iter()
            .enumerate()
            .map(|(i, p)| {
                overrides
                    .get(&p.label)
                    .copied()
                    .or(p.position)
                    .ok_or_else(|| {
                        Error::schema(
                            format!("parliament.parties[{i}].position"),
                            format!("party `{}` has no position", p.label),
                        )
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        IdeologyProfile::new(self.players(), positions)
    }

    fn validate(&self) -> Result<()> {
        let n = self.parties.len();
        if !(2..=crate::coalition::MAX_PLAYERS).contains(&n) {
            return Err(Error::schema(
                "parliament.parties",
                format!(
                    "expected between 2 and {} parties, got {n}",
                    crate::coalition::MAX_PLAYERS
                ),
            ));
        }
        for (i, p) in self.parties.iter().enumerate() {
            if p.label.trim().is_empty() {
                return Err(Error::schema(
                    format!("parliament.parties[{i}].label"),
                    "label is empty",
                ));
            }
            if self.parties[..i].iter().any(|q| q.label == p.label) {
                return Err(Error::schema(
                    format!("parliament.parties[{i}].label"),
                    format!("duplicate label `{}`", p.label),
                ));
            }
            if p.position.is_some_and(|x| !x.is_finite()) {
                return Err(Error::schema(
                    format!("parliament.parties[{i}].position"),
                    "position is not finite",
                ));
            }
        }
        if self.quota == 0 {
            return Err(Error::schema("parliament.quota", "quota must be positive"));
        }
        if self.quota > self.total_seats() {
            return Err(Error::schema(
                "parliament.quota",
                format!(
                    "quota {} exceeds total seats {}",
                    self.quota,
                    self.total_seats()
                ),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohesionEntry {
    pub members: Vec<String>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CohesionSpec {
    /// Inverse ideological range of member positions.
    Range,
    /// Listed coalition values; the rest follow `default_rule`.
    Explicit {
        entries: Vec<CohesionEntry>,
        default_rule: DefaultRule,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExponentGrid {
    /// `steps` evenly spaced points from `min` to `max` inclusive; a single
    /// step is just `min`.
    Uniform {
        min: f64,
        max: f64,
        steps: usize,
    },
    List(Vec<f64>),
}

impl Default for ExponentGrid {
    fn default() -> Self {
        ExponentGrid::Uniform {
            min: 0.0,
            max: 3.0,
            steps: 61,
        }
    }
}

impl ExponentGrid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            ExponentGrid::Uniform { min, steps: 1, .. } => vec![*min],
            ExponentGrid::Uniform { min, max, steps } => (0..*steps)
                .map(|k| min + (max - min) * k as f64 / (*steps - 1) as f64)
                .collect(),
            ExponentGrid::List(values) => values.clone(),
        }
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        let in_range = |b: f64| (0.0..=MAX_EXPONENT).contains(&b);
        match self {
            ExponentGrid::Uniform { min, max, steps } => {
                if !in_range(*min) {
                    return Err(Error::schema(
                        format!("{path}.min"),
                        format!("must lie in [0, {MAX_EXPONENT}], got {min}"),
                    ));
                }
                if !in_range(*max) || max < min {
                    return Err(Error::schema(
                        format!("{path}.max"),
                        format!("must lie in [{min}, {MAX_EXPONENT}], got {max}"),
                    ));
                }
                if *steps == 0 {
                    return Err(Error::schema(format!("{path}.steps"), "must be at least 1"));
                }
            }
            ExponentGrid::List(values) => {
                if values.is_empty() {
                    return Err(Error::schema(format!("{path}.values"), "list is empty"));
                }
                if let Some(k) = values.iter().position(|&b| !in_range(b)) {
                    return Err(Error::schema(
                        format!("{path}.values[{k}]"),
                        format!("must lie in [0, {MAX_EXPONENT}], got {}", values[k]),
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSpec {
    pub name: String,
    pub branch: Branch,
    pub cohesion: CohesionSpec,
    pub pariahs: Vec<String>,
    pub position_overrides: BTreeMap<String, f64>,
    pub grid: ExponentGrid,
}

impl ScenarioSpec {
    /// Cohesion structure for this scenario, with the cordon applied.
    pub fn cohesion(&self, parliament: &ParliamentSpec) -> Result<CohesionStructure> {
        let players = parliament.players();
        let base = match &self.cohesion {
            CohesionSpec::Range => range_cohesion(&parliament.positions(&self.position_overrides)?),
            CohesionSpec::Explicit {
                entries,
                default_rule,
            } => {
                let entries = entries
                    .iter()
                    .map(|e| Ok((players.coalition_of(&e.members)?, e.value)))
                    .collect::<Result<Vec<_>>>()?;
                explicit_cohesion(players.clone(), &entries, *default_rule)?
            }
        };
        Ok(base.apply_cordon(players.coalition_of(&self.pariahs)?))
    }

    fn validate(&self, parliament: &ParliamentSpec, path: &str) -> Result<()> {
        let players = parliament.players();
        let known = |label: &str| players.index_of(label).is_some();
        for (k, label) in self.pariahs.iter().enumerate() {
            if !known(label) {
                return Err(Error::schema(
                    format!("{path}.pariahs[{k}]"),
                    format!("unknown party `{label}`"),
                ));
            }
        }
        for (label, &x) in &self.position_overrides {
            if !known(label) {
                return Err(Error::schema(
                    format!("{path}.overrides.{label}"),
                    format!("unknown party `{label}`"),
                ));
            }
            if !x.is_finite() {
                return Err(Error::schema(
                    format!("{path}.overrides.{label}"),
                    "position is not finite",
                ));
            }
        }
        match &self.cohesion {
            CohesionSpec::Range => {
                if let Some(p) = parliament.parties.iter().find(|p| {
                    p.position.is_none() && !self.position_overrides.contains_key(&p.label)
                }) {
                    return Err(Error::schema(
                        format!("{path}.cohesion"),
                        format!("range cohesion needs a position for party `{}`", p.label),
                    ));
                }
            }
            CohesionSpec::Explicit { entries, .. } => {
                for (k, e) in entries.iter().enumerate() {
                    let entry = format!("{path}.cohesion.entries[{k}]");
                    if e.members.is_empty() {
                        return Err(Error::schema(
                            format!("{entry}.members"),
                            "coalition is empty",
                        ));
                    }
                    if let Some(label) = e.members.iter().find(|l| !known(l)) {
                        return Err(Error::schema(
                            format!("{entry}.members"),
                            format!("unknown party `{label}`"),
                        ));
                    }
                    if !e.value.is_finite() || e.value < 0.0 {
                        return Err(Error::schema(
                            format!("{entry}.value"),
                            format!("cohesion must be finite and non-negative, got {}", e.value),
                        ));
                    }
                }
            }
        }
        self.grid.validate(&format!("{path}.sweep"))
    }
}

/// A parsed document: one parliament and its scenarios.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    pub schema_version: u32,
    pub parliament: ParliamentSpec,
    pub scenarios: Vec<ScenarioSpec>,
    /// SHA-256 of the document text, hex encoded.
    pub hash: String,
}

impl Dataset {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(text)
            .map_err(|e| Error::schema("document", e.message().to_string()))?;
        let raw: RawDocument = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." {
                "document".to_string()
            } else {
                path
            };
            Error::schema(path, e.into_inner().message().to_string())
        })?;
        if raw.schema_version != SCHEMA_VERSION {
            return Err(Error::schema(
                "schema_version",
                format!(
                    "unsupported version {} (expected {SCHEMA_VERSION})",
                    raw.schema_version
                ),
            ));
        }
        let parliament = ParliamentSpec {
            name: raw.parliament.name,
            quota: raw.parliament.quota,
            notes: raw.parliament.notes.trim().to_string(),
            parties: raw.parliament.parties,
        };
        parliament.validate()?;

        let mut scenarios = Vec::with_capacity(raw.scenarios.len());
        for (k, s) in raw.scenarios.into_iter().enumerate() {
            let path = format!("scenarios[{k}]");
            if scenarios.iter().any(|t: &ScenarioSpec| t.name == s.name) {
                return Err(Error::schema(
                    format!("{path}.name"),
                    format!("duplicate scenario `{}`", s.name),
                ));
            }
            let grid = match s.sweep {
                None => ExponentGrid::default(),
                Some(sweep) => sweep_grid(sweep, &path)?,
            };
            let spec = ScenarioSpec {
                name: s.name,
                branch: s.branch,
                cohesion: match s.cohesion {
                    RawCohesion::Range => CohesionSpec::Range,
                    RawCohesion::Explicit {
                        entries,
                        default_rule,
                    } => CohesionSpec::Explicit {
                        entries,
                        default_rule,
                    },
                },
                pariahs: s.pariahs,
                position_overrides: s.overrides,
                grid,
            };
            spec.validate(&parliament, &path)?;
            scenarios.push(spec);
        }

        Ok(Self {
            schema_version: raw.schema_version,
            parliament,
            scenarios,
            hash: hex::encode(Sha256::digest(text.as_bytes())),
        })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text)
    }

    /// Resolves `builtin:NAME` to a bundled dataset and anything else to a file.
    pub fn open(source: &str) -> Result<Self> {
        match source.strip_prefix(BUILTIN_PREFIX) {
            Some(name) => builtin(name),
            None => Self::from_path(source),
        }
    }

    pub fn name(&self) -> &str {
        &self.parliament.name
    }

    pub fn scenario(&self, name: &str) -> Result<&ScenarioSpec> {
        self.scenarios
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::UnknownScenario(name.to_string()))
    }
}

fn sweep_grid(sweep: RawSweep, path: &str) -> Result<ExponentGrid> {
    let path = format!("{path}.sweep");
    match sweep {
        RawSweep {
            values: Some(values),
            min: None,
            max: None,
            steps: None,
        } => Ok(ExponentGrid::List(values)),
        RawSweep {
            values: None,
            min: Some(min),
            max: Some(max),
            steps: Some(steps),
        } => Ok(ExponentGrid::Uniform {
            min,
            max,
            steps: usize::try_from(steps)
                .map_err(|_| Error::schema(format!("{path}.steps"), "too large"))?,
        }),
        _ => Err(Error::schema(
            path,
            "expected either `values` or all of `min`, `max`, `steps`",
        )),
    }
}

pub fn load_parliament(text: &str) -> Result<ParliamentSpec> {
    Ok(Dataset::from_toml_str(text)?.parliament)
}

pub fn load_scenarios(text: &str) -> Result<Vec<ScenarioSpec>> {
    Ok(Dataset::from_toml_str(text)?.scenarios)
}

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTIN_DOCUMENTS.iter().map(|(name, _)| *name)
}

pub fn builtin(name: &str) -> Result<Dataset> {
    let (_, text) = BUILTIN_DOCUMENTS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownDataset(name.to_string()))?;
    Ok(Dataset::from_toml_str(text).expect("bundled documents are valid"))
}

pub fn builtin_datasets() -> Vec<Dataset> {
    builtin_names()
        .map(|n| builtin(n).expect("bundled name"))
        .collect()
}

/// Normalized index of every party at exponent `b`. A scenario in which no
/// winning coalition carries positive cohesion yields the all-zero profile.
pub fn run_scenario(
    parliament: &ParliamentSpec,
    scenario: &ScenarioSpec,
    b: f64,
) -> Result<PowerProfile> {
    let game = parliament.game()?;
    let kappa = scenario.cohesion(parliament)?;
    power_index(&game, &kappa, scenario.branch, b)
}

/// True if some winning coalition has positive cohesion.
pub fn has_feasible_coalition(
    parliament: &ParliamentSpec,
    scenario: &ScenarioSpec,
) -> Result<bool> {
    let game = parliament.game()?;
    let kappa = scenario.cohesion(parliament)?;
    Ok(crate::coalition::all_coalitions(parliament.parties.len())
        .any(|s: Coalition| game.is_winning(s) && kappa.value(s) > 0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow<'a> {
    pub b: f64,
    pub party: &'a str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub dataset: String,
    pub dataset_hash: String,
    pub scenario: String,
    pub branch: Branch,
    pub parties: Vec<String>,
    /// One normalized profile per grid point, in grid order.
    pub profiles: Vec<PowerProfile>,
}

impl SweepResult {
    /// Long-format rows ordered by grid point, then party.
    pub fn rows(&self) -> impl Iterator<Item = SweepRow<'_>> {
        self.profiles.iter().flat_map(move |p| {
            self.parties
                .iter()
                .zip(&p.values)
                .map(move |(party, &value)| SweepRow {
                    b: p.exponent,
                    party,
                    value,
                })
        })
    }

    /// Index series of one party across the grid.
    pub fn series(&self, party: &str) -> Option<Vec<f64>> {
        let k = self.parties.iter().position(|p| p == party)?;
        Some(self.profiles.iter().map(|p| p.values[k]).collect())
    }

    pub fn exponents(&self) -> Vec<f64> {
        self.profiles.iter().map(|p| p.exponent).collect()
    }
}

/// Runs the scenario at every point of `grid`, or of the scenario's own grid.
pub fn sweep_exponent(
    dataset: &Dataset,
    scenario: &ScenarioSpec,
    grid: Option<&ExponentGrid>,
) -> Result<SweepResult> {
    let grid = grid.unwrap_or(&scenario.grid);
    grid.validate("sweep")?;
    let profiles = grid
        .points()
        .into_par_iter()
        .map(|b| run_scenario(&dataset.parliament, scenario, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        dataset: dataset.name().to_string(),
        dataset_hash: dataset.hash.clone(),
        scenario: scenario.name.clone(),
        branch: scenario.branch,
        parties: dataset.parliament.labels().map(str::to_string).collect(),
        profiles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(parties: &str, extra: &str) -> String {
        format!("schema_version = 1\n[parliament]\nname = \"t\"\nquota = 3\nparties = [{parties}]\n{extra}")
    }

    const TWO: &str = "{ label = \"X\", seats = 2, position = 1.0 }, { label = \"Y\", seats = 2, position = 4.0 }";

    #[test]
    fn bundestag_document() {
        let d = builtin("bundestag-2025").unwrap();
        assert_eq!(d.parliament.parties.len(), 5);
        assert_eq!(d.parliament.quota, 316);
        assert_eq!(d.parliament.total_seats(), 629);
        assert_eq!(d.scenario("B").unwrap().pariahs, ["AfD"]);
        assert_eq!(d.hash.len(), 64);
    }

    #[test]
    fn wende_pairwise_cohesion() {
        let d = builtin("wende-1980").unwrap();
        let pre = d.scenario("pre").unwrap().cohesion(&d.parliament).unwrap();
        let players = d.parliament.players();
        let spd_fdp = players.coalition_of(&["SPD", "FDP"]).unwrap();
        assert!((pre.value(spd_fdp) - 1.0 / 3.5).abs() < 1e-15);
        let post = d.scenario("post").unwrap().cohesion(&d.parliament).unwrap();
        assert!((post.value(spd_fdp) - 1.0 / 4.5).abs() < 1e-15);
    }

    #[test]
    fn france_double_cordon() {
        let d = builtin("france-2024-bloc").unwrap();
        let c = d.scenario("C").unwrap();
        assert_eq!(c.pariahs, ["RN", "NFP"]);
        assert!(!has_feasible_coalition(&d.parliament, c).unwrap());
        let profile = run_scenario(&d.parliament, c, 1.0).unwrap();
        assert!(profile.is_all_zero());
        assert!(has_feasible_coalition(&d.parliament, d.scenario("B").unwrap()).unwrap());
    }

    #[test]
    fn apex_weights() {
        let d = builtin("apex-3").unwrap();
        assert_eq!(d.parliament.quota, 51);
        assert_eq!(d.parliament.total_seats(), 100);
        let kappa = d.scenarios[0].cohesion(&d.parliament).unwrap();
        assert_eq!(kappa.value(Coalition::grand(3)), 0.0);
        assert_eq!(kappa.value(Coalition::from_bits(0b110)), 0.9);
    }

    #[test]
    fn every_builtin_loads() {
        let names: Vec<_> = builtin_datasets()
            .iter()
            .map(|d| d.name().to_string())
            .collect();
        assert_eq!(names, builtin_names().collect::<Vec<_>>());
        assert!(matches!(builtin("nope"), Err(Error::UnknownDataset(_))));
        assert!(Dataset::open("builtin:apex-3").is_ok());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let text = doc(
            "{ label = \"X\", seats = 2 }, { label = \"X\", seats = 2 }",
            "",
        );
        let err = Dataset::from_toml_str(&text).unwrap_err();
        assert_eq!(
            err,
            Error::schema("parliament.parties[1].label", "duplicate label `X`")
        );
    }

    #[test]
    fn quota_above_total_rejected() {
        let text = builtin_documents_text("bundestag-2025").replace("quota = 316", "quota = 700");
        let err = Dataset::from_toml_str(&text).unwrap_err();
        assert!(
            matches!(&err, Error::Schema { path, .. } if path == "parliament.quota"),
            "{err}"
        );
    }

    fn builtin_documents_text(name: &str) -> &'static str {
        BUILTIN_DOCUMENTS
            .iter()
            .find(|(n, _)| *n == name)
            .unwrap()
            .1
    }

    #[test]
    fn type_errors_carry_field_paths() {
        let text = doc(
            "{ label = \"X\", seats = 2 }, { label = \"Y\", seats = -1 }",
            "",
        );
        let err = Dataset::from_toml_str(&text).unwrap_err();
        assert!(
            matches!(&err, Error::Schema { path, .. } if path == "parliament.parties[1].seats"),
            "{err}"
        );

        let text = doc(
            TWO,
            "[[scenarios]]\nname = \"s\"\ncohesion = { type = \"fancy\" }\n",
        );
        let err = Dataset::from_toml_str(&text).unwrap_err();
        assert!(
            matches!(&err, Error::Schema { path, .. } if path.starts_with("scenarios[0]")),
            "{err}"
        );
    }

    #[test]
    fn scenario_validation() {
        let bad_pariah = doc(
            TWO,
            "[[scenarios]]\nname = \"s\"\ncohesion = { type = \"range\" }\npariahs = [\"Z\"]\n",
        );
        let err = Dataset::from_toml_str(&bad_pariah).unwrap_err();
        assert_eq!(
            err,
            Error::schema("scenarios[0].pariahs[0]", "unknown party `Z`")
        );

        let bad_grid = doc(TWO, "[[scenarios]]\nname = \"s\"\ncohesion = { type = \"range\" }\nsweep = { min = -1.0, max = 3.0, steps = 5 }\n");
        let err = Dataset::from_toml_str(&bad_grid).unwrap_err();
        assert!(
            matches!(&err, Error::Schema { path, .. } if path == "scenarios[0].sweep.min"),
            "{err}"
        );

        let no_steps = doc(TWO, "[[scenarios]]\nname = \"s\"\ncohesion = { type = \"range\" }\nsweep = { min = 0.0, max = 3.0, steps = 0 }\n");
        let err = Dataset::from_toml_str(&no_steps).unwrap_err();
        assert!(
            matches!(&err, Error::Schema { path, .. } if path == "scenarios[0].sweep.steps"),
            "{err}"
        );

        let missing_position = doc(
            "{ label = \"X\", seats = 2 }, { label = \"Y\", seats = 2, position = 4.0 }",
            "[[scenarios]]\nname = \"s\"\ncohesion = { type = \"range\" }\n",
        );
        assert!(Dataset::from_toml_str(&missing_position).is_err());
        let overridden = missing_position + "overrides = { X = 2.0 }\n";
        assert!(Dataset::from_toml_str(&overridden).is_ok());

        let version = doc(TWO, "").replace("schema_version = 1", "schema_version = 2");
        let err = Dataset::from_toml_str(&version).unwrap_err();
        assert!(matches!(&err, Error::Schema { path, .. } if path == "schema_version"));
    }

    #[test]
    fn grid_points() {
        let g = ExponentGrid::default().points();
        assert_eq!(g.len(), 61);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[60], 3.0);
        assert!((g[20] - 1.0).abs() < 1e-15);
        let one = ExponentGrid::Uniform {
            min: 1.5,
            max: 3.0,
            steps: 1,
        };
        assert_eq!(one.points(), [1.5]);
    }

    #[test]
    fn sweep_rows_are_ordered() {
        let d = builtin("apex-3").unwrap();
        let grid = ExponentGrid::List(vec![0.0, 1.0]);
        let result = sweep_exponent(&d, &d.scenarios[0], Some(&grid)).unwrap();
        let rows: Vec<_> = result.rows().map(|r| (r.b, r.party)).collect();
        assert_eq!(
            rows,
            [
                (0.0, "A"),
                (0.0, "B"),
                (0.0, "C"),
                (1.0, "A"),
                (1.0, "B"),
                (1.0, "C")
            ]
        );
        assert_eq!(result.dataset_hash, d.hash);
    }
}
