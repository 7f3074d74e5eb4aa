//! Published reference values for the bundled datasets, checked against any
//! set of datasets so that edited documents can be audited too.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scenarios::{run_scenario, sweep_exponent, Dataset, ExponentGrid, SweepResult};

/// Three-decimal table values.
pub const TABLE_TOLERANCE: f64 = 0.002;
/// Values quoted approximately in prose.
pub const PROSE_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `|observed − expected| ≤ tolerance`
    Within,
    /// `observed < expected`
    Below,
    /// `observed ≥ expected − tolerance`
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub label: String,
    pub observed: f64,
    pub relation: Relation,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ClaimCheck {
    fn new(
        label: impl Into<String>,
        observed: f64,
        relation: Relation,
        expected: f64,
        tolerance: f64,
    ) -> Self {
        let passed = match relation {
            Relation::Within => (observed - expected).abs() <= tolerance,
            Relation::Below => observed < expected,
            Relation::AtLeast => observed >= expected - tolerance,
        };
        Self {
            label: label.into(),
            observed,
            relation,
            expected,
            tolerance,
            passed,
        }
    }
}

impl fmt::Display for ClaimCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "ok" } else { "MISMATCH" };
        match self.relation {
            Relation::Within => write!(
                f,
                "{}: observed {:.6} expected {} ± {} {}",
                self.label, self.observed, self.expected, self.tolerance, status
            ),
            Relation::Below => write!(
                f,
                "{}: observed {:.6} required < {} {}",
                self.label, self.observed, self.expected, status
            ),
            Relation::AtLeast => write!(
                f,
                "{}: observed {:.6} required >= {} (tolerance {}) {}",
                self.label, self.observed, self.expected, self.tolerance, status
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimResult {
    pub id: &'static str,
    pub description: &'static str,
    pub checks: Vec<ClaimCheck>,
    pub error: Option<String>,
}

impl ClaimResult {
    pub fn passed(&self) -> bool {
        self.error.is_none() && !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for ClaimResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "[{status}] {} - {}", self.id, self.description)?;
        if let Some(e) = &self.error {
            writeln!(f, "    error: {e}")?;
        }
        for c in &self.checks {
            writeln!(f, "    {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
enum ClaimKind {
    /// Normalized values at one exponent.
    Point {
        b: f64,
        expected: &'static [(&'static str, f64)],
        tolerance: f64,
    },
    /// Every party is zero at every positive grid point.
    ZeroForPositiveB,
    /// `party` strictly decreases along the grid and ends below `bound`.
    Collapse { party: &'static str, bound: f64 },
    /// `upper ≥ lower − tolerance` at every positive grid point.
    Dominates {
        upper: &'static str,
        lower: &'static str,
        tolerance: f64,
    },
    /// The listed parties are zero at every grid point of every scenario.
    NeverPivotal { parties: &'static [&'static str] },
}

#[derive(Debug, Clone, Copy)]
pub struct Claim {
    pub id: &'static str,
    pub description: &'static str,
    pub dataset: &'static str,
    /// Empty for claims that span all scenarios.
    pub scenario: &'static str,
    kind: ClaimKind,
}

const fn point(
    id: &'static str,
    description: &'static str,
    dataset: &'static str,
    scenario: &'static str,
    b: f64,
    expected: &'static [(&'static str, f64)],
    tolerance: f64,
) -> Claim {
    Claim {
        id,
        description,
        dataset,
        scenario,
        kind: ClaimKind::Point {
            b,
            expected,
            tolerance,
        },
    }
}

const THIRD: f64 = 1.0 / 3.0;

pub const CLAIMS: &[Claim] = &[
    point(
        "wende-pre",
        "Wende 1980, FDP at 5.5, cohesion Shapley index at b=1",
        "wende-1980",
        "pre",
        1.0,
        &[("CDU/CSU", 0.339), ("SPD", 0.285), ("FDP", 0.376)],
        TABLE_TOLERANCE,
    ),
    point(
        "wende-post",
        "Wende 1980, FDP at 6.5, cohesion Shapley index at b=1",
        "wende-1980",
        "post",
        1.0,
        &[("CDU/CSU", 0.387), ("SPD", 0.218), ("FDP", 0.394)],
        TABLE_TOLERANCE,
    ),
    point(
        "wende-classical",
        "Wende 1980, classical Shapley-Shubik index",
        "wende-1980",
        "pre",
        0.0,
        &[("CDU/CSU", 0.333), ("SPD", 0.333), ("FDP", 0.333)],
        TABLE_TOLERANCE,
    ),
    point(
        "bundestag-a-b0",
        "Bundestag 2025, pure ideology, b=0",
        "bundestag-2025",
        "A",
        0.0,
        &[("CDU/CSU", 0.400), ("AfD", 0.233), ("SPD", 0.233), ("Grüne", 0.067), ("Linke", 0.067)],
        PROSE_TOLERANCE,
    ),
    point(
        "bundestag-a-b1",
        "Bundestag 2025, pure ideology, b=1",
        "bundestag-2025",
        "A",
        1.0,
        &[("CDU/CSU", 0.436), ("AfD", 0.222), ("SPD", 0.229), ("Grüne", 0.057), ("Linke", 0.057)],
        PROSE_TOLERANCE,
    ),
    point(
        "bundestag-b-b0",
        "Bundestag 2025, AfD cordoned off, b=0",
        "bundestag-2025",
        "B",
        0.0,
        &[("CDU/CSU", 0.522), ("SPD", 0.304)],
        PROSE_TOLERANCE,
    ),
    point(
        "bundestag-b-b1",
        "Bundestag 2025, AfD cordoned off, b=1",
        "bundestag-2025",
        "B",
        1.0,
        &[("CDU/CSU", 0.545), ("AfD", 0.0), ("SPD", 0.319), ("Grüne", 0.065), ("Linke", 0.071)],
        PROSE_TOLERANCE,
    ),
    point(
        "france-bloc-a",
        "France 2024 blocs, pure ideology, b=1",
        "france-2024-bloc",
        "A",
        1.0,
        &[("NFP", 0.310), ("Ensemble", 0.358), ("LR", 0.0), ("RN", 0.332), ("Others", 0.0)],
        PROSE_TOLERANCE,
    ),
    point(
        "france-bloc-b",
        "France 2024 blocs, RN cordoned off, b=1",
        "france-2024-bloc",
        "B",
        1.0,
        &[("NFP", 0.523), ("Ensemble", 0.477)],
        PROSE_TOLERANCE,
    ),
    Claim {
        id: "france-bloc-c",
        description: "France 2024 blocs, RN and NFP cordoned off: all zero for b > 0",
        dataset: "france-2024-bloc",
        scenario: "C",
        kind: ClaimKind::ZeroForPositiveB,
    },
    point(
        "france-party-a",
        "France 2024 parties, pure ideology, b=1",
        "france-2024-party",
        "A",
        1.0,
        &[
            ("LFI", 0.061),
            ("PS-Verts", 0.195),
            ("Ensemble", 0.319),
            ("LR", 0.059),
            ("RN", 0.301),
            ("Others", 0.064),
        ],
        PROSE_TOLERANCE,
    ),
    point(
        "france-party-b",
        "France 2024 parties, RN cordoned off, b=1",
        "france-2024-party",
        "B",
        1.0,
        &[("LFI", 0.093), ("PS-Verts", 0.302), ("Ensemble", 0.413), ("LR", 0.091), ("Others", 0.102)],
        PROSE_TOLERANCE,
    ),
    point(
        "france-party-c",
        "France 2024 parties, RN and LFI cordoned off, b=1",
        "france-2024-party",
        "C",
        1.0,
        &[("PS-Verts", 0.384), ("Ensemble", 0.359), ("LR", 0.112), ("Others", 0.145)],
        PROSE_TOLERANCE,
    ),
    point(
        "apex-b0",
        "Apex game at b=0: equal shares",
        "apex-3",
        "base",
        0.0,
        &[("A", THIRD), ("B", THIRD), ("C", THIRD)],
        1e-9,
    ),
    Claim {
        id: "apex-collapse",
        description: "Apex game: A strictly decreasing in b, below 0.05 at b=3",
        dataset: "apex-3",
        scenario: "base",
        kind: ClaimKind::Collapse {
            party: "A",
            bound: 0.05,
        },
    },
    Claim {
        id: "bundestag-a-spd-above-afd",
        description: "Bundestag 2025, pure ideology: SPD at or above AfD for every b > 0 (within prose tolerance)",
        dataset: "bundestag-2025",
        scenario: "A",
        // The strict ordering only holds from b = 0.75 on; below that SPD
        // trails AfD by at most 0.003.
        kind: ClaimKind::Dominates {
            upper: "SPD",
            lower: "AfD",
            tolerance: PROSE_TOLERANCE,
        },
    },
    Claim {
        id: "france-bloc-never-pivotal",
        description: "France 2024 blocs: LR and Others are zero in every scenario",
        dataset: "france-2024-bloc",
        scenario: "",
        kind: ClaimKind::NeverPivotal {
            parties: &["LR", "Others"],
        },
    },
];

/// Tolerance for the ordering and zero claims on sweeps.
const CURVE_TOLERANCE: f64 = 1e-12;

fn series(sweep: &SweepResult, party: &str) -> Result<Vec<f64>> {
    sweep
        .series(party)
        .ok_or_else(|| Error::UnknownLabel(party.to_string()))
}

fn label(b: f64, party: &str) -> String {
    format!("b={b:.2} {party}")
}

impl Claim {
    /// Evaluates the claim against whichever of `datasets` it names.
    pub fn evaluate(&self, datasets: &[Dataset]) -> ClaimResult {
        let (checks, error) = match self.checks(datasets) {
            Ok(checks) => (checks, None),
            Err(e) => (Vec::new(), Some(e.to_string())),
        };
        ClaimResult {
            id: self.id,
            description: self.description,
            checks,
            error,
        }
    }

    fn checks(&self, datasets: &[Dataset]) -> Result<Vec<ClaimCheck>> {
        let dataset = datasets
            .iter()
            .find(|d| d.name() == self.dataset)
            .ok_or_else(|| Error::UnknownDataset(self.dataset.to_string()))?;
        let grid = ExponentGrid::default();
        let sweep = || sweep_exponent(dataset, dataset.scenario(self.scenario)?, Some(&grid));
        let mut checks = Vec::new();
        match self.kind {
            ClaimKind::Point {
                b,
                expected,
                tolerance,
            } => {
                let profile =
                    run_scenario(&dataset.parliament, dataset.scenario(self.scenario)?, b)?;
                let players = dataset.parliament.players();
                for &(party, value) in expected {
                    let i = players
                        .index_of(party)
                        .ok_or_else(|| Error::UnknownLabel(party.to_string()))?;
                    checks.push(ClaimCheck::new(
                        party,
                        profile.values[i],
                        Relation::Within,
                        value,
                        tolerance,
                    ));
                }
            }
            ClaimKind::ZeroForPositiveB => {
                let sweep = sweep()?;
                for p in sweep.profiles.iter().filter(|p| p.exponent > 0.0) {
                    let largest = p.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                    checks.push(ClaimCheck::new(
                        format!("b={:.2} largest |value|", p.exponent),
                        largest,
                        Relation::Within,
                        0.0,
                        CURVE_TOLERANCE,
                    ));
                }
            }
            ClaimKind::Collapse { party, bound } => {
                let sweep = sweep()?;
                let values = series(&sweep, party)?;
                let b = sweep.exponents();
                for k in 1..values.len() {
                    checks.push(ClaimCheck::new(
                        format!("{} step from b={:.2}", label(b[k], party), b[k - 1]),
                        values[k] - values[k - 1],
                        Relation::Below,
                        0.0,
                        0.0,
                    ));
                }
                let last = values.len() - 1;
                checks.push(ClaimCheck::new(
                    label(b[last], party),
                    values[last],
                    Relation::Below,
                    bound,
                    0.0,
                ));
            }
            ClaimKind::Dominates {
                upper,
                lower,
                tolerance,
            } => {
                let sweep = sweep()?;
                let (hi, lo) = (series(&sweep, upper)?, series(&sweep, lower)?);
                for (k, &b) in sweep
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b > 0.0)
                {
                    checks.push(ClaimCheck::new(
                        format!("b={b:.2} {upper} - {lower}"),
                        hi[k] - lo[k],
                        Relation::AtLeast,
                        0.0,
                        tolerance,
                    ));
                }
            }
            ClaimKind::NeverPivotal { parties } => {
                for scenario in &dataset.scenarios {
                    let sweep = sweep_exponent(dataset, scenario, Some(&grid))?;
                    for &party in parties {
                        let largest = series(&sweep, party)?
                            .iter()
                            .fold(0.0f64, |m, x| m.max(x.abs()));
                        checks.push(ClaimCheck::new(
                            format!("scenario {} {party} largest |value|", scenario.name),
                            largest,
                            Relation::Within,
                            0.0,
                            CURVE_TOLERANCE,
                        ));
                    }
                }
            }
        }
        Ok(checks)
    }
}

/// Claims whose id starts with `filter` (all claims when `None`).
pub fn claims(filter: Option<&str>) -> impl Iterator<Item = &'static Claim> + '_ {
    CLAIMS
        .iter()
        .filter(move |c| filter.is_none_or(|f| c.id.starts_with(f)))
}

pub fn reproduce(datasets: &[Dataset], filter: Option<&str>) -> Vec<ClaimResult> {
    claims(filter).map(|c| c.evaluate(datasets)).collect()
}
