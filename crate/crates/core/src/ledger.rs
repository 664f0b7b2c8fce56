//! Global assembly over a one-dimensional base: per-place reduction graphs
//! with weights, the Hodge-degree input, and the self-intersection of the
//! admissible relative dualizing sheaf.
//!
//! The ledger verifies relations between quantities; it does not derive the
//! Hodge degree, which depends on the curve and not just on its reduction
//! graphs. Weights fold the residue degree and the local normalization into
//! one positive rational per place.
//!
//! File format:
//!
//! ```text
//! ledger g=<int> deg_lambda=<p>/<q>
//! place <name> weight=<p>/<q> graph=<relative path to graph file>
//! ```

use std::path::Path;

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{parse_graph, MetrizedGraph};
use crate::invariants::{epsilon, phi, total_length};
use crate::rational::{parse_rational, rat, rational_string, rint, Rational};

/// One place: a named reduction graph with a positive weight.
#[derive(Debug, Clone)]
pub struct Place {
    pub name: String,
    pub weight: Rational,
    pub graph: MetrizedGraph,
}

/// Per-place graphs plus the global inputs.
#[derive(Debug, Clone)]
pub struct CurveLedger {
    pub genus: u64,
    pub deg_lambda: Rational,
    pub places: Vec<Place>,
}

impl CurveLedger {
    /// Validates genus, weights and per-place graphs. Place graphs must have
    /// genus between 2 and the ledger genus (vertex genus marks absorb any
    /// difference; the invariants of a place use its own graph).
    pub fn new(genus: u64, deg_lambda: Rational, places: Vec<Place>) -> Result<Self> {
        if genus < 2 {
            return Err(Error::GenusTooSmall {
                required: 2,
                actual: genus,
            });
        }
        for place in &places {
            if !place.weight.is_positive() {
                return Err(Error::InvalidPlace {
                    place: place.name.clone(),
                    reason: "weight must be positive".into(),
                });
            }
            let place_genus = place.graph.genus();
            if place_genus < 2 || place_genus > genus {
                return Err(Error::InvalidPlace {
                    place: place.name.clone(),
                    reason: format!(
                        "reduction graph has genus {place_genus}, expected between 2 and {genus}"
                    ),
                });
            }
        }
        Ok(CurveLedger {
            genus,
            deg_lambda,
            places,
        })
    }
}

/// One verified inequality with its exact margin.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub name: String,
    #[serde(with = "rational_string")]
    pub bound: Rational,
    pub satisfied: bool,
    #[serde(with = "rational_string")]
    pub margin: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlaceReport {
    pub name: String,
    #[serde(with = "rational_string")]
    pub weight: Rational,
    pub genus: u64,
    #[serde(with = "rational_string")]
    pub delta: Rational,
    #[serde(with = "rational_string")]
    pub epsilon: Rational,
    #[serde(with = "rational_string")]
    pub phi: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerReport {
    pub genus: u64,
    #[serde(with = "rational_string")]
    pub deg_lambda: Rational,
    #[serde(with = "rational_string")]
    pub omega_sq: Rational,
    #[serde(with = "rational_string")]
    pub sum_delta: Rational,
    #[serde(with = "rational_string")]
    pub sum_epsilon: Rational,
    #[serde(with = "rational_string")]
    pub sum_phi: Rational,
    pub places: Vec<PlaceReport>,
    pub phi_lower_bound: BoundCheck,
    pub height_lower_bound: BoundCheck,
}

impl LedgerReport {
    pub fn all_pass(&self) -> bool {
        self.phi_lower_bound.satisfied && self.height_lower_bound.satisfied
    }
}

/// Computes per-place invariants and assembles the full report.
pub fn report(ledger: &CurveLedger) -> Result<LedgerReport> {
    let g = ledger.genus as i64;
    let mut places = Vec::with_capacity(ledger.places.len());
    let mut sum_delta = Rational::zero();
    let mut sum_epsilon = Rational::zero();
    let mut sum_phi = Rational::zero();
    for place in &ledger.places {
        let delta = total_length(&place.graph);
        let eps = epsilon(&place.graph)?;
        let phi_value = phi(&place.graph)?;
        sum_delta += place.weight.clone() * delta.clone();
        sum_epsilon += place.weight.clone() * eps.clone();
        sum_phi += place.weight.clone() * phi_value.clone();
        places.push(PlaceReport {
            name: place.name.clone(),
            weight: place.weight.clone(),
            genus: place.graph.genus(),
            delta,
            epsilon: eps,
            phi: phi_value,
        });
    }
    let omega_sq = rint(12) * ledger.deg_lambda.clone() - sum_delta.clone() - sum_epsilon.clone();

    // omega_sq >= 2/(3g-1) * sum of weighted phi
    let phi_bound = rat(2, 3 * g - 1) * sum_phi.clone();
    let phi_margin = omega_sq.clone() - phi_bound.clone();
    let phi_lower_bound = BoundCheck {
        name: "omega_sq_ge_phi_share".into(),
        bound: phi_bound,
        satisfied: !phi_margin.is_negative(),
        margin: phi_margin,
    };

    // omega_sq >= 3/(5(2g-1)(3g-1)) * deg_lambda
    let height_bound = fiberwise_constant(ledger.genus)? * ledger.deg_lambda.clone();
    let height_margin = omega_sq.clone() - height_bound.clone();
    let height_lower_bound = BoundCheck {
        name: "omega_sq_ge_height_share".into(),
        bound: height_bound,
        satisfied: !height_margin.is_negative(),
        margin: height_margin,
    };

    Ok(LedgerReport {
        genus: ledger.genus,
        deg_lambda: ledger.deg_lambda.clone(),
        omega_sq,
        sum_delta,
        sum_epsilon,
        sum_phi,
        places,
        phi_lower_bound,
        height_lower_bound,
    })
}

/// omega_sq alone: 12 deg_lambda - sum of weighted (delta + epsilon).
pub fn omega_sq(ledger: &CurveLedger) -> Result<Rational> {
    Ok(report(ledger)?.omega_sq)
}

/// The coefficient 3 / (5 (2g-1) (3g-1)) of the fiberwise height bound.
pub fn fiberwise_constant(genus: u64) -> Result<Rational> {
    if genus < 2 {
        return Err(Error::GenusTooSmall {
            required: 2,
            actual: genus,
        });
    }
    let g = genus as i64;
    Ok(rat(3, 5 * (2 * g - 1) * (3 * g - 1)))
}

/// The constants of the boundary-elimination step.
#[derive(Debug, Clone, Serialize)]
pub struct EliminationConstants {
    /// 1 + (39/2) (3g-1) (2g-1): the exact multiplier of the combination.
    #[serde(with = "rational_string")]
    pub c_exact: Rational,
    /// 20 (3g-1) (2g-1): the rounded-up multiplier actually quoted.
    #[serde(with = "rational_string")]
    pub c_round: Rational,
    /// 12 / c_round, which equals the fiberwise constant.
    #[serde(with = "rational_string")]
    pub coefficient: Rational,
}

/// Computes both multipliers and the induced coefficient, asserting
/// c_exact <= c_round and that 12 / c_round matches the fiberwise constant.
pub fn elimination_constants(genus: u64) -> Result<EliminationConstants> {
    if genus < 2 {
        return Err(Error::GenusTooSmall {
            required: 2,
            actual: genus,
        });
    }
    let g = genus as i64;
    let c_exact = rint(1) + rat(39, 2) * rint(3 * g - 1) * rint(2 * g - 1);
    let c_round = rint(20) * rint(3 * g - 1) * rint(2 * g - 1);
    assert!(
        c_exact <= c_round,
        "exact multiplier must not exceed the rounded one"
    );
    let coefficient = rint(12) / c_round.clone();
    assert_eq!(coefficient, fiberwise_constant(genus)?);
    Ok(EliminationConstants {
        c_exact,
        c_round,
        coefficient,
    })
}

/// The non-isotriviality height floor: 3^(-4 g^2), except 4^(-4 g^2) in
/// characteristic 3 (the level structure must avoid the characteristic).
pub fn isotriviality_floor(genus: u64, characteristic: u64) -> Result<Rational> {
    if genus < 2 {
        return Err(Error::GenusTooSmall {
            required: 2,
            actual: genus,
        });
    }
    let base: u64 = if characteristic == 3 { 4 } else { 3 };
    let exponent = 4 * (genus as u32) * (genus as u32);
    let denom = BigInt::from(base).pow(exponent);
    Ok(Rational::new(BigInt::one(), denom))
}

/// Parses a ledger file; graph paths are relative to the ledger's directory.
pub fn parse_ledger(path: &Path) -> Result<CurveLedger> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_ledger_text(&text, base)
}

/// Parses the ledger format, loading each place graph from `base`.
pub fn parse_ledger_text(text: &str, base: &Path) -> Result<CurveLedger> {
    let mut header: Option<(u64, Rational)> = None;
    let mut places = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields[0] {
            "ledger" => {
                if fields.len() != 3 {
                    return Err(Error::Parse {
                        line,
                        message: "expected `ledger g=<int> deg_lambda=<p>/<q>`".into(),
                    });
                }
                let g = fields[1]
                    .strip_prefix("g=")
                    .and_then(|v| v.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: "expected `g=<non-negative integer>`".into(),
                    })?;
                let deg_lambda = fields[2]
                    .strip_prefix("deg_lambda=")
                    .and_then(parse_rational)
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: "expected `deg_lambda=<p>/<q>`".into(),
                    })?;
                header = Some((g, deg_lambda));
            }
            "place" => {
                if fields.len() != 4 {
                    return Err(Error::Parse {
                        line,
                        message: "expected `place <name> weight=<p>/<q> graph=<path>`".into(),
                    });
                }
                let name = fields[1].to_string();
                let weight = fields[2]
                    .strip_prefix("weight=")
                    .and_then(parse_rational)
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: "expected `weight=<p>/<q>`".into(),
                    })?;
                let rel = fields[3]
                    .strip_prefix("graph=")
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: "expected `graph=<path>`".into(),
                    })?;
                let graph_text = std::fs::read_to_string(base.join(rel))?;
                let graph = parse_graph(&graph_text)?;
                places.push(Place {
                    name,
                    weight,
                    graph,
                });
            }
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown directive `{other}`"),
                });
            }
        }
    }
    let (genus, deg_lambda) = header.ok_or_else(|| Error::Parse {
        line: 1,
        message: "missing `ledger` header line".into(),
    })?;
    CurveLedger::new(genus, deg_lambda, places)
}
