//! Graph invariants: total length, the boundary lengths by edge type, and
//! the epsilon and phi invariants of the canonical measure.
//!
//! Epsilon is computed along two independent routes — the diagonal of the
//! Green's function integrated against (2g-2) mu + delta_K, and the double
//! integral of the resistance against delta_K x mu — and the two must agree
//! exactly. All inequality checks report exact rational margins.

use num::{Signed, Zero};
use serde::Serialize;

use crate::circuit::{foster_sum, resistance_matrix};
use crate::error::{Error, Result};
use crate::graph::{MetrizedGraph, PointRef};
use crate::green::{
    canonical_measure, diagonal_function, integrate, sample_points, Measure, PiecewiseQuadratic,
    Quadratic,
};
use crate::rational::{rat, rational_string, rational_vec_string, rint, Rational};

/// Total metric length of the graph.
pub fn total_length(graph: &MetrizedGraph) -> Rational {
    graph.total_length()
}

/// delta_i = total length of edges of type i, for i in 0..=g/2.
/// The entries sum to the total length: every edge has exactly one type.
pub fn delta_invariants(graph: &MetrizedGraph) -> Result<Vec<Rational>> {
    let g = require_genus(graph, 2)?;
    let mut delta = vec![Rational::zero(); (g / 2 + 1) as usize];
    for e in graph.edges() {
        let ty = graph.edge_type(&e.id)? as usize;
        delta[ty] += e.length.clone();
    }
    Ok(delta)
}

fn require_genus(graph: &MetrizedGraph, required: u64) -> Result<u64> {
    let g = graph.genus();
    if g < required {
        return Err(Error::GenusTooSmall {
            required,
            actual: g,
        });
    }
    Ok(g)
}

/// epsilon = integral of g(x, x) against (2g-2) mu + delta_K.
pub fn epsilon(graph: &MetrizedGraph) -> Result<Rational> {
    let g = require_genus(graph, 2)?;
    let mu = canonical_measure(graph)?;
    let diagonal = diagonal_function(graph, &mu)?;
    let weight = mu
        .scaled(&rint(2 * g as i64 - 2))
        .plus(&Measure::from_divisor(&graph.canonical_divisor()));
    integrate(graph, &diagonal, &weight)
}

/// epsilon again, via the resistance function: sum over vertices of
/// K_v times the integral of r(v, .) against mu. Independent of the Green
/// solver; r(v, .) is quadratic along each edge, which is interpolated at
/// three offsets and verified at a fourth.
pub fn epsilon_via_resistance(graph: &MetrizedGraph) -> Result<Rational> {
    require_genus(graph, 2)?;
    let mu = canonical_measure(graph)?;
    let divisor = graph.canonical_divisor();

    // One factorization: all vertices plus four offsets per edge.
    let mut points: Vec<PointRef> = graph
        .vertices()
        .iter()
        .map(|v| PointRef::vertex(v.id.clone()))
        .collect();
    let offsets = [rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 3)];
    for e in graph.edges() {
        for f in &offsets {
            points.push(PointRef::edge_point(
                e.id.clone(),
                e.length.clone() * f.clone(),
            ));
        }
    }
    let matrix = resistance_matrix(graph, &points)?;
    let nv = graph.vertex_count();

    let mut total = Rational::zero();
    for (vi, v) in graph.vertices().iter().enumerate() {
        let k = divisor.coefficient(&v.id);
        if k == 0 {
            continue;
        }
        let mut f = PiecewiseQuadratic::default();
        for (wi, w) in graph.vertices().iter().enumerate() {
            f.vertex_values
                .insert(w.id.clone(), matrix.value(vi, wi).clone());
        }
        for (eidx, e) in graph.edges().iter().enumerate() {
            let base = nv + 4 * eidx;
            let t = |k: usize| e.length.clone() * offsets[k].clone();
            let q = Quadratic::through([
                (t(0), matrix.value(vi, base).clone()),
                (t(1), matrix.value(vi, base + 1).clone()),
                (t(2), matrix.value(vi, base + 2).clone()),
            ]);
            assert_eq!(
                q.eval(&t(3)),
                matrix.value(vi, base + 3).clone(),
                "resistance from a vertex must be quadratic along an edge"
            );
            f.edge_quadratics.insert(e.id.clone(), q);
        }
        total += rint(k) * integrate(graph, &f, &mu)?;
    }
    Ok(total)
}

/// phi = -l/4 + (1/4) integral of g(x, x) against (10g+2) mu - delta_K.
pub fn phi(graph: &MetrizedGraph) -> Result<Rational> {
    let g = require_genus(graph, 2)?;
    let mu = canonical_measure(graph)?;
    let diagonal = diagonal_function(graph, &mu)?;
    let weight = mu
        .scaled(&rint(10 * g as i64 + 2))
        .minus(&Measure::from_divisor(&graph.canonical_divisor()));
    let integral = integrate(graph, &diagonal, &weight)?;
    Ok(-graph.total_length() / rat(4, 1) + integral / rat(4, 1))
}

/// One named check with its exact margin (the amount by which it holds).
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    #[serde(with = "rational_string")]
    pub margin: Rational,
}

impl CheckResult {
    fn nonnegative(name: &str, margin: Rational) -> Self {
        CheckResult {
            name: name.to_string(),
            pass: !margin.is_negative(),
            margin,
        }
    }

    fn exact_zero(name: &str, margin: Rational) -> Self {
        CheckResult {
            name: name.to_string(),
            pass: margin.is_zero(),
            margin,
        }
    }
}

/// Everything the invariants command reports for one graph.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub genus: u64,
    #[serde(with = "rational_string")]
    pub total_length: Rational,
    #[serde(with = "rational_vec_string")]
    pub delta: Vec<Rational>,
    #[serde(with = "rational_string")]
    pub epsilon: Rational,
    #[serde(with = "rational_string")]
    pub epsilon_alt: Rational,
    #[serde(with = "rational_string")]
    pub phi: Rational,
    pub checks: Vec<CheckResult>,
}

impl InvariantReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Spreads `want` picks over `total` items deterministically.
fn spread(total: usize, want: usize) -> Vec<usize> {
    if total <= want {
        return (0..total).collect();
    }
    (0..want).map(|k| k * total / want).collect()
}

/// Computes all invariants and runs every graph-level check with exact
/// margins. Requires genus >= 2. Check failures are reported, not thrown.
pub fn run_checks(graph: &MetrizedGraph) -> Result<InvariantReport> {
    let g = require_genus(graph, 2)?;
    let length = graph.total_length();
    let delta = delta_invariants(graph)?;
    let eps = epsilon(graph)?;
    let eps_alt = epsilon_via_resistance(graph)?;
    let phi_value = phi(graph)?;

    let mut checks = vec![
        CheckResult::nonnegative(
            "epsilon_le_(2g-2)length",
            rint(2 * g as i64 - 2) * length.clone() - eps.clone(),
        ),
        CheckResult::nonnegative("epsilon_nonnegative", eps.clone()),
        CheckResult::nonnegative(
            "39phi_ge_length",
            rint(39) * phi_value.clone() - length.clone(),
        ),
        CheckResult::exact_zero("epsilon_routes_agree", eps.clone() - eps_alt.clone()),
    ];
    let delta_sum: Rational = delta.iter().cloned().sum();
    checks.push(CheckResult::exact_zero(
        "delta_sum_eq_length",
        length.clone() - delta_sum,
    ));
    checks.push(CheckResult::exact_zero(
        "foster_identity",
        rint(graph.vertex_count() as i64 - 1) - foster_sum(graph)?,
    ));

    // Resistance bound and triangle inequality over spread samples.
    let points = sample_points(graph, 10);
    let matrix = resistance_matrix(graph, &points)?;
    let n = matrix.len();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    let mut bound_margin: Option<Rational> = None;
    for k in spread(pairs.len(), 100) {
        let (i, j) = pairs[k];
        let margin = length.clone() - matrix.value(i, j).clone();
        if bound_margin.as_ref().is_none_or(|m| margin < *m) {
            bound_margin = Some(margin);
        }
    }
    checks.push(CheckResult::nonnegative(
        "resistance_le_length",
        bound_margin.unwrap_or_else(Rational::zero),
    ));

    let mut triples: Vec<(usize, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                triples.push((i, j, k));
            }
        }
    }
    let mut triangle_margin: Option<Rational> = None;
    for t in spread(triples.len(), 100) {
        let (i, j, k) = triples[t];
        // all three rotations of the triangle inequality
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            let margin = matrix.value(a, c).clone() + matrix.value(c, b).clone()
                - matrix.value(a, b).clone();
            if triangle_margin.as_ref().is_none_or(|m| margin < *m) {
                triangle_margin = Some(margin);
            }
        }
    }
    checks.push(CheckResult::nonnegative(
        "resistance_triangle",
        triangle_margin.unwrap_or_else(Rational::zero),
    ));

    Ok(InvariantReport {
        genus: g,
        total_length: length,
        delta,
        epsilon: eps,
        epsilon_alt: eps_alt,
        phi: phi_value,
        checks,
    })
}
