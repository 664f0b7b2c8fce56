//! The canonical measure and its Green's function, exactly.
//!
//! A [`Measure`] is a finite combination of vertex point masses and uniform
//! densities on edges. For a graph of genus g >= 1 the canonical measure
//! puts mass g_v / g on each vertex and (1/g) L_e / (L_e + r_e) on each edge,
//! where r_e is the cut resistance of the edge (bridges contribute 0, loops
//! contribute the full 1/g share). Its total mass is exactly 1; this is
//! asserted, not trusted.
//!
//! The Green's function g(x, y) of a mass-1 measure solves, in the second
//! argument, a piecewise-quadratic vertex-flux problem: on every edge the
//! second derivative equals the measure's density there, at every vertex the
//! outgoing derivatives balance the point mass, and the integral of g
//! against the measure vanishes. Everything is solved over exact rationals;
//! interior points are handled by subdividing first.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::circuit::{cut_resistance, CutResistance, GroundedSystem};
use crate::error::{Error, Result};
use crate::graph::{Divisor, MetrizedGraph, PointRef, Subdivision};
use crate::rational::{format_rational, rat, Rational};

/// A signed measure: point masses at vertices plus uniformly spread edge
/// masses (the stored number is the edge's total mass).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Measure {
    pub point_masses: BTreeMap<String, Rational>,
    pub edge_masses: BTreeMap<String, Rational>,
}

impl Measure {
    pub fn total_mass(&self) -> Rational {
        let p: Rational = self.point_masses.values().cloned().sum();
        let e: Rational = self.edge_masses.values().cloned().sum();
        p + e
    }

    pub fn point_mass(&self, vertex: &str) -> Rational {
        self.point_masses
            .get(vertex)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn edge_mass(&self, edge: &str) -> Rational {
        self.edge_masses
            .get(edge)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Point masses of an integer divisor.
    pub fn from_divisor(divisor: &Divisor) -> Measure {
        Measure {
            point_masses: divisor
                .coefficients
                .iter()
                .map(|(v, &k)| (v.clone(), Rational::from_integer(k.into())))
                .collect(),
            edge_masses: BTreeMap::new(),
        }
    }

    pub fn scaled(&self, factor: &Rational) -> Measure {
        let scale = |m: &BTreeMap<String, Rational>| {
            m.iter()
                .map(|(k, v)| (k.clone(), v.clone() * factor.clone()))
                .collect()
        };
        Measure {
            point_masses: scale(&self.point_masses),
            edge_masses: scale(&self.edge_masses),
        }
    }

    pub fn plus(&self, other: &Measure) -> Measure {
        let mut out = self.clone();
        for (k, v) in &other.point_masses {
            *out.point_masses
                .entry(k.clone())
                .or_insert_with(Rational::zero) += v.clone();
        }
        for (k, v) in &other.edge_masses {
            *out.edge_masses
                .entry(k.clone())
                .or_insert_with(Rational::zero) += v.clone();
        }
        out
    }

    pub fn minus(&self, other: &Measure) -> Measure {
        self.plus(&other.scaled(&-Rational::one()))
    }

    /// Carries the measure through a subdivision: vertex masses stay, edge
    /// masses split across segments in proportion to segment length.
    pub fn transport(&self, sub: &Subdivision, original: &MetrizedGraph) -> Measure {
        let mut out = Measure {
            point_masses: self.point_masses.clone(),
            edge_masses: BTreeMap::new(),
        };
        for (edge_id, mass) in &self.edge_masses {
            match sub.record(edge_id) {
                None => {
                    out.edge_masses.insert(edge_id.clone(), mass.clone());
                }
                Some(split) => {
                    let total = original.edges()[original.edge_lookup(edge_id).unwrap()]
                        .length
                        .clone();
                    for (k, seg) in split.segment_ids.iter().enumerate() {
                        let seg_len = split.stops[k + 1].clone() - split.stops[k].clone();
                        out.edge_masses
                            .insert(seg.clone(), mass.clone() * seg_len / total.clone());
                    }
                }
            }
        }
        out
    }
}

/// q(t) = a + b t + c t^2 along an edge coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadratic {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Quadratic {
    pub fn constant(a: Rational) -> Self {
        Quadratic {
            a,
            b: Rational::zero(),
            c: Rational::zero(),
        }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.a.clone() + self.b.clone() * t.clone() + self.c.clone() * t.clone() * t.clone()
    }

    /// Mean value over [0, L]: a + b L/2 + c L^2 / 3.
    pub fn average(&self, length: &Rational) -> Rational {
        self.a.clone()
            + self.b.clone() * length.clone() / rat(2, 1)
            + self.c.clone() * length.clone() * length.clone() / rat(3, 1)
    }

    /// The unique quadratic through three points with distinct abscissae.
    pub fn through(points: [(Rational, Rational); 3]) -> Quadratic {
        let [(x0, y0), (x1, y1), (x2, y2)] = points;
        // Divided differences.
        let d01 = (y1.clone() - y0.clone()) / (x1.clone() - x0.clone());
        let d12 = (y2.clone() - y1.clone()) / (x2.clone() - x1.clone());
        let c = (d12 - d01.clone()) / (x2.clone() - x0.clone());
        let b = d01 - c.clone() * (x0.clone() + x1.clone());
        let a = y0 - b.clone() * x0.clone() - c.clone() * x0.clone() * x0.clone();
        Quadratic { a, b, c }
    }
}

/// A function given by vertex values and one quadratic per edge.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PiecewiseQuadratic {
    pub vertex_values: BTreeMap<String, Rational>,
    pub edge_quadratics: BTreeMap<String, Quadratic>,
}

/// The canonical measure of a graph of genus >= 1. Mass 1 exactly.
pub fn canonical_measure(graph: &MetrizedGraph) -> Result<Measure> {
    let g = graph.genus();
    if g < 1 {
        return Err(Error::GenusTooSmall {
            required: 1,
            actual: g,
        });
    }
    let g_rat = Rational::from_integer(g.into());
    let mut measure = Measure::default();
    for v in graph.vertices() {
        if v.genus > 0 {
            measure.point_masses.insert(
                v.id.clone(),
                Rational::from_integer(v.genus.into()) / g_rat.clone(),
            );
        }
    }
    for e in graph.edges() {
        let coefficient = match cut_resistance(graph, &e.id)? {
            CutResistance::Infinite => Rational::zero(),
            CutResistance::Finite(r) => e.length.clone() / (e.length.clone() + r),
        };
        if !coefficient.is_zero() {
            measure
                .edge_masses
                .insert(e.id.clone(), coefficient / g_rat.clone());
        }
    }
    assert!(
        measure.total_mass().is_one(),
        "canonical measure must have total mass 1"
    );
    Ok(measure)
}

/// Per-edge quadratics of the solution determined by vertex values: the
/// curvature comes from the measure density, the slope from the endpoint
/// difference.
fn quadratics_from_vertex_values(
    graph: &MetrizedGraph,
    mu: &Measure,
    values: &[Rational],
) -> BTreeMap<String, Quadratic> {
    let mut out = BTreeMap::new();
    for e in graph.edges() {
        let c = mu.edge_mass(&e.id) / (rat(2, 1) * e.length.clone());
        let a = values[e.from].clone();
        let b = (values[e.to].clone() - values[e.from].clone()) / e.length.clone()
            - c.clone() * e.length.clone();
        out.insert(e.id.clone(), Quadratic { a, b, c });
    }
    out
}

/// Integrates a piecewise-quadratic function against a measure:
/// vertex values weigh the point masses, edge averages weigh the edge
/// masses. Exact.
pub fn integrate(graph: &MetrizedGraph, f: &PiecewiseQuadratic, m: &Measure) -> Result<Rational> {
    let mut total = Rational::zero();
    for (v, mass) in &m.point_masses {
        if mass.is_zero() {
            continue;
        }
        graph.vertex_lookup(v)?;
        let value = f
            .vertex_values
            .get(v)
            .ok_or_else(|| Error::MissingVertexValue(v.clone()))?;
        total += value.clone() * mass.clone();
    }
    for (e, mass) in &m.edge_masses {
        if mass.is_zero() {
            continue;
        }
        let ei = graph.edge_lookup(e)?;
        let q = f
            .edge_quadratics
            .get(e)
            .ok_or_else(|| Error::MissingEdgeData(e.clone()))?;
        total += mass.clone() * q.average(&graph.edges()[ei].length);
    }
    Ok(total)
}

/// Shared solve: given the measure and a source vertex on `graph`, returns
/// the vertex values of the Green's function against the prepared system.
fn solve_vertex_values(
    graph: &MetrizedGraph,
    mu: &Measure,
    system: &GroundedSystem,
    source: usize,
) -> Vec<Rational> {
    let n = graph.vertex_count();
    // Net current at a vertex: the unit source, minus its point mass, plus
    // half an edge mass per incident half-edge (uniform density pulls
    // current out along the edge).
    let mut injection = vec![Rational::zero(); n];
    injection[source] += Rational::one();
    for v in graph.vertices() {
        let vi = graph.vertex_lookup(&v.id).unwrap();
        injection[vi] -= mu.point_mass(&v.id);
    }
    for e in graph.edges() {
        let half = mu.edge_mass(&e.id) / rat(2, 1);
        injection[e.from] -= half.clone();
        injection[e.to] -= half;
    }
    let phi = system.solve(&injection);
    // Shift so the integral against the measure vanishes.
    let quadratics = quadratics_from_vertex_values(graph, mu, &phi);
    let f = PiecewiseQuadratic {
        vertex_values: graph
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.clone(), phi[i].clone()))
            .collect(),
        edge_quadratics: quadratics,
    };
    let shift = -integrate(graph, &f, mu).expect("solution is defined everywhere");
    phi.into_iter().map(|p| p + shift.clone()).collect()
}

/// Exact Green's function for one source point.
///
/// The solution lives on a copy of the graph subdivided at the source when
/// the source is an interior point; [`GreenSolution::value_at`] accepts
/// points of the original graph and maps them through.
#[derive(Debug, Clone)]
pub struct GreenSolution {
    source: PointRef,
    subdivision: Subdivision,
    measure: Measure,
    vertex_values: BTreeMap<String, Rational>,
    edge_quadratics: BTreeMap<String, Quadratic>,
}

impl GreenSolution {
    /// The graph the solution is expressed on.
    pub fn graph(&self) -> &MetrizedGraph {
        &self.subdivision.graph
    }

    pub fn source(&self) -> &PointRef {
        &self.source
    }

    /// The measure transported to the solved graph.
    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn vertex_values(&self) -> &BTreeMap<String, Rational> {
        &self.vertex_values
    }

    pub fn edge_quadratics(&self) -> &BTreeMap<String, Quadratic> {
        &self.edge_quadratics
    }

    /// Evaluates at any point of the original graph, exactly.
    pub fn value_at(&self, point: &PointRef) -> Result<Rational> {
        match self.subdivision.map_point(point) {
            PointRef::Vertex(v) => self
                .vertex_values
                .get(&v)
                .cloned()
                .ok_or(Error::UnknownVertex(v)),
            PointRef::EdgePoint { edge, offset } => {
                let q = self
                    .edge_quadratics
                    .get(&edge)
                    .ok_or(Error::UnknownEdge(edge))?;
                Ok(q.eval(&offset))
            }
        }
    }

    /// The solution as a piecewise-quadratic function on the solved graph.
    pub fn as_piecewise(&self) -> PiecewiseQuadratic {
        PiecewiseQuadratic {
            vertex_values: self.vertex_values.clone(),
            edge_quadratics: self.edge_quadratics.clone(),
        }
    }

    /// Flux-balance residual at every vertex of the solved graph: the sum of
    /// outgoing derivatives plus (source indicator - point mass). All zero
    /// for a correct solution.
    pub fn flux_residuals(&self) -> BTreeMap<String, Rational> {
        let graph = self.graph();
        let source_vertex = match self.subdivision.map_point(&self.source) {
            PointRef::Vertex(v) => v,
            PointRef::EdgePoint { .. } => unreachable!("source becomes a vertex"),
        };
        let mut residuals: BTreeMap<String, Rational> = graph
            .vertices()
            .iter()
            .map(|v| {
                let target = if v.id == source_vertex {
                    Rational::one() - self.measure.point_mass(&v.id)
                } else {
                    -self.measure.point_mass(&v.id)
                };
                (v.id.clone(), target)
            })
            .collect();
        // -sum of directional derivatives must equal the target; add the
        // derivative sum and expect zero.
        for e in graph.edges() {
            let q = &self.edge_quadratics[&e.id];
            let from_id = graph.vertex_id(e.from).to_string();
            let to_id = graph.vertex_id(e.to).to_string();
            // derivative into the edge at t = 0 and at t = L
            let d_from = q.b.clone();
            let d_to = -(q.b.clone() + rat(2, 1) * q.c.clone() * e.length.clone());
            *residuals.get_mut(&from_id).unwrap() += d_from;
            *residuals.get_mut(&to_id).unwrap() += d_to;
        }
        residuals
    }

    /// The integral of the solution against its measure; zero when correct.
    pub fn normalization_residual(&self) -> Rational {
        integrate(self.graph(), &self.as_piecewise(), &self.measure)
            .expect("solution covers the measure's support")
    }
}

/// Solves the Green's function problem for a mass-1 measure and a source
/// point. Exact; errors if the measure's mass is not 1.
pub fn green_solve(graph: &MetrizedGraph, mu: &Measure, y: &PointRef) -> Result<GreenSolution> {
    if !mu.total_mass().is_one() {
        return Err(Error::MassNotOne(format_rational(&mu.total_mass())));
    }
    graph.check_point(y)?;
    let sub = graph.subdivide(std::slice::from_ref(y))?;
    let mu2 = mu.transport(&sub, graph);
    let source_vertex = match sub.map_point(y) {
        PointRef::Vertex(v) => sub.graph.vertex_lookup(&v)?,
        PointRef::EdgePoint { .. } => unreachable!("subdivision maps cuts to vertices"),
    };
    let system = GroundedSystem::new(&sub.graph, 0);
    let values = solve_vertex_values(&sub.graph, &mu2, &system, source_vertex);
    let quadratics = quadratics_from_vertex_values(&sub.graph, &mu2, &values);
    let vertex_values = sub
        .graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.id.clone(), values[i].clone()))
        .collect();
    Ok(GreenSolution {
        source: y.clone(),
        subdivision: sub,
        measure: mu2,
        vertex_values,
        edge_quadratics: quadratics,
    })
}

/// g(x, y), symmetric in its arguments.
pub fn green_value(
    graph: &MetrizedGraph,
    mu: &Measure,
    x: &PointRef,
    y: &PointRef,
) -> Result<Rational> {
    green_solve(graph, mu, y)?.value_at(x)
}

/// All pairwise Green values over a set of sample points, sharing one
/// subdivision and one matrix factorization across sources.
#[derive(Debug, Clone)]
pub struct GreenMatrix {
    pub points: Vec<PointRef>,
    sub: Subdivision,
    mu: Measure,
    vertex_of: Vec<usize>,
    /// Full vertex-value vector of g(., points[j]) on the refined graph.
    columns: Vec<Vec<Rational>>,
}

impl GreenMatrix {
    pub fn compute(graph: &MetrizedGraph, mu: &Measure, points: &[PointRef]) -> Result<Self> {
        if !mu.total_mass().is_one() {
            return Err(Error::MassNotOne(format_rational(&mu.total_mass())));
        }
        let sub = graph.subdivide(points)?;
        let mu2 = mu.transport(&sub, graph);
        let mut vertex_of = Vec::with_capacity(points.len());
        for p in points {
            match sub.map_point(p) {
                PointRef::Vertex(v) => vertex_of.push(sub.graph.vertex_lookup(&v)?),
                PointRef::EdgePoint { .. } => unreachable!("subdivision maps cuts to vertices"),
            }
        }
        let system = GroundedSystem::new(&sub.graph, 0);
        let columns = vertex_of
            .iter()
            .map(|&src| solve_vertex_values(&sub.graph, &mu2, &system, src))
            .collect();
        Ok(GreenMatrix {
            points: points.to_vec(),
            sub,
            mu: mu2,
            vertex_of,
            columns,
        })
    }

    /// The refined graph shared by all columns.
    pub fn graph(&self) -> &MetrizedGraph {
        &self.sub.graph
    }

    /// g(points[i], points[j]).
    pub fn value(&self, i: usize, j: usize) -> Rational {
        self.columns[j][self.vertex_of[i]].clone()
    }

    /// g(v, points[j]) for a vertex of the original graph.
    pub fn value_at_vertex(&self, vertex: &str, j: usize) -> Result<Rational> {
        let vi = self.sub.graph.vertex_lookup(vertex)?;
        Ok(self.columns[j][vi].clone())
    }

    /// The full solution for source `points[j]`, for residual checks.
    pub fn column_solution(&self, j: usize) -> GreenSolution {
        let values = &self.columns[j];
        let quadratics = quadratics_from_vertex_values(&self.sub.graph, &self.mu, values);
        GreenSolution {
            source: self.points[j].clone(),
            subdivision: self.sub.clone(),
            measure: self.mu.clone(),
            vertex_values: self
                .sub
                .graph
                .vertices()
                .iter()
                .enumerate()
                .map(|(i, v)| (v.id.clone(), values[i].clone()))
                .collect(),
            edge_quadratics: quadratics,
        }
    }
}

/// Diagonal d(t) = g(x_t, x_t) along one edge as an exact quadratic.
///
/// The quadratic is interpolated through the diagonal at offsets L/4, L/2,
/// 3L/4 and then verified at L/3; interpolation and check point are all
/// exact, so a silent non-quadratic diagonal cannot slip through.
pub fn green_diagonal(graph: &MetrizedGraph, mu: &Measure, edge_id: &str) -> Result<Quadratic> {
    let ei = graph.edge_lookup(edge_id)?;
    let length = graph.edges()[ei].length.clone();
    let offsets = [
        length.clone() / rat(4, 1),
        length.clone() / rat(2, 1),
        length.clone() * rat(3, 4),
        length.clone() / rat(3, 1),
    ];
    let points: Vec<PointRef> = offsets
        .iter()
        .map(|t| PointRef::edge_point(edge_id, t.clone()))
        .collect();
    let matrix = GreenMatrix::compute(graph, mu, &points)?;
    let q = Quadratic::through([
        (offsets[0].clone(), matrix.value(0, 0)),
        (offsets[1].clone(), matrix.value(1, 1)),
        (offsets[2].clone(), matrix.value(2, 2)),
    ]);
    assert_eq!(
        q.eval(&offsets[3]),
        matrix.value(3, 3),
        "diagonal of the Green's function must be quadratic along an edge"
    );
    Ok(q)
}

/// The diagonal x -> g(x, x) over the whole graph: exact values at vertices
/// plus one verified quadratic per edge.
pub fn diagonal_function(graph: &MetrizedGraph, mu: &Measure) -> Result<PiecewiseQuadratic> {
    let mut f = PiecewiseQuadratic::default();
    for v in graph.vertices() {
        let p = PointRef::vertex(v.id.clone());
        let value = green_value(graph, mu, &p, &p)?;
        f.vertex_values.insert(v.id.clone(), value);
    }
    for e in graph.edges() {
        f.edge_quadratics
            .insert(e.id.clone(), green_diagonal(graph, mu, &e.id)?);
    }
    Ok(f)
}

/// Deterministic exact sample points: every vertex, then interior offsets at
/// simple fractions of each edge until at least `min_count` points exist (or
/// the fraction pool is exhausted).
pub fn sample_points(graph: &MetrizedGraph, min_count: usize) -> Vec<PointRef> {
    let mut points: Vec<PointRef> = graph
        .vertices()
        .iter()
        .map(|v| PointRef::vertex(v.id.clone()))
        .collect();
    let fraction_pool: &[(i64, i64)] = &[
        (1, 4),
        (1, 3),
        (1, 2),
        (2, 3),
        (3, 4),
        (1, 5),
        (2, 5),
        (3, 5),
        (4, 5),
        (1, 7),
        (2, 7),
        (3, 7),
        (4, 7),
        (5, 7),
        (6, 7),
    ];
    let base = 5usize;
    let mut used = base;
    loop {
        points.truncate(graph.vertex_count());
        for e in graph.edges() {
            for &(p, q) in &fraction_pool[..used] {
                points.push(PointRef::edge_point(
                    e.id.clone(),
                    e.length.clone() * rat(p, q),
                ));
            }
        }
        if points.len() >= min_count || used == fraction_pool.len() || graph.edge_count() == 0 {
            return points;
        }
        used = (used + 2).min(fraction_pool.len());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_graph, MetrizedGraph, Vertex};
    use crate::rational::rint;

    fn dumbbell(length: Rational) -> MetrizedGraph {
        MetrizedGraph::new(
            vec![
                Vertex {
                    id: "u".into(),
                    genus: 1,
                },
                Vertex {
                    id: "w".into(),
                    genus: 1,
                },
            ],
            vec![("b".into(), "u".into(), "w".into(), length)],
        )
        .unwrap()
    }

    fn circle(length: Rational) -> MetrizedGraph {
        MetrizedGraph::new(
            vec![Vertex {
                id: "v".into(),
                genus: 1,
            }],
            vec![("loop0".into(), "v".into(), "v".into(), length)],
        )
        .unwrap()
    }

    fn theta() -> MetrizedGraph {
        parse_graph(
            "vertex u genus=0\nvertex w genus=0\n\
             edge a u w length=1\nedge b u w length=1\nedge c u w length=1\n",
        )
        .unwrap()
    }

    #[test]
    fn canonical_measure_single_vertex() {
        let g = MetrizedGraph::new(
            vec![Vertex {
                id: "v".into(),
                genus: 2,
            }],
            vec![],
        )
        .unwrap();
        let mu = canonical_measure(&g).unwrap();
        assert_eq!(mu.point_mass("v"), rint(1));
        assert!(mu.edge_masses.is_empty());
    }

    #[test]
    fn canonical_measure_dumbbell_and_theta() {
        let mu = canonical_measure(&dumbbell(rint(1))).unwrap();
        assert_eq!(mu.point_mass("u"), rat(1, 2));
        assert_eq!(mu.point_mass("w"), rat(1, 2));
        assert_eq!(mu.edge_mass("b"), rint(0));

        let mu = canonical_measure(&theta()).unwrap();
        for e in ["a", "b", "c"] {
            assert_eq!(mu.edge_mass(e), rat(1, 3));
        }
        assert!(mu.point_masses.is_empty());
        assert_eq!(mu.total_mass(), rint(1));
    }

    #[test]
    fn canonical_measure_rejects_genus_zero() {
        let g = parse_graph("vertex a genus=0\nvertex b genus=0\nedge e a b length=1\n").unwrap();
        assert!(matches!(
            canonical_measure(&g),
            Err(Error::GenusTooSmall { .. })
        ));
    }

    #[test]
    fn dumbbell_green_closed_form() {
        // g(x, u) = L/4 - x/2 along the bridge; g(u,u) = L/4, g(w,u) = -L/4.
        let length = rat(3, 2);
        let graph = dumbbell(length.clone());
        let mu = canonical_measure(&graph).unwrap();
        let u = PointRef::vertex("u");
        let w = PointRef::vertex("w");
        let solution = green_solve(&graph, &mu, &u).unwrap();
        assert_eq!(solution.value_at(&u).unwrap(), length.clone() / rat(4, 1));
        assert_eq!(solution.value_at(&w).unwrap(), -length.clone() / rat(4, 1));
        let t = rat(1, 3);
        let expected = length.clone() / rat(4, 1) - t.clone() / rat(2, 1);
        assert_eq!(
            solution
                .value_at(&PointRef::edge_point("b", t.clone()))
                .unwrap(),
            expected
        );
        // defining conditions hold exactly
        assert!(solution.flux_residuals().values().all(|r| r.is_zero()));
        assert_eq!(solution.normalization_residual(), rint(0));
    }

    #[test]
    fn circle_green_closed_form() {
        // g(x, v) = L/48 - x/4 + x^2/(4L); g(v, v) = L/48.
        let length = rint(2);
        let graph = circle(length.clone());
        let mu = canonical_measure(&graph).unwrap();
        let v = PointRef::vertex("v");
        let solution = green_solve(&graph, &mu, &v).unwrap();
        assert_eq!(solution.value_at(&v).unwrap(), length.clone() / rat(48, 1));
        for t in [rat(1, 2), rat(2, 3), rat(3, 2)] {
            let expected = length.clone() / rat(48, 1) - t.clone() / rat(4, 1)
                + t.clone() * t.clone() / (rat(4, 1) * length.clone());
            assert_eq!(
                solution
                    .value_at(&PointRef::edge_point("loop0", t.clone()))
                    .unwrap(),
                expected,
                "offset {t}"
            );
        }
        assert!(solution.flux_residuals().values().all(|r| r.is_zero()));
        assert_eq!(solution.normalization_residual(), rint(0));
    }

    #[test]
    fn green_rejects_wrong_mass() {
        let graph = theta();
        let mu = canonical_measure(&graph).unwrap().scaled(&rat(2, 1));
        let err = green_solve(&graph, &mu, &PointRef::vertex("u")).unwrap_err();
        assert!(matches!(err, Error::MassNotOne(_)));
    }

    #[test]
    fn green_value_is_symmetric() {
        let graph = theta();
        let mu = canonical_measure(&graph).unwrap();
        let x = PointRef::edge_point("a", rat(1, 3));
        let y = PointRef::edge_point("b", rat(1, 2));
        assert_eq!(
            green_value(&graph, &mu, &x, &y).unwrap(),
            green_value(&graph, &mu, &y, &x).unwrap()
        );
        let w = PointRef::vertex("w");
        assert_eq!(
            green_value(&graph, &mu, &x, &w).unwrap(),
            green_value(&graph, &mu, &w, &x).unwrap()
        );
    }

    #[test]
    fn dumbbell_diagonal_is_constant() {
        let graph = dumbbell(rint(1));
        let mu = canonical_measure(&graph).unwrap();
        let q = green_diagonal(&graph, &mu, "b").unwrap();
        assert_eq!(q, Quadratic::constant(rat(1, 4)));
    }

    #[test]
    fn circle_diagonal_quadratic() {
        let length = rint(1);
        let graph = circle(length.clone());
        let mu = canonical_measure(&graph).unwrap();
        let q = green_diagonal(&graph, &mu, "loop0").unwrap();
        // d(t) = L/48 + t/2 - t^2/(2L)
        assert_eq!(q.a, rat(1, 48));
        assert_eq!(q.b, rat(1, 2));
        assert_eq!(q.c, rat(-1, 2));
    }

    #[test]
    fn integrate_basics() {
        let graph = dumbbell(rint(1));
        // f == 1 against a mass-1 measure
        let mu = canonical_measure(&graph).unwrap();
        let ones = PiecewiseQuadratic {
            vertex_values: [("u".into(), rint(1)), ("w".into(), rint(1))].into(),
            edge_quadratics: [("b".into(), Quadratic::constant(rint(1)))].into(),
        };
        assert_eq!(integrate(&graph, &ones, &mu).unwrap(), rint(1));

        // f(t) = t and f(t) = t^2 against unit mass spread on a unit edge
        let mut unit_edge = Measure::default();
        unit_edge.edge_masses.insert("b".into(), rint(1));
        let linear = PiecewiseQuadratic {
            vertex_values: BTreeMap::new(),
            edge_quadratics: [(
                "b".into(),
                Quadratic {
                    a: rint(0),
                    b: rint(1),
                    c: rint(0),
                },
            )]
            .into(),
        };
        assert_eq!(integrate(&graph, &linear, &unit_edge).unwrap(), rat(1, 2));
        let square = PiecewiseQuadratic {
            vertex_values: BTreeMap::new(),
            edge_quadratics: [(
                "b".into(),
                Quadratic {
                    a: rint(0),
                    b: rint(0),
                    c: rint(1),
                },
            )]
            .into(),
        };
        assert_eq!(integrate(&graph, &square, &unit_edge).unwrap(), rat(1, 3));
    }

    #[test]
    fn integrate_reports_missing_edge_data() {
        let graph = dumbbell(rint(1));
        let mut m = Measure::default();
        m.edge_masses.insert("b".into(), rint(1));
        let f = PiecewiseQuadratic::default();
        assert!(matches!(
            integrate(&graph, &f, &m),
            Err(Error::MissingEdgeData(_))
        ));
    }

    #[test]
    fn matrix_matches_single_solves() {
        let graph = theta();
        let mu = canonical_measure(&graph).unwrap();
        let points = sample_points(&graph, 10);
        assert!(points.len() >= 10);
        let matrix = GreenMatrix::compute(&graph, &mu, &points).unwrap();
        for i in [0usize, 3, 7] {
            for j in [1usize, 4, 6] {
                let direct = green_value(&graph, &mu, &points[i], &points[j]).unwrap();
                assert_eq!(matrix.value(i, j), direct);
            }
        }
    }
}
