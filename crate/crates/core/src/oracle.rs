//! Brute-force floating-point check of the exact Green solver.
//!
//! Every edge is chopped into N equal segments; the measure's edge mass is
//! lumped onto the grid (half a segment's share to each segment end), and
//! the resulting discrete flow problem is solved in f64. Values converge to
//! the exact solution as N grows, which is what the verification suite
//! checks; nothing here is used by the exact paths.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::graph::{MetrizedGraph, PointRef};
use crate::green::Measure;
use crate::rational::to_f64;

/// Approximate vertex values of the Green's function; explicitly labeled as
/// floating point.
#[derive(Debug, Clone)]
pub struct OracleValues {
    pub segments: u32,
    pub vertex_values: BTreeMap<String, f64>,
}

/// Sparse symmetric Gaussian elimination with a fixed order: chain nodes
/// first (each touches at most a couple of live neighbors), junction
/// vertices last. Deterministic; suitable for grids with a few junctions.
struct SparseElimination {
    rows: Vec<BTreeMap<usize, f64>>,
    rhs: Vec<f64>,
}

/// (node, pivot, live neighbors at elimination time, rhs at elimination time)
type EliminationStep = (usize, f64, Vec<(usize, f64)>, f64);

impl SparseElimination {
    fn new(n: usize) -> Self {
        SparseElimination {
            rows: vec![BTreeMap::new(); n],
            rhs: vec![0.0; n],
        }
    }

    fn add(&mut self, i: usize, j: usize, value: f64) {
        *self.rows[i].entry(j).or_insert(0.0) += value;
    }

    /// Solves with x[ground] = 0, eliminating in `order` (which must cover
    /// every node except the ground).
    fn solve(mut self, order: &[usize], ground: usize) -> Vec<f64> {
        let n = self.rows.len();
        let mut eliminated = vec![false; n];
        eliminated[ground] = true; // row dropped, value pinned to zero
        let mut trail: Vec<EliminationStep> = Vec::with_capacity(order.len());
        for &k in order {
            let pivot = self.rows[k][&k];
            let neighbors: Vec<(usize, f64)> = self.rows[k]
                .iter()
                .filter(|(&j, _)| j != k && !eliminated[j])
                .map(|(&j, &a)| (j, a))
                .collect();
            let bk = self.rhs[k];
            for &(i, aki) in &neighbors {
                let factor = aki / pivot;
                self.rhs[i] -= factor * bk;
                for &(j, akj) in &neighbors {
                    *self.rows[i].entry(j).or_insert(0.0) -= factor * akj;
                }
            }
            eliminated[k] = true;
            trail.push((k, pivot, neighbors, bk));
        }
        let mut x = vec![0.0; n];
        for (k, pivot, neighbors, bk) in trail.into_iter().rev() {
            let mut value = bk;
            for (j, akj) in neighbors {
                value -= akj * x[j];
            }
            x[k] = value / pivot;
        }
        x
    }
}

/// Discretized Green's function values at the graph's vertices.
///
/// `segments` is the number of equal pieces per edge (N >= 2 recommended).
/// The result is recentered so the discrete integral against the lumped
/// measure vanishes, matching the exact normalization.
pub fn discrete_oracle(
    graph: &MetrizedGraph,
    mu: &Measure,
    y: &PointRef,
    segments: u32,
) -> Result<OracleValues> {
    // Interior sources become vertices first, exactly.
    let sub = graph.subdivide(std::slice::from_ref(y))?;
    let refined = &sub.graph;
    let mu = mu.transport(&sub, graph);
    let source_vertex = match sub.map_point(y) {
        PointRef::Vertex(v) => refined.vertex_lookup(&v)?,
        PointRef::EdgePoint { .. } => unreachable!("subdivision maps cuts to vertices"),
    };

    let n_vertices = refined.vertex_count();
    let per_edge = segments.max(1) as usize;
    let total_nodes = n_vertices + refined.edge_count() * (per_edge - 1);
    let mut system = SparseElimination::new(total_nodes);
    let mut mass = vec![0.0; total_nodes];
    let mut order: Vec<usize> = Vec::with_capacity(total_nodes.saturating_sub(1));

    for v in refined.vertices() {
        let vi = refined.vertex_lookup(&v.id)?;
        mass[vi] += to_f64(&mu.point_mass(&v.id));
    }

    let mut next_node = n_vertices;
    for e in refined.edges() {
        let length = to_f64(&e.length);
        let conductance = per_edge as f64 / length;
        let edge_mass = to_f64(&mu.edge_mass(&e.id));
        let segment_mass = edge_mass / per_edge as f64;
        // chain: from, internal nodes, to
        let mut chain = Vec::with_capacity(per_edge + 1);
        chain.push(e.from);
        for _ in 0..per_edge - 1 {
            chain.push(next_node);
            order.push(next_node);
            next_node += 1;
        }
        chain.push(e.to);
        for k in 0..per_edge {
            let (a, b) = (chain[k], chain[k + 1]);
            system.add(a, a, conductance);
            system.add(b, b, conductance);
            system.add(a, b, -conductance);
            system.add(b, a, -conductance);
            mass[a] += segment_mass / 2.0;
            mass[b] += segment_mass / 2.0;
        }
    }

    // Junction vertices eliminate last; node 0 is the ground.
    for vi in 1..n_vertices {
        order.push(vi);
    }

    for (i, node_mass) in mass.iter().enumerate() {
        system.rhs[i] = -node_mass;
        if i == source_vertex {
            system.rhs[i] += 1.0;
        }
        // isolated single-vertex graph has an empty matrix row; pin it
        system.rows[i].entry(i).or_insert(1.0);
    }

    let phi = system.solve(&order, 0);
    let shift: f64 = -phi.iter().zip(mass.iter()).map(|(p, m)| p * m).sum::<f64>();

    let vertex_values = refined
        .vertices()
        .iter()
        .enumerate()
        .filter(|(_, v)| graph.has_vertex(&v.id))
        .map(|(i, v)| (v.id.clone(), phi[i] + shift))
        .collect();
    Ok(OracleValues {
        segments: per_edge as u32,
        vertex_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_graph, MetrizedGraph, Vertex};
    use crate::green::{canonical_measure, green_solve};
    use crate::rational::{rint, to_f64 as f64_of};

    fn dumbbell() -> MetrizedGraph {
        parse_graph("vertex u genus=1\nvertex w genus=1\nedge b u w length=1\n").unwrap()
    }

    fn circle(length: i64) -> MetrizedGraph {
        MetrizedGraph::new(
            vec![Vertex {
                id: "v".into(),
                genus: 1,
            }],
            vec![("loop0".into(), "v".into(), "v".into(), rint(length))],
        )
        .unwrap()
    }

    #[test]
    fn dumbbell_oracle_near_exact() {
        let graph = dumbbell();
        let mu = canonical_measure(&graph).unwrap();
        let y = PointRef::vertex("u");
        let oracle = discrete_oracle(&graph, &mu, &y, 64).unwrap();
        assert!((oracle.vertex_values["u"] - 0.25).abs() < 0.01);
        assert!((oracle.vertex_values["w"] + 0.25).abs() < 0.01);
    }

    #[test]
    fn circle_oracle_near_exact() {
        let graph = circle(1);
        let mu = canonical_measure(&graph).unwrap();
        let y = PointRef::vertex("v");
        let oracle = discrete_oracle(&graph, &mu, &y, 128).unwrap();
        assert!((oracle.vertex_values["v"] - 1.0 / 48.0).abs() < 0.01);
    }

    #[test]
    fn refinement_shrinks_error() {
        let graph = parse_graph(
            "vertex a genus=1\nvertex b genus=0\nvertex c genus=1\n\
             edge e1 a b length=1\nedge e2 b c length=2\nedge e3 a c length=1/2\n\
             edge e4 a a length=3\n",
        )
        .unwrap();
        let mu = canonical_measure(&graph).unwrap();
        let y = PointRef::vertex("a");
        let exact = green_solve(&graph, &mu, &y).unwrap();
        let error_at = |n: u32| -> f64 {
            let oracle = discrete_oracle(&graph, &mu, &y, n).unwrap();
            graph
                .vertices()
                .iter()
                .map(|v| {
                    let e = f64_of(&exact.value_at(&PointRef::vertex(v.id.clone())).unwrap());
                    (oracle.vertex_values[&v.id] - e).abs()
                })
                .fold(0.0, f64::max)
        };
        let coarse = error_at(64);
        let fine = error_at(128);
        assert!(coarse < 0.05, "coarse error {coarse}");
        assert!(fine <= 0.6 * coarse, "fine {fine} vs coarse {coarse}");
    }

    #[test]
    fn interior_source_is_supported() {
        let graph = dumbbell();
        let mu = canonical_measure(&graph).unwrap();
        let y = PointRef::edge_point("b", num::BigRational::new(1.into(), 2.into()));
        let exact = green_solve(&graph, &mu, &y).unwrap();
        let oracle = discrete_oracle(&graph, &mu, &y, 64).unwrap();
        for v in ["u", "w"] {
            let e = f64_of(&exact.value_at(&PointRef::vertex(v)).unwrap());
            assert!((oracle.vertex_values[v] - e).abs() < 0.01);
        }
    }
}
