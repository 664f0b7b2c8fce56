//! Exact electrical-network computations on metrized graphs.
//!
//! Edges are resistors whose resistance equals their length. All solves run
//! over arbitrary-precision rationals, so identities like Foster's theorem
//! and the resistance triangle inequality can be asserted with zero
//! tolerance. Interior points are handled by subdividing first; there is a
//! single solve path.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{MetrizedGraph, PointRef};
use crate::rational::Rational;

/// Vertex potentials of a flow solve; the grounded vertex is exactly 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialVector {
    pub values: BTreeMap<String, Rational>,
}

impl PotentialVector {
    pub fn get(&self, vertex: &str) -> Result<&Rational> {
        self.values
            .get(vertex)
            .ok_or_else(|| Error::UnknownVertex(vertex.to_string()))
    }
}

/// Cut resistance of an edge: infinite exactly when the edge is a bridge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutResistance {
    Finite(Rational),
    Infinite,
}

/// Dense exact LU factorization with partial pivoting.
pub(crate) struct LuFactor {
    n: usize,
    lu: Vec<Vec<Rational>>,
    perm: Vec<usize>,
}

impl LuFactor {
    /// Factors a square matrix; returns `None` when singular. The grounded
    /// Laplacian of a connected graph is always non-singular.
    // index loops: row k is read while row r is written
    #[allow(clippy::needless_range_loop)]
    pub(crate) fn factor(mut a: Vec<Vec<Rational>>) -> Option<Self> {
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let pivot_row = (k..n).find(|&r| !a[r][k].is_zero())?;
            if pivot_row != k {
                a.swap(k, pivot_row);
                perm.swap(k, pivot_row);
            }
            let pivot = a[k][k].clone();
            for r in k + 1..n {
                if a[r][k].is_zero() {
                    continue;
                }
                let factor = a[r][k].clone() / pivot.clone();
                a[r][k] = factor.clone();
                for c in k + 1..n {
                    let delta = factor.clone() * a[k][c].clone();
                    a[r][c] -= delta;
                }
            }
        }
        Some(LuFactor { n, lu: a, perm })
    }

    pub(crate) fn solve(&self, b: &[Rational]) -> Vec<Rational> {
        assert_eq!(b.len(), self.n);
        let mut y: Vec<Rational> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for r in 1..self.n {
            for c in 0..r {
                if !self.lu[r][c].is_zero() {
                    let delta = self.lu[r][c].clone() * y[c].clone();
                    y[r] -= delta;
                }
            }
        }
        for r in (0..self.n).rev() {
            for c in r + 1..self.n {
                if !self.lu[r][c].is_zero() {
                    let delta = self.lu[r][c].clone() * y[c].clone();
                    y[r] -= delta;
                }
            }
            y[r] /= self.lu[r][r].clone();
        }
        y
    }
}

/// A factored Kirchhoff system with one vertex grounded; supports many
/// right-hand sides against one factorization.
pub struct GroundedSystem {
    ground: usize,
    /// Position of each vertex in the reduced system; `usize::MAX` = ground.
    slot: Vec<usize>,
    factor: Option<LuFactor>,
}

impl GroundedSystem {
    pub fn new(graph: &MetrizedGraph, ground: usize) -> Self {
        let n = graph.vertex_count();
        let mut slot = vec![usize::MAX; n];
        let mut next = 0;
        for (v, s) in slot.iter_mut().enumerate() {
            if v != ground {
                *s = next;
                next += 1;
            }
        }
        let m = n - 1;
        let mut a = vec![vec![Rational::zero(); m]; m];
        for e in graph.edges() {
            if e.from == e.to {
                continue; // loops carry no net conductance between vertices
            }
            let c = Rational::one() / e.length.clone();
            for (x, y) in [(e.from, e.to), (e.to, e.from)] {
                if slot[x] != usize::MAX {
                    a[slot[x]][slot[x]] += c.clone();
                    if slot[y] != usize::MAX {
                        a[slot[x]][slot[y]] -= c.clone();
                    }
                }
            }
        }
        let factor = if m == 0 {
            None
        } else {
            Some(LuFactor::factor(a).expect("grounded Laplacian of a connected graph is regular"))
        };
        GroundedSystem {
            ground,
            slot,
            factor,
        }
    }

    /// Solves for the potential with the given net current injection per
    /// vertex (indexed like the graph's vertex list). The injection at the
    /// ground vertex is implied by balance and ignored.
    pub fn solve(&self, injection: &[Rational]) -> Vec<Rational> {
        let n = self.slot.len();
        let mut rhs = vec![Rational::zero(); n.saturating_sub(1)];
        for v in 0..n {
            if self.slot[v] != usize::MAX {
                rhs[self.slot[v]] = injection[v].clone();
            }
        }
        let reduced = match &self.factor {
            Some(f) => f.solve(&rhs),
            None => Vec::new(),
        };
        let mut out = vec![Rational::zero(); n];
        for v in 0..n {
            if v != self.ground {
                out[v] = reduced[self.slot[v]].clone();
            }
        }
        out
    }
}

/// Solves the Kirchhoff problem `L phi = sources` exactly, grounding the
/// named vertex at 0. Sources must sum to zero.
pub fn solve_flow(
    graph: &MetrizedGraph,
    sources: &BTreeMap<String, Rational>,
    ground: &str,
) -> Result<PotentialVector> {
    let ground_index = graph.vertex_lookup(ground)?;
    let mut injection = vec![Rational::zero(); graph.vertex_count()];
    let mut total = Rational::zero();
    for (id, current) in sources {
        let vi = graph.vertex_lookup(id)?;
        injection[vi] += current.clone();
        total += current.clone();
    }
    if !total.is_zero() {
        return Err(Error::UnbalancedSources);
    }
    let system = GroundedSystem::new(graph, ground_index);
    let phi = system.solve(&injection);
    let values = graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.id.clone(), phi[i].clone()))
        .collect();
    Ok(PotentialVector { values })
}

/// Reduces a point problem to a vertex problem: subdivides at every interior
/// point and returns the refined graph plus the vertex index of each input.
fn at_vertices(graph: &MetrizedGraph, points: &[&PointRef]) -> Result<(MetrizedGraph, Vec<usize>)> {
    let owned: Vec<PointRef> = points.iter().map(|p| (*p).clone()).collect();
    let sub = graph.subdivide(&owned)?;
    let mut indices = Vec::with_capacity(points.len());
    for p in &owned {
        match sub.map_point(p) {
            PointRef::Vertex(v) => indices.push(sub.graph.vertex_lookup(&v)?),
            PointRef::EdgePoint { .. } => unreachable!("subdivision maps cuts to vertices"),
        }
    }
    Ok((sub.graph, indices))
}

/// The j-function j_zeta(x, y): potential at `x` when unit current enters at
/// `y` and exits at `zeta`, grounded so the value at `zeta` is 0.
pub fn j_function(
    graph: &MetrizedGraph,
    zeta: &PointRef,
    y: &PointRef,
    x: &PointRef,
) -> Result<Rational> {
    let (refined, idx) = at_vertices(graph, &[zeta, y, x])?;
    let (zi, yi, xi) = (idx[0], idx[1], idx[2]);
    if zi == yi {
        return Ok(Rational::zero());
    }
    let mut injection = vec![Rational::zero(); refined.vertex_count()];
    injection[yi] += Rational::one();
    injection[zi] -= Rational::one();
    let system = GroundedSystem::new(&refined, zi);
    let phi = system.solve(&injection);
    Ok(phi[xi].clone())
}

/// Effective resistance r(x, y) = j_y(x, x).
pub fn resistance(graph: &MetrizedGraph, x: &PointRef, y: &PointRef) -> Result<Rational> {
    j_function(graph, y, x, x)
}

/// Sum over edges of (full-graph endpoint resistance) / (edge length).
/// Equals |V| - 1 exactly on every connected graph.
pub fn foster_sum(graph: &MetrizedGraph) -> Result<Rational> {
    let mut total = Rational::zero();
    if graph.edge_count() == 0 {
        return Ok(total);
    }
    let matrix = resistance_matrix(
        graph,
        &graph
            .vertices()
            .iter()
            .map(|v| PointRef::vertex(v.id.clone()))
            .collect::<Vec<_>>(),
    )?;
    for e in graph.edges() {
        if e.from == e.to {
            continue;
        }
        total += matrix.value(e.from, e.to).clone() / e.length.clone();
    }
    Ok(total)
}

/// Resistance between the endpoints of `edge` in the graph with that edge's
/// interior deleted. Infinite exactly for bridges, zero for loops.
pub fn cut_resistance(graph: &MetrizedGraph, edge_id: &str) -> Result<CutResistance> {
    let ei = graph.edge_lookup(edge_id)?;
    let edge = &graph.edges()[ei];
    if edge.from == edge.to {
        return Ok(CutResistance::Finite(Rational::zero()));
    }
    if graph.is_bridge(ei) {
        return Ok(CutResistance::Infinite);
    }
    let vertices = graph.vertices().to_vec();
    let edges = graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != ei)
        .map(|(_, e)| {
            (
                e.id.clone(),
                graph.vertex_id(e.from).to_string(),
                graph.vertex_id(e.to).to_string(),
                e.length.clone(),
            )
        })
        .collect();
    let cut = MetrizedGraph::new(vertices, edges)?;
    let r = resistance(
        &cut,
        &PointRef::vertex(graph.vertex_id(edge.from)),
        &PointRef::vertex(graph.vertex_id(edge.to)),
    )?;
    Ok(CutResistance::Finite(r))
}

/// All pairwise effective resistances among a set of sample points, computed
/// from a single factorization.
pub struct ResistanceMatrix {
    pub points: Vec<PointRef>,
    values: Vec<Vec<Rational>>,
}

impl ResistanceMatrix {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn value(&self, i: usize, j: usize) -> &Rational {
        &self.values[i][j]
    }
}

/// Computes the resistance matrix of the given points by subdividing once
/// and solving one unit-current problem per point against a shared
/// factorization.
pub fn resistance_matrix(graph: &MetrizedGraph, points: &[PointRef]) -> Result<ResistanceMatrix> {
    let refs: Vec<&PointRef> = points.iter().collect();
    let (refined, idx) = at_vertices(graph, &refs)?;
    let system = GroundedSystem::new(&refined, 0);
    // Columns of the grounded inverse for each distinct sample vertex.
    let mut columns: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
    for &vi in &idx {
        if columns.contains_key(&vi) {
            continue;
        }
        let mut injection = vec![Rational::zero(); refined.vertex_count()];
        injection[vi] += Rational::one();
        // Balance the unit current at the ground vertex; the reduced system
        // only reads non-ground entries, so this is bookkeeping.
        injection[0] -= Rational::one();
        columns.insert(vi, system.solve(&injection));
    }
    let n = points.len();
    let mut values = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..i {
            let gi = &columns[&idx[i]];
            let gj = &columns[&idx[j]];
            // r(a, b) = G_aa - 2 G_ab + G_bb for the grounded inverse G.
            let r =
                gi[idx[i]].clone() - gi[idx[j]].clone() - gj[idx[i]].clone() + gj[idx[j]].clone();
            values[i][j] = r.clone();
            values[j][i] = r;
        }
    }
    Ok(ResistanceMatrix {
        points: points.to_vec(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_graph, MetrizedGraph, Vertex};
    use crate::rational::{rat, rint};

    fn path(length: Rational) -> MetrizedGraph {
        MetrizedGraph::new(
            vec![
                Vertex {
                    id: "u".into(),
                    genus: 0,
                },
                Vertex {
                    id: "w".into(),
                    genus: 0,
                },
            ],
            vec![("e".into(), "u".into(), "w".into(), length)],
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

    #[test]
    fn ohms_law_on_single_resistor() {
        let g = path(rat(7, 3));
        let mut sources = BTreeMap::new();
        sources.insert("u".to_string(), rint(1));
        sources.insert("w".to_string(), rint(-1));
        let phi = solve_flow(&g, &sources, "w").unwrap();
        assert_eq!(phi.get("u").unwrap(), &rat(7, 3));
        assert_eq!(phi.get("w").unwrap(), &rint(0));
    }

    #[test]
    fn zero_sources_give_zero_potential() {
        let g = theta();
        let phi = solve_flow(&g, &BTreeMap::new(), "u").unwrap();
        assert!(phi.values.values().all(|v| v.is_zero()));
    }

    #[test]
    fn unbalanced_sources_rejected() {
        let g = path(rint(1));
        let mut sources = BTreeMap::new();
        sources.insert("u".to_string(), rint(1));
        let err = solve_flow(&g, &sources, "w").unwrap_err();
        assert!(matches!(err, Error::UnbalancedSources));
    }

    #[test]
    fn theta_parallel_resistors() {
        let g = theta();
        let mut sources = BTreeMap::new();
        sources.insert("u".to_string(), rint(1));
        sources.insert("w".to_string(), rint(-1));
        let phi = solve_flow(&g, &sources, "w").unwrap();
        assert_eq!(phi.get("u").unwrap(), &rat(1, 3));
    }

    #[test]
    fn j_function_identities() {
        let g = theta();
        let u = PointRef::vertex("u");
        let w = PointRef::vertex("w");
        let mid = PointRef::edge_point("a", rat(1, 2));
        // grounded point reads zero against any entry point
        assert_eq!(j_function(&g, &u, &w, &u).unwrap(), rint(0));
        assert_eq!(j_function(&g, &u, &mid, &u).unwrap(), rint(0));
        // j_zeta(x, x) = r(x, zeta)
        let j = j_function(&g, &w, &mid, &mid).unwrap();
        let r = resistance(&g, &mid, &w).unwrap();
        assert_eq!(j, r);
    }

    #[test]
    fn dumbbell_j_value() {
        let g = path(rat(5, 2));
        let u = PointRef::vertex("u");
        let w = PointRef::vertex("w");
        assert_eq!(j_function(&g, &w, &u, &u).unwrap(), rat(5, 2));
    }

    #[test]
    fn resistance_series_and_parallel() {
        // path of two segments: series law
        let g = parse_graph(
            "vertex a genus=0\nvertex b genus=0\nvertex c genus=0\n\
             edge e1 a b length=1/2\nedge e2 b c length=3/4\n",
        )
        .unwrap();
        let r = resistance(&g, &PointRef::vertex("a"), &PointRef::vertex("c")).unwrap();
        assert_eq!(r, rat(5, 4));

        // circle: r = d (L - d) / L
        let c = circle(rint(2));
        let x = PointRef::vertex("v");
        let y = PointRef::edge_point("loop0", rat(1, 2));
        let r = resistance(&c, &x, &y).unwrap();
        assert_eq!(r, rat(1, 2) * rat(3, 2) / rint(2));

        // theta: three unit resistors in parallel
        let t = theta();
        let r = resistance(&t, &PointRef::vertex("u"), &PointRef::vertex("w")).unwrap();
        assert_eq!(r, rat(1, 3));
    }

    #[test]
    fn resistance_is_symmetric_and_zero_on_diagonal() {
        let t = theta();
        let x = PointRef::edge_point("a", rat(1, 3));
        let y = PointRef::edge_point("b", rat(2, 3));
        assert_eq!(
            resistance(&t, &x, &y).unwrap(),
            resistance(&t, &y, &x).unwrap()
        );
        assert_eq!(resistance(&t, &x, &x).unwrap(), rint(0));
    }

    #[test]
    fn foster_examples() {
        // tree with k edges
        let tree = parse_graph(
            "vertex a genus=0\nvertex b genus=0\nvertex c genus=0\n\
             edge e1 a b length=2\nedge e2 b c length=1/3\n",
        )
        .unwrap();
        assert_eq!(foster_sum(&tree).unwrap(), rint(2));
        // theta: 1 = |V| - 1
        assert_eq!(foster_sum(&theta()).unwrap(), rint(1));
        // circle on one vertex: loop endpoints coincide
        assert_eq!(foster_sum(&circle(rint(1))).unwrap(), rint(0));
    }

    #[test]
    fn cut_resistance_examples() {
        let bridge = path(rint(1));
        assert_eq!(
            cut_resistance(&bridge, "e").unwrap(),
            CutResistance::Infinite
        );
        assert_eq!(
            cut_resistance(&circle(rint(1)), "loop0").unwrap(),
            CutResistance::Finite(rint(0))
        );
        assert_eq!(
            cut_resistance(&theta(), "a").unwrap(),
            CutResistance::Finite(rat(1, 2))
        );
        assert!(matches!(
            cut_resistance(&theta(), "zzz"),
            Err(Error::UnknownEdge(_))
        ));
    }

    #[test]
    fn resistance_matrix_agrees_with_direct_solves() {
        let t = theta();
        let points = vec![
            PointRef::vertex("u"),
            PointRef::vertex("w"),
            PointRef::edge_point("a", rat(1, 2)),
            PointRef::edge_point("c", rat(1, 4)),
        ];
        let m = resistance_matrix(&t, &points).unwrap();
        for i in 0..points.len() {
            for j in 0..points.len() {
                let direct = resistance(&t, &points[i], &points[j]).unwrap();
                assert_eq!(m.value(i, j), &direct, "pair {i},{j}");
            }
        }
    }
}
