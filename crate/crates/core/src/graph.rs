//! Metrized graphs: vertices with genus marks, edges with positive rational
//! lengths. Loops and parallel edges are allowed; the graph must be connected.
//!
//! The text format is line oriented so files diff cleanly and rationals
//! survive round-trips exactly:
//!
//! ```text
//! # comment
//! vertex <id> genus=<n>
//! edge <id> <vertex-id> <vertex-id> length=<p>/<q>
//! ```
//!
//! Identifiers match `[A-Za-z0-9_]+`; vertices must be declared before the
//! edges that use them.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub genus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    /// Endpoint indices into the vertex list; equal for loops.
    pub from: usize,
    pub to: usize,
    pub length: Rational,
}

/// A connected metrized graph. Immutable after construction: all operations
/// that change the shape return a new graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetrizedGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    vertex_index: BTreeMap<String, usize>,
    edge_index: BTreeMap<String, usize>,
}

/// A point of the metrized graph: a vertex, or an interior point of an edge
/// at a strictly interior offset from the edge's first endpoint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointRef {
    Vertex(String),
    EdgePoint { edge: String, offset: Rational },
}

impl PointRef {
    pub fn vertex(id: impl Into<String>) -> Self {
        PointRef::Vertex(id.into())
    }

    pub fn edge_point(edge: impl Into<String>, offset: Rational) -> Self {
        PointRef::EdgePoint {
            edge: edge.into(),
            offset,
        }
    }
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointRef::Vertex(v) => write!(f, "vertex:{v}"),
            PointRef::EdgePoint { edge, offset } => {
                write!(f, "edge:{edge}@{}", format_rational(offset))
            }
        }
    }
}

/// Integer divisor supported on the vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Divisor {
    pub coefficients: BTreeMap<String, i64>,
}

impl Divisor {
    pub fn degree(&self) -> i64 {
        self.coefficients.values().sum()
    }

    pub fn coefficient(&self, vertex: &str) -> i64 {
        self.coefficients.get(vertex).copied().unwrap_or(0)
    }
}

fn valid_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl MetrizedGraph {
    /// Builds and validates a graph. Rejects empty, disconnected graphs,
    /// non-positive lengths and duplicate ids.
    pub fn new(
        vertices: Vec<Vertex>,
        edges: Vec<(String, String, String, Rational)>,
    ) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut vertex_index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.id.clone(), i).is_some() {
                return Err(Error::DuplicateId {
                    kind: "vertex",
                    id: v.id.clone(),
                });
            }
        }
        let mut edge_index = BTreeMap::new();
        let mut built = Vec::with_capacity(edges.len());
        for (id, a, b, length) in edges {
            if edge_index.insert(id.clone(), built.len()).is_some() {
                return Err(Error::DuplicateId { kind: "edge", id });
            }
            let from = *vertex_index
                .get(&a)
                .ok_or_else(|| Error::UnknownVertex(a.clone()))?;
            let to = *vertex_index
                .get(&b)
                .ok_or_else(|| Error::UnknownVertex(b.clone()))?;
            if length <= Rational::zero() {
                return Err(Error::NonPositiveLength { id });
            }
            built.push(Edge {
                id,
                from,
                to,
                length,
            });
        }
        let graph = MetrizedGraph {
            vertices,
            edges: built,
            vertex_index,
            edge_index,
        };
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(graph)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, index: usize) -> &str {
        &self.vertices[index].id
    }

    pub fn vertex_lookup(&self, id: &str) -> Result<usize> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge_lookup(&self, id: &str) -> Result<usize> {
        self.edge_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    pub fn has_vertex(&self, id: &str) -> bool {
        self.vertex_index.contains_key(id)
    }

    pub fn has_edge(&self, id: &str) -> bool {
        self.edge_index.contains_key(id)
    }

    /// First Betti number |E| - |V| + 1 of the connected graph.
    pub fn betti(&self) -> u64 {
        (self.edges.len() + 1 - self.vertices.len()) as u64
    }

    /// Genus: sum of vertex genus marks plus the first Betti number.
    pub fn genus(&self) -> u64 {
        let marks: u64 = self.vertices.iter().map(|v| v.genus).sum();
        marks + self.betti()
    }

    /// Total metric length.
    pub fn total_length(&self) -> Rational {
        self.edges
            .iter()
            .map(|e| e.length.clone())
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Valence of a vertex, loops counting twice.
    pub fn valence(&self, vertex: usize) -> u64 {
        let mut n = 0;
        for e in &self.edges {
            if e.from == vertex {
                n += 1;
            }
            if e.to == vertex {
                n += 1;
            }
        }
        n
    }

    /// Canonical divisor: K_v = 2 g_v - 2 + valence(v). The total degree is
    /// asserted to be 2g - 2; a mismatch is an internal invariant violation.
    pub fn canonical_divisor(&self) -> Divisor {
        let g = self.genus();
        let mut coefficients = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let k = 2 * v.genus as i64 - 2 + self.valence(i) as i64;
            coefficients.insert(v.id.clone(), k);
        }
        let divisor = Divisor { coefficients };
        assert_eq!(
            divisor.degree(),
            2 * g as i64 - 2,
            "canonical divisor degree must be 2g-2"
        );
        divisor
    }

    fn is_connected(&self) -> bool {
        self.component_of(None).iter().all(|&c| c == 0)
    }

    /// Labels each vertex with a component number, optionally skipping one
    /// edge (used for bridge detection and edge types).
    fn component_of(&self, skip_edge: Option<usize>) -> Vec<usize> {
        let n = self.vertices.len();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = next;
            while let Some(v) = stack.pop() {
                for (i, e) in self.edges.iter().enumerate() {
                    if Some(i) == skip_edge {
                        continue;
                    }
                    for (a, b) in [(e.from, e.to), (e.to, e.from)] {
                        if a == v && label[b] == usize::MAX {
                            label[b] = next;
                            stack.push(b);
                        }
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// True when deleting the interior of the edge disconnects the graph.
    pub fn is_bridge(&self, edge: usize) -> bool {
        let labels = self.component_of(Some(edge));
        labels.iter().any(|&c| c != 0)
    }

    /// Type of an edge in a graph of genus g >= 2: 0 if deleting the edge
    /// interior keeps the graph connected (loops always do), otherwise
    /// min(h, g - h) where h is the arithmetic genus of one side.
    pub fn edge_type(&self, edge_id: &str) -> Result<u64> {
        let g = self.genus();
        if g < 2 {
            return Err(Error::GenusTooSmall {
                required: 2,
                actual: g,
            });
        }
        let ei = self.edge_lookup(edge_id)?;
        let labels = self.component_of(Some(ei));
        if labels.iter().all(|&c| c == 0) {
            return Ok(0);
        }
        // Two sides: arithmetic genus of a side is its genus marks plus its
        // own first Betti number.
        let mut side_vertices = [0u64; 2];
        let mut side_marks = [0u64; 2];
        let mut side_edges = [0u64; 2];
        for (i, v) in self.vertices.iter().enumerate() {
            let side = labels[i].min(1);
            side_vertices[side] += 1;
            side_marks[side] += v.genus;
        }
        for (i, e) in self.edges.iter().enumerate() {
            if i == ei {
                continue;
            }
            side_edges[labels[e.from].min(1)] += 1;
        }
        let h = side_marks[0] + side_edges[0] + 1 - side_vertices[0];
        Ok(h.min(g - h))
    }

    /// Validates a point reference against this graph.
    pub fn check_point(&self, point: &PointRef) -> Result<()> {
        match point {
            PointRef::Vertex(v) => {
                self.vertex_lookup(v)?;
                Ok(())
            }
            PointRef::EdgePoint { edge, offset } => {
                let ei = self.edge_lookup(edge)?;
                let len = &self.edges[ei].length;
                if offset <= &Rational::zero() || offset >= len {
                    return Err(Error::OffsetOutOfRange {
                        edge: edge.clone(),
                        offset: format_rational(offset),
                        length: format_rational(len),
                    });
                }
                Ok(())
            }
        }
    }

    /// Canonical text form: vertices then edges, each sorted by id.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (id, &i) in &self.vertex_index {
            out.push_str(&format!("vertex {id} genus={}\n", self.vertices[i].genus));
        }
        for (id, &i) in &self.edge_index {
            let e = &self.edges[i];
            out.push_str(&format!(
                "edge {id} {} {} length={}\n",
                self.vertices[e.from].id,
                self.vertices[e.to].id,
                format_rational(&e.length)
            ));
        }
        out
    }

    /// Subdivides the graph at the given points. Vertex references map to
    /// themselves; each distinct interior point becomes a fresh genus-0
    /// vertex. Total length, genus and every potential-theoretic quantity
    /// computed downstream are unchanged.
    pub fn subdivide(&self, points: &[PointRef]) -> Result<Subdivision> {
        // Group and validate requested interior cuts per edge.
        let mut cuts: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
        for p in points {
            self.check_point(p)?;
            if let PointRef::EdgePoint { edge, offset } = p {
                let ei = self.edge_lookup(edge)?;
                let list = cuts.entry(ei).or_default();
                if !list.contains(offset) {
                    list.push(offset.clone());
                }
            }
        }
        for list in cuts.values_mut() {
            list.sort();
        }

        let mut vertices = self.vertices.clone();
        let mut edges: Vec<(String, String, String, Rational)> = Vec::new();
        let mut used_vertex_ids: BTreeMap<String, ()> =
            self.vertex_index.keys().map(|k| (k.clone(), ())).collect();
        let mut used_edge_ids: BTreeMap<String, ()> =
            self.edge_index.keys().map(|k| (k.clone(), ())).collect();
        let mut records = BTreeMap::new();

        let fresh = |used: &mut BTreeMap<String, ()>, base: String| -> String {
            let mut name = base;
            while used.contains_key(&name) {
                name.push('_');
            }
            used.insert(name.clone(), ());
            name
        };

        for (ei, edge) in self.edges.iter().enumerate() {
            match cuts.get(&ei) {
                None => {
                    edges.push((
                        edge.id.clone(),
                        self.vertices[edge.from].id.clone(),
                        self.vertices[edge.to].id.clone(),
                        edge.length.clone(),
                    ));
                }
                Some(offsets) => {
                    let mut boundary_ids = Vec::new();
                    for (k, _) in offsets.iter().enumerate() {
                        let id = fresh(&mut used_vertex_ids, format!("{}_v{}", edge.id, k + 1));
                        vertices.push(Vertex {
                            id: id.clone(),
                            genus: 0,
                        });
                        boundary_ids.push(id);
                    }
                    // Cut offsets split [0, L] into len(offsets)+1 segments.
                    let mut stops = vec![Rational::zero()];
                    stops.extend(offsets.iter().cloned());
                    stops.push(edge.length.clone());
                    let mut node_ids = vec![self.vertices[edge.from].id.clone()];
                    node_ids.extend(boundary_ids.iter().cloned());
                    node_ids.push(self.vertices[edge.to].id.clone());

                    let mut segment_ids = Vec::new();
                    for k in 0..stops.len() - 1 {
                        let id = fresh(&mut used_edge_ids, format!("{}_e{}", edge.id, k));
                        let seg_len = stops[k + 1].clone() - stops[k].clone();
                        edges.push((
                            id.clone(),
                            node_ids[k].clone(),
                            node_ids[k + 1].clone(),
                            seg_len,
                        ));
                        segment_ids.push(id);
                    }
                    records.insert(
                        edge.id.clone(),
                        EdgeSplit {
                            offsets: offsets.clone(),
                            cut_vertex_ids: boundary_ids,
                            segment_ids,
                            stops,
                        },
                    );
                }
            }
        }

        let graph = MetrizedGraph::new(vertices, edges)?;
        Ok(Subdivision { graph, records })
    }
}

/// How one original edge was split.
#[derive(Debug, Clone)]
pub struct EdgeSplit {
    /// Sorted interior cut offsets.
    pub offsets: Vec<Rational>,
    /// New vertex id at each cut, in offset order.
    pub cut_vertex_ids: Vec<String>,
    /// Segment edge ids, in order from the original first endpoint.
    pub segment_ids: Vec<String>,
    /// Segment boundaries: 0, cuts..., L.
    pub stops: Vec<Rational>,
}

/// Result of [`MetrizedGraph::subdivide`]: the refined graph plus a mapping
/// that carries any point of the original graph to the refined one.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub graph: MetrizedGraph,
    records: BTreeMap<String, EdgeSplit>,
}

impl Subdivision {
    /// Maps an original-graph point to the subdivided graph. Points at cut
    /// offsets become vertices; other interior points land inside a segment.
    pub fn map_point(&self, point: &PointRef) -> PointRef {
        match point {
            PointRef::Vertex(v) => PointRef::Vertex(v.clone()),
            PointRef::EdgePoint { edge, offset } => match self.records.get(edge) {
                None => point.clone(),
                Some(split) => {
                    for (k, cut) in split.offsets.iter().enumerate() {
                        if cut == offset {
                            return PointRef::Vertex(split.cut_vertex_ids[k].clone());
                        }
                    }
                    // Locate the segment containing the offset.
                    for k in 0..split.segment_ids.len() {
                        if offset > &split.stops[k] && offset < &split.stops[k + 1] {
                            return PointRef::EdgePoint {
                                edge: split.segment_ids[k].clone(),
                                offset: offset.clone() - split.stops[k].clone(),
                            };
                        }
                    }
                    unreachable!("offset inside edge must fall in a segment")
                }
            },
        }
    }

    /// Per-edge split records, keyed by original edge id.
    pub fn record(&self, edge: &str) -> Option<&EdgeSplit> {
        self.records.get(edge)
    }
}

/// Parses the line-oriented graph format. `#` starts a comment anywhere on a
/// line; blank lines are skipped.
pub fn parse_graph(text: &str) -> Result<MetrizedGraph> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields[0] {
            "vertex" => {
                if fields.len() != 3 {
                    return Err(Error::Parse {
                        line,
                        message: "expected `vertex <id> genus=<n>`".into(),
                    });
                }
                let id = fields[1].to_string();
                if !valid_identifier(&id) {
                    return Err(Error::Parse {
                        line,
                        message: format!("invalid identifier `{id}`"),
                    });
                }
                let genus = fields[2]
                    .strip_prefix("genus=")
                    .and_then(|v| v.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: "expected `genus=<non-negative integer>`".into(),
                    })?;
                vertices.push(Vertex { id, genus });
            }
            "edge" => {
                if fields.len() != 5 {
                    return Err(Error::Parse {
                        line,
                        message: "expected `edge <id> <vertex> <vertex> length=<p>/<q>`".into(),
                    });
                }
                let id = fields[1].to_string();
                if !valid_identifier(&id) {
                    return Err(Error::Parse {
                        line,
                        message: format!("invalid identifier `{id}`"),
                    });
                }
                let length = fields[4]
                    .strip_prefix("length=")
                    .and_then(parse_rational)
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: "expected `length=<p>` or `length=<p>/<q>`".into(),
                    })?;
                // Vertices must already be declared.
                let known = |v: &str| vertices.iter().any(|x| x.id == v);
                for v in [fields[2], fields[3]] {
                    if !known(v) {
                        return Err(Error::UnknownVertex(v.to_string()));
                    }
                }
                edges.push((id, fields[2].to_string(), fields[3].to_string(), length));
            }
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown directive `{other}`"),
                });
            }
        }
    }
    MetrizedGraph::new(vertices, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    pub(crate) fn single_vertex(genus: u64) -> MetrizedGraph {
        MetrizedGraph::new(
            vec![Vertex {
                id: "v".into(),
                genus,
            }],
            vec![],
        )
        .unwrap()
    }

    pub(crate) fn dumbbell(length: Rational) -> MetrizedGraph {
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

    pub(crate) fn circle(length: Rational) -> MetrizedGraph {
        MetrizedGraph::new(
            vec![Vertex {
                id: "v".into(),
                genus: 1,
            }],
            vec![("loop0".into(), "v".into(), "v".into(), length)],
        )
        .unwrap()
    }

    pub(crate) fn theta() -> MetrizedGraph {
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
            vec![
                ("a".into(), "u".into(), "w".into(), rint(1)),
                ("b".into(), "u".into(), "w".into(), rint(1)),
                ("c".into(), "u".into(), "w".into(), rint(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn parses_smallest_graph() {
        let g = parse_graph("vertex v genus=2\n").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.genus(), 2);
    }

    #[test]
    fn parses_dumbbell_file() {
        let text =
            "# two elliptic tails\nvertex u genus=1\nvertex w genus=1\nedge b u w length=1\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.genus(), 2);
    }

    #[test]
    fn rejects_undeclared_vertex() {
        let err = parse_graph("vertex u genus=1\nedge e u w length=1\n").unwrap_err();
        assert!(matches!(err, Error::UnknownVertex(v) if v == "w"));
    }

    #[test]
    fn rejects_disconnected_and_bad_lengths() {
        let err = parse_graph("vertex u genus=1\nvertex w genus=1\n").unwrap_err();
        assert!(matches!(err, Error::Disconnected));
        let err =
            parse_graph("vertex u genus=1\nvertex w genus=1\nedge e u w length=0\n").unwrap_err();
        assert!(matches!(err, Error::NonPositiveLength { .. }));
    }

    #[test]
    fn parse_accepts_loops_and_rejects_duplicates() {
        let g = parse_graph("vertex v genus=1\nedge l v v length=3/2\n").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.genus(), 2);

        let err = parse_graph("vertex v genus=1\nvertex v genus=0\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateId { kind: "vertex", .. }));
        let err = parse_graph(
            "vertex u genus=1\nvertex w genus=1\nedge e u w length=1\nedge e u w length=2\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateId { kind: "edge", .. }));
    }

    #[test]
    fn parse_error_carries_line_number() {
        let err = parse_graph("vertex u genus=1\nvortex w genus=1\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn genus_examples() {
        assert_eq!(single_vertex(2).genus(), 2);
        assert_eq!(theta().genus(), 2);
        assert_eq!(dumbbell(rint(1)).genus(), 2);
    }

    #[test]
    fn canonical_divisor_examples() {
        let d = dumbbell(rint(1)).canonical_divisor();
        assert_eq!(d.coefficient("u"), 1);
        assert_eq!(d.coefficient("w"), 1);

        let c = circle(rint(1)).canonical_divisor();
        assert_eq!(c.coefficient("v"), 2);

        let t = theta().canonical_divisor();
        assert_eq!(t.coefficient("u"), 1);
        assert_eq!(t.coefficient("w"), 1);
        assert_eq!(t.degree(), 2);
    }

    #[test]
    fn edge_type_examples() {
        assert_eq!(circle(rint(1)).edge_type("loop0").unwrap(), 0);
        assert_eq!(dumbbell(rint(1)).edge_type("b").unwrap(), 1);
        let t = theta();
        for e in ["a", "b", "c"] {
            assert_eq!(t.edge_type(e).unwrap(), 0);
        }
        assert!(matches!(t.edge_type("zzz"), Err(Error::UnknownEdge(_))));
    }

    #[test]
    fn subdivide_edge_at_midpoint() {
        let g = dumbbell(rint(1));
        let p = PointRef::edge_point("b", rat(1, 2));
        let sub = g.subdivide(std::slice::from_ref(&p)).unwrap();
        assert_eq!(sub.graph.vertex_count(), 3);
        assert_eq!(sub.graph.edge_count(), 2);
        assert_eq!(sub.graph.total_length(), rint(1));
        assert_eq!(sub.graph.genus(), 2);
        assert!(matches!(sub.map_point(&p), PointRef::Vertex(_)));
    }

    #[test]
    fn subdivide_loop_keeps_genus() {
        let g = circle(rint(1));
        let sub = g
            .subdivide(&[PointRef::edge_point("loop0", rat(1, 3))])
            .unwrap();
        assert_eq!(sub.graph.vertex_count(), 2);
        assert_eq!(sub.graph.edge_count(), 2);
        assert_eq!(sub.graph.genus(), 2);
        assert_eq!(sub.graph.canonical_divisor().degree(), 2);
    }

    #[test]
    fn subdivide_empty_is_identity() {
        let g = theta();
        let sub = g.subdivide(&[]).unwrap();
        assert_eq!(sub.graph, g);
        let p = PointRef::edge_point("a", rat(1, 2));
        assert_eq!(sub.map_point(&p), p);
    }

    #[test]
    fn subdivide_rejects_bad_offset() {
        let g = dumbbell(rint(1));
        let err = g
            .subdivide(&[PointRef::edge_point("b", rint(2))])
            .unwrap_err();
        assert!(matches!(err, Error::OffsetOutOfRange { .. }));
    }

    #[test]
    fn serialize_round_trips() {
        let g = theta();
        let text = g.serialize();
        let back = parse_graph(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.serialize(), text);
    }
}
