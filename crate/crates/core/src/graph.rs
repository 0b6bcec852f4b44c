//! Undirected multigraphs with the constructors used by the witness
//! construction: cycles, paths and one-point unions.
//!
//! Graphs are immutable values. Every operation returns a new graph.
//! Edges are stored as a sorted map from normalized pairs `(u, v)` with
//! `u < v` to a multiplicity `>= 1`, so two graphs with the same vertex count
//! and edge multiset compare equal.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("cycle length must be at least 3, got {0}")]
    CycleTooShort(usize),
    #[error("path must have at least 1 vertex")]
    EmptyPath,
    #[error("vertex {vertex} out of range for graph with {n_vertices} vertices")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("edge {0}-{1} is not present")]
    EdgeAbsent(usize, usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Index of a vertex inside a particular graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

/// Unordered vertex pair, stored with the smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    /// Normalizes the endpoint order. Panics on a self-loop.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "self-loops are not edges");
        Edge {
            u: a.min(b),
            v: a.max(b),
        }
    }

    pub fn endpoints(self) -> (usize, usize) {
        (self.u, self.v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n_vertices: usize,
    edges: BTreeMap<Edge, u32>,
}

impl Graph {
    /// Graph on `n_vertices` isolated vertices.
    pub fn empty(n_vertices: usize) -> Self {
        Graph {
            n_vertices,
            edges: BTreeMap::new(),
        }
    }

    /// Builds a graph from `(u, v, multiplicity)` triples. Repeated pairs
    /// accumulate.
    pub fn from_edges<I>(n_vertices: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, u32)>,
    {
        let mut g = Graph::empty(n_vertices);
        for (u, v, m) in edges {
            g.insert(u, v, m)?;
        }
        Ok(g)
    }

    /// Simple graph from a list of pairs.
    pub fn from_pairs<I>(n_vertices: usize, pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Graph::from_edges(n_vertices, pairs.into_iter().map(|(u, v)| (u, v, 1)))
    }

    fn insert(&mut self, u: usize, v: usize, m: u32) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if m == 0 {
            return Err(GraphError::ZeroMultiplicity);
        }
        *self.edges.entry(Edge::new(u, v)).or_insert(0) += m;
        Ok(())
    }

    fn check_vertex(&self, vertex: usize) -> Result<(), GraphError> {
        if vertex < self.n_vertices {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex,
                n_vertices: self.n_vertices,
            })
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Number of edges counted with multiplicity.
    pub fn n_edges(&self) -> usize {
        self.edges.values().map(|&m| m as usize).sum()
    }

    /// Distinct vertex pairs with their multiplicities, in ascending pair order.
    pub fn edges(&self) -> impl Iterator<Item = (Edge, u32)> + '_ {
        self.edges.iter().map(|(&e, &m)| (e, m))
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> u32 {
        if a == b {
            return 0;
        }
        self.edges.get(&Edge::new(a, b)).copied().unwrap_or(0)
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.edges
            .iter()
            .filter(|(e, _)| e.u == vertex || e.v == vertex)
            .map(|(_, &m)| m as usize)
            .sum()
    }

    pub fn is_simple(&self) -> bool {
        self.edges.values().all(|&m| m == 1)
    }

    /// Breadth-first connectivity check. The 0-vertex graph counts as
    /// connected.
    pub fn is_connected(&self) -> bool {
        if self.n_vertices <= 1 {
            return true;
        }
        let mut adjacency = vec![Vec::new(); self.n_vertices];
        for e in self.edges.keys() {
            adjacency[e.u].push(e.v);
            adjacency[e.v].push(e.u);
        }
        let mut seen = vec![false; self.n_vertices];
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        reached == self.n_vertices
    }

    /// Removes one copy of the edge `a-b`.
    pub fn delete_edge(&self, a: usize, b: usize) -> Result<Graph, GraphError> {
        if self.multiplicity(a, b) == 0 {
            return Err(GraphError::EdgeAbsent(a, b));
        }
        let mut g = self.clone();
        let e = Edge::new(a, b);
        let m = g.edges.get_mut(&e).expect("checked above");
        *m -= 1;
        if *m == 0 {
            g.edges.remove(&e);
        }
        Ok(g)
    }

    /// Adds one copy of the edge `a-b`.
    pub fn add_edge(&self, a: usize, b: usize) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        g.insert(a, b, 1)?;
        Ok(g)
    }

    /// Contracts the edge `a-b`. The merged vertex keeps the smaller index;
    /// vertices above the larger index shift down by one. Parallel edges
    /// created by the merge add up, loops are dropped.
    pub fn contract_edge(&self, a: usize, b: usize) -> Result<Graph, GraphError> {
        if self.multiplicity(a, b) == 0 {
            return Err(GraphError::EdgeAbsent(a, b));
        }
        let (keep, gone) = (a.min(b), a.max(b));
        let relabel = |x: usize| {
            if x == gone {
                keep
            } else if x > gone {
                x - 1
            } else {
                x
            }
        };
        let mut g = Graph::empty(self.n_vertices - 1);
        for (e, m) in self.edges() {
            let (x, y) = (relabel(e.u), relabel(e.v));
            if x != y {
                *g.edges.entry(Edge::new(x, y)).or_insert(0) += m;
            }
        }
        Ok(g)
    }

    /// Disjoint union of `self` and `other` with `u` (in `self`) and `v` (in
    /// `other`) merged.
    ///
    /// Vertices of `self` keep their indices and the merged vertex takes
    /// index `u`. The remaining vertices of `other` follow in their original
    /// order, starting at `self.n_vertices()`.
    pub fn identify(&self, u: VertexId, other: &Graph, v: VertexId) -> Result<Graph, GraphError> {
        self.check_vertex(u.0)?;
        other.check_vertex(v.0)?;
        let offset = self.n_vertices;
        let relabel = |x: usize| {
            if x == v.0 {
                u.0
            } else if x < v.0 {
                offset + x
            } else {
                offset + x - 1
            }
        };
        let mut g = self.clone();
        g.n_vertices = self.n_vertices + other.n_vertices - 1;
        for (e, m) in other.edges() {
            *g.edges
                .entry(Edge::new(relabel(e.u), relabel(e.v)))
                .or_insert(0) += m;
        }
        Ok(g)
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Graph {
        let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_pairs(n, pairs).expect("complete graph pairs are valid")
    }
}

/// Cycle `C_len` on vertices `0..len`, with edges `i-(i+1)` and `(len-1)-0`.
pub fn cycle(len: usize) -> Result<Graph, GraphError> {
    if len < 3 {
        return Err(GraphError::CycleTooShort(len));
    }
    Graph::from_pairs(len, (0..len).map(|i| (i, (i + 1) % len)))
}

/// Path `P_len` on `len` vertices; vertex 0 is an endpoint.
pub fn path(len_vertices: usize) -> Result<Graph, GraphError> {
    if len_vertices == 0 {
        return Err(GraphError::EmptyPath);
    }
    Graph::from_pairs(len_vertices, (1..len_vertices).map(|i| (i - 1, i)))
}

/// Edge-list text format:
///
/// ```text
/// # comment
/// n 4
/// 0 1
/// 1 2 3
/// ```
///
/// The third column is an optional multiplicity (default 1).
impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n_vertices)?;
        for (e, m) in self.edges() {
            if m == 1 {
                writeln!(f, "{} {}", e.u, e.v)?;
            } else {
                writeln!(f, "{} {} {}", e.u, e.v, m)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut graph: Option<Graph> = None;
        for (idx, raw) in s.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| GraphError::Parse {
                line: line_no,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match graph.as_mut() {
                None => {
                    if fields.len() != 2 || fields[0] != "n" {
                        return Err(parse_err(format!("expected header \"n <count>\", got {line:?}")));
                    }
                    let n = fields[1]
                        .parse()
                        .map_err(|e| parse_err(format!("bad vertex count {:?}: {e}", fields[1])))?;
                    graph = Some(Graph::empty(n));
                }
                Some(g) => {
                    if !(2..=3).contains(&fields.len()) {
                        return Err(parse_err(format!("expected \"u v [mult]\", got {line:?}")));
                    }
                    let mut nums = [0usize, 0, 1];
                    for (slot, field) in nums.iter_mut().zip(&fields) {
                        *slot = field
                            .parse()
                            .map_err(|e| parse_err(format!("bad integer {field:?}: {e}")))?;
                    }
                    let mult = u32::try_from(nums[2])
                        .map_err(|_| parse_err(format!("multiplicity {} too large", nums[2])))?;
                    g.insert(nums[0], nums[1], mult)
                        .map_err(|e| parse_err(e.to_string()))?;
                }
            }
        }
        graph.ok_or(GraphError::Parse {
            line: 0,
            message: "missing \"n <count>\" header".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degrees(g: &Graph) -> Vec<usize> {
        (0..g.n_vertices()).map(|v| g.degree(v)).collect()
    }

    #[test]
    fn cycle_shapes() {
        let c3 = cycle(3).unwrap();
        assert_eq!(c3, Graph::from_pairs(3, [(0, 1), (1, 2), (0, 2)]).unwrap());
        let c5 = cycle(5).unwrap();
        assert_eq!(c5.n_vertices(), 5);
        assert_eq!(c5.n_edges(), 5);
        assert!(degrees(&c5).iter().all(|&d| d == 2));
        assert_eq!(cycle(2), Err(GraphError::CycleTooShort(2)));
    }

    #[test]
    fn path_shapes() {
        let p1 = path(1).unwrap();
        assert_eq!((p1.n_vertices(), p1.n_edges()), (1, 0));
        let p4 = path(4).unwrap();
        assert_eq!((p4.n_vertices(), p4.n_edges()), (4, 3));
        assert_eq!(degrees(&p4).iter().filter(|&&d| d == 1).count(), 2);
        assert_eq!(path(0), Err(GraphError::EmptyPath));
    }

    #[test]
    fn identify_cycles() {
        let g = cycle(3)
            .unwrap()
            .identify(VertexId(1), &cycle(5).unwrap(), VertexId(4))
            .unwrap();
        assert_eq!((g.n_vertices(), g.n_edges()), (7, 8));
        assert_eq!(g.degree(1), 4);
        assert!(g.is_connected());
    }

    #[test]
    fn identify_with_single_vertex_is_identity() {
        let g = cycle(4).unwrap().add_edge(0, 2).unwrap();
        for u in 0..4 {
            let h = g.identify(VertexId(u), &path(1).unwrap(), VertexId(0)).unwrap();
            assert_eq!(h, g);
        }
    }

    #[test]
    fn identify_triangle_and_path() {
        let g = cycle(3)
            .unwrap()
            .identify(VertexId(0), &path(4).unwrap(), VertexId(0))
            .unwrap();
        assert_eq!((g.n_vertices(), g.n_edges()), (6, 6));
        assert_eq!(degrees(&g), vec![3, 2, 2, 2, 2, 1]);
    }

    #[test]
    fn identify_rejects_bad_vertices() {
        let c3 = cycle(3).unwrap();
        assert!(matches!(
            c3.identify(VertexId(3), &c3, VertexId(0)),
            Err(GraphError::VertexOutOfRange { vertex: 3, .. })
        ));
        assert!(c3.identify(VertexId(0), &c3, VertexId(7)).is_err());
    }

    #[test]
    fn connectivity() {
        assert!(cycle(4).unwrap().is_connected());
        assert!(!Graph::from_pairs(4, [(0, 1), (2, 3)]).unwrap().is_connected());
        assert!(path(1).unwrap().is_connected());
        assert!(Graph::empty(0).is_connected());
        assert!(!Graph::empty(2).is_connected());
    }

    #[test]
    fn delete_and_contract() {
        let c3 = cycle(3).unwrap();
        let deleted = c3.delete_edge(0, 2).unwrap();
        assert_eq!(deleted, path(3).unwrap());

        let contracted = c3.contract_edge(1, 2).unwrap();
        assert_eq!(contracted, Graph::from_edges(2, [(0, 1, 2)]).unwrap());

        let single = contracted.contract_edge(0, 1).unwrap();
        assert_eq!(single, Graph::empty(1));

        assert_eq!(c3.delete_edge(0, 0), Err(GraphError::EdgeAbsent(0, 0)));
        assert_eq!(path(3).unwrap().contract_edge(0, 2), Err(GraphError::EdgeAbsent(0, 2)));
    }

    #[test]
    fn delete_then_add_restores() {
        let g = Graph::from_edges(4, [(0, 1, 2), (1, 2, 1), (2, 3, 3), (0, 3, 1)]).unwrap();
        for (e, _) in g.edges() {
            let (a, b) = e.endpoints();
            assert_eq!(g.delete_edge(a, b).unwrap().add_edge(b, a).unwrap(), g);
        }
    }

    #[test]
    fn rejects_loops_and_zero_multiplicity() {
        assert_eq!(Graph::from_pairs(2, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(Graph::from_edges(2, [(0, 1, 0)]), Err(GraphError::ZeroMultiplicity));
    }

    #[test]
    fn edge_list_text() {
        let g = Graph::from_edges(4, [(0, 1, 1), (2, 1, 3)]).unwrap();
        assert_eq!(g.to_string(), "n 4\n0 1\n1 2 3\n");
        let parsed: Graph = "# header comment\nn 4\n\n0 1\n# mid\n2 1 3\n".parse().unwrap();
        assert_eq!(parsed, g);
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let err = "n 3\n0 1\n0 x\n".parse::<Graph>().unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }));
        let err = "n 3\n0 5\n".parse::<Graph>().unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }));
        let err = "0 1\n".parse::<Graph>().unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
        assert!("# nothing\n".parse::<Graph>().is_err());
    }
}
