//! Simplex gadget generation (S3/S4), cubic graphs with girth search,
//! and CCNF assembly: one gadget per node, one shared variable per edge.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::formula::{Clause, Formula, Literal, Variable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetKind {
    S3,
    S4,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("gadget variables must be distinct")]
    DuplicateGadgetVariables,
    #[error("random cubic graph needs an even node count >= 4, got {nodes}")]
    BadNodeCount { nodes: usize },
    #[error("no cubic graph with girth >= {min_girth} found in {attempts} attempts")]
    GirthUnreachable { min_girth: usize, attempts: usize },
    #[error("graph is acyclic, no girth")]
    Acyclic,
    #[error("CCNF assembly requires odd girth 2k+1, got girth {girth}")]
    EvenGirth { girth: usize },
    #[error("kind assignment lists {given} nodes, graph has {nodes}")]
    KindCountMismatch { given: usize, nodes: usize },
    #[error("unknown named graph `{0}` (expected k4, petersen, or mcgee)")]
    UnknownGraph(String),
}

fn gadget(
    template: [[(usize, bool); 3]; 4],
    widths: [usize; 4],
    vars: [Variable; 3],
    roles: [bool; 3],
) -> Result<Formula, GenError> {
    if vars[0] == vars[1] || vars[0] == vars[2] || vars[1] == vars[2] {
        return Err(GenError::DuplicateGadgetVariables);
    }
    let lit = |slot: usize, positive: bool| {
        // Role polarity flips the whole literal: a negative role turns
        // the template's positive occurrence into a negative one.
        Literal::new(vars[slot], positive == roles[slot])
    };
    let clauses = template
        .iter()
        .zip(widths)
        .map(|(row, w)| Clause::new(row[..w].iter().map(|&(slot, p)| lit(slot, p))));
    Ok(Formula::from_clauses(clauses))
}

/// The 3-simplex gadget: pairwise exclusions plus one covering clause.
/// All-positive roles over {1,2,3} give (¬1∨¬2)(¬2∨¬3)(¬1∨¬3)(1∨2∨3).
pub fn s3cnf(vars: [Variable; 3], roles: [bool; 3]) -> Result<Formula, GenError> {
    gadget(
        [
            [(0, false), (1, false), (2, false)],
            [(1, false), (2, false), (0, false)],
            [(0, false), (2, false), (1, false)],
            [(0, true), (1, true), (2, true)],
        ],
        [2, 2, 2, 3],
        vars,
        roles,
    )
}

/// The 4-simplex gadget: the four width-3 clauses with an even number of
/// negations. All-positive roles over {1,2,3} give
/// (¬1∨¬2∨3)(1∨¬2∨¬3)(¬1∨2∨¬3)(1∨2∨3).
pub fn s4cnf(vars: [Variable; 3], roles: [bool; 3]) -> Result<Formula, GenError> {
    gadget(
        [
            [(0, false), (1, false), (2, true)],
            [(0, true), (1, false), (2, false)],
            [(0, false), (1, true), (2, false)],
            [(0, true), (1, true), (2, true)],
        ],
        [3, 3, 3, 3],
        vars,
        roles,
    )
}

/// A 3-regular simple graph. Edges are unordered pairs with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicGraph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
}

impl CubicGraph {
    pub fn new(node_count: usize, mut edges: Vec<(usize, usize)>) -> CubicGraph {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort();
        let g = CubicGraph { node_count, edges };
        for n in 0..node_count {
            assert_eq!(g.incident_edges(n).len(), 3, "node {n} is not degree 3");
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge ids incident to `node`, ordered by the neighbor's index.
    pub fn incident_edges(&self, node: usize) -> Vec<usize> {
        let mut inc: Vec<(usize, usize)> = self
            .edges
            .iter()
            .enumerate()
            .filter_map(|(i, &(a, b))| {
                if a == node {
                    Some((b, i))
                } else if b == node {
                    Some((a, i))
                } else {
                    None
                }
            })
            .collect();
        inc.sort();
        inc.into_iter().map(|(_, i)| i).collect()
    }

    pub fn neighbors(&self, node: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == node {
                    Some(b)
                } else if b == node {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.node_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Shortest cycle length by breadth-first search from every node;
    /// `None` for an acyclic graph.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for start in 0..self.node_count {
            let mut dist = vec![usize::MAX; self.node_count];
            let mut parent = vec![usize::MAX; self.node_count];
            dist[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for v in self.neighbors(u) {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        let cycle = dist[u] + dist[v] + 1;
                        if best.map_or(true, |b| cycle < b) {
                            best = Some(cycle);
                        }
                    }
                }
            }
        }
        best
    }

    /// All simple cycles of exactly `length`, each reported once as a
    /// node list starting from its smallest node.
    pub fn cycles_of_length(&self, length: usize) -> Vec<Vec<usize>> {
        let mut cycles = Vec::new();
        let mut path = Vec::new();
        for start in 0..self.node_count {
            path.push(start);
            self.extend_cycle(start, length, &mut path, &mut cycles);
            path.pop();
        }
        cycles
    }

    fn extend_cycle(
        &self,
        start: usize,
        length: usize,
        path: &mut Vec<usize>,
        cycles: &mut Vec<Vec<usize>>,
    ) {
        let u = *path.last().unwrap();
        if path.len() == length {
            // Close the cycle; path[1] < path[last] picks one direction.
            if self.neighbors(u).contains(&start) && path[1] < path[length - 1] {
                cycles.push(path.clone());
            }
            return;
        }
        for v in self.neighbors(u) {
            if v > start && !path.contains(&v) {
                path.push(v);
                self.extend_cycle(start, length, path, cycles);
                path.pop();
            }
        }
    }
}

/// K4: the complete graph on 4 nodes, girth 3.
pub fn k4() -> CubicGraph {
    CubicGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

/// The Petersen graph: 10 nodes, 15 edges, girth 5. Outer 5-cycle,
/// spokes, inner pentagram.
pub fn petersen() -> CubicGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    CubicGraph::new(10, edges)
}

/// The McGee graph from its LCF notation [12, 7, -7]^8: 24 nodes,
/// 36 edges, girth 7 — the (3,7)-cage.
pub fn mcgee() -> CubicGraph {
    let n = 24;
    let mut edges = Vec::new();
    for i in 0..n {
        edges.push((i, (i + 1) % n));
        let jump = match i % 3 {
            0 => 12,
            1 => 7,
            _ => n - 7,
        };
        let j = (i + jump) % n;
        if i < j {
            edges.push((i, j));
        }
    }
    CubicGraph::new(n, edges)
}

pub fn named_graph(name: &str) -> Result<CubicGraph, GenError> {
    match name {
        "k4" => Ok(k4()),
        "petersen" => Ok(petersen()),
        "mcgee" => Ok(mcgee()),
        other => Err(GenError::UnknownGraph(other.to_string())),
    }
}

/// Rejection-sampled random cubic graph via the pairing model: retry
/// until simple, connected, and of girth at least `min_girth`.
pub fn random_cubic(
    nodes: usize,
    min_girth: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<CubicGraph, GenError> {
    if nodes < 4 || nodes % 2 != 0 {
        return Err(GenError::BadNodeCount { nodes });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..max_attempts {
        let mut stubs: Vec<usize> = (0..nodes).flat_map(|n| [n, n, n]).collect();
        stubs.shuffle(&mut rng);
        let mut edges = Vec::with_capacity(nodes * 3 / 2);
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || edges.contains(&(a, b)) {
                continue 'attempt;
            }
            edges.push((a, b));
        }
        let g = CubicGraph::new(nodes, edges);
        if !g.is_connected() {
            continue;
        }
        if g.girth().map_or(false, |gi| gi >= min_girth) {
            return Ok(g);
        }
    }
    Err(GenError::GirthUnreachable {
        min_girth,
        attempts: max_attempts,
    })
}

/// Which gadget sits on each node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KindAssignment {
    AllS3,
    AllS4,
    PerNode(Vec<GadgetKind>),
}

impl KindAssignment {
    fn resolve(&self, nodes: usize) -> Result<Vec<GadgetKind>, GenError> {
        match self {
            KindAssignment::AllS3 => Ok(vec![GadgetKind::S3; nodes]),
            KindAssignment::AllS4 => Ok(vec![GadgetKind::S4; nodes]),
            KindAssignment::PerNode(kinds) => {
                if kinds.len() != nodes {
                    return Err(GenError::KindCountMismatch {
                        given: kinds.len(),
                        nodes,
                    });
                }
                Ok(kinds.clone())
            }
        }
    }
}

/// Role polarities per node slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolarityAssignment {
    AllPositive,
    Seeded(u64),
}

/// Assembly parameters for a CCNF instance.
#[derive(Clone, Debug, PartialEq)]
pub struct CcnfSpec {
    pub kinds: KindAssignment,
    pub c0: f64,
    pub polarity: PolarityAssignment,
}

/// An assembled CCNF instance with its generation trace.
#[derive(Clone, Debug)]
pub struct CcnfInstance {
    pub formula: Formula,
    pub graph: CubicGraph,
    pub kinds: Vec<GadgetKind>,
    /// Role polarities per node, in slot order (P, Q, R).
    pub polarities: Vec<[bool; 3]>,
    pub girth: usize,
    /// girth = 2k + 1.
    pub k: usize,
    pub c0: f64,
}

impl CcnfInstance {
    /// Node, edge, and variable correspondence for the DIMACS sidecar.
    pub fn sidecar_json(&self) -> serde_json::Value {
        json!({
            "girth": self.girth,
            "k": self.k,
            "c0": self.c0,
            "nodes": (0..self.graph.node_count()).map(|n| json!({
                "node": n,
                "kind": match self.kinds[n] { GadgetKind::S3 => "s3", GadgetKind::S4 => "s4" },
                "edges": self.graph.incident_edges(n),
                "polarities": self.polarities[n],
            })).collect::<Vec<_>>(),
            "edges": self.graph.edges().iter().enumerate().map(|(i, &(a, b))| json!({
                "edge": i,
                "var": i + 1,
                "endpoints": [a, b],
            })).collect::<Vec<_>>(),
        })
    }
}

/// Instantiate one gadget per node over its three incident edge
/// variables. Clause count is 4x the node count; variable count is the
/// edge count. Requires odd girth (2k+1).
pub fn assemble_ccnf(graph: &CubicGraph, spec: &CcnfSpec) -> Result<CcnfInstance, GenError> {
    let girth = graph.girth().ok_or(GenError::Acyclic)?;
    if girth % 2 == 0 {
        return Err(GenError::EvenGirth { girth });
    }
    let k = (girth - 1) / 2;
    let kinds = spec.kinds.resolve(graph.node_count())?;
    let mut rng = match spec.polarity {
        PolarityAssignment::AllPositive => None,
        PolarityAssignment::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };

    let mut clauses = Vec::new();
    let mut polarities = Vec::new();
    for node in 0..graph.node_count() {
        let inc = graph.incident_edges(node);
        let vars = [
            Variable::new(inc[0] as u32 + 1),
            Variable::new(inc[1] as u32 + 1),
            Variable::new(inc[2] as u32 + 1),
        ];
        let roles = match rng.as_mut() {
            None => [true; 3],
            Some(r) => [r.gen(), r.gen(), r.gen()],
        };
        polarities.push(roles);
        let gadget = match kinds[node] {
            GadgetKind::S3 => s3cnf(vars, roles)?,
            GadgetKind::S4 => s4cnf(vars, roles)?,
        };
        clauses.extend(gadget.clauses().iter().cloned());
    }
    let formula = Formula::new(graph.edge_count() as u32, clauses)
        .expect("edge variables stay in range");
    Ok(CcnfInstance {
        formula,
        graph: graph.clone(),
        kinds,
        polarities,
        girth,
        k,
        c0: spec.c0,
    })
}

/// Per-cycle S4 density check for the assembled instance.
#[derive(Clone, Debug, PartialEq)]
pub struct CcnfReport {
    pub node_count: usize,
    pub girth: usize,
    pub k: usize,
    pub moore_bound: u64,
    /// Condition (a): node count meets the Moore bound for this girth.
    pub moore_ok: bool,
    /// Condition (b) threshold: ceil(k * c0) S4 nodes per girth cycle.
    pub required_s4: u64,
    /// S4 node count on every cycle of length exactly the girth.
    pub cycle_s4_counts: Vec<u64>,
    pub density_ok: bool,
}

impl CcnfReport {
    pub fn pass(&self) -> bool {
        self.moore_ok && self.density_ok
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "node_count": self.node_count,
            "girth": self.girth,
            "k": self.k,
            "moore_bound": self.moore_bound,
            "moore_ok": self.moore_ok,
            "required_s4_per_cycle": self.required_s4,
            "cycle_s4_counts": self.cycle_s4_counts,
            "density_ok": self.density_ok,
            "pass": self.pass(),
        })
    }
}

/// Check the two CCNF structure conditions: the Moore bound on the node
/// count, and at least ceil(k*c0) S4 gadgets on every girth-length cycle.
pub fn check_ccnf_conditions(instance: &CcnfInstance) -> CcnfReport {
    let k = instance.k;
    let moore_bound = crate::growth::moore_size(k as u32);
    let required_s4 = (k as f64 * instance.c0).ceil() as u64;
    let cycles = instance.graph.cycles_of_length(instance.girth);
    let cycle_s4_counts: Vec<u64> = cycles
        .iter()
        .map(|cycle| {
            cycle
                .iter()
                .filter(|&&n| instance.kinds[n] == GadgetKind::S4)
                .count() as u64
        })
        .collect();
    let density_ok = cycle_s4_counts.iter().all(|&c| c >= required_s4);
    CcnfReport {
        node_count: instance.graph.node_count(),
        girth: instance.girth,
        k,
        moore_bound,
        moore_ok: instance.graph.node_count() as u64 == moore_bound,
        required_s4,
        cycle_s4_counts,
        density_ok,
    }
}
