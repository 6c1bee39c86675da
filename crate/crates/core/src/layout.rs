//! Coupling graphs, placement, and nearest-neighbour routing.

use std::collections::VecDeque;
use std::fmt;

use crate::circuit::{decompose_toffoli, Circuit, GateKind, GateOp, Phase};
use crate::error::{Error, Result};

fn layout_err(msg: impl Into<String>) -> Error {
    Error::Layout(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayoutKind {
    AllToAll,
    XLayout,
    Linear,
    Custom,
}

impl LayoutKind {
    pub fn name(&self) -> &'static str {
        match self {
            LayoutKind::AllToAll => "all_to_all",
            LayoutKind::XLayout => "x_layout",
            LayoutKind::Linear => "linear",
            LayoutKind::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "all_to_all" | "all" => Some(LayoutKind::AllToAll),
            "x_layout" | "x" => Some(LayoutKind::XLayout),
            "linear" => Some(LayoutKind::Linear),
            _ => None,
        }
    }
}

impl fmt::Display for LayoutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Undirected coupling graph over sites `0..n_sites`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingGraph {
    kind: LayoutKind,
    n_sites: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<bool>>,
}

impl CouplingGraph {
    /// Builds a graph from an edge list. Edges are normalized to `(lo, hi)`
    /// and deduplicated; the graph must be connected.
    pub fn new(kind: LayoutKind, n_sites: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n_sites == 0 {
            return Err(layout_err("graph has no sites"));
        }
        let mut adj = vec![vec![false; n_sites]; n_sites];
        let mut norm = Vec::new();
        for &(a, b) in edges {
            if a >= n_sites || b >= n_sites {
                return Err(layout_err(format!("edge ({a}, {b}) outside {n_sites} sites")));
            }
            if a == b {
                return Err(layout_err(format!("self-loop on site {a}")));
            }
            if !adj[a][b] {
                adj[a][b] = true;
                adj[b][a] = true;
                norm.push((a.min(b), a.max(b)));
            }
        }
        norm.sort_unstable();
        let g = Self {
            kind,
            n_sites,
            edges: norm,
            adj,
        };
        if !g.is_connected() {
            return Err(layout_err(format!("{} graph is disconnected", kind)));
        }
        Ok(g)
    }

    pub fn kind(&self) -> LayoutKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, s: usize) -> usize {
        self.adj[s].iter().filter(|&&e| e).count()
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    fn neighbours(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_sites).filter(move |&t| self.adj[s][t])
    }

    fn is_connected(&self) -> bool {
        self.distances_from(0).iter().all(|d| d.is_some())
    }

    /// BFS hop counts from `src`; `None` for unreachable sites.
    pub fn distances_from(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n_sites];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(s) = queue.pop_front() {
            let d = dist[s].expect("queued sites are reached");
            for t in self.neighbours(s) {
                if dist[t].is_none() {
                    dist[t] = Some(d + 1);
                    queue.push_back(t);
                }
            }
        }
        dist
    }

    /// Shortest path `from -> to` inclusive. At each step the lowest-index
    /// neighbour that gets closer to `to` is taken.
    pub fn shortest_path(&self, from: usize, to: usize) -> Vec<usize> {
        let dist = self.distances_from(to);
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            let d = dist[cur].expect("connected graph");
            cur = self
                .neighbours(cur)
                .find(|&t| dist[t] == Some(d - 1))
                .expect("a closer neighbour exists on a connected graph");
            path.push(cur);
        }
        path
    }

    /// Highest-degree site, lowest index on ties.
    pub fn center(&self) -> usize {
        (0..self.n_sites)
            .max_by(|&a, &b| self.degree(a).cmp(&self.degree(b)).then(b.cmp(&a)))
            .expect("nonempty graph")
    }
}

/// Builds one of the named layouts.
///
/// `x_layout` needs exactly 5 sites (center 2, arms 0, 1, 3, 4); `linear`
/// is the chain `0-1-...-(n-1)`; `all_to_all` is complete.
pub fn make_layout(kind: LayoutKind, n_sites: usize) -> Result<CouplingGraph> {
    match kind {
        LayoutKind::AllToAll => {
            if n_sites == 0 {
                return Err(layout_err("all_to_all needs at least 1 site"));
            }
            let edges: Vec<_> = (0..n_sites)
                .flat_map(|a| (a + 1..n_sites).map(move |b| (a, b)))
                .collect();
            CouplingGraph::new(kind, n_sites, &edges)
        }
        LayoutKind::XLayout => {
            if n_sites != 5 {
                return Err(layout_err(format!("x_layout has 5 sites, got {n_sites}")));
            }
            CouplingGraph::new(kind, 5, &[(2, 0), (2, 1), (2, 3), (2, 4)])
        }
        LayoutKind::Linear => {
            if n_sites < 2 {
                return Err(layout_err(format!("linear layout needs at least 2 sites, got {n_sites}")));
            }
            let edges: Vec<_> = (1..n_sites).map(|b| (b - 1, b)).collect();
            CouplingGraph::new(kind, n_sites, &edges)
        }
        LayoutKind::Custom => Err(layout_err("custom layouts are loaded with parse_edge_list")),
    }
}

/// Parses an edge list: optional `sites N` line, then one `a b` pair per
/// line; `#` starts a comment. Without `sites`, the count is max index + 1.
pub fn parse_edge_list(src: &str) -> Result<CouplingGraph> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        let num = |w: &str| {
            w.parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("bad site index '{w}'"),
            })
        };
        match words.as_slice() {
            ["sites", n] => declared = Some(num(n)?),
            [a, b] => edges.push((num(a)?, num(b)?)),
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected 'a b' or 'sites N', got '{body}'"),
                })
            }
        }
    }
    let inferred = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    CouplingGraph::new(LayoutKind::Custom, declared.unwrap_or(inferred), &edges)
}

/// Injective map from logical qubits to sites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    sites: Vec<usize>,
    n_sites: usize,
}

impl Placement {
    pub fn new(sites: Vec<usize>, n_sites: usize) -> Result<Self> {
        let mut used = vec![false; n_sites];
        for &s in &sites {
            if s >= n_sites {
                return Err(layout_err(format!("site {s} outside {n_sites} sites")));
            }
            if std::mem::replace(&mut used[s], true) {
                return Err(layout_err(format!("site {s} assigned twice")));
            }
        }
        Ok(Self { sites, n_sites })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            sites: (0..n).collect(),
            n_sites: n,
        }
    }

    /// Data qubit (logical 0) at the graph center, ancillas outward.
    ///
    /// On `x_layout` and `linear` the ancillas alternate around the center
    /// (A1 at center-1, A2 at center+1, A3 at center-2, A4 at center+2), so
    /// A1/A2 neighbour the data qubit. `all_to_all` uses the identity map;
    /// custom graphs fill sites in BFS order from the center.
    pub fn centered(n_logical: usize, g: &CouplingGraph) -> Result<Self> {
        if n_logical > g.n_sites() {
            return Err(layout_err(format!(
                "{} logical qubits do not fit on {} sites",
                n_logical,
                g.n_sites()
            )));
        }
        let sites = match g.kind() {
            LayoutKind::AllToAll => (0..n_logical).collect(),
            LayoutKind::XLayout | LayoutKind::Linear => {
                let c = (g.n_sites() / 2) as isize;
                let offsets = (1..).flat_map(|k: isize| [-k, k]);
                std::iter::once(c)
                    .chain(offsets.map(|o| c + o).filter(|&s| s >= 0 && s < g.n_sites() as isize))
                    .take(n_logical)
                    .map(|s| s as usize)
                    .collect()
            }
            LayoutKind::Custom => {
                let c = g.center();
                let dist = g.distances_from(c);
                let mut order: Vec<usize> = (0..g.n_sites()).collect();
                order.sort_by_key(|&s| (dist[s], s));
                order.into_iter().take(n_logical).collect()
            }
        };
        Self::new(sites, g.n_sites())
    }

    pub fn site_of(&self, q: usize) -> usize {
        self.sites[q]
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn n_logical(&self) -> usize {
        self.sites.len()
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }
}

/// A routed circuit over sites with the final logical-to-site map.
#[derive(Debug, Clone, PartialEq)]
pub struct Routed {
    pub circuit: Circuit,
    pub initial: Placement,
    pub final_placement: Placement,
    pub swaps: usize,
}

/// Routes `c` onto `g`.
///
/// Toffolis are lowered to the 6-CZ template first; CNOTs stay 2-qubit
/// gates. The router keeps a front layer of ops whose predecessors are
/// done, emits every front op that is executable (1-qubit, wait, or
/// 2-qubit on adjacent sites) until none is, then takes the earliest
/// blocked 2-qubit op and moves its second operand along the shortest path
/// until it is adjacent to the first, one SWAP per hop. SWAPs are never
/// undone, so the final placement generally differs from the initial one.
pub fn route(c: &Circuit, g: &CouplingGraph, placement: &Placement) -> Result<Routed> {
    if placement.n_sites() != g.n_sites() {
        return Err(layout_err(format!(
            "placement is for {} sites, graph has {}",
            placement.n_sites(),
            g.n_sites()
        )));
    }
    if placement.n_logical() != c.n_qubits() {
        return Err(layout_err(format!(
            "placement maps {} qubits, circuit has {}",
            placement.n_logical(),
            c.n_qubits()
        )));
    }
    let lowered = decompose_toffoli(c);
    let ops: Vec<(&GateOp, Phase)> = lowered.iter().collect();
    let n = lowered.n_qubits();

    // Per-qubit queues of op indices; a wait sits on every queue.
    let mut queues: Vec<VecDeque<usize>> = vec![VecDeque::new(); n];
    for (i, (op, _)) in ops.iter().enumerate() {
        if op.kind.is_wait() {
            queues.iter_mut().for_each(|q| q.push_back(i));
        } else {
            for &q in &op.targets {
                queues[q].push_back(i);
            }
        }
    }
    let qubits_of = |op: &GateOp| -> Vec<usize> {
        if op.kind.is_wait() {
            (0..n).collect()
        } else {
            op.targets.clone()
        }
    };

    let mut site_of: Vec<usize> = placement.sites().to_vec();
    let mut logical_at: Vec<Option<usize>> = vec![None; g.n_sites()];
    for (q, &s) in site_of.iter().enumerate() {
        logical_at[s] = Some(q);
    }
    let mut out = Circuit::new(g.n_sites());
    out.set_phase(lowered.current_phase());
    let mut done = vec![false; ops.len()];
    let mut remaining = ops.len();
    let mut swaps = 0;

    let is_ready = |i: usize, queues: &[VecDeque<usize>]| {
        qubits_of(ops[i].0).iter().all(|&q| queues[q].front() == Some(&i))
    };

    while remaining > 0 {
        let mut progressed = true;
        while progressed {
            progressed = false;
            for i in 0..ops.len() {
                if done[i] || !is_ready(i, &queues) {
                    continue;
                }
                let (op, phase) = ops[i];
                let executable = op.arity() != 2 || g.is_adjacent(site_of[op.targets[0]], site_of[op.targets[1]]);
                if !executable {
                    continue;
                }
                let mapped = GateOp::new(op.kind, op.targets.iter().map(|&q| site_of[q]).collect());
                out.push_tagged(mapped, phase);
                for q in qubits_of(op) {
                    queues[q].pop_front();
                }
                done[i] = true;
                remaining -= 1;
                progressed = true;
            }
        }
        if remaining == 0 {
            break;
        }
        let blocked = (0..ops.len())
            .find(|&i| !done[i] && is_ready(i, &queues))
            .ok_or_else(|| layout_err("router stalled with no ready op"))?;
        let (op, phase) = ops[blocked];
        debug_assert_eq!(op.arity(), 2);
        let (anchor, mover) = (op.targets[0], op.targets[1]);
        let path = g.shortest_path(site_of[mover], site_of[anchor]);
        for w in path.windows(2).take(path.len() - 2) {
            let (s, t) = (w[0], w[1]);
            out.push_tagged(GateOp::new(GateKind::Swap, vec![s.min(t), s.max(t)]), phase);
            swaps += 1;
            let (ls, lt) = (logical_at[s], logical_at[t]);
            logical_at[s] = lt;
            logical_at[t] = ls;
            if let Some(q) = ls {
                site_of[q] = t;
            }
            if let Some(q) = lt {
                site_of[q] = s;
            }
        }
    }

    Ok(Routed {
        circuit: out,
        initial: placement.clone(),
        final_placement: Placement::new(site_of, g.n_sites())?,
        swaps,
    })
}

/// Number of SWAPs [`route`] inserts for `c` under the centered placement.
pub fn swap_overhead(c: &Circuit, g: &CouplingGraph) -> Result<usize> {
    let p = Placement::centered(c.n_qubits(), g)?;
    Ok(route(c, g, &p)?.swaps)
}

/// True when every 2-qubit op of `c` acts on an edge of `g`.
pub fn respects_coupling(c: &Circuit, g: &CouplingGraph) -> bool {
    c.ops()
        .iter()
        .filter(|op| op.arity() >= 2)
        .all(|op| op.arity() == 2 && g.is_adjacent(op.targets[0], op.targets[1]))
}
