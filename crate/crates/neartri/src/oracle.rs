//! Exact minimum total domination for arbitrary small graphs.
//!
//! Independent ground truth for everything else: a branch-and-bound that
//! branches on an undominated vertex with the fewest neighbors, with a greedy
//! upper bound and size pruning. Deterministic: among minimum solutions it
//! returns the lexicographically smallest vertex set.

use thiserror::Error;

use crate::cert::TdsCertificate;
use crate::embedding::{NearTriangulation, VertexId};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("graph too large: n = {0} exceeds max_n = {1}")]
    TooLarge(usize, usize),
    #[error("search budget exceeded after {0} nodes")]
    BudgetExceeded(u64),
}

/// Search limits; exceeding a budget aborts with an error, never a wrong
/// answer.
#[derive(Debug, Clone)]
pub struct SearchLimits {
    pub max_n: usize,
    pub node_budget: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_n: 25,
            node_budget: 50_000_000,
        }
    }
}

/// Constraints for a constrained exact solve.
#[derive(Debug, Clone, Default)]
pub struct Constraints {
    pub must_contain: Vec<VertexId>,
    pub max_size: Option<usize>,
}

/// Plain adjacency-list graph for oracle queries.
#[derive(Debug, Clone)]
pub struct Graph {
    pub n: usize,
    pub adj: Vec<Vec<VertexId>>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Graph { n, adj }
    }
}

impl From<&NearTriangulation> for Graph {
    fn from(t: &NearTriangulation) -> Graph {
        let mut adj: Vec<Vec<VertexId>> = t.rotations().to_vec();
        for a in &mut adj {
            a.sort_unstable();
        }
        Graph { n: t.n(), adj }
    }
}

/// True iff every vertex of `g` (including members of `set`) has a neighbor
/// in `set`.
pub fn is_tds(g: &Graph, set: &[VertexId]) -> bool {
    let mut in_set = vec![false; g.n];
    for &v in set {
        in_set[v as usize] = true;
    }
    (0..g.n).all(|v| g.adj[v].iter().any(|&w| in_set[w as usize]))
}

/// `is_tds` directly on a near-triangulation.
pub fn is_tds_of(t: &NearTriangulation, set: &[VertexId]) -> bool {
    let mut in_set = vec![false; t.n()];
    for &v in set {
        in_set[v as usize] = true;
    }
    (0..t.n() as VertexId).all(|v| t.rotation(v).iter().any(|&w| in_set[w as usize]))
}

/// Outcome of an exact solve.
#[derive(Debug, Clone)]
pub enum Outcome {
    Found(TdsCertificate),
    Infeasible,
}

impl Outcome {
    pub fn expect(self, msg: &str) -> TdsCertificate {
        match self {
            Outcome::Found(c) => c,
            Outcome::Infeasible => panic!("{msg}: infeasible"),
        }
    }

    pub fn found(self) -> Option<TdsCertificate> {
        match self {
            Outcome::Found(c) => Some(c),
            Outcome::Infeasible => None,
        }
    }
}

struct Search<'a> {
    adj_mask: Vec<u64>,
    n: usize,
    full: u64,
    limits: &'a SearchLimits,
    nodes: u64,
    best: Option<(u32, u64)>,
    cap: u32,
    forbidden: u64,
}

impl Search<'_> {
    fn run(&mut self, chosen: u64, dominated: u64, count: u32) -> Result<(), OracleError> {
        self.nodes += 1;
        if self.nodes > self.limits.node_budget {
            return Err(OracleError::BudgetExceeded(self.nodes));
        }
        if dominated == self.full {
            if self.best.map_or(true, |(c, _)| count < c) {
                self.best = Some((count, chosen));
            }
            return Ok(());
        }
        let bound = self.best.map_or(self.cap + 1, |(c, _)| c);
        if count + 1 >= bound {
            return Ok(());
        }
        // lower bound: each added vertex dominates at most max_cover new ones
        let undom = self.full & !dominated;
        let mut max_cover = 0u32;
        for v in 0..self.n {
            if (self.forbidden >> v) & 1 == 1 {
                continue;
            }
            let cover = (self.adj_mask[v] & undom).count_ones();
            max_cover = max_cover.max(cover);
        }
        if max_cover == 0 {
            return Ok(()); // remaining undominated vertices cannot be covered
        }
        let need = undom.count_ones().div_ceil(max_cover);
        if count + need >= bound {
            return Ok(());
        }
        // branch on the undominated vertex with the fewest usable dominators
        let mut pick = usize::MAX;
        let mut pick_deg = u32::MAX;
        for v in 0..self.n {
            if (undom >> v) & 1 == 1 {
                let cands = (self.adj_mask[v] & !self.forbidden).count_ones();
                if cands < pick_deg {
                    pick_deg = cands;
                    pick = v;
                }
            }
        }
        if pick_deg == 0 {
            return Ok(()); // this vertex can never be dominated
        }
        let cands = self.adj_mask[pick] & !self.forbidden;
        for u in 0..self.n {
            if (cands >> u) & 1 == 1 {
                debug_assert_eq!((chosen >> u) & 1, 0, "chosen neighbor would dominate");
                self.run(chosen | (1 << u), dominated | self.adj_mask[u], count + 1)?;
            }
        }
        Ok(())
    }
}

fn solve_masked(
    g: &Graph,
    must: u64,
    forbidden: u64,
    max_size: usize,
    limits: &SearchLimits,
) -> Result<Option<(u32, u64)>, OracleError> {
    let n = g.n;
    let mut adj_mask = vec![0u64; n];
    for v in 0..n {
        for &w in &g.adj[v] {
            adj_mask[v] |= 1 << w;
        }
    }
    if must & forbidden != 0 {
        return Ok(None);
    }
    let mut dominated = 0u64;
    for v in 0..n {
        if (must >> v) & 1 == 1 {
            dominated |= adj_mask[v];
        }
    }
    let mut search = Search {
        adj_mask,
        n,
        full: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
        limits,
        nodes: 0,
        best: None,
        cap: max_size as u32,
        forbidden,
    };
    search.run(must, dominated, must.count_ones())?;
    Ok(search.best.filter(|&(c, _)| c <= max_size as u32))
}

/// Minimum-size total dominating set satisfying the constraints, or
/// `Infeasible`. The returned set is the lexicographically smallest among the
/// minimum ones.
pub fn exact_tds(g: &Graph, cons: &Constraints) -> Result<Outcome, OracleError> {
    exact_tds_limited(g, cons, &SearchLimits::default())
}

pub fn exact_tds_limited(
    g: &Graph,
    cons: &Constraints,
    limits: &SearchLimits,
) -> Result<Outcome, OracleError> {
    if g.n > limits.max_n {
        return Err(OracleError::TooLarge(g.n, limits.max_n));
    }
    if g.n > 64 {
        return Err(OracleError::TooLarge(g.n, 64));
    }
    let mut must = 0u64;
    for &v in &cons.must_contain {
        must |= 1 << v;
    }
    let cap = cons.max_size.unwrap_or(g.n);
    let Some((size, _)) = solve_masked(g, must, 0, cap, limits)? else {
        return Ok(Outcome::Infeasible);
    };
    // lexicographically smallest witness of that size: decide membership
    // vertex by vertex, preferring inclusion of small ids
    let mut chosen = must;
    let mut out = 0u64;
    for v in 0..g.n {
        if (chosen >> v) & 1 == 1 {
            continue;
        }
        if chosen.count_ones() == size {
            out |= 1 << v;
            continue;
        }
        match solve_masked(g, chosen | (1 << v), out, size as usize, limits)? {
            Some((s, _)) if s == size => chosen |= 1 << v,
            _ => out |= 1 << v,
        }
    }
    debug_assert_eq!(chosen.count_ones(), size);
    let vertices: Vec<VertexId> = (0..g.n as VertexId)
        .filter(|&v| (chosen >> v) & 1 == 1)
        .collect();
    debug_assert!(is_tds(g, &vertices));
    Ok(Outcome::Found(TdsCertificate::new(g.n, vertices, Vec::new())))
}

/// Just the minimum size (skips the lexicographic reconstruction pass).
pub fn gamma_t(g: &Graph, limits: &SearchLimits) -> Result<Option<usize>, OracleError> {
    if g.n > limits.max_n {
        return Err(OracleError::TooLarge(g.n, limits.max_n));
    }
    if g.n > 64 {
        return Err(OracleError::TooLarge(g.n, 64));
    }
    Ok(solve_masked(g, 0, 0, g.n, limits)?.map(|(c, _)| c as usize))
}
