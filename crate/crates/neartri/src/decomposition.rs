//! Decomposition of irreducible near-triangulations: the boundary subgraph,
//! the polygon regions its diagonals cut out, the dual tree over regions, and
//! terminal polygons; plus diagonal splits of the host graph and of MOPs.

use thiserror::Error;

use crate::embedding::{GraphClass, NearTriangulation, VertexId};
use crate::surgery::{EdgeRef, SurgeryError, VertexMap};

#[derive(Debug, Error)]
pub enum DecompositionError {
    #[error("not irreducible: {0:?}")]
    NotIrreducible(GraphClass),
    #[error("not a terminal polygon")]
    NotTerminal,
    #[error("{0} is not a side of the region")]
    NotASide(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
}

/// The subgraph induced by the boundary cycle: Hamiltonian and outerplanar.
#[derive(Debug, Clone)]
pub struct BoundarySubgraph {
    /// Boundary vertices in clockwise order.
    pub order: Vec<VertexId>,
    /// Adjacency restricted to boundary vertices, indexed by original id.
    adj: Vec<Vec<VertexId>>,
}

impl BoundarySubgraph {
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.order.iter().map(|&v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u as usize].contains(&v)
    }

    /// Vertices of degree 2 in this subgraph.
    pub fn degree2_vertices(&self) -> Vec<VertexId> {
        self.order.iter().copied().filter(|&v| self.degree(v) == 2).collect()
    }

    /// Two non-adjacent degree-2 vertices, when the subgraph has at least 4
    /// vertices.
    pub fn two_nonadjacent_degree2(&self) -> Option<(VertexId, VertexId)> {
        let d2 = self.degree2_vertices();
        for (i, &a) in d2.iter().enumerate() {
            for &b in &d2[i + 1..] {
                if !self.has_edge(a, b) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

/// T[C]: the induced subgraph on the boundary vertices.
pub fn boundary_subgraph(t: &NearTriangulation) -> BoundarySubgraph {
    let mut adj = vec![Vec::new(); t.n()];
    for &v in t.boundary() {
        adj[v as usize] = t
            .rotation(v)
            .iter()
            .copied()
            .filter(|&w| t.on_boundary(w))
            .collect();
    }
    BoundarySubgraph {
        order: t.boundary().to_vec(),
        adj,
    }
}

/// One region cut out of the interior of the boundary cycle by the diagonals
/// of T[C].
#[derive(Debug, Clone)]
pub struct PolygonRegion {
    /// Corner vertices, clockwise along the outer boundary, starting at the
    /// corner with the smallest boundary position.
    pub corner_vertices: Vec<VertexId>,
    /// Region sides: consecutive corner pairs.
    pub sides: Vec<EdgeRef>,
    /// Interior vertices of the host graph lying strictly inside the region.
    pub interior_count: usize,
    /// The interior vertices themselves, sorted.
    pub interior_vertices: Vec<VertexId>,
    pub terminal: bool,
    /// One vertex inside or on this region that is not shared with other
    /// regions, used to identify its side after a split.
    pub(crate) marker: VertexId,
}

impl PolygonRegion {
    pub fn is_empty(&self) -> bool {
        self.interior_count == 0
    }
}

/// The regions plus the dual tree over them (adjacency = shared diagonal).
#[derive(Debug, Clone)]
pub struct PolygonDecomposition {
    pub regions: Vec<PolygonRegion>,
    /// Tree edges `(region a, region b, shared diagonal)`.
    pub dual_edges: Vec<(usize, usize, EdgeRef)>,
}

impl PolygonDecomposition {
    pub fn non_empty(&self) -> impl Iterator<Item = (usize, &PolygonRegion)> {
        self.regions.iter().enumerate().filter(|(_, r)| !r.is_empty())
    }

    pub fn terminal_regions(&self) -> Vec<usize> {
        self.regions
            .iter()
            .enumerate()
            .filter(|(_, r)| r.terminal)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Computes the polygon regions of an irreducible near-triangulation, their
/// interior loads, the dual tree, and the terminal flags.
pub fn decompose(t: &NearTriangulation) -> Result<PolygonDecomposition, DecompositionError> {
    let class = t.classify();
    if class != GraphClass::Irreducible {
        return Err(DecompositionError::NotIrreducible(class));
    }
    Ok(decompose_unchecked(t))
}

pub(crate) fn decompose_unchecked(t: &NearTriangulation) -> PolygonDecomposition {
    let faces = t.faces();
    let inner: Vec<usize> = (0..faces.len()).filter(|&i| !faces[i].outer).collect();
    let mut edge_face = std::collections::HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for k in 0..f.cycle.len() {
            edge_face.insert((f.cycle[k], f.cycle[(k + 1) % f.cycle.len()]), i);
        }
    }
    // flood inner faces; crossing an edge of T[C] is blocked
    let mut comp = vec![usize::MAX; faces.len()];
    let mut n_comp = 0usize;
    for &start in &inner {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = n_comp;
        n_comp += 1;
        let mut stack = vec![start];
        comp[start] = id;
        while let Some(i) = stack.pop() {
            let f = &faces[i];
            for k in 0..f.cycle.len() {
                let (a, b) = (f.cycle[k], f.cycle[(k + 1) % f.cycle.len()]);
                if t.on_boundary(a) && t.on_boundary(b) {
                    continue;
                }
                let j = edge_face[&(b, a)];
                if !faces[j].outer && comp[j] == usize::MAX {
                    comp[j] = id;
                    stack.push(j);
                }
            }
        }
    }
    let mut regions = Vec::with_capacity(n_comp);
    for id in 0..n_comp {
        let face_indices: Vec<usize> = inner.iter().copied().filter(|&i| comp[i] == id).collect();
        // region boundary: directed T[C] edges whose twin lies outside the component
        let mut next_corner = std::collections::HashMap::new();
        let mut interior = std::collections::HashSet::new();
        for &i in &face_indices {
            let f = &faces[i];
            for k in 0..f.cycle.len() {
                let (a, b) = (f.cycle[k], f.cycle[(k + 1) % f.cycle.len()]);
                if t.is_interior(a) {
                    interior.insert(a);
                }
                if t.on_boundary(a) && t.on_boundary(b) {
                    let j = edge_face[&(b, a)];
                    if faces[j].outer || comp[j] != id {
                        next_corner.insert(a, b);
                    }
                }
            }
        }
        let &first = next_corner.keys().min().expect("region has corners");
        let mut cycle = vec![first];
        let mut cur = next_corner[&first];
        while cur != first {
            cycle.push(cur);
            cur = next_corner[&cur];
            assert!(cycle.len() <= next_corner.len(), "region boundary is a single cycle");
        }
        assert_eq!(cycle.len(), next_corner.len(), "region boundary is a single cycle");
        // region cycles run against the outer orientation; normalize to the
        // clockwise boundary order, starting at the smallest boundary position
        cycle.reverse();
        let minpos = cycle
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| t.boundary_position(v).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        cycle.rotate_left(minpos);
        let sides: Vec<EdgeRef> = (0..cycle.len())
            .map(|i| EdgeRef::new(cycle[i], cycle[(i + 1) % cycle.len()]))
            .collect();
        let mut interior_vertices: Vec<VertexId> = interior.into_iter().collect();
        interior_vertices.sort_unstable();
        let marker = interior_vertices
            .first()
            .copied()
            .unwrap_or_else(|| middle_corner_marker(&cycle));
        regions.push(PolygonRegion {
            corner_vertices: cycle,
            sides,
            interior_count: interior_vertices.len(),
            interior_vertices,
            terminal: false,
            marker,
        });
    }
    // dual tree: regions sharing a diagonal
    let mut by_side: std::collections::HashMap<EdgeRef, Vec<usize>> = std::collections::HashMap::new();
    for (i, r) in regions.iter().enumerate() {
        for &s in &r.sides {
            if crate::surgery::is_diagonal(t, s) {
                by_side.entry(s).or_default().push(i);
            }
        }
    }
    let mut dual_edges = Vec::new();
    for (s, rs) in &by_side {
        assert_eq!(rs.len(), 2, "a diagonal borders exactly two regions");
        dual_edges.push((rs[0].min(rs[1]), rs[0].max(rs[1]), *s));
    }
    dual_edges.sort_unstable_by_key(|&(a, b, _)| (a, b));
    assert_eq!(
        dual_edges.len() + 1,
        regions.len(),
        "the dual graph over regions is a tree"
    );
    // far-side interior loads via rooted subtree sums
    let total_interior: usize = regions.iter().map(|r| r.interior_count).sum();
    debug_assert_eq!(total_interior, t.interior_count());
    let mut tree_adj: Vec<Vec<(usize, EdgeRef)>> = vec![Vec::new(); regions.len()];
    for &(a, b, s) in &dual_edges {
        tree_adj[a].push((b, s));
        tree_adj[b].push((a, s));
    }
    let mut parent = vec![usize::MAX; regions.len()];
    let mut order = Vec::with_capacity(regions.len());
    let mut stack = vec![0usize];
    let mut seen = vec![false; regions.len()];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &(w, _) in &tree_adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    let mut subtree = vec![0usize; regions.len()];
    for &v in order.iter().rev() {
        subtree[v] = regions[v].interior_count;
        for &(w, _) in &tree_adj[v] {
            if parent[w] == v {
                subtree[v] += subtree[w];
            }
        }
    }
    for i in 0..regions.len() {
        if regions[i].is_empty() {
            continue;
        }
        let mut loaded_sides = 0usize;
        for &(w, _) in &tree_adj[i] {
            let far = if parent[w] == i {
                subtree[w]
            } else {
                total_interior - subtree[i]
            };
            if far > 0 {
                loaded_sides += 1;
            }
        }
        regions[i].terminal = loaded_sides <= 1;
    }
    let decomposition = PolygonDecomposition { regions, dual_edges };
    if decomposition.non_empty().next().is_some() {
        assert!(
            !decomposition.terminal_regions().is_empty(),
            "an irreducible near-triangulation has a terminal polygon"
        );
    }
    decomposition
}

fn middle_corner_marker(cycle: &[VertexId]) -> VertexId {
    // for an empty region any non-endpoint corner of a chosen side works;
    // callers only use markers of the region opposite a split side
    cycle[1]
}

/// The two sides of a diagonal split.
#[derive(Debug)]
pub struct SplitPair {
    /// Side containing the reference region (or marker).
    pub inner: NearTriangulation,
    pub inner_map: VertexMap,
    pub outer: NearTriangulation,
    pub outer_map: VertexMap,
    pub shared: EdgeRef,
}

/// Splits `t` along a diagonal into the side containing `marker` (`inner`)
/// and the other side (`outer`).
pub fn split_at_diagonal(
    t: &NearTriangulation,
    d: EdgeRef,
    marker: VertexId,
) -> Result<SplitPair, DecompositionError> {
    if !crate::surgery::is_diagonal(t, d) {
        return Err(DecompositionError::NotASide(format!("({}, {})", d.u, d.v)));
    }
    let faces = t.faces();
    let mut edge_face = std::collections::HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for k in 0..f.cycle.len() {
            edge_face.insert((f.cycle[k], f.cycle[(k + 1) % f.cycle.len()]), i);
        }
    }
    let f1 = edge_face[&(d.u, d.v)];
    let mut side_a = vec![false; faces.len()];
    side_a[f1] = true;
    let mut stack = vec![f1];
    while let Some(i) = stack.pop() {
        let f = &faces[i];
        for k in 0..f.cycle.len() {
            let (a, b) = (f.cycle[k], f.cycle[(k + 1) % f.cycle.len()]);
            if EdgeRef::new(a, b) == d {
                continue;
            }
            let j = edge_face[&(b, a)];
            if !faces[j].outer && !side_a[j] {
                side_a[j] = true;
                stack.push(j);
            }
        }
    }
    let build = |in_side: &dyn Fn(usize) -> bool, start: (VertexId, VertexId)| {
        let mut keep = vec![false; t.n()];
        for (i, f) in faces.iter().enumerate() {
            if !f.outer && in_side(i) {
                for &v in &f.cycle {
                    keep[v as usize] = true;
                }
            }
        }
        let mut rotation: Vec<Vec<VertexId>> = vec![Vec::new(); t.n()];
        for v in 0..t.n() as VertexId {
            if keep[v as usize] {
                rotation[v as usize] = t
                    .rotation(v)
                    .iter()
                    .copied()
                    .filter(|&w| keep[w as usize])
                    .collect();
            }
        }
        let boundary = raw_trace(&rotation, start.0, start.1);
        let map = VertexMap::from_kept(t.n(), |x| keep[x as usize]);
        crate::surgery::renumber(rotation, boundary, &map).map(|g| (g, map))
    };
    // the side holding the face of (u -> v) misses the face of (v -> u), so
    // tracing (v -> u) inside it walks its outer face, and vice versa
    let (ga, ma) = build(&|i| side_a[i], (d.v, d.u))?;
    let (gb, mb) = build(&|i| !faces[i].outer && !side_a[i], (d.u, d.v))?;
    assert_eq!(ga.n() + gb.n(), t.n() + 2, "split size identity");
    if d.contains(marker) {
        return Err(DecompositionError::Precondition(format!(
            "marker {marker} lies on the split diagonal"
        )));
    }
    let (inner, inner_map, outer, outer_map) = if ma.to_new(marker).is_some() {
        (ga, ma, gb, mb)
    } else {
        debug_assert!(mb.to_new(marker).is_some());
        (gb, mb, ga, ma)
    };
    Ok(SplitPair {
        inner,
        inner_map,
        outer,
        outer_map,
        shared: d,
    })
}

fn raw_trace(rotation: &[Vec<VertexId>], u: VertexId, v: VertexId) -> Vec<VertexId> {
    let next_after = |b: VertexId, a: VertexId| {
        let rot = &rotation[b as usize];
        let p = rot.iter().position(|&x| x == a).expect("edge endpoint present");
        rot[(p + 1) % rot.len()]
    };
    let mut cycle = vec![u];
    let (mut a, mut b) = (u, v);
    loop {
        let c = next_after(b, a);
        cycle.push(b);
        a = b;
        b = c;
        if (a, b) == (u, v) {
            cycle.pop();
            break;
        }
    }
    cycle
}

/// Splits `t` along a side of region `p`; `inner` is the part containing `p`.
pub fn split_by_diagonal(
    t: &NearTriangulation,
    d: EdgeRef,
    p: &PolygonRegion,
) -> Result<SplitPair, DecompositionError> {
    if !p.sides.contains(&d) {
        return Err(DecompositionError::NotASide(format!("({}, {})", d.u, d.v)));
    }
    split_at_diagonal(t, d, p.marker)
}

/// One outer part around a terminal polygon.
#[derive(Debug)]
pub struct SurroundingMop {
    pub graph: NearTriangulation,
    pub map: VertexMap,
    /// The shared diagonal, as parent-graph vertices.
    pub diagonal: EdgeRef,
    pub is_mop: bool,
}

/// The outer parts `M_1..M_k` around a terminal polygon, clockwise, with the
/// single non-MOP part (or the largest MOP) placed last.
pub fn mops_around(
    t: &NearTriangulation,
    p: &PolygonRegion,
) -> Result<Vec<SurroundingMop>, DecompositionError> {
    if !p.terminal {
        return Err(DecompositionError::NotTerminal);
    }
    let k = p.corner_vertices.len();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let d = EdgeRef::new(p.corner_vertices[i], p.corner_vertices[(i + 1) % k]);
        if !crate::surgery::is_diagonal(t, d) {
            return Err(DecompositionError::Precondition(format!(
                "side ({}, {}) of a non-empty region must be a diagonal",
                d.u, d.v
            )));
        }
        let split = split_by_diagonal(t, d, p)?;
        let is_mop = split.outer.interior_count() == 0;
        assert!(split.outer.n() >= 3, "outer parts have at least three vertices");
        out.push(SurroundingMop {
            graph: split.outer,
            map: split.outer_map,
            diagonal: d,
            is_mop,
        });
    }
    let non_mops: Vec<usize> = (0..k).filter(|&i| !out[i].is_mop).collect();
    assert!(non_mops.len() <= 1, "terminal polygon has at most one loaded side");
    let special = match non_mops.first() {
        Some(&i) => {
            assert!(out[i].graph.n() >= 6, "a loaded outer part has at least 6 vertices");
            i
        }
        None => {
            let max = out.iter().map(|m| m.graph.n()).max().unwrap();
            out.iter().position(|m| m.graph.n() == max).unwrap()
        }
    };
    out.rotate_left((special + 1) % k);
    Ok(out)
}

/// A diagonal of a MOP with at least 10 vertices splitting it into two MOPs,
/// the qualifying side having 6..=9 vertices and excluding the edge `avoid`.
pub fn mop_split_diagonal(
    m: &NearTriangulation,
    avoid: EdgeRef,
) -> Result<EdgeRef, DecompositionError> {
    if m.classify() != GraphClass::Mop || m.n() < 10 {
        return Err(DecompositionError::Precondition(format!(
            "splitting needs a MOP with n >= 10, got n = {}",
            m.n()
        )));
    }
    let n = m.n();
    let pos = |v: VertexId| m.boundary_position(v).unwrap();
    if !(m.has_edge(avoid.u, avoid.v)
        && (m.boundary_next(avoid.u) == avoid.v || m.boundary_next(avoid.v) == avoid.u))
    {
        return Err(DecompositionError::Precondition(
            "avoid must be a boundary edge".into(),
        ));
    }
    let avoid_start = if m.boundary_next(avoid.u) == avoid.v {
        pos(avoid.u)
    } else {
        pos(avoid.v)
    };
    let mut best: Option<(usize, EdgeRef)> = None;
    for d in crate::surgery::diagonals(m) {
        let (pa, pb) = (pos(d.u), pos(d.v));
        for (lo, hi) in [(pa, pb), (pb, pa)] {
            let len = (hi + n - lo) % n; // arc lo..hi, vertex count len + 1
            let size = len + 1;
            if !(6..=9).contains(&size) {
                continue;
            }
            // the avoid edge spans positions avoid_start..avoid_start+1
            let off = (avoid_start + n - lo) % n;
            if off < len {
                continue; // avoid edge inside this arc
            }
            let cand = (size, d);
            match best {
                Some((bs, bd)) if bs < size || (bs == size && (bd.u, bd.v) <= (d.u, d.v)) => {}
                _ => best = Some(cand),
            }
        }
    }
    best.map(|(_, d)| d).ok_or_else(|| {
        DecompositionError::Precondition("no qualifying split diagonal (contradicts the guarantee)".into())
    })
}
