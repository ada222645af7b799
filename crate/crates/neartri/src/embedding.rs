//! Combinatorial embeddings of near-triangulations.
//!
//! A near-triangulation is stored as a rotation system (clockwise neighbor
//! order per vertex) together with the clockwise outer boundary cycle.
//! Validation traces all faces of the embedding and checks that exactly one
//! face equals the declared boundary while every other face is a triangle.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

/// Dense vertex index, contiguous `0..n` within one graph value.
pub type VertexId = u32;

/// Class of a valid near-triangulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphClass {
    /// No interior vertices: a triangulated polygon.
    Mop,
    /// Has interior vertices and some boundary edge whose inner triangle apex
    /// is interior.
    Reducible,
    /// Has interior vertices but every boundary edge's inner apex lies on the
    /// boundary cycle.
    Irreducible,
}

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("size exceeded: {0}")]
    SizeExceeded(String),
}

fn invariant(msg: impl Into<String>) -> EmbeddingError {
    EmbeddingError::Invariant(msg.into())
}

/// One face of the embedding, as the vertex cycle produced by face traversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub cycle: Vec<VertexId>,
    pub outer: bool,
}

/// A validated near-triangulation.
///
/// Values are immutable after validation; all surgery produces fresh values.
#[derive(Debug, Clone)]
pub struct NearTriangulation {
    n: usize,
    rotation: Vec<Vec<VertexId>>,
    boundary: Vec<VertexId>,
    // derived, kept for O(1) lookups
    pos_in_rot: Vec<HashMap<VertexId, usize>>,
    boundary_pos: Vec<Option<usize>>,
    edges: usize,
}

impl NearTriangulation {
    /// Validates a rotation system plus boundary cycle and wraps it.
    pub fn new(
        n: usize,
        rotation: Vec<Vec<VertexId>>,
        boundary: Vec<VertexId>,
    ) -> Result<Self, EmbeddingError> {
        if n < 3 {
            return Err(invariant(format!("vertex count {n} < 3")));
        }
        if rotation.len() != n {
            return Err(invariant(format!(
                "expected {n} rotation lines, got {}",
                rotation.len()
            )));
        }
        let h = boundary.len();
        if h < 3 || h > n {
            return Err(invariant(format!("boundary length {h} out of range 3..={n}")));
        }
        let mut seen = vec![false; n];
        for &v in &boundary {
            if v as usize >= n {
                return Err(invariant(format!("boundary vertex {v} out of range")));
            }
            if seen[v as usize] {
                return Err(invariant(format!("boundary repeats vertex {v}")));
            }
            seen[v as usize] = true;
        }

        // simple graph: no loops, no duplicate neighbors, symmetric adjacency
        let mut pos_in_rot: Vec<HashMap<VertexId, usize>> = Vec::with_capacity(n);
        let mut half_edges = 0usize;
        for (v, rot) in rotation.iter().enumerate() {
            let mut pos = HashMap::with_capacity(rot.len());
            for (i, &w) in rot.iter().enumerate() {
                if w as usize >= n {
                    return Err(invariant(format!("neighbor {w} of {v} out of range")));
                }
                if w as usize == v {
                    return Err(invariant(format!("loop at vertex {v}")));
                }
                if pos.insert(w, i).is_some() {
                    return Err(invariant(format!("duplicate neighbor {w} in rotation of {v}")));
                }
            }
            if rot.len() < 2 {
                return Err(invariant(format!("vertex {v} has degree {} < 2", rot.len())));
            }
            half_edges += rot.len();
            pos_in_rot.push(pos);
        }
        for (v, rot) in rotation.iter().enumerate() {
            for &w in rot {
                if !pos_in_rot[w as usize].contains_key(&(v as VertexId)) {
                    return Err(invariant(format!(
                        "rotation asymmetry: {v} lists {w} but not vice versa"
                    )));
                }
            }
        }
        let edges = half_edges / 2;

        let mut boundary_pos = vec![None; n];
        for (i, &v) in boundary.iter().enumerate() {
            boundary_pos[v as usize] = Some(i);
        }

        let t = NearTriangulation {
            n,
            rotation,
            boundary,
            pos_in_rot,
            boundary_pos,
            edges,
        };

        t.check_connected()?;
        t.check_biconnected()?;
        t.check_faces()?;
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn boundary(&self) -> &[VertexId] {
        &self.boundary
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary.len()
    }

    pub fn rotation(&self, v: VertexId) -> &[VertexId] {
        &self.rotation[v as usize]
    }

    pub fn rotations(&self) -> &[Vec<VertexId>] {
        &self.rotation
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v as usize].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.pos_in_rot[u as usize].contains_key(&v)
    }

    pub fn on_boundary(&self, v: VertexId) -> bool {
        self.boundary_pos[v as usize].is_some()
    }

    pub fn boundary_position(&self, v: VertexId) -> Option<usize> {
        self.boundary_pos[v as usize]
    }

    pub fn is_interior(&self, v: VertexId) -> bool {
        self.boundary_pos[v as usize].is_none()
    }

    pub fn interior_count(&self) -> usize {
        self.n - self.boundary.len()
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.n as VertexId).filter(|&v| self.is_interior(v))
    }

    /// Boundary successor of a boundary vertex.
    pub fn boundary_next(&self, v: VertexId) -> VertexId {
        let p = self.boundary_pos[v as usize].expect("vertex not on boundary");
        self.boundary[(p + 1) % self.boundary.len()]
    }

    /// Boundary predecessor of a boundary vertex.
    pub fn boundary_prev(&self, v: VertexId) -> VertexId {
        let p = self.boundary_pos[v as usize].expect("vertex not on boundary");
        self.boundary[(p + self.boundary.len() - 1) % self.boundary.len()]
    }

    /// The neighbor following `u` in the clockwise rotation around `v`.
    pub fn next_after(&self, v: VertexId, u: VertexId) -> VertexId {
        let rot = &self.rotation[v as usize];
        let p = self.pos_in_rot[v as usize][&u];
        rot[(p + 1) % rot.len()]
    }

    /// Traces the face containing directed edge `(u, v)`.
    pub fn trace_face(&self, u: VertexId, v: VertexId) -> Vec<VertexId> {
        trace_face_in(&self.rotation, &self.pos_in_rot, u, v)
    }

    /// All faces of the embedding. The outer face is flagged; every directed
    /// edge appears in exactly one face traversal.
    pub fn faces(&self) -> Vec<Face> {
        let mut visited: HashSet<(VertexId, VertexId)> = HashSet::with_capacity(2 * self.edges);
        let mut out = Vec::new();
        for u in 0..self.n as VertexId {
            for &v in &self.rotation[u as usize] {
                if visited.contains(&(u, v)) {
                    continue;
                }
                let cycle = self.trace_face(u, v);
                for i in 0..cycle.len() {
                    visited.insert((cycle[i], cycle[(i + 1) % cycle.len()]));
                }
                let outer = cyclic_eq(&cycle, &self.boundary);
                out.push(Face { cycle, outer });
            }
        }
        out
    }

    /// Apex of the inner triangle adjacent to the boundary edge
    /// `(u, boundary_next(u))`.
    pub fn inner_apex(&self, u: VertexId) -> VertexId {
        let v = self.boundary_next(u);
        self.next_after(u, v)
    }

    /// MOP / Reducible / Irreducible classification.
    pub fn classify(&self) -> GraphClass {
        if self.interior_count() == 0 {
            return GraphClass::Mop;
        }
        for &u in &self.boundary {
            if self.is_interior(self.inner_apex(u)) {
                return GraphClass::Reducible;
            }
        }
        GraphClass::Irreducible
    }

    /// The mirror image: every rotation reversed and the boundary reversed.
    pub fn mirror(&self) -> NearTriangulation {
        let rotation: Vec<Vec<VertexId>> = self
            .rotation
            .iter()
            .map(|r| r.iter().rev().copied().collect())
            .collect();
        let mut boundary = self.boundary.clone();
        boundary.reverse();
        NearTriangulation::new(self.n, rotation, boundary)
            .expect("mirror of a valid embedding is valid")
    }

    fn check_connected(&self) -> Result<(), EmbeddingError> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0 as VertexId];
        seen[0] = true;
        let mut count = 0;
        while let Some(v) = stack.pop() {
            count += 1;
            for &w in &self.rotation[v as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        if count != self.n {
            return Err(invariant("graph is not connected"));
        }
        Ok(())
    }

    fn check_biconnected(&self) -> Result<(), EmbeddingError> {
        // iterative articulation-point DFS
        let n = self.n;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut parent = vec![usize::MAX; n];
        let mut child_count = vec![0usize; n];
        let mut timer = 0usize;
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        disc[0] = 0;
        low[0] = 0;
        timer += 1;
        while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
            if *idx < self.rotation[v].len() {
                let w = self.rotation[v][*idx] as usize;
                *idx += 1;
                if disc[w] == usize::MAX {
                    parent[w] = v;
                    child_count[v] += 1;
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, 0));
                } else if w != parent[v] {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if parent[p] != usize::MAX && low[v] >= disc[p] {
                        return Err(invariant(format!("graph is not biconnected (cut vertex {p})")));
                    }
                }
            }
        }
        if child_count[0] > 1 {
            return Err(invariant("graph is not biconnected (cut vertex 0)"));
        }
        Ok(())
    }

    fn check_faces(&self) -> Result<(), EmbeddingError> {
        let faces = self.faces();
        let outer_count = faces.iter().filter(|f| f.outer).count();
        if outer_count == 0 {
            // help the caller notice a counterclockwise boundary
            let mut rev = self.boundary.clone();
            rev.reverse();
            for f in &faces {
                if cyclic_eq(&f.cycle, &rev) {
                    return Err(invariant(
                        "boundary is counterclockwise (its reversal is a face)",
                    ));
                }
            }
            return Err(invariant("boundary is not a face of the embedding"));
        }
        if outer_count > 1 {
            return Err(invariant("boundary traced as two distinct faces"));
        }
        for (k, f) in faces.iter().enumerate() {
            let mut distinct = HashSet::with_capacity(f.cycle.len());
            for &v in &f.cycle {
                if !distinct.insert(v) {
                    return Err(invariant(format!("face #{k} repeats vertex {v}")));
                }
            }
            if !f.outer && f.cycle.len() != 3 {
                return Err(invariant(format!(
                    "non-triangular inner face at face #{k} (length {})",
                    f.cycle.len()
                )));
            }
        }
        let f = faces.len() as i64;
        let euler = self.n as i64 - self.edges as i64 + f;
        if euler != 2 {
            return Err(invariant(format!(
                "euler mismatch: n - e + f = {} - {} + {} = {euler}",
                self.n, self.edges, f
            )));
        }
        Ok(())
    }
}

fn trace_face_in(
    rotation: &[Vec<VertexId>],
    pos_in_rot: &[HashMap<VertexId, usize>],
    u: VertexId,
    v: VertexId,
) -> Vec<VertexId> {
    let mut cycle = vec![u];
    let (mut a, mut b) = (u, v);
    loop {
        let rot = &rotation[b as usize];
        let p = pos_in_rot[b as usize][&a];
        let c = rot[(p + 1) % rot.len()];
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

/// Directed cyclic equality: same cycle, same direction, any start.
pub fn cyclic_eq(a: &[VertexId], b: &[VertexId]) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return false;
    }
    let start = b[0];
    if let Some(off) = a.iter().position(|&x| x == start) {
        (0..a.len()).all(|i| a[(off + i) % a.len()] == b[i])
    } else {
        false
    }
}

/// Builds a near-triangulation from an explicit face list.
///
/// Every face is given as a directed vertex cycle; each directed edge must
/// appear in exactly one face. `faces[outer]` becomes the boundary.
pub fn from_faces(
    n: usize,
    faces: &[Vec<VertexId>],
    outer: usize,
) -> Result<NearTriangulation, EmbeddingError> {
    let mut succ: Vec<HashMap<VertexId, VertexId>> = vec![HashMap::new(); n];
    for face in faces {
        let len = face.len();
        for i in 0..len {
            let a = face[i];
            let b = face[(i + 1) % len];
            let c = face[(i + 2) % len];
            if succ[b as usize].insert(a, c).is_some() {
                return Err(invariant(format!(
                    "directed edge ({a},{b}) appears in two faces"
                )));
            }
        }
    }
    let mut rotation = Vec::with_capacity(n);
    for v in 0..n {
        let map = &succ[v];
        if map.is_empty() {
            return Err(invariant(format!("vertex {v} appears in no face")));
        }
        let start = *map.keys().min().unwrap();
        let mut rot = vec![start];
        let mut cur = map[&start];
        while cur != start {
            rot.push(cur);
            cur = *map
                .get(&cur)
                .ok_or_else(|| invariant(format!("rotation of {v} does not close")))?;
            if rot.len() > map.len() {
                return Err(invariant(format!("rotation of {v} is not a single cycle")));
            }
        }
        if rot.len() != map.len() {
            return Err(invariant(format!("rotation of {v} is not a single cycle")));
        }
        rotation.push(rot);
    }
    NearTriangulation::new(n, rotation, faces[outer].clone())
}

// ---------------------------------------------------------------------------
// NTG text format
// ---------------------------------------------------------------------------

/// Parses the NTG text format.
pub fn parse(text: &str) -> Result<NearTriangulation, EmbeddingError> {
    struct Tok<'a> {
        line: usize,
        col: usize,
        s: &'a str,
    }
    let mut lines: Vec<(usize, Vec<Tok>)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let body = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut toks = Vec::new();
        let mut col = 0usize;
        for piece in body.split_whitespace() {
            let at = body[col..].find(piece).unwrap() + col;
            toks.push(Tok {
                line: ln + 1,
                col: at + 1,
                s: piece,
            });
            col = at + piece.len();
        }
        if !toks.is_empty() {
            lines.push((ln + 1, toks));
        }
    }
    let syntax = |line: usize, col: usize, msg: String| EmbeddingError::Syntax { line, col, msg };
    let mut it = lines.into_iter();

    let (ln, header) = it
        .next()
        .ok_or_else(|| syntax(1, 1, "empty document".into()))?;
    if header.len() != 2 || header[0].s != "ntg" || header[1].s != "1" {
        return Err(syntax(ln, header[0].col, "expected header `ntg 1`".into()));
    }

    let (ln, nline) = it
        .next()
        .ok_or_else(|| syntax(ln, 1, "missing `n <N>` line".into()))?;
    if nline.len() != 2 || nline[0].s != "n" {
        return Err(syntax(ln, nline[0].col, "expected `n <N>`".into()));
    }
    let n: usize = nline[1]
        .s
        .parse()
        .map_err(|_| syntax(ln, nline[1].col, "invalid vertex count".into()))?;

    let (ln, bline) = it
        .next()
        .ok_or_else(|| syntax(ln, 1, "missing `boundary` line".into()))?;
    if bline.len() < 2 || bline[0].s != "boundary" {
        return Err(syntax(ln, bline[0].col, "expected `boundary <h> <v...>`".into()));
    }
    let h: usize = bline[1]
        .s
        .parse()
        .map_err(|_| syntax(ln, bline[1].col, "invalid boundary length".into()))?;
    if bline.len() != 2 + h {
        return Err(syntax(
            ln,
            bline[0].col,
            format!("boundary declares {h} vertices but lists {}", bline.len() - 2),
        ));
    }
    let mut boundary = Vec::with_capacity(h);
    for t in &bline[2..] {
        let v: VertexId = t
            .s
            .parse()
            .map_err(|_| syntax(t.line, t.col, "invalid vertex id".into()))?;
        boundary.push(v);
    }

    let mut rotation: Vec<Option<Vec<VertexId>>> = vec![None; n];
    for _ in 0..n {
        let (ln, rline) = it
            .next()
            .ok_or_else(|| syntax(ln, 1, format!("expected {n} `rot` lines")))?;
        if rline[0].s != "rot" || rline.len() < 2 {
            return Err(syntax(ln, rline[0].col, "expected `rot <v>: <w...>`".into()));
        }
        let vtok = rline[1].s.trim_end_matches(':');
        let v: usize = vtok
            .parse()
            .map_err(|_| syntax(ln, rline[1].col, "invalid vertex id".into()))?;
        if v >= n {
            return Err(syntax(ln, rline[1].col, format!("vertex {v} out of range")));
        }
        if rotation[v].is_some() {
            return Err(syntax(ln, rline[1].col, format!("duplicate rot line for {v}")));
        }
        let mut rot = Vec::with_capacity(rline.len() - 2);
        for t in &rline[2..] {
            let w: VertexId = t
                .s
                .parse()
                .map_err(|_| syntax(t.line, t.col, "invalid vertex id".into()))?;
            rot.push(w);
        }
        rotation[v] = Some(rot);
    }
    if let Some((ln, toks)) = it.next() {
        return Err(syntax(ln, toks[0].col, "trailing content after rot lines".into()));
    }
    let rotation: Vec<Vec<VertexId>> = rotation.into_iter().map(|r| r.unwrap()).collect();
    NearTriangulation::new(n, rotation, boundary)
}

/// Serializes to NTG text. Byte-deterministic for a given value.
pub fn serialize(t: &NearTriangulation) -> String {
    let mut s = String::new();
    writeln!(s, "ntg 1").unwrap();
    writeln!(s, "n {}", t.n()).unwrap();
    let mut b = format!("boundary {}", t.boundary_len());
    for &v in t.boundary() {
        write!(b, " {v}").unwrap();
    }
    writeln!(s, "{b}").unwrap();
    for v in 0..t.n() as VertexId {
        let mut line = format!("rot {v}:");
        for &w in t.rotation(v) {
            write!(line, " {w}").unwrap();
        }
        writeln!(s, "{line}").unwrap();
    }
    s
}

/// DOT export for debugging; boundary edges are drawn bold.
pub fn to_dot(t: &NearTriangulation) -> String {
    let mut s = String::from("graph nt {\n");
    let h = t.boundary_len();
    let mut boundary_edges = HashSet::new();
    for i in 0..h {
        let a = t.boundary()[i];
        let b = t.boundary()[(i + 1) % h];
        boundary_edges.insert((a.min(b), a.max(b)));
    }
    for u in 0..t.n() as VertexId {
        for &v in t.rotation(u) {
            if u < v {
                let style = if boundary_edges.contains(&(u, v)) {
                    " [style=bold]"
                } else {
                    ""
                };
                writeln!(s, "  {u} -- {v}{style};").unwrap();
            }
        }
    }
    s.push_str("}\n");
    s
}

// ---------------------------------------------------------------------------
// Canonical form (color refinement + individualization, n <= 16)
// ---------------------------------------------------------------------------

const CANON_MAX_N: usize = 16;

/// Canonical byte string: two graphs receive equal strings iff they are
/// isomorphic as abstract graphs. Requires `n <= 16`.
pub fn canonical_form(t: &NearTriangulation) -> Result<Vec<u8>, EmbeddingError> {
    let n = t.n();
    if n > CANON_MAX_N {
        return Err(EmbeddingError::SizeExceeded(format!(
            "canonical form supports n <= {CANON_MAX_N}, got {n}"
        )));
    }
    let mut adj = vec![0u16; n];
    for u in 0..n {
        for &v in t.rotation(u as VertexId) {
            adj[u] |= 1 << v;
        }
    }
    Ok(canonical_form_adj(&adj))
}

/// Canonical form of an adjacency-bitmask graph on `adj.len() <= 16` vertices.
pub fn canonical_form_adj(adj: &[u16]) -> Vec<u8> {
    let n = adj.len();
    let colors = vec![0u32; n];
    let mut best: Option<Vec<u8>> = None;
    canon_rec(adj, colors, &mut best);
    best.unwrap()
}

fn canon_rec(adj: &[u16], mut colors: Vec<u32>, best: &mut Option<Vec<u8>>) {
    refine(adj, &mut colors);
    let n = adj.len();
    let num_classes = colors.iter().map(|&c| c + 1).max().unwrap_or(0) as usize;
    if num_classes == n {
        // discrete: colors form a permutation
        let mut orig_of = vec![0usize; n];
        for (v, &c) in colors.iter().enumerate() {
            orig_of[c as usize] = v;
        }
        let mut bytes = Vec::with_capacity(1 + (n * n + 7) / 8);
        bytes.push(n as u8);
        let mut acc = 0u8;
        let mut bits = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                let bit = (adj[orig_of[i]] >> orig_of[j]) & 1;
                acc = (acc << 1) | bit as u8;
                bits += 1;
                if bits == 8 {
                    bytes.push(acc);
                    acc = 0;
                    bits = 0;
                }
            }
        }
        if bits > 0 {
            bytes.push(acc << (8 - bits));
        }
        match best {
            Some(b) if *b <= bytes => {}
            _ => *best = Some(bytes),
        }
        return;
    }
    // smallest color id with a non-singleton class
    let mut counts = vec![0usize; num_classes];
    for &c in &colors {
        counts[c as usize] += 1;
    }
    let target = counts.iter().position(|&c| c > 1).unwrap() as u32;
    for v in 0..n {
        if colors[v] == target {
            let mut child = colors.clone();
            // individualize: give v a fresh color that sorts after its class
            for c in child.iter_mut() {
                *c *= 2;
            }
            child[v] += 1;
            canon_rec(adj, child, best);
        }
    }
}

fn refine(adj: &[u16], colors: &mut [u32]) {
    let n = adj.len();
    loop {
        let mut sigs: Vec<(u32, Vec<u32>, usize)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut nbr: Vec<u32> = (0..n)
                .filter(|&w| (adj[v] >> w) & 1 == 1)
                .map(|w| colors[w])
                .collect();
            nbr.sort_unstable();
            sigs.push((colors[v], nbr, v));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| sigs[a].0.cmp(&sigs[b].0).then(sigs[a].1.cmp(&sigs[b].1)));
        let mut new_colors = vec![0u32; n];
        let mut next = 0u32;
        for i in 0..n {
            if i > 0 {
                let (pa, pb) = (order[i - 1], order[i]);
                if sigs[pa].0 != sigs[pb].0 || sigs[pa].1 != sigs[pb].1 {
                    next += 1;
                }
            }
            new_colors[order[i]] = next;
        }
        let old_classes = colors.iter().collect::<HashSet<_>>().len();
        let new_classes = (next + 1) as usize;
        let changed = new_classes != old_classes;
        colors.copy_from_slice(&new_colors);
        if !changed {
            break;
        }
    }
}

/// True iff `t` is one of the two order-12 exception graphs.
pub fn is_exception(t: &NearTriangulation) -> bool {
    if t.n() != 12 {
        return false;
    }
    let canon = canonical_form(t).expect("n = 12 within canonical size limit");
    let (c1, c2) = crate::generators::exception_canonical_forms();
    canon == *c1 || canon == *c2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn k3() -> NearTriangulation {
        NearTriangulation::new(3, vec![vec![1, 2], vec![0, 2], vec![0, 1]], vec![0, 1, 2]).unwrap()
    }

    #[test]
    fn k3_is_valid_mop_with_two_faces() {
        let t = k3();
        assert_eq!(t.faces().len(), 2);
        assert_eq!(t.classify(), GraphClass::Mop);
    }

    #[test]
    fn fan5_parses_and_classifies_as_mop() {
        let text = "ntg 1\nn 5\nboundary 5 0 1 2 3 4\nrot 0: 4 1 2 3\nrot 1: 0 2\nrot 2: 1 3 0\nrot 3: 2 4 0\nrot 4: 3 0\n";
        let t = parse(text).unwrap();
        assert_eq!(t.n(), 5);
        assert_eq!(t.classify(), GraphClass::Mop);
        assert_eq!(t.faces().len(), 4); // 3 triangles + outer pentagon
    }

    #[test]
    fn quadrilateral_inner_face_is_rejected() {
        // 4-cycle without a chord
        let err = NearTriangulation::new(
            4,
            vec![vec![3, 1], vec![0, 2], vec![1, 3], vec![2, 0]],
            vec![0, 1, 2, 3],
        )
        .unwrap_err();
        assert!(err.to_string().contains("non-triangular inner face"));
    }

    #[test]
    fn counterclockwise_boundary_is_rejected() {
        let t = generators::gen_fan(5).unwrap();
        let mut rev = t.boundary().to_vec();
        rev.reverse();
        let err = NearTriangulation::new(t.n(), t.rotations().to_vec(), rev).unwrap_err();
        assert!(err.to_string().contains("counterclockwise"));
    }

    #[test]
    fn octahedron_has_eight_faces() {
        let t = generators::gen_octahedra(1).unwrap();
        assert_eq!(t.n(), 6);
        assert_eq!(t.edge_count(), 12);
        let faces = t.faces();
        assert_eq!(faces.len(), 8);
        assert_eq!(faces.iter().filter(|f| f.outer).count(), 1);
    }

    #[test]
    fn wheel_is_reducible_h7_is_irreducible() {
        let w4 = generators::gen_wheel(5).unwrap();
        assert_eq!(w4.classify(), GraphClass::Reducible);
        let h = generators::gen_h7();
        assert_eq!(h.n(), 7);
        assert_eq!(h.classify(), GraphClass::Irreducible);
    }

    #[test]
    fn round_trip_preserves_rotation_and_boundary() {
        for t in [generators::gen_fan(7).unwrap(), generators::gen_h7()] {
            let back = parse(&serialize(&t)).unwrap();
            assert_eq!(back.rotations(), t.rotations());
            assert_eq!(back.boundary(), t.boundary());
        }
    }

    #[test]
    fn parse_reports_line_and_column() {
        let err = parse("ntg 1\nn 5\nboundary 5 0 1 2 x 4\n").unwrap_err();
        match err {
            EmbeddingError::Syntax { line, col, .. } => {
                assert_eq!(line, 3);
                assert!(col > 1);
            }
            other => panic!("expected syntax error, got {other}"),
        }
    }

    #[test]
    fn canonical_form_identifies_relabeled_fans() {
        let f5 = generators::gen_fan(5).unwrap();
        // the same fan under a relabeling
        let perm = [2u32, 3, 4, 0, 1];
        let rot: Vec<Vec<VertexId>> = (0..5)
            .map(|new| {
                let old = perm.iter().position(|&p| p == new as u32).unwrap();
                f5.rotation(old as VertexId).iter().map(|&w| perm[w as usize]).collect()
            })
            .collect();
        let mut bnd: Vec<VertexId> = f5.boundary().iter().map(|&v| perm[v as usize]).collect();
        // keep clockwise orientation, start anywhere
        bnd.rotate_left(2);
        let g = NearTriangulation::new(5, rot, bnd).unwrap();
        assert_eq!(canonical_form(&f5).unwrap(), canonical_form(&g).unwrap());
    }

    #[test]
    fn canonical_form_distinguishes_hexagon_classes() {
        // fan vs "snake" triangulation of the hexagon
        let fan = generators::gen_fan(6).unwrap();
        let snake = generators::mop_from_chords(6, &[(1, 3), (3, 5), (1, 5)]).unwrap();
        assert_ne!(canonical_form(&fan).unwrap(), canonical_form(&snake).unwrap());
    }

    #[test]
    fn size_limit_enforced_for_canonical_form() {
        let t = generators::gen_fan(17).unwrap();
        assert!(matches!(canonical_form(&t), Err(EmbeddingError::SizeExceeded(_))));
    }

    #[test]
    fn exceptions_are_order_12_only() {
        let f12 = generators::gen_fan(12).unwrap();
        assert!(!is_exception(&f12));
        let f11 = generators::gen_fan(11).unwrap();
        assert!(!is_exception(&f11));
        let (h1, h2) = generators::derive_exceptions();
        assert!(is_exception(h1));
        assert!(is_exception(h2));
    }

    #[test]
    fn mirror_is_valid_and_involutive() {
        let h = generators::gen_h7();
        let m = h.mirror();
        assert_eq!(m.n(), h.n());
        let mm = m.mirror();
        assert_eq!(mm.rotations(), h.rotations());
    }
}
