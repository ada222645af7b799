//! Reproducible construction of every instance family used by the tests and
//! the verification harness.
//!
//! All generators are pure functions of their parameters and seed; identical
//! parameters produce byte-identical NTG output.

use std::sync::OnceLock;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{self, from_faces, GraphClass, NearTriangulation, VertexId};
use crate::mop_solver;

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Embedding(#[from] embedding::EmbeddingError),
}

fn bad(msg: impl Into<String>) -> GeneratorError {
    GeneratorError::BadParameter(msg.into())
}

/// Builds a MOP from the convex polygon `0..n` (clockwise boundary) plus a
/// chord set. Rotations follow the convex position order.
pub fn mop_from_chords(n: usize, chords: &[(u32, u32)]) -> Result<NearTriangulation, GeneratorError> {
    if n < 3 {
        return Err(bad(format!("polygon needs n >= 3, got {n}")));
    }
    let mut nbrs: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for i in 0..n {
        let j = (i + 1) % n;
        nbrs[i].push(j as VertexId);
        nbrs[j].push(i as VertexId);
    }
    for &(a, b) in chords {
        nbrs[a as usize].push(b);
        nbrs[b as usize].push(a);
    }
    for (i, list) in nbrs.iter_mut().enumerate() {
        list.sort_unstable_by_key(|&j| (j as usize + n - i) % n);
    }
    let boundary: Vec<VertexId> = (0..n as VertexId).collect();
    Ok(NearTriangulation::new(n, nbrs, boundary)?)
}

/// Fan: polygon `0..n` with all chords from vertex 0.
pub fn gen_fan(n: usize) -> Result<NearTriangulation, GeneratorError> {
    if n < 3 {
        return Err(bad(format!("fan needs n >= 3, got {n}")));
    }
    let chords: Vec<(u32, u32)> = (2..n as u32 - 1).map(|j| (0, j)).collect();
    mop_from_chords(n, &chords)
}

/// Wheel on `n` vertices: an (n-1)-cycle boundary plus a hub.
pub fn gen_wheel(n: usize) -> Result<NearTriangulation, GeneratorError> {
    if n < 4 {
        return Err(bad(format!("wheel needs n >= 4, got {n}")));
    }
    let rim = n - 1;
    let hub = rim as VertexId;
    let mut faces: Vec<Vec<VertexId>> = vec![(0..rim as VertexId).collect()];
    for i in 0..rim as VertexId {
        let j = (i + 1) % rim as VertexId;
        faces.push(vec![j, i, hub]);
    }
    Ok(from_faces(n, &faces, 0)?)
}

/// The smallest irreducible near-triangulation: a hexagon with an inscribed
/// chord triangle holding one interior vertex.
pub fn gen_h7() -> NearTriangulation {
    let faces: Vec<Vec<VertexId>> = vec![
        vec![0, 1, 2, 3, 4, 5],
        vec![1, 0, 2],
        vec![3, 2, 4],
        vec![5, 4, 0],
        vec![2, 0, 6],
        vec![4, 2, 6],
        vec![0, 4, 6],
    ];
    from_faces(7, &faces, 0).expect("fixed construction is valid")
}

/// A triangulation on `6k` vertices built from one octahedron holding the
/// other `k - 1` octahedra in its interior, side by side.
///
/// Each added octahedron is inserted into a face that avoids every protected
/// inner triangle, with the region between it and its host face triangulated
/// by a fixed antiprism pattern. This keeps each inner triangle's
/// neighborhood confined to its own octahedron, so any total dominating set
/// needs two vertices per octahedron; the exact solver confirms 2k at desk
/// scale.
pub fn gen_octahedra(k: usize) -> Result<NearTriangulation, GeneratorError> {
    if k < 1 {
        return Err(bad("octahedra need k >= 1"));
    }
    let mut faces: Vec<Vec<VertexId>> = vec![vec![0, 1, 2]];
    for j in 0..3u32 {
        let (a, a1) = (j, (j + 1) % 3);
        let (b, b1) = (3 + j, 3 + (j + 1) % 3);
        faces.push(vec![b1, a1, a]);
        faces.push(vec![a, b, b1]);
    }
    faces.push(vec![3, 5, 4]);
    // slots whose corners touch no protected inner triangle
    let mut safe: std::collections::VecDeque<Vec<VertexId>> = std::collections::VecDeque::new();
    safe.push_back(vec![3, 5, 4]);
    let mut n: usize = 6;
    for _ in 1..k {
        let slot = safe.pop_front().expect("an insertion slot is always available");
        let pos = faces.iter().position(|f| *f == slot).unwrap();
        faces.remove(pos);
        let x = [slot[0], slot[1], slot[2]];
        let q: [VertexId; 3] = [n as u32, n as u32 + 1, n as u32 + 2];
        let r: [VertexId; 3] = [n as u32 + 3, n as u32 + 4, n as u32 + 5];
        n += 6;
        for j in 0..3usize {
            let j1 = (j + 1) % 3;
            let f1 = vec![x[j], x[j1], q[j1]];
            let f2 = vec![x[j], q[j1], q[j]];
            safe.push_back(f1.clone());
            safe.push_back(f2.clone());
            faces.push(f1);
            faces.push(f2);
            faces.push(vec![q[j], q[j1], r[j1]]);
            faces.push(vec![q[j], r[j1], r[j]]);
        }
        faces.push(vec![r[0], r[1], r[2]]);
    }
    Ok(from_faces(n, &faces, 0)?)
}

/// Uniformly random binary tree with `internal` internal nodes, by leaf
/// growth. Returns, for the polygon decomposition, the chord set.
fn random_triangulation_chords(n: usize, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    // tree nodes: leaves and internal; binary tree with n-2 internal nodes
    #[derive(Clone, Copy)]
    struct Node {
        children: [usize; 2], // usize::MAX for leaves
        parent: usize,
    }
    let internal = n - 2;
    let mut nodes = vec![Node {
        children: [usize::MAX; 2],
        parent: usize::MAX,
    }];
    let mut root = 0usize;
    for _ in 0..internal {
        let x = rng.random_range(0..nodes.len());
        let side = rng.random_range(0..2usize);
        let y = nodes.len();
        let z = nodes.len() + 1;
        let xp = nodes[x].parent;
        let mut ynode = Node {
            children: [usize::MAX; 2],
            parent: xp,
        };
        ynode.children[side] = z;
        ynode.children[1 - side] = x;
        nodes.push(ynode);
        nodes.push(Node {
            children: [usize::MAX; 2],
            parent: y,
        });
        nodes[x].parent = y;
        if xp == usize::MAX {
            root = y;
        } else {
            let slot = if nodes[xp].children[0] == x { 0 } else { 1 };
            nodes[xp].children[slot] = y;
        }
    }
    // leaf counts per subtree
    let mut leaves = vec![0usize; nodes.len()];
    let mut order = Vec::with_capacity(nodes.len());
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        order.push(v);
        if nodes[v].children[0] != usize::MAX {
            stack.push(nodes[v].children[0]);
            stack.push(nodes[v].children[1]);
        }
    }
    for &v in order.iter().rev() {
        if nodes[v].children[0] == usize::MAX {
            leaves[v] = 1;
        } else {
            leaves[v] = leaves[nodes[v].children[0]] + leaves[nodes[v].children[1]];
        }
    }
    // intervals: root spans boundary edge (0, n-1)
    let mut chords = Vec::with_capacity(n.saturating_sub(3));
    let mut stack = vec![(root, 0u32, n as u32 - 1)];
    while let Some((v, a, b)) = stack.pop() {
        if nodes[v].children[0] == usize::MAX {
            continue;
        }
        let l = nodes[v].children[0];
        let r = nodes[v].children[1];
        let m = a + leaves[l] as u32;
        if m - a >= 2 {
            chords.push((a, m));
        }
        if b - m >= 2 {
            chords.push((m, b));
        }
        stack.push((l, a, m));
        stack.push((r, m, b));
    }
    chords
}

/// Seeded uniform random MOP on `n` vertices.
pub fn gen_random_mop(n: usize, seed: u64) -> Result<NearTriangulation, GeneratorError> {
    if n < 3 {
        return Err(bad(format!("random MOP needs n >= 3, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chords = random_triangulation_chords(n, &mut rng);
    mop_from_chords(n, &chords)
}

/// Splits the inner face `(a, b, c)` of a working rotation system by a new
/// vertex adjacent to all three corners.
fn subdivide_face(
    rotation: &mut Vec<Vec<VertexId>>,
    face: [VertexId; 3],
    new: VertexId,
) -> [[VertexId; 3]; 3] {
    let [a, b, c] = face;
    let insert_between = |rot: &mut Vec<VertexId>, before: VertexId, after: VertexId, v: VertexId| {
        let p = rot.iter().position(|&x| x == before).expect("neighbor present");
        debug_assert_eq!(rot[(p + 1) % rot.len()], after, "face corners consecutive");
        rot.insert(p + 1, v);
    };
    insert_between(&mut rotation[a as usize], c, b, new);
    insert_between(&mut rotation[b as usize], a, c, new);
    insert_between(&mut rotation[c as usize], b, a, new);
    rotation.push(vec![a, c, b]);
    [[a, b, new], [b, c, new], [c, a, new]]
}

/// Seeded random near-triangulation: a random MOP on `n - m` vertices with
/// `m` interior vertices inserted by repeated triangle subdivision.
pub fn gen_random_neartri(n: usize, m: usize, seed: u64) -> Result<NearTriangulation, GeneratorError> {
    if n < 5 {
        return Err(bad(format!("random near-triangulation needs n >= 5, got {n}")));
    }
    if m + 4 > n {
        return Err(bad(format!("interior count {m} out of range 0..={}", n - 4)));
    }
    let h = n - m;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chords = random_triangulation_chords(h, &mut rng);
    let base = mop_from_chords(h, &chords)?;
    let mut rotation = base.rotations().to_vec();
    let mut faces: Vec<[VertexId; 3]> = base
        .faces()
        .into_iter()
        .filter(|f| !f.outer)
        .map(|f| [f.cycle[0], f.cycle[1], f.cycle[2]])
        .collect();
    for new in h..n {
        let idx = rng.random_range(0..faces.len());
        let face = faces.swap_remove(idx);
        let split = subdivide_face(&mut rotation, face, new as VertexId);
        faces.extend_from_slice(&split);
    }
    Ok(NearTriangulation::new(n, rotation, base.boundary().to_vec())?)
}

/// Seeded random irreducible near-triangulation on boundary length `h`.
///
/// Interior vertices are placed only inside faces of the boundary subgraph
/// whose three sides are all diagonals, so every boundary edge keeps its apex
/// on the boundary cycle.
pub fn gen_random_irreducible(h: usize, seed: u64) -> Result<NearTriangulation, GeneratorError> {
    if h < 6 {
        return Err(bad(format!("irreducible construction needs h >= 6, got {h}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chords = random_triangulation_chords(h, &mut rng);
    let is_chord = |a: u32, b: u32| (a as usize + 1) % h != b as usize && (b as usize + 1) % h != a as usize;
    let mut central: Vec<[VertexId; 3]> = Vec::new();
    {
        let base = mop_from_chords(h, &chords)?;
        for f in base.faces() {
            if f.outer {
                continue;
            }
            let tri = [f.cycle[0], f.cycle[1], f.cycle[2]];
            if (0..3).all(|i| is_chord(tri[i], tri[(i + 1) % 3])) {
                central.push(tri);
            }
        }
    }
    if central.is_empty() {
        // fall back to a tripod: chords guaranteeing one all-diagonal face
        let (a, b, c) = (0u32, (h / 3) as u32, (2 * h / 3) as u32);
        chords.clear();
        for (x, y) in [(a, b), (b, c), (c, a)] {
            if is_chord(x, y) {
                chords.push((x, y));
            }
        }
        for (x, y) in [(a, b), (b, c), (c, a)] {
            // fan each flap from its low corner
            let mut j = x + 1;
            while (j + 1) % h as u32 != y && j != y {
                if is_chord(x, (j + 1) % h as u32) && (j + 1) % h as u32 != y {
                    chords.push((x, (j + 1) % h as u32));
                }
                j += 1;
                if j as usize >= h {
                    break;
                }
            }
        }
        chords.sort_unstable();
        chords.dedup();
        let base = mop_from_chords(h, &chords)?;
        central.clear();
        for f in base.faces() {
            if f.outer {
                continue;
            }
            let tri = [f.cycle[0], f.cycle[1], f.cycle[2]];
            if (0..3).all(|i| is_chord(tri[i], tri[(i + 1) % 3])) {
                central.push(tri);
            }
        }
        assert!(!central.is_empty(), "tripod construction yields a central face");
    }
    let base = mop_from_chords(h, &chords)?;
    let mut rotation = base.rotations().to_vec();
    // choose a nonempty subset of central faces, then stack 1..=2 vertices in
    // each chosen face
    let keep: Vec<[VertexId; 3]> = central
        .iter()
        .enumerate()
        .filter(|(i, _)| *i == 0 || rng.random_range(0..2u32) == 0)
        .map(|(_, f)| *f)
        .collect();
    let mut next = h as VertexId;
    for face in keep {
        let extra = rng.random_range(1..=2usize);
        let mut pool = vec![face];
        for _ in 0..extra {
            let idx = rng.random_range(0..pool.len());
            let f = pool.swap_remove(idx);
            let split = subdivide_face(&mut rotation, f, next);
            next += 1;
            pool.extend_from_slice(&split);
        }
    }
    let n = rotation.len();
    let t = NearTriangulation::new(n, rotation, base.boundary().to_vec())?;
    debug_assert_eq!(t.classify(), GraphClass::Irreducible);
    Ok(t)
}

/// Seeded diagonal-free near-triangulation: a wheel on boundary length `h`
/// grown by `m - 1` inner-face subdivisions, so the boundary subgraph stays a
/// plain cycle while `m` interior vertices accumulate.
pub fn gen_diagonal_free(h: usize, m: usize, seed: u64) -> Result<NearTriangulation, GeneratorError> {
    if h < 3 {
        return Err(bad(format!("boundary length {h} < 3")));
    }
    if m < 1 {
        return Err(bad("diagonal-free construction needs at least one interior vertex"));
    }
    let base = gen_wheel(h + 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rotation = base.rotations().to_vec();
    let mut faces: Vec<[VertexId; 3]> = base
        .faces()
        .into_iter()
        .filter(|f| !f.outer)
        .map(|f| [f.cycle[0], f.cycle[1], f.cycle[2]])
        .collect();
    for new in (h + 1)..(h + m) {
        let idx = rng.random_range(0..faces.len());
        let face = faces.swap_remove(idx);
        let split = subdivide_face(&mut rotation, face, new as VertexId);
        faces.extend_from_slice(&split);
    }
    Ok(NearTriangulation::new(h + m, rotation, base.boundary().to_vec())?)
}

/// Tight MOP family: `k` pentagon blocks on a triangulated spine, order `5k`,
/// with exact total domination number `2k`.
pub fn gen_tight_mop(k: usize) -> Result<NearTriangulation, GeneratorError> {
    if k < 1 {
        return Err(bad("tight family needs k >= 1"));
    }
    let n = 5 * k;
    let mut chords: Vec<(u32, u32)> = Vec::new();
    for j in 0..k as u32 {
        chords.push((5 * j, 5 * j + 2));
        chords.push((5 * j + 2, 5 * j + 4));
        if k > 1 {
            chords.push((5 * j, 5 * j + 4));
        }
    }
    if k > 1 {
        // central 2k-gon with corners 0,4,5,9,10,... fanned from 0
        let corners: Vec<u32> = (0..k as u32).flat_map(|j| [5 * j, 5 * j + 4]).collect();
        for &c in &corners[2..corners.len() - 1] {
            chords.push((0, c));
        }
    }
    let t = mop_from_chords(n, &chords)?;
    let cert = mop_solver::exact_tds_mop(&t).expect("tight family instance is a MOP");
    assert_eq!(
        cert.size,
        2 * k,
        "tight family construction must have total domination number 2k"
    );
    Ok(t)
}

/// Exceptions: the two order-12 MOP classes whose total domination number
/// exceeds floor(24/5). Derived by exhaustive search, never transcribed.
pub fn derive_exceptions() -> (&'static NearTriangulation, &'static NearTriangulation) {
    let (h1, h2, _) = exceptions_cached();
    (h1, h2)
}

/// Canonical forms of the two exceptions, for `is_exception`.
pub fn exception_canonical_forms() -> (&'static Vec<u8>, &'static Vec<u8>) {
    let (_, _, forms) = exceptions_cached();
    (&forms.0, &forms.1)
}

type ExceptionCache = (NearTriangulation, NearTriangulation, (Vec<u8>, Vec<u8>));
static EXCEPTIONS: OnceLock<ExceptionCache> = OnceLock::new();

fn exceptions_cached() -> (&'static NearTriangulation, &'static NearTriangulation, &'static (Vec<u8>, Vec<u8>)) {
    let (h1, h2, forms) = EXCEPTIONS.get_or_init(compute_exceptions);
    (h1, h2, forms)
}

fn compute_exceptions() -> ExceptionCache {
    let mut outliers: std::collections::BTreeMap<Vec<u8>, NearTriangulation> =
        std::collections::BTreeMap::new();
    mop_solver::enumerate_polygon_triangulations(12, |chords| {
        if mop_solver::gamma_t_polygon(12, chords) > 4 {
            let t = mop_from_chords(12, chords).expect("enumerated MOP");
            let key = embedding::canonical_form(&t).expect("n = 12");
            outliers.entry(key).or_insert(t);
        }
    });
    assert_eq!(outliers.len(), 2, "exactly two order-12 exception classes");
    let mut it = outliers.into_iter();
    let (f1, h1) = it.next().unwrap();
    let (f2, h2) = it.next().unwrap();
    for t in [&h1, &h2] {
        let cert = mop_solver::exact_tds_mop(t).expect("exception is a MOP");
        assert_eq!(cert.size, 5, "exception total domination number is 5");
        check_exception_structure(t);
    }
    (h1, h2, (f1, f2))
}

/// Structural shape shared by both exceptions: three disjoint triangles each
/// holding a degree-2 vertex, a central triangle on the remaining vertices,
/// and a perfect matching of central vertices to triangles they do not touch.
fn check_exception_structure(t: &NearTriangulation) {
    let deg2: Vec<VertexId> = (0..t.n() as VertexId).filter(|&v| t.degree(v) == 2).collect();
    assert_eq!(deg2.len(), 3, "exception has exactly three degree-2 vertices");
    let mut tri_members = vec![false; t.n()];
    let mut triangles = Vec::new();
    for &v in &deg2 {
        let a = t.rotation(v)[0];
        let b = t.rotation(v)[1];
        assert!(t.has_edge(a, b), "degree-2 vertex closes a triangle");
        for x in [v, a, b] {
            assert!(!tri_members[x as usize], "corner triangles are disjoint");
            tri_members[x as usize] = true;
        }
        triangles.push([v, a, b]);
    }
    let central: Vec<VertexId> = (0..t.n() as VertexId).filter(|&v| !tri_members[v as usize]).collect();
    assert_eq!(central.len(), 3);
    for i in 0..3 {
        for j in (i + 1)..3 {
            assert!(t.has_edge(central[i], central[j]), "central triangle present");
        }
    }
    // each central vertex avoids exactly one corner triangle, bijectively
    let mut matched = [false; 3];
    for &w in &central {
        let avoided: Vec<usize> = (0..3)
            .filter(|&i| triangles[i].iter().all(|&x| !t.has_edge(w, x)))
            .collect();
        assert_eq!(avoided.len(), 1, "central vertex avoids exactly one triangle");
        assert!(!matched[avoided[0]], "avoidance is a perfect matching");
        matched[avoided[0]] = true;
    }
}

/// Attaches an ear (a new degree-2 boundary vertex) over the boundary edge
/// `(u, boundary_next(u))`.
pub fn attach_ear(t: &NearTriangulation, u: VertexId) -> NearTriangulation {
    let v = t.boundary_next(u);
    let ear = t.n() as VertexId;
    let mut rotation = t.rotations().to_vec();
    rotation.push(vec![u, v]);
    // boundary successor of u becomes the ear
    let pu = rotation[u as usize].iter().position(|&x| x == v).unwrap();
    rotation[u as usize].insert(pu, ear);
    let pv = rotation[v as usize].iter().position(|&x| x == u).unwrap();
    rotation[v as usize].insert(pv + 1, ear);
    let mut boundary = t.boundary().to_vec();
    let bp = t.boundary_position(u).unwrap();
    boundary.insert(bp + 1, ear);
    NearTriangulation::new(t.n() + 1, rotation, boundary).expect("ear attachment preserves validity")
}

/// Instance family selector for reproducible generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Fan,
    RandomMop,
    RandomNeartri,
    H7,
    Exceptions,
    TightMop,
    Octahedra,
    Wheel,
}

/// Family plus parameters plus seed; same spec, same bytes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub interior: Option<usize>,
    pub seed: u64,
}

impl GeneratorSpec {
    /// Produces the named instances: `(file stem, graph)` pairs.
    pub fn generate(&self) -> Result<Vec<(String, NearTriangulation)>, GeneratorError> {
        let need_n = || self.n.ok_or_else(|| bad("family requires --n"));
        let need_k = || self.k.ok_or_else(|| bad("family requires --k"));
        Ok(match self.family {
            Family::Fan => {
                let n = need_n()?;
                vec![(format!("fan_{n}"), gen_fan(n)?)]
            }
            Family::RandomMop => {
                let n = need_n()?;
                vec![(
                    format!("random_mop_{n}_{}", self.seed),
                    gen_random_mop(n, self.seed)?,
                )]
            }
            Family::RandomNeartri => {
                let n = need_n()?;
                let m = self.interior.ok_or_else(|| bad("random_neartri requires --interior"))?;
                vec![(
                    format!("random_neartri_{n}_{m}_{}", self.seed),
                    gen_random_neartri(n, m, self.seed)?,
                )]
            }
            Family::H7 => vec![("h7".to_string(), gen_h7())],
            Family::Exceptions => {
                let (h1, h2) = derive_exceptions();
                vec![("H1".to_string(), h1.clone()), ("H2".to_string(), h2.clone())]
            }
            Family::TightMop => {
                let k = need_k()?;
                vec![(format!("tight_mop_{k}"), gen_tight_mop(k)?)]
            }
            Family::Octahedra => {
                let k = need_k()?;
                vec![(format!("octahedra_{k}"), gen_octahedra(k)?)]
            }
            Family::Wheel => {
                let n = need_n()?;
                vec![(format!("wheel_{n}"), gen_wheel(n)?)]
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn fans_and_wheels_validate() {
        for n in 3..=12 {
            let f = gen_fan(n).unwrap();
            assert_eq!(f.classify(), GraphClass::Mop);
        }
        for n in 4..=10 {
            let w = gen_wheel(n).unwrap();
            assert_eq!(w.interior_count(), 1);
        }
        assert!(gen_fan(2).is_err());
    }

    #[test]
    fn h7_shape() {
        let h = gen_h7();
        assert_eq!(h.n(), 7);
        assert_eq!(h.classify(), GraphClass::Irreducible);
        let gamma = oracle::exact_tds(&oracle::Graph::from(&h), &Default::default())
            .unwrap()
            .expect("feasible")
            .size;
        assert_eq!(gamma, 2);
    }

    #[test]
    fn random_mops_validate_and_are_deterministic() {
        for seed in 0..30u64 {
            let n = 3 + (seed as usize % 20);
            let a = gen_random_mop(n, seed).unwrap();
            assert_eq!(a.classify(), GraphClass::Mop);
            let b = gen_random_mop(n, seed).unwrap();
            assert_eq!(
                crate::embedding::serialize(&a),
                crate::embedding::serialize(&b)
            );
        }
    }

    #[test]
    fn random_mop_distribution_hits_all_labeled_hexagon_triangulations() {
        use std::collections::HashSet;
        let mut seen = HashSet::new();
        for seed in 0..2000u64 {
            let t = gen_random_mop(6, seed).unwrap();
            let mut chords: Vec<(VertexId, VertexId)> = Vec::new();
            for v in 0..6u32 {
                for &w in t.rotation(v) {
                    if v < w && (v + 1) % 6 != w && (w + 1) % 6 != v {
                        chords.push((v, w));
                    }
                }
            }
            chords.sort_unstable();
            seen.insert(chords);
        }
        assert_eq!(seen.len(), 14, "all 14 labeled hexagon triangulations sampled");
    }

    #[test]
    fn random_neartri_interior_counts_and_classes() {
        let mut classes = [0usize; 3];
        for seed in 0..300u64 {
            let n = 6 + (seed as usize % 8);
            let m = seed as usize % (n - 4 + 1);
            let t = gen_random_neartri(n, m, seed).unwrap();
            assert_eq!(t.interior_count(), m);
            match t.classify() {
                GraphClass::Mop => classes[0] += 1,
                GraphClass::Reducible => classes[1] += 1,
                GraphClass::Irreducible => classes[2] += 1,
            }
        }
        assert!(classes.iter().all(|&c| c > 0), "all three classes sampled: {classes:?}");
    }

    #[test]
    fn random_irreducible_is_irreducible() {
        for seed in 0..50u64 {
            let h = 6 + (seed as usize % 9);
            let t = gen_random_irreducible(h, seed).unwrap();
            assert_eq!(t.classify(), GraphClass::Irreducible, "h={h} seed={seed}");
        }
    }

    #[test]
    fn exceptions_have_the_documented_shape() {
        let (h1, h2) = derive_exceptions();
        assert_eq!(h1.n(), 12);
        assert_eq!(h2.n(), 12);
        assert_ne!(
            crate::embedding::canonical_form(h1).unwrap(),
            crate::embedding::canonical_form(h2).unwrap()
        );
        // fan of order 12 dominates with 2, far from the exception value
        let f12 = gen_fan(12).unwrap();
        assert_eq!(mop_solver::exact_tds_mop(&f12).unwrap().size, 2);
    }

    #[test]
    fn tight_family_is_tight() {
        for k in 1..=4 {
            let t = gen_tight_mop(k).unwrap();
            assert_eq!(t.n(), 5 * k);
            let cert = mop_solver::exact_tds_mop(&t).unwrap();
            assert_eq!(cert.size, 2 * k);
        }
    }

    #[test]
    fn octahedra_validate_with_triangle_boundary() {
        for k in 1..=4 {
            let t = gen_octahedra(k).unwrap();
            assert_eq!(t.n(), 6 * k);
            assert_eq!(t.boundary_len(), 3);
        }
    }

    #[test]
    fn ear_attachment() {
        let h = gen_h7();
        let with_ear = attach_ear(&h, 0);
        assert_eq!(with_ear.n(), 8);
        assert_eq!(with_ear.boundary_len(), 7);
    }
}
