//! Exact minimum total domination on MOPs.
//!
//! A MOP is a triangulated polygon; the dual tree of its triangles has
//! 2-vertex interfaces, so a dynamic program over the recursive
//! base-edge/apex decomposition solves minimum total domination exactly in
//! linear time. Also hosts the pentagon/hexagon helper solves and exhaustive
//! polygon-triangulation enumeration.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::cert::TdsCertificate;
use crate::embedding::{canonical_form, GraphClass, NearTriangulation, VertexId};

#[derive(Debug, Error)]
pub enum MopSolverError {
    #[error("not a MOP: {0}")]
    NotAMop(String),
    #[error("size exceeded: {0}")]
    SizeExceeded(String),
    #[error("no qualifying set: {0}")]
    NotFound(String),
}

const DP_MAX_N: usize = 128;

/// Vertex status at a DP interface.
/// Bit 1: vertex is in the set. Bit 0: vertex is dominated by the sub-polygon
/// strictly below the interface edge.
const STATUSES: [u8; 4] = [0b00, 0b01, 0b10, 0b11];

#[inline]
fn in_set(s: u8) -> bool {
    s & 0b10 != 0
}
#[inline]
fn dom_below(s: u8) -> bool {
    s & 0b01 != 0
}

/// Compares two equal-size vertex sets as sorted lists: the mask containing
/// the lowest differing bit is the smaller set.
fn cmp_mask(a: u128, b: u128) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let low = (a ^ b).trailing_zeros();
    if (a >> low) & 1 == 1 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

type Cell = [[Option<(u32, u128)>; 4]; 4];

fn better(slot: &mut Option<(u32, u128)>, cand: (u32, u128)) {
    match slot {
        Some(cur)
            if cur.0 < cand.0 || (cur.0 == cand.0 && cmp_mask(cur.1, cand.1) != Ordering::Greater) => {}
        _ => *slot = Some(cand),
    }
}

/// Core DP: polygon positions `0..n` in boundary order, adjacency bitsets
/// over positions (boundary edges plus chords). Returns minimum size and the
/// position mask of a minimum, tie-broken toward the lexicographically
/// smallest set.
fn polygon_dp(n: usize, adj: &[u128]) -> (u32, u128) {
    let mut memo: HashMap<(u32, u32), Cell> = HashMap::new();
    let root = dp_edge(0, (n - 1) as u32, adj, &mut memo);
    let mut best: Option<(u32, u128)> = None;
    for sa in STATUSES {
        for sb in STATUSES {
            if let Some((cost, mask)) = root[sa as usize][sb as usize] {
                // positions 0 and n-1 are adjacent along the root edge
                if !(dom_below(sa) || in_set(sb)) {
                    continue;
                }
                if !(dom_below(sb) || in_set(sa)) {
                    continue;
                }
                let mut cost = cost;
                let mut mask = mask;
                if in_set(sa) {
                    cost += 1;
                    mask |= 1;
                }
                if in_set(sb) {
                    cost += 1;
                    mask |= 1 << (n - 1);
                }
                better(&mut best, (cost, mask));
            }
        }
    }
    best.expect("every polygon triangulation has a total dominating set")
}

fn dp_edge(a: u32, b: u32, adj: &[u128], memo: &mut HashMap<(u32, u32), Cell>) -> Cell {
    if let Some(c) = memo.get(&(a, b)) {
        return *c;
    }
    let mut cell: Cell = [[None; 4]; 4];
    if b - a == 1 {
        for sa in STATUSES {
            for sb in STATUSES {
                if !dom_below(sa) && !dom_below(sb) {
                    cell[sa as usize][sb as usize] = Some((0, 0));
                }
            }
        }
        memo.insert((a, b), cell);
        return cell;
    }
    let between = mask_between(a, b);
    let common = adj[a as usize] & adj[b as usize] & between;
    debug_assert_eq!(common.count_ones(), 1, "unique apex inside the interval");
    let m = common.trailing_zeros();
    let left = dp_edge(a, m, adj, memo);
    let right = dp_edge(m, b, adj, memo);
    for sa_l in STATUSES {
        for sc_l in STATUSES {
            let Some((lc, lm)) = left[sa_l as usize][sc_l as usize] else {
                continue;
            };
            let c_in = in_set(sc_l);
            let a_in = in_set(sa_l);
            for sc_r in STATUSES {
                if in_set(sc_r) != c_in {
                    continue;
                }
                for sb_r in STATUSES {
                    let Some((rc, rm)) = right[sc_r as usize][sb_r as usize] else {
                        continue;
                    };
                    let b_in = in_set(sb_r);
                    // the apex is adjacent to both interval endpoints, and all
                    // of its neighbors lie within this sub-polygon
                    if !(dom_below(sc_l) || dom_below(sc_r) || a_in || b_in) {
                        continue;
                    }
                    let sa = status(a_in, dom_below(sa_l) || c_in);
                    let sb = status(b_in, dom_below(sb_r) || c_in);
                    let cost = lc + rc + u32::from(c_in);
                    let mask = lm | rm | (u128::from(c_in) << m);
                    better(&mut cell[sa as usize][sb as usize], (cost, mask));
                }
            }
        }
    }
    memo.insert((a, b), cell);
    cell
}

#[inline]
fn status(in_set: bool, dominated: bool) -> u8 {
    (u8::from(in_set) << 1) | u8::from(dominated)
}

#[inline]
fn mask_between(a: u32, b: u32) -> u128 {
    // bits strictly between a and b (a < b)
    ((1u128 << b) - 1) & !((1u128 << (a + 1)) - 1)
}

fn position_adjacency(t: &NearTriangulation) -> Result<Vec<u128>, MopSolverError> {
    if t.classify() != GraphClass::Mop {
        return Err(MopSolverError::NotAMop(format!(
            "{} interior vertices",
            t.interior_count()
        )));
    }
    let n = t.n();
    if n > DP_MAX_N {
        return Err(MopSolverError::SizeExceeded(format!(
            "MOP solver supports n <= {DP_MAX_N}, got {n}"
        )));
    }
    let mut adj = vec![0u128; n];
    for v in 0..n as VertexId {
        let pv = t.boundary_position(v).expect("all MOP vertices on boundary");
        for &w in t.rotation(v) {
            let pw = t.boundary_position(w).unwrap();
            adj[pv] |= 1 << pw;
        }
    }
    Ok(adj)
}

/// Exact minimum total dominating set of a MOP.
pub fn exact_tds_mop(t: &NearTriangulation) -> Result<TdsCertificate, MopSolverError> {
    let adj = position_adjacency(t)?;
    let (_, mask) = polygon_dp(t.n(), &adj);
    let vertices: Vec<VertexId> = (0..t.n())
        .filter(|&p| (mask >> p) & 1 == 1)
        .map(|p| t.boundary()[p])
        .collect();
    Ok(TdsCertificate::new(t.n(), vertices, Vec::new()))
}

/// Fast path: minimum total domination number of the polygon triangulation on
/// `n` positions with the given chords, without building a validated graph.
pub fn gamma_t_polygon(n: usize, chords: &[(u32, u32)]) -> usize {
    debug_assert!(n <= DP_MAX_N);
    let mut adj = vec![0u128; n];
    for i in 0..n {
        let j = (i + 1) % n;
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    for &(a, b) in chords {
        adj[a as usize] |= 1 << b;
        adj[b as usize] |= 1 << a;
    }
    polygon_dp(n, &adj).0 as usize
}

fn brute_pair(
    t: &NearTriangulation,
    accept: impl Fn(VertexId, VertexId) -> bool,
) -> Option<TdsCertificate> {
    let n = t.n() as VertexId;
    for x in 0..n {
        for y in (x + 1)..n {
            if accept(x, y) && crate::oracle::is_tds_of(t, &[x, y]) {
                return Some(TdsCertificate::new(t.n(), vec![x, y], Vec::new()));
            }
        }
    }
    None
}

/// Size-2 total dominating set of an order-5 MOP containing `u`.
pub fn pentagon_tds_with(t: &NearTriangulation, u: VertexId) -> Result<TdsCertificate, MopSolverError> {
    if t.n() != 5 || t.classify() != GraphClass::Mop {
        return Err(MopSolverError::NotAMop("pentagon solve needs a MOP of order 5".into()));
    }
    brute_pair(t, |x, y| x == u || y == u)
        .ok_or_else(|| MopSolverError::NotFound(format!("no 2-TDS of the pentagon contains {u}")))
}

/// Size-2 total dominating set of an order-6 MOP containing `u_i` or `u_j`,
/// for consecutive boundary vertices.
pub fn hexagon_tds_pair(
    t: &NearTriangulation,
    u_i: VertexId,
    u_j: VertexId,
) -> Result<TdsCertificate, MopSolverError> {
    if t.n() != 6 || t.classify() != GraphClass::Mop {
        return Err(MopSolverError::NotAMop("hexagon solve needs a MOP of order 6".into()));
    }
    if t.boundary_next(u_i) != u_j && t.boundary_prev(u_i) != u_j {
        return Err(MopSolverError::NotFound(format!("{u_i} and {u_j} are not consecutive")));
    }
    brute_pair(t, |x, y| x == u_i || x == u_j || y == u_i || y == u_j).ok_or_else(|| {
        MopSolverError::NotFound(format!("no 2-TDS of the hexagon meets {{{u_i},{u_j}}}"))
    })
}

/// Visits the chord set of every triangulation of a convex `n`-gon exactly
/// once (Catalan(n-2) of them).
pub fn enumerate_polygon_triangulations(n: usize, mut visit: impl FnMut(&[(u32, u32)])) {
    assert!(n >= 3);
    let mut chords: Vec<(u32, u32)> = Vec::with_capacity(n - 3);
    let mut pending: Vec<(u32, u32)> = Vec::new();
    if n >= 4 {
        pending.push((0, n as u32 - 1));
    }
    rec_enum(&mut pending, &mut chords, &mut visit);

    fn rec_enum(
        pending: &mut Vec<(u32, u32)>,
        chords: &mut Vec<(u32, u32)>,
        visit: &mut impl FnMut(&[(u32, u32)]),
    ) {
        let Some((a, b)) = pending.pop() else {
            visit(chords);
            return;
        };
        for m in (a + 1)..b {
            let mut pushed_pending = 0;
            let mut pushed_chords = 0;
            if m - a >= 2 {
                chords.push((a, m));
                pushed_chords += 1;
                if m - a >= 3 {
                    pending.push((a, m));
                    pushed_pending += 1;
                }
            }
            if b - m >= 2 {
                chords.push((m, b));
                pushed_chords += 1;
                if b - m >= 3 {
                    pending.push((m, b));
                    pushed_pending += 1;
                }
            }
            rec_enum(pending, chords, visit);
            for _ in 0..pushed_pending {
                pending.pop();
            }
            for _ in 0..pushed_chords {
                chords.pop();
            }
        }
        pending.push((a, b));
    }
}

/// All MOPs of order `n <= 16`, one representative per isomorphism class,
/// ordered by canonical form.
pub fn enumerate_mops(n: usize) -> Result<Vec<NearTriangulation>, MopSolverError> {
    if !(3..=16).contains(&n) {
        return Err(MopSolverError::SizeExceeded(format!(
            "MOP enumeration supports 3 <= n <= 16, got {n}"
        )));
    }
    let mut classes: BTreeMap<Vec<u8>, NearTriangulation> = BTreeMap::new();
    enumerate_polygon_triangulations(n, |chords| {
        let t = crate::generators::mop_from_chords(n, chords).expect("enumerated MOP is valid");
        let key = canonical_form(&t).expect("n <= 16");
        classes.entry(key).or_insert(t);
    });
    Ok(classes.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::oracle;

    #[test]
    fn fan_gammas_match_known_values() {
        let f5 = generators::gen_fan(5).unwrap();
        assert_eq!(exact_tds_mop(&f5).unwrap().size, 2);
        let f12 = generators::gen_fan(12).unwrap();
        assert_eq!(exact_tds_mop(&f12).unwrap().size, 2);
        let k3 = generators::gen_fan(3).unwrap();
        assert_eq!(exact_tds_mop(&k3).unwrap().size, 2);
    }

    #[test]
    fn dp_matches_oracle_on_small_enumerations() {
        for n in 3..=9 {
            enumerate_polygon_triangulations(n, |chords| {
                let dp = gamma_t_polygon(n, chords);
                let t = generators::mop_from_chords(n, chords).unwrap();
                let cert = exact_tds_mop(&t).unwrap();
                assert!(cert.is_valid_for(&t));
                assert_eq!(cert.size, dp);
                let oracle_size = oracle::exact_tds(&oracle::Graph::from(&t), &Default::default())
                    .unwrap()
                    .expect("feasible")
                    .size;
                assert_eq!(dp, oracle_size, "n={n} chords={chords:?}");
            });
        }
    }

    #[test]
    fn dp_matches_oracle_on_random_mops() {
        for seed in 0..60 {
            let n = 10 + (seed as usize % 11);
            let t = generators::gen_random_mop(n, seed).unwrap();
            let cert = exact_tds_mop(&t).unwrap();
            assert!(cert.is_valid_for(&t));
            let oracle_size = oracle::exact_tds(&oracle::Graph::from(&t), &Default::default())
                .unwrap()
                .expect("feasible")
                .size;
            assert_eq!(cert.size, oracle_size, "seed={seed}");
        }
    }

    #[test]
    fn enumeration_counts_are_catalan() {
        let mut raw = 0usize;
        enumerate_polygon_triangulations(5, |_| raw += 1);
        assert_eq!(raw, 5);
        raw = 0;
        enumerate_polygon_triangulations(6, |_| raw += 1);
        assert_eq!(raw, 14);
        raw = 0;
        enumerate_polygon_triangulations(12, |_| raw += 1);
        assert_eq!(raw, 16796);
    }

    #[test]
    fn class_counts_after_dedup() {
        assert_eq!(enumerate_mops(5).unwrap().len(), 1);
        assert_eq!(enumerate_mops(6).unwrap().len(), 3);
    }

    #[test]
    fn pentagon_anchored_pairs_exist_for_every_vertex() {
        // both pentagon triangulation classes, every anchor
        for chords in [vec![(0u32, 2u32), (0, 3)], vec![(0, 2), (2, 4)]] {
            let t = generators::mop_from_chords(5, &chords).unwrap();
            for u in 0..5 {
                let cert = pentagon_tds_with(&t, u).unwrap();
                assert_eq!(cert.size, 2);
                assert!(cert.vertices.contains(&u));
                assert!(cert.is_valid_for(&t));
            }
        }
    }

    #[test]
    fn hexagon_pairs_exist_for_all_triangulations_and_edges() {
        enumerate_polygon_triangulations(6, |chords| {
            let t = generators::mop_from_chords(6, chords).unwrap();
            for i in 0..6u32 {
                let j = (i + 1) % 6;
                let cert = hexagon_tds_pair(&t, i, j).unwrap();
                assert_eq!(cert.size, 2);
                assert!(cert.vertices.contains(&i) || cert.vertices.contains(&j));
                assert!(cert.is_valid_for(&t));
            }
        });
    }

    #[test]
    fn certificates_are_deterministic() {
        let t = generators::gen_random_mop(15, 7).unwrap();
        let a = exact_tds_mop(&t).unwrap();
        let b = exact_tds_mop(&t).unwrap();
        assert_eq!(a.vertices, b.vertices);
    }
}
