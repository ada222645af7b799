//! Property tests over seeded instance generators.

use proptest::prelude::*;

use neartri::embedding::{parse, serialize};
use neartri::generators;
use neartri::oracle;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// NTG round trip reproduces the rotation system and boundary exactly.
    #[test]
    fn ntg_round_trip(n in 5usize..24, m_frac in 0usize..100, seed in any::<u64>()) {
        let m = m_frac % (n - 4 + 1);
        let t = generators::gen_random_neartri(n, m, seed).unwrap();
        let back = parse(&serialize(&t)).unwrap();
        prop_assert_eq!(back.rotations(), t.rotations());
        prop_assert_eq!(back.boundary(), t.boundary());
        // and the bytes themselves are stable
        prop_assert_eq!(serialize(&back), serialize(&t));
    }

    /// Every certificate of the exact MOP solver dominates its instance.
    #[test]
    fn mop_certificates_always_dominate(n in 3usize..32, seed in any::<u64>()) {
        let t = generators::gen_random_mop(n, seed).unwrap();
        let cert = neartri::mop_solver::exact_tds_mop(&t).unwrap();
        prop_assert!(oracle::is_tds_of(&t, &cert.vertices));
        prop_assert_eq!(cert.size, cert.vertices.len());
    }

    /// Generated near-triangulations satisfy the boundary/interior split.
    #[test]
    fn interior_counts(n in 5usize..20, m_frac in 0usize..100, seed in any::<u64>()) {
        let m = m_frac % (n - 4 + 1);
        let t = generators::gen_random_neartri(n, m, seed).unwrap();
        prop_assert_eq!(t.interior_count(), m);
        prop_assert_eq!(t.boundary_len(), n - m);
    }
}
