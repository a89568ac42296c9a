//! Fundamental KR modules of the exceptional types.

use krsys_core::charring::{is_weyl_invariant, restrict};
use krsys_core::systems::verify_q_system;
use krsys_core::{make_cartan, Caps, KrCache, Series};

#[test]
fn f4_fundamentals_are_special() {
    let cd = make_cartan(Series::F, 4).unwrap();
    let cache = KrCache::new(Caps::default());
    // Lower bounds are the dimensions of the matching irreducible modules.
    for (i, irrep) in [(1, 52), (2, 1274), (3, 273), (4, 26)] {
        let chi = cache.kr_qchar(&cd, i, 0, 1).unwrap();
        assert!(chi.is_special(), "node {i}");
        assert!(chi.dimension() >= irrep, "node {i}: {}", chi.dimension());
        assert!(is_weyl_invariant(&cd, &restrict(&cd, &chi)), "node {i}");
    }
    assert_eq!(cache.kr_qchar(&cd, 4, 0, 1).unwrap().dimension(), 26);
    assert_eq!(cache.kr_qchar(&cd, 1, 0, 1).unwrap().dimension(), 53);
    assert!(verify_q_system(&cd, 4, 1, &cache).unwrap().equal);
}

#[test]
fn e_series_minuscule_and_adjoint_nodes() {
    let cache = KrCache::new(Caps::default());
    for (rank, node, dim) in [(6, 1, 27), (6, 6, 27), (6, 2, 79), (7, 7, 56), (7, 1, 134), (8, 8, 249)] {
        let cd = make_cartan(Series::E, rank).unwrap();
        let chi = cache.kr_qchar(&cd, node, 0, 1).unwrap();
        assert!(chi.is_special(), "E{rank} node {node}");
        assert_eq!(chi.dimension(), dim, "E{rank} node {node}");
    }
}
