//! Graph-state rewrite rules checked against the stabilizer tableau.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rgs_core::graph::{GraphError, GraphState, SideEffect};
use rgs_core::stab::{Basis, Gate, Pauli, PauliString};
use rgs_core::suites::backend::{random_graph, same_state};
use rgs_core::suites::{backend_equivalence, FuseRule};
use rgs_core::Sign;

fn fig1_lc() -> GraphState {
    GraphState::from_edges(1..=5, &[(1, 2), (1, 3), (1, 4), (3, 4), (3, 5)]).unwrap()
}

#[test]
fn local_complement_preserves_state() {
    let g = fig1_lc();
    let t = g.to_tableau(6).unwrap();
    let mut h = g.clone();
    h.local_complement(3).unwrap();
    assert!(same_state(&h, &t));
    assert_ne!(h.to_tableau(6).unwrap(), t);
}

#[test]
fn every_local_complement_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let n = rng.random_range(2..=8);
        let mut g = random_graph(&mut rng, n);
        let t = g.to_tableau(n).unwrap();
        for _ in 0..4 {
            g.local_complement(rng.random_range(0..n)).unwrap();
            assert!(same_state(&g, &t));
        }
    }
}

#[test]
fn measure_z_both_outcomes_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let n = rng.random_range(2..=8);
        let g = random_graph(&mut rng, n);
        let v = rng.random_range(0..n);
        for wanted in [Sign::Plus, Sign::Minus] {
            let mut t = g.to_tableau(n).unwrap();
            let m = t.measure_forced(Basis::Z, v, wanted).unwrap();
            assert!(!m.deterministic);
            let mut h = g.clone();
            h.measure_z(v, wanted).unwrap();
            assert!(same_state(&h, &t), "v={v} outcome {wanted}");
        }
    }
}

#[test]
fn measure_z_outcomes_differ_by_neighborhood_z() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let n = rng.random_range(2..=8);
        let g = random_graph(&mut rng, n);
        let v = rng.random_range(0..n);
        let (mut plus, mut minus) = (g.clone(), g.clone());
        plus.measure_z(v, Sign::Plus).unwrap();
        minus.measure_z(v, Sign::Minus).unwrap();
        assert_eq!(plus.edges(), minus.edges());
        for u in plus.vertices() {
            let toggled = plus.side_effect(u).unwrap() != minus.side_effect(u).unwrap();
            assert_eq!(toggled, g.has_edge(u, v));
        }
    }
}

#[test]
fn fuse_xx_all_outcome_pairs_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 300 {
        let n = rng.random_range(2..=8);
        let mut g = random_graph(&mut rng, n);
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(1..n)) % n;
        if !g.has_edge(a, b) {
            g.add_edge(a, b).unwrap();
        }
        for (pa, pb) in [(Sign::Plus, Sign::Plus), (Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus), (Sign::Minus, Sign::Minus)] {
            let mut t = g.to_tableau(n).unwrap();
            let ma = t.measure_forced(Basis::X, a, pa).unwrap();
            let mb = t.measure_forced(Basis::X, b, pb).unwrap();
            assert!(!ma.deterministic && !mb.deterministic);
            let mut h = g.clone();
            let (oa, ob) = (h.fold_x(a, pa).unwrap(), h.fold_x(b, pb).unwrap());
            h.fuse_xx(a, b, oa, ob).unwrap();
            assert!(same_state(&h, &t), "a={a} b={b} outcomes {pa} {pb}\n{}", g.to_dot());
            assert!(h.side_effects().values().all(|t| t.is_z_type()));
        }
        checked += 1;
    }
}

#[test]
fn fuse_xx_fig1_minus_on_first_qubit() {
    // Oracle version of the drawn example: X_1 = -1 puts Z on 6 and 7.
    let g = GraphState::from_edges(1..=7, &[(1, 2), (1, 3), (1, 4), (1, 5), (2, 6), (2, 7)]).unwrap();
    let mut t = g.to_tableau(8).unwrap();
    t.measure_forced(Basis::X, 1, Sign::Minus).unwrap();
    t.measure_forced(Basis::X, 2, Sign::Plus).unwrap();
    let mut h = g.clone();
    h.fuse_xx(1, 2, Sign::Minus, Sign::Plus).unwrap();
    assert!(same_state(&h, &t));
    for v in [6, 7] {
        assert_eq!(h.side_effect(v).unwrap(), SideEffect::Z);
    }
}

#[test]
fn decorated_generators_stabilize_circuit() {
    // g_u = (-1)^{z_u} X_u prod_{v in N(u)} Z_v for Z-tagged graphs.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let g = random_graph(&mut rng, 6);
        let t = g.to_tableau(6).unwrap();
        for u in 0..6 {
            let mut terms = vec![(u, Pauli::X)];
            terms.extend(g.neighbors(u).unwrap().iter().map(|&v| (v, Pauli::Z)));
            let sign = Sign::from_bit(g.side_effect(u).unwrap() == SideEffect::Z);
            assert!(t.is_stabilized_by(&PauliString::from_terms(6, sign, &terms)).unwrap());
        }
    }
}

#[test]
fn side_effect_tag_circuits_match_tableau_gates() {
    let mut g = GraphState::with_vertices(1);
    g.set_side_effect(0, SideEffect::HZ).unwrap();
    let mut t = g.to_tableau(1).unwrap();
    // HZ|+> = H|-> = |1>.
    assert_eq!(t.peek(Basis::Z, 0).unwrap(), Some(Sign::Minus));
    t.apply(Gate::H(0)).unwrap();
    assert_eq!(t.peek(Basis::X, 0).unwrap(), Some(Sign::Minus));
}

#[test]
fn backend_equivalence_suite_passes() {
    let r = backend_equivalence(150, 11, GraphState::fuse_xx);
    assert!(r.passed(), "{r}");
}

fn fuse_with_swapped_outcomes(g: &mut GraphState, a: usize, b: usize, oa: Sign, ob: Sign) -> Result<(), GraphError> {
    g.fuse_xx(a, b, ob, oa)
}

fn fuse_without_residual(g: &mut GraphState, a: usize, b: usize, oa: Sign, ob: Sign) -> Result<(), GraphError> {
    let shared: Vec<usize> = g.neighbors(a)?.intersection(g.neighbors(b)?).copied().collect();
    g.fuse_xx(a, b, oa, ob)?;
    for v in shared {
        g.toggle_z(v)?;
    }
    Ok(())
}

#[test]
fn backend_equivalence_catches_sign_convention_bugs() {
    for bad in [fuse_with_swapped_outcomes as FuseRule, fuse_without_residual] {
        let r = backend_equivalence(150, 11, bad);
        assert!(!r.passed());
    }
}

proptest! {
    #[test]
    fn local_complement_is_an_involution(seed in any::<u64>(), v in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 6);
        let mut h = g.clone();
        h.local_complement(v).unwrap();
        h.local_complement(v).unwrap();
        prop_assert_eq!(h.edges(), g.edges());
        prop_assert!(same_state(&h, &g.to_tableau(6).unwrap()));
    }

    #[test]
    fn z_type_tags_are_closed(seed in any::<u64>(), ops in prop::collection::vec((0usize..8, 0usize..8, any::<bool>(), any::<bool>()), 1..6)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = random_graph(&mut rng, 8);
        for (a, b, sa, sb) in ops {
            if !g.contains(a) {
                continue;
            }
            if g.contains(b) && a != b && g.has_edge(a, b) {
                g.fuse_xx(a, b, Sign::from_bit(sa), Sign::from_bit(sb)).unwrap();
            } else {
                g.measure_z(a, Sign::from_bit(sa)).unwrap();
            }
            prop_assert!(g.side_effects().values().all(|t| t.is_z_type()));
        }
    }
}
