//! Property tests for the structural invariants.

use num::complex::Complex64;
use num::BigRational;
use proptest::collection::vec;
use proptest::prelude::*;

use schwinger::focksim::{casimir_postselect, evolve_vacuum};
use schwinger::hgraph::{builtin, parse_hgraph, SpinPairing};
use schwinger::nullifiers::relabel_spin_coeffs;
use schwinger::scalar::rat;
use schwinger::HGraph;

/// Strategy: a connected-enough random graph with small integer weights.
fn graph_strategy() -> impl Strategy<Value = HGraph> {
    (2usize..=6).prop_flat_map(|n| {
        let n_slots = n * (n - 1) / 2;
        vec(prop_oneof![Just(0i64), -2i64..=2], n_slots).prop_filter_map(
            "at least one edge",
            move |weights| {
                let mut edges = Vec::new();
                let mut slot = 0;
                for j in 0..n {
                    for k in (j + 1)..n {
                        if weights[slot] != 0 {
                            edges.push((j, k, weights[slot]));
                        }
                        slot += 1;
                    }
                }
                if edges.is_empty() {
                    None
                } else {
                    Some(HGraph::from_edges(n, &edges).expect("valid edges"))
                }
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Serializing any graph (with a pairing when the mode count is even)
    /// and parsing it back is the identity.
    #[test]
    fn graph_json_round_trips(g in graph_strategy()) {
        let n = g.n_modes();
        let pairing = if n % 2 == 0 {
            Some(SpinPairing::new((0..n / 2).map(|i| (i, n / 2 + i)).collect()).unwrap())
        } else {
            None
        };
        let text = g.to_json(pairing.as_ref());
        let (parsed, parsed_pairing) = parse_hgraph(&text).unwrap();
        prop_assert_eq!(parsed, g);
        prop_assert_eq!(parsed_pairing, pairing);
    }

    /// Real weights squeeze the vacuum into a state with real amplitudes.
    #[test]
    fn evolved_amplitudes_are_real(g in graph_strategy(), r in 0.01f64..0.15) {
        let state = evolve_vacuum(&g, r, 6).unwrap();
        for (occ, amp) in state.amplitudes() {
            prop_assert!(
                amp.im.abs() < 1e-12,
                "occupation {:?} has imaginary part {}",
                occ,
                amp.im
            );
        }
    }

    /// Photon pairs are only created along edges, and the square blocks
    /// are bipartite between {1,3} and {2,4}, so the population difference
    /// (N1 + N3) − (N2 + N4) vanishes on every populated tuple, block by
    /// block.
    #[test]
    fn pair_creation_respects_the_edge_structure(r in 0.01f64..0.3) {
        let (g, _) = builtin("square4x2").unwrap();
        let state = evolve_vacuum(&g, r, 8).unwrap();
        for (occ, _) in state.amplitudes() {
            let occ: Vec<i32> = occ.iter().map(|&x| i32::from(x)).collect();
            prop_assert_eq!(occ[0] + occ[2] - occ[1] - occ[3], 0);
            prop_assert_eq!(occ[4] + occ[6] - occ[5] - occ[7], 0);
        }
    }

    /// Post-selection probabilities over every reachable sector add up to
    /// one: they are conditional on the captured (truncated) mass, and the
    /// sectors partition it.
    #[test]
    fn sector_probabilities_are_exhaustive(r in 0.05f64..0.3) {
        let (g, p) = builtin("two_epr").unwrap();
        let cutoff = 8;
        let state = evolve_vacuum(&g, r, cutoff).unwrap();
        let mut total = 0.0;
        for j2a in 0..=(cutoff as u8 / 2) {
            for j2b in 0..=(cutoff as u8 / 2) {
                let sector = casimir_postselect(&state, &p, &[j2a, j2b]).unwrap();
                total += sector.selection_probability();
            }
        }
        prop_assert!(
            (total - 1.0).abs() < 1e-12,
            "sector probabilities sum to {}",
            total
        );
    }

    /// The alternating relabeling is an involution on spin coefficients.
    #[test]
    fn relabeling_is_an_involution(
        raw in vec((-6i64..=6, 1i64..=4), 9),
        n_pairs in 2usize..=4,
    ) {
        let mut coeffs: Vec<BigRational> = raw
            .iter()
            .cycle()
            .take(4 * n_pairs + 1)
            .map(|&(num, den)| rat(num, den))
            .collect();
        coeffs[4 * n_pairs] = rat(0, 1);
        let pairing =
            SpinPairing::new((0..n_pairs).map(|i| (i, n_pairs + i)).collect()).unwrap();
        let (once, swapped) = relabel_spin_coeffs(&coeffs, &pairing);
        let (twice, restored) = relabel_spin_coeffs(&once, &swapped);
        prop_assert_eq!(twice, coeffs);
        prop_assert_eq!(restored, pairing);
    }

    /// Post-selected sectors embed back into Fock space with the same
    /// captured norm.
    #[test]
    fn sector_embedding_preserves_norm(r in 0.05f64..0.25) {
        let (g, p) = builtin("two_epr").unwrap();
        let state = evolve_vacuum(&g, r, 8).unwrap();
        let sector = casimir_postselect(&state, &p, &[1, 1]).unwrap();
        let embedded = sector.to_fock();
        let norm_sq: f64 = embedded.amplitudes().map(|(_, a)| a.norm_sqr()).sum();
        prop_assert!((norm_sq - 1.0).abs() < 1e-12);
        // The embedded sector is unit-normalized while the truncated state
        // keeps its raw norm 1 − deficit, so the squared overlap equals the
        // (captured-mass-conditional) selection probability rescaled by it.
        let overlap: Complex64 = embedded
            .amplitudes()
            .map(|(occ, a)| a.conj() * state.amplitude(occ))
            .sum();
        let state_norm_sq: f64 = state.amplitudes().map(|(_, a)| a.norm_sqr()).sum();
        let want = sector.selection_probability() * state_norm_sq;
        prop_assert!(
            (overlap.norm_sqr() - want).abs() < 1e-10 * want,
            "overlap norm {} vs rescaled selection probability {}",
            overlap.norm_sqr(),
            want
        );
    }
}
