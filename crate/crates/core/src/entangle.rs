//! Entanglement characterization of spin-sector states.
//!
//! Everything here works on pure states: amplitude tensors indexed by the
//! magnetic quantum numbers of each spin. A bipartition reshapes the tensor
//! into a matrix and reads off its singular values (the Schmidt
//! coefficients); separability questions reduce to rank counts on those
//! spectra. Classification enumerates every bipartition, which is feasible
//! because the post-selected states of interest have at most a dozen spins.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::Zero;
use thiserror::Error;

use crate::focksim::SpinSectorState;
use crate::hgraph::SpinPairing;

/// Schmidt coefficients below this threshold do not count towards the rank
/// used by [`classify`]. Sits far above the normalization tolerance and far
/// below any genuine coefficient arising from small integer amplitudes.
pub const SCHMIDT_TOL: f64 = 1e-8;

/// Largest tolerated deviation of the squared norm from one.
pub const NORM_TOL: f64 = 1e-10;

/// Exhaustive bipartition enumeration is capped at this many spins.
pub const CLASSIFY_SPIN_LIMIT: usize = 12;

#[derive(Debug, Error)]
pub enum EntangleError {
    #[error("state norm² deviates from 1 by {deviation:.3e}; normalize first")]
    Unnormalized { deviation: f64 },
    #[error("subset must be a nonempty proper set of spin indices")]
    BadSubset,
    #[error("spin index {} out of range for {n_spins} spins", index + 1)]
    SpinOutOfRange { index: usize, n_spins: usize },
    #[error("operation needs an all-qubit sector; spin {} has 2j = {j2}", spin + 1)]
    NotQubitSector { spin: usize, j2: u8 },
    #[error("too many spins for exhaustive classification: {n_spins} > {limit}")]
    TooManySpins { n_spins: usize, limit: usize },
    #[error("shape mismatch: {reason}")]
    ShapeMismatch { reason: String },
    #[error("outcome 2m = {m2} is not reachable for spin {} with 2j = {j2}", spin + 1)]
    BadOutcome { spin: usize, m2: i16, j2: u8 },
}

pub type EntangleResult<T> = Result<T, EntangleError>;

/// Separability class of a pure multi-qubit state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// Every single-spin cut has Schmidt rank 1.
    FullyProduct,
    /// Some cut has Schmidt rank 1; the witness is the first such subset in
    /// (size, lexicographic) order, so it names a smallest separable side.
    Biseparable {
        subset: Vec<usize>,
        complement: Vec<usize>,
    },
    /// Every cut has Schmidt rank at least 2.
    GenuineMultipartite,
}

/// Schmidt spectrum and entropy of one bipartition.
#[derive(Debug, Clone)]
pub struct BipartitionEntry {
    pub subset: Vec<usize>,
    pub complement: Vec<usize>,
    /// Nonnegative, descending, squares summing to 1.
    pub schmidt: Vec<f64>,
    pub entropy_bits: f64,
}

/// Full entanglement characterization of one state.
#[derive(Debug, Clone)]
pub struct EntanglementReport {
    pub state_id: String,
    /// One entry per bipartition, subset always containing spin 1,
    /// ordered by (subset size, lexicographic).
    pub bipartitions: Vec<BipartitionEntry>,
    /// Present only for all-qubit sectors.
    pub classification: Option<Classification>,
    /// Per-spin Tr(ρ²).
    pub single_spin_purities: Vec<f64>,
}

fn check_normalized(state: &SpinSectorState) -> EntangleResult<()> {
    let deviation = (state.norm_squared() - 1.0).abs();
    if deviation > NORM_TOL {
        return Err(EntangleError::Unnormalized { deviation });
    }
    Ok(())
}

/// Validates a subset and returns it sorted and deduplicated.
fn normalize_subset(subset: &[usize], n_spins: usize) -> EntangleResult<Vec<usize>> {
    let mut sorted: Vec<usize> = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &s in &sorted {
        if s >= n_spins {
            return Err(EntangleError::SpinOutOfRange {
                index: s,
                n_spins,
            });
        }
    }
    if sorted.is_empty() || sorted.len() == n_spins {
        return Err(EntangleError::BadSubset);
    }
    Ok(sorted)
}

/// Singular values of the amplitude tensor reshaped across `subset` versus
/// its complement, descending.
fn schmidt_values(state: &SpinSectorState, subset: &[usize]) -> Vec<f64> {
    let dims = state.dims();
    let n = dims.len();
    let in_subset: Vec<bool> = {
        let mut mask = vec![false; n];
        for &s in subset {
            mask[s] = true;
        }
        mask
    };
    let rows: usize = (0..n).filter(|&i| in_subset[i]).map(|i| dims[i]).product();
    let cols: usize = (0..n).filter(|&i| !in_subset[i]).map(|i| dims[i]).product();
    let mut m = DMatrix::<Complex64>::zeros(rows, cols);
    for (m2, amp) in state.amplitudes() {
        let mut row = 0usize;
        let mut col = 0usize;
        for i in 0..n {
            let k = ((state.j2_list()[i] as i16 - m2[i]) / 2) as usize;
            if in_subset[i] {
                row = row * dims[i] + k;
            } else {
                col = col * dims[i] + k;
            }
        }
        m[(row, col)] += amp;
    }
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Schmidt coefficients of the state across `subset` | complement.
/// Coefficients are nonnegative and descending; their squares sum to 1.
pub fn bipartition_spectrum(
    state: &SpinSectorState,
    subset: &[usize],
) -> EntangleResult<Vec<f64>> {
    check_normalized(state)?;
    let subset = normalize_subset(subset, state.n_spins())?;
    Ok(schmidt_values(state, &subset))
}

/// Entanglement entropy in bits, `−Σ λ² log₂ λ²`.
pub fn entropy_bits(schmidt: &[f64]) -> f64 {
    schmidt
        .iter()
        .map(|&l| l * l)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

fn schmidt_rank(schmidt: &[f64]) -> usize {
    schmidt.iter().filter(|&&l| l > SCHMIDT_TOL).count()
}

/// All subsets of `{0..n}` with the given size, in lexicographic order.
fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, size, current, out);
            current.pop();
        }
    }
    rec(0, n, size, &mut current, &mut out);
    out
}

fn require_qubits(state: &SpinSectorState) -> EntangleResult<()> {
    for (spin, &j2) in state.j2_list().iter().enumerate() {
        if j2 != 1 {
            return Err(EntangleError::NotQubitSector { spin, j2 });
        }
    }
    Ok(())
}

/// Separability classification of an all-qubit pure state by exhaustive
/// bipartition ranks: fully product when every single-spin cut factors,
/// biseparable when at least one cut factors (reporting the first factoring
/// subset in (size, lexicographic) order), genuinely multipartite when no
/// cut does.
pub fn classify(state: &SpinSectorState) -> EntangleResult<Classification> {
    check_normalized(state)?;
    require_qubits(state)?;
    let n = state.n_spins();
    if n > CLASSIFY_SPIN_LIMIT {
        return Err(EntangleError::TooManySpins {
            n_spins: n,
            limit: CLASSIFY_SPIN_LIMIT,
        });
    }
    if n <= 1 {
        return Ok(Classification::FullyProduct);
    }
    let single_ranks: Vec<usize> = (0..n)
        .map(|i| schmidt_rank(&schmidt_values(state, &[i])))
        .collect();
    if single_ranks.iter().all(|&r| r == 1) {
        return Ok(Classification::FullyProduct);
    }
    // Sizes up to n/2 cover every bipartition once by its smaller side.
    for size in 1..=n / 2 {
        for subset in subsets_of_size(n, size) {
            if schmidt_rank(&schmidt_values(state, &subset)) == 1 {
                let complement: Vec<usize> =
                    (0..n).filter(|i| !subset.contains(i)).collect();
                return Ok(Classification::Biseparable { subset, complement });
            }
        }
    }
    Ok(Classification::GenuineMultipartite)
}

/// Builds the full report: every bipartition spectrum (subset side always
/// containing spin 1), the classification when the sector is all-qubit, and
/// per-spin purities.
pub fn report(state_id: &str, state: &SpinSectorState) -> EntangleResult<EntanglementReport> {
    check_normalized(state)?;
    let n = state.n_spins();
    let mut bipartitions = Vec::new();
    for size in 1..n {
        for mut subset in subsets_of_size(n - 1, size - 1) {
            // Fix spin 0 into the subset so each bipartition appears once.
            for s in subset.iter_mut() {
                *s += 1;
            }
            subset.insert(0, 0);
            let schmidt = schmidt_values(state, &subset);
            let complement: Vec<usize> = (0..n).filter(|i| !subset.contains(i)).collect();
            bipartitions.push(BipartitionEntry {
                entropy_bits: entropy_bits(&schmidt),
                subset,
                complement,
                schmidt,
            });
        }
    }
    let classification = if state.is_qubit_sector() && n <= CLASSIFY_SPIN_LIMIT {
        Some(classify(state)?)
    } else {
        None
    };
    let single_spin_purities = (0..n)
        .map(|i| {
            if n == 1 {
                return 1.0;
            }
            schmidt_values(state, &[i]).iter().map(|l| l.powi(4)).sum()
        })
        .collect();
    Ok(EntanglementReport {
        state_id: state_id.to_string(),
        bipartitions,
        classification,
        single_spin_purities,
    })
}

/// Squared overlap `|⟨s1|s2⟩|²` of two sector states with identical pairing
/// and sector labels.
pub fn fidelity(s1: &SpinSectorState, s2: &SpinSectorState) -> EntangleResult<f64> {
    if s1.pairing().pairs() != s2.pairing().pairs() {
        return Err(EntangleError::ShapeMismatch {
            reason: "pairings differ".into(),
        });
    }
    if s1.j2_list() != s2.j2_list() {
        return Err(EntangleError::ShapeMismatch {
            reason: "sector labels differ".into(),
        });
    }
    check_normalized(s1)?;
    check_normalized(s2)?;
    let mut overlap = Complex64::zero();
    for (m2, amp) in s1.amplitudes() {
        overlap += amp.conj() * s2.amplitude(m2);
    }
    Ok(overlap.norm_sqr().min(1.0))
}

/// Projects one qubit onto the `J_z` eigenvalue `m2/2` and removes it,
/// returning the renormalized residual state and the outcome probability.
/// The residual state's selection probability compounds the outcome, so
/// chained collapses track the full path weight. A zero-probability outcome
/// yields an empty state with probability 0.
pub fn projective_collapse(
    state: &SpinSectorState,
    spin: usize,
    m2: i16,
) -> EntangleResult<(SpinSectorState, f64)> {
    check_normalized(state)?;
    require_qubits(state)?;
    let n = state.n_spins();
    if spin >= n {
        return Err(EntangleError::SpinOutOfRange {
            index: spin,
            n_spins: n,
        });
    }
    if m2 != 1 && m2 != -1 {
        return Err(EntangleError::BadOutcome {
            spin,
            m2,
            j2: state.j2_list()[spin],
        });
    }
    let mut kept: BTreeMap<Vec<i16>, Complex64> = BTreeMap::new();
    let mut prob = 0.0f64;
    for (key, amp) in state.amplitudes() {
        if key[spin] != m2 {
            continue;
        }
        prob += amp.norm_sqr();
        let mut residual = key.clone();
        residual.remove(spin);
        kept.insert(residual, *amp);
    }
    let mut pairs = state.pairing().pairs().to_vec();
    pairs.remove(spin);
    let pairing = SpinPairing::new(pairs).expect("removing a pair keeps modes distinct");
    let mut j2_list = state.j2_list().to_vec();
    j2_list.remove(spin);
    if prob <= 0.0 {
        let empty = SpinSectorState::from_parts(
            state.n_modes(),
            pairing,
            j2_list,
            BTreeMap::new(),
            0.0,
        );
        return Ok((empty, 0.0));
    }
    let scale = prob.sqrt().recip();
    for amp in kept.values_mut() {
        *amp *= scale;
    }
    let residual = SpinSectorState::from_parts(
        state.n_modes(),
        pairing,
        j2_list,
        kept,
        state.selection_probability() * prob,
    );
    Ok((residual, prob))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::focksim::{
        apply_op, casimir_postselect, evolve_vacuum, perturbative_qubit_state,
    };
    use crate::hgraph::builtin;
    use crate::nullifiers::exact_spin_nullifiers;

    fn qubits(n: usize, entries: &[(&[i16], f64)]) -> SpinSectorState {
        let pairs: Vec<(usize, usize)> = (0..n).map(|p| (2 * p, 2 * p + 1)).collect();
        let mut amplitudes = BTreeMap::new();
        for &(key, amp) in entries {
            amplitudes.insert(key.to_vec(), Complex64::new(amp, 0.0));
        }
        SpinSectorState::from_parts(
            2 * n,
            SpinPairing::new(pairs).unwrap(),
            vec![1; n],
            amplitudes,
            1.0,
        )
    }

    fn ring_state() -> SpinSectorState {
        let (g, _) = builtin("ring4x2").unwrap();
        perturbative_qubit_state(&g).unwrap().state
    }

    #[test]
    fn bell_pair_is_maximally_entangled() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = qubits(2, &[(&[1, -1], s), (&[-1, 1], -s)]);
        let schmidt = bipartition_spectrum(&bell, &[0]).unwrap();
        assert_eq!(schmidt.len(), 2);
        for l in &schmidt {
            assert!((l - s).abs() < 1e-12);
        }
        assert!((entropy_bits(&schmidt) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_has_unit_coefficient() {
        let up = qubits(4, &[(&[1, 1, 1, 1], 1.0)]);
        for subset in [vec![0], vec![1, 2], vec![0, 3]] {
            let schmidt = bipartition_spectrum(&up, &subset).unwrap();
            assert!((schmidt[0] - 1.0).abs() < 1e-12);
            assert!(schmidt_rank(&schmidt) == 1);
            assert!(entropy_bits(&schmidt).abs() < 1e-12);
        }
        assert_eq!(classify(&up).unwrap(), Classification::FullyProduct);
    }

    #[test]
    fn subset_validation() {
        let up = qubits(2, &[(&[1, 1], 1.0)]);
        assert!(matches!(
            bipartition_spectrum(&up, &[]),
            Err(EntangleError::BadSubset)
        ));
        assert!(matches!(
            bipartition_spectrum(&up, &[0, 1]),
            Err(EntangleError::BadSubset)
        ));
        assert!(matches!(
            bipartition_spectrum(&up, &[5]),
            Err(EntangleError::SpinOutOfRange { .. })
        ));
        let skewed = qubits(2, &[(&[1, 1], 0.5)]);
        assert!(matches!(
            bipartition_spectrum(&skewed, &[0]),
            Err(EntangleError::Unnormalized { .. })
        ));
    }

    #[test]
    fn ring_qubit_state_is_genuinely_multipartite() {
        let state = ring_state();
        for spin in 0..4 {
            let schmidt = bipartition_spectrum(&state, &[spin]).unwrap();
            assert_eq!(schmidt.len(), 2);
            // Maximally mixed marginals: both coefficients 1/√2.
            for l in &schmidt {
                assert!((l - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12, "{schmidt:?}");
            }
        }
        assert_eq!(classify(&state).unwrap(), Classification::GenuineMultipartite);
    }

    #[test]
    fn square_qubit_state_is_two_bell_pairs() {
        let (g, _) = builtin("square4x2").unwrap();
        let state = perturbative_qubit_state(&g).unwrap().state;
        assert_eq!(
            classify(&state).unwrap(),
            Classification::Biseparable {
                subset: vec![0, 2],
                complement: vec![1, 3],
            }
        );
    }

    #[test]
    fn chain_qubit_state_splits_down_the_middle() {
        let (g, _) = builtin("chain4x2").unwrap();
        let state = perturbative_qubit_state(&g).unwrap().state;
        assert_eq!(
            classify(&state).unwrap(),
            Classification::Biseparable {
                subset: vec![0, 1],
                complement: vec![2, 3],
            }
        );
    }

    #[test]
    fn entropy_is_symmetric_under_complement() {
        let state = ring_state();
        for subset in [vec![0], vec![0, 1], vec![0, 2], vec![1, 3], vec![2]] {
            let complement: Vec<usize> =
                (0..4).filter(|i| !subset.contains(i)).collect();
            let a = bipartition_spectrum(&state, &subset).unwrap();
            let b = bipartition_spectrum(&state, &complement).unwrap();
            let nonzero =
                |v: &[f64]| v.iter().copied().filter(|&l| l > 1e-12).collect::<Vec<_>>();
            let (a, b) = (nonzero(&a), nonzero(&b));
            assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn classification_ignores_local_z_rotations() {
        for (name, expected) in [
            ("ring4x2", Classification::GenuineMultipartite),
            (
                "square4x2",
                Classification::Biseparable {
                    subset: vec![0, 2],
                    complement: vec![1, 3],
                },
            ),
        ] {
            let (g, _) = builtin(name).unwrap();
            let base = perturbative_qubit_state(&g).unwrap().state;
            let phases = [0.31f64, 1.7, -2.4, 0.9];
            let mut rotated = BTreeMap::new();
            for (key, amp) in base.amplitudes() {
                let mut out = *amp;
                for (spin, &m2) in key.iter().enumerate() {
                    out *= Complex64::from_polar(1.0, -phases[spin] * m2 as f64 / 2.0);
                }
                rotated.insert(key.clone(), out);
            }
            let rotated = SpinSectorState::from_parts(
                base.n_modes(),
                base.pairing().clone(),
                base.j2_list().to_vec(),
                rotated,
                base.selection_probability(),
            );
            assert_eq!(classify(&rotated).unwrap(), expected, "{name}");
        }
    }

    #[test]
    fn postselected_epr_qubits_carry_one_bit() {
        let (g, p) = builtin("two_epr").unwrap();
        let fock = evolve_vacuum(&g, 0.1, 10).unwrap();
        let sector = casimir_postselect(&fock, &p, &[1, 1]).unwrap();
        let schmidt = bipartition_spectrum(&sector, &[0]).unwrap();
        assert!((entropy_bits(&schmidt) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exact_nullifiers_annihilate_the_qubit_sector() {
        for name in ["two_epr", "chain4x2", "ring4x2"] {
            let (g, p) = builtin(name).unwrap();
            let fock = evolve_vacuum(&g, 0.15, 8).unwrap();
            let j2 = vec![1u8; p.pairs().len()];
            let sector = casimir_postselect(&fock, &p, &j2).unwrap();
            let restricted = sector.to_fock();
            for n in exact_spin_nullifiers(&g, &p) {
                let image = apply_op(&n.op.to_float(), &restricted);
                let norm: f64 = image.values().map(|a| a.norm_sqr()).sum();
                assert!(norm.sqrt() < 1e-8, "{name}");
            }
        }
    }

    #[test]
    fn fidelity_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = qubits(2, &[(&[1, -1], s), (&[-1, 1], s)]);
        let minus = qubits(2, &[(&[1, -1], s), (&[-1, 1], -s)]);
        assert!((fidelity(&plus, &plus).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&plus, &minus).unwrap() < 1e-12);

        let psi = ring_state();
        // Uniform two-up Dicke state on the same pairing.
        let d = 6f64.sqrt().recip();
        let mut dicke = BTreeMap::new();
        for (key, _) in psi.amplitudes() {
            dicke.insert(key.clone(), Complex64::new(d, 0.0));
        }
        assert_eq!(dicke.len(), 6);
        let dicke = SpinSectorState::from_parts(
            psi.n_modes(),
            psi.pairing().clone(),
            psi.j2_list().to_vec(),
            dicke,
            1.0,
        );
        assert!(fidelity(&psi, &dicke).unwrap() < 1e-24);

        let single = qubits(1, &[(&[1], 1.0)]);
        assert!(matches!(
            fidelity(&plus, &single),
            Err(EntangleError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn collapse_of_the_ring_state() {
        let psi = ring_state();
        let (residual, prob) = projective_collapse(&psi, 0, 1).unwrap();
        assert!((prob - 0.5).abs() < 1e-12);
        assert_eq!(residual.n_spins(), 3);
        assert!((residual.norm_squared() - 1.0).abs() < 1e-12);
        // No single spin of the residual factors out.
        for spin in 0..3 {
            let schmidt = bipartition_spectrum(&residual, &[spin]).unwrap();
            assert!(schmidt_rank(&schmidt) >= 2, "spin {spin}: {schmidt:?}");
        }
        // Project a second spin, both outcomes: the chance that the leftover
        // pair is entangled depends on which spin is measured; the partner
        // choices give 5/6, 1/3, 5/6, averaging to exactly 2/3.
        let mut per_partner = Vec::new();
        for partner in 0..3 {
            let mut entangled = 0.0;
            for outcome in [1, -1] {
                let (pair, p) = projective_collapse(&residual, partner, outcome).unwrap();
                if p == 0.0 {
                    continue;
                }
                let schmidt = bipartition_spectrum(&pair, &[0]).unwrap();
                if schmidt_rank(&schmidt) >= 2 {
                    entangled += p;
                }
            }
            per_partner.push(entangled);
        }
        assert!((per_partner[0] - 5.0 / 6.0).abs() < 1e-12);
        assert!((per_partner[1] - 1.0 / 3.0).abs() < 1e-12);
        assert!((per_partner[2] - 5.0 / 6.0).abs() < 1e-12);
        let average: f64 = per_partner.iter().sum::<f64>() / 3.0;
        assert!((average - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn collapse_handles_impossible_outcomes() {
        let up = qubits(2, &[(&[1, 1], 1.0)]);
        let (empty, prob) = projective_collapse(&up, 0, -1).unwrap();
        assert_eq!(prob, 0.0);
        assert!(empty.is_empty());
        assert_eq!(empty.n_spins(), 1);
        assert!(matches!(
            projective_collapse(&up, 0, 2),
            Err(EntangleError::BadOutcome { .. })
        ));
        assert!(matches!(
            projective_collapse(&up, 7, 1),
            Err(EntangleError::SpinOutOfRange { .. })
        ));
    }

    #[test]
    fn collapse_compounds_selection_probability() {
        let psi = ring_state();
        assert!((psi.selection_probability() - 1.0).abs() < 1e-12);
        let (residual, p1) = projective_collapse(&psi, 0, 1).unwrap();
        let (pair, p2) = projective_collapse(&residual, 1, -1).unwrap();
        assert!((pair.selection_probability() - p1 * p2).abs() < 1e-12);
    }

    #[test]
    fn report_carries_spectra_and_purities() {
        let psi = ring_state();
        let rep = report("ring-qubits", &psi).unwrap();
        assert_eq!(rep.state_id, "ring-qubits");
        // 7 bipartitions of 4 spins, subset side holding spin 0.
        assert_eq!(rep.bipartitions.len(), 7);
        assert_eq!(rep.bipartitions[0].subset, vec![0]);
        assert_eq!(rep.bipartitions[0].complement, vec![1, 2, 3]);
        for entry in &rep.bipartitions {
            let total: f64 = entry.schmidt.iter().map(|l| l * l).sum();
            assert!((total - 1.0).abs() < 1e-10);
            for w in entry.schmidt.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
        assert_eq!(rep.classification, Some(Classification::GenuineMultipartite));
        for purity in &rep.single_spin_purities {
            assert!((purity - 0.5).abs() < 1e-12);
        }
    }
}
