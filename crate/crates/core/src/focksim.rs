//! Truncated-Fock-space simulation.
//!
//! States live in the subspace with total photon number at most `cutoff`,
//! stored as a sparse map from occupation tuples to complex amplitudes.
//! Evolution applies the generator `K = Σ w_jk (a_j†a_k† − a_ja_k)` as a
//! power series inside a working space two photons above the cutoff: the
//! projected generator stays anti-Hermitian, so the series converges to a
//! unit-norm vector there, and whatever mass ends up above the cutoff is
//! reported as `norm_deficit` instead of silently vanishing.
//!
//! Post-selection onto fixed per-pair photon sums turns the state into spin
//! language (`j = (n_a+n_b)/2`, `m = (n_a−n_b)/2`), and a unitary two-mode
//! rotation realizes spin measurements along an arbitrary axis.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::Zero;
use thiserror::Error;

use crate::hgraph::{HGraph, SpinPairing};
use crate::qops::{Monomial, QuadOpF};

/// Series term below this norm ends the evolution loop.
pub const TERM_TOL: f64 = 1e-14;
/// Maximum number of series applications of the generator.
pub const ITER_BUDGET: usize = 500;
/// `norm_deficit` above this value marks the cutoff as insufficient.
pub const DEFICIT_WARN: f64 = 1e-6;
/// Amplitudes at or below this magnitude are not stored.
pub const AMP_TOL: f64 = 1e-15;

pub type FockResult<T> = Result<T, FockError>;

#[derive(Debug, Error)]
pub enum FockError {
    #[error("evolution series still above tolerance after {budget} terms (last term norm {last:e})")]
    NonConvergence { budget: usize, last: f64 },
    #[error("norm deficit {deficit:e} exceeds {limit:e}; raise the photon cutoff")]
    CutoffInsufficient { deficit: f64, limit: f64 },
    #[error("mode {} carries photons in the selected sector but belongs to no pair", mode + 1)]
    UnpairedPhotons { mode: usize },
    #[error("pairing references mode {} but the state has {n_modes} modes", mode + 1)]
    PairingOutOfRange { mode: usize, n_modes: usize },
    #[error("j list has {got} entries for {pairs} pairs")]
    JListLength { got: usize, pairs: usize },
    #[error("measurement settings reuse mode {}", mode + 1)]
    OverlappingMeasurement { mode: usize },
    #[error("measurement references mode {} but the state has {n_modes} modes", mode + 1)]
    MeasurementOutOfRange { mode: usize, n_modes: usize },
    #[error("graph does not match the twin 4-cycle template: {reason}")]
    TemplateMismatch { reason: String },
}

/// Sparse state vector over occupation tuples with `Σ n_i ≤ cutoff`.
#[derive(Debug, Clone)]
pub struct FockVector {
    n_modes: usize,
    cutoff: usize,
    amplitudes: BTreeMap<Vec<u8>, Complex64>,
    norm_deficit: f64,
}

impl FockVector {
    pub fn vacuum(n_modes: usize, cutoff: usize) -> Self {
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(vec![0u8; n_modes], Complex64::new(1.0, 0.0));
        FockVector { n_modes, cutoff, amplitudes, norm_deficit: 0.0 }
    }

    /// Builds a state from explicit amplitudes; tuples above the cutoff or
    /// amplitudes at the storage threshold are rejected by assertion.
    pub fn from_amplitudes(
        n_modes: usize,
        cutoff: usize,
        entries: &[(Vec<u8>, Complex64)],
    ) -> Self {
        let mut amplitudes = BTreeMap::new();
        for (occ, amp) in entries {
            assert_eq!(occ.len(), n_modes, "occupation tuple length mismatch");
            assert!(total(occ) <= cutoff, "occupation tuple exceeds the cutoff");
            if amp.norm() > AMP_TOL {
                amplitudes.insert(occ.clone(), *amp);
            }
        }
        FockVector { n_modes, cutoff, amplitudes, norm_deficit: 0.0 }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Mass lost to truncation: `1 − Σ|amp|²` after the unitary evolution in
    /// the working space.
    pub fn norm_deficit(&self) -> f64 {
        self.norm_deficit
    }

    pub fn needs_larger_cutoff(&self) -> bool {
        self.norm_deficit > DEFICIT_WARN
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (&Vec<u8>, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn n_amplitudes(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, occ: &[u8]) -> Complex64 {
        self.amplitudes.get(occ).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Self {
        let norm = self.norm_squared().sqrt();
        assert!(norm > 0.0, "cannot normalize the zero vector");
        let mut out = self.clone();
        for amp in out.amplitudes.values_mut() {
            *amp /= norm;
        }
        out
    }
}

fn total(occ: &[u8]) -> usize {
    occ.iter().map(|&x| x as usize).sum()
}

/// Evolves the vacuum to `exp(rK)|0⟩` in the truncated space. The series is
/// accumulated term by term (`Σ_k rᵏKᵏ|0⟩/k!`) inside a working space two
/// photons above the cutoff; afterwards the block above the cutoff is
/// dropped into `norm_deficit`.
pub fn evolve_vacuum(g: &HGraph, r: f64, cutoff: usize) -> FockResult<FockVector> {
    assert!(r >= 0.0, "squeezing parameter must be nonnegative");
    let n = g.n_modes();
    let work = cutoff + 2;
    let edges = g.edges();

    let mut sum: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
    sum.insert(vec![0u8; n], Complex64::new(1.0, 0.0));
    let mut term = sum.clone();
    let mut converged = edges.is_empty() || r == 0.0;
    let mut last = 0.0;

    if !converged {
        for k in 1..=ITER_BUDGET {
            let scale = r / k as f64;
            let mut next: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
            for (occ, amp) in &term {
                let tot = total(occ);
                for &(i, j, w) in &edges {
                    let wamp = amp * (w as f64 * scale);
                    if tot + 2 <= work {
                        let f = (((occ[i] as usize + 1) * (occ[j] as usize + 1)) as f64).sqrt();
                        let mut up = occ.clone();
                        up[i] += 1;
                        up[j] += 1;
                        *next.entry(up).or_insert_with(Complex64::zero) += wamp * f;
                    }
                    if occ[i] >= 1 && occ[j] >= 1 {
                        let f = ((occ[i] as usize * occ[j] as usize) as f64).sqrt();
                        let mut down = occ.clone();
                        down[i] -= 1;
                        down[j] -= 1;
                        *next.entry(down).or_insert_with(Complex64::zero) -= wamp * f;
                    }
                }
            }
            let norm: f64 = next.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for (occ, amp) in &next {
                *sum.entry(occ.clone()).or_insert_with(Complex64::zero) += amp;
            }
            term = next;
            last = norm;
            if norm < TERM_TOL {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(FockError::NonConvergence { budget: ITER_BUDGET, last });
    }

    let mut amplitudes = BTreeMap::new();
    let mut kept = 0.0;
    for (occ, amp) in sum {
        if total(&occ) <= cutoff && amp.norm() > AMP_TOL {
            kept += amp.norm_sqr();
            amplitudes.insert(occ, amp);
        }
    }
    let norm_deficit = 1.0 - kept;
    debug_assert!(norm_deficit >= -1e-12, "kept mass exceeds unity: {norm_deficit:e}");
    Ok(FockVector { n_modes: n, cutoff, amplitudes, norm_deficit })
}

/// Applies a quadratic operator to the state, letting the image extend two
/// photons above the cutoff so boundary states keep their full image.
pub fn apply_op(op: &QuadOpF, state: &FockVector) -> BTreeMap<Vec<u8>, Complex64> {
    let mut out: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
    let work = state.cutoff + 2;
    for (occ, amp) in &state.amplitudes {
        let tot = total(occ);
        for (mono, c) in op.terms() {
            let contribution = amp * c;
            match *mono {
                Monomial::Unit => {
                    *out.entry(occ.clone()).or_insert_with(Complex64::zero) += contribution;
                }
                Monomial::Mixed(i, j) => {
                    if i == j {
                        if occ[i] > 0 {
                            let f = occ[i] as f64;
                            *out.entry(occ.clone()).or_insert_with(Complex64::zero) +=
                                contribution * f;
                        }
                    } else if occ[j] >= 1 {
                        let f = ((occ[j] as usize * (occ[i] as usize + 1)) as f64).sqrt();
                        let mut next = occ.clone();
                        next[j] -= 1;
                        next[i] += 1;
                        *out.entry(next).or_insert_with(Complex64::zero) += contribution * f;
                    }
                }
                Monomial::Create2(i, j) => {
                    if tot + 2 > work {
                        continue;
                    }
                    let f = if i == j {
                        (((occ[i] as usize + 1) * (occ[i] as usize + 2)) as f64).sqrt()
                    } else {
                        (((occ[i] as usize + 1) * (occ[j] as usize + 1)) as f64).sqrt()
                    };
                    let mut next = occ.clone();
                    next[i] += 1;
                    next[j] += 1;
                    *out.entry(next).or_insert_with(Complex64::zero) += contribution * f;
                }
                Monomial::Annih2(i, j) => {
                    let f = if i == j {
                        if occ[i] < 2 {
                            continue;
                        }
                        ((occ[i] as usize * (occ[i] as usize - 1)) as f64).sqrt()
                    } else {
                        if occ[i] < 1 || occ[j] < 1 {
                            continue;
                        }
                        ((occ[i] as usize * occ[j] as usize) as f64).sqrt()
                    };
                    let mut next = occ.clone();
                    next[i] -= 1;
                    next[j] -= 1;
                    *out.entry(next).or_insert_with(Complex64::zero) += contribution * f;
                }
            }
        }
    }
    out
}

/// Mean and variance of an operator on the normalized state:
/// `⟨op⟩` and `⟨op†op⟩ − |⟨op⟩|²`. For Hermitian operators the second value
/// is the variance; the working space keeps the image exact, so no boundary
/// correction is needed.
pub fn expectation_variance(op: &QuadOpF, state: &FockVector) -> (Complex64, f64) {
    let normed = state.normalized();
    let image = apply_op(op, &normed);
    let mut expectation = Complex64::zero();
    for (occ, amp) in &normed.amplitudes {
        if let Some(im) = image.get(occ) {
            expectation += amp.conj() * im;
        }
    }
    let image_norm: f64 = image.values().map(|a| a.norm_sqr()).sum();
    (expectation, image_norm - expectation.norm_sqr())
}

/// All occupation tuples with `Σ n ≤ cutoff`, sorted by total photon number
/// then lexicographically, so the `≤ c` block is a prefix of the `≤ c+2`
/// basis.
pub fn fock_basis(n_modes: usize, cutoff: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for tot in 0..=cutoff {
        let mut occ = vec![0u8; n_modes];
        fill_basis(&mut out, &mut occ, 0, tot);
    }
    out
}

fn fill_basis(out: &mut Vec<Vec<u8>>, occ: &mut Vec<u8>, mode: usize, remaining: usize) {
    if mode + 1 == occ.len() {
        occ[mode] = remaining as u8;
        out.push(occ.clone());
        occ[mode] = 0;
        return;
    }
    for k in 0..=remaining {
        occ[mode] = k as u8;
        fill_basis(out, occ, mode + 1, remaining - k);
    }
    occ[mode] = 0;
}

/// Dense matrix of the operator on the `fock_basis(n_modes, cutoff)` basis;
/// entries above the cutoff are dropped (a plain truncation, exact for
/// matrix elements between kept states).
pub fn op_matrix(op: &QuadOpF, n_modes: usize, cutoff: usize) -> nalgebra::DMatrix<Complex64> {
    let basis = fock_basis(n_modes, cutoff);
    let index: BTreeMap<Vec<u8>, usize> =
        basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    let dim = basis.len();
    let mut m = nalgebra::DMatrix::from_element(dim, dim, Complex64::zero());
    for (col, occ) in basis.iter().enumerate() {
        let probe = FockVector::from_amplitudes(
            n_modes,
            cutoff,
            &[(occ.clone(), Complex64::new(1.0, 0.0))],
        );
        for (row_occ, amp) in apply_op(op, &probe) {
            if let Some(&row) = index.get(&row_occ) {
                m[(row, col)] += amp;
            }
        }
    }
    m
}

/// State of the paired modes after projecting each pair onto a fixed total
/// photon number `2j`. Amplitudes are keyed by the doubled per-pair spin
/// projections `2m` (so all keys are integers even at half-integer spin).
#[derive(Debug, Clone)]
pub struct SpinSectorState {
    n_modes: usize,
    pairing: SpinPairing,
    j2_list: Vec<u8>,
    amplitudes: BTreeMap<Vec<i16>, Complex64>,
    selection_probability: f64,
}

impl SpinSectorState {
    pub fn from_parts(
        n_modes: usize,
        pairing: SpinPairing,
        j2_list: Vec<u8>,
        amplitudes: BTreeMap<Vec<i16>, Complex64>,
        selection_probability: f64,
    ) -> Self {
        assert_eq!(pairing.pairs().len(), j2_list.len());
        for key in amplitudes.keys() {
            assert_eq!(key.len(), j2_list.len());
            for (m2, &j2) in key.iter().zip(&j2_list) {
                assert!(m2.unsigned_abs() as u8 <= j2 && (m2 + j2 as i16) % 2 == 0);
            }
        }
        SpinSectorState { n_modes, pairing, j2_list, amplitudes, selection_probability }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_spins(&self) -> usize {
        self.j2_list.len()
    }

    pub fn pairing(&self) -> &SpinPairing {
        &self.pairing
    }

    /// Doubled spins `2j` per pair.
    pub fn j2_list(&self) -> &[u8] {
        &self.j2_list
    }

    pub fn selection_probability(&self) -> f64 {
        self.selection_probability
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (&Vec<i16>, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn amplitude(&self, m2: &[i16]) -> Complex64 {
        self.amplitudes.get(m2).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_qubit_sector(&self) -> bool {
        self.j2_list.iter().all(|&j2| j2 == 1)
    }

    /// Per-spin dimensions `2j+1`.
    pub fn dims(&self) -> Vec<usize> {
        self.j2_list.iter().map(|&j2| j2 as usize + 1).collect()
    }

    /// Row-major dense amplitude tensor; index `k_i = j_i − m_i` per spin,
    /// so index 0 is the highest projection (spin up for qubits).
    pub fn dense(&self) -> Vec<Complex64> {
        let dims = self.dims();
        let size: usize = dims.iter().product();
        let mut out = vec![Complex64::zero(); size];
        for (m2, amp) in &self.amplitudes {
            let mut flat = 0usize;
            for (i, &m) in m2.iter().enumerate() {
                let k = ((self.j2_list[i] as i16 - m) / 2) as usize;
                flat = flat * dims[i] + k;
            }
            out[flat] = *amp;
        }
        out
    }

    /// Reconstructs the occupation-basis state on the original modes
    /// (`n_a = j+m`, `n_b = j−m` per pair; unpaired modes empty).
    pub fn to_fock(&self) -> FockVector {
        let cutoff: usize = self.j2_list.iter().map(|&j2| j2 as usize).sum();
        let mut entries = Vec::new();
        for (m2, amp) in &self.amplitudes {
            let mut occ = vec![0u8; self.n_modes];
            for (p, &(a, b)) in self.pairing.pairs().iter().enumerate() {
                occ[a] = ((self.j2_list[p] as i16 + m2[p]) / 2) as u8;
                occ[b] = ((self.j2_list[p] as i16 - m2[p]) / 2) as u8;
            }
            entries.push((occ, *amp));
        }
        FockVector::from_amplitudes(self.n_modes, cutoff, &entries)
    }
}

/// Projects onto the sector where pair `p` holds exactly `2j_p` photons,
/// i.e. a simultaneous eigenspace of the per-pair Casimirs. Returns the
/// normalized sector state and the selection probability relative to the
/// stored state. An empty sector comes back with probability zero.
pub fn casimir_postselect(
    state: &FockVector,
    pairing: &SpinPairing,
    j2_list: &[u8],
) -> FockResult<SpinSectorState> {
    for &(a, b) in pairing.pairs() {
        for mode in [a, b] {
            if mode >= state.n_modes {
                return Err(FockError::PairingOutOfRange { mode, n_modes: state.n_modes });
            }
        }
    }
    if j2_list.len() != pairing.pairs().len() {
        return Err(FockError::JListLength {
            got: j2_list.len(),
            pairs: pairing.pairs().len(),
        });
    }
    let unpaired = pairing.unpaired_modes(state.n_modes);

    let mut kept: BTreeMap<Vec<i16>, Complex64> = BTreeMap::new();
    let mut kept_mass = 0.0;
    for (occ, amp) in &state.amplitudes {
        let matches = pairing
            .pairs()
            .iter()
            .zip(j2_list)
            .all(|(&(a, b), &j2)| occ[a] as usize + occ[b] as usize == j2 as usize);
        if !matches {
            continue;
        }
        if let Some(&mode) = unpaired.iter().find(|&&m| occ[m] > 0) {
            return Err(FockError::UnpairedPhotons { mode });
        }
        let m2: Vec<i16> = pairing
            .pairs()
            .iter()
            .map(|&(a, b)| occ[a] as i16 - occ[b] as i16)
            .collect();
        kept_mass += amp.norm_sqr();
        kept.insert(m2, *amp);
    }

    let full_mass = state.norm_squared();
    if kept_mass == 0.0 || full_mass == 0.0 {
        return Ok(SpinSectorState {
            n_modes: state.n_modes,
            pairing: pairing.clone(),
            j2_list: j2_list.to_vec(),
            amplitudes: BTreeMap::new(),
            selection_probability: 0.0,
        });
    }
    let scale = kept_mass.sqrt();
    let amplitudes = kept
        .into_iter()
        .map(|(k, a)| (k, a / scale))
        .filter(|(_, a)| a.norm() > AMP_TOL)
        .collect();
    Ok(SpinSectorState {
        n_modes: state.n_modes,
        pairing: pairing.clone(),
        j2_list: j2_list.to_vec(),
        amplitudes,
        selection_probability: kept_mass / full_mass,
    })
}

/// One measured pair: spin direction `(theta, phi)` on the Bloch sphere.
#[derive(Debug, Clone, Copy)]
pub struct MeasureSetting {
    pub pair: (usize, usize),
    pub theta: f64,
    pub phi: f64,
}

/// Joint photon-count distribution over the rotated detection modes, keyed
/// by flattened `(n_b1, n_b2)` per measured pair in setting order.
#[derive(Debug, Clone)]
pub struct MeasurementTable {
    pub outcomes: BTreeMap<Vec<u8>, f64>,
}

impl MeasurementTable {
    pub fn probability(&self, outcome: &[u8]) -> f64 {
        self.outcomes.get(outcome).copied().unwrap_or(0.0)
    }

    /// Mean of `(n_b1 − n_b2)/2` for the given measured pair: the measured
    /// spin projection along the setting's axis.
    pub fn mean_half_difference(&self, pair_index: usize) -> f64 {
        self.outcomes
            .iter()
            .map(|(key, p)| {
                let n1 = key[2 * pair_index] as f64;
                let n2 = key[2 * pair_index + 1] as f64;
                p * (n1 - n2) / 2.0
            })
            .sum()
    }
}

/// Amplitude for the rotated pair: `⟨m₁, m₂|_b |n₁, n₂⟩_a` under
/// `b₁ = a₁cos(θ/2) + a₂e^{−iφ}sin(θ/2)`,
/// `b₂ = −a₁sin(θ/2) + a₂e^{−iφ}cos(θ/2)`.
fn pair_rotation_amp(n1: usize, n2: usize, m1: usize, theta: f64, phi: f64) -> Complex64 {
    let m2 = n1 + n2 - m1;
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let mut sum = 0.0;
    let lo = m1.saturating_sub(n2);
    let hi = m1.min(n1);
    for k in lo..=hi {
        let l = m1 - k;
        sum += binom(n1, k)
            * binom(n2, l)
            * c.powi((k + n2 - l) as i32)
            * (-s).powi((n1 - k) as i32)
            * s.powi(l as i32);
    }
    let mag = sum * (factorial(m1) * factorial(m2) / (factorial(n1) * factorial(n2))).sqrt();
    Complex64::from_polar(1.0, -phi * n2 as f64) * mag
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Measures one or more disjoint pairs jointly, marginalizing over all
/// unmeasured modes. Per pair the total count is conserved
/// (`n_b1 + n_b2 = n_a1 + n_a2`), and `(n_b1 − n_b2)/2` is distributed as
/// the spin component along `(θ, φ)`.
pub fn measure_spins(
    state: &FockVector,
    settings: &[MeasureSetting],
) -> FockResult<MeasurementTable> {
    let mut used = std::collections::BTreeSet::new();
    for s in settings {
        for mode in [s.pair.0, s.pair.1] {
            if mode >= state.n_modes {
                return Err(FockError::MeasurementOutOfRange { mode, n_modes: state.n_modes });
            }
            if !used.insert(mode) {
                return Err(FockError::OverlappingMeasurement { mode });
            }
        }
    }
    let normed = state.normalized();
    let measured: Vec<usize> = used.iter().copied().collect();

    // Accumulate rotated amplitudes keyed by (outcomes, residual occupation),
    // then fold the residuals into probabilities.
    let mut joint: BTreeMap<(Vec<u8>, Vec<u8>), Complex64> = BTreeMap::new();
    for (occ, amp) in &normed.amplitudes {
        let residual: Vec<u8> = (0..state.n_modes)
            .filter(|m| !measured.contains(m))
            .map(|m| occ[m])
            .collect();
        let mut branch: Vec<(Vec<u8>, Complex64)> = vec![(Vec::new(), *amp)];
        for s in settings {
            let n1 = occ[s.pair.0] as usize;
            let n2 = occ[s.pair.1] as usize;
            let tot = n1 + n2;
            let mut next = Vec::with_capacity(branch.len() * (tot + 1));
            for m1 in 0..=tot {
                let coef = pair_rotation_amp(n1, n2, m1, s.theta, s.phi);
                if coef.norm() <= 1e-18 {
                    continue;
                }
                for (key, a) in &branch {
                    let mut k = key.clone();
                    k.push(m1 as u8);
                    k.push((tot - m1) as u8);
                    next.push((k, a * coef));
                }
            }
            branch = next;
        }
        for (key, a) in branch {
            *joint.entry((key, residual.clone())).or_insert_with(Complex64::zero) += a;
        }
    }

    let mut outcomes: BTreeMap<Vec<u8>, f64> = BTreeMap::new();
    for ((key, _), amp) in joint {
        let p = amp.norm_sqr();
        if p > 1e-18 {
            *outcomes.entry(key).or_insert(0.0) += p;
        }
    }
    Ok(MeasurementTable { outcomes })
}

/// The four-qubit state predicted at leading order for a twin 4-cycle graph,
/// with integer cycle weights folded into `a = w₁₂·w₃₄` and `b = w₂₃·w₁₄`.
#[derive(Debug, Clone)]
pub struct PerturbativeQubitState {
    pub a: i64,
    pub b: i64,
    pub state: SpinSectorState,
}

/// Leading-order post-selected qubit state of a twin 4-cycle graph, written
/// in the alternating relabeled convention (see [`alternating_relabel`]):
/// amplitude `a` on ↑↓↓↑ and ↓↑↑↓, `b` on ↑↑↓↓ and ↓↓↑↑, and `−(a+b)` on
/// ↑↓↑↓ and ↓↑↓↑, normalized by `√(2a² + 2b² + 2(a+b)²)`. Computed from the
/// edge weights alone, so it is an independent oracle for the series
/// evolution.
pub fn perturbative_qubit_state(g: &HGraph) -> FockResult<PerturbativeQubitState> {
    let mismatch = |reason: &str| FockError::TemplateMismatch { reason: reason.into() };
    if g.n_modes() != 8 {
        return Err(mismatch("the template needs exactly 8 modes"));
    }
    let mut block1: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    let mut block2: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for (j, k, w) in g.edges() {
        if j < 4 && k < 4 {
            block1.insert((j, k), w);
        } else if j >= 4 && k >= 4 {
            block2.insert((j - 4, k - 4), w);
        } else {
            return Err(mismatch(&format!(
                "edge ({}, {}) crosses the twin blocks",
                j + 1,
                k + 1
            )));
        }
    }
    if block1 != block2 {
        return Err(mismatch("the twin blocks carry different weights"));
    }
    for &(j, k) in block1.keys() {
        if !matches!((j, k), (0, 1) | (1, 2) | (2, 3) | (0, 3)) {
            return Err(mismatch(&format!(
                "edge ({}, {}) lies outside the 4-cycle",
                j + 1,
                k + 1
            )));
        }
    }
    let w = |j, k| block1.get(&(j, k)).copied().unwrap_or(0);
    let a = w(0, 1) * w(2, 3);
    let b = w(1, 2) * w(0, 3);
    let norm_sq = 2 * a * a + 2 * b * b + 2 * (a + b) * (a + b);
    if norm_sq == 0 {
        return Err(mismatch("cycle weights give a vanishing qubit state"));
    }
    let norm = (norm_sq as f64).sqrt();

    // Up is m = +1/2; spin order follows the pairs (1,5),(2,6),(3,7),(4,8).
    let up = 1i16;
    let dn = -1i16;
    let entries = [
        (vec![up, dn, dn, up], a),
        (vec![dn, up, up, dn], a),
        (vec![up, up, dn, dn], b),
        (vec![dn, dn, up, up], b),
        (vec![up, dn, up, dn], -(a + b)),
        (vec![dn, up, dn, up], -(a + b)),
    ];
    let mut amplitudes = BTreeMap::new();
    for (m2, coeff) in entries {
        if coeff != 0 {
            amplitudes.insert(m2, Complex64::new(coeff as f64 / norm, 0.0));
        }
    }
    // The relabeled convention swaps the mode order inside pairs 2 and 4.
    let pairing = SpinPairing::new(vec![(0, 4), (5, 1), (2, 6), (7, 3)])
        .expect("template pairing is disjoint");
    let state = SpinSectorState {
        n_modes: 8,
        pairing,
        j2_list: vec![1, 1, 1, 1],
        amplitudes,
        selection_probability: 1.0,
    };
    Ok(PerturbativeQubitState { a, b, state })
}

/// Rewrites the sector state in the convention that swaps the mode order of
/// every second pair (positions 2, 4, … as listed) together with a π phase
/// on the swapped pair's original second mode. Per swapped pair the
/// amplitude picks up `(−1)^{j−m}` and `m` flips sign; this is the local
/// relabeling that turns the twin-graph nullifiers into symmetric totals
/// (for a single EPR sector it maps ↑↑+↓↓ into the singlet ↑↓−↓↑).
pub fn alternating_relabel(state: &SpinSectorState) -> SpinSectorState {
    let swapped: Vec<bool> = (0..state.n_spins()).map(|p| p % 2 == 1).collect();
    let pairs: Vec<(usize, usize)> = state
        .pairing
        .pairs()
        .iter()
        .enumerate()
        .map(|(p, &(a, b))| if swapped[p] { (b, a) } else { (a, b) })
        .collect();
    let mut amplitudes = BTreeMap::new();
    for (m2, amp) in &state.amplitudes {
        let mut key = m2.clone();
        let mut sign = 1.0;
        for (p, flip) in swapped.iter().enumerate() {
            if !flip {
                continue;
            }
            // (j2 − m2)/2 = n_b of the original ordering.
            if (state.j2_list[p] as i16 - m2[p]) / 2 % 2 != 0 {
                sign = -sign;
            }
            key[p] = -key[p];
        }
        amplitudes.insert(key, amp * sign);
    }
    SpinSectorState {
        n_modes: state.n_modes,
        pairing: SpinPairing::new(pairs).expect("swapping pair order preserves disjointness"),
        j2_list: state.j2_list.clone(),
        amplitudes,
        selection_probability: state.selection_probability,
    }
}
