//! End-to-end pipeline checks and the reproduction report.
//!
//! Each check re-derives a documented claim from scratch and records what
//! came out, tolerances included. Checks pass or fail on what the
//! implementation actually computes; where a computed result contradicts a
//! printed claim, the check reports the contradiction and the evidence
//! instead of forcing agreement.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::{BigRational, One, Zero};
use serde_json::{json, Map, Value};

use crate::entangle::{
    bipartition_spectrum, classify, entropy_bits, fidelity, projective_collapse, Classification,
};
use crate::focksim::{
    alternating_relabel, apply_op, casimir_postselect, evolve_vacuum, fock_basis,
    perturbative_qubit_state, FockVector, SpinSectorState,
};
use crate::heisenberg::diagonalize;
use crate::hgraph::{builtin, Builtin, HGraph, SpinPairing};
use crate::linalg;
use crate::nullifiers::{
    ad_kernel, coords_to_op, exact_spin_nullifiers, hermitian_coords, quadratic_dim,
    spin_expression, spin_nullifiers, verify_nullifiers, VerifyRow,
};
use crate::qops::{hamiltonian_generator, schwinger_spin, Monomial, QuadOp, QuadOpF, SpinComponent};
use crate::scalar::{grat, rat, GRat};

/// Outcome of one acceptance check.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

impl CriterionResult {
    fn new(id: usize, name: &'static str, passed: bool, details: String) -> Self {
        CriterionResult {
            id,
            name,
            passed,
            details,
        }
    }
}

/// Runs every acceptance check in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
    ]
}

fn real_row(row: &[BigRational]) -> Vec<GRat> {
    row.iter()
        .map(|c| GRat::new(c.clone(), BigRational::zero()))
        .collect()
}

fn canonical_rational_span(rows: Vec<Vec<BigRational>>) -> Vec<Vec<GRat>> {
    linalg::canonical_basis(rows.iter().map(|r| real_row(r)).collect())
}

/// Spin coefficient vector over `4·pairs + 1` slots from sparse entries
/// `(pair, component x=0 y=1 z=2 zero=3, numerator, denominator)`.
fn spin_coeffs(n_pairs: usize, entries: &[(usize, usize, i64, i64)]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); 4 * n_pairs + 1];
    for &(p, c, num, den) in entries {
        out[4 * p + c] = rat(num, den);
    }
    out
}

fn fails(id: usize, name: &'static str, details: String) -> CriterionResult {
    CriterionResult::new(id, name, false, details)
}

/// Two-EPR generator: the space of quadratic constants of the motion has
/// dimension 16 (identity excluded), exactly.
pub fn criterion_1() -> CriterionResult {
    let name = "two-EPR quadratic constants count";
    let (g, _) = builtin("two_epr").expect("builtin");
    let dim = ad_kernel(&g).dim();
    CriterionResult::new(
        1,
        name,
        dim == 16,
        format!("commutant dimension (identity excluded): {dim}, required 16"),
    )
}

/// Two-EPR spin nullifiers: the crossed pairing yields exactly the four
/// J₀/J_z/J_x differences plus the J_y sum; the straight pairing adds two
/// more directions for a union of six.
pub fn criterion_2() -> CriterionResult {
    let name = "two-EPR spin nullifier spans";
    let (g, _) = builtin("two_epr").expect("builtin");
    let crossed = SpinPairing::new(vec![(0, 2), (1, 3)]).unwrap();
    let straight = SpinPairing::new(vec![(0, 3), (1, 2)]).unwrap();
    let a = exact_spin_nullifiers(&g, &crossed);
    let b = exact_spin_nullifiers(&g, &straight);
    let mut details = format!(
        "crossed pairing: {} nullifiers; straight pairing: {}\n",
        a.len(),
        b.len()
    );
    let expected = canonical_rational_span(vec![
        spin_coeffs(2, &[(0, 3, 1, 1), (1, 3, -1, 1)]),
        spin_coeffs(2, &[(0, 2, 1, 1), (1, 2, -1, 1)]),
        spin_coeffs(2, &[(0, 0, 1, 1), (1, 0, -1, 1)]),
        spin_coeffs(2, &[(0, 1, 1, 1), (1, 1, 1, 1)]),
    ]);
    let got = canonical_rational_span(a.iter().map(|n| n.spin_coeffs.clone()).collect());
    let span_ok = got == expected;
    details.push_str(&format!(
        "crossed span matches the J0/Jz/Jx differences and the Jy sum: {span_ok}\n"
    ));
    let mut union: Vec<Vec<GRat>> = Vec::new();
    for n in a.iter().chain(&b) {
        union.push(real_row(&hermitian_coords(&n.op, 4)));
    }
    let union_rank = linalg::rank(&union);
    details.push_str(&format!("union of both pairings spans {union_rank} directions, required 6"));
    CriterionResult::new(
        2,
        name,
        a.len() == 4 && b.len() == 4 && span_ok && union_rank == 6,
        details,
    )
}

/// The post-selected two-qubit sector of the two-EPR state carries exactly
/// one bit of entanglement at every squeezing strength.
pub fn criterion_3() -> CriterionResult {
    let name = "squeezing-independent sector entanglement";
    let (g, p) = builtin("two_epr").expect("builtin");
    let mut details = String::new();
    let mut ok = true;
    for r in [0.05, 0.1, 0.2] {
        let fock = match evolve_vacuum(&g, r, 10) {
            Ok(s) => s,
            Err(e) => return fails(3, name, format!("evolution failed at r={r}: {e}")),
        };
        let sector = match casimir_postselect(&fock, &p, &[1, 1]) {
            Ok(s) => s,
            Err(e) => return fails(3, name, format!("post-selection failed at r={r}: {e}")),
        };
        let schmidt = match bipartition_spectrum(&sector, &[0]) {
            Ok(s) => s,
            Err(e) => return fails(3, name, format!("spectrum failed at r={r}: {e}")),
        };
        let entropy = entropy_bits(&schmidt);
        ok &= (entropy - 1.0).abs() < 1e-6;
        details.push_str(&format!("r={r}: single-spin entropy {entropy:.9} bits\n"));
    }
    details.push_str("required 1.000000 ± 1e-6 at every r");
    CriterionResult::new(3, name, ok, details)
}

/// Sector probabilities of the two-EPR state: P(j) = (2j+1) tanh⁴ʲr / cosh⁴r.
pub fn criterion_4() -> CriterionResult {
    let name = "EPR sector probabilities";
    let (g, p) = builtin("two_epr").expect("builtin");
    let r = 0.2;
    let fock = match evolve_vacuum(&g, r, 12) {
        Ok(s) => s,
        Err(e) => return fails(4, name, format!("evolution failed: {e}")),
    };
    let (t, c) = (r.tanh(), r.cosh());
    let mut details = String::new();
    let mut ok = true;
    for j2 in [0u8, 1, 2, 3] {
        let sector = match casimir_postselect(&fock, &p, &[j2, j2]) {
            Ok(s) => s,
            Err(e) => return fails(4, name, format!("post-selection failed at 2j={j2}: {e}")),
        };
        let got = sector.selection_probability();
        let want = (f64::from(j2) + 1.0) * t.powi(2 * i32::from(j2)) / c.powi(4);
        let rel = (got - want).abs() / want;
        ok &= rel < 1e-6;
        details.push_str(&format!(
            "j={}: P = {got:.9e}, closed form {want:.9e}, rel err {rel:.2e}\n",
            f64::from(j2) / 2.0
        ));
    }
    details.push_str("required relative error < 1e-6 for j in {0, 1/2, 1, 3/2}");
    CriterionResult::new(4, name, ok, details)
}

fn jy_total_coeffs(n_pairs: usize) -> Vec<BigRational> {
    spin_coeffs(
        n_pairs,
        &(0..n_pairs).map(|q| (q, 1, 1, 1)).collect::<Vec<_>>(),
    )
}

/// The mode-pair J_y bilinear between arbitrary 0-based modes.
fn jy(a: usize, b: usize) -> QuadOp<GRat> {
    schwinger_spin((a, b), SpinComponent::Y)
}

/// Complete-graph (GHZ) expectation: the stated claim is that no
/// pairing-consistent spin nullifier exists. The solver finds one — the
/// uniform J_y total, which commutes with the generator of every twin graph
/// — so this check reports the contradiction with proof instead of passing.
pub fn criterion_5() -> CriterionResult {
    let name = "GHZ empty-set claim";
    let mut details = String::new();
    let mut found_counts = Vec::new();
    for (graph_name, r_grid, cutoff) in [
        ("ghz3x2", vec![0.05, 0.1, 0.2], 16usize),
        ("ghz4x2", vec![0.05, 0.1], 14),
    ] {
        let (g, p) = builtin(graph_name).expect("builtin");
        let set = spin_nullifiers(&g, &p);
        found_counts.push(set.exact.len());
        details.push_str(&format!(
            "{graph_name}: {} exact nullifier(s), claim demanded 0\n",
            set.exact.len()
        ));
        for n in &set.exact {
            details.push_str(&format!(
                "  found: {}\n",
                spin_expression(&n.spin_coeffs, &p)
            ));
            let jy_match = n.spin_coeffs == jy_total_coeffs(p.pairs().len());
            details.push_str(&format!("  equals the uniform J_y total: {jy_match}\n"));
            let k = hamiltonian_generator(&g);
            details.push_str(&format!(
                "  commutator with the generator vanishes exactly: {}\n",
                k.commutator(&n.op).is_zero()
            ));
        }
        let ops: Vec<_> = set.exact.iter().map(|n| n.op.to_float()).collect();
        match verify_nullifiers(&ops, &g, &r_grid, cutoff) {
            Ok(tables) => {
                for rows in &tables {
                    for row in rows {
                        details.push_str(&format!(
                            "  numeric check r={}: |expectation| = {:.2e}, variance = {:.2e}\n",
                            row.r,
                            row.expectation.abs(),
                            row.variance
                        ));
                    }
                }
            }
            Err(e) => details.push_str(&format!("  numeric check failed: {e}\n")),
        }
        if set.asymptotic.is_empty() {
            details.push_str("  asymptotic set: empty\n");
        }
    }
    // The three-spin claim rests on a printed list of seven cross-pairing
    // J_y constants said to be inconsistent with the (1,4),(2,5),(3,6)
    // pairing. A rational combination of five of them is exactly the
    // pairing-consistent diagonal, refuting that reading.
    let third = grat(1, 0, 3);
    let minus_two_thirds = grat(-2, 0, 3);
    let item3 = jy(0, 5).add(&jy(0, 3).neg()).add(&jy(1, 3)).add(&jy(1, 5).neg());
    let item4 = jy(0, 4).add(&jy(0, 3).neg()).add(&jy(2, 3)).add(&jy(2, 4).neg());
    let item5 = jy(0, 4).add(&jy(0, 3).neg()).add(&jy(1, 3)).add(&jy(1, 4).neg());
    let item6 = jy(0, 5).add(&jy(0, 3).neg()).add(&jy(2, 3)).add(&jy(2, 5).neg());
    let mut item7 = QuadOp::<GRat>::zero();
    for i in 0..3 {
        for j in 3..6 {
            item7 = item7.add(&jy(i, j));
        }
    }
    let diagonal = jy(0, 3).add(&jy(1, 4)).add(&jy(2, 5));
    let combo = item3
        .add(&item4)
        .add(&item7)
        .scale(&third)
        .add(&item5.add(&item6).scale(&minus_two_thirds));
    let identity_holds = combo.add(&diagonal.neg()).is_zero();
    details.push_str(&format!(
        "three-spin cross-pairing J_y constants: (1/3)(c3 + c4 + c7) - (2/3)(c5 + c6) \
         equals J_y(1,4) + J_y(2,5) + J_y(3,6) exactly: {identity_holds}\n"
    ));
    let (g3, _) = builtin("ghz3x2").expect("builtin");
    let k3 = hamiltonian_generator(&g3);
    let all_commute = [&item3, &item4, &item5, &item6, &item7]
        .iter()
        .all(|op| k3.commutator(op).is_zero());
    details.push_str(&format!(
        "each of the five cross-pairing constants commutes with the generator: {all_commute}\n"
    ));
    details.push_str(
        "verdict: the computed sets are non-empty (one uniform J_y total each), so the \
         stated empty-set expectation fails; the pairing-consistent diagonal is itself a \
         combination of the printed cross-pairing constants",
    );
    let claim_holds = found_counts.iter().all(|&c| c == 0);
    CriterionResult::new(5, name, claim_holds, details)
}

/// The three twin-square graphs share one exact nullifier span: the
/// alternating J₀/J_z/J_x combinations plus the uniform J_y total, each
/// verified numerically with variance below 1e−8 up to r = 0.2.
pub fn criterion_6() -> CriterionResult {
    let name = "twin-square total-spin nullifiers";
    let expected = canonical_rational_span(vec![
        spin_coeffs(4, &[(0, 3, 1, 1), (1, 3, -1, 1), (2, 3, 1, 1), (3, 3, -1, 1)]),
        spin_coeffs(4, &[(0, 2, 1, 1), (1, 2, -1, 1), (2, 2, 1, 1), (3, 2, -1, 1)]),
        spin_coeffs(4, &[(0, 0, 1, 1), (1, 0, -1, 1), (2, 0, 1, 1), (3, 0, -1, 1)]),
        spin_coeffs(4, &[(0, 1, 1, 1), (1, 1, 1, 1), (2, 1, 1, 1), (3, 1, 1, 1)]),
    ]);
    let mut details = String::new();
    let mut ok = true;
    let mut spans = Vec::new();
    for graph_name in ["chain4x2", "square4x2", "ring4x2"] {
        let (g, p) = builtin(graph_name).expect("builtin");
        let found = exact_spin_nullifiers(&g, &p);
        details.push_str(&format!("{graph_name}: {} exact nullifiers\n", found.len()));
        ok &= found.len() == 4;
        let span =
            canonical_rational_span(found.iter().map(|n| n.spin_coeffs.clone()).collect());
        ok &= span == expected;
        spans.push(span);
        let ops: Vec<_> = found.iter().map(|n| n.op.to_float()).collect();
        let mut worst: f64 = 0.0;
        for (r, cutoff) in [(0.05, 8usize), (0.1, 12), (0.2, 16)] {
            match verify_nullifiers(&ops, &g, &[r], cutoff) {
                Ok(tables) => {
                    for rows in &tables {
                        for row in rows {
                            worst = worst.max(row.variance);
                        }
                    }
                }
                Err(e) => {
                    ok = false;
                    details.push_str(&format!("  numeric check failed at r={r}: {e}\n"));
                }
            }
        }
        ok &= worst < 1e-8;
        details.push_str(&format!("  worst variance over r ≤ 0.2: {worst:.2e}\n"));
    }
    let identical = spans.windows(2).all(|w| w[0] == w[1]);
    ok &= identical;
    details.push_str(&format!(
        "span identical across the three graphs: {identical}\n\
         required: 4 nullifiers each, common span = alternating J0/Jz/Jx + uniform Jy, \
         variance < 1e-8"
    ));
    CriterionResult::new(6, name, ok, details)
}

/// Heisenberg eigen-rates of every builtin match their closed forms.
pub fn criterion_7() -> CriterionResult {
    let name = "squeezing eigen-rates";
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let s2 = 2.0f64.sqrt();
    let cases: Vec<(&str, Vec<f64>)> = vec![
        ("two_epr", vec![1.0, 1.0, -1.0, -1.0]),
        ("chain3x2", vec![s2, s2, 0.0, 0.0, -s2, -s2]),
        ("ghz3x2", vec![2.0, 2.0, -1.0, -1.0, -1.0, -1.0]),
        (
            "chain4x2",
            vec![phi, phi, 1.0 / phi, 1.0 / phi, -1.0 / phi, -1.0 / phi, -phi, -phi],
        ),
        ("square4x2", vec![s2, s2, s2, s2, -s2, -s2, -s2, -s2]),
        ("ring4x2", vec![2.0, 2.0, 0.0, 0.0, 0.0, 0.0, -2.0, -2.0]),
    ];
    let mut details = String::new();
    let mut ok = true;
    for (graph_name, want) in cases {
        let (g, _) = builtin(graph_name).expect("builtin");
        let decomp = diagonalize(&g);
        let got = decomp.eigenvalues();
        let close = got.len() == want.len()
            && got.iter().zip(&want).all(|(a, b)| (a - b).abs() < 1e-9);
        ok &= close;
        details.push_str(&format!(
            "{graph_name}: rates {:?} (match {close})\n",
            got.iter().map(|v| (v * 1e6).round() / 1e6).collect::<Vec<_>>()
        ));
        if graph_name == "ring4x2" {
            let rank = decomp.rank();
            ok &= rank == 4;
            details.push_str(&format!("ring4x2 adjacency rank: {rank} (rank-deficient)\n"));
        }
    }
    details.push_str("required each eigenvalue within 1e-9 of its closed form");
    CriterionResult::new(7, name, ok, details)
}

/// Numerically evolved and post-selected qubit states match the symbolic
/// leading-order states, and those classify as printed: square and chain
/// biseparable, ring genuinely four-partite.
pub fn criterion_8() -> CriterionResult {
    let name = "post-selected qubit states";
    let mut details = String::new();
    let mut ok = true;
    let expectations: Vec<(&str, Classification)> = vec![
        (
            "square4x2",
            Classification::Biseparable {
                subset: vec![0, 2],
                complement: vec![1, 3],
            },
        ),
        ("ring4x2", Classification::GenuineMultipartite),
        (
            "chain4x2",
            Classification::Biseparable {
                subset: vec![0, 1],
                complement: vec![2, 3],
            },
        ),
    ];
    for (graph_name, want_class) in expectations {
        let (g, p) = builtin(graph_name).expect("builtin");
        let fock = match evolve_vacuum(&g, 0.05, 10) {
            Ok(s) => s,
            Err(e) => return fails(8, name, format!("evolution failed for {graph_name}: {e}")),
        };
        let sector = match casimir_postselect(&fock, &p, &[1, 1, 1, 1]) {
            Ok(s) => s,
            Err(e) => {
                return fails(8, name, format!("post-selection failed for {graph_name}: {e}"))
            }
        };
        let numeric = alternating_relabel(&sector);
        let ideal = match perturbative_qubit_state(&g) {
            Ok(s) => s.state,
            Err(e) => {
                return fails(8, name, format!("leading-order state failed for {graph_name}: {e}"))
            }
        };
        let f = match fidelity(&numeric, &ideal) {
            Ok(f) => f,
            Err(e) => return fails(8, name, format!("fidelity failed for {graph_name}: {e}")),
        };
        ok &= f >= 0.999;
        details.push_str(&format!("{graph_name}: fidelity {f:.6} (needs ≥ 0.999)\n"));
        match classify(&ideal) {
            Ok(class) => {
                let matched = class == want_class;
                ok &= matched;
                details.push_str(&format!(
                    "  leading-order classification {class:?} (match {matched})\n"
                ));
            }
            Err(e) => {
                ok = false;
                details.push_str(&format!("  classification failed: {e}\n"));
            }
        }
        if graph_name == "ring4x2" {
            // The amplitude table is compared as a ray: the mode swaps and
            // π phases of the relabeling convention fix the state only up
            // to a global phase, so the numeric state is rotated onto the
            // symbolic representative before the entrywise check.
            let mut overlap = Complex64::zero();
            for (m2, amp) in ideal.amplitudes() {
                overlap += amp.conj() * numeric.amplitude(m2);
            }
            let phase = overlap / overlap.norm();
            let norm = (2.0 * 3.0f64.sqrt()).recip();
            let mut worst: f64 = 0.0;
            for (m2, amp) in ideal.amplitudes() {
                let aligned = numeric.amplitude(m2) * phase.conj();
                worst = worst.max((aligned - amp).norm());
                let magnitude_ok = (amp.re.abs() - norm).abs() < 1e-12
                    || (amp.re.abs() - 2.0 * norm).abs() < 1e-12;
                ok &= magnitude_ok && amp.im.abs() < 1e-15;
            }
            ok &= worst < 1e-3;
            details.push_str(&format!(
                "  ring amplitudes within {worst:.2e} of (1,1,1,1,-2,-2)/(2√3) after \
                 global-phase alignment (needs < 1e-3); measured phase {:.3}{:+.3}i\n",
                phase.re, phase.im
            ));
        }
    }
    CriterionResult::new(8, name, ok, details)
}

/// The ring qubit state is the zero-total-spin partner of the two-up Dicke
/// state: orthogonal to it, maximally mixed per qubit, and two sequential
/// single-qubit projections leave an entangled pair with probability 2/3
/// when the second projection is averaged over outcomes and partner choice.
pub fn criterion_9() -> CriterionResult {
    let name = "Dicke orthogonality and collapse";
    let (g, _) = builtin("ring4x2").expect("builtin");
    let psi = match perturbative_qubit_state(&g) {
        Ok(s) => s.state,
        Err(e) => return fails(9, name, format!("leading-order state failed: {e}")),
    };
    let mut details = String::new();
    let mut ok = true;
    let d = 6f64.sqrt().recip();
    let mut dicke = BTreeMap::new();
    for (key, _) in psi.amplitudes() {
        dicke.insert(key.clone(), Complex64::new(d, 0.0));
    }
    let dicke = SpinSectorState::from_parts(
        psi.n_modes(),
        psi.pairing().clone(),
        psi.j2_list().to_vec(),
        dicke,
        1.0,
    );
    match fidelity(&psi, &dicke) {
        Ok(f) => {
            ok &= f < 1e-6;
            details.push_str(&format!("fidelity to the two-up Dicke state: {f:.2e} (needs < 1e-6)\n"));
        }
        Err(e) => return fails(9, name, format!("fidelity failed: {e}")),
    }
    for spin in 0..4 {
        let schmidt = match bipartition_spectrum(&psi, &[spin]) {
            Ok(s) => s,
            Err(e) => return fails(9, name, format!("spectrum failed: {e}")),
        };
        let purity: f64 = schmidt.iter().map(|l| l.powi(4)).sum();
        ok &= (purity - 0.5).abs() < 1e-6;
        details.push_str(&format!("spin {} purity {purity:.9}\n", spin + 1));
    }
    let (residual, p1) = match projective_collapse(&psi, 0, 1) {
        Ok(r) => r,
        Err(e) => return fails(9, name, format!("collapse failed: {e}")),
    };
    details.push_str(&format!("first projection (spin 1, m = +1/2): probability {p1:.6}\n"));
    ok &= (p1 - 0.5).abs() < 1e-9;
    let mut total = 0.0;
    for partner in 0..3 {
        let mut entangled = 0.0;
        for outcome in [1i16, -1] {
            let (pair, p) = match projective_collapse(&residual, partner, outcome) {
                Ok(r) => r,
                Err(e) => return fails(9, name, format!("second collapse failed: {e}")),
            };
            if p == 0.0 {
                continue;
            }
            let schmidt = match bipartition_spectrum(&pair, &[0]) {
                Ok(s) => s,
                Err(e) => return fails(9, name, format!("pair spectrum failed: {e}")),
            };
            if schmidt.iter().filter(|&&l| l > 1e-8).count() >= 2 {
                entangled += p;
            }
        }
        details.push_str(&format!(
            "second projection on partner {}: entangled-pair probability {entangled:.6}\n",
            partner + 2
        ));
        total += entangled;
    }
    let average = total / 3.0;
    ok &= (average - 2.0 / 3.0).abs() < 1e-6;
    details.push_str(&format!(
        "averaged over outcomes and partner choice: {average:.9} (needs 2/3 ± 1e-6; \
         the per-partner values 5/6, 1/3, 5/6 are the outcome-resolved table)"
    ));
    CriterionResult::new(9, name, ok, details)
}

/// Linear congruential generator for reproducible random graphs.
struct Lcg(u64);

impl Lcg {
    fn next_u64(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0
    }
}

fn random_graph(rng: &mut Lcg) -> HGraph {
    let n = 2 + (rng.next_u64() % 5) as usize; // 2..=6 modes
    loop {
        let mut edges = Vec::new();
        for j in 0..n {
            for k in (j + 1)..n {
                if rng.next_u64() % 2 == 0 {
                    let w = match rng.next_u64() % 4 {
                        0 => -2,
                        1 => -1,
                        2 => 1,
                        _ => 2,
                    };
                    edges.push((j, k, w));
                }
            }
        }
        if !edges.is_empty() {
            return HGraph::from_edges(n, &edges).expect("generated edges are valid");
        }
    }
}

/// Applies `op` to one basis column and keeps rows with total occupation at
/// most `read_cutoff`.
fn column_image(
    op: &QuadOpF,
    occ: &[u8],
    n_modes: usize,
    work_cutoff: usize,
    read_cutoff: usize,
) -> BTreeMap<Vec<u8>, Complex64> {
    let column = FockVector::from_amplitudes(
        n_modes,
        work_cutoff,
        &[(occ.to_vec(), Complex64::new(1.0, 0.0))],
    );
    apply_op(op, &column)
        .into_iter()
        .filter(|(row, _)| row.iter().map(|&x| x as usize).sum::<usize>() <= read_cutoff)
        .collect()
}

/// Compares the symbolic commutator against float matrix numerics on one
/// graph: every quadratic basis operator's commutator with the generator,
/// read as a matrix block at the given cutoff, plus the kernel dimension
/// extracted from those numeric blocks. Returns a failure description or
/// the verified operator count.
pub fn oracle_check_graph(g: &HGraph, cutoff: usize) -> Result<usize, String> {
    let n = g.n_modes();
    let k = hamiltonian_generator(g);
    let k_f = k.to_float();
    let dim = quadratic_dim(n);
    let basis_ops: Vec<QuadOp<GRat>> = (0..dim)
        .map(|b| {
            let mut coords = vec![BigRational::zero(); dim];
            coords[b] = BigRational::one();
            coords_to_op(&coords, n)
        })
        .collect();
    let columns = fock_basis(n, cutoff);
    let work = cutoff + 2;
    // Gram matrix of the numeric commutator images, accumulated column by
    // column, gives the numeric kernel dimension.
    let mut gram = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
    for occ in &columns {
        let kv = column_image(&k_f, occ, n, work, work);
        let mut images: Vec<BTreeMap<Vec<u8>, Complex64>> = Vec::with_capacity(dim);
        for op in &basis_ops {
            let op_f = op.to_float();
            // Numeric route: K(Xv) − X(Kv) with floats only.
            let xv = column_image(&op_f, occ, n, work, work);
            let mut numeric: BTreeMap<Vec<u8>, Complex64> = BTreeMap::new();
            for (mid, amp) in &xv {
                for (row, c) in column_image(&k_f, mid, n, work, cutoff) {
                    *numeric.entry(row).or_insert_with(Complex64::zero) += amp * c;
                }
            }
            for (mid, amp) in &kv {
                for (row, c) in column_image(&op_f, mid, n, work, cutoff) {
                    *numeric.entry(row).or_insert_with(Complex64::zero) -= amp * c;
                }
            }
            numeric.retain(|_, v| v.norm() > 0.0);
            // Symbolic route: expand [K, X] exactly, then apply once.
            let symbolic = column_image(&k.commutator(op).to_float(), occ, n, work, cutoff);
            let mut keys: Vec<&Vec<u8>> = numeric.keys().chain(symbolic.keys()).collect();
            keys.sort();
            keys.dedup();
            for key in keys {
                let a = numeric.get(key).copied().unwrap_or_else(Complex64::zero);
                let b = symbolic.get(key).copied().unwrap_or_else(Complex64::zero);
                if (a - b).norm() > 1e-12 {
                    return Err(format!(
                        "commutator mismatch on column {occ:?}, row {key:?}: numeric {a}, symbolic {b}"
                    ));
                }
            }
            images.push(numeric);
        }
        for b in 0..dim {
            if images[b].is_empty() {
                continue;
            }
            for c in b..dim {
                let mut dot = Complex64::zero();
                for (row, amp) in &images[b] {
                    if let Some(other) = images[c].get(row) {
                        dot += amp.conj() * other;
                    }
                }
                gram[(b, c)] += dot;
                if b != c {
                    gram[(c, b)] += dot.conj();
                }
            }
        }
    }
    let eigen = gram.symmetric_eigen();
    let top = eigen
        .eigenvalues
        .iter()
        .cloned()
        .fold(1.0f64, f64::max);
    let numeric_kernel = eigen
        .eigenvalues
        .iter()
        .filter(|&&l| l < 1e-8 * top)
        .count();
    // Exact kernel excludes the identity row; the numeric map sees it.
    let exact_kernel = ad_kernel(g).dim() + 1;
    if numeric_kernel != exact_kernel {
        return Err(format!(
            "kernel dimension mismatch: numeric {numeric_kernel}, exact {exact_kernel}"
        ));
    }
    Ok(dim)
}

/// Symbolic algebra versus dense float numerics on every builtin and on a
/// hundred seeded random graphs.
pub fn criterion_10() -> CriterionResult {
    let name = "symbolic-numeric oracle equivalence";
    let mut details = String::new();
    for b in Builtin::ALL {
        let (g, _) = builtin(b.name()).expect("builtin");
        match oracle_check_graph(&g, 4) {
            Ok(dim) => details.push_str(&format!("{}: {dim} operators agree\n", b.name())),
            Err(e) => {
                details.push_str(&format!("{}: {e}\n", b.name()));
                return fails(10, name, details);
            }
        }
    }
    let mut rng = Lcg(0x5eed);
    for idx in 0..100 {
        let g = random_graph(&mut rng);
        if let Err(e) = oracle_check_graph(&g, 4) {
            details.push_str(&format!("random graph {idx}: {e}\n"));
            return fails(10, name, details);
        }
    }
    details.push_str("100 random graphs (2..=6 modes) agree: commutator entries to 1e-12, kernel dimensions exactly");
    CriterionResult::new(10, name, true, details)
}

/// One printed three-chain constant with everything the implementation can
/// check about it.
#[derive(Debug, Clone)]
pub struct ReferenceConstant {
    pub label: &'static str,
    pub op: QuadOp<GRat>,
    /// Commutes exactly with the generator.
    pub is_constant: bool,
    /// Annihilates the vacuum, hence nullifies the squeezed state if constant.
    pub nullifies_vacuum: bool,
    /// Lies in the span of the computed pairing-consistent exact nullifiers.
    pub in_computed_span: bool,
}

fn j_comp(comp: SpinComponent, a: usize, b: usize) -> QuadOp<GRat> {
    schwinger_spin((a, b), comp)
}

fn unit_op() -> QuadOp<GRat> {
    QuadOp::from_term(Monomial::Unit, grat(1, 0, 1))
}

/// The ten three-chain spin constants as printed, 1-based mode labels in
/// the `label` field, transcribed into exact operators.
pub fn chain3_reference_constants() -> Vec<ReferenceConstant> {
    use SpinComponent::{X, Y, Z, Zero};
    let raw: Vec<(&'static str, QuadOp<GRat>)> = vec![
        (
            "J0(1,4) + J0(3,6) - J0(2,5) + 1",
            j_comp(Zero, 0, 3)
                .add(&j_comp(Zero, 2, 5))
                .add(&j_comp(Zero, 1, 4).neg())
                .add(&unit_op()),
        ),
        (
            "Jz(1,4) + Jz(3,6) - Jz(2,5)",
            j_comp(Z, 0, 3).add(&j_comp(Z, 2, 5)).add(&j_comp(Z, 1, 4).neg()),
        ),
        (
            "Jx(1,4) + Jx(3,6) - Jx(2,5)",
            j_comp(X, 0, 3).add(&j_comp(X, 2, 5)).add(&j_comp(X, 1, 4).neg()),
        ),
        (
            "Jy(1,4) + Jy(3,6) + Jy(2,5)",
            j_comp(Y, 0, 3).add(&j_comp(Y, 2, 5)).add(&j_comp(Y, 1, 4)),
        ),
        (
            "Jx(1,6) + Jx(3,4) - Jx(2,5)",
            j_comp(X, 0, 5).add(&j_comp(X, 2, 3)).add(&j_comp(X, 1, 4).neg()),
        ),
        (
            "Jy(1,6) + Jy(3,4) + Jy(2,5)",
            j_comp(Y, 0, 5).add(&j_comp(Y, 2, 3)).add(&j_comp(Y, 1, 4)),
        ),
        (
            "Jx(1,5) + Jx(3,5) - Jx(2,4) - Jx(2,6)",
            j_comp(X, 0, 4)
                .add(&j_comp(X, 2, 4))
                .add(&j_comp(X, 1, 3).neg())
                .add(&j_comp(X, 1, 5).neg()),
        ),
        (
            "Jy(1,5) + Jy(3,5) + Jy(2,4) + Jy(2,6)",
            j_comp(Y, 0, 4)
                .add(&j_comp(Y, 2, 4))
                .add(&j_comp(Y, 1, 3))
                .add(&j_comp(Y, 1, 5)),
        ),
        (
            "J0(1,4) + J0(3,6) - Jx(1,3) - Jx(4,6) + 1",
            j_comp(Zero, 0, 3)
                .add(&j_comp(Zero, 2, 5))
                .add(&j_comp(X, 0, 2).neg())
                .add(&j_comp(X, 3, 5).neg())
                .add(&unit_op()),
        ),
        (
            "Jz(1,4) + Jz(3,6) - Jx(1,3) + Jx(4,6)",
            j_comp(Z, 0, 3)
                .add(&j_comp(Z, 2, 5))
                .add(&j_comp(X, 0, 2).neg())
                .add(&j_comp(X, 3, 5)),
        ),
    ];
    let (g, p) = builtin("chain3x2").expect("builtin");
    let k = hamiltonian_generator(&g);
    let computed = exact_spin_nullifiers(&g, &p);
    let span_rows: Vec<Vec<GRat>> = computed
        .iter()
        .map(|n| real_row(&hermitian_coords(&n.op, 6)))
        .collect();
    let span_rank = linalg::rank(&span_rows);
    raw.into_iter()
        .map(|(label, op)| {
            let is_constant = k.commutator(&op).is_zero();
            let nullifies_vacuum = op.nullifies_vacuum();
            let mut rows = span_rows.clone();
            rows.push(real_row(&hermitian_coords(&op, 6)));
            let in_computed_span = linalg::rank(&rows) == span_rank;
            ReferenceConstant {
                label,
                op,
                is_constant,
                nullifies_vacuum,
                in_computed_span,
            }
        })
        .collect()
}

/// The printed-versus-computed three-chain comparison, as a report section
/// plus the verification verdict for the computed set.
pub fn three_chain_comparison() -> (Value, bool) {
    let (g, p) = builtin("chain3x2").expect("builtin");
    let set = spin_nullifiers(&g, &p);
    let ops: Vec<_> = set.exact.iter().map(|n| n.op.to_float()).collect();
    let r_grid = [0.05, 0.1, 0.2];
    let verification = verify_nullifiers(&ops, &g, &r_grid, 12);
    let mut computed_ok = true;
    let mut computed_entries = Vec::new();
    match &verification {
        Ok(tables) => {
            for (n, rows) in set.exact.iter().zip(tables) {
                let worst = rows.iter().fold(0.0f64, |m, row| m.max(row.variance));
                computed_ok &= worst < 1e-8;
                computed_entries.push(json!({
                    "expression": spin_expression(&n.spin_coeffs, &p),
                    "verification": verify_rows_value(rows),
                    "worst_variance": worst,
                }));
            }
        }
        Err(e) => {
            computed_ok = false;
            computed_entries.push(json!({ "error": e.to_string() }));
        }
    }
    let mut reference_entries = Vec::new();
    for c in chain3_reference_constants() {
        let mut entry = Map::new();
        entry.insert("label".into(), c.label.into());
        entry.insert("is_constant".into(), c.is_constant.into());
        entry.insert("nullifies_vacuum".into(), c.nullifies_vacuum.into());
        entry.insert("in_computed_span".into(), c.in_computed_span.into());
        if c.is_constant && c.nullifies_vacuum {
            if let Ok(rows) = verify_nullifiers(&[c.op.to_float()], &g, &r_grid, 12) {
                entry.insert("verification".into(), verify_rows_value(&rows[0]));
            }
        }
        reference_entries.push(Value::Object(entry));
    }
    let doc = json!({
        "computed": computed_entries,
        "notes": [
            "printed entries carrying a `+ 1` offset commute with the generator but do not annihilate the vacuum; the computed set contains the same combination without the offset",
            "printed entries mixing several pairings are checked as constants of the motion but lie outside the pairing-consistent span",
            "agreement with the printed list is reported entry by entry, not assumed",
        ],
        "reference": reference_entries,
    });
    (doc, computed_ok)
}

fn verify_rows_value(rows: &[VerifyRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| {
                json!({
                    "expectation": row.expectation,
                    "norm_deficit": row.norm_deficit,
                    "r": row.r,
                    "variance": row.variance,
                })
            })
            .collect(),
    )
}

/// The three-chain comparison must exist and every computed nullifier must
/// verify numerically; agreement with the printed list is informational.
pub fn criterion_11() -> CriterionResult {
    let name = "three-chain discrepancy report";
    let (doc, computed_ok) = three_chain_comparison();
    let reference = doc
        .get("reference")
        .and_then(Value::as_array)
        .map(Vec::len)
        .unwrap_or(0);
    let mut details = format!(
        "comparison lists {reference} printed constants against the computed set; \
         computed nullifiers all verify numerically: {computed_ok}\n"
    );
    for c in chain3_reference_constants() {
        details.push_str(&format!(
            "  {}: constant {}, vacuum {}, in computed span {}\n",
            c.label, c.is_constant, c.nullifies_vacuum, c.in_computed_span
        ));
    }
    CriterionResult::new(11, name, reference == 10 && computed_ok, details)
}

/// Full reproduction document: the criteria table plus the three-chain
/// comparison. The boolean is the overall verdict.
pub fn reproduce_report() -> (Value, bool) {
    let results = run_all();
    let all_passed = results.iter().all(|r| r.passed);
    let criteria: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "details": r.details,
                "id": r.id,
                "name": r.name,
                "passed": r.passed,
            })
        })
        .collect();
    let (three_chain, _) = three_chain_comparison();
    let doc = json!({
        "all_passed": all_passed,
        "criteria": criteria,
        "kind": "reproduce",
        "three_chain_comparison": three_chain,
    });
    (doc, all_passed)
}
