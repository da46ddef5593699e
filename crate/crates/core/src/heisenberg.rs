//! Heisenberg-picture solution of a squeezing graph.
//!
//! The generator moves the quadrature vectors linearly: `dQ/dr = G Q`,
//! `dP/dr = −G P`, with `G` the symmetric weight matrix. Diagonalizing `G`
//! with orthonormal rows `m_i` and eigenvalues `λ_i` gives collective
//! quadratures `Q'_i = m_i·Q`, `P'_i = m_i·P` that evolve as pure
//! exponentials: `Q'_i → e^{λ_i r} Q'_i` and `P'_i → e^{−λ_i r} P'_i`.
//! A positive eigenvalue squeezes `P'`, a negative one squeezes `Q'`, and a
//! zero eigenvalue freezes both, making them constants of the motion.
//!
//! Eigenvalues of degenerate subspaces come back in an arbitrary basis from
//! the eigensolver, so the basis is re-derived deterministically by
//! Gram–Schmidt of coordinate projections; any orthonormal choice spans the
//! same space, this one is also platform-stable.

use nalgebra::DMatrix;

use crate::hgraph::HGraph;
use crate::qops::{LinearForm, LinearFormF};

/// Eigenvalues closer than this are treated as one degenerate group.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Eigenvalues below this magnitude are snapped to exact zero.
pub const ZERO_TOL: f64 = 1e-10;

/// Quadrature axis of a collective mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Q,
    P,
}

impl Axis {
    pub fn label(&self) -> &'static str {
        match self {
            Axis::Q => "Q'",
            Axis::P => "P'",
        }
    }
}

/// Dynamical role of one eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EigenClass {
    /// `rate > 0`; the named axis contracts as `e^{−rate·r}` while the other
    /// axis expands at the same rate.
    Squeezing { rate: f64, squeezed: Axis },
    /// Zero eigenvalue: both collective quadratures are constants.
    Constant,
}

/// Orthonormal eigendecomposition of a graph's weight matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomp {
    eigenvalues: Vec<f64>,
    /// Row `i` is the orthonormal eigenvector of `eigenvalues[i]`.
    vectors: Vec<Vec<f64>>,
}

impl EigenDecomp {
    pub fn n_modes(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Descending; exact zeros for null directions.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.iter().filter(|&&l| l != 0.0).count()
    }

    pub fn classify(&self, index: usize) -> EigenClass {
        let l = self.eigenvalues[index];
        if l == 0.0 {
            EigenClass::Constant
        } else if l > 0.0 {
            EigenClass::Squeezing { rate: l, squeezed: Axis::P }
        } else {
            EigenClass::Squeezing { rate: -l, squeezed: Axis::Q }
        }
    }
}

/// Diagonalizes the weight matrix. Eigenvalues are sorted descending;
/// degenerate groups get a deterministic orthonormal basis (Gram–Schmidt of
/// coordinate-vector projections in ascending mode order, first significant
/// component positive).
pub fn diagonalize(graph: &HGraph) -> EigenDecomp {
    let n = graph.n_modes();
    let w = graph.weight_matrix_f64();
    let m = DMatrix::from_fn(n, n, |r, c| w[r][c]);
    let eig = m.symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("graph eigenvalues are finite")
    });
    let mut eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    for l in &mut eigenvalues {
        if l.abs() <= ZERO_TOL {
            *l = 0.0;
        }
    }

    let mut vectors = vec![Vec::new(); n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (eigenvalues[end - 1] - eigenvalues[end]).abs() <= DEGENERACY_TOL {
            end += 1;
        }
        let group: Vec<Vec<f64>> = order[start..end]
            .iter()
            .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
            .collect();
        let basis = deterministic_basis(&group, n);
        for (offset, v) in basis.into_iter().enumerate() {
            vectors[start + offset] = v;
        }
        start = end;
    }

    EigenDecomp { eigenvalues, vectors }
}

/// Orthonormal basis of `span(group)` built from coordinate projections.
fn deterministic_basis(group: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let d = group.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    for j in 0..n {
        if basis.len() == d {
            break;
        }
        // Project e_j onto the subspace, then against the chosen basis.
        let mut cand = vec![0.0; n];
        for g in group {
            let overlap = g[j];
            for (c, gi) in cand.iter_mut().zip(g) {
                *c += overlap * gi;
            }
        }
        for b in &basis {
            let overlap = dot(&cand, b);
            for (c, bi) in cand.iter_mut().zip(b) {
                *c -= overlap * bi;
            }
        }
        let norm = dot(&cand, &cand).sqrt();
        if norm > 1e-8 {
            for c in &mut cand {
                *c /= norm;
            }
            sign_fix(&mut cand);
            basis.push(cand);
        }
    }
    assert_eq!(basis.len(), d, "coordinate projections span the subspace");
    basis
}

fn sign_fix(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-9) {
        if *first < 0.0 {
            for x in v {
                *x = -*x;
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One collective quadrature with its long-time behavior.
#[derive(Debug, Clone)]
pub struct CvNullifier {
    pub form: LinearFormF,
    /// Decay rate of the form's standard deviation exponent; zero for
    /// constants.
    pub rate: f64,
    pub kind: CvKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvKind {
    Squeezed,
    Constant,
}

/// First-order nullifiers: for each positive eigenvalue the collective `P'`
/// (squeezed at rate `λ`), for each negative one the collective `Q'`
/// (squeezed at rate `|λ|`), and for each zero eigenvalue both collective
/// quadratures as constants of the motion. Squeezed variances follow
/// `Var = e^{−2·rate·r}/2`; constants stay at the vacuum value `1/2`.
pub fn cv_nullifiers(decomp: &EigenDecomp) -> Vec<CvNullifier> {
    let mut out = Vec::new();
    for (i, &l) in decomp.eigenvalues().iter().enumerate() {
        let row = decomp.vectors()[i].clone();
        match decomp.classify(i) {
            EigenClass::Squeezing { rate, squeezed: Axis::P } => out.push(CvNullifier {
                form: LinearForm::p_form(row),
                rate,
                kind: CvKind::Squeezed,
            }),
            EigenClass::Squeezing { rate, squeezed: Axis::Q } => out.push(CvNullifier {
                form: LinearForm::q_form(row),
                rate,
                kind: CvKind::Squeezed,
            }),
            EigenClass::Constant => {
                debug_assert_eq!(l, 0.0);
                out.push(CvNullifier {
                    form: LinearForm::q_form(row.clone()),
                    rate: 0.0,
                    kind: CvKind::Constant,
                });
                out.push(CvNullifier {
                    form: LinearForm::p_form(row),
                    rate: 0.0,
                    kind: CvKind::Constant,
                });
            }
        }
    }
    out
}

/// Heisenberg evolution of a linear form for parameter `r`: eigencomponents
/// of the `Q` part scale by `e^{λ r}`, of the `P` part by `e^{−λ r}`.
pub fn evolve_form(form: &LinearFormF, r: f64, decomp: &EigenDecomp) -> LinearFormF {
    let n = decomp.n_modes();
    assert_eq!(form.n_modes(), n, "form and decomposition mode counts differ");
    let mut q = vec![0.0; n];
    let mut p = vec![0.0; n];
    for (i, &l) in decomp.eigenvalues().iter().enumerate() {
        let m = &decomp.vectors()[i];
        let cq = dot(&form.q, m) * (l * r).exp();
        let cp = dot(&form.p, m) * (-l * r).exp();
        for j in 0..n {
            q[j] += cq * m[j];
            p[j] += cp * m[j];
        }
    }
    LinearForm { q, p }
}
