//! Quadratic bosonic operators in a canonical normally-ordered basis.
//!
//! Every operator handled here is a finite sum over the monomial basis
//!
//! * `Create2(i, j)` = `a_i† a_j†` with `i <= j`,
//! * `Mixed(i, j)`   = `a_i† a_j` (any `i`, `j`),
//! * `Annih2(i, j)`  = `a_i a_j` with `i <= j`,
//! * `Unit`,
//!
//! with coefficients either exact Gaussian rationals ([`QuadOp`]) or complex
//! floats ([`QuadOpF`]). The float flavor exists for quantities built from
//! eigenvectors whose entries are irrational; exact-kernel computations only
//! accept the exact flavor, which the type parameter enforces at compile
//! time.
//!
//! Commutators are computed by expanding both operator products into ladder
//! strings and normally ordering with `[a_i, a_j†] = δ_ij`; the quartic
//! parts of the two products cancel identically, so the result is again
//! quadratic with no approximation.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::{BigRational, Zero};
use thiserror::Error;

use crate::hgraph::HGraph;
use crate::scalar::{Coeff, GRat};

#[derive(Debug, Error)]
pub enum QopsError {
    #[error("monomial of degree {0} cannot be represented; the basis is quadratic")]
    DegreeTooHigh(usize),
    #[error("monomial of odd degree cannot be represented in the quadratic basis")]
    OddDegree,
}

pub type QopsResult<T> = Result<T, QopsError>;

/// Single ladder operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Ladder {
    Create(usize),
    Annih(usize),
}

/// Canonical quadratic monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Monomial {
    /// `a_i† a_j†`, `i <= j`.
    Create2(usize, usize),
    /// `a_i† a_j`.
    Mixed(usize, usize),
    /// `a_i a_j`, `i <= j`.
    Annih2(usize, usize),
    Unit,
}

impl Monomial {
    pub fn create2(i: usize, j: usize) -> Self {
        Monomial::Create2(i.min(j), i.max(j))
    }

    pub fn annih2(i: usize, j: usize) -> Self {
        Monomial::Annih2(i.min(j), i.max(j))
    }

    fn factors(&self) -> Vec<Ladder> {
        match *self {
            Monomial::Create2(i, j) => vec![Ladder::Create(i), Ladder::Create(j)],
            Monomial::Mixed(i, j) => vec![Ladder::Create(i), Ladder::Annih(j)],
            Monomial::Annih2(i, j) => vec![Ladder::Annih(i), Ladder::Annih(j)],
            Monomial::Unit => vec![],
        }
    }

    /// Largest mode index mentioned, if any.
    pub fn max_mode(&self) -> Option<usize> {
        match *self {
            Monomial::Create2(i, j) | Monomial::Mixed(i, j) | Monomial::Annih2(i, j) => {
                Some(i.max(j))
            }
            Monomial::Unit => None,
        }
    }
}

/// Quadratic operator over coefficient type `C`. `QuadOp` (the default) is
/// exact; [`QuadOpF`] carries floating coefficients and is understood to be
/// approximate.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadOp<C: Coeff = GRat> {
    terms: BTreeMap<Monomial, C>,
}

/// Floating-coefficient quadratic operator.
pub type QuadOpF = QuadOp<Complex64>;

impl<C: Coeff> Default for QuadOp<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> QuadOp<C> {
    pub fn zero() -> Self {
        QuadOp { terms: BTreeMap::new() }
    }

    pub fn unit() -> Self {
        Self::from_term(Monomial::Unit, Coeff::from_int(1))
    }

    pub fn from_term(key: Monomial, coeff: C) -> Self {
        let mut op = Self::zero();
        op.add_term(key, coeff);
        op
    }

    /// Adds `coeff * key`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, key: Monomial, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(C::zero);
        *entry = entry.clone() + coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, key: &Monomial) -> C {
        self.terms.get(key).cloned().unwrap_or_else(C::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(*k, -c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &C) -> Self {
        let mut out = Self::zero();
        for (k, c) in self.terms() {
            out.add_term(*k, c.clone() * factor.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-C::from_int(1)))
    }

    /// Hermitian adjoint: conjugate coefficients, swap creation and
    /// annihilation pairs, transpose mixed terms.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in self.terms() {
            let key = match *k {
                Monomial::Create2(i, j) => Monomial::Annih2(i, j),
                Monomial::Annih2(i, j) => Monomial::Create2(i, j),
                Monomial::Mixed(i, j) => Monomial::Mixed(j, i),
                Monomial::Unit => Monomial::Unit,
            };
            out.add_term(key, c.conj());
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.dagger()
    }

    /// `(self + self†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        self.add(&self.dagger()).scale(&C::from_ratio(1, 2))
    }

    /// True iff the operator annihilates the vacuum: no `Unit` component and
    /// no `Create2` component. `Mixed` and `Annih2` terms end in an
    /// annihilator, so they kill `|0>` regardless of coefficients.
    pub fn nullifies_vacuum(&self) -> bool {
        self.terms.keys().all(|k| !matches!(k, Monomial::Unit | Monomial::Create2(..)))
    }

    /// Largest mode index mentioned plus one; zero for scalar operators.
    pub fn mode_span(&self) -> usize {
        self.terms
            .keys()
            .filter_map(Monomial::max_mode)
            .map(|m| m + 1)
            .max()
            .unwrap_or(0)
    }

    /// `[self, other]`, exact in the coefficient ring. The quartic parts of
    /// the two products cancel term by term, so this is total on quadratic
    /// inputs.
    pub fn commutator(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<NormalString, C> = BTreeMap::new();
        for (ka, ca) in self.terms() {
            for (kb, cb) in other.terms() {
                let c = ca.clone() * cb.clone();
                let mut fwd = ka.factors();
                fwd.extend(kb.factors());
                accumulate_normal_order(&mut acc, c.clone(), fwd);
                let mut rev = kb.factors();
                rev.extend(ka.factors());
                accumulate_normal_order(&mut acc, -c, rev);
            }
        }
        let mut out = Self::zero();
        for (s, c) in acc {
            if c.is_zero() {
                continue;
            }
            let degree = s.cr.len() + s.an.len();
            let key = match degree {
                0 => Monomial::Unit,
                2 => s.monomial(),
                _ => unreachable!("commutator of quadratics left a degree-{degree} term"),
            };
            out.add_term(key, c);
        }
        out
    }
}

impl QuadOp<GRat> {
    /// Exact operator converted to the floating flavor.
    pub fn to_float(&self) -> QuadOpF {
        let mut out = QuadOpF::zero();
        for (k, c) in self.terms() {
            out.add_term(*k, c.to_c64());
        }
        out
    }
}

/// Normally-ordered ladder string of arbitrary degree (internal to products).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct NormalString {
    cr: Vec<usize>,
    an: Vec<usize>,
}

impl NormalString {
    fn monomial(&self) -> Monomial {
        match (self.cr.as_slice(), self.an.as_slice()) {
            ([i, j], []) => Monomial::Create2(*i, *j),
            ([i], [j]) => Monomial::Mixed(*i, *j),
            ([], [i, j]) => Monomial::Annih2(*i, *j),
            _ => unreachable!("degree mismatch"),
        }
    }
}

/// Rewrites `coeff * factors` into normal order, accumulating into `acc`.
/// Uses `a_i a_j† = a_j† a_i + δ_ij` until no annihilator precedes a
/// creator; within each block the operators commute and are sorted.
fn accumulate_normal_order<C: Coeff>(
    acc: &mut BTreeMap<NormalString, C>,
    coeff: C,
    factors: Vec<Ladder>,
) {
    let mut work = vec![(coeff, factors)];
    while let Some((c, fs)) = work.pop() {
        let swap_at = fs
            .windows(2)
            .position(|w| matches!((w[0], w[1]), (Ladder::Annih(_), Ladder::Create(_))));
        match swap_at {
            None => {
                let mut cr: Vec<usize> = Vec::new();
                let mut an: Vec<usize> = Vec::new();
                for f in fs {
                    match f {
                        Ladder::Create(m) => cr.push(m),
                        Ladder::Annih(m) => an.push(m),
                    }
                }
                cr.sort_unstable();
                an.sort_unstable();
                let entry = acc.entry(NormalString { cr, an }).or_insert_with(C::zero);
                *entry = entry.clone() + c;
            }
            Some(idx) => {
                let (Ladder::Annih(i), Ladder::Create(j)) = (fs[idx], fs[idx + 1]) else {
                    unreachable!()
                };
                let mut swapped = fs.clone();
                swapped.swap(idx, idx + 1);
                work.push((c.clone(), swapped));
                if i == j {
                    let mut contracted = fs;
                    contracted.drain(idx..idx + 2);
                    work.push((c, contracted));
                }
            }
        }
    }
}

/// Formal sum of ladder-operator products, the raw input to
/// [`normal_order`].
#[derive(Debug, Clone, Default)]
pub struct RawOp {
    terms: Vec<(GRat, Vec<Ladder>)>,
}

impl RawOp {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(coeff: GRat, factors: Vec<Ladder>) -> Self {
        let mut op = Self::new();
        op.push(coeff, factors);
        op
    }

    pub fn push(&mut self, coeff: GRat, factors: Vec<Ladder>) {
        self.terms.push((coeff, factors));
    }
}

/// Rewrites a raw formal sum into the canonical normally-ordered basis.
/// Ladder strings longer than two cannot stay quadratic and are rejected;
/// so are single ladder operators, which have no quadratic representation.
pub fn normal_order(raw: &RawOp) -> QopsResult<QuadOp> {
    for (_, factors) in &raw.terms {
        match factors.len() {
            0 | 2 => {}
            1 => return Err(QopsError::OddDegree),
            d => return Err(QopsError::DegreeTooHigh(d)),
        }
    }
    let mut acc: BTreeMap<NormalString, GRat> = BTreeMap::new();
    for (coeff, factors) in &raw.terms {
        accumulate_normal_order(&mut acc, coeff.clone(), factors.clone());
    }
    let mut out = QuadOp::zero();
    for (s, c) in acc {
        let key = match s.cr.len() + s.an.len() {
            0 => Monomial::Unit,
            2 => s.monomial(),
            _ => unreachable!("two-factor strings stay quadratic"),
        };
        out.add_term(key, c);
    }
    Ok(out)
}

/// Evolution generator of a squeezing graph:
/// `K = Σ_{j<k} G_jk (a_j† a_k† − a_j a_k)`, each unordered edge counted
/// once. The squeezed state is `exp(r K)|0>` with `r = κ t`.
pub fn hamiltonian_generator(graph: &HGraph) -> QuadOp {
    let mut op = QuadOp::zero();
    for (j, k, w) in graph.edges() {
        op.add_term(Monomial::create2(j, k), GRat::from_int(w));
        op.add_term(Monomial::annih2(j, k), GRat::from_int(-w));
    }
    op
}

/// Spin component labels for [`schwinger_spin`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SpinComponent {
    X,
    Y,
    Z,
    /// `J_0 = (N_a + N_b)/2`, half the pair photon number.
    Zero,
}

impl SpinComponent {
    pub const ALL: [SpinComponent; 4] = [
        SpinComponent::X,
        SpinComponent::Y,
        SpinComponent::Z,
        SpinComponent::Zero,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            SpinComponent::X => "x",
            SpinComponent::Y => "y",
            SpinComponent::Z => "z",
            SpinComponent::Zero => "0",
        }
    }
}

/// Effective spin carried by the mode pair `(a, b)`:
///
/// * `J_x = (a† b + a b†)/2`
/// * `J_y = (a† b − a b†)/2i`
/// * `J_z = (N_a − N_b)/2`
/// * `J_0 = (N_a + N_b)/2`
///
/// The pair order matters: swapping `(a, b)` fixes `J_x`, `J_0` and negates
/// `J_y`, `J_z`.
pub fn schwinger_spin(pair: (usize, usize), comp: SpinComponent) -> QuadOp {
    let (a, b) = pair;
    assert!(a != b, "spin pair must join two distinct modes");
    let half = GRat::from_ratio(1, 2);
    let mut op = QuadOp::zero();
    match comp {
        SpinComponent::X => {
            op.add_term(Monomial::Mixed(a, b), half.clone());
            op.add_term(Monomial::Mixed(b, a), half);
        }
        SpinComponent::Y => {
            // 1/(2i) = -i/2
            let c = GRat::i() * GRat::from_ratio(-1, 2);
            op.add_term(Monomial::Mixed(a, b), c.clone());
            op.add_term(Monomial::Mixed(b, a), -c);
        }
        SpinComponent::Z => {
            op.add_term(Monomial::Mixed(a, a), half.clone());
            op.add_term(Monomial::Mixed(b, b), -half);
        }
        SpinComponent::Zero => {
            op.add_term(Monomial::Mixed(a, a), half.clone());
            op.add_term(Monomial::Mixed(b, b), half);
        }
    }
    op
}

/// Real linear form in the quadratures,
/// `f = Σ_j (q_j Q_j + p_j P_j)` with `Q_j = (a_j + a_j†)/√2`,
/// `P_j = i(a_j† − a_j)/√2`. Exact coefficients use [`BigRational`];
/// eigenvector-derived forms use `f64` (see [`LinearFormF`]).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm<T = BigRational> {
    pub q: Vec<T>,
    pub p: Vec<T>,
}

/// Floating-coefficient linear form.
pub type LinearFormF = LinearForm<f64>;

/// Real scalar that embeds into a [`Coeff`] ring: pairs `BigRational` with
/// exact Gaussian rationals and `f64` with `Complex64`.
pub trait RealCoeff: Clone + PartialEq + std::fmt::Debug {
    type Cx: Coeff;
    fn embed(&self) -> Self::Cx;
    fn is_zero(&self) -> bool;
    fn zero() -> Self;
}

impl RealCoeff for BigRational {
    type Cx = GRat;
    fn embed(&self) -> GRat {
        GRat::new(self.clone(), Zero::zero())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero() -> Self {
        Zero::zero()
    }
}

impl RealCoeff for f64 {
    type Cx = Complex64;
    fn embed(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn zero() -> Self {
        0.0
    }
}

impl<T: RealCoeff> LinearForm<T> {
    pub fn zeros(n_modes: usize) -> Self {
        LinearForm {
            q: vec![T::zero(); n_modes],
            p: vec![T::zero(); n_modes],
        }
    }

    /// Pure-Q form with the given coefficients.
    pub fn q_form(q: Vec<T>) -> Self {
        let n = q.len();
        LinearForm { q, p: vec![T::zero(); n] }
    }

    /// Pure-P form with the given coefficients.
    pub fn p_form(p: Vec<T>) -> Self {
        let n = p.len();
        LinearForm { q: vec![T::zero(); n], p }
    }

    pub fn n_modes(&self) -> usize {
        self.q.len()
    }

    pub fn is_zero(&self) -> bool {
        self.q.iter().all(RealCoeff::is_zero) && self.p.iter().all(RealCoeff::is_zero)
    }
}

/// Symmetrized product of two linear forms,
/// `(f g + g f)/2`, expanded into the canonical quadratic basis. Exact
/// forms produce an exact operator; floating forms produce a [`QuadOpF`].
pub fn quad_product<T: RealCoeff>(f: &LinearForm<T>, g: &LinearForm<T>) -> QuadOp<T::Cx> {
    assert_eq!(f.n_modes(), g.n_modes(), "forms must share a mode count");
    let n = f.n_modes();
    let mut op = QuadOp::zero();
    for j in 0..n {
        for k in 0..n {
            let qq = f.q[j].embed() * g.q[k].embed();
            if !qq.is_zero() {
                add_sym_qq(&mut op, j, k, qq);
            }
            let pp = f.p[j].embed() * g.p[k].embed();
            if !pp.is_zero() {
                add_sym_pp(&mut op, j, k, pp);
            }
            let qp = f.q[j].embed() * g.p[k].embed();
            if !qp.is_zero() {
                add_sym_qp(&mut op, j, k, qp);
            }
            // sym(P_j Q_k) = sym(Q_k P_j)
            let pq = f.p[j].embed() * g.q[k].embed();
            if !pq.is_zero() {
                add_sym_qp(&mut op, k, j, pq);
            }
        }
    }
    op
}

/// `c * sym(Q_j Q_k)`.
fn add_sym_qq<C: Coeff>(op: &mut QuadOp<C>, j: usize, k: usize, c: C) {
    let half = c.clone() * C::from_ratio(1, 2);
    op.add_term(Monomial::create2(j, k), half.clone());
    op.add_term(Monomial::annih2(j, k), half.clone());
    op.add_term(Monomial::Mixed(j, k), half.clone());
    op.add_term(Monomial::Mixed(k, j), half.clone());
    if j == k {
        op.add_term(Monomial::Unit, half);
    }
}

/// `c * sym(P_j P_k)`.
fn add_sym_pp<C: Coeff>(op: &mut QuadOp<C>, j: usize, k: usize, c: C) {
    let half = c.clone() * C::from_ratio(1, 2);
    op.add_term(Monomial::create2(j, k), -half.clone());
    op.add_term(Monomial::annih2(j, k), -half.clone());
    op.add_term(Monomial::Mixed(j, k), half.clone());
    op.add_term(Monomial::Mixed(k, j), half.clone());
    if j == k {
        op.add_term(Monomial::Unit, half);
    }
}

/// `c * sym(Q_j P_k)`.
fn add_sym_qp<C: Coeff>(op: &mut QuadOp<C>, j: usize, k: usize, c: C) {
    let ihalf = c * C::i() * C::from_ratio(1, 2);
    op.add_term(Monomial::create2(j, k), ihalf.clone());
    op.add_term(Monomial::annih2(j, k), -ihalf.clone());
    op.add_term(Monomial::Mixed(k, j), ihalf.clone());
    op.add_term(Monomial::Mixed(j, k), -ihalf);
}
