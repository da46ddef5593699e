//! H-graphs: weighted adjacency descriptions of multimode squeezing
//! interactions.
//!
//! A graph on `n` optical modes has a symmetric integer weight matrix with
//! zero diagonal; an edge `(j, k, w)` squeezes the joint quadratures of modes
//! `j` and `k` with strength `w`. A [`SpinPairing`] groups modes into
//! disjoint ordered pairs, each pair hosting one effective spin.
//!
//! External documents are 1-based; all in-memory indices are 0-based.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HGraphError {
    #[error("graph parse error: {0}")]
    Parse(String),
    #[error("graph validation error: {0}")]
    Validation(String),
    #[error("unknown builtin graph `{0}`")]
    UnknownBuiltin(String),
}

pub type HGraphResult<T> = Result<T, HGraphError>;

/// Weighted multimode squeezing graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HGraph {
    n_modes: usize,
    /// Symmetric, zero diagonal.
    weights: Vec<Vec<i64>>,
}

/// Disjoint ordered mode pairs, one effective spin per pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinPairing {
    pairs: Vec<(usize, usize)>,
}

impl HGraph {
    /// Builds a graph from explicit edges. Edges are unordered (`j < k` or
    /// `j > k` both accepted), and listing the same mode pair twice is an
    /// error rather than an accumulation.
    pub fn from_edges(n_modes: usize, edges: &[(usize, usize, i64)]) -> HGraphResult<Self> {
        if n_modes == 0 {
            return Err(HGraphError::Validation("graph needs at least one mode".into()));
        }
        let mut weights = vec![vec![0i64; n_modes]; n_modes];
        let mut seen = BTreeSet::new();
        for &(j, k, w) in edges {
            if j >= n_modes || k >= n_modes {
                return Err(HGraphError::Validation(format!(
                    "edge ({}, {}, {}) references a mode outside 1..={}",
                    j + 1,
                    k + 1,
                    w,
                    n_modes
                )));
            }
            if j == k {
                return Err(HGraphError::Validation(format!(
                    "edge ({}, {}, {}) is a self-loop; the diagonal must stay zero",
                    j + 1,
                    k + 1,
                    w
                )));
            }
            let key = (j.min(k), j.max(k));
            if !seen.insert(key) {
                return Err(HGraphError::Validation(format!(
                    "edge ({}, {}) listed more than once",
                    key.0 + 1,
                    key.1 + 1
                )));
            }
            weights[j][k] = w;
            weights[k][j] = w;
        }
        Ok(HGraph { n_modes, weights })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn weight(&self, j: usize, k: usize) -> i64 {
        self.weights[j][k]
    }

    /// Nonzero edges with `j < k`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for j in 0..self.n_modes {
            for k in (j + 1)..self.n_modes {
                if self.weights[j][k] != 0 {
                    out.push((j, k, self.weights[j][k]));
                }
            }
        }
        out
    }

    /// Dense symmetric weight matrix as floats (for eigendecomposition).
    pub fn weight_matrix_f64(&self) -> Vec<Vec<f64>> {
        self.weights
            .iter()
            .map(|row| row.iter().map(|&w| w as f64).collect())
            .collect()
    }

    /// Serializes to the external JSON document (1-based modes, sorted keys,
    /// edges ascending). Inverse of [`parse_hgraph`].
    pub fn to_json(&self, pairing: Option<&SpinPairing>) -> String {
        let mut s = String::from("{");
        if let Some(p) = pairing {
            s.push_str("\"edges\":");
            write_edges(&mut s, &self.edges());
            s.push_str(",\"modes\":");
            let _ = write!(s, "{}", self.n_modes);
            s.push_str(",\"pairing\":[");
            for (idx, &(a, b)) in p.pairs().iter().enumerate() {
                if idx > 0 {
                    s.push(',');
                }
                let _ = write!(s, "[{},{}]", a + 1, b + 1);
            }
            s.push_str("]}");
        } else {
            s.push_str("\"edges\":");
            write_edges(&mut s, &self.edges());
            s.push_str(",\"modes\":");
            let _ = write!(s, "{}", self.n_modes);
            s.push('}');
        }
        s
    }
}

fn write_edges(s: &mut String, edges: &[(usize, usize, i64)]) {
    s.push('[');
    for (idx, &(j, k, w)) in edges.iter().enumerate() {
        if idx > 0 {
            s.push(',');
        }
        let _ = write!(s, "[{},{},{}]", j + 1, k + 1, w);
    }
    s.push(']');
}

impl SpinPairing {
    /// Builds a pairing from 0-based ordered pairs. All modes must be
    /// distinct across pairs.
    pub fn new(pairs: Vec<(usize, usize)>) -> HGraphResult<Self> {
        let mut seen = BTreeSet::new();
        for &(a, b) in &pairs {
            for m in [a, b] {
                if !seen.insert(m) {
                    return Err(HGraphError::Validation(format!(
                        "mode {} appears in more than one pair",
                        m + 1
                    )));
                }
            }
        }
        Ok(SpinPairing { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// All paired modes in pair order.
    pub fn paired_modes(&self) -> Vec<usize> {
        self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    /// Modes of `graph` not covered by the pairing.
    pub fn unpaired_modes(&self, n_modes: usize) -> Vec<usize> {
        let covered: BTreeSet<usize> = self.paired_modes().into_iter().collect();
        (0..n_modes).filter(|m| !covered.contains(m)).collect()
    }

    pub fn validate_against(&self, graph: &HGraph) -> HGraphResult<()> {
        for &(a, b) in &self.pairs {
            if a >= graph.n_modes() || b >= graph.n_modes() {
                return Err(HGraphError::Validation(format!(
                    "pair ({}, {}) references a mode outside 1..={}",
                    a + 1,
                    b + 1,
                    graph.n_modes()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct GraphDoc {
    modes: usize,
    edges: Vec<serde_json::Value>,
    #[serde(default)]
    pairing: Option<Vec<serde_json::Value>>,
}

/// Parses the external JSON graph document. Modes are 1-based in the
/// document. Returns the graph and the optional pairing.
pub fn parse_hgraph(text: &str) -> HGraphResult<(HGraph, Option<SpinPairing>)> {
    let doc: GraphDoc = serde_json::from_str(text)
        .map_err(|e| HGraphError::Parse(format!("malformed graph document: {e}")))?;
    let mut edges = Vec::with_capacity(doc.edges.len());
    for (idx, entry) in doc.edges.iter().enumerate() {
        let triple = entry
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| HGraphError::Parse(format!("edge entry {idx} is not a [j, k, w] triple")))?;
        let j = index_field(&triple[0], idx, "edge")?;
        let k = index_field(&triple[1], idx, "edge")?;
        let w = triple[2]
            .as_i64()
            .ok_or_else(|| HGraphError::Parse(format!("edge entry {idx} has a non-integer weight")))?;
        edges.push((j, k, w));
    }
    let graph = HGraph::from_edges(doc.modes, &edges)?;
    let pairing = match doc.pairing {
        None => None,
        Some(entries) => {
            let mut pairs = Vec::with_capacity(entries.len());
            for (idx, entry) in entries.iter().enumerate() {
                let pair = entry.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                    HGraphError::Parse(format!("pairing entry {idx} is not an [a, b] pair"))
                })?;
                let a = index_field(&pair[0], idx, "pairing")?;
                let b = index_field(&pair[1], idx, "pairing")?;
                pairs.push((a, b));
            }
            let pairing = SpinPairing::new(pairs)?;
            pairing.validate_against(&graph)?;
            Some(pairing)
        }
    };
    Ok((graph, pairing))
}

fn index_field(v: &serde_json::Value, entry: usize, what: &str) -> HGraphResult<usize> {
    let raw = v
        .as_i64()
        .ok_or_else(|| HGraphError::Parse(format!("{what} entry {entry} has a non-integer mode index")))?;
    if raw < 1 {
        return Err(HGraphError::Parse(format!(
            "{what} entry {entry} has mode index {raw}; indices are 1-based"
        )));
    }
    Ok((raw - 1) as usize)
}

/// Builtin graph instances. Each `..x2` name is two identical copies of a
/// base graph, the copy shifted by `n`, with mode `k` paired to `k + n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    TwoEpr,
    Chain3x2,
    Ghz3x2,
    Chain4x2,
    Square4x2,
    Ring4x2,
    Ghz4x2,
}

impl Builtin {
    pub const ALL: [Builtin; 7] = [
        Builtin::TwoEpr,
        Builtin::Chain3x2,
        Builtin::Ghz3x2,
        Builtin::Chain4x2,
        Builtin::Square4x2,
        Builtin::Ring4x2,
        Builtin::Ghz4x2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::TwoEpr => "two_epr",
            Builtin::Chain3x2 => "chain3x2",
            Builtin::Ghz3x2 => "ghz3x2",
            Builtin::Chain4x2 => "chain4x2",
            Builtin::Square4x2 => "square4x2",
            Builtin::Ring4x2 => "ring4x2",
            Builtin::Ghz4x2 => "ghz4x2",
        }
    }

    /// Base-block edges (0-based, block size, weight).
    fn base(&self) -> (usize, Vec<(usize, usize, i64)>) {
        match self {
            Builtin::TwoEpr => (2, vec![(0, 1, 1)]),
            Builtin::Chain3x2 => (3, vec![(0, 1, 1), (1, 2, 1)]),
            Builtin::Ghz3x2 => (3, vec![(0, 1, 1), (1, 2, 1), (0, 2, 1)]),
            Builtin::Chain4x2 => (4, vec![(0, 1, 1), (1, 2, 1), (2, 3, 1)]),
            Builtin::Square4x2 => (4, vec![(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, -1)]),
            Builtin::Ring4x2 => (4, vec![(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)]),
            Builtin::Ghz4x2 => (
                4,
                vec![(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)],
            ),
        }
    }

    pub fn build(&self) -> (HGraph, SpinPairing) {
        let (n, base) = self.base();
        let mut edges = base.clone();
        edges.extend(base.iter().map(|&(j, k, w)| (j + n, k + n, w)));
        let graph = HGraph::from_edges(2 * n, &edges).expect("builtin graphs are valid");
        let pairing =
            SpinPairing::new((0..n).map(|k| (k, k + n)).collect()).expect("builtin pairings are valid");
        (graph, pairing)
    }
}

/// Looks up a builtin by name.
pub fn builtin(name: &str) -> HGraphResult<(HGraph, SpinPairing)> {
    Builtin::ALL
        .iter()
        .find(|b| b.name() == name)
        .map(Builtin::build)
        .ok_or_else(|| HGraphError::UnknownBuiltin(name.to_string()))
}
