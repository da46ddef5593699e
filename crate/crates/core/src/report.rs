//! Byte-stable JSON reports and the dumps that chain pipeline stages.
//!
//! Every document is serialized with sorted keys (the default map is a
//! B-tree) and a fixed scientific float format with 17 significant digits,
//! so identical inputs produce identical bytes and floats survive a round
//! trip exactly. State and sector dumps parse back into their in-memory
//! forms; reports are terminal.

use std::collections::BTreeMap;
use std::io;

use num::complex::Complex64;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::entangle::{Classification, EntanglementReport};
use crate::focksim::{FockVector, MeasureSetting, MeasurementTable, SpinSectorState};
use crate::hgraph::{HGraph, SpinPairing};
use crate::nullifiers::{
    relabel_spin_coeffs, spin_expression, NullifierSet, VerifyRow,
};
use crate::scalar::rat_display;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("malformed document: {0}")]
    Parse(String),
    #[error("field `{field}`: {reason}")]
    Field { field: String, reason: String },
}

pub type ReportResult<T> = Result<T, ReportError>;

fn field_err<T>(field: &str, reason: impl Into<String>) -> ReportResult<T> {
    Err(ReportError::Field {
        field: field.to_string(),
        reason: reason.into(),
    })
}

/// Pretty printer that pins every float to `{:.16e}`.
struct SciFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for SciFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        debug_assert!(value.is_finite(), "reports hold finite numbers only");
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Serializes a document with sorted keys, pinned float format, and a
/// trailing newline.
pub fn to_json_string(value: &Value) -> String {
    let mut out = Vec::new();
    let formatter = SciFormatter {
        inner: PrettyFormatter::new(),
    };
    let mut ser = Serializer::with_formatter(&mut out, formatter);
    serde::Serialize::serialize(value, &mut ser).expect("in-memory serialization");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

fn complex_json(z: Complex64) -> Value {
    json!({ "im": z.im, "re": z.re })
}

fn parse_complex(v: &Value, field: &str) -> ReportResult<Complex64> {
    let re = v
        .get("re")
        .and_then(Value::as_f64)
        .ok_or_else(|| ReportError::Field {
            field: field.to_string(),
            reason: "missing or non-numeric `re`".into(),
        })?;
    let im = v
        .get("im")
        .and_then(Value::as_f64)
        .ok_or_else(|| ReportError::Field {
            field: field.to_string(),
            reason: "missing or non-numeric `im`".into(),
        })?;
    Ok(Complex64::new(re, im))
}

fn pairing_json(pairing: &SpinPairing) -> Value {
    Value::Array(
        pairing
            .pairs()
            .iter()
            .map(|&(a, b)| json!([a + 1, b + 1]))
            .collect(),
    )
}

fn parse_pairing(v: &Value, field: &str) -> ReportResult<SpinPairing> {
    let entries = v.as_array().ok_or_else(|| ReportError::Field {
        field: field.to_string(),
        reason: "expected an array of [a, b] pairs".into(),
    })?;
    let mut pairs = Vec::with_capacity(entries.len());
    for (idx, entry) in entries.iter().enumerate() {
        let pair = entry.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
            ReportError::Field {
                field: format!("{field}[{idx}]"),
                reason: "expected a [a, b] pair".into(),
            }
        })?;
        let mut modes = [0usize; 2];
        for (slot, value) in modes.iter_mut().zip(pair) {
            let raw = value.as_i64().unwrap_or(0);
            if raw < 1 {
                return field_err(
                    &format!("{field}[{idx}]"),
                    "mode indices are 1-based positive integers",
                );
            }
            *slot = (raw - 1) as usize;
        }
        pairs.push((modes[0], modes[1]));
    }
    SpinPairing::new(pairs).map_err(|e| ReportError::Field {
        field: field.to_string(),
        reason: e.to_string(),
    })
}

/// A simulated state with the provenance needed to re-run or extend it.
#[derive(Debug, Clone)]
pub struct StateDump {
    pub graph_label: String,
    pub r: f64,
    pub cutoff: usize,
    pub pairing: Option<SpinPairing>,
    pub state: FockVector,
}

pub fn state_dump_json(dump: &StateDump) -> Value {
    let mut doc = Map::new();
    doc.insert("kind".into(), "state".into());
    doc.insert("graph_label".into(), dump.graph_label.clone().into());
    doc.insert("r".into(), dump.r.into());
    doc.insert("cutoff".into(), (dump.cutoff as u64).into());
    doc.insert("n_modes".into(), (dump.state.n_modes() as u64).into());
    doc.insert("norm_deficit".into(), dump.state.norm_deficit().into());
    if let Some(p) = &dump.pairing {
        doc.insert("pairing".into(), pairing_json(p));
    }
    let amplitudes: Vec<Value> = dump
        .state
        .amplitudes()
        .map(|(occ, amp)| {
            json!({
                "amplitude": complex_json(*amp),
                "n": occ.iter().map(|&x| x as u64).collect::<Vec<_>>(),
            })
        })
        .collect();
    doc.insert("amplitudes".into(), Value::Array(amplitudes));
    Value::Object(doc)
}

pub fn parse_state_dump(text: &str) -> ReportResult<StateDump> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| ReportError::Parse(e.to_string()))?;
    if doc.get("kind").and_then(Value::as_str) != Some("state") {
        return field_err("kind", "expected \"state\"");
    }
    let graph_label = doc
        .get("graph_label")
        .and_then(Value::as_str)
        .unwrap_or("")
        .to_string();
    let r = match doc.get("r").and_then(Value::as_f64) {
        Some(r) => r,
        None => return field_err("r", "missing or non-numeric"),
    };
    let cutoff = match doc.get("cutoff").and_then(Value::as_u64) {
        Some(c) => c as usize,
        None => return field_err("cutoff", "missing or non-integer"),
    };
    let n_modes = match doc.get("n_modes").and_then(Value::as_u64) {
        Some(n) if n > 0 => n as usize,
        _ => return field_err("n_modes", "missing or non-positive"),
    };
    let pairing = match doc.get("pairing") {
        None => None,
        Some(v) => Some(parse_pairing(v, "pairing")?),
    };
    let entries_json = match doc.get("amplitudes").and_then(Value::as_array) {
        Some(a) => a,
        None => return field_err("amplitudes", "missing or not an array"),
    };
    let mut entries = Vec::with_capacity(entries_json.len());
    for (idx, entry) in entries_json.iter().enumerate() {
        let occ_json = match entry.get("n").and_then(Value::as_array) {
            Some(a) if a.len() == n_modes => a,
            _ => {
                return field_err(
                    &format!("amplitudes[{idx}].n"),
                    format!("expected {n_modes} occupation numbers"),
                )
            }
        };
        let mut occ = Vec::with_capacity(n_modes);
        for v in occ_json {
            match v.as_u64() {
                Some(n) if n <= u8::MAX as u64 => occ.push(n as u8),
                _ => {
                    return field_err(
                        &format!("amplitudes[{idx}].n"),
                        "occupation numbers are small nonnegative integers",
                    )
                }
            }
        }
        if occ.iter().map(|&n| n as usize).sum::<usize>() > cutoff {
            return field_err(
                &format!("amplitudes[{idx}].n"),
                "total occupation exceeds the declared cutoff",
            );
        }
        let amp = match entry.get("amplitude") {
            Some(v) => parse_complex(v, &format!("amplitudes[{idx}].amplitude"))?,
            None => return field_err(&format!("amplitudes[{idx}]"), "missing `amplitude`"),
        };
        entries.push((occ, amp));
    }
    if let Some(p) = &pairing {
        for &(a, b) in p.pairs() {
            if a >= n_modes || b >= n_modes {
                return field_err("pairing", "pair mode index exceeds n_modes");
            }
        }
    }
    let state = FockVector::from_amplitudes(n_modes, cutoff, &entries);
    Ok(StateDump {
        graph_label,
        r,
        cutoff,
        pairing,
        state,
    })
}

/// A post-selected sector with its provenance label.
#[derive(Debug, Clone)]
pub struct SectorDump {
    pub state_id: String,
    pub state: SpinSectorState,
}

pub fn sector_dump_json(dump: &SectorDump) -> Value {
    let state = &dump.state;
    let mut doc = Map::new();
    doc.insert("kind".into(), "sector".into());
    doc.insert("state_id".into(), dump.state_id.clone().into());
    doc.insert("n_modes".into(), (state.n_modes() as u64).into());
    doc.insert("pairing".into(), pairing_json(state.pairing()));
    doc.insert(
        "j2".into(),
        Value::Array(state.j2_list().iter().map(|&j| u64::from(j).into()).collect()),
    );
    doc.insert(
        "selection_probability".into(),
        state.selection_probability().into(),
    );
    let amplitudes: Vec<Value> = state
        .amplitudes()
        .map(|(m2, amp)| {
            json!({
                "amplitude": complex_json(*amp),
                "m2": m2.iter().map(|&m| i64::from(m)).collect::<Vec<_>>(),
            })
        })
        .collect();
    doc.insert("amplitudes".into(), Value::Array(amplitudes));
    Value::Object(doc)
}

pub fn parse_sector_dump(text: &str) -> ReportResult<SectorDump> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| ReportError::Parse(e.to_string()))?;
    if doc.get("kind").and_then(Value::as_str) != Some("sector") {
        return field_err("kind", "expected \"sector\"");
    }
    let state_id = doc
        .get("state_id")
        .and_then(Value::as_str)
        .unwrap_or("")
        .to_string();
    let n_modes = match doc.get("n_modes").and_then(Value::as_u64) {
        Some(n) if n > 0 => n as usize,
        _ => return field_err("n_modes", "missing or non-positive"),
    };
    let pairing = match doc.get("pairing") {
        Some(v) => parse_pairing(v, "pairing")?,
        None => return field_err("pairing", "missing"),
    };
    let j2_json = match doc.get("j2").and_then(Value::as_array) {
        Some(a) if a.len() == pairing.pairs().len() => a,
        _ => return field_err("j2", "expected one entry per pair"),
    };
    let mut j2_list = Vec::with_capacity(j2_json.len());
    for v in j2_json {
        match v.as_u64() {
            Some(j) if j <= u8::MAX as u64 => j2_list.push(j as u8),
            _ => return field_err("j2", "entries are small nonnegative integers"),
        }
    }
    let selection_probability = match doc.get("selection_probability").and_then(Value::as_f64) {
        Some(p) if (0.0..=1.0).contains(&p) => p,
        _ => return field_err("selection_probability", "missing or outside [0, 1]"),
    };
    let entries_json = match doc.get("amplitudes").and_then(Value::as_array) {
        Some(a) => a,
        None => return field_err("amplitudes", "missing or not an array"),
    };
    let mut amplitudes = BTreeMap::new();
    for (idx, entry) in entries_json.iter().enumerate() {
        let m2_json = match entry.get("m2").and_then(Value::as_array) {
            Some(a) if a.len() == j2_list.len() => a,
            _ => {
                return field_err(
                    &format!("amplitudes[{idx}].m2"),
                    format!("expected {} projections", j2_list.len()),
                )
            }
        };
        let mut m2 = Vec::with_capacity(m2_json.len());
        for (v, &j2) in m2_json.iter().zip(&j2_list) {
            let raw = match v.as_i64() {
                Some(m) => m,
                None => {
                    return field_err(
                        &format!("amplitudes[{idx}].m2"),
                        "projections are integers (2m)",
                    )
                }
            };
            if raw.unsigned_abs() > u64::from(j2) || (raw + i64::from(j2)) % 2 != 0 {
                return field_err(
                    &format!("amplitudes[{idx}].m2"),
                    format!("projection {raw} invalid for 2j = {j2}"),
                );
            }
            m2.push(raw as i16);
        }
        let amp = match entry.get("amplitude") {
            Some(v) => parse_complex(v, &format!("amplitudes[{idx}].amplitude"))?,
            None => return field_err(&format!("amplitudes[{idx}]"), "missing `amplitude`"),
        };
        amplitudes.insert(m2, amp);
    }
    for &(a, b) in pairing.pairs() {
        if a >= n_modes || b >= n_modes {
            return field_err("pairing", "pair mode index exceeds n_modes");
        }
    }
    let state =
        SpinSectorState::from_parts(n_modes, pairing, j2_list, amplitudes, selection_probability);
    Ok(SectorDump { state_id, state })
}

fn verify_rows_json(rows: &[VerifyRow]) -> Value {
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

/// Numeric verification tables attached to a nullifier report, one row list
/// per nullifier in set order (exact first, then asymptotic).
#[derive(Debug, Clone, Default)]
pub struct NullifierVerification {
    pub r_grid: Vec<f64>,
    pub cutoff: usize,
    pub exact_rows: Vec<Vec<VerifyRow>>,
    pub asymptotic_rows: Vec<Vec<VerifyRow>>,
}

/// Full nullifier report: the exact set with rational coefficients and
/// printable expressions, the asymptotic candidates with decay rates, and
/// optional numeric verification tables. With `relabel` set, each exact
/// entry also carries the presentation where every second pair is swapped
/// and phase-shifted, which turns alternating constants into totals.
pub fn nullifier_report(
    graph_label: &str,
    graph: &HGraph,
    set: &NullifierSet,
    relabel: bool,
    verification: Option<&NullifierVerification>,
) -> Value {
    let pairing = &set.pairing;
    let mut doc = Map::new();
    doc.insert("kind".into(), "nullifiers".into());
    doc.insert("graph_label".into(), graph_label.into());
    doc.insert(
        "graph".into(),
        serde_json::from_str(&graph.to_json(None)).expect("graph serialization is valid JSON"),
    );
    doc.insert("pairing".into(), pairing_json(pairing));
    let exact: Vec<Value> = set
        .exact
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let mut entry = Map::new();
            entry.insert(
                "coefficients".into(),
                Value::Array(n.spin_coeffs.iter().map(|c| rat_display(c).into()).collect()),
            );
            entry.insert(
                "expression".into(),
                spin_expression(&n.spin_coeffs, pairing).into(),
            );
            if relabel {
                let (coeffs, relabeled) = relabel_spin_coeffs(&n.spin_coeffs, pairing);
                entry.insert(
                    "relabeled_expression".into(),
                    spin_expression(&coeffs, &relabeled).into(),
                );
            }
            if let Some(v) = verification {
                if let Some(rows) = v.exact_rows.get(i) {
                    entry.insert("verification".into(), verify_rows_json(rows));
                }
            }
            Value::Object(entry)
        })
        .collect();
    doc.insert("exact".into(), Value::Array(exact));
    let asymptotic: Vec<Value> = set
        .asymptotic
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let mut entry = Map::new();
            entry.insert(
                "coefficients".into(),
                Value::Array(n.spin_coeffs.iter().map(|&c| c.into()).collect()),
            );
            entry.insert("rate".into(), n.rate.into());
            if let Some(v) = verification {
                if let Some(rows) = v.asymptotic_rows.get(i) {
                    entry.insert("verification".into(), verify_rows_json(rows));
                }
            }
            Value::Object(entry)
        })
        .collect();
    doc.insert("asymptotic".into(), Value::Array(asymptotic));
    if let Some(v) = verification {
        doc.insert("cutoff".into(), (v.cutoff as u64).into());
        doc.insert(
            "r_grid".into(),
            Value::Array(v.r_grid.iter().map(|&r| r.into()).collect()),
        );
    }
    Value::Object(doc)
}

/// Measurement report: the settings, the joint count distribution, and the
/// per-setting mean spin projections. `samples` carries seeded draws from
/// the distribution when sampling was requested.
pub fn measurement_report(
    state_id: &str,
    settings: &[MeasureSetting],
    table: &MeasurementTable,
    samples: Option<(u64, &[Vec<u8>])>,
) -> Value {
    let mut doc = Map::new();
    doc.insert("kind".into(), "measurement".into());
    doc.insert("state_id".into(), state_id.into());
    doc.insert(
        "settings".into(),
        Value::Array(
            settings
                .iter()
                .map(|s| {
                    json!({
                        "pair": [s.pair.0 + 1, s.pair.1 + 1],
                        "phi": s.phi,
                        "theta": s.theta,
                    })
                })
                .collect(),
        ),
    );
    doc.insert(
        "outcomes".into(),
        Value::Array(
            table
                .outcomes
                .iter()
                .map(|(counts, p)| {
                    json!({
                        "counts": counts.iter().map(|&c| u64::from(c)).collect::<Vec<_>>(),
                        "probability": p,
                    })
                })
                .collect(),
        ),
    );
    doc.insert(
        "mean_projections".into(),
        Value::Array(
            (0..settings.len())
                .map(|i| table.mean_half_difference(i).into())
                .collect(),
        ),
    );
    if let Some((seed, draws)) = samples {
        doc.insert("seed".into(), seed.into());
        doc.insert(
            "samples".into(),
            Value::Array(
                draws
                    .iter()
                    .map(|d| {
                        Value::Array(d.iter().map(|&c| u64::from(c).into()).collect())
                    })
                    .collect(),
            ),
        );
    }
    Value::Object(doc)
}

fn classification_json(c: &Classification) -> Value {
    match c {
        Classification::FullyProduct => json!({ "type": "fully_product" }),
        Classification::Biseparable { subset, complement } => json!({
            "complement": complement.iter().map(|&s| s + 1).collect::<Vec<_>>(),
            "subset": subset.iter().map(|&s| s + 1).collect::<Vec<_>>(),
            "type": "biseparable",
        }),
        Classification::GenuineMultipartite => json!({ "type": "genuine_multipartite" }),
    }
}

/// Entanglement report with 1-based spin indices.
pub fn entanglement_report_json(rep: &EntanglementReport) -> Value {
    let mut doc = Map::new();
    doc.insert("kind".into(), "entanglement".into());
    doc.insert("state_id".into(), rep.state_id.clone().into());
    doc.insert(
        "bipartitions".into(),
        Value::Array(
            rep.bipartitions
                .iter()
                .map(|b| {
                    json!({
                        "complement": b.complement.iter().map(|&s| s + 1).collect::<Vec<_>>(),
                        "entropy_bits": b.entropy_bits,
                        "schmidt": b.schmidt,
                        "subset": b.subset.iter().map(|&s| s + 1).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        ),
    );
    if let Some(c) = &rep.classification {
        doc.insert("classification".into(), classification_json(c));
    }
    doc.insert(
        "single_spin_purities".into(),
        Value::Array(rep.single_spin_purities.iter().map(|&p| p.into()).collect()),
    );
    Value::Object(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::focksim::evolve_vacuum;
    use crate::hgraph::builtin;
    use crate::nullifiers::spin_nullifiers;

    #[test]
    fn floats_print_in_fixed_scientific_form() {
        let doc = json!({ "x": 0.5, "y": 1.0, "z": -3.25e-7 });
        let text = to_json_string(&doc);
        assert!(text.contains("5.0000000000000000e-1"), "{text}");
        assert!(text.contains("1.0000000000000000e0"), "{text}");
        assert!(text.contains("-3.2500000000000001e-7"), "{text}");
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn serialization_is_deterministic() {
        let (g, p) = builtin("two_epr").unwrap();
        let state = evolve_vacuum(&g, 0.1, 8).unwrap();
        let dump = StateDump {
            graph_label: "builtin:two_epr".into(),
            r: 0.1,
            cutoff: 8,
            pairing: Some(p),
            state,
        };
        let a = to_json_string(&state_dump_json(&dump));
        let b = to_json_string(&state_dump_json(&dump));
        assert_eq!(a, b);
    }

    #[test]
    fn state_dump_round_trip() {
        let (g, p) = builtin("chain3x2").unwrap();
        let state = evolve_vacuum(&g, 0.15, 6).unwrap();
        let dump = StateDump {
            graph_label: "builtin:chain3x2".into(),
            r: 0.15,
            cutoff: 6,
            pairing: Some(p.clone()),
            state: state.clone(),
        };
        let text = to_json_string(&state_dump_json(&dump));
        let parsed = parse_state_dump(&text).unwrap();
        assert_eq!(parsed.graph_label, "builtin:chain3x2");
        assert_eq!(parsed.r, 0.15);
        assert_eq!(parsed.cutoff, 6);
        assert_eq!(parsed.pairing.unwrap().pairs(), p.pairs());
        assert_eq!(parsed.state.n_amplitudes(), state.n_amplitudes());
        for (occ, amp) in state.amplitudes() {
            // Floats survive the fixed-format round trip bit-for-bit.
            assert_eq!(parsed.state.amplitude(occ), *amp);
        }
    }

    #[test]
    fn sector_dump_round_trip() {
        let (g, p) = builtin("two_epr").unwrap();
        let fock = evolve_vacuum(&g, 0.2, 8).unwrap();
        let sector = crate::focksim::casimir_postselect(&fock, &p, &[1, 1]).unwrap();
        let dump = SectorDump {
            state_id: "two_epr qubits".into(),
            state: sector.clone(),
        };
        let text = to_json_string(&sector_dump_json(&dump));
        let parsed = parse_sector_dump(&text).unwrap();
        assert_eq!(parsed.state_id, "two_epr qubits");
        assert_eq!(parsed.state.j2_list(), sector.j2_list());
        assert_eq!(
            parsed.state.selection_probability(),
            sector.selection_probability()
        );
        for (m2, amp) in sector.amplitudes() {
            assert_eq!(parsed.state.amplitude(m2), *amp);
        }
    }

    #[test]
    fn parse_errors_name_the_field() {
        let err = parse_state_dump("{\"kind\":\"state\"}").unwrap_err();
        assert!(err.to_string().contains('r'), "{err}");
        let bad_kind = parse_sector_dump("{\"kind\":\"state\"}").unwrap_err();
        assert!(bad_kind.to_string().contains("kind"), "{bad_kind}");
        let bad = parse_state_dump("not json").unwrap_err();
        assert!(matches!(bad, ReportError::Parse(_)));
    }

    #[test]
    fn nullifier_report_lists_expressions_and_relabeling() {
        let (g, p) = builtin("square4x2").unwrap();
        let set = spin_nullifiers(&g, &p);
        let doc = nullifier_report("builtin:square4x2", &g, &set, true, None);
        let exact = doc.get("exact").unwrap().as_array().unwrap();
        assert_eq!(exact.len(), 4);
        for entry in exact {
            let expr = entry.get("expression").unwrap().as_str().unwrap();
            assert!(expr.starts_with('J'), "{expr}");
            let relabeled = entry.get("relabeled_expression").unwrap().as_str().unwrap();
            assert!(relabeled.contains("(6,2)"), "{relabeled}");
        }
        assert!(doc.get("asymptotic").unwrap().as_array().unwrap().is_empty());
    }

    #[test]
    fn measurement_report_shape() {
        let table = MeasurementTable {
            outcomes: [(vec![1u8, 0], 0.75), (vec![0u8, 1], 0.25)]
                .into_iter()
                .collect(),
        };
        let settings = [MeasureSetting {
            pair: (0, 2),
            theta: 0.0,
            phi: 0.0,
        }];
        let doc = measurement_report("s", &settings, &table, Some((7, &[vec![1, 0]])));
        assert_eq!(doc.get("seed").unwrap().as_u64(), Some(7));
        let outcomes = doc.get("outcomes").unwrap().as_array().unwrap();
        assert_eq!(outcomes.len(), 2);
        let means = doc.get("mean_projections").unwrap().as_array().unwrap();
        assert!((means[0].as_f64().unwrap() - 0.25).abs() < 1e-15);
    }
}
