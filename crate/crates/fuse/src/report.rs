//! Decision reports in text and JSON form.

use std::fmt::Write as _;

use evifuse_core::{IntervalMass, MassFunction, ProbabilityDistribution};
use serde::Serialize;
use serde_json::Value;

use crate::runner::{Execution, Outcome, Run};
use crate::scenario::Scenario;

pub const DEFAULT_PRECISION: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionReport {
    pub scenario: String,
    pub epsilon: f64,
    pub atoms: Vec<AtomRow>,
    pub runs: Vec<RunReport>,
    pub comparisons: Vec<ComparisonReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomRow {
    pub atom: String,
    pub label: String,
}

/// A real number or a `[lo, hi]` range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Number {
    Point(f64),
    Range([f64; 2]),
}

impl From<f64> for Number {
    fn from(x: f64) -> Self {
        Number::Point(x)
    }
}

impl From<IntervalMass> for Number {
    fn from(x: IntervalMass) -> Self {
        Number::Range([x.lo(), x.hi()])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub name: String,
    pub pipeline: String,
    pub rule: String,
    pub discount: String,
    pub sources: Vec<String>,
    #[serde(flatten)]
    pub body: RunBody,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RunBody {
    Precise(NumericRun),
    Interval(NumericRun),
    Qualitative(QualitativeRun),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassRow {
    pub set: String,
    pub mass: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceTable {
    pub source: String,
    pub masses: Vec<MassRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerRow {
    pub tuple: Vec<String>,
    pub product: Number,
    pub intersection: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub shares: Vec<MassRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    pub values: Vec<Number>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decisions {
    pub max_bel: String,
    pub max_pl: String,
    pub max_dsmp: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_betp: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisRow {
    pub name: String,
    pub set: String,
    pub action: String,
    pub bel: Number,
    pub pl: Number,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Range of the probability of the hypothesis and of its complement.
    pub probability: [f64; 2],
    pub complement: [f64; 2],
    pub dsmp: Number,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betp: Option<f64>,
    pub decisions: Decisions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericRun {
    /// Discounted inputs, when a discount applies.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<SourceTable>,
    pub total_conflict: Number,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_total: Option<f64>,
    pub masses: Vec<MassRow>,
    pub ledger: Vec<LedgerRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dsmp: Option<Distribution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betp: Option<Distribution>,
    pub hypotheses: Vec<HypothesisRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelRow {
    pub set: String,
    pub value: f64,
    pub refined: String,
    pub crude: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelRange {
    pub refined: [String; 2],
    pub crude: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QualitativeHypothesisRow {
    pub name: String,
    pub set: String,
    pub action: String,
    pub probability: LabelRange,
    pub complement: LabelRange,
    pub dsmp: String,
    pub decisions: Decisions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QualitativeRun {
    pub labels: usize,
    pub masses: Vec<LabelRow>,
    pub refined_normalized: bool,
    pub crude_normalized: bool,
    pub dsmp: Vec<LabelRow>,
    pub hypotheses: Vec<QualitativeHypothesisRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsystemRow {
    pub run: String,
    pub deltas: Vec<f64>,
    pub entropy: f64,
    pub pic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub name: String,
    pub key: String,
    pub hypotheses: Vec<String>,
    pub subsystems: Vec<SubsystemRow>,
    pub preferred: String,
    pub most_precise: String,
    pub most_informative: String,
    pub criterion_conflict: bool,
    pub tie: bool,
}

impl DecisionReport {
    pub fn new(exec: &Execution) -> Self {
        let s = &exec.scenario;
        DecisionReport {
            scenario: s.file.name.clone(),
            epsilon: s.file.epsilon,
            atoms: (0..s.frame.len())
                .map(|i| AtomRow {
                    atom: format!("theta{}", i + 1),
                    label: s.frame.atom(i).to_string(),
                })
                .collect(),
            runs: exec.runs.iter().map(|r| run_report(s, r)).collect(),
            comparisons: exec
                .comparisons
                .iter()
                .map(|c| ComparisonReport {
                    name: c.name.clone(),
                    key: c.result.key_hypothesis.clone(),
                    hypotheses: s.hypotheses.iter().map(|h| h.name.clone()).collect(),
                    subsystems: c
                        .result
                        .metrics
                        .iter()
                        .map(|m| SubsystemRow {
                            run: m.name.clone(),
                            deltas: m.deltas.clone(),
                            entropy: m.entropy,
                            pic: m.pic,
                        })
                        .collect(),
                    preferred: c.result.preferred.clone(),
                    most_precise: c.result.most_precise.clone(),
                    most_informative: c.result.most_informative.clone(),
                    criterion_conflict: c.result.criterion_conflict,
                    tie: c.result.tie,
                })
                .collect(),
        }
    }
}

fn masses_of(s: &Scenario, m: &MassFunction) -> Vec<MassRow> {
    m.focal()
        .map(|(x, v)| MassRow {
            set: s.set_name(&x),
            mass: v.into(),
        })
        .collect()
}

fn distribution(p: &ProbabilityDistribution) -> Distribution {
    Distribution {
        values: p.values().iter().map(|&x| x.into()).collect(),
        entropy: Some(p.entropy()),
        pic: Some(p.pic()),
    }
}

fn action(s: &Scenario, name: &str) -> (String, String) {
    let h = s
        .hypotheses
        .iter()
        .find(|h| h.name == name)
        .expect("evaluations follow the hypotheses");
    (s.set_name(&h.set), h.action.clone())
}

fn run_report(s: &Scenario, run: &Run) -> RunReport {
    let body = match &run.outcome {
        Outcome::Precise(p) => RunBody::Precise(NumericRun {
            inputs: if run.discount == crate::scenario::DiscountMode::None {
                Vec::new()
            } else {
                p.inputs
                    .iter()
                    .map(|(n, m)| SourceTable {
                        source: n.clone(),
                        masses: masses_of(s, m),
                    })
                    .collect()
            },
            total_conflict: p.fusion.total_conflict.into(),
            raw_total: p.raw_total,
            masses: masses_of(s, &p.fused),
            ledger: p
                .fusion
                .ledger
                .iter()
                .map(|e| LedgerRow {
                    tuple: e.tuple.iter().map(|x| s.set_name(x)).collect(),
                    product: e.product.into(),
                    intersection: s.set_name(&e.intersection),
                    shares: e
                        .shares
                        .iter()
                        .map(|(x, v)| MassRow {
                            set: s.set_name(x),
                            mass: (*v).into(),
                        })
                        .collect(),
                })
                .collect(),
            dsmp: p.dsmp.as_ref().map(distribution),
            betp: p.betp.as_ref().map(distribution),
            hypotheses: p
                .evaluations
                .iter()
                .map(|e| {
                    let (set, action) = action(s, &e.name);
                    HypothesisRow {
                        name: e.name.clone(),
                        set,
                        action,
                        bel: e.bel.into(),
                        pl: e.pl.into(),
                        delta: Some(e.delta),
                        probability: [e.bel, e.pl],
                        complement: [e.complement_bel, e.complement_pl],
                        dsmp: e.dsmp.into(),
                        betp: Some(e.betp),
                        decisions: Decisions {
                            max_bel: e.max_bel.as_str().into(),
                            max_pl: e.max_pl.as_str().into(),
                            max_dsmp: e.max_dsmp.as_str().into(),
                            max_betp: Some(e.max_betp.as_str().into()),
                        },
                    }
                })
                .collect(),
        }),
        Outcome::Interval(p) => RunBody::Interval(NumericRun {
            inputs: Vec::new(),
            total_conflict: p.fusion.total_conflict.into(),
            raw_total: None,
            masses: p
                .fusion
                .fused
                .focal()
                .map(|(x, v)| MassRow {
                    set: s.set_name(&x),
                    mass: v.into(),
                })
                .collect(),
            ledger: p
                .fusion
                .ledger
                .iter()
                .map(|e| LedgerRow {
                    tuple: e.tuple.iter().map(|x| s.set_name(x)).collect(),
                    product: e.product.into(),
                    intersection: s.set_name(&e.intersection),
                    shares: e
                        .shares
                        .iter()
                        .map(|(x, v)| MassRow {
                            set: s.set_name(x),
                            mass: (*v).into(),
                        })
                        .collect(),
                })
                .collect(),
            dsmp: p.dsmp.as_ref().map(|d| Distribution {
                values: d.iter().map(|x| x.clamp_unit().into()).collect(),
                entropy: None,
                pic: None,
            }),
            betp: None,
            hypotheses: p
                .evaluations
                .iter()
                .map(|e| {
                    let (set, action) = action(s, &e.name);
                    HypothesisRow {
                        name: e.name.clone(),
                        set,
                        action,
                        bel: e.bel.into(),
                        pl: e.pl.into(),
                        delta: None,
                        probability: [e.probability.lo(), e.probability.hi()],
                        complement: [
                            e.complement_probability.lo(),
                            e.complement_probability.hi(),
                        ],
                        dsmp: e.dsmp.clamp_unit().into(),
                        betp: None,
                        decisions: Decisions {
                            max_bel: e.max_bel.as_str().into(),
                            max_pl: e.max_pl.as_str().into(),
                            max_dsmp: e.max_dsmp.as_str().into(),
                            max_betp: None,
                        },
                    }
                })
                .collect(),
        }),
        Outcome::Qualitative(q) => {
            let top = q.refined.set.top() as f64;
            let refined = |x: f64| format!("L_{:.2}", x);
            let crude = |x: f64| format!("L{}", x as usize);
            RunBody::Qualitative(QualitativeRun {
                labels: q.refined.set.interior(),
                masses: q
                    .refined
                    .labels
                    .iter()
                    .map(|(x, l)| LabelRow {
                        set: s.set_name(x),
                        value: l.refined.value(),
                        refined: l.refined.to_string(),
                        crude: format!("L{}", l.crude),
                    })
                    .collect(),
                refined_normalized: q.refined.normalized,
                crude_normalized: q.crude.normalized,
                dsmp: q
                    .dsmp
                    .iter()
                    .enumerate()
                    .map(|(i, l)| LabelRow {
                        set: format!("theta{}", i + 1),
                        value: l.refined.value(),
                        refined: l.refined.to_string(),
                        crude: format!("L{}", l.crude),
                    })
                    .collect(),
                hypotheses: q
                    .evaluations
                    .iter()
                    .map(|e| {
                        let (set, action) = action(s, &e.name);
                        QualitativeHypothesisRow {
                            name: e.name.clone(),
                            set,
                            action,
                            probability: LabelRange {
                                refined: [refined(e.refined.bel), refined(e.refined.pl.min(top))],
                                crude: [crude(e.crude.bel), crude(e.crude.pl.min(top))],
                            },
                            complement: LabelRange {
                                refined: [
                                    refined(e.refined.complement_bel.max(0.0)),
                                    refined(e.refined.complement_pl),
                                ],
                                crude: [
                                    crude(e.crude.complement_bel.max(0.0)),
                                    crude(e.crude.complement_pl),
                                ],
                            },
                            dsmp: refined(e.dsmp),
                            decisions: Decisions {
                                max_bel: e.max_bel.as_str().into(),
                                max_pl: e.max_pl.as_str().into(),
                                max_dsmp: e.max_dsmp.as_str().into(),
                                max_betp: None,
                            },
                        }
                    })
                    .collect(),
            })
        }
    };
    RunReport {
        name: run.name.clone(),
        pipeline: run.pipeline.clone(),
        rule: run.rule.as_str().into(),
        discount: run.discount.as_str().into(),
        sources: run.sources.clone(),
        body,
    }
}

/// Renders a report; numbers are rounded to `precision` decimals here only.
pub fn render(report: &DecisionReport, format: Format, precision: usize) -> String {
    match format {
        Format::Json => {
            let mut v = serde_json::to_value(report).expect("reports serialize");
            round_numbers(&mut v, precision);
            // Configuration, not a result: kept exact.
            v["epsilon"] = serde_json::json!(report.epsilon);
            let mut out = serde_json::to_string_pretty(&v).expect("values serialize");
            out.push('\n');
            out
        }
        Format::Text => render_text(report, precision),
    }
}

fn round_numbers(v: &mut Value, precision: usize) {
    match v {
        Value::Number(n) => {
            if let Some(x) = n.as_f64().filter(|_| !n.is_i64() && !n.is_u64()) {
                let scale = 10f64.powi(precision as i32);
                let r = (x * scale).round() / scale;
                // Avoid a signed zero in the output.
                let r = if r == 0.0 { 0.0 } else { r };
                if let Some(m) = serde_json::Number::from_f64(r) {
                    *n = m;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|i| round_numbers(i, precision)),
        Value::Object(map) => map.values_mut().for_each(|i| round_numbers(i, precision)),
        _ => {}
    }
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new<I: IntoIterator<Item = S>, S: Into<String>>(header: I) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn write(&self, out: &mut String) {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (i, c) in r.iter().enumerate() {
                widths[i] = widths[i].max(c.chars().count());
            }
        }
        let line = |out: &mut String, cells: &[String]| {
            let mut s = String::new();
            for (i, c) in cells.iter().enumerate() {
                if i == 0 {
                    let _ = write!(s, "  {:<w$}", c, w = widths[i]);
                } else {
                    let _ = write!(s, "  {:>w$}", c, w = widths[i]);
                }
            }
            out.push_str(s.trim_end());
            out.push('\n');
        };
        line(out, &self.header);
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        line(out, &rule);
        for r in &self.rows {
            line(out, r);
        }
    }
}

fn num(n: &Number, p: usize) -> String {
    match n {
        Number::Point(x) => fixed(*x, p),
        Number::Range([lo, hi]) => format!("[{}, {}]", fixed(*lo, p), fixed(*hi, p)),
    }
}

fn fixed(x: f64, p: usize) -> String {
    let s = format!("{:.*}", p, x);
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn render_text(report: &DecisionReport, p: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario {}  (epsilon {})", report.scenario, report.epsilon);
    for run in &report.runs {
        let _ = writeln!(
            out,
            "\n== {}  rule {}  discount {}  sources {}",
            run.name,
            run.rule,
            run.discount,
            run.sources.join(", ")
        );
        match &run.body {
            RunBody::Precise(n) | RunBody::Interval(n) => numeric_text(&mut out, report, n, p),
            RunBody::Qualitative(q) => qualitative_text(&mut out, report, q),
        }
    }
    for c in &report.comparisons {
        let _ = writeln!(out, "\n== comparison {}  key {}", c.name, c.key);
        let mut header = vec!["run".to_string()];
        header.extend(c.hypotheses.iter().map(|h| format!("delta {h}")));
        header.extend(["entropy".to_string(), "pic".to_string()]);
        let mut t = Table::new(header);
        for m in &c.subsystems {
            let mut row = vec![m.run.clone()];
            row.extend(m.deltas.iter().map(|d| fixed(*d, p)));
            row.push(fixed(m.entropy, p));
            row.push(fixed(m.pic, p));
            t.row(row);
        }
        t.write(&mut out);
        let _ = writeln!(out, "  most precise      {}", c.most_precise);
        let _ = writeln!(out, "  most informative  {}", c.most_informative);
        let mut notes = Vec::new();
        if c.criterion_conflict {
            notes.push("criteria disagree");
        }
        if c.tie {
            notes.push("tie");
        }
        let _ = writeln!(
            out,
            "  preferred         {}{}",
            c.preferred,
            if notes.is_empty() {
                String::new()
            } else {
                format!("  ({})", notes.join(", "))
            }
        );
    }
    out
}

fn numeric_text(out: &mut String, report: &DecisionReport, n: &NumericRun, p: usize) {
    for src in &n.inputs {
        let _ = writeln!(out, "discounted {}", src.source);
        let mut t = Table::new(["focal element", "mass"]);
        for m in &src.masses {
            t.row(vec![m.set.clone(), num(&m.mass, p)]);
        }
        t.write(out);
    }
    let _ = writeln!(out, "total conflict {}", num(&n.total_conflict, p));
    if let Some(raw) = n.raw_total {
        let _ = writeln!(out, "mass before rescaling {}", fixed(raw, p));
    }
    let mut t = Table::new(["focal element", "mass"]);
    for m in &n.masses {
        t.row(vec![m.set.clone(), num(&m.mass, p)]);
    }
    t.write(out);
    if n.dsmp.is_none() && n.betp.is_none() {
        let _ = writeln!(out, "mass remains on the empty set; no transform or decision");
        return;
    }
    let mut header = vec!["atom", "label"];
    if n.dsmp.is_some() {
        header.push("DSmP");
    }
    if n.betp.is_some() {
        header.push("BetP");
    }
    let mut t = Table::new(header);
    for (i, a) in report.atoms.iter().enumerate() {
        let mut row = vec![a.atom.clone(), a.label.clone()];
        if let Some(d) = &n.dsmp {
            row.push(num(&d.values[i], p));
        }
        if let Some(b) = &n.betp {
            row.push(num(&b.values[i], p));
        }
        t.row(row);
    }
    let mut footer = vec!["entropy".to_string(), String::new()];
    let mut pic = vec!["pic".to_string(), String::new()];
    let mut any = false;
    for d in [&n.dsmp, &n.betp].into_iter().flatten() {
        if let (Some(h), Some(c)) = (d.entropy, d.pic) {
            footer.push(fixed(h, p));
            pic.push(fixed(c, p));
            any = true;
        }
    }
    if any {
        t.row(footer);
        t.row(pic);
    }
    t.write(out);
    let mut t = Table::new([
        "hypothesis", "bel", "pl", "P(H)", "P(not H)", "DSmP", "BetP", "max bel", "max pl",
        "max DSmP", "max BetP",
    ]);
    for h in &n.hypotheses {
        t.row(vec![
            format!("{} = {}", h.name, h.set),
            num(&h.bel, p),
            num(&h.pl, p),
            format!("[{}, {}]", fixed(h.probability[0], p), fixed(h.probability[1], p)),
            format!("[{}, {}]", fixed(h.complement[0], p), fixed(h.complement[1], p)),
            num(&h.dsmp, p),
            h.betp.map(|b| fixed(b, p)).unwrap_or_else(|| "-".into()),
            h.decisions.max_bel.clone(),
            h.decisions.max_pl.clone(),
            h.decisions.max_dsmp.clone(),
            h.decisions.max_betp.clone().unwrap_or_else(|| "-".into()),
        ]);
    }
    t.write(out);
    for h in &n.hypotheses {
        let accepted = [&h.decisions.max_bel, &h.decisions.max_pl, &h.decisions.max_dsmp]
            .iter()
            .all(|d| d.as_str() == "accept");
        let _ = writeln!(
            out,
            "decision on {}: {}",
            h.name,
            if accepted { h.action.as_str() } else { "no consensus to act" }
        );
    }
}

fn qualitative_text(out: &mut String, report: &DecisionReport, q: &QualitativeRun) {
    let _ = writeln!(
        out,
        "labels L0..L{}  refined {}  crude {}",
        q.labels + 1,
        if q.refined_normalized { "normalized" } else { "not normalized" },
        if q.crude_normalized { "normalized" } else { "not normalized" }
    );
    let mut t = Table::new(["focal element", "value", "refined", "crude"]);
    for m in &q.masses {
        t.row(vec![m.set.clone(), format!("{:.5}", m.value), m.refined.clone(), m.crude.clone()]);
    }
    t.write(out);
    let mut t = Table::new(["atom", "label", "qDSmP", "refined", "crude"]);
    for (a, d) in report.atoms.iter().zip(&q.dsmp) {
        t.row(vec![
            a.atom.clone(),
            a.label.clone(),
            format!("{:.4}", d.value),
            d.refined.clone(),
            d.crude.clone(),
        ]);
    }
    t.write(out);
    let mut t = Table::new([
        "hypothesis", "qP(H) refined", "qP(not H) refined", "qP(H) crude", "qP(not H) crude",
        "qDSmP", "max bel", "max pl", "max DSmP",
    ]);
    for h in &q.hypotheses {
        let r = |x: &[String; 2]| format!("[{}, {}]", x[0], x[1]);
        t.row(vec![
            format!("{} = {}", h.name, h.set),
            r(&h.probability.refined),
            r(&h.complement.refined),
            r(&h.probability.crude),
            r(&h.complement.crude),
            h.dsmp.clone(),
            h.decisions.max_bel.clone(),
            h.decisions.max_pl.clone(),
            h.decisions.max_dsmp.clone(),
        ]);
    }
    t.write(out);
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::runner::{execute, RunOptions};

    fn report(name: &str) -> DecisionReport {
        let s = bundled(name).unwrap().unwrap();
        DecisionReport::new(&execute(&s, &RunOptions::default()).unwrap())
    }

    fn decimals(v: &Value, out: &mut usize) {
        match v {
            Value::Number(n) => {
                let s = n.to_string();
                if let Some((_, frac)) = s.split_once('.') {
                    *out = (*out).max(frac.trim_end_matches(|c: char| !c.is_ascii_digit()).len());
                }
            }
            Value::Array(items) => items.iter().for_each(|i| decimals(i, out)),
            Value::Object(map) => map.values().for_each(|i| decimals(i, out)),
            _ => {}
        }
    }

    #[test]
    fn json_numbers_are_rounded_at_render() {
        let r = report("vbied_example3");
        let v: Value = serde_json::from_str(&render(&r, Format::Json, 3)).unwrap();
        let mut most = 0;
        decimals(&v, &mut most);
        assert_eq!(most, 3);
        assert_eq!(v["epsilon"], 0.001);
    }

    #[test]
    fn rounding_drops_signed_zero() {
        let mut v = serde_json::json!({"x": -0.000001, "y": [-0.0]});
        round_numbers(&mut v, 3);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"x":0.0,"y":[0.0]}"#);
    }

    #[test]
    fn interval_dsmp_is_clamped_in_reports() {
        let r = report("vbied_example9");
        let v = serde_json::to_value(&r).unwrap();
        let theta8 = &v["runs"][0]["dsmp"]["values"][7];
        assert_eq!(theta8[1], 1.0);
    }

    #[test]
    fn text_report_lists_decisions() {
        let text = render(&report("vbied_example3"), Format::Text, 5);
        assert!(text.contains("decision on H678: evacuate"));
        assert!(text.contains("0.51187"));
        let text = render(&report("vbied_example10"), Format::Text, 5);
        assert!(text.contains("L_1.08"));
        assert!(text.contains("refined normalized"));
    }
}
