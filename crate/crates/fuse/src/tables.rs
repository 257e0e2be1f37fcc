//! Comparison of a run against the expected values embedded in a scenario.

use std::fmt::Write as _;

use evifuse_core::{Decision, IntervalMass, LabelMode, Subset};

use crate::error::{FuseError, Result};
use crate::runner::{Execution, Outcome, Run};
use crate::scenario::{ExpectedScalar, ExpectedValue, Scenario};

/// Value computed for one expected entry.
#[derive(Debug, Clone, PartialEq)]
pub enum Actual {
    Number(f64),
    Interval(f64, f64),
    Text(String),
}

impl std::fmt::Display for Actual {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let p = f.precision().unwrap_or(6);
        match self {
            Actual::Number(x) => write!(f, "{:.*}", p, x),
            Actual::Interval(lo, hi) => write!(f, "[{:.*}, {:.*}]", p, lo, p, hi),
            Actual::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub description: String,
    pub expected: Actual,
    pub actual: Actual,
    /// Absolute deviation; infinite for a text mismatch.
    pub deviation: f64,
    pub tolerance: f64,
}

impl CheckLine {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TableCheck {
    pub lines: Vec<CheckLine>,
}

impl TableCheck {
    pub fn failed(&self) -> usize {
        self.lines.iter().filter(|l| !l.passed()).count()
    }

    /// Largest deviation over numeric entries.
    pub fn max_deviation(&self) -> f64 {
        self.lines
            .iter()
            .map(|l| l.deviation)
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let deviation = if l.deviation.is_finite() {
                format!("{:.2e}", l.deviation)
            } else {
                "mismatch".into()
            };
            let _ = writeln!(
                out,
                "{} {}: expected {} got {} (deviation {}, tolerance {:.0e})",
                if l.passed() { "ok  " } else { "FAIL" },
                l.description,
                l.expected,
                l.actual,
                deviation,
                l.tolerance
            );
        }
        let _ = writeln!(
            out,
            "{} of {} values within tolerance; max deviation {:.3e}",
            self.lines.len() - self.failed(),
            self.lines.len(),
            self.max_deviation()
        );
        out
    }

    /// `Err(Mismatch)` when any value is out of tolerance.
    pub fn into_result(self) -> Result<Self> {
        match self.failed() {
            0 => Ok(self),
            failed => Err(FuseError::Mismatch {
                failed,
                total: self.lines.len(),
            }),
        }
    }
}

/// Checks every expected value of the scenario; an absent block yields an
/// empty check.
pub fn check_expected(exec: &Execution) -> Result<TableCheck> {
    let Some(block) = &exec.scenario.file.expected else {
        return Ok(TableCheck::default());
    };
    let mut lines = Vec::new();
    for (i, e) in block.values.iter().enumerate() {
        let actual = lookup(exec, e).map_err(|message| {
            FuseError::invalid(format!("expected value {}", i + 1), message)
        })?;
        let expected = match &e.value {
            ExpectedScalar::Number(x) => Actual::Number(*x),
            ExpectedScalar::Interval([lo, hi]) => Actual::Interval(*lo, *hi),
            ExpectedScalar::Text(s) => Actual::Text(s.clone()),
        };
        let deviation = deviation(&expected, &actual).ok_or_else(|| {
            FuseError::invalid(
                format!("expected value {}", i + 1),
                format!("`{}` yields {actual}, not comparable with the expected value", e.quantity),
            )
        })?;
        lines.push(CheckLine {
            description: describe(&exec.scenario, e),
            expected,
            actual,
            deviation,
            tolerance: e.tolerance.unwrap_or(block.tolerance),
        });
    }
    Ok(TableCheck { lines })
}

fn deviation(expected: &Actual, actual: &Actual) -> Option<f64> {
    match (expected, actual) {
        (Actual::Number(e), Actual::Number(a)) => Some((e - a).abs()),
        (Actual::Interval(el, eh), Actual::Interval(al, ah)) => {
            Some((el - al).abs().max((eh - ah).abs()))
        }
        (Actual::Text(e), Actual::Text(a)) => Some(if e == a { 0.0 } else { f64::INFINITY }),
        _ => None,
    }
}

fn describe(s: &Scenario, e: &ExpectedValue) -> String {
    let mut d = format!("{} {}", e.run, e.quantity);
    if let Some(src) = &e.source {
        let _ = write!(d, " {src}");
    }
    if let Some(t) = &e.tuple {
        let names: Vec<String> = t
            .iter()
            .map(|x| s.resolve(x).map(|x| s.set_name(&x)).unwrap_or_default())
            .collect();
        let _ = write!(d, " ({})", names.join(", "));
    }
    if let Some(x) = &e.set {
        if let Ok(x) = s.resolve(x) {
            let _ = write!(d, " {}", s.set_name(&x));
        }
    }
    if let Some(h) = &e.hypothesis {
        let _ = write!(d, " {h}");
    }
    if let Some(c) = &e.criterion {
        let _ = write!(d, " {c}");
    }
    d
}

type Lookup = std::result::Result<Actual, String>;

fn lookup(exec: &Execution, e: &ExpectedValue) -> Lookup {
    let s = &exec.scenario;
    if let Some(c) = exec.comparison(&e.run) {
        let r = &c.result;
        return Ok(match e.quantity.as_str() {
            "preferred" => Actual::Text(r.preferred.clone()),
            "most_precise" => Actual::Text(r.most_precise.clone()),
            "most_informative" => Actual::Text(r.most_informative.clone()),
            "criterion_conflict" => Actual::Text(r.criterion_conflict.to_string()),
            "tie" => Actual::Text(r.tie.to_string()),
            q => return Err(format!("unknown comparison quantity `{q}`")),
        });
    }
    let run = exec
        .run(&e.run)
        .ok_or_else(|| format!("unknown run or comparison `{}`", e.run))?;
    let set = match (&e.set, &e.hypothesis) {
        (Some(x), _) => Some(s.resolve(x).map_err(|err| err.to_string())?),
        (None, Some(h)) => Some(
            s.hypotheses
                .iter()
                .find(|x| &x.name == h)
                .map(|x| x.set)
                .ok_or_else(|| format!("unknown hypothesis `{h}`"))?,
        ),
        (None, None) => None,
    };
    let need_set = || set.ok_or_else(|| format!("`{}` needs a set or a hypothesis", e.quantity));
    match &run.outcome {
        Outcome::Precise(p) => {
            let q = e.quantity.as_str();
            let unavailable = || format!("run `{}` keeps mass on the empty set", run.name);
            Ok(Actual::Number(match q {
                "mass" => p.fused.mass(&need_set()?).map_err(|x| x.to_string())?,
                "input" => {
                    let src = e.source.as_ref().ok_or("`input` needs a source")?;
                    let (_, m) = p
                        .inputs
                        .iter()
                        .find(|(n, _)| n == src)
                        .ok_or_else(|| format!("source `{src}` is not part of the run"))?;
                    m.mass(&need_set()?).map_err(|x| x.to_string())?
                }
                "bel" | "pl" | "delta" => {
                    if !p.fused.is_normalized() {
                        return Err(unavailable());
                    }
                    let bi = p.fused.belief_interval(&need_set()?).map_err(|x| x.to_string())?;
                    match q {
                        "bel" => bi.bel,
                        "pl" => bi.pl,
                        _ => bi.delta,
                    }
                }
                "dsmp" => p
                    .dsmp
                    .as_ref()
                    .ok_or_else(unavailable)?
                    .probability_of(&need_set()?)
                    .map_err(|x| x.to_string())?,
                "betp" => p
                    .betp
                    .as_ref()
                    .ok_or_else(unavailable)?
                    .probability_of(&need_set()?)
                    .map_err(|x| x.to_string())?,
                "entropy" => p.dsmp.as_ref().ok_or_else(unavailable)?.entropy(),
                "pic" => p.dsmp.as_ref().ok_or_else(unavailable)?.pic(),
                "betp_entropy" => p.betp.as_ref().ok_or_else(unavailable)?.entropy(),
                "betp_pic" => p.betp.as_ref().ok_or_else(unavailable)?.pic(),
                "conflict" => p.fusion.total_conflict,
                "raw_total" => p.raw_total.ok_or("`raw_total` needs an importance pipeline")?,
                "product" | "share" => {
                    let entry = ledger_entry(s, &p.fusion.ledger, e)?;
                    if q == "product" {
                        entry.product
                    } else {
                        let x = need_set()?;
                        share_of(&entry.shares, &x)?
                    }
                }
                "decision" => {
                    let h = hypothesis_name(e)?;
                    let ev = p
                        .evaluations
                        .iter()
                        .find(|x| x.name == h)
                        .ok_or_else(unavailable)?;
                    return criterion(
                        e,
                        [ev.max_bel, ev.max_pl, ev.max_dsmp, ev.max_betp],
                    );
                }
                other => return Err(format!("unknown quantity `{other}` for a precise run")),
            }))
        }
        Outcome::Interval(p) => interval_lookup(s, run, p, e, set),
        Outcome::Qualitative(q) => {
            let (kind, mode) = match e.quantity.rsplit_once('_') {
                Some((k, "refined")) => (k, LabelMode::Refined),
                Some((k, "crude")) => (k, LabelMode::Crude),
                _ if e.quantity == "decision" => ("decision", LabelMode::Refined),
                _ => (e.quantity.as_str(), LabelMode::Refined),
            };
            let fusion = match mode {
                LabelMode::Refined => &q.refined,
                LabelMode::Crude => &q.crude,
            };
            match kind {
                "label" => {
                    let x = need_set()?;
                    Ok(Actual::Number(
                        fusion.label(&x).map(|l| l.index(mode)).unwrap_or(0.0),
                    ))
                }
                "value" => Ok(Actual::Number(
                    fusion.numeric.mass(&need_set()?).map_err(|x| x.to_string())?,
                )),
                "qdsmp" => {
                    let x = need_set()?;
                    Ok(Actual::Number(x.atoms().map(|i| q.dsmp[i].index(mode)).sum()))
                }
                "qdsmp_value" => {
                    let x = need_set()?;
                    Ok(Actual::Number(x.atoms().map(|i| q.dsmp[i].refined.value()).sum()))
                }
                "total" => Ok(Actual::Number(fusion.index_total())),
                "normalized" => Ok(Actual::Text(fusion.normalized.to_string())),
                "qbel" | "qpl" | "qbel_complement" | "qpl_complement" => {
                    let b = fusion.belief(&need_set()?).map_err(|x| x.to_string())?;
                    let top = fusion.set.top() as f64;
                    Ok(Actual::Number(match kind {
                        "qbel" => b.bel,
                        "qpl" => b.pl.min(top),
                        "qbel_complement" => b.complement_bel.max(0.0),
                        _ => b.complement_pl,
                    }))
                }
                "decision" => {
                    let h = hypothesis_name(e)?;
                    let ev = q
                        .evaluations
                        .iter()
                        .find(|x| x.name == h)
                        .ok_or_else(|| format!("unknown hypothesis `{h}`"))?;
                    criterion(e, [ev.max_bel, ev.max_pl, ev.max_dsmp, Decision::Undecidable])
                }
                other => Err(format!("unknown quantity `{other}` for a label run")),
            }
        }
    }
}

fn hypothesis_name(e: &ExpectedValue) -> std::result::Result<&str, String> {
    e.hypothesis
        .as_deref()
        .ok_or_else(|| "`decision` needs a hypothesis".to_string())
}

fn criterion(e: &ExpectedValue, d: [Decision; 4]) -> Lookup {
    let i = match e.criterion.as_deref() {
        Some("max_bel") => 0,
        Some("max_pl") => 1,
        Some("max_dsmp") => 2,
        Some("max_betp") => 3,
        Some(c) => return Err(format!("unknown criterion `{c}`")),
        None => return Err("`decision` needs a criterion".into()),
    };
    Ok(Actual::Text(d[i].as_str().into()))
}

fn ledger_entry<'a, S>(
    s: &Scenario,
    ledger: &'a [evifuse_core::ConflictLedgerEntry<S>],
    e: &ExpectedValue,
) -> std::result::Result<&'a evifuse_core::ConflictLedgerEntry<S>, String> {
    let tuple = e
        .tuple
        .as_ref()
        .ok_or_else(|| format!("`{}` needs a tuple", e.quantity))?
        .iter()
        .map(|x| s.resolve(x).map_err(|err| err.to_string()))
        .collect::<std::result::Result<Vec<Subset>, _>>()?;
    ledger
        .iter()
        .find(|x| x.tuple == tuple)
        .ok_or_else(|| "no conflicting product for this tuple".to_string())
}

fn share_of<S: Clone>(shares: &[(Subset, S)], x: &Subset) -> std::result::Result<S, String> {
    shares
        .iter()
        .find(|(y, _)| y == x)
        .map(|(_, v)| v.clone())
        .ok_or_else(|| "the set receives no share of this product".to_string())
}

fn interval_lookup(
    s: &Scenario,
    run: &Run,
    p: &crate::runner::IntervalOutcome,
    e: &ExpectedValue,
    set: Option<Subset>,
) -> Lookup {
    let need_set = || set.ok_or_else(|| format!("`{}` needs a set or a hypothesis", e.quantity));
    let unavailable = || format!("run `{}` keeps mass on the empty set", run.name);
    let iv = |x: IntervalMass| Actual::Interval(x.lo(), x.hi());
    let dsmp_of = |x: &Subset| -> std::result::Result<IntervalMass, String> {
        let d = p.dsmp.as_ref().ok_or_else(unavailable)?;
        Ok(x.atoms().fold(IntervalMass::point(0.0).expect("zero"), |acc, i| acc.iadd(&d[i])))
    };
    Ok(match e.quantity.as_str() {
        "mass" => iv(p.fusion.fused.mass(&need_set()?).map_err(|x| x.to_string())?),
        "bel" | "pl" => {
            let (bel, pl) = evifuse_core::interval_bel_pl(&p.fusion.fused, &need_set()?)
                .map_err(|x| x.to_string())?;
            iv(if e.quantity == "bel" { bel } else { pl })
        }
        "dsmp" => iv(dsmp_of(&need_set()?)?),
        "dsmp_reported" => iv(dsmp_of(&need_set()?)?.clamp_unit()),
        "conflict" => iv(p.fusion.total_conflict),
        "product" => iv(ledger_entry(s, &p.fusion.ledger, e)?.product),
        "share" => {
            let entry = ledger_entry(s, &p.fusion.ledger, e)?;
            iv(share_of(&entry.shares, &need_set()?)?)
        }
        "probability" | "complement" => {
            let h = e
                .hypothesis
                .as_deref()
                .ok_or_else(|| format!("`{}` needs a hypothesis", e.quantity))?;
            let ev = p
                .evaluations
                .iter()
                .find(|x| x.name == h)
                .ok_or_else(unavailable)?;
            iv(if e.quantity == "probability" {
                ev.probability
            } else {
                ev.complement_probability
            })
        }
        "decision" => {
            let h = hypothesis_name(e)?;
            let ev = p
                .evaluations
                .iter()
                .find(|x| x.name == h)
                .ok_or_else(unavailable)?;
            return criterion(e, [ev.max_bel, ev.max_pl, ev.max_dsmp, Decision::Undecidable]);
        }
        other => return Err(format!("unknown quantity `{other}` for an interval run")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::runner::{execute, RunOptions};
    use crate::scenario::validate;

    fn execution(edit: impl FnOnce(&mut crate::scenario::ScenarioFile)) -> Execution {
        let mut file = bundled("vbied_example1").unwrap().unwrap().file;
        edit(&mut file);
        execute(&validate(file).unwrap(), &RunOptions::default()).unwrap()
    }

    #[test]
    fn bundled_values_pass() {
        let check = check_expected(&execution(|_| {})).unwrap();
        assert_eq!(check.failed(), 0);
        assert!(check.max_deviation() < 1e-4);
        assert!(check.render().contains("71 of 71"));
    }

    #[test]
    fn deviations_beyond_tolerance_fail() {
        let check = check_expected(&execution(|f| {
            let e = f.expected.as_mut().unwrap();
            e.values[0].value = ExpectedScalar::Number(0.2);
            e.values[1].value = ExpectedScalar::Number(0.24385);
            e.values[1].tolerance = Some(1e-5);
        }))
        .unwrap();
        assert_eq!(check.failed(), 2);
        assert!(matches!(
            check.into_result(),
            Err(FuseError::Mismatch { failed: 2, total: 71 })
        ));
    }

    #[test]
    fn text_values_must_match_exactly() {
        let check = check_expected(&execution(|f| {
            let e = f.expected.as_mut().unwrap();
            let i = e.values.iter().position(|v| v.quantity == "decision").unwrap();
            e.values[i].value = ExpectedScalar::Text("reject".into());
        }))
        .unwrap();
        let bad: Vec<_> = check.lines.iter().filter(|l| !l.passed()).collect();
        assert_eq!(bad.len(), 1);
        assert!(bad[0].deviation.is_infinite());
    }

    #[test]
    fn unknown_quantities_are_validation_errors() {
        let mut file = bundled("vbied_example1").unwrap().unwrap().file;
        file.expected.as_mut().unwrap().values[0].quantity = "weight".into();
        let exec = execute(&validate(file).unwrap(), &RunOptions::default()).unwrap();
        let err = check_expected(&exec).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("weight"));
    }

    #[test]
    fn interval_deviation_is_the_wider_endpoint_gap() {
        let d = deviation(&Actual::Interval(0.1, 0.5), &Actual::Interval(0.12, 0.45)).unwrap();
        assert!((d - 0.05).abs() < 1e-15);
        assert!(deviation(&Actual::Number(0.1), &Actual::Interval(0.1, 0.1)).is_none());
    }
}
