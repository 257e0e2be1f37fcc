//! Executes the pipelines of a scenario.

use evifuse_core::{
    betp, compare_subsystems, dsmp, evaluate, evaluate_interval, fuse, importance_fuse,
    interval_fuse, qualitative_dsmp, qualitative_fuse, reliability_discount, Decision,
    FusionOptions, FusionResult, HypothesisEvaluation, IntervalFusion, IntervalHypothesisEvaluation,
    IntervalMass, IntervalMassFunction, LabelMass, LabelMode, MassFunction, ProbabilityDistribution,
    QualitativeBelief, QualitativeFusion, QualitativeSource, SubsystemComparison,
};

use crate::error::{Context, FuseError, Result};
use crate::scenario::{validate, DiscountMode, RuleName, Scenario, SourceMasses};

/// Command-line overrides applied before running.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    /// Runs every pipeline with this rule only.
    pub rule: Option<RuleName>,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct PreciseOutcome {
    /// Sources as fused, after discounting.
    pub inputs: Vec<(String, MassFunction)>,
    /// Fusion of the inputs; for importance pipelines this is the fusion of
    /// the sub-normal sources before rescaling.
    pub fusion: FusionResult,
    pub fused: MassFunction,
    /// Total mass before rescaling (importance pipelines only).
    pub raw_total: Option<f64>,
    /// Transforms and evaluations are absent when `fused` keeps mass on `∅`.
    pub dsmp: Option<ProbabilityDistribution>,
    pub betp: Option<ProbabilityDistribution>,
    pub evaluations: Vec<HypothesisEvaluation>,
}

#[derive(Debug, Clone)]
pub struct IntervalOutcome {
    pub fusion: IntervalFusion,
    /// Unclamped DSmP of every atom.
    pub dsmp: Option<Vec<IntervalMass>>,
    pub evaluations: Vec<IntervalHypothesisEvaluation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualitativeEvaluation {
    pub name: String,
    pub refined: QualitativeBelief,
    pub crude: QualitativeBelief,
    /// qDSmP of the hypothesis as a refined label index.
    pub dsmp: f64,
    pub max_bel: Decision,
    pub max_pl: Decision,
    pub max_dsmp: Decision,
}

#[derive(Debug, Clone)]
pub struct QualitativeOutcome {
    pub refined: QualitativeFusion,
    pub crude: QualitativeFusion,
    pub dsmp: Vec<LabelMass>,
    pub evaluations: Vec<QualitativeEvaluation>,
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Precise(PreciseOutcome),
    Interval(IntervalOutcome),
    Qualitative(QualitativeOutcome),
}

#[derive(Debug, Clone)]
pub struct Run {
    /// `<pipeline>/<rule>`.
    pub name: String,
    pub pipeline: String,
    pub rule: RuleName,
    pub discount: DiscountMode,
    pub sources: Vec<String>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub name: String,
    pub result: SubsystemComparison,
}

#[derive(Debug, Clone)]
pub struct Execution {
    pub scenario: Scenario,
    pub runs: Vec<Run>,
    pub comparisons: Vec<Comparison>,
}

impl Execution {
    pub fn run(&self, name: &str) -> Option<&Run> {
        self.runs.iter().find(|r| r.name == name)
    }

    pub fn comparison(&self, name: &str) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.name == name)
    }
}

/// Applies the overrides and re-validates the scenario.
pub fn with_options(scenario: &Scenario, options: &RunOptions) -> Result<Scenario> {
    if options.rule.is_none() && options.epsilon.is_none() {
        return Ok(scenario.clone());
    }
    let mut file = scenario.file.clone();
    if let Some(eps) = options.epsilon {
        file.epsilon = eps;
    }
    if let Some(rule) = options.rule {
        for p in &mut file.pipelines {
            p.rules = vec![rule];
        }
        for c in &mut file.comparisons {
            for r in &mut c.runs {
                if let Some((pipeline, _)) = r.rsplit_once('/') {
                    *r = format!("{pipeline}/{}", rule.as_str());
                }
            }
        }
        // Expected values refer to the original runs.
        file.expected = None;
        if rule == RuleName::Conj {
            // Comparisons need normalized results.
            file.comparisons.clear();
        }
    }
    validate(file)
}

pub fn execute(scenario: &Scenario, options: &RunOptions) -> Result<Execution> {
    let scenario = with_options(scenario, options)?;
    let eps = scenario.file.epsilon;
    let mut runs = Vec::new();
    for p in &scenario.file.pipelines {
        let sources: Vec<_> = p
            .sources
            .iter()
            .map(|n| scenario.source(n).expect("validated reference"))
            .collect();
        for &rule in &p.rules {
            let name = format!("{}/{}", p.name, rule.as_str());
            let context = || format!("run `{name}`");
            let labels = sources.iter().any(|s| matches!(s.masses, SourceMasses::Qualitative(_)));
            let intervals = sources.iter().any(|s| matches!(s.masses, SourceMasses::Interval(_)));
            let outcome = if labels {
                let inputs: Vec<QualitativeSource> = sources
                    .iter()
                    .filter_map(|s| match &s.masses {
                        SourceMasses::Qualitative(q) => Some(q.clone()),
                        _ => None,
                    })
                    .collect();
                Outcome::Qualitative(run_qualitative(&scenario, &inputs, rule, eps).computing(context)?)
            } else if intervals {
                let inputs: Vec<IntervalMassFunction> = sources
                    .iter()
                    .filter_map(|s| match &s.masses {
                        SourceMasses::Interval(m) => Some(m.clone()),
                        SourceMasses::Precise(m) => Some(IntervalMassFunction::from_precise(m)),
                        SourceMasses::Qualitative(_) => None,
                    })
                    .collect();
                Outcome::Interval(run_interval(&scenario, &inputs, rule, eps).computing(context)?)
            } else {
                let inputs: Vec<_> = sources
                    .iter()
                    .filter_map(|s| match &s.masses {
                        SourceMasses::Precise(m) => Some((s.name.clone(), m.clone(), s.alpha, s.beta)),
                        _ => None,
                    })
                    .collect();
                Outcome::Precise(
                    run_precise(&scenario, &inputs, p.discount, rule, eps).computing(context)?,
                )
            };
            runs.push(Run {
                name,
                pipeline: p.name.clone(),
                rule,
                discount: p.discount,
                sources: p.sources.clone(),
                outcome,
            });
        }
    }
    let comparisons = compare(&scenario, &runs, eps)?;
    Ok(Execution {
        scenario,
        runs,
        comparisons,
    })
}

fn run_precise(
    scenario: &Scenario,
    sources: &[(String, MassFunction, Option<f64>, Option<f64>)],
    discount: DiscountMode,
    rule: RuleName,
    eps: f64,
) -> evifuse_core::Result<PreciseOutcome> {
    let options = FusionOptions::default();
    let (inputs, fusion, fused, raw_total) = match discount {
        DiscountMode::None | DiscountMode::Reliability => {
            let inputs = sources
                .iter()
                .map(|(n, m, alpha, _)| match (discount, alpha) {
                    (DiscountMode::Reliability, Some(a)) => {
                        reliability_discount(m, *a).map(|d| (n.clone(), d))
                    }
                    _ => Ok((n.clone(), m.clone())),
                })
                .collect::<evifuse_core::Result<Vec<_>>>()?;
            let masses: Vec<MassFunction> = inputs.iter().map(|(_, m)| m.clone()).collect();
            let fusion = fuse(rule.rule(), &masses, &options)?;
            let fused = fusion.fused.clone();
            (inputs, fusion, fused, None)
        }
        DiscountMode::Importance => {
            let masses: Vec<MassFunction> = sources.iter().map(|(_, m, _, _)| m.clone()).collect();
            let betas: Vec<f64> = sources.iter().map(|(_, _, _, b)| b.unwrap_or(1.0)).collect();
            let inputs = sources
                .iter()
                .zip(&betas)
                .map(|((n, m, _, _), &b)| evifuse_core::importance_discount(m, b).map(|d| (n.clone(), d)))
                .collect::<evifuse_core::Result<Vec<_>>>()?;
            let r = importance_fuse(&masses, &betas, rule.rule(), &options)?;
            (inputs, r.raw, r.fused, Some(r.raw_total))
        }
    };
    let (dsmp_p, betp_p, evaluations) = if fused.is_normalized() && fused.empty_mass() == 0.0 {
        (
            Some(dsmp(&fused, eps)?),
            Some(betp(&fused)?),
            evaluate(&fused, &scenario.hypotheses, eps)?,
        )
    } else {
        (None, None, Vec::new())
    };
    Ok(PreciseOutcome {
        inputs,
        fusion,
        fused,
        raw_total,
        dsmp: dsmp_p,
        betp: betp_p,
        evaluations,
    })
}

fn run_interval(
    scenario: &Scenario,
    sources: &[IntervalMassFunction],
    rule: RuleName,
    eps: f64,
) -> evifuse_core::Result<IntervalOutcome> {
    let fusion = interval_fuse(rule.rule(), sources, &FusionOptions::default())?;
    let conflict_free = fusion
        .fused
        .mass(&scenario.frame.empty_set())
        .map(|m| m.hi() == 0.0)?;
    let (dsmp_p, evaluations) = if conflict_free {
        (
            Some(evifuse_core::interval_dsmp(&fusion.fused, eps)?),
            evaluate_interval(&fusion.fused, &scenario.hypotheses, eps)?,
        )
    } else {
        (None, Vec::new())
    };
    Ok(IntervalOutcome {
        fusion,
        dsmp: dsmp_p,
        evaluations,
    })
}

fn run_qualitative(
    scenario: &Scenario,
    sources: &[QualitativeSource],
    rule: RuleName,
    eps: f64,
) -> evifuse_core::Result<QualitativeOutcome> {
    let refined = qualitative_fuse(sources, rule.rule(), LabelMode::Refined)?;
    let crude = qualitative_fuse(sources, rule.rule(), LabelMode::Crude)?;
    let dsmp_labels = qualitative_dsmp(&refined, eps)?;
    let half = refined.set.top() as f64 / 2.0;
    let evaluations = scenario
        .hypotheses
        .iter()
        .map(|h| {
            let r = refined.belief(&h.set)?;
            let c = crude.belief(&h.set)?;
            let p: f64 = h.set.atoms().map(|i| dsmp_labels[i].refined.index()).sum();
            Ok(QualitativeEvaluation {
                name: h.name.clone(),
                refined: r,
                crude: c,
                dsmp: p,
                max_bel: Decision::compare(r.bel, r.complement_bel),
                max_pl: Decision::compare(r.pl, r.complement_pl),
                max_dsmp: Decision::compare(p, half),
            })
        })
        .collect::<evifuse_core::Result<Vec<_>>>()?;
    Ok(QualitativeOutcome {
        refined,
        crude,
        dsmp: dsmp_labels,
        evaluations,
    })
}

fn compare(scenario: &Scenario, runs: &[Run], eps: f64) -> Result<Vec<Comparison>> {
    let mut out = Vec::new();
    for c in &scenario.file.comparisons {
        let context = format!("comparison `{}`", c.name);
        let mut results = Vec::new();
        for name in &c.runs {
            let run = runs.iter().find(|r| &r.name == name).expect("validated reference");
            match &run.outcome {
                Outcome::Precise(p) if p.dsmp.is_some() => results.push((name.clone(), p.fused.clone())),
                _ => {
                    return Err(FuseError::invalid(
                        &context,
                        format!("run `{name}` has no normalized precise result"),
                    ))
                }
            }
        }
        let key = scenario
            .hypotheses
            .iter()
            .position(|h| h.name == c.key)
            .expect("validated reference");
        let result = compare_subsystems(&results, &scenario.hypotheses, key, eps)
            .computing(|| context.clone())?;
        out.push(Comparison {
            name: c.name.clone(),
            result,
        });
    }
    Ok(out)
}
