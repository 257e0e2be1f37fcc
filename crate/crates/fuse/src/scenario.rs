//! Scenario files: declaration types, parsing and validation.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use evifuse_core::{
    DecisionHypothesis, Frame, IntervalMass, IntervalMassFunction, LabelSet, MassFunction,
    QualitativeSource, Subset, DEFAULT_EPSILON,
};
use serde::{Deserialize, Serialize};

use crate::error::{Context, FuseError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// Marginal frames, in declaration order.
    pub frames: Vec<FrameDecl>,
    /// Factors of the analysis frame, first factor varying fastest. When
    /// absent the scenario must declare exactly one frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<Vec<String>>,
    /// Number of interior labels when masses are given as `L<i>` tokens.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_set: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sets: BTreeMap<String, SetExpr>,
    pub sources: Vec<SourceDecl>,
    pub pipelines: Vec<PipelineDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypotheses: Vec<HypothesisDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub comparisons: Vec<ComparisonDecl>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedBlock>,
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDecl {
    pub name: String,
    pub atoms: Vec<String>,
}

/// Subset expression.
///
/// A string is a `+`-separated union of terms, each term being `all`,
/// `empty`, a named set, a positional alias `theta<k>` (1-based) or an atom
/// label. A list is the union of its items; `{"not": e}` the complement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetExpr {
    Terms(String),
    Union(Vec<SetExpr>),
    Not { not: Box<SetExpr> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrameRef {
    One(String),
    Product(Vec<String>),
}

/// A mass written as a number, an interval `[lo, hi]` or a label token.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MassValue {
    Number(f64),
    Interval([f64; 2]),
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceDecl {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// Frame the masses are written on when it is not the analysis frame;
    /// the source is then vacuously extended.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameRef>,
    pub masses: BTreeMap<String, MassValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleName {
    Conj,
    Pcr5,
    Pcr6,
}

impl RuleName {
    pub fn rule(self) -> evifuse_core::FusionRule {
        match self {
            RuleName::Conj => evifuse_core::FusionRule::Conjunctive,
            RuleName::Pcr5 => evifuse_core::FusionRule::Pcr5,
            RuleName::Pcr6 => evifuse_core::FusionRule::Pcr6,
        }
    }

    pub fn as_str(self) -> &'static str {
        self.rule().name()
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "conj" => Some(RuleName::Conj),
            "pcr5" => Some(RuleName::Pcr5),
            "pcr6" => Some(RuleName::Pcr6),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscountMode {
    #[default]
    None,
    Reliability,
    Importance,
}

impl DiscountMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiscountMode::None => "none",
            DiscountMode::Reliability => "reliability",
            DiscountMode::Importance => "importance",
        }
    }

    fn is_none(&self) -> bool {
        *self == DiscountMode::None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineDecl {
    pub name: String,
    pub sources: Vec<String>,
    pub rules: Vec<RuleName>,
    #[serde(default, skip_serializing_if = "DiscountMode::is_none")]
    pub discount: DiscountMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisDecl {
    pub name: String,
    pub set: SetExpr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonDecl {
    pub name: String,
    /// Run names `<pipeline>/<rule>`.
    pub runs: Vec<String>,
    /// Hypothesis whose imprecision ranks the runs.
    pub key: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedBlock {
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub values: Vec<ExpectedValue>,
}

fn default_tolerance() -> f64 {
    1e-4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedValue {
    /// Run name, or comparison name for `preferred`.
    pub run: String,
    pub quantity: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<SetExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<String>,
    /// Input source, for discounted input masses.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    /// Focal sets of one conflicting tuple, one per source.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuple: Option<Vec<SetExpr>>,
    pub value: ExpectedScalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExpectedScalar {
    Number(f64),
    Interval([f64; 2]),
    Text(String),
}

/// Masses of one validated source, already on the analysis frame.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceMasses {
    Precise(MassFunction),
    Interval(IntervalMassFunction),
    Qualitative(QualitativeSource),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Source {
    pub name: String,
    pub masses: SourceMasses,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

/// Validated scenario with every reference resolved.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub frame: Frame,
    pub label_set: Option<LabelSet>,
    pub sets: BTreeMap<String, Subset>,
    pub sources: Vec<Source>,
    pub hypotheses: Vec<DecisionHypothesis>,
}

impl Scenario {
    pub fn source(&self, name: &str) -> Option<&Source> {
        self.sources.iter().find(|s| s.name == name)
    }

    /// Evaluates a set expression on the analysis frame.
    pub fn resolve(&self, expr: &SetExpr) -> Result<Subset> {
        let resolver = Resolver {
            frame: &self.frame,
            named: Some(&self.sets),
        };
        resolver.eval(expr, "expression")
    }

    /// Name of a subset for display: a declared set name when one matches,
    /// otherwise the union of its positional aliases.
    pub fn set_name(&self, s: &Subset) -> String {
        if s.is_full() {
            if let Some((n, _)) = self.sets.iter().find(|(_, v)| v.is_full()) {
                return n.clone();
            }
            return "all".into();
        }
        if s.is_empty() {
            return "empty".into();
        }
        if let Some((n, _)) = self.sets.iter().find(|(_, v)| *v == s) {
            return n.clone();
        }
        s.atoms()
            .map(|i| format!("theta{}", i + 1))
            .collect::<Vec<_>>()
            .join("+")
    }

    /// Canonical JSON form of the scenario declaration.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.file).expect("scenario declarations serialize")
    }
}

pub fn parse_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| FuseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario_str(&text)
}

pub fn parse_scenario_str(text: &str) -> Result<Scenario> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| FuseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    validate(file)
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

struct Resolver<'a> {
    frame: &'a Frame,
    named: Option<&'a BTreeMap<String, Subset>>,
}

impl Resolver<'_> {
    fn eval(&self, expr: &SetExpr, context: &str) -> Result<Subset> {
        match expr {
            SetExpr::Terms(s) => {
                let mut acc = self.frame.empty_set();
                for term in s.split('+') {
                    let t = self.term(term.trim(), context)?;
                    acc = acc.union(&t).expect("same frame");
                }
                Ok(acc)
            }
            SetExpr::Union(items) => {
                let mut acc = self.frame.empty_set();
                for item in items {
                    acc = acc.union(&self.eval(item, context)?).expect("same frame");
                }
                Ok(acc)
            }
            SetExpr::Not { not } => Ok(self.eval(not, context)?.complement()),
        }
    }

    fn term(&self, term: &str, context: &str) -> Result<Subset> {
        match term {
            "all" => return Ok(self.frame.full()),
            "empty" => return Ok(self.frame.empty_set()),
            _ => {}
        }
        if let Some(s) = self.named.and_then(|n| n.get(term)) {
            return Ok(*s);
        }
        if let Some(k) = term
            .strip_prefix("theta")
            .and_then(|d| d.parse::<usize>().ok())
        {
            if k >= 1 && k <= self.frame.len() {
                return Ok(self.frame.singleton(k - 1).expect("in range"));
            }
            return Err(FuseError::invalid(
                context,
                format!("`{term}` is outside a frame of {} atoms", self.frame.len()),
            ));
        }
        match self.frame.index_of(term) {
            Some(i) => Ok(self.frame.singleton(i).expect("in range")),
            None => Err(FuseError::invalid(
                context,
                format!("unknown set or atom `{term}`"),
            )),
        }
    }
}

pub(crate) fn validate(file: ScenarioFile) -> Result<Scenario> {
    if !(file.epsilon.is_finite() && file.epsilon >= 0.0) {
        return Err(FuseError::invalid("epsilon", "must be a non-negative number"));
    }
    let mut marginals: BTreeMap<&str, Frame> = BTreeMap::new();
    for f in &file.frames {
        let frame = Frame::new(f.atoms.iter().map(String::as_str))
            .invalid_in(|| format!("frame `{}`", f.name))?;
        if marginals.insert(f.name.as_str(), frame).is_some() {
            return Err(FuseError::invalid("frames", format!("duplicate frame `{}`", f.name)));
        }
    }
    let lookup = |name: &str, context: &str| {
        marginals
            .get(name)
            .cloned()
            .ok_or_else(|| FuseError::invalid(context, format!("unknown frame `{name}`")))
    };
    let frame = match &file.product {
        Some(names) => {
            let factors = names
                .iter()
                .map(|n| lookup(n, "product"))
                .collect::<Result<Vec<_>>>()?;
            Frame::product(&factors).invalid_in(|| "product".into())?
        }
        None if file.frames.len() == 1 => marginals.values().next().cloned().expect("one frame"),
        None => {
            return Err(FuseError::invalid(
                "frames",
                "several frames declared without a `product`",
            ))
        }
    };
    let label_set = file
        .label_set
        .map(LabelSet::new)
        .transpose()
        .invalid_in(|| "label_set".into())?;

    let sets = resolve_named_sets(&file.sets, &frame)?;
    let resolver = Resolver {
        frame: &frame,
        named: Some(&sets),
    };

    let mut sources = Vec::new();
    let mut seen = BTreeSet::new();
    for decl in &file.sources {
        if !seen.insert(decl.name.as_str()) {
            return Err(FuseError::invalid(
                "sources",
                format!("duplicate source `{}`", decl.name),
            ));
        }
        let context = format!("source `{}`", decl.name);
        let local = match &decl.frame {
            None => None,
            Some(FrameRef::One(n)) => Some(lookup(n, &context)?),
            Some(FrameRef::Product(ns)) => {
                let factors = ns
                    .iter()
                    .map(|n| lookup(n, &context))
                    .collect::<Result<Vec<_>>>()?;
                Some(Frame::product(&factors).invalid_in(|| context.clone())?)
            }
        };
        let masses = source_masses(decl, &frame, local.as_ref(), &resolver, label_set, &context)?;
        for (factor, name) in [(decl.alpha, "alpha"), (decl.beta, "beta")] {
            if let Some(x) = factor {
                if !(0.0..=1.0).contains(&x) {
                    return Err(FuseError::invalid(&context, format!("{name} {x} is outside [0, 1]")));
                }
            }
        }
        sources.push(Source {
            name: decl.name.clone(),
            masses,
            alpha: decl.alpha,
            beta: decl.beta,
        });
    }

    let mut hypotheses = Vec::new();
    for h in &file.hypotheses {
        let context = format!("hypothesis `{}`", h.name);
        let set = resolver.eval(&h.set, &context)?;
        let action = h.action.clone().unwrap_or_else(|| "accept".into());
        hypotheses.push(
            DecisionHypothesis::new(&frame, h.name.clone(), set, action)
                .invalid_in(|| context.clone())?,
        );
    }

    check_pipelines(&file, &sources)?;
    let scenario = Scenario {
        file,
        frame,
        label_set,
        sets,
        sources,
        hypotheses,
    };
    check_comparisons(&scenario)?;
    if let Some(expected) = &scenario.file.expected {
        for (i, e) in expected.values.iter().enumerate() {
            let context = format!("expected value {}", i + 1);
            for s in e.set.iter().chain(e.tuple.iter().flatten()) {
                resolver_for(&scenario).eval(s, &context)?;
            }
            let tolerance = e.tolerance.unwrap_or(expected.tolerance);
            if tolerance.is_nan() || tolerance < 0.0 {
                return Err(FuseError::invalid(context, "tolerance must be non-negative"));
            }
        }
    }
    Ok(scenario)
}

fn resolver_for(s: &Scenario) -> Resolver<'_> {
    Resolver {
        frame: &s.frame,
        named: Some(&s.sets),
    }
}

/// Named sets may refer to each other; cycles are rejected.
fn resolve_named_sets(
    decls: &BTreeMap<String, SetExpr>,
    frame: &Frame,
) -> Result<BTreeMap<String, Subset>> {
    fn references(expr: &SetExpr, out: &mut Vec<String>) {
        match expr {
            SetExpr::Terms(s) => out.extend(s.split('+').map(|t| t.trim().to_string())),
            SetExpr::Union(items) => items.iter().for_each(|i| references(i, out)),
            SetExpr::Not { not } => references(not, out),
        }
    }
    let mut done: BTreeMap<String, Subset> = BTreeMap::new();
    let mut visiting: Vec<String> = Vec::new();

    fn visit(
        name: &str,
        decls: &BTreeMap<String, SetExpr>,
        frame: &Frame,
        done: &mut BTreeMap<String, Subset>,
        visiting: &mut Vec<String>,
    ) -> Result<()> {
        if done.contains_key(name) {
            return Ok(());
        }
        if visiting.iter().any(|v| v == name) {
            return Err(FuseError::invalid(
                format!("set `{name}`"),
                "definition refers to itself",
            ));
        }
        visiting.push(name.to_string());
        let expr = &decls[name];
        let mut refs = Vec::new();
        references(expr, &mut refs);
        for r in refs.iter().filter(|r| decls.contains_key(*r)) {
            visit(r, decls, frame, done, visiting)?;
        }
        let value = Resolver {
            frame,
            named: Some(done),
        }
        .eval(expr, &format!("set `{name}`"))?;
        visiting.pop();
        done.insert(name.to_string(), value);
        Ok(())
    }

    for name in decls.keys() {
        if name.contains('+') || name.starts_with("theta") || frame.index_of(name).is_some() {
            return Err(FuseError::invalid(
                format!("set `{name}`"),
                "name clashes with an atom, an alias or the `+` separator",
            ));
        }
        visit(name, decls, frame, &mut done, &mut visiting)?;
    }
    Ok(done)
}

fn source_masses(
    decl: &SourceDecl,
    frame: &Frame,
    local: Option<&Frame>,
    global: &Resolver<'_>,
    label_set: Option<LabelSet>,
    context: &str,
) -> Result<SourceMasses> {
    let local_resolver = local.map(|f| Resolver {
        frame: f,
        named: None,
    });
    let subset = |key: &str| -> Result<Subset> {
        match (&local_resolver, local) {
            (Some(r), Some(f)) => {
                let s = r.eval(&SetExpr::Terms(key.to_string()), context)?;
                frame.cylinder_extend(f, &s).invalid_in(|| context.to_string())
            }
            _ => global.eval(&SetExpr::Terms(key.to_string()), context),
        }
    };
    if decl.masses.is_empty() {
        return Err(FuseError::invalid(context, "no masses"));
    }
    let labels = decl
        .masses
        .values()
        .filter(|v| matches!(v, MassValue::Label(_)))
        .count();
    if labels > 0 {
        if labels != decl.masses.len() {
            return Err(FuseError::invalid(context, "label masses cannot be mixed with numbers"));
        }
        let set = label_set
            .ok_or_else(|| FuseError::invalid(context, "label masses need a `label_set`"))?;
        let mut entries = Vec::new();
        for (k, v) in &decl.masses {
            let MassValue::Label(token) = v else { unreachable!() };
            let index = set.parse(token).invalid_in(|| context.to_string())?;
            entries.push((subset(k)?, index));
        }
        return QualitativeSource::new(frame, set, entries)
            .invalid_in(|| context.to_string())
            .map(SourceMasses::Qualitative);
    }
    let interval = decl
        .masses
        .values()
        .any(|v| matches!(v, MassValue::Interval(_)));
    if interval {
        let mut entries = Vec::new();
        for (k, v) in &decl.masses {
            let m = match v {
                MassValue::Number(x) => IntervalMass::point(*x),
                MassValue::Interval([lo, hi]) => IntervalMass::new(*lo, *hi),
                MassValue::Label(_) => unreachable!(),
            }
            .invalid_in(|| context.to_string())?;
            entries.push((subset(k)?, m));
        }
        return IntervalMassFunction::new(frame, entries)
            .invalid_in(|| context.to_string())
            .map(SourceMasses::Interval);
    }
    let mut entries = Vec::new();
    for (k, v) in &decl.masses {
        let MassValue::Number(x) = v else { unreachable!() };
        entries.push((subset(k)?, *x));
    }
    MassFunction::new(frame, entries)
        .invalid_in(|| context.to_string())
        .map(SourceMasses::Precise)
}

fn check_pipelines(file: &ScenarioFile, sources: &[Source]) -> Result<()> {
    if file.pipelines.is_empty() {
        return Err(FuseError::invalid("pipelines", "at least one pipeline is required"));
    }
    let mut names = BTreeSet::new();
    for p in &file.pipelines {
        let context = format!("pipeline `{}`", p.name);
        if !names.insert(p.name.as_str()) {
            return Err(FuseError::invalid(context, "duplicate pipeline name"));
        }
        if p.rules.is_empty() {
            return Err(FuseError::invalid(context, "no rules"));
        }
        if p.sources.len() < 2 {
            return Err(FuseError::invalid(context, "fusion needs at least two sources"));
        }
        let mut kinds = BTreeSet::new();
        for name in &p.sources {
            let s = sources
                .iter()
                .find(|s| &s.name == name)
                .ok_or_else(|| FuseError::invalid(&context, format!("unknown source `{name}`")))?;
            kinds.insert(match s.masses {
                SourceMasses::Precise(_) => "precise",
                SourceMasses::Interval(_) => "interval",
                SourceMasses::Qualitative(_) => "label",
            });
            match p.discount {
                DiscountMode::None => {}
                DiscountMode::Reliability if s.alpha.is_none() => {
                    return Err(FuseError::invalid(&context, format!("source `{name}` has no alpha")))
                }
                DiscountMode::Importance if s.beta.is_none() => {
                    return Err(FuseError::invalid(&context, format!("source `{name}` has no beta")))
                }
                _ => {}
            }
        }
        if kinds.contains("label") && kinds.len() > 1 {
            return Err(FuseError::invalid(&context, "label sources cannot be mixed with numeric ones"));
        }
        if p.discount != DiscountMode::None && kinds.iter().any(|k| *k != "precise") {
            return Err(FuseError::invalid(&context, "discounting needs precise sources"));
        }
        if p.discount == DiscountMode::Importance && p.rules.contains(&RuleName::Conj) {
            return Err(FuseError::invalid(&context, "importance fusion needs pcr5 or pcr6"));
        }
    }
    Ok(())
}

/// Names of all runs, `<pipeline>/<rule>`.
pub fn run_names(file: &ScenarioFile) -> Vec<String> {
    file.pipelines
        .iter()
        .flat_map(|p| p.rules.iter().map(move |r| format!("{}/{}", p.name, r.as_str())))
        .collect()
}

fn check_comparisons(s: &Scenario) -> Result<()> {
    let runs = run_names(&s.file);
    for c in &s.file.comparisons {
        let context = format!("comparison `{}`", c.name);
        if c.runs.len() < 2 {
            return Err(FuseError::invalid(context, "needs at least two runs"));
        }
        for r in &c.runs {
            if !runs.contains(r) {
                return Err(FuseError::invalid(&context, format!("unknown run `{r}`")));
            }
        }
        if !s.hypotheses.iter().any(|h| h.name == c.key) {
            return Err(FuseError::invalid(&context, format!("unknown hypothesis `{}`", c.key)));
        }
    }
    Ok(())
}
