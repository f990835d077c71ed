//! JSM hypotheses from positive and negative examples, and classification of
//! undetermined examples.

use std::fmt;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{FcaError, Result};
use crate::lattice::close_by_one;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExampleClass {
    Positive,
    Negative,
    #[serde(rename = "tau")]
    Undetermined,
}

impl ExampleClass {
    pub fn parse(token: &str) -> Option<ExampleClass> {
        match token.trim() {
            "+" => Some(ExampleClass::Positive),
            "-" => Some(ExampleClass::Negative),
            t if t.eq_ignore_ascii_case("tau") => Some(ExampleClass::Undetermined),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    fn class(self) -> ExampleClass {
        match self {
            Polarity::Positive => ExampleClass::Positive,
            Polarity::Negative => ExampleClass::Negative,
        }
    }

    fn opposite(self) -> ExampleClass {
        match self {
            Polarity::Positive => ExampleClass::Negative,
            Polarity::Negative => ExampleClass::Positive,
        }
    }
}

/// Examples with their classes; the target attribute is kept apart from `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingContext {
    base: FormalContext,
    classes: Vec<ExampleClass>,
    target: String,
}

impl TrainingContext {
    pub fn new(base: FormalContext, classes: Vec<ExampleClass>, target: impl Into<String>) -> Result<Self> {
        let target = target.into();
        if classes.len() != base.n_objects() {
            return Err(FcaError::Training(format!(
                "{} class tags for {} objects",
                classes.len(),
                base.n_objects()
            )));
        }
        if base.attribute_index(&target).is_some() {
            return Err(FcaError::Training(format!("target {target:?} is also an attribute")));
        }
        Ok(TrainingContext { base, classes, target })
    }

    pub fn base(&self) -> &FormalContext {
        &self.base
    }

    pub fn classes(&self) -> &[ExampleClass] {
        &self.classes
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn members(&self, class: ExampleClass) -> BitSet {
        BitSet::from_indices(
            self.base.n_objects(),
            self.classes.iter().enumerate().filter(|(_, &c)| c == class).map(|(g, _)| g),
        )
    }

    /// The subcontext of one class.
    pub fn subcontext(&self, class: ExampleClass) -> FormalContext {
        self.base.restrict_objects(&self.members(class))
    }

    /// Parses a training table: header row, object label first, target token
    /// (`+`, `-`, `tau`) last. Cells are crosses unless `nominal` is set, in
    /// which case every column is nominally scaled.
    pub fn parse_csv(text: &str, nominal: bool) -> Result<TrainingContext> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| FcaError::Parse {
                line: e.position().map_or(0, |p| p.line() as usize),
                message: e.to_string(),
            })?;
            if rec.iter().all(|f| f.trim().is_empty()) {
                continue;
            }
            let line = rec.position().map_or(0, |p| p.line() as usize);
            rows.push((line, rec.iter().map(|s| s.trim().to_string()).collect()));
        }
        let Some(((_, header), body)) = rows.split_first() else {
            return Err(FcaError::Parse { line: 1, message: "missing header row".into() });
        };
        if header.len() < 2 {
            return Err(FcaError::Parse { line: 1, message: "need an object column and a target column".into() });
        }
        let attrs = &header[1..header.len() - 1];
        let target = header[header.len() - 1].clone();
        let mut objects = Vec::new();
        let mut values = Vec::new();
        let mut classes = Vec::new();
        for (line, r) in body {
            if r.len() != header.len() {
                return Err(FcaError::Parse {
                    line: *line,
                    message: format!("row has {} fields, expected {}", r.len(), header.len()),
                });
            }
            let class = ExampleClass::parse(&r[r.len() - 1]).ok_or_else(|| FcaError::Parse {
                line: *line,
                message: format!("target {:?} is not one of +, -, tau", r[r.len() - 1]),
            })?;
            objects.push(r[0].clone());
            values.push(r[1..r.len() - 1].to_vec());
            classes.push(class);
        }
        let base = if nominal {
            let mv = crate::many_valued::ManyValuedContext::new(
                objects,
                attrs.to_vec(),
                values.into_iter().map(|row| row.into_iter().map(Some).collect()).collect(),
            )?;
            let mut plan = std::collections::HashMap::new();
            for a in attrs {
                plan.insert(
                    a.clone(),
                    crate::many_valued::Scale::for_attribute(&mv, a, crate::many_valued::ScaleKind::Nominal)?,
                );
            }
            crate::many_valued::apply_scaling(&mv, &plan)?
        } else {
            let incidence = values
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, c)| !matches!(c.as_str(), "" | "0" | "." | "no" | "false"))
                        .map(|(i, _)| i)
                        .collect()
                })
                .collect();
            FormalContext::new(objects, attrs.to_vec(), incidence)?
        };
        TrainingContext::new(base, classes, target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub polarity: Polarity,
    pub intent: BitSet,
    /// Examples of the hypothesis' own class that have every attribute of it.
    pub support: BitSet,
    pub minimal: bool,
    pub maximal: bool,
}

/// Hypotheses of one polarity: intents of the class subcontext with nonempty
/// support that are contained in no opposite-class example.
///
/// Intents are enumerated with Close-by-One over the class subcontext; each is
/// tested against the opposite examples as it is produced.
pub fn hypotheses(tc: &TrainingContext, polarity: Polarity) -> Result<Vec<Hypothesis>> {
    let own = tc.members(polarity.class());
    let opposite = tc.members(polarity.opposite());
    if own.is_empty() || opposite.is_empty() {
        return Err(FcaError::Training("both positive and negative examples are required".into()));
    }
    let sub = tc.subcontext(polarity.class());
    let own_objects: Vec<usize> = own.to_vec();
    let opposite_rows: Vec<&BitSet> = opposite.iter().map(|g| tc.base.row(g)).collect();
    let mut found: Vec<Hypothesis> = close_by_one(&sub)
        .into_iter()
        .filter(|c| !c.extent.is_empty())
        .filter(|c| !opposite_rows.iter().any(|row| c.intent.is_subset(row)))
        .map(|c| Hypothesis {
            polarity,
            support: BitSet::from_indices(tc.base.n_objects(), c.extent.iter().map(|i| own_objects[i])),
            intent: c.intent,
            minimal: false,
            maximal: false,
        })
        .collect();
    found.sort_by(|a, b| a.intent.len().cmp(&b.intent.len()).then(a.intent.to_vec().cmp(&b.intent.to_vec())));
    let intents: Vec<BitSet> = found.iter().map(|h| h.intent.clone()).collect();
    for h in found.iter_mut() {
        h.minimal = !intents.iter().any(|o| o.is_proper_subset(&h.intent));
        h.maximal = !intents.iter().any(|o| h.intent.is_proper_subset(o));
    }
    Ok(found)
}

/// Only the ⊆-minimal hypotheses.
pub fn minimal_hypotheses(hs: &[Hypothesis]) -> Vec<Hypothesis> {
    hs.iter().filter(|h| h.minimal).cloned().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Positive,
    Negative,
    Contradictory,
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Positive => "positive",
            Verdict::Negative => "negative",
            Verdict::Contradictory => "contradictory",
            Verdict::Undetermined => "undetermined",
        })
    }
}

pub fn classify(positive: &[Hypothesis], negative: &[Hypothesis], example: &BitSet) -> Verdict {
    let pos = positive.iter().any(|h| h.intent.is_subset(example));
    let neg = negative.iter().any(|h| h.intent.is_subset(example));
    match (pos, neg) {
        (true, false) => Verdict::Positive,
        (false, true) => Verdict::Negative,
        (true, true) => Verdict::Contradictory,
        (false, false) => Verdict::Undetermined,
    }
}

/// Verdict for one undetermined example with the minimal hypotheses it
/// contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub object: usize,
    pub verdict: Verdict,
    pub positive_witnesses: Vec<BitSet>,
    pub negative_witnesses: Vec<BitSet>,
}

pub fn classify_undetermined(tc: &TrainingContext) -> Result<Vec<Classification>> {
    let pos = minimal_hypotheses(&hypotheses(tc, Polarity::Positive)?);
    let neg = minimal_hypotheses(&hypotheses(tc, Polarity::Negative)?);
    Ok(tc
        .members(ExampleClass::Undetermined)
        .iter()
        .map(|g| {
            let row = tc.base.row(g);
            let witnesses = |hs: &[Hypothesis]| -> Vec<BitSet> {
                hs.iter().filter(|h| h.intent.is_subset(row)).map(|h| h.intent.clone()).collect()
            };
            Classification {
                object: g,
                verdict: classify(&pos, &neg, row),
                positive_witnesses: witnesses(&pos),
                negative_witnesses: witnesses(&neg),
            }
        })
        .collect())
}

/// Text report: one line per undetermined example.
pub fn report(tc: &TrainingContext, results: &[Classification]) -> String {
    let ctx = tc.base();
    let fmt_sets = |sets: &[BitSet]| -> String {
        if sets.is_empty() {
            "none".to_string()
        } else {
            sets.iter()
                .map(|s| format!("{{{}}}", ctx.attribute_labels(s).join(", ")))
                .collect::<Vec<_>>()
                .join(" ")
        }
    };
    results
        .iter()
        .map(|c| {
            format!(
                "{}: {} (positive: {}; negative: {})\n",
                ctx.objects()[c.object],
                c.verdict,
                fmt_sets(&c.positive_witnesses),
                fmt_sets(&c.negative_witnesses)
            )
        })
        .collect()
}

pub fn report_json(tc: &TrainingContext, results: &[Classification]) -> serde_json::Value {
    let ctx = tc.base();
    let sets = |v: &[BitSet]| -> Vec<Vec<String>> { v.iter().map(|s| ctx.attribute_labels(s)).collect() };
    serde_json::Value::Array(
        results
            .iter()
            .map(|c| {
                serde_json::json!({
                    "object": ctx.objects()[c.object],
                    "verdict": c.verdict,
                    "positive": sets(&c.positive_witnesses),
                    "negative": sets(&c.negative_witnesses),
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    #[test]
    fn falsified_generalisations_are_rejected() {
        let tc = datasets::credit_scoring();
        let ctx = tc.base();
        let pos = hypotheses(&tc, Polarity::Positive).unwrap();
        let neg = hypotheses(&tc, Polarity::Negative).unwrap();
        let he = ctx.attribute_set(&["HE"]).unwrap();
        let af = ctx.attribute_set(&["A", "F"]).unwrap();
        // both are intents of their own subcontext
        let kp = tc.subcontext(ExampleClass::Positive);
        let kn = tc.subcontext(ExampleClass::Negative);
        assert_eq!(kp.close_attributes(&he), he);
        assert_eq!(kn.close_attributes(&af), af);
        assert!(he.is_subset(ctx.row(4)));
        assert!(af.is_subset(ctx.row(2)));
        assert!(!pos.iter().any(|h| h.intent == he));
        assert!(!neg.iter().any(|h| h.intent == af));
    }

    #[test]
    fn single_example_each() {
        let base = FormalContext::from_crosses(["p", "n"], ["a", "b"], &["X.", ".X"]).unwrap();
        let tc = TrainingContext::new(base, vec![ExampleClass::Positive, ExampleClass::Negative], "w").unwrap();
        let pos = hypotheses(&tc, Polarity::Positive).unwrap();
        assert_eq!(pos.len(), 1);
        assert_eq!(pos[0].intent, BitSet::from_indices(2, [0]));
        assert!(pos[0].minimal);
    }

    #[test]
    fn empty_class_is_an_error() {
        let base = FormalContext::from_crosses(["p"], ["a"], &["X"]).unwrap();
        let tc = TrainingContext::new(base, vec![ExampleClass::Positive], "w").unwrap();
        assert!(matches!(hypotheses(&tc, Polarity::Positive), Err(FcaError::Training(_))));
    }

    #[test]
    fn classify_edge_cases() {
        let h = |p: Polarity, s: &[usize]| Hypothesis {
            polarity: p,
            intent: BitSet::from_indices(3, s.iter().copied()),
            support: BitSet::empty(1),
            minimal: true,
            maximal: true,
        };
        let pos = vec![h(Polarity::Positive, &[0])];
        let neg = vec![h(Polarity::Negative, &[1])];
        assert_eq!(classify(&pos, &neg, &BitSet::full(3)), Verdict::Contradictory);
        assert_eq!(classify(&pos, &neg, &BitSet::empty(3)), Verdict::Undetermined);
        assert_eq!(classify(&pos, &neg, &BitSet::from_indices(3, [0, 2])), Verdict::Positive);
        assert_eq!(classify(&pos, &neg, &BitSet::from_indices(3, [1])), Verdict::Negative);
    }

    #[test]
    fn training_csv() {
        let text = "id,Gender,Age,Target\n1,M,young,+\n2,F,old,-\n3,F,young,tau\n";
        let tc = TrainingContext::parse_csv(text, true).unwrap();
        assert_eq!(tc.base().attributes(), ["Gender=M", "Gender=F", "Age=young", "Age=old"]);
        assert_eq!(tc.classes()[2], ExampleClass::Undetermined);
        assert_eq!(tc.target(), "Target");
        let bad = "id,a,Target\n1,1,maybe\n";
        assert!(matches!(TrainingContext::parse_csv(bad, false), Err(FcaError::Parse { line: 2, .. })));
        let crosses = TrainingContext::parse_csv("id,a,b,w\n1,1,0,+\n2,0,1,-\n", false).unwrap();
        assert!(crosses.base().has(0, 0) && !crosses.base().has(0, 1));
    }

    #[test]
    fn report_lists_witnesses() {
        let tc = datasets::credit_scoring();
        let results = classify_undetermined(&tc).unwrap();
        assert_eq!(results.len(), 3);
        let text = report(&tc, &results);
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("8: "));
    }
}
