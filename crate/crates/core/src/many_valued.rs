//! Many-valued contexts and conceptual scaling.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{FcaError, Result};

/// A many-valued context `(G, M, W, I)`; each cell holds at most one value token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManyValuedContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    values: Vec<Vec<Option<String>>>,
}

impl ManyValuedContext {
    /// Builds a context from a table of optional tokens. Tokens are trimmed;
    /// an empty token is a missing value.
    pub fn new<S: Into<String>, T: Into<String>>(
        objects: impl IntoIterator<Item = S>,
        attributes: impl IntoIterator<Item = T>,
        values: Vec<Vec<Option<String>>>,
    ) -> Result<Self> {
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        let attributes: Vec<String> = attributes.into_iter().map(Into::into).collect();
        // reuse the label checks of the one-valued context
        FormalContext::new(objects.clone(), attributes.clone(), vec![vec![]; objects.len()])?;
        if values.len() != objects.len() {
            return Err(FcaError::Dimension(format!(
                "{} value rows for {} objects",
                values.len(),
                objects.len()
            )));
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(g, row)| {
                if row.len() != attributes.len() {
                    return Err(FcaError::Dimension(format!(
                        "object {:?} has {} values for {} attributes",
                        objects[g],
                        row.len(),
                        attributes.len()
                    )));
                }
                Ok(row
                    .into_iter()
                    .map(|v| v.map(|s| s.trim().to_string()).filter(|s| !s.is_empty()))
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ManyValuedContext {
            objects,
            attributes,
            values,
        })
    }

    /// Convenience constructor for a complete table of string tokens.
    pub fn from_rows<S: Into<String>, T: Into<String>>(
        objects: impl IntoIterator<Item = S>,
        attributes: impl IntoIterator<Item = T>,
        rows: &[&[&str]],
    ) -> Result<Self> {
        let values = rows
            .iter()
            .map(|r| r.iter().map(|v| Some(v.to_string())).collect())
            .collect();
        Self::new(objects, attributes, values)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn value(&self, g: usize, m: usize) -> Option<&str> {
        self.values[g][m].as_deref()
    }

    pub fn attribute_index(&self, label: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == label)
    }

    /// Cells without a value, as `(object, attribute)` labels.
    pub fn missing_cells(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (g, row) in self.values.iter().enumerate() {
            for (m, v) in row.iter().enumerate() {
                if v.is_none() {
                    out.push((self.objects[g].clone(), self.attributes[m].clone()));
                }
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(|r| r.iter().all(Option::is_some))
    }

    /// Distinct values of attribute `m` in order of first occurrence.
    pub fn values_of(&self, m: usize) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for row in &self.values {
            if let Some(v) = &row[m] {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        out
    }
}

/// The kind of a conceptual scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleKind {
    Nominal,
    Dichotomic,
    Ordinal,
    Interordinal,
    Contranominal,
    Custom,
}

/// How the values of an ordinal or interordinal scale were ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueOrder {
    Numeric,
    Lexicographic,
    /// Order of appearance; used by scales that ignore order.
    Given,
}

/// A conceptual scale: a one-valued context whose objects are the scale values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scale {
    kind: ScaleKind,
    order: ValueOrder,
    context: FormalContext,
}

fn dedup(values: impl IntoIterator<Item = impl AsRef<str>>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for v in values {
        let v = v.as_ref().trim().to_string();
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Sorts tokens numerically when every token parses as a number, else lexicographically.
fn sort_values(mut values: Vec<String>) -> (Vec<String>, ValueOrder) {
    let numeric: Option<Vec<f64>> = values.iter().map(|v| v.parse::<f64>().ok()).collect();
    match numeric {
        Some(nums) if nums.iter().all(|x| x.is_finite()) => {
            let mut pairs: Vec<(f64, String)> = nums.into_iter().zip(values).collect();
            pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
            (pairs.into_iter().map(|p| p.1).collect(), ValueOrder::Numeric)
        }
        _ => {
            values.sort();
            (values, ValueOrder::Lexicographic)
        }
    }
}

impl Scale {
    /// `(W, W, =)`.
    pub fn nominal(values: impl IntoIterator<Item = impl AsRef<str>>) -> Scale {
        let values = dedup(values);
        let incidence = (0..values.len()).map(|i| vec![i]).collect();
        let context = FormalContext::new(values.clone(), values, incidence).expect("nominal scale");
        Scale {
            kind: ScaleKind::Nominal,
            order: ValueOrder::Given,
            context,
        }
    }

    /// Nominal scale over exactly two mutually exclusive values.
    pub fn dichotomic(yes: &str, no: &str) -> Result<Scale> {
        if yes.trim() == no.trim() {
            return Err(FcaError::Invalid("dichotomic scale needs two distinct values".into()));
        }
        let mut s = Scale::nominal([yes, no]);
        s.kind = ScaleKind::Dichotomic;
        Ok(s)
    }

    /// `(W, W, <=)`: value `v` has scale attribute `<=w` iff `v <= w`.
    pub fn ordinal(values: impl IntoIterator<Item = impl AsRef<str>>) -> Scale {
        let (values, order) = sort_values(dedup(values));
        let attrs: Vec<String> = values.iter().map(|w| format!("<={w}")).collect();
        let n = values.len();
        let incidence = (0..n).map(|v| (v..n).collect()).collect();
        let context = FormalContext::new(values, attrs, incidence).expect("ordinal scale");
        Scale {
            kind: ScaleKind::Ordinal,
            order,
            context,
        }
    }

    /// `(W, W, <=) | (W, W, >=)`.
    pub fn interordinal(values: impl IntoIterator<Item = impl AsRef<str>>) -> Scale {
        let (values, order) = sort_values(dedup(values));
        let n = values.len();
        let attrs: Vec<String> = values
            .iter()
            .map(|w| format!("<={w}"))
            .chain(values.iter().map(|w| format!(">={w}")))
            .collect();
        let incidence = (0..n)
            .map(|v| (v..n).chain(n..=n + v).collect())
            .collect();
        let context = FormalContext::new(values, attrs, incidence).expect("interordinal scale");
        Scale {
            kind: ScaleKind::Interordinal,
            order,
            context,
        }
    }

    /// `(W, W, !=)`.
    pub fn contranominal(values: impl IntoIterator<Item = impl AsRef<str>>) -> Scale {
        let values = dedup(values);
        let n = values.len();
        let incidence = (0..n).map(|g| (0..n).filter(|&m| m != g).collect()).collect();
        let context = FormalContext::new(values.clone(), values, incidence).expect("contranominal scale");
        Scale {
            kind: ScaleKind::Contranominal,
            order: ValueOrder::Given,
            context,
        }
    }

    /// Any one-valued context whose object labels are the scale values.
    pub fn custom(context: FormalContext) -> Scale {
        Scale {
            kind: ScaleKind::Custom,
            order: ValueOrder::Given,
            context,
        }
    }

    /// A scale of the given kind over the values attribute `attribute` takes in `mv`.
    pub fn for_attribute(mv: &ManyValuedContext, attribute: &str, kind: ScaleKind) -> Result<Scale> {
        let m = mv.attribute_index(attribute).ok_or_else(|| FcaError::UnknownLabel {
            side: "attribute",
            label: attribute.to_string(),
        })?;
        let values = mv.values_of(m);
        Ok(match kind {
            ScaleKind::Nominal => Scale::nominal(&values),
            ScaleKind::Dichotomic => match values.as_slice() {
                [a, b] => Scale::dichotomic(a, b)?,
                _ => {
                    return Err(FcaError::Invalid(format!(
                        "attribute {attribute:?} has {} values, a dichotomic scale needs 2",
                        values.len()
                    )))
                }
            },
            ScaleKind::Ordinal => Scale::ordinal(&values),
            ScaleKind::Interordinal => Scale::interordinal(&values),
            ScaleKind::Contranominal => Scale::contranominal(&values),
            ScaleKind::Custom => {
                return Err(FcaError::Invalid(
                    "custom scales must be given as a context".into(),
                ))
            }
        })
    }

    pub fn kind(&self) -> ScaleKind {
        self.kind
    }

    pub fn value_order(&self) -> ValueOrder {
        self.order
    }

    pub fn context(&self) -> &FormalContext {
        &self.context
    }

    /// Scale attributes of a value, or `None` if it is not a scale value.
    pub fn row_of(&self, value: &str) -> Option<&BitSet> {
        self.context.object_index(value).map(|i| self.context.row(i))
    }
}

/// Derives a one-valued context as the apposition of the scaled attribute
/// blocks. Derived attribute labels are `"attr=scaleAttr"`. Missing values
/// produce empty blocks.
pub fn apply_scaling(mv: &ManyValuedContext, plan: &HashMap<String, Scale>) -> Result<FormalContext> {
    let ordered: Vec<(&str, &Scale)> = mv
        .attributes()
        .iter()
        .map(|a| {
            plan.get(a)
                .map(|s| (a.as_str(), s))
                .ok_or_else(|| FcaError::MissingScale(a.clone()))
        })
        .collect::<Result<_>>()?;
    let mut labels = Vec::new();
    let mut offsets = Vec::new();
    for (a, s) in &ordered {
        offsets.push(labels.len());
        labels.extend(s.context().attributes().iter().map(|sa| format!("{a}={sa}")));
    }
    let width = labels.len();
    let mut rows = Vec::with_capacity(mv.objects().len());
    for g in 0..mv.objects().len() {
        let mut row = BitSet::empty(width);
        for (m, (a, s)) in ordered.iter().enumerate() {
            let Some(v) = mv.value(g, m) else { continue };
            let block = s.row_of(v).ok_or_else(|| FcaError::ValueNotInScale {
                object: mv.objects()[g].clone(),
                attribute: a.to_string(),
                value: v.to_string(),
            })?;
            for j in block {
                row.insert(offsets[m] + j);
            }
        }
        rows.push(row);
    }
    FormalContext::from_rows(mv.objects().to_vec(), labels, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    #[test]
    fn university_subjects_scale_to_the_printed_context() {
        let mv = datasets::university_subjects();
        let mut plan = HashMap::new();
        plan.insert("Gender".to_string(), Scale::for_attribute(&mv, "Gender", ScaleKind::Dichotomic).unwrap());
        plan.insert("Age".to_string(), Scale::for_attribute(&mv, "Age", ScaleKind::Ordinal).unwrap());
        plan.insert("Subject".to_string(), Scale::for_attribute(&mv, "Subject", ScaleKind::Nominal).unwrap());
        plan.insert("Mark".to_string(), Scale::for_attribute(&mv, "Mark", ScaleKind::Interordinal).unwrap());
        let ctx = apply_scaling(&mv, &plan).unwrap();
        assert_eq!(ctx.n_objects(), 5);
        assert_eq!(ctx.n_attributes(), 16);
        let expected = [
            "x.xxxx...xxxxx..",
            ".x.xx.x...xxxxx.",
            ".xxxxx..xxxxx...",
            "x..xx.x....xxxxx",
            ".x..x..x..xxxxx.",
        ];
        for (g, e) in expected.iter().enumerate() {
            let got: String = (0..16).map(|m| if ctx.has(g, m) { 'x' } else { '.' }).collect();
            assert_eq!(&got, e, "row {g}");
        }
        assert_eq!(ctx.attributes()[2], "Age=<=19");
        assert_eq!(ctx.attributes()[15], "Mark=>=10");
        assert_eq!(plan["Age"].value_order(), ValueOrder::Numeric);
    }

    #[test]
    fn contranominal_scale_of_four() {
        let s = Scale::contranominal(["1", "2", "3", "4"]);
        let c = s.context();
        for g in 0..4 {
            for m in 0..4 {
                assert_eq!(c.has(g, m), g != m);
            }
        }
    }

    #[test]
    fn single_value_nominal_gives_a_full_column() {
        let mv = ManyValuedContext::from_rows(["g1", "g2"], ["colour"], &[&["red"], &["red"]]).unwrap();
        let mut plan = HashMap::new();
        plan.insert("colour".into(), Scale::for_attribute(&mv, "colour", ScaleKind::Nominal).unwrap());
        let ctx = apply_scaling(&mv, &plan).unwrap();
        assert_eq!(ctx.n_attributes(), 1);
        assert_eq!(ctx.incidence_count(), 2);
    }

    #[test]
    fn unseen_value_names_the_cell() {
        let mv = datasets::university_subjects();
        let mut plan = HashMap::new();
        for (a, k) in [("Gender", ScaleKind::Nominal), ("Age", ScaleKind::Ordinal), ("Mark", ScaleKind::Ordinal)] {
            plan.insert(a.to_string(), Scale::for_attribute(&mv, a, k).unwrap());
        }
        plan.insert("Subject".into(), Scale::nominal(["Math", "CS"]));
        let err = apply_scaling(&mv, &plan).unwrap_err();
        assert_eq!(
            err,
            FcaError::ValueNotInScale {
                object: "5".into(),
                attribute: "Subject".into(),
                value: "Data Mining".into()
            }
        );
        plan.remove("Subject");
        assert_eq!(apply_scaling(&mv, &plan).unwrap_err(), FcaError::MissingScale("Subject".into()));
    }

    #[test]
    fn lexicographic_fallback_for_non_numeric_tokens() {
        let s = Scale::ordinal(["low", "high", "average"]);
        assert_eq!(s.value_order(), ValueOrder::Lexicographic);
        assert_eq!(s.context().objects(), &["average", "high", "low"]);
    }

    #[test]
    fn tokens_are_trimmed() {
        let mv = ManyValuedContext::from_rows(["g"], ["m"], &[&["  v "]]).unwrap();
        assert_eq!(mv.value(0, 0), Some("v"));
    }
}
