//! Formal contexts and the derivation operators.

use std::collections::HashSet;

use crate::bitset::BitSet;
use crate::error::{FcaError, Result};

/// Which side of the context a set of indices refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Objects,
    Attributes,
}

impl Side {
    fn name(self) -> &'static str {
        match self {
            Side::Objects => "object",
            Side::Attributes => "attribute",
        }
    }
}

/// A formal context `(G, M, I)`.
///
/// The incidence is kept twice, once per object (row) and once per attribute
/// (column), both as packed bit sets. Contexts are immutable; the builders
/// that add objects return a new value.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    rows: Vec<BitSet>,
    cols: Vec<BitSet>,
}

impl std::fmt::Debug for FormalContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "FormalContext {}x{}", self.objects.len(), self.attributes.len())?;
        for (g, row) in self.rows.iter().enumerate() {
            let line: String = (0..self.attributes.len())
                .map(|m| if row.contains(m) { 'X' } else { '.' })
                .collect();
            writeln!(f, "  {line} {}", self.objects[g])?;
        }
        Ok(())
    }
}

fn check_unique(side: &'static str, labels: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(FcaError::DuplicateLabel {
                side,
                label: l.clone(),
            });
        }
    }
    Ok(())
}

impl FormalContext {
    /// Builds a context from labels and, per object, the indices of its attributes.
    pub fn new<S: Into<String>, T: Into<String>>(
        objects: impl IntoIterator<Item = S>,
        attributes: impl IntoIterator<Item = T>,
        incidence: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        let attributes: Vec<String> = attributes.into_iter().map(Into::into).collect();
        if incidence.len() != objects.len() {
            return Err(FcaError::Dimension(format!(
                "{} incidence rows for {} objects",
                incidence.len(),
                objects.len()
            )));
        }
        let m = attributes.len();
        let rows = incidence
            .into_iter()
            .map(|r| {
                BitSet::try_from_indices(m, r).map_err(|index| FcaError::IndexOutOfRange {
                    side: "attribute",
                    index,
                    size: m,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(objects, attributes, rows)
    }

    /// Builds a context from row bit sets over the attribute universe.
    pub fn from_rows(objects: Vec<String>, attributes: Vec<String>, rows: Vec<BitSet>) -> Result<Self> {
        check_unique("object", &objects)?;
        check_unique("attribute", &attributes)?;
        if rows.len() != objects.len() {
            return Err(FcaError::Dimension(format!(
                "{} rows for {} objects",
                rows.len(),
                objects.len()
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.universe() != attributes.len()) {
            return Err(FcaError::Dimension(format!(
                "row over {} attributes, expected {}",
                r.universe(),
                attributes.len()
            )));
        }
        let mut cols = vec![BitSet::empty(objects.len()); attributes.len()];
        for (g, row) in rows.iter().enumerate() {
            for m in row {
                cols[m].insert(g);
            }
        }
        let ctx = FormalContext {
            objects,
            attributes,
            rows,
            cols,
        };
        debug_assert!(ctx.forms_agree());
        Ok(ctx)
    }

    /// Builds a context from a dense boolean table.
    pub fn from_table<S: Into<String>, T: Into<String>>(
        objects: impl IntoIterator<Item = S>,
        attributes: impl IntoIterator<Item = T>,
        table: &[&[bool]],
    ) -> Result<Self> {
        let incidence = table
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i).collect())
            .collect();
        Self::new(objects, attributes, incidence)
    }

    /// Builds a context from rows written as `X`/`.` strings, one per object.
    pub fn from_crosses<S: Into<String>, T: Into<String>>(
        objects: impl IntoIterator<Item = S>,
        attributes: impl IntoIterator<Item = T>,
        rows: &[&str],
    ) -> Result<Self> {
        let incidence = rows
            .iter()
            .map(|r| {
                r.chars()
                    .enumerate()
                    .filter(|(_, c)| matches!(c, 'X' | 'x' | '1'))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Self::new(objects, attributes, incidence)
    }

    /// Row and column forms describe the same relation.
    pub fn forms_agree(&self) -> bool {
        self.rows.iter().enumerate().all(|(g, row)| {
            (0..self.attributes.len()).all(|m| row.contains(m) == self.cols[m].contains(g))
        })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    /// `g'`, the attributes of object `g`.
    pub fn row(&self, g: usize) -> &BitSet {
        &self.rows[g]
    }

    /// `m'`, the objects having attribute `m`.
    pub fn column(&self, m: usize) -> &BitSet {
        &self.cols[m]
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    pub fn has(&self, g: usize, m: usize) -> bool {
        self.rows[g].contains(m)
    }

    /// `|I|`.
    pub fn incidence_count(&self) -> usize {
        self.rows.iter().map(BitSet::len).sum()
    }

    pub fn object_index(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == label)
    }

    pub fn attribute_index(&self, label: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == label)
    }

    /// Resolves attribute labels to a set, failing on the first unknown label.
    pub fn attribute_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<BitSet> {
        let mut s = BitSet::empty(self.n_attributes());
        for l in labels {
            let i = self
                .attribute_index(l.as_ref())
                .ok_or_else(|| FcaError::UnknownLabel {
                    side: "attribute",
                    label: l.as_ref().to_string(),
                })?;
            s.insert(i);
        }
        Ok(s)
    }

    pub fn object_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<BitSet> {
        let mut s = BitSet::empty(self.n_objects());
        for l in labels {
            let i = self
                .object_index(l.as_ref())
                .ok_or_else(|| FcaError::UnknownLabel {
                    side: "object",
                    label: l.as_ref().to_string(),
                })?;
            s.insert(i);
        }
        Ok(s)
    }

    pub fn attribute_labels(&self, set: &BitSet) -> Vec<String> {
        set.iter().map(|m| self.attributes[m].clone()).collect()
    }

    pub fn object_labels(&self, set: &BitSet) -> Vec<String> {
        set.iter().map(|g| self.objects[g].clone()).collect()
    }

    /// `A'` for a set of objects: the attributes shared by every object in `A`.
    pub fn intent_of(&self, objects: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.n_attributes());
        for g in objects {
            out.intersect_with(&self.rows[g]);
        }
        out
    }

    /// `B'` for a set of attributes: the objects having every attribute in `B`.
    pub fn extent_of(&self, attributes: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.n_objects());
        for m in attributes {
            out.intersect_with(&self.cols[m]);
        }
        out
    }

    /// `A''` for objects.
    pub fn close_objects(&self, objects: &BitSet) -> BitSet {
        self.extent_of(&self.intent_of(objects))
    }

    /// `B''` for attributes.
    pub fn close_attributes(&self, attributes: &BitSet) -> BitSet {
        self.intent_of(&self.extent_of(attributes))
    }

    fn check_indices(&self, side: Side, set: &[usize]) -> Result<BitSet> {
        let size = match side {
            Side::Objects => self.n_objects(),
            Side::Attributes => self.n_attributes(),
        };
        BitSet::try_from_indices(size, set.iter().copied()).map_err(|index| {
            FcaError::IndexOutOfRange {
                side: side.name(),
                index,
                size,
            }
        })
    }

    /// The derivation operator on index lists; `side` names the side of `set`.
    pub fn derive(&self, side: Side, set: &[usize]) -> Result<Vec<usize>> {
        let s = self.check_indices(side, set)?;
        Ok(match side {
            Side::Objects => self.intent_of(&s),
            Side::Attributes => self.extent_of(&s),
        }
        .to_vec())
    }

    /// `set''` on index lists.
    pub fn closure(&self, side: Side, set: &[usize]) -> Result<Vec<usize>> {
        let s = self.check_indices(side, set)?;
        Ok(match side {
            Side::Objects => self.close_objects(&s),
            Side::Attributes => self.close_attributes(&s),
        }
        .to_vec())
    }

    /// Swaps the roles of objects and attributes.
    pub fn transpose(&self) -> FormalContext {
        FormalContext {
            objects: self.attributes.clone(),
            attributes: self.objects.clone(),
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    /// A copy of this context with one more object appended.
    pub fn with_object(&self, label: &str, attributes: &BitSet) -> Result<FormalContext> {
        if self.object_index(label).is_some() {
            return Err(FcaError::DuplicateLabel {
                side: "object",
                label: label.to_string(),
            });
        }
        if attributes.universe() != self.n_attributes() {
            return Err(FcaError::Dimension(format!(
                "row over {} attributes, expected {}",
                attributes.universe(),
                self.n_attributes()
            )));
        }
        let mut objects = self.objects.clone();
        objects.push(label.to_string());
        let mut rows = self.rows.clone();
        rows.push(attributes.clone());
        FormalContext::from_rows(objects, self.attributes.clone(), rows)
    }

    /// The subcontext on the given objects, in their original order.
    pub fn restrict_objects(&self, keep: &BitSet) -> FormalContext {
        let objects = keep.iter().map(|g| self.objects[g].clone()).collect();
        let rows = keep.iter().map(|g| self.rows[g].clone()).collect();
        FormalContext::from_rows(objects, self.attributes.clone(), rows)
            .expect("restriction of a valid context")
    }

    /// The contranominal scale `({1..n}, {1..n}, !=)`.
    pub fn contranominal(n: usize) -> FormalContext {
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let incidence = (0..n).map(|g| (0..n).filter(|&m| m != g).collect()).collect();
        FormalContext::new(labels.clone(), labels, incidence).expect("contranominal scale")
    }

    /// Thresholds a numeric rating table into a context: a cross wherever
    /// `rating > threshold` (or `>=` when `inclusive`).
    pub fn from_ratings<S: Into<String>, T: Into<String>>(
        objects: impl IntoIterator<Item = S>,
        attributes: impl IntoIterator<Item = T>,
        ratings: &[Vec<f64>],
        threshold: f64,
        inclusive: bool,
    ) -> Result<Self> {
        let incidence = ratings
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &r)| if inclusive { r >= threshold } else { r > threshold })
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let ctx = Self::new(objects, attributes, incidence)?;
        if let Some(row) = ratings.iter().find(|r| r.len() != ctx.n_attributes()) {
            return Err(FcaError::Dimension(format!(
                "rating row of length {}, expected {}",
                row.len(),
                ctx.n_attributes()
            )));
        }
        Ok(ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    #[test]
    fn derive_on_geometric_figures() {
        let ctx = datasets::geometric_figures();
        // objects are 0-based here: object 1 is index 0
        assert_eq!(ctx.derive(Side::Objects, &[0]).unwrap(), vec![0, 3]);
        assert_eq!(ctx.derive(Side::Objects, &[1, 2]).unwrap(), vec![2]);
        assert_eq!(ctx.derive(Side::Objects, &[]).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(ctx.derive(Side::Attributes, &[]).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn closure_rows_of_pseudo_intent_table() {
        let ctx = datasets::geometric_figures();
        let (a, b, c, d) = (0, 1, 2, 3);
        assert_eq!(ctx.closure(Side::Attributes, &[b]).unwrap(), vec![b, c]);
        assert_eq!(ctx.closure(Side::Attributes, &[c, d]).unwrap(), vec![b, c, d]);
        assert_eq!(ctx.closure(Side::Attributes, &[]).unwrap(), Vec::<usize>::new());
        assert_eq!(ctx.closure(Side::Attributes, &[a, b]).unwrap(), vec![a, b, c, d]);
    }

    #[test]
    fn out_of_range_and_duplicates_rejected() {
        let ctx = datasets::geometric_figures();
        assert!(matches!(
            ctx.derive(Side::Objects, &[4]),
            Err(FcaError::IndexOutOfRange { index: 4, .. })
        ));
        assert!(matches!(
            FormalContext::new(["a", "a"], ["m"], vec![vec![], vec![]]),
            Err(FcaError::DuplicateLabel { .. })
        ));
        assert!(FormalContext::new(["a"], ["m"], vec![vec![1]]).is_err());
    }

    #[test]
    fn with_object_keeps_both_forms() {
        let ctx = datasets::geometric_figures();
        let row = ctx.attribute_set(&["a", "b"]).unwrap();
        let bigger = ctx.with_object("5", &row).unwrap();
        assert!(bigger.forms_agree());
        assert_eq!(bigger.column(0).to_vec(), vec![0, 1, 4]);
        assert!(bigger.with_object("5", &row).is_err());
    }

    #[test]
    fn transpose_swaps_sides() {
        let ctx = datasets::geometric_figures();
        let t = ctx.transpose();
        assert_eq!(t.row(3).to_vec(), ctx.column(3).to_vec());
        assert!(t.forms_agree());
    }

    #[test]
    fn contranominal_has_empty_diagonal() {
        let c = FormalContext::contranominal(4);
        for g in 0..4 {
            assert!(!c.has(g, g));
            assert_eq!(c.row(g).len(), 3);
        }
    }

    #[test]
    fn rating_threshold() {
        let ctx = FormalContext::from_ratings(["u"], ["x", "y", "z"], &[vec![3.0, 4.0, 2.0]], 3.0, false)
            .unwrap();
        assert_eq!(ctx.row(0).to_vec(), vec![1]);
        let ctx = FormalContext::from_ratings(["u"], ["x", "y", "z"], &[vec![3.0, 4.0, 2.0]], 3.0, true)
            .unwrap();
        assert_eq!(ctx.row(0).to_vec(), vec![0, 1]);
    }
}
