//! Boolean matrix factorization with formal concepts as factors.

use std::fmt;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{FcaError, Result};
use crate::fraction::{check_unit, meets, Fraction};
use crate::lattice::FormalConcept;

/// A dense 0/1 matrix stored as row bit sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BooleanMatrix {
    cols: usize,
    rows: Vec<BitSet>,
}

impl BooleanMatrix {
    pub fn zeros(n: usize, m: usize) -> Self {
        BooleanMatrix {
            cols: m,
            rows: vec![BitSet::empty(m); n],
        }
    }

    pub fn identity(k: usize) -> Self {
        BooleanMatrix {
            cols: k,
            rows: (0..k).map(|i| BitSet::from_indices(k, [i])).collect(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitSet>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.universe() != cols) {
            return Err(FcaError::Dimension(format!("row of width {}, expected {cols}", r.universe())));
        }
        Ok(BooleanMatrix { cols, rows })
    }

    /// Rows of `0`/`1` digits; whitespace inside a row is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut width = None;
        for (i, line) in text.lines().enumerate() {
            let digits: Vec<char> = line.chars().filter(|c| !c.is_whitespace()).collect();
            if digits.is_empty() {
                continue;
            }
            let w = *width.get_or_insert(digits.len());
            if digits.len() != w {
                return Err(FcaError::Parse {
                    line: i + 1,
                    message: format!("row has {} cells, expected {w}", digits.len()),
                });
            }
            let mut row = BitSet::empty(w);
            for (j, c) in digits.iter().enumerate() {
                match c {
                    '1' => row.insert(j),
                    '0' => {}
                    other => {
                        return Err(FcaError::Parse {
                            line: i + 1,
                            message: format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
            rows.push(row);
        }
        Ok(BooleanMatrix {
            cols: width.unwrap_or(0),
            rows,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.rows[i].insert(j)
        } else {
            self.rows[i].remove(j)
        }
    }

    pub fn row(&self, i: usize) -> &BitSet {
        &self.rows[i]
    }

    pub fn ones(&self) -> usize {
        self.rows.iter().map(BitSet::len).sum()
    }

    /// `self ≤ other` cellwise.
    pub fn is_below(&self, other: &BooleanMatrix) -> bool {
        self.n_rows() == other.n_rows() && self.rows.iter().zip(&other.rows).all(|(a, b)| a.is_subset(b))
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| (0..self.cols).map(|j| u8::from(r.contains(j))).collect())
            .collect()
    }

    /// Labels `g1..`, `m1..`.
    pub fn to_context(&self) -> FormalContext {
        FormalContext::from_rows(
            (1..=self.n_rows()).map(|i| format!("g{i}")).collect(),
            (1..=self.cols).map(|j| format!("m{j}")).collect(),
            self.rows.clone(),
        )
        .expect("well-formed matrix")
    }

    pub fn from_context(ctx: &FormalContext) -> Self {
        BooleanMatrix {
            cols: ctx.n_attributes(),
            rows: ctx.rows().to_vec(),
        }
    }
}

impl fmt::Display for BooleanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            for j in 0..self.cols {
                f.write_str(if r.contains(j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl From<&FormalContext> for BooleanMatrix {
    fn from(ctx: &FormalContext) -> Self {
        BooleanMatrix::from_context(ctx)
    }
}

/// `(P ∘ Q)_ij = ⋁_l P_il ∧ Q_lj`.
pub fn boolean_product(p: &BooleanMatrix, q: &BooleanMatrix) -> Result<BooleanMatrix> {
    if p.n_cols() != q.n_rows() {
        return Err(FcaError::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            p.n_rows(),
            p.n_cols(),
            q.n_rows(),
            q.n_cols()
        )));
    }
    let rows = p
        .rows
        .iter()
        .map(|pr| {
            let mut out = BitSet::empty(q.n_cols());
            for l in pr {
                out.union_with(q.row(l));
            }
            out
        })
        .collect();
    Ok(BooleanMatrix { cols: q.n_cols(), rows })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanFactorization {
    pub p: BooleanMatrix,
    pub q: BooleanMatrix,
    pub factors: Vec<FormalConcept>,
}

impl BooleanFactorization {
    pub fn from_factors(n: usize, m: usize, factors: Vec<FormalConcept>) -> Self {
        let k = factors.len();
        let mut p = BooleanMatrix::zeros(n, k);
        let q = BooleanMatrix {
            cols: m,
            rows: factors.iter().map(|c| c.intent.clone()).collect(),
        };
        for (l, c) in factors.iter().enumerate() {
            for i in &c.extent {
                p.set(i, l, true);
            }
        }
        BooleanFactorization { p, q, factors }
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    pub fn product(&self) -> BooleanMatrix {
        boolean_product(&self.p, &self.q).expect("consistent factor matrices")
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Factor {
            extent: Vec<usize>,
            intent: Vec<usize>,
        }
        #[derive(Serialize)]
        #[allow(non_snake_case)]
        struct Out {
            P: Vec<Vec<u8>>,
            Q: Vec<Vec<u8>>,
            factors: Vec<Factor>,
        }
        serde_json::to_value(Out {
            P: self.p.to_dense(),
            Q: self.q.to_dense(),
            factors: self
                .factors
                .iter()
                .map(|c| Factor {
                    extent: c.extent.to_vec(),
                    intent: c.intent.to_vec(),
                })
                .collect(),
        })
        .expect("serializable")
    }
}

fn covered_by(uncovered: &[BitSet], extent: &BitSet, intent: &BitSet) -> usize {
    extent.iter().map(|i| uncovered[i].intersection_len(intent)).sum()
}

/// Greedy concept-as-factor search. Each factor is grown attribute by
/// attribute, keeping the extension that covers the most still-uncovered
/// 1-cells (lowest index on ties), then closed to a concept. Stops once the
/// covered fraction of 1-cells reaches `coverage`.
pub fn factorize(i: &BooleanMatrix, coverage: &Fraction) -> Result<BooleanFactorization> {
    check_unit("coverage", coverage)?;
    if *coverage.numer() == 0 {
        return Err(FcaError::Threshold {
            name: "coverage",
            value: coverage.to_string(),
            reason: "must be positive",
        });
    }
    let ctx = i.to_context();
    let total = i.ones();
    let mut uncovered: Vec<BitSet> = i.rows.clone();
    let mut covered = 0usize;
    let mut factors = Vec::new();
    while !meets(covered, total, coverage) && total > 0 {
        let mut intent = BitSet::empty(i.n_cols());
        let mut extent = ctx.extent_of(&intent);
        let mut value = 0usize;
        loop {
            let mut best: Option<(usize, BitSet, BitSet)> = None;
            for j in 0..i.n_cols() {
                if intent.contains(j) {
                    continue;
                }
                let e = extent.intersection(ctx.column(j));
                let d = ctx.intent_of(&e);
                let v = covered_by(&uncovered, &e, &d);
                if best.as_ref().is_none_or(|(bv, _, _)| v > *bv) {
                    best = Some((v, e, d));
                }
            }
            match best {
                Some((v, e, d)) if v > value => {
                    value = v;
                    extent = e;
                    intent = d;
                }
                _ => break,
            }
        }
        if value == 0 {
            break;
        }
        for g in &extent {
            uncovered[g].difference_with(&intent);
        }
        covered += value;
        factors.push(FormalConcept {
            extent,
            intent,
        });
    }
    Ok(BooleanFactorization::from_factors(i.n_rows(), i.n_cols(), factors))
}

/// `P̃_uf = (I_u · Q_f) / |Q_f|`: the share of factor `f`'s items in the
/// profile of user `u`.
pub fn weighted_projection(i: &BooleanMatrix, q: &BooleanMatrix) -> Result<Vec<Vec<Fraction>>> {
    if i.n_cols() != q.n_cols() {
        return Err(FcaError::Dimension(format!(
            "profiles over {} items, factors over {}",
            i.n_cols(),
            q.n_cols()
        )));
    }
    if let Some(f) = (0..q.n_rows()).find(|&f| q.row(f).is_empty()) {
        return Err(FcaError::Invalid(format!("factor row {f} has no items")));
    }
    Ok(i.rows
        .iter()
        .map(|u| {
            q.rows
                .iter()
                .map(|f| Fraction::new(u.intersection_len(f) as u64, f.len() as u64))
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    fn m(text: &str) -> BooleanMatrix {
        BooleanMatrix::parse(text).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let a = m("101\n 0 1 0\n\n");
        assert_eq!((a.n_rows(), a.n_cols()), (2, 3));
        assert_eq!(a.to_string(), "101\n010\n");
        assert!(matches!(BooleanMatrix::parse("10\n1"), Err(FcaError::Parse { line: 2, .. })));
        assert!(matches!(BooleanMatrix::parse("12"), Err(FcaError::Parse { line: 1, .. })));
    }

    #[test]
    fn context_round_trip() {
        let ctx = datasets::ratings_at_least_three();
        let b = BooleanMatrix::from(&ctx);
        assert_eq!(BooleanMatrix::from_context(&b.to_context()), b);
        assert_eq!(b.to_context().rows(), ctx.rows());
    }

    #[test]
    fn product_basics() {
        let q = m("1100\n0011\n0110");
        assert_eq!(boolean_product(&BooleanMatrix::identity(3), &q).unwrap(), q);
        assert_eq!(boolean_product(&BooleanMatrix::zeros(2, 3), &q).unwrap(), BooleanMatrix::zeros(2, 4));
        assert!(matches!(boolean_product(&q, &q), Err(FcaError::Dimension(_))));
    }

    #[test]
    fn published_decomposition() {
        let i = BooleanMatrix::from(&datasets::ratings_at_least_three());
        let p = m("100\n110\n010\n011\n001\n001");
        let q = m("1110000\n0001100\n0000011");
        assert_eq!(boolean_product(&p, &q).unwrap(), i);
    }

    #[test]
    fn three_factors() {
        let i = BooleanMatrix::from(&datasets::ratings_at_least_three());
        let f = factorize(&i, &Fraction::from_integer(1)).unwrap();
        assert_eq!(f.k(), 3);
        assert_eq!(f.product(), i);
        let ctx = i.to_context();
        assert!(f.factors.iter().all(|c| c.is_valid_in(&ctx)));
    }

    #[test]
    fn full_rectangle_is_one_factor() {
        let f = factorize(&m("111\n111"), &Fraction::from_integer(1)).unwrap();
        assert_eq!(f.k(), 1);
        assert_eq!(factorize(&m("000\n000"), &Fraction::from_integer(1)).unwrap().k(), 0);
    }

    #[test]
    fn partial_coverage() {
        let i = m("1100\n1100\n0011\n0001");
        let f = factorize(&i, &Fraction::new(1, 2)).unwrap();
        assert_eq!(f.k(), 1);
        assert!(f.product().is_below(&i));
        assert!(factorize(&i, &Fraction::new(0, 1)).is_err());
        assert!(factorize(&i, &Fraction::new(3, 2)).is_err());
    }

    #[test]
    fn projection_edges() {
        let i = m("1100\n0011");
        let q = m("1100");
        let p = weighted_projection(&i, &q).unwrap();
        assert_eq!(p, vec![vec![Fraction::from_integer(1)], vec![Fraction::from_integer(0)]]);
        assert!(weighted_projection(&i, &m("0000")).is_err());
        assert!(weighted_projection(&i, &m("110")).is_err());
    }

    #[test]
    fn published_factors_are_concepts() {
        let ctx = datasets::movie_features();
        let q = BooleanMatrix::parse(&datasets::MOVIE_FEATURE_FACTORS.join("\n").replace('X', "1").replace('.', "0")).unwrap();
        for f in 0..q.n_rows() {
            assert_eq!(ctx.close_attributes(q.row(f)), *q.row(f));
        }
        let i = BooleanMatrix::from(&ctx);
        let p = weighted_projection(&i, &q).unwrap();
        assert_eq!(p[0][1], Fraction::new(1, 5));
    }
}
