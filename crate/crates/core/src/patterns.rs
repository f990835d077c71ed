//! Interval pattern structures: interval vectors, their meet, the two
//! derivation operators and pattern concepts.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use crate::bitset::BitSet;
use crate::error::{FcaError, Result};

/// Default largest object count for [`pattern_concepts`].
pub const DEFAULT_PATTERN_CAP: usize = 20;

/// An interval end point on the extended rational line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    NegInf,
    Finite(Rational64),
    PosInf,
}

impl Bound {
    pub fn int(v: i64) -> Bound {
        Bound::Finite(Rational64::from_integer(v))
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::PosInf => f.write_str("+inf"),
            Bound::Finite(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound) -> Result<Interval> {
        if lo > hi {
            return Err(FcaError::Invalid(format!("interval [{lo}, {hi}] has lo > hi")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(v: Rational64) -> Interval {
        Interval {
            lo: Bound::Finite(v),
            hi: Bound::Finite(v),
        }
    }

    pub fn int(lo: i64, hi: i64) -> Interval {
        Interval::new(Bound::int(lo), Bound::int(hi)).expect("lo <= hi")
    }

    /// `[-inf, +inf]`, the most general interval.
    pub fn unconstrained() -> Interval {
        Interval {
            lo: Bound::NegInf,
            hi: Bound::PosInf,
        }
    }

    /// The neutral element of the meet, `[+inf, -inf]`.
    pub fn empty() -> Interval {
        Interval {
            lo: Bound::PosInf,
            hi: Bound::NegInf,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    /// Convex hull.
    pub fn meet(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// `self ⊑ other` iff `self ⊓ other = self`, i.e. `self ⊇ other`.
    pub fn subsumes(&self, other: &Interval) -> bool {
        self.meet(other) == *self
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A vector of intervals. Every component satisfies `lo <= hi` except in the
/// designated top pattern returned by [`IntervalVector::top`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalVector(Vec<Interval>);

impl IntervalVector {
    pub fn new(components: Vec<Interval>) -> Result<Self> {
        if let Some(c) = components.iter().find(|c| c.is_empty()) {
            return Err(FcaError::Invalid(format!("interval {c} has lo > hi")));
        }
        Ok(IntervalVector(components))
    }

    /// Point values `v` read as `[v, v]`.
    pub fn from_points(values: &[i64]) -> Self {
        IntervalVector(values.iter().map(|&v| Interval::int(v, v)).collect())
    }

    /// The most specific pattern: the meet over no descriptions.
    pub fn top(arity: usize) -> Self {
        IntervalVector(vec![Interval::empty(); arity])
    }

    pub fn is_top(&self) -> bool {
        self.0.iter().all(Interval::is_empty)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Interval] {
        &self.0
    }

    pub fn meet(&self, other: &IntervalVector) -> Result<IntervalVector> {
        check_arity(self.arity(), other.arity())?;
        Ok(IntervalVector(self.0.iter().zip(&other.0).map(|(a, b)| a.meet(b)).collect()))
    }

    /// `self ⊑ other` iff `self ⊓ other = self`.
    pub fn subsumes(&self, other: &IntervalVector) -> Result<bool> {
        check_arity(self.arity(), other.arity())?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a.subsumes(b)))
    }
}

impl fmt::Display for IntervalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(">")
    }
}

fn check_arity(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(FcaError::Dimension(format!("interval vectors of arity {a} and {b}")));
    }
    Ok(())
}

pub fn interval_meet(e: &IntervalVector, f: &IntervalVector) -> Result<IntervalVector> {
    e.meet(f)
}

/// `(G, (D, ⊓), δ)` with interval-vector descriptions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternStructure {
    objects: Vec<String>,
    components: Vec<String>,
    descriptions: Vec<IntervalVector>,
}

impl PatternStructure {
    pub fn new(objects: Vec<String>, components: Vec<String>, descriptions: Vec<IntervalVector>) -> Result<Self> {
        if objects.len() != descriptions.len() {
            return Err(FcaError::Dimension(format!(
                "{} descriptions for {} objects",
                descriptions.len(),
                objects.len()
            )));
        }
        for d in &descriptions {
            check_arity(components.len(), d.arity())?;
        }
        Ok(PatternStructure {
            objects,
            components,
            descriptions,
        })
    }

    /// Point-valued table, one row per object.
    pub fn from_points<S: Into<String>, T: Into<String>>(
        objects: impl IntoIterator<Item = S>,
        components: impl IntoIterator<Item = T>,
        rows: &[&[i64]],
    ) -> Result<Self> {
        PatternStructure::new(
            objects.into_iter().map(Into::into).collect(),
            components.into_iter().map(Into::into).collect(),
            rows.iter().map(|r| IntervalVector::from_points(r)).collect(),
        )
    }

    /// Numeric CSV: header of component names after a corner cell, one row
    /// per object. Cells are numbers (`v`, `p/q`, decimals) or intervals
    /// `[lo;hi]` (quote the cell to use a comma separator).
    pub fn parse_csv(text: &str) -> Result<PatternStructure> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut header: Option<Vec<String>> = None;
        let mut objects = Vec::new();
        let mut descriptions = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| FcaError::Parse {
                line: e.position().map_or(0, |p| p.line() as usize),
                message: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            if rec.iter().all(|f| f.trim().is_empty()) {
                continue;
            }
            let Some(h) = &header else {
                header = Some(rec.iter().skip(1).map(|s| s.trim().to_string()).collect());
                continue;
            };
            if rec.len() != h.len() + 1 {
                return Err(FcaError::Parse {
                    line,
                    message: format!("row has {} fields, expected {}", rec.len(), h.len() + 1),
                });
            }
            objects.push(rec[0].trim().to_string());
            let comps = rec
                .iter()
                .skip(1)
                .map(|cell| parse_interval(cell).map_err(|message| FcaError::Parse { line, message }))
                .collect::<Result<Vec<_>>>()?;
            descriptions.push(IntervalVector(comps));
        }
        PatternStructure::new(objects, header.unwrap_or_default(), descriptions)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn description(&self, g: usize) -> &IntervalVector {
        &self.descriptions[g]
    }

    /// `A□`: the meet of all descriptions in `A`; the top pattern for `∅`.
    pub fn derive_objects(&self, a: &BitSet) -> IntervalVector {
        let mut acc = IntervalVector::top(self.arity());
        for g in a {
            acc = acc.meet(&self.descriptions[g]).expect("uniform arity");
        }
        acc
    }

    /// `d□ = {g : d ⊑ δ(g)}`.
    pub fn derive_pattern(&self, d: &IntervalVector) -> Result<BitSet> {
        check_arity(self.arity(), d.arity())?;
        let mut out = BitSet::empty(self.len());
        for (g, desc) in self.descriptions.iter().enumerate() {
            if d.subsumes(desc)? {
                out.insert(g);
            }
        }
        Ok(out)
    }

    pub fn close(&self, a: &BitSet) -> BitSet {
        self.derive_pattern(&self.derive_objects(a)).expect("uniform arity")
    }

    /// A pattern constraining one named component, all others unconstrained.
    pub fn single_component(&self, component: &str, interval: Interval) -> Result<IntervalVector> {
        let idx = self
            .components
            .iter()
            .position(|c| c == component)
            .ok_or_else(|| FcaError::UnknownLabel {
                side: "component",
                label: component.to_string(),
            })?;
        let mut v = vec![Interval::unconstrained(); self.arity()];
        v[idx] = interval;
        Ok(IntervalVector(v))
    }
}

fn parse_number(text: &str) -> std::result::Result<Rational64, String> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let f = crate::fraction::parse_fraction(body).map_err(|_| format!("{t:?} is not a number"))?;
    let (n, d) = (*f.numer(), *f.denom());
    let n = i64::try_from(n).map_err(|_| format!("{t:?} is out of range"))?;
    let d = i64::try_from(d).map_err(|_| format!("{t:?} is out of range"))?;
    let r = Rational64::new(n, d);
    Ok(if neg { -r } else { r })
}

fn parse_bound(text: &str) -> std::result::Result<Bound, String> {
    match text.trim() {
        "-inf" => Ok(Bound::NegInf),
        "+inf" | "inf" => Ok(Bound::PosInf),
        t => parse_number(t).map(Bound::Finite),
    }
}

/// `v` or `[lo, hi]`.
pub fn parse_interval(cell: &str) -> std::result::Result<Interval, String> {
    let c = cell.trim();
    if let Some(inner) = c.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
        let (lo, hi) = inner.split_once([',', ';']).ok_or_else(|| format!("{c:?} is not an interval"))?;
        let (lo, hi) = (parse_bound(lo)?, parse_bound(hi)?);
        return Interval::new(lo, hi).map_err(|e| e.to_string());
    }
    if c.is_empty() {
        return Ok(Interval::point(Rational64::zero()));
    }
    parse_number(c).map(Interval::point)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternConcept {
    pub extent: BitSet,
    pub pattern: IntervalVector,
}

/// All pattern concepts, by Close-by-One over object sets with the closure
/// `A ↦ A□□`. Fails above `cap` objects.
pub fn pattern_concepts(ps: &PatternStructure, cap: usize) -> Result<Vec<PatternConcept>> {
    if ps.len() > cap {
        return Err(FcaError::SizeLimit {
            what: "pattern structure",
            size: ps.len(),
            limit: cap,
        });
    }
    let mut out = Vec::new();
    let start = ps.close(&BitSet::empty(ps.len()));
    process(ps, start, 0, &mut out);
    Ok(out)
}

fn process(ps: &PatternStructure, extent: BitSet, from: usize, out: &mut Vec<PatternConcept>) {
    let pattern = ps.derive_objects(&extent);
    out.push(PatternConcept {
        extent: extent.clone(),
        pattern: pattern.clone(),
    });
    for g in from..ps.len() {
        if extent.contains(g) {
            continue;
        }
        let next = ps.derive_pattern(&pattern.meet(ps.description(g)).expect("uniform arity")).expect("uniform arity");
        if next.agrees_below(&extent, g) {
            process(ps, next, g + 1, out);
        }
    }
}

/// Sort helper: concepts by extent size then lectic order, for stable output.
pub fn sort_concepts(cs: &mut [PatternConcept]) {
    cs.sort_by(|a, b| match b.extent.len().cmp(&a.extent.len()) {
        Ordering::Equal => a.extent.lectic_cmp(&b.extent),
        o => o,
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    fn iv(pairs: &[(i64, i64)]) -> IntervalVector {
        IntervalVector::new(pairs.iter().map(|&(a, b)| Interval::int(a, b)).collect()).unwrap()
    }

    #[test]
    fn meets() {
        assert_eq!(iv(&[(4, 4)]).meet(&iv(&[(5, 5)])).unwrap(), iv(&[(4, 5)]));
        let e = iv(&[(0, 1), (3, 3)]);
        assert_eq!(e.meet(&e).unwrap(), e);
        assert_eq!(e.meet(&iv(&[(2, 2), (1, 4)])).unwrap(), iv(&[(0, 2), (1, 4)]));
        assert!(e.meet(&iv(&[(1, 1)])).is_err());
        let top = IntervalVector::top(2);
        assert_eq!(top.meet(&e).unwrap(), e);
    }

    #[test]
    fn movie_derivations() {
        let ps = datasets::movie_ratings();
        let u56 = BitSet::from_indices(6, [4, 5]);
        let d = ps.derive_objects(&u56);
        let mut expected = vec![(0, 0); 5];
        expected.extend([(4, 5), (4, 5)]);
        assert_eq!(d, iv(&expected));
        let leon = ps.single_component("Leon", Interval::int(4, 5)).unwrap();
        assert_eq!(ps.derive_pattern(&leon).unwrap(), u56);
        assert_eq!(ps.derive_objects(&BitSet::from_indices(6, [0])), *ps.description(0));
        assert_eq!(ps.derive_pattern(&d).unwrap(), u56);
    }

    #[test]
    fn one_object_structure() {
        let ps = PatternStructure::from_points(["g"], ["x"], &[&[3]]).unwrap();
        let cs = pattern_concepts(&ps, DEFAULT_PATTERN_CAP).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().any(|c| c.extent.is_empty() && c.pattern.is_top()));
    }

    #[test]
    fn cap_is_enforced() {
        let ps = datasets::movie_ratings();
        assert!(pattern_concepts(&ps, 5).unwrap_err().is_size_guard());
    }

    #[test]
    fn csv_cells() {
        let ps = PatternStructure::parse_csv(",a,b\nu1,4,\"[1,2]\"\nu2,-1/2,0.5\n").unwrap();
        assert_eq!(ps.description(0).components()[1], Interval::int(1, 2));
        assert_eq!(ps.description(1).components()[0], Interval::point(Rational64::new(-1, 2)));
        assert_eq!(ps.description(1).components()[1], Interval::point(Rational64::new(1, 2)));
        assert!(matches!(PatternStructure::parse_csv(",a\nu,[3,1]\n"), Err(FcaError::Parse { line: 2, .. })));
        assert!(matches!(PatternStructure::parse_csv(",a\nu,x\n"), Err(FcaError::Parse { line: 2, .. })));
    }
}
