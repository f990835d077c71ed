//! Object-attribute biclusters, triadic contexts, triconcepts and prime
//! OAC-triclusters.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{FcaError, Result};
use crate::fraction::{self, Fraction};

/// `(m', g')` generated by an incidence pair `(g, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OABicluster {
    pub extent: BitSet,
    pub intent: BitSet,
    /// The first pair that generated the bicluster.
    pub generator: (usize, usize),
    pub density: Fraction,
}

impl OABicluster {
    pub fn is_concept(&self) -> bool {
        self.density == Fraction::new(1, 1)
    }
}

/// Work done by a bicluster run: every bit of a row or column read counts as
/// one operation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BiclusterStats {
    pub pairs: usize,
    pub operations: u64,
}

/// `|I ∩ (A × B)| / (|A| |B|)`.
pub fn bicluster_density(ctx: &FormalContext, a: &BitSet, b: &BitSet) -> Result<Fraction> {
    if a.is_empty() {
        return Err(FcaError::EmptyDensity("object"));
    }
    if b.is_empty() {
        return Err(FcaError::EmptyDensity("attribute"));
    }
    let crosses: usize = a.iter().map(|g| ctx.row(g).intersection_len(b)).sum();
    Ok(fraction::ratio(crosses, a.len() * b.len()))
}

/// All OA-biclusters with density at least `rho_min`, duplicates removed, in
/// order of their first generating pair.
pub fn oa_biclusters(ctx: &FormalContext, rho_min: &Fraction) -> Result<Vec<OABicluster>> {
    Ok(oa_biclusters_with_stats(ctx, rho_min)?.0)
}

pub fn oa_biclusters_with_stats(ctx: &FormalContext, rho_min: &Fraction) -> Result<(Vec<OABicluster>, BiclusterStats)> {
    fraction::check_unit("rho_min", rho_min)?;
    let mut stats = BiclusterStats::default();
    let mut seen: HashSet<(BitSet, BitSet)> = HashSet::new();
    let mut out = Vec::new();
    let (n, m) = (ctx.n_objects() as u64, ctx.n_attributes() as u64);
    for g in 0..ctx.n_objects() {
        for attr in ctx.row(g) {
            stats.pairs += 1;
            let extent = ctx.column(attr).clone();
            let intent = ctx.row(g).clone();
            stats.operations += n + m;
            if !seen.insert((extent.clone(), intent.clone())) {
                continue;
            }
            let density = bicluster_density(ctx, &extent, &intent).expect("generated by a cross");
            if *rho_min.numer() > 0 {
                // density check reads every row of the extent
                stats.operations += extent.len() as u64 * m;
                if density < *rho_min {
                    continue;
                }
            }
            out.push(OABicluster {
                extent,
                intent,
                generator: (g, attr),
                density,
            });
        }
    }
    Ok((out, stats))
}

/// A triadic context `(G, M, B, Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    conditions: Vec<String>,
    triples: Vec<(usize, usize, usize)>,
    /// `(m, b) -> {g}`
    by_mb: HashMap<(usize, usize), BitSet>,
    /// `(g, b) -> {m}`
    by_gb: HashMap<(usize, usize), BitSet>,
    /// `(g, m) -> {b}`
    by_gm: HashMap<(usize, usize), BitSet>,
}

impl TriContext {
    pub fn new<S: Into<String>>(
        objects: impl IntoIterator<Item = S>,
        attributes: impl IntoIterator<Item = S>,
        conditions: impl IntoIterator<Item = S>,
        triples: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        let attributes: Vec<String> = attributes.into_iter().map(Into::into).collect();
        let conditions: Vec<String> = conditions.into_iter().map(Into::into).collect();
        for (side, labels) in [("object", &objects), ("attribute", &attributes), ("condition", &conditions)] {
            let mut seen = HashSet::new();
            if let Some(l) = labels.iter().find(|l| !seen.insert(l.as_str())) {
                return Err(FcaError::DuplicateLabel { side, label: l.clone() });
            }
        }
        let (ng, nm, nb) = (objects.len(), attributes.len(), conditions.len());
        let mut uniq: Vec<(usize, usize, usize)> = Vec::new();
        let mut set = HashSet::new();
        for t in triples {
            for (side, index, size) in [("object", t.0, ng), ("attribute", t.1, nm), ("condition", t.2, nb)] {
                if index >= size {
                    return Err(FcaError::IndexOutOfRange { side, index, size });
                }
            }
            if set.insert(t) {
                uniq.push(t);
            }
        }
        let mut by_mb: HashMap<(usize, usize), BitSet> = HashMap::new();
        let mut by_gb: HashMap<(usize, usize), BitSet> = HashMap::new();
        let mut by_gm: HashMap<(usize, usize), BitSet> = HashMap::new();
        for &(g, m, b) in &uniq {
            by_mb.entry((m, b)).or_insert_with(|| BitSet::empty(ng)).insert(g);
            by_gb.entry((g, b)).or_insert_with(|| BitSet::empty(nm)).insert(m);
            by_gm.entry((g, m)).or_insert_with(|| BitSet::empty(nb)).insert(b);
        }
        Ok(TriContext {
            objects,
            attributes,
            conditions,
            triples: uniq,
            by_mb,
            by_gb,
            by_gm,
        })
    }

    /// Builds a context from labelled triples; entities are numbered in order
    /// of first appearance.
    pub fn from_labelled<S: AsRef<str>>(triples: &[(S, S, S)]) -> Result<Self> {
        let mut names: [Vec<String>; 3] = Default::default();
        let mut index: [HashMap<String, usize>; 3] = Default::default();
        let mut ids = Vec::with_capacity(triples.len());
        for (a, b, c) in triples {
            let mut id = [0usize; 3];
            for (k, label) in [a.as_ref(), b.as_ref(), c.as_ref()].into_iter().enumerate() {
                let label = label.trim().to_string();
                id[k] = *index[k].entry(label.clone()).or_insert_with(|| {
                    names[k].push(label);
                    names[k].len() - 1
                });
            }
            ids.push((id[0], id[1], id[2]));
        }
        let [g, m, b] = names;
        TriContext::new(g, m, b, ids)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn conditions(&self) -> &[String] {
        &self.conditions
    }

    pub fn triples(&self) -> &[(usize, usize, usize)] {
        &self.triples
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.objects.len(), self.attributes.len(), self.conditions.len())
    }

    pub fn has(&self, g: usize, m: usize, b: usize) -> bool {
        self.by_gm.get(&(g, m)).is_some_and(|s| s.contains(b))
    }

    /// Objects related to both `m` and `b`.
    pub fn prime_mb(&self, m: usize, b: usize) -> BitSet {
        self.by_mb.get(&(m, b)).cloned().unwrap_or_else(|| BitSet::empty(self.objects.len()))
    }

    /// Attributes related to both `g` and `b`.
    pub fn prime_gb(&self, g: usize, b: usize) -> BitSet {
        self.by_gb.get(&(g, b)).cloned().unwrap_or_else(|| BitSet::empty(self.attributes.len()))
    }

    /// Conditions related to both `g` and `m`.
    pub fn prime_gm(&self, g: usize, m: usize) -> BitSet {
        self.by_gm.get(&(g, m)).cloned().unwrap_or_else(|| BitSet::empty(self.conditions.len()))
    }

    /// Number of triples inside the cuboid `x × y × z`.
    pub fn count_in(&self, x: &BitSet, y: &BitSet, z: &BitSet) -> usize {
        x.iter()
            .flat_map(|g| y.iter().map(move |m| (g, m)))
            .map(|(g, m)| self.by_gm.get(&(g, m)).map_or(0, |s| s.intersection_len(z)))
            .sum()
    }

    /// Parses `object,attribute,condition` lines. A header line equal to
    /// `object,attribute,condition` is skipped.
    pub fn parse_csv(text: &str) -> Result<TriContext> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut triples = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| FcaError::Parse {
                line: e.position().map_or(0, |p| p.line() as usize),
                message: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            if rec.iter().all(|f| f.trim().is_empty()) {
                continue;
            }
            if rec.len() != 3 {
                return Err(FcaError::Parse {
                    line,
                    message: format!("expected 3 fields, found {}", rec.len()),
                });
            }
            let t = (rec[0].trim().to_string(), rec[1].trim().to_string(), rec[2].trim().to_string());
            if line == 1 && t.0.eq_ignore_ascii_case("object") && t.1.eq_ignore_ascii_case("attribute") && t.2.eq_ignore_ascii_case("condition") {
                continue;
            }
            triples.push(t);
        }
        TriContext::from_labelled(&triples)
    }
}

/// `X × Y × Z ⊆ Y` and no component can be enlarged.
pub fn is_triconcept(t: &TriContext, x: &BitSet, y: &BitSet, z: &BitSet) -> bool {
    if t.count_in(x, y, z) != x.len() * y.len() * z.len() {
        return false;
    }
    let (ng, nm, nb) = t.sizes();
    let full = |xs: &BitSet, ys: &BitSet, zs: &BitSet| t.count_in(xs, ys, zs) == xs.len() * ys.len() * zs.len();
    let grow_x = (0..ng).filter(|g| !x.contains(*g)).any(|g| full(&BitSet::from_indices(ng, [g]), y, z));
    let grow_y = (0..nm).filter(|m| !y.contains(*m)).any(|m| full(x, &BitSet::from_indices(nm, [m]), z));
    let grow_z = (0..nb).filter(|b| !z.contains(*b)).any(|b| full(x, y, &BitSet::from_indices(nb, [b])));
    !(grow_x || grow_y || grow_z)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tricluster {
    pub extent: BitSet,
    pub intent: BitSet,
    pub modus: BitSet,
    pub density: Fraction,
}

/// `ρ = |Y ∩ (X × Y × Z)| / (|X| |Y| |Z|)`.
pub fn tricluster_density(t: &TriContext, x: &BitSet, y: &BitSet, z: &BitSet) -> Result<Fraction> {
    for (what, s) in [("object", x), ("attribute", y), ("condition", z)] {
        if s.is_empty() {
            return Err(FcaError::EmptyDensity(what));
        }
    }
    Ok(fraction::ratio(t.count_in(x, y, z), x.len() * y.len() * z.len()))
}

/// Prime OAC-triclusters: each triple `(g, m, b)` yields
/// `(prime(m,b), prime(g,b), prime(g,m))`; duplicates removed, then filtered
/// by `ρ >= rho_min`.
pub fn prime_oac_triclusters(t: &TriContext, rho_min: &Fraction) -> Result<Vec<Tricluster>> {
    fraction::check_unit("rho_min", rho_min)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &(g, m, b) in t.triples() {
        let x = t.prime_mb(m, b);
        let y = t.prime_gb(g, b);
        let z = t.prime_gm(g, m);
        if !seen.insert((x.clone(), y.clone(), z.clone())) {
            continue;
        }
        let density = tricluster_density(t, &x, &y, &z).expect("contains the generating triple");
        if density >= *rho_min {
            out.push(Tricluster {
                extent: x,
                intent: y,
                modus: z,
                density,
            });
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct BiclusterOut {
    extent: Vec<String>,
    intent: Vec<String>,
    generator: [String; 2],
    density: String,
    density_value: f64,
}

pub fn biclusters_to_json(ctx: &FormalContext, bs: &[OABicluster]) -> serde_json::Value {
    let list: Vec<BiclusterOut> = bs
        .iter()
        .map(|b| BiclusterOut {
            extent: ctx.object_labels(&b.extent),
            intent: ctx.attribute_labels(&b.intent),
            generator: [ctx.objects()[b.generator.0].clone(), ctx.attributes()[b.generator.1].clone()],
            density: b.density.to_string(),
            density_value: fraction::to_f64(&b.density),
        })
        .collect();
    serde_json::to_value(list).expect("serializable")
}

fn labels(names: &[String], s: &BitSet) -> Vec<String> {
    s.iter().map(|i| names[i].clone()).collect()
}

#[derive(Serialize)]
struct TriclusterOut {
    extent: Vec<String>,
    intent: Vec<String>,
    modus: Vec<String>,
    density: String,
    density_value: f64,
}

pub fn triclusters_to_json(t: &TriContext, ts: &[Tricluster]) -> serde_json::Value {
    let list: Vec<TriclusterOut> = ts
        .iter()
        .map(|c| TriclusterOut {
            extent: labels(t.objects(), &c.extent),
            intent: labels(t.attributes(), &c.intent),
            modus: labels(t.conditions(), &c.modus),
            density: c.density.to_string(),
            density_value: fraction::to_f64(&c.density),
        })
        .collect();
    serde_json::to_value(list).expect("serializable")
}

/// Human-readable labels of a tricluster's three components.
pub fn tricluster_labels(t: &TriContext, c: &Tricluster) -> [Vec<String>; 3] {
    [
        labels(t.objects(), &c.extent),
        labels(t.attributes(), &c.intent),
        labels(t.conditions(), &c.modus),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    #[test]
    fn exercise_densities() {
        let ctx = datasets::bicluster_exercise();
        let bs = oa_biclusters(&ctx, &Fraction::new(0, 1)).unwrap();
        let b1 = bs.iter().find(|b| b.generator == (2, 4)).unwrap();
        assert_eq!(ctx.object_labels(&b1.extent), ["g1", "g3", "g4", "g5"]);
        assert_eq!(ctx.attribute_labels(&b1.intent), ["m1", "m4", "m5"]);
        assert_eq!(b1.density, Fraction::new(1, 1));
        let b2 = bs.iter().find(|b| b.extent.is_full() && b.intent.is_full()).unwrap();
        assert_eq!(b2.density, Fraction::new(18, 25));
        let b3 = bicluster_density(&ctx, &BitSet::full(5), &BitSet::from_indices(5, [0, 1, 2])).unwrap();
        assert_eq!(b3, Fraction::new(9, 15));
        assert!(bs.len() <= ctx.incidence_count());
    }

    #[test]
    fn density_edge_cases() {
        let ctx = datasets::bicluster_exercise();
        let full = bicluster_density(&ctx, &BitSet::from_indices(5, [0]), &BitSet::full(5)).unwrap();
        assert_eq!(full, Fraction::new(1, 1));
        let sparse = bicluster_density(&ctx, &BitSet::from_indices(5, [2, 3]), &BitSet::from_indices(5, [1, 2])).unwrap();
        assert_eq!(sparse, Fraction::new(0, 1));
        assert_eq!(
            bicluster_density(&ctx, &BitSet::empty(5), &BitSet::full(5)),
            Err(FcaError::EmptyDensity("object"))
        );
    }

    #[test]
    fn rho_filter_is_exact() {
        let ctx = datasets::bicluster_exercise();
        let dense = oa_biclusters(&ctx, &Fraction::new(18, 25)).unwrap();
        assert!(dense.iter().all(|b| b.density >= Fraction::new(18, 25)));
        assert!(dense.iter().any(|b| b.density == Fraction::new(18, 25)));
        let concepts = oa_biclusters(&ctx, &Fraction::new(1, 1)).unwrap();
        assert!(concepts.iter().all(|b| b.is_concept()));
    }

    #[test]
    fn bibsonomy_triconcept() {
        let t = datasets::bibsonomy();
        let x = BitSet::from_indices(t.objects().len(), [0, 1]);
        let dv = t.attributes().iter().position(|a| a == "Domestic Violence").unwrap();
        let p3 = t.conditions().iter().position(|c| c == "paper3").unwrap();
        let y = BitSet::from_indices(t.attributes().len(), [dv]);
        let z = BitSet::from_indices(t.conditions().len(), [p3]);
        assert_eq!(&t.objects()[..2], ["Poelmans", "Elzinga"]);
        assert!(is_triconcept(&t, &x, &y, &z));
        // dropping Elzinga loses maximality
        assert!(!is_triconcept(&t, &BitSet::from_indices(t.objects().len(), [0]), &y, &z));
        let tcs = prime_oac_triclusters(&t, &Fraction::new(0, 1)).unwrap();
        assert!(tcs.iter().any(|c| x.is_subset(&c.extent) && y.is_subset(&c.intent) && z.is_subset(&c.modus)));
    }

    #[test]
    fn full_cuboid() {
        let triples = (0..2).flat_map(|g| (0..2).flat_map(move |m| (0..2).map(move |b| (g, m, b))));
        let t = TriContext::new(["g1", "g2"], ["m1", "m2"], ["b1", "b2"], triples).unwrap();
        let all = BitSet::full(2);
        assert!(is_triconcept(&t, &all, &all, &all));
        let tcs = prime_oac_triclusters(&t, &Fraction::new(1, 1)).unwrap();
        assert_eq!(tcs.len(), 1);
        assert_eq!(tcs[0].density, Fraction::new(1, 1));
        let t2 = TriContext::new(["g1", "g2"], ["m1", "m2"], ["b1", "b2"], [(0, 0, 0)]).unwrap();
        assert!(!is_triconcept(&t2, &all, &all, &all));
    }

    #[test]
    fn tricontext_csv() {
        let t = TriContext::parse_csv("object,attribute,condition\nu1,t1,r1\nu2,t1,r1\n\nu1,t2,r2\n").unwrap();
        assert_eq!(t.sizes(), (2, 2, 2));
        assert_eq!(t.triples().len(), 3);
        let err = TriContext::parse_csv("a,b,c\nd,e\n").unwrap_err();
        assert!(matches!(err, FcaError::Parse { line: 2, .. }));
    }

    #[test]
    fn stats_count_row_and_column_reads() {
        let ctx = datasets::bicluster_exercise();
        let (_, stats) = oa_biclusters_with_stats(&ctx, &Fraction::new(0, 1)).unwrap();
        assert_eq!(stats.pairs, ctx.incidence_count());
        assert_eq!(stats.operations, (ctx.incidence_count() * 10) as u64);
    }
}
