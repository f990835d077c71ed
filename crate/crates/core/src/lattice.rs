//! Concept enumeration (NextClosure, Close-by-One), the covering relation,
//! reduced labelling, iceberg filtering, stability and a layered layout.

use std::collections::HashMap;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{FcaError, Result};
use crate::fraction::{self, Fraction};

/// Largest lattice for which covers are computed.
pub const MAX_LATTICE_SIZE: usize = 50_000;

/// Default largest extent for exact stability.
pub const DEFAULT_STABILITY_CAP: usize = 20;

/// A pair `(extent, intent)` with `extent' = intent` and `intent' = extent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalConcept {
    pub extent: BitSet,
    pub intent: BitSet,
}

impl FormalConcept {
    /// Checks both derivation equalities against `ctx`.
    pub fn new(ctx: &FormalContext, extent: BitSet, intent: BitSet) -> Result<Self> {
        if ctx.intent_of(&extent) != intent || ctx.extent_of(&intent) != extent {
            return Err(FcaError::Inconsistent(format!(
                "({:?}, {:?}) is not a formal concept",
                extent, intent
            )));
        }
        Ok(FormalConcept { extent, intent })
    }

    /// The concept generated by an object set, `(A'', A')`.
    pub fn from_objects(ctx: &FormalContext, objects: &BitSet) -> Self {
        let intent = ctx.intent_of(objects);
        FormalConcept {
            extent: ctx.extent_of(&intent),
            intent,
        }
    }

    /// The concept generated by an attribute set, `(B', B'')`.
    pub fn from_attributes(ctx: &FormalContext, attributes: &BitSet) -> Self {
        let extent = ctx.extent_of(attributes);
        FormalConcept {
            intent: ctx.intent_of(&extent),
            extent,
        }
    }

    pub fn is_valid_in(&self, ctx: &FormalContext) -> bool {
        ctx.intent_of(&self.extent) == self.intent && ctx.extent_of(&self.intent) == self.extent
    }

    /// Subconcept order: `self <= other` iff `self.extent ⊆ other.extent`.
    pub fn is_subconcept_of(&self, other: &FormalConcept) -> bool {
        self.extent.is_subset(&other.extent)
    }
}

/// Ganter's NextClosure over object sets, as a lazy iterator.
///
/// Objects are ordered by their input position. Closed extents are produced in
/// lectic order starting at `∅''` and ending at `G`, each exactly once, with
/// only the current extent held between steps.
pub struct NextClosure<'a> {
    ctx: &'a FormalContext,
    current: Option<BitSet>,
    started: bool,
}

impl<'a> NextClosure<'a> {
    pub fn new(ctx: &'a FormalContext) -> Self {
        NextClosure {
            ctx,
            current: None,
            started: false,
        }
    }

    fn next_extent(&self, a: &BitSet) -> Option<BitSet> {
        let n = self.ctx.n_objects();
        for g in (0..n).rev() {
            if a.contains(g) {
                continue;
            }
            let mut candidate = a.intersection(&BitSet::prefix(n, g));
            candidate.insert(g);
            let closed = self.ctx.close_objects(&candidate);
            if closed.agrees_below(a, g) {
                return Some(closed);
            }
        }
        None
    }
}

impl Iterator for NextClosure<'_> {
    type Item = FormalConcept;

    fn next(&mut self) -> Option<FormalConcept> {
        let next = if !self.started {
            self.started = true;
            Some(self.ctx.close_objects(&BitSet::empty(self.ctx.n_objects())))
        } else {
            let cur = self.current.as_ref()?;
            if cur.is_full() {
                None
            } else {
                self.next_extent(cur)
            }
        };
        self.current = next.clone();
        next.map(|extent| FormalConcept {
            intent: self.ctx.intent_of(&extent),
            extent,
        })
    }
}

/// All concepts of `ctx` in NextClosure's lectic order over extents.
pub fn next_closure_concepts(ctx: &FormalContext) -> Vec<FormalConcept> {
    NextClosure::new(ctx).collect()
}

/// One node of the Close-by-One generation tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CboStep {
    /// Index of the parent step; `None` for the root `(∅'', ∅')`.
    pub parent: Option<usize>,
    /// Object added to the parent's extent.
    pub added: Option<usize>,
    /// The closure `(A ∪ {g})''`.
    pub extent: BitSet,
    pub canonical: bool,
}

/// Close-by-One: depth-first generation of all concepts.
///
/// A generation `(A ∪ {g})''` is rejected as non-canonical when it adds an
/// object lectically smaller than `g` that was not already in `A`.
pub fn close_by_one(ctx: &FormalContext) -> Vec<FormalConcept> {
    let mut out = Vec::new();
    cbo_run(ctx, &mut out, None);
    out
}

/// Close-by-One that also records every generation, canonical or not.
pub fn close_by_one_with_tree(ctx: &FormalContext) -> (Vec<FormalConcept>, Vec<CboStep>) {
    let mut out = Vec::new();
    let mut tree = Vec::new();
    cbo_run(ctx, &mut out, Some(&mut tree));
    (out, tree)
}

fn cbo_run(ctx: &FormalContext, out: &mut Vec<FormalConcept>, mut tree: Option<&mut Vec<CboStep>>) {
    let n = ctx.n_objects();
    let intent = ctx.intent_of(&BitSet::empty(n));
    let extent = ctx.extent_of(&intent);
    if let Some(t) = tree.as_deref_mut() {
        t.push(CboStep {
            parent: None,
            added: None,
            extent: extent.clone(),
            canonical: true,
        });
    }
    cbo_process(ctx, extent, intent, 0, 0, out, &mut tree);
}

fn cbo_process(
    ctx: &FormalContext,
    extent: BitSet,
    intent: BitSet,
    from: usize,
    node: usize,
    out: &mut Vec<FormalConcept>,
    tree: &mut Option<&mut Vec<CboStep>>,
) {
    let n = ctx.n_objects();
    out.push(FormalConcept {
        extent: extent.clone(),
        intent: intent.clone(),
    });
    for g in from..n {
        if extent.contains(g) {
            continue;
        }
        let new_intent = intent.intersection(ctx.row(g));
        let new_extent = ctx.extent_of(&new_intent);
        let canonical = new_extent.agrees_below(&extent, g);
        let child = match tree.as_deref_mut() {
            Some(t) => {
                t.push(CboStep {
                    parent: Some(node),
                    added: Some(g),
                    extent: new_extent.clone(),
                    canonical,
                });
                t.len() - 1
            }
            None => 0,
        };
        if canonical {
            cbo_process(ctx, new_extent, new_intent, g + 1, child, out, tree);
        }
    }
}

/// A concept lattice with its covering relation and reduced labelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptLattice {
    concepts: Vec<FormalConcept>,
    /// `(lower, upper)` pairs of the covering relation.
    covers: Vec<(usize, usize)>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    /// Object concept index per object.
    object_concepts: Vec<usize>,
    /// Attribute concept index per attribute.
    attribute_concepts: Vec<usize>,
    index: HashMap<BitSet, usize>,
    top: usize,
    bottom: usize,
}

impl ConceptLattice {
    /// Builds the lattice from the complete concept set of `ctx`.
    ///
    /// The concept order is preserved. Fails if the list contains a
    /// non-concept, a duplicate, or is missing a concept.
    pub fn build(ctx: &FormalContext, concepts: Vec<FormalConcept>) -> Result<ConceptLattice> {
        if concepts.len() > MAX_LATTICE_SIZE {
            return Err(FcaError::SizeLimit {
                what: "concept lattice",
                size: concepts.len(),
                limit: MAX_LATTICE_SIZE,
            });
        }
        let mut index = HashMap::with_capacity(concepts.len());
        for (i, c) in concepts.iter().enumerate() {
            if !c.is_valid_in(ctx) {
                return Err(FcaError::Inconsistent(format!(
                    "entry {i} with extent {:?} is not a concept",
                    c.extent
                )));
            }
            if index.insert(c.extent.clone(), i).is_some() {
                return Err(FcaError::Inconsistent(format!(
                    "extent {:?} listed twice",
                    c.extent
                )));
            }
        }
        let n = ctx.n_objects();
        let bottom_extent = ctx.close_objects(&BitSet::empty(n));
        let bottom = *index
            .get(&bottom_extent)
            .ok_or_else(|| FcaError::Inconsistent("bottom concept missing".into()))?;
        let top = *index
            .get(&BitSet::full(n))
            .ok_or_else(|| FcaError::Inconsistent("top concept missing".into()))?;

        // Upper neighbours of (A, B) are the minimal closures (A ∪ {g})'' for
        // g ∉ A; a candidate X is minimal iff exactly |X \ A| objects generate it.
        let mut upper = vec![Vec::new(); concepts.len()];
        let mut lower = vec![Vec::new(); concepts.len()];
        let mut covers = Vec::new();
        for (i, c) in concepts.iter().enumerate() {
            let mut generated: HashMap<BitSet, usize> = HashMap::new();
            for g in 0..n {
                if c.extent.contains(g) {
                    continue;
                }
                let x = ctx.extent_of(&c.intent.intersection(ctx.row(g)));
                *generated.entry(x).or_insert(0) += 1;
            }
            let mut ups = Vec::new();
            for (x, count) in generated {
                let j = *index.get(&x).ok_or_else(|| {
                    FcaError::Inconsistent(format!("concept with extent {x:?} missing"))
                })?;
                if count == x.len() - c.extent.len() {
                    ups.push(j);
                }
            }
            ups.sort_unstable();
            for &j in &ups {
                covers.push((i, j));
                lower[j].push(i);
            }
            upper[i] = ups;
        }
        for l in lower.iter_mut() {
            l.sort_unstable();
        }
        covers.sort_unstable();

        let object_concepts = (0..n)
            .map(|g| index[&ctx.close_objects(&BitSet::from_indices(n, [g]))])
            .collect();
        let attribute_concepts = (0..ctx.n_attributes())
            .map(|m| index[ctx.column(m)])
            .collect();
        Ok(ConceptLattice {
            concepts,
            covers,
            upper,
            lower,
            object_concepts,
            attribute_concepts,
            index,
            top,
            bottom,
        })
    }

    /// Enumerates with NextClosure and builds the lattice.
    pub fn from_context(ctx: &FormalContext) -> Result<ConceptLattice> {
        let mut concepts = Vec::new();
        for c in NextClosure::new(ctx) {
            concepts.push(c);
            if concepts.len() > MAX_LATTICE_SIZE {
                return Err(FcaError::SizeLimit {
                    what: "concept lattice",
                    size: concepts.len(),
                    limit: MAX_LATTICE_SIZE,
                });
            }
        }
        ConceptLattice::build(ctx, concepts)
    }

    pub fn concepts(&self) -> &[FormalConcept] {
        &self.concepts
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concept(&self, i: usize) -> &FormalConcept {
        &self.concepts[i]
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.upper[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower[i]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn index_of_extent(&self, extent: &BitSet) -> Option<usize> {
        self.index.get(extent).copied()
    }

    /// Index of the object concept `({g}'', {g}')`.
    pub fn object_concept(&self, g: usize) -> usize {
        self.object_concepts[g]
    }

    /// Index of the attribute concept `({m}', {m}'')`.
    pub fn attribute_concept(&self, m: usize) -> usize {
        self.attribute_concepts[m]
    }

    /// Objects labelling each concept under reduced labelling.
    pub fn object_labels(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.len()];
        for (g, &c) in self.object_concepts.iter().enumerate() {
            out[c].push(g);
        }
        out
    }

    /// Attributes labelling each concept under reduced labelling.
    pub fn attribute_labels(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.len()];
        for (m, &c) in self.attribute_concepts.iter().enumerate() {
            out[c].push(m);
        }
        out
    }

    /// Infimum `(A1 ∩ A2, (B1 ∪ B2)'')`.
    pub fn meet(&self, i: usize, j: usize) -> usize {
        let extent = self.concepts[i].extent.intersection(&self.concepts[j].extent);
        self.index[&extent]
    }

    /// Supremum `((A1 ∪ A2)'', B1 ∩ B2)`; looked up via the intent's extent.
    pub fn join(&self, ctx: &FormalContext, i: usize, j: usize) -> usize {
        let intent = self.concepts[i].intent.intersection(&self.concepts[j].intent);
        self.index[&ctx.extent_of(&intent)]
    }

    /// `c_i <= c_j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.concepts[i].is_subconcept_of(&self.concepts[j])
    }

    /// Diagram export: concepts by label, covers as `[lower, upper]` index
    /// pairs, reduced labels and the layered layout.
    pub fn to_json(&self, ctx: &FormalContext) -> serde_json::Value {
        let names = |v: &[usize], side: &[String]| v.iter().map(|&i| side[i].clone()).collect::<Vec<_>>();
        let concepts: Vec<_> = self
            .concepts
            .iter()
            .map(|c| {
                serde_json::json!({
                    "extent": ctx.object_labels(&c.extent),
                    "intent": ctx.attribute_labels(&c.intent),
                })
            })
            .collect();
        let object_labels: Vec<_> = self.object_labels().iter().map(|v| names(v, ctx.objects())).collect();
        let attribute_labels: Vec<_> = self.attribute_labels().iter().map(|v| names(v, ctx.attributes())).collect();
        serde_json::json!({
            "concepts": concepts,
            "covers": self.covers,
            "objectLabels": object_labels,
            "attributeLabels": attribute_labels,
            "layout": layout(self),
        })
    }
}

/// Concepts with `|extent| / |G| >= min_supp`, in lattice order.
pub fn iceberg(lattice: &ConceptLattice, ctx: &FormalContext, min_supp: &Fraction) -> Result<Vec<usize>> {
    fraction::check_unit("min_supp", min_supp)?;
    let n = ctx.n_objects();
    Ok((0..lattice.len())
        .filter(|&i| fraction::meets(lattice.concept(i).extent.len(), n, min_supp))
        .collect())
}

/// Stability index of a concept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StabilityScore {
    pub concept: usize,
    pub sigma: Fraction,
}

/// `σ(A, B) = |{C ⊆ A : C' = B}| / 2^|A|`, computed exactly.
///
/// Subsets are walked as bit masks over the members of `A`, so extents
/// beyond `cap` (and never more than 62 objects) are refused.
pub fn stability(ctx: &FormalContext, concept: &FormalConcept, cap: usize) -> Result<Fraction> {
    let members = concept.extent.to_vec();
    let k = members.len();
    if k > cap || k >= 63 {
        return Err(FcaError::SizeLimit {
            what: "extent for exact stability",
            size: k,
            limit: cap.min(62),
        });
    }
    let m = ctx.n_attributes();
    // Count the subsets C with C' = B. C' always contains B, so equality holds
    // iff no attribute outside B is shared by all of C. For each attribute
    // outside B, record the mask of members lacking it; C' = B iff C hits
    // every such mask.
    let outside: Vec<u64> = (0..m)
        .filter(|a| !concept.intent.contains(*a))
        .map(|a| {
            members
                .iter()
                .enumerate()
                .filter(|(_, &g)| !ctx.has(g, a))
                .fold(0u64, |acc, (bit, _)| acc | (1u64 << bit))
        })
        .collect();
    let mut count: u64 = 0;
    for mask in 0u64..(1u64 << k) {
        if outside.iter().all(|&lack| lack & mask != 0) {
            count += 1;
        }
    }
    Ok(Fraction::new(count, 1u64 << k))
}

/// A point of the diagram layout; `y` grows upwards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// Longest-path layer of every concept, counted in edges from the top.
pub fn layers(lattice: &ConceptLattice) -> Vec<usize> {
    // concepts sorted by decreasing extent size form a linear extension
    // from the top downwards
    let mut order: Vec<usize> = (0..lattice.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(lattice.concept(i).extent.len()));
    let mut layer = vec![0usize; lattice.len()];
    for &i in &order {
        layer[i] = lattice
            .upper_covers(i)
            .iter()
            .map(|&u| layer[u] + 1)
            .max()
            .unwrap_or(0);
    }
    layer
}

/// Layered layout: longest-path layering from the top, then barycentre
/// ordering within each layer, sweeping downwards.
pub fn layout(lattice: &ConceptLattice) -> Vec<Point> {
    if lattice.is_empty() {
        return Vec::new();
    }
    let layer = layers(lattice);
    let depth = layer.iter().copied().max().unwrap_or(0);
    let mut by_layer: Vec<Vec<usize>> = vec![Vec::new(); depth + 1];
    for (i, &l) in layer.iter().enumerate() {
        by_layer[l].push(i);
    }
    let mut x = vec![0.0f64; lattice.len()];
    for nodes in by_layer.iter_mut() {
        let mut keyed: Vec<(f64, usize)> = nodes
            .iter()
            .map(|&i| {
                let ups = lattice.upper_covers(i);
                let bary = if ups.is_empty() {
                    0.0
                } else {
                    ups.iter().map(|&u| x[u]).sum::<f64>() / ups.len() as f64
                };
                (bary, i)
            })
            .collect();
        keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let width = keyed.len() as f64;
        for (pos, &(_, i)) in keyed.iter().enumerate() {
            x[i] = pos as f64 - (width - 1.0) / 2.0;
        }
        *nodes = keyed.into_iter().map(|(_, i)| i).collect();
    }
    (0..lattice.len())
        .map(|i| Point {
            x: x[i],
            y: (depth - layer[i]) as f64,
        })
        .collect()
}
