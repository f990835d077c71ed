//! Lattice-based retrieval: query concepts, navigation to neighbouring
//! concepts, concept-lattice ranking and stability annotation.

use std::collections::VecDeque;

use serde::Serialize;

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{FcaError, Result};
use crate::lattice::{stability, ConceptLattice, FormalConcept, StabilityScore};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryConcept {
    pub terms: BitSet,
    pub concept: FormalConcept,
}

/// `(T', T'')` for the query terms `T`.
pub fn query_concept<S: AsRef<str>>(ctx: &FormalContext, terms: &[S]) -> Result<QueryConcept> {
    let unknown: Vec<String> = terms
        .iter()
        .map(AsRef::as_ref)
        .filter(|t| ctx.attribute_index(t).is_none())
        .map(str::to_string)
        .collect();
    if !unknown.is_empty() {
        return Err(FcaError::UnknownTerms(unknown));
    }
    let terms = ctx.attribute_set(terms)?;
    let concept = FormalConcept::from_attributes(ctx, &terms);
    Ok(QueryConcept { terms, concept })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Neighbors {
    /// Lower covers: the query with more terms.
    pub refinements: Vec<usize>,
    /// Upper covers: the query with fewer terms.
    pub enlargements: Vec<usize>,
}

pub fn neighbors(lattice: &ConceptLattice, concept: usize) -> Neighbors {
    Neighbors {
        refinements: lattice.lower_covers(concept).to_vec(),
        enlargements: lattice.upper_covers(concept).to_vec(),
    }
}

/// Breadth-first distances from `from` in the undirected cover graph.
pub fn distances(lattice: &ConceptLattice, from: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; lattice.len()];
    let mut queue = VecDeque::from([from]);
    dist[from] = Some(0);
    while let Some(c) = queue.pop_front() {
        let d = dist[c].expect("queued nodes have a distance");
        for &n in lattice.upper_covers(c).iter().chain(lattice.lower_covers(c)) {
            if dist[n].is_none() {
                dist[n] = Some(d + 1);
                queue.push_back(n);
            }
        }
    }
    dist
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankedResult {
    pub document: usize,
    pub distance: usize,
    /// Dense rank starting at 1; equal distances share a rank.
    pub rank: usize,
}

/// Ranks every document by the distance from its object concept
/// `({d}'', {d}')` to the query concept.
pub fn clr_rank(lattice: &ConceptLattice, query: &QueryConcept) -> Result<Vec<RankedResult>> {
    let q = lattice
        .index_of_extent(&query.concept.extent)
        .ok_or_else(|| FcaError::Invalid("query concept is not in the lattice".into()))?;
    let dist = distances(lattice, q);
    let n = query.concept.extent.universe();
    let mut out: Vec<RankedResult> = (0..n)
        .map(|d| RankedResult {
            document: d,
            distance: dist[lattice.object_concept(d)].expect("lattices are connected"),
            rank: 0,
        })
        .collect();
    out.sort_by_key(|r| (r.distance, r.document));
    let mut rank = 0;
    let mut last = None;
    for r in &mut out {
        if last != Some(r.distance) {
            rank += 1;
            last = Some(r.distance);
        }
        r.rank = rank;
    }
    Ok(out)
}

#[derive(Debug)]
pub struct StabilityReport {
    pub scores: Vec<StabilityScore>,
    /// Concepts whose extent exceeded the cap.
    pub skipped: Vec<(usize, FcaError)>,
}

/// Stability of every concept, sorted by `σ` descending, then extent size
/// descending, then lectic order of extents.
pub fn rank_stability_annotate(ctx: &FormalContext, lattice: &ConceptLattice, cap: usize) -> StabilityReport {
    let mut scores = Vec::new();
    let mut skipped = Vec::new();
    for (i, c) in lattice.concepts().iter().enumerate() {
        match stability(ctx, c, cap) {
            Ok(sigma) => scores.push(StabilityScore { concept: i, sigma }),
            Err(e) => skipped.push((i, e)),
        }
    }
    scores.sort_by(|a, b| {
        let (ea, eb) = (&lattice.concept(a.concept).extent, &lattice.concept(b.concept).extent);
        b.sigma
            .cmp(&a.sigma)
            .then(eb.len().cmp(&ea.len()))
            .then(ea.lectic_cmp(eb))
    });
    StabilityReport { scores, skipped }
}
