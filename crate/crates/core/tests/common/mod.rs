//! Brute-force oracles shared by the integration tests. They read the
//! incidence relation cell by cell and never call the enumeration code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use fca_core::FormalContext;
use rand::rngs::StdRng;
use rand::Rng;

pub type Concept = (Vec<usize>, Vec<usize>);

/// All subsets of `0..n` as sorted index vectors.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    assert!(n < 32);
    (0u32..(1 << n)).map(move |mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
}

pub fn common_attributes(ctx: &FormalContext, objects: &[usize]) -> Vec<usize> {
    (0..ctx.n_attributes())
        .filter(|&m| objects.iter().all(|&g| ctx.has(g, m)))
        .collect()
}

pub fn common_objects(ctx: &FormalContext, attributes: &[usize]) -> Vec<usize> {
    (0..ctx.n_objects())
        .filter(|&g| attributes.iter().all(|&m| ctx.has(g, m)))
        .collect()
}

pub fn attribute_closure(ctx: &FormalContext, attributes: &[usize]) -> Vec<usize> {
    common_attributes(ctx, &common_objects(ctx, attributes))
}

/// Every concept, from closing every object subset.
pub fn concepts(ctx: &FormalContext) -> BTreeSet<Concept> {
    subsets(ctx.n_objects())
        .map(|a| {
            let intent = common_attributes(ctx, &a);
            (common_objects(ctx, &intent), intent)
        })
        .collect()
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// Pseudo-intents straight from the recursive definition, smallest first.
pub fn pseudo_intents(ctx: &FormalContext) -> BTreeSet<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = subsets(ctx.n_attributes()).collect();
    all.sort_by_key(Vec::len);
    let mut found: Vec<Vec<usize>> = Vec::new();
    for p in all {
        if attribute_closure(ctx, &p) == p {
            continue;
        }
        let ok = found
            .iter()
            .filter(|q| q.len() < p.len() && is_subset(q, &p))
            .all(|q| is_subset(&attribute_closure(ctx, q), &p));
        if ok {
            found.push(p);
        }
    }
    found.into_iter().collect()
}

/// Number of subsets of `extent` whose common attributes are exactly `intent`.
pub fn stable_subsets(ctx: &FormalContext, extent: &[usize], intent: &[usize]) -> usize {
    subsets(extent.len())
        .filter(|pick| {
            let c: Vec<usize> = pick.iter().map(|&i| extent[i]).collect();
            common_attributes(ctx, &c) == intent
        })
        .count()
}

pub fn random_context(rng: &mut StdRng, max_g: usize, max_m: usize) -> FormalContext {
    let g = rng.gen_range(1..=max_g);
    let m = rng.gen_range(1..=max_m);
    random_context_exact(rng, g, m)
}

pub fn random_context_exact(rng: &mut StdRng, g: usize, m: usize) -> FormalContext {
    let density = rng.gen_range(0.2..0.8);
    let incidence = (0..g)
        .map(|_| (0..m).filter(|_| rng.gen_bool(density)).collect())
        .collect();
    FormalContext::new(
        (0..g).map(|i| format!("g{i}")),
        (0..m).map(|i| format!("m{i}")),
        incidence,
    )
    .unwrap()
}
