//! Implications, their closure, the Duquenne-Guigues base, the generator
//! cover and the reductions between implications and functional dependencies.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{FcaError, Result};
use crate::many_valued::ManyValuedContext;

/// `premise -> conclusion` over attribute indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Implication {
    pub premise: BitSet,
    pub conclusion: BitSet,
}

impl Implication {
    /// Canonical form: premise attributes are removed from the conclusion.
    pub fn new(premise: BitSet, conclusion: BitSet) -> Self {
        let conclusion = conclusion.difference(&premise);
        Implication { premise, conclusion }
    }

    pub fn is_trivial(&self) -> bool {
        self.conclusion.is_empty()
    }

    /// True if the attribute set respects the implication.
    pub fn respected_by(&self, attrs: &BitSet) -> bool {
        !self.premise.is_subset(attrs) || self.conclusion.is_subset(attrs)
    }

    pub fn to_text(&self, ctx: &FormalContext) -> String {
        format!(
            "{} -> {}",
            ctx.attribute_labels(&self.premise).join(" "),
            ctx.attribute_labels(&self.conclusion).join(" ")
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    DuquenneGuigues,
    GeneratorCover,
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationBase {
    pub kind: BaseKind,
    pub rules: Vec<Implication>,
}

impl ImplicationBase {
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn closure(&self, x: &BitSet) -> BitSet {
        implication_closure(&self.rules, x)
    }

    /// One rule per line, `a b -> c d`.
    pub fn to_text(&self, ctx: &FormalContext) -> String {
        self.rules.iter().map(|r| r.to_text(ctx) + "\n").collect()
    }

    pub fn to_json(&self, ctx: &FormalContext) -> serde_json::Value {
        serde_json::Value::Array(self.rules.iter().map(|r| rule_json(ctx, r)).collect())
    }
}

/// Serialized rule: attribute labels on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleJson {
    pub premise: Vec<String>,
    pub conclusion: Vec<String>,
}

fn rule_json(ctx: &FormalContext, r: &Implication) -> serde_json::Value {
    serde_json::to_value(RuleJson {
        premise: ctx.attribute_labels(&r.premise),
        conclusion: ctx.attribute_labels(&r.conclusion),
    })
    .expect("serializable")
}

/// `premise' ⊆ conclusion'`.
pub fn holds(ctx: &FormalContext, imp: &Implication) -> bool {
    ctx.extent_of(&imp.premise).is_subset(&ctx.extent_of(&imp.conclusion))
}

/// Smallest superset of `x` closed under `rules`.
///
/// Each rule keeps a counter of premise attributes not yet derived; a rule
/// fires when its counter drops to zero.
pub fn implication_closure(rules: &[Implication], x: &BitSet) -> BitSet {
    let universe = x.universe();
    let mut result = x.clone();
    let mut missing: Vec<usize> = Vec::with_capacity(rules.len());
    let mut watchers: Vec<Vec<usize>> = vec![Vec::new(); universe];
    let mut queue: Vec<usize> = Vec::new();
    for (i, r) in rules.iter().enumerate() {
        let absent = r.premise.difference(&result);
        missing.push(absent.len());
        for a in &absent {
            watchers[a].push(i);
        }
        if absent.is_empty() {
            queue.push(i);
        }
    }
    let mut fired = vec![false; rules.len()];
    while let Some(i) = queue.pop() {
        if fired[i] {
            continue;
        }
        fired[i] = true;
        for a in &rules[i].conclusion {
            if result.contains(a) {
                continue;
            }
            result.insert(a);
            for &j in &watchers[a] {
                missing[j] -= 1;
                if missing[j] == 0 {
                    queue.push(j);
                }
            }
        }
    }
    result
}

/// The next set after `a` in lectic order that is closed under `close`, or
/// `None` when `a` is the full set.
pub(crate) fn next_closed(a: &BitSet, close: impl Fn(&BitSet) -> BitSet) -> Option<BitSet> {
    let n = a.universe();
    for i in (0..n).rev() {
        if a.contains(i) {
            continue;
        }
        let mut candidate = a.intersection(&BitSet::prefix(n, i));
        candidate.insert(i);
        let closed = close(&candidate);
        if closed.agrees_below(a, i) {
            return Some(closed);
        }
    }
    None
}

/// Duquenne-Guigues base by lectic ascent over sets closed under the rules
/// found so far. Premises come out in lectic order.
pub fn duquenne_guigues_base(ctx: &FormalContext) -> ImplicationBase {
    let m = ctx.n_attributes();
    let mut rules: Vec<Implication> = Vec::new();
    let mut a = BitSet::empty(m);
    loop {
        let closed = ctx.close_attributes(&a);
        if closed != a {
            rules.push(Implication::new(a.clone(), closed));
        }
        match next_closed(&a, |x| implication_closure(&rules, x)) {
            Some(next) => a = next,
            None => break,
        }
    }
    ImplicationBase {
        kind: BaseKind::DuquenneGuigues,
        rules,
    }
}

/// Pseudo-intents, i.e. the premises of the Duquenne-Guigues base.
pub fn pseudo_intents(ctx: &FormalContext) -> Vec<BitSet> {
    duquenne_guigues_base(ctx).rules.into_iter().map(|r| r.premise).collect()
}

/// All minimal generators: sets `F` such that no proper subset has the same
/// closure. They form an order ideal and are found level by level.
pub fn minimal_generators(ctx: &FormalContext) -> Vec<BitSet> {
    let m = ctx.n_attributes();
    let support = |f: &BitSet| ctx.extent_of(f).len();
    let mut all = vec![BitSet::empty(m)];
    let mut level: Vec<BitSet> = vec![BitSet::empty(m)];
    while !level.is_empty() {
        let known: HashSet<&BitSet> = level.iter().collect();
        let mut next: Vec<BitSet> = Vec::new();
        let mut seen: HashSet<BitSet> = HashSet::new();
        for f in &level {
            let start = f.last().map_or(0, |l| l + 1);
            for a in start..m {
                let cand = f.with(a);
                if !seen.insert(cand.clone()) {
                    continue;
                }
                let s = support(&cand);
                let minimal = cand.iter().all(|b| {
                    let mut sub = cand.clone();
                    sub.remove(b);
                    known.contains(&sub) && support(&sub) != s
                });
                if minimal {
                    next.push(cand);
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all
}

/// `{F -> F'' \ F : F a nontrivial minimal generator}`.
pub fn generator_cover(ctx: &FormalContext) -> ImplicationBase {
    let rules = minimal_generators(ctx)
        .into_iter()
        .map(|f| {
            let closed = ctx.close_attributes(&f);
            Implication::new(f, closed)
        })
        .filter(|r| !r.is_trivial())
        .collect();
    ImplicationBase {
        kind: BaseKind::GeneratorCover,
        rules,
    }
}

/// Context of object pairs: `{g,h}` has attribute `m` iff `m(g) = m(h)`.
/// A functional dependency `X -> Y` holds in `mv` iff the implication `X -> Y`
/// holds here.
pub fn fd_pair_context(mv: &ManyValuedContext) -> Result<FormalContext> {
    let missing = mv.missing_cells();
    if !missing.is_empty() {
        return Err(FcaError::IncompleteContext(missing));
    }
    let n = mv.objects().len();
    let attrs = mv.attributes().len();
    let mut labels = Vec::new();
    let mut incidence = Vec::new();
    for g in 0..n {
        for h in g + 1..n {
            labels.push(format!("{{{},{}}}", mv.objects()[g], mv.objects()[h]));
            incidence.push((0..attrs).filter(|&m| mv.value(g, m) == mv.value(h, m)).collect());
        }
    }
    FormalContext::new(labels, mv.attributes().to_vec(), incidence)
}

/// Direct check of a functional dependency in a complete many-valued context.
pub fn fd_holds(mv: &ManyValuedContext, lhs: &BitSet, rhs: &BitSet) -> bool {
    let n = mv.objects().len();
    (0..n).all(|g| {
        (g + 1..n).all(|h| {
            let agree = |m: usize| mv.value(g, m) == mv.value(h, m);
            !lhs.iter().all(agree) || rhs.iter().all(agree)
        })
    })
}

/// Many-valued context whose functional dependencies are the implications of
/// `ctx`: crosses become `0`, empty cells the 1-based row number, and an
/// all-zero row is appended.
pub fn fd_inverse_context(ctx: &FormalContext) -> ManyValuedContext {
    let n = ctx.n_objects();
    let objects: Vec<String> = (1..=n + 1).map(|i| i.to_string()).collect();
    let mut values: Vec<Vec<Option<String>>> = (0..n)
        .map(|g| {
            (0..ctx.n_attributes())
                .map(|m| Some(if ctx.has(g, m) { "0".to_string() } else { (g + 1).to_string() }))
                .collect()
        })
        .collect();
    values.push(vec![Some("0".to_string()); ctx.n_attributes()]);
    ManyValuedContext::new(objects, ctx.attributes().to_vec(), values).expect("numbered rows")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    fn set(ctx: &FormalContext, labels: &[&str]) -> BitSet {
        ctx.attribute_set(labels).unwrap()
    }

    #[test]
    fn holds_on_geometric_figures() {
        let ctx = datasets::geometric_figures();
        let imp = |p: &[&str], c: &[&str]| Implication::new(set(&ctx, p), set(&ctx, c));
        assert!(holds(&ctx, &imp(&["a", "b", "c"], &["d"])));
        assert!(holds(&ctx, &imp(&["b"], &["c"])));
        assert!(!holds(&ctx, &imp(&["c"], &["b"])));
    }

    #[test]
    fn closure_examples() {
        let ctx = datasets::geometric_figures();
        let imp = |p: &[&str], c: &[&str]| Implication::new(set(&ctx, p), set(&ctx, c));
        let rules = vec![imp(&["b"], &["c"]), imp(&["c", "d"], &["b"]), imp(&["a", "b", "c"], &["d"])];
        assert_eq!(implication_closure(&rules, &set(&ctx, &["a", "b"])), BitSet::full(4));
        assert_eq!(implication_closure(&rules, &BitSet::full(4)), BitSet::full(4));
        let x = set(&ctx, &["a"]);
        assert_eq!(implication_closure(&[], &x), x);
        // rules with empty premise fire immediately
        let r = vec![Implication::new(BitSet::empty(4), set(&ctx, &["d"]))];
        assert_eq!(implication_closure(&r, &BitSet::empty(4)), set(&ctx, &["d"]));
    }

    #[test]
    fn dg_base_of_geometric_figures() {
        let ctx = datasets::geometric_figures();
        let base = duquenne_guigues_base(&ctx);
        // lectic order over attributes puts cd before b
        assert_eq!(base.to_text(&ctx), "c d -> b\nb -> c\na b c -> d\n");
    }

    #[test]
    fn contranominal_has_empty_base() {
        assert!(duquenne_guigues_base(&FormalContext::contranominal(3)).is_empty());
        assert!(generator_cover(&FormalContext::contranominal(3)).is_empty());
    }

    #[test]
    fn generators_of_geometric_figures() {
        let ctx = datasets::geometric_figures();
        let cover = generator_cover(&ctx);
        let b = set(&ctx, &["b"]);
        let ab = set(&ctx, &["a", "b"]);
        assert!(cover.rules.contains(&Implication::new(b.clone(), set(&ctx, &["b", "c"]))));
        assert!(cover.rules.contains(&Implication::new(ab, BitSet::full(4))));
        assert!(cover.len() >= duquenne_guigues_base(&ctx).len());
    }

    #[test]
    fn text_and_json_formats() {
        let ctx = datasets::geometric_figures();
        let base = duquenne_guigues_base(&ctx);
        let json = base.to_json(&ctx);
        assert_eq!(json[0]["premise"], serde_json::json!(["c", "d"]));
        assert_eq!(json[0]["conclusion"], serde_json::json!(["b"]));
    }

    #[test]
    fn pair_context_of_university_subjects() {
        let pairs = fd_pair_context(&datasets::university_subjects()).unwrap();
        let expected = FormalContext::from_crosses(
            ["{1,2}", "{1,3}", "{1,4}", "{1,5}", "{2,3}", "{2,4}", "{2,5}", "{3,4}", "{3,5}", "{4,5}"],
            ["Gender", "Age", "Subject", "Mark"],
            &["....", ".XX.", "X...", "....", "X...", ".XX.", "X..X", "....", "X...", "...."],
        )
        .unwrap();
        assert_eq!(pairs, expected);
    }

    #[test]
    fn incomplete_many_valued_rejected() {
        let mv = ManyValuedContext::new(["1", "2"], ["A"], vec![vec![Some("x".into())], vec![None]]).unwrap();
        assert_eq!(
            fd_pair_context(&mv).unwrap_err(),
            FcaError::IncompleteContext(vec![("2".into(), "A".into())])
        );
    }

    #[test]
    fn inverse_table_of_geometric_figures() {
        let mv = fd_inverse_context(&datasets::geometric_figures());
        let rows: Vec<Vec<&str>> = (0..5).map(|g| (0..4).map(|m| mv.value(g, m).unwrap()).collect()).collect();
        assert_eq!(
            rows,
            vec![
                vec!["0", "1", "1", "0"],
                vec!["0", "2", "0", "2"],
                vec!["3", "0", "0", "3"],
                vec!["4", "0", "0", "0"],
                vec!["0", "0", "0", "0"],
            ]
        );
    }
}
