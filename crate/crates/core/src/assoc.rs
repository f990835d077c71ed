//! Frequent itemsets (Apriori), association rules, frequent closed and
//! maximal itemsets, and the Luxenburger base.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{FcaError, Result};
use crate::fraction::{self, Fraction};
use crate::lattice::{ConceptLattice, NextClosure};

/// Absolute support `|B'|` of an itemset.
pub fn support_count(ctx: &FormalContext, items: &BitSet) -> usize {
    ctx.extent_of(items).len()
}

/// Relative support `|B'| / |G|`.
pub fn support(ctx: &FormalContext, items: &BitSet) -> Fraction {
    fraction::ratio(support_count(ctx, items), ctx.n_objects())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationRule {
    pub antecedent: BitSet,
    pub consequent: BitSet,
    /// `|(A ∪ B)'|`
    pub count: usize,
    /// `|A'|`
    pub antecedent_count: usize,
    pub support: Fraction,
    pub confidence: Fraction,
}

impl AssociationRule {
    /// Measures the rule `antecedent -> consequent` in `ctx`.
    pub fn measure(ctx: &FormalContext, antecedent: BitSet, consequent: BitSet) -> Self {
        let count = support_count(ctx, &antecedent.union(&consequent));
        let antecedent_count = support_count(ctx, &antecedent);
        AssociationRule {
            support: fraction::ratio(count, ctx.n_objects()),
            confidence: fraction::ratio(count, antecedent_count),
            antecedent,
            consequent,
            count,
            antecedent_count,
        }
    }

    pub fn to_text(&self, ctx: &FormalContext) -> String {
        format!(
            "{} -> {} (supp {}, conf {})",
            ctx.attribute_labels(&self.antecedent).join(" "),
            ctx.attribute_labels(&self.consequent).join(" "),
            self.support,
            self.confidence
        )
    }
}

/// One Apriori level: candidates of size `size` and the frequent ones among
/// them with absolute supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemsetLevel {
    pub size: usize,
    pub candidates: Vec<BitSet>,
    pub frequent: Vec<(BitSet, usize)>,
}

/// Result of [`apriori`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequentItemsets {
    pub n_objects: usize,
    pub n_items: usize,
    pub min_supp: Fraction,
    pub levels: Vec<ItemsetLevel>,
}

impl FrequentItemsets {
    /// All frequent itemsets with absolute supports, the empty set first.
    pub fn all(&self) -> Vec<(BitSet, usize)> {
        let mut out = vec![(BitSet::empty(self.n_items), self.n_objects)];
        for l in &self.levels {
            out.extend(l.frequent.iter().cloned());
        }
        out
    }

    pub fn support_map(&self) -> HashMap<BitSet, usize> {
        self.all().into_iter().collect()
    }
}

fn sorted_items(s: &BitSet) -> Vec<usize> {
    s.to_vec()
}

/// AprioriGen: join itemsets sharing their first `i-1` items (ordered by
/// attribute index), then drop candidates with an infrequent `i`-subset.
pub fn apriori_gen(frequent: &[BitSet]) -> Vec<BitSet> {
    apriori_gen_steps(frequent).1
}

/// Union and elimination steps of AprioriGen, separately.
pub fn apriori_gen_steps(frequent: &[BitSet]) -> (Vec<BitSet>, Vec<BitSet>) {
    let mut sorted: Vec<Vec<usize>> = frequent.iter().map(sorted_items).collect();
    sorted.sort();
    let known: HashSet<&BitSet> = frequent.iter().collect();
    let mut union = Vec::new();
    for (pi, p) in sorted.iter().enumerate() {
        for q in &sorted[pi + 1..] {
            let i = p.len();
            if i == 0 || q.len() != i || p[..i - 1] != q[..i - 1] {
                continue;
            }
            if p[i - 1] < q[i - 1] {
                let universe = frequent[0].universe();
                let c = BitSet::from_indices(universe, p.iter().copied().chain([q[i - 1]]));
                union.push(c);
            }
        }
    }
    let kept = union
        .iter()
        .filter(|c| {
            c.iter().all(|x| {
                let mut s = (*c).clone();
                s.remove(x);
                known.contains(&s)
            })
        })
        .cloned()
        .collect();
    (union, kept)
}

/// Level-wise Apriori. `min_supp` must lie in `(0, 1]`.
pub fn apriori(ctx: &FormalContext, min_supp: &Fraction) -> Result<FrequentItemsets> {
    fraction::check_unit("min_supp", min_supp)?;
    if *min_supp.numer() == 0 {
        return Err(FcaError::Threshold {
            name: "min_supp",
            value: min_supp.to_string(),
            reason: "must be positive for Apriori; use closed itemsets instead",
        });
    }
    let n = ctx.n_objects();
    let m = ctx.n_attributes();
    let mut levels = Vec::new();
    let mut candidates: Vec<BitSet> = (0..m).map(|a| BitSet::from_indices(m, [a])).collect();
    let mut size = 1;
    while !candidates.is_empty() {
        let frequent: Vec<(BitSet, usize)> = candidates
            .iter()
            .map(|c| (c.clone(), support_count(ctx, c)))
            .filter(|(_, s)| fraction::meets(*s, n, min_supp))
            .collect();
        let next = if frequent.is_empty() {
            Vec::new()
        } else {
            apriori_gen(&frequent.iter().map(|(s, _)| s.clone()).collect::<Vec<_>>())
        };
        levels.push(ItemsetLevel {
            size,
            candidates,
            frequent,
        });
        candidates = next;
        size += 1;
    }
    Ok(FrequentItemsets {
        n_objects: n,
        n_items: m,
        min_supp: *min_supp,
        levels,
    })
}

/// All rules `f -> F \ f` with `f` a nonempty proper subset of a frequent
/// `F` and confidence at least `min_conf`.
///
/// Consequents grow level by level from single items; a consequent is only
/// extended if every smaller consequent inside it met `min_conf`, since
/// moving items to the consequent never raises confidence.
pub fn extract_rules(frequents: &FrequentItemsets, min_conf: &Fraction) -> Result<Vec<AssociationRule>> {
    fraction::check_unit("min_conf", min_conf)?;
    let supports = frequents.support_map();
    let n = frequents.n_objects;
    let mut rules = Vec::new();
    let mut itemsets: Vec<(BitSet, usize)> = frequents.all().into_iter().filter(|(f, _)| f.len() >= 2).collect();
    itemsets.sort_by_key(|a| sorted_items(&a.0));
    for (f, count) in itemsets {
        let mut consequents: Vec<BitSet> = f.iter().map(|a| BitSet::from_indices(f.universe(), [a])).collect();
        while !consequents.is_empty() {
            let mut passed = Vec::new();
            for h in &consequents {
                if h.len() >= f.len() {
                    continue;
                }
                let antecedent = f.difference(h);
                let a_count = supports[&antecedent];
                if fraction::meets(count, a_count, min_conf) {
                    rules.push(AssociationRule {
                        antecedent,
                        consequent: h.clone(),
                        count,
                        antecedent_count: a_count,
                        support: fraction::ratio(count, n),
                        confidence: fraction::ratio(count, a_count),
                    });
                    passed.push(h.clone());
                }
            }
            consequents = if passed.is_empty() { Vec::new() } else { apriori_gen(&passed) };
        }
    }
    Ok(rules)
}

/// Frequent closed itemsets with absolute supports, by descending support.
pub fn frequent_closed(ctx: &FormalContext, min_supp: &Fraction) -> Result<Vec<(BitSet, usize)>> {
    fraction::check_unit("min_supp", min_supp)?;
    let n = ctx.n_objects();
    let mut out: Vec<(BitSet, usize)> = NextClosure::new(ctx)
        .filter(|c| fraction::meets(c.extent.len(), n, min_supp))
        .map(|c| (c.intent, c.extent.len()))
        .collect();
    out.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then(a.0.len().cmp(&b.0.len()))
            .then(sorted_items(&a.0).cmp(&sorted_items(&b.0)))
    });
    Ok(out)
}

/// Maximal frequent itemsets; each is closed, so they are the maximal
/// elements among the frequent closed itemsets.
pub fn frequent_maximal(ctx: &FormalContext, min_supp: &Fraction) -> Result<Vec<(BitSet, usize)>> {
    let closed = frequent_closed(ctx, min_supp)?;
    Ok(closed
        .iter()
        .filter(|(s, _)| !closed.iter().any(|(t, _)| s.is_proper_subset(t)))
        .cloned()
        .collect())
}

/// Rules `B1 -> B2 \ B1` for every cover pair where `(B1', B1)` is the upper
/// neighbour of `(B2', B2)`, filtered by support `|B2'|/|G|` and confidence
/// `|B2'|/|B1'|`. Premises may be empty (covers of the top concept).
pub fn luxenburger_base(
    ctx: &FormalContext,
    lattice: &ConceptLattice,
    min_supp: &Fraction,
    min_conf: &Fraction,
) -> Result<Vec<AssociationRule>> {
    fraction::check_unit("min_supp", min_supp)?;
    fraction::check_unit("min_conf", min_conf)?;
    let n = ctx.n_objects();
    let mut out = Vec::new();
    for &(lo, hi) in lattice.covers() {
        let lower = lattice.concept(lo);
        let upper = lattice.concept(hi);
        let count = lower.extent.len();
        let a_count = upper.extent.len();
        if fraction::meets(count, n, min_supp) && fraction::meets(count, a_count, min_conf) {
            out.push(AssociationRule {
                antecedent: upper.intent.clone(),
                consequent: lower.intent.difference(&upper.intent),
                count,
                antecedent_count: a_count,
                support: fraction::ratio(count, n),
                confidence: fraction::ratio(count, a_count),
            });
        }
    }
    Ok(out)
}

/// `antecedent;consequent;support;confidence;support_exact;confidence_exact`
pub fn rules_to_csv(ctx: &FormalContext, rules: &[AssociationRule]) -> String {
    let mut out = String::from("antecedent;consequent;support;confidence;support_exact;confidence_exact\n");
    for r in rules {
        out.push_str(&format!(
            "{};{};{:.6};{:.6};{};{}\n",
            ctx.attribute_labels(&r.antecedent).join(" "),
            ctx.attribute_labels(&r.consequent).join(" "),
            fraction::to_f64(&r.support),
            fraction::to_f64(&r.confidence),
            exact(&r.support),
            exact(&r.confidence),
        ));
    }
    out
}

fn exact(f: &Fraction) -> String {
    format!("{}/{}", f.numer(), f.denom())
}

#[derive(Debug, Serialize)]
struct RuleOut {
    antecedent: Vec<String>,
    consequent: Vec<String>,
    support: String,
    confidence: String,
}

pub fn rules_to_json(ctx: &FormalContext, rules: &[AssociationRule]) -> serde_json::Value {
    let list: Vec<RuleOut> = rules
        .iter()
        .map(|r| RuleOut {
            antecedent: ctx.attribute_labels(&r.antecedent),
            consequent: ctx.attribute_labels(&r.consequent),
            support: exact(&r.support),
            confidence: exact(&r.confidence),
        })
        .collect();
    serde_json::to_value(list).expect("serializable")
}

/// Itemsets with supports as JSON: `[{items:[..], support:"p/q", count:n}]`.
pub fn itemsets_to_json(ctx: &FormalContext, sets: &[(BitSet, usize)]) -> serde_json::Value {
    let n = ctx.n_objects();
    serde_json::Value::Array(
        sets.iter()
            .map(|(s, c)| {
                serde_json::json!({
                    "items": ctx.attribute_labels(s),
                    "count": c,
                    "support": exact(&fraction::ratio(*c, n)),
                })
            })
            .collect(),
    )
}

/// Frequent itemsets grouped by size, for reports.
pub fn by_size(sets: &[(BitSet, usize)]) -> BTreeMap<usize, Vec<(BitSet, usize)>> {
    let mut out: BTreeMap<usize, Vec<(BitSet, usize)>> = BTreeMap::new();
    for (s, c) in sets {
        out.entry(s.len()).or_default().push((s.clone(), *c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    fn items(ctx: &FormalContext, labels: &[&str]) -> BitSet {
        ctx.attribute_set(labels).unwrap()
    }

    #[test]
    fn customers_supports() {
        let ctx = datasets::customers();
        assert_eq!(support(&ctx, &items(&ctx, &["Beer", "Chips"])), Fraction::new(3, 5));
        let r = AssociationRule::measure(&ctx, items(&ctx, &["Cakes", "Müsli"]), items(&ctx, &["Milk"]));
        assert_eq!(r.support, Fraction::new(2, 5));
        assert_eq!(r.confidence, Fraction::new(1, 1));
    }

    #[test]
    fn apriori_gen_example() {
        let letters = ["a", "b", "c", "d", "e"];
        let s = |w: &str| BitSet::from_indices(5, w.chars().map(|c| letters.iter().position(|l| l.starts_with(c)).unwrap()));
        let f3: Vec<BitSet> = ["abc", "abd", "acd", "ace", "bcd"].iter().map(|w| s(w)).collect();
        let (union, kept) = apriori_gen_steps(&f3);
        assert_eq!(union, vec![s("abcd"), s("acde")]);
        assert_eq!(kept, vec![s("abcd")]);
    }

    #[test]
    fn zero_min_supp_rejected() {
        let ctx = datasets::customers();
        assert!(apriori(&ctx, &Fraction::new(0, 1)).is_err());
        assert!(apriori(&ctx, &Fraction::new(6, 5)).is_err());
    }

    #[test]
    fn levels_respect_downward_closure() {
        let ctx = datasets::customers();
        let f = apriori(&ctx, &Fraction::new(1, 3)).unwrap();
        for w in f.levels.windows(2) {
            let prev: HashSet<&BitSet> = w[0].frequent.iter().map(|(s, _)| s).collect();
            for (s, _) in &w[1].frequent {
                assert!(w[1].candidates.contains(s));
                for x in s {
                    let mut sub = s.clone();
                    sub.remove(x);
                    assert!(prev.contains(&sub));
                }
            }
        }
    }

    #[test]
    fn confidence_one_rules_are_implications() {
        let ctx = datasets::customers();
        let f = apriori(&ctx, &Fraction::new(1, 5)).unwrap();
        for r in extract_rules(&f, &Fraction::new(1, 1)).unwrap() {
            let imp = crate::implications::Implication::new(r.antecedent.clone(), r.consequent.clone());
            assert!(crate::implications::holds(&ctx, &imp));
        }
    }

    #[test]
    fn closed_itemsets_of_customers() {
        let ctx = datasets::customers();
        let closed = frequent_closed(&ctx, &Fraction::new(3, 5)).unwrap();
        let text: Vec<(String, usize)> = closed
            .iter()
            .map(|(s, c)| (s.iter().map(|i| (b'a' + i as u8) as char).collect(), *c))
            .collect();
        let expected: HashSet<(String, usize)> = [("", 5), ("e", 4), ("c", 4), ("ce", 3), ("ae", 3), ("cd", 3), ("bc", 3)]
            .iter()
            .map(|(s, c)| (s.to_string(), *c))
            .collect();
        assert_eq!(text.into_iter().collect::<HashSet<_>>(), expected);
    }

    #[test]
    fn full_cross_context_has_one_closed_itemset() {
        let ctx = FormalContext::from_crosses(["1", "2"], ["a", "b"], &["XX", "XX"]).unwrap();
        let closed = frequent_closed(&ctx, &Fraction::new(0, 1)).unwrap();
        assert_eq!(closed, vec![(BitSet::full(2), 2)]);
        assert_eq!(frequent_maximal(&ctx, &Fraction::new(0, 1)).unwrap(), closed);
    }

    #[test]
    fn luxenburger_on_a_chain() {
        let s = crate::many_valued::Scale::ordinal(["1", "2", "3"]);
        let ctx = s.context();
        let lat = ConceptLattice::from_context(ctx).unwrap();
        let rules = luxenburger_base(ctx, &lat, &Fraction::new(0, 1), &Fraction::new(0, 1)).unwrap();
        assert_eq!(rules.len(), 2);
        assert!(luxenburger_base(ctx, &lat, &Fraction::new(0, 1), &Fraction::new(1, 1)).unwrap().is_empty());
    }

    #[test]
    fn csv_export() {
        let ctx = datasets::customers();
        let r = AssociationRule::measure(&ctx, items(&ctx, &["Cakes", "Müsli"]), items(&ctx, &["Milk"]));
        let csv = rules_to_csv(&ctx, &[r]);
        assert_eq!(csv.lines().nth(1).unwrap(), "Cakes Müsli;Milk;0.400000;1.000000;2/5;1/1");
    }
}
