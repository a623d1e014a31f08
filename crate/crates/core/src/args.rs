//! Canonical arguments for a theory, their attacks and defeats, and the greedy
//! stable-extension generator.
//!
//! The store is finite: every conclusion is drawn from a target set (rule
//! antecedents, consequents and their contraries, the facts, plus any extra
//! formulas), classical reasoning is collapsed into single strict steps whose
//! premises are subset-minimal consistent sets of target formulas, and
//! arguments are deduplicated by (defeasible rules, conclusion).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use indexmap::IndexSet;

use crate::dung::AbstractAF;
use crate::logic::{contrary, Formula, FormulaPool, LogicError};
use crate::pdt::{bits, CapacityError, Pdt, PriorityRelation};
use crate::sp::deli_less;

pub const DEFAULT_MAX_ARGUMENTS: usize = 5000;
pub const DEFAULT_MAX_CHILDREN: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StoreConfig {
    pub max_arguments: usize,
    pub max_children: usize,
}

impl Default for StoreConfig {
    fn default() -> Self {
        StoreConfig {
            max_arguments: DEFAULT_MAX_ARGUMENTS,
            max_children: DEFAULT_MAX_CHILDREN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArgError {
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgKind {
    Axiom,
    /// Top rule given as a default index.
    Defeasible(usize),
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Argument {
    pub id: usize,
    pub kind: ArgKind,
    /// Index into the store's targets.
    pub conclusion: usize,
    pub children: Vec<usize>,
    /// Defeasible rules used anywhere in the tree, as a default-index mask.
    pub dr: u64,
    /// Facts used as premises, as a mask over fact positions.
    pub premises: u64,
}

impl Argument {
    pub fn is_strict(&self) -> bool {
        self.dr == 0
    }
}

pub struct ArgumentStore {
    targets: Vec<Formula>,
    args: Vec<Argument>,
    index: HashMap<(u64, usize), usize>,
    by_conclusion: Vec<Vec<usize>>,
    sub: Vec<FixedBitSet>,
    rule_ids: Vec<String>,
    contrary_target: Vec<usize>,
    /// Subset-minimal premise sets that had to be cut off at the child cap.
    pub cap_hits: usize,
}

impl std::fmt::Debug for ArgumentStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ArgumentStore")
            .field("targets", &self.targets.len())
            .field("arguments", &self.args.len())
            .finish()
    }
}

struct Builder<'a> {
    pool: FormulaPool<'a>,
    cfg: StoreConfig,
    store: ArgumentStore,
}

impl Builder<'_> {
    fn insert(&mut self, kind: ArgKind, conclusion: usize, children: Vec<usize>, dr: u64, premises: u64) -> Result<bool, CapacityError> {
        if self.store.index.contains_key(&(dr, conclusion)) {
            return Ok(false);
        }
        if self.store.args.len() == self.cfg.max_arguments {
            return Err(CapacityError {
                what: "argument store size",
                cap: self.cfg.max_arguments,
            });
        }
        let id = self.store.args.len();
        self.store.index.insert((dr, conclusion), id);
        self.store.by_conclusion[conclusion].push(id);
        self.store.args.push(Argument {
            id,
            kind,
            conclusion,
            children,
            dr,
            premises,
        });
        Ok(true)
    }

    // Subset-minimal consistent premise sets for `goal`, excluding `{goal}` itself.
    fn minimal_premise_sets(&mut self, goal: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.extend_premises(goal, 0, &mut current, &mut out);
        out
    }

    fn extend_premises(&mut self, goal: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if self.pool.entails(current, goal) {
            let minimal = (0..current.len()).all(|skip| {
                let rest: Vec<usize> = current.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &x)| x).collect();
                !self.pool.entails(&rest, goal)
            });
            if minimal {
                out.push(current.clone());
            }
            return;
        }
        if current.len() == self.cfg.max_children {
            if start < self.pool.len() {
                self.store.cap_hits += 1;
            }
            return;
        }
        for j in start..self.pool.len() {
            if j == goal {
                continue;
            }
            current.push(j);
            if self.pool.consistent(current) {
                self.extend_premises(goal, j + 1, current, out);
            }
            current.pop();
        }
    }
}

/// Build every canonical argument over the theory's target set extended by `extra_targets`.
pub fn build_store(t: &Pdt, extra_targets: &[Formula], cfg: StoreConfig) -> Result<ArgumentStore, ArgError> {
    let mut targets: IndexSet<Formula> = IndexSet::new();
    for d in t.defaults() {
        if d.antecedent != Formula::True {
            targets.insert(d.antecedent.clone());
        }
        targets.insert(d.consequent.clone());
        targets.insert(contrary(&d.consequent));
    }
    targets.extend(t.facts().iter().cloned());
    targets.extend(extra_targets.iter().cloned());
    let targets: Vec<Formula> = targets.into_iter().collect();
    let pool = FormulaPool::new(t.oracle(), targets.clone())?;

    let find = |f: &Formula| targets.iter().position(|x| x == f).expect("target registered");
    let contrary_target = t.defaults().iter().map(|d| find(&contrary(&d.consequent))).collect();
    let ante_target: Vec<Option<usize>> = t
        .defaults()
        .iter()
        .map(|d| (d.antecedent != Formula::True).then(|| find(&d.antecedent)))
        .collect();
    let cons_target: Vec<usize> = t.defaults().iter().map(|d| find(&d.consequent)).collect();
    let fact_target: Vec<usize> = t.facts().iter().map(find).collect();

    let n_targets = targets.len();
    let mut b = Builder {
        pool,
        cfg,
        store: ArgumentStore {
            targets,
            args: Vec::new(),
            index: HashMap::new(),
            by_conclusion: vec![Vec::new(); n_targets],
            sub: Vec::new(),
            rule_ids: t.ids().to_vec(),
            contrary_target,
            cap_hits: 0,
        },
    };

    let premise_sets: Vec<Vec<Vec<usize>>> = (0..n_targets).map(|g| b.minimal_premise_sets(g)).collect();

    for (i, &c) in fact_target.iter().enumerate() {
        b.insert(ArgKind::Axiom, c, Vec::new(), 0, 1 << i)?;
    }

    loop {
        let mut changed = false;
        let snapshot: Vec<usize> = b.store.by_conclusion.iter().map(Vec::len).collect();

        for r in 0..t.defaults().len() {
            match ante_target[r] {
                None => changed |= b.insert(ArgKind::Defeasible(r), cons_target[r], Vec::new(), 1 << r, 0)?,
                Some(ante) => {
                    for k in 0..snapshot[ante] {
                        let child = b.store.by_conclusion[ante][k];
                        let (dr, prem) = (b.store.args[child].dr | 1 << r, b.store.args[child].premises);
                        changed |= b.insert(ArgKind::Defeasible(r), cons_target[r], vec![child], dr, prem)?;
                    }
                }
            }
        }

        for (goal, sets) in premise_sets.iter().enumerate() {
            for set in sets {
                if set.iter().any(|&g| snapshot[g] == 0) {
                    continue;
                }
                // One child per premise; keep the first combination for each rule set.
                let mut combos: BTreeMap<u64, (Vec<usize>, u64)> = BTreeMap::from([(0, (Vec::new(), 0))]);
                for &g in set {
                    let mut next: BTreeMap<u64, (Vec<usize>, u64)> = BTreeMap::new();
                    for (dr, (children, prem)) in &combos {
                        for &child in &b.store.by_conclusion[g][..snapshot[g]] {
                            let a = &b.store.args[child];
                            next.entry(dr | a.dr).or_insert_with(|| {
                                let mut c = children.clone();
                                c.push(child);
                                (c, prem | a.premises)
                            });
                        }
                    }
                    combos = next;
                }
                for (dr, (children, prem)) in combos {
                    changed |= b.insert(ArgKind::Strict, goal, children, dr, prem)?;
                }
            }
        }

        if !changed {
            break;
        }
    }

    let mut store = b.store;
    let n = store.args.len();
    let mut sub: Vec<FixedBitSet> = Vec::with_capacity(n);
    for a in &store.args {
        let mut s = FixedBitSet::with_capacity(n);
        s.insert(a.id);
        for &c in &a.children {
            s.union_with(&sub[c]);
        }
        sub.push(s);
    }
    store.sub = sub;
    Ok(store)
}

impl ArgumentStore {
    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn args(&self) -> &[Argument] {
        &self.args
    }

    pub fn get(&self, id: usize) -> &Argument {
        &self.args[id]
    }

    pub fn targets(&self) -> &[Formula] {
        &self.targets
    }

    pub fn rule_ids(&self) -> &[String] {
        &self.rule_ids
    }

    pub fn conclusion(&self, id: usize) -> &Formula {
        &self.targets[self.args[id].conclusion]
    }

    pub fn find(&self, dr: u64, conclusion: &Formula) -> Option<usize> {
        let c = self.targets.iter().position(|x| x == conclusion)?;
        self.index.get(&(dr, c)).copied()
    }

    /// Arguments with the given conclusion, in creation order.
    pub fn with_conclusion(&self, conclusion: &Formula) -> &[usize] {
        match self.targets.iter().position(|x| x == conclusion) {
            Some(c) => &self.by_conclusion[c],
            None => &[],
        }
    }

    pub fn subarguments(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        self.sub[id].ones()
    }

    pub fn is_subargument(&self, part: usize, whole: usize) -> bool {
        self.sub[whole].contains(part)
    }

    /// Arguments whose defeasible rules all lie in `rules`.
    pub fn args_restricted(&self, rules: u64) -> Vec<usize> {
        self.args.iter().filter(|a| a.dr & !rules == 0).map(|a| a.id).collect()
    }

    /// Rules occurring in at least one stored argument.
    pub fn used_rules(&self) -> u64 {
        self.args.iter().fold(0, |m, a| m | a.dr)
    }

    pub fn conclusions_of(&self, ids: &[usize]) -> Vec<Formula> {
        let set: BTreeSet<usize> = ids.iter().map(|&i| self.args[i].conclusion).collect();
        set.into_iter().map(|c| self.targets[c].clone()).collect()
    }

    /// `a` rebuts `b` at `b`'s own top rule.
    pub fn attacks_directly(&self, a: usize, b: usize) -> bool {
        match self.args[b].kind {
            ArgKind::Defeasible(r) => self.args[a].conclusion == self.contrary_target[r],
            _ => false,
        }
    }

    pub fn attacks(&self, a: usize, b: usize) -> bool {
        self.subarguments(b).any(|s| self.attacks_directly(a, s))
    }

    /// The subargument of `b` on which `a` defeats it, if any.
    pub fn defeats(&self, a: usize, b: usize, sp: &PriorityRelation) -> Option<usize> {
        self.subarguments(b)
            .find(|&s| self.attacks_directly(a, s) && !deli_less(self.args[a].dr, self.args[s].dr, sp))
    }

    fn direct_attacks(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in &self.args {
            if let ArgKind::Defeasible(r) = b.kind {
                for &a in &self.by_conclusion[self.contrary_target[r]] {
                    out.push((a, b.id));
                }
            }
        }
        out
    }

    pub fn render(&self, id: usize) -> String {
        let mut s = String::new();
        self.render_into(id, &mut s);
        s
    }

    fn render_into(&self, id: usize, out: &mut String) {
        let a = &self.args[id];
        out.push('[');
        for (k, &c) in a.children.iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            self.render_into(c, out);
        }
        let arrow = match a.kind {
            ArgKind::Axiom => "",
            ArgKind::Defeasible(_) => "=> ",
            ArgKind::Strict => "-> ",
        };
        if !a.children.is_empty() {
            out.push(' ');
        }
        let _ = write!(out, "{arrow}{}]", self.targets[a.conclusion]);
    }

    pub fn rule_names(&self, mask: u64) -> Vec<String> {
        bits(mask).map(|r| self.rule_ids[r].clone()).collect()
    }
}

pub fn args_restricted(store: &ArgumentStore, rules: u64) -> Vec<usize> {
    store.args_restricted(rules)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DefeatEdge {
    pub from: usize,
    pub to: usize,
    /// Subargument of `to` whose top rule is rebutted.
    pub on: usize,
}

#[derive(Clone, Debug)]
pub struct DefeatGraph {
    pub vertices: usize,
    /// Attack pairs, sorted.
    pub attacks: Vec<(usize, usize)>,
    /// Defeat edges, sorted by (from, to).
    pub defeats: Vec<DefeatEdge>,
}

impl DefeatGraph {
    pub fn to_af(&self) -> AbstractAF {
        AbstractAF::new(self.vertices, self.defeats.iter().map(|e| (e.from, e.to))).expect("edges reference stored arguments")
    }

    pub fn defeat_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.defeats.iter().map(|e| (e.from, e.to)).collect()
    }
}

pub fn build_defeat_graph(store: &ArgumentStore, sp: &PriorityRelation) -> DefeatGraph {
    let n = store.len();
    let mut attackers_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, b) in store.direct_attacks() {
        attackers_of[b].push(a);
    }
    let mut attacks = BTreeSet::new();
    let mut defeats: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for whole in 0..n {
        for part in store.subarguments(whole) {
            for &a in &attackers_of[part] {
                attacks.insert((a, whole));
                if !deli_less(store.args[a].dr, store.args[part].dr, sp) {
                    defeats.entry((a, whole)).or_insert(part);
                }
            }
        }
    }
    DefeatGraph {
        vertices: n,
        attacks: attacks.into_iter().collect(),
        defeats: defeats.into_iter().map(|((from, to), on)| DefeatEdge { from, to, on }).collect(),
    }
}

/// Walk the rules from most to least preferred under a total order, keeping
/// each rule whose addition leaves the restricted argument set attack-free.
pub fn generate_stable_extension(store: &ArgumentStore, sp_total: &PriorityRelation) -> u64 {
    let pairs: BTreeSet<u64> = store
        .direct_attacks()
        .into_iter()
        .map(|(a, b)| store.args[a].dr | store.args[b].dr)
        .collect();
    let chain = sp_total.chain().expect("order must be total");
    let mut kept = 0u64;
    for &r in chain.iter().rev() {
        let candidate = kept | 1 << r;
        if pairs.iter().all(|&need| need & !candidate != 0) {
            kept = candidate;
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dung::stable_extensions;
    use crate::fixtures;
    use crate::logic::parse_formula;
    use crate::random::{random_pdt, GeneratorConfig};
    use crate::sp::{sp_partial, sp_total};
    use proptest::prelude::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn mask(t: &Pdt, ids: &[&str]) -> u64 {
        t.priority().mask_of(ids).unwrap()
    }

    fn store(t: &Pdt) -> ArgumentStore {
        build_store(t, &[], StoreConfig::default()).unwrap()
    }

    #[test]
    fn penguin_arguments() {
        let t = fixtures::penguin();
        let s = store(&t);
        let a0 = s.find(mask(&t, &["d1"]), &p("a")).unwrap();
        let a = s.find(mask(&t, &["d1", "d2"]), &p("b")).unwrap();
        let b = s.find(mask(&t, &["d3"]), &p("~b")).unwrap();
        assert_eq!(s.get(a).children, vec![a0]);
        assert!(s.attacks(a, b) && s.attacks(b, a));
        assert!(!s.attacks(b, a0));
        let only12 = s.args_restricted(mask(&t, &["d1", "d2"]));
        assert!(only12.contains(&a0) && only12.contains(&a) && !only12.contains(&b));
        assert_eq!(s.args_restricted(t.priority().full_mask()).len(), s.len());
        assert!(s.args_restricted(0).iter().all(|&i| s.get(i).is_strict()));

        let sp = sp_partial(&t, t.priority());
        assert!(s.defeats(a, b, &sp).is_some() && s.defeats(b, a, &sp).is_some());
        let g = build_defeat_graph(&s, &sp);
        assert!(g.defeats.iter().all(|e| e.to != a0));
    }

    #[test]
    fn chain_theory_arguments() {
        let t = fixtures::chain_theory();
        let s = store(&t);
        let a = s.find(mask(&t, &["d1", "d2"]), &p("c2")).unwrap();
        let d = s.find(mask(&t, &["d1", "d3", "d4", "d5"]), &p("~c2")).unwrap();
        assert_eq!(s.get(d).kind, ArgKind::Strict);
        assert!(s.find(mask(&t, &["d3", "d4"]), &p("c4")).is_some());
        assert!(s.find(mask(&t, &["d1", "d5"]), &p("~(c2 & c4)")).is_some());
        assert!(s.attacks(d, a));
        let sp = sp_total(&t, t.priority());
        assert!(crate::sp::arg_strictly_preferred(s.get(a), s.get(d), &sp));
        assert_eq!(s.defeats(d, a, &sp), Some(a));
        assert_eq!(generate_stable_extension(&s, &sp), mask(&t, &["d1", "d3", "d4", "d5"]));
    }

    #[test]
    fn self_blocking_arguments() {
        let t = fixtures::self_blocking();
        let s = store(&t);
        let a0 = s.find(0, &p("a")).unwrap();
        let a1 = s.find(mask(&t, &["d1"]), &p("~a")).unwrap();
        let sp = sp_total(&t, t.priority());
        assert!(s.defeats(a0, a1, &sp).is_some());
        let r = generate_stable_extension(&s, &sp);
        assert_eq!(r, mask(&t, &["d2"]));
        let ext = s.args_restricted(r);
        assert!(ext.contains(&s.find(mask(&t, &["d2"]), &p("b")).unwrap()));
    }

    #[test]
    fn facts_only_store() {
        let t = fixtures::facts_only(&["a"]);
        let s = store(&t);
        assert_eq!(s.len(), 1);
        assert_eq!(s.get(0).kind, ArgKind::Axiom);
        let sp = sp_total(&t, t.priority());
        assert_eq!(generate_stable_extension(&s, &sp), 0);
        assert!(build_defeat_graph(&s, &sp).defeats.is_empty());
    }

    #[test]
    fn four_argument_defeats() {
        let t = fixtures::four_arguments();
        let s = store(&t);
        let sp = t.priority().clone();
        let a = s.find(mask(&t, &["r1"]), &p("~b")).unwrap();
        let b = s.find(mask(&t, &["r2", "r3"]), &p("b")).unwrap();
        let c = s.find(mask(&t, &["r4", "r5"]), &p("~b")).unwrap();
        let d = s.find(mask(&t, &["r6"]), &p("b")).unwrap();
        let g = build_defeat_graph(&s, &sp).defeat_pairs();
        let among: BTreeSet<(usize, usize)> = g
            .into_iter()
            .filter(|(x, y)| [a, b, c, d].contains(x) && [a, b, c, d].contains(y))
            .collect();
        assert_eq!(among, BTreeSet::from([(a, b), (b, c), (c, d), (a, d)]));
    }

    #[test]
    fn attack_free_of_axioms() {
        let t = fixtures::self_blocking();
        let s = store(&t);
        let a0 = s.find(0, &p("a")).unwrap();
        assert!((0..s.len()).all(|x| !s.attacks(x, a0)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn store_and_graph_invariants(seed in any::<u64>(), total in any::<bool>()) {
            let cfg = GeneratorConfig { defaults: 5, atoms: 4, total, ..GeneratorConfig::default() };
            let t = random_pdt(&cfg, seed);
            let s = store(&t);
            let sp = sp_partial(&t, t.priority());
            let g = build_defeat_graph(&s, &sp);

            for a in s.args() {
                for &c in &a.children {
                    prop_assert!(c < s.len());
                    prop_assert_eq!(a.dr & s.get(c).dr, s.get(c).dr);
                }
            }
            let attacks: BTreeSet<_> = g.attacks.iter().copied().collect();
            let defeats = g.defeat_pairs();
            prop_assert!(defeats.is_subset(&attacks));
            for &(x, y) in &defeats {
                for whole in 0..s.len() {
                    if s.is_subargument(y, whole) {
                        prop_assert!(defeats.contains(&(x, whole)));
                    }
                }
            }

            let o = t.oracle();
            for e in stable_extensions(&g.to_af(), Default::default()).unwrap() {
                let members: Vec<usize> = e.iter().copied().collect();
                let dr = members.iter().fold(0u64, |m, &i| m | s.get(i).dr);
                for a in s.args() {
                    prop_assert_eq!(e.contains(&a.id), a.dr & !dr == 0);
                }
                for &x in &members {
                    for &y in &members {
                        prop_assert!(!s.attacks(x, y));
                    }
                    let sub_concs: Vec<Formula> = s.subarguments(x).map(|k| s.conclusion(k).clone()).collect();
                    prop_assert!(o.is_consistent(&sub_concs).unwrap());
                }
                prop_assert!(o.is_consistent(&s.conclusions_of(&members)).unwrap());
            }

            if let Some(chain) = t.priority().is_total().then(|| sp_total(&t, t.priority())) {
                let kept = generate_stable_extension(&s, &chain);
                let ext = s.args_restricted(kept);
                prop_assert!(o.is_consistent(&s.conclusions_of(&ext)).unwrap());
            }
        }
    }
}
