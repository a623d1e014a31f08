//! Structure-preference reordering of rule priorities and the set lifting used
//! to compare arguments.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use crate::args::Argument;
use crate::logic::{Formula, FormulaPool};
use crate::pdt::{bits, OrderError, Pdt, PriorityRelation};

/// Rule indices read from least to greatest preferred.
pub type RuleSequence = Vec<usize>;

/// Which rules have their antecedent derivable from the facts plus the
/// consequents of a given rule set. Results are memoised per rule set.
pub struct Applicability<'t> {
    t: &'t Pdt,
    pool: FormulaPool<'t>,
    cache: RefCell<HashMap<u64, u64>>,
}

impl<'t> Applicability<'t> {
    pub fn new(t: &'t Pdt) -> Self {
        let mut formulas: Vec<Formula> = t.facts().to_vec();
        formulas.extend(t.defaults().iter().map(|d| d.antecedent.clone()));
        formulas.extend(t.defaults().iter().map(|d| d.consequent.clone()));
        let pool = FormulaPool::new(t.oracle(), formulas).expect("theory formulas are declared");
        Applicability {
            t,
            pool,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn applicable(&self, used: u64) -> u64 {
        if let Some(&m) = self.cache.borrow().get(&used) {
            return m;
        }
        let nf = self.t.facts().len();
        let k = self.t.defaults().len();
        let premises: Vec<usize> = (0..nf).chain(bits(used).map(|r| nf + k + r)).collect();
        let mut out = 0u64;
        for (r, d) in self.t.defaults().iter().enumerate() {
            if d.antecedent == Formula::True || self.pool.entails(&premises, nf + r) {
                out |= 1 << r;
            }
        }
        self.cache.borrow_mut().insert(used, out);
        out
    }

    /// Rules reachable by repeatedly applying applicable rules from the facts.
    pub fn reachable(&self) -> u64 {
        let mut cur = 0u64;
        loop {
            let next = self.applicable(cur);
            if next | cur == cur {
                return cur;
            }
            cur |= next;
        }
    }
}

/// Picks for a total `d_order`: each step takes the greatest applicable rule not
/// yet picked. Returns the picks (most preferred first) and the stranded rules
/// whose antecedent never becomes derivable, in descending `d_order`.
pub fn pick_sequence(t: &Pdt, d_order: &PriorityRelation) -> (Vec<usize>, Vec<usize>) {
    let app = Applicability::new(t);
    pick_sequence_with(&app, d_order)
}

fn pick_sequence_with(app: &Applicability<'_>, d_order: &PriorityRelation) -> (Vec<usize>, Vec<usize>) {
    let full = d_order.full_mask();
    let mut picked = 0u64;
    let mut picks = Vec::new();
    loop {
        let candidates = app.applicable(picked) & !picked & full;
        if candidates == 0 {
            break;
        }
        let top = d_order.max_elements(candidates);
        debug_assert_eq!(top.count_ones(), 1, "d_order must be total");
        let r = top.trailing_zeros() as usize;
        picked |= 1 << r;
        picks.push(r);
    }
    let mut stranded: Vec<usize> = bits(full & !picked).collect();
    stranded.sort_by_key(|&r| d_order.above(r).count_ones());
    (picks, stranded)
}

/// Structure-preference order of a total rule priority. Stranded rules go
/// below every placed rule, keeping their `d_order` among themselves.
pub fn sp_total(t: &Pdt, d_order: &PriorityRelation) -> PriorityRelation {
    let (picks, stranded) = pick_sequence(t, d_order);
    let mut chain: Vec<usize> = picks.into_iter().chain(stranded).collect();
    chain.reverse();
    PriorityRelation::chain_over(d_order.ids(), &chain).expect("every rule placed once")
}

/// Level-by-level exploration: every sequence is extended on its least end by
/// each maximal applicable rule it does not yet contain. Stops at the first
/// level where some sequence cannot be extended.
pub fn sp_structure1(t: &Pdt, d_order: &PriorityRelation) -> BTreeSet<RuleSequence> {
    let app = Applicability::new(t);
    let n = t.defaults().len();
    let mut level: BTreeSet<RuleSequence> = BTreeSet::from([Vec::new()]);
    for _ in 0..=n {
        let mut next = BTreeSet::new();
        for seq in &level {
            let used = seq.iter().fold(0u64, |m, &r| m | 1 << r);
            let choices = d_order.max_elements(app.applicable(used) & !used);
            if choices == 0 {
                return level;
            }
            for r in bits(choices) {
                let mut longer = Vec::with_capacity(seq.len() + 1);
                longer.push(r);
                longer.extend_from_slice(seq);
                next.insert(longer);
            }
        }
        level = next;
    }
    level
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpError {
    #[error("sequences range over different rule sets")]
    MismatchedSequences,
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// Intersection of the chains given by the sequences, over carrier `ids`.
pub fn sp_structure2(seqs: &BTreeSet<RuleSequence>, ids: &[String]) -> Result<PriorityRelation, SpError> {
    let mut iter = seqs.iter();
    let Some(first) = iter.next() else {
        return Ok(PriorityRelation::empty(ids)?);
    };
    let key: BTreeSet<usize> = first.iter().copied().collect();
    let mut out = PriorityRelation::chain_over(ids, first)?;
    for seq in iter {
        if seq.iter().copied().collect::<BTreeSet<_>>() != key {
            return Err(SpError::MismatchedSequences);
        }
        out = out.intersection(&PriorityRelation::chain_over(ids, seq)?);
    }
    Ok(out)
}

pub fn sp_partial(t: &Pdt, d_order: &PriorityRelation) -> PriorityRelation {
    sp_structure2(&sp_structure1(t, d_order), d_order.ids()).expect("sequences of one level cover the same rules")
}

/// Disjoint elitist comparison of rule sets: some rule only in `g1` sits below
/// every rule only in `g2`.
pub fn deli_less(g1: u64, g2: u64, order: &PriorityRelation) -> bool {
    let only1 = g1 & !g2;
    let only2 = g2 & !g1;
    bits(only1).any(|x| only2 & !order.above(x) == 0)
}

pub fn arg_strictly_preferred(a: &Argument, b: &Argument, sp: &PriorityRelation) -> bool {
    deli_less(a.dr, b.dr, sp)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pdt::LinearisationCap;
    use crate::random::{random_pdt, GeneratorConfig};
    use proptest::prelude::*;

    /// Penguin order in compact digit notation: "123" is the chain r1<r2<r3,
    /// "(21,31)" the pair set {r2<r1, r3<r1}, "0" the empty order.
    pub(crate) fn digits(code: &str) -> PriorityRelation {
        let ids = ["d1", "d2", "d3"];
        let id = |c: char| ids[c.to_digit(10).unwrap() as usize - 1];
        let mut pairs = Vec::new();
        if let Some(inner) = code.strip_prefix('(') {
            for p in inner.trim_end_matches(')').split(',') {
                let c: Vec<char> = p.chars().collect();
                pairs.push((id(c[0]), id(c[1])));
            }
        } else if code != "0" {
            let c: Vec<char> = code.chars().collect();
            for w in c.windows(2) {
                pairs.push((id(w[0]), id(w[1])));
            }
        }
        PriorityRelation::from_pairs(&ids, &pairs).unwrap()
    }

    #[test]
    fn chain_theory_total_order() {
        let t = fixtures::chain_theory();
        let sp = sp_total(&t, t.priority());
        assert_eq!(sp.chain_ids().unwrap(), ["d2", "d5", "d1", "d4", "d3"]);
        assert_eq!(sp_partial(&t, t.priority()), sp);
        let seqs = sp_structure1(&t, t.priority());
        assert_eq!(seqs.len(), 1);
        let expected = PriorityRelation::from_chain(&["d2", "d5", "d1", "d4", "d3"]).unwrap();
        let back = sp_structure2(&seqs, t.ids()).unwrap();
        assert_eq!(back.chain_ids(), expected.chain_ids());
    }

    #[test]
    fn self_blocking_total_order() {
        let t = fixtures::self_blocking();
        assert_eq!(sp_total(&t, t.priority()).chain_ids().unwrap(), ["d2", "d1"]);
    }

    #[test]
    fn penguin_sequences() {
        let t = fixtures::penguin();
        let seqs = sp_structure1(&t, t.priority());
        assert_eq!(seqs, BTreeSet::from([vec![2, 1, 0], vec![1, 0, 2]]));
        let sp = sp_structure2(&seqs, t.ids()).unwrap();
        assert_eq!(sp.pairs(), [("d2".to_string(), "d1".to_string())]);
        assert_eq!(sp_total(&t, &digits("123")), digits("213"));
    }

    #[test]
    fn structure2_edge_cases() {
        let ids = vec!["a".to_string(), "b".to_string()];
        let opposite = BTreeSet::from([vec![0, 1], vec![1, 0]]);
        assert_eq!(sp_structure2(&opposite, &ids).unwrap().pair_count(), 0);
        let ragged = BTreeSet::from([vec![0], vec![1]]);
        assert_eq!(sp_structure2(&ragged, &ids), Err(SpError::MismatchedSequences));
        let t = fixtures::facts_only(&["a"]);
        assert_eq!(sp_structure1(&t, t.priority()), BTreeSet::from([vec![]]));
    }

    #[test]
    fn partial_penguin_rows() {
        let t = fixtures::penguin();
        for (input, output) in [("23", "(21,23)"), ("0", "21"), ("31", "(21,31)")] {
            assert_eq!(sp_partial(&t, &digits(input)), digits(output), "{input}");
        }
    }

    #[test]
    fn four_argument_priority_is_a_fixed_point() {
        let t = fixtures::four_arguments();
        assert_eq!(&sp_partial(&t, t.priority()), t.priority());
    }

    /// Choosing `p` over `q` first forces `y < q < p < x` in every
    /// linearisation, yet the level search later picks `y` before `x`.
    #[test]
    fn some_sequences_come_from_no_linearisation() {
        let t = Pdt::new(&crate::pdt::tests::draft(
            &["a", "b", "c", "e"],
            &[],
            &[("p", "true", "a"), ("q", "true", "b"), ("x", "a", "c"), ("y", "true", "e")],
            &[("p", "x"), ("y", "q")],
        ))
        .unwrap();
        let seqs = sp_structure1(&t, t.priority());
        let odd: RuleSequence = vec![2, 3, 1, 0];
        assert!(seqs.contains(&odd));
        let from_lins: Vec<RuleSequence> = t
            .priority()
            .linearisations(LinearisationCap::default())
            .unwrap()
            .iter()
            .map(|l| pick_sequence(&t, l).0.into_iter().rev().collect())
            .collect();
        assert!(!from_lins.contains(&odd));
        assert!(from_lins.iter().all(|s| seqs.contains(s)));
    }

    #[test]
    fn deli_examples() {
        let t = fixtures::chain_theory();
        let sp = sp_total(&t, t.priority());
        let a = sp.mask_of(&["d1", "d2"]).unwrap();
        let d = sp.mask_of(&["d1", "d3", "d4", "d5"]).unwrap();
        assert!(deli_less(a, d, &sp));
        assert!(!deli_less(d, a, &sp));
        assert!(!deli_less(a, a, &sp));
        assert!(!deli_less(0, 1, &sp));
        assert!(deli_less(1, 0, &sp));
    }

    fn arb_rule_sets(n: usize) -> impl Strategy<Value = (u64, u64, u64)> {
        let m = (1u64 << n) - 1;
        (any::<u64>(), any::<u64>(), any::<u64>()).prop_map(move |(a, b, c)| (a & m, b & m, c & m))
    }

    fn random_chain(n: usize, seed: u64) -> PriorityRelation {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let ids: Vec<String> = (0..n).map(|i| format!("r{i}")).collect();
        PriorityRelation::chain_over(&ids, &perm).unwrap()
    }

    proptest! {
        #[test]
        fn lifting_is_a_strict_total_order_on_total_bases(seed in any::<u64>(), (a, b, c) in arb_rule_sets(7)) {
            let o = random_chain(7, seed);
            prop_assert!(!deli_less(a, a, &o));
            if deli_less(a, b, &o) && deli_less(b, c, &o) {
                prop_assert!(deli_less(a, c, &o));
            }
            if a != b {
                prop_assert!(deli_less(a, b, &o) ^ deli_less(b, a, &o));
            }
        }

        #[test]
        fn subsets_are_never_below_supersets(seed in any::<u64>(), (a, b, _c) in arb_rule_sets(6)) {
            let o = random_chain(6, seed);
            prop_assert!(!deli_less(a, a | b, &o));
            if b & !a != 0 {
                prop_assert!(deli_less(a | b, a, &o));
            }
        }

        #[test]
        fn square_and_intersection(seed in any::<u64>()) {
            let cfg = GeneratorConfig { defaults: 5, atoms: 4, ..GeneratorConfig::default() };
            let t = random_pdt(&cfg, seed);
            let base = sp_partial(&t, t.priority());
            let reach = Applicability::new(&t).reachable();
            let mut meet: Option<PriorityRelation> = None;
            for l in t.priority().linearisations(LinearisationCap::default()).unwrap() {
                let lifted = sp_partial(&t, &l);
                prop_assert!(lifted.contains(&base));
                prop_assert!(lifted.is_total_on(reach));
                let total = sp_total(&t, &l);
                prop_assert_eq!(&lifted, &total.restricted_to(reach));
                meet = Some(match meet { None => lifted, Some(m) => m.intersection(&lifted) });
            }
            prop_assert!(meet.unwrap().contains(&base));
        }

        #[test]
        fn every_linearisation_yields_a_sequence(seed in any::<u64>()) {
            let cfg = GeneratorConfig { defaults: 5, atoms: 4, ..GeneratorConfig::default() };
            let t = random_pdt(&cfg, seed);
            let lins = t.priority().linearisations(LinearisationCap::default()).unwrap();
            let picks: Vec<Vec<usize>> = lins.iter().map(|l| {
                let mut p = pick_sequence(&t, l).0;
                p.reverse();
                p
            }).collect();
            let seqs = sp_structure1(&t, t.priority());
            for p in &picks {
                prop_assert!(seqs.contains(p));
            }
        }
    }
}
