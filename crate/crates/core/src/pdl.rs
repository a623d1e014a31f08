//! Extensions of prioritised default theories, built directly from the defaults.

use crate::logic::{Formula, LogicError, Oracle};
use crate::pdt::{bits, CapacityError, DefaultRule, LinearisationCap, Pdt, PriorityRelation};

/// An extension carried as its finite generator set; membership is entailment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    /// Facts followed by the consequents added, in application order.
    pub generators: Vec<Formula>,
    /// Ids of the applied defaults, in application order.
    pub trace: Vec<String>,
}

impl Extension {
    pub fn from_facts(facts: &[Formula]) -> Self {
        Extension {
            generators: facts.to_vec(),
            trace: Vec::new(),
        }
    }

    pub fn entails(&self, oracle: &Oracle, phi: &Formula) -> bool {
        oracle.entails(&self.generators, phi).expect("extension formulas are declared")
    }

    pub fn equivalent(&self, oracle: &Oracle, other: &Extension) -> bool {
        oracle
            .equivalent_sets(&self.generators, &other.generators)
            .expect("extension formulas are declared")
    }
}

pub fn is_active(oracle: &Oracle, d: &DefaultRule, e: &Extension) -> bool {
    e.entails(oracle, &d.antecedent)
        && !e.entails(oracle, &d.consequent)
        && !e.entails(oracle, &d.consequent.clone().negate())
}

pub fn is_semi_active(oracle: &Oracle, d: &DefaultRule, e: &Extension) -> bool {
    e.entails(oracle, &d.antecedent)
        && !e.entails(oracle, &d.consequent.clone().negate())
        && e.entails(oracle, &d.consequent)
}

/// Repeatedly apply the `lin`-greatest active default until none is active.
pub fn compute_extension(t: &Pdt, lin: &PriorityRelation) -> Extension {
    let order = lin.chain().expect("linearisation must be total");
    let oracle = t.oracle();
    let mut e = Extension::from_facts(t.facts());
    loop {
        let next = order.iter().rev().find(|&&i| is_active(oracle, &t.defaults()[i], &e));
        match next {
            Some(&i) => {
                let d = &t.defaults()[i];
                e.generators.push(d.consequent.clone());
                e.trace.push(d.id.clone());
            }
            None => return e,
        }
    }
}

/// Applied defaults of an extension, as a mask over default indices.
pub fn generating_defaults(t: &Pdt, e: &Extension) -> u64 {
    e.trace
        .iter()
        .map(|id| t.index_of(id).expect("trace ids come from the theory"))
        .fold(0, |m, i| m | 1 << i)
}

/// Defaults whose antecedent holds and whose consequent is not refuted.
pub fn nbd(t: &Pdt, e: &Extension) -> u64 {
    let oracle = t.oracle();
    t.defaults()
        .iter()
        .enumerate()
        .filter(|(_, d)| e.entails(oracle, &d.antecedent) && !e.entails(oracle, &d.consequent.clone().negate()))
        .fold(0, |m, (i, _)| m | 1 << i)
}

pub fn semi_active_defaults(t: &Pdt, e: &Extension) -> u64 {
    t.defaults()
        .iter()
        .enumerate()
        .filter(|(_, d)| is_semi_active(t.oracle(), d, e))
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// One extension per distinct (up to equivalence) result over all linearisations.
pub fn all_extensions(t: &Pdt, cap: LinearisationCap) -> Result<Vec<Extension>, CapacityError> {
    let mut out: Vec<Extension> = Vec::new();
    for lin in t.priority().linearisations(cap)? {
        let e = compute_extension(t, &lin);
        if !out.iter().any(|x| x.equivalent(t.oracle(), &e)) {
            out.push(e);
        }
    }
    Ok(out)
}

#[derive(Debug, thiserror::Error)]
pub enum InferenceError {
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

pub fn sceptical_inference(t: &Pdt, phi: &Formula, cap: LinearisationCap) -> Result<bool, InferenceError> {
    t.oracle().check(phi)?;
    Ok(all_extensions(t, cap)?.iter().all(|e| e.entails(t.oracle(), phi)))
}

/// Replays a trace from the facts, checking each step applied the greatest
/// active default. Returns the first offending position.
pub fn replay_trace(t: &Pdt, lin: &PriorityRelation, e: &Extension) -> Result<(), usize> {
    let order = lin.chain().expect("linearisation must be total");
    let mut cur = Extension::from_facts(t.facts());
    for (step, id) in e.trace.iter().enumerate() {
        let greatest = order.iter().rev().find(|&&i| is_active(t.oracle(), &t.defaults()[i], &cur));
        match greatest {
            Some(&i) if &t.defaults()[i].id == id => {
                cur.generators.push(t.defaults()[i].consequent.clone());
                cur.trace.push(id.clone());
            }
            _ => return Err(step),
        }
    }
    Ok(())
}

/// Generator set for the union of facts and the consequents of `mask`.
pub fn generators_of(t: &Pdt, mask: u64) -> Vec<Formula> {
    t.facts()
        .iter()
        .cloned()
        .chain(bits(mask).map(|i| t.defaults()[i].consequent.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::logic::parse_formula;
    use crate::random::{random_pdt, GeneratorConfig};
    use proptest::prelude::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn ext(items: &[&str]) -> Extension {
        Extension::from_facts(&items.iter().map(|s| p(s)).collect::<Vec<_>>())
    }

    #[test]
    fn activity_examples() {
        let t = fixtures::self_blocking();
        let o = t.oracle();
        let free_b = DefaultRule::new("x", Formula::True, p("b"));
        assert!(is_active(o, &free_b, &ext(&[])));
        assert!(!is_semi_active(o, &free_b, &ext(&[])));
        let blocked = DefaultRule::new("y", p("a"), p("~a"));
        assert!(!is_active(o, &blocked, &ext(&["a"])));
        let ab = DefaultRule::new("z", p("a"), p("b"));
        assert!(!is_active(o, &ab, &ext(&["a", "b"])));
        assert!(is_semi_active(o, &ab, &ext(&["a", "b"])));
        let r = fixtures::redundant_pair();
        let ac = &r.defaults()[0];
        assert!(is_semi_active(r.oracle(), ac, &ext(&["a", "b", "c"])));
    }

    #[test]
    fn chain_theory_extension() {
        let t = fixtures::chain_theory();
        let e = compute_extension(&t, t.priority());
        assert_eq!(e.trace, ["d3", "d4", "d1", "d5"]);
        let expected = ext(&["c1", "~c2", "c3", "c4"]);
        assert!(e.equivalent(t.oracle(), &expected));
        assert_eq!(t.ids_of(nbd(&t, &e)), ["d1", "d3", "d4", "d5"]);
        assert_eq!(t.ids_of(generating_defaults(&t, &e)), ["d1", "d3", "d4", "d5"]);
    }

    #[test]
    fn self_blocking_extension() {
        let t = fixtures::self_blocking();
        let e = compute_extension(&t, t.priority());
        assert!(e.equivalent(t.oracle(), &ext(&["a", "b"])));
        assert_eq!(t.ids_of(nbd(&t, &e)), ["d2"]);
    }

    #[test]
    fn no_defaults_gives_facts() {
        let t = fixtures::facts_only(&["a"]);
        let e = compute_extension(&t, t.priority());
        assert_eq!(e.generators, vec![p("a")]);
        assert_eq!(nbd(&t, &e), 0);
        assert_eq!(generating_defaults(&t, &e), 0);
    }

    #[test]
    fn redundant_pair_generating_set() {
        let t = fixtures::redundant_pair();
        let lin = PriorityRelation::from_chain(&["d1", "d2"]).unwrap();
        let e = compute_extension(&t, &lin);
        assert_eq!(e.trace, ["d2"]);
        let all = all_extensions(&t, LinearisationCap::default()).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].equivalent(t.oracle(), &ext(&["a", "b", "c"])));
    }

    #[test]
    fn penguin_extensions_and_scepticism() {
        let t = fixtures::penguin();
        let cap = LinearisationCap::default();
        let all = all_extensions(&t, cap).unwrap();
        assert_eq!(all.len(), 2);
        for want in [ext(&["a", "b"]), ext(&["a", "~b"])] {
            assert!(all.iter().any(|e| e.equivalent(t.oracle(), &want)));
        }
        assert!(sceptical_inference(&t, &p("a"), cap).unwrap());
        assert!(!sceptical_inference(&t, &p("b"), cap).unwrap());
        assert!(sceptical_inference(&t, &Formula::True, cap).unwrap());
    }

    #[test]
    fn opposing_pair_has_two_extensions() {
        let t = fixtures::opposing_pair();
        let all = all_extensions(&t, LinearisationCap::default()).unwrap();
        assert_eq!(all.len(), 2);
        for want in [ext(&["a"]), ext(&["~a"])] {
            assert!(all.iter().any(|e| e.equivalent(t.oracle(), &want)));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn extension_invariants(seed in any::<u64>()) {
            let cfg = GeneratorConfig { defaults: 6, atoms: 6, ..GeneratorConfig::default() };
            let t = random_pdt(&cfg, seed);
            let o = t.oracle();
            let lin = t.priority().linearise();
            let e = compute_extension(&t, &lin);
            prop_assert!(o.is_consistent(&e.generators).unwrap());
            prop_assert!(t.defaults().iter().all(|d| !is_active(o, d, &e)));
            prop_assert_eq!(replay_trace(&t, &lin, &e), Ok(()));
            // Brute force both sides of NBD = GD ∪ SAD, with the model set directly.
            let models = o.models_of_set(&e.generators).unwrap();
            let holds = |f: &Formula| models.is_subset(&o.models(f).unwrap());
            let mut brute_nbd = 0u64;
            let mut brute_sad = 0u64;
            for (i, d) in t.defaults().iter().enumerate() {
                let not_refuted = !holds(&d.consequent.clone().negate());
                if holds(&d.antecedent) && not_refuted {
                    brute_nbd |= 1 << i;
                    if holds(&d.consequent) {
                        brute_sad |= 1 << i;
                    }
                }
            }
            prop_assert_eq!(nbd(&t, &e), brute_nbd);
            prop_assert_eq!(generating_defaults(&t, &e) | brute_sad, brute_nbd);
            prop_assert_eq!(semi_active_defaults(&t, &e), brute_sad);
        }
    }
}
