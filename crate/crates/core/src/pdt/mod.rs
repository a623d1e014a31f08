//! Defaults, prioritised default theories and priority orders.

mod order;

pub use order::{
    bits, mask_range, CapacityError, LinearisationCap, OrderError, PriorityRelation, DEFAULT_MAX_LINEARISATIONS,
    DEFAULT_MAX_LINEARISATION_ELEMENTS, MAX_CARRIER,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::logic::{Formula, LogicError, Oracle, Vocabulary};

/// Normal default `antecedent : consequent / consequent`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DefaultRule {
    pub id: String,
    pub antecedent: Formula,
    pub consequent: Formula,
}

impl DefaultRule {
    pub fn new(id: impl Into<String>, antecedent: Formula, consequent: Formula) -> Self {
        DefaultRule {
            id: id.into(),
            antecedent,
            consequent,
        }
    }
}

impl fmt::Display for DefaultRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} => {}", self.id, self.antecedent, self.consequent)
    }
}

/// Unchecked theory as read from input, before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdtDraft {
    pub atoms: Vec<String>,
    pub facts: Vec<Formula>,
    pub defaults: Vec<DefaultRule>,
    pub priority: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Vocabulary(LogicError),
    DuplicateDefault(String),
    TooManyDefaults(usize),
    DanglingPriorityId(String),
    ReflexivePriority(String),
    PriorityCycle(Vec<String>),
    InconsistentFacts(Vec<Formula>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Vocabulary(e) => write!(f, "{e}"),
            Violation::DuplicateDefault(id) => write!(f, "default '{id}' defined twice"),
            Violation::TooManyDefaults(n) => write!(f, "{n} defaults exceed the limit of {MAX_CARRIER}"),
            Violation::DanglingPriorityId(id) => write!(f, "priority mentions unknown default '{id}'"),
            Violation::ReflexivePriority(id) => write!(f, "reflexive priority {id} < {id}"),
            Violation::PriorityCycle(ids) => write!(f, "priority cycle {}", ids.join(" < ")),
            Violation::InconsistentFacts(w) => {
                let w: Vec<String> = w.iter().map(ToString::to_string).collect();
                write!(f, "facts are inconsistent: {{{}}}", w.join(", "))
            }
        }
    }
}

/// Every violated theory invariant; empty when the draft is a valid theory.
pub fn validate_pdt(draft: &PdtDraft) -> Vec<Violation> {
    let mut out = Vec::new();
    let vocab = match Vocabulary::new(draft.atoms.iter().cloned()) {
        Ok(v) => v,
        Err(e) => {
            out.push(Violation::Vocabulary(e));
            return out;
        }
    };
    let oracle = Oracle::new(vocab);
    let formulas = draft
        .facts
        .iter()
        .chain(draft.defaults.iter().flat_map(|d| [&d.antecedent, &d.consequent]));
    for f in formulas {
        if let Err(e) = oracle.check(f) {
            let v = Violation::Vocabulary(e);
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }

    let mut ids = BTreeSet::new();
    for d in &draft.defaults {
        if !ids.insert(d.id.as_str()) {
            out.push(Violation::DuplicateDefault(d.id.clone()));
        }
    }
    if draft.defaults.len() > MAX_CARRIER {
        out.push(Violation::TooManyDefaults(draft.defaults.len()));
    }

    let mut edges: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (lo, hi) in &draft.priority {
        for id in [lo, hi] {
            if !ids.contains(id.as_str()) {
                out.push(Violation::DanglingPriorityId(id.clone()));
            }
        }
        if lo == hi {
            out.push(Violation::ReflexivePriority(lo.clone()));
        } else {
            edges.entry(lo).or_default().push(hi);
        }
    }
    if let Some(cycle) = find_cycle(&edges) {
        out.push(Violation::PriorityCycle(cycle));
    }

    if out.is_empty() {
        if let Some(witness) = inconsistent_core(&oracle, &draft.facts) {
            out.push(Violation::InconsistentFacts(witness));
        }
    }
    out
}

fn find_cycle(edges: &BTreeMap<&str, Vec<&str>>) -> Option<Vec<String>> {
    fn visit<'a>(
        node: &'a str,
        edges: &BTreeMap<&'a str, Vec<&'a str>>,
        state: &mut BTreeMap<&'a str, u8>,
        stack: &mut Vec<&'a str>,
    ) -> Option<Vec<String>> {
        state.insert(node, 1);
        stack.push(node);
        for &next in edges.get(node).map(Vec::as_slice).unwrap_or(&[]) {
            match state.get(next) {
                Some(1) => {
                    let start = stack.iter().position(|&s| s == next).unwrap();
                    let mut cyc: Vec<String> = stack[start..].iter().map(|s| s.to_string()).collect();
                    cyc.push(next.to_string());
                    return Some(cyc);
                }
                Some(_) => {}
                None => {
                    if let Some(c) = visit(next, edges, state, stack) {
                        return Some(c);
                    }
                }
            }
        }
        stack.pop();
        state.insert(node, 2);
        None
    }
    let mut state = BTreeMap::new();
    for &start in edges.keys() {
        if !state.contains_key(start) {
            if let Some(c) = visit(start, edges, &mut state, &mut Vec::new()) {
                return Some(c);
            }
        }
    }
    None
}

// Shrink an inconsistent set to a subset-minimal inconsistent one.
fn inconsistent_core(oracle: &Oracle, facts: &[Formula]) -> Option<Vec<Formula>> {
    if oracle.is_consistent(facts).ok()? {
        return None;
    }
    let mut core = facts.to_vec();
    let mut i = 0;
    while i < core.len() {
        let mut trial = core.clone();
        trial.remove(i);
        if oracle.is_consistent(&trial).unwrap_or(true) {
            i += 1;
        } else {
            core = trial;
        }
    }
    Some(core)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid theory: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
pub struct InvalidTheory(pub Vec<Violation>);

/// Validated prioritised default theory. The priority carrier lists the default
/// ids in declaration order, so default index `i` is carrier index `i`.
#[derive(Clone, Debug)]
pub struct Pdt {
    oracle: Oracle,
    facts: Vec<Formula>,
    defaults: Vec<DefaultRule>,
    priority: PriorityRelation,
}

impl Pdt {
    pub fn new(draft: &PdtDraft) -> Result<Self, InvalidTheory> {
        let violations = validate_pdt(draft);
        if !violations.is_empty() {
            return Err(InvalidTheory(violations));
        }
        let vocab = Vocabulary::new(draft.atoms.iter().cloned()).expect("validated");
        let ids: Vec<&str> = draft.defaults.iter().map(|d| d.id.as_str()).collect();
        let pairs: Vec<(&str, &str)> = draft.priority.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let priority = PriorityRelation::from_pairs(&ids, &pairs).expect("validated");
        Ok(Pdt {
            oracle: Oracle::new(vocab),
            facts: draft.facts.clone(),
            defaults: draft.defaults.clone(),
            priority,
        })
    }

    /// Same theory with a different priority over the same default ids.
    pub fn with_priority(&self, priority: PriorityRelation) -> Result<Self, OrderError> {
        if priority.ids() != self.priority.ids() {
            return Err(OrderError::NotAChain(priority.ids().to_vec()));
        }
        Ok(Pdt {
            priority,
            ..self.clone()
        })
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    pub fn facts(&self) -> &[Formula] {
        &self.facts
    }

    pub fn defaults(&self) -> &[DefaultRule] {
        &self.defaults
    }

    pub fn priority(&self) -> &PriorityRelation {
        &self.priority
    }

    pub fn ids(&self) -> &[String] {
        self.priority.ids()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.priority.index_of(id)
    }

    pub fn ids_of(&self, mask: u64) -> Vec<String> {
        self.priority.ids_of(mask)
    }

    pub fn to_draft(&self) -> PdtDraft {
        PdtDraft {
            atoms: self.oracle.vocabulary().names().map(str::to_string).collect(),
            facts: self.facts.clone(),
            defaults: self.defaults.clone(),
            priority: self.priority.pairs(),
        }
    }
}
