//! Small named theories used by tests, the acceptance suite and the CLI docs.

use crate::logic::parse_formula;
use crate::pdt::{DefaultRule, Pdt, PdtDraft};

fn build(atoms: &[&str], facts: &[&str], defaults: &[(&str, &str, &str)], prio: &[(&str, &str)]) -> Pdt {
    let draft = PdtDraft {
        atoms: atoms.iter().map(|s| s.to_string()).collect(),
        facts: facts.iter().map(|f| parse_formula(f).expect("fixture formula")).collect(),
        defaults: defaults
            .iter()
            .map(|(id, a, c)| {
                DefaultRule::new(*id, parse_formula(a).expect("fixture formula"), parse_formula(c).expect("fixture formula"))
            })
            .collect(),
        priority: prio.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
    };
    Pdt::new(&draft).expect("fixture theory is valid")
}

/// Birds fly, penguins are birds, penguins do not fly; the "not fly" default
/// outranks "fly".
pub fn penguin() -> Pdt {
    build(
        &["a", "b"],
        &[],
        &[("d1", "true", "a"), ("d2", "a", "b"), ("d3", "true", "~b")],
        &[("d3", "d2")],
    )
}

/// Penguin defaults under an arbitrary priority, for sweeping all orders.
pub fn penguin_with(prio: &[(&str, &str)]) -> Pdt {
    build(
        &["a", "b"],
        &[],
        &[("d1", "true", "a"), ("d2", "a", "b"), ("d3", "true", "~b")],
        prio,
    )
}

/// Five defaults in a total priority where the highest-ranked one only becomes
/// applicable late, so the application order differs from the priority.
pub fn chain_theory() -> Pdt {
    build(
        &["c1", "c2", "c3", "c4"],
        &[],
        &[
            ("d1", "true", "c1"),
            ("d2", "c1", "c2"),
            ("d3", "true", "c3"),
            ("d4", "c3", "c4"),
            ("d5", "c1", "~(c2 & c4)"),
        ],
        &[("d1", "d4"), ("d4", "d3"), ("d3", "d2"), ("d2", "d5")],
    )
}

/// The higher default is blocked by the facts themselves.
pub fn self_blocking() -> Pdt {
    build(
        &["a", "b"],
        &["a"],
        &[("d1", "a", "~a"), ("d2", "true", "b")],
        &[("d2", "d1")],
    )
}

/// Two defaults with the same consequent; whichever fires makes the other redundant.
pub fn redundant_pair() -> Pdt {
    build(&["a", "b", "c"], &["a", "b"], &[("d1", "a", "c"), ("d2", "b", "c")], &[])
}

/// Two unranked defaults with contradictory consequents.
pub fn opposing_pair() -> Pdt {
    build(&["a"], &[], &[("d1", "true", "a"), ("d2", "true", "~a")], &[])
}

/// Six rules producing four competing arguments A, B, C, D over `b`; the
/// priority given is already a structure-preference order.
pub fn four_arguments() -> Pdt {
    build(
        &["a", "b", "c"],
        &[],
        &[
            ("r1", "true", "~b"),
            ("r2", "true", "a"),
            ("r3", "a", "b"),
            ("r4", "true", "c"),
            ("r5", "c", "~b"),
            ("r6", "true", "b"),
        ],
        &[("r6", "r5"), ("r5", "r4"), ("r5", "r3"), ("r3", "r1"), ("r3", "r2")],
    )
}

pub fn facts_only(facts: &[&str]) -> Pdt {
    let mut atoms: Vec<String> = Vec::new();
    for f in facts {
        for a in parse_formula(f).expect("fixture formula").atoms() {
            if !atoms.iter().any(|x| x == a) {
                atoms.push(a.to_string());
            }
        }
    }
    let atoms: Vec<&str> = atoms.iter().map(String::as_str).collect();
    build(&atoms, facts, &[], &[])
}
