//! Seeded generator of small valid theories.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::logic::Formula;
use crate::pdt::{DefaultRule, Pdt, PdtDraft};

#[derive(Clone, Debug)]
pub struct GeneratorConfig {
    pub defaults: usize,
    pub atoms: usize,
    pub max_facts: usize,
    /// Probability of each forward pair of a random permutation entering the priority.
    pub priority_density: f64,
    /// Emit a total priority (a random chain) instead.
    pub total: bool,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            defaults: 4,
            atoms: 4,
            max_facts: 2,
            priority_density: 0.3,
            total: false,
        }
    }
}

fn literal(rng: &mut ChaCha8Rng, atom: usize) -> Formula {
    let a = Formula::atom(format!("p{}", atom + 1));
    if rng.gen_bool(0.5) {
        a.negate()
    } else {
        a
    }
}

fn two_atoms(rng: &mut ChaCha8Rng, atoms: usize) -> (usize, usize) {
    let x = rng.gen_range(0..atoms);
    let mut y = rng.gen_range(0..atoms - 1);
    if y >= x {
        y += 1;
    }
    (x, y)
}

fn antecedent(rng: &mut ChaCha8Rng, atoms: usize) -> Formula {
    let roll = rng.gen_range(0..100);
    if roll < 35 {
        Formula::True
    } else if roll < 80 || atoms < 2 {
        let a = rng.gen_range(0..atoms);
        literal(rng, a)
    } else {
        let (x, y) = two_atoms(rng, atoms);
        literal(rng, x).and(literal(rng, y))
    }
}

fn consequent(rng: &mut ChaCha8Rng, atoms: usize) -> Formula {
    let roll = rng.gen_range(0..100);
    if roll < 60 || atoms < 2 {
        let a = rng.gen_range(0..atoms);
        return literal(rng, a);
    }
    let (x, y) = two_atoms(rng, atoms);
    let (l, r) = (literal(rng, x), literal(rng, y));
    match roll {
        60..=74 => l.and(r),
        75..=89 => l.or(r),
        _ => l.implies(r),
    }
}

pub fn random_draft(cfg: &GeneratorConfig, seed: u64) -> PdtDraft {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = cfg.atoms.max(1);
    let atom_names: Vec<String> = (1..=atoms).map(|i| format!("p{i}")).collect();

    let mut fact_atoms: Vec<usize> = (0..atoms).collect();
    fact_atoms.shuffle(&mut rng);
    let n_facts = rng.gen_range(0..=cfg.max_facts.min(atoms));
    let facts = fact_atoms[..n_facts].iter().map(|&a| literal(&mut rng, a)).collect();

    let defaults: Vec<DefaultRule> = (1..=cfg.defaults)
        .map(|i| {
            let ante = antecedent(&mut rng, atoms);
            let cons = consequent(&mut rng, atoms);
            DefaultRule::new(format!("d{i}"), ante, cons)
        })
        .collect();

    let mut perm: Vec<usize> = (0..cfg.defaults).collect();
    perm.shuffle(&mut rng);
    let mut priority = Vec::new();
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            let keep = if cfg.total {
                b == a + 1
            } else {
                rng.gen_bool(cfg.priority_density)
            };
            if keep {
                priority.push((defaults[perm[a]].id.clone(), defaults[perm[b]].id.clone()));
            }
        }
    }

    PdtDraft {
        atoms: atom_names,
        facts,
        defaults,
        priority,
    }
}

pub fn random_pdt(cfg: &GeneratorConfig, seed: u64) -> Pdt {
    Pdt::new(&random_draft(cfg, seed)).expect("generated theories are valid by construction")
}
