//! Propositional language over a declared vocabulary and the classical
//! entailment oracle used everywhere else.

mod formula;
mod models;
mod parse;
mod search;

pub use formula::{contrary, Formula};
pub use models::ModelSet;
pub use parse::{parse_formula, SyntaxError};

use indexmap::IndexSet;
use thiserror::Error;

pub const DEFAULT_TRUTH_TABLE_BOUND: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("atom '{0}' is not declared in the vocabulary")]
    UndeclaredAtom(String),
    #[error("invalid atom name '{0}'")]
    InvalidAtomName(String),
    #[error("atom '{0}' declared twice")]
    DuplicateAtom(String),
    #[error("truth tables limited to {bound} atoms, vocabulary has {atoms}")]
    TruthTableTooLarge { atoms: usize, bound: usize },
}

fn valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "true"
        && name != "false"
}

/// Ordered finite set of atom names.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Vocabulary {
    atoms: IndexSet<String>,
}

impl Vocabulary {
    pub fn new<I, S>(names: I) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut atoms = IndexSet::new();
        for name in names {
            let name = name.into();
            if !valid_atom_name(&name) {
                return Err(LogicError::InvalidAtomName(name));
            }
            if !atoms.insert(name.clone()) {
                return Err(LogicError::DuplicateAtom(name));
            }
        }
        Ok(Vocabulary { atoms })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn index_of(&self, atom: &str) -> Option<usize> {
        self.atoms.get_index_of(atom)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.atoms.iter().map(String::as_str)
    }
}

/// Entailment oracle: truth tables up to `bound` atoms, DPLL search above it.
#[derive(Clone, Debug)]
pub struct Oracle {
    vocab: Vocabulary,
    bound: usize,
    atom_models: Option<Vec<ModelSet>>,
}

impl Oracle {
    pub fn new(vocab: Vocabulary) -> Self {
        Self::with_bound(vocab, DEFAULT_TRUTH_TABLE_BOUND)
    }

    pub fn with_bound(vocab: Vocabulary, bound: usize) -> Self {
        let n = vocab.len();
        let atom_models = (n <= bound).then(|| (0..n).map(|i| ModelSet::atom(n, i)).collect());
        Oracle {
            vocab,
            bound,
            atom_models,
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn uses_truth_table(&self) -> bool {
        self.atom_models.is_some()
    }

    pub fn check(&self, f: &Formula) -> Result<(), LogicError> {
        match f.atoms().into_iter().find(|a| self.vocab.index_of(a).is_none()) {
            Some(a) => Err(LogicError::UndeclaredAtom(a.to_string())),
            None => Ok(()),
        }
    }

    fn check_all(&self, gamma: &[Formula]) -> Result<(), LogicError> {
        gamma.iter().try_for_each(|f| self.check(f))
    }

    pub fn models(&self, f: &Formula) -> Result<ModelSet, LogicError> {
        self.check(f)?;
        let table = self.atom_models.as_ref().ok_or(LogicError::TruthTableTooLarge {
            atoms: self.vocab.len(),
            bound: self.bound,
        })?;
        Ok(self.models_unchecked(f, table))
    }

    fn models_unchecked(&self, f: &Formula, table: &[ModelSet]) -> ModelSet {
        let n = self.vocab.len();
        match f {
            Formula::True => ModelSet::all(n),
            Formula::False => ModelSet::none(n),
            Formula::Atom(a) => table[self.vocab.index_of(a).expect("checked")].clone(),
            Formula::Not(g) => self.models_unchecked(g, table).complement(),
            Formula::And(l, r) => self.models_unchecked(l, table).and(&self.models_unchecked(r, table)),
            Formula::Or(l, r) => self.models_unchecked(l, table).or(&self.models_unchecked(r, table)),
            Formula::Implies(l, r) => self
                .models_unchecked(l, table)
                .complement()
                .or(&self.models_unchecked(r, table)),
            Formula::Iff(l, r) => {
                let (l, r) = (self.models_unchecked(l, table), self.models_unchecked(r, table));
                l.and(&r).or(&l.complement().and(&r.complement()))
            }
        }
    }

    /// Models of the conjunction of `gamma`.
    pub fn models_of_set(&self, gamma: &[Formula]) -> Result<ModelSet, LogicError> {
        let mut acc = ModelSet::all(self.vocab.len());
        for f in gamma {
            acc.and_assign(&self.models(f)?);
        }
        Ok(acc)
    }

    pub fn entails(&self, gamma: &[Formula], phi: &Formula) -> Result<bool, LogicError> {
        if self.uses_truth_table() {
            self.entails_by_truth_table(gamma, phi)
        } else {
            self.entails_by_search(gamma, phi)
        }
    }

    pub fn entails_by_truth_table(&self, gamma: &[Formula], phi: &Formula) -> Result<bool, LogicError> {
        let premises = self.models_of_set(gamma)?;
        Ok(premises.is_subset(&self.models(phi)?))
    }

    pub fn entails_by_search(&self, gamma: &[Formula], phi: &Formula) -> Result<bool, LogicError> {
        self.check_all(gamma)?;
        self.check(phi)?;
        let mut cnf = search::Cnf::new();
        for g in gamma {
            cnf.assert(g);
        }
        cnf.assert(&phi.clone().negate());
        Ok(!cnf.satisfiable())
    }

    pub fn is_consistent(&self, gamma: &[Formula]) -> Result<bool, LogicError> {
        Ok(!self.entails(gamma, &Formula::False)?)
    }

    /// Mutual entailment of two finite sets.
    pub fn equivalent_sets(&self, a: &[Formula], b: &[Formula]) -> Result<bool, LogicError> {
        for f in b {
            if !self.entails(a, f)? {
                return Ok(false);
            }
        }
        for f in a {
            if !self.entails(b, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The members of `targets` entailed by `gamma`.
    pub fn restricted_closure(&self, gamma: &[Formula], targets: &[Formula]) -> Result<Vec<Formula>, LogicError> {
        let mut out = Vec::new();
        for t in targets {
            if self.entails(gamma, t)? {
                out.push(t.clone());
            }
        }
        Ok(out)
    }
}

/// A fixed list of formulas with precomputed denotations, for hot loops that
/// ask many entailment questions over subsets of the same formulas.
pub struct FormulaPool<'o> {
    oracle: &'o Oracle,
    formulas: Vec<Formula>,
    models: Option<Vec<ModelSet>>,
}

impl<'o> FormulaPool<'o> {
    pub fn new(oracle: &'o Oracle, formulas: Vec<Formula>) -> Result<Self, LogicError> {
        for f in &formulas {
            oracle.check(f)?;
        }
        let models = if oracle.uses_truth_table() {
            Some(formulas.iter().map(|f| oracle.models(f)).collect::<Result<_, _>>()?)
        } else {
            None
        };
        Ok(FormulaPool {
            oracle,
            formulas,
            models,
        })
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.formulas[i]
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    fn gather(&self, premises: &[usize]) -> Vec<Formula> {
        premises.iter().map(|&i| self.formulas[i].clone()).collect()
    }

    pub fn entails(&self, premises: &[usize], goal: usize) -> bool {
        match &self.models {
            Some(m) => {
                let mut acc = ModelSet::all(self.oracle.vocabulary().len());
                for &i in premises {
                    acc.and_assign(&m[i]);
                }
                acc.is_subset(&m[goal])
            }
            None => self
                .oracle
                .entails(&self.gather(premises), &self.formulas[goal])
                .expect("pool formulas are checked"),
        }
    }

    pub fn consistent(&self, premises: &[usize]) -> bool {
        match &self.models {
            Some(m) => {
                let mut acc = ModelSet::all(self.oracle.vocabulary().len());
                for &i in premises {
                    acc.and_assign(&m[i]);
                }
                !acc.is_empty()
            }
            None => self
                .oracle
                .is_consistent(&self.gather(premises))
                .expect("pool formulas are checked"),
        }
    }
}
