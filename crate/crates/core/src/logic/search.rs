//! Backtracking satisfiability over a Tseitin encoding.

use super::Formula;
use std::collections::HashMap;

pub(crate) struct Cnf {
    vars: usize,
    clauses: Vec<Vec<i32>>,
    atom_vars: HashMap<String, i32>,
}

impl Cnf {
    pub(crate) fn new() -> Self {
        Cnf {
            vars: 0,
            clauses: Vec::new(),
            atom_vars: HashMap::new(),
        }
    }

    fn fresh(&mut self) -> i32 {
        self.vars += 1;
        self.vars as i32
    }

    /// Assert `f` as a top-level constraint.
    pub(crate) fn assert(&mut self, f: &Formula) {
        let lit = self.encode(f);
        self.clauses.push(vec![lit]);
    }

    fn encode(&mut self, f: &Formula) -> i32 {
        match f {
            Formula::True | Formula::False => {
                let v = self.fresh();
                self.clauses.push(vec![if matches!(f, Formula::True) { v } else { -v }]);
                v
            }
            Formula::Atom(a) => {
                if let Some(v) = self.atom_vars.get(a) {
                    return *v;
                }
                let v = self.fresh();
                self.atom_vars.insert(a.clone(), v);
                v
            }
            Formula::Not(g) => -self.encode(g),
            Formula::And(l, r) => {
                let (l, r) = (self.encode(l), self.encode(r));
                let v = self.fresh();
                self.clauses.push(vec![-v, l]);
                self.clauses.push(vec![-v, r]);
                self.clauses.push(vec![v, -l, -r]);
                v
            }
            Formula::Or(l, r) => {
                let (l, r) = (self.encode(l), self.encode(r));
                self.or_gate(l, r)
            }
            Formula::Implies(l, r) => {
                let (l, r) = (self.encode(l), self.encode(r));
                self.or_gate(-l, r)
            }
            Formula::Iff(l, r) => {
                let (l, r) = (self.encode(l), self.encode(r));
                let v = self.fresh();
                self.clauses.push(vec![-v, -l, r]);
                self.clauses.push(vec![-v, l, -r]);
                self.clauses.push(vec![v, l, r]);
                self.clauses.push(vec![v, -l, -r]);
                v
            }
        }
    }

    fn or_gate(&mut self, l: i32, r: i32) -> i32 {
        let v = self.fresh();
        self.clauses.push(vec![-v, l, r]);
        self.clauses.push(vec![v, -l]);
        self.clauses.push(vec![v, -r]);
        v
    }

    pub(crate) fn satisfiable(&self) -> bool {
        let mut assign = vec![0i8; self.vars + 1];
        let mut trail = Vec::new();
        self.dpll(&mut assign, &mut trail)
    }

    fn value(assign: &[i8], lit: i32) -> i8 {
        let v = assign[lit.unsigned_abs() as usize];
        if lit > 0 {
            v
        } else {
            -v
        }
    }

    fn set(assign: &mut [i8], trail: &mut Vec<usize>, lit: i32) {
        let idx = lit.unsigned_abs() as usize;
        assign[idx] = if lit > 0 { 1 } else { -1 };
        trail.push(idx);
    }

    /// Returns false on conflict.
    fn propagate(&self, assign: &mut [i8], trail: &mut Vec<usize>) -> bool {
        loop {
            let mut changed = false;
            for clause in &self.clauses {
                let mut open = None;
                let mut open_count = 0;
                let mut satisfied = false;
                for &lit in clause {
                    match Self::value(assign, lit) {
                        1 => {
                            satisfied = true;
                            break;
                        }
                        0 => {
                            open_count += 1;
                            open = Some(lit);
                        }
                        _ => {}
                    }
                }
                if satisfied {
                    continue;
                }
                match open_count {
                    0 => return false,
                    1 => {
                        Self::set(assign, trail, open.unwrap());
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn dpll(&self, assign: &mut Vec<i8>, trail: &mut Vec<usize>) -> bool {
        let mark = trail.len();
        if !self.propagate(assign, trail) {
            Self::undo(assign, trail, mark);
            return false;
        }
        let Some(var) = (1..assign.len()).find(|&v| assign[v] == 0) else {
            return true;
        };
        for lit in [var as i32, -(var as i32)] {
            let inner = trail.len();
            Self::set(assign, trail, lit);
            if self.dpll(assign, trail) {
                return true;
            }
            Self::undo(assign, trail, inner);
        }
        Self::undo(assign, trail, mark);
        false
    }

    fn undo(assign: &mut [i8], trail: &mut Vec<usize>, mark: usize) {
        while trail.len() > mark {
            let idx = trail.pop().unwrap();
            assign[idx] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn sat(src: &[&str]) -> bool {
        let mut cnf = Cnf::new();
        for s in src {
            cnf.assert(&parse_formula(s).unwrap());
        }
        cnf.satisfiable()
    }

    #[test]
    fn small_cases() {
        assert!(sat(&[]));
        assert!(sat(&["a"]));
        assert!(!sat(&["a", "~a"]));
        assert!(!sat(&["false"]));
        assert!(!sat(&["a", "a -> b", "~b"]));
        assert!(sat(&["a <-> ~b", "a | b"]));
        assert!(!sat(&["a <-> ~a"]));
    }
}
