use std::fmt;

/// Propositional formula. Equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn negate(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: Formula) -> Self {
        Formula::Iff(Box::new(self), Box::new(rhs))
    }

    /// Every atom name occurring in the formula, in first-occurrence order.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                if !out.contains(&a.as_str()) {
                    out.push(a);
                }
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Evaluate under an assignment given as a lookup from atom name to truth value.
    pub fn eval(&self, value: &dyn Fn(&str) -> bool) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => value(a),
            Formula::Not(f) => !f.eval(value),
            Formula::And(l, r) => l.eval(value) && r.eval(value),
            Formula::Or(l, r) => l.eval(value) || r.eval(value),
            Formula::Implies(l, r) => !l.eval(value) || r.eval(value),
            Formula::Iff(l, r) => l.eval(value) == r.eval(value),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                1 + l.size() + r.size()
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) => 5,
            _ => 6,
        }
    }
}

/// Syntactic contrary: strips one outer negation, otherwise adds one.
pub fn contrary(phi: &Formula) -> Formula {
    match phi {
        Formula::Not(inner) => (**inner).clone(),
        other => other.clone().negate(),
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

// Printing inserts only the parentheses the parser needs, so parse(print(f)) == f.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(inner) => {
                write!(f, "~")?;
                write_child(f, inner, inner.precedence() < p)
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Iff(l, r) => {
                let op = match self {
                    Formula::And(..) => "&",
                    Formula::Or(..) => "|",
                    _ => "<->",
                };
                write_child(f, l, l.precedence() < p)?;
                write!(f, " {op} ")?;
                write_child(f, r, r.precedence() <= p)
            }
            Formula::Implies(l, r) => {
                write_child(f, l, l.precedence() <= p)?;
                write!(f, " -> ")?;
                write_child(f, r, r.precedence() < p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contrary_adds_or_strips_one_negation() {
        let a = Formula::atom("a");
        assert_eq!(contrary(&a), a.clone().negate());
        assert_eq!(contrary(&a.clone().negate()), a);
        assert_eq!(contrary(&a.clone().negate().negate()), a.clone().negate());
    }

    #[test]
    fn display_brackets_only_when_needed() {
        let a = Formula::atom("a");
        let b = Formula::atom("b");
        let c = Formula::atom("c");
        assert_eq!(a.clone().and(b.clone()).negate().to_string(), "~(a & b)");
        assert_eq!(a.clone().implies(b.clone().implies(c.clone())).to_string(), "a -> b -> c");
        assert_eq!(a.clone().implies(b.clone()).implies(c.clone()).to_string(), "(a -> b) -> c");
        assert_eq!(a.clone().or(b.clone()).and(c.clone()).to_string(), "(a | b) & c");
        assert_eq!(a.clone().and(b.clone()).and(c.clone()).to_string(), "a & b & c");
        assert_eq!(a.clone().and(b.and(c)).to_string(), "a & (b & c)");
    }
}
