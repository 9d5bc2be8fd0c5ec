//! Function-free clausal representation: terms, literals, clauses and
//! substitutions, plus one-way matching of atoms against ground atoms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// A term is either a variable (upper-case initial) or a constant
/// (lower-case initial, quoted string, or integer). There are no
/// compound terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Term::Const(_))
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }

    pub fn apply(&self, theta: &Substitution) -> Term {
        match self {
            Term::Var(v) => theta.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Const(_) => self.clone(),
        }
    }
}

/// True for identifiers that can be written without quotes.
pub fn is_bare_constant(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn is_integer_constant(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit())
}

fn fmt_const(name: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if is_bare_constant(name) || is_integer_constant(name) {
        write!(f, "{name}")
    } else {
        write!(f, "'{name}'")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => fmt_const(c, f),
        }
    }
}

/// A predicate symbol applied to a tuple of terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub symbol: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(symbol: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            symbol: symbol.into(),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_const)
    }

    pub fn apply(&self, theta: &Substitution) -> Atom {
        Atom {
            symbol: self.symbol.clone(),
            args: self.args.iter().map(|t| t.apply(theta)).collect(),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        for t in &self.args {
            if let Term::Var(v) = t {
                out.insert(v.clone());
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, arg) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{arg}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// A possibly negated atom. Negation is negation as failure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            positive: true,
            atom,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            positive: false,
            atom,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.atom.is_ground()
    }

    pub fn apply(&self, theta: &Substitution) -> Literal {
        Literal {
            positive: self.positive,
            atom: self.atom.apply(theta),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            write!(f, "not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// An implication `head :- body`. A clause with empty body is a fact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Literal>,
}

impl Clause {
    pub fn fact(head: Atom) -> Self {
        Clause {
            head,
            body: Vec::new(),
        }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    pub fn is_ground(&self) -> bool {
        self.head.is_ground() && self.body.iter().all(Literal::is_ground)
    }

    pub fn apply(&self, theta: &Substitution) -> Clause {
        Clause {
            head: self.head.apply(theta),
            body: self.body.iter().map(|l| l.apply(theta)).collect(),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.head.collect_vars(&mut out);
        for lit in &self.body {
            lit.atom.collect_vars(&mut out);
        }
        out
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            write!(f, " :- ")?;
            for (i, lit) in self.body.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{lit}")?;
            }
        }
        write!(f, ".")
    }
}

/// A finite map from variables to terms, applied simultaneously.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    bindings: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn bind(&mut self, var: impl Into<String>, term: Term) {
        self.bindings.insert(var.into(), term);
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn contains(&self, var: &str) -> bool {
        self.bindings.contains_key(var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.bindings.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &String> {
        self.bindings.keys()
    }

    /// Number of variables whose bindings differ, `|theta \ theta'|`.
    /// Both substitutions must share the same domain.
    pub fn distance(&self, other: &Substitution) -> Result<usize> {
        if !self.bindings.keys().eq(other.bindings.keys()) {
            return Err(Error::DomainMismatch(format!(
                "{{{}}} vs {{{}}}",
                self.bindings.keys().cloned().collect::<Vec<_>>().join(","),
                other.bindings.keys().cloned().collect::<Vec<_>>().join(","),
            )));
        }
        Ok(self
            .bindings
            .iter()
            .filter(|(v, t)| other.bindings.get(*v) != Some(t))
            .count())
    }
}

impl FromIterator<(String, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Self {
        Substitution {
            bindings: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        write!(f, "}}")
    }
}

/// One-way matching: the unique minimal substitution mapping `pattern`
/// onto the ground atom `target`, if any.
pub fn match_atom(pattern: &Atom, target: &Atom) -> Option<Substitution> {
    if pattern.symbol != target.symbol || pattern.arity() != target.arity() {
        return None;
    }
    let mut theta = Substitution::new();
    for (p, t) in pattern.args.iter().zip(&target.args) {
        match p {
            Term::Const(c) => {
                if t.name() != c || t.is_var() {
                    return None;
                }
            }
            Term::Var(v) => match theta.get(v) {
                Some(bound) if bound != t => return None,
                Some(_) => {}
                None => theta.bind(v.clone(), t.clone()),
            },
        }
    }
    Some(theta)
}
