//! Bottom-up evaluation: stratification, semi-naive fixpoint over the
//! finite constant pool, and conjunctive body solving with negation as
//! failure. Comparison built-ins `lt/2` and `gt/2` work on integer
//! constants and ISO-8601 date constants.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::logic::{is_integer_constant, Atom, Clause, Literal, Term};

/// Reserved comparison predicates.
pub fn is_builtin(symbol: &str, arity: usize) -> bool {
    arity == 2 && (symbol == "lt" || symbol == "gt")
}

fn is_iso_date(s: &str) -> bool {
    let b = s.as_bytes();
    b.len() == 10
        && b[4] == b'-'
        && b[7] == b'-'
        && b.iter()
            .enumerate()
            .all(|(i, c)| if i == 4 || i == 7 { *c == b'-' } else { c.is_ascii_digit() })
}

/// Evaluate a ground comparison atom. Incomparable constant pairs are
/// simply not modeled.
pub fn eval_builtin(symbol: &str, left: &str, right: &str) -> bool {
    let ord = if is_integer_constant(left) && is_integer_constant(right) {
        let a: i64 = left.parse().unwrap_or(i64::MAX);
        let b: i64 = right.parse().unwrap_or(i64::MAX);
        a.cmp(&b)
    } else if is_iso_date(left) && is_iso_date(right) {
        // ISO dates compare chronologically as strings
        left.cmp(right)
    } else {
        return false;
    };
    match symbol {
        "lt" => ord == std::cmp::Ordering::Less,
        "gt" => ord == std::cmp::Ordering::Greater,
        _ => false,
    }
}

/// The set of derived ground atoms, indexed by predicate symbol.
#[derive(Debug, Clone, Default)]
pub struct Database {
    facts: BTreeMap<String, BTreeSet<Vec<String>>>,
}

impl Database {
    pub fn new() -> Self {
        Database::default()
    }

    pub fn insert(&mut self, atom: &Atom) -> bool {
        let args: Vec<String> = atom.args.iter().map(|t| t.name().to_string()).collect();
        self.facts.entry(atom.symbol.clone()).or_default().insert(args)
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        match self.facts.get(&atom.symbol) {
            None => false,
            Some(tuples) => {
                let args: Vec<String> =
                    atom.args.iter().map(|t| t.name().to_string()).collect();
                tuples.contains(&args)
            }
        }
    }

    pub fn contains_args(&self, symbol: &str, args: &[&str]) -> bool {
        match self.facts.get(symbol) {
            None => false,
            Some(tuples) => tuples.iter().any(|t| {
                t.len() == args.len() && t.iter().zip(args).all(|(a, b)| a == *b)
            }),
        }
    }

    pub fn tuples(&self, symbol: &str) -> impl Iterator<Item = &Vec<String>> {
        self.facts.get(symbol).into_iter().flatten()
    }

    pub fn is_empty_symbol(&self, symbol: &str) -> bool {
        self.facts.get(symbol).map_or(true, |t| t.is_empty())
    }

    pub fn len(&self) -> usize {
        self.facts.values().map(|t| t.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.facts.iter().flat_map(|(sym, tuples)| {
            tuples.iter().map(move |args| {
                Atom::new(
                    sym.clone(),
                    args.iter().map(|a| Term::Const(a.clone())).collect(),
                )
            })
        })
    }
}

/// Assign a stratum to every predicate so that negative dependencies
/// point strictly downwards. Fails on a cycle through negation.
pub fn stratify(
    clauses: &[Clause],
    predicates: &BTreeSet<String>,
) -> Result<BTreeMap<String, usize>> {
    let mut stratum: BTreeMap<String, usize> =
        predicates.iter().map(|p| (p.clone(), 0usize)).collect();
    let bound = predicates.len().max(1);
    let mut changed = true;
    while changed {
        changed = false;
        for clause in clauses {
            let head = &clause.head.symbol;
            for lit in &clause.body {
                if is_builtin(&lit.atom.symbol, lit.atom.arity()) {
                    continue;
                }
                let dep = stratum.get(&lit.atom.symbol).copied().unwrap_or(0);
                let need = if lit.positive { dep } else { dep + 1 };
                let cur = stratum.get_mut(head).expect("head predicate registered");
                if *cur < need {
                    *cur = need;
                    if *cur > bound {
                        let offenders: Vec<String> = stratum
                            .iter()
                            .filter(|(_, s)| **s > bound)
                            .map(|(p, _)| p.clone())
                            .collect();
                        return Err(Error::Unstratifiable {
                            predicates: if offenders.is_empty() {
                                vec![head.clone()]
                            } else {
                                offenders
                            },
                            line: None,
                        });
                    }
                    changed = true;
                }
            }
        }
    }
    Ok(stratum)
}

/// Group predicates into ordered strata.
pub fn strata_order(stratum: &BTreeMap<String, usize>) -> Vec<Vec<String>> {
    let max = stratum.values().copied().max().unwrap_or(0);
    let mut out = vec![Vec::new(); max + 1];
    for (p, s) in stratum {
        out[*s].push(p.clone());
    }
    out.retain(|s| !s.is_empty());
    out
}

type Bindings = BTreeMap<String, String>;

fn match_against(
    atom: &Atom,
    tuple: &[String],
    bindings: &Bindings,
) -> Option<Bindings> {
    let mut next = bindings.clone();
    for (term, value) in atom.args.iter().zip(tuple) {
        match term {
            Term::Const(c) => {
                if c != value {
                    return None;
                }
            }
            Term::Var(v) => match next.get(v) {
                Some(bound) if bound != value => return None,
                Some(_) => {}
                None => {
                    next.insert(v.clone(), value.clone());
                }
            },
        }
    }
    Some(next)
}

fn check_resolved(literal: &Literal, db: &Database, bindings: &Bindings) -> Result<bool> {
    let mut args: Vec<&str> = Vec::with_capacity(literal.atom.arity());
    for term in &literal.atom.args {
        match term {
            Term::Const(c) => args.push(c),
            Term::Var(v) => match bindings.get(v) {
                Some(val) => args.push(val),
                None => {
                    return Err(Error::UnsafeQuery(format!(
                        "variable {v} in `{literal}` is not bound by a positive literal"
                    )))
                }
            },
        }
    }
    let holds = if is_builtin(&literal.atom.symbol, literal.atom.arity()) {
        eval_builtin(&literal.atom.symbol, args[0], args[1])
    } else {
        db.contains_args(&literal.atom.symbol, &args)
    };
    Ok(if literal.positive { holds } else { !holds })
}

/// Solve a conjunctive body against `db`, starting from `seed` bindings.
/// Positive non-builtin literals are joined in order; negative literals
/// and built-ins are checked once their variables are bound. When
/// `delta_pivot` is `Some((delta, i))` the i-th positive literal is
/// matched against `delta` instead of `db` (semi-naive evaluation).
pub fn solve_body(
    db: &Database,
    body: &[Literal],
    seed: &Bindings,
    delta_pivot: Option<(&Database, usize)>,
) -> Result<Vec<Bindings>> {
    let mut positives: Vec<&Literal> = Vec::new();
    let mut guards: Vec<&Literal> = Vec::new();
    for lit in body {
        if lit.positive && !is_builtin(&lit.atom.symbol, lit.atom.arity()) {
            positives.push(lit);
        } else {
            guards.push(lit);
        }
    }

    let mut results = Vec::new();
    let mut stack = vec![(0usize, seed.clone())];
    'outer: while let Some((idx, bindings)) = stack.pop() {
        if idx == positives.len() {
            for guard in &guards {
                if !check_resolved(guard, db, &bindings)? {
                    continue 'outer;
                }
            }
            results.push(bindings);
            continue;
        }
        let atom = &positives[idx].atom;
        let source = match delta_pivot {
            Some((delta, pivot)) if pivot == idx => delta,
            _ => db,
        };
        for tuple in source.tuples(&atom.symbol) {
            if tuple.len() != atom.arity() {
                continue;
            }
            if let Some(next) = match_against(atom, tuple, &bindings) {
                stack.push((idx + 1, next));
            }
        }
    }
    results.sort();
    results.dedup();
    Ok(results)
}

/// Compute the stratified fixpoint of `clauses`.
pub fn fixpoint(clauses: &[Clause], stratum: &BTreeMap<String, usize>) -> Result<Database> {
    let mut db = Database::new();
    // ground facts first; they carry no dependencies
    for clause in clauses {
        if clause.is_fact() {
            db.insert(&clause.head);
        }
    }
    let max = stratum.values().copied().max().unwrap_or(0);
    for level in 0..=max {
        let rules: Vec<&Clause> = clauses
            .iter()
            .filter(|c| !c.is_fact() && stratum.get(&c.head.symbol) == Some(&level))
            .collect();
        if rules.is_empty() {
            continue;
        }
        // naive first pass
        let mut delta = Database::new();
        for rule in &rules {
            for bindings in solve_body(&db, &rule.body, &BTreeMap::new(), None)? {
                let head = ground_head(&rule.head, &bindings);
                if db.insert(&head) {
                    delta.insert(&head);
                }
            }
        }
        // semi-naive iteration: at least one positive literal matches delta
        while !delta.is_empty() {
            let mut next_delta = Database::new();
            for rule in &rules {
                let positive_count = rule
                    .body
                    .iter()
                    .filter(|l| l.positive && !is_builtin(&l.atom.symbol, l.atom.arity()))
                    .count();
                for pivot in 0..positive_count {
                    for bindings in
                        solve_body(&db, &rule.body, &BTreeMap::new(), Some((&delta, pivot)))?
                    {
                        let head = ground_head(&rule.head, &bindings);
                        if db.insert(&head) {
                            next_delta.insert(&head);
                        }
                    }
                }
            }
            delta = next_delta;
        }
    }
    Ok(db)
}

fn ground_head(head: &Atom, bindings: &Bindings) -> Atom {
    Atom::new(
        head.symbol.clone(),
        head.args
            .iter()
            .map(|t| match t {
                Term::Const(c) => Term::Const(c.clone()),
                Term::Var(v) => Term::Const(
                    bindings
                        .get(v)
                        .expect("safety guarantees head variables are bound")
                        .clone(),
                ),
            })
            .collect(),
    )
}
