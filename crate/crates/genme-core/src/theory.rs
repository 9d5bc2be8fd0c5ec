//! Validated clausal theories and the query operations over them.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::eval::{self, Database};
use crate::logic::{Atom, Clause, Literal, Substitution, Term};

/// An immutable clausal theory together with its derived fixpoint.
/// Construction validates arities, clause safety and stratifiability.
#[derive(Debug, Clone)]
pub struct Theory {
    clauses: Vec<Clause>,
    constant_pool: BTreeSet<String>,
    predicates: BTreeMap<String, usize>,
    strata: Vec<Vec<String>>,
    db: Database,
}

impl Theory {
    pub fn new(clauses: Vec<Clause>) -> Result<Theory> {
        Theory::build(clauses.into_iter().map(|c| (c, None)).collect())
    }

    /// Build a theory from clauses annotated with their source lines.
    /// Duplicate clauses are dropped, keeping the first occurrence.
    pub fn build(annotated: Vec<(Clause, Option<usize>)>) -> Result<Theory> {
        let mut clauses: Vec<Clause> = Vec::new();
        let mut lines: Vec<Option<usize>> = Vec::new();
        let mut seen: BTreeSet<Clause> = BTreeSet::new();
        for (clause, line) in annotated {
            if seen.insert(clause.clone()) {
                clauses.push(clause);
                lines.push(line);
            }
        }

        let mut predicates: BTreeMap<String, usize> = BTreeMap::new();
        let mut check_arity = |atom: &Atom, line: Option<usize>| -> Result<()> {
            match predicates.get(&atom.symbol) {
                Some(&arity) if arity != atom.arity() => Err(Error::ArityConflict {
                    symbol: atom.symbol.clone(),
                    expected: arity,
                    found: atom.arity(),
                    line,
                }),
                Some(_) => Ok(()),
                None => {
                    predicates.insert(atom.symbol.clone(), atom.arity());
                    Ok(())
                }
            }
        };
        for (clause, line) in clauses.iter().zip(&lines) {
            if eval::is_builtin(&clause.head.symbol, clause.head.arity()) {
                return Err(Error::ReservedPredicate {
                    symbol: clause.head.symbol.clone(),
                    line: *line,
                });
            }
            check_arity(&clause.head, *line)?;
            for lit in &clause.body {
                if !eval::is_builtin(&lit.atom.symbol, lit.atom.arity()) {
                    check_arity(&lit.atom, *line)?;
                }
            }
        }

        for (clause, line) in clauses.iter().zip(&lines) {
            check_safety(clause, *line)?;
        }

        let symbols: BTreeSet<String> = predicates.keys().cloned().collect();
        let stratum = eval::stratify(&clauses, &symbols).map_err(|e| match e {
            Error::Unstratifiable { predicates: preds, .. } => {
                let line = clauses
                    .iter()
                    .zip(&lines)
                    .find(|(c, _)| preds.contains(&c.head.symbol))
                    .and_then(|(_, l)| *l);
                Error::Unstratifiable {
                    predicates: preds,
                    line,
                }
            }
            other => other,
        })?;
        let strata = eval::strata_order(&stratum);
        let db = eval::fixpoint(&clauses, &stratum)?;

        let mut constant_pool = BTreeSet::new();
        for clause in &clauses {
            collect_constants(&clause.head, &mut constant_pool);
            for lit in &clause.body {
                collect_constants(&lit.atom, &mut constant_pool);
            }
        }

        Ok(Theory {
            clauses,
            constant_pool,
            predicates,
            strata,
            db,
        })
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// All constants syntactically present in the theory, in
    /// lexicographic order.
    pub fn constants_of(&self) -> Vec<String> {
        self.constant_pool.iter().cloned().collect()
    }

    pub fn constant_pool(&self) -> &BTreeSet<String> {
        &self.constant_pool
    }

    pub fn predicates(&self) -> &BTreeMap<String, usize> {
        &self.predicates
    }

    pub fn arity_of(&self, symbol: &str) -> Option<usize> {
        self.predicates.get(symbol).copied()
    }

    /// Predicate strata; negative dependencies of each stratum point
    /// only to lower strata.
    pub fn strata(&self) -> &[Vec<String>] {
        &self.strata
    }

    pub fn database(&self) -> &Database {
        &self.db
    }

    /// Truth of a ground literal under the stratified semantics.
    pub fn models_literal(&self, literal: &Literal) -> Result<bool> {
        if !literal.is_ground() {
            return Err(Error::NonGround(literal.to_string()));
        }
        let atom = &literal.atom;
        let holds = if eval::is_builtin(&atom.symbol, atom.arity()) {
            let args: Vec<&str> = atom.args.iter().map(|t| t.name()).collect();
            eval::eval_builtin(&atom.symbol, args[0], args[1])
        } else {
            self.db.contains(atom)
        };
        Ok(if literal.positive { holds } else { !holds })
    }

    pub fn models_atom(&self, atom: &Atom) -> Result<bool> {
        self.models_literal(&Literal::pos(atom.clone()))
    }

    /// All ground substitutions over the variables of `literals` under
    /// which every element is modeled. The empty set of literals is
    /// modeled by the empty substitution.
    pub fn models_literal_set(&self, literals: &[Literal]) -> Result<Vec<Substitution>> {
        let solutions = eval::solve_body(&self.db, literals, &BTreeMap::new(), None)?;
        let mut out: Vec<Substitution> = solutions
            .into_iter()
            .map(|b| {
                b.into_iter()
                    .map(|(v, c)| (v, Term::Const(c)))
                    .collect::<Substitution>()
            })
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Like [`Theory::models_literal_set`] but with some variables
    /// pre-bound.
    pub(crate) fn solve_seeded(
        &self,
        literals: &[Literal],
        seed: &Substitution,
    ) -> Result<Vec<Substitution>> {
        let seed_map: BTreeMap<String, String> = seed
            .iter()
            .map(|(v, t)| (v.clone(), t.name().to_string()))
            .collect();
        let solutions = eval::solve_body(&self.db, literals, &seed_map, None)?;
        let mut out: Vec<Substitution> = solutions
            .into_iter()
            .map(|b| {
                b.into_iter()
                    .map(|(v, c)| (v, Term::Const(c)))
                    .collect::<Substitution>()
            })
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }
}

fn collect_constants(atom: &Atom, pool: &mut BTreeSet<String>) {
    for term in &atom.args {
        if let Term::Const(c) = term {
            pool.insert(c.clone());
        }
    }
}

/// Safety: every variable in the head or in a negative/built-in body
/// literal must occur in a positive non-builtin body literal; facts
/// must have a ground head.
fn check_safety(clause: &Clause, line: Option<usize>) -> Result<()> {
    let mut positive_vars: BTreeSet<String> = BTreeSet::new();
    for lit in &clause.body {
        if lit.positive && !eval::is_builtin(&lit.atom.symbol, lit.atom.arity()) {
            lit.atom.collect_vars(&mut positive_vars);
        }
    }
    if clause.is_fact() {
        if !clause.head.is_ground() {
            return Err(Error::UnsafeClause {
                message: format!("fact `{}` has a non-ground head", clause.head),
                line,
            });
        }
        return Ok(());
    }
    let mut head_vars = BTreeSet::new();
    clause.head.collect_vars(&mut head_vars);
    for v in &head_vars {
        if !positive_vars.contains(v) {
            return Err(Error::UnsafeClause {
                message: format!(
                    "variable {v} in the head of `{clause}` does not occur in a positive body literal"
                ),
                line,
            });
        }
    }
    for lit in &clause.body {
        if lit.positive && !eval::is_builtin(&lit.atom.symbol, lit.atom.arity()) {
            continue;
        }
        let mut vars = BTreeSet::new();
        lit.atom.collect_vars(&mut vars);
        for v in &vars {
            if !positive_vars.contains(v) {
                return Err(Error::UnsafeClause {
                    message: format!(
                        "variable {v} in `{lit}` does not occur in a positive body literal"
                    ),
                    line,
                });
            }
        }
    }
    Ok(())
}
