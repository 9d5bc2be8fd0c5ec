//! Rewriting filters: valid literal sets, predicate renaming, minimally
//! changed clauses, and lifting of in-clause constants to fresh
//! variables.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{Clause, Literal, Substitution, Term};

/// Whether a filter may rewrite one occurrence of its predicate or must
/// rewrite all of them at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterMode {
    Single,
    All,
}

/// A pair of semantically opposing predicates `from -> to`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RewritingFilter {
    pub from: String,
    pub to: String,
    pub mode: FilterMode,
}

impl RewritingFilter {
    /// Body positions whose literals the filter may rewrite, as one set
    /// per admissible rewrite. `single` yields one singleton set per
    /// occurrence of `from`; `all` yields a single set of every
    /// occurrence, or nothing when there is none.
    pub fn occurrence_sets(&self, body: &[Literal]) -> Vec<Vec<usize>> {
        let occurrences: Vec<usize> = body
            .iter()
            .enumerate()
            .filter(|(_, lit)| lit.atom.symbol == self.from)
            .map(|(i, _)| i)
            .collect();
        if occurrences.is_empty() {
            return Vec::new();
        }
        match self.mode {
            FilterMode::Single => occurrences.into_iter().map(|i| vec![i]).collect(),
            FilterMode::All => vec![occurrences],
        }
    }

    /// The valid literal sets `V_{from->to}(body)`.
    pub fn valid_literal_sets(&self, body: &[Literal]) -> Vec<Vec<Literal>> {
        self.occurrence_sets(body)
            .into_iter()
            .map(|set| set.into_iter().map(|i| body[i].clone()).collect())
            .collect()
    }
}

impl std::fmt::Display for RewritingFilter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

/// Replace predicate symbol `p` by `q` in every literal of `literals`,
/// preserving sign and arguments.
pub fn rename(literals: &[Literal], p: &str, q: &str) -> Result<Vec<Literal>> {
    literals
        .iter()
        .map(|lit| {
            if lit.atom.symbol != p {
                return Err(Error::Config(format!(
                    "cannot rename `{lit}`: symbol is not `{p}`"
                )));
            }
            let mut renamed = lit.clone();
            renamed.atom.symbol = q.to_string();
            Ok(renamed)
        })
        .collect()
}

/// Build the minimally changed clause: the head is unchanged and the
/// literals at `occurrences` are renamed `from -> to` in place.
pub fn minimally_changed_clause(
    clause: &Clause,
    occurrences: &[usize],
    filter: &RewritingFilter,
) -> Clause {
    let mut body = clause.body.clone();
    for &i in occurrences {
        debug_assert_eq!(body[i].atom.symbol, filter.from);
        body[i].atom.symbol = filter.to.clone();
    }
    Clause {
        head: clause.head.clone(),
        body,
    }
}

/// A clause whose body constants were replaced by fresh variables,
/// together with the substitution restoring the original clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedClause {
    pub clause: Clause,
    pub extension: Substitution,
}

/// Replace body constant occurrences by fresh variables (`Lift1`,
/// `Lift2`, ... in body order) and extend `theta` accordingly. Lifting
/// is occurrence-wise: repeated constants get distinct variables. Head
/// constants are never lifted. When `predicates` is given, only
/// occurrences inside literals of those predicates are lifted.
pub fn lift_constants(
    clause: &Clause,
    theta: &Substitution,
    predicates: Option<&BTreeSet<String>>,
) -> (Clause, Substitution) {
    let taken: BTreeSet<String> = clause
        .vars()
        .into_iter()
        .chain(theta.domain().cloned())
        .collect();
    let mut extended = theta.clone();
    let mut counter = 0usize;
    let mut fresh = || loop {
        counter += 1;
        let name = format!("Lift{counter}");
        if !taken.contains(&name) {
            return name;
        }
    };

    let mut body = Vec::with_capacity(clause.body.len());
    for lit in &clause.body {
        let liftable = predicates.map_or(true, |p| p.contains(&lit.atom.symbol));
        if !liftable {
            body.push(lit.clone());
            continue;
        }
        let mut lifted = lit.clone();
        for term in lifted.atom.args.iter_mut() {
            if let Term::Const(c) = term {
                let name = fresh();
                extended.bind(name.clone(), Term::Const(c.clone()));
                *term = Term::Var(name);
            }
        }
        body.push(lifted);
    }
    (
        Clause {
            head: clause.head.clone(),
            body,
        },
        extended,
    )
}
