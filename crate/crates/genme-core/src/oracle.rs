//! Exhaustive reference search used by the test suites. For a given
//! minimally changed clause, substitution and candidate it enumerates
//! every altered substitution in increasing distance, without any of
//! the pruning the production search applies, and reports both the
//! minimal-degree result and the number of substitutions enumerated.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::logic::{match_atom, Atom, Clause, Substitution, Term};
use crate::search::{body_modeled, SearchOpts};
use crate::theory::Theory;

#[derive(Debug, Clone)]
pub struct OracleOutcome {
    /// minimal degree and all witnessing substitutions at that degree
    pub minimal: Option<(usize, Vec<Substitution>)>,
    /// total number of altered substitutions enumerated over all degrees
    pub enumerated: u64,
}

/// Exhaustively enumerate all `theta'` with `|theta \ theta'| = d` for
/// `d = 1..=|theta|` (capped by `opts.max_degree`), where every changed
/// variable takes any pool constant other than its original binding.
/// Guard: `|constants| * |theta|` must not exceed 10^7.
pub fn brute_force_oracle(
    theory: &Theory,
    c_prime: &Clause,
    theta: &Substitution,
    candidate: &Atom,
    opts: &SearchOpts,
) -> Result<OracleOutcome> {
    let pool = theory.constants_of();
    let guard = (pool.len() as u64) * (theta.len() as u64);
    if guard > 10_000_000 {
        return Err(Error::OracleGuard(format!(
            "{} constants x {} bindings",
            pool.len(),
            theta.len()
        )));
    }

    let forced = match_atom(&c_prime.head, candidate);
    let vars: Vec<&String> = theta.domain().collect();
    let mutable: Vec<&String> = vars
        .iter()
        .copied()
        .filter(|v| {
            let orig = theta.get(v).expect("domain var");
            !opts.immutable_constants.contains(orig.name())
        })
        .collect();
    let head_vars: std::collections::BTreeSet<&str> = {
        let mut set = std::collections::BTreeSet::new();
        let mut names = std::collections::BTreeSet::new();
        c_prime.head.collect_vars(&mut names);
        for n in &names {
            set.insert(n.as_str());
        }
        set.into_iter()
            .filter_map(|n| vars.iter().find(|v| v.as_str() == n).map(|v| v.as_str()))
            .collect()
    };

    let alternatives: BTreeMap<&str, Vec<Term>> = mutable
        .iter()
        .map(|v| {
            let orig = theta.get(v).expect("domain var");
            let alts: Vec<Term> = pool
                .iter()
                .filter(|c| c.as_str() != orig.name())
                .map(|c| Term::Const(c.clone()))
                .collect();
            (v.as_str(), alts)
        })
        .collect();

    // unchanged head variables must already agree with the candidate;
    // if the head pattern cannot match at all, nothing ever succeeds
    // and whole blocks are counted arithmetically
    let head_matches = |theta_prime: &Substitution| -> bool {
        c_prime.head.apply(theta_prime) == *candidate
    };

    let cap = opts.max_degree.unwrap_or(usize::MAX).min(theta.len());
    let mut enumerated: u64 = 0;
    let mut hits_by_degree: BTreeMap<usize, Vec<Substitution>> = BTreeMap::new();

    for degree in 1..=cap {
        if degree > mutable.len() {
            break;
        }
        for subset in mutable.iter().combinations(degree) {
            let (changed_head, changed_body): (Vec<&&String>, Vec<&&String>) =
                subset.iter().partition(|v| head_vars.contains(v.as_str()));
            let body_block: u64 = changed_body
                .iter()
                .map(|v| alternatives[v.as_str()].len() as u64)
                .product();

            // unchanged head vars must agree with the candidate for any
            // assignment of this subset to match the head
            let base_ok = forced.is_some()
                && vars.iter().all(|v| {
                    if !head_vars.contains(v.as_str()) {
                        return true;
                    }
                    if subset.iter().any(|s| s.as_str() == v.as_str()) {
                        return true;
                    }
                    match forced.as_ref().unwrap().get(v) {
                        Some(value) => value == theta.get(v).expect("domain var"),
                        None => true,
                    }
                });

            let head_lists: Vec<&Vec<Term>> = changed_head
                .iter()
                .map(|v| &alternatives[v.as_str()])
                .collect();
            let head_assignments: Box<dyn Iterator<Item = Vec<&Term>>> =
                if changed_head.is_empty() {
                    Box::new(std::iter::once(Vec::new()))
                } else {
                    Box::new(head_lists.into_iter().multi_cartesian_product())
                };

            for head_assignment in head_assignments {
                let head_ok = base_ok
                    && changed_head.iter().zip(&head_assignment).all(|(v, value)| {
                        match forced.as_ref().unwrap().get(v.as_str()) {
                            Some(f) => f == *value,
                            None => true,
                        }
                    });
                if !head_ok {
                    // every body assignment in this block fails the
                    // head-equality test; count it without iterating
                    enumerated += body_block;
                    continue;
                }
                let body_lists: Vec<&Vec<Term>> = changed_body
                    .iter()
                    .map(|v| &alternatives[v.as_str()])
                    .collect();
                let body_assignments: Box<dyn Iterator<Item = Vec<&Term>>> =
                    if changed_body.is_empty() {
                        Box::new(std::iter::once(Vec::new()))
                    } else {
                        Box::new(body_lists.into_iter().multi_cartesian_product())
                    };
                for body_assignment in body_assignments {
                    enumerated += 1;
                    let mut theta_prime = Substitution::new();
                    for v in &vars {
                        let value = if let Some(i) =
                            changed_head.iter().position(|s| s.as_str() == v.as_str())
                        {
                            head_assignment[i].clone()
                        } else if let Some(i) =
                            changed_body.iter().position(|s| s.as_str() == v.as_str())
                        {
                            body_assignment[i].clone()
                        } else {
                            theta.get(v).expect("domain var").clone()
                        };
                        theta_prime.bind(v.as_str(), value);
                    }
                    if head_matches(&theta_prime)
                        && body_modeled(theory, c_prime, &theta_prime)?
                    {
                        hits_by_degree.entry(degree).or_default().push(theta_prime);
                    }
                }
            }
        }
    }

    let minimal = hits_by_degree.into_iter().next().map(|(d, mut thetas)| {
        thetas.sort();
        thetas.dedup();
        (d, thetas)
    });
    Ok(OracleOutcome {
        minimal,
        enumerated,
    })
}
