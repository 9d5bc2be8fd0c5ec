//! Local (trace) explanations for positive examples and text rendering
//! of explanations.

use crate::config::TemplateTable;
use crate::error::{Error, Result};
use crate::logic::{match_atom, Atom, Clause, Literal, Substitution};
use crate::theory::Theory;

/// A ground instance `C theta` of a theory clause whose head is the
/// positive example and whose body is modeled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalExplanation {
    pub clause: Clause,
    pub theta: Substitution,
    pub ground_clause: Clause,
}

/// All local explanations for a positive example, over every matching
/// clause and every substitution, in canonical order. Errors when the
/// example is not modeled.
pub fn local_explanations(theory: &Theory, example: &Atom) -> Result<Vec<LocalExplanation>> {
    if !example.is_ground() {
        return Err(Error::NonGround(example.to_string()));
    }
    let mut out = Vec::new();
    for clause in theory.clauses() {
        let Some(seed) = match_atom(&clause.head, example) else {
            continue;
        };
        let mut found = Vec::new();
        for solution in theory.solve_seeded(&clause.body, &seed)? {
            let theta: Substitution = clause
                .vars()
                .into_iter()
                .filter_map(|v| solution.get(&v).map(|t| (v.clone(), t.clone())))
                .collect();
            let ground_clause = clause.apply(&theta);
            debug_assert!(ground_clause.is_ground());
            found.push(LocalExplanation {
                clause: clause.clone(),
                theta,
                ground_clause,
            });
        }
        found.sort_by(|a, b| a.theta.cmp(&b.theta));
        found.dedup();
        out.extend(found);
    }
    if out.is_empty() {
        return Err(Error::NotPositive(example.to_string()));
    }
    Ok(out)
}

fn render_literal(lit: &Literal, templates: &TemplateTable) -> Result<String> {
    let args: Vec<String> = lit.atom.args.iter().map(|t| t.name().to_string()).collect();
    let key = if lit.positive {
        lit.atom.symbol.clone()
    } else {
        format!("{}.neg", lit.atom.symbol)
    };
    if let Some(s) = templates.instantiate(&key, &args)? {
        return Ok(s);
    }
    // fall back to the positive pattern, negating generically
    match templates.instantiate(&lit.atom.symbol, &args)? {
        Some(s) if lit.positive => Ok(s),
        Some(s) => Ok(format!("it is NOT the case that {s}")),
        None => Ok(lit.to_string()),
    }
}

/// Render a ground clause as one sentence: the head (prefixed as a miss
/// when `is_miss`), then the body literals joined with "and". With no
/// templates the clause is rendered in its textual syntax.
pub fn render_explanation(
    ground_clause: &Clause,
    is_miss: bool,
    templates: Option<&TemplateTable>,
) -> Result<String> {
    let Some(table) = templates else {
        return Ok(ground_clause.to_string());
    };
    let head_lit = Literal {
        positive: !is_miss,
        atom: ground_clause.head.clone(),
    };
    let head = render_literal(&head_lit, table)?;
    if ground_clause.body.is_empty() {
        return Ok(format!("{head}."));
    }
    let body: Vec<String> = ground_clause
        .body
        .iter()
        .map(|lit| render_literal(lit, table))
        .collect::<Result<_>>()?;
    Ok(format!("{head} because {}.", body.join(" and ")))
}
