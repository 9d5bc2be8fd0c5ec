//! Run configuration: target atom, rewriting filters, candidate
//! domains, immutable constants, and sentence templates.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parser::parse_ground_atom;
use crate::rewrite::RewritingFilter;
use crate::theory::Theory;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    target: String,
    filters: Vec<RewritingFilter>,
    #[serde(default)]
    candidate_domains: Option<Vec<Vec<String>>>,
    #[serde(default)]
    immutable_constants: Option<Vec<String>>,
    #[serde(default)]
    max_degree: Option<usize>,
    #[serde(default)]
    lift_predicates: Option<Vec<String>>,
}

/// Echo of the configuration as it appears in reports.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ConfigEcho {
    pub target: String,
    pub filters: Vec<RewritingFilter>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidate_domains: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub immutable_constants: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
}

/// A validated near-miss run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub target: crate::logic::Atom,
    pub filters: Vec<RewritingFilter>,
    /// Per-argument-position constant sets for the target predicate.
    pub candidate_domains: Option<Vec<BTreeSet<String>>>,
    pub immutable_constants: BTreeSet<String>,
    pub max_degree: Option<usize>,
    /// Restrict constant lifting to these predicates; `None` lifts all
    /// body constant occurrences.
    pub lift_predicates: Option<BTreeSet<String>>,
}

impl RunConfig {
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            target: self.target.to_string(),
            filters: self.filters.clone(),
            candidate_domains: self
                .candidate_domains
                .as_ref()
                .map(|ds| ds.iter().map(|d| d.iter().cloned().collect()).collect()),
            immutable_constants: self.immutable_constants.iter().cloned().collect(),
            max_degree: self.max_degree,
        }
    }
}

/// Parse and validate a JSON run configuration against a theory.
pub fn parse_config(text: &str, theory: &Theory) -> Result<RunConfig> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed JSON: {e}")))?;

    let target = parse_ground_atom(&raw.target)
        .map_err(|e| Error::Config(format!("invalid target: {e}")))?;
    let target_arity = theory
        .arity_of(&target.symbol)
        .ok_or_else(|| Error::Config(format!("unknown predicate `{}`", target.symbol)))?;
    if target_arity != target.arity() {
        return Err(Error::Config(format!(
            "target `{target}` has {} arguments but `{}` has arity {target_arity}",
            target.arity(),
            target.symbol
        )));
    }

    for f in &raw.filters {
        let from = theory
            .arity_of(&f.from)
            .ok_or_else(|| Error::Config(format!("unknown predicate `{}` in filter", f.from)))?;
        let to = theory
            .arity_of(&f.to)
            .ok_or_else(|| Error::Config(format!("unknown predicate `{}` in filter", f.to)))?;
        if from != to {
            return Err(Error::Config(format!(
                "filter {f} maps arity {from} to arity {to}"
            )));
        }
        if f.from == f.to {
            return Err(Error::Config(format!("filter {f} maps a predicate to itself")));
        }
    }

    let pool = theory.constant_pool();
    let immutable_constants: BTreeSet<String> =
        raw.immutable_constants.unwrap_or_default().into_iter().collect();
    for c in &immutable_constants {
        if !pool.contains(c) {
            return Err(Error::Config(format!("unknown constant `{c}`")));
        }
    }

    let candidate_domains = match raw.candidate_domains {
        None => None,
        Some(domains) => {
            if domains.len() != target.arity() {
                return Err(Error::Config(format!(
                    "candidate_domains has {} positions but `{}` has arity {}",
                    domains.len(),
                    target.symbol,
                    target.arity()
                )));
            }
            let mut out = Vec::with_capacity(domains.len());
            for domain in domains {
                let set: BTreeSet<String> = domain.into_iter().collect();
                for c in &set {
                    if !pool.contains(c) {
                        return Err(Error::Config(format!("unknown constant `{c}`")));
                    }
                }
                out.push(set);
            }
            Some(out)
        }
    };

    let lift_predicates = match raw.lift_predicates {
        None => None,
        Some(preds) => {
            let set: BTreeSet<String> = preds.into_iter().collect();
            for p in &set {
                if theory.arity_of(p).is_none() {
                    return Err(Error::Config(format!("unknown predicate `{p}`")));
                }
            }
            Some(set)
        }
    };

    if raw.max_degree == Some(0) {
        return Err(Error::Config("max_degree must be positive".into()));
    }

    Ok(RunConfig {
        target,
        filters: raw.filters,
        candidate_domains,
        immutable_constants,
        max_degree: raw.max_degree,
        lift_predicates,
    })
}

/// Sentence templates: predicate symbol to a pattern with positional
/// `{0}`, `{1}`, ... slots. A `sym.neg` entry, when present, renders
/// negated heads and literals.
#[derive(Debug, Clone, Default)]
pub struct TemplateTable {
    patterns: BTreeMap<String, String>,
}

impl TemplateTable {
    pub fn parse(text: &str) -> Result<TemplateTable> {
        let patterns: BTreeMap<String, String> = serde_json::from_str(text)
            .map_err(|e| Error::Template(format!("malformed JSON: {e}")))?;
        Ok(TemplateTable { patterns })
    }

    pub fn get(&self, symbol: &str) -> Option<&str> {
        self.patterns.get(symbol).map(String::as_str)
    }

    /// Instantiate the pattern for `symbol` with constant arguments.
    pub fn instantiate(&self, symbol: &str, args: &[String]) -> Result<Option<String>> {
        let Some(pattern) = self.get(symbol) else {
            return Ok(None);
        };
        let mut out = String::new();
        let mut chars = pattern.chars().peekable();
        while let Some(c) = chars.next() {
            if c != '{' {
                out.push(c);
                continue;
            }
            let mut digits = String::new();
            for d in chars.by_ref() {
                if d == '}' {
                    break;
                }
                digits.push(d);
            }
            let idx: usize = digits
                .parse()
                .map_err(|_| Error::Template(format!("bad slot `{{{digits}}}` in `{pattern}`")))?;
            let arg = args.get(idx).ok_or_else(|| {
                Error::Template(format!(
                    "slot {{{idx}}} in template for `{symbol}` exceeds arity {}",
                    args.len()
                ))
            })?;
            out.push_str(arg);
        }
        Ok(Some(out))
    }
}
