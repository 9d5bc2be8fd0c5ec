//! Run reports: a degree histogram per filter pair plus every
//! explanation with provenance, rendered as text or JSON with a stable
//! key order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::{ConfigEcho, RunConfig};
use crate::rewrite::RewritingFilter;
use crate::search::NearMissFamily;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ExplanationReport {
    pub degree: usize,
    pub candidate: String,
    pub filter: RewritingFilter,
    pub source_clause: String,
    pub ground_clause: String,
    pub theta: BTreeMap<String, String>,
    pub theta_prime: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FilterReport {
    /// unordered filter pair, rendered `a<->b`
    pub filter: String,
    /// explanation count per degree, including zero rows
    pub counts: BTreeMap<usize, usize>,
    pub explanations: Vec<ExplanationReport>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct RunReport {
    pub target: String,
    pub candidates: usize,
    pub filters: Vec<FilterReport>,
    pub config: ConfigEcho,
}

/// JSON shape used when re-reading a report; the config echo is kept
/// opaque.
#[derive(Debug, Clone, Deserialize)]
pub struct ParsedReport {
    pub target: String,
    pub candidates: usize,
    pub filters: Vec<FilterReport>,
}

fn subst_map(theta: &crate::logic::Substitution) -> BTreeMap<String, String> {
    theta
        .iter()
        .map(|(v, t)| (v.clone(), t.name().to_string()))
        .collect()
}

pub fn build_report(family: &NearMissFamily, config: &RunConfig) -> RunReport {
    let filters = family
        .pairs
        .iter()
        .map(|pair| {
            let explanations = family
                .explanations_for(pair)
                .into_iter()
                .map(|exp| ExplanationReport {
                    degree: exp.degree,
                    candidate: exp.candidate.to_string(),
                    filter: exp.filter.clone(),
                    source_clause: exp.source_clause.to_string(),
                    ground_clause: exp.ground_clause.to_string(),
                    theta: subst_map(&exp.theta),
                    theta_prime: subst_map(&exp.theta_prime),
                })
                .collect();
            FilterReport {
                filter: format!("{}<->{}", pair.0, pair.1),
                counts: family.histogram(pair),
                explanations,
            }
        })
        .collect();
    RunReport {
        target: family.target.to_string(),
        candidates: family.candidate_count,
        filters,
        config: config.echo(),
    }
}

pub fn to_json(report: &RunReport) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serializes");
    out.push('\n');
    out
}

pub fn parse_report(json: &str) -> Result<ParsedReport, serde_json::Error> {
    serde_json::from_str(json)
}

pub fn to_text(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("target: {}\n", report.target));
    out.push_str(&format!("candidates: {}\n", report.candidates));
    for fr in &report.filters {
        out.push('\n');
        out.push_str(&format!("filter {}\n", fr.filter));
        for (degree, count) in &fr.counts {
            out.push_str(&format!("  E{degree} = {count}\n"));
        }
        for exp in &fr.explanations {
            out.push_str(&format!(
                "  d={}  {}  [{}]\n",
                exp.degree, exp.ground_clause, exp.filter
            ));
        }
    }
    out
}
