//! The near-miss generation search: candidate enumeration, the
//! degree-indexed substitution search, and assembly of the near-miss
//! explanation family.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::eval::is_builtin;
use crate::explain::{local_explanations, LocalExplanation};
use crate::logic::{match_atom, Atom, Clause, Substitution, Term};
use crate::rewrite::{lift_constants, minimally_changed_clause, RewritingFilter};
use crate::theory::Theory;

/// Ground atoms sharing the example's predicate symbol that are not
/// modeled by the theory. Positions default to the full constant pool
/// and may be restricted per argument position.
pub fn near_miss_candidates(
    theory: &Theory,
    example: &Atom,
    domains: Option<&Vec<BTreeSet<String>>>,
) -> Result<Vec<Atom>> {
    let pool = theory.constants_of();
    let per_position: Vec<Vec<String>> = (0..example.arity())
        .map(|i| match domains.and_then(|d| d.get(i)) {
            Some(set) => set.iter().cloned().collect(),
            None => pool.clone(),
        })
        .collect();
    let mut out = Vec::new();
    if example.arity() == 0 {
        return Ok(out);
    }
    for combo in per_position.iter().multi_cartesian_product() {
        let atom = Atom::new(
            example.symbol.clone(),
            combo.into_iter().map(|c| Term::Const(c.clone())).collect(),
        );
        if !theory.models_atom(&atom)? {
            out.push(atom);
        }
    }
    Ok(out)
}

/// Options shared by the degree search and the brute-force oracle.
#[derive(Debug, Clone, Default)]
pub struct SearchOpts {
    pub immutable_constants: BTreeSet<String>,
    pub max_degree: Option<usize>,
}

/// The smallest degree `d >= 1` at which some substitution of distance
/// exactly `d` from `theta` maps the head of `c_prime` onto `candidate`
/// with a fully modeled body, together with all such substitutions.
/// Head-variable bindings are pre-constrained by the candidate;
/// variables bound to immutable constants are never re-bound.
pub fn minimal_degree_search(
    theory: &Theory,
    c_prime: &Clause,
    theta: &Substitution,
    candidate: &Atom,
    opts: &SearchOpts,
) -> Result<Option<(usize, Vec<Substitution>)>> {
    let Some(forced) = match_atom(&c_prime.head, candidate) else {
        return Ok(None);
    };

    let vars: Vec<&String> = theta.domain().collect();
    let mut fixed: BTreeMap<&str, &Term> = BTreeMap::new();
    let mut base_distance = 0usize;
    let mut free: Vec<&String> = Vec::new();
    for v in &vars {
        let orig = theta.get(v).expect("domain var");
        match forced.get(v) {
            Some(value) => {
                if value != orig && opts.immutable_constants.contains(orig.name()) {
                    return Ok(None);
                }
                if value != orig {
                    base_distance += 1;
                }
                fixed.insert(v.as_str(), value);
            }
            None => {
                if opts.immutable_constants.contains(orig.name()) {
                    fixed.insert(v.as_str(), orig);
                } else {
                    free.push(v);
                }
            }
        }
    }

    let pool = theory.constants_of();
    // a modeled body grounds every positive non-builtin literal to a
    // stored fact, so a replacement value for a variable occurring in
    // such a literal must come from the matching fact columns
    let db = theory.database();
    let column_domain = |v: &str| -> Vec<String> {
        let mut restricted: Option<BTreeSet<String>> = None;
        for lit in &c_prime.body {
            if !lit.positive || is_builtin(&lit.atom.symbol, lit.atom.arity()) {
                continue;
            }
            for (i, arg) in lit.atom.args.iter().enumerate() {
                if matches!(arg, Term::Var(name) if name == v) {
                    let column: BTreeSet<String> =
                        db.tuples(&lit.atom.symbol).map(|t| t[i].clone()).collect();
                    restricted = Some(match restricted {
                        None => column,
                        Some(prev) => prev.intersection(&column).cloned().collect(),
                    });
                }
            }
        }
        match restricted {
            Some(set) => set.into_iter().collect(),
            None => pool.clone(),
        }
    };
    let alternatives: BTreeMap<&str, Vec<Term>> = free
        .iter()
        .map(|v| {
            let orig = theta.get(v).expect("domain var");
            let alts: Vec<Term> = column_domain(v)
                .into_iter()
                .filter(|c| c.as_str() != orig.name())
                .map(Term::Const)
                .collect();
            (v.as_str(), alts)
        })
        .collect();

    let cap = opts.max_degree.unwrap_or(usize::MAX).min(theta.len());
    let start = base_distance.max(1);
    for degree in start..=cap {
        let change = degree - base_distance;
        if change > free.len() {
            break;
        }
        let mut hits: Vec<Substitution> = Vec::new();
        for subset in free.iter().combinations(change) {
            let changed: BTreeSet<&str> = subset.iter().map(|v| v.as_str()).collect();
            let value_lists: Vec<&Vec<Term>> =
                subset.iter().map(|v| &alternatives[v.as_str()]).collect();
            let assignments: Box<dyn Iterator<Item = Vec<&Term>>> = if subset.is_empty() {
                Box::new(std::iter::once(Vec::new()))
            } else {
                Box::new(value_lists.into_iter().multi_cartesian_product())
            };
            for assignment in assignments {
                let mut theta_prime = Substitution::new();
                let mut pick = assignment.iter();
                for v in &vars {
                    let value = if let Some(value) = fixed.get(v.as_str()) {
                        (*value).clone()
                    } else if changed.contains(v.as_str()) {
                        (*pick.next().expect("assignment per changed var")).clone()
                    } else {
                        theta.get(v).expect("domain var").clone()
                    };
                    theta_prime.bind(v.as_str(), value);
                }
                if body_modeled(theory, c_prime, &theta_prime)? {
                    hits.push(theta_prime);
                }
            }
        }
        if !hits.is_empty() {
            hits.sort();
            hits.dedup();
            return Ok(Some((degree, hits)));
        }
    }
    Ok(None)
}

pub(crate) fn body_modeled(
    theory: &Theory,
    clause: &Clause,
    theta: &Substitution,
) -> Result<bool> {
    for lit in &clause.body {
        let ground = lit.apply(theta);
        if !theory.models_literal(&ground)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One generated near-miss explanation with full provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearMissExplanation {
    pub ground_clause: Clause,
    pub degree: usize,
    pub candidate: Atom,
    pub filter: RewritingFilter,
    pub source_clause: Clause,
    pub theta: Substitution,
    pub theta_prime: Substitution,
}

/// The family of near-miss explanations, reported per unordered filter
/// pair and indexed by degree.
#[derive(Debug, Clone)]
pub struct NearMissFamily {
    pub target: Atom,
    pub candidate_count: usize,
    /// largest substitution size over the local explanations; bounds
    /// the reported degree range
    pub max_theta: usize,
    /// unordered filter pairs in configuration order
    pub pairs: Vec<(String, String)>,
    pub explanations: Vec<NearMissExplanation>,
}

pub fn filter_pair(filter: &RewritingFilter) -> (String, String) {
    let mut pair = [filter.from.clone(), filter.to.clone()];
    pair.sort();
    let [a, b] = pair;
    (a, b)
}

impl NearMissFamily {
    /// Explanation counts per degree for one filter pair.
    pub fn histogram(&self, pair: &(String, String)) -> BTreeMap<usize, usize> {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for d in 1..=self.max_theta {
            counts.insert(d, 0);
        }
        for exp in &self.explanations {
            if &filter_pair(&exp.filter) == pair {
                *counts.entry(exp.degree).or_insert(0) += 1;
            }
        }
        counts
    }

    pub fn explanations_for(&self, pair: &(String, String)) -> Vec<&NearMissExplanation> {
        self.explanations
            .iter()
            .filter(|e| &filter_pair(&e.filter) == pair)
            .collect()
    }
}

struct SearchTask {
    filter: RewritingFilter,
    c_prime: Clause,
    theta: Substitution,
    source_clause: Clause,
}

fn build_tasks(explanations: &[LocalExplanation], config: &RunConfig) -> Vec<SearchTask> {
    let mut tasks = Vec::new();
    for le in explanations {
        let (lifted, theta) =
            lift_constants(&le.clause, &le.theta, config.lift_predicates.as_ref());
        for filter in &config.filters {
            for occ in filter.occurrence_sets(&lifted.body) {
                tasks.push(SearchTask {
                    filter: filter.clone(),
                    c_prime: minimally_changed_clause(&lifted, &occ, filter),
                    theta: theta.clone(),
                    source_clause: le.clause.clone(),
                });
            }
        }
    }
    tasks
}

fn search_task(
    theory: &Theory,
    task: &SearchTask,
    candidates: &[Atom],
    opts: &SearchOpts,
    parallel: bool,
) -> Result<Vec<NearMissExplanation>> {
    let run = |candidate: &Atom| -> Result<Vec<NearMissExplanation>> {
        match minimal_degree_search(theory, &task.c_prime, &task.theta, candidate, opts)? {
            None => Ok(Vec::new()),
            Some((degree, thetas)) => Ok(thetas
                .into_iter()
                .map(|theta_prime| NearMissExplanation {
                    ground_clause: task.c_prime.apply(&theta_prime),
                    degree,
                    candidate: candidate.clone(),
                    filter: task.filter.clone(),
                    source_clause: task.source_clause.clone(),
                    theta: task.theta.clone(),
                    theta_prime,
                })
                .collect()),
        }
    };

    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        let nested: Vec<Vec<NearMissExplanation>> = candidates
            .par_iter()
            .map(run)
            .collect::<Result<Vec<_>>>()?;
        return Ok(nested.into_iter().flatten().collect());
    }
    let _ = parallel;
    let mut out = Vec::new();
    for candidate in candidates {
        out.extend(run(candidate)?);
    }
    Ok(out)
}

fn run_genme(
    theory: &Theory,
    example: &Atom,
    config: &RunConfig,
    parallel: bool,
) -> Result<NearMissFamily> {
    if example.symbol != config.target.symbol || example.arity() != config.target.arity() {
        return Err(Error::Config(format!(
            "example `{example}` does not match the configured target predicate"
        )));
    }
    let explanations = local_explanations(theory, example)?;
    let candidates =
        near_miss_candidates(theory, example, config.candidate_domains.as_ref())?;
    let opts = SearchOpts {
        immutable_constants: config.immutable_constants.clone(),
        max_degree: config.max_degree,
    };

    let tasks = build_tasks(&explanations, config);
    let max_theta = tasks.iter().map(|t| t.theta.len()).max().unwrap_or(0);
    let mut found = Vec::new();
    for task in &tasks {
        found.extend(search_task(theory, task, &candidates, &opts, parallel)?);
    }

    let mut pairs: Vec<(String, String)> = Vec::new();
    for filter in &config.filters {
        let pair = filter_pair(filter);
        if !pairs.contains(&pair) {
            pairs.push(pair);
        }
    }

    // schedule-independent output order
    found.sort_by(|a, b| {
        let pa = pairs.iter().position(|p| *p == filter_pair(&a.filter));
        let pb = pairs.iter().position(|p| *p == filter_pair(&b.filter));
        pa.cmp(&pb)
            .then(a.degree.cmp(&b.degree))
            .then(a.candidate.cmp(&b.candidate))
            .then(a.theta_prime.cmp(&b.theta_prime))
            .then(a.ground_clause.cmp(&b.ground_clause))
    });

    Ok(NearMissFamily {
        target: example.clone(),
        candidate_count: candidates.len(),
        max_theta: config.max_degree.map_or(max_theta, |m| m.min(max_theta)),
        pairs,
        explanations: found,
    })
}

/// Generate the near-miss explanation family for a positive example.
/// Uses candidate-level parallelism when the `parallel` feature is
/// enabled; the output never depends on the schedule.
pub fn genme(theory: &Theory, example: &Atom, config: &RunConfig) -> Result<NearMissFamily> {
    run_genme(theory, example, config, cfg!(feature = "parallel"))
}

/// Sequential evaluation, regardless of enabled features.
pub fn genme_sequential(
    theory: &Theory,
    example: &Atom,
    config: &RunConfig,
) -> Result<NearMissFamily> {
    run_genme(theory, example, config, false)
}

/// Parallel evaluation; only available with the `parallel` feature.
#[cfg(feature = "parallel")]
pub fn genme_parallel(
    theory: &Theory,
    example: &Atom,
    config: &RunConfig,
) -> Result<NearMissFamily> {
    run_genme(theory, example, config, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::parser::{parse_ground_atom, parse_theory};

    const FAMILY: &str = "\
        female(jodie). female(lynn). female(becky). female(charlie). female(alison). female(kate).\n\
        male(ian). male(alan). male(tom). male(mat).\n\
        parent(jodie,becky). parent(jodie,tom). parent(ian,becky). parent(ian,tom).\n\
        parent(alan,charlie). parent(alan,alison). parent(lynn,charlie). parent(lynn,alison).\n\
        parent(tom,mat). parent(tom,kate). parent(charlie,mat). parent(charlie,kate).\n\
        child(A,B) :- parent(B,A).\n\
        grandfather(A,B) :- male(A), parent(A,C), parent(C,B).\n\
        daughter(A,B) :- female(A), child(A,B).";

    const GF_CONFIG: &str = r#"{
        "target": "grandfather(ian,kate)",
        "filters": [
            {"from": "male", "to": "female", "mode": "single"},
            {"from": "female", "to": "male", "mode": "single"},
            {"from": "parent", "to": "child", "mode": "all"},
            {"from": "child", "to": "parent", "mode": "all"}
        ]
    }"#;

    #[test]
    fn family_candidate_counts() {
        let theory = parse_theory(FAMILY).unwrap();
        let gf = parse_ground_atom("grandfather(ian,kate)").unwrap();
        let dt = parse_ground_atom("daughter(becky,jodie)").unwrap();
        assert_eq!(near_miss_candidates(&theory, &gf, None).unwrap().len(), 96);
        assert_eq!(near_miss_candidates(&theory, &dt, None).unwrap().len(), 92);
    }

    #[test]
    fn grandmother_found_at_degree_one() {
        let theory = parse_theory(FAMILY).unwrap();
        let config = parse_config(GF_CONFIG, &theory).unwrap();
        let example = parse_ground_atom("grandfather(ian,kate)").unwrap();
        let family = genme(&theory, &example, &config).unwrap();
        let pair = ("female".to_string(), "male".to_string());
        let hist = family.histogram(&pair);
        assert_eq!(hist[&1], 1);
        assert_eq!(hist[&2], 2);
        assert_eq!(hist[&3], 1);
        let d1: Vec<_> = family
            .explanations_for(&pair)
            .into_iter()
            .filter(|e| e.degree == 1)
            .collect();
        assert_eq!(
            d1[0].ground_clause.to_string(),
            "grandfather(jodie,kate) :- female(jodie), parent(jodie,tom), parent(tom,kate)."
        );
    }

    #[test]
    fn empty_filter_config_yields_empty_family() {
        let theory = parse_theory(FAMILY).unwrap();
        let config = parse_config(
            r#"{"target":"grandfather(ian,kate)","filters":[]}"#,
            &theory,
        )
        .unwrap();
        let example = parse_ground_atom("grandfather(ian,kate)").unwrap();
        let family = genme(&theory, &example, &config).unwrap();
        assert!(family.explanations.is_empty());
        assert_eq!(family.candidate_count, 96);
    }

    #[test]
    fn negative_target_is_an_error() {
        let theory = parse_theory(FAMILY).unwrap();
        let config = parse_config(
            r#"{"target":"grandfather(becky,tom)","filters":[]}"#,
            &theory,
        )
        .unwrap();
        let example = parse_ground_atom("grandfather(becky,tom)").unwrap();
        assert!(matches!(
            genme(&theory, &example, &config),
            Err(Error::NotPositive(_))
        ));
    }

    #[test]
    fn max_degree_cuts_off_deeper_explanations() {
        let theory = parse_theory(FAMILY).unwrap();
        let config = parse_config(
            r#"{
                "target": "grandfather(ian,kate)",
                "filters": [{"from": "male", "to": "female", "mode": "single"}],
                "max_degree": 1
            }"#,
            &theory,
        )
        .unwrap();
        let example = parse_ground_atom("grandfather(ian,kate)").unwrap();
        let family = genme(&theory, &example, &config).unwrap();
        assert!(family.explanations.iter().all(|e| e.degree == 1));
        assert_eq!(family.explanations.len(), 1);
    }

    #[test]
    fn immutable_constant_blocks_rebinding() {
        let theory = parse_theory(FAMILY).unwrap();
        // freezing ian forbids re-binding A, so the grandmother miss
        // (and every other male->female miss) disappears
        let config = parse_config(
            r#"{
                "target": "grandfather(ian,kate)",
                "filters": [{"from": "male", "to": "female", "mode": "single"}],
                "immutable_constants": ["ian"]
            }"#,
            &theory,
        )
        .unwrap();
        let example = parse_ground_atom("grandfather(ian,kate)").unwrap();
        let family = genme(&theory, &example, &config).unwrap();
        assert!(family.explanations.is_empty());
    }

    #[test]
    fn sequential_and_default_agree() {
        let theory = parse_theory(FAMILY).unwrap();
        let config = parse_config(GF_CONFIG, &theory).unwrap();
        let example = parse_ground_atom("grandfather(ian,kate)").unwrap();
        let a = genme(&theory, &example, &config).unwrap();
        let b = genme_sequential(&theory, &example, &config).unwrap();
        assert_eq!(a.explanations, b.explanations);
    }

    #[test]
    fn emitted_misses_are_sound() {
        let theory = parse_theory(FAMILY).unwrap();
        let config = parse_config(GF_CONFIG, &theory).unwrap();
        let example = parse_ground_atom("grandfather(ian,kate)").unwrap();
        let family = genme(&theory, &example, &config).unwrap();
        assert!(!family.explanations.is_empty());
        for exp in &family.explanations {
            assert!(!theory.models_atom(&exp.ground_clause.head).unwrap());
            assert_ne!(exp.ground_clause.head, example);
            for lit in &exp.ground_clause.body {
                assert!(theory.models_literal(lit).unwrap());
            }
            assert_eq!(
                exp.theta.distance(&exp.theta_prime).unwrap(),
                exp.degree
            );
        }
    }
}
