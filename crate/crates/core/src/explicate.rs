//! Explication: every identification hidden in variable sharing becomes an
//! explicit pluridentity atom, and pluridentities of adicity four or more
//! are expanded into chains of teridentities. Triads are then counted.

use std::collections::{BTreeMap, HashMap};

use crate::formula::{check_rectified, identity_name, rectify, Formula, FormulaError, NameGen};

#[derive(Debug, Clone, PartialEq)]
pub struct ExplicationReport {
    pub input: Formula,
    pub output: Formula,
    /// Variables that received an identity atom, with that atom's adicity.
    pub inserted: Vec<(String, usize)>,
    /// Adicity-3 atoms in the output once pluridentities are expanded.
    pub triad_count: usize,
}

/// Explicates a rectified formula:
///
/// * a bound variable with `n >= 3` occurrences is split into `t1..tn`,
///   bound together by `I_n(t1..tn)` inside its quantifier;
/// * a free variable with `n >= 2` occurrences is split the same way and
///   tied back to itself by `I_{n+1}(t, t1..tn)` in front of the formula;
/// * a bound variable with one occurrence gets `I1(t)` conjoined;
/// * a bound variable with two occurrences is left alone.
pub fn explicate(f: &Formula) -> Result<ExplicationReport, FormulaError> {
    explicate_in_order(f, &[])
}

/// [`explicate`] with fresh names handed out to variables in the given
/// order first (the rest follow in quantifier, then free, order).
pub fn explicate_in_order(f: &Formula, order: &[String]) -> Result<ExplicationReport, FormulaError> {
    check_rectified(f)?;
    let occ = f.occurrences();
    let free = f.free_vars();
    let mut names = NameGen::for_formula(f);

    let mut sequence: Vec<String> = order.iter().filter(|v| occ.contains_key(*v)).cloned().collect();
    for v in f.bound_vars().into_iter().chain(free.iter().cloned()) {
        if !sequence.contains(&v) {
            sequence.push(v);
        }
    }
    let mut splits: HashMap<String, Vec<String>> = HashMap::new();
    let mut inserted = Vec::new();
    for v in &sequence {
        let n = occ.get(v).copied().unwrap_or(0);
        let is_free = free.contains(v);
        if (is_free && n >= 2) || (!is_free && n >= 3) {
            let parts: Vec<String> = (0..n).map(|_| names.fresh(v)).collect();
            inserted.push((v.clone(), if is_free { n + 1 } else { n }));
            splits.insert(v.clone(), parts);
        } else if !is_free && n == 1 {
            inserted.push((v.clone(), 1));
        }
    }

    let mut counters: HashMap<String, usize> = HashMap::new();
    let body = rewrite(f, &occ, &splits, &mut counters);

    let mut prefix = Vec::new();
    let mut identities = Vec::new();
    for v in sequence.iter().filter(|v| free.contains(v)) {
        if let Some(parts) = splits.get(v) {
            let mut args = vec![v.clone()];
            args.extend(parts.iter().cloned());
            identities.push(Formula::atom(identity_name(args.len()), &args));
            prefix.extend(parts.iter().cloned());
        }
    }
    let output = if identities.is_empty() {
        body
    } else {
        Formula::exists_many(&prefix, conjoin_front(identities, body))
    };
    let triad_count = count_triads(&expand_pluridentities(&output));
    Ok(ExplicationReport {
        input: f.clone(),
        output,
        inserted,
        triad_count,
    })
}

fn conjoin_front(mut front: Vec<Formula>, body: Formula) -> Formula {
    match body {
        Formula::And(cs) => front.extend(cs),
        other => front.push(other),
    }
    Formula::And(front)
}

fn rewrite(
    f: &Formula,
    occ: &BTreeMap<String, usize>,
    splits: &HashMap<String, Vec<String>>,
    counters: &mut HashMap<String, usize>,
) -> Formula {
    match f {
        Formula::Atom { pred, args } => Formula::Atom {
            pred: pred.clone(),
            args: args
                .iter()
                .map(|a| match splits.get(a) {
                    Some(parts) => {
                        let k = counters.entry(a.clone()).or_insert(0);
                        *k += 1;
                        parts[*k - 1].clone()
                    }
                    None => a.clone(),
                })
                .collect(),
        },
        Formula::And(cs) => Formula::And(cs.iter().map(|c| rewrite(c, occ, splits, counters)).collect()),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| rewrite(c, occ, splits, counters)).collect()),
        Formula::Not(b) => Formula::not(rewrite(b, occ, splits, counters)),
        Formula::Exists { var, body } => {
            let inner = rewrite(body, occ, splits, counters);
            if let Some(parts) = splits.get(var) {
                let identity = Formula::atom(identity_name(parts.len()), parts);
                Formula::exists_many(parts, conjoin_front(vec![identity], inner))
            } else if occ.get(var) == Some(&1) {
                let dot = Formula::atom(identity_name(1), &[var.as_str()]);
                Formula::exists(var.clone(), conjoin_front(vec![dot], inner))
            } else {
                Formula::exists(var.clone(), inner)
            }
        }
    }
}

/// Replaces each `I_n` atom with `n >= 4` by `n - 2` teridentities chained
/// through `n - 3` fresh bound variables.
pub fn expand_pluridentities(f: &Formula) -> Formula {
    let mut names = NameGen::for_formula(f);
    f.map_atoms(&mut |pred, args| {
        let n = args.len();
        if n < 4 || pred != identity_name(n) {
            return Formula::Atom {
                pred: pred.to_string(),
                args: args.to_vec(),
            };
        }
        let links: Vec<String> = (0..n - 3).map(|_| names.fresh("u")).collect();
        let mut chain = Vec::with_capacity(n - 2);
        chain.push(Formula::atom("I3", &[&args[0], &args[1], &links[0]]));
        for k in 1..n - 3 {
            chain.push(Formula::atom("I3", &[&links[k - 1], &args[k + 1], &links[k]]));
        }
        chain.push(Formula::atom("I3", &[&links[n - 4], &args[n - 2], &args[n - 1]]));
        Formula::exists_many(&links, Formula::And(chain))
    })
}

fn count_triads(f: &Formula) -> usize {
    f.atoms().iter().filter(|(_, args)| args.len() == 3).count()
}

fn explicated_expanded(f: &Formula) -> Formula {
    let rect = rectify(f);
    let report = explicate(&rect).expect("rectified input");
    expand_pluridentities(&report.output)
}

/// True when the explicated, expanded form has only atoms of adicity ≤ 3.
pub fn is_subtrivalent(f: &Formula) -> bool {
    explicated_expanded(f)
        .atoms()
        .iter()
        .all(|(_, args)| args.len() <= 3)
}

/// Number of triads in the explicated, expanded form.
pub fn representation_ternarity(f: &Formula) -> usize {
    count_triads(&explicated_expanded(f))
}
