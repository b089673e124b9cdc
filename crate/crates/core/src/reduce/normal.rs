use std::collections::HashMap;

use crate::formula::{eval_over, variable_clusters, Environment, Formula};
use crate::relcore::Relation;

use super::{ReduceError, Reduction, ReductionMode};

/// Partitioned disjunctive form: a disjunction whose disjuncts are
/// conjunctions of one component per block of free variables. `None` marks
/// a block the disjunct does not constrain.
#[derive(Debug, Clone, PartialEq)]
pub struct Pdf {
    pub blocks: Vec<Vec<String>>,
    pub disjuncts: Vec<Vec<Option<Formula>>>,
}

/// Partitioned conjunctive form: a conjunction of clauses, each clause a
/// disjunction grouped by block (`clauses[c][b]` lists its block-`b` parts).
#[derive(Debug, Clone, PartialEq)]
pub struct Pcf {
    pub blocks: Vec<Vec<String>>,
    pub clauses: Vec<Vec<Vec<Formula>>>,
}

fn true_formula(blocks: &[Vec<String>]) -> Formula {
    Formula::atom("I1", &[blocks[0][0].as_str()])
}

impl Pdf {
    pub fn to_formula(&self) -> Formula {
        let parts = self
            .disjuncts
            .iter()
            .map(|d| {
                let present: Vec<Formula> = d.iter().flatten().cloned().collect();
                if present.is_empty() {
                    true_formula(&self.blocks)
                } else {
                    Formula::conjoin(present)
                }
            })
            .collect();
        Formula::disjoin(parts)
    }
}

impl Pcf {
    pub fn to_formula(&self) -> Formula {
        let clauses = self
            .clauses
            .iter()
            .map(|c| Formula::disjoin(c.iter().flatten().cloned().collect()))
            .collect();
        Formula::conjoin(clauses)
    }
}

enum Norm {
    False,
    True,
    Part(Comp),
}

#[derive(Clone)]
struct Comp {
    f: Formula,
    rel: Relation,
}

#[derive(Clone)]
struct Disj {
    comps: Vec<Option<Comp>>,
}

struct Builder<'a> {
    env: &'a Environment,
    block_of: HashMap<String, usize>,
    /// Every variable (free or bound) assigned to each block.
    scope: Vec<Vec<String>>,
}

fn and2(a: &Formula, b: &Formula) -> Formula {
    let mut parts = Vec::new();
    for f in [a, b] {
        match f {
            Formula::And(cs) => parts.extend(cs.iter().cloned()),
            other => parts.push(other.clone()),
        }
    }
    Formula::And(parts)
}

fn or2(a: &Formula, b: &Formula) -> Formula {
    let mut parts = Vec::new();
    for f in [a, b] {
        match f {
            Formula::Or(cs) => parts.extend(cs.iter().cloned()),
            other => parts.push(other.clone()),
        }
    }
    Formula::Or(parts)
}

impl Builder<'_> {
    fn nblocks(&self) -> usize {
        self.scope.len()
    }

    fn normalize(&self, f: Formula, block: usize) -> Result<Norm, ReduceError> {
        let rel = eval_over(&f, self.env, &self.scope[block])?;
        let full = self.env.domain().len().pow(self.scope[block].len() as u32);
        Ok(if rel.is_empty() {
            Norm::False
        } else if rel.len() == full {
            Norm::True
        } else {
            Norm::Part(Comp { f, rel })
        })
    }

    fn single(&self, f: Formula, block: usize) -> Result<Vec<Disj>, ReduceError> {
        let mut comps = vec![None; self.nblocks()];
        match self.normalize(f, block)? {
            Norm::False => return Ok(Vec::new()),
            Norm::True => {}
            Norm::Part(c) => comps[block] = Some(c),
        }
        Ok(vec![Disj { comps }])
    }

    fn truth(&self) -> Vec<Disj> {
        vec![Disj {
            comps: vec![None; self.nblocks()],
        }]
    }

    fn conj(&self, a: &Disj, b: &Disj) -> Option<Disj> {
        let mut comps = Vec::with_capacity(self.nblocks());
        for (x, y) in a.comps.iter().zip(&b.comps) {
            comps.push(match (x, y) {
                (None, c) | (c, None) => c.clone(),
                (Some(x), Some(y)) => {
                    let rel = x.rel.intersection(&y.rel).expect("same block columns");
                    if rel.is_empty() {
                        return None;
                    }
                    Some(Comp {
                        f: and2(&x.f, &y.f),
                        rel,
                    })
                }
            });
        }
        Some(Disj { comps })
    }

    fn product(&self, a: &[Disj], b: &[Disj]) -> Vec<Disj> {
        let out = a
            .iter()
            .flat_map(|x| b.iter().filter_map(move |y| self.conj(x, y)))
            .collect();
        self.prune(out)
    }

    fn subsumed(a: &Disj, b: &Disj) -> bool {
        a.comps.iter().zip(&b.comps).all(|(x, y)| match (x, y) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(x), Some(y)) => x.rel.is_subset(&y.rel),
        })
    }

    /// Drops disjuncts implied by another and merges pairs that differ in a
    /// single block.
    fn prune(&self, mut ds: Vec<Disj>) -> Vec<Disj> {
        loop {
            let mut keep: Vec<Disj> = Vec::with_capacity(ds.len());
            for d in ds {
                if keep.iter().any(|k| Self::subsumed(&d, k)) {
                    continue;
                }
                keep.retain(|k| !Self::subsumed(k, &d));
                keep.push(d);
            }
            match self.merge_once(&keep) {
                Some(merged) => ds = merged,
                None => return keep,
            }
        }
    }

    fn merge_once(&self, ds: &[Disj]) -> Option<Vec<Disj>> {
        for i in 0..ds.len() {
            for j in i + 1..ds.len() {
                let differing: Vec<usize> = (0..self.nblocks())
                    .filter(|&b| match (&ds[i].comps[b], &ds[j].comps[b]) {
                        (None, None) => false,
                        (Some(x), Some(y)) => x.rel != y.rel,
                        _ => true,
                    })
                    .collect();
                if differing.len() != 1 {
                    continue;
                }
                let b = differing[0];
                let (Some(x), Some(y)) = (&ds[i].comps[b], &ds[j].comps[b]) else {
                    continue;
                };
                let rel = x.rel.union(&y.rel).expect("same block columns");
                let full = self.env.domain().len().pow(self.scope[b].len() as u32);
                let mut merged = ds[i].clone();
                merged.comps[b] = if rel.len() == full {
                    None
                } else {
                    Some(Comp {
                        f: or2(&x.f, &y.f),
                        rel,
                    })
                };
                let mut out: Vec<Disj> = ds.to_vec();
                out.remove(j);
                out[i] = merged;
                return Some(out);
            }
        }
        None
    }

    fn build(&self, f: &Formula) -> Result<Vec<Disj>, ReduceError> {
        match f {
            Formula::Atom { args, .. } => self.single(f.clone(), self.block_of[&args[0]]),
            Formula::And(cs) => {
                let mut acc = self.truth();
                for c in cs {
                    let part = self.build(c)?;
                    acc = self.product(&acc, &part);
                    if acc.is_empty() {
                        break;
                    }
                }
                Ok(acc)
            }
            Formula::Or(cs) => {
                let mut acc = Vec::new();
                for c in cs {
                    acc.extend(self.build(c)?);
                }
                Ok(self.prune(acc))
            }
            Formula::Not(b) => {
                // ¬⋁_i ⋀_k C_ik = ⋀_i ⋁_k ¬C_ik, multiplied back out
                let inner = self.build(b)?;
                let mut acc = self.truth();
                for d in &inner {
                    let mut negated = Vec::new();
                    for (k, c) in d.comps.iter().enumerate() {
                        if let Some(c) = c {
                            negated.extend(self.single(Formula::not(c.f.clone()), k)?);
                        }
                    }
                    acc = self.product(&acc, &negated);
                    if acc.is_empty() {
                        break;
                    }
                }
                Ok(acc)
            }
            Formula::Exists { var, body } => {
                // a variable that never occurs has no block; over a non-empty domain ∃ is vacuous
                let Some(&b) = self.block_of.get(var) else {
                    return self.build(body);
                };
                let inner = self.build(body)?;
                let mut out = Vec::with_capacity(inner.len());
                for mut d in inner {
                    if let Some(c) = d.comps[b].take() {
                        let mentions = c.f.free_vars().contains(var);
                        let f = if mentions {
                            Formula::exists(var.clone(), c.f)
                        } else {
                            c.f
                        };
                        match self.normalize(f, b)? {
                            Norm::False => continue,
                            Norm::True => {}
                            Norm::Part(c) => d.comps[b] = Some(c),
                        }
                    }
                    out.push(d);
                }
                Ok(self.prune(out))
            }
        }
    }
}

/// Puts a rectified formula into partitioned disjunctive form over
/// `partition`, a partition of its free variables that its connectivity
/// clusters refine.
///
/// Negations are pushed through by De Morgan and redistributed, and each
/// quantifier is attached to the block its variable belongs to. Components
/// are simplified semantically in `env`: false disjuncts and implied ones
/// are dropped, and disjuncts differing in one block are merged.
pub fn to_pdf(f: &Formula, env: &Environment, partition: &[Vec<String>]) -> Result<Pdf, ReduceError> {
    let free = f.free_vars();
    if free.is_empty() {
        return Err(ReduceError::BadPartition("formula has no free variables".into()));
    }
    let mut block_of: HashMap<String, usize> = HashMap::new();
    for (b, block) in partition.iter().enumerate() {
        if block.is_empty() {
            return Err(ReduceError::BadPartition("empty block".into()));
        }
        for v in block {
            if !free.contains(v) {
                return Err(ReduceError::BadPartition(format!("{v} is not a free variable")));
            }
            if block_of.insert(v.clone(), b).is_some() {
                return Err(ReduceError::BadPartition(format!("{v} appears twice")));
            }
        }
    }
    if let Some(v) = free.iter().find(|v| !block_of.contains_key(*v)) {
        return Err(ReduceError::BadPartition(format!("{v} is not covered")));
    }
    let mut scope: Vec<Vec<String>> = partition.to_vec();
    for cluster in variable_clusters(f) {
        let anchor = cluster.iter().find(|v| free.contains(v)).cloned();
        let home = anchor.as_ref().map_or(0, |a| block_of[a]);
        for v in &cluster {
            match block_of.get(v) {
                Some(&b) if b != home => {
                    return Err(ReduceError::NotDisconnected {
                        a: anchor.clone().expect("a free variable anchors the block"),
                        b: v.clone(),
                    })
                }
                Some(_) => {}
                None => {
                    block_of.insert(v.clone(), home);
                    scope[home].push(v.clone());
                }
            }
        }
    }
    let builder = Builder { env, block_of, scope };
    let built = builder.build(f)?;
    let mut disjuncts: Vec<Vec<Option<Formula>>> = built
        .into_iter()
        .map(|d| d.comps.into_iter().map(|c| c.map(|c| c.f)).collect())
        .collect();
    if disjuncts.is_empty() {
        // unsatisfiable: keep one explicitly false disjunct
        let mut d = vec![None; partition.len()];
        d[0] = Some(Formula::not(true_formula(partition)));
        disjuncts.push(d);
    }
    Ok(Pdf {
        blocks: partition.to_vec(),
        disjuncts,
    })
}

/// Distributes a PDF into a PCF: one clause per choice of a component from
/// every disjunct. Choices taking the same block everywhere come first, the
/// rest follow in lexicographic order; repeated and weaker clauses are
/// dropped.
pub fn pdf_to_pcf(pdf: &Pdf) -> Pcf {
    let nb = pdf.blocks.len();
    let options: Vec<Vec<usize>> = pdf
        .disjuncts
        .iter()
        .map(|d| (0..nb).filter(|&k| d[k].is_some()).collect())
        .collect();
    let mut choices: Vec<Vec<usize>> = Vec::new();
    for k in 0..nb {
        if options.iter().all(|o| o.contains(&k)) {
            choices.push(vec![k; options.len()]);
        }
    }
    if options.iter().all(|o| !o.is_empty()) {
        let mut idx = vec![0usize; options.len()];
        'enumerate: loop {
            let choice: Vec<usize> = idx.iter().zip(&options).map(|(&i, o)| o[i]).collect();
            if !choice.windows(2).all(|w| w[0] == w[1]) {
                choices.push(choice);
            }
            for pos in (0..idx.len()).rev() {
                idx[pos] += 1;
                if idx[pos] < options[pos].len() {
                    continue 'enumerate;
                }
                idx[pos] = 0;
            }
            break;
        }
    }
    let mut clauses: Vec<Vec<Vec<Formula>>> = Vec::new();
    for choice in choices {
        let mut clause: Vec<Vec<Formula>> = vec![Vec::new(); nb];
        for (d, &k) in choice.iter().enumerate() {
            let lit = pdf.disjuncts[d][k].clone().expect("chosen components exist");
            if !clause[k].contains(&lit) {
                clause[k].push(lit);
            }
        }
        if !clauses.contains(&clause) {
            clauses.push(clause);
        }
    }
    let implies = |a: &Vec<Vec<Formula>>, b: &Vec<Vec<Formula>>| {
        a.iter().zip(b).all(|(x, y)| x.iter().all(|l| y.contains(l)))
    };
    let kept: Vec<Vec<Vec<Formula>>> = clauses
        .iter()
        .filter(|c| !clauses.iter().any(|o| o != *c && implies(o, c)))
        .cloned()
        .collect();
    Pcf {
        blocks: pdf.blocks.clone(),
        clauses: kept,
    }
}

/// PDF and PCF reductions derived from an existing reduction.
pub fn normal_forms(
    red: &Reduction,
    partition: &[Vec<String>],
) -> Result<(Reduction, Reduction), ReduceError> {
    let pdf = to_pdf(&red.formula, &red.env, partition)?;
    let pcf = pdf_to_pcf(&pdf);
    let as_reduction = |formula: Formula, mode| Reduction {
        source: red.source.clone(),
        env: red.env.clone(),
        formula,
        vars: red.vars.clone(),
        mode,
    };
    Ok((
        as_reduction(pdf.to_formula(), ReductionMode::Pdf),
        as_reduction(pcf.to_formula(), ReductionMode::Pcf),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{connectivity_clusters, eval, parse_formula, Signature};
    use crate::reduce::{delta_decomposition, verify_reduction};
    use crate::relcore::DomainSet;

    fn parse(text: &str) -> Formula {
        parse_formula(text, &Signature::inferring()).unwrap()
    }

    fn blocks(layout: &[&[&str]]) -> Vec<Vec<String>> {
        layout
            .iter()
            .map(|b| b.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    fn env() -> Environment {
        let d = DomainSet::new(["a", "b"]).unwrap();
        Environment::new(d.clone())
            .with(
                "P",
                Relation::from_names("P", d.clone(), 2, [["a", "b"]]).unwrap(),
            )
            .unwrap()
            .with("Q", Relation::from_names("Q", d.clone(), 1, [["b"]]).unwrap())
            .unwrap()
            .with(
                "R",
                Relation::from_names("R", d.clone(), 2, [["a", "a"], ["b", "a"]]).unwrap(),
            )
            .unwrap()
    }

    #[test]
    fn conjunction_is_already_partitioned() {
        let f = parse("P(x,y) & Q(z)");
        let pdf = to_pdf(&f, &env(), &blocks(&[&["x", "y"], &["z"]])).unwrap();
        assert_eq!(pdf.disjuncts.len(), 1);
        assert_eq!(pdf.to_formula(), f);
    }

    #[test]
    fn distributive_identity() {
        let pdf = Pdf {
            blocks: blocks(&[&["x", "y"], &["z"]]),
            disjuncts: vec![
                vec![Some(parse("P1(x,y)")), Some(parse("Q1(z)"))],
                vec![Some(parse("P2(x,y)")), Some(parse("Q2(z)"))],
            ],
        };
        assert_eq!(
            pdf.to_formula().to_string(),
            "(P1(x,y) & Q1(z)) | (P2(x,y) & Q2(z))"
        );
        assert_eq!(
            pdf_to_pcf(&pdf).to_formula().to_string(),
            "(P1(x,y) | P2(x,y)) & (Q1(z) | Q2(z)) & (P1(x,y) | Q2(z)) & (P2(x,y) | Q1(z))"
        );
    }

    #[test]
    fn delta_teridentity_over_a_cut() {
        let d = DomainSet::new(["a", "b"]).unwrap();
        let red = delta_decomposition(&Relation::pluridentity(d, 3).unwrap()).unwrap();
        let part = blocks(&[&["x1"], &["x2", "x3"]]);
        let pdf = to_pdf(&red.formula, &red.env, &part).unwrap();
        assert_eq!(pdf.disjuncts.len(), 2);
        let (p, c) = normal_forms(&red, &part).unwrap();
        assert!(verify_reduction(&p).equal);
        assert!(verify_reduction(&c).equal);
    }

    #[test]
    fn cuts_and_quantifiers_are_distributed() {
        let env = env();
        for (text, part) in [
            (
                "exists t. (~(Q(x) & R(y,t)) & P(t,z))",
                blocks(&[&["x"], &["y", "z"]]),
            ),
            (
                "~(P(x,y) | Q(z)) | (exists u. R(u,z) & Q(x))",
                blocks(&[&["x", "y"], &["z"]]),
            ),
            (
                "~(Q(x) & ~exists s. (P(y,s) & R(s,z)))",
                blocks(&[&["x"], &["y", "z"]]),
            ),
            (
                "(Q(x) | Q(y)) & ~(Q(y) & Q(z))",
                blocks(&[&["x"], &["y"], &["z"]]),
            ),
        ] {
            let f = parse(text);
            let vars = f.free_vars();
            let want = eval(&f, &env, Some(&vars)).unwrap();
            let pdf = to_pdf(&f, &env, &part).unwrap();
            let g = pdf.to_formula();
            assert_eq!(eval_over(&g, &env, &vars).unwrap(), want, "{text} -> {g}");
            for d in &pdf.disjuncts {
                for (b, c) in d.iter().enumerate() {
                    if let Some(c) = c {
                        assert!(c.free_vars().iter().all(|v| part[b].contains(v)), "{c}");
                    }
                }
            }
            let clusters = connectivity_clusters(&g);
            assert!(clusters
                .iter()
                .all(|c| part.iter().any(|b| c.iter().all(|v| b.contains(v)))));
            let pcf = pdf_to_pcf(&pdf).to_formula();
            assert_eq!(eval_over(&pcf, &env, &vars).unwrap(), want, "{text} -> {pcf}");
        }
    }

    #[test]
    fn vacuous_quantifier_is_dropped() {
        let f = parse("(exists t. Q(x)) | Q(y)");
        let pdf = to_pdf(&f, &env(), &blocks(&[&["x"], &["y"]])).unwrap();
        let vars = ["x".to_string(), "y".to_string()];
        assert_eq!(
            eval_over(&pdf.to_formula(), &env(), &vars).unwrap(),
            eval(&f, &env(), Some(&vars)).unwrap()
        );
    }

    #[test]
    fn linked_variables_are_rejected() {
        let f = parse("exists t. (P(x,t) & R(t,y))");
        assert!(matches!(
            to_pdf(&f, &env(), &blocks(&[&["x"], &["y"]])),
            Err(ReduceError::NotDisconnected { .. })
        ));
        assert!(to_pdf(&f, &env(), &blocks(&[&["x"]])).is_err());
    }

    #[test]
    fn unsatisfiable_keeps_one_disjunct() {
        let f = parse("Q(x) & ~Q(x) & Q(y)");
        let pdf = to_pdf(&f, &env(), &blocks(&[&["x"], &["y"]])).unwrap();
        assert_eq!(pdf.disjuncts.len(), 1);
        assert!(eval_over(&pdf.to_formula(), &env(), &["x".into(), "y".into()])
            .unwrap()
            .is_empty());
    }
}
