use super::{Formula, NameGen};

/// Moves every existential quantifier outward through `∧` and `∨` as far as
/// the nearest enclosing negation. In a fragment without `∀` a quantifier
/// cannot cross a cut, so each cut receives its own prenex block.
///
/// Requires a rectified formula; over a non-empty domain the result is
/// equivalent to the input.
pub fn prenex(f: &Formula) -> Formula {
    let (prefix, matrix) = hoist(f);
    Formula::exists_many(&prefix, matrix)
}

fn hoist(f: &Formula) -> (Vec<String>, Formula) {
    match f {
        Formula::Atom { .. } => (Vec::new(), f.clone()),
        Formula::And(cs) | Formula::Or(cs) => {
            let mut prefix = Vec::new();
            let mut parts = Vec::with_capacity(cs.len());
            for c in cs {
                let (p, m) = hoist(c);
                prefix.extend(p);
                parts.push(m);
            }
            let matrix = if matches!(f, Formula::And(_)) {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            };
            (prefix, matrix)
        }
        Formula::Not(b) => (Vec::new(), Formula::not(prenex(b))),
        Formula::Exists { var, body } => {
            let (mut prefix, matrix) = hoist(body);
            prefix.insert(0, var.clone());
            (prefix, matrix)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `∃t[P ∨ Q] → ∃t P ∨ ∃t' Q` and `∃t[P(t) ∧ Q] → ∃t P(t) ∧ Q`.
    Inward,
    /// `∃t1 P ∨ ∃t2 Q → ∃t[P ∨ Q]` and `∃t P ∧ Q → ∃t[P ∧ Q]`.
    Outward,
}

/// Applies the distributivity laws of `∃` over `∨` and `∧` (for conjuncts
/// not mentioning the variable) until none applies in the requested
/// direction. Input must be rectified; the output is rectified as well.
pub fn distribute_exists(f: &Formula, dir: Direction) -> Formula {
    let mut names = NameGen::for_formula(f);
    match dir {
        Direction::Inward => inward(f, &mut names),
        Direction::Outward => outward(f),
    }
}

fn inward(f: &Formula, names: &mut NameGen) -> Formula {
    match f {
        Formula::Atom { .. } => f.clone(),
        Formula::And(cs) => Formula::And(cs.iter().map(|c| inward(c, names)).collect()),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| inward(c, names)).collect()),
        Formula::Not(b) => Formula::not(inward(b, names)),
        Formula::Exists { var, body } => push(var, inward(body, names), names),
    }
}

fn mentions(f: &Formula, var: &str) -> bool {
    f.free_vars().iter().any(|v| v == var)
}

fn push(var: &str, g: Formula, names: &mut NameGen) -> Formula {
    if !mentions(&g, var) {
        // vacuous over a non-empty domain
        return g;
    }
    match g {
        Formula::Or(cs) => {
            let mut first = true;
            let parts = cs
                .into_iter()
                .map(|c| {
                    if !mentions(&c, var) {
                        return c;
                    }
                    if std::mem::replace(&mut first, false) {
                        push(var, c, names)
                    } else {
                        let fresh = names.fresh(var);
                        push(&fresh, c.rename_free(var, &fresh), names)
                    }
                })
                .collect();
            Formula::Or(parts)
        }
        Formula::And(cs) => {
            let (with, without): (Vec<Formula>, Vec<Formula>) =
                cs.into_iter().partition(|c| mentions(c, var));
            if without.is_empty() {
                return Formula::exists(var, Formula::And(with));
            }
            let inner = if with.len() == 1 {
                push(var, with.into_iter().next().expect("one conjunct"), names)
            } else {
                Formula::exists(var, Formula::And(with))
            };
            let mut parts = vec![inner];
            parts.extend(without);
            Formula::And(parts)
        }
        Formula::Exists { var: inner, body } => Formula::exists(inner, push(var, *body, names)),
        other => Formula::exists(var, other),
    }
}

fn outward(f: &Formula) -> Formula {
    match f {
        Formula::Atom { .. } => f.clone(),
        Formula::Not(b) => Formula::not(outward(b)),
        Formula::Exists { var, body } => Formula::exists(var.clone(), outward(body)),
        Formula::And(cs) => {
            let mut prefix = Vec::new();
            let mut parts = Vec::new();
            for c in cs {
                let (p, m) = strip(outward(c));
                prefix.extend(p);
                parts.push(m);
            }
            Formula::exists_many(&prefix, Formula::And(parts))
        }
        Formula::Or(cs) => {
            let mut stripped: Vec<(Vec<String>, Formula)> = cs.iter().map(|c| strip(outward(c))).collect();
            // merge the k-th quantifier of every disjunct into one variable
            let depth = stripped.iter().map(|(p, _)| p.len()).max().unwrap_or(0);
            let mut prefix = Vec::new();
            for k in 0..depth {
                let Some(shared) = stripped.iter().find_map(|(p, _)| p.get(k).cloned()) else {
                    break;
                };
                for (p, m) in stripped.iter_mut() {
                    if let Some(v) = p.get(k) {
                        if *v != shared {
                            *m = m.rename_free(v, &shared);
                        }
                    }
                }
                prefix.push(shared);
            }
            let parts = stripped.into_iter().map(|(_, m)| m).collect();
            Formula::exists_many(&prefix, Formula::Or(parts))
        }
    }
}

/// Splits leading quantifiers off.
fn strip(mut f: Formula) -> (Vec<String>, Formula) {
    let mut prefix = Vec::new();
    while let Formula::Exists { var, body } = f {
        prefix.push(var);
        f = *body;
    }
    (prefix, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{connectivity_clusters, eval, is_rectified, parse_formula, Environment, Signature};
    use crate::relcore::{DomainSet, Relation};

    fn parse(text: &str) -> Formula {
        parse_formula(text, &Signature::inferring()).unwrap()
    }

    fn env() -> Environment {
        let d = DomainSet::new(["a", "b", "c"]).unwrap();
        Environment::new(d.clone())
            .with(
                "P",
                Relation::from_names("P", d.clone(), 2, [["a", "b"], ["c", "c"]]).unwrap(),
            )
            .unwrap()
            .with(
                "Q",
                Relation::from_names("Q", d.clone(), 2, [["b", "a"], ["a", "a"]]).unwrap(),
            )
            .unwrap()
            .with(
                "R",
                Relation::from_names("R", d.clone(), 2, [["b", "c"], ["a", "b"]]).unwrap(),
            )
            .unwrap()
            .with("S", Relation::from_names("S", d.clone(), 1, [["a"]]).unwrap())
            .unwrap()
    }

    fn same(f: &Formula, g: &Formula) {
        let env = env();
        assert_eq!(
            eval(f, &env, Some(&f.free_vars())).unwrap(),
            eval(g, &env, Some(&f.free_vars())).unwrap(),
            "{f} vs {g}"
        );
    }

    #[test]
    fn merges_disjoint_quantifiers() {
        let f = parse("exists t1. P(x,t1) | exists t2. Q(t2,y)");
        let g = distribute_exists(&f, Direction::Outward);
        assert_eq!(g, parse("exists t1. (P(x,t1) | Q(t1,y))"));
        same(&f, &g);
        let back = distribute_exists(&g, Direction::Inward);
        assert_eq!(back, parse("exists t1. P(x,t1) | exists t1_1. Q(t1_1,y)"));
        same(&g, &back);
        assert!(is_rectified(&back));
    }

    #[test]
    fn inward_over_conjunction() {
        let f = parse("exists t. (P(x,t) & Q(y,z))");
        let g = distribute_exists(&f, Direction::Inward);
        assert_eq!(g, parse("exists t. P(x,t) & Q(y,z)"));
        same(&f, &g);
    }

    #[test]
    fn prenex_keeps_cut_quantifiers() {
        assert_eq!(prenex(&parse("P(x,y) & ~S(x)")), parse("P(x,y) & ~S(x)"));
        let f = parse("exists t. (~(S(x) & Q(y,t)) & R(t,z))");
        let g = prenex(&f);
        assert_eq!(g, f);
        same(&f, &g);
        let h = parse("(exists u. P(x,u)) & ~(exists v. (Q(v,y) & exists w. R(w,v)))");
        let p = prenex(&h);
        assert_eq!(p, parse("exists u. (P(x,u) & ~exists v,w. (Q(v,y) & R(w,v)))"));
        same(&h, &p);
        assert_eq!(connectivity_clusters(&h), connectivity_clusters(&p));
    }
}
