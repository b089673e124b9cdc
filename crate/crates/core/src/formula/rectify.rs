use std::collections::HashMap;

use super::{check_rectified, Formula, NameGen};

/// α-renames bound variables so that each is quantified once and none
/// shares a name with a free variable. Already rectified input is returned
/// unchanged.
pub fn rectify(f: &Formula) -> Formula {
    let mut names = NameGen::new(f.free_vars());
    walk(f, &mut names, &mut HashMap::new())
}

fn walk(f: &Formula, names: &mut NameGen, scope: &mut HashMap<String, String>) -> Formula {
    match f {
        Formula::Atom { pred, args } => Formula::Atom {
            pred: pred.clone(),
            args: args
                .iter()
                .map(|a| scope.get(a).cloned().unwrap_or_else(|| a.clone()))
                .collect(),
        },
        Formula::And(cs) => Formula::And(cs.iter().map(|c| walk(c, names, scope)).collect()),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| walk(c, names, scope)).collect()),
        Formula::Not(b) => Formula::not(walk(b, names, scope)),
        Formula::Exists { var, body } => {
            let new = names.fresh_or_same(var);
            let outer = scope.insert(var.clone(), new.clone());
            let body = walk(body, names, scope);
            match outer {
                Some(o) => scope.insert(var.clone(), o),
                None => scope.remove(var),
            };
            Formula::exists(new, body)
        }
    }
}

pub fn is_rectified(f: &Formula) -> bool {
    check_rectified(f).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str, v: &str) -> Formula {
        Formula::atom(name, &[v])
    }

    #[test]
    fn renames_repeated_quantifier() {
        let f = Formula::and(vec![
            Formula::exists("x", p("P", "x")),
            Formula::exists("x", p("Q", "x")),
        ]);
        let g = rectify(&f);
        assert_eq!(
            g,
            Formula::and(vec![
                Formula::exists("x", p("P", "x")),
                Formula::exists("x1", p("Q", "x1")),
            ])
        );
        assert!(is_rectified(&g));
        assert!(!is_rectified(&f));
    }

    #[test]
    fn idempotent_on_rectified_input() {
        let f = Formula::exists(
            "t",
            Formula::and(vec![
                Formula::atom("P", &["x", "t"]),
                Formula::atom("Q", &["t", "y"]),
            ]),
        );
        assert_eq!(rectify(&f), f);
    }

    #[test]
    fn shadowing_and_free_clash() {
        let f = Formula::exists(
            "x",
            Formula::and(vec![p("P", "x"), Formula::exists("x", p("Q", "x"))]),
        );
        let g = rectify(&f);
        assert_eq!(
            g,
            Formula::exists(
                "x",
                Formula::and(vec![p("P", "x"), Formula::exists("x1", p("Q", "x1"))]),
            )
        );
        let h = Formula::and(vec![Formula::exists("x", p("P", "x")), p("Q", "x")]);
        let r = rectify(&h);
        assert_eq!(r.free_vars(), ["x"]);
        assert!(is_rectified(&r));
    }
}
