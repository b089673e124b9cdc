use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

/// First-order formula over the `{∃, ∧, ∨, ¬}` fragment.
///
/// Multi-variable quantification is nested single `Exists`. There is no
/// universal quantifier: `∀x φ` is `Not(Exists(x, Not(φ)))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom { pred: String, args: Vec<String> },
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Exists { var: String, body: Box<Formula> },
}

impl Formula {
    pub fn atom<S: AsRef<str>>(pred: impl Into<String>, args: &[S]) -> Self {
        Formula::Atom {
            pred: pred.into(),
            args: args.iter().map(|a| a.as_ref().to_string()).collect(),
        }
    }

    pub fn and(children: Vec<Formula>) -> Self {
        Formula::And(children)
    }

    pub fn or(children: Vec<Formula>) -> Self {
        Formula::Or(children)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(body: Formula) -> Self {
        Formula::Not(Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::Exists {
            var: var.into(),
            body: Box::new(body),
        }
    }

    /// `∃v1 ∃v2 ... body`, outermost first.
    pub fn exists_many<S: AsRef<str>>(vars: &[S], body: Formula) -> Self {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v.as_ref(), acc))
    }

    /// `∀v body`, written with negations.
    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::not(Formula::exists(var, Formula::not(body)))
    }

    /// Conjunction that avoids wrapping a single child.
    pub fn conjoin(mut children: Vec<Formula>) -> Self {
        if children.len() == 1 {
            children.pop().unwrap()
        } else {
            Formula::And(children)
        }
    }

    /// Disjunction that avoids wrapping a single child.
    pub fn disjoin(mut children: Vec<Formula>) -> Self {
        if children.len() == 1 {
            children.pop().unwrap()
        } else {
            Formula::Or(children)
        }
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, seen: &mut HashSet<String>, out: &mut Vec<String>) {
            match f {
                Formula::Atom { args, .. } => {
                    for a in args {
                        if !bound.contains(a) && seen.insert(a.clone()) {
                            out.push(a.clone());
                        }
                    }
                }
                Formula::And(cs) | Formula::Or(cs) => {
                    for c in cs {
                        walk(c, bound, seen, out);
                    }
                }
                Formula::Not(b) => walk(b, bound, seen, out),
                Formula::Exists { var, body } => {
                    bound.push(var.clone());
                    walk(body, bound, seen, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut HashSet::new(), &mut out);
        out
    }

    /// Quantified variables in order of their quantifiers (pre-order).
    pub fn bound_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Exists { var, .. } = f {
                out.push(var.clone());
            }
        });
        out
    }

    /// Every variable name appearing anywhere, free, bound or quantified.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom { args, .. } => out.extend(args.iter().cloned()),
            Formula::Exists { var, .. } => {
                out.insert(var.clone());
            }
            _ => {}
        });
        out
    }

    /// Number of argument places filled by each variable name. Meaningful
    /// per variable only for rectified formulas.
    pub fn occurrences(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        self.visit(&mut |f| {
            if let Formula::Atom { args, .. } = f {
                for a in args {
                    *out.entry(a.clone()).or_insert(0) += 1;
                }
            }
        });
        out
    }

    /// Atoms in left-to-right order.
    pub fn atoms(&self) -> Vec<(&str, &[String])> {
        fn walk<'a>(f: &'a Formula, out: &mut Vec<(&'a str, &'a [String])>) {
            match f {
                Formula::Atom { pred, args } => out.push((pred, args)),
                Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| walk(c, out)),
                Formula::Not(b) | Formula::Exists { body: b, .. } => walk(b, out),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    pub fn atom_count(&self) -> usize {
        self.atoms().len()
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        f(self);
        match self {
            Formula::Atom { .. } => {}
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.visit(f)),
            Formula::Not(b) | Formula::Exists { body: b, .. } => b.visit(f),
        }
    }

    /// Renames free occurrences of `from` to `to`.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        match self {
            Formula::Atom { pred, args } => Formula::Atom {
                pred: pred.clone(),
                args: args
                    .iter()
                    .map(|a| if a == from { to.to_string() } else { a.clone() })
                    .collect(),
            },
            Formula::And(cs) => Formula::And(cs.iter().map(|c| c.rename_free(from, to)).collect()),
            Formula::Or(cs) => Formula::Or(cs.iter().map(|c| c.rename_free(from, to)).collect()),
            Formula::Not(b) => Formula::not(b.rename_free(from, to)),
            Formula::Exists { var, body } if var == from => Formula::Exists {
                var: var.clone(),
                body: body.clone(),
            },
            Formula::Exists { var, body } => Formula::exists(var.clone(), body.rename_free(from, to)),
        }
    }

    /// Rebuilds the formula bottom-up with `f` applied to every atom.
    pub fn map_atoms<F: FnMut(&str, &[String]) -> Formula>(&self, f: &mut F) -> Formula {
        match self {
            Formula::Atom { pred, args } => f(pred, args),
            Formula::And(cs) => Formula::And(cs.iter().map(|c| c.map_atoms(f)).collect()),
            Formula::Or(cs) => Formula::Or(cs.iter().map(|c| c.map_atoms(f)).collect()),
            Formula::Not(b) => Formula::not(b.map_atoms(f)),
            Formula::Exists { var, body } => Formula::exists(var.clone(), body.map_atoms(f)),
        }
    }

    /// Rendering with `∃ ∧ ∨ ¬`.
    pub fn pretty(&self) -> String {
        let mut s = String::new();
        write_formula(&mut s, self, Style::Unicode).expect("writing to a String");
        s
    }

    fn is_binary(&self) -> bool {
        matches!(self, Formula::And(cs) | Formula::Or(cs) if cs.len() != 1)
    }
}

#[derive(Clone, Copy)]
enum Style {
    Ascii,
    Unicode,
}

fn write_formula(out: &mut impl fmt::Write, f: &Formula, style: Style) -> fmt::Result {
    let (and, or, not, ex) = match style {
        Style::Ascii => (" & ", " | ", "~", "exists "),
        Style::Unicode => (" ∧ ", " ∨ ", "¬", "∃"),
    };
    match f {
        Formula::Atom { pred, args } => write!(out, "{}({})", pred, args.join(",")),
        Formula::And(cs) | Formula::Or(cs) => {
            if cs.is_empty() {
                // not expressible in the text grammar
                return out.write_str(if matches!(f, Formula::And(_)) {
                    "TRUE"
                } else {
                    "FALSE"
                });
            }
            let sep = if matches!(f, Formula::And(_)) { and } else { or };
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.write_str(sep)?;
                }
                write_operand(out, c, style)?;
            }
            Ok(())
        }
        Formula::Not(b) => {
            out.write_str(not)?;
            write_operand(out, b, style)
        }
        Formula::Exists { var, body } => {
            match style {
                Style::Ascii => write!(out, "{ex}{var}. ")?,
                Style::Unicode => write!(out, "{ex}{var} ")?,
            }
            write_operand(out, body, style)
        }
    }
}

fn write_operand(out: &mut impl fmt::Write, f: &Formula, style: Style) -> fmt::Result {
    if f.is_binary() {
        out.write_char('(')?;
        write_formula(out, f, style)?;
        out.write_char(')')
    } else {
        write_formula(out, f, style)
    }
}

/// ASCII rendering in the parser's grammar.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, Style::Ascii)
    }
}

/// Hands out variable names that do not clash with anything seen so far.
#[derive(Debug, Clone, Default)]
pub struct NameGen {
    used: HashSet<String>,
}

impl NameGen {
    pub fn new<I: IntoIterator<Item = String>>(used: I) -> Self {
        Self {
            used: used.into_iter().collect(),
        }
    }

    pub fn for_formula(f: &Formula) -> Self {
        Self::new(f.all_vars())
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    /// `base1`, `base2`, ... (or `base_1` when `base` ends in a digit).
    pub fn fresh(&mut self, base: &str) -> String {
        let sep = if base.ends_with(|c: char| c.is_ascii_digit()) {
            "_"
        } else {
            ""
        };
        (1..)
            .map(|k| format!("{base}{sep}{k}"))
            .find(|n| !self.used.contains(n))
            .inspect(|n| {
                self.used.insert(n.clone());
            })
            .expect("unbounded suffixes")
    }

    /// `base` itself when unused, otherwise a fresh variant.
    pub fn fresh_or_same(&mut self, base: &str) -> String {
        if self.used.insert(base.to_string()) {
            base.to_string()
        } else {
            self.fresh(base)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str, args: &[&str]) -> Formula {
        Formula::atom(name, args)
    }

    #[test]
    fn free_vars_first_occurrence() {
        let f = Formula::or(vec![p("P", &["x", "y"]), p("Q", &["y", "z"])]);
        assert_eq!(f.free_vars(), ["x", "y", "z"]);
        let g = Formula::exists(
            "x",
            Formula::and(vec![
                p("G1", &["x", "a"]),
                p("G2", &["x", "b"]),
                p("G3", &["x", "c"]),
            ]),
        );
        assert_eq!(g.free_vars(), ["a", "b", "c"]);
        assert!(Formula::exists("x", p("P", &["x"])).free_vars().is_empty());
    }

    #[test]
    fn display_is_parenthesized() {
        let f = Formula::exists(
            "t",
            Formula::and(vec![
                Formula::not(Formula::and(vec![p("P", &["x"]), p("Q", &["y", "t"])])),
                p("R", &["t", "z"]),
            ]),
        );
        assert_eq!(f.to_string(), "exists t. (~(P(x) & Q(y,t)) & R(t,z))");
        assert_eq!(f.pretty(), "∃t (¬(P(x) ∧ Q(y,t)) ∧ R(t,z))");
    }

    #[test]
    fn fresh_names() {
        let mut g = NameGen::new(["t".to_string(), "t1".to_string()]);
        assert_eq!(g.fresh("t"), "t2");
        assert_eq!(g.fresh("y1"), "y1_1");
        assert_eq!(g.fresh_or_same("s"), "s");
        assert_eq!(g.fresh_or_same("s"), "s1");
    }
}
