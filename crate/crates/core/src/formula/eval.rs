use std::collections::{HashMap, HashSet};

use crate::relcore::{all_tuples, ElemId, Relation, Tuple};

use super::{Environment, Formula, FormulaError};

/// Intermediate result: satisfying assignments over named columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub vars: Vec<String>,
    pub rows: HashSet<Tuple>,
}

impl Table {
    fn truth(value: bool) -> Self {
        let mut rows = HashSet::new();
        if value {
            rows.insert(Vec::new());
        }
        Self {
            vars: Vec::new(),
            rows,
        }
    }

    fn column(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }

    /// Extends to `vars` (a superset, any order), filling new columns freely.
    fn cylindrify(&self, vars: &[String], n: usize) -> Table {
        if vars == self.vars.as_slice() {
            return self.clone();
        }
        let source: Vec<Option<usize>> = vars.iter().map(|v| self.column(v)).collect();
        let fresh: Vec<usize> = (0..vars.len()).filter(|&k| source[k].is_none()).collect();
        let fills: Vec<Tuple> = all_tuples(n, fresh.len()).collect();
        let mut rows = HashSet::with_capacity(self.rows.len() * fills.len());
        for row in &self.rows {
            for fill in &fills {
                let mut out = vec![0; vars.len()];
                for (k, src) in source.iter().enumerate() {
                    if let Some(c) = src {
                        out[k] = row[*c];
                    }
                }
                for (slot, &v) in fresh.iter().zip(fill) {
                    out[*slot] = v;
                }
                rows.insert(out);
            }
        }
        Table {
            vars: vars.to_vec(),
            rows,
        }
    }

    fn join(&self, other: &Table) -> Table {
        let shared: Vec<(usize, usize)> = self
            .vars
            .iter()
            .enumerate()
            .filter_map(|(i, v)| other.column(v).map(|j| (i, j)))
            .collect();
        let extra: Vec<usize> = (0..other.vars.len())
            .filter(|j| !shared.iter().any(|&(_, s)| s == *j))
            .collect();
        let mut vars = self.vars.clone();
        vars.extend(extra.iter().map(|&j| other.vars[j].clone()));

        let mut index: HashMap<Tuple, Vec<&Tuple>> = HashMap::new();
        for row in &other.rows {
            let key = shared.iter().map(|&(_, j)| row[j]).collect();
            index.entry(key).or_default().push(row);
        }
        let mut rows = HashSet::new();
        for row in &self.rows {
            let key: Tuple = shared.iter().map(|&(i, _)| row[i]).collect();
            if let Some(matches) = index.get(&key) {
                for m in matches {
                    let mut out = row.clone();
                    out.extend(extra.iter().map(|&j| m[j]));
                    rows.insert(out);
                }
            }
        }
        Table { vars, rows }
    }

    fn complement(&self, n: usize) -> Table {
        let rows = all_tuples(n, self.vars.len())
            .filter(|t| !self.rows.contains(t))
            .collect();
        Table {
            vars: self.vars.clone(),
            rows,
        }
    }

    fn project_out(&self, var: &str) -> Table {
        let Some(c) = self.column(var) else {
            // vacuous quantifier over a non-empty domain
            return self.clone();
        };
        let mut vars = self.vars.clone();
        vars.remove(c);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.remove(c);
                r
            })
            .collect();
        Table { vars, rows }
    }
}

fn eval_atom(pred: &str, args: &[String], env: &Environment) -> Result<Table, FormulaError> {
    let rel = env.resolve(pred)?;
    if rel.arity() != args.len() {
        return Err(FormulaError::ArityMismatch {
            pred: pred.to_string(),
            expected: rel.arity(),
            found: args.len(),
        });
    }
    let mut vars: Vec<String> = Vec::new();
    let slot: Vec<usize> = args
        .iter()
        .map(|a| match vars.iter().position(|v| v == a) {
            Some(k) => k,
            None => {
                vars.push(a.clone());
                vars.len() - 1
            }
        })
        .collect();
    let mut rows = HashSet::new();
    'tuples: for t in rel.tuples() {
        let mut row: Vec<Option<ElemId>> = vec![None; vars.len()];
        for (place, &k) in slot.iter().enumerate() {
            match row[k] {
                Some(e) if e != t[place] => continue 'tuples,
                _ => row[k] = Some(t[place]),
            }
        }
        rows.insert(
            row.into_iter()
                .map(|e| e.expect("every column is filled"))
                .collect(),
        );
    }
    Ok(Table { vars, rows })
}

fn union_vars<'a>(tables: impl IntoIterator<Item = &'a Table>) -> Vec<String> {
    let mut vars: Vec<String> = Vec::new();
    for t in tables {
        for v in &t.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
    }
    vars
}

/// Evaluates to a table over exactly the free variables of `f`.
pub fn eval_table(f: &Formula, env: &Environment) -> Result<Table, FormulaError> {
    let n = env.domain().len();
    match f {
        Formula::Atom { pred, args } => eval_atom(pred, args, env),
        Formula::And(cs) => {
            let mut acc = Table::truth(true);
            for (k, c) in cs.iter().enumerate() {
                acc = acc.join(&eval_table(c, env)?);
                if acc.rows.is_empty() {
                    // the remaining conjuncts only contribute columns
                    for rest in &cs[k + 1..] {
                        for v in rest.free_vars() {
                            if !acc.vars.contains(&v) {
                                acc.vars.push(v);
                            }
                        }
                    }
                    return Ok(acc);
                }
            }
            Ok(acc)
        }
        Formula::Or(cs) => {
            let parts: Vec<Table> = cs.iter().map(|c| eval_table(c, env)).collect::<Result<_, _>>()?;
            let vars = union_vars(&parts);
            let mut acc = Table {
                vars: vars.clone(),
                rows: HashSet::new(),
            };
            for p in &parts {
                acc.rows.extend(p.cylindrify(&vars, n).rows);
            }
            Ok(acc)
        }
        Formula::Not(b) => Ok(eval_table(b, env)?.complement(n)),
        Formula::Exists { var, body } => Ok(eval_table(body, env)?.project_out(var)),
    }
}

/// Evaluates `f` to the relation of its satisfying assignments, with places
/// in `order` (default: free variables in first-occurrence order).
pub fn eval(f: &Formula, env: &Environment, order: Option<&[String]>) -> Result<Relation, FormulaError> {
    let free = f.free_vars();
    let order: Vec<String> = match order {
        None => free,
        Some(given) => {
            let distinct: HashSet<&String> = given.iter().collect();
            if distinct.len() != given.len()
                || given.len() != free.len()
                || !free.iter().all(|v| distinct.contains(v))
            {
                return Err(FormulaError::OrderMismatch {
                    given: given.to_vec(),
                    free,
                });
            }
            given.to_vec()
        }
    };
    to_relation(eval_table(f, env)?, &order, env)
}

/// Evaluates `f` over the columns `vars`, which must include every free
/// variable; extra columns range over the whole domain.
pub fn eval_over(f: &Formula, env: &Environment, vars: &[String]) -> Result<Relation, FormulaError> {
    let free = f.free_vars();
    let distinct: HashSet<&String> = vars.iter().collect();
    if distinct.len() != vars.len() || !free.iter().all(|v| distinct.contains(v)) {
        return Err(FormulaError::OrderMismatch {
            given: vars.to_vec(),
            free,
        });
    }
    to_relation(eval_table(f, env)?, vars, env)
}

fn to_relation(table: Table, vars: &[String], env: &Environment) -> Result<Relation, FormulaError> {
    let n = env.domain().len();
    let wide = table.cylindrify(vars, n);
    Ok(Relation::from_ids(
        "eval",
        env.domain().clone(),
        vars.len(),
        wide.rows,
    )?)
}
