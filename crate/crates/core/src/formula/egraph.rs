use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use super::Formula;

/// Index into [`EGView::cuts`]; cut 0 is the sheet itself.
pub type CutId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexKind {
    /// One occurrence of an atom; hooks are its argument places.
    Predicate { pred: String, arity: usize },
    /// Branch point of a variable with two or more occurrences.
    Junction { var: String },
    /// Loose end of a free variable.
    Pendant { var: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EGVertex {
    pub kind: VertexKind,
    pub cut: CutId,
}

/// A ligature segment. `hook` is the 0-based argument place when `a` is a
/// predicate vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EGEdge {
    pub a: usize,
    pub hook: Option<usize>,
    pub b: usize,
    pub var: String,
}

/// Variable-sharing graph of a formula with its nesting of negation cuts.
///
/// Disjunctions are drawn as `¬(¬A ∧ ¬B ...)`: one cut around the whole
/// disjunction and one inside it around each disjunct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EGView {
    pub vertices: Vec<EGVertex>,
    pub edges: Vec<EGEdge>,
    /// Parent of each cut; `cuts[0]` is the sheet and has no parent.
    pub cuts: Vec<Option<CutId>>,
}

impl EGView {
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.a == v).count() + self.edges.iter().filter(|e| e.b == v).count()
    }

    pub fn pendants(&self) -> Vec<usize> {
        self.vertices_where(|k| matches!(k, VertexKind::Pendant { .. }))
    }

    pub fn junctions(&self) -> Vec<usize> {
        self.vertices_where(|k| matches!(k, VertexKind::Junction { .. }))
    }

    pub fn predicates(&self) -> Vec<usize> {
        self.vertices_where(|k| matches!(k, VertexKind::Predicate { .. }))
    }

    fn vertices_where(&self, keep: impl Fn(&VertexKind) -> bool) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| keep(&self.vertices[v].kind))
            .collect()
    }

    /// Depth of a cut below the sheet.
    pub fn depth(&self, mut cut: CutId) -> usize {
        let mut d = 0;
        while let Some(p) = self.cuts[cut] {
            cut = p;
            d += 1;
        }
        d
    }

    /// Edge list as vertex pairs, for graph algorithms.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.a, e.b)).collect()
    }

    /// Connected components, each sorted, in order of smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![start];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &adj[v] {
                    if !std::mem::replace(&mut seen[w], true) {
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

struct Builder {
    view: EGView,
    occurrences: BTreeMap<usize, Vec<(usize, usize)>>,
    var_ids: HashMap<String, usize>,
    var_order: Vec<String>,
    var_cut: HashMap<String, CutId>,
}

impl Builder {
    fn new_cut(&mut self, parent: CutId) -> CutId {
        self.view.cuts.push(Some(parent));
        self.view.cuts.len() - 1
    }

    fn walk(&mut self, f: &Formula, cut: CutId) {
        match f {
            Formula::Atom { pred, args } => {
                let v = self.view.vertices.len();
                self.view.vertices.push(EGVertex {
                    kind: VertexKind::Predicate {
                        pred: pred.clone(),
                        arity: args.len(),
                    },
                    cut,
                });
                for (place, a) in args.iter().enumerate() {
                    let id = match self.var_ids.get(a) {
                        Some(&id) => id,
                        None => {
                            self.var_order.push(a.clone());
                            self.var_ids.insert(a.clone(), self.var_order.len() - 1);
                            self.var_order.len() - 1
                        }
                    };
                    self.occurrences.entry(id).or_default().push((v, place));
                }
            }
            Formula::And(cs) => cs.iter().for_each(|c| self.walk(c, cut)),
            Formula::Or(cs) => {
                let outer = self.new_cut(cut);
                for c in cs {
                    let inner = self.new_cut(outer);
                    self.walk(c, inner);
                }
            }
            Formula::Not(b) => {
                let inner = self.new_cut(cut);
                self.walk(b, inner);
            }
            Formula::Exists { var, body } => {
                self.var_cut.insert(var.clone(), cut);
                self.walk(body, cut);
            }
        }
    }
}

/// Builds the graph view of a rectified formula: one predicate vertex per
/// atom, one junction per variable occurring at least twice and one pendant
/// per free variable.
pub fn to_egraph(f: &Formula) -> EGView {
    let mut b = Builder {
        view: EGView {
            vertices: Vec::new(),
            edges: Vec::new(),
            cuts: vec![None],
        },
        occurrences: BTreeMap::new(),
        var_ids: HashMap::new(),
        var_order: Vec::new(),
        var_cut: HashMap::new(),
    };
    b.walk(f, 0);
    let free = f.free_vars();
    for (id, var) in b.var_order.clone().into_iter().enumerate() {
        let occ = b.occurrences.remove(&id).unwrap_or_default();
        let home = b.var_cut.get(&var).copied().unwrap_or(0);
        let is_free = free.contains(&var);
        let hub = if occ.len() >= 2 {
            let j = b.view.vertices.len();
            b.view.vertices.push(EGVertex {
                kind: VertexKind::Junction { var: var.clone() },
                cut: home,
            });
            for &(v, place) in &occ {
                b.view.edges.push(EGEdge {
                    a: v,
                    hook: Some(place),
                    b: j,
                    var: var.clone(),
                });
            }
            Some((j, None))
        } else {
            occ.first().map(|&(v, place)| (v, Some(place)))
        };
        if is_free {
            let p = b.view.vertices.len();
            b.view.vertices.push(EGVertex {
                kind: VertexKind::Pendant { var: var.clone() },
                cut: 0,
            });
            if let Some((v, hook)) = hub {
                b.view.edges.push(EGEdge {
                    a: v,
                    hook,
                    b: p,
                    var,
                });
            }
        }
    }
    b.view
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: cuts become nested clusters, predicates boxes,
/// junctions points and pendants labelled circles. Hooks are numbered from 1.
pub fn to_dot(g: &EGView) -> String {
    let mut children: Vec<Vec<CutId>> = vec![Vec::new(); g.cuts.len()];
    for (c, parent) in g.cuts.iter().enumerate() {
        if let Some(p) = parent {
            children[*p].push(c);
        }
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); g.cuts.len()];
    for (v, vx) in g.vertices.iter().enumerate() {
        members[vx.cut].push(v);
    }
    let mut out = String::from("graph eg {\n  node [fontname=\"Helvetica\"];\n");
    fn emit(
        out: &mut String,
        g: &EGView,
        cut: CutId,
        children: &[Vec<CutId>],
        members: &[Vec<usize>],
        indent: usize,
    ) {
        let pad = "  ".repeat(indent);
        for &v in &members[cut] {
            let line = match &g.vertices[v].kind {
                VertexKind::Predicate { pred, .. } => {
                    format!("v{v} [shape=box, label=\"{}\"];", escape(pred))
                }
                VertexKind::Junction { var } => {
                    format!("v{v} [shape=point, xlabel=\"{}\"];", escape(var))
                }
                VertexKind::Pendant { var } => {
                    format!("v{v} [shape=circle, label=\"{}\"];", escape(var))
                }
            };
            let _ = writeln!(out, "{pad}{line}");
        }
        for &c in &children[cut] {
            let _ = writeln!(out, "{pad}subgraph cluster_cut{c} {{");
            let _ = writeln!(out, "{pad}  style=rounded; label=\"\";");
            emit(out, g, c, children, members, indent + 1);
            let _ = writeln!(out, "{pad}}}");
        }
    }
    emit(&mut out, g, 0, &children, &members, 1);
    for e in &g.edges {
        match e.hook {
            Some(h) => {
                let _ = writeln!(out, "  v{} -- v{} [label=\"{}\"];", e.a, e.b, h + 1);
            }
            None => {
                let _ = writeln!(out, "  v{} -- v{};", e.a, e.b);
            }
        }
    }
    out.push_str("}\n");
    out
}
