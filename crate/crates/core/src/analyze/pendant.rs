use std::collections::VecDeque;

use serde::Serialize;

use super::AnalyzeError;
use crate::formula::EGView;

/// Undirected multigraph on vertices `0..n`; loops are not used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        Self { n, edges }
    }

    pub fn star(leaves: usize) -> Self {
        Self::new(leaves + 1, (1..=leaves).map(|l| (0, l)).collect())
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (v - 1, v)).collect())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn pendants(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) == 1).collect()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.bfs(0).iter().all(Option::is_some)
    }

    /// Parent pointers of a breadth-first tree from `root`.
    fn bfs(&self, root: usize) -> Vec<Option<usize>> {
        let adj = self.adjacency();
        let mut parent = vec![None; self.n];
        parent[root] = Some(root);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if parent[w].is_none() {
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        parent
    }
}

impl From<&EGView> for Multigraph {
    fn from(g: &EGView) -> Self {
        Multigraph::new(g.vertices.len(), g.edge_pairs())
    }
}

/// Finds a vertex of valency at least three in a connected graph with at
/// least three pendants.
///
/// Walks from the first pendant to the next two along a breadth-first tree;
/// the last vertex the two paths share is where they diverge. It has a
/// neighbour back towards the first pendant and one towards each of the
/// other two, and it cannot be a pendant itself.
pub fn pendant_theorem_check(g: &Multigraph) -> Result<usize, AnalyzeError> {
    if !g.is_connected() {
        return Err(AnalyzeError::Precondition("graph is not connected".into()));
    }
    let pendants = g.pendants();
    if pendants.len() < 3 {
        return Err(AnalyzeError::Precondition(format!(
            "graph has {} pendant(s), need at least 3",
            pendants.len()
        )));
    }
    let parent = g.bfs(pendants[0]);
    let path_to = |target: usize| {
        let mut path = vec![target];
        let mut v = target;
        while let Some(p) = parent[v].filter(|&p| p != v) {
            path.push(p);
            v = p;
        }
        path.reverse();
        path
    };
    let a = path_to(pendants[1]);
    let b = path_to(pendants[2]);
    let shared = a.iter().zip(&b).take_while(|(x, y)| x == y).count();
    let witness = a[shared - 1];
    if g.degree(witness) < 3 {
        return Err(AnalyzeError::Precondition(format!(
            "divergence vertex {witness} has valency {}",
            g.degree(witness)
        )));
    }
    Ok(witness)
}

/// [`pendant_theorem_check`] on the variable-sharing graph of a formula.
pub fn pendant_check_egview(g: &EGView) -> Result<usize, AnalyzeError> {
    pendant_theorem_check(&Multigraph::from(g))
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct SweepReport {
    pub graphs: usize,
    pub connected: usize,
    pub with_three_pendants: usize,
    /// Connected graphs with three pendants but no vertex of valency 3.
    pub counterexamples: usize,
    /// Cases where the constructive witness was missing or wrong.
    pub witness_failures: usize,
}

impl SweepReport {
    pub fn holds(&self) -> bool {
        self.counterexamples == 0 && self.witness_failures == 0
    }
}

/// Checks every labelled simple graph on up to `max_vertices` vertices, and
/// every multigraph with edge multiplicity at most two on up to four.
pub fn pendant_theorem_sweep(max_vertices: usize) -> SweepReport {
    let mut report = SweepReport::default();
    for n in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let max_mult = if n <= 4 { 2 } else { 1 };
        let shapes = (max_mult as u64 + 1).pow(pairs.len() as u32);
        for code in 0..shapes {
            let mut edges = Vec::new();
            let mut rest = code;
            for &pair in &pairs {
                let mult = rest % (max_mult as u64 + 1);
                rest /= max_mult as u64 + 1;
                edges.extend(std::iter::repeat_n(pair, mult as usize));
            }
            let g = Multigraph::new(n, edges);
            record(&g, &mut report);
        }
    }
    report
}

fn record(g: &Multigraph, report: &mut SweepReport) {
    report.graphs += 1;
    if !g.is_connected() {
        return;
    }
    report.connected += 1;
    if g.pendants().len() < 3 {
        return;
    }
    report.with_three_pendants += 1;
    if (0..g.n).all(|v| g.degree(v) < 3) {
        report.counterexamples += 1;
    }
    match pendant_theorem_check(g) {
        Ok(w) if g.degree(w) >= 3 => {}
        _ => report.witness_failures += 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, to_egraph, Signature};

    #[test]
    fn star_center() {
        assert_eq!(pendant_theorem_check(&Multigraph::star(3)).unwrap(), 0);
        assert_eq!(pendant_theorem_check(&Multigraph::star(5)).unwrap(), 0);
    }

    #[test]
    fn path_is_rejected() {
        assert!(matches!(
            pendant_theorem_check(&Multigraph::path(4)),
            Err(AnalyzeError::Precondition(_))
        ));
        let two = Multigraph::new(4, vec![(0, 1), (2, 3), (1, 2), (0, 1)]);
        assert!(pendant_theorem_check(&two).is_err());
    }

    #[test]
    fn caterpillar_divergence() {
        // 0-1-2-3 with leaves 4 on 1 and 5 on 3
        let g = Multigraph::new(6, vec![(0, 1), (1, 2), (2, 3), (1, 4), (3, 5)]);
        let w = pendant_theorem_check(&g).unwrap();
        assert!(g.degree(w) >= 3);
    }

    #[test]
    fn triple_junction_formula() {
        let f = parse_formula("exists t. (G1(t,x) & G2(t,y) & G3(t,z))", &Signature::inferring()).unwrap();
        let g = to_egraph(&f);
        let w = pendant_check_egview(&g).unwrap();
        assert_eq!(g.junctions(), [w]);
    }

    #[test]
    fn small_sweep() {
        let r = pendant_theorem_sweep(5);
        assert!(r.holds());
        assert!(r.with_three_pendants > 0);
    }
}
