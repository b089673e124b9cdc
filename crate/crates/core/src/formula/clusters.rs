use std::collections::HashMap;

use super::Formula;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

/// Classes of all variables (free and bound) under the transitive closure
/// of "appear together in some atom". Variables are listed in order of first
/// appearance; classes in order of their first member.
pub fn variable_clusters(f: &Formula) -> Vec<Vec<String>> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut order: Vec<String> = Vec::new();
    let mut links: Vec<Vec<usize>> = Vec::new();
    for (_, args) in f.atoms() {
        let mut row = Vec::new();
        for a in args {
            let id = *ids.entry(a.clone()).or_insert_with(|| {
                order.push(a.clone());
                order.len() - 1
            });
            row.push(id);
        }
        links.push(row);
    }
    let mut uf = UnionFind::new(order.len());
    for row in &links {
        for w in row.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut classes: Vec<Vec<String>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (id, name) in order.iter().enumerate() {
        let root = uf.find(id);
        let k = *slot.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[k].push(name.clone());
    }
    classes
}

/// Partition of the free variables into connectivity clusters: two free
/// variables share a cluster when a chain of atoms links them, bound
/// variables acting as connectors. Ordered by first free occurrence.
pub fn connectivity_clusters(f: &Formula) -> Vec<Vec<String>> {
    let free = f.free_vars();
    let mut out: Vec<Vec<String>> = variable_clusters(f)
        .into_iter()
        .map(|class| {
            let mut members: Vec<String> = class.into_iter().filter(|v| free.contains(v)).collect();
            members.sort_by_key(|v| free.iter().position(|w| w == v));
            members
        })
        .filter(|c| !c.is_empty())
        .collect();
    out.sort_by_key(|c| free.iter().position(|w| *w == c[0]));
    out
}
