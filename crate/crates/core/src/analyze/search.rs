//! Bounded exhaustive search for triad-free definitions of a relation.
//!
//! The search runs over relations rather than formulas. A *piece* is the
//! relation defined by a subformula on its open variable positions, where
//! each open variable occurs once (occ1) or twice (occ2) so far. A formula is
//! triad-free when its explication contains no atom of adicity three or
//! more: bound variables occur at most twice, free variables exactly once.
//! Pieces are built level by level in the number of atoms:
//!
//! * Positive: `piece ∧ atom` with some positions identified, then `∃`.
//!   Identified positions are projected at once since nothing else may use
//!   them.
//! * Full: `piece ∧ piece` over every split of the atom count and every
//!   element permutation of the right operand, closed under `¬` and `∃`.
//!
//! Pieces are stored up to position and element permutation, keeping the
//! smallest variable count seen per class. A target is definable within the
//! budget iff its class is reached.

use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::Serialize;

use super::bits::{Bits, Geom, Piece, Transform, MAX_DOM, MAX_POS};
use super::AnalyzeError;
use crate::exec;
use crate::formula::{delta_name, Environment, Formula};
use crate::reduce::{place_vars, verify_reduction, Reduction, ReductionMode};
use crate::relcore::{DomainSet, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fragment {
    /// `∃, ∧`
    Positive,
    /// `∃, ∧, ∨, ¬`
    Full,
}

impl std::fmt::Display for Fragment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Fragment::Positive => "positive",
            Fragment::Full => "full",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_atoms: usize,
    pub max_vars: usize,
    /// Stop (incomplete) once this many raw candidates were generated.
    pub max_candidates: Option<u64>,
}

impl SearchBudget {
    pub fn new(max_atoms: usize, max_vars: usize) -> Self {
        Self {
            max_atoms,
            max_vars,
            max_candidates: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Raw candidate relations generated before deduplication.
    pub candidates: u64,
    /// New relation classes reached at each atom count (index 0 is one atom).
    pub distinct_per_level: Vec<usize>,
    /// Stored (class, variable count) entries.
    pub entries: usize,
    pub levels_completed: usize,
    /// False when the candidate cap cut the search short.
    pub complete: bool,
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub reduction: Reduction,
    pub atoms: usize,
    pub vars: usize,
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    ReducedBy(Box<Witness>),
    /// No definition within the budget. `complete` is false when the
    /// candidate cap stopped the enumeration, so nothing is claimed.
    ExhaustedNoWitness {
        complete: bool,
    },
}

#[derive(Debug, Clone)]
pub struct SearchVerdict {
    pub outcome: SearchOutcome,
    pub fragment: Fragment,
    pub budget: SearchBudget,
    pub stats: SearchStats,
}

impl SearchVerdict {
    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            SearchOutcome::ReducedBy(w) => Some(w),
            SearchOutcome::ExhaustedNoWitness { .. } => None,
        }
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self.outcome, SearchOutcome::ExhaustedNoWitness { complete: true })
    }
}

/// Default cap on the domain size accepted by the search.
pub const DEFAULT_MAX_DOMAIN: usize = 4;

/// Searches for a triad-free definition of `r` using predicates of adicity
/// at most two.
pub fn irreducibility_search(
    r: &Relation,
    fragment: Fragment,
    max_atoms: usize,
    max_vars: usize,
) -> Result<SearchVerdict, AnalyzeError> {
    search_with(
        r,
        fragment,
        SearchBudget::new(max_atoms, max_vars),
        DEFAULT_MAX_DOMAIN,
    )
}

/// [`irreducibility_search`] with an explicit budget and domain cap. Stops
/// at the first atom count whose level contains the target.
pub fn search_with(
    r: &Relation,
    fragment: Fragment,
    budget: SearchBudget,
    max_domain: usize,
) -> Result<SearchVerdict, AnalyzeError> {
    if r.arity() > budget.max_vars {
        return Ok(SearchVerdict {
            outcome: SearchOutcome::ExhaustedNoWitness { complete: true },
            fragment,
            budget,
            stats: SearchStats {
                complete: true,
                ..SearchStats::default()
            },
        });
    }
    let mut table = DefinabilityTable::new(r.domain().clone(), fragment, budget, max_domain)?;
    let mut outcome = None;
    while table.build_level() {
        if let Some(w) = table.find(r)? {
            outcome = Some(SearchOutcome::ReducedBy(Box::new(w)));
            break;
        }
    }
    let stats = table.stats();
    Ok(SearchVerdict {
        outcome: outcome.unwrap_or(SearchOutcome::ExhaustedNoWitness {
            complete: stats.complete,
        }),
        fragment,
        budget,
        stats,
    })
}

/// Every relation class definable within a budget, built level by level.
pub struct DefinabilityTable {
    inner: Box<dyn Table>,
    domain: Arc<DomainSet>,
}

impl DefinabilityTable {
    pub fn new(
        domain: Arc<DomainSet>,
        fragment: Fragment,
        budget: SearchBudget,
        max_domain: usize,
    ) -> Result<Self, AnalyzeError> {
        let d = domain.len();
        if d > max_domain.min(MAX_DOM) {
            return Err(AnalyzeError::DomainTooLarge {
                size: d,
                max: max_domain.min(MAX_DOM),
            });
        }
        if budget.max_vars > MAX_POS {
            return Err(AnalyzeError::BudgetTooLarge(format!(
                "at most {MAX_POS} variables are supported"
            )));
        }
        let bits = d.pow(budget.max_vars as u32);
        let inner: Box<dyn Table> = match bits {
            0..=64 => Box::new(Engine::<1>::new(domain.clone(), fragment, budget)),
            65..=256 => Box::new(Engine::<4>::new(domain.clone(), fragment, budget)),
            257..=1024 => Box::new(Engine::<16>::new(domain.clone(), fragment, budget)),
            1025..=4096 => Box::new(Engine::<64>::new(domain.clone(), fragment, budget)),
            _ => {
                return Err(AnalyzeError::BudgetTooLarge(format!(
                    "{d}^{} tuples per relation exceeds 4096",
                    budget.max_vars
                )))
            }
        };
        Ok(Self { inner, domain })
    }

    /// Builds the next level. False once the budget or the candidate cap
    /// is reached.
    pub fn build_level(&mut self) -> bool {
        self.inner.build_level()
    }

    pub fn build_all(&mut self) {
        while self.build_level() {}
    }

    /// A verified witness for `r` among the levels built so far.
    pub fn find(&self, r: &Relation) -> Result<Option<Witness>, AnalyzeError> {
        if r.domain().elements() != self.domain.elements() {
            return Err(AnalyzeError::Rel(crate::relcore::RelError::DomainMismatch));
        }
        let Some(w) = self.inner.find(r) else {
            return Ok(None);
        };
        let report = verify_reduction(&w.reduction);
        if !report.equal || report.max_atom_adicity > 2 {
            return Err(AnalyzeError::WitnessRejected(w.reduction.formula.to_string()));
        }
        Ok(Some(w))
    }

    pub fn stats(&self) -> SearchStats {
        self.inner.stats()
    }
}

trait Table: Send {
    fn build_level(&mut self) -> bool;
    fn find(&self, r: &Relation) -> Option<Witness>;
    fn stats(&self) -> SearchStats;
}

#[derive(Debug, Clone, Copy)]
struct Match {
    len: u8,
    pairs: [(u8, u8); MAX_POS],
}

impl Match {
    fn pairs(&self) -> &[(u8, u8)] {
        &self.pairs[..self.len as usize]
    }
}

#[derive(Debug, Clone, Copy)]
enum Prov<const W: usize> {
    Atom(Piece<W>),
    Not(u32),
    Exists(u32, u8),
    And { l: u32, r: u32, sigma: u8, m: Match },
    AndAtom { l: u32, atom: u32, m: Match },
}

#[derive(Debug, Clone, Copy)]
struct Entry<const W: usize> {
    piece: Piece<W>,
    atoms: u8,
    vars: u8,
    prov: Prov<W>,
    tf: Transform,
}

struct Cand<const W: usize> {
    piece: Piece<W>,
    tf: Transform,
    vars: u8,
    prov: Prov<W>,
}

const CHUNK: usize = 16;
const BATCH: usize = 1024;

struct Engine<const W: usize> {
    g: Geom,
    domain: Arc<DomainSet>,
    fragment: Fragment,
    budget: SearchBudget,
    entries: Vec<Entry<W>>,
    index: FxHashMap<Piece<W>, u32>,
    levels: Vec<Vec<u32>>,
    atoms: Vec<(Piece<W>, u8)>,
    /// `matchings[ka][kb][m]`: partial injections of size `m`.
    matchings: Vec<Vec<Vec<Vec<Match>>>>,
    stats: SearchStats,
    stopped: bool,
}

fn all_matchings(ka: usize, kb: usize) -> Vec<Vec<Match>> {
    let mut by_size = vec![Vec::new(); ka.min(kb) + 1];
    fn rec(a: usize, ka: usize, kb: usize, used: u8, cur: &mut Match, out: &mut Vec<Vec<Match>>) {
        if a == ka {
            out[cur.len as usize].push(*cur);
            return;
        }
        rec(a + 1, ka, kb, used, cur, out);
        for b in 0..kb {
            if used >> b & 1 == 0 {
                cur.pairs[cur.len as usize] = (a as u8, b as u8);
                cur.len += 1;
                rec(a + 1, ka, kb, used | 1 << b, cur, out);
                cur.len -= 1;
            }
        }
    }
    let mut cur = Match {
        len: 0,
        pairs: [(0, 0); MAX_POS],
    };
    rec(0, ka, kb, 0, &mut cur, &mut by_size);
    by_size
}

impl<const W: usize> Engine<W> {
    fn new(domain: Arc<DomainSet>, fragment: Fragment, budget: SearchBudget) -> Self {
        let d = domain.len();
        let g = Geom::new(d);
        let mut atoms: Vec<(Piece<W>, u8)> = Vec::new();
        let nullary = |rel: u64| {
            let mut b = Bits::ZERO;
            b.0[0] = rel;
            b
        };
        for rel in [0, 1] {
            atoms.push((
                Piece {
                    k: 0,
                    occ2: 0,
                    rel: nullary(rel),
                },
                0,
            ));
        }
        if budget.max_vars >= 1 {
            for mask in 0..1u64 << d {
                atoms.push((
                    Piece {
                        k: 1,
                        occ2: 0,
                        rel: nullary(mask),
                    },
                    1,
                ));
            }
        }
        if budget.max_vars >= 2 {
            for mask in 0..1u64 << (d * d) {
                atoms.push((
                    Piece {
                        k: 2,
                        occ2: 0,
                        rel: nullary(mask),
                    },
                    2,
                ));
            }
        }
        if fragment == Fragment::Full && budget.max_vars >= 1 {
            // R(t,t): a monad on a position whose variable is used up
            for mask in 0..1u64 << d {
                atoms.push((
                    Piece {
                        k: 1,
                        occ2: 1,
                        rel: nullary(mask),
                    },
                    1,
                ));
            }
        }
        let kmax = budget.max_vars;
        let matchings = (0..=kmax)
            .map(|ka| (0..=kmax).map(|kb| all_matchings(ka, kb)).collect())
            .collect();
        Self {
            g,
            domain,
            fragment,
            budget,
            entries: Vec::new(),
            index: FxHashMap::default(),
            levels: vec![Vec::new()],
            atoms,
            matchings,
            stats: SearchStats {
                complete: true,
                ..SearchStats::default()
            },
            stopped: false,
        }
    }

    fn canon(&self, raw: &Piece<W>, vars: u8, prov: Prov<W>) -> Option<Cand<W>> {
        let (piece, tf) = self.g.canonical(raw);
        match self.index.get(&piece) {
            Some(&id) if self.entries[id as usize].vars <= vars => None,
            _ => Some(Cand {
                piece,
                tf,
                vars,
                prov,
            }),
        }
    }

    /// Merges candidates in order; returns the ids that are new or improved.
    fn offer_all(&mut self, level: u8, batches: Vec<Vec<Cand<W>>>, fresh: &mut usize) -> Vec<u32> {
        let mut touched = Vec::new();
        for c in batches.into_iter().flatten() {
            match self.index.get(&c.piece) {
                Some(&id) => {
                    let e = &mut self.entries[id as usize];
                    if e.vars <= c.vars {
                        continue;
                    }
                    if e.atoms == level {
                        e.vars = c.vars;
                        e.prov = c.prov;
                        e.tf = c.tf;
                        touched.push(id);
                        continue;
                    }
                }
                None => *fresh += 1,
            }
            let id = self.entries.len() as u32;
            self.entries.push(Entry {
                piece: c.piece,
                atoms: level,
                vars: c.vars,
                prov: c.prov,
                tf: c.tf,
            });
            self.index.insert(c.piece, id);
            self.levels[level as usize].push(id);
            touched.push(id);
        }
        touched.sort_unstable();
        touched.dedup();
        touched
    }

    fn over_cap(&mut self) -> bool {
        if let Some(cap) = self.budget.max_candidates {
            if self.stats.candidates > cap {
                self.stats.complete = false;
                self.stopped = true;
            }
        }
        self.stopped
    }

    fn closure(&mut self, level: u8, mut frontier: Vec<u32>, fresh: &mut usize) {
        while !frontier.is_empty() && !self.over_cap() {
            let this = &*self;
            let results = exec::map_chunks(&frontier, CHUNK, |ids| {
                let mut out = Vec::new();
                let mut generated = 0u64;
                for &id in ids {
                    let e = &this.entries[id as usize];
                    if this.fragment == Fragment::Full {
                        generated += 1;
                        out.extend(this.canon(&this.g.complement(&e.piece), e.vars, Prov::Not(id)));
                    }
                    for q in 0..e.piece.k {
                        generated += 1;
                        let p = this.g.project(&e.piece, q as usize);
                        out.extend(this.canon(&p, e.vars, Prov::Exists(id, q)));
                    }
                }
                (generated, out)
            });
            let mut batches = Vec::with_capacity(results.len());
            for (n, out) in results {
                self.stats.candidates += n;
                batches.push(out);
            }
            frontier = self.offer_all(level, batches, fresh);
        }
    }

    fn level_one(&mut self) -> Vec<Vec<Cand<W>>> {
        let mut out = Vec::new();
        for (p, vars) in &self.atoms {
            self.stats.candidates += 1;
            out.extend(self.canon(p, *vars, Prov::Atom(*p)));
        }
        vec![out]
    }

    fn positive_step(&self, lefts: &[u32]) -> Vec<(u64, Vec<Cand<W>>)> {
        let max_vars = self.budget.max_vars;
        exec::map_chunks(lefts, CHUNK, |ids| {
            let mut out = Vec::new();
            let mut generated = 0u64;
            for &l in ids {
                let a = &self.entries[l as usize];
                let ka = a.piece.k as usize;
                for (ti, (t, tv)) in self.atoms.iter().enumerate() {
                    let kt = t.k as usize;
                    let need = (a.vars as usize + *tv as usize).saturating_sub(max_vars);
                    for (m, group) in self.matchings[ka][kt].iter().enumerate().skip(need) {
                        let vars = (a.vars as usize + *tv as usize - m) as u8;
                        for mt in group {
                            generated += 1;
                            let mut p = self.g.conj(&a.piece, t, mt.pairs());
                            for q in (0..p.k as usize).rev() {
                                if p.occ2 >> q & 1 == 1 {
                                    p = self.g.project(&p, q);
                                }
                            }
                            let prov = Prov::AndAtom {
                                l,
                                atom: ti as u32,
                                m: *mt,
                            };
                            out.extend(self.canon(&p, vars, prov));
                        }
                    }
                }
            }
            (generated, out)
        })
    }

    /// `lefts` is a batch starting at `offset` in its level list; when both
    /// operands come from the same level only pairs with the right operand
    /// not before the left one are formed.
    fn full_step(
        &self,
        lefts: &[u32],
        offset: usize,
        rights: &[u32],
        same: bool,
    ) -> Vec<(u64, Vec<Cand<W>>)> {
        let max_vars = self.budget.max_vars;
        // rights under every element permutation, computed once
        let renamed: Vec<Vec<Piece<W>>> = self
            .g
            .sym
            .iter()
            .map(|s| {
                rights
                    .iter()
                    .map(|&r| self.g.rename(&self.entries[r as usize].piece, s))
                    .collect()
            })
            .collect();
        let positions: Vec<usize> = (0..lefts.len()).collect();
        exec::map_chunks(&positions, CHUNK, |chunk| {
            let mut out = Vec::new();
            let mut generated = 0u64;
            for &li in chunk {
                let l = lefts[li];
                let a = &self.entries[l as usize];
                let ka = a.piece.occ1_count();
                let start = if same { offset + li } else { 0 };
                for ri in start..rights.len() {
                    let r = rights[ri];
                    let b = &self.entries[r as usize];
                    let kb = b.piece.occ1_count();
                    let need = (a.vars as usize + b.vars as usize).saturating_sub(max_vars);
                    for (s, bs) in renamed.iter().enumerate() {
                        let bp = &bs[ri];
                        for (m, group) in self.matchings[ka][kb].iter().enumerate().skip(need) {
                            let vars = (a.vars as usize + b.vars as usize - m) as u8;
                            for mt in group {
                                generated += 1;
                                let p = self.g.conj(&a.piece, bp, mt.pairs());
                                let prov = Prov::And {
                                    l,
                                    r,
                                    sigma: s as u8,
                                    m: *mt,
                                };
                                out.extend(self.canon(&p, vars, prov));
                            }
                        }
                    }
                }
            }
            (generated, out)
        })
    }

    /// Runs `step` over `lefts` in fixed-size batches, merging each batch
    /// before the next so memory stays bounded.
    fn run_batches<F>(&mut self, level: u8, lefts: &[u32], fresh: &mut usize, step: F) -> Vec<u32>
    where
        F: Fn(&Self, &[u32], usize) -> Vec<(u64, Vec<Cand<W>>)>,
    {
        let mut touched = Vec::new();
        for (b, batch) in lefts.chunks(BATCH).enumerate() {
            if self.over_cap() {
                break;
            }
            let results = step(self, batch, b * BATCH);
            let mut outs = Vec::with_capacity(results.len());
            for (n, out) in results {
                self.stats.candidates += n;
                outs.push(out);
            }
            touched.extend(self.offer_all(level, outs, fresh));
        }
        touched.sort_unstable();
        touched.dedup();
        touched
    }

    fn rebuild(&self, id: u32, names: &mut VarGen) -> (WNode, Vec<u32>) {
        let e = &self.entries[id as usize];
        let (mut node, raw) = match e.prov {
            Prov::Atom(p) => self.atom_node(&p, names),
            Prov::Not(c) => {
                let (n, pos) = self.rebuild(c, names);
                (WNode::Not(Box::new(n)), pos)
            }
            Prov::Exists(c, q) => {
                let (n, mut pos) = self.rebuild(c, names);
                let v = pos.remove(q as usize);
                (WNode::Exists(v, Box::new(n)), pos)
            }
            Prov::And { l, r, sigma, m } => {
                let (nl, pl) = self.rebuild(l, names);
                let (mut nr, pr) = self.rebuild(r, names);
                nr.map_elements(&self.g.sym[sigma as usize]);
                let (pos, renames) = join_positions(pl, &mut Vec::new(), pr, m.pairs());
                for (from, to) in renames {
                    nr.rename_var(from, to);
                }
                (WNode::And(vec![nl, nr]), pos)
            }
            Prov::AndAtom { l, atom, m } => {
                let (nl, pl) = self.rebuild(l, names);
                let (nt, pt) = self.atom_node(&self.atoms[atom as usize].0, names);
                let mut matched = Vec::new();
                let (pos, renames) = join_positions(pl, &mut matched, pt, m.pairs());
                let mut node = WNode::And(vec![nl, nt]);
                for (from, to) in renames {
                    node.rename_var(from, to);
                }
                let pos: Vec<u32> = pos.into_iter().filter(|v| !matched.contains(v)).collect();
                for v in matched.into_iter().rev() {
                    node = WNode::Exists(v, Box::new(node));
                }
                (node, pos)
            }
        };
        node.map_elements(&e.tf.sigma[..self.g.d]);
        let mut pos = vec![0; raw.len()];
        for (q, v) in raw.into_iter().enumerate() {
            pos[e.tf.pi[q] as usize] = v;
        }
        (node, pos)
    }

    fn atom_node(&self, p: &Piece<W>, names: &mut VarGen) -> (WNode, Vec<u32>) {
        let k = p.k as usize;
        if p.occ2 != 0 {
            let v = names.fresh();
            let tuples = p.rel.ones().map(|e| vec![e as u32, e as u32]).collect();
            return (
                WNode::Atom {
                    arity: 2,
                    tuples,
                    args: vec![v, v],
                },
                vec![v],
            );
        }
        let vars: Vec<u32> = (0..k).map(|_| names.fresh()).collect();
        let tuples = p
            .rel
            .ones()
            .map(|idx| {
                let mut digits = [0u8; MAX_POS];
                let mut rest = idx;
                for dgt in digits.iter_mut().take(k) {
                    *dgt = (rest % self.g.d) as u8;
                    rest /= self.g.d;
                }
                digits[..k].iter().map(|&x| x as u32).collect()
            })
            .collect();
        (
            WNode::Atom {
                arity: k,
                tuples,
                args: vars.clone(),
            },
            vars,
        )
    }
}

/// Result positions of a conjunction: left positions, then the right's
/// unmatched ones. Returns the positions plus renames of matched right
/// variables onto left ones; matched left variables are pushed to `matched`.
fn join_positions(
    pl: Vec<u32>,
    matched: &mut Vec<u32>,
    pr: Vec<u32>,
    pairs: &[(u8, u8)],
) -> (Vec<u32>, Vec<(u32, u32)>) {
    let mut renames = Vec::new();
    let mut is_matched = vec![false; pr.len()];
    for &(a, b) in pairs {
        renames.push((pr[b as usize], pl[a as usize]));
        matched.push(pl[a as usize]);
        is_matched[b as usize] = true;
    }
    let mut pos = pl;
    pos.extend(pr.iter().zip(&is_matched).filter(|(_, &m)| !m).map(|(&v, _)| v));
    (pos, renames)
}

impl<const W: usize> Table for Engine<W> {
    fn build_level(&mut self) -> bool {
        let level = self.levels.len();
        if self.stopped || level > self.budget.max_atoms {
            return false;
        }
        self.levels.push(Vec::new());
        let lv = level as u8;
        let mut fresh = 0usize;
        let touched = if level == 1 {
            let c = self.level_one();
            self.offer_all(lv, c, &mut fresh)
        } else {
            match self.fragment {
                Fragment::Positive => {
                    let lefts = self.levels[level - 1].clone();
                    self.run_batches(lv, &lefts, &mut fresh, |e, ids, _| e.positive_step(ids))
                }
                Fragment::Full => {
                    let mut touched = Vec::new();
                    for i in 1..=level / 2 {
                        let j = level - i;
                        let lefts = self.levels[i].clone();
                        let rights = self.levels[j].clone();
                        let same = i == j;
                        touched.extend(self.run_batches(lv, &lefts, &mut fresh, |e, ids, offset| {
                            e.full_step(ids, offset, &rights, same)
                        }));
                    }
                    touched.sort_unstable();
                    touched.dedup();
                    touched
                }
            }
        };
        self.closure(lv, touched, &mut fresh);
        self.stats.distinct_per_level.push(fresh);
        self.stats.entries = self.entries.len();
        if self.stopped {
            return false;
        }
        self.stats.levels_completed = level;
        log::debug!(
            "level {level}: {fresh} new classes, {} candidates so far",
            self.stats.candidates
        );
        true
    }

    fn find(&self, r: &Relation) -> Option<Witness> {
        let k = r.arity();
        if k > self.budget.max_vars {
            return None;
        }
        let mut rel = Bits::<W>::ZERO;
        for t in r.tuples() {
            let digits: Vec<u8> = t.iter().map(|&e| e as u8).collect();
            rel.set(self.g.encode(&digits));
        }
        let target = Piece {
            k: k as u8,
            occ2: 0,
            rel,
        };
        let (canon, tf) = self.g.canonical(&target);
        let &id = self.index.get(&canon)?;
        let e = &self.entries[id as usize];
        let mut names = VarGen::default();
        let (mut node, pos) = self.rebuild(id, &mut names);
        let mut sigma_inv = [0u8; MAX_DOM];
        for (x, &s) in tf.sigma[..self.g.d].iter().enumerate() {
            sigma_inv[s as usize] = x as u8;
        }
        node.map_elements(&sigma_inv[..self.g.d]);
        let free: Vec<u32> = (0..k).map(|q| pos[tf.pi[q] as usize]).collect();
        let (formula, env) = node.into_formula(&free, &self.domain);
        Some(Witness {
            reduction: Reduction {
                source: r.clone(),
                env,
                formula,
                vars: place_vars(k),
                mode: ReductionMode::Search,
            },
            atoms: e.atoms as usize,
            vars: e.vars as usize,
        })
    }

    fn stats(&self) -> SearchStats {
        self.stats.clone()
    }
}

#[derive(Default)]
struct VarGen {
    next: u32,
}

impl VarGen {
    fn fresh(&mut self) -> u32 {
        self.next += 1;
        self.next
    }
}

#[derive(Debug, Clone)]
enum WNode {
    Atom {
        arity: usize,
        tuples: Vec<Vec<u32>>,
        args: Vec<u32>,
    },
    And(Vec<WNode>),
    Not(Box<WNode>),
    Exists(u32, Box<WNode>),
}

impl WNode {
    fn map_elements(&mut self, sigma: &[u8]) {
        match self {
            WNode::Atom { tuples, .. } => {
                for t in tuples {
                    for e in t.iter_mut() {
                        *e = sigma[*e as usize] as u32;
                    }
                }
            }
            WNode::And(cs) => cs.iter_mut().for_each(|c| c.map_elements(sigma)),
            WNode::Not(b) | WNode::Exists(_, b) => b.map_elements(sigma),
        }
    }

    fn rename_var(&mut self, from: u32, to: u32) {
        match self {
            WNode::Atom { args, .. } => {
                for a in args {
                    if *a == from {
                        *a = to;
                    }
                }
            }
            WNode::And(cs) => cs.iter_mut().for_each(|c| c.rename_var(from, to)),
            WNode::Not(b) | WNode::Exists(_, b) => b.rename_var(from, to),
        }
    }

    fn into_formula(self, free: &[u32], domain: &Arc<DomainSet>) -> (Formula, Environment) {
        let mut names: FxHashMap<u32, String> = FxHashMap::default();
        for (q, &v) in free.iter().enumerate() {
            names.insert(v, format!("x{}", q + 1));
        }
        let mut preds: Vec<(usize, Vec<Vec<u32>>, String)> = Vec::new();
        let mut env = Environment::new(domain.clone());
        let mut bound = 0;
        let f = self.convert(&mut names, &mut bound, &mut preds, &mut env, domain);
        (f, env)
    }

    fn convert(
        self,
        names: &mut FxHashMap<u32, String>,
        bound: &mut usize,
        preds: &mut Vec<(usize, Vec<Vec<u32>>, String)>,
        env: &mut Environment,
        domain: &Arc<DomainSet>,
    ) -> Formula {
        match self {
            WNode::Atom {
                arity,
                mut tuples,
                args,
            } => {
                tuples.sort();
                tuples.dedup();
                let name = match preds.iter().find(|(a, t, _)| *a == arity && *t == tuples) {
                    Some((_, _, n)) => n.clone(),
                    None => {
                        let name = builtin_for(arity, &tuples, domain).unwrap_or_else(|| {
                            let n = format!("W{}", preds.iter().filter(|p| p.2.starts_with('W')).count() + 1);
                            let rel = Relation::from_ids(n.clone(), domain.clone(), arity, tuples.clone())
                                .expect("search relations stay inside the domain");
                            env.bind(n.clone(), rel).expect("same domain");
                            n
                        });
                        preds.push((arity, tuples, name.clone()));
                        name
                    }
                };
                let args: Vec<String> = args.iter().map(|v| var_name(names, bound, *v)).collect();
                Formula::Atom { pred: name, args }
            }
            WNode::And(cs) => {
                let mut parts = Vec::new();
                for c in cs {
                    match c.convert(names, bound, preds, env, domain) {
                        Formula::And(inner) => parts.extend(inner),
                        other => parts.push(other),
                    }
                }
                Formula::conjoin(parts)
            }
            WNode::Not(b) => Formula::not(b.convert(names, bound, preds, env, domain)),
            WNode::Exists(v, b) => {
                let name = var_name(names, bound, v);
                Formula::exists(name, b.convert(names, bound, preds, env, domain))
            }
        }
    }
}

fn var_name(names: &mut FxHashMap<u32, String>, bound: &mut usize, v: u32) -> String {
    names
        .entry(v)
        .or_insert_with(|| {
            *bound += 1;
            format!("t{bound}")
        })
        .clone()
}

fn builtin_for(arity: usize, tuples: &[Vec<u32>], domain: &Arc<DomainSet>) -> Option<String> {
    let d = domain.len() as u32;
    let identity = |n: usize| (0..d).map(|e| vec![e; n]).collect::<Vec<_>>();
    match arity {
        1 | 2 if tuples == identity(arity).as_slice() => Some(format!("I{arity}")),
        1 if tuples.len() == 1 => delta_name(domain.name(tuples[0][0])),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explicate::explicate;
    use crate::relcore::Relation;

    fn d2() -> Arc<DomainSet> {
        DomainSet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn product_of_monads_is_found() {
        let d = d2();
        let i1 = Relation::pluridentity(d.clone(), 1).unwrap();
        let r = i1.product(&i1).unwrap().product(&i1).unwrap();
        let v = irreducibility_search(&r, Fragment::Positive, 3, 3).unwrap();
        let w = v.witness().expect("degenerate triad has a witness");
        assert!(verify_reduction(&w.reduction).equal);
        assert!(w.atoms <= 3);
    }

    #[test]
    fn dyad_times_monad_in_both_fragments() {
        let d = d2();
        let i2 = Relation::pluridentity(d.clone(), 2).unwrap();
        let delta = Relation::delta(d, "b").unwrap();
        let r = i2.product(&delta).unwrap();
        for fragment in [Fragment::Positive, Fragment::Full] {
            let v = irreducibility_search(&r, fragment, 3, 4).unwrap();
            let w = v.witness().unwrap();
            assert_eq!(w.atoms, 2, "{}", w.reduction.formula);
            let ex = explicate(&w.reduction.formula).unwrap();
            assert_eq!(ex.triad_count, 0);
        }
    }

    #[test]
    fn teridentity_small_budget_is_exhausted() {
        let d = d2();
        let i3 = Relation::pluridentity(d, 3).unwrap();
        let v = irreducibility_search(&i3, Fragment::Positive, 3, 5).unwrap();
        assert!(v.is_exhausted());
        assert_eq!(v.stats.levels_completed, 3);
        let v = irreducibility_search(&i3, Fragment::Full, 2, 4).unwrap();
        assert!(v.is_exhausted());
    }

    #[test]
    fn full_fragment_finds_negated_products() {
        // the complement of a product is not a product but is definable
        let d = d2();
        let a = Relation::delta(d.clone(), "a").unwrap();
        let r = a.product(&a).unwrap().product(&a).unwrap().complement();
        let v = irreducibility_search(&r, Fragment::Full, 3, 3).unwrap();
        let w = v.witness().unwrap();
        assert!(verify_reduction(&w.reduction).equal);
        let pos = irreducibility_search(&r, Fragment::Positive, 3, 3).unwrap();
        assert!(pos.is_exhausted());
    }

    #[test]
    fn candidate_cap_reports_incomplete() {
        let d = d2();
        let i3 = Relation::pluridentity(d, 3).unwrap();
        let budget = SearchBudget {
            max_atoms: 3,
            max_vars: 5,
            max_candidates: Some(100),
        };
        let v = search_with(&i3, Fragment::Full, budget, 4).unwrap();
        assert!(matches!(
            v.outcome,
            SearchOutcome::ExhaustedNoWitness { complete: false }
        ));
        assert!(!v.is_exhausted());
    }

    #[test]
    fn domain_cap_is_enforced() {
        let d = DomainSet::numbered(5);
        let r = Relation::pluridentity(d, 3).unwrap();
        assert!(matches!(
            irreducibility_search(&r, Fragment::Positive, 2, 3),
            Err(AnalyzeError::DomainTooLarge { .. })
        ));
    }
}
