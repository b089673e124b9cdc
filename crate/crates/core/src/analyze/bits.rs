//! Packed relations over `d^k` tuples and the canonical form used by the
//! irreducibility search.

use std::cmp::Ordering;

pub(crate) const MAX_POS: usize = 8;
pub(crate) const MAX_DOM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Bits<const W: usize>(pub [u64; W]);

impl<const W: usize> Bits<W> {
    pub const ZERO: Self = Bits([0; W]);

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    #[cfg(test)]
    pub fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    /// The first `n` bits set.
    pub fn prefix(n: usize) -> Self {
        let mut b = Self::ZERO;
        for (w, word) in b.0.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        b
    }

    #[inline]
    pub fn ones(&self) -> Ones<'_, W> {
        Ones {
            bits: self,
            word: 0,
            cur: self.0[0],
        }
    }
}

pub(crate) struct Ones<'a, const W: usize> {
    bits: &'a Bits<W>,
    word: usize,
    cur: u64,
}

impl<const W: usize> Iterator for Ones<'_, W> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.word * 64 + t);
            }
            self.word += 1;
            if self.word >= W {
                return None;
            }
            self.cur = self.bits.0[self.word];
        }
    }
}

/// A relation on `k` open positions. `occ2` marks positions whose variable
/// already occurs twice and so may not be shared again.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Piece<const W: usize> {
    pub k: u8,
    pub occ2: u8,
    pub rel: Bits<W>,
}

impl<const W: usize> Piece<W> {
    pub fn occ1_count(&self) -> usize {
        self.k as usize - self.occ2.count_ones() as usize
    }
}

/// Maps raw position `p` to `pi[p]` and element `e` to `sigma[e]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Transform {
    pub pi: [u8; MAX_POS],
    pub sigma: [u8; MAX_DOM],
}

impl Transform {
    pub fn identity() -> Self {
        let mut t = Transform {
            pi: [0; MAX_POS],
            sigma: [0; MAX_DOM],
        };
        for (i, p) in t.pi.iter_mut().enumerate() {
            *p = i as u8;
        }
        for (i, s) in t.sigma.iter_mut().enumerate() {
            *s = i as u8;
        }
        t
    }
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n)
            .rev()
            .find(|&j| cur[j] > cur[i - 1])
            .expect("a larger suffix element");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

type Key = [u16; MAX_DOM + 1];

/// Index arithmetic for tuples over `d` elements; position `p` is the
/// `p`-th base-`d` digit of the index.
pub(crate) struct Geom {
    pub d: usize,
    pow: [usize; MAX_POS + 1],
    pub sym: Vec<Vec<u8>>,
}

impl Geom {
    pub fn new(d: usize) -> Self {
        assert!((1..=MAX_DOM).contains(&d), "domain size {d} out of range");
        let mut pow = [1usize; MAX_POS + 1];
        for p in 1..=MAX_POS {
            pow[p] = pow[p - 1] * d;
        }
        Self {
            d,
            pow,
            sym: permutations(d),
        }
    }

    #[inline]
    pub fn size(&self, k: usize) -> usize {
        self.pow[k]
    }

    #[inline]
    fn decode(&self, mut idx: usize, k: usize, out: &mut [u8; MAX_POS]) {
        if self.d == 2 {
            for (p, o) in out.iter_mut().enumerate().take(k) {
                *o = (idx >> p & 1) as u8;
            }
        } else {
            for o in out.iter_mut().take(k) {
                *o = (idx % self.d) as u8;
                idx /= self.d;
            }
        }
    }

    #[inline]
    pub fn encode(&self, digits: &[u8]) -> usize {
        digits
            .iter()
            .enumerate()
            .map(|(p, &e)| e as usize * self.pow[p])
            .sum()
    }

    pub fn complement<const W: usize>(&self, p: &Piece<W>) -> Piece<W> {
        let full = Bits::<W>::prefix(self.size(p.k as usize));
        let mut rel = p.rel;
        for (w, f) in rel.0.iter_mut().zip(full.0) {
            *w ^= f;
        }
        Piece { rel, ..*p }
    }

    /// Existential projection of position `pos`.
    pub fn project<const W: usize>(&self, p: &Piece<W>, pos: usize) -> Piece<W> {
        let lo = self.pow[pos];
        let hi = self.pow[pos + 1];
        let mut rel = Bits::ZERO;
        for idx in p.rel.ones() {
            rel.set(idx % lo + idx / hi * lo);
        }
        let low_mask = (1u8 << pos) - 1;
        let occ2 = (p.occ2 & low_mask) | (p.occ2 >> 1 & !low_mask);
        Piece {
            k: p.k - 1,
            occ2,
            rel,
        }
    }

    /// `a ∧ b` where `b`'s position `mb` is identified with `a`'s position
    /// `ma` for each `(ma, mb)` in `matching`. The result lists `a`'s
    /// positions first, then `b`'s unmatched ones in order; matched
    /// positions become occ2.
    pub fn conj<const W: usize>(&self, a: &Piece<W>, b: &Piece<W>, matching: &[(u8, u8)]) -> Piece<W> {
        let ka = a.k as usize;
        let kb = b.k as usize;
        // where each position of b lands in the result
        let mut place = [0usize; MAX_POS];
        let mut matched_b = 0u8;
        for &(ma, mb) in matching {
            place[mb as usize] = ma as usize;
            matched_b |= 1 << mb;
        }
        let mut next = ka;
        let mut occ2 = a.occ2;
        for (q, slot) in place.iter_mut().enumerate().take(kb) {
            if matched_b >> q & 1 == 1 {
                occ2 |= 1 << *slot;
            } else {
                *slot = next;
                if b.occ2 >> q & 1 == 1 {
                    occ2 |= 1 << next;
                }
                next += 1;
            }
        }
        let k = next;
        let mut rel = Bits::ZERO;
        let mut da = [0u8; MAX_POS];
        let mut db = [0u8; MAX_POS];
        let b_rows: Vec<usize> = b.rel.ones().collect();
        for ia in a.rel.ones() {
            self.decode(ia, ka, &mut da);
            'rows: for &ib in &b_rows {
                self.decode(ib, kb, &mut db);
                let mut idx = ia;
                for q in 0..kb {
                    let slot = place[q];
                    if slot < ka {
                        if da[slot] != db[q] {
                            continue 'rows;
                        }
                    } else {
                        idx += db[q] as usize * self.pow[slot];
                    }
                }
                rel.set(idx);
            }
        }
        Piece {
            k: k as u8,
            occ2,
            rel,
        }
    }

    pub fn transform<const W: usize>(&self, p: &Piece<W>, t: &Transform) -> Piece<W> {
        let k = p.k as usize;
        let mut rel = Bits::ZERO;
        let mut digits = [0u8; MAX_POS];
        for idx in p.rel.ones() {
            self.decode(idx, k, &mut digits);
            let mut out = 0;
            for (q, &digit) in digits[..k].iter().enumerate() {
                out += t.sigma[digit as usize] as usize * self.pow[t.pi[q] as usize];
            }
            rel.set(out);
        }
        let mut occ2 = 0u8;
        for q in 0..k {
            if p.occ2 >> q & 1 == 1 {
                occ2 |= 1 << t.pi[q];
            }
        }
        Piece { k: p.k, occ2, rel }
    }

    /// Applies only the element map.
    pub fn rename<const W: usize>(&self, p: &Piece<W>, sigma: &[u8]) -> Piece<W> {
        let mut t = Transform::identity();
        t.sigma[..sigma.len()].copy_from_slice(sigma);
        self.transform(p, &t)
    }

    fn keys<const W: usize>(&self, p: &Piece<W>, sigma: &[u8]) -> [Key; MAX_POS] {
        let k = p.k as usize;
        let mut keys = [[0u16; MAX_DOM + 1]; MAX_POS];
        for (q, key) in keys.iter_mut().enumerate().take(k) {
            key[0] = (p.occ2 >> q & 1) as u16;
        }
        let mut digits = [0u8; MAX_POS];
        for idx in p.rel.ones() {
            self.decode(idx, k, &mut digits);
            for q in 0..k {
                keys[q][1 + sigma[digits[q] as usize] as usize] += 1;
            }
        }
        keys
    }

    /// Least image of `p` under position and element permutations, with a
    /// transform mapping `p` onto it.
    ///
    /// Positions are first ordered by an invariant signature (occ2 flag,
    /// then per-element marginal counts); only permutations within equal
    /// signatures are tried.
    pub fn canonical<const W: usize>(&self, p: &Piece<W>) -> (Piece<W>, Transform) {
        let k = p.k as usize;
        let mut best_sorted: Option<[Key; MAX_POS]> = None;
        let mut sigmas: Vec<(usize, [Key; MAX_POS])> = Vec::new();
        for (s, sigma) in self.sym.iter().enumerate() {
            let keys = self.keys(p, sigma);
            let mut sorted = keys;
            sorted[..k].sort_unstable();
            match best_sorted.as_ref().map(|b| sorted[..k].cmp(&b[..k])) {
                Some(Ordering::Greater) => continue,
                Some(Ordering::Less) | None => {
                    best_sorted = Some(sorted);
                    sigmas.clear();
                }
                Some(Ordering::Equal) => {}
            }
            sigmas.push((s, keys));
        }
        let sorted = best_sorted.expect("the symmetric group is non-empty");
        let mut best: Option<(Piece<W>, Transform)> = None;
        for (s, keys) in sigmas {
            let mut t = Transform::identity();
            t.sigma[..self.d].copy_from_slice(&self.sym[s]);
            let mut used = 0u8;
            self.assign(p, &keys, &sorted, 0, &mut used, &mut t, &mut best);
        }
        best.expect("at least one assignment")
    }

    #[allow(clippy::too_many_arguments)]
    fn assign<const W: usize>(
        &self,
        p: &Piece<W>,
        keys: &[Key; MAX_POS],
        sorted: &[Key; MAX_POS],
        slot: usize,
        used: &mut u8,
        t: &mut Transform,
        best: &mut Option<(Piece<W>, Transform)>,
    ) {
        let k = p.k as usize;
        if slot == k {
            let img = self.transform(p, t);
            if best.as_ref().is_none_or(|(b, _)| img < *b) {
                *best = Some((img, *t));
            }
            return;
        }
        for q in 0..k {
            if *used >> q & 1 == 0 && keys[q] == sorted[slot] {
                *used |= 1 << q;
                t.pi[q] = slot as u8;
                self.assign(p, keys, sorted, slot + 1, used, t, best);
                *used &= !(1 << q);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn piece(g: &Geom, k: usize, rows: &[&[u8]]) -> Piece<1> {
        let mut rel = Bits::ZERO;
        for r in rows {
            rel.set(g.encode(r));
        }
        Piece {
            k: k as u8,
            occ2: 0,
            rel,
        }
    }

    #[test]
    fn permutations_are_lexicographic() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
        assert_eq!(permutations(1), vec![vec![0]]);
    }

    #[test]
    fn projection_and_conjunction() {
        let g = Geom::new(2);
        let id2 = piece(&g, 2, &[&[0, 0], &[1, 1]]);
        let comp = piece(&g, 3, &[&[0, 0, 0], &[1, 1, 1]]);
        // I2(x,y) & I2(y,z) gives I3 with y shared
        let c = g.conj(&id2, &id2, &[(1, 0)]);
        assert_eq!(c.k, 3);
        assert_eq!(c.occ2, 0b010);
        assert_eq!(c.rel, comp.rel);
        let pr = g.project(&c, 1);
        assert_eq!(pr.rel, id2.rel);
        assert_eq!(pr.occ2, 0);
        let all = g.project(&pr, 0);
        assert_eq!(all.rel, piece(&g, 1, &[&[0], &[1]]).rel);
    }

    #[test]
    fn canonical_is_invariant() {
        let g = Geom::new(3);
        let a = piece(&g, 3, &[&[0, 1, 2], &[1, 1, 0], &[2, 0, 0]]);
        let (ca, ta) = g.canonical(&a);
        assert_eq!(g.transform(&a, &ta), ca);
        for pi in permutations(3) {
            for sigma in permutations(3) {
                let mut t = Transform::identity();
                t.pi[..3].copy_from_slice(&pi);
                t.sigma[..3].copy_from_slice(&sigma);
                let b = g.transform(&a, &t);
                assert_eq!(g.canonical(&b).0, ca);
            }
        }
    }

    #[test]
    fn complement_stays_in_range() {
        let g = Geom::new(2);
        let p = piece(&g, 2, &[&[0, 1]]);
        let c = g.complement(&p);
        assert_eq!(c.rel.count(), 3);
        assert_eq!(g.complement(&c), p);
    }
}
