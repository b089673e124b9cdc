use serde::Serialize;

use super::AnalyzeError;
use crate::relcore::{PlacePartition, RelError, Relation};

/// One block of a product decomposition: the places it covers (0-based,
/// ascending) and the projection of the relation onto them.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub places: Vec<usize>,
    pub relation: Relation,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorSummary {
    pub places: Vec<usize>,
    pub tuples: usize,
}

impl Factor {
    pub fn summary(&self) -> FactorSummary {
        FactorSummary {
            places: self.places.clone(),
            tuples: self.relation.len(),
        }
    }
}

/// Whether `r` equals the product of its projections on the two blocks.
///
/// The product always contains `r`, so comparing sizes suffices.
pub fn splits_on(r: &Relation, cut: &PlacePartition) -> Result<bool, AnalyzeError> {
    if cut.blocks().len() != 2 || cut.arity() != r.arity() {
        return Err(AnalyzeError::Rel(RelError::BadPartition(
            "need a bipartition of the relation's places".into(),
        )));
    }
    let a = r.project_onto(&cut.blocks()[0])?;
    let b = r.project_onto(&cut.blocks()[1])?;
    Ok(a.len() * b.len() == r.len())
}

/// Finest decomposition of `r` into a product of relations on disjoint
/// place blocks. A single block means `r` is non-degenerate. Blocks are
/// ordered lexicographically by their places.
pub fn degeneracy_factorization(r: &Relation) -> Result<Vec<Factor>, AnalyzeError> {
    if r.arity() == 0 {
        return Err(AnalyzeError::Rel(RelError::ZeroAdicity));
    }
    let mut out = Vec::new();
    split(r, &(0..r.arity()).collect::<Vec<_>>(), &mut out)?;
    out.sort_by(|a, b| a.places.cmp(&b.places));
    for (i, f) in out.iter_mut().enumerate() {
        let name = format!("{}_F{}", r.name(), i + 1);
        f.relation = f.relation.clone().with_name(name);
    }
    Ok(out)
}

/// `sub` is `r` restricted to `places`, in that order.
fn split(r: &Relation, places: &[usize], out: &mut Vec<Factor>) -> Result<(), AnalyzeError> {
    let sub = r.project_onto(places)?;
    for cut in PlacePartition::all_bipartitions(places.len()) {
        if splits_on(&sub, &cut)? {
            for block in cut.blocks() {
                let mapped: Vec<usize> = block.iter().map(|&p| places[p]).collect();
                split(r, &mapped, out)?;
            }
            return Ok(());
        }
    }
    out.push(Factor {
        places: places.to_vec(),
        relation: sub,
    });
    Ok(())
}

pub fn is_degenerate(r: &Relation) -> Result<bool, AnalyzeError> {
    Ok(degeneracy_factorization(r)?.len() > 1)
}

/// Multiplies factors back together in the original place order.
pub fn recombine(factors: &[Factor]) -> Result<Relation, AnalyzeError> {
    let mut iter = factors.iter();
    let first = iter
        .next()
        .ok_or_else(|| AnalyzeError::Rel(RelError::BadPartition("no factors".into())))?;
    let mut product = first.relation.clone();
    let mut order: Vec<usize> = first.places.clone();
    for f in iter {
        product = product.product(&f.relation)?;
        order.extend(&f.places);
    }
    // place k of the result is the product column holding original place k
    let mut inverse = vec![0; order.len()];
    for (col, &p) in order.iter().enumerate() {
        inverse[p] = col;
    }
    Ok(product.permute(&inverse)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::DomainSet;

    #[test]
    fn teridentity_is_not_degenerate() {
        for n in 2..=4 {
            let d = DomainSet::numbered(n);
            let i3 = Relation::pluridentity(d, 3).unwrap();
            let f = degeneracy_factorization(&i3).unwrap();
            assert_eq!(f.len(), 1);
            assert_eq!(f[0].places, [0, 1, 2]);
        }
    }

    #[test]
    fn full_square_splits_into_monads() {
        let d = DomainSet::new(["a", "b"]).unwrap();
        let sq = Relation::full("S", d.clone(), 2);
        let f = degeneracy_factorization(&sq).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].relation, Relation::pluridentity(d.clone(), 1).unwrap());
        assert_eq!(recombine(&f).unwrap(), sq);
    }

    #[test]
    fn dyad_times_monad() {
        let d = DomainSet::new(["a", "b"]).unwrap();
        let r = Relation::from_names(
            "R",
            d.clone(),
            3,
            [["a", "a", "b"], ["a", "a", "a"], ["b", "b", "a"], ["b", "b", "b"]],
        )
        .unwrap();
        let f = degeneracy_factorization(&r).unwrap();
        let places: Vec<_> = f.iter().map(|x| x.places.clone()).collect();
        assert_eq!(places, [vec![0, 1], vec![2]]);
        assert_eq!(f[0].relation, Relation::pluridentity(d.clone(), 2).unwrap());
        assert_eq!(f[1].relation, Relation::pluridentity(d, 1).unwrap());
    }

    #[test]
    fn interleaved_blocks_recombine() {
        let d = DomainSet::new(["a", "b", "c"]).unwrap();
        // places 0 and 2 form an identity, place 1 is free of them
        let i2 = Relation::pluridentity(d.clone(), 2).unwrap();
        let m = Relation::from_names("M", d.clone(), 1, [["b"], ["c"]]).unwrap();
        let r = i2.product(&m).unwrap().permute(&[0, 2, 1]).unwrap();
        let f = degeneracy_factorization(&r).unwrap();
        let places: Vec<_> = f.iter().map(|x| x.places.clone()).collect();
        assert_eq!(places, [vec![0, 2], vec![1]]);
        assert_eq!(recombine(&f).unwrap(), r);
    }
}
