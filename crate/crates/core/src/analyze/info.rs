use super::AnalyzeError;
use crate::relcore::{PlacePartition, Relation};

/// Ties in [`mi_min_cut`] are decided below this difference.
pub const MI_TIE: f64 = 1e-12;

/// Base-2 entropy of the marginal on `places` under the uniform
/// distribution over the tuples of `r`.
pub fn entropy(r: &Relation, places: &[usize]) -> Result<f64, AnalyzeError> {
    if r.is_empty() {
        return Err(AnalyzeError::EmptyRelation);
    }
    let n = r.len() as f64;
    let h = r
        .marginal_counts(places)
        .values()
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum::<f64>();
    Ok(h.max(0.0))
}

/// `H(A) + H(B) - H(A,B)` in bits for the two blocks of `cut`.
pub fn mutual_information(r: &Relation, cut: &PlacePartition) -> Result<f64, AnalyzeError> {
    if cut.blocks().len() != 2 || cut.arity() != r.arity() {
        return Err(AnalyzeError::Precondition(
            "mutual information needs a bipartition of the relation's places".into(),
        ));
    }
    let all: Vec<usize> = (0..r.arity()).collect();
    let joint = entropy(r, &all)?;
    let mi = entropy(r, &cut.blocks()[0])? + entropy(r, &cut.blocks()[1])? - joint;
    Ok(mi.max(0.0))
}

/// The bipartition of least mutual information ("cruelest cut"). Ties go
/// to the lexicographically least block containing place 0.
pub fn mi_min_cut(r: &Relation) -> Result<(f64, PlacePartition), AnalyzeError> {
    if r.arity() < 2 {
        return Err(AnalyzeError::Precondition("need arity at least 2".into()));
    }
    let mut cuts = PlacePartition::all_bipartitions(r.arity());
    cuts.sort_by(|a, b| a.blocks()[0].cmp(&b.blocks()[0]));
    let mut best: Option<(f64, PlacePartition)> = None;
    for cut in cuts {
        let mi = mutual_information(r, &cut)?;
        if best.as_ref().is_none_or(|(b, _)| mi < b - MI_TIE) {
            best = Some((mi, cut));
        }
    }
    Ok(best.expect("arity >= 2 has a bipartition"))
}
