use serde::Serialize;

use super::degeneracy::degeneracy_factorization;
use super::AnalyzeError;
use crate::explicate::representation_ternarity;
use crate::formula::{rectify, Environment, Formula};
use crate::reduce::{hypostatic_encode, place_vars, verify_reduction, Reduction, ReductionMode};
use crate::relcore::Relation;

#[derive(Debug, Clone, Serialize)]
pub struct BlockBound {
    pub places: Vec<usize>,
    pub small: bool,
    pub lower: usize,
    pub upper: Option<usize>,
}

/// Bounds on the positive ternarity: the least number of triads in a
/// positive subtrivalent representation.
#[derive(Debug, Clone, Serialize)]
pub struct TernarityBounds {
    pub lower: usize,
    /// Absent when some non-degenerate block of adicity three or more is
    /// large: no positive reduction to triads is known for it.
    pub upper: Option<usize>,
    pub exact: Option<usize>,
    pub lower_argument: String,
    pub upper_formula: Option<String>,
    pub blocks: Vec<BlockBound>,
    #[serde(skip)]
    pub certificate: Option<Reduction>,
}

/// Factorizes `r` and bounds each block: adicity at most two costs nothing,
/// a small block of adicity `n >= 3` costs exactly `n - 2` (hypostatic
/// encoding reaches it, the pendant theorem forbids less), a large one has
/// only the lower bound. Products add upper bounds and take the largest
/// lower bound.
pub fn positive_ternarity_bounds(r: &Relation) -> Result<TernarityBounds, AnalyzeError> {
    let factors = degeneracy_factorization(r)?;
    let mut blocks = Vec::new();
    let mut parts = Vec::new();
    let mut env = Environment::new(r.domain().clone());
    for (i, f) in factors.iter().enumerate() {
        let n = f.places.len();
        let name = format!("B{}", i + 1);
        let rel = f.relation.clone().with_name(name.clone());
        let small = rel.is_small();
        let (lower, formula) = if n <= 2 {
            env.bind(name.clone(), rel.clone())?;
            (0, Some(Formula::atom(name, &place_vars(n))))
        } else if small {
            let red = hypostatic_encode(&rel)?;
            for (k, v) in red.env.bindings() {
                env.bind(k.clone(), v.clone())?;
            }
            (n - 2, Some(red.formula))
        } else {
            (n - 2, None)
        };
        let upper = formula.as_ref().map(representation_ternarity);
        blocks.push(BlockBound {
            places: f.places.clone(),
            small,
            lower,
            upper,
        });
        parts.push(formula.map(|g| onto_places(&g, &f.places)));
    }
    let lower = blocks.iter().map(|b| b.lower).max().unwrap_or(0);
    let certificate = parts
        .into_iter()
        .collect::<Option<Vec<Formula>>>()
        .map(|fs| Reduction {
            source: r.clone(),
            env,
            formula: rectify(&Formula::conjoin(fs)),
            vars: place_vars(r.arity()),
            mode: ReductionMode::HypostaticEncode,
        });
    let upper = match &certificate {
        Some(red) => {
            let report = verify_reduction(red);
            if !report.equal {
                return Err(AnalyzeError::WitnessRejected(red.formula.to_string()));
            }
            Some(representation_ternarity(&red.formula))
        }
        None => None,
    };
    let exact = upper.filter(|&u| u == lower);
    let lower_argument = if lower == 0 {
        "monads and dyads need no triads".to_string()
    } else {
        format!(
            "a non-degenerate block of adicity {} needs a connected positive graph with that many \
             pendants, and a subtrivalent connected graph with n pendants has at least n-2 vertices \
             of valency 3",
            lower + 2
        )
    };
    Ok(TernarityBounds {
        lower,
        upper,
        exact,
        lower_argument,
        upper_formula: certificate.as_ref().map(|c| c.formula.to_string()),
        blocks,
        certificate,
    })
}

/// Renames the factor's `x1..xn` to the original place variables.
fn onto_places(f: &Formula, places: &[usize]) -> Formula {
    let mut g = f.clone();
    for k in 0..places.len() {
        g = g.rename_free(&format!("x{}", k + 1), &format!("p_{}", k + 1));
    }
    for (k, &p) in places.iter().enumerate() {
        g = g.rename_free(&format!("p_{}", k + 1), &format!("x{}", p + 1));
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::DomainSet;

    #[test]
    fn identities_are_exact() {
        let d = DomainSet::new(["a", "b"]).unwrap();
        for n in 1..=6 {
            let i = Relation::pluridentity(d.clone(), n).unwrap();
            let b = positive_ternarity_bounds(&i).unwrap();
            assert_eq!(b.exact, Some(n.saturating_sub(2)), "I{n}");
        }
    }

    #[test]
    fn product_with_monad() {
        let d = DomainSet::new(["a", "b"]).unwrap();
        let i3 = Relation::pluridentity(d.clone(), 3).unwrap();
        let i1 = Relation::pluridentity(d, 1).unwrap();
        let r = i3.product(&i1).unwrap();
        let b = positive_ternarity_bounds(&r).unwrap();
        assert_eq!((b.lower, b.upper, b.exact), (1, Some(1), Some(1)));
        assert_eq!(b.blocks.len(), 2);
    }

    #[test]
    fn large_triad_has_no_upper_bound() {
        let d = DomainSet::new(["a", "b"]).unwrap();
        let r = Relation::pluridentity(d, 3).unwrap().complement();
        let b = positive_ternarity_bounds(&r).unwrap();
        assert_eq!(b.lower, 1);
        assert_eq!(b.upper, None);
        assert_eq!(b.exact, None);
    }

    #[test]
    fn two_small_triads() {
        let d = DomainSet::new(["a", "b"]).unwrap();
        let i3 = Relation::pluridentity(d, 3).unwrap();
        let r = i3.product(&i3).unwrap();
        let b = positive_ternarity_bounds(&r).unwrap();
        assert_eq!((b.lower, b.upper), (1, Some(2)));
        assert!(b.certificate.is_some());
    }
}
