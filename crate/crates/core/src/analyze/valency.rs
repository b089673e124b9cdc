use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::AnalyzeError;
use crate::exec;
use crate::relcore::{all_tuples, DomainSet, Relation};

/// Adicity of the bond of a `mu`-ad and a `nu`-ad joined on `lambda` pairs
/// of places: `mu + nu - 2 lambda`.
pub fn valency(mu: usize, nu: usize, lambda: usize) -> Result<usize, AnalyzeError> {
    if lambda == 0 || lambda > mu.min(nu) {
        return Err(AnalyzeError::InvalidBond { mu, nu, lambda });
    }
    Ok(mu + nu - 2 * lambda)
}

/// Joins place `pairs[i].0` of `r` with place `pairs[i].1` of `s` and
/// existentially closes every joined place.
pub fn bond_many(r: &Relation, s: &Relation, pairs: &[(usize, usize)]) -> Result<Relation, AnalyzeError> {
    let mu = r.arity();
    let product = r.product(s)?;
    let rows = product
        .tuples()
        .iter()
        .filter(|t| pairs.iter().all(|&(i, j)| t[i] == t[mu + j]))
        .cloned();
    let joined = Relation::from_ids(r.name(), r.domain().clone(), product.arity(), rows)?;
    let closed: Vec<usize> = pairs.iter().flat_map(|&(i, j)| [i, mu + j]).collect();
    let keep: Vec<usize> = (0..joined.arity()).filter(|p| !closed.contains(p)).collect();
    Ok(joined.project_onto(&keep)?)
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ClosureReport {
    pub programs: usize,
    pub bonds: usize,
    pub max_adicity: usize,
    /// Bonds whose result arity differed from [`valency`].
    pub arithmetic_mismatches: usize,
}

/// Random relation of the given arity, each tuple kept with probability 1/2.
pub fn random_relation(rng: &mut impl Rng, domain: &std::sync::Arc<DomainSet>, arity: usize) -> Relation {
    let tuples = all_tuples(domain.len(), arity).filter(|_| rng.gen_bool(0.5));
    Relation::from_ids("Rnd", domain.clone(), arity, tuples).expect("tuples come from the domain")
}

/// Runs `programs` random bonding programs on a domain of `domain_size`
/// elements. Each program starts from one random relation per seed adicity
/// and performs one to four bonds between members of its growing pool.
/// Program `k` draws from its own ChaCha stream, so the report does not
/// depend on the number of worker threads.
pub fn closure_simulation(
    domain_size: usize,
    seed_adicities: &[usize],
    programs: usize,
    rng_seed: u64,
) -> Result<ClosureReport, AnalyzeError> {
    if seed_adicities.is_empty() || seed_adicities.iter().all(|&a| a == 0) {
        return Err(AnalyzeError::InvalidBond {
            mu: 0,
            nu: 0,
            lambda: 1,
        });
    }
    let domain = DomainSet::numbered(domain_size);
    let runs = exec::map_range(programs, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        rng.set_stream(k as u64);
        run_program(&mut rng, &domain, seed_adicities)
    });
    let mut report = ClosureReport {
        programs,
        bonds: 0,
        max_adicity: seed_adicities.iter().copied().max().unwrap_or(0),
        arithmetic_mismatches: 0,
    };
    for run in runs {
        let (bonds, max, mismatches) = run?;
        report.bonds += bonds;
        report.max_adicity = report.max_adicity.max(max);
        report.arithmetic_mismatches += mismatches;
    }
    Ok(report)
}

fn run_program(
    rng: &mut ChaCha8Rng,
    domain: &std::sync::Arc<DomainSet>,
    seeds: &[usize],
) -> Result<(usize, usize, usize), AnalyzeError> {
    let mut pool: Vec<Relation> = seeds.iter().map(|&a| random_relation(rng, domain, a)).collect();
    let mut max = pool.iter().map(Relation::arity).max().unwrap_or(0);
    let mut mismatches = 0;
    let mut bonds = 0;
    let steps = rng.gen_range(1..=4);
    for _ in 0..steps {
        let bondable: Vec<usize> = (0..pool.len()).filter(|&i| pool[i].arity() > 0).collect();
        let Some(&i) = bondable.choose(rng) else { break };
        let j = *bondable.choose(rng).expect("non-empty");
        let (mu, nu) = (pool[i].arity(), pool[j].arity());
        let lambda = rng.gen_range(1..=mu.min(nu));
        let mut left: Vec<usize> = (0..mu).collect();
        let mut right: Vec<usize> = (0..nu).collect();
        left.shuffle(rng);
        right.shuffle(rng);
        let pairs: Vec<(usize, usize)> = left.into_iter().zip(right).take(lambda).collect();
        let result = bond_many(&pool[i], &pool[j], &pairs)?;
        if result.arity() != valency(mu, nu, lambda)? {
            mismatches += 1;
        }
        max = max.max(result.arity());
        bonds += 1;
        pool.push(result);
    }
    Ok((bonds, max, mismatches))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        assert_eq!(valency(2, 2, 1).unwrap(), 2);
        assert_eq!(valency(3, 3, 1).unwrap(), 4);
        assert_eq!(valency(1, 1, 1).unwrap(), 0);
        assert!(valency(2, 1, 2).is_err());
        assert!(valency(2, 2, 0).is_err());
    }

    #[test]
    fn bond_of_identities() {
        let d = DomainSet::new(["a", "b"]).unwrap();
        let i3 = Relation::pluridentity(d.clone(), 3).unwrap();
        let i2 = Relation::pluridentity(d.clone(), 2).unwrap();
        let b = bond_many(&i3, &i3, &[(2, 0)]).unwrap();
        assert_eq!(b, Relation::pluridentity(d.clone(), 4).unwrap());
        let c = bond_many(&i3, &i2, &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(c, Relation::pluridentity(d, 1).unwrap());
    }

    #[test]
    fn monads_and_dyads_stay_closed() {
        let r = closure_simulation(3, &[1, 2], 500, 7).unwrap();
        assert_eq!(r.max_adicity, 2);
        assert_eq!(r.arithmetic_mismatches, 0);
        assert!(r.bonds >= 500);
        assert_eq!(r, closure_simulation(3, &[1, 2], 500, 7).unwrap());
    }

    #[test]
    fn triads_escape() {
        let r = closure_simulation(2, &[3], 50, 1).unwrap();
        assert!(r.max_adicity > 3);
    }
}
