use std::collections::BTreeSet;

use proptest::prelude::*;
use triad_core::analyze::{
    degeneracy_factorization, mutual_information, recombine, splits_on, DefinabilityTable, Fragment,
    SearchBudget,
};
use triad_core::exec::with_jobs;
use triad_core::reduce::{delta_decomposition, hypostatic_encode, hypostatic_extend, verify_reduction};
use triad_core::relcore::{all_tuples, DomainSet, PlacePartition, Relation};

fn relation(d: usize, arity: usize, mask: &[bool]) -> Relation {
    let domain = DomainSet::numbered(d);
    let rows = all_tuples(d, arity)
        .zip(mask)
        .filter(|(_, &keep)| keep)
        .map(|(t, _)| t);
    Relation::from_ids("R", domain, arity, rows).unwrap()
}

fn any_relation(max_d: usize, arities: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Relation> {
    (2..=max_d, arities).prop_flat_map(|(d, a)| {
        proptest::collection::vec(any::<bool>(), d.pow(a as u32)).prop_map(move |m| relation(d, a, &m))
    })
}

fn small_relation() -> impl Strategy<Value = Relation> {
    (2usize..=8, 3usize..=5).prop_flat_map(|(d, a)| {
        proptest::collection::vec(proptest::collection::vec(0..d as u32, a), 0..=d)
            .prop_map(move |rows| Relation::from_ids("R", DomainSet::numbered(d), a, rows).unwrap())
    })
}

/// Product of a relation with a monad placed at `slot`.
fn with_monad(r: &Relation, monad: &[bool], slot: usize) -> Relation {
    let rows = all_tuples(r.domain().len(), 1)
        .zip(monad)
        .filter(|(_, &keep)| keep)
        .map(|(t, _)| t);
    let m = Relation::from_ids("M", r.domain().clone(), 1, rows).unwrap();
    let p = r.product(&m).unwrap();
    let n = r.arity();
    let mut order: Vec<usize> = (0..n).collect();
    order.insert(slot.min(n), n);
    p.permute(&order).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factors_recombine(r in any_relation(3, 2..=4)) {
        let factors = degeneracy_factorization(&r).unwrap();
        let back = recombine(&factors).unwrap();
        prop_assert_eq!(back.tuples(), r.tuples());
        if !r.is_empty() {
            for f in &factors {
                if f.places.len() > 1 {
                    prop_assert_eq!(degeneracy_factorization(&f.relation).unwrap().len(), 1);
                }
            }
        }
    }

    #[test]
    fn a_monad_factor_is_found(r in any_relation(3, 2..=3), monad in proptest::collection::vec(any::<bool>(), 3), slot in 0usize..4) {
        let p = with_monad(&r, &monad, slot);
        prop_assume!(!p.is_empty());
        let slot = slot.min(r.arity());
        let factors = degeneracy_factorization(&p).unwrap();
        prop_assert!(factors.iter().any(|f| f.places == vec![slot]));
    }

    #[test]
    fn mutual_information_vanishes_exactly_on_splits(r in any_relation(3, 2..=4)) {
        prop_assume!(!r.is_empty());
        for cut in PlacePartition::all_bipartitions(r.arity()) {
            let mi = mutual_information(&r, &cut).unwrap();
            prop_assert!(mi >= -1e-12);
            prop_assert_eq!(mi.abs() <= 1e-9, splits_on(&r, &cut).unwrap());
        }
    }

    #[test]
    fn hypostatic_encoding_verifies(r in small_relation()) {
        let red = hypostatic_encode(&r).unwrap();
        let report = verify_reduction(&red);
        prop_assert!(report.equal && report.lower_adicity);
        prop_assert_eq!(red.env.domain().len(), r.domain().len());
    }

    #[test]
    fn hypostatic_extension_verifies(r in any_relation(3, 3..=4)) {
        prop_assert!(verify_reduction(&hypostatic_extend(&r).unwrap()).equal);
    }

    #[test]
    fn delta_decomposition_verifies(r in any_relation(3, 1..=3)) {
        prop_assert!(verify_reduction(&delta_decomposition(&r).unwrap()).equal);
    }
}

fn triad_mask(r: &Relation) -> u8 {
    all_tuples(2, 3)
        .enumerate()
        .filter(|(_, t)| r.contains(t))
        .fold(0, |m, (k, _)| m | 1 << k)
}

fn all_triads() -> Vec<Relation> {
    (0..=255u8)
        .map(|m| relation(2, 3, &(0..8).map(|k| m >> k & 1 == 1).collect::<Vec<_>>()))
        .collect()
}

fn found_by_table(fragment: Fragment, atoms: usize, vars: usize) -> BTreeSet<u8> {
    let mut t = DefinabilityTable::new(
        DomainSet::numbered(2),
        fragment,
        SearchBudget::new(atoms, vars),
        4,
    )
    .unwrap();
    t.build_all();
    all_triads()
        .iter()
        .filter(|r| t.find(r).unwrap().is_some())
        .map(triad_mask)
        .collect()
}

/// Every triad on {0,1} defined by `∃t..(A_1 ∧ ... ∧ A_k)` with at most
/// `atoms` atoms of adicity 0..2 over at most `vars` variables, where
/// `x1,x2,x3` occur once and every bound variable at most twice.
fn positive_oracle(atoms: usize, vars: usize) -> BTreeSet<u8> {
    let mut out = BTreeSet::new();
    let pool = vars;
    for k in 1..=atoms {
        for arities in (0..3usize.pow(k as u32))
            .map(|c| (0..k).map(|i| c / 3usize.pow(i as u32) % 3).collect::<Vec<_>>())
        {
            let slots: usize = arities.iter().sum();
            for code in 0..pool.pow(slots as u32) {
                let args: Vec<usize> = (0..slots).map(|i| code / pool.pow(i as u32) % pool).collect();
                let mut occ = vec![0; pool];
                for &a in &args {
                    occ[a] += 1;
                }
                if occ[..3].iter().any(|&c| c != 1) || occ[3..].iter().any(|&c| c > 2) {
                    continue;
                }
                // bound variables named in order of first use
                let bound: Vec<usize> = args.iter().copied().filter(|&a| a >= 3).collect();
                let mut seen = Vec::new();
                for b in bound {
                    if !seen.contains(&b) {
                        seen.push(b);
                    }
                }
                if seen.iter().enumerate().any(|(i, &b)| b != 3 + i) {
                    continue;
                }
                let nbound = seen.len();
                let choices: Vec<usize> = arities.iter().map(|&a| 1 << (1 << a)).collect();
                let total: usize = choices.iter().product();
                for pick in 0..total {
                    let mut rest = pick;
                    let rels: Vec<usize> = choices
                        .iter()
                        .map(|&c| {
                            let r = rest % c;
                            rest /= c;
                            r
                        })
                        .collect();
                    let mut mask = 0u8;
                    for x in 0..8usize {
                        let xs = [x & 1, x >> 1 & 1, x >> 2 & 1];
                        let holds = (0..1usize << nbound).any(|b| {
                            let value = |v: usize| if v < 3 { xs[v] } else { b >> (v - 3) & 1 };
                            let mut slot = 0;
                            arities.iter().zip(&rels).all(|(&a, &rel)| {
                                let idx = (0..a).fold(0, |acc, i| acc | value(args[slot + i]) << i);
                                slot += a;
                                rel >> idx & 1 == 1
                            })
                        });
                        if holds {
                            mask |= 1 << x;
                        }
                    }
                    out.insert(mask);
                }
            }
        }
    }
    out
}

/// The masks above index tuples as `x1 + 2 x2 + 4 x3`; `all_tuples` lists
/// them with the first place most significant.
fn reindex(masks: &BTreeSet<u8>) -> BTreeSet<u8> {
    let tuples: Vec<Vec<u32>> = all_tuples(2, 3).collect();
    masks
        .iter()
        .map(|&m| {
            tuples.iter().enumerate().fold(0u8, |acc, (k, t)| {
                let x = (t[0] + 2 * t[1] + 4 * t[2]) as usize;
                acc | ((m >> x & 1) << k)
            })
        })
        .collect()
}

#[test]
fn positive_search_matches_brute_force() {
    for (atoms, vars) in [(2, 4), (3, 5)] {
        let oracle = reindex(&positive_oracle(atoms, vars));
        let table = found_by_table(Fragment::Positive, atoms, vars);
        assert_eq!(table, oracle, "budget ({atoms},{vars})");
    }
}

#[test]
fn full_search_at_two_atoms_reaches_products_and_their_complements() {
    let mut oracle: BTreeSet<u8> = reindex(&positive_oracle(2, 4));
    let complements: Vec<u8> = oracle.iter().map(|m| !m).collect();
    oracle.extend(complements);
    assert_eq!(found_by_table(Fragment::Full, 2, 4), oracle);
}

#[test]
fn table_is_independent_of_thread_count() {
    let build = |jobs| {
        with_jobs(jobs, || {
            let mut t =
                DefinabilityTable::new(DomainSet::numbered(2), Fragment::Full, SearchBudget::new(3, 4), 4)
                    .unwrap();
            t.build_all();
            let found: Vec<String> = all_triads()
                .iter()
                .filter_map(|r| t.find(r).unwrap().map(|w| w.reduction.formula.to_string()))
                .collect();
            (t.stats(), found)
        })
    };
    assert_eq!(build(1), build(3));
}
