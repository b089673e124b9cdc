//! Runs the teridentity searches at the acceptance budgets and prints the
//! per-level statistics.

use std::time::Instant;

use triad_core::analyze::{irreducibility_search, Fragment};
use triad_core::relcore::{DomainSet, Relation};

fn main() {
    let d = DomainSet::new(["a", "b"]).expect("two elements");
    let i3 = Relation::pluridentity(d, 3).expect("adicity 3");
    for (fragment, atoms, vars) in [(Fragment::Positive, 5, 6), (Fragment::Full, 4, 5)] {
        let start = Instant::now();
        let v = irreducibility_search(&i3, fragment, atoms, vars).expect("search runs");
        println!(
            "{fragment} ({atoms},{vars}): exhausted={} candidates={} per-level={:?} entries={} in {:.1?}",
            v.is_exhausted(),
            v.stats.candidates,
            v.stats.distinct_per_level,
            v.stats.entries,
            start.elapsed()
        );
    }
}
