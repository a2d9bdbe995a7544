//! Batch verification over many seeded points. With the `parallel` feature
//! the work is spread over a rayon pool; without it everything runs in order.

use serde::Serialize;

use crate::error::Result;
use crate::field::Field;
use crate::grassmann::{random_point, DEFAULT_MAX_TRIES};
use crate::report::Report;
use crate::verify::{run_check, Check, ReductionOptions};

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Reports of one seeded point.
#[derive(Clone, Debug, Serialize)]
pub struct SeedResult {
    pub seed: u64,
    pub reports: Vec<Report>,
}

impl SeedResult {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|r| !r.failed())
    }
}

fn one_seed(n: usize, field: &Field, seed: u64, checks: &[Check]) -> Result<SeedResult> {
    let pt = random_point(n, field, seed, DEFAULT_MAX_TRIES)?;
    let red = ReductionOptions::defaults(&pt);
    let reports = checks.iter().map(|&c| run_check(&pt, c, &red)).collect::<Result<_>>()?;
    Ok(SeedResult { seed, reports })
}

/// Samples a point per seed and runs `checks` on it; results are in seed order.
pub fn verify_seeds(n: usize, field: &Field, seeds: &[u64], checks: &[Check]) -> Result<Vec<SeedResult>> {
    map_collect(seeds, |&s| one_seed(n, field, s, checks)).into_iter().collect()
}

/// [`verify_seeds`] on the calling thread only, regardless of features.
pub fn verify_seeds_sequential(
    n: usize,
    field: &Field,
    seeds: &[u64],
    checks: &[Check],
) -> Result<Vec<SeedResult>> {
    seeds.iter().map(|&s| one_seed(n, field, s, checks)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_matches_sequential() {
        let f = Field::parse("gf(11)").unwrap();
        let seeds: Vec<u64> = (0..8).collect();
        let checks = [Check::Gon, Check::Simplex];
        let a = verify_seeds(2, &f, &seeds, &checks).unwrap();
        let b = verify_seeds_sequential(2, &f, &seeds, &checks).unwrap();
        let strip = |v: Vec<SeedResult>| -> Vec<(u64, Vec<Report>)> {
            v.into_iter().map(|s| (s.seed, s.reports.into_iter().map(Report::without_timing).collect())).collect()
        };
        assert_eq!(strip(a), strip(b));
    }
}
