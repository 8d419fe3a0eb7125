use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{DesignError, KMIndex, KMProfile, Result};
use crate::gflinalg::Subspace;
use crate::matgroup::{MatGroup, OrbitCensus};

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Largest number of orbits in a selection; `None` for no limit.
    pub max_selection: Option<usize>,
    /// Search nodes visited before giving up.
    pub node_cap: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_selection: None, node_cap: 10_000_000 }
    }
}

struct Search<'a> {
    rows: &'a [Vec<u64>],
    /// `suffix[r][j]`: sum of column `j` over rows `r..`.
    suffix: Vec<Vec<u64>>,
    deficit: Vec<u64>,
    chosen: Vec<usize>,
    solutions: Vec<Vec<usize>>,
    nodes: u64,
    opts: &'a SearchOptions,
}

impl Search<'_> {
    fn run(&mut self, start: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.opts.node_cap {
            return Err(DesignError::BudgetExceeded(format!("more than {} search nodes", self.opts.node_cap)));
        }
        if self.deficit.iter().all(|&x| x == 0) {
            self.solutions.push(self.chosen.clone());
            return Ok(());
        }
        if self.opts.max_selection.is_some_and(|m| self.chosen.len() >= m) {
            return Ok(());
        }
        for r in start..self.rows.len() {
            if self.deficit.iter().zip(&self.suffix[r]).any(|(need, cap)| need > cap) {
                break;
            }
            let row = &self.rows[r];
            if row.iter().zip(&self.deficit).any(|(c, need)| c > need) {
                continue;
            }
            for (need, c) in self.deficit.iter_mut().zip(row) {
                *need -= c;
            }
            self.chosen.push(r);
            let res = self.run(r + 1);
            self.chosen.pop();
            for (need, c) in self.deficit.iter_mut().zip(row) {
                *need += c;
            }
            res?;
        }
        Ok(())
    }
}

/// All selections of block orbits whose summed profiles equal `lambda` on
/// every `t`-orbit, as lists of representatives. Selections are index sets
/// in census order, reported lexicographically.
pub fn km_search_profiles(profiles: &[KMProfile], lambda: &BigUint, opts: &SearchOptions) -> Result<Vec<Vec<Subspace>>> {
    let Some(first) = profiles.first() else {
        return Ok(Vec::new());
    };
    let width = first.columns.len();
    if profiles.iter().any(|p| p.columns.len() != width) {
        return Err(DesignError::Inconsistent("profiles over different t-censuses".into()));
    }
    let target = lambda
        .to_u64()
        .ok_or_else(|| DesignError::InvalidArgument(format!("lambda {lambda} too large")))?;
    let rows: Vec<Vec<u64>> = profiles
        .iter()
        .map(|p| {
            p.columns
                .iter()
                .map(|c| c.count.to_u64().ok_or_else(|| DesignError::InvalidArgument("count exceeds u64".into())))
                .collect::<Result<Vec<u64>>>()
        })
        .collect::<Result<_>>()?;
    let mut suffix = vec![vec![0u64; width]; rows.len() + 1];
    for r in (0..rows.len()).rev() {
        for j in 0..width {
            suffix[r][j] = suffix[r + 1][j].saturating_add(rows[r][j]);
        }
    }
    let mut search = Search {
        rows: &rows,
        suffix,
        deficit: vec![target; width],
        chosen: Vec::new(),
        solutions: Vec::new(),
        nodes: 0,
        opts,
    };
    search.run(0)?;
    Ok(search
        .solutions
        .into_iter()
        .map(|sel| sel.into_iter().map(|r| profiles[r].block_rep.clone()).collect())
        .collect())
}

/// [`km_search_profiles`] over the profiles of every orbit in
/// `block_census`.
pub fn km_search(
    group: &MatGroup,
    block_census: &OrbitCensus,
    t_census: &OrbitCensus,
    lambda: &BigUint,
    opts: &SearchOptions,
) -> Result<Vec<Vec<Subspace>>> {
    if !block_census.is_complete() {
        return Err(DesignError::IncompleteCensus(format!("block census of {}", block_census.group())));
    }
    let profiles = KMIndex::new(group, t_census, u64::MAX)?.profiles(block_census, 1)?;
    km_search_profiles(&profiles, lambda, opts)
}
