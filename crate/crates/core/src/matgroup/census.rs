use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{mpsc, RwLock};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{MatGroup, MatGroupError, OrbitKey, Result};
use crate::gflinalg::{enumerate_subspaces, rref_bits, Subspace};
use crate::qarith::gaussian_binomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    FullScan,
    Sampled,
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub strategy: Strategy,
    pub seed: u64,
    pub parallelism: usize,
    /// Full scans refuse Grassmannians larger than this.
    pub full_scan_limit: u64,
    pub deadline: Option<Instant>,
    /// Upper bound on random draws in sampled mode.
    pub max_samples: Option<u64>,
    /// Progress callback period, in newly found orbits.
    pub checkpoint_every: u64,
    /// Cap on explicit orbit closures.
    pub orbit_cap: u64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            strategy: Strategy::Sampled,
            seed: 0,
            parallelism: 1,
            full_scan_limit: 100_000_000,
            deadline: None,
            max_samples: None,
            checkpoint_every: 10_000,
            orbit_cap: 50_000_000,
        }
    }
}

/// Orbits of a group on `k`-subspaces, keyed by lex-least representative.
/// Complete iff the orbit sizes sum to the Gaussian binomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCensus {
    d: u32,
    k: u32,
    p: u64,
    group: String,
    group_order: BigUint,
    entries: BTreeMap<Subspace, BigUint>,
    certificate: BigUint,
    expected: BigUint,
}

impl OrbitCensus {
    pub fn new(d: u32, k: u32, p: u64, group: impl Into<String>, group_order: BigUint) -> Self {
        OrbitCensus {
            d,
            k,
            p,
            group: group.into(),
            group_order,
            entries: BTreeMap::new(),
            certificate: BigUint::zero(),
            expected: gaussian_binomial(d, k, p),
        }
    }

    pub fn dims(&self) -> (u32, u32, u64) {
        (self.d, self.k, self.p)
    }

    pub fn group(&self) -> &str {
        &self.group
    }

    pub fn group_order(&self) -> &BigUint {
        &self.group_order
    }

    /// Representatives ascending, with orbit sizes.
    pub fn entries(&self) -> impl Iterator<Item = (&Subspace, &BigUint)> {
        self.entries.iter()
    }

    pub fn size_of(&self, rep: &Subspace) -> Option<&BigUint> {
        self.entries.get(rep)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of recorded orbit sizes.
    pub fn certificate(&self) -> &BigUint {
        &self.certificate
    }

    pub fn expected(&self) -> &BigUint {
        &self.expected
    }

    pub fn is_complete(&self) -> bool {
        self.certificate == self.expected
    }

    /// Adds an orbit; false if the representative was already present.
    pub fn insert(&mut self, rep: Subspace, size: BigUint) -> Result<bool> {
        if rep.ambient_dim() != self.d || rep.modulus() != self.p || rep.dim() != self.k {
            return Err(MatGroupError::AmbientMismatch(format!("{rep} in a census of ({}, {}, {})", self.d, self.k, self.p)));
        }
        if self.entries.contains_key(&rep) {
            return Ok(false);
        }
        self.certificate += &size;
        self.entries.insert(rep, size);
        Ok(true)
    }

    /// Set union; the certificate is recomputed from the merged entries.
    pub fn merge(&mut self, other: &OrbitCensus) -> Result<()> {
        if other.dims() != self.dims() || other.group != self.group {
            return Err(MatGroupError::AmbientMismatch(format!(
                "cannot merge a census of {} into one of {}",
                other.group, self.group
            )));
        }
        for (rep, size) in other.entries() {
            match self.entries.get(rep) {
                Some(existing) if existing != size => {
                    return Err(MatGroupError::InvalidArgument(format!(
                        "orbit of {rep} recorded with sizes {existing} and {size}"
                    )))
                }
                Some(_) => {}
                None => {
                    self.entries.insert(rep.clone(), size.clone());
                }
            }
        }
        self.certificate = self.entries.values().sum();
        Ok(())
    }

    /// Recomputes every representative and orbit size under `group`.
    /// Returns the representatives that fail, empty when the census is
    /// consistent.
    pub fn recertify(&self, group: &MatGroup, cap: u64) -> Result<Vec<Subspace>> {
        let mut bad = Vec::new();
        for (rep, size) in &self.entries {
            let (min, actual) = group.orbit_min(rep, cap)?;
            if &min != rep || &actual != size {
                bad.push(rep.clone());
            }
        }
        Ok(bad)
    }
}

/// Complete census, or `BudgetExceeded` when a budget stops it first.
pub fn orbit_census(group: &MatGroup, k: u32, opts: &CensusOptions) -> Result<OrbitCensus> {
    let census = run_census(group, k, opts, None, &mut |_| {})?;
    if census.is_complete() {
        Ok(census)
    } else {
        Err(MatGroupError::BudgetExceeded(format!(
            "census stopped at {} orbits, certificate {} of {}",
            census.len(),
            census.certificate(),
            census.expected()
        )))
    }
}

/// Runs a census, starting from `resume` when given. Stopping on a budget
/// yields an incomplete census rather than an error. `progress` sees the
/// census every `checkpoint_every` new orbits.
pub fn run_census(
    group: &MatGroup,
    k: u32,
    opts: &CensusOptions,
    resume: Option<OrbitCensus>,
    progress: &mut dyn FnMut(&OrbitCensus),
) -> Result<OrbitCensus> {
    let (d, p) = (group.dim(), group.modulus());
    if k > d {
        return Err(MatGroupError::InvalidArgument(format!("k = {k} exceeds d = {d}")));
    }
    let order = match (group.known_order(), opts.strategy) {
        (Some(o), _) => o.clone(),
        (None, Strategy::FullScan) => BigUint::zero(),
        (None, Strategy::Sampled) => {
            return Err(MatGroupError::UnknownOrder(format!("sampled census of {}", group.name())))
        }
    };
    let mut census = OrbitCensus::new(d, k, p, group.name(), order);
    if let Some(prev) = resume {
        census.merge(&prev)?;
    }
    if census.is_complete() {
        return Ok(census);
    }
    match opts.strategy {
        Strategy::FullScan => full_scan(group, k, opts, census, progress),
        Strategy::Sampled => sampled(group, k, opts, census, progress),
    }
}

fn past(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|t| Instant::now() >= t)
}

fn check_size(group: &MatGroup, size: &BigUint) -> Result<()> {
    if let Some(order) = group.known_order() {
        if size.is_zero() || !(order % size).is_zero() {
            return Err(MatGroupError::GroupOrderMismatch {
                known: order.to_string(),
                found: format!("orbit of size {size}"),
            });
        }
    }
    Ok(())
}

/// Ascending scan: the first unseen member of an orbit is its least member.
fn full_scan(
    group: &MatGroup,
    k: u32,
    opts: &CensusOptions,
    mut census: OrbitCensus,
    progress: &mut dyn FnMut(&OrbitCensus),
) -> Result<OrbitCensus> {
    let (d, p) = (group.dim(), group.modulus());
    if census.expected > BigUint::from(opts.full_scan_limit) {
        return Err(MatGroupError::BudgetExceeded(format!(
            "full scan of {} subspaces exceeds the limit of {}",
            census.expected, opts.full_scan_limit
        )));
    }
    let mut seen_keys: HashSet<OrbitKey> = HashSet::new();
    let mut seen_members: HashSet<Subspace> = HashSet::new();
    let fast = group.has_fast_key();
    for rep in census.entries.keys() {
        if fast {
            seen_keys.insert(group.orbit_key(rep, opts.orbit_cap)?);
        } else {
            seen_members.extend(group.orbit(rep, opts.orbit_cap)?);
        }
    }
    let mut found = 0u64;
    for (i, s) in enumerate_subspaces(d, k, p).enumerate() {
        if i % 4096 == 0 && past(opts.deadline) {
            break;
        }
        let size = if fast {
            if !seen_keys.insert(group.orbit_key(&s, opts.orbit_cap)?) {
                continue;
            }
            group.orbit_size(&s, opts.orbit_cap)?
        } else {
            if seen_members.contains(&s) {
                continue;
            }
            let orbit = group.orbit(&s, opts.orbit_cap)?;
            let size = BigUint::from(orbit.len());
            seen_members.extend(orbit);
            size
        };
        check_size(group, &size)?;
        census.insert(s, size)?;
        found += 1;
        if census.is_complete() {
            break;
        }
        if opts.checkpoint_every > 0 && found % opts.checkpoint_every == 0 {
            progress(&census);
        }
    }
    Ok(census)
}

/// A uniformly random `k`-subspace: uniform `k×d` matrices, redrawn until
/// of full rank, then canonicalised. Every `k`-subspace has the same number
/// of full-rank spanning matrices.
pub(crate) fn random_subspace(rng: &mut impl Rng, d: u32, k: u32, p: u64) -> Subspace {
    let size = p.pow(d);
    loop {
        if p == 2 {
            let mut rows = [0u64; 64];
            for r in rows.iter_mut().take(k as usize) {
                *r = rng.gen_range(0..size);
            }
            let rows = &mut rows[..k as usize];
            if rref_bits(rows) == k as usize {
                return Subspace::from_keys(rows, d, p);
            }
        } else {
            let rows: Vec<u64> = (0..k).map(|_| rng.gen_range(0..size)).collect();
            let s = Subspace::from_keys(&rows, d, p);
            if s.dim() == k {
                return s;
            }
        }
    }
}

/// Workers draw subspaces and compute orbit keys; a single merger owns the
/// census and stops everything once the certificate is reached.
fn sampled(
    group: &MatGroup,
    k: u32,
    opts: &CensusOptions,
    mut census: OrbitCensus,
    progress: &mut dyn FnMut(&OrbitCensus),
) -> Result<OrbitCensus> {
    let (d, p) = (group.dim(), group.modulus());
    let mut initial = HashSet::new();
    for rep in census.entries.keys() {
        initial.insert(group.orbit_key(rep, opts.orbit_cap)?);
    }
    let known = RwLock::new(initial);
    let stop = AtomicBool::new(false);
    let samples = AtomicU64::new(0);
    let workers = opts.parallelism.max(1);
    let (tx, rx) = mpsc::sync_channel::<Result<(OrbitKey, Subspace)>>(1024);

    std::thread::scope(|scope| -> Result<()> {
        for w in 0..workers {
            let tx = tx.clone();
            let (known, stop, samples) = (&known, &stop, &samples);
            scope.spawn(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(w as u64);
                while !stop.load(Ordering::Relaxed) {
                    if let Some(max) = opts.max_samples {
                        if samples.fetch_add(1, Ordering::Relaxed) >= max {
                            break;
                        }
                    }
                    let s = random_subspace(&mut rng, d, k, p);
                    let msg = match group.orbit_key(&s, opts.orbit_cap) {
                        Ok(key) => {
                            if known.read().unwrap().contains(&key) {
                                continue;
                            }
                            Ok((key, s))
                        }
                        Err(e) => Err(e),
                    };
                    if tx.send(msg).is_err() {
                        break;
                    }
                }
            });
        }
        drop(tx);

        let mut found = 0u64;
        let outcome = loop {
            if census.is_complete() {
                break Ok(());
            }
            if past(opts.deadline) {
                break Ok(());
            }
            let (key, s) = match rx.recv_timeout(Duration::from_millis(200)) {
                Ok(Ok(item)) => item,
                Ok(Err(e)) => break Err(e),
                Err(mpsc::RecvTimeoutError::Timeout) => continue,
                Err(mpsc::RecvTimeoutError::Disconnected) => break Ok(()),
            };
            if known.read().unwrap().contains(&key) {
                continue;
            }
            let (rep, size) = match group.orbit_min(&s, opts.orbit_cap) {
                Ok(v) => v,
                Err(e) => break Err(e),
            };
            if let Err(e) = check_size(group, &size) {
                break Err(e);
            }
            known.write().unwrap().insert(key);
            if let Err(e) = census.insert(rep, size) {
                break Err(e);
            }
            found += 1;
            if opts.checkpoint_every > 0 && found % opts.checkpoint_every == 0 {
                progress(&census);
            }
        };
        stop.store(true, Ordering::Relaxed);
        drop(rx);
        outcome
    })?;
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::{default_poly, gamma_l1, hyperplane_levi};
    use std::collections::HashMap;

    #[test]
    fn trivial_group_full_scan() {
        let g = MatGroup::trivial(4, 2).unwrap();
        let opts = CensusOptions { strategy: Strategy::FullScan, ..Default::default() };
        let c = orbit_census(&g, 2, &opts).unwrap();
        assert_eq!(c.len(), 35);
        assert!(c.entries().all(|(_, s)| *s == BigUint::from(1u32)));
        assert!(c.is_complete());
    }

    #[test]
    fn sampled_needs_order() {
        let g = MatGroup::new("anon", 4, 2, Vec::new()).unwrap();
        assert!(matches!(
            orbit_census(&g, 2, &CensusOptions::default()),
            Err(MatGroupError::UnknownOrder(_))
        ));
    }

    #[test]
    fn sampler_is_uniform_enough() {
        // 35 two-spaces of F_2^4, 35000 draws: each count within 6 sigma
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut counts: HashMap<Subspace, u32> = HashMap::new();
        for _ in 0..35_000 {
            *counts.entry(random_subspace(&mut rng, 4, 2, 2)).or_default() += 1;
        }
        assert_eq!(counts.len(), 35);
        assert!(counts.values().all(|&c| (c as i64 - 1000).abs() < 190), "{counts:?}");
    }

    #[test]
    fn levi_censuses() {
        let (k, h) = hyperplane_levi(6, 2).unwrap();
        let opts = CensusOptions { strategy: Strategy::FullScan, ..Default::default() };
        // K fixes e_1 and W: spaces inside W, spaces through e_1, and the rest
        let ck = orbit_census(&k, 3, &opts).unwrap();
        let mut sizes: Vec<_> = ck.entries().map(|(_, s)| s.clone()).collect();
        sizes.sort();
        assert_eq!(sizes, [155u32, 155, 1085].map(BigUint::from));
        let ch = orbit_census(&h, 3, &opts).unwrap();
        let mut sizes: Vec<_> = ch.entries().map(|(_, s)| s.clone()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![BigUint::from(155u32), BigUint::from(1240u32)]);
    }

    #[test]
    fn strategies_and_seeds_agree() {
        let g = gamma_l1(&default_poly(2, 6).unwrap()).unwrap();
        let full = orbit_census(&g, 3, &CensusOptions { strategy: Strategy::FullScan, ..Default::default() }).unwrap();
        for (seed, par) in [(1u64, 1usize), (99, 3)] {
            let opts = CensusOptions { seed, parallelism: par, ..Default::default() };
            assert_eq!(orbit_census(&g, 3, &opts).unwrap(), full);
        }
        assert!(full.recertify(&g, 1 << 20).unwrap().is_empty());
    }

    #[test]
    fn budget_and_resume() {
        let g = gamma_l1(&default_poly(2, 6).unwrap()).unwrap();
        let opts = CensusOptions { max_samples: Some(20), ..Default::default() };
        let partial = run_census(&g, 3, &opts, None, &mut |_| {}).unwrap();
        assert!(!partial.is_complete());
        assert!(matches!(orbit_census(&g, 3, &opts), Err(MatGroupError::BudgetExceeded(_))));
        let resumed = run_census(&g, 3, &CensusOptions::default(), Some(partial.clone()), &mut |_| {}).unwrap();
        assert!(resumed.is_complete());
        for (rep, size) in partial.entries() {
            assert_eq!(resumed.size_of(rep), Some(size));
        }
        let full = orbit_census(&g, 3, &CensusOptions { strategy: Strategy::FullScan, ..Default::default() }).unwrap();
        assert_eq!(resumed, full);
    }

    #[test]
    fn generic_sampled_matches_full_scan() {
        let (k, _) = hyperplane_levi(5, 2).unwrap();
        let full = orbit_census(&k, 2, &CensusOptions { strategy: Strategy::FullScan, ..Default::default() }).unwrap();
        let sampled = orbit_census(&k, 2, &CensusOptions { seed: 3, parallelism: 2, ..Default::default() }).unwrap();
        assert_eq!(full, sampled);
    }
}
