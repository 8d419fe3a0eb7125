use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::{apply_images, GroupElement, MatGroupError, Result, SingerLogTable};
use crate::gflinalg::{check_field, rref_bits, Subspace};

/// Orbit identity used for deduplication: either the lex-least member or,
/// for Singer normalisers, the canonical log signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitKey {
    Rep(Subspace),
    Logs(Box<[u32]>),
}

/// A finitely generated subgroup of `GL_d(p)`.
#[derive(Clone)]
pub struct MatGroup {
    name: String,
    d: u32,
    p: u64,
    generators: Vec<GroupElement>,
    elements: Option<Vec<GroupElement>>,
    /// Images of all cached elements, `d` keys per element.
    packed: Vec<u64>,
    known_order: Option<BigUint>,
    pub(crate) singer: Option<SingerLogTable>,
}

impl fmt::Debug for MatGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatGroup")
            .field("name", &self.name)
            .field("d", &self.d)
            .field("p", &self.p)
            .field("generators", &self.generators.len())
            .field("known_order", &self.known_order)
            .finish()
    }
}

impl MatGroup {
    pub fn new(name: impl Into<String>, d: u32, p: u64, generators: Vec<GroupElement>) -> Result<Self> {
        check_field(d, p)?;
        for g in &generators {
            if g.dim() != d || g.modulus() != p {
                return Err(MatGroupError::AmbientMismatch(format!(
                    "generator in GL_{}({}) for a group in GL_{d}({p})",
                    g.dim(),
                    g.modulus()
                )));
            }
        }
        Ok(MatGroup {
            name: name.into(),
            d,
            p,
            generators,
            elements: None,
            packed: Vec::new(),
            known_order: None,
            singer: None,
        })
    }

    pub fn trivial(d: u32, p: u64) -> Result<Self> {
        let mut g = MatGroup::new(format!("trivial:d={d},p={p}"), d, p, Vec::new())?;
        g.known_order = Some(BigUint::one());
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn known_order(&self) -> Option<&BigUint> {
        self.known_order.as_ref()
    }

    /// Records an order obtained elsewhere; checked against any later
    /// enumeration.
    pub fn set_known_order(&mut self, order: BigUint) {
        self.known_order = Some(order);
    }

    pub fn elements(&self) -> Option<&[GroupElement]> {
        self.elements.as_deref()
    }

    /// Whether orbit keys come from a Singer log table.
    pub fn has_fast_key(&self) -> bool {
        self.singer.is_some()
    }

    /// All elements, by breadth-first closure under right multiplication by
    /// the generators. Caches the result and sets the known order.
    pub fn enumerate_elements(&mut self, budget: u64) -> Result<&[GroupElement]> {
        if self.elements.is_none() {
            let (d, p) = (self.d, self.p);
            let identity = GroupElement::identity(d, p);
            let mut seen: HashSet<Vec<u64>> = HashSet::new();
            let mut list: Vec<Vec<u64>> = vec![identity.images().to_vec()];
            seen.insert(list[0].clone());
            let mut idx = 0;
            while idx < list.len() {
                for gen in &self.generators {
                    let next: Vec<u64> = list[idx].iter().map(|&r| apply_images(gen.images(), r, d, p)).collect();
                    if !seen.contains(&next) {
                        if list.len() as u64 >= budget {
                            return Err(MatGroupError::BudgetExceeded(format!(
                                "{} has more than {budget} elements",
                                self.name
                            )));
                        }
                        seen.insert(next.clone());
                        list.push(next);
                    }
                }
                idx += 1;
            }
            let found = BigUint::from(list.len());
            if let Some(known) = &self.known_order {
                if *known != found {
                    return Err(MatGroupError::GroupOrderMismatch {
                        known: known.to_string(),
                        found: found.to_string(),
                    });
                }
            }
            self.packed = list.iter().flatten().copied().collect();
            self.elements = Some(list.into_iter().map(|im| GroupElement::from_images(im, d, p)).collect());
            self.known_order = Some(found);
        }
        Ok(self.elements.as_deref().unwrap())
    }

    fn check_ambient(&self, s: &Subspace) -> Result<()> {
        if s.ambient_dim() != self.d || s.modulus() != self.p {
            return Err(MatGroupError::AmbientMismatch(format!(
                "subspace of F_{}^{} under a group in GL_{}({})",
                s.modulus(),
                s.ambient_dim(),
                self.d,
                self.p
            )));
        }
        Ok(())
    }

    fn image(&self, s: &Subspace, images: &[u64]) -> Subspace {
        let rows: Vec<u64> = s.keys().iter().map(|&v| apply_images(images, v, self.d, self.p)).collect();
        Subspace::from_keys(&rows, self.d, self.p)
    }

    /// The orbit of `s` by breadth-first closure under the generators.
    pub fn orbit(&self, s: &Subspace, cap: u64) -> Result<HashSet<Subspace>> {
        self.check_ambient(s)?;
        let mut seen = HashSet::new();
        seen.insert(s.clone());
        let mut queue = VecDeque::from([s.clone()]);
        while let Some(cur) = queue.pop_front() {
            for gen in &self.generators {
                let next = self.image(&cur, gen.images());
                if !seen.contains(&next) {
                    if seen.len() as u64 >= cap {
                        return Err(MatGroupError::OrbitBudgetExceeded(cap));
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(seen)
    }

    /// The lex-least member of the orbit of `s` and the orbit size.
    pub fn orbit_min(&self, s: &Subspace, cap: u64) -> Result<(Subspace, BigUint)> {
        self.check_ambient(s)?;
        if let Some(table) = &self.singer {
            return Ok((table.orbit_min(s), table.orbit_size(s)));
        }
        if self.elements.is_some() {
            return Ok(self.scan_elements(s));
        }
        let orbit = self.orbit(s, cap)?;
        let size = BigUint::from(orbit.len());
        Ok((orbit.into_iter().min().expect("orbit contains s"), size))
    }

    /// Orbit size only; cheaper than [`MatGroup::orbit_min`] for Singer
    /// normalisers.
    pub fn orbit_size(&self, s: &Subspace, cap: u64) -> Result<BigUint> {
        self.check_ambient(s)?;
        match &self.singer {
            Some(table) => Ok(table.orbit_size(s)),
            None => Ok(self.orbit_min(s, cap)?.1),
        }
    }

    pub fn orbit_key(&self, s: &Subspace, cap: u64) -> Result<OrbitKey> {
        self.check_ambient(s)?;
        match &self.singer {
            Some(table) => Ok(OrbitKey::Logs(table.key(s))),
            None => Ok(OrbitKey::Rep(self.orbit_min(s, cap)?.0)),
        }
    }

    /// Minimum over all cached elements; the size is `|G| / |Stab(s)|`.
    fn scan_elements(&self, s: &Subspace) -> (Subspace, BigUint) {
        let d = self.d as usize;
        let count = self.packed.len() / d.max(1);
        let mut fixers = 0u64;
        let best = if self.p == 2 && s.dim() > 0 {
            let k = s.keys().len();
            let src = s.keys();
            let mut best: Vec<u64> = src.to_vec();
            let mut buf = [0u64; 64];
            for e in 0..count {
                let images = &self.packed[e * d..(e + 1) * d];
                for (slot, &v) in buf.iter_mut().zip(src) {
                    *slot = apply_images(images, v, self.d, 2);
                }
                rref_bits(&mut buf[..k]);
                let rows = &buf[..k];
                if rows == src {
                    fixers += 1;
                }
                if *rows < best[..] {
                    best.copy_from_slice(rows);
                }
            }
            Subspace::from_keys(&best, self.d, 2)
        } else {
            let mut best = s.clone();
            for e in 0..count {
                let img = self.image(s, &self.packed[e * d..(e + 1) * d]);
                if img == *s {
                    fixers += 1;
                }
                if img < best {
                    best = img;
                }
            }
            best
        };
        let size = BigUint::from(count as u64 / fixers.max(1));
        (best, size)
    }

    /// Group order if known, as `u64` when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.known_order.as_ref().and_then(|o| o.to_u64())
    }
}
