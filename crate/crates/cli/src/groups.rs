//! Group specifications, as typed on the command line and as recorded in
//! census headers.
//!
//! - `gamma-l1` (with `--p`, `--d`, optional `--poly`) or
//!   `gamma-l1:p=2,d=11,poly=x^11+x^2+1`
//! - `hyperplane-levi:K` / `hyperplane-levi:H` or `hyperplane-levi:K:d=6,p=2`
//! - `sl` or `sl:m=3,p=2`
//! - `trivial` or `trivial:d=4,p=2`
//! - `generators:<path>`

use std::collections::HashMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use qdesign_core::matgroup::{default_poly, gamma_l1, hyperplane_levi, special_linear, MatGroup, Poly};

use crate::files::read_generators;

/// Command-line defaults for fields a short spec leaves out.
#[derive(Clone, Debug, Default)]
pub struct SpecDefaults {
    pub d: Option<u32>,
    pub p: Option<u64>,
    pub poly: Option<String>,
}

/// Largest group enumerated to learn the order of a generator file that
/// does not declare one.
const ORDER_ENUMERATION_BUDGET: u64 = 2_000_000;

fn kv(body: &str) -> Result<HashMap<&str, &str>> {
    body.split(',')
        .filter(|s| !s.is_empty())
        .map(|item| item.split_once('=').ok_or_else(|| anyhow!("expected key=value, found {item:?}")))
        .collect()
}

fn pick<T: std::str::FromStr>(map: &HashMap<&str, &str>, key: &str, fallback: Option<T>) -> Result<T> {
    match map.get(key) {
        Some(v) => v.parse().map_err(|_| anyhow!("bad value for {key}: {v:?}")),
        None => fallback.ok_or_else(|| anyhow!("group spec needs {key}")),
    }
}

pub fn build_group(spec: &str, defaults: &SpecDefaults) -> Result<MatGroup> {
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match head {
        "gamma-l1" => {
            let map = kv(rest)?;
            let p = pick(&map, "p", defaults.p.or(Some(2)))?;
            let d: u32 = pick(&map, "d", defaults.d)?;
            let poly = match map.get("poly").copied().or(defaults.poly.as_deref()) {
                Some(text) => Poly::parse(text, p)?,
                None => default_poly(p, d).ok_or_else(|| anyhow!("no default primitive polynomial for p={p}, d={d}; pass --poly"))?,
            };
            if poly.degree() != d {
                bail!("polynomial {poly} has degree {}, expected {d}", poly.degree());
            }
            Ok(gamma_l1(&poly)?)
        }
        "hyperplane-levi" => {
            let (which, rest) = rest.split_once(':').unwrap_or((rest, ""));
            let map = kv(rest)?;
            let d = pick(&map, "d", defaults.d)?;
            let p = pick(&map, "p", defaults.p.or(Some(2)))?;
            let (k, h) = hyperplane_levi(d, p)?;
            match which {
                "K" => Ok(k),
                "H" => Ok(h),
                other => bail!("hyperplane-levi needs :K or :H, found {other:?}"),
            }
        }
        "sl" => {
            let map = kv(rest)?;
            let m = pick(&map, "m", defaults.d)?;
            let p = pick(&map, "p", defaults.p.or(Some(2)))?;
            Ok(special_linear(m, p)?)
        }
        "trivial" => {
            let map = kv(rest)?;
            let d = pick(&map, "d", defaults.d)?;
            let p = pick(&map, "p", defaults.p.or(Some(2)))?;
            Ok(MatGroup::trivial(d, p)?)
        }
        "generators" => {
            if rest.is_empty() {
                bail!("generators:<path> needs a path");
            }
            let file = read_generators(Path::new(rest))?;
            if defaults.d.is_some_and(|d| d != file.d) || defaults.p.is_some_and(|p| p != file.p) {
                bail!("{rest} holds matrices over F_{}^{}", file.p, file.d);
            }
            let mut g = MatGroup::new(spec, file.d, file.p, file.generators)?;
            match file.order {
                Some(o) => g.set_known_order(o),
                None => {
                    g.enumerate_elements(ORDER_ENUMERATION_BUDGET)
                        .with_context(|| format!("{rest} declares no order=<int> line"))?;
                }
            }
            Ok(g)
        }
        other => bail!("unknown group {other:?} (gamma-l1, hyperplane-levi:K|H, sl, trivial, generators:<path>)"),
    }
}
