//! Text formats: census files, block files, generator files.
//!
//! Rows are written in the subspace encoding (one lowercase hex integer per
//! row, coordinate 0 most significant, no leading zeros).

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigUint;
use qdesign_core::designs::BlockSet;
use qdesign_core::gflinalg::{decode, encode, key_to_msb_int, msb_int_to_key, LEX_ORDER_TAG};
use qdesign_core::matgroup::{GroupElement, OrbitCensus};
use qdesign_core::{Mat, Subspace};
use thiserror::Error;

pub const CENSUS_MAGIC: &str = "qdesign-census v1";
pub const BLOCKS_MAGIC: &str = "qdesign-blocks v1";
pub const GENERATORS_MAGIC: &str = "qdesign-generators v1";

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {msg}")]
    Format { path: PathBuf, line: usize, msg: String },
    #[error("{0} is locked by another process (remove {0}.lock if stale)")]
    Locked(PathBuf),
}

type Result<T> = std::result::Result<T, FileError>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> FileError + '_ {
    move |source| FileError::Io { path: path.to_path_buf(), source }
}

struct Lines<'a> {
    path: &'a Path,
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(path: &'a Path, text: &'a str) -> Self {
        Lines { path, iter: text.lines().enumerate(), last: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> FileError {
        FileError::Format { path: self.path.to_path_buf(), line: self.last, msg: msg.into() }
    }

    fn next_line(&mut self) -> Option<&'a str> {
        let (i, l) = self.iter.next()?;
        self.last = i + 1;
        Some(l)
    }

    fn expect_line(&mut self, what: &str) -> Result<&'a str> {
        self.next_line().ok_or_else(|| {
            let mut e = self.err(format!("missing {what}"));
            if let FileError::Format { line, .. } = &mut e {
                *line += 1;
            }
            e
        })
    }

    /// Next line that is neither blank nor a `#` comment.
    fn next_content(&mut self) -> Option<&'a str> {
        loop {
            let l = self.next_line()?;
            if !l.trim().is_empty() && !l.starts_with('#') {
                return Some(l);
            }
        }
    }
}

/// Parses `key=value` fields separated by single spaces, in order.
fn fields<'a>(lines: &Lines, line: &'a str, keys: &[&str]) -> Result<Vec<&'a str>> {
    let parts: Vec<&str> = line.split(' ').collect();
    if parts.len() != keys.len() {
        return Err(lines.err(format!("expected fields {}", keys.join(" "))));
    }
    parts
        .iter()
        .zip(keys)
        .map(|(part, key)| {
            part.strip_prefix(key)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| lines.err(format!("expected {key}=…, found {part:?}")))
        })
        .collect()
}

fn parse<T: FromStr>(lines: &Lines, s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| lines.err(format!("bad {what}: {s:?}")))
}

fn write_atomic(path: &Path, body: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let mut f = File::create(&tmp).map_err(io_err(&tmp))?;
    f.write_all(body.as_bytes()).map_err(io_err(&tmp))?;
    f.sync_all().map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

pub fn render_census(c: &OrbitCensus) -> String {
    let (d, k, p) = c.dims();
    let mut out = format!(
        "{CENSUS_MAGIC}\nd={d} k={k} p={p}\ngroup={} order={}\nexpected={} lexorder={LEX_ORDER_TAG}\n",
        c.group(),
        c.group_order(),
        c.expected()
    );
    for (rep, size) in c.entries() {
        out.push_str(&encode(rep));
        out.push(' ');
        out.push_str(&size.to_string());
        out.push('\n');
    }
    out
}

pub fn write_census(path: &Path, c: &OrbitCensus) -> Result<()> {
    write_atomic(path, &render_census(c))
}

pub fn read_census(path: &Path) -> Result<OrbitCensus> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_census(path, &text)
}

pub fn parse_census(path: &Path, text: &str) -> Result<OrbitCensus> {
    let mut lines = Lines::new(path, text);
    if lines.expect_line("header")? != CENSUS_MAGIC {
        return Err(lines.err(format!("expected {CENSUS_MAGIC:?}")));
    }
    let l2 = lines.expect_line("dimensions")?;
    let f = fields(&lines, l2, &["d", "k", "p"])?;
    let (d, k, p): (u32, u32, u64) = (parse(&lines, f[0], "d")?, parse(&lines, f[1], "k")?, parse(&lines, f[2], "p")?);
    let l3 = lines.expect_line("group line")?;
    let f = fields(&lines, l3, &["group", "order"])?;
    let group = f[0].to_string();
    let order: BigUint = parse(&lines, f[1], "order")?;
    let l4 = lines.expect_line("expected line")?;
    let f = fields(&lines, l4, &["expected", "lexorder"])?;
    let expected: BigUint = parse(&lines, f[0], "expected")?;
    if f[1] != LEX_ORDER_TAG {
        return Err(lines.err(format!("lex order {:?} is not {LEX_ORDER_TAG:?}", f[1])));
    }
    let mut census = OrbitCensus::new(d, k, p, group, order);
    if census.expected() != &expected {
        return Err(lines.err(format!("expected={expected} but there are {} subspaces", census.expected())));
    }
    let mut prev: Option<Subspace> = None;
    while let Some(line) = lines.next_line() {
        let (rows, size) = line.rsplit_once(' ').ok_or_else(|| lines.err("expected <rows> <size>"))?;
        let rep = decode(rows, d, k, p).map_err(|e| lines.err(e.to_string()))?;
        let size: BigUint = parse(&lines, size, "orbit size")?;
        if prev.as_ref().is_some_and(|q| *q >= rep) {
            return Err(lines.err("representatives not strictly ascending"));
        }
        census.insert(rep.clone(), size).map_err(|e| lines.err(e.to_string()))?;
        prev = Some(rep);
    }
    if census.certificate() > census.expected() {
        return Err(lines.err(format!("orbit sizes sum to {} > {}", census.certificate(), census.expected())));
    }
    Ok(census)
}

pub fn render_blocks(b: &BlockSet) -> String {
    let (d, k, p) = b.dims();
    let mut out = format!("{BLOCKS_MAGIC}\nd={d} k={k} p={p}\n");
    for block in b.iter() {
        out.push_str(&encode(block));
        out.push('\n');
    }
    out
}

pub fn write_blocks(path: &Path, b: &BlockSet) -> Result<()> {
    write_atomic(path, &render_blocks(b))
}

pub fn read_blocks(path: &Path) -> Result<BlockSet> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut lines = Lines::new(path, &text);
    if lines.expect_line("header")? != BLOCKS_MAGIC {
        return Err(lines.err(format!("expected {BLOCKS_MAGIC:?}")));
    }
    let l2 = lines.expect_line("dimensions")?;
    let f = fields(&lines, l2, &["d", "k", "p"])?;
    let (d, k, p): (u32, u32, u64) = (parse(&lines, f[0], "d")?, parse(&lines, f[1], "k")?, parse(&lines, f[2], "p")?);
    let mut set = BlockSet::new(d, k, p);
    while let Some(line) = lines.next_content() {
        let b = decode(line, d, k, p).map_err(|e| lines.err(e.to_string()))?;
        if !set.insert(b).map_err(|e| lines.err(e.to_string()))? {
            return Err(lines.err("duplicate block"));
        }
    }
    Ok(set)
}

/// Generators read from a file, with an optional declared group order.
pub struct GeneratorFile {
    pub d: u32,
    pub p: u64,
    pub order: Option<BigUint>,
    pub generators: Vec<GroupElement>,
}

/// `qdesign-generators v1`, `d=<int> p=<int>`, optionally `order=<int>`,
/// then one matrix per line as `d` hex row tokens.
pub fn read_generators(path: &Path) -> Result<GeneratorFile> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut lines = Lines::new(path, &text);
    if lines.expect_line("header")? != GENERATORS_MAGIC {
        return Err(lines.err(format!("expected {GENERATORS_MAGIC:?}")));
    }
    let l2 = lines.expect_line("dimensions")?;
    let f = fields(&lines, l2, &["d", "p"])?;
    let (d, p): (u32, u64) = (parse(&lines, f[0], "d")?, parse(&lines, f[1], "p")?);
    qdesign_core::gflinalg::check_field(d, p).map_err(|e| lines.err(e.to_string()))?;
    let mut order = None;
    let mut generators = Vec::new();
    while let Some(line) = lines.next_content() {
        if let Some(o) = line.strip_prefix("order=") {
            order = Some(parse(&lines, o, "order")?);
            continue;
        }
        let tokens: Vec<&str> = line.split(' ').collect();
        if tokens.len() != d as usize {
            return Err(lines.err(format!("a generator needs {d} rows, found {}", tokens.len())));
        }
        let limit = p.pow(d);
        let keys = tokens
            .iter()
            .map(|t| {
                let v = u64::from_str_radix(t, 16).map_err(|_| lines.err(format!("bad row {t:?}")))?;
                if v >= limit || format!("{v:x}") != *t {
                    return Err(lines.err(format!("row {t:?} is not a canonical vector of F_{p}^{d}")));
                }
                Ok(msb_int_to_key(v, d, p))
            })
            .collect::<Result<Vec<u64>>>()?;
        let g = GroupElement::new(Mat::from_keys(&keys, d as usize, p)).map_err(|e| lines.err(e.to_string()))?;
        generators.push(g);
    }
    Ok(GeneratorFile { d, p, order, generators })
}

pub fn render_generators(d: u32, p: u64, order: Option<&BigUint>, gens: &[GroupElement]) -> String {
    let mut out = format!("{GENERATORS_MAGIC}\nd={d} p={p}\n");
    if let Some(o) = order {
        out.push_str(&format!("order={o}\n"));
    }
    for g in gens {
        let rows: Vec<String> =
            g.matrix().row_keys().iter().map(|&k| format!("{:x}", key_to_msb_int(k, d, p))).collect();
        out.push_str(&rows.join(" "));
        out.push('\n');
    }
    out
}

/// Exclusive ownership of a checkpoint path through `<path>.lock`.
pub struct CheckpointLock {
    lock: PathBuf,
}

impl CheckpointLock {
    pub fn acquire(path: &Path) -> Result<Self> {
        let mut lock = path.as_os_str().to_owned();
        lock.push(".lock");
        let lock = PathBuf::from(lock);
        match OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(CheckpointLock { lock })
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(FileError::Locked(path.to_path_buf())),
            Err(e) => Err(FileError::Io { path: lock, source: e }),
        }
    }
}

impl Drop for CheckpointLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.lock);
    }
}
