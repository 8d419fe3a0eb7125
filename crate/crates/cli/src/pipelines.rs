use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use anyhow::{anyhow, bail, Context as _, Result};
use num_bigint::BigUint;
use qdesign_core::designs::{dual_blocks, verify_design, DesignVerdict, KMIndex, OrbitVerdict, Witness};
use qdesign_core::gflinalg::{encode, LEX_ORDER_TAG};
use qdesign_core::matgroup::{
    default_poly, element_order, frobenius_element, gamma_l1, hyperplane_levi, run_census, singer_element, CensusOptions,
    MatGroup, OrbitCensus, Poly, Strategy,
};
use qdesign_core::qarith::{
    admissibility_report, block_count, dual_params, factor_u64, primitive_part, singer_feasibility_scan, DesignParams,
    PrimePower,
};
use qdesign_core::Subspace;
use serde::Serialize;

use crate::files::{read_blocks, read_census, write_census, CheckpointLock};
use crate::groups::{build_group, SpecDefaults};
use crate::report::PipelineReport;
use crate::{CensusArgs, Context, Outcome, ParamsArgs, Pipeline, ReproduceArgs, StrategyArg, VerifyArgs};

/// Cap on explicit orbit closures and `t`-subspace enumeration.
const ORBIT_CAP: u64 = 50_000_000;
/// Brute-force verification refuses more `t`-subspaces than this.
const VERIFY_BUDGET: u64 = 100_000_000;
/// Witnesses quoted in a report.
const WITNESS_EXAMPLES: usize = 3;

fn emit(ctx: &Context, report: &mut PipelineReport) {
    report.finish();
    if ctx.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
}

fn common_inputs(ctx: &Context, report: &mut PipelineReport) {
    report
        .input("seed", ctx.seed)
        .input("parallelism", ctx.parallelism)
        .input("budget_seconds", ctx.budget_seconds)
        .input("lexorder", LEX_ORDER_TAG);
}

fn big(n: &BigUint) -> String {
    n.to_string()
}

fn factor_text(n: u64) -> String {
    factor_u64(n)
        .iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// `[size, number of orbits]` pairs, ascending by size.
fn size_histogram(c: &OrbitCensus) -> Vec<(String, usize)> {
    let mut hist: BTreeMap<&BigUint, usize> = BTreeMap::new();
    for (_, size) in c.entries() {
        *hist.entry(size).or_default() += 1;
    }
    hist.into_iter().map(|(s, n)| (big(s), n)).collect()
}

fn census_outputs(report: &mut PipelineReport, prefix: &str, c: &OrbitCensus) {
    report
        .output(&format!("{prefix}orbits"), c.len())
        .output(&format!("{prefix}complete"), c.is_complete())
        .output(&format!("{prefix}orbit_sizes"), size_histogram(c))
        .certificate(&format!("{prefix}certificate"), big(c.certificate()))
        .certificate(&format!("{prefix}expected"), big(c.expected()));
}

pub(crate) fn params(ctx: &Context, a: &ParamsArgs) -> Result<Outcome> {
    let q = PrimePower::new(a.q)?;
    let p = DesignParams::new(a.t, a.d, a.k, a.lambda.clone(), q)?;
    let verdict = admissibility_report(&p, a.group_order.as_ref());
    let mut report = PipelineReport::new("params");
    report
        .input("t", a.t)
        .input("d", a.d)
        .input("k", a.k)
        .input("lambda", big(&a.lambda))
        .input("q", a.q)
        .input("group_order", a.group_order.as_ref().map(big))
        .output("admissible", verdict.admissible)
        .output("refuted_by", verdict.failed().map(|f| f.name).collect::<Vec<_>>())
        .output("filters", &verdict.filters);
    if let Ok(b) = block_count(&p) {
        report.certificate("block_count", big(&b));
    }
    emit(ctx, &mut report);
    Ok(if verdict.admissible { Outcome::Holds } else { Outcome::Refuted })
}

fn census_options(ctx: &Context, strategy: Strategy) -> CensusOptions {
    CensusOptions {
        strategy,
        seed: ctx.seed,
        parallelism: ctx.parallelism,
        deadline: ctx.deadline,
        orbit_cap: ORBIT_CAP,
        ..CensusOptions::default()
    }
}

/// Runs a census, resuming from and periodically rewriting `checkpoint`.
/// The checkpoint is locked for the duration and re-certified on resume.
fn checkpointed_census(group: &MatGroup, k: u32, opts: &CensusOptions, checkpoint: Option<&Path>) -> Result<OrbitCensus> {
    let Some(path) = checkpoint else {
        return Ok(run_census(group, k, opts, None, &mut |_| {})?);
    };
    let _lock = CheckpointLock::acquire(path)?;
    let resume = if path.exists() {
        let prev = read_census(path)?;
        if prev.group() != group.name() || prev.dims() != (group.dim(), k, group.modulus()) {
            let (d, pk, p) = prev.dims();
            bail!(
                "{} holds a census of {} on {pk}-subspaces of F_{p}^{d}, not of {} on {k}-subspaces",
                path.display(),
                prev.group(),
                group.name()
            );
        }
        if group.known_order().is_some_and(|o| o != prev.group_order()) {
            bail!("{}: header order {} differs from the group's", path.display(), prev.group_order());
        }
        let bad = prev.recertify(group, opts.orbit_cap)?;
        if let Some(rep) = bad.first() {
            bail!("{}: corrupt checkpoint, {} entries fail re-certification (first: {rep})", path.display(), bad.len());
        }
        Some(prev)
    } else {
        None
    };
    let mut write_error = None;
    let census = run_census(group, k, opts, resume, &mut |c| {
        if let Err(e) = write_census(path, c) {
            write_error.get_or_insert(e);
        }
    })?;
    if let Some(e) = write_error {
        return Err(e.into());
    }
    write_census(path, &census)?;
    Ok(census)
}

pub(crate) fn census(ctx: &Context, a: &CensusArgs) -> Result<Outcome> {
    let mut report = PipelineReport::new("census");
    let defaults = SpecDefaults { d: a.d, p: a.p, poly: a.poly.clone() };
    let group = build_group(&a.group, &defaults)?;
    let strategy = match a.strategy {
        StrategyArg::Sampled => Strategy::Sampled,
        StrategyArg::FullScan => Strategy::FullScan,
    };
    let mut opts = census_options(ctx, strategy);
    opts.checkpoint_every = a.checkpoint_every;
    opts.max_samples = a.max_samples;
    if a.force {
        opts.full_scan_limit = u64::MAX;
    }
    let census = checkpointed_census(&group, a.k, &opts, a.checkpoint.as_deref())?;
    if let Some(out) = &a.output {
        write_census(out, &census)?;
    }
    common_inputs(ctx, &mut report);
    report
        .input("group", group.name())
        .input("group_order", group.known_order().map(big))
        .input("d", group.dim())
        .input("k", a.k)
        .input("p", group.modulus())
        .input("strategy", strategy)
        .input("checkpoint", a.checkpoint.as_ref().map(|p| p.display().to_string()))
        .output("file", a.output.as_ref().map(|p| p.display().to_string()));
    census_outputs(&mut report, "", &census);
    emit(ctx, &mut report);
    Ok(if census.is_complete() { Outcome::Holds } else { Outcome::Budget })
}

#[derive(Default, Serialize)]
struct Tally {
    designs: usize,
    size_mismatch: usize,
    not_design: usize,
    other_lambda: usize,
    #[serde(skip)]
    design_reps: Vec<String>,
    #[serde(skip)]
    witnesses: Vec<(String, Witness)>,
}

impl Tally {
    fn add(&mut self, rep: &Subspace, v: &OrbitVerdict) {
        match v {
            OrbitVerdict::Design => {
                self.designs += 1;
                self.design_reps.push(encode(rep));
            }
            OrbitVerdict::SizeMismatch { .. } => self.size_mismatch += 1,
            OrbitVerdict::NotDesign(w) => {
                self.not_design += 1;
                if self.witnesses.len() < WITNESS_EXAMPLES {
                    self.witnesses.push((encode(rep), w.clone()));
                }
            }
            OrbitVerdict::OtherLambda(_) => self.other_lambda += 1,
        }
    }
}

fn verdict_line(rep: &Subspace, size: &BigUint, v: &OrbitVerdict) -> String {
    let rest = match v {
        OrbitVerdict::Design => "design".to_string(),
        OrbitVerdict::SizeMismatch { required: Some(r), .. } => format!("size-mismatch required={r}"),
        OrbitVerdict::SizeMismatch { required: None, .. } => "size-mismatch required=non-integral".to_string(),
        OrbitVerdict::NotDesign(w) => format!(
            "not-design {} {} / {} {}",
            encode(&w.first),
            w.first_count,
            encode(&w.second),
            w.second_count
        ),
        OrbitVerdict::OtherLambda(l) => format!("other-lambda {l}"),
    };
    format!("{} {size} {rest}", encode(rep))
}

/// `orbit_is_design` for every orbit of `blocks`, split across threads.
/// `None` when the deadline passes first.
fn orbit_verdicts(
    index: &KMIndex,
    blocks: &OrbitCensus,
    lambda: &BigUint,
    parallelism: usize,
    deadline: Option<Instant>,
) -> Result<Option<Vec<OrbitVerdict>>> {
    let rows: Vec<_> = blocks.entries().collect();
    let chunk = rows.len().div_ceil(parallelism.max(1)).max(1);
    let stop = AtomicBool::new(false);
    let parts = std::thread::scope(|scope| {
        let handles: Vec<_> = rows
            .chunks(chunk)
            .map(|part| {
                let stop = &stop;
                scope.spawn(move || {
                    let mut out = Vec::with_capacity(part.len());
                    for (i, (rep, size)) in part.iter().enumerate() {
                        if i % 256 == 0 && (stop.load(Ordering::Relaxed) || deadline.is_some_and(|t| Instant::now() >= t)) {
                            stop.store(true, Ordering::Relaxed);
                            return Ok(None);
                        }
                        out.push(index.orbit_is_design(rep, size, lambda)?);
                    }
                    Ok(Some(out))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verdict worker panicked"))
            .collect::<Vec<qdesign_core::designs::Result<Option<Vec<OrbitVerdict>>>>>()
    });
    let mut all = Vec::with_capacity(rows.len());
    for part in parts {
        match part? {
            Some(v) => all.extend(v),
            None => return Ok(None),
        }
    }
    Ok(Some(all))
}

/// Re-certifies `blocks` against `group`, builds the `t`-census and tallies
/// a verdict per orbit. `None` when the budget runs out.
fn census_verdicts(
    ctx: &Context,
    group: &MatGroup,
    blocks: &OrbitCensus,
    t: u32,
    lambda: &BigUint,
    report: &mut PipelineReport,
    verdict_file: Option<&Path>,
) -> Result<Option<Tally>> {
    let t_census = run_census(group, t, &census_options(ctx, Strategy::FullScan), None, &mut |_| {})?;
    census_outputs(report, "t_census_", &t_census);
    if !t_census.is_complete() {
        return Ok(None);
    }
    let index = KMIndex::new(group, &t_census, ORBIT_CAP)?;
    let Some(verdicts) = orbit_verdicts(&index, blocks, lambda, ctx.parallelism, ctx.deadline)? else {
        return Ok(None);
    };
    let mut tally = Tally::default();
    let mut lines = String::new();
    for ((rep, size), v) in blocks.entries().zip(&verdicts) {
        tally.add(rep, v);
        if verdict_file.is_some() {
            lines.push_str(&verdict_line(rep, size, v));
            lines.push('\n');
        }
    }
    if let Some(path) = verdict_file {
        fs::write(path, lines).with_context(|| format!("writing {}", path.display()))?;
    }
    report
        .output("orbits_checked", verdicts.len())
        .output("verdicts", &tally)
        .output("design_orbits", &tally.design_reps)
        .output("example_witnesses", &tally.witnesses);
    Ok(Some(tally))
}

pub(crate) fn verify(ctx: &Context, a: &VerifyArgs) -> Result<Outcome> {
    let mut report = PipelineReport::new("verify");
    common_inputs(ctx, &mut report);
    report.input("t", a.t).input("lambda", a.lambda.as_ref().map(big));
    if let Some(path) = &a.blocks {
        let blocks = read_blocks(path)?;
        let (d, k, p) = blocks.dims();
        report
            .input("blocks", path.display().to_string())
            .input("d", d)
            .input("k", k)
            .input("p", p)
            .output("block_count", blocks.len());
        let verdict = verify_design(&blocks, a.t, VERIFY_BUDGET)?;
        let mut holds = match (&verdict, &a.lambda) {
            (DesignVerdict::Design { lambda }, Some(want)) => lambda == want,
            (DesignVerdict::Design { .. }, None) => true,
            (DesignVerdict::NotDesign(_), _) => false,
        };
        match &verdict {
            DesignVerdict::Design { lambda } => {
                report.output("design", true).output("lambda", big(lambda));
            }
            DesignVerdict::NotDesign(w) => {
                report.output("design", false).certificate("witness", w);
            }
        }
        if a.dual {
            let dual = verify_design(&dual_blocks(&blocks), a.t, VERIFY_BUDGET)?;
            report.output("dual_lambda", dual.lambda().map(big));
            if let DesignVerdict::Design { lambda } = &verdict {
                let params = DesignParams::new(a.t, d, k, lambda.clone(), PrimePower::prime(p)?)?;
                let expected = dual_params(&params)?.lambda;
                report.certificate("dual_lambda_expected", big(&expected));
                holds &= dual.lambda() == Some(&expected);
            }
        }
        emit(ctx, &mut report);
        return Ok(if holds { Outcome::Holds } else { Outcome::Refuted });
    }

    let path = a.census.as_ref().ok_or_else(|| anyhow!("verify needs --census or --blocks"))?;
    let lambda = a.lambda.as_ref().ok_or_else(|| anyhow!("verify --census needs --lambda"))?;
    let blocks = read_census(path)?;
    if !blocks.is_complete() {
        bail!("{}: census is incomplete ({} of {})", path.display(), blocks.certificate(), blocks.expected());
    }
    let group = build_group(blocks.group(), &SpecDefaults::default())?;
    if group.known_order().is_some_and(|o| o != blocks.group_order()) {
        bail!("{}: header order {} differs from the rebuilt group", path.display(), blocks.group_order());
    }
    let bad = blocks.recertify(&group, ORBIT_CAP)?;
    if let Some(rep) = bad.first() {
        bail!("{}: {} entries fail re-certification (first: {rep})", path.display(), bad.len());
    }
    let (d, k, p) = blocks.dims();
    report
        .input("census", path.display().to_string())
        .input("group", group.name())
        .input("d", d)
        .input("k", k)
        .input("p", p);
    census_outputs(&mut report, "", &blocks);
    let outcome = match census_verdicts(ctx, &group, &blocks, a.t, lambda, &mut report, a.verdicts.as_deref())? {
        None => Outcome::Budget,
        Some(tally) if tally.designs > 0 => Outcome::Holds,
        Some(_) => Outcome::Refuted,
    };
    emit(ctx, &mut report);
    Ok(outcome)
}

pub(crate) fn reproduce(ctx: &Context, a: &ReproduceArgs) -> Result<Outcome> {
    match a.id {
        Pipeline::HyperplaneLevi => hyperplane_levi_orbits(ctx),
        Pipeline::BlockCount93 => block_count_93(ctx),
        Pipeline::Singer7 => singer_7(ctx),
        Pipeline::Singer11Search => singer_11_search(ctx, a),
        Pipeline::ZsigmondyScan => zsigmondy_scan(ctx, a),
        Pipeline::SingerScan => singer_scan(ctx, a),
    }
}

fn params_2(d: u32, k: u32, lambda: u32) -> Result<DesignParams> {
    Ok(DesignParams::new(2, d, k, BigUint::from(lambda), PrimePower::new(2)?)?)
}

/// K = diag(1, SL_5(2)) and H = K extended by v_1 ↦ v_1 + v_2. A
/// block-transitive 2-(6,3,λ)_2 design fixing the hyperplane would need an
/// orbit (or two equal halves) of length divisible by 93.
fn hyperplane_levi_orbits(ctx: &Context) -> Result<Outcome> {
    let mut report = PipelineReport::new("lemma-2-2");
    let (k_group, h_group) = hyperplane_levi(6, 2)?;
    let opts = census_options(ctx, Strategy::FullScan);
    let k_census = run_census(&k_group, 3, &opts, None, &mut |_| {})?;
    let h_census = run_census(&h_group, 3, &opts, None, &mut |_| {})?;
    common_inputs(ctx, &mut report);
    report
        .input("d", 6)
        .input("k", 3)
        .input("p", 2)
        .input("k_group", k_group.name())
        .input("h_group", h_group.name())
        .input("k_group_order", k_group.known_order().map(big))
        .input("h_group_order", h_group.known_order().map(big));
    census_outputs(&mut report, "k_", &k_census);
    census_outputs(&mut report, "h_", &h_census);
    if !(k_census.is_complete() && h_census.is_complete()) {
        emit(ctx, &mut report);
        return Ok(Outcome::Budget);
    }
    let divisible = |c: &OrbitCensus| {
        c.entries()
            .filter(|(_, s)| (*s % 93u32) == BigUint::from(0u32))
            .map(|(r, _)| encode(r))
            .collect::<Vec<_>>()
    };
    let (k_div, h_div) = (divisible(&k_census), divisible(&h_census));
    let k_nine_by_155 = k_census.len() == 9 && k_census.entries().all(|(_, s)| *s == BigUint::from(155u32));
    report
        .output("k_orbits_divisible_by_93", &k_div)
        .output("h_orbits_divisible_by_93", &h_div)
        .output("k_is_nine_orbits_of_155", k_nine_by_155)
        .output("no_orbit_length_divisible_by_93", k_div.is_empty() && h_div.is_empty());
    emit(ctx, &mut report);
    Ok(if k_div.is_empty() && h_div.is_empty() { Outcome::Holds } else { Outcome::Refuted })
}

/// |B| = 93λ for 2-(6,3,λ)_2.
fn block_count_93(ctx: &Context) -> Result<Outcome> {
    let mut report = PipelineReport::new("lemma-3-1");
    common_inputs(ctx, &mut report);
    report.input("t", 2).input("d", 6).input("k", 3).input("q", 2).input("lambda_range", "1..=15");
    let b1 = block_count(&params_2(6, 3, 1)?)?;
    let mut all_divisible = true;
    let mut counts = Vec::new();
    for lambda in 1..=15u32 {
        let b = block_count(&params_2(6, 3, lambda)?)?;
        all_divisible &= (&b % 93u32) == BigUint::from(0u32) && b == &b1 * lambda;
        counts.push(big(&b));
    }
    let b1_u64: u64 = b1.to_string().parse()?;
    report
        .output("block_count_lambda_1", big(&b1))
        .output("block_count_factors", factor_text(b1_u64))
        .output("block_counts", counts)
        .output("all_divisible_by_93", all_divisible)
        .certificate("primitive_part_6", big(&primitive_part(2, 6)))
        .certificate("primitive_part_5", big(&primitive_part(2, 5)));
    emit(ctx, &mut report);
    Ok(if b1 == BigUint::from(93u32) && all_divisible { Outcome::Holds } else { Outcome::Refuted })
}

/// |B| = 3·127·λ for 2-(7,3,λ)_2, while the Singer normaliser ΓL1(2^7) has
/// order 7·127.
fn singer_7(ctx: &Context) -> Result<Outcome> {
    let mut report = PipelineReport::new("lemma-3-4");
    let poly = default_poly(2, 7).ok_or_else(|| anyhow!("no default polynomial for 2^7"))?;
    let mut group = gamma_l1(&poly)?;
    let closure = group.enumerate_elements(1 << 20)?.len();
    let order = BigUint::from(closure);
    let b1 = block_count(&params_2(7, 3, 1)?)?;
    let verdict = admissibility_report(&params_2(7, 3, 1)?, Some(&order));
    let three_divides = (&order % 3u32) == BigUint::from(0u32);
    common_inputs(ctx, &mut report);
    report
        .input("t", 2)
        .input("d", 7)
        .input("k", 3)
        .input("q", 2)
        .input("group", group.name())
        .input("polynomial", poly.to_string())
        .output("block_count_lambda_1", big(&b1))
        .output("block_count_factors", factor_text(b1.to_string().parse()?))
        .output("group_order", closure)
        .output("group_order_factors", factor_text(closure as u64))
        .output("three_divides_group_order", three_divides)
        .output("refuted_by", verdict.failed().map(|f| f.name).collect::<Vec<_>>())
        .certificate("group_closure_size", closure);
    emit(ctx, &mut report);
    Ok(if b1 == BigUint::from(381u32) && !three_divides { Outcome::Holds } else { Outcome::Refuted })
}

/// Every ΓL1(2^11)-orbit on 5-spaces of F_2^11, tested as a 2-(11,5,5)_2
/// design.
fn singer_11_search(ctx: &Context, a: &ReproduceArgs) -> Result<Outcome> {
    if ctx.budget_seconds.is_none() {
        bail!("lemma-3-5 is long-running; pass --budget-seconds");
    }
    let mut report = PipelineReport::new("lemma-3-5");
    let poly = Poly::parse("x^11+x^2+1", 2)?;
    let s = singer_element(&poly)?;
    let f = frobenius_element(&poly)?;
    let mut group = gamma_l1(&poly)?;
    let closure = group.enumerate_elements(1 << 20)?.len();
    let lambda = BigUint::from(5u32);
    common_inputs(ctx, &mut report);
    report
        .input("t", 2)
        .input("d", 11)
        .input("k", 5)
        .input("p", 2)
        .input("lambda", 5)
        .input("polynomial", poly.to_string())
        .input("group", group.name())
        .input("checkpoint", a.checkpoint.as_ref().map(|p| p.display().to_string()))
        .output("singer_order", big(&element_order(&s)))
        .output("frobenius_order", big(&element_order(&f)))
        .output("group_order", closure)
        .certificate("group_closure_size", closure);

    let opts = census_options(ctx, Strategy::Sampled);
    let census = checkpointed_census(&group, 5, &opts, a.checkpoint.as_deref())?;
    census_outputs(&mut report, "", &census);
    if !census.is_complete() {
        emit(ctx, &mut report);
        return Ok(Outcome::Budget);
    }
    if let Some(out) = &a.output {
        write_census(out, &census)?;
        report.output("file", out.display().to_string());
    }
    let outcome = match census_verdicts(ctx, &group, &census, 2, &lambda, &mut report, None)? {
        None => Outcome::Budget,
        Some(tally) => {
            report.output("no_orbit_is_a_design", tally.designs == 0);
            if tally.designs == 0 {
                Outcome::Holds
            } else {
                Outcome::Refuted
            }
        }
    };
    emit(ctx, &mut report);
    Ok(outcome)
}

fn zsigmondy_scan(ctx: &Context, a: &ReproduceArgs) -> Result<Outcome> {
    PrimePower::new(a.q)?;
    if a.max_e == 0 {
        bail!("--max-e must be at least 1");
    }
    let table: Vec<(u32, String)> = (1..=a.max_e).map(|e| (e, big(&primitive_part(a.q, e)))).collect();
    let trivial: Vec<u32> = table.iter().filter(|(_, v)| v == "1").map(|(e, _)| *e).collect();
    let mut report = PipelineReport::new("zsigmondy-scan");
    common_inputs(ctx, &mut report);
    report
        .input("q", a.q)
        .input("max_e", a.max_e)
        .output("trivial_exponents", &trivial)
        .certificate("primitive_parts", &table);
    emit(ctx, &mut report);
    Ok(Outcome::Holds)
}

fn parse_field(text: &str) -> Result<(u64, u32)> {
    let (p, d) = text.split_once('^').ok_or_else(|| anyhow!("field {text:?} is not of the form p^d"))?;
    let (p, d): (u64, u32) = (p.trim().parse()?, d.trim().parse()?);
    PrimePower::prime(p).with_context(|| format!("field {text:?}"))?;
    Ok((p, d))
}

fn singer_scan(ctx: &Context, a: &ReproduceArgs) -> Result<Outcome> {
    let fields: Vec<(u64, u32)> = if a.fields.is_empty() {
        vec![(2, 11), (2, 13), (2, 19), (3, 7), (5, 7)]
    } else {
        a.fields.iter().map(|f| parse_field(f)).collect::<Result<_>>()?
    };
    let mut hits = Vec::new();
    for &(p, d) in &fields {
        let found: Vec<(u32, String)> = singer_feasibility_scan(p, d).into_iter().map(|(k, e)| (k, big(&e))).collect();
        hits.push((format!("{p}^{d}"), found));
    }
    let mut report = PipelineReport::new("singer-scan");
    common_inputs(ctx, &mut report);
    report
        .input("fields", fields.iter().map(|(p, d)| format!("{p}^{d}")).collect::<Vec<_>>())
        .input("k_range", "3..=d/2")
        .output("integral", &hits);
    emit(ctx, &mut report);
    Ok(Outcome::Holds)
}
