use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Serialize, Serializer};

use super::{
    block_count, divisibility_filter, exact_div, gaussian_binomial, lambda_two, primitive_part,
    spread_admissible, DesignParams, QArithError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterStatus {
    Pass,
    Fail,
    Skipped,
}

fn ser_pair<S: Serializer>(pair: &Option<(BigUint, BigUint)>, s: S) -> Result<S::Ok, S::Error> {
    match pair {
        Some((a, b)) => [a.to_string(), b.to_string()].serialize(s),
        None => s.serialize_none(),
    }
}

/// One necessary-condition check. A failing filter always carries a witness
/// pair of exact integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilterOutcome {
    pub name: &'static str,
    pub status: FilterStatus,
    #[serde(serialize_with = "ser_pair")]
    pub witness: Option<(BigUint, BigUint)>,
    pub detail: String,
}

impl FilterOutcome {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        FilterOutcome { name, status: FilterStatus::Pass, witness: None, detail: detail.into() }
    }

    fn fail(name: &'static str, witness: (BigUint, BigUint), detail: impl Into<String>) -> Self {
        FilterOutcome { name, status: FilterStatus::Fail, witness: Some(witness), detail: detail.into() }
    }

    fn skipped(name: &'static str, detail: impl Into<String>) -> Self {
        FilterOutcome { name, status: FilterStatus::Skipped, witness: None, detail: detail.into() }
    }

    fn from_quotient(name: &'static str, what: &str, r: Result<BigUint, QArithError>) -> Self {
        match r {
            Ok(v) => Self::pass(name, format!("{what} = {v}")),
            Err(QArithError::NonIntegral { numerator, denominator }) => Self::fail(
                name,
                (numerator.clone(), denominator.clone()),
                format!("{what} = {numerator}/{denominator} is not an integer"),
            ),
            Err(e) => Self::skipped(name, e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityVerdict {
    pub params: String,
    pub filters: Vec<FilterOutcome>,
    pub admissible: bool,
}

impl AdmissibilityVerdict {
    pub fn failed(&self) -> impl Iterator<Item = &FilterOutcome> {
        self.filters.iter().filter(|f| f.status == FilterStatus::Fail)
    }

    pub fn filter(&self, name: &str) -> Option<&FilterOutcome> {
        self.filters.iter().find(|f| f.name == name)
    }
}

/// Runs every arithmetic necessary condition that applies to `params`.
///
/// With a group order, two more checks apply to a block-transitive design
/// whose automorphism group meets `PΓL_d(q)` in a group of that order:
/// `|B|` divides `2|G|`, and the primitive-part divisibility condition.
pub fn admissibility_report(params: &DesignParams, group_order: Option<&BigUint>) -> AdmissibilityVerdict {
    let q = params.q.value();
    let (t, d, k) = (params.t, params.d, params.k);
    let mut filters = Vec::new();

    let blocks = block_count(params);
    filters.push(FilterOutcome::from_quotient("block-count", "|B|", blocks.clone()));

    if t >= 3 {
        filters.push(FilterOutcome::from_quotient("lambda-two", "lambda_2", lambda_two(params)));
    } else {
        filters.push(FilterOutcome::skipped("lambda-two", "t = 2, lambda_2 = lambda"));
    }

    let dual = exact_div(
        &params.lambda * gaussian_binomial(d - t, k, q),
        gaussian_binomial(d - t, k - t, q),
    );
    filters.push(FilterOutcome::from_quotient("dual-lambda", "lambda'", dual));

    if params.lambda.is_one() {
        // derive down to a 1-design: a spread of (k-t+1)-spaces in dimension d-t+1
        let (sd, sk) = (d - t + 1, k - t + 1);
        if spread_admissible(sd, sk) {
            filters.push(FilterOutcome::pass("derived-spread", format!("{sk} divides {sd}")));
        } else {
            filters.push(FilterOutcome::fail(
                "derived-spread",
                (BigUint::from(sd), BigUint::from(sk)),
                format!("derived 1-({sd},{sk},1) spread impossible: {sk} does not divide {sd}"),
            ));
        }
    } else {
        filters.push(FilterOutcome::skipped("derived-spread", "lambda > 1"));
    }

    if let Some(order) = group_order {
        let twice = order * 2u32;
        match &blocks {
            Ok(b) if twice.is_multiple_of(b) => filters.push(FilterOutcome::pass(
                "blocks-divide-group",
                format!("|B| = {b} divides 2|G| = {twice}"),
            )),
            Ok(b) => filters.push(FilterOutcome::fail(
                "blocks-divide-group",
                (b.clone(), twice.clone()),
                format!("|B| = {b} does not divide 2|G| = {twice}"),
            )),
            Err(_) => filters.push(FilterOutcome::skipped("blocks-divide-group", "|B| not integral")),
        }

        let small_k = k.min(d - k);
        if small_k > 2 {
            let reduced = DesignParams { t: 2, k: small_k, ..params.clone() };
            let needed = primitive_part(q, d) * primitive_part(q, d - 1);
            if divisibility_filter(&reduced, order) {
                filters.push(FilterOutcome::pass(
                    "primitive-divisibility",
                    format!("Phi*_d * Phi*_(d-1) = {needed} divides 2|G|"),
                ));
            } else {
                filters.push(FilterOutcome::fail(
                    "primitive-divisibility",
                    (needed.clone(), twice),
                    format!("Phi*_d * Phi*_(d-1) = {needed} does not divide 2|G|"),
                ));
            }
        } else {
            filters.push(FilterOutcome::skipped(
                "primitive-divisibility",
                "needs 2 < min(k, d-k)",
            ));
        }
    }

    let admissible = filters.iter().all(|f| f.status != FilterStatus::Fail);
    AdmissibilityVerdict { params: params.to_string(), filters, admissible }
}
