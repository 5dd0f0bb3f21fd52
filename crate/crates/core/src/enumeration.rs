//! Exact counts of balanced and ordinary independent sets from a profile table.
//!
//! Every independent set `I` splits as `A = I ∩ E` and `B = I ∩ O` with
//! `B ⊆ O \ N(A)`. Summing over the profile of `A`:
//!
//! * `bis = Σ_A C(N/2 - |N(A)|, |A|)`
//! * `i   = Σ_A 2^(N/2 - |N(A)|)`

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cube::Dim;
use crate::error::{Error, Result};
use crate::exact::{binomial_checked, binomial_row, log2_u128, pow2};
use crate::profile::{sweep_profiles, Features, ProfileTable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub d: Dim,
    pub bis: u128,
    pub is_count: u128,
    /// `k -> #BIS with k even and k odd vertices`, for `k = 0..=N/4`.
    pub by_size: BTreeMap<u32, u128>,
    pub max_bis: u64,
    pub lower_bound: u128,
}

impl CountReport {
    pub fn from_profile(table: &ProfileTable) -> Result<Self> {
        Ok(CountReport {
            d: table.dim(),
            bis: count_bis(table)?,
            is_count: count_is(table)?,
            by_size: count_bis_by_size(table)?,
            max_bis: max_bis_size(table),
            lower_bound: lower_bound_series(table.dim())?,
        })
    }

    pub fn compute(dim: Dim, threads: usize) -> Result<Self> {
        Self::from_profile(&sweep_profiles(dim, Features::PLAIN, threads)?)
    }
}

fn checked_sum(terms: impl IntoIterator<Item = Result<u128>>, what: &'static str) -> Result<u128> {
    let mut total = 0u128;
    for t in terms {
        total = total.checked_add(t?).ok_or(Error::Overflow(what))?;
    }
    Ok(total)
}

/// Balanced independent sets, the empty set included.
pub fn count_bis(table: &ProfileTable) -> Result<u128> {
    Ok(count_bis_by_size(table)?.values().sum())
}

/// All independent sets, the empty set included.
pub fn count_is(table: &ProfileTable) -> Result<u128> {
    let half = table.dim().half() as u32;
    checked_sum(
        table.entries().iter().map(|(k, &c)| {
            c.checked_mul(pow2(half - u32::from(k.g))?)
                .ok_or(Error::Overflow("independent set count"))
        }),
        "independent set count",
    )
}

pub fn count_bis_by_size(table: &ProfileTable) -> Result<BTreeMap<u32, u128>> {
    let half = table.dim().half() as u64;
    let max_k = (table.dim().order() / 4) as u32;
    let mut out: BTreeMap<u32, u128> = (0..=max_k).map(|k| (k, 0)).collect();
    for (key, &c) in table.entries() {
        let free = half - u64::from(key.g);
        let ways = binomial_checked(free, u64::from(key.a))?;
        if ways == 0 {
            continue;
        }
        let slot = out.entry(u32::from(key.a)).or_insert(0);
        let term = c
            .checked_mul(ways)
            .ok_or(Error::Overflow("balanced count"))?;
        *slot = slot
            .checked_add(term)
            .ok_or(Error::Overflow("balanced count"))?;
    }
    Ok(out)
}

/// Closed-form maximum balanced independent set size:
/// `2^(d-1) - 2 C(d-2, (d-2)/2)` for even `d`, `2^(d-1) - C(d-1, (d-1)/2)` for odd `d`.
pub fn barber_formula(dim: Dim) -> Result<u64> {
    let d = u64::from(dim.get());
    let half = dim.half() as u128;
    let deficit = if d % 2 == 0 {
        2 * binomial_checked(d - 2, (d - 2) / 2)?
    } else {
        binomial_checked(d - 1, (d - 1) / 2)?
    };
    Ok((half - deficit) as u64)
}

/// `max_A 2 min(|A|, N/2 - |N(A)|)`.
pub fn max_bis_size(table: &ProfileTable) -> u64 {
    let half = table.dim().half() as u64;
    table
        .entries()
        .keys()
        .map(|k| 2 * u64::from(k.a).min(half - u64::from(k.g)))
        .max()
        .unwrap_or(0)
}

/// `Σ_k C(M/2, k)^2` with `M` the maximum BIS size: the balanced subsets of
/// one maximum BIS.
pub fn lower_bound_series(dim: Dim) -> Result<u128> {
    let m = barber_formula(dim)?;
    let row = binomial_row(m / 2)?;
    checked_sum(
        row.into_iter().map(|c| {
            c.checked_mul(c)
                .ok_or(Error::Overflow("lower bound series"))
        }),
        "lower bound series",
    )
}

/// `(1 - log2(count) / (N/2)) * sqrt(d)`.
pub fn scaling_statistic(dim: Dim, log2_count: f64) -> f64 {
    (1.0 - log2_count / dim.half() as f64) * f64::from(dim.get()).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub d: Dim,
    pub log2_bis: f64,
    pub x_d: f64,
    /// `i(Q_d) / (2 sqrt(e) 2^(N/2))`
    pub is_ratio: f64,
}

impl ScalingRow {
    pub fn from_profile(table: &ProfileTable) -> Result<Self> {
        let dim = table.dim();
        let log2_bis = log2_u128(count_bis(table)?);
        let log2_is = log2_u128(count_is(table)?);
        let is_ratio = (log2_is - 1.0 - dim.half() as f64).exp2() / 0.5f64.exp();
        Ok(ScalingRow {
            d: dim,
            log2_bis,
            x_d: scaling_statistic(dim, log2_bis),
            is_ratio,
        })
    }
}

pub fn scaling_stats(d_min: u32, d_max: u32, threads: usize) -> Result<Vec<ScalingRow>> {
    if d_min > d_max {
        return Err(Error::Domain(format!("empty range {d_min}..={d_max}")));
    }
    (d_min..=d_max)
        .map(|d| ScalingRow::from_profile(&sweep_profiles(Dim::new(d)?, Features::PLAIN, threads)?))
        .collect()
}
