//! Numerical checks of the supporting counting and isoperimetric facts, the
//! 2-component decomposition of an even set, and the cost audit that prices
//! a set component by component.

mod components;
mod cost;
mod isoperimetry;

use serde::Serialize;

pub use components::{classify_components, ComponentClass, ComponentProfile, Decomposition};
pub use cost::{cost_audit, small_component_index_count, ComponentCost, CostAudit, SmallIndex};
pub use isoperimetry::{
    isoperimetry_scan, small_set_expansion_scan, IsoperimetryScan, ScanMode, SmallSetScan,
};

use crate::cube::{Dim, Vertex};
use crate::error::{Error, Result};
use crate::exact::{binomial_checked, pow2};
use crate::linked::{cube_adjacency, for_each_connected};

/// Default threshold for "tiny" balanced sets: `H(0.1) ≈ 0.469 < 1/2`.
pub const DEFAULT_ALPHA: f64 = 0.1;

/// `H(α) = -α log2 α - (1-α) log2(1-α)`, with `0 log 0 = 0`.
pub fn binary_entropy(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!(
            "entropy argument {alpha} outside [0, 1]"
        )));
    }
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.log2() };
    Ok(term(alpha) + term(1.0 - alpha))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BinomialTail {
    pub n: u32,
    pub alpha: f64,
    /// `Σ_{i <= αn} C(n, i)`
    pub sum: u128,
    /// `H(α) n`
    pub log2_bound: f64,
    pub holds: bool,
}

/// Compares the exact binomial tail with `2^{H(α) n}`.
///
/// The cutoff is `floor(αn)` with a `1e-9` guard so that products such as
/// `0.3 * 10` land on the intended integer.
pub fn check_binom_tail(n: u32, alpha: f64) -> Result<BinomialTail> {
    if n == 0 || !(0.0..=0.5).contains(&alpha) {
        return Err(Error::Domain(format!(
            "binomial tail needs n >= 1 and α in [0, 1/2], got n = {n}, α = {alpha}"
        )));
    }
    let cutoff = (alpha * f64::from(n) + 1e-9).floor() as u64;
    let mut sum = 0u128;
    for i in 0..=cutoff {
        sum = sum
            .checked_add(binomial_checked(u64::from(n), i)?)
            .ok_or(Error::Overflow("binomial tail"))?;
    }
    let log2_bound = binary_entropy(alpha)? * f64::from(n);
    let holds = crate::exact::log2_u128(sum) <= log2_bound + 1e-9;
    Ok(BinomialTail {
        n,
        alpha,
        sum,
        log2_bound,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Compositions {
    pub m: u32,
    pub max_parts: Option<u32>,
    /// Compositions of `m` (with at most `max_parts` parts when given).
    pub exact: u128,
    /// `Σ_{i <= b} C(m-1, i)`, the restricted-count expression.
    pub index_sum: Option<u128>,
    /// `b log2(e m / b)`
    pub log2_index_bound: Option<f64>,
}

pub fn compositions(m: u32, max_parts: Option<u32>) -> Result<Compositions> {
    if m == 0 || m > 128 {
        return Err(Error::Domain(format!(
            "compositions need 1 <= m <= 128, got {m}"
        )));
    }
    let Some(b) = max_parts else {
        return Ok(Compositions {
            m,
            max_parts: None,
            exact: pow2(m - 1)?,
            index_sum: None,
            log2_index_bound: None,
        });
    };
    if b == 0 || 2 * b > m {
        return Err(Error::Domain(format!(
            "part bound needs 1 <= b <= m/2, got b = {b}, m = {m}"
        )));
    }
    let n = u64::from(m - 1);
    let mut exact = 0u128;
    let mut index = 0u128;
    for s in 0..=u64::from(b) {
        let c = binomial_checked(n, s)?;
        if s < u64::from(b) {
            exact += c;
        }
        index += c;
    }
    let bf = f64::from(b);
    Ok(Compositions {
        m,
        max_parts: Some(b),
        exact,
        index_sum: Some(index),
        log2_index_bound: Some(bf * (std::f64::consts::E * f64::from(m) / bf).log2()),
    })
}

pub const MAX_LINKED_DIM: u32 = 4;
pub const MAX_LINKED_SIZE: u32 = 5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkedSetCount {
    pub d: Dim,
    pub size: u32,
    pub vertex: u32,
    pub k: u32,
    pub count: u128,
    /// `log2(count) / (x log2 d)`, the constant in `2^{C x log d}`.
    pub empirical_c: Option<f64>,
}

/// `k`-linked subsets of the whole cube of size `x` containing `v`.
pub fn linked_sets_count(d: Dim, x: u32, v: Vertex, k: u32) -> Result<LinkedSetCount> {
    if d.get() > MAX_LINKED_DIM || x > MAX_LINKED_SIZE {
        return Err(Error::capacity(
            "linked-set enumeration",
            format!("d <= {MAX_LINKED_DIM} and x <= {MAX_LINKED_SIZE}"),
        ));
    }
    if k == 0 || x == 0 {
        return Err(Error::Domain("linked sets need k >= 1 and x >= 1".into()));
    }
    let adj = cube_adjacency(d.get(), k);
    let mut count = 0u128;
    for_each_connected(&adj, v.id(), 0, x, |_, size| {
        if size == x {
            count += 1;
        }
        true
    });
    let denom = f64::from(x) * f64::from(d.get()).log2();
    let empirical_c = (count > 0 && denom > 0.0).then(|| (count as f64).log2() / denom);
    Ok(LinkedSetCount {
        d,
        size: x,
        vertex: v.id(),
        k,
        count,
        empirical_c,
    })
}
