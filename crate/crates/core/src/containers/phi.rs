use std::collections::BTreeMap;

use serde::Serialize;

use super::{enumerate_family, FamilyQuery};
use crate::cube::{closure, neighborhood, two_components, Parity, VertexSet};
use crate::error::{Error, Result};

/// A container pair: `S` over-approximates `[A]` on the even side and `F`
/// under-approximates `N(A)` on the odd side.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ApproxPair {
    pub s: VertexSet,
    pub f: VertexSet,
}

impl ApproxPair {
    /// `|S| - |F|`.
    pub fn slack(&self) -> i64 {
        self.s.len() as i64 - self.f.len() as i64
    }

    /// `S ⊇ [A]` and `F ⊆ N(A)`.
    pub fn covers(&self, a: &VertexSet) -> Result<bool> {
        Ok(closure(a)?.is_subset(&self.s) && self.f.is_subset(&neighborhood(a)))
    }
}

/// A map from family members to approximation pairs.
pub trait Approximator {
    fn name(&self) -> &str;
    fn approximate(&self, a: &VertexSet) -> Result<ApproxPair>;
}

/// `(S, F) = ([A], N(A))`.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrivialPhi;

impl Approximator for TrivialPhi {
    fn name(&self) -> &str {
        "trivial"
    }

    fn approximate(&self, a: &VertexSet) -> Result<ApproxPair> {
        phi_trivial(a)
    }
}

pub fn phi_trivial(a: &VertexSet) -> Result<ApproxPair> {
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    if a.parity()? != Some(Parity::Even) {
        return Err(Error::Domain("approximated sets must be even".into()));
    }
    if two_components(a).len() != 1 {
        return Err(Error::NotTwoLinked);
    }
    Ok(ApproxPair {
        s: closure(a)?,
        f: neighborhood(a),
    })
}

/// `G(a, g)` grouped by image pair.
#[derive(Clone, Debug)]
pub struct PairIndex {
    pub query: FamilyQuery,
    pairs: BTreeMap<ApproxPair, Vec<VertexSet>>,
}

impl PairIndex {
    pub fn pairs(&self) -> &BTreeMap<ApproxPair, Vec<VertexSet>> {
        &self.pairs
    }

    /// `|W|`, the number of distinct pairs used.
    pub fn image_size(&self) -> usize {
        self.pairs.len()
    }

    pub fn max_preimage(&self) -> usize {
        self.pairs.values().map(Vec::len).max().unwrap_or(0)
    }

    pub fn family_size(&self) -> usize {
        self.pairs.values().map(Vec::len).sum()
    }

    pub fn preimage(&self, pair: &ApproxPair) -> Option<&[VertexSet]> {
        self.pairs.get(pair).map(Vec::as_slice)
    }

    pub fn context(&self, pair: &ApproxPair) -> Result<PairContext> {
        let pre = self.preimage(pair).ok_or(Error::NotInPreimage)?;
        PairContext::new(self.query, pair.clone(), pre.to_vec())
    }

    pub fn contexts(&self) -> impl Iterator<Item = Result<PairContext>> + '_ {
        self.pairs
            .iter()
            .map(|(p, pre)| PairContext::new(self.query, p.clone(), pre.clone()))
    }
}

pub fn build_pair_index(q: &FamilyQuery, phi: &dyn Approximator) -> Result<PairIndex> {
    let mut pairs: BTreeMap<ApproxPair, Vec<VertexSet>> = BTreeMap::new();
    for a in enumerate_family(q)? {
        pairs.entry(phi.approximate(&a)?).or_default().push(a);
    }
    Ok(PairIndex { query: *q, pairs })
}

/// What encoder and decoder both know: the family, the pair, its preimage,
/// and the canonical closed member derived from them.
#[derive(Clone, Debug)]
pub struct PairContext {
    pub query: FamilyQuery,
    pub pair: ApproxPair,
    preimage: Vec<VertexSet>,
    a_star: VertexSet,
    g_star: VertexSet,
}

impl PairContext {
    /// `A*` is the closure of the lexicographically smallest preimage member.
    pub fn new(query: FamilyQuery, pair: ApproxPair, mut preimage: Vec<VertexSet>) -> Result<Self> {
        preimage.sort();
        preimage.dedup();
        let first = preimage.first().ok_or(Error::EmptyInput)?;
        let a_star = closure(first)?;
        let g_star = neighborhood(&a_star);
        Ok(PairContext {
            query,
            pair,
            preimage,
            a_star,
            g_star,
        })
    }

    pub fn preimage(&self) -> &[VertexSet] {
        &self.preimage
    }

    pub fn contains(&self, a: &VertexSet) -> bool {
        self.preimage.binary_search(a).is_ok()
    }

    pub fn a_star(&self) -> &VertexSet {
        &self.a_star
    }

    pub fn g_star(&self) -> &VertexSet {
        &self.g_star
    }

    /// `t = g - a`.
    pub fn deficit(&self) -> u32 {
        self.query.deficit()
    }

    /// 1 when `|S| < g - gamma t`, else 2.
    pub fn case_for(&self, gamma: f64) -> u8 {
        let g = f64::from(self.query.g);
        if (self.pair.s.len() as f64) < g - gamma * f64::from(self.deficit()) {
            1
        } else {
            2
        }
    }
}
