//! Prices a set `A ⊆ E` as a concrete code: first the sequence of
//! `(|[A_i]|, g_i)` pairs, then each 2-component on its own.
//!
//! * isolated: the vertex, `log2(N/2)` bits;
//! * small: seed vertex (`log2(N/2)`), index of `[A_i]` among the 2-linked
//!   even sets of that size whose smallest vertex is the seed, then `A_i` as
//!   a subset of `[A_i]`;
//! * large: the approximation pair among the family's image, then the
//!   certificate for `A_i` under that pair.

use std::sync::OnceLock;

use serde::Serialize;

use super::components::{classify_components, ComponentClass, ComponentProfile};
use crate::containers::{build_pair_index, encode, phi_trivial, FamilyQuery, TrivialPhi};
use crate::cube::{closure, Dim, Parity, VertexSet};
use crate::error::{Error, Result};
use crate::exact::{log2_binomial, log2_sum_exp2};
use crate::half::HalfCube;
use crate::linked::for_each_connected_with_min;

/// How the closure of a small component is indexed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SmallIndex {
    /// Among 2-linked even sets of the same size with the same smallest vertex.
    LinkedSets,
    /// Among all even sets of the same size with the same smallest vertex;
    /// used past `d = 5`, where linked sets are not enumerated.
    Subsets,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageBits {
    pub stage: &'static str,
    pub bits: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentCost {
    pub profile: ComponentProfile,
    pub stages: Vec<StageBits>,
    pub bits: f64,
    /// `bits <= g_i`
    pub within_g: bool,
    pub index: Option<SmallIndex>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostAudit {
    pub d: Dim,
    pub gamma: f64,
    pub small_threshold: u64,
    /// `g = |N(A)| = Σ g_i`
    pub g: usize,
    pub c_of_a: usize,
    pub decomposition_bits: f64,
    pub components: Vec<ComponentCost>,
    pub total_bits: f64,
    /// `g log2(d) / d`
    pub reference_decomposition: f64,
    /// `Σ t_i` over large components.
    pub large_deficit: usize,
    pub within_g: bool,
}

impl CostAudit {
    /// Isolated and small components each cost at most their `g_i`.
    pub fn isolated_and_small_within(&self) -> bool {
        self.components
            .iter()
            .filter(|c| c.profile.class != ComponentClass::Large)
            .all(|c| c.within_g)
    }
}

const LINKED_TABLE_DIMS: usize = 5;

/// `counts[seed][k]`: 2-linked even sets of size `k` with smallest rank `seed`.
fn linked_counts(d: Dim) -> Option<&'static Vec<Vec<u128>>> {
    static TABLES: [OnceLock<Vec<Vec<u128>>>; LINKED_TABLE_DIMS] =
        [const { OnceLock::new() }; LINKED_TABLE_DIMS];
    let slot = TABLES.get(d.get() as usize - 1)?;
    Some(slot.get_or_init(|| {
        let cube = HalfCube::new(d).expect("small dimension");
        let h = cube.class_size();
        (0..h as u32)
            .map(|root| {
                let mut row = vec![0u128; h + 1];
                for_each_connected_with_min(cube.even_links(), root, h as u32, |_, size| {
                    row[size as usize] += 1;
                    true
                });
                row
            })
            .collect()
    }))
}

/// `log2` of the number of closures a small component with smallest
/// closure vertex `seed` and closure size `k` could have.
pub fn small_component_index_count(d: Dim, seed: u32, k: usize) -> Result<(f64, SmallIndex)> {
    if Parity::of(seed) != Parity::Even || seed as usize >= d.order() || k == 0 {
        return Err(Error::Domain(format!("bad seed {seed} or size {k}")));
    }
    // rank of an even vertex among the even class in ascending order
    let rank = seed / 2;
    if let Some(table) = linked_counts(d) {
        let count = table[rank as usize].get(k).copied().unwrap_or(0);
        return Ok(((count as f64).log2(), SmallIndex::LinkedSets));
    }
    let above = (d.half() as u64) - 1 - u64::from(rank);
    Ok((log2_binomial(above, k as u64 - 1), SmallIndex::Subsets))
}

/// Bits to specify `(|[A_i]|, g_i)_i` given their sums `c` and `g`: the
/// number of pairs of compositions with equal part counts `s <= g/d`.
fn decomposition_bits(d: Dim, g: usize, c: usize) -> f64 {
    let parts = (g / d.get() as usize).max(1);
    let terms = (1..=parts).map(|s| {
        log2_binomial(g as u64 - 1, s as u64 - 1) + log2_binomial(c as u64 - 1, s as u64 - 1)
    });
    log2_sum_exp2(terms)
}

fn component_cost(d: Dim, profile: ComponentProfile, gamma: f64) -> Result<ComponentCost> {
    let seed_bits = f64::from(d.get() - 1);
    let (stages, index) = match profile.class {
        ComponentClass::Isolated => (
            vec![StageBits {
                stage: "vertex",
                bits: seed_bits,
            }],
            None,
        ),
        ComponentClass::Small => {
            let closed = closure(&profile.vertices)?;
            let seed = closed.first().expect("nonempty component");
            let (index_bits, kind) = small_component_index_count(d, seed, closed.len())?;
            (
                vec![
                    StageBits {
                        stage: "seed",
                        bits: seed_bits,
                    },
                    StageBits {
                        stage: "closure-index",
                        bits: index_bits,
                    },
                    StageBits {
                        stage: "subset-of-closure",
                        bits: closed.len() as f64,
                    },
                ],
                Some(kind),
            )
        }
        ComponentClass::Large => {
            let q = FamilyQuery::new(d, profile.closure as u32, profile.g as u32)?;
            let index = build_pair_index(&q, &TrivialPhi)?;
            let ctx = index.context(&phi_trivial(&profile.vertices)?)?;
            let cert = encode(&ctx, &profile.vertices, gamma)?;
            (
                vec![
                    StageBits {
                        stage: "pair",
                        bits: (index.image_size() as f64).log2(),
                    },
                    StageBits {
                        stage: "certificate",
                        bits: cert.total_bits() as f64,
                    },
                ],
                None,
            )
        }
    };
    let bits = stages.iter().map(|s| s.bits).sum::<f64>();
    Ok(ComponentCost {
        within_g: bits <= profile.g as f64,
        profile,
        stages,
        bits,
        index,
    })
}

/// Audits the cost of specifying a nonempty `A ⊆ E`.
pub fn cost_audit(a: &VertexSet, gamma: f64, small_threshold: Option<u64>) -> Result<CostAudit> {
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    if a.parity()? != Some(Parity::Even) {
        return Err(Error::Domain("cost audit expects an even set".into()));
    }
    let d = a.dim();
    let dec = classify_components(a, small_threshold)?;
    let g = dec.neighborhood_size();
    let decomposition = decomposition_bits(d, g, dec.c_of_a);
    let large_deficit = dec
        .components
        .iter()
        .filter(|c| c.class == ComponentClass::Large)
        .map(|c| c.t)
        .sum();
    let components = dec
        .components
        .into_iter()
        .map(|p| component_cost(d, p, gamma))
        .collect::<Result<Vec<_>>>()?;
    let total_bits = decomposition + components.iter().map(|c| c.bits).sum::<f64>();
    let dd = f64::from(d.get());
    Ok(CostAudit {
        d,
        gamma,
        small_threshold: dec.small_threshold,
        g,
        c_of_a: dec.c_of_a,
        decomposition_bits: decomposition,
        components,
        total_bits,
        reference_decomposition: g as f64 * dd.log2() / dd,
        large_deficit,
        within_g: total_bits <= g as f64,
    })
}
