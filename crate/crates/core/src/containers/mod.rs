//! The families `G(a, g)` of 2-linked even sets with closure size `a` and
//! neighborhood size `g`, their approximation pairs, and the two-case
//! certificate code that specifies a member given its pair.

mod audit;
mod certificate;
mod phi;

use std::collections::BTreeMap;

use serde::Serialize;

pub use audit::{audit_family, choose_gamma, gamma_admissible, FamilyAudit, Regime, DEFAULT_GAMMA};
pub use certificate::{
    decode, decode_detailed, encode, Bitmap, Case2Reference, Certificate, CostLedger, Decoded,
    Payload, StageCost,
};
pub use phi::{
    build_pair_index, phi_trivial, ApproxPair, Approximator, PairContext, PairIndex, TrivialPhi,
};

use crate::cube::Dim;
use crate::error::{Error, Result};
use crate::half::HalfCube;
use crate::linked::for_each_connected_with_min;

/// Largest `d` handled by exhaustive subset enumeration.
pub const MAX_EXHAUSTIVE_DIM: u32 = 4;
/// Largest `d` handled by the pruned linked-set search.
pub const MAX_FAMILY_DIM: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FamilyQuery {
    pub d: Dim,
    /// Target `|[A]|`.
    pub a: u32,
    /// Target `|N(A)|`.
    pub g: u32,
}

impl FamilyQuery {
    pub fn new(d: Dim, a: u32, g: u32) -> Result<Self> {
        if a == 0 || a > g || g as usize > d.half() {
            return Err(Error::Domain(format!(
                "family query needs 1 <= a <= g <= N/2 = {}, got a = {a}, g = {g}",
                d.half()
            )));
        }
        Ok(FamilyQuery { d, a, g })
    }

    /// `t = g - a`.
    pub fn deficit(&self) -> u32 {
        self.g - self.a
    }
}

fn check_family_dim(d: Dim) -> Result<()> {
    if d.get() > MAX_FAMILY_DIM {
        Err(Error::capacity(
            "family enumeration",
            format!("d <= {MAX_FAMILY_DIM}"),
        ))
    } else {
        Ok(())
    }
}

/// Visits `(A, N(A))` rank masks for every 2-linked even `A` with
/// `|A| <= max_size` and `|N(A)| <= max_g`.
fn visit_linked(cube: &HalfCube, max_size: u32, max_g: u32, mut f: impl FnMut(u64, u64)) {
    let h = cube.class_size() as u32;
    if cube.dim().get() <= MAX_EXHAUSTIVE_DIM {
        for a in 1..(1u64 << h) {
            if a.count_ones() > max_size || !cube.is_linked(a) {
                continue;
            }
            let g = cube.neighborhood(a);
            if g.count_ones() <= max_g {
                f(a, g);
            }
        }
        return;
    }
    let adj = cube.even_links();
    for root in 0..h {
        for_each_connected_with_min(adj, root, max_size, |a, _| {
            let g = cube.neighborhood(a);
            if g.count_ones() > max_g {
                return false;
            }
            f(a, g);
            true
        });
    }
}

fn sorted_sets(cube: &HalfCube, masks: Vec<u64>) -> Vec<crate::cube::VertexSet> {
    let mut sets: Vec<_> = masks.into_iter().map(|m| cube.even_set(m)).collect();
    sets.sort();
    sets
}

/// All members of `G(a, g)` in canonical order.
pub fn enumerate_family(q: &FamilyQuery) -> Result<Vec<crate::cube::VertexSet>> {
    check_family_dim(q.d)?;
    let cube = HalfCube::new(q.d)?;
    let mut found = Vec::new();
    visit_linked(&cube, q.a, q.g, |a, g| {
        if g.count_ones() == q.g && cube.covered_by(g).count_ones() == q.a {
            found.push(a);
        }
    });
    Ok(sorted_sets(&cube, found))
}

/// Every nonempty family `G(a, g)` of one cube, keyed by `(a, g)`.
pub fn enumerate_all_families(d: Dim) -> Result<BTreeMap<(u32, u32), Vec<crate::cube::VertexSet>>> {
    check_family_dim(d)?;
    let cube = HalfCube::new(d)?;
    let h = cube.class_size() as u32;
    let mut masks: BTreeMap<(u32, u32), Vec<u64>> = BTreeMap::new();
    visit_linked(&cube, h, h, |a, g| {
        let key = (cube.covered_by(g).count_ones(), g.count_ones());
        masks.entry(key).or_default().push(a);
    });
    Ok(masks
        .into_iter()
        .map(|(k, v)| (k, sorted_sets(&cube, v)))
        .collect())
}
