use serde::Serialize;

use super::certificate::{decode, encode, Case2Reference};
use super::phi::{build_pair_index, Approximator};
use super::FamilyQuery;
use crate::bounds::binary_entropy;
use crate::error::Result;

pub const DEFAULT_GAMMA: f64 = 0.08;

/// `0 < γ < 1` and `γ + H(γ) <= 1/2`, which keeps the Case 2 cost below `g - t/2`.
pub fn gamma_admissible(gamma: f64) -> bool {
    gamma > 0.0 && gamma < 1.0 && binary_entropy(gamma).is_ok_and(|h| gamma + h <= 0.5)
}

pub fn choose_gamma() -> f64 {
    debug_assert!(gamma_admissible(DEFAULT_GAMMA));
    DEFAULT_GAMMA
}

/// Where a family sits relative to the asymptotic hypotheses `a <= N/4`
/// and `g >= d^4`. Recorded only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Regime {
    pub closure_at_most_quarter: bool,
    pub g_at_least_d4: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyAudit {
    pub query: FamilyQuery,
    pub t: u32,
    pub family_size: usize,
    /// `None` for an empty family.
    pub log2_family_size: Option<f64>,
    pub g_minus_t: u32,
    /// `|W|`
    pub image_size: usize,
    pub max_preimage: usize,
    pub case1: usize,
    pub case2: usize,
    pub max_certificate_bits: usize,
    /// Certificates longer than `max(|S|, |G*\F| + |S\A*| + |[A]|) + 1`.
    pub bound_violations: usize,
    pub roundtrip_failures: usize,
    pub case2_reference: Case2Reference,
    /// `log2 |G(a,g)| <= g`
    pub within_g: bool,
    /// `log2 |G(a,g)| <= g - t`; indicative only outside the regime.
    pub within_g_minus_t: bool,
    pub regime: Regime,
}

pub fn audit_family(q: &FamilyQuery, phi: &dyn Approximator, gamma: f64) -> Result<FamilyAudit> {
    let index = build_pair_index(q, phi)?;
    let t = q.deficit();
    let mut audit = FamilyAudit {
        query: *q,
        t,
        family_size: index.family_size(),
        log2_family_size: None,
        g_minus_t: q.g - t,
        image_size: index.image_size(),
        max_preimage: index.max_preimage(),
        case1: 0,
        case2: 0,
        max_certificate_bits: 0,
        bound_violations: 0,
        roundtrip_failures: 0,
        case2_reference: Case2Reference::new(q.g, t, gamma),
        within_g: true,
        within_g_minus_t: true,
        regime: Regime {
            closure_at_most_quarter: q.a as usize <= q.d.order() / 4,
            g_at_least_d4: u64::from(q.g) >= u64::from(q.d.get()).pow(4),
        },
    };
    for ctx in index.contexts() {
        let ctx = ctx?;
        let s = ctx.pair.s.len();
        let refined_len = ctx.g_star().difference(&ctx.pair.f)?.len()
            + ctx.pair.s.difference(ctx.a_star())?.len();
        for member in ctx.preimage() {
            let cert = encode(&ctx, member, gamma)?;
            match cert.case() {
                1 => audit.case1 += 1,
                _ => audit.case2 += 1,
            }
            let closure_len = crate::cube::closure(member)?.len();
            if cert.total_bits() > s.max(refined_len + closure_len) + 1 {
                audit.bound_violations += 1;
            }
            audit.max_certificate_bits = audit.max_certificate_bits.max(cert.total_bits());
            if decode(&ctx, &cert, gamma).ok().as_ref() != Some(member) {
                audit.roundtrip_failures += 1;
            }
        }
    }
    if audit.family_size > 0 {
        let log2 = (audit.family_size as f64).log2();
        audit.log2_family_size = Some(log2);
        audit.within_g = log2 <= f64::from(q.g);
        audit.within_g_minus_t = log2 <= f64::from(q.g - t);
    }
    Ok(audit)
}
