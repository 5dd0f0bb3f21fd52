use qdbis_core::containers::{
    build_pair_index, decode, decode_detailed, encode, enumerate_all_families, ApproxPair,
    Approximator, Certificate, FamilyQuery, TrivialPhi, DEFAULT_GAMMA,
};
use qdbis_core::cube::{closure, neighborhood, Dim, Parity, VertexSet};
use qdbis_core::{Error, Result};

/// One pair for the whole family: `S` is the even class and `F` is empty.
struct WholeClass;

impl Approximator for WholeClass {
    fn name(&self) -> &str {
        "whole-class"
    }

    fn approximate(&self, a: &VertexSet) -> Result<ApproxPair> {
        Ok(ApproxPair {
            s: VertexSet::class(a.dim(), Parity::Even),
            f: VertexSet::empty(a.dim()),
        })
    }
}

fn roundtrip_all(d: u32, phi: &dyn Approximator, gamma: f64) -> (usize, [usize; 2]) {
    let dim = Dim::new(d).unwrap();
    let mut members = 0;
    let mut cases = [0, 0];
    for (&(a, g), family) in &enumerate_all_families(dim).unwrap() {
        let q = FamilyQuery::new(dim, a, g).unwrap();
        let index = build_pair_index(&q, phi).unwrap();
        assert_eq!(index.family_size(), family.len());
        for ctx in index.contexts() {
            let ctx = ctx.unwrap();
            for m in ctx.preimage() {
                let cert = encode(&ctx, m, gamma).unwrap();
                cases[cert.case() as usize - 1] += 1;
                let out = decode_detailed(&ctx, &cert, gamma).unwrap();
                assert_eq!(
                    &out.set,
                    m,
                    "{} at d = {d}, (a, g) = ({a}, {g})",
                    phi.name()
                );
                if cert.case() == 2 {
                    assert_eq!(out.neighborhood.unwrap(), neighborhood(m));
                    assert_eq!(out.closure.unwrap(), closure(m).unwrap());
                }
                let parsed = Certificate::from_bytes(&cert.to_bytes()).unwrap();
                assert_eq!(decode(&ctx, &parsed, gamma).unwrap(), *m);
                members += 1;
            }
        }
    }
    (members, cases)
}

#[test]
fn trivial_pairs_roundtrip() {
    for d in [3, 4] {
        let (n, cases) = roundtrip_all(d, &TrivialPhi, DEFAULT_GAMMA);
        assert_eq!(n, cases[0] + cases[1]);
        // `|S| = a < g - γt` exactly when `t > 0`
        assert!(cases[0] > 0 && cases[1] > 0, "d = {d}");
    }
}

#[test]
fn whole_class_pairs_roundtrip() {
    for d in [3, 4] {
        let (_, cases) = roundtrip_all(d, &WholeClass, DEFAULT_GAMMA);
        assert_eq!(cases[0], 0, "d = {d}");
        assert!(cases[1] > 0, "d = {d}");
    }
}

#[test]
fn certificate_length_matches_ledger() {
    let dim = Dim::new(4).unwrap();
    for &(a, g) in enumerate_all_families(dim).unwrap().keys() {
        let q = FamilyQuery::new(dim, a, g).unwrap();
        let index = build_pair_index(&q, &WholeClass).unwrap();
        for ctx in index.contexts() {
            let ctx = ctx.unwrap();
            for m in ctx.preimage() {
                let cert = encode(&ctx, m, DEFAULT_GAMMA).unwrap();
                let stage_sum: usize = cert.ledger().stages.iter().map(|s| s.bits).sum();
                assert_eq!(stage_sum, cert.total_bits());
                if cert.case() == 2 {
                    let star = ctx.g_star();
                    assert_eq!(cert.ledger().stage("l1"), Some(star.len()));
                    assert_eq!(cert.ledger().stage("l3"), Some(closure(m).unwrap().len()));
                }
            }
        }
    }
}

#[test]
fn foreign_member_is_rejected() {
    let dim = Dim::new(3).unwrap();
    let q = FamilyQuery::new(dim, 1, 3).unwrap();
    let index = build_pair_index(&q, &TrivialPhi).unwrap();
    let ctx = index.contexts().next().unwrap().unwrap();
    let other = VertexSet::from_ids(dim, [0b000u32, 0b011]).unwrap();
    assert!(matches!(
        encode(&ctx, &other, DEFAULT_GAMMA),
        Err(Error::NotInPreimage)
    ));
    assert!(matches!(
        encode(&ctx, &ctx.preimage()[0], 0.0),
        Err(Error::InvalidGamma(_))
    ));
}
