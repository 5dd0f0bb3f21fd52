//! The two-case certificate for a family member given its approximation pair.
//!
//! Case 1 (`|S| < g - γt`): the member as a subset of `S`.
//!
//! Case 2: with `A*` the canonical closed member and `G* = N(A*)`,
//! 1. `G* \ G` as a subset of `G* \ F`,
//! 2. `Y` as a subset of `S \ A*`, where `Y` holds the smallest neighbor in
//!    `[A] \ A*` of each `x ∈ G \ G*`, so that `N(Y) \ G* = G \ G*`,
//! 3. the member as a subset of `[A]`.
//!
//! The first two stages recover `G`, hence `[A] = {v : N(v) ⊆ G}`.

use serde::Serialize;

use super::phi::PairContext;
use crate::bounds::binary_entropy;
use crate::cube::{closure, neighborhood, neighbors, Parity, Vertex, VertexSet};
use crate::error::{Error, Result};

/// A packed bit string, least significant bit first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bitmap {
    len: usize,
    bytes: Vec<u8>,
}

impl Bitmap {
    /// One bit per member of `domain`, ascending id, set when the vertex is in `members`.
    pub fn membership(domain: &VertexSet, members: &VertexSet) -> Self {
        let mut bm = Bitmap {
            len: 0,
            bytes: Vec::with_capacity(domain.len().div_ceil(8)),
        };
        for v in domain.iter() {
            bm.push(members.contains_id(v));
        }
        bm
    }

    pub fn from_bools(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut bm = Bitmap {
            len: 0,
            bytes: Vec::new(),
        };
        for b in bits {
            bm.push(b);
        }
        bm
    }

    fn push(&mut self, bit: bool) {
        if self.len % 8 == 0 {
            self.bytes.push(0);
        }
        if bit {
            self.bytes[self.len / 8] |= 1 << (self.len % 8);
        }
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.bytes[i / 8] >> (i % 8) & 1 == 1
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// The members of `domain` whose bits are set.
    pub fn select(&self, domain: &VertexSet, stage: &str) -> Result<VertexSet> {
        if domain.len() != self.len {
            return Err(Error::MalformedCertificate(format!(
                "{stage} payload has {} bits, its domain has {}",
                self.len,
                domain.len()
            )));
        }
        let mut out = VertexSet::empty(domain.dim());
        for (i, v) in domain.iter().enumerate() {
            if self.get(i) {
                out.insert(Vertex::new(domain.dim(), u64::from(v))?);
            }
        }
        Ok(out)
    }

    fn write(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.len as u32).to_le_bytes());
        out.extend_from_slice(&self.bytes);
    }

    fn read(bytes: &[u8], pos: &mut usize) -> Result<Self> {
        let truncated = || Error::MalformedCertificate("truncated bitmap".into());
        let head = bytes.get(*pos..*pos + 4).ok_or_else(truncated)?;
        let len = u32::from_le_bytes(head.try_into().unwrap()) as usize;
        *pos += 4;
        let body = bytes
            .get(*pos..*pos + len.div_ceil(8))
            .ok_or_else(truncated)?;
        *pos += body.len();
        if len % 8 != 0 && body.last().is_some_and(|&b| b >> (len % 8) != 0) {
            return Err(Error::MalformedCertificate("padding bits set".into()));
        }
        Ok(Bitmap {
            len,
            bytes: body.to_vec(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Payload {
    /// Case 1: the member inside `S`.
    Subset { within_s: Bitmap },
    /// Case 2.
    Refined {
        removed: Bitmap,
        y: Bitmap,
        within_closure: Bitmap,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageCost {
    pub stage: String,
    pub bits: usize,
}

/// The asymptotic Case 2 stage costs with the `o(1)` terms set to zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Case2Reference {
    /// `γ t`
    pub removed: f64,
    /// `H(γ) t`
    pub y: f64,
    /// `g - t`
    pub within_closure: f64,
    pub total: f64,
}

impl Case2Reference {
    pub fn new(g: u32, t: u32, gamma: f64) -> Self {
        let t = f64::from(t);
        let removed = gamma * t;
        let y = binary_entropy(gamma).unwrap_or(f64::NAN) * t;
        let within_closure = f64::from(g) - t;
        Case2Reference {
            removed,
            y,
            within_closure,
            total: removed + y + within_closure,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostLedger {
    pub stages: Vec<StageCost>,
    pub total_bits: usize,
    /// Present for Case 2 certificates built by [`encode`].
    pub reference: Option<Case2Reference>,
}

impl CostLedger {
    fn from_payload(payload: &Payload) -> Self {
        let mut stages = vec![StageCost {
            stage: "case-flag".into(),
            bits: 1,
        }];
        match payload {
            Payload::Subset { within_s } => {
                stages.push(StageCost {
                    stage: "case1-subset".into(),
                    bits: within_s.len(),
                });
            }
            Payload::Refined {
                removed,
                y,
                within_closure,
            } => {
                stages.push(StageCost {
                    stage: "l1".into(),
                    bits: removed.len(),
                });
                stages.push(StageCost {
                    stage: "l2".into(),
                    bits: y.len(),
                });
                stages.push(StageCost {
                    stage: "l3".into(),
                    bits: within_closure.len(),
                });
            }
        }
        let total_bits = stages.iter().map(|s| s.bits).sum();
        CostLedger {
            stages,
            total_bits,
            reference: None,
        }
    }

    pub fn stage(&self, name: &str) -> Option<usize> {
        self.stages.iter().find(|s| s.stage == name).map(|s| s.bits)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    payload: Payload,
    ledger: CostLedger,
}

impl Certificate {
    pub fn new(payload: Payload) -> Self {
        let ledger = CostLedger::from_payload(&payload);
        Certificate { payload, ledger }
    }

    pub fn case(&self) -> u8 {
        match self.payload {
            Payload::Subset { .. } => 1,
            Payload::Refined { .. } => 2,
        }
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn ledger(&self) -> &CostLedger {
        &self.ledger
    }

    pub fn total_bits(&self) -> usize {
        self.ledger.total_bits
    }

    /// Case byte, then each bitmap as a `u32` LE bit count and its packed bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![self.case()];
        match &self.payload {
            Payload::Subset { within_s } => within_s.write(&mut out),
            Payload::Refined {
                removed,
                y,
                within_closure,
            } => {
                removed.write(&mut out);
                y.write(&mut out);
                within_closure.write(&mut out);
            }
        }
        out
    }

    /// Parses [`Certificate::to_bytes`] output; the ledger carries no reference values.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut pos = 1;
        let payload = match bytes.first() {
            Some(1) => Payload::Subset {
                within_s: Bitmap::read(bytes, &mut pos)?,
            },
            Some(2) => Payload::Refined {
                removed: Bitmap::read(bytes, &mut pos)?,
                y: Bitmap::read(bytes, &mut pos)?,
                within_closure: Bitmap::read(bytes, &mut pos)?,
            },
            Some(c) => return Err(Error::MalformedCertificate(format!("unknown case {c}"))),
            None => return Err(Error::MalformedCertificate("empty input".into())),
        };
        if pos != bytes.len() {
            return Err(Error::MalformedCertificate("trailing bytes".into()));
        }
        Ok(Certificate::new(payload))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidGamma(gamma))
    }
}

pub fn encode(ctx: &PairContext, a: &VertexSet, gamma: f64) -> Result<Certificate> {
    check_gamma(gamma)?;
    if !ctx.contains(a) {
        return Err(Error::NotInPreimage);
    }
    let pair = &ctx.pair;
    let closed = closure(a)?;
    let g = neighborhood(a);
    if !closed.is_subset(&pair.s) || !pair.f.is_subset(&g) {
        return Err(Error::Domain(
            "approximation pair does not contain the member".into(),
        ));
    }

    if ctx.case_for(gamma) == 1 {
        return Ok(Certificate::new(Payload::Subset {
            within_s: Bitmap::membership(&pair.s, a),
        }));
    }

    let a_star = ctx.a_star();
    let g_star = ctx.g_star();
    let removed = Bitmap::membership(&g_star.difference(&pair.f)?, &g_star.difference(&g)?);

    let spare = closed.difference(a_star)?;
    let mut y = VertexSet::empty(a.dim());
    for x in g.difference(g_star)?.iter() {
        let x = Vertex::new(a.dim(), u64::from(x))?;
        let pick = neighbors(a.dim(), x)
            .intersection(&spare)?
            .first()
            .expect("every vertex of G \\ G* has a neighbor in [A] \\ A*");
        y.insert(Vertex::new(a.dim(), u64::from(pick))?);
    }
    let y = Bitmap::membership(&pair.s.difference(a_star)?, &y);
    let within_closure = Bitmap::membership(&closed, a);

    let mut cert = Certificate::new(Payload::Refined {
        removed,
        y,
        within_closure,
    });
    cert.ledger.reference = Some(Case2Reference::new(ctx.query.g, ctx.deficit(), gamma));
    Ok(cert)
}

/// Decoder output with the intermediate reconstructions of Case 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub set: VertexSet,
    /// `G = N(A)`, Case 2 only.
    pub neighborhood: Option<VertexSet>,
    /// `[A]`, Case 2 only.
    pub closure: Option<VertexSet>,
}

pub fn decode_detailed(ctx: &PairContext, cert: &Certificate, gamma: f64) -> Result<Decoded> {
    check_gamma(gamma)?;
    let expected = ctx.case_for(gamma);
    if cert.case() != expected {
        return Err(Error::CaseMismatch {
            expected,
            found: cert.case(),
        });
    }
    let pair = &ctx.pair;
    match &cert.payload {
        Payload::Subset { within_s } => Ok(Decoded {
            set: within_s.select(&pair.s, "case 1")?,
            neighborhood: None,
            closure: None,
        }),
        Payload::Refined {
            removed,
            y,
            within_closure,
        } => {
            let a_star = ctx.a_star();
            let g_star = ctx.g_star();
            let removed = removed.select(&g_star.difference(&pair.f)?, "l1")?;
            let y = y.select(&pair.s.difference(a_star)?, "l2")?;
            let added = neighborhood(&y).difference(g_star)?;
            let g = g_star.difference(&removed)?.union(&added)?;
            let side = VertexSet::class(g.dim(), Parity::Even);
            let closed = crate::cube::common_neighbors_within(&g).intersection(&side)?;
            let set = within_closure.select(&closed, "l3")?;
            Ok(Decoded {
                set,
                neighborhood: Some(g),
                closure: Some(closed),
            })
        }
    }
}

pub fn decode(ctx: &PairContext, cert: &Certificate, gamma: f64) -> Result<VertexSet> {
    decode_detailed(ctx, cert, gamma).map(|d| d.set)
}
