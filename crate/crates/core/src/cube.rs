//! Hamming-cube primitives over bit-indexed vertex sets.
//!
//! Vertices of `Q_d` are the integers `0..2^d`, read as `d`-bit strings. A
//! [`VertexSet`] stores one membership bit per vertex, so neighborhoods and
//! closures reduce to word-level shuffles: flipping coordinate `i` of every
//! member is a fixed permutation of bit positions.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_DIM: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Dim(u8);

impl Dim {
    pub fn new(d: u32) -> Result<Self> {
        if (1..=MAX_DIM).contains(&d) {
            Ok(Dim(d as u8))
        } else {
            Err(Error::InvalidDimension(d))
        }
    }

    pub fn get(self) -> u32 {
        u32::from(self.0)
    }

    /// `N = 2^d`.
    pub fn order(self) -> usize {
        1usize << self.0
    }

    /// `N / 2`, the size of each parity class.
    pub fn half(self) -> usize {
        1usize << (self.0 - 1)
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(id: u32) -> Self {
        if id.count_ones() % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(u32);

impl Vertex {
    pub fn new(dim: Dim, id: u64) -> Result<Self> {
        if id < dim.order() as u64 {
            Ok(Vertex(id as u32))
        } else {
            Err(Error::VertexOutOfRange { id, d: dim.get() })
        }
    }

    pub fn id(self) -> u32 {
        self.0
    }

    pub fn parity(self) -> Parity {
        Parity::of(self.0)
    }
}

pub fn parity(v: Vertex) -> Parity {
    v.parity()
}

pub fn hamming_distance(u: u32, v: u32) -> u32 {
    (u ^ v).count_ones()
}

/// Membership bits over the vertices of one cube, ascending id order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    dim: Dim,
    words: Vec<u64>,
}

// Bits whose index has bit `i` clear, for the in-word part of a coordinate flip.
const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

impl VertexSet {
    pub fn empty(dim: Dim) -> Self {
        VertexSet {
            dim,
            words: vec![0; dim.order().div_ceil(64)],
        }
    }

    pub fn full(dim: Dim) -> Self {
        let mut s = Self::empty(dim);
        let n = dim.order();
        for (i, w) in s.words.iter_mut().enumerate() {
            let remaining = n - i * 64;
            *w = if remaining >= 64 {
                u64::MAX
            } else {
                (1u64 << remaining) - 1
            };
        }
        s
    }

    /// All vertices of one parity class.
    pub fn class(dim: Dim, parity: Parity) -> Self {
        let mut s = Self::empty(dim);
        for id in 0..dim.order() as u32 {
            if Parity::of(id) == parity {
                s.insert_id(id);
            }
        }
        s
    }

    pub fn from_ids<I>(dim: Dim, ids: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<u64>,
    {
        let mut s = Self::empty(dim);
        for id in ids {
            let v = Vertex::new(dim, id.into())?;
            s.insert(v);
        }
        Ok(s)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        self.insert_id(v.0)
    }

    pub(crate) fn insert_id(&mut self, id: u32) -> bool {
        let (w, b) = ((id / 64) as usize, id % 64);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !was
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        let (w, b) = ((v.0 / 64) as usize, v.0 % 64);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        was
    }

    pub fn contains_id(&self, id: u32) -> bool {
        (id as usize) < self.dim.order() && self.words[(id / 64) as usize] >> (id % 64) & 1 == 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.contains_id(v.0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Member ids in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = (i * 64) as u32;
            BitIter(w).map(move |b| base + b)
        })
    }

    pub fn first(&self) -> Option<u32> {
        self.iter().next()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim.get(),
                right: other.dim.get(),
            })
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Result<Self> {
        self.check_dim(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(VertexSet {
            dim: self.dim,
            words,
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(&a, &b)| a & b == 0)
    }

    /// The common parity of all members; `None` for the empty set.
    pub fn parity(&self) -> Result<Option<Parity>> {
        let mut found = None;
        for id in self.iter() {
            let p = Parity::of(id);
            match found {
                None => found = Some(p),
                Some(q) if q != p => return Err(Error::MixedParity),
                _ => {}
            }
        }
        Ok(found)
    }

    /// `{v XOR 2^i : v in self}`.
    pub fn flip(&self, i: u32) -> Self {
        debug_assert!(i < self.dim.get());
        let mut out = Self::empty(self.dim);
        if i < 6 {
            let s = 1u32 << i;
            let lo = LOW_HALF[i as usize];
            for (o, &w) in out.words.iter_mut().zip(&self.words) {
                *o = ((w & lo) << s) | ((w >> s) & lo);
            }
        } else {
            let stride = 1usize << (i - 6);
            for (j, o) in out.words.iter_mut().enumerate() {
                *o = self.words[j ^ stride];
            }
        }
        out
    }

    /// Hex bitmap, most significant digit first; bit `i` is vertex `i`.
    pub fn to_hex(&self) -> String {
        let digits = self.dim.order().div_ceil(4);
        (0..digits)
            .rev()
            .map(|k| {
                let nib = (self.words[k / 16] >> ((k % 16) * 4)) & 0xf;
                char::from_digit(nib as u32, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(dim: Dim, hex: &str) -> Result<Self> {
        let hex = hex.trim();
        let hex = hex
            .strip_prefix("0x")
            .or_else(|| hex.strip_prefix("0X"))
            .unwrap_or(hex);
        let mut s = Self::empty(dim);
        for (k, c) in hex.chars().rev().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| Error::Domain(format!("invalid hex digit {c:?}")))?;
            for b in 0..4 {
                if nib >> b & 1 == 1 {
                    let id = (k * 4 + b) as u64;
                    s.insert(Vertex::new(dim, id)?);
                }
            }
        }
        Ok(s)
    }
}

/// Lexicographic order of the ascending member lists.
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim.get() as usize;
        f.debug_set()
            .entries(self.iter().map(|v| format!("{v:0d$b}")))
            .finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

pub fn neighbors(dim: Dim, v: Vertex) -> VertexSet {
    let mut s = VertexSet::empty(dim);
    for i in 0..dim.get() {
        s.insert_id(v.0 ^ (1 << i));
    }
    s
}

/// `N(A)`: every vertex adjacent to some member of `A`.
pub fn neighborhood(a: &VertexSet) -> VertexSet {
    let mut out = VertexSet::empty(a.dim);
    for i in 0..a.dim.get() {
        let f = a.flip(i);
        for (o, w) in out.words.iter_mut().zip(&f.words) {
            *o |= w;
        }
    }
    out
}

/// `[A]`: vertices of `A`'s parity class whose whole neighborhood lies in `N(A)`.
///
/// `v` qualifies iff `v XOR 2^i` is in `N(A)` for every `i`, so the closure is the
/// intersection of the `d` flipped copies of `N(A)`. For nonempty `A` that
/// intersection already lies in `A`'s class.
pub fn closure(a: &VertexSet) -> Result<VertexSet> {
    a.parity()?;
    let g = neighborhood(a);
    Ok(common_neighbors_within(&g))
}

/// `{v : N(v) ⊆ G}` over all vertices.
pub(crate) fn common_neighbors_within(g: &VertexSet) -> VertexSet {
    let mut out = VertexSet::full(g.dim);
    for i in 0..g.dim.get() {
        let f = g.flip(i);
        for (o, w) in out.words.iter_mut().zip(&f.words) {
            *o &= w;
        }
    }
    out
}

/// Maximal subsets of `A` connected under "Hamming distance at most 2",
/// ordered by their smallest member.
pub fn two_components(a: &VertexSet) -> Vec<VertexSet> {
    let d = a.dim.get();
    let mut seen = VertexSet::empty(a.dim);
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in a.iter() {
        if seen.contains_id(start) {
            continue;
        }
        let mut comp = VertexSet::empty(a.dim);
        seen.insert_id(start);
        stack.push(start);
        while let Some(v) = stack.pop() {
            comp.insert_id(v);
            for i in 0..d {
                let u = v ^ (1 << i);
                for w in std::iter::once(u).chain((i + 1..d).map(|j| u ^ (1 << j))) {
                    if a.contains_id(w) && seen.insert_id(w) {
                        stack.push(w);
                    }
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Nonempty and a single 2-component.
pub fn is_two_linked(a: &VertexSet) -> bool {
    two_components(a).len() == 1
}
