//! Dense indexing of the two parity classes for small cubes.
//!
//! For `d <= 7` each class has at most 64 vertices, so a subset of the even
//! class (or of the odd class) is a single `u64` keyed by rank within the
//! class. All exhaustive scans run on these masks.

use crate::cube::{Dim, Parity, VertexSet};
use crate::error::{Error, Result};

pub const MAX_HALF_DIM: u32 = 7;

#[derive(Clone, Debug)]
pub struct HalfCube {
    dim: Dim,
    even: Vec<u32>,
    odd: Vec<u32>,
    /// Per even rank: mask of odd ranks adjacent to it.
    even_nbrs: Vec<u64>,
    /// Per odd rank: mask of even ranks adjacent to it.
    odd_nbrs: Vec<u64>,
    /// Per even rank: mask of other even ranks at distance 2.
    even_link: Vec<u64>,
}

impl HalfCube {
    pub fn new(dim: Dim) -> Result<Self> {
        if dim.get() > MAX_HALF_DIM {
            return Err(Error::capacity(
                "dense parity-class masks",
                format!("d <= {MAX_HALF_DIM}"),
            ));
        }
        let d = dim.get();
        let n = dim.order() as u32;
        let even: Vec<u32> = (0..n).filter(|&v| Parity::of(v) == Parity::Even).collect();
        let odd: Vec<u32> = (0..n).filter(|&v| Parity::of(v) == Parity::Odd).collect();
        let mut rank = vec![0u32; n as usize];
        for (i, &v) in even.iter().enumerate() {
            rank[v as usize] = i as u32;
        }
        for (i, &v) in odd.iter().enumerate() {
            rank[v as usize] = i as u32;
        }
        let star = |v: u32| (0..d).fold(0u64, |m, i| m | 1 << rank[(v ^ (1 << i)) as usize]);
        let even_nbrs = even.iter().map(|&v| star(v)).collect();
        let odd_nbrs = odd.iter().map(|&v| star(v)).collect();
        let even_link = even
            .iter()
            .map(|&v| {
                let mut m = 0u64;
                for i in 0..d {
                    for j in i + 1..d {
                        m |= 1 << rank[(v ^ (1 << i) ^ (1 << j)) as usize];
                    }
                }
                m
            })
            .collect();
        Ok(HalfCube {
            dim,
            even,
            odd,
            even_nbrs,
            odd_nbrs,
            even_link,
        })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Size of each class, `N/2`.
    pub fn class_size(&self) -> usize {
        self.even.len()
    }

    pub fn even_ids(&self) -> &[u32] {
        &self.even
    }

    pub fn odd_ids(&self) -> &[u32] {
        &self.odd
    }

    pub fn even_neighbors(&self) -> &[u64] {
        &self.even_nbrs
    }

    pub fn odd_neighbors(&self) -> &[u64] {
        &self.odd_nbrs
    }

    pub fn even_links(&self) -> &[u64] {
        &self.even_link
    }

    /// Mask with every rank of a class set.
    pub fn all(&self) -> u64 {
        if self.even.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.even.len()) - 1
        }
    }

    /// Odd-rank mask of `N(A)` for an even-rank mask `A`.
    pub fn neighborhood(&self, a: u64) -> u64 {
        crate::cube::BitIter(a).fold(0, |g, i| g | self.even_nbrs[i as usize])
    }

    /// Even ranks whose neighborhoods lie inside the odd-rank mask `g`.
    pub fn covered_by(&self, g: u64) -> u64 {
        self.even_nbrs
            .iter()
            .enumerate()
            .filter(|&(_, &n)| n & !g == 0)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    /// `[A]` as an even-rank mask.
    pub fn closure(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.covered_by(self.neighborhood(a))
        }
    }

    /// Whether an even-rank mask is 2-linked (nonempty and connected).
    pub fn is_linked(&self, a: u64) -> bool {
        if a == 0 {
            return false;
        }
        let mut seen = a & a.wrapping_neg();
        let mut frontier = seen;
        while frontier != 0 {
            let i = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.even_link[i] & a & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == a
    }

    pub fn even_set(&self, mask: u64) -> VertexSet {
        self.to_set(mask, &self.even)
    }

    pub fn odd_set(&self, mask: u64) -> VertexSet {
        self.to_set(mask, &self.odd)
    }

    fn to_set(&self, mask: u64, ids: &[u32]) -> VertexSet {
        let mut s = VertexSet::empty(self.dim);
        for i in crate::cube::BitIter(mask) {
            s.insert_id(ids[i as usize]);
        }
        s
    }

    /// Rank mask of an even set; errors if `s` has odd members or another dimension.
    pub fn even_mask(&self, s: &VertexSet) -> Result<u64> {
        if s.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim.get(),
                right: s.dim().get(),
            });
        }
        let mut m = 0u64;
        for v in s.iter() {
            match self.even.binary_search(&v) {
                Ok(i) => m |= 1 << i,
                Err(_) => return Err(Error::Domain(format!("vertex {v} is not even"))),
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{closure, neighborhood};

    #[test]
    fn masks_agree_with_vertex_sets() {
        for d in 1..=5 {
            let h = HalfCube::new(Dim::new(d).unwrap()).unwrap();
            for a in 0..(1u64 << h.class_size()).min(512) {
                let s = h.even_set(a);
                assert_eq!(h.odd_set(h.neighborhood(a)), neighborhood(&s));
                assert_eq!(h.even_set(h.closure(a)), closure(&s).unwrap());
                assert_eq!(h.is_linked(a), crate::cube::is_two_linked(&s));
                assert_eq!(h.even_mask(&s).unwrap(), a);
            }
        }
    }

    #[test]
    fn capacity() {
        assert!(HalfCube::new(Dim::new(7).unwrap()).is_ok());
        assert!(HalfCube::new(Dim::new(8).unwrap()).is_err());
    }
}
