use crate::half::HalfCube;

/// Walks every subset of the low `free_bits` even ranks in reflected Gray
/// order, on top of a fixed set of higher ranks, keeping a cover counter per
/// odd vertex so that `|N(A)|` is known after each single-vertex toggle.
pub struct GrayWalker<'a> {
    cube: &'a HalfCube,
    counters: Vec<u8>,
    cover: u64,
    covered: u32,
    subset: u64,
    size: u32,
    free_bits: u32,
    index: u64,
}

impl<'a> GrayWalker<'a> {
    /// `fixed` must not intersect the low `free_bits` ranks.
    pub fn new(cube: &'a HalfCube, fixed: u64, free_bits: u32) -> Self {
        debug_assert!(free_bits == 64 || fixed & ((1u64 << free_bits) - 1) == 0);
        let mut w = GrayWalker {
            cube,
            counters: vec![0; cube.class_size()],
            cover: 0,
            covered: 0,
            subset: 0,
            size: 0,
            free_bits,
            index: 0,
        };
        for i in crate::cube::BitIter(fixed) {
            w.toggle(i);
        }
        w
    }

    #[inline]
    fn toggle(&mut self, i: u32) {
        let bit = 1u64 << i;
        let nbrs = self.cube.even_neighbors()[i as usize];
        if self.subset & bit == 0 {
            self.subset |= bit;
            self.size += 1;
            for j in crate::cube::BitIter(nbrs) {
                let c = &mut self.counters[j as usize];
                if *c == 0 {
                    self.cover |= 1 << j;
                    self.covered += 1;
                }
                *c += 1;
            }
        } else {
            self.subset &= !bit;
            self.size -= 1;
            for j in crate::cube::BitIter(nbrs) {
                let c = &mut self.counters[j as usize];
                *c -= 1;
                if *c == 0 {
                    self.cover &= !(1 << j);
                    self.covered -= 1;
                }
            }
        }
    }

    /// Move to the next subset; `false` once all `2^free_bits` have been visited.
    #[inline]
    pub fn advance(&mut self) -> bool {
        self.index += 1;
        if self.free_bits < 64 && self.index >> self.free_bits != 0 {
            return false;
        }
        self.toggle(self.index.trailing_zeros());
        true
    }

    /// Current subset as an even-rank mask.
    pub fn subset(&self) -> u64 {
        self.subset
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// `N(A)` as an odd-rank mask.
    pub fn cover(&self) -> u64 {
        self.cover
    }

    /// `|N(A)|`, the number of nonzero counters.
    pub fn neighborhood_size(&self) -> u32 {
        self.covered
    }

    /// Position in the Gray sequence.
    pub fn index(&self) -> u64 {
        self.index
    }
}
