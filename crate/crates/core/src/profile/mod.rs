//! Exact joint distribution of `(|A|, |N(A)|)` over every subset `A` of the
//! even class, optionally split by whether `|[A]| <= N/4`.
//!
//! The sweep splits the `2^{N/2}` subsets into blocks by their top rank bits.
//! Each worker seeds a [`GrayWalker`] with a block's fixed prefix, walks the
//! free low ranks in Gray order and tallies into a private histogram. The
//! histograms are summed at the end, so the table does not depend on the
//! worker count or on which worker took which block.

mod gray;
pub mod io;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::Serialize;

pub use gray::GrayWalker;

use crate::cube::Dim;
use crate::error::{Error, Result};
use crate::half::HalfCube;

/// Largest `d` for a full sweep (`2^32` subsets).
pub const MAX_SWEEP_DIM: u32 = 6;
/// Largest `d` for which per-subset closure sizes are tabulated.
pub const MAX_CLOSURE_SIZE_DIM: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClosureClass {
    Unsplit,
    /// `|[A]| <= N/4`
    AtMostQuarter,
    /// `|[A]| > N/4`
    AboveQuarter,
}

impl ClosureClass {
    pub fn code(self) -> u8 {
        match self {
            ClosureClass::Unsplit => 0,
            ClosureClass::AtMostQuarter => 1,
            ClosureClass::AboveQuarter => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(ClosureClass::Unsplit),
            1 => Some(ClosureClass::AtMostQuarter),
            2 => Some(ClosureClass::AboveQuarter),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Features {
    pub closure_indicator: bool,
}

impl Features {
    pub const PLAIN: Features = Features {
        closure_indicator: false,
    };
    pub const CLOSURE_INDICATOR: Features = Features {
        closure_indicator: true,
    };

    pub fn bits(self) -> u8 {
        u8::from(self.closure_indicator)
    }

    pub fn from_bits(bits: u8) -> Option<Self> {
        match bits {
            0 => Some(Self::PLAIN),
            1 => Some(Self::CLOSURE_INDICATOR),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProfileKey {
    pub a: u16,
    pub g: u16,
    pub closure: ClosureClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileTable {
    dim: Dim,
    features: Features,
    entries: BTreeMap<ProfileKey, u128>,
}

impl ProfileTable {
    /// Builds a table, dropping zero counts.
    pub fn from_entries(
        dim: Dim,
        features: Features,
        entries: impl IntoIterator<Item = (ProfileKey, u128)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (key, count) in entries {
            let split = key.closure != ClosureClass::Unsplit;
            if split != features.closure_indicator {
                return Err(Error::Format(format!(
                    "closure flag {} does not match feature flags {}",
                    key.closure.code(),
                    features.bits()
                )));
            }
            if count > 0 {
                let slot: &mut u128 = map.entry(key).or_default();
                *slot = slot
                    .checked_add(count)
                    .ok_or(Error::Overflow("profile entry"))?;
            }
        }
        Ok(ProfileTable {
            dim,
            features,
            entries: map,
        })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn features(&self) -> Features {
        self.features
    }

    pub fn entries(&self) -> &BTreeMap<ProfileKey, u128> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Counts keyed by `(a, g)`, merging the closure split.
    pub fn by_size_and_neighborhood(&self) -> BTreeMap<(u16, u16), u128> {
        let mut out = BTreeMap::new();
        for (k, &c) in &self.entries {
            *out.entry((k.a, k.g)).or_insert(0u128) += c;
        }
        out
    }

    pub fn total(&self) -> Result<u128> {
        self.entries
            .values()
            .try_fold(0u128, |acc, &c| acc.checked_add(c))
            .ok_or(Error::Overflow("profile total"))
    }

    /// Number of subsets of size `a`.
    pub fn marginal(&self, a: u16) -> u128 {
        self.entries
            .iter()
            .filter(|(k, _)| k.a == a)
            .map(|(_, &c)| c)
            .sum()
    }

    /// `|{A : |N(A)| = g, |A| >= min_a, |[A]| <= max_closure}|`.
    ///
    /// A split table only resolves the threshold `N/4`, or no threshold at all
    /// once `max_closure >= N/2`.
    pub fn restricted_count(&self, g: u16, min_a: u16, max_closure: u64) -> Result<u128> {
        let half = self.dim.half() as u64;
        let quarter = half / 2;
        let keep: fn(ClosureClass) -> bool = if max_closure >= half {
            |_| true
        } else if self.features.closure_indicator && max_closure == quarter {
            |c| c == ClosureClass::AtMostQuarter
        } else {
            return Err(Error::FeatureMissing("restricted count"));
        };
        Ok(self
            .entries
            .iter()
            .filter(|(k, _)| k.g == g && k.a >= min_a && keep(k.closure))
            .map(|(_, &c)| c)
            .sum())
    }
}

fn check_sweep_dim(dim: Dim, cap: u32) -> Result<()> {
    if dim.get() > cap {
        Err(Error::capacity(
            "exhaustive subset sweep",
            format!("d <= {cap}"),
        ))
    } else {
        Ok(())
    }
}

/// Runs `visit` over every block of the subset space on `threads` workers and
/// returns the per-worker accumulators in worker order.
fn run_blocks<T, F>(
    cube: &HalfCube,
    threads: usize,
    init: impl Fn() -> T + Sync,
    visit: F,
) -> Vec<T>
where
    T: Send,
    F: Fn(&mut T, GrayWalker<'_>) + Sync,
{
    let h = cube.class_size() as u32;
    let prefix_bits = (h / 2).min(8);
    let free_bits = h - prefix_bits;
    let blocks = 1usize << prefix_bits;
    let threads = threads.clamp(1, blocks);
    let next = AtomicUsize::new(0);
    let work = |mut acc: T| loop {
        let b = next.fetch_add(1, Ordering::Relaxed);
        if b >= blocks {
            break acc;
        }
        visit(
            &mut acc,
            GrayWalker::new(cube, (b as u64) << free_bits, free_bits),
        );
    };
    if threads == 1 {
        return vec![work(init())];
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads).map(|_| s.spawn(|| work(init()))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}

/// Exact profile of all subsets of the even class.
pub fn sweep_profiles(dim: Dim, features: Features, threads: usize) -> Result<ProfileTable> {
    check_sweep_dim(dim, MAX_SWEEP_DIM)?;
    let cube = HalfCube::new(dim)?;
    let h = cube.class_size();
    let quarter = (dim.order() / 4) as u32;
    let width = h + 1;
    let layers = if features.closure_indicator { 2 } else { 1 };
    let evens = cube.even_neighbors();

    let partials = run_blocks(
        &cube,
        threads,
        || vec![0u64; layers * width * width],
        |hist, mut walker| loop {
            let a = walker.size();
            let slot = a as usize * width + walker.neighborhood_size() as usize;
            let layer = if features.closure_indicator && !closure_at_most(evens, &walker, quarter) {
                1
            } else {
                0
            };
            hist[layer * width * width + slot] += 1;
            if !walker.advance() {
                break;
            }
        },
    );

    let mut entries = Vec::new();
    for layer in 0..layers {
        for a in 0..width {
            for g in 0..width {
                let slot = layer * width * width + a * width + g;
                let mut total = 0u128;
                for p in &partials {
                    total = total
                        .checked_add(u128::from(p[slot]))
                        .ok_or(Error::Overflow("profile merge"))?;
                }
                if total > 0 {
                    let closure = match (features.closure_indicator, layer) {
                        (false, _) => ClosureClass::Unsplit,
                        (true, 0) => ClosureClass::AtMostQuarter,
                        (true, _) => ClosureClass::AboveQuarter,
                    };
                    entries.push((
                        ProfileKey {
                            a: a as u16,
                            g: g as u16,
                            closure,
                        },
                        total,
                    ));
                }
            }
        }
    }
    ProfileTable::from_entries(dim, features, entries)
}

/// `|[A]| <= limit`, scanning the vertices outside `A` and stopping early.
#[inline]
fn closure_at_most(even_nbrs: &[u64], walker: &GrayWalker<'_>, limit: u32) -> bool {
    let mut size = walker.size();
    if size > limit {
        return false;
    }
    if size == 0 {
        return true;
    }
    let cover = walker.cover();
    let outside = !walker.subset();
    for (i, &n) in even_nbrs.iter().enumerate() {
        if outside >> i & 1 == 1 && n & !cover == 0 {
            size += 1;
            if size > limit {
                return false;
            }
        }
    }
    true
}

/// Joint distribution of `(|A|, |N(A)|, |[A]|)` over all `A` in the even class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureProfile {
    dim: Dim,
    entries: BTreeMap<(u16, u16, u16), u128>,
}

impl ClosureProfile {
    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Keys are `(a, g, |[A]|)`.
    pub fn entries(&self) -> &BTreeMap<(u16, u16, u16), u128> {
        &self.entries
    }

    pub fn restricted_count(&self, g: u16, min_a: u16, max_closure: u64) -> u128 {
        self.entries
            .iter()
            .filter(|(&(a, gg, c), _)| gg == g && a >= min_a && u64::from(c) <= max_closure)
            .map(|(_, &n)| n)
            .sum()
    }

    /// Collapses closure sizes onto the `N/4` split used by [`ProfileTable`].
    pub fn to_indicator_table(&self) -> Result<ProfileTable> {
        let quarter = (self.dim.order() / 4) as u16;
        let entries = self.entries.iter().map(|(&(a, g, c), &n)| {
            let closure = if c <= quarter {
                ClosureClass::AtMostQuarter
            } else {
                ClosureClass::AboveQuarter
            };
            (ProfileKey { a, g, closure }, n)
        });
        ProfileTable::from_entries(self.dim, Features::CLOSURE_INDICATOR, entries)
    }
}

pub fn sweep_closure_sizes(dim: Dim, threads: usize) -> Result<ClosureProfile> {
    check_sweep_dim(dim, MAX_CLOSURE_SIZE_DIM)?;
    let cube = HalfCube::new(dim)?;
    let width = cube.class_size() + 1;
    let partials = run_blocks(
        &cube,
        threads,
        || vec![0u64; width * width * width],
        |hist, mut walker| loop {
            let closure = if walker.size() == 0 {
                0
            } else {
                cube.covered_by(walker.cover()).count_ones() as usize
            };
            let slot = (walker.size() as usize * width + walker.neighborhood_size() as usize)
                * width
                + closure;
            hist[slot] += 1;
            if !walker.advance() {
                break;
            }
        },
    );
    let mut entries = BTreeMap::new();
    for slot in 0..width * width * width {
        let total: u128 = partials.iter().map(|p| u128::from(p[slot])).sum();
        if total > 0 {
            let c = slot % width;
            let g = slot / width % width;
            let a = slot / width / width;
            entries.insert((a as u16, g as u16, c as u16), total);
        }
    }
    Ok(ClosureProfile { dim, entries })
}

/// Restricted count, from closure sizes for `d <= 5` and from the `N/4`
/// split for `d = 6`.
pub fn restricted_count(
    dim: Dim,
    g: u16,
    min_a: u16,
    max_closure: u64,
    threads: usize,
) -> Result<u128> {
    if dim.get() <= MAX_CLOSURE_SIZE_DIM {
        Ok(sweep_closure_sizes(dim, threads)?.restricted_count(g, min_a, max_closure))
    } else {
        sweep_profiles(dim, Features::CLOSURE_INDICATOR, threads)?.restricted_count(
            g,
            min_a,
            max_closure,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(d: u32) -> Dim {
        Dim::new(d).unwrap()
    }

    fn key(a: u16, g: u16) -> ProfileKey {
        ProfileKey {
            a,
            g,
            closure: ClosureClass::Unsplit,
        }
    }

    #[test]
    fn d1_and_d2_tables() {
        let t = sweep_profiles(dim(1), Features::PLAIN, 1).unwrap();
        assert_eq!(
            t.entries().clone(),
            BTreeMap::from([(key(0, 0), 1), (key(1, 1), 1)])
        );
        let t = sweep_profiles(dim(2), Features::PLAIN, 1).unwrap();
        assert_eq!(
            t.entries().clone(),
            BTreeMap::from([(key(0, 0), 1), (key(1, 2), 2), (key(2, 2), 1)])
        );
    }

    #[test]
    fn binomial_marginal_d3() {
        let t = sweep_profiles(dim(3), Features::PLAIN, 2).unwrap();
        assert_eq!(t.marginal(2), 6);
        assert_eq!(t.total().unwrap(), 16);
    }

    #[test]
    fn capacity_checked() {
        assert!(matches!(
            sweep_profiles(dim(7), Features::PLAIN, 1),
            Err(Error::CapacityExceeded(_))
        ));
        assert!(sweep_closure_sizes(dim(6), 1).is_err());
    }

    #[test]
    fn restricted_count_examples() {
        assert_eq!(restricted_count(dim(3), 3, 1, 4, 1).unwrap(), 4);
        assert_eq!(restricted_count(dim(3), 4, 2, 2, 1).unwrap(), 0);
        for d in 1..=4 {
            assert_eq!(restricted_count(dim(d), 0, 0, 0, 1).unwrap(), 1);
        }
    }

    #[test]
    fn restricted_count_needs_closure_feature() {
        let t = sweep_profiles(dim(3), Features::PLAIN, 1).unwrap();
        assert!(matches!(
            t.restricted_count(3, 1, 2),
            Err(Error::FeatureMissing(_))
        ));
        assert_eq!(t.restricted_count(3, 1, 4).unwrap(), 4);
        let split = sweep_profiles(dim(3), Features::CLOSURE_INDICATOR, 1).unwrap();
        assert!(split.restricted_count(3, 1, 1).is_err());
    }

    #[test]
    fn indicator_split_matches_closure_sizes() {
        for d in 1..=5 {
            let sizes = sweep_closure_sizes(dim(d), 3).unwrap();
            let split = sweep_profiles(dim(d), Features::CLOSURE_INDICATOR, 3).unwrap();
            assert_eq!(sizes.to_indicator_table().unwrap(), split, "d = {d}");
            let quarter = (dim(d).order() / 4) as u64;
            for g in 0..=dim(d).half() as u16 {
                assert_eq!(
                    split.restricted_count(g, 1, quarter).unwrap(),
                    sizes.restricted_count(g, 1, quarter)
                );
            }
        }
    }

    #[test]
    fn thread_count_does_not_change_table() {
        let one = sweep_profiles(dim(4), Features::CLOSURE_INDICATOR, 1).unwrap();
        for threads in [2, 3, 8, 64] {
            assert_eq!(
                sweep_profiles(dim(4), Features::CLOSURE_INDICATOR, threads).unwrap(),
                one
            );
        }
    }
}
