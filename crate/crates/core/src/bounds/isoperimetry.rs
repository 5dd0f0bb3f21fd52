use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cube::{neighborhood, Dim, Parity, VertexSet};
use crate::error::{Error, Result};
use crate::half::HalfCube;

/// Largest `d` for exhaustive scans.
pub const MAX_EXHAUSTIVE_SCAN_DIM: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    Exhaustive,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsoperimetryScan {
    pub d: Dim,
    pub max_size: usize,
    pub mode: ScanMode,
    pub scanned: u64,
    /// `min (|N(A)| - |A|) / |N(A)|`
    pub min_deficit: f64,
    pub argmin: VertexSet,
    pub argmin_size: usize,
    pub argmin_neighborhood: usize,
    /// `min_deficit * sqrt(d)`
    pub normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallSetScan {
    pub d: Dim,
    pub max_size: usize,
    pub scanned: u64,
    /// `max |A| d / |N(A)|`
    pub max_ratio: f64,
    pub argmax: VertexSet,
}

/// Lexicographic order of the rank lists of two masks.
fn lex_cmp(mut a: u64, mut b: u64) -> Ordering {
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {
                let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
                if x != y {
                    return x.cmp(&y);
                }
                a &= a - 1;
                b &= b - 1;
            }
        }
    }
}

/// A candidate `(a, g, set)` compared by the rational `key(a, g)`, then by set.
#[derive(Clone, Copy, Debug)]
struct Candidate {
    a: u64,
    g: u64,
    mask: u64,
}

/// `(g1 - a1)/g1` vs `(g2 - a2)/g2`.
fn deficit_cmp(x: &Candidate, y: &Candidate) -> Ordering {
    ((x.g - x.a) * y.g)
        .cmp(&((y.g - y.a) * x.g))
        .then_with(|| lex_cmp(x.mask, y.mask))
}

/// `a1/g1` vs `a2/g2`, larger first.
fn ratio_cmp(x: &Candidate, y: &Candidate) -> Ordering {
    (y.a * x.g)
        .cmp(&(x.a * y.g))
        .then_with(|| lex_cmp(x.mask, y.mask))
}

/// Next mask with the same popcount (Gosper).
fn next_same_weight(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// Best candidate over all nonempty subsets of the even class with at most
/// `max_size` members, one size class per task.
fn scan_subsets(
    cube: &HalfCube,
    max_size: usize,
    cmp: fn(&Candidate, &Candidate) -> Ordering,
) -> (Candidate, u64) {
    let h = cube.class_size();
    let limit = 1u64.checked_shl(h as u32).unwrap_or(0);
    let per_size: Vec<(Candidate, u64)> = (1..=max_size)
        .into_par_iter()
        .map(|k| {
            let mut mask = (1u64 << k) - 1;
            let mut best: Option<Candidate> = None;
            let mut n = 0u64;
            while limit == 0 || mask < limit {
                let g = u64::from(cube.neighborhood(mask).count_ones());
                let c = Candidate {
                    a: k as u64,
                    g,
                    mask,
                };
                if best.is_none_or(|b| cmp(&c, &b) == Ordering::Less) {
                    best = Some(c);
                }
                n += 1;
                if k == h {
                    break;
                }
                mask = next_same_weight(mask);
            }
            (best.expect("size class is nonempty"), n)
        })
        .collect();
    let scanned = per_size.iter().map(|p| p.1).sum();
    let best = per_size.into_iter().map(|p| p.0).min_by(cmp).unwrap();
    (best, scanned)
}

fn check_exhaustive(d: Dim) -> Result<()> {
    if d.get() > MAX_EXHAUSTIVE_SCAN_DIM {
        Err(Error::capacity(
            "exhaustive scan",
            format!("d <= {MAX_EXHAUSTIVE_SCAN_DIM}"),
        ))
    } else {
        Ok(())
    }
}

/// Minimum isoperimetric deficit over nonempty even sets with
/// `|A| <= max_size <= N/4`.
///
/// Heuristic mode evaluates Hamming balls around the origin, their partial
/// next layers (ascending, and `seed`-shuffled), and even subcubes; it gives
/// an upper bound on the true minimum.
pub fn isoperimetry_scan(
    d: Dim,
    max_size: usize,
    mode: ScanMode,
    seed: u64,
) -> Result<IsoperimetryScan> {
    let quarter = d.order() / 4;
    if max_size == 0 || max_size > quarter {
        return Err(Error::Domain(format!(
            "max_size must be in 1..={quarter}, got {max_size}"
        )));
    }
    let (argmin, a, g, scanned) = match mode {
        ScanMode::Exhaustive => {
            check_exhaustive(d)?;
            let cube = HalfCube::new(d)?;
            let (best, scanned) = scan_subsets(&cube, max_size, deficit_cmp);
            (cube.even_set(best.mask), best.a, best.g, scanned)
        }
        ScanMode::Heuristic => heuristic_min(d, max_size, seed)?,
    };
    let min_deficit = (g - a) as f64 / g as f64;
    Ok(IsoperimetryScan {
        d,
        max_size,
        mode,
        scanned,
        min_deficit,
        argmin,
        argmin_size: a as usize,
        argmin_neighborhood: g as usize,
        normalized: min_deficit * f64::from(d.get()).sqrt(),
    })
}

fn heuristic_min(d: Dim, max_size: usize, seed: u64) -> Result<(VertexSet, u64, u64, u64)> {
    const SHUFFLES: usize = 8;
    let dd = d.get();
    let mut layers: Vec<Vec<u32>> = vec![Vec::new(); dd as usize + 1];
    for v in 0..d.order() as u32 {
        if Parity::of(v) == Parity::Even {
            layers[v.count_ones() as usize].push(v);
        }
    }
    let mut candidates: Vec<VertexSet> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ball: Vec<u32> = Vec::new();
    for layer in layers.iter().filter(|l| !l.is_empty()) {
        if ball.len() >= max_size {
            break;
        }
        let room = max_size - ball.len();
        if layer.len() > room {
            let mut partial = ball.clone();
            partial.extend(&layer[..room]);
            candidates.push(VertexSet::from_ids(d, partial)?);
            for _ in 0..SHUFFLES {
                let mut shuffled = layer.clone();
                shuffled.shuffle(&mut rng);
                let mut partial = ball.clone();
                partial.extend(&shuffled[..room]);
                candidates.push(VertexSet::from_ids(d, partial)?);
            }
        }
        ball.extend(layer.iter().take(room));
        candidates.push(VertexSet::from_ids(d, ball.iter().copied())?);
    }
    for k in 1..=dd {
        let size = 1usize << (k - 1);
        if size <= max_size {
            let sub = (0..1u32 << k).filter(|&v| Parity::of(v) == Parity::Even);
            candidates.push(VertexSet::from_ids(d, sub)?);
        }
    }
    let scanned = candidates.len() as u64;
    let best = candidates
        .into_par_iter()
        .map(|s| {
            let g = neighborhood(&s).len() as u64;
            let a = s.len() as u64;
            (s, a, g)
        })
        .min_by(|x, y| {
            ((x.2 - x.1) * y.2)
                .cmp(&((y.2 - y.1) * x.2))
                .then_with(|| x.0.cmp(&y.0))
        })
        .expect("at least one candidate");
    Ok((best.0, best.1, best.2, scanned))
}

/// Largest `|A| d / |N(A)|` over nonempty even sets with `|A| <= max_size`.
pub fn small_set_expansion_scan(d: Dim, max_size: usize) -> Result<SmallSetScan> {
    check_exhaustive(d)?;
    if max_size == 0 || max_size > d.half() {
        return Err(Error::Domain(format!(
            "max_size must be in 1..={}, got {max_size}",
            d.half()
        )));
    }
    let cube = HalfCube::new(d)?;
    let (best, scanned) = scan_subsets(&cube, max_size, ratio_cmp);
    Ok(SmallSetScan {
        d,
        max_size,
        scanned,
        max_ratio: best.a as f64 * f64::from(d.get()) / best.g as f64,
        argmax: cube.even_set(best.mask),
    })
}
