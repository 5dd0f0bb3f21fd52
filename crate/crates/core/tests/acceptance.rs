//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! The `d = 6` profile (a `2^32`-subset sweep) is computed once and cached
//! under the cargo target directory; later runs reload it after a checksum
//! check.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use qdbis_core::bounds::{
    check_binom_tail, compositions, cost_audit, isoperimetry_scan, small_set_expansion_scan,
    ComponentClass, ScanMode,
};
use qdbis_core::containers::{audit_family, enumerate_all_families, FamilyQuery, TrivialPhi};
use qdbis_core::enumeration::{
    barber_formula, count_bis, count_is, lower_bound_series, max_bis_size, scaling_statistic,
    ScalingRow,
};
use qdbis_core::exact::log2_u128;
use qdbis_core::profile::{io, sweep_profiles, Features, ProfileTable};
use qdbis_core::{Dim, HalfCube, VertexSet};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GAMMA: f64 = 0.08;
const IS_RATIO_CEILING: f64 = 1.2;
const DEFICIT_FLOOR: f64 = 0.4;
const RANDOM_LINKED_SETS: usize = 1000;

const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const SCALING_CI_BUDGET: Duration = Duration::from_secs(60);
const CERTIFICATE_BUDGET: Duration = Duration::from_secs(300);
const COST_AUDIT_BUDGET: Duration = Duration::from_secs(120);

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn dim(d: u32) -> Dim {
    Dim::new(d).unwrap()
}

fn threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn table(d: u32) -> ProfileTable {
    if d == 6 {
        return d6_table().clone();
    }
    sweep_profiles(dim(d), Features::PLAIN, threads()).unwrap()
}

fn d6_table() -> &'static ProfileTable {
    static TABLE: OnceLock<ProfileTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
            .join(io::cache_file_name(dim(6), Features::PLAIN));
        if let Ok(t) = io::load(&path) {
            return t;
        }
        let start = Instant::now();
        let t = sweep_profiles(dim(6), Features::PLAIN, threads()).unwrap();
        eprintln!("d = 6 sweep took {:.1?}", start.elapsed());
        io::save(&t, &path).unwrap();
        t
    })
}

/// `(bis, i)` over all `2^N` vertex subsets.
fn brute_counts(d: u32) -> (u128, u128) {
    let n = 1u32 << d;
    let mut edges = Vec::new();
    for u in 0..n {
        for j in 0..d {
            let v = u ^ 1 << j;
            if u < v {
                edges.push((1u64 << u) | (1u64 << v));
            }
        }
    }
    let even_mask: u64 = (0..n)
        .filter(|v| v.count_ones() % 2 == 0)
        .fold(0, |m, v| m | 1 << v);
    let (mut bis, mut is) = (0u128, 0u128);
    for s in 0u64..1 << n {
        if edges.iter().any(|&e| e & !s == 0) {
            continue;
        }
        is += 1;
        if 2 * (s & even_mask).count_ones() == s.count_ones() {
            bis += 1;
        }
    }
    (bis, is)
}

fn exact_counts_vs_oracle() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut found = Vec::new();
    for d in 1..=4 {
        let t = table(d);
        let ours = (count_bis(&t).unwrap(), count_is(&t).unwrap());
        let oracle = brute_counts(d);
        if ours != oracle {
            mismatches.push(format!("d={d}: {ours:?} vs oracle {oracle:?}"));
        }
        found.push(ours);
    }
    let expected = [(1, 3), (1, 7), (5, 35)];
    let fixed_ok = found[..3] == expected;
    let elapsed = start.elapsed();
    outcome(
        mismatches.is_empty() && fixed_ok && elapsed < ORACLE_BUDGET,
        format!(
            "(bis, i) for d=1..4: {found:?}; mismatches {mismatches:?}; oracle time {elapsed:.1?} (< {ORACLE_BUDGET:?})"
        ),
    )
}

fn maximum_bis() -> Outcome {
    let mut rows = Vec::new();
    let mut pass = true;
    for d in 2..=6 {
        let search = max_bis_size(&table(d));
        let formula = barber_formula(dim(d)).unwrap();
        pass &= search == formula;
        rows.push(format!("d={d}: {search}/{formula}"));
    }
    let small: Vec<u64> = (2..=4).map(|d| barber_formula(dim(d)).unwrap()).collect();
    pass &= small == [0, 2, 4];
    outcome(pass, format!("search/formula {}", rows.join(", ")))
}

fn scaling_diagnostic() -> Outcome {
    let start = Instant::now();
    let mut xs = Vec::new();
    let mut pass = true;
    let mut rows = Vec::new();
    for d in 3..=6 {
        if d == 6 && start.elapsed() >= SCALING_CI_BUDGET {
            rows.push(format!(
                "d=3..5 took {:.1?}, over the CI budget",
                start.elapsed()
            ));
            pass = false;
        }
        let t = table(d);
        let log2_bis = log2_u128(count_bis(&t).unwrap());
        let x = scaling_statistic(dim(d), log2_bis);
        let lb = scaling_statistic(dim(d), log2_u128(lower_bound_series(dim(d)).unwrap()));
        pass &= x > 0.0 && lb >= x;
        xs.push(x);
        rows.push(format!("d={d}: x={x:.4} lb={lb:.4}"));
    }
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    outcome(
        pass,
        format!("{}; bracket [{lo:.4}, {hi:.4}]", rows.join(", ")),
    )
}

fn independent_set_ratio() -> Outcome {
    let mut pass = true;
    let mut rows = Vec::new();
    for d in 1..=6 {
        let r = ScalingRow::from_profile(&table(d)).unwrap().is_ratio;
        pass &= r > 0.0 && r < IS_RATIO_CEILING;
        rows.push(format!("d={d}: {r:.4}"));
    }
    outcome(
        pass,
        format!(
            "i/(2 sqrt(e) 2^(N/2)) in (0, {IS_RATIO_CEILING}): {}",
            rows.join(", ")
        ),
    )
}

fn certificate_soundness() -> Outcome {
    let start = Instant::now();
    let mut members = 0;
    let mut families = 0;
    let mut roundtrip = 0;
    let mut bound = 0;
    for d in [3, 4] {
        for &(a, g) in enumerate_all_families(dim(d)).unwrap().keys() {
            let audit =
                audit_family(&FamilyQuery::new(dim(d), a, g).unwrap(), &TrivialPhi, GAMMA).unwrap();
            families += 1;
            members += audit.family_size;
            roundtrip += audit.roundtrip_failures;
            bound += audit.bound_violations;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        roundtrip == 0 && bound == 0 && members > 0 && elapsed < CERTIFICATE_BUDGET,
        format!(
            "{families} families, {members} members; roundtrip failures {roundtrip}, length-bound violations {bound}; {elapsed:.1?}"
        ),
    )
}

fn container_bound() -> Outcome {
    let mut pass = true;
    let mut rows = Vec::new();
    let mut csv =
        String::from("d,a,g,t,family_size,log2_family_size,g_minus_t,within_g,within_g_minus_t\n");
    for d in 3..=5 {
        let families = enumerate_all_families(dim(d)).unwrap();
        let mut within_gt = 0;
        let mut worst = f64::NEG_INFINITY;
        for (&(a, g), members) in &families {
            let log2 = (members.len() as f64).log2();
            let t = g - a;
            pass &= log2 <= f64::from(g);
            within_gt += usize::from(log2 <= f64::from(g - t));
            worst = worst.max(log2 - f64::from(g));
            csv.push_str(&format!(
                "{d},{a},{g},{t},{},{log2:.6},{},{},{}\n",
                members.len(),
                g - t,
                log2 <= f64::from(g),
                log2 <= f64::from(g - t)
            ));
        }
        rows.push(format!(
            "d={d}: {} families, max log2|G|-g = {worst:.3}, {within_gt} within g-t",
            families.len()
        ));
    }
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("container_bounds.csv");
    std::fs::write(&path, csv).unwrap();
    outcome(
        pass,
        format!(
            "{}; g >= d^4 regime not reachable here; rows in {}",
            rows.join(", "),
            path.display()
        ),
    )
}

fn proposition_suite() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for n in 1..=30 {
        for step in 1..=10 {
            pass &= check_binom_tail(n, f64::from(step) / 20.0).unwrap().holds;
        }
    }
    for m in 1..=20u32 {
        let exact = compositions(m, None).unwrap().exact;
        pass &= exact == 1u128 << (m - 1);
        if m <= 16 {
            pass &= exact == count_compositions(m);
        }
    }
    for d in 2..=5 {
        let s = isoperimetry_scan(dim(d), dim(d).order() / 4, ScanMode::Exhaustive, 0).unwrap();
        pass &= s.normalized > DEFICIT_FLOOR;
        notes.push(format!("d={d}: {:.4}", s.normalized));
    }
    let ratios: Vec<String> = (2..=5)
        .map(|d| {
            let r = small_set_expansion_scan(dim(d), dim(d).half())
                .unwrap()
                .max_ratio;
            format!("d={d}: {r:.4}")
        })
        .collect();
    outcome(
        pass,
        format!(
            "tails and compositions ok={pass}; deficit*sqrt(d) > {DEFICIT_FLOOR}: {}; max |A|d/|N(A)|: {}",
            notes.join(", "),
            ratios.join(", ")
        ),
    )
}

fn count_compositions(m: u32) -> u128 {
    (1..=m)
        .map(|first| {
            if first == m {
                1
            } else {
                count_compositions(m - first)
            }
        })
        .sum()
}

/// Grows a 2-linked even set one random distance-2 neighbor at a time.
fn random_linked(cube: &HalfCube, rng: &mut ChaCha8Rng) -> VertexSet {
    let h = cube.class_size() as u32;
    let target = rng.random_range(1..=h);
    let mut set = 1u64 << rng.random_range(0..h);
    while set.count_ones() < target {
        let frontier = (0..h)
            .filter(|&i| set >> i & 1 == 1)
            .fold(0u64, |m, i| m | cube.even_links()[i as usize])
            & !set;
        if frontier == 0 {
            break;
        }
        let pick = rng.random_range(0..frontier.count_ones());
        let bit = (0..h)
            .filter(|&i| frontier >> i & 1 == 1)
            .nth(pick as usize)
            .unwrap();
        set |= 1 << bit;
    }
    cube.even_set(set)
}

fn cost_audit_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut audited = 0usize;
    let mut components = 0usize;
    let mut over = 0usize;
    let mut worst = f64::NEG_INFINITY;
    for d in [4, 5] {
        let cube = HalfCube::new(dim(d)).unwrap();
        let h = cube.class_size() as u32;
        let mut sets: BTreeSet<VertexSet> = BTreeSet::new();
        for a in 1u64..1 << h {
            if a.count_ones() <= 3 {
                sets.insert(cube.even_set(a));
            }
        }
        let mut samples: Vec<VertexSet> = (0..RANDOM_LINKED_SETS)
            .map(|_| random_linked(&cube, &mut rng))
            .collect();
        samples.extend(sets);
        for a in &samples {
            let audit = cost_audit(a, GAMMA, None).unwrap();
            audited += 1;
            for c in audit
                .components
                .iter()
                .filter(|c| c.profile.class != ComponentClass::Large)
            {
                components += 1;
                worst = worst.max(c.bits - c.profile.g as f64);
                over += usize::from(!c.within_g);
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        over == 0 && elapsed < COST_AUDIT_BUDGET,
        format!(
            "{audited} sets, {components} isolated/small components, {over} cost more than g_i (worst excess {worst:.3} bits); {elapsed:.1?}"
        ),
    )
}

fn determinism() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for d in [4, 5] {
        for features in [Features::PLAIN, Features::CLOSURE_INDICATOR] {
            let bytes: Vec<Vec<u8>> = [1, 2, 8]
                .iter()
                .map(|&w| io::to_bytes(&sweep_profiles(dim(d), features, w).unwrap()))
                .collect();
            let same = bytes.windows(2).all(|p| p[0] == p[1]);
            pass &= same;
            notes.push(format!(
                "d={d} flags={}: {} bytes identical={same}",
                features.bits(),
                bytes[0].len()
            ));
        }
    }
    outcome(pass, notes.join(", "))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("exact counts vs brute-force oracle", exact_counts_vs_oracle),
        ("maximum BIS size vs closed form", maximum_bis),
        ("scaling statistic x_d", scaling_diagnostic),
        ("independent-set ratio", independent_set_ratio),
        ("certificate soundness", certificate_soundness),
        ("container bound measurement", container_bound),
        ("supporting-bounds suite", proposition_suite),
        ("component cost audit", cost_audit_suite),
        ("sweep determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        failed += usize::from(!result.pass);
        let status = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{status}] {name}: {}", i + 1, result.detail);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
