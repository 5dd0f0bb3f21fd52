use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use qdbis_core::bounds::{
    binary_entropy, check_binom_tail, compositions, cost_audit, isoperimetry_scan,
    linked_sets_count, small_set_expansion_scan, ComponentClass, ScanMode,
};
use qdbis_core::containers::{
    audit_family, enumerate_all_families, enumerate_family, FamilyQuery, TrivialPhi,
};
use qdbis_core::enumeration::{
    barber_formula, count_bis, count_bis_by_size, count_is, lower_bound_series, max_bis_size,
    scaling_statistic, ScalingRow,
};
use qdbis_core::exact::log2_u128;
use qdbis_core::profile::{io, sweep_profiles, ClosureClass, Features, ProfileTable};
use qdbis_core::{Dim, Error, Result, Vertex, VertexSet};

use crate::args::{Check, Command, CountWhat, Global, Mode, Phi};
use crate::output::{self, Output, Record};

pub struct Context {
    pub global: Global,
    pub threads: usize,
}

impl Context {
    /// Loads the profile from the cache directory when a valid file exists,
    /// otherwise sweeps and stores it there.
    fn profile(&self, dim: Dim, features: Features) -> Result<ProfileTable> {
        let Some(dir) = &self.global.cache else {
            return sweep_profiles(dim, features, self.threads);
        };
        let path = dir.join(io::cache_file_name(dim, features));
        if path.exists() {
            if let Ok(t) = io::load(&path) {
                if t.dim() == dim && t.features() == features {
                    return Ok(t);
                }
            }
        }
        let table = sweep_profiles(dim, features, self.threads)?;
        std::fs::create_dir_all(dir)?;
        io::save(&table, &path)?;
        Ok(table)
    }
}

fn closure_label(c: ClosureClass) -> &'static str {
    match c {
        ClosureClass::Unsplit => "all",
        ClosureClass::AtMostQuarter => "le_quarter",
        ClosureClass::AboveQuarter => "gt_quarter",
    }
}

/// Runs one subcommand; output goes to `out_path` when the command has one.
pub fn run<'a>(ctx: &Context, command: &'a Command) -> Result<(Output, Option<&'a Path>)> {
    let g = &ctx.global;
    let out = match command {
        Command::Count { d, what } => {
            let dim = Dim::new(*d)?;
            let table = ctx.profile(dim, Features::PLAIN)?;
            match what {
                CountWhat::Bis => {
                    Output::One(Record::new().with("d", *d).count("bis", count_bis(&table)?))
                }
                CountWhat::Is => {
                    Output::One(Record::new().with("d", *d).count("is", count_is(&table)?))
                }
                CountWhat::BySize => Output::Table(
                    count_bis_by_size(&table)?
                        .into_iter()
                        .map(|(k, n)| Record::new().with("d", *d).with("k", k).count("count", n))
                        .collect(),
                ),
            }
        }
        Command::Profile {
            d,
            out,
            closure_indicator,
        } => {
            let features = if *closure_indicator {
                Features::CLOSURE_INDICATOR
            } else {
                Features::PLAIN
            };
            let table = ctx.profile(Dim::new(*d)?, features)?;
            let rows = table
                .entries()
                .iter()
                .map(|(k, &n)| {
                    Record::new()
                        .with("d", *d)
                        .with("a", u32::from(k.a))
                        .with("g", u32::from(k.g))
                        .with("closure", closure_label(k.closure))
                        .count("count", n)
                })
                .collect();
            return Ok((Output::Table(rows), out.as_deref()));
        }
        Command::Maxbis { d } => {
            let dim = Dim::new(*d)?;
            let formula = barber_formula(dim)?;
            let search = max_bis_size(&ctx.profile(dim, Features::PLAIN)?);
            Output::One(
                Record::new()
                    .with("d", *d)
                    .with("formula", formula)
                    .with("search", search)
                    .with("agree", formula == search),
            )
        }
        Command::Lowerbound { d } => {
            let dim = Dim::new(*d)?;
            let lb = lower_bound_series(dim)?;
            let log2 = log2_u128(lb);
            Output::One(
                Record::new()
                    .with("d", *d)
                    .with("max_bis", barber_formula(dim)?)
                    .count("lower_bound", lb)
                    .with("log2_lower_bound", log2)
                    .with("x_lower", scaling_statistic(dim, log2)),
            )
        }
        Command::Scaling { d_min, d_max, out } => {
            if d_min > d_max {
                return Err(Error::Domain(format!(
                    "--d-min {d_min} exceeds --d-max {d_max}"
                )));
            }
            let mut rows = Vec::new();
            for d in *d_min..=*d_max {
                let row = ScalingRow::from_profile(&ctx.profile(Dim::new(d)?, Features::PLAIN)?)?;
                rows.push(
                    Record::new()
                        .with("d", d)
                        .with("log2_bis", row.log2_bis)
                        .with("x_d", row.x_d)
                        .with("is_ratio", row.is_ratio),
                );
            }
            return Ok((Output::Table(rows), out.as_deref()));
        }
        Command::Isoperimetry { d, max_size, mode } => {
            let mode = match mode {
                Mode::Exhaustive => ScanMode::Exhaustive,
                Mode::Heuristic => ScanMode::Heuristic,
            };
            let s = isoperimetry_scan(Dim::new(*d)?, *max_size, mode, g.seed)?;
            Output::One(
                Record::new()
                    .with("d", *d)
                    .with("max_size", s.max_size)
                    .with(
                        "mode",
                        if mode == ScanMode::Exhaustive {
                            "exhaustive"
                        } else {
                            "heuristic"
                        },
                    )
                    .with("scanned", s.scanned)
                    .with("min_deficit", s.min_deficit)
                    .with("normalized", s.normalized)
                    .with("argmin_size", s.argmin_size)
                    .with("argmin_neighborhood", s.argmin_neighborhood)
                    .with("argmin", s.argmin.to_hex()),
            )
        }
        Command::Smallsets { d, max_size } => {
            let s = small_set_expansion_scan(Dim::new(*d)?, *max_size)?;
            Output::One(
                Record::new()
                    .with("d", *d)
                    .with("max_size", s.max_size)
                    .with("scanned", s.scanned)
                    .with("max_ratio", s.max_ratio)
                    .with("argmax", s.argmax.to_hex()),
            )
        }
        Command::Containers { d, a, g: gg, list } => {
            let q = FamilyQuery::new(Dim::new(*d)?, *a, *gg)?;
            let members = enumerate_family(&q)?;
            if *list {
                Output::Table(
                    members
                        .iter()
                        .enumerate()
                        .map(|(i, m)| {
                            Record::new()
                                .with("d", *d)
                                .with("a", *a)
                                .with("g", *gg)
                                .with("index", i)
                                .with("size", m.len())
                                .with("set", m.to_hex())
                        })
                        .collect(),
                )
            } else {
                let t = q.deficit();
                let log2 = (!members.is_empty()).then(|| (members.len() as f64).log2());
                Output::One(
                    Record::new()
                        .with("d", *d)
                        .with("a", *a)
                        .with("g", *gg)
                        .with("t", t)
                        .count("family_size", members.len() as u128)
                        .with("log2_family_size", log2)
                        .with("within_g", log2.is_none_or(|l| l <= f64::from(*gg)))
                        .with(
                            "within_g_minus_t",
                            log2.is_none_or(|l| l <= f64::from(gg - t)),
                        ),
                )
            }
        }
        Command::Certify { d, phi, a, g: gg } => {
            let dim = Dim::new(*d)?;
            let Phi::Trivial = phi;
            let queries: Vec<FamilyQuery> = match (a, gg) {
                (Some(a), Some(gg)) => vec![FamilyQuery::new(dim, *a, *gg)?],
                _ => enumerate_all_families(dim)?
                    .keys()
                    .map(|&(a, gg)| FamilyQuery::new(dim, a, gg))
                    .collect::<Result<_>>()?,
            };
            let mut rows = Vec::new();
            for q in &queries {
                let r = audit_family(q, &TrivialPhi, g.gamma)?;
                rows.push(
                    Record::new()
                        .with("d", *d)
                        .with("a", q.a)
                        .with("g", q.g)
                        .with("t", r.t)
                        .count("family_size", r.family_size as u128)
                        .with("image_size", r.image_size)
                        .with("max_preimage", r.max_preimage)
                        .with("case1", r.case1)
                        .with("case2", r.case2)
                        .with("max_certificate_bits", r.max_certificate_bits)
                        .with("case2_reference_bits", r.case2_reference.total)
                        .with("bound_violations", r.bound_violations)
                        .with("roundtrip_failures", r.roundtrip_failures)
                        .with("log2_family_size", r.log2_family_size)
                        .with("within_g", r.within_g)
                        .with("within_g_minus_t", r.within_g_minus_t),
                );
            }
            Output::Table(rows)
        }
        Command::Audit { d, set } => {
            let a = VertexSet::from_hex(Dim::new(*d)?, set)?;
            let audit = cost_audit(&a, g.gamma, g.small_threshold)?;
            let row = |part: String| Record::new().with("d", *d).with("part", part);
            let mut rows = vec![row("decomposition".into())
                .with("class", "")
                .with("a", Option::<usize>::None)
                .with("g", Option::<usize>::None)
                .with("closure", audit.c_of_a)
                .with("t", Option::<usize>::None)
                .with("bits", audit.decomposition_bits)
                .with("within_g", Option::<bool>::None)];
            for (i, c) in audit.components.iter().enumerate() {
                let p = &c.profile;
                let class = match p.class {
                    ComponentClass::Isolated => "isolated",
                    ComponentClass::Small => "small",
                    ComponentClass::Large => "large",
                };
                rows.push(
                    row(i.to_string())
                        .with("class", class)
                        .with("a", p.a)
                        .with("g", p.g)
                        .with("closure", p.closure)
                        .with("t", p.t)
                        .with("bits", c.bits)
                        .with("within_g", c.within_g),
                );
            }
            rows.push(
                row("total".into())
                    .with("class", "")
                    .with("a", a.len())
                    .with("g", audit.g)
                    .with("closure", audit.c_of_a)
                    .with("t", Option::<usize>::None)
                    .with("bits", audit.total_bits)
                    .with("within_g", audit.within_g),
            );
            Output::Table(rows)
        }
        Command::Bounds {
            check,
            n,
            m,
            b,
            d,
            x,
            v,
            k,
        } => match check {
            Check::Entropy => {
                let h = binary_entropy(g.alpha)?;
                let ns: Vec<u32> = match n {
                    Some(n) => vec![*n],
                    None => (1..=30).collect(),
                };
                let mut rows = Vec::new();
                for n in ns {
                    let t = check_binom_tail(n, g.alpha)?;
                    rows.push(
                        Record::new()
                            .with("alpha", g.alpha)
                            .with("entropy", h)
                            .with("n", n)
                            .count("sum", t.sum)
                            .with("log2_bound", t.log2_bound)
                            .with("holds", t.holds),
                    );
                }
                Output::Table(rows)
            }
            Check::Compositions => {
                let m = m.ok_or_else(|| Error::Domain("--check compositions needs --m".into()))?;
                let c = compositions(m, *b)?;
                Output::One(
                    Record::new()
                        .with("m", c.m)
                        .with("max_parts", c.max_parts)
                        .count("exact", c.exact)
                        .with("index_sum", c.index_sum.map(|s| s.to_string()))
                        .with("log2_index_bound", c.log2_index_bound),
                )
            }
            Check::Linked => {
                let (Some(d), Some(x)) = (d, x) else {
                    return Err(Error::Domain("--check linked needs --d and --x".into()));
                };
                let dim = Dim::new(*d)?;
                let r = linked_sets_count(dim, *x, Vertex::new(dim, *v)?, *k)?;
                Output::One(
                    Record::new()
                        .with("d", *d)
                        .with("x", r.size)
                        .with("v", r.vertex)
                        .with("k", r.k)
                        .count("count", r.count)
                        .with("empirical_c", r.empirical_c),
                )
            }
        },
    };
    Ok((out, None))
}

pub fn emit(out: &Output, ctx: &Context, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => output::write(out, ctx.global.format, BufWriter::new(File::create(p)?))?,
        None => output::write(out, ctx.global.format, std::io::stdout().lock())?,
    }
    Ok(())
}
