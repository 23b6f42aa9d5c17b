use clap::{Args, ValueEnum};
use hilbert_kernel::kernelsum::{total, EvalPoint, TermBreakdown};
use hilbert_kernel::numberfield::{make_field, FieldDescriptor};
use hilbert_kernel::oracle::{compare_average, dim_zero_case};
use hilbert_kernel::report::{decimal, short};
use hilbert_kernel::verify::{self, Aggregate, DecayGrid, Lemma41Grid, Report, SymmetryGrid};
use rayon::prelude::*;
use rug::{Complex, Float};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::output::{csv_line, csv_preamble, csv_values, envelope, record, GridPoint};
use crate::{CliError, Outcome};

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = 0)]
    pub ell: usize,
    /// s = k/2 − δ + i·t₀ with 0 < δ < ½
    #[arg(long, allow_hyphen_values = true)]
    pub delta: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub t0: String,
}

pub fn eval(cfg: &RunConfig, a: &EvalArgs) -> Result<Outcome, CliError> {
    let field = make_field(cfg.field)?;
    let g = GridPoint { k: a.k, ell: a.ell, delta: a.delta.clone(), t0: a.t0.clone() };
    let p = EvalPoint::from_decimal(a.k, a.ell, &a.delta, &a.t0, cfg.prec_bits)?;
    let b = total(&field, &p, &cfg.truncation)?;
    let text = match cfg.format {
        Format::Json => json_text(&envelope("eval", cfg, record(cfg, &g, &p, &b))),
        Format::Csv => csv_preamble("eval", cfg) + &csv_line(&csv_values(cfg, &g, Some(&b))),
    };
    Ok(Outcome { text, pass: true })
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 40)]
    pub k_min: u32,
    #[arg(long, default_value_t = 200)]
    pub k_max: u32,
    #[arg(long, default_value_t = 20)]
    pub k_step: u32,
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    /// comma-separated δ values
    #[arg(long, value_delimiter = ',', default_value = "0.3")]
    pub delta: Vec<String>,
    /// comma-separated t₀ values
    #[arg(long, value_delimiter = ',', default_value = "0", allow_hyphen_values = true)]
    pub t0: Vec<String>,
}

pub fn scan(cfg: &RunConfig, a: &ScanArgs) -> Result<Outcome, CliError> {
    if a.k_step == 0 || a.k_min > a.k_max {
        return Err(usage("need k_step ≥ 1 and k_min ≤ k_max"));
    }
    let field = make_field(cfg.field)?;
    let mut grid = Vec::new();
    for d in &a.delta {
        for t in &a.t0 {
            for k in (a.k_min..=a.k_max).step_by(a.k_step as usize) {
                let g = GridPoint { k, ell: a.ell, delta: d.clone(), t0: t.clone() };
                let p = EvalPoint::from_decimal(k, a.ell, d, t, cfg.prec_bits)?;
                grid.push((g, p));
            }
        }
    }
    let results: Vec<hilbert_kernel::Result<TermBreakdown>> =
        grid.par_iter().map(|(_, p)| total(&field, p, &cfg.truncation)).collect();
    let mut warnings = 0usize;
    for ((g, _), r) in grid.iter().zip(&results) {
        if let Err(e) = r {
            warnings += 1;
            eprintln!("warning: k={} δ={} t0={}: {e}", g.k, g.delta, g.t0);
        }
    }
    if warnings > 0 {
        eprintln!("{warnings} grid point(s) failed and are flagged");
    }
    let text = match cfg.format {
        Format::Csv => {
            let mut s = csv_preamble("scan", cfg);
            for ((g, _), r) in grid.iter().zip(&results) {
                s += &csv_line(&csv_values(cfg, g, r.as_ref().ok()));
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = grid
                .iter()
                .zip(&results)
                .map(|((g, p), r)| match r {
                    Ok(b) => record(cfg, g, p, b),
                    Err(e) => json!({ "k": g.k.to_string(), "delta": g.delta, "t0": g.t0, "error": e.to_string() }),
                })
                .collect();
            json_text(&envelope("scan", cfg, json!({ "rows": rows, "warnings": warnings })))
        }
    };
    Ok(Outcome { text, pass: true })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemma41,
    Lemma42,
    Trotabas,
    Luo,
    GammaRatio,
    Symmetry,
    Decay,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// derivative orders (lemma42, symmetry, decay)
    #[arg(long, value_delimiter = ',')]
    pub ell: Vec<usize>,
    /// weights
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    pub delta: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t0: Vec<f64>,
    /// arguments x of the ₁f₁ bound (lemma41)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<f64>,
    /// largest derivative order (lemma41)
    #[arg(long)]
    pub max_ell: Option<usize>,
    /// exponents λ of the unit sum (luo)
    #[arg(long, value_delimiter = ',', default_value = "0.5,2,8")]
    pub lambda: Vec<String>,
    /// random elements per field (trotabas)
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    /// largest acceptable threshold weight (decay)
    #[arg(long)]
    pub k0_max: Option<u32>,
}

fn or<T: Clone>(given: &[T], default: Vec<T>) -> Vec<T> {
    if given.is_empty() {
        default
    } else {
        given.to_vec()
    }
}

fn lemma42_ks(field: &FieldDescriptor) -> Vec<u32> {
    if field.degree == 1 {
        (40..=200).step_by(40).collect()
    } else {
        (40..=120).step_by(20).collect()
    }
}

fn run_suite(cfg: &RunConfig, field: &FieldDescriptor, suite: Suite, a: &VerifyArgs) -> Result<Vec<Report>, CliError> {
    let (tr, prec) = (&cfg.truncation, cfg.prec_bits);
    let ells = or(&a.ell, vec![0, 1]);
    Ok(match suite {
        Suite::Lemma41 => {
            let d = Lemma41Grid::default();
            let grid = Lemma41Grid {
                max_ell: a.max_ell.unwrap_or(d.max_ell),
                xs: or(&a.x, d.xs),
                ks: or(&a.k, d.ks),
                deltas: or(&a.delta, d.deltas),
                t0s: or(&a.t0, d.t0s),
            };
            vec![verify::check_lemma41(&grid, prec)?]
        }
        Suite::Lemma42 => {
            let ks = or(&a.k, lemma42_ks(field));
            let mut out = Vec::new();
            for &ell in &ells {
                for &d in &or(&a.delta, vec![0.3]) {
                    for &t in &or(&a.t0, vec![0.0]) {
                        out.push(verify::check_lemma42(field, ell, &ks, d, t, tr, prec)?);
                    }
                }
            }
            out
        }
        Suite::Trotabas => vec![verify::check_trotabas(field, a.samples, cfg.seed)?.report],
        Suite::Luo => {
            if field.degree != 2 {
                return Err(usage("the unit sum needs a quadratic field"));
            }
            let lambdas = a
                .lambda
                .iter()
                .map(|v| Float::parse(v).map(|p| Float::with_val(prec, p)).map_err(|_| usage(format!("cannot parse λ = `{v}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            vec![verify::check_luo(field, &lambdas, tr.m_units)?]
        }
        Suite::GammaRatio => {
            let ks = or(&a.k, vec![50, 100, 150, 200]);
            let mut out = Vec::new();
            for &d in &or(&a.delta, vec![0.1, 0.3, 0.45]) {
                for &t in &or(&a.t0, vec![0.0, 1.0]) {
                    out.push(verify::check_gamma_ratio(&ks, d, t, field.degree as u32, prec)?);
                }
            }
            out
        }
        Suite::Symmetry => {
            let d = SymmetryGrid::default();
            let points = if a.delta.is_empty() && a.t0.is_empty() {
                d.points
            } else {
                let ts = or(&a.t0, vec![0.0]);
                or(&a.delta, vec![0.25]).iter().flat_map(|&x| ts.iter().map(move |&t| (x, t))).collect()
            };
            let grid = SymmetryGrid { ks: or(&a.k, d.ks), ells: or(&a.ell, d.ells), points };
            vec![verify::check_symmetry(field, &grid, tr, prec)?]
        }
        Suite::Decay => {
            let d = DecayGrid::default();
            let grid = DecayGrid {
                ks: or(&a.k, d.ks),
                deltas: or(&a.delta, d.deltas),
                t0s: or(&a.t0, d.t0s),
                k0_max: a.k0_max.unwrap_or(d.k0_max),
            };
            let mut out = Vec::new();
            for &ell in &ells {
                out.push(verify::check_decay_and_nonvanishing(field, ell, &grid, tr, prec)?);
            }
            out
        }
        Suite::All => {
            let mut suites = vec![Suite::Lemma41, Suite::Lemma42, Suite::Trotabas];
            if field.degree == 2 {
                suites.push(Suite::Luo);
            }
            suites.push(Suite::GammaRatio);
            // the functional-equation check is a level-one property
            if field.degree == 1 {
                suites.push(Suite::Symmetry);
            }
            suites.push(Suite::Decay);
            let mut out = Vec::new();
            for s in suites {
                out.extend(run_suite(cfg, field, s, a)?);
            }
            out
        }
    })
}

pub fn verify(cfg: &RunConfig, a: &VerifyArgs) -> Result<Outcome, CliError> {
    let field = make_field(cfg.field)?;
    let agg = Aggregate::new(run_suite(cfg, &field, a.suite, a)?);
    let pass = agg.pass;
    Ok(Outcome { text: json_text(&envelope("verify", cfg, agg)), pass })
}

fn require_rationals(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.field.name() != "q" {
        return Err(usage("the level-one oracles are defined over ℚ only"));
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct DimZeroArgs {
    /// weights with no cusp forms
    #[arg(long, value_delimiter = ',', default_value = "4,6,8,10,14")]
    pub k: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
    pub ell: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.4")]
    pub delta: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "0,1", allow_hyphen_values = true)]
    pub t0: Vec<String>,
}

pub fn dim_zero(cfg: &RunConfig, a: &DimZeroArgs) -> Result<Outcome, CliError> {
    require_rationals(cfg)?;
    let mut points = Vec::new();
    for &k in &a.k {
        hilbert_kernel::oracle::dim_cuspforms_level1(k)?;
        for &ell in &a.ell {
            for d in &a.delta {
                for t in &a.t0 {
                    points.push(EvalPoint::from_decimal(k, ell, d, t, cfg.prec_bits)?);
                }
            }
        }
    }
    let cases = points
        .par_iter()
        .map(|p| dim_zero_case(p, &cfg.truncation))
        .collect::<hilbert_kernel::Result<Vec<_>>>()?;
    let pass = cases.iter().all(|c| c.pass);
    let rows: Vec<Value> = cases
        .iter()
        .map(|c| {
            json!({
                "k": c.k, "ell": c.ell, "delta": c.delta, "t0": c.t0,
                "abs_A": short(c.abs_a), "tail_bound": short(c.tail_bound), "threshold": short(c.threshold), "pass": c.pass,
            })
        })
        .collect();
    let result = json!({ "criterion": "|A| < max(10·tail_bound, 1e-20)", "pass": pass, "cases": rows });
    Ok(Outcome { text: json_text(&envelope("oracle dim-zero", cfg, result)), pass })
}

#[derive(Debug, Args)]
pub struct DeltaRatioArgs {
    #[arg(long, default_value_t = 0)]
    pub ell: usize,
    /// e.g. 6.3 or 6.4+0.5i
    #[arg(long, allow_hyphen_values = true)]
    pub s1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub s2: String,
    /// terms of the direct Λ(Δ, s) series
    #[arg(long, default_value_t = 1000)]
    pub terms: usize,
    /// kernel truncation |N(a)|, |N(c)|, |N(a)N(c)| ≤ box; replaces the configured one
    #[arg(long = "box", default_value_t = 3000)]
    pub box_bound: u64,
    /// pass threshold for the residual (default 1e-15 for ℓ = 0, 1e-12 otherwise)
    #[arg(long)]
    pub tol: Option<f64>,
}

/// `a`, `a+bi`, `a-bi` or `bi`.
pub fn parse_complex(v: &str, prec: u32) -> Result<Complex, CliError> {
    let bad = || usage(format!("cannot parse complex number `{v}`"));
    let t: String = v.chars().filter(|c| !c.is_whitespace()).collect();
    let real = |x: &str| Float::parse(x).map(|p| Float::with_val(prec, p)).map_err(|_| bad());
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex::with_val(prec, (real(&t)?, 0)));
    };
    let b = body.as_bytes();
    let split = (1..b.len()).rev().find(|&i| (b[i] == b'+' || b[i] == b'-') && !matches!(b[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (real(&body[..i])?, &body[i..]),
        None => (Float::new(prec), body),
    };
    let im = match im {
        "" | "+" => Float::with_val(prec, 1),
        "-" => Float::with_val(prec, -1),
        x => real(x.strip_prefix('+').unwrap_or(x))?,
    };
    Ok(Complex::with_val(prec, (re, im)))
}

pub fn delta_ratio(mut cfg: RunConfig, a: &DeltaRatioArgs) -> Result<Outcome, CliError> {
    require_rationals(&cfg)?;
    let t = &mut cfg.truncation;
    t.a_max = a.box_bound;
    t.c_max = a.box_bound;
    t.p_max = Some(a.box_bound);
    cfg.validate()?;
    let prec = cfg.prec_bits;
    let p1 = EvalPoint::at_s(12, a.ell, &parse_complex(&a.s1, prec)?, prec)?;
    let p2 = EvalPoint::at_s(12, a.ell, &parse_complex(&a.s2, prec)?, prec)?;
    let tol = a.tol.unwrap_or(if a.ell == 0 { 1e-15 } else { 1e-12 });
    let r = compare_average(&p1, &p2, &cfg.truncation, a.terms)?;
    let residual = r.residual.to_f64();
    let pass = residual < tol;
    let d = cfg.digits;
    let c = |z: &Complex| json!([decimal(z.real(), d), decimal(z.imag(), d)]);
    let result = json!({
        "ell": a.ell, "s1": c(p1.s()), "s2": c(p2.s()),
        "R_kernel": c(&r.r_kernel), "R_direct": c(&r.r_direct),
        "residual": short(residual), "kernel_error": short(r.kernel_error.to_f64()), "tolerance": short(tol),
        "A1": c(&r.a1), "A2": c(&r.a2), "tail1": short(r.tail1.to_f64()), "tail2": short(r.tail2.to_f64()),
        "direct_terms": a.terms, "pass": pass,
    });
    Ok(Outcome { text: json_text(&envelope("oracle delta-ratio", &cfg, result)), pass })
}
