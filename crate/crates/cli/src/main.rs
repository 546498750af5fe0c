mod json;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use intersectlab::canonical::{build_frankl, build_full_star, build_hmf, size_frankl, size_hmf, FranklFamilySpec};
use intersectlab::exactmath::{parse_rational, BigRational};
use intersectlab::lattice::{count_avoiding_paths, count_hitting_paths, first_hit_counts, g_uniform, LatticeLine};
use intersectlab::search::{
    max_nonuniform, max_uniform, scan_maximal_families, verify_deletion_recursion, SearchConfig,
};
use intersectlab::setfamilies::{io as family_io, is_rwise_t_intersecting, is_t_star, Family};
use intersectlab::shadows::{lower_shadow, shadow_report, upper_shadow};
use intersectlab::shifting::{is_shifted, saturate, shift, shift_to_fixpoint, ShiftStep};
use intersectlab::thresholds::{n0_lower_companion, n0_upper_bound, rho_ceil, rho_scan, star_vs_a1_scan, ThresholdScan};
use intersectlab::verify::run_suite;
use intersectlab::walks::{alpha, f_finite, gamma_root, WalkParams};
use intersectlab::Error;
use serde_json::{json, Value};

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "intersectlab", version, about = "Exact computation for r-wise t-intersecting families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or inspect families.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Apply shifting operators to a family file.
    Shift(ShiftArgs),
    /// Greedily extend a family until no k-set can be added.
    Saturate(SaturateArgs),
    /// Lattice-path counts and hitting probabilities.
    #[command(subcommand)]
    Paths(PathsCmd),
    /// Random-walk hitting probabilities.
    #[command(subcommand)]
    Walk(WalkCmd),
    /// Lower or upper shadows of a family file.
    Shadow(ShadowArgs),
    /// Exact extremal searches.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Threshold formulas and scans.
    #[command(subcommand)]
    Threshold(ThresholdCmd),
    /// Run named acceptance suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Output {
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct Rt {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    t: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    /// Frankl family A_i(n,k,r,t); omit --k for the non-uniform version.
    Frankl,
    /// Full t-star on [t].
    Star,
    /// Hilton–Milner-type family B(n,k,r,t).
    Hm,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Construct a canonical family.
    Build {
        #[arg(long, value_enum)]
        kind: FamilyKind,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long, default_value_t = 0)]
        i: u32,
        /// Only report the size (works beyond the explicit-construction limit).
        #[arg(long)]
        size_only: bool,
        /// Write the family here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Re-read a family file and report its properties.
    Check {
        /// Family file, or `-` for stdin.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        rt: Rt,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct ShiftArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, requires = "j", conflicts_with = "fixpoint")]
    i: Option<u32>,
    #[arg(long, requires = "i")]
    j: Option<u32>,
    /// Shift until every S_ij fixes the family.
    #[arg(long)]
    fixpoint: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SaturateArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    rt: Rt,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand)]
enum PathsCmd {
    /// Paths to (n-k, k) that touch y = (r-1)x + t.
    Count {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        rt: Rt,
        #[command(flatten)]
        output: Output,
    },
    /// g(n, i): hitting probability of a uniform path to (n-i, i); all i with --csv.
    G {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        i: Option<u32>,
        #[command(flatten)]
        rt: Rt,
        /// Emit `i,g` plot data for i = 0..=n.
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        output: Output,
    },
    /// First-touch counts ℓ(t, i) for i = 0..=i_max.
    Ell {
        #[arg(long)]
        i_max: u32,
        #[command(flatten)]
        rt: Rt,
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum WalkCmd {
    /// Exact probability that a p-walk of n steps touches the line.
    F {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, allow_hyphen_values = true)]
        t: i64,
        #[arg(long, default_value = "1/2")]
        p: String,
        #[command(flatten)]
        output: Output,
    },
    /// Root γ of x = p + (1-p)x^r in (0, 1].
    Gamma {
        #[arg(long)]
        r: u32,
        #[arg(long, default_value = "1/2")]
        p: String,
        #[arg(long, default_value = "1e-20")]
        tol: String,
        #[command(flatten)]
        output: Output,
    },
    /// α_r = γ at p = 1/2.
    Alpha {
        #[arg(long)]
        r: u32,
        #[arg(long, default_value = "1e-20")]
        tol: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct ShadowArgs {
    #[arg(long)]
    input: PathBuf,
    /// Shadow depth; omit with --up.
    #[arg(long, default_value_t = 1)]
    b: u32,
    /// Upper shadow instead of lower.
    #[arg(long)]
    up: bool,
    /// Compare with the lower bound for r-wise t-intersecting families (needs --r, --t).
    #[arg(long, requires_all = ["r", "t"])]
    report: bool,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SearchLimits {
    /// Cap on C(n,k); overrides INTERSECTLAB_CAP.
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Largest r-wise t-intersecting family; omit --k to search all of 2^[n].
    Max {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: Option<u32>,
        #[command(flatten)]
        rt: Rt,
        /// Only families with empty common intersection.
        #[arg(long)]
        nontrivial: bool,
        /// Search all families, not only shifted ones.
        #[arg(long)]
        no_shift_reduction: bool,
        /// Skip the check that every optimum is a t-star.
        #[arg(long)]
        no_star_check: bool,
        #[command(flatten)]
        limits: SearchLimits,
        #[command(flatten)]
        output: Output,
    },
    /// Check m(n,k) ≤ m(n-1,k) + m(n-1,k-1).
    Recursion {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        rt: Rt,
        #[command(flatten)]
        limits: SearchLimits,
        #[command(flatten)]
        output: Output,
    },
    /// Enumerate maximal families and check the structure of non-star ones.
    Maximal {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        rt: Rt,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct ScanOutput {
    /// Emit `n,A1,star,sign` plot data.
    #[arg(long)]
    csv: bool,
    /// Add exact optima where the search is within the cap.
    #[arg(long)]
    with_search: bool,
    #[command(flatten)]
    limits: SearchLimits,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand)]
enum ThresholdCmd {
    /// Upper bound on n past which the full t-star is optimal.
    N0 {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        rt: Rt,
        #[command(flatten)]
        output: Output,
    },
    /// Sign of |A_1| - C(n-t,k-t) over a range of n.
    ScanA1 {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        rt: Rt,
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        #[command(flatten)]
        scan: ScanOutput,
    },
    /// r = 3 scan around n = ρ_t·k with ρ_t = (√(4t+9) - 1)/2.
    ScanRho {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u32,
        /// How far either side of ⌈ρ_t k⌉ to scan.
        #[arg(long, default_value_t = 5)]
        span: u32,
        #[command(flatten)]
        scan: ScanOutput,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name or number, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[command(flatten)]
    output: Output,
}

/// What a command produced: text or JSON for stdout, and whether a check failed.
struct Outcome {
    text: String,
    json: Value,
    failed: bool,
}

impl Outcome {
    fn new(text: String, json: Value) -> Self {
        Outcome {
            text,
            json,
            failed: false,
        }
    }
}

fn read_family(path: &PathBuf) -> Result<Family, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path)?
    };
    Ok(family_io::parse(&text)?)
}

/// Emits a family either to `out` or as the command's stdout payload.
fn family_outcome(f: &Family, out: &Option<PathBuf>, extra: Value) -> Result<Outcome, CliError> {
    let text = family_io::to_text(f);
    let mut js = json::family(f);
    if let (Value::Object(map), Value::Object(more)) = (&mut js, extra) {
        map.extend(more);
    }
    match out {
        Some(path) => {
            fs::write(path, &text)?;
            Ok(Outcome::new(format!("wrote {} members to {}\n", f.len(), path.display()), js))
        }
        None => Ok(Outcome::new(text, js)),
    }
}

fn rational_arg(s: &str) -> Result<BigRational, CliError> {
    Ok(parse_rational(s)?)
}

fn search_config(limits: &SearchLimits) -> Result<SearchConfig, CliError> {
    let mut cfg = SearchConfig::from_env()?;
    if let Some(cap) = limits.cap {
        if cap == 0 {
            return Err(Error::InvalidParameter("--cap must be positive".into()).into());
        }
        cfg.cap = cap;
    }
    Ok(cfg)
}

fn scan_outcome(scan: &ThresholdScan, csv: bool) -> Outcome {
    let rows: Vec<Value> = scan
        .rows
        .iter()
        .map(|row| {
            json!({
                "n": row.n,
                "a1": json::int(&row.a1),
                "star": json::int(&row.star),
                "sign": sign_name(row.sign),
                "max_frankl": json::int(&row.max_frankl),
                "max_sign": sign_name(row.max_sign),
                "optimum": row.optimum.as_ref().map(json::int),
            })
        })
        .collect();
    let js = json!({
        "k": scan.k, "r": scan.r, "t": scan.t,
        "n_from": scan.n_from, "n_to": scan.n_to,
        "certified": scan.certified,
        "rows": rows,
    });
    let text = if csv {
        scan.to_csv()
    } else {
        let mut s = format!("k={} r={} t={} (A_1 vs C(n-t,k-t))\n", scan.k, scan.r, scan.t);
        for row in &scan.rows {
            s.push_str(&format!(
                "n={:<4} A1={} star={} {}{}\n",
                row.n,
                row.a1,
                row.star,
                sign_name(row.sign),
                row.optimum.as_ref().map(|o| format!(" optimum={o}")).unwrap_or_default()
            ));
        }
        s
    };
    Outcome::new(text, js)
}

fn sign_name(o: std::cmp::Ordering) -> &'static str {
    match o {
        std::cmp::Ordering::Less => "star larger",
        std::cmp::Ordering::Equal => "equal",
        std::cmp::Ordering::Greater => "A_1 larger",
    }
}

fn run(cli: Cli) -> Result<(Outcome, bool), CliError> {
    let mut as_json = false;
    let mut take_json = |o: &Output| as_json = o.json;
    let outcome = match cli.command {
        Command::Family(FamilyCmd::Build { kind, n, k, r, t, i, size_only, out, output }) => {
            take_json(&output);
            let size = match kind {
                FamilyKind::Frankl => {
                    let spec = match k {
                        Some(k) => FranklFamilySpec::uniform(n, k, r, t, i),
                        None => FranklFamilySpec::nonuniform(n, r, t, i),
                    };
                    if size_only {
                        Some(size_frankl(&spec)?)
                    } else {
                        return finish(family_outcome(&build_frankl(&spec)?, &out, json!({}))?, as_json);
                    }
                }
                FamilyKind::Star => {
                    let k = k.ok_or_else(|| Error::InvalidParameter("--k is required".into()))?;
                    let f = build_full_star(n, k, t)?;
                    if size_only {
                        Some(intersectlab::BigInt::from(f.len()))
                    } else {
                        return finish(family_outcome(&f, &out, json!({}))?, as_json);
                    }
                }
                FamilyKind::Hm => {
                    let k = k.ok_or_else(|| Error::InvalidParameter("--k is required".into()))?;
                    if size_only {
                        Some(size_hmf(n, k, r, t)?)
                    } else {
                        return finish(family_outcome(&build_hmf(n, k, r, t)?, &out, json!({}))?, as_json);
                    }
                }
            };
            let size = size.expect("size computed");
            Outcome::new(format!("{size}\n"), json!({ "size": json::int(&size) }))
        }
        Command::Family(FamilyCmd::Check { input, rt, output }) => {
            take_json(&output);
            let f = read_family(&input)?;
            let rwise = is_rwise_t_intersecting(&f, rt.r, rt.t);
            let star = is_t_star(&f, rt.t);
            let shifted = is_shifted(&f);
            let js = json!({
                "n": f.ground_n(), "k": f.uniform_k(), "size": f.len(),
                "rwise_t_intersecting": rwise, "t_star": star, "shifted": shifted,
            });
            Outcome::new(
                format!(
                    "size={} r-wise t-intersecting={rwise} t-star={star} shifted={shifted}\n",
                    f.len()
                ),
                js,
            )
        }
        Command::Shift(a) => {
            take_json(&a.output);
            let f = read_family(&a.input)?;
            let g = if a.fixpoint {
                shift_to_fixpoint(&f)
            } else {
                match (a.i, a.j) {
                    (Some(i), Some(j)) => shift(&f, ShiftStep::new(i, j)?)?,
                    _ => return Err(Error::InvalidParameter("give --i and --j, or --fixpoint".into()).into()),
                }
            };
            family_outcome(&g, &a.out, json!({ "shifted": is_shifted(&g) }))?
        }
        Command::Saturate(a) => {
            take_json(&a.output);
            let f = read_family(&a.input)?;
            let g = saturate(&f, a.rt.r, a.rt.t)?;
            family_outcome(&g, &a.out, json!({ "added": g.len() - f.len() }))?
        }
        Command::Paths(PathsCmd::Count { n, k, rt, output }) => {
            take_json(&output);
            let line = LatticeLine::new(rt.r, rt.t)?;
            let hit = count_hitting_paths(n, k, line)?;
            let avoid = count_avoiding_paths(n, k, line)?;
            Outcome::new(
                format!("{hit}\n"),
                json!({ "n": n, "k": k, "r": rt.r, "t": rt.t, "hitting": json::int(&hit), "avoiding": json::int(&avoid) }),
            )
        }
        Command::Paths(PathsCmd::G { n, i, rt, csv, output }) => {
            take_json(&output);
            let line = LatticeLine::new(rt.r, rt.t)?;
            let range: Vec<u32> = match i {
                Some(i) => vec![i],
                None => (0..=n).collect(),
            };
            let mut text = if csv { String::from("i,g\n") } else { String::new() };
            let mut rows = Vec::new();
            for i in range {
                let g = g_uniform(n, i, line)?;
                if csv {
                    text.push_str(&format!("{i},{}\n", intersectlab::exactmath::rational_to_decimal(&g, json::DECIMAL_DIGITS)));
                } else {
                    text.push_str(&format!("g({n},{i}) = {g}\n"));
                }
                rows.push(json!({ "i": i, "g": json::rational(&g) }));
            }
            Outcome::new(text, json!({ "n": n, "r": rt.r, "t": rt.t, "values": rows }))
        }
        Command::Paths(PathsCmd::Ell { i_max, rt, csv, output }) => {
            take_json(&output);
            let line = LatticeLine::new(rt.r, rt.t)?;
            let counts = first_hit_counts(line, i_max);
            let mut text = if csv { String::from("i,ell\n") } else { String::new() };
            for (i, c) in counts.iter().enumerate() {
                text.push_str(&if csv { format!("{i},{c}\n") } else { format!("ell({},{i}) = {c}\n", rt.t) });
            }
            Outcome::new(
                text,
                json!({ "r": rt.r, "t": rt.t, "ell": counts.iter().map(json::int).collect::<Vec<_>>() }),
            )
        }
        Command::Walk(WalkCmd::F { n, r, t, p, output }) => {
            take_json(&output);
            let p = rational_arg(&p)?;
            let params = WalkParams::new(r, t, p)?;
            let f = f_finite(n, &params);
            Outcome::new(
                format!("{f}\ndecimal {}\n", intersectlab::exactmath::rational_to_decimal(&f, json::DECIMAL_DIGITS)),
                json!({ "n": n, "r": r, "t": t, "f": json::rational(&f) }),
            )
        }
        Command::Walk(WalkCmd::Gamma { r, p, tol, output }) => {
            take_json(&output);
            let tol = rational_arg(&tol)?;
            let digits = json::digits_for(&tol);
            let g = gamma_root(r, &rational_arg(&p)?, &json::working_tolerance(&tol))?;
            Outcome::new(
                format!("decimal {}\n", json::truncated_decimal(&g.midpoint(), digits)),
                json!({ "r": r, "gamma": json::interval(&g, digits) }),
            )
        }
        Command::Walk(WalkCmd::Alpha { r, tol, output }) => {
            take_json(&output);
            let tol = rational_arg(&tol)?;
            let digits = json::digits_for(&tol);
            let a = alpha(r, &json::working_tolerance(&tol))?;
            Outcome::new(
                format!("decimal {}\n", json::truncated_decimal(&a.midpoint(), digits)),
                json!({ "r": r, "alpha": json::interval(&a, digits) }),
            )
        }
        Command::Shadow(a) => {
            take_json(&a.output);
            let f = read_family(&a.input)?;
            if a.report {
                let rep = shadow_report(&f, a.r.expect("required"), a.t.expect("required"), a.b)?;
                let failed = !rep.bound_satisfied;
                let mut o = Outcome::new(
                    format!(
                        "|F|={} |shadow|={} bound={} satisfied={}\n",
                        rep.input_size, rep.output_size, rep.bound, rep.bound_satisfied
                    ),
                    json::shadow_report(&rep),
                );
                o.failed = failed;
                o
            } else {
                let g = if a.up { upper_shadow(&f)? } else { lower_shadow(&f, a.b)? };
                family_outcome(&g, &a.out, json!({}))?
            }
        }
        Command::Search(SearchCmd::Max { n, k, rt, nontrivial, no_shift_reduction, no_star_check, limits, output }) => {
            take_json(&output);
            let mut cfg = search_config(&limits)?;
            cfg.shift_reduction = !no_shift_reduction;
            if no_star_check {
                cfg = cfg.without_star_check();
            }
            let rep = match k {
                Some(k) => max_uniform(n, k, rt.r, rt.t, nontrivial, &cfg)?,
                None => max_nonuniform(n, rt.r, rt.t, nontrivial)?,
            };
            let text = format!(
                "optimum {}\nall optima are t-stars: {}\nnodes explored: {}\nwitness:\n{}",
                rep.optimum,
                rep.all_optima_are_t_stars
                    .map_or("unknown".to_string(), |b| b.to_string()),
                rep.nodes_explored,
                family_io::to_text(&rep.witness)
            );
            Outcome::new(text, json::search_report(&rep))
        }
        Command::Search(SearchCmd::Recursion { n, k, rt, limits, output }) => {
            take_json(&output);
            let cfg = search_config(&limits)?.without_star_check();
            let d = verify_deletion_recursion(n, k, rt.r, rt.t, &cfg)?;
            let mut o = Outcome::new(
                format!("{} <= {} + {}: {}\n", d.whole, d.without_n, d.with_n, d.holds),
                json!({
                    "whole": json::int(&d.whole), "without_n": json::int(&d.without_n),
                    "with_n": json::int(&d.with_n), "holds": d.holds,
                }),
            );
            o.failed = !d.holds;
            o
        }
        Command::Search(SearchCmd::Maximal { n, k, rt, output }) => {
            take_json(&output);
            let s = scan_maximal_families(n, k, rt.r, rt.t)?;
            let mut o = Outcome::new(
                format!(
                    "maximal families: {}\nnot t-stars: {}\nstructure holds: {}\n",
                    s.maximal_families, s.non_star_maximal, s.holds
                ),
                json!({
                    "maximal_families": s.maximal_families,
                    "non_star_maximal": s.non_star_maximal,
                    "holds": s.holds,
                    "counterexample": s.counterexample.as_ref().map(json::family),
                }),
            );
            o.failed = !s.holds;
            o
        }
        Command::Threshold(ThresholdCmd::N0 { k, rt, output }) => {
            take_json(&output);
            let hi = n0_upper_bound(k, rt.r, rt.t)?;
            let lo = n0_lower_companion(k, rt.r, rt.t)?;
            Outcome::new(
                format!(
                    "upper bound {}\nlower companion {}\n",
                    json::truncated_decimal(&hi.midpoint(), 12),
                    json::truncated_decimal(&lo.midpoint(), 12)
                ),
                json!({
                    "k": k, "r": rt.r, "t": rt.t,
                    "upper_bound": json::interval(&hi, 12),
                    "lower_companion": json::interval(&lo, 12),
                }),
            )
        }
        Command::Threshold(ThresholdCmd::ScanA1 { k, rt, from, to, scan }) => {
            take_json(&scan.output);
            let cfg = search_config(&scan.limits)?.without_star_check();
            let s = star_vs_a1_scan(k, rt.r, rt.t, from..=to, scan.with_search.then_some(&cfg))?;
            scan_outcome(&s, scan.csv)
        }
        Command::Threshold(ThresholdCmd::ScanRho { k, t, span, scan }) => {
            take_json(&scan.output);
            let cfg = search_config(&scan.limits)?.without_star_check();
            let s = rho_scan(k, t, span, scan.with_search.then_some(&cfg))?;
            let mut o = scan_outcome(&s, scan.csv);
            if let Value::Object(map) = &mut o.json {
                map.insert("rho_ceil".into(), json!(rho_ceil(k, t)));
            }
            o
        }
        Command::Verify(a) => {
            take_json(&a.output);
            let results = run_suite(&a.suite)?;
            let failed = results.iter().any(|r| !r.passed);
            let text: String = results.iter().map(|r| format!("{r}\n")).collect();
            let js = json!({
                "results": results.iter().map(|r| json!({
                    "id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail,
                })).collect::<Vec<_>>(),
                "passed": !failed,
            });
            let mut o = Outcome::new(text, js);
            o.failed = failed;
            o
        }
    };
    Ok((outcome, as_json))
}

fn finish(o: Outcome, as_json: bool) -> Result<(Outcome, bool), CliError> {
    Ok((o, as_json))
}

enum CliError {
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn report_error(e: CliError) -> ExitCode {
    let (code, body) = match e {
        CliError::Lib(Error::CapExceeded { what, value, cap }) => (
            EXIT_CAP,
            json!({ "error": "cap_exceeded", "what": what, "value": value.to_string(), "cap": cap.to_string() }),
        ),
        CliError::Lib(e @ Error::Undecidable { .. }) => (EXIT_CAP, json!({ "error": "undecidable", "message": e.to_string() })),
        CliError::Lib(e) => (EXIT_USAGE, json!({ "error": "invalid_input", "message": e.to_string() })),
        CliError::Io(e) => (EXIT_FAILED_CHECK, json!({ "error": "io", "message": e.to_string() })),
    };
    eprintln!("{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((outcome, as_json)) => {
            let mut stdout = io::stdout().lock();
            let written = if as_json {
                writeln!(stdout, "{}", serde_json::to_string_pretty(&outcome.json).expect("serializable"))
            } else {
                write!(stdout, "{}", outcome.text)
            };
            if written.is_err() {
                return ExitCode::from(EXIT_FAILED_CHECK);
            }
            if outcome.failed {
                ExitCode::from(EXIT_FAILED_CHECK)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => report_error(e),
    }
}
