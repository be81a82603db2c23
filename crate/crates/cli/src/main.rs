use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use faberhurwitz::combinat::{r_fab, Partition};
use faberhurwitz::degeneration::{faber_hurwitz, fh_series};
use faberhurwitz::faber::psiphi::{build_phi, build_psi, GenusSeries, XiTops};
use faberhurwitz::faber::solve::solve_default;
use faberhurwitz::faber::{conjecture_value_smoothed, SymbolTable};
use faberhurwitz::hurwitz::{strategy, HurwitzStrategy};
use faberhurwitz::localization::solve_tree_series;
use faberhurwitz::pseries::TruncProfile;
use faberhurwitz::suites::{q_json, run_suites, solved_tables, SuiteConfig};

#[derive(Parser)]
#[command(name = "faberhurwitz", about = "Exact Hurwitz, Faber-Hurwitz and Faber intersection numbers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Genus g Hurwitz number H^g_alpha
    Hurwitz {
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        /// use the monodromy count instead of the closed form
        #[arg(long)]
        oracle: bool,
    },
    /// Double Hurwitz number H^g_{alpha,beta}
    DoubleHurwitz {
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        beta: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long)]
        oracle: bool,
    },
    /// Faber-Hurwitz number F^g_alpha
    FaberHurwitz {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<u32>,
    },
    /// Solved Faber symbols of one genus
    FaberNumbers {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = 2)]
        parts: usize,
        #[arg(long)]
        compare_conjecture: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Dump a generating series as JSON
    Series {
        #[arg(long, value_enum)]
        name: SeriesName,
        #[arg(long)]
        genus: Option<u32>,
        /// number of points for phi and psi
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[command(flatten)]
        trunc: TruncArgs,
    },
    /// Run verification suites; exit code 1 if any check fails
    Verify {
        #[arg(long = "suite", required = true)]
        suites: Vec<String>,
        #[arg(long, default_value_t = 4)]
        max_genus: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesName {
    /// zeta^g with Faber symbol coefficients
    Zeta,
    /// the Faber-Hurwitz series F^g
    FaberHurwitz,
    /// Phi_m by powers of t
    Phi,
    /// Psi_m by powers of t, with solved symbols
    Psi,
}

#[derive(Args)]
struct TruncArgs {
    #[arg(long)]
    z_max: Option<u32>,
    #[arg(long)]
    t_max: Option<u32>,
    /// u window as MIN:MAX
    #[arg(long, allow_hyphen_values = true)]
    u_window: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    z_max: Option<u32>,
    n_max: Option<u32>,
    u_min: Option<i32>,
    u_max: Option<i32>,
    xy_max: Option<u32>,
    t_max: Option<u32>,
    p_len_max: Option<u32>,
}

enum Failure {
    Usage(String),
    Verify(String),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn partition(parts: &[u32]) -> Result<Partition, Failure> {
    Partition::new(parts.to_vec()).map_err(usage)
}

fn profile(t: &TruncArgs) -> Result<TruncProfile, Failure> {
    let mut p = TruncProfile::default();
    if let Ok(path) = std::env::var("FABERHURWITZ_PROFILE") {
        let text = std::fs::read_to_string(&path).map_err(|e| usage(format!("{path}: {e}")))?;
        let f: ProfileFile = toml::from_str(&text).map_err(|e| usage(format!("{path}: {e}")))?;
        p.z_max = f.z_max.unwrap_or(p.z_max);
        p.n_max = f.n_max.unwrap_or(p.n_max);
        p.u_min = f.u_min.unwrap_or(p.u_min);
        p.u_max = f.u_max.unwrap_or(p.u_max);
        p.xy_max = f.xy_max.unwrap_or(p.xy_max);
        p.t_max = f.t_max.unwrap_or(p.t_max);
        p.p_len_max = f.p_len_max.unwrap_or(p.p_len_max);
    }
    if let Some(z) = t.z_max {
        p.z_max = z;
        p.n_max = p.n_max.min(z);
    }
    if let Some(tm) = t.t_max {
        p.t_max = tm;
    }
    if let Some(w) = &t.u_window {
        let (a, b) = w.split_once(':').ok_or_else(|| usage("--u-window expects MIN:MAX"))?;
        p.u_min = a.trim().parse().map_err(|_| usage("bad --u-window minimum"))?;
        p.u_max = b.trim().parse().map_err(|_| usage("bad --u-window maximum"))?;
    }
    if p.z_max == 0 || p.n_max == 0 || p.p_len_max == 0 {
        return Err(usage("profile bounds must be positive"));
    }
    p.validate().map_err(usage)?;
    Ok(p)
}

/// Genus 0 strategy; higher genera always go through the monodromy count.
fn pick(oracle: bool) -> Box<dyn HurwitzStrategy> {
    strategy(if oracle { "monodromy" } else { "closed" }).expect("registered strategy")
}

fn genus_json(s: &GenusSeries) -> Value {
    let m: serde_json::Map<String, Value> = s.iter().map(|(g, p)| (format!("t^{}", 2 * g), p.to_json())).collect();
    Value::Object(m)
}

fn faber_rows(g: u32, parts: usize, compare: bool, table: &SymbolTable) -> Vec<Value> {
    let mut rows = Vec::new();
    for (k, v, prov) in table.iter() {
        if k.g != g || k.n() > parts {
            continue;
        }
        let mut row = json!({"key": k.to_string(), "solved": q_json(v), "provenance": prov.as_str()});
        if compare {
            match conjecture_value_smoothed(k) {
                Ok(c) => {
                    row["conjectured"] = q_json(&c);
                    row["match"] = json!(c == *v);
                }
                Err(_) => {
                    row["conjectured"] = Value::Null;
                    row["match"] = Value::Null;
                }
            }
        }
        rows.push(row);
    }
    rows
}

fn run(cli: Cli) -> Result<String, Failure> {
    let out = match cli.cmd {
        Cmd::Hurwitz { alpha, genus, oracle } => {
            let a = partition(&alpha)?;
            let h = if genus == 0 {
                pick(oracle).single(&a)
            } else {
                faberhurwitz::hurwitz::connected_hurwitz(genus, &a, None)
            }
            .map_err(usage)?;
            json!({"alpha": a.parts(), "genus": genus, "H": q_json(&h)}).to_string()
        }
        Cmd::DoubleHurwitz { alpha, beta, genus, oracle } => {
            let (a, b) = (partition(&alpha)?, partition(&beta)?);
            let h = if genus == 0 {
                pick(oracle).double(&a, &b)
            } else {
                faberhurwitz::hurwitz::connected_hurwitz(genus, &a, Some(&b))
            }
            .map_err(usage)?;
            json!({"alpha": a.parts(), "beta": b.parts(), "genus": genus, "H": q_json(&h)}).to_string()
        }
        Cmd::FaberHurwitz { genus, alpha } => {
            let a = partition(&alpha)?;
            let f = faber_hurwitz(genus, &a).map_err(usage)?;
            json!({"F": q_json(&f), "rFab": r_fab(&a)}).to_string()
        }
        Cmd::FaberNumbers { genus, parts, compare_conjecture, format } => {
            if genus == 0 || !(1..=3).contains(&parts) {
                return Err(usage("faber-numbers needs --genus >= 1 and 1 <= --parts <= 3"));
            }
            let (_, rep) = solve_default(genus, parts).map_err(usage)?;
            let mut failed = false;
            let text = match format {
                Format::Csv => rep.table.to_csv().trim_end().to_string(),
                _ => {
                    let rows = faber_rows(genus, parts, compare_conjecture, &rep.table);
                    failed = rows.iter().any(|r| r.get("match") == Some(&json!(false)));
                    Value::Array(rows).to_string()
                }
            };
            if failed {
                return Err(Failure::Verify(text));
            }
            text
        }
        Cmd::Series { name, genus, m, trunc } => {
            let p = profile(&trunc)?;
            let g_max = p.t_max / 2;
            match name {
                SeriesName::Zeta => {
                    let g = genus.ok_or_else(|| usage("--genus is required"))?;
                    let ts = solve_tree_series(&p).map_err(usage)?;
                    ts.zeta(g).to_json().to_string()
                }
                SeriesName::FaberHurwitz => {
                    let g = genus.ok_or_else(|| usage("--genus is required"))?;
                    fh_series(g, &p).map_err(usage)?.to_json().to_string()
                }
                SeriesName::Phi => genus_json(&build_phi(m, genus.unwrap_or(g_max)).map_err(usage)?).to_string(),
                SeriesName::Psi => {
                    let g = genus.unwrap_or(g_max);
                    let (table, _) = solved_tables(g).map_err(usage)?;
                    let tops = if m == 1 { XiTops::for_genera(g, 0) } else { XiTops::for_genera(0, g) }.map_err(usage)?;
                    genus_json(&build_psi(m, g, &table, &tops).map_err(usage)?).to_string()
                }
            }
        }
        Cmd::Verify { suites, max_genus, format } => {
            let cfg = SuiteConfig { max_genus, ..Default::default() };
            let reports = run_suites(&suites, &cfg).map_err(usage)?;
            let ok = reports.iter().all(|r| r.passed());
            let text = match format {
                Format::Json => Value::Array(reports.iter().map(|r| r.to_json()).collect()).to_string(),
                _ => {
                    let mut lines = Vec::new();
                    for r in &reports {
                        for c in &r.checks {
                            lines.push(format!("{} {} {}: {} compared", if c.passed() { "PASS" } else { "FAIL" }, r.suite, c.name, c.compared));
                            lines.extend(c.failures.iter().map(|f| format!("  {f}")));
                        }
                    }
                    lines.join("\n")
                }
            };
            if !ok {
                return Err(Failure::Verify(text));
            }
            text
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(s) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verify(s)) => {
            println!("{s}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(s)) => {
            eprintln!("error: {s}");
            eprintln!("usage: faberhurwitz <hurwitz|double-hurwitz|faber-hurwitz|faber-numbers|series|verify> [options]");
            ExitCode::from(2)
        }
    }
}
