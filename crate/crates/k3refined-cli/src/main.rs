//! Command-line surface for the refined-invariant library.
//!
//! Exit status: 0 on success, 1 when a checked identity is falsified,
//! 2 on invalid invocation.

mod render;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use k3refined::hodge;
use k3refined::moonshine;
use k3refined::motivic;
use k3refined::noether_lefschetz as nl;
use k3refined::pairs;
use k3refined::su2::GenusTable;
use k3refined::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Parser)]
#[command(
    name = "k3refined",
    version,
    about = "Exact refined BPS invariants of K3 surfaces and the STU model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Refined multiplicity tables R^h (optionally the diamond/circle split)
    Refined {
        #[arg(long, default_value_t = 6)]
        hmax: usize,
        /// Also emit the diamond part and the circle remainder
        #[arg(long)]
        diamond: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Genus multiplicities r^h_g via the genus-basis change
    Kkv {
        #[arg(long, default_value_t = 6)]
        hmax: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the pairs series against the Hodge product coefficientwise
    KyCheck {
        #[arg(long, default_value_t = 4)]
        hmax: usize,
        #[arg(long, default_value_t = 8)]
        nmax: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Predicted pairs invariants for multiples of a primitive class
    ConjectureC {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i64).range(0..))]
        h: i64,
        #[arg(long, default_value_t = 3, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
        kmax: usize,
        #[arg(long, default_value_t = 12)]
        window: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Noether-Lefschetz profiles and refined invariants of the STU model
    Stu {
        #[arg(long)]
        d1: i64,
        #[arg(long)]
        d2: i64,
        /// Also emit Poincare predictions for Euler characteristics 0..=M
        #[arg(long, value_parser = clap::value_parser!(i64).range(0..))]
        betti: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the elliptically fibered K3 example suite
    MotivicExamples {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Minimal decompositions into M24 irreducible dimensions
    Moonshine {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Exclude the one-dimensional representation
        #[arg(long)]
        no_ones: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(if e.is_falsification() { 1 } else { 2 });
        }
    }
}

fn run(command: Command) -> Result<i32, Error> {
    match command {
        Command::Refined {
            hmax,
            diamond,
            format,
        } => cmd_refined(hmax, diamond, format),
        Command::Kkv { hmax, format } => cmd_kkv(hmax, format),
        Command::KyCheck { hmax, nmax, format } => cmd_ky_check(hmax, nmax, format),
        Command::ConjectureC {
            h,
            kmax,
            window,
            format,
        } => cmd_conjecture_c(h, kmax, window, format),
        Command::Stu {
            d1,
            d2,
            betti,
            format,
        } => cmd_stu(d1, d2, betti, format),
        Command::MotivicExamples { format } => cmd_motivic(format),
        Command::Moonshine { n, no_ones, format } => cmd_moonshine(n, no_ones, format),
    }
}

#[derive(Serialize)]
struct RefinedJson<'a> {
    command: &'static str,
    hmax: usize,
    tables: Vec<RefinedJsonTable<'a>>,
}

#[derive(Serialize)]
struct RefinedJsonTable<'a> {
    h: usize,
    full: &'a k3refined::SpinTable,
    #[serde(skip_serializing_if = "Option::is_none")]
    diamond: Option<&'a k3refined::SpinTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    circle: Option<&'a k3refined::SpinTable>,
}

fn cmd_refined(hmax: usize, diamond: bool, format: Format) -> Result<i32, Error> {
    let triples = hodge::refined_tables(hmax)?;
    match format {
        Format::Text => {
            for t in &triples {
                print!("{}", render::spin_grid(&format!("R^{}", t.h), &t.full));
                if diamond {
                    print!(
                        "{}",
                        render::spin_grid(&format!("R^{},diamond", t.h), &t.diamond)
                    );
                    print!(
                        "{}",
                        render::spin_grid(&format!("R^{},circle", t.h), &t.circle)
                    );
                }
                println!();
            }
        }
        Format::Json => {
            let out = RefinedJson {
                command: "refined",
                hmax,
                tables: triples
                    .iter()
                    .map(|t| RefinedJsonTable {
                        h: t.h,
                        full: &t.full,
                        diamond: diamond.then_some(&t.diamond),
                        circle: diamond.then_some(&t.circle),
                    })
                    .collect(),
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
        Format::Tsv => {
            println!("table\th\tjl2\tjr2\tmult");
            for t in &triples {
                let mut rows = vec![("full", &t.full)];
                if diamond {
                    rows.push(("diamond", &t.diamond));
                    rows.push(("circle", &t.circle));
                }
                for (name, table) in rows {
                    for (&(jl2, jr2), c) in table.entries() {
                        println!("{name}\t{}\t{jl2}\t{jr2}\t{c}", t.h);
                    }
                }
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct KkvJson {
    command: &'static str,
    hmax: usize,
    tables: Vec<KkvJsonTable>,
}

#[derive(Serialize)]
struct KkvJsonTable {
    h: usize,
    genus: GenusTable,
}

fn cmd_kkv(hmax: usize, format: Format) -> Result<i32, Error> {
    let r = hodge::refined_r_tables(hmax)?;
    let tables = hodge::kkv_tables(&r)?;
    match format {
        Format::Text => print!("{}", render::genus_grid(&tables)),
        Format::Json => {
            let out = KkvJson {
                command: "kkv",
                hmax,
                tables: tables
                    .into_iter()
                    .enumerate()
                    .map(|(h, genus)| KkvJsonTable { h, genus })
                    .collect(),
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
        Format::Tsv => {
            println!("h\tg\tn");
            for (h, t) in tables.iter().enumerate() {
                for (&g, v) in t.entries() {
                    println!("{h}\t{g}\t{v}");
                }
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct KyJson {
    command: &'static str,
    #[serde(flatten)]
    report: pairs::KyReport,
    passed: bool,
}

fn cmd_ky_check(hmax: usize, nmax: i64, format: Format) -> Result<i32, Error> {
    let report = pairs::kawai_yoshioka_check(hmax, nmax)?;
    let passed = report.passed();
    match format {
        Format::Text => {
            if passed {
                println!(
                    "PASS: pairs series times (y + 1/y - u - 1/u) matches the Hodge product \
                     for h <= {hmax}, n <= {nmax}"
                );
            } else {
                println!("FAIL: {} mismatching coefficients", report.mismatches.len());
                for w in &report.mismatches {
                    println!(
                        "  h = {}, n = {}: pairs side {} vs hodge side {}",
                        w.h, w.n, w.pairs_side, w.hodge_side
                    );
                }
            }
        }
        Format::Json => {
            let out = KyJson {
                command: "ky-check",
                report,
                passed,
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
        Format::Tsv => {
            println!("h\tn\tpairs\thodge");
            for w in &report.mismatches {
                println!("{}\t{}\t{}\t{}", w.h, w.n, w.pairs_side, w.hodge_side);
            }
        }
    }
    Ok(if passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct ConjectureCJson {
    command: &'static str,
    h: i64,
    kmax: usize,
    window: i64,
    entries: pairs::PairsTable,
}

fn cmd_conjecture_c(h: i64, kmax: usize, window: i64, format: Format) -> Result<i32, Error> {
    let table = pairs::pairs_table(h, kmax, window)?;
    match format {
        Format::Text => {
            println!(
                "predicted pairs invariants for a primitive class of genus {h} \
                 (multiplicities 1..={kmax}, Euler characteristics up to {window})"
            );
            for (&(k, n), poly) in table.entries() {
                println!("  k={k} n={n}: {}", render::upoly(poly));
            }
        }
        Format::Json => {
            let out = ConjectureCJson {
                command: "conjecture-c",
                h,
                kmax,
                window,
                entries: table,
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
        Format::Tsv => {
            println!("k\tn\tpoly");
            for (&(k, n), poly) in table.entries() {
                println!("{k}\t{n}\t{}", render::upoly(poly));
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct StuJson {
    command: &'static str,
    d1: i64,
    d2: i64,
    profiles: Vec<nl::NlProfile>,
    invariants: k3refined::SpinTable,
    bracket: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    betti: Option<Vec<k3refined::ULaurent>>,
}

fn cmd_stu(d1: i64, d2: i64, betti: Option<i64>, format: Format) -> Result<i32, Error> {
    let profiles = nl::stu_profiles(d1, d2)?;
    let invariants = nl::stu_invariants(d1, d2)?;
    let bracket = render::bracket_sum(&invariants);
    let betti_tables = match betti {
        Some(m) => Some(nl::stu_betti_predictions(d1, d2, m)?),
        None => None,
    };
    match format {
        Format::Text => {
            println!("Noether-Lefschetz profiles for degrees ({d1}, {d2}):");
            for p in &profiles {
                println!(
                    "  h={} disc={} NL={} diamond={}",
                    p.h,
                    p.discriminant,
                    p.nl_number,
                    render::bracket_sum(&p.rnl_diamond)
                );
            }
            println!();
            println!("refined invariants N^({d1},{d2}): {bracket}");
            print!(
                "{}",
                render::spin_grid(&format!("N^({d1},{d2})"), &invariants)
            );
            if let Some(tables) = &betti_tables {
                println!();
                println!("Poincare predictions u^(-dim) [P_m(X,({d1},{d2}))]:");
                for (m, p) in tables.iter().enumerate() {
                    println!("  m={m}: {}", render::upoly(p));
                }
            }
        }
        Format::Json => {
            let out = StuJson {
                command: "stu",
                d1,
                d2,
                profiles,
                invariants,
                bracket,
                betti: betti_tables,
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
        Format::Tsv => {
            println!("jl2\tjr2\tmult");
            for (&(jl2, jr2), c) in invariants.entries() {
                println!("{jl2}\t{jr2}\t{c}");
            }
            if let Some(tables) = &betti_tables {
                println!();
                println!("m\tpoly");
                for (m, p) in tables.iter().enumerate() {
                    println!("{m}\t{}", render::upoly(p));
                }
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct MotivicJson {
    command: &'static str,
    #[serde(flatten)]
    report: motivic::EllipticK3Report,
    passed: bool,
}

fn cmd_motivic(format: Format) -> Result<i32, Error> {
    let report = motivic::elliptic_k3_suite();
    let passed = report.passed();
    match format {
        Format::Text => {
            println!("elliptically fibered K3, classes s, f, s + f, 2f:");
            println!("  log coefficient of v^(s+f) at q^0: {}", report.sf_q0);
            println!("  log coefficient of v^(s+f) at q^1: {}", report.sf_q1);
            println!("  log coefficient of v^f    at q^0: {}", report.f_q0);
            println!("  log coefficient of v^f    at q^1: {}", report.f_q1);
            println!(
                "  doubled fiber, Euler characteristic 0: {}",
                report.double_fiber
            );
            println!(
                "  strata route equals two-component closed form: {}",
                report.strata_route_matches
            );
            println!("{}", if passed { "PASS" } else { "FAIL" });
        }
        Format::Json => {
            let out = MotivicJson {
                command: "motivic-examples",
                report,
                passed,
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
        Format::Tsv => {
            println!("quantity\tvalue");
            println!("sf_q0\t{}", report.sf_q0);
            println!("sf_q1\t{}", report.sf_q1);
            println!("f_q0\t{}", report.f_q0);
            println!("f_q1\t{}", report.f_q1);
            println!("double_fiber\t{}", report.double_fiber);
            println!("passed\t{passed}");
        }
    }
    Ok(if passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct MoonshineJson {
    command: &'static str,
    #[serde(flatten)]
    decomposition: moonshine::M24Decomposition,
}

fn cmd_moonshine(n: u64, no_ones: bool, format: Format) -> Result<i32, Error> {
    let d = moonshine::decompose_m24(n, !no_ones);
    match format {
        Format::Text => {
            if d.solutions.is_empty() {
                if d.cap_reached {
                    println!(
                        "no decomposition of {n} within {} summands (search capped)",
                        d.depth_cap
                    );
                } else {
                    println!("no decomposition of {n}");
                }
            } else {
                for s in &d.solutions {
                    let parts: Vec<String> = s.iter().map(u64::to_string).collect();
                    println!("{}", parts.join("+"));
                }
            }
        }
        Format::Json => {
            let out = MoonshineJson {
                command: "moonshine",
                decomposition: d,
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
        Format::Tsv => {
            println!("summands");
            for s in &d.solutions {
                let parts: Vec<String> = s.iter().map(u64::to_string).collect();
                println!("{}", parts.join("+"));
            }
        }
    }
    Ok(0)
}
