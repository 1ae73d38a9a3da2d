//! `chamanara`: command-line front end for `chamanara-core`.
//!
//! Exit codes: 0 on success, 1 on any usage or input error, 2 when an
//! orbit search hit its cap and the finite-index check did not settle it.

mod cache;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use chamanara_core::degree2::{self, Census, OrbitKind, WnElement};
use chamanara_core::finite_index::decide_finite_index;
use chamanara_core::orbit::{self, OrbitReport};
use chamanara_core::topology::{self, D2Type, EndsReport};
use chamanara_core::{EpVector, FinAbGroup, Word};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "chamanara",
    version,
    about = "Finite abelian covers of the Chamanara surface"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply a word in P1, P2, -I, H to a vector.
    Act {
        #[command(flatten)]
        input: VectorArgs,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Orbit of the vector class under <P1, P2> and its Schreier coset graph.
    Orbit {
        #[command(flatten)]
        input: VectorArgs,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Directory for cached orbit reports.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Index of the Veech group of the cover in that of the base surface.
    Index {
        #[command(flatten)]
        input: VectorArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List W_n, or with --star the orbit census of W_n*.
    Wn {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        star: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Closed-form counts for W_n.
    Counts {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Ends of the cover.
    Topology {
        #[command(flatten)]
        input: VectorArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// A vector whose cover has as many ends as the group has elements.
    ConstructEnds {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// A degree-2 vector whose projective Veech group is free of rank n.
    RealizeRank {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct VectorArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    vector: String,
}

impl VectorArgs {
    fn load(&self) -> Result<EpVector, Failure> {
        let group = FinAbGroup::parse(&self.group)?;
        let h = EpVector::parse(&group, &self.vector)?;
        h.require_generating()?;
        Ok(h)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

enum Failure {
    Usage(String),
    Undecided(String),
}

impl From<chamanara_core::Error> for Failure {
    fn from(e: chamanara_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("reports serialize");
    s.push('\n');
    s
}

fn no_dot(format: Format, command: &str) -> Result<(), Failure> {
    if format == Format::Dot {
        return Err(Failure::Usage(format!(
            "--format dot is only available for orbit, not {command}"
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Undecided(msg)) => {
            eprintln!("undecided: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Act {
            input,
            word,
            format,
        } => {
            no_dot(format, "act")?;
            let h = input.load()?;
            let w = Word::parse(&word)?;
            let image = w.act(&h);
            Ok(match format {
                Format::Json => json(&serde_json::json!({
                    "vector": image.to_string(),
                    "matrix": w.matrix().to_string(),
                })),
                _ => format!("{image}\n"),
            })
        }
        Command::Orbit {
            input,
            cap,
            format,
            cache,
        } => run_orbit(&input, cap, format, cache),
        Command::Index { input, format } => {
            no_dot(format, "index")?;
            let h = input.load()?;
            let verdict = decide_finite_index(&h);
            let index = orbit::veech_index(&h)?;
            Ok(match format {
                Format::Json => json(&serde_json::json!({
                    "finite": index.is_some(),
                    "index": index,
                    "rank": index.map(|n| n + 1),
                    "window": verdict.checked_window,
                    "witness": verdict.witness,
                })),
                _ => match index {
                    Some(n) => format!("{n}\n"),
                    None => "infinite\n".to_string(),
                },
            })
        }
        Command::Wn { n, star, format } => {
            no_dot(format, "wn")?;
            if star {
                let census = degree2::orbit_census(n)?;
                Ok(match format {
                    Format::Json => json(&census),
                    _ => census_text(&census),
                })
            } else {
                let all = degree2::enumerate_wn(n)?;
                let names: Vec<String> = all.iter().map(WnElement::bitstring).collect();
                Ok(match format {
                    Format::Json => json(&serde_json::json!({ "n": n, "elements": names })),
                    _ => names.iter().fold(String::new(), |mut out, s| {
                        let _ = writeln!(out, "{s}");
                        out
                    }),
                })
            }
        }
        Command::Counts { n, format } => {
            no_dot(format, "counts")?;
            let c = degree2::count_closed_forms(n)?;
            Ok(match format {
                Format::Json => json(&c),
                _ => format!(
                    "wn_star {}\nfixed_p1 {}\nfixed_p2 {}\nfixed_both {}\nstriezel_wn {}\n",
                    c.wn_star, c.fixed_p1, c.fixed_p2, c.fixed_both, c.striezel_wn
                ),
            })
        }
        Command::Topology { input, format } => {
            no_dot(format, "topology")?;
            let h = input.load()?;
            let report = EndsReport::new(&h);
            Ok(match format {
                Format::Json => json(&report),
                _ => ends_text(&report),
            })
        }
        Command::ConstructEnds { group, format } => {
            no_dot(format, "construct-ends")?;
            let g = FinAbGroup::parse(&group)?;
            let h = topology::construct_max_ends(&g)?;
            Ok(match format {
                Format::Json => json(&serde_json::json!({
                    "group": g.to_string(),
                    "vector": h.to_string(),
                    "ends": topology::num_ends(&h),
                })),
                _ => format!("{h}\n"),
            })
        }
        Command::RealizeRank { n, format } => {
            no_dot(format, "realize-rank")?;
            let e = degree2::realize_rank_element(n)?;
            let h = degree2::expand(&e);
            Ok(match format {
                Format::Json => json(&serde_json::json!({
                    "rank": n,
                    "bits": e.bitstring(),
                    "vector": h.to_string(),
                    "index": n - 1,
                })),
                _ => format!("{h}\n"),
            })
        }
    }
}

fn run_orbit(
    input: &VectorArgs,
    cap: usize,
    format: Format,
    cache_dir: Option<PathBuf>,
) -> Result<String, Failure> {
    if cap == 0 {
        return Err(Failure::Usage("--cap must be at least 1".into()));
    }
    let h = input.load()?;
    let group = h.group().to_string();
    let key = cache_dir
        .as_ref()
        .map(|_| -> Result<String, Failure> {
            Ok(cache::key(&group, &h.canonical_class()?.to_string()))
        })
        .transpose()?;

    let cached = match (&cache_dir, &key) {
        (Some(dir), Some(key)) => cache::load(dir, key).filter(|r| r.order <= cap),
        _ => None,
    };
    let report = match cached {
        Some(report) => report,
        None => {
            let graph = orbit::orbit_bfs(&h, cap)?;
            let report = OrbitReport::from_graph(&group, &graph);
            if graph.complete {
                if let (Some(dir), Some(key)) = (&cache_dir, &key) {
                    if let Err(e) = cache::store(dir, key, &report) {
                        eprintln!("warning: could not write cache entry: {e}");
                    }
                }
            }
            report
        }
    };

    if !report.complete {
        let verdict = decide_finite_index(&h);
        if verdict.finite {
            return Err(Failure::Undecided(format!(
                "orbit exceeds {cap} classes but the index is finite; raise --cap"
            )));
        }
    }
    Ok(match format {
        Format::Json => json(&report),
        Format::Dot => report.to_dot(),
        Format::Text => orbit_text(&report),
    })
}

fn orbit_text(r: &OrbitReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group {}", r.group);
    if r.complete {
        let _ = writeln!(out, "index {}", r.order);
        let _ = writeln!(out, "rank {}", r.order + 1);
        let _ = writeln!(out, "type {}", r.graph_type.as_deref().unwrap_or("other"));
    } else {
        let _ = writeln!(out, "index infinite");
        let _ = writeln!(out, "explored {}", r.order);
    }
    let edge = |e: Option<usize>| e.map_or("?".to_string(), |t| t.to_string());
    for (i, v) in r.vertices.iter().enumerate() {
        let _ = writeln!(
            out,
            "{i} {v} P1:{} P2:{}",
            edge(r.p1_edges[i]),
            edge(r.p2_edges[i])
        );
    }
    out
}

fn census_text(c: &Census) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n {}", c.n);
    let _ = writeln!(out, "wn_star {}", c.wn_star);
    let _ = writeln!(out, "striezel {}", c.striezel);
    let _ = writeln!(out, "kranz {}", c.kranz);
    for o in &c.orbits {
        let kind = match o.kind {
            OrbitKind::Striezel => "striezel",
            OrbitKind::Kranz => "kranz",
        };
        let _ = writeln!(out, "{kind} {} {}", o.size, o.members.join(" "));
    }
    out
}

fn ends_text(r: &EndsReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ends {}", r.ends);
    let _ = writeln!(out, "N {}", r.n);
    let _ = writeln!(out, "alt_sum {}", r.alt_sum);
    let _ = writeln!(out, "right_acc {}", r.right_acc.join(" "));
    let _ = writeln!(out, "left_acc {}", r.left_acc.join(" "));
    let _ = writeln!(out, "g_prime {}", r.g_prime.join(" "));
    if let Some(t) = r.d2_type {
        let name = match t {
            D2Type::LochNess => "loch-ness",
            D2Type::JacobsLadder => "jacobs-ladder",
        };
        let _ = writeln!(out, "surface {name}");
    }
    out
}
