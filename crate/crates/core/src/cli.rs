//! Command-line front end. [`run`] is the whole program minus process exit,
//! so tests drive it in-process.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cache::{Cache, CacheEntry, CacheKey};
use crate::checkers::{verify, VERIFY_NAMES};
use crate::constructions::{
    k_family, perturb, random_maximal_cancellative, random_triangle_free_near_bipartite,
    turan_hypergraph, AddPolicy,
};
use crate::error::{Error, Result};
use crate::format::{read_hypergraph, to_text};
use crate::hypergraph::Hypergraph;
use crate::manifest::RunManifest;
use crate::search::{extremal_number, CandidateOrder, Predicate, SearchConfig};
use crate::stability::{
    bipartite_distance_analysis, epsilon_delta_scan, extract_partition_cancellative,
    extract_partition_generalized, extract_partition_kfree, scan_csv, ScanKind, StabilityReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "turanlab", version, about = "Exact Turán numbers, certificates and stability partitions")]
pub struct Cli {
    /// Result cache (default: $TURANLAB_CACHE, then ./turanlab-cache.jsonl).
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Write a run manifest to standard error.
    #[arg(long, global = true)]
    pub manifest: bool,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a hypergraph and print it.
    Construct {
        #[command(subcommand)]
        what: Construct,
        #[arg(long, global = true)]
        json: bool,
    },
    /// Check a predicate or certificate on a hypergraph file.
    Verify {
        /// One of: cancellative, k-free, links-triangle-free,
        /// neighborhoods-independent, fisher-ryan, link-count-identity,
        /// inequality2, theorem13, mantel-link-bound.
        name: String,
        file: PathBuf,
        #[arg(long)]
        ell: Option<usize>,
    },
    /// Exact extremal number by exhaustive search.
    Search(SearchArgs),
    /// Extract a stability partition from a hypergraph file.
    Stability {
        method: StabilityMethod,
        file: PathBuf,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Tabulate measured (ε, δ) over seeded instances.
    Scan(ScanArgs),
    /// Inspect the result cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// T_r(n, ℓ) on the balanced partition.
    Turan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        ell: usize,
    },
    /// Delete a fraction of the edges of a file's hypergraph, then add some.
    Perturb {
        file: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        fraction: f64,
        #[arg(long, default_value_t = 0)]
        add: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Keep::Any)]
        keep: Keep,
        #[arg(long)]
        ell: Option<usize>,
    },
    /// A random maximal cancellative 3-graph.
    RandomCancellative {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
    },
    /// A random triangle-free graph close to complete bipartite.
    TriangleFree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.5)]
        noise: f64,
        #[arg(long)]
        seed: u64,
    },
    /// Minimal members of the family of (ℓ+1)-set pair covers.
    KFamily {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        ell: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    Any,
    Cancellative,
    KFree,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: usize,
    /// cancellative, cancellative-general, k-free or triangle-free.
    #[arg(long)]
    pub predicate: String,
    #[arg(long)]
    pub ell: Option<usize>,
    /// Node budget.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = Ordering::Colex)]
    pub ordering: Ordering,
    #[arg(long, default_value_t = 3)]
    pub symmetry_depth: usize,
    /// Recompute even on a cache hit; the result must match the cache.
    #[arg(long)]
    pub force: bool,
    /// Neither read nor write the cache.
    #[arg(long)]
    pub no_cache: bool,
    /// Lift the default size guard.
    #[arg(long)]
    pub no_size_guard: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ordering {
    Colex,
    DegreeGreedy,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityMethod {
    Cancellative,
    Kfree,
    Generalized,
    Bipartite,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanFamily {
    Cancellative,
    Kfree,
    TriangleFree,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    pub family: ScanFamily,
    /// Vertex counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Deletion fractions, or target ε for triangle-free.
    #[arg(long, value_delimiter = ',', required = true)]
    pub grid: Vec<f64>,
    /// First seed.
    #[arg(long)]
    pub seed: u64,
    /// Consecutive seeds per grid point.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0.5)]
    pub noise: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum CacheAction {
    /// Every entry, newest per key.
    List,
    Lookup {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        predicate: String,
        #[arg(long)]
        ell: Option<usize>,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExhausted { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

/// Output of one command: standard output, diagnostics for standard error
/// and an exit code.
struct Outcome {
    stdout: String,
    notes: Vec<String>,
    code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome::with_code(stdout, EXIT_OK)
    }

    fn with_code(stdout: String, code: i32) -> Self {
        Outcome {
            stdout,
            notes: Vec::new(),
            code,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Parses `args` (program name first), runs the command and writes to the
/// given streams. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{text}");
            return EXIT_OK;
        }
    };
    let mut manifest = RunManifest::new(args.iter().map(|a| a.to_string_lossy().into_owned()).collect());
    let result = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(pool) => pool.install(|| dispatch(&cli, &mut manifest)),
        Err(e) => Err(Error::InvalidParameter(format!("thread pool: {e}"))),
    };
    let code = match result {
        Ok(out) => {
            for note in &out.notes {
                let _ = writeln!(stderr, "{note}");
            }
            let _ = stdout.write_all(out.stdout.as_bytes());
            manifest.add_output("stdout", out.stdout.as_bytes());
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    };
    if cli.manifest {
        if let Ok(text) = to_json(&manifest) {
            let _ = stderr.write_all(text.as_bytes());
        }
    }
    code
}

fn load(path: &Path, manifest: &mut RunManifest) -> Result<Hypergraph> {
    manifest.add_input(path)?;
    read_hypergraph(path)
}

fn dispatch(cli: &Cli, manifest: &mut RunManifest) -> Result<Outcome> {
    match &cli.command {
        Command::Construct { what, json } => construct(what, *json, manifest),
        Command::Verify { name, file, ell } => {
            if !VERIFY_NAMES.contains(&name.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "unknown certificate '{name}'; expected one of {}",
                    VERIFY_NAMES.join(", ")
                )));
            }
            let h = load(file, manifest)?;
            let report = verify(name, &h, *ell)?;
            let code = if report.holds { EXIT_OK } else { EXIT_VIOLATED };
            Ok(Outcome::with_code(to_json(&report)?, code))
        }
        Command::Search(args) => search(args, cli),
        Command::Stability { method, file, ell, r, json } => {
            let h = load(file, manifest)?;
            stability(*method, &h, *ell, *r, *json)
        }
        Command::Scan(args) => scan(args, manifest),
        Command::Cache { action } => {
            let cache = Cache::resolve(cli.cache.as_deref());
            match action {
                CacheAction::List => {
                    let mut newest = std::collections::BTreeMap::new();
                    for e in cache.entries()? {
                        newest.insert(e.key.clone(), e);
                    }
                    let rows: Vec<_> = newest.values().map(summary).collect();
                    Ok(Outcome::ok(to_json(&rows)?))
                }
                CacheAction::Lookup { n, r, predicate, ell } => {
                    let key = CacheKey {
                        predicate: predicate.clone(),
                        n: *n,
                        r: *r,
                        ell: *ell,
                    };
                    match cache.lookup(&key)? {
                        Some(e) => Ok(Outcome::ok(to_json(&e.to_record())?)),
                        None => Ok(Outcome::with_code("null\n".into(), EXIT_VIOLATED)),
                    }
                }
            }
        }
    }
}

fn summary(e: &CacheEntry) -> serde_json::Value {
    json!({
        "predicate": e.key.predicate,
        "n": e.key.n,
        "r": e.key.r,
        "ell": e.key.ell,
        "value": e.value,
        "extremal_classes": e.extremal_classes,
        "version": e.version,
        "timestamp": e.timestamp,
    })
}

fn construct(what: &Construct, json_out: bool, manifest: &mut RunManifest) -> Result<Outcome> {
    let (generator, params, h) = match what {
        Construct::Turan { n, r, ell } => (
            "turan",
            json!({ "n": n, "r": r, "ell": ell }),
            turan_hypergraph(*n, *r, *ell)?,
        ),
        Construct::Perturb { file, fraction, add, seed, keep, ell } => {
            let base = load(file, manifest)?;
            manifest.seeds.push(*seed);
            let policy = match keep {
                Keep::Any => AddPolicy::Any,
                Keep::Cancellative => AddPolicy::KeepCancellative,
                Keep::KFree => AddPolicy::KeepKFree(ell.ok_or_else(|| {
                    Error::InvalidParameter("--keep k-free needs --ell".into())
                })?),
            };
            (
                "perturb",
                json!({ "fraction": fraction, "add": add, "seed": seed }),
                perturb(&base, *fraction, *add, *seed, policy)?,
            )
        }
        Construct::RandomCancellative { n, seed } => {
            manifest.seeds.push(*seed);
            (
                "random-cancellative",
                json!({ "n": n, "seed": seed }),
                random_maximal_cancellative(*n, *seed)?,
            )
        }
        Construct::TriangleFree { n, epsilon, noise, seed } => {
            manifest.seeds.push(*seed);
            (
                "triangle-free",
                json!({ "n": n, "epsilon": epsilon, "noise": noise, "seed": seed }),
                random_triangle_free_near_bipartite(*n, *epsilon, *noise, *seed)?,
            )
        }
        Construct::KFamily { r, ell } => {
            let family = k_family(*r, *ell)?;
            let stdout = if json_out {
                to_json(&json!({
                    "generator": "k-family",
                    "name": family.name,
                    "parameters": { "r": r, "ell": ell },
                    "members": family.members,
                }))?
            } else {
                let mut s = format!("# {} ({} members)\n", family.name, family.members.len());
                for (i, m) in family.members.iter().enumerate() {
                    s.push_str(&format!("# member {}\n{}", i + 1, to_text(m)));
                }
                s
            };
            return Ok(Outcome::ok(stdout));
        }
    };
    let stdout = if json_out {
        to_json(&json!({
            "generator": generator,
            "parameters": params,
            "edge_count": h.len(),
            "hypergraph": h,
        }))?
    } else {
        to_text(&h)
    };
    Ok(Outcome::ok(stdout))
}

fn search(args: &SearchArgs, cli: &Cli) -> Result<Outcome> {
    let predicate = Predicate::parse(&args.predicate, args.ell)?;
    let mut config = SearchConfig {
        ordering: match args.ordering {
            Ordering::Colex => CandidateOrder::Colex,
            Ordering::DegreeGreedy => CandidateOrder::DegreeGreedy,
        },
        symmetry_depth: args.symmetry_depth,
        thread_count: cli.threads,
        size_guard: !args.no_size_guard,
        ..SearchConfig::default()
    };
    if let Some(b) = args.budget {
        config.node_budget = b;
    }
    let key = CacheKey {
        predicate: predicate.id(),
        n: args.n,
        r: args.r,
        ell: predicate.ell(),
    };
    let cache = (!args.no_cache).then(|| Cache::resolve(cli.cache.as_deref()));
    let cached = match &cache {
        Some(c) => c.lookup(&key)?,
        None => None,
    };
    if let (Some(hit), false) = (&cached, args.force) {
        let mut out = Outcome::ok(to_json(&hit.to_record())?);
        out.notes.push(format!("cache hit in {}", cache.as_ref().unwrap().path().display()));
        return Ok(out);
    }
    let record = extremal_number(args.n, args.r, &predicate, &config)?;
    if let Some(hit) = &cached {
        if (hit.value, hit.extremal_classes) != (record.value, record.extremal_classes) {
            let mut out = Outcome::with_code(String::new(), EXIT_VIOLATED);
            out.notes.push(format!(
                "error: recomputed value {} ({} classes) disagrees with cached value {} ({} classes) for {key:?}",
                record.value, record.extremal_classes, hit.value, hit.extremal_classes
            ));
            return Ok(out);
        }
    }
    if let Some(c) = &cache {
        c.store(&CacheEntry::from_record(&record))?;
    }
    Ok(Outcome::ok(to_json(&record)?))
}

fn stability_text(rep: &StabilityReport) -> String {
    let blocks: Vec<String> = rep
        .partition
        .blocks
        .iter()
        .map(|b| format!("{:?}", b.labels()))
        .collect();
    format!(
        "method: {}\nedges: {} of {}\nepsilon: {}\ndelta: {}\nbad_edges: {}\npartition: {}\n",
        rep.method,
        rep.edges,
        rep.target,
        rep.epsilon,
        rep.delta,
        rep.bad_edges,
        blocks.join(" | ")
    )
}

fn stability(
    method: StabilityMethod,
    h: &Hypergraph,
    ell: Option<usize>,
    r: Option<usize>,
    json_out: bool,
) -> Result<Outcome> {
    let need_ell = || ell.ok_or_else(|| Error::InvalidParameter("this method needs --ell".into()));
    let report = match method {
        StabilityMethod::Cancellative => extract_partition_cancellative(h)?,
        StabilityMethod::Kfree => extract_partition_kfree(h, need_ell()?)?,
        StabilityMethod::Generalized => {
            let r = r.ok_or_else(|| Error::InvalidParameter("generalized needs --r".into()))?;
            extract_partition_generalized(h, need_ell()?, r)?
        }
        StabilityMethod::Bipartite => {
            let rep = bipartite_distance_analysis(h)?;
            let code = if rep.all_hold { EXIT_OK } else { EXIT_VIOLATED };
            let stdout = if json_out {
                to_json(&rep)?
            } else {
                let mut s = format!(
                    "epsilon: {}\ndelta: {}\nbad_edges: {}\nmissing_pairs: {}\ncase: {}\n",
                    rep.epsilon, rep.delta, rep.bad_count, rep.missing_count, rep.case
                );
                for c in &rep.inequalities {
                    s.push_str(&format!(
                        "{} {}: {} vs {}\n",
                        if c.holds { "ok  " } else { "FAIL" },
                        c.name,
                        c.lhs,
                        c.rhs
                    ));
                }
                s
            };
            return Ok(Outcome::with_code(stdout, code));
        }
    };
    let chain_ok = report.witness_chain.as_ref().is_none_or(|c| {
        c.link_avoids_t_neighborhood && c.v2_v3_disjoint && c.v2_independent && c.v3_independent
    });
    let stdout = if json_out { to_json(&report)? } else { stability_text(&report) };
    Ok(Outcome::with_code(stdout, if chain_ok { EXIT_OK } else { EXIT_VIOLATED }))
}

fn scan(args: &ScanArgs, manifest: &mut RunManifest) -> Result<Outcome> {
    let kind = match args.family {
        ScanFamily::Cancellative => ScanKind::Cancellative { fractions: args.grid.clone() },
        ScanFamily::Kfree => ScanKind::KFree { fractions: args.grid.clone() },
        ScanFamily::TriangleFree => ScanKind::TriangleFree {
            epsilons: args.grid.clone(),
            noise: args.noise,
        },
    };
    let seeds: Vec<u64> = (0..args.seeds).map(|i| args.seed + i).collect();
    manifest.seeds.extend(&seeds);
    let rows = epsilon_delta_scan(&kind, &args.n, &seeds)?;
    let failed = rows.iter().any(|r| r.violation && r.enforced);
    let stdout = if args.json { to_json(&rows)? } else { scan_csv(&rows) };
    Ok(Outcome::with_code(stdout, if failed { EXIT_VIOLATED } else { EXIT_OK }))
}
