use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;

use rtlab::analysis::{density_report, max_clique, p_independence, CliqueCertificate, LabeledGraph, EXHAUSTIVE_VERTEX_LIMIT};
use rtlab::cbe::{build_cbe, CbeParams, SamplingMode};
use rtlab::io::{read_edge_list, write_edge_list, write_hypergraph, write_stats_csv, StatsRow};
use rtlab::mbe::{build_mbe, MbeParams};

use crate::{Outcome, Usage};

/// Analysis knobs shared by every command that reports graph statistics.
#[derive(Args, Clone)]
pub struct AnalysisOpts {
    /// `p` for the `K_p`-free independence bounds; defaults per command.
    #[arg(long)]
    pub alpha_p: Option<usize>,
    /// Largest graph for the exact `α_p` search.
    #[arg(long, default_value_t = 40)]
    pub exact_limit: usize,
}

#[derive(Args)]
pub struct GenCbe {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub ell: u32,
    /// Complex dimension.
    #[arg(long)]
    pub k: usize,
    /// Vertices per class.
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = CbeParams::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, default_value_t = CbeParams::DEFAULT_BIG_K)]
    pub big_k: f64,
    #[arg(long, value_enum, default_value_t = Mode::Sampled)]
    pub mode: Mode,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// File stem for the outputs.
    #[arg(long, default_value = "cbe")]
    pub name: String,
    #[command(flatten)]
    pub analysis: AnalysisOpts,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Mode {
    Strict,
    Sampled,
    Orbits,
}

impl From<Mode> for SamplingMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Strict => SamplingMode::Strict,
            Mode::Sampled => SamplingMode::Sampled,
            Mode::Orbits => SamplingMode::Orbits,
        }
    }
}

#[derive(Args)]
pub struct GenMbe {
    #[arg(long)]
    pub ell: u32,
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub q: u32,
    /// Each coordinate lives on the real sphere `S^k`.
    #[arg(long)]
    pub k: usize,
    /// Points per coordinate sphere.
    #[arg(long)]
    pub m: usize,
    /// Blow-up multiplicity, a perfect `ell`-th power.
    #[arg(long, default_value_t = 1)]
    pub t: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = MbeParams::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, default_value_t = MbeParams::DEFAULT_RETENTION)]
    pub retention: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, default_value = "mbe")]
    pub name: String,
    #[command(flatten)]
    pub analysis: AnalysisOpts,
}

#[derive(Args)]
pub struct Analyze {
    /// Edge-list file; `-` reads stdin.
    pub edge_list: PathBuf,
    /// Stop the clique search once a clique larger than this is found.
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long)]
    pub graph_id: Option<String>,
    #[command(flatten)]
    pub analysis: AnalysisOpts,
}

#[derive(Args)]
pub struct Sweep {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// `key=v1,v2,...`; repeat for each swept parameter.
    #[arg(long = "set", value_name = "KEY=VALUES")]
    pub sets: Vec<String>,
    /// Comma-separated seeds.
    #[arg(long, value_delimiter = ',', required = true)]
    pub seeds: Vec<u64>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub analysis: AnalysisOpts,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Kind {
    Cbe,
    Mbe,
}

struct Analysis {
    row: StatsRow,
    clique: CliqueCertificate,
    alpha: rtlab::analysis::PIndependence,
}

fn analyse(id: String, g: &LabeledGraph, alpha_p: usize, exact_limit: usize, cutoff: Option<usize>) -> Result<Analysis, Usage> {
    let cutoff = cutoff.or_else(|| (g.len() > EXHAUSTIVE_VERTEX_LIMIT).then_some(g.len()));
    let clique = max_clique(g, cutoff)?;
    let alpha = p_independence(g, alpha_p, exact_limit)?;
    let n = g.len();
    let pairs = n * n.saturating_sub(1) / 2;
    let row = StatsRow {
        graph_id: id,
        n,
        density: if pairs == 0 { 0.0 } else { g.edge_count() as f64 / pairs as f64 },
        omega: clique.size,
        omega_exhaustive: clique.exhaustive,
        alpha_p_lb: alpha.lower,
        alpha_p_ub: alpha.upper,
    };
    Ok(Analysis { row, clique, alpha })
}

fn create(dir: &Path, file: String) -> Result<BufWriter<File>, Usage> {
    fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(file))?))
}

fn write_summary(dir: &Path, name: &str, summary: &serde_json::Value) -> Result<(), Usage> {
    let text = serde_json::to_string_pretty(summary)?;
    let mut f = create(dir, format!("{name}.summary.json"))?;
    writeln!(f, "{text}")?;
    f.flush()?;
    println!("{text}");
    Ok(())
}

fn cbe_params(a: &GenCbe) -> Result<CbeParams, Usage> {
    Ok(CbeParams::new(a.p, a.ell, a.k, a.n, a.seed)?
        .with_epsilon(a.epsilon)?
        .with_big_k(a.big_k)?
        .with_mode(a.mode.into()))
}

fn mbe_params(a: &GenMbe) -> Result<MbeParams, Usage> {
    Ok(MbeParams::new(a.ell, a.p, a.q, a.k, a.m, a.seed)?
        .with_epsilon(a.epsilon)?
        .with_retention(a.retention)?
        .with_blowup(a.t)?)
}

#[derive(Serialize)]
struct RunConfig<'a, P: Serialize> {
    command: &'a str,
    params: &'a P,
    alpha_p: usize,
    exact_limit: usize,
}

pub fn gen_cbe(a: GenCbe) -> Result<Outcome, Usage> {
    let params = cbe_params(&a)?;
    let alpha_p = a.analysis.alpha_p.unwrap_or(params.p as usize);
    let config = RunConfig { command: "gen-cbe", params: &params, alpha_p, exact_limit: a.analysis.exact_limit };
    let g = build_cbe(&params)?;
    let bound = params.clique_bound();
    let id = format!("cbe-p{}-l{}-k{}-n{}-s{}", params.p, params.ell, params.k, params.n, params.seed);
    let an = analyse(id, &g.graph, alpha_p, a.analysis.exact_limit, None)?;

    let mut f = create(&a.out_dir, format!("{}.edges", a.name))?;
    write_edge_list(&mut f, &g.graph, &config)?;
    f.flush()?;
    let mut f = create(&a.out_dir, format!("{}.stats.csv", a.name))?;
    write_stats_csv(&mut f, std::slice::from_ref(&an.row))?;
    f.flush()?;

    let pass = bound.is_none_or(|b| an.clique.size <= b);
    let summary = json!({
        "config": config,
        "stats": g.stats(),
        "density": density_report(&g.graph),
        "omega": an.clique.size,
        "clique": an.clique,
        "clique_bound": bound,
        "alpha_p": { "p": alpha_p, "lower": an.alpha.lower, "upper": an.alpha.upper, "exact": an.alpha.exact },
        "pass": pass,
    });
    write_summary(&a.out_dir, &a.name, &summary)?;
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

pub fn gen_mbe(a: GenMbe) -> Result<Outcome, Usage> {
    let params = mbe_params(&a)?;
    let alpha_p = a.analysis.alpha_p.unwrap_or(params.r());
    let config = RunConfig { command: "gen-mbe", params: &params, alpha_p, exact_limit: a.analysis.exact_limit };
    let g = build_mbe(&params)?;
    let bound = params.clique_bound();
    let id = format!(
        "mbe-l{}-p{}-q{}-k{}-m{}-t{}-s{}",
        params.ell, params.p, params.q, params.k, params.m, params.t, params.seed
    );
    let an = analyse(id, &g.graph, alpha_p, a.analysis.exact_limit, None)?;

    let mut f = create(&a.out_dir, format!("{}.edges", a.name))?;
    write_edge_list(&mut f, &g.graph, &config)?;
    f.flush()?;
    let mut f = create(&a.out_dir, format!("{}.hyper", a.name))?;
    write_hypergraph(&mut f, &g.borsuk.hypergraph)?;
    f.flush()?;
    let mut f = create(&a.out_dir, format!("{}.stats.csv", a.name))?;
    write_stats_csv(&mut f, std::slice::from_ref(&an.row))?;
    f.flush()?;

    let pass = an.clique.size <= bound;
    let summary = json!({
        "config": config,
        "stats": g.stats(),
        "sparsify": g.sparsify,
        "related": g.related.iter().map(|(&(i, j), r)| json!({ "classes": [i + 1, j + 1], "pairs": r })).collect::<Vec<_>>(),
        "omega": an.clique.size,
        "clique": an.clique,
        "clique_audit": g.audit_clique(&an.clique.witness),
        "clique_bound": bound,
        "alpha_p": { "p": alpha_p, "lower": an.alpha.lower, "upper": an.alpha.upper, "exact": an.alpha.exact },
        "pass": pass,
    });
    write_summary(&a.out_dir, &a.name, &summary)?;
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

pub fn analyze(a: Analyze) -> Result<Outcome, Usage> {
    let el = if a.edge_list.as_os_str() == "-" {
        read_edge_list(io::stdin().lock())?
    } else {
        let f = File::open(&a.edge_list).map_err(|e| Usage(format!("{}: {e}", a.edge_list.display())))?;
        read_edge_list(BufReader::new(f))?
    };
    let id = a.graph_id.clone().unwrap_or_else(|| {
        a.edge_list.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    });
    let an = analyse(id, &el.graph, a.analysis.alpha_p.unwrap_or(2), a.analysis.exact_limit, a.cutoff)?;
    write_stats_csv(io::stdout().lock(), &[an.row])?;
    Ok(Outcome::Pass)
}

const CBE_KEYS: &[&str] = &["p", "ell", "k", "n", "epsilon", "big-k", "mode"];
const MBE_KEYS: &[&str] = &["ell", "p", "q", "k", "m", "t", "epsilon", "retention"];

fn parse_sets(sets: &[String], keys: &[&str]) -> Result<BTreeMap<String, Vec<String>>, Usage> {
    let mut out = BTreeMap::new();
    for s in sets {
        let (k, vs) = s.split_once('=').ok_or_else(|| Usage(format!("--set expects key=values, got {s:?}")))?;
        let k = k.trim().replace('_', "-");
        if !keys.contains(&k.as_str()) {
            return Err(Usage(format!("unknown sweep key {k:?}; expected one of {keys:?}")));
        }
        let vs: Vec<String> = vs.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect();
        if vs.is_empty() {
            return Err(Usage(format!("no values for {k}")));
        }
        out.insert(k, vs);
    }
    Ok(out)
}

fn cartesian(grid: &BTreeMap<String, Vec<String>>) -> Vec<BTreeMap<String, String>> {
    let mut cells = vec![BTreeMap::new()];
    for (k, vs) in grid {
        cells = cells
            .into_iter()
            .flat_map(|c| {
                vs.iter().map(move |v| {
                    let mut c = c.clone();
                    c.insert(k.clone(), v.clone());
                    c
                })
            })
            .collect();
    }
    cells
}

fn get<T: std::str::FromStr>(cell: &BTreeMap<String, String>, key: &str, default: Option<T>) -> Result<T, Usage> {
    match cell.get(key) {
        Some(v) => v.parse().map_err(|_| Usage(format!("bad value for {key}: {v:?}"))),
        None => default.ok_or_else(|| Usage(format!("sweep needs --set {key}=..."))),
    }
}

pub fn sweep(a: Sweep) -> Result<Outcome, Usage> {
    let keys = match a.kind {
        Kind::Cbe => CBE_KEYS,
        Kind::Mbe => MBE_KEYS,
    };
    let grid = parse_sets(&a.sets, keys)?;
    let mut rows = Vec::new();
    for cell in cartesian(&grid) {
        for &seed in &a.seeds {
            let label: Vec<String> = cell.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let id = format!("{} {} seed={seed}", kind_name(a.kind), label.join(" "));
            let (g, default_p) = match a.kind {
                Kind::Cbe => {
                    let mode: SamplingMode = get(&cell, "mode", Some(SamplingMode::Sampled))?;
                    let params = CbeParams::new(get(&cell, "p", None)?, get(&cell, "ell", None)?, get(&cell, "k", None)?, get(&cell, "n", None)?, seed)?
                        .with_epsilon(get(&cell, "epsilon", Some(CbeParams::DEFAULT_EPSILON))?)?
                        .with_big_k(get(&cell, "big-k", Some(CbeParams::DEFAULT_BIG_K))?)?
                        .with_mode(mode);
                    (build_cbe(&params)?.graph, params.p as usize)
                }
                Kind::Mbe => {
                    let params = MbeParams::new(
                        get(&cell, "ell", None)?,
                        get(&cell, "p", None)?,
                        get(&cell, "q", None)?,
                        get(&cell, "k", None)?,
                        get(&cell, "m", None)?,
                        seed,
                    )?
                    .with_epsilon(get(&cell, "epsilon", Some(MbeParams::DEFAULT_EPSILON))?)?
                    .with_retention(get(&cell, "retention", Some(MbeParams::DEFAULT_RETENTION))?)?
                    .with_blowup(get(&cell, "t", Some(1))?)?;
                    (build_mbe(&params)?.graph, params.r())
                }
            };
            let alpha_p = a.analysis.alpha_p.unwrap_or(default_p);
            rows.push(analyse(id, &g, alpha_p, a.analysis.exact_limit, None)?.row);
        }
    }
    match &a.out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            write_stats_csv(&mut f, &rows)?;
            f.flush()?;
        }
        None => write_stats_csv(io::stdout().lock(), &rows)?,
    }
    Ok(Outcome::Pass)
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Cbe => "cbe",
        Kind::Mbe => "mbe",
    }
}
