//! The `doob` command line.
//!
//! Exit codes: 0 pass, 1 fail, 2 inconclusive (node budget exhausted),
//! 64 usage error.

pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use doob_mds::appendix::verify_appendix;
use doob_mds::classification::classify;
use doob_mds::classification::nonexistence::Verdict;
use doob_mds::classification::theorem::{verify_main_theorem, TheoremOptions};
use doob_mds::cocliques::{
    classify_partition, coclique_classes, coclique_type, enumerate_cocliques, enumerate_partitions, format_set,
};
use doob_mds::codes::{check_injective_projections, check_projection_and_face_mds, Code};
use doob_mds::format::{load_code, save_code, to_code_file, to_text};
use doob_mds::graphs::{FactorGraph, FactorKind};
use doob_mds::search::{search_mds, SearchConfig, SearchStatus, SymmetryMode, DEFAULT_NODE_BUDGET, MAX_SEARCH_LENGTH};
use doob_mds::Error;

use report::{Report, Status};

pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "doob", version, about = "MDS codes in Doob graphs")]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor graph facts.
    Graph {
        #[command(subcommand)]
        command: GraphCommand,
    },
    /// Maximum independent sets and coclique partitions.
    Cocliques {
        #[arg(long, default_value = "shrikhande")]
        kind: FactorKind,
    },
    /// Representatives of every equivalence class of MDS codes.
    Classify {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Write representatives as `class_<i>.txt` into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive search for MDS codes.
    Search {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// none, stabilized or canonical.
        #[arg(long, default_value = "canonical")]
        symmetry: SymmetryMode,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Counts of code classes for all small parameters and nonexistence beyond.
    VerifyTheorem {
        #[arg(long, default_value_t = 10)]
        max_mn: usize,
        /// Skip the search cross-check.
        #[arg(long)]
        no_search: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check the embedded reference codes.
    VerifyAppendix,
    /// Check whether a code file holds an MDS code.
    Check { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum GraphCommand {
    Info {
        #[arg(long, default_value = "shrikhande")]
        kind: FactorKind,
    },
}

/// Errors that end a command: usage problems or failures.
enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Unsupported(msg) => Failure::Usage(msg),
            other => Failure::Failed(other.to_string()),
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            let _ = out.write_all(report.render(cli.json).as_bytes());
            report.status.exit_code()
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
            EXIT_USAGE
        }
        Err(Failure::Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn execute(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Graph {
            command: GraphCommand::Info { kind },
        } => Ok(graph_info(*kind)),
        Command::Cocliques { kind } => cocliques(*kind),
        Command::Classify { m, n, k, out } => classify_cmd(*m, *n, *k, out.as_deref()),
        Command::Search {
            m,
            n,
            k,
            budget,
            symmetry,
            jobs,
            out,
        } => {
            let cfg = SearchConfig::new(*m, *n, *k)
                .with_budget(*budget)
                .with_mode(*symmetry)
                .with_jobs(*jobs);
            search_cmd(&cfg, out.as_deref())
        }
        Command::VerifyTheorem {
            max_mn,
            no_search,
            budget,
            jobs,
        } => theorem_cmd(&TheoremOptions {
            max_mn: *max_mn,
            search: !no_search,
            node_budget: *budget,
            jobs: *jobs,
            ..TheoremOptions::default()
        }),
        Command::VerifyAppendix => appendix_cmd(),
        Command::Check { file } => check_cmd(file),
    }
}

fn graph_info(kind: FactorKind) -> Report {
    let g = FactorGraph::build(kind);
    let srg = g.srg_params();
    let group = g.automorphism_group().len();
    let mut text = format!(
        "{}: {} vertices, {} edges, degree {}, diameter {}\n",
        kind.name(),
        g.vertex_count(),
        g.edge_count(),
        g.degree(0),
        g.diameter()
    );
    match srg {
        Some(p) => writeln!(text, "strongly regular ({},{},{},{})", p.v, p.k, p.lambda, p.mu).unwrap(),
        None => writeln!(text, "not strongly regular").unwrap(),
    }
    writeln!(text, "automorphism group order {group}").unwrap();
    let details = json!({
        "kind": kind,
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "degree": g.degree(0),
        "diameter": g.diameter(),
        "srg": srg,
        "automorphism_group_order": group,
    });
    Report::new("graph info", Status::Pass, details, text)
}

fn cocliques(kind: FactorKind) -> Result<Report, Failure> {
    if kind == FactorKind::K4 {
        return Err(Failure::Usage("cocliques are listed for shrikhande and k4-squared".into()));
    }
    let g = FactorGraph::build(kind);
    let all = enumerate_cocliques(&g);
    let classes = coclique_classes(&g);
    let mut text = format!("{} cocliques in {}:\n", all.len(), kind.name());
    for &c in &all {
        writeln!(text, "  {}", format_set(c)).unwrap();
    }
    writeln!(text, "{} classes under automorphisms", classes.len()).unwrap();
    let mut details = json!({
        "kind": kind,
        "count": all.len(),
        "cocliques": all.iter().map(|&c| format_set(c)).collect::<Vec<_>>(),
        "classes": classes.iter().map(|&c| format_set(c)).collect::<Vec<_>>(),
    });
    if kind == FactorKind::Shrikhande {
        let types = all
            .iter()
            .map(|&c| coclique_type(c))
            .collect::<doob_mds::Result<Vec<_>>>()?;
        let partitions = enumerate_partitions();
        let mut per_class = std::collections::BTreeMap::new();
        for p in &partitions {
            *per_class.entry(classify_partition(p)?.to_string()).or_insert(0usize) += 1;
        }
        writeln!(
            text,
            "{} linear, {} semilinear",
            types.iter().filter(|t| **t == doob_mds::cocliques::CocliqueType::Linear).count(),
            types.iter().filter(|t| **t == doob_mds::cocliques::CocliqueType::Semilinear).count()
        )
        .unwrap();
        writeln!(text, "{} partitions into cocliques, {} classes", partitions.len(), per_class.len()).unwrap();
        for (cl, count) in &per_class {
            writeln!(text, "  class {cl}: {count}").unwrap();
        }
        details["types"] = json!(types);
        details["partitions"] = json!(partitions.len());
        details["partition_classes"] = json!(per_class);
    }
    Ok(Report::new("cocliques", Status::Pass, details, text))
}

fn write_codes(dir: &Path, codes: &[Code]) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Failed(format!("{}: {e}", dir.display())))?;
    for (i, c) in codes.iter().enumerate() {
        save_code(c, dir.join(format!("class_{i}.txt")))?;
    }
    Ok(())
}

fn codes_text(codes: &[Code]) -> String {
    let mut text = String::new();
    for (i, c) in codes.iter().enumerate() {
        writeln!(text, "# class {i}").unwrap();
        text.push_str(&to_text(c));
    }
    text
}

fn classify_cmd(m: usize, n: usize, k: usize, out: Option<&Path>) -> Result<Report, Failure> {
    let r = classify(m, n, k)?;
    if let Some(dir) = out {
        write_codes(dir, &r.representatives)?;
    }
    let mut text = format!("D({m},{n}), k = {k}, d = {}: {} classes\n", r.d, r.class_count);
    text.push_str(&codes_text(&r.representatives));
    let details = json!({
        "m": m, "n": n, "k": k, "d": r.d,
        "class_count": r.class_count,
        "representatives": r.representatives.iter().map(to_code_file).collect::<Vec<_>>(),
    });
    Ok(Report::new("classify", Status::Pass, details, text))
}

fn search_cmd(cfg: &SearchConfig, out: Option<&Path>) -> Result<Report, Failure> {
    let len = 2 * cfg.m + cfg.n;
    if len > MAX_SEARCH_LENGTH {
        return Err(Failure::Usage(format!("search supports 2m+n <= {MAX_SEARCH_LENGTH}, got {len}")));
    }
    if cfg.k > len || cfg.distance() < 3 {
        return Err(Failure::Usage(format!("search needs distance 2m+n-k+1 >= 3, got k = {}", cfg.k)));
    }
    let o = search_mds(cfg)?;
    if let Some(dir) = out {
        write_codes(dir, &o.classes)?;
    }
    let status = match o.status {
        SearchStatus::Complete => Status::Pass,
        SearchStatus::BudgetExceeded => Status::Inconclusive,
    };
    let mut text = format!(
        "D({},{}), k = {}, d = {}, {}: {:?}, {} nodes, {} completions, {} classes\n",
        cfg.m,
        cfg.n,
        cfg.k,
        cfg.distance(),
        cfg.symmetry_mode,
        o.status,
        o.nodes_visited,
        o.solutions_found,
        o.classes.len()
    );
    text.push_str(&codes_text(&o.classes));
    let details = json!({
        "m": cfg.m, "n": cfg.n, "k": cfg.k, "d": cfg.distance(),
        "symmetry_mode": cfg.symmetry_mode,
        "node_budget": cfg.node_budget,
        "status": o.status,
        "nodes_visited": o.nodes_visited,
        "solutions_found": o.solutions_found,
        "class_count": o.classes.len(),
        "classes": o.classes.iter().map(to_code_file).collect::<Vec<_>>(),
    });
    Ok(Report::new("search", status, details, text))
}

fn theorem_cmd(opts: &TheoremOptions) -> Result<Report, Failure> {
    let r = verify_main_theorem(opts)?;
    let mut text = String::new();
    writeln!(text, "k = 1 count formula up to m = {}: {}", r.s_m_checked_up_to, pf(r.s_m_ok)).unwrap();
    for e in &r.table {
        let search = e.search.map_or("-".to_string(), |s| s.to_string());
        writeln!(
            text,
            "D({},{}) d = {}: expected {}, constructed {}, searched {} [{}]",
            e.m,
            e.n,
            e.d,
            e.expected,
            e.constructive,
            search,
            pf(e.pass)
        )
        .unwrap();
    }
    writeln!(
        text,
        "distance 5 at length 6: {} edges needed, {} available [{:?}]",
        r.n6d5.required_edges, r.n6d5.available_edges, r.n6d5.verdict
    )
    .unwrap();
    writeln!(text, "(3+0,4^3,4): {:?} after {} nodes", r.check_304.verdict, r.check_304.nodes_visited).unwrap();
    let failed = r.chains.iter().filter(|c| !c.pass).count();
    writeln!(text, "length 7..{}: {} reductions, {} failed", opts.max_mn, r.chains.len(), failed).unwrap();
    let status = if r.pass {
        Status::Pass
    } else if r.inconclusive
        || r.n6d5.verdict == Verdict::Inconclusive
        || r.check_304.verdict == Verdict::Inconclusive
    {
        Status::Inconclusive
    } else {
        Status::Fail
    };
    Ok(Report::new("verify-theorem", status, &r, text))
}

fn pf(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn appendix_cmd() -> Result<Report, Failure> {
    let r = verify_appendix()?;
    let mut text = String::new();
    for t in &r.tables {
        writeln!(
            text,
            "{}: {} words, distance {}, class {} [{}]  {}",
            t.id,
            t.words,
            t.min_distance.map_or("-".to_string(), |d| d.to_string()),
            t.class_index.map_or("-".to_string(), |i| i.to_string()),
            pf(t.pass),
            t.description
        )
        .unwrap();
    }
    for p in &r.pairs {
        writeln!(text, "{} vs {}: inequivalent [{}]", p.left, p.right, pf(p.pass)).unwrap();
    }
    Ok(Report::new("verify-appendix", Status::from_pass(r.pass), &r, text))
}

fn check_cmd(file: &Path) -> Result<Report, Failure> {
    let c = load_code(file)?;
    let p = c.params();
    let min_distance = c.min_distance().ok();
    let is_mds = c.is_mds();
    let (injective, faces) = if is_mds {
        (Some(check_injective_projections(&c)), Some(check_projection_and_face_mds(&c)))
    } else {
        (None, None)
    };
    let text = format!(
        "{}: {} words in {}, declared k = {}, minimum distance {}, MDS distance {}: {}\n",
        file.display(),
        c.len(),
        p,
        c.declared_k(),
        min_distance.map_or("-".to_string(), |d| d.to_string()),
        c.mds_distance(),
        if is_mds { "MDS" } else { "not MDS" }
    );
    let details = json!({
        "path": file.display().to_string(),
        "m": p.m, "n": p.n, "k": c.declared_k(),
        "words": c.len(),
        "min_distance": min_distance,
        "mds_distance": c.mds_distance(),
        "is_mds": is_mds,
        "injective_projections": injective,
        "projections_and_faces_mds": faces,
    });
    let pass = is_mds && injective != Some(false) && faces != Some(false);
    Ok(Report::new("check", Status::from_pass(pass), details, text))
}
