//! Command-line front end. Data goes to standard output or files; run reports
//! and diagnostics go to standard error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::detect::{self, DetectConfig, MoveRule};
use crate::error::Result;
use crate::evaluation::nmi_between;
use crate::graph::{load_edge_list, EdgeListOptions, Graph, IndexBase};
use crate::metrics::{self, MergeMetric};
use crate::null_model::{self, ErParams, SampleLevel};
use crate::triangles::count_triangles;
use crate::truth::{read_partition, write_partition, GroundTruth, PartitionFormat, TruthFormat};

#[derive(Debug, Parser)]
#[command(
    name = "cbcd",
    version,
    about = "Correlation-based community detection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect communities. Writes the partition; prints a key=value run
    /// report to stderr.
    Detect(DetectArgs),
    /// Per-node and per-community scores of a partition as TSV.
    ///
    /// Node rows: node, community, ps, phi, nb (ω/d), com (ω/ε). Then, after
    /// a blank line, community rows: community, size, F, Phi. Then the
    /// summary rows `Gamma` and `Q`. Undefined values print as `NA`.
    Metrics(MetricsArgs),
    /// NMI of two partition files, printed with 6 decimals.
    Nmi(NmiArgs),
    /// Per-node triangle counts as `node<TAB>count`; the total goes to stderr.
    Triangles(TrianglesArgs),
    /// Monte-Carlo PS (or φ) samples on Erdős–Rényi graphs.
    ///
    /// Writes `replication,value` rows to --out and `bin_lo,bin_hi,count`
    /// rows (61 equal-width bins) to `<out>.hist.csv`.
    ErSim(ErSimArgs),
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Whitespace-separated edge list; `#` starts a comment line.
    #[arg(long)]
    pub input: PathBuf,
    /// Node ids start at 1 (id 0 is rejected).
    #[arg(long)]
    pub one_indexed: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    Phi,
    Cos,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MoveRuleArg {
    /// Move only when Γ rises by more than d/N².
    Conservative,
    /// Move on any strictly positive Γ gain.
    Exact,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    /// One community per line, space-separated node ids.
    CommunityPerLine,
    /// `node<TAB>community` per line.
    NodeTab,
}

impl From<FormatArg> for PartitionFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::CommunityPerLine => PartitionFormat::CommunityPerLine,
            FormatArg::NodeTab => PartitionFormat::NodeTab,
        }
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Merge threshold [default: -2.8 below 4000 nodes, else -0.43].
    #[arg(long, allow_hyphen_values = true)]
    pub th: Option<f64>,
    #[arg(long, default_value_t = detect::DEFAULT_MAX_IT)]
    pub max_it: usize,
    #[arg(long, value_enum, default_value = "phi")]
    pub merge_metric: MetricArg,
    /// Acceptance rule for refinement moves.
    #[arg(long, value_enum, default_value = "conservative")]
    pub move_rule: MoveRuleArg,
    /// Triangle-counting degree threshold [default: ceil(sqrt(2m))].
    #[arg(long)]
    pub beta: Option<usize>,
    /// Partition file; standard output if omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "community-per-line")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Partition covering every node of the graph.
    #[arg(long)]
    pub partition: PathBuf,
    #[arg(long, value_enum, default_value = "community-per-line")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct NmiArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, value_enum, default_value = "community-per-line")]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct TrianglesArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    #[arg(long)]
    pub beta: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LevelArg {
    Node,
    Community,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SampleMetricArg {
    Ps,
    Phi,
}

#[derive(Debug, Args)]
pub struct ErSimArgs {
    #[arg(long)]
    pub n: usize,
    /// Expected degree; p = lambda / (n - 1).
    #[arg(long)]
    pub lambda: f64,
    /// The fixed set is nodes 0..community-size; node 0 is the focal node.
    #[arg(long)]
    pub community_size: usize,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, value_enum, default_value = "node")]
    pub level: LevelArg,
    /// φ is node-level only; degenerate draws are dropped and counted.
    #[arg(long, value_enum, default_value = "ps")]
    pub metric: SampleMetricArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` and runs the chosen subcommand; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Detect(a) => cmd_detect(&a),
        Command::Metrics(a) => cmd_metrics(&a),
        Command::Nmi(a) => cmd_nmi(&a),
        Command::Triangles(a) => cmd_triangles(&a),
        Command::ErSim(a) => cmd_er_sim(&a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

fn load_graph(input: &GraphInput) -> Result<Graph> {
    let opts = EdgeListOptions {
        index_base: if input.one_indexed {
            IndexBase::One
        } else {
            IndexBase::Zero
        },
        ..Default::default()
    };
    Ok(load_edge_list(open(&input.input)?, &opts)?.0)
}

fn cmd_detect(args: &DetectArgs) -> Result<()> {
    let start = Instant::now();
    let g = load_graph(&args.graph)?;
    let mut cfg = DetectConfig::for_graph(&g);
    if let Some(th) = args.th {
        cfg.th = th;
    }
    cfg.max_it = args.max_it;
    cfg.merge_metric = match args.merge_metric {
        MetricArg::Phi => MergeMetric::Phi,
        MetricArg::Cos => MergeMetric::Cosine,
    };
    cfg.beta = args.beta;
    cfg.move_rule = match args.move_rule {
        MoveRuleArg::Conservative => MoveRule::Conservative,
        MoveRuleArg::Exact => MoveRule::Exact,
    };
    let p = detect::detect(&g, &cfg)?;
    let format = args.format.into();
    match &args.output {
        Some(path) => {
            let mut out = create(path)?;
            write_partition(&g, &p, format, &mut out)?;
            out.flush()?;
        }
        None => write_partition(&g, &p, format, io::stdout().lock())?,
    }
    let gamma = metrics::partition_gamma(&g, &p)?;
    let q = metrics::modularity(&g, &p)?;
    eprintln!(
        "input={} th={} max_it={} merge_metric={} move_rule={} beta={} n={} m={} communities={} gamma={:.6} modularity={:.6} wall_ms={}",
        args.graph.input.display(),
        cfg.th,
        cfg.max_it,
        match cfg.merge_metric {
            MergeMetric::Phi => "phi",
            MergeMetric::Cosine => "cos",
        },
        match cfg.move_rule {
            MoveRule::Conservative => "conservative",
            MoveRule::Exact => "exact",
        },
        cfg.beta.map_or("auto".to_string(), |b| b.to_string()),
        g.node_count(),
        g.edge_count(),
        p.community_count(),
        gamma,
        q,
        start.elapsed().as_millis()
    );
    Ok(())
}

fn fmt_value(v: Result<f64>) -> String {
    match v {
        Ok(x) => format!("{x:.6}"),
        Err(_) => "NA".to_string(),
    }
}

fn cmd_metrics(args: &MetricsArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let p = read_partition(open(&args.partition)?, args.format.into(), &g)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    writeln!(out, "node\tcommunity\tps\tphi\tnb\tcom")?;
    for u in g.nodes() {
        let c = p.community_of(u).expect("partition covers the graph");
        let ct = metrics::contingency(&g, &p, u)?;
        let conf = metrics::confidence_scores(&ct);
        let (nb, com) = match conf {
            Ok((a, b)) => (format!("{a:.6}"), format!("{b:.6}")),
            Err(_) => ("NA".to_string(), "NA".to_string()),
        };
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            g.original_id(u),
            c,
            fmt_value(metrics::ps(&ct)),
            fmt_value(metrics::phi(&ct)),
            nb,
            com
        )?;
    }
    writeln!(out)?;
    writeln!(out, "community\tsize\tF\tPhi")?;
    for c in p.community_ids() {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            c,
            p.size(c),
            fmt_value(metrics::community_f(&g, &p, c)),
            fmt_value(metrics::community_phi(&g, &p, c))
        )?;
    }
    writeln!(out)?;
    writeln!(
        out,
        "Gamma\t{}",
        fmt_value(metrics::partition_gamma(&g, &p))
    )?;
    writeln!(out, "Q\t{}", fmt_value(metrics::modularity(&g, &p)))?;
    out.flush()?;
    Ok(())
}

fn cmd_nmi(args: &NmiArgs) -> Result<()> {
    let format = match args.format {
        FormatArg::CommunityPerLine => TruthFormat::LinePerCommunity,
        FormatArg::NodeTab => TruthFormat::NodeLabel,
    };
    let a = GroundTruth::parse(open(&args.a)?, format)?;
    let b = GroundTruth::parse(open(&args.b)?, format)?;
    println!("{:.6}", nmi_between(&a, &b)?);
    Ok(())
}

fn cmd_triangles(args: &TrianglesArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let tc = count_triangles(&g, args.beta);
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for u in g.nodes() {
        writeln!(out, "{}\t{}", g.original_id(u), tc.get(u))?;
    }
    out.flush()?;
    eprintln!("total_triangles={} beta={}", tc.total(), tc.beta);
    Ok(())
}

fn cmd_er_sim(args: &ErSimArgs) -> Result<()> {
    let start = Instant::now();
    let params = ErParams::from_lambda(args.n, args.lambda, args.seed)?;
    let level = match args.level {
        LevelArg::Node => SampleLevel::Node,
        LevelArg::Community => SampleLevel::Community,
    };
    let (values, extra) = match args.metric {
        SampleMetricArg::Ps => {
            let s =
                null_model::sample_ps_distribution(&params, args.community_size, args.reps, level)?;
            (s.values, String::new())
        }
        SampleMetricArg::Phi => {
            if matches!(level, SampleLevel::Community) {
                return Err(crate::error::Error::InvalidParameter(
                    "phi sampling is node-level only".into(),
                ));
            }
            let s = null_model::sample_phi_distribution(&params, args.community_size, args.reps)?;
            let extra = format!(
                " discarded={} discard_rate={:.6}",
                s.discarded,
                s.discard_rate()
            );
            (s.values, extra)
        }
    };

    let mut out = create(&args.out)?;
    writeln!(out, "replication,value")?;
    for (r, v) in values.iter().enumerate() {
        writeln!(out, "{r},{v:.12e}")?;
    }
    out.flush()?;

    let mut hist_path = args.out.clone().into_os_string();
    hist_path.push(".hist.csv");
    let hist = null_model::Histogram::new(&values, null_model::HISTOGRAM_BINS);
    let mut out = create(Path::new(&hist_path))?;
    writeln!(out, "bin_lo,bin_hi,count")?;
    for (lo, hi, count) in hist.bins() {
        writeln!(out, "{lo:.12e},{hi:.12e},{count}")?;
    }
    out.flush()?;

    let (mean, var) = null_model::mean_variance(&values);
    eprintln!(
        "n={} lambda={} p={:.9} community_size={} reps={} seed={} rng={} mean={:.6e} variance={:.6e}{} wall_ms={}",
        params.n,
        args.lambda,
        params.p,
        args.community_size,
        args.reps,
        args.seed,
        null_model::RNG_NAME,
        mean,
        var,
        extra,
        start.elapsed().as_millis()
    );
    Ok(())
}
