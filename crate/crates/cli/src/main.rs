use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use poset_ramsey::engines::{
    compose_prop2_witness, search_dual, search_product, verify_dual_witness, verify_prop2_witness,
    verify_prop5_witness, verify_product_witness, ColoringCertificate, ProductOracle, Verdict, WitnessParams,
};
use poset_ramsey::grid::{
    construct_witness, grid_structure, minimal_witness_search, verify_ramsey_witness, CandidateSpace,
    ConstructOptions, FramedStructure,
};
use poset_ramsey::interp::{check_identity, check_interpretation, transfer, AlphaVariant, InterpretationFrame};
use poset_ramsey::rigsurj::enumerate_rs;
use poset_ramsey::structures::enumerate_copies;
use poset_ramsey::{acceptance, Anchors, OrderedExtensionSpace, OutputFormat, RunConfig, Structure};

const EXIT_USAGE: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_CRITERION_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "poset-ramsey", version, about = "Ramsey computations for posets with linear extensions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Node budget for coloring searches (overrides POSET_RAMSEY_MAX_COLORINGS).
    #[arg(long, global = true)]
    max_colorings: Option<u64>,
    /// Largest structure a search may build (overrides POSET_RAMSEY_MAX_GROUND_SIZE).
    #[arg(long, global = true)]
    max_ground_size: Option<usize>,
    /// Largest number of colored objects (overrides POSET_RAMSEY_MAX_DOMAIN).
    #[arg(long, global = true)]
    max_domain: Option<usize>,
    /// Worker threads (overrides POSET_RAMSEY_JOBS).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
    Dot,
}

/// Sizes and anchors of the two ordered sets `A` and `B`.
#[derive(Args)]
struct OrderedPair {
    #[arg(long)]
    a_len: usize,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    a_anchor: Vec<usize>,
    #[arg(long)]
    b_len: usize,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    b_anchor: Vec<usize>,
}

impl OrderedPair {
    fn anchors(&self) -> poset_ramsey::Result<(Anchors, Anchors)> {
        Ok((
            Anchors::new(self.a_anchor.clone(), self.a_len)?,
            Anchors::new(self.b_anchor.clone(), self.b_len)?,
        ))
    }
}

#[derive(Args)]
struct PairInput {
    /// The smaller structure.
    #[arg(long)]
    x: PathBuf,
    /// The structure whose copies are colored against.
    #[arg(long)]
    y: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a structure file.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Linear extensions of P, sorted by the below-order relative to one of the orders.
    Extensions {
        #[arg(long)]
        input: PathBuf,
        /// Index of the reference order.
        #[arg(long, default_value_t = 0)]
        of_order: usize,
    },
    /// Anchored rigid surjections between two finite linear orders.
    RigidSurjections {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Source anchors; defaults to `0`.
        #[arg(long, value_delimiter = ',')]
        anchors: Option<Vec<usize>>,
        /// Target anchors; defaults to all zeros.
        #[arg(long, value_delimiter = ',')]
        target_anchors: Option<Vec<usize>>,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Copies of X inside Y.
    Copies {
        #[command(flatten)]
        pair: PairInput,
    },
    /// Does Z -> (Y)^X_d hold?
    VerifyWitness {
        #[arg(long)]
        z: PathBuf,
        #[command(flatten)]
        pair: PairInput,
        #[arg(long)]
        d: usize,
    },
    /// Build a grid witness, or report exact symbolic sizes.
    ConstructWitness {
        #[command(flatten)]
        pair: PairInput,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = ConstructOptions::default().m_max)]
        m_max: usize,
        #[arg(long, default_value_t = ConstructOptions::default().n_max)]
        n_max: usize,
    },
    /// Least witness up to a size bound.
    SearchMinimal {
        #[command(flatten)]
        pair: PairInput,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        bound: usize,
        /// Only try grids n^m.
        #[arg(long)]
        grids: bool,
    },
    /// Least n for the product statement.
    SearchProduct {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
    },
    VerifyProduct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
    },
    /// Least (m, anchors) for the dual statement with constants.
    SearchDual {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        orders: OrderedPair,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
    },
    VerifyDual {
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        anchors: Vec<usize>,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        orders: OrderedPair,
    },
    /// The framed product statement; with --compose, builds (m, anchors, n) from a dual witness.
    VerifyProp2 {
        #[arg(long)]
        m: usize,
        /// Required unless --compose is given.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        anchors: Vec<usize>,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        orders: OrderedPair,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        /// Search n up to this bound for the induced color count.
        #[arg(long)]
        compose: Option<usize>,
    },
    /// The twisted-product statement for the extension spaces of X and Y.
    VerifyProp5 {
        #[command(flatten)]
        pair: PairInput,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        anchors: Option<Vec<usize>>,
        #[arg(long)]
        d: usize,
    },
    /// The grid structure n^m.
    Grid {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// Defaults to all zeros.
        #[arg(long, value_delimiter = ',')]
        anchors: Option<Vec<usize>>,
    },
    /// Check the interpretation of the embedding pair in the twisted pair.
    InterpretCheck {
        #[command(flatten)]
        pair: PairInput,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        anchors: Option<Vec<usize>>,
        /// Also run the Ramsey transfer for this many colors, searching up to n.
        #[arg(long)]
        d: Option<usize>,
        /// Use the variant of alpha that keeps the sets and drops the order data.
        #[arg(long)]
        fixed_sets: bool,
    },
    /// Run the acceptance matrix.
    Acceptance,
}

/// What a subcommand produced, before formatting.
struct Output {
    json: Value,
    table: String,
    dot: Option<String>,
    exit: u8,
}

impl Output {
    fn new(json: Value, table: String) -> Self {
        Output { json, table, dot: None, exit: 0 }
    }

    fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let infeasible = err
                .downcast_ref::<poset_ramsey::Error>()
                .is_some_and(poset_ramsey::Error::is_infeasible);
            ExitCode::from(if infeasible { EXIT_INFEASIBLE } else { EXIT_USAGE })
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let config = build_config(&cli.global)?;
    let format = cli.global.format;
    let out = dispatch(cli.command, &config)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&out.json)? + "\n",
        Format::Table => out.table,
        Format::Dot => match out.dot {
            Some(dot) => dot,
            None => bail!("this subcommand has no DOT output"),
        },
    };
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(out.exit),
    }
}

fn build_config(global: &Global) -> anyhow::Result<RunConfig> {
    let mut config = RunConfig::from_env()?;
    if let Some(v) = global.max_colorings {
        config.max_colorings = v;
    }
    if let Some(v) = global.max_ground_size {
        config.max_ground_size = v;
    }
    if let Some(v) = global.max_domain {
        config.max_domain = v;
    }
    if let Some(v) = global.jobs {
        config.jobs = v;
    }
    config.format = match global.format {
        Format::Json => OutputFormat::Json,
        Format::Table => OutputFormat::Table,
        Format::Dot => OutputFormat::Dot,
    };
    config.validate()?;
    Ok(config)
}

fn read_structure(path: &Path) -> anyhow::Result<Structure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Structure::from_json(&text).with_context(|| format!("in {}", path.display()))
}

fn read_pair(pair: &PairInput) -> anyhow::Result<(Structure, Structure)> {
    Ok((read_structure(&pair.x)?, read_structure(&pair.y)?))
}

fn anchors_or_zero(anchors: Option<Vec<usize>>, p: usize, len: usize) -> poset_ramsey::Result<Anchors> {
    match anchors {
        Some(a) => Anchors::new(a, len),
        None => Anchors::at_minimum(p, len),
    }
}

fn certificate_table(cert: &ColoringCertificate) -> String {
    let instance = serde_json::to_value(&cert.instance).unwrap_or(Value::Null);
    let mut s = format!(
        "instance   {}\ncolors     {}\nobjects    {}\ntargets    {}\nnodes      {}\n",
        instance, cert.colors, cert.objects, cert.targets, cert.nodes
    );
    match &cert.verdict {
        Verdict::WitnessHolds => s.push_str("verdict    witness holds\n"),
        Verdict::Counterexample { coloring } => {
            s.push_str("verdict    counterexample\n");
            for c in coloring {
                s.push_str(&format!("  {}  {}\n", c.color, c.object));
            }
        }
    }
    s
}

fn certificate_output(cert: &ColoringCertificate) -> anyhow::Result<Output> {
    Ok(Output::new(serde_json::to_value(cert)?, certificate_table(cert)))
}

fn dispatch(command: Command, config: &RunConfig) -> anyhow::Result<Output> {
    match command {
        Command::Validate { input } => {
            let s = read_structure(&input)?;
            let json = json!({
                "ok": true,
                "p": s.p(),
                "size": s.size(),
                "comparable_pairs": s.partial_order().len(),
                "structure": s.to_raw(),
            });
            let table = format!(
                "ok: {} points, {} linear orders, {} comparable pairs\n",
                s.size(),
                s.p(),
                s.partial_order().len()
            );
            Ok(Output::new(json, table).with_dot(s.to_dot()))
        }
        Command::Extensions { input, of_order } => {
            let s = read_structure(&input)?;
            if of_order >= s.p() {
                bail!("--of-order {of_order} but the structure has {} orders", s.p());
            }
            let space = OrderedExtensionSpace::new(s.order(of_order), Some(s.partial_order()))?;
            let json = json!(space.members().iter().map(|o| o.enumeration()).collect::<Vec<_>>());
            let mut table = String::new();
            for (i, o) in space.members().iter().enumerate() {
                table.push_str(&format!("{i:>4}  {}\n", o.word()));
            }
            Ok(Output::new(json, table))
        }
        Command::RigidSurjections { from, to, anchors, target_anchors, count } => {
            let source = anchors_or_zero(anchors, 1, from)?;
            let target = anchors_or_zero(target_anchors, source.p(), to)?;
            let all = enumerate_rs(from, to, &source, &target)?;
            if count {
                return Ok(Output::new(json!({ "count": all.len() }), format!("{}\n", all.len())));
            }
            let json = json!(all
                .iter()
                .map(|r| json!({
                    "map": r.map(),
                    "source_anchor": r.source_anchor().positions(),
                    "target_anchor": r.target_anchor().positions(),
                }))
                .collect::<Vec<_>>());
            let table = all
                .iter()
                .map(|r| r.map().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ") + "\n")
                .collect();
            Ok(Output::new(json, table))
        }
        Command::Copies { pair } => {
            let (x, y) = read_pair(&pair)?;
            let copies = enumerate_copies(&x, &y)?;
            let json = json!({ "count": copies.len(), "copies": copies });
            let table = copies.iter().map(|c| format!("{:?}\n", c.elements)).collect();
            Ok(Output::new(json, table))
        }
        Command::VerifyWitness { z, pair, d } => {
            let z = read_structure(&z)?;
            let (x, y) = read_pair(&pair)?;
            certificate_output(&verify_ramsey_witness(&z, &x, &y, d, config)?)
        }
        Command::ConstructWitness { pair, d, m_max, n_max } => {
            let (x, y) = read_pair(&pair)?;
            let built = construct_witness(&x, &y, d, ConstructOptions { m_max, n_max }, config)?;
            let json = serde_json::to_value(&built)?;
            let table = format!(
                "image of X  {:?}\nverified    {}\n{}\n",
                built.x_image,
                built.is_verified(),
                serde_json::to_string_pretty(&built.construction)?
            );
            let out = Output::new(json, table);
            Ok(match &built.grid {
                Some(g) => out.with_dot(g.to_dot()),
                None => out,
            })
        }
        Command::SearchMinimal { pair, d, bound, grids } => {
            let (x, y) = read_pair(&pair)?;
            let space = if grids { CandidateSpace::Grids } else { CandidateSpace::All };
            let found = minimal_witness_search(&x, &y, d, bound, space, config)?;
            let table = format!(
                "size        {}\ncandidates  {}\nstructure   {}\n",
                found.size,
                found.candidates_checked,
                serde_json::to_string(&found.structure)?
            );
            let dot = Structure::validate(&found.structure)?.to_dot();
            Ok(Output::new(serde_json::to_value(&found)?, table).with_dot(dot))
        }
        Command::SearchProduct { d, k, l, m, n_max } => {
            let found = search_product(d, k, l, m, n_max, config)?;
            let table = format!("least n = {}\n{}", found.n, certificate_table(&found.certificate));
            Ok(Output::new(serde_json::to_value(&found)?, table))
        }
        Command::VerifyProduct { n, d, k, l, m } => certificate_output(&verify_product_witness(n, d, k, l, m, config)?),
        Command::SearchDual { d, orders, m_max } => {
            let (a, b) = orders.anchors()?;
            let found = search_dual(d, orders.a_len, &a, orders.b_len, &b, m_max, config)?;
            let table = format!(
                "least m = {}, anchors {:?}\n{}",
                found.m,
                found.anchors,
                certificate_table(&found.certificate)
            );
            Ok(Output::new(serde_json::to_value(&found)?, table))
        }
        Command::VerifyDual { m, anchors, d, orders } => {
            let (a, b) = orders.anchors()?;
            let frame = Anchors::new(anchors, m)?;
            certificate_output(&verify_dual_witness(&frame, d, orders.a_len, &a, orders.b_len, &b, config)?)
        }
        Command::VerifyProp2 { m, n, anchors, d, orders, k, l, compose } => {
            let (a, b) = orders.anchors()?;
            if let Some(n_max) = compose {
                let frame = Anchors::new(anchors, m)?;
                let composed = compose_prop2_witness(
                    d,
                    orders.a_len,
                    &a,
                    orders.b_len,
                    &b,
                    k,
                    l,
                    &frame,
                    ProductOracle::Search { n_max },
                    config,
                )?;
                let table = format!(
                    "m = {}, anchors {:?}, n = {}\nrigid surjections {}\ncolors {}\nverified {}\n",
                    composed.m,
                    composed.anchors,
                    composed.n.map_or("unknown".to_string(), |n| n.to_string()),
                    composed.rs_count,
                    composed.color_count,
                    composed.verified
                );
                return Ok(Output::new(serde_json::to_value(&composed)?, table));
            }
            let Some(n) = n else {
                bail!("verify-prop2 needs --n or --compose");
            };
            let params = WitnessParams::new(m, n, anchors)?;
            certificate_output(&verify_prop2_witness(&params, d, orders.a_len, &a, orders.b_len, &b, k, l, config)?)
        }
        Command::VerifyProp5 { pair, m, n, anchors, d } => {
            let (x, y) = read_pair(&pair)?;
            let (fx, fy) = (FramedStructure::new(&x)?, FramedStructure::new(&y)?);
            let frame = anchors_or_zero(anchors, x.p(), m)?;
            let params = WitnessParams::new(m, n, frame.positions().to_vec())?;
            certificate_output(&verify_prop5_witness(&params, d, &fx.space, &fx.anchors, &fy.space, &fy.anchors, config)?)
        }
        Command::Grid { n, m, p, anchors } => {
            let frame = anchors_or_zero(anchors, p, m)?;
            let grid = grid_structure(n, m, &frame, config)?;
            let mut table = String::new();
            for point in 0..grid.size() {
                table.push_str(&format!("{point:>5}  {:?}\n", grid.coords(point)));
            }
            Ok(Output::new(serde_json::to_value(&grid)?, table).with_dot(grid.to_dot()))
        }
        Command::InterpretCheck { pair, m, n, anchors, d, fixed_sets } => {
            let (x, y) = read_pair(&pair)?;
            let anchors = anchors_or_zero(anchors, x.p(), m)?.positions().to_vec();
            let frame = InterpretationFrame::new(&x, &y, WitnessParams::new(m, n, anchors.clone())?, config)?;
            let variant = if fixed_sets { AlphaVariant::FixedSets } else { AlphaVariant::Faithful };
            let interpretation = check_interpretation(&frame, variant, config)?;
            let identity = check_identity(&frame, config)?;
            let transfer = d.map(|d| transfer(&x, &y, m, &anchors, d, n, config)).transpose()?;
            let mut table = format!(
                "interpretation  {} ({} tuples, {} embeddings)\nidentity        {}\n",
                if interpretation.holds { "holds" } else { "violated" },
                interpretation.f_size,
                interpretation.s_size,
                if identity.holds { "holds" } else { "violated" },
            );
            if let Some(t) = &transfer {
                table.push_str(&format!(
                    "twisted pair    {}\nconsistent      {}\n",
                    if t.twisted.holds { "ramsey" } else { "not certified" },
                    t.consistent
                ));
            }
            let json = json!({
                "holds": interpretation.holds && identity.holds,
                "interpretation": interpretation,
                "identity": identity,
                "transfer": transfer,
            });
            Ok(Output::new(json, table))
        }
        Command::Acceptance => {
            let reports = acceptance::run_all(config);
            let table = reports.iter().map(|r| format!("{r}\n")).collect();
            let mut out = Output::new(serde_json::to_value(&reports)?, table);
            if reports.iter().any(|r| !r.passed) {
                out.exit = EXIT_CRITERION_FAILED;
            }
            Ok(out)
        }
    }
}
