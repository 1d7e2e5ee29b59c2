//! `preference-advisor`: train the preference network, reproduce the
//! purchase analysis, and rank product samples for a customer group.

mod config;

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use prefadvisor::dataio::{
    expand_counts, load_records, records_to_csv, synthetic_records, table2, tabulate,
    to_training_pairs, AgeBand, CustomerGroup, Gender, SampleCatalog,
};
use prefadvisor::expert::{parse_rules, recommend, Recommendation, Rule};
use prefadvisor::nnet::{init_weights, load_model, save_model, train, Network};
use prefadvisor::report::{analyze_report, Format};
use prefadvisor::stats::ContingencyTable;

use config::{DataFlags, DataSource, NetFlags, RunConfig};

const PRECEDENCE: &str = "Settings are merged as built-in defaults < config file < flags. \
The config file is TOML (keys: seed, format, out, preset, layers, learning_rate, momentum, \
max_epochs, target_mse, init_half_range, use_bias, fixture, data, samples, model, rules, \
nn_weight) and is read from --config or PREFADVISOR_CONFIG.\n\n\
Exit codes: 0 success, 2 usage or configuration error, 3 data error, 4 quality gate failed.";

#[derive(Debug, Parser)]
#[command(name = "preference-advisor", version, about = "Customer preference advisor", after_help = PRECEDENCE)]
struct Cli {
    /// TOML settings file
    #[arg(long, global = true, env = "PREFADVISOR_CONFIG")]
    config: Option<PathBuf>,
    /// Seed for weight initialization, shuffling and synthetic data
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output format: tsv or text
    #[arg(long, global = true)]
    format: Option<String>,
    /// Output path (model file for train, report or CSV otherwise)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train a network on purchase records and write the model file
    Train {
        #[command(flatten)]
        data: DataFlags,
        #[command(flatten)]
        net: NetFlags,
        /// Exit with status 4 when the target MSE is not reached
        #[arg(long)]
        require_converged: bool,
    },
    /// Accuracy, share tables and correlations for a purchase table
    Analyze {
        #[command(flatten)]
        data: DataFlags,
        /// Number of samples S1..Sn accepted in a records file
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Rank samples for a customer group
    Recommend {
        /// male or female
        gender: Option<String>,
        /// teen, young, adult or senior
        age_band: Option<String>,
        /// Model file written by `train`
        #[arg(long)]
        model: Option<PathBuf>,
        /// Rule file
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Weight of the network score in the blend
        #[arg(long)]
        nn_weight: Option<f64>,
        /// Read `<gender> <age band>` lines from standard input until end of input
        #[arg(long)]
        interactive: bool,
    },
    /// Write purchase records as CSV
    Gen {
        #[command(flatten)]
        data: DataFlags,
        /// Draw records per group in proportion to the table's columns
        #[arg(long)]
        synthetic: bool,
        /// Records drawn per group in synthetic mode
        #[arg(long)]
        per_group: Option<usize>,
        /// Number of samples S1..Sn accepted in a records file
        #[arg(long)]
        samples: Option<usize>,
    },
}

/// A failed run and its exit status.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Data(String),
    Quality(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Data(_) => 3,
            Failure::Quality(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Data(m) | Failure::Quality(m) => m,
        }
    }
}

impl From<prefadvisor::Error> for Failure {
    fn from(e: prefadvisor::Error) -> Self {
        if e.is_data_error() {
            Failure::Data(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let run = RunConfig::new(
        cli.config.as_deref(),
        cli.seed,
        cli.format.as_deref(),
        cli.out.clone(),
    )?;
    match cli.command {
        Command::Train {
            data,
            net,
            require_converged,
        } => cmd_train(&run, &data, &net, require_converged),
        Command::Analyze { data, samples } => cmd_analyze(&run, &data, samples),
        Command::Recommend {
            gender,
            age_band,
            model,
            rules,
            nn_weight,
            interactive,
        } => cmd_recommend(&run, gender, age_band, model, rules, nn_weight, interactive),
        Command::Gen {
            data,
            synthetic,
            per_group,
            samples,
        } => cmd_gen(&run, &data, synthetic, per_group, samples),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Config(format!("cannot write output: {e}"))),
    }
}

fn catalog_size(run: &RunConfig, flag: Option<usize>) -> Result<SampleCatalog, Failure> {
    let n = flag.or(run.file.samples).unwrap_or(8);
    Ok(SampleCatalog::numbered(n)?)
}

fn load_table(source: &DataSource, catalog: &SampleCatalog) -> Result<ContingencyTable, Failure> {
    match source {
        DataSource::Fixture => Ok(table2()),
        DataSource::File(path) => {
            let records = read_records(path, catalog)?;
            Ok(tabulate(&records, catalog)?)
        }
    }
}

fn read_records(
    path: &Path,
    catalog: &SampleCatalog,
) -> Result<Vec<prefadvisor::dataio::PurchaseRecord>, Failure> {
    if !path.is_file() {
        return Err(Failure::Config(format!(
            "data file {} not found",
            path.display()
        )));
    }
    Ok(load_records(path, catalog)?)
}

fn cmd_train(
    run: &RunConfig,
    data: &DataFlags,
    flags: &NetFlags,
    require_converged: bool,
) -> Result<(), Failure> {
    let cfg = run.network(flags)?;
    let source = run.data_source(data)?;
    let out = run
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("model.pam"));
    if cfg.input_size() != CustomerGroup::COUNT {
        return Err(Failure::Config(format!(
            "input layer has {} units, expected one per customer group ({})",
            cfg.input_size(),
            CustomerGroup::COUNT
        )));
    }
    let catalog = SampleCatalog::numbered(cfg.output_size())?;
    let records = match &source {
        DataSource::Fixture => expand_counts(&table2())?,
        DataSource::File(path) => read_records(path, &catalog)?,
    };
    if let Some(r) = records
        .iter()
        .find(|r| catalog.index_of(&r.sample).is_none())
    {
        return Err(Failure::Config(format!(
            "sample `{}` has no output unit in a {}-output network",
            r.sample,
            catalog.len()
        )));
    }
    let pairs = to_training_pairs(&records, &catalog)?;
    let mut net = init_weights(&cfg)?;
    let report = train(&mut net, &pairs)?;
    std::fs::write(&out, save_model(&net))
        .map_err(|e| Failure::Config(format!("cannot write {}: {e}", out.display())))?;

    let fields = [
        ("patterns", pairs.len().to_string()),
        ("epochs", report.epochs_run.to_string()),
        ("final_mse", format!("{:.6}", report.final_mse)),
        ("converged", report.converged.to_string()),
        ("model", out.display().to_string()),
    ];
    let mut text = String::new();
    for (k, v) in fields {
        match run.format {
            Format::Tsv => writeln!(text, "{k}\t{v}").unwrap(),
            Format::Text => writeln!(text, "{k}: {v}").unwrap(),
        }
    }
    print!("{text}");
    if require_converged && !report.converged {
        return Err(Failure::Quality(format!(
            "final MSE {:.6} is above the target {} after {} epochs",
            report.final_mse, cfg.target_mse, report.epochs_run
        )));
    }
    Ok(())
}

fn cmd_analyze(run: &RunConfig, data: &DataFlags, samples: Option<usize>) -> Result<(), Failure> {
    let source = run.data_source(data)?;
    let catalog = catalog_size(run, samples)?;
    let table = load_table(&source, &catalog)?;
    if table.grand_total() == 0 {
        return Err(Failure::Data("the purchase table is empty".into()));
    }
    let report = analyze_report(&table, run.format)?;
    emit(run.out.as_deref(), &report)
}

fn parse_group(gender: &str, age: &str) -> Result<CustomerGroup, Failure> {
    let gender: Gender = gender.parse().map_err(Failure::Config)?;
    let age: AgeBand = age.parse().map_err(Failure::Config)?;
    Ok(CustomerGroup::new(gender, age))
}

fn render_recommendation(rec: &Recommendation, format: Format) -> String {
    let mut out = String::new();
    let fired: Vec<&str> = rec
        .consultation
        .log
        .iter()
        .map(|f| f.rule_id.as_str())
        .collect();
    match format {
        Format::Tsv => {
            writeln!(out, "# group\t{}", rec.group).unwrap();
            writeln!(out, "rank\tsample\tblended\tnetwork\trules").unwrap();
            for (k, e) in rec.entries.iter().enumerate() {
                writeln!(
                    out,
                    "{}\t{}\t{:.6}\t{:.6}\t{:.6}",
                    k + 1,
                    e.sample,
                    e.blended,
                    e.nn_score,
                    e.rule_adjust
                )
                .unwrap();
            }
            writeln!(out, "# fired\t{}", fired.join(",")).unwrap();
        }
        Format::Text => {
            writeln!(out, "Recommendations for {}", rec.group).unwrap();
            writeln!(
                out,
                "{:>4}  {:<8}{:>10}{:>10}{:>10}",
                "rank", "sample", "blended", "network", "rules"
            )
            .unwrap();
            for (k, e) in rec.entries.iter().enumerate() {
                writeln!(
                    out,
                    "{:>4}  {:<8}{:>10.4}{:>10.4}{:>10.4}",
                    k + 1,
                    e.sample,
                    e.blended,
                    e.nn_score,
                    e.rule_adjust
                )
                .unwrap();
            }
            if fired.is_empty() {
                writeln!(out, "rules fired: none").unwrap();
            } else {
                writeln!(out, "rules fired: {}", fired.join(", ")).unwrap();
            }
        }
    }
    out
}

fn load_network(path: &Path) -> Result<Network, Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::Config(format!("cannot read model {}: {e}", path.display())))?;
    load_model(&bytes).map_err(|e| Failure::Config(format!("model {}: {e}", path.display())))
}

fn load_rules(path: Option<&Path>, catalog: &SampleCatalog) -> Result<Vec<Rule>, Failure> {
    match path {
        None => Ok(Vec::new()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Config(format!("cannot read rules {}: {e}", p.display())))?;
            parse_rules(&text, catalog)
                .map_err(|e| Failure::Config(format!("{}: {e}", p.display())))
        }
    }
}

fn cmd_recommend(
    run: &RunConfig,
    gender: Option<String>,
    age_band: Option<String>,
    model: Option<PathBuf>,
    rules: Option<PathBuf>,
    nn_weight: Option<f64>,
    interactive: bool,
) -> Result<(), Failure> {
    let group = match (&gender, &age_band, interactive) {
        (Some(g), Some(a), _) => Some(parse_group(g, a)?),
        (None, None, true) => None,
        (Some(_), None, _) => return Err(Failure::Config("missing age band".into())),
        _ => {
            return Err(Failure::Config(
                "expected `<gender> <age band>` or --interactive".into(),
            ))
        }
    };
    let model = model
        .or_else(|| run.file.model.clone())
        .ok_or_else(|| Failure::Config("no model: pass --model <path>".into()))?;
    let net = load_network(&model)?;
    let catalog = SampleCatalog::numbered(net.output_size())?;
    let rules = load_rules(
        rules.or_else(|| run.file.rules.clone()).as_deref(),
        &catalog,
    )?;
    let nn_weight = nn_weight.or(run.file.nn_weight).unwrap_or(1.0);

    if let Some(group) = group {
        let rec = recommend(&net, &rules, &catalog, group, nn_weight)?;
        emit(run.out.as_deref(), &render_recommendation(&rec, run.format))?;
    }
    if interactive {
        interactive_loop(&net, &rules, &catalog, nn_weight, run.format)?;
    }
    Ok(())
}

fn interactive_loop(
    net: &Network,
    rules: &[Rule],
    catalog: &SampleCatalog,
    nn_weight: f64,
    format: Format,
) -> Result<(), Failure> {
    let stdin = io::stdin();
    let mut stdout = io::stdout();
    let io_err = |e: io::Error| Failure::Config(format!("terminal i/o: {e}"));
    loop {
        eprint!("gender age> ");
        let mut line = String::new();
        if stdin.lock().read_line(&mut line).map_err(io_err)? == 0 {
            break;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] => continue,
            ["quit"] | ["exit"] => break,
            [g, a] => match parse_group(g, a) {
                Ok(group) => {
                    let rec = recommend(net, rules, catalog, group, nn_weight)?;
                    stdout
                        .write_all(render_recommendation(&rec, format).as_bytes())
                        .map_err(io_err)?;
                }
                Err(f) => eprintln!("{}", f.message()),
            },
            _ => eprintln!("expected `<gender> <age band>`, e.g. `female adult`"),
        }
    }
    Ok(())
}

fn cmd_gen(
    run: &RunConfig,
    data: &DataFlags,
    synthetic: bool,
    per_group: Option<usize>,
    samples: Option<usize>,
) -> Result<(), Failure> {
    let source = match run.data_source(data) {
        Err(_)
            if synthetic
                && data.fixture.is_none()
                && data.data.is_none()
                && run.file.data.is_none()
                && run.file.fixture.is_none() =>
        {
            DataSource::Fixture
        }
        other => other?,
    };
    let catalog = catalog_size(run, samples)?;
    let table = load_table(&source, &catalog)?;
    let records = if synthetic {
        let n =
            per_group.ok_or_else(|| Failure::Config("--synthetic needs --per-group <n>".into()))?;
        synthetic_records(&table, n, run.seed.unwrap_or(0))?
    } else {
        if per_group.is_some() {
            return Err(Failure::Config(
                "--per-group only applies with --synthetic".into(),
            ));
        }
        expand_counts(&table)?
    };
    emit(run.out.as_deref(), &records_to_csv(&records))
}
