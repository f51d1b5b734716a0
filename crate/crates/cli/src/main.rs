//! `distmfa` command line: ingest, mfa, simulate, distance.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use distmfa::io::{emit_histogram_json, emit_microdata_csv, parse_histogram_json, parse_microdata_csv};
use distmfa::pipeline::write_outputs;
use distmfa::simulate::DEFAULT_SEED;
use distmfa::{
    decompose_distance, run_mfa, wasserstein_sq_integral, DistributionalTable, Error, ExtremePolicy, MfaOptions, Plane,
    PlotKind, QuantileSpec, SimulationDesign,
};

#[derive(Parser)]
#[command(name = "distmfa", version, about = "Multiple factor analysis of histogram-valued data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert microdata or histogram json into canonical histogram json.
    Ingest(Common),
    /// Fit the model and write reports (and plots on request).
    Mfa(Common),
    /// Write seeded synthetic microdata (Gaussian and Beta blocks).
    Simulate(Common),
    /// Wasserstein distance between two units on one variable.
    Distance(Common),
}

#[derive(Args, Default, Clone)]
struct Common {
    /// Flat `key=value` file; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<String>,
    /// `csv` (unit,variable,value microdata) or `json` (histogram table).
    #[arg(long)]
    format: Option<String>,
    /// Quantile count K used for every variable.
    #[arg(long)]
    quantiles: Option<String>,
    /// Per-variable override `VAR=N`; repeatable.
    #[arg(long = "quantiles-for")]
    quantiles_for: Vec<String>,
    /// `active`, `supplementary` or `weight:W` with W in (0, 1].
    #[arg(long)]
    extremes: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// One-based axes, e.g. `1,2`.
    #[arg(long)]
    plane: Option<String>,
    /// Comma list of fan, circle, plane, scree.
    #[arg(long)]
    plots: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Two unit ids, `A,B`.
    #[arg(long)]
    units: Option<String>,
    #[arg(long)]
    variable: Option<String>,
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::Validation { .. }
            | Error::Json(_)
            | Error::NonFinite(_)
            | Error::InvalidHistogram(_)
            | Error::UnknownId { .. }
            | Error::AxisOutOfRange { .. } => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

const CONFIG_KEYS: [&str; 11] = [
    "input",
    "format",
    "quantiles",
    "quantiles-for",
    "extremes",
    "out",
    "plane",
    "plots",
    "seed",
    "units",
    "variable",
];

/// Settings after merging the config file under the flags.
#[derive(Debug, Default)]
struct Settings {
    values: BTreeMap<String, String>,
    quantiles_for: Vec<String>,
}

impl Settings {
    fn resolve(flags: &Common) -> Result<Self, Failure> {
        let mut values = BTreeMap::new();
        let mut quantiles_for = Vec::new();
        if let Some(path) = &flags.config {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure { code: 1, message: format!("cannot read {}: {e}", path.display()) })?;
            for (no, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| usage(format!("{}:{}: expected key=value", path.display(), no + 1)))?;
                let (key, value) = (key.trim().replace('_', "-"), value.trim().to_string());
                if !CONFIG_KEYS.contains(&key.as_str()) {
                    return Err(usage(format!("{}:{}: unknown key `{key}`", path.display(), no + 1)));
                }
                if key == "quantiles-for" {
                    quantiles_for.extend(value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()));
                } else {
                    values.insert(key, value);
                }
            }
        }
        let flag_values = [
            ("input", &flags.input),
            ("format", &flags.format),
            ("quantiles", &flags.quantiles),
            ("extremes", &flags.extremes),
            ("out", &flags.out),
            ("plane", &flags.plane),
            ("plots", &flags.plots),
            ("seed", &flags.seed),
            ("units", &flags.units),
            ("variable", &flags.variable),
        ];
        for (key, value) in flag_values {
            if let Some(v) = value {
                values.insert(key.to_string(), v.clone());
            }
        }
        if !flags.quantiles_for.is_empty() {
            quantiles_for = flags.quantiles_for.clone();
        }
        Ok(Settings { values, quantiles_for })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn require(&self, key: &str) -> Result<&str, Failure> {
        self.get(key).ok_or_else(|| usage(format!("missing --{key}")))
    }

    fn quantiles(&self) -> Result<QuantileSpec, Failure> {
        let mut spec = QuantileSpec::default();
        if let Some(k) = self.get("quantiles") {
            spec.default = parse_count(k)?;
        }
        for item in &self.quantiles_for {
            let (var, k) = item
                .split_once('=')
                .ok_or_else(|| usage(format!("--quantiles-for expects VAR=N, got `{item}`")))?;
            spec.overrides.insert(var.to_string(), parse_count(k)?);
        }
        Ok(spec)
    }

    fn extremes(&self) -> Result<ExtremePolicy<f64>, Failure> {
        match self.get("extremes").unwrap_or("active") {
            "active" => Ok(ExtremePolicy::Active),
            "supplementary" => Ok(ExtremePolicy::Supplementary),
            other => {
                let w = other
                    .strip_prefix("weight:")
                    .and_then(|w| w.parse::<f64>().ok())
                    .ok_or_else(|| usage(format!("unknown extremes policy `{other}`")))?;
                if !(w > 0.0 && w <= 1.0) {
                    return Err(usage(format!("extreme weight {w} outside (0, 1]")));
                }
                Ok(ExtremePolicy::Weight(w))
            }
        }
    }

    fn plane(&self) -> Result<Option<(usize, usize)>, Failure> {
        let Some(text) = self.get("plane") else { return Ok(None) };
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let axis = |s: &str| {
            s.parse::<usize>()
                .ok()
                .filter(|&a| a >= 1)
                .ok_or_else(|| usage(format!("--plane expects two axis numbers from 1, got `{text}`")))
        };
        match parts.as_slice() {
            [a, b] => Ok(Some((axis(a)? - 1, axis(b)? - 1))),
            _ => Err(usage(format!("--plane expects A,B, got `{text}`"))),
        }
    }

    fn plots(&self) -> Result<Vec<PlotKind>, Failure> {
        let Some(text) = self.get("plots") else { return Ok(Vec::new()) };
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| PlotKind::parse(s).map_err(|e| usage(e.to_string())))
            .collect()
    }

    fn seed(&self) -> Result<u64, Failure> {
        match self.get("seed") {
            None => Ok(DEFAULT_SEED),
            Some(s) => s.parse().map_err(|_| usage(format!("--seed expects an integer, got `{s}`"))),
        }
    }
}

fn parse_count(s: &str) -> Result<usize, Failure> {
    s.trim()
        .parse::<usize>()
        .ok()
        .filter(|&k| k >= 1)
        .ok_or_else(|| usage(format!("quantile count must be an integer >= 1, got `{s}`")))
}

fn load_table(settings: &Settings) -> Result<DistributionalTable, Failure> {
    let input = settings.require("input")?;
    let text = fs::read_to_string(input).map_err(|e| Failure { code: 1, message: format!("cannot read {input}: {e}") })?;
    let format = match settings.get("format") {
        Some(f) => f.to_string(),
        None if input.ends_with(".json") => "json".into(),
        None => "csv".into(),
    };
    match format.as_str() {
        "csv" => Ok(parse_microdata_csv(&text, &settings.quantiles()?)?),
        "json" => Ok(parse_histogram_json(&text)?),
        other => Err(usage(format!("unknown format `{other}` (expected csv or json)"))),
    }
}

fn out_dir(settings: &Settings) -> Result<PathBuf, Failure> {
    let dir = PathBuf::from(settings.get("out").unwrap_or("."));
    fs::create_dir_all(&dir).map_err(|e| Failure { code: 1, message: format!("cannot create {}: {e}", dir.display()) })?;
    Ok(dir)
}

fn write(path: &Path, content: &str) -> Result<(), Failure> {
    fs::write(path, content).map_err(|e| Failure { code: 1, message: format!("cannot write {}: {e}", path.display()) })
}

/// Writes to stdout, ignoring a closed pipe.
fn say(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn cmd_ingest(settings: &Settings) -> Result<(), Failure> {
    let table = load_table(settings)?;
    let path = out_dir(settings)?.join("table.json");
    write(&path, &emit_histogram_json(&table)?)?;
    say(&format!("{}\n", path.display()));
    Ok(())
}

fn cmd_mfa(settings: &Settings) -> Result<(), Failure> {
    let table = load_table(settings)?;
    let options = MfaOptions { quantiles: settings.quantiles()?, extremes: settings.extremes()? };
    let plots = settings.plots()?;
    let requested_plane = settings.plane()?;
    let dir = out_dir(settings)?;
    let analysis = run_mfa(table, &options)?;
    for warning in analysis.warnings() {
        eprintln!("warning: {warning}");
    }
    let rank = analysis.model.rank();
    let plane = match requested_plane {
        Some((a, b)) => Some(Plane::new(a, b, rank)?),
        None => None,
    };
    write_outputs(&analysis, &dir, &plots, plane)?;
    let model = &analysis.model;
    let mut text = String::from("component  eigenvalue  %variance  cumulative%\n");
    for a in 0..rank {
        text += &format!(
            "comp {:<5} {:>10.4} {:>10.2} {:>12.2}\n",
            a + 1,
            model.eigenvalues()[a],
            model.percent_inertia()[a],
            model.cumulative_percent()[a]
        );
    }
    say(&text);
    Ok(())
}

fn cmd_simulate(settings: &Settings) -> Result<(), Failure> {
    let records = SimulationDesign::default().sample(settings.seed()?)?;
    let path = out_dir(settings)?.join("microdata.csv");
    write(&path, &emit_microdata_csv(&records)?)?;
    say(&format!("{}\n", path.display()));
    Ok(())
}

fn cmd_distance(settings: &Settings) -> Result<(), Failure> {
    let table = load_table(settings)?;
    let units = settings.require("units")?;
    let (a, b) = units
        .split_once(',')
        .ok_or_else(|| usage(format!("--units expects A,B, got `{units}`")))?;
    let (a, b) = (table.unit_index(a.trim())?, table.unit_index(b.trim())?);
    let v = match settings.get("variable") {
        Some(name) => table.variable_index(name)?,
        None if table.variables().len() == 1 => 0,
        None => return Err(usage("--variable is required when the table has several variables")),
    };
    let (f, g) = (table.cell(a, v).quantile_function(), table.cell(b, v).quantile_function());
    let d = decompose_distance(&f, &g);
    say(&format!(
        "d2 {}\nlocation {}\nscale {}\nshape {}\nrho {}\n",
        wasserstein_sq_integral(&f, &g),
        d.location,
        d.scale,
        d.shape,
        d.correlation
    ));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (run, flags): (fn(&Settings) -> Result<(), Failure>, &Common) = match &cli.command {
        Command::Ingest(c) => (cmd_ingest, c),
        Command::Mfa(c) => (cmd_mfa, c),
        Command::Simulate(c) => (cmd_simulate, c),
        Command::Distance(c) => (cmd_distance, c),
    };
    let result = Settings::resolve(flags).and_then(|s| run(&s));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
