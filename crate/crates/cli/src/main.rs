//! `purify`: exact and dense propagation of single-qubit noise through
//! measurement-free stabilizer error correction.

mod output;
mod parse;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use purify_core::codes::CodeName;
use purify_core::dense::{classify_dense, effective_dense, tomography, Tomography};
use purify_core::flow::{
    classify, purification_threshold, sweep, worst_case_poly, ChannelClass, ClassifyOptions, GridSpec, WorstCaseOptions,
};
use purify_core::gates::{linspace, square_grid, GateNoise, LogicalGateResult, LogicalGates, Placement};
use purify_core::pauli::Pauli;
use purify_core::printed::compare_printed;
use purify_core::recovery::{explicit_from_export, TableExport};
use purify_core::{
    build_table, effective_polys, eval_polys, get_code, validate_code, ChannelPolys, CorrectionTable, PauliParams, Policy,
    StabilizerCode,
};

use output::{json, num};
use parse::{ChannelSpec, SquareGrid};

#[derive(Parser)]
#[command(name = "purify", version, about = "Propagate single-qubit noise through stabilizer error correction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the code catalog.
    Codes {
        #[command(subcommand)]
        action: CodesAction,
    },
    /// Inspect correction tables.
    Table {
        #[command(subcommand)]
        action: TableAction,
    },
    /// Effective logical channel after one level.
    Effective(EffectiveArgs),
    /// Compare the computed polynomials with the reference terms.
    VerifyPaper(VerifyArgs),
    /// Concatenate until the channel purifies or stalls.
    Classify(ClassifyArgs),
    /// Purification threshold per starting label.
    Threshold(ThresholdArgs),
    /// Classify every point of a parameter grid.
    Sweep(SweepArgs),
    /// Transfer matrices of a physical channel and its logical channel.
    Tomography(TomographyArgs),
    /// Imperfect logical Pauli gates, pre-encoding versus transversal.
    #[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
    LogicalGate(LogicalGateCmd),
}

#[derive(Subcommand)]
enum CodesAction {
    List(FormatArgs),
    Show {
        #[arg(value_parser = parse::code)]
        name: &'static StabilizerCode,
        #[command(flatten)]
        fmt: FormatArgs,
    },
}

#[derive(Subcommand)]
enum TableAction {
    Show {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        fmt: FormatArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct FormatArgs {
    /// Output format.
    #[arg(long, alias = "export", value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long, value_parser = parse::code)]
    code: &'static StabilizerCode,
    /// Table construction policy; the code's customary one by default.
    #[arg(long, value_parser = parse::policy, conflicts_with = "table_file")]
    policy: Option<Policy>,
    /// Explicit table previously written by `table show --format json`.
    #[arg(long)]
    table_file: Option<PathBuf>,
}

#[derive(Args)]
struct EffectiveArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Physical Pauli channel `p1,p2,p3,p4`.
    #[arg(long, value_parser = parse::params, required_unless_present = "symbolic", conflicts_with = "symbolic")]
    params: Option<PauliParams>,
    /// Print the exact polynomials.
    #[arg(long)]
    symbolic: bool,
    #[command(flatten)]
    fmt: FormatArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// A code name, or `all`.
    #[arg(long)]
    code: String,
    #[arg(long, value_parser = parse::policy)]
    policy: Option<Policy>,
    /// Exit 0 when every mismatch could be removed by another minimum-weight table.
    #[arg(long)]
    allow_choice_dependent: bool,
    #[command(flatten)]
    fmt: FormatArgs,
}

#[derive(Args)]
struct ClassifyTuning {
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 64)]
    max_levels: usize,
}

impl ClassifyTuning {
    fn options(&self) -> ClassifyOptions {
        ClassifyOptions { tol: self.tol, max_levels: self.max_levels }
    }
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Physical Pauli channel `p1,p2,p3,p4`.
    #[arg(long, value_parser = parse::params, required_unless_present = "channel", conflicts_with = "channel")]
    params: Option<PauliParams>,
    /// Any channel; non-Pauli channels use the dense engine.
    #[arg(long)]
    channel: Option<ChannelSpec>,
    #[command(flatten)]
    tuning: ClassifyTuning,
    #[command(flatten)]
    fmt: FormatArgs,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Starting labels, e.g. `I,Y`; every supported label by default.
    #[arg(long, value_parser = parse::labels)]
    start: Option<Vec<Pauli>>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    fmt: FormatArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// `simplex:N`, `depol:LO:HI:STEPS` or `dominant:L:LO:HI:STEPS`.
    #[arg(long)]
    grid: String,
    #[command(flatten)]
    tuning: ClassifyTuning,
    #[command(flatten)]
    fmt: FormatArgs,
}

#[derive(Args)]
struct TomographyArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// `amp-damp:G`, `random:SEED`, `pauli:P1,P2,P3,P4` or `depol:F`.
    #[arg(long)]
    channel: ChannelSpec,
    #[command(flatten)]
    tuning: ClassifyTuning,
    #[command(flatten)]
    fmt: FormatArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Pre,
    Transversal,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    Pauli,
    Dense,
}

#[derive(Args)]
struct GateCommon {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, value_parser = parse::pauli, default_value = "X")]
    target: Pauli,
    /// Residual shape of the gate noise: `depol` or `shape:X,Y,Z`.
    #[arg(long, default_value = "depol")]
    gate_noise: GateNoise,
}

#[derive(Args)]
struct LogicalGateCmd {
    #[command(subcommand)]
    command: Option<GateCommand>,
    #[command(flatten)]
    run: GateRunArgs,
}

/// Flags of a single evaluation. Required ones are `Option` so that the
/// `sweep` subcommand can be parsed without them.
#[derive(Args)]
struct GateRunArgs {
    #[arg(long, value_parser = parse::code, required = true)]
    code: Option<&'static StabilizerCode>,
    #[arg(long, value_parser = parse::policy, conflicts_with = "table_file")]
    policy: Option<Policy>,
    #[arg(long)]
    table_file: Option<PathBuf>,
    #[arg(long, value_parser = parse::pauli, default_value = "X")]
    target: Pauli,
    /// Residual shape of the gate noise: `depol` or `shape:X,Y,Z`.
    #[arg(long, default_value = "depol")]
    gate_noise: GateNoise,
    /// Physical channel fidelity.
    #[arg(long, value_parser = parse::probability, required = true)]
    p: Option<f64>,
    /// Gate fidelity.
    #[arg(long, value_parser = parse::probability, required = true)]
    q: Option<f64>,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = Engine::Pauli)]
    engine: Engine,
    #[command(flatten)]
    fmt: FormatArgs,
}

#[derive(Subcommand)]
enum GateCommand {
    /// Both methods over a square `(p, q)` grid.
    Sweep {
        #[command(flatten)]
        common: GateCommon,
        /// `LO:HI:STEPS`, used for both `p` and `q`.
        #[arg(long, default_value = "0.9:1:6")]
        grid: SquareGrid,
        #[command(flatten)]
        fmt: FormatArgs,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
    /// Output was written; the comparison found mismatches.
    Mismatch,
}

impl From<purify_core::Error> for Failure {
    fn from(e: purify_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn format_of(fmt: &FormatArgs, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = fmt.format.unwrap_or(default);
    if !allowed.contains(&f) {
        return Err(Failure::Usage(format!("format {} is not available for this command", format!("{f:?}").to_lowercase())));
    }
    Ok(f)
}

fn emit(fmt: &FormatArgs, text: &str) -> Outcome {
    match &fmt.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

impl CodeArgs {
    fn table(&self) -> Result<CorrectionTable, Failure> {
        let policy = match &self.table_file {
            Some(path) => {
                let raw = fs::read_to_string(path).map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))?;
                let export: TableExport = serde_json::from_str(&raw).map_err(|e| Failure::Domain(format!("table file: {e}")))?;
                if export.code != self.code.name.as_str() {
                    return Err(Failure::Domain(format!("table file is for {}, not {}", export.code, self.code.name)));
                }
                explicit_from_export(&export)
            }
            None => self.policy.clone().unwrap_or_else(|| Policy::default_for(self.code.name)),
        };
        Ok(build_table(self.code, &policy)?)
    }

    fn polys(&self) -> Result<(CorrectionTable, ChannelPolys), Failure> {
        let table = self.table()?;
        let polys = effective_polys(self.code, &table)?;
        Ok((table, polys))
    }

    fn policy_for_gates(&self) -> Result<Policy, Failure> {
        Ok(self.table()?.policy().clone())
    }
}

fn label_name(l: Pauli) -> &'static str {
    match l {
        Pauli::I => "I",
        Pauli::X => "X",
        Pauli::Y => "Y",
        Pauli::Z => "Z",
    }
}

fn params_text(p: &PauliParams) -> String {
    p.probs.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", ")
}

fn codes(action: &CodesAction) -> Outcome {
    #[derive(Serialize)]
    struct Listing {
        name: CodeName,
        n: usize,
        generators: usize,
    }
    #[derive(Serialize)]
    struct Shown<'a> {
        name: CodeName,
        n: usize,
        generators: &'a [purify_core::PauliString],
        logical_x: purify_core::PauliString,
        logical_z: purify_core::PauliString,
        logical_zero: String,
        logical_one: String,
        validation: purify_core::ValidationReport,
    }
    match action {
        CodesAction::List(fmt) => {
            let rows: Vec<Listing> = CodeName::ALL
                .iter()
                .map(|c| {
                    let code = get_code(*c);
                    Listing { name: *c, n: code.n, generators: code.generators.len() }
                })
                .collect();
            let out = match format_of(fmt, Format::Text, &[Format::Text, Format::Json])? {
                Format::Json => json(&rows),
                _ => {
                    let mut s = format!("{:<12} {:>2} {:>10}\n", "name", "n", "generators");
                    for r in &rows {
                        s += &format!("{:<12} {:>2} {:>10}\n", r.name.as_str(), r.n, r.generators);
                    }
                    s
                }
            };
            emit(fmt, &out)
        }
        CodesAction::Show { name: code, fmt } => {
            let shown = Shown {
                name: code.name,
                n: code.n,
                generators: &code.generators,
                logical_x: code.logical_x,
                logical_z: code.logical_z,
                logical_zero: code.logical_zero.ket_expansion(),
                logical_one: code.logical_one.ket_expansion(),
                validation: validate_code(code),
            };
            let out = match format_of(fmt, Format::Text, &[Format::Text, Format::Json])? {
                Format::Json => json(&shown),
                _ => {
                    let mut s = format!("code {} (n = {})\ngenerators\n", code.name, code.n);
                    for (i, g) in code.generators.iter().enumerate() {
                        s += &format!("  g{} {}\n", i + 1, g);
                    }
                    s += &format!("logical_x {}\nlogical_z {}\n", code.logical_x, code.logical_z);
                    s += &format!("|0_L> = {}\n|1_L> = {}\nvalidation\n", shown.logical_zero, shown.logical_one);
                    for c in &shown.validation.checks {
                        s += &format!("  {} {} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                    }
                    s
                }
            };
            emit(fmt, &out)
        }
    }
}

fn table(action: &TableAction) -> Outcome {
    let TableAction::Show { code, fmt } = action;
    let t = code.table()?;
    let export = t.export(code.code);
    let out = match format_of(fmt, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => json(&export),
        _ => {
            let mut s = format!("code {} (table {})\n{:<10} {:<12} weight\n", export.code, export.policy, "syndrome", "recovery");
            for e in &export.entries {
                s += &format!("{:<10} {:<12} {}\n", e.syndrome, e.recovery.to_string(), e.weight);
            }
            s
        }
    };
    emit(fmt, &out)
}

fn effective(args: &EffectiveArgs) -> Outcome {
    let (_, polys) = args.code.polys()?;
    let format = format_of(&args.fmt, Format::Text, &[Format::Text, Format::Json])?;
    let out = match &args.params {
        None => match format {
            Format::Json => json(&polys),
            _ => {
                let mut s = format!("code {} (table {})\n", polys.code, polys.table_policy);
                for l in Pauli::ALL {
                    s += &format!("lambda_{0}{0} = {1}\n", label_name(l), polys.get(l));
                }
                s
            }
        },
        Some(p) => {
            #[derive(Serialize)]
            struct Evaluated<'a> {
                code: CodeName,
                table_policy: &'a str,
                input: &'a PauliParams,
                output: PauliParams,
            }
            let output = eval_polys(&polys, p);
            match format {
                Format::Json => json(&Evaluated { code: polys.code, table_policy: &polys.table_policy, input: p, output }),
                _ => format!("input  {}\noutput {}\n", params_text(p), params_text(&output)),
            }
        }
    };
    emit(&args.fmt, &out)
}

fn verify(args: &VerifyArgs) -> Outcome {
    let codes: Vec<CodeName> = if args.code == "all" {
        CodeName::ALL.to_vec()
    } else {
        vec![args.code.parse().map_err(|e: purify_core::Error| Failure::Usage(e.to_string()))?]
    };
    let format = format_of(&args.fmt, Format::Text, &[Format::Text, Format::Json])?;
    let mut comparisons = Vec::new();
    let mut failed = false;
    for name in codes {
        let code = get_code(name);
        let policy = args.policy.clone().unwrap_or_else(|| Policy::default_for(name));
        let polys = effective_polys(code, &build_table(code, &policy)?)?;
        let c = compare_printed(code, &polys)?;
        let hard = c.hard_mismatches().next().is_some() || c.checks.iter().any(|k| !k.passed && !k.choice_dependent);
        failed |= if args.allow_choice_dependent { hard } else { !c.all_match() };
        comparisons.push(c);
    }
    let out = match format {
        Format::Json => json(&comparisons),
        _ => {
            let mut s = String::new();
            for c in &comparisons {
                s += &c.to_string();
                let verdict = if c.all_match() {
                    "ALL MATCH"
                } else if c.hard_mismatches().next().is_none() && c.checks.iter().all(|k| k.passed || k.choice_dependent) {
                    "CHOICE-DEPENDENT MISMATCH"
                } else {
                    "MISMATCH"
                };
                s += &format!("  result {verdict}\n");
            }
            s
        }
    };
    emit(&args.fmt, &out)?;
    if failed {
        Err(Failure::Mismatch)
    } else {
        Ok(())
    }
}

#[derive(Serialize)]
struct Classified<'a> {
    code: CodeName,
    table_policy: &'a str,
    channel: String,
    engine: &'static str,
    #[serde(flatten)]
    class: &'a ChannelClass<f64>,
    dominant_by_level: Vec<Pauli>,
}

fn classified_text(c: &Classified) -> String {
    let mut s = format!("code {} (table {})\nchannel {} ({} engine)\n", c.code, c.table_policy, c.channel, c.engine);
    s += &format!("label {}\n", c.class.label);
    match c.class.levels_to_converge {
        Some(l) => s += &format!("converged at level {l}\n"),
        None => s += &format!("not purified after {} levels\n", c.class.trajectory.len() - 1),
    }
    if let Some((a, b)) = c.class.oscillation {
        s += &format!("oscillation ({a}, {b})\n");
    }
    let dominant: Vec<&str> = c.dominant_by_level.iter().map(|l| label_name(*l)).collect();
    s += &format!("dominant by level {}\n", dominant.join(" "));
    for (level, p) in c.class.trajectory.iter().enumerate() {
        s += &format!("  level {level:>2}  {}\n", params_text(p));
    }
    s
}

fn run_classification(code: &CodeArgs, channel: &ChannelSpec, opts: &ClassifyOptions) -> Result<(CorrectionTable, ChannelClass<f64>, &'static str), Failure> {
    let table = code.table()?;
    Ok(match channel.as_pauli() {
        Some(p) => {
            let polys = effective_polys(code.code, &table)?;
            let c = classify(&polys, &p, opts)?;
            (table, c, "polynomial")
        }
        None => {
            let c = classify_dense(code.code, &table, &channel.to_dense()?, opts)?;
            (table, c, "dense")
        }
    })
}

fn classify_cmd(args: &ClassifyArgs) -> Outcome {
    let channel = match (&args.params, &args.channel) {
        (Some(p), _) => ChannelSpec::Pauli(p.clone()),
        (None, Some(c)) => c.clone(),
        (None, None) => return Err(Failure::Usage("--params or --channel is required".into())),
    };
    let format = format_of(&args.fmt, Format::Text, &[Format::Text, Format::Json])?;
    let (table, class, engine) = run_classification(&args.code, &channel, &args.tuning.options())?;
    let out = Classified {
        code: args.code.code.name,
        table_policy: table.policy_name(),
        channel: channel.to_string(),
        engine,
        dominant_by_level: class.trajectory.iter().map(|p| p.dominant()).collect(),
        class: &class,
    };
    emit(&args.fmt, &if format == Format::Json { json(&out) } else { classified_text(&out) })
}

fn threshold(args: &ThresholdArgs) -> Outcome {
    let (_, polys) = args.code.polys()?;
    let opts = WorstCaseOptions { starts: args.start.clone(), support: None };
    let report = purification_threshold(&polys, &opts, args.tol)?;
    #[derive(Serialize)]
    struct Branch {
        start: Pauli,
        image: Pauli,
        threshold: f64,
        worst_case: String,
        coeffs: Vec<u64>,
    }
    #[derive(Serialize)]
    struct Report {
        code: CodeName,
        table_policy: String,
        threshold: f64,
        branches: Vec<Branch>,
    }
    let branches = report
        .branches
        .iter()
        .map(|b| {
            let w = worst_case_poly(&polys, &WorstCaseOptions::starts(&[b.start]))?;
            Ok(Branch { start: b.start, image: b.image, threshold: b.threshold, worst_case: w.to_string(), coeffs: w.coeffs })
        })
        .collect::<Result<Vec<_>, purify_core::Error>>()?;
    let r = Report { code: report.code, table_policy: polys.table_policy.clone(), threshold: report.threshold, branches };
    let out = match format_of(&args.fmt, Format::Text, &[Format::Text, Format::Json])? {
        Format::Json => json(&r),
        _ => {
            let mut s = format!("code {} (table {})\nthreshold {}\n", r.code, r.table_policy, num(r.threshold));
            for b in &r.branches {
                s += &format!("  branch {} -> {}  {}  f(p) = {}\n", b.start, b.image, num(b.threshold), b.worst_case);
            }
            s
        }
    };
    emit(&args.fmt, &out)
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Domain(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Domain(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn sweep_cmd(args: &SweepArgs) -> Outcome {
    let grid: GridSpec = args.grid.parse().map_err(|e: purify_core::Error| Failure::Usage(e.to_string()))?;
    let format = format_of(&args.fmt, Format::Csv, &[Format::Csv, Format::Json])?;
    let (_, polys) = args.code.polys()?;
    let rows = sweep(&polys, &grid, &args.tuning.options())?;
    let out = match format {
        Format::Json => json(&rows),
        _ => {
            let body = rows
                .iter()
                .map(|r| {
                    let mut v: Vec<String> = r.params.probs.iter().map(|x| num(*x)).collect();
                    v.push(r.label.to_string());
                    v.push(r.levels.map(|l| l.to_string()).unwrap_or_default());
                    v
                })
                .collect();
            csv_text(&["p1", "p2", "p3", "p4", "label", "levels"], body)?
        }
    };
    emit(&args.fmt, &out)
}

fn tomography_cmd(args: &TomographyArgs) -> Outcome {
    let format = format_of(&args.fmt, Format::Json, &[Format::Text, Format::Json])?;
    let physical = args.channel.to_dense()?;
    let table = args.code.table()?;
    let logical = effective_dense(args.code.code, &table, &physical)?;
    let (_, class, engine) = run_classification(&args.code, &args.channel, &args.tuning.options())?;
    #[derive(Serialize)]
    struct Report {
        code: CodeName,
        table_policy: &'static str,
        channel: String,
        physical: Tomography,
        effective: Tomography,
        classification: Classification,
    }
    #[derive(Serialize)]
    struct Classification {
        engine: &'static str,
        label: purify_core::flow::ChannelType,
        levels_to_converge: Option<usize>,
    }
    let r = Report {
        code: args.code.code.name,
        table_policy: table.policy_name(),
        channel: args.channel.to_string(),
        physical: tomography(&physical)?,
        effective: tomography(&logical)?,
        classification: Classification { engine, label: class.label, levels_to_converge: class.levels_to_converge },
    };
    let out = match format {
        Format::Json => json(&r),
        _ => {
            let mut s = format!("code {} (table {})\nchannel {}\n", r.code, r.table_policy, r.channel);
            for (name, t) in [("physical", &r.physical), ("effective", &r.effective)] {
                s += &format!("{name} ptm\n");
                for row in &t.ptm {
                    s += &format!("  {}\n", row.iter().map(|x| format!("{:>20}", num(*x))).collect::<String>());
                }
                s += &format!("{name} twirl {}\n", params_text(&t.twirled));
            }
            s += &format!("label {}\n", r.classification.label);
            s
        }
    };
    emit(&args.fmt, &out)
}

fn gates_for(common: &GateCommon) -> Result<LogicalGates, Failure> {
    let policy = common.code.policy_for_gates()?;
    Ok(LogicalGates::new(common.code.code, &policy, common.gate_noise)?)
}

fn logical_gate(cmd: &LogicalGateCmd) -> Outcome {
    if let Some(GateCommand::Sweep { common, grid, fmt }) = &cmd.command {
        let format = format_of(fmt, Format::Csv, &[Format::Csv, Format::Json])?;
        let g = gates_for(common)?;
        let points = square_grid(&linspace(grid.lo, grid.hi, grid.steps));
        let rows = g.compare_methods(common.target, &points)?;
        let out = match format {
            Format::Json => {
                let tagged: Vec<serde_json::Value> = rows
                    .iter()
                    .map(|r| {
                        let mut v = serde_json::to_value(r).expect("serializable row");
                        v["transversal_sign"] = r.transversal_sign(1e-12).into();
                        v
                    })
                    .collect();
                json(&tagged)
            }
            _ => {
                let body = rows
                    .iter()
                    .map(|r| {
                        vec![
                            num(r.p),
                            num(r.q),
                            num(r.baseline),
                            num(r.pre_encoding),
                            num(r.transversal),
                            num(r.reference),
                            r.winner.to_string(),
                            r.transversal_sign(1e-12).to_string(),
                        ]
                    })
                    .collect();
                csv_text(&["p", "q", "baseline", "pre_encoding", "transversal", "reference", "winner", "transversal_sign"], body)?
            }
        };
        return emit(fmt, &out);
    }
    let a = &cmd.run;
    let missing = || Failure::Usage("--code, --p and --q are required".into());
    let common = GateCommon {
        code: CodeArgs { code: a.code.ok_or_else(missing)?, policy: a.policy.clone(), table_file: a.table_file.clone() },
        target: a.target,
        gate_noise: a.gate_noise,
    };
    let (p, q) = (a.p.ok_or_else(missing)?, a.q.ok_or_else(missing)?);
    let format = format_of(&a.fmt, Format::Json, &[Format::Text, Format::Json])?;
    let g = gates_for(&common)?;
    let t = a.target;
    let mut results: Vec<LogicalGateResult> = Vec::new();
    if matches!(a.method, MethodArg::Pre | MethodArg::Both) {
        results.push(match a.engine {
            Engine::Pauli => g.pre_encoding(t, p, q)?,
            Engine::Dense => g.pre_encoding_dense(t, p, q)?,
        });
    }
    if matches!(a.method, MethodArg::Transversal | MethodArg::Both) {
        results.push(match a.engine {
            Engine::Pauli => g.transversal(t, p, q)?,
            Engine::Dense => g.transversal_dense(t, p, q, Placement::AfterEncoding)?,
        });
    }
    #[derive(Serialize)]
    struct Report {
        code: CodeName,
        baseline: f64,
        results: Vec<LogicalGateResult>,
    }
    let r = Report { code: g.code().name, baseline: g.baseline_f(p)?, results };
    let out = match format {
        Format::Json => json(&r),
        _ => {
            let mut s = format!("code {}  F(p) = {}\n", r.code, num(r.baseline));
            for x in &r.results {
                s += &format!("  {:<13} fidelity {}  q*F(p) {}\n", x.method.to_string(), num(x.fidelity), num(x.reference));
            }
            s
        }
    };
    emit(&a.fmt, &out)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Codes { action } => codes(action),
        Command::Table { action } => table(action),
        Command::Effective(a) => effective(a),
        Command::VerifyPaper(a) => verify(a),
        Command::Classify(a) => classify_cmd(a),
        Command::Threshold(a) => threshold(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Tomography(a) => tomography_cmd(a),
        Command::LogicalGate(a) => logical_gate(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(3),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
