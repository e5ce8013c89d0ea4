//! The `quadstab` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use quadstab_core::dynamics::{occupation_series, uniform_times, GaussianState};
use quadstab_core::normal_forms::{build_normal_form, geometric_split, JordanType, JordanTypeSpec};
use quadstab_core::optomech2::{
    classify_two_mode, k_b, k_r, stability_condition, steady_states, two_mode_verdict, PumpParams, TwoModeParams,
};
use quadstab_core::optomech3::{cubic_classify, reduce_equal_detuning, three_mode_eom, Reduction, ThreeModeParams};
use quadstab_core::spectral::{is_dynamically_stable, EigenKind, StabilityVerdict};
use quadstab_core::{eig, Complex64, ModeKind};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::format::{complex, fmt_float, matrix, num, to_json};
use crate::grid::Range;
use crate::io::{model_to_csv, read_model, write_model, ModelFormat};
use crate::sweep::{three_mode_sweep, two_mode_sweep};

/// Stability analysis of quadratic bosonic Hamiltonians.
///
/// Frequencies and couplings share one unit; with `--omega 1` (the default)
/// every value is in units of the mechanical frequency Ω.
#[derive(Debug, Parser)]
#[command(name = "quadstab", version, allow_negative_numbers = true)]
pub struct Cli {
    /// Output format; sweeps and evolve default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for sweeps (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a model file (JSON or CSV matrix format).
    Classify {
        #[arg(long)]
        model: PathBuf,
    },
    /// Two-mode optomechanics.
    #[command(subcommand)]
    Om2(Om2),
    /// Three-mode optomechanics.
    #[command(subcommand)]
    Om3(Om3),
    /// Build a Jordan-type normal form and its geometric split.
    NormalForm {
        /// I..VI (or 1..6).
        #[arg(long = "type")]
        type_id: JordanType,
        #[arg(long)]
        chain: usize,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda_im: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Also write the model to this file (.csv for CSV, else JSON).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Occupation numbers from the vacuum over `[0, t_max]`.
    Evolve {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Critical couplings for a detuning.
    Thresholds {
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
    },
}

#[derive(Debug, Args)]
pub struct TwoModeArgs {
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Coupling modulus |κ|.
    #[arg(long)]
    pub kappa: f64,
    /// Coupling phase in radians.
    #[arg(long, default_value_t = 0.0)]
    pub kappa_phase: f64,
}

#[derive(Debug, Subcommand)]
pub enum Om2 {
    /// Case label, critical couplings and spectral verdict.
    Classify(TwoModeArgs),
    /// Case map over a (Δ, |κ|) grid.
    Sweep {
        /// `start:stop:count`, endpoints included
        #[arg(long, allow_hyphen_values = true)]
        delta_range: Range,
        #[arg(long, allow_hyphen_values = true)]
        kappa_range: Range,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 0.0)]
        kappa_phase: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Steady-state branches of the driven cavity.
    Steady {
        #[arg(long)]
        delta_prime: f64,
        #[arg(long)]
        kappa0: f64,
        #[arg(long)]
        kappa_in: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Om3 {
    /// Closed-form classification, plus the two-mode reduction when |Δ₁| = |Δ₂|.
    Classify {
        #[arg(long)]
        delta1: f64,
        #[arg(long)]
        delta2: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long)]
        kappa1: f64,
        #[arg(long)]
        kappa2: f64,
        #[arg(long, default_value_t = 0.0)]
        phase1: f64,
        #[arg(long, default_value_t = 0.0)]
        phase2: f64,
    },
    /// Stability over a (|κ₁|, |κ₂|) grid.
    Sweep {
        #[arg(long)]
        delta1: f64,
        #[arg(long)]
        delta2: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// |κ₁| grid as `start:stop:count`
        #[arg(long, allow_hyphen_values = true)]
        k1: Range,
        #[arg(long, allow_hyphen_values = true)]
        k2: Range,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Text produced by a command, written to stdout or `--out`.
struct Output {
    text: String,
    path: Option<PathBuf>,
}

impl Output {
    fn stdout(text: String) -> Self {
        Output { text, path: None }
    }
}

/// Run with `args` (including the program name); returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = negative_numbers(Cli::command()).try_get_matches_from(args).and_then(|m| Cli::from_arg_matches(&m));
    let cli = match parsed {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli).and_then(|o| emit(o, out)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "quadstab: {e}");
            e.exit_code()
        }
    }
}

// negative values such as `--delta -1.5` must parse at every level
fn negative_numbers(cmd: clap::Command) -> clap::Command {
    cmd.allow_negative_numbers(true).mut_subcommands(negative_numbers)
}

fn emit(o: Output, out: &mut dyn Write) -> Result<(), CliError> {
    match o.path {
        Some(p) => fs::write(&p, o.text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(o.text.as_bytes())?),
    }
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    let table_default = |f: Option<Format>| f.unwrap_or(Format::Csv);
    let json_default = |f: Option<Format>| f.unwrap_or(Format::Json);
    match &cli.command {
        Command::Classify { model } => classify_model(model, json_default(cli.format)),
        Command::Om2(Om2::Classify(a)) => om2_classify(a, json_default(cli.format)),
        Command::Om2(Om2::Sweep { delta_range, kappa_range, omega, kappa_phase, out }) => {
            let rows = two_mode_sweep(&delta_range.values(), &kappa_range.values(), *omega, *kappa_phase, cli.jobs)?;
            let header = ["delta", "kappa_abs", "case_label", "stable", "lambda_re_max"];
            let cells = rows
                .iter()
                .map(|r| {
                    vec![
                        Cell::F(r.delta),
                        Cell::F(r.kappa_abs),
                        Cell::S(r.label.as_char().to_string()),
                        Cell::B(r.stable),
                        Cell::F(r.lambda_re_max),
                    ]
                })
                .collect();
            Ok(Output { text: table(&header, cells, table_default(cli.format)), path: out.clone() })
        }
        Command::Om2(Om2::Steady { delta_prime, kappa0, kappa_in, omega }) => {
            let pump = PumpParams {
                delta_prime: *delta_prime,
                omega: *omega,
                kappa0: *kappa0,
                kappa_in: Complex64::new(*kappa_in, 0.0),
            };
            let s = steady_states(&pump)?;
            let header = ["delta", "alpha_re", "alpha_im", "beta_re", "beta_im", "kappa_re", "kappa_im", "stable", "mode_kinds"];
            match json_default(cli.format) {
                Format::Json => {
                    let list: Vec<Value> = s
                        .branches
                        .iter()
                        .map(|b| {
                            json!({
                                "delta": num(b.delta),
                                "alpha_s": complex(b.alpha_s),
                                "beta_s": complex(b.beta_s),
                                "kappa": complex(b.kappa),
                                "stable": b.verdict.stable,
                                "mode_kinds": kinds(&b.verdict.mode_kinds),
                            })
                        })
                        .collect();
                    Ok(Output::stdout(to_json(&Value::Array(list))))
                }
                Format::Csv => {
                    let cells = s
                        .branches
                        .iter()
                        .map(|b| {
                            vec![
                                Cell::F(b.delta),
                                Cell::F(b.alpha_s.re),
                                Cell::F(b.alpha_s.im),
                                Cell::F(b.beta_s.re),
                                Cell::F(b.beta_s.im),
                                Cell::F(b.kappa.re),
                                Cell::F(b.kappa.im),
                                Cell::B(b.verdict.stable),
                                Cell::S(kind_list(&b.verdict.mode_kinds)),
                            ]
                        })
                        .collect();
                    Ok(Output::stdout(table(&header, cells, Format::Csv)))
                }
            }
        }
        Command::Om3(Om3::Classify { delta1, delta2, omega, kappa1, kappa2, phase1, phase2 }) => {
            let p = ThreeModeParams::new(
                *delta1,
                *delta2,
                *omega,
                Complex64::from_polar(*kappa1, *phase1),
                Complex64::from_polar(*kappa2, *phase2),
            )?;
            om3_classify(&p, json_default(cli.format))
        }
        Command::Om3(Om3::Sweep { delta1, delta2, omega, k1, k2, out }) => {
            let grid = three_mode_sweep(*delta1, *delta2, *omega, &k1.values(), &k2.values(), cli.jobs)?;
            let header = ["kappa1_abs", "kappa2_abs", "case_id", "stable", "max_re_lambda"];
            let cells = grid
                .points
                .iter()
                .map(|p| vec![Cell::F(p.k1), Cell::F(p.k2), Cell::I(p.case_id.into()), Cell::B(p.stable), Cell::F(p.max_re)])
                .collect();
            Ok(Output { text: table(&header, cells, table_default(cli.format)), path: out.clone() })
        }
        Command::NormalForm { type_id, chain, lambda, lambda_im, sigma, out } => {
            let spec = JordanTypeSpec::new(*type_id, *chain, Complex64::new(*lambda, *lambda_im), *sigma)?;
            let model = build_normal_form(&spec)?;
            let split = geometric_split(&spec)?;
            if let Some(path) = out {
                fs::write(path, write_model(&model, ModelFormat::from_path(path)))
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            }
            let text = match json_default(cli.format) {
                Format::Csv => model_to_csv(&model),
                Format::Json => to_json(&json!({
                    "type": type_id.name(),
                    "chain": chain,
                    "n_modes": model.n_modes(),
                    "V": matrix(model.v()),
                    "W_G": matrix(&split.w_g),
                    "W_I": matrix(&split.w_i),
                    "S": matrix(split.s.matrix()),
                    "mode_kinds": kinds(&split.mode_kinds),
                    "residuals": {
                        "symplectic": num(split.residuals.symplectic),
                        "congruence": num(split.residuals.congruence),
                        "commutation": num(split.residuals.commutation),
                        "spectrum": num(split.residuals.spectrum),
                    },
                })),
            };
            Ok(Output::stdout(text))
        }
        Command::Evolve { model, t_max, steps, out } => {
            if !t_max.is_finite() || *t_max < 0.0 {
                return Err(CliError::Input("t-max must be finite and nonnegative".into()));
            }
            if *steps == 0 {
                return Err(CliError::Input("steps must be at least 1".into()));
            }
            let m = read_model(model)?;
            let series = occupation_series(&m, &uniform_times(*t_max, *steps), &GaussianState::vacuum(m.n_modes()))?;
            let names: Vec<String> =
                std::iter::once("t".to_string()).chain((1..=m.n_modes()).map(|j| format!("n_{j}"))).collect();
            let header: Vec<&str> = names.iter().map(String::as_str).collect();
            let cells = series
                .times
                .iter()
                .zip(&series.rows)
                .map(|(t, row)| std::iter::once(Cell::F(*t)).chain(row.iter().map(|&n| Cell::F(n))).collect())
                .collect();
            Ok(Output { text: table(&header, cells, table_default(cli.format)), path: out.clone() })
        }
        Command::Thresholds { delta, omega } => {
            TwoModeParams::new(*delta, *omega, Complex64::new(0.0, 0.0))?;
            let kr = (*delta > 0.0).then(|| k_r(*delta, *omega));
            let kb = if *delta < 0.0 { k_b(*delta, *omega) } else { None };
            let sq = (delta + omega).abs() / 2.0;
            let regime = if *delta > 0.0 {
                "red"
            } else if *delta < 0.0 {
                "blue"
            } else {
                "resonant"
            };
            let opt = |x: Option<f64>| x.map_or(Value::Null, num);
            match json_default(cli.format) {
                Format::Json => Ok(Output::stdout(to_json(&json!({
                    "delta": num(*delta),
                    "omega": num(*omega),
                    "regime": regime,
                    "K_R": opt(kr),
                    "K_B": opt(kb),
                    "squeezing_threshold": num(sq),
                })))),
                Format::Csv => {
                    let o = |x: Option<f64>| x.map_or(Cell::S(String::new()), Cell::F);
                    let header = ["delta", "omega", "regime", "K_R", "K_B", "squeezing_threshold"];
                    let row = vec![Cell::F(*delta), Cell::F(*omega), Cell::S(regime.into()), o(kr), o(kb), Cell::F(sq)];
                    Ok(Output::stdout(table(&header, vec![row], Format::Csv)))
                }
            }
        }
    }
}

enum Cell {
    F(f64),
    I(i64),
    B(bool),
    S(String),
}

impl Cell {
    fn json(&self) -> Value {
        match self {
            Cell::F(x) => num(*x),
            Cell::I(i) => json!(i),
            Cell::B(b) => json!(b),
            Cell::S(s) => json!(s),
        }
    }

    fn text(&self) -> String {
        match self {
            Cell::F(x) => fmt_float(*x),
            Cell::I(i) => i.to_string(),
            Cell::B(b) => b.to_string(),
            Cell::S(s) => s.clone(),
        }
    }
}

fn table(header: &[&str], rows: Vec<Vec<Cell>>, format: Format) -> String {
    match format {
        Format::Json => {
            let list = rows
                .iter()
                .map(|r| Value::Object(header.iter().zip(r).map(|(h, c)| (h.to_string(), c.json())).collect()))
                .collect();
            to_json(&Value::Array(list))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header).expect("in-memory write");
            for r in &rows {
                w.write_record(r.iter().map(Cell::text)).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
        }
    }
}

fn kinds(k: &[ModeKind]) -> Value {
    Value::Array(k.iter().map(|m| json!(m.name())).collect())
}

fn kind_list(k: &[ModeKind]) -> String {
    k.iter().map(|m| m.name()).collect::<Vec<_>>().join(";")
}

fn eigen_kind(k: EigenKind) -> &'static str {
    match k {
        EigenKind::RealPair => "real_pair",
        EigenKind::ImaginaryPair => "imaginary_pair",
        EigenKind::ComplexQuadruplet => "complex_quadruplet",
        EigenKind::Zero => "zero",
    }
}

fn verdict_json(v: &StabilityVerdict) -> Value {
    json!({
        "stable": v.stable,
        "mode_kinds": kinds(&v.mode_kinds),
        "classes": v.classes.iter().map(|c| json!({
            "kind": eigen_kind(c.kind),
            "value": complex(c.value),
            "algebraic_multiplicity": c.algebraic_multiplicity,
            "geometric_multiplicity": c.geometric_multiplicity,
        })).collect::<Vec<_>>(),
        "reason": v.reason,
    })
}

fn verdict_csv(v: &StabilityVerdict) -> String {
    let row = vec![Cell::B(v.stable), Cell::S(kind_list(&v.mode_kinds)), Cell::S(v.reason.clone())];
    table(&["stable", "mode_kinds", "reason"], vec![row], Format::Csv)
}

fn classify_model(path: &Path, format: Format) -> Result<Output, CliError> {
    let model = read_model(path)?;
    let verdict = is_dynamically_stable(&model.eom()?)?;
    Ok(Output::stdout(match format {
        Format::Json => {
            let mut v = verdict_json(&verdict);
            v.as_object_mut().expect("object").insert("n_modes".into(), json!(model.n_modes()));
            to_json(&v)
        }
        Format::Csv => verdict_csv(&verdict),
    }))
}

fn om2_classify(a: &TwoModeArgs, format: Format) -> Result<Output, CliError> {
    let p = TwoModeParams::new(a.delta, a.omega, Complex64::from_polar(a.kappa, a.kappa_phase))?;
    let case = classify_two_mode(&p)?;
    let verdict = two_mode_verdict(&p)?;
    let cond = stability_condition(&p);
    Ok(Output::stdout(match format {
        Format::Json => to_json(&json!({
            "case": case.label.as_char().to_string(),
            "stable": case.stable,
            "mode_kinds": kinds(&case.mode_kinds),
            "K_R": num(case.k_r),
            "K_B": case.k_b.map_or(Value::Null, num),
            "stability_condition": cond,
            "spectral": verdict_json(&verdict),
        })),
        Format::Csv => {
            let row = vec![
                Cell::S(case.label.as_char().to_string()),
                Cell::B(case.stable),
                Cell::S(kind_list(&case.mode_kinds)),
                Cell::F(case.k_r),
                case.k_b.map_or(Cell::S(String::new()), Cell::F),
                Cell::B(cond),
                Cell::B(verdict.stable),
            ];
            table(&["case", "stable", "mode_kinds", "K_R", "K_B", "stability_condition", "spectral_stable"], vec![row], Format::Csv)
        }
    }))
}

fn om3_classify(p: &ThreeModeParams, format: Format) -> Result<Output, CliError> {
    let cls = cubic_classify(p)?;
    let ev = eig::eigenvalues(&three_mode_eom(p)?)?;
    let eps = quadstab_core::optomech2::eps_case(p.omega);
    let applies = (p.delta1.abs() - p.delta2.abs()).abs() <= eps && (p.kappa1.norm() > 0.0 || p.kappa2.norm() > 0.0);
    let reduction = if applies {
        match reduce_equal_detuning(p)? {
            Reduction::Reduced(r) => json!({
                "s": r.s,
                "epsilon": r.epsilon,
                "kappa_s": num(r.kappa_s),
                "spectator_frequency": num(r.spectator_frequency),
                "block_case": r.case.label.as_char().to_string(),
                "condition": r.condition,
                "stable": r.stable,
            }),
            Reduction::Degenerate(_) => json!({"degenerate": true}),
        }
    } else {
        Value::Null
    };
    Ok(Output::stdout(match format {
        Format::Json => to_json(&json!({
            "case_id": cls.case_id,
            "stable": cls.stable,
            "mode_kinds": kinds(&cls.mode_kinds),
            "eta1": num(cls.eta1),
            "eta2": num(cls.eta2),
            "mu": num(cls.mu),
            "nu": num(cls.nu),
            "c": cls.c.map_or(Value::Null, |c| Value::Array(c.iter().map(|&x| num(x)).collect())),
            "lambdas": cls.lambdas.iter().map(|&z| complex(z)).collect::<Vec<_>>(),
            "eigenvalues": ev.iter().map(|&z| complex(z)).collect::<Vec<_>>(),
            "spectral_stable": cls.spectral_stable,
            "reduction": reduction,
        })),
        Format::Csv => {
            let row = vec![
                Cell::I(cls.case_id.into()),
                Cell::B(cls.stable),
                Cell::S(kind_list(&cls.mode_kinds)),
                Cell::F(cls.mu),
                Cell::F(cls.nu),
                Cell::B(cls.spectral_stable),
            ];
            table(&["case_id", "stable", "mode_kinds", "mu", "nu", "spectral_stable"], vec![row], Format::Csv)
        }
    }))
}
