//! Argument parsing, `key = value` config files and resolution into a
//! validated [`RunConfig`].

use std::f64::consts::{FRAC_PI_4, PI};
use std::fs;
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use esdlab::analysis::{time_grid, ConcurrenceVariant, DarkPeriodOptions, ModelSpec, Source, SweepAxis, SweepSpec};
use esdlab::entanglement::InteractionNormalization;
use esdlab::models::{DephasingParams, Family, InitialStateFamily, IsingParams, TavisCummingsParams, TcClosedForm};
use esdlab::oracle::TruncationPolicy;
use esdlab::presets::{Preset, DEFAULT_RESOLUTION};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "esdlab",
    version,
    about = "Two-qubit entanglement dynamics and sudden-death analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample one trajectory and write it as CSV.
    Simulate(SimulateArgs),
    /// Evaluate concurrence over a (parameter, time) grid and write JSON.
    Sweep(SweepArgs),
    /// Report dark periods and concurrence/energy extrema of one trajectory.
    Esd(EsdArgs),
    /// Compare closed-form and brute-force trajectories.
    Compare(CompareArgs),
    /// Find the smallest converged Fock cutoff for a time range.
    Certify(CertifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Tc,
    Dephasing,
    Ising,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    #[value(name = "ee_gg")]
    EeGg,
    #[value(name = "eg_ge")]
    EgGe,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClosedFormArg {
    Exact,
    Printed,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum HiNormArg {
    Plotted,
    Hamiltonian,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Analytic,
    Oracle,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Theta,
    #[value(name = "Gamma")]
    Gamma,
    R,
    #[value(name = "J")]
    J,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Wootters,
    #[value(name = "paper_cutoff")]
    PaperCutoff,
}

#[derive(Args, Debug, Default)]
pub struct ModelArgs {
    /// Read further options from a file of `key = value` lines.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Initial-state family.
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Purity parameter in [0, 1].
    #[arg(long)]
    pub r: Option<f64>,
    /// Mixing angle in radians.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Qubit splitting.
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Field, bath-mode or Ising frequency.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Qubit-field coupling (tc) or Ising coupling.
    #[arg(long)]
    pub g: Option<f64>,
    /// Qubit-qubit exchange of the dephasing model.
    #[arg(long = "Omega")]
    pub exchange: Option<f64>,
    /// Bath coupling of the dephasing model.
    #[arg(long = "Gamma")]
    pub gamma: Option<f64>,
    /// Rescaled Ising coupling g/(2 omega).
    #[arg(long = "J")]
    pub j: Option<f64>,
    /// Closed form used for the tc analytic source.
    #[arg(long, value_enum)]
    pub closed_form: Option<ClosedFormArg>,
    /// Prefactor convention for the Ising interaction energy.
    #[arg(long, value_enum)]
    pub hi_norm: Option<HiNormArg>,
}

#[derive(Args, Debug, Default)]
pub struct TimeArgs {
    /// End of the rescaled time axis (gt or omega t).
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of samples, both endpoints included.
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Args, Debug, Default)]
pub struct PolicyArgs {
    #[arg(long)]
    pub initial_cutoff: Option<usize>,
    #[arg(long)]
    pub growth_step: Option<usize>,
    #[arg(long)]
    pub max_cutoff: Option<usize>,
    /// Convergence tolerance between successive cutoffs.
    #[arg(long)]
    pub cutoff_tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, value_enum)]
    pub source: Option<SourceArg>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Named regime; fixes every physical parameter.
    #[arg(long)]
    pub preset: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    #[arg(long, value_enum)]
    pub y_axis: Option<AxisArg>,
    #[arg(long)]
    pub y_min: Option<f64>,
    #[arg(long)]
    pub y_max: Option<f64>,
    #[arg(long)]
    pub y_steps: Option<usize>,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    #[arg(long)]
    pub zero_tol: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EsdArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, value_enum)]
    pub source: Option<SourceArg>,
    #[arg(long)]
    pub zero_tol: Option<f64>,
    /// Minimum dark run length in samples.
    #[arg(long)]
    pub min_width: Option<usize>,
    /// Extrema pairing window in rescaled time.
    #[arg(long)]
    pub window: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
    /// Pass threshold for both reported deviations.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

/// Time axis of a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeSpec {
    pub t_max: f64,
    pub steps: usize,
}

impl TimeSpec {
    pub fn grid(&self) -> Vec<f64> {
        time_grid(self.t_max, self.steps)
    }
}

/// A fully validated command.
#[derive(Clone, Debug)]
pub enum RunConfig {
    Simulate {
        model: ModelSpec,
        time: TimeSpec,
        sources: Vec<Source>,
        policy: Option<TruncationPolicy>,
        output: Option<PathBuf>,
    },
    Sweep {
        spec: SweepSpec,
        preset: Option<Preset>,
        output: Option<PathBuf>,
    },
    Esd {
        model: ModelSpec,
        time: TimeSpec,
        source: Source,
        policy: Option<TruncationPolicy>,
        dark: DarkPeriodOptions,
        window: f64,
        output: Option<PathBuf>,
    },
    Compare {
        model: ModelSpec,
        time: TimeSpec,
        policy: Option<TruncationPolicy>,
        tol: f64,
        output: Option<PathBuf>,
    },
    Certify {
        model: ModelSpec,
        time: TimeSpec,
        policy: Option<TruncationPolicy>,
    },
}

pub const DEFAULT_STEPS: usize = 301;
pub const DEFAULT_COMPARE_TOL: f64 = 1e-8;
pub const DEFAULT_WINDOW: f64 = 0.2;

/// Parses `argv` (program name first). Options from `--config` fill in
/// whatever the command line leaves unset.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let matches = Cli::command().try_get_matches_from(&argv)?;
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let mut full = argv.clone();
    if let Some(path) = sub.get_one::<PathBuf>("config") {
        let command = Cli::command();
        let subcommand = command.find_subcommand(name).expect("known subcommand");
        for (key, value) in read_config_file(path)? {
            let arg = subcommand
                .get_arguments()
                .find(|a| a.get_long() == Some(key.as_str()) && key != "config")
                .ok_or_else(|| CliError::Usage(format!("{}: unknown key '{key}'", path.display())))?;
            if sub.value_source(arg.get_id().as_str()) != Some(ValueSource::CommandLine) {
                full.push(format!("--{key}"));
                full.push(value);
            }
        }
    }
    let cli = Cli::try_parse_from(&full)?;
    resolve(cli.command)
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut out: Vec<(String, String)> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{}:{}: expected `key = value`", path.display(), n + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(CliError::Usage(format!(
                "{}:{}: empty key or value",
                path.display(),
                n + 1
            )));
        }
        if out.iter().any(|(k, _)| k == key) {
            return Err(CliError::Usage(format!(
                "{}:{}: duplicate key '{key}'",
                path.display(),
                n + 1
            )));
        }
        out.push((key.to_string(), value.to_string()));
    }
    Ok(out)
}

fn resolve(command: Command) -> Result<RunConfig, CliError> {
    Ok(match command {
        Command::Simulate(a) => {
            let model = build_model(&a.model)?;
            let sources = match a.source.unwrap_or(SourceArg::Analytic) {
                SourceArg::Analytic => vec![Source::Analytic],
                SourceArg::Oracle => vec![Source::Oracle],
                SourceArg::Both if a.output.is_none() => {
                    return Err(CliError::Usage("--source both needs --output".into()))
                }
                SourceArg::Both => vec![Source::Analytic, Source::Oracle],
            };
            RunConfig::Simulate {
                time: time_spec(&a.time, &model)?,
                policy: policy(&a.policy, &model)?,
                model,
                sources,
                output: a.output,
            }
        }
        Command::Sweep(a) => resolve_sweep(a)?,
        Command::Esd(a) => {
            let model = build_model(&a.model)?;
            let source = match a.source.unwrap_or(SourceArg::Analytic) {
                SourceArg::Analytic => Source::Analytic,
                SourceArg::Oracle => Source::Oracle,
                SourceArg::Both => return Err(CliError::Usage("esd takes a single source".into())),
            };
            let mut dark = DarkPeriodOptions::default();
            if let Some(z) = a.zero_tol {
                dark.zero_tol = positive("zero-tol", z)?;
            }
            if let Some(w) = a.min_width {
                if w < 2 {
                    return Err(CliError::Usage("--min-width must be at least 2 samples".into()));
                }
                dark.min_width = w;
            }
            RunConfig::Esd {
                time: time_spec(&a.time, &model)?,
                policy: policy(&a.policy, &model)?,
                model,
                source,
                dark,
                window: positive("window", a.window.unwrap_or(DEFAULT_WINDOW))?,
                output: a.output,
            }
        }
        Command::Compare(a) => {
            let model = build_model(&a.model)?;
            RunConfig::Compare {
                time: time_spec(&a.time, &model)?,
                policy: policy(&a.policy, &model)?,
                model,
                tol: positive("tol", a.tol.unwrap_or(DEFAULT_COMPARE_TOL))?,
                output: a.output,
            }
        }
        Command::Certify(a) => {
            let model = build_model(&a.model)?;
            RunConfig::Certify {
                time: time_spec(&a.time, &model)?,
                policy: policy(&a.policy, &model)?,
                model,
            }
        }
    })
}

fn resolve_sweep(a: SweepArgs) -> Result<RunConfig, CliError> {
    let variant = match a.variant.unwrap_or(VariantArg::Wootters) {
        VariantArg::Wootters => ConcurrenceVariant::Wootters,
        VariantArg::PaperCutoff => ConcurrenceVariant::PaperCutoff,
    };
    let zero_tol = positive("zero-tol", a.zero_tol.unwrap_or(1e-9))?;
    let x_steps = a.time.steps.unwrap_or(DEFAULT_RESOLUTION);
    let y_steps = a.y_steps.unwrap_or(DEFAULT_RESOLUTION);
    if x_steps == 0 || y_steps == 0 {
        return Err(CliError::Usage("sweep axes need at least one point".into()));
    }
    if let Some(name) = &a.preset {
        let preset = Preset::from_name(name).map_err(|e| CliError::Usage(e.to_string()))?;
        let fixed = [
            ("model", a.model.model.is_some()),
            ("family", a.model.family.is_some()),
            ("r", a.model.r.is_some()),
            ("theta", a.model.theta.is_some()),
            ("omega0", a.model.omega0.is_some()),
            ("omega", a.model.omega.is_some()),
            ("g", a.model.g.is_some()),
            ("Omega", a.model.exchange.is_some()),
            ("Gamma", a.model.gamma.is_some()),
            ("J", a.model.j.is_some()),
            ("hi-norm", a.model.hi_norm.is_some()),
            ("t-max", a.time.t_max.is_some()),
            ("y-axis", a.y_axis.is_some()),
            ("y-min", a.y_min.is_some()),
            ("y-max", a.y_max.is_some()),
        ];
        if let Some((key, _)) = fixed.iter().find(|(_, set)| *set) {
            return Err(CliError::Usage(format!(
                "--{key} cannot be combined with --preset {name}"
            )));
        }
        let mut spec = preset.sweep_spec(x_steps, y_steps, variant);
        spec.zero_tol = zero_tol;
        if let (Some(form), ModelSpec::TavisCummings { closed_form, .. }) = (a.model.closed_form, &mut spec.base) {
            *closed_form = closed_form_of(form);
        } else if a.model.closed_form.is_some() {
            return Err(CliError::Usage("--closed-form applies to tc presets only".into()));
        }
        return Ok(RunConfig::Sweep {
            spec,
            preset: Some(preset),
            output: a.output,
        });
    }
    let base = build_model(&a.model)?;
    let axis = match a
        .y_axis
        .ok_or_else(|| CliError::Usage("sweep needs --preset or --y-axis".into()))?
    {
        AxisArg::Theta => SweepAxis::Theta,
        AxisArg::Gamma => SweepAxis::GammaOverOmega,
        AxisArg::R => SweepAxis::Purity,
        AxisArg::J => SweepAxis::RescaledCoupling,
    };
    let (y_min, y_max) = match (a.y_min, a.y_max) {
        (Some(lo), Some(hi)) if lo <= hi => (lo, hi),
        (Some(_), Some(_)) => return Err(CliError::Usage("--y-min must not exceed --y-max".into())),
        _ => return Err(CliError::Usage("sweep needs --y-min and --y-max".into())),
    };
    let y_values = if y_steps == 1 {
        vec![y_min]
    } else {
        (0..y_steps)
            .map(|k| y_min + (y_max - y_min) * k as f64 / (y_steps - 1) as f64)
            .collect()
    };
    for &y in &y_values {
        base.with_axis_value(axis, y)?;
    }
    let time = time_spec(
        &TimeArgs {
            t_max: a.time.t_max,
            steps: Some(x_steps),
        },
        &base,
    )?;
    let spec = SweepSpec {
        base,
        y_axis: axis,
        y_values,
        times: time.grid(),
        variant,
        source: Source::Analytic,
        zero_tol,
    };
    Ok(RunConfig::Sweep {
        spec,
        preset: None,
        output: a.output,
    })
}

fn closed_form_of(form: ClosedFormArg) -> TcClosedForm {
    match form {
        ClosedFormArg::Exact => TcClosedForm::Exact,
        ClosedFormArg::Printed => TcClosedForm::Printed,
    }
}

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Usage(format!("--{name} must be positive, got {x}")))
    }
}

fn reject(model: &str, given: &[(&str, bool)]) -> Result<(), CliError> {
    match given.iter().find(|(_, set)| *set) {
        Some((key, _)) => Err(CliError::Usage(format!("--{key} does not apply to model {model}"))),
        None => Ok(()),
    }
}

/// Builds the model from flags, filling per-model defaults.
pub fn build_model(a: &ModelArgs) -> Result<ModelSpec, CliError> {
    let kind = a.model.ok_or_else(|| CliError::Usage("--model is required".into()))?;
    let family = |default: Family| match a.family {
        Some(FamilyArg::EeGg) => Family::EeGg,
        Some(FamilyArg::EgGe) => Family::EgGe,
        None => default,
    };
    let theta = a.theta.unwrap_or(FRAC_PI_4);
    let r = a.r.unwrap_or(1.0);
    Ok(match kind {
        ModelKind::Tc => {
            reject(
                "tc",
                &[
                    ("Omega", a.exchange.is_some()),
                    ("Gamma", a.gamma.is_some()),
                    ("J", a.j.is_some()),
                    ("hi-norm", a.hi_norm.is_some()),
                ],
            )?;
            let omega0 = a.omega0.unwrap_or(1.0);
            ModelSpec::TavisCummings {
                params: TavisCummingsParams::new(omega0, a.omega.unwrap_or(omega0), a.g.unwrap_or(1.0))?,
                initial: InitialStateFamily::new(r, theta, family(Family::EeGg))?,
                closed_form: a.closed_form.map(closed_form_of).unwrap_or_default(),
            }
        }
        ModelKind::Dephasing => {
            reject(
                "dephasing",
                &[
                    ("g", a.g.is_some()),
                    ("J", a.j.is_some()),
                    ("closed-form", a.closed_form.is_some()),
                    ("hi-norm", a.hi_norm.is_some()),
                ],
            )?;
            ModelSpec::Dephasing {
                params: DephasingParams::single_mode(
                    a.omega0.unwrap_or(1.0),
                    a.exchange.unwrap_or(3.0),
                    a.omega.unwrap_or(1.0),
                    a.gamma.unwrap_or(1.0),
                )?,
                initial: InitialStateFamily::new(r, theta, family(Family::EgGe))?,
            }
        }
        ModelKind::Ising => {
            reject(
                "ising",
                &[
                    ("omega0", a.omega0.is_some()),
                    ("Omega", a.exchange.is_some()),
                    ("Gamma", a.gamma.is_some()),
                    ("closed-form", a.closed_form.is_some()),
                ],
            )?;
            let omega = a.omega.unwrap_or(1.0);
            let params = match (a.g, a.j) {
                (Some(_), Some(_)) => return Err(CliError::Usage("give either --g or --J, not both".into())),
                (Some(g), None) => IsingParams::new(omega, g)?,
                (None, j) => IsingParams::from_rescaled(omega, j.unwrap_or(1.0))?,
            };
            ModelSpec::Ising {
                params,
                initial: InitialStateFamily::new(r, theta, family(Family::EeGg))?,
                normalization: match a.hi_norm {
                    Some(HiNormArg::Hamiltonian) => InteractionNormalization::Hamiltonian,
                    _ => InteractionNormalization::Plotted,
                },
            }
        }
    })
}

fn time_spec(a: &TimeArgs, model: &ModelSpec) -> Result<TimeSpec, CliError> {
    let default_t_max = match model {
        ModelSpec::TavisCummings { .. } => 15.0,
        ModelSpec::Dephasing { .. } => 4.0 * PI,
        ModelSpec::Ising { .. } => 20.0,
    };
    let t_max = a.t_max.unwrap_or(default_t_max);
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(CliError::Usage(format!("--t-max must be non-negative, got {t_max}")));
    }
    let steps = a.steps.unwrap_or(DEFAULT_STEPS);
    if steps > 1 && t_max == 0.0 {
        return Err(CliError::Usage(
            "--t-max must be positive when --steps exceeds 1".into(),
        ));
    }
    Ok(TimeSpec { t_max, steps })
}

fn policy(a: &PolicyArgs, model: &ModelSpec) -> Result<Option<TruncationPolicy>, CliError> {
    if a.initial_cutoff.is_none() && a.growth_step.is_none() && a.max_cutoff.is_none() && a.cutoff_tol.is_none() {
        return Ok(None);
    }
    let mut p = model.default_policy();
    if let Some(v) = a.initial_cutoff {
        p.initial_cutoff = v;
    }
    if let Some(v) = a.growth_step {
        p.growth_step = v;
    }
    if let Some(v) = a.max_cutoff {
        p.max_cutoff = v;
    }
    if let Some(v) = a.cutoff_tol {
        p.tolerance = v;
    }
    p.validate()?;
    Ok(Some(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn parse(args: &str) -> Result<RunConfig, CliError> {
        parse_config(std::iter::once("esdlab").chain(args.split_whitespace()))
    }

    #[test]
    fn simulate_ising_flags() {
        let cfg = parse("simulate --model ising --r 0.5 --theta 0.7853981634 --J 1 --t-max 10 --steps 1000").unwrap();
        let RunConfig::Simulate {
            model: ModelSpec::Ising { params, initial, .. },
            time,
            sources,
            ..
        } = cfg
        else {
            panic!("{cfg:?}")
        };
        assert_eq!((params.rescaled_coupling(), initial.r), (1.0, 0.5));
        assert_eq!((time.t_max, time.steps), (10.0, 1000));
        assert_eq!(sources, vec![Source::Analytic]);
    }

    #[test]
    fn preset_expands() {
        let RunConfig::Sweep { spec, preset, .. } = parse("sweep --preset fig1b").unwrap() else {
            panic!()
        };
        assert_eq!(preset, Some(Preset::Fig1b));
        assert_eq!(spec.base.initial().r, 0.5);
        assert_eq!((spec.y_values.len(), spec.times.len()), (201, 201));
        assert!(matches!(parse("sweep --preset fig1b --r 1"), Err(CliError::Usage(_))));
        assert!(matches!(parse("sweep --preset fig9"), Err(CliError::Usage(_))));
    }

    #[test]
    fn off_resonance_is_a_usage_error() {
        let err = parse("simulate --model tc --omega0 1 --omega 2").unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn usage_errors() {
        for bad in [
            "simulate --model ising --bogus 1",
            "simulate --model ising --r abc",
            "simulate --r 0.5",
            "simulate --model tc --J 1",
            "simulate --model ising --source both",
            "compare --model ising --tol -1",
        ] {
            assert_eq!(parse(bad).unwrap_err().exit_code(), 2, "{bad}");
        }
    }

    #[test]
    fn config_file_fills_unset_flags() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# ising run\nmodel = ising\nr = 0.25\nJ = 2 # coupling\nsteps = 11").unwrap();
        let path = f.path().display().to_string();
        let RunConfig::Simulate {
            model: ModelSpec::Ising { params, initial, .. },
            time,
            ..
        } = parse(&format!("simulate --config {path} --r 0.75")).unwrap()
        else {
            panic!()
        };
        assert_eq!((initial.r, params.rescaled_coupling(), time.steps), (0.75, 2.0, 11));
    }

    #[test]
    fn config_file_rejects_unknown_and_malformed_keys() {
        for body in [
            "model = ising\nbogus = 1\n",
            "model ising\n",
            "config = other\n",
            "r = 1\nr = 2\n",
        ] {
            let mut f = tempfile::NamedTempFile::new().unwrap();
            f.write_all(body.as_bytes()).unwrap();
            let err = parse(&format!("simulate --config {}", f.path().display())).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{body}");
        }
        assert_eq!(
            parse("simulate --config /nonexistent/esdlab.conf")
                .unwrap_err()
                .exit_code(),
            3
        );
    }

    #[test]
    fn custom_sweep_axis() {
        let RunConfig::Sweep { spec, .. } =
            parse("sweep --model ising --y-axis r --y-min 0 --y-max 1 --y-steps 5 --steps 7").unwrap()
        else {
            panic!()
        };
        assert_eq!(spec.y_values, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(spec.times.len(), 7);
        assert!(parse("sweep --model tc --y-axis Gamma --y-min 0.1 --y-max 1").is_err());
    }
}
