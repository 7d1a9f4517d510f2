use std::io::Write;

use esdlab::analysis::{
    compare_sources, detect_dark_periods, match_extrema, sample_trajectory, sweep, DarkPeriodOptions, EnergyObservable,
    Source, Trajectory,
};
use esdlab::models::build_initial_qubit_state;
use esdlab::oracle::certify_cutoff_on;

use crate::config::{RunConfig, TimeSpec};
use crate::error::CliError;
use crate::output::{
    emit_json, emit_trajectory_csv, parameter_echo, tagged_path, to_json, trajectory_csv, CompareDocument,
    DarkPeriodRecord, EsdDocument, ExtremaRecord, SectionRecord, SweepDocument, FORMAT_VERSION,
};

/// Executes a command. Reports without an output path go to `stdout`.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    match config {
        RunConfig::Simulate {
            model,
            time,
            sources,
            policy,
            output,
        } => {
            for &source in sources {
                let traj = sample_trajectory(model, &time.grid(), source, policy.as_ref())?;
                let meta = run_metadata("simulate", &traj, time);
                match output {
                    Some(path) if sources.len() > 1 => {
                        emit_trajectory_csv(&traj, &meta, &tagged_path(path, source.name()))?
                    }
                    Some(path) => emit_trajectory_csv(&traj, &meta, path)?,
                    None => write_stdout(stdout, &trajectory_csv(&traj, &meta))?,
                }
            }
        }
        RunConfig::Sweep { spec, preset, output } => {
            let grid = sweep(spec)?;
            let opts = DarkPeriodOptions {
                zero_tol: spec.zero_tol,
                ..Default::default()
            };
            let sections = preset
                .map(|p| p.sections())
                .unwrap_or_default()
                .iter()
                .map(|&value| {
                    let model = spec.base.with_axis_value(spec.y_axis, value)?;
                    let traj = sample_trajectory(&model, &spec.times, Source::Analytic, None)?;
                    let dark_periods = detect_dark_periods(&traj, &opts).iter().map(Into::into).collect();
                    Ok(SectionRecord { value, dark_periods })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let doc = SweepDocument::new(&grid, &spec.base, preset.map(|p| p.name()), sections);
            emit(&doc, output.as_deref(), stdout)?;
        }
        RunConfig::Esd {
            model,
            time,
            source,
            policy,
            dark,
            window,
            output,
        } => {
            let traj = sample_trajectory(model, &time.grid(), *source, policy.as_ref())?;
            let mut extrema = vec![ExtremaRecord::new(
                "h0",
                &match_extrema(&traj, EnergyObservable::H0, *window)?,
            )];
            if traj.energy_hi().is_some() {
                extrema.push(ExtremaRecord::new(
                    "hI",
                    &match_extrema(&traj, EnergyObservable::HI, *window)?,
                ));
            }
            let doc = EsdDocument {
                format: "esdlab-esd".into(),
                version: FORMAT_VERSION,
                parameters: parameter_echo(model),
                source: source.name().into(),
                cutoff: traj.cutoff,
                t_max: time.t_max,
                steps: time.steps,
                zero_tol: dark.zero_tol,
                min_width: dark.min_width,
                dark_periods: detect_dark_periods(&traj, dark)
                    .iter()
                    .map(DarkPeriodRecord::from)
                    .collect(),
                extrema,
            };
            emit(&doc, output.as_deref(), stdout)?;
        }
        RunConfig::Compare {
            model,
            time,
            policy,
            tol,
            output,
        } => {
            let cmp = compare_sources(model, &time.grid(), policy.as_ref())?;
            let passed = cmp.max_state_deviation <= *tol && cmp.max_concurrence_deviation <= *tol;
            let report = format!(
                "cutoff={}\nmax_state_deviation={:e}\nmax_concurrence_deviation={:e}\ntol={:e}\nstatus={}\n",
                cmp.cutoff,
                cmp.max_state_deviation,
                cmp.max_concurrence_deviation,
                tol,
                if passed { "pass" } else { "fail" }
            );
            write_stdout(stdout, &report)?;
            if let Some(path) = output {
                let doc = CompareDocument {
                    format: "esdlab-compare".into(),
                    version: FORMAT_VERSION,
                    parameters: parameter_echo(model),
                    t_max: time.t_max,
                    steps: time.steps,
                    cutoff: cmp.cutoff,
                    max_state_deviation: cmp.max_state_deviation,
                    max_concurrence_deviation: cmp.max_concurrence_deviation,
                    tol: *tol,
                    passed,
                };
                emit_json(&doc, path)?;
            }
            if !passed {
                return Err(CliError::CompareFailed(format!(
                    "deviation {:e} exceeds tolerance {tol:e}",
                    cmp.max_state_deviation.max(cmp.max_concurrence_deviation)
                )));
            }
        }
        RunConfig::Certify { model, time, policy } => {
            let policy = policy.unwrap_or_else(|| model.default_policy());
            let oracle = model.oracle_model();
            let physical: Vec<f64> = time.grid().iter().map(|t| t / model.time_scale()).collect();
            let cutoff = certify_cutoff_on(
                oracle.as_ref(),
                &build_initial_qubit_state(model.initial()),
                &physical,
                &policy,
            )?;
            write_stdout(stdout, &format!("cutoff={cutoff}\ntolerance={:e}\n", policy.tolerance))?;
        }
    }
    Ok(())
}

fn run_metadata(command: &str, traj: &Trajectory, time: &TimeSpec) -> Vec<(String, String)> {
    let mut meta = vec![
        ("generator".to_string(), format!("esdlab {}", env!("CARGO_PKG_VERSION"))),
        ("command".to_string(), command.to_string()),
        ("source".to_string(), traj.source.name().to_string()),
    ];
    if let Some(c) = traj.cutoff {
        meta.push(("cutoff".to_string(), c.to_string()));
    }
    meta.push(("t_max".to_string(), format!("{:?}", time.t_max)));
    meta.push(("steps".to_string(), time.steps.to_string()));
    meta
}

fn emit<T: serde::Serialize>(doc: &T, path: Option<&std::path::Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => emit_json(doc, p),
        None => write_stdout(stdout, &to_json(doc)),
    }
}

fn write_stdout(stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::io(std::path::Path::new("<stdout>"), e))
}
