//! Trajectories, dark-period (sudden-death) detection, extrema matching
//! between concurrence and energy, and two-dimensional parameter sweeps.
//!
//! Times here are always the rescaled, dimensionless model time: `gt` for
//! the cavity model, `ωt` for the dephasing bath (ω of the first mode) and
//! for the Ising pair.

use rayon::prelude::*;

use crate::entanglement::{
    energy_h0, energy_hi_ising, purity, wootters_concurrence, ConcurrenceReport, DensityMatrix,
    InteractionNormalization,
};
use crate::error::{Error, Result};
use crate::models::{
    build_initial_qubit_state, dephasing_reduced_state_analytic, ising_reduced_state, tc_reduced_state_analytic,
    tc_reduced_state_exact, DephasingParams, InitialStateFamily, IsingParams, TavisCummingsParams, TcClosedForm,
};
use crate::oracle::{
    certify_cutoff_on, evolve_on_grid, DephasingOracle, FieldHamiltonian, IsingOracle, TavisCummingsOracle,
    TruncationPolicy,
};

/// One of the three models with its parameters and initial state.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    TavisCummings {
        params: TavisCummingsParams,
        initial: InitialStateFamily,
        closed_form: TcClosedForm,
    },
    Dephasing {
        params: DephasingParams,
        initial: InitialStateFamily,
    },
    Ising {
        params: IsingParams,
        initial: InitialStateFamily,
        normalization: InteractionNormalization,
    },
}

/// Where trajectory states come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Analytic,
    Oracle,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Analytic => "analytic",
            Source::Oracle => "oracle",
        }
    }
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::TavisCummings { .. } => "tc",
            ModelSpec::Dephasing { .. } => "dephasing",
            ModelSpec::Ising { .. } => "ising",
        }
    }

    pub fn initial(&self) -> &InitialStateFamily {
        match self {
            ModelSpec::TavisCummings { initial, .. }
            | ModelSpec::Dephasing { initial, .. }
            | ModelSpec::Ising { initial, .. } => initial,
        }
    }

    fn initial_mut(&mut self) -> &mut InitialStateFamily {
        match self {
            ModelSpec::TavisCummings { initial, .. }
            | ModelSpec::Dephasing { initial, .. }
            | ModelSpec::Ising { initial, .. } => initial,
        }
    }

    /// Name of the rescaled time axis.
    pub fn time_axis(&self) -> &'static str {
        match self {
            ModelSpec::TavisCummings { .. } => "gt",
            ModelSpec::Dephasing { .. } | ModelSpec::Ising { .. } => "omega_t",
        }
    }

    /// Physical time per unit of rescaled time is `1 / time_scale`.
    pub fn time_scale(&self) -> f64 {
        match self {
            ModelSpec::TavisCummings { params, .. } => params.g,
            ModelSpec::Dephasing { params, .. } => params.modes[0].omega,
            ModelSpec::Ising { params, .. } => params.omega,
        }
    }

    /// Closed-form state at rescaled time `tau`.
    pub fn analytic_state(&self, tau: f64) -> Result<DensityMatrix> {
        match self {
            ModelSpec::TavisCummings {
                params,
                initial,
                closed_form: TcClosedForm::Exact,
            } => tc_reduced_state_exact(params, initial, tau),
            ModelSpec::TavisCummings {
                params,
                initial,
                closed_form: TcClosedForm::Printed,
            } => tc_reduced_state_analytic(params, initial, tau),
            ModelSpec::Dephasing { params, initial } => {
                dephasing_reduced_state_analytic(params, initial, tau / self.time_scale())
            }
            ModelSpec::Ising { params, initial, .. } => ising_reduced_state(params, initial, tau / self.time_scale()),
        }
    }

    /// Hamiltonian builder for the brute-force propagator.
    pub fn oracle_model(&self) -> Box<dyn FieldHamiltonian> {
        match self {
            ModelSpec::TavisCummings { params, .. } => Box::new(TavisCummingsOracle(*params)),
            ModelSpec::Dephasing { params, .. } => Box::new(DephasingOracle(params.clone())),
            ModelSpec::Ising { params, .. } => Box::new(IsingOracle(*params)),
        }
    }

    /// Truncation policy used when none is given. The cavity model starts
    /// from the vacuum and conserves excitations, so cutoff 2 is already exact.
    pub fn default_policy(&self) -> TruncationPolicy {
        match self {
            ModelSpec::TavisCummings { .. } => TruncationPolicy::starting_at(2),
            _ => TruncationPolicy::default(),
        }
    }

    /// `⟨(ω/2)(σz_A + σz_B)⟩` with the model's qubit splitting.
    pub fn energy_h0(&self, rho: &DensityMatrix) -> f64 {
        let omega0 = match self {
            ModelSpec::TavisCummings { params, .. } => params.omega0,
            ModelSpec::Dephasing { params, .. } => params.omega0,
            ModelSpec::Ising { params, .. } => params.omega,
        };
        energy_h0(rho, omega0)
    }

    /// Ising interaction energy; `None` for the open models.
    pub fn energy_hi(&self, rho: &DensityMatrix) -> Option<f64> {
        match self {
            ModelSpec::Ising {
                params, normalization, ..
            } => Some(energy_hi_ising(rho, params.g, *normalization)),
            _ => None,
        }
    }

    /// Every parameter as `(key, value)`, in a fixed order.
    pub fn parameters(&self) -> Vec<(String, ParamValue)> {
        let f = self.initial();
        let mut out = vec![
            ("model".into(), ParamValue::Text(self.name())),
            ("family".into(), ParamValue::Text(f.family.name())),
            ("r".into(), ParamValue::Number(f.r)),
            ("theta".into(), ParamValue::Number(f.theta)),
            ("time_axis".into(), ParamValue::Text(self.time_axis())),
        ];
        match self {
            ModelSpec::TavisCummings {
                params, closed_form, ..
            } => {
                out.push(("omega0".into(), ParamValue::Number(params.omega0)));
                out.push(("omega".into(), ParamValue::Number(params.omega)));
                out.push(("g".into(), ParamValue::Number(params.g)));
                out.push(("closed_form".into(), ParamValue::Text(closed_form.name())));
            }
            ModelSpec::Dephasing { params, .. } => {
                out.push(("omega0".into(), ParamValue::Number(params.omega0)));
                out.push(("Omega".into(), ParamValue::Number(params.exchange)));
                for (j, m) in params.modes.iter().enumerate() {
                    out.push((format!("mode{j}_omega"), ParamValue::Number(m.omega)));
                    out.push((format!("mode{j}_Gamma"), ParamValue::Number(m.gamma)));
                }
            }
            ModelSpec::Ising {
                params, normalization, ..
            } => {
                out.push(("omega".into(), ParamValue::Number(params.omega)));
                out.push(("g".into(), ParamValue::Number(params.g)));
                out.push(("J".into(), ParamValue::Number(params.rescaled_coupling())));
                let norm = match normalization {
                    InteractionNormalization::Plotted => "g",
                    InteractionNormalization::Hamiltonian => "g/2",
                };
                out.push(("hI_normalization".into(), ParamValue::Text(norm)));
            }
        }
        out
    }

    /// Copy with one sweep-axis parameter replaced.
    pub fn with_axis_value(&self, axis: SweepAxis, value: f64) -> Result<ModelSpec> {
        let mut out = self.clone();
        match (axis, &mut out) {
            (SweepAxis::Theta, spec) => {
                let f = *spec.initial();
                *spec.initial_mut() = InitialStateFamily::new(f.r, value, f.family)?;
            }
            (SweepAxis::Purity, spec) => {
                let f = *spec.initial();
                *spec.initial_mut() = InitialStateFamily::new(value, f.theta, f.family)?;
            }
            (SweepAxis::GammaOverOmega, ModelSpec::Dephasing { params, .. }) => {
                if params.modes.len() != 1 {
                    return Err(Error::InvalidParameter(
                        "Gamma/omega axis needs a single-mode bath".into(),
                    ));
                }
                let omega = params.modes[0].omega;
                *params = DephasingParams::single_mode(params.omega0, params.exchange, omega, value * omega)?;
            }
            (SweepAxis::RescaledCoupling, ModelSpec::Ising { params, .. }) => {
                *params = IsingParams::from_rescaled(params.omega, value)?;
            }
            (axis, spec) => {
                return Err(Error::InvalidParameter(format!(
                    "axis {} does not apply to model {}",
                    axis.name(),
                    spec.name()
                )))
            }
        }
        Ok(out)
    }
}

/// A parameter echoed into output metadata.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ParamValue {
    Number(f64),
    Text(&'static str),
}

impl std::fmt::Display for ParamValue {
    /// Numbers use the shortest representation that parses back exactly.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamValue::Number(x) => write!(f, "{x:?}"),
            ParamValue::Text(s) => f.write_str(s),
        }
    }
}

/// One time sample of a trajectory.
#[derive(Clone, Debug)]
pub struct Sample {
    pub t: f64,
    pub state: DensityMatrix,
    pub concurrence: ConcurrenceReport,
    pub energy_h0: f64,
    pub energy_hi: Option<f64>,
    pub purity: f64,
}

impl Sample {
    fn evaluate(model: &ModelSpec, t: f64, state: DensityMatrix) -> Result<Sample> {
        let concurrence = wootters_concurrence(&state)?;
        Ok(Sample {
            t,
            energy_h0: model.energy_h0(&state),
            energy_hi: model.energy_hi(&state),
            purity: purity(&state),
            concurrence,
            state,
        })
    }

    pub fn wootters(&self) -> f64 {
        self.concurrence.wootters
    }

    pub fn paper_cutoff(&self) -> f64 {
        self.concurrence.paper_cutoff_form.unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub model: ModelSpec,
    pub times: Vec<f64>,
    pub samples: Vec<Sample>,
    pub source: Source,
    /// Fock cutoff used by an oracle trajectory.
    pub cutoff: Option<usize>,
}

impl Trajectory {
    pub fn wootters(&self) -> Vec<f64> {
        self.samples.iter().map(Sample::wootters).collect()
    }

    pub fn paper_cutoff(&self) -> Vec<f64> {
        self.samples.iter().map(Sample::paper_cutoff).collect()
    }

    pub fn energy_h0(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.energy_h0).collect()
    }

    pub fn energy_hi(&self) -> Option<Vec<f64>> {
        self.samples.iter().map(|s| s.energy_hi).collect()
    }

    pub fn concurrence(&self, variant: ConcurrenceVariant) -> Vec<f64> {
        match variant {
            ConcurrenceVariant::Wootters => self.wootters(),
            ConcurrenceVariant::PaperCutoff => self.paper_cutoff(),
        }
    }
}

/// `steps` evenly spaced points over `[0, t_max]`, both ends included.
pub fn time_grid(t_max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect(),
    }
}

fn check_ascending(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "times must be finite and strictly ascending".into(),
        ));
    }
    Ok(())
}

/// Samples the model on `times` (rescaled). Oracle trajectories certify one
/// cutoff over the whole grid, using `policy` or the model default.
pub fn sample_trajectory(
    model: &ModelSpec,
    times: &[f64],
    source: Source,
    policy: Option<&TruncationPolicy>,
) -> Result<Trajectory> {
    check_ascending(times)?;
    let (states, cutoff) = match source {
        Source::Analytic => {
            let states: Result<Vec<_>> = times.par_iter().map(|&tau| model.analytic_state(tau)).collect();
            (states?, None)
        }
        Source::Oracle => {
            let oracle = model.oracle_model();
            let rho0 = build_initial_qubit_state(model.initial());
            let physical: Vec<f64> = times.iter().map(|tau| tau / model.time_scale()).collect();
            let policy = policy.copied().unwrap_or_else(|| model.default_policy());
            let cutoff = if physical.is_empty() {
                policy.initial_cutoff
            } else {
                certify_cutoff_on(oracle.as_ref(), &rho0, &physical, &policy)?
            };
            (evolve_on_grid(oracle.as_ref(), &rho0, &physical, cutoff)?, Some(cutoff))
        }
    };
    let samples: Result<Vec<Sample>> = times
        .par_iter()
        .zip(states)
        .map(|(&t, state)| Sample::evaluate(model, t, state))
        .collect();
    Ok(Trajectory {
        model: model.clone(),
        times: times.to_vec(),
        samples: samples?,
        source,
        cutoff,
    })
}

/// Worst analytic-vs-oracle disagreement over a time grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceComparison {
    pub max_state_deviation: f64,
    pub max_concurrence_deviation: f64,
    pub cutoff: usize,
}

/// Samples both sources on `times` and reports the largest elementwise state
/// difference and the largest concurrence difference.
pub fn compare_sources(
    model: &ModelSpec,
    times: &[f64],
    policy: Option<&TruncationPolicy>,
) -> Result<SourceComparison> {
    let analytic = sample_trajectory(model, times, Source::Analytic, None)?;
    let oracle = sample_trajectory(model, times, Source::Oracle, policy)?;
    let mut out = SourceComparison {
        max_state_deviation: 0.0,
        max_concurrence_deviation: 0.0,
        cutoff: oracle.cutoff.unwrap_or(0),
    };
    for (a, o) in analytic.samples.iter().zip(&oracle.samples) {
        out.max_state_deviation = out
            .max_state_deviation
            .max(a.state.matrix().max_abs_diff(o.state.matrix()));
        out.max_concurrence_deviation = out.max_concurrence_deviation.max((a.wootters() - o.wootters()).abs());
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Dark periods
// ---------------------------------------------------------------------------

/// A maximal interval of zero concurrence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DarkPeriod {
    pub t_start: f64,
    pub t_end: f64,
    /// Concurrence becomes positive again at a later sample.
    pub revived: bool,
    pub first_sample: usize,
    pub last_sample: usize,
}

impl DarkPeriod {
    pub fn width(&self) -> f64 {
        self.t_end - self.t_start
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DarkPeriodOptions {
    /// Concurrence at or below this counts as zero.
    pub zero_tol: f64,
    /// Runs shorter than this many samples are touch-zeros, not dark periods.
    pub min_width: usize,
    /// Bisection stops once boundary brackets are this narrow.
    pub resolution: f64,
    /// Refined intervals narrower than this are discarded as touch-zeros.
    pub min_interval: f64,
}

impl Default for DarkPeriodOptions {
    fn default() -> Self {
        DarkPeriodOptions {
            zero_tol: 1e-9,
            min_width: 2,
            resolution: 1e-6,
            min_interval: 1e-4,
        }
    }
}

/// Dark periods of one concurrence series. When `evaluator` is given, run
/// boundaries are refined by bisection on it.
pub fn detect_dark_runs(
    times: &[f64],
    values: &[f64],
    opts: &DarkPeriodOptions,
    evaluator: Option<&(dyn Fn(f64) -> f64 + Sync)>,
) -> Vec<DarkPeriod> {
    assert_eq!(times.len(), values.len(), "one value per time");
    let dark = |v: f64| v <= opts.zero_tol;
    let mut out = Vec::new();
    let mut k = 0;
    while k < values.len() {
        if !dark(values[k]) {
            k += 1;
            continue;
        }
        let first = k;
        while k + 1 < values.len() && dark(values[k + 1]) {
            k += 1;
        }
        let last = k;
        k += 1;
        if last + 1 - first < opts.min_width.max(1) {
            continue;
        }
        let mut t_start = times[first];
        let mut t_end = times[last];
        if let Some(f) = evaluator {
            if first > 0 {
                t_start = bisect_boundary(f, times[first - 1], times[first], opts, true);
            }
            if last + 1 < times.len() {
                t_end = bisect_boundary(f, times[last], times[last + 1], opts, false);
            }
            if t_end - t_start < opts.min_interval {
                continue;
            }
        }
        let revived = values[last + 1..].iter().any(|&v| !dark(v));
        out.push(DarkPeriod {
            t_start,
            t_end,
            revived,
            first_sample: first,
            last_sample: last,
        });
    }
    out
}

/// Narrows `[lo, hi]` around the lit/dark transition and returns the dark end
/// of the final bracket. `entering` means `lo` is lit and `hi` is dark.
fn bisect_boundary(
    f: &(dyn Fn(f64) -> f64 + Sync),
    mut lo: f64,
    mut hi: f64,
    opts: &DarkPeriodOptions,
    entering: bool,
) -> f64 {
    while hi - lo > opts.resolution {
        let mid = 0.5 * (lo + hi);
        let is_dark = f(mid) <= opts.zero_tol;
        if is_dark == entering {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if entering {
        hi
    } else {
        lo
    }
}

/// Dark periods of a trajectory's Wootters concurrence. Analytic trajectories
/// get bisection-refined boundaries.
pub fn detect_dark_periods(traj: &Trajectory, opts: &DarkPeriodOptions) -> Vec<DarkPeriod> {
    let values = traj.wootters();
    match traj.source {
        Source::Analytic => {
            let model = traj.model.clone();
            let f = move |tau: f64| {
                model
                    .analytic_state(tau)
                    .and_then(|s| wootters_concurrence(&s))
                    .map_or(f64::NAN, |r| r.wootters)
            };
            detect_dark_runs(&traj.times, &values, opts, Some(&f))
        }
        Source::Oracle => detect_dark_runs(&traj.times, &values, opts, None),
    }
}

// ---------------------------------------------------------------------------
// Extrema
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extremum {
    pub time: f64,
    pub value: f64,
    pub kind: ExtremumKind,
    /// Sample index of the discrete extremum (midpoint for plateaus).
    pub sample: usize,
}

/// Consecutive differences at or below this are treated as flat.
const FLAT_TOL: f64 = 1e-13;

/// Interior extrema by sign change of finite differences, refined with a
/// three-point parabola. A flat run between a fall and a rise (or a rise and
/// a fall) is one extremum at its midpoint.
pub fn find_extrema(times: &[f64], values: &[f64]) -> Vec<Extremum> {
    assert_eq!(times.len(), values.len(), "one value per time");
    let mut out = Vec::new();
    // (sign, index of the sample where the current slope ended)
    let mut last: Option<(f64, usize)> = None;
    for i in 0..values.len().saturating_sub(1) {
        let d = values[i + 1] - values[i];
        if d.abs() <= FLAT_TOL {
            continue;
        }
        let sign = d.signum();
        if let Some((prev, end)) = last {
            if sign != prev {
                let kind = if prev > 0.0 {
                    ExtremumKind::Max
                } else {
                    ExtremumKind::Min
                };
                // flat run spans samples end..=i
                out.push(if end == i {
                    refine_vertex(times, values, i, kind)
                } else {
                    let mid = (end + i) / 2;
                    Extremum {
                        time: 0.5 * (times[end] + times[i]),
                        value: values[mid],
                        kind,
                        sample: mid,
                    }
                });
            }
        }
        last = Some((sign, i + 1));
    }
    out
}

fn refine_vertex(times: &[f64], values: &[f64], i: usize, kind: ExtremumKind) -> Extremum {
    let (t0, t1, t2) = (times[i - 1], times[i], times[i + 1]);
    let (y0, y1, y2) = (values[i - 1], values[i], values[i + 1]);
    let num = (t1 - t0).powi(2) * (y1 - y2) - (t1 - t2).powi(2) * (y1 - y0);
    let den = (t1 - t0) * (y1 - y2) - (t1 - t2) * (y1 - y0);
    if den == 0.0 {
        return Extremum {
            time: t1,
            value: y1,
            kind,
            sample: i,
        };
    }
    let tv = (t1 - 0.5 * num / den).clamp(t0, t2);
    // Lagrange parabola through the three points, evaluated at the vertex
    let l0 = (tv - t1) * (tv - t2) / ((t0 - t1) * (t0 - t2));
    let l1 = (tv - t0) * (tv - t2) / ((t1 - t0) * (t1 - t2));
    let l2 = (tv - t0) * (tv - t1) / ((t2 - t0) * (t2 - t1));
    Extremum {
        time: tv,
        value: y0 * l0 + y1 * l1 + y2 * l2,
        kind,
        sample: i,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremaPair {
    pub first: usize,
    pub second: usize,
    /// `second.time - first.time`.
    pub offset: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremaMatch {
    pub first: Vec<Extremum>,
    pub second: Vec<Extremum>,
    pub pairs: Vec<ExtremaPair>,
    pub unpaired_first: Vec<usize>,
    pub unpaired_second: Vec<usize>,
    pub window: f64,
}

impl ExtremaMatch {
    /// Every extremum on both sides is paired.
    pub fn is_complete(&self) -> bool {
        self.unpaired_first.is_empty() && self.unpaired_second.is_empty()
    }

    /// The same match with the two series swapped.
    pub fn transposed(&self) -> ExtremaMatch {
        let mut pairs: Vec<ExtremaPair> = self
            .pairs
            .iter()
            .map(|p| ExtremaPair {
                first: p.second,
                second: p.first,
                offset: -p.offset,
            })
            .collect();
        pairs.sort_by_key(|p| (p.first, p.second));
        ExtremaMatch {
            first: self.second.clone(),
            second: self.first.clone(),
            pairs,
            unpaired_first: self.unpaired_second.clone(),
            unpaired_second: self.unpaired_first.clone(),
            window: self.window,
        }
    }
}

/// Greedy nearest-time injective pairing of two extremum lists within `window`.
pub fn pair_extrema(first: Vec<Extremum>, second: Vec<Extremum>, window: f64) -> ExtremaMatch {
    let mut candidates: Vec<(f64, f64, f64, usize, usize)> = Vec::new();
    for (i, a) in first.iter().enumerate() {
        for (j, b) in second.iter().enumerate() {
            let gap = (a.time - b.time).abs();
            if gap <= window {
                // key is symmetric in the two series
                candidates.push((gap, a.time.min(b.time), a.time.max(b.time), i, j));
            }
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.total_cmp(&y.2)));
    let mut used_first = vec![false; first.len()];
    let mut used_second = vec![false; second.len()];
    let mut pairs = Vec::new();
    for (_, _, _, i, j) in candidates {
        if !used_first[i] && !used_second[j] {
            used_first[i] = true;
            used_second[j] = true;
            pairs.push(ExtremaPair {
                first: i,
                second: j,
                offset: second[j].time - first[i].time,
            });
        }
    }
    pairs.sort_by_key(|p| (p.first, p.second));
    let unpaired = |used: &[bool]| used.iter().enumerate().filter(|(_, &u)| !u).map(|(k, _)| k).collect();
    ExtremaMatch {
        unpaired_first: unpaired(&used_first),
        unpaired_second: unpaired(&used_second),
        first,
        second,
        pairs,
        window,
    }
}

/// Energy observable compared against concurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnergyObservable {
    H0,
    HI,
}

/// Pairs Wootters-concurrence extrema with extrema of the chosen energy.
pub fn match_extrema(traj: &Trajectory, observable: EnergyObservable, window: f64) -> Result<ExtremaMatch> {
    let energy = match observable {
        EnergyObservable::H0 => traj.energy_h0(),
        EnergyObservable::HI => traj
            .energy_hi()
            .ok_or_else(|| Error::InvalidParameter(format!("model {} has no interaction energy", traj.model.name())))?,
    };
    let concurrence = find_extrema(&traj.times, &traj.wootters());
    let energy = find_extrema(&traj.times, &energy);
    Ok(pair_extrema(concurrence, energy, window))
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    Theta,
    GammaOverOmega,
    Purity,
    RescaledCoupling,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Theta => "theta",
            SweepAxis::GammaOverOmega => "Gamma/omega",
            SweepAxis::Purity => "r",
            SweepAxis::RescaledCoupling => "J",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ConcurrenceVariant {
    #[default]
    Wootters,
    PaperCutoff,
}

impl ConcurrenceVariant {
    pub fn name(self) -> &'static str {
        match self {
            ConcurrenceVariant::Wootters => "wootters",
            ConcurrenceVariant::PaperCutoff => "paper_cutoff",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub base: ModelSpec,
    pub y_axis: SweepAxis,
    pub y_values: Vec<f64>,
    pub times: Vec<f64>,
    pub variant: ConcurrenceVariant,
    pub source: Source,
    pub zero_tol: f64,
}

/// Concurrence over (parameter, time); rows follow `y_values`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub x_name: String,
    pub x_values: Vec<f64>,
    pub y_name: String,
    pub y_values: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub dark_mask: Vec<Vec<bool>>,
    pub zero_tol: f64,
    pub variant: ConcurrenceVariant,
}

impl SweepGrid {
    pub fn from_values(
        x_name: &str,
        x_values: Vec<f64>,
        y_name: &str,
        y_values: Vec<f64>,
        values: Vec<Vec<f64>>,
        zero_tol: f64,
        variant: ConcurrenceVariant,
    ) -> Result<Self> {
        if values.len() != y_values.len() || values.iter().any(|row| row.len() != x_values.len()) {
            return Err(Error::Dimension("sweep values do not match axes".into()));
        }
        let dark_mask = values
            .iter()
            .map(|row| row.iter().map(|&v| v <= zero_tol).collect())
            .collect();
        Ok(SweepGrid {
            x_name: x_name.to_string(),
            x_values,
            y_name: y_name.to_string(),
            y_values,
            values,
            dark_mask,
            zero_tol,
            variant,
        })
    }

    /// Fraction of grid points in the dark mask.
    pub fn dark_fraction(&self) -> f64 {
        let total: usize = self.dark_mask.iter().map(Vec::len).sum();
        if total == 0 {
            return 0.0;
        }
        let dark = self.dark_mask.iter().flatten().filter(|&&d| d).count();
        dark as f64 / total as f64
    }

    pub fn dark_mask_is_empty(&self) -> bool {
        !self.dark_mask.iter().flatten().any(|&d| d)
    }

    /// Unrefined dark periods of one row.
    pub fn row_dark_periods(&self, row: usize, min_width: usize) -> Vec<DarkPeriod> {
        let opts = DarkPeriodOptions {
            zero_tol: self.zero_tol,
            min_width,
            ..Default::default()
        };
        detect_dark_runs(&self.x_values, &self.values[row], &opts, None)
    }
}

/// Evaluates the concurrence on every (y, t) point. Rows are independent and
/// evaluated in parallel; results do not depend on evaluation order.
pub fn sweep(spec: &SweepSpec) -> Result<SweepGrid> {
    check_ascending(&spec.times)?;
    let rows: Result<Vec<Vec<f64>>> = spec
        .y_values
        .par_iter()
        .map(|&y| {
            let model = spec.base.with_axis_value(spec.y_axis, y)?;
            let traj = sample_trajectory(&model, &spec.times, spec.source, None)?;
            Ok(traj.concurrence(spec.variant))
        })
        .collect();
    SweepGrid::from_values(
        spec.base.time_axis(),
        spec.times.clone(),
        spec.y_axis.name(),
        spec.y_values.clone(),
        rows?,
        spec.zero_tol,
        spec.variant,
    )
}
