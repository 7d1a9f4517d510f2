//! Named sweep regimes: the cavity (θ, gt) maps, the dephasing (Γ/ω, ωt)
//! maps and the Ising (r, ωt) / (J, ωt) maps, each with fixed parameters.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::analysis::{time_grid, ConcurrenceVariant, ModelSpec, Source, SweepAxis, SweepSpec};
use crate::entanglement::InteractionNormalization;
use crate::error::{Error, Result};
use crate::models::{DephasingParams, Family, InitialStateFamily, IsingParams, TavisCummingsParams, TcClosedForm};

/// Default number of points on each sweep axis.
pub const DEFAULT_RESOLUTION: usize = 201;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig1a,
    Fig1b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig1a,
        Preset::Fig1b,
        Preset::Fig3a,
        Preset::Fig3b,
        Preset::Fig4a,
        Preset::Fig4b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1a => "fig1a",
            Preset::Fig1b => "fig1b",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
        }
    }

    pub fn from_name(name: &str) -> Result<Preset> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown preset '{name}'")))
    }

    /// Model at the preset's fixed parameters; the swept parameter takes its
    /// section or default value.
    pub fn base_model(self) -> ModelSpec {
        let tc = |r: f64| ModelSpec::TavisCummings {
            params: TavisCummingsParams::resonant(1.0, 1.0).expect("valid"),
            initial: InitialStateFamily::new(r, FRAC_PI_4, Family::EeGg).expect("valid"),
            closed_form: TcClosedForm::Exact,
        };
        let dephasing = |r: f64| ModelSpec::Dephasing {
            params: DephasingParams::single_mode(1.0, 3.0, 1.0, 1.0).expect("valid"),
            initial: InitialStateFamily::new(r, PI / 20.0, Family::EgGe).expect("valid"),
        };
        let ising = |r: f64, j: f64| ModelSpec::Ising {
            params: IsingParams::from_rescaled(1.0, j).expect("valid"),
            initial: InitialStateFamily::new(r, FRAC_PI_4, Family::EeGg).expect("valid"),
            normalization: InteractionNormalization::Plotted,
        };
        match self {
            Preset::Fig1a => tc(1.0),
            Preset::Fig1b => tc(0.5),
            Preset::Fig3a => dephasing(1.0),
            Preset::Fig3b => dephasing(0.5),
            Preset::Fig4a => ising(1.0, 1.0),
            Preset::Fig4b => ising(0.5, 1.0),
        }
    }

    pub fn y_axis(self) -> SweepAxis {
        match self {
            Preset::Fig1a | Preset::Fig1b => SweepAxis::Theta,
            Preset::Fig3a | Preset::Fig3b => SweepAxis::GammaOverOmega,
            Preset::Fig4a => SweepAxis::Purity,
            Preset::Fig4b => SweepAxis::RescaledCoupling,
        }
    }

    /// `n` values of the swept parameter. The Γ/ω axis excludes zero.
    pub fn y_values(self, n: usize) -> Vec<f64> {
        match self {
            Preset::Fig1a | Preset::Fig1b => time_grid(FRAC_PI_2, n),
            Preset::Fig3a | Preset::Fig3b => (1..=n).map(|k| 2.0 * k as f64 / n as f64).collect(),
            Preset::Fig4a => time_grid(1.0, n),
            Preset::Fig4b => time_grid(2.0, n),
        }
    }

    /// End of the rescaled time axis.
    pub fn t_max(self) -> f64 {
        match self {
            Preset::Fig1a | Preset::Fig1b => 15.0,
            Preset::Fig3a | Preset::Fig3b => 4.0 * PI,
            Preset::Fig4a | Preset::Fig4b => 20.0,
        }
    }

    /// Values of the swept parameter whose single trajectories are reported.
    pub fn sections(self) -> &'static [f64] {
        match self {
            Preset::Fig4a => &[0.35, 1.0, 0.5],
            Preset::Fig4b => &[1.0, 0.5, 2.0],
            _ => &[],
        }
    }

    pub fn sweep_spec(self, time_steps: usize, y_steps: usize, variant: ConcurrenceVariant) -> SweepSpec {
        SweepSpec {
            base: self.base_model(),
            y_axis: self.y_axis(),
            y_values: self.y_values(y_steps),
            times: time_grid(self.t_max(), time_steps),
            variant,
            source: Source::Analytic,
            zero_tol: 1e-9,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(Preset::from_name(p.name()).unwrap(), p);
        }
        assert!(Preset::from_name("fig2").is_err());
    }

    #[test]
    fn fixed_parameters() {
        assert_eq!(Preset::Fig1b.base_model().initial().r, 0.5);
        let ModelSpec::Dephasing { params, initial } = Preset::Fig3a.base_model() else {
            panic!()
        };
        assert_eq!(params.exchange / params.modes[0].omega, 3.0);
        assert_eq!(initial.theta, PI / 20.0);
        let ModelSpec::Ising { params, initial, .. } = Preset::Fig4b.base_model() else {
            panic!()
        };
        assert_eq!(
            (params.rescaled_coupling(), initial.r, initial.theta),
            (1.0, 0.5, FRAC_PI_4)
        );
    }

    #[test]
    fn gamma_axis_excludes_zero() {
        let y = Preset::Fig3a.y_values(201);
        assert_eq!(y.len(), 201);
        assert!(y[0] > 0.0);
        assert_eq!(*y.last().unwrap(), 2.0);
    }

    #[test]
    fn every_section_is_a_valid_axis_value() {
        for p in Preset::ALL {
            for &v in p.sections() {
                p.base_model().with_axis_value(p.y_axis(), v).unwrap();
            }
        }
    }
}
