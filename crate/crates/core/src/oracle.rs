//! Brute-force reference dynamics.
//!
//! The qubits start in an arbitrary state with every field mode in vacuum.
//! The full system is evolved with the exact spectral propagator of the
//! truncated Hamiltonian, then the field is traced out. The Fock cutoff is
//! raised until the reduced state stops changing.

use rayon::prelude::*;

use crate::entanglement::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, CMatrix, HermitianEigenDecomposition, C64, MAX_DIMENSION, ZERO};
use crate::models::{
    dephasing_full_hamiltonian, qubit_free_hamiltonian, tc_full_hamiltonian, DephasingParams, IsingParams,
    TavisCummingsParams,
};

/// Number of evenly spaced times `certify_cutoff` checks over `[0, t_max]`.
pub const CERTIFY_GRID_POINTS: usize = 65;

/// A Hamiltonian on qubits ⊗ environment, parametrized by a uniform Fock cutoff.
pub trait FieldHamiltonian: Sync {
    fn hamiltonian(&self, cutoff: usize) -> Result<CMatrix>;

    /// Dimension of the environment factor at this cutoff.
    fn env_dim(&self, cutoff: usize) -> usize;

    /// Diagonal of a qubit Hamiltonian defining the reporting frame. Reduced
    /// states are returned as `exp(iH0 t)·ρ·exp(-iH0 t)` when present.
    fn rotating_frame(&self) -> Option<[f64; 4]> {
        None
    }
}

/// Cavity model, reported in the frame rotating with the free qubit Hamiltonian.
#[derive(Clone, Copy, Debug)]
pub struct TavisCummingsOracle(pub TavisCummingsParams);

impl FieldHamiltonian for TavisCummingsOracle {
    fn hamiltonian(&self, cutoff: usize) -> Result<CMatrix> {
        tc_full_hamiltonian(&self.0, cutoff)
    }

    fn env_dim(&self, cutoff: usize) -> usize {
        cutoff + 1
    }

    fn rotating_frame(&self) -> Option<[f64; 4]> {
        let h0 = qubit_free_hamiltonian(self.0.omega0);
        Some([h0[(0, 0)].re, h0[(1, 1)].re, h0[(2, 2)].re, h0[(3, 3)].re])
    }
}

/// Dephasing bath; every mode shares the same cutoff.
#[derive(Clone, Debug)]
pub struct DephasingOracle(pub DephasingParams);

impl FieldHamiltonian for DephasingOracle {
    fn hamiltonian(&self, cutoff: usize) -> Result<CMatrix> {
        dephasing_full_hamiltonian(&self.0, &vec![cutoff; self.0.modes.len()])
    }

    fn env_dim(&self, cutoff: usize) -> usize {
        (cutoff + 1).saturating_pow(self.0.modes.len() as u32)
    }
}

/// Closed pair: no environment, the cutoff is ignored.
#[derive(Clone, Copy, Debug)]
pub struct IsingOracle(pub IsingParams);

impl FieldHamiltonian for IsingOracle {
    fn hamiltonian(&self, _cutoff: usize) -> Result<CMatrix> {
        Ok(self.0.hamiltonian())
    }

    fn env_dim(&self, _cutoff: usize) -> usize {
        1
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    pub initial_cutoff: usize,
    pub growth_step: usize,
    /// Max elementwise change of the reduced state accepted as converged.
    pub tolerance: f64,
    pub max_cutoff: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            initial_cutoff: 4,
            growth_step: 4,
            tolerance: 1e-10,
            max_cutoff: 63,
        }
    }
}

impl TruncationPolicy {
    /// Default policy with a different starting cutoff.
    pub fn starting_at(initial_cutoff: usize) -> Self {
        TruncationPolicy {
            initial_cutoff,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.initial_cutoff < 2 {
            return Err(Error::InvalidParameter(format!(
                "initial cutoff {} below 2",
                self.initial_cutoff
            )));
        }
        if self.growth_step == 0 {
            return Err(Error::InvalidParameter("growth step must be positive".into()));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        if self.max_cutoff < self.initial_cutoff {
            return Err(Error::InvalidParameter(format!(
                "max cutoff {} below initial cutoff {}",
                self.max_cutoff, self.initial_cutoff
            )));
        }
        Ok(())
    }

    /// The cutoff after `n`, clamped to `max_cutoff`; `None` once `n` is the max.
    fn next(&self, n: usize) -> Option<usize> {
        (n < self.max_cutoff).then(|| (n + self.growth_step).min(self.max_cutoff))
    }
}

/// Exact propagator of a truncated model, reusable across times.
pub struct Propagator {
    cutoff: usize,
    env_dim: usize,
    hamiltonian: CMatrix,
    eig: HermitianEigenDecomposition,
    frame: Option<[f64; 4]>,
}

impl Propagator {
    pub fn new(model: &dyn FieldHamiltonian, cutoff: usize) -> Result<Self> {
        let env_dim = model.env_dim(cutoff);
        let dim = env_dim.saturating_mul(4);
        if dim > MAX_DIMENSION {
            return Err(Error::SizeLimit {
                requested: dim,
                limit: MAX_DIMENSION,
            });
        }
        let hamiltonian = model.hamiltonian(cutoff)?;
        if hamiltonian.rows() != dim {
            return Err(Error::Dimension(format!(
                "hamiltonian has {} rows, expected {dim}",
                hamiltonian.rows()
            )));
        }
        let eig = hermitian_eig(&hamiltonian)?;
        Ok(Propagator {
            cutoff,
            env_dim,
            hamiltonian,
            eig,
            frame: model.rotating_frame(),
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    /// Columns `U(t)·(|i⟩ ⊗ |vac⟩)` for the four qubit basis states.
    fn evolved_columns(&self, t: f64) -> CMatrix {
        let v = self.eig.eigenvectors.as_nalgebra();
        let n = v.nrows();
        let phases: Vec<C64> = self
            .eig
            .eigenvalues
            .iter()
            .map(|&lam| C64::from_polar(1.0, -lam * t))
            .collect();
        let mut out = CMatrix::zeros(n, 4);
        for q in 0..4 {
            let src = q * self.env_dim;
            // coefficients of the initial vector in the eigenbasis, rotated
            let coeff: Vec<C64> = (0..n).map(|k| v[(src, k)].conj() * phases[k]).collect();
            for row in 0..n {
                let mut acc = ZERO;
                for (k, ck) in coeff.iter().enumerate() {
                    acc += v[(row, k)] * ck;
                }
                out[(row, q)] = acc;
            }
        }
        out
    }

    /// Full state `U(t)·(ρ_q ⊗ |vac⟩⟨vac|)·U(t)†`.
    pub fn full_state(&self, qubit_state: &DensityMatrix, t: f64) -> CMatrix {
        let psi = self.evolved_columns(t);
        (&psi * qubit_state.matrix()).mul_adjoint(&psi)
    }

    /// Reduced two-qubit matrix at time `t`, unvalidated.
    pub fn reduced_matrix(&self, qubit_state: &DensityMatrix, t: f64) -> CMatrix {
        let psi = self.evolved_columns(t);
        let weighted = &psi * qubit_state.matrix();
        let env = self.env_dim;
        let mut out = CMatrix::from_fn(4, 4, |a, b| {
            let mut acc = ZERO;
            for f in 0..env {
                let (ra, rb) = (a * env + f, b * env + f);
                for k in 0..4 {
                    acc += weighted[(ra, k)] * psi[(rb, k)].conj();
                }
            }
            acc
        });
        if let Some(energies) = self.frame {
            for a in 0..4 {
                for b in 0..4 {
                    out[(a, b)] *= C64::from_polar(1.0, (energies[a] - energies[b]) * t);
                }
            }
        }
        out.hermitian_part()
    }

    pub fn evolve(&self, qubit_state: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        DensityMatrix::new(self.reduced_matrix(qubit_state, t))
    }

    /// `⟨H⟩` of the full evolved state.
    pub fn total_energy(&self, qubit_state: &DensityMatrix, t: f64) -> f64 {
        (&self.hamiltonian * &self.full_state(qubit_state, t)).trace().re
    }
}

/// A converged oracle evaluation.
#[derive(Clone, Debug)]
pub struct OracleState {
    pub state: DensityMatrix,
    pub cutoff: usize,
    /// Max elementwise change against the next cutoff.
    pub delta: f64,
}

/// Reduced state at time `t`, raising the cutoff until it converges.
pub fn evolve_reduced(
    model: &dyn FieldHamiltonian,
    qubit_state: &DensityMatrix,
    t: f64,
    policy: &TruncationPolicy,
) -> Result<OracleState> {
    policy.validate()?;
    let mut cutoff = policy.initial_cutoff;
    let mut current = Propagator::new(model, cutoff)?.reduced_matrix(qubit_state, t);
    let mut delta = f64::INFINITY;
    while let Some(next) = policy.next(cutoff) {
        let refined = Propagator::new(model, next)?.reduced_matrix(qubit_state, t);
        delta = current.max_abs_diff(&refined);
        if delta < policy.tolerance {
            return Ok(OracleState {
                state: DensityMatrix::new(current)?,
                cutoff,
                delta,
            });
        }
        cutoff = next;
        current = refined;
    }
    Err(Error::TruncationFailure { cutoff, delta })
}

/// Smallest cutoff (from `policy.initial_cutoff` in `growth_step` increments)
/// whose reduced states on an even grid over `[0, t_max]` change by less than
/// `policy.tolerance` under one more increment.
pub fn certify_cutoff(
    model: &dyn FieldHamiltonian,
    qubit_state: &DensityMatrix,
    t_max: f64,
    policy: &TruncationPolicy,
) -> Result<usize> {
    let n = CERTIFY_GRID_POINTS;
    let times: Vec<f64> = (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect();
    certify_cutoff_on(model, qubit_state, &times, policy)
}

/// As [`certify_cutoff`] on an explicit time grid.
pub fn certify_cutoff_on(
    model: &dyn FieldHamiltonian,
    qubit_state: &DensityMatrix,
    times: &[f64],
    policy: &TruncationPolicy,
) -> Result<usize> {
    policy.validate()?;
    let reduced_all =
        |p: &Propagator| -> Vec<CMatrix> { times.par_iter().map(|&t| p.reduced_matrix(qubit_state, t)).collect() };
    let mut cutoff = policy.initial_cutoff;
    let mut current = reduced_all(&Propagator::new(model, cutoff)?);
    let mut delta = f64::INFINITY;
    while let Some(next) = policy.next(cutoff) {
        let refined = reduced_all(&Propagator::new(model, next)?);
        delta = current
            .iter()
            .zip(&refined)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max);
        if delta < policy.tolerance {
            return Ok(cutoff);
        }
        cutoff = next;
        current = refined;
    }
    Err(Error::TruncationFailure { cutoff, delta })
}

/// Reduced states at every time using one propagator at a fixed cutoff.
pub fn evolve_on_grid(
    model: &dyn FieldHamiltonian,
    qubit_state: &DensityMatrix,
    times: &[f64],
    cutoff: usize,
) -> Result<Vec<DensityMatrix>> {
    let p = Propagator::new(model, cutoff)?;
    times.par_iter().map(|&t| p.evolve(qubit_state, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, expm_hermitian_scaled, kron, partial_trace};
    use crate::models::{
        build_initial_qubit_state, dephasing_reduced_state_analytic, ising_reduced_state, tc_reduced_state_exact,
        Family, InitialStateFamily,
    };
    use std::f64::consts::PI;

    fn fam(r: f64, theta: f64, family: Family) -> InitialStateFamily {
        InitialStateFamily::new(r, theta, family).unwrap()
    }

    #[test]
    fn policy_validation() {
        assert!(TruncationPolicy::default().validate().is_ok());
        assert!(TruncationPolicy::starting_at(1).validate().is_err());
        assert!(TruncationPolicy {
            growth_step: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(TruncationPolicy {
            tolerance: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(TruncationPolicy {
            max_cutoff: 3,
            ..Default::default()
        }
        .validate()
        .is_err());
        let p = TruncationPolicy::default();
        assert_eq!(p.next(60), Some(63));
        assert_eq!(p.next(63), None);
    }

    #[test]
    fn propagator_matches_dense_exponential_and_partial_trace() {
        let params = TavisCummingsParams::resonant(1.0, 0.3).unwrap();
        let model = TavisCummingsOracle(params);
        let rho_q = build_initial_qubit_state(&fam(0.6, 0.7, Family::EeGg));
        let cutoff = 3;
        let prop = Propagator::new(&model, cutoff).unwrap();
        let t = 2.1;
        let h = tc_full_hamiltonian(&params, cutoff).unwrap();
        let u = expm_hermitian_scaled(&h, c(0.0, -t)).unwrap();
        let mut vac = CMatrix::zeros(cutoff + 1, cutoff + 1);
        vac[(0, 0)] = c(1.0, 0.0);
        let full = kron(rho_q.matrix(), &vac).unwrap().conjugate_by(&u);
        assert!(full.max_abs_diff(&prop.full_state(&rho_q, t)) < 1e-13);
        let reduced = partial_trace(&full, &[2, 2, cutoff + 1], &[0, 1]).unwrap();
        let frame = CMatrix::from_diagonal(&model.rotating_frame().unwrap().map(|e| C64::from_polar(1.0, e * t)));
        let want = reduced.conjugate_by(&frame);
        assert!(prop.reduced_matrix(&rho_q, t).max_abs_diff(&want) < 1e-13);
    }

    #[test]
    fn tc_cutoff_two_is_exact() {
        let model = TavisCummingsOracle(TavisCummingsParams::resonant(1.0, 1.0).unwrap());
        for (r, theta) in [(1.0, 0.2), (0.5, 1.4)] {
            let rho_q = build_initial_qubit_state(&fam(r, theta, Family::EeGg));
            let p2 = Propagator::new(&model, 2).unwrap();
            let p4 = Propagator::new(&model, 4).unwrap();
            for k in 0..20 {
                let t = 0.7 * k as f64;
                assert!(p2.reduced_matrix(&rho_q, t).max_abs_diff(&p4.reduced_matrix(&rho_q, t)) < 1e-13);
            }
            assert_eq!(
                certify_cutoff(&model, &rho_q, 15.0, &TruncationPolicy::starting_at(2)).unwrap(),
                2
            );
        }
    }

    #[test]
    fn tc_oracle_matches_exact_closed_form() {
        let params = TavisCummingsParams::resonant(1.0, 1.0).unwrap();
        let model = TavisCummingsOracle(params);
        for (r, theta, family) in [(0.5, 0.3, Family::EeGg), (0.8, 1.1, Family::EgGe)] {
            let f = fam(r, theta, family);
            let rho_q = build_initial_qubit_state(&f);
            let p = Propagator::new(&model, 2).unwrap();
            for k in 0..30 {
                let gt = 0.5 * k as f64;
                let oracle = p.reduced_matrix(&rho_q, gt / params.g);
                let exact = tc_reduced_state_exact(&params, &f, gt).unwrap();
                assert!(oracle.max_abs_diff(exact.matrix()) < 1e-12, "gt={gt}");
            }
        }
    }

    #[test]
    fn ising_oracle_is_plain_conjugation() {
        let params = IsingParams::from_rescaled(1.0, 0.5).unwrap();
        let f = fam(0.4, 0.9, Family::EeGg);
        let rho_q = build_initial_qubit_state(&f);
        let policy = TruncationPolicy::default();
        for t in [0.0, 1.3, 7.7] {
            let got = evolve_reduced(&IsingOracle(params), &rho_q, t, &policy).unwrap();
            assert_eq!(got.cutoff, policy.initial_cutoff);
            let want = ising_reduced_state(&params, &f, t).unwrap();
            assert!(got.state.matrix().max_abs_diff(want.matrix()) < 1e-12);
        }
    }

    #[test]
    fn dephasing_oracle_matches_closed_form() {
        let params = DephasingParams::single_mode(1.0, 3.0, 1.0, 0.5).unwrap();
        let model = DephasingOracle(params.clone());
        let f = fam(0.5, PI / 20.0, Family::EgGe);
        let rho_q = build_initial_qubit_state(&f);
        let policy = TruncationPolicy::default();
        let cutoff = certify_cutoff(&model, &rho_q, 2.0 * PI, &policy).unwrap();
        let p = Propagator::new(&model, cutoff).unwrap();
        for k in 0..=40 {
            let t = 2.0 * PI * k as f64 / 40.0;
            let want = dephasing_reduced_state_analytic(&params, &f, t).unwrap();
            assert!(p.reduced_matrix(&rho_q, t).max_abs_diff(want.matrix()) < 1e-8, "t={t}");
        }
    }

    #[test]
    fn decoupled_bath_certifies_initial_cutoff() {
        let model = DephasingOracle(DephasingParams::single_mode(1.0, 3.0, 1.0, 0.0).unwrap());
        let rho_q = build_initial_qubit_state(&fam(0.5, 0.4, Family::EgGe));
        let policy = TruncationPolicy::default();
        assert_eq!(
            certify_cutoff(&model, &rho_q, 10.0, &policy).unwrap(),
            policy.initial_cutoff
        );
    }

    #[test]
    fn certified_cutoff_grows_with_coupling() {
        let rho_q = build_initial_qubit_state(&fam(1.0, PI / 20.0, Family::EgGe));
        let policy = TruncationPolicy::default();
        let mut last = 0;
        for gamma in [0.0, 0.25, 0.5, 1.0, 2.0] {
            let model = DephasingOracle(DephasingParams::single_mode(1.0, 3.0, 1.0, gamma).unwrap());
            let n = certify_cutoff(&model, &rho_q, 4.0 * PI, &policy).unwrap();
            assert!(n >= last, "gamma={gamma}: {n} < {last}");
            last = n;
        }
        assert!(last > policy.initial_cutoff);
    }

    #[test]
    fn truncation_failure_reports_delta() {
        let model = DephasingOracle(DephasingParams::single_mode(1.0, 3.0, 1.0, 2.0).unwrap());
        let rho_q = build_initial_qubit_state(&fam(1.0, 0.3, Family::EgGe));
        let tight = TruncationPolicy {
            initial_cutoff: 2,
            growth_step: 2,
            tolerance: 1e-10,
            max_cutoff: 8,
        };
        match evolve_reduced(&model, &rho_q, 3.0, &tight) {
            Err(Error::TruncationFailure { cutoff, delta }) => {
                assert_eq!(cutoff, 8);
                assert!(delta > 1e-10);
            }
            other => panic!("expected truncation failure, got {other:?}"),
        }
    }

    #[test]
    fn evolution_is_linear_in_initial_state() {
        let model = DephasingOracle(DephasingParams::single_mode(1.0, 3.0, 1.0, 0.5).unwrap());
        let p = Propagator::new(&model, 16).unwrap();
        let r = 0.35;
        let f = fam(r, 0.6, Family::EgGe);
        let mixed = build_initial_qubit_state(&f);
        let pure = build_initial_qubit_state(&fam(1.0, 0.6, Family::EgGe));
        let identity = DensityMatrix::maximally_mixed();
        for t in [0.5, 2.0, 4.4] {
            let combined =
                &p.reduced_matrix(&identity, t).scale_real(1.0 - r) + &p.reduced_matrix(&pure, t).scale_real(r);
            assert!(p.reduced_matrix(&mixed, t).max_abs_diff(&combined) < 1e-12);
        }
    }

    #[test]
    fn total_energy_is_conserved() {
        let rho_q = build_initial_qubit_state(&fam(0.7, 0.5, Family::EgGe));
        let deph = Propagator::new(
            &DephasingOracle(DephasingParams::single_mode(1.0, 3.0, 1.0, 1.0).unwrap()),
            20,
        )
        .unwrap();
        let tc = Propagator::new(
            &TavisCummingsOracle(TavisCummingsParams::resonant(1.0, 0.4).unwrap()),
            3,
        )
        .unwrap();
        for p in [&deph, &tc] {
            let e0 = p.total_energy(&rho_q, 0.0);
            for t in [0.3, 1.7, 6.0, 12.5] {
                assert!((p.total_energy(&rho_q, t) - e0).abs() <= 1e-10 * e0.abs().max(1.0));
            }
        }
    }

    #[test]
    fn oracle_states_are_valid() {
        let model = DephasingOracle(DephasingParams::single_mode(1.0, 3.0, 1.0, 1.0).unwrap());
        let rho_q = build_initial_qubit_state(&fam(0.5, 0.2, Family::EgGe));
        let states = evolve_on_grid(&model, &rho_q, &[0.0, 1.0, 2.0, 3.0], 32).unwrap();
        for s in states {
            let d = s.defects();
            assert!(d.trace_error < 1e-12 && d.hermiticity < 1e-12 && d.min_eigenvalue > -1e-10);
        }
    }

    #[test]
    fn size_limit_enforced() {
        let params =
            DephasingParams::new(1.0, 3.0, vec![crate::models::BathMode { omega: 1.0, gamma: 0.1 }; 3]).unwrap();
        assert!(matches!(
            Propagator::new(&DephasingOracle(params), 15),
            Err(Error::SizeLimit { .. })
        ));
    }
}
