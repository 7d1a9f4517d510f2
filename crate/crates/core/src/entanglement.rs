//! Two-qubit states and the observables computed on them: concurrence in
//! three flavours, purity, and the free and Ising interaction energies.
//!
//! A [`DensityMatrix`] is always stored in product ordering
//! `(|ee⟩, |eg⟩, |ge⟩, |gg⟩)`. Element accessors that take 1-based labels use
//! the printed ordering `1 = ee, 2 = gg, 3 = eg, 4 = ge`
//! (see [`BasisConvention`]).

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eig, kron, pauli, sqrtm_psd_with_clamp, CMatrix, C64};
use crate::models::BasisConvention;

/// Hermiticity and trace tolerance for a valid state.
pub const STATE_TOL: f64 = 1e-10;
/// Most negative eigenvalue a valid state may carry.
pub const STATE_MIN_EIGENVALUE: f64 = -1e-8;
/// Max summed modulus outside the X pattern for a state to count as an X state.
pub const X_PATTERN_TOL: f64 = 1e-12;

/// Validated 4×4 two-qubit density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

/// Deviation of a matrix from the density-matrix invariants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateDefects {
    pub trace_error: f64,
    pub hermiticity: f64,
    pub min_eigenvalue: f64,
}

impl StateDefects {
    pub fn of(m: &CMatrix) -> Result<Self> {
        let hermiticity = m.hermiticity_defect();
        let min_eigenvalue = hermitian_eig(&m.hermitian_part())?.eigenvalues[0];
        Ok(StateDefects {
            trace_error: (m.trace() - c(1.0, 0.0)).norm(),
            hermiticity,
            min_eigenvalue,
        })
    }

    /// True when all three defects are within `tol` (eigenvalue floor `-tol`).
    pub fn within(&self, tol: f64) -> bool {
        self.trace_error <= tol && self.hermiticity <= tol && self.min_eigenvalue >= -tol
    }
}

impl DensityMatrix {
    /// Validates a 4×4 matrix given in product ordering.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::InvalidState(format!(
                "expected 4x4, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        m.check_finite()?;
        let d = StateDefects::of(&m)?;
        if d.hermiticity > STATE_TOL {
            return Err(Error::InvalidState(format!("hermiticity defect {:.3e}", d.hermiticity)));
        }
        if d.trace_error > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "trace deviates from 1 by {:.3e}",
                d.trace_error
            )));
        }
        if d.min_eigenvalue < STATE_MIN_EIGENVALUE {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:.3e}",
                d.min_eigenvalue
            )));
        }
        Ok(DensityMatrix { m })
    }

    /// Validates a matrix given in the printed ordering `(ee, gg, eg, ge)`.
    pub fn from_printed(m: &CMatrix) -> Result<Self> {
        Self::new(BasisConvention::from_printed(m))
    }

    /// `I/4`.
    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            m: CMatrix::identity(4).scale_real(0.25),
        }
    }

    /// `|ψ⟩⟨ψ|` for a normalized product-ordering amplitude vector.
    pub fn from_pure(psi: &[C64; 4]) -> Result<Self> {
        Self::new(CMatrix::outer(psi, psi))
    }

    /// Matrix in product ordering.
    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    /// Matrix in the printed ordering `(ee, gg, eg, ge)`.
    pub fn printed(&self) -> CMatrix {
        BasisConvention::to_printed(&self.m)
    }

    /// Element `ρ_ij` with printed 1-based labels.
    pub fn element(&self, i: usize, j: usize) -> C64 {
        self.m[(BasisConvention::product_index(i), BasisConvention::product_index(j))]
    }

    /// Real part of the printed diagonal element `ρ_ii`.
    pub fn population(&self, i: usize) -> f64 {
        self.element(i, i).re
    }

    pub fn defects(&self) -> StateDefects {
        StateDefects::of(&self.m).expect("validated state has a finite Hermitian part")
    }

    /// `U·ρ·U†`.
    pub fn evolve(&self, u: &CMatrix) -> Result<Self> {
        Self::new(self.m.conjugate_by(u))
    }

    /// Summed modulus of the entries outside the X pattern.
    pub fn off_x_pattern_mass(&self) -> f64 {
        let mut mass = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 {
                    mass += self.m[(i, j)].norm();
                }
            }
        }
        mass
    }

    pub fn is_x_state(&self) -> bool {
        self.off_x_pattern_mass() <= X_PATTERN_TOL
    }
}

/// All concurrence variants of one state.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcurrenceReport {
    pub wootters: f64,
    /// Present when the state is an X state.
    pub x_state_closed_form: Option<f64>,
    /// Literal single-branch cutoff formula; present for every state.
    pub paper_cutoff_form: Option<f64>,
    /// Square roots of the eigenvalues of `√ρ·ρ̃·√ρ`, descending.
    pub spin_flip_eigenvalues: [f64; 4],
}

/// `σy ⊗ σy`.
fn spin_flip_operator() -> CMatrix {
    kron(&pauli::y(), &pauli::y()).expect("4x4")
}

/// Spin-flipped state `ρ̃ = (σy⊗σy)·ρ*·(σy⊗σy)`.
pub fn spin_flip(rho: &DensityMatrix) -> CMatrix {
    let yy = spin_flip_operator();
    &(&yy * &rho.matrix().conj()) * &yy
}

/// Wootters concurrence `max(0, λ1 - λ2 - λ3 - λ4)`.
///
/// The `λ_i` are the square roots of the eigenvalues of `√ρ·ρ̃·√ρ`. They are
/// obtained as the singular values of `√ρ·(σy⊗σy)·√ρ*`, whose Gram matrix is
/// `√ρ·ρ̃·√ρ`; this keeps full precision on the small `λ_i` of nearly pure
/// states, where square-rooting computed eigenvalues would not.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<ConcurrenceReport> {
    let lambdas = spin_flip_singular_values(rho)?;
    let wootters = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    Ok(ConcurrenceReport {
        wootters,
        x_state_closed_form: x_state_concurrence(rho).ok(),
        paper_cutoff_form: Some(paper_cutoff_concurrence(rho)),
        spin_flip_eigenvalues: lambdas,
    })
}

fn spin_flip_singular_values(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let sqrt_rho = sqrtm_psd_with_clamp(rho.matrix(), -STATE_MIN_EIGENVALUE)?;
    let a = &(&sqrt_rho * &spin_flip_operator()) * &sqrt_rho.conj();
    let mut sv: Vec<f64> = a.into_nalgebra().singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok([sv[0], sv[1], sv[2], sv[3]])
}

/// Square roots of the eigenvalues of `√ρ·ρ̃·√ρ` taken literally from a
/// Hermitian eigendecomposition, descending. Loses roughly half the digits
/// of the small values; kept as an independent cross-check.
pub fn spin_flip_eigenvalues_direct(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let sqrt_rho = sqrtm_psd_with_clamp(rho.matrix(), -STATE_MIN_EIGENVALUE)?;
    let r = &(&sqrt_rho * &spin_flip(rho)) * &sqrt_rho;
    let eig = hermitian_eig(&r.hermitian_part())?;
    let mut lambdas = [0.0; 4];
    for (slot, mu) in lambdas.iter_mut().zip(eig.eigenvalues.iter().rev()) {
        *slot = mu.max(0.0).sqrt();
    }
    Ok(lambdas)
}

/// Closed-form concurrence of an X state:
/// `2·max(0, |ρ12| - √(ρ33ρ44), |ρ34| - √(ρ11ρ22))` in printed labels.
pub fn x_state_concurrence(rho: &DensityMatrix) -> Result<f64> {
    let mass = rho.off_x_pattern_mass();
    if mass > X_PATTERN_TOL {
        return Err(Error::NotXState { mass });
    }
    let p = |i| rho.population(i).max(0.0);
    let outer = rho.element(1, 2).norm() - (p(3) * p(4)).sqrt();
    let inner = rho.element(3, 4).norm() - (p(1) * p(2)).sqrt();
    Ok(2.0 * outer.max(inner).max(0.0))
}

/// `max(0, Re ρ34 - √(ρ11ρ22))`, evaluated literally: no factor two and no
/// `ρ12` branch. Only meant for comparing against figure shapes.
pub fn paper_cutoff_concurrence(rho: &DensityMatrix) -> f64 {
    let p = |i| rho.population(i).max(0.0);
    (rho.element(3, 4).re - (p(1) * p(2)).sqrt()).max(0.0)
}

/// `⟨(ω0/2)(σz_A + σz_B)⟩ = ω0·(ρ11 - ρ22)`.
pub fn energy_h0(rho: &DensityMatrix, omega0: f64) -> f64 {
    omega0 * (rho.population(1) - rho.population(2))
}

/// Normalization of the Ising interaction energy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InteractionNormalization {
    /// `⟨g σx_A σx_B⟩`, the form used for the energy-transfer plots.
    #[default]
    Plotted,
    /// `⟨(g/2) σx_A σx_B⟩`, the coefficient that appears in the Hamiltonian.
    Hamiltonian,
}

/// Ising interaction energy `g·Tr(ρ σx⊗σx)` (halved under
/// [`InteractionNormalization::Hamiltonian`]).
pub fn energy_hi_ising(rho: &DensityMatrix, g: f64, norm: InteractionNormalization) -> f64 {
    let xx = kron(&pauli::x(), &pauli::x()).expect("4x4");
    let expectation = (rho.matrix() * &xx).trace().re;
    let factor = match norm {
        InteractionNormalization::Plotted => 1.0,
        InteractionNormalization::Hamiltonian => 0.5,
    };
    factor * g * expectation
}

/// `Tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
    m.to_row_major().iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm_hermitian_scaled, ONE, ZERO};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn bell() -> DensityMatrix {
        let s = 0.5f64.sqrt();
        DensityMatrix::from_pure(&[c(s, 0.0), ZERO, ZERO, c(s, 0.0)]).unwrap()
    }

    fn random_matrix(rng: &mut StdRng, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn random_state(rng: &mut StdRng) -> DensityMatrix {
        let a = random_matrix(rng, 4);
        let p = a.mul_adjoint(&a);
        let tr = p.trace().re;
        DensityMatrix::new(p.scale_real(1.0 / tr)).unwrap()
    }

    fn random_local_unitary(rng: &mut StdRng) -> CMatrix {
        let ha = random_matrix(rng, 2).hermitian_part();
        let hb = random_matrix(rng, 2).hermitian_part();
        let ua = expm_hermitian_scaled(&ha, c(0.0, -3.0)).unwrap();
        let ub = expm_hermitian_scaled(&hb, c(0.0, -3.0)).unwrap();
        kron(&ua, &ub).unwrap()
    }

    /// `(1-r)/4·I + r|φ⟩⟨φ|` with `φ = sinθ|ee⟩ + cosθ|gg⟩`, built independently of the models module.
    fn werner_ee_gg(r: f64, theta: f64) -> DensityMatrix {
        let phi = [c(theta.sin(), 0.0), ZERO, ZERO, c(theta.cos(), 0.0)];
        let m = &CMatrix::identity(4).scale_real((1.0 - r) / 4.0) + &CMatrix::outer(&phi, &phi).scale_real(r);
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        assert!(DensityMatrix::new(CMatrix::identity(4)).is_err());
        assert!(DensityMatrix::new(CMatrix::identity(2).scale_real(0.5)).is_err());
        let neg = CMatrix::from_real_diagonal(&[0.6, 0.6, -0.1, -0.1]);
        assert!(DensityMatrix::new(neg).is_err());
        let mut skew = CMatrix::identity(4).scale_real(0.25);
        skew[(0, 1)] = c(0.1, 0.0);
        assert!(DensityMatrix::new(skew).is_err());
    }

    #[test]
    fn printed_element_labels() {
        let rho = werner_ee_gg(0.5, FRAC_PI_8);
        let s2 = FRAC_PI_8.sin().powi(2);
        assert!((rho.population(1) - (0.125 + 0.5 * s2)).abs() < 1e-15);
        assert!((rho.population(2) - (0.125 + 0.5 * (1.0 - s2))).abs() < 1e-15);
        assert!((rho.element(1, 2).re - 0.5 * FRAC_PI_8.sin() * FRAC_PI_8.cos()).abs() < 1e-15);
        assert_eq!(rho.population(3), 0.125);
    }

    #[test]
    fn wootters_examples() {
        let b = wootters_concurrence(&bell()).unwrap();
        assert!((b.wootters - 1.0).abs() < 1e-12);
        assert_eq!(b.x_state_closed_form.map(|x| (x - 1.0).abs() < 1e-12), Some(true));
        let mixed = wootters_concurrence(&DensityMatrix::maximally_mixed()).unwrap();
        assert_eq!(mixed.wootters, 0.0);
        assert!(mixed.spin_flip_eigenvalues.iter().all(|&l| (l - 0.25).abs() < 1e-12));
    }

    #[test]
    fn wootters_matches_werner_formula() {
        for i in 0..=10 {
            for j in 0..=10 {
                let r = i as f64 / 10.0;
                let theta = j as f64 * std::f64::consts::FRAC_PI_2 / 10.0;
                let want = (r * (2.0 * theta).sin().abs() - (1.0 - r) / 2.0).max(0.0);
                let got = wootters_concurrence(&werner_ee_gg(r, theta)).unwrap().wootters;
                assert!((got - want).abs() < 1e-10, "r={r} θ={theta}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn wootters_report_invariants() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let rho = random_state(&mut rng);
            let rep = wootters_concurrence(&rho).unwrap();
            let l = rep.spin_flip_eigenvalues;
            assert!(l.windows(2).all(|w| w[0] >= w[1]));
            assert_eq!(rep.wootters, (l[0] - l[1] - l[2] - l[3]).max(0.0));
            assert!((0.0..=1.0).contains(&rep.wootters));
        }
    }

    #[test]
    fn singular_value_route_matches_direct_spectrum() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..200 {
            let rho = random_state(&mut rng);
            let a = wootters_concurrence(&rho).unwrap().spin_flip_eigenvalues;
            let b = spin_flip_eigenvalues_direct(&rho).unwrap();
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn local_unitary_invariance() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let rho = random_state(&mut rng);
            let u = random_local_unitary(&mut rng);
            let before = wootters_concurrence(&rho).unwrap().wootters;
            let after = wootters_concurrence(&rho.evolve(&u).unwrap()).unwrap().wootters;
            assert!((before - after).abs() < 1e-10);
        }
    }

    #[test]
    fn x_state_examples_and_errors() {
        assert_eq!(x_state_concurrence(&DensityMatrix::maximally_mixed()).unwrap(), 0.0);
        assert!((x_state_concurrence(&bell()).unwrap() - 1.0).abs() < 1e-15);
        let s = 0.5f64.sqrt();
        // |e⟩ ⊗ (|e⟩+|g⟩)/√2 has ee-eg coherence, outside the X pattern
        let prod = DensityMatrix::from_pure(&[c(s, 0.0), c(s, 0.0), ZERO, ZERO]).unwrap();
        assert!(matches!(x_state_concurrence(&prod), Err(Error::NotXState { .. })));
        assert_eq!(wootters_concurrence(&prod).unwrap().x_state_closed_form, None);
    }

    #[test]
    fn paper_cutoff_examples() {
        assert_eq!(paper_cutoff_concurrence(&bell()), 0.0);
        assert_eq!(paper_cutoff_concurrence(&DensityMatrix::maximally_mixed()), 0.0);
        let s = 0.5f64.sqrt();
        // (|eg⟩+|ge⟩)/√2: ρ34 = 1/2, ρ11 = ρ22 = 0
        let plus = DensityMatrix::from_pure(&[ZERO, c(s, 0.0), c(s, 0.0), ZERO]).unwrap();
        assert!((paper_cutoff_concurrence(&plus) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn energy_examples() {
        let gg = DensityMatrix::from_pure(&[ZERO, ZERO, ZERO, ONE]).unwrap();
        assert_eq!(energy_h0(&gg, 1.3), -1.3);
        assert_eq!(energy_h0(&DensityMatrix::maximally_mixed(), 1.0), 0.0);
        let g = 0.8;
        assert!((energy_hi_ising(&bell(), g, InteractionNormalization::Plotted) - g).abs() < 1e-15);
        assert!((energy_hi_ising(&bell(), g, InteractionNormalization::Hamiltonian) - g / 2.0).abs() < 1e-15);
        assert_eq!(
            energy_hi_ising(&DensityMatrix::maximally_mixed(), g, InteractionNormalization::Plotted),
            0.0
        );
    }

    #[test]
    fn energy_hi_matches_printed_coherences() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..50 {
            let rho = random_state(&mut rng);
            let want = 2.0 * 1.7 * (rho.element(1, 2) + rho.element(3, 4)).re;
            let got = energy_hi_ising(&rho, 1.7, InteractionNormalization::Plotted);
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn purity_examples() {
        assert!((purity(&bell()) - 1.0).abs() < 1e-15);
        assert!((purity(&DensityMatrix::maximally_mixed()) - 0.25).abs() < 1e-15);
        for r in [0.0, 0.3, 0.5, 0.9, 1.0] {
            let want = (1.0 + 3.0 * r * r) / 4.0;
            assert!((purity(&werner_ee_gg(r, FRAC_PI_4)) - want).abs() < 1e-14);
        }
    }
}
