//! The three two-qubit models: cavity-coupled (Tavis–Cummings), dephasing
//! bath, and the closed Ising pair.
//!
//! Each model provides its full-space Hamiltonian (consumed by the
//! brute-force propagator) and its closed-form reduced state. Tensor ordering
//! is always qubit A ⊗ qubit B ⊗ field modes, with `|e⟩` before `|g⟩` and
//! Fock levels ascending.

use std::f64::consts::FRAC_PI_2;

use crate::entanglement::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{boson, c, kron, kron_all, pauli, CMatrix, C64, ONE, ZERO};

/// Conversions between product ordering and the two printed orderings.
///
/// * product: `(ee, eg, ge, gg)`: the storage order of every matrix here
/// * printed: `|1⟩=ee, |2⟩=gg, |3⟩=eg, |4⟩=ge`
/// * plus-minus: `|1⟩=ee, |2⟩=gg, |3⟩=+, |4⟩=-` with `|±⟩ = (|eg⟩ ± |ge⟩)/√2`
#[derive(Clone, Copy, Debug)]
pub struct BasisConvention;

impl BasisConvention {
    /// Product index of each printed label (`PRINTED_TO_PRODUCT[label - 1]`).
    pub const PRINTED_TO_PRODUCT: [usize; 4] = [0, 3, 1, 2];

    /// Product index of a 1-based printed label.
    pub fn product_index(label: usize) -> usize {
        assert!((1..=4).contains(&label), "printed labels run from 1 to 4");
        Self::PRINTED_TO_PRODUCT[label - 1]
    }

    pub fn to_printed(m: &CMatrix) -> CMatrix {
        m.permuted(&Self::PRINTED_TO_PRODUCT)
    }

    pub fn from_printed(m: &CMatrix) -> CMatrix {
        let mut inverse = [0usize; 4];
        for (label, &p) in Self::PRINTED_TO_PRODUCT.iter().enumerate() {
            inverse[p] = label;
        }
        m.permuted(&inverse)
    }

    /// Columns are the plus-minus basis vectors written in product ordering.
    pub fn plus_minus_unitary() -> CMatrix {
        let s = 0.5f64.sqrt();
        CMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, s, s],
            &[0.0, 0.0, s, -s],
            &[0.0, 1.0, 0.0, 0.0],
        ])
        .expect("4x4")
    }

    pub fn to_plus_minus(m: &CMatrix) -> CMatrix {
        let w = Self::plus_minus_unitary();
        &(&w.adjoint() * m) * &w
    }

    pub fn from_plus_minus(m: &CMatrix) -> CMatrix {
        m.conjugate_by(&Self::plus_minus_unitary())
    }
}

/// Which pure state is mixed with the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `sinθ|ee⟩ + cosθ|gg⟩`
    EeGg,
    /// `sinθ|eg⟩ + cosθ|ge⟩`
    EgGe,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::EeGg => "ee_gg",
            Family::EgGe => "eg_ge",
        }
    }
}

/// `(1-r)/4·I + r|φ⟩⟨φ|` parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialStateFamily {
    pub r: f64,
    pub theta: f64,
    pub family: Family,
}

impl InitialStateFamily {
    pub fn new(r: f64, theta: f64, family: Family) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidParameter(format!("purity weight r = {r} outside [0, 1]")));
        }
        if !(0.0..=FRAC_PI_2 + 1e-12).contains(&theta) {
            return Err(Error::InvalidParameter(format!(
                "mixing angle theta = {theta} outside [0, pi/2]"
            )));
        }
        Ok(InitialStateFamily { r, theta, family })
    }

    /// `|φ⟩` in product ordering.
    pub fn pure_component(&self) -> [C64; 4] {
        let (s, co) = (c(self.theta.sin(), 0.0), c(self.theta.cos(), 0.0));
        match self.family {
            Family::EeGg => [s, ZERO, ZERO, co],
            Family::EgGe => [ZERO, s, co, ZERO],
        }
    }
}

pub fn build_initial_qubit_state(f: &InitialStateFamily) -> DensityMatrix {
    let phi = f.pure_component();
    let m = &CMatrix::identity(4).scale_real((1.0 - f.r) / 4.0) + &CMatrix::outer(&phi, &phi).scale_real(f.r);
    DensityMatrix::new(m).expect("mixture of identity and a normalized projector")
}

/// `(ω0/2)(σz_A + σz_B)` on the two qubits.
pub fn qubit_free_hamiltonian(omega0: f64) -> CMatrix {
    let i2 = pauli::identity();
    let z = pauli::z();
    (&kron(&z, &i2).expect("4x4") + &kron(&i2, &z).expect("4x4")).scale_real(omega0 / 2.0)
}

/// `σ+_A σ-_B + σ+_B σ-_A`: the flip-flop exchange between the qubits.
pub fn flip_flop() -> CMatrix {
    let up_down = kron(&pauli::raising(), &pauli::lowering()).expect("4x4");
    &up_down + &up_down.adjoint()
}

// ---------------------------------------------------------------------------
// Tavis–Cummings
// ---------------------------------------------------------------------------

/// Two qubits resonantly coupled to one cavity mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TavisCummingsParams {
    pub omega0: f64,
    pub omega: f64,
    pub g: f64,
}

impl TavisCummingsParams {
    pub fn new(omega0: f64, omega: f64, g: f64) -> Result<Self> {
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::InvalidParameter(format!("coupling g = {g} must be positive")));
        }
        if (omega0 - omega).abs() > 1e-12 * omega0.abs().max(omega.abs()).max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "closed form requires resonance, got omega0 = {omega0}, omega = {omega}"
            )));
        }
        Ok(TavisCummingsParams { omega0, omega, g })
    }

    /// Resonant parameters with `ω0 = ω`.
    pub fn resonant(omega0: f64, g: f64) -> Result<Self> {
        Self::new(omega0, omega0, g)
    }
}

/// Which closed form to use for the Tavis–Cummings reduced state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TcClosedForm {
    /// Full solution, evolving both the pure and the `(1-r)/4` parts.
    #[default]
    Exact,
    /// Literal matrix elements as commonly printed; these hold the
    /// `(1-r)/4` background fixed and only agree with the dynamics at `r = 1`.
    Printed,
}

impl TcClosedForm {
    pub fn name(self) -> &'static str {
        match self {
            TcClosedForm::Exact => "exact",
            TcClosedForm::Printed => "printed",
        }
    }
}

/// Printed closed-form reduced state at rescaled time `gt`, in the frame
/// rotating with `(ω0/2)(σz_A + σz_B)`. Only the `ee/gg` family has a form.
pub fn tc_reduced_state_analytic(_p: &TavisCummingsParams, f: &InitialStateFamily, gt: f64) -> Result<DensityMatrix> {
    if f.family != Family::EeGg {
        return Err(Error::UnsupportedAnalytic(
            "printed Tavis-Cummings form covers only the ee/gg family; use the exact form or the oracle".into(),
        ));
    }
    let r = f.r;
    let (s, co) = (f.theta.sin(), f.theta.cos());
    let x = 6f64.sqrt() * gt;
    let m = (1.0 - r) / 4.0;
    let a = (x.cos() + 2.0) / 3.0;
    let b = (x.cos() - 1.0) / 3.0;
    let side = r * x.sin().powi(2) * s * s / 6.0;

    let mut printed = CMatrix::zeros(4, 4);
    printed[(0, 0)] = c(m + r * (s * a).powi(2), 0.0);
    printed[(1, 1)] = c(m + r * co * co + 2.0 * r * (s * b).powi(2), 0.0);
    printed[(0, 1)] = c(r * a * s * co, 0.0);
    printed[(1, 0)] = printed[(0, 1)];
    printed[(2, 2)] = c(m + side, 0.0);
    printed[(3, 3)] = c(m + side, 0.0);
    printed[(2, 3)] = c(side, 0.0);
    printed[(3, 2)] = c(side, 0.0);
    DensityMatrix::from_printed(&printed)
}

/// Operators `K_n` with `U(|χ⟩⊗|0⟩) = Σ_n K_n|χ⟩ ⊗ |n⟩` for the resonant
/// coupling in the rotating frame, `n = 0, 1, 2`.
pub fn tc_vacuum_kraus(gt: f64) -> [CMatrix; 3] {
    let x = 6f64.sqrt() * gt;
    let y = 2f64.sqrt() * gt;
    let s = 0.5f64.sqrt();
    // product ordering: 0 = ee, 1 = eg, 2 = ge, 3 = gg
    let mut k0 = CMatrix::zeros(4, 4);
    k0[(0, 0)] = c((x.cos() + 2.0) / 3.0, 0.0);
    k0[(1, 1)] = c((y.cos() + 1.0) / 2.0, 0.0);
    k0[(2, 2)] = k0[(1, 1)];
    k0[(1, 2)] = c((y.cos() - 1.0) / 2.0, 0.0);
    k0[(2, 1)] = k0[(1, 2)];
    k0[(3, 3)] = ONE;

    // |ee,0⟩ → -i sin(x)/√3 |+,1⟩;  |eg,0⟩, |ge,0⟩ → -i sin(y)/√2 |gg,1⟩
    let mut k1 = CMatrix::zeros(4, 4);
    let to_plus = c(0.0, -x.sin() / 3f64.sqrt());
    k1[(1, 0)] = to_plus * s;
    k1[(2, 0)] = to_plus * s;
    k1[(3, 1)] = c(0.0, -y.sin() * s);
    k1[(3, 2)] = k1[(3, 1)];

    let mut k2 = CMatrix::zeros(4, 4);
    k2[(3, 0)] = c(2f64.sqrt() * (x.cos() - 1.0) / 3.0, 0.0);
    [k0, k1, k2]
}

/// Exact reduced state at rescaled time `gt` for any initial family, in the
/// same rotating frame as [`tc_reduced_state_analytic`].
pub fn tc_reduced_state_exact(_p: &TavisCummingsParams, f: &InitialStateFamily, gt: f64) -> Result<DensityMatrix> {
    let rho0 = build_initial_qubit_state(f);
    let sum = tc_vacuum_kraus(gt)
        .iter()
        .map(|k| rho0.matrix().conjugate_by(k))
        .reduce(|a, b| &a + &b)
        .expect("three Kraus operators");
    DensityMatrix::new(sum.hermitian_part())
}

/// Full Hamiltonian on qubit A ⊗ qubit B ⊗ field with Fock levels
/// `0..=fock_cutoff`.
pub fn tc_full_hamiltonian(p: &TavisCummingsParams, fock_cutoff: usize) -> Result<CMatrix> {
    if fock_cutoff < 2 {
        return Err(Error::InvalidParameter(format!("Fock cutoff {fock_cutoff} below 2")));
    }
    let i2 = pauli::identity();
    let i_f = CMatrix::identity(fock_cutoff + 1);
    let a = boson::annihilation(fock_cutoff);
    let ad = boson::creation(fock_cutoff);

    let free = kron(&qubit_free_hamiltonian(p.omega0), &i_f)?;
    let field = kron(&CMatrix::identity(4), &boson::number(fock_cutoff).scale_real(p.omega))?;
    let sp_a = kron(&pauli::raising(), &i2)?;
    let sp_b = kron(&i2, &pauli::raising())?;
    let sp = &sp_a + &sp_b;
    let absorb = kron(&sp, &a)?;
    let coupling = (&absorb + &absorb.adjoint()).scale_real(p.g);
    debug_assert!(kron(&sp.adjoint(), &ad)?.max_abs_diff(&absorb.adjoint()) == 0.0);
    Ok(&(&free + &field) + &coupling)
}

/// Total excitation number `σ+_Aσ-_A + σ+_Bσ-_B + a†a`.
pub fn tc_excitation_number(fock_cutoff: usize) -> Result<CMatrix> {
    let excited = CMatrix::from_real_diagonal(&[2.0, 1.0, 1.0, 0.0]);
    let i_f = CMatrix::identity(fock_cutoff + 1);
    Ok(&kron(&excited, &i_f)? + &kron(&CMatrix::identity(4), &boson::number(fock_cutoff))?)
}

// ---------------------------------------------------------------------------
// Dephasing bath
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathMode {
    pub omega: f64,
    pub gamma: f64,
}

/// Exchange-coupled qubits whose flip-flop term couples to a bosonic bath.
#[derive(Clone, Debug, PartialEq)]
pub struct DephasingParams {
    pub omega0: f64,
    /// Qubit–qubit exchange coupling Ω.
    pub exchange: f64,
    pub modes: Vec<BathMode>,
}

impl DephasingParams {
    pub fn new(omega0: f64, exchange: f64, modes: Vec<BathMode>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidParameter("bath needs at least one mode".into()));
        }
        for (j, m) in modes.iter().enumerate() {
            if !(m.omega.is_finite() && m.omega > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "mode {j} frequency {} must be positive",
                    m.omega
                )));
            }
            if !(m.gamma.is_finite() && m.gamma >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "mode {j} coupling {} must be non-negative",
                    m.gamma
                )));
            }
        }
        Ok(DephasingParams {
            omega0,
            exchange,
            modes,
        })
    }

    /// One mode of frequency `omega` with coupling `gamma`.
    pub fn single_mode(omega0: f64, exchange: f64, omega: f64, gamma: f64) -> Result<Self> {
        Self::new(omega0, exchange, vec![BathMode { omega, gamma }])
    }

    /// `D(t) = Π_j exp(4Γ_j²(cos ω_j t - 1)/ω_j²)`.
    pub fn decoherence_factor(&self, t: f64) -> f64 {
        self.modes
            .iter()
            .map(|m| (4.0 * m.gamma * m.gamma * ((m.omega * t).cos() - 1.0) / (m.omega * m.omega)).exp())
            .product()
    }
}

/// Closed-form reduced state at time `t` for the `eg/ge` family. Populations
/// in the `{ee, gg, +, -}` basis are frozen; only the `+/-` coherence evolves.
pub fn dephasing_reduced_state_analytic(p: &DephasingParams, f: &InitialStateFamily, t: f64) -> Result<DensityMatrix> {
    if f.family != Family::EgGe {
        return Err(Error::UnsupportedAnalytic(
            "dephasing closed form covers only the eg/ge family; use the oracle".into(),
        ));
    }
    let r = f.r;
    let m = (1.0 - r) / 4.0;
    let sin2 = (2.0 * f.theta).sin();
    let plus = m + r / 2.0 * (1.0 + sin2);
    let coherence =
        -C64::from_polar(1.0, -2.0 * p.exchange * t) * p.decoherence_factor(t) * (r * (2.0 * f.theta).cos() / 2.0);

    let mut pm = CMatrix::zeros(4, 4);
    pm[(0, 0)] = c(m, 0.0);
    pm[(1, 1)] = c(m, 0.0);
    pm[(2, 2)] = c(plus, 0.0);
    pm[(3, 3)] = c(plus - r * sin2, 0.0);
    pm[(2, 3)] = coherence;
    pm[(3, 2)] = coherence.conj();
    DensityMatrix::new(BasisConvention::from_plus_minus(&pm))
}

/// Full Hamiltonian on qubit A ⊗ qubit B ⊗ mode 1 ⊗ … with one Fock cutoff per mode.
pub fn dephasing_full_hamiltonian(p: &DephasingParams, fock_cutoffs: &[usize]) -> Result<CMatrix> {
    if fock_cutoffs.len() != p.modes.len() {
        return Err(Error::Dimension(format!(
            "{} cutoffs for {} modes",
            fock_cutoffs.len(),
            p.modes.len()
        )));
    }
    let identities: Vec<CMatrix> = fock_cutoffs.iter().map(|&n| CMatrix::identity(n + 1)).collect();
    let env_dim: usize = fock_cutoffs.iter().map(|n| n + 1).product();
    // operator acting on mode `j` only, embedded in the full bath space
    let on_mode = |j: usize, op: &CMatrix| -> Result<CMatrix> {
        let factors: Vec<&CMatrix> = identities
            .iter()
            .enumerate()
            .map(|(k, id)| if k == j { op } else { id })
            .collect();
        kron_all(&factors)
    };

    let exchange = flip_flop();
    let system = &qubit_free_hamiltonian(p.omega0) + &exchange.scale_real(p.exchange);
    let mut h = kron(&system, &CMatrix::identity(env_dim))?;
    let mut bath_coupling = CMatrix::zeros(env_dim, env_dim);
    for (j, (mode, &n)) in p.modes.iter().zip(fock_cutoffs).enumerate() {
        let bath = on_mode(j, &boson::number(n).scale_real(mode.omega))?;
        h = &h + &kron(&CMatrix::identity(4), &bath)?;
        let a = boson::annihilation(n);
        let quadrature = on_mode(j, &(&a + &a.adjoint()).scale_real(mode.gamma))?;
        bath_coupling = &bath_coupling + &quadrature;
    }
    Ok(&h + &kron(&exchange, &bath_coupling)?)
}

// ---------------------------------------------------------------------------
// Ising pair
// ---------------------------------------------------------------------------

/// `H = (ω/2)(σz_A + σz_B) + (g/2) σx_A σx_B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsingParams {
    pub omega: f64,
    pub g: f64,
}

impl IsingParams {
    pub fn new(omega: f64, g: f64) -> Result<Self> {
        if !omega.is_finite() || !g.is_finite() {
            return Err(Error::InvalidParameter("Ising parameters must be finite".into()));
        }
        Ok(IsingParams { omega, g })
    }

    /// Parameters from the rescaled coupling `J = g/(2ω)`.
    pub fn from_rescaled(omega: f64, j: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!("omega = {omega} must be positive")));
        }
        Self::new(omega, 2.0 * omega * j)
    }

    /// `J = g/(2ω)`.
    pub fn rescaled_coupling(&self) -> f64 {
        self.g / (2.0 * self.omega)
    }

    /// `λ = √(4ω² + g²)`.
    pub fn lambda(&self) -> f64 {
        (4.0 * self.omega * self.omega + self.g * self.g).sqrt()
    }

    pub fn hamiltonian(&self) -> CMatrix {
        let xx = kron(&pauli::x(), &pauli::x()).expect("4x4");
        &qubit_free_hamiltonian(self.omega) + &xx.scale_real(self.g / 2.0)
    }
}

/// Closed-form propagator `exp(-iHt)` in product ordering.
pub fn ising_propagator(p: &IsingParams, t: f64) -> CMatrix {
    let lambda = p.lambda();
    let (half_sin, half_cos) = (lambda * t / 2.0).sin_cos();
    let (ratio_z, ratio_x) = if lambda > 0.0 {
        (2.0 * p.omega / lambda, p.g / lambda)
    } else {
        (0.0, 0.0)
    };
    let u11 = c(half_cos, -ratio_z * half_sin);
    let u12 = c(0.0, -ratio_x * half_sin);
    let (gs, gc) = (p.g * t / 2.0).sin_cos();

    let mut printed = CMatrix::zeros(4, 4);
    printed[(0, 0)] = u11;
    printed[(1, 1)] = u11.conj();
    printed[(0, 1)] = u12;
    printed[(1, 0)] = u12;
    printed[(2, 2)] = c(gc, 0.0);
    printed[(3, 3)] = c(gc, 0.0);
    printed[(2, 3)] = c(0.0, -gs);
    printed[(3, 2)] = c(0.0, -gs);
    BasisConvention::from_printed(&printed)
}

pub fn ising_reduced_state(p: &IsingParams, f: &InitialStateFamily, t: f64) -> Result<DensityMatrix> {
    let rho = build_initial_qubit_state(f)
        .matrix()
        .conjugate_by(&ising_propagator(p, t));
    DensityMatrix::new(rho.hermitian_part())
}
