//! Finite-dimensional realization of the translation-automorphism setting:
//! commuting momentum operators with joint spectrum in the closed forward
//! cone, translated operator fields, smearing against measures, exact
//! frequency splits at the Bohr transfer frequencies, spectral projectors,
//! energy weights, and the dyadic operator decomposition.
//!
//! Working in the joint momentum eigenbasis makes every filter exact: the
//! matrix element (m, n) carries the four-momentum transfer p_m − p_n, so
//! multiplying elements by functions of the transfer realizes smearing and
//! frequency filtering without any time discretization. The sampled-signal
//! route of [`crate::signal`] is kept only as an independent cross-check.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::dyadic::Mollifier;
use crate::linalg::{commutator, operator_norm, CMatrix};
use crate::signal::{bin_frequency, Signal, Spectrum};
use crate::spacetime::{decay_envelope, DiscreteMeasure, EnvelopeParams, FourVector};
use crate::{Error, Result};

const TWO_PI_SQ: f64 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;

/// Hilbert space with four commuting self-adjoint momentum components,
/// given by their joint spectrum (one four-vector per basis state).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumModel {
    spectrum: Vec<FourVector>,
}

impl QuantumModel {
    /// Validates that every point lies in the closed forward cone.
    pub fn new(spectrum: Vec<FourVector>) -> Result<Self> {
        if spectrum.is_empty() {
            return Err(Error::InvalidParameter("spectrum must be nonempty".into()));
        }
        for (i, p) in spectrum.iter().enumerate() {
            if p.time() < p.spatial_norm() - 1e-12 * (1.0 + p.euclid_norm()) {
                return Err(Error::InvalidParameter(format!(
                    "spectrum point {i} = {:?} lies outside the closed forward cone",
                    p.0
                )));
            }
        }
        Ok(QuantumModel { spectrum })
    }

    pub fn dim(&self) -> usize {
        self.spectrum.len()
    }

    pub fn spectrum(&self) -> &[FourVector] {
        &self.spectrum
    }

    pub fn energy(&self, m: usize) -> f64 {
        self.spectrum[m].time()
    }

    pub fn min_energy(&self) -> f64 {
        self.spectrum.iter().map(|p| p.time()).fold(f64::INFINITY, f64::min)
    }

    pub fn max_energy(&self) -> f64 {
        self.spectrum.iter().map(|p| p.time()).fold(0.0, f64::max)
    }

    /// Four-momentum transfer of the matrix element (m, n).
    pub fn transfer(&self, m: usize, n: usize) -> FourVector {
        self.spectrum[m] - self.spectrum[n]
    }

    /// Energy transfer (Bohr frequency) of the matrix element (m, n).
    pub fn bohr_frequency(&self, m: usize, n: usize) -> f64 {
        self.spectrum[m].time() - self.spectrum[n].time()
    }

    /// Diagonal of the spectral projector onto energies ≤ E (zero for E < 0).
    pub fn spectral_projector(&self, e: f64) -> Vec<f64> {
        if e < 0.0 {
            return vec![0.0; self.dim()];
        }
        self.spectrum.iter().map(|p| if p.time() <= e { 1.0 } else { 0.0 }).collect()
    }

    /// Largest Euclidean four-norm among all transfers.
    pub fn max_transfer_norm(&self) -> f64 {
        let mut best = 0.0f64;
        for m in 0..self.dim() {
            for n in 0..self.dim() {
                best = best.max(self.transfer(m, n).euclid_norm());
            }
        }
        best
    }

    pub fn to_json(&self) -> String {
        let wire = ModelWire { spectrum: self.spectrum.iter().map(|p| p.0).collect() };
        serde_json::to_string(&wire).expect("model serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: ModelWire =
            serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        QuantumModel::new(wire.spectrum.into_iter().map(FourVector).collect())
    }

    /// Random spectrum in the forward cone, energies up to `max_energy`.
    pub fn random_cone(
        dim: usize,
        max_energy: f64,
        include_origin: bool,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        let mut spectrum = Vec::with_capacity(dim);
        if include_origin {
            spectrum.push(FourVector::ZERO);
        }
        while spectrum.len() < dim {
            let r = 0.5 * max_energy * rng.gen::<f64>().powf(1.0 / 3.0);
            let cos_t = rng.gen_range(-1.0..1.0f64);
            let sin_t = (1.0 - cos_t * cos_t).sqrt();
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            let sp = [r * sin_t * phi.cos(), r * sin_t * phi.sin(), r * cos_t];
            let e = rng.gen_range(r..max_energy.max(r + 1e-6));
            spectrum.push(FourVector::new(e, sp[0], sp[1], sp[2]));
        }
        QuantumModel::new(spectrum)
    }

    /// Equally spaced energies j·Δ with a deterministic spatial pattern
    /// inside the cone; all Bohr frequencies are multiples of Δ.
    pub fn lattice(dim: usize, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(Error::InvalidParameter("lattice spacing must be > 0".into()));
        }
        let spectrum = (0..dim)
            .map(|j| {
                let e = j as f64 * spacing;
                let mag = 0.5 * e;
                let mut sp = [0.0; 3];
                if j > 0 {
                    sp[j % 3] = if (j / 3) % 2 == 0 { mag } else { -mag };
                }
                FourVector::new(e, sp[0], sp[1], sp[2])
            })
            .collect();
        QuantumModel::new(spectrum)
    }

    /// Spatial momentum grid lifted to the mass hyperboloid p⁰ = √(m² + |p⃗|²).
    pub fn mass_shell(mass: f64, half_extent: i32, dp: f64) -> Result<Self> {
        if mass < 0.0 || !(dp > 0.0) {
            return Err(Error::InvalidParameter("mass_shell needs mass >= 0 and dp > 0".into()));
        }
        let mut spectrum = Vec::new();
        for ix in -half_extent..=half_extent {
            for iy in -half_extent..=half_extent {
                for iz in -half_extent..=half_extent {
                    let sp = [ix as f64 * dp, iy as f64 * dp, iz as f64 * dp];
                    let e = (mass * mass + sp[0] * sp[0] + sp[1] * sp[1] + sp[2] * sp[2]).sqrt();
                    spectrum.push(FourVector::new(e, sp[0], sp[1], sp[2]));
                }
            }
        }
        QuantumModel::new(spectrum)
    }

    /// The same model extended by the zero-momentum state, so that every
    /// spectrum point appears as an exact transfer from the ground state.
    pub fn with_ground_state(&self) -> Result<Self> {
        let mut spectrum = vec![FourVector::ZERO];
        spectrum.extend_from_slice(&self.spectrum);
        QuantumModel::new(spectrum)
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct ModelWire {
    spectrum: Vec<[f64; 4]>,
}

/// Families of admissible energy weights G(E) on [0, ∞).
///
/// Both families are non-increasing and square-integrable; the bounded one
/// stays finite at E = 0, the singular one may diverge there.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum EnergyWeight {
    /// (1 + λE)^(−s) with s > 1/2.
    Bounded { lambda: f64, s: f64 },
    /// (λE)^(−a) (1 + λE)^(−b) with 0 ≤ a < 1/2 and a + b > 1/2.
    SingularAtZero { lambda: f64, a: f64, b: f64 },
}

impl EnergyWeight {
    pub fn bounded(lambda: f64, s: f64) -> Result<Self> {
        if !(lambda > 0.0) || !(s > 0.5) {
            return Err(Error::InvalidParameter(format!(
                "bounded weight needs lambda > 0 and s > 1/2, got lambda={lambda}, s={s}"
            )));
        }
        Ok(EnergyWeight::Bounded { lambda, s })
    }

    pub fn singular_at_zero(lambda: f64, a: f64, b: f64) -> Result<Self> {
        if !(lambda > 0.0) || !(0.0..0.5).contains(&a) || !(a + b > 0.5) {
            return Err(Error::InvalidParameter(format!(
                "singular weight needs lambda > 0, 0 <= a < 1/2, a + b > 1/2; \
                 got lambda={lambda}, a={a}, b={b}"
            )));
        }
        Ok(EnergyWeight::SingularAtZero { lambda, a, b })
    }

    pub fn eval(&self, e: f64) -> f64 {
        let e = e.max(0.0);
        match *self {
            EnergyWeight::Bounded { lambda, s } => (1.0 + lambda * e).powf(-s),
            EnergyWeight::SingularAtZero { lambda, a, b } => {
                (lambda * e).powf(-a) * (1.0 + lambda * e).powf(-b)
            }
        }
    }

    pub fn bounded_at_zero(&self) -> bool {
        match *self {
            EnergyWeight::Bounded { .. } => true,
            EnergyWeight::SingularAtZero { a, .. } => a == 0.0,
        }
    }

    /// Diagonal of G(P⁰) on the model. Rejects infinite weights (singular
    /// family on a spectrum containing E = 0) unless `allow_extended`.
    pub fn diagonal(&self, model: &QuantumModel, allow_extended: bool) -> Result<Vec<f64>> {
        if !self.bounded_at_zero() && !allow_extended {
            if let Some(i) = (0..model.dim()).find(|&i| model.energy(i) == 0.0) {
                return Err(Error::HypothesisViolated(format!(
                    "singular energy weight is infinite on zero-energy state {i}; \
                     use a model with min energy > 0 or opt into extended values"
                )));
            }
        }
        Ok((0..model.dim()).map(|i| self.eval(model.energy(i))).collect())
    }
}

/// A bounded operator expressed in the joint momentum eigenbasis.
#[derive(Debug, Clone)]
pub struct OperatorField {
    pub matrix: CMatrix,
    model: Arc<QuantumModel>,
}

impl OperatorField {
    pub fn new(matrix: CMatrix, model: Arc<QuantumModel>) -> Result<Self> {
        if matrix.nrows() != model.dim() || matrix.ncols() != model.dim() {
            return Err(Error::ModelMismatch(format!(
                "matrix is {}x{} but the model dimension is {}",
                matrix.nrows(),
                matrix.ncols(),
                model.dim()
            )));
        }
        Ok(OperatorField { matrix, model })
    }

    pub fn random(model: Arc<QuantumModel>, rng: &mut impl Rng) -> Self {
        let d = model.dim();
        OperatorField { matrix: crate::linalg::random_matrix(d, rng), model }
    }

    pub fn model(&self) -> &Arc<QuantumModel> {
        &self.model
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    /// Operator norm (largest singular value).
    pub fn norm(&self) -> f64 {
        operator_norm(&self.matrix)
    }

    pub fn adjoint(&self) -> OperatorField {
        OperatorField { matrix: self.matrix.adjoint(), model: Arc::clone(&self.model) }
    }

    fn same_model(&self, other: &OperatorField) -> Result<()> {
        if !Arc::ptr_eq(&self.model, &other.model) && self.model != other.model {
            return Err(Error::ModelMismatch("operators live on different models".into()));
        }
        Ok(())
    }

    /// Translated field U(x) B U(−x): elements pick up e^{i x·(p_m − p_n)}.
    pub fn translate(&self, x: FourVector) -> OperatorField {
        let mut out = self.matrix.clone();
        for m in 0..self.dim() {
            for n in 0..self.dim() {
                let phase = x.minkowski_dot(&self.model.transfer(m, n));
                out[(m, n)] *= Complex64::from_polar(1.0, phase);
            }
        }
        OperatorField { matrix: out, model: Arc::clone(&self.model) }
    }

    /// Smearing against a finite measure, Σᵢ wᵢ B(xᵢ).
    pub fn smear(&self, nu: &DiscreteMeasure) -> OperatorField {
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        for m in 0..self.dim() {
            for n in 0..self.dim() {
                let transfer = self.model.transfer(m, n);
                let factor: Complex64 = nu
                    .atoms
                    .iter()
                    .map(|a| {
                        a.weight * Complex64::from_polar(1.0, a.point.minkowski_dot(&transfer))
                    })
                    .sum();
                out[(m, n)] = self.matrix[(m, n)] * factor;
            }
        }
        OperatorField { matrix: out, model: Arc::clone(&self.model) }
    }

    /// Smearing written on the momentum side: elements are multiplied by
    /// (2π)² g(p_m − p_n), where g plays the role of the measure's Fourier
    /// transform.
    pub fn smear_fourier(&self, mut g: impl FnMut(FourVector) -> Complex64) -> OperatorField {
        let mut out = self.matrix.clone();
        for m in 0..self.dim() {
            for n in 0..self.dim() {
                out[(m, n)] *= TWO_PI_SQ * g(self.model.transfer(m, n));
            }
        }
        OperatorField { matrix: out, model: Arc::clone(&self.model) }
    }

    /// ‖[self, other(x)]‖.
    pub fn commutator_norm(&self, other: &OperatorField, x: FourVector) -> Result<f64> {
        self.same_model(other)?;
        let translated = other.translate(x);
        Ok(operator_norm(&commutator(&self.matrix, &translated.matrix)))
    }

    /// Creation/annihilation split of the order-k time derivative: elements
    /// e^{∓ikπ/2} θ(±ω) |ω|^k B at the Bohr frequency ω; the plus part
    /// raises energy, the minus part lowers it and annihilates any
    /// minimal-energy subspace at energy zero.
    pub fn frequency_parts(&self, k: f64) -> Result<(OperatorField, OperatorField)> {
        if !(k > 0.0) {
            return Err(Error::InvalidParameter(format!("frequency split needs k > 0, got {k}")));
        }
        let d = self.dim();
        let mut plus = CMatrix::zeros(d, d);
        let mut minus = CMatrix::zeros(d, d);
        let phase_plus = Complex64::from_polar(1.0, -k * std::f64::consts::FRAC_PI_2);
        let phase_minus = phase_plus.conj();
        for m in 0..d {
            for n in 0..d {
                let om = self.model.bohr_frequency(m, n);
                if om > 0.0 {
                    plus[(m, n)] = phase_plus * om.powf(k) * self.matrix[(m, n)];
                } else if om < 0.0 {
                    minus[(m, n)] = phase_minus * (-om).powf(k) * self.matrix[(m, n)];
                }
            }
        }
        Ok((
            OperatorField { matrix: plus, model: Arc::clone(&self.model) },
            OperatorField { matrix: minus, model: Arc::clone(&self.model) },
        ))
    }

    /// Unsplit momentum filter: elements |p_m − p_n|^k B with the Euclidean
    /// four-norm of the transfer.
    pub fn momentum_filter(&self, k: f64) -> Result<OperatorField> {
        if !(k > 0.0) {
            return Err(Error::InvalidParameter(format!("momentum filter needs k > 0, got {k}")));
        }
        let mut out = self.matrix.clone();
        for m in 0..self.dim() {
            for n in 0..self.dim() {
                let t = self.model.transfer(m, n).euclid_norm();
                out[(m, n)] *= if t > 0.0 { t.powf(k) } else { 0.0 };
            }
        }
        Ok(OperatorField { matrix: out, model: Arc::clone(&self.model) })
    }

    /// n-th time derivative at the origin, elements (iω)ⁿ B.
    pub fn time_derivative(&self, order: u32) -> OperatorField {
        let mut out = self.matrix.clone();
        for m in 0..self.dim() {
            for n in 0..self.dim() {
                let om = self.model.bohr_frequency(m, n);
                out[(m, n)] *= Complex64::new(0.0, om).powu(order);
            }
        }
        OperatorField { matrix: out, model: Arc::clone(&self.model) }
    }

    /// Right-multiply by a diagonal (projector or energy weight).
    pub fn mul_diag_right(&self, diag: &[f64]) -> OperatorField {
        let mut out = self.matrix.clone();
        for n in 0..self.dim() {
            for m in 0..self.dim() {
                out[(m, n)] *= diag[n];
            }
        }
        OperatorField { matrix: out, model: Arc::clone(&self.model) }
    }

    /// Multiply matrix elements by a real function of the Bohr frequency.
    pub fn bohr_multiplier(&self, mut f: impl FnMut(f64) -> f64) -> OperatorField {
        let mut out = self.matrix.clone();
        for m in 0..self.dim() {
            for n in 0..self.dim() {
                out[(m, n)] *= f(self.model.bohr_frequency(m, n));
            }
        }
        OperatorField { matrix: out, model: Arc::clone(&self.model) }
    }
}

/// Least constant c with ‖[B, B*(x)]‖ ≤ c·D(x) over the grid.
pub fn kappa_fit(b: &OperatorField, params: &EnvelopeParams, grid: &[FourVector]) -> Result<f64> {
    kappa_fit_pair(b, &b.adjoint(), params, grid)
}

/// Least constant c with ‖[B₁, B₂(x)]‖ ≤ c·D(x) over the grid.
pub fn kappa_fit_pair(
    b1: &OperatorField,
    b2: &OperatorField,
    params: &EnvelopeParams,
    grid: &[FourVector],
) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("kappa fit needs a nonempty grid".into()));
    }
    let mut c = 0.0f64;
    for &x in grid {
        let lhs = b1.commutator_norm(b2, x)?;
        c = c.max(lhs / decay_envelope(x, params));
    }
    Ok(c)
}

/// Dyadic decomposition of the plus-frequency part of order k.
#[derive(Debug, Clone)]
pub struct OperatorDyadicSplit {
    /// High-frequency part, transfer energies above 1/(2λ).
    pub high: OperatorField,
    /// Band parts, transfer energies in [1/(2ⁿ⁺²λ), 1/(2ⁿλ)].
    pub bands: Vec<OperatorField>,
    /// Low-frequency remainder after removing the first N bands.
    pub residual: OperatorField,
    pub residual_norm: f64,
}

/// Split B^k_+ into its high part, N dyadic band parts and the residual,
/// by multiplying matrix elements with the cutoff/band functions at the
/// Bohr frequency.
pub fn dyadic_operator_split(
    b: &OperatorField,
    k: f64,
    levels: u32,
    moll: &Mollifier,
) -> Result<OperatorDyadicSplit> {
    let (plus, _) = b.frequency_parts(k)?;
    let high = plus.bohr_multiplier(|om| 1.0 - moll.eta(om));
    let mut bands = Vec::with_capacity(levels as usize);
    for n in 0..levels {
        bands.push(plus.bohr_multiplier(|om| moll.band(om, n)));
    }
    // low part minus the bands, assembled by explicit subtraction
    let mut residual = plus.bohr_multiplier(|om| moll.eta(om));
    for band in &bands {
        residual.matrix -= &band.matrix;
    }
    let residual_norm = residual.norm();
    Ok(OperatorDyadicSplit { high, bands, residual, residual_norm })
}

/// Outcome of the kernel-projection norm check on one matrix.
#[derive(Debug, Clone, Copy)]
pub struct BuchholzCheck {
    /// ‖C P‖² where P projects onto ker(Cⁿ).
    pub cp_norm_sq: f64,
    /// (n−1)·‖[C, C*]‖.
    pub cp_bound: f64,
    /// ‖C* P‖².
    pub adjoint_cp_norm_sq: f64,
    /// n·‖[C, C*]‖.
    pub adjoint_cp_bound: f64,
    /// Singular values of Cⁿ clustered near the null cutoff.
    pub threshold_ambiguous: bool,
}

impl BuchholzCheck {
    /// Both inequalities within the given relative slack.
    pub fn holds(&self, rel_slack: f64) -> bool {
        self.cp_norm_sq <= self.cp_bound + rel_slack * self.cp_bound.max(1e-300)
            && self.adjoint_cp_norm_sq
                <= self.adjoint_cp_bound + rel_slack * self.adjoint_cp_bound.max(1e-300)
    }
}

/// Norm bounds for C and C* compressed to the kernel of Cⁿ.
pub fn buchholz_check(c: &CMatrix, n: u32) -> Result<BuchholzCheck> {
    if n == 0 {
        return Err(Error::InvalidParameter("power n must be >= 1".into()));
    }
    if c.nrows() != c.ncols() {
        return Err(Error::InvalidParameter("matrix must be square".into()));
    }
    let mut cn = c.clone();
    for _ in 1..n {
        cn = &cn * c;
    }
    let (p, ambiguous) = crate::linalg::null_projector(&cn)?;
    let comm_norm = operator_norm(&commutator(c, &c.adjoint()));
    let cp = operator_norm(&(c * &p));
    let csp = operator_norm(&(c.adjoint() * &p));
    Ok(BuchholzCheck {
        cp_norm_sq: cp * cp,
        cp_bound: (n as f64 - 1.0) * comm_norm,
        adjoint_cp_norm_sq: csp * csp,
        adjoint_cp_bound: n as f64 * comm_norm,
        threshold_ambiguous: ambiguous,
    })
}

/// Cross-check of the exact Bohr-frequency split against the sampled-signal
/// route: every matrix element is sampled as a time signal, filtered through
/// the spectral machinery, and compared to the closed form.
///
/// Requires all Bohr frequencies to be close to integer multiples of the
/// smallest positive one (lattice-type models), so the signals sit on exact
/// frequency bins. The operator parts come from the reflected kernel, so the
/// plus part corresponds to the negative half-line of the signal spectrum.
pub fn frequency_parts_fft_check(b: &OperatorField, k: f64) -> Result<f64> {
    let d = b.dim();
    let mut base = f64::INFINITY;
    let mut max_om = 0.0f64;
    for m in 0..d {
        for n in 0..d {
            let om = b.model().bohr_frequency(m, n).abs();
            if om > 1e-12 {
                base = base.min(om);
                max_om = max_om.max(om);
            }
        }
    }
    if !base.is_finite() {
        return Ok(0.0); // diagonal operator: both routes vanish identically
    }
    for m in 0..d {
        for n in 0..d {
            let om = b.model().bohr_frequency(m, n) / base;
            if (om - om.round()).abs() > 1e-9 {
                return Err(Error::InvalidParameter(
                    "Bohr frequencies are not commensurate; use a lattice-type model".into(),
                ));
            }
        }
    }
    let mut len = 8usize;
    while (len as f64) < 4.0 * max_om / base {
        len *= 2;
    }
    let dt = crate::signal::TWO_PI / (len as f64 * base);
    let (plus, _) = b.frequency_parts(k)?;
    let phase_plus = Complex64::from_polar(1.0, -k * std::f64::consts::FRAC_PI_2);
    let mut worst = 0.0f64;
    let scale =
        b.matrix.iter().map(|c| c.norm()).fold(0.0, f64::max) * max_om.powf(k).max(1.0);
    for m in 0..d {
        for n in 0..d {
            let om = b.model().bohr_frequency(m, n);
            let el = b.matrix[(m, n)];
            if el.norm() == 0.0 {
                continue;
            }
            let sig = Signal::from_fn(len, 0.0, dt, |t| el * Complex64::from_polar(1.0, om * t))
                .expect("grid is valid");
            let spec = sig.transform();
            let filtered = Spectrum {
                values: spec
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        let w = bin_frequency(i, len, dt);
                        if w < 0.0 {
                            v * phase_plus * (-w).powf(k)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })
                    .collect(),
                t0: spec.t0,
                dt: spec.dt,
            }
            .inverse();
            let err = (filtered.samples[0] - plus.matrix[(m, n)]).norm();
            worst = worst.max(err / scale);
        }
    }
    Ok(worst)
}
