//! Verification harnesses for the operator-norm inequalities: the envelope
//! bound for smeared commutators, the projected and energy-weighted bounds
//! for the frequency-split and momentum-filtered parts, smearing stability
//! of the commutator envelope constant, Lᵖ and weighted-norm bounds for
//! sharp-time and spacetime smearing, and the anisotropic squeeze limits.
//!
//! Every bound of the underlying theory asserts the existence of a constant,
//! not its value. The desk-scale surrogate is a calibration/holdout
//! protocol: the sup of lhs/rhs is fitted on half of a random instance
//! family and the other half must not exceed it beyond a fixed margin.
//! Bounds whose constant is pinned by a fitted envelope constant are checked
//! exactly, with zero violations allowed.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::model::{kappa_fit, kappa_fit_pair, EnergyWeight, OperatorField};
use crate::spacetime::{
    envelope_integral, Atom, DiscreteMeasure, EnvelopeParams, FourVector,
};
use crate::{Error, Result};

/// Which filtered part of the operator a check exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransferPart {
    Plus,
    Minus,
    Momentum,
}

impl TransferPart {
    pub fn label(&self) -> &'static str {
        match self {
            TransferPart::Plus => "plus",
            TransferPart::Minus => "minus",
            TransferPart::Momentum => "momentum",
        }
    }
}

/// How a report decides its pass flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Protocol {
    /// Every instance must satisfy lhs ≤ rhs (up to rounding slack).
    Exact,
    /// Holdout sup ratio must not exceed margin × calibration sup ratio.
    CalibrationHoldout,
}

/// One measured instance of a bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundInstance {
    pub lhs: f64,
    /// Right-hand side without the unspecified constant.
    pub rhs: f64,
    pub ratio: f64,
}

/// Aggregated outcome of a bound check over an instance family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub id: String,
    pub family: String,
    pub protocol: Protocol,
    pub instances: Vec<BoundInstance>,
    /// Sup of ratios over even-indexed instances.
    pub calibration_sup: f64,
    /// Sup of ratios over odd-indexed instances.
    pub holdout_sup: f64,
    pub margin: f64,
    /// Instances with vanishing rhs but non-vanishing lhs.
    pub zero_rhs_violations: usize,
    /// Fitted envelope constant, when the check fits one.
    pub fitted_constant: Option<f64>,
    pub pass: bool,
}

impl BoundReport {
    fn from_pairs(
        id: impl Into<String>,
        family: impl Into<String>,
        protocol: Protocol,
        margin: f64,
        pairs: Vec<(f64, f64)>,
        fitted_constant: Option<f64>,
    ) -> BoundReport {
        let scale = pairs.iter().map(|&(l, r)| l.max(r)).fold(1.0f64, f64::max);
        let rhs_floor = 1e-14 * scale;
        let exact_tol = 1e-12 * scale;
        let mut zero_rhs_violations = 0usize;
        let instances: Vec<BoundInstance> = pairs
            .iter()
            .map(|&(lhs, rhs)| {
                let ratio = if rhs > rhs_floor {
                    lhs / rhs
                } else if lhs <= exact_tol {
                    0.0
                } else {
                    zero_rhs_violations += 1;
                    f64::INFINITY
                };
                BoundInstance { lhs, rhs, ratio }
            })
            .collect();
        let sup = |parity: usize| {
            instances
                .iter()
                .enumerate()
                .filter(|(i, _)| i % 2 == parity)
                .map(|(_, inst)| inst.ratio)
                .fold(0.0f64, f64::max)
        };
        let calibration_sup = sup(0);
        let holdout_sup = sup(1);
        let pass = zero_rhs_violations == 0
            && match protocol {
                Protocol::Exact => {
                    instances.iter().all(|i| i.lhs <= i.rhs * (1.0 + 1e-12) + exact_tol)
                }
                Protocol::CalibrationHoldout => holdout_sup <= margin * calibration_sup,
            };
        BoundReport {
            id: id.into(),
            family: family.into(),
            protocol,
            instances,
            calibration_sup,
            holdout_sup,
            margin,
            zero_rhs_violations,
            fitted_constant,
            pass,
        }
    }

    pub fn sup_ratio(&self) -> f64 {
        self.calibration_sup.max(self.holdout_sup)
    }
}

/// Random complex measure with the given number of atoms, spatial extent
/// and time extent.
pub fn random_measure(
    rng: &mut impl Rng,
    atoms: usize,
    spatial_extent: f64,
    time_extent: f64,
) -> DiscreteMeasure {
    DiscreteMeasure::new(
        (0..atoms)
            .map(|_| Atom {
                point: FourVector::new(
                    rng.gen_range(-time_extent..time_extent),
                    rng.gen_range(-spatial_extent..spatial_extent),
                    rng.gen_range(-spatial_extent..spatial_extent),
                    rng.gen_range(-spatial_extent..spatial_extent),
                ),
                weight: Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            })
            .collect(),
    )
}

/// Mixed timelike/spacelike fan used to fit envelope constants.
pub fn standard_fit_grid(extent: f64, points_per_ray: usize) -> Vec<FourVector> {
    let mut grid = vec![FourVector::ZERO];
    let dirs = [
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.6, 0.6, 0.52],
        [0.3, 1.0, 0.0, 0.0],
        [0.5, 0.8, 0.5, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [1.0, 0.5, 0.0, 0.0],
    ];
    for d in dirs {
        for i in 1..=points_per_ray {
            let s = extent * i as f64 / points_per_ray as f64;
            grid.push(FourVector::new(s * d[0], s * d[1], s * d[2], s * d[3]));
        }
    }
    grid
}

/// Exact envelope bound for smeared commutators: with the constant fitted
/// on the exact difference set of the atom positions,
/// ‖[B₁(ν₁), B₂(ν₂)]‖ ≤ c ∫∫ D d|ν₁| d|ν₂| admits zero violations.
pub fn commutator_envelope_check(
    b1: &OperatorField,
    b2: &OperatorField,
    measure_pairs: &[(DiscreteMeasure, DiscreteMeasure)],
    params: &EnvelopeParams,
) -> Result<BoundReport> {
    let mut differences = Vec::new();
    for (nu1, nu2) in measure_pairs {
        for a in &nu1.atoms {
            for b in &nu2.atoms {
                differences.push(b.point - a.point);
            }
        }
    }
    if differences.is_empty() {
        return Err(Error::InvalidParameter("envelope check needs nonempty measures".into()));
    }
    let c = kappa_fit_pair(b1, b2, params, &differences)?;
    let mut pairs = Vec::with_capacity(measure_pairs.len());
    for (nu1, nu2) in measure_pairs {
        let smeared1 = b1.smear(nu1);
        let smeared2 = b2.smear(nu2);
        let lhs = crate::linalg::operator_norm(&crate::linalg::commutator(
            &smeared1.matrix,
            &smeared2.matrix,
        ));
        let rhs = c * envelope_integral(nu1, nu2, params);
        pairs.push((lhs, rhs));
    }
    Ok(BoundReport::from_pairs(
        "commutator-envelope",
        format!("kappa={} lambda={}", params.kappa, params.lambda),
        Protocol::Exact,
        1.0,
        pairs,
        Some(c),
    ))
}

fn require_order(k: f64, kappa: f64) -> Result<()> {
    if !(k > (kappa + 1.0) / 2.0) {
        return Err(Error::HypothesisViolated(format!(
            "requires k > (kappa + 1)/2; got k = {k}, kappa = {kappa}"
        )));
    }
    Ok(())
}

/// Projected-norm bound for the frequency-split parts:
/// ‖B^k_±(ν) P(E)‖ ≤ const {c_±(E) ∫∫ D}^(1/2) with c₊ = 1 + λE and
/// c₋ = λE, checked by the calibration/holdout ratio protocol.
///
/// When the model contains zero energy, the minus part at E = 0 faces a
/// vanishing rhs and must vanish itself; such instances enter the zero-rhs
/// violation count.
pub fn theorem_bk_check(
    b: &OperatorField,
    k: f64,
    sign: TransferPart,
    params: &EnvelopeParams,
    energies: &[f64],
    measures: &[DiscreteMeasure],
) -> Result<BoundReport> {
    require_order(k, params.kappa)?;
    if sign == TransferPart::Momentum {
        return Err(Error::InvalidParameter(
            "projected bound applies to the plus/minus parts; \
             use the weighted check for the momentum filter"
                .into(),
        ));
    }
    let fit_grid = standard_fit_grid(4.0, 6);
    let fitted = kappa_fit(b, params, &fit_grid)?;
    if !fitted.is_finite() {
        return Err(Error::UnstableFit("envelope constant is not finite".into()));
    }
    let (plus, minus) = b.frequency_parts(k)?;
    let part = match sign {
        TransferPart::Plus => plus,
        _ => minus,
    };
    let mut pairs = Vec::new();
    for nu in measures {
        let j = envelope_integral(nu, nu, params);
        let smeared = part.smear(nu);
        for &e in energies {
            let proj = b.model().spectral_projector(e);
            let lhs = smeared.mul_diag_right(&proj).norm();
            let c_e = if e < 0.0 {
                0.0
            } else {
                match sign {
                    TransferPart::Plus => 1.0 + params.lambda * e,
                    _ => params.lambda * e,
                }
            };
            pairs.push((lhs, (c_e * j).sqrt()));
        }
    }
    Ok(BoundReport::from_pairs(
        format!("projected-{}", sign.label()),
        format!(
            "kappa={} k={} measures={} energies={}",
            params.kappa,
            k,
            measures.len(),
            energies.len()
        ),
        Protocol::CalibrationHoldout,
        2.0,
        pairs,
        Some(fitted),
    ))
}

/// Energy-weighted bound ‖B^k_ε(ν) G(P⁰)‖² ≤ const ∫∫ D for the plus,
/// minus and momentum-filtered parts, ratio protocol.
pub fn theorem_gb_check(
    b: &OperatorField,
    k: f64,
    part: TransferPart,
    weight: &EnergyWeight,
    params: &EnvelopeParams,
    measures: &[DiscreteMeasure],
) -> Result<BoundReport> {
    require_order(k, params.kappa)?;
    if part != TransferPart::Minus && !weight.bounded_at_zero() {
        return Err(Error::HypothesisViolated(
            "plus/momentum parts require an energy weight bounded at zero".into(),
        ));
    }
    let diag = weight.diagonal(b.model(), false)?;
    let filtered = match part {
        TransferPart::Plus => b.frequency_parts(k)?.0,
        TransferPart::Minus => b.frequency_parts(k)?.1,
        TransferPart::Momentum => b.momentum_filter(k)?,
    };
    let mut pairs = Vec::new();
    for nu in measures {
        let j = envelope_integral(nu, nu, params);
        let lhs = filtered.smear(nu).mul_diag_right(&diag).norm();
        pairs.push((lhs, j.sqrt()));
    }
    Ok(BoundReport::from_pairs(
        format!("weighted-{}", part.label()),
        format!("kappa={} k={} weight={:?}", params.kappa, k, weight),
        Protocol::CalibrationHoldout,
        2.0,
        pairs,
        None,
    ))
}

/// Decay profile of the smearing function used in the stability check.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum SmearingProfile {
    /// |χ(x)| = (λ + |x|)^(−r) on a spacetime grid; needs r ≥ 4 + κ.
    PowerLawSpacetime { r: f64 },
    /// |f(τ)| = (λ + |τ|)^(−s) on the time axis; needs s ≥ 1 + κ.
    PowerLawTime { s: f64 },
    /// Gaussian decay, admissible for every κ.
    GaussianTime { width: f64 },
}

/// Outcome of the smearing-stability check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityCheck {
    pub base_constant: f64,
    pub smeared_constant: f64,
    /// smeared/base (0 when base vanishes).
    pub ratio: f64,
    /// The same quotient re-fitted on a grid of twice the extent.
    pub widened_ratio: f64,
    /// Relative change of the smeared/base quotient under widening.
    pub widening_drift: f64,
    pub pass: bool,
}

/// Smearing against an admissible decay class preserves the finiteness of
/// the envelope constant: re-fit it for B(χ) and compare to the base fit.
///
/// On a finite model the commutator norm is almost-periodic in the
/// translation, so any single fitted constant inflates as the fit grid
/// extends into the far spacelike region; the grid-stable quantity is the
/// smeared/base quotient, which the widening probe pins to within 20%.
pub fn stability_check(
    b: &OperatorField,
    profile: SmearingProfile,
    params: &EnvelopeParams,
    extent: f64,
    atoms_per_axis: usize,
) -> Result<StabilityCheck> {
    let smearing = build_smearing(profile, params, extent, atoms_per_axis)?;
    let smeared = b.smear(&smearing);
    let grid = standard_fit_grid(4.0, 6);
    let wide_grid = standard_fit_grid(8.0, 12);
    let base = kappa_fit(b, params, &grid)?;
    let smeared_c = kappa_fit(&smeared, params, &grid)?;
    let base_wide = kappa_fit(b, params, &wide_grid)?;
    let smeared_wide = kappa_fit(&smeared, params, &wide_grid)?;
    let ratio = if base > 0.0 { smeared_c / base } else { 0.0 };
    let widened_ratio = if base_wide > 0.0 { smeared_wide / base_wide } else { 0.0 };
    let drift = if ratio > 0.0 { (widened_ratio - ratio).abs() / ratio } else { 0.0 };
    Ok(StabilityCheck {
        base_constant: base,
        smeared_constant: smeared_c,
        ratio,
        widened_ratio,
        widening_drift: drift,
        pass: smeared_c.is_finite() && drift < 0.20,
    })
}

fn build_smearing(
    profile: SmearingProfile,
    params: &EnvelopeParams,
    extent: f64,
    atoms_per_axis: usize,
) -> Result<DiscreteMeasure> {
    let lambda = params.lambda;
    match profile {
        SmearingProfile::PowerLawSpacetime { r } => {
            if r < 4.0 + params.kappa {
                return Err(Error::HypothesisViolated(format!(
                    "spacetime smearing requires r >= 4 + kappa; got r = {r}, kappa = {}",
                    params.kappa
                )));
            }
            let n = atoms_per_axis.max(2);
            let h = 2.0 * extent / n as f64;
            let mut atoms = Vec::new();
            for it in 0..n {
                for ix in 0..n {
                    for iy in 0..n {
                        for iz in 0..n {
                            let x = FourVector::new(
                                -extent + (it as f64 + 0.5) * h,
                                -extent + (ix as f64 + 0.5) * h,
                                -extent + (iy as f64 + 0.5) * h,
                                -extent + (iz as f64 + 0.5) * h,
                            );
                            let w = (lambda + x.euclid_norm()).powf(-r) * h.powi(4);
                            atoms.push(Atom { point: x, weight: Complex64::new(w, 0.0) });
                        }
                    }
                }
            }
            Ok(DiscreteMeasure::new(atoms))
        }
        SmearingProfile::PowerLawTime { s } => {
            if s < 1.0 + params.kappa {
                return Err(Error::HypothesisViolated(format!(
                    "time smearing requires s >= 1 + kappa; got s = {s}, kappa = {}",
                    params.kappa
                )));
            }
            Ok(time_line_measure(extent, atoms_per_axis.max(2).pow(2), |t| {
                (lambda + t.abs()).powf(-s)
            }))
        }
        SmearingProfile::GaussianTime { width } => {
            if !(width > 0.0) {
                return Err(Error::InvalidParameter("gaussian width must be > 0".into()));
            }
            Ok(time_line_measure(extent, atoms_per_axis.max(2).pow(2), |t| {
                (-t * t / (2.0 * width * width)).exp()
            }))
        }
    }
}

fn time_line_measure(extent: f64, count: usize, mut f: impl FnMut(f64) -> f64) -> DiscreteMeasure {
    let h = 2.0 * extent / count as f64;
    DiscreteMeasure::new(
        (0..count)
            .map(|i| {
                let t = -extent + (i as f64 + 0.5) * h;
                Atom {
                    point: FourVector::new(t, 0.0, 0.0, 0.0),
                    weight: Complex64::new(f(t) * h, 0.0),
                }
            })
            .collect(),
    )
}

/// A real function sampled on a centered cubic spatial grid.
#[derive(Debug, Clone)]
pub struct SpatialFunction {
    pub per_axis: usize,
    pub spacing: f64,
    pub values: Vec<f64>,
}

impl SpatialFunction {
    pub fn from_fn(per_axis: usize, spacing: f64, mut f: impl FnMut([f64; 3]) -> f64) -> Self {
        let mut values = Vec::with_capacity(per_axis.pow(3));
        let c = (per_axis as f64 - 1.0) / 2.0;
        for ix in 0..per_axis {
            for iy in 0..per_axis {
                for iz in 0..per_axis {
                    values.push(f([
                        (ix as f64 - c) * spacing,
                        (iy as f64 - c) * spacing,
                        (iz as f64 - c) * spacing,
                    ]));
                }
            }
        }
        SpatialFunction { per_axis, spacing, values }
    }

    fn point(&self, idx: usize) -> [f64; 3] {
        let n = self.per_axis;
        let c = (n as f64 - 1.0) / 2.0;
        let iz = idx % n;
        let iy = (idx / n) % n;
        let ix = idx / (n * n);
        [
            (ix as f64 - c) * self.spacing,
            (iy as f64 - c) * self.spacing,
            (iz as f64 - c) * self.spacing,
        ]
    }

    /// Grid Lᵖ norm with the cell volume as quadrature weight.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let vol = self.spacing.powi(3);
        (self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>() * vol).powf(1.0 / p)
    }

    /// The sharp-time measure δ(x⁰ − τ) f(x⃗) d³x as grid atoms.
    pub fn to_measure(&self, tau: f64) -> DiscreteMeasure {
        let vol = self.spacing.powi(3);
        DiscreteMeasure::new(
            self.values
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, &v)| {
                    let x = self.point(i);
                    Atom {
                        point: FourVector::new(tau, x[0], x[1], x[2]),
                        weight: Complex64::new(v * vol, 0.0),
                    }
                })
                .collect(),
        )
    }
}

/// The Lᵖ exponent forced by the decay rate: 6/(6−κ) below the critical
/// value 3, and 2 above it.
pub fn sobolev_exponent(kappa: f64) -> Result<f64> {
    if kappa == 3.0 {
        return Err(Error::InvalidParameter(
            "kappa = 3 is the critical value; the sharp-time bound needs kappa != 3".into(),
        ));
    }
    Ok(if kappa < 3.0 { 6.0 / (6.0 - kappa) } else { 2.0 })
}

fn require_sharp_time_order(k: f64, kappa: f64) -> Result<()> {
    if kappa < 3.0 {
        require_order(k, kappa)
    } else if !(k > 2.0) {
        Err(Error::HypothesisViolated(format!("requires k > 2 for kappa > 3; got k = {k}")))
    } else {
        Ok(())
    }
}

/// Sharp-time Lᵖ bound ‖B^k_ε(τ, f) G(P⁰)‖ ≤ const ‖f‖_p for ε ∈ {+, −, t}.
pub fn sobolev_bound_check(
    b: &OperatorField,
    k: f64,
    params: &EnvelopeParams,
    tau: f64,
    weight: &EnergyWeight,
    functions: &[SpatialFunction],
) -> Result<BoundReport> {
    let p = sobolev_exponent(params.kappa)?;
    require_sharp_time_order(k, params.kappa)?;
    let diag = weight.diagonal(b.model(), false)?;
    let (plus, minus) = b.frequency_parts(k)?;
    let momentum = b.momentum_filter(k)?;
    let mut pairs = Vec::new();
    for f in functions {
        let nu = f.to_measure(tau);
        let rhs = f.lp_norm(p);
        for part in [&plus, &minus, &momentum] {
            let lhs = part.smear(&nu).mul_diag_right(&diag).norm();
            pairs.push((lhs, rhs));
        }
    }
    Ok(BoundReport::from_pairs(
        "sharp-time-lp",
        format!("kappa={} k={} p={:.4} tau={}", params.kappa, k, p, tau),
        Protocol::CalibrationHoldout,
        2.0,
        pairs,
        None,
    ))
}

/// A complex function sampled on a centered spacetime grid.
#[derive(Debug, Clone)]
pub struct SpacetimeFunction {
    pub per_axis: usize,
    pub time_spacing: f64,
    pub space_spacing: f64,
    pub values: Vec<Complex64>,
}

impl SpacetimeFunction {
    pub fn from_fn(
        per_axis: usize,
        time_spacing: f64,
        space_spacing: f64,
        mut f: impl FnMut(FourVector) -> Complex64,
    ) -> Self {
        let n = per_axis;
        let c = (n as f64 - 1.0) / 2.0;
        let mut values = Vec::with_capacity(n.pow(4));
        for it in 0..n {
            for ix in 0..n {
                for iy in 0..n {
                    for iz in 0..n {
                        values.push(f(FourVector::new(
                            (it as f64 - c) * time_spacing,
                            (ix as f64 - c) * space_spacing,
                            (iy as f64 - c) * space_spacing,
                            (iz as f64 - c) * space_spacing,
                        )));
                    }
                }
            }
        }
        SpacetimeFunction { per_axis, time_spacing, space_spacing, values }
    }

    fn cell_volume(&self) -> f64 {
        self.time_spacing * self.space_spacing.powi(3)
    }

    fn point(&self, idx: usize) -> FourVector {
        let n = self.per_axis;
        let c = (n as f64 - 1.0) / 2.0;
        let iz = idx % n;
        let iy = (idx / n) % n;
        let ix = (idx / (n * n)) % n;
        let it = idx / (n * n * n);
        FourVector::new(
            (it as f64 - c) * self.time_spacing,
            (ix as f64 - c) * self.space_spacing,
            (iy as f64 - c) * self.space_spacing,
            (iz as f64 - c) * self.space_spacing,
        )
    }

    pub fn to_measure(&self) -> DiscreteMeasure {
        let vol = self.cell_volume();
        DiscreteMeasure::new(
            self.values
                .iter()
                .enumerate()
                .filter(|(_, v)| v.norm_sqr() != 0.0)
                .map(|(i, &v)| Atom { point: self.point(i), weight: v * vol })
                .collect(),
        )
    }

    /// ‖w(x) φ‖_p with a pointwise weight.
    pub fn weighted_lp(&self, p: f64, mut w: impl FnMut(FourVector) -> f64) -> f64 {
        let vol = self.cell_volume();
        (self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| (w(self.point(i)) * v.norm()).powf(p))
            .sum::<f64>()
            * vol)
            .powf(1.0 / p)
    }
}

/// Weighted-norm bound variants for spacetime smearing.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum WeightedForm {
    /// ‖B^k(φ)G‖ ≤ const ‖(λ+|X⁰|)^σ φ‖_p; σ > κ/6 below the critical
    /// decay, σ > 1/2 above it.
    TimeWeighted { sigma: f64 },
    /// ‖B^k(φ)G‖ ≤ const (λ^{2σ} ‖φ‖₂² + ‖|X⁰|^σ φ‖₂²); κ > 3, σ > 1/2.
    /// The second term equals the L² norm of the σ-th derivative of the
    /// momentum-space profile in the energy direction.
    SpectralDerivative { sigma: f64 },
    /// ‖B^k(φ)G‖ ≤ const ‖(λ+|X⁰|)^τ (λ+|X⃗|)^β φ‖₂; κ < 3,
    /// β > (3−κ)/2, τ > 1/2.
    SpaceTimeWeighted { beta: f64, tau: f64 },
}

/// Weighted-norm bounds for the plus, minus and momentum parts under
/// spacetime smearing, ratio protocol.
pub fn weighted_bound_check(
    b: &OperatorField,
    k: f64,
    params: &EnvelopeParams,
    form: WeightedForm,
    weight: &EnergyWeight,
    functions: &[SpacetimeFunction],
) -> Result<BoundReport> {
    let kappa = params.kappa;
    let lambda = params.lambda;
    let rhs_of: Box<dyn Fn(&SpacetimeFunction) -> f64> = match form {
        WeightedForm::TimeWeighted { sigma } => {
            let p = sobolev_exponent(kappa)?;
            require_sharp_time_order(k, kappa)?;
            let min_sigma = if kappa < 3.0 { kappa / 6.0 } else { 0.5 };
            if !(sigma > min_sigma) {
                return Err(Error::HypothesisViolated(format!(
                    "time-weighted form requires sigma > {min_sigma}; got {sigma}"
                )));
            }
            Box::new(move |phi| phi.weighted_lp(p, |x| (lambda + x.time().abs()).powf(sigma)))
        }
        WeightedForm::SpectralDerivative { sigma } => {
            if kappa <= 3.0 {
                return Err(Error::HypothesisViolated(
                    "spectral-derivative form requires kappa > 3".into(),
                ));
            }
            if !(k > 2.0) {
                return Err(Error::HypothesisViolated(format!("requires k > 2; got {k}")));
            }
            if !(sigma > 0.5) {
                return Err(Error::HypothesisViolated(format!(
                    "spectral-derivative form requires sigma > 1/2; got {sigma}"
                )));
            }
            Box::new(move |phi| {
                let plain = phi.weighted_lp(2.0, |_| 1.0);
                let derived = phi.weighted_lp(2.0, |x| x.time().abs().powf(sigma));
                lambda.powf(2.0 * sigma) * plain * plain + derived * derived
            })
        }
        WeightedForm::SpaceTimeWeighted { beta, tau } => {
            if kappa >= 3.0 {
                return Err(Error::HypothesisViolated(
                    "spacetime-weighted form requires kappa < 3".into(),
                ));
            }
            require_order(k, kappa)?;
            if !(beta > (3.0 - kappa) / 2.0) || !(tau > 0.5) {
                return Err(Error::HypothesisViolated(format!(
                    "spacetime-weighted form requires beta > (3 - kappa)/2 and tau > 1/2; \
                     got beta = {beta}, tau = {tau}"
                )));
            }
            Box::new(move |phi| {
                phi.weighted_lp(2.0, |x| {
                    (lambda + x.time().abs()).powf(tau) * (lambda + x.spatial_norm()).powf(beta)
                })
            })
        }
    };
    let diag = weight.diagonal(b.model(), false)?;
    let (plus, minus) = b.frequency_parts(k)?;
    let momentum = b.momentum_filter(k)?;
    let mut pairs = Vec::new();
    for phi in functions {
        let nu = phi.to_measure();
        let rhs = rhs_of(phi);
        for part in [&plus, &minus, &momentum] {
            pairs.push((part.smear(&nu).mul_diag_right(&diag).norm(), rhs));
        }
    }
    Ok(BoundReport::from_pairs(
        "weighted-norm",
        format!("kappa={kappa} k={k} form={form:?}"),
        Protocol::CalibrationHoldout,
        2.0,
        pairs,
        None,
    ))
}

/// Norm decay of an operator probed by an anisotropically squeezed
/// momentum-space profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayCurve {
    pub gammas: Vec<f64>,
    pub values: Vec<f64>,
    pub final_over_initial: f64,
    /// No consecutive growth above 5% over the last decade of the schedule.
    pub tail_monotone: bool,
}

impl DecayCurve {
    fn from_values(gammas: Vec<f64>, values: Vec<f64>) -> DecayCurve {
        let initial = values.first().copied().unwrap_or(0.0);
        let final_v = values.last().copied().unwrap_or(0.0);
        let final_over_initial = if initial > 0.0 { final_v / initial } else { 0.0 };
        let g_max = gammas.last().copied().unwrap_or(1.0);
        let mut tail_monotone = true;
        for i in 1..values.len() {
            if gammas[i] >= g_max / 10.0 && values[i] > values[i - 1] * 1.05 {
                tail_monotone = false;
            }
        }
        DecayCurve { gammas, values, final_over_initial, tail_monotone }
    }

    pub fn passes(&self, threshold: f64) -> bool {
        self.final_over_initial < threshold && self.tail_monotone
    }
}

/// Geometric schedule γ = 2^j, j = 0..steps.
pub fn geometric_gammas(steps: u32) -> Vec<f64> {
    (0..=steps).map(|j| (2.0f64).powi(j as i32)).collect()
}

/// Squeeze a Gaussian momentum profile onto the point q, time direction
/// scaled by γ^δ and space by γ, and track ‖B^k_t(φ_{q,γ}) G(P⁰)‖.
pub fn corollary_point_limit(
    b: &OperatorField,
    k: f64,
    weight: &EnergyWeight,
    q: FourVector,
    delta: f64,
    probe_width: f64,
    gammas: &[f64],
) -> Result<DecayCurve> {
    if !(0.0 < delta && delta < 1.0) {
        return Err(Error::HypothesisViolated(format!("requires delta in (0,1); got {delta}")));
    }
    if !(k > 0.5) {
        return Err(Error::HypothesisViolated(format!("requires k > 1/2; got {k}")));
    }
    if !(probe_width > 0.0) {
        return Err(Error::InvalidParameter("probe width must be > 0".into()));
    }
    let diag = weight.diagonal(b.model(), false)?;
    let filtered = b.momentum_filter(k)?;
    let w2 = 2.0 * probe_width * probe_width;
    let values = gammas
        .iter()
        .map(|&g| {
            let smeared = filtered.smear_fourier(|p| {
                let dt = g.powf(delta) * (p.time() - q.time());
                let ds = [
                    g * (p.0[1] - q.0[1]),
                    g * (p.0[2] - q.0[2]),
                    g * (p.0[3] - q.0[3]),
                ];
                let arg = dt * dt + ds[0] * ds[0] + ds[1] * ds[1] + ds[2] * ds[2];
                Complex64::new((-arg / w2).exp(), 0.0)
            });
            smeared.mul_diag_right(&diag).norm()
        })
        .collect();
    Ok(DecayCurve::from_values(gammas.to_vec(), values))
}

/// Squeeze the profile onto the hyperplane of fixed component along a unit
/// spacelike direction n, and track the weighted norm of the
/// momentum-filtered part.
pub fn corollary_plane_limit(
    b: &OperatorField,
    k: f64,
    weight: &EnergyWeight,
    normal: FourVector,
    r: f64,
    probe_width: f64,
    gammas: &[f64],
) -> Result<DecayCurve> {
    if (normal.minkowski_sq() + 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(
            "normal must be a unit spacelike vector (n·n = −1)".into(),
        ));
    }
    if !(k > 0.5) {
        return Err(Error::HypothesisViolated(format!("requires k > 1/2; got {k}")));
    }
    let diag = weight.diagonal(b.model(), false)?;
    let filtered = b.momentum_filter(k)?;
    let w2 = 2.0 * probe_width * probe_width;
    let values = gammas
        .iter()
        .map(|&g| {
            let smeared = filtered.smear_fourier(|p| {
                // component along n: p = p_n n + p_perp with n·p_perp = 0
                let p_n = -p.minkowski_dot(&normal);
                let perp = p - normal * p_n;
                let arg = normal * (g * (p_n - r)) + perp;
                Complex64::new((-arg.euclid_norm().powi(2) / w2).exp(), 0.0)
            });
            smeared.mul_diag_right(&diag).norm()
        })
        .collect();
    Ok(DecayCurve::from_values(gammas.to_vec(), values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::QuantumModel;
    use crate::util::child_rng;
    use std::sync::Arc;

    fn cone_model(seed: u64) -> Arc<QuantumModel> {
        let mut rng = child_rng(31, seed);
        Arc::new(QuantumModel::random_cone(8, 3.0, true, &mut rng).unwrap())
    }

    fn diag_field(model: &Arc<QuantumModel>) -> OperatorField {
        let d = model.dim();
        OperatorField::new(
            crate::linalg::CMatrix::from_fn(d, d, |i, j| {
                if i == j { Complex64::new(0.4 * i as f64, 0.0) } else { Complex64::new(0.0, 0.0) }
            }),
            Arc::clone(model),
        )
        .unwrap()
    }

    #[test]
    fn envelope_check_single_atoms_reduce_to_definition() {
        let model = cone_model(0);
        let mut rng = child_rng(32, 0);
        let b = OperatorField::random(Arc::clone(&model), &mut rng);
        let params = EnvelopeParams::new(1.0, 1.5).unwrap();
        let x = FourVector::new(0.2, 2.0, -1.0, 0.0);
        let pairs =
            vec![(DiscreteMeasure::delta(FourVector::ZERO), DiscreteMeasure::delta(x))];
        let report = commutator_envelope_check(&b, &b.adjoint(), &pairs, &params).unwrap();
        assert!(report.pass);
        let inst = &report.instances[0];
        let direct = b.commutator_norm(&b.adjoint(), x).unwrap();
        approx::assert_relative_eq!(inst.lhs, direct, max_relative = 1e-10);
        assert!(inst.lhs <= inst.rhs * (1.0 + 1e-12));
    }

    #[test]
    fn envelope_check_random_families_have_zero_violations() {
        let model = cone_model(1);
        let params = EnvelopeParams::new(1.0, 2.0).unwrap();
        for trial in 0..10 {
            let mut rng = child_rng(33, trial);
            let b1 = OperatorField::random(Arc::clone(&model), &mut rng);
            let b2 = OperatorField::random(Arc::clone(&model), &mut rng);
            let pairs: Vec<_> = (0..5)
                .map(|_| {
                    (
                        random_measure(&mut rng, 10, 3.0, 1.0),
                        random_measure(&mut rng, 10, 3.0, 1.0),
                    )
                })
                .collect();
            let report = commutator_envelope_check(&b1, &b2, &pairs, &params).unwrap();
            assert!(report.pass, "trial {trial}: {report:?}");
        }
    }

    #[test]
    fn envelope_check_diagonal_lhs_zero() {
        let model = cone_model(2);
        let b = diag_field(&model);
        let params = EnvelopeParams::new(1.0, 1.0).unwrap();
        let mut rng = child_rng(34, 0);
        let pairs =
            vec![(random_measure(&mut rng, 6, 2.0, 1.0), random_measure(&mut rng, 6, 2.0, 1.0))];
        let report = commutator_envelope_check(&b, &b.adjoint(), &pairs, &params).unwrap();
        assert!(report.pass);
        assert!(report.instances[0].lhs < 1e-12);
    }

    #[test]
    fn projected_bound_rejects_small_k() {
        let model = cone_model(3);
        let mut rng = child_rng(35, 0);
        let b = OperatorField::random(Arc::clone(&model), &mut rng);
        let params = EnvelopeParams::new(1.0, 2.0).unwrap();
        let err = theorem_bk_check(&b, 1.0, TransferPart::Plus, &params, &[1.0], &[]);
        assert!(matches!(err, Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn projected_bound_ratio_protocol_and_zero_energy_annihilation() {
        let model = cone_model(4); // contains the origin
        let mut rng = child_rng(36, 0);
        let b = OperatorField::random(Arc::clone(&model), &mut rng);
        let params = EnvelopeParams::new(1.0, 1.5).unwrap();
        let measures: Vec<_> = (0..12).map(|_| random_measure(&mut rng, 8, 2.5, 1.0)).collect();
        let energies = [0.0, 0.8, 1.6, 2.4, 10.0];
        for sign in [TransferPart::Plus, TransferPart::Minus] {
            let report = theorem_bk_check(&b, 1.6, sign, &params, &energies, &measures).unwrap();
            assert!(report.pass, "{sign:?}: {report:?}");
            assert_eq!(report.zero_rhs_violations, 0);
        }
        // E below a strictly positive minimum: projector vanishes
        let positive_model = Arc::new(
            QuantumModel::new(vec![
                FourVector::new(1.0, 0.0, 0.0, 0.0),
                FourVector::new(2.0, 0.5, 0.0, 0.0),
            ])
            .unwrap(),
        );
        let bp = OperatorField::random(Arc::clone(&positive_model), &mut rng);
        let report =
            theorem_bk_check(&bp, 1.6, TransferPart::Minus, &params, &[0.5], &measures[..4])
                .unwrap();
        for inst in &report.instances {
            assert!(inst.lhs < 1e-12);
        }
    }

    #[test]
    fn projected_lhs_monotone_in_energy() {
        let model = cone_model(5);
        let mut rng = child_rng(37, 0);
        let b = OperatorField::random(Arc::clone(&model), &mut rng);
        let (plus, _) = b.frequency_parts(1.5).unwrap();
        let nu = random_measure(&mut rng, 6, 2.0, 1.0);
        let smeared = plus.smear(&nu);
        let mut last = 0.0;
        for e in [0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0] {
            let lhs = smeared.mul_diag_right(&model.spectral_projector(e)).norm();
            assert!(lhs >= last - 1e-12);
            last = lhs;
        }
    }

    #[test]
    fn weighted_bound_validations() {
        let model = cone_model(6);
        let mut rng = child_rng(38, 0);
        let b = OperatorField::random(Arc::clone(&model), &mut rng);
        let params = EnvelopeParams::new(1.0, 1.5).unwrap();
        let singular = EnergyWeight::singular_at_zero(1.0, 0.25, 0.5).unwrap();
        // singular weight is rejected for the plus part
        assert!(matches!(
            theorem_gb_check(&b, 1.6, TransferPart::Plus, &singular, &params, &[]),
            Err(Error::HypothesisViolated(_))
        ));
        // and for any part when the model has zero energy
        assert!(theorem_gb_check(&b, 1.6, TransferPart::Minus, &singular, &params, &[]).is_err());
    }

    #[test]
    fn weighted_bound_ratio_protocol() {
        let model = cone_model(7);
        let mut rng = child_rng(39, 0);
        let b = OperatorField::random(Arc::clone(&model), &mut rng);
        let params = EnvelopeParams::new(1.0, 1.5).unwrap();
        let weight = EnergyWeight::bounded(1.0, 1.0).unwrap();
        let measures: Vec<_> = (0..16).map(|_| random_measure(&mut rng, 8, 2.5, 1.0)).collect();
        for part in [TransferPart::Plus, TransferPart::Minus, TransferPart::Momentum] {
            let report = theorem_gb_check(&b, 1.6, part, &weight, &params, &measures).unwrap();
            assert!(report.pass, "{part:?}: {report:?}");
        }
        // diagonal operator: lhs identically zero
        let diag = diag_field(&model);
        let report =
            theorem_gb_check(&diag, 1.6, TransferPart::Plus, &weight, &params, &measures).unwrap();
        for inst in &report.instances {
            assert!(inst.lhs < 1e-12);
        }
    }

    #[test]
    fn stability_check_profiles() {
        let model = cone_model(8);
        let mut rng = child_rng(40, 0);
        let b = OperatorField::random(Arc::clone(&model), &mut rng);
        let params = EnvelopeParams::new(1.0, 1.5).unwrap();
        // inadmissible exponents are rejected
        assert!(matches!(
            stability_check(&b, SmearingProfile::PowerLawTime { s: 1.2 }, &params, 4.0, 4),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(
            stability_check(&b, SmearingProfile::PowerLawSpacetime { r: 4.0 }, &params, 2.0, 3),
            Err(Error::HypothesisViolated(_))
        ));
        // admissible profiles keep the constant finite and grid-stable
        let chk =
            stability_check(&b, SmearingProfile::GaussianTime { width: 0.8 }, &params, 4.0, 5)
                .unwrap();
        assert!(chk.pass, "{chk:?}");
        let chk =
            stability_check(&b, SmearingProfile::PowerLawTime { s: 2.5 }, &params, 6.0, 6)
                .unwrap();
        assert!(chk.pass, "{chk:?}");
        // diagonal field: constants stay zero
        let chk = stability_check(
            &diag_field(&model),
            SmearingProfile::GaussianTime { width: 0.8 },
            &params,
            4.0,
            4,
        )
        .unwrap();
        assert_eq!(chk.smeared_constant, 0.0);
        assert!(chk.pass);
    }

    #[test]
    fn sobolev_exponent_branches() {
        approx::assert_relative_eq!(sobolev_exponent(2.0).unwrap(), 1.5);
        approx::assert_relative_eq!(sobolev_exponent(4.0).unwrap(), 2.0);
        assert!(sobolev_exponent(3.0).is_err());
    }

    #[test]
    fn sharp_time_bound_families() {
        let model = cone_model(9);
        let mut rng = child_rng(41, 0);
        let b = OperatorField::random(Arc::clone(&model), &mut rng);
        let weight = EnergyWeight::bounded(1.0, 1.0).unwrap();
        let params = EnvelopeParams::new(1.0, 2.0).unwrap();
        let fs: Vec<_> = (0..6)
            .map(|i| {
                let w = 0.5 + 0.2 * i as f64;
                SpatialFunction::from_fn(7, 0.6, move |x| {
                    (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * w * w)).exp()
                })
            })
            .collect();
        let report = sobolev_bound_check(&b, 1.6, &params, 0.3, &weight, &fs).unwrap();
        assert!(report.pass, "{report:?}");
        // zero function: lhs = 0
        let zero = [SpatialFunction::from_fn(5, 0.5, |_| 0.0)];
        let report = sobolev_bound_check(&b, 1.6, &params, 0.0, &weight, &zero).unwrap();
        for inst in &report.instances {
            assert_eq!(inst.lhs, 0.0);
        }
        // critical value rejected
        let bad = EnvelopeParams::new(1.0, 3.0).unwrap();
        assert!(sobolev_bound_check(&b, 2.5, &bad, 0.0, &weight, &fs).is_err());
        // decay above the critical value needs k > 2
        let high = EnvelopeParams::new(1.0, 4.0).unwrap();
        assert!(matches!(
            sobolev_bound_check(&b, 1.8, &high, 0.0, &weight, &fs),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(sobolev_bound_check(&b, 2.5, &high, 0.0, &weight, &fs).unwrap().pass);
    }

    #[test]
    fn rescaled_family_ratio_stays_bounded() {
        let model = cone_model(10);
        let mut rng = child_rng(42, 0);
        let b = OperatorField::random(Arc::clone(&model), &mut rng);
        let weight = EnergyWeight::bounded(1.0, 1.0).unwrap();
        let p = sobolev_exponent(2.0).unwrap();
        let mut ratios = Vec::new();
        for scale in [1.0f64, 2.0, 4.0] {
            // f_R(x) = f(x/R) sampled on a grid stretched by R
            let f = SpatialFunction::from_fn(7, 0.6 * scale, move |x| {
                let r2 = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (scale * scale);
                (-r2 / 0.72).exp()
            });
            let lhs = {
                let nu = f.to_measure(0.0);
                let diag = weight.diagonal(b.model(), false).unwrap();
                b.momentum_filter(1.6).unwrap().smear(&nu).mul_diag_right(&diag).norm()
            };
            ratios.push(lhs / f.lp_norm(p));
        }
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max.is_finite());
        // growing support must not blow the ratio up
        assert!(max / min.max(1e-30) < 50.0, "ratios {ratios:?}");
    }

    #[test]
    fn weighted_form_validations_and_ratio() {
        let model = cone_model(11);
        let mut rng = child_rng(43, 0);
        let b = OperatorField::random(Arc::clone(&model), &mut rng);
        let weight = EnergyWeight::bounded(1.0, 1.0).unwrap();
        let low = EnvelopeParams::new(1.0, 2.0).unwrap();
        let high = EnvelopeParams::new(1.0, 4.0).unwrap();
        let phis: Vec<_> = (0..4)
            .map(|i| {
                let w = 0.6 + 0.15 * i as f64;
                SpacetimeFunction::from_fn(5, 0.5, 0.5, move |x| {
                    Complex64::new((-x.euclid_norm().powi(2) / (2.0 * w * w)).exp(), 0.0)
                })
            })
            .collect();
        // out-of-range exponents
        assert!(weighted_bound_check(
            &b,
            1.6,
            &low,
            WeightedForm::TimeWeighted { sigma: 0.2 },
            &weight,
            &phis
        )
        .is_err());
        assert!(weighted_bound_check(
            &b,
            2.5,
            &low,
            WeightedForm::SpectralDerivative { sigma: 0.6 },
            &weight,
            &phis
        )
        .is_err());
        assert!(weighted_bound_check(
            &b,
            2.5,
            &high,
            WeightedForm::SpaceTimeWeighted { beta: 0.6, tau: 0.6 },
            &weight,
            &phis
        )
        .is_err());
        // in-hypothesis forms pass the ratio protocol
        let r1 = weighted_bound_check(
            &b,
            1.6,
            &low,
            WeightedForm::TimeWeighted { sigma: 0.4 },
            &weight,
            &phis,
        )
        .unwrap();
        assert!(r1.pass, "{r1:?}");
        let r2 = weighted_bound_check(
            &b,
            2.5,
            &high,
            WeightedForm::SpectralDerivative { sigma: 0.6 },
            &weight,
            &phis,
        )
        .unwrap();
        assert!(r2.pass, "{r2:?}");
        let r3 = weighted_bound_check(
            &b,
            1.6,
            &low,
            WeightedForm::SpaceTimeWeighted { beta: 0.6, tau: 0.6 },
            &weight,
            &phis,
        )
        .unwrap();
        assert!(r3.pass, "{r3:?}");
        // weight floor: the weighted norm dominates the plain norm
        let phi = &phis[0];
        let sigma = 0.6;
        let weighted = phi.weighted_lp(2.0, |x| (1.0 + x.time().abs()).powf(sigma));
        let plain = phi.weighted_lp(2.0, |_| 1.0);
        assert!(weighted >= plain);
    }

    #[test]
    fn point_squeeze_decays_generic_and_vanishes_off_support() {
        let model = Arc::new(QuantumModel::mass_shell(1.0, 1, 0.8).unwrap());
        let mut rng = child_rng(44, 0);
        let b = OperatorField::random(Arc::clone(&model), &mut rng);
        let weight = EnergyWeight::bounded(1.0, 1.0).unwrap();
        let gammas = geometric_gammas(7);
        // generic probe point away from exact transfers
        let q = FourVector::new(0.37, 0.21, -0.4, 0.11);
        let curve = corollary_point_limit(&b, 1.0, &weight, q, 0.5, 0.5, &gammas).unwrap();
        assert!(curve.passes(0.1), "{curve:?}");
        // probe far from every transfer: tiny at every gamma
        let far = FourVector::new(40.0, 0.0, 0.0, 0.0);
        let curve = corollary_point_limit(&b, 1.0, &weight, far, 0.5, 1.0, &gammas).unwrap();
        assert!(curve.values.iter().all(|&v| v < 1e-12));
        // diagonal operator: identically zero
        let curve =
            corollary_point_limit(&diag_field(&model), 1.0, &weight, q, 0.5, 0.5, &gammas)
                .unwrap();
        assert!(curve.values.iter().all(|&v| v == 0.0));
        // invalid parameters
        assert!(corollary_point_limit(&b, 1.0, &weight, q, 1.0, 0.5, &gammas).is_err());
        assert!(corollary_point_limit(&b, 0.4, &weight, q, 0.5, 0.5, &gammas).is_err());
    }

    #[test]
    fn plane_squeeze_decays_and_validates_normal() {
        let model = Arc::new(QuantumModel::mass_shell(1.0, 1, 0.8).unwrap());
        let mut rng = child_rng(45, 0);
        let b = OperatorField::random(Arc::clone(&model), &mut rng);
        let weight = EnergyWeight::bounded(1.0, 1.0).unwrap();
        let gammas = geometric_gammas(7);
        let n = FourVector::new(0.0, 1.0, 0.0, 0.0);
        // r threaded between the discrete transfer components
        let curve = corollary_plane_limit(&b, 1.0, &weight, n, 0.37, 0.5, &gammas).unwrap();
        assert!(curve.passes(0.1), "{curve:?}");
        // r off every transfer component entirely
        let curve = corollary_plane_limit(&b, 1.0, &weight, n, 50.0, 1.0, &gammas).unwrap();
        assert!(curve.values.iter().all(|&v| v < 1e-12));
        // timelike normal rejected
        let bad = FourVector::new(1.0, 0.0, 0.0, 0.0);
        assert!(corollary_plane_limit(&b, 1.0, &weight, bad, 0.0, 0.5, &gammas).is_err());
    }
}
