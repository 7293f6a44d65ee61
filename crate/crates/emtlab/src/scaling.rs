//! Momentum scaling degree of operators with respect to a submanifold of
//! the transfer space: anisotropically squeezed test profiles, a log-log
//! slope estimator for the degree, lower bounds implied by boundedness and
//! by the spacelike commutator decay, and the classifier of distribution
//! types concentrated on a submanifold that those bounds do not exclude.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::{EnergyWeight, OperatorField};
use crate::spacetime::FourVector;
use crate::util::ls_slope;
use crate::{Error, Result};

/// One polynomial chart coordinate: value(u) = linear·u + u^T Q u on the
/// displacement u = p − q.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyCoord {
    pub linear: [f64; 4],
    pub quadratic: Option<[[f64; 4]; 4]>,
}

impl PolyCoord {
    pub fn linear(coeffs: [f64; 4]) -> Self {
        PolyCoord { linear: coeffs, quadratic: None }
    }

    fn eval(&self, u: &FourVector) -> f64 {
        let mut v = 0.0;
        for i in 0..4 {
            v += self.linear[i] * u.0[i];
        }
        if let Some(q) = &self.quadratic {
            for i in 0..4 {
                for j in 0..4 {
                    v += u.0[i] * q[i][j] * u.0[j];
                }
            }
        }
        v
    }
}

/// Local coordinates (ρ, σ) around a base point q, with Σ the zero set of
/// the ρ block. The codimension is the number of ρ coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Chart {
    pub base: FourVector,
    pub rho: Vec<PolyCoord>,
    pub sigma: Vec<PolyCoord>,
    /// Euclidean radius of the admissible neighborhood around the base.
    pub domain_radius: f64,
}

impl Chart {
    pub fn new(
        base: FourVector,
        rho: Vec<PolyCoord>,
        sigma: Vec<PolyCoord>,
        domain_radius: f64,
    ) -> Result<Self> {
        let m = rho.len();
        if !(1..=4).contains(&m) || rho.len() + sigma.len() != 4 {
            return Err(Error::InvalidParameter(format!(
                "chart needs 1 <= codim <= 4 and codim + tangential = 4; \
                 got {m} + {}",
                sigma.len()
            )));
        }
        if !(domain_radius > 0.0) {
            return Err(Error::InvalidParameter("chart domain radius must be > 0".into()));
        }
        let chart = Chart { base, rho, sigma, domain_radius };
        if chart.linear_gain() < 1e-10 {
            return Err(Error::InvalidParameter(
                "chart is degenerate at the base point (singular linear part)".into(),
            ));
        }
        Ok(chart)
    }

    pub fn codim(&self) -> usize {
        self.rho.len()
    }

    /// (ρ, σ) coordinates of p.
    pub fn coords(&self, p: FourVector) -> (Vec<f64>, Vec<f64>) {
        let u = p - self.base;
        (
            self.rho.iter().map(|c| c.eval(&u)).collect(),
            self.sigma.iter().map(|c| c.eval(&u)).collect(),
        )
    }

    /// Smallest singular value of the linear part; bounds how much
    /// coordinate radius a displacement of unit length must produce.
    pub fn linear_gain(&self) -> f64 {
        let rows: Vec<[f64; 4]> = self
            .rho
            .iter()
            .chain(self.sigma.iter())
            .map(|c| c.linear)
            .collect();
        let m = nalgebra::DMatrix::<f64>::from_fn(4, 4, |i, j| rows[i][j]);
        m.svd(false, false).singular_values.min()
    }

    /// Determinant of the Jacobian of p ↦ (ρ, σ) at p.
    pub fn jacobian_det(&self, p: FourVector) -> f64 {
        let h = 1e-6;
        let mut jac = nalgebra::DMatrix::<f64>::zeros(4, 4);
        for j in 0..4 {
            let mut dp = FourVector::ZERO;
            dp.0[j] = h;
            let (rp, sp) = self.coords(p + dp);
            let (rm, sm) = self.coords(p - dp);
            for (i, (a, b)) in rp.iter().zip(&rm).enumerate() {
                jac[(i, j)] = (a - b) / (2.0 * h);
            }
            for (i, (a, b)) in sp.iter().zip(&sm).enumerate() {
                jac[(self.rho.len() + i, j)] = (a - b) / (2.0 * h);
            }
        }
        jac.determinant()
    }

    /// Chart for a single point (codimension 4): ρ = components of p − q.
    pub fn point(q: FourVector, radius: f64) -> Result<Self> {
        let rho = (0..4)
            .map(|i| {
                let mut l = [0.0; 4];
                l[i] = 1.0;
                PolyCoord::linear(l)
            })
            .collect();
        Chart::new(q, rho, vec![], radius)
    }

    /// Chart for the hyperplane with unit Euclidean normal `axis`
    /// (codimension 1), tangential coordinates the remaining components.
    pub fn hyperplane(q: FourVector, axis: usize, radius: f64) -> Result<Self> {
        if axis > 3 {
            return Err(Error::InvalidParameter("hyperplane axis must be 0..=3".into()));
        }
        let mut ln = [0.0; 4];
        ln[axis] = 1.0;
        let sigma = (0..4)
            .filter(|&i| i != axis)
            .map(|i| {
                let mut l = [0.0; 4];
                l[i] = 1.0;
                PolyCoord::linear(l)
            })
            .collect();
        Chart::new(q, vec![PolyCoord::linear(ln)], sigma, radius)
    }

    /// Chart for the mass hyperboloid through q (q·q = mass²), with the
    /// quadratic defining function ρ = p·p − mass² expanded around q.
    pub fn mass_shell(q: FourVector, mass: f64, radius: f64) -> Result<Self> {
        if (q.minkowski_sq() - mass * mass).abs() > 1e-9 * (1.0 + mass * mass) {
            return Err(Error::InvalidParameter(
                "mass-shell chart needs a base point on the shell".into(),
            ));
        }
        // p·p − m² = 2 q·u + u·u
        let linear = [2.0 * q.0[0], -2.0 * q.0[1], -2.0 * q.0[2], -2.0 * q.0[3]];
        let mut quad = [[0.0; 4]; 4];
        quad[0][0] = 1.0;
        quad[1][1] = -1.0;
        quad[2][2] = -1.0;
        quad[3][3] = -1.0;
        let rho = vec![PolyCoord { linear, quadratic: Some(quad) }];
        let sigma = (1..4)
            .map(|i| {
                let mut l = [0.0; 4];
                l[i] = 1.0;
                PolyCoord::linear(l)
            })
            .collect();
        Chart::new(q, rho, sigma, radius)
    }
}

/// Compactly supported bump exp(−1/(1−u²)) on (−1, 1).
pub fn bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

/// Per-coordinate window of the test profile.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Window {
    pub width: f64,
    pub offset: f64,
}

impl Window {
    fn eval(&self, v: f64) -> f64 {
        bump((v - self.offset) / self.width)
    }

    fn support_radius(&self) -> f64 {
        self.offset.abs() + self.width
    }
}

/// Smooth compactly supported profile ψ(ρ, σ) as a product of bumps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestProfile {
    pub rho_windows: Vec<Window>,
    pub sigma_windows: Vec<Window>,
}

impl TestProfile {
    /// Centered windows covering ρ = 0, slightly offset so odd derivatives
    /// at the origin do not vanish.
    pub fn standard(codim: usize, tangential: usize) -> Self {
        TestProfile {
            rho_windows: (0..codim).map(|_| Window { width: 1.0, offset: 0.3 }).collect(),
            sigma_windows: (0..tangential)
                .map(|_| Window { width: 2.0, offset: 0.0 })
                .collect(),
        }
    }

    pub fn eval(&self, rho: &[f64], sigma: &[f64]) -> f64 {
        let mut v = 1.0;
        for (w, r) in self.rho_windows.iter().zip(rho) {
            v *= w.eval(*r);
        }
        for (w, s) in self.sigma_windows.iter().zip(sigma) {
            v *= w.eval(*s);
        }
        v
    }
}

/// A chart plus a test profile: the generator of the squeezed probes
/// φ̂_γ(p) = γ^m ψ(γρ(p), σ(p)).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingFamily {
    pub chart: Chart,
    pub profile: TestProfile,
}

impl ScalingFamily {
    pub fn new(chart: Chart, profile: TestProfile) -> Result<Self> {
        if profile.rho_windows.len() != chart.codim()
            || profile.sigma_windows.len() != chart.sigma.len()
        {
            return Err(Error::InvalidParameter(
                "profile window counts must match the chart coordinate counts".into(),
            ));
        }
        Ok(ScalingFamily { chart, profile })
    }

    pub fn codim(&self) -> usize {
        self.chart.codim()
    }

    /// Coordinate-space radius of the probe support at scale γ.
    fn support_radius(&self, gamma: f64) -> f64 {
        let rho_r = self
            .profile
            .rho_windows
            .iter()
            .map(|w| w.support_radius() / gamma)
            .fold(0.0f64, f64::max);
        let sigma_r = self
            .profile
            .sigma_windows
            .iter()
            .map(|w| w.support_radius())
            .fold(0.0f64, f64::max);
        (rho_r * rho_r + sigma_r * sigma_r).sqrt() * 2.0
    }

    /// The probe φ̂_γ as a function of momenta; errors when its support
    /// cannot fit inside the chart's domain.
    pub fn probe(&self, gamma: f64) -> Result<impl Fn(FourVector) -> f64 + '_> {
        if !(gamma >= 1.0) {
            return Err(Error::InvalidParameter(format!("gamma must be >= 1, got {gamma}")));
        }
        let reach = self.support_radius(gamma) / self.chart.linear_gain();
        if reach > self.chart.domain_radius {
            return Err(Error::ChartDomain(format!(
                "probe support (radius ~{reach:.3}) escapes the chart domain \
                 (radius {})",
                self.chart.domain_radius
            )));
        }
        let m = self.codim() as f64;
        Ok(move |p: FourVector| {
            let (rho, sigma) = self.chart.coords(p);
            let scaled: Vec<f64> = rho.iter().map(|r| r * gamma).collect();
            gamma.powf(m) * self.profile.eval(&scaled, &sigma)
        })
    }

    /// ∫ |φ̂_γ| dρ dσ by midpoint quadrature over the (γ-shrunk) support;
    /// exactly γ-independent up to the quadrature error.
    pub fn chart_l1(&self, gamma: f64, points_per_axis: usize) -> Result<f64> {
        let _ = self.probe(gamma)?; // domain validation
        let m = self.codim();
        let dims = m + self.profile.sigma_windows.len();
        let mut ranges = Vec::with_capacity(dims);
        for w in &self.profile.rho_windows {
            ranges.push(((w.offset - w.width) / gamma, (w.offset + w.width) / gamma));
        }
        for w in &self.profile.sigma_windows {
            ranges.push((w.offset - w.width, w.offset + w.width));
        }
        let n = points_per_axis;
        let mut total = 0.0;
        let mut cell = 1.0;
        for &(lo, hi) in &ranges {
            cell *= (hi - lo) / n as f64;
        }
        let mut idx = vec![0usize; dims];
        loop {
            let mut rho = Vec::with_capacity(m);
            let mut sigma = Vec::with_capacity(dims - m);
            for (d, &i) in idx.iter().enumerate() {
                let (lo, hi) = ranges[d];
                let v = lo + (i as f64 + 0.5) * (hi - lo) / n as f64;
                if d < m {
                    rho.push(v * gamma);
                } else {
                    sigma.push(v);
                }
            }
            total += gamma.powf(m as f64) * self.profile.eval(&rho, &sigma).abs() * cell;
            // advance the multi-index
            let mut d = 0;
            loop {
                if d == dims {
                    return Ok(total);
                }
                idx[d] += 1;
                if idx[d] < n {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
    }
}

/// Values of the probe at every Bohr transfer of a model.
pub fn scaled_test(
    family: &ScalingFamily,
    gamma: f64,
    model: &crate::model::QuantumModel,
) -> Result<Vec<((usize, usize), f64)>> {
    let probe = family.probe(gamma)?;
    let d = model.dim();
    let mut out = Vec::new();
    for m in 0..d {
        for n in 0..d {
            out.push(((m, n), probe(model.transfer(m, n))));
        }
    }
    Ok(out)
}

/// Degree estimate from a norm trace over a geometric γ-schedule.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum DegreeEstimate {
    Finite {
        degree: f64,
        slope_full: f64,
        slope_tail: f64,
        /// Tail and full-grid slopes agree within 0.1.
        stable: bool,
    },
    /// Norms fell below the underflow floor: every rate is admissible.
    AllAdmissible,
}

impl DegreeEstimate {
    /// Degree with the underflow sentinel mapped to +∞.
    pub fn value(&self) -> f64 {
        match self {
            DegreeEstimate::Finite { degree, .. } => *degree,
            DegreeEstimate::AllAdmissible => f64::INFINITY,
        }
    }
}

const UNDERFLOW_FLOOR: f64 = 1e-13;

/// Estimate the scaling degree as minus the log-log slope of the values
/// against γ, using the last half of the grid with a stability diagnostic.
pub fn estimate_degree(gammas: &[f64], values: &[f64]) -> Result<DegreeEstimate> {
    if gammas.len() != values.len() || gammas.len() < 6 {
        return Err(Error::InvalidParameter(
            "degree estimation needs a geometric grid of at least 6 points".into(),
        ));
    }
    let r0 = gammas[1] / gammas[0];
    for i in 1..gammas.len() {
        let r = gammas[i] / gammas[i - 1];
        if !(r > 1.0) || (r - r0).abs() > 1e-9 * r0 {
            return Err(Error::InvalidParameter("gamma grid must be geometric".into()));
        }
    }
    let tail_start = gammas.len() / 2;
    if values[tail_start..].iter().any(|&v| v < UNDERFLOW_FLOOR) {
        return Ok(DegreeEstimate::AllAdmissible);
    }
    let lx: Vec<f64> = gammas.iter().map(|g| g.ln()).collect();
    let ly: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let slope_full = ls_slope(&lx, &ly);
    let slope_tail = ls_slope(&lx[tail_start..], &ly[tail_start..]);
    Ok(DegreeEstimate::Finite {
        degree: -slope_tail,
        slope_full,
        slope_tail,
        stable: (slope_tail - slope_full).abs() < 0.1,
    })
}

/// Degree of ‖B(φ_γ)‖ (or ‖B(φ_γ)G(P⁰)‖ when a weight is given).
pub fn estimate_operator_degree(
    b: &OperatorField,
    family: &ScalingFamily,
    gammas: &[f64],
    weight: Option<&EnergyWeight>,
) -> Result<DegreeEstimate> {
    let diag = match weight {
        Some(w) => Some(w.diagonal(b.model(), false)?),
        None => None,
    };
    let mut values = Vec::with_capacity(gammas.len());
    for &g in gammas {
        let probe = family.probe(g)?;
        let smeared = b.smear_fourier(|p| Complex64::new(probe(p), 0.0));
        let v = match &diag {
            Some(d) => smeared.mul_diag_right(d).norm(),
            None => smeared.norm(),
        };
        values.push(v);
    }
    estimate_degree(gammas, &values)
}

/// Hypothesis under which a degree lower bound is asserted.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum DegreeHypothesis {
    /// Any bounded operator.
    Bare,
    /// Spacelike commutator decay of rate κ, composed with a bounded
    /// energy weight; requires the base point away from zero transfer.
    KappaType { kappa: f64 },
}

/// Lower bound on the scaling degree for a codimension-m submanifold.
pub fn degree_lower_bound(
    m: usize,
    hypothesis: DegreeHypothesis,
    q_is_origin: bool,
) -> Result<f64> {
    if !(1..=4).contains(&m) {
        return Err(Error::InvalidParameter(format!("codimension must be 1..=4, got {m}")));
    }
    match hypothesis {
        DegreeHypothesis::Bare => Ok(-((m as f64) + 4.0) / 2.0),
        DegreeHypothesis::KappaType { kappa } => {
            if !(kappa > 0.0) {
                return Err(Error::InvalidParameter(format!("kappa must be > 0, got {kappa}")));
            }
            if q_is_origin {
                return Err(Error::HypothesisViolated(
                    "the decay-rate bound requires a base point away from zero transfer".into(),
                ));
            }
            if kappa < 3.0 {
                Ok(-((m as f64) + 4.0 - kappa) / 2.0)
            } else {
                Ok(-((m as f64) + 1.0) / 2.0)
            }
        }
    }
}

/// A distribution type concentrated on a codimension-m submanifold that
/// the degree bounds do not exclude. Semantics is "not excluded", never
/// "guaranteed to exist".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllowedSingularity {
    pub codim: usize,
    pub derivative_order: usize,
    /// Allowed only when the base point is the zero transfer.
    pub origin_only: bool,
}

/// Enumerate the point-supported distribution types (delta derivatives of
/// order l in m variables) compatible with the degree lower bounds:
/// the plain delta at the origin for m = 4 always, and for base points
/// away from the origin m + 2l ≤ 1 when κ ≥ 3, m + 2l ≤ 4 − κ when κ < 3.
pub fn classify_allowed_singularities(kappa: f64) -> Result<Vec<AllowedSingularity>> {
    if !(kappa > 0.0) {
        return Err(Error::InvalidParameter(format!("kappa must be > 0, got {kappa}")));
    }
    let mut out = Vec::new();
    for m in 1..=4usize {
        for l in 0..=3usize {
            let weight = (m + 2 * l) as f64;
            let allowed = if kappa >= 3.0 { weight <= 1.0 } else { weight <= 4.0 - kappa };
            if allowed {
                out.push(AllowedSingularity { codim: m, derivative_order: l, origin_only: false });
            }
        }
    }
    out.push(AllowedSingularity { codim: 4, derivative_order: 0, origin_only: true });
    out.sort_by_key(|a| (a.codim, a.derivative_order, a.origin_only));
    Ok(out)
}

/// Finite combination of delta derivatives at ρ = 0 in m variables, with
/// the derivatives taken along the first coordinate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaCombination {
    pub codim: usize,
    /// (derivative order, coefficient) terms.
    pub terms: Vec<(usize, f64)>,
}

impl DeltaCombination {
    pub fn new(codim: usize, terms: Vec<(usize, f64)>) -> Result<Self> {
        if !(1..=4).contains(&codim) || terms.is_empty() {
            return Err(Error::InvalidParameter(
                "delta combination needs 1 <= codim <= 4 and at least one term".into(),
            ));
        }
        Ok(DeltaCombination { codim, terms })
    }

    /// Analytic scaling degree −m − max order.
    pub fn analytic_degree(&self) -> f64 {
        let l = self.terms.iter().map(|t| t.0).max().unwrap_or(0);
        -((self.codim + l) as f64)
    }

    /// |T(ψ_γ)| for ψ_γ(ρ) = γ^m ψ(γρ), evaluated symbolically: derivative
    /// terms contribute (−1)^l γ^(m+l) ∂^l ψ(0) with the derivative taken by
    /// central finite differences on the profile.
    pub fn scaled_values(&self, profile: &TestProfile, gammas: &[f64]) -> Result<Vec<f64>> {
        if profile.rho_windows.len() != self.codim || !profile.sigma_windows.is_empty() {
            return Err(Error::InvalidParameter(
                "delta evaluation needs a profile with codim rho windows and no sigma part"
                    .into(),
            ));
        }
        let psi_slice = |r1: f64| {
            let mut rho = vec![0.0; self.codim];
            rho[0] = r1;
            profile.eval(&rho, &[])
        };
        let h = 1e-3;
        let derivative = |l: usize| -> f64 {
            match l {
                0 => psi_slice(0.0),
                1 => (psi_slice(h) - psi_slice(-h)) / (2.0 * h),
                2 => (psi_slice(h) - 2.0 * psi_slice(0.0) + psi_slice(-h)) / (h * h),
                3 => {
                    (psi_slice(2.0 * h) - 2.0 * psi_slice(h) + 2.0 * psi_slice(-h)
                        - psi_slice(-2.0 * h))
                        / (2.0 * h * h * h)
                }
                _ => 0.0,
            }
        };
        let m = self.codim as f64;
        Ok(gammas
            .iter()
            .map(|&g| {
                self.terms
                    .iter()
                    .map(|&(l, c)| {
                        c * (-1.0f64).powi(l as i32) * g.powf(m + l as f64) * derivative(l)
                    })
                    .sum::<f64>()
                    .abs()
            })
            .collect())
    }
}

/// |T(ψ_γ)| for the homogeneous distribution |ρ|^a in one variable,
/// by midpoint quadrature over the scaled support.
pub fn homogeneous_scaled_values(
    a: f64,
    window: &Window,
    gammas: &[f64],
    quadrature_points: usize,
) -> Result<Vec<f64>> {
    if a <= -1.0 {
        return Err(Error::InvalidParameter(format!(
            "|rho|^a must be locally integrable, needs a > -1; got {a}"
        )));
    }
    let n = quadrature_points.max(100);
    Ok(gammas
        .iter()
        .map(|&g| {
            let lo = (window.offset - window.width) / g;
            let hi = (window.offset + window.width) / g;
            let dr = (hi - lo) / n as f64;
            let mut total = 0.0;
            for i in 0..n {
                let r = lo + (i as f64 + 0.5) * dr;
                if r == 0.0 {
                    continue;
                }
                total += r.abs().powf(a) * g * bump((r * g - window.offset) / window.width) * dr;
            }
            total.abs()
        })
        .collect())
}

/// Smearing against a measure never lowers the estimated degree (within
/// the estimator tolerance).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonotonicityCheck {
    pub base: DegreeEstimate,
    pub smeared: DegreeEstimate,
    pub pass: bool,
}

pub fn remark_monotonicity_check(
    b: &OperatorField,
    nu: &crate::spacetime::DiscreteMeasure,
    family: &ScalingFamily,
    gammas: &[f64],
    weight: Option<&EnergyWeight>,
) -> Result<MonotonicityCheck> {
    let base = estimate_operator_degree(b, family, gammas, weight)?;
    let smeared = estimate_operator_degree(&b.smear(nu), family, gammas, weight)?;
    let pass = smeared.value() >= base.value() - 0.2;
    Ok(MonotonicityCheck { base, smeared, pass })
}
