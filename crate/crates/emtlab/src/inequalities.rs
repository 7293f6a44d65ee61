//! Numerical verifiers for three standalone lemmas: polynomial decay of
//! inverse transforms of functions with controlled derivatives, the
//! interpolation inequality ‖h^ε f‖ ≤ ‖f‖^{1−ε} ‖hf‖^ε, and the integral
//! inequality for stochastically dominated measures against nonincreasing
//! integrands.

use num_complex::Complex64;
use rand::Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Grid for the decay check: per-axis sample count, momentum extent, and
/// the relative mass allowed at the momentum grid edge before the run is
/// rejected as aliased.
///
/// The default edge tolerance 1e−10 suits rapidly decaying momentum
/// profiles; slowly decaying ones (plain power laws) need either a much
/// larger extent or an explicit opt-in tolerance.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DecayGrid {
    pub per_axis: usize,
    pub extent: f64,
    pub edge_tolerance: f64,
}

impl Default for DecayGrid {
    fn default() -> Self {
        DecayGrid { per_axis: 1 << 12, extent: 40.0, edge_tolerance: 1e-10 }
    }
}

/// Fit of the decay constant sup |F̌(x)| (λ + |x|)^{n+γ} at three grid
/// refinements.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayConstantFit {
    /// Constants at the base grid and two doublings.
    pub constants: [f64; 3],
    /// Largest relative change between consecutive refinements.
    pub max_drift: f64,
    /// Derivative growth near zero consistent with |D^α F| ≲ |p|^{γ−|α|}.
    pub hypothesis_ok: bool,
    pub pass: bool,
}

fn nd_inverse_transform(
    values: &mut Vec<Complex64>,
    per_axis: usize,
    n: usize,
    dp: f64,
    extent: f64,
) {
    // forward FFT along every axis plus the phase for the grid offset −extent
    let mut planner = FftPlanner::new();
    let plan = planner.plan_fft_forward(per_axis);
    let total: usize = values.len();
    let mut buf = vec![Complex64::new(0.0, 0.0); per_axis];
    for axis in 0..n {
        let stride: usize = per_axis.pow((n - 1 - axis) as u32);
        let blocks = total / (per_axis * stride);
        for b in 0..blocks {
            for s in 0..stride {
                let base = b * per_axis * stride + s;
                for j in 0..per_axis {
                    buf[j] = values[base + j * stride];
                }
                plan.process(&mut buf);
                for j in 0..per_axis {
                    values[base + j * stride] = buf[j];
                }
            }
        }
    }
    // x_k = 2π k̃/(N dp); overall factor (2π)^{-n/2} dp^n and phase e^{i extent Σ x_k}
    let scale = dp.powi(n as i32) / (2.0 * std::f64::consts::PI).powf(n as f64 / 2.0);
    for (idx, v) in values.iter_mut().enumerate() {
        let mut phase = 0.0;
        let mut rest = idx;
        for axis in (0..n).rev() {
            let k = rest % per_axis;
            rest /= per_axis;
            let _ = axis;
            phase += extent * crate::signal::bin_frequency(k, per_axis, dp);
        }
        *v *= Complex64::from_polar(scale, phase);
    }
}

fn decay_constant_once(
    f: &mut impl FnMut(&[f64]) -> Complex64,
    n: usize,
    gamma: f64,
    lambda: f64,
    per_axis: usize,
    extent: f64,
    edge_tolerance: f64,
) -> Result<f64> {
    let dp = 2.0 * extent / per_axis as f64;
    let total = per_axis.pow(n as u32);
    let mut values = Vec::with_capacity(total);
    let mut edge_max = 0.0f64;
    let mut all_max = 0.0f64;
    let mut point = vec![0.0f64; n];
    for idx in 0..total {
        let mut rest = idx;
        let mut at_edge = false;
        for axis in (0..n).rev() {
            let j = rest % per_axis;
            rest /= per_axis;
            point[axis] = -extent + j as f64 * dp;
            if j == 0 || j + 1 == per_axis {
                at_edge = true;
            }
        }
        let v = f(&point);
        let mag = v.norm();
        all_max = all_max.max(mag);
        if at_edge {
            edge_max = edge_max.max(mag);
        }
        values.push(v);
    }
    if all_max > 0.0 && edge_max / all_max > edge_tolerance {
        return Err(Error::Aliasing(format!(
            "momentum samples at the grid edge carry relative mass {:.2e}; widen the extent",
            edge_max / all_max
        )));
    }
    nd_inverse_transform(&mut values, per_axis, n, dp, extent);
    // sup over the x-grid of |F̌(x)| (λ + |x|)^{n+γ}
    let mut c = 0.0f64;
    for (idx, v) in values.iter().enumerate() {
        let mut rest = idx;
        let mut x2 = 0.0;
        for _ in 0..n {
            let k = rest % per_axis;
            rest /= per_axis;
            let xk = crate::signal::bin_frequency(k, per_axis, dp);
            x2 += xk * xk;
        }
        c = c.max(v.norm() * (lambda + x2.sqrt()).powf(n as f64 + gamma));
    }
    Ok(c)
}

/// Fit the decay constant of the inverse transform and probe its stability
/// under two grid doublings (sample count and extent grow together, so both
/// the x-range and the x-resolution refine).
///
/// The hypothesis |D^α F(p)| ≤ const |p|^{γ−|α|} near zero is spot-checked
/// by first finite differences at a handful of small momenta.
pub fn fourier_decay_check(
    mut f: impl FnMut(&[f64]) -> Complex64,
    n: usize,
    gamma: f64,
    lambda: f64,
    grid: &DecayGrid,
) -> Result<DecayConstantFit> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidParameter(format!("dimension must be 1..=3, got {n}")));
    }
    if gamma <= -(n as f64) {
        return Err(Error::InvalidParameter(format!(
            "needs gamma > -n; got gamma = {gamma}, n = {n}"
        )));
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter("lambda must be > 0".into()));
    }
    // derivative spot-check near zero
    let mut hypothesis_ok = true;
    let h = 1e-5;
    for i in 1..=10 {
        let r = 0.01 * i as f64 / lambda.max(1.0);
        let p: Vec<f64> = (0..n).map(|a| if a == 0 { r } else { 0.3 * r }).collect();
        let mut pp = p.clone();
        pp[0] += h;
        let mut pm = p.clone();
        pm[0] -= h;
        let df = (f(&pp) - f(&pm)).norm() / (2.0 * h);
        let fval = f(&p).norm();
        let rn = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        // |dF| should not exceed |p|^{γ-1} wildly where |F| ~ |p|^γ
        if fval > 0.0 && df * rn.powf(1.0 - gamma) > 1e6 * (fval * rn.powf(-gamma)).max(1.0) {
            hypothesis_ok = false;
        }
    }
    let mut constants = [0.0f64; 3];
    for (level, c) in constants.iter_mut().enumerate() {
        let factor = 1usize << level;
        *c = decay_constant_once(
            &mut f,
            n,
            gamma,
            lambda,
            grid.per_axis * factor,
            grid.extent * factor as f64,
            grid.edge_tolerance,
        )?;
    }
    let drift01 = (constants[1] - constants[0]).abs() / constants[0].max(f64::MIN_POSITIVE);
    let drift12 = (constants[2] - constants[1]).abs() / constants[1].max(f64::MIN_POSITIVE);
    let max_drift = drift01.max(drift12);
    let pass = constants.iter().all(|c| c.is_finite()) && max_drift < 0.10 && hypothesis_ok;
    Ok(DecayConstantFit { constants, max_drift, hypothesis_ok, pass })
}

/// Interpolation inequality on a discrete measure space:
/// ‖h^ε f‖_s ≤ ‖f‖_s^{1−ε} ‖hf‖_s^ε for h ≥ 0, s ∈ (0, ∞), ε ∈ [0, 1].
///
/// Returns (lhs, rhs).
pub fn interpolation_check(f: &[f64], h: &[f64], s: f64, eps: f64) -> Result<(f64, f64)> {
    if f.len() != h.len() || f.is_empty() {
        return Err(Error::InvalidParameter("f and h must have equal nonzero length".into()));
    }
    if h.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidParameter(
            "h must be nonnegative for fractional powers".into(),
        ));
    }
    if !(s > 0.0) || !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!(
            "needs s > 0 and eps in [0, 1]; got s = {s}, eps = {eps}"
        )));
    }
    let norm = |g: &dyn Fn(usize) -> f64| -> f64 {
        (0..f.len()).map(|i| g(i).abs().powf(s)).sum::<f64>().powf(1.0 / s)
    };
    let lhs = norm(&|i| h[i].powf(eps) * f[i]);
    let nf = norm(&|i| f[i]);
    let nhf = norm(&|i| h[i] * f[i]);
    Ok((lhs, nf.powf(1.0 - eps) * nhf.powf(eps)))
}

/// Two nonnegative measures on the line with the first dominated by the
/// second: μ₁((−∞, a]) ≤ μ₂((−∞, a]) for all a.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominancePair {
    pub lower: Vec<(f64, f64)>,
    pub upper: Vec<(f64, f64)>,
}

fn cdf(atoms: &[(f64, f64)], a: f64) -> f64 {
    atoms.iter().filter(|(t, _)| *t <= a).map(|(_, w)| w).sum()
}

impl DominancePair {
    /// Validates nonnegative weights and checks dominance at every atom
    /// position and the midpoints between consecutive positions.
    pub fn new(lower: Vec<(f64, f64)>, upper: Vec<(f64, f64)>) -> Result<Self> {
        if lower.iter().chain(&upper).any(|(_, w)| *w < 0.0) {
            return Err(Error::InvalidParameter("measure weights must be nonnegative".into()));
        }
        let mut probes: Vec<f64> =
            lower.iter().chain(&upper).map(|(t, _)| *t).collect();
        probes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mids: Vec<f64> =
            probes.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        probes.extend(mids);
        for &a in &probes {
            if cdf(&lower, a) > cdf(&upper, a) + 1e-12 {
                return Err(Error::DominanceViolated(format!(
                    "mu1((-inf, {a}]) = {} > mu2((-inf, {a}]) = {}",
                    cdf(&lower, a),
                    cdf(&upper, a)
                )));
            }
        }
        Ok(DominancePair { lower, upper })
    }

    /// Shift atoms of the upper measure rightward by nonnegative amounts;
    /// the shifted copy is dominated by the original.
    pub fn by_rightward_shifts(
        upper: Vec<(f64, f64)>,
        shifts: &[f64],
    ) -> Result<Self> {
        if shifts.len() != upper.len() || shifts.iter().any(|&s| s < 0.0) {
            return Err(Error::InvalidParameter(
                "needs one nonnegative shift per atom".into(),
            ));
        }
        let lower: Vec<(f64, f64)> = upper
            .iter()
            .zip(shifts)
            .map(|(&(t, w), &s)| (t + s, w))
            .collect();
        DominancePair::new(lower, upper)
    }
}

/// A right-continuous step function given by breakpoints and plateau
/// values (one more value than breakpoints).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepFunction {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidParameter(
                "a step function needs one more value than breakpoints".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("breakpoints must be strictly increasing".into()));
        }
        Ok(StepFunction { breakpoints, values })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&b| b <= t);
        self.values[idx]
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }
}

/// ∫ f dμ₁ ≤ ∫ f dμ₂ for a dominated pair and nonincreasing nonnegative f.
///
/// Returns (lhs, rhs).
pub fn dominance_integral_check(
    pair: &DominancePair,
    f: &StepFunction,
) -> Result<(f64, f64)> {
    if !f.is_nonincreasing() {
        return Err(Error::InvalidParameter("integrand must be nonincreasing".into()));
    }
    if f.values.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidParameter("integrand must be nonnegative".into()));
    }
    let integrate =
        |atoms: &[(f64, f64)]| atoms.iter().map(|&(t, w)| w * f.eval(t)).sum::<f64>();
    Ok((integrate(&pair.lower), integrate(&pair.upper)))
}

/// Diagnostic for the dyadic step approximation from below: the capped
/// truncations f_N(x) = min(⌊f(x)·2^N⌋·2^{−N}, 2^N) integrate to a
/// nondecreasing sequence converging to ∫ f dμ.
pub fn step_approximation_converges(
    f: &StepFunction,
    atoms: &[(f64, f64)],
    levels: u32,
) -> bool {
    let target: f64 = atoms.iter().map(|&(t, w)| w * f.eval(t)).sum();
    let mut last = f64::NEG_INFINITY;
    let mut current = 0.0;
    for n in 1..=levels {
        let scale = (2.0f64).powi(n as i32);
        current = atoms
            .iter()
            .map(|&(t, w)| w * ((f.eval(t) * scale).floor() / scale).min(scale))
            .sum();
        if current < last - 1e-12 {
            return false;
        }
        last = current;
    }
    (target - current).abs() <= target.abs() * 1e-6 + (2.0f64).powi(-(levels as i32)) * 10.0
}

/// Random dominated pair built from rightward mass shifts.
pub fn random_dominance_pair(rng: &mut impl Rng, atoms: usize) -> DominancePair {
    let upper: Vec<(f64, f64)> = (0..atoms)
        .map(|_| (rng.gen_range(-5.0..5.0), rng.gen_range(0.0..1.0)))
        .collect();
    let shifts: Vec<f64> = (0..atoms).map(|_| rng.gen_range(0.0..3.0)).collect();
    DominancePair::by_rightward_shifts(upper, &shifts).expect("construction is dominated")
}

/// Random nonincreasing nonnegative step function.
pub fn random_nonincreasing_step(rng: &mut impl Rng, pieces: usize) -> StepFunction {
    let mut breakpoints: Vec<f64> = (0..pieces).map(|_| rng.gen_range(-6.0..6.0)).collect();
    breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breakpoints.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut values = Vec::with_capacity(breakpoints.len() + 1);
    let mut level: f64 = rng.gen_range(1.0..5.0);
    values.push(level);
    for _ in 0..breakpoints.len() {
        level -= rng.gen_range(0.0..level.max(0.0) / 2.0 + 1e-6);
        values.push(level.max(0.0));
    }
    StepFunction::new(breakpoints, values).expect("valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::child_rng;

    #[test]
    fn decay_check_closed_form_lorentzian() {
        // F(p) = 1/(λ² + p²) has inverse transform sqrt(π/2) e^{−λ|x|}/λ,
        // so any polynomial weight stays bounded
        let lambda = 1.0;
        let grid = DecayGrid { per_axis: 1 << 12, extent: 60.0, edge_tolerance: 1e-3 };
        let fit = fourier_decay_check(
            |p| Complex64::new(1.0 / (lambda * lambda + p[0] * p[0]), 0.0),
            1,
            1.0,
            lambda,
            &grid,
        )
        .unwrap();
        assert!(fit.constants.iter().all(|c| c.is_finite() && *c > 0.0), "{fit:?}");
        // and the pointwise transform matches the closed form; accuracy is
        // limited by the truncated power-law tail beyond the extent
        let per = 1 << 14;
        let extent = 240.0;
        let dp = 2.0 * extent / per as f64;
        let mut vals: Vec<Complex64> = (0..per)
            .map(|j| {
                let p = -extent + j as f64 * dp;
                Complex64::new(1.0 / (1.0 + p * p), 0.0)
            })
            .collect();
        nd_inverse_transform(&mut vals, per, 1, dp, extent);
        for k in [1usize, 5, 17, 40] {
            let x = crate::signal::bin_frequency(k, per, dp);
            let expect = (std::f64::consts::PI / 2.0).sqrt() * (-x.abs()).exp();
            approx::assert_relative_eq!(vals[k].norm(), expect, max_relative = 1e-3);
        }
    }

    #[test]
    fn decay_check_gamma_half_family_stable() {
        let lambda = 1.0;
        let grid = DecayGrid { per_axis: 1 << 12, extent: 40.0, edge_tolerance: 1e-10 };
        let fit = fourier_decay_check(
            |p| {
                Complex64::new(
                    p[0].abs().sqrt() * (-lambda * lambda * p[0] * p[0]).exp(),
                    0.0,
                )
            },
            1,
            0.5,
            lambda,
            &grid,
        )
        .unwrap();
        assert!(fit.pass, "{fit:?}");
        assert!(fit.constants[0] > 0.0);
    }

    #[test]
    fn decay_check_zero_function() {
        let grid = DecayGrid { per_axis: 1 << 8, extent: 10.0, edge_tolerance: 1e-10 };
        let fit =
            fourier_decay_check(|_| Complex64::new(0.0, 0.0), 1, 0.5, 1.0, &grid).unwrap();
        assert_eq!(fit.constants, [0.0; 3]);
    }

    #[test]
    fn decay_check_scale_invariance_of_gaussian_family() {
        // F_λ(p) = |p|^γ e^{−λ²p²} with the envelope weight (λ + |x|)^{n+γ}
        // has a λ-independent constant by substitution
        let gamma = 0.5;
        let grid = DecayGrid { per_axis: 1 << 12, extent: 40.0, edge_tolerance: 1e-10 };
        let c1 = fourier_decay_check(
            |p| Complex64::new(p[0].abs().powf(gamma) * (-p[0] * p[0]).exp(), 0.0),
            1,
            gamma,
            1.0,
            &grid,
        )
        .unwrap()
        .constants[0];
        let lam = 2.0;
        let grid2 = DecayGrid { per_axis: 1 << 12, extent: 40.0, edge_tolerance: 1e-10 };
        let c2 = fourier_decay_check(
            |p| {
                Complex64::new(
                    p[0].abs().powf(gamma) * (-lam * lam * p[0] * p[0]).exp(),
                    0.0,
                )
            },
            1,
            gamma,
            lam,
            &grid2,
        )
        .unwrap()
        .constants[0];
        approx::assert_relative_eq!(c1, c2, max_relative = 0.02);
    }

    #[test]
    fn decay_check_reports_aliasing() {
        // constant function never decays at the grid edge
        let grid = DecayGrid { per_axis: 1 << 8, extent: 10.0, edge_tolerance: 1e-10 };
        let err = fourier_decay_check(|_| Complex64::new(1.0, 0.0), 1, 0.5, 1.0, &grid);
        assert!(matches!(err, Err(Error::Aliasing(_))));
    }

    #[test]
    fn decay_check_two_dimensional() {
        let grid = DecayGrid { per_axis: 1 << 7, extent: 12.0, edge_tolerance: 1e-10 };
        let fit = fourier_decay_check(
            |p| {
                let r2 = p[0] * p[0] + p[1] * p[1];
                Complex64::new(r2.sqrt().sqrt() * (-r2).exp(), 0.0)
            },
            2,
            0.5,
            1.0,
            &grid,
        )
        .unwrap();
        assert!(fit.constants[0].is_finite() && fit.constants[0] > 0.0);
    }

    #[test]
    fn interpolation_endpoints_are_equalities() {
        let f = [1.0, -2.0, 0.5, 3.0];
        let h = [0.2, 1.7, 0.0, 2.4];
        let (l0, r0) = interpolation_check(&f, &h, 2.0, 0.0).unwrap();
        approx::assert_relative_eq!(l0, r0, max_relative = 1e-12);
        let (l1, r1) = interpolation_check(&f, &h, 2.0, 1.0).unwrap();
        approx::assert_relative_eq!(l1, r1, max_relative = 1e-12);
        // constant h: equality for every eps
        let hc = [1.5; 4];
        let (lc, rc) = interpolation_check(&f, &hc, 0.7, 0.4).unwrap();
        approx::assert_relative_eq!(lc, rc, max_relative = 1e-12);
    }

    #[test]
    fn interpolation_rejects_negative_h() {
        assert!(interpolation_check(&[1.0], &[-0.1], 2.0, 0.5).is_err());
        assert!(interpolation_check(&[1.0], &[1.0], 0.0, 0.5).is_err());
        assert!(interpolation_check(&[1.0], &[1.0], 2.0, 1.5).is_err());
    }

    #[test]
    fn interpolation_random_trials_hold() {
        for trial in 0..200 {
            let mut rng = child_rng(55, trial);
            let n = rng.gen_range(2..30);
            let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let h: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..4.0)).collect();
            let s = rng.gen_range(0.3..4.0);
            let eps = rng.gen_range(0.0..1.0);
            let (lhs, rhs) = interpolation_check(&f, &h, s, eps).unwrap();
            assert!(lhs <= rhs + 1e-12, "trial {trial}: {lhs} > {rhs}");
        }
    }

    #[test]
    fn dominance_two_atom_case() {
        // mu1 = delta_1, mu2 = delta_0: f nonincreasing gives f(1) <= f(0)
        let pair = DominancePair::new(vec![(1.0, 1.0)], vec![(0.0, 1.0)]).unwrap();
        let f = StepFunction::new(vec![0.5], vec![3.0, 1.0]).unwrap();
        let (lhs, rhs) = dominance_integral_check(&pair, &f).unwrap();
        assert!(lhs <= rhs);
        approx::assert_relative_eq!(lhs, 1.0);
        approx::assert_relative_eq!(rhs, 3.0);
    }

    #[test]
    fn equal_measures_give_equality() {
        let atoms = vec![(0.0, 0.5), (1.0, 1.5), (-2.0, 0.25)];
        let pair = DominancePair::new(atoms.clone(), atoms).unwrap();
        let f = StepFunction::new(vec![-1.0, 0.5], vec![2.0, 1.0, 0.5]).unwrap();
        let (lhs, rhs) = dominance_integral_check(&pair, &f).unwrap();
        approx::assert_relative_eq!(lhs, rhs);
    }

    #[test]
    fn constant_integrand_equal_mass_gives_equality() {
        let mut rng = child_rng(56, 0);
        let pair = random_dominance_pair(&mut rng, 12);
        let f = StepFunction::new(vec![], vec![2.5]).unwrap();
        let (lhs, rhs) = dominance_integral_check(&pair, &f).unwrap();
        approx::assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
    }

    #[test]
    fn dominance_violation_is_rejected() {
        // mu1 has mass earlier than mu2
        assert!(matches!(
            DominancePair::new(vec![(0.0, 1.0)], vec![(1.0, 1.0)]),
            Err(Error::DominanceViolated(_))
        ));
        assert!(DominancePair::new(vec![(0.0, -1.0)], vec![(0.0, 1.0)]).is_err());
    }

    #[test]
    fn dominance_random_trials_hold() {
        for trial in 0..200 {
            let mut rng = child_rng(57, trial);
            let n_atoms = rng.gen_range(2..15);
            let pair = random_dominance_pair(&mut rng, n_atoms);
            let pieces = rng.gen_range(1..10);
            let f = random_nonincreasing_step(&mut rng, pieces);
            let (lhs, rhs) = dominance_integral_check(&pair, &f).unwrap();
            assert!(lhs <= rhs + 1e-12, "trial {trial}: {lhs} > {rhs}");
        }
    }

    #[test]
    fn rejects_increasing_integrand() {
        let pair = DominancePair::new(vec![(1.0, 1.0)], vec![(0.0, 1.0)]).unwrap();
        let f = StepFunction::new(vec![0.0], vec![1.0, 2.0]).unwrap();
        assert!(dominance_integral_check(&pair, &f).is_err());
    }

    #[test]
    fn step_approximation_diagnostic() {
        let mut rng = child_rng(58, 0);
        let pair = random_dominance_pair(&mut rng, 10);
        let f = random_nonincreasing_step(&mut rng, 6);
        assert!(step_approximation_converges(&f, &pair.upper, 12));
    }
}
