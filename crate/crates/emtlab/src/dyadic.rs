//! Smooth frequency cutoff with a plateau, its dyadic band functions, and
//! the telescoping/decay identities satisfied by their filtered time
//! profiles.
//!
//! The cutoff is even, identically 1 on [−1/(2λ), 1/(2λ)], supported in
//! [−1/λ, 1/λ], and infinitely differentiable (exponential transition).
//! The band functions jₙ(ω) = θ(ω)[η(2ⁿω) − η(2ⁿ⁺¹ω)] tile the positive
//! half-line in geometric frequency bands.

use num_complex::Complex64;

use crate::signal::{fractional_filter, FreqSign, Signal, Spectrum};
use crate::{Error, Result};

/// Smooth plateau cutoff at length scale λ.
#[derive(Debug, Clone, Copy)]
pub struct Mollifier {
    pub lambda: f64,
}

fn smooth_step(u: f64) -> f64 {
    // C-infinity step built from exp(-1/u): 0 for u <= 0, 1 for u >= 1.
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / u).exp();
        let b = (-1.0 / (1.0 - u)).exp();
        a / (a + b)
    }
}

impl Mollifier {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("lambda must be > 0, got {lambda}")));
        }
        Ok(Mollifier { lambda })
    }

    /// The cutoff value η(ω) ∈ [0, 1].
    pub fn eta(&self, omega: f64) -> f64 {
        let r = omega.abs() * self.lambda;
        if r <= 0.5 {
            1.0
        } else if r >= 1.0 {
            0.0
        } else {
            smooth_step(2.0 * (1.0 - r))
        }
    }

    /// Dyadic band jₙ(ω) = θ(ω)[η(2ⁿω) − η(2ⁿ⁺¹ω)], supported in
    /// [1/(2ⁿ⁺²λ), 1/(2ⁿλ)].
    pub fn band(&self, omega: f64, n: u32) -> f64 {
        if omega <= 0.0 {
            return 0.0;
        }
        let scale = (2.0f64).powi(n as i32);
        self.eta(scale * omega) - self.eta(2.0 * scale * omega)
    }

    /// Upper edge of the support of the n-th band.
    pub fn band_upper(&self, n: u32) -> f64 {
        1.0 / ((2.0f64).powi(n as i32) * self.lambda)
    }

    /// Lower edge of the support of the n-th band.
    pub fn band_lower(&self, n: u32) -> f64 {
        1.0 / ((2.0f64).powi(n as i32 + 2) * self.lambda)
    }
}

/// Sampling grid for the filtered time profiles.
///
/// The default (2²⁰ points, 32 samples per λ) keeps the measured
/// telescoping ratios within 1e−5 of the exact dyadic values for
/// k ≥ 1 and up to eight levels.
#[derive(Debug, Clone, Copy)]
pub struct ProfileGrid {
    pub log2_len: u32,
    pub samples_per_scale: f64,
}

impl Default for ProfileGrid {
    fn default() -> Self {
        ProfileGrid { log2_len: 20, samples_per_scale: 32.0 }
    }
}

impl ProfileGrid {
    fn layout(&self, lambda: f64) -> (usize, f64, f64) {
        let n = 1usize << self.log2_len;
        let dt = lambda / self.samples_per_scale;
        let t0 = -0.5 * n as f64 * dt;
        (n, dt, t0)
    }

    fn doubled(&self) -> ProfileGrid {
        ProfileGrid { log2_len: self.log2_len + 1, samples_per_scale: self.samples_per_scale }
    }
}

/// Spectrum of the cutoff on the grid, ready for filtering.
pub fn cutoff_spectrum(moll: &Mollifier, grid: &ProfileGrid) -> Spectrum {
    let (n, dt, t0) = grid.layout(moll.lambda);
    Spectrum::from_fn(n, t0, dt, |om| Complex64::new(moll.eta(om), 0.0))
        .expect("grid layout is valid")
}

/// Time profile of the order-k positive-frequency filtered cutoff.
pub fn filtered_cutoff(moll: &Mollifier, k: f64, grid: &ProfileGrid) -> Result<Signal> {
    let spec = cutoff_spectrum(moll, grid);
    Ok(fractional_filter(&spec, k, FreqSign::Positive)?.inverse())
}

/// Time profile of the order-k filtered n-th dyadic band.
pub fn filtered_band(moll: &Mollifier, k: f64, n: u32, grid: &ProfileGrid) -> Result<Signal> {
    let (len, dt, t0) = grid.layout(moll.lambda);
    let spec = Spectrum::from_fn(len, t0, dt, |om| Complex64::new(moll.band(om, n), 0.0))
        .expect("grid layout is valid");
    Ok(fractional_filter(&spec, k, FreqSign::Positive)?.inverse())
}

/// Result of one telescoping measurement.
#[derive(Debug, Clone)]
pub struct TelescopeCheck {
    pub k: f64,
    pub levels: u32,
    /// Measured ‖cutoff^k − Σ bands^k‖₁ / ‖cutoff^k‖₁.
    pub ratio: f64,
    /// Exact dyadic value 2^(−N·k).
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Fraction of the residual L¹ mass in the outer 2% of the grid.
    pub edge_fraction: f64,
    pub cutoff_l1: f64,
}

/// Measure the telescoping identity: the filtered cutoff minus the first N
/// filtered bands has L¹ norm exactly 2^(−N·k) times the cutoff's.
///
/// All profiles are built independently through the spectral filters and
/// subtracted in the time domain, so the measured ratio is a genuine
/// quadrature result, not an algebraic restatement.
pub fn telescoping_check(
    moll: &Mollifier,
    k: f64,
    levels: u32,
    grid: &ProfileGrid,
    tolerance: f64,
) -> Result<TelescopeCheck> {
    if levels == 0 {
        return Err(Error::InvalidParameter("levels must be >= 1".into()));
    }
    let eta_k = filtered_cutoff(moll, k, grid)?;
    let cutoff_l1 = eta_k.l1_norm();
    let mut residual = eta_k;
    for n in 0..levels {
        let jn = filtered_band(moll, k, n, grid)?;
        for (r, j) in residual.samples.iter_mut().zip(&jn.samples) {
            *r -= j;
        }
    }
    let res_l1 = residual.l1_norm();
    let guard = residual.samples.len() / 100;
    let edge_l1: f64 = residual
        .samples
        .iter()
        .take(guard)
        .chain(residual.samples.iter().rev().take(guard))
        .map(|c| c.norm())
        .sum::<f64>()
        * residual.dt;
    let edge_fraction = if res_l1 > 0.0 { edge_l1 / res_l1 } else { 0.0 };
    if edge_fraction > 0.01 {
        return Err(Error::GridTooSmall(format!(
            "residual keeps {:.2}% of its mass at the grid edges; widen the grid",
            100.0 * edge_fraction
        )));
    }
    let ratio = res_l1 / cutoff_l1;
    let expected = (2.0f64).powf(-(levels as f64) * k);
    Ok(TelescopeCheck {
        k,
        levels,
        ratio,
        expected,
        tolerance,
        pass: (ratio - expected).abs() < tolerance,
        edge_fraction,
        cutoff_l1,
    })
}

/// Fit of the envelope constant sup |f(s)| (λ + |s|)^(1+k) with a
/// grid-doubling stability probe.
#[derive(Debug, Clone)]
pub struct DecayFit {
    pub constant: f64,
    pub refined_constant: f64,
    pub drift: f64,
}

/// sup over the grid of |f(s)| (λ + |s|)^(1+k).
pub fn envelope_sup(f: &Signal, lambda: f64, k: f64) -> f64 {
    f.samples
        .iter()
        .enumerate()
        .map(|(j, c)| c.norm() * (lambda + f.time(j).abs()).powf(1.0 + k))
        .fold(0.0, f64::max)
}

/// Fit the decay constant of the filtered cutoff and probe its stability
/// under doubling the grid span.
pub fn decay_fit(moll: &Mollifier, k: f64, grid: &ProfileGrid) -> Result<DecayFit> {
    let base = envelope_sup(&filtered_cutoff(moll, k, grid)?, moll.lambda, k);
    let refined = envelope_sup(&filtered_cutoff(moll, k, &grid.doubled())?, moll.lambda, k);
    let drift = (refined - base).abs() / base.max(f64::MIN_POSITIVE);
    if drift >= 0.10 {
        return Err(Error::UnstableFit(format!(
            "decay constant drifts {:.1}% under grid doubling ({base} -> {refined})",
            100.0 * drift
        )));
    }
    Ok(DecayFit { constant: base, refined_constant: refined, drift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn small_grid() -> ProfileGrid {
        ProfileGrid { log2_len: 16, samples_per_scale: 32.0 }
    }

    #[test]
    fn cutoff_plateau_and_support() {
        let m = Mollifier::new(1.0).unwrap();
        assert_eq!(m.eta(0.0), 1.0);
        assert_eq!(m.eta(0.5), 1.0);
        assert_eq!(m.eta(-0.3), 1.0);
        assert_eq!(m.eta(1.0), 0.0);
        assert_eq!(m.eta(-2.0), 0.0);
        let mid = m.eta(0.75);
        assert!(mid > 0.0 && mid < 1.0);
        for om in [0.55, 0.6, 0.9, 0.99] {
            let v = m.eta(om);
            assert!((0.0..=1.0).contains(&v));
            assert_eq!(v, m.eta(-om));
        }
    }

    #[test]
    fn bands_vanish_on_nonpositive_frequencies() {
        let m = Mollifier::new(0.7).unwrap();
        for n in 0..5 {
            assert_eq!(m.band(0.0, n), 0.0);
            assert_eq!(m.band(-1.3, n), 0.0);
        }
    }

    #[test]
    fn band_support_containment() {
        let m = Mollifier::new(1.0).unwrap();
        for n in 0..6u32 {
            let lo = m.band_lower(n);
            let hi = m.band_upper(n);
            for i in 0..200 {
                let om = 1e-4 + i as f64 * 0.01;
                let v = m.band(om, n);
                if v != 0.0 {
                    assert!(om >= lo - 1e-12 && om <= hi + 1e-12, "n={n} om={om}");
                }
            }
        }
    }

    #[test]
    fn band_sum_telescopes_pointwise() {
        let m = Mollifier::new(1.0).unwrap();
        let levels = 5u32;
        for i in 0..400 {
            let om = -0.5 + i as f64 * 0.005;
            let sum: f64 = (0..levels).map(|n| m.band(om, n)).sum();
            let expect = if om > 0.0 {
                m.eta(om) - m.eta((2.0f64).powi(levels as i32) * om)
            } else {
                0.0
            };
            assert!((sum - expect).abs() < 1e-12, "om={om}");
        }
    }

    #[test]
    fn filtered_cutoff_spectrum_supported_on_positive_half_line() {
        let m = Mollifier::new(1.0).unwrap();
        let f = filtered_cutoff(&m, 1.0, &small_grid()).unwrap();
        let spec = f.transform();
        for i in 0..spec.len() {
            if spec.frequency(i) < 0.0 {
                assert!(spec.values[i].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn telescoping_ratio_small_grid() {
        let m = Mollifier::new(1.0).unwrap();
        let grid = ProfileGrid { log2_len: 18, samples_per_scale: 32.0 };
        // N = 1 is the least demanding level; 2^18 already suffices there.
        let chk = telescoping_check(&m, 1.0, 1, &grid, 1e-4).unwrap();
        assert!(chk.pass, "ratio {} expected {}", chk.ratio, chk.expected);
        assert_relative_eq!(chk.expected, 0.5);
        let chk2 = telescoping_check(&m, 2.0, 3, &grid, 1e-4).unwrap();
        assert!(chk2.pass);
        assert_relative_eq!(chk2.expected, 1.0 / 64.0);
    }

    #[test]
    fn telescoping_reports_grid_too_small() {
        let m = Mollifier::new(1.0).unwrap();
        let tiny = ProfileGrid { log2_len: 12, samples_per_scale: 32.0 };
        // eight levels spread the residual far beyond a 2^12 grid
        let err = telescoping_check(&m, 1.0, 8, &tiny, 1e-4);
        assert!(matches!(err, Err(Error::GridTooSmall(_))));
    }

    #[test]
    fn residual_is_rescaled_cutoff_profile() {
        // compared on the central quarter of the span, where periodization
        // images of the power-law tails are negligible
        let m = Mollifier::new(1.0).unwrap();
        let grid = ProfileGrid { log2_len: 17, samples_per_scale: 32.0 };
        let k = 2.0;
        let levels = 3u32;
        let eta_k = filtered_cutoff(&m, k, &grid).unwrap();
        let mut residual = eta_k.clone();
        for n in 0..levels {
            let jn = filtered_band(&m, k, n, &grid).unwrap();
            for (r, j) in residual.samples.iter_mut().zip(&jn.samples) {
                *r -= j;
            }
        }
        // residual(s) = 2^(-N(k+1)) * cutoff^k(2^-N s) at the shared grid points
        let stride = 1usize << levels;
        let scale = (2.0f64).powf(-(levels as f64) * (k + 1.0));
        let sup = eta_k.samples.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let center = eta_k.samples.len() / 2;
        let quarter = (center / 2) as isize;
        let mut worst = 0.0f64;
        for off in -quarter / stride as isize..quarter / stride as isize {
            let j_res = (center as isize + off * stride as isize) as usize;
            let j_eta = (center as isize + off) as usize;
            let diff = (residual.samples[j_res] - eta_k.samples[j_eta] * scale).norm();
            worst = worst.max(diff / (scale * sup));
        }
        assert!(worst < 1e-6, "worst pointwise mismatch {worst}");
    }

    #[test]
    fn band_profile_rescales_dyadically() {
        let m = Mollifier::new(1.0).unwrap();
        let grid = ProfileGrid { log2_len: 18, samples_per_scale: 32.0 };
        let k = 1.5;
        let j0 = filtered_band(&m, k, 0, &grid).unwrap();
        let j2 = filtered_band(&m, k, 2, &grid).unwrap();
        let stride = 4usize;
        let scale = (2.0f64).powf(-2.0 * (k + 1.0));
        let sup = j0.samples.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let center = j0.samples.len() / 2;
        let quarter = (center / 2) as isize;
        let mut worst = 0.0f64;
        for off in -quarter / stride as isize..quarter / stride as isize {
            let j_hi = (center as isize + off * stride as isize) as usize;
            let j_lo = (center as isize + off) as usize;
            let diff = (j2.samples[j_hi] - j0.samples[j_lo] * scale).norm();
            worst = worst.max(diff / (scale * sup));
        }
        assert!(worst < 1e-8, "worst pointwise mismatch {worst}");
    }

    #[test]
    fn decay_fit_stable_and_scale_invariant() {
        let grid = small_grid();
        let fit1 = decay_fit(&Mollifier::new(1.0).unwrap(), 1.0, &grid).unwrap();
        assert!(fit1.constant.is_finite() && fit1.constant > 0.0);
        assert!(fit1.drift < 0.10);
        // dimensional invariance: rescaling lambda leaves the constant fixed
        let fit2 = decay_fit(&Mollifier::new(2.0).unwrap(), 1.0, &grid).unwrap();
        assert_relative_eq!(fit1.constant, fit2.constant, max_relative = 0.01);
    }

    #[test]
    fn envelope_sup_of_zero_profile_is_zero() {
        let z = Signal::from_fn(1 << 10, -16.0, 1.0 / 32.0, |_| Complex64::new(0.0, 0.0))
            .unwrap();
        assert_eq!(envelope_sup(&z, 1.0, 1.0), 0.0);
    }
}
