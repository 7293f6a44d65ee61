//! Uniformly sampled complex signals, their discrete Fourier data under the
//! e^{+iωt}/2π pairing, fractional frequency filters and the singular
//! convolution kernels they regularize.
//!
//! The forward transform is f̃(ω) = (1/2π) ∫ e^{iωt} f(t) dt, so a pure
//! oscillation e^{iω₀t} with ω₀ > 0 carries its spectral weight at ω = −ω₀
//! and is picked up by the negative-frequency filter.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Which frequency half-line a filter keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreqSign {
    Positive,
    Negative,
}

impl FreqSign {
    fn as_f64(self) -> f64 {
        match self {
            FreqSign::Positive => 1.0,
            FreqSign::Negative => -1.0,
        }
    }
}

/// A complex function of one real variable on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub samples: Vec<Complex64>,
    pub t0: f64,
    pub dt: f64,
}

/// Discrete Fourier data paired with a [`Signal`] grid.
///
/// `values[m]` is f̃(ω_m) at the standard FFT frequencies
/// ω_m = 2π m̃ / (N dt), m̃ = m for m < (N+1)/2 and m − N otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<Complex64>,
    pub t0: f64,
    pub dt: f64,
}

fn check_grid(len: usize, dt: f64) -> Result<()> {
    if len < 2 {
        return Err(Error::InvalidParameter(format!("grid length must be >= 2, got {len}")));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be > 0, got {dt}")));
    }
    Ok(())
}

/// FFT bin frequency ω_m for a grid of `n` samples spaced `dt`.
pub fn bin_frequency(m: usize, n: usize, dt: f64) -> f64 {
    let shifted = if m < (n + 1) / 2 { m as f64 } else { m as f64 - n as f64 };
    TWO_PI * shifted / (n as f64 * dt)
}

fn run_fft(values: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan = if inverse {
        planner.plan_fft_inverse(values.len())
    } else {
        planner.plan_fft_forward(values.len())
    };
    plan.process(values);
}

impl Signal {
    pub fn new(samples: Vec<Complex64>, t0: f64, dt: f64) -> Result<Self> {
        check_grid(samples.len(), dt)?;
        Ok(Signal { samples, t0, dt })
    }

    /// Sample `f` on `n` points starting at `t0`.
    pub fn from_fn(n: usize, t0: f64, dt: f64, mut f: impl FnMut(f64) -> Complex64) -> Result<Self> {
        check_grid(n, dt)?;
        let samples = (0..n).map(|j| f(t0 + j as f64 * dt)).collect();
        Ok(Signal { samples, t0, dt })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, j: usize) -> f64 {
        self.t0 + j as f64 * self.dt
    }

    /// Largest sample magnitude within the outer `fraction` of each grid edge.
    pub fn edge_mass(&self, fraction: f64) -> f64 {
        let n = self.samples.len();
        let guard = ((n as f64 * fraction) as usize).max(1);
        let head = self.samples.iter().take(guard);
        let tail = self.samples.iter().rev().take(guard);
        head.chain(tail).map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Forward transform under the e^{+iωt}/2π convention.
    pub fn transform(&self) -> Spectrum {
        let n = self.samples.len();
        let mut buf = self.samples.clone();
        run_fft(&mut buf, true);
        let scale = self.dt / TWO_PI;
        for (m, v) in buf.iter_mut().enumerate() {
            let om = bin_frequency(m, n, self.dt);
            *v *= Complex64::from_polar(scale, om * self.t0);
        }
        Spectrum { values: buf, t0: self.t0, dt: self.dt }
    }

    /// Trapezoidal L¹ norm on the periodic grid.
    pub fn l1_norm(&self) -> f64 {
        self.samples.iter().map(|c| c.norm()).sum::<f64>() * self.dt
    }

    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.dt).sqrt()
    }

    pub fn to_json(&self) -> String {
        let wire = SignalWire {
            t0: self.t0,
            dt: self.dt,
            samples: self.samples.iter().map(|c| [c.re, c.im]).collect(),
        };
        serde_json::to_string(&wire).expect("signal serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: SignalWire =
            serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        Signal::new(
            wire.samples.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
            wire.t0,
            wire.dt,
        )
    }
}

#[derive(Serialize, Deserialize)]
struct SignalWire {
    t0: f64,
    dt: f64,
    samples: Vec<[f64; 2]>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn frequency(&self, m: usize) -> f64 {
        bin_frequency(m, self.values.len(), self.dt)
    }

    /// Build spectral data directly from a frequency-domain function.
    pub fn from_fn(
        n: usize,
        t0: f64,
        dt: f64,
        mut f: impl FnMut(f64) -> Complex64,
    ) -> Result<Self> {
        check_grid(n, dt)?;
        let values = (0..n).map(|m| f(bin_frequency(m, n, dt))).collect();
        Ok(Spectrum { values, t0, dt })
    }

    /// Inverse transform back to the sample grid.
    pub fn inverse(&self) -> Signal {
        let n = self.values.len();
        let d_omega = TWO_PI / (n as f64 * self.dt);
        let mut buf: Vec<Complex64> = self
            .values
            .iter()
            .enumerate()
            .map(|(m, v)| v * Complex64::from_polar(1.0, -bin_frequency(m, n, self.dt) * self.t0))
            .collect();
        run_fft(&mut buf, false);
        for v in buf.iter_mut() {
            *v *= d_omega;
        }
        Signal { samples: buf, t0: self.t0, dt: self.dt }
    }

    /// Spectral mass sitting in the highest-|ω| bins, relative to the total.
    pub fn nyquist_mass(&self) -> f64 {
        let n = self.values.len();
        let total: f64 = self.values.iter().map(|c| c.norm()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let edge = n / 2;
        let lo = edge.saturating_sub(1);
        let hi = (edge + 1).min(n - 1);
        self.values[lo..=hi].iter().map(|c| c.norm()).sum::<f64>() / total
    }
}

/// Multiply by e^{∓ikπ/2} θ(±ω) |ω|^k; the ω = 0 bin is always sent to zero.
pub fn fractional_filter(spec: &Spectrum, k: f64, sign: FreqSign) -> Result<Spectrum> {
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!("filter order k must be > 0, got {k}")));
    }
    let n = spec.values.len();
    let s = sign.as_f64();
    let phase = Complex64::from_polar(1.0, -s * k * std::f64::consts::FRAC_PI_2);
    let values = spec
        .values
        .iter()
        .enumerate()
        .map(|(m, v)| {
            let om = bin_frequency(m, n, spec.dt);
            if s * om > 0.0 {
                v * phase * om.abs().powf(k)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok(Spectrum { values, t0: spec.t0, dt: spec.dt })
}

/// Split into positive/negative frequency parts (the k → 0 projection);
/// plus + minus reconstructs the signal up to its ω = 0 bin.
pub fn half_split(f: &Signal) -> (Signal, Signal) {
    let spec = f.transform();
    let n = spec.values.len();
    let mut plus = spec.clone();
    let mut minus = spec;
    for m in 0..n {
        let om = bin_frequency(m, n, plus.dt);
        if om <= 0.0 {
            plus.values[m] = Complex64::new(0.0, 0.0);
        }
        if om >= 0.0 {
            minus.values[m] = Complex64::new(0.0, 0.0);
        }
    }
    (plus.inverse(), minus.inverse())
}

/// Regularized convolution kernel whose ε → 0 limit realizes the
/// half-line filter of order `k`:
/// T^k_±(s) = ∓i e^{∓ikπ} Γ(k+1) / (2π (s ∓ iε)^{k+1}).
pub fn kernel_value(k: f64, sign: FreqSign, s: f64, eps: f64) -> Complex64 {
    let sg = sign.as_f64();
    let gamma = libm::tgamma(k + 1.0);
    let base = Complex64::new(s, -sg * eps).powf(k + 1.0);
    let front = Complex64::new(0.0, -sg) * Complex64::from_polar(1.0, -sg * k * std::f64::consts::PI);
    front * gamma / (TWO_PI * base)
}

/// Direct quadrature convolution with the regularized kernel.
///
/// Computed by zero-padded FFT, which reproduces the plain Riemann sum
/// Σ_j T(τ − s_j) f(s_j) dt exactly (no circular wrap). Converges to
/// [`fractional_filter`] as ε → 0 with dt/ε → 0.
pub fn convolve_kernel(f: &Signal, k: f64, sign: FreqSign, eps: f64) -> Result<Signal> {
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!("kernel order k must be > 0, got {k}")));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("kernel eps must be > 0, got {eps}")));
    }
    let n = f.samples.len();
    let m = 2 * n;
    let mut fa = vec![Complex64::new(0.0, 0.0); m];
    fa[..n].copy_from_slice(&f.samples);
    // kernel at offsets j*dt for j in 0..n and (j-m)*dt for j in n..m
    let mut ka: Vec<Complex64> = (0..m)
        .map(|j| {
            let off = if j < n { j as f64 } else { j as f64 - m as f64 };
            kernel_value(k, sign, off * f.dt, eps)
        })
        .collect();
    run_fft(&mut fa, false);
    run_fft(&mut ka, false);
    for (a, b) in fa.iter_mut().zip(ka.iter()) {
        *a *= b;
    }
    run_fft(&mut fa, true);
    let scale = f.dt / m as f64; // inverse FFT is unnormalized
    let samples = fa[..n].iter().map(|c| c * scale).collect();
    Ok(Signal { samples, t0: f.t0, dt: f.dt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gaussian(n: usize, half: f64, sigma: f64, om0: f64) -> Signal {
        let dt = 2.0 * half / n as f64;
        Signal::from_fn(n, -half, dt, |t| {
            Complex64::from_polar((-t * t / (2.0 * sigma * sigma)).exp(), om0 * t)
        })
        .unwrap()
    }

    fn rel_l2(a: &Signal, b: &Signal) -> f64 {
        let num: f64 = a
            .samples
            .iter()
            .zip(&b.samples)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum();
        let den: f64 = b.samples.iter().map(|c| c.norm_sqr()).sum();
        (num / den).sqrt()
    }

    #[test]
    fn round_trip_is_identity() {
        let f = gaussian(1 << 10, 20.0, 2.0, 1.5);
        let back = f.transform().inverse();
        assert!(rel_l2(&back, &f) < 1e-12);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(Signal::new(vec![Complex64::new(1.0, 0.0)], 0.0, 0.1).is_err());
        assert!(Signal::from_fn(16, 0.0, 0.0, |_| Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn filter_rejects_nonpositive_order() {
        let f = gaussian(64, 5.0, 1.0, 0.0);
        let spec = f.transform();
        assert!(fractional_filter(&spec, 0.0, FreqSign::Positive).is_err());
        assert!(fractional_filter(&spec, -1.0, FreqSign::Negative).is_err());
    }

    #[test]
    fn filter_zeroes_opposite_half_line() {
        let f = gaussian(1 << 10, 20.0, 2.0, 0.7);
        let plus = fractional_filter(&f.transform(), 1.3, FreqSign::Positive).unwrap();
        for (m, v) in plus.values.iter().enumerate() {
            if plus.frequency(m) <= 0.0 {
                assert_eq!(v.norm(), 0.0);
            }
        }
        let minus = fractional_filter(&f.transform(), 1.3, FreqSign::Negative).unwrap();
        for (m, v) in minus.values.iter().enumerate() {
            if minus.frequency(m) >= 0.0 {
                assert_eq!(v.norm(), 0.0);
            }
        }
    }

    #[test]
    fn filter_magnitude_on_kept_half_line() {
        let f = gaussian(1 << 10, 20.0, 2.0, -1.0);
        let spec = f.transform();
        let k = 0.8;
        let out = fractional_filter(&spec, k, FreqSign::Positive).unwrap();
        for m in 0..spec.len() {
            let om = spec.frequency(m);
            if om > 0.0 {
                assert_relative_eq!(
                    out.values[m].norm(),
                    spec.values[m].norm() * om.abs().powf(k),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn zero_signal_stays_zero() {
        let z = Signal::from_fn(128, -5.0, 10.0 / 128.0, |_| Complex64::new(0.0, 0.0)).unwrap();
        let out = fractional_filter(&z.transform(), 2.3, FreqSign::Positive).unwrap().inverse();
        assert!(out.samples.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn oscillation_lands_in_minus_part() {
        // e^{iω₀t} with ω₀ > 0 transforms to δ(ω + ω₀): minus part only,
        // and its k = 1 minus filter is the derivative iω₀ e^{iω₀t}.
        let n = 1 << 10;
        let half = 32.0;
        let dt = 2.0 * half / n as f64;
        let om0 = bin_frequency(5, n, dt); // exact bin, no leakage
        let f = Signal::from_fn(n, -half, dt, |t| Complex64::from_polar(1.0, om0 * t)).unwrap();
        let plus = fractional_filter(&f.transform(), 1.0, FreqSign::Positive).unwrap().inverse();
        let minus = fractional_filter(&f.transform(), 1.0, FreqSign::Negative).unwrap().inverse();
        let plus_mass: f64 = plus.samples.iter().map(|c| c.norm()).sum();
        assert!(plus_mass < 1e-10 * n as f64);
        let expect = Signal::from_fn(n, -half, dt, |t| {
            Complex64::new(0.0, om0) * Complex64::from_polar(1.0, om0 * t)
        })
        .unwrap();
        assert!(rel_l2(&minus, &expect) < 1e-10);
    }

    #[test]
    fn derivative_reconstruction_from_parts() {
        let n = 1 << 12;
        let f = gaussian(n, 40.0, 3.0, 1.1);
        let spec = f.transform();
        for (order, tol) in [(1usize, 1e-8), (2, 1e-8)] {
            let k = order as f64;
            let plus = fractional_filter(&spec, k, FreqSign::Positive).unwrap();
            let minus = fractional_filter(&spec, k, FreqSign::Negative).unwrap();
            let sum = Spectrum {
                values: plus
                    .values
                    .iter()
                    .zip(&minus.values)
                    .map(|(a, b)| a + b)
                    .collect(),
                t0: spec.t0,
                dt: spec.dt,
            }
            .inverse();
            let expect = Signal::from_fn(n, f.t0, f.dt, |t| {
                let g = (-t * t / 18.0).exp();
                let phase = Complex64::from_polar(1.0, 1.1 * t);
                let d1 = Complex64::new(-t / 9.0, 1.1);
                match order {
                    1 => d1 * g * phase,
                    _ => (d1 * d1 + Complex64::new(-1.0 / 9.0, 0.0)) * g * phase,
                }
            })
            .unwrap();
            assert!(rel_l2(&sum, &expect) < tol, "order {order}");
        }
    }

    #[test]
    fn filter_composition_is_additive_in_order() {
        let f = gaussian(1 << 10, 20.0, 2.0, -0.9);
        let spec = f.transform();
        let once = fractional_filter(
            &fractional_filter(&spec, 0.7, FreqSign::Positive).unwrap(),
            1.6,
            FreqSign::Positive,
        )
        .unwrap();
        let direct = fractional_filter(&spec, 2.3, FreqSign::Positive).unwrap();
        let err: f64 = once
            .values
            .iter()
            .zip(&direct.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn filtering_commutes_with_grid_translation() {
        let f = gaussian(1 << 10, 20.0, 2.0, 0.6);
        let shifted = Signal { samples: f.samples.clone(), t0: f.t0 + 3.25, dt: f.dt };
        let a = fractional_filter(&f.transform(), 1.4, FreqSign::Negative).unwrap().inverse();
        let b = fractional_filter(&shifted.transform(), 1.4, FreqSign::Negative)
            .unwrap()
            .inverse();
        // same samples, shifted grid
        assert!(rel_l2(&Signal { samples: b.samples.clone(), t0: a.t0, dt: a.dt }, &a) < 1e-10);
    }

    #[test]
    fn half_split_reconstructs_and_reflects() {
        let n = 1 << 10;
        let f = gaussian(n, 20.0, 2.0, 0.0); // real even signal
        let (plus, minus) = half_split(&f);
        // reconstruction up to the ω = 0 bin
        let mean: Complex64 =
            f.samples.iter().sum::<Complex64>() / Complex64::new(n as f64, 0.0);
        let max_err = f
            .samples
            .iter()
            .zip(plus.samples.iter().zip(&minus.samples))
            .map(|(orig, (p, m))| (orig - mean - (p + m)).norm())
            .fold(0.0, f64::max);
        assert!(max_err < 1e-10);
        // real signal: parts are pointwise conjugates; even signal: reflections
        for j in 0..n {
            let refl = (n - j) % n;
            assert!((minus.samples[j] - plus.samples[j].conj()).norm() < 1e-10);
            assert!((minus.samples[j] - plus.samples[refl]).norm() < 1e-9);
        }
    }

    #[test]
    fn kernel_magnitude_even_in_s() {
        for (k, eps) in [(0.7, 0.05), (1.0, 0.1), (2.4, 0.01)] {
            for s in [0.3, 1.7, 12.0] {
                let a = kernel_value(k, FreqSign::Positive, s, eps).norm();
                let b = kernel_value(k, FreqSign::Positive, -s, eps).norm();
                assert_relative_eq!(a, b, max_relative = 1e-12);
                let c = kernel_value(k, FreqSign::Negative, s, eps).norm();
                assert_relative_eq!(a, c, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn kernel_large_s_falloff_quadratic_for_k1() {
        // |T^1(s)| = Γ(2)/(2π |s ∓ iε|²) ∝ |s|⁻² at large |s|
        let eps = 0.01;
        let v1 = kernel_value(1.0, FreqSign::Positive, 100.0, eps).norm();
        let v2 = kernel_value(1.0, FreqSign::Positive, 200.0, eps).norm();
        let slope = (v2 / v1).ln() / (2.0f64).ln();
        assert!((slope + 2.0).abs() < 1e-3, "slope {slope}");
    }

    #[test]
    fn convolution_converges_to_filter() {
        // spectrally offset bump keeps all mass away from ω = 0 and the
        // Nyquist edge, so the window artifacts vanish and the ε-damping
        // dominates the error.
        let n = 1 << 20;
        let f = gaussian(n, 40.0, 4.0, -2.0);
        let spec = f.transform();
        let target = fractional_filter(&spec, 1.0, FreqSign::Positive).unwrap().inverse();
        let mut last = f64::INFINITY;
        for eps_over_dt in [16.0, 8.0, 4.0] {
            let conv =
                convolve_kernel(&f, 1.0, FreqSign::Positive, eps_over_dt * f.dt).unwrap();
            let err = rel_l2(&conv, &target);
            assert!(err < last, "errors must decrease as eps shrinks");
            last = err;
        }
        assert!(last < 1e-3, "final error {last}");
    }

    #[test]
    fn convolution_matches_filter_higher_order() {
        let n = 1 << 20;
        let f = gaussian(n, 40.0, 4.0, -2.0);
        let target = fractional_filter(&f.transform(), 2.0, FreqSign::Positive)
            .unwrap()
            .inverse();
        let conv = convolve_kernel(&f, 2.0, FreqSign::Positive, 6.0 * f.dt).unwrap();
        assert!(rel_l2(&conv, &target) < 1e-3);
    }

    #[test]
    fn signal_json_round_trip() {
        let f = gaussian(8, 1.0, 0.5, 0.3);
        let back = Signal::from_json(&f.to_json()).unwrap();
        assert_eq!(f, back);
    }
}
