//! Minkowski four-vectors, finite complex measures as weighted atom lists,
//! and the spacelike decay envelope with its double-integral functional.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point of Minkowski space (or its momentum dual), signature (+,-,-,-).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub const ZERO: FourVector = FourVector([0.0; 4]);

    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector([t, x, y, z])
    }

    pub fn time(&self) -> f64 {
        self.0[0]
    }

    /// Minkowski product x·y = x⁰y⁰ − x⃗·y⃗.
    pub fn minkowski_dot(&self, other: &FourVector) -> f64 {
        self.0[0] * other.0[0]
            - self.0[1] * other.0[1]
            - self.0[2] * other.0[2]
            - self.0[3] * other.0[3]
    }

    pub fn minkowski_sq(&self) -> f64 {
        self.minkowski_dot(self)
    }

    /// Euclidean norm, |x|² = |x⁰|² + |x⃗|².
    pub fn euclid_norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn spatial_norm(&self) -> f64 {
        (self.0[1] * self.0[1] + self.0[2] * self.0[2] + self.0[3] * self.0[3]).sqrt()
    }

    pub fn is_spacelike(&self) -> bool {
        self.minkowski_sq() < 0.0
    }

    /// Active boost by rapidity `xi` along spatial axis 1, 2 or 3.
    pub fn boost(&self, xi: f64, axis: usize) -> Result<FourVector> {
        if !(1..=3).contains(&axis) {
            return Err(Error::InvalidParameter(format!(
                "boost axis must be 1, 2 or 3, got {axis}"
            )));
        }
        let (ch, sh) = (xi.cosh(), xi.sinh());
        let mut out = self.0;
        out[0] = ch * self.0[0] + sh * self.0[axis];
        out[axis] = sh * self.0[0] + ch * self.0[axis];
        Ok(FourVector(out))
    }
}

impl std::ops::Add for FourVector {
    type Output = FourVector;
    fn add(self, rhs: FourVector) -> FourVector {
        FourVector([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
            self.0[3] + rhs.0[3],
        ])
    }
}

impl std::ops::Sub for FourVector {
    type Output = FourVector;
    fn sub(self, rhs: FourVector) -> FourVector {
        FourVector([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
            self.0[3] - rhs.0[3],
        ])
    }
}

impl std::ops::Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector([-self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }
}

impl std::ops::Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, s: f64) -> FourVector {
        FourVector([self.0[0] * s, self.0[1] * s, self.0[2] * s, self.0[3] * s])
    }
}

/// Length scale and decay exponent of the spacelike envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeParams {
    pub lambda: f64,
    pub kappa: f64,
}

impl EnvelopeParams {
    pub fn new(lambda: f64, kappa: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("lambda must be > 0, got {lambda}")));
        }
        if !(kappa > 0.0) {
            return Err(Error::InvalidParameter(format!("kappa must be > 0, got {kappa}")));
        }
        Ok(EnvelopeParams { lambda, kappa })
    }
}

/// Power-law decay envelope in spacelike directions.
///
/// Equals 1 when a·a ≥ 0 (the lightcone boundary included) and
/// λ^κ / (λ + |a⃗| − |a⁰|)^κ otherwise; values lie in (0, 1].
pub fn decay_envelope(a: FourVector, params: &EnvelopeParams) -> f64 {
    if a.minkowski_sq() >= 0.0 {
        1.0
    } else {
        let gap = a.spatial_norm() - a.time().abs();
        (params.lambda / (params.lambda + gap)).powf(params.kappa)
    }
}

/// One weighted atom of a discrete measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub point: FourVector,
    pub weight: Complex64,
}

/// A finite complex Borel measure represented by finitely many atoms.
///
/// Continuous measures enter as quadrature atoms; every functional the
/// harness consumes (total variation, Fourier transform, envelope double
/// integrals) is exact on atoms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiscreteMeasure {
    pub atoms: Vec<Atom>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<Atom>) -> Self {
        DiscreteMeasure { atoms }
    }

    /// Unit point mass at `x`.
    pub fn delta(x: FourVector) -> Self {
        DiscreteMeasure {
            atoms: vec![Atom { point: x, weight: Complex64::new(1.0, 0.0) }],
        }
    }

    /// Total variation |ν| = Σ|wᵢ|.
    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight.norm()).sum()
    }

    /// Fourier transform ν̂(p) = (2π)⁻² Σ wᵢ e^{ip·xᵢ}.
    pub fn fourier(&self, p: FourVector) -> Complex64 {
        let norm = 1.0 / (2.0 * std::f64::consts::PI).powi(2);
        self.atoms
            .iter()
            .map(|a| a.weight * Complex64::from_polar(1.0, p.minkowski_dot(&a.point)))
            .sum::<Complex64>()
            * norm
    }

    /// The conjugate measure ν̄ (weights conjugated, atoms unchanged).
    pub fn conjugate(&self) -> Self {
        DiscreteMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom { point: a.point, weight: a.weight.conj() })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let wire = MeasureWire {
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomWire { x: a.point.0, w: [a.weight.re, a.weight.im] })
                .collect(),
        };
        serde_json::to_string(&wire).expect("measure serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: MeasureWire =
            serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        Ok(DiscreteMeasure {
            atoms: wire
                .atoms
                .into_iter()
                .map(|a| Atom {
                    point: FourVector(a.x),
                    weight: Complex64::new(a.w[0], a.w[1]),
                })
                .collect(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct MeasureWire {
    atoms: Vec<AtomWire>,
}

#[derive(Serialize, Deserialize)]
struct AtomWire {
    x: [f64; 4],
    w: [f64; 2],
}

/// Double integral of the envelope against two total-variation measures,
/// Σᵢⱼ |wᵢ||vⱼ| D(xᵢ − yⱼ).
pub fn envelope_integral(
    nu1: &DiscreteMeasure,
    nu2: &DiscreteMeasure,
    params: &EnvelopeParams,
) -> f64 {
    let mut total = 0.0;
    for a in &nu1.atoms {
        let wa = a.weight.norm();
        if wa == 0.0 {
            continue;
        }
        for b in &nu2.atoms {
            total += wa * b.weight.norm() * decay_envelope(a.point - b.point, params);
        }
    }
    total
}
