//! Spin coherent states, their overlap geometry, sphere quadrature, and the
//! `Q(θ, φ) = |⟨θ, φ|ψ⟩|²` representation.
//!
//! A coherent state on `n` spins is the product state with every spin in
//! `cos(θ/2)|0⟩ + e^{-iφ} sin(θ/2)|1⟩`. In the symmetric manifold this is
//! `Σ_m τ^{m+n/2} (1+|τ|²)^{-n/2} C(n, m+n/2)^{1/2} |n/2, m⟩` with
//! `τ = e^{-iφ} tan(θ/2)`. Because the state only depends on the number of
//! up spins, most quantities here are evaluated per popcount class, which
//! turns `2^n`-sized sums into `n + 1`-sized ones.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::SymmetrizedBasis;
use crate::error::{domain, Result};
use crate::half::Half;
use crate::statevector::{Gate2, StateVector};

/// Above this polar angle `tan(θ/2)` is large enough that the `τ` expansion
/// loses accuracy; the product-rotation construction is used instead.
pub const TAU_THETA_LIMIT: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentParams {
    theta: f64,
    phi: f64,
}

impl CoherentParams {
    /// `theta` must lie in `[0, π]`; `phi` is wrapped into `(-π, π]`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
            return domain(format!("invalid sphere point (θ, φ) = ({theta}, {phi})"));
        }
        Ok(Self { theta, phi: wrap_phi(phi) })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `e^{-iφ} tan(θ/2)`; undefined at the south pole.
    pub fn tau(&self) -> Option<Complex64> {
        if self.theta >= PI {
            return None;
        }
        Some(Complex64::from_polar((self.theta / 2.0).tan(), -self.phi))
    }

    /// The single-spin rotation taking `|0⟩` to
    /// `cos(θ/2)|0⟩ + e^{-iφ} sin(θ/2)|1⟩`.
    pub fn rotation(&self) -> Gate2 {
        let (s, c) = (self.theta / 2.0).sin_cos();
        let e = Complex64::from_polar(1.0, -self.phi);
        [
            [Complex64::new(c, 0.0), -e.conj() * s],
            [e * s, Complex64::new(c, 0.0)],
        ]
    }

    /// Unit vector on the Bloch sphere.
    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

fn wrap_phi(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    if p == -PI {
        p = PI;
    }
    p
}

/// Amplitude of `|θ, φ⟩` on any computational state with `k` up spins,
/// for `k = 0..=n`.
pub fn class_amplitudes(n: usize, p: &CoherentParams) -> Vec<Complex64> {
    let (s, c) = (p.theta / 2.0).sin_cos();
    let up = Complex64::from_polar(s, -p.phi);
    (0..=n)
        .map(|k| up.powu(k as u32) * c.powi((n - k) as i32))
        .collect()
}

/// `|θ, φ⟩` on `n` qubits.
pub fn coherent_state(n: usize, p: &CoherentParams) -> Result<StateVector> {
    match p.tau() {
        Some(tau) if p.theta <= TAU_THETA_LIMIT => {
            let norm = (1.0 + tau.norm_sqr()).powf(n as f64 / 2.0).recip();
            let powers: Vec<Complex64> = (0..=n).map(|k| tau.powu(k as u32) * norm).collect();
            let amps = (0..1usize << n)
                .map(|x| powers[x.count_ones() as usize])
                .collect();
            StateVector::from_amplitudes(amps)
        }
        _ => {
            let mut s = StateVector::basis_state(n, 0)?;
            s.apply_uniform_gate(&p.rotation());
            Ok(s)
        }
    }
}

/// Applies the coherent rotation to the subradiant state `|j, -j, α⟩`,
/// giving a coherent state on the sphere of radius `j`.
pub fn rotate_manifold_state(
    basis: &SymmetrizedBasis,
    j: Half,
    alpha: usize,
    p: &CoherentParams,
) -> Result<StateVector> {
    let mut s = basis.state(j, -j, alpha)?;
    s.apply_uniform_gate(&p.rotation());
    Ok(s)
}

/// Angle between the two Bloch directions.
pub fn great_circle_angle(p1: &CoherentParams, p2: &CoherentParams) -> f64 {
    let cos = p1.theta.cos() * p2.theta.cos()
        + p1.theta.sin() * p2.theta.sin() * (p1.phi - p2.phi).cos();
    cos.clamp(-1.0, 1.0).acos()
}

/// `|⟨θ', φ'|θ, φ⟩|² = cos^{2n}(Φ/2)`, written as `((1 + cos Φ)/2)^n`.
pub fn overlap_sq(n: usize, p1: &CoherentParams, p2: &CoherentParams) -> f64 {
    let cos = (p1.theta.cos() * p2.theta.cos()
        + p1.theta.sin() * p2.theta.sin() * (p1.phi - p2.phi).cos())
    .clamp(-1.0, 1.0);
    (0.5 * (1.0 + cos)).powi(n as i32)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(order);
    for i in 0..order {
        // Tricomi's initial guess, then Newton on P_order.
        let mut x = (PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(order, x);
        if d != 0.0 {
            dp = d;
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.reverse();
    out
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A product rule on the sphere: Gauss-Legendre in `cos θ` times the
/// periodic trapezoid rule in `φ`. Weights sum to `4π`.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    nodes: Vec<(CoherentParams, f64)>,
}

impl SphereQuadrature {
    pub fn product(theta_nodes: usize, phi_nodes: usize) -> Result<Self> {
        if theta_nodes == 0 || phi_nodes == 0 {
            return domain(format!(
                "degenerate quadrature grid {theta_nodes}x{phi_nodes}"
            ));
        }
        let dphi = 2.0 * PI / phi_nodes as f64;
        let mut nodes = Vec::with_capacity(theta_nodes * phi_nodes);
        for (u, w) in gauss_legendre(theta_nodes) {
            let theta = u.clamp(-1.0, 1.0).acos();
            for k in 0..phi_nodes {
                let phi = -PI + dphi * (k as f64 + 0.5);
                nodes.push((CoherentParams::new(theta, phi)?, w * dphi));
            }
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[(CoherentParams, f64)] {
        &self.nodes
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|(_, w)| w).sum()
    }
}

/// How well `(n+1)/(4π) Σ w |θ,φ⟩⟨θ,φ|` reproduces the projector onto the
/// symmetric manifold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Completeness {
    /// Largest entry magnitude of the difference, over all `2^n x 2^n`
    /// matrix elements.
    pub residual: f64,
    /// Trace of the quadrature operator; `n + 1` exactly in the limit.
    pub trace: f64,
}

/// Evaluates the coherent-state resolution of the symmetric projector.
///
/// Both operators are constant on popcount-class blocks (`⟨x|P|y⟩` is
/// `δ_{k(x)k(y)}/C(n,k)`; the dyads are `a_{k(x)} a*_{k(y)}`), so the
/// maximum over the full matrix is the maximum over `(n+1)²` class pairs.
pub fn completeness_residual(n: usize, quad: &SphereQuadrature) -> Result<Completeness> {
    if n == 0 {
        return domain("completeness needs at least one qubit");
    }
    let k = n + 1;
    let mut acc = vec![Complex64::new(0.0, 0.0); k * k];
    for (p, w) in quad.nodes() {
        let a = class_amplitudes(n, p);
        for r in 0..k {
            for c in 0..k {
                acc[r * k + c] += a[r] * a[c].conj() * *w;
            }
        }
    }
    let scale = (n + 1) as f64 / (4.0 * PI);
    let binom = binomials(n);
    let mut residual: f64 = 0.0;
    let mut trace = 0.0;
    for r in 0..k {
        for c in 0..k {
            let v = acc[r * k + c] * scale;
            let target = if r == c { binom[r].recip() } else { 0.0 };
            residual = residual.max((v - target).norm());
        }
        trace += binom[r] * (acc[r * k + r] * scale).re;
    }
    Ok(Completeness { residual, trace })
}

fn binomials(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * (n - k + 1) as f64 / k as f64;
    }
    row
}

/// A uniform `(θ, φ)` mesh with both end points included:
/// `θ ∈ [0, π]`, `φ ∈ [-π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QMesh {
    pub theta_samples: usize,
    pub phi_samples: usize,
}

impl Default for QMesh {
    fn default() -> Self {
        Self { theta_samples: 181, phi_samples: 361 }
    }
}

impl QMesh {
    pub fn thetas(&self) -> Vec<f64> {
        linspace(0.0, PI, self.theta_samples)
    }

    pub fn phis(&self) -> Vec<f64> {
        linspace(-PI, PI, self.phi_samples)
    }
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Sampled `Q(θ, φ)`; `values[i][k]` is at `(thetas[i], phis[k])`.
#[derive(Clone, Debug, PartialEq)]
pub struct QGrid {
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl QGrid {
    /// Number of strict local maxima along the `φ` ring at one `θ` row,
    /// treating the ring as periodic. A flat ring has none.
    pub fn azimuthal_maxima(&self, theta_index: usize) -> usize {
        let mut ring: &[f64] = &self.values[theta_index];
        if self.phis.len() > 1 {
            let span = self.phis[self.phis.len() - 1] - self.phis[0];
            if (span - 2.0 * PI).abs() < 1e-12 {
                ring = &ring[..ring.len() - 1];
            }
        }
        count_ring_maxima(ring, 1e-12)
    }
}

fn count_ring_maxima(ring: &[f64], eps: f64) -> usize {
    let len = ring.len();
    if len < 3 {
        return 0;
    }
    let hi = ring.iter().copied().fold(f64::MIN, f64::max);
    let lo = ring.iter().copied().fold(f64::MAX, f64::min);
    if hi - lo <= eps {
        return 0;
    }
    // Walk from a global minimum so plateaus never straddle the seam.
    let start = ring.iter().position(|&v| v == lo).unwrap_or(0);
    let at = |i: usize| ring[(start + i) % len];
    let mut count = 0;
    let mut rising = false;
    for i in 1..=len {
        let d = at(i) - at(i - 1);
        if d > eps {
            rising = true;
        } else if d < -eps {
            if rising {
                count += 1;
            }
            rising = false;
        }
    }
    count
}

/// `Q(θ, φ) = |⟨θ, φ|ψ⟩|²` sampled on `mesh`.
pub fn q_function(s: &StateVector, mesh: &QMesh) -> QGrid {
    let n = s.n();
    let mut class_sums = vec![Complex64::new(0.0, 0.0); n + 1];
    for (x, a) in s.amplitudes().iter().enumerate() {
        class_sums[x.count_ones() as usize] += a;
    }
    let thetas = mesh.thetas();
    let phis = mesh.phis();
    let values = thetas
        .par_iter()
        .map(|&theta| {
            phis.iter()
                .map(|&phi| {
                    let p = CoherentParams { theta, phi };
                    let amp: Complex64 = class_amplitudes(n, &p)
                        .iter()
                        .zip(&class_sums)
                        .map(|(a, s)| a.conj() * s)
                        .sum();
                    amp.norm_sqr().min(1.0)
                })
                .collect()
        })
        .collect();
    QGrid { thetas, phis, values }
}
