//! Grid stability functions, von Neumann amplification factors, and the
//! closed-form stability limits for order-2q divergence/vorticity damping.

use crate::grid::{CellMetrics, MetricField};
use ndarray::Array2;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StabilityError {
    #[error("no stable hyperviscosity exists: C2 = {c2} exceeds psi_min/2 = {limit}")]
    NoStableCoefficient { c2: f64, limit: f64 },
}

/// Laplacian discretisation: the divergence-of-gradient `Pseudo` operator
/// without curvilinear cross terms, or the `Full` curvilinear Laplacian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    Pseudo,
    Full,
}

impl OperatorKind {
    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::Pseudo => "pseudo",
            OperatorKind::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pseudo" => Some(OperatorKind::Pseudo),
            "full" => Some(OperatorKind::Full),
            _ => None,
        }
    }
}

/// Order and nondimensional coefficient(s) of one damping configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingSpec {
    /// Damping order is 2q (q = 1 is a plain Laplacian).
    pub q: u32,
    /// Nondimensional coefficient C of the order-2q term.
    pub c: f64,
    pub operator: OperatorKind,
    /// Optional Laplacian coefficient C2 for mixed-order damping.
    pub c2: Option<f64>,
}

/// Normalised wavenumbers (kΔx, lΔy) ∈ [0, π]²; (π, π) is the 2Δx wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveNumber {
    pub k_dx: f64,
    pub l_dy: f64,
}

impl WaveNumber {
    pub const TWO_DX: WaveNumber = WaveNumber {
        k_dx: std::f64::consts::PI,
        l_dy: std::f64::consts::PI,
    };
}

/// Grid stability function at one point: Ψ̃ = ΔA/(sin α·ΔA_min·(χ+χ⁻¹)) for
/// the pseudo-Laplacian, Ψ = ΔA·sin α/(ΔA_min·(χ+χ⁻¹)) = sin²α·Ψ̃ for the
/// full Laplacian.
pub fn grid_stability_function(m: &CellMetrics, da_min: f64, op: OperatorKind) -> f64 {
    let chi = m.chi();
    let denom = da_min * (chi + 1.0 / chi);
    match op {
        OperatorKind::Pseudo => m.darea / (m.sin_alpha() * denom),
        OperatorKind::Full => m.darea * m.sin_alpha() / denom,
    }
}

/// Ψ̃ or Ψ sampled over every panel, with its minimum and argmin.
#[derive(Debug, Clone)]
pub struct StabilityField {
    pub operator: OperatorKind,
    pub da_min: f64,
    pub panels: Vec<Array2<f64>>,
    pub min: f64,
    pub argmin: (usize, usize, usize),
}

/// Evaluate the grid stability function over a metric field. ΔA_min is the
/// minimum cell area of the same staggering's field.
pub fn stability_field(mf: &MetricField, op: OperatorKind) -> StabilityField {
    let (da_min, _) = mf.min_area();
    let mut panels = Vec::with_capacity(mf.panels.len());
    let mut min = f64::INFINITY;
    let mut argmin = (0, 0, 0);
    for (p, arr) in mf.panels.iter().enumerate() {
        let mut out = Array2::zeros(arr.raw_dim());
        for ((i, j), m) in arr.indexed_iter() {
            let v = grid_stability_function(m, da_min, op);
            out[(i, j)] = v;
            if v < min {
                min = v;
                argmin = (p, i, j);
            }
        }
        panels.push(out);
    }
    StabilityField { operator: op, da_min, panels, min, argmin }
}

/// Global minimum of the stability field with its (deterministic) location.
pub fn psi_min(field: &StabilityField) -> (f64, (usize, usize, usize)) {
    (field.min, field.argmin)
}

/// One-step amplification factor Γ of the mode `w` at the given cell metrics.
///
/// Pseudo: Γ̃ = 1 − [4CΔA_min·sinα/ΔA·(χ sin²(kΔx/2) + χ⁻¹ sin²(lΔy/2))]^q.
/// Full: the bracket gains −2cosα·sin(kΔx/2)cos(kΔx/2)sin(lΔy/2)cos(lΔy/2)
/// and the prefactor divides by sin α instead of multiplying.
pub fn amplification(spec: &DampingSpec, m: &CellMetrics, da_min: f64, w: WaveNumber) -> f64 {
    let chi = m.chi();
    let sk = (0.5 * w.k_dx).sin();
    let ck = (0.5 * w.k_dx).cos();
    let sl = (0.5 * w.l_dy).sin();
    let cl = (0.5 * w.l_dy).cos();
    let bracket = match spec.operator {
        OperatorKind::Pseudo => {
            let b = chi * sk * sk + sl * sl / chi;
            4.0 * spec.c * da_min * m.sin_alpha() / m.darea * b
        }
        OperatorKind::Full => {
            let b = chi * sk * sk + sl * sl / chi - 2.0 * m.cos_alpha() * sk * ck * sl * cl;
            4.0 * spec.c * da_min / (m.darea * m.sin_alpha()) * b
        }
    };
    1.0 - bracket.powi(spec.q as i32)
}

/// Γ of the 2Δx wave (kΔx = lΔy = π), where the full-operator cross term
/// vanishes identically.
pub fn two_dx_amplification(spec: &DampingSpec, m: &CellMetrics, da_min: f64) -> f64 {
    let chi = m.chi();
    let b = chi + 1.0 / chi;
    let bracket = match spec.operator {
        OperatorKind::Pseudo => 4.0 * spec.c * da_min * m.sin_alpha() / m.darea * b,
        OperatorKind::Full => 4.0 * spec.c * da_min / (m.darea * m.sin_alpha()) * b,
    };
    1.0 - bracket.powi(spec.q as i32)
}

/// Largest stable nondimensional coefficient, C ≤ 2^(1/q)·Ψ_min/4.
pub fn max_stable_coefficient(psi_min: f64, q: u32) -> f64 {
    2f64.powf(1.0 / q as f64) * psi_min / 4.0
}

/// Oscillation-free coefficient C₊ = Ψ_min/4 (independent of q).
pub fn oscillation_free_coefficient(psi_min: f64) -> f64 {
    psi_min / 4.0
}

/// 2Δx amplification of mixed-order damping (Laplacian C₂ superposed with an
/// order-2q term C_2q): Γ̃ = 1 − 4C₂/Ψ̃ − (4C_2q/Ψ̃)^q. Stable iff ≥ −1.
pub fn mixed_order_two_dx(c2: f64, c2q: f64, q: u32, psi_min: f64) -> f64 {
    1.0 - 4.0 * c2 / psi_min - (4.0 * c2q / psi_min).powi(q as i32)
}

/// Stability limit on the order-2q coefficient given a Laplacian coefficient:
/// C_2q ≤ (Ψ/4)·(2 − 4C₂/Ψ)^(1/q). Fails if C₂ alone is already unstable.
pub fn mixed_order_limit(c2: f64, q: u32, psi_min: f64) -> Result<f64, StabilityError> {
    if c2 > psi_min / 2.0 {
        return Err(StabilityError::NoStableCoefficient { c2, limit: psi_min / 2.0 });
    }
    Ok(psi_min / 4.0 * (2.0 - 4.0 * c2 / psi_min).powf(1.0 / q as f64))
}

/// Flow-dependent Laplacian viscosity ν = C*·ΔA_min·√(D² + ζ²).
pub fn flow_dependent_nu(c_star: f64, da_min: f64, div: f64, zeta: f64) -> f64 {
    c_star * da_min * (div * div + zeta * zeta).sqrt()
}

/// Γ along the diagonal slice kΔx = lΔy ∈ [0, π], `n_samples` evenly spaced
/// points including both endpoints.
pub fn diagonal_sweep(
    spec: &DampingSpec,
    m: &CellMetrics,
    da_min: f64,
    n_samples: usize,
) -> Vec<(f64, f64)> {
    assert!(n_samples >= 2);
    (0..n_samples)
        .map(|s| {
            let k = std::f64::consts::PI * s as f64 / (n_samples - 1) as f64;
            (k, amplification(spec, m, da_min, WaveNumber { k_dx: k, l_dy: k }))
        })
        .collect()
}

/// Per-point Γ(π, π) over every panel, with field extremes.
#[derive(Debug, Clone)]
pub struct TwoDxField {
    pub panels: Vec<Array2<f64>>,
    pub min: f64,
    pub max: f64,
    pub argmin: (usize, usize, usize),
    pub argmax: (usize, usize, usize),
}

pub fn two_dx_field(spec: &DampingSpec, mf: &MetricField, da_min: f64) -> TwoDxField {
    let mut panels = Vec::with_capacity(mf.panels.len());
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut argmin = (0, 0, 0);
    let mut argmax = (0, 0, 0);
    for (p, arr) in mf.panels.iter().enumerate() {
        let mut out = Array2::zeros(arr.raw_dim());
        for ((i, j), m) in arr.indexed_iter() {
            let g = two_dx_amplification(spec, m, da_min);
            out[(i, j)] = g;
            if g < min {
                min = g;
                argmin = (p, i, j);
            }
            if g > max {
                max = g;
                argmax = (p, i, j);
            }
        }
        panels.push(out);
    }
    TwoDxField { panels, min, max, argmin, argmax }
}

/// Round down to three decimal places and format, the convention used for the
/// published limit tables.
pub fn round_down_3dp(x: f64) -> String {
    format!("{:.3}", (x * 1000.0).floor() / 1000.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::CellMetrics;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    /// Synthetic metrics with the given aspect ratio, crossing angle and area.
    fn metrics(chi: f64, alpha: f64, darea: f64) -> CellMetrics {
        CellMetrics { dx: 1.0, dy: chi, alpha, darea }
    }

    #[test]
    fn stability_function_plug_ins() {
        let da_min = 1.0;
        let m = metrics(1.0, FRAC_PI_2, 1.0);
        assert_relative_eq!(
            grid_stability_function(&m, da_min, OperatorKind::Pseudo),
            0.5
        );
        // equiangular mid-edge cell: χ=√2, sinα=1, ΔA=ΔA_min
        let me = metrics(2f64.sqrt(), FRAC_PI_2, 1.0);
        assert_relative_eq!(
            grid_stability_function(&me, da_min, OperatorKind::Pseudo),
            2f64.sqrt() / 3.0,
            max_relative = 1e-15
        );
        // equi-edge corner cell: χ=1, α=2π/3, ΔA=ΔA_min
        let corner = metrics(1.0, 2.0 * PI / 3.0, 1.0);
        let pseudo = grid_stability_function(&corner, da_min, OperatorKind::Pseudo);
        let full = grid_stability_function(&corner, da_min, OperatorKind::Full);
        assert_relative_eq!(pseudo, 1.0 / 3f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(full, 3f64.sqrt() / 4.0, max_relative = 1e-14);
        // Ψ = 0.75·Ψ̃ at a panel corner
        assert_relative_eq!(full, 0.75 * pseudo, max_relative = 1e-14);
    }

    #[test]
    fn amplification_basics() {
        let m = metrics(1.3, 1.2, 1.7);
        let spec = DampingSpec { q: 3, c: 0.1, operator: OperatorKind::Full, c2: None };
        let at_zero = amplification(&spec, &m, 1.0, WaveNumber { k_dx: 0.0, l_dy: 0.0 });
        assert_eq!(at_zero, 1.0);
        let two_dx = two_dx_amplification(&spec, &m, 1.0);
        let via_wave = amplification(&spec, &m, 1.0, WaveNumber::TWO_DX);
        assert_relative_eq!(two_dx, via_wave, max_relative = 1e-15);
    }

    #[test]
    fn osc_free_kills_two_dx_wave_at_argmin() {
        // At the argmin cell with C = C₊, Γ(π,π) = 0 by construction.
        let m = metrics(2f64.sqrt(), FRAC_PI_2, 1.0);
        let psi = grid_stability_function(&m, 1.0, OperatorKind::Pseudo);
        for q in 1..=4 {
            let spec = DampingSpec {
                q,
                c: oscillation_free_coefficient(psi),
                operator: OperatorKind::Pseudo,
                c2: None,
            };
            assert_relative_eq!(two_dx_amplification(&spec, &m, 1.0), 0.0);
        }
    }

    #[test]
    fn two_dx_symbolic_plug_in() {
        // ΔA = 2ΔA_min, χ=1, sinα=1, q=1, C = Ψ̃_min/4 → Γ = 1 − Ψ̃_min.
        let m = metrics(1.0, FRAC_PI_2, 2.0);
        for psi_min in [0.3, 0.5, 0.9] {
            let spec = DampingSpec {
                q: 1,
                c: psi_min / 4.0,
                operator: OperatorKind::Pseudo,
                c2: None,
            };
            assert_relative_eq!(
                two_dx_amplification(&spec, &m, 1.0),
                1.0 - psi_min,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn limit_values() {
        assert_relative_eq!(max_stable_coefficient(4.0, 1), 2.0);
        assert_relative_eq!(oscillation_free_coefficient(1.0), 0.25);
        let psi_ee = 1.0 / 3f64.sqrt();
        let got: Vec<String> = (1..=4)
            .map(|q| round_down_3dp(max_stable_coefficient(psi_ee, q)))
            .collect();
        assert_eq!(got, ["0.288", "0.204", "0.181", "0.171"]);
        let psi_ea = 2f64.sqrt() / 3.0;
        let got: Vec<String> = (1..=4)
            .map(|q| round_down_3dp(max_stable_coefficient(psi_ea, q)))
            .collect();
        assert_eq!(got, ["0.235", "0.166", "0.148", "0.140"]);
        assert_eq!(round_down_3dp(oscillation_free_coefficient(psi_ee)), "0.144");
        assert_eq!(round_down_3dp(oscillation_free_coefficient(psi_ea)), "0.117");
    }

    #[test]
    fn limits_monotone() {
        for q in 1..=4u32 {
            assert!(max_stable_coefficient(0.6, q) > max_stable_coefficient(0.5, q));
            assert!(oscillation_free_coefficient(0.5) <= max_stable_coefficient(0.5, q));
            // 2^(1/q)/4 shrinks with order: higher-order damping tolerates less
            if q > 1 {
                assert!(max_stable_coefficient(0.5, q) < max_stable_coefficient(0.5, q - 1));
            }
        }
    }

    #[test]
    fn mixed_order_relations() {
        let psi = 0.52;
        // C₂ = 0 reduces to the plain two-dx form and the plain limit
        for q in 1..=4u32 {
            let spec = DampingSpec { q, c: 0.13, operator: OperatorKind::Pseudo, c2: None };
            let m = metrics(1.0, FRAC_PI_2, 1.0);
            let plain = two_dx_amplification(&spec, &m, 1.0 / (psi * 2.0));
            // ΔA chosen so that Ψ̃ of m equals psi
            assert_relative_eq!(
                mixed_order_two_dx(0.0, 0.13, q, psi),
                plain,
                max_relative = 1e-12
            );
            assert_relative_eq!(
                mixed_order_limit(0.0, q, psi).unwrap(),
                max_stable_coefficient(psi, q),
                max_relative = 1e-15
            );
        }
        // marginal pure-Laplacian case
        assert_relative_eq!(mixed_order_two_dx(psi / 2.0, 0.0, 2, psi), -1.0);
        // decreasing in C₂
        let a = mixed_order_limit(0.02, 3, psi).unwrap();
        let b = mixed_order_limit(0.05, 3, psi).unwrap();
        assert!(b < a);
        // no stable hyperviscosity beyond Ψ/2
        assert!(mixed_order_limit(psi, 3, psi).is_err());
    }

    #[test]
    fn default_coefficient_instability_signs() {
        // C_2q = 0.15: stable for all q on equi-edge, unstable for q ∈ {3,4}
        // on equiangular (Fig. 4 claim).
        let psi_ee = 1.0 / 3f64.sqrt();
        let psi_ea = 2f64.sqrt() / 3.0;
        for q in 1..=4 {
            assert!(mixed_order_two_dx(0.0, 0.15, q, psi_ee) >= -1.0);
            let g = mixed_order_two_dx(0.0, 0.15, q, psi_ea);
            if q >= 3 {
                assert!(g < -1.0);
            } else {
                assert!(g >= -1.0);
            }
        }
    }

    #[test]
    fn flow_dependent_nu_values() {
        assert_eq!(flow_dependent_nu(0.5, 1.0, 0.0, 0.0), 0.0);
        assert_relative_eq!(flow_dependent_nu(0.5, 1.0, 3.0, 4.0), 2.5);
        let scale = 2.5e-4;
        assert_relative_eq!(
            flow_dependent_nu(0.5, 1.0, scale, 0.0),
            1.25e-4,
            max_relative = 1e-12
        );
    }

    #[test]
    fn diagonal_sweep_shape() {
        let m = metrics(2f64.sqrt(), FRAC_PI_2, 1.0);
        let psi = grid_stability_function(&m, 1.0, OperatorKind::Pseudo);
        let c_plus = oscillation_free_coefficient(psi);
        let q1 = DampingSpec { q: 1, c: c_plus, operator: OperatorKind::Pseudo, c2: None };
        let q4 = DampingSpec { q: 4, ..q1 };
        let s1 = diagonal_sweep(&q1, &m, 1.0, 33);
        let s4 = diagonal_sweep(&q4, &m, 1.0, 33);
        assert_eq!(s1[0], (0.0, 1.0));
        assert_relative_eq!(s1.last().unwrap().1, 0.0);
        assert_relative_eq!(s4.last().unwrap().1, 0.0);
        // higher order is more scale selective: q=4 curve above q=1 on [0, π)
        for (a, b) in s1.iter().zip(&s4).take(32) {
            assert!(b.1 >= a.1);
        }
    }

    #[test]
    fn q1_half_value_plug_in() {
        // q=1, χ=1, sinα=1, ΔA=ΔA_min, C=1/8, kΔx=lΔy=π/2 → Γ = 1/2
        let m = metrics(1.0, FRAC_PI_2, 1.0);
        let spec = DampingSpec { q: 1, c: 0.125, operator: OperatorKind::Pseudo, c2: None };
        let g = amplification(&spec, &m, 1.0, WaveNumber { k_dx: FRAC_PI_2, l_dy: FRAC_PI_2 });
        assert_relative_eq!(g, 0.5, max_relative = 1e-15);
    }

    #[test]
    fn round_down_formatting() {
        assert_eq!(round_down_3dp(0.288675), "0.288");
        assert_eq!(round_down_3dp(0.1666697), "0.166");
        assert_eq!(round_down_3dp(0.117851), "0.117");
    }
}
