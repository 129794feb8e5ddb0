//! Explicit forward-Euler damping simulator on a doubly periodic patch, used
//! to verify the analytic stability limits empirically and to localise
//! blow-ups on a variable-coefficient panel.

use crate::grid::{metric_field, CellMetrics, PanelGrid, Staggering};
use crate::stability::OperatorKind;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("invalid bisection bracket: C_lo classified {lo:?}, C_hi classified {hi:?}")]
    InvalidBracket { lo: Classification, hi: Classification },
    #[error("patch must be at least 4x4 cells, got {nx}x{ny}")]
    PatchTooSmall { nx: usize, ny: usize },
}

/// The damped scalar (the paper's dummy scalar standing for D or ζ).
pub type ScalarField = Array2<f64>;

/// Metric coefficients of the patch: frozen uniform values or a per-cell field.
#[derive(Debug, Clone)]
pub enum MetricsSource {
    Uniform(CellMetrics),
    Field(Array2<CellMetrics>),
}

/// One damping configuration on a doubly periodic patch.
#[derive(Debug, Clone)]
pub struct PatchConfig {
    pub nx: usize,
    pub ny: usize,
    pub metrics: MetricsSource,
    pub da_min: f64,
    pub operator: OperatorKind,
    pub q: u32,
    pub c: f64,
    pub n_steps: usize,
}

impl PatchConfig {
    pub fn uniform(
        nx: usize,
        ny: usize,
        m: CellMetrics,
        da_min: f64,
        operator: OperatorKind,
        q: u32,
        c: f64,
        n_steps: usize,
    ) -> Result<Self, SimError> {
        if nx < 4 || ny < 4 {
            return Err(SimError::PatchTooSmall { nx, ny });
        }
        Ok(Self { nx, ny, metrics: MetricsSource::Uniform(m), da_min, operator, q, c, n_steps })
    }

    fn metrics_at(&self, i: usize, j: usize) -> CellMetrics {
        match &self.metrics {
            MetricsSource::Uniform(m) => *m,
            MetricsSource::Field(f) => f[(i, j)],
        }
    }
}

/// Deterministic uniform noise in [−1, 1].
pub fn noise_field(nx: usize, ny: usize, seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Array2::from_shape_fn((nx, ny), |_| rng.gen_range(-1.0..=1.0))
}

/// The 2Δx-in-both-axes checkerboard mode.
pub fn checkerboard(nx: usize, ny: usize) -> ScalarField {
    Array2::from_shape_fn((nx, ny), |(i, j)| if (i + j) % 2 == 0 { 1.0 } else { -1.0 })
}

/// One application of the (pseudo or full) Laplacian with periodic wraparound.
pub fn apply_operator(field: &ScalarField, cfg: &PatchConfig) -> ScalarField {
    let (nx, ny) = (cfg.nx, cfg.ny);
    let mut out = Array2::zeros((nx, ny));
    for i in 0..nx {
        let ip = (i + 1) % nx;
        let im = (i + nx - 1) % nx;
        for j in 0..ny {
            let jp = (j + 1) % ny;
            let jm = (j + ny - 1) % ny;
            let m = cfg.metrics_at(i, j);
            let chi = m.chi();
            let s = field[(i, j)];
            let ddx = field[(ip, j)] - 2.0 * s + field[(im, j)];
            let ddy = field[(i, jp)] - 2.0 * s + field[(i, jm)];
            out[(i, j)] = match cfg.operator {
                OperatorKind::Pseudo => {
                    m.sin_alpha() / m.darea * (chi * ddx + ddy / chi)
                }
                OperatorKind::Full => {
                    // equal average of the cross derivative at the four corners
                    let cross = (field[(ip, jp)] - field[(ip, jm)] - field[(im, jp)]
                        + field[(im, jm)])
                        / 4.0;
                    (chi * ddx + ddy / chi - 2.0 * m.cos_alpha() * cross)
                        / (m.darea * m.sin_alpha())
                }
            };
        }
    }
    out
}

/// One forward-Euler damping step of order 2q:
/// s ← s + (−1)^(q+1)·(C·ΔA_min)^q·L^q s.
pub fn step(field: &ScalarField, cfg: &PatchConfig) -> ScalarField {
    let mut w = apply_operator(field, cfg);
    for _ in 1..cfg.q {
        w = apply_operator(&w, cfg);
    }
    let sign = if cfg.q % 2 == 1 { 1.0 } else { -1.0 };
    let factor = sign * (cfg.c * cfg.da_min).powi(cfg.q as i32);
    let mut out = field.clone();
    out.zip_mut_with(&w, |s, &l| *s += factor * l);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Stable,
    Unstable,
}

/// Outcome of a time integration: stability classification, geometric-mean
/// growth per step, and where |s| peaked at the final step.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub classification: Classification,
    pub growth_per_step: f64,
    pub argmax: (usize, usize),
    pub final_max_abs: f64,
    pub steps_taken: usize,
}

/// Growth factor beyond which a run is classified unstable.
pub const BLOWUP_FACTOR: f64 = 1e6;

fn max_abs(field: &ScalarField) -> (f64, (usize, usize)) {
    let mut best = (0.0_f64, (0, 0));
    for ((i, j), &v) in field.indexed_iter() {
        if v.abs() > best.0 {
            best = (v.abs(), (i, j));
        }
    }
    best
}

/// Integrate `cfg.n_steps` steps, classifying unstable on 1e6-fold growth of
/// max|s| or non-finite values.
pub fn run(cfg: &PatchConfig, initial: &ScalarField) -> RunOutcome {
    let (m0, _) = max_abs(initial);
    let threshold = BLOWUP_FACTOR * m0;
    let mut field = initial.clone();
    let mut taken = 0;
    let mut classification = Classification::Stable;
    for _ in 0..cfg.n_steps {
        field = step(&field, cfg);
        taken += 1;
        let (m, _) = max_abs(&field);
        if !m.is_finite() || m > threshold {
            classification = Classification::Unstable;
            break;
        }
    }
    let (final_max, argmax) = max_abs(&field);
    let growth = if m0 > 0.0 && taken > 0 && final_max.is_finite() {
        (final_max / m0).powf(1.0 / taken as f64)
    } else {
        f64::NAN
    };
    RunOutcome {
        classification,
        growth_per_step: growth,
        argmax,
        final_max_abs: final_max,
        steps_taken: taken,
    }
}

/// Bisect the stability boundary in C. `template.c` is ignored; the bracket
/// must classify stable at `c_lo` and unstable at `c_hi`.
pub fn empirical_threshold(
    template: &PatchConfig,
    bracket: (f64, f64),
    tol: f64,
    initial: &ScalarField,
) -> Result<f64, SimError> {
    let classify = |c: f64| {
        let mut cfg = template.clone();
        cfg.c = c;
        run(&cfg, initial).classification
    };
    let (mut lo, mut hi) = bracket;
    let (cl, ch) = (classify(lo), classify(hi));
    if cl != Classification::Stable || ch != Classification::Unstable {
        return Err(SimError::InvalidBracket { lo: cl, hi: ch });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match classify(mid) {
            Classification::Stable => lo = mid,
            Classification::Unstable => hi = mid,
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Variable-coefficient run over one panel's metric field (periodic wrap of
/// the scalar), for qualitative blow-up localisation only.
pub fn panel_run(
    grid: &PanelGrid,
    stagger: Staggering,
    operator: OperatorKind,
    q: u32,
    c: f64,
    n_steps: usize,
    seed: u64,
) -> RunOutcome {
    let mf = metric_field(grid, stagger).expect("valid grid");
    let (da_min, _) = mf.min_area();
    let panel = mf.panels[0].clone();
    let n = panel.nrows();
    let cfg = PatchConfig {
        nx: n,
        ny: n,
        metrics: MetricsSource::Field(panel),
        da_min,
        operator,
        q,
        c,
        n_steps,
    };
    run(&cfg, &noise_field(n, n, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::{
        amplification, max_stable_coefficient, oscillation_free_coefficient, DampingSpec,
        WaveNumber,
    };
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn metrics(chi: f64, alpha: f64, darea: f64) -> CellMetrics {
        CellMetrics { dx: 1.0, dy: chi, alpha, darea }
    }

    fn uniform_cfg(m: CellMetrics, op: OperatorKind, q: u32, c: f64) -> PatchConfig {
        PatchConfig::uniform(8, 8, m, 1.0, op, q, c, 200).unwrap()
    }

    /// Measured one-step multiplication of a cosine-phase lattice mode.
    fn measured_gamma(cfg: &PatchConfig, mi: usize, mj: usize) -> f64 {
        let k = 2.0 * PI * mi as f64 / cfg.nx as f64;
        let l = 2.0 * PI * mj as f64 / cfg.ny as f64;
        let mode = Array2::from_shape_fn((cfg.nx, cfg.ny), |(i, j)| {
            (k * i as f64 + l * j as f64 + 0.3).cos()
        });
        let after = step(&mode, cfg);
        let num: f64 = after.iter().zip(mode.iter()).map(|(a, b)| a * b).sum();
        let den: f64 = mode.iter().map(|b| b * b).sum();
        num / den
    }

    #[test]
    fn operator_annihilates_constants() {
        let cfg = uniform_cfg(metrics(1.4, 1.0, 2.0), OperatorKind::Full, 1, 0.1);
        let field = Array2::from_elem((8, 8), 3.7);
        let out = apply_operator(&field, &cfg);
        for &v in out.iter() {
            assert_relative_eq!(v, 0.0);
        }
    }

    #[test]
    fn checkerboard_hand_value() {
        // χ=1 pseudo operator on the (π,π) mode: L s = −(8 sinα/ΔA)·s
        let m = metrics(1.0, 1.1, 1.9);
        let cfg = uniform_cfg(m, OperatorKind::Pseudo, 1, 0.1);
        let cb = checkerboard(8, 8);
        let out = apply_operator(&cb, &cfg);
        let expect = -8.0 * m.sin_alpha() / m.darea;
        for (o, c) in out.iter().zip(cb.iter()) {
            assert_relative_eq!(*o, expect * c, max_relative = 1e-13);
        }
    }

    #[test]
    fn per_mode_amplification_matches_theory() {
        let m = metrics(1.37, 1.9, 2.3);
        for op in [OperatorKind::Pseudo, OperatorKind::Full] {
            for q in 1..=4 {
                let c = 0.6 * max_stable_coefficient(0.4, q);
                let cfg = uniform_cfg(m, op, q, c);
                let spec = DampingSpec { q, c, operator: op, c2: None };
                for mi in 0..8 {
                    for mj in 0..8 {
                        let w = WaveNumber {
                            k_dx: 2.0 * PI * mi as f64 / 8.0,
                            l_dy: 2.0 * PI * mj as f64 / 8.0,
                        };
                        let analytic = amplification(&spec, &m, 1.0, w);
                        let measured = measured_gamma(&cfg, mi, mj);
                        assert_relative_eq!(measured, analytic, max_relative = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn step_preserves_mean() {
        let m = metrics(0.8, 1.3, 1.5);
        for op in [OperatorKind::Pseudo, OperatorKind::Full] {
            let cfg = uniform_cfg(m, op, 2, 0.05);
            let f0 = noise_field(8, 8, 7);
            let f1 = step(&f0, &cfg);
            let mean0: f64 = f0.iter().sum::<f64>() / 64.0;
            let mean1: f64 = f1.iter().sum::<f64>() / 64.0;
            assert_relative_eq!(mean0, mean1, max_relative = 1e-12, epsilon = 1e-14);
        }
    }

    #[test]
    fn mode_zero_is_unchanged_and_osc_free_kills_checkerboard() {
        let m = metrics(1.0, FRAC_PI_2, 1.0);
        // Ψ̃ of this metric with ΔA_min = 1 is 1/2, so C₊ = 1/8.
        let c_plus = oscillation_free_coefficient(0.5);
        let cfg = uniform_cfg(m, OperatorKind::Pseudo, 1, c_plus);
        let constant = Array2::from_elem((8, 8), 2.0);
        assert_eq!(step(&constant, &cfg), constant);
        let cb = checkerboard(8, 8);
        let after = step(&cb, &cfg);
        for &v in after.iter() {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn run_classifications() {
        let m = metrics(1.0, FRAC_PI_2, 1.0);
        let limit = max_stable_coefficient(0.5, 1); // = 1/4 for this metric
        let mut cfg = uniform_cfg(m, OperatorKind::Pseudo, 1, 0.0);
        let init = noise_field(8, 8, 3);
        let out = run(&cfg, &init);
        assert_eq!(out.classification, Classification::Stable);
        assert_relative_eq!(out.growth_per_step, 1.0, max_relative = 1e-12);

        cfg.c = 0.99 * limit;
        assert_eq!(run(&cfg, &init).classification, Classification::Stable);

        cfg.c = 1.05 * limit;
        cfg.n_steps = 400;
        let blown = run(&cfg, &checkerboard(8, 8));
        assert_eq!(blown.classification, Classification::Unstable);
        assert!(blown.growth_per_step > 1.0);
    }

    #[test]
    fn bisection_recovers_flat_metric_limit() {
        let m = metrics(1.0, FRAC_PI_2, 1.0);
        let cfg = PatchConfig::uniform(4, 4, m, 1.0, OperatorKind::Pseudo, 1, 0.0, 20_000).unwrap();
        let mut init = noise_field(4, 4, 11);
        init.zip_mut_with(&checkerboard(4, 4), |a, &b| *a = 0.5 * *a + b);
        let t = empirical_threshold(&cfg, (0.2, 0.3), 2.5e-4, &init).unwrap();
        assert!((t - 0.25).abs() / 0.25 < 5e-3, "threshold {t}");
    }

    #[test]
    fn bisection_rejects_bad_bracket() {
        let m = metrics(1.0, FRAC_PI_2, 1.0);
        let cfg = PatchConfig::uniform(4, 4, m, 1.0, OperatorKind::Pseudo, 1, 0.0, 1000).unwrap();
        let init = checkerboard(4, 4);
        assert!(matches!(
            empirical_threshold(&cfg, (0.01, 0.02), 1e-3, &init),
            Err(SimError::InvalidBracket { .. })
        ));
    }

    #[test]
    fn stability_monotone_in_c() {
        let m = metrics(1.3, 1.2, 1.4);
        let init = checkerboard(8, 8);
        let limit = {
            let chi: f64 = 1.3;
            let psi = 1.4 / (m.sin_alpha() * (chi + 1.0 / chi));
            max_stable_coefficient(psi, 2)
        };
        let mut last_stable = true;
        for step_i in 0..12 {
            let c = limit * (0.7 + 0.05 * step_i as f64);
            let cfg = PatchConfig::uniform(8, 8, m, 1.0, OperatorKind::Pseudo, 2, c, 5000).unwrap();
            let stable = run(&cfg, &init).classification == Classification::Stable;
            // once unstable, never stable again at larger C
            assert!(last_stable || !stable, "non-monotone at C = {c}");
            last_stable = stable;
        }
        assert!(!last_stable);
    }

    #[test]
    fn patch_too_small_rejected() {
        let m = metrics(1.0, FRAC_PI_2, 1.0);
        assert!(PatchConfig::uniform(3, 8, m, 1.0, OperatorKind::Pseudo, 1, 0.1, 10).is_err());
    }
}
