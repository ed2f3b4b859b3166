//! Single-detector readout: the `|a)|a)` branch, the 45° polarizer
//! projection, and a time-domain intensity autocorrelation.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::basis::Path;
use crate::bench::{BenchState, BranchForm, PhaseSetting, SourceSpec, Stage};
use crate::error::{Error, Result};
use crate::linalg::{cis, ONE};

/// The `|a)_{S₁}|a)_{S₂}` branch of a post-BS′ state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AaProjection {
    /// Unnormalized `(VV, VH, HV, HH)` amplitudes as they sit in the state.
    pub branch: [Complex64; 4],
    /// Unit-norm polarization part, global phase fixed so that `VV` is real
    /// and positive: `(1/√2)[|VV) − e^{iΔ}|HH)]`.
    pub polarization: [Complex64; 4],
    /// Coefficients of `[|VV) − e^{iΔ}|HH)]` in the `(++, +−, −+, −−)` basis,
    /// `|±) = (|V) ± |H))/√2`: `½(1−e^{iΔ}), ½(1+e^{iΔ}), ½(1+e^{iΔ}), ½(1−e^{iΔ})`.
    pub expansion: [Complex64; 4],
    /// Phase of `−HH/VV`.
    pub delta: f64,
}

impl AaProjection {
    /// `Σ |expansion|²`; equals 2 for the bracket form.
    pub fn expansion_weight(&self) -> f64 {
        self.expansion.iter().map(|z| z.norm_sqr()).sum()
    }
}

pub fn project_aa(psi_f: &BenchState) -> Result<AaProjection> {
    psi_f.expect_stage(Stage::PostBsPrime)?;
    let branch = BranchForm::of(psi_f).aa;
    let norm = branch.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidParameter("aa branch is empty".into()));
    }
    // Rotate the largest entry onto the positive real axis when VV vanishes.
    let pivot = if branch[0].norm() > 0.0 {
        branch[0]
    } else {
        *branch
            .iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .expect("four entries")
    };
    let phase = pivot.conj() / pivot.norm();
    let polarization = branch.map(|z| z * phase / norm);

    // Bracket form: scale the unit state back to norm² 2.
    let [vv, vh, hv, hh] = polarization.map(|z| z * 2f64.sqrt());
    let h = 0.5;
    let expansion = [
        (vv + vh + hv + hh) * h,
        (vv - vh + hv - hh) * h,
        (vv + vh - hv - hh) * h,
        (vv - vh - hv + hh) * h,
    ];
    let delta = if vv.norm() > 0.0 && hh.norm() > 0.0 {
        (-hh / vv).arg()
    } else {
        0.0
    };
    Ok(AaProjection {
        branch,
        polarization,
        expansion,
        delta,
    })
}

/// `|(++|[|VV) − e^{iΔ}|HH)])|² = ½(1 − cos Δ)`.
pub fn p45_intensity(psi_f: &BenchState) -> Result<f64> {
    Ok(project_aa(psi_f)?.expansion[0].norm_sqr())
}

/// The `++` weight of the unit-norm polarization part, `¼(1 − cos Δ)`.
pub fn p45_unit_weight(psi_f: &BenchState) -> Result<f64> {
    let p = project_aa(psi_f)?.polarization;
    let plus_plus = (p[0] + p[1] + p[2] + p[3]) * 0.5;
    Ok(plus_plus.norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionResult {
    /// Fraction of `‖Ψᶠ‖²` in the `(aa, ab, ba, bb)` path branches.
    pub branch_probabilities: [f64; 4],
    pub p45_joint_intensity: f64,
    pub delta: f64,
}

pub fn detect(psi_f: &BenchState) -> Result<DetectionResult> {
    let aa = project_aa(psi_f)?;
    let form = BranchForm::of(psi_f);
    let total = psi_f.norm_sqr();
    let branch_probabilities = [
        (Path::A, Path::A),
        (Path::A, Path::B),
        (Path::B, Path::A),
        (Path::B, Path::B),
    ]
    .map(|(p1, p2)| form.branch_norm_sqr(p1, p2) / total);
    Ok(DetectionResult {
        branch_probabilities,
        p45_joint_intensity: aa.expansion[0].norm_sqr(),
        delta: aa.delta,
    })
}

/// Uniformly sampled fields of both sources.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub start: f64,
    pub step: f64,
    pub field1: Vec<Complex64>,
    pub field2: Vec<Complex64>,
}

impl TimeSeries {
    pub fn new(start: f64, step: f64, field1: Vec<Complex64>, field2: Vec<Complex64>) -> Result<Self> {
        if field1.len() < 2 || field1.len() != field2.len() {
            return Err(Error::InvalidParameter(format!(
                "time series needs two equal series of at least 2 samples, got {} and {}",
                field1.len(),
                field2.len()
            )));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step must be > 0, got {step}")));
        }
        Ok(Self {
            start,
            step,
            field1,
            field2,
        })
    }

    pub fn len(&self) -> usize {
        self.field1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.field1.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }

    pub fn window(&self) -> f64 {
        self.step * (self.len() - 1) as f64
    }

    /// Time average of `f(E₁, E₂)` by the trapezoid rule.
    pub fn mean<F>(&self, f: F) -> f64
    where
        F: Fn(Complex64, Complex64) -> f64 + Sync,
    {
        let values: Vec<f64> = self
            .field1
            .par_iter()
            .zip(self.field2.par_iter())
            .map(|(&a, &b)| f(a, b))
            .collect();
        let n = values.len();
        let interior = pairwise_sum(&values) - 0.5 * (values[0] + values[n - 1]);
        interior / (n - 1) as f64
    }
}

const CHUNK: usize = 4096;

/// Sum in a fixed tree order independent of the thread count.
fn pairwise_sum(values: &[f64]) -> f64 {
    let mut partial: Vec<f64> = values
        .par_chunks(CHUNK)
        .map(|c| c.iter().sum::<f64>())
        .collect();
    while partial.len() > 1 {
        partial = partial
            .chunks(2)
            .map(|p| p.iter().sum::<f64>())
            .collect();
    }
    partial.first().copied().unwrap_or(0.0)
}

pub const MIN_SAMPLES: usize = 10_000;
pub const MIN_BEATS: f64 = 100.0;
const SAMPLES_PER_PERIOD: f64 = 20.0;

/// Detector amplitude `√(½(1 − e^{iΔ}))` carried by each source field.
pub fn projected_amplitude(delta: f64) -> Complex64 {
    ((ONE - cis(delta)) * 0.5).sqrt()
}

/// `E_k(t) = A_k e^{iω_k t} u` on `[−window/2, window/2]`.
pub fn synthesize(
    s1: &SourceSpec,
    s2: &SourceSpec,
    ps: &PhaseSetting,
    window: f64,
    samples: usize,
) -> Result<TimeSeries> {
    let n = samples.max(2);
    let u = projected_amplitude(ps.delta());
    let start = -0.5 * window;
    let step = window / (n - 1) as f64;
    let field = |s: &SourceSpec| -> Vec<Complex64> {
        (0..n)
            .into_par_iter()
            .map(|i| s.amplitude * cis(s.omega * (start + step * i as f64)) * u)
            .collect()
    };
    TimeSeries::new(start, step, field(s1), field(s2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutocorrelationReport {
    pub window: f64,
    pub samples: usize,
    /// Time averages over the window.
    pub intensity1_sq: f64,
    pub intensity2_sq: f64,
    /// `2⟨I₁I₂⟩`.
    pub cross: f64,
    /// Stationary part of the squared first-order beat, `2⟨I₁I₂⟩`.
    pub beat_mean: f64,
    /// `⟨|E₁ + E₂|⁴⟩`.
    pub total: f64,
    /// `total − (I₁² + I₂² + cross + beat_mean)`: what is left of the
    /// frequency-oscillating terms after averaging.
    pub residual: f64,
    pub relative_residual: f64,
    /// `total − (I₁² + I₂² + cross)`.
    pub three_term_gap: f64,
}

pub fn autocorrelation_demo(
    s1: &SourceSpec,
    s2: &SourceSpec,
    ps: &PhaseSetting,
    window: f64,
    samples: usize,
) -> Result<AutocorrelationReport> {
    let beat = (s1.omega - s2.omega).abs();
    if beat == 0.0 {
        return Err(Error::InvalidParameter(
            "source frequencies must differ for incoherent sources".into(),
        ));
    }
    if !(window.is_finite() && window * beat >= MIN_BEATS) {
        return Err(Error::InvalidParameter(format!(
            "window·|ω₁−ω₂| must be at least {MIN_BEATS}, got {}",
            window * beat
        )));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "at least {MIN_SAMPLES} samples required, got {samples}"
        )));
    }
    // Fastest component of |E₁+E₂|⁴ oscillates at 2|Δω|.
    let needed = (SAMPLES_PER_PERIOD * window * 2.0 * beat / (2.0 * PI)).ceil() as usize + 1;
    let series = synthesize(s1, s2, ps, window, samples.max(needed))?;

    let intensity1_sq = series.mean(|a, _| a.norm_sqr().powi(2));
    let intensity2_sq = series.mean(|_, b| b.norm_sqr().powi(2));
    let cross = 2.0 * series.mean(|a, b| a.norm_sqr() * b.norm_sqr());
    let beat_mean = cross;
    let total = series.mean(|a, b| (a + b).norm_sqr().powi(2));
    let residual = total - (intensity1_sq + intensity2_sq + cross + beat_mean);
    Ok(AutocorrelationReport {
        window: series.window(),
        samples: series.len(),
        intensity1_sq,
        intensity2_sq,
        cross,
        beat_mean,
        total,
        residual,
        relative_residual: if total > 0.0 { residual.abs() / total } else { 0.0 },
        three_term_gap: total - (intensity1_sq + intensity2_sq + cross),
    })
}

/// Window giving `|Δω|·T = π(4n + 1)`, where the first beat term averages to
/// exactly `2/(|Δω|T)` of its amplitude.
pub fn beat_window(s1: &SourceSpec, s2: &SourceSpec, n: u32) -> f64 {
    PI * (4 * n + 1) as f64 / (s1.omega - s2.omega).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{unit_sources, Bench};
    use crate::fit::{fit_affine, grid};
    use crate::linalg::ZERO;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    const TOL: f64 = 1e-12;

    fn final_state(ps: &PhaseSetting) -> BenchState {
        let (s1, s2) = unit_sources();
        Bench::standard().final_state(&s1, &s2, ps)
    }

    #[test]
    fn p45_examples() {
        assert!(p45_intensity(&final_state(&PhaseSetting::zero())).unwrap().abs() < TOL);
        assert!((p45_intensity(&final_state(&PhaseSetting::with_delta(PI))).unwrap() - 1.0).abs() < TOL);
        assert!((p45_intensity(&final_state(&PhaseSetting::with_delta(FRAC_PI_2))).unwrap() - 0.5).abs() < TOL);
    }

    #[test]
    fn wrong_stage_rejected() {
        let (s1, s2) = unit_sources();
        let pre = Bench::standard().evolve_prestate(&s1, &s2, &PhaseSetting::zero());
        assert!(matches!(project_aa(&pre), Err(Error::WrongStage { .. })));
    }

    #[test]
    fn aa_projection_form() {
        let ps = PhaseSetting::new(0.3, -0.2, 1.4, 0.6).unwrap();
        let e = cis(ps.delta());
        let aa = project_aa(&final_state(&ps)).unwrap();
        let want = [ONE, ZERO, ZERO, -e].map(|z| z * FRAC_1_SQRT_2);
        for (g, w) in aa.polarization.iter().zip(want) {
            assert!((g - w).norm() < TOL);
        }
        let coeff = [(ONE - e) * 0.5, (ONE + e) * 0.5, (ONE + e) * 0.5, (ONE - e) * 0.5];
        for (g, w) in aa.expansion.iter().zip(coeff) {
            assert!((g - w).norm() < TOL);
        }
        assert!((aa.expansion_weight() - 2.0).abs() < TOL);
        assert!((cis(aa.delta) - e).norm() < TOL);
        let zero = project_aa(&final_state(&PhaseSetting::zero())).unwrap();
        assert!(zero.expansion[0].norm() < TOL && zero.expansion[3].norm() < TOL);
    }

    #[test]
    fn aa_branch_is_a_quarter() {
        let ps = PhaseSetting::with_delta(0.9);
        let d = detect(&final_state(&ps)).unwrap();
        for p in d.branch_probabilities {
            assert!((p - 0.25).abs() < TOL);
        }
        let unit = p45_unit_weight(&final_state(&ps)).unwrap();
        assert!((unit - 0.25 * (1.0 - 0.9f64.cos())).abs() < TOL);
    }

    #[test]
    fn antiperiodic_about_half() {
        for d in grid(0.0, 2.0 * PI, 9) {
            let a = p45_intensity(&final_state(&PhaseSetting::with_delta(d))).unwrap();
            let b = p45_intensity(&final_state(&PhaseSetting::with_delta(d + PI))).unwrap();
            let c = p45_intensity(&final_state(&PhaseSetting::with_delta(-d))).unwrap();
            assert!((a + b - 1.0).abs() < TOL);
            assert!((a - c).abs() < TOL);
        }
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let v: Vec<f64> = (0..10_001).map(|i| (i as f64).sin()).collect();
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - naive).abs() < 1e-9);
    }

    #[test]
    fn rejects_degenerate_input() {
        let s = SourceSpec::unit(1.0);
        let ps = PhaseSetting::with_delta(1.0);
        assert!(autocorrelation_demo(&s, &s, &ps, 1e4, 20_000).is_err());
        let (s1, s2) = unit_sources();
        assert!(autocorrelation_demo(&s1, &s2, &ps, 10.0, 20_000).is_err());
        assert!(autocorrelation_demo(&s1, &s2, &ps, 1e4, 100).is_err());
    }

    #[test]
    fn residual_small_and_halving() {
        let (s1, s2) = unit_sources();
        let ps = PhaseSetting::with_delta(2.0);
        let r: Vec<f64> = [250, 500, 1000]
            .iter()
            .map(|&n| {
                autocorrelation_demo(&s1, &s2, &ps, beat_window(&s1, &s2, n), MIN_SAMPLES)
                    .unwrap()
                    .relative_residual
            })
            .collect();
        assert!(r[0] < 1e-2);
        assert!((r[0] / r[1] - 2.0).abs() < 0.05, "{r:?}");
        assert!((r[1] / r[2] - 2.0).abs() < 0.05, "{r:?}");
    }

    #[test]
    fn cross_term_follows_cosine() {
        let (s1, s2) = unit_sources();
        let window = beat_window(&s1, &s2, 80);
        let deltas = grid(0.0, 2.0 * PI, 16);
        let cross: Vec<f64> = deltas
            .iter()
            .map(|&d| {
                autocorrelation_demo(&s1, &s2, &PhaseSetting::with_delta(d), window, MIN_SAMPLES)
                    .unwrap()
                    .cross
            })
            .collect();
        let cos: Vec<f64> = deltas.iter().map(|d| d.cos()).collect();
        let fit = fit_affine(&cos, &cross);
        assert!(fit.max_residual < 1e-3 * fit.amplitude.abs());
        assert!((fit.amplitude + 1.0).abs() < 1e-9);
    }
}
