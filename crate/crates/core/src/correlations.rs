//! Normalized path-polarization correlation, its intensity-intensity terms
//! and the generalized Hanbury Brown–Twiss functions.
//!
//! Every quantity is available by two routes: explicit operators on the
//! 16-component bench state ("numeric"), and the closed forms in terms of
//! `Δ = θ₁ + φ₁ − θ₂ − φ₂` and the source intensities ("closed"). The two
//! routes agree in functional form but not in overall constants; reports
//! always carry both and their ratio.

use std::f64::consts::PI;

use crate::basis::Source;
use crate::bench::{Bench, PhaseSetting, SourceSpec};
use crate::error::{Error, Result};
use crate::observables::{joint_intensity, local_correlator, real_expectation};

/// Ratios are only formed where `|cos Δ|` exceeds this.
pub const COSINE_GUARD: f64 = 1e-3;

/// `Σ = |A₁|² + |A₂|²`.
pub fn total_intensity(s1: &SourceSpec, s2: &SourceSpec) -> f64 {
    s1.intensity() + s2.intensity()
}

/// `|A₁|²|A₂|²/Σ²`.
fn mixing_weight(s1: &SourceSpec, s2: &SourceSpec) -> f64 {
    s1.intensity() * s2.intensity() / total_intensity(s1, s2).powi(2)
}

/// Phase shifts `(k, l, m, n) ∈ {0,1}⁴` applied as `θ₁+kπ, φ₁+lπ, θ₂+mπ, φ₂+nπ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shift {
    pub k: u8,
    pub l: u8,
    pub m: u8,
    pub n: u8,
}

impl Shift {
    pub const ZERO: Shift = Shift {
        k: 0,
        l: 0,
        m: 0,
        n: 0,
    };

    pub fn new(k: u8, l: u8, m: u8, n: u8) -> Result<Self> {
        if [k, l, m, n].iter().any(|&b| b > 1) {
            return Err(Error::InvalidParameter(format!(
                "shift indices must be 0 or 1, got ({k},{l},{m},{n})"
            )));
        }
        Ok(Self { k, l, m, n })
    }

    /// All sixteen shifts in lexicographic `(k, l, m, n)` order.
    pub fn all() -> impl Iterator<Item = Shift> {
        (0u8..16).map(|bits| Shift {
            k: (bits >> 3) & 1,
            l: (bits >> 2) & 1,
            m: (bits >> 1) & 1,
            n: bits & 1,
        })
    }

    /// `(−1)^{k+l+m+n}`.
    pub fn sign(&self) -> f64 {
        if (self.k + self.l + self.m + self.n) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// The phase setting with every shift applied.
    pub fn apply(&self, ps: &PhaseSetting) -> PhaseSetting {
        PhaseSetting {
            theta1: ps.theta1 + f64::from(self.k) * PI,
            phi1: ps.phi1 + f64::from(self.l) * PI,
            theta2: ps.theta2 + f64::from(self.m) * PI,
            phi2: ps.phi2 + f64::from(self.n) * PI,
        }
    }

    /// Argument of the cosine in the shifted term: `Δ + (k−m)π + (l−n)π`.
    pub fn shifted_delta(&self, ps: &PhaseSetting) -> f64 {
        let dk = f64::from(self.k) - f64::from(self.m);
        let dl = f64::from(self.l) - f64::from(self.n);
        ps.delta() + (dk + dl) * PI
    }
}

/// Literal normalized correlation: the four-σ expectation on the symmetrized
/// source state, divided by `Σ²`.
pub fn correlation_numeric(ps: &PhaseSetting, s1: &SourceSpec, s2: &SourceSpec) -> f64 {
    let psi0 = Bench::standard().symmetrized_source(s1, s2);
    let op = &local_correlator(Source::One, ps.theta1, ps.phi1)
        * &local_correlator(Source::Two, ps.theta2, ps.phi2);
    let value = real_expectation(&psi0.vector, &op).expect("16-dim operator and state");
    value / total_intensity(s1, s2).powi(2)
}

/// `4|A₁|²|A₂|² cos Δ / Σ²`; reduces to `cos Δ` at equal intensities.
pub fn correlation_closed_form(ps: &PhaseSetting, s1: &SourceSpec, s2: &SourceSpec) -> f64 {
    4.0 * mixing_weight(s1, s2) * ps.delta().cos()
}

/// One shifted intensity-intensity bracket by both routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityTerm {
    pub shift: Shift,
    pub sign: f64,
    /// `2|A₁|²|A₂|²/Σ² · [1 − cos(Δ + (k−m)π + (l−n)π)]`.
    pub closed: f64,
    /// `(Ψ⁰| Î_{S₁}(θ₁+kπ, φ₁+lπ) Î_{S₂}(θ₂+mπ, φ₂+nπ) |Ψ⁰) / Σ²`.
    pub numeric: f64,
}

pub fn intensity_term_closed(shift: Shift, ps: &PhaseSetting, s1: &SourceSpec, s2: &SourceSpec) -> f64 {
    2.0 * mixing_weight(s1, s2) * (1.0 - shift.shifted_delta(ps).cos())
}

pub fn intensity_term(shift: Shift, ps: &PhaseSetting, s1: &SourceSpec, s2: &SourceSpec) -> IntensityTerm {
    let psi0 = Bench::standard().symmetrized_source(s1, s2);
    intensity_term_on(&psi0.vector, shift, ps, s1, s2)
}

fn intensity_term_on(
    psi0: &crate::linalg::ComplexVector,
    shift: Shift,
    ps: &PhaseSetting,
    s1: &SourceSpec,
    s2: &SourceSpec,
) -> IntensityTerm {
    let bracket = joint_intensity(psi0, &shift.apply(ps)).expect("16-dim state");
    IntensityTerm {
        shift,
        sign: shift.sign(),
        closed: intensity_term_closed(shift, ps, s1, s2),
        numeric: bracket / total_intensity(s1, s2).powi(2),
    }
}

/// All sixteen shifted brackets in [`Shift::all`] order.
pub fn intensity_terms(ps: &PhaseSetting, s1: &SourceSpec, s2: &SourceSpec) -> Vec<IntensityTerm> {
    let psi0 = Bench::standard().symmetrized_source(s1, s2);
    Shift::all()
        .map(|shift| intensity_term_on(&psi0.vector, shift, ps, s1, s2))
        .collect()
}

/// Single-source (non-interfering) part of g⁽²⁾: `(|A₁|⁴ + |A₂|⁴)/Σ²`.
fn g2_background(s1: &SourceSpec, s2: &SourceSpec) -> f64 {
    (s1.intensity().powi(2) + s2.intensity().powi(2)) / total_intensity(s1, s2).powi(2)
}

/// HBT correlation of non-entangled light for path differences `alpha`, `beta`.
pub fn g2_hbt(alpha: f64, beta: f64, s1: &SourceSpec, s2: &SourceSpec) -> f64 {
    g2_background(s1, s2) + 2.0 * mixing_weight(s1, s2) * (1.0 - (alpha - beta).cos())
}

/// Generalized g⁽²⁾ for the shifted setting: background plus the closed
/// intensity bracket. Equals `1 − 2|A₁|²|A₂|²/Σ² · cos(shifted Δ)`.
pub fn g2_generalized(shift: Shift, ps: &PhaseSetting, s1: &SourceSpec, s2: &SourceSpec) -> f64 {
    g2_background(s1, s2) + intensity_term_closed(shift, ps, s1, s2)
}

fn guarded_ratio(num: f64, den: f64, delta: f64) -> Option<f64> {
    (delta.cos().abs() >= COSINE_GUARD).then(|| num / den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub delta: f64,
    /// State-vector expectation route.
    pub numeric: f64,
    pub closed_form: f64,
    /// `numeric / closed_form`, `None` near cosine zeros.
    pub ratio: Option<f64>,
    pub terms: Vec<IntensityTerm>,
}

pub fn correlate(ps: &PhaseSetting, s1: &SourceSpec, s2: &SourceSpec) -> CorrelationReport {
    let numeric = correlation_numeric(ps, s1, s2);
    let closed_form = correlation_closed_form(ps, s1, s2);
    CorrelationReport {
        delta: ps.delta(),
        numeric,
        closed_form,
        ratio: guarded_ratio(numeric, closed_form, ps.delta()),
        terms: intensity_terms(ps, s1, s2),
    }
}

/// The signed sixteen-term sums next to the closed-form correlation.
#[derive(Debug, Clone, PartialEq)]
pub struct SumIdentityReport {
    pub delta: f64,
    /// `Σ (−1)^{k+l+m+n} g⁽²⁾(shifted)`, evaluated term by term.
    pub signed_g2_sum: f64,
    /// `Σ (−1)^{k+l+m+n} · numeric bracket`; equals [`correlation_numeric`].
    pub signed_bracket_sum: f64,
    /// `Σ (−1)^{k+l+m+n} (Ψᶠ| Î_{S₁}(kπ,lπ) Î_{S₂}(mπ,nπ) |Ψᶠ) / Σ²`.
    pub signed_final_state_sum: f64,
    pub closed_form: f64,
    /// `signed_g2_sum / closed_form`, `None` near cosine zeros.
    pub ratio: Option<f64>,
    pub g2_terms: Vec<(Shift, f64)>,
}

pub fn sum_identity(ps: &PhaseSetting, s1: &SourceSpec, s2: &SourceSpec) -> SumIdentityReport {
    let g2_terms: Vec<(Shift, f64)> = Shift::all()
        .map(|shift| (shift, g2_generalized(shift, ps, s1, s2)))
        .collect();
    let signed_g2_sum = g2_terms.iter().map(|(s, g)| s.sign() * g).sum();

    let signed_bracket_sum = intensity_terms(ps, s1, s2)
        .iter()
        .map(|t| t.sign * t.numeric)
        .sum();

    let fin = Bench::standard().final_state(s1, s2, ps);
    let norm = total_intensity(s1, s2).powi(2);
    let signed_final_state_sum = Shift::all()
        .map(|shift| {
            let fixed = shift.apply(&PhaseSetting::zero());
            shift.sign() * joint_intensity(&fin.vector, &fixed).expect("16-dim state") / norm
        })
        .sum();

    let closed_form = correlation_closed_form(ps, s1, s2);
    SumIdentityReport {
        delta: ps.delta(),
        signed_g2_sum,
        signed_bracket_sum,
        signed_final_state_sum,
        closed_form,
        ratio: guarded_ratio(signed_g2_sum, closed_form, ps.delta()),
        g2_terms,
    }
}
