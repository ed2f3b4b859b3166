//! Source states and their evolution through the two-source bench.
//!
//! The sources are filtered to vertical polarization and split at BS; a
//! rotator in path `b` swaps V and H. The two beams then overlap on both
//! paths, so the joint state is symmetrized. After that the prisms separate
//! the frequencies, PR′/PR″ and PS′/PS″ imprint polarization and path phases
//! on the S₁ and S₂ factors, the inverse prisms recombine, and BS′ mixes the
//! paths again.
//!
//! Time factors `e^{iω t}` are kept as a frequency tag (`omega_sum`) rather
//! than numeric amplitudes; every quantity derived from these states is
//! stationary. States are not renormalized: `norm² = |A₁|²|A₂|²`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::basis::{self, Path, Pol, Source, DIM, SOURCE_DIM};
use crate::elements::{beam_splitter, ElementKind, ElementSpec, PathLabel, PhaseSign};
use crate::error::{Error, Result};
use crate::linalg::{cis, embed, re, ComplexMatrix, ComplexVector, ZERO};

/// Default source frequencies, inverse time units. Only `ω₁ ≠ ω₂` matters.
pub const DEFAULT_OMEGA_1: f64 = 1.0;
pub const DEFAULT_OMEGA_2: f64 = 1.3;

/// Filtered field amplitude and angular frequency of one thermal source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceSpec {
    pub amplitude: Complex64,
    pub omega: f64,
}

impl SourceSpec {
    pub fn new(amplitude: Complex64, omega: f64) -> Result<Self> {
        if !(amplitude.norm() > 0.0 && amplitude.norm().is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "source amplitude must be nonzero and finite, got {amplitude}"
            )));
        }
        if !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "source frequency must be finite, got {omega}"
            )));
        }
        Ok(Self { amplitude, omega })
    }

    /// Real amplitude `√intensity`.
    pub fn from_intensity(intensity: f64, omega: f64) -> Result<Self> {
        if !(intensity > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "source intensity must be > 0, got {intensity}"
            )));
        }
        Self::new(re(intensity.sqrt()), omega)
    }

    pub fn unit(omega: f64) -> Self {
        Self {
            amplitude: re(1.0),
            omega,
        }
    }

    /// `|A|²`.
    pub fn intensity(&self) -> f64 {
        self.amplitude.norm_sqr()
    }
}

/// Equal unit-amplitude sources at the default frequencies.
pub fn unit_sources() -> (SourceSpec, SourceSpec) {
    (
        SourceSpec::unit(DEFAULT_OMEGA_1),
        SourceSpec::unit(DEFAULT_OMEGA_2),
    )
}

/// Polarization phases θ₁, θ₂ (PR′, PR″) and path phases φ₁, φ₂ (PS′, PS″).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseSetting {
    pub theta1: f64,
    pub theta2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl PhaseSetting {
    pub fn new(theta1: f64, theta2: f64, phi1: f64, phi2: f64) -> Result<Self> {
        let ps = Self {
            theta1,
            theta2,
            phi1,
            phi2,
        };
        if ps.as_array().iter().all(|x| x.is_finite()) {
            Ok(ps)
        } else {
            Err(Error::InvalidParameter(format!(
                "phases must be finite, got {ps:?}"
            )))
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// Setting with total phase difference `delta`, carried entirely by θ₁.
    pub fn with_delta(delta: f64) -> Self {
        Self {
            theta1: delta,
            ..Self::default()
        }
    }

    /// `Δ = θ₁ + φ₁ − θ₂ − φ₂`.
    pub fn delta(&self) -> f64 {
        self.theta1 + self.phi1 - self.theta2 - self.phi2
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.theta1, self.theta2, self.phi1, self.phi2]
    }

    pub fn polarization_phase(&self, source: Source) -> f64 {
        match source {
            Source::One => self.theta1,
            Source::Two => self.theta2,
        }
    }

    pub fn path_phase(&self, source: Source) -> f64 {
        match source {
            Source::One => self.phi1,
            Source::Two => self.phi2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    Source,
    PostBs,
    PostPr,
    PostPhases,
    PreBsPrime,
    PostBsPrime,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Source => "source",
            Stage::PostBs => "post-BS",
            Stage::PostPr => "post-PR",
            Stage::PostPhases => "post-phases",
            Stage::PreBsPrime => "pre-BS'",
            Stage::PostBsPrime => "post-BS'",
        })
    }
}

/// A 16-component bench state at a named point of the optical chain.
///
/// `Source` and `PostBs` hold the plain product `|ψ)_{S₁}⊗|φ)_{S₂}`; from
/// `PostPr` on the state is symmetrized.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchState {
    pub stage: Stage,
    pub vector: ComplexVector,
    /// `ω₁ + ω₂`, the frequency of the dropped global factor `e^{i(ω₁+ω₂)t}`.
    pub omega_sum: f64,
    /// Prism frequency tags `(ω₁, ω₂)` while the beams are dispersed.
    pub dispersion: Option<(f64, f64)>,
}

impl BenchState {
    pub fn norm_sqr(&self) -> f64 {
        self.vector.norm_sqr()
    }

    pub fn amplitude(&self, path1: Path, pol1: Pol, path2: Path, pol2: Pol) -> Complex64 {
        self.vector.entries()[basis::index(path1, pol1, path2, pol2)]
    }

    pub fn expect_stage(&self, expected: Stage) -> Result<()> {
        if self.stage == expected {
            Ok(())
        } else {
            Err(Error::WrongStage {
                expected,
                found: self.stage,
            })
        }
    }

    /// Label of a path as seen by `source`'s light at this stage.
    pub fn path_label(&self, source: Source, path: Path) -> PathLabel {
        let label = PathLabel::bare(path);
        match self.dispersion {
            Some((w1, w2)) => label.disperse(match source {
                Source::One => w1,
                Source::Two => w2,
            }),
            None => label,
        }
    }

    fn advance(&self, stage: Stage, op: &ComplexMatrix) -> Self {
        Self {
            stage,
            vector: op * &self.vector,
            omega_sum: self.omega_sum,
            dispersion: self.dispersion,
        }
    }
}

/// Filtered, vertically polarized source kets on each source's path⊗pol
/// space: `|ψ) = A₁|b)|V)` and `|φ) = A₂|a)|V)`.
pub fn build_sources(s1: &SourceSpec, s2: &SourceSpec) -> (ComplexVector, ComplexVector) {
    let mut psi = vec![ZERO; SOURCE_DIM];
    let mut phi = vec![ZERO; SOURCE_DIM];
    psi[basis::source_index(Path::B, Pol::V)] = s1.amplitude;
    phi[basis::source_index(Path::A, Pol::V)] = s2.amplitude;
    (
        ComplexVector::new(psi).expect("nonempty"),
        ComplexVector::new(phi).expect("nonempty"),
    )
}

/// `(1/√2)[ψ⊗φ + φ⊗ψ]` in the canonical 16-dimensional ordering.
pub fn symmetrize(psi: &ComplexVector, phi: &ComplexVector) -> Result<ComplexVector> {
    for v in [psi, phi] {
        if v.dim() != SOURCE_DIM {
            return Err(Error::DimensionMismatch {
                expected: SOURCE_DIM,
                found: v.dim(),
            });
        }
    }
    Ok((&psi.kron(phi) + &phi.kron(psi)).scale(re(FRAC_1_SQRT_2)))
}

/// The bench's optical chain. The beam splitter matrix is a field so that
/// verification can run against a deliberately altered bench.
#[derive(Debug, Clone, PartialEq)]
pub struct Bench {
    splitter: ComplexMatrix,
}

impl Default for Bench {
    fn default() -> Self {
        Self::standard()
    }
}

impl Bench {
    pub fn standard() -> Self {
        Self {
            splitter: beam_splitter(),
        }
    }

    /// A bench whose BS and BS′ use `splitter` instead of the standard matrix.
    pub fn with_beam_splitter(splitter: ComplexMatrix) -> Result<Self> {
        if splitter.rows() != 2 || splitter.cols() != 2 {
            return Err(Error::NotTwoByTwo {
                rows: splitter.rows(),
                cols: splitter.cols(),
            });
        }
        Ok(Self { splitter })
    }

    pub fn splitter(&self) -> &ComplexMatrix {
        &self.splitter
    }

    /// Every stage from the filtered sources to the state entering BS′.
    pub fn trace(&self, s1: &SourceSpec, s2: &SourceSpec, ps: &PhaseSetting) -> Vec<BenchState> {
        let (psi, phi) = build_sources(s1, s2);
        let omega_sum = s1.omega + s2.omega;
        let mut stages = Vec::with_capacity(6);

        stages.push(BenchState {
            stage: Stage::Source,
            vector: psi.kron(&phi),
            omega_sum,
            dispersion: None,
        });

        let split = self.splitter.kron(&ComplexMatrix::identity(2));
        let (psi, phi) = (&split * &psi, &split * &phi);
        stages.push(BenchState {
            stage: Stage::PostBs,
            vector: psi.kron(&phi),
            omega_sum,
            dispersion: None,
        });

        let rotate = ElementSpec::fixed(ElementKind::PolSwap, Source::One).source_operator();
        let (psi, phi) = (&rotate * &psi, &rotate * &phi);
        let post_pr = BenchState {
            stage: Stage::PostPr,
            vector: symmetrize(&psi, &phi).expect("4-dim source states"),
            omega_sum,
            dispersion: None,
        };

        let mut dispersed = post_pr.clone();
        for source in Source::BOTH {
            let omega = if source == Source::One { s1.omega } else { s2.omega };
            let prism = ElementSpec::new(ElementKind::Prism, omega, PhaseSign::Plus, source)
                .expect("finite frequency");
            dispersed = dispersed.advance(Stage::PostPr, &prism.operator());
        }
        dispersed.dispersion = Some((s1.omega, s2.omega));
        stages.push(post_pr);

        let mut phased = dispersed;
        for element in phase_elements(ps) {
            phased = phased.advance(Stage::PostPhases, &element.operator());
        }
        phased.stage = Stage::PostPhases;

        let mut recombined = phased.clone();
        for (source, omega) in [(Source::One, s1.omega), (Source::Two, s2.omega)] {
            let inverse = ElementSpec::new(ElementKind::InversePrism, omega, PhaseSign::Plus, source)
                .expect("finite frequency");
            recombined = recombined.advance(Stage::PreBsPrime, &inverse.operator());
        }
        recombined.dispersion = None;
        stages.push(phased);
        stages.push(recombined);
        stages
    }

    /// `|Ψ⁰)`: the symmetrized state right after BS and PR, no phases yet.
    pub fn symmetrized_source(&self, s1: &SourceSpec, s2: &SourceSpec) -> BenchState {
        self.trace(s1, s2, &PhaseSetting::zero())
            .into_iter()
            .find(|s| s.stage == Stage::PostPr)
            .expect("trace contains post-PR stage")
    }

    /// `|Ψ)`: the state entering BS′.
    pub fn evolve_prestate(&self, s1: &SourceSpec, s2: &SourceSpec, ps: &PhaseSetting) -> BenchState {
        self.trace(s1, s2, ps)
            .pop()
            .expect("trace is nonempty")
    }

    /// `|Ψᶠ) = (U_{BS′} ⊗ I ⊗ U_{BS′} ⊗ I)|Ψ)`.
    pub fn apply_bs_prime(&self, pre: &BenchState) -> Result<BenchState> {
        pre.expect_stage(Stage::PreBsPrime)?;
        let op = &embed(&self.splitter, Source::One.path_slot())?
            * &embed(&self.splitter, Source::Two.path_slot())?;
        Ok(pre.advance(Stage::PostBsPrime, &op))
    }

    /// Convenience: `apply_bs_prime(evolve_prestate(..))`.
    pub fn final_state(&self, s1: &SourceSpec, s2: &SourceSpec, ps: &PhaseSetting) -> BenchState {
        self.apply_bs_prime(&self.evolve_prestate(s1, s2, ps))
            .expect("prestate has the right stage")
    }
}

/// PR′, PR″, PS′, PS″ for a phase setting, in bench order.
pub fn phase_elements(ps: &PhaseSetting) -> [ElementSpec; 4] {
    let make = |kind, source: Source, phase| ElementSpec {
        kind,
        phase,
        sign: PhaseSign::for_source(source),
        source,
    };
    [
        make(ElementKind::PolPhase, Source::One, ps.theta1),
        make(ElementKind::PolPhase, Source::Two, ps.theta2),
        make(ElementKind::PathPhase, Source::One, ps.phi1),
        make(ElementKind::PathPhase, Source::Two, ps.phi2),
    ]
}

/// `|Ψᶠ)` grouped by path pair; each entry holds the `(VV, VH, HV, HH)`
/// polarization amplitudes of that branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchForm {
    pub aa: [Complex64; 4],
    pub ab: [Complex64; 4],
    pub ba: [Complex64; 4],
    pub bb: [Complex64; 4],
}

impl BranchForm {
    pub fn of(state: &BenchState) -> Self {
        let branch = |p1, p2| {
            [
                state.amplitude(p1, Pol::V, p2, Pol::V),
                state.amplitude(p1, Pol::V, p2, Pol::H),
                state.amplitude(p1, Pol::H, p2, Pol::V),
                state.amplitude(p1, Pol::H, p2, Pol::H),
            ]
        };
        Self {
            aa: branch(Path::A, Path::A),
            ab: branch(Path::A, Path::B),
            ba: branch(Path::B, Path::A),
            bb: branch(Path::B, Path::B),
        }
    }

    pub fn branch(&self, path1: Path, path2: Path) -> &[Complex64; 4] {
        match (path1, path2) {
            (Path::A, Path::A) => &self.aa,
            (Path::A, Path::B) => &self.ab,
            (Path::B, Path::A) => &self.ba,
            (Path::B, Path::B) => &self.bb,
        }
    }

    pub fn branch_norm_sqr(&self, path1: Path, path2: Path) -> f64 {
        self.branch(path1, path2).iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Closed forms of the bench states, written out term by term without
/// going through the element matrices. Used as goldens.
pub mod closed_form {
    use super::*;

    fn state(entries: &[(usize, Complex64)]) -> ComplexVector {
        let mut v = vec![ZERO; DIM];
        for &(i, z) in entries {
            v[i] += z;
        }
        ComplexVector::new(v).expect("nonempty")
    }

    /// `(A₁A₂/√2)[|aVaV) − e^{iΔ}|bHbH)]`.
    pub fn prestate(s1: &SourceSpec, s2: &SourceSpec, ps: &PhaseSetting) -> ComplexVector {
        let c = s1.amplitude * s2.amplitude * FRAC_1_SQRT_2;
        state(&[
            (basis::index(Path::A, Pol::V, Path::A, Pol::V), c),
            (basis::index(Path::B, Pol::H, Path::B, Pol::H), -c * cis(ps.delta())),
        ])
    }

    /// `(A₁A₂/√2)[½(|a)+|b))|V)(|a)+|b))|V) − e^{iΔ}·½(|a)−|b))|H)(|a)−|b))|H)]`.
    pub fn final_state(s1: &SourceSpec, s2: &SourceSpec, ps: &PhaseSetting) -> ComplexVector {
        let c = s1.amplitude * s2.amplitude * FRAC_1_SQRT_2 * 0.5;
        let e = cis(ps.delta());
        let mut terms = Vec::with_capacity(8);
        for p1 in [Path::A, Path::B] {
            for p2 in [Path::A, Path::B] {
                let sign = |p| if p == Path::A { 1.0 } else { -1.0 };
                terms.push((basis::index(p1, Pol::V, p2, Pol::V), c));
                terms.push((basis::index(p1, Pol::H, p2, Pol::H), -c * e * sign(p1) * sign(p2)));
            }
        }
        state(&terms)
    }

    /// The `|a)|a)` branch of the final state:
    /// `(A₁A₂/√2)·½·[|VV) − e^{iΔ}|HH)]`, as `(VV, VH, HV, HH)`.
    pub fn aa_branch(s1: &SourceSpec, s2: &SourceSpec, ps: &PhaseSetting) -> [Complex64; 4] {
        let c = s1.amplitude * s2.amplitude * FRAC_1_SQRT_2 * 0.5;
        [c, ZERO, ZERO, -c * cis(ps.delta())]
    }
}

/// [`Bench::evolve_prestate`] on the standard bench.
pub fn evolve_prestate(s1: &SourceSpec, s2: &SourceSpec, ps: &PhaseSetting) -> BenchState {
    Bench::standard().evolve_prestate(s1, s2, ps)
}

/// [`Bench::apply_bs_prime`] on the standard bench.
pub fn apply_bs_prime(pre: &BenchState) -> Result<BenchState> {
    Bench::standard().apply_bs_prime(pre)
}
