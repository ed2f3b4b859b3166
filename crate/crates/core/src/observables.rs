//! Phase-parameterized σ observables, their ±1 eigenprojectors, and the
//! intensity operators built from the `+1` projectors.
//!
//! On one factor with phase `x`:
//!
//! ```text
//! σ(x)  = e^{ix}|1)(0| + e^{-ix}|0)(1|
//! P₀(x) = ½(|0) + e^{ix}|1))((0| + e^{-ix}(1|)
//! P_π(x) = ½(|0) − e^{ix}|1))((0| − e^{-ix}(1|)
//! ```
//!
//! with `|0), |1)` = `|V), |H)` or `|a), |b)`. Source 1 uses `x = +angle`,
//! source 2 uses `x = −angle`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::basis::Source;
use crate::bench::{phase_elements, BenchState, PhaseSetting, Stage};
use crate::elements::beam_splitter;
use crate::error::{Error, Result};
use crate::linalg::{cis, embed, embed_source, ComplexMatrix, ComplexVector, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dof {
    Path,
    Pol,
}

/// Which part of σ: the full observable or one of its eigenprojectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Full,
    /// Eigenvalue +1 projector, `σ_{·,0}`.
    Plus,
    /// Eigenvalue −1 projector, `σ_{·,π}`.
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaSpec {
    pub source: Source,
    pub dof: Dof,
    pub phase: f64,
    pub branch: Branch,
}

impl SigmaSpec {
    pub fn new(source: Source, dof: Dof, phase: f64, branch: Branch) -> Self {
        Self {
            source,
            dof,
            phase,
            branch,
        }
    }

    fn local_phase(&self) -> f64 {
        match self.source {
            Source::One => self.phase,
            Source::Two => -self.phase,
        }
    }

    /// The 2×2 matrix on the observable's own factor.
    pub fn local_matrix(&self) -> ComplexMatrix {
        let x = self.local_phase();
        match self.branch {
            Branch::Full => ComplexMatrix::mat2(ZERO, cis(-x), cis(x), ZERO),
            Branch::Plus => projector_onto(ONE, cis(x)),
            Branch::Minus => projector_onto(ONE, -cis(x)),
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let slot = match self.dof {
            Dof::Path => self.source.path_slot(),
            Dof::Pol => self.source.pol_slot(),
        };
        embed(&self.local_matrix(), slot).expect("2x2 operator")
    }
}

/// `|u)(u|` for `u = (c0, c1)/√2`.
fn projector_onto(c0: Complex64, c1: Complex64) -> ComplexMatrix {
    let u = ComplexVector::new(vec![c0 * FRAC_1_SQRT_2, c1 * FRAC_1_SQRT_2]).expect("nonempty");
    ComplexMatrix::outer(&u, &u)
}

/// σ observable (or branch projector) lifted to the 16-dimensional space.
pub fn sigma(spec: SigmaSpec) -> ComplexMatrix {
    spec.matrix()
}

/// `σ^{path}_{·φ} σ^{pol}_{·θ}` for one source, identity on the other.
pub fn local_correlator(source: Source, theta: f64, phi: f64) -> ComplexMatrix {
    let path = sigma(SigmaSpec::new(source, Dof::Path, phi, Branch::Full));
    let pol = sigma(SigmaSpec::new(source, Dof::Pol, theta, Branch::Full));
    &path * &pol
}

/// `Î_S(θ, φ) = σ^{path}_{φ,0} σ^{pol}_{θ,0} ⊗ I_{other}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityOperator {
    pub source: Source,
    pub theta: f64,
    pub phi: f64,
    pub matrix: ComplexMatrix,
}

pub fn intensity_operator(source: Source, theta: f64, phi: f64) -> IntensityOperator {
    let path = sigma(SigmaSpec::new(source, Dof::Path, phi, Branch::Plus));
    let pol = sigma(SigmaSpec::new(source, Dof::Pol, theta, Branch::Plus));
    IntensityOperator {
        source,
        theta,
        phi,
        matrix: &path * &pol,
    }
}

impl IntensityOperator {
    /// Joint operator `Î_{S₁} Î_{S₂}`.
    pub fn joint(&self, other: &IntensityOperator) -> ComplexMatrix {
        &self.matrix * &other.matrix
    }
}

/// `(state|op|state)`.
pub fn expectation(state: &ComplexVector, op: &ComplexMatrix) -> Result<Complex64> {
    if op.rows() != state.dim() || op.cols() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            found: if op.rows() != state.dim() {
                op.rows()
            } else {
                op.cols()
            },
        });
    }
    state.inner(&op.apply(state)?)
}

/// Real part of [`expectation`] for Hermitian operators.
pub fn real_expectation(state: &ComplexVector, op: &ComplexMatrix) -> Result<f64> {
    Ok(expectation(state, op)?.re)
}

/// `(state| Î_{S₁}(θ₁, φ₁) Î_{S₂}(θ₂, φ₂) |state)`.
pub fn joint_intensity(state: &ComplexVector, ps: &PhaseSetting) -> Result<f64> {
    let i1 = intensity_operator(Source::One, ps.theta1, ps.phi1);
    let i2 = intensity_operator(Source::Two, ps.theta2, ps.phi2);
    real_expectation(state, &i1.joint(&i2))
}

/// `U† σ^{path}_{0,0} U` for the standard BS′ on one source. Equals `|a)(a|`.
pub fn conjugated_path_projector(source: Source) -> ComplexMatrix {
    let u = embed(&beam_splitter(), source.path_slot()).expect("2x2 operator");
    let p = sigma(SigmaSpec::new(source, Dof::Path, 0.0, Branch::Plus));
    &(&u.adjoint() * &p) * &u
}

/// `|a)(a| ⊗ σ^{pol}_{0,0}` on one source, identity on the other.
pub fn path_a_polarizer(source: Source) -> ComplexMatrix {
    let proj_a = ComplexMatrix::mat2(ONE, ZERO, ZERO, ZERO);
    let pol = SigmaSpec::new(source, Dof::Pol, 0.0, Branch::Plus).local_matrix();
    embed_source(&proj_a.kron(&pol), source).expect("4x4 operator")
}

/// The three brackets of the state-transfer chain, evaluated independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferReport {
    /// `(Ψ⁰| Î_{S₁}(θ₁,φ₁) Î_{S₂}(θ₂,φ₂) |Ψ⁰)`.
    pub phased_operators: f64,
    /// `(Ψᶠ| [|a)(a|σ^{pol}_{10,0}] ⊗ [|a)(a|σ^{pol}_{20,0}] |Ψᶠ)`.
    pub final_state: f64,
    /// `(Ψ| Î_{S₁}(0,0) Î_{S₂}(0,0) |Ψ)`.
    pub phased_state: f64,
}

impl TransferReport {
    pub fn values(&self) -> [f64; 3] {
        [self.phased_operators, self.final_state, self.phased_state]
    }

    /// Largest pairwise absolute difference of the three brackets.
    pub fn max_pairwise_diff(&self) -> f64 {
        let v = self.values();
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                worst = worst.max((v[i] - v[j]).abs());
            }
        }
        worst
    }
}

/// Evaluates the transfer chain for `pre = |Ψ)` and `post = |Ψᶠ)`.
///
/// `|Ψ⁰)` is recovered from `pre` by undoing the phase elements for `ps`.
pub fn transfer_check(pre: &BenchState, post: &BenchState, ps: &PhaseSetting) -> Result<TransferReport> {
    pre.expect_stage(Stage::PreBsPrime)?;
    post.expect_stage(Stage::PostBsPrime)?;

    let mut psi0 = pre.vector.clone();
    for element in phase_elements(ps).iter().rev() {
        psi0 = element.operator().adjoint().apply(&psi0)?;
    }

    let phased_operators = joint_intensity(&psi0, ps)?;
    let readout = &path_a_polarizer(Source::One) * &path_a_polarizer(Source::Two);
    let final_state = real_expectation(&post.vector, &readout)?;
    let phased_state = joint_intensity(&pre.vector, &PhaseSetting::zero())?;

    Ok(TransferReport {
        phased_operators,
        final_state,
        phased_state,
    })
}
