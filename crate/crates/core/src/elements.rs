//! Two-by-two unitaries and projectors for the bench elements.
//!
//! Path operators act on `(|a), |b))`, polarization operators on
//! `(|V), |H))`. Phase elements are diagonal with the phase on `|b)` or `|H)`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::basis::{Slot, Source};
use crate::linalg::{cis, embed, embed_source, re, ComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

/// Direction of a phase exponent, `e^{+iθ}` or `e^{-iθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseSign {
    Plus,
    Minus,
}

impl PhaseSign {
    pub fn factor(self) -> f64 {
        match self {
            PhaseSign::Plus => 1.0,
            PhaseSign::Minus => -1.0,
        }
    }

    /// Sign convention used by each source's phase elements: source 1
    /// advances the phase, source 2 retards it.
    pub fn for_source(source: Source) -> Self {
        match source {
            Source::One => PhaseSign::Plus,
            Source::Two => PhaseSign::Minus,
        }
    }
}

impl TryFrom<i32> for PhaseSign {
    type Error = Error;

    fn try_from(value: i32) -> Result<Self> {
        match value {
            1 => Ok(PhaseSign::Plus),
            -1 => Ok(PhaseSign::Minus),
            other => Err(Error::InvalidParameter(format!(
                "phase sign must be +1 or -1, got {other}"
            ))),
        }
    }
}

/// `(1/√2)[[1, 1], [1, −1]]` on `(|a), |b))`. Used for both BS and BS′.
pub fn beam_splitter() -> ComplexMatrix {
    let s = re(FRAC_1_SQRT_2);
    ComplexMatrix::mat2(s, s, s, -s)
}

/// `|H)(V| + |V)(H|`.
pub fn pol_swap() -> ComplexMatrix {
    ComplexMatrix::mat2(ZERO, ONE, ONE, ZERO)
}

/// `diag(1, e^{i·sign·θ})` on `(|V), |H))`.
pub fn pol_phase(theta: f64, sign: PhaseSign) -> ComplexMatrix {
    ComplexMatrix::mat2(ONE, ZERO, ZERO, cis(sign.factor() * theta))
}

/// `diag(1, e^{i·sign·φ})` on `(|a), |b))`.
pub fn path_phase(phi: f64, sign: PhaseSign) -> ComplexMatrix {
    ComplexMatrix::mat2(ONE, ZERO, ZERO, cis(sign.factor() * phi))
}

/// Amplitude action of a dispersing prism: identity. The frequency offset
/// lives only on the path label, see [`PathLabel`].
pub fn prism(_omega: f64) -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

/// Adjoint of [`prism`].
pub fn inverse_prism(omega: f64) -> ComplexMatrix {
    prism(omega).adjoint()
}

/// Rank-one projector onto `(|V) + |H))/√2`.
pub fn polarizer_45() -> ComplexMatrix {
    let h = re(0.5);
    ComplexMatrix::mat2(h, h, h, h)
}

/// [`polarizer_45`] acting on one source's polarization factor of the full space.
pub fn polarizer_45_for(source: Source) -> ComplexMatrix {
    embed(&polarizer_45(), source.pol_slot()).expect("2x2 operator")
}

/// `|a)(a| ⊗ I + |b)(b| ⊗ op`: a polarization element sitting in path `b` only.
pub fn in_path_b(pol_op: &ComplexMatrix) -> Result<ComplexMatrix> {
    if pol_op.rows() != 2 || pol_op.cols() != 2 {
        return Err(Error::NotTwoByTwo {
            rows: pol_op.rows(),
            cols: pol_op.cols(),
        });
    }
    let proj_a = ComplexMatrix::mat2(ONE, ZERO, ZERO, ZERO);
    let proj_b = ComplexMatrix::mat2(ZERO, ZERO, ZERO, ONE);
    Ok(&proj_a.kron(&ComplexMatrix::identity(2)) + &proj_b.kron(pol_op))
}

/// A path label possibly shifted by a prism, e.g. `b+ε(1.3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLabel {
    pub path: crate::basis::Path,
    pub dispersion: Option<f64>,
}

impl PathLabel {
    pub fn bare(path: crate::basis::Path) -> Self {
        Self {
            path,
            dispersion: None,
        }
    }

    /// Label after a prism tuned to `omega`.
    pub fn disperse(self, omega: f64) -> Self {
        Self {
            dispersion: Some(omega),
            ..self
        }
    }

    /// Label after the inverse prism.
    pub fn recombine(self) -> Self {
        Self {
            dispersion: None,
            ..self
        }
    }
}

impl fmt::Display for PathLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dispersion {
            None => write!(f, "{}", self.path),
            Some(w) => write!(f, "{}+ε({w})", self.path),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    BeamSplitter,
    PolSwap,
    PolPhase,
    PathPhase,
    Prism,
    InversePrism,
    Polarizer45,
}

/// One element of the bench, attached to a source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementSpec {
    pub kind: ElementKind,
    /// Phase for `PolPhase` / `PathPhase`; the prism frequency tag otherwise.
    pub phase: f64,
    pub sign: PhaseSign,
    pub source: Source,
}

impl ElementSpec {
    pub fn new(kind: ElementKind, phase: f64, sign: PhaseSign, source: Source) -> Result<Self> {
        if !phase.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "element phase must be finite, got {phase}"
            )));
        }
        Ok(Self {
            kind,
            phase,
            sign,
            source,
        })
    }

    pub fn fixed(kind: ElementKind, source: Source) -> Self {
        Self {
            kind,
            phase: 0.0,
            sign: PhaseSign::Plus,
            source,
        }
    }

    pub fn is_projector(&self) -> bool {
        self.kind == ElementKind::Polarizer45
    }

    /// The element's 2×2 matrix on its own factor.
    pub fn matrix(&self) -> ComplexMatrix {
        match self.kind {
            ElementKind::BeamSplitter => beam_splitter(),
            ElementKind::PolSwap => pol_swap(),
            ElementKind::PolPhase => pol_phase(self.phase, self.sign),
            ElementKind::PathPhase => path_phase(self.phase, self.sign),
            ElementKind::Prism => prism(self.phase),
            ElementKind::InversePrism => inverse_prism(self.phase),
            ElementKind::Polarizer45 => polarizer_45(),
        }
    }

    /// The factor the element acts on.
    pub fn slot(&self) -> Slot {
        match self.kind {
            ElementKind::PolSwap | ElementKind::PolPhase | ElementKind::Polarizer45 => {
                self.source.pol_slot()
            }
            _ => self.source.path_slot(),
        }
    }

    /// 4×4 action on the source's path⊗pol space. Rotators (PR, PR′, PR″)
    /// sit in path `b` and leave path `a` alone.
    pub fn source_operator(&self) -> ComplexMatrix {
        let m = self.matrix();
        let id = ComplexMatrix::identity(2);
        match self.kind {
            ElementKind::PolSwap | ElementKind::PolPhase => {
                in_path_b(&m).expect("2x2 operator")
            }
            ElementKind::Polarizer45 => id.kron(&m),
            _ => m.kron(&id),
        }
    }

    /// 16×16 action on the two-source space.
    pub fn operator(&self) -> ComplexMatrix {
        embed_source(&self.source_operator(), self.source).expect("4x4 operator")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Path;
    use crate::linalg::{is_unitary, ComplexVector, I, TOL};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn ket(entries: &[f64]) -> ComplexVector {
        ComplexVector::from_real(entries).unwrap()
    }

    #[test]
    fn splitter_on_path_kets() {
        let s = FRAC_1_SQRT_2;
        let bs = beam_splitter();
        assert!(bs.apply(&ket(&[1.0, 0.0])).unwrap().approx_eq(&ket(&[s, s]), TOL));
        assert!(bs.apply(&ket(&[0.0, 1.0])).unwrap().approx_eq(&ket(&[s, -s]), TOL));
        assert!((&bs * &bs).approx_eq(&ComplexMatrix::identity(2), TOL));
    }

    #[test]
    fn splitter_matches_ket_bra_form() {
        // (|a)(a| − |b)(b| + |a)(b| + |b)(a|)/√2 written entry by entry.
        let a = ket(&[1.0, 0.0]);
        let b = ket(&[0.0, 1.0]);
        let sum = &(&ComplexMatrix::outer(&a, &a) - &ComplexMatrix::outer(&b, &b))
            + &(&ComplexMatrix::outer(&a, &b) + &ComplexMatrix::outer(&b, &a));
        assert!(beam_splitter().approx_eq(&sum.scale(re(FRAC_1_SQRT_2)), TOL));
    }

    #[test]
    fn swap_exchanges_polarizations() {
        let v = ket(&[1.0, 0.0]);
        let h = ket(&[0.0, 1.0]);
        assert_eq!(pol_swap().apply(&v).unwrap(), h);
        assert_eq!(pol_swap().apply(&h).unwrap(), v);
        assert_eq!(&pol_swap() * &pol_swap(), ComplexMatrix::identity(2));
    }

    #[test]
    fn pol_phase_examples() {
        let theta = 0.83;
        let h = ket(&[0.0, 1.0]);
        let out = pol_phase(theta, PhaseSign::Plus).apply(&h).unwrap();
        assert!(out.approx_eq(&h.scale(cis(theta)), TOL));
        for sign in [PhaseSign::Plus, PhaseSign::Minus] {
            assert!(pol_phase(0.0, sign).approx_eq(&ComplexMatrix::identity(2), TOL));
        }
        let s = FRAC_1_SQRT_2;
        let out = pol_phase(PI, PhaseSign::Plus).apply(&ket(&[s, s])).unwrap();
        assert!(out.approx_eq(&ket(&[s, -s]), TOL));
    }

    #[test]
    fn path_phase_examples() {
        let b = ket(&[0.0, 1.0]);
        let phi = -1.7;
        let out = path_phase(phi, PhaseSign::Plus).apply(&b).unwrap();
        assert!(out.approx_eq(&b.scale(cis(phi)), TOL));
        assert!(path_phase(0.0, PhaseSign::Minus).approx_eq(&ComplexMatrix::identity(2), TOL));
        let out = path_phase(FRAC_PI_2, PhaseSign::Minus).apply(&b).unwrap();
        assert!(out.approx_eq(&b.scale(-I), TOL));
    }

    #[test]
    fn phase_elements_invert() {
        for sign in [PhaseSign::Plus, PhaseSign::Minus] {
            let p = &pol_phase(0.4, sign) * &pol_phase(-0.4, sign);
            assert!(p.approx_eq(&ComplexMatrix::identity(2), TOL));
            let q = &path_phase(2.2, sign) * &path_phase(-2.2, sign);
            assert!(q.approx_eq(&ComplexMatrix::identity(2), TOL));
        }
    }

    #[test]
    fn prism_round_trip_and_labels() {
        let w = 1.3;
        assert_eq!(&inverse_prism(w) * &prism(w), ComplexMatrix::identity(2));
        let v = ComplexVector::new(vec![cis(0.3), re(-2.0)]).unwrap();
        assert_eq!(prism(w).apply(&v).unwrap(), v);

        let label = PathLabel::bare(Path::B).disperse(1.0);
        assert_eq!(label.to_string(), "b+ε(1)");
        assert_eq!(label.recombine(), PathLabel::bare(Path::B));
    }

    #[test]
    fn polarizer_examples() {
        let s = FRAC_1_SQRT_2;
        let p = polarizer_45();
        assert!(p.apply(&ket(&[s, s])).unwrap().approx_eq(&ket(&[s, s]), TOL));
        assert!(p.apply(&ket(&[s, -s])).unwrap().approx_eq(&ket(&[0.0, 0.0]), TOL));
        assert!(p.apply(&ket(&[1.0, 0.0])).unwrap().approx_eq(&ket(&[0.5, 0.5]), TOL));
        assert!((&p * &p).approx_eq(&p, TOL));
        assert!(p.is_hermitian(TOL));
        let full = polarizer_45_for(Source::Two);
        assert!((&full * &full).approx_eq(&full, TOL));
    }

    #[test]
    fn element_specs_are_unitary_except_polarizer() {
        let kinds = [
            ElementKind::BeamSplitter,
            ElementKind::PolSwap,
            ElementKind::PolPhase,
            ElementKind::PathPhase,
            ElementKind::Prism,
            ElementKind::InversePrism,
        ];
        for kind in kinds {
            for source in Source::BOTH {
                let e = ElementSpec::new(kind, 0.77, PhaseSign::for_source(source), source).unwrap();
                assert!(is_unitary(&e.matrix(), TOL).unwrap());
                assert!(is_unitary(&e.operator(), TOL).unwrap(), "{kind:?}");
            }
        }
        let pol = ElementSpec::fixed(ElementKind::Polarizer45, Source::One);
        assert!(pol.is_projector());
        assert!(!is_unitary(&pol.operator(), TOL).unwrap());
    }

    #[test]
    fn element_spec_validation() {
        assert!(ElementSpec::new(ElementKind::PolPhase, f64::NAN, PhaseSign::Plus, Source::One).is_err());
        assert!(PhaseSign::try_from(0).is_err());
        assert_eq!(PhaseSign::try_from(-1).unwrap(), PhaseSign::Minus);
    }

    #[test]
    fn rotator_only_touches_path_b() {
        let e = ElementSpec::fixed(ElementKind::PolSwap, Source::One);
        let op = e.source_operator();
        // |a V) (index 0) untouched; |b V) (index 2) -> |b H) (index 3).
        assert_eq!(op.apply(&ComplexVector::basis(4, 0).unwrap()).unwrap(), ComplexVector::basis(4, 0).unwrap());
        assert_eq!(op.apply(&ComplexVector::basis(4, 2).unwrap()).unwrap(), ComplexVector::basis(4, 3).unwrap());
    }
}
