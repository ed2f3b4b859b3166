//! CHSH-type functionals built from the bench correlation, and a global scan.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rayon::prelude::*;

use crate::bench::{PhaseSetting, SourceSpec};
use crate::correlations::correlation_closed_form;
use crate::error::{Error, Result};

/// Bound on `|S|` for noncontextual assignments.
pub const NONCONTEXTUAL_BOUND: f64 = 2.0;

const ANCHOR_TOL: f64 = 1e-12;

/// `cos(θ + φ)` with `θ = θ₁ − θ₂`, `φ = φ₁ − φ₂`.
pub fn c_bar(theta: f64, phi: f64) -> f64 {
    (theta + phi).cos()
}

/// `S = C̄(θ,φ) + C̄(θ,φ′) − C̄(θ′,φ) + C̄(θ′,φ′)`.
pub fn s_value(theta: f64, theta_p: f64, phi: f64, phi_p: f64) -> f64 {
    c_bar(theta, phi) + c_bar(theta, phi_p) - c_bar(theta_p, phi) + c_bar(theta_p, phi_p)
}

/// Correlation with `θ₂ = α` and `φ₁ = β` held fixed: `cos(θ₁ − α + β − φ₂)`.
fn c_tilde(theta1: f64, phi2: f64, alpha: f64, beta: f64) -> f64 {
    let (s1, s2) = (SourceSpec::unit(1.0), SourceSpec::unit(1.3));
    let ps = PhaseSetting {
        theta1,
        theta2: alpha,
        phi1: beta,
        phi2,
    };
    correlation_closed_form(&ps, &s1, &s2)
}

/// `S′ = C̃(θ₁,φ₂) + C̃(θ₁,φ₂′) − C̃(θ₁′,φ₂) + C̃(θ₁′,φ₂′)`; requires `α = β`.
pub fn s_prime_value(
    theta1: f64,
    theta1_p: f64,
    phi2: f64,
    phi2_p: f64,
    alpha: f64,
    beta: f64,
) -> Result<f64> {
    if !((alpha - beta).abs() <= ANCHOR_TOL) {
        return Err(Error::AnchorMismatch(alpha - beta));
    }
    Ok(c_tilde(theta1, phi2, alpha, beta) + c_tilde(theta1, phi2_p, alpha, beta)
        - c_tilde(theta1_p, phi2, alpha, beta)
        + c_tilde(theta1_p, phi2_p, alpha, beta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    /// Relative angles `θ = θ₁ − θ₂`, `φ = φ₁ − φ₂`.
    One,
    /// Source-1 polarization and source-2 path phases, anchors `α = β`.
    Two,
}

impl TryFrom<u8> for Case {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Case::One),
            2 => Ok(Case::Two),
            _ => Err(Error::InvalidParameter(format!("case must be 1 or 2, got {v}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSetting {
    pub case: Case,
    /// `(θ, θ′)` or `(θ₁, θ₁′)`.
    pub primary: (f64, f64),
    /// `(φ, φ′)` or `(φ₂, φ₂′)`.
    pub primed: (f64, f64),
    /// `(α, β)`, only read for [`Case::Two`].
    pub anchors: (f64, f64),
}

impl ChshSetting {
    pub fn case_one(theta: f64, theta_p: f64, phi: f64, phi_p: f64) -> Self {
        Self {
            case: Case::One,
            primary: (theta, theta_p),
            primed: (phi, phi_p),
            anchors: (0.0, 0.0),
        }
    }

    pub fn case_two(theta1: f64, theta1_p: f64, phi2: f64, phi2_p: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !((alpha - beta).abs() <= ANCHOR_TOL) {
            return Err(Error::AnchorMismatch(alpha - beta));
        }
        Ok(Self {
            case: Case::Two,
            primary: (theta1, theta1_p),
            primed: (phi2, phi2_p),
            anchors: (alpha, beta),
        })
    }

    /// `(0, π/2, π/4, −π/4)`.
    pub fn paper_case_one() -> Self {
        Self::case_one(0.0, FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4)
    }

    /// `(α, π/2+α, β−π/4, β+π/4)` with `α = β = anchor`.
    pub fn paper_case_two(anchor: f64) -> Self {
        Self {
            case: Case::Two,
            primary: (anchor, FRAC_PI_2 + anchor),
            primed: (anchor - FRAC_PI_4, anchor + FRAC_PI_4),
            anchors: (anchor, anchor),
        }
    }

    pub fn value(&self) -> Result<f64> {
        let (a, ap) = self.primary;
        let (b, bp) = self.primed;
        match self.case {
            Case::One => Ok(s_value(a, ap, b, bp)),
            Case::Two => s_prime_value(a, ap, b, bp, self.anchors.0, self.anchors.1),
        }
    }

    pub fn violates(&self) -> Result<bool> {
        Ok(self.value()?.abs() > NONCONTEXTUAL_BOUND)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanResult {
    pub case: Case,
    pub max_abs: f64,
    /// Four free angles at the maximum, in [`ChshSetting`] order.
    pub angles: [f64; 4],
}

impl ScanResult {
    pub fn setting(&self) -> ChshSetting {
        let [a, ap, b, bp] = self.angles;
        match self.case {
            Case::One => ChshSetting::case_one(a, ap, b, bp),
            Case::Two => ChshSetting {
                case: Case::Two,
                primary: (a, ap),
                primed: (b, bp),
                anchors: (0.0, 0.0),
            },
        }
    }
}

fn functional(case: Case, x: &[f64; 4]) -> f64 {
    match case {
        Case::One => s_value(x[0], x[1], x[2], x[3]),
        Case::Two => s_prime_value(x[0], x[1], x[2], x[3], 0.0, 0.0).expect("zero anchors"),
    }
}

/// Grid search over `[0, 2π)⁴` followed by pattern-search refinement.
pub fn scan_max(case: Case, resolution: usize) -> Result<ScanResult> {
    if resolution < 8 {
        return Err(Error::InvalidParameter(format!(
            "scan resolution must be at least 8, got {resolution}"
        )));
    }
    let n = resolution;
    let step = 2.0 * PI / n as f64;
    let table: Vec<f64> = (0..n).map(|i| (i as f64 * step).cos()).collect();
    // Case 1 combines angles by sum, case 2 by difference.
    let combine = |i: usize, j: usize| match case {
        Case::One => (i + j) % n,
        Case::Two => (i + n - j) % n,
    };

    let (_, idx) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::NEG_INFINITY, [0usize; 4]);
            for ip in 0..n {
                for j in 0..n {
                    let c_ij = table[combine(i, j)];
                    let c_ipj = table[combine(ip, j)];
                    for jp in 0..n {
                        let s = c_ij + table[combine(i, jp)] - c_ipj + table[combine(ip, jp)];
                        if s.abs() > best.0 {
                            best = (s.abs(), [i, ip, j, jp]);
                        }
                    }
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((f64::NEG_INFINITY, [0usize; 4]), |acc, b| if b.0 > acc.0 { b } else { acc });

    let mut x = idx.map(|k| k as f64 * step);
    let mut value = functional(case, &x).abs();
    let mut h = step;
    while h > 1e-10 {
        let mut improved = false;
        for d in 0..4 {
            for dir in [1.0, -1.0] {
                let mut y = x;
                y[d] += dir * h;
                let v = functional(case, &y).abs();
                if v > value {
                    x = y;
                    value = v;
                    improved = true;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    Ok(ScanResult {
        case,
        max_abs: value,
        angles: x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    const TOL: f64 = 1e-12;

    #[test]
    fn c_bar_examples() {
        assert_eq!(c_bar(0.0, 0.0), 1.0);
        assert!((c_bar(0.0, FRAC_PI_4) - SQRT_2 / 2.0).abs() < TOL);
        assert!((c_bar(FRAC_PI_2, FRAC_PI_2) + 1.0).abs() < TOL);
    }

    #[test]
    fn s_examples() {
        assert!((s_value(0.0, FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4) - 2.0 * SQRT_2).abs() < TOL);
        assert!((s_value(0.0, 0.0, 0.0, 0.0) - 2.0).abs() < TOL);
        // Swapping φ and φ′ in the violating set cancels the sum.
        assert!(s_value(0.0, FRAC_PI_2, -FRAC_PI_4, FRAC_PI_4).abs() < TOL);
    }

    #[test]
    fn s_prime_examples() {
        let v = ChshSetting::paper_case_two(0.0).value().unwrap();
        assert!((v - 2.0 * SQRT_2).abs() < TOL);
        assert!((s_prime_value(0.0, 0.0, 0.0, 0.0, 0.0, 0.0).unwrap() - 2.0).abs() < TOL);
        for c in [-2.1, 0.37, 5.0] {
            let v = ChshSetting::paper_case_two(c).value().unwrap();
            assert!((v - 2.0 * SQRT_2).abs() < TOL);
        }
        assert!(matches!(
            s_prime_value(0.0, 0.0, 0.0, 0.0, 0.1, 0.0),
            Err(Error::AnchorMismatch(_))
        ));
    }

    #[test]
    fn matches_correlation_module() {
        let (s1, s2) = (SourceSpec::unit(1.0), SourceSpec::unit(1.3));
        let ps = PhaseSetting::new(0.7, 0.2, -1.1, 0.4).unwrap();
        let c = correlation_closed_form(&ps, &s1, &s2);
        assert!((c - c_bar(ps.theta1 - ps.theta2, ps.phi1 - ps.phi2)).abs() < TOL);
    }

    #[test]
    fn equal_primary_angles_reduce() {
        let (t, p, pp) = (0.3, -0.8, 1.9);
        assert!((s_value(t, t, p, pp) - 2.0 * c_bar(t, pp)).abs() < TOL);
    }

    #[test]
    fn scan_rejects_coarse_grid() {
        assert!(scan_max(Case::One, 7).is_err());
    }

    #[test]
    fn scan_finds_tsirelson_value() {
        for case in [Case::One, Case::Two] {
            let r = scan_max(case, 16).unwrap();
            assert!((r.max_abs - 2.0 * SQRT_2).abs() < 1e-4, "{case:?}: {}", r.max_abs);
            assert!(r.max_abs <= 2.0 * SQRT_2 + 1e-9);
            assert!((r.setting().value().unwrap().abs() - r.max_abs).abs() < TOL);
        }
    }
}
