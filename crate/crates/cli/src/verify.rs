//! Every cross-check in one run.
//!
//! Rows whose status is `discrepancy-logged` compare against constants the
//! closed forms state but the operator route does not reproduce; they are
//! printed with both values and never fail the run on their own.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::fmt;
use std::fmt::Write as _;

use classent_core::basis::Source;
use classent_core::bench::{closed_form, Bench, BranchForm, PhaseSetting, SourceSpec, Stage};
use classent_core::contextuality::{s_value, scan_max, Case, ChshSetting};
use classent_core::correlations::{
    correlation_closed_form, correlation_numeric, g2_generalized, intensity_term_closed, sum_identity, Shift,
};
use classent_core::detector::{autocorrelation_demo, beat_window, p45_intensity, MIN_SAMPLES};
use classent_core::elements::{path_phase, pol_phase, polarizer_45_for, ElementKind, ElementSpec, PhaseSign};
use classent_core::fit::{fit_affine, fit_proportional, grid};
use classent_core::linalg::{embed, is_unitary, ComplexMatrix, ZERO};
use classent_core::observables::{intensity_operator, sigma, transfer_check, Branch, Dof, SigmaSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::{num, SCAN_RESOLUTION};

pub const TOL: f64 = 1e-12;
const RANDOM_INSTANCES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    DiscrepancyLogged,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::DiscrepancyLogged => "discrepancy-logged",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub measured: String,
    pub expected: String,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "seed {}", self.seed).unwrap();
        writeln!(
            out,
            "{:<34} {:<19} {:>12}  {:<40}  expected",
            "check", "status", "tolerance", "measured"
        )
        .unwrap();
        for c in &self.checks {
            writeln!(
                out,
                "{:<34} {:<19} {:>12.1e}  {:<40}  {}",
                c.name, c.status, c.tolerance, c.measured, c.expected
            )
            .unwrap();
        }
        let fails = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        let logged = self
            .checks
            .iter()
            .filter(|c| c.status == Status::DiscrepancyLogged)
            .count();
        writeln!(
            out,
            "{} checks, {} failed, {} discrepancies logged",
            self.checks.len(),
            fails,
            logged
        )
        .unwrap();
        out
    }
}

struct Suite {
    rng: ChaCha8Rng,
    bench: Bench,
    checks: Vec<Check>,
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn logged_if(ok: bool) -> Status {
    if ok {
        Status::DiscrepancyLogged
    } else {
        Status::Fail
    }
}

impl Suite {
    fn push(&mut self, name: &str, status: Status, measured: String, expected: String, tolerance: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            status,
            measured,
            expected,
            tolerance,
        });
    }

    fn angle(&mut self) -> f64 {
        self.rng.gen_range(-PI..PI)
    }

    fn phases(&mut self) -> PhaseSetting {
        PhaseSetting {
            theta1: self.angle(),
            theta2: self.angle(),
            phi1: self.angle(),
            phi2: self.angle(),
        }
    }

    fn sources(&mut self) -> (SourceSpec, SourceSpec) {
        let mut one = |omega| {
            let amp = num_complex::Complex64::from_polar(self.rng.gen_range(0.2..2.0), self.rng.gen_range(-PI..PI));
            SourceSpec::new(amp, omega).expect("nonzero amplitude")
        };
        (one(1.0), one(1.3))
    }
}

fn unit() -> (SourceSpec, SourceSpec) {
    classent_core::bench::unit_sources()
}

fn ghz_correlation(s: &mut Suite) {
    let (s1, s2) = unit();
    let base = s.phases();
    let mut worst: f64 = 0.0;
    for d in grid(0.0, 2.0 * PI, 64) {
        let ps = PhaseSetting {
            theta1: d - base.phi1 + base.theta2 + base.phi2,
            ..base
        };
        let want = (ps.theta1 - ps.theta2 + ps.phi1 - ps.phi2).cos();
        worst = worst.max((correlation_closed_form(&ps, &s1, &s2) - want).abs());
    }
    let top = correlation_closed_form(&PhaseSetting::zero(), &s1, &s2);
    let bottom = correlation_closed_form(&PhaseSetting::with_delta(PI), &s1, &s2);
    let ok = worst < TOL && top == 1.0 && bottom == -1.0;
    s.push(
        "1 correlation-cosine",
        pass_if(ok),
        format!("max-err {} C(0) {} C(pi) {}", num(worst), num(top), num(bottom)),
        "cos(delta); +1; -1".into(),
        TOL,
    );
}

fn hbt_reduction(s: &mut Suite) {
    let (s1, s2) = unit();
    let theta = s.angle();
    let mut worst: f64 = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for d in grid(0.0, 2.0 * PI, 64) {
        // θ₁ = θ₂, so the constant offset vanishes and the grid hits 0 and π.
        let offset = s.angle();
        let ps = PhaseSetting {
            theta1: theta,
            theta2: theta,
            phi1: d + offset,
            phi2: offset,
        };
        let g = g2_generalized(Shift::ZERO, &ps, &s1, &s2);
        worst = worst.max((g - (1.0 - 0.5 * d.cos())).abs());
        lo = lo.min(g);
        hi = hi.max(g);
    }
    let ok = worst < TOL && (lo - 0.5).abs() < TOL && (hi - 1.5).abs() < TOL;
    s.push(
        "2 hbt-reduction",
        pass_if(ok),
        format!("max-err {} range [{}, {}]", num(worst), num(lo), num(hi)),
        "1 - cos(phi1-phi2)/2; [0.5, 1.5]".into(),
        TOL,
    );
}

fn chsh(s: &mut Suite) {
    let target = 2.0 * SQRT_2;
    let v = ChshSetting::paper_case_one().value().expect("case one");
    s.push("3 s-case1", pass_if((v - target).abs() < TOL), num(v), num(target), TOL);

    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let anchor = s.angle();
        let v = ChshSetting::paper_case_two(anchor).value().expect("equal anchors");
        worst = worst.max((v - target).abs());
    }
    s.push(
        "3 s-prime-case2-10-anchors",
        pass_if(worst < TOL),
        format!("max-err {}", num(worst)),
        num(target),
        TOL,
    );

    for (name, case) in [("3 scan-max-case1", Case::One), ("3 scan-max-case2", Case::Two)] {
        let r = scan_max(case, SCAN_RESOLUTION).expect("resolution");
        s.push(name, pass_if((r.max_abs - target).abs() < 1e-4), num(r.max_abs), num(target), 1e-4);
    }

    let swapped = s_value(0.0, FRAC_PI_2, -std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_4);
    s.push(
        "s-swapped-phi-set",
        logged_if(swapped.abs() < TOL),
        num(swapped),
        num(target),
        TOL,
    );
}

fn detection_law(s: &mut Suite) {
    let (s1, s2) = unit();
    let mut worst: f64 = 0.0;
    for d in grid(0.0, 2.0 * PI, 64) {
        let ps = PhaseSetting::with_delta(d);
        let p = s
            .bench
            .apply_bs_prime(&s.bench.evolve_prestate(&s1, &s2, &ps))
            .and_then(|f| p45_intensity(&f));
        let err = match p {
            Ok(p) => (p - 0.5 * (1.0 - d.cos())).abs(),
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(err);
    }
    s.push(
        "4 detection-law",
        pass_if(worst < TOL),
        format!("max-err {}", num(worst)),
        "(1 - cos delta)/2".into(),
        TOL,
    );
}

fn max_entry_diff(a: &[num_complex::Complex64], b: &[num_complex::Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn pipeline_goldens(s: &mut Suite) {
    let (mut pre_err, mut fin_err, mut aa_err) = (0.0f64, 0.0f64, 0.0f64);
    let mut support_ok = true;
    for _ in 0..RANDOM_INSTANCES {
        let ps = s.phases();
        let (s1, s2) = s.sources();
        let pre = s.bench.evolve_prestate(&s1, &s2, &ps);
        let want = closed_form::prestate(&s1, &s2, &ps);
        pre_err = pre_err.max(max_entry_diff(pre.vector.entries(), want.entries()));
        support_ok &= pre.vector.support(TOL).len() == 2;
        match s.bench.apply_bs_prime(&pre) {
            Ok(fin) => {
                let want = closed_form::final_state(&s1, &s2, &ps);
                fin_err = fin_err.max(max_entry_diff(fin.vector.entries(), want.entries()));
                let aa = BranchForm::of(&fin).aa;
                aa_err = aa_err.max(max_entry_diff(&aa, &closed_form::aa_branch(&s1, &s2, &ps)));
            }
            Err(_) => fin_err = f64::INFINITY,
        }
    }
    s.push(
        "5 prestate-golden",
        pass_if(pre_err < TOL && support_ok),
        format!("max-err {} two-component {}", num(pre_err), support_ok),
        "A1A2/sqrt2 [aVaV - e^{i delta} bHbH]".into(),
        TOL,
    );
    s.push(
        "5 final-state-golden",
        pass_if(fin_err < TOL),
        format!("max-err {}", num(fin_err)),
        "branch expansion after BS'".into(),
        TOL,
    );
    s.push(
        "5 aa-branch-golden",
        pass_if(aa_err < TOL),
        format!("max-err {}", num(aa_err)),
        "A1A2/(2 sqrt2) [VV - e^{i delta} HH]".into(),
        TOL,
    );
}

fn operator_err(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.max_abs_diff(b).unwrap_or(f64::INFINITY)
}

fn property_suite(s: &mut Suite) {
    let id16 = ComplexMatrix::identity(16);
    let zero16 = ComplexMatrix::new(16, 16, vec![ZERO; 256]).expect("16x16");

    let mut unitary_ok = true;
    for _ in 0..RANDOM_INSTANCES {
        let (t, p) = (s.angle(), s.angle());
        let source = if s.rng.gen_bool(0.5) { Source::One } else { Source::Two };
        let sign = PhaseSign::for_source(source);
        let mut ops = vec![s.bench.splitter().clone(), pol_phase(t, sign), path_phase(p, sign)];
        for kind in [
            ElementKind::BeamSplitter,
            ElementKind::PolSwap,
            ElementKind::PolPhase,
            ElementKind::PathPhase,
            ElementKind::Prism,
            ElementKind::InversePrism,
        ] {
            ops.push(ElementSpec::new(kind, t, sign, source).expect("finite").operator());
        }
        let bs_prime = &embed(s.bench.splitter(), Source::One.path_slot()).expect("2x2")
            * &embed(s.bench.splitter(), Source::Two.path_slot()).expect("2x2");
        ops.push(bs_prime);
        unitary_ok &= ops.iter().all(|m| is_unitary(m, TOL).unwrap_or(false));
    }
    s.push("6 unitarity", pass_if(unitary_ok), unitary_ok.to_string(), "true".into(), TOL);

    let mut proj_err: f64 = 0.0;
    for _ in 0..RANDOM_INSTANCES {
        let x = s.angle();
        for source in Source::BOTH {
            for dof in [Dof::Path, Dof::Pol] {
                let p = sigma(SigmaSpec::new(source, dof, x, Branch::Plus));
                let m = sigma(SigmaSpec::new(source, dof, x, Branch::Minus));
                proj_err = proj_err
                    .max(operator_err(&(&p * &p), &p))
                    .max(operator_err(&(&m * &m), &m))
                    .max(operator_err(&(&p * &m), &zero16))
                    .max(operator_err(&(&p + &m), &id16));
            }
            let i = intensity_operator(source, x, s.angle()).matrix;
            proj_err = proj_err.max(operator_err(&(&i * &i), &i));
            let pol = polarizer_45_for(source);
            proj_err = proj_err.max(operator_err(&(&pol * &pol), &pol));
        }
    }
    s.push(
        "6 projectors",
        pass_if(proj_err < TOL),
        format!("max-err {}", num(proj_err)),
        "P^2=P, P+P-=0, P+ + P- = I".into(),
        TOL,
    );

    let mut commute_ok = true;
    for _ in 0..RANDOM_INSTANCES {
        let spec = |src, dof, x, b| sigma(SigmaSpec::new(src, dof, x, b));
        let (a, b, c, d) = (s.angle(), s.angle(), s.angle(), s.angle());
        let ones = [
            spec(Source::One, Dof::Path, a, Branch::Full),
            spec(Source::One, Dof::Pol, b, Branch::Plus),
            intensity_operator(Source::One, a, b).matrix,
        ];
        let twos = [
            spec(Source::Two, Dof::Path, c, Branch::Full),
            spec(Source::Two, Dof::Pol, d, Branch::Minus),
            intensity_operator(Source::Two, c, d).matrix,
        ];
        for x in &ones {
            for y in &twos {
                commute_ok &= x.commutes_with(y, TOL).unwrap_or(false);
            }
        }
    }
    s.push("6 commutation", pass_if(commute_ok), commute_ok.to_string(), "true".into(), TOL);

    let mut norm_err: f64 = 0.0;
    for _ in 0..RANDOM_INSTANCES {
        let ps = s.phases();
        let (s1, s2) = s.sources();
        let want = s1.intensity() * s2.intensity();
        let mut stages = s.bench.trace(&s1, &s2, &ps);
        if let Some(last) = stages.last() {
            if let Ok(fin) = s.bench.apply_bs_prime(last) {
                stages.push(fin);
            }
        }
        if stages.last().map(|st| st.stage) != Some(Stage::PostBsPrime) {
            norm_err = f64::INFINITY;
        }
        for st in &stages {
            norm_err = norm_err.max((st.norm_sqr() - want).abs() / want);
        }
    }
    s.push(
        "6 norm-preservation",
        pass_if(norm_err < TOL),
        format!("max-rel-err {}", num(norm_err)),
        "|A1|^2 |A2|^2 at every stage".into(),
        TOL,
    );
}

fn oracle_cross_checks(s: &mut Suite) {
    // (a) operator-route correlation against κ cos Δ.
    let (s1, s2) = unit();
    let base = s.phases();
    let deltas = grid(0.0, 2.0 * PI, 64);
    let cosines: Vec<f64> = deltas.iter().map(|d| d.cos()).collect();
    let numeric: Vec<f64> = deltas
        .iter()
        .map(|&d| {
            let ps = PhaseSetting {
                theta1: d - base.phi1 + base.theta2 + base.phi2,
                ..base
            };
            correlation_numeric(&ps, &s1, &s2)
        })
        .collect();
    let fit = fit_proportional(&cosines, &numeric);
    s.push(
        "7 correlation-constant",
        logged_if(fit.max_residual < 1e-10),
        format!("kappa {} residual {}", num(fit.amplitude), num(fit.max_residual)),
        format!("kappa {}", num(1.0)),
        1e-10,
    );

    // (b) signed sixteen-term g² sum over the closed-form correlation.
    let mut ratios = Vec::new();
    for _ in 0..RANDOM_INSTANCES {
        let ps = s.phases();
        if let Some(r) = sum_identity(&ps, &s1, &s2).ratio {
            ratios.push(r);
        }
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len().max(1) as f64;
    let spread = ratios.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max);
    s.push(
        "7 sum-identity-ratio",
        logged_if(!ratios.is_empty() && spread < 1e-10),
        format!("ratio {} spread {}", num(mean), num(spread)),
        format!("ratio {}", num(1.0)),
        1e-10,
    );

    // (c) the three transfer-chain brackets.
    let mut diff: f64 = 0.0;
    let mut scale = Vec::new();
    let mut shown = [0.0; 3];
    let mut shown_expected = 0.0;
    for _ in 0..RANDOM_INSTANCES {
        let ps = s.phases();
        let (a1, a2) = s.sources();
        let pre = s.bench.evolve_prestate(&a1, &a2, &ps);
        let Ok(post) = s.bench.apply_bs_prime(&pre) else {
            diff = f64::INFINITY;
            continue;
        };
        let Ok(t) = transfer_check(&pre, &post, &ps) else {
            diff = f64::INFINITY;
            continue;
        };
        diff = diff.max(t.max_pairwise_diff());
        let sigma2 = (a1.intensity() + a2.intensity()).powi(2);
        let expected = intensity_term_closed(Shift::ZERO, &ps, &a1, &a2) * sigma2;
        if 1.0 - ps.delta().cos() > 1e-3 {
            scale.push(t.phased_operators / expected);
        }
        shown = t.values();
        shown_expected = expected;
    }
    let mean = scale.iter().sum::<f64>() / scale.len().max(1) as f64;
    let spread = scale.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max);
    s.push(
        "7 transfer-chain",
        logged_if(diff < TOL && !scale.is_empty() && spread < 1e-10),
        format!(
            "brackets {} {} {} ratio {} max-diff {}",
            num(shown[0]),
            num(shown[1]),
            num(shown[2]),
            num(mean),
            num(diff)
        ),
        format!("bracket {}", num(shown_expected)),
        TOL,
    );
}

fn autocorrelation(s: &mut Suite) {
    let (s1, s2) = unit();
    let ps = PhaseSetting::with_delta(s.rng.gen_range(0.5..2.5));
    let run = |n| autocorrelation_demo(&s1, &s2, &ps, beat_window(&s1, &s2, n), MIN_SAMPLES);

    let r80 = run(80);
    let (measured, ok, gap) = match &r80 {
        Ok(r) => (r.relative_residual, r.relative_residual < 1e-2, r.three_term_gap),
        Err(_) => (f64::INFINITY, false, f64::NAN),
    };
    s.push(
        "8 autocorrelation-residual",
        pass_if(ok),
        format!("relative {} at window*dw {}", num(measured), num(beat_window(&s1, &s2, 80) * (s1.omega - s2.omega).abs())),
        "< 1e-2".into(),
        1e-2,
    );

    let rel: Vec<f64> = [250, 500, 1000]
        .into_iter()
        .map(|n| run(n).map(|r| r.relative_residual).unwrap_or(f64::NAN))
        .collect();
    let (q1, q2) = (rel[0] / rel[1], rel[1] / rel[2]);
    s.push(
        "8 autocorrelation-halving",
        pass_if((q1 - 2.0).abs() < 0.1 && (q2 - 2.0).abs() < 0.1),
        format!("ratios {} {}", num(q1), num(q2)),
        "2 per window doubling".into(),
        0.1,
    );

    let window = beat_window(&s1, &s2, 80);
    let deltas = grid(0.0, 2.0 * PI, 16);
    let cosines: Vec<f64> = deltas.iter().map(|d| d.cos()).collect();
    let cross: Vec<f64> = deltas
        .iter()
        .map(|&d| {
            autocorrelation_demo(&s1, &s2, &PhaseSetting::with_delta(d), window, MIN_SAMPLES)
                .map(|r| r.cross)
                .unwrap_or(f64::NAN)
        })
        .collect();
    let fit = fit_affine(&cosines, &cross);
    let rel_fit = fit.max_residual / fit.amplitude.abs();
    s.push(
        "8 cross-term-cosine",
        pass_if(rel_fit < 1e-3),
        format!("amplitude {} relative residual {}", num(fit.amplitude), num(rel_fit)),
        "< 1e-3".into(),
        1e-3,
    );

    let cross_now = r80.as_ref().map(|r| r.cross).unwrap_or(f64::NAN);
    s.push(
        "autocorrelation-three-term-sum",
        logged_if((gap - cross_now).abs() < 1e-2 * cross_now.abs()),
        format!("gap {}", num(gap)),
        num(0.0),
        1e-2,
    );
}

/// Runs every check against `bench`.
pub fn run_with(seed: u64, bench: Bench) -> VerifyReport {
    let mut suite = Suite {
        rng: ChaCha8Rng::seed_from_u64(seed),
        bench,
        checks: Vec::new(),
    };
    ghz_correlation(&mut suite);
    hbt_reduction(&mut suite);
    chsh(&mut suite);
    detection_law(&mut suite);
    pipeline_goldens(&mut suite);
    property_suite(&mut suite);
    oracle_cross_checks(&mut suite);
    autocorrelation(&mut suite);
    VerifyReport {
        seed,
        checks: suite.checks,
    }
}

pub fn run(seed: u64) -> VerifyReport {
    run_with(seed, Bench::standard())
}
