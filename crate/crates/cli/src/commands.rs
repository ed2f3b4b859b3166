use std::fmt::Write as _;

use classent_core::bench::{Bench, PhaseSetting, SourceSpec};
use classent_core::contextuality::{scan_max, Case, ChshSetting};
use classent_core::correlations::{correlate, g2_generalized, sum_identity, CorrelationReport, Shift};
use classent_core::detector::p45_intensity;
use classent_core::observables::transfer_check;
use rayon::prelude::*;

use crate::scenario::Scenario;

pub const CSV_HEADER: &str = "var,delta,C_closed,C_numeric,g2,p45";

/// Full-precision float formatting used in all tables and CSV output.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_else(|| "n/a".into())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub var: f64,
    pub delta: f64,
    pub c_closed: f64,
    pub c_numeric: f64,
    pub g2: f64,
    pub p45: f64,
}

impl SweepRow {
    pub fn evaluate(var: f64, ps: &PhaseSetting, s1: &SourceSpec, s2: &SourceSpec) -> Self {
        let report = correlate(ps, s1, s2);
        let fin = Bench::standard().final_state(s1, s2, ps);
        SweepRow {
            var,
            delta: ps.delta(),
            c_closed: report.closed_form,
            c_numeric: report.numeric,
            g2: g2_generalized(Shift::ZERO, ps, s1, s2),
            p45: p45_intensity(&fin).expect("final stage"),
        }
    }

    pub fn csv(&self) -> String {
        [self.var, self.delta, self.c_closed, self.c_numeric, self.g2, self.p45]
            .map(num)
            .join(",")
    }
}

pub fn correlate_text(scenario: &Scenario) -> (CorrelationReport, String) {
    let (s1, s2) = scenario.sources();
    let r = correlate(&scenario.phases, &s1, &s2);
    let mut out = String::new();
    writeln!(out, "delta      {}", num(r.delta)).unwrap();
    writeln!(out, "C_closed   {}", num(r.closed_form)).unwrap();
    writeln!(out, "C_numeric  {}", num(r.numeric)).unwrap();
    writeln!(out, "ratio      {}", opt(r.ratio)).unwrap();
    (r, out)
}

/// Single CSV row for the scenario's phase setting, `var` holding `Δ`.
pub fn correlate_csv(scenario: &Scenario) -> String {
    let (s1, s2) = scenario.sources();
    let ps = &scenario.phases;
    format!("{CSV_HEADER}\n{}\n", SweepRow::evaluate(ps.delta(), ps, &s1, &s2).csv())
}

pub fn sweep_rows(scenario: &Scenario) -> Option<Vec<SweepRow>> {
    let sweep = scenario.sweep?;
    let (s1, s2) = scenario.sources();
    let base = scenario.phases;
    Some(
        sweep
            .values()
            .par_iter()
            .map(|&v| SweepRow::evaluate(v, &sweep.variable.apply(&base, v), &s1, &s2))
            .collect(),
    )
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 140);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

pub const SCAN_RESOLUTION: usize = 64;

pub fn chsh_text() -> String {
    let mut out = String::new();
    writeln!(out, "{:<24} {:>24}  angles", "functional", "value").unwrap();
    let case1 = ChshSetting::paper_case_one();
    let case2 = ChshSetting::paper_case_two(0.0);
    for (name, s) in [("S  (case 1, fixed set)", case1), ("S' (case 2, fixed set)", case2)] {
        let v = s.value().expect("valid setting");
        writeln!(
            out,
            "{:<24} {:>24}  ({}, {}, {}, {})",
            name,
            num(v),
            num(s.primary.0),
            num(s.primary.1),
            num(s.primed.0),
            num(s.primed.1)
        )
        .unwrap();
    }
    for (name, case) in [("max|S|  (case 1, scan)", Case::One), ("max|S'| (case 2, scan)", Case::Two)] {
        let r = scan_max(case, SCAN_RESOLUTION).expect("resolution >= 8");
        let [a, b, c, d] = r.angles.map(num);
        writeln!(out, "{:<24} {:>24}  ({a}, {b}, {c}, {d})", name, num(r.max_abs)).unwrap();
    }
    out
}

/// Correlation, state-transfer brackets and the signed sum identity.
pub fn report_text(scenario: &Scenario) -> String {
    let (s1, s2) = scenario.sources();
    let ps = &scenario.phases;
    let (_, mut out) = correlate_text(scenario);

    let bench = Bench::standard();
    let pre = bench.evolve_prestate(&s1, &s2, ps);
    let post = bench.apply_bs_prime(&pre).expect("pre-BS' stage");
    let transfer = transfer_check(&pre, &post, ps).expect("bench stages");
    let [a, b, c] = transfer.values();
    writeln!(out).unwrap();
    writeln!(out, "transfer   phased-operators  {}", num(a)).unwrap();
    writeln!(out, "transfer   final-state       {}", num(b)).unwrap();
    writeln!(out, "transfer   phased-state      {}", num(c)).unwrap();
    writeln!(out, "transfer   max-difference    {}", num(transfer.max_pairwise_diff())).unwrap();

    let sum = sum_identity(ps, &s1, &s2);
    writeln!(out).unwrap();
    writeln!(out, "sum        signed-g2         {}", num(sum.signed_g2_sum)).unwrap();
    writeln!(out, "sum        signed-brackets   {}", num(sum.signed_bracket_sum)).unwrap();
    writeln!(out, "sum        signed-final      {}", num(sum.signed_final_state_sum)).unwrap();
    writeln!(out, "sum        closed-form       {}", num(sum.closed_form)).unwrap();
    writeln!(out, "sum        ratio             {}", opt(sum.ratio)).unwrap();

    writeln!(out).unwrap();
    writeln!(out, "{:<10} {:>24} {:>24} {:>24}", "shift", "g2", "bracket-closed", "bracket-numeric").unwrap();
    let r = correlate(ps, &s1, &s2);
    for (t, (_, g)) in r.terms.iter().zip(&sum.g2_terms) {
        let s = t.shift;
        writeln!(
            out,
            "({},{},{},{}) {:+} {:>24} {:>24} {:>24}",
            s.k,
            s.l,
            s.m,
            s.n,
            t.sign as i8,
            num(*g),
            num(t.closed),
            num(t.numeric)
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;
    use std::f64::consts::PI;

    #[test]
    fn correlate_examples() {
        let (r, _) = correlate_text(&Scenario::default());
        assert_eq!(r.closed_form, 1.0);
        assert_eq!(r.delta, 0.0);
        let s = parse_scenario(&format!("[phases]\ntheta1 = {PI}\n")).unwrap();
        assert!((correlate_text(&s).0.closed_form + 1.0).abs() < 1e-12);
        let s = parse_scenario("amplitudes = [1.0, 3.0]\n").unwrap();
        assert!((correlate_text(&s).0.closed_form - 0.75).abs() < 1e-12);
    }

    #[test]
    fn delta_sweep_is_cosine_table() {
        let s = parse_scenario(&format!(
            "[sweep]\nvariable = \"delta\"\nstart = 0.0\nstop = {}\npoints = 9\n",
            2.0 * PI
        ))
        .unwrap();
        let rows = sweep_rows(&s).unwrap();
        assert_eq!(rows.len(), 9);
        for r in &rows {
            assert!((r.c_closed - r.var.cos()).abs() < 1e-12);
            assert!((r.p45 - 0.5 * (1.0 - r.delta.cos())).abs() < 1e-12);
        }
        assert_eq!(sweep_csv(&rows).lines().count(), 10);
    }

    #[test]
    fn number_format_round_trips() {
        for v in [0.1, -1.0 / 3.0, 2.0f64.sqrt() * 1e-7] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }
}
