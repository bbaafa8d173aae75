//! Orchestration of one job: parse, run the requested pipeline stage, collect
//! a canonical report.

use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::annbs::{ann_fs_order1, beta_polynomial, bs_polynomial, euler_field, root_window_check, sharp_symbols, BSPolyData, EulerField, WindowVerdict};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::hodge::{build_gamma, hodge_ideal_zero, hodge_step, GammaIdeal, GammaVariant, Hypotheses};
use crate::oracle::{hodge_via_v0, lookup, newton_multiplier, newton_multiplier_left, registry, GraphContext, IdentityCheck, OracleContext, TruncationBudget};
use crate::parse::JobConfig;
use crate::weyl::{AlgebraSignature, Poly, WeylElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Bs,
    Ann,
    Hodge0,
    Hodge,
    Check,
    Verify { selector: Option<String> },
    Multiplier { c: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Overrides `k_max` from the job file.
    pub k: Option<u32>,
    /// Multiplies the `e` and `m` fields of the budget.
    pub budget_scale: u32,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { k: None, budget_scale: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Text(String),
    List(Vec<String>),
}

/// Ordered key/value report. Text output keeps insertion order; JSON output
/// sorts keys.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, Entry)>,
}

impl Report {
    pub fn text(&mut self, key: &str, value: impl Into<String>) {
        self.entries.push((key.to_string(), Entry::Text(value.into())));
    }

    pub fn list(&mut self, key: &str, values: Vec<String>) {
        self.entries.push((key.to_string(), Entry::List(values)));
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn entries(&self) -> &[(String, Entry)] {
        &self.entries
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            match v {
                Entry::Text(t) => writeln!(out, "{k}: {t}").unwrap(),
                Entry::List(items) if items.is_empty() => writeln!(out, "{k}: []").unwrap(),
                Entry::List(items) => {
                    writeln!(out, "{k}:").unwrap();
                    for item in items {
                        writeln!(out, "  - {item}").unwrap();
                    }
                }
            }
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut map = Map::new();
        for (k, v) in &self.entries {
            let value = match v {
                Entry::Text(t) => Value::String(t.clone()),
                Entry::List(items) => Value::Array(items.iter().cloned().map(Value::String).collect()),
            };
            map.insert(k.clone(), value);
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("strings always serialize");
        s.push('\n');
        s
    }
}

/// A report together with the error that stopped the run, if any. The
/// report holds everything computed before the error.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub error: Option<Error>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(0, Error::exit_code)
    }
}

/// Runs the full Hodge pipeline.
pub fn run_job(config: &JobConfig) -> Outcome {
    run(&Command::Hodge, config, &RunOptions::default())
}

pub fn run(cmd: &Command, config: &JobConfig, opts: &RunOptions) -> Outcome {
    let mut job = Job { cfg: config, opts, report: Report::default(), names: config.vars.clone() };
    let error = job.dispatch(cmd).err();
    if let Some(e) = &error {
        job.report.text("error", e.to_string());
        job.report.text("exit_code", e.exit_code().to_string());
    }
    Outcome { report: job.report, error }
}

struct Job<'a> {
    cfg: &'a JobConfig,
    opts: &'a RunOptions,
    report: Report,
    names: Vec<String>,
}

struct Base {
    f: Poly,
    ann: Vec<WeylElement>,
    bs: BSPolyData,
    window: WindowVerdict,
    euler: Option<EulerField>,
}

impl Job<'_> {
    fn dispatch(&mut self, cmd: &Command) -> Result<()> {
        self.header(cmd);
        match cmd {
            Command::Multiplier { c } => self.multiplier(c),
            Command::Bs => self.base().map(|_| ()),
            Command::Ann => self.ann(),
            Command::Check => self.check(),
            Command::Hodge0 => self.hodge(true),
            Command::Hodge => self.hodge(false),
            Command::Verify { selector } => self.verify(selector.as_deref()),
        }
    }

    fn k_max(&self) -> u32 {
        self.opts.k.unwrap_or(self.cfg.k_max)
    }

    fn budget(&self) -> TruncationBudget {
        TruncationBudget::new(self.cfg.budget_e, self.cfg.budget_d, self.cfg.budget_m).scaled(self.opts.budget_scale)
    }

    fn poly(&self, p: &Poly) -> String {
        p.canonical_string(&self.names)
    }

    fn op(&self, w: &WeylElement) -> String {
        w.canonical_string(&self.names)
    }

    fn header(&mut self, cmd: &Command) {
        let name = match cmd {
            Command::Bs => "bs",
            Command::Ann => "ann",
            Command::Hodge0 => "hodge0",
            Command::Hodge => "hodge",
            Command::Check => "check",
            Command::Verify { .. } => "verify",
            Command::Multiplier { .. } => "multiplier",
        };
        let yes_no = |b: bool| if b { "asserted" } else { "not asserted" }.to_string();
        self.report.text("command", name);
        self.report.list("vars", self.names.clone());
        self.report.text("alpha", self.cfg.alpha.to_string());
        self.report.text("assertion.parametrically_prime", yes_no(self.cfg.assert_parametrically_prime));
        self.report.text("assertion.ann_complete", yes_no(self.cfg.assert_ann_complete));
    }

    fn f(&mut self) -> Result<Poly> {
        let f = self.cfg.f()?;
        self.report.text("f", self.poly(&f));
        Ok(f)
    }

    fn base(&mut self) -> Result<Base> {
        let f = self.f()?;
        let ann = ann_fs_order1(&f, &Rational::from_integer(0.into()))?;
        let bs = bs_polynomial(&f, &ann, self.cfg.assert_ann_complete)?;
        self.report.text("bs.b", bs.b.to_string());
        self.report.list("bs.roots", bs.roots.entries.iter().map(|(r, m)| format!("{r} (multiplicity {m})")).collect());
        self.report.text("bs.certificate", self.op(&bs.certificate));
        self.report.text("bs.certificate_verified", "true");
        let beta = beta_polynomial(&bs, &self.cfg.alpha);
        self.report.text("beta", beta.to_string());
        let window = root_window_check(&bs, &self.cfg.alpha);
        self.report.text(
            "hypothesis.window",
            match &window {
                WindowVerdict::Pass => "pass".to_string(),
                WindowVerdict::Fail { offending } => {
                    let roots: Vec<String> = offending.iter().map(|r| r.to_string()).collect();
                    format!("fail (roots {})", roots.join(", "))
                }
            },
        );
        let bound = f.total_degree().unwrap_or(1).max(1);
        let euler = euler_field(&f, bound).ok();
        let sig = AlgebraSignature::plain(f.nvars());
        self.report.text(
            "hypothesis.euler_field",
            match &euler {
                Some(e) => self.op(&e.operator(sig)),
                None => format!("none with coefficients of degree <= {bound}"),
            },
        );
        Ok(Base { f, ann, bs, window, euler })
    }

    fn require_window(&self, base: &Base) -> Result<()> {
        match &base.window {
            WindowVerdict::Pass => Ok(()),
            WindowVerdict::Fail { offending } => Err(Error::WindowFailure { offending: offending.clone() }),
        }
    }

    fn ann(&mut self) -> Result<()> {
        let base = self.base()?;
        let gens: Vec<String> = base.ann.iter().map(|g| self.op(g)).collect();
        self.report.list("ann.fs", gens);
        let shifted: Vec<WeylElement> = base.ann.iter().map(|g| g.shift_s(&-Rational::from_integer(1.into()))).collect();
        self.report.list("ann.fs_minus_1", shifted.iter().map(|g| self.op(g)).collect());
        let symbols = sharp_symbols(&shifted)?;
        self.report.list("ann.sharp_symbols", symbols.iter().map(|g| self.op(g)).collect());
        Ok(())
    }

    fn check(&mut self) -> Result<()> {
        let base = self.base()?;
        self.require_window(&base)?;
        let k_max = self.k_max();
        if k_max >= 1 {
            if base.euler.is_none() {
                let bound = base.f.total_degree().unwrap_or(1).max(1);
                return Err(Error::NoEulerField { bound });
            }
            if !self.cfg.assert_parametrically_prime {
                return Err(Error::MissingHypothesis("steps k >= 1 need the parametric primality assertion".into()));
            }
        }
        self.report.text("check", format!("hypotheses hold for k <= {k_max}"));
        Ok(())
    }

    fn gamma(&self, base: &Base, variant: GammaVariant) -> Result<GammaIdeal> {
        let hyp = Hypotheses {
            window_passed: false,
            euler_field: base.euler.clone(),
            parametrically_prime_asserted: self.cfg.assert_parametrically_prime,
            ann_complete_asserted: self.cfg.assert_ann_complete,
        };
        build_gamma(&base.f, &self.cfg.alpha, &base.bs, &base.ann, hyp, variant)
    }

    fn hodge(&mut self, zero_only: bool) -> Result<()> {
        let base = self.base()?;
        self.require_window(&base)?;
        let standard = self.gamma(&base, GammaVariant::Standard)?;
        let shifted = self.gamma(&base, GammaVariant::Shifted)?;
        self.report.list("gamma.components", standard.components().iter().map(|g| self.op(g)).collect());
        self.report.list("gamma.basis", standard.gb().iter().map(|g| self.op(g)).collect());

        let ideal0 = hodge_ideal_zero(&standard)?;
        self.report.list("hodge0.ideal", ideal0.iter().map(|p| self.poly(p)).collect());
        let alpha = &self.cfg.alpha;
        let one = Rational::from_integer(1.into());
        // two normalizations of the multiplier ideal, reported side by side
        for (key, c) in [("newton.alpha_minus_eps", alpha.clone()), ("newton.one_plus_alpha_minus_eps", &one + alpha)] {
            let value = match newton_multiplier_left(&base.f, &c) {
                Ok(gens) => gens.iter().map(|p| self.poly(p)).collect(),
                Err(e) => vec![format!("unavailable: {e}")],
            };
            self.report.list(key, value);
        }

        let k_max = if zero_only { 0 } else { self.k_max() };
        let g = GraphContext::new(base.f.clone(), alpha.clone())?;
        let beta = beta_polynomial(&base.bs, alpha);
        let budget = self.budget();
        self.report.text("budget", format!("e={} d={} m={}", budget.e, budget.d, budget.m));
        let degree_bound = self.cfg.degree_bound;
        for k in 0..=k_max {
            let a = hodge_step(&standard, k, degree_bound)?;
            let prefix = format!("hodge.k{k}");
            self.report.list(&format!("{prefix}.operators"), a.operator_gens.iter().map(|g| self.op(g)).collect());
            self.report.text(&format!("{prefix}.pole"), a.module.pole_level.to_string());
            self.report.list(&format!("{prefix}.numerators"), a.module.numerators.iter().map(|p| self.poly(p)).collect());
            if k == 0 && a.module.numerators != ideal0 {
                return Err(Error::Inconsistency("step 0 differs from the ideal Gamma ∩ O".into()));
            }
            let b = hodge_step(&shifted, k, degree_bound)?;
            if a.module != b.module {
                return Err(Error::Inconsistency(format!("the two Gamma variants disagree at k = {k}")));
            }
            let v = hodge_via_v0(&g, &beta, k, budget)?;
            let v_next = hodge_via_v0(&g, &beta, k, budget.next())?;
            if v.numerators != v_next.numerators {
                return Err(Error::BudgetInconclusive(format!("V^0 route still growing at k = {k}")));
            }
            if v.numerators != a.module.numerators || v.pole_level != a.module.pole_level {
                return Err(Error::Inconsistency(format!("V^0 route disagrees with Gamma at k = {k}")));
            }
            self.report.text(&format!("{prefix}.cross_route"), "gamma, shifted gamma and V^0 routes agree (stable at budget+1)");
        }
        Ok(())
    }

    fn verify(&mut self, selector: Option<&str>) -> Result<()> {
        let checks: Vec<Box<dyn IdentityCheck>> = match selector {
            Some(name) => vec![lookup(name)?],
            None => registry(),
        };
        let base = self.base()?;
        let cx = OracleContext {
            f: base.f.clone(),
            alpha: self.cfg.alpha.clone(),
            k: self.k_max(),
            bs: base.bs.clone(),
            ann: base.ann.clone(),
            euler: base.euler.clone(),
            budget: self.budget(),
        };
        let b = cx.budget;
        self.report.text("budget", format!("e={} d={} m={}", b.e, b.d, b.m));
        self.report.text("k", cx.k.to_string());
        let window_ok = base.window == WindowVerdict::Pass;
        let mut first_error = None;
        for check in checks {
            let key = format!("verify.{}", check.name());
            if check.needs_window() && !window_ok {
                if selector.is_some() {
                    return Err(self.require_window(&base).unwrap_err());
                }
                self.report.text(&key, "skipped (root window fails)");
                continue;
            }
            match check.verify(&cx) {
                Ok(v) => self.report.text(&key, v.to_string()),
                Err(e) => {
                    self.report.text(&key, format!("error ({e})"));
                    first_error.get_or_insert(e);
                }
            }
        }
        first_error.map_or(Ok(()), Err)
    }

    fn multiplier(&mut self, c: &Rational) -> Result<()> {
        let f = self.f()?;
        self.report.text("c", c.to_string());
        let at = newton_multiplier(&f, c)?;
        self.report.list("multiplier", at.iter().map(|p| self.poly(p)).collect());
        let left = newton_multiplier_left(&f, c)?;
        self.report.list("multiplier.left_limit", left.iter().map(|p| self.poly(p)).collect());
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_job;

    #[test]
    fn smooth_half() {
        let cfg = parse_job("vars: x\nf: x\nalpha: 1/2\n").unwrap();
        let out = run(&Command::Hodge0, &cfg, &RunOptions::default());
        assert!(out.error.is_none(), "{:?}", out.error);
        assert_eq!(out.report.get("hodge0.ideal"), Some(&Entry::List(vec!["1*x^1".into()])));
        assert_eq!(out.exit_code(), 0);
    }

    #[test]
    fn missing_assertion() {
        let cfg = parse_job("vars: x, y\nf: x^2 + y^3\nk_max: 1\n").unwrap();
        let out = run(&Command::Hodge, &cfg, &RunOptions::default());
        assert_eq!(out.exit_code(), 2);
        assert!(out.report.get("hodge.k0.numerators").is_some());
    }

    #[test]
    fn json_is_sorted() {
        let mut r = Report::default();
        r.text("b", "2");
        r.list("a", vec!["1".into()]);
        assert_eq!(r.render_json(), "{\n  \"a\": [\n    \"1\"\n  ],\n  \"b\": \"2\"\n}\n");
        assert_eq!(r.render_text(), "b: 2\na:\n  - 1\n");
    }
}
