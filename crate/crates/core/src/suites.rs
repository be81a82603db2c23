use crate::combinat::{partitions_of, Partition, Q};
use crate::degeneration::{faber_hurwitz, joincut_residual, one_part_closed};
use crate::faber::psiphi::{
    build_phi, build_psi, cg_ratio_computed, cg_ratio_formula, delta_series, nonsing_check, phi1_closed,
    phi1_euler_closed, psi2_closed, reconstruct_from_delta, rhs2_closed, GenusSeries, XiTops,
};
use crate::faber::solve::solve_default;
use crate::faber::{conjecture_value, generator_ratio, FaberKey, SolveReport, SymbolTable};
use crate::hurwitz::{ClosedForm, HurwitzStrategy, Monodromy};
use crate::localization::appendix::appendix_suite;
use crate::localization::symmetrized::{check_polynomial, check_xi_top, trunc_for};
use crate::localization::trees::tree_sum;
use crate::localization::TreeSeries;
use crate::pseries::{MultiSeries, TruncProfile};
use crate::{Error, Result};

pub fn q_json(v: &Q) -> serde_json::Value {
    serde_json::json!({"num": v.numer().to_string(), "den": v.denom().to_string()})
}

/// Outcome of one exact identity check.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Check {
    pub name: String,
    pub compared: usize,
    pub failures: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Check {
        Check { name: name.into(), ..Default::default() }
    }

    pub fn compare(&mut self, label: impl AsRef<str>, a: &MultiSeries, b: &MultiSeries) {
        self.compared += 1;
        if a != b {
            let d = a.sub(b);
            let first = d.terms().iter().next().map(|(m, c)| format!("{m:?}: {c}")).unwrap_or_default();
            self.failures.push(format!("{}: residual has {} terms, first {first}", label.as_ref(), d.len()));
        }
    }

    pub fn compare_q(&mut self, label: impl AsRef<str>, a: &Q, b: &Q) {
        self.compared += 1;
        if a != b {
            self.failures.push(format!("{}: {a} != {b}", label.as_ref()));
        }
    }

    pub fn require(&mut self, label: impl AsRef<str>, ok: bool) {
        self.compared += 1;
        if !ok {
            self.failures.push(label.as_ref().to_string());
        }
    }

    pub fn passed(&self) -> bool {
        self.compared > 0 && self.failures.is_empty()
    }
}

/// Sizes shared by the suites. `max_genus` caps every genus loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub max_genus: u32,
    pub hurwitz_size: u32,
    pub xi_u_order: i32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_genus: 4, hurwitz_size: 5, xi_u_order: 6 }
    }
}

/// A named group of exact checks.
pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn run(&self, cfg: &SuiteConfig) -> Result<Vec<Check>>;
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let checks: Vec<serde_json::Value> = self
            .checks
            .iter()
            .map(|c| serde_json::json!({"name": c.name, "compared": c.compared, "passed": c.passed(), "failures": c.failures}))
            .collect();
        serde_json::json!({"suite": self.suite, "passed": self.passed(), "checks": checks})
    }
}

struct HurwitzSuite;
struct DegenerationSuite;
struct LocalizationSuite;
struct ConjectureSuite;
struct CgRatioSuite;
struct PsiPhiSuite;
struct XiTopSuite;
struct PolynomialitySuite;
struct AppendixSuite;

pub fn registry() -> Vec<Box<dyn Suite>> {
    vec![
        Box::new(HurwitzSuite),
        Box::new(DegenerationSuite),
        Box::new(LocalizationSuite),
        Box::new(ConjectureSuite),
        Box::new(CgRatioSuite),
        Box::new(PsiPhiSuite),
        Box::new(XiTopSuite),
        Box::new(PolynomialitySuite),
        Box::new(AppendixSuite),
    ]
}

pub fn suite_names() -> Vec<&'static str> {
    registry().iter().map(|s| s.name()).collect()
}

/// Run the named suites ("all" expands to every suite), in parallel, reporting in request order.
pub fn run_suites(names: &[String], cfg: &SuiteConfig) -> Result<Vec<SuiteReport>> {
    let reg = registry();
    let mut chosen: Vec<&dyn Suite> = Vec::new();
    for n in names {
        if n == "all" {
            chosen = reg.iter().map(|s| s.as_ref()).collect();
            break;
        }
        match reg.iter().find(|s| s.name() == n) {
            Some(s) => chosen.push(s.as_ref()),
            None => return Err(Error::Domain(format!("unknown suite {n:?}; known: all, {}", suite_names().join(", ")))),
        }
    }
    let reports = std::thread::scope(|sc| {
        let handles: Vec<_> = chosen
            .iter()
            .map(|s| {
                sc.spawn(move || {
                    let checks = s.run(cfg).unwrap_or_else(|e| {
                        let mut c = Check::new(s.name());
                        c.require(format!("suite aborted: {e}"), false);
                        vec![c]
                    });
                    SuiteReport { suite: s.name().to_string(), checks }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect::<Vec<_>>()
    });
    Ok(reports)
}

/// Solved tables for genus 1..=g_max: three points through genus 3, two points beyond.
pub fn solved_tables(g_max: u32) -> Result<(SymbolTable, Vec<(TreeSeries, SolveReport)>)> {
    let mut table = SymbolTable::new();
    let mut out = Vec::new();
    for g in 1..=g_max {
        let n = if g <= 3 { 3 } else { 2 };
        let (ts, rep) = solve_default(g, n)?;
        table.merge(&rep.table);
        out.push((ts, rep));
    }
    Ok((table, out))
}

impl Suite for HurwitzSuite {
    fn name(&self) -> &'static str {
        "hurwitz"
    }

    fn about(&self) -> &'static str {
        "closed forms against the monodromy count"
    }

    fn run(&self, cfg: &SuiteConfig) -> Result<Vec<Check>> {
        let (closed, mono) = (ClosedForm, Monodromy);
        let mut single = Check::new("single Hurwitz numbers");
        let mut double = Check::new("one-part double Hurwitz numbers");
        for d in 1..=cfg.hurwitz_size {
            for a in partitions_of(d) {
                single.compare_q(format!("H_{a}"), &closed.single(&a)?, &mono.single(&a)?);
                double.compare_q(format!("H_({d}),{a}"), &closed.double(&Partition::one_part(d), &a)?, &mono.double(&Partition::one_part(d), &a)?);
            }
        }
        Ok(vec![single, double])
    }
}

impl Suite for DegenerationSuite {
    fn name(&self) -> &'static str {
        "degeneration"
    }

    fn about(&self) -> &'static str {
        "one-part closed form and the join-cut residual"
    }

    fn run(&self, cfg: &SuiteConfig) -> Result<Vec<Check>> {
        let mut one = Check::new("one-part closed form");
        let mut jc = Check::new("join-cut residual through z^6");
        let prof = TruncProfile { z_max: 6, n_max: 6, ..Default::default() };
        for g in 1..=cfg.max_genus.min(3) {
            for d in 1..=6 {
                one.compare_q(format!("F^{g}_({d})"), &faber_hurwitz(g, &Partition::one_part(d))?, &one_part_closed(g, d)?);
            }
            let r = joincut_residual(g, &prof)?;
            jc.compare(format!("genus {g}"), &r, &r.ring().zero());
        }
        Ok(vec![one, jc])
    }
}

impl Suite for LocalizationSuite {
    fn name(&self) -> &'static str {
        "localization"
    }

    fn about(&self) -> &'static str {
        "predicted Faber-Hurwitz numbers and tree sums against the join-cut recursion"
    }

    fn run(&self, cfg: &SuiteConfig) -> Result<Vec<Check>> {
        let mut pred = Check::new("predicted F^g_alpha, |alpha| <= 5, l(alpha) <= 3");
        let mut trees = Check::new("tree sums, |alpha| <= 4, l(alpha) <= 3");
        let g_max = cfg.max_genus.min(3);
        let (table, solves) = solved_tables(g_max)?;
        for (ts, rep) in &solves {
            let g = rep.g;
            pred.require(format!("genus {g} full rank"), rep.free.is_empty());
            let p = ts.predicted_fh(g)?;
            for d in 1..=5 {
                for a in partitions_of(d).into_iter().filter(|a| a.len() <= 3) {
                    let lin = p.get(&a).ok_or_else(|| Error::Truncation(format!("no prediction for {a}")))?;
                    pred.compare_q(format!("F^{g}_{a}"), &lin.eval(&table)?, &faber_hurwitz(g, &a)?);
                }
            }
            if g <= 2 {
                for d in 1..=4 {
                    for a in partitions_of(d).into_iter().filter(|a| a.len() <= 3) {
                        trees.compare_q(format!("tree sum F^{g}_{a}"), &tree_sum(g, &a, &table)?, &faber_hurwitz(g, &a)?);
                    }
                }
            }
        }
        Ok(vec![pred, trees])
    }
}

/// The six values quoted for the conjecture regression.
pub const REGRESSION_VALUES: [(&str, i64, i64); 6] =
    [("2;1,1;0", 3, 1), ("3;2,1;0", 5, 1), ("4;3,1;0", 7, 1), ("4;2,2;0", 35, 3), ("2;1,1,1;0", 12, 1), ("3;2,1,1;0", 30, 1)];

impl Suite for ConjectureSuite {
    fn name(&self) -> &'static str {
        "conjecture-regression"
    }

    fn about(&self) -> &'static str {
        "solved lambda-free symbols against the conjectured closed form"
    }

    fn run(&self, cfg: &SuiteConfig) -> Result<Vec<Check>> {
        let (table, _) = solved_tables(cfg.max_genus.min(4))?;
        let mut all = Check::new("positive top symbols");
        for (k, v, _) in table.iter() {
            if k.k == 0 && !k.a.contains(&0) {
                all.compare_q(k.to_string(), v, &conjecture_value(k.g, &k.a)?);
            }
        }
        let mut quoted = Check::new("quoted values");
        for (k, n, d) in REGRESSION_VALUES {
            let key: FaberKey = k.parse()?;
            if key.g <= cfg.max_genus {
                quoted.compare_q(k, &table.get(&key)?, &Q::new(n.into(), d.into()));
            }
        }
        let mut sd = Check::new("string and dilaton");
        for (k, a, b) in table.string_dilaton_pairs() {
            sd.compare_q(k.to_string(), &a, &b);
        }
        sd.require("table is non-empty", !table.is_empty());
        Ok(vec![all, quoted, sd])
    }
}

impl Suite for CgRatioSuite {
    fn name(&self) -> &'static str {
        "cg-ratio"
    }

    fn about(&self) -> &'static str {
        "generator ratio 2^g/(g-1)! from closed forms and from computed series"
    }

    fn run(&self, cfg: &SuiteConfig) -> Result<Vec<Check>> {
        let mut f = Check::new("formula, g <= 5");
        for g in 1..=5 {
            f.compare_q(format!("g = {g}"), &cg_ratio_formula(g), &generator_ratio(g));
        }
        let g_max = cfg.max_genus.min(3);
        let tops = XiTops::for_genera(g_max, 0)?;
        let mut c = Check::new("computed series");
        for g in 1..=g_max {
            c.compare_q(format!("g = {g}"), &cg_ratio_computed(g, &tops)?, &generator_ratio(g));
        }
        Ok(vec![f, c])
    }
}

fn compare_genus(c: &mut Check, what: &str, a: &GenusSeries, b: &GenusSeries) {
    for g in a.keys().chain(b.keys()).collect::<std::collections::BTreeSet<_>>() {
        match (a.get(g), b.get(g)) {
            (Some(x), Some(y)) => c.compare(format!("{what} t^{}", 2 * g), x, y),
            _ => c.require(format!("{what} t^{} missing on one side", 2 * g), false),
        }
    }
}

impl Suite for PsiPhiSuite {
    fn name(&self) -> &'static str {
        "psi-phi"
    }

    fn about(&self) -> &'static str {
        "localization against Faber generating series for one and two points"
    }

    fn run(&self, cfg: &SuiteConfig) -> Result<Vec<Check>> {
        let g1 = cfg.max_genus.min(4);
        let g2 = cfg.max_genus.min(3);
        let (table, _) = solved_tables(g1)?;
        let tops = XiTops::for_genera(g1, g2)?;
        let phi1 = build_phi(1, g1)?;
        let psi1 = build_psi(1, g1, &table, &tops)?;
        let phi2 = build_phi(2, g2)?;
        let psi2 = build_psi(2, g2, &table, &tops)?;
        let mut one = Check::new("one point");
        compare_genus(&mut one, "Psi_1 - Phi_1", &psi1, &phi1);
        compare_genus(&mut one, "Phi_1 closed form", &phi1, &phi1_closed(g1));
        let euler: GenusSeries = phi1.iter().map(|(g, p)| Ok((*g, p.euler("y1")?))).collect::<Result<_>>()?;
        compare_genus(&mut one, "y dPhi_1/dy", &euler, &phi1_euler_closed(g1)?);
        let mut two = Check::new("two points");
        compare_genus(&mut two, "Psi_2 - Phi_2", &psi2, &phi2);
        compare_genus(&mut two, "Psi_2 closed form", &psi2, &psi2_closed(g2)?);
        let rhs = rhs2_closed(g2)?;
        let dd = |s: &GenusSeries| delta_series(&delta_series(s, 2), 3);
        compare_genus(&mut two, "D3 D2 Phi_2", &dd(&phi2), &rhs);
        compare_genus(&mut two, "D3 D2 Psi_2", &dd(&psi2), &rhs);
        compare_genus(&mut two, "reconstructed Phi_2", &reconstruct_from_delta(&rhs)?, &phi2);
        let mut rank = Check::new("triangular block of the n-point system");
        for g in 2..=5 {
            for n in 2..=3 {
                rank.require(format!("g = {g}, n = {n}"), nonsing_check(g, n).triangular);
            }
        }
        Ok(vec![one, two, rank])
    }
}

impl Suite for XiTopSuite {
    fn name(&self) -> &'static str {
        "xi-top"
    }

    fn about(&self) -> &'static str {
        "top terms of the transformed xi series against their closed forms"
    }

    fn run(&self, cfg: &SuiteConfig) -> Result<Vec<Check>> {
        let mut c = Check::new(format!("u^m T Lambda xi^(i)_m through u^{}", cfg.xi_u_order));
        for m in 1..=2 {
            for i in 0..=3 {
                let bad = check_xi_top(m, i, cfg.xi_u_order, trunc_for(m, i, cfg.xi_u_order))?;
                c.require(format!("m = {m}, i = {i}, mismatched orders {bad:?}"), bad.is_empty());
            }
        }
        Ok(vec![c])
    }
}

impl Suite for PolynomialitySuite {
    fn name(&self) -> &'static str {
        "polynomiality"
    }

    fn about(&self) -> &'static str {
        "C Lambda xi^(i)_m is unchanged by a truncation bump"
    }

    fn run(&self, _cfg: &SuiteConfig) -> Result<Vec<Check>> {
        let mut c = Check::new("truncation bump");
        for m in 1..=2 {
            for i in 0..=3 {
                let r = check_polynomial(m, i, trunc_for(m, i, 4));
                c.require(format!("m = {m}, i = {i}: {r:?}"), matches!(r, Ok(n) if n > 0));
            }
        }
        Ok(vec![c])
    }
}

impl Suite for AppendixSuite {
    fn name(&self) -> &'static str {
        "appendix"
    }

    fn about(&self) -> &'static str {
        "tree function and genus 0 series identities"
    }

    fn run(&self, _cfg: &SuiteConfig) -> Result<Vec<Check>> {
        appendix_suite()
    }
}
