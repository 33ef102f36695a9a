//! Rebuilds of the worked examples. Each report carries a `checks` object;
//! the exit status is 0 only when every check holds.

use std::f64::consts::PI;

use chainforge::io;
use chainforge::opsbuild::{build_ops, BuildOptions};
use chainforge::poly::{int, rat, Poly, Rational};
use chainforge::pst::{build_pst_chain, check_pst, shrink, FIDELITY_TOL};
use chainforge::pte::{kleiman_data, pte_interlacing_check, pte_to_pst_chain, verify_pte, PteClass, PteError};
use chainforge::chain::eigen;
use serde_json::{json, Map, Value};

use crate::args::ReproCmd;
use crate::{CliError, CmdResult, Report};

pub const E1: [i64; 5] = [-8, -4, 0, 8, 9];
pub const F1: [i64; 5] = [-7, -6, 2, 6, 10];
pub const E2: [i64; 5] = [-55, -24, -6, 32, 58];
pub const F2: [i64; 5] = [-52, -34, 9, 22, 60];

const SEVEN_SPECTRUM: [i64; 8] = [5, 4, 3, 1, 0, -2, -3, -4];

fn seven_p5() -> Poly {
    Poly::new(vec![rat(-315, 4), int(144), int(40), int(-25), rat(-5, 2), int(1)])
}

struct Checks(Map<String, Value>);

impl Checks {
    fn new() -> Self {
        Checks(Map::new())
    }

    fn add(&mut self, name: &str, ok: bool) {
        self.0.insert(name.to_string(), Value::Bool(ok));
    }

    fn all(&self) -> bool {
        self.0.values().all(|v| v == &Value::Bool(true))
    }

    fn finish(self, mut body: Value, what: &str) -> CmdResult {
        let ok = self.all();
        let failed: Vec<String> = self.0.iter().filter(|(_, v)| *v != &Value::Bool(true)).map(|(k, _)| k.clone()).collect();
        body["checks"] = Value::Object(self.0);
        let summary = if ok { format!("{what}: all checks pass") } else { format!("{what}: failed {}", failed.join(", ")) };
        Ok(Report::verdict(ok, body, summary))
    }
}

pub(crate) fn run(cmd: ReproCmd) -> CmdResult {
    match cmd {
        ReproCmd::Example61 => example_6_1(),
        ReproCmd::SevenChain => seven_chain(),
        ReproCmd::SixChain => six_chain(),
        ReproCmd::Pte5List => pte5_list(),
    }
}

fn example_6_1() -> CmdResult {
    let q_m = Poly::new(vec![rat(-5, 2), int(0), int(1)]);
    let q_top = Poly::from_ints(&[4, 0, -5, 0, 1]);
    let cert = build_ops(&q_m, &q_top, &BuildOptions::default())?;
    let c = &cert.chain;
    let ops = c.ops();
    let fid = eigen(c).amplitude(PI, 0, 2).norm();
    let pst = check_pst(c, 0, 2)?;
    let mut checks = Checks::new();
    checks.add("d_is_3", c.d() == 3);
    checks.add("p_2_matches", ops.p(2) == &q_m);
    checks.add("p_4_matches", ops.p(4) == &q_top);
    checks.add("build_verified", cert.verify());
    checks.add("fidelity_at_pi", fid >= 1.0 - FIDELITY_TOL);
    checks.add("exact_pst_certificate", pst.as_ref().is_some_and(|p| p.verify() && p.c == rat(3, 2)));
    let body = json!({
        "example": "example-6-1",
        "build": io::build_certificate_json(&cert),
        "fidelity_at_pi": fid,
        "pst": pst.as_ref().map(io::pst_certificate_json),
    });
    checks.finish(body, "3-chain with transfer 0 -> 2")
}

fn seven_chain() -> CmdResult {
    let sol = verify_pte(&E1, &F1)?;
    let b = pte_to_pst_chain(&sol)?;
    let mut sp = b.interpolant.spectrum.clone();
    sp.sort_unstable_by(|a, b| b.cmp(a));
    let mut checks = Checks::new();
    checks.add("solution_is_pte0", sol.class() == PteClass::Pte0);
    checks.add("spectrum", sp == SEVEN_SPECTRUM);
    checks.add("p_5_exact", b.interpolant.p_m == seven_p5());
    checks.add("constant_315_4", b.interpolant.c == rat(315, 4));
    checks.add("pst_0_5", b.certificate.l == 0 && b.certificate.m == 5 && b.certificate.verify());
    checks.add("fidelity", b.certificate.fidelity >= 1.0 - FIDELITY_TOL);
    checks.add("ops_reexpansion", b.chain().ops().p(5) == &b.interpolant.p_m && b.chain().ops().top() == &b.interpolant.q_top);
    checks.finish(json!({"example": "sec-6-1-seven-chain", "build": io::pst_build_json(&b)}), "7-chain with transfer 0 -> 5")
}

fn six_chain() -> CmdResult {
    let reduced = shrink(&seven_p5(), &SEVEN_SPECTRUM, 6)?;
    let b = build_pst_chain(&reduced, 5)?;
    let mut checks = Checks::new();
    checks.add("d_is_6", b.chain().d() == 6);
    checks.add("spectrum_subset", reduced.iter().all(|t| SEVEN_SPECTRUM.contains(t)));
    checks.add("pst_0_5", b.certificate.m == 5 && b.certificate.verify());
    checks.add("fidelity", b.certificate.fidelity >= 1.0 - FIDELITY_TOL);
    let body = json!({
        "example": "sec-6-1-six-chain",
        "original": SEVEN_SPECTRUM,
        "reduced": reduced,
        "build": io::pst_build_json(&b),
    });
    checks.finish(body, "6-chain with transfer 0 -> 5")
}

fn pte5_entry(e: &[i64], f: &[i64], checks: &mut Checks, tag: &str) -> Result<Value, CliError> {
    let sol = verify_pte(e, f)?;
    let (diff, fact) = kleiman_data(&sol);
    let divides = (&diff % &fact) == 0.into();
    let odd = |v: &[i64]| v.iter().filter(|x| *x % 2 != 0).count();
    checks.add(&format!("{tag}_pte0"), sol.class() == PteClass::Pte0);
    checks.add(&format!("{tag}_kleiman"), divides);
    checks.add(&format!("{tag}_interlacing"), pte_interlacing_check(sol.e(), sol.f()));
    checks.add(&format!("{tag}_one_odd_each"), odd(sol.e()) == 1 && odd(sol.f()) == 1);
    let recipe = match pte_to_pst_chain(&sol) {
        Ok(b) => json!({"feasible": true, "d": b.chain().d(), "m": b.interpolant.m, "spectrum": b.interpolant.spectrum}),
        Err(PteError::Pst(e)) => json!({"feasible": false, "reason": e.to_string()}),
        Err(e) => return Err(e.into()),
    };
    let mut v = io::pte_json(&sol);
    v["kleiman"] = json!({"p_e0_minus_p_f0": diff.to_string(), "factorial": fact.to_string(), "divides": divides});
    v["half_recipe"] = recipe;
    Ok(v)
}

fn pte5_list() -> CmdResult {
    let mut checks = Checks::new();
    let first = pte5_entry(&E1, &F1, &mut checks, "e1_f1")?;
    let second = pte5_entry(&E2, &F2, &mut checks, "e2_f2")?;
    let gap: Rational = verify_pte(&E1, &F1)?.p_e().coeff(0) - verify_pte(&E1, &F1)?.p_f().coeff(0);
    checks.add("e1_f1_gap_5040", gap == int(-5040) || gap == int(5040));
    checks.finish(json!({"example": "pte5-list", "solutions": [first, second]}), "two PTE_5 solutions")
}
