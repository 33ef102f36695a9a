use std::path::Path;

use chainforge::chain::{eigen, Chain, Eigenvalue};
use chainforge::cospec::{construct_cospectral, exact_criteria, extend_cospectral, is_cospectral, CheckMode, CospecError};
use chainforge::io;
use chainforge::opsbuild::{build_ops, BuildError, BuildOptions, MuStrategy};
use chainforge::poly::{parse_rational, Poly, Rational};
use chainforge::pst::{build_pst_chain, check_pst, pst_interpolant, scan_no_pst_half, search_transfer_time, shrink, PstError, FIDELITY_TOL};
use chainforge::pte::{
    chain_to_pte, kleiman_data, pte_interlacing_check, pte_poly_gap, pte_to_chain, pte_to_chain_even, pte_to_pst_chain,
    search_pte, verify_pte, ClassFilter, PteError,
};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::args::*;
use crate::{Body, CliError, CmdResult, Report};

/// Files read during a run, with their digests.
#[derive(Default, Debug)]
pub(crate) struct Context {
    pub inputs: Vec<(String, String)>,
}

impl Context {
    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push((path.display().to_string(), hex::encode(Sha256::digest(&bytes))));
        String::from_utf8(bytes).map_err(|_| CliError(format!("{} is not UTF-8", path.display())))
    }

    fn read_json(&mut self, path: &Path) -> Result<Value, CliError> {
        let text = self.read(path)?;
        Ok(io::parse_json(&text)?)
    }
}

pub(crate) fn dispatch(cmd: &Command, ctx: &mut Context) -> CmdResult {
    match cmd {
        Command::Build(a) => build(a, ctx),
        Command::Chain(c) => chain_cmd(c, ctx),
        Command::Cospec(c) => cospec_cmd(c, ctx),
        Command::Pst(c) => pst_cmd(c, ctx),
        Command::Pte(c) => pte_cmd(c, ctx),
        Command::Repro(r) => crate::repro::run(*r),
        Command::Fidelity(a) => fidelity(a, ctx),
    }
}

fn rational_list(s: &str) -> Result<Vec<Rational>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| parse_rational(x).map_err(CliError::from)).collect()
}

fn int_list(s: &str) -> Result<Vec<i64>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| CliError(format!("{x:?} is not an integer"))))
        .collect()
}

fn poly_arg(s: &str) -> Result<Poly, CliError> {
    match s.trim().strip_prefix("roots:") {
        Some(rest) => Ok(Poly::from_roots(&rational_list(rest)?)),
        None => Ok(Poly::new(rational_list(s)?)),
    }
}

fn load_chain(input: &ChainInput, ctx: &mut Context) -> Result<Chain, CliError> {
    match (&input.chain, &input.a, input.path) {
        (Some(p), None, None) => Ok(io::chain_from(&ctx.read_json(p)?)?),
        (None, Some(a), None) => {
            let l = input.lambda_sq.as_deref().unwrap_or("");
            Ok(Chain::new(rational_list(a)?, rational_list(l)?)?)
        }
        (None, None, Some(n)) if n > 0 => Ok(Chain::path(n)),
        _ => Err(CliError("give exactly one of --chain FILE, --a LIST [--lambda-sq LIST], --path N".into())),
    }
}

fn load_pte(input: &PteInput, ctx: &mut Context) -> Result<(Vec<i64>, Vec<i64>), CliError> {
    match (&input.file, &input.e, &input.f) {
        (Some(p), None, None) => Ok(io::pte_sets_from(&ctx.read_json(p)?)?),
        (None, Some(e), Some(f)) => Ok((int_list(e)?, int_list(f)?)),
        _ => Err(CliError("give either --file FILE or both --e LIST and --f LIST".into())),
    }
}

fn build(a: &BuildArgs, ctx: &mut Context) -> CmdResult {
    let (q_m, q_top) = match (&a.file, &a.qm, &a.qtop) {
        (Some(p), None, None) => {
            let v = ctx.read_json(p)?;
            let get = |k: &str| v.get(k).ok_or_else(|| CliError(format!("missing {k:?}")));
            (io::poly_from(get("q_m")?)?, io::poly_from(get("q_top")?)?)
        }
        (None, Some(m), Some(t)) => (poly_arg(m)?, poly_arg(t)?),
        _ => return Err(CliError("give either --file FILE or both --qm and --qtop".into())),
    };
    let opts = BuildOptions {
        mu: match &a.mu {
            Some(s) => MuStrategy::Supplied(rational_list(s)?),
            None => MuStrategy::Midpoint,
        },
        rho: a.rho.as_deref().map(rational_list).transpose()?,
        lambda_cap: a.lambda_cap.as_deref().map(parse_rational).transpose()?,
    };
    match build_ops(&q_m, &q_top, &opts) {
        Ok(cert) => Ok(Report::ok(io::build_certificate_json(&cert), format!("built a {}-chain", cert.d))),
        Err(BuildError::InterlacingViolation) => Ok(Report::negative(
            json!({"built": false, "reason": "q_m and q_top do not strongly interlace"}),
            "no chain: the inputs do not strongly interlace",
        )),
        Err(e) => Err(e.into()),
    }
}

fn eigen_json(c: &Chain) -> Value {
    let sp = eigen(c);
    let values: Vec<Value> = sp
        .eigenvalues()
        .iter()
        .map(|e| match e {
            Eigenvalue::Exact(r) => json!({"exact": io::rational_json(r), "approx": e.approx()}),
            Eigenvalue::Isolated { lo, hi, approx } => {
                json!({"interval": [io::rational_json(lo), io::rational_json(hi)], "approx": approx})
            }
            Eigenvalue::Numeric(x) => json!({"approx": x}),
        })
        .collect();
    json!({
        "chain": io::chain_json(c),
        "eigenvalues": values,
        "vectors": sp.vectors(),
        "residual": sp.residual(c),
        "orthonormality_error": sp.orthonormality_error(),
    })
}

fn chain_cmd(cmd: &ChainCmd, ctx: &mut Context) -> CmdResult {
    match cmd {
        ChainCmd::Eigen(input) => {
            let c = load_chain(input, ctx)?;
            Ok(Report::ok(eigen_json(&c), format!("spectrum of a {}-chain", c.d())))
        }
        ChainCmd::Ops(input) => {
            let c = load_chain(input, ctx)?;
            let polys: Vec<Value> = c.ops().polys().iter().map(io::poly_json).collect();
            Ok(Report::ok(json!({"chain": io::chain_json(&c), "ops": polys}), format!("p_0..p_{}", c.d() + 1)))
        }
        ChainCmd::Alpha { input, vertex } => {
            let c = load_chain(input, ctx)?;
            let f = c.alpha(*vertex)?;
            Ok(Report::ok(
                json!({"vertex": vertex, "num": io::poly_json(f.num()), "den": io::poly_json(f.den())}),
                format!("alpha at vertex {vertex}"),
            ))
        }
        ChainCmd::Amplitude { input, l, m, t } => {
            let c = load_chain(input, ctx)?;
            let amp = chainforge::chain::transition_amplitude(&c, *t, *l, *m)?;
            Ok(Report::ok(
                json!({"l": l, "m": m, "t": t, "re": amp.re, "im": amp.im, "abs": amp.norm()}),
                format!("|amplitude| = {:.12}", amp.norm()),
            ))
        }
    }
}

fn mode(m: Mode) -> CheckMode {
    match m {
        Mode::Exact => CheckMode::Exact,
        Mode::Numeric => CheckMode::Numeric,
        Mode::Auto => CheckMode::Auto,
    }
}

fn cospec_cmd(cmd: &CospecCmd, ctx: &mut Context) -> CmdResult {
    match cmd {
        CospecCmd::Check { input, l, m, mode: md } => {
            let c = load_chain(input, ctx)?;
            let criteria = exact_criteria(&c, *l, *m)?;
            match is_cospectral(&c, *l, *m, mode(*md))? {
                Some(cert) => {
                    let mut v = io::cospectral_json(&cert);
                    v["cospectral"] = json!(true);
                    v["exact_criteria"] = json!(criteria);
                    Ok(Report::ok(v, format!("{l} and {m} are cospectral")))
                }
                None => Ok(Report::negative(
                    json!({"cospectral": false, "l": l, "m": m, "exact_criteria": criteria}),
                    format!("{l} and {m} are not cospectral"),
                )),
            }
        }
        CospecCmd::Construct { l, m, d } => match construct_cospectral(*l, *m, *d) {
            Ok(out) => Ok(Report::ok(
                json!({
                    "chain": io::chain_json(&out.chain),
                    "certificate": io::cospectral_json(&out.certificate),
                    "reflected": out.reflected,
                }),
                format!("{d}-chain with {l} and {m} cospectral"),
            )),
            Err(CospecError::InfeasiblePosition { .. }) => Ok(Report::negative(
                json!({"constructed": false, "reason": format!("no {d}-chain has {l} and {m} cospectral; need l < d/2 < m")}),
                "infeasible position",
            )),
            Err(e) => Err(e.into()),
        },
        CospecCmd::Extend { input, l, m, k } => {
            let c = load_chain(input, ctx)?;
            match extend_cospectral(&c, *l, *m, *k) {
                Ok(ext) => {
                    let cert = is_cospectral(&ext, l + k, m + k, CheckMode::Auto)?
                        .ok_or_else(|| CliError("extension lost cospectrality".into()))?;
                    Ok(Report::ok(
                        json!({"chain": io::chain_json(&ext), "certificate": io::cospectral_json(&cert)}),
                        format!("{}-chain with {} and {} cospectral", ext.d(), l + k, m + k),
                    ))
                }
                Err(CospecError::NotCospectralInput { .. }) => Ok(Report::negative(
                    json!({"extended": false, "reason": format!("{l} and {m} are not cospectral in the input")}),
                    "input pair is not cospectral",
                )),
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn pst_negative(e: PstError) -> CmdResult {
    match e {
        PstError::Infeasible(why) => Ok(Report::negative(
            json!({"feasible": false, "reason": why.to_string()}),
            format!("infeasible: {why}"),
        )),
        PstError::NotEnoughSlack { .. } => Ok(Report::negative(json!({"feasible": false, "reason": e.to_string()}), e.to_string())),
        e => Err(e.into()),
    }
}

fn pst_cmd(cmd: &PstCmd, ctx: &mut Context) -> CmdResult {
    match cmd {
        PstCmd::Check { input, l, m, steps } => {
            let c = load_chain(input, ctx)?;
            match check_pst(&c, *l, *m) {
                Ok(Some(cert)) => {
                    let mut v = io::pst_certificate_json(&cert);
                    v["pst"] = json!(true);
                    v["evidence"] = json!("exact");
                    let ok = cert.fidelity >= 1.0 - FIDELITY_TOL;
                    Ok(Report::verdict(ok, v, format!("transfer {l} -> {m}, fidelity {:.12}", cert.fidelity)))
                }
                Ok(None) => Ok(Report::negative(json!({"pst": false, "l": l, "m": m}), format!("no transfer between {l} and {m}"))),
                Err(PstError::IrrationalSpectrum) => {
                    let num = search_transfer_time(&c, *l, *m, *steps)?;
                    let ok = num.fidelity >= 1.0 - FIDELITY_TOL;
                    Ok(Report::verdict(
                        ok,
                        json!({
                            "pst": ok,
                            "evidence": "numeric",
                            "time": num.time,
                            "fidelity": num.fidelity,
                            "phase": num.phase,
                        }),
                        format!("irrational spectrum; numeric best fidelity {:.12} at t = {:.9}", num.fidelity, num.time),
                    ))
                }
                Err(e) => Err(e.into()),
            }
        }
        PstCmd::Build { spectrum, m } => match build_pst_chain(&int_list(spectrum)?, *m) {
            Ok(b) => Ok(Report::ok(io::pst_build_json(&b), format!("{}-chain with transfer 0 -> {m}", b.chain().d()))),
            Err(e) => pst_negative(e),
        },
        PstCmd::Shrink { spectrum, m, d_target } => {
            let sp = int_list(spectrum)?;
            let ip = match pst_interpolant(&sp, *m) {
                Ok(ip) => ip,
                Err(e) => return pst_negative(e),
            };
            let reduced = match shrink(&ip.p_m, &sp, *d_target) {
                Ok(r) => r,
                Err(e) => return pst_negative(e),
            };
            match build_pst_chain(&reduced, *m) {
                Ok(b) => Ok(Report::ok(
                    json!({"original": ip.spectrum, "reduced": reduced, "build": io::pst_build_json(&b)}),
                    format!("{d_target}-chain with transfer 0 -> {m}"),
                )),
                Err(e) => pst_negative(e),
            }
        }
        PstCmd::Scan { d, bound } => {
            let hits = scan_no_pst_half(*d, *bound);
            let m = (d + 2) / 2;
            let mut lines: Vec<Value> = hits.iter().map(|h| json!({"spectrum": h, "m": m})).collect();
            lines.push(json!({"summary": {"d": d, "bound": bound, "m": m, "count": hits.len()}}));
            Ok(Report {
                body: Body::Lines(lines),
                negative: hits.is_empty(),
                summary: format!("{} feasible spectra for d = {d}, bound {bound}", hits.len()),
            })
        }
    }
}

fn pte_negative(e: PteError) -> CmdResult {
    match e {
        PteError::PowerSumMismatch { .. }
        | PteError::Identical
        | PteError::WrongClass { .. }
        | PteError::ParityMismatch { .. }
        | PteError::NotPeriodicCospectral { .. }
        | PteError::NoInteriorElement
        | PteError::Pst(PstError::Infeasible(_)) => {
            Ok(Report::negative(json!({"valid": false, "reason": e.to_string()}), e.to_string()))
        }
        e => Err(e.into()),
    }
}

fn pte_cmd(cmd: &PteCmd, ctx: &mut Context) -> CmdResult {
    match cmd {
        PteCmd::Verify(input) => {
            let (e, f) = load_pte(input, ctx)?;
            match verify_pte(&e, &f) {
                Ok(sol) => {
                    let (diff, fact) = kleiman_data(&sol);
                    let mut v = io::pte_json(&sol);
                    v["valid"] = json!(true);
                    v["gap"] = json!(pte_poly_gap(sol.e(), sol.f()).map(|g| g.to_string()));
                    v["interlacing"] = json!(pte_interlacing_check(sol.e(), sol.f()));
                    v["kleiman"] = json!({"p_e0_minus_p_f0": diff.to_string(), "factorial": fact.to_string(), "divides": (&diff % &fact) == 0.into()});
                    Ok(Report::ok(v, format!("valid PTE_{} solution, class {}", sol.n(), sol.class().name())))
                }
                Err(e) => pte_negative(e),
            }
        }
        PteCmd::Search { n, lo, hi, class, force } => {
            if !force && (*n > 5 || hi - lo > 16) {
                return Err(CliError("search is limited to n <= 5 and hi - lo <= 16; pass --force to lift".into()));
            }
            let filter = match class {
                ClassArg::Any => ClassFilter::Any,
                ClassArg::Pte1 => ClassFilter::Pte1,
                ClassArg::Pte0 => ClassFilter::Pte0,
            };
            let sols = search_pte(*n, *lo, *hi, filter);
            let list: Vec<Value> = sols.iter().map(io::pte_json).collect();
            Ok(Report::verdict(
                !sols.is_empty(),
                json!({"n": n, "lo": lo, "hi": hi, "count": sols.len(), "solutions": list}),
                format!("{} solutions", sols.len()),
            ))
        }
        PteCmd::ToChain { input, even } => {
            let (e, f) = load_pte(input, ctx)?;
            let sol = match verify_pte(&e, &f) {
                Ok(s) => s,
                Err(e) => return pte_negative(e),
            };
            let out = if *even { pte_to_chain_even(&sol) } else { pte_to_chain(&sol) };
            match out {
                Ok(pc) => Ok(Report::ok(io::pte_chain_json(&pc), format!("{}-chain with 0 and {} cospectral", pc.d, pc.m))),
                Err(e) => pte_negative(e),
            }
        }
        PteCmd::ToPstChain(input) => {
            let (e, f) = load_pte(input, ctx)?;
            let sol = match verify_pte(&e, &f) {
                Ok(s) => s,
                Err(e) => return pte_negative(e),
            };
            match pte_to_pst_chain(&sol) {
                Ok(b) => Ok(Report::ok(
                    io::pst_build_json(&b),
                    format!("{}-chain with transfer 0 -> {}", b.chain().d(), b.interpolant.m),
                )),
                Err(e) => pte_negative(e),
            }
        }
        PteCmd::FromChain { input, m } => {
            let c = load_chain(input, ctx)?;
            match chain_to_pte(&c, *m) {
                Ok(sol) => Ok(Report::ok(io::pte_json(&sol), format!("PTE_{} solution", sol.n()))),
                Err(e) => pte_negative(e),
            }
        }
    }
}

/// `(t, |⟨m|exp(itJ)|ℓ⟩|²)` on `steps` evenly spaced times in `[0, t_max]`.
pub fn fidelity_rows(c: &Chain, l: usize, m: usize, t_max: f64, steps: usize) -> Vec<(f64, f64)> {
    let sp = eigen(c);
    (0..steps)
        .map(|i| {
            let t = t_max * i as f64 / (steps - 1) as f64;
            (t, sp.amplitude(t, l, m).norm_sqr())
        })
        .collect()
}

fn fidelity(a: &FidelityArgs, ctx: &mut Context) -> CmdResult {
    let c = load_chain(&a.input, ctx)?;
    if a.steps < 2 {
        return Err(CliError("--steps must be at least 2".into()));
    }
    if a.l > c.d() || a.m > c.d() {
        return Err(CliError(format!("vertices must be in 0..={}", c.d())));
    }
    if !(a.t_max.is_finite() && a.t_max > 0.0) {
        return Err(CliError("--t-max must be positive".into()));
    }
    let rows = fidelity_rows(&c, a.l, a.m, a.t_max, a.steps);
    let mut csv = String::from("t,fidelity\n");
    for (t, f) in &rows {
        csv.push_str(&format!("{t:.12},{f:.12}\n"));
    }
    let last = rows.last().map_or(0.0, |r| r.1);
    Ok(Report { body: Body::Text(csv), negative: false, summary: format!("{} rows, final fidelity {last:.12}", rows.len()) })
}
