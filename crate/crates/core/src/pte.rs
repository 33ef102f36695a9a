//! Ideal Prouhet–Tarry–Escott solutions and their link to chains with
//! periodic cospectral vertices.
//!
//! Two multisets `E`, `F` of size `n` solve `PTE_n` when their power sums
//! agree for `k = 1..n−1`, equivalently when `p_E − p_F` is constant.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::chain::Chain;
use crate::cospec::{is_cospectral, CheckMode, CospecError, CospectralCertificate};
use crate::opsbuild::{build_ops, BuildCertificate, BuildError, BuildOptions};
use crate::poly::{int, is_integer, Poly, Rational};
use crate::pst::{build_pst_chain, is_periodic, PstBuild, PstError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PteClass {
    General,
    /// At most one element of `E ⊔ F` appears twice.
    Pte1,
    /// No element of `E ⊔ F` is repeated.
    Pte0,
}

impl PteClass {
    pub fn name(self) -> &'static str {
        match self {
            PteClass::General => "general",
            PteClass::Pte1 => "pte1",
            PteClass::Pte0 => "pte0",
        }
    }

    pub fn parse(s: &str) -> Option<PteClass> {
        match s {
            "general" => Some(PteClass::General),
            "pte1" => Some(PteClass::Pte1),
            "pte0" => Some(PteClass::Pte0),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PteError {
    #[error("E and F have sizes {e} and {f}")]
    SizeMismatch { e: usize, f: usize },
    #[error("E and F must be non-empty")]
    Empty,
    #[error("E and F are the same multiset")]
    Identical,
    #[error("power sums differ at k = {k}")]
    PowerSumMismatch { k: usize },
    #[error("power-sum test and polynomial test disagree")]
    Inconsistent,
    #[error("solution class {found} cannot be used here, need {needed}")]
    WrongClass { found: &'static str, needed: &'static str },
    #[error("vertex {m} is not the half position {expected} of a {d}-chain")]
    WrongPosition { m: usize, expected: usize, d: usize },
    #[error("vertices 0 and {m} are not periodic and cospectral with an integral spectrum")]
    NotPeriodicCospectral { m: usize },
    #[error("each set needs exactly one odd element, found {e} and {f}")]
    ParityMismatch { e: usize, f: usize },
    #[error("no interior element is available to drop")]
    NoInteriorElement,
    #[error("construction failed certification: {0}")]
    CertificationFailure(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Pst(#[from] PstError),
    #[error(transparent)]
    Cospec(#[from] CospecError),
}

/// A verified solution. Both sets are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PteSolution {
    e: Vec<i64>,
    f: Vec<i64>,
    class: PteClass,
}

impl PteSolution {
    pub fn e(&self) -> &[i64] {
        &self.e
    }

    pub fn f(&self) -> &[i64] {
        &self.f
    }

    pub fn n(&self) -> usize {
        self.e.len()
    }

    pub fn class(&self) -> PteClass {
        self.class
    }

    /// Translated so that `min(E ∪ F) = 0` and oriented so that `e_1 < f_1`.
    pub fn canonical(&self) -> PteSolution {
        let lo = self.e[0].min(self.f[0]);
        let shift = |v: &[i64]| v.iter().map(|x| x - lo).collect::<Vec<_>>();
        let (e, f) = (shift(&self.e), shift(&self.f));
        let (e, f) = if e <= f { (e, f) } else { (f, e) };
        PteSolution { e, f, class: self.class }
    }

    pub fn swapped(&self) -> PteSolution {
        PteSolution { e: self.f.clone(), f: self.e.clone(), class: self.class }
    }

    /// `p_E(x) = Π(x − e_i)`.
    pub fn p_e(&self) -> Poly {
        Poly::from_int_roots(&self.e)
    }

    pub fn p_f(&self) -> Poly {
        Poly::from_int_roots(&self.f)
    }
}

fn sorted(v: &[i64]) -> Vec<i64> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

fn power_sum(v: &[i64], k: usize) -> BigInt {
    v.iter().map(|&x| BigInt::from(x).pow(k as u32)).sum()
}

/// Class of the multiset union `E ⊔ F`.
pub fn classify(e: &[i64], f: &[i64]) -> PteClass {
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for &x in e.iter().chain(f) {
        *counts.entry(x).or_default() += 1;
    }
    let repeated: Vec<usize> = counts.values().copied().filter(|&c| c > 1).collect();
    match repeated.as_slice() {
        [] => PteClass::Pte0,
        [2] => PteClass::Pte1,
        _ => PteClass::General,
    }
}

/// Checks the power sums and, independently, that `p_E − p_F` is constant.
pub fn verify_pte(e: &[i64], f: &[i64]) -> Result<PteSolution, PteError> {
    if e.len() != f.len() {
        return Err(PteError::SizeMismatch { e: e.len(), f: f.len() });
    }
    if e.is_empty() {
        return Err(PteError::Empty);
    }
    let (e, f) = (sorted(e), sorted(f));
    if e == f {
        return Err(PteError::Identical);
    }
    let n = e.len();
    let first_bad = (1..n).find(|&k| power_sum(&e, k) != power_sum(&f, k));
    let gap = pte_poly_gap(&e, &f);
    if first_bad.is_none() != gap.is_some() {
        return Err(PteError::Inconsistent);
    }
    if let Some(k) = first_bad {
        return Err(PteError::PowerSumMismatch { k });
    }
    let class = classify(&e, &f);
    Ok(PteSolution { e, f, class })
}

/// `p_E − p_F` when it is a constant polynomial.
pub fn pte_poly_gap(e: &[i64], f: &[i64]) -> Option<BigInt> {
    if e.len() != f.len() {
        return None;
    }
    let diff = &Poly::from_int_roots(e) - &Poly::from_int_roots(f);
    if diff.is_constant() {
        Some(diff.coeff(0).to_integer())
    } else {
        None
    }
}

/// The alternating order `e_1 < f_1 ≤ f_2 < e_2 ≤ e_3 < f_3 ≤ ⋯` of a solution,
/// with the sets oriented so that `e_1 ≤ f_1`.
pub fn pte_interlacing_check(e: &[i64], f: &[i64]) -> bool {
    if e.len() != f.len() || e.is_empty() {
        return false;
    }
    let (e, f) = (sorted(e), sorted(f));
    let (e, f) = if e[0] <= f[0] { (e, f) } else { (f, e) };
    let n = e.len();
    // blocks: [e1], [f1 f2], [e2 e3], [f3 f4], ...
    let mut blocks: Vec<Vec<i64>> = vec![vec![e[0]]];
    for j in 1..=n {
        let src = if j % 2 == 1 { &f } else { &e };
        blocks.push((j..=(j + 1).min(n)).map(|i| src[i - 1]).collect());
    }
    let within = blocks.iter().all(|b| b.windows(2).all(|w| w[0] <= w[1]));
    let between = blocks.windows(2).all(|w| w[0].last() < w[1].first());
    within && between
}

/// `(n−1)!` divides `p_E(0) − p_F(0)`.
pub fn kleiman_divisible(sol: &PteSolution) -> bool {
    let (diff, fact) = kleiman_data(sol);
    (diff % fact).is_zero()
}

/// The chain built from a solution, with the certificate that `0` and `m`
/// are cospectral; the spectrum is integral so both are periodic.
#[derive(Clone, Debug)]
pub struct PteChain {
    pub solution: PteSolution,
    pub d: usize,
    pub m: usize,
    /// Element removed from `E ⊔ F` on the even route.
    pub xi: Option<i64>,
    /// Decreasing.
    pub spectrum: Vec<i64>,
    pub p_m: Poly,
    pub build: BuildCertificate,
    pub cospectral: CospectralCertificate,
}

impl PteChain {
    pub fn chain(&self) -> &Chain {
        &self.build.chain
    }
}

fn finish_chain(sol: &PteSolution, spectrum: Vec<i64>, xi: Option<i64>) -> Result<PteChain, PteError> {
    let n = sol.n();
    let p_m = (&sol.p_e() + &sol.p_f()).scale(&Rational::new(BigInt::one(), BigInt::from(2)));
    let q_top = Poly::from_int_roots(&spectrum);
    let build = build_ops(&p_m, &q_top, &BuildOptions::default())?;
    let cospectral = is_cospectral(&build.chain, 0, n, CheckMode::Exact)?
        .ok_or_else(|| PteError::CertificationFailure(format!("0 and {n} are not cospectral")))?;
    let mut spectrum = spectrum;
    spectrum.sort_unstable_by(|a, b| b.cmp(a));
    Ok(PteChain { solution: sol.clone(), d: spectrum.len() - 1, m: n, xi, spectrum, p_m, build, cospectral })
}

/// `PTE⁰_n` gives a `(2n−1)`-chain, `PTE¹_n` a `(2n−2)`-chain, each with `0`
/// and `n` periodic and cospectral.
pub fn pte_to_chain(sol: &PteSolution) -> Result<PteChain, PteError> {
    match sol.class {
        PteClass::Pte0 => {
            let mut spectrum = sol.e.clone();
            spectrum.extend_from_slice(&sol.f);
            finish_chain(sol, spectrum, None)
        }
        PteClass::Pte1 => pte_to_chain_even(sol),
        PteClass::General => Err(PteError::WrongClass { found: "general", needed: "pte0 or pte1" }),
    }
}

/// The even route: drop the repeated element, or failing that the smallest
/// element other than `e_1, f_1, e_n, f_n`.
pub fn pte_to_chain_even(sol: &PteSolution) -> Result<PteChain, PteError> {
    if sol.class == PteClass::General {
        return Err(PteError::WrongClass { found: "general", needed: "pte0 or pte1" });
    }
    let n = sol.n();
    let mut all = sol.e.clone();
    all.extend_from_slice(&sol.f);
    all.sort_unstable();
    let xi = match all.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => w[0],
        None => {
            let ends = [sol.e[0], sol.f[0], sol.e[n - 1], sol.f[n - 1]];
            *all.iter().find(|x| !ends.contains(x)).ok_or(PteError::NoInteriorElement)?
        }
    };
    let pos = all.iter().position(|&x| x == xi).expect("member");
    all.remove(pos);
    finish_chain(sol, all, Some(xi))
}

/// Reads `S_±` off a chain whose vertices `0` and `⌈(d+1)/2⌉` are periodic
/// and cospectral. Integer eigenvalues are used as they are; otherwise the
/// normalised spectrum is used.
pub fn chain_to_pte(c: &Chain, m: usize) -> Result<PteSolution, PteError> {
    let d = c.d();
    let expected = (d + 2) / 2;
    if m != expected || d == 0 {
        return Err(PteError::WrongPosition { m, expected, d });
    }
    let not_pc = || PteError::NotPeriodicCospectral { m };
    match is_periodic(c, 0) {
        Ok(true) => {}
        Ok(false) | Err(PstError::IrrationalSpectrum) => return Err(not_pc()),
        Err(e) => return Err(e.into()),
    }
    if is_cospectral(c, 0, m, CheckMode::Exact)?.is_none() {
        return Err(not_pc());
    }
    let spectrum = crate::opsbuild::exact_spectrum(&c.charpoly())?;
    let values: Vec<Rational> = if spectrum.iter().all(is_integer) {
        spectrum.clone()
    } else {
        let lo = spectrum.last().unwrap().clone();
        let diffs: Vec<Rational> = spectrum.iter().map(|t| t - &lo).collect();
        let unit = crate::poly::rational_gcd(&diffs);
        diffs.iter().map(|x| x / &unit).collect()
    };
    let p_m = c.ops().p(m).clone();
    let (mut plus, mut minus) = (Vec::new(), Vec::new());
    for (t, v) in spectrum.iter().zip(&values) {
        let x = v.to_integer().to_i64().ok_or_else(not_pc)?;
        if p_m.eval(t).is_positive() {
            plus.push(x);
        } else {
            minus.push(x);
        }
    }
    if d.is_multiple_of(2) {
        let (big, small) = if plus.len() >= minus.len() { (&plus, &mut minus) } else { (&minus, &mut plus) };
        let xi = big.iter().sum::<i64>() - small.iter().sum::<i64>();
        small.push(xi);
    }
    verify_pte(&plus, &minus).map_err(|e| PteError::CertificationFailure(e.to_string()))
}

/// The half-integer recipe: halve a `PTE⁰_n` solution in which each set has
/// exactly one odd element, drop the two halves that are not integers, and
/// build perfect state transfer between `0` and `n` on what is left.
pub fn pte_to_pst_chain(sol: &PteSolution) -> Result<PstBuild, PteError> {
    if sol.class != PteClass::Pte0 {
        return Err(PteError::WrongClass { found: sol.class.name(), needed: "pte0" });
    }
    let odd = |v: &[i64]| v.iter().filter(|x| x.is_odd()).count();
    let (oe, of) = (odd(&sol.e), odd(&sol.f));
    if oe != 1 || of != 1 {
        return Err(PteError::ParityMismatch { e: oe, f: of });
    }
    let spectrum: Vec<i64> = sol.e.iter().chain(&sol.f).filter(|x| x.is_even()).map(|x| x / 2).collect();
    Ok(build_pst_chain(&spectrum, sol.n())?)
}

/// Which solutions `search_pte` keeps. `Pte1` includes `Pte0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ClassFilter {
    #[default]
    Any,
    Pte1,
    Pte0,
}

impl ClassFilter {
    fn admits(self, c: PteClass) -> bool {
        match self {
            ClassFilter::Any => true,
            ClassFilter::Pte1 => c >= PteClass::Pte1,
            ClassFilter::Pte0 => c == PteClass::Pte0,
        }
    }
}

fn multisets_from(first: i64, n: usize, hi: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![first];
    fn rec(from: i64, hi: i64, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for x in from..=hi {
            cur.push(x);
            rec(x, hi, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(first, hi, n - 1, &mut cur, &mut out);
    out
}

fn signature(v: &[i64], n: usize) -> Vec<i128> {
    (1..n).map(|k| v.iter().map(|&x| (x as i128).pow(k as u32)).sum()).collect()
}

/// Every solution of size `n` with entries in `[lo, hi]`, in canonical form
/// (translated to minimum `0`, `e_1 < f_1`), sorted and deduplicated.
pub fn search_pte(n: usize, lo: i64, hi: i64, filter: ClassFilter) -> Vec<PteSolution> {
    if n == 0 || hi < lo {
        return Vec::new();
    }
    let width = hi - lo;
    // solutions are determined up to translation, so one set may start at 0
    // and the other anywhere in the window
    let mut buckets: HashMap<Vec<i128>, Vec<Vec<i64>>> = HashMap::new();
    let shards: Vec<Vec<(Vec<i128>, Vec<i64>)>> = (0..=width)
        .into_par_iter()
        .map(|first| {
            multisets_from(first, n, width)
                .into_iter()
                .map(|v| (signature(&v, n), v))
                .collect()
        })
        .collect();
    for (sig, v) in shards.into_iter().flatten() {
        buckets.entry(sig).or_default().push(v);
    }
    let mut found: Vec<PteSolution> = buckets
        .into_par_iter()
        .flat_map_iter(|(_, group)| {
            let mut hits = Vec::new();
            for (i, a) in group.iter().enumerate() {
                for b in &group[i + 1..] {
                    if a[0].min(b[0]) != 0 || !pte_interlacing_check(a, b) {
                        continue;
                    }
                    if let Ok(sol) = verify_pte(a, b) {
                        if filter.admits(sol.class) && kleiman_divisible(&sol) {
                            hits.push(sol.canonical());
                        }
                    }
                }
            }
            hits
        })
        .collect();
    found.sort();
    found.dedup();
    found
}

/// `(p_E(0) − p_F(0), (n−1)!)`.
pub fn kleiman_data(sol: &PteSolution) -> (BigInt, BigInt) {
    let n = sol.n() as u64;
    let fact: BigInt = (1..n).map(BigInt::from).product();
    let diff = (sol.p_e().coeff(0) - sol.p_f().coeff(0)).to_integer();
    (diff, fact)
}

/// The common value of `|(p_E + p_F)/2|` on `E ⊔ F`, if there is one.
pub fn half_sum_constant(sol: &PteSolution) -> Option<Rational> {
    let p = (&sol.p_e() + &sol.p_f()).scale(&Rational::new(BigInt::one(), BigInt::from(2)));
    let vals: Vec<Rational> = sol.e.iter().chain(&sol.f).map(|&x| p.eval(&int(x)).abs()).collect();
    vals.windows(2).all(|w| w[0] == w[1]).then(|| vals[0].clone())
}
