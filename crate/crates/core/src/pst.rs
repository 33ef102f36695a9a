//! Periodicity and perfect state transfer between chain vertices.
//!
//! With a rational spectrum everything reduces to exact arithmetic: the
//! eigenvalues on the support of a vertex are translated and rescaled to
//! integers with coprime differences, after which transfer at time `π`
//! between `ℓ` and `m` is the sign condition
//! `p_m(θ_s) = ±(−1)^{θ_0−θ_s} C p_ℓ(θ_s)` on every eigenvalue.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::chain::{eigen, eigen_numeric, Chain, ChainError};
use crate::opsbuild::{build_ops, BuildCertificate, BuildError, BuildOptions};
use crate::poly::{
    int, isolate_real_roots, lagrange_interpolate, rational_gcd, sign, strongly_interlaces, to_f64, Poly, PolyError,
    Rational, SturmSequence,
};

/// Minimum numeric fidelity accepted alongside an exact certificate.
pub const FIDELITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Infeasibility {
    /// The parity interpolant has the wrong degree.
    Degree { expected: usize, got: Option<usize> },
    NegativeLeading,
    NotRealRooted,
    NotInterlacing,
}

impl std::fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Infeasibility::Degree { expected, got: Some(g) } => {
                write!(f, "parity interpolant has degree {g}, need {expected}")
            }
            Infeasibility::Degree { expected, got: None } => {
                write!(f, "parity interpolant vanishes, need degree {expected}")
            }
            Infeasibility::NegativeLeading => write!(f, "parity interpolant has negative leading coefficient"),
            Infeasibility::NotRealRooted => write!(f, "interpolant does not have distinct real zeros"),
            Infeasibility::NotInterlacing => write!(f, "interpolant does not strongly interlace the spectrum"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PstError {
    #[error("the exact route needs a rational spectrum on the vertex support")]
    IrrationalSpectrum,
    #[error("vertex pair ({l}, {m}) is invalid for d = {d}")]
    BadPair { l: usize, m: usize, d: usize },
    #[error("invalid spectrum: {0}")]
    BadSpectrum(String),
    #[error("infeasible spectrum: {0}")]
    Infeasible(Infeasibility),
    #[error("need {needed} doubly occupied intervals, only {available} available")]
    NotEnoughSlack { needed: usize, available: usize },
    #[error("constructed chain failed certification: {0}")]
    CertificationFailed(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn of(r: &Rational) -> Option<Sign> {
        match sign(r) {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    fn parity(k: &BigInt) -> Sign {
        if k.is_even() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Signs of `p_m` along a decreasing spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct SignPattern {
    spectrum: Vec<Rational>,
    signs: Vec<Sign>,
}

impl SignPattern {
    pub fn new(spectrum: Vec<Rational>, signs: Vec<Sign>) -> Result<Self, PstError> {
        if spectrum.len() != signs.len() {
            return Err(PstError::BadSpectrum("one sign per eigenvalue".into()));
        }
        if spectrum.windows(2).any(|w| w[0] <= w[1]) {
            return Err(PstError::BadSpectrum("eigenvalues must be strictly decreasing".into()));
        }
        Ok(SignPattern { spectrum, signs })
    }

    /// Signs `(−1)^{θ_0−θ_s}` of an integer spectrum.
    pub fn from_parity(spectrum: &[i64]) -> Result<Self, PstError> {
        let sp = sorted_spectrum(spectrum)?;
        let top = BigInt::from(sp[0]);
        let signs = sp.iter().map(|&t| Sign::parity(&(&top - t))).collect();
        SignPattern::new(sp.into_iter().map(int).collect(), signs)
    }

    /// Signs of `p_m` on the spectrum; fails on a common zero.
    pub fn from_poly(p_m: &Poly, spectrum: Vec<Rational>) -> Result<Self, PstError> {
        let signs = spectrum
            .iter()
            .map(|t| Sign::of(&p_m.eval(t)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| PstError::BadSpectrum("p_m vanishes on the spectrum".into()))?;
        SignPattern::new(spectrum, signs)
    }

    pub fn spectrum(&self) -> &[Rational] {
        &self.spectrum
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn s_plus(&self) -> Vec<Rational> {
        self.select(Sign::Plus)
    }

    pub fn s_minus(&self) -> Vec<Rational> {
        self.select(Sign::Minus)
    }

    fn select(&self, s: Sign) -> Vec<Rational> {
        self.spectrum
            .iter()
            .zip(&self.signs)
            .filter(|(_, &x)| x == s)
            .map(|(t, _)| t.clone())
            .collect()
    }

    /// Lengths of the maximal runs of equal signs, top down.
    pub fn blocks(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for (i, s) in self.signs.iter().enumerate() {
            if i > 0 && self.signs[i - 1] == *s {
                *out.last_mut().unwrap() += 1;
            } else {
                out.push(1);
            }
        }
        out
    }
}

/// Necessary shape of the signs of a degree-`m` polynomial that strongly
/// interlaces the spectrum with constant modulus on it: `m + 1` alternating
/// runs starting with `+`, runs of length one at both ends and of length at
/// most two in between.
pub fn admissible_pattern(sp: &SignPattern, m: usize) -> bool {
    let blocks = sp.blocks();
    let n = blocks.len();
    if n != m + 1 || sp.signs.first() != Some(&Sign::Plus) {
        return false;
    }
    let last = if m.is_multiple_of(2) { Sign::Plus } else { Sign::Minus };
    if sp.signs.last() != Some(&last) {
        return false;
    }
    if n == 1 {
        return blocks[0] == 1;
    }
    blocks[0] == 1 && blocks[n - 1] == 1 && blocks[1..n - 1].iter().all(|&b| b <= 2)
}

fn sorted_spectrum(spectrum: &[i64]) -> Result<Vec<i64>, PstError> {
    if spectrum.is_empty() {
        return Err(PstError::BadSpectrum("empty spectrum".into()));
    }
    let mut sp = spectrum.to_vec();
    sp.sort_unstable_by(|a, b| b.cmp(a));
    if sp.windows(2).any(|w| w[0] == w[1]) {
        return Err(PstError::BadSpectrum("eigenvalues must be distinct".into()));
    }
    Ok(sp)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupportRow {
    pub theta: Rational,
    /// `(θ − θ_min)/g` on the support.
    pub normalized: BigInt,
    pub p_l: Rational,
    pub p_m: Rational,
    pub parity: Sign,
}

/// Rational eigenvalues on which a vertex pair is visible, rescaled to
/// integers with coprime differences.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalization {
    /// All eigenvalues, decreasing.
    pub spectrum: Vec<Rational>,
    /// Indices into `spectrum` where `p_ℓ` or `p_m` is nonzero.
    pub support: Vec<usize>,
    pub shift: Rational,
    /// gcd of the differences on the support (1 for a single eigenvalue).
    pub unit: Rational,
    pub normalized: Vec<BigInt>,
}

impl Normalization {
    /// Time `π` in normalised units expressed in the chain's own units.
    pub fn transfer_time(&self) -> f64 {
        PI / to_f64(&self.unit)
    }
}

/// Exact eigenvalues of the chain, decreasing.
fn rational_spectrum(c: &Chain) -> Result<Vec<Rational>, PstError> {
    let roots = isolate_real_roots(&c.charpoly())?;
    let mut values = roots.exact_values().ok_or(PstError::IrrationalSpectrum)?;
    values.reverse();
    Ok(values)
}

fn normalize(c: &Chain, vertices: &[usize]) -> Result<Normalization, PstError> {
    let ops = c.ops();
    let spectrum = rational_spectrum(c)?;
    let support: Vec<usize> = (0..spectrum.len())
        .filter(|&s| vertices.iter().any(|&v| !ops.p(v).eval(&spectrum[s]).is_zero()))
        .collect();
    let shift = spectrum[*support.last().expect("end vertices see every eigenvalue")].clone();
    let diffs: Vec<Rational> = support.iter().map(|&s| &spectrum[s] - &shift).collect();
    let mut unit = rational_gcd(&diffs);
    if unit.is_zero() {
        unit = Rational::one();
    }
    let normalized = diffs.iter().map(|x| (x / &unit).to_integer()).collect();
    Ok(Normalization { spectrum, support, shift, unit, normalized })
}

/// Whether the walk returns to `v` exactly at some time.
///
/// Every eigenvalue of the chain has to be rational; the support of `v` is
/// then integral after normalization, so the answer is `true` whenever it is
/// not an error.
pub fn is_periodic(c: &Chain, v: usize) -> Result<bool, PstError> {
    if v > c.d() {
        return Err(ChainError::IndexOutOfRange { index: v, d: c.d() }.into());
    }
    let norm = normalize(c, &[v])?;
    Ok(norm
        .normalized
        .iter()
        .zip(&norm.support)
        .all(|(n, &s)| Rational::from_integer(n.clone()) * &norm.unit + &norm.shift == norm.spectrum[s]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PstCertificate {
    pub l: usize,
    pub m: usize,
    pub normalization: Normalization,
    /// `|p_m(θ)| = C |p_ℓ(θ)|` on the spectrum.
    pub c: Rational,
    /// Overall sign `ε` in `p_m(θ_s) = ε (−1)^{θ_0−θ_s} C p_ℓ(θ_s)`.
    pub orientation: Sign,
    pub rows: Vec<SupportRow>,
    pub time: f64,
    /// `|⟨m| exp(iπJ) |ℓ⟩|` in normalised time.
    pub fidelity: f64,
    /// Argument of the amplitude at the transfer time.
    pub phase: f64,
}

impl PstCertificate {
    /// Re-checks the exact sign table.
    pub fn verify(&self) -> bool {
        let eps = match self.orientation {
            Sign::Plus => int(1),
            Sign::Minus => int(-1),
        };
        self.c.is_positive()
            && self.rows.iter().all(|r| {
                let par = match r.parity {
                    Sign::Plus => eps.clone(),
                    Sign::Minus => -eps.clone(),
                };
                r.p_m == par * &self.c * &r.p_l
            })
    }
}

fn check_pair(c: &Chain, l: usize, m: usize) -> Result<(usize, usize), PstError> {
    let (l, m) = if l <= m { (l, m) } else { (m, l) };
    if l == m || m > c.d() {
        return Err(PstError::BadPair { l, m, d: c.d() });
    }
    Ok((l, m))
}

/// Exact perfect state transfer test between `l` and `m`.
///
/// Returns `None` when the sign condition fails. The pair is unordered.
pub fn check_pst(c: &Chain, l: usize, m: usize) -> Result<Option<PstCertificate>, PstError> {
    let (l, m) = check_pair(c, l, m)?;
    let norm = normalize(c, &[l, m])?;
    let ops = c.ops();
    let (pl, pm) = (ops.p(l), ops.p(m));
    let top = &norm.normalized[0];
    let mut rows = Vec::with_capacity(norm.support.len());
    for (&s, n) in norm.support.iter().zip(&norm.normalized) {
        let theta = norm.spectrum[s].clone();
        let (vl, vm) = (pl.eval(&theta), pm.eval(&theta));
        if vl.is_zero() || vm.is_zero() {
            return Ok(None);
        }
        rows.push(SupportRow { theta, normalized: n.clone(), p_l: vl, p_m: vm, parity: Sign::parity(&(top - n)) });
    }
    let ratio = &rows[0].p_m / &rows[0].p_l;
    let orientation = if ratio.is_positive() { Sign::Plus } else { Sign::Minus };
    let cst = ratio.abs();
    if &cst * &cst != c.coupling_product(l + 1, m) {
        return Ok(None);
    }
    let time = norm.transfer_time();
    let mut cert = PstCertificate { l, m, normalization: norm, c: cst, orientation, rows, time, fidelity: 0.0, phase: 0.0 };
    if !cert.verify() {
        return Ok(None);
    }
    let amp = eigen(c).amplitude(time, l, m);
    cert.fidelity = amp.norm();
    cert.phase = amp.arg();
    Ok(Some(cert))
}

/// Best fidelity found by a time scan; evidence only, never a certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericTransfer {
    pub time: f64,
    pub fidelity: f64,
    pub phase: f64,
}

/// Scans `(0, 2π/δ]` (`δ` the smallest eigenvalue gap) on `steps` points,
/// then refines the best bracket by golden-section search.
pub fn search_transfer_time(c: &Chain, l: usize, m: usize, steps: usize) -> Result<NumericTransfer, PstError> {
    let (l, m) = check_pair(c, l, m)?;
    let sp = eigen_numeric(c);
    let vals = sp.values_f64();
    let gap = vals.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
    let t_max = 2.0 * PI / gap;
    let steps = steps.max(2);
    let f = |t: f64| sp.amplitude(t, l, m).norm();
    let h = t_max / steps as f64;
    let (mut best_i, mut best) = (1, f(h));
    for i in 2..=steps {
        let v = f(i as f64 * h);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let (mut a, mut b) = ((best_i - 1) as f64 * h, (best_i + 1) as f64 * h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let (x1, x2) = (b - g * (b - a), a + g * (b - a));
        if f(x1) >= f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    let mid = 0.5 * (a + b);
    let time = if f(mid) >= best { mid } else { best_i as f64 * h };
    let amp = sp.amplitude(time, l, m);
    Ok(NumericTransfer { time, fidelity: amp.norm(), phase: amp.arg() })
}

/// Monic `p_m` with `p_m(θ_s) = (−1)^{θ_0−θ_s} C` on an integer spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct PstInterpolant {
    /// Decreasing.
    pub spectrum: Vec<i64>,
    pub m: usize,
    pub p_m: Poly,
    pub c: Rational,
    pub q_top: Poly,
}

/// Interpolates the parity signs and accepts the result when it is, up to
/// a positive scale, a monic degree-`m` polynomial strongly interlacing
/// `Π(x − θ_s)`.
pub fn pst_interpolant(spectrum: &[i64], m: usize) -> Result<PstInterpolant, PstError> {
    let sp = sorted_spectrum(spectrum)?;
    let d = sp.len() - 1;
    if m > d || 2 * m <= d {
        return Err(PstError::BadSpectrum(format!("need d/2 < m <= d, got m = {m}, d = {d}")));
    }
    let top = sp[0];
    let points: Vec<(Rational, Rational)> = sp
        .iter()
        .map(|&t| (int(t), if (top - t) % 2 == 0 { int(1) } else { int(-1) }))
        .collect();
    let g = lagrange_interpolate(&points)?;
    if g.degree() != Some(m) {
        return Err(PstError::Infeasible(Infeasibility::Degree { expected: m, got: g.degree() }));
    }
    let lead = g.leading().expect("nonzero").clone();
    if !lead.is_positive() {
        return Err(PstError::Infeasible(Infeasibility::NegativeLeading));
    }
    let p_m = g.monic();
    let roots = isolate_real_roots(&p_m)?;
    if roots.total_count() != m || !roots.all_simple() {
        return Err(PstError::Infeasible(Infeasibility::NotRealRooted));
    }
    let q_top = Poly::from_int_roots(&sp);
    if !strongly_interlaces(&p_m, &q_top)? {
        return Err(PstError::Infeasible(Infeasibility::NotInterlacing));
    }
    Ok(PstInterpolant { spectrum: sp, m, p_m, c: lead.recip(), q_top })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PstBuild {
    pub interpolant: PstInterpolant,
    pub build: BuildCertificate,
    pub certificate: PstCertificate,
}

impl PstBuild {
    pub fn chain(&self) -> &Chain {
        &self.build.chain
    }
}

/// A chain with spectrum `spectrum` and perfect state transfer between `0`
/// and `m`, certified exactly and numerically.
pub fn build_pst_chain(spectrum: &[i64], m: usize) -> Result<PstBuild, PstError> {
    let interpolant = pst_interpolant(spectrum, m)?;
    let build = build_ops(&interpolant.p_m, &interpolant.q_top, &BuildOptions::default())?;
    let certificate = check_pst(&build.chain, 0, m)?
        .ok_or_else(|| PstError::CertificationFailed("sign condition fails on the built chain".into()))?;
    if certificate.fidelity < 1.0 - FIDELITY_TOL {
        return Err(PstError::CertificationFailed(format!("fidelity {}", certificate.fidelity)));
    }
    Ok(PstBuild { interpolant, build, certificate })
}

/// Removes `d − d_target` eigenvalues, the smaller one of each of the
/// lowest doubly occupied gaps between consecutive zeros of `p_m`.
pub fn shrink(p_m: &Poly, spectrum: &[i64], d_target: usize) -> Result<Vec<i64>, PstError> {
    let sp = sorted_spectrum(spectrum)?;
    let d = sp.len() - 1;
    let m = p_m.degree().ok_or(PolyError::ZeroPolynomial)?;
    if d_target > d {
        return Err(PstError::BadSpectrum(format!("target {d_target} exceeds d = {d}")));
    }
    let sturm = SturmSequence::new(p_m);
    let mut slots: Vec<Vec<usize>> = vec![Vec::new(); m + 1];
    for (s, &t) in sp.iter().enumerate() {
        let t = int(t);
        if p_m.eval(&t).is_zero() {
            return Err(PstError::BadSpectrum(format!("p_m vanishes at {t}")));
        }
        slots[sturm.count_in(Some(&t), None)].push(s);
    }
    if slots[0].len() != 1 || slots[m].len() != 1 || slots.iter().any(|v| v.is_empty() || v.len() > 2) {
        return Err(PstError::BadSpectrum("eigenvalues are not placed as one or two per gap of p_m".into()));
    }
    let doubled: Vec<usize> = (1..m).rev().filter(|&i| slots[i].len() == 2).collect();
    let needed = d - d_target;
    if doubled.len() < needed {
        return Err(PstError::NotEnoughSlack { needed, available: doubled.len() });
    }
    let drop: Vec<usize> = doubled[..needed].iter().map(|&i| slots[i][1]).collect();
    Ok(sp.iter().enumerate().filter(|(s, _)| !drop.contains(s)).map(|(_, &t)| t).collect())
}

/// Every `(d+1)`-subset of `[0, 2·bound]` containing `0` (so every subset of
/// `[−bound, bound]` up to translation) on which the parity interpolant of
/// degree `⌈(d+1)/2⌉` is feasible. Hits are reported re-centred into
/// `[−bound, bound]`, decreasing.
pub fn scan_no_pst_half(d: usize, bound: u32) -> Vec<Vec<i64>> {
    let m = (d + 2) / 2;
    let width = 2 * bound as i64;
    if d == 0 || d as i64 > width {
        return Vec::new();
    }
    let mut subsets: Vec<Vec<i64>> = Vec::new();
    let mut cur = vec![0i64];
    collect_subsets(1, width, d, &mut cur, &mut subsets);
    let mut hits: Vec<Vec<i64>> = subsets
        .par_iter()
        .filter(|set| {
            let Ok(pattern) = SignPattern::from_parity(set) else { return false };
            admissible_pattern(&pattern, m) && pst_interpolant(set, m).is_ok()
        })
        .map(|set| {
            let shift = set.iter().max().unwrap() / 2;
            let mut v: Vec<i64> = set.iter().map(|t| t - shift).collect();
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        })
        .collect();
    hits.sort();
    hits
}

fn collect_subsets(next: i64, max: i64, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    let mut x = next;
    while x + left as i64 - 1 <= max {
        cur.push(x);
        collect_subsets(x + 1, max, left - 1, cur, out);
        cur.pop();
        x += 1;
    }
}

/// Integer value of an exact rational, if it is one and fits.
pub fn as_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cospec::{is_cospectral, CheckMode};
    use crate::poly::rat;

    fn three_chain() -> Chain {
        build_pst_chain(&[2, 1, -1, -2], 2).unwrap().build.chain
    }

    fn p5() -> Poly {
        Poly::new(vec![rat(-315, 4), int(144), int(40), int(-25), rat(-5, 2), int(1)])
    }

    const SEVEN: [i64; 8] = [5, 4, 3, 1, 0, -2, -3, -4];

    #[test]
    fn periodicity() {
        assert_eq!(is_periodic(&three_chain(), 0), Ok(true));
        let irr = Chain::from_ints(&[0, 0], &[2]).unwrap();
        assert_eq!(is_periodic(&irr, 0), Err(PstError::IrrationalSpectrum));
        let single = Chain::new(vec![rat(7, 3)], vec![]).unwrap();
        assert_eq!(is_periodic(&single, 0), Ok(true));
        assert!(is_periodic(&single, 1).is_err());
    }

    #[test]
    fn patterns() {
        let p = SignPattern::from_parity(&[2, 1, -1, -2]).unwrap();
        assert_eq!(p.signs(), &[Sign::Plus, Sign::Minus, Sign::Minus, Sign::Plus]);
        assert!(admissible_pattern(&p, 2));
        assert!(!admissible_pattern(&p, 3));
        let bad = SignPattern::new(
            vec![int(3), int(2), int(1), int(0)],
            vec![Sign::Plus, Sign::Plus, Sign::Plus, Sign::Minus],
        )
        .unwrap();
        for m in 0..5 {
            assert!(!admissible_pattern(&bad, m));
        }
        let two = SignPattern::from_parity(&[1, 0]).unwrap();
        assert!(admissible_pattern(&two, 1));
        assert_eq!(two.s_plus(), vec![int(1)]);
        assert_eq!(two.s_minus(), vec![int(0)]);
        let from_poly = SignPattern::from_poly(&Poly::new(vec![rat(-5, 2), int(0), int(1)]), p.spectrum().to_vec()).unwrap();
        assert_eq!(from_poly, p);
    }

    #[test]
    fn interpolants() {
        let ex = pst_interpolant(&[2, 1, -1, -2], 2).unwrap();
        assert_eq!(ex.p_m, Poly::new(vec![rat(-5, 2), int(0), int(1)]));
        assert_eq!(ex.c, rat(3, 2));
        assert_eq!(pst_interpolant(&[1, 0], 1).unwrap().p_m, Poly::new(vec![rat(-1, 2), int(1)]));
        let seven = pst_interpolant(&SEVEN, 5).unwrap();
        assert_eq!(seven.p_m, p5());
        assert_eq!(seven.c, rat(315, 4));
        assert!(matches!(
            pst_interpolant(&[3, 2, 1, 0], 2),
            Err(PstError::Infeasible(Infeasibility::Degree { expected: 2, .. }))
        ));
        assert!(matches!(pst_interpolant(&[2, 1, -1, -2], 1), Err(PstError::BadSpectrum(_))));
        assert!(matches!(pst_interpolant(&[2, 2, 0], 2), Err(PstError::BadSpectrum(_))));
    }

    #[test]
    fn example_chain() {
        let c = three_chain();
        let ops = c.ops();
        assert_eq!(ops.p(2), &Poly::new(vec![rat(-5, 2), int(0), int(1)]));
        assert_eq!(ops.p(4), &Poly::from_ints(&[4, 0, -5, 0, 1]));
        let cert = check_pst(&c, 0, 2).unwrap().unwrap();
        assert_eq!(cert.c, rat(3, 2));
        assert!(cert.fidelity >= 1.0 - FIDELITY_TOL);
        assert_eq!(cert.normalization.unit, int(1));
        let back = check_pst(&c, 2, 0).unwrap().unwrap();
        assert_eq!(back.c, cert.c);
        assert!(check_pst(&c, 0, 1).unwrap().is_none());
        assert!(check_pst(&c, 0, 4).is_err());
    }

    #[test]
    fn two_site() {
        let c = Chain::new(vec![rat(1, 2), rat(1, 2)], vec![rat(1, 4)]).unwrap();
        let cert = check_pst(&c, 0, 1).unwrap().unwrap();
        assert_eq!(cert.normalization.normalized, vec![BigInt::from(1), BigInt::from(0)]);
        assert!((cert.fidelity - 1.0).abs() < 1e-12);
        let built = build_pst_chain(&[1, 0], 1).unwrap();
        assert_eq!(built.build.chain, c);
    }

    #[test]
    fn rescaled_spectrum() {
        // the path on three vertices scaled to spectrum {2, 0, -2}
        let c = Chain::from_ints(&[0, 0, 0], &[2, 2]).unwrap();
        let cert = check_pst(&c, 0, 2).unwrap().unwrap();
        assert_eq!(cert.normalization.unit, int(2));
        assert!((cert.time - PI / 2.0).abs() < 1e-15);
        assert!(cert.fidelity > 1.0 - 1e-12);
        let num = search_transfer_time(&c, 0, 2, 400).unwrap();
        assert!(num.fidelity > 1.0 - 1e-9);
    }

    #[test]
    fn numeric_search_on_irrational_spectrum() {
        let path = Chain::path(3);
        assert_eq!(check_pst(&path, 0, 2), Err(PstError::IrrationalSpectrum));
        let num = search_transfer_time(&path, 0, 2, 1000).unwrap();
        assert!((num.time - PI / 2f64.sqrt()).abs() < 1e-6);
        assert!(num.fidelity > 1.0 - 1e-9);
    }

    #[test]
    fn seven_chain_and_shrink() {
        let b = build_pst_chain(&SEVEN, 5).unwrap();
        assert_eq!(b.chain().ops().p(5), &p5());
        assert!(b.certificate.fidelity >= 1.0 - FIDELITY_TOL);
        let six = shrink(&p5(), &SEVEN, 6).unwrap();
        assert_eq!(six.len(), 7);
        let b6 = build_pst_chain(&six, 5).unwrap();
        assert_eq!(b6.interpolant.p_m, p5());
        assert!(b6.certificate.fidelity >= 1.0 - FIDELITY_TOL);
        assert_eq!(shrink(&p5(), &SEVEN, 7).unwrap(), SEVEN.to_vec());
        let five = shrink(&p5(), &SEVEN, 5).unwrap();
        assert!(build_pst_chain(&five, 5).is_ok());
        assert!(matches!(shrink(&p5(), &SEVEN, 4), Err(PstError::NotEnoughSlack { needed: 3, available: 2 })));
    }

    #[test]
    fn shrink_example_to_m() {
        let p2 = Poly::new(vec![rat(-5, 2), int(0), int(1)]);
        let sp = shrink(&p2, &[2, 1, -1, -2], 2).unwrap();
        assert_eq!(sp, vec![2, 1, -2]);
        let b = build_pst_chain(&sp, 2).unwrap();
        assert_eq!(b.chain().d(), 2);
        assert!(b.certificate.fidelity >= 1.0 - FIDELITY_TOL);
    }

    #[test]
    fn pst_implies_cospectral() {
        for (sp, m) in [(vec![2i64, 1, -1, -2], 2usize), (SEVEN.to_vec(), 5), (vec![1, 0], 1)] {
            let b = build_pst_chain(&sp, m).unwrap();
            let c = b.chain();
            let cos = is_cospectral(c, 0, m, CheckMode::Exact).unwrap().unwrap();
            assert_eq!(cos.scale(), Some(b.certificate.c.clone()));
            assert!(is_periodic(c, 0).unwrap() && is_periodic(c, m).unwrap());
        }
    }

    #[test]
    fn small_scans() {
        assert!(scan_no_pst_half(3, 2).contains(&vec![2, 1, -1, -2]));
        assert!(scan_no_pst_half(4, 4).is_empty());
        assert!(!scan_no_pst_half(1, 1).is_empty());
        assert!(!scan_no_pst_half(2, 1).is_empty());
    }
}
