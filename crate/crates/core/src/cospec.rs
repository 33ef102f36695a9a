//! Cospectral vertex pairs: certification, the position criterion and
//! explicit constructions.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::chain::{chain_from_top_pair, eigen_numeric, Chain, ChainError};
use crate::opsbuild::{build_ops, BuildError, BuildOptions};
use crate::poly::{from_f64, int, isolate_real_roots, min_abs_critical_value, Poly, PolyError, Rational, RootValue};

/// Numeric cospectrality tolerance on `|⟨θ|ℓ⟩| − |⟨θ|m⟩|`.
pub const NUMERIC_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CospecError {
    #[error("no chain on {d}+1 vertices has {l} and {m} cospectral (need l < d/2 < m)")]
    InfeasiblePosition { l: usize, m: usize, d: usize },
    #[error("vertices {l} and {m} are not cospectral in the input chain")]
    NotCospectralInput { l: usize, m: usize },
    #[error("vertex pair ({l}, {m}) is invalid for d = {d}")]
    BadPair { l: usize, m: usize, d: usize },
    #[error("invalid odd-root selection: {0}")]
    BadSelection(String),
    #[error("construction failed certification (deviation {deviation:e})")]
    CertificationFailed { deviation: f64 },
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CheckMode {
    /// Exact polynomial identity only.
    Exact,
    /// Eigenvector comparison only.
    Numeric,
    /// Exact first, then numeric.
    #[default]
    Auto,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Evidence {
    /// `φ^{P∖ℓ} = φ^{P∖m}` holds coefficient by coefficient.
    Exact { deleted_charpoly: Poly },
    /// Per eigenvalue `(θ_s, |⟨θ_s|ℓ⟩|, |⟨θ_s|m⟩|)`.
    Numeric { table: Vec<(f64, f64, f64)>, max_deviation: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CospectralCertificate {
    pub l: usize,
    pub m: usize,
    /// `C²` where `|p_m(θ_s)| = C |p_ℓ(θ_s)|` on the spectrum; equals
    /// `Π_{t=ℓ+1}^{m} λ_t²`.
    pub scale_sq: Rational,
    pub evidence: Evidence,
}

impl CospectralCertificate {
    pub fn is_exact(&self) -> bool {
        matches!(self.evidence, Evidence::Exact { .. })
    }

    /// `C` itself when `C²` is the square of a rational.
    pub fn scale(&self) -> Option<Rational> {
        rational_sqrt(&self.scale_sq)
    }

    pub fn scale_f64(&self) -> f64 {
        crate::poly::to_f64(&self.scale_sq).sqrt()
    }
}

pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rational::new(sn, sd))
}

fn check_pair(c: &Chain, l: usize, m: usize) -> Result<(), CospecError> {
    if l >= m || m > c.d() {
        return Err(CospecError::BadPair { l, m, d: c.d() });
    }
    Ok(())
}

/// Exact criterion: equal vertex-deleted characteristic polynomials.
fn exact_check(c: &Chain, l: usize, m: usize) -> Option<Poly> {
    let dl = c.vertex_deleted_charpoly(&[l]).ok()?;
    let dm = c.vertex_deleted_charpoly(&[m]).ok()?;
    (dl == dm).then_some(dl)
}

fn numeric_table(c: &Chain, l: usize, m: usize) -> (Vec<(f64, f64, f64)>, f64) {
    let sp = eigen_numeric(c);
    let mut worst = 0f64;
    let table = sp
        .values_f64()
        .into_iter()
        .zip(sp.vectors())
        .map(|(th, v)| {
            let (x, y) = (v[l].abs(), v[m].abs());
            worst = worst.max((x - y).abs());
            (th, x, y)
        })
        .collect();
    (table, worst)
}

/// Certifies that `l` and `m` are cospectral, or returns `None`.
pub fn is_cospectral(c: &Chain, l: usize, m: usize, mode: CheckMode) -> Result<Option<CospectralCertificate>, CospecError> {
    check_pair(c, l, m)?;
    let scale_sq = c.coupling_product(l + 1, m);
    if mode != CheckMode::Numeric {
        if let Some(deleted_charpoly) = exact_check(c, l, m) {
            return Ok(Some(CospectralCertificate { l, m, scale_sq, evidence: Evidence::Exact { deleted_charpoly } }));
        }
        if mode == CheckMode::Exact {
            return Ok(None);
        }
    }
    let (table, max_deviation) = numeric_table(c, l, m);
    Ok((max_deviation <= NUMERIC_TOL)
        .then_some(CospectralCertificate { l, m, scale_sq, evidence: Evidence::Numeric { table, max_deviation } }))
}

/// The three exact forms of cospectrality: equal deleted characteristic
/// polynomials, `α_ℓ = α_m`, and `α_ℓ^{P∖m} = α_m^{P∖ℓ}`.
pub fn exact_criteria(c: &Chain, l: usize, m: usize) -> Result<[bool; 3], CospecError> {
    check_pair(c, l, m)?;
    let phi_l = c.vertex_deleted_charpoly(&[l])?;
    let phi_m = c.vertex_deleted_charpoly(&[m])?;
    let both = c.vertex_deleted_charpoly(&[l, m])?;
    let alpha_eq = c.alpha(l)? == c.alpha(m)?;
    // cross-multiplied: φ^{P∖m}/φ^{P∖{ℓ,m}} = φ^{P∖ℓ}/φ^{P∖{ℓ,m}}
    let cross = crate::chain::RationalFn::new(phi_m.clone(), both.clone())?
        == crate::chain::RationalFn::new(phi_l.clone(), both)?;
    Ok([phi_l == phi_m, alpha_eq, cross])
}

/// `ℓ < d/2 < m`.
pub fn position_feasible(l: usize, m: usize, d: usize) -> bool {
    l < m && m <= d && 2 * l < d && d < 2 * m
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BaseOptions {
    /// Which odd-indexed `ρ`'s to keep (each in `1, 3, …, 2m−3`); default is
    /// the `d − m` smallest indices.
    pub odd: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct BaseConstruction {
    pub m: usize,
    pub d: usize,
    pub p_m: Poly,
    pub epsilon: Rational,
    /// Rational stand-ins for the zeros of `p_m ± ε`, decreasing.
    pub rho: Vec<Rational>,
    /// Indices into `rho` forming the spectrum.
    pub selected: Vec<usize>,
    pub chain: Chain,
    pub certificate: CospectralCertificate,
}

/// Largest power of two not exceeding `x > 0`.
fn dyadic_floor(x: &Rational) -> Rational {
    let two = int(2);
    let mut e = Rational::one();
    if &e <= x {
        while &(&e * &two) <= x {
            e *= &two;
        }
    } else {
        while &e > x {
            e /= &two;
        }
    }
    e
}

fn rational_stand_in(v: &RootValue) -> Rational {
    match v {
        RootValue::Exact(r) => r.clone(),
        RootValue::Isolated { lo, hi, approx } => {
            let f = from_f64(*approx);
            if &f > lo && &f < hi {
                f
            } else {
                (lo + hi) / int(2)
            }
        }
    }
}

/// A `d`-chain with `0` and `m` cospectral, through `p_m = Π_{j<m}(x − j)`
/// and a spectrum drawn from the zeros of `p_m ± ε`.
///
/// The zeros are generally irrational, so each is replaced by a nearby
/// rational before the exact construction; cospectrality is then certified
/// numerically (or exactly when every zero was rational).
pub fn construct_cospectral_base_with(m: usize, d: usize, opts: &BaseOptions) -> Result<BaseConstruction, CospecError> {
    if !position_feasible(0, m, d) {
        return Err(CospecError::InfeasiblePosition { l: 0, m, d });
    }
    let p_m = Poly::from_int_roots(&(0..m as i64).collect::<Vec<_>>());
    let epsilon = match min_abs_critical_value(&p_m)? {
        Some(v) => dyadic_floor(&(v / int(2))),
        None => Rational::one(),
    };
    let eps_poly = Poly::constant(epsilon.clone());
    let mut rho = Vec::with_capacity(2 * m);
    for shifted in [&p_m - &eps_poly, &p_m + &eps_poly] {
        let roots = isolate_real_roots(&shifted)?;
        if roots.total_count() != m || !roots.all_simple() {
            return Err(PolyError::NotSimpleRealRooted.into());
        }
        rho.extend(roots.roots().iter().map(|r| rational_stand_in(&r.value)));
    }
    rho.sort_by(|a, b| b.cmp(a));

    let odd: Vec<usize> = match &opts.odd {
        None => (0..d - m).map(|i| 2 * i + 1).collect(),
        Some(v) => {
            let mut v = v.clone();
            v.sort_unstable();
            v.dedup();
            if v.len() != d - m || v.iter().any(|&i| i % 2 == 0 || i + 3 > 2 * m) {
                return Err(CospecError::BadSelection(format!(
                    "need {} distinct odd indices in 1..={}",
                    d - m,
                    2 * m - 3
                )));
            }
            v
        }
    };
    let mut selected: Vec<usize> = vec![0, 2 * m - 1];
    selected.extend((1..m).map(|i| 2 * i));
    selected.extend(odd);
    selected.sort_unstable();
    selected.dedup();
    let spectrum: Vec<Rational> = selected.iter().map(|&i| rho[i].clone()).collect();
    let q_top = Poly::from_roots(&spectrum);
    let cert = build_ops(&p_m, &q_top, &BuildOptions::default())?;
    let chain = cert.chain;
    let certificate = match is_cospectral(&chain, 0, m, CheckMode::Auto)? {
        Some(c) => c,
        None => {
            let (_, deviation) = numeric_table(&chain, 0, m);
            return Err(CospecError::CertificationFailed { deviation });
        }
    };
    Ok(BaseConstruction { m, d, p_m, epsilon, rho, selected, chain, certificate })
}

pub fn construct_cospectral_base(m: usize, d: usize) -> Result<Chain, CospecError> {
    Ok(construct_cospectral_base_with(m, d, &BaseOptions::default())?.chain)
}

/// Rational lower bound for every real zero of the nonzero polynomials given.
fn min_zero_floor(polys: &[&Poly]) -> Result<Option<Rational>, CospecError> {
    let mut best: Option<Rational> = None;
    for p in polys {
        if p.degree().unwrap_or(0) == 0 {
            continue;
        }
        let roots = isolate_real_roots(p)?;
        if let Some(first) = roots.roots().first() {
            let lo = match &first.value {
                RootValue::Exact(r) => r.clone(),
                RootValue::Isolated { lo, .. } => lo.clone(),
            };
            best = Some(match best {
                Some(b) if b <= lo => b,
                _ => lo,
            });
        }
    }
    Ok(best)
}

/// One extension step: a `(d+2)`-chain with `ℓ+1` and `m+1` cospectral,
/// obtained by adjoining the pole `u` with residue 1 on both sides.
fn extend_once(c: &Chain, l: usize, m: usize) -> Result<Chain, CospecError> {
    let d = c.d();
    let ops = c.ops();
    let p_l = ops.p(l);
    let (p_lm1, lam_l) = if l > 0 {
        (ops.p(l - 1).clone(), c.lambda_sq()[l - 1].clone())
    } else {
        (Poly::zero(), Rational::zero())
    };
    let hat = c.block_charpoly(m + 1, d as isize);
    let (hat_m1, lam_m1) = if m < d {
        (c.block_charpoly(m + 2, d as isize), c.lambda_sq()[m].clone())
    } else {
        (Poly::zero(), Rational::zero())
    };

    let floor = min_zero_floor(&[p_l, &hat])?.unwrap_or_else(Rational::zero);
    let mut u = Rational::from_integer(floor.floor().to_integer()) - Rational::one();
    while p_l.sign_at(&u) == 0 || hat.sign_at(&u) == 0 {
        u -= Rational::one();
    }
    let xu = Poly::linear(&u);

    let head_num = &(&p_lm1 * &xu).scale(&lam_l) + p_l;
    let head_top = p_l * &xu;
    let head_lead = head_num.leading().expect("nonzero").clone();
    let head = chain_from_top_pair(&head_top, &head_num.monic())?;

    let tail_num = &(&hat_m1 * &xu).scale(&lam_m1) + &hat;
    let tail_top = &hat * &xu;
    let tail_lead = tail_num.leading().expect("nonzero").clone();
    let tail = chain_from_top_pair(&tail_top, &tail_num.monic())?.reflect();

    let mut a = head.a().to_vec();
    a.extend_from_slice(&c.a()[l..=m]);
    a.extend_from_slice(tail.a());
    let mut lambda_sq = head.lambda_sq().to_vec();
    lambda_sq.push(head_lead);
    lambda_sq.extend_from_slice(&c.lambda_sq()[l..m]);
    lambda_sq.push(tail_lead);
    lambda_sq.extend_from_slice(tail.lambda_sq());
    Ok(Chain::new(a, lambda_sq)?)
}

/// Grows `c` by `k` vertices on each side of the block `ℓ..=m`, keeping the
/// pair cospectral (now at `ℓ+k`, `m+k`).
pub fn extend_cospectral(c: &Chain, l: usize, m: usize, k: usize) -> Result<Chain, CospecError> {
    if is_cospectral(c, l, m, CheckMode::Auto)?.is_none() {
        return Err(CospecError::NotCospectralInput { l, m });
    }
    let mut cur = c.clone();
    for i in 0..k {
        cur = extend_once(&cur, l + i, m + i)?;
    }
    Ok(cur)
}

#[derive(Clone, Debug)]
pub struct CospectralConstruction {
    pub chain: Chain,
    pub certificate: CospectralCertificate,
    pub reflected: bool,
}

/// A `d`-chain in which `ℓ` and `m` are cospectral.
pub fn construct_cospectral(l: usize, m: usize, d: usize) -> Result<CospectralConstruction, CospecError> {
    if !position_feasible(l, m, d) {
        return Err(CospecError::InfeasiblePosition { l, m, d });
    }
    let reflected = m + l > d;
    let (ll, mm) = if reflected { (d - m, d - l) } else { (l, m) };
    let base = construct_cospectral_base(mm - ll, d - 2 * ll)?;
    let mut chain = extend_cospectral(&base, 0, mm - ll, ll)?;
    if reflected {
        chain = chain.reflect();
    }
    let certificate = match is_cospectral(&chain, l, m, CheckMode::Auto)? {
        Some(c) => c,
        None => {
            let (_, deviation) = numeric_table(&chain, l, m);
            return Err(CospecError::CertificationFailed { deviation });
        }
    };
    Ok(CospectralConstruction { chain, certificate, reflected })
}
