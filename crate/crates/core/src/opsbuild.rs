//! Orthogonal polynomial sequences through two prescribed polynomials.
//!
//! Given monic `q_m` and `q_{d+1}` that strongly interlace, builds `q̂_{d-m}`,
//! spectral weights `τ_s` and from them `q_d` with
//! `q_d / q_{d+1} = Σ τ_s / (x − θ_s)`; the chain is then read off by the
//! downward recurrence.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::chain::{chain_from_top_pair, Chain, ChainError};
use crate::poly::{int, isolate_real_roots, residues_at, strongly_interlaces, Poly, PolyError, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error("q_m and q_top do not strongly interlace")]
    InterlacingViolation,
    #[error("inputs must be monic")]
    NotMonic,
    #[error("q_top must have distinct real zeros")]
    NotSimpleRealRooted,
    #[error("the exact construction needs rational zeros of q_top")]
    IrrationalSpectrum,
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("internal failure at {stage}: {source}")]
    Internal { stage: &'static str, source: ChainError },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub enum MuStrategy {
    #[default]
    Midpoint,
    /// One value per empty interval, listed from the top of the spectrum down.
    Supplied(Vec<Rational>),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BuildOptions {
    pub mu: MuStrategy,
    /// Positive weights on the common zeros, in the order of `common_zeros`.
    pub rho: Option<Vec<Rational>>,
    /// Overrides `Λ` when `J` is non-empty.
    pub lambda_cap: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Weights {
    pub lambda: Rational,
    pub rho: Vec<Rational>,
    pub tau: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BuildCertificate {
    pub m: usize,
    pub d: usize,
    pub q_m: Poly,
    pub q_top: Poly,
    /// Zeros of `q_top`, decreasing.
    pub spectrum: Vec<Rational>,
    pub j: Vec<usize>,
    pub mu: Vec<Rational>,
    pub q_hat: Poly,
    pub lambda: Rational,
    pub rho: Vec<Rational>,
    pub tau: Vec<Rational>,
    pub q_d: Poly,
    pub chain: Chain,
}

impl BuildCertificate {
    /// Re-checks every claim of the certificate with exact arithmetic.
    pub fn verify(&self) -> bool {
        let ops = self.chain.ops();
        let sum: Rational = self.tau.iter().fold(Rational::zero(), |a, t| a + t);
        let hat_ok = self
            .chain
            .subchain_polys(self.m)
            .map(|(hat, _)| hat == self.q_hat)
            .unwrap_or(false);
        self.chain.d() == self.d
            && ops.p(self.m) == &self.q_m
            && ops.p(self.d + 1) == &self.q_top
            && ops.p(self.d) == &self.q_d
            && self.tau.iter().all(Signed::is_positive)
            && sum.is_one()
            && hat_ok
    }
}

/// Decreasing exact zeros of `q_top`.
pub fn exact_spectrum(q_top: &Poly) -> Result<Vec<Rational>, BuildError> {
    let deg = q_top.degree().ok_or(PolyError::ZeroPolynomial)?;
    let roots = isolate_real_roots(q_top)?;
    if roots.total_count() != deg || !roots.all_simple() {
        return Err(BuildError::NotSimpleRealRooted);
    }
    let mut v = roots.exact_values().ok_or(BuildError::IrrationalSpectrum)?;
    v.reverse();
    Ok(v)
}

/// Indices `s` (zeros of `q_top` in decreasing order) with `q_m(θ_s) = 0`.
pub fn common_zeros(q_m: &Poly, q_top: &Poly) -> Result<Vec<usize>, BuildError> {
    let spectrum = exact_spectrum(q_top)?;
    Ok(common_zeros_on(q_m, &spectrum))
}

fn common_zeros_on(q_m: &Poly, spectrum: &[Rational]) -> Vec<usize> {
    (0..spectrum.len()).filter(|&s| q_m.sign_at(&spectrum[s]) == 0).collect()
}

/// Indices `s` such that the closed interval `[θ_{s+1}, θ_s]` holds no zero of `q_m`.
fn empty_intervals(q_m: &Poly, spectrum: &[Rational]) -> Vec<usize> {
    let sturm = crate::poly::SturmSequence::new(q_m);
    (0..spectrum.len().saturating_sub(1))
        .filter(|&s| {
            let (lo, hi) = (&spectrum[s + 1], &spectrum[s]);
            q_m.sign_at(lo) != 0 && sturm.count_in(Some(lo), Some(hi)) == 0
        })
        .collect()
}

fn check_inputs(q_m: &Poly, q_top: &Poly) -> Result<Vec<Rational>, BuildError> {
    if !q_m.is_monic() || !q_top.is_monic() {
        return Err(BuildError::NotMonic);
    }
    let spectrum = exact_spectrum(q_top)?;
    match strongly_interlaces(q_m, q_top) {
        Ok(true) => Ok(spectrum),
        Ok(false) | Err(PolyError::NonRealRoots) => Err(BuildError::InterlacingViolation),
        Err(e) => Err(e.into()),
    }
}

/// `q̂_{d−m}`: one `μ` inside each empty interval times the common factor.
/// Returns the polynomial and the chosen `μ`'s.
pub fn build_q_hat(q_m: &Poly, q_top: &Poly, opts: &BuildOptions) -> Result<(Poly, Vec<Rational>), BuildError> {
    let spectrum = check_inputs(q_m, q_top)?;
    q_hat_on(q_m, &spectrum, opts)
}

fn q_hat_on(q_m: &Poly, spectrum: &[Rational], opts: &BuildOptions) -> Result<(Poly, Vec<Rational>), BuildError> {
    let empty = empty_intervals(q_m, spectrum);
    let j = common_zeros_on(q_m, spectrum);
    let d = spectrum.len() - 1;
    let m = q_m.degree().unwrap_or(0);
    if empty.len() + j.len() != d - m {
        return Err(BuildError::InterlacingViolation);
    }
    let mu: Vec<Rational> = match &opts.mu {
        MuStrategy::Midpoint => empty.iter().map(|&s| (&spectrum[s] + &spectrum[s + 1]) / int(2)).collect(),
        MuStrategy::Supplied(v) => {
            if v.len() != empty.len() {
                return Err(BuildError::InvalidOption(format!(
                    "expected {} values of mu, got {}",
                    empty.len(),
                    v.len()
                )));
            }
            for (x, &s) in v.iter().zip(&empty) {
                if !(x > &spectrum[s + 1] && x < &spectrum[s]) {
                    return Err(BuildError::InvalidOption(format!(
                        "mu = {x} is not inside ({}, {})",
                        spectrum[s + 1],
                        spectrum[s]
                    )));
                }
            }
            v.clone()
        }
    };
    let mut roots = mu.clone();
    roots.extend(j.iter().map(|&s| spectrum[s].clone()));
    Ok((Poly::from_roots(&roots), mu))
}

/// The values `(q_m/q̂)(θ_s) / Π_{r≠s}(θ_s − θ_r)` with the common factor
/// cancelled first.
fn raw_terms(q_m: &Poly, q_hat: &Poly, spectrum: &[Rational]) -> Result<Vec<Rational>, BuildError> {
    let g = q_m.gcd(q_hat);
    let (num, den) = if g.is_constant() { (q_m.clone(), q_hat.clone()) } else { (q_m.exact_div(&g)?, q_hat.exact_div(&g)?) };
    let den_vals: Vec<Rational> = spectrum.iter().map(|t| den.eval(t)).collect();
    if den_vals.iter().any(Zero::is_zero) {
        return Err(BuildError::InterlacingViolation);
    }
    let res = residues_at(&num, spectrum);
    Ok(res.into_iter().zip(den_vals).map(|(r, dv)| r / dv).collect())
}

/// `Λ`, `ρ` and the weights `τ_s = Λ·raw_s + ρ_s`.
pub fn choose_weights(q_m: &Poly, q_hat: &Poly, spectrum: &[Rational], opts: &BuildOptions) -> Result<Weights, BuildError> {
    let raw = raw_terms(q_m, q_hat, spectrum)?;
    let j = common_zeros_on(q_m, spectrum);
    let n = spectrum.len();
    let raw_sum: Rational = raw.iter().fold(Rational::zero(), |a, x| a + x);
    let mut rho = vec![Rational::zero(); n];

    let lambda = if j.is_empty() {
        if opts.rho.as_ref().is_some_and(|r| !r.is_empty()) {
            return Err(BuildError::InvalidOption("rho given but q_m and q_top share no zero".into()));
        }
        if !raw_sum.is_positive() {
            return Err(BuildError::InterlacingViolation);
        }
        raw_sum.recip()
    } else {
        let bound = Rational::new(1.into(), (2 * n).into());
        let max_raw = raw.iter().map(Signed::abs).max().expect("nonempty");
        let lambda = match (&opts.lambda_cap, &opts.rho) {
            (Some(l), _) => l.clone(),
            (None, Some(r)) => {
                let rs: Rational = r.iter().fold(Rational::zero(), |a, x| a + x);
                if raw_sum.is_zero() {
                    return Err(BuildError::InvalidOption("rho cannot fix lambda here; supply lambda too".into()));
                }
                (Rational::one() - rs) / &raw_sum
            }
            (None, None) => {
                let mut l = Rational::one();
                while &max_raw * &l >= bound {
                    l /= int(2);
                }
                l
            }
        };
        if !lambda.is_positive() {
            return Err(BuildError::InvalidOption(format!("lambda = {lambda} must be positive")));
        }
        match &opts.rho {
            Some(r) => {
                if r.len() != j.len() || r.iter().any(|x| !x.is_positive()) {
                    return Err(BuildError::InvalidOption(format!(
                        "rho needs {} positive values",
                        j.len()
                    )));
                }
                for (&s, x) in j.iter().zip(r) {
                    rho[s] = x.clone();
                }
            }
            None => {
                let share = (Rational::one() - &lambda * &raw_sum) / int(j.len() as i64);
                for &s in &j {
                    rho[s] = share.clone();
                }
            }
        }
        lambda
    };

    let tau: Vec<Rational> = raw.iter().zip(&rho).map(|(r, p)| &lambda * r + p).collect();
    let sum: Rational = tau.iter().fold(Rational::zero(), |a, x| a + x);
    if !sum.is_one() {
        return Err(BuildError::InvalidOption(format!("weights sum to {sum}, not 1")));
    }
    if let Some(t) = tau.iter().find(|t| !t.is_positive()) {
        return Err(BuildError::InvalidOption(format!("weight {t} is not positive")));
    }
    Ok(Weights { lambda, rho, tau })
}

/// `q_d = Σ τ_s Π_{r≠s}(x − θ_r)`.
pub fn q_d_from_weights(spectrum: &[Rational], tau: &[Rational]) -> Poly {
    let terms: Vec<(Rational, Rational)> = spectrum.iter().cloned().zip(tau.iter().cloned()).collect();
    crate::poly::reconstruct_numerator(&terms)
}

/// Builds a chain whose orthogonal polynomials pass through `q_m` and `q_top`.
pub fn build_ops(q_m: &Poly, q_top: &Poly, opts: &BuildOptions) -> Result<BuildCertificate, BuildError> {
    let spectrum = check_inputs(q_m, q_top)?;
    let m = q_m.degree().expect("monic");
    let d = spectrum.len() - 1;
    let (q_hat, mu) = q_hat_on(q_m, &spectrum, opts)?;
    let Weights { lambda, rho, tau } = choose_weights(q_m, &q_hat, &spectrum, opts)?;
    let q_d = q_d_from_weights(&spectrum, &tau);
    let chain = chain_from_top_pair(q_top, &q_d).map_err(|source| BuildError::Internal { stage: "downward recurrence", source })?;
    let cert = BuildCertificate {
        m,
        d,
        q_m: q_m.clone(),
        q_top: q_top.clone(),
        spectrum: spectrum.clone(),
        j: common_zeros_on(q_m, &spectrum),
        mu,
        q_hat,
        lambda,
        rho,
        tau,
        q_d,
        chain,
    };
    if !cert.verify() {
        return Err(BuildError::Internal {
            stage: "certificate",
            source: ChainError::BadTopPair,
        });
    }
    Ok(cert)
}
