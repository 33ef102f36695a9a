//! Weighted linear chains and their orthogonal polynomial sequences.
//!
//! A chain on vertices `0..=d` is the symmetric tridiagonal matrix with
//! diagonal `a_k` and off-diagonal `λ_k` between vertices `k-1` and `k`.
//! Couplings are stored squared so that every construction stays rational.

mod spectral;

pub use spectral::{eigen, eigen_numeric, transition_amplitude, Eigenvalue, SpectralData};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::{Poly, PolyError, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("a chain needs at least one vertex")]
    Empty,
    #[error("expected {expected} couplings for {vertices} vertices, got {got}")]
    LengthMismatch { vertices: usize, expected: usize, got: usize },
    #[error("coupling lambda_{index}^2 = {value} is not positive")]
    NonPositiveCoupling { index: usize, value: Rational },
    #[error("remainder at step {step} has the wrong degree")]
    DegreeDrop { step: usize },
    #[error("vertex index {index} out of range for d = {d}")]
    IndexOutOfRange { index: usize, d: usize },
    #[error("top pair must be monic with degrees differing by one")]
    BadTopPair,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    a: Vec<Rational>,
    lambda_sq: Vec<Rational>,
}

impl Chain {
    pub fn new(a: Vec<Rational>, lambda_sq: Vec<Rational>) -> Result<Self, ChainError> {
        if a.is_empty() {
            return Err(ChainError::Empty);
        }
        if lambda_sq.len() + 1 != a.len() {
            return Err(ChainError::LengthMismatch {
                vertices: a.len(),
                expected: a.len() - 1,
                got: lambda_sq.len(),
            });
        }
        if let Some((i, v)) = lambda_sq.iter().enumerate().find(|(_, v)| !v.is_positive()) {
            return Err(ChainError::NonPositiveCoupling { index: i + 1, value: v.clone() });
        }
        Ok(Chain { a, lambda_sq })
    }

    /// Builds a matrix without checking couplings; only the lengths must agree.
    /// Useful for exercising the validators on forged input.
    pub fn new_unchecked(a: Vec<Rational>, lambda_sq: Vec<Rational>) -> Self {
        assert_eq!(a.len(), lambda_sq.len() + 1, "inconsistent lengths");
        Chain { a, lambda_sq }
    }

    /// The unweighted path on `n` vertices.
    pub fn path(n: usize) -> Self {
        assert!(n > 0);
        Chain { a: vec![Rational::zero(); n], lambda_sq: vec![Rational::one(); n - 1] }
    }

    pub fn from_ints(a: &[i64], lambda_sq: &[i64]) -> Result<Self, ChainError> {
        let conv = |v: &[i64]| v.iter().map(|&x| Rational::from_integer(x.into())).collect();
        Chain::new(conv(a), conv(lambda_sq))
    }

    /// Largest vertex index; the chain has `d + 1` vertices.
    pub fn d(&self) -> usize {
        self.lambda_sq.len()
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    /// `lambda_sq()[k-1]` is `λ_k²`.
    pub fn lambda_sq(&self) -> &[Rational] {
        &self.lambda_sq
    }

    pub fn is_valid(&self) -> bool {
        self.lambda_sq.iter().all(Signed::is_positive)
    }

    pub fn lambdas_f64(&self) -> Vec<f64> {
        self.lambda_sq.iter().map(|l| crate::poly::to_f64(l).sqrt()).collect()
    }

    /// Reverses the vertex order.
    pub fn reflect(&self) -> Chain {
        let mut a = self.a.clone();
        a.reverse();
        let mut l = self.lambda_sq.clone();
        l.reverse();
        Chain { a, lambda_sq: l }
    }

    fn check_vertex(&self, v: usize) -> Result<(), ChainError> {
        if v > self.d() {
            Err(ChainError::IndexOutOfRange { index: v, d: self.d() })
        } else {
            Ok(())
        }
    }

    pub fn ops(&self) -> OPSequence {
        OPSequence { polys: self.block_sequence(0, self.d()) }
    }

    /// Characteristic polynomial `p_{d+1}` of the whole chain.
    pub fn charpoly(&self) -> Poly {
        self.block_charpoly(0, self.d() as isize)
    }

    /// Leading principal polynomials of the block `lo..=hi`.
    fn block_sequence(&self, lo: usize, hi: usize) -> Vec<Poly> {
        let mut seq = vec![Poly::one()];
        let mut prev = Poly::zero();
        for v in lo..=hi {
            let cur = seq.last().expect("nonempty").clone();
            let mut next = &cur * &Poly::linear(&self.a[v]);
            if v > lo {
                next = &next - &prev.scale(&self.lambda_sq[v - 1]);
            }
            prev = cur;
            seq.push(next);
        }
        seq
    }

    /// Characteristic polynomial of the vertices `lo..=hi`; an empty block
    /// (`hi < lo`) gives 1.
    pub fn block_charpoly(&self, lo: usize, hi: isize) -> Poly {
        if hi < lo as isize {
            return Poly::one();
        }
        self.block_sequence(lo, hi as usize).pop().expect("nonempty")
    }

    /// `(p̂, p̄)`: `p̂` is the characteristic polynomial of the vertices after
    /// `m`, `p̄` that of the vertices strictly between `m` and `d` (zero when
    /// `m = d`). These make the Christoffel–Darboux relation
    /// `p̂·p_d − p̄·p_{d+1} = (Π_{t>m} λ_t²)·p_m` an identity.
    pub fn subchain_polys(&self, m: usize) -> Result<(Poly, Poly), ChainError> {
        self.check_vertex(m)?;
        let d = self.d();
        let hat = self.block_charpoly(m + 1, d as isize);
        let bar = if m == d { Poly::zero() } else { self.block_charpoly(m + 1, d as isize - 1) };
        Ok((hat, bar))
    }

    /// `Π_{t=lo}^{hi} λ_t²` (1 for an empty range).
    pub fn coupling_product(&self, lo: usize, hi: usize) -> Rational {
        let mut acc = Rational::one();
        for t in lo..=hi {
            if t >= 1 && t <= self.d() {
                acc *= &self.lambda_sq[t - 1];
            }
        }
        acc
    }

    /// Checks the Christoffel–Darboux relation at `m` exactly. Invalid chains
    /// are rejected outright.
    pub fn cd_identity_check(&self, m: usize) -> bool {
        if !self.is_valid() || m > self.d() {
            return false;
        }
        let d = self.d();
        let ops = self.ops();
        let (hat, bar) = self.subchain_polys(m).expect("in range");
        let lhs = &(&hat * ops.p(d)) - &(&bar * ops.p(d + 1));
        let rhs = ops.p(m).scale(&self.coupling_product(m + 1, d));
        lhs == rhs
    }

    /// Product of the characteristic polynomials of the blocks left after
    /// deleting `removed`.
    pub fn vertex_deleted_charpoly(&self, removed: &[usize]) -> Result<Poly, ChainError> {
        for &v in removed {
            self.check_vertex(v)?;
        }
        let mut acc = Poly::one();
        let mut start = 0usize;
        for v in 0..=self.d() + 1 {
            if v == self.d() + 1 || removed.contains(&v) {
                acc = &acc * &self.block_charpoly(start, v as isize - 1);
                start = v + 1;
            }
        }
        Ok(acc)
    }

    /// `α_v = φ / φ_{∖v}` in lowest terms.
    pub fn alpha(&self, v: usize) -> Result<RationalFn, ChainError> {
        self.check_vertex(v)?;
        let den = self.vertex_deleted_charpoly(&[v])?;
        Ok(RationalFn::new(self.charpoly(), den)?)
    }
}

/// `p_0 = 1, p_1, …, p_{d+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct OPSequence {
    polys: Vec<Poly>,
}

impl OPSequence {
    pub fn p(&self, k: usize) -> &Poly {
        &self.polys[k]
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn top(&self) -> &Poly {
        self.polys.last().expect("nonempty")
    }
}

/// A quotient of polynomials kept coprime with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_zero() || g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        let lc = den.leading().expect("nonzero").clone();
        if !lc.is_one() {
            num = num.scale(&lc.recip());
            den = den.monic();
        }
        Ok(RationalFn { num, den })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }
}

/// Recovers the chain whose characteristic polynomial is `p_top` and whose
/// `p_d` is `p_next` by running the three-term recurrence downward.
pub fn chain_from_top_pair(p_top: &Poly, p_next: &Poly) -> Result<Chain, ChainError> {
    let top_deg = p_top.degree().ok_or(PolyError::ZeroPolynomial)?;
    if !p_top.is_monic() || !p_next.is_monic() || p_next.degree() != top_deg.checked_sub(1) {
        return Err(ChainError::BadTopPair);
    }
    let d = top_deg - 1;
    let mut a = vec![Rational::zero(); d + 1];
    let mut lambda_sq = vec![Rational::zero(); d];
    let mut upper = p_top.clone();
    let mut lower = p_next.clone();
    for k in (0..=d).rev() {
        let (q, r) = upper.div_rem(&lower)?;
        a[k] = -q.coeff(0);
        if k == 0 {
            if !r.is_zero() {
                return Err(ChainError::DegreeDrop { step: 0 });
            }
            break;
        }
        if r.degree() != Some(k - 1) {
            return Err(ChainError::DegreeDrop { step: k });
        }
        let l = -r.leading().expect("nonzero").clone();
        if !l.is_positive() {
            return Err(ChainError::NonPositiveCoupling { index: k, value: l });
        }
        let next = r.scale(&-l.recip());
        lambda_sq[k - 1] = l;
        upper = lower;
        lower = next;
    }
    Chain::new(a, lambda_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};
    use proptest::prelude::*;

    fn example_3chain() -> Chain {
        // top pair (x^4 - 5x^2 + 4, ·) with p_2 = x^2 - 5/2
        Chain::new(vec![int(0); 4], vec![rat(5, 2), rat(9, 10), rat(8, 5)]).unwrap()
    }

    #[test]
    fn path_polynomials() {
        let p = Chain::path(3);
        assert_eq!(p.charpoly(), Poly::from_ints(&[0, -2, 0, 1]));
        assert_eq!(Chain::from_ints(&[0], &[]).unwrap().charpoly(), Poly::x());
        let (hat, _) = p.subchain_polys(2).unwrap();
        assert_eq!(hat, Poly::one());
        let (hat, bar) = p.subchain_polys(1).unwrap();
        assert_eq!(hat, Poly::x());
        assert_eq!(bar, Poly::one());
        assert!(matches!(p.subchain_polys(3), Err(ChainError::IndexOutOfRange { .. })));
    }

    #[test]
    fn validation() {
        assert_eq!(Chain::new(vec![], vec![]), Err(ChainError::Empty));
        assert!(matches!(Chain::from_ints(&[0, 0], &[]), Err(ChainError::LengthMismatch { .. })));
        assert!(matches!(
            Chain::from_ints(&[0, 0], &[0]),
            Err(ChainError::NonPositiveCoupling { index: 1, .. })
        ));
    }

    #[test]
    fn example_chain_ops() {
        let c = example_3chain();
        let ops = c.ops();
        assert_eq!(ops.p(2), &Poly::new(vec![rat(-5, 2), int(0), int(1)]));
        assert_eq!(ops.top(), &Poly::from_int_roots(&[1, -1, 2, -2]));
    }

    #[test]
    fn cd_identity_on_path_and_forgery() {
        let p = Chain::path(3);
        assert!((0..=2).all(|m| p.cd_identity_check(m)));
        let forged = Chain::new_unchecked(vec![int(0); 3], vec![int(1), int(-1)]);
        assert!(!forged.cd_identity_check(1));
    }

    #[test]
    fn alpha_examples() {
        let single = Chain::from_ints(&[0], &[]).unwrap();
        let al = single.alpha(0).unwrap();
        assert_eq!((al.num(), al.den()), (&Poly::x(), &Poly::one()));
        let p = Chain::path(3);
        let a0 = p.alpha(0).unwrap();
        assert_eq!(a0.num(), &Poly::from_ints(&[0, -2, 0, 1]));
        assert_eq!(a0.den(), &Poly::from_ints(&[-1, 0, 1]));
        assert_eq!(a0, p.alpha(2).unwrap());
    }

    #[test]
    fn top_pair_examples() {
        let c = chain_from_top_pair(&Poly::from_ints(&[0, -2, 0, 1]), &Poly::from_ints(&[-1, 0, 1])).unwrap();
        assert_eq!(c, Chain::path(3));
        let c = chain_from_top_pair(&Poly::from_ints(&[-1, 0, 1]), &Poly::x()).unwrap();
        assert_eq!(c, Chain::path(2));
        // roots of the lower polynomial outside the upper's range
        assert!(matches!(
            chain_from_top_pair(&Poly::from_ints(&[-1, 0, 1]), &Poly::from_int_roots(&[3])),
            Err(ChainError::NonPositiveCoupling { .. })
        ));
        assert!(matches!(
            chain_from_top_pair(&Poly::from_ints(&[0, 0, 1]), &Poly::x()),
            Err(ChainError::DegreeDrop { step: 1 })
        ));
        assert_eq!(chain_from_top_pair(&Poly::x(), &Poly::x()), Err(ChainError::BadTopPair));
    }

    #[test]
    fn deleted_charpoly() {
        let p = Chain::path(5);
        assert_eq!(p.vertex_deleted_charpoly(&[2]).unwrap(), Poly::from_ints(&[-1, 0, 1]).pow(2));
        assert_eq!(p.vertex_deleted_charpoly(&[]).unwrap(), p.charpoly());
        assert_eq!(p.vertex_deleted_charpoly(&[0, 1, 2, 3, 4]).unwrap(), Poly::one());
    }

    pub(crate) fn arb_chain(max_d: usize) -> impl Strategy<Value = Chain> {
        (0..=max_d).prop_flat_map(|d| {
            (
                prop::collection::vec((-6i64..=6, 1i64..=4), d + 1),
                prop::collection::vec((1i64..=9, 1i64..=4), d),
            )
                .prop_map(|(a, l)| {
                    Chain::new(
                        a.into_iter().map(|(n, q)| rat(n, q)).collect(),
                        l.into_iter().map(|(n, q)| rat(n, q)).collect(),
                    )
                    .unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn top_pair_round_trip(c in arb_chain(8)) {
            let ops = c.ops();
            let d = c.d();
            prop_assert_eq!(chain_from_top_pair(ops.p(d + 1), ops.p(d)).unwrap(), c);
        }

        #[test]
        fn cd_identity_everywhere(c in arb_chain(8)) {
            for m in 0..=c.d() {
                prop_assert!(c.cd_identity_check(m));
            }
        }

        #[test]
        fn bar_is_the_exact_quotient(c in arb_chain(7)) {
            let d = c.d();
            let ops = c.ops();
            for m in 0..d {
                let (hat, bar) = c.subchain_polys(m).unwrap();
                let num = &(&hat * ops.p(d)) - &ops.p(m).scale(&c.coupling_product(m + 1, d));
                prop_assert_eq!(num.exact_div(ops.p(d + 1)).unwrap(), bar);
            }
        }

        #[test]
        fn consecutive_gcds_agree(c in arb_chain(7), m in 0usize..8) {
            let m = m.min(c.d());
            let ops = c.ops();
            let (hat, _) = c.subchain_polys(m).unwrap();
            let top = ops.top();
            let g1 = ops.p(m).gcd(top);
            prop_assert_eq!(&g1, &hat.gcd(top));
            prop_assert_eq!(&g1, &ops.p(m).gcd(&hat));
        }

        #[test]
        fn every_p_m_interlaces_the_top(c in arb_chain(6), m in 1usize..7) {
            let m = m.min(c.d());
            let ops = c.ops();
            if m >= 1 {
                prop_assert!(crate::poly::strongly_interlaces(ops.p(m), ops.top()).unwrap());
            }
        }
    }
}
