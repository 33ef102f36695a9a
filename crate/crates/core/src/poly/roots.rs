//! Real-root isolation with exact Sturm sequences.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{int, sign, to_f64, Poly, PolyError, Rational};

/// Sturm sequence of the square-free part of a polynomial. Every member is
/// kept primitive so coefficient growth stays linear in the degree.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<Poly>,
}

impl SturmSequence {
    pub fn new(p: &Poly) -> Self {
        assert!(!p.is_zero(), "Sturm sequence of the zero polynomial");
        Self::from_squarefree(&squarefree_part(p))
    }

    fn from_squarefree(p: &Poly) -> Self {
        let mut seq = vec![p.primitive()];
        let d = p.derivative();
        if !d.is_zero() {
            seq.push(d.primitive());
            loop {
                let n = seq.len();
                let r = seq[n - 2].rem(&seq[n - 1]).expect("nonzero");
                if r.is_zero() {
                    break;
                }
                seq.push((-r).primitive());
            }
        }
        SturmSequence { seq }
    }

    pub fn polys(&self) -> &[Poly] {
        &self.seq
    }

    fn variations(signs: impl Iterator<Item = i32>) -> usize {
        let mut last = 0;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::variations(self.seq.iter().map(|p| p.sign_at(x)))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.seq.iter().map(|p| {
            let s = sign(p.leading().expect("nonzero"));
            let deg = p.degree().unwrap_or(0);
            if positive || deg % 2 == 0 {
                s
            } else {
                -s
            }
        }))
    }

    /// Number of distinct roots in `(lo, hi]`; `None` stands for the
    /// corresponding infinity.
    pub fn count_in(&self, lo: Option<&Rational>, hi: Option<&Rational>) -> usize {
        let vl = match lo {
            Some(x) => self.variations_at(x),
            None => self.variations_at_infinity(false),
        };
        let vh = match hi {
            Some(x) => self.variations_at(x),
            None => self.variations_at_infinity(true),
        };
        vl.saturating_sub(vh)
    }

    pub fn count_real(&self) -> usize {
        self.count_in(None, None)
    }
}

pub(crate) fn squarefree_part(p: &Poly) -> Poly {
    let g = p.gcd(&p.derivative());
    if g.degree().unwrap_or(0) == 0 {
        p.primitive()
    } else {
        p.exact_div(&g).expect("gcd divides").primitive()
    }
}

/// A power of two strictly above the absolute value of every root. Dyadic
/// bisection points then hit dyadic roots exactly.
fn cauchy_bound(p: &Poly) -> Rational {
    let lc = p.leading().expect("nonzero").abs();
    let max = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / &lc)
        .max()
        .unwrap_or_else(Rational::zero);
    let bound = Rational::one() + max;
    let mut b = Rational::one();
    while b <= bound {
        b *= int(2);
    }
    b
}

#[derive(Clone, Debug, PartialEq)]
pub enum RootValue {
    Exact(Rational),
    /// The root lies in the open interval `(lo, hi)`; `approx` is a float
    /// witness inside it.
    Isolated { lo: Rational, hi: Rational, approx: f64 },
}

impl RootValue {
    pub fn approx(&self) -> f64 {
        match self {
            RootValue::Exact(r) => to_f64(r),
            RootValue::Isolated { approx, .. } => *approx,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            RootValue::Exact(r) => Some(r),
            RootValue::Isolated { .. } => None,
        }
    }

    /// A rational point that equals the root when exact and lies inside the
    /// isolating interval otherwise.
    pub fn rational_witness(&self) -> Rational {
        match self {
            RootValue::Exact(r) => r.clone(),
            RootValue::Isolated { lo, hi, .. } => (lo + hi) / int(2),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub value: RootValue,
    pub multiplicity: usize,
}

/// Real roots in strictly increasing order.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct RootSet {
    roots: Vec<Root>,
}

impl RootSet {
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn distinct_count(&self) -> usize {
        self.roots.len()
    }

    /// Number of real roots counted with multiplicity.
    pub fn total_count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn all_simple(&self) -> bool {
        self.roots.iter().all(|r| r.multiplicity == 1)
    }

    /// All roots as exact rationals, if every root is rational.
    pub fn exact_values(&self) -> Option<Vec<Rational>> {
        self.roots.iter().map(|r| r.value.as_exact().cloned()).collect()
    }

    pub fn approx_values(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.value.approx()).collect()
    }
}

/// Isolates every real root of `p` and reports its multiplicity. Rational
/// roots are always reported exactly.
pub fn isolate_real_roots(p: &Poly) -> Result<RootSet, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if p.degree() == Some(0) {
        return Ok(RootSet::default());
    }
    let sqf = squarefree_part(p);
    let sturm = SturmSequence::from_squarefree(&sqf);
    let bound = cauchy_bound(&sqf);
    let lc = sqf.leading().expect("nonzero").abs();
    // two distinct rationals whose denominators divide lc are at least 1/lc^2 apart
    let rational_width = (lc.clone() * lc * int(2)).recip();

    let mut pending = vec![(-bound.clone(), bound)];
    let mut values = Vec::new();
    while let Some((lo, hi)) = pending.pop() {
        let n = sturm.count_in(Some(&lo), Some(&hi));
        match n {
            0 => {}
            1 => values.push(refine_single(&sqf, lo, hi, &rational_width)),
            _ => {
                let mid = (&lo + &hi) / int(2);
                // pop order: left half first
                pending.push((mid.clone(), hi));
                pending.push((lo, mid));
            }
        }
    }

    let has_repeats = p.gcd(&p.derivative()).degree().unwrap_or(0) > 0;
    let roots = values
        .into_iter()
        .map(|value| {
            let multiplicity = if has_repeats { multiplicity_of(p, &value) } else { 1 };
            Root { value, multiplicity }
        })
        .collect();
    Ok(RootSet { roots })
}

/// `sqf` has exactly one root in `(lo, hi]`.
fn refine_single(sqf: &Poly, mut lo: Rational, mut hi: Rational, rational_width: &Rational) -> RootValue {
    let s_hi = sqf.sign_at(&hi);
    if s_hi == 0 {
        return RootValue::Exact(hi);
    }
    let float_width = (&hi - &lo) / Rational::from_integer(BigInt::one() << 52u32);
    let target = if &float_width < rational_width { float_width } else { rational_width.clone() };
    while &hi - &lo > target {
        let mid = (&lo + &hi) / int(2);
        match sqf.sign_at(&mid) {
            0 => return RootValue::Exact(mid),
            s if s == s_hi => hi = mid,
            _ => lo = mid,
        }
    }
    let candidate = simplest_rational_between(&lo, &hi);
    if sqf.sign_at(&candidate) == 0 {
        return RootValue::Exact(candidate);
    }
    let approx = to_f64(&((&lo + &hi) / int(2)));
    RootValue::Isolated { lo, hi, approx }
}

fn multiplicity_of(p: &Poly, value: &RootValue) -> usize {
    match value {
        RootValue::Exact(r) => {
            let lin = Poly::linear(r);
            let mut q = p.clone();
            let mut m = 0;
            while q.sign_at(r) == 0 {
                q = q.exact_div(&lin).expect("root divides");
                m += 1;
            }
            m
        }
        RootValue::Isolated { lo, hi, .. } => {
            let mut m = 1;
            let mut g = p.clone();
            loop {
                g = g.gcd(&g.derivative());
                if g.degree().unwrap_or(0) == 0 {
                    break;
                }
                if SturmSequence::new(&g).count_in(Some(lo), Some(hi)) == 1 {
                    m += 1;
                } else {
                    break;
                }
            }
            m
        }
    }
}

/// The rational with the smallest denominator in the open interval `(lo, hi)`.
pub fn simplest_rational_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "empty interval");
    if lo.is_negative() && hi.is_positive() {
        return Rational::zero();
    }
    if !hi.is_positive() {
        return -simplest_positive(&-hi, Some(&-lo));
    }
    simplest_positive(lo, Some(hi))
}

/// Simplest rational in `(lo, hi)` with `lo >= 0`; `hi = None` is +infinity.
fn simplest_positive(lo: &Rational, hi: Option<&Rational>) -> Rational {
    let fl = lo.floor();
    let next = &fl + Rational::one();
    match hi {
        None => return next,
        Some(h) if &next < h => return next,
        _ => {}
    }
    let hi = hi.expect("bounded");
    let frac_lo = lo - &fl;
    let frac_hi = hi - &fl;
    let inner_hi = if frac_lo.is_zero() { None } else { Some(frac_lo.recip()) };
    fl + simplest_positive(&frac_hi.recip(), inner_hi.as_ref()).recip()
}

/// Exclusion interval `(lo, hi]` around a root of `low` containing no root of
/// `high` other than possibly the root itself. Exact roots get `lo = hi`.
struct Separated {
    lo: Rational,
    hi: Rational,
    exact: bool,
    common: bool,
}

fn separate(low_sqf: &Poly, root: &RootValue, high: &Poly, high_sturm: &SturmSequence, gcd: &Poly) -> Separated {
    match root {
        RootValue::Exact(r) => Separated {
            lo: r.clone(),
            hi: r.clone(),
            exact: true,
            common: high.sign_at(r) == 0,
        },
        RootValue::Isolated { lo, hi, .. } => {
            let (mut lo, mut hi) = (lo.clone(), hi.clone());
            let common = gcd.degree().unwrap_or(0) > 0
                && SturmSequence::new(gcd).count_in(Some(&lo), Some(&hi)) == 1;
            let target = usize::from(common);
            let s_hi = low_sqf.sign_at(&hi);
            while high_sturm.count_in(Some(&lo), Some(&hi)) > target {
                let mid = (&lo + &hi) / int(2);
                // an irrational root is never hit exactly
                if low_sqf.sign_at(&mid) == s_hi {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Separated { lo, hi, exact: false, common }
        }
    }
}

/// Strong interlacing of `low` into `high`: every open interval between
/// consecutive roots of `low` holds a root of `high`, and every root of `low`
/// lies strictly between the extreme roots of `high`.
pub fn strongly_interlaces(low: &Poly, high: &Poly) -> Result<bool, PolyError> {
    let dl = low.degree().ok_or(PolyError::ZeroPolynomial)?;
    let dh = high.degree().ok_or(PolyError::ZeroPolynomial)?;
    if dl >= dh {
        return Err(PolyError::DegreeOrder { low: dl, high: dh });
    }
    let low_roots = isolate_real_roots(low)?;
    let high_roots = isolate_real_roots(high)?;
    if low_roots.total_count() != dl || high_roots.total_count() != dh {
        return Err(PolyError::NonRealRoots);
    }
    if !low_roots.all_simple() {
        return Ok(false);
    }
    if dl == 0 {
        return Ok(true);
    }
    let low_sqf = squarefree_part(low);
    let high_sturm = SturmSequence::new(high);
    let gcd = low.gcd(high);
    let seps: Vec<Separated> = low_roots
        .roots()
        .iter()
        .map(|r| separate(&low_sqf, &r.value, high, &high_sturm, &gcd))
        .collect();

    let below = |s: &Separated| usize::from(s.exact && s.common);
    let first = &seps[0];
    if high_sturm.count_in(None, Some(&first.lo)) <= below(first) {
        return Ok(false);
    }
    for pair in seps.windows(2) {
        let n = high_sturm.count_in(Some(&pair[0].hi), Some(&pair[1].lo));
        if n <= below(&pair[1]) {
            return Ok(false);
        }
    }
    let last = seps.last().expect("nonempty");
    Ok(high_sturm.count_in(Some(&last.hi), None) >= 1)
}

/// A positive rational lower bound on `min |p(c)|` over the critical points
/// `c` of a polynomial with simple real roots; exact when the minimising
/// critical point is rational. `None` when `p` has no critical points.
pub fn min_abs_critical_value(p: &Poly) -> Result<Option<Rational>, PolyError> {
    let deg = p.degree().ok_or(PolyError::ZeroPolynomial)?;
    let roots = isolate_real_roots(p)?;
    if roots.total_count() != deg || !roots.all_simple() {
        return Err(PolyError::NotSimpleRealRooted);
    }
    if deg <= 1 {
        return Ok(None);
    }
    let dp = p.derivative();
    let crit = isolate_real_roots(&dp)?;
    let sturm = SturmSequence::new(p);
    let mut best: Option<Rational> = None;
    for c in crit.roots() {
        let bound = match &c.value {
            RootValue::Exact(x) => p.eval(x).abs(),
            RootValue::Isolated { lo, hi, .. } => {
                let (mut lo, mut hi) = (lo.clone(), hi.clone());
                let s_hi = dp.sign_at(&hi);
                // |p| is unimodal between consecutive roots with its peak at c,
                // so once the interval holds no root of p its endpoints bound |p(c)|
                while sturm.count_in(Some(&lo), Some(&hi)) > 0 || p.sign_at(&lo) == 0 {
                    let mid = (&lo + &hi) / int(2);
                    if dp.sign_at(&mid) == s_hi {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let (a, b) = (p.eval(&lo).abs(), p.eval(&hi).abs());
                if a > b {
                    a
                } else {
                    b
                }
            }
        };
        best = Some(match best {
            Some(b) if b <= bound => b,
            _ => bound,
        });
    }
    Ok(best)
}
