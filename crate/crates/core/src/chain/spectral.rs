use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{Chain, ChainError};
use crate::poly::{isolate_real_roots, sign, to_f64, Rational, RootValue};

#[derive(Clone, Debug, PartialEq)]
pub enum Eigenvalue {
    Exact(Rational),
    /// Inside the open interval `(lo, hi)`.
    Isolated { lo: Rational, hi: Rational, approx: f64 },
    /// Float-only estimate from the numeric solver.
    Numeric(f64),
}

impl Eigenvalue {
    pub fn approx(&self) -> f64 {
        match self {
            Eigenvalue::Exact(r) => to_f64(r),
            Eigenvalue::Isolated { approx, .. } => *approx,
            Eigenvalue::Numeric(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Eigenvalue::Exact(r) => Some(r),
            _ => None,
        }
    }
}

impl From<RootValue> for Eigenvalue {
    fn from(v: RootValue) -> Self {
        match v {
            RootValue::Exact(r) => Eigenvalue::Exact(r),
            RootValue::Isolated { lo, hi, approx } => Eigenvalue::Isolated { lo, hi, approx },
        }
    }
}

/// Eigenvalues in decreasing order with unit eigenvectors.
#[derive(Clone, Debug)]
pub struct SpectralData {
    eigenvalues: Vec<Eigenvalue>,
    /// `vectors[s][k]` is entry `k` of the eigenvector for `θ_s`.
    vectors: Vec<Vec<f64>>,
    /// Squared norms of the unnormalised vectors `p_k(θ_s)/(λ_1⋯λ_k)`.
    norms_sq: Vec<f64>,
    /// Exact squared entries of the unit eigenvectors where `θ_s` is rational.
    exact_sq: Vec<Option<Vec<Rational>>>,
}

impl SpectralData {
    pub fn eigenvalues(&self) -> &[Eigenvalue] {
        &self.eigenvalues
    }

    pub fn values_f64(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(Eigenvalue::approx).collect()
    }

    /// All eigenvalues as exact rationals, if every one is rational.
    pub fn exact_values(&self) -> Option<Vec<Rational>> {
        self.eigenvalues.iter().map(|e| e.as_exact().cloned()).collect()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn norms(&self) -> Vec<f64> {
        self.norms_sq.iter().map(|n| n.sqrt()).collect()
    }

    /// `⟨k|θ_s⟩²` exactly, when `θ_s` is rational.
    pub fn exact_square_entry(&self, s: usize, k: usize) -> Option<&Rational> {
        self.exact_sq[s].as_ref().map(|v| &v[k])
    }

    /// `⟨m| exp(itJ) |ℓ⟩`.
    pub fn amplitude(&self, t: f64, l: usize, m: usize) -> Complex64 {
        self.eigenvalues
            .iter()
            .zip(&self.vectors)
            .map(|(th, v)| Complex64::from_polar(v[l] * v[m], t * th.approx()))
            .sum()
    }

    pub fn transition_matrix(&self, t: f64) -> Vec<Vec<Complex64>> {
        let n = self.vectors.len();
        (0..n).map(|i| (0..n).map(|j| self.amplitude(t, j, i)).collect()).collect()
    }

    /// Largest `‖Jv − θv‖∞` over the eigenpairs.
    pub fn residual(&self, c: &Chain) -> f64 {
        let a: Vec<f64> = c.a().iter().map(to_f64).collect();
        let l = c.lambdas_f64();
        let n = a.len();
        let mut worst = 0f64;
        for (th, v) in self.eigenvalues.iter().zip(&self.vectors) {
            let th = th.approx();
            for i in 0..n {
                let mut jv = a[i] * v[i];
                if i > 0 {
                    jv += l[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    jv += l[i] * v[i + 1];
                }
                worst = worst.max((jv - th * v[i]).abs());
            }
        }
        worst
    }

    /// Largest deviation of `VᵀV` from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0f64;
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, v) in self.vectors.iter().enumerate() {
                let dot: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Exact spectral data: eigenvalues come from isolating the roots of
/// `p_{d+1}` (rational ones exactly) and eigenvectors from
/// `⟨k|θ⟩ ∝ p_k(θ)/(λ_1⋯λ_k)`.
pub fn eigen(c: &Chain) -> SpectralData {
    let ops = c.ops();
    let d = c.d();
    let roots = isolate_real_roots(ops.top()).expect("characteristic polynomial is nonzero");
    let mut eigenvalues = Vec::with_capacity(d + 1);
    let mut vectors = Vec::with_capacity(d + 1);
    let mut norms_sq = Vec::with_capacity(d + 1);
    let mut exact_sq = Vec::with_capacity(d + 1);
    for root in roots.roots().iter().rev() {
        let w = root.value.rational_witness();
        let mut weights = Vec::with_capacity(d + 1);
        let mut signs = Vec::with_capacity(d + 1);
        let mut prod = Rational::one();
        for k in 0..=d {
            if k > 0 {
                prod *= &c.lambda_sq()[k - 1];
            }
            let val = ops.p(k).eval(&w);
            signs.push(sign(&val));
            weights.push(&val * &val / &prod);
        }
        let total: Rational = weights.iter().fold(Rational::zero(), |acc, x| acc + x);
        let unit: Vec<Rational> = weights.iter().map(|x| x / &total).collect();
        vectors.push(
            unit.iter()
                .zip(&signs)
                .map(|(x, &s)| f64::from(s) * to_f64(x).sqrt())
                .collect(),
        );
        norms_sq.push(to_f64(&total));
        exact_sq.push(root.value.as_exact().map(|_| unit));
        eigenvalues.push(Eigenvalue::from(root.value.clone()));
    }
    SpectralData { eigenvalues, vectors, norms_sq, exact_sq }
}

/// Number of eigenvalues below `x`, from the signs of the LDLᵀ pivots of
/// `J − xI`.
fn count_below(a: &[f64], l2: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0f64;
    for i in 0..a.len() {
        q = if i == 0 { a[0] - x } else { a[i] - x - l2[i - 1] / q };
        if q == 0.0 {
            q = -f64::EPSILON * (a[i].abs() + x.abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solves a tridiagonal system with partial pivoting (diagonal `d`,
/// sub/super-diagonal `e`); `b` is overwritten with the solution.
fn solve_tridiagonal(diag: &[f64], e: &[f64], b: &mut [f64]) {
    let n = diag.len();
    let mut dl: Vec<f64> = e.to_vec();
    let mut dd: Vec<f64> = diag.to_vec();
    let mut du: Vec<f64> = e.to_vec();
    let mut du2 = vec![0f64; n.saturating_sub(2)];
    for i in 0..n.saturating_sub(1) {
        if dd[i].abs() >= dl[i].abs() {
            if dd[i] == 0.0 {
                dd[i] = f64::MIN_POSITIVE;
            }
            let f = dl[i] / dd[i];
            dd[i + 1] -= f * du[i];
            b[i + 1] -= f * b[i];
            dl[i] = 0.0;
        } else {
            let f = dd[i] / dl[i];
            dd[i] = dl[i];
            let tmp = dd[i + 1];
            dd[i + 1] = du[i] - f * tmp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -f;
            }
            du[i] = tmp;
            b.swap(i, i + 1);
            b[i + 1] -= f * b[i];
        }
    }
    if dd[n - 1] == 0.0 {
        dd[n - 1] = f64::MIN_POSITIVE;
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s -= du[i] * b[i + 1];
        }
        if i + 2 < n {
            s -= du2[i] * b[i + 2];
        }
        b[i] = s / dd[i];
    }
}

/// Float-only spectral data by Sturm bisection and inverse iteration, for
/// chains whose entries are too large for exact root isolation to pay off.
pub fn eigen_numeric(c: &Chain) -> SpectralData {
    let a: Vec<f64> = c.a().iter().map(to_f64).collect();
    let l2: Vec<f64> = c.lambda_sq().iter().map(to_f64).collect();
    let l: Vec<f64> = l2.iter().map(|x| x.sqrt()).collect();
    let n = a.len();
    let radius = (0..n)
        .map(|i| {
            let left = if i > 0 { l[i - 1] } else { 0.0 };
            let right = if i + 1 < n { l[i] } else { 0.0 };
            a[i].abs() + left + right
        })
        .fold(0f64, f64::max)
        .max(f64::MIN_POSITIVE);

    let mut values = Vec::with_capacity(n);
    for j in (0..n).rev() {
        // eigenvalue with exactly j eigenvalues below it
        let (mut lo, mut hi) = (-radius - 1.0, radius + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if count_below(&a, &l2, mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        values.push(0.5 * (lo + hi));
    }

    let mut vectors = Vec::with_capacity(n);
    for &th in &values {
        let shift = th + 4.0 * f64::EPSILON * radius;
        let diag: Vec<f64> = a.iter().map(|x| x - shift).collect();
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        for _ in 0..3 {
            solve_tridiagonal(&diag, &l, &mut v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        // same sign convention as the recurrence, whose first entry is p_0 = 1
        if v[0] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        vectors.push(v);
    }
    // vectors belonging to clustered eigenvalues can drift together; re-orthogonalise
    for s in 0..n {
        for r in 0..s {
            let dot: f64 = vectors[s].iter().zip(&vectors[r]).map(|(x, y)| x * y).sum();
            let prev = vectors[r].clone();
            vectors[s].iter_mut().zip(&prev).for_each(|(x, y)| *x -= dot * y);
        }
        let norm = vectors[s].iter().map(|x| x * x).sum::<f64>().sqrt();
        vectors[s].iter_mut().for_each(|x| *x /= norm);
    }
    // the unnormalised vector starts with p_0 = 1
    let norms_sq = vectors.iter().map(|v| 1.0 / (v[0] * v[0]).max(f64::MIN_POSITIVE)).collect();
    SpectralData {
        eigenvalues: values.into_iter().map(Eigenvalue::Numeric).collect(),
        vectors,
        norms_sq,
        exact_sq: vec![None; n],
    }
}

/// `⟨m| exp(itJ) |ℓ⟩` from the exact spectral data.
pub fn transition_amplitude(c: &Chain, t: f64, l: usize, m: usize) -> Result<Complex64, ChainError> {
    for v in [l, m] {
        if v > c.d() {
            return Err(ChainError::IndexOutOfRange { index: v, d: c.d() });
        }
    }
    Ok(eigen(c).amplitude(t, l, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};
    use std::f64::consts::PI;

    #[test]
    fn path_spectrum() {
        let sp = eigen(&Chain::path(3));
        let v = sp.values_f64();
        let r2 = 2f64.sqrt();
        assert!((v[0] - r2).abs() < 1e-14 && v[1].abs() < 1e-300 && (v[2] + r2).abs() < 1e-14);
        assert_eq!(sp.eigenvalues()[1], Eigenvalue::Exact(int(0)));
        assert!(sp.orthonormality_error() < 1e-10);
        assert!(sp.residual(&Chain::path(3)) < 1e-9);
        // middle eigenvector (1, 0, -1)/√2
        assert_eq!(sp.exact_square_entry(1, 0), Some(&rat(1, 2)));
        assert_eq!(sp.exact_square_entry(1, 1), Some(&int(0)));
    }

    #[test]
    fn two_site_pst() {
        let c = Chain::new(vec![rat(1, 2), rat(1, 2)], vec![rat(1, 4)]).unwrap();
        let amp = transition_amplitude(&c, PI, 0, 1).unwrap();
        assert!((amp - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let amp0 = transition_amplitude(&c, 0.0, 1, 1).unwrap();
        assert!((amp0 - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(transition_amplitude(&c, 0.0, 0, 2).is_err());
    }

    #[test]
    fn numeric_matches_exact() {
        let c = Chain::new(
            vec![rat(1, 3), int(-2), rat(5, 7), int(0), int(1)],
            vec![int(2), rat(1, 9), int(3), rat(7, 2)],
        )
        .unwrap();
        let ex = eigen(&c);
        let nu = eigen_numeric(&c);
        for (x, y) in ex.values_f64().iter().zip(nu.values_f64()) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
        for (u, v) in ex.vectors().iter().zip(nu.vectors()) {
            for (x, y) in u.iter().zip(v) {
                assert!((x - y).abs() < 1e-9);
            }
        }
        assert!(nu.orthonormality_error() < 1e-10);
        assert!(nu.residual(&c) < 1e-9);
    }

    #[test]
    fn unitarity() {
        let c = Chain::new(vec![int(1), int(0), rat(-1, 2)], vec![rat(2, 3), int(5)]).unwrap();
        let sp = eigen(&c);
        for &t in &[0.3, 1.7, 10.0] {
            let u = sp.transition_matrix(t);
            for i in 0..3 {
                for j in 0..3 {
                    let dot: Complex64 = (0..3).map(|k| u[i][k] * u[j][k].conj()).sum();
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - target).norm() < 1e-8);
                }
            }
        }
    }
}
