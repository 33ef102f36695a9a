//! Independent reference computations for the integration tests. Nothing
//! here calls into the library beyond its data types.
#![allow(dead_code, clippy::needless_range_loop)]

use chainforge::chain::Chain;
use chainforge::poly::{int, rat, Poly, Rational};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `det(xI − J)` for the chain with `removed` vertices deleted, by exact
/// Gaussian elimination at `n + 1` integer points and interpolation.
pub fn dense_charpoly(c: &Chain, removed: &[usize]) -> Poly {
    let keep: Vec<usize> = (0..c.len()).filter(|v| !removed.contains(v)).collect();
    let n = keep.len();
    let entry = |i: usize, j: usize| -> Rational {
        let (a, b) = (keep[i], keep[j]);
        if a == b {
            c.a()[a].clone()
        } else if a + 1 == b || b + 1 == a {
            // only squares are known, so work with the similar matrix that
            // carries λ² above the diagonal and 1 below it
            if a < b {
                c.lambda_sq()[a].clone()
            } else {
                Rational::one()
            }
        } else {
            Rational::zero()
        }
    };
    let xs: Vec<Rational> = (0..=n as i64).map(int).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|x| {
            let mut m: Vec<Vec<Rational>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { x - entry(i, j) } else { -entry(i, j) }).collect())
                .collect();
            det(&mut m)
        })
        .collect();
    newton_interpolate(&xs, &ys)
}

pub fn det(m: &mut [Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut acc = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            acc = -acc;
        }
        let p = m[col][col].clone();
        acc *= &p;
        for r in col + 1..n {
            let f = &m[r][col] / &p;
            if f.is_zero() {
                continue;
            }
            for k in col..n {
                let t = &f * &m[col][k];
                m[r][k] -= t;
            }
        }
    }
    acc
}

pub fn newton_interpolate(xs: &[Rational], ys: &[Rational]) -> Poly {
    let n = xs.len();
    let mut coef: Vec<Rational> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p = Poly::zero();
    for i in (0..n).rev() {
        p = &(&p * &Poly::new(vec![-xs[i].clone(), Rational::one()])) + &Poly::constant(coef[i].clone());
    }
    p
}

/// Cyclic Jacobi rotations on a dense symmetric matrix; eigenvalues in
/// decreasing order with eigenvectors as rows.
pub fn jacobi_eigen(c: &Chain) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = c.len();
    let mut a = vec![vec![0f64; n]; n];
    for i in 0..n {
        a[i][i] = to_f(&c.a()[i]);
        if i + 1 < n {
            let l = to_f(&c.lambda_sq()[i]).sqrt();
            a[i][i + 1] = l;
            a[i + 1][i] = l;
        }
    }
    let mut v = vec![vec![0f64; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = cs * vp - sn * vq;
                    row[q] = sn * vp + cs * vq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).unwrap());
    let values = idx.iter().map(|&i| a[i][i]).collect();
    let vectors = idx.iter().map(|&i| (0..n).map(|k| v[k][i]).collect()).collect();
    (values, vectors)
}

pub fn to_f(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap()
}

fn small_rational(rng: &mut ChaCha8Rng, positive: bool) -> Rational {
    let den = rng.gen_range(1..=4);
    let num = if positive { rng.gen_range(1..=12) } else { rng.gen_range(-9..=9) };
    rat(num, den)
}

pub fn random_chain(rng: &mut ChaCha8Rng, d: usize) -> Chain {
    let a = (0..=d).map(|_| small_rational(rng, false)).collect();
    let l = (0..d).map(|_| small_rational(rng, true)).collect();
    Chain::new(a, l).unwrap()
}

/// The strong interlacing definition, checked directly on sorted roots.
pub fn interlace_by_definition(low: &[Rational], high: &[Rational]) -> bool {
    let (lo, hi) = (high.first().unwrap(), high.last().unwrap());
    if low.windows(2).any(|w| w[0] >= w[1]) || high.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    if low.first().is_some_and(|r| r <= lo) || low.last().is_some_and(|r| r >= hi) {
        return false;
    }
    low.windows(2).all(|w| high.iter().any(|t| &w[0] < t && t < &w[1]))
}

/// Distinct sorted integer roots for `q_{d+1}` and sorted roots for `q_m`
/// (integers or half-integers, possibly shared) that strongly interlace.
pub fn random_interlacing_roots(rng: &mut ChaCha8Rng, d: usize, m: usize) -> (Vec<Rational>, Vec<Rational>) {
    loop {
        let mut top: Vec<i64> = Vec::new();
        let mut x = rng.gen_range(-10..=0);
        for _ in 0..=d {
            top.push(x);
            x += rng.gen_range(1..=3);
        }
        let high: Vec<Rational> = top.iter().map(|&t| int(t)).collect();
        let (lo, hi) = (2 * top[0] + 1, 2 * top[d] - 1);
        let mut cands: Vec<i64> = (lo..=hi).collect();
        let mut low = Vec::new();
        for _ in 0..m {
            if cands.is_empty() {
                break;
            }
            let k = rng.gen_range(0..cands.len());
            low.push(cands.remove(k));
        }
        low.sort();
        let low: Vec<Rational> = low.into_iter().map(|h| rat(h, 2)).collect();
        if low.len() == m && interlace_by_definition(&low, &high) {
            return (low, high);
        }
    }
}

/// Like `random_interlacing_roots` but guaranteed to violate the definition.
pub fn random_non_interlacing_roots(rng: &mut ChaCha8Rng, d: usize, m: usize) -> (Vec<Rational>, Vec<Rational>) {
    loop {
        let mut top: Vec<i64> = Vec::new();
        let mut x = rng.gen_range(-10..=0);
        for _ in 0..=d {
            top.push(x);
            x += rng.gen_range(1..=3);
        }
        let high: Vec<Rational> = top.iter().map(|&t| int(t)).collect();
        let mut low: Vec<i64> = Vec::new();
        while low.len() < m {
            let h = rng.gen_range(2 * top[0] - 6..=2 * top[d] + 6);
            if !low.contains(&h) {
                low.push(h);
            }
        }
        low.sort();
        let low: Vec<Rational> = low.into_iter().map(|h| rat(h, 2)).collect();
        if !interlace_by_definition(&low, &high) {
            return (low, high);
        }
    }
}
