//! Reference computations shared by the CLI test targets. Only the data
//! types of the library are used here.
#![allow(dead_code, clippy::needless_range_loop)]

use chainforge::chain::Chain;
use chainforge::poly::{int, rat, Poly, Rational};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Determinant of `xI − J` restricted to the vertices `lo..=hi`, by exact
/// elimination at sample points and Newton interpolation. `hi < lo` gives 1.
pub fn block_det(c: &Chain, lo: usize, hi: isize) -> Poly {
    if hi < lo as isize {
        return Poly::one();
    }
    let keep: Vec<usize> = (lo..=hi as usize).collect();
    dense_charpoly_on(c, &keep)
}

/// Characteristic polynomial of the chain with `removed` deleted.
pub fn dense_charpoly(c: &Chain, removed: &[usize]) -> Poly {
    let keep: Vec<usize> = (0..c.len()).filter(|v| !removed.contains(v)).collect();
    dense_charpoly_on(c, &keep)
}

fn dense_charpoly_on(c: &Chain, keep: &[usize]) -> Poly {
    let n = keep.len();
    // similar matrix: λ² above the diagonal, 1 below
    let entry = |i: usize, j: usize| -> Rational {
        let (a, b) = (keep[i], keep[j]);
        if a == b {
            c.a()[a].clone()
        } else if a + 1 == b {
            c.lambda_sq()[a].clone()
        } else if b + 1 == a {
            Rational::one()
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
        p = &(&p * &Poly::linear(&xs[i])) + &Poly::constant(coef[i].clone());
    }
    p
}

pub fn small_rational(rng: &mut ChaCha8Rng, positive: bool) -> Rational {
    let den = rng.gen_range(1..=4);
    let num = if positive { rng.gen_range(1..=12) } else { rng.gen_range(-9..=9) };
    rat(num, den)
}

pub fn random_chain(rng: &mut ChaCha8Rng, d: usize) -> Chain {
    let a = (0..=d).map(|_| small_rational(rng, false)).collect();
    let l = (0..d).map(|_| small_rational(rng, true)).collect();
    Chain::new(a, l).unwrap()
}

/// Strong interlacing checked on sorted root lists: the low roots sit
/// strictly inside the outer high roots and any two of them are separated
/// by a high root.
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

fn random_top(rng: &mut ChaCha8Rng, d: usize) -> Vec<i64> {
    let mut top = Vec::new();
    let mut x = rng.gen_range(-12..=0);
    for _ in 0..=d {
        top.push(x);
        x += rng.gen_range(1..=4);
    }
    top
}

/// Integer roots `(q_m, q_{d+1})` that strongly interlace.
pub fn interlacing_int_roots(rng: &mut ChaCha8Rng, d: usize, m: usize) -> (Vec<i64>, Vec<i64>) {
    loop {
        let top = random_top(rng, d);
        let mut cands: Vec<i64> = (top[0] + 1..top[d]).collect();
        let mut low = Vec::new();
        while low.len() < m && !cands.is_empty() {
            low.push(cands.remove(rng.gen_range(0..cands.len())));
        }
        low.sort();
        if low.len() == m && interlace_by_definition(&ints(&low), &ints(&top)) {
            return (low, top);
        }
    }
}

/// Integer roots that violate strong interlacing.
pub fn non_interlacing_int_roots(rng: &mut ChaCha8Rng, d: usize, m: usize) -> (Vec<i64>, Vec<i64>) {
    loop {
        let top = random_top(rng, d);
        let mut low: Vec<i64> = Vec::new();
        while low.len() < m {
            let r = rng.gen_range(top[0] - 3..=top[d] + 3);
            if !low.contains(&r) {
                low.push(r);
            }
        }
        low.sort();
        if !interlace_by_definition(&ints(&low), &ints(&top)) {
            return (low, top);
        }
    }
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

/// Every pair of `n`-multisets on `[lo, hi]` with equal power sums up to
/// `n − 1`, by direct enumeration in `i128`.
pub fn brute_force_pte(n: usize, lo: i64, hi: i64) -> Vec<(Vec<i64>, Vec<i64>)> {
    let mut sets = Vec::new();
    multisets(n, lo, hi, &mut Vec::new(), &mut sets);
    let sums: Vec<Vec<i128>> = sets
        .iter()
        .map(|s| (1..n as u32).map(|k| s.iter().map(|&x| (x as i128).pow(k)).sum()).collect())
        .collect();
    let mut out = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sums[i] == sums[j] {
                out.push((sets[i].clone(), sets[j].clone()));
            }
        }
    }
    out
}

fn multisets(left: usize, from: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    for x in from..=hi {
        cur.push(x);
        multisets(left - 1, x, hi, cur, out);
        cur.pop();
    }
}

type CMat = Vec<Vec<(f64, f64)>>;

fn cmul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    let mut out = vec![vec![(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let (ar, ai) = a[i][k];
            if ar == 0.0 && ai == 0.0 {
                continue;
            }
            for j in 0..n {
                let (br, bi) = b[k][j];
                out[i][j].0 += ar * br - ai * bi;
                out[i][j].1 += ar * bi + ai * br;
            }
        }
    }
    out
}

/// `|⟨m|exp(itJ)|ℓ⟩|` by scaling and squaring a truncated Taylor series.
pub fn amplitude_by_expm(c: &Chain, t: f64, l: usize, m: usize) -> f64 {
    let (re, im) = expm_entry(c, t, l, m);
    (re * re + im * im).sqrt()
}

/// `⟨m|exp(itJ)|ℓ⟩` as `(re, im)`.
pub fn expm_entry(c: &Chain, t: f64, l: usize, m: usize) -> (f64, f64) {
    let n = c.len();
    let mut j = vec![vec![0.0; n]; n];
    for v in 0..n {
        j[v][v] = to_f(&c.a()[v]);
        if v + 1 < n {
            let w = to_f(&c.lambda_sq()[v]).sqrt();
            j[v][v + 1] = w;
            j[v + 1][v] = w;
        }
    }
    let norm: f64 = j.iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max) * t.abs();
    let s = (norm / 0.25).log2().ceil().max(0.0) as u32;
    let h = t / 2f64.powi(s as i32);
    let a: CMat = j.iter().map(|r| r.iter().map(|&x| (0.0, h * x)).collect()).collect();
    let mut term: CMat = (0..n).map(|i| (0..n).map(|k| if i == k { (1.0, 0.0) } else { (0.0, 0.0) }).collect()).collect();
    let mut sum = term.clone();
    for k in 1..30 {
        term = cmul(&term, &a);
        for row in term.iter_mut() {
            for x in row.iter_mut() {
                x.0 /= k as f64;
                x.1 /= k as f64;
            }
        }
        for i in 0..n {
            for q in 0..n {
                sum[i][q].0 += term[i][q].0;
                sum[i][q].1 += term[i][q].1;
            }
        }
    }
    for _ in 0..s {
        sum = cmul(&sum, &sum);
    }
    sum[m][l]
}

pub fn to_f(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap()
}
