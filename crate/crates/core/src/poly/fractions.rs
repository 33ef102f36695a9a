use num_traits::{One, Zero};

use super::{isolate_real_roots, Poly, PolyError, Rational};

/// The unique polynomial of degree below `points.len()` through every point.
pub fn lagrange_interpolate(points: &[(Rational, Rational)]) -> Result<Poly, PolyError> {
    for (i, (x, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(y, _)| y == x) {
            return Err(PolyError::DuplicateAbscissa(x.clone()));
        }
    }
    // Newton divided differences, then expansion in Horner form
    let n = points.len();
    let xs: Vec<&Rational> = points.iter().map(|(x, _)| x).collect();
    let mut dd: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    let mut p = Poly::zero();
    for i in (0..n).rev() {
        p = &(&p * &Poly::linear(xs[i])) + &Poly::constant(dd[i].clone());
    }
    Ok(p)
}

/// `num(θ_s) / Π_{r≠s}(θ_s − θ_r)` for each node, i.e. the residues of
/// `num / Π(x − θ_r)`.
pub fn residues_at(num: &Poly, nodes: &[Rational]) -> Vec<Rational> {
    nodes
        .iter()
        .enumerate()
        .map(|(s, ts)| {
            let mut den = Rational::one();
            for (r, tr) in nodes.iter().enumerate() {
                if r != s {
                    den *= ts - tr;
                }
            }
            num.eval(ts) / den
        })
        .collect()
}

/// Splits `num/den` into `Σ residue / (x − pole)`, poles in decreasing order.
pub fn partial_fractions(num: &Poly, den: &Poly) -> Result<Vec<(Rational, Rational)>, PolyError> {
    let dd = den.degree().ok_or(PolyError::ZeroPolynomial)?;
    if !den.is_monic() {
        return Err(PolyError::NotMonic);
    }
    if let Some(dn) = num.degree() {
        if dn >= dd {
            return Err(PolyError::DegreeOrder { low: dn, high: dd });
        }
    }
    let roots = isolate_real_roots(den)?;
    if let Some(r) = roots.roots().iter().find(|r| r.multiplicity > 1) {
        return match r.value.as_exact() {
            Some(x) => Err(PolyError::RepeatedPole(x.clone())),
            None => Err(PolyError::IrrationalPole),
        };
    }
    if roots.total_count() != dd {
        return Err(PolyError::IrrationalPole);
    }
    let mut poles = roots.exact_values().ok_or(PolyError::IrrationalPole)?;
    poles.reverse();
    let residues = residues_at(num, &poles);
    Ok(poles.into_iter().zip(residues).collect())
}

/// Rebuilds `Σ residue_s Π_{r≠s}(x − pole_r)`.
pub fn reconstruct_numerator(terms: &[(Rational, Rational)]) -> Poly {
    let mut acc = Poly::zero();
    for (s, (_, res)) in terms.iter().enumerate() {
        if res.is_zero() {
            continue;
        }
        let others: Vec<Rational> = terms
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != s)
            .map(|(_, (p, _))| p.clone())
            .collect();
        acc = &acc + &Poly::from_roots(&others).scale(res);
    }
    acc
}
