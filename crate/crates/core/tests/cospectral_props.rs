mod common;

use chainforge::chain::Chain;
use chainforge::cospec::{construct_cospectral, extend_cospectral, is_cospectral, position_feasible, CheckMode};
use common::{dense_charpoly, jacobi_eigen, random_chain};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `|⟨θ|ℓ⟩| = |⟨θ|m⟩|` for every eigenvector of the dense matrix.
fn cospectral_by_rotation(c: &Chain, l: usize, m: usize) -> bool {
    let (_, vecs) = jacobi_eigen(c);
    vecs.iter().all(|v| (v[l].abs() - v[m].abs()).abs() < 1e-8)
}

#[test]
fn constructions_pass_the_rotation_oracle() {
    for (l, m, d) in [(0, 2, 3), (0, 3, 3), (1, 3, 4), (1, 4, 4), (0, 3, 5), (2, 4, 5)] {
        let out = construct_cospectral(l, m, d).unwrap();
        assert_eq!(out.chain.d(), d);
        assert!(cospectral_by_rotation(&out.chain, l, m), "({l},{m},{d})");
        if out.certificate.is_exact() {
            assert_eq!(dense_charpoly(&out.chain, &[l]), dense_charpoly(&out.chain, &[m]));
        }
    }
}

#[test]
fn random_chains_only_show_admissible_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = 0;
    for _ in 0..150 {
        let d = rng.gen_range(1..=6);
        let mut c = random_chain(&mut rng, d);
        if rng.gen_bool(0.3) {
            // a mirror symmetric chain always has cospectral end pairs
            let a: Vec<_> = (0..=d).map(|k| c.a()[k.min(d - k)].clone()).collect();
            let l: Vec<_> = (0..d).map(|k| c.lambda_sq()[k.min(d - 1 - k)].clone()).collect();
            c = Chain::new(a, l).unwrap();
        }
        let mut cospectral_with = vec![Vec::new(); d + 1];
        for l in 0..d {
            for m in l + 1..=d {
                let exact = is_cospectral(&c, l, m, CheckMode::Exact).unwrap().is_some();
                assert_eq!(exact, dense_charpoly(&c, &[l]) == dense_charpoly(&c, &[m]));
                if exact {
                    seen += 1;
                    assert!(position_feasible(l, m, d), "d={d} ({l},{m})");
                    assert!(cospectral_by_rotation(&c, l, m));
                    cospectral_with[l].push(m);
                }
            }
        }
        assert!(cospectral_with.iter().all(|v| v.len() <= 1), "cospectral triple in {c:?}");
    }
    assert!(seen > 0);
}

#[test]
fn extensions_of_the_three_vertex_path() {
    let base = Chain::path(3);
    for k in 1..=3 {
        let c = extend_cospectral(&base, 0, 2, k).unwrap();
        assert_eq!(c.d(), 2 + 2 * k);
        assert!(is_cospectral(&c, k, 2 + k, CheckMode::Exact).unwrap().is_some());
        assert_eq!(dense_charpoly(&c, &[k]), dense_charpoly(&c, &[2 + k]));
    }
}
