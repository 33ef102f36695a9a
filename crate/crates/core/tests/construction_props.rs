mod common;

use chainforge::opsbuild::{build_ops, BuildError, BuildOptions};
use chainforge::poly::Poly;
use common::{random_interlacing_roots, random_non_interlacing_roots};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn interlacing_pairs_rebuild_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..60 {
        let d = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=d);
        let (low, high) = random_interlacing_roots(&mut rng, d, m);
        let (q_m, q_top) = (Poly::from_roots(&low), Poly::from_roots(&high));
        let cert = build_ops(&q_m, &q_top, &BuildOptions::default()).unwrap();
        assert!(cert.verify());
        assert!(cert.chain.lambda_sq().iter().all(Signed::is_positive));
        let ops = cert.chain.ops();
        assert_eq!(ops.p(m), &q_m);
        assert_eq!(ops.p(d + 1), &q_top);
        let tau_sum = cert.tau.iter().fold(num_rational::BigRational::from_integer(0.into()), |a, t| a + t);
        assert_eq!(tau_sum, num_rational::BigRational::from_integer(1.into()));
    }
}

#[test]
fn non_interlacing_pairs_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..60 {
        let d = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=d);
        let (low, high) = random_non_interlacing_roots(&mut rng, d, m);
        let r = build_ops(&Poly::from_roots(&low), &Poly::from_roots(&high), &BuildOptions::default());
        assert_eq!(r.unwrap_err(), BuildError::InterlacingViolation);
    }
}
