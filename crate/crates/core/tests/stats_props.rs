use std::sync::Arc;

use symfam_core::arith::sieve_primes;
use symfam_core::ec::{ConductorPolicy, EllipticFamilySpec, Poly};
use symfam_core::families::{convolve, elliptic_family, quadratic_family, Family, FamilyRef};
use symfam_core::rmt::TestFunction;
use symfam_core::stats::{
    classify, family_constant, one_level_density, prime_square_sum, support_cutoff, Class, Profile,
};

fn profile(family: &dyn Family, p_max: u64, phi: &TestFunction) -> Profile {
    let primes = sieve_primes(p_max).unwrap();
    let cutoff = support_cutoff(phi, family.mean_log_conductor(), p_max);
    Profile::compute(family, &primes, cutoff, 6).unwrap()
}

/// A confident class never turns into a different confident class as the
/// family and the prime range grow.
#[test]
fn classification_is_stable_under_growth() {
    let phi = TestFunction::fejer(0.5).unwrap();
    let mut quad = Vec::new();
    let mut ell = Vec::new();
    for (k, p_max) in [(1i64, 300u64), (2, 600), (4, 1200)] {
        let q = quadratic_family(1000 * k, 2000 * k).unwrap();
        quad.push(family_constant(&q, &profile(&q, 100_000, &phi), &phi, 0.05).unwrap().c_class);
        let spec = EllipticFamilySpec::new(Poly::linear(0, 1), Poly::constant(1), 150 * k, 300 * k).unwrap();
        let e = elliptic_family(spec).unwrap();
        ell.push(family_constant(&e, &profile(&e, p_max, &phi), &phi, 0.2).unwrap().c_class);
    }
    for classes in [&quad, &ell] {
        let confident: Vec<Class> = classes.iter().copied().filter(|c| *c != Class::Indeterminate).collect();
        assert!(confident.windows(2).all(|w| w[0] == w[1]), "{classes:?}");
        assert!(!confident.is_empty());
    }
    assert_eq!(quad[2], Class::Plus);
    assert_eq!(ell[2], Class::Minus);
}

/// The `ν = 1` term of a rank-1 × rank-1 convolution behaves like
/// `r_F r_G / log R`: halving `log R` about doubles it.
#[test]
fn convolution_first_term_scales_inversely_with_log_r() {
    let phi = TestFunction::fejer(0.5).unwrap();
    let f: FamilyRef = Arc::new(
        elliptic_family(EllipticFamilySpec::new(Poly::linear(0, 1), Poly::linear(0, -1), 400, 800).unwrap()).unwrap(),
    );
    let g: FamilyRef = Arc::new(
        elliptic_family(EllipticFamilySpec::new(Poly::linear(0, 1), Poly::constant(1), 400, 800).unwrap()).unwrap(),
    );
    let c = convolve(f, g, None, ConductorPolicy::Midpoint).unwrap();
    let primes = sieve_primes(400).unwrap();
    let base = Profile::compute(&c, &primes, 400, 2).unwrap().with_log_r(40.0).unwrap();
    let half = base.clone().with_log_r(20.0).unwrap();
    let d1 = one_level_density(&base, &phi, 1.0, 0.0).unwrap().nu1;
    let d2 = one_level_density(&half, &phi, 1.0, 0.0).unwrap().nu1;
    assert!(d1 != 0.0);
    let ratio = d2 / d1;
    assert!((ratio - 2.0).abs() <= 0.6, "nu=1 term {d1} -> {d2}, ratio {ratio}");
}

#[test]
fn density_report_is_internally_consistent() {
    let phi = TestFunction::fejer(0.5).unwrap();
    let q = quadratic_family(2000, 4000).unwrap();
    let prof = profile(&q, 10_000, &phi);
    let d = one_level_density(&prof, &phi, 1.0, 0.0).unwrap();
    assert_eq!(d.empirical, d.phi_hat0 + d.nu1 + d.nu2 + d.tail);
    assert_eq!(d.predicted, phi.phi_hat0() - phi.phi0() / 2.0);
    assert_eq!(d.members, q.len());
    // truncating to fewer primes keeps the identity
    let d = one_level_density(&prof.truncated(50), &phi, 1.0, 0.0).unwrap();
    assert_eq!(d.empirical, d.phi_hat0 + d.nu1 + d.nu2 + d.tail);
}

#[test]
fn quadratic_prime_squares_are_symplectic() {
    let phi = TestFunction::fejer(0.5).unwrap();
    let q = quadratic_family(5000, 9000).unwrap();
    let s = prime_square_sum(&profile(&q, 100_000, &phi), &phi).unwrap();
    assert!((s.c - 1.0).abs() < 1e-12, "every good b(p^2) is 1, got {}", s.c);
    assert!(s.value < 0.0);
    assert_eq!(classify(s.c, 0.05), Class::Plus);
}
