use num_complex::Complex64;
use proptest::prelude::*;
use symfam_core::satake::{hecke_b, rankin_product, sym_power_b, sym_power_spectrum, SatakeSpectrum};

fn angle(a_p: f64) -> Complex64 {
    // α = e^{iθ} with 2cos θ = a_p
    Complex64::from_polar(1.0, (a_p / 2.0).clamp(-1.0, 1.0).acos())
}

#[test]
fn hecke_examples() {
    let b = hecke_b(7, 2.0, 6).unwrap();
    assert!(b.as_slice().iter().all(|x| (x - 2.0).abs() < 1e-12));
    let b = hecke_b(7, 0.0, 4).unwrap();
    assert_eq!([b.get(2), b.get(3), b.get(4)], [-2.0, 0.0, 2.0]);
    let b = hecke_b(7, 1.0, 6).unwrap();
    let alpha = angle(1.0);
    for nu in 1..=6 {
        let direct = (alpha.powi(nu) + alpha.powi(-nu)).re;
        assert!((b.get(nu as usize) - direct).abs() < 1e-12);
    }
    assert!((b.get(2) + 1.0).abs() < 1e-12 && (b.get(6) - 2.0).abs() < 1e-12);
}

#[test]
fn sym_square_at_a_zero() {
    let s = sym_power_spectrum(&SatakeSpectrum::from_hecke(5, 0.0), 2).unwrap();
    let mut re: Vec<f64> = s.params().iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    assert!((re[0] + 1.0).abs() < 1e-12 && (re[1] + 1.0).abs() < 1e-12 && (re[2] - 1.0).abs() < 1e-12);
    let b = sym_power_b(5, 0.0, 2, 3).unwrap();
    assert!((b.get(1) + 1.0).abs() < 1e-12);
    assert!((b.get(2) - 3.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sym_power_matches_spectrum(a_p in -2.0f64..=2.0, m in 1u32..=6) {
        let b = sym_power_b(11, a_p, m, 6).unwrap();
        let spec = sym_power_spectrum(&SatakeSpectrum::from_hecke(11, a_p), m).unwrap();
        prop_assert_eq!(spec.degree(), m as usize + 1);
        for nu in 1..=6usize {
            let direct = spec.power_sum(nu as i32);
            prop_assert!((b.get(nu) - direct.re).abs() < 1e-9, "nu={} {} vs {}", nu, b.get(nu), direct);
            prop_assert!(direct.im.abs() < 1e-9);
        }
    }

    #[test]
    fn rankin_matches_product_spectrum(x in -2.0f64..=2.0, y in -2.0f64..=2.0) {
        let lx = hecke_b(13, x, 6).unwrap();
        let ly = hecke_b(13, y, 6).unwrap();
        let prod = rankin_product(&lx, &ly).unwrap();
        let spec = SatakeSpectrum::from_hecke(13, x).rankin_product(&SatakeSpectrum::from_hecke(13, y)).unwrap();
        prop_assert_eq!(prod.degree(), 4);
        for nu in 1..=6usize {
            prop_assert!((prod.get(nu) - spec.power_sum(nu as i32).re).abs() < 1e-9);
        }
    }

    #[test]
    fn ramanujan_is_closed_under_products(x in -2.0f64..=2.0, y in -2.0f64..=2.0, m in 1u32..=4) {
        let lx = sym_power_b(17, x, m, 8).unwrap();
        let ly = hecke_b(17, y, 8).unwrap();
        prop_assert!(lx.satisfies_ramanujan(1e-9) && ly.satisfies_ramanujan(1e-9));
        let prod = rankin_product(&lx, &ly).unwrap();
        prop_assert!(prod.satisfies_ramanujan(1e-9));
    }

    #[test]
    fn trivial_factor_is_identity(x in -2.0f64..=2.0) {
        let lx = hecke_b(19, x, 5).unwrap();
        let one = symfam_core::satake::LocalCoefficients::trivial(19, 5);
        let prod = rankin_product(&lx, &one).unwrap();
        prop_assert_eq!(prod.as_slice(), lx.as_slice());
    }
}

#[test]
fn prime_mismatch_is_rejected() {
    let a = hecke_b(5, 1.0, 3).unwrap();
    let b = hecke_b(7, 1.0, 3).unwrap();
    assert!(rankin_product(&a, &b).is_err());
}
