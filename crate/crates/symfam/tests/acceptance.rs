//! Acceptance suite: one PASS/FAIL line per criterion with the measured
//! values. Set `SYMFAM_ACCEPTANCE_STRICT=1` to turn any FAIL into a nonzero
//! exit status.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::Ratio;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use symfam::parallel_profile;
use symfam_core::arith::{sieve_primes, PrimeTable};
use symfam_core::ec::{
    avg_log_conductor, independence_sides, michel_moment, nagao_sum, ConductorPolicy, EllipticFamilySpec, Poly,
};
use symfam_core::families::{
    convolve, dirichlet_family, elliptic_family, quadratic_family, twist_by_fixed, Family, FamilyRef,
};
use symfam_core::rmt::{
    one_level_prediction, spatial_integral, two_level_prediction, SymmetryGroup, TestFunction,
};
use symfam_core::stats::{family_constant, one_level_density, pnt_prime_sum, FamilyConstant};
use symfam_core::weil::{
    convolution_root_number, epsilon_factor, sym_power, symbolic_convolution_root_number, tensor, wedge2, IPower,
    SymExponent, WeilIrr, WeilRep,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

// ---------------------------------------------------------------- Weil oracle

/// A point of `W_ℝ`: `z = r e^{iθ}` (`coset = false`) or `j z`.
#[derive(Clone, Copy)]
struct Point {
    r: f64,
    theta: f64,
    coset: bool,
}

/// Eigenvalues of an irreducible at a point, from explicit matrix models:
/// `[k,t](z) = |z|^{2t} diag(e^{i(k−1)θ}, e^{−i(k−1)θ})`, `[k,t](j)` swaps
/// the two lines with `[k,t](j)² = (−1)^{k−1}`, and `[±,t](j) = ±1`.
fn eigenvalues(x: &WeilIrr, g: Point) -> Vec<Complex64> {
    let t = *x.twist().numer() as f64 / *x.twist().denom() as f64;
    let scale = g.r.powf(2.0 * t);
    match (x, g.coset) {
        (WeilIrr::Plus(_), _) => vec![Complex64::new(scale, 0.0)],
        (WeilIrr::Minus(_), false) => vec![Complex64::new(scale, 0.0)],
        (WeilIrr::Minus(_), true) => vec![Complex64::new(-scale, 0.0)],
        (WeilIrr::Disc { k, .. }, false) => {
            let a = (*k as f64 - 1.0) * g.theta;
            vec![Complex64::from_polar(scale, a), Complex64::from_polar(scale, -a)]
        }
        (WeilIrr::Disc { k, .. }, true) => {
            // (jz)² = −|z|², so the eigenvalues are ±λ with λ² = (−1)^{k−1}·|z|^{4t}
            let lambda = Complex64::new(0.0, 1.0).powu(*k - 1) * scale;
            vec![lambda, -lambda]
        }
    }
}

fn character(rep: &WeilRep, g: Point) -> Complex64 {
    rep.iter().map(|(x, m)| eigenvalues(x, g).into_iter().sum::<Complex64>() * m as f64).sum()
}

/// Complete homogeneous symmetric polynomial of degree `m`.
fn sym_character(eig: &[Complex64], m: u32) -> Complex64 {
    match eig {
        [a] => a.powu(m),
        [a, b] => (0..=m).map(|i| a.powu(i) * b.powu(m - i)).sum(),
        _ => unreachable!("irreducibles have dimension at most 2"),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(20);
    let points: Vec<Point> = (0..100)
        .map(|i| Point { r: rng.random_range(0.8..1.25), theta: rng.random_range(-3.2..3.2), coset: i % 2 == 1 })
        .collect();
    let twists = [Ratio::new(0, 1), Ratio::new(1, 2), Ratio::new(-1, 3)];
    let mut irrs = Vec::new();
    for t in twists {
        irrs.push(WeilIrr::Plus(t));
        irrs.push(WeilIrr::Minus(t));
        for k in 2..=30 {
            irrs.push(WeilIrr::disc(k, t).expect("k >= 2"));
        }
    }
    let mut worst: f64 = 0.0;
    let mut checks = 0usize;
    for x in &irrs {
        let rx = WeilRep::irreducible(*x);
        for y in &irrs {
            let ry = WeilRep::irreducible(*y);
            let prod = tensor(&rx, &ry);
            for &g in &points {
                let d = (character(&prod, g) - character(&rx, g) * character(&ry, g)).norm();
                worst = worst.max(d);
                checks += 1;
            }
        }
        for m in 1..=6 {
            let s = sym_power(x, m);
            for &g in &points {
                let d = (character(&s, g) - sym_character(&eigenvalues(x, g), m)).norm();
                worst = worst.max(d);
                checks += 1;
            }
        }
        if let WeilIrr::Disc { .. } = x {
            let w = wedge2(x).expect("two-dimensional");
            for &g in &points {
                let e = eigenvalues(x, g);
                worst = worst.max((character(&w, g) - e[0] * e[1]).norm());
                checks += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-9 && secs < 10.0,
        format!("{checks} character checks on both cosets, max deviation {worst:.2e}, {secs:.2}s"),
    )
}

fn criterion_2() -> Outcome {
    let mut mismatches = Vec::new();
    let mut checks = 0;
    for k in (2..=26).step_by(2) {
        let disc = WeilIrr::disc(k, Ratio::new(0, 1)).expect("k >= 2");
        let ik = IPower::new(k as i64);
        for m in 0..=4u32 {
            let expected = match m % 4 {
                0 => ik,
                1 => IPower::MINUS_ONE,
                2 => ik * IPower::MINUS_ONE,
                _ => IPower::ONE,
            };
            checks += 1;
            if epsilon_factor(&sym_power(&disc, 2 * m + 1)) != expected {
                mismatches.push(format!("sym^{}[{k}]", 2 * m + 1));
            }
        }
        let exps: Vec<SymExponent> =
            (0..=4).map(SymExponent::Odd).chain((1..=4).map(SymExponent::Even)).collect();
        for &a in &exps {
            for &b in &exps {
                checks += 1;
                let closed = convolution_root_number(a, b, k);
                let symbolic = symbolic_convolution_root_number(a.power(), b.power(), k);
                match (closed, symbolic) {
                    (Ok(x), Ok(y)) if x == y => {}
                    (x, y) => mismatches.push(format!("{a:?} x {b:?}, k={k}: {x:?} vs {y:?}")),
                }
            }
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("{checks} exact comparisons, {} mismatches {:?}", mismatches.len(), mismatches.iter().take(3).collect::<Vec<_>>()),
    )
}

// ------------------------------------------------------------ family checks

fn constant(family: &dyn Family, primes: &PrimeTable, phi: &TestFunction, p_max: u64) -> FamilyConstant {
    let profile = parallel_profile(family, primes, phi, p_max, 10, None).expect("profile");
    family_constant(family, &profile, phi, family.tolerance_class().default_tolerance()).expect("constant")
}

fn ec(a: Poly, b: Poly, start: i64, end: i64) -> EllipticFamilySpec {
    EllipticFamilySpec::new(a, b, start, end).expect("nonsingular family")
}

struct Shared {
    primes: PrimeTable,
    phi: TestFunction,
    e1: FamilyRef,
    e2: FamilyRef,
    c_e1: FamilyConstant,
    c_e2: FamilyConstant,
}

fn criterion_3(s: &Shared) -> Outcome {
    let start = Instant::now();
    let quad = quadratic_family(10_000, 20_000).expect("discriminants");
    let cq = constant(&quad, &s.primes, &s.phi, 100_000);
    let dir = dirichlet_family(1009).expect("prime modulus");
    let cd = constant(&dir, &s.primes, &s.phi, 100_000);
    let pass = (cq.c - 1.0).abs() < 0.05
        && cd.c.abs() < 0.05
        && (s.c_e1.c + 1.0).abs() < 0.15
        && (s.c_e2.c + 1.0).abs() < 0.15;
    outcome(
        pass,
        format!(
            "quadratic c={:.4} (raw {:.4}); dirichlet 1009 c={:.4} (raw {:.4}); Tx+1 c={:.4} (raw {:.4}); Sx+2 c={:.4} (raw {:.4}); {:.1}s",
            cq.c,
            cq.c_raw,
            cd.c,
            cd.c_raw,
            s.c_e1.c,
            s.c_e1.c_raw,
            s.c_e2.c,
            s.c_e2.c_raw,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_4(s: &Shared) -> Outcome {
    let conv = convolve(s.e1.clone(), s.e2.clone(), None, ConductorPolicy::Midpoint).expect("convolution");
    let excluded = conv.collision_count();
    let c = constant(&conv, &s.primes, &s.phi, 2000);
    outcome(
        (c.c - 1.0).abs() < 0.2 && c.r.abs() < 0.2,
        format!(
            "c={:.4} (raw {:.4}) vs c_F*c_G={:.4}; r={:.4} (raw {:.4}); {} members, {excluded} excluded",
            c.c,
            c.c_raw,
            s.c_e1.c * s.c_e2.c,
            c.r,
            c.r_raw,
            conv.len()
        ),
    )
}

fn criterion_5(s: &Shared) -> Outcome {
    let quad5: FamilyRef = Arc::new(quadratic_family(5, 5).expect("d = 5"));
    let tq = twist_by_fixed(quad5, 0, s.e1.clone()).expect("twist");
    let cq = constant(&tq, &s.primes, &s.phi, 2000);
    let mod7 = dirichlet_family(7).expect("prime");
    let idx = mod7.index_of_order(6).expect("order-6 character");
    let t6 = twist_by_fixed(Arc::new(mod7), idx, s.e1.clone()).expect("twist");
    let c6 = constant(&t6, &s.primes, &s.phi, 2000);
    outcome(
        (cq.c + 1.0).abs() < 0.2 && c6.c.abs() < 0.2,
        format!("chi_5 twist c={:.4} (raw {:.4}); order-6 mod 7 twist c={:.4} (raw {:.4})", cq.c, cq.c_raw, c6.c, c6.c_raw),
    )
}

fn criterion_6() -> Outcome {
    let t = Poly::linear(0, 1);
    let rank1 = nagao_sum(&ec(t.clone(), Poly::linear(0, -1), 0, 1), 3000).expect("nagao");
    let rank0 = nagao_sum(&ec(t.clone(), Poly::constant(1), 0, 1), 3000).expect("nagao");
    let flat = nagao_sum(&ec(t.clone(), Poly::constant(0), 1, 2), 3000).expect("nagao");
    let flat_zero = flat.terms.iter().all(|(_, s)| *s == 0);
    let a = (rank1.rank_estimate - 1.0).abs() < 0.3;
    let b = rank0.rank_estimate.abs() < 0.3;
    outcome(
        a && b && flat_zero,
        format!(
            "Tx-T rank {:.4} [{}]; Tx+1 rank {:.4} [{}]; Tx every term zero: {flat_zero}",
            rank1.rank_estimate,
            if a { "ok" } else { "miss" },
            rank0.rank_estimate,
            if b { "ok" } else { "miss" },
        ),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let spec = ec(Poly::linear(0, 1), Poly::constant(1), 0, 1);
    let primes = sieve_primes(500).expect("sieve");
    let mut worst = 0.0f64;
    let mut pass = true;
    for &p in primes.primes().iter().filter(|p| **p >= 5) {
        let m = michel_moment(&spec, p).expect("non-constant j") as i128;
        let dev = (m - (p * p) as i128).abs();
        // |dev| <= 4 p^{3/2}  ⇔  dev² <= 16 p³, exactly
        pass &= dev * dev <= 16 * (p as i128).pow(3);
        worst = worst.max(dev as f64 / (p as f64).powf(1.5));
    }
    outcome(pass, format!("max |sum a^2 - p^2| / p^1.5 = {worst:.4} over 5 <= p <= 500, {:.2}s", start.elapsed().as_secs_f64()))
}

fn criterion_8() -> Outcome {
    let spec = ec(Poly::linear(0, 1), Poly::constant(1), 0, 1);
    let primes: Vec<u64> = sieve_primes(50).expect("sieve").primes().iter().copied().filter(|p| *p >= 5).collect();
    let mut checks = 0;
    let mut bad = Vec::new();
    for (i, &p1) in primes.iter().enumerate() {
        for &p2 in &primes[i + 1..] {
            for r1 in 0..=2 {
                for r2 in 0..=2 {
                    let (l, r) = independence_sides(&spec, p1, p2, r1, r2).expect("distinct primes");
                    checks += 1;
                    if l != r {
                        bad.push((p1, p2, r1, r2));
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checks} exact identities, {} failures", bad.len()))
}

fn criterion_9(primes: &PrimeTable) -> Outcome {
    let f = TestFunction::fejer(1.0).expect("sigma");
    let s1 = pnt_prime_sum(&f, 1, 1e6, primes, 10_000_000).expect("pnt");
    let s2 = pnt_prime_sum(&f, 2, 1e6, primes, 10_000_000).expect("pnt");
    let f0 = f.phi0();
    let a = (s1 - f0 / 2.0).abs() < 0.05;
    let b = (s2 - f0 / 4.0).abs() < 0.05;
    let c = (s2 - s1 / 2.0).abs() < 0.02;
    outcome(
        a && b && c,
        format!(
            "nu=1: {s1:.4} vs {:.4}; nu=2: {s2:.4} vs {:.4}; nu=2 minus half of nu=1: {:.4}",
            f0 / 2.0,
            f0 / 4.0,
            s2 - s1 / 2.0
        ),
    )
}

fn criterion_10() -> Outcome {
    let phi = TestFunction::fejer(0.8).expect("sigma");
    let mut worst = 0.0f64;
    for g in SymmetryGroup::ALL {
        let quad = spatial_integral(g, &phi, 4000.0);
        let closed = one_level_prediction(g, &phi, 0.0).expect("support < 1");
        worst = worst.max((quad - closed).abs());
    }
    let f1 = TestFunction::fejer(0.4).expect("sigma");
    let f2 = TestFunction::fejer(0.35).expect("sigma");
    let odd = two_level_prediction(SymmetryGroup::SOodd, &f1, &f2).expect("orthogonal");
    let even = two_level_prediction(SymmetryGroup::SOeven, &f1, &f2).expect("orthogonal");
    let gap = (odd - even - f1.phi0() * f2.phi0()).abs();
    outcome(worst < 1e-6 && gap < 1e-9, format!("max |quadrature - closed form| = {worst:.2e}; two-level gap error {gap:.2e}"))
}

fn criterion_11(primes: &PrimeTable, phi: &TestFunction) -> Outcome {
    let quad = quadratic_family(10_000, 20_000).expect("discriminants");
    let profile = parallel_profile(&quad, primes, phi, 100_000, 10, None).expect("profile");
    let d = one_level_density(&profile, phi, 1.0, 0.0).expect("density");
    let target = phi.phi_hat0() - phi.phi0() / 2.0;
    let a = (d.empirical - target).abs() < 0.1;
    let b = d.tail.abs() < 0.01;
    outcome(
        a && b,
        format!(
            "D1={:.4} vs {target:.4} (nu1 {:.4}, nu2 {:.4}) [{}]; nu>=3 tail {:.4} [{}]; log R={:.3}",
            d.empirical,
            d.nu1,
            d.nu2,
            if a { "ok" } else { "miss" },
            d.tail,
            if b { "ok" } else { "miss" },
            d.log_r
        ),
    )
}

fn criterion_12() -> Outcome {
    let mut rows = Vec::new();
    for n in [200i64, 2000] {
        let f = ec(Poly::linear(0, 1), Poly::constant(1), n, 2 * n);
        let g = ec(Poly::linear(0, 1), Poly::constant(2), n, 2 * n);
        let avg = avg_log_conductor(&f, &g, ConductorPolicy::Midpoint).expect("conductors").value;
        let ratio = avg / ((n * n) as f64).ln();
        rows.push((n, avg, ratio));
    }
    let increasing = rows[1].1 > rows[0].1;
    let in_band = rows.iter().all(|(_, _, r)| (0.2..=4.0).contains(r));
    outcome(
        increasing && in_band,
        rows.iter()
            .map(|(n, a, r)| format!("N=M={n}: avg log cond {a:.3}, ratio to log NM {r:.3}"))
            .collect::<Vec<_>>()
            .join("; "),
    )
}

fn main() {
    let start = Instant::now();
    let primes = sieve_primes(10_000_000).expect("sieve");
    let phi = TestFunction::fejer(0.5).expect("sigma");
    let t = Poly::linear(0, 1);
    let e1: FamilyRef = Arc::new(elliptic_family(ec(t.clone(), Poly::constant(1), 2000, 4000)).expect("family"));
    let e2: FamilyRef = Arc::new(elliptic_family(ec(t, Poly::constant(2), 2000, 4000)).expect("family"));
    let c_e1 = constant(e1.as_ref(), &primes, &phi, 2000);
    let c_e2 = constant(e2.as_ref(), &primes, &phi, 2000);
    let shared = Shared { primes, phi, e1, e2, c_e1, c_e2 };

    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("Weil algebra soundness", Box::new(criterion_1)),
        ("root-number closed forms", Box::new(criterion_2)),
        ("base-family symmetry constants", Box::new(|| criterion_3(&shared))),
        ("convolution multiplies constants", Box::new(|| criterion_4(&shared))),
        ("fixed twists", Box::new(|| criterion_5(&shared))),
        ("rank detection", Box::new(criterion_6)),
        ("Michel moment", Box::new(criterion_7)),
        ("independence identity", Box::new(criterion_8)),
        ("prime-number-theorem sums", Box::new(|| criterion_9(&shared.primes))),
        ("random-matrix consistency", Box::new(criterion_10)),
        ("one-level density end to end", Box::new(|| criterion_11(&shared.primes, &shared.phi))),
        ("conductor growth", Box::new(criterion_12)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("{} [{:>2}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!(
        "acceptance: {}/{} criteria pass ({:.1}s)",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 && std::env::var_os("SYMFAM_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
