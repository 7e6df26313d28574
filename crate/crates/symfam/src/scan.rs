//! Tables for the `rmt-table` and `ec-scan` subcommands.

use rayon::prelude::*;
use symfam_core::arith::sieve_primes;
use symfam_core::ec::{fiber_traces, EllipticFamilySpec};
use symfam_core::rmt::{fourier_side_integral, one_level_prediction, Shape, SymmetryGroup, TestFunction};

use crate::error::RunResult;
use crate::output::{csv_table, fmt_num};

/// One-level predictions for every group over a grid of supports and ranks,
/// next to the Fourier-side quadrature of `∫ φ̂ Ŵ₁`.
pub fn rmt_table(shape: Shape, sigmas: &[f64], ranks: &[f64]) -> RunResult<String> {
    let mut rows = Vec::new();
    for &sigma in sigmas {
        let phi = TestFunction::from_shape(shape, sigma)?;
        for g in SymmetryGroup::ALL {
            let quad = fourier_side_integral(g, &phi);
            for &r in ranks {
                let pred = one_level_prediction(g, &phi, r)?;
                rows.push(vec![
                    g.name().to_string(),
                    fmt_num(sigma),
                    fmt_num(r),
                    fmt_num(phi.phi_hat0()),
                    fmt_num(phi.phi0()),
                    fmt_num(pred),
                    fmt_num(quad + r * phi.phi0()),
                ]);
            }
        }
    }
    Ok(csv_table(&["group", "sigma", "rank", "phi_hat0", "phi0", "prediction", "quadrature"], &rows))
}

/// Per-prime statistics of an elliptic family over all `t mod p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub p: u64,
    /// `Σ_t a_t(p)`
    pub first_moment: i128,
    /// `Σ_t a_t(p)²`
    pub second_moment: i128,
    /// `(Σ_t a_t(p)² − p²)/p^{3/2}`
    pub michel_deviation: f64,
    /// Nagao average over primes up to `p`, taken at cutoff `p`.
    pub nagao_partial: f64,
}

/// Michel moments and running Nagao averages for `5 <= p <= cutoff`.
pub fn ec_scan(spec: &EllipticFamilySpec, cutoff: u64) -> RunResult<Vec<ScanRow>> {
    let primes = sieve_primes(cutoff.max(5))?;
    let ps: Vec<u64> = primes.primes().iter().copied().filter(|&p| p >= 5).collect();
    let moments = ps
        .par_iter()
        .map(|&p| fiber_traces(spec, p).map(|f| (p, f.power_sum(1), f.power_sum(2))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut running = 0.0;
    Ok(moments
        .into_iter()
        .map(|(p, s1, s2)| {
            let pf = p as f64;
            running += pf.ln() / pf * s1 as f64;
            ScanRow {
                p,
                first_moment: s1,
                second_moment: s2,
                michel_deviation: (s2 as f64 - pf * pf) / pf.powf(1.5),
                nagao_partial: running / pf,
            }
        })
        .collect())
}

pub fn ec_scan_csv(family_id: &str, rows: &[ScanRow]) -> String {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                family_id.to_string(),
                r.p.to_string(),
                r.first_moment.to_string(),
                r.second_moment.to_string(),
                fmt_num(r.michel_deviation),
                fmt_num(r.nagao_partial),
                fmt_num(-r.nagao_partial),
            ]
        })
        .collect();
    csv_table(&["family_id", "p", "sum_a", "sum_a2", "michel_dev", "nagao_avg", "rank_est"], &body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use symfam_core::ec::{nagao_sum, Poly};

    #[test]
    fn scan_matches_nagao_at_each_cutoff() {
        let spec = EllipticFamilySpec::new(Poly::linear(0, 1), Poly::linear(0, -1), 0, 1).unwrap();
        let rows = ec_scan(&spec, 200).unwrap();
        let last = rows.last().unwrap();
        let report = nagao_sum(&spec, last.p).unwrap();
        assert!((report.average - last.nagao_partial).abs() < 1e-12);
    }

    #[test]
    fn table_rows_agree() {
        let csv = rmt_table(Shape::Fejer, &[0.8], &[0.0, 1.0]).unwrap();
        assert_eq!(csv.lines().count(), 1 + 5 * 2);
        for line in csv.lines().skip(1) {
            let f: Vec<f64> = line.split(',').skip(5).map(|x| x.parse().unwrap()).collect();
            assert!((f[0] - f[1]).abs() < 1e-9, "{line}");
        }
    }
}
