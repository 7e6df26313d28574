//! CSV and JSON rendering with a fixed 12-significant-digit float format,
//! so identical runs produce byte-identical files.

use serde_json::{json, Value};

use crate::experiment::FamilyResult;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `%.12g`-style formatting: fixed notation for moderate exponents,
/// scientific otherwise, trailing zeros trimmed.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Quote a CSV field when needed.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub const CONSTANTS_HEADER: [&str; 12] = [
    "family_id",
    "sigma",
    "P",
    "c_est",
    "c_class",
    "r_est",
    "eps",
    "D1_emp",
    "D1_pred",
    "nu3_tail",
    "bad_mass",
    "product_check",
];

pub fn constants_csv(results: &[FamilyResult]) -> String {
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            vec![
                r.id.clone(),
                fmt_num(r.constant.sigma),
                r.primes.to_string(),
                fmt_num(r.constant.c),
                r.constant.c_class.to_string(),
                fmt_num(r.constant.r),
                r.constant.epsilon.to_string(),
                fmt_num(r.density.empirical),
                fmt_num(r.density.predicted),
                fmt_num(r.density.tail),
                fmt_num(r.density.bad_mass),
                r.product_check.map(|p| p.render()).unwrap_or_default(),
            ]
        })
        .collect();
    csv_table(&CONSTANTS_HEADER, &rows)
}

pub const DENSITY_HEADER: [&str; 13] = [
    "family_id",
    "sigma",
    "P",
    "log_R",
    "members",
    "phi_hat0",
    "nu1",
    "nu2",
    "nu3_tail",
    "D1_emp",
    "D1_pred",
    "abs_diff",
    "bad_mass",
];

pub fn density_csv(results: &[FamilyResult]) -> String {
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            let d = &r.density;
            vec![
                r.id.clone(),
                fmt_num(r.constant.sigma),
                r.primes.to_string(),
                fmt_num(d.log_r),
                d.members.to_string(),
                fmt_num(d.phi_hat0),
                fmt_num(d.nu1),
                fmt_num(d.nu2),
                fmt_num(d.tail),
                fmt_num(d.empirical),
                fmt_num(d.predicted),
                fmt_num((d.empirical - d.predicted).abs()),
                fmt_num(d.bad_mass),
            ]
        })
        .collect();
    csv_table(&DENSITY_HEADER, &rows)
}

fn class_json(c: symfam_core::stats::Class) -> Value {
    c.value().map_or(Value::String("indeterminate".into()), |v| json!(v))
}

/// Floats go through [`fmt_num`] and back so JSON matches the CSV digits.
fn num(x: f64) -> Value {
    fmt_num(x).parse::<f64>().ok().and_then(|v| serde_json::Number::from_f64(v).map(Value::Number)).unwrap_or(Value::Null)
}

pub fn results_json(results: &[FamilyResult]) -> Value {
    Value::Array(
        results
            .iter()
            .map(|r| {
                let c = &r.constant;
                let d = &r.density;
                json!({
                    "family_id": r.id,
                    "label": r.label,
                    "sigma": num(c.sigma),
                    "P": r.primes,
                    "cutoff": c.cutoff,
                    "constant": {
                        "c": num(c.c),
                        "c_raw": num(c.c_raw),
                        "c_class": class_json(c.c_class),
                        "epsilon": class_json(c.epsilon),
                        "r": num(c.r),
                        "r_raw": num(c.r_raw),
                        "tolerance": num(c.tolerance),
                    },
                    "density": {
                        "empirical": num(d.empirical),
                        "predicted": num(d.predicted),
                        "phi_hat0": num(d.phi_hat0),
                        "nu1": num(d.nu1),
                        "nu2": num(d.nu2),
                        "nu3_tail": num(d.tail),
                        "log_r": num(d.log_r),
                        "members": d.members,
                        "bad_mass": num(d.bad_mass),
                    },
                    "product_check": r.product_check,
                })
            })
            .collect(),
    )
}
