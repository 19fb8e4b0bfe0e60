//! wasm-bindgen entry points for the static demo page in `www/`.
//! Every function returns a JSON string; errors come back as `{"error": ...}`.

use hermcert::bergman::{diagonal_asymptotics, sphere_probes, QuadPlan};
use hermcert::certify::modulus_ratio_exact;
use hermcert::scalar::{rat_string, rat_to_f64};
use hermcert::{norm_power, parse_form, parse_point, quillen_minimal_exponent, HermitianForm};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn finish(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn num(x: f64) -> Value {
    if x.is_finite() { json!(x) } else { Value::Null }
}

/// Least `m ≤ m_max` with `‖z‖^{2m}·P` a sum of squared norms, plus the
/// smallest eigenvalue at every scanned `m`.
#[wasm_bindgen]
pub fn quillen_trace(form: &str, m_max: u32) -> String {
    finish((|| {
        let p = parse_form(form).map_err(|e| e.to_string())?;
        let r = norm_power(p.n(), 1).map_err(|e| e.to_string())?;
        let rep = quillen_minimal_exponent(&p, &r, m_max.min(60)).map_err(|e| e.to_string())?;
        let trace: Vec<Value> = rep.trace.iter().map(|t| json!({"m": t.m, "psd": t.psd, "min_eigenvalue": num(t.min_eigenvalue)})).collect();
        Ok(json!({"verdict": rep.verdict.as_str(), "minimal_exponent": rep.minimal_exponent, "trace": trace}))
    })())
}

/// `ρ_m = K(x,x)e^{-mφ}/m` for the Fubini–Study weight at `probes` points.
#[wasm_bindgen]
pub fn bergman_ratios(m_list: &str, probes: u32) -> String {
    finish((|| {
        let ms = m_list
            .split(',')
            .map(|s| s.trim().parse::<u32>().map_err(|_| format!("bad exponent '{s}'")))
            .collect::<Result<Vec<u32>, String>>()?;
        if ms.iter().any(|&m| m > 40) {
            return Err("exponents above 40 are disabled in the demo".into());
        }
        let r = norm_power(1, 1).map_err(|e| e.to_string())?;
        let pts = sphere_probes(probes.clamp(1, 50) as usize);
        let t = diagonal_asymptotics(&r, &HermitianForm::unit(1), &ms, &pts, &QuadPlan::default()).map_err(|e| e.to_string())?;
        let rows: Vec<Value> = t
            .m_list
            .iter()
            .zip(&t.ratios)
            .map(|(m, row)| {
                let mean = row.iter().sum::<f64>() / row.len() as f64;
                json!({"m": m, "mean_rho": num(mean), "max_dev": num(row.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max))})
            })
            .collect();
        Ok(json!({"rows": rows, "b1": num(t.b1_mean()), "c_estimate": num(t.c_estimate)}))
    })())
}

/// Exact `|P|/P` at a Gaussian-rational point, e.g. `"1/100, 1/10, 1"`.
#[wasm_bindgen]
pub fn modulus_ratio(form: &str, point: &str) -> String {
    finish((|| {
        let p = parse_form(form).map_err(|e| e.to_string())?;
        let v = parse_point(point).map_err(|e| e.to_string())?;
        match modulus_ratio_exact(&p, &v).map_err(|e| e.to_string())? {
            Some(r) => Ok(json!({"ratio": rat_string(&r), "approx": rat_to_f64(&r).ok().and_then(|x| x.is_finite().then_some(x))})),
            None => Ok(json!({"ratio": null, "note": "P vanishes at this point"})),
        }
    })())
}
