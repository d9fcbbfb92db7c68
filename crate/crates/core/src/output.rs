//! Locale-independent text output: CSV tables and JSON documents with every
//! float rounded to 12 significant digits.

use serde_json::{json, Map, Value};

use crate::apparatus::ApparatusConfig;
use crate::cartographer::Singularity;
use crate::phase::{ParameterPath, PhaseTrace, SIGN_CONVENTION};
use crate::scenarios::{DbetaRow, OpticsResult};

pub const TRACE_CSV_HEADER: &str = "step,arclength,b1y,b2y,re_c,im_c,contrast,phase_deg";
pub const DBETA_CSV_HEADER: &str = "delta_beta_deg,total_deg,dynamical_deg,geometric_deg";
pub const SIGNIFICANT_DIGITS: usize = 12;

/// C's `%.12g`: 12 significant digits, trailing zeros dropped, exponent
/// form outside `1e-4 ≤ |x| < 1e12`. Negative zero prints as `0`.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
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
    if exp < -4 || exp >= SIGNIFICANT_DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A JSON number holding `x` rounded to 12 significant digits.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = fmt_g(x).parse().expect("formatted float parses");
    json!(rounded)
}

pub fn trace_csv(trace: &PhaseTrace<f64>) -> String {
    let mut out = String::with_capacity(trace.samples.len() * 96);
    out.push_str(TRACE_CSV_HEADER);
    out.push('\n');
    for s in &trace.samples {
        let fields = [s.step, s.arclength, s.point.b1y, s.point.b2y, s.c.re, s.c.im, s.contrast, s.phase_unwrapped_deg];
        out.push_str(&fields.map(fmt_g).join(","));
        out.push('\n');
    }
    out
}

pub fn path_json(path: &ParameterPath<f64>) -> Value {
    json!({
        "vertices": path.vertices().iter().map(|v| json!([num(v.b1y), num(v.b2y)])).collect::<Vec<_>>(),
        "closed": path.is_closed(),
        "steps_per_segment": path.steps_per_segment(),
    })
}

pub fn trace_json(trace: &PhaseTrace<f64>, config: &ApparatusConfig<f64>) -> Value {
    let samples: Vec<Value> = trace
        .samples
        .iter()
        .map(|s| {
            json!({
                "step": num(s.step),
                "arclength": num(s.arclength),
                "b1y": num(s.point.b1y),
                "b2y": num(s.point.b2y),
                "re_c": num(s.c.re),
                "im_c": num(s.c.im),
                "contrast": num(s.contrast),
                "phase_deg": num(s.phase_unwrapped_deg),
                "refined": s.refined,
            })
        })
        .collect();
    json!({
        "path": path_json(&trace.path),
        "samples": samples,
        "total_phase_deg": num(trace.total_phase_deg),
        "min_contrast": num(trace.min_contrast),
        "sign_convention": SIGN_CONVENTION,
        "config": config.to_json_value(),
    })
}

/// Headline numbers of a trace, without the samples.
pub fn trace_summary(trace: &PhaseTrace<f64>) -> Value {
    json!({
        "path": path_json(&trace.path),
        "samples": trace.samples.len(),
        "refined_samples": trace.samples.iter().filter(|s| s.refined).count(),
        "total_phase_deg": num(trace.total_phase_deg),
        "min_contrast": num(trace.min_contrast),
        "length": num(trace.length()),
    })
}

pub fn singularities_json(found: &[Singularity<f64>]) -> Value {
    Value::Array(
        found
            .iter()
            .map(|s| {
                json!({
                    "b1y": num(s.location.b1y),
                    "b2y": num(s.location.b2y),
                    "charge": s.charge,
                    "radius": num(s.localization_radius),
                    "unresolved": s.unresolved,
                })
            })
            .collect(),
    )
}

pub fn dbeta_csv(rows: &[DbetaRow<f64>]) -> String {
    let mut out = String::from(DBETA_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let fields = [r.delta_beta_deg, r.total_deg, r.dynamical_deg, r.geometric_deg];
        out.push_str(&fields.map(fmt_g).join(","));
        out.push('\n');
    }
    out
}

pub fn optics_csv(result: &OpticsResult<f64>) -> String {
    let mut out = String::from("theta_deg,phase_deg\n");
    for (theta, phase) in &result.rotation_scan {
        out.push_str(&format!("{},{}\n", fmt_g(*theta), fmt_g(*phase)));
    }
    out
}

/// Wraps scenario-specific fields with the convention and config echo.
pub fn summary(kind: &str, config: &ApparatusConfig<f64>, fields: Map<String, Value>) -> Value {
    let mut doc = Map::new();
    doc.insert("scenario".into(), json!(kind));
    doc.extend(fields);
    doc.insert("sign_convention".into(), json!(SIGN_CONVENTION));
    doc.insert("config".into(), config.to_json_value());
    Value::Object(doc)
}

/// Rounds every non-integer number in `value` to 12 significant digits.
pub fn round_floats(value: &Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => num(n.as_f64().expect("f64")),
        Value::Array(items) => Value::Array(items.iter().map(round_floats).collect()),
        Value::Object(map) => Value::Object(map.iter().map(|(k, v)| (k.clone(), round_floats(v))).collect()),
        other => other.clone(),
    }
}

/// Pretty JSON with a trailing newline, floats rounded.
pub fn to_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&round_floats(value)).expect("serializable");
    s.push('\n');
    s
}
