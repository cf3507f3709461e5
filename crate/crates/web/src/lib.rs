//! Browser bindings for the demo page in `www/`. Each exported function
//! takes plain strings and returns a JSON string; the Rust side of each one
//! is an ordinary function so it can be tested natively.

use magnitude::embed::fourth_proportional_at;
use magnitude::power::{into_mul, pow_at, Exponent};
use magnitude::ratio::{compare_elements, RatioRel};
use magnitude::space::ApproxPolicy;
use magnitude::{Element, Interval, ModelId, PosRat};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct Bounds {
    pub mid: String,
    pub lo: String,
    pub hi: String,
    /// `lo` and `hi` as floats, for plotting only.
    pub lo_f: f64,
    pub hi_f: f64,
}

impl Bounds {
    fn new(i: &Interval, digits: u32) -> Bounds {
        Bounds {
            mid: i.midpoint().to_decimal(digits),
            lo: i.lo().to_string(),
            hi: i.hi().to_string(),
            lo_f: to_f64(i.lo()),
            hi_f: to_f64(i.hi()),
        }
    }
}

fn to_f64(q: &PosRat) -> f64 {
    q.to_decimal(17).parse().unwrap_or(f64::NAN)
}

fn digits(p: u32) -> u32 {
    (p as u64 * 30103 / 100000) as u32
}

fn err(e: magnitude::MagnitudeError) -> String {
    e.to_string()
}

fn model(text: &str) -> Result<ModelId, String> {
    text.parse().map_err(err)
}

#[derive(Debug, Serialize)]
pub struct RatioView {
    pub relation: String,
    pub witness: Option<String>,
    /// Multiplier pairs `(m, n)` the search tried, in order.
    pub path: Vec<(String, String)>,
}

/// `a:b` in `left` against `a2:b2` in `right`.
pub fn ratio_view(left: &str, a: &str, b: &str, right: &str, a2: &str, b2: &str, fuel: u32) -> Result<RatioView, String> {
    let (l, r) = (model(left)?, model(right)?);
    let parse = |m, s: &str| Element::parse(m, s).map_err(err);
    let trace = compare_elements(&parse(l, a)?, &parse(l, b)?, &parse(r, a2)?, &parse(r, b2)?, fuel.into())
        .map_err(err)?;
    let witness = match &trace.relation {
        RatioRel::Greater(w) | RatioRel::Less(w) => Some(w.to_string()),
        _ => None,
    };
    Ok(RatioView {
        relation: trace.relation.to_string(),
        witness,
        path: trace.visited.iter().map(|(m, n)| (m.to_string(), n.to_string())).collect(),
    })
}

#[derive(Debug, Serialize)]
pub struct PowerPoint {
    pub y: String,
    pub y_f: f64,
    pub value: Bounds,
}

/// `x^y` for `y = k/steps * y_max`, `k = 1..=steps`.
pub fn power_curve(x: &str, y_max: &str, steps: u32, precision: u32) -> Result<Vec<PowerPoint>, String> {
    if steps == 0 || steps > 400 {
        return Err("steps must be between 1 and 400".into());
    }
    let base = Element::parse(ModelId::Real, x).map_err(err)?.to_real();
    let base = into_mul(&base, &ApproxPolicy::new(precision)).map_err(err)?;
    let y_max: PosRat = y_max.parse().map_err(err)?;
    (1..=steps as u64)
        .map(|k| {
            let y = y_max.mul(&PosRat::from_u64(k, steps.into()));
            let i = pow_at(&base, &Exponent::Rat(y.clone()), precision).map_err(err)?;
            Ok(PowerPoint { y_f: to_f64(&y), y: y.to_string(), value: Bounds::new(&i, digits(precision)) })
        })
        .collect()
}

/// The `b'` with `a:b = a':b'`, for rational `a, b` and real `a'`.
pub fn fourth_view(a: &str, b: &str, a_prime: &str, precision: u32) -> Result<Bounds, String> {
    let a: PosRat = a.parse().map_err(err)?;
    let b: PosRat = b.parse().map_err(err)?;
    let a_prime = Element::parse(ModelId::Real, a_prime).map_err(err)?.to_real();
    let i = fourth_proportional_at(&a, &b, &a_prime, precision).map_err(err)?;
    Ok(Bounds::new(&i, digits(precision)))
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string())).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn compare_ratios(left: &str, a: &str, b: &str, right: &str, a2: &str, b2: &str, fuel: u32) -> Result<String, JsValue> {
    to_js(ratio_view(left, a, b, right, a2, b2, fuel))
}

#[wasm_bindgen]
pub fn power(x: &str, y_max: &str, steps: u32, precision: u32) -> Result<String, JsValue> {
    to_js(power_curve(x, y_max, steps, precision))
}

#[wasm_bindgen]
pub fn fourth(a: &str, b: &str, a_prime: &str, precision: u32) -> Result<String, JsValue> {
    to_js(fourth_view(a, b, a_prime, precision))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_path_ends_at_witness() {
        let v = ratio_view("rat", "3", "2", "rat", "4", "3", 64).unwrap();
        assert_eq!(v.witness.as_deref(), Some("m=3 n=4"));
        assert_eq!(v.path.last(), Some(&("3".to_string(), "4".to_string())));
    }

    #[test]
    fn real_against_rat() {
        let v = ratio_view("real", "sqrt(2)", "1", "rat", "7", "5", 64).unwrap();
        assert!(v.relation.starts_with("greater"), "{}", v.relation);
    }

    #[test]
    fn power_curve_ends_at_square() {
        let pts = power_curve("3/2", "2", 8, 30).unwrap();
        assert_eq!(pts.len(), 8);
        let last = &pts[7].value;
        assert!(last.lo_f <= 2.25 && 2.25 <= last.hi_f);
        assert!(pts.windows(2).all(|w| w[0].value.hi_f <= w[1].value.lo_f));
    }

    #[test]
    fn power_rejects_small_base() {
        assert!(power_curve("1", "2", 4, 20).is_err());
    }

    #[test]
    fn fourth_of_rationals() {
        let f = fourth_view("3", "5", "2/3", 30).unwrap();
        assert!(f.mid.starts_with("1.111111111"), "{}", f.mid);
    }
}
