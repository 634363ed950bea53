//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export has a plain Rust counterpart in [`demo`] so the numbers can be
//! checked natively.

use wasm_bindgen::prelude::*;

pub mod demo;

fn js_err(e: credit_curve::CreditError) -> JsError {
    JsError::new(&e.to_string())
}

/// Survival, forward hazard and par spread of one `(a, b, c)` curve.
#[wasm_bindgen]
pub struct CurveProfile(demo::Profile);

#[wasm_bindgen]
impl CurveProfile {
    #[wasm_bindgen(getter)]
    pub fn tenors(&self) -> Vec<f64> {
        self.0.tenors.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn survival(&self) -> Vec<f64> {
        self.0.survival.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn hazard(&self) -> Vec<f64> {
        self.0.hazard.clone()
    }
    /// Par CDS spread, bp.
    #[wasm_bindgen(getter)]
    pub fn spread_bp(&self) -> Vec<f64> {
        self.0.spread_bp.clone()
    }
}

#[wasm_bindgen]
pub fn curve_profile(
    a: f64,
    b: f64,
    c: f64,
    rate: f64,
    recovery: f64,
    max_tenor: f64,
) -> Result<CurveProfile, JsError> {
    demo::profile(a, b, c, rate, recovery, max_tenor).map(CurveProfile).map_err(js_err)
}

/// Two-bond recovery sweep.
#[wasm_bindgen]
pub struct RecoverySweep(demo::Sweep);

#[wasm_bindgen]
impl RecoverySweep {
    #[wasm_bindgen(getter)]
    pub fn recovery(&self) -> Vec<f64> {
        self.0.recovery.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn hazard(&self) -> Vec<f64> {
        self.0.hazard.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn residual_first(&self) -> Vec<f64> {
        self.0.residual_first.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn residual_second(&self) -> Vec<f64> {
        self.0.residual_second.clone()
    }
    /// Recovery where one flat hazard prices both bonds, NaN when none in range.
    #[wasm_bindgen(getter)]
    pub fn crossover(&self) -> f64 {
        self.0.crossover.map_or(f64::NAN, |x| x.0)
    }
    #[wasm_bindgen(getter)]
    pub fn crossover_hazard(&self) -> f64 {
        self.0.crossover.map_or(f64::NAN, |x| x.1)
    }
}

#[wasm_bindgen]
pub fn recovery_sweep(first: &[f64], second: &[f64], rate: f64) -> Result<RecoverySweep, JsError> {
    let bond = |v: &[f64]| -> Result<demo::BondQuote, JsError> {
        match *v {
            [coupon, tenor, price] => Ok(demo::BondQuote { coupon, tenor, price }),
            _ => Err(JsError::new("bond is [coupon, tenor, price]")),
        }
    };
    demo::sweep(bond(first)?, bond(second)?, rate).map(RecoverySweep).map_err(js_err)
}

/// Par spreads by rating, row-major `ratings x tenors`, bp.
#[wasm_bindgen]
pub fn grid_spreads(anchors: &[f64], c: f64, rate: f64, tenors: &[f64], floor: f64) -> Result<Vec<f64>, JsError> {
    let [aa_a, aa_b, bbb_a, bbb_b, b_a, b_b] = anchors else {
        return Err(JsError::new("anchors are [AA.a, AA.b, BBB.a, BBB.b, B.a, B.b]"));
    };
    demo::grid_spreads([(*aa_a, *aa_b), (*bbb_a, *bbb_b), (*b_a, *b_b)], c, rate, tenors, floor).map_err(js_err)
}

#[wasm_bindgen]
pub fn rating_symbols() -> Vec<String> {
    credit_curve::Rating::all().map(|r| r.symbol().to_string()).collect()
}
