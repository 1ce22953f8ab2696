//! Log-domain hyperbolic helpers for sides too long for direct `cosh`.

use std::f64::consts::LN_2;

pub fn ln_cosh(t: f64) -> f64 {
    let a = t.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// `ln sinh t` for `t > 0`.
pub fn ln_sinh(t: f64) -> f64 {
    if t < 1.0 {
        t.sinh().ln()
    } else {
        t + (-(-2.0 * t).exp_m1()).ln() - LN_2
    }
}

pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `acosh(1 + m)` given `ln m`, accurate both for tiny and huge `m`.
pub fn acosh_one_plus(ln_m: f64) -> f64 {
    if ln_m < 0.0 {
        let m = ln_m.exp();
        (m + (m * (m + 2.0)).sqrt()).ln_1p()
    } else {
        acosh_from_ln(ln_m + (-ln_m).exp().ln_1p())
    }
}

/// `acosh(c)` given `ln c` for `c >= 1`.
pub fn acosh_from_ln(ln_c: f64) -> f64 {
    if ln_c < 1.0 {
        ln_c.exp().acosh()
    } else {
        ln_c + (1.0 + (1.0 - (-2.0 * ln_c).exp()).sqrt()).ln()
    }
}
