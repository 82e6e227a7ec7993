//! Thin wrappers over `libm` so the crate builds without `std`.

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn atanh(x: f64) -> f64 {
    libm::atanh(x)
}

/// `x ln x` with the continuous extension `0 ln 0 = 0`.
#[inline]
pub fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * ln(x)
    }
}

/// `ln(e^x + c)` for `c >= 0`, stable for large `|x|`.
#[inline]
pub fn ln_exp_plus(x: f64, c: f64) -> f64 {
    if c == 0.0 {
        x
    } else if x > 0.0 {
        x + ln_1p(c * exp(-x))
    } else {
        ln(c) + ln_1p(exp(x) / c)
    }
}
