//! Float math shim.
//!
//! The crate is `no_std`, so the usual `f64` method forms of the
//! transcendental functions are routed through `libm` behind an extension
//! trait. Call sites read like ordinary std float code.

#[allow(dead_code)] // test-profile builds link std, whose inherent float methods shadow the shim
pub(crate) trait FloatExt {
    fn sqrt(self) -> f64;
    fn powf(self, e: f64) -> f64;
    fn powi(self, e: i32) -> f64;
    fn exp(self) -> f64;
    fn ln(self) -> f64;
    fn floor(self) -> f64;
    fn ceil(self) -> f64;
    fn cos(self) -> f64;
    fn sin(self) -> f64;
    fn erf(self) -> f64;
}

impl FloatExt for f64 {
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    fn powf(self, e: f64) -> f64 {
        libm::pow(self, e)
    }
    fn powi(self, e: i32) -> f64 {
        let mut out = 1.0;
        let mut base = if e < 0 { 1.0 / self } else { self };
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                out *= base;
            }
            base *= base;
            k >>= 1;
        }
        out
    }
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    fn ln(self) -> f64 {
        libm::log(self)
    }
    fn floor(self) -> f64 {
        libm::floor(self)
    }
    fn ceil(self) -> f64 {
        libm::ceil(self)
    }
    fn cos(self) -> f64 {
        libm::cos(self)
    }
    fn sin(self) -> f64 {
        libm::sin(self)
    }
    fn erf(self) -> f64 {
        libm::erf(self)
    }
}
