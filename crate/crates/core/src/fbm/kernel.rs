use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::HurstParam;
use crate::quadrature::{gl64, ln_beta};

/// `c_H = sqrt(H(2H-1) / B(2-2H, H-1/2))`, evaluated through log-Gamma.
pub fn normalization_constant(h: HurstParam) -> f64 {
    let h = h.value();
    let ln_b = ln_beta(2.0 - 2.0 * h, h - 0.5);
    (h * (2.0 * h - 1.0)).sqrt() * (-0.5 * ln_b).exp()
}

/// The Volterra kernel
/// `K_H(t,s) = c_H 1_{(0,t)}(s) s^{1/2-H} ∫_s^t (u-s)^{H-3/2} u^{H-1/2} du`.
///
/// With `u = s + w^q`, `q = 2/(2H-1)`, the integral becomes
/// `q ∫_0^{(t-s)^{H-1/2}} (s + w^q)^{H-1/2} dw`, whose integrand is bounded.
/// It is evaluated with 64-point Gauss-Legendre on panels that start at the
/// transition `w = s^{H-1/2}` and grow geometrically.
pub fn volterra_kernel(h: HurstParam, t: f64, s: f64) -> f64 {
    if s <= 0.0 || s >= t {
        return 0.0;
    }
    normalization_constant(h) * kernel_integral(h, t, s)
}

/// `K_H(t,s) / c_H` for `0 < s < t`.
fn kernel_integral(h: HurstParam, t: f64, s: f64) -> f64 {
    let e = h.excess();
    // 2/(2H-1) = 1/(H-1/2)
    let q = 1.0 / e;
    let upper = (t - s).powf(e);
    let knee = s.powf(e);
    let integrand = |w: f64| (s + w.powf(q)).powf(e);
    let rule = gl64();

    let mut total = 0.0;
    let mut lo = 0.0;
    let mut hi = knee.min(upper);
    loop {
        total += rule.integrate(lo, hi, integrand);
        if hi >= upper {
            break;
        }
        lo = hi;
        hi = (hi * 4.0).min(upper);
    }
    q * total * s.powf(-e)
}

/// Cubic-interpolated lookup of `K_H` for the simulation hot path.
///
/// By self-similarity `K_H(t,s) = t^{2H-1} s^{1/2-H} φ(s/t)` with
/// `φ(v) = v^{H-1/2} K_H(1,v)`, which is bounded on `[0,1]`. `φ` is
/// tabulated on a uniform mesh; arguments within [`KernelTable::BAND`] of
/// either end of `(0,1)`, where `φ` has unbounded higher derivatives, fall
/// back to [`volterra_kernel`].
#[derive(Debug)]
pub struct KernelTable {
    h: HurstParam,
    phi: Vec<f64>,
}

impl KernelTable {
    const CELLS: usize = 1 << 17;
    pub const BAND: f64 = 5e-4;

    pub fn new(h: HurstParam) -> Self {
        let n = Self::CELLS;
        let e = h.excess();
        let c = normalization_constant(h);
        let mut phi = Vec::with_capacity(n + 1);
        phi.push(c / (2.0 * e));
        for i in 1..n {
            let v = i as f64 / n as f64;
            phi.push(c * kernel_integral(h, 1.0, v) * v.powf(e));
        }
        phi.push(0.0);
        Self { h, phi }
    }

    /// Shared table for `h`, built on first use.
    pub fn shared(h: HurstParam) -> Arc<KernelTable> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<KernelTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|p| p.into_inner());
        guard
            .entry(h.value().to_bits())
            .or_insert_with(|| Arc::new(KernelTable::new(h)))
            .clone()
    }

    pub fn hurst(&self) -> HurstParam {
        self.h
    }

    #[inline]
    fn phi_at(&self, v: f64) -> f64 {
        let n = Self::CELLS;
        let x = v * n as f64;
        let i = (x as usize).clamp(1, n - 2);
        let f = x - i as f64;
        let p = &self.phi[i - 1..i + 3];
        let wm = -f * (f - 1.0) * (f - 2.0) / 6.0;
        let w0 = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
        let w1 = -(f + 1.0) * f * (f - 2.0) / 2.0;
        let w2 = (f + 1.0) * f * (f - 1.0) / 6.0;
        wm * p[0] + w0 * p[1] + w1 * p[2] + w2 * p[3]
    }

    /// Approximation of `K_H(t,s)`.
    pub fn kernel(&self, t: f64, s: f64) -> f64 {
        if s <= 0.0 || s >= t {
            return 0.0;
        }
        let v = s / t;
        if !(Self::BAND..=1.0 - Self::BAND).contains(&v) {
            return volterra_kernel(self.h, t, s);
        }
        let e = self.h.excess();
        t.powf(2.0 * e) * s.powf(-e) * self.phi_at(v)
    }

    /// `Σ_k K_H(t, s_k) dw_k` over the driver midpoints `s_k < t`.
    ///
    /// `mids` must be increasing and `mid_pow[k] = mids[k]^{1/2-H}`.
    pub(crate) fn wiener_sum(&self, t: f64, mids: &[f64], mid_pow: &[f64], dw: &[f64]) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let end = mids.partition_point(|&s| s < t);
        let lo = mids[..end].partition_point(|&s| s < Self::BAND * t);
        let hi = lo + mids[lo..end].partition_point(|&s| s <= (1.0 - Self::BAND) * t);

        let mut direct = 0.0;
        for k in (0..lo).chain(hi..end) {
            direct += volterra_kernel(self.h, t, mids[k]) * dw[k];
        }

        let inv_t = 1.0 / t;
        let mut tabulated = 0.0;
        for k in lo..hi {
            tabulated += mid_pow[k] * self.phi_at(mids[k] * inv_t) * dw[k];
        }
        direct + t.powf(2.0 * self.h.excess()) * tabulated
    }
}
