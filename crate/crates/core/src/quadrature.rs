//! Gauss-Legendre rules and a graded integrator for integrands with
//! algebraic endpoint singularities.

use std::f64::consts::PI;
use std::sync::OnceLock;

use statrs::function::gamma::ln_gamma;

/// An `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are the roots of `P_n`, found by Newton iteration from the
    /// Tricomi initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * d * d);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The shared 64-point rule.
pub fn gl64() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(64))
}

pub fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

const GRADED_LEVELS: i32 = 24;

/// Integrate `f` over `[a, b]` when the integrand behaves like
/// `(x - a)^ea` near `a` and `(b - x)^eb` near `b`, with `ea, eb > -1`.
///
/// `f` receives `(x, x - a, b - x)`; the two distances are exact (they are
/// formed from the substitution variable, not by cancellation), so `f` can
/// evaluate the singular factors without losing precision close to an
/// endpoint.
///
/// Each half of the interval is mapped by `x - a = L·y^p` with
/// `p = 1/(1 + ea)` (and symmetrically at `b`), which turns the leading
/// power into a constant, and the `y` range is covered by dyadic panels
/// refined toward `y = 0` with a 16-point rule on each.
pub fn integrate_endpoint_singular<F>(a: f64, b: f64, ea: f64, eb: f64, f: F) -> f64
where
    F: Fn(f64, f64, f64) -> f64,
{
    assert!(ea > -1.0 && eb > -1.0, "endpoint exponents must exceed -1");
    if b <= a {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let left_len = m - a;
    let right_len = b - m;
    let p = 1.0 / (1.0 + ea);
    let q = 1.0 / (1.0 + eb);

    let left = graded_unit(|y| {
        let yp = y.powf(p);
        let da = left_len * yp;
        let db = right_len + left_len * (1.0 - yp);
        let x = a + da;
        f(x, da, db) * p * left_len * y.powf(p - 1.0)
    });
    let right = graded_unit(|y| {
        let yq = y.powf(q);
        let db = right_len * yq;
        let da = left_len + right_len * (1.0 - yq);
        let x = b - db;
        f(x, da, db) * q * right_len * y.powf(q - 1.0)
    });
    left + right
}

fn graded_unit<F: Fn(f64) -> f64>(g: F) -> f64 {
    let rule = gl16();
    let mut total = 0.0;
    let mut hi = 1.0;
    for _ in 0..GRADED_LEVELS {
        let lo = 0.5 * hi;
        total += rule.integrate(lo, hi, &g);
        hi = lo;
    }
    total + rule.integrate(0.0, hi, &g)
}
