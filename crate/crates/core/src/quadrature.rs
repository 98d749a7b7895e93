//! Quadrature-based reference values for `cos θ` matrix elements.
//!
//! Nothing here is used to build operators. The element is computed as
//! `∫ P̄_j'^|m|(x) x P̄_j^|m|(x) dx` over `[-1, 1]` where the associated Legendre
//! functions come from the plain three-term recurrence and are normalized by
//! quadrature, so no closed-form coupling coefficient enters.

use std::f64::consts::PI;

/// Minimum number of Gauss-Legendre nodes used by the oracle.
pub const MIN_NODES: usize = 64;

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// `(P_n(x), P_n'(x))` by the Bonnet recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Unnormalized `P_l^m(x)` (no Condon-Shortley phase), `m >= 0`, `l >= m`.
pub fn associated_legendre(l: u32, m: u32, x: f64) -> f64 {
    assert!(l >= m);
    // P_m^m = (2m-1)!! (1-x^2)^{m/2}
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= (2 * k - 1) as f64 * s;
    }
    if l == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = x * (2 * m + 1) as f64 * pmm;
    for ll in (m + 2)..=l {
        let next = ((2 * ll - 1) as f64 * x * cur - (ll + m - 1) as f64 * prev) / (ll - m) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// `<jp, m| cos θ |j, m>` by Gauss-Legendre quadrature with at least
/// [`MIN_NODES`] nodes.
pub fn cos_theta_element_oracle(j: u32, jp: u32, m: i32) -> f64 {
    let am = m.unsigned_abs();
    assert!(j >= am && jp >= am, "oracle needs j, jp >= |m|");
    let n = MIN_NODES.max((j.max(jp) + am + 4) as usize);
    let rule = GaussLegendre::new(n);
    let norm = |l: u32| {
        rule.integrate(|x| associated_legendre(l, am, x).powi(2))
            .sqrt()
    };
    let overlap =
        rule.integrate(|x| associated_legendre(jp, am, x) * x * associated_legendre(j, am, x));
    overlap / (norm(j) * norm(jp))
}
