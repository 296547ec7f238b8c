#![allow(dead_code, clippy::excessive_precision)]

use axiring::kernels::{HalfPlanePoint, Regularization};
use axiring::vortex_method::{init_from_profile, InitialProfile, Particle, ParticleSystem};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// (Kronrod value, |K − G|, ∫|f| estimate) on one panel.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for i in 0..7 {
        let x = h * XGK[i];
        let (f1, f2) = (f(c - x), f(c + x));
        k += WGK[i] * (f1 + f2);
        abs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            g += WG[i / 2] * (f1 + f2);
        }
    }
    (k * h, ((k - g) * h).abs(), abs * h.abs())
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol_density: f64, depth: u32) -> f64 {
    let (k, err, abs) = gk15(f, a, b);
    let tol = tol_density * (b - a);
    if err <= tol || err <= 50.0 * f64::EPSILON * abs || depth == 0 {
        return k;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, tol_density, depth - 1) + adapt(f, m, b, tol_density, depth - 1)
}

/// Adaptive Gauss–Kronrod 7/15 with absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    adapt(&f, a, b, tol / (b - a), 60)
}

/// Adaptive quadrature with tolerance relative to `∫|f|`.
pub fn integrate_rel<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64) -> f64 {
    let scale = integrate(|x| f(x).abs(), a, b, 1e-3 * gk15(&|x| f(x).abs(), a, b).2.max(1e-300));
    integrate(f, a, b, rel * scale)
}

/// `∫₀^π cosθ (4 sin²(θ/2) + s)^{−p} dθ`.
pub fn theta_integral(s: f64, p: f64) -> f64 {
    integrate_rel(
        |t: f64| {
            let h = (0.5 * t).sin();
            t.cos() * (4.0 * h * h + s).powf(-p)
        },
        0.0,
        std::f64::consts::PI,
        1e-14,
    )
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

pub fn reg(e: f64) -> Regularization {
    Regularization::new(e).unwrap()
}

pub fn patch(h: f64, eps: f64) -> ParticleSystem {
    let profile = InitialProfile::PatchPair {
        center: HalfPlanePoint::new(1.0, 0.5),
        radius: 0.25,
        amplitude: 1.0,
    };
    init_from_profile(&profile, h, reg(eps)).unwrap()
}

pub fn system(ps: Vec<Particle>, eps: f64) -> ParticleSystem {
    let scale = ParticleSystem::natural_length_scale(&ps);
    ParticleSystem::new(ps, reg(eps), scale).unwrap()
}
