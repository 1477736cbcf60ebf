#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use qbnf::ecrlh::ElementSet;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Random positive element set with values in a few-GHz range.
pub fn random_elements<R: Rng>(rng: &mut R) -> ElementSet {
    let l = |rng: &mut R| log_uniform(rng, 0.5e-9, 12e-9);
    let c = |rng: &mut R| log_uniform(rng, 0.3e-12, 6e-12);
    ElementSet {
        c_r_c: c(rng),
        l_l_c: l(rng),
        l_l_d: l(rng),
        c_r_d: c(rng),
        l_r_c: l(rng),
        c_l_c: c(rng),
        c_l_d: c(rng),
        l_r_d: l(rng),
    }
}

/// Lossless Z and Y written in resonance form rather than by element
/// composition.
pub fn closed_form_zy(e: &ElementSet, f: f64) -> (Complex64, Complex64) {
    let w = 2.0 * PI * f;
    let w_cs2 = 1.0 / (e.l_r_c * e.c_l_c);
    let w_dp2 = 1.0 / (e.l_r_d * e.c_l_d);
    let w_cp2 = 1.0 / (e.l_l_c * e.c_r_c);
    let w_ds2 = 1.0 / (e.l_l_d * e.c_r_d);
    let x = w * e.l_r_c * (1.0 - w_cs2 / (w * w)) - 1.0 / (w * e.c_l_d * (1.0 - w_dp2 / (w * w)));
    let b = w * e.c_r_c * (1.0 - w_cp2 / (w * w)) - 1.0 / (w * e.l_l_d * (1.0 - w_ds2 / (w * w)));
    (Complex64::new(0.0, x), Complex64::new(0.0, b))
}

/// Resonances as plain formulas: f_cs, f_dp, f_cp, f_ds.
pub fn resonances(e: &ElementSet) -> [f64; 4] {
    let f = |l: f64, c: f64| 1.0 / (2.0 * PI * (l * c).sqrt());
    [
        f(e.l_r_c, e.c_l_c),
        f(e.l_r_d, e.c_l_d),
        f(e.l_l_c, e.c_r_c),
        f(e.l_l_d, e.c_r_d),
    ]
}

pub fn canonical(z: Complex64) -> Complex64 {
    if z.re < 0.0 || (z.re == 0.0 && z.im < 0.0) {
        -z
    } else {
        z
    }
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Lossless Z and Y built element by element.
pub fn composed_zy(e: &ElementSet, f: f64) -> (Complex64, Complex64) {
    let jw = Complex64::new(0.0, 2.0 * PI * f);
    let z_l = |l: f64| jw * l;
    let y_c = |c: f64| jw * c;
    let z = z_l(e.l_r_c) + 1.0 / y_c(e.c_l_c) + 1.0 / (1.0 / z_l(e.l_r_d) + y_c(e.c_l_d));
    let y = y_c(e.c_r_c) + 1.0 / z_l(e.l_l_c) + 1.0 / (z_l(e.l_l_d) + 1.0 / y_c(e.c_r_d));
    (z, y)
}

fn bisect(g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Poles of Z and Y plus every zero of X, B, 1 + ZY and 2 + ZY in `band`,
/// where the lossless products are ZY = -X B.
pub fn critical_points(e: &ElementSet, band: (f64, f64)) -> Vec<f64> {
    let [_, f_dp, _, f_ds] = resonances(e);
    let x = |f: f64| closed_form_zy(e, f).0.im;
    let b = |f: f64| closed_form_zy(e, f).1.im;
    let fns: [&dyn Fn(f64) -> f64; 4] = [&x, &b, &|f| 1.0 - x(f) * b(f), &|f| 2.0 - x(f) * b(f)];
    let mut cuts = vec![band.0, band.1];
    cuts.extend([f_dp, f_ds].iter().filter(|p| band.0 < **p && **p < band.1));
    cuts.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = cuts[1..cuts.len() - 1].to_vec();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0] * (1.0 + 1e-9), w[1] * (1.0 - 1e-9));
        let n = 4000;
        for g in fns {
            let mut prev = (lo, g(lo));
            for i in 1..=n {
                let f = lo + (hi - lo) * i as f64 / n as f64;
                let v = g(f);
                if v.signum() != prev.1.signum() {
                    out.push(bisect(g, prev.0, f));
                }
                prev = (f, v);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

pub fn near_any(points: &[f64], f: f64, margin: f64) -> bool {
    points.iter().any(|p| ((f - p) / p).abs() < margin)
}
