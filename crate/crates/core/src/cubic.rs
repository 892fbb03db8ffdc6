//! Real roots of a real cubic through the eigenvalues of its companion matrix.

use nalgebra::Matrix3;

/// Imaginary-part cutoff, relative to `max(1, |re|)` of the rescaled root.
pub const IMAG_CUTOFF: f64 = 1e-9;

/// Real roots of `a3·x³ + a2·x² + a1·x + a0`, ascending. Requires `a3 != 0`.
///
/// The polynomial is made monic and the variable rescaled so that all
/// coefficients are O(1) before the companion eigenvalues are taken; each
/// real root is then refined by Newton steps on the original polynomial.
pub fn real_roots(a3: f64, a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    assert!(a3 != 0.0, "leading coefficient must be nonzero");
    let (b2, b1, b0) = (a2 / a3, a1 / a3, a0 / a3);
    let scale = b2.abs().max(b1.abs().sqrt()).max(b0.abs().cbrt());
    if scale == 0.0 {
        return vec![0.0; 3];
    }
    let (c2, c1, c0) = (b2 / scale, b1 / (scale * scale), b0 / (scale * scale * scale));

    #[rustfmt::skip]
    let companion = Matrix3::new(
        -c2, -c1, -c0,
        1.0, 0.0, 0.0,
        0.0, 1.0, 0.0,
    );
    let mut roots: Vec<f64> = companion
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= IMAG_CUTOFF * z.re.abs().max(1.0))
        .map(|z| polish(z.re, c2, c1, c0) * scale)
        .collect();
    roots.sort_by(f64::total_cmp);
    roots
}

fn eval(x: f64, c2: f64, c1: f64, c0: f64) -> (f64, f64) {
    let p = ((x + c2) * x + c1) * x + c0;
    let dp = (3.0 * x + 2.0 * c2) * x + c1;
    (p, dp)
}

fn polish(mut x: f64, c2: f64, c1: f64, c0: f64) -> f64 {
    let (mut p, _) = eval(x, c2, c1, c0);
    for _ in 0..4 {
        let (_, dp) = eval(x, c2, c1, c0);
        if dp == 0.0 || p == 0.0 {
            break;
        }
        let next = x - p / dp;
        let (pn, _) = eval(next, c2, c1, c0);
        if pn.abs() >= p.abs() {
            break;
        }
        x = next;
        p = pn;
    }
    x
}
