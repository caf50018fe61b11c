//! Numerator of the determinant of the height-mass Jacobian.
//!
//! The determinant `f2 = h1_a h2_b - h1_b h2_a` of the two mass formulas
//! has removable and singular denominators. Clearing them symbolically
//! gives the identity
//!
//! ```text
//! f2 = (3/16) * f2_tilde * (s - t)^4 / (a b (a + b) s t x1^2 y1^2)
//! ```
//!
//! with `s = sqrt(a^2 - 1)`, `t = sqrt(b^2 - 1)`. The factor multiplying
//! `f2_tilde` is positive wherever `f2` is defined and `a, b > 1`, so
//! `f2_tilde` has the sign of `f2`. It is a polynomial in `(a, b, s, t)`
//! of degree at most one in `s` and in `t`, stored below as integer
//! coefficients.

use crate::error::DomainError;
use crate::scalar::Scalar;

/// `(power of a, power of b, power of s, power of t, coefficient)`.
pub const TERMS: [(u8, u8, u8, u8, f64); 323] = [
    (0, 4, 0, 0, 768.0),
    (0, 4, 0, 1, -768.0),
    (0, 4, 1, 0, 768.0),
    (0, 4, 1, 1, 768.0),
    (0, 5, 0, 0, 512.0),
    (0, 5, 1, 1, 512.0),
    (0, 6, 0, 0, -1920.0),
    (0, 6, 0, 1, 576.0),
    (0, 6, 1, 0, -960.0),
    (0, 6, 1, 1, -1536.0),
    (0, 7, 0, 0, -512.0),
    (0, 7, 1, 1, -256.0),
    (0, 8, 0, 0, 1520.0),
    (0, 8, 0, 1, -64.0),
    (0, 8, 1, 0, 256.0),
    (0, 8, 1, 1, 848.0),
    (0, 9, 0, 0, 64.0),
    (0, 9, 0, 1, 48.0),
    (0, 9, 1, 0, -48.0),
    (0, 10, 0, 0, -392.0),
    (0, 10, 1, 1, -112.0),
    (0, 11, 0, 1, -16.0),
    (0, 11, 1, 0, 40.0),
    (0, 12, 0, 0, 16.0),
    (1, 3, 0, 0, 768.0),
    (1, 3, 0, 1, -768.0),
    (1, 3, 1, 0, 768.0),
    (1, 3, 1, 1, 768.0),
    (1, 4, 0, 0, 512.0),
    (1, 4, 1, 1, 512.0),
    (1, 5, 0, 0, -1920.0),
    (1, 5, 0, 1, 576.0),
    (1, 5, 1, 0, -960.0),
    (1, 5, 1, 1, -1536.0),
    (1, 6, 0, 0, -512.0),
    (1, 6, 1, 1, -256.0),
    (1, 7, 0, 0, 1520.0),
    (1, 7, 0, 1, -64.0),
    (1, 7, 1, 0, 256.0),
    (1, 7, 1, 1, 848.0),
    (1, 8, 0, 0, 64.0),
    (1, 8, 0, 1, 48.0),
    (1, 8, 1, 0, -48.0),
    (1, 9, 0, 0, -392.0),
    (1, 9, 1, 1, -112.0),
    (1, 10, 0, 1, -16.0),
    (1, 10, 1, 0, 40.0),
    (1, 11, 0, 0, 16.0),
    (2, 3, 0, 0, -1024.0),
    (2, 3, 1, 1, -1024.0),
    (2, 4, 0, 0, -1792.0),
    (2, 4, 0, 1, 832.0),
    (2, 4, 1, 0, -448.0),
    (2, 4, 1, 1, -1408.0),
    (2, 5, 0, 0, 512.0),
    (2, 5, 1, 1, 256.0),
    (2, 6, 0, 0, 4288.0),
    (2, 6, 0, 1, -448.0),
    (2, 6, 1, 0, 384.0),
    (2, 6, 1, 1, 2624.0),
    (2, 7, 0, 0, 256.0),
    (2, 8, 0, 0, -3120.0),
    (2, 8, 1, 1, -1224.0),
    (2, 9, 0, 1, -64.0),
    (2, 9, 1, 0, 40.0),
    (2, 10, 0, 0, 672.0),
    (2, 10, 1, 1, 104.0),
    (2, 11, 0, 1, 16.0),
    (2, 11, 1, 0, -32.0),
    (2, 12, 0, 0, -16.0),
    (3, 1, 0, 0, 768.0),
    (3, 1, 0, 1, -768.0),
    (3, 1, 1, 0, 768.0),
    (3, 1, 1, 1, 768.0),
    (3, 2, 0, 0, -1024.0),
    (3, 2, 1, 1, -1024.0),
    (3, 3, 0, 0, -3584.0),
    (3, 3, 0, 1, 1280.0),
    (3, 3, 1, 0, -1280.0),
    (3, 3, 1, 1, -2816.0),
    (3, 4, 0, 0, 352.0),
    (3, 4, 1, 1, 32.0),
    (3, 5, 0, 0, 5648.0),
    (3, 5, 0, 1, -448.0),
    (3, 5, 1, 0, 512.0),
    (3, 5, 1, 1, 3376.0),
    (3, 6, 0, 0, 480.0),
    (3, 6, 0, 1, 96.0),
    (3, 6, 1, 0, -96.0),
    (3, 6, 1, 1, 176.0),
    (3, 7, 0, 0, -3488.0),
    (3, 7, 1, 1, -1312.0),
    (3, 8, 0, 0, -170.0),
    (3, 8, 0, 1, -104.0),
    (3, 8, 1, 0, 128.0),
    (3, 8, 1, 1, -94.0),
    (3, 9, 0, 0, 712.0),
    (3, 9, 0, 1, -4.0),
    (3, 9, 1, 0, 4.0),
    (3, 9, 1, 1, 104.0),
    (3, 10, 0, 0, 44.0),
    (3, 10, 0, 1, 16.0),
    (3, 10, 1, 0, -32.0),
    (3, 10, 1, 1, 13.0),
    (3, 11, 0, 0, -16.0),
    (3, 11, 0, 1, 2.0),
    (3, 11, 1, 0, -4.0),
    (3, 12, 0, 0, -2.0),
    (4, 0, 0, 0, 768.0),
    (4, 0, 0, 1, -768.0),
    (4, 0, 1, 0, 768.0),
    (4, 0, 1, 1, 768.0),
    (4, 1, 0, 0, 512.0),
    (4, 1, 1, 1, 512.0),
    (4, 2, 0, 0, -1792.0),
    (4, 2, 0, 1, 448.0),
    (4, 2, 1, 0, -832.0),
    (4, 2, 1, 1, -1408.0),
    (4, 3, 0, 0, 352.0),
    (4, 3, 1, 1, 32.0),
    (4, 4, 0, 0, 2720.0),
    (4, 4, 0, 1, -128.0),
    (4, 4, 1, 0, 128.0),
    (4, 4, 1, 1, 1504.0),
    (4, 5, 0, 0, -416.0),
    (4, 5, 0, 1, 96.0),
    (4, 5, 1, 0, -96.0),
    (4, 5, 1, 1, 176.0),
    (4, 6, 0, 0, -3416.0),
    (4, 6, 1, 1, -1336.0),
    (4, 7, 0, 0, -170.0),
    (4, 7, 0, 1, -40.0),
    (4, 7, 1, 0, 88.0),
    (4, 7, 1, 1, -94.0),
    (4, 8, 0, 0, 1960.0),
    (4, 8, 0, 1, -4.0),
    (4, 8, 1, 0, 4.0),
    (4, 8, 1, 1, 400.0),
    (4, 9, 0, 0, 44.0),
    (4, 9, 0, 1, 16.0),
    (4, 9, 1, 1, 13.0),
    (4, 10, 0, 0, -280.0),
    (4, 10, 0, 1, 2.0),
    (4, 10, 1, 0, -4.0),
    (4, 11, 0, 0, -2.0),
    (5, 0, 0, 0, 512.0),
    (5, 0, 1, 1, 512.0),
    (5, 1, 0, 0, -1920.0),
    (5, 1, 0, 1, 960.0),
    (5, 1, 1, 0, -576.0),
    (5, 1, 1, 1, -1536.0),
    (5, 2, 0, 0, 512.0),
    (5, 2, 1, 1, 256.0),
    (5, 3, 0, 0, 5648.0),
    (5, 3, 0, 1, -512.0),
    (5, 3, 1, 0, 448.0),
    (5, 3, 1, 1, 3376.0),
    (5, 4, 0, 0, -416.0),
    (5, 4, 0, 1, 96.0),
    (5, 4, 1, 0, -96.0),
    (5, 4, 1, 1, 176.0),
    (5, 5, 0, 0, -6112.0),
    (5, 5, 1, 1, -2480.0),
    (5, 6, 0, 0, -492.0),
    (5, 6, 0, 1, -224.0),
    (5, 6, 1, 0, 224.0),
    (5, 6, 1, 1, -292.0),
    (5, 7, 0, 0, 2656.0),
    (5, 7, 1, 1, 520.0),
    (5, 8, 0, 0, 340.0),
    (5, 8, 0, 1, 56.0),
    (5, 8, 1, 0, -120.0),
    (5, 8, 1, 1, 131.0),
    (5, 9, 0, 0, -320.0),
    (5, 9, 0, 1, 4.0),
    (5, 9, 1, 0, -2.0),
    (5, 10, 0, 0, -74.0),
    (5, 10, 1, 1, -12.0),
    (5, 11, 0, 1, -2.0),
    (5, 11, 1, 0, 3.0),
    (5, 12, 0, 0, 2.0),
    (6, 0, 0, 0, -1920.0),
    (6, 0, 0, 1, 960.0),
    (6, 0, 1, 0, -576.0),
    (6, 0, 1, 1, -1536.0),
    (6, 1, 0, 0, -512.0),
    (6, 1, 1, 1, -256.0),
    (6, 2, 0, 0, 4288.0),
    (6, 2, 0, 1, -384.0),
    (6, 2, 1, 0, 448.0),
    (6, 2, 1, 1, 2624.0),
    (6, 3, 0, 0, 480.0),
    (6, 3, 0, 1, 96.0),
    (6, 3, 1, 0, -96.0),
    (6, 3, 1, 1, 176.0),
    (6, 4, 0, 0, -3416.0),
    (6, 4, 1, 1, -1336.0),
    (6, 5, 0, 0, -492.0),
    (6, 5, 0, 1, -224.0),
    (6, 5, 1, 0, 224.0),
    (6, 5, 1, 1, -292.0),
    (6, 6, 0, 0, 1440.0),
    (6, 6, 1, 1, 256.0),
    (6, 7, 0, 0, 340.0),
    (6, 7, 0, 1, 40.0),
    (6, 7, 1, 0, -120.0),
    (6, 7, 1, 1, 131.0),
    (6, 8, 0, 0, -360.0),
    (6, 8, 0, 1, 4.0),
    (6, 8, 1, 0, -2.0),
    (6, 9, 0, 0, -74.0),
    (6, 9, 1, 1, -12.0),
    (6, 10, 0, 1, -2.0),
    (6, 10, 1, 0, 3.0),
    (6, 11, 0, 0, 2.0),
    (7, 0, 0, 0, -512.0),
    (7, 0, 1, 1, -256.0),
    (7, 1, 0, 0, 1520.0),
    (7, 1, 0, 1, -256.0),
    (7, 1, 1, 0, 64.0),
    (7, 1, 1, 1, 848.0),
    (7, 2, 0, 0, 256.0),
    (7, 3, 0, 0, -3488.0),
    (7, 3, 1, 1, -1312.0),
    (7, 4, 0, 0, -170.0),
    (7, 4, 0, 1, -88.0),
    (7, 4, 1, 0, 40.0),
    (7, 4, 1, 1, -94.0),
    (7, 5, 0, 0, 2656.0),
    (7, 5, 1, 1, 520.0),
    (7, 6, 0, 0, 340.0),
    (7, 6, 0, 1, 120.0),
    (7, 6, 1, 0, -40.0),
    (7, 6, 1, 1, 131.0),
    (7, 7, 0, 0, -656.0),
    (7, 8, 0, 0, -200.0),
    (7, 8, 1, 1, -40.0),
    (7, 9, 1, 0, -1.0),
    (7, 10, 0, 0, 30.0),
    (8, 0, 0, 0, 1520.0),
    (8, 0, 0, 1, -256.0),
    (8, 0, 1, 0, 64.0),
    (8, 0, 1, 1, 848.0),
    (8, 1, 0, 0, 64.0),
    (8, 1, 0, 1, 48.0),
    (8, 1, 1, 0, -48.0),
    (8, 2, 0, 0, -3120.0),
    (8, 2, 1, 1, -1224.0),
    (8, 3, 0, 0, -170.0),
    (8, 3, 0, 1, -128.0),
    (8, 3, 1, 0, 104.0),
    (8, 3, 1, 1, -94.0),
    (8, 4, 0, 0, 1960.0),
    (8, 4, 0, 1, -4.0),
    (8, 4, 1, 0, 4.0),
    (8, 4, 1, 1, 400.0),
    (8, 5, 0, 0, 340.0),
    (8, 5, 0, 1, 120.0),
    (8, 5, 1, 0, -56.0),
    (8, 5, 1, 1, 131.0),
    (8, 6, 0, 0, -360.0),
    (8, 6, 0, 1, 2.0),
    (8, 6, 1, 0, -4.0),
    (8, 7, 0, 0, -200.0),
    (8, 7, 1, 1, -40.0),
    (8, 8, 0, 1, 1.0),
    (8, 8, 1, 0, -1.0),
    (8, 9, 0, 0, 29.0),
    (9, 0, 0, 0, 64.0),
    (9, 0, 0, 1, 48.0),
    (9, 0, 1, 0, -48.0),
    (9, 1, 0, 0, -392.0),
    (9, 1, 1, 1, -112.0),
    (9, 2, 0, 1, -40.0),
    (9, 2, 1, 0, 64.0),
    (9, 3, 0, 0, 712.0),
    (9, 3, 0, 1, -4.0),
    (9, 3, 1, 0, 4.0),
    (9, 3, 1, 1, 104.0),
    (9, 4, 0, 0, 44.0),
    (9, 4, 1, 0, -16.0),
    (9, 4, 1, 1, 13.0),
    (9, 5, 0, 0, -320.0),
    (9, 5, 0, 1, 2.0),
    (9, 5, 1, 0, -4.0),
    (9, 6, 0, 0, -74.0),
    (9, 6, 1, 1, -12.0),
    (9, 7, 0, 1, 1.0),
    (9, 8, 0, 0, 29.0),
    (10, 0, 0, 0, -392.0),
    (10, 0, 1, 1, -112.0),
    (10, 1, 0, 1, -40.0),
    (10, 1, 1, 0, 16.0),
    (10, 2, 0, 0, 672.0),
    (10, 2, 1, 1, 104.0),
    (10, 3, 0, 0, 44.0),
    (10, 3, 0, 1, 32.0),
    (10, 3, 1, 0, -16.0),
    (10, 3, 1, 1, 13.0),
    (10, 4, 0, 0, -280.0),
    (10, 4, 0, 1, 4.0),
    (10, 4, 1, 0, -2.0),
    (10, 5, 0, 0, -74.0),
    (10, 5, 1, 1, -12.0),
    (10, 6, 0, 1, -3.0),
    (10, 6, 1, 0, 2.0),
    (10, 7, 0, 0, 30.0),
    (11, 0, 0, 1, -40.0),
    (11, 0, 1, 0, 16.0),
    (11, 1, 0, 0, 16.0),
    (11, 2, 0, 1, 32.0),
    (11, 2, 1, 0, -16.0),
    (11, 3, 0, 0, -16.0),
    (11, 3, 0, 1, 4.0),
    (11, 3, 1, 0, -2.0),
    (11, 4, 0, 0, -2.0),
    (11, 5, 0, 1, -3.0),
    (11, 5, 1, 0, 2.0),
    (11, 6, 0, 0, 2.0),
    (12, 0, 0, 0, 16.0),
    (12, 2, 0, 0, -16.0),
    (12, 3, 0, 0, -2.0),
    (12, 5, 0, 0, 2.0),
];

const MAX_POW: usize = 12;

/// Evaluates `f2_tilde` from `a, b` and the radicals `s, t`.
pub fn eval<S: Scalar>(a: S, b: S, s: S, t: S) -> S {
    let mut apow = [S::from_f64(1.0); MAX_POW + 1];
    let mut bpow = [S::from_f64(1.0); MAX_POW + 1];
    for k in 1..=MAX_POW {
        apow[k] = apow[k - 1] * a;
        bpow[k] = bpow[k - 1] * b;
    }
    // Sum the four groups 1, s, t, st separately so that each radical is
    // multiplied in once.
    let zero = S::from_f64(0.0);
    let mut groups = [zero; 4];
    for &(i, j, k, l, c) in TERMS.iter() {
        let g = &mut groups[(k as usize) * 2 + l as usize];
        *g = *g + apow[i as usize] * bpow[j as usize] * S::from_f64(c);
    }
    groups[0] + groups[1] * t + groups[2] * s + groups[3] * s * t
}

/// The positive factor relating `f2_tilde` to `f2`:
/// `f2 = f2_tilde * cleared_factor`. Fails where `f2` itself is undefined.
pub fn cleared_factor<S: Scalar>(a: S, b: S, s: S, t: S) -> Result<S, DomainError> {
    let d = s - t;
    let x1 = a.powi(3) + d.powi(3);
    let y1 = b.powi(3) + d.powi(3);
    let num = d.powi(4).scale(3.0);
    let den = (a * b * (a + b) * s * t * x1.sqr() * y1.sqr()).scale(16.0);
    num.try_div(den)
}
