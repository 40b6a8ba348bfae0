//! One-dimensional root bracketing and maximisation.

use crate::scalar::Scalar;

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
/// Returns `(argmax, max)`.
pub fn golden_max<S: Scalar, F: Fn(S) -> S>(f: F, mut lo: S, mut hi: S, iters: usize) -> (S, S) {
    let inv_phi = (S::lit(5.0).sqrt() - S::one()) / S::two();
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Root of `f` inside a sign-changing bracket `[a, b]` by the Illinois
/// variant of regula falsi. Stops when the bracket is below `tol` or a
/// zero is hit exactly.
pub fn illinois<S: Scalar, F: Fn(S) -> S>(f: F, mut a: S, mut b: S, tol: S) -> Option<S> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == S::zero() {
        return Some(a);
    }
    if fb == S::zero() {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let mut side = 0i8;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        let c = if c > a.min(b) && c < a.max(b) {
            c
        } else {
            (a + b) / S::two()
        };
        let fc = f(c);
        if fc == S::zero() {
            return Some(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa = fa / S::two();
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb = fb / S::two();
            }
            side = 1;
        }
        if (b - a).abs() <= tol {
            break;
        }
    }
    Some(if fa.abs() < fb.abs() { a } else { b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cosine_root() {
        let r = illinois(|x: f64| x.cos(), 1.0, 2.0, 1e-15).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        assert!(illinois(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12).is_none());
    }

    #[test]
    fn finds_parabola_peak() {
        let (x, y) = golden_max(|x: f64| -(x - 0.3) * (x - 0.3) + 2.0, 0.0, 1.0, 100);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((y - 2.0).abs() < 1e-14);
    }
}
