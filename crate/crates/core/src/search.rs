//! Scalar search and finite-difference helpers.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
///
/// Returns the final bracket and the best point seen.
pub(crate) fn golden_section_max(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    max_iter: usize,
) -> GoldenResult {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if hi - lo <= 4.0 * f64::EPSILON * x1.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let (best, value) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    GoldenResult {
        lo,
        hi,
        best,
        value,
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct GoldenResult {
    pub lo: f64,
    pub hi: f64,
    pub best: f64,
    #[allow(dead_code)]
    pub value: f64,
}

/// Bisection on a sign change `g(lo) > 0 > g(hi)`, run until the bracket
/// cannot be split in `f64`.
pub(crate) fn bisect_descending(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..1100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Central differences `(f'(x), f''(x))` with step `h`.
pub fn central_differences(f: impl Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
    let (fm, f0, fp) = (f(x - h), f(x), f(x + h));
    ((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h))
}

/// Five-point stencils `(f'(x), f''(x))`, fourth-order accurate.
pub fn five_point_differences(f: impl Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
    let (fm2, fm1, f0, fp1, fp2) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
    let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    (d1, d2)
}
