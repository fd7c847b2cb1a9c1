//! Monotone bracketing searches shared by the inverse, norm and conjugate code.

/// Generalized inverse `inf{r >= 0 : f(r) > s}` of a nondecreasing `f` with `f(0) = 0`.
///
/// The bracket is found by doubling (or halving) from 1 and then bisected to
/// full floating-point resolution, which is well below the 1e-12 absolute
/// tolerance the callers require. Returns `f64::INFINITY` when `f` never
/// exceeds `s`.
pub fn generalized_inverse<F: Fn(f64) -> f64>(f: F, s: f64) -> f64 {
    if s.is_nan() || s == f64::INFINITY {
        return f64::INFINITY;
    }
    let exceeds = |r: f64| f(r) > s;
    let (mut lo, mut hi);
    if exceeds(1.0) {
        hi = 1.0;
        lo = 0.5;
        while exceeds(lo) {
            hi = lo;
            lo *= 0.5;
            if lo < 1e-300 {
                return 0.0;
            }
        }
    } else {
        lo = 1.0;
        hi = 2.0;
        while !exceeds(hi) {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::INFINITY;
            }
        }
    }
    // invariant: f(lo) <= s < f(hi)
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if exceeds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // the infimum lies in [lo, hi]; hi is the first point known to exceed s
    if hi - lo <= f64::EPSILON * hi.max(1e-300) * 4.0 {
        hi
    } else {
        0.5 * (lo + hi)
    }
}

/// Smallest `lambda` in `[lo, hi]` with `g(lambda) <= 1` for a nonincreasing `g`,
/// located to relative width `rel_tol`.
///
/// Illinois-type regula falsi on `(ln lambda, ln g)`, which is close to linear
/// for power-like modulars. Steps are kept a quarter tolerance inside the
/// bracket and a plain geometric bisection step is taken whenever the bracket
/// fails to halve within three steps, so the search never does worse than
/// bisection. Returns `None` when even `g(hi) > 1`; the returned value always
/// satisfies the constraint.
pub fn gauge_search<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, rel_tol: f64) -> Option<f64> {
    let g_hi = g(hi);
    if g_hi > 1.0 {
        return None;
    }
    let g_lo = g(lo);
    if g_lo <= 1.0 {
        return Some(lo);
    }
    // invariant: g(lam_a) > 1 >= g(lam_b)
    let (mut lam_a, mut lam_b) = (lo, hi);
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let (mut fa, mut fb) = (g_lo.ln(), g_hi.ln());
    let tol = rel_tol.ln_1p();
    let eps = 0.25 * tol;
    let mut side = 0i8;
    let mut width_mark = b - a;
    let mut since_halved = 0;
    while lam_b / lam_a - 1.0 > rel_tol {
        let secant = fa.is_finite() && fb.is_finite() && fa != fb;
        let mut x = if secant && since_halved < 3 {
            (a * fb - b * fa) / (fb - fa)
        } else {
            0.5 * (a + b)
        };
        if b - a > 2.0 * eps {
            x = x.clamp(a + eps, b - eps);
        }
        let lam = x.exp();
        if lam <= lam_a || lam >= lam_b {
            break;
        }
        let fx = g(lam).ln();
        if fx <= 0.0 {
            (b, fb, lam_b) = (x, fx, lam);
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            (a, fa, lam_a) = (x, fx, lam);
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if b - a <= 0.5 * width_mark {
            width_mark = b - a;
            since_halved = 0;
        } else {
            since_halved += 1;
        }
    }
    Some(lam_b)
}

/// Golden-section search for the maximum of a unimodal `g` on `[a, b]`.
pub fn golden_max<G: Fn(f64) -> f64>(g: G, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if b - a <= 1e-15 * b.abs().max(1e-300) {
            break;
        }
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
    }
    if gc >= gd {
        (c, gc)
    } else {
        (d, gd)
    }
}
