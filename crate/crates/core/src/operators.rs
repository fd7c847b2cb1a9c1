//! Fractional maximal operators (centered and uncentered) and the Riesz
//! potential on sampled functions.
//!
//! Ball averages use the digitized measure `#cells * h^n` of the lattice that
//! extends the grid, with `f = 0` outside the domain. In 1-D a ball centered
//! at a grid point covers an odd window `[i - k, i + k]`; the radii
//! `(k + 1/2) h` for `k = 0..=K` enumerate every distinct such ball, so the
//! centered supremum over them is exact for the sampled function. The upper
//! index `K` reaches one cell past the farthest support cell: beyond it the
//! mass is constant and the prefactor decreases since `alpha < n`.

use crate::error::{OlabError, Result};
use crate::exec;
use crate::sampled::{Ball, GridSpec, Point, SampledFunction};
use crate::young::log_grid;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub alpha: f64,
    pub centered: bool,
}

impl OperatorSpec {
    pub fn new(alpha: f64, centered: bool) -> Self {
        Self { alpha, centered }
    }
}

/// Summation strategy; both produce the same radius set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Path {
    /// Prefix sums (and sliding-window maxima for the uncentered 1-D case).
    Fast,
    /// Direct summation over ball cells.
    Brute,
}

fn check_alpha(alpha: f64, n: usize, open_left: bool) -> Result<()> {
    let ok = if open_left { alpha > 0.0 } else { alpha >= 0.0 };
    if ok && alpha < n as f64 {
        Ok(())
    } else {
        let lo = if open_left { "(0" } else { "[0" };
        Err(OlabError::Domain(format!("alpha must lie in {lo}, {n}), got {alpha}")))
    }
}

fn prefix_sums(values: &[f64]) -> Vec<f64> {
    let mut p = Vec::with_capacity(values.len() + 1);
    p.push(0.0);
    let mut acc = 0.0;
    for v in values {
        acc += v;
        p.push(acc);
    }
    p
}

/// Mass of the window `[lo, hi]` clipped to `0..n`.
fn window_from_prefix(prefix: &[f64], lo: i64, hi: i64) -> f64 {
    let n = prefix.len() as i64 - 1;
    let (a, b) = (lo.max(0), hi.min(n - 1));
    if a > b {
        0.0
    } else {
        prefix[(b + 1) as usize] - prefix[a as usize]
    }
}

fn window_direct(values: &[f64], lo: i64, hi: i64) -> f64 {
    let n = values.len() as i64;
    let (a, b) = (lo.max(0), hi.min(n - 1));
    if a > b {
        0.0
    } else {
        values[a as usize..=b as usize].iter().sum()
    }
}

/// First and last support index of a 1-D sample.
fn support_span(values: &[f64]) -> Option<(i64, i64)> {
    let lo = values.iter().position(|&v| v > 0.0)?;
    let hi = values.iter().rposition(|&v| v > 0.0)?;
    Some((lo as i64, hi as i64))
}

fn reach(i: i64, span: (i64, i64)) -> i64 {
    (i - span.0).abs().max((span.1 - i).abs()) + 1
}

/// `((2k + 1) h)^(alpha - 1) * h` for `k = 0..=kmax`: converts a window sum
/// of samples into the ball average.
fn odd_window_weights(h: f64, alpha: f64, kmax: i64) -> Vec<f64> {
    (0..=kmax).map(|k| ((2 * k + 1) as f64 * h).powf(alpha - 1.0) * h).collect()
}

fn centered_1d(f: &SampledFunction, alpha: f64, path: Path) -> Vec<f64> {
    let values = f.values();
    let n = values.len();
    let Some(span) = support_span(values) else {
        return vec![0.0; n];
    };
    let h = f.grid().h;
    let kmax = (0..n as i64).map(|i| reach(i, span)).max().unwrap_or(0);
    let w = odd_window_weights(h, alpha, kmax);
    let prefix = prefix_sums(values);
    exec::map_indexed(n, |i| {
        let i = i as i64;
        let mut best = 0.0f64;
        for k in 0..=reach(i, span) {
            let mass = match path {
                Path::Fast => window_from_prefix(&prefix, i - k, i + k),
                Path::Brute => window_direct(values, i - k, i + k),
            };
            best = best.max(w[k as usize] * mass);
        }
        best
    })
}

/// Maximum of `v` over the window `[i - k, i + k]` for every `i`.
fn sliding_max(v: &[f64], k: usize) -> Vec<f64> {
    let n = v.len();
    let mut out = vec![0.0; n];
    let mut dq: VecDeque<usize> = VecDeque::new();
    let mut next = 0usize;
    for (i, slot) in out.iter_mut().enumerate() {
        let right = (i + k).min(n - 1);
        while next <= right {
            while dq.back().is_some_and(|&b| v[b] <= v[next]) {
                dq.pop_back();
            }
            dq.push_back(next);
            next += 1;
        }
        while dq.front().is_some_and(|&f| f + k < i) {
            dq.pop_front();
        }
        *slot = v[*dq.front().expect("window is nonempty")];
    }
    out
}

fn uncentered_1d(f: &SampledFunction, alpha: f64, path: Path) -> Vec<f64> {
    let values = f.values();
    let n = values.len();
    let Some(span) = support_span(values) else {
        return vec![0.0; n];
    };
    let h = f.grid().h;
    let kmax = (0..n as i64).map(|i| reach(i, span)).max().unwrap_or(0);
    let w = odd_window_weights(h, alpha, kmax);
    let prefix = prefix_sums(values);
    match path {
        Path::Fast => exec::max_reduce(kmax as usize + 1, n, |k| {
            let ki = k as i64;
            let avg: Vec<f64> = (0..n as i64)
                .map(|c| w[k] * window_from_prefix(&prefix, c - ki, c + ki))
                .collect();
            sliding_max(&avg, k)
        }),
        Path::Brute => exec::map_indexed(n, |i| {
            let i = i as i64;
            let mut best = 0.0f64;
            for k in 0..=kmax {
                for c in (i - k).max(0)..=(i + k).min(n as i64 - 1) {
                    best = best.max(w[k as usize] * window_direct(values, c - k, c + k));
                }
            }
            best
        }),
    }
}

/// Lattice disk around a grid point: `(row offset, half-width)` per row and the cell count.
#[derive(Clone, Debug)]
struct DiskShape {
    rows: Vec<(i64, i64)>,
    count: u64,
}

impl DiskShape {
    fn new(h: f64, r: f64) -> Self {
        let reach = r + 1e-9 * h;
        let m = (reach / h).floor() as i64;
        let mut rows = Vec::new();
        let mut count = 0u64;
        for dj in -m..=m {
            let dy = dj as f64 * h;
            let w = ((reach * reach - dy * dy).max(0.0).sqrt() / h).floor() as i64;
            rows.push((dj, w));
            count += (2 * w + 1) as u64;
        }
        Self { rows, count }
    }
}

/// Radius set of the 2-D operators: 64 log-spaced radii in `[h, R*]`, every
/// lattice distance below `16h` and `h/2`, with `R*` the domain diagonal plus `h`.
pub fn radius_set_2d(grid: &GridSpec) -> Vec<f64> {
    let h = grid.h;
    let rstar = 2.0 * std::f64::consts::SQRT_2 * grid.half_extent + h;
    let mut radii = log_grid(h, rstar, 64);
    radii.push(0.5 * h);
    for a in 0..16i64 {
        for b in 0..=a {
            let d2 = a * a + b * b;
            if d2 > 0 && d2 < 256 {
                radii.push((d2 as f64).sqrt() * h);
            }
        }
    }
    radii.sort_by(f64::total_cmp);
    radii.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    radii
}

fn row_prefixes(values: &[f64], side: usize) -> Vec<Vec<f64>> {
    values.chunks(side).map(prefix_sums).collect()
}

fn disk_mass(
    values: &[f64],
    prefixes: &[Vec<f64>],
    side: usize,
    shape: &DiskShape,
    (i, j): (i64, i64),
    path: Path,
) -> f64 {
    let mut mass = 0.0;
    for &(dj, w) in &shape.rows {
        let row = j + dj;
        if row < 0 || row >= side as i64 {
            continue;
        }
        mass += match path {
            Path::Fast => window_from_prefix(&prefixes[row as usize], i - w, i + w),
            Path::Brute => {
                let r = row as usize;
                window_direct(&values[r * side..(r + 1) * side], i - w, i + w)
            }
        };
    }
    mass
}

fn disk_averages(f: &SampledFunction, alpha: f64, path: Path) -> (Vec<DiskShape>, Vec<Vec<f64>>) {
    let grid = f.grid();
    let side = grid.side();
    let values = f.values();
    let prefixes = row_prefixes(values, side);
    let shapes: Vec<DiskShape> = radius_set_2d(grid).into_iter().map(|r| DiskShape::new(grid.h, r)).collect();
    let vol = grid.cell_volume();
    let avgs = exec::map_slice(&shapes, |shape| {
        let pre = (shape.count as f64 * vol).powf(alpha / 2.0 - 1.0) * vol;
        (0..values.len())
            .map(|k| {
                let (i, j) = grid.unflatten(k);
                pre * disk_mass(values, &prefixes, side, shape, (i as i64, j as i64), path)
            })
            .collect()
    });
    (shapes, avgs)
}

fn centered_2d(f: &SampledFunction, alpha: f64, path: Path) -> Vec<f64> {
    let n = f.values().len();
    if f.is_zero() {
        return vec![0.0; n];
    }
    let (_, avgs) = disk_averages(f, alpha, path);
    let mut out = vec![0.0f64; n];
    for a in &avgs {
        for (o, v) in out.iter_mut().zip(a) {
            *o = o.max(*v);
        }
    }
    out
}

fn uncentered_2d(f: &SampledFunction, alpha: f64, path: Path) -> Vec<f64> {
    let n = f.values().len();
    if f.is_zero() {
        return vec![0.0; n];
    }
    let side = f.grid().side();
    let (shapes, avgs) = disk_averages(f, alpha, path);
    // a ball of radius r centered at c contains x iff x lies in the disk of radius r around c
    let per_radius = exec::map_indexed(shapes.len(), |s| {
        let shape = &shapes[s];
        let avg = &avgs[s];
        let mut widths: Vec<i64> = shape.rows.iter().map(|&(_, w)| w).collect();
        widths.sort_unstable();
        widths.dedup();
        let rowmax: Vec<Vec<Vec<f64>>> = widths
            .iter()
            .map(|&w| avg.chunks(side).map(|row| sliding_max(row, w as usize)).collect())
            .collect();
        let mut out = vec![0.0f64; n];
        for &(dj, w) in &shape.rows {
            let slot = widths.binary_search(&w).expect("width recorded");
            for j in 0..side as i64 {
                let row = j + dj;
                if row < 0 || row >= side as i64 {
                    continue;
                }
                let src = &rowmax[slot][row as usize];
                let dst = &mut out[j as usize * side..(j as usize + 1) * side];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d = d.max(*s);
                }
            }
        }
        out
    });
    let mut out = vec![0.0f64; n];
    for a in &per_radius {
        for (o, v) in out.iter_mut().zip(a) {
            *o = o.max(*v);
        }
    }
    out
}

/// `M_alpha f` (centered) or its uncentered variant at every grid point.
pub fn maximal(f: &SampledFunction, spec: &OperatorSpec) -> Result<SampledFunction> {
    maximal_with(f, spec, Path::Fast)
}

pub fn maximal_with(f: &SampledFunction, spec: &OperatorSpec, path: Path) -> Result<SampledFunction> {
    let grid = *f.grid();
    check_alpha(spec.alpha, grid.dim, false)?;
    let values = match (grid.dim, spec.centered) {
        (1, true) => centered_1d(f, spec.alpha, path),
        (1, false) => uncentered_1d(f, spec.alpha, path),
        (_, true) => centered_2d(f, spec.alpha, path),
        (_, false) => uncentered_2d(f, spec.alpha, path),
    };
    SampledFunction::new(grid, values)
}

/// Centered `M_alpha f(x)` at an arbitrary point `x`.
///
/// In 1-D every distinct lattice ball around `x` is visited (radii equal to
/// the distances from `x` to cell centers); in 2-D the radius set of
/// [`radius_set_2d`] is used.
pub fn maximal_at(f: &SampledFunction, x: Point, alpha: f64) -> Result<f64> {
    let grid = *f.grid();
    check_alpha(alpha, grid.dim, false)?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let vol = grid.cell_volume();
    let radii: Vec<f64> = if grid.dim == 1 {
        let (lo, hi) = support_span(f.values()).expect("nonzero");
        let far = (x[0] - grid.coord(lo as usize)).abs().max((grid.coord(hi as usize) - x[0]).abs()) + grid.h;
        let kmax = (far / grid.h).ceil() as i64 + 1;
        let base = ((x[0] + grid.half_extent) / grid.h - 0.5).floor() as i64;
        let mut d: Vec<f64> = (base - kmax..=base + kmax + 1)
            .map(|i| (-grid.half_extent + (i as f64 + 0.5) * grid.h - x[0]).abs())
            .filter(|&d| d > 0.0 && d <= far)
            .collect();
        d.sort_by(f64::total_cmp);
        d.dedup();
        d
    } else {
        radius_set_2d(&grid)
    };
    let mut best = 0.0f64;
    for r in radii {
        let ball = Ball { center: x, radius: r };
        let count = grid.ball_cell_count(&ball);
        if count == 0 {
            continue;
        }
        let mass = crate::sampled::integrate(f, Some(&ball));
        let measure = count as f64 * vol;
        best = best.max(measure.powf(alpha / grid.dim as f64 - 1.0) * mass);
    }
    Ok(best)
}

/// Integral of `|x - y|^(alpha - 1)` over `y` in `[a, b]`.
fn cell_kernel_1d(x: f64, a: f64, b: f64, alpha: f64) -> f64 {
    if x <= a {
        ((b - x).powf(alpha) - (a - x).powf(alpha)) / alpha
    } else if x >= b {
        ((x - a).powf(alpha) - (x - b).powf(alpha)) / alpha
    } else {
        ((x - a).powf(alpha) + (b - x).powf(alpha)) / alpha
    }
}

/// Riesz kernel mass of the cell at lattice offset `d` from a grid point (1-D, exact).
fn toeplitz_1d(d: i64, h: f64, alpha: f64) -> f64 {
    let d = d.unsigned_abs() as f64;
    if d == 0.0 {
        2.0 * (h / 2.0).powf(alpha) / alpha
    } else {
        ((d + 0.5).powf(alpha) - (d - 0.5).powf(alpha)) * h.powf(alpha) / alpha
    }
}

/// Self-cell integral of `|y|^(alpha - 2)` in 2-D, replacing the square cell
/// by the disk of equal area, radius `h / sqrt(pi)`.
fn self_cell_2d(h: f64, alpha: f64) -> f64 {
    let rho = h / PI.sqrt();
    2.0 * PI * rho.powf(alpha) / alpha
}

/// `I_alpha f` at every grid point by direct summation over the support.
pub fn riesz_potential(f: &SampledFunction, alpha: f64) -> Result<SampledFunction> {
    let grid = *f.grid();
    check_alpha(alpha, grid.dim, true)?;
    let support: Vec<(usize, f64)> = f.values().iter().copied().enumerate().filter(|&(_, v)| v > 0.0).collect();
    let h = grid.h;
    let values = if grid.dim == 1 {
        let table: Vec<f64> = (0..grid.side() as i64).map(|d| toeplitz_1d(d, h, alpha)).collect();
        exec::map_indexed(grid.len(), |i| {
            support
                .iter()
                .map(|&(j, v)| v * table[(i as i64 - j as i64).unsigned_abs() as usize])
                .sum()
        })
    } else {
        let self_cell = self_cell_2d(h, alpha);
        let vol = grid.cell_volume();
        exec::map_indexed(grid.len(), |k| {
            let (i, j) = grid.unflatten(k);
            support
                .iter()
                .map(|&(m, v)| {
                    let (a, b) = grid.unflatten(m);
                    if (a, b) == (i, j) {
                        v * self_cell
                    } else {
                        let di = (a as f64 - i as f64) * h;
                        let dj = (b as f64 - j as f64) * h;
                        v * vol * di.hypot(dj).powf(alpha - 2.0)
                    }
                })
                .sum()
        })
    };
    SampledFunction::new(grid, values)
}

/// `I_alpha f(x)` at an arbitrary point.
///
/// In 1-D each cell contributes its exact kernel integral; in 2-D cells use
/// the midpoint rule, except a cell whose center is `x` (equal-area disk).
pub fn riesz_at(f: &SampledFunction, x: Point, alpha: f64) -> Result<f64> {
    let grid = *f.grid();
    check_alpha(alpha, grid.dim, true)?;
    let h = grid.h;
    let mut total = 0.0;
    for (k, &v) in f.values().iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let c = grid.center(k);
        total += v * if grid.dim == 1 {
            cell_kernel_1d(x[0], c[0] - h / 2.0, c[0] + h / 2.0, alpha)
        } else {
            let d = (c[0] - x[0]).hypot(c[1] - x[1]);
            if d <= 1e-9 * h {
                self_cell_2d(h, alpha)
            } else {
                grid.cell_volume() * d.powf(alpha - 2.0)
            }
        };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampled::{sample_function, FormulaSpec};

    fn indicator(grid: &GridSpec, c: f64, r: f64) -> SampledFunction {
        let center = Some(if grid.dim == 1 { vec![c] } else { vec![c, 0.0] });
        sample_function(grid, &FormulaSpec::BallIndicator { center, radius: r, weight: 1.0 }).unwrap()
    }

    #[test]
    fn closed_form_maximal_values() {
        let g = GridSpec::default_1d();
        let f = indicator(&g, 0.0, 1.0);
        let at0 = maximal_at(&f, [0.0, 0.0], 0.5).unwrap();
        let at3 = maximal_at(&f, [3.0, 0.0], 0.5).unwrap();
        assert!((at0 - 2f64.sqrt()).abs() < 1e-12, "{at0}");
        assert!((at3 - 0.5f64.sqrt()).abs() < 1e-12, "{at3}");
        // dense radius-sweep oracle with exact measure 2t
        let dense = |x: f64| {
            (1..200_000)
                .map(|i| {
                    let t = i as f64 * 1e-4;
                    let overlap = ((x + t).min(1.0) - (x - t).max(-1.0)).max(0.0);
                    (2.0 * t).powf(-0.5) * overlap
                })
                .fold(0.0f64, f64::max)
        };
        assert!((dense(0.0) / at0 - 1.0).abs() < 0.02);
        assert!((dense(3.0) / at3 - 1.0).abs() < 0.02);
    }

    #[test]
    fn constant_function_is_fixed_in_the_interior() {
        let g = GridSpec::new(1, 0.125, 4.0).unwrap();
        let f = SampledFunction::from_fn(g, |_| 2.5).unwrap();
        let m = maximal(&f, &OperatorSpec::new(0.0, true)).unwrap();
        let k = g.nearest_index(0.0);
        assert!((m.values()[k] - 2.5).abs() < 1e-12, "{}", m.values()[k]);
    }

    #[test]
    fn fast_and_brute_agree() {
        let g = GridSpec::new(1, 0.125, 4.0).unwrap();
        let f = SampledFunction::from_fn(g, |p| ((p[0] * 3.0).sin() + 1.2) * if p[0].abs() < 2.5 { 1.0 } else { 0.0 })
            .unwrap();
        for centered in [true, false] {
            for alpha in [0.0, 0.25, 0.5] {
                let spec = OperatorSpec::new(alpha, centered);
                let a = maximal_with(&f, &spec, Path::Fast).unwrap();
                let b = maximal_with(&f, &spec, Path::Brute).unwrap();
                for (x, y) in a.values().iter().zip(b.values()) {
                    assert!((x - y).abs() <= 1e-12 * y.max(1.0), "{x} {y}");
                }
            }
        }
        let g2 = GridSpec::new(2, 0.25, 2.0).unwrap();
        let f2 = indicator(&g2, 0.3, 0.9);
        for centered in [true, false] {
            let spec = OperatorSpec::new(0.5, centered);
            let a = maximal_with(&f2, &spec, Path::Fast).unwrap();
            let b = maximal_with(&f2, &spec, Path::Brute).unwrap();
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!((x - y).abs() <= 1e-12 * y.max(1.0));
            }
        }
    }

    #[test]
    fn sliding_max_matches_naive() {
        let v: Vec<f64> = (0..37).map(|i| ((i * 7919) % 13) as f64).collect();
        for k in [0usize, 1, 3, 40] {
            let got = sliding_max(&v, k);
            for i in 0..v.len() {
                let lo = i.saturating_sub(k);
                let hi = (i + k).min(v.len() - 1);
                let want = v[lo..=hi].iter().copied().fold(f64::MIN, f64::max);
                assert_eq!(got[i], want);
            }
        }
    }

    #[test]
    fn riesz_closed_form() {
        let g = GridSpec::default_1d();
        let f = indicator(&g, 0.0, 1.0);
        let v = riesz_at(&f, [0.0, 0.0], 0.5).unwrap();
        assert!((v - 4.0).abs() < 1e-12, "{v}");
        let grid_values = riesz_potential(&f, 0.5).unwrap();
        let k = g.nearest_index(1.0 / 128.0);
        let direct = riesz_at(&f, [g.coord(k), 0.0], 0.5).unwrap();
        assert!((grid_values.values()[k] - direct).abs() < 1e-12);
        let zero = riesz_potential(&SampledFunction::zeros(g), 0.5).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn riesz_2d_disk() {
        // oracle: integral of |y|^(alpha-2) over the unit disk is 2 pi / alpha
        let g = GridSpec::new(2, 1.0 / 32.0, 2.0).unwrap();
        let f = indicator(&g, 0.0, 1.0);
        let k = g.nearest_index(1.0 / 64.0);
        let x = [g.coord(k), g.coord(k)];
        let v = riesz_at(&f, x, 1.0).unwrap();
        assert!((v / (2.0 * PI) - 1.0).abs() < 0.03, "{v}");
        let grid_values = riesz_potential(&f, 1.0).unwrap();
        assert!((grid_values.values()[k * g.side() + k] - v).abs() < 1e-9);
    }

    #[test]
    fn alpha_out_of_range() {
        let g = GridSpec::new(1, 0.25, 1.0).unwrap();
        let f = SampledFunction::zeros(g);
        assert!(matches!(maximal(&f, &OperatorSpec::new(1.0, true)), Err(OlabError::Domain(_))));
        assert!(matches!(riesz_potential(&f, 0.0), Err(OlabError::Domain(_))));
    }
}
