//! Nelder–Mead simplex descent in the plane.

use crate::grid::Point;

pub(crate) struct Minimum {
    pub x: Point,
    pub value: f64,
    pub iterations: usize,
}

/// Minimizes `f` from `start` with an initial simplex of size `step`.
///
/// Stops when the simplex diameter drops below `xtol` or after `max_iter`
/// iterations. Infinite values are allowed and simply lose every comparison.
pub(crate) fn nelder_mead<F>(f: F, start: Point, step: f64, xtol: f64, max_iter: usize) -> Minimum
where
    F: Fn(Point) -> f64,
{
    let mut s = [start, start + Point::new(step, 0.0), start + Point::new(0.0, step)];
    let mut v = s.map(&f);
    let mut iterations = 0;
    while iterations < max_iter {
        // order best .. worst
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        s = idx.map(|k| s[k]);
        v = idx.map(|k| v[k]);
        let diameter = s[0].dist(s[1]).max(s[0].dist(s[2])).max(s[1].dist(s[2]));
        if diameter < xtol {
            break;
        }
        iterations += 1;
        let c = (s[0] + s[1]) * 0.5;
        let xr = c + (c - s[2]);
        let fr = f(xr);
        if fr < v[0] {
            let xe = c + (c - s[2]) * 2.0;
            let fe = f(xe);
            if fe < fr {
                (s[2], v[2]) = (xe, fe);
            } else {
                (s[2], v[2]) = (xr, fr);
            }
        } else if fr < v[1] {
            (s[2], v[2]) = (xr, fr);
        } else {
            let (xc, fc) = if fr < v[2] {
                let xc = c + (xr - c) * 0.5;
                (xc, f(xc))
            } else {
                let xc = c + (s[2] - c) * 0.5;
                (xc, f(xc))
            };
            if fc < v[2].min(fr) {
                (s[2], v[2]) = (xc, fc);
            } else {
                for k in 1..3 {
                    s[k] = s[0] + (s[k] - s[0]) * 0.5;
                    v[k] = f(s[k]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
    Minimum { x: s[best], value: v[best], iterations }
}
