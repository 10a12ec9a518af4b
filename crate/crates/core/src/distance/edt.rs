//! Exact squared Euclidean distance transform on an n-dimensional lattice.
//!
//! One lower-envelope-of-parabolas pass per axis (Meijster et al. /
//! Felzenszwalb–Huttenlocher) with integer arithmetic throughout, so the
//! output is the exact squared index distance to the nearest source cell.

use rayon::prelude::*;

/// Marker for "no source reachable yet"; large enough that it never wins a
/// comparison against a finite candidate, small enough to keep sums in `i64`.
pub(crate) const FAR: i64 = 1 << 52;

/// Squared distance (index units) from every cell to the nearest `true` cell.
///
/// `shape` lists the extents with the slowest axis first (row-major). Cells
/// with no source at all keep a value `>= FAR`.
pub fn squared_edt(sources: &[bool], shape: &[usize]) -> Vec<i64> {
    let total: usize = shape.iter().product();
    assert_eq!(sources.len(), total, "source length does not match shape");
    let mut values: Vec<i64> = sources.iter().map(|&s| if s { 0 } else { FAR }).collect();
    for axis in 0..shape.len() {
        envelope_pass(&mut values, shape, axis);
    }
    values
}

fn envelope_pass(values: &mut [i64], shape: &[usize], axis: usize) {
    let n = shape[axis];
    if n <= 1 {
        return;
    }
    let stride: usize = shape[axis + 1..].iter().product();
    let block = n * stride;
    values.par_chunks_mut(block).for_each(|chunk| {
        let mut line = vec![0i64; n];
        let mut out = vec![0i64; n];
        let mut s = vec![0usize; n];
        let mut t = vec![0i64; n];
        for offset in 0..stride {
            for (k, v) in line.iter_mut().enumerate() {
                *v = chunk[offset + k * stride];
            }
            lower_envelope(&line, &mut out, &mut s, &mut t);
            for (k, v) in out.iter().enumerate() {
                chunk[offset + k * stride] = *v;
            }
        }
    });
}

/// `out[u] = min_k (u - k)² + f[k]`, exactly.
fn lower_envelope(f: &[i64], out: &mut [i64], s: &mut [usize], t: &mut [i64]) {
    let m = f.len();
    let cost = |x: i64, i: usize| {
        let d = x - i as i64;
        d * d + f[i]
    };
    // Sep(i, u): first integer x where the parabola rooted at u is no worse
    // than the one rooted at i (floor division, i < u).
    let sep = |i: usize, u: usize| {
        let (ii, uu) = (i as i64, u as i64);
        (uu * uu - ii * ii + f[u] - f[i]).div_euclid(2 * (uu - ii))
    };
    let mut q: isize = 0;
    s[0] = 0;
    t[0] = 0;
    for u in 1..m {
        while q >= 0 && cost(t[q as usize], s[q as usize]) > cost(t[q as usize], u) {
            q -= 1;
        }
        if q < 0 {
            q = 0;
            s[0] = u;
        } else {
            let w = 1 + sep(s[q as usize], u);
            if w < m as i64 {
                q += 1;
                s[q as usize] = u;
                t[q as usize] = w;
            }
        }
    }
    for u in (0..m).rev() {
        out[u] = cost(u as i64, s[q as usize]).min(FAR);
        if u as i64 == t[q as usize] {
            q -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(sources: &[bool], shape: &[usize]) -> Vec<i64> {
        let coords = |mut k: usize| {
            let mut c = vec![0i64; shape.len()];
            for a in (0..shape.len()).rev() {
                c[a] = (k % shape[a]) as i64;
                k /= shape[a];
            }
            c
        };
        let src: Vec<Vec<i64>> = (0..sources.len()).filter(|&k| sources[k]).map(coords).collect();
        (0..sources.len())
            .map(|k| {
                let c = coords(k);
                src.iter()
                    .map(|s| s.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum::<i64>())
                    .min()
                    .unwrap_or(FAR)
            })
            .collect()
    }

    #[test]
    fn line_envelope_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..40);
            let src: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.15)).collect();
            assert_eq!(squared_edt(&src, &[n]), brute(&src, &[n]));
        }
    }

    #[test]
    fn three_dimensional_grids_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let shape = [rng.gen_range(1..9), rng.gen_range(1..9), rng.gen_range(1..9)];
            let n: usize = shape.iter().product();
            let src: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.05)).collect();
            assert_eq!(squared_edt(&src, &shape), brute(&src, &shape));
        }
    }

    #[test]
    fn single_source() {
        let (nx, ny) = (9, 7);
        let mut src = vec![false; nx * ny];
        src[3 * nx + 4] = true;
        let d = squared_edt(&src, &[ny, nx]);
        for j in 0..ny {
            for i in 0..nx {
                let (a, b) = (i as i64 - 4, j as i64 - 3);
                assert_eq!(d[j * nx + i], a * a + b * b);
            }
        }
    }
}
