//! Complex roots with multiplicities of real polynomials.
//!
//! Aberth-Ehrlich simultaneous iteration, then clustering of the
//! conjugate-symmetrized root cloud. A root of multiplicity `m` scatters by
//! roughly `eps^{1/m}`, so clusters are formed by single linkage at
//! [`CLUSTER_TOL`]`(1 + |z|)`. Cluster centroids are refined by Newton on
//! `p^{(m-1)}`, where the root is simple.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::RealPoly;

/// Relative single-linkage radius for merging roots into one cluster.
pub const CLUSTER_TOL: f64 = 2e-3;

const MAX_ITER: usize = 2000;

/// Roots of `p` as `(z, multiplicity)`, conjugate-closed, multiplicities
/// summing to the degree. Real roots have `im == 0` exactly.
pub fn complex_roots(p: &RealPoly) -> Result<Vec<(Complex64, usize)>> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    let m0 = p.low_order();
    let core = p.shift_down(m0);
    let mut out = Vec::new();
    if m0 > 0 {
        out.push((Complex64::new(0.0, 0.0), m0));
    }
    if deg > m0 {
        out.extend(nonzero_roots(&core));
    }
    out.sort_by(|a, b| {
        a.0.norm()
            .total_cmp(&b.0.norm())
            .then(a.0.im.total_cmp(&b.0.im))
    });
    Ok(out)
}

fn eval_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn aberth(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    // Fujiwara-type bound on the root moduli.
    let bound = (1..=n)
        .map(|k| (c[n - k] / lead).abs().powf(1.0 / k as f64))
        .fold(0.0, f64::max)
        * 2.0;
    let lower = c[0].abs() / (c[0].abs() + c.iter().skip(1).map(|a| a.abs()).fold(0.0, f64::max));
    let radius = (bound * 0.5).max(lower).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..MAX_ITER {
        let mut worst = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if worst <= 4.0 * f64::EPSILON {
            break;
        }
    }
    z
}

fn nonzero_roots(p: &RealPoly) -> Vec<(Complex64, usize)> {
    let c = p.coeffs();
    let n = c.len() - 1;
    if n == 1 {
        return vec![(Complex64::new(-c[0] / c[1], 0.0), 1)];
    }
    let raw = aberth(c);
    // Conjugate-symmetrize, so every cluster has a mirror image.
    let mut cloud: Vec<Complex64> = raw.clone();
    cloud.extend(raw.iter().map(|z| z.conj()));
    let labels = single_linkage(&cloud);
    let nclusters = labels.iter().copied().max().map_or(0, |m| m + 1);
    let half = raw.len();
    let mut out = Vec::new();
    for k in 0..nclusters {
        let idx: Vec<usize> = (0..cloud.len()).filter(|&i| labels[i] == k).collect();
        let centroid = idx.iter().map(|&i| cloud[i]).sum::<Complex64>() / idx.len() as f64;
        // A cluster holding a point together with its mirror sits on the real axis.
        let real = idx
            .iter()
            .any(|&i| labels[if i < half { i + half } else { i - half }] == k);
        if !real && centroid.im < 0.0 {
            continue;
        }
        let count = idx.len();
        let (mult, z) = if real {
            (count / 2, Complex64::new(centroid.re, 0.0))
        } else {
            (count.div_ceil(2), centroid)
        };
        let refined = refine(p, z, mult, real);
        out.push((refined, mult));
        if !real {
            out.push((refined.conj(), mult));
        }
    }
    out
}

fn single_linkage(pts: &[Complex64]) -> Vec<usize> {
    let n = pts.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut j = i;
        while parent[j] != r {
            let next = parent[j];
            parent[j] = r;
            j = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let tol = CLUSTER_TOL * (1.0 + pts[i].norm().max(pts[j].norm()));
            if (pts[i] - pts[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let mut ids: Vec<usize> = roots.clone();
    ids.sort_unstable();
    ids.dedup();
    for r in roots.iter_mut() {
        *r = ids.binary_search(r).expect("root id");
    }
    roots
}

/// Newton on `p^{(m-1)}` from the cluster centroid; rejected if it wanders
/// out of the cluster.
fn refine(p: &RealPoly, z0: Complex64, m: usize, real: bool) -> Complex64 {
    let mut d = p.clone();
    for _ in 1..m {
        d = d.derivative();
    }
    let c = d.coeffs();
    if c.len() < 2 {
        return z0;
    }
    let mut z = z0;
    for _ in 0..50 {
        let (v, dv) = eval_with_derivative(c, z);
        if dv.norm() == 0.0 {
            break;
        }
        let step = v / dv;
        z -= step;
        if real {
            z.im = 0.0;
        }
        if step.norm() <= 2.0 * f64::EPSILON * (1.0 + z.norm()) {
            break;
        }
    }
    if z.is_finite() && (z - z0).norm() <= CLUSTER_TOL * (1.0 + z0.norm()) {
        z
    } else {
        z0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(r: &[(Complex64, usize)]) -> usize {
        r.iter().map(|x| x.1).sum()
    }

    #[test]
    fn quadratic() {
        let r = complex_roots(&RealPoly::new(vec![0.74, -1.0, 1.0])).unwrap();
        assert_eq!(r.len(), 2);
        for (z, m) in &r {
            assert_eq!(*m, 1);
            assert!((z.re - 0.5).abs() < 1e-14 && (z.im.abs() - 0.7).abs() < 1e-14);
        }
        assert_eq!(r[0].0.conj(), r[1].0);
    }

    #[test]
    fn double_spherical_root() {
        let p = RealPoly::new(vec![1.0, 0.0, 1.0]).pow(2);
        let r = complex_roots(&p).unwrap();
        assert_eq!(r.len(), 2);
        for (z, m) in &r {
            assert_eq!(*m, 2);
            assert!((z.norm() - 1.0).abs() < 1e-10 && z.re.abs() < 1e-10);
        }
    }

    #[test]
    fn origin_cube() {
        let r = complex_roots(&RealPoly::new(vec![0.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(r, vec![(Complex64::new(0.0, 0.0), 3)]);
    }

    #[test]
    fn quadruple_real_root() {
        let p = RealPoly::new(vec![-0.7, 1.0]).pow(4);
        let r = complex_roots(&p).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].1, 4);
        assert_eq!(r[0].0.im, 0.0);
        assert!((r[0].0.re - 0.7).abs() < 1e-8);
    }

    #[test]
    fn mixed_product() {
        // (q^2 - q + 0.74)^2 (q + 0.4)^2 (q^2 + 0.3q + 0.5)
        let p = RealPoly::new(vec![0.74, -1.0, 1.0])
            .pow(2)
            .mul(&RealPoly::new(vec![0.4, 1.0]).pow(2))
            .mul(&RealPoly::new(vec![0.5, 0.3, 1.0]));
        let r = complex_roots(&p).unwrap();
        assert_eq!(total(&r), 8);
        for (z, _) in &r {
            assert!(p.eval_complex(*z).norm() < 1e-9);
        }
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(complex_roots(&RealPoly::new(vec![])), Err(Error::ZeroPolynomial));
    }
}
