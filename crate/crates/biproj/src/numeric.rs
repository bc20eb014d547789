//! Small dense complex-float kernels shared by the eigenvalue and
//! verification paths: matrix products, nullspaces, one-sided Jacobi
//! singular values, Gram-Schmidt, and the Aberth-Ehrlich root finder.

use num_complex::Complex64;

pub type CMat = Vec<Vec<Complex64>>;

pub fn czero(rows: usize, cols: usize) -> CMat {
    vec![vec![Complex64::new(0.0, 0.0); cols]; rows]
}

pub fn cidentity(n: usize) -> CMat {
    let mut m = czero(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn cmul(a: &CMat, b: &CMat) -> CMat {
    let (n, k) = (a.len(), b.len());
    let m = if k > 0 { b[0].len() } else { 0 };
    let mut out = czero(n, m);
    for i in 0..n {
        for t in 0..k {
            let v = a[i][t];
            if v.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += v * b[t][j];
            }
        }
    }
    out
}

pub fn cshift(a: &CMat, lambda: Complex64) -> CMat {
    let mut out = a.clone();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    out
}

pub fn cpow(a: &CMat, k: usize) -> CMat {
    let mut acc = cidentity(a.len());
    for _ in 0..k {
        acc = cmul(a, &acc);
    }
    acc
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Right null space basis of `a` by Gaussian elimination with partial
/// pivoting; entries below `rel_tol * max|a|` count as zero.
pub fn cnullspace(a: &CMat, rel_tol: f64) -> Vec<Vec<Complex64>> {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut m = a.clone();
    let scale = max_abs(a).max(1e-300);
    let thresh = rel_tol * scale;
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r = 0usize;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let (best, mag) = (r..rows)
            .map(|i| (i, m[i][c].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if mag <= thresh {
            continue;
        }
        m.swap(r, best);
        let inv = Complex64::new(1.0, 0.0) / m[r][c];
        for j in c..cols {
            m[r][j] *= inv;
        }
        for i in 0..rows {
            if i != r {
                let f = m[i][c];
                if f.norm() > 0.0 {
                    for j in c..cols {
                        let v = m[r][j];
                        m[i][j] -= f * v;
                    }
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); cols];
        v[free] = Complex64::new(1.0, 0.0);
        for &(pr, pc) in &pivots {
            v[pc] = -m[pr][free];
        }
        basis.push(v);
    }
    basis
}

/// Orthonormalize the given vectors (modified Gram-Schmidt), dropping any
/// that become numerically zero.
pub fn orthonormalize(vectors: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for q in &out {
            let proj: Complex64 = q.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= proj * qi;
            }
        }
        let norm = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            for wi in &mut w {
                *wi /= norm;
            }
            out.push(w);
        }
    }
    out
}

/// Singular values by one-sided Jacobi on the columns, descending. The input
/// is consumed column-wise; rows >= cols is not required.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    if cols == 0 {
        return Vec::new();
    }
    // work on columns
    let mut w: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..rows).map(|i| a[i][j]).collect())
        .collect();
    let eps = 1e-14;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let app: f64 = w[p].iter().map(|c| c.norm_sqr()).sum();
                let aqq: f64 = w[q].iter().map(|c| c.norm_sqr()).sum();
                let apq: Complex64 = w[p].iter().zip(&w[q]).map(|(x, y)| x.conj() * y).sum();
                let mag = apq.norm();
                if mag <= eps * (app * aqq).sqrt().max(1e-300) {
                    continue;
                }
                rotated = true;
                let phase = apq / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                for i in 0..rows {
                    let wp = w[p][i];
                    let wq = w[q][i];
                    w[p][i] = cs * wp - sn * phase.conj() * wq;
                    w[q][i] = sn * phase * wp + cs * wq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = w
        .iter()
        .map(|col| col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Smallest singular value of (rows x cols) `a`; 0 for an empty matrix.
pub fn sigma_min(a: &CMat) -> f64 {
    singular_values(a).last().copied().unwrap_or(0.0)
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// All complex roots of a polynomial given by ascending coefficients, via
/// Aberth-Ehrlich iteration. Intended for square-free inputs where the
/// convergence is quadratic.
pub fn aberth_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let coeffs: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let deriv: Vec<Complex64> = (1..=deg)
        .map(|k| monic[k] * Complex64::new(k as f64, 0.0))
        .collect();
    let radius = 1.0
        + monic[..deg]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    let center = -monic[deg - 1] / Complex64::new(deg as f64, 0.0);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4;
            center + Complex64::from_polar(radius * 0.8, theta)
        })
        .collect();
    for _iter in 0..300 {
        let mut max_step = 0.0f64;
        let snapshot = z.clone();
        for k in 0..deg {
            let zk = snapshot[k];
            let p = horner(&monic, zk);
            let dp = horner(&deriv, zk);
            let newton = if dp.norm() > 1e-300 {
                p / dp
            } else {
                Complex64::new(1e-8, 1e-8)
            };
            let mut sum = Complex64::new(0.0, 0.0);
            for (j, other) in snapshot.iter().enumerate() {
                if j != k {
                    let diff = zk - other;
                    if diff.norm() > 1e-300 {
                        sum += Complex64::new(1.0, 0.0) / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * sum;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            z[k] = zk - step;
            max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
        }
        if max_step < 1e-14 {
            break;
        }
    }
    z
}
