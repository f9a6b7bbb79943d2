//! Dense symmetric linear algebra used by the solvers.
//!
//! The eigensolver is the classic two-stage dense routine: Householder
//! reduction to tridiagonal form followed by the implicitly shifted QL
//! iteration with accumulated transformations. It is O(n^3), deterministic,
//! and accurate to machine precision on the desk-scale matrices this crate
//! works with (n up to a few hundred).

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

/// Maximum |a_ij - a_ji| over all pairs.
pub fn symmetry_gap(a: &Array2<f64>) -> f64 {
    let n = a.nrows();
    let mut gap = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            gap = gap.max((a[[i, j]] - a[[j, i]]).abs());
        }
    }
    gap
}

/// Largest entry magnitude.
pub fn max_abs(a: &Array2<f64>) -> f64 {
    a.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

/// (A + A^T)/2 with both triangles written from the same computed value.
pub fn symmetrize(a: &Array2<f64>) -> Array2<f64> {
    let n = a.nrows();
    let mut out = Array2::zeros((n, n));
    for i in 0..n {
        out[[i, i]] = a[[i, i]];
        for j in (i + 1)..n {
            let v = 0.5 * (a[[i, j]] + a[[j, i]]);
            out[[i, j]] = v;
            out[[j, i]] = v;
        }
    }
    out
}

/// Eigendecomposition of a symmetric matrix.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as
/// columns of an orthogonal matrix.
pub fn sym_eigen(a: &Array2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch {
            what: "sym_eigen input",
            expected: n,
            got: a.ncols(),
        });
    }
    if n == 0 {
        return Ok((Array1::zeros(0), Array2::zeros((0, 0))));
    }

    let mut v = a.clone();
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];

    tred2(&mut v, &mut d, &mut e);
    tql2(&mut v, &mut d, &mut e)?;

    // ascending sort, stable for repeated eigenvalues
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));

    let values = Array1::from_iter(order.iter().map(|&i| d[i]));
    let mut vectors = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[[r, dst]] = v[[r, src]];
        }
    }
    Ok((values, vectors))
}

/// Householder reduction of `v` to tridiagonal form, accumulating the
/// orthogonal factor in `v`. Diagonal lands in `d`, sub-diagonal in `e`.
fn tred2(v: &mut Array2<f64>, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[[n - 1, j]];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0f64;
        let mut h = 0.0f64;
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[[i - 1, j]];
                v[[i, j]] = 0.0;
                v[[j, i]] = 0.0;
            }
        } else {
            for item in d.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = 0.0;
            }

            for j in 0..i {
                let f = d[j];
                v[[j, i]] = f;
                let mut g = e[j] + v[[j, j]] * f;
                for k in (j + 1)..i {
                    g += v[[k, j]] * d[k];
                    e[k] += v[[k, j]] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0f64;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[[k, j]] -= f * e[k] + g * d[k];
                }
                d[j] = v[[i - 1, j]];
                v[[i, j]] = 0.0;
            }
        }
        d[i] = h;
    }

    // accumulate transformations
    for i in 0..n.saturating_sub(1) {
        v[[n - 1, i]] = v[[i, i]];
        v[[i, i]] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for (k, item) in d.iter_mut().enumerate().take(i + 1) {
                *item = v[[k, i + 1]] / h;
            }
            for j in 0..=i {
                let mut g = 0.0f64;
                for k in 0..=i {
                    g += v[[k, i + 1]] * v[[k, j]];
                }
                for k in 0..=i {
                    v[[k, j]] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[[k, i + 1]] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[[n - 1, j]];
        v[[n - 1, j]] = 0.0;
    }
    v[[n - 1, n - 1]] = 1.0;
    e[0] = 0.0;
}

/// Implicitly shifted QL iteration on the tridiagonal (d, e), accumulating
/// eigenvectors into `v`.
fn tql2(v: &mut Array2<f64>, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 64 {
                    return Err(Error::EigenFailed);
                }

                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0f64;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0f64;
                let mut s2 = 0.0f64;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    for k in 0..n {
                        let h = v[[k, i + 1]];
                        v[[k, i + 1]] = s * v[[k, i]] + c * h;
                        v[[k, i]] = c * v[[k, i]] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Modified Gram-Schmidt, two passes, in deterministic column order.
///
/// Errors if a column collapses (rank deficiency).
pub fn orthonormalize_columns(f: &mut Array2<f64>) -> Result<()> {
    let (n, k) = f.dim();
    for _pass in 0..2 {
        for j in 0..k {
            for i in 0..j {
                let mut dot = 0.0f64;
                for r in 0..n {
                    dot += f[[r, i]] * f[[r, j]];
                }
                for r in 0..n {
                    let fi = f[[r, i]];
                    f[[r, j]] -= dot * fi;
                }
            }
            let norm = (0..n).map(|r| f[[r, j]] * f[[r, j]]).sum::<f64>().sqrt();
            if norm <= 1e-300 {
                return Err(Error::RankDeficient);
            }
            for r in 0..n {
                f[[r, j]] /= norm;
            }
        }
    }
    Ok(())
}

/// Max deviation of F^T F from the identity.
pub fn orthonormality_gap(f: &Array2<f64>) -> f64 {
    let g = f.t().dot(f);
    let k = g.nrows();
    let mut gap = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let target = if i == j { 1.0 } else { 0.0 };
            gap = gap.max((g[[i, j]] - target).abs());
        }
    }
    gap
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
        let mut a = Array2::zeros((n, n));
        for i in 0..n {
            a[[i, i]] = rng.gen_range(-2.0..2.0);
            for j in (i + 1)..n {
                let x = rng.gen_range(-2.0..2.0);
                a[[i, j]] = x;
                a[[j, i]] = x;
            }
        }
        a
    }

    #[test]
    fn eigen_2x2_known() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3
        let a = array![[2.0, 1.0], [1.0, 2.0]];
        let (vals, vecs) = sym_eigen(&a).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
        // eigenvector check A v = lambda v
        for k in 0..2 {
            for i in 0..2 {
                let av: f64 = (0..2).map(|j| a[[i, j]] * vecs[[j, k]]).sum();
                assert!((av - vals[k] * vecs[[i, k]]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigen_reconstructs_and_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 3, 5, 9, 16, 30] {
            let a = random_symmetric(n, &mut rng);
            let (vals, vecs) = sym_eigen(&a).unwrap();
            assert!(orthonormality_gap(&vecs) < 1e-12, "n={n}");
            // V diag(vals) V^T == A
            let scale = max_abs(&a).max(1.0);
            for i in 0..n {
                for j in 0..n {
                    let r: f64 = (0..n).map(|k| vecs[[i, k]] * vals[k] * vecs[[j, k]]).sum();
                    assert!(
                        (r - a[[i, j]]).abs() < 1e-10 * scale,
                        "n={n} entry ({i},{j}): {r} vs {}",
                        a[[i, j]]
                    );
                }
            }
            // ascending
            for k in 1..n {
                assert!(vals[k] >= vals[k - 1]);
            }
        }
    }

    #[test]
    fn eigen_matches_nalgebra_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(2..20);
            let a = random_symmetric(n, &mut rng);
            let (vals, _) = sym_eigen(&a).unwrap();

            let m = nalgebra::DMatrix::from_fn(n, n, |i, j| a[[i, j]]);
            let mut reference: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
            reference.sort_by(f64::total_cmp);

            for k in 0..n {
                assert!(
                    (vals[k] - reference[k]).abs() < 1e-9 * max_abs(&a).max(1.0),
                    "n={n} k={k}: {} vs {}",
                    vals[k],
                    reference[k]
                );
            }
        }
    }

    #[test]
    fn gram_schmidt_produces_orthonormal_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut f = Array2::from_shape_fn((12, 5), |_| rng.gen_range(-1.0..1.0));
        orthonormalize_columns(&mut f).unwrap();
        assert!(orthonormality_gap(&f) < 1e-13);
    }

    #[test]
    fn gram_schmidt_rejects_dependent_columns() {
        let mut f = Array2::zeros((4, 2));
        for r in 0..4 {
            f[[r, 0]] = 1.0;
            f[[r, 1]] = 2.0;
        }
        assert!(matches!(
            orthonormalize_columns(&mut f),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn symmetrize_is_exactly_symmetric() {
        let a = array![[1.0, 2.0, 3.0], [2.5, 0.0, -1.0], [3.5, -1.25, 4.0]];
        let s = symmetrize(&a);
        assert_eq!(symmetry_gap(&s), 0.0);
        assert!((s[[0, 1]] - 2.25).abs() < 1e-15);
    }
}
