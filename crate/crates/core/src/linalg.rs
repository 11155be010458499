//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Relative threshold below which singular values count as zero in rank decisions.
pub const RANK_RTOL: f64 = 1e-9;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

/// Builds a complex matrix from real rows.
pub fn real_matrix(rows: &[&[f64]]) -> CMat {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    CMat::from_fn(r, c, |i, j| re(rows[i][j]))
}

/// |r><c| in dimension n.
pub fn unit(n: usize, r: usize, c: usize) -> CMat {
    let mut m = zeros(n, n);
    m[(r, c)] = ONE;
    m
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_all(ms: &[CMat]) -> CMat {
    ms.iter().fold(eye(1), |acc, m| kron(&acc, m))
}

pub fn direct_sum(a: &CMat, b: &CMat) -> CMat {
    let mut m = zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut(a.shape(), b.shape()).copy_from(b);
    m
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Entrywise max distance; infinite on shape mismatch.
pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn frob(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius inner product <a, b> = Tr(a^dag b).
pub fn inner(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn trace(m: &CMat) -> C64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    m.is_square() && max_diff(m, &m.adjoint()) <= tol
}

/// Collapses a tall matrix to an equivalent square-ish one with the same right singular structure.
fn compress_rows(m: &CMat) -> CMat {
    if m.nrows() > 2 * m.ncols() {
        m.clone().qr().r()
    } else {
        m.clone()
    }
}

/// Thin SVD with u: r×k, v_t: k×c, k = min(r, c).
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v_t: CMat,
}

fn raw_svd(m: &CMat) -> Svd {
    let svd = m.clone().svd(true, true);
    Svd {
        u: svd.u.expect("u requested"),
        s: svd.singular_values.iter().copied().collect(),
        v_t: svd.v_t.expect("v_t requested"),
    }
}

fn recompose_error(m: &CMat, d: &Svd) -> f64 {
    let k = d.s.len();
    let us = CMat::from_fn(m.nrows(), k, |i, j| d.u[(i, j)] * d.s[j]);
    max_diff(&(us * &d.v_t), m)
}

/// SVD checked by recomposition. The bidiagonal sweep occasionally returns a wrong factorization for
/// structured complex input; fixed unitary rotations of both sides are tried until one recomposes.
pub fn svd(m: &CMat) -> Svd {
    let tol = 1e-11 * max_abs(m).max(f64::MIN_POSITIVE) * (1.0 + (m.nrows().max(m.ncols()) as f64).sqrt());
    let first = raw_svd(m);
    let mut best_err = recompose_error(m, &first);
    let mut best = first;
    let mut salt = 0;
    while best_err > tol && salt < 4 {
        let q = fixed_unitary(m.nrows(), salt);
        let p = fixed_unitary(m.ncols(), salt);
        let r = raw_svd(&(q.adjoint() * m * &p));
        let cand = Svd { u: &q * r.u, s: r.s, v_t: r.v_t * p.adjoint() };
        let err = recompose_error(m, &cand);
        if err < best_err {
            best_err = err;
            best = cand;
        }
        salt += 1;
    }
    best
}

/// Singular values and the full right-singular basis as columns.
fn right_svd(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.ncols();
    let mut a = compress_rows(m);
    if a.nrows() < n {
        let mut p = zeros(n, n);
        p.view_mut((0, 0), a.shape()).copy_from(&a);
        a = p;
    }
    let d = svd(&a);
    (d.s, d.v_t.adjoint())
}

fn cutoff(s: &[f64], rtol: f64) -> f64 {
    let smax = s.iter().copied().fold(0.0, f64::max);
    rtol * smax.max(f64::MIN_POSITIVE)
}

/// Orthonormal basis (columns) of the kernel of `m`.
pub fn null_space(m: &CMat, rtol: f64) -> CMat {
    let n = m.ncols();
    if m.nrows() == 0 || max_abs(m) == 0.0 {
        return eye(n);
    }
    let (s, v) = right_svd(m);
    let cut = cutoff(&s, rtol);
    let cols: Vec<usize> = (0..n).filter(|&i| s.get(i).is_none_or(|&x| x <= cut)).collect();
    select_columns(&v, &cols)
}

/// Kernel with the cutoff measured against `scale` when the matrix itself is only rounding noise.
pub fn null_space_scaled(m: &CMat, rtol: f64, scale: f64) -> CMat {
    let n = m.ncols();
    if m.nrows() == 0 || max_abs(m) <= rtol * scale {
        return eye(n);
    }
    let (s, v) = right_svd(m);
    let cut = cutoff(&s, rtol).max(rtol * scale);
    let cols: Vec<usize> = (0..n).filter(|&i| s.get(i).is_none_or(|&x| x <= cut)).collect();
    select_columns(&v, &cols)
}

/// The `k` right-singular vectors with the smallest singular values, plus the largest of those values.
pub fn smallest_right_vectors(m: &CMat, k: usize) -> (CMat, f64) {
    let n = m.ncols();
    let (s, v) = right_svd(m);
    let cols: Vec<usize> = (n - k..n).collect();
    let worst = cols.iter().map(|&i| s.get(i).copied().unwrap_or(0.0)).fold(0.0, f64::max);
    (select_columns(&v, &cols), worst)
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return vec![];
    }
    svd(m).s
}

pub fn rank(m: &CMat, rtol: f64) -> usize {
    if m.is_empty() || max_abs(m) == 0.0 {
        return 0;
    }
    let s = singular_values(m);
    let cut = cutoff(&s, rtol);
    s.iter().filter(|&&x| x > cut).count()
}

/// Orthonormal basis (columns) of the column span of `m`.
pub fn column_space(m: &CMat, rtol: f64) -> CMat {
    column_space_scaled(m, rtol, 0.0)
}

/// Column space ignoring directions below `rtol * scale`.
pub fn column_space_scaled(m: &CMat, rtol: f64, scale: f64) -> CMat {
    if m.ncols() == 0 || max_abs(m) <= rtol * scale {
        return zeros(m.nrows(), 0);
    }
    let Svd { u, s, .. } = svd(m);
    let cut = cutoff(&s, rtol).max(rtol * scale);
    let cols: Vec<usize> = (0..s.len()).filter(|&i| s[i] > cut).collect();
    select_columns(&u, &cols)
}

/// Orthonormal basis of the orthogonal complement of the span of `basis` in C^n.
pub fn complement(basis: &CMat, n: usize) -> CMat {
    if basis.ncols() == 0 {
        return eye(n);
    }
    null_space(&basis.adjoint(), RANK_RTOL)
}

pub fn select_columns(m: &CMat, cols: &[usize]) -> CMat {
    CMat::from_fn(m.nrows(), cols.len(), |i, j| m[(i, cols[j])])
}

pub fn select_rows(m: &CMat, rows: &[usize]) -> CMat {
    CMat::from_fn(rows.len(), m.ncols(), |i, j| m[(rows[i], j)])
}

pub fn hstack(ms: &[CMat]) -> CMat {
    let r = ms.first().map_or(0, |m| m.nrows());
    let c: usize = ms.iter().map(|m| m.ncols()).sum();
    let mut out = zeros(r, c);
    let mut off = 0;
    for m in ms {
        out.view_mut((0, off), m.shape()).copy_from(m);
        off += m.ncols();
    }
    out
}

pub fn vstack(ms: &[CMat]) -> CMat {
    let c = ms.first().map_or(0, |m| m.ncols());
    let r: usize = ms.iter().map(|m| m.nrows()).sum();
    let mut out = zeros(r, c);
    let mut off = 0;
    for m in ms {
        out.view_mut((off, 0), m.shape()).copy_from(m);
        off += m.nrows();
    }
    out
}

pub fn inverse(m: &CMat) -> Result<CMat> {
    if !m.is_square() {
        return Err(Error::Shape(format!("cannot invert {}x{}", m.nrows(), m.ncols())));
    }
    let s = singular_values(m);
    let smax = s.iter().copied().fold(0.0, f64::max);
    let smin = s.iter().copied().fold(f64::INFINITY, f64::min);
    if m.nrows() > 0 && (smax == 0.0 || smin / smax < 1e-13) {
        return Err(Error::Singular(format!("condition number {:e}", smax / smin)));
    }
    m.clone().try_inverse().ok_or_else(|| Error::Singular("LU failed".into()))
}

pub fn condition_number(m: &CMat) -> f64 {
    let s = singular_values(m);
    let smax = s.iter().copied().fold(0.0, f64::max);
    let smin = s.iter().copied().fold(f64::INFINITY, f64::min);
    smax / smin
}

/// Least-squares solution of `a x = b` and the residual max-norm.
pub fn lstsq(a: &CMat, b: &CMat) -> (CMat, f64) {
    let x = pinv(a, 1e-12) * b;
    let r = max_diff(&(a * &x), b);
    (x, r)
}

pub fn pinv(m: &CMat, rtol: f64) -> CMat {
    if m.is_empty() {
        return zeros(m.ncols(), m.nrows());
    }
    let Svd { u, s, v_t } = svd(m);
    let cut = cutoff(&s, rtol);
    let inv: Vec<C64> = s.iter().map(|&x| if x > cut { re(1.0 / x) } else { ZERO }).collect();
    let vs = CMat::from_fn(v_t.ncols(), s.len(), |i, j| v_t[(j, i)].conj() * inv[j]);
    vs * u.adjoint()
}

/// All eigenvalues of a square matrix via the complex Schur form.
pub fn eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(vec![]);
    }
    // the QR sweep occasionally stalls on exactly structured input; a loose tolerance or a fixed
    // unitary similarity breaks the symmetry without changing the spectrum
    let scale = max_abs(m).max(f64::MIN_POSITIVE);
    let attempts = [(m.clone(), f64::EPSILON), (m.clone(), 1e-14 * scale), {
        let q = fixed_unitary(n, 0);
        (&q * m * q.adjoint(), 1e-14 * scale)
    }];
    let t = attempts
        .into_iter()
        .find_map(|(a, eps)| nalgebra::linalg::Schur::try_new(a, eps, 100_000))
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?
        .unpack()
        .1;
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)].norm() > 1e-14 * (t[(i, i)].norm() + t[(i + 1, i + 1)].norm() + 1e-300) {
            let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let half_tr = (a + d) / 2.0;
            let disc = ((a - d) * (a - d) / 4.0 + b * c).sqrt();
            out.push(half_tr + disc);
            out.push(half_tr - disc);
            i += 2;
        } else {
            out.push(t[(i, i)]);
            i += 1;
        }
    }
    Ok(out)
}

fn fixed_unitary(n: usize, salt: usize) -> CMat {
    let g = CMat::from_fn(n, n, |i, j| {
        C64::new(((i * 7 + j * 13 + salt * 5) % 11) as f64 - 5.0, ((i * 3 + j * 5 + salt) % 7) as f64 - 3.0)
    });
    g.qr().q()
}

pub fn spectral_radius(m: &CMat) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().fold(0.0, |acc, z| acc.max(z.norm())))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    let h = (m + m.adjoint()) * re(0.5);
    let tol = 1e-11 * max_abs(&h).max(f64::MIN_POSITIVE) * (1.0 + (n as f64).sqrt());
    let error = |vals: &[f64], v: &CMat| {
        let vd = CMat::from_fn(n, n, |i, j| v[(i, j)] * vals[j]);
        max_diff(&(&h * v), &vd)
    };
    let eig = h.clone().symmetric_eigen();
    let mut best = (eig.eigenvalues.iter().copied().collect::<Vec<f64>>(), eig.eigenvectors);
    let mut best_err = error(&best.0, &best.1);
    let mut salt = 0;
    while best_err > tol && salt < 4 {
        let q = fixed_unitary(n, salt);
        let e = (q.adjoint() * &h * &q).symmetric_eigen();
        let cand = (e.eigenvalues.iter().copied().collect::<Vec<f64>>(), &q * e.eigenvectors);
        let err = error(&cand.0, &cand.1);
        if err < best_err {
            best_err = err;
            best = cand;
        }
        salt += 1;
    }
    let (evals, evecs) = best;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| evals[a].total_cmp(&evals[b]));
    let vals = idx.iter().map(|&i| evals[i]).collect();
    (vals, select_columns(&evecs, &idx))
}

/// Hermitian function application V f(D) V^dag.
pub fn hermitian_fn(m: &CMat, f: impl Fn(f64) -> C64) -> CMat {
    let (vals, v) = hermitian_eigen(m);
    let d = CMat::from_diagonal(&CVec::from_iterator(vals.len(), vals.iter().map(|&x| f(x))));
    &v * d * v.adjoint()
}

/// exp(i t H) for Hermitian H.
pub fn expi_hermitian(h: &CMat, t: f64) -> CMat {
    hermitian_fn(h, |x| (I * t * x).exp())
}

/// Basis of {X : X p_k = q_k X for all k}; X has shape q.dim x p.dim.
pub fn intertwiners(p: &[CMat], q: &[CMat], rtol: f64) -> Result<Vec<CMat>> {
    if p.len() != q.len() {
        return Err(Error::Shape("intertwiner families differ in length".into()));
    }
    let m = q.first().map_or(0, |x| x.nrows());
    let n = p.first().map_or(0, |x| x.nrows());
    let unknowns = m * n;
    if unknowns == 0 {
        return Ok(vec![]);
    }
    let mut rows: Vec<CMat> = Vec::with_capacity(p.len());
    for (pk, qk) in p.iter().zip(q) {
        // row-major vec: vec(X P) = (1 (x) P^T) vec X, vec(Q X) = (Q (x) 1) vec X
        rows.push(kron(&eye(m), &pk.transpose()) - kron(qk, &eye(n)));
    }
    let sys = vstack(&rows);
    let scale = p.iter().chain(q).map(max_abs).fold(1.0, f64::max);
    let ns = null_space_scaled(&sys, rtol, scale);
    Ok((0..ns.ncols())
        .map(|c| CMat::from_fn(m, n, |i, j| ns[(i * n + j, c)]))
        .collect())
}

/// Groups values that lie within `tol` of each other (single linkage), returning cluster means and sizes.
pub fn cluster(values: &[C64], tol: f64) -> Vec<(C64, usize)> {
    let mut sorted: Vec<C64> = values.to_vec();
    sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut groups: Vec<Vec<C64>> = Vec::new();
    'outer: for v in sorted {
        for g in groups.iter_mut() {
            if g.iter().any(|w| (w - v).norm() <= tol) {
                g.push(v);
                continue 'outer;
            }
        }
        groups.push(vec![v]);
    }
    groups
        .into_iter()
        .map(|g| {
            let n = g.len();
            (g.iter().sum::<C64>() / n as f64, n)
        })
        .collect()
}

pub fn random_c64<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random linear combination of `basis` with coefficients in the unit square.
pub fn random_combination<R: Rng>(basis: &[CMat], rng: &mut R) -> CMat {
    let (r, c) = basis[0].shape();
    basis.iter().fold(zeros(r, c), |acc, b| acc + b * random_c64(rng))
}

/// Scales `m` to unit Frobenius norm and rotates the largest-magnitude entry to the positive real axis.
pub fn gauge_fix(m: &CMat) -> CMat {
    let n = frob(m);
    if n == 0.0 {
        return m.clone();
    }
    let mut best = ZERO;
    for z in m.iter() {
        if z.norm() > best.norm() * (1.0 + 1e-9) {
            best = *z;
        }
    }
    let phase = best.conj() / best.norm();
    m * (phase / n)
}

/// Rounds entries with magnitude below `eps` to exact zero, keeping output stable for reports.
pub fn chop(m: &CMat, eps: f64) -> CMat {
    m.map(|z| {
        let r = if z.re.abs() < eps { 0.0 } else { z.re };
        let i = if z.im.abs() < eps { 0.0 } else { z.im };
        C64::new(r, i)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        let m = real_matrix(&[&[1.0, 1.0, 0.0]]);
        let ns = null_space(&m, RANK_RTOL);
        assert_eq!(ns.ncols(), 2);
        assert!(max_abs(&(&m * &ns)) < 1e-14);
    }

    #[test]
    fn eigenvalues_of_rotation() {
        let m = real_matrix(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let mut ev = eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((ev[0] - C64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((ev[1] - C64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn eigenvalues_of_jordan_block() {
        let m = real_matrix(&[&[2.0, 1.0, 0.0], &[0.0, 2.0, 1.0], &[0.0, 0.0, 2.0]]);
        for z in eigenvalues(&m).unwrap() {
            assert!((z - re(2.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn intertwiners_of_commuting_family() {
        let z = real_matrix(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let basis = intertwiners(&[z.clone()], &[z], RANK_RTOL).unwrap();
        // commutant of diag(1,-1) is the diagonal matrices
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn cluster_merges_close_values() {
        let c = cluster(&[re(1.0), re(1.0 + 1e-9), re(3.0)], 1e-6);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, 2);
    }

    #[test]
    fn gauge_fix_is_idempotent() {
        let m = real_matrix(&[&[0.0, -3.0], &[1.0, 0.0]]) * C64::new(0.3, 0.8);
        let g = gauge_fix(&m);
        assert!((frob(&g) - 1.0).abs() < 1e-14);
        assert!(max_diff(&gauge_fix(&g), &g) < 1e-14);
        assert!(g[(0, 1)].im.abs() < 1e-14 && g[(0, 1)].re > 0.0);
    }
}
