//! Complex tensors, MPO tensors and their contractions into dense operators.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, C64, ONE, ZERO};

/// Upper bound on physical Hilbert-space dimension of any dense contraction result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cap(pub usize);

impl Default for Cap {
    fn default() -> Self {
        Cap(1 << 12)
    }
}

impl Cap {
    fn check(self, what: &'static str, base: usize, exp: usize) -> Result<usize> {
        let needed = base.checked_pow(exp as u32).unwrap_or(usize::MAX);
        if needed > self.0 {
            return Err(Error::Size { what, needed, cap: self.0 });
        }
        Ok(needed)
    }
}

/// Dense row-major complex multiway array.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexTensor {
    shape: Vec<usize>,
    data: Vec<C64>,
}

/// Sparse triplet storage of a complex multiway array.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseTensor {
    shape: Vec<usize>,
    entries: Vec<(Vec<usize>, C64)>,
}

fn check_shape(shape: &[usize]) -> Result<usize> {
    if shape.contains(&0) {
        return Err(Error::Shape(format!("extents must be positive, got {shape:?}")));
    }
    shape
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .ok_or_else(|| Error::Shape("tensor size overflows".into()))
}

fn flat_index(shape: &[usize], idx: &[usize]) -> Option<usize> {
    if idx.len() != shape.len() {
        return None;
    }
    let mut flat = 0;
    for (&i, &s) in idx.iter().zip(shape) {
        if i >= s {
            return None;
        }
        flat = flat * s + i;
    }
    Some(flat)
}

impl ComplexTensor {
    pub fn new(shape: Vec<usize>, data: Vec<C64>) -> Result<Self> {
        let n = check_shape(&shape)?;
        if n != data.len() {
            return Err(Error::Shape(format!("shape {shape:?} needs {n} entries, got {}", data.len())));
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: Vec<usize>) -> Result<Self> {
        let n = check_shape(&shape)?;
        Ok(Self { shape, data: vec![ZERO; n] })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, idx: &[usize]) -> Option<C64> {
        flat_index(&self.shape, idx).map(|f| self.data[f])
    }

    pub fn set(&mut self, idx: &[usize], v: C64) -> Result<()> {
        let f = flat_index(&self.shape, idx).ok_or_else(|| Error::Shape(format!("index {idx:?} out of bounds")))?;
        self.data[f] = v;
        Ok(())
    }

    pub fn sparsify(&self) -> SparseTensor {
        let mut entries = Vec::new();
        for (f, &v) in self.data.iter().enumerate() {
            if v != ZERO {
                let mut idx = vec![0; self.shape.len()];
                let mut rem = f;
                for k in (0..self.shape.len()).rev() {
                    idx[k] = rem % self.shape[k];
                    rem /= self.shape[k];
                }
                entries.push((idx, v));
            }
        }
        SparseTensor { shape: self.shape.clone(), entries }
    }
}

impl SparseTensor {
    pub fn new(shape: Vec<usize>, entries: Vec<(Vec<usize>, C64)>) -> Result<Self> {
        check_shape(&shape)?;
        for (idx, _) in &entries {
            if flat_index(&shape, idx).is_none() {
                return Err(Error::Shape(format!("sparse index {idx:?} out of bounds for {shape:?}")));
            }
        }
        Ok(Self { shape, entries })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn entries(&self) -> &[(Vec<usize>, C64)] {
        &self.entries
    }

    /// Repeated indices accumulate.
    pub fn densify(&self) -> ComplexTensor {
        let mut t = ComplexTensor::zeros(self.shape.clone()).expect("validated shape");
        for (idx, v) in &self.entries {
            let f = flat_index(&self.shape, idx).expect("validated index");
            t.data[f] += v;
        }
        t
    }
}

/// Rank-4 MPO tensor A^{ij}_{αβ} stored as its d_out*d_in bond slices.
#[derive(Clone, Debug, PartialEq)]
pub struct MpoTensor {
    d_out: usize,
    d_in: usize,
    bond: usize,
    slices: Vec<CMat>,
}

impl MpoTensor {
    pub fn zeros(d_out: usize, d_in: usize, bond: usize) -> Result<Self> {
        if d_out == 0 || d_in == 0 || bond == 0 {
            return Err(Error::Shape("MPO dimensions must be positive".into()));
        }
        Ok(Self { d_out, d_in, bond, slices: vec![linalg::zeros(bond, bond); d_out * d_in] })
    }

    /// Slices in row-major (i, j) order.
    pub fn from_slices(d_out: usize, d_in: usize, slices: Vec<CMat>) -> Result<Self> {
        if d_out == 0 || d_in == 0 || slices.len() != d_out * d_in {
            return Err(Error::Shape(format!("need {} slices, got {}", d_out * d_in, slices.len())));
        }
        let bond = slices[0].nrows();
        if bond == 0 || slices.iter().any(|s| s.shape() != (bond, bond)) {
            return Err(Error::Shape("slices must be square with a common bond dimension".into()));
        }
        Ok(Self { d_out, d_in, bond, slices })
    }

    /// Builds from the physical matrices V_{αβ} = [A^{ij}_{αβ}]_{ij}, indexed α*D+β.
    pub fn from_vertical_slices(bond: usize, vs: &[CMat]) -> Result<Self> {
        if vs.len() != bond * bond || vs.is_empty() {
            return Err(Error::Shape(format!("need {} vertical slices", bond * bond)));
        }
        let (d_out, d_in) = vs[0].shape();
        let mut t = Self::zeros(d_out, d_in, bond)?;
        for (k, v) in vs.iter().enumerate() {
            if v.shape() != (d_out, d_in) {
                return Err(Error::Shape("vertical slices differ in shape".into()));
            }
            for i in 0..d_out {
                for j in 0..d_in {
                    t.slices[i * d_in + j][(k / bond, k % bond)] = v[(i, j)];
                }
            }
        }
        Ok(t)
    }

    /// The identity MPO: D = 1 and A^{ij} = δ_ij.
    pub fn identity(d: usize) -> Self {
        let slices = (0..d * d).map(|k| if k / d == k % d { linalg::eye(1) } else { linalg::zeros(1, 1) }).collect();
        Self { d_out: d, d_in: d, bond: 1, slices }
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn bond(&self) -> usize {
        self.bond
    }

    pub fn slice(&self, i: usize, j: usize) -> &CMat {
        &self.slices[i * self.d_in + j]
    }

    pub fn slice_mut(&mut self, i: usize, j: usize) -> &mut CMat {
        &mut self.slices[i * self.d_in + j]
    }

    pub fn slices(&self) -> &[CMat] {
        &self.slices
    }

    pub fn entry(&self, i: usize, j: usize, a: usize, b: usize) -> C64 {
        self.slices[i * self.d_in + j][(a, b)]
    }

    pub fn set(&mut self, i: usize, j: usize, a: usize, b: usize, v: C64) -> Result<()> {
        if i >= self.d_out || j >= self.d_in || a >= self.bond || b >= self.bond {
            return Err(Error::Shape(format!("index ({i},{j},{a},{b}) out of bounds")));
        }
        self.slices[i * self.d_in + j][(a, b)] = v;
        Ok(())
    }

    /// Physical matrices V_{αβ}, indexed α*D+β.
    pub fn vertical_slices(&self) -> Vec<CMat> {
        (0..self.bond * self.bond)
            .map(|k| CMat::from_fn(self.d_out, self.d_in, |i, j| self.entry(i, j, k / self.bond, k % self.bond)))
            .collect()
    }

    pub fn to_tensor(&self) -> ComplexTensor {
        let shape = vec![self.d_out, self.d_in, self.bond, self.bond];
        let mut data = Vec::with_capacity(self.d_out * self.d_in * self.bond * self.bond);
        for s in &self.slices {
            for a in 0..self.bond {
                for b in 0..self.bond {
                    data.push(s[(a, b)]);
                }
            }
        }
        ComplexTensor { shape, data }
    }

    pub fn from_tensor(t: &ComplexTensor) -> Result<Self> {
        let [d_out, d_in, d1, d2] = t.shape() else {
            return Err(Error::Shape("MPO tensor must have rank 4".into()));
        };
        if d1 != d2 {
            return Err(Error::Shape("bond extents differ".into()));
        }
        let mut m = Self::zeros(*d_out, *d_in, *d1)?;
        for (f, &v) in t.data().iter().enumerate() {
            let b = f % d1;
            let a = (f / d1) % d1;
            let j = (f / (d1 * d1)) % d_in;
            let i = f / (d1 * d1 * d_in);
            m.slices[i * d_in + j][(a, b)] = v;
        }
        Ok(m)
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        if (self.d_out, self.d_in, self.bond) != (other.d_out, other.d_in, other.bond) {
            return f64::INFINITY;
        }
        self.slices.iter().zip(&other.slices).map(|(a, b)| linalg::max_diff(a, b)).fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self { slices: self.slices.iter().map(|m| m * s).collect(), ..self.clone() }
    }

    /// Conjugates every bond slice: A^{ij} -> P A^{ij} P^{-1} (P given with its inverse).
    pub fn gauge(&self, p: &CMat, p_inv: &CMat) -> Self {
        Self { slices: self.slices.iter().map(|m| p * m * p_inv).collect(), bond: p.nrows(), ..self.clone() }
    }
}

/// Square operator with lazily checked Hermiticity and positivity.
#[derive(Clone, Debug)]
pub struct Operator {
    matrix: CMat,
    hermitian: Option<bool>,
    positive: Option<bool>,
}

impl Operator {
    pub fn new(matrix: CMat) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape("operator must be square".into()));
        }
        Ok(Self { matrix, hermitian: None, positive: None })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn hermitian(&self) -> Option<bool> {
        self.hermitian
    }

    pub fn positive(&self) -> Option<bool> {
        self.positive
    }

    pub fn check_hermitian(&mut self, tol: f64) -> bool {
        let h = linalg::is_hermitian(&self.matrix, tol);
        self.hermitian = Some(h);
        h
    }

    /// Positive semidefinite within `tol` (requires Hermiticity).
    pub fn check_positive(&mut self, tol: f64) -> bool {
        let p = self.check_hermitian(tol) && self.spectrum().first().is_none_or(|&m| m >= -tol);
        self.positive = Some(p);
        p
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn spectrum(&self) -> Vec<f64> {
        linalg::hermitian_eigen(&self.matrix).0
    }
}

/// Ordered products A^{i_1 j_1}···A^{i_k j_k} with flattened multi-indices; zero products dropped unless `keep_zeros`.
fn chain(a: &MpoTensor, k: usize, keep_zeros: bool) -> Vec<(usize, usize, CMat)> {
    let mut terms = vec![(0usize, 0usize, linalg::eye(a.bond))];
    for _ in 0..k {
        let mut next = Vec::with_capacity(terms.len() * a.slices.len());
        for (r, c, m) in &terms {
            for i in 0..a.d_out {
                for j in 0..a.d_in {
                    let s = a.slice(i, j);
                    if !keep_zeros && s.iter().all(|z| *z == ZERO) {
                        continue;
                    }
                    let p = m * s;
                    if keep_zeros || p.iter().any(|z| *z != ZERO) {
                        next.push((r * a.d_out + i, c * a.d_in + j, p));
                    }
                }
            }
        }
        terms = next;
    }
    terms
}

/// l-fold horizontal blocking of an MPO tensor.
pub fn mpo_block(a: &MpoTensor, l: usize, cap: Cap) -> Result<MpoTensor> {
    if l == 0 {
        return Err(Error::Parameter("blocking length must be at least 1".into()));
    }
    let d_out = cap.check("blocked output dimension", a.d_out, l)?;
    let d_in = cap.check("blocked input dimension", a.d_in, l)?;
    let mut out = MpoTensor::zeros(d_out, d_in, a.bond)?;
    for (r, c, m) in chain(a, l, true) {
        *out.slice_mut(r, c) = m;
    }
    Ok(out)
}

/// Stacks B below A: C^{ik} = Σ_j A^{ij} ⊗ B^{jk}.
pub fn mpo_vertical_product(a: &MpoTensor, b: &MpoTensor) -> Result<MpoTensor> {
    if a.d_in != b.d_out {
        return Err(Error::Shape(format!("A.d_in = {} but B.d_out = {}", a.d_in, b.d_out)));
    }
    let mut out = MpoTensor::zeros(a.d_out, b.d_in, a.bond * b.bond)?;
    for i in 0..a.d_out {
        for k in 0..b.d_in {
            let mut s = linalg::zeros(a.bond * b.bond, a.bond * b.bond);
            for j in 0..a.d_in {
                s += linalg::kron(a.slice(i, j), b.slice(j, k));
            }
            *out.slice_mut(i, k) = s;
        }
    }
    Ok(out)
}

/// O^{(N)}(B) = Σ Tr(A^{i_1j_1}···A^{i_Nj_N} B) |i⟩⟨j| on a periodic chain of N sites.
pub fn mpo_close(a: &MpoTensor, b: &CMat, n: usize, cap: Cap) -> Result<Operator> {
    if b.shape() != (a.bond, a.bond) {
        return Err(Error::Shape(format!("boundary must be {0}x{0}", a.bond)));
    }
    if n == 0 {
        return Err(Error::Parameter("N must be at least 1".into()));
    }
    let rows = cap.check("closed operator dimension", a.d_out, n)?;
    let cols = cap.check("closed operator dimension", a.d_in, n)?;
    let n_left = n / 2;
    let left = chain(a, n_left, false);
    let right: Vec<(usize, usize, CMat)> =
        chain(a, n - n_left, false).into_iter().map(|(r, c, m)| (r, c, m * b)).collect();
    let rs = a.d_out.pow((n - n_left) as u32);
    let cs = a.d_in.pow((n - n_left) as u32);
    let d = a.bond;
    let mut out = linalg::zeros(rows, cols);
    for (lr, lc, l) in &left {
        for (rr, rc, r) in &right {
            let mut acc = ZERO;
            for x in 0..d {
                for y in 0..d {
                    acc += l[(x, y)] * r[(y, x)];
                }
            }
            out[(lr * rs + rr, lc * cs + rc)] += acc;
        }
    }
    Operator::new(out)
}

/// Unnormalized MPDO ρ^{(N)}(M): periodic closure with identity boundary.
pub fn mpdo_contract(m: &MpoTensor, n: usize, cap: Cap) -> Result<Operator> {
    if m.d_out != m.d_in {
        return Err(Error::Shape("MPDO tensor needs d_out == d_in".into()));
    }
    mpo_close(m, &linalg::eye(m.bond), n, cap)
}

/// Matrix of the one-site translation |i_1...i_N⟩ -> |i_N i_1...i_{N-1}⟩.
pub fn translation(d: usize, n: usize) -> CMat {
    let dim = d.pow(n as u32);
    let mut t = linalg::zeros(dim, dim);
    for x in 0..dim {
        let last = x % d;
        let y = last * d.pow(n as u32 - 1) + x / d;
        t[(y, x)] = ONE;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{re, real_matrix};

    fn a1() -> MpoTensor {
        let z = linalg::zeros(2, 2);
        MpoTensor::from_slices(
            2,
            2,
            vec![z.clone(), real_matrix(&[&[1.0, 1.0], &[0.0, 0.0]]), real_matrix(&[&[0.0, 0.0], &[-1.0, 1.0]]), z],
        )
        .unwrap()
    }

    #[test]
    fn densify_sparsify_roundtrip() {
        let t = ComplexTensor::new(vec![2, 3], (0..6).map(|k| re(k as f64 - 2.0)).collect()).unwrap();
        assert_eq!(t.sparsify().densify(), t);
    }

    #[test]
    fn sparse_rejects_out_of_bounds() {
        assert!(SparseTensor::new(vec![2, 2], vec![(vec![2, 0], ONE)]).is_err());
    }

    #[test]
    fn tensor_roundtrip() {
        let a = a1();
        assert_eq!(MpoTensor::from_tensor(&a.to_tensor()).unwrap(), a);
        assert_eq!(MpoTensor::from_vertical_slices(2, &a.vertical_slices()).unwrap(), a);
    }

    #[test]
    fn block_one_is_identity() {
        assert_eq!(mpo_block(&a1(), 1, Cap::default()).unwrap(), a1());
    }

    #[test]
    fn close_single_site_is_trace() {
        let a = a1();
        let b = real_matrix(&[&[0.3, -1.0], &[2.0, 0.5]]);
        let o = mpo_close(&a, &b, 1, Cap::default()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((o.matrix()[(i, j)] - linalg::trace(&(a.slice(i, j) * &b))).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn identity_mpdo() {
        let m = MpoTensor::identity(3).scaled(re(1.0 / 3.0));
        let rho = mpdo_contract(&m, 3, Cap::default()).unwrap();
        assert!(linalg::max_diff(rho.matrix(), &(linalg::eye(27) * re(1.0 / 27.0))) < 1e-15);
    }

    #[test]
    fn cap_is_enforced() {
        let err = mpo_close(&a1(), &linalg::eye(2), 13, Cap::default()).unwrap_err();
        assert!(matches!(err, Error::Size { .. }));
        assert!(mpo_block(&a1(), 13, Cap::default()).is_err());
    }

    #[test]
    fn vertical_with_identity() {
        let a = a1();
        let p = mpo_vertical_product(&MpoTensor::identity(2), &a).unwrap();
        assert_eq!(p, a);
        assert!(mpo_vertical_product(&MpoTensor::identity(3), &a).is_err());
    }
}
