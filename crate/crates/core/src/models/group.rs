//! Finite groups, 3-cocycles and the twisted group MPOs / pre-bialgebras built from them.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, C64, ONE, ZERO};
use crate::mpo_algebra::{BasisElement, MpoFamily};
use crate::prebialgebra::{PreBialgebra, Tensor3, WeakHopfData};
use crate::tensor_core::MpoTensor;

/// Group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl FiniteGroup {
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let labels = (0..n).map(|a| a.to_string()).collect();
        Self::from_table(labels, mult).expect("cyclic table is a group")
    }

    pub fn from_table(labels: Vec<String>, mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = mult.len();
        if n == 0 || labels.len() != n || mult.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Input("group table must be n×n with entries < n".into()));
        }
        for a in 0..n {
            if mult[0][a] != a || mult[a][0] != a {
                return Err(Error::Input("element 0 must be the identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(Error::Input(format!("table not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| mult[a][b] == 0 && mult[b][a] == 0)
                .ok_or_else(|| Error::Input(format!("element {a} has no inverse")))?;
        }
        Ok(Self { labels, mult, inv })
    }

    pub fn order(&self) -> usize {
        self.mult.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mult[a][b] == self.mult[b][a]))
    }

    /// Some(n) when the table is literally addition mod n.
    pub fn cyclic_order(&self) -> Option<usize> {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mult[a][b] == (a + b) % n)).then_some(n)
    }
}

/// ω(g,h,k) stored densely at index (g·n + h)·n + k.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeCocycle {
    group: FiniteGroup,
    values: Vec<C64>,
    pub normalized: bool,
}

impl ThreeCocycle {
    pub fn new(group: FiniteGroup, values: Vec<C64>) -> Result<Self> {
        let n = group.order();
        if values.len() != n * n * n {
            return Err(Error::Input(format!("cocycle needs {} values", n * n * n)));
        }
        let mut w = Self { group, values, normalized: false };
        w.normalized = w.normalization_residual() < 1e-12;
        Ok(w)
    }

    pub fn trivial(group: FiniteGroup) -> Self {
        let n = group.order();
        Self::new(group, vec![ONE; n * n * n]).expect("sizes match")
    }

    /// The normalized nontrivial Z_2 cocycle: -1 at (1,1,1).
    pub fn z2_nontrivial() -> Self {
        let mut v = vec![ONE; 8];
        v[7] = -ONE;
        Self::new(FiniteGroup::cyclic(2), v).expect("sizes match")
    }

    /// Z_n representative exp(2πi p a (b + c - [b+c]) / n²), [x] = x mod n.
    pub fn zn(n: usize, p: usize) -> Self {
        let g = FiniteGroup::cyclic(n);
        let mut v = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let carry = (b + c - (b + c) % n) as f64;
                    let phase = 2.0 * std::f64::consts::PI * (p * a) as f64 * carry / (n * n) as f64;
                    v.push(C64::from_polar(1.0, phase));
                }
            }
        }
        Self::new(g, v).expect("sizes match")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn get(&self, g: usize, h: usize, k: usize) -> C64 {
        let n = self.group.order();
        self.values[(g * n + h) * n + k]
    }

    /// ω_g(k, h) = ω(g, k, k⁻¹h).
    pub fn omega_g(&self, g: usize, k: usize, h: usize) -> C64 {
        self.get(g, k, self.group.op(self.group.inv(k), h))
    }

    pub fn cocycle_residual(&self) -> f64 {
        cocycle_residual(&self.values, &self.group)
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max((z.norm() - 1.0).abs()))
    }

    /// max |ω(1,k,l) − 1|.
    pub fn normalization_residual(&self) -> f64 {
        let n = self.group.order();
        let mut r: f64 = 0.0;
        for k in 0..n {
            for l in 0..n {
                r = r.max((self.get(0, k, l) - ONE).norm());
            }
        }
        r
    }

    /// Validates the cocycle identity and unit modulus.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let r = self.cocycle_residual().max(self.unitarity_residual());
        if r > tol {
            return Err(Error::NotACocycle(r));
        }
        Ok(())
    }
}

/// max over (g,h,k,l) of |ω(g,h,k)ω(g,hk,l)ω(h,k,l) − ω(gh,k,l)ω(g,h,kl)|.
pub fn cocycle_residual(values: &[C64], g: &FiniteGroup) -> f64 {
    let n = g.order();
    let w = |a: usize, b: usize, c: usize| values[(a * n + b) * n + c];
    let mut r: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let lhs = w(a, b, c) * w(a, g.op(b, c), d) * w(b, c, d);
                    let rhs = w(g.op(a, b), c, d) * w(a, b, g.op(c, d));
                    r = r.max((lhs - rhs).norm());
                }
            }
        }
    }
    r
}

/// dβ(a,b,c) = β(b,c)β(a,bc) / (β(ab,c)β(a,b)) for β stored at a·n + b.
pub fn coboundary(beta: &[C64], g: &FiniteGroup) -> Vec<C64> {
    let n = g.order();
    let b = |x: usize, y: usize| beta[x * n + y];
    let mut out = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                out.push(b(y, z) * b(x, g.op(y, z)) / (b(g.op(x, y), z) * b(x, y)));
            }
        }
    }
    out
}

fn require_valid(w: &ThreeCocycle) -> Result<()> {
    w.validate(1e-9)
}

/// |G| MPO tensors with A_g^{gh,h} = ω_g |h⟩⟨h| and boundary basis e_g^{kl} for all k, l.
pub fn group_cocycle_mpo(w: &ThreeCocycle) -> Result<(MpoFamily, Vec<bool>)> {
    require_valid(w)?;
    let g = w.group();
    let n = g.order();
    let mut tensors = Vec::with_capacity(n);
    let mut injective = Vec::with_capacity(n);
    for a in 0..n {
        let wg = CMat::from_fn(n, n, |k, l| w.omega_g(a, k, l));
        injective.push(linalg::rank(&wg, linalg::RANK_RTOL) == n);
        let mut t = MpoTensor::zeros(n, n, n)?;
        for h in 0..n {
            let mut s = linalg::zeros(n, n);
            for k in 0..n {
                s[(k, h)] = wg[(k, h)];
            }
            *t.slice_mut(g.op(a, h), h) = s;
        }
        tensors.push(t);
    }
    let basis = (0..n)
        .flat_map(|a| (0..n).flat_map(move |m| (0..n).map(move |k| BasisElement { sector: a, m, n: k })))
        .collect();
    let name = format!("group-cocycle-{n}");
    Ok((MpoFamily::new(name, g.clone(), tensors, basis)?, injective))
}

/// The algebra on b_g^{k,h} with both coproducts, counit, antipode and a star pulled back from the
/// natural representation.
#[derive(Clone, Debug)]
pub struct GroupPreBialgebra {
    /// Coproduct Δ (twisted by ω).
    pub twisted: PreBialgebra,
    /// Coproduct Δ̂ (untwisted), with counit.
    pub untwisted: PreBialgebra,
    pub weak_hopf: WeakHopfData,
    /// Natural representation b_g^{kh} ↦ ω_g(k,h)|gk,gh⟩⟨k,h| on C^{|G|²}.
    pub natural_rep: Vec<CMat>,
}

fn b_index(n: usize, g: usize, k: usize, h: usize) -> usize {
    (g * n + k) * n + h
}

pub fn group_prebialgebra(w: &ThreeCocycle) -> Result<GroupPreBialgebra> {
    require_valid(w)?;
    if !w.normalized {
        return Err(Error::Precondition("ω must be normalized for Δ(1) = 1⊗1".into()));
    }
    let g = w.group();
    let n = g.order();
    let dim = n * n * n;
    let wg = |a: usize, k: usize, h: usize| w.omega_g(a, k, h);
    let mut mult = Tensor3::zeros(dim);
    for (a, k, h) in triples(n) {
        for (a2, k2, h2) in triples(n) {
            if k == g.op(a2, k2) && h == g.op(a2, h2) {
                let a3 = g.op(a, a2);
                let v = wg(a, k, h) * wg(a2, k2, h2) / wg(a3, k2, h2);
                mult.set(b_index(n, a, k, h), b_index(n, a2, k2, h2), b_index(n, a3, k2, h2), v);
            }
        }
    }
    let mut twisted = Tensor3::zeros(dim);
    let mut untwisted = Tensor3::zeros(dim);
    for (a, k, h) in triples(n) {
        let i = b_index(n, a, k, h);
        for l in 0..n {
            for m in 0..n {
                twisted.add(i, b_index(n, a, k, l), b_index(n, a, m, h), wg(a, l, m));
            }
            untwisted.add(i, b_index(n, a, k, l), b_index(n, a, l, h), ONE);
        }
    }
    let mut unit = CVec::zeros(dim);
    for k in 0..n {
        for h in 0..n {
            unit[b_index(n, 0, k, h)] = ONE / wg(0, k, h);
        }
    }
    let mut counit = CVec::zeros(dim);
    for (a, k, h) in triples(n) {
        if k == h {
            counit[b_index(n, a, k, h)] = ONE;
        }
    }
    // S(b^g_{k,l}) = ω(g⁻¹,g,l) / (ω(g⁻¹,g,k) ω(1,l,l⁻¹k)) b^{g⁻¹}_{gl,gk}
    let mut antipode = linalg::zeros(dim, dim);
    for (a, k, l) in triples(n) {
        let ai = g.inv(a);
        let coef = w.get(ai, a, l) / (w.get(ai, a, k) * w.get(0, l, g.op(g.inv(l), k)));
        antipode[(b_index(n, ai, g.op(a, l), g.op(a, k)), b_index(n, a, k, l))] = coef;
    }
    let natural_rep: Vec<CMat> = triples(n)
        .map(|(a, k, h)| {
            let mut m = linalg::zeros(n * n, n * n);
            m[(g.op(a, k) * n + g.op(a, h), k * n + h)] = wg(a, k, h);
            m
        })
        .collect();
    let star = pullback_star(&natural_rep)?;
    let labels: Vec<String> = triples(n).map(|(a, k, h)| format!("b_{a}^{{{k},{h}}}")).collect();
    let tw = PreBialgebra::new(labels.clone(), mult.clone(), Some(twisted))?
        .with_unit(unit.clone())?
        .with_star(star.clone())?;
    let un = PreBialgebra::new(labels, mult, Some(untwisted))?
        .with_unit(unit)?
        .with_counit(counit.clone())?
        .with_star(star)?;
    Ok(GroupPreBialgebra { twisted: tw, untwisted: un, weak_hopf: WeakHopfData { counit, antipode }, natural_rep })
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |a| (0..n).flat_map(move |k| (0..n).map(move |h| (a, k, h))))
}

/// Star matrix with φ(e_I*) = φ(e_I)† for a faithful representation φ.
fn pullback_star(rep: &[CMat]) -> Result<CMat> {
    let dim = rep.len();
    let d2 = rep[0].len();
    let v = CMat::from_fn(d2, dim, |r, c| rep[c].iter().nth(r).copied().unwrap_or(ZERO));
    let pinv = linalg::pinv(&v, 1e-12);
    let mut star = linalg::zeros(dim, dim);
    for i in 0..dim {
        let target = rep[i].adjoint();
        let t = CMat::from_iterator(d2, 1, target.iter().copied());
        let coeff = &pinv * &t;
        if linalg::max_diff(&(&v * &coeff), &t) > 1e-10 {
            return Err(Error::Structure("natural representation is not closed under †".into()));
        }
        for j in 0..dim {
            star[(i, j)] = coeff[(j, 0)];
        }
    }
    Ok(linalg::chop(&star, 1e-13))
}

/// Closed PBC operators O_g = Σ_{kl} O^{(N)}(e_g^{kl}) compose as the group: O_g O_h = O_{gh}.
pub fn group_law_residual(family: &MpoFamily, n_sites: usize, cap: crate::tensor_core::Cap) -> Result<f64> {
    let g = family.group().clone();
    let ops: Vec<CMat> = (0..g.order())
        .map(|a| {
            let d = family.tensor(a).bond();
            crate::tensor_core::mpo_close(family.tensor(a), &linalg::eye(d), n_sites, cap).map(|o| o.into_matrix())
        })
        .collect::<Result<_>>()?;
    let mut r: f64 = 0.0;
    for a in 0..g.order() {
        for b in 0..g.order() {
            r = r.max(linalg::max_diff(&(&ops[a] * &ops[b]), &ops[g.op(a, b)]));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prebialgebra::{check_axioms, check_weak_hopf};
    use crate::tensor_core::Cap;

    #[test]
    fn cocycles_validate() {
        assert!(ThreeCocycle::z2_nontrivial().validate(1e-12).is_ok());
        assert!(ThreeCocycle::trivial(FiniteGroup::cyclic(3)).validate(1e-12).is_ok());
        for p in 0..3 {
            let w = ThreeCocycle::zn(3, p);
            assert!(w.validate(1e-12).is_ok(), "p = {p}");
            assert!(w.normalized);
        }
    }

    #[test]
    fn broken_cocycle_rejected() {
        let mut v = vec![ONE; 8];
        v[3] = -ONE;
        let w = ThreeCocycle::new(FiniteGroup::cyclic(2), v).unwrap();
        assert!(matches!(w.validate(1e-9), Err(Error::NotACocycle(_))));
    }

    #[test]
    fn injectivity_flags_z2() {
        let (_, inj) = group_cocycle_mpo(&ThreeCocycle::z2_nontrivial()).unwrap();
        assert_eq!(inj, vec![false, true]);
    }

    #[test]
    fn group_law_holds() {
        for w in [ThreeCocycle::z2_nontrivial(), ThreeCocycle::trivial(FiniteGroup::cyclic(3)), ThreeCocycle::zn(3, 1)] {
            let (fam, _) = group_cocycle_mpo(&w).unwrap();
            for n in 2..=4 {
                assert!(group_law_residual(&fam, n, Cap::default()).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn z3_prebialgebra_is_weak_hopf() {
        let gp = group_prebialgebra(&ThreeCocycle::zn(3, 1)).unwrap();
        assert!(check_axioms(&gp.twisted, 1e-10).all_pass());
        let r = check_weak_hopf(&gp.untwisted, &gp.weak_hopf, 1e-10);
        assert!(r.all_pass(), "{:?}", r.checks);
    }

    #[test]
    fn non_normalized_rejected() {
        let g = FiniteGroup::cyclic(2);
        let beta = vec![ONE, C64::new(0.0, 1.0), ONE, ONE];
        let db = coboundary(&beta, &g);
        let w = ThreeCocycle::new(g, db).unwrap();
        assert!(w.validate(1e-12).is_ok());
        assert!(!w.normalized);
        assert!(matches!(group_prebialgebra(&w), Err(Error::Precondition(_))));
    }
}
