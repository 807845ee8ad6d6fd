//! G-differential algebras, the commutative and non-commutative Cartan
//! models, and the two-sphere example.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::duflo::{apply_diff, lambda, DufloContext};
use crate::error::{Error, Result};
use crate::liedata::LieAlgebra;
use crate::multivec::{
    coordinate_matrix, ext_mul, iota, koszul_d, lie, monomials_of_degree, mul_unchecked, sym_mul, sym_partial,
    Elem, LinOp, Mono, Tag, Tensor, Vector, Verdict,
};
use crate::pbw::sym_map;
use crate::ring::{int, rat, sparse_kernel, Rational, SparseVec};
use crate::weil::{p_hor, u_left, u_right, weil_d, Betti, GOps, Kalkman, Side};

/// A super-algebra with contractions, Lie derivatives and a differential.
/// Elements are [`Elem`]s of the algebra's kind; invariance is taken to be
/// the joint kernel of the `L_a` (connected group).
pub trait Gda: Send + Sync {
    fn name(&self) -> String;
    /// Tag and arity of the element representation.
    fn kind(&self) -> (Tag, usize);
    /// Number of contractions (the Lie algebra dimension).
    fn dim(&self) -> usize;
    fn mul(&self, a: &Elem, b: &Elem) -> Elem;
    fn iota(&self, a: usize, b: &Elem) -> Elem;
    fn lie(&self, a: usize, b: &Elem) -> Elem;
    fn d(&self, b: &Elem) -> Elem;
    fn degree(&self, m: &Mono) -> u32;
    /// A basis of the homogeneous piece of the given degree.
    fn basis(&self, degree: u32) -> Vec<Elem>;

    fn unit(&self) -> Elem {
        let (tag, n) = self.kind();
        Elem::one(tag, n)
    }

    fn zero(&self) -> Elem {
        let (tag, n) = self.kind();
        Elem::zero(tag, n)
    }
}

/// The ground field with trivial operations.
pub struct Trivial {
    dim: usize,
}

impl Trivial {
    pub fn new(alg: &LieAlgebra) -> Self {
        Trivial { dim: alg.dim() }
    }
}

impl Gda for Trivial {
    fn name(&self) -> String {
        "trivial".into()
    }
    fn kind(&self) -> (Tag, usize) {
        (Tag::Ext, 0)
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        Elem::scalar(Tag::Ext, 0, a.constant() * b.constant())
    }
    fn iota(&self, _: usize, _: &Elem) -> Elem {
        self.zero()
    }
    fn lie(&self, _: usize, _: &Elem) -> Elem {
        self.zero()
    }
    fn d(&self, _: &Elem) -> Elem {
        self.zero()
    }
    fn degree(&self, _: &Mono) -> u32 {
        0
    }
    fn basis(&self, degree: u32) -> Vec<Elem> {
        if degree == 0 {
            vec![self.unit()]
        } else {
            vec![]
        }
    }
}

/// `Sg*` with zero differential and contractions, degree `2·deg`.
pub struct SymGda {
    alg: LieAlgebra,
}

impl SymGda {
    pub fn new(alg: &LieAlgebra) -> Self {
        SymGda { alg: alg.clone() }
    }
}

impl Gda for SymGda {
    fn name(&self) -> String {
        "sym".into()
    }
    fn kind(&self) -> (Tag, usize) {
        (Tag::Sym, self.alg.dim())
    }
    fn dim(&self) -> usize {
        self.alg.dim()
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        mul_unchecked(&self.alg, a, b)
    }
    fn iota(&self, _: usize, _: &Elem) -> Elem {
        self.zero()
    }
    fn lie(&self, a: usize, b: &Elem) -> Elem {
        lie(&self.alg, a, b)
    }
    fn d(&self, _: &Elem) -> Elem {
        self.zero()
    }
    fn degree(&self, m: &Mono) -> u32 {
        m.wdeg()
    }
    fn basis(&self, degree: u32) -> Vec<Elem> {
        mono_basis(Tag::Sym, self.alg.dim(), degree)
    }
}

fn mono_basis(tag: Tag, n: usize, degree: u32) -> Vec<Elem> {
    monomials_of_degree(tag, n, degree).into_iter().map(|m| Elem::from_mono(tag, n, m, int(1))).collect()
}

/// `∧g*` with the Koszul differential.
pub struct ExtGda {
    alg: LieAlgebra,
}

impl ExtGda {
    pub fn new(alg: &LieAlgebra) -> Self {
        ExtGda { alg: alg.clone() }
    }
}

impl Gda for ExtGda {
    fn name(&self) -> String {
        "ext".into()
    }
    fn kind(&self) -> (Tag, usize) {
        (Tag::Ext, self.alg.dim())
    }
    fn dim(&self) -> usize {
        self.alg.dim()
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        mul_unchecked(&self.alg, a, b)
    }
    fn iota(&self, a: usize, b: &Elem) -> Elem {
        iota(a, b)
    }
    fn lie(&self, a: usize, b: &Elem) -> Elem {
        lie(&self.alg, a, b)
    }
    fn d(&self, b: &Elem) -> Elem {
        koszul_d(&self.alg, b)
    }
    fn degree(&self, m: &Mono) -> u32 {
        m.wdeg()
    }
    fn basis(&self, degree: u32) -> Vec<Elem> {
        mono_basis(Tag::Ext, self.alg.dim(), degree)
    }
}

/// The Weil algebra `W_G`.
pub struct WeilGda {
    alg: LieAlgebra,
}

impl WeilGda {
    pub fn new(alg: &LieAlgebra) -> Self {
        WeilGda { alg: alg.clone() }
    }
}

impl Gda for WeilGda {
    fn name(&self) -> String {
        "weil".into()
    }
    fn kind(&self) -> (Tag, usize) {
        (Tag::W, self.alg.dim())
    }
    fn dim(&self) -> usize {
        self.alg.dim()
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        mul_unchecked(&self.alg, a, b)
    }
    fn iota(&self, a: usize, b: &Elem) -> Elem {
        iota(a, b)
    }
    fn lie(&self, a: usize, b: &Elem) -> Elem {
        lie(&self.alg, a, b)
    }
    fn d(&self, b: &Elem) -> Elem {
        weil_d(&self.alg, b)
    }
    fn degree(&self, m: &Mono) -> u32 {
        m.wdeg()
    }
    fn basis(&self, degree: u32) -> Vec<Elem> {
        mono_basis(Tag::W, self.alg.dim(), degree)
    }
}

// ---------------------------------------------------------------------------
// The two-sphere
// ---------------------------------------------------------------------------

/// `n3² → 1 - n1² - n2²` applied until every exponent of `n3` is at most one.
fn reduce_n3(w: &Elem) -> Elem {
    let mut out = Elem::zero(Tag::Sphere, 3);
    let mut stack: Vec<(Mono, Rational)> = w.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    while let Some((m, c)) = stack.pop() {
        if m.sym[2] < 2 {
            out.add_term(m, c);
            continue;
        }
        let mut base = m.clone();
        base.sym[2] -= 2;
        stack.push((base.clone(), c.clone()));
        for i in 0..2 {
            let mut t = base.clone();
            t.sym[i] += 2;
            stack.push((t, -c.clone()));
        }
    }
    out
}

/// Canonical representative of a polynomial form on the unit sphere:
/// the tangential part `ι_N(ν ∧ α)` with `ν = n·dn`, `N = n·∂`, reduced
/// modulo `n·n = 1`.
pub fn sphere_nf(w: &Elem) -> Elem {
    let mut nu_w = Elem::zero(Tag::Sphere, 3);
    for a in 0..3 {
        nu_w = &nu_w + &sym_mul(a, &ext_mul(a, w));
    }
    let mut t = Elem::zero(Tag::Sphere, 3);
    for a in 0..3 {
        t = &t + &sym_mul(a, &iota(a, &nu_w));
    }
    reduce_n3(&t)
}

/// Polynomial forms on `S² ⊂ ℝ³` with the rotation action
/// `ι_a dn^c = s f_abc n^b`. Bases are truncated at `poly degree + form
/// degree ≤ weight`.
pub struct SphereGda {
    alg: LieAlgebra,
    s: i64,
    weight: u32,
    bases: OnceLock<Vec<Vec<Elem>>>,
}

impl SphereGda {
    pub fn new(alg: &LieAlgebra, s: i64, weight: u32) -> Result<Self> {
        if alg.dim() != 3 {
            return Err(Error::Invalid(format!("the sphere needs a 3-dimensional algebra, got {}", alg.dim())));
        }
        Ok(SphereGda { alg: alg.clone(), s, weight, bases: OnceLock::new() })
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    fn ambient_iota(&self, a: usize, w: &Elem) -> Elem {
        let mut out = Elem::zero(Tag::Sphere, 3);
        for (b, c, f) in self.alg.brackets(a) {
            out.add_scaled(&sym_mul(*b, &iota(*c, w)), &(f * int(self.s)));
        }
        out
    }

    fn ambient_d(w: &Elem) -> Elem {
        let mut out = Elem::zero(Tag::Sphere, 3);
        for b in 0..3 {
            out = &out + &ext_mul(b, &sym_partial(b, w));
        }
        out
    }

    fn compute_bases(&self) -> Vec<Vec<Elem>> {
        (0..=2u32)
            .map(|k| {
                let mut cands = Vec::new();
                for p in 0..=self.weight.saturating_sub(k) {
                    for m in monomials_of_degree(Tag::Ext, 3, k) {
                        for e in crate::multivec::exponent_vectors(3, p) {
                            let mono = Mono::new(e, m.ext);
                            let nf = sphere_nf(&Elem::from_mono(Tag::Sphere, 3, mono, int(1)));
                            if !nf.is_zero() {
                                cands.push(nf);
                            }
                        }
                    }
                }
                if cands.is_empty() {
                    return cands;
                }
                let (mat, _) = coordinate_matrix(&cands);
                let (_, pivots) = mat.rref();
                pivots.into_iter().map(|j| cands[j].clone()).collect()
            })
            .collect()
    }
}

impl Gda for SphereGda {
    fn name(&self) -> String {
        format!("sphere(s={})", self.s)
    }
    fn kind(&self) -> (Tag, usize) {
        (Tag::Sphere, 3)
    }
    fn dim(&self) -> usize {
        3
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        sphere_nf(&mul_unchecked(&self.alg, a, b))
    }
    fn iota(&self, a: usize, b: &Elem) -> Elem {
        sphere_nf(&self.ambient_iota(a, b))
    }
    fn lie(&self, a: usize, b: &Elem) -> Elem {
        let x = self.ambient_iota(a, &Self::ambient_d(b));
        let y = Self::ambient_d(&self.ambient_iota(a, b));
        sphere_nf(&(&x + &y))
    }
    fn d(&self, b: &Elem) -> Elem {
        sphere_nf(&Self::ambient_d(b))
    }
    fn degree(&self, m: &Mono) -> u32 {
        m.ext_degree()
    }
    fn basis(&self, degree: u32) -> Vec<Elem> {
        let bases = self.bases.get_or_init(|| self.compute_bases());
        bases.get(degree as usize).cloned().unwrap_or_default()
    }
}

// ---------------------------------------------------------------------------
// Generic checks
// ---------------------------------------------------------------------------

fn combine<E: Vector>(basis: &[E], coeffs: &SparseVec) -> E {
    let mut acc = basis[0].zero_like();
    for (j, c) in coeffs {
        acc = acc.plus(&basis[*j].scaled(c));
    }
    acc
}

type LinMap<'a, E> = Box<dyn Fn(&E) -> E + Sync + 'a>;

/// Common kernel of linear maps on the span of `basis`, by sparse
/// elimination over the stacked images.
fn joint_kernel<E: Vector, K: Ord + Clone + Send>(
    basis: &[E],
    maps: &[LinMap<'_, E>],
    terms: impl Fn(&E) -> Vec<(K, Rational)> + Sync + Send,
) -> Vec<E> {
    if basis.is_empty() {
        return vec![];
    }
    let images: Vec<Vec<(usize, K, Rational)>> = crate::par::map(basis, |x| {
        maps.iter().enumerate().flat_map(|(k, f)| terms(&f(x)).into_iter().map(move |(m, c)| (k, m, c))).collect()
    });
    let mut rows: BTreeMap<(usize, K), usize> = BTreeMap::new();
    for col in &images {
        for (k, m, _) in col {
            rows.entry((*k, m.clone())).or_insert(0);
        }
    }
    for (i, v) in rows.values_mut().enumerate() {
        *v = i;
    }
    let columns: Vec<SparseVec> = images
        .into_iter()
        .map(|col| {
            let mut v: SparseVec = col.into_iter().map(|(k, m, c)| (rows[&(k, m)], c)).collect();
            v.sort_by_key(|(i, _)| *i);
            v
        })
        .collect();
    sparse_kernel(&columns).iter().map(|k| combine(basis, k)).collect()
}

fn elem_terms(x: &Elem) -> Vec<(Mono, Rational)> {
    x.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

fn tensor_terms(x: &Tensor) -> Vec<((Mono, Mono), Rational)> {
    x.terms().map(|((l, r), c)| ((l.clone(), r.clone()), c.clone())).collect()
}

/// Bases of `B^G` in degrees `0..=max_degree`.
pub fn invariants(b: &dyn Gda, max_degree: u32) -> Vec<Vec<Elem>> {
    (0..=max_degree)
        .map(|k| {
            let basis = b.basis(k);
            let lies: Vec<LinMap<Elem>> = (0..b.dim()).map(|a| Box::new(move |x: &Elem| b.lie(a, x)) as LinMap<Elem>).collect();
            joint_kernel(&basis, &lies, elem_terms)
        })
        .collect()
}

/// `ι_a`, `L_a`, `d` of an instance as operators.
pub fn gda_ops(b: &'static dyn Gda) -> GOps<Elem> {
    GOps {
        iota: (0..b.dim()).map(|a| LinOp::new(1, move |x: &Elem| b.iota(a, x))).collect(),
        lie: (0..b.dim()).map(|a| LinOp::new(0, move |x: &Elem| b.lie(a, x))).collect(),
        d: LinOp::new(1, move |x: &Elem| b.d(x)),
    }
}

/// Relations, unit and derivation rules of an instance up to a degree
/// (products only when the total degree stays in range).
pub fn gda_axioms(alg: &LieAlgebra, b: &dyn Gda, max_degree: u32) -> Verdict {
    let basis: Vec<Elem> = (0..=max_degree).flat_map(|k| b.basis(k)).collect();
    let n = b.dim();
    let degree = |x: &Elem| x.terms().next().map_or(0, |(m, _)| b.degree(m));
    let parity = |x: &Elem| degree(x) % 2;
    for x in &basis {
        let v = Verdict::check_eq("unit", &b.mul(&b.unit(), x), x);
        if !v.is_pass() {
            return v;
        }
        for a in 0..n {
            let checks = [
                ("i_a i_a", b.iota(a, &b.iota(a, x)), b.zero()),
                ("d d", b.d(&b.d(x)), b.zero()),
                ("[i_a,d]", &b.iota(a, &b.d(x)) + &b.d(&b.iota(a, x)), b.lie(a, x)),
                ("[L_a,d]", b.lie(a, &b.d(x)), b.d(&b.lie(a, x))),
            ];
            for (label, l, r) in checks {
                let v = Verdict::check_eq(&format!("{label} on {}", x.render()), &l, &r);
                if !v.is_pass() {
                    return v;
                }
            }
            for c in 0..n {
                // [L_a, ι_c] = f_acd ι_d
                let lhs = &b.lie(a, &b.iota(c, x)) - &b.iota(c, &b.lie(a, x));
                let mut rhs = b.zero();
                for (cc, d, f) in alg.brackets(a) {
                    if *cc == c {
                        rhs.add_scaled(&b.iota(*d, x), f);
                    }
                }
                let v = Verdict::check_eq(&format!("[L_a,i_b] on {}", x.render()), &lhs, &rhs);
                if !v.is_pass() {
                    return v;
                }
            }
        }
    }
    for x in &basis {
        let px = parity(x);
        for y in basis.iter().filter(|y| degree(x) + degree(y) <= max_degree) {
            let xy = b.mul(x, y);
            let sign = if px == 1 { int(-1) } else { int(1) };
            let label = format!("({})*({})", x.render(), y.render());
            let mut v = Verdict::check_eq(&format!("d {label}"), &b.d(&xy), &{
                let mut r = b.mul(&b.d(x), y);
                r.add_scaled(&b.mul(x, &b.d(y)), &sign);
                r
            });
            for a in 0..n {
                v = v.and(|| {
                    let mut r = b.mul(&b.iota(a, x), y);
                    r.add_scaled(&b.mul(x, &b.iota(a, y)), &sign);
                    Verdict::check_eq(&format!("i_{} {label}", a + 1), &b.iota(a, &xy), &r)
                });
                v = v.and(|| {
                    let r = &b.mul(&b.lie(a, x), y) + &b.mul(x, &b.lie(a, y));
                    Verdict::check_eq(&format!("L_{} {label}", a + 1), &b.lie(a, &xy), &r)
                });
            }
            if !v.is_pass() {
                return v;
            }
        }
    }
    Verdict::Pass
}

// ---------------------------------------------------------------------------
// Cartan models
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Model {
    /// `(Sg* ⊗ B)^G`.
    Comm,
    /// `(U(g) ⊗ B)^G`.
    Nc,
}

impl Model {
    pub fn left_tag(self) -> Tag {
        match self {
            Model::Comm => Tag::Sym,
            Model::Nc => Tag::Env,
        }
    }
}

/// A Cartan model over a Lie algebra and a coefficient algebra.
pub struct Cartan<'a> {
    pub model: Model,
    pub alg: &'a LieAlgebra,
    pub b: &'a dyn Gda,
}

fn mono_elem(kind: (Tag, usize), m: &Mono) -> Elem {
    Elem::from_mono(kind.0, kind.1, m.clone(), int(1))
}

impl<'a> Cartan<'a> {
    pub fn new(model: Model, alg: &'a LieAlgebra, b: &'a dyn Gda) -> Self {
        Cartan { model, alg, b }
    }

    fn left(&self) -> (Tag, usize) {
        (self.model.left_tag(), self.alg.dim())
    }

    pub fn zero(&self) -> Tensor {
        Tensor::zero(self.left(), self.b.kind())
    }

    /// `p ⊗ b`.
    pub fn pure(&self, p: &Elem, b: &Elem) -> Tensor {
        Tensor::pure(&p.retag(self.model.left_tag()), b)
    }

    pub fn lie_total(&self, a: usize, t: &Tensor) -> Tensor {
        let left = self.left();
        let right = self.b.kind();
        let l = t.map_left(left, |m| lie(self.alg, a, &mono_elem(left, m)));
        l.plus(&t.map_right(0, |m| self.b.lie(a, &mono_elem(right, m))))
    }

    pub fn is_invariant(&self, t: &Tensor) -> bool {
        (0..self.alg.dim()).all(|a| self.lie_total(a, t).is_zero())
    }

    fn require_invariant(&self, t: &Tensor) -> Result<()> {
        if self.is_invariant(t) {
            Ok(())
        } else {
            Err(Error::NotInvariant(t.render()))
        }
    }

    /// `d_G` without the invariance check.
    pub fn d_unchecked(&self, t: &Tensor) -> Tensor {
        let left = self.left();
        let right = self.b.kind();
        let mut out = t.map_right(1, |m| self.b.d(&mono_elem(right, m)));
        for a in 0..self.alg.dim() {
            let part = match self.model {
                Model::Comm => t.map2(left, 1, |m| sym_mul(a, &mono_elem(left, m)), |m| self.b.iota(a, &mono_elem(right, m))),
                Model::Nc => t.map2(
                    left,
                    1,
                    |m| {
                        let e = mono_elem(left, m);
                        (&u_left(self.alg, a, &e) + &u_right(self.alg, a, &e)).scale(&rat(1, 2))
                    },
                    |m| self.b.iota(a, &mono_elem(right, m)),
                ),
            };
            out.add_scaled(&part, &int(-1));
        }
        if self.model == Model::Nc {
            for (a, bb, c, f) in self.alg.nonzero() {
                let part = t.map_right(1, |m| self.b.iota(a, &self.b.iota(bb, &self.b.iota(c, &mono_elem(right, m)))));
                out.add_scaled(&part, &(f * rat(1, 24)));
            }
        }
        out
    }

    /// `d_G = 1⊗d - v^a⊗ι_a` or `1⊗d - ½(u^L_a+u^R_a)⊗ι_a + 1/24 f_abc 1⊗ι_aι_bι_c`.
    pub fn d(&self, t: &Tensor) -> Result<Tensor> {
        self.require_invariant(t)?;
        Ok(self.d_unchecked(t))
    }

    /// Product of `Sg*⊗B` or `U(g)⊗B` without contractions.
    pub fn mul(&self, x: &Tensor, y: &Tensor) -> Tensor {
        x.mul(y, |a, b| mul_unchecked(self.alg, a, b), |a, b| self.b.mul(a, b))
    }

    /// `b₁ ⊙ b₂ = m ∘ exp(-½ ι¹_a ι²_a)(b₁ ⊗ b₂)` on the coefficient algebra.
    pub fn odot_b(&self, x: &Elem, y: &Elem) -> Elem {
        let kind = self.b.kind();
        let mut t = Tensor::pure(x, y);
        let mut acc = t.clone();
        for k in 1i64.. {
            let mut next = Tensor::zero(kind, kind);
            for a in 0..self.alg.dim() {
                let part = t.map2(kind, 1, |m| self.b.iota(a, &mono_elem(kind, m)), |m| self.b.iota(a, &mono_elem(kind, m)));
                next.add_scaled(&part, &rat(-1, 2 * k));
            }
            if next.is_zero() {
                break;
            }
            acc = acc.plus(&next);
            t = next;
        }
        let mut out = self.b.zero();
        for ((l, r), c) in acc.terms() {
            out.add_scaled(&self.b.mul(&mono_elem(kind, l), &mono_elem(kind, r)), c);
        }
        out
    }

    /// The product `⊙` on the non-commutative model.
    pub fn odot(&self, x: &Tensor, y: &Tensor) -> Result<Tensor> {
        self.require_invariant(x)?;
        self.require_invariant(y)?;
        Ok(self.odot_unchecked(x, y))
    }

    pub fn odot_unchecked(&self, x: &Tensor, y: &Tensor) -> Tensor {
        let left = self.left();
        let right = self.b.kind();
        let mut out = self.zero();
        for ((l1, r1), c1) in x.terms() {
            for ((l2, r2), c2) in y.terms() {
                let p = mul_unchecked(self.alg, &mono_elem(left, l1), &mono_elem(left, l2));
                let q = self.odot_b(&mono_elem(right, r1), &mono_elem(right, r2));
                let c = c1 * c2;
                for (pm, pc) in p.terms() {
                    for (qm, qc) in q.terms() {
                        out.add_term(pm.clone(), qm.clone(), pc * qc * &c);
                    }
                }
            }
        }
        out
    }

    /// Pure tensors `p ⊗ b` with `2·deg p + deg b = k`.
    pub fn basis_of_degree(&self, k: u32) -> Vec<Tensor> {
        let n = self.alg.dim();
        let mut out = Vec::new();
        for j in 0..=k / 2 {
            let right = self.b.basis(k - 2 * j);
            for m in monomials_of_degree(self.model.left_tag(), n, 2 * j) {
                let l = Elem::from_mono(self.model.left_tag(), n, m, int(1));
                for r in &right {
                    out.push(Tensor::pure(&l, r));
                }
            }
        }
        out
    }

    /// A basis of the invariant part of degree `k`.
    pub fn invariants(&self, k: u32) -> Vec<Tensor> {
        let basis = self.basis_of_degree(k);
        let lies: Vec<LinMap<Tensor>> =
            (0..self.alg.dim()).map(|a| Box::new(move |t: &Tensor| self.lie_total(a, t)) as LinMap<Tensor>).collect();
        joint_kernel(&basis, &lies, tensor_terms)
    }

    /// `d_G² = 0` on invariants of degree `≤ max_degree`.
    pub fn d_squared_check(&self, max_degree: u32) -> Verdict {
        for k in 0..=max_degree {
            for t in self.invariants(k) {
                let dd = self.d_unchecked(&self.d_unchecked(&t));
                if !dd.is_zero() {
                    return Verdict::fail(t.render(), dd.render());
                }
            }
        }
        Verdict::Pass
    }
}

fn relabel_left(t: &Tensor, tag: Tag) -> Tensor {
    let (_, n) = t.left_kind();
    let mut out = Tensor::zero((tag, n), t.right_kind());
    for ((l, r), c) in t.terms() {
        out.add_term(l.clone(), r.clone(), c.clone());
    }
    out
}

/// `P_hor ⊗ 1` from `Weil ⊗ B` into the Cartan model.
pub fn horizontal(side: Side, t: &Tensor) -> Tensor {
    let left = t.left_kind();
    let projected = t.map_left(left, |m| p_hor(&mono_elem(left, m)));
    relabel_left(&projected, if side == Side::W { Tag::Sym } else { Tag::Env })
}

/// `d_G ∘ (P_hor⊗1) = (P_hor⊗1) ∘ d` on the basic subcomplex of
/// `Weil ⊗ B` up to the given degree.
pub fn weil_vs_cartan_check(model: Model, b: &dyn Gda, alg: &LieAlgebra, max_degree: u32) -> Verdict {
    let side = match model {
        Model::Comm => Side::W,
        Model::Nc => Side::Nc,
    };
    let k = Kalkman::new(side, alg, b);
    let cartan = Cartan::new(model, alg, b);
    for deg in 0..=max_degree {
        let basis = k.basis_of_degree(deg);
        let mut maps: Vec<LinMap<Tensor>> = Vec::new();
        for a in 0..alg.dim() {
            let kk = &k;
            maps.push(Box::new(move |t: &Tensor| kk.iota_total(a, t)));
            maps.push(Box::new(move |t: &Tensor| kk.lie_total(a, t)));
        }
        let basic = joint_kernel(&basis, &maps, tensor_terms);
        for xi in basic {
            let p = horizontal(side, &xi);
            if !cartan.is_invariant(&p) {
                return Verdict::fail(xi.render(), format!("P(xi) not invariant: {}", p.render()));
            }
            let lhs = cartan.d_unchecked(&p);
            let rhs = horizontal(side, &k.d_total(&xi));
            let v = Verdict::check_eq(&xi.render(), &lhs, &rhs);
            if !v.is_pass() {
                return v;
            }
        }
    }
    Verdict::Pass
}

/// `Duf ∘ exp(-½ T_ab(∂) ⊗ ι_a ι_b)` from the commutative to the
/// non-commutative Cartan model.
pub fn q_cartan(ctx: &DufloContext, b: &dyn Gda, xi: &Tensor) -> Result<Tensor> {
    let alg = &ctx.alg;
    let comm = Cartan::new(Model::Comm, alg, b);
    comm.require_invariant(xi)?;
    q_cartan_unchecked(ctx, b, xi)
}

pub fn q_cartan_unchecked(ctx: &DufloContext, b: &dyn Gda, xi: &Tensor) -> Result<Tensor> {
    let n = ctx.alg.dim();
    let left = (Tag::Sym, n);
    let right = b.kind();
    let needed = xi.terms().map(|((l, _), _)| l.sym_degree()).max().unwrap_or(0);
    if needed as usize > ctx.order {
        return Err(Error::TruncationTooLow { needed: needed as usize, available: ctx.order });
    }
    let step = |t: &Tensor| {
        let mut out = Tensor::zero(left, right);
        for a in 0..n {
            for c in 0..n {
                let tp = ctx.t(a, c);
                if tp.is_zero() {
                    continue;
                }
                let part = t.map2(left, 0, |m| apply_diff(tp, &mono_elem(left, m)), |m| b.iota(a, &b.iota(c, &mono_elem(right, m))));
                out.add_scaled(&part, &rat(-1, 2));
            }
        }
        out
    };
    let mut acc = xi.clone();
    let mut term = xi.clone();
    for k in 1i64.. {
        term = step(&term).scaled(&rat(1, k));
        if term.is_zero() {
            break;
        }
        acc = acc.plus(&term);
    }
    let out = acc.map_left((Tag::Env, n), |m| {
        let p = Elem::from_mono(Tag::Sym, n, m.clone(), int(1));
        sym_map(&ctx.alg, &apply_diff(&ctx.bundle.j_half, &p))
    });
    Ok(out)
}

/// `q_cartan ∘ d_G = d_G ∘ q_cartan` on the invariants of degree `≤ max_degree`.
pub fn q_cartan_chain_check(ctx: &DufloContext, b: &dyn Gda, max_degree: u32) -> Result<Verdict> {
    let comm = Cartan::new(Model::Comm, &ctx.alg, b);
    let nc = Cartan::new(Model::Nc, &ctx.alg, b);
    for k in 0..=max_degree {
        for xi in comm.invariants(k) {
            let lhs = q_cartan_unchecked(ctx, b, &comm.d_unchecked(&xi))?;
            let rhs = nc.d_unchecked(&q_cartan_unchecked(ctx, b, &xi)?);
            let v = Verdict::check_eq(&xi.render(), &lhs, &rhs);
            if !v.is_pass() {
                return Ok(v);
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Equivariant Betti numbers of the commutative model in degrees
/// `0..=max_degree`; the last degree sits on the truncation boundary.
pub fn equivariant_cohomology(model: Model, b: &dyn Gda, alg: &LieAlgebra, max_degree: u32) -> Result<Betti> {
    if model == Model::Nc {
        return Err(Error::Invalid("the non-commutative model is filtered, not graded".into()));
    }
    let cartan = Cartan::new(model, alg, b);
    let inv: Vec<Vec<Tensor>> = (0..=max_degree).map(|k| cartan.invariants(k)).collect();
    let ranks: Vec<usize> = inv
        .iter()
        .map(|basis| {
            let images = crate::par::map(basis, |t| cartan.d_unchecked(t));
            crate::multivec::rank_of_tensors(&images)
        })
        .collect();
    let values = (0..inv.len()).map(|k| inv[k].len() - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 }).collect();
    let mut labels: Vec<String> = (0..=max_degree).map(|k| k.to_string()).collect();
    if let Some(last) = labels.last_mut() {
        last.push('*');
    }
    Ok(Betti { labels, values })
}

/// `(d + 1/24 f_abc ι_a ι_b ι_c)² = 0` on `B^G`.
pub fn twisted_d_check(b: &dyn Gda, alg: &LieAlgebra, max_degree: u32) -> Verdict {
    let twisted = |x: &Elem| {
        let mut out = b.d(x);
        for (a, bb, c, f) in alg.nonzero() {
            out.add_scaled(&b.iota(a, &b.iota(bb, &b.iota(c, x))), &(f * rat(1, 24)));
        }
        out
    };
    for (k, list) in invariants(b, max_degree).into_iter().enumerate() {
        for x in list {
            let sq = twisted(&twisted(&x));
            if !sq.is_zero() {
                return Verdict::fail(format!("degree {k}: {}", x.render()), sq.render());
            }
        }
    }
    Verdict::Pass
}

// ---------------------------------------------------------------------------
// The sphere example
// ---------------------------------------------------------------------------

/// One step of the sphere suite.
#[derive(Clone, Debug, Serialize)]
pub struct SphereStep {
    pub id: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

/// Outcome of the sphere suite.
#[derive(Clone, Debug, Serialize)]
pub struct SphereReport {
    pub s: i64,
    pub omega_sign: i64,
    pub steps: Vec<SphereStep>,
    /// `c` in `Q(λ) = u·u + c`, when step (v) identifies it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duflo_constant: Option<String>,
}

impl SphereReport {
    pub fn all_pass(&self) -> bool {
        self.steps.iter().all(|s| s.verdict.is_pass())
    }
}

fn sphere_elem(terms: &[([u16; 3], u32, Rational)]) -> Elem {
    let mut e = Elem::zero(Tag::Sphere, 3);
    for (s, ext, c) in terms {
        e.add_term(Mono::new(s.to_vec(), *ext), c.clone());
    }
    e
}

/// `½ f_abc n^a dn^b dn^c`.
pub fn area_form(alg: &LieAlgebra) -> Elem {
    let mut out = Elem::zero(Tag::Sphere, 3);
    for (a, b, c, f) in alg.nonzero() {
        let w = sym_mul(a, &ext_mul(b, &ext_mul(c, &Elem::one(Tag::Sphere, 3))));
        out.add_scaled(&w, &(f * rat(1, 2)));
    }
    sphere_nf(&out)
}

/// `1⊗area + σ Σ_a g_a ⊗ n^a` where `g` is `v` or `u`.
fn omega_like(cartan: &Cartan, alg: &LieAlgebra, sigma: i64) -> Tensor {
    let n = alg.dim();
    let mut t = cartan.pure(&Elem::one(Tag::Sym, n), &area_form(alg));
    for a in 0..n {
        let mut s = [0u16; 3];
        s[a] = 1;
        let na = sphere_elem(&[(s, 0, int(1))]);
        t.add_scaled(&cartan.pure(&Elem::sym_gen(Tag::Sym, n, a), &na), &int(sigma));
    }
    t
}

/// `Σ f_abc g^a ⊗ n^b dn^c`.
fn exact_potential(cartan: &Cartan, alg: &LieAlgebra) -> Tensor {
    let n = alg.dim();
    let mut t = cartan.zero();
    for (a, b, c, f) in alg.nonzero() {
        let mut s = [0u16; 3];
        s[b] = 1;
        let form = sphere_nf(&sphere_elem(&[(s, 1 << c, int(1))]));
        t.add_scaled(&cartan.pure(&Elem::sym_gen(Tag::Sym, n, a), &form), f);
    }
    t
}

fn step(id: &str, verdict: Verdict, value: Option<String>) -> SphereStep {
    SphereStep { id: id.into(), verdict, value }
}

/// The equivariant sphere computation, for a rotation sign `s` and
/// `ω = ½ f n dn dn + σ n·v`:
/// (i) `d_G ω = 0` with `ω` invariant;
/// (ii) `ω² = λ + κ d_G(f v n dn)` for some `κ = ±1`;
/// (iii) `Q(ω) = ½ f n dn dn + σ n·u`;
/// (iv) `⅛ Σ (ι_a ι_b Q(ω))² = ¼`;
/// (v) `Q(ω)⊙Q(ω) - κ d_G(f u n dn) = Duf(λ)`, a pure `U(g)` element.
pub fn sphere_suite(ctx: &DufloContext, s: i64, omega_sign: i64) -> Result<SphereReport> {
    let alg = &ctx.alg;
    if alg.dim() != 3 {
        return Err(Error::Invalid("the sphere suite needs su2".into()));
    }
    let sphere = SphereGda::new(alg, s, 4)?;
    let comm = Cartan::new(Model::Comm, alg, &sphere);
    let nc = Cartan::new(Model::Nc, alg, &sphere);
    let omega = omega_like(&comm, alg, omega_sign);
    let mut steps = Vec::new();
    let mut report = SphereReport { s, omega_sign, steps: vec![], duflo_constant: None };

    // (i)
    let v1 = if !comm.is_invariant(&omega) {
        Verdict::fail("omega", "not invariant")
    } else {
        let d = comm.d_unchecked(&omega);
        Verdict::check_eq("d_G omega", &d, &comm.zero())
    };
    let closed = v1.is_pass();
    steps.push(step("i", v1, Some(omega.render())));
    if !closed {
        report.steps = steps;
        return Ok(report);
    }

    // (ii)
    let lam = comm.pure(&lambda(3), &sphere.unit());
    let sq = comm.mul(&omega, &omega);
    let d_pot = comm.d_unchecked(&exact_potential(&comm, alg));
    let diff = sq.plus(&lam.scaled(&int(-1)));
    let kappa = [1i64, -1].into_iter().find(|&k| diff.plus(&d_pot.scaled(&int(-k))).is_zero());
    match kappa {
        Some(k) => steps.push(step("ii", Verdict::Pass, Some(format!("kappa = {k}")))),
        None => steps.push(step("ii", Verdict::fail("omega^2 - lambda", diff.render()), None)),
    }

    // (iii)
    let q = q_cartan_unchecked(ctx, &sphere, &omega)?;
    let expected = relabel_left(&omega_like(&comm, alg, omega_sign), Tag::Env);
    steps.push(step("iii", Verdict::check_eq("Q(omega)", &q, &expected), Some(q.render())));

    // (iv)
    let mut scalar = nc.zero();
    for a in 0..3 {
        for b in 0..3 {
            let right = sphere.kind();
            let ii = q.map_right(0, |m| sphere.iota(a, &sphere.iota(b, &mono_elem(right, m))));
            scalar = scalar.plus(&nc.mul(&ii, &ii).scaled(&rat(1, 8)));
        }
    }
    let quarter = nc.pure(&Elem::scalar(Tag::Env, 3, rat(1, 4)), &sphere.unit());
    steps.push(step("iv", Verdict::check_eq("double contraction", &scalar, &quarter), Some(scalar.render())));

    // (v)
    let k = kappa.unwrap_or(1);
    let prod = nc.odot_unchecked(&q, &q);
    let pot_u = relabel_left(&exact_potential(&comm, alg), Tag::Env);
    let rest = prod.plus(&nc.d_unchecked(&pot_u).scaled(&int(-k)));
    let pure_u = rest.right_scalar_part();
    let only_u = nc.pure(&pure_u, &sphere.unit());
    let duf = crate::duflo::duflo_map(ctx, &lambda(3))?;
    let c = pure_u.constant();
    if rest != only_u {
        steps.push(step("v", Verdict::fail("Q(omega).Q(omega)", rest.render()), None));
    } else {
        report.duflo_constant = Some(crate::ring::fmt_rational(&c));
        steps.push(step("v", Verdict::check_eq("Duf(lambda)", &pure_u, &duf), Some(pure_u.render())));
    }
    report.steps = steps;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liedata::{abelian, su2};
    use crate::weil::Complex;

    fn leak<T: Gda + 'static>(g: T) -> &'static dyn Gda {
        Box::leak(Box::new(g))
    }

    #[test]
    fn invariant_examples() {
        let g = su2();
        let ext = invariants(&ExtGda::new(&g), 3);
        assert_eq!(ext.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 0, 0, 1]);
        assert_eq!(ext[3][0].render(), "y1*y2*y3");
        assert_eq!(invariants(&Trivial::new(&g), 2).iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 0, 0]);
        let sym = invariants(&SymGda::new(&g), 4);
        assert_eq!(sym.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 0, 0, 0, 1]);
        assert_eq!(sym[4][0].render(), "v1^2 + v2^2 + v3^2");
    }

    #[test]
    fn instances_satisfy_axioms() {
        let g = su2();
        assert!(gda_axioms(&g, &Trivial::new(&g), 2).is_pass());
        assert!(gda_axioms(&g, &ExtGda::new(&g), 3).is_pass());
        assert!(gda_axioms(&g, &WeilGda::new(&g), 3).is_pass());
        assert!(gda_axioms(&g, &SphereGda::new(&g, -1, 2).unwrap(), 2).is_pass());
        assert!(!gda_axioms(&g, &SphereGda::new(&g, 1, 2).unwrap(), 2).is_pass());
        let ops = gda_ops(leak(ExtGda::new(&g)));
        let basis: Vec<Elem> = (0..=3).flat_map(|k| ExtGda::new(&g).basis(k)).collect();
        assert!(crate::weil::all_pass(&crate::weil::g_relations(&g, &ops, &basis)).is_pass());
    }

    #[test]
    fn sphere_normal_form() {
        let g = su2();
        let sp = SphereGda::new(&g, -1, 3).unwrap();
        // n·n reduces to 1, n·dn to 0
        let nn = sphere_elem(&[([2, 0, 0], 0, int(1)), ([0, 2, 0], 0, int(1)), ([0, 0, 2], 0, int(1))]);
        assert_eq!(sphere_nf(&nn), sp.unit());
        let ndn = sphere_elem(&[([1, 0, 0], 1, int(1)), ([0, 1, 0], 2, int(1)), ([0, 0, 1], 4, int(1))]);
        assert!(sphere_nf(&ndn).is_zero());
        assert!(sp.d(&nn).is_zero());
        for k in 0..=2 {
            for b in sp.basis(k) {
                assert_eq!(sphere_nf(&b), b);
            }
        }
        assert_eq!(sp.basis(0).len(), 16);
        for a in 0..3 {
            assert!(sp.lie(a, &nn).is_zero());
        }
    }

    #[test]
    fn cartan_d_examples() {
        let g = su2();
        let ext = ExtGda::new(&g);
        let c = Cartan::new(Model::Comm, &g, &ext);
        let one = c.pure(&Elem::one(Tag::Sym, 3), &ext.unit());
        assert!(c.d(&one).unwrap().is_zero());
        assert!(c.d_squared_check(5).is_pass());
        let nc = Cartan::new(Model::Nc, &g, &ext);
        assert!(nc.d_squared_check(4).is_pass());
        let not_inv = c.pure(&Elem::sym_gen(Tag::Sym, 3, 0), &ext.unit());
        assert!(matches!(c.d(&not_inv), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn odot_examples() {
        let g = su2();
        let ext = ExtGda::new(&g);
        let nc = Cartan::new(Model::Nc, &g, &ext);
        let top = Elem::from_mono(Tag::Ext, 3, Mono::new(vec![0; 3], 7), int(1));
        let xi = nc.pure(&Elem::one(Tag::Env, 3), &top);
        let one = nc.pure(&Elem::one(Tag::Env, 3), &ext.unit());
        assert_eq!(nc.odot(&one, &xi).unwrap(), xi);
        let cas = crate::pbw::casimir(&g);
        let left = nc.pure(&cas, &ext.unit());
        assert_eq!(nc.odot(&left, &xi).unwrap(), nc.pure(&cas, &top));
        // ⊙ on ∧g* is the Clifford product
        let y = |a| Elem::ext_gen(Tag::Ext, 3, a);
        assert_eq!(nc.odot_b(&y(0), &y(0)), Elem::scalar(Tag::Ext, 3, rat(1, 2)));
    }

    #[test]
    fn weil_vs_cartan_small() {
        let g = su2();
        assert!(weil_vs_cartan_check(Model::Comm, &Trivial::new(&g), &g, 4).is_pass());
        assert!(weil_vs_cartan_check(Model::Comm, &ExtGda::new(&g), &g, 4).is_pass());
        assert!(weil_vs_cartan_check(Model::Nc, &ExtGda::new(&g), &g, 4).is_pass());
    }

    #[test]
    fn q_cartan_examples() {
        let g = su2();
        let ctx = DufloContext::new(&g, 4);
        let ext = ExtGda::new(&g);
        let comm = Cartan::new(Model::Comm, &g, &ext);
        let lam = comm.pure(&lambda(3), &ext.unit());
        let q = q_cartan(&ctx, &ext, &lam).unwrap();
        let duf = crate::duflo::duflo_map(&ctx, &lambda(3)).unwrap();
        assert_eq!(q, Tensor::pure(&duf, &ext.unit()));
        assert!(q_cartan_chain_check(&ctx, &ext, 4).unwrap().is_pass());
    }

    #[test]
    fn cohomology_examples() {
        let g = su2();
        let t = equivariant_cohomology(Model::Comm, &Trivial::new(&g), &g, 4).unwrap();
        assert_eq!(t.values, vec![1, 0, 0, 0, 1]);
        let w = equivariant_cohomology(Model::Comm, &WeilGda::new(&g), &g, 3).unwrap();
        assert_eq!(&w.values[..3], &[1, 0, 0]);
        assert!(twisted_d_check(&ExtGda::new(&g), &g, 3).is_pass());
        assert!(twisted_d_check(&Trivial::new(&g), &g, 0).is_pass());
        let _ = (abelian(1), Complex::ExtKoszul);
    }

    #[test]
    fn sphere_suite_resolved_sign() {
        let ctx = DufloContext::new(&su2(), 4);
        let r = sphere_suite(&ctx, -1, -1).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.duflo_constant.as_deref(), Some("-1/4"));
        for (s, o) in [(1, 1), (1, -1), (-1, 1)] {
            assert!(!sphere_suite(&ctx, s, o).unwrap().all_pass(), "s={s} omega={o}");
        }
    }
}
