//! The commutative Weil algebra `Sg* ⊗ ∧g*` and the non-commutative Weil
//! algebra `U(g) ⊗ Cl(g)` as G-differential algebras.

use std::sync::Arc;

use num_traits::Zero;

use crate::cartan::Gda;
use crate::clifford::{ad_gamma, g_and_gamma, left_mul_gen};
use crate::liedata::LieAlgebra;
use crate::multivec::{
    basis, ext_mul, iota, koszul_d, lie, lie_sym, monomials_of_degree, mul_unchecked, op_equal,
    op_is_zero, sym_mul, sym_partial, Elem, LinOp, Mono, Tag, Tensor, Vector, Verdict,
};
use crate::pbw::{ad_u, casimir, u_mul_mono};
use crate::ring::{int, rat, Rational};

/// Cartan's differential `d = y^a L_a^{Sg} + (v^a - ½ f_abc y^b y^c) ι_a`.
pub fn weil_d(alg: &LieAlgebra, w: &Elem) -> Elem {
    let mut out = koszul_d(alg, w);
    for a in 0..alg.dim() {
        out = &out + &ext_mul(a, &lie_sym(alg, a, w));
        out = &out + &sym_mul(a, &iota(a, w));
    }
    out
}

/// Left multiplication by `u_a` on the enveloping factor.
pub fn u_left(alg: &LieAlgebra, a: usize, w: &Elem) -> Elem {
    u_side(alg, a, w, true)
}

/// Right multiplication by `u_a` on the enveloping factor.
pub fn u_right(alg: &LieAlgebra, a: usize, w: &Elem) -> Elem {
    u_side(alg, a, w, false)
}

fn u_side(alg: &LieAlgebra, a: usize, w: &Elem, left: bool) -> Elem {
    let n = w.n();
    let mut ua = vec![0u16; n];
    ua[a] = 1;
    let mut out = Elem::zero(w.tag(), n);
    for (m, c) in w.terms() {
        let p = if left { u_mul_mono(alg, &ua, &m.sym) } else { u_mul_mono(alg, &m.sym, &ua) };
        for (pm, pc) in p.terms() {
            out.add_term(Mono::new(pm.sym.clone(), m.ext), pc * c);
        }
    }
    out
}

/// The cubic Dirac element `𝔇 = u_a x_a + γ`.
pub fn dirac(alg: &LieAlgebra) -> Elem {
    let n = alg.dim();
    let (_, gamma) = g_and_gamma(alg);
    let mut out = gamma.retag(Tag::Ncw);
    for a in 0..n {
        let mut s = vec![0u16; n];
        s[a] = 1;
        out.add_term(Mono::new(s, 1 << a), int(1));
    }
    out
}

/// `𝔇²` by direct multiplication in `U(g) ⊗ Cl(g)`.
pub fn dirac_square(alg: &LieAlgebra) -> Elem {
    let d = dirac(alg);
    mul_unchecked(alg, &d, &d)
}

/// `𝔇² = ½ u_a u_a + γ²` with `γ² = -f·f/48`.
pub fn dirac_square_formula(alg: &LieAlgebra) -> Elem {
    let n = alg.dim();
    let mut out = casimir(alg).retag(Tag::Ncw).scale(&rat(1, 2));
    out.add_term(Mono::one(n), alg.f_norm2() * rat(-1, 48));
    out
}

/// `ad(𝔇)` as a super-commutator.
pub fn nc_weil_d_commutator(alg: &LieAlgebra, w: &Elem) -> Elem {
    let d = dirac(alg);
    let (even, odd) = w.by_parity();
    let mut out = &mul_unchecked(alg, &d, &even) - &mul_unchecked(alg, &even, &d);
    out = &out + &mul_unchecked(alg, &d, &odd);
    &out + &mul_unchecked(alg, &odd, &d)
}

/// `y_a (ad u_a ⊗ 1) + (½(u_a^L + u_a^R) - ½ f_abc y_b y_c) ι_a - 1/24 f_abc ι_a ι_b ι_c`.
pub fn nc_weil_d(alg: &LieAlgebra, w: &Elem) -> Elem {
    let mut out = Elem::zero(Tag::Ncw, w.n());
    for a in 0..alg.dim() {
        out = &out + &ext_mul(a, &ad_u_factor(alg, a, w));
        let ia = iota(a, w);
        if ia.is_zero() {
            continue;
        }
        out.add_scaled(&u_left(alg, a, &ia), &rat(1, 2));
        out.add_scaled(&u_right(alg, a, &ia), &rat(1, 2));
        for (b, c, f) in alg.brackets(a) {
            out.add_scaled(&ext_mul(*b, &ext_mul(*c, &ia)), &(f * rat(-1, 2)));
            out.add_scaled(&iota(a, &iota(*b, &iota(*c, w))), &(f * rat(-1, 24)));
        }
    }
    out
}

/// `ad(u_a) ⊗ 1` on `U(g) ⊗ Cl(g)`.
fn ad_u_factor(alg: &LieAlgebra, a: usize, w: &Elem) -> Elem {
    let n = w.n();
    let mut out = Elem::zero(Tag::Ncw, n);
    for (m, c) in w.terms() {
        let u = Elem::from_mono(Tag::Env, n, Mono::new(m.sym.clone(), 0), c.clone());
        for (um, uc) in ad_u(alg, a, &u).terms() {
            out.add_term(Mono::new(um.sym.clone(), m.ext), uc.clone());
        }
    }
    out
}

/// `ad(x_a)` on the non-commutative Weil algebra, by multiplication.
pub fn ad_x(alg: &LieAlgebra, a: usize, w: &Elem) -> Elem {
    let x = Elem::ext_gen(Tag::Ncw, w.n(), a);
    let (even, odd) = w.by_parity();
    let mut out = &mul_unchecked(alg, &x, &even) - &mul_unchecked(alg, &even, &x);
    out = &out + &mul_unchecked(alg, &x, &odd);
    &out + &mul_unchecked(alg, &odd, &x)
}

/// `ad(u_a + g_a)` on the non-commutative Weil algebra, by multiplication.
pub fn ad_u_plus_g(alg: &LieAlgebra, a: usize, w: &Elem) -> Elem {
    let (gs, _) = g_and_gamma(alg);
    let mut e = gs[a].retag(Tag::Ncw);
    e = &e + &Elem::sym_gen(Tag::Ncw, w.n(), a);
    &mul_unchecked(alg, &e, w) - &mul_unchecked(alg, w, &e)
}

/// Horizontal projection `Π_β ι_β y^β` (or `ι_β x^L_β` on the
/// non-commutative side).
pub fn p_hor(w: &Elem) -> Elem {
    let mut out = w.clone();
    for b in 0..w.n() {
        let lifted = if w.tag() == Tag::Ncw { left_mul_gen(b, &out) } else { ext_mul(b, &out) };
        out = iota(b, &lifted);
    }
    out
}

// ---------------------------------------------------------------------------
// Relation suites
// ---------------------------------------------------------------------------

/// `ι_a`, `L_a` and `d` on one space.
pub struct GOps<E> {
    pub iota: Vec<LinOp<E>>,
    pub lie: Vec<LinOp<E>>,
    pub d: LinOp<E>,
}

fn elem_ops(alg: &LieAlgebra, d: impl Fn(&LieAlgebra, &Elem) -> Elem + Send + Sync + 'static) -> GOps<Elem> {
    let alg = Arc::new(alg.clone());
    let n = alg.dim();
    let iotas = (0..n).map(|a| LinOp::new(1, move |w: &Elem| iota(a, w))).collect();
    let lies = (0..n)
        .map(|a| {
            let alg = alg.clone();
            LinOp::new(0, move |w: &Elem| lie(&alg, a, w))
        })
        .collect();
    let d = LinOp::new(1, move |w: &Elem| d(&alg, w));
    GOps { iota: iotas, lie: lies, d }
}

/// Operators on `∧g*` with the Koszul differential.
pub fn ext_ops(alg: &LieAlgebra) -> GOps<Elem> {
    elem_ops(alg, koszul_d)
}

/// Operators on `W_G`.
pub fn weil_ops(alg: &LieAlgebra) -> GOps<Elem> {
    elem_ops(alg, weil_d)
}

/// Operators on the non-commutative Weil algebra.
pub fn ncw_ops(alg: &LieAlgebra) -> GOps<Elem> {
    elem_ops(alg, nc_weil_d)
}

/// The relations `d² = 0`, `[ι_a,d] = L_a`, `[L_a,d] = 0`, `[ι_a,ι_b] = 0`,
/// `[L_a,ι_b] = f_abc ι_c`, each with its verdict.
pub fn g_relations<E: Vector>(alg: &LieAlgebra, ops: &GOps<E>, basis: &[E]) -> Vec<(&'static str, Verdict)> {
    let n = alg.dim();
    let d = &ops.d;
    let mut out = vec![("d^2=0", op_is_zero(&d.compose(d), basis))];
    let mut v = Verdict::Pass;
    for a in 0..n {
        v = v.and(|| op_equal(&LinOp::supercommutator(&ops.iota[a], d), &ops.lie[a], basis));
    }
    out.push(("[i_a,d]=L_a", v));
    let mut v = Verdict::Pass;
    for a in 0..n {
        v = v.and(|| op_is_zero(&LinOp::supercommutator(&ops.lie[a], d), basis));
    }
    out.push(("[L_a,d]=0", v));
    let mut v = Verdict::Pass;
    for a in 0..n {
        for b in a..n {
            v = v.and(|| op_is_zero(&LinOp::supercommutator(&ops.iota[a], &ops.iota[b]), basis));
        }
    }
    out.push(("[i_a,i_b]=0", v));
    let mut v = Verdict::Pass;
    for a in 0..n {
        for b in 0..n {
            let mut rhs = LinOp::zero(1);
            for (bb, c, f) in alg.brackets(a) {
                if *bb == b {
                    rhs = rhs.plus(&ops.iota[*c].scale(f.clone()));
                }
            }
            v = v.and(|| op_equal(&LinOp::supercommutator(&ops.lie[a], &ops.iota[b]), &rhs, basis));
        }
    }
    out.push(("[L_a,i_b]=f_abc i_c", v));
    out
}

/// Folds a list of verdicts into the first failure.
pub fn all_pass(list: &[(&'static str, Verdict)]) -> Verdict {
    for (name, v) in list {
        if let Verdict::Fail { input, residual } = v {
            return Verdict::fail(format!("{name} at {input}"), residual.clone());
        }
    }
    Verdict::Pass
}

/// Agreement of the two formulas for the non-commutative differential.
pub fn nc_weil_d_two_routes(alg: &LieAlgebra, max_degree: u32) -> Verdict {
    let a1 = Arc::new(alg.clone());
    let a2 = a1.clone();
    let lhs = LinOp::new(1, move |w: &Elem| nc_weil_d(&a1, w));
    let rhs = LinOp::new(1, move |w: &Elem| nc_weil_d_commutator(&a2, w));
    op_equal(&lhs, &rhs, &basis(Tag::Ncw, alg.dim(), max_degree))
}

/// `ι_a = ad(x_a)` and `L_a = ad(u_a + g_a)` on the non-commutative side.
pub fn inner_derivations_check(alg: &LieAlgebra, max_degree: u32) -> Verdict {
    let b = basis(Tag::Ncw, alg.dim(), max_degree);
    let shared = Arc::new(alg.clone());
    let mut v = Verdict::Pass;
    for a in 0..alg.dim() {
        let (s1, s2, s3) = (shared.clone(), shared.clone(), shared.clone());
        v = v
            .and(|| op_equal(&LinOp::new(1, move |w: &Elem| ad_x(&s1, a, w)), &LinOp::new(1, move |w: &Elem| iota(a, w)), &b))
            .and(|| {
                op_equal(&LinOp::new(0, move |w: &Elem| ad_u_plus_g(&s2, a, w)), &LinOp::new(0, move |w: &Elem| lie(&s3, a, w)), &b)
            });
    }
    v
}

/// `gr(d_NC w) = d_W(gr w)` on filtration-homogeneous basis monomials.
pub fn gr_check(alg: &LieAlgebra, max_degree: u32) -> Verdict {
    let n = alg.dim();
    let list: Vec<Mono> = (0..=max_degree).flat_map(|k| monomials_of_degree(Tag::Ncw, n, k)).collect();
    for m in list {
        let w = Elem::from_mono(Tag::Ncw, n, m.clone(), int(1));
        let top = m.wdeg() + 1;
        let lhs = nc_weil_d(alg, &w).filter(|x| x.wdeg() == top).retag(Tag::W);
        let rhs = weil_d(alg, &w.retag(Tag::W));
        let v = Verdict::check_eq(&w.render(), &lhs, &rhs);
        if !v.is_pass() {
            return v;
        }
    }
    Verdict::Pass
}

// ---------------------------------------------------------------------------
// τ₀ conjugation
// ---------------------------------------------------------------------------

/// `X = -½ f_abc ∂_{v^a} y^b y^c`, so that `τ₀ = exp(X)`.
pub fn tau0_generator(alg: &LieAlgebra, w: &Elem) -> Elem {
    let mut out = Elem::zero(w.tag(), w.n());
    for (a, b, c, f) in alg.nonzero() {
        out.add_scaled(&sym_partial(a, &ext_mul(b, &ext_mul(c, w))), &(f * rat(-1, 2)));
    }
    out
}

/// `τ₀^{-1} d τ₀ = v^a ι_a`, `τ₀^{-1} ι_a τ₀ = ι_a - f_abc ∂_{v^c} y^b`,
/// and `L_a = -f_abc v^b ∂_{v^c}` on `Sg*`.
pub fn tau0_conj_check(alg: &LieAlgebra, max_degree: u32) -> Verdict {
    let n = alg.dim();
    let shared = Arc::new(alg.clone());
    let s = shared.clone();
    let x = LinOp::new(0, move |w: &Elem| tau0_generator(&s, w));
    let tau = LinOp::exp_nilpotent(&x);
    let tau_inv = LinOp::exp_nilpotent(&x.scale(int(-1)));
    let s = shared.clone();
    let d = LinOp::new(1, move |w: &Elem| weil_d(&s, w));
    let rhs = LinOp::new(1, move |w: &Elem| {
        let mut out = Elem::zero(w.tag(), w.n());
        for a in 0..n {
            out = &out + &sym_mul(a, &iota(a, w));
        }
        out
    });
    let b = basis(Tag::W, n, max_degree);
    let mut v = op_equal(&tau_inv.compose(&d).compose(&tau), &rhs, &b);
    for e in 0..n {
        let s = shared.clone();
        let rhs = LinOp::new(1, move |w: &Elem| {
            let mut out = iota(e, w);
            for (b, c, f) in s.brackets(e) {
                out.add_scaled(&sym_partial(*c, &ext_mul(*b, w)), &-f.clone());
            }
            out
        });
        let lhs = tau_inv.compose(&LinOp::new(1, move |w: &Elem| iota(e, w))).compose(&tau);
        v = v.and(|| op_equal(&lhs, &rhs, &b));
    }
    v.and(|| lie_dictionary_check(alg, max_degree, int(-1)))
}

/// Compares `L_a` on `Sg*` with `σ f_abc v^b ∂_{v^c}`.
pub fn lie_dictionary_check(alg: &LieAlgebra, max_degree: u32, sign: Rational) -> Verdict {
    let n = alg.dim();
    let b = basis(Tag::Sym, n, max_degree);
    let shared = Arc::new(alg.clone());
    let mut v = Verdict::Pass;
    for a in 0..n {
        let (s1, s2, sign) = (shared.clone(), shared.clone(), sign.clone());
        let lhs = LinOp::new(0, move |w: &Elem| lie(&s1, a, w));
        let rhs = LinOp::new(0, move |w: &Elem| {
            let mut out = Elem::zero(w.tag(), w.n());
            for (bb, c, f) in s2.brackets(a) {
                out.add_scaled(&sym_mul(*bb, &sym_partial(*c, w)), &(f * &sign));
            }
            out
        });
        v = v.and(|| op_equal(&lhs, &rhs, &b));
    }
    v
}

// ---------------------------------------------------------------------------
// Kalkman operators
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `W_G ⊗ B` with `φ = exp(y^a ⊗ ι_a)`.
    W,
    /// `𝒲_G ⊗ B` with `φ = exp(x^L_a ⊗ ι_a)`.
    Nc,
}

impl Side {
    pub fn tag(self) -> Tag {
        match self {
            Side::W => Tag::W,
            Side::Nc => Tag::Ncw,
        }
    }
}

/// Kalkman operators on `Weil ⊗ B`.
pub struct Kalkman<'a> {
    pub side: Side,
    pub alg: &'a LieAlgebra,
    pub b: &'a dyn Gda,
}

fn mono_elem(kind: (Tag, usize), m: &Mono) -> Elem {
    Elem::from_mono(kind.0, kind.1, m.clone(), int(1))
}

impl<'a> Kalkman<'a> {
    pub fn new(side: Side, alg: &'a LieAlgebra, b: &'a dyn Gda) -> Self {
        Kalkman { side, alg, b }
    }

    fn left(&self) -> (Tag, usize) {
        (self.side.tag(), self.alg.dim())
    }

    /// `K = Σ_a e_a ⊗ ι_a`, `e_a = y^a` or `x^L_a`.
    pub fn k(&self, t: &Tensor) -> Tensor {
        let left = self.left();
        let right = self.b.kind();
        let mut out = Tensor::zero(left, right);
        for a in 0..self.alg.dim() {
            let part = t.map2(
                left,
                1,
                |m| {
                    let e = mono_elem(left, m);
                    match self.side {
                        Side::W => ext_mul(a, &e),
                        Side::Nc => left_mul_gen(a, &e),
                    }
                },
                |m| self.b.iota(a, &mono_elem(right, m)),
            );
            out.add_scaled(&part, &int(1));
        }
        out
    }

    fn exp_k(&self, t: &Tensor, sign: i64) -> Tensor {
        let mut acc = t.clone();
        let mut term = t.clone();
        for k in 1i64.. {
            term = self.k(&term).scaled(&rat(sign, k));
            if term.is_zero() {
                break;
            }
            acc = acc.plus(&term);
        }
        acc
    }

    pub fn phi(&self, t: &Tensor) -> Tensor {
        self.exp_k(t, 1)
    }

    pub fn phi_inv(&self, t: &Tensor) -> Tensor {
        self.exp_k(t, -1)
    }

    pub fn iota_left(&self, a: usize, t: &Tensor) -> Tensor {
        t.map_left(self.left(), |m| iota(a, &mono_elem(self.left(), m)))
    }

    pub fn iota_total(&self, a: usize, t: &Tensor) -> Tensor {
        let right = self.b.kind();
        let r = t.map_right(1, |m| self.b.iota(a, &mono_elem(right, m)));
        self.iota_left(a, t).plus(&r)
    }

    pub fn lie_total(&self, a: usize, t: &Tensor) -> Tensor {
        let right = self.b.kind();
        let l = t.map_left(self.left(), |m| lie(self.alg, a, &mono_elem(self.left(), m)));
        l.plus(&t.map_right(0, |m| self.b.lie(a, &mono_elem(right, m))))
    }

    pub fn d_total(&self, t: &Tensor) -> Tensor {
        let right = self.b.kind();
        let l = t.map_left(self.left(), |m| {
            let e = mono_elem(self.left(), m);
            match self.side {
                Side::W => weil_d(self.alg, &e),
                Side::Nc => nc_weil_d(self.alg, &e),
            }
        });
        l.plus(&t.map_right(1, |m| self.b.d(&mono_elem(right, m))))
    }

    /// Pure tensors of basis elements with total degree `≤ max_degree`.
    pub fn basis(&self, max_degree: u32) -> Vec<Tensor> {
        (0..=max_degree).flat_map(|k| self.basis_of_degree(k)).collect()
    }

    pub fn basis_of_degree(&self, k: u32) -> Vec<Tensor> {
        let n = self.alg.dim();
        let mut out = Vec::new();
        for j in 0..=k {
            let right = self.b.basis(j);
            if right.is_empty() {
                continue;
            }
            for m in monomials_of_degree(self.side.tag(), n, k - j) {
                let l = Elem::from_mono(self.side.tag(), n, m, int(1));
                for r in &right {
                    out.push(Tensor::pure(&l, r));
                }
            }
        }
        out
    }

    /// `φ ∘ ι_a^{tot} ∘ φ^{-1} = ι_a ⊗ 1` and `φ^{-1} φ = 1` on the basis.
    pub fn conj_check(&self, max_degree: u32) -> Verdict {
        let basis = self.basis(max_degree);
        for t in &basis {
            let v = Verdict::check_eq(&t.render(), &self.phi_inv(&self.phi(t)), t);
            if !v.is_pass() {
                return v;
            }
        }
        for a in 0..self.alg.dim() {
            let found = crate::par::find_first(&basis, |t| {
                let lhs = self.phi(&self.iota_total(a, &self.phi_inv(t)));
                let diff = lhs.plus(&self.iota_left(a, t).scaled(&int(-1)));
                (!diff.is_zero()).then(|| (format!("i_{} on {}", a + 1, t.render()), diff.render()))
            });
            if let Some((input, residual)) = found {
                return Verdict::Fail { input, residual };
            }
        }
        Verdict::Pass
    }
}

// ---------------------------------------------------------------------------
// Homology
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Complex {
    /// `W_G` with Cartan's differential, truncated.
    WFull,
    /// `Cl(g)` with `ad(γ)`, graded by parity.
    ClAdGamma,
    /// `∧g*` with the Koszul differential.
    ExtKoszul,
}

/// Betti numbers with their degree labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Betti {
    pub labels: Vec<String>,
    pub values: Vec<usize>,
}

fn rank_of(images: &[Elem]) -> usize {
    crate::multivec::rank_of_elems(images)
}

fn graded_betti(spaces: &[Vec<Elem>], d: impl Fn(&Elem) -> Elem + Sync + Send) -> Vec<usize> {
    let ranks: Vec<usize> = spaces.iter().map(|s| rank_of(&crate::par::map(s, &d))).collect();
    (0..spaces.len())
        .map(|k| spaces[k].len() - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 })
        .collect()
}

/// Homology by exact ranks. For `W_G` the degrees `0..max_degree-1` are
/// reported; for `Cl(g)` the two parities.
pub fn homology(alg: &LieAlgebra, complex: Complex, max_degree: u32) -> Betti {
    let n = alg.dim();
    let by_degree = |tag: Tag, top: u32| -> Vec<Vec<Elem>> {
        (0..=top)
            .map(|k| monomials_of_degree(tag, n, k).into_iter().map(|m| Elem::from_mono(tag, n, m, int(1))).collect())
            .collect()
    };
    match complex {
        Complex::ExtKoszul => {
            let spaces = by_degree(Tag::Ext, n as u32);
            let values = graded_betti(&spaces, |w| koszul_d(alg, w));
            Betti { labels: (0..=n).map(|k| k.to_string()).collect(), values }
        }
        Complex::WFull => {
            let spaces = by_degree(Tag::W, max_degree);
            let mut values = graded_betti(&spaces, |w| weil_d(alg, w));
            values.pop();
            Betti { labels: (0..max_degree).map(|k| k.to_string()).collect(), values }
        }
        Complex::ClAdGamma => {
            let all = basis(Tag::Cl, n, n as u32);
            let (even, odd): (Vec<Elem>, Vec<Elem>) = all.into_iter().partition(|e| e.parity() == Some(0));
            let d = |w: &Elem| ad_gamma(alg, w);
            let r_even = rank_of(&crate::par::map(&even, d));
            let r_odd = rank_of(&crate::par::map(&odd, d));
            Betti {
                labels: vec!["even".into(), "odd".into()],
                values: vec![even.len() - r_even - r_odd, odd.len() - r_odd - r_even],
            }
        }
    }
}

/// `H = -24/(f·f) γ` satisfies `ad(γ) H + H ad(γ) = id` on `Cl(g)` (left
/// multiplication by `H`). Needs `f ≠ 0`.
pub fn cl_homotopy_check(alg: &LieAlgebra) -> Verdict {
    let n = alg.dim();
    let norm = alg.f_norm2();
    if norm.is_zero() {
        return Verdict::fail("abelian", "no homotopy");
    }
    let (_, gamma) = g_and_gamma(alg);
    let h = gamma.scale(&(rat(-24, 1) / norm));
    for w in basis(Tag::Cl, n, n as u32) {
        let hw = crate::clifford::cl_mul_unchecked(&h, &w);
        let lhs = &ad_gamma(alg, &hw) + &crate::clifford::cl_mul_unchecked(&h, &ad_gamma(alg, &w));
        let v = Verdict::check_eq(&w.render(), &lhs, &w);
        if !v.is_pass() {
            return v;
        }
    }
    Verdict::Pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{ExtGda, WeilGda};
    use crate::liedata::{abelian, su2};

    #[test]
    fn weil_d_examples() {
        let g = su2();
        let y1 = Elem::ext_gen(Tag::W, 3, 0);
        let v1 = Elem::sym_gen(Tag::W, 3, 0);
        assert_eq!(weil_d(&g, &y1).render(), "v1 - y2*y3");
        assert_eq!(weil_d(&g, &v1).render(), "v2*y3 - v3*y2");
        assert!(weil_d(&g, &Elem::one(Tag::W, 3)).is_zero());
    }

    #[test]
    fn dirac_examples() {
        let g = su2();
        assert_eq!(dirac_square(&g), dirac_square_formula(&g));
        assert_eq!(dirac_square(&g).render(), "1/2*u1^2 + 1/2*u2^2 + 1/2*u3^2 - 1/8");
        let a = abelian(2);
        assert_eq!(dirac_square(&a).render(), "1/2*u1^2 + 1/2*u2^2");
    }

    #[test]
    fn nc_weil_d_examples() {
        let g = su2();
        let x1 = Elem::ext_gen(Tag::Ncw, 3, 0);
        let u1 = Elem::sym_gen(Tag::Ncw, 3, 0);
        assert_eq!(nc_weil_d(&g, &x1).render(), "u1 - x2*x3");
        assert_eq!(nc_weil_d(&g, &u1).render(), "u2*x3 - u3*x2");
        assert!(nc_weil_d(&g, &nc_weil_d(&g, &x1)).is_zero());
        assert!(nc_weil_d_two_routes(&g, 4).is_pass());
    }

    #[test]
    fn horizontal_projection() {
        let mut w = Elem::zero(Tag::W, 3);
        w.add_term(Mono::new(vec![1, 0, 0], 2), int(1));
        assert!(p_hor(&w).is_zero());
        let mut v = Elem::zero(Tag::W, 3);
        v.add_term(Mono::new(vec![1, 1, 0], 0), int(1));
        assert_eq!(p_hor(&v), v);
        let mut u = Elem::zero(Tag::Ncw, 3);
        u.add_term(Mono::new(vec![1, 0, 0], 1), int(1));
        assert!(p_hor(&u).is_zero());
        let u1 = Elem::sym_gen(Tag::Ncw, 3, 0);
        assert_eq!(p_hor(&u1), u1);
    }

    #[test]
    fn relation_suites_small() {
        let g = su2();
        assert!(all_pass(&g_relations(&g, &ext_ops(&g), &basis(Tag::Ext, 3, 3))).is_pass());
        assert!(all_pass(&g_relations(&g, &weil_ops(&g), &basis(Tag::W, 3, 4))).is_pass());
        assert!(all_pass(&g_relations(&g, &ncw_ops(&g), &basis(Tag::Ncw, 3, 4))).is_pass());
        assert!(inner_derivations_check(&g, 3).is_pass());
        assert!(gr_check(&g, 4).is_pass());
    }

    #[test]
    fn tau0_small() {
        assert!(tau0_conj_check(&abelian(2), 4).is_pass());
        assert!(tau0_conj_check(&su2(), 4).is_pass());
        assert!(!lie_dictionary_check(&su2(), 2, int(1)).is_pass());
    }

    #[test]
    fn kalkman_examples() {
        let g = su2();
        let ext = ExtGda::new(&g);
        let k = Kalkman::new(Side::W, &g, &ext);
        let y1 = Elem::ext_gen(Tag::Ext, 3, 0);
        let t = Tensor::pure(&Elem::one(Tag::W, 3), &y1);
        let expected = t.plus(&Tensor::pure(&Elem::ext_gen(Tag::W, 3, 0), &Elem::one(Tag::Ext, 3)));
        assert_eq!(k.phi(&t), expected);
        let t2 = Tensor::pure(&Elem::ext_gen(Tag::W, 3, 0), &Elem::one(Tag::Ext, 3));
        assert_eq!(k.phi(&t2), t2);
        assert!(k.conj_check(3).is_pass());
        let w = WeilGda::new(&g);
        assert!(Kalkman::new(Side::W, &g, &w).conj_check(3).is_pass());
        assert!(Kalkman::new(Side::Nc, &g, &ext).conj_check(3).is_pass());
    }

    #[test]
    fn homology_examples() {
        let g = su2();
        assert_eq!(homology(&g, Complex::ExtKoszul, 3).values, vec![1, 0, 0, 1]);
        assert_eq!(homology(&g, Complex::ClAdGamma, 3).values, vec![0, 0]);
        assert_eq!(homology(&g, Complex::WFull, 5).values, vec![1, 0, 0, 0, 0]);
        assert!(cl_homotopy_check(&g).is_pass());
    }
}
