//! The Duflo map, the quantization map `Q : W_G → 𝒲_G`, and the series
//! identities satisfied by `T` and `ln J`.

use num_traits::One;

use crate::error::{Error, Result};
use crate::liedata::{structure_series, AdSeriesBundle, LieAlgebra};
use crate::multivec::{basis, iota, lie, Elem, Mono, Tag, Verdict};
use crate::pbw::sym_map;
use crate::ring::{int, rat, Poly, Rational};
use crate::weil::{nc_weil_d, weil_d};

/// Truncated structure series for one Lie algebra.
#[derive(Clone, Debug)]
pub struct DufloContext {
    pub alg: LieAlgebra,
    pub order: usize,
    pub bundle: AdSeriesBundle,
}

impl DufloContext {
    pub fn new(alg: &LieAlgebra, order: usize) -> Self {
        DufloContext { alg: alg.clone(), order, bundle: structure_series(alg, order) }
    }

    /// The same context with `T` replaced by `-T`.
    pub fn with_flipped_t(&self) -> Self {
        let mut ctx = self.clone();
        ctx.bundle.t = ctx.bundle.t.map(|p| -p);
        ctx
    }

    pub fn t(&self, a: usize, b: usize) -> &Poly {
        self.bundle.t.get(a, b)
    }

    fn require(&self, needed: u32) -> Result<()> {
        if needed as usize > self.order {
            return Err(Error::TruncationTooLow { needed: needed as usize, available: self.order });
        }
        Ok(())
    }
}

/// `∂^α v^β` with exact falling-factorial coefficients.
fn partial_mono(alpha: &[u32], m: &Mono) -> Option<(Mono, Rational)> {
    let mut sym = m.sym.clone();
    let mut c = Rational::one();
    for (i, &a) in alpha.iter().enumerate() {
        let b = sym[i] as u32;
        if a > b {
            return None;
        }
        for k in 0..a {
            c *= int((b - k) as i64);
        }
        sym[i] = (b - a) as u16;
    }
    Some((Mono::new(sym, m.ext), c))
}

/// Lets a polynomial in `μ` act on the symmetric factor, with `μ_a = ∂/∂v^a`.
pub fn apply_diff(p: &Poly, w: &Elem) -> Elem {
    let mut out = Elem::zero(w.tag(), w.n());
    for (alpha, pc) in p.terms() {
        for (m, c) in w.terms() {
            if let Some((m2, k)) = partial_mono(alpha, m) {
                out.add_term(m2, k * pc * c);
            }
        }
    }
    out
}

/// `Duf = sym ∘ J^½(∂)` on `S(g)`.
pub fn duflo_map(ctx: &DufloContext, p: &Elem) -> Result<Elem> {
    if p.tag() != Tag::Sym {
        return Err(Error::TagMismatch { expected: "SYM".into(), found: p.tag().name().into() });
    }
    ctx.require(p.max_sym_degree())?;
    Ok(sym_map(&ctx.alg, &apply_diff(&ctx.bundle.j_half, p)))
}

/// `-½ T_ab(∂) ι_a ι_b`.
pub fn t_contraction(ctx: &DufloContext, w: &Elem) -> Elem {
    let n = ctx.alg.dim();
    let mut out = Elem::zero(w.tag(), w.n());
    for a in 0..n {
        for b in 0..n {
            let t = ctx.t(a, b);
            if t.is_zero() {
                continue;
            }
            let ii = iota(a, &iota(b, w));
            if !ii.is_zero() {
                out.add_scaled(&apply_diff(t, &ii), &rat(-1, 2));
            }
        }
    }
    out
}

/// `exp(-½ T_ab(∂) ι_a ι_b)`.
pub fn t_exponential(ctx: &DufloContext, w: &Elem) -> Elem {
    let mut acc = w.clone();
    let mut term = w.clone();
    for k in 1i64.. {
        term = t_contraction(ctx, &term).scale(&rat(1, k));
        if term.is_zero() {
            break;
        }
        acc = &acc + &term;
    }
    acc
}

/// `Q = (Duf ⊗ σ^{-1}) ∘ exp(-½ T_ab ι_a ι_b)`.
pub fn quantize(ctx: &DufloContext, w: &Elem) -> Result<Elem> {
    if w.tag() != Tag::W {
        return Err(Error::TagMismatch { expected: "W".into(), found: w.tag().name().into() });
    }
    ctx.require(w.max_sym_degree())?;
    let e = t_exponential(ctx, w);
    let n = w.n();
    let mut out = Elem::zero(Tag::Ncw, n);
    for (m, c) in e.terms() {
        let p = Elem::from_mono(Tag::Sym, n, Mono::new(m.sym.clone(), 0), c.clone());
        let u = sym_map(&ctx.alg, &apply_diff(&ctx.bundle.j_half, &p));
        for (um, uc) in u.terms() {
            out.add_term(Mono::new(um.sym.clone(), m.ext), uc.clone());
        }
    }
    Ok(out)
}

/// `Q∘d = d∘Q`, `Q∘ι_a = ι_a∘Q`, `Q∘L_a = L_a∘Q` on all Weil monomials of
/// degree `≤ max_degree`.
pub fn chain_check(ctx: &DufloContext, max_degree: u32) -> Result<Verdict> {
    ctx.require(max_degree / 2 + 1)?;
    let alg = &ctx.alg;
    let n = alg.dim();
    let list = basis(Tag::W, n, max_degree);
    let found = crate::par::find_first(&list, |w| {
        let q = quantize(ctx, w).expect("order checked");
        let check = |label: &str, lhs: Elem, rhs: Elem| {
            let diff = &lhs - &rhs;
            (!diff.is_zero()).then(|| (format!("{label} on {}", w.render()), diff.render()))
        };
        check("d", quantize(ctx, &weil_d(alg, w)).expect("order checked"), nc_weil_d(alg, &q))
            .or_else(|| {
                (0..n).find_map(|a| check(&format!("i_{}", a + 1), quantize(ctx, &iota(a, w)).unwrap(), iota(a, &q)))
            })
            .or_else(|| {
                (0..n).find_map(|a| check(&format!("L_{}", a + 1), quantize(ctx, &lie(alg, a, w)).unwrap(), lie(alg, a, &q)))
            })
    });
    Ok(match found {
        None => Verdict::Pass,
        Some((input, residual)) => Verdict::Fail { input, residual },
    })
}

/// `Q(m)` minus the matching PBW/Clifford monomial has only terms of lower
/// filtration degree, for every Weil monomial of degree `≤ max_degree`.
pub fn triangularity_check(ctx: &DufloContext, max_degree: u32) -> Result<Verdict> {
    ctx.require(max_degree / 2)?;
    for w in basis(Tag::W, ctx.alg.dim(), max_degree) {
        let (m, _) = w.terms().next().expect("basis element");
        let top = m.wdeg();
        let rest = &quantize(ctx, &w)? - &w.retag(Tag::Ncw);
        let high = rest.filter(|x| x.wdeg() >= top);
        if !high.is_zero() {
            return Ok(Verdict::fail(w.render(), high.render()));
        }
    }
    Ok(Verdict::Pass)
}

/// Compares two polynomials below a degree bound.
fn check_poly(label: String, lhs: &Poly, rhs: &Poly, below: u32) -> Verdict {
    let diff = (lhs - rhs).truncate(below);
    if diff.is_zero() {
        Verdict::Pass
    } else {
        Verdict::fail(label, diff.to_string())
    }
}

/// `Cycl_abc(∂T_bc/∂μ_a + T_ar f_rbs T_sc) = ¼ f_abc` modulo degree `≥ order`.
pub fn cdyb_check(alg: &LieAlgebra, order: usize) -> Verdict {
    cdyb_check_ctx(&DufloContext::new(alg, order))
}

pub fn cdyb_check_ctx(ctx: &DufloContext) -> Verdict {
    let alg = &ctx.alg;
    let n = alg.dim();
    let below = ctx.order.saturating_sub(1) as u32;
    let term = |a: usize, b: usize, c: usize| {
        let mut p = ctx.t(b, c).derivative(a);
        for r in 0..n {
            let tar = ctx.t(a, r);
            if tar.is_zero() {
                continue;
            }
            for (bb, s, f) in alg.brackets(r) {
                if *bb == b {
                    p = &p + &tar.mul_trunc(ctx.t(*s, c), below).scale(f);
                }
            }
        }
        p
    };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = &(&term(a, b, c) + &term(b, c, a)) + &term(c, a, b);
                let rhs = Poly::constant(n, alg.f(a, b, c) * rat(1, 4));
                let v = check_poly(format!("({},{},{})", a + 1, b + 1, c + 1), &lhs, &rhs, below);
                if !v.is_pass() {
                    return v;
                }
            }
        }
    }
    Verdict::Pass
}

/// `∂ ln J/∂μ_a = -f_abc T_bc` modulo degree `≥ order`.
pub fn dlogj_check(alg: &LieAlgebra, order: usize) -> Verdict {
    dlogj_check_signed(alg, order, int(-1))
}

/// `∂ ln J/∂μ_a = σ f_abc T_bc`.
pub fn dlogj_check_signed(alg: &LieAlgebra, order: usize, sign: Rational) -> Verdict {
    let ctx = DufloContext::new(alg, order);
    let n = alg.dim();
    let below = order.saturating_sub(1) as u32;
    for a in 0..n {
        let lhs = ctx.bundle.log_j.derivative(a);
        let mut rhs = Poly::zero(n);
        for (b, c, f) in alg.brackets(a) {
            rhs = &rhs + &ctx.t(*b, *c).scale(&(f * &sign));
        }
        let v = check_poly(format!("a={}", a + 1), &lhs, &rhs, below);
        if !v.is_pass() {
            return v;
        }
    }
    Verdict::Pass
}

fn require_invariant(alg: &LieAlgebra, p: &Elem) -> Result<()> {
    for a in 0..alg.dim() {
        if !lie(alg, a, p).is_zero() {
            return Err(Error::NotInvariant(p.render()));
        }
    }
    Ok(())
}

/// `Duf(pq) = Duf(p) Duf(q)` for invariant `p`, `q`.
pub fn duflo_ring_check(ctx: &DufloContext, p: &Elem, q: &Elem) -> Result<Verdict> {
    require_invariant(&ctx.alg, p)?;
    require_invariant(&ctx.alg, q)?;
    let pq = crate::multivec::mul(&ctx.alg, p, q)?;
    let lhs = duflo_map(ctx, &pq)?;
    let rhs = crate::multivec::mul(&ctx.alg, &duflo_map(ctx, p)?, &duflo_map(ctx, q)?)?;
    Ok(Verdict::check_eq(&format!("({})*({})", p.render(), q.render()), &lhs, &rhs))
}

/// `Duf(v1 v2)` against `Duf(v1) Duf(v2)`: the map is not multiplicative
/// off the invariants.
pub fn non_invariant_pair(ctx: &DufloContext) -> Result<(Elem, Elem)> {
    let n = ctx.alg.dim();
    let v1 = Elem::sym_gen(Tag::Sym, n, 0);
    let v2 = Elem::sym_gen(Tag::Sym, n, 1);
    let prod = crate::multivec::mul(&ctx.alg, &v1, &v2)?;
    let lhs = duflo_map(ctx, &prod)?;
    let rhs = crate::multivec::mul(&ctx.alg, &duflo_map(ctx, &v1)?, &duflo_map(ctx, &v2)?)?;
    Ok((lhs, rhs))
}

/// `λ = Σ v_a v_a`.
pub fn lambda(n: usize) -> Elem {
    let mut out = Elem::zero(Tag::Sym, n);
    for a in 0..n {
        let mut s = vec![0u16; n];
        s[a] = 2;
        out.add_term(Mono::new(s, 0), int(1));
    }
    out
}

/// `λ^k`.
pub fn lambda_power(alg: &LieAlgebra, k: u32) -> Elem {
    let n = alg.dim();
    let l = lambda(n);
    let mut acc = Elem::one(Tag::Sym, n);
    for _ in 0..k {
        acc = crate::multivec::mul_unchecked(alg, &acc, &l);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liedata::{abelian, su2};
    use crate::pbw::casimir;

    #[test]
    fn duflo_examples() {
        let g = su2();
        let ctx = DufloContext::new(&g, 4);
        assert_eq!(duflo_map(&ctx, &Elem::one(Tag::Sym, 3)).unwrap(), Elem::one(Tag::Env, 3));
        assert_eq!(duflo_map(&ctx, &Elem::sym_gen(Tag::Sym, 3, 0)).unwrap(), Elem::sym_gen(Tag::Env, 3, 0));
        let mut expected = casimir(&g);
        expected.add_term(Mono::one(3), rat(-1, 4));
        assert_eq!(duflo_map(&ctx, &lambda(3)).unwrap(), expected);
        let small = DufloContext::new(&g, 1);
        assert!(matches!(duflo_map(&small, &lambda(3)), Err(Error::TruncationTooLow { .. })));
    }

    #[test]
    fn quantize_examples() {
        let g = su2();
        let ctx = DufloContext::new(&g, 4);
        assert_eq!(quantize(&ctx, &Elem::ext_gen(Tag::W, 3, 0)).unwrap().render(), "x1");
        let w = weil_d(&g, &Elem::ext_gen(Tag::W, 3, 0));
        assert_eq!(quantize(&ctx, &w).unwrap().render(), "u1 - x2*x3");
        assert_eq!(quantize(&ctx, &Elem::one(Tag::W, 3)).unwrap(), Elem::one(Tag::Ncw, 3));
    }

    #[test]
    fn chain_small() {
        assert!(chain_check(&DufloContext::new(&abelian(2), 4), 6).unwrap().is_pass());
        let ctx = DufloContext::new(&su2(), 3);
        assert!(chain_check(&ctx, 4).unwrap().is_pass());
        assert!(!chain_check(&ctx.with_flipped_t(), 4).unwrap().is_pass());
        assert!(matches!(chain_check(&ctx, 6), Err(Error::TruncationTooLow { .. })));
        assert!(triangularity_check(&ctx, 4).unwrap().is_pass());
    }

    #[test]
    fn series_identities() {
        let g = su2();
        assert!(cdyb_check(&abelian(3), 4).is_pass());
        assert!(cdyb_check(&g, 6).is_pass());
        assert!(!cdyb_check_ctx(&DufloContext::new(&g, 6).with_flipped_t()).is_pass());
        assert!(dlogj_check(&abelian(3), 4).is_pass());
        assert!(dlogj_check(&g, 6).is_pass());
        assert!(!dlogj_check_signed(&g, 6, int(1)).is_pass());
    }

    #[test]
    fn ring_property() {
        let g = su2();
        let ctx = DufloContext::new(&g, 6);
        let l = lambda(3);
        assert!(duflo_ring_check(&ctx, &l, &l).unwrap().is_pass());
        assert!(duflo_ring_check(&ctx, &Elem::one(Tag::Sym, 3), &l).unwrap().is_pass());
        let v1 = Elem::sym_gen(Tag::Sym, 3, 0);
        let v2 = Elem::sym_gen(Tag::Sym, 3, 1);
        assert!(matches!(duflo_ring_check(&ctx, &v1, &v2), Err(Error::NotInvariant(_))));
        let (lhs, rhs) = non_invariant_pair(&ctx).unwrap();
        assert_eq!(lhs.render(), "u1*u2 - 1/2*u3");
        assert_eq!(rhs.render(), "u1*u2");
    }
}
