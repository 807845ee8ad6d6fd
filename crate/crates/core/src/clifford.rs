//! Clifford algebra `x_a x_b + x_b x_a = δ_ab` in the symbol picture.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::liedata::LieAlgebra;
use crate::multivec::{contract_bit, ext_mul, iota, wedge_bits, Elem, Mono, Tag, Verdict};
use crate::ring::{int, rat, taylor_coeffs, QMatrix, Rational, SeriesFn, TruncSeries};

fn bits_of(mut s: u32) -> Vec<usize> {
    let mut out = Vec::new();
    while s != 0 {
        out.push(s.trailing_zeros() as usize);
        s &= s - 1;
    }
    out
}

/// Kostant's formula on symbol monomials: `∧ ∘ exp(-½ ι¹_a ι²_a)`.
pub fn cl_mul_bits(i: u32, j: u32) -> Vec<(u32, Rational)> {
    let common = i & j;
    let mut out: Vec<(u32, Rational)> = Vec::new();
    // iterate over all submasks of the common indices
    let mut sub = common;
    loop {
        let (mut ci, mut cj) = (i, j);
        let mut neg = false;
        for a in bits_of(sub) {
            // ι²_a passes the first factor
            neg ^= ci.count_ones() % 2 == 1;
            let (nj, s2) = contract_bit(a, cj).expect("a ∈ J");
            let (ni, s1) = contract_bit(a, ci).expect("a ∈ I");
            neg ^= s1 ^ s2;
            ci = ni;
            cj = nj;
        }
        if let Some((w, s)) = wedge_bits(ci, cj) {
            neg ^= s;
            let k = sub.count_ones() as i64;
            let mut c = Rational::new(int(1).numer().clone(), num_bigint::BigInt::from(2i64.pow(k as u32)));
            if k % 2 == 1 {
                c = -c;
            }
            if neg {
                c = -c;
            }
            out.push((w, c));
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & common;
    }
    out
}

fn check_cl(e: &Elem) -> Result<()> {
    if e.tag() != Tag::Cl {
        return Err(Error::TagMismatch { expected: "CL".into(), found: e.tag().name().into() });
    }
    Ok(())
}

/// Clifford product of symbol-picture elements.
pub fn cl_mul(a: &Elem, b: &Elem) -> Result<Elem> {
    check_cl(a)?;
    check_cl(b)?;
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    Ok(cl_mul_unchecked(a, b))
}

pub(crate) fn cl_mul_unchecked(a: &Elem, b: &Elem) -> Elem {
    let n = a.n();
    let mut out = Elem::zero(a.tag(), n);
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let cab = ca * cb;
            for (bits, c) in cl_mul_bits(ma.ext, mb.ext) {
                out.add_term(Mono::new(vec![0; n], bits), &c * &cab);
            }
        }
    }
    out
}

/// Normal-orders a word of generators by adjacent rewriting.
fn normal_order(word: Vec<usize>, coeff: Rational, out: &mut BTreeMap<Vec<usize>, Rational>) {
    let mut stack = vec![(word, coeff)];
    while let Some((w, c)) = stack.pop() {
        match w.windows(2).position(|p| p[0] >= p[1]) {
            None => {
                let e = out.entry(w).or_insert_with(Rational::zero);
                *e += c;
            }
            Some(i) if w[i] == w[i + 1] => {
                let mut w2 = w.clone();
                w2.drain(i..i + 2);
                stack.push((w2, c * rat(1, 2)));
            }
            Some(i) => {
                let mut w2 = w.clone();
                w2.swap(i, i + 1);
                stack.push((w2, -c));
            }
        }
    }
}

/// Independent product by rewriting generator words with
/// `x_b x_a → -x_a x_b` and `x_a x_a → ½`.
pub fn cl_mul_oracle(a: &Elem, b: &Elem) -> Result<Elem> {
    check_cl(a)?;
    check_cl(b)?;
    let n = a.n();
    let mut acc = BTreeMap::new();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let mut word = bits_of(ma.ext);
            word.extend(bits_of(mb.ext));
            normal_order(word, ca * cb, &mut acc);
        }
    }
    let mut out = Elem::zero(Tag::Cl, n);
    for (w, c) in acc {
        let bits = w.iter().fold(0u32, |s, &i| s | 1 << i);
        out.add_term(Mono::new(vec![0; n], bits), c);
    }
    Ok(out)
}

/// Left multiplication `x_a^L = y_a + ½ ι_a`.
pub fn left_mul_gen(a: usize, w: &Elem) -> Elem {
    let mut out = ext_mul(a, w);
    out.add_scaled(&iota(a, w), &rat(1, 2));
    out
}

/// Right multiplication by `x_a`: `(-1)^{|w|} (y_a - ½ ι_a) w` on each parity.
pub fn right_mul_gen(a: usize, w: &Elem) -> Elem {
    let mut out = Elem::zero(w.tag(), w.n());
    for (m, c) in w.terms() {
        let single = Elem::from_mono(w.tag(), w.n(), m.clone(), c.clone());
        let mut t = ext_mul(a, &single);
        t.add_scaled(&iota(a, &single), &rat(-1, 2));
        if m.parity() == 1 {
            t = -&t;
        }
        out = &out + &t;
    }
    out
}

/// `g_a = -½ f_ars x_r x_s` and `γ = -1/6 f_abc x_a x_b x_c`.
pub fn g_and_gamma(alg: &LieAlgebra) -> (Vec<Elem>, Elem) {
    let n = alg.dim();
    let mut gs = Vec::with_capacity(n);
    for a in 0..n {
        let mut g = Elem::zero(Tag::Cl, n);
        for (r, s, f) in alg.brackets(a) {
            if let Some((bits, neg)) = wedge_bits(1 << r, 1 << s) {
                let c = f * rat(-1, 2);
                g.add_term(Mono::new(vec![0; n], bits), if neg { -c } else { c });
            }
        }
        gs.push(g);
    }
    let mut gamma = Elem::zero(Tag::Cl, n);
    for (a, b, c, f) in alg.nonzero() {
        let Some((ab, n1)) = wedge_bits(1 << a, 1 << b) else { continue };
        let Some((abc, n2)) = wedge_bits(ab, 1 << c) else { continue };
        let v = f * rat(-1, 6);
        gamma.add_term(Mono::new(vec![0; n], abc), if n1 ^ n2 { -v } else { v });
    }
    (gs, gamma)
}

/// `ad(γ)` from the closed formula `-½ f_abc y_b y_c ι_a - 1/24 f_abc ι_a ι_b ι_c`.
pub fn ad_gamma(alg: &LieAlgebra, w: &Elem) -> Elem {
    let mut out = Elem::zero(w.tag(), w.n());
    for a in 0..alg.dim() {
        let ia = iota(a, w);
        if ia.is_zero() {
            continue;
        }
        for (b, c, f) in alg.brackets(a) {
            out.add_scaled(&ext_mul(*b, &ext_mul(*c, &ia)), &(f * rat(-1, 2)));
            let iii = iota(*b, &iota(*c, w));
            out.add_scaled(&iota(a, &iii), &(f * rat(-1, 24)));
        }
    }
    out
}

/// `ad(γ)` as the super-commutator `γ⊙w - (-1)^{|w|} w⊙γ`.
pub fn ad_gamma_commutator(alg: &LieAlgebra, w: &Elem) -> Elem {
    let (_, gamma) = g_and_gamma(alg);
    let gamma = gamma.retag(w.tag());
    let (even, odd) = w.by_parity();
    let mut out = &cl_mul_unchecked(&gamma, &even) - &cl_mul_unchecked(&even, &gamma);
    out = &out + &cl_mul_unchecked(&gamma, &odd);
    &out + &cl_mul_unchecked(&odd, &gamma)
}

/// Pfaffian of an even antisymmetric matrix, `Pf([[0,s],[-s,0]]) = s`.
pub fn pfaffian(s: &QMatrix) -> Result<Rational> {
    let n = s.rows();
    if n != s.cols() || !s.is_antisymmetric() {
        return Err(Error::Invalid("pfaffian needs a square antisymmetric matrix".into()));
    }
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    fn rec(s: &QMatrix, idx: &[usize]) -> Rational {
        if idx.is_empty() {
            return Rational::one();
        }
        let first = idx[0];
        let mut acc = Rational::zero();
        for k in 1..idx.len() {
            let a = s.get(first, idx[k]);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = idx.iter().enumerate().filter(|&(j, _)| j != 0 && j != k).map(|(_, &x)| x).collect();
            let term = a * rec(s, &rest);
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
    Ok(rec(s, &(0..n).collect::<Vec<_>>()))
}

/// `½ S_ab y_a y_b` as an element of the given tag.
pub fn quadratic(s: &QMatrix, tag: Tag) -> Elem {
    let n = s.rows();
    let mut q = Elem::zero(tag, n);
    for a in 0..n {
        for b in a + 1..n {
            let v = s.get(a, b) - s.get(b, a);
            q.add_term(Mono::new(vec![0; n], (1 << a) | (1 << b)), v * rat(1, 2));
        }
    }
    q
}

/// Exterior exponential of an element with no constant term (nilpotent).
pub fn exp_ext(q: &Elem) -> Elem {
    let n = q.n();
    let mut acc = Elem::one(q.tag(), n);
    let mut term = acc.clone();
    let mut k = 1i64;
    loop {
        term = crate::multivec::mul_unchecked(&crate::liedata::abelian(n), &term, q).scale(&rat(1, k));
        if term.is_zero() {
            return acc;
        }
        acc = &acc + &term;
        k += 1;
    }
}

/// Truncated power series in `t` with element coefficients.
pub type SeriesElem = Vec<Elem>;

/// Clifford product of series, truncated at `t^order`.
pub fn series_cl_mul(a: &SeriesElem, b: &SeriesElem, order: usize) -> SeriesElem {
    let n = a[0].n();
    let tag = a[0].tag();
    (0..=order)
        .map(|k| {
            let mut acc = Elem::zero(tag, n);
            for i in 0..=k {
                if i < a.len() && k - i < b.len() {
                    acc = &acc + &cl_mul_unchecked(&a[i], &b[k - i]);
                }
            }
            acc
        })
        .collect()
}

/// `exp(t A)` in the Clifford algebra from `(k+1) E_{k+1} = A ⊙ E_k`.
pub fn exp_cl_series(a: &Elem, order: usize) -> SeriesElem {
    let mut out = vec![Elem::one(a.tag(), a.n())];
    for k in 0..order {
        let next = cl_mul_unchecked(a, &out[k]).scale(&rat(1, k as i64 + 1));
        out.push(next);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpMode {
    /// Finite sum in the exterior algebra.
    Exact,
    /// Clifford exponential of `t·½S_ab x_a x_b` to order `t^N`.
    Series(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadExp {
    Exact(Elem),
    Series(SeriesElem),
}

/// `exp(½ S_ab e_a e_b)` in the exterior algebra (exact) or the Clifford
/// algebra (series in `t`).
pub fn exp_quadratic(s: &QMatrix, tag: Tag, mode: ExpMode) -> Result<QuadExp> {
    if !s.is_antisymmetric() {
        return Err(Error::Invalid("S must be antisymmetric".into()));
    }
    let q = quadratic(s, tag);
    match (tag, mode) {
        (Tag::Ext, ExpMode::Exact) => Ok(QuadExp::Exact(exp_ext(&q))),
        (Tag::Cl, ExpMode::Exact) => Err(Error::NotNilpotent),
        (Tag::Cl, ExpMode::Series(n)) => Ok(QuadExp::Series(exp_cl_series(&q, n))),
        (Tag::Ext, ExpMode::Series(n)) => {
            let e = exp_ext(&q);
            let mut out = vec![Elem::zero(tag, s.rows()); n + 1];
            for (m, c) in e.terms() {
                let k = m.ext_degree() as usize / 2;
                if k <= n {
                    out[k].add_term(m.clone(), c.clone());
                }
            }
            Ok(QuadExp::Series(out))
        }
        (other, _) => Err(Error::TagMismatch { expected: "EXT or CL".into(), found: other.name().into() }),
    }
}

/// Berezin integral identity: `Pf(S)^{-1} exp(½ (S^{-1})_ba ι_a ι_b)` applied
/// to `exp(½ S_ab y_a y_b)` gives the volume element.
pub fn berezin_check(s: &QMatrix) -> Result<Verdict> {
    let n = s.rows();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let inv = s.inverse().ok_or(Error::SingularS)?;
    let pf = pfaffian(s)?;
    let QuadExp::Exact(e) = exp_quadratic(s, Tag::Ext, ExpMode::Exact)? else { unreachable!() };
    let apply = |w: &Elem| {
        let mut out = Elem::zero(Tag::Ext, n);
        for a in 0..n {
            for b in 0..n {
                let c = inv.get(b, a);
                if !c.is_zero() {
                    out.add_scaled(&iota(a, &iota(b, w)), &(c * rat(1, 2)));
                }
            }
        }
        out
    };
    let mut acc = e.clone();
    let mut term = e;
    for k in 1..=n as i64 {
        term = apply(&term).scale(&rat(1, k));
        acc = &acc + &term;
    }
    let lhs = acc.scale(&pf.recip());
    let vol = Elem::from_mono(Tag::Ext, n, Mono::new(vec![0; n], (1u32 << n) - 1), Rational::one());
    Ok(Verdict::check_eq("berezin", &lhs, &vol))
}

// ---------------------------------------------------------------------------
// Clifford algebra with odd Grassmann coefficients
// ---------------------------------------------------------------------------

/// Element of `∧(κ) ⊗ Cl`, keyed by `(κ bits, y bits)` with κ written first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuperCl {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl SuperCl {
    pub fn one() -> Self {
        let mut s = SuperCl::default();
        s.add((0, 0), Rational::one());
        s
    }

    pub fn add(&mut self, key: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &SuperCl) -> SuperCl {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add(*k, v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> SuperCl {
        let mut out = SuperCl::default();
        for (k, v) in &self.terms {
            out.add(*k, v * c);
        }
        out
    }

    /// `(κ^K y^I)(κ^L y^J) = (-1)^{|I||L|} κ^K κ^L ⊗ y^I ⊙ y^J`.
    pub fn mul(&self, other: &SuperCl) -> SuperCl {
        let mut out = SuperCl::default();
        for ((k1, i1), c1) in &self.terms {
            for ((k2, i2), c2) in &other.terms {
                let Some((k, nk)) = wedge_bits(*k1, *k2) else { continue };
                let neg = nk ^ (i1.count_ones() * k2.count_ones() % 2 == 1);
                let c = c1 * c2;
                for (bits, v) in cl_mul_bits(*i1, *i2) {
                    let t = &v * &c;
                    out.add((k, bits), if neg { -t } else { t });
                }
            }
        }
        out
    }

    /// `ι_a`, passing the κ factor.
    pub fn iota(&self, a: usize) -> SuperCl {
        let mut out = SuperCl::default();
        for ((k, i), c) in &self.terms {
            if let Some((bits, neg)) = contract_bit(a, *i) {
                let neg = neg ^ (k.count_ones() % 2 == 1);
                out.add((*k, bits), if neg { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    /// Left multiplication by `κ_a`.
    pub fn kappa_mul(&self, a: usize) -> SuperCl {
        let mut out = SuperCl::default();
        for ((k, i), c) in &self.terms {
            if let Some((bits, neg)) = wedge_bits(1 << a, *k) {
                out.add((bits, *i), if neg { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|((k, i), c)| {
                let mut s = crate::ring::fmt_rational(c);
                for b in bits_of(*k) {
                    s.push_str(&format!("*k{}", b + 1));
                }
                for b in bits_of(*i) {
                    s.push_str(&format!("*x{}", b + 1));
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

type SuperSeries = Vec<SuperCl>;

fn sseries_mul(a: &SuperSeries, b: &SuperSeries, order: usize) -> SuperSeries {
    (0..=order)
        .map(|k| {
            let mut acc = SuperCl::default();
            for i in 0..=k {
                if i < a.len() && k - i < b.len() {
                    acc = acc.plus(&a[i].mul(&b[k - i]));
                }
            }
            acc
        })
        .collect()
}

/// `exp(X)` for a series without constant term.
fn sseries_exp(x: &SuperSeries, order: usize) -> SuperSeries {
    let mut acc: SuperSeries = vec![SuperCl::default(); order + 1];
    acc[0] = SuperCl::one();
    let mut power = acc.clone();
    for k in 1..=order.max(8) {
        power = sseries_mul(&power, x, order);
        if power.iter().all(SuperCl::is_zero) {
            break;
        }
        let w = Rational::new(One::one(), crate::ring::factorial(k as u32));
        for (slot, p) in acc.iter_mut().zip(&power) {
            *slot = slot.plus(&p.scale(&w));
        }
    }
    acc
}

/// Matrix power series `Σ_k c_k t^k S^k`.
fn matrix_series(s: &QMatrix, c: &TruncSeries) -> Vec<QMatrix> {
    let n = s.rows();
    let mut out = Vec::with_capacity(c.order() + 1);
    let mut power = QMatrix::identity(n);
    for k in 0..=c.order() {
        out.push(power.scale(&c.coeff(k)));
        power = power.mul(s);
    }
    out
}

/// The κ-twisted exponential identity
/// `exp(-ι_a κ_a) exp(½ S x x) = exp(ϖ₂) exp(-x_r γ_r) exp(½ S x x)` with
/// `S → tS`, `γ_r = (1 - e^{tS})_rs κ_s` and `ϖ₂ = ½ sinh(tS)_ab κ_a κ_b`.
pub fn di_check(s: &QMatrix, order: usize) -> Verdict {
    let n = s.rows();
    let q = quadratic(s, Tag::Cl);
    let e_series = exp_cl_series(&q, order);
    let to_super = |e: &Elem| {
        let mut out = SuperCl::default();
        for (m, c) in e.terms() {
            out.add((0, m.ext), c.clone());
        }
        out
    };
    let e: SuperSeries = e_series.iter().map(to_super).collect();

    // exp(O) with O = -ι_a ∘ κ_a
    let op = |x: &SuperCl| {
        let mut acc = SuperCl::default();
        for a in 0..n {
            acc = acc.plus(&x.kappa_mul(a).iota(a).scale(&int(-1)));
        }
        acc
    };
    let lhs: SuperSeries = e
        .iter()
        .map(|x| {
            let mut acc = x.clone();
            let mut term = x.clone();
            for k in 1..=2 * n as i64 {
                term = op(&term).scale(&rat(1, k));
                acc = acc.plus(&term);
            }
            acc
        })
        .collect();

    let exp_ts = matrix_series(s, &taylor_coeffs(SeriesFn::Exp, order));
    let sinh_ts = matrix_series(s, &taylor_coeffs(SeriesFn::Sinh, order));
    let mut x: SuperSeries = vec![SuperCl::default(); order + 1];
    let mut w2: SuperSeries = vec![SuperCl::default(); order + 1];
    for k in 1..=order {
        for r in 0..n {
            for t in 0..n {
                // (1 - e^{tS})_rt at order k ≥ 1 is -(S^k/k!)_rt
                let c = -exp_ts[k].get(r, t).clone();
                if !c.is_zero() {
                    // -x_r κ_t = κ_t x_r
                    x[k].add((1 << t, 1 << r), c);
                }
                let h = sinh_ts[k].get(r, t);
                if !h.is_zero() {
                    if let Some((bits, neg)) = wedge_bits(1 << r, 1 << t) {
                        let v = h * rat(1, 2);
                        w2[k].add((bits, 0), if neg { -v } else { v });
                    }
                }
            }
        }
    }
    let rhs = sseries_mul(&sseries_mul(&sseries_exp(&w2, order), &sseries_exp(&x, order), order), &e, order);
    for k in 0..=order {
        let diff = lhs[k].plus(&rhs[k].scale(&int(-1)));
        if !diff.is_zero() {
            return Verdict::fail(format!("t^{k}"), diff.render());
        }
    }
    Verdict::Pass
}

/// Which matrix plays `Ad_g` for `g = exp(tμ)` in the symbol formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdSide {
    /// `Ad_g = exp(t ad_μ)`.
    Forward,
    /// `Ad_g = exp(-t ad_μ)`.
    Inverse,
}

/// Symbol of `τ(exp tμ) = exp(-½ f_abc tμ_a x_b x_c)` against
/// `det^½(cosh(t ad_μ/2)) · exp(-((Ad_g - 1)/(Ad_g + 1))_ab y_a y_b)`.
pub fn tau_symbol_check_with(alg: &LieAlgebra, mu: &[Rational], order: usize, side: AdSide) -> Verdict {
    let n = alg.dim();
    // left side
    let mut a = Elem::zero(Tag::Cl, n);
    for (c, b, d, f) in alg.nonzero() {
        if mu[c].is_zero() {
            continue;
        }
        if let Some((bits, neg)) = wedge_bits(1 << b, 1 << d) {
            let v = f * &mu[c] * rat(-1, 2);
            a.add_term(Mono::new(vec![0; n], bits), if neg { -v } else { v });
        }
    }
    let lhs = exp_cl_series(&a, order);

    // right side
    let ad = alg.ad_at(mu);
    let m = match side {
        AdSide::Forward => ad,
        AdSide::Inverse => ad.scale(&int(-1)),
    };
    // ln det cosh(tM/2) = Σ_k ℓ_k t^k tr(M^k)
    let log_cosh = taylor_coeffs(SeriesFn::Cosh, order).rescale(&rat(1, 2)).log().expect("cosh(0) = 1");
    let mut powers = vec![QMatrix::identity(n)];
    for k in 1..=order {
        let p = powers[k - 1].mul(&m);
        powers.push(p);
    }
    let trace = |q: &QMatrix| (0..n).map(|i| q.get(i, i).clone()).sum::<Rational>();
    let ln_det = TruncSeries::new((0..=order).map(|k| log_cosh.coeff(k) * trace(&powers[k])).collect(), order);
    let det_half = ln_det.scale(&rat(1, 2)).exp().expect("no constant term");
    let tanh = taylor_coeffs(SeriesFn::TanhHalf, order);
    // exponent -Σ_ab tanh_ab y_a y_b as a t-series of exterior 2-forms
    let mut quad: SeriesElem = vec![Elem::zero(Tag::Cl, n); order + 1];
    for k in 1..=order {
        let c = tanh.coeff(k);
        if c.is_zero() {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                let v = powers[k].get(i, j) * &c;
                if v.is_zero() {
                    continue;
                }
                if let Some((bits, neg)) = wedge_bits(1 << i, 1 << j) {
                    quad[k].add_term(Mono::new(vec![0; n], bits), if neg { v } else { -v });
                }
            }
        }
    }
    // exterior exponential of a series without constant term
    let wedge_series = |x: &SeriesElem, y: &SeriesElem| -> SeriesElem {
        let ab = crate::liedata::abelian(n);
        (0..=order)
            .map(|k| {
                let mut acc = Elem::zero(Tag::Cl, n);
                for i in 0..=k {
                    acc = &acc + &crate::multivec::mul_unchecked(&ab, &x[i].retag(Tag::Ext), &y[k - i].retag(Tag::Ext)).retag(Tag::Cl);
                }
                acc
            })
            .collect()
    };
    let mut expo: SeriesElem = vec![Elem::zero(Tag::Cl, n); order + 1];
    expo[0] = Elem::one(Tag::Cl, n);
    let mut power = expo.clone();
    for k in 1..=n {
        power = wedge_series(&power, &quad);
        let w = Rational::new(One::one(), crate::ring::factorial(k as u32));
        for (slot, p) in expo.iter_mut().zip(&power) {
            slot.add_scaled(p, &w);
        }
    }
    for k in 0..=order {
        let mut rhs = Elem::zero(Tag::Cl, n);
        for i in 0..=k {
            rhs.add_scaled(&expo[k - i], &det_half.coeff(i));
        }
        let diff = &lhs[k] - &rhs;
        if !diff.is_zero() {
            return Verdict::fail(format!("t^{k}"), diff.render());
        }
    }
    Verdict::Pass
}

/// The symbol identity with the `Ad` convention under which it holds.
pub fn tau_symbol_check(alg: &LieAlgebra, mu: &[Rational], order: usize) -> Verdict {
    tau_symbol_check_with(alg, mu, order, AdSide::Inverse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liedata::{abelian, su2};

    fn x(a: usize, n: usize) -> Elem {
        Elem::ext_gen(Tag::Cl, n, a)
    }

    #[test]
    fn product_examples() {
        let one = Elem::one(Tag::Cl, 3);
        assert_eq!(cl_mul(&x(0, 3), &x(0, 3)).unwrap(), one.scale(&rat(1, 2)));
        assert_eq!(cl_mul(&x(0, 3), &x(1, 3)).unwrap().render(), "x1*x2");
        assert_eq!(cl_mul(&one, &x(2, 3)).unwrap(), x(2, 3));
        assert!(cl_mul(&x(0, 3), &x(0, 4)).is_err());
    }

    #[test]
    fn oracle_agrees_exhaustively_n3() {
        for i in 0..8u32 {
            for j in 0..8u32 {
                let a = Elem::from_mono(Tag::Cl, 3, Mono::new(vec![0; 3], i), int(1));
                let b = Elem::from_mono(Tag::Cl, 3, Mono::new(vec![0; 3], j), int(1));
                assert_eq!(cl_mul(&a, &b).unwrap(), cl_mul_oracle(&a, &b).unwrap(), "{i} {j}");
            }
        }
    }

    #[test]
    fn gamma_su2() {
        let g = su2();
        let (gs, gamma) = g_and_gamma(&g);
        assert_eq!(gamma.render(), "-x1*x2*x3");
        assert_eq!(cl_mul(&gamma, &gamma).unwrap(), Elem::scalar(Tag::Cl, 3, rat(-1, 8)));
        assert_eq!(gs[0].render(), "-x2*x3");
        let (_, g0) = g_and_gamma(&abelian(3));
        assert!(g0.is_zero());
    }

    #[test]
    fn ad_gamma_examples() {
        let g = su2();
        assert_eq!(ad_gamma(&g, &x(0, 3)).render(), "-x2*x3");
        assert!(ad_gamma(&g, &Elem::one(Tag::Cl, 3)).is_zero());
        let top = Elem::from_mono(Tag::Cl, 3, Mono::new(vec![0; 3], 7), int(1));
        assert_eq!(ad_gamma(&g, &top), Elem::scalar(Tag::Cl, 3, rat(1, 4)));
        for w in crate::multivec::basis(Tag::Cl, 3, 3) {
            assert_eq!(ad_gamma(&g, &w), ad_gamma_commutator(&g, &w));
        }
    }

    #[test]
    fn pfaffian_examples() {
        assert_eq!(pfaffian(&QMatrix::from_i64(&[&[0, 3], &[-3, 0]])).unwrap(), int(3));
        let s = QMatrix::from_i64(&[&[0, 2, 0, 0], &[-2, 0, 0, 0], &[0, 0, 0, 5], &[0, 0, -5, 0]]);
        assert_eq!(pfaffian(&s).unwrap(), int(10));
        assert_eq!(pfaffian(&QMatrix::zeros(4, 4)).unwrap(), int(0));
        assert!(matches!(pfaffian(&QMatrix::zeros(3, 3)), Err(Error::OddDimension(3))));
    }

    #[test]
    fn exponentials() {
        let s = QMatrix::from_i64(&[&[0, 3], &[-3, 0]]);
        let QuadExp::Exact(e) = exp_quadratic(&s, Tag::Ext, ExpMode::Exact).unwrap() else { panic!() };
        assert_eq!(e.render(), "1 + 3*y1*y2");
        assert!(matches!(exp_quadratic(&s, Tag::Cl, ExpMode::Exact), Err(Error::NotNilpotent)));
        let QuadExp::Series(ser) = exp_quadratic(&s, Tag::Cl, ExpMode::Series(2)).unwrap() else { panic!() };
        assert_eq!(ser[1].render(), "3*x1*x2");
        assert_eq!(ser[2], Elem::scalar(Tag::Cl, 2, rat(-9, 8)));
        let QuadExp::Exact(z) = exp_quadratic(&QMatrix::zeros(2, 2), Tag::Ext, ExpMode::Exact).unwrap() else { panic!() };
        assert_eq!(z, Elem::one(Tag::Ext, 2));
    }

    #[test]
    fn berezin_examples() {
        assert!(berezin_check(&QMatrix::from_i64(&[&[0, 3], &[-3, 0]])).unwrap().is_pass());
        assert!(matches!(berezin_check(&QMatrix::zeros(2, 2)), Err(Error::SingularS)));
    }

    #[test]
    fn di_examples() {
        assert!(di_check(&QMatrix::zeros(2, 2), 4).is_pass());
        assert!(di_check(&QMatrix::from_i64(&[&[0, 1], &[-1, 0]]), 6).is_pass());
    }

    #[test]
    fn tau_symbol_examples() {
        let g = su2();
        assert!(tau_symbol_check(&abelian(2), &[int(1), int(2)], 4).is_pass());
        assert!(tau_symbol_check(&g, &[int(0), int(0), int(1)], 6).is_pass());
        assert!(tau_symbol_check(&g, &[int(1), int(1), int(0)], 4).is_pass());
    }
}
