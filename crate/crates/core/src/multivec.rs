//! Sparse graded elements shared by every algebra in the crate, the
//! exterior-algebra derivations, and degree-bounded operator equality.
//!
//! A monomial is a symmetric exponent vector (powers of `v`, `u` or `n`)
//! together with an exterior bitset (`y`, `x` or `dn`). The [`Tag`] decides
//! which product applies.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liedata::LieAlgebra;
use crate::ring::{fmt_rational, int, rat, Rational};
use crate::{clifford, par, pbw};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Tag {
    /// Exterior algebra `∧g*`, generators `y`.
    Ext,
    /// Clifford algebra in the symbol picture, generators `x`.
    Cl,
    /// Symmetric algebra `Sg*`, generators `v`.
    Sym,
    /// Enveloping algebra in PBW order, generators `u`.
    Env,
    /// Weil algebra `Sg* ⊗ ∧g*`.
    W,
    /// Non-commutative Weil algebra `U(g) ⊗ Cl(g)`.
    Ncw,
    /// Polynomial forms on the 2-sphere, generators `n` and `dn`.
    Sphere,
}

impl Tag {
    pub fn name(self) -> &'static str {
        match self {
            Tag::Ext => "EXT",
            Tag::Cl => "CL",
            Tag::Sym => "SYM",
            Tag::Env => "ENV",
            Tag::W => "W",
            Tag::Ncw => "NCW",
            Tag::Sphere => "SPHERE",
        }
    }

    pub fn sym_letter(self) -> Option<&'static str> {
        match self {
            Tag::Sym | Tag::W => Some("v"),
            Tag::Env | Tag::Ncw => Some("u"),
            Tag::Sphere => Some("n"),
            Tag::Ext | Tag::Cl => None,
        }
    }

    pub fn ext_letter(self) -> Option<&'static str> {
        match self {
            Tag::Ext | Tag::W => Some("y"),
            Tag::Cl | Tag::Ncw => Some("x"),
            Tag::Sphere => Some("dn"),
            Tag::Sym | Tag::Env => None,
        }
    }

    /// Products of these tags are graded-commutative.
    pub fn is_supercommutative(self) -> bool {
        matches!(self, Tag::Ext | Tag::Sym | Tag::W | Tag::Sphere)
    }
}

impl std::str::FromStr for Tag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "EXT" => Tag::Ext,
            "CL" => Tag::Cl,
            "SYM" => Tag::Sym,
            "ENV" => Tag::Env,
            "W" => Tag::W,
            "NCW" => Tag::Ncw,
            "SPHERE" => Tag::Sphere,
            other => return Err(Error::Invalid(format!("unknown tag {other}"))),
        })
    }
}

/// Basis monomial `v^sym y^ext`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub sym: Vec<u16>,
    pub ext: u32,
}

impl Mono {
    pub fn one(n: usize) -> Self {
        Mono { sym: vec![0; n], ext: 0 }
    }

    pub fn new(sym: Vec<u16>, ext: u32) -> Self {
        Mono { sym, ext }
    }

    pub fn sym_degree(&self) -> u32 {
        self.sym.iter().map(|&k| k as u32).sum()
    }

    pub fn ext_degree(&self) -> u32 {
        self.ext.count_ones()
    }

    /// Weil degree `2·|sym| + |ext|`.
    pub fn wdeg(&self) -> u32 {
        2 * self.sym_degree() + self.ext_degree()
    }

    pub fn parity(&self) -> u32 {
        self.ext_degree() % 2
    }
}

/// Sign and result of `y^i ∧ y^j` on bitsets.
pub fn wedge_bits(i: u32, j: u32) -> Option<(u32, bool)> {
    if i & j != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = j;
    while rest != 0 {
        let q = rest.trailing_zeros();
        swaps += ((i as u64) >> (q + 1)).count_ones();
        rest &= rest - 1;
    }
    Some((i | j, swaps % 2 == 1))
}

/// `ι_a` on a bitset: the result and whether the sign is negative.
pub fn contract_bit(a: usize, i: u32) -> Option<(u32, bool)> {
    let bit = 1u32 << a;
    if i & bit == 0 {
        return None;
    }
    let below = i & (bit - 1);
    Some((i ^ bit, below.count_ones() % 2 == 1))
}

fn signed(c: &Rational, neg: bool) -> Rational {
    if neg {
        -c.clone()
    } else {
        c.clone()
    }
}

/// Sparse element of one of the tagged algebras.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Elem {
    tag: Tag,
    n: usize,
    terms: BTreeMap<Mono, Rational>,
}

impl Elem {
    pub fn zero(tag: Tag, n: usize) -> Self {
        Elem { tag, n, terms: BTreeMap::new() }
    }

    pub fn scalar(tag: Tag, n: usize, c: Rational) -> Self {
        Elem::from_mono(tag, n, Mono::one(n), c)
    }

    pub fn one(tag: Tag, n: usize) -> Self {
        Elem::scalar(tag, n, Rational::one())
    }

    pub fn from_mono(tag: Tag, n: usize, m: Mono, c: Rational) -> Self {
        let mut e = Elem::zero(tag, n);
        e.add_term(m, c);
        e
    }

    /// The symmetric generator with 0-based index `a` (`v`, `u` or `n`).
    pub fn sym_gen(tag: Tag, n: usize, a: usize) -> Self {
        assert!(tag.sym_letter().is_some() && a < n);
        let mut m = Mono::one(n);
        m.sym[a] = 1;
        Elem::from_mono(tag, n, m, Rational::one())
    }

    /// The odd generator with 0-based index `a` (`y`, `x` or `dn`).
    pub fn ext_gen(tag: Tag, n: usize, a: usize) -> Self {
        assert!(tag.ext_letter().is_some() && a < n);
        Elem::from_mono(tag, n, Mono::new(vec![0; n], 1 << a), Rational::one())
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The coefficient of the unit monomial.
    pub fn constant(&self) -> Rational {
        self.coeff(&Mono::one(self.n))
    }

    pub fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Elem, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Elem {
        if c.is_zero() {
            return Elem::zero(self.tag, self.n);
        }
        Elem { tag: self.tag, n: self.n, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Same coefficients under another tag.
    pub fn retag(&self, tag: Tag) -> Elem {
        Elem { tag, n: self.n, terms: self.terms.clone() }
    }

    /// `Some(p)` when every term has parity `p` (zero counts as even).
    pub fn parity(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Mono::parity);
        match it.next() {
            None => Some(0),
            Some(p) => it.all(|q| q == p).then_some(p),
        }
    }

    pub fn max_wdeg(&self) -> Option<u32> {
        self.terms.keys().map(Mono::wdeg).max()
    }

    pub fn max_sym_degree(&self) -> u32 {
        self.terms.keys().map(Mono::sym_degree).max().unwrap_or(0)
    }

    pub fn max_ext_degree(&self) -> u32 {
        self.terms.keys().map(Mono::ext_degree).max().unwrap_or(0)
    }

    /// Terms of the given Weil degree.
    pub fn wdeg_part(&self, d: u32) -> Elem {
        self.filter(|m| m.wdeg() == d)
    }

    pub fn filter(&self, keep: impl Fn(&Mono) -> bool) -> Elem {
        Elem {
            tag: self.tag,
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, v)| (m.clone(), v.clone())).collect(),
        }
    }

    /// Extends a map on monomials linearly.
    pub fn map_linear(&self, tag: Tag, f: impl Fn(&Mono) -> Elem) -> Elem {
        let mut out = Elem::zero(tag, self.n);
        for (m, c) in &self.terms {
            out.add_scaled(&f(m), c);
        }
        out
    }

    /// Splits into even and odd parts.
    pub fn by_parity(&self) -> (Elem, Elem) {
        (self.filter(|m| m.parity() == 0), self.filter(|m| m.parity() == 1))
    }

    fn render_mono(&self, m: &Mono) -> Vec<String> {
        let mut parts = Vec::new();
        if let Some(l) = self.tag.sym_letter() {
            for (i, &k) in m.sym.iter().enumerate() {
                match k {
                    0 => {}
                    1 => parts.push(format!("{l}{}", i + 1)),
                    _ => parts.push(format!("{l}{}^{k}", i + 1)),
                }
            }
        }
        if let Some(l) = self.tag.ext_letter() {
            for i in 0..self.n {
                if m.ext >> i & 1 == 1 {
                    parts.push(format!("{l}{}", i + 1));
                }
            }
        }
        parts
    }

    /// Display order: symmetric exponents descending, then exterior index
    /// lists ascending.
    fn display_order(&self) -> Vec<(&Mono, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        let key = |m: &Mono| {
            let idx: Vec<u32> = (0..32).filter(|i| m.ext >> i & 1 == 1).collect();
            (std::cmp::Reverse(m.sym.clone()), idx)
        };
        v.sort_by_key(|(m, _)| key(m));
        v
    }

    /// Canonical text form, parseable by the expression language.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut parts = self.render_mono(m);
            if parts.is_empty() || !mag.is_one() {
                parts.insert(0, fmt_rational(&mag));
            }
            out.push_str(&parts.join("*"));
        }
        out
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.tag.name(), self.render())
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &Elem {
    type Output = Elem;
    fn add(self, rhs: &Elem) -> Elem {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &Elem {
    type Output = Elem;
    fn sub(self, rhs: &Elem) -> Elem {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        self.scale(&-Rational::one())
    }
}

fn check_same(a: &Elem, b: &Elem) -> Result<()> {
    if a.tag != b.tag {
        return Err(Error::TagMismatch { expected: a.tag.name().into(), found: b.tag.name().into() });
    }
    if a.n != b.n {
        return Err(Error::DimensionMismatch(a.n, b.n));
    }
    Ok(())
}

/// Graded-commutative product of monomials.
pub fn supercomm_mono(a: &Mono, b: &Mono) -> Option<(Mono, bool)> {
    let (ext, neg) = wedge_bits(a.ext, b.ext)?;
    let sym = a.sym.iter().zip(&b.sym).map(|(x, y)| x + y).collect();
    Some((Mono { sym, ext }, neg))
}

/// The product of the algebra named by the tag. Sphere products are taken
/// in the ambient polynomial forms (no reduction).
pub fn mul(alg: &LieAlgebra, a: &Elem, b: &Elem) -> Result<Elem> {
    check_same(a, b)?;
    Ok(mul_unchecked(alg, a, b))
}

pub(crate) fn mul_unchecked(alg: &LieAlgebra, a: &Elem, b: &Elem) -> Elem {
    let (tag, n) = (a.tag, a.n);
    let mut out = Elem::zero(tag, n);
    match tag {
        Tag::Ext | Tag::Sym | Tag::W | Tag::Sphere => {
            for (ma, ca) in &a.terms {
                for (mb, cb) in &b.terms {
                    if let Some((m, neg)) = supercomm_mono(ma, mb) {
                        out.add_term(m, signed(&(ca * cb), neg));
                    }
                }
            }
        }
        Tag::Cl => {
            for (ma, ca) in &a.terms {
                for (mb, cb) in &b.terms {
                    let cab = ca * cb;
                    for (bits, c) in clifford::cl_mul_bits(ma.ext, mb.ext) {
                        out.add_term(Mono::new(vec![0; n], bits), &c * &cab);
                    }
                }
            }
        }
        Tag::Env => {
            for (ma, ca) in &a.terms {
                for (mb, cb) in &b.terms {
                    out.add_scaled(&pbw::u_mul_mono(alg, &ma.sym, &mb.sym), &(ca * cb));
                }
            }
        }
        Tag::Ncw => {
            for (ma, ca) in &a.terms {
                for (mb, cb) in &b.terms {
                    let cl = clifford::cl_mul_bits(ma.ext, mb.ext);
                    if cl.is_empty() {
                        continue;
                    }
                    let u = pbw::u_mul_mono(alg, &ma.sym, &mb.sym);
                    let cab = ca * cb;
                    for (um, uc) in u.terms() {
                        for (bits, c) in &cl {
                            out.add_term(Mono::new(um.sym.clone(), *bits), uc * c * &cab);
                        }
                    }
                }
            }
        }
    }
    out
}

/// `a ∧ b` on the exterior algebra.
pub fn wedge(a: &Elem, b: &Elem) -> Result<Elem> {
    check_same(a, b)?;
    if a.tag != Tag::Ext {
        return Err(Error::TagMismatch { expected: "EXT".into(), found: a.tag.name().into() });
    }
    let mut out = Elem::zero(Tag::Ext, a.n);
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            if let Some((m, neg)) = supercomm_mono(ma, mb) {
                out.add_term(m, signed(&(ca * cb), neg));
            }
        }
    }
    Ok(out)
}

/// Left multiplication by the odd generator `a` in the wedge sense,
/// for any tag (symbol picture for Clifford tags).
pub fn ext_mul(a: usize, w: &Elem) -> Elem {
    let bit = 1u32 << a;
    let mut out = Elem::zero(w.tag, w.n);
    for (m, c) in &w.terms {
        if let Some((ext, neg)) = wedge_bits(bit, m.ext) {
            out.add_term(Mono::new(m.sym.clone(), ext), signed(c, neg));
        }
    }
    out
}

/// Multiplication by the symmetric generator `a` on the commutative side.
pub fn sym_mul(a: usize, w: &Elem) -> Elem {
    let mut out = Elem::zero(w.tag, w.n);
    for (m, c) in &w.terms {
        let mut m2 = m.clone();
        m2.sym[a] += 1;
        out.add_term(m2, c.clone());
    }
    out
}

/// `∂/∂v^a` on the symmetric exponents.
pub fn sym_partial(a: usize, w: &Elem) -> Elem {
    let mut out = Elem::zero(w.tag, w.n);
    for (m, c) in &w.terms {
        let k = m.sym[a];
        if k == 0 {
            continue;
        }
        let mut m2 = m.clone();
        m2.sym[a] -= 1;
        out.add_term(m2, c * int(k as i64));
    }
    out
}

/// `ι_a`, the odd derivation with `ι_a y^b = δ_ab` and `ι_a v^b = 0`.
pub fn contract(a: usize, w: &Elem) -> Result<Elem> {
    if a >= w.n {
        return Err(Error::IndexOutOfRange { index: a + 1, dim: w.n });
    }
    Ok(iota(a, w))
}

pub(crate) fn iota(a: usize, w: &Elem) -> Elem {
    let mut out = Elem::zero(w.tag, w.n);
    for (m, c) in &w.terms {
        if let Some((ext, neg)) = contract_bit(a, m.ext) {
            out.add_term(Mono::new(m.sym.clone(), ext), signed(c, neg));
        }
    }
    out
}

/// `Σ_bc f_abc y_c ι_b` on the odd part of a monomial.
fn lie_ext_mono(alg: &LieAlgebra, a: usize, m: &Mono, out: &mut Elem, c: &Rational) {
    for (b, cc, f) in alg.brackets(a) {
        if let Some((e1, n1)) = contract_bit(*b, m.ext) {
            if let Some((e2, n2)) = wedge_bits(1 << cc, e1) {
                out.add_term(Mono::new(m.sym.clone(), e2), signed(&(f * c), n1 ^ n2));
            }
        }
    }
}

/// `Σ_bc f_abc v^c ∂_b` on the symmetric part of a monomial.
fn lie_sym_mono(alg: &LieAlgebra, a: usize, m: &Mono, out: &mut Elem, c: &Rational) {
    for (b, cc, f) in alg.brackets(a) {
        let k = m.sym[*b];
        if k == 0 {
            continue;
        }
        let mut m2 = m.clone();
        m2.sym[*b] -= 1;
        m2.sym[*cc] += 1;
        out.add_term(m2, f * c * int(k as i64));
    }
}

/// The Lie derivative `L_a`: `L_a y^b = f_abc y^c`, `L_a v^c = -f_abc v^b`,
/// `ad(u_a)` on enveloping factors.
pub fn lie_deriv(alg: &LieAlgebra, a: usize, w: &Elem) -> Result<Elem> {
    if a >= w.n || w.n != alg.dim() {
        return Err(Error::IndexOutOfRange { index: a + 1, dim: w.n.min(alg.dim()) });
    }
    if w.tag == Tag::Sphere {
        return Err(Error::TagMismatch { expected: "Lie algebra tag".into(), found: "SPHERE".into() });
    }
    Ok(lie(alg, a, w))
}

pub(crate) fn lie(alg: &LieAlgebra, a: usize, w: &Elem) -> Elem {
    let mut out = Elem::zero(w.tag, w.n);
    match w.tag {
        Tag::Ext | Tag::Cl => {
            for (m, c) in &w.terms {
                lie_ext_mono(alg, a, m, &mut out, c);
            }
        }
        Tag::Sym | Tag::W => {
            for (m, c) in &w.terms {
                lie_ext_mono(alg, a, m, &mut out, c);
                lie_sym_mono(alg, a, m, &mut out, c);
            }
        }
        Tag::Env => {
            out = pbw::ad_u(alg, a, w);
        }
        Tag::Ncw => {
            for (m, c) in &w.terms {
                lie_ext_mono(alg, a, m, &mut out, c);
                let u = Elem::from_mono(Tag::Env, w.n, Mono::new(m.sym.clone(), 0), c.clone());
                for (um, uc) in pbw::ad_u(alg, a, &u).terms() {
                    out.add_term(Mono::new(um.sym.clone(), m.ext), uc.clone());
                }
            }
        }
        Tag::Sphere => panic!("sphere Lie derivatives live on the sphere GDA"),
    }
    out
}

/// `L_a` on the symmetric factor only.
pub(crate) fn lie_sym(alg: &LieAlgebra, a: usize, w: &Elem) -> Elem {
    let mut out = Elem::zero(w.tag, w.n);
    for (m, c) in &w.terms {
        lie_sym_mono(alg, a, m, &mut out, c);
    }
    out
}

/// Koszul differential `d = -½ f_abc y^b y^c ι_a` on `∧g*`.
pub fn koszul_d(alg: &LieAlgebra, w: &Elem) -> Elem {
    let mut out = Elem::zero(w.tag, w.n);
    let half = rat(-1, 2);
    for a in 0..alg.dim() {
        let ia = iota(a, w);
        if ia.is_zero() {
            continue;
        }
        for (b, c, f) in alg.brackets(a) {
            let t = ext_mul(*b, &ext_mul(*c, &ia));
            out.add_scaled(&t, &(f * &half));
        }
    }
    out
}

/// The second form of the Koszul differential, `½ y^a L_a`.
pub fn koszul_d_via_lie(alg: &LieAlgebra, w: &Elem) -> Elem {
    let mut out = Elem::zero(w.tag, w.n);
    for a in 0..alg.dim() {
        out.add_scaled(&ext_mul(a, &lie(alg, a, w)), &rat(1, 2));
    }
    out
}

// ---------------------------------------------------------------------------
// Linear operators
// ---------------------------------------------------------------------------

/// A vector space element that operators can act on.
pub trait Vector: Clone + Send + Sync + 'static {
    fn zero_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn scaled(&self, c: &Rational) -> Self;
    fn is_zero_vec(&self) -> bool;
    fn render_vec(&self) -> String;
}

impl Vector for Elem {
    fn zero_like(&self) -> Self {
        Elem::zero(self.tag, self.n)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn scaled(&self, c: &Rational) -> Self {
        self.scale(c)
    }
    fn is_zero_vec(&self) -> bool {
        self.is_zero()
    }
    fn render_vec(&self) -> String {
        self.render()
    }
}

type OpFn<E> = dyn Fn(&E) -> E + Send + Sync;

/// Linear endomorphism with a declared parity.
pub struct LinOp<E> {
    f: Arc<OpFn<E>>,
    parity: u32,
}

impl<E> Clone for LinOp<E> {
    fn clone(&self) -> Self {
        LinOp { f: self.f.clone(), parity: self.parity }
    }
}

impl<E: Vector> LinOp<E> {
    pub fn new(parity: u32, f: impl Fn(&E) -> E + Send + Sync + 'static) -> Self {
        LinOp { f: Arc::new(f), parity: parity % 2 }
    }

    pub fn identity() -> Self {
        LinOp::new(0, |x: &E| x.clone())
    }

    pub fn zero(parity: u32) -> Self {
        LinOp::new(parity, |x: &E| x.zero_like())
    }

    pub fn parity(&self) -> u32 {
        self.parity
    }

    pub fn apply(&self, x: &E) -> E {
        (self.f)(x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinOp<E>) -> LinOp<E> {
        let (f, g) = (self.f.clone(), other.f.clone());
        LinOp::new(self.parity + other.parity, move |x| f(&g(x)))
    }

    pub fn plus(&self, other: &LinOp<E>) -> LinOp<E> {
        let (f, g) = (self.f.clone(), other.f.clone());
        LinOp::new(self.parity, move |x| f(x).plus(&g(x)))
    }

    pub fn minus(&self, other: &LinOp<E>) -> LinOp<E> {
        let (f, g) = (self.f.clone(), other.f.clone());
        LinOp::new(self.parity, move |x| f(x).plus(&g(x).scaled(&-Rational::one())))
    }

    pub fn scale(&self, c: Rational) -> LinOp<E> {
        let f = self.f.clone();
        LinOp::new(self.parity, move |x| f(x).scaled(&c))
    }

    /// Super-commutator `AB - (-1)^{|A||B|} BA`.
    pub fn supercommutator(a: &LinOp<E>, b: &LinOp<E>) -> LinOp<E> {
        let ab = a.compose(b);
        let ba = b.compose(a);
        if a.parity * b.parity == 1 {
            ab.plus(&ba)
        } else {
            ab.minus(&ba)
        }
    }

    /// `Σ_k A^k / k!` for a nilpotent `A`, stopping when a power vanishes.
    pub fn exp_nilpotent(a: &LinOp<E>) -> LinOp<E> {
        let f = a.f.clone();
        LinOp::new(0, move |x: &E| {
            let mut acc = x.clone();
            let mut term = x.clone();
            let mut k = 1i64;
            loop {
                term = f(&term).scaled(&rat(1, k));
                if term.is_zero_vec() {
                    break;
                }
                acc = acc.plus(&term);
                k += 1;
                assert!(k < 64, "operator is not nilpotent on this input");
            }
            acc
        })
    }
}

/// Outcome of an identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail { input: String, residual: String },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn fail(input: impl Into<String>, residual: impl Into<String>) -> Self {
        Verdict::Fail { input: input.into(), residual: residual.into() }
    }

    /// Keeps the first failure.
    pub fn and(self, other: impl FnOnce() -> Verdict) -> Verdict {
        match self {
            Verdict::Pass => other(),
            fail => fail,
        }
    }

    /// Compares two values, reporting the difference on mismatch.
    pub fn check_eq<E: Vector>(label: &str, lhs: &E, rhs: &E) -> Verdict {
        let diff = lhs.plus(&rhs.scaled(&-Rational::one()));
        if diff.is_zero_vec() {
            Verdict::Pass
        } else {
            Verdict::fail(label, diff.render_vec())
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::Fail { input, residual } => write!(f, "FAIL on {input}: residual {residual}"),
        }
    }
}

/// Applies `A - B` to every element of `basis` (in order) and reports the
/// first nonzero difference.
pub fn op_equal<E: Vector>(a: &LinOp<E>, b: &LinOp<E>, basis: &[E]) -> Verdict {
    let found = par::find_first(basis, |x| {
        let diff = a.apply(x).plus(&b.apply(x).scaled(&-Rational::one()));
        (!diff.is_zero_vec()).then(|| (x.render_vec(), diff.render_vec()))
    });
    match found {
        None => Verdict::Pass,
        Some((input, residual)) => Verdict::Fail { input, residual },
    }
}

/// Checks that `A` vanishes on every basis element.
pub fn op_is_zero<E: Vector>(a: &LinOp<E>, basis: &[E]) -> Verdict {
    op_equal(a, &LinOp::zero(a.parity), basis)
}

// ---------------------------------------------------------------------------
// Basis enumeration
// ---------------------------------------------------------------------------

/// Exponent vectors of length `n` and total degree `k`, lexicographically
/// descending.
pub fn exponent_vectors(n: usize, k: u32) -> Vec<Vec<u16>> {
    fn rec(n: usize, k: u32, prefix: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if prefix.len() == n - 1 {
            prefix.push(k as u16);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e as u16);
            rec(n, k - e, prefix, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Bitsets of `n` bits with exactly `j` ones, ascending.
pub fn subsets(n: usize, j: u32) -> Vec<u32> {
    (0u32..(1u32 << n)).filter(|s| s.count_ones() == j).collect()
}

/// Monomials of exactly the given Weil degree for the tag.
pub fn monomials_of_degree(tag: Tag, n: usize, d: u32) -> Vec<Mono> {
    let has_sym = tag.sym_letter().is_some();
    let has_ext = tag.ext_letter().is_some();
    let mut out = Vec::new();
    for k in 0..=d / 2 {
        if k > 0 && !has_sym {
            break;
        }
        let j = d - 2 * k;
        if j > 0 && (!has_ext || j as usize > n) {
            continue;
        }
        for e in subsets(n, j) {
            for s in exponent_vectors(n, k) {
                out.push(Mono::new(s, e));
            }
        }
    }
    out.sort();
    out
}

/// Monomials of Weil degree `≤ max_degree`, grouped by degree.
pub fn monomial_basis(tag: Tag, n: usize, max_degree: u32) -> Vec<Mono> {
    (0..=max_degree).flat_map(|d| monomials_of_degree(tag, n, d)).collect()
}

/// Basis monomials as elements.
pub fn basis(tag: Tag, n: usize, max_degree: u32) -> Vec<Elem> {
    monomial_basis(tag, n, max_degree).into_iter().map(|m| Elem::from_mono(tag, n, m, Rational::one())).collect()
}

// ---------------------------------------------------------------------------
// Tensor products
// ---------------------------------------------------------------------------

/// Element of a super tensor product `A ⊗ B`, both factors tagged.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    left: (Tag, usize),
    right: (Tag, usize),
    terms: BTreeMap<(Mono, Mono), Rational>,
}

impl Tensor {
    pub fn zero(left: (Tag, usize), right: (Tag, usize)) -> Self {
        Tensor { left, right, terms: BTreeMap::new() }
    }

    /// `a ⊗ b`.
    pub fn pure(a: &Elem, b: &Elem) -> Self {
        let mut t = Tensor::zero((a.tag, a.n), (b.tag, b.n));
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                t.add_term(ma.clone(), mb.clone(), ca * cb);
            }
        }
        t
    }

    pub fn left_kind(&self) -> (Tag, usize) {
        self.left
    }

    pub fn right_kind(&self) -> (Tag, usize) {
        self.right
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Mono, Mono), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, l: Mono, r: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((l, r)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Tensor, c: &Rational) {
        for ((l, r), v) in &other.terms {
            self.add_term(l.clone(), r.clone(), v * c);
        }
    }

    /// `Σ (A l) ⊗ (B r)` with the Koszul sign `(-1)^{|B||l|}`.
    pub fn map2(
        &self,
        left_tag: (Tag, usize),
        right_parity: u32,
        fl: impl Fn(&Mono) -> Elem,
        fr: impl Fn(&Mono) -> Elem,
    ) -> Tensor {
        let mut out = Tensor::zero(left_tag, self.right);
        for ((l, r), c) in &self.terms {
            let a = fl(l);
            if a.is_zero() {
                continue;
            }
            let b = fr(r);
            if b.is_zero() {
                continue;
            }
            let neg = right_parity * l.parity() == 1;
            let c = signed(c, neg);
            for (ma, ca) in &a.terms {
                for (mb, cb) in &b.terms {
                    out.add_term(ma.clone(), mb.clone(), ca * cb * &c);
                }
            }
        }
        out
    }

    /// `(A ⊗ 1)`.
    pub fn map_left(&self, left_tag: (Tag, usize), f: impl Fn(&Mono) -> Elem) -> Tensor {
        let right = self.right;
        self.map2(left_tag, 0, f, |r| Elem::from_mono(right.0, right.1, r.clone(), Rational::one()))
    }

    /// `(1 ⊗ B)` for an operator of the given parity.
    pub fn map_right(&self, parity: u32, f: impl Fn(&Mono) -> Elem) -> Tensor {
        let left = self.left;
        self.map2(left, parity, |l| Elem::from_mono(left.0, left.1, l.clone(), Rational::one()), f)
    }

    /// Super tensor product `(a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa' ⊗ bb'`.
    pub fn mul(
        &self,
        other: &Tensor,
        ml: impl Fn(&Elem, &Elem) -> Elem,
        mr: impl Fn(&Elem, &Elem) -> Elem,
    ) -> Tensor {
        let mut out = Tensor::zero(self.left, self.right);
        for ((l1, r1), c1) in &self.terms {
            let a1 = Elem::from_mono(self.left.0, self.left.1, l1.clone(), Rational::one());
            let b1 = Elem::from_mono(self.right.0, self.right.1, r1.clone(), Rational::one());
            for ((l2, r2), c2) in &other.terms {
                let a2 = Elem::from_mono(self.left.0, self.left.1, l2.clone(), Rational::one());
                let b2 = Elem::from_mono(self.right.0, self.right.1, r2.clone(), Rational::one());
                let neg = r1.parity() * l2.parity() == 1;
                let c = signed(&(c1 * c2), neg);
                let a = ml(&a1, &a2);
                if a.is_zero() {
                    continue;
                }
                let b = mr(&b1, &b2);
                for (ma, ca) in &a.terms {
                    for (mb, cb) in &b.terms {
                        out.add_term(ma.clone(), mb.clone(), ca * cb * &c);
                    }
                }
            }
        }
        out
    }

    /// Groups by the left monomial.
    pub fn by_left(&self) -> BTreeMap<Mono, Elem> {
        let mut out: BTreeMap<Mono, Elem> = BTreeMap::new();
        for ((l, r), c) in &self.terms {
            out.entry(l.clone())
                .or_insert_with(|| Elem::zero(self.right.0, self.right.1))
                .add_term(r.clone(), c.clone());
        }
        out
    }

    /// Groups by the right monomial.
    pub fn by_right(&self) -> BTreeMap<Mono, Elem> {
        let mut out: BTreeMap<Mono, Elem> = BTreeMap::new();
        for ((l, r), c) in &self.terms {
            out.entry(r.clone())
                .or_insert_with(|| Elem::zero(self.left.0, self.left.1))
                .add_term(l.clone(), c.clone());
        }
        out
    }

    /// Rebuilds from left monomials with right-factor coefficients.
    pub fn from_left_groups(left: (Tag, usize), right: (Tag, usize), groups: &BTreeMap<Mono, Elem>) -> Tensor {
        let mut t = Tensor::zero(left, right);
        for (l, e) in groups {
            for (r, c) in e.terms() {
                t.add_term(l.clone(), r.clone(), c.clone());
            }
        }
        t
    }

    /// The part with trivial right factor, as a left element.
    pub fn right_scalar_part(&self) -> Elem {
        let mut out = Elem::zero(self.left.0, self.left.1);
        let one = Mono::one(self.right.1);
        for ((l, r), c) in &self.terms {
            if r.sym == one.sym && r.ext == 0 {
                out.add_term(l.clone(), c.clone());
            }
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&Mono, &Mono) -> bool) -> Tensor {
        let mut out = Tensor::zero(self.left, self.right);
        for ((l, r), c) in &self.terms {
            if keep(l, r) {
                out.add_term(l.clone(), r.clone(), c.clone());
            }
        }
        out
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let groups = self.by_right();
        let mut parts = Vec::new();
        let mut keys: Vec<&Mono> = groups.keys().collect();
        let right_elem = |m: &Mono| Elem::from_mono(self.right.0, self.right.1, m.clone(), Rational::one());
        keys.sort_by_key(|m| (m.ext_degree(), std::cmp::Reverse((*m).clone())));
        for r in keys {
            let coeff = &groups[r];
            let rs = right_elem(r).render();
            if rs == "1" {
                parts.push(format!("({})", coeff.render()));
            } else {
                parts.push(format!("({})*{}", coeff.render(), rs));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Vector for Tensor {
    fn zero_like(&self) -> Self {
        Tensor::zero(self.left, self.right)
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }
    fn scaled(&self, c: &Rational) -> Self {
        let mut out = Tensor::zero(self.left, self.right);
        if !c.is_zero() {
            out.add_scaled(self, c);
        }
        out
    }
    fn is_zero_vec(&self) -> bool {
        self.is_zero()
    }
    fn render_vec(&self) -> String {
        self.render()
    }
}

/// Coordinates of vectors in a common monomial basis: returns the matrix
/// whose columns are the given elements.
pub fn coordinate_matrix(vectors: &[Elem]) -> (crate::ring::QMatrix, Vec<Mono>) {
    let mut keys: Vec<Mono> = vectors.iter().flat_map(|v| v.terms.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    let index: BTreeMap<&Mono, usize> = keys.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut m = crate::ring::QMatrix::zeros(keys.len(), vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        for (k, c) in &v.terms {
            m.set(index[k], j, c.clone());
        }
    }
    (m, keys)
}

/// Same as [`coordinate_matrix`] for tensors.
pub fn tensor_coordinate_matrix(vectors: &[Tensor]) -> crate::ring::QMatrix {
    let mut keys: Vec<&(Mono, Mono)> = vectors.iter().flat_map(|v| v.terms.keys()).collect();
    keys.sort();
    keys.dedup();
    let index: BTreeMap<&(Mono, Mono), usize> = keys.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut m = crate::ring::QMatrix::zeros(keys.len(), vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        for (k, c) in &v.terms {
            m.set(index[k], j, c.clone());
        }
    }
    m
}

fn sparse_rank_by<K: Ord + Clone>(cols: Vec<Vec<(K, Rational)>>) -> usize {
    let mut keys: Vec<K> = cols.iter().flat_map(|c| c.iter().map(|(k, _)| k.clone())).collect();
    keys.sort();
    keys.dedup();
    let columns: Vec<crate::ring::SparseVec> = cols
        .into_iter()
        .map(|c| {
            let mut v: crate::ring::SparseVec =
                c.into_iter().map(|(k, x)| (keys.binary_search(&k).expect("key present"), x)).collect();
            v.sort_by_key(|(i, _)| *i);
            v
        })
        .collect();
    columns.len() - crate::ring::sparse_kernel(&columns).len()
}

/// Rank of the span, by sparse elimination.
pub fn rank_of_elems(vectors: &[Elem]) -> usize {
    sparse_rank_by(vectors.iter().map(|v| v.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect()).collect())
}

/// Rank of the span, by sparse elimination.
pub fn rank_of_tensors(vectors: &[Tensor]) -> usize {
    sparse_rank_by(vectors.iter().map(|v| v.terms.iter().map(|(k, c)| (k.clone(), c.clone())).collect()).collect())
}
