//! The enveloping algebra in PBW normal order (ascending generator index)
//! and Birkhoff–Witt symmetrization.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::liedata::LieAlgebra;
use crate::multivec::{Elem, Mono, Tag};
use crate::ring::Rational;

type Cache = HashMap<(Vec<u16>, usize), Elem>;

/// `u^α · u_c` in normal order.
fn mul_gen_mono(alg: &LieAlgebra, alpha: &[u16], c: usize, cache: &mut Cache) -> Elem {
    let n = alpha.len();
    let top = alpha.iter().rposition(|&k| k > 0);
    match top {
        Some(m) if m > c => {
            let key = (alpha.to_vec(), c);
            if let Some(hit) = cache.get(&key) {
                return hit.clone();
            }
            let mut rest = alpha.to_vec();
            rest[m] -= 1;
            // u^{α'} u_m u_c = (u^{α'} u_c) u_m + f_mcd u^{α'} u_d
            let head = mul_gen_mono(alg, &rest, c, cache);
            let mut out = mul_gen(alg, &head, m, cache);
            for (cc, d, f) in alg.brackets(m) {
                if *cc == c {
                    out.add_scaled(&mul_gen_mono(alg, &rest, *d, cache), f);
                }
            }
            cache.insert(key, out.clone());
            out
        }
        _ => {
            let mut beta = alpha.to_vec();
            beta[c] += 1;
            Elem::from_mono(Tag::Env, n, Mono::new(beta, 0), Rational::one())
        }
    }
}

fn mul_gen(alg: &LieAlgebra, w: &Elem, c: usize, cache: &mut Cache) -> Elem {
    let mut out = Elem::zero(Tag::Env, w.n());
    for (m, k) in w.terms() {
        out.add_scaled(&mul_gen_mono(alg, &m.sym, c, cache), k);
    }
    out
}

/// Product of two PBW monomials.
pub fn u_mul_mono(alg: &LieAlgebra, a: &[u16], b: &[u16]) -> Elem {
    let n = a.len();
    let mut cache = Cache::new();
    let mut acc = Elem::from_mono(Tag::Env, n, Mono::new(a.to_vec(), 0), Rational::one());
    for (c, &k) in b.iter().enumerate() {
        for _ in 0..k {
            acc = mul_gen(alg, &acc, c, &mut cache);
        }
    }
    acc
}

/// Product in `U(g)`.
pub fn u_mul(alg: &LieAlgebra, a: &Elem, b: &Elem) -> Result<Elem> {
    for e in [a, b] {
        if e.tag() != Tag::Env {
            return Err(Error::TagMismatch { expected: "ENV".into(), found: e.tag().name().into() });
        }
    }
    crate::multivec::mul(alg, a, b)
}

/// Product of a word of generators, left to right.
pub fn u_word(alg: &LieAlgebra, letters: &[usize]) -> Elem {
    let n = alg.dim();
    let mut cache = Cache::new();
    let mut acc = Elem::one(Tag::Env, n);
    for &c in letters {
        acc = mul_gen(alg, &acc, c, &mut cache);
    }
    acc
}

/// `ad(u_a) w = u_a w - w u_a`.
pub fn ad_u(alg: &LieAlgebra, a: usize, w: &Elem) -> Elem {
    let ua = Elem::sym_gen(Tag::Env, w.n(), a);
    let left = crate::multivec::mul_unchecked(alg, &ua, w);
    let right = crate::multivec::mul_unchecked(alg, w, &ua);
    &left - &right
}

/// Distinct orderings of a multiset of letters.
fn multiset_permutations(counts: &mut [u16], prefix: &mut Vec<usize>, len: usize, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    for i in 0..counts.len() {
        if counts[i] == 0 {
            continue;
        }
        counts[i] -= 1;
        prefix.push(i);
        multiset_permutations(counts, prefix, len, out);
        prefix.pop();
        counts[i] += 1;
    }
}

/// Symmetrization of one monomial `v^α`: the average of all orderings.
pub fn sym_mono(alg: &LieAlgebra, alpha: &[u16]) -> Elem {
    let len: usize = alpha.iter().map(|&k| k as usize).sum();
    let mut words = Vec::new();
    multiset_permutations(&mut alpha.to_vec(), &mut Vec::with_capacity(len), len, &mut words);
    let mut out = Elem::zero(Tag::Env, alpha.len());
    let mut cache = Cache::new();
    let w = Rational::new(One::one(), (words.len() as i64).into());
    for word in &words {
        let mut acc = Elem::one(Tag::Env, alpha.len());
        for &c in word {
            acc = mul_gen(alg, &acc, c, &mut cache);
        }
        out.add_scaled(&acc, &w);
    }
    out
}

/// Birkhoff–Witt symmetrization `S(g) → U(g)`.
pub fn sym_map(alg: &LieAlgebra, p: &Elem) -> Elem {
    let mut out = Elem::zero(Tag::Env, p.n());
    for (m, c) in p.terms() {
        out.add_scaled(&sym_mono(alg, &m.sym), c);
    }
    out
}

/// `true` iff `[w, u_a] = 0` for every generator.
pub fn is_central(alg: &LieAlgebra, w: &Elem) -> bool {
    (0..alg.dim()).all(|a| ad_u(alg, a, w).is_zero())
}

/// Leading symbol: the top filtration part read as a polynomial.
pub fn gr(w: &Elem) -> Elem {
    let top = w.max_sym_degree();
    w.filter(|m| m.sym_degree() == top).retag(Tag::Sym)
}

/// The quadratic Casimir `Σ u_a u_a`.
pub fn casimir(alg: &LieAlgebra) -> Elem {
    let n = alg.dim();
    let mut out = Elem::zero(Tag::Env, n);
    for a in 0..n {
        out = &out + &u_word(alg, &[a, a]);
    }
    out
}

/// `(Σ_b μ_b u_b)^k`.
pub fn linear_power(alg: &LieAlgebra, mu: &[Rational], k: usize) -> Elem {
    let n = alg.dim();
    let mut lin = Elem::zero(Tag::Env, n);
    for (b, c) in mu.iter().enumerate() {
        if !c.is_zero() {
            lin.add_scaled(&Elem::sym_gen(Tag::Env, n, b), c);
        }
    }
    let mut acc = Elem::one(Tag::Env, n);
    for _ in 0..k {
        acc = crate::multivec::mul_unchecked(alg, &acc, &lin);
    }
    acc
}

/// Multinomial weight used in tests: `k! / Π α_i!`.
pub fn multinomial(alpha: &[u16]) -> Rational {
    let k: u32 = alpha.iter().map(|&a| a as u32).sum();
    let mut r = Rational::from_integer(crate::ring::factorial(k));
    for &a in alpha {
        r /= Rational::from_integer(crate::ring::factorial(a as u32));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liedata::{abelian, su2};
    use crate::ring::{int, rat};

    fn u(a: usize) -> Elem {
        Elem::sym_gen(Tag::Env, 3, a)
    }

    #[test]
    fn commutator_rewrite() {
        let g = su2();
        assert_eq!(u_mul(&g, &u(1), &u(0)).unwrap().render(), "u1*u2 - u3");
        let one = Elem::one(Tag::Env, 3);
        assert_eq!(u_mul(&g, &one, &u(2)).unwrap(), u(2));
    }

    #[test]
    fn associativity_small() {
        let g = su2();
        let u11 = u_word(&g, &[0, 0]);
        let lhs = u_mul(&g, &u11, &u(1)).unwrap();
        let rhs = u_mul(&g, &u(0), &u_word(&g, &[0, 1])).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn symmetrization() {
        let g = su2();
        let mut v12 = Elem::zero(Tag::Sym, 3);
        v12.add_term(Mono::new(vec![1, 1, 0], 0), int(1));
        assert_eq!(sym_map(&g, &v12).render(), "u1*u2 - 1/2*u3");
        let v1 = Elem::sym_gen(Tag::Sym, 3, 0);
        assert_eq!(sym_map(&g, &v1), u(0));
        let mut v11 = Elem::zero(Tag::Sym, 3);
        v11.add_term(Mono::new(vec![2, 0, 0], 0), int(1));
        assert_eq!(sym_map(&g, &v11).render(), "u1^2");
    }

    #[test]
    fn centrality() {
        let g = su2();
        assert!(is_central(&g, &casimir(&g)));
        assert!(!is_central(&g, &u(0)));
        let a = abelian(3);
        assert!(is_central(&a, &u_word(&a, &[0, 1])));
    }

    #[test]
    fn multinomial_weights() {
        assert_eq!(multinomial(&[2, 1]), int(3));
        assert_eq!(multinomial(&[1, 1, 1]), int(6));
        assert_eq!(rat(6, 2), int(3));
    }
}
