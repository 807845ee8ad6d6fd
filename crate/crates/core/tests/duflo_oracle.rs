//! The Duflo map on su2 invariants against closed-form calculus:
//! `J^½(μ) = sin(r/2)/(r/2)` with `r = |μ|`, so `J^½(∂) = Σ_k c_k Δ^k` with
//! `c_k = (-1)^k / (4^k (2k+1)!)`.

use num_bigint::BigInt;
use weilkit::duflo::{duflo_map, lambda_power, DufloContext};
use weilkit::liedata::su2;
use weilkit::pbw::sym_map;
use weilkit::ring::factorial;
use weilkit::{Elem, Mono, Poly, Rational, Tag};

fn to_poly(e: &Elem) -> Poly {
    let mut p = Poly::zero(3);
    for (m, c) in e.terms() {
        p.add_term(m.sym.iter().map(|&x| u32::from(x)).collect(), c.clone());
    }
    p
}

fn to_elem(p: &Poly) -> Elem {
    let mut e = Elem::zero(Tag::Sym, 3);
    for (exps, c) in p.terms() {
        e.add_term(Mono::new(exps.iter().map(|&x| x as u16).collect(), 0), c.clone());
    }
    e
}

fn laplacian(p: &Poly) -> Poly {
    let mut out = Poly::zero(3);
    for a in 0..3 {
        out = &out + &p.derivative(a).derivative(a);
    }
    out
}

fn half_density_operator(p: &Poly) -> Poly {
    let mut out = Poly::zero(3);
    let mut term = p.clone();
    let mut k = 0u32;
    while !term.is_zero() {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let c = Rational::new(BigInt::from(sign), factorial(2 * k + 1) * BigInt::from(4u64.pow(k)));
        out = &out + &term.scale(&c);
        term = laplacian(&term);
        k += 1;
    }
    out
}

#[test]
fn quadratic_shift_is_minus_a_quarter() {
    let g = su2();
    let ctx = DufloContext::new(&g, 6);
    let lam = lambda_power(&g, 1);
    let shifted = half_density_operator(&to_poly(&lam));
    assert_eq!(shifted.coeff(&[0, 0, 0]), Rational::new((-1).into(), 4.into()));
    assert_eq!(duflo_map(&ctx, &lam).unwrap().render(), "u1^2 + u2^2 + u3^2 - 1/4");
}

#[test]
fn duflo_matches_closed_form_on_powers_of_lambda() {
    let g = su2();
    let ctx = DufloContext::new(&g, 6);
    for k in 1..=3 {
        let p = lambda_power(&g, k);
        let oracle = sym_map(&g, &to_elem(&half_density_operator(&to_poly(&p))));
        assert_eq!(duflo_map(&ctx, &p).unwrap(), oracle, "lambda^{k}");
    }
}
