use proptest::prelude::*;

use weilkit::cartan::{sphere_nf, Cartan, ExtGda, Gda, Model, SphereGda};
use weilkit::clifford::{cl_mul, cl_mul_oracle};
use weilkit::expr::parse_elem;
use weilkit::liedata::{so4, su2};
use weilkit::multivec::{mul, Vector};
use weilkit::pbw::u_mul;
use weilkit::ring::{rat, sparse_kernel, SparseVec};
use weilkit::{Elem, Mono, Poly, QMatrix, Rational, Tag, TruncSeries};

fn coef() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

/// Up to `len` terms with symmetric exponents below `max_exp` and exterior
/// bits below `2^n` (or none when `ext` is false).
fn elem(tag: Tag, n: usize, max_exp: u16, ext: bool, len: usize) -> impl Strategy<Value = Elem> {
    let term = (proptest::collection::vec(0..=max_exp, n), 0u32..(1 << n), coef());
    proptest::collection::vec(term, 0..=len).prop_map(move |terms| {
        let mut e = Elem::zero(tag, n);
        for (s, bits, c) in terms {
            e.add_term(Mono::new(s, if ext { bits } else { 0 }), c);
        }
        e
    })
}

fn cl(n: usize) -> impl Strategy<Value = Elem> {
    elem(Tag::Cl, n, 0, true, 3)
}

fn poly(nvars: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec((proptest::collection::vec(0u32..3, nvars), coef()), 0..4).prop_map(move |terms| {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_ring_axioms(a in poly(2), b in poly(2), c in poly(2)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn series_log_exp(cs in proptest::collection::vec(coef(), 5)) {
        let mut coeffs = vec![rat(0, 1)];
        coeffs.extend(cs);
        let x = TruncSeries::new(coeffs, 5);
        prop_assert_eq!(x.exp().unwrap().log().unwrap(), x);
    }

    #[test]
    fn rank_nullity(rows in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 5), 1..5)) {
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let m = QMatrix::from_i64(&refs);
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(|x| *x == rat(0, 1)));
        }
        let cols: Vec<SparseVec> = (0..m.cols())
            .map(|j| (0..m.rows()).filter(|&i| *m.get(i, j) != rat(0, 1)).map(|i| (i, m.get(i, j).clone())).collect())
            .collect();
        prop_assert_eq!(sparse_kernel(&cols).len(), kernel.len());
    }

    #[test]
    fn clifford_matches_oracle_and_associates(a in cl(5), b in cl(5), c in cl(5)) {
        let ab = cl_mul(&a, &b).unwrap();
        prop_assert_eq!(&ab, &cl_mul_oracle(&a, &b).unwrap());
        prop_assert_eq!(cl_mul(&ab, &c).unwrap(), cl_mul(&a, &cl_mul(&b, &c).unwrap()).unwrap());
    }

    #[test]
    fn enveloping_product_associates(a in elem(Tag::Env, 3, 2, false, 2), b in elem(Tag::Env, 3, 2, false, 2), c in elem(Tag::Env, 3, 1, false, 2)) {
        let g = su2();
        let l = u_mul(&g, &u_mul(&g, &a, &b).unwrap(), &c).unwrap();
        let r = u_mul(&g, &a, &u_mul(&g, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn ncw_product_associates(a in elem(Tag::Ncw, 3, 1, true, 2), b in elem(Tag::Ncw, 3, 1, true, 2), c in elem(Tag::Ncw, 3, 1, true, 2)) {
        let g = su2();
        let l = mul(&g, &mul(&g, &a, &b).unwrap(), &c).unwrap();
        let r = mul(&g, &a, &mul(&g, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn odot_associates_on_exterior(a in elem(Tag::Ext, 4, 0, true, 3), b in elem(Tag::Ext, 4, 0, true, 3), c in elem(Tag::Ext, 4, 0, true, 3)) {
        let g = so4();
        let ext6 = |e: &Elem| {
            let mut out = Elem::zero(Tag::Ext, 6);
            for (m, x) in e.terms() {
                out.add_term(Mono::new(vec![0; 6], m.ext), x.clone());
            }
            out
        };
        let (a, b, c) = (ext6(&a), ext6(&b), ext6(&c));
        let ext = ExtGda::new(&g);
        let nc = Cartan::new(Model::Nc, &g, &ext);
        prop_assert_eq!(nc.odot_b(&nc.odot_b(&a, &b), &c), nc.odot_b(&a, &nc.odot_b(&b, &c)));
    }

    #[test]
    fn sphere_normal_form_is_a_projection(a in elem(Tag::Sphere, 3, 3, true, 3), b in elem(Tag::Sphere, 3, 2, true, 2)) {
        let g = su2();
        let sp = SphereGda::new(&g, -1, 4).unwrap();
        let na = sphere_nf(&a);
        prop_assert_eq!(sphere_nf(&na), na.clone());
        let nb = sphere_nf(&b);
        // reduction commutes with products
        prop_assert_eq!(sp.mul(&na, &nb), sphere_nf(&sp.mul(&a, &b)));
        for k in 0..3 {
            prop_assert!(sp.iota(k, &sp.iota(k, &na)).is_zero());
        }
    }

    #[test]
    fn render_parse_round_trip(w in elem(Tag::W, 3, 2, true, 4), u in elem(Tag::Ncw, 3, 2, true, 4)) {
        let g = su2();
        prop_assert_eq!(parse_elem(&w.render(), Tag::W, &g).unwrap(), w);
        prop_assert_eq!(parse_elem(&u.render(), Tag::Ncw, &g).unwrap(), u);
    }
}

#[test]
fn round_trip_corpus() {
    let g = su2();
    let corpus = [
        ("v1*v1 + v2*v2 + v3*v3", Tag::Sym),
        ("u2*u1 - 3/4", Tag::Env),
        ("(x1 + x2)^3", Tag::Cl),
        ("-y1*y2*y3 + 2*y1", Tag::Ext),
        ("v1^2*y2 - 1/3*v3*y1*y3", Tag::W),
        ("u1*x2*x3 - x3*u1", Tag::Ncw),
        ("n3^2 + n1*dn2*dn3", Tag::Sphere),
    ];
    for (text, tag) in corpus {
        let e = parse_elem(text, tag, &g).unwrap();
        assert_eq!(parse_elem(&e.render(), tag, &g).unwrap(), e, "{text}");
    }
}

#[test]
fn nc_odot_on_invariants() {
    let g = su2();
    let ext = ExtGda::new(&g);
    let nc = Cartan::new(Model::Nc, &g, &ext);
    let inv: Vec<(u32, weilkit::multivec::Tensor)> =
        (0..=4).flat_map(|k| nc.invariants(k).into_iter().map(move |t| (k, t))).collect();
    assert!(inv.len() >= 4);
    for (ka, a) in &inv {
        for (_, b) in &inv {
            let ab = nc.odot(a, b).unwrap();
            let sign = if ka % 2 == 1 { rat(-1, 1) } else { rat(1, 1) };
            let rhs = nc.odot(&nc.d(a).unwrap(), b).unwrap().plus(&nc.odot(a, &nc.d(b).unwrap()).unwrap().scaled(&sign));
            assert_eq!(nc.d(&ab).unwrap(), rhs);
            for (_, c) in inv.iter().take(4) {
                assert_eq!(nc.odot(&ab, c).unwrap(), nc.odot(a, &nc.odot(b, c).unwrap()).unwrap());
            }
        }
    }
}
