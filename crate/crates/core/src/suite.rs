//! Named verification suites, each producing a [`Report`].

use std::time::Instant;

use crate::cartan::{
    equivariant_cohomology, gda_axioms, invariants, q_cartan_chain_check, sphere_suite, twisted_d_check,
    weil_vs_cartan_check, Cartan, ExtGda, Gda, Model, SphereGda, SymGda, Trivial, WeilGda,
};
use crate::clifford::{
    berezin_check, cl_mul, cl_mul_oracle, di_check, g_and_gamma, tau_symbol_check, tau_symbol_check_with, AdSide,
};
use crate::duflo::{
    cdyb_check_ctx, chain_check, dlogj_check, duflo_ring_check, lambda, lambda_power, non_invariant_pair,
    triangularity_check, DufloContext,
};
use crate::error::{Error, Result};
use crate::liedata::LieAlgebra;
use crate::multivec::{basis, Elem, Mono, Tag, Verdict};
use crate::report::{CheckRecord, Report};
use crate::ring::{int, rat, QMatrix, Rational};
use crate::weil::{
    all_pass, cl_homotopy_check, dirac_square, dirac_square_formula, ext_ops, g_relations, gr_check, homology,
    inner_derivations_check, nc_weil_d_two_routes, ncw_ops, tau0_conj_check, weil_ops, Betti, Complex, Kalkman,
    Side,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Core,
    Duflo,
    Cartan,
    Sphere,
    Clifford,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Core, Suite::Duflo, Suite::Cartan, Suite::Sphere, Suite::Clifford];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Duflo => "duflo",
            Suite::Cartan => "cartan",
            Suite::Sphere => "sphere",
            Suite::Clifford => "clifford",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite `{s}`")))
    }
}

/// 6 for three-dimensional algebras, 4 otherwise.
pub fn default_degree(alg: &LieAlgebra) -> u32 {
    if alg.dim() <= 3 {
        6
    } else {
        4
    }
}

type Outcome = Result<(Verdict, Option<String>)>;

struct Runner<'a> {
    report: Report,
    alg: &'a LieAlgebra,
    timing: bool,
}

impl Runner<'_> {
    fn check(&mut self, id: &str, degree: u32, f: impl FnOnce() -> Outcome) -> Result<()> {
        let start = Instant::now();
        let (verdict, value) = f()?;
        let mut rec = CheckRecord::new(id, self.alg.name(), degree, &verdict).with_value(value);
        if self.timing {
            rec.timing_ms = Some(start.elapsed().as_millis() as u64);
        }
        self.report.checks.push(rec);
        Ok(())
    }
}

fn plain(v: Verdict) -> Outcome {
    Ok((v, None))
}

fn betti_string(b: &Betti) -> String {
    let parts: Vec<String> = b.labels.iter().zip(&b.values).map(|(l, v)| format!("{l}:{v}")).collect();
    parts.join(" ")
}

fn expect_betti(b: Betti, expected: &[usize]) -> Outcome {
    let v = if b.values == expected {
        Verdict::Pass
    } else {
        Verdict::fail(format!("expected {expected:?}"), format!("{:?}", b.values))
    };
    Ok((v, Some(betti_string(&b))))
}

/// Runs one suite at degree `deg`.
pub fn run(suite: Suite, alg: &LieAlgebra, deg: u32, timing: bool) -> Result<Report> {
    if suite == Suite::Sphere && alg.dim() != 3 {
        return Err(Error::Invalid(format!("the sphere suite needs a 3-dimensional algebra, got {}", alg.name())));
    }
    let mut r = Runner { report: Report::new(alg.name(), &format!("verify {}", suite.name()), deg), alg, timing };
    match suite {
        Suite::Core => core(&mut r, deg)?,
        Suite::Duflo => duflo(&mut r, deg)?,
        Suite::Cartan => cartan(&mut r, deg)?,
        Suite::Sphere => sphere(&mut r, deg)?,
        Suite::Clifford => clifford(&mut r, deg)?,
    }
    Ok(r.report)
}

fn cl_basis_elem(n: usize, bits: u32) -> Elem {
    Elem::from_mono(Tag::Cl, n, Mono::new(vec![0; n], bits), int(1))
}

/// `cl_mul` against word rewriting: all basis pairs when `n ≤ 6`, else all
/// pairs with `|I| + |J| ≤ 4`.
pub fn kostant_vs_oracle(n: usize) -> Verdict {
    let all: Vec<u32> = (0..1u32 << n).collect();
    let left: Vec<u32> = if n <= 6 { all.clone() } else { all.iter().copied().filter(|b| b.count_ones() <= 4).collect() };
    let fail = crate::par::find_first(&left, |&i| {
        let a = cl_basis_elem(n, i);
        all.iter()
            .filter(|j| n <= 6 || i.count_ones() + j.count_ones() <= 4)
            .find_map(|&j| {
                let b = cl_basis_elem(n, j);
                let fast = cl_mul(&a, &b).expect("same space");
                let slow = cl_mul_oracle(&a, &b).expect("same space");
                (fast != slow).then(|| Verdict::fail(format!("{} * {}", a.render(), b.render()), (&fast - &slow).render()))
            })
    });
    fail.unwrap_or(Verdict::Pass)
}

/// `γ·γ = -1/48 f_abc f_abc`.
pub fn gamma_square(alg: &LieAlgebra) -> (Verdict, String) {
    let (_, gamma) = g_and_gamma(alg);
    let sq = cl_mul(&gamma, &gamma).expect("same space");
    let expected = Elem::scalar(Tag::Cl, alg.dim(), alg.f_norm2() * rat(-1, 48));
    (Verdict::check_eq("gamma^2", &sq, &expected), sq.render())
}

/// `𝔇²` directly and by formula, and its centrality.
pub fn dirac_check(alg: &LieAlgebra) -> (Verdict, String) {
    let direct = dirac_square(alg);
    let v = Verdict::check_eq("D^2", &direct, &dirac_square_formula(alg)).and(|| {
        let x = direct.retag(Tag::Ncw);
        let n = alg.dim();
        let gens: Vec<Elem> = (0..n).flat_map(|a| [Elem::sym_gen(Tag::Ncw, n, a), Elem::ext_gen(Tag::Ncw, n, a)]).collect();
        for g in gens {
            let c = &crate::multivec::mul_unchecked(alg, &x, &g) - &crate::multivec::mul_unchecked(alg, &g, &x);
            if !c.is_zero() {
                return Verdict::fail(format!("[D^2, {}]", g.render()), c.render());
            }
        }
        Verdict::Pass
    });
    (v, direct.render())
}

fn core(r: &mut Runner, deg: u32) -> Result<()> {
    let alg = r.alg;
    let n = alg.dim();
    r.check("relations.ext", n as u32, || plain(all_pass(&g_relations(alg, &ext_ops(alg), &basis(Tag::Ext, n, n as u32)))))?;
    r.check("relations.weil", deg, || plain(all_pass(&g_relations(alg, &weil_ops(alg), &basis(Tag::W, n, deg)))))?;
    r.check("relations.ncw", deg, || plain(all_pass(&g_relations(alg, &ncw_ops(alg), &basis(Tag::Ncw, n, deg)))))?;
    r.check("kostant.oracle", n as u32, || plain(kostant_vs_oracle(n)))?;
    r.check("gamma.square", 0, || {
        let (v, s) = gamma_square(alg);
        Ok((v, Some(s)))
    })?;
    r.check("dirac.square", 0, || {
        let (v, s) = dirac_check(alg);
        Ok((v, Some(s)))
    })?;
    r.check("ncw.d.two-routes", deg, || plain(nc_weil_d_two_routes(alg, deg)))?;
    r.check("ncw.inner-derivations", deg, || plain(inner_derivations_check(alg, deg)))?;
    r.check("ncw.gr", deg, || plain(gr_check(alg, deg)))?;
    r.check("homology.ext", n as u32, || {
        let oracle: Vec<usize> = invariants(&ExtGda::new(alg), n as u32).iter().map(Vec::len).collect();
        expect_betti(homology(alg, Complex::ExtKoszul, n as u32), &oracle)
    })?;
    r.check("homology.cl", n as u32, || {
        let expected = if alg.is_abelian() { vec![1 << (n.max(1) - 1); 2] } else { vec![0, 0] };
        let expected = if n == 0 { vec![1, 0] } else { expected };
        expect_betti(homology(alg, Complex::ClAdGamma, n as u32), &expected)
    })?;
    if !alg.is_abelian() {
        r.check("homology.cl.homotopy", n as u32, || plain(cl_homotopy_check(alg)))?;
    }
    let wdeg = deg.max(2) - 1;
    r.check("homology.weil", wdeg, || {
        let mut expected = vec![0; wdeg as usize];
        expected[0] = 1;
        expect_betti(homology(alg, Complex::WFull, wdeg), &expected)
    })?;
    let tdeg = deg.min(5);
    r.check("tau0.conjugation", tdeg, || plain(tau0_conj_check(alg, tdeg)))?;
    Ok(())
}

fn duflo(r: &mut Runner, deg: u32) -> Result<()> {
    let alg = r.alg;
    let order = deg as usize;
    let ctx = DufloContext::new(alg, order);
    r.check("chain", deg, || plain(chain_check(&ctx, deg)?))?;
    r.check("triangularity", deg, || plain(triangularity_check(&ctx, deg)?))?;
    r.check("cdyb", deg, || plain(cdyb_check_ctx(&ctx)))?;
    r.check("dlogj", deg, || plain(dlogj_check(alg, order)))?;
    r.check("ring.lambda2", 4, || {
        let ring = DufloContext::new(alg, order.max(4));
        plain(duflo_ring_check(&ring, &lambda(alg.dim()), &lambda(alg.dim()))?)
    })?;
    if alg.dim() == 3 {
        r.check("ring.lambda3", 6, || {
            let ring = DufloContext::new(alg, order.max(6));
            plain(duflo_ring_check(&ring, &lambda_power(alg, 2), &lambda(3))?)
        })?;
    }
    if !alg.is_abelian() {
        r.check("lock.flipped-t", deg, || {
            let flipped = ctx.with_flipped_t();
            let cdyb = cdyb_check_ctx(&flipped);
            let chain = chain_check(&flipped, deg)?;
            let v = match (cdyb.is_pass(), chain.is_pass()) {
                (false, false) => Verdict::Pass,
                (c, h) => Verdict::fail("T -> -T", format!("cdyb passes: {c}, chain passes: {h}")),
            };
            plain(v)
        })?;
        r.check("ring.non-invariant", 2, || {
            let (lhs, rhs) = non_invariant_pair(&DufloContext::new(alg, order.max(2)))?;
            let value = format!("Duf(v1*v2) = {}; Duf(v1)*Duf(v2) = {}", lhs.render(), rhs.render());
            let v = if lhs != rhs { Verdict::Pass } else { Verdict::fail("v1*v2", "Duf is multiplicative here") };
            Ok((v, Some(value)))
        })?;
    }
    Ok(())
}

fn cartan(r: &mut Runner, deg: u32) -> Result<()> {
    let alg = r.alg;
    let kdeg = deg.min(5);
    let trivial = Trivial::new(alg);
    let ext = ExtGda::new(alg);
    let weil = WeilGda::new(alg);
    let instances: [(&str, &dyn Gda); 3] = [("trivial", &trivial), ("ext", &ext), ("weil", &weil)];
    for (name, b) in instances {
        r.check(&format!("gda-axioms.{name}"), kdeg, || plain(gda_axioms(alg, b, kdeg)))?;
    }
    for (side, sname) in [(Side::W, "w"), (Side::Nc, "nc")] {
        for (name, b) in [("ext", &ext as &dyn Gda), ("weil", &weil)] {
            r.check(&format!("kalkman.{sname}.{name}"), kdeg, || plain(Kalkman::new(side, alg, b).conj_check(kdeg)))?;
        }
    }
    r.check("weil-vs-cartan.comm.trivial", kdeg, || plain(weil_vs_cartan_check(Model::Comm, &trivial, alg, kdeg)))?;
    r.check("weil-vs-cartan.comm.ext", kdeg, || plain(weil_vs_cartan_check(Model::Comm, &ext, alg, kdeg)))?;
    r.check("weil-vs-cartan.nc.ext", kdeg, || plain(weil_vs_cartan_check(Model::Nc, &ext, alg, kdeg)))?;
    r.check("dg-squared.comm.ext", kdeg, || plain(Cartan::new(Model::Comm, alg, &ext).d_squared_check(kdeg)))?;
    r.check("dg-squared.nc.ext", kdeg, || plain(Cartan::new(Model::Nc, alg, &ext).d_squared_check(kdeg)))?;
    r.check("twisted-d.trivial", kdeg, || plain(twisted_d_check(&trivial, alg, kdeg)))?;
    r.check("twisted-d.ext", kdeg, || plain(twisted_d_check(&ext, alg, kdeg)))?;
    r.check("q-cartan.chain.ext", kdeg, || {
        let ctx = DufloContext::new(alg, (kdeg / 2 + 1) as usize);
        plain(q_cartan_chain_check(&ctx, &ext, kdeg)?)
    })?;
    r.check("cohomology.trivial", deg, || {
        let oracle: Vec<usize> = invariants(&SymGda::new(alg), deg).iter().map(Vec::len).collect();
        expect_betti(equivariant_cohomology(Model::Comm, &trivial, alg, deg)?, &oracle)
    })?;
    Ok(())
}

fn sphere(r: &mut Runner, deg: u32) -> Result<()> {
    let alg = r.alg;
    let ctx = DufloContext::new(alg, 4);
    let report = sphere_suite(&ctx, -1, -1)?;
    for s in &report.steps {
        let (v, value) = (s.verdict.clone(), s.value.clone());
        r.check(&format!("step.{}", s.id), 4, || Ok((v, value)))?;
    }
    let c = report.duflo_constant.clone();
    r.check("duflo-constant", 4, || {
        let v = match c.as_deref() {
            Some("1/4") | Some("-1/4") => Verdict::Pass,
            other => Verdict::fail("c in Q(lambda) = u.u + c", format!("{other:?}")),
        };
        Ok((v, c.clone()))
    })?;
    r.check("rejected-conventions", 4, || {
        for (s, o) in [(1, 1), (1, -1), (-1, 1)] {
            if sphere_suite(&ctx, s, o)?.all_pass() {
                return plain(Verdict::fail(format!("s={s} omega_sign={o}"), "passes"));
            }
        }
        plain(Verdict::Pass)
    })?;
    let sp = SphereGda::new(alg, -1, 4)?;
    r.check("gda-axioms", 2, || plain(gda_axioms(alg, &sp, 2)))?;
    r.check("rejected-rotation", 2, || {
        let wrong = SphereGda::new(alg, 1, 2)?;
        let v = if gda_axioms(alg, &wrong, 2).is_pass() { Verdict::fail("s=+1", "axioms hold") } else { Verdict::Pass };
        plain(v)
    })?;
    r.check("twisted-d", 4.min(deg), || plain(twisted_d_check(&sp, alg, 4.min(deg))))?;
    r.check("cohomology", deg, || {
        let expected: Vec<usize> = (0..=deg).map(|k| usize::from(k % 2 == 0)).collect();
        expect_betti(equivariant_cohomology(Model::Comm, &sp, alg, deg)?, &expected)
    })?;
    Ok(())
}

/// A few invertible skew matrices for the Gaussian checks.
pub fn sample_skew_matrices() -> Vec<QMatrix> {
    vec![
        QMatrix::from_i64(&[&[0, 3], &[-3, 0]]),
        QMatrix::from_i64(&[&[0, 1, 2, 0], &[-1, 0, 1, 3], &[-2, -1, 0, 1], &[0, -3, -1, 0]]),
        QMatrix::from_rows(&[
            vec![int(0), rat(1, 2), int(0), int(0)],
            vec![rat(-1, 2), int(0), int(0), int(0)],
            vec![int(0), int(0), int(0), rat(-2, 3)],
            vec![int(0), int(0), rat(2, 3), int(0)],
        ]),
        QMatrix::from_i64(&[
            &[0, 1, 0, 2, 0, 1],
            &[-1, 0, 3, 0, 1, 0],
            &[0, -3, 0, 1, 0, 2],
            &[-2, 0, -1, 0, 1, 0],
            &[0, -1, 0, -1, 0, 1],
            &[-1, 0, -2, 0, -1, 0],
        ]),
    ]
}

fn clifford(r: &mut Runner, deg: u32) -> Result<()> {
    let alg = r.alg;
    let order = deg as usize;
    for (i, s) in sample_skew_matrices().iter().enumerate() {
        r.check(&format!("berezin.{i}"), 0, || plain(berezin_check(s)?))?;
    }
    let blocks = [QMatrix::from_i64(&[&[0, 1], &[-1, 0]]), QMatrix::from_i64(&[&[0, 2, 0, 0], &[-2, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]])];
    for s in &blocks {
        r.check(&format!("di.block{}", s.rows()), deg, || plain(di_check(s, order)))?;
    }
    let n = alg.dim();
    let directions: Vec<Vec<Rational>> = vec![
        (0..n).map(|a| int(i64::from(a == n - 1))).collect(),
        (0..n).map(|a| int(i64::from(a < 2))).collect(),
    ];
    for (i, mu) in directions.iter().enumerate() {
        r.check(&format!("tau-symbol.{i}"), deg, || plain(tau_symbol_check(alg, mu, order)))?;
    }
    if !alg.is_abelian() {
        r.check("tau-symbol.forward-rejected", deg.min(4), || {
            let v = if tau_symbol_check_with(alg, &directions[0], order.min(4), AdSide::Forward).is_pass() {
                Verdict::fail("Ad_g = exp(t ad)", "passes")
            } else {
                Verdict::Pass
            };
            plain(v)
        })?;
    }
    r.check("gamma.square", 0, || {
        let (v, s) = gamma_square(alg);
        Ok((v, Some(s)))
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liedata::{abelian, su2};

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let g = su2();
        for s in [Suite::Core, Suite::Clifford] {
            let rep = run(s, &g, 3, false).unwrap();
            assert!(rep.all_pass(), "{}", rep.to_text());
        }
        let rep = run(Suite::Core, &abelian(2), 3, false).unwrap();
        assert!(rep.all_pass(), "{}", rep.to_text());
        assert!(run(Suite::Sphere, &abelian(2), 3, false).is_err());
    }

    #[test]
    fn kostant_small() {
        assert!(kostant_vs_oracle(4).is_pass());
    }
}
