//! Lie algebra data in an orthonormal basis: loading, validation, the
//! catalog, and the matrix series built from `ad_μ`.

use std::path::Path;

use num_traits::{One, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::ring::{
    fmt_rational, int, parse_rational, rat, taylor_coeffs, Poly, PolyMatrix, Rational, SeriesFn,
};

/// Compact Lie algebra given by totally antisymmetric structure constants
/// `[e_a, e_b] = f_abc e_c`. Indices are 0-based internally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    f: Vec<Rational>,
    /// `brackets[a]` lists `(b, c, f_abc)` for the nonzero constants.
    brackets: Vec<Vec<(usize, usize, Rational)>>,
}

impl LieAlgebra {
    /// Builds and validates an algebra from a dense tensor `f[a][b][c]`.
    pub fn from_dense(name: &str, dim: usize, f: Vec<Rational>) -> Result<Self> {
        assert_eq!(f.len(), dim * dim * dim);
        let alg = Self::unchecked(name, dim, f);
        alg.check_antisymmetry()?;
        alg.check_jacobi()?;
        Ok(alg)
    }

    fn unchecked(name: &str, dim: usize, f: Vec<Rational>) -> Self {
        let mut brackets = vec![Vec::new(); dim];
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let v = &f[(a * dim + b) * dim + c];
                    if !v.is_zero() {
                        brackets[a].push((b, c, v.clone()));
                    }
                }
            }
        }
        LieAlgebra { name: name.to_string(), dim, f, brackets }
    }

    /// Builds from 0-based entries, filling in all permutations and rejecting
    /// inconsistent duplicates.
    pub fn from_entries(name: &str, dim: usize, entries: &[(usize, usize, usize, Rational)]) -> Result<Self> {
        let mut f: Vec<Option<Rational>> = vec![None; dim * dim * dim];
        for (a, b, c, v) in entries {
            for &i in &[*a, *b, *c] {
                if i >= dim {
                    return Err(Error::BadIndex { index: i as i64 + 1, dim });
                }
            }
            if v.is_zero() {
                continue;
            }
            if a == b || b == c || a == c {
                return Err(Error::NotTotallyAntisymmetric { a: a + 1, b: b + 1, c: c + 1 });
            }
            let perms = [
                ((*a, *b, *c), 1),
                ((*b, *c, *a), 1),
                ((*c, *a, *b), 1),
                ((*b, *a, *c), -1),
                ((*a, *c, *b), -1),
                ((*c, *b, *a), -1),
            ];
            for ((x, y, z), s) in perms {
                let val = v * int(s);
                let slot = &mut f[(x * dim + y) * dim + z];
                match slot {
                    Some(old) if *old != val => {
                        return Err(Error::NotTotallyAntisymmetric { a: a + 1, b: b + 1, c: c + 1 })
                    }
                    _ => *slot = Some(val),
                }
            }
        }
        let dense = f.into_iter().map(|x| x.unwrap_or_else(Rational::zero)).collect();
        Self::from_dense(name, dim, dense)
    }

    /// A tensor that is stored as given, without validation. Used to probe
    /// the validators on deliberately broken data.
    pub fn raw(name: &str, dim: usize, f: Vec<Rational>) -> Self {
        Self::unchecked(name, dim, f)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `f_abc`, 0-based.
    pub fn f(&self, a: usize, b: usize, c: usize) -> &Rational {
        &self.f[(a * self.dim + b) * self.dim + c]
    }

    /// Nonzero `(b, c, f_abc)` for fixed `a`.
    pub fn brackets(&self, a: usize) -> &[(usize, usize, Rational)] {
        &self.brackets[a]
    }

    /// All nonzero `(a, b, c, f_abc)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        self.brackets.iter().enumerate().flat_map(|(a, v)| v.iter().map(move |(b, c, x)| (a, *b, *c, x)))
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.iter().all(Vec::is_empty)
    }

    /// `Σ f_abc f_abc`.
    pub fn f_norm2(&self) -> Rational {
        self.nonzero().map(|(_, _, _, v)| v * v).sum()
    }

    pub fn check_antisymmetry(&self) -> Result<()> {
        let n = self.dim;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let v = self.f(a, b, c);
                    let ok = *v == -self.f(b, a, c).clone()
                        && *v == -self.f(a, c, b).clone()
                        && v == self.f(b, c, a);
                    if !ok {
                        return Err(Error::NotTotallyAntisymmetric { a: a + 1, b: b + 1, c: c + 1 });
                    }
                }
            }
        }
        Ok(())
    }

    /// `Σ_r (f_abr f_rcd + f_bcr f_rad + f_car f_rbd)`.
    pub fn jacobi_residual(&self, a: usize, b: usize, c: usize, d: usize) -> Rational {
        let mut acc = Rational::zero();
        for r in 0..self.dim {
            acc += self.f(a, b, r) * self.f(r, c, d);
            acc += self.f(b, c, r) * self.f(r, a, d);
            acc += self.f(c, a, r) * self.f(r, b, d);
        }
        acc
    }

    /// Brute-force Jacobi scan; reports the first failing quadruple (1-based).
    pub fn check_jacobi(&self) -> Result<()> {
        let n = self.dim;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let r = self.jacobi_residual(a, b, c, d);
                        if !r.is_zero() {
                            return Err(Error::JacobiViolation {
                                a: a + 1,
                                b: b + 1,
                                c: c + 1,
                                d: d + 1,
                                residual: fmt_rational(&r),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Every violated invariant, in the order antisymmetry, Jacobi.
    pub fn validation_errors(&self) -> Vec<Error> {
        [self.check_antisymmetry(), self.check_jacobi()].into_iter().filter_map(|r| r.err()).collect()
    }

    /// `(ad_μ)_ab = Σ_c μ_c f_cba`, the coefficient of `e_a` in `[μ, e_b]`.
    pub fn ad_matrix(&self) -> PolyMatrix {
        let n = self.dim;
        PolyMatrix::from_fn(n, n, |a, b| {
            let mut p = Poly::zero(n);
            for c in 0..n {
                let v = self.f(c, b, a);
                if !v.is_zero() {
                    p = &p + &Poly::var(n, c).scale(v);
                }
            }
            p
        })
    }

    /// `ad_μ` at a rational point.
    pub fn ad_at(&self, mu: &[Rational]) -> crate::ring::QMatrix {
        self.ad_matrix().eval(mu)
    }

    /// Block direct sum; `other`'s basis follows `self`'s.
    pub fn direct_sum(&self, other: &LieAlgebra, name: &str) -> LieAlgebra {
        let n = self.dim + other.dim;
        let mut f = vec![Rational::zero(); n * n * n];
        for (a, b, c, v) in self.nonzero() {
            f[(a * n + b) * n + c] = v.clone();
        }
        let o = self.dim;
        for (a, b, c, v) in other.nonzero() {
            f[((a + o) * n + b + o) * n + c + o] = v.clone();
        }
        Self::unchecked(name, n, f)
    }
}

/// Matrix series derived from `ad_μ`, truncated at a total degree.
#[derive(Clone, Debug)]
pub struct AdSeriesBundle {
    pub order: usize,
    /// `T = f(ad_μ)`, antisymmetric.
    pub t: PolyMatrix,
    pub log_j: Poly,
    pub j_half: Poly,
}

/// Builds `T`, `ln J` and `J^½` to total degree `order`.
pub fn structure_series(alg: &LieAlgebra, order: usize) -> AdSeriesBundle {
    let n = alg.dim();
    let ad = alg.ad_matrix();
    let deg = order as u32;
    let c = taylor_coeffs(SeriesFn::FDyn, order);
    let d = taylor_coeffs(SeriesFn::LogG, order);
    let mut t = PolyMatrix::poly_zeros(n, n, n);
    let mut log_j = Poly::zero(n);
    let mut power = PolyMatrix::poly_identity(n, n);
    for k in 1..=order {
        power = power.mul_trunc(&ad, deg);
        if !c.coeff(k).is_zero() {
            t = t.add_scaled(&power, &c.coeff(k));
        }
        let tr = power.trace();
        if k == 1 {
            assert!(tr.is_zero(), "tr ad_μ must vanish");
        }
        if !d.coeff(k).is_zero() {
            log_j = &log_j + &tr.scale(&d.coeff(k));
        }
    }
    let j_half = log_j.scale(&rat(1, 2)).exp_trunc(deg).expect("ln J has no constant term");
    AdSeriesBundle { order, t, log_j, j_half }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Coef {
    Int(i64),
    Str(String),
}

#[derive(Deserialize)]
struct LieDoc {
    name: String,
    dim: usize,
    #[serde(default)]
    f: Vec<(i64, i64, i64, Coef)>,
}

/// Parses a Lie data document (JSON or TOML, detected from content).
pub fn load_lie(doc: &str) -> Result<LieAlgebra> {
    let trimmed = doc.trim_start();
    let parsed: LieDoc = if trimmed.starts_with('{') {
        serde_json::from_str(doc).map_err(|e| Error::Document(e.to_string()))?
    } else {
        toml::from_str(doc).map_err(|e| Error::Document(e.to_string()))?
    };
    let dim = parsed.dim;
    let mut entries = Vec::with_capacity(parsed.f.len());
    for (a, b, c, v) in parsed.f {
        let mut idx = [0usize; 3];
        for (slot, i) in idx.iter_mut().zip([a, b, c]) {
            if i < 1 || i as usize > dim {
                return Err(Error::BadIndex { index: i, dim });
            }
            *slot = i as usize - 1;
        }
        let val = match v {
            Coef::Int(k) => int(k),
            Coef::Str(s) => parse_rational(&s)?,
        };
        entries.push((idx[0], idx[1], idx[2], val));
    }
    LieAlgebra::from_entries(&parsed.name, dim, &entries)
}

pub fn load_lie_file(path: &Path) -> Result<LieAlgebra> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
    load_lie(&text)
}

/// Serializes to the JSON document format, listing each constant once with
/// `a < b < c`.
pub fn to_json(alg: &LieAlgebra) -> String {
    let f: Vec<serde_json::Value> = alg
        .nonzero()
        .filter(|(a, b, c, _)| a < b && b < c)
        .map(|(a, b, c, v)| serde_json::json!([a + 1, b + 1, c + 1, fmt_rational(v)]))
        .collect();
    serde_json::json!({"name": alg.name(), "dim": alg.dim(), "f": f}).to_string()
}

pub fn su2() -> LieAlgebra {
    LieAlgebra::from_entries("su2", 3, &[(0, 1, 2, Rational::one())]).expect("su2 is valid")
}

pub fn abelian(k: usize) -> LieAlgebra {
    LieAlgebra::from_entries(&format!("abelian({k})"), k, &[]).expect("abelian is valid")
}

pub fn so4() -> LieAlgebra {
    let s = su2();
    let sum = s.direct_sum(&s, "so4");
    sum.check_antisymmetry().and_then(|_| sum.check_jacobi()).expect("so4 is valid");
    sum
}

/// `so(m)` in the basis `L_ij = E_ij - E_ji`, `i < j`, which is orthonormal
/// for `-½ tr`.
pub fn so_n(m: usize) -> LieAlgebra {
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let dim = pairs.len();
    let mat = |(i, j): (usize, usize)| {
        let mut e = vec![vec![0i64; m]; m];
        e[i][j] = 1;
        e[j][i] = -1;
        e
    };
    let mul = |x: &Vec<Vec<i64>>, y: &Vec<Vec<i64>>| {
        let mut z = vec![vec![0i64; m]; m];
        for i in 0..m {
            for k in 0..m {
                if x[i][k] != 0 {
                    for j in 0..m {
                        z[i][j] += x[i][k] * y[k][j];
                    }
                }
            }
        }
        z
    };
    let mats: Vec<_> = pairs.iter().map(|&p| mat(p)).collect();
    let mut f = vec![Rational::zero(); dim * dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            let ab = mul(&mats[a], &mats[b]);
            let ba = mul(&mats[b], &mats[a]);
            for c in 0..dim {
                // -½ tr([L_a, L_b] L_c)
                let mut tr = 0i64;
                for i in 0..m {
                    for k in 0..m {
                        tr += (ab[i][k] - ba[i][k]) * mats[c][k][i];
                    }
                }
                f[(a * dim + b) * dim + c] = rat(-tr, 2);
            }
        }
    }
    LieAlgebra::from_dense(&format!("so{m}"), dim, f).expect("so(m) is valid")
}

/// Catalog lookup: `su2`, `so4`, `so5`, `abelian(k)` (also `abelianK`).
pub fn catalog(name: &str) -> Result<LieAlgebra> {
    let name = name.trim();
    match name {
        "su2" => return Ok(su2()),
        "so4" => return Ok(so4()),
        "so5" => return Ok(so_n(5)),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("abelian") {
        let digits = rest.trim_start_matches('(').trim_end_matches(')');
        if let Ok(k) = digits.parse::<usize>() {
            let mut alg = abelian(k);
            alg.name = name.to_string();
            return Ok(alg);
        }
    }
    Err(Error::UnknownAlgebra(name.to_string()))
}

/// Resolves a catalog name or a path to a Lie data file.
pub fn resolve(name_or_path: &str) -> Result<LieAlgebra> {
    match catalog(name_or_path) {
        Ok(a) => Ok(a),
        Err(Error::UnknownAlgebra(_)) if Path::new(name_or_path).exists() => load_lie_file(Path::new(name_or_path)),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_constants() {
        let g = su2();
        assert_eq!(*g.f(0, 1, 2), int(1));
        assert_eq!(*g.f(1, 0, 2), int(-1));
        assert_eq!(g.f_norm2(), int(6));
    }

    #[test]
    fn so4_and_so5_norms() {
        assert_eq!(so4().f_norm2(), int(12));
        let g = so_n(5);
        assert_eq!(g.dim(), 10);
        assert!(g.nonzero().all(|(_, _, _, v)| *v == int(1) || *v == int(-1)));
    }

    #[test]
    fn so3_is_su2_up_to_relabelling() {
        // L_12, L_13, L_23 has f·f = 6 as well
        assert_eq!(so_n(3).f_norm2(), int(6));
    }

    #[test]
    fn catalog_names() {
        assert_eq!(catalog("abelian(2)").unwrap().dim(), 2);
        assert!(catalog("abelian(2)").unwrap().is_abelian());
        assert_eq!(catalog("abelian4").unwrap().dim(), 4);
        assert!(matches!(catalog("su3"), Err(Error::UnknownAlgebra(_))));
    }

    #[test]
    fn ad_convention() {
        let g = su2();
        let ad = g.ad_matrix();
        // (ad_μ)_21 = μ_3
        assert_eq!(*ad.get(1, 0), Poly::var(3, 2));
        assert_eq!(*ad.get(0, 1), -&Poly::var(3, 2));
        assert!(abelian(3).ad_matrix().eval(&[int(1), int(2), int(3)]).is_zero());
    }

    #[test]
    fn series_su2() {
        let b = structure_series(&su2(), 2);
        let mu2: Poly = (0..3).fold(Poly::zero(3), |acc, i| &acc + &(&Poly::var(3, i) * &Poly::var(3, i)));
        assert_eq!(b.log_j, mu2.scale(&rat(-1, 12)));
        // leading term of T is (1/12) μ_c f_cab
        assert_eq!(*b.t.get(0, 1), Poly::var(3, 2).scale(&rat(1, 12)));
    }

    #[test]
    fn loader_formats() {
        let json = r#"{"name":"su2","dim":3,"f":[[1,2,3,"1"],[2,3,1,1],[3,1,2,"1"]]}"#;
        assert_eq!(load_lie(json).unwrap().f_norm2(), int(6));
        let toml = "name = \"su2\"\ndim = 3\nf = [[1, 2, 3, \"1\"]]\n";
        assert_eq!(load_lie(toml).unwrap(), LieAlgebra { name: "su2".into(), ..su2() });
        let bad = r#"{"name":"x","dim":3,"f":[[1,2,3,"1"],[2,3,1,"2"]]}"#;
        assert!(matches!(load_lie(bad), Err(Error::NotTotallyAntisymmetric { .. })));
        let bad = r#"{"name":"x","dim":3,"f":[[1,2,4,"1"]]}"#;
        assert!(matches!(load_lie(bad), Err(Error::BadIndex { .. })));
        let bad = r#"{"name":"x","dim":3,"f":[[1,2,3,"1/0"]]}"#;
        assert!(matches!(load_lie(bad), Err(Error::BadRational(_))));
    }

    #[test]
    fn jacobi_violation_in_dim_five() {
        let doc = r#"{"name":"broken","dim":5,"f":[[1,2,3,"1"],[1,4,5,"1"]]}"#;
        assert!(matches!(load_lie(doc), Err(Error::JacobiViolation { .. })));
    }

    #[test]
    fn json_roundtrip() {
        for g in [su2(), so4(), so_n(5)] {
            let back = load_lie(&to_json(&g)).unwrap();
            assert_eq!(back.f, g.f);
        }
    }
}
