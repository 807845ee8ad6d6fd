//! Exact coefficient arithmetic: rationals, multivariate polynomials,
//! truncated univariate power series and dense matrices with exact
//! row reduction.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Renders as `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::BadRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() || d.is_negative() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rational::one())
    }

    /// The coordinate function of variable `i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, Rational::one());
        p
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
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

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= max_degree)
                .map(|(e, v)| (e.clone(), v.clone()))
                .collect(),
        }
    }

    /// Product with all terms above `max_degree` dropped.
    pub fn mul_trunc(&self, other: &Poly, max_degree: u32) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            if da > max_degree {
                continue;
            }
            for (eb, cb) in &other.terms {
                let db: u32 = eb.iter().sum();
                if da + db > max_degree {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.add_term(e2, c * int(e[var] as i64));
        }
        out
    }

    /// Homogeneous component of the given total degree.
    pub fn homogeneous_part(&self, degree: u32) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == degree)
                .map(|(e, v)| (e.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, k) in point.iter().zip(e) {
                for _ in 0..*k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// `exp(self)` truncated at `max_degree`; requires a zero constant term.
    pub fn exp_trunc(&self, max_degree: u32) -> Result<Self> {
        if !self.coeff(&vec![0; self.nvars]).is_zero() {
            return Err(Error::Invalid("exp of a polynomial with nonzero constant term".into()));
        }
        let mut out = Poly::one(self.nvars);
        let mut power = Poly::one(self.nvars);
        for k in 1..=max_degree {
            power = power.mul_trunc(self, max_degree);
            if power.is_zero() {
                break;
            }
            out = &out + &power.scale(&Rational::new(BigInt::one(), factorial(k)));
        }
        Ok(out)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_trunc(rhs, u32::MAX)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| if *k == 1 { format!("m{}", i + 1) } else { format!("m{}^{}", i + 1, k) })
                .collect();
            let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join(" "))?;
            } else {
                write!(f, "{}·{}", fmt_rational(&mag), mono.join(" "))?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Truncated power series
// ---------------------------------------------------------------------------

/// Univariate power series known exactly modulo `s^(order+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    order: usize,
    coeffs: Vec<Rational>,
}

impl TruncSeries {
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        TruncSeries { order, coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncSeries::new(Vec::new(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        TruncSeries::new(vec![c], order)
    }

    /// The series variable itself.
    pub fn variable(order: usize) -> Self {
        let mut c = vec![Rational::zero(); order + 1];
        if order >= 1 {
            c[1] = Rational::one();
        }
        TruncSeries { order, coeffs: c }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncSeries { order: self.order, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncSeries::new(self.coeffs[..=order.min(self.order)].to_vec(), order.min(self.order))
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::Invalid("series inverse needs a nonzero constant term".into()));
        }
        let n = self.order;
        let mut inv = vec![Rational::zero(); n + 1];
        inv[0] = c0.recip();
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &inv[k - j];
            }
            inv[k] = -acc / &c0;
        }
        Ok(TruncSeries { order: n, coeffs: inv })
    }

    /// Natural logarithm; requires constant term one.
    pub fn log(&self) -> Result<Self> {
        if !self.coeff(0).is_one() {
            return Err(Error::Invalid("series log needs constant term 1".into()));
        }
        // log(a)' = a'/a
        let n = self.order;
        let deriv = self.derivative();
        let q = &deriv * &self.inverse()?;
        let mut out = vec![Rational::zero(); n + 1];
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            *slot = q.coeff(k - 1) / int(k as i64);
        }
        Ok(TruncSeries { order: n, coeffs: out })
    }

    /// Exponential; requires zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::Invalid("series exp needs constant term 0".into()));
        }
        // e' = a' e, solved coefficient by coefficient.
        let n = self.order;
        let mut e = vec![Rational::zero(); n + 1];
        e[0] = Rational::one();
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += int(j as i64) * &self.coeffs[j] * &e[k - j];
            }
            e[k] = acc / int(k as i64);
        }
        Ok(TruncSeries { order: n, coeffs: e })
    }

    pub fn derivative(&self) -> Self {
        let n = self.order;
        let mut c = vec![Rational::zero(); n + 1];
        for k in 1..=n {
            c[k - 1] = &self.coeffs[k] * int(k as i64);
        }
        // the top coefficient of the derivative is not known
        TruncSeries::new(c[..n.max(1)].to_vec(), n.saturating_sub(1))
    }

    /// Coefficients of odd index only (the odd part of the function).
    pub fn odd_part(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, x)| if k % 2 == 1 { x.clone() } else { Rational::zero() })
            .collect();
        TruncSeries { order: self.order, coeffs: c }
    }

    /// `f(c·s)` for a rational scale `c`.
    pub fn rescale(&self, c: &Rational) -> Self {
        let mut p = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            out.push(x * &p);
            p *= c;
        }
        TruncSeries { order: self.order, coeffs: out }
    }
}

impl Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        let n = self.order.min(rhs.order);
        TruncSeries::new((0..=n).map(|k| self.coeff(k) + rhs.coeff(k)).collect(), n)
    }
}

impl Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        let n = self.order.min(rhs.order);
        TruncSeries::new((0..=n).map(|k| self.coeff(k) - rhs.coeff(k)).collect(), n)
    }
}

impl Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        let n = self.order.min(rhs.order);
        let mut c = vec![Rational::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                c[i + j] += &self.coeffs[i] * &rhs.coeffs[j];
            }
        }
        TruncSeries { order: n, coeffs: c }
    }
}

/// Scalar functions whose Taylor coefficients at zero are available exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesFn {
    /// `1/s - coth(s/2)/2`, analytic at zero.
    FDyn,
    /// `ln((1 - e^{-s})/s)`.
    LogG,
    Exp,
    /// `sinh(s)/s`.
    RatioSinh,
    Cosh,
    Sinh,
    /// `tanh(s/2)`.
    TanhHalf,
}

impl std::str::FromStr for SeriesFn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "f_dyn" => SeriesFn::FDyn,
            "log_g" => SeriesFn::LogG,
            "exp" => SeriesFn::Exp,
            "ratio_sinh" => SeriesFn::RatioSinh,
            "cosh" => SeriesFn::Cosh,
            "sinh" => SeriesFn::Sinh,
            "tanh_half" => SeriesFn::TanhHalf,
            other => return Err(Error::UnknownFunction(other.to_string())),
        })
    }
}

fn exp_coeffs(n: usize) -> Vec<Rational> {
    (0..=n).map(|k| Rational::new(BigInt::one(), factorial(k as u32))).collect()
}

/// Exact Taylor coefficients at zero up to `s^order`.
pub fn taylor_coeffs(func: SeriesFn, order: usize) -> TruncSeries {
    // Work one degree higher where a division by s shifts coefficients down.
    let m = order + 1;
    let e = exp_coeffs(m + 1);
    match func {
        SeriesFn::Exp => TruncSeries::new(e[..=order].to_vec(), order),
        SeriesFn::Cosh => TruncSeries::new(
            (0..=order).map(|k| if k % 2 == 0 { e[k].clone() } else { Rational::zero() }).collect(),
            order,
        ),
        SeriesFn::Sinh => TruncSeries::new(
            (0..=order).map(|k| if k % 2 == 1 { e[k].clone() } else { Rational::zero() }).collect(),
            order,
        ),
        SeriesFn::RatioSinh => TruncSeries::new(
            (0..=order).map(|k| if k % 2 == 0 { e[k + 1].clone() } else { Rational::zero() }).collect(),
            order,
        ),
        SeriesFn::LogG => {
            // g(s) = sum_k (-1)^k s^k/(k+1)!
            let g = TruncSeries::new(
                (0..=order)
                    .map(|k| if k % 2 == 0 { e[k + 1].clone() } else { -e[k + 1].clone() })
                    .collect(),
                order,
            );
            g.log().expect("g(0) = 1")
        }
        SeriesFn::FDyn => {
            // s/(e^s - 1) = 1/h with h = (e^s - 1)/s; f = (1 - s/(e^s-1))/s - 1/2.
            let h = TruncSeries::new((0..=m).map(|k| e[k + 1].clone()).collect(), m);
            let b = h.inverse().expect("h(0) = 1");
            let c: Vec<Rational> = (0..=order)
                .map(|k| {
                    let v = -b.coeff(k + 1);
                    if k == 0 {
                        v - rat(1, 2)
                    } else {
                        v
                    }
                })
                .collect();
            TruncSeries::new(c, order)
        }
        SeriesFn::TanhHalf => {
            let sinh = taylor_coeffs(SeriesFn::Sinh, order).rescale(&rat(1, 2));
            let cosh = taylor_coeffs(SeriesFn::Cosh, order).rescale(&rat(1, 2));
            &sinh * &cosh.inverse().expect("cosh(0) = 1")
        }
    }
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type QMatrix = Matrix<Rational>;
pub type PolyMatrix = Matrix<Poly>;

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl QMatrix {
    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Matrix::from_fn(r, c, |i, j| rows[i][j].clone())
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Matrix::from_fn(r, c, |i, j| int(rows[i][j]))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Rational::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if !a.is_zero() {
                    acc += a * other.get(k, j);
                }
            }
            acc
        })
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        self.map(|x| x * c)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| *self.get(i, j) == -self.get(j, i).clone()))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns. Pivots are chosen as the
    /// first nonzero entry in each column scanning rows top-down.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = m.get(row, col).recip();
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let sub = &factor * m.get(row, j);
                    if !sub.is_zero() {
                        let v = m.get(r, j) - sub;
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column, read off the
    /// reduced row echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Rational::zero();
            };
            if p != col {
                for j in 0..n {
                    m.data.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let pv = m.get(col, col).clone();
            det *= &pv;
            for r in col + 1..n {
                let factor = m.get(r, col) / &pv;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = m.get(r, j) - &factor * m.get(col, j);
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r.get(i, j + n).clone()))
    }
}

impl PolyMatrix {
    pub fn poly_zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| Poly::zero(nvars))
    }

    pub fn poly_identity(n: usize, nvars: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { Poly::one(nvars) } else { Poly::zero(nvars) })
    }

    pub fn mul_trunc(&self, other: &PolyMatrix, max_degree: u32) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        let nvars = self.data.first().map_or(0, Poly::nvars);
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Poly::zero(nvars);
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &a.mul_trunc(b, max_degree);
                }
            }
            acc
        })
    }

    pub fn add_scaled(&self, other: &PolyMatrix, c: &Rational) -> PolyMatrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + &other.get(i, j).scale(c))
    }

    pub fn trace(&self) -> Poly {
        let nvars = self.data.first().map_or(0, Poly::nvars);
        (0..self.rows.min(self.cols)).fold(Poly::zero(nvars), |acc, i| &acc + self.get(i, i))
    }

    /// `Σ_k c_k M^k` over the given series, truncated at total degree `max_degree`.
    pub fn apply_series(&self, series: &TruncSeries, max_degree: u32) -> PolyMatrix {
        let n = self.rows;
        let nvars = self.data.first().map_or(0, Poly::nvars);
        let mut acc = PolyMatrix::poly_zeros(n, n, nvars);
        let mut power = PolyMatrix::poly_identity(n, nvars);
        for k in 0..=series.order() {
            let c = series.coeff(k);
            if !c.is_zero() {
                acc = acc.add_scaled(&power, &c);
            }
            power = power.mul_trunc(self, max_degree);
        }
        acc.map(|p| p.truncate(max_degree))
    }

    pub fn eval(&self, point: &[Rational]) -> QMatrix {
        self.map(|p| p.eval(point))
    }
}

/// A sparse vector, sorted by index, no zero entries.
pub type SparseVec = Vec<(usize, Rational)>;

fn sparse_axpy(x: &SparseVec, c: &Rational, y: &SparseVec) -> SparseVec {
    // x + c*y
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, c * &y[j].1));
            j += 1;
        } else {
            let v = &x[i].1 + c * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Kernel of the matrix whose columns are given sparsely. Column `j` is
/// reduced against earlier pivots by its largest row index; each column
/// that reduces to zero yields one kernel vector with coefficient 1 at `j`.
pub fn sparse_kernel(columns: &[SparseVec]) -> Vec<SparseVec> {
    let mut pivots: BTreeMap<usize, (SparseVec, SparseVec)> = BTreeMap::new();
    let mut kernel = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut v = col.clone();
        let mut comb: SparseVec = vec![(j, Rational::one())];
        loop {
            let Some((lead, c)) = v.last().cloned() else {
                kernel.push(comb);
                break;
            };
            match pivots.get(&lead) {
                Some((pv, pc)) => {
                    let f = -c;
                    v = sparse_axpy(&v, &f, pv);
                    comb = sparse_axpy(&comb, &f, pc);
                }
                None => {
                    let inv = c.recip();
                    let v: SparseVec = v.iter().map(|(i, x)| (*i, x * &inv)).collect();
                    let comb: SparseVec = comb.iter().map(|(i, x)| (*i, x * &inv)).collect();
                    pivots.insert(lead, (v, comb));
                    break;
                }
            }
        }
    }
    kernel
}
