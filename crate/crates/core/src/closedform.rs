//! Exact counting formulas for alternating sign matrices and the identities
//! relating them to boundary statistics.
//!
//! Everything here is exact (`BigUint`, `BigInt`, `BigRational`) except where a
//! trigonometric evaluation is inherent: [`ode_residual_f`] and
//! [`fnew_ratio_spread`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigfloat::BigFloat;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::enumerate::{BoundaryStats, CountTable, TableKind};
use crate::error::{Error, Result};
use crate::linalg::{wide, wide_rational};
use crate::rootuni::{ratio_spread, TrigPoly};

/// Exact rational; in practice the denominators are powers of three.
pub type ThirdsRational = BigRational;

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rat_from_uint(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

fn factorial(k: u64) -> BigUint {
    (1..=k).map(BigUint::from).product()
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    acc
}

/// `(α choose m) = ∏_{j=0}^{m−1} (α − j)/(m − j)` for rational `α`.
pub fn generalized_binomial(alpha: &BigRational, m: u64) -> BigRational {
    let mut acc = BigRational::one();
    for j in 0..m {
        acc *= (alpha - rat(j as i64, 1)) / rat((m - j) as i64, 1);
    }
    acc
}

fn exact_div(num: BigUint, den: &BigUint) -> BigUint {
    let (q, r) = num.div_rem(den);
    debug_assert!(r.is_zero(), "inexact division");
    q
}

/// Total number of `n x n` ASMs, from `A_1 = 1` and
/// `A_{k+1}/A_k = (3k+1)! k! / ((2k+1)! (2k)!)`.
pub fn a_total(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::OutOfRange("a_total requires n >= 1".into()));
    }
    Ok(a_total_unchecked(n))
}

/// As [`a_total`], with `A_0 = 1`.
fn a_total_unchecked(n: usize) -> BigUint {
    let mut a = BigUint::one();
    for k in 1..n as u64 {
        let num = factorial(3 * k + 1) * factorial(k);
        let den = factorial(2 * k + 1) * factorial(2 * k);
        a = exact_div(a * num, &den);
    }
    a
}

/// Refined count `A(n,r) = A_{n−1} C(n+r−2, r−1) C(2n−r−1, n−r) / C(2n−2, n−1)`.
pub fn a_refined(n: usize, r: usize) -> Result<BigUint> {
    if n == 0 || r == 0 || r > n {
        return Err(Error::OutOfRange(format!("A(n,r) needs 1 <= r <= n, got n={n}, r={r}")));
    }
    let (n, r) = (n as u64, r as u64);
    let numerator = a_total_unchecked(n as usize - 1) * binomial(n + r - 2, r - 1) * binomial(2 * n - r - 1, n - r);
    Ok(exact_div(numerator, &binomial(2 * n - 2, n - 1)))
}

/// `[A(n,1), ..., A(n,n)]`.
pub fn refined_row(n: usize) -> Result<Vec<BigUint>> {
    (1..=n).map(|r| a_refined(n, r)).collect()
}

/// Dense univariate polynomial with exact rational coefficients, ascending powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (a, ca) in self.coeffs.iter().enumerate() {
            for (b, cb) in other.coeffs.iter().enumerate() {
                out[a + b] += ca * cb;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64, 1))
                .collect(),
        )
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
    }
}

/// Generating function `A(t) = Σ_r A(n,r) t^{n−r}`.
pub fn gen_poly(n: usize) -> Result<Poly> {
    let row = refined_row(n)?;
    // coefficient of t^k is A(n, n−k); by palindromy the order is immaterial
    // but the indexing is kept literal.
    Ok(Poly::new((0..n).map(|k| rat_from_uint(&row[n - 1 - k])).collect()))
}

/// `t(1−t)A'' + 2(1−n−t)A' + n(n−1)A`, identically zero when `A` is the
/// refined generating function.
pub fn ode_residual_a(n: usize) -> Result<Poly> {
    let a = gen_poly(n)?;
    let n = n as i64;
    let d1 = a.derivative();
    let d2 = d1.derivative();
    let t_one_minus_t = Poly::from_ints(&[0, 1, -1]);
    let drift = Poly::from_ints(&[2 * (1 - n), -2]);
    Ok(t_one_minus_t
        .mul(&d2)
        .add(&drift.mul(&d1))
        .add(&a.scale(&rat(n * (n - 1), 1))))
}

/// `(2n−r−1) r A(n,r+1) = (n−r)(n+r−1) A(n,r)` in integers.
pub fn recursion_check(n: usize, r: usize) -> Result<bool> {
    if r == 0 || r >= n {
        return Err(Error::OutOfRange(format!(
            "recursion needs 1 <= r <= n-1, got n={n}, r={r}"
        )));
    }
    let lhs = BigUint::from(((2 * n - r - 1) * r) as u64) * a_refined(n, r + 1)?;
    let rhs = BigUint::from(((n - r) * (n + r - 1)) as u64) * a_refined(n, r)?;
    Ok(lhs == rhs)
}

/// `f(u) = Σ_{m=0}^{n−1} (n−4/3 choose m)(n−2/3 choose n−m−1) sin((4−3n+6m)u)`,
/// held exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SineSeries {
    pub n: usize,
    /// `(frequency, amplitude)` of each sine.
    pub terms: Vec<(i64, BigRational)>,
}

pub fn f_closed(n: usize) -> Result<SineSeries> {
    if n == 0 {
        return Err(Error::OutOfRange("f_closed requires n >= 1".into()));
    }
    let ni = n as i64;
    let alpha = rat(3 * ni - 4, 3);
    let beta = rat(3 * ni - 2, 3);
    let terms = (0..n as u64)
        .map(|m| {
            let amp = generalized_binomial(&alpha, m) * generalized_binomial(&beta, n as u64 - m - 1);
            (4 - 3 * ni + 6 * m as i64, amp)
        })
        .collect();
    Ok(SineSeries { n, terms })
}

impl SineSeries {
    pub fn maxfreq(&self) -> usize {
        self.terms
            .iter()
            .map(|(w, _)| w.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn to_trig_poly(&self) -> TrigPoly {
        let d = 3 * self.n - 2;
        let terms: Vec<(i64, f64)> = self
            .terms
            .iter()
            .map(|(w, a)| (*w, a.to_f64().expect("finite rational")))
            .collect();
        TrigPoly::from_sines(d, &terms).expect("frequencies share the parity of 3n-2")
    }

    /// `(f, f', f'')` at `u`. Summed in 40 digits, since near `u = 0` the
    /// terms cancel to high order.
    pub fn eval_with_derivatives(&self, u: f64) -> (f64, f64, f64) {
        let u = wide(u);
        let (mut f0, mut f1, mut f2) = (num_bigfloat::ZERO, num_bigfloat::ZERO, num_bigfloat::ZERO);
        for (w, a) in &self.terms {
            let a = wide_rational(a);
            let w = BigFloat::from_i64(*w);
            let (s, c) = ((w * u).sin(), (w * u).cos());
            f0 += a * s;
            f1 += a * w * c;
            f2 -= a * w * w * s;
        }
        (f0.to_f64(), f1.to_f64(), f2.to_f64())
    }

    /// `f^{(l)}(0) = Σ_m a_m ω_m^l sin(lπ/2)`, exactly.
    pub fn derivative_at_zero(&self, l: u32) -> BigRational {
        if l % 2 == 0 {
            return BigRational::zero();
        }
        let sign = if (l / 2) % 2 == 0 { 1 } else { -1 };
        let sum: BigRational = self
            .terms
            .iter()
            .map(|(w, a)| a * BigRational::from_integer(num_traits::pow(BigInt::from(*w), l as usize)))
            .sum();
        sum * rat(sign, 1)
    }

    /// Order of the first derivative at `u = 0` that is not exactly zero.
    pub fn lowest_nonvanishing_derivative(&self) -> u32 {
        (0..)
            .find(|&l| !self.derivative_at_zero(l).is_zero())
            .expect("a nonzero sine series has a nonvanishing odd derivative")
    }

    /// `Σ_m a_m ω_m ω_m^{2λ}` for `λ = 0..n−2`. With `b⁺_m = a_m / 2i` these are the
    /// odd-derivative conditions on the positive-frequency coefficients, tested on
    /// the monomial basis `p(x) = x^λ`.
    pub fn odd_moment_conditions(&self) -> Vec<BigRational> {
        (0..self.n.saturating_sub(1))
            .map(|lambda| {
                self.terms
                    .iter()
                    .map(|(w, a)| a * BigRational::from_integer(num_traits::pow(BigInt::from(*w), 2 * lambda + 1)))
                    .sum()
            })
            .collect()
    }
}

/// Relative residual of `f'' − 6(n−1) cot(3u) f' − (3n−2)(3n−4) f = 0`.
pub fn ode_residual_f(n: usize, u: f64) -> Result<f64> {
    let s3 = libm::sin(3.0 * u);
    if libm::fabs(s3) < 1e-8 {
        return Err(Error::NearSingular(libm::fabs(s3)));
    }
    let f = f_closed(n)?;
    let (f0, f1, f2) = f.eval_with_derivatives(u);
    let nf = n as f64;
    let t1 = f2;
    let t2 = -6.0 * (nf - 1.0) * libm::cos(3.0 * u) / s3 * f1;
    let t3 = -(3.0 * nf - 2.0) * (3.0 * nf - 4.0) * f0;
    let scale = libm::fabs(t1).max(libm::fabs(t2)).max(libm::fabs(t3));
    let res = libm::fabs(t1 + t2 + t3);
    Ok(if scale == 0.0 { res } else { res / scale })
}

/// `sin^{2n−1}(u) sin^{n−1}(u+π/3) Σ_r A(n,r) (b(u)/a(u))^{n−r}` with counting weights.
pub fn fnew_product(refined: &[BigUint], u: f64) -> f64 {
    let n = refined.len();
    let a = libm::sin(PI / 3.0 + u);
    let b = libm::sin(PI / 3.0 - u);
    let ratio = b / a;
    let sum: f64 = refined
        .iter()
        .enumerate()
        .map(|(k, c)| c.to_f64().expect("finite count") * libm::pow(ratio, (n - 1 - k) as f64))
        .sum();
    libm::pow(libm::sin(u), (2 * n - 1) as f64) * libm::pow(a, (n - 1) as f64) * sum
}

/// Relative spread of `f_closed(n)(u) / fnew_product(u)` over `points`.
pub fn fnew_ratio_spread(refined: &[BigUint], points: &[f64]) -> Result<(f64, f64)> {
    let f = f_closed(refined.len())?;
    let (mean, spread) = ratio_spread(
        points,
        |u| Ok(Complex64::new(f.eval_with_derivatives(u).0, 0.0)),
        |u| Ok(Complex64::new(fnew_product(refined, u), 0.0)),
    )?;
    Ok((mean.re, spread))
}

/// Summary of an exact identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub n: usize,
    /// Number of exact equalities verified.
    pub checks: usize,
}

fn to_int(x: BigUint) -> BigInt {
    BigInt::from(x)
}

fn mismatch(r: usize, rt: usize, lhs: &BigInt, rhs: &BigInt) -> Error {
    Error::TableMismatch {
        r,
        rt,
        detail: format!("lhs {lhs} != rhs {rhs}"),
    }
}

fn expect_kind(table: &CountTable, kind: TableKind, n: usize) -> Result<()> {
    if table.kind() != kind || table.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: table.n(),
        });
    }
    Ok(())
}

/// Checks, with `C` zero outside `2..=n`:
/// `A(n,1) = C(n;2,2)`;
/// `B(n;r,r̃) = C(n;r,r̃+1) + C(n;r+1,r̃) − C(n;r+1,r̃+1)` for `r + r̃ > 2`;
/// `C(n;r,2) − C(n;r+1,2) = B(n;r,1) = A(n−1,r−1)` for `r >= 2`.
pub fn bc_relations(stats: &BoundaryStats, prev_refined: &CountTable) -> Result<IdentityReport> {
    let n = stats.n;
    if n < 2 {
        return Err(Error::OutOfRange("boundary relations need n >= 2".into()));
    }
    expect_kind(prev_refined, TableKind::RefinedTop, n - 1)?;
    let b = stats.double_top_bottom();
    let (corner, c) = stats.double_top_left();
    let cc = |r: usize, rt: usize| -> BigInt {
        if r >= 2 && rt >= 2 {
            to_int(c.at2(r, rt))
        } else {
            BigInt::zero()
        }
    };
    let mut checks = 0;
    let (lhs, rhs) = (to_int(corner), cc(2, 2));
    if lhs != rhs {
        return Err(mismatch(1, 1, &lhs, &rhs));
    }
    checks += 1;
    for r in 1..=n {
        for rt in 1..=n {
            if r + rt <= 2 {
                continue;
            }
            let lhs = to_int(b.at2(r, rt));
            let rhs = cc(r, rt + 1) + cc(r + 1, rt) - cc(r + 1, rt + 1);
            if lhs != rhs {
                return Err(mismatch(r, rt, &lhs, &rhs));
            }
            checks += 1;
        }
    }
    for r in 2..=n {
        let diff = cc(r, 2) - cc(r + 1, 2);
        let b_r1 = to_int(b.at2(r, 1));
        let a_prev = to_int(prev_refined.at(r - 1));
        if diff != b_r1 {
            return Err(mismatch(r, 2, &diff, &b_r1));
        }
        if b_r1 != a_prev {
            return Err(mismatch(r, 1, &b_r1, &a_prev));
        }
        checks += 2;
    }
    Ok(IdentityReport { n, checks })
}

/// `B(n;r+1,r̃+1) − B(n;r,r̃) = {A(n−1,r)[A(n,r̃+1) − A(n,r̃)] + A(n−1,r̃)[A(n,r+1) − A(n,r)]} / A(n,1)`
/// for `1 <= r, r̃ <= n−1`, with `B` from `top_bottom` and `A` from the closed form.
pub fn b_identity(top_bottom: &CountTable) -> Result<IdentityReport> {
    let n = top_bottom.n();
    expect_kind(top_bottom, TableKind::DoubleTopBottom, n)?;
    if n < 2 {
        return Ok(IdentityReport { n, checks: 0 });
    }
    let a: Vec<BigInt> = refined_row(n)?.into_iter().map(to_int).collect();
    let a_prev: Vec<BigInt> = refined_row(n - 1)?.into_iter().map(to_int).collect();
    let big_a = |r: usize| &a[r - 1];
    let prev = |r: usize| &a_prev[r - 1];
    let corner = big_a(1).clone();
    let mut checks = 0;
    for r in 1..n {
        for rt in 1..n {
            let lhs = to_int(top_bottom.at2(r + 1, rt + 1)) - to_int(top_bottom.at2(r, rt));
            let numerator = prev(r) * (big_a(rt + 1) - big_a(rt)) + prev(rt) * (big_a(r + 1) - big_a(r));
            let (rhs, rem) = numerator.div_rem(&corner);
            if !rem.is_zero() {
                return Err(Error::NonIntegerQuotient { r, rt });
            }
            if lhs != rhs {
                return Err(mismatch(r, rt, &lhs, &rhs));
            }
            checks += 1;
        }
    }
    Ok(IdentityReport { n, checks })
}

/// Bivariate polynomial, `coeffs[a][b]` multiplying `t^a s^b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly2 {
    coeffs: Vec<Vec<BigRational>>,
}

impl Poly2 {
    pub fn zero(deg_t: usize, deg_s: usize) -> Self {
        Self {
            coeffs: vec![vec![BigRational::zero(); deg_s + 1]; deg_t + 1],
        }
    }

    pub fn coeff(&self, a: usize, b: usize) -> BigRational {
        self.coeffs
            .get(a)
            .and_then(|row| row.get(b))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    fn add_to(&mut self, a: usize, b: usize, v: &BigRational) {
        if a >= self.coeffs.len() {
            let width = self.coeffs[0].len();
            self.coeffs.resize(a + 1, vec![BigRational::zero(); width]);
        }
        if b >= self.coeffs[a].len() {
            for row in &mut self.coeffs {
                row.resize(b + 1, BigRational::zero());
            }
        }
        self.coeffs[a][b] += v;
    }

    pub fn deg_t(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn deg_s(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    /// `(h(t) g(s) − h(s) g(t)) / (t − s)`, computed termwise from
    /// `(t^a s^b − s^a t^b)/(t − s) = t^b s^b Σ_{i=0}^{a−b−1} t^i s^{a−b−1−i}` for `a > b`.
    pub fn divided_difference(h: &Poly, g: &Poly) -> Poly2 {
        let deg = h.coeffs().len().max(g.coeffs().len()).max(1);
        let mut out = Poly2::zero(deg, deg);
        for (a, ha) in h.coeffs().iter().enumerate() {
            for (b, gb) in g.coeffs().iter().enumerate() {
                let w = ha * gb;
                if w.is_zero() || a == b {
                    continue;
                }
                // t^a s^b − s^a t^b
                let (hi, lo, sign) = if a > b { (a, b, 1) } else { (b, a, -1) };
                let w = w * rat(sign, 1);
                for i in 0..hi - lo {
                    out.add_to(lo + i, lo + hi - lo - 1 - i, &w);
                }
            }
        }
        out
    }
}

/// Result of matching the `B` generating function against the `H, G` divided difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gen51Report {
    pub n: usize,
    /// `const` such that `Σ B t^{n−r} s^{r̃−1} = const · (H(t)G(s) − H(s)G(t))/(t − s)`;
    /// observed to be `1/((2n−1) A_n)`.
    pub constant: BigRational,
    pub checks: usize,
}

/// `G(t) = (1−t) A(t)`.
pub fn g_poly(n: usize) -> Result<Poly> {
    Ok(Poly::from_ints(&[1, -1]).mul(&gen_poly(n)?))
}

/// `H(t) = (n−½)(1+t)A + (1−n)(1−t)(½−t)A − (1−t)(t²−t+1)A'`.
pub fn h_poly(n: usize) -> Result<Poly> {
    let a = gen_poly(n)?;
    let ni = n as i64;
    let one_minus_t = Poly::from_ints(&[1, -1]);
    let first = Poly::from_ints(&[1, 1]).scale(&rat(2 * ni - 1, 2)).mul(&a);
    let second = one_minus_t
        .mul(&Poly::new(vec![rat(1, 2), rat(-1, 1)]))
        .scale(&rat(1 - ni, 1))
        .mul(&a);
    let third = one_minus_t.mul(&Poly::from_ints(&[1, -1, 1])).mul(&a.derivative());
    Ok(first.add(&second).sub(&third))
}

/// Exact check of the two-variable generating function of `B(n;r,r̃)`.
pub fn double_gen_check(top_bottom: &CountTable) -> Result<Gen51Report> {
    let n = top_bottom.n();
    expect_kind(top_bottom, TableKind::DoubleTopBottom, n)?;
    let rhs = Poly2::divided_difference(&h_poly(n)?, &g_poly(n)?);
    let deg = rhs.deg_t().max(rhs.deg_s()).max(n - 1);
    let lhs = |a: usize, b: usize| -> BigRational {
        // t^{n−r} s^{r̃−1}
        if a < n && b < n {
            rat_from_uint(&top_bottom.at2(n - a, b + 1))
        } else {
            BigRational::zero()
        }
    };
    let mut constant: Option<BigRational> = None;
    for a in 0..=deg {
        for b in 0..=deg {
            let r = rhs.coeff(a, b);
            if !r.is_zero() {
                constant = Some(lhs(a, b) / r);
                break;
            }
        }
        if constant.is_some() {
            break;
        }
    }
    let constant = constant.ok_or_else(|| Error::TableMismatch {
        r: 0,
        rt: 0,
        detail: "divided difference vanishes identically".into(),
    })?;
    if constant.is_zero() {
        return Err(Error::TableMismatch {
            r: 0,
            rt: 0,
            detail: "fitted constant is zero".into(),
        });
    }
    let mut checks = 0;
    for a in 0..=deg {
        for b in 0..=deg {
            let expected = &constant * rhs.coeff(a, b);
            let got = lhs(a, b);
            if got != expected {
                let r = n.saturating_sub(a);
                return Err(Error::TableMismatch {
                    r,
                    rt: b + 1,
                    detail: format!("coefficient of t^{a} s^{b}: {got} != {expected}"),
                });
            }
            checks += 1;
        }
    }
    Ok(Gen51Report { n, constant, checks })
}

/// `A(n,r)` palindromic and summing to `A_n`.
pub fn refined_row_consistent(n: usize) -> Result<bool> {
    let row = refined_row(n)?;
    let palindromic = (0..n).all(|k| row[k] == row[n - 1 - k]);
    let total: BigUint = row.iter().sum();
    Ok(palindromic && total == a_total(n)?)
}
