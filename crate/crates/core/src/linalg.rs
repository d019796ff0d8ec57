//! Small dense kernels: full-pivoting determinants, a complex one-sided Jacobi
//! SVD for nullspace extraction, and compensated summation.

use alloc::vec;
use alloc::vec::Vec;

use num_bigfloat::BigFloat;
use num_complex::Complex64;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.carry);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl core::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Square<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Copy> Square<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// Outcome of a full-pivoting elimination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotedDet<T> {
    pub det: T,
    /// Largest and smallest pivot magnitudes encountered.
    pub max_pivot: f64,
    pub min_pivot: f64,
}

impl<T> PivotedDet<T> {
    /// Ratio of extreme pivots; a cheap lower bound on the condition number.
    pub fn pivot_ratio(&self) -> f64 {
        if self.min_pivot == 0.0 {
            f64::INFINITY
        } else {
            self.max_pivot / self.min_pivot
        }
    }
}

trait Field:
    Copy
    + core::ops::Sub<Output = Self>
    + core::ops::Mul<Output = Self>
    + core::ops::Div<Output = Self>
    + core::ops::Neg<Output = Self>
{
    const ONE: Self;
    const ZERO: Self;
    fn magnitude(self) -> f64;
}

impl Field for f64 {
    const ONE: Self = 1.0;
    const ZERO: Self = 0.0;
    fn magnitude(self) -> f64 {
        libm::fabs(self)
    }
}

impl Field for Complex64 {
    const ONE: Self = Complex64::new(1.0, 0.0);
    const ZERO: Self = Complex64::new(0.0, 0.0);
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

impl Field for BigFloat {
    const ONE: Self = num_bigfloat::ONE;
    const ZERO: Self = num_bigfloat::ZERO;
    fn magnitude(self) -> f64 {
        libm::fabs(self.to_f64())
    }
}

/// Rounded to 40 digits.
pub fn wide_rational(q: &num_rational::BigRational) -> BigFloat {
    wide_int(q.numer()) / wide_int(q.denom())
}

fn wide_int(x: &num_bigint::BigInt) -> BigFloat {
    let (sign, digits) = x.to_u32_digits();
    let radix = BigFloat::from_u64(1 << 32);
    let magnitude = digits
        .iter()
        .rev()
        .fold(num_bigfloat::ZERO, |acc, &d| acc * radix + BigFloat::from_u32(d));
    if sign == num_bigint::Sign::Minus {
        -magnitude
    } else {
        magnitude
    }
}

/// Exact conversion; the library's own `from_f64` goes through a shortest
/// decimal string and loses the low bits. Magnitudes outside roughly
/// `1e-120..1e120` leave the library's exponent range.
pub fn wide(x: f64) -> BigFloat {
    if x == 0.0 || !x.is_finite() {
        return BigFloat::from_f64(x);
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let mut value = BigFloat::from_u64(mantissa);
    let (mut base, mut k) = if e < 0 {
        (BigFloat::from_f64(0.5), -e)
    } else {
        (num_bigfloat::TWO, e)
    };
    while k > 0 {
        if k & 1 == 1 {
            value = value * base;
        }
        base = base * base;
        k >>= 1;
    }
    if x < 0.0 {
        -value
    } else {
        value
    }
}

fn full_pivot_det<T: Field>(m: &Square<T>) -> PivotedDet<T> {
    let n = m.n;
    let mut a = m.data.clone();
    let mut det = T::ONE;
    let mut max_pivot = 0.0f64;
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        let (mut pr, mut pc, mut best) = (k, k, -1.0);
        for i in k..n {
            for j in k..n {
                let mag = a[i * n + j].magnitude();
                if mag > best {
                    best = mag;
                    pr = i;
                    pc = j;
                }
            }
        }
        max_pivot = max_pivot.max(best);
        min_pivot = min_pivot.min(best);
        if best == 0.0 {
            return PivotedDet {
                det: T::ZERO,
                max_pivot,
                min_pivot: 0.0,
            };
        }
        if pr != k {
            for j in 0..n {
                a.swap(k * n + j, pr * n + j);
            }
            det = -det;
        }
        if pc != k {
            for i in 0..n {
                a.swap(i * n + k, i * n + pc);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det = det * pivot;
        for i in k + 1..n {
            let factor = a[i * n + k] / pivot;
            for j in k + 1..n {
                a[i * n + j] = a[i * n + j] - factor * a[k * n + j];
            }
        }
    }
    PivotedDet {
        det,
        max_pivot,
        min_pivot: if n == 0 { 1.0 } else { min_pivot },
    }
}

pub fn det_real(m: &Square<f64>) -> PivotedDet<f64> {
    full_pivot_det(m)
}

pub fn det_complex(m: &Square<Complex64>) -> PivotedDet<Complex64> {
    full_pivot_det(m)
}

/// Elimination in 40 significant digits, for matrices whose determinant
/// cancels heavily.
pub fn det_wide(m: &Square<BigFloat>) -> PivotedDet<BigFloat> {
    full_pivot_det(m)
}

/// Singular values and right singular vectors of an `rows x cols` complex matrix.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// `right_vectors[k]` pairs with `singular_values[k]`.
    pub right_vectors: Vec<Vec<Complex64>>,
}

/// One-sided (Hestenes) Jacobi SVD of a row-major `rows x cols` matrix.
///
/// Columns are rotated pairwise until mutually orthogonal; their norms are the
/// singular values and the accumulated rotations are the right singular
/// vectors. Wide matrices are handled directly: the surplus columns converge
/// to zero and deliver the nullspace.
pub fn svd_complex(rows: usize, cols: usize, data: &[Complex64]) -> Svd {
    assert_eq!(data.len(), rows * cols);
    let mut work: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..rows).map(|i| data[i * cols + j]).collect())
        .collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); cols];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    let norm_sq = |c: &[Complex64]| c.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let total: f64 = work.iter().map(|c| norm_sq(c)).sum();
    let floor = total * 1e-300;

    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = norm_sq(&work[p]);
                let beta = norm_sq(&work[q]);
                let gamma: Complex64 = work[p].iter().zip(&work[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g <= f64::EPSILON * libm::sqrt(alpha * beta) || g <= floor {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = libm::copysign(1.0, zeta) / (libm::fabs(zeta) + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut work, p, q, phase, c, s);
                rotate(&mut v, p, q, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = work
        .iter()
        .enumerate()
        .map(|(j, c)| (libm::sqrt(norm_sq(c)), j))
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));
    Svd {
        singular_values: order.iter().map(|&(s, _)| s).collect(),
        right_vectors: order.iter().map(|&(_, j)| v[j].clone()).collect(),
    }
}

fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, phase: Complex64, c: f64, s: f64) {
    // Align column q's phase with p so the 2x2 Gram block is real, then apply a real rotation.
    let unphase = phase.conj();
    let (head, tail) = cols.split_at_mut(q);
    let cp = &mut head[p];
    let cq = &mut tail[0];
    for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
        let bq = *b * unphase;
        let ap = *a;
        *a = ap * c - bq * s;
        *b = ap * s + bq * c;
    }
}
