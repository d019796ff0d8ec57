//! Root-of-unity machinery at `η = 2π/3`.
//!
//! With `u = x₁` distinguished and `u_1..u_{2n−1} = x₂..x_n, y₁..y_n`, the
//! function `f(u) = Z(u) ∏ sin(u − u_i)` is a trigonometric polynomial of
//! degree `3n−2` that satisfies `f(u) + f(u+2π/3) + f(u+4π/3) = 0`. Its
//! Fourier coefficients at frequencies divisible by three vanish and the
//! remaining `2n` are fixed, up to scale, by the `2n−1` zeros `u_j`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Degeneracy, Error, Param, Result};
use crate::ikdet::{cleared_numerator, ik_z};
use crate::linalg::{det_complex, svd_complex, Square};
use crate::model::{is_cube_root_eta, SpectralConfig, ETA_CUBE_ROOT, GENERIC_THRESHOLD};

/// Nullspace acceptance: smallest singular value below this fraction of the largest.
pub const NULL_SV_RATIO: f64 = 1e-6;
/// Rank acceptance: second-smallest singular value above this fraction of the largest.
pub const RANK_SV_RATIO: f64 = 1e-3;

/// A finite Fourier sum `Σ_k c_k e^{i(d−2k)u}`, `k = 0..=d`.
///
/// Every frequency has the parity of `d`, so `p(u + π) = (−1)^d p(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    maxfreq: usize,
    coeffs: Vec<Complex64>,
}

impl TrigPoly {
    pub fn new(maxfreq: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != maxfreq + 1 {
            return Err(Error::DimensionMismatch {
                expected: maxfreq + 1,
                found: coeffs.len(),
            });
        }
        Ok(Self { maxfreq, coeffs })
    }

    pub fn constant(c: f64) -> Self {
        Self {
            maxfreq: 0,
            coeffs: vec![Complex64::new(c, 0.0)],
        }
    }

    /// `Σ_m amp_m sin(freq_m u)`; every `|freq_m|` must share the parity of `maxfreq`.
    pub fn from_sines(maxfreq: usize, terms: &[(i64, f64)]) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); maxfreq + 1];
        let half_i = Complex64::new(0.0, 0.5);
        for &(freq, amp) in terms {
            let up = index_of(maxfreq, freq).ok_or(Error::DimensionMismatch {
                expected: maxfreq,
                found: freq.unsigned_abs() as usize,
            })?;
            let down = index_of(maxfreq, -freq).expect("symmetric range");
            // sin(wu) = (e^{iwu} − e^{−iwu}) / 2i
            coeffs[up] -= half_i * amp;
            coeffs[down] += half_i * amp;
        }
        Self::new(maxfreq, coeffs)
    }

    pub fn maxfreq(&self) -> usize {
        self.maxfreq
    }

    pub fn parity(&self) -> i8 {
        if self.maxfreq % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn frequency(&self, k: usize) -> i64 {
        self.maxfreq as i64 - 2 * k as i64
    }

    pub fn coeff_at(&self, freq: i64) -> Complex64 {
        index_of(self.maxfreq, freq).map_or(Complex64::new(0.0, 0.0), |k| self.coeffs[k])
    }

    pub fn eval(&self, u: f64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * Complex64::from_polar(1.0, self.frequency(k) as f64 * u))
            .sum()
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * Complex64::new(0.0, self.frequency(k) as f64))
            .collect();
        Self {
            maxfreq: self.maxfreq,
            coeffs,
        }
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Rescaled so the largest coefficient is `1` (ties go to the first).
    pub fn normalized(&self) -> Self {
        let lead =
            self.coeffs.iter().copied().fold(
                Complex64::new(0.0, 0.0),
                |best, c| if c.norm() > best.norm() { c } else { best },
            );
        if lead.norm() == 0.0 {
            return self.clone();
        }
        Self {
            maxfreq: self.maxfreq,
            coeffs: self.coeffs.iter().map(|&c| c / lead).collect(),
        }
    }

    /// Largest `|frequency|` whose coefficient exceeds `tol` times the largest coefficient.
    pub fn effective_degree(&self, tol: f64) -> usize {
        let cutoff = tol * self.max_coeff();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > cutoff)
            .map(|(k, _)| self.frequency(k).unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Interpolates `sample` at `u_j = phase + πj/(d+1)`, `j = 0..=d`.
    ///
    /// With the top frequency factored out, `p(u) e^{−idu}` is a polynomial of
    /// degree `d` in `e^{−2iu}`, so the nodes make the system a plain DFT.
    pub fn interpolate(maxfreq: usize, phase: f64, mut sample: impl FnMut(f64) -> Result<Complex64>) -> Result<Self> {
        let m = maxfreq + 1;
        let d = maxfreq as f64;
        let mut g = Vec::with_capacity(m);
        for j in 0..m {
            let u = phase + PI * j as f64 / m as f64;
            g.push(sample(u)? * Complex64::from_polar(1.0, -d * u));
        }
        let mut coeffs = Vec::with_capacity(m);
        for k in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &gj) in g.iter().enumerate() {
                let angle = 2.0 * PI * ((j * k) % m) as f64 / m as f64;
                acc += gj * Complex64::from_polar(1.0, angle);
            }
            let c = acc / m as f64 * Complex64::from_polar(1.0, 2.0 * k as f64 * phase);
            coeffs.push(c);
        }
        Self::new(maxfreq, coeffs)
    }
}

fn index_of(maxfreq: usize, freq: i64) -> Option<usize> {
    let d = maxfreq as i64;
    let twice = d - freq;
    (freq.abs() <= d && twice % 2 == 0).then(|| (twice / 2) as usize)
}

/// The distinguished variable `u = x₁` and the others `x₂..x_n, y₁..y_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct UPartition {
    pub u: f64,
    pub us: Vec<f64>,
}

impl UPartition {
    pub fn from_config(cfg: &SpectralConfig) -> Self {
        Self {
            u: cfg.xs()[0],
            us: cfg.xs()[1..].iter().chain(cfg.ys()).copied().collect(),
        }
    }

    pub fn n(&self) -> usize {
        (self.us.len() + 1) / 2
    }

    fn param(&self, k: usize) -> Param {
        let n = self.n();
        if k + 1 < n {
            Param::X(k + 1)
        } else {
            Param::Y(k + 1 - n)
        }
    }

    /// Fails when two of the `u_j` coincide modulo `π`.
    pub fn check_generic(&self, threshold: f64) -> Result<()> {
        for a in 0..self.us.len() {
            for b in a + 1..self.us.len() {
                let value = libm::fabs(libm::sin(self.us[a] - self.us[b]));
                if value <= threshold {
                    return Err(Error::DegenerateParameters(Degeneracy {
                        left: self.param(a),
                        right: self.param(b),
                        offset: 0.0,
                        value,
                    }));
                }
            }
        }
        Ok(())
    }
}

/// `f(u) = Z(u) ∏_{i=1}^{2n−1} sin(u − u_i)` evaluated through the determinant
/// formula directly.
pub fn f_direct(cfg: &SpectralConfig, u: f64) -> Result<f64> {
    let moved = cfg.with_x(0, u);
    let z = ik_z(&moved)?;
    let part = UPartition::from_config(cfg);
    Ok(z * part.us.iter().map(|&ui| libm::sin(u - ui)).product::<f64>())
}

/// Evaluator for `f` that is finite at every `u`: the `sin(u − x_i)` factors
/// cancel against the determinant denominator and the remaining constants are
/// precomputed.
struct FSampler<'a> {
    cfg: &'a SpectralConfig,
    inverse_denominator: f64,
}

impl<'a> FSampler<'a> {
    fn new(cfg: &'a SpectralConfig) -> Result<Self> {
        let part = UPartition::from_config(cfg);
        part.check_generic(GENERIC_THRESHOLD)?;
        let xs = cfg.xs();
        let ys = cfg.ys();
        let mut denominator = 1.0;
        for a in 1..xs.len() {
            for b in a + 1..xs.len() {
                denominator *= libm::sin(xs[a] - xs[b]);
            }
        }
        for a in 0..ys.len() {
            for b in a + 1..ys.len() {
                denominator *= libm::sin(ys[a] - ys[b]);
            }
        }
        Ok(Self {
            cfg,
            inverse_denominator: 1.0 / denominator,
        })
    }

    fn eval(&self, u: f64) -> f64 {
        let moved = self.cfg.with_x(0, u);
        let tail: f64 = self.cfg.ys().iter().map(|&y| libm::sin(u - y)).product();
        cleared_numerator(&moved) * tail * self.inverse_denominator
    }
}

/// Fourier representation of `f` for any `η` (the cyclic law needs `η = 2π/3`).
pub fn fourier_f(cfg: &SpectralConfig) -> Result<TrigPoly> {
    let sampler = FSampler::new(cfg)?;
    let d = 3 * cfg.n() - 2;
    TrigPoly::interpolate(d, 0.0, |u| Ok(Complex64::new(sampler.eval(u), 0.0)))
}

/// `f` from the partition function at `η = 2π/3`: maxfreq `3n−2`, parity `(−1)^n`.
pub fn f_from_z(cfg: &SpectralConfig) -> Result<TrigPoly> {
    if !is_cube_root_eta(cfg.eta()) {
        return Err(Error::InvalidEta {
            expected: ETA_CUBE_ROOT,
            found: cfg.eta(),
        });
    }
    fourier_f(cfg)
}

/// Deterministic probe points spread over one quasiperiod.
pub fn probe_points(count: usize) -> impl Iterator<Item = f64> {
    (0..count).map(move |s| 0.0731 + PI * (s as f64 + 0.37) / count as f64)
}

/// `max |f(u) + f(u+2π/3) + f(u+4π/3)| / max |f|` over probe points.
pub fn cyclic_residual(f: &TrigPoly) -> f64 {
    let third = 2.0 * PI / 3.0;
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for u in probe_points(24) {
        let vals = [f.eval(u), f.eval(u + third), f.eval(u + 2.0 * third)];
        for v in vals {
            scale = scale.max(v.norm());
        }
        worst = worst.max((vals[0] + vals[1] + vals[2]).norm());
    }
    if scale == 0.0 {
        worst
    } else {
        worst / scale
    }
}

/// `max_κ |b_{3κ}| / max_k |b_k|`, `κ = 1..n−1`, where `b_k` multiplies `e^{i(3n−2k)u}`.
pub fn third_coeff_check(f: &TrigPoly, n: usize) -> Result<f64> {
    if n == 0 || f.maxfreq() != 3 * n - 2 {
        return Err(Error::DimensionMismatch {
            expected: (3 * n).saturating_sub(2),
            found: f.maxfreq(),
        });
    }
    let scale = f.max_coeff();
    let worst = (1..n).map(|kappa| f.coeffs()[3 * kappa - 1].norm()).fold(0.0, f64::max);
    Ok(if scale == 0.0 { worst } else { worst / scale })
}

/// Allowed frequencies `3n − 2k`, `k = 1..3n−1`, `3 ∤ k`, in order of `k`.
pub fn allowed_frequencies(n: usize) -> Vec<i64> {
    (1..3 * n as i64)
        .filter(|k| k % 3 != 0)
        .map(|k| 3 * n as i64 - 2 * k)
        .collect()
}

fn n_from_us(us: &[f64]) -> Result<usize> {
    if us.len() % 2 == 0 {
        return Err(Error::DimensionMismatch {
            expected: us.len() + 1,
            found: us.len(),
        });
    }
    Ok((us.len() + 1) / 2)
}

/// The unique (up to scale) allowed-frequency polynomial vanishing at every `u_j`.
pub fn solve_null(us: &[f64]) -> Result<TrigPoly> {
    let n = n_from_us(us)?;
    let freqs = allowed_frequencies(n);
    let rows = us.len();
    let cols = freqs.len();
    let mut data = Vec::with_capacity(rows * cols);
    for &u in us {
        for &w in &freqs {
            data.push(Complex64::from_polar(1.0, w as f64 * u));
        }
    }
    let svd = svd_complex(rows, cols, &data);
    let sv = &svd.singular_values;
    let largest = sv[0];
    let smallest = sv[cols - 1];
    let second = if cols >= 2 { sv[cols - 2] } else { largest };
    if smallest >= NULL_SV_RATIO * largest || second <= RANK_SV_RATIO * largest {
        return Err(Error::RankDeficient {
            smallest,
            second,
            largest,
        });
    }
    let null = &svd.right_vectors[cols - 1];
    let d = 3 * n - 2;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
    for (c, &w) in null.iter().zip(&freqs) {
        coeffs[index_of(d, w).expect("allowed frequencies lie in range")] = *c;
    }
    Ok(TrigPoly::new(d, coeffs)?.normalized())
}

/// Determinant of the `2n x 2n` matrix whose columns are `t, t_1, ..., t_{2n−1}`
/// raised to the allowed frequencies, `t = e^{iu}`.
pub fn p_determinant(u: f64, us: &[f64]) -> Result<Complex64> {
    let n = n_from_us(us)?;
    if !u.is_finite() || us.iter().any(|x| !x.is_finite()) {
        return Err(Error::OutOfRange("non-finite spectral parameter".into()));
    }
    let freqs = allowed_frequencies(n);
    let m = Square::from_fn(2 * n, |r, c| {
        let angle = if c == 0 { u } else { us[c - 1] };
        Complex64::from_polar(1.0, freqs[r] as f64 * angle)
    });
    Ok(det_complex(&m).det)
}

/// Relative spread `max_s |r_s − r̄| / |r̄|` of `p(u_s) / q(u_s)` over `points`.
///
/// Points where `|q|` is below `1e-3` of its largest sampled value are skipped
/// so that zeros of `q` do not dominate.
pub fn ratio_spread(
    points: &[f64],
    mut p: impl FnMut(f64) -> Result<Complex64>,
    mut q: impl FnMut(f64) -> Result<Complex64>,
) -> Result<(Complex64, f64)> {
    let mut pairs = Vec::with_capacity(points.len());
    for &u in points {
        pairs.push((p(u)?, q(u)?));
    }
    let qmax = pairs.iter().map(|(_, b)| b.norm()).fold(0.0, f64::max);
    let ratios: Vec<Complex64> = pairs
        .iter()
        .filter(|(_, b)| b.norm() > 1e-3 * qmax)
        .map(|(a, b)| a / b)
        .collect();
    if ratios.is_empty() {
        return Err(Error::IllConditioned(f64::INFINITY));
    }
    let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
    let spread = ratios.iter().map(|r| (r - mean).norm()).fold(0.0, f64::max) / mean.norm();
    Ok((mean, spread))
}

/// `max |P(u_j)| / max_s |P(u_s)|`: how well `P` vanishes at the fixed parameters.
pub fn p_zero_residual(us: &[f64]) -> Result<f64> {
    let mut scale = 0.0f64;
    for u in probe_points(16) {
        scale = scale.max(p_determinant(u, us)?.norm());
    }
    let mut worst = 0.0f64;
    for &uj in us {
        worst = worst.max(p_determinant(uj, us)?.norm());
    }
    Ok(worst / scale)
}

/// The constant `C̃` in `P = C̃ ∏_j sin(u − u_j) ∏_{j<j'} sin(u_j − u_j') Z`, measured at `u = x₁`.
pub fn c_tilde(cfg: &SpectralConfig) -> Result<Complex64> {
    let part = UPartition::from_config(cfg);
    part.check_generic(GENERIC_THRESHOLD)?;
    let p = p_determinant(part.u, &part.us)?;
    let z = ik_z(cfg)?;
    let mut prod = z;
    for &uj in &part.us {
        prod *= libm::sin(part.u - uj);
    }
    for a in 0..part.us.len() {
        for b in a + 1..part.us.len() {
            prod *= libm::sin(part.us[a] - part.us[b]);
        }
    }
    Ok(p / prod)
}

/// Largest relative change of `Z` over all `n²` single exchanges `x_i ↔ y_j`.
pub fn union_symmetry_residual(cfg: &SpectralConfig) -> Result<f64> {
    let z = ik_z(cfg)?;
    let mut worst = 0.0f64;
    for i in 0..cfg.n() {
        for j in 0..cfg.n() {
            let zs = ik_z(&cfg.swapped(i, j))?;
            worst = worst.max(libm::fabs(zs - z) / libm::fabs(z));
        }
    }
    Ok(worst)
}

/// Fits `Z` as a function of one parameter with two spare frequencies and
/// reports how far it is from a degree-`(n−1)` trigonometric polynomial of
/// parity `(−1)^{n−1}`: the larger of the relative weight above degree `n−1`
/// and the relative misfit at fresh points.
pub fn single_variable_degree_residual(cfg: &SpectralConfig, param: Param) -> Result<f64> {
    let n = cfg.n();
    let d = n + 1;
    let others: Vec<f64> = match param {
        Param::X(i) => cfg
            .xs()
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, &x)| x)
            .collect(),
        Param::Y(j) => cfg
            .ys()
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &y)| y)
            .collect(),
    };
    let z_at = |u: f64| -> Result<f64> {
        let moved = match param {
            Param::X(i) => cfg.with_x(i, u),
            Param::Y(j) => cfg.with_y(j, u),
        };
        ik_z(&moved)
    };
    // Keep every node away from the poles sin(u − other) = 0.
    let phase = (0..64)
        .map(|k| 0.0173 * k as f64)
        .find(|&phase| {
            (0..=d).all(|j| {
                let u = phase + PI * j as f64 / (d + 1) as f64;
                others.iter().all(|&o| libm::fabs(libm::sin(u - o)) > 0.02)
            })
        })
        .ok_or(Error::IllConditioned(f64::INFINITY))?;
    let poly = TrigPoly::interpolate(d, phase, |u| z_at(u).map(|z| Complex64::new(z, 0.0)))?;
    let scale = poly.max_coeff();
    let excess = poly.coeff_at(d as i64).norm().max(poly.coeff_at(-(d as i64)).norm()) / scale;
    let mut misfit = 0.0f64;
    let mut zmax = 0.0f64;
    for u in probe_points(7) {
        let u = u + 0.05;
        if others.iter().any(|&o| libm::fabs(libm::sin(u - o)) < 0.02) {
            continue;
        }
        let z = z_at(u)?;
        zmax = zmax.max(libm::fabs(z));
        misfit = misfit.max((poly.eval(u) - z).norm());
    }
    Ok(excess.max(if zmax == 0.0 { misfit } else { misfit / zmax }))
}

/// [`single_variable_degree_residual`] maximized over all `2n` parameters.
pub fn degree_residual(cfg: &SpectralConfig) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..cfg.n() {
        worst = worst.max(single_variable_degree_residual(cfg, Param::X(k))?);
        worst = worst.max(single_variable_degree_residual(cfg, Param::Y(k))?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, eta: f64) -> SpectralConfig {
        let xs = (0..n).map(|i| 0.13 + 0.41 * i as f64).collect();
        let ys = (0..n).map(|j| 0.29 + 0.37 * j as f64 + 0.05).collect();
        SpectralConfig::new(eta, xs, ys).unwrap()
    }

    #[test]
    fn trig_poly_basics() {
        let p = TrigPoly::from_sines(3, &[(1, 2.0), (-3, 0.5)]).unwrap();
        for u in [0.2, 1.1, -0.7] {
            let expect = 2.0 * libm::sin(u) + 0.5 * libm::sin(-3.0 * u);
            assert!((p.eval(u).re - expect).abs() < 1e-14);
            assert!(p.eval(u).im.abs() < 1e-14);
            assert!((p.eval(u + PI) + p.eval(u)).norm() < 1e-13);
            let dexp = 2.0 * libm::cos(u) - 1.5 * libm::cos(-3.0 * u);
            assert!((p.derivative().eval(u).re - dexp).abs() < 1e-13);
        }
        assert_eq!(p.parity(), -1);
        assert_eq!(p.effective_degree(1e-12), 3);
        assert!(TrigPoly::from_sines(3, &[(2, 1.0)]).is_err());
        assert!(TrigPoly::new(2, vec![Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn interpolation_recovers_coefficients() {
        let p = TrigPoly::from_sines(5, &[(5, 1.0), (1, -0.3), (-3, 0.7)]).unwrap();
        for phase in [0.0, 0.4] {
            let q = TrigPoly::interpolate(5, phase, |u| Ok(p.eval(u))).unwrap();
            for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
                assert!((a - b).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn f_for_single_site_is_a_sine() {
        let c = SpectralConfig::new(ETA_CUBE_ROOT, vec![0.2], vec![0.9]).unwrap();
        let f = f_from_z(&c).unwrap();
        assert_eq!(f.maxfreq(), 1);
        for u in [0.3, 1.4, 2.2] {
            assert!((f.eval(u).re - libm::sin(u - 0.9)).abs() < 1e-14);
        }
        assert!(cyclic_residual(&f) < 1e-12);
    }

    #[test]
    fn f_matches_direct_evaluation() {
        for n in [2, 3] {
            let c = cfg(n, ETA_CUBE_ROOT);
            let f = f_from_z(&c).unwrap();
            assert_eq!(f.parity(), if n % 2 == 0 { 1 } else { -1 });
            for u in probe_points(10) {
                let direct = f_direct(&c, u + 0.011).unwrap();
                let got = f.eval(u + 0.011);
                assert!((got.re - direct).abs() < 1e-9 * direct.abs().max(1e-3), "n={n} u={u}");
                assert!(got.im.abs() < 1e-12);
            }
            assert!(cyclic_residual(&f) < 1e-10);
            assert!(third_coeff_check(&f, n).unwrap() < 1e-10);
        }
        assert!(f_from_z(&cfg(2, 0.9)).is_err());
    }

    #[test]
    fn cyclic_and_third_controls() {
        assert!((cyclic_residual(&TrigPoly::constant(1.0)) - 3.0).abs() < 1e-15);
        let f = fourier_f(&cfg(2, 0.9)).unwrap();
        assert!(third_coeff_check(&f, 2).unwrap() > 1e-3);
        assert!(third_coeff_check(&f, 3).is_err());
    }

    #[test]
    fn nullspace_single_zero() {
        let p = solve_null(&[0.7]).unwrap();
        let scale = p.eval(0.7 + PI / 2.0);
        for u in [0.0, 0.4, 1.9] {
            let expect = libm::sin(u - 0.7);
            assert!((p.eval(u) / scale - Complex64::new(expect, 0.0)).norm() < 1e-12);
        }
        let lead = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!((lead - 1.0).abs() < 1e-14);
        assert!(solve_null(&[0.1, 0.2]).is_err());
        assert!(matches!(solve_null(&[0.5, 0.5, 1.0]), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn three_reconstructions_agree() {
        for n in [2, 3] {
            let c = cfg(n, ETA_CUBE_ROOT);
            let part = UPartition::from_config(&c);
            let null = solve_null(&part.us).unwrap();
            let f = f_from_z(&c).unwrap();
            for &uj in &part.us {
                assert!(null.eval(uj).norm() < 1e-9);
            }
            assert!(cyclic_residual(&null) < 1e-9);
            let pts: Vec<f64> = probe_points(12).collect();
            let (_, s1) = ratio_spread(&pts, |u| Ok(null.eval(u)), |u| Ok(f.eval(u))).unwrap();
            let (_, s2) = ratio_spread(&pts, |u| p_determinant(u, &part.us), |u| Ok(null.eval(u))).unwrap();
            assert!(s1 < 1e-8, "n={n}: {s1}");
            assert!(s2 < 1e-8, "n={n}: {s2}");
            assert!(p_zero_residual(&part.us).unwrap() < 1e-9);
        }
    }

    #[test]
    fn p_for_single_zero_is_a_sine() {
        let (_, spread) = ratio_spread(
            &[0.1, 0.5, 1.3, 2.0],
            |u| p_determinant(u, &[0.4]),
            |u| Ok(Complex64::new(libm::sin(u - 0.4), 0.0)),
        )
        .unwrap();
        assert!(spread < 1e-13);
    }

    #[test]
    fn union_symmetry_only_at_cube_root() {
        assert!(union_symmetry_residual(&cfg(3, ETA_CUBE_ROOT)).unwrap() < 1e-9);
        assert!(union_symmetry_residual(&cfg(2, 0.9)).unwrap() > 1e-3);
    }

    #[test]
    fn degree_of_z_in_each_parameter() {
        for eta in [ETA_CUBE_ROOT, 1.3] {
            assert!(degree_residual(&cfg(3, eta)).unwrap() < 1e-9);
        }
    }
}
