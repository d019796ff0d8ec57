//! Izergin–Korepin determinant representation of the partition function and
//! the root-of-unity identities built on shifting `x₁` by multiples of `η`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigfloat::BigFloat;

use crate::error::{Degeneracy, Error, Param, Result};
use crate::linalg::{det_wide, wide, CompensatedSum, Square};
use crate::model::{is_cube_root_eta, SpectralConfig, GENERIC_THRESHOLD};

// Everything between the parameters and the final quotient runs in 40
// digits: with clustered parameters the determinant cancels to a few digits
// of its entries.

fn dd(x: f64) -> BigFloat {
    wide(x)
}

/// `sin(x_i − y_j + η/2) sin(x_i − y_j − η/2)` for all `i, j`, row-major,
/// with `x₁` replaced by `x₁ + shift·η`.
struct PairSines {
    n: usize,
    values: Vec<BigFloat>,
}

impl PairSines {
    fn new(cfg: &SpectralConfig, shift: u32, guard: bool) -> Result<Self> {
        check_eta(cfg.eta())?;
        let n = cfg.n();
        let eta = dd(cfg.eta());
        let half = eta / num_bigfloat::TWO;
        let mut values = Vec::with_capacity(n * n);
        for (i, &x) in cfg.xs().iter().enumerate() {
            let x = if i == 0 && shift > 0 {
                dd(x) + eta * BigFloat::from_u32(shift)
            } else {
                dd(x)
            };
            for (j, &y) in cfg.ys().iter().enumerate() {
                let d = x - dd(y);
                let (plus, minus) = ((d + half).sin(), (d - half).sin());
                if guard {
                    check_sin(plus, Param::X(i), Param::Y(j), cfg.eta() / 2.0)?;
                    check_sin(minus, Param::X(i), Param::Y(j), -cfg.eta() / 2.0)?;
                }
                values.push(plus * minus);
            }
        }
        Ok(Self { n, values })
    }

    fn get(&self, i: usize, j: usize) -> BigFloat {
        self.values[i * self.n + j]
    }
}

/// The matrix `M_ij = 1 / (sin(x_i − y_j + η/2) sin(x_i − y_j − η/2))`, with
/// `x₁` replaced by `x₁ + shift·η`.
#[derive(Debug, Clone)]
pub struct IkMatrix {
    /// Entries rounded to `f64`; [`IkMatrix::det`] uses the unrounded ones.
    pub entries: Square<f64>,
    pub source: SpectralConfig,
    pub shift: u32,
    precise: Square<BigFloat>,
}

impl IkMatrix {
    pub fn new(cfg: &SpectralConfig, shift: u32) -> Result<Self> {
        let pairs = PairSines::new(cfg, shift, true)?;
        Ok(Self::from_pairs(cfg, shift, &pairs))
    }

    fn from_pairs(cfg: &SpectralConfig, shift: u32, pairs: &PairSines) -> Self {
        let n = pairs.n;
        let precise = Square::from_fn(n, |i, j| num_bigfloat::ONE / pairs.get(i, j));
        Self {
            entries: Square::from_fn(n, |i, j| precise.get(i, j).to_f64()),
            source: cfg.clone(),
            shift,
            precise,
        }
    }

    pub fn det(&self) -> f64 {
        self.det_precise().to_f64()
    }

    fn det_precise(&self) -> BigFloat {
        det_wide(&self.precise).det
    }
}

fn shift_x1(cfg: &SpectralConfig, shift: u32) -> SpectralConfig {
    if shift == 0 {
        cfg.clone()
    } else {
        cfg.with_x(0, cfg.xs()[0] + shift as f64 * cfg.eta())
    }
}

fn check_eta(eta: f64) -> Result<()> {
    let s = libm::fabs(libm::sin(eta));
    if s < GENERIC_THRESHOLD {
        return Err(Error::DegenerateEta(s));
    }
    Ok(())
}

fn check_sin(s: BigFloat, left: Param, right: Param, offset: f64) -> Result<()> {
    let value = libm::fabs(s.to_f64());
    if value < GENERIC_THRESHOLD {
        return Err(Error::DegenerateParameters(Degeneracy {
            left,
            right,
            offset,
            value,
        }));
    }
    Ok(())
}

/// `∏_{i<i'} sin(x_i − x_i') · ∏_{j<j'} sin(y_j − y_j')`, guarded.
fn vandermonde_sines(cfg: &SpectralConfig) -> Result<BigFloat> {
    let mut prod = dd(1.0);
    let families: [(&[f64], fn(usize) -> Param); 2] = [(cfg.xs(), Param::X), (cfg.ys(), Param::Y)];
    for (params, tag) in families {
        for (a, &pa) in params.iter().enumerate() {
            for (b, &pb) in params.iter().enumerate().skip(a + 1) {
                let s = (dd(pa) - dd(pb)).sin();
                check_sin(s, tag(a), tag(b), 0.0)?;
                prod = prod * s;
            }
        }
    }
    Ok(prod)
}

fn normalization_precise(n: usize, eta: f64) -> BigFloat {
    let sign = if (n * (n.saturating_sub(1)) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    let power = (n * n - n) as i32;
    let s = num_bigfloat::ONE / dd(eta).sin();
    let mut out = dd(sign);
    for _ in 0..power {
        out = out * s;
    }
    out
}

/// Constant relating the bare determinant expression to the state sum with
/// weights `a = sin(δ+η/2)/sin η`, `b = sin(δ−η/2)/sin η`, `c = 1`:
/// `(−1)^{n(n−1)/2} (sin η)^{n−n²}`.
///
/// The bare expression is the state sum for `c = sin η` with the `y`
/// Vandermonde ordered as `sin(y_j − y_j')`, `j < j'`.
pub fn ik_normalization(n: usize, eta: f64) -> f64 {
    normalization_precise(n, eta).to_f64()
}

/// Partition function from the determinant formula, signed weights.
///
/// Equals the enumerated state sum with [`WeightConvention::Signed`](crate::model::WeightConvention).
pub fn ik_z(cfg: &SpectralConfig) -> Result<f64> {
    let pairs = PairSines::new(cfg, 0, true)?;
    let m = IkMatrix::from_pairs(cfg, 0, &pairs);
    let prefactor = pairs.values.iter().fold(dd(1.0), |acc, &p| acc * p);
    let denominator = vandermonde_sines(cfg)?;
    Ok((normalization_precise(cfg.n(), cfg.eta()) * prefactor * m.det_precise() / denominator).to_f64())
}

/// `Z · ∏_{i<i'} sin(x_i − x_i') · ∏_{j<j'} sin(y_j − y_j')`, evaluated as
/// the normalization times `det[∏_{j'≠j} sin(x_i − y_j' + η/2) sin(x_i − y_j' − η/2)]`.
///
/// Row `i` of `M` is multiplied by the full product of its denominators, which
/// removes every pole: the result is finite for all real parameters.
pub fn cleared_numerator(cfg: &SpectralConfig) -> f64 {
    let n = cfg.n();
    let Ok(pairs) = PairSines::new(cfg, 0, false) else {
        return f64::NAN;
    };
    let m = Square::from_fn(n, |i, j| {
        (0..n)
            .filter(|&jp| jp != j)
            .fold(dd(1.0), |acc, jp| acc * pairs.get(i, jp))
    });
    (normalization_precise(n, cfg.eta()) * det_wide(&m).det).to_f64()
}

/// A sum that should vanish, together with the size of its largest term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            libm::fabs(self.value)
        } else {
            libm::fabs(self.value) / self.scale
        }
    }

    fn from_terms(terms: impl IntoIterator<Item = f64>) -> Self {
        let mut sum = CompensatedSum::new();
        let mut scale = 0.0f64;
        for t in terms {
            sum.add(t);
            scale = scale.max(libm::fabs(t));
        }
        Self {
            value: sum.value(),
            scale,
        }
    }
}

/// `Σ_{k=0}^{N−1} det M^{(k)}`, which vanishes when `η = 2π/N`.
///
/// `η` is taken from `cfg` and not forced to `2π/N`, so off-root values serve
/// as controls.
pub fn shifted_det_sum(cfg: &SpectralConfig, order: u32) -> Result<Residual> {
    check_order(order)?;
    let dets = (0..order)
        .map(|k| IkMatrix::new(cfg, k).map(|m| m.det()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Residual::from_terms(dets))
}

fn check_order(order: u32) -> Result<()> {
    if order < 3 {
        return Err(Error::OutOfRange("root-of-unity order must be at least 3".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasicForm {
    /// `Z(x₁+kη) ∏_{i≥2} sin(x₁−x_i+kη) ∏_j [sin(x₁−y_j+(k+½)η) sin(x₁−y_j+(k−½)η)]⁻¹`
    General,
    /// `Z(x₁+2πk/3) ∏_{i≥2} sin(x₁−x_i+2πk/3) ∏_j sin(x₁−y_j+2πk/3)`; `η = 2π/3` only.
    CubeRoot,
}

/// Residual of the functional equation for `Z` under `x₁ → x₁ + kη`.
///
/// Uses the product form when `order == 3` and `η = 2π/3`, the general form otherwise.
pub fn basic_equation_residual(cfg: &SpectralConfig, order: u32) -> Result<Residual> {
    let form = if order == 3 && is_cube_root_eta(cfg.eta()) {
        BasicForm::CubeRoot
    } else {
        BasicForm::General
    };
    basic_equation_residual_with(cfg, order, form)
}

pub fn basic_equation_residual_with(cfg: &SpectralConfig, order: u32, form: BasicForm) -> Result<Residual> {
    check_order(order)?;
    let eta = cfg.eta();
    if form == BasicForm::CubeRoot && !(order == 3 && is_cube_root_eta(eta)) {
        return Err(Error::InvalidEta {
            expected: 2.0 * PI / 3.0,
            found: eta,
        });
    }
    let x1 = cfg.xs()[0];
    let mut terms = Vec::with_capacity(order as usize);
    for k in 0..order {
        let shift = k as f64 * eta;
        let z = ik_z(&shift_x1(cfg, k))?;
        let mut t = z;
        for &x in &cfg.xs()[1..] {
            t *= libm::sin(x1 - x + shift);
        }
        for &y in cfg.ys() {
            let d = x1 - y + shift;
            t *= match form {
                BasicForm::General => 1.0 / (libm::sin(d + eta / 2.0) * libm::sin(d - eta / 2.0)),
                BasicForm::CubeRoot => libm::sin(d),
            };
        }
        terms.push(t);
    }
    Ok(Residual::from_terms(terms))
}

/// Largest relative deviation from `Z(u + π) = (−1)^{n−1} Z(u)` over every single parameter.
pub fn quasiperiod_residual(cfg: &SpectralConfig) -> Result<f64> {
    let z = ik_z(cfg)?;
    let sign = if cfg.n() % 2 == 1 { 1.0 } else { -1.0 };
    let mut worst = 0.0f64;
    for i in 0..cfg.n() {
        for shifted in [cfg.with_x(i, cfg.xs()[i] + PI), cfg.with_y(i, cfg.ys()[i] + PI)] {
            let zs = ik_z(&shifted)?;
            worst = worst.max(libm::fabs(zs - sign * z) / libm::fabs(z));
        }
    }
    Ok(worst)
}

/// The image of `cfg` under `x → π/2 − x`, `y → −y`, `η → π − η`.
pub fn transformed(cfg: &SpectralConfig) -> SpectralConfig {
    SpectralConfig::new(
        PI - cfg.eta(),
        cfg.xs().iter().map(|&x| PI / 2.0 - x).collect(),
        cfg.ys().iter().map(|&y| -y).collect(),
    )
    .expect("same dimensions")
}

/// Relative change of `Z` under [`transformed`].
pub fn transform_residual(cfg: &SpectralConfig) -> Result<f64> {
    let z = ik_z(cfg)?;
    let zt = ik_z(&transformed(cfg))?;
    Ok(libm::fabs(zt - z) / libm::fabs(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::brute_z;
    use crate::model::{WeightConvention, ETA_CUBE_ROOT};
    use alloc::vec;

    fn cfg3(eta: f64) -> SpectralConfig {
        SpectralConfig::new(eta, vec![0.31, 0.77, 1.24], vec![0.05, 0.52, 1.01]).unwrap()
    }

    #[test]
    fn single_site_is_one() {
        let cfg = SpectralConfig::new(ETA_CUBE_ROOT, vec![0.4], vec![0.1]).unwrap();
        assert!((ik_z(&cfg).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn matches_enumeration_on_fixed_configs() {
        for eta in [ETA_CUBE_ROOT, 0.9, 1.7] {
            let cfg = cfg3(eta);
            let ik = ik_z(&cfg).unwrap();
            let brute = brute_z(&cfg, WeightConvention::Signed).unwrap();
            assert!((ik - brute).abs() <= 1e-10 * brute.abs(), "eta={eta}: {ik} vs {brute}");
        }
    }

    #[test]
    fn cleared_numerator_agrees() {
        let cfg = cfg3(1.3);
        let z = ik_z(&cfg).unwrap();
        let expected = z * vandermonde_sines(&cfg).unwrap().to_f64();
        let got = cleared_numerator(&cfg);
        assert!((got - expected).abs() <= 1e-12 * expected.abs());
    }

    #[test]
    fn coincident_rows_are_rejected() {
        let cfg = SpectralConfig::new(ETA_CUBE_ROOT, vec![0.3, 0.3], vec![0.0, 1.0]).unwrap();
        match ik_z(&cfg) {
            Err(Error::DegenerateParameters(d)) => {
                assert_eq!((d.left, d.right), (Param::X(0), Param::X(1)));
            }
            other => panic!("expected degeneracy, got {other:?}"),
        }
        let pole = SpectralConfig::new(ETA_CUBE_ROOT, vec![ETA_CUBE_ROOT / 2.0], vec![0.0]).unwrap();
        assert!(matches!(ik_z(&pole), Err(Error::DegenerateParameters(_))));
    }

    #[test]
    fn shifted_determinants_cancel_at_roots_of_unity() {
        for order in [3u32, 4, 5] {
            let cfg = cfg3(2.0 * PI / order as f64);
            let r = shifted_det_sum(&cfg, order).unwrap();
            assert!(r.relative() < 1e-10, "N={order}: {r:?}");
        }
        let control = SpectralConfig::new(1.0, vec![0.2, 0.95], vec![0.4, 1.3]).unwrap();
        assert!(shifted_det_sum(&control, 3).unwrap().relative() > 1e-3);
        assert!(shifted_det_sum(&control, 2).is_err());
    }

    #[test]
    fn basic_equation_both_forms() {
        let cfg = cfg3(ETA_CUBE_ROOT);
        let product = basic_equation_residual_with(&cfg, 3, BasicForm::CubeRoot).unwrap();
        let general = basic_equation_residual_with(&cfg, 3, BasicForm::General).unwrap();
        assert!(product.relative() < 1e-10, "{product:?}");
        assert!(general.relative() < 1e-10, "{general:?}");
        let cfg4 = cfg3(PI / 2.0);
        assert!(basic_equation_residual(&cfg4, 4).unwrap().relative() < 1e-10);
        assert!(basic_equation_residual_with(&cfg4, 4, BasicForm::CubeRoot).is_err());
    }

    #[test]
    fn symmetry_properties() {
        let cfg = cfg3(1.1);
        assert!(quasiperiod_residual(&cfg).unwrap() < 1e-11);
        assert!(transform_residual(&cfg).unwrap() < 1e-11);
        let z = ik_z(&cfg).unwrap();
        let permuted = SpectralConfig::new(1.1, vec![1.24, 0.31, 0.77], vec![1.01, 0.05, 0.52]).unwrap();
        assert!((ik_z(&permuted).unwrap() - z).abs() < 1e-11 * z.abs());
    }
}
