//! Spectral configurations, vertex classification, Boltzmann weights and the
//! bijection between domain-wall six-vertex states and alternating sign matrices.
//!
//! Edge orientations are stored as `±1`. A horizontal edge is `+1` when it
//! points right, a vertical edge is `+1` when it points up. For an `n x n`
//! lattice, `h` is `n x (n+1)` (column `0` is left of the first vertex) and
//! `v` is `(n+1) x n` (row `0` is above the first vertex).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Degeneracy, Error, Param, Result};

/// Default threshold for the genericity flag and the degeneracy guards.
pub const GENERIC_THRESHOLD: f64 = 1e-8;

/// `2π/3`, the crossing parameter at which the counting weights are defined.
pub const ETA_CUBE_ROOT: f64 = 2.0 * PI / 3.0;

/// Absolute tolerance used to recognise `eta = 2π/3`.
pub const ETA_MATCH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralConfig {
    eta: f64,
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl SpectralConfig {
    pub fn new(eta: f64, xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if xs.len() != ys.len() {
            return Err(Error::DimensionMismatch {
                expected: xs.len(),
                found: ys.len(),
            });
        }
        Ok(Self { eta, xs, ys })
    }

    /// All spectral parameters zero.
    pub fn homogeneous(n: usize, eta: f64) -> Result<Self> {
        Self::new(eta, vec![0.0; n], vec![0.0; n])
    }

    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn with_eta(&self, eta: f64) -> Self {
        Self { eta, ..self.clone() }
    }

    pub fn with_x(&self, i: usize, value: f64) -> Self {
        let mut out = self.clone();
        out.xs[i] = value;
        out
    }

    pub fn with_y(&self, j: usize, value: f64) -> Self {
        let mut out = self.clone();
        out.ys[j] = value;
        out
    }

    /// Exchanges `x_i` and `y_j`.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        core::mem::swap(&mut out.xs[i], &mut out.ys[j]);
        out
    }

    /// The distinct pair of parameters in `{x} ∪ {y}` with the smallest `|sin(u - v)|`.
    pub fn closest_pair(&self) -> Option<Degeneracy> {
        let params: Vec<(Param, f64)> = self
            .xs
            .iter()
            .enumerate()
            .map(|(i, &x)| (Param::X(i), x))
            .chain(self.ys.iter().enumerate().map(|(j, &y)| (Param::Y(j), y)))
            .collect();
        let mut best: Option<Degeneracy> = None;
        for (a, &(pa, ua)) in params.iter().enumerate() {
            for &(pb, ub) in &params[a + 1..] {
                let value = libm::fabs(libm::sin(ua - ub));
                if best.map_or(true, |b| value < b.value) {
                    best = Some(Degeneracy {
                        left: pa,
                        right: pb,
                        offset: 0.0,
                        value,
                    });
                }
            }
        }
        best
    }

    /// True when every distinct pair `u, v` in `{x} ∪ {y}` has `|sin(u - v)| > threshold`.
    pub fn is_generic(&self, threshold: f64) -> bool {
        self.closest_pair().map_or(true, |d| d.value > threshold)
    }

    /// Whether `eta` is `2π/3` up to [`ETA_MATCH_TOL`].
    pub fn at_cube_root(&self) -> bool {
        is_cube_root_eta(self.eta)
    }
}

pub fn is_cube_root_eta(eta: f64) -> bool {
    libm::fabs(eta - ETA_CUBE_ROOT) <= ETA_MATCH_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    B,
    C,
}

/// One of the six ice-rule vertex configurations: a weight letter and which of
/// the two arrow pictures sharing that weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexKind {
    pub letter: Letter,
    pub variant: u8,
}

impl VertexKind {
    pub const ALL: [VertexKind; 6] = [
        VertexKind::new(Letter::A, 1),
        VertexKind::new(Letter::A, 2),
        VertexKind::new(Letter::B, 1),
        VertexKind::new(Letter::B, 2),
        VertexKind::new(Letter::C, 1),
        VertexKind::new(Letter::C, 2),
    ];

    pub const fn new(letter: Letter, variant: u8) -> Self {
        Self { letter, variant }
    }

    /// The arrow pattern `(h_left, h_right, v_top, v_bottom)` of this vertex.
    pub fn arrows(self) -> [i8; 4] {
        match (self.letter, self.variant) {
            (Letter::A, 1) => [1, 1, 1, 1],
            (Letter::A, _) => [-1, -1, -1, -1],
            (Letter::B, 1) => [1, 1, -1, -1],
            (Letter::B, _) => [-1, -1, 1, 1],
            (Letter::C, 1) => [1, -1, 1, -1],
            (Letter::C, _) => [-1, 1, -1, 1],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightConvention {
    /// `a = sin(δ+η/2)/sin η`, `b = sin(δ−η/2)/sin η`, `c = 1`.
    Signed,
    /// `a = (2/√3) sin(π/3+δ)`, `b = (2/√3) sin(π/3−δ)`, `c = 1`; only at `η = 2π/3`.
    Counting,
}

/// Boltzmann weight of a vertex with spectral difference `delta = x - y`.
pub fn boltzmann_weight(kind: VertexKind, delta: f64, eta: f64, convention: WeightConvention) -> Result<f64> {
    let weights = LetterWeights::new(delta, eta, convention)?;
    Ok(weights.get(kind.letter))
}

/// The three letter weights at a fixed spectral difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LetterWeights {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl LetterWeights {
    pub fn new(delta: f64, eta: f64, convention: WeightConvention) -> Result<Self> {
        let sin_eta = libm::sin(eta);
        if libm::fabs(sin_eta) < GENERIC_THRESHOLD {
            return Err(Error::DegenerateEta(libm::fabs(sin_eta)));
        }
        match convention {
            WeightConvention::Signed => Ok(Self {
                a: libm::sin(delta + eta / 2.0) / sin_eta,
                b: libm::sin(delta - eta / 2.0) / sin_eta,
                c: 1.0,
            }),
            WeightConvention::Counting => {
                if !is_cube_root_eta(eta) {
                    return Err(Error::InvalidConvention(eta));
                }
                let scale = 2.0 / libm::sqrt(3.0);
                Ok(Self {
                    a: scale * libm::sin(PI / 3.0 + delta),
                    b: scale * libm::sin(PI / 3.0 - delta),
                    c: 1.0,
                })
            }
        }
    }

    pub fn get(&self, letter: Letter) -> f64 {
        match letter {
            Letter::A => self.a,
            Letter::B => self.b,
            Letter::C => self.c,
        }
    }
}

/// Classifies a vertex from its four arrows `(h_left, h_right, v_top, v_bottom)`.
pub fn classify_vertex(h_left: i8, h_right: i8, v_top: i8, v_bottom: i8) -> Result<VertexKind> {
    let kind = match (h_left, h_right, v_top, v_bottom) {
        (1, 1, 1, 1) => VertexKind::new(Letter::A, 1),
        (-1, -1, -1, -1) => VertexKind::new(Letter::A, 2),
        (1, 1, -1, -1) => VertexKind::new(Letter::B, 1),
        (-1, -1, 1, 1) => VertexKind::new(Letter::B, 2),
        (1, -1, 1, -1) => VertexKind::new(Letter::C, 1),
        (-1, 1, -1, 1) => VertexKind::new(Letter::C, 2),
        _ => return Err(Error::IceViolation([h_left, h_right, v_top, v_bottom])),
    };
    Ok(kind)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SixVertexState {
    n: usize,
    h: Vec<i8>,
    v: Vec<i8>,
}

impl SixVertexState {
    /// Builds a state from row-major `h` (`n x (n+1)`) and `v` (`(n+1) x n`),
    /// checking domain-wall boundaries and the ice rule.
    pub fn new(n: usize, h: Vec<i8>, v: Vec<i8>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidState("empty lattice".into()));
        }
        if h.len() != n * (n + 1) {
            return Err(Error::DimensionMismatch {
                expected: n * (n + 1),
                found: h.len(),
            });
        }
        if v.len() != n * (n + 1) {
            return Err(Error::DimensionMismatch {
                expected: n * (n + 1),
                found: v.len(),
            });
        }
        if h.iter().chain(v.iter()).any(|&e| e != 1 && e != -1) {
            return Err(Error::InvalidState("edge values must be ±1".into()));
        }
        let state = Self { n, h, v };
        for i in 0..n {
            if state.h(i, 0) != 1 || state.h(i, n) != -1 {
                return Err(Error::InvalidState(format!(
                    "row {} violates the side boundaries",
                    i + 1
                )));
            }
        }
        for j in 0..n {
            if state.v(0, j) != 1 || state.v(n, j) != -1 {
                return Err(Error::InvalidState(format!(
                    "column {} violates the top/bottom boundaries",
                    j + 1
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                state.vertex(i, j)?;
            }
        }
        Ok(state)
    }

    /// Builds the state whose vertical edges between rows are given as bitmasks
    /// (`bit j` set = column `j` points up). `boundaries` has `n + 1` entries,
    /// the first all-ones and the last zero.
    pub fn from_row_masks(n: usize, boundaries: &[u32]) -> Result<Self> {
        if boundaries.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: boundaries.len(),
            });
        }
        let mut v = Vec::with_capacity((n + 1) * n);
        for &mask in boundaries {
            v.extend((0..n).map(|j| if mask >> j & 1 == 1 { 1i8 } else { -1 }));
        }
        let mut h = Vec::with_capacity(n * (n + 1));
        for i in 0..n {
            let mut left = 1i8;
            h.push(left);
            for j in 0..n {
                // Ice rule: h_left + v_bottom = h_right + v_top.
                left = left + v[(i + 1) * n + j] - v[i * n + j];
                h.push(left);
            }
        }
        Self::new(n, h, v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Horizontal edge `j` (0..=n) of row `i` (0..n).
    pub fn h(&self, i: usize, j: usize) -> i8 {
        self.h[i * (self.n + 1) + j]
    }

    /// Vertical edge of column `j` (0..n) below boundary row `i` (0..=n).
    pub fn v(&self, i: usize, j: usize) -> i8 {
        self.v[i * self.n + j]
    }

    /// The vertex at row `i`, column `j` (both 0-based).
    pub fn vertex(&self, i: usize, j: usize) -> Result<VertexKind> {
        classify_vertex(self.h(i, j), self.h(i, j + 1), self.v(i, j), self.v(i + 1, j))
    }

    pub fn vertices(&self) -> impl Iterator<Item = (usize, usize, VertexKind)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| {
            (0..n).map(move |j| {
                let kind = self.vertex(i, j).expect("validated state satisfies the ice rule");
                (i, j, kind)
            })
        })
    }

    pub fn count_letter(&self, letter: Letter) -> usize {
        self.vertices().filter(|(_, _, k)| k.letter == letter).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Asm {
    n: usize,
    m: Vec<i8>,
}

impl Asm {
    /// Validates unit line sums and sign alternation along every row and column.
    pub fn new(n: usize, m: Vec<i8>) -> Result<Self> {
        if m.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: m.len(),
            });
        }
        if m.iter().any(|&e| !(-1..=1).contains(&e)) {
            return Err(Error::InvalidAsm("entries must lie in {-1, 0, 1}".into()));
        }
        let line_ok = |line: &mut dyn Iterator<Item = i8>| {
            let mut partial = 0i8;
            for e in line {
                partial += e;
                if !(0..=1).contains(&partial) {
                    return false;
                }
            }
            partial == 1
        };
        for i in 0..n {
            if !line_ok(&mut (0..n).map(|j| m[i * n + j])) {
                return Err(Error::InvalidAsm(format!("row {} does not alternate", i + 1)));
            }
        }
        for j in 0..n {
            if !line_ok(&mut (0..n).map(|i| m[i * n + j])) {
                return Err(Error::InvalidAsm(format!("column {} does not alternate", j + 1)));
            }
        }
        Ok(Self { n, m })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = vec![0; n * n];
        for i in 0..n {
            m[i * n + i] = 1;
        }
        Self { n, m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.m[i * self.n + j]
    }

    pub fn entries(&self) -> &[i8] {
        &self.m
    }

    pub fn count_negative(&self) -> usize {
        self.m.iter().filter(|&&e| e == -1).count()
    }
}

/// `m[i][j] = (h[i][j] − h[i][j+1]) / 2`, which equals `(v[i][j] − v[i+1][j]) / 2`.
pub fn asm_from_state(s: &SixVertexState) -> Asm {
    let n = s.n();
    let mut m = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let by_row = (s.h(i, j) - s.h(i, j + 1)) / 2;
            debug_assert_eq!(by_row, (s.v(i, j) - s.v(i + 1, j)) / 2);
            m.push(by_row);
        }
    }
    Asm { n, m }
}

/// Inverse of [`asm_from_state`]: rebuilds the edges by partial sums from the boundaries.
pub fn state_from_asm(a: &Asm) -> SixVertexState {
    let n = a.n();
    let mut h = Vec::with_capacity(n * (n + 1));
    for i in 0..n {
        let mut e = 1i8;
        h.push(e);
        for j in 0..n {
            e -= 2 * a.get(i, j);
            h.push(e);
        }
    }
    let mut v = vec![1i8; (n + 1) * n];
    for i in 0..n {
        for j in 0..n {
            v[(i + 1) * n + j] = v[i * n + j] - 2 * a.get(i, j);
        }
    }
    SixVertexState { n, h, v }
}

/// Product of the vertex weights of `s`, vertex `(i, j)` carrying `x_i − y_j`.
pub fn state_weight(s: &SixVertexState, cfg: &SpectralConfig, conv: WeightConvention) -> Result<f64> {
    if s.n() != cfg.n() {
        return Err(Error::DimensionMismatch {
            expected: cfg.n(),
            found: s.n(),
        });
    }
    let mut weight = 1.0;
    for (i, j, kind) in s.vertices() {
        weight *= boltzmann_weight(kind, cfg.xs()[i] - cfg.ys()[j], cfg.eta(), conv)?;
    }
    Ok(weight)
}
