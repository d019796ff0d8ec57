//! Exhaustive generation of domain-wall states and the boundary statistics
//! `A(n,r)`, `B(n;r,r̃)`, `C(n;r,r̃)`.
//!
//! A state is a path of vertical-edge bitmasks between consecutive rows
//! (`bit j` set = column `j` points up), starting from all-up above the first
//! row and ending all-down below the last. Each row removes exactly one up
//! arrow; a step `T -> B` is admissible when the horizontal arrows forced by the
//! ice rule stay in `±1` and leave the row pointing left.
//!
//! Work can be split across the first-row transitions: every path begins with
//! one of [`Enumerator::first_transitions`], and the subtrees are disjoint.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::linalg::CompensatedSum;
use crate::model::{classify_vertex, LetterWeights, SixVertexState, SpectralConfig, WeightConvention};

/// Largest `n` enumerated without an explicit override.
pub const DEFAULT_CEILING: usize = 8;

/// Hard limit imposed by the bitmask representation and the transition table.
pub const MAX_N: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub from: u32,
    pub to: u32,
}

impl Transition {
    /// Vertex arrows `(h_left, h_right, v_top, v_bottom)` along the row, or
    /// `None` if the step violates the ice rule or the side boundaries.
    fn row_arrows(self, n: usize) -> Option<Vec<[i8; 4]>> {
        let mut out = Vec::with_capacity(n);
        let mut left = 1i8;
        for j in 0..n {
            let top = if self.from >> j & 1 == 1 { 1 } else { -1 };
            let bottom = if self.to >> j & 1 == 1 { 1 } else { -1 };
            let right = left + bottom - top;
            if right != 1 && right != -1 {
                return None;
            }
            out.push([left, right, top, bottom]);
            left = right;
        }
        (left == -1).then_some(out)
    }
}

#[derive(Debug, Clone)]
pub struct Enumerator {
    n: usize,
    transitions: Vec<Transition>,
    /// Transition ids leaving each mask.
    out: Vec<Range<u32>>,
}

impl Enumerator {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_ceiling(n, DEFAULT_CEILING)
    }

    pub fn with_ceiling(n: usize, ceiling: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("n must be at least 1".into()));
        }
        if n > ceiling.min(MAX_N) {
            return Err(Error::SizeTooLarge {
                n,
                ceiling: ceiling.min(MAX_N),
            });
        }
        let size = 1usize << n;
        let mut by_popcount: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        for mask in 0..size as u32 {
            by_popcount[mask.count_ones() as usize].push(mask);
        }
        let mut transitions = Vec::new();
        let mut out = vec![0..0; size];
        for from in 0..size as u32 {
            let k = from.count_ones() as usize;
            if k == 0 {
                continue;
            }
            let start = transitions.len() as u32;
            for &to in &by_popcount[k - 1] {
                let t = Transition { from, to };
                if t.row_arrows(n).is_some() {
                    transitions.push(t);
                }
            }
            out[from as usize] = start..transitions.len() as u32;
        }
        Ok(Self { n, transitions, out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    pub fn transition(&self, id: u32) -> Transition {
        self.transitions[id as usize]
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Ids of the admissible first-row transitions; their subtrees partition all states.
    pub fn first_transitions(&self) -> Range<u32> {
        self.out[self.full_mask() as usize].clone()
    }

    /// Calls `f` once per state.
    pub fn for_each_path(&self, mut f: impl FnMut(&Path<'_>)) {
        for first in self.first_transitions() {
            self.for_each_path_from(first, &mut f);
        }
    }

    /// Calls `f` once per state whose first row is transition `first`.
    pub fn for_each_path_from(&self, first: u32, mut f: impl FnMut(&Path<'_>)) {
        let mut cursor = Cursor::new(self, first..first + 1);
        while let Some(path) = cursor.next_path() {
            f(&path);
        }
    }

    /// Streams every state as an owned [`SixVertexState`].
    pub fn states(&self) -> States<'_> {
        States {
            cursor: Cursor::new(self, self.first_transitions()),
        }
    }

    pub fn count(&self) -> u64 {
        let mut count = 0u64;
        self.for_each_path(|_| count += 1);
        count
    }
}

/// One complete state, as the transition taken in each row.
#[derive(Debug, Clone, Copy)]
pub struct Path<'a> {
    enumerator: &'a Enumerator,
    steps: &'a [u32],
}

impl<'a> Path<'a> {
    pub fn steps(&self) -> &'a [u32] {
        self.steps
    }

    /// Vertical-edge mask below row `i` (0-based), i.e. boundary `i + 1`.
    pub fn mask_below(&self, i: usize) -> u32 {
        self.enumerator.transition(self.steps[i]).to
    }

    /// 1-based column of the `1` in the top row.
    pub fn top_column(&self) -> usize {
        let full = self.enumerator.full_mask();
        (full & !self.mask_below(0)).trailing_zeros() as usize + 1
    }

    /// 1-based column of the `1` in the bottom row.
    pub fn bottom_column(&self) -> usize {
        let n = self.enumerator.n;
        if n == 1 {
            return 1;
        }
        self.mask_below(n - 2).trailing_zeros() as usize + 1
    }

    /// 1-based row of the `1` in the left column.
    pub fn left_row(&self) -> usize {
        (0..self.enumerator.n)
            .find(|&i| self.mask_below(i) & 1 == 0)
            .map(|i| i + 1)
            .expect("left column always turns down")
    }

    pub fn to_state(&self) -> SixVertexState {
        let n = self.enumerator.n;
        let mut masks = Vec::with_capacity(n + 1);
        masks.push(self.enumerator.full_mask());
        masks.extend((0..n).map(|i| self.mask_below(i)));
        SixVertexState::from_row_masks(n, &masks).expect("enumerated paths are valid states")
    }
}

/// Depth-first odometer over paths with first transition in a given range.
struct Cursor<'a> {
    enumerator: &'a Enumerator,
    first: Range<u32>,
    ids: Vec<u32>,
    ends: Vec<u32>,
    started: bool,
}

impl<'a> Cursor<'a> {
    fn new(enumerator: &'a Enumerator, first: Range<u32>) -> Self {
        Self {
            enumerator,
            first,
            ids: Vec::with_capacity(enumerator.n),
            ends: Vec::with_capacity(enumerator.n),
            started: false,
        }
    }

    /// Extends the stack with the first successor at every remaining level.
    fn descend(&mut self) {
        while self.ids.len() < self.enumerator.n {
            let last = *self.ids.last().expect("descend starts below level 0");
            let mask = self.enumerator.transition(last).to;
            let range = self.enumerator.out[mask as usize].clone();
            debug_assert!(!range.is_empty());
            self.ids.push(range.start);
            self.ends.push(range.end);
        }
    }

    fn next_path(&mut self) -> Option<Path<'_>> {
        if !self.started {
            self.started = true;
            if self.first.is_empty() {
                return None;
            }
            self.ids.push(self.first.start);
            self.ends.push(self.first.end);
            self.descend();
        } else {
            loop {
                let level = self.ids.len().checked_sub(1)?;
                self.ids[level] += 1;
                if self.ids[level] < self.ends[level] {
                    break;
                }
                self.ids.pop();
                self.ends.pop();
                if self.ids.is_empty() {
                    return None;
                }
            }
            self.descend();
        }
        Some(Path {
            enumerator: self.enumerator,
            steps: &self.ids,
        })
    }
}

pub struct States<'a> {
    cursor: Cursor<'a>,
}

impl Iterator for States<'_> {
    type Item = SixVertexState;

    fn next(&mut self) -> Option<SixVertexState> {
        self.cursor.next_path().map(|p| p.to_state())
    }
}

/// Streams all states of order `n` (within [`DEFAULT_CEILING`]).
pub fn enumerate_states(n: usize) -> Result<Vec<SixVertexState>> {
    Ok(Enumerator::new(n)?.states().collect())
}

/// Per-row products of vertex weights for every admissible transition.
#[derive(Debug, Clone)]
pub struct RowWeights {
    table: Vec<f64>,
    transitions: usize,
}

impl RowWeights {
    pub fn new(enumerator: &Enumerator, cfg: &SpectralConfig, conv: WeightConvention) -> Result<Self> {
        let n = enumerator.n();
        if cfg.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: cfg.n(),
            });
        }
        let count = enumerator.transitions().len();
        let mut table = Vec::with_capacity(n * count);
        for i in 0..n {
            let letters: Vec<LetterWeights> = cfg
                .ys()
                .iter()
                .map(|&y| LetterWeights::new(cfg.xs()[i] - y, cfg.eta(), conv))
                .collect::<Result<_>>()?;
            for t in enumerator.transitions() {
                let arrows = t.row_arrows(n).expect("stored transitions are admissible");
                let mut w = 1.0;
                for (j, [hl, hr, vt, vb]) in arrows.into_iter().enumerate() {
                    let kind = classify_vertex(hl, hr, vt, vb)?;
                    w *= letters[j].get(kind.letter);
                }
                table.push(w);
            }
        }
        Ok(Self {
            table,
            transitions: count,
        })
    }

    pub fn path_weight(&self, path: &Path<'_>) -> f64 {
        path.steps()
            .iter()
            .enumerate()
            .map(|(i, &t)| self.table[i * self.transitions + t as usize])
            .product()
    }
}

/// Partial partition sum over the subtree starting at `first`.
pub fn brute_z_partial(enumerator: &Enumerator, weights: &RowWeights, first: u32) -> CompensatedSum {
    let mut acc = CompensatedSum::new();
    enumerator.for_each_path_from(first, |p| acc.add(weights.path_weight(p)));
    acc
}

/// Partition function as the sum of all state weights.
pub fn brute_z(cfg: &SpectralConfig, conv: WeightConvention) -> Result<f64> {
    let enumerator = Enumerator::new(cfg.n())?;
    let weights = RowWeights::new(&enumerator, cfg, conv)?;
    let mut acc = CompensatedSum::new();
    for first in enumerator.first_transitions() {
        acc.merge(&brute_z_partial(&enumerator, &weights, first));
    }
    Ok(acc.value())
}

/// Raw machine-integer boundary statistics, mergeable across subtrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryStats {
    pub n: usize,
    pub total: u64,
    /// `top[r-1]`
    pub top: Vec<u64>,
    /// `top_bottom[(r-1)*n + (r̃-1)]`
    pub top_bottom: Vec<u64>,
    /// `top_left[(r-1)*n + (r̃-1)]`, top-row column `r`, left-column row `r̃`.
    pub top_left: Vec<u64>,
}

impl BoundaryStats {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            total: 0,
            top: vec![0; n],
            top_bottom: vec![0; n * n],
            top_left: vec![0; n * n],
        }
    }

    pub fn record(&mut self, path: &Path<'_>) {
        let n = self.n;
        let r = path.top_column();
        self.total += 1;
        self.top[r - 1] += 1;
        self.top_bottom[(r - 1) * n + path.bottom_column() - 1] += 1;
        self.top_left[(r - 1) * n + path.left_row() - 1] += 1;
    }

    pub fn merge(&mut self, other: &BoundaryStats) {
        debug_assert_eq!(self.n, other.n);
        self.total += other.total;
        for (a, b) in self.top.iter_mut().zip(&other.top) {
            *a += b;
        }
        for (a, b) in self.top_bottom.iter_mut().zip(&other.top_bottom) {
            *a += b;
        }
        for (a, b) in self.top_left.iter_mut().zip(&other.top_left) {
            *a += b;
        }
    }

    pub fn collect_from(enumerator: &Enumerator, first: u32) -> Self {
        let mut stats = Self::empty(enumerator.n());
        enumerator.for_each_path_from(first, |p| stats.record(p));
        stats
    }

    pub fn collect(n: usize) -> Result<Self> {
        let enumerator = Enumerator::new(n)?;
        let mut stats = Self::empty(n);
        enumerator.for_each_path(|p| stats.record(p));
        Ok(stats)
    }

    pub fn refined_top(&self) -> CountTable {
        CountTable::one_dim(self.n, TableKind::RefinedTop, &self.top)
    }

    pub fn double_top_bottom(&self) -> CountTable {
        CountTable::two_dim(self.n, TableKind::DoubleTopBottom, &self.top_bottom)
    }

    /// `(A(n,1), C)`, with `C` holding only indices `r, r̃ >= 2`.
    pub fn double_top_left(&self) -> (BigUint, CountTable) {
        let n = self.n;
        let corner = self.top_left[0];
        let mut c = self.top_left.clone();
        for k in 0..n {
            c[k] = 0;
            c[k * n] = 0;
        }
        (
            BigUint::from(corner),
            CountTable::two_dim(n, TableKind::DoubleTopLeft, &c),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    RefinedTop,
    DoubleTopBottom,
    DoubleTopLeft,
}

/// Exact refined counts, 1-based. Lookups outside `1..=n` return zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    n: usize,
    kind: TableKind,
    data: Vec<BigUint>,
}

impl CountTable {
    pub fn from_values(n: usize, kind: TableKind, data: Vec<BigUint>) -> Result<Self> {
        let expected = match kind {
            TableKind::RefinedTop => n,
            _ => n * n,
        };
        if data.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: data.len(),
            });
        }
        Ok(Self { n, kind, data })
    }

    fn one_dim(n: usize, kind: TableKind, raw: &[u64]) -> Self {
        Self {
            n,
            kind,
            data: raw.iter().map(|&c| BigUint::from(c)).collect(),
        }
    }

    fn two_dim(n: usize, kind: TableKind, raw: &[u64]) -> Self {
        Self::one_dim(n, kind, raw)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn values(&self) -> &[BigUint] {
        &self.data
    }

    /// `A(n,r)` for a one-dimensional table.
    pub fn at(&self, r: usize) -> BigUint {
        debug_assert_eq!(self.kind, TableKind::RefinedTop);
        if (1..=self.n).contains(&r) {
            self.data[r - 1].clone()
        } else {
            BigUint::default()
        }
    }

    /// `B(n;r,r̃)` or `C(n;r,r̃)` for a two-dimensional table.
    pub fn at2(&self, r: usize, rt: usize) -> BigUint {
        debug_assert_ne!(self.kind, TableKind::RefinedTop);
        if (1..=self.n).contains(&r) && (1..=self.n).contains(&rt) {
            self.data[(r - 1) * self.n + rt - 1].clone()
        } else {
            BigUint::default()
        }
    }

    pub fn sum(&self) -> BigUint {
        self.data.iter().sum()
    }
}

pub fn refined_top(n: usize) -> Result<CountTable> {
    Ok(BoundaryStats::collect(n)?.refined_top())
}

pub fn double_top_bottom(n: usize) -> Result<CountTable> {
    Ok(BoundaryStats::collect(n)?.double_top_bottom())
}

pub fn double_top_left(n: usize) -> Result<(BigUint, CountTable)> {
    Ok(BoundaryStats::collect(n)?.double_top_left())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{asm_from_state, state_from_asm, Letter, ETA_CUBE_ROOT};

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn small_counts() {
        let counts: Vec<u64> = (1..=6).map(|n| Enumerator::new(n).unwrap().count()).collect();
        assert_eq!(counts, [1, 2, 7, 42, 429, 7436]);
    }

    #[test]
    fn ceiling_is_enforced() {
        assert!(matches!(
            Enumerator::new(9),
            Err(Error::SizeTooLarge { n: 9, ceiling: 8 })
        ));
        assert!(Enumerator::with_ceiling(9, 9).is_ok());
        assert!(Enumerator::new(0).is_err());
    }

    #[test]
    fn states_are_distinct_and_roundtrip() {
        for n in 1..=4 {
            let states = enumerate_states(n).unwrap();
            for (k, s) in states.iter().enumerate() {
                let asm = asm_from_state(s);
                assert_eq!(&state_from_asm(&asm), s);
                crate::model::Asm::new(n, asm.entries().to_vec()).unwrap();
                assert_eq!(s.count_letter(Letter::C), n + 2 * asm.count_negative());
                for t in &states[k + 1..] {
                    assert_ne!(s, t);
                }
            }
        }
    }

    #[test]
    fn brute_z_homogeneous_counts() {
        for (n, expected) in [(1, 1.0), (2, 2.0), (3, 7.0), (4, 42.0)] {
            let cfg = SpectralConfig::homogeneous(n, ETA_CUBE_ROOT).unwrap();
            let z = brute_z(&cfg, WeightConvention::Counting).unwrap();
            assert!((z - expected).abs() < 1e-12, "n={n}: {z}");
        }
        let cfg = SpectralConfig::new(0.4, vec![1.3], vec![-2.0]).unwrap();
        assert_eq!(brute_z(&cfg, WeightConvention::Signed).unwrap(), 1.0);
    }

    #[test]
    fn refined_tables() {
        assert_eq!(refined_top(2).unwrap().values(), big(&[1, 1]).as_slice());
        assert_eq!(refined_top(3).unwrap().values(), big(&[2, 3, 2]).as_slice());
        assert_eq!(refined_top(4).unwrap().values(), big(&[7, 14, 14, 7]).as_slice());
    }

    #[test]
    fn top_bottom_tables() {
        let b2 = double_top_bottom(2).unwrap();
        assert_eq!(b2.values(), big(&[0, 1, 1, 0]).as_slice());
        let b3 = double_top_bottom(3).unwrap();
        assert_eq!(b3.at2(1, 1), BigUint::from(0u32));
        assert_eq!(b3.at2(2, 2), BigUint::from(1u32));
        assert_eq!(b3.at2(1, 2), BigUint::from(1u32));
        let marg: Vec<BigUint> = (1..=3).map(|r| (1..=3).map(|rt| b3.at2(r, rt)).sum()).collect();
        assert_eq!(marg, big(&[2, 3, 2]));
    }

    #[test]
    fn top_left_tables() {
        let (a21, c2) = double_top_left(2).unwrap();
        assert_eq!(a21, BigUint::from(1u32));
        assert_eq!(c2.at2(2, 2), BigUint::from(1u32));
        let (a31, c3) = double_top_left(3).unwrap();
        assert_eq!(a31, BigUint::from(2u32));
        assert_eq!(c3.at2(2, 2), BigUint::from(2u32));
        assert_eq!(c3.at2(2, 3), BigUint::from(1u32));
        assert_eq!(c3.at2(3, 2), BigUint::from(1u32));
        assert_eq!(c3.at2(3, 3), BigUint::from(1u32));
        assert_eq!(c3.at2(1, 2), BigUint::from(0u32));
        assert_eq!(c3.at2(4, 2), BigUint::from(0u32));
    }

    #[test]
    fn split_by_first_row_partitions_states() {
        let e = Enumerator::new(5).unwrap();
        let mut merged = BoundaryStats::empty(5);
        for first in e.first_transitions() {
            merged.merge(&BoundaryStats::collect_from(&e, first));
        }
        assert_eq!(merged, BoundaryStats::collect(5).unwrap());
        assert_eq!(e.first_transitions().len(), 5);
    }
}
