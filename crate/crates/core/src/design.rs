//! Set systems on the points `0..v`, their validation as t-designs and
//! pairwise balanced designs, and the derived/supplementary transforms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{binomial, checked_binomial, BinomialTable, Rational, Subsets};
use crate::bitset;

/// Default number of violations kept in a [`ValidationReport`].
pub const DEFAULT_VIOLATION_LIMIT: usize = 16;

/// Largest `C(v, t)` counter array validation will allocate.
const MAX_COUNTERS: u64 = 1 << 28;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesignError {
    #[error("point {point} out of range for v = {v}")]
    PointOutOfRange { point: usize, v: usize },
    #[error("block {block} is empty")]
    EmptyBlock { block: usize },
    #[error("block {block} repeats point {point}")]
    RepeatedPoint { block: usize, point: usize },
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("designs have different point counts ({0} vs {1})")]
    PointCountMismatch(usize, usize),
    #[error("design must be {0}")]
    Shape(String),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("unknown builtin design '{0}'")]
    UnknownBuiltin(String),
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
}

/// A set system on the points `0..v`.
///
/// Blocks are kept as strictly increasing point lists, sorted
/// lexicographically, with repeated blocks adjacent. Construction always
/// normalizes, so two designs with the same block multiset compare equal.
pub struct Design {
    v: usize,
    blocks: Vec<Vec<usize>>,
    masks: OnceLock<Vec<u64>>,
}

impl Design {
    pub fn new(v: usize, blocks: Vec<Vec<usize>>) -> Result<Self, DesignError> {
        let mut blocks = blocks;
        for (bi, block) in blocks.iter_mut().enumerate() {
            if block.is_empty() {
                return Err(DesignError::EmptyBlock { block: bi });
            }
            block.sort_unstable();
            if let Some(&point) = block.iter().find(|&&p| p >= v) {
                return Err(DesignError::PointOutOfRange { point, v });
            }
            if let Some(w) = block.windows(2).find(|w| w[0] == w[1]) {
                return Err(DesignError::RepeatedPoint { block: bi, point: w[0] });
            }
        }
        blocks.sort();
        Ok(Design {
            v,
            blocks,
            masks: OnceLock::new(),
        })
    }

    /// A design with no blocks.
    pub fn empty(v: usize) -> Self {
        Design {
            v,
            blocks: Vec::new(),
            masks: OnceLock::new(),
        }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    /// Number of blocks, counted with multiplicity.
    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    pub fn into_blocks(self) -> Vec<Vec<usize>> {
        self.blocks
    }

    /// Words per block bitmask.
    pub fn mask_words(&self) -> usize {
        bitset::words_for(self.v)
    }

    /// Point bitmask of block `i`, built lazily for the whole design.
    pub fn block_mask(&self, i: usize) -> &[u64] {
        let w = self.mask_words();
        &self.masks()[i * w..(i + 1) * w]
    }

    fn masks(&self) -> &[u64] {
        self.masks.get_or_init(|| {
            let w = self.mask_words();
            let mut masks = vec![0u64; w * self.blocks.len()];
            for (i, block) in self.blocks.iter().enumerate() {
                let row = &mut masks[i * w..(i + 1) * w];
                for &p in block {
                    bitset::set(row, p);
                }
            }
            masks
        })
    }

    /// `|B_i ∩ B_j|`.
    pub fn intersection_size(&self, i: usize, j: usize) -> usize {
        bitset::intersection_size(self.block_mask(i), self.block_mask(j))
    }

    /// Smallest and largest block size, `None` for an empty design.
    pub fn block_size_range(&self) -> Option<(usize, usize)> {
        let min = self.blocks.iter().map(Vec::len).min()?;
        let max = self.blocks.iter().map(Vec::len).max()?;
        Some((min, max))
    }

    /// Block size if every block has the same size.
    pub fn uniform_block_size(&self) -> Option<usize> {
        match self.block_size_range() {
            Some((lo, hi)) if lo == hi => Some(lo),
            _ => None,
        }
    }

    /// Number of blocks through each point.
    pub fn replication_profile(&self) -> Vec<u64> {
        let mut r = vec![0u64; self.v];
        for block in &self.blocks {
            for &p in block {
                r[p] += 1;
            }
        }
        r
    }

    /// No block occurs twice.
    pub fn is_simple(&self) -> bool {
        self.blocks.windows(2).all(|w| w[0] != w[1])
    }

    /// No block is contained in a different block (by position, so a
    /// repeated block counts as covered).
    pub fn is_one_cover_free(&self) -> bool {
        let b = self.b();
        for i in 0..b {
            for j in 0..b {
                if i != j
                    && self.blocks[i].len() <= self.blocks[j].len()
                    && bitset::is_subset(self.block_mask(i), self.block_mask(j))
                {
                    return false;
                }
            }
        }
        true
    }

    /// Blocks through `x` with `x` removed, on the remaining `v - 1` points
    /// relabelled order-preservingly.
    pub fn derived(&self, x: usize) -> Result<Design, DesignError> {
        if x >= self.v {
            return Err(DesignError::PointOutOfRange { point: x, v: self.v });
        }
        let blocks = self
            .blocks
            .iter()
            .filter(|b| b.binary_search(&x).is_ok())
            .map(|b| {
                b.iter()
                    .filter(|&&p| p != x)
                    .map(|&p| if p > x { p - 1 } else { p })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>();
        if blocks.iter().any(Vec::is_empty) {
            return Err(DesignError::Shape(
                "free of singleton blocks to derive at a point".into(),
            ));
        }
        Design::new(self.v - 1, blocks)
    }

    /// All `k`-subsets of the points that are not blocks.
    pub fn supplementary(&self, k: usize) -> Result<Design, DesignError> {
        if k == 0 || k > self.v {
            return Err(DesignError::Parameter(format!(
                "block size {k} must lie in 1..={}",
                self.v
            )));
        }
        if self.blocks.iter().any(|b| b.len() != k) {
            return Err(DesignError::Shape(format!("uniform with block size {k}")));
        }
        if !self.is_simple() {
            return Err(DesignError::Shape("simple".into()));
        }
        let total = checked_binomial(self.v as i64, k as i64).unwrap_or(i128::MAX);
        if total as u64 > MAX_COUNTERS {
            return Err(DesignError::TooLarge(format!("C({}, {k}) subsets", self.v)));
        }
        let mut out = Vec::with_capacity(total as usize - self.b());
        let mut existing = self.blocks.iter().peekable();
        let mut subsets = Subsets::new(self.v, k);
        // Both sequences are lexicographically sorted.
        while let Some(s) = subsets.next_subset() {
            if existing.peek().is_some_and(|b| b.as_slice() == s) {
                existing.next();
            } else {
                out.push(s.to_vec());
            }
        }
        Design::new(self.v, out)
    }
}

impl Clone for Design {
    fn clone(&self) -> Self {
        Design {
            v: self.v,
            blocks: self.blocks.clone(),
            masks: OnceLock::new(),
        }
    }
}

impl PartialEq for Design {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && self.blocks == other.blocks
    }
}

impl Eq for Design {}

impl fmt::Debug for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Design")
            .field("v", &self.v)
            .field("blocks", &self.blocks)
            .finish()
    }
}

/// Parameters `t`, `v`, `K`, `λ` of a design family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignParams {
    pub t: usize,
    pub v: usize,
    pub k_set: Vec<usize>,
    pub lambda: u64,
}

impl DesignParams {
    pub fn new(t: usize, v: usize, k_set: Vec<usize>, lambda: u64) -> Result<Self, DesignError> {
        let mut k_set = k_set;
        k_set.sort_unstable();
        k_set.dedup();
        if t == 0 {
            return Err(DesignError::Parameter("t must be at least 1".into()));
        }
        if lambda == 0 {
            return Err(DesignError::Parameter("lambda must be at least 1".into()));
        }
        if k_set.is_empty() {
            return Err(DesignError::Parameter("empty block size set".into()));
        }
        if let Some(&k) = k_set.iter().find(|&&k| k < t || k > v) {
            return Err(DesignError::Parameter(format!(
                "block size {k} outside {t}..={v}"
            )));
        }
        Ok(DesignParams { t, v, k_set, lambda })
    }

    pub fn k_min(&self) -> usize {
        self.k_set[0]
    }

    pub fn k_max(&self) -> usize {
        *self.k_set.last().unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// A block whose size is not admitted; `observed` is its size and
    /// `expected` the required size (the largest admitted size for a PBD).
    BlockSize,
    /// A t-subset covered the wrong number of times.
    Coverage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub subset: Vec<usize>,
    pub observed: u64,
    pub expected: u64,
}

/// Outcome of a design validation. `ok` holds exactly when there are no
/// violations; at most `limit` violations are kept and `truncated` records
/// whether more were found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub truncated: bool,
    /// Exact scalars computed along the way (`b`, replication extremes,
    /// `lambda_h` values), rendered as integers or `p/q`.
    pub derived: BTreeMap<String, String>,
    /// For PBD validation: whether every replication number lies within
    /// `λ(v−1)/(k_max−1) ..= λ(v−1)/(k_min−1)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replication_within_bounds: Option<bool>,
}

struct ViolationSink {
    limit: usize,
    violations: Vec<Violation>,
    truncated: bool,
}

impl ViolationSink {
    fn new(limit: usize) -> Self {
        ViolationSink {
            limit,
            violations: Vec::new(),
            truncated: false,
        }
    }

    fn push(&mut self, v: Violation) {
        if self.violations.len() < self.limit {
            self.violations.push(v);
        } else {
            self.truncated = true;
        }
    }

    fn is_empty(&self) -> bool {
        self.violations.is_empty() && !self.truncated
    }
}

/// Counts, for every `t`-subset of points, the blocks containing it.
/// Returned counts are indexed by colex rank.
fn t_subset_counts(d: &Design, t: usize) -> Result<(BinomialTable, Vec<u32>), DesignError> {
    let total = checked_binomial(d.v() as i64, t as i64).unwrap_or(i128::MAX);
    if total as u128 > MAX_COUNTERS as u128 {
        return Err(DesignError::TooLarge(format!("C({}, {t}) counters", d.v())));
    }
    let table = BinomialTable::new(d.v(), t);
    let mut counts = vec![0u32; total as usize];
    let mut picked = vec![0usize; t];
    for block in d.blocks() {
        if block.len() < t {
            continue;
        }
        let mut positions = Subsets::new(block.len(), t);
        while let Some(pos) = positions.next_subset() {
            for (slot, &p) in picked.iter_mut().zip(pos) {
                *slot = block[p];
            }
            counts[table.colex_rank(&picked)] += 1;
        }
    }
    Ok((table, counts))
}

fn coverage_violations(
    d: &Design,
    t: usize,
    lambda: u64,
    sink: &mut ViolationSink,
) -> Result<(), DesignError> {
    let (table, counts) = t_subset_counts(d, t)?;
    let mut subsets = Subsets::new(d.v(), t);
    while let Some(s) = subsets.next_subset() {
        let observed = counts[table.colex_rank(s)] as u64;
        if observed != lambda {
            sink.push(Violation {
                kind: ViolationKind::Coverage,
                subset: s.to_vec(),
                observed,
                expected: lambda,
            });
        }
    }
    Ok(())
}

fn render(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn replication_derived(d: &Design, derived: &mut BTreeMap<String, String>) -> Vec<u64> {
    let r = d.replication_profile();
    derived.insert("b".into(), d.b().to_string());
    if let (Some(lo), Some(hi)) = (r.iter().min(), r.iter().max()) {
        derived.insert("r_min".into(), lo.to_string());
        derived.insert("r_max".into(), hi.to_string());
    }
    r
}

/// Checks that `d` is a `t-(v, k, λ)` design: every block has size `k` and
/// every `t`-subset lies in exactly `λ` blocks (counted with multiplicity).
pub fn validate_t_design(
    d: &Design,
    t: usize,
    k: usize,
    lambda: u64,
) -> Result<ValidationReport, DesignError> {
    validate_t_design_with_limit(d, t, k, lambda, DEFAULT_VIOLATION_LIMIT)
}

pub fn validate_t_design_with_limit(
    d: &Design,
    t: usize,
    k: usize,
    lambda: u64,
    limit: usize,
) -> Result<ValidationReport, DesignError> {
    if !(1 <= t && t <= k && k <= d.v()) {
        return Err(DesignError::Parameter(format!(
            "need 1 <= t <= k <= v, got t={t} k={k} v={}",
            d.v()
        )));
    }
    let mut sink = ViolationSink::new(limit);
    for block in d.blocks() {
        if block.len() != k {
            sink.push(Violation {
                kind: ViolationKind::BlockSize,
                subset: block.clone(),
                observed: block.len() as u64,
                expected: k as u64,
            });
        }
    }
    coverage_violations(d, t, lambda, &mut sink)?;

    let mut derived = BTreeMap::new();
    replication_derived(d, &mut derived);
    for h in 0..=t {
        if let Ok(l) = lambda_h(t, d.v(), k, lambda, h) {
            derived.insert(format!("lambda_{h}"), render(&l));
        }
    }
    Ok(ValidationReport {
        ok: sink.is_empty(),
        violations: sink.violations,
        truncated: sink.truncated,
        derived,
        replication_within_bounds: None,
    })
}

/// Checks that `d` is a `(v, K, λ)`-PBD.
pub fn validate_pbd(d: &Design, k_set: &[usize], lambda: u64) -> Result<ValidationReport, DesignError> {
    validate_pbd_with_limit(d, k_set, lambda, DEFAULT_VIOLATION_LIMIT)
}

pub fn validate_pbd_with_limit(
    d: &Design,
    k_set: &[usize],
    lambda: u64,
    limit: usize,
) -> Result<ValidationReport, DesignError> {
    if k_set.is_empty() || k_set.iter().any(|&k| k < 2) {
        return Err(DesignError::Parameter(
            "block size set must be non-empty with sizes >= 2".into(),
        ));
    }
    if lambda == 0 {
        return Err(DesignError::Parameter("lambda must be at least 1".into()));
    }
    if d.v() < 2 {
        return Err(DesignError::Parameter("a PBD needs at least 2 points".into()));
    }
    let mut sink = ViolationSink::new(limit);
    for block in d.blocks() {
        if !k_set.contains(&block.len()) {
            sink.push(Violation {
                kind: ViolationKind::BlockSize,
                subset: block.clone(),
                observed: block.len() as u64,
                expected: *k_set.iter().max().unwrap() as u64,
            });
        }
    }
    coverage_violations(d, 2, lambda, &mut sink)?;

    let mut derived = BTreeMap::new();
    let r = replication_derived(d, &mut derived);
    let within = replication_bounds_hold(&r, d.v(), k_set, lambda);
    Ok(ValidationReport {
        ok: sink.is_empty(),
        violations: sink.violations,
        truncated: sink.truncated,
        derived,
        replication_within_bounds: Some(within),
    })
}

/// `λ(v−1)/(k_max−1) <= r_i <= λ(v−1)/(k_min−1)` for every point, compared
/// exactly.
pub fn replication_bounds_hold(r: &[u64], v: usize, k_set: &[usize], lambda: u64) -> bool {
    let (Some(&k_min), Some(&k_max)) = (k_set.iter().min(), k_set.iter().max()) else {
        return false;
    };
    if k_min < 2 {
        return false;
    }
    let num = lambda as i128 * (v as i128 - 1);
    let lo = Rational::new(num, k_max as i128 - 1);
    let hi = Rational::new(num, k_min as i128 - 1);
    r.iter().all(|&ri| {
        let ri = Rational::from_integer(ri as i128);
        lo <= ri && ri <= hi
    })
}

/// `λ_h = λ C(v−h, t−h) / C(k−h, t−h)`, the number of blocks through any
/// `h`-subset of a `t-(v, k, λ)` design. Not necessarily an integer.
pub fn lambda_h(t: usize, v: usize, k: usize, lambda: u64, h: usize) -> Result<Rational, DesignError> {
    if !(h <= t && t <= k && k <= v) {
        return Err(DesignError::Parameter(format!(
            "need 0 <= h <= t <= k <= v, got h={h} t={t} k={k} v={v}"
        )));
    }
    let num = checked_binomial((v - h) as i64, (t - h) as i64)
        .and_then(|c| c.checked_mul(lambda as i128))
        .ok_or_else(|| DesignError::TooLarge("lambda_h numerator".into()))?;
    let den = binomial((k - h) as i64, (t - h) as i64);
    debug_assert!(!den.is_zero());
    Ok(Rational::new(num, den))
}

/// Exact `lambda_h` as an integer, if it is one.
pub fn lambda_h_integer(t: usize, v: usize, k: usize, lambda: u64, h: usize) -> Option<u64> {
    let l = lambda_h(t, v, k, lambda, h).ok()?;
    if l.is_integer() {
        l.numer().to_u64()
    } else {
        None
    }
}

/// `λ <= v − 2` and `gcd(v − 2, 6) | λ`: the existence condition for a
/// simple 2-(v, 3, λ) design.
pub fn is_lambda_admissible(v: usize, lambda: u64) -> bool {
    if v < 3 || lambda == 0 {
        return false;
    }
    let m = (v - 2) as u64;
    let g = gcd(m, 6);
    lambda <= m && lambda.is_multiple_of(g)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
