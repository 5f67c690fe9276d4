//! Closed-form design analytics: intersection numbers of point sets, the
//! quadruple-system disjointness margin, the numeric e.c. conditions on
//! design parameters, and sub-design search.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, checked_binomial, Rational, Subsets};
use crate::bitset;
use crate::design::{lambda_h, validate_t_design, Design, DesignError};

/// `alphas[i]` is the number of blocks meeting `M` in exactly `i` points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionProfile {
    pub m: usize,
    pub alphas: Vec<u64>,
}

impl IntersectionProfile {
    pub fn alpha(&self, i: usize) -> u64 {
        self.alphas.get(i).copied().unwrap_or(0)
    }

    /// `Σ α_i`, the block count.
    pub fn total(&self) -> u64 {
        self.alphas.iter().sum()
    }

    /// `Σ i·α_i`, the number of incidences between `M` and the blocks.
    pub fn weighted_sum(&self) -> u64 {
        self.alphas.iter().enumerate().map(|(i, &a)| i as u64 * a).sum()
    }
}

/// Intersection numbers of the point set `m_set` by direct count.
pub fn intersection_profile(d: &Design, m_set: &[usize]) -> Result<IntersectionProfile, DesignError> {
    if let Some(&point) = m_set.iter().find(|&&p| p >= d.v()) {
        return Err(DesignError::PointOutOfRange { point, v: d.v() });
    }
    let mask = bitset::from_indices(d.v(), m_set.iter().copied());
    let m = bitset::count(&mask);
    let mut alphas = vec![0u64; m + 1];
    for i in 0..d.b() {
        alphas[bitset::intersection_size(d.block_mask(i), &mask)] += 1;
    }
    Ok(IntersectionProfile { m, alphas })
}

/// Intersection number `α_i` of an `m`-set in a `t-(v, k, λ)` design from
/// `λ_0..λ_t` and the higher numbers `α_{t+1}..α_m`:
///
/// `α_i = Σ_{h=i}^{t} (−1)^{h+i} C(h,i) C(m,h) λ_h
///        + (−1)^{t+i+1} Σ_{h=t+1}^{m} C(h−i−1, t−i) C(h,i) α_h`.
///
/// The correction coefficient comes from inverting
/// `Σ_h C(h,j) α_h = C(m,j) λ_j` for `j <= t`.
pub fn kohler_alpha(
    t: usize,
    v: usize,
    k: usize,
    lambda: u64,
    m: usize,
    i: usize,
    high_alphas: &[u64],
) -> Result<Rational, DesignError> {
    if !(i <= t && t <= k && k <= v) || !(t < m && m <= v) {
        return Err(DesignError::Parameter(format!(
            "need i <= t <= k <= v and t < m <= v, got i={i} t={t} k={k} v={v} m={m}"
        )));
    }
    if high_alphas.len() != m - t {
        return Err(DesignError::Parameter(format!(
            "expected {} higher intersection numbers, got {}",
            m - t,
            high_alphas.len()
        )));
    }
    let sign = |e: usize| if e.is_multiple_of(2) { 1i128 } else { -1 };
    let overflow = || DesignError::TooLarge("intersection number terms".into());
    let mut acc = Rational::from_integer(0);
    for h in i..=t {
        let c = binomial(h as i64, i as i64)
            .checked_mul(checked_binomial(m as i64, h as i64).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
        acc += lambda_h(t, v, k, lambda, h)? * Rational::from_integer(sign(h + i) * c);
    }
    let mut correction: i128 = 0;
    for (offset, &alpha) in high_alphas.iter().enumerate() {
        let h = t + 1 + offset;
        let c = binomial((h - i - 1) as i64, (t - i) as i64)
            .checked_mul(binomial(h as i64, i as i64))
            .and_then(|c| c.checked_mul(alpha as i128))
            .ok_or_else(overflow)?;
        correction = correction.checked_add(c).ok_or_else(overflow)?;
    }
    Ok(acc + Rational::from_integer(sign(t + i + 1) * correction))
}

/// Compares [`kohler_alpha`] with direct counts for every `i <= t`.
pub fn kohler_agrees(
    d: &Design,
    t: usize,
    k: usize,
    lambda: u64,
    m_set: &[usize],
) -> Result<bool, DesignError> {
    let profile = intersection_profile(d, m_set)?;
    let m = profile.m;
    let high = &profile.alphas[t + 1..];
    for i in 0..=t {
        let formula = kohler_alpha(t, d.v(), k, lambda, m, i, high)?;
        if formula != Rational::from_integer(profile.alpha(i) as i128) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `α_4 + (λ/24)(v − 2m)(v² − 2mv − 3v + 2m² + 2)`: the number of blocks of
/// a `3-(v, 4, λ)` design missing an `m`-set that meets no block in more
/// than 4 points.
pub fn qs_disjoint_margin(v: usize, lambda: u64, m: usize, alpha4: u64) -> Result<Rational, DesignError> {
    if !(4 <= m && m <= v) {
        return Err(DesignError::Parameter(format!("need 4 <= m <= v, got m={m} v={v}")));
    }
    let (v, m) = (v as i128, m as i128);
    let poly = (v - 2 * m) * (v * v - 2 * m * v - 3 * v + 2 * m * m + 2);
    Ok(Rational::from_integer(alpha4 as i128) + Rational::new(lambda as i128 * poly, 24))
}

/// One inequality on design parameters, with both sides evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub name: String,
    pub relation: String,
    pub lhs: i64,
    pub rhs: i64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub n: u64,
    pub conditions: Vec<ConditionRecord>,
}

impl ConditionReport {
    pub fn get(&self, name: &str) -> Option<&ConditionRecord> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

pub const COND_ORDER_LOWER: &str = "order_lower_bound";
pub const COND_STEINER_N: &str = "steiner_order_le_k";
pub const COND_MULTIFOLD_N: &str = "multifold_order_le_half_k";
pub const COND_STEINER_2EC: &str = "steiner_2ec_threshold";
pub const COND_UPPER_3EC: &str = "upper_bound_order_ge_3";
pub const COND_PBD_SUFFICIENT: &str = "pbd_2ec_sufficient";

fn record(name: &str, lhs: i64, relation: &str, rhs: i64) -> ConditionRecord {
    let satisfied = match relation {
        ">=" => lhs >= rhs,
        "<=" => lhs <= rhs,
        ">" => lhs > rhs,
        _ => unreachable!("relation {relation}"),
    };
    ConditionRecord {
        name: name.to_string(),
        relation: relation.to_string(),
        lhs,
        rhs,
        satisfied,
    }
}

/// Evaluates the parameter conditions bearing on whether the block
/// intersection graph of a `2-(v, k, λ)` design can be n-e.c.:
///
/// * `v >= (n+1)k` (necessary);
/// * `n <= k` when `λ = 1`, `n <= ⌊(k+1)/2⌋` when `λ >= 2` (necessary);
/// * `v >= k² + k − 1` when `λ = 1` and `k >= 3` (2-e.c. iff);
/// * `v <= λk⁴ − λnk³ + (λ+1)(n−1)k² − nk + k + 1` when `n >= 3`, `k >= 3`
///   (necessary);
/// * `v > 2k(k−1) + 1` (sufficient for 2-e.c. of a simple design).
pub fn condition_report(v: u64, k: u64, lambda: u64, n: u64) -> Result<ConditionReport, DesignError> {
    if k < 2 || lambda == 0 || n == 0 {
        return Err(DesignError::Parameter(format!(
            "need k >= 2, lambda >= 1, n >= 1, got k={k} lambda={lambda} n={n}"
        )));
    }
    let (vi, ki, li, ni) = (v as i64, k as i64, lambda as i64, n as i64);
    let mut conditions = vec![record(COND_ORDER_LOWER, vi, ">=", (ni + 1) * ki)];
    if lambda == 1 {
        conditions.push(record(COND_STEINER_N, ni, "<=", ki));
        if k >= 3 {
            conditions.push(record(COND_STEINER_2EC, vi, ">=", ki * ki + ki - 1));
        }
    } else {
        conditions.push(record(COND_MULTIFOLD_N, ni, "<=", (ki + 1) / 2));
    }
    if n >= 3 && k >= 3 {
        let k2 = ki * ki;
        let bound = li * k2 * k2 - li * ni * k2 * ki + (li + 1) * (ni - 1) * k2 - ni * ki + ki + 1;
        conditions.push(record(COND_UPPER_3EC, vi, "<=", bound));
    }
    conditions.push(record(COND_PBD_SUFFICIENT, vi, ">", 2 * ki * (ki - 1) + 1));
    Ok(ConditionReport { v, k, lambda, n, conditions })
}

/// First `w`-subset `H` (lexicographic) whose blocks lying entirely inside
/// `H` form a `2-(w, k, λ)` design on `H`.
pub fn find_sub_system(
    d: &Design,
    w: usize,
    k: usize,
    lambda: u64,
) -> Result<Option<Vec<usize>>, DesignError> {
    if !(2 <= k && k <= w && w <= d.v()) || lambda == 0 {
        return Err(DesignError::Parameter(format!(
            "need 2 <= k <= w <= v and lambda >= 1, got k={k} w={w} v={} lambda={lambda}",
            d.v()
        )));
    }
    let pairs = lambda as i128 * binomial(w as i64, 2);
    let per_block = binomial(k as i64, 2);
    if pairs % per_block != 0 {
        return Ok(None);
    }
    let want = (pairs / per_block) as usize;
    let mut subsets = Subsets::new(d.v(), w);
    let mut inside = Vec::new();
    while let Some(h) = subsets.next_subset() {
        let mask = bitset::from_indices(d.v(), h.iter().copied());
        inside.clear();
        inside.extend((0..d.b()).filter(|&i| bitset::is_subset(d.block_mask(i), &mask)));
        if inside.len() != want {
            continue;
        }
        let mut relabel = vec![usize::MAX; d.v()];
        for (new, &old) in h.iter().enumerate() {
            relabel[old] = new;
        }
        let blocks = inside
            .iter()
            .map(|&i| d.block(i).iter().map(|&p| relabel[p]).collect())
            .collect();
        let sub = Design::new(w, blocks)?;
        if validate_t_design(&sub, 2, k, lambda)?.ok {
            return Ok(Some(h.to_vec()));
        }
    }
    Ok(None)
}

/// `count` seeded random point subsets of `0..v` with sizes drawn
/// uniformly from `min_m..=max_m`, each sorted.
pub fn seeded_subsets(v: usize, min_m: usize, max_m: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = rng.gen_range(min_m..=max_m);
            let mut s = sample(&mut rng, v, m).into_vec();
            s.sort_unstable();
            s
        })
        .collect()
}
