//! Concrete designs: cyclic developments, permutation images and unions,
//! complete designs, the Boolean SQS(8) and SQS doubling.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::all_subsets;
use crate::design::{validate_t_design, Design, DesignError};

/// Seed used by every randomized search unless the caller picks another.
pub const DEFAULT_SEED: u64 = 20190225;

/// Attempts made by [`disjoint_union_search`] for the builtin catalog.
pub const DEFAULT_SEARCH_TRIES: usize = 10_000;

/// Three relabellings of Z_13, listed as `x -> p[x]`. The Netto triple
/// system together with its images under the inverse maps is a simple
/// 2-(13, 3, 4) design; the forward images repeat blocks.
pub const NETTO_RELABELLINGS: [[usize; 13]; 3] = [
    [1, 6, 7, 2, 4, 10, 3, 5, 8, 11, 9, 0, 12],
    [4, 5, 11, 2, 1, 6, 9, 10, 7, 12, 3, 0, 8],
    [12, 1, 2, 7, 4, 10, 9, 3, 5, 11, 8, 6, 0],
];

/// Names accepted by [`builtin`], besides `complete:<v>:<k>`.
pub const BUILTIN_NAMES: &[&str] = &[
    "netto13", "ts13_4", "ts11_3", "ts11_6", "sts9", "ts9_2", "sqs8", "sqs16", "sqs32",
];

/// A bijection on `0..v`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, DesignError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(DesignError::NotAPermutation(format!("{images:?}")));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(v: usize) -> Self {
        Permutation {
            images: (0..v).collect(),
        }
    }

    pub fn random<R: rand::Rng>(v: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..v).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Permutation { images }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }
}

/// Orbit of one base block under translation by Z_v.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitInfo {
    pub base_block: Vec<usize>,
    /// Smallest `s > 0` with `B + s = B`; less than `v` for a short orbit.
    pub length: usize,
}

/// Result of [`develop_cyclic`]. Short orbits are kept at full length, so
/// their blocks appear `v / length` times each in `design`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicDevelopment {
    pub design: Design,
    pub orbits: Vec<OrbitInfo>,
}

impl CyclicDevelopment {
    pub fn has_short_orbits(&self) -> bool {
        let v = self.design.v();
        self.orbits.iter().any(|o| o.length < v)
    }
}

fn translate(block: &[usize], s: usize, v: usize) -> Vec<usize> {
    let mut out: Vec<usize> = block.iter().map(|&p| (p + s) % v).collect();
    out.sort_unstable();
    out
}

/// All translates `B + i mod v` of every base block, with multiplicity.
pub fn develop_cyclic(v: usize, base_blocks: &[Vec<usize>]) -> Result<CyclicDevelopment, DesignError> {
    if v == 0 {
        return Err(DesignError::Parameter("modulus must be positive".into()));
    }
    let mut blocks = Vec::with_capacity(v * base_blocks.len());
    let mut orbits = Vec::with_capacity(base_blocks.len());
    for base in base_blocks {
        if let Some(&point) = base.iter().find(|&&p| p >= v) {
            return Err(DesignError::PointOutOfRange { point, v });
        }
        let sorted = translate(base, 0, v);
        let length = (1..=v)
            .find(|&s| v.is_multiple_of(s) && translate(&sorted, s, v) == sorted)
            .unwrap_or(v);
        orbits.push(OrbitInfo {
            base_block: sorted.clone(),
            length,
        });
        blocks.extend((0..v).map(|i| translate(&sorted, i, v)));
    }
    Ok(CyclicDevelopment {
        design: Design::new(v, blocks)?,
        orbits,
    })
}

/// Maps every block pointwise through `p`.
pub fn apply_permutation(d: &Design, p: &Permutation) -> Result<Design, DesignError> {
    if p.len() != d.v() {
        return Err(DesignError::PointCountMismatch(d.v(), p.len()));
    }
    let blocks = d
        .blocks()
        .iter()
        .map(|b| b.iter().map(|&x| p.apply(x)).collect())
        .collect();
    Design::new(d.v(), blocks)
}

/// Multiset union of block lists on a common point set.
pub fn union_designs(designs: &[&Design]) -> Result<Design, DesignError> {
    let Some(first) = designs.first() else {
        return Err(DesignError::Parameter("nothing to unite".into()));
    };
    let v = first.v();
    let mut blocks = Vec::new();
    for d in designs {
        if d.v() != v {
            return Err(DesignError::PointCountMismatch(v, d.v()));
        }
        blocks.extend(d.blocks().iter().cloned());
    }
    Design::new(v, blocks)
}

/// Every `k`-subset of `0..v` exactly once.
pub fn complete_design(v: usize, k: usize) -> Result<Design, DesignError> {
    if !(1 <= k && k <= v) {
        return Err(DesignError::Parameter(format!("need 1 <= k <= v, got k={k} v={v}")));
    }
    Design::new(v, all_subsets(v, k))
}

/// The unique SQS(8): 4-subsets of the 3-bit vectors `0..8` whose XOR is 0.
pub fn boolean_sqs8() -> Design {
    let blocks = all_subsets(8, 4)
        .into_iter()
        .filter(|b| b.iter().fold(0, |acc, &x| acc ^ x) == 0)
        .collect();
    Design::new(8, blocks).expect("xor-zero quadruples are valid blocks")
}

/// The affine plane of order 3 as an STS(9): point `(x, y)` is `3x + y`.
pub fn affine_sts9() -> Design {
    let pt = |x: usize, y: usize| 3 * (x % 3) + y % 3;
    let mut blocks = Vec::with_capacity(12);
    for slope in 0..3 {
        for c in 0..3 {
            blocks.push((0..3).map(|x| pt(x, slope * x + c)).collect());
        }
    }
    for c in 0..3 {
        blocks.push((0..3).map(|y| pt(c, y)).collect());
    }
    Design::new(9, blocks).expect("affine lines are valid blocks")
}

/// Searches seeded random relabellings of `base` for one sharing no block
/// with it and returns the union together with the relabelling used.
pub fn disjoint_union_search(
    base: &Design,
    seed: u64,
    max_tries: usize,
) -> Option<(Design, Permutation)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..max_tries {
        let p = Permutation::random(base.v(), &mut rng);
        let image = apply_permutation(base, &p).ok()?;
        if !shares_block(base, &image) {
            let union = union_designs(&[base, &image]).ok()?;
            return Some((union, p));
        }
    }
    None
}

fn shares_block(a: &Design, b: &Design) -> bool {
    let (mut i, mut j) = (0, 0);
    let (x, y) = (a.blocks(), b.blocks());
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// A partition of the pairs of `0..v` into `v − 1` perfect matchings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneFactorization {
    pub v: usize,
    /// Each factor holds `v / 2` pairs `(a, b)` with `a < b`.
    pub factors: Vec<Vec<(usize, usize)>>,
}

/// Circle-method one-factorization: point `v − 1` is fixed and factor `j`
/// holds `{v−1, j}` and `{j−d, j+d} mod (v−1)` for `d = 1..v/2`.
pub fn one_factorization(v: usize) -> Result<OneFactorization, DesignError> {
    if v < 2 || v % 2 == 1 {
        return Err(DesignError::Parameter(format!(
            "one-factorization needs an even v >= 2, got {v}"
        )));
    }
    let m = v - 1;
    let pair = |a: usize, b: usize| (a.min(b), a.max(b));
    let factors = (0..m)
        .map(|j| {
            let mut f = vec![pair(m, j)];
            f.extend((1..v / 2).map(|d| pair((j + m - d) % m, (j + d) % m)));
            f
        })
        .collect();
    Ok(OneFactorization { v, factors })
}

/// Doubles an SQS(v) to an SQS(2v): each block in both copies, plus
/// `{a, b, c + v, d + v}` for pairs `{a, b}` and `{c, d}` drawn from the same
/// factor of a one-factorization of each copy.
pub fn doubling_sqs(d: &Design) -> Result<Design, DesignError> {
    let v = d.v();
    if v < 4 || v % 2 == 1 {
        return Err(DesignError::Shape(format!("an SQS of even order, got v = {v}")));
    }
    if !validate_t_design(d, 3, 4, 1)?.ok {
        return Err(DesignError::Shape("a 3-(v, 4, 1) design".into()));
    }
    let factorization = one_factorization(v)?;
    let mut blocks = Vec::with_capacity(2 * d.b() + (v - 1) * (v / 2) * (v / 2));
    for block in d.blocks() {
        blocks.push(block.clone());
        blocks.push(block.iter().map(|&x| x + v).collect());
    }
    for factor in &factorization.factors {
        for &(a, b) in factor {
            for &(c, e) in factor {
                blocks.push(vec![a, b, c + v, e + v]);
            }
        }
    }
    Design::new(2 * v, blocks)
}

/// Parses `complete:<v>:<k>` or `complete(<v>,<k>)`.
fn parse_complete(name: &str) -> Option<(usize, usize)> {
    let rest = name
        .strip_prefix("complete:")
        .map(|r| r.split(':').collect::<Vec<_>>())
        .or_else(|| {
            name.strip_prefix("complete(")
                .and_then(|r| r.strip_suffix(')'))
                .map(|r| r.split(',').collect())
        })?;
    match rest.as_slice() {
        [v, k] => Some((v.trim().parse().ok()?, k.trim().parse().ok()?)),
        _ => None,
    }
}

pub fn netto13() -> Design {
    develop_cyclic(13, &[vec![1, 3, 9], vec![2, 5, 6]])
        .expect("base blocks lie in Z_13")
        .design
}

pub fn ts11_3() -> Design {
    let base: Vec<Vec<usize>> = (1..=5).map(|j| vec![0, j, (2 * j) % 11]).collect();
    develop_cyclic(11, &base).expect("base blocks lie in Z_11").design
}

pub fn ts13_4() -> Design {
    let netto = netto13();
    let images: Vec<Design> = NETTO_RELABELLINGS
        .iter()
        .map(|p| {
            let p = Permutation::new(p.to_vec()).expect("relabellings are bijections").inverse();
            apply_permutation(&netto, &p).expect("length 13")
        })
        .collect();
    union_designs(&[&netto, &images[0], &images[1], &images[2]]).expect("common point set")
}

/// Looks up a named design from the builtin catalog.
pub fn builtin(name: &str) -> Result<Design, DesignError> {
    if let Some((v, k)) = parse_complete(name) {
        return complete_design(v, k);
    }
    let d = match name {
        "netto13" => netto13(),
        "ts13_4" => ts13_4(),
        "ts11_3" => ts11_3(),
        "ts11_6" => ts11_3().supplementary(3)?,
        "sts9" => affine_sts9(),
        "ts9_2" => disjoint_union_search(&affine_sts9(), DEFAULT_SEED, DEFAULT_SEARCH_TRIES)
            .ok_or_else(|| DesignError::Shape("reachable by the seeded search".into()))?
            .0,
        "sqs8" => boolean_sqs8(),
        "sqs16" => doubling_sqs(&boolean_sqs8())?,
        "sqs32" => doubling_sqs(&doubling_sqs(&boolean_sqs8())?)?,
        _ => return Err(DesignError::UnknownBuiltin(name.to_string())),
    };
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn permutation_rejects_non_bijection() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        assert!(Permutation::new(vec![2, 0, 1]).is_ok());
        for p in NETTO_RELABELLINGS {
            assert!(Permutation::new(p.to_vec()).is_ok());
        }
    }

    #[test]
    fn develop_degenerate_orbit() {
        let dev = develop_cyclic(3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(dev.design.blocks(), vec![vec![0, 1, 2]; 3].as_slice());
        assert_eq!(dev.orbits[0].length, 1);
        assert!(dev.has_short_orbits());
    }

    #[test]
    fn develop_rejects_out_of_range() {
        assert!(develop_cyclic(5, &[vec![0, 5]]).is_err());
        assert!(develop_cyclic(0, &[]).is_err());
    }

    #[test]
    fn develop_size_is_v_times_base_count() {
        let dev = develop_cyclic(13, &[vec![1, 3, 9], vec![2, 5, 6]]).unwrap();
        assert_eq!(dev.design.b(), 26);
        assert!(!dev.has_short_orbits());
    }

    #[test]
    fn apply_permutation_length_mismatch() {
        let d = complete_design(4, 2).unwrap();
        assert!(apply_permutation(&d, &Permutation::identity(5)).is_err());
        assert_eq!(apply_permutation(&d, &Permutation::identity(4)).unwrap(), d);
    }

    #[test]
    fn union_mismatched_v() {
        let a = complete_design(4, 2).unwrap();
        let b = complete_design(5, 2).unwrap();
        assert!(union_designs(&[&a, &b]).is_err());
        assert_eq!(union_designs(&[&a, &Design::empty(4)]).unwrap(), a);
    }

    #[test]
    fn complete_design_counts() {
        assert_eq!(complete_design(9, 3).unwrap().b(), 84);
        assert_eq!(complete_design(4, 4).unwrap().b(), 1);
        assert_eq!(complete_design(5, 2).unwrap().b(), 10);
        assert!(complete_design(3, 4).is_err());
        assert!(complete_design(3, 0).is_err());
    }

    fn check_factorization(v: usize) {
        let f = one_factorization(v).unwrap();
        assert_eq!(f.factors.len(), v - 1);
        let mut all = BTreeSet::new();
        for factor in &f.factors {
            assert_eq!(factor.len(), v / 2);
            let covered: BTreeSet<usize> = factor.iter().flat_map(|&(a, b)| [a, b]).collect();
            assert_eq!(covered.len(), v);
            for &(a, b) in factor {
                assert!(a < b);
                assert!(all.insert((a, b)), "pair ({a},{b}) used twice");
            }
        }
        assert_eq!(all.len(), v * (v - 1) / 2);
    }

    #[test]
    fn one_factorizations() {
        let f = one_factorization(2).unwrap();
        assert_eq!(f.factors, vec![vec![(0, 1)]]);
        for v in [4, 6, 8, 10, 16] {
            check_factorization(v);
        }
        assert!(one_factorization(7).is_err());
        assert!(one_factorization(0).is_err());
    }

    #[test]
    fn doubling_from_trivial_sqs4_is_sqs8() {
        let sqs4 = complete_design(4, 4).unwrap();
        let sqs8 = doubling_sqs(&sqs4).unwrap();
        assert_eq!(sqs8.b(), 14);
        assert!(validate_t_design(&sqs8, 3, 4, 1).unwrap().ok);
    }

    #[test]
    fn doubling_rejects_non_sqs() {
        assert!(doubling_sqs(&complete_design(8, 4).unwrap()).is_err());
        assert!(doubling_sqs(&complete_design(7, 4).unwrap()).is_err());
    }

    #[test]
    fn ts13_4_is_simple_only_with_inverse_maps() {
        let d = ts13_4();
        assert_eq!(d.b(), 104);
        assert!(d.is_simple());
        let netto = netto13();
        let forward: Vec<Design> = NETTO_RELABELLINGS
            .iter()
            .map(|p| apply_permutation(&netto, &Permutation::new(p.to_vec()).unwrap()).unwrap())
            .collect();
        assert!(!union_designs(&[&netto, &forward[0], &forward[1], &forward[2]]).unwrap().is_simple());
    }

    #[test]
    fn inverse_round_trip() {
        let p = Permutation::new(NETTO_RELABELLINGS[0].to_vec()).unwrap();
        let q = p.inverse();
        assert!((0..13).all(|x| q.apply(p.apply(x)) == x));
    }

    #[test]
    fn builtin_names() {
        assert_eq!(builtin("complete:9:3").unwrap(), complete_design(9, 3).unwrap());
        assert_eq!(builtin("complete(6,3)").unwrap(), complete_design(6, 3).unwrap());
        assert!(matches!(builtin("nope"), Err(DesignError::UnknownBuiltin(_))));
        assert!(builtin("complete:3:5").is_err());
        for name in BUILTIN_NAMES.iter().filter(|n| **n != "sqs32") {
            assert!(builtin(name).is_ok(), "{name}");
        }
    }

    #[test]
    fn sts9_is_affine_plane() {
        let d = affine_sts9();
        assert_eq!(d.b(), 12);
        assert!(validate_t_design(&d, 2, 3, 1).unwrap().ok);
    }

    #[test]
    fn search_is_deterministic() {
        let a = disjoint_union_search(&affine_sts9(), 7, 1000).unwrap();
        let b = disjoint_union_search(&affine_sts9(), 7, 1000).unwrap();
        assert_eq!(a, b);
    }
}
