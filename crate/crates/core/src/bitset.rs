//! Word-packed bit rows. Rows are plain `&[u64]` slices of a fixed width so
//! that whole matrices can live in a single allocation.

pub const WORD: usize = 64;

#[inline]
pub fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

#[inline]
pub fn get(row: &[u64], i: usize) -> bool {
    row[i / WORD] >> (i % WORD) & 1 == 1
}

#[inline]
pub fn set(row: &mut [u64], i: usize) {
    row[i / WORD] |= 1 << (i % WORD);
}

#[inline]
pub fn clear(row: &mut [u64], i: usize) {
    row[i / WORD] &= !(1 << (i % WORD));
}

#[inline]
pub fn count(row: &[u64]) -> usize {
    row.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub fn is_empty(row: &[u64]) -> bool {
    row.iter().all(|&w| w == 0)
}

#[inline]
pub fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

#[inline]
pub fn intersection_size(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

/// True when every bit of `a` is also set in `b`.
#[inline]
pub fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Row with the low `n` bits set.
pub fn full(n: usize) -> Vec<u64> {
    let mut row = vec![u64::MAX; words_for(n)];
    if !n.is_multiple_of(WORD) {
        if let Some(last) = row.last_mut() {
            *last = (1u64 << (n % WORD)) - 1;
        }
    }
    row
}

/// Indices of the set bits, ascending.
pub fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz)
            }
        })
    })
}

pub fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> Vec<u64> {
    let mut row = vec![0u64; words_for(n)];
    for i in idx {
        set(&mut row, i);
    }
    row
}
