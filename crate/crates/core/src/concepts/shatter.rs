//! Enumeration of shattered subsets.
//!
//! Shattered sets are closed under taking subsets, so a depth-first search
//! that only extends shattered sets (by points above the current maximum)
//! visits exactly the shattered family. Each step filters the hypotheses
//! defined on the new point, which keeps the per-set check cheap.

/// Calls `visit(set_mask, size)` for every subset of `positions` shattered by
/// the hypotheses given as `(defined, ones)` masks. The empty set is visited
/// iff `hyps` is nonempty. Returning `false` from `visit` stops the search.
pub fn for_each_shattered(hyps: &[(u64, u64)], positions: u64, mut visit: impl FnMut(u64, u32) -> bool) {
    if hyps.is_empty() {
        return;
    }
    let order: Vec<u32> = bits(positions).collect();
    let relevant: Vec<(u64, u64)> = hyps.to_vec();
    if !visit(0, 0) {
        return;
    }
    let mut stop = false;
    extend(&relevant, &order, 0, 0, 0, &mut visit, &mut stop);
}

fn extend(
    relevant: &[(u64, u64)],
    order: &[u32],
    start: usize,
    set: u64,
    size: u32,
    visit: &mut impl FnMut(u64, u32) -> bool,
    stop: &mut bool,
) {
    for (offset, &pos) in order[start..].iter().enumerate() {
        if *stop {
            return;
        }
        let bit = 1u64 << pos;
        let next: Vec<(u64, u64)> = relevant.iter().copied().filter(|(d, _)| d & bit != 0).collect();
        let next_set = set | bit;
        let next_size = size + 1;
        if (next.len() as u128) < (1u128 << next_size) {
            continue;
        }
        if !realizes_all(&next, next_set, next_size) {
            continue;
        }
        if !visit(next_set, next_size) {
            *stop = true;
            return;
        }
        extend(&next, order, start + offset + 1, next_set, next_size, visit, stop);
    }
}

fn realizes_all(hyps: &[(u64, u64)], set: u64, size: u32) -> bool {
    let slots = 1usize << size;
    let mut seen = vec![0u64; slots.div_ceil(64)];
    let mut distinct = 0usize;
    for &(_, ones) in hyps {
        let code = compress(ones, set);
        let (word, bit) = (code / 64, code % 64);
        if seen[word] & (1 << bit) == 0 {
            seen[word] |= 1 << bit;
            distinct += 1;
            if distinct == slots {
                return true;
            }
        }
    }
    false
}

/// Gathers the bits of `value` selected by `mask` into the low bits.
fn compress(value: u64, mask: u64) -> usize {
    let mut out = 0usize;
    for (i, pos) in bits(mask).enumerate() {
        if value & (1 << pos) != 0 {
            out |= 1 << i;
        }
    }
    out
}

fn bits(mut mask: u64) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let pos = mask.trailing_zeros();
            mask &= mask - 1;
            Some(pos)
        }
    })
}

/// Number of subsets of `positions` shattered by `hyps`.
pub fn count_shattered(hyps: &[(u64, u64)], positions: u64) -> u64 {
    let mut count = 0u64;
    for_each_shattered(hyps, positions, |_, _| {
        count += 1;
        true
    });
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compress_gathers_selected_bits() {
        assert_eq!(compress(0b1010, 0b1110), 0b101);
        assert_eq!(compress(0b1111, 0), 0);
    }

    #[test]
    fn full_cube_shatters_everything() {
        let hyps: Vec<(u64, u64)> = (0..8).map(|b| (0b111, b)).collect();
        assert_eq!(count_shattered(&hyps, 0b111), 8);
        assert_eq!(count_shattered(&hyps, 0b101), 4);
    }

    #[test]
    fn undefined_points_block_shattering() {
        // both labels on point 0, but the hypothesis with 1 is undefined on point 1
        let hyps = vec![(0b11, 0b00), (0b11, 0b10), (0b01, 0b01), (0b11, 0b11)];
        // subsets: {}, {0}, {1}; {0,1} misses pattern (1,0)
        assert_eq!(count_shattered(&hyps, 0b11), 3);
    }

    #[test]
    fn early_stop() {
        let hyps: Vec<(u64, u64)> = (0..16).map(|b| (0b1111, b)).collect();
        let mut seen = 0;
        for_each_shattered(&hyps, 0b1111, |_, _| {
            seen += 1;
            seen < 3
        });
        assert_eq!(seen, 3);
    }
}
