//! Exhaustive enumeration of partitions and ordered schedules.
//!
//! Unordered partitions are produced as restricted growth strings: test `j`
//! joins one of the blocks opened by tests `0..j` or opens the next one.
//! Blocks are therefore ordered by their smallest element, and partitions
//! appear in lexicographic order of the string.

use alloc::vec;
use alloc::vec::Vec;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Number of partitions of `n` elements into at most `max_blocks` blocks of
/// at most `max_size` elements each. Saturates at `u128::MAX`.
pub fn partition_count(n: usize, max_size: usize, max_blocks: usize) -> u128 {
    // table[k][b]: partitions of k elements into <= b blocks
    let mut table = vec![vec![0u128; max_blocks + 1]; n + 1];
    for row in table[0].iter_mut() {
        *row = 1;
    }
    for k in 1..=n {
        for b in 1..=max_blocks {
            let mut total: u128 = 0;
            for s in 1..=max_size.min(k) {
                let term = binomial(k - 1, s - 1).saturating_mul(table[k - s][b - 1]);
                total = total.saturating_add(term);
            }
            table[k][b] = total;
        }
    }
    table[n][max_blocks]
}

/// Number of ordered schedules: assignments of `n` tests to `slots` slots of
/// capacity `max_size`. Saturates.
pub fn schedule_count(n: usize, max_size: usize, slots: usize) -> u128 {
    // ways[k]: placements of k labelled tests into the slots seen so far
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for _ in 0..slots {
        let mut next = vec![0u128; n + 1];
        for (k, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for s in 0..=max_size.min(n - k) {
                let add = w.saturating_mul(binomial(n - k, s));
                next[k + s] = next[k + s].saturating_add(add);
            }
        }
        ways = next;
    }
    ways[n]
}

/// Calls `visit` with the blocks of every partition of `0..n` into at most
/// `max_blocks` blocks of at most `max_size` elements.
pub fn for_each_partition<F: FnMut(&[Vec<usize>])>(n: usize, max_size: usize, max_blocks: usize, mut visit: F) {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    partition_rec(0, n, max_size, max_blocks, &mut blocks, &mut visit);
}

fn partition_rec<F: FnMut(&[Vec<usize>])>(
    j: usize,
    n: usize,
    max_size: usize,
    max_blocks: usize,
    blocks: &mut Vec<Vec<usize>>,
    visit: &mut F,
) {
    if j == n {
        visit(blocks);
        return;
    }
    for b in 0..blocks.len() {
        if blocks[b].len() < max_size {
            blocks[b].push(j);
            partition_rec(j + 1, n, max_size, max_blocks, blocks, visit);
            blocks[b].pop();
        }
    }
    if blocks.len() < max_blocks && max_size > 0 {
        blocks.push(vec![j]);
        partition_rec(j + 1, n, max_size, max_blocks, blocks, visit);
        blocks.pop();
    }
}

/// Calls `visit` with every ordered schedule of `0..n` into exactly `slots`
/// slots (empty slots allowed) of at most `max_size` tests each.
pub fn for_each_schedule<F: FnMut(&[Vec<usize>])>(n: usize, max_size: usize, slots: usize, mut visit: F) {
    let mut current = vec![Vec::new(); slots];
    schedule_rec(0, n, max_size, &mut current, &mut visit);
}

fn schedule_rec<F: FnMut(&[Vec<usize>])>(
    j: usize,
    n: usize,
    max_size: usize,
    current: &mut [Vec<usize>],
    visit: &mut F,
) {
    if j == n {
        visit(current);
        return;
    }
    for t in 0..current.len() {
        if current[t].len() < max_size {
            current[t].push(j);
            schedule_rec(j + 1, n, max_size, current, visit);
            current[t].pop();
        }
    }
}

/// Calls `visit` with every `k`-subset of `items` in lexicographic order of
/// positions.
pub fn for_each_subset<F: FnMut(&[usize])>(items: &[usize], k: usize, mut visit: F) {
    if k > items.len() {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut subset: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
    loop {
        visit(&subset);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + items.len() - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for l in i + 1..k {
            idx[l] = idx[l - 1] + 1;
        }
        for l in i..k {
            subset[l] = items[idx[l]];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_enumeration() {
        for n in 0..=7 {
            for m in 1..=4 {
                for t in 1..=4 {
                    let mut parts = 0u128;
                    for_each_partition(n, m, t, |_| parts += 1);
                    assert_eq!(parts, partition_count(n, m, t), "n={n} m={m} T={t}");
                    let mut scheds = 0u128;
                    for_each_schedule(n, m, t, |_| scheds += 1);
                    assert_eq!(scheds, schedule_count(n, m, t), "n={n} m={m} T={t}");
                }
            }
        }
    }

    #[test]
    fn bell_numbers() {
        let bell = [1u128, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(partition_count(n, n.max(1), n.max(1)), b);
        }
    }

    #[test]
    fn partitions_are_canonical_and_lexicographic() {
        let mut seen = Vec::new();
        for_each_partition(3, 2, 2, |blocks| seen.push(blocks.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![vec![0, 1], vec![2]],
                vec![vec![0, 2], vec![1]],
                vec![vec![0], vec![1, 2]],
            ]
        );
    }

    #[test]
    fn subsets_in_order() {
        let mut seen = Vec::new();
        for_each_subset(&[3, 5, 7, 9], 2, |s| seen.push(s.to_vec()));
        assert_eq!(
            seen,
            vec![vec![3, 5], vec![3, 7], vec![3, 9], vec![5, 7], vec![5, 9], vec![7, 9]]
        );
        let mut count = 0;
        for_each_subset(&[1, 2], 0, |s| {
            assert!(s.is_empty());
            count += 1
        });
        assert_eq!(count, 1);
        assert_eq!(binomial(12, 6), 924);
    }
}
