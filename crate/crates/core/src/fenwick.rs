//! Fenwick (binary indexed) tree over occupancy flags, with k-th element
//! selection by bit descent.
//!
//! Positions are 1-based. The tree counts how many positions are still
//! occupied; `select(k)` finds the k-th occupied position in O(log n)
//! without scanning. Every tree-node read or write is tallied in a
//! per-instance counter so callers can report deterministic operation
//! counts.

/// Fenwick tree over 0/1 occupancy flags.
#[derive(Debug, Clone)]
pub struct Fenwick {
    tree: Vec<u64>,
    len: usize,
    top: usize,
    touches: u64,
}

impl Fenwick {
    /// A tree of `len` positions, all occupied.
    pub fn all_ones(len: usize) -> Self {
        // For the all-ones array each node's partial sum equals the span it
        // covers, which is the lowest set bit of its index.
        let mut tree = vec![0u64; len + 1];
        for (i, node) in tree.iter_mut().enumerate().skip(1) {
            *node = (i & i.wrapping_neg()) as u64;
        }
        let top = if len == 0 {
            0
        } else {
            1usize << (usize::BITS - 1 - len.leading_zeros())
        };
        Fenwick {
            tree,
            len,
            top,
            touches: 0,
        }
    }

    /// Number of occupied positions in `1..=pos`.
    pub fn rank(&mut self, mut pos: usize) -> u64 {
        let mut sum = 0;
        while pos > 0 {
            sum += self.tree[pos];
            self.touches += 1;
            pos &= pos - 1;
        }
        sum
    }

    /// Marks a currently occupied position as free.
    pub fn clear(&mut self, mut pos: usize) {
        debug_assert!(pos >= 1 && pos <= self.len);
        while pos <= self.len {
            self.tree[pos] -= 1;
            self.touches += 1;
            pos += pos & pos.wrapping_neg();
        }
    }

    /// Position of the k-th occupied entry (k is 1-based). The caller must
    /// ensure at least k positions are occupied.
    pub fn select(&mut self, k: u64) -> usize {
        let mut pos = 0;
        let mut remaining = k;
        let mut bit = self.top;
        while bit > 0 {
            self.touches += 1;
            let probe = pos + bit;
            if probe <= self.len && self.tree[probe] < remaining {
                pos = probe;
                remaining -= self.tree[pos];
            }
            bit >>= 1;
        }
        pos + 1
    }

    /// Tree-node reads and writes performed so far.
    pub fn touches(&self) -> u64 {
        self.touches
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn select_on_full_tree() {
        let mut f = Fenwick::all_ones(10);
        for k in 1..=10 {
            assert_eq!(f.select(k as u64), k);
        }
    }

    #[test]
    fn select_skips_cleared_positions() {
        let mut f = Fenwick::all_ones(8);
        f.clear(3);
        f.clear(1);
        // occupied: 2,4,5,6,7,8
        assert_eq!(f.select(1), 2);
        assert_eq!(f.select(2), 4);
        assert_eq!(f.select(6), 8);
    }

    #[test]
    fn rank_counts_occupied_prefix() {
        let mut f = Fenwick::all_ones(6);
        f.clear(2);
        f.clear(5);
        assert_eq!(f.rank(1), 1);
        assert_eq!(f.rank(2), 1);
        assert_eq!(f.rank(6), 4);
    }

    #[test]
    fn touches_accumulate() {
        let mut f = Fenwick::all_ones(16);
        assert_eq!(f.touches(), 0);
        f.select(4);
        let after_select = f.touches();
        assert!(after_select > 0);
        f.clear(4);
        assert!(f.touches() > after_select);
    }
}
