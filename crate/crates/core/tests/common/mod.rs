//! Brute-force counting oracle shared by the integration suites.
//!
//! The oracle walks the ring one player at a time and counts off `m`
//! surviving players per round; it shares no modular index arithmetic with
//! any solver, which is what makes it an independent check.

/// Full elimination order and survivor by walking alive flags.
pub fn brute_force(n: usize, m: usize) -> (Vec<u64>, u64) {
    assert!(n >= 1 && m >= 1);
    let mut alive = vec![true; n + 1]; // 1-based
    let mut remaining = n;
    let mut order = Vec::with_capacity(n - 1);
    let mut cursor = 1usize; // where the next count starts

    let advance = |pos: usize| if pos == n { 1 } else { pos + 1 };

    while remaining > 1 {
        let mut pos = cursor;
        while !alive[pos] {
            pos = advance(pos);
        }
        // pos counts as 1; step to the m-th surviving player.
        let mut counted = 1usize;
        while counted < m {
            pos = advance(pos);
            while !alive[pos] {
                pos = advance(pos);
            }
            counted += 1;
        }
        alive[pos] = false;
        remaining -= 1;
        order.push(pos as u64);
        let mut next = advance(pos);
        while !alive[next] {
            next = advance(next);
        }
        cursor = next;
    }

    let survivor = alive
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, &a)| a)
        .map(|(i, _)| i as u64)
        .expect("one player survives");
    (order, survivor)
}
