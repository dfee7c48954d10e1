/// Compositions of `n` into `k` positive parts, in lexicographic order.
///
/// Returns an empty list when `k == 0` or `k > n`.
pub fn index_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut cur = Vec::with_capacity(k);
    fill(n, k, &mut cur, &mut out);
    out
}

fn fill(rest: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        cur.push(rest);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for first in 1..=rest - (parts - 1) {
        cur.push(first);
        fill(rest - first, parts - 1, cur, out);
        cur.pop();
    }
}
