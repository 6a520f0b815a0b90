//! Exhaustive brute-force solvers used as ground truth at tiny sizes.
//!
//! Spanning trees are enumerated through Prüfer sequences (all `n^{n-2}`
//! labeled trees), perfect matchings through permutations (all `n!`), and
//! rotation starts by scanning every cyclic shift. Nothing here is clever;
//! these exist to be obviously correct.

use crate::instance::{Budgets, GraphKind, Instance};
use crate::util::RunningSum;
use crate::{Error, Result};

/// Largest `n` the exhaustive solvers accept.
pub const MAX_EXHAUSTIVE_N: usize = 8;

/// Budget comparisons absorb summation noise at this tolerance.
pub const BUDGET_SLACK: f64 = 1e-12;

/// Outcome of an exhaustive scan.
#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Minimum feasible weight, or `None` when no enumerated set satisfies
    /// the budgets.
    pub optimum: Option<f64>,
    /// Edge ids of the first minimizer found.
    pub argmin: Vec<usize>,
    /// Number of candidate sets enumerated.
    pub enumerated: u64,
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::OracleTooLarge {
            n,
            limit: MAX_EXHAUSTIVE_N,
        });
    }
    Ok(())
}

/// Decode a Prüfer sequence over vertex set `[0, len+2)` into tree edges.
pub fn prufer_decode(seq: &[usize]) -> Vec<(usize, usize)> {
    let n = seq.len() + 2;
    let mut edges = Vec::with_capacity(n - 1);
    let mut degree = vec![1u32; n];
    for &a in seq {
        degree[a] += 1;
    }
    // linear-time decode: sweep a pointer over the smallest available leaf
    let mut ptr = (0..n)
        .find(|&i| degree[i] == 1)
        .expect("a leaf always exists");
    let mut leaf = ptr;
    for &a in seq {
        edges.push((leaf, a));
        degree[a] -= 1;
        if degree[a] == 1 && a < ptr {
            leaf = a;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    edges
}

/// Visit every labeled spanning tree of `K_n` exactly once as an edge list.
pub fn for_each_spanning_tree(n: usize, mut visit: impl FnMut(&[(usize, usize)])) {
    assert!(n >= 2, "spanning trees need n >= 2");
    if n == 2 {
        visit(&[(0, 1)]);
        return;
    }
    let len = n - 2;
    let mut seq = vec![0usize; len];
    loop {
        let edges = prufer_decode(&seq);
        visit(&edges);
        // odometer over [0, n)^(n-2)
        let mut pos = 0;
        loop {
            if pos == len {
                return;
            }
            seq[pos] += 1;
            if seq[pos] < n {
                break;
            }
            seq[pos] = 0;
            pos += 1;
        }
    }
}

/// Visit every permutation of `[0, n)` (each a perfect matching of
/// `K_{n,n}`, left `i` matched to right `perm[i]`).
pub fn for_each_perfect_matching(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Lookup table from an unordered vertex pair to the instance edge id.
fn pair_to_edge(instance: &Instance) -> Vec<usize> {
    let n = instance.n;
    let mut table = vec![usize::MAX; n * n];
    for e in &instance.edges {
        table[e.u * n + e.v] = e.edge_id;
        table[e.v * n + e.u] = e.edge_id;
    }
    table
}

/// Exhaustive budget-constrained minimum spanning tree.
pub fn brute_force_tree(instance: &Instance, budgets: &Budgets) -> Result<OracleResult> {
    assert_eq!(
        instance.kind,
        GraphKind::Complete,
        "tree oracle needs a complete instance"
    );
    assert_eq!(
        budgets.values.len(),
        instance.r,
        "budget arity must match r"
    );
    check_size(instance.n)?;
    let n = instance.n;
    let table = pair_to_edge(instance);
    let r = instance.r;
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut enumerated = 0u64;
    let mut costs = vec![0.0; r];
    for_each_spanning_tree(n, |edges| {
        enumerated += 1;
        let mut weight = 0.0;
        costs.iter_mut().for_each(|c| *c = 0.0);
        for &(u, v) in edges {
            let e = &instance.edges[table[u * n + v]];
            weight += e.weight;
            for i in 0..r {
                costs[i] += e.costs[i];
            }
        }
        let feasible = costs
            .iter()
            .zip(&budgets.values)
            .all(|(&c, &cap)| c <= cap + BUDGET_SLACK);
        if feasible && best.as_ref().map_or(true, |(w, _)| weight < *w) {
            let ids = edges.iter().map(|&(u, v)| table[u * n + v]).collect();
            best = Some((weight, ids));
        }
    });
    let (optimum, argmin) = match best {
        Some((w, ids)) => (Some(w), ids),
        None => (None, Vec::new()),
    };
    Ok(OracleResult {
        optimum,
        argmin,
        enumerated,
    })
}

/// Exhaustive budget-constrained minimum-weight perfect matching.
pub fn brute_force_matching(instance: &Instance, c1: f64) -> Result<OracleResult> {
    assert_eq!(
        instance.kind,
        GraphKind::CompleteBipartite,
        "matching oracle needs a bipartite instance"
    );
    assert_eq!(instance.r, 1, "matching oracle needs r = 1");
    check_size(instance.n)?;
    let n = instance.n;
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut enumerated = 0u64;
    for_each_perfect_matching(n, |perm| {
        enumerated += 1;
        let mut weight = 0.0;
        let mut cost = 0.0;
        for (i, &j) in perm.iter().enumerate() {
            let e = &instance.edges[i * n + j];
            weight += e.weight;
            cost += e.costs[0];
        }
        if cost <= c1 + BUDGET_SLACK && best.as_ref().map_or(true, |(w, _)| weight < *w) {
            let ids = perm.iter().enumerate().map(|(i, &j)| i * n + j).collect();
            best = Some((weight, ids));
        }
    });
    let (optimum, argmin) = match best {
        Some((w, ids)) => (Some(w), ids),
        None => (None, Vec::new()),
    };
    Ok(OracleResult {
        optimum,
        argmin,
        enumerated,
    })
}

/// Minimum composite weight over all spanning trees; oracle counterpart of
/// `spanning_tree::min_tree`. Returns the optimum and its edge ids.
pub fn min_tree_exhaustive(instance: &Instance, lambda: &[f64]) -> (f64, Vec<usize>) {
    assert_eq!(instance.kind, GraphKind::Complete);
    assert!(instance.n <= MAX_EXHAUSTIVE_N);
    let n = instance.n;
    let table = pair_to_edge(instance);
    let mut best = f64::INFINITY;
    let mut arg = Vec::new();
    for_each_spanning_tree(n, |edges| {
        let mut total = 0.0;
        for &(u, v) in edges {
            let e = &instance.edges[table[u * n + v]];
            total += e.weight + lambda.iter().zip(&e.costs).map(|(l, c)| l * c).sum::<f64>();
        }
        if total < best {
            best = total;
            arg = edges.iter().map(|&(u, v)| table[u * n + v]).collect();
        }
    });
    (best, arg)
}

/// Minimum composite weight over all perfect matchings; oracle counterpart
/// of `assignment::min_assignment`.
pub fn min_assignment_exhaustive(instance: &Instance, lambda: f64) -> (f64, Vec<usize>) {
    assert_eq!(instance.kind, GraphKind::CompleteBipartite);
    assert!(instance.n <= MAX_EXHAUSTIVE_N);
    let n = instance.n;
    let mut best = f64::INFINITY;
    let mut arg = Vec::new();
    for_each_perfect_matching(n, |perm| {
        let mut total = 0.0;
        for (i, &j) in perm.iter().enumerate() {
            let e = &instance.edges[i * n + j];
            total += e.weight + lambda * e.costs[0];
        }
        if total < best {
            best = total;
            arg = perm.to_vec();
        }
    });
    (best, arg)
}

/// Test all `k` rotation starts of a zero-sum cyclic sequence; return every
/// start whose cyclic prefix sums all stay at or below 1e-12.
pub fn exhaustive_rotation_check(a: &[f64]) -> Result<Vec<usize>> {
    let k = a.len();
    if k > 64 {
        return Err(Error::OracleTooLarge { n: k, limit: 64 });
    }
    let total = crate::util::neumaier_sum(a.iter().copied());
    if total.abs() > 1e-9 {
        return Err(Error::NotZeroSum { sum: total });
    }
    let mut valid = Vec::new();
    for start in 0..k {
        let mut acc = RunningSum::default();
        let mut ok = true;
        for j in 0..k.saturating_sub(1) {
            acc.add(a[(start + j) % k]);
            if acc.value() > 1e-12 {
                ok = false;
                break;
            }
        }
        if ok {
            valid.push(start);
        }
    }
    Ok(valid)
}
