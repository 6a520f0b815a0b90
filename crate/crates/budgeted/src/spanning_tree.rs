//! Budget-constrained minimum spanning trees via Lagrangean duality.
//!
//! The dual `phi(lambda) = min_T [w(T) + sum_i lambda_i (c_i(T) - C_i)]` is
//! concave and piecewise linear, and its inner minimization is an ordinary
//! MST under the composite weights `w + lambda . c`. The solve pipeline
//! maximizes the dual (bisection on the subgradient sign for r = 1,
//! projected subgradient ascent for r >= 2), enumerates the trees tied at
//! the optimum through single-edge swaps, selects a candidate within the
//! relaxed cost bound, and repairs it to strict feasibility by deleting
//! cost-expensive edges and reconnecting the forest with edges below the
//! threshold `psi`.

use std::collections::{HashSet, VecDeque};

use crate::instance::{Budgets, EdgeData, GraphKind, Instance};
use crate::util::UnionFind;
use crate::{Error, Result};

/// Largest multiplier probed while searching for a feasible bracket side.
const LAMBDA_CEILING: f64 = (1u64 << 60) as f64;

/// Per-edge pricing `w_lambda(e) = w(e) + sum_i lambda_i c_i(e)`.
#[derive(Debug, Clone)]
pub struct CompositeWeights {
    lambda: Vec<f64>,
}

impl CompositeWeights {
    pub fn new(lambda: &[f64]) -> Self {
        assert!(
            lambda.iter().all(|&l| l >= 0.0),
            "multipliers must be nonnegative"
        );
        CompositeWeights {
            lambda: lambda.to_vec(),
        }
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn edge_value(&self, e: &EdgeData) -> f64 {
        e.weight
            + self
                .lambda
                .iter()
                .zip(&e.costs)
                .map(|(l, c)| l * c)
                .sum::<f64>()
    }
}

/// Repair provenance: what the psi-threshold repair did to the tree.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RepairTrace {
    /// `(constraint index, edge id)` deletions, in order.
    pub deleted: Vec<(usize, usize)>,
    /// Edge ids added back from the threshold subgraph.
    pub added: Vec<usize>,
    pub psi_escalations: u32,
    /// Set when the solve pipeline had to fall back to a feasible member of
    /// the dual tie family instead of a repaired candidate.
    pub fallback_to_family: bool,
}

/// A spanning tree with its weight, per-constraint costs, and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeSolution {
    /// Edge ids, ascending.
    pub edges: Vec<usize>,
    pub weight: f64,
    pub costs: Vec<f64>,
    pub feasible: bool,
    pub trace: RepairTrace,
}

impl TreeSolution {
    fn from_edge_ids(instance: &Instance, mut ids: Vec<usize>) -> TreeSolution {
        ids.sort_unstable();
        let mut weight = 0.0;
        let mut costs = vec![0.0; instance.r];
        for &id in &ids {
            let e = instance.edge(id);
            weight += e.weight;
            for i in 0..instance.r {
                costs[i] += e.costs[i];
            }
        }
        TreeSolution {
            edges: ids,
            weight,
            costs,
            feasible: false,
            trace: RepairTrace::default(),
        }
    }

    pub fn composite_weight(&self, instance: &Instance, weights: &CompositeWeights) -> f64 {
        self.edges
            .iter()
            .map(|&id| weights.edge_value(instance.edge(id)))
            .sum()
    }

    /// Strict componentwise budget check (no tolerance).
    pub fn within_budgets(&self, budgets: &Budgets) -> bool {
        self.costs
            .iter()
            .zip(&budgets.values)
            .all(|(&c, &cap)| c <= cap)
    }

    /// Union-find check that the edge set is spanning and acyclic.
    pub fn is_spanning_tree(&self, instance: &Instance) -> bool {
        if self.edges.len() + 1 != instance.vertex_count() {
            return false;
        }
        let mut uf = UnionFind::new(instance.vertex_count());
        for &id in &self.edges {
            let e = instance.edge(id);
            if !uf.union(e.u, e.v) {
                return false;
            }
        }
        uf.components() == 1
    }
}

/// Dual certificate: the multiplier, the dual value (a lower bound on the
/// constrained optimum by weak duality), the subgradient, and the tied
/// trees discovered at the optimum.
#[derive(Debug, Clone)]
pub struct TreeDualCertificate {
    pub lambda_star: Vec<f64>,
    pub phi: f64,
    /// `c_i(T_lambda) - C_i` at the returned multiplier.
    pub subgradient: Vec<f64>,
    pub optimal_family: Vec<TreeSolution>,
}

/// Thresholds governing the repair step.
#[derive(Debug, Clone)]
pub struct RepairThresholds {
    /// Threshold-subgraph cutoff `(n^{-1/(r+1)} (ln n)^{1/r})^{1/alpha}`,
    /// the exact inverse CDF at the connectivity argument.
    pub psi: f64,
    /// Per-constraint expensive-edge cutoffs `C_i / (4n)`.
    pub expensive: Vec<f64>,
    /// Per-constraint deletion quotas `ceil(4 r n / C_i)`.
    pub quota: Vec<usize>,
}

impl RepairThresholds {
    pub fn new(instance: &Instance, budgets: &Budgets) -> Self {
        let n = instance.n as f64;
        let r = instance.r as f64;
        assert!(instance.r >= 1, "repair thresholds need r >= 1");
        let arg = n.powf(-1.0 / (r + 1.0)) * n.ln().powf(1.0 / r);
        let psi = arg.powf(1.0 / instance.alpha);
        let expensive = budgets.values.iter().map(|&c| c / (4.0 * n)).collect();
        let quota = budgets
            .values
            .iter()
            .map(|&c| (4.0 * r * n / c).ceil() as usize)
            .collect();
        RepairThresholds {
            psi,
            expensive,
            quota,
        }
    }
}

/// Solver knobs. `None` fields fall back to the documented defaults.
#[derive(Debug, Clone)]
pub struct TreeConfig {
    /// Absolute bracket width at which the r = 1 bisection stops.
    pub lambda_tol: f64,
    /// Composite-weight slack for detecting tied trees.
    pub tie_tol: f64,
    /// Subgradient step scale for r >= 2; defaults to 1/n.
    pub step0: Option<f64>,
    /// Subgradient iterations for r >= 2; defaults to 200 r.
    pub max_iters: Option<usize>,
    /// Times psi may be doubled when the threshold subgraph fails.
    pub psi_escalations: u32,
    /// Cap on the discovered tie family; defaults to 4 (r + 1).
    pub family_cap: Option<usize>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            lambda_tol: 1e-11,
            tie_tol: 1e-7,
            step0: None,
            max_iters: None,
            psi_escalations: 5,
            family_cap: None,
        }
    }
}

fn composite_keys(instance: &Instance, lambda: &[f64]) -> Vec<f64> {
    let cw = CompositeWeights::new(lambda);
    instance.edges.iter().map(|e| cw.edge_value(e)).collect()
}

/// Minimum spanning tree under composite weights. Ties break toward the
/// smallest edge id, so repeated calls are reproducible.
pub fn min_tree(instance: &Instance, lambda: &[f64]) -> TreeSolution {
    assert_eq!(
        instance.kind,
        GraphKind::Complete,
        "min_tree needs a complete instance"
    );
    assert_eq!(lambda.len(), instance.r, "multiplier arity must match r");
    let keys = composite_keys(instance, lambda);
    let mut order: Vec<u32> = (0..instance.edges.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        keys[a as usize]
            .partial_cmp(&keys[b as usize])
            .expect("edge values are finite")
            .then(a.cmp(&b))
    });
    let n = instance.n;
    let mut uf = UnionFind::new(n);
    let mut ids = Vec::with_capacity(n - 1);
    for &i in &order {
        let e = instance.edge(i as usize);
        if uf.union(e.u, e.v) {
            ids.push(i as usize);
            if ids.len() == n - 1 {
                break;
            }
        }
    }
    TreeSolution::from_edge_ids(instance, ids)
}

/// Dual objective `phi(lambda) = w(T_lambda) + sum_i lambda_i (c_i(T_lambda) - C_i)`.
pub fn phi_tree(instance: &Instance, budgets: &Budgets, lambda: &[f64]) -> f64 {
    let t = min_tree(instance, lambda);
    t.weight
        + lambda
            .iter()
            .zip(&t.costs)
            .zip(&budgets.values)
            .map(|((l, c), cap)| l * (c - cap))
            .sum::<f64>()
}

fn subgradient(tree: &TreeSolution, budgets: &Budgets) -> Vec<f64> {
    tree.costs
        .iter()
        .zip(&budgets.values)
        .map(|(c, cap)| c - cap)
        .collect()
}

fn phi_at(tree: &TreeSolution, budgets: &Budgets, lambda: &[f64]) -> f64 {
    tree.weight
        + lambda
            .iter()
            .zip(&tree.costs)
            .zip(&budgets.values)
            .map(|((l, c), cap)| l * (c - cap))
            .sum::<f64>()
}

fn certificate(
    budgets: &Budgets,
    lambda: Vec<f64>,
    seeds: Vec<TreeSolution>,
) -> TreeDualCertificate {
    let primary = &seeds[0];
    let phi = phi_at(primary, budgets, &lambda);
    let sub = subgradient(primary, budgets);
    let mut family = Vec::new();
    let mut seen = HashSet::new();
    for t in seeds {
        if seen.insert(t.edges.clone()) {
            family.push(t);
        }
    }
    TreeDualCertificate {
        lambda_star: lambda,
        phi,
        subgradient: sub,
        optimal_family: family,
    }
}

/// Maximize the dual. For r = 1 this bisects on the sign of the monotone
/// subgradient `c_1(T_lambda) - C_1`; for r >= 2 it runs projected
/// subgradient ascent and keeps the best multiplier seen.
pub fn dual_ascent_tree(
    instance: &Instance,
    budgets: &Budgets,
    config: &TreeConfig,
) -> Result<TreeDualCertificate> {
    let r = instance.r;
    assert!(r >= 1, "dual ascent needs at least one constraint");
    assert_eq!(budgets.values.len(), r);
    let zero = vec![0.0; r];
    let t0 = min_tree(instance, &zero);
    let g0 = subgradient(&t0, budgets);
    if g0.iter().all(|&g| g <= 0.0) {
        return Ok(certificate(budgets, zero, vec![t0]));
    }
    if r == 1 {
        bisect_dual(instance, budgets, config, t0)
    } else {
        ascend_dual(instance, budgets, config)
    }
}

fn bisect_dual(
    instance: &Instance,
    budgets: &Budgets,
    config: &TreeConfig,
    t_at_zero: TreeSolution,
) -> Result<TreeDualCertificate> {
    let cap = budgets.values[0];
    let mut lo = 0.0_f64;
    let mut t_lo = t_at_zero; // c_1 > C_1 side
    let mut hi = 1.0_f64;
    let t_hi = loop {
        let t = min_tree(instance, &[hi]);
        if t.costs[0] <= cap {
            break t;
        }
        lo = hi;
        t_lo = t;
        hi *= 2.0;
        if hi > LAMBDA_CEILING {
            return Err(Error::BudgetUnconstrainable);
        }
    };
    let mut t_hi = t_hi;
    let mut iterations = 0;
    while hi - lo > config.lambda_tol && iterations < 300 {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let t = min_tree(instance, &[mid]);
        if t.costs[0] <= cap {
            hi = mid;
            t_hi = t;
        } else {
            lo = mid;
            t_lo = t;
        }
    }
    let lambda = vec![0.5 * (lo + hi)];
    let t_star = min_tree(instance, &lambda);
    Ok(certificate(budgets, lambda, vec![t_star, t_hi, t_lo]))
}

fn ascend_dual(
    instance: &Instance,
    budgets: &Budgets,
    config: &TreeConfig,
) -> Result<TreeDualCertificate> {
    let r = instance.r;
    let step0 = config.step0.unwrap_or(1.0 / instance.n as f64);
    let iters = config.max_iters.unwrap_or(200 * r);
    let mut lambda = vec![0.0; r];
    let mut best: Option<(f64, Vec<f64>, TreeSolution)> = None;
    for t in 1..=iters {
        let tree = min_tree(instance, &lambda);
        let value = phi_at(&tree, budgets, &lambda);
        let g = subgradient(&tree, budgets);
        if best.as_ref().map_or(true, |(b, _, _)| value > *b) {
            best = Some((value, lambda.clone(), tree));
        }
        let step = step0 / (t as f64).sqrt();
        for i in 0..r {
            lambda[i] = (lambda[i] + step * g[i]).max(0.0);
        }
    }
    let (_, best_lambda, best_tree) = best.expect("at least one iteration ran");
    Ok(certificate(budgets, best_lambda, vec![best_tree]))
}

/// The tie family at a dual optimum, discovered by swap closure.
#[derive(Debug, Clone)]
pub struct TreeFamily {
    /// Distinct trees whose composite weight lies within `tie_tol` of the
    /// minimum, in discovery order (the base minimizer first).
    pub trees: Vec<TreeSolution>,
    /// Deepest swap level that produced a new member.
    pub max_swap_depth: usize,
    /// Family grew past r + 1 members, beyond what ties explain generically.
    pub tie_anomaly: bool,
}

/// Enumerate trees tied with the composite minimizer at `lambda_star`:
/// starting from `T = min_tree`, consider every swap `T + e - f` with `f`
/// on the cycle closed by `e`, keep swaps within `tie_tol` of the minimum,
/// and recurse to swap depth r.
pub fn optimal_tree_family(
    instance: &Instance,
    lambda_star: &[f64],
    config: &TreeConfig,
) -> TreeFamily {
    let r = instance.r.max(1);
    let cap = config.family_cap.unwrap_or(4 * (r + 1));
    let keys = composite_keys(instance, lambda_star);
    let base = min_tree(instance, lambda_star);
    let base_value: f64 = base.edges.iter().map(|&id| keys[id]).sum();
    let budget_value = base_value + config.tie_tol;

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(base.edges.clone());
    let mut queue: VecDeque<(Vec<usize>, f64, usize)> =
        VecDeque::from([(base.edges.clone(), base_value, 0usize)]);
    let mut trees = vec![base];
    let mut max_depth = 0usize;

    while let Some((ids, value, depth)) = queue.pop_front() {
        max_depth = max_depth.max(depth);
        if depth == r || seen.len() >= cap {
            continue;
        }
        for (new_ids, new_value) in tied_swaps(instance, &keys, &ids, value, budget_value) {
            if seen.len() >= cap {
                break;
            }
            if seen.insert(new_ids.clone()) {
                trees.push(TreeSolution::from_edge_ids(instance, new_ids.clone()));
                queue.push_back((new_ids, new_value, depth + 1));
            }
        }
    }
    let tie_anomaly = trees.len() > r + 1;
    TreeFamily {
        trees,
        max_swap_depth: max_depth,
        tie_anomaly,
    }
}

/// All single swaps of `ids` whose resulting composite weight stays at or
/// below `budget_value`.
fn tied_swaps(
    instance: &Instance,
    keys: &[f64],
    ids: &[usize],
    value: f64,
    budget_value: f64,
) -> Vec<(Vec<usize>, f64)> {
    let n = instance.n;
    let mut in_tree = vec![false; instance.edges.len()];
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut max_tree_key = f64::NEG_INFINITY;
    for &id in ids {
        in_tree[id] = true;
        let e = instance.edge(id);
        adj[e.u].push((e.v, id));
        adj[e.v].push((e.u, id));
        max_tree_key = max_tree_key.max(keys[id]);
    }
    // root the tree at 0
    let mut parent_vertex = vec![usize::MAX; n];
    let mut parent_edge = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut stack = vec![0usize];
    let mut visited = vec![false; n];
    visited[0] = true;
    while let Some(v) = stack.pop() {
        for &(w, id) in &adj[v] {
            if !visited[w] {
                visited[w] = true;
                parent_vertex[w] = v;
                parent_edge[w] = id;
                depth[w] = depth[v] + 1;
                stack.push(w);
            }
        }
    }

    let mut swaps = Vec::new();
    for (id, e) in instance.edges.iter().enumerate() {
        if in_tree[id] {
            continue;
        }
        // need a path edge f with keys[f] >= lim; prune on the tree maximum
        let lim = value + keys[id] - budget_value;
        if max_tree_key < lim {
            continue;
        }
        let (mut a, mut b) = (e.u, e.v);
        while a != b {
            if depth[a] < depth[b] {
                std::mem::swap(&mut a, &mut b);
            }
            let f = parent_edge[a];
            if keys[f] >= lim {
                let mut new_ids: Vec<usize> = ids.iter().copied().filter(|&x| x != f).collect();
                new_ids.push(id);
                new_ids.sort_unstable();
                swaps.push((new_ids, value + keys[id] - keys[f]));
            }
            a = parent_vertex[a];
        }
    }
    swaps
}

/// Pick the candidate the repair step starts from: the minimum-weight
/// family member whose costs respect the relaxed bound `C_i + r c_max`;
/// when none qualifies, the member with the smallest relative violation.
pub fn select_candidate_tree(
    instance: &Instance,
    family: &[TreeSolution],
    budgets: &Budgets,
) -> TreeSolution {
    assert!(!family.is_empty(), "family must be non-empty");
    let r = instance.r as f64;
    let mut c_max = 0.0_f64;
    for t in family {
        for &id in &t.edges {
            for &c in &instance.edge(id).costs {
                c_max = c_max.max(c);
            }
        }
    }
    let qualifies = |t: &TreeSolution| {
        t.costs
            .iter()
            .zip(&budgets.values)
            .all(|(&c, &cap)| c <= cap + r * c_max)
    };
    let mut chosen: Option<&TreeSolution> = None;
    for t in family.iter().filter(|t| qualifies(t)) {
        if chosen.map_or(true, |best| t.weight < best.weight) {
            chosen = Some(t);
        }
    }
    let picked = chosen.unwrap_or_else(|| {
        let violation = |t: &TreeSolution| {
            t.costs
                .iter()
                .zip(&budgets.values)
                .map(|(&c, &cap)| (c - cap) / cap)
                .fold(f64::NEG_INFINITY, f64::max)
        };
        family
            .iter()
            .min_by(|a, b| violation(a).partial_cmp(&violation(b)).unwrap())
            .unwrap()
    });
    let mut out = picked.clone();
    out.feasible = out.within_budgets(budgets);
    out
}

/// Repair a near-feasible tree to strict feasibility.
///
/// For each constraint whose cost exceeds `C_i - margin_i` (with
/// `margin_i = quota_i (r+1) psi` reserving headroom for the edges added
/// back), repeatedly delete the forest edge with the largest `c_i` among
/// those with `c_i >= C_i/(4n)`, up to `quota_i` deletions or until the
/// margin target is met; then reconnect the forest cheapest-weight-first
/// using only edges with every value at or below `psi`. When the threshold
/// subgraph cannot reconnect the forest (or the result still violates a
/// budget), `psi` doubles, up to `config.psi_escalations` times.
pub fn repair_tree(
    instance: &Instance,
    tree: &TreeSolution,
    budgets: &Budgets,
    config: &TreeConfig,
) -> Result<TreeSolution> {
    assert!(tree.is_spanning_tree(instance), "repair input must span");
    let thresholds = RepairThresholds::new(instance, budgets);
    let r = instance.r;
    let n = instance.n;
    let mut escalations = 0u32;

    for attempt in 0..=config.psi_escalations {
        let psi = thresholds.psi * 2f64.powi(attempt as i32);
        let margin: Vec<f64> = thresholds
            .quota
            .iter()
            .map(|&q| q as f64 * (r as f64 + 1.0) * psi)
            .collect();

        let mut kept: Vec<usize> = tree.edges.clone();
        let mut costs = tree.costs.clone();
        let mut deleted: Vec<(usize, usize)> = Vec::new();
        for i in 0..r {
            let target = budgets.values[i] - margin[i];
            if costs[i] <= target {
                continue;
            }
            let mut candidates: Vec<usize> = kept
                .iter()
                .copied()
                .filter(|&id| instance.edge(id).costs[i] >= thresholds.expensive[i])
                .collect();
            candidates.sort_unstable_by(|&a, &b| {
                instance.edge(b).costs[i]
                    .partial_cmp(&instance.edge(a).costs[i])
                    .unwrap()
                    .then(a.cmp(&b))
            });
            let mut used = 0usize;
            for id in candidates {
                if used == thresholds.quota[i] || costs[i] <= target {
                    break;
                }
                kept.retain(|&x| x != id);
                let e = instance.edge(id);
                for j in 0..r {
                    costs[j] -= e.costs[j];
                }
                deleted.push((i, id));
                used += 1;
            }
        }

        if deleted.is_empty() {
            // nothing crossed its margin trigger (or no edge met the
            // expensive cutoff): the tree is returned unchanged
            let mut out = tree.clone();
            out.feasible = out.within_budgets(budgets);
            out.trace.psi_escalations = escalations;
            return Ok(out);
        }

        // reconnect across components, cheapest weight first
        let mut uf = UnionFind::new(n);
        for &id in &kept {
            let e = instance.edge(id);
            uf.union(e.u, e.v);
        }
        let mut gamma: Vec<usize> = instance
            .edges
            .iter()
            .filter(|e| e.weight <= psi && e.costs.iter().all(|&c| c <= psi))
            .map(|e| e.edge_id)
            .collect();
        gamma.sort_unstable_by(|&a, &b| {
            instance
                .edge(a)
                .weight
                .partial_cmp(&instance.edge(b).weight)
                .unwrap()
                .then(a.cmp(&b))
        });
        let mut added = Vec::new();
        for id in gamma {
            if uf.components() == 1 {
                break;
            }
            let e = instance.edge(id);
            if uf.union(e.u, e.v) {
                kept.push(id);
                added.push(id);
            }
        }
        if uf.components() > 1 {
            escalations += 1;
            continue;
        }
        let mut out = TreeSolution::from_edge_ids(instance, kept);
        if out.within_budgets(budgets) {
            out.feasible = true;
            out.trace = RepairTrace {
                deleted,
                added,
                psi_escalations: escalations,
                fallback_to_family: false,
            };
            return Ok(out);
        }
        escalations += 1;
    }
    Err(Error::RepairFailed { escalations })
}

/// Budget-first heuristic used as a last resort: scale the multiplier up
/// until the composite minimizer satisfies every budget.
fn feasible_tree_heuristic(
    instance: &Instance,
    budgets: &Budgets,
    lambda_star: &[f64],
) -> Option<TreeSolution> {
    let mut lambda: Vec<f64> = lambda_star.iter().map(|&l| l.max(1.0)).collect();
    for _ in 0..64 {
        let t = min_tree(instance, &lambda);
        if t.within_budgets(budgets) {
            let mut out = t;
            out.feasible = true;
            return Some(out);
        }
        for (i, l) in lambda.iter_mut().enumerate() {
            if t.costs[i] > budgets.values[i] {
                *l *= 2.0;
            }
        }
    }
    None
}

/// Full pipeline: dual ascent, tie-family enumeration, candidate selection,
/// repair. On success the returned tree satisfies every budget and the
/// certificate's `phi` lower-bounds the constrained optimum.
pub fn solve_constrained_tree(
    instance: &Instance,
    budgets: &Budgets,
    config: &TreeConfig,
) -> Result<(TreeSolution, TreeDualCertificate)> {
    let mut cert = dual_ascent_tree(instance, budgets, config)?;

    if cert.lambda_star.iter().all(|&l| l == 0.0) && cert.optimal_family[0].within_budgets(budgets)
    {
        let mut out = cert.optimal_family[0].clone();
        out.feasible = true;
        return Ok((out, cert));
    }

    let family = optimal_tree_family(instance, &cert.lambda_star, config);
    let mut merged = family.trees;
    let mut seen: HashSet<Vec<usize>> = merged.iter().map(|t| t.edges.clone()).collect();
    for t in cert.optimal_family.drain(..) {
        if seen.insert(t.edges.clone()) {
            merged.push(t);
        }
    }
    cert.optimal_family = merged;

    let candidate = select_candidate_tree(instance, &cert.optimal_family, budgets);
    if candidate.feasible {
        // repair exists to restore feasibility; a feasible candidate is final
        return Ok((candidate, cert));
    }

    match repair_tree(instance, &candidate, budgets, config) {
        Ok(repaired) if repaired.feasible => Ok((repaired, cert)),
        outcome => {
            let error = match outcome {
                Err(e) => e,
                Ok(_) => Error::RepairFailed {
                    escalations: config.psi_escalations,
                },
            };
            let mut fallback: Option<TreeSolution> = None;
            for t in &cert.optimal_family {
                if t.within_budgets(budgets)
                    && fallback.as_ref().map_or(true, |f| t.weight < f.weight)
                {
                    fallback = Some(t.clone());
                }
            }
            if fallback.is_none() {
                fallback = feasible_tree_heuristic(instance, budgets, &cert.lambda_star);
            }
            match fallback {
                Some(mut t) => {
                    t.feasible = true;
                    t.trace.fallback_to_family = true;
                    Ok((t, cert))
                }
                None => Err(error),
            }
        }
    }
}
