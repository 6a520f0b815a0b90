//! Budget-constrained minimum-weight bipartite perfect matchings.
//!
//! The single-budget dual `phi(lambda) = min_M w_lambda(M) - lambda C_1` is
//! maximized by bisection on the monotone subgradient `c_1(M_lambda) - C_1`;
//! the two matchings straddling the breakpoint are rotated into a feasible
//! near-optimal matching along their symmetric-difference cycle (stopping
//! at the largest budget-feasible extent, with the start index chosen by
//! the gasoline lemma so composite weight never rises), and the matching is
//! completed inside the cheap graph of edges whose weight and cost both sit
//! below a threshold.

use crate::instance::{GraphKind, Instance};
use crate::util::{neumaier_sum, RunningSum};
use crate::{Error, Result};

const LAMBDA_CEILING: f64 = (1u64 << 60) as f64;

/// A (possibly partial) matching of `K_{n,n}`: `pairs[i]` is the right
/// vertex matched to left vertex `i`, `None` when exposed.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingSolution {
    pub pairs: Vec<Option<usize>>,
    pub weight: f64,
    pub cost: f64,
    pub size: usize,
    pub feasible: bool,
}

impl MatchingSolution {
    /// Build a matching from a pair list, summing weight and cost from the
    /// instance. The `feasible` flag starts false; budget-aware stages set it.
    pub fn from_pairs(instance: &Instance, pairs: Vec<Option<usize>>) -> MatchingSolution {
        let n = instance.n;
        let mut weight = 0.0;
        let mut cost = 0.0;
        let mut size = 0;
        for (i, p) in pairs.iter().enumerate() {
            if let Some(j) = p {
                let e = instance.edge(i * n + j);
                weight += e.weight;
                cost += e.costs[0];
                size += 1;
            }
        }
        MatchingSolution {
            pairs,
            weight,
            cost,
            size,
            feasible: false,
        }
    }

    /// Edge ids of the matched pairs, ascending.
    pub fn edge_ids(&self, instance: &Instance) -> Vec<usize> {
        let n = instance.n;
        self.pairs
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|j| i * n + j))
            .collect()
    }

    pub fn composite_weight(&self, lambda: f64) -> f64 {
        self.weight + lambda * self.cost
    }

    /// Matched entries are injective on the right side.
    pub fn is_valid(&self) -> bool {
        let mut used = vec![false; self.pairs.len()];
        for p in self.pairs.iter().flatten() {
            if used[*p] {
                return false;
            }
            used[*p] = true;
        }
        self.size == self.pairs.iter().filter(|p| p.is_some()).count()
    }
}

/// Dual certificate for the matching problem: the breakpoint multiplier,
/// the dual value, and the two matchings straddling the budget.
#[derive(Debug, Clone)]
pub struct MatchDualCertificate {
    pub lambda_star: f64,
    pub phi: f64,
    /// Breakpoint matching on the feasible side (`c_1 <= C_1`).
    pub m_low: MatchingSolution,
    /// Breakpoint matching on the infeasible side (`c_1 > C_1`); equals
    /// `m_low` in the degenerate `lambda* = 0` case.
    pub m_high: MatchingSolution,
    /// Reference scale `D n^{2 - 1/alpha} / C_1^2` (with D = 1) the harness
    /// uses to normalize measured multipliers.
    pub lambda_bound: f64,
}

impl MatchDualCertificate {
    pub fn degenerate(&self) -> bool {
        self.lambda_star == 0.0
    }
}

/// Rotation bookkeeping along the symmetric-difference cycle.
#[derive(Debug, Clone)]
pub struct RotationState {
    /// Edge ids around the chosen alternating cycle.
    pub cycle: Vec<usize>,
    /// Signed composite values: `+w_lambda(e)` for m_high edges, `-` for
    /// m_low edges.
    pub a: Vec<f64>,
    /// Rotation start returned by the gasoline rule.
    pub ell: usize,
    /// Number of cycle positions consumed by the accepted window.
    pub tau: usize,
    /// Edge ids of the resulting matching.
    pub x_tau: Vec<usize>,
    /// More than one cycle appeared in `m_low ^ m_high` (a tie anomaly).
    pub multi_cycle: bool,
}

/// Cheap-graph controls for the augmentation step.
#[derive(Debug, Clone)]
pub struct CheapGraphConfig {
    /// Inclusion threshold; defaults to n^{-1/3}.
    pub theta: Option<f64>,
    pub escalation_factor: f64,
    pub max_escalations: u32,
    /// Longest admissible augmenting path, in edges. Six additions along an
    /// eleven-edge path keep the per-augmentation overshoot at 6 theta.
    pub max_path_edges: usize,
}

impl Default for CheapGraphConfig {
    fn default() -> Self {
        CheapGraphConfig {
            theta: None,
            escalation_factor: 2.0,
            max_escalations: 5,
            max_path_edges: 11,
        }
    }
}

/// Solver knobs for the matching pipeline.
#[derive(Debug, Clone)]
pub struct MatchConfig {
    /// Relative bisection width target: the bracket closes at width
    /// `lambda_tol * (1 + lambda_hi)`. Tight enough that the two bracket
    /// matchings tie in composite weight within 1e-9 at desk sizes.
    pub lambda_tol: f64,
    pub cheap: CheapGraphConfig,
    /// Rounds of remove-most-expensive-and-reaugment when the completed
    /// matching overshoots the budget.
    pub patch_rounds: u32,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            lambda_tol: 1e-12,
            cheap: CheapGraphConfig::default(),
            patch_rounds: 3,
        }
    }
}

/// Solve trace consumed by the harness.
#[derive(Debug, Clone, Default)]
pub struct MatchTrace {
    pub cycle_len: usize,
    pub ell: usize,
    pub tau: usize,
    pub multi_cycle: bool,
    pub theta_escalations: u32,
    pub patch_rounds_used: u32,
    /// The pipeline returned the feasible breakpoint matching instead of a
    /// rotated-and-augmented one.
    pub fallback_to_m_low: bool,
}

/// Everything a constrained-matching solve produces.
#[derive(Debug, Clone)]
pub struct MatchSolveResult {
    pub solution: MatchingSolution,
    pub certificate: MatchDualCertificate,
    pub trace: MatchTrace,
}

/// Dense O(n^3) assignment solver (shortest augmenting paths over row and
/// column potentials). Deterministic scan order fixes tie-breaking.
fn solve_assignment_matrix(n: usize, cost: &[f64]) -> Vec<usize> {
    let inf = f64::INFINITY;
    let mut u = vec![0.0_f64; n + 1];
    let mut v = vec![0.0_f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![usize::MAX; n];
    for j in 1..=n {
        if p[j] != 0 {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    row_to_col
}

fn require_bipartite(instance: &Instance) {
    assert_eq!(
        instance.kind,
        GraphKind::CompleteBipartite,
        "matching operations need a bipartite instance"
    );
    assert_eq!(instance.r, 1, "matching operations need exactly one cost");
}

/// Exact minimum of `w_lambda(M) = sum (w(e) + lambda c_1(e))` over perfect
/// matchings.
pub fn min_assignment(instance: &Instance, lambda: f64) -> MatchingSolution {
    require_bipartite(instance);
    assert!(lambda >= 0.0, "multiplier must be nonnegative");
    let n = instance.n;
    let mut cost = vec![0.0_f64; n * n];
    for e in &instance.edges {
        cost[e.u * n + e.v] = e.weight + lambda * e.costs[0];
    }
    let assignment = solve_assignment_matrix(n, &cost);
    let pairs = assignment.into_iter().map(Some).collect();
    MatchingSolution::from_pairs(instance, pairs)
}

/// Dual objective `phi(lambda) = w(M_lambda) + lambda (c_1(M_lambda) - C_1)`.
pub fn phi_match(instance: &Instance, c1: f64, lambda: f64) -> f64 {
    let m = min_assignment(instance, lambda);
    m.weight + lambda * (m.cost - c1)
}

/// Lemma-scale reference `D n^{2 - 1/alpha} / C_1^2`.
pub fn lambda_bound_reference(n: usize, alpha: f64, c1: f64, d: f64) -> f64 {
    d * (n as f64).powf(2.0 - 1.0 / alpha) / (c1 * c1)
}

/// Maximize the concave dual by bisection on the subgradient sign.
pub fn dual_search_match(
    instance: &Instance,
    c1: f64,
    config: &MatchConfig,
) -> Result<MatchDualCertificate> {
    require_bipartite(instance);
    assert!(c1 > 0.0, "budget must be positive");
    let bound = lambda_bound_reference(instance.n, instance.alpha, c1, 1.0);
    let m0 = min_assignment(instance, 0.0);
    if m0.cost <= c1 {
        let mut low = m0.clone();
        low.feasible = true;
        return Ok(MatchDualCertificate {
            lambda_star: 0.0,
            phi: m0.weight,
            m_low: low,
            m_high: m0,
            lambda_bound: bound,
        });
    }
    let mut lo = 0.0_f64;
    let mut m_high = m0; // c_1 > C_1 side
    let mut hi = 1.0_f64;
    let mut m_low = loop {
        let m = min_assignment(instance, hi);
        if m.cost <= c1 {
            break m;
        }
        lo = hi;
        m_high = m;
        hi *= 2.0;
        if hi > LAMBDA_CEILING {
            return Err(Error::BudgetUnconstrainable);
        }
    };
    let mut iterations = 0;
    while hi - lo > config.lambda_tol * (1.0 + hi) && iterations < 300 {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let m = min_assignment(instance, mid);
        if m.cost <= c1 {
            hi = mid;
            m_low = m;
        } else {
            lo = mid;
            m_high = m;
        }
    }
    let lambda_star = 0.5 * (lo + hi);
    let phi = phi_match(instance, c1, lambda_star);
    m_low.feasible = true;
    m_high.feasible = false;
    Ok(MatchDualCertificate {
        lambda_star,
        phi,
        m_low,
        m_high,
        lambda_bound: bound,
    })
}

/// Max-prefix rotation start; all cyclic prefix sums from here stay at or
/// below the sequence total's excess over zero.
fn best_start(a: &[f64]) -> usize {
    let mut acc = RunningSum::default();
    let mut best_value = 0.0_f64; // prefix P_0 = 0
    let mut best_index = 0usize;
    for (i, &x) in a.iter().enumerate().take(a.len() - 1) {
        acc.add(x);
        let p = acc.value();
        if p > best_value {
            best_value = p;
            best_index = i + 1;
        }
    }
    best_index
}

/// Start index for a zero-sum cyclic sequence such that every cyclic
/// prefix sum from there is nonpositive (the gasoline lemma). Ties break
/// toward the smallest index.
pub fn gasoline_start(a: &[f64]) -> Result<usize> {
    assert!(!a.is_empty(), "sequence must be non-empty");
    let total = neumaier_sum(a.iter().copied());
    if total.abs() > 1e-9 {
        return Err(Error::NotZeroSum { sum: total });
    }
    Ok(best_start(a))
}

#[derive(Debug, Clone)]
struct CycleEdge {
    edge_id: usize,
    left: usize,
    right: usize,
    in_high: bool,
}

/// Alternating cycles of `m_low ^ m_high`, each listed in cyclic order
/// (m_low and m_high edges alternate).
fn symmetric_difference_cycles(
    n: usize,
    low: &MatchingSolution,
    high: &MatchingSolution,
) -> Vec<Vec<CycleEdge>> {
    let m1: Vec<usize> = low
        .pairs
        .iter()
        .map(|p| p.expect("m_low is perfect"))
        .collect();
    let m2: Vec<usize> = high
        .pairs
        .iter()
        .map(|p| p.expect("m_high is perfect"))
        .collect();
    let mut inv2 = vec![0usize; n];
    for (i, &j) in m2.iter().enumerate() {
        inv2[j] = i;
    }
    let mut visited = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        if m1[start] == m2[start] {
            visited[start] = true;
            continue;
        }
        let mut cycle = Vec::new();
        let mut u = start;
        loop {
            visited[u] = true;
            let r = m1[u];
            cycle.push(CycleEdge {
                edge_id: u * n + r,
                left: u,
                right: r,
                in_high: false,
            });
            let u2 = inv2[r];
            cycle.push(CycleEdge {
                edge_id: u2 * n + r,
                left: u2,
                right: r,
                in_high: true,
            });
            u = u2;
            if u == start {
                break;
            }
        }
        cycles.push(cycle);
    }
    cycles
}

struct RotationPlan {
    ell: usize,
    /// Candidate window lengths in increasing order; each ends on an m_low
    /// removal so the partial exchange is a matching.
    candidates: Vec<usize>,
    a: Vec<f64>,
}

/// Walk the cycle from the gasoline start, recording every prefix length
/// that leaves a budget-feasible matching without raising the composite
/// weight.
fn plan_rotation(
    instance: &Instance,
    cycle: &[CycleEdge],
    lambda: f64,
    base_cost: f64,
    c1: f64,
) -> RotationPlan {
    let k = cycle.len();
    let a: Vec<f64> = cycle
        .iter()
        .map(|e| {
            let data = instance.edge(e.edge_id);
            let wl = data.weight + lambda * data.costs[0];
            if e.in_high {
                wl
            } else {
                -wl
            }
        })
        .collect();
    let ell = best_start(&a);
    let mut candidates = Vec::new();
    if cycle[ell].in_high {
        // numerical corner: the gasoline start lands on an addition, so no
        // window is a valid partial exchange; callers fall back to m_low
        return RotationPlan { ell, candidates, a };
    }
    let mut cost = base_cost;
    let mut prefix = RunningSum::default();
    for t in 1..k {
        let idx = (ell + t - 1) % k;
        let e = &cycle[idx];
        let data = instance.edge(e.edge_id);
        prefix.add(a[idx]);
        if e.in_high {
            cost += data.costs[0];
        } else {
            cost -= data.costs[0];
        }
        if !e.in_high && cost <= c1 && prefix.value() <= 1e-9 {
            candidates.push(t);
        }
    }
    RotationPlan { ell, candidates, a }
}

fn apply_window(
    instance: &Instance,
    base: &MatchingSolution,
    cycle: &[CycleEdge],
    ell: usize,
    tau: usize,
) -> MatchingSolution {
    let k = cycle.len();
    let mut pairs = base.pairs.clone();
    for j in 0..tau {
        let e = &cycle[(ell + j) % k];
        if !e.in_high {
            pairs[e.left] = None;
        }
    }
    for j in 0..tau {
        let e = &cycle[(ell + j) % k];
        if e.in_high {
            pairs[e.left] = Some(e.right);
        }
    }
    MatchingSolution::from_pairs(instance, pairs)
}

/// Rotate from the feasible breakpoint matching toward the infeasible one
/// along their symmetric-difference cycle, stopping at the largest
/// budget-feasible extent. Returns a matching of size n-1 (or `m_low`
/// itself when no exchange fits the budget) plus the rotation bookkeeping.
pub fn rotate_cycle(
    instance: &Instance,
    certificate: &MatchDualCertificate,
    c1: f64,
) -> Result<(MatchingSolution, RotationState)> {
    require_bipartite(instance);
    assert!(
        !certificate.degenerate(),
        "rotation needs a non-degenerate certificate"
    );
    let n = instance.n;
    let lambda = certificate.lambda_star;
    let m1 = &certificate.m_low;
    let base_wl = m1.composite_weight(lambda);
    let cycles = symmetric_difference_cycles(n, m1, &certificate.m_high);
    assert!(
        !cycles.is_empty(),
        "distinct matchings must differ somewhere"
    );
    let multi_cycle = cycles.len() > 1;

    // evaluate each cycle independently (others stay fixed at m_low) and
    // keep the exchange that lowers the cost the most
    let mut best: Option<(MatchingSolution, RotationState)> = None;
    for cycle in &cycles {
        let plan = plan_rotation(instance, cycle, lambda, m1.cost, c1);
        let k = cycle.len();
        let mut chosen: Option<(usize, MatchingSolution)> = None;
        for &t in plan.candidates.iter().rev() {
            let added = (0..t)
                .filter(|&j| cycle[(plan.ell + j) % k].in_high)
                .count();
            if added == 0 {
                // no exchange fits the budget: keep the feasible matching
                break;
            }
            let candidate = apply_window(instance, m1, cycle, plan.ell, t);
            // exact resummation guards the running-total feasibility check
            if candidate.cost <= c1 && candidate.composite_weight(lambda) <= base_wl + 1e-9 {
                chosen = Some((t, candidate));
                break;
            }
        }
        let (tau, solution) = match chosen {
            Some((t, m)) => (t, m),
            None => (0, m1.clone()),
        };
        let state = RotationState {
            cycle: cycle.iter().map(|e| e.edge_id).collect(),
            a: plan.a,
            ell: plan.ell,
            tau,
            x_tau: solution.edge_ids(instance),
            multi_cycle,
        };
        let better = match &best {
            None => true,
            Some((m, _)) => {
                solution.cost < m.cost - 1e-15
                    || (solution.cost <= m.cost + 1e-15
                        && solution.composite_weight(lambda) < m.composite_weight(lambda))
            }
        };
        if better {
            best = Some((solution, state));
        }
    }
    let (mut solution, state) = best.expect("at least one cycle was evaluated");
    if state.tau == 0 {
        // no exchange fits: the feasible breakpoint matching stands
        solution = m1.clone();
    }
    solution.feasible = solution.cost <= c1;
    debug_assert!(solution.is_valid());
    Ok((solution, state))
}

/// Left-vertex adjacency of the cheap graph: edges with both values at or
/// below `theta`.
fn cheap_adjacency(instance: &Instance, theta: f64) -> Vec<Vec<usize>> {
    let n = instance.n;
    let mut adj = vec![Vec::new(); n];
    for e in &instance.edges {
        if e.weight <= theta && e.costs[0] <= theta {
            adj[e.u].push(e.v);
        }
    }
    adj
}

/// Shortest alternating path (fewest edges) from any exposed left vertex
/// to any exposed right vertex, adding only cheap-graph edges. Returns the
/// flipped pair list, or `None` when no admissible path exists.
fn bfs_augment(
    n: usize,
    pairs: &[Option<usize>],
    inv: &[Option<usize>],
    adj: &[Vec<usize>],
    max_added: usize,
) -> Option<Vec<(usize, usize)>> {
    let mut dist = vec![usize::MAX; n];
    let mut right_seen = vec![false; n];
    let mut prev_of_right = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for (i, p) in pairs.iter().enumerate() {
        if p.is_none() {
            dist[i] = 0;
            queue.push_back(i);
        }
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] + 1 > max_added {
            continue;
        }
        for &v in &adj[u] {
            if right_seen[v] {
                continue;
            }
            right_seen[v] = true;
            prev_of_right[v] = u;
            match inv[v] {
                None => {
                    // reconstruct the alternating path ending at (u, v)
                    let mut flips = Vec::new();
                    let mut left = u;
                    let mut right = v;
                    loop {
                        flips.push((left, right));
                        match pairs[left] {
                            None => break,
                            Some(r0) => {
                                right = r0;
                                left = prev_of_right[r0];
                            }
                        }
                    }
                    return Some(flips);
                }
                Some(w) => {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    None
}

/// Complete a partial matching to a perfect one through the cheap graph,
/// escalating the threshold when no admissible augmenting path exists.
/// Returns the perfect matching and the number of escalations used.
pub fn augment_cheap(
    instance: &Instance,
    matching: &MatchingSolution,
    cheap: &CheapGraphConfig,
) -> Result<(MatchingSolution, u32)> {
    require_bipartite(instance);
    let n = instance.n;
    let mut pairs = matching.pairs.clone();
    let mut inv = vec![None; n];
    for (i, p) in pairs.iter().enumerate() {
        if let Some(j) = p {
            inv[*j] = Some(i);
        }
    }
    let mut size = pairs.iter().filter(|p| p.is_some()).count();
    let mut theta = cheap.theta.unwrap_or((n as f64).powf(-1.0 / 3.0));
    let mut escalations = 0u32;
    let mut adj = cheap_adjacency(instance, theta);
    let max_added = cheap.max_path_edges.div_ceil(2);
    while size < n {
        match bfs_augment(n, &pairs, &inv, &adj, max_added) {
            Some(flips) => {
                for (left, right) in flips {
                    pairs[left] = Some(right);
                    inv[right] = Some(left);
                }
                size += 1;
            }
            None => {
                if escalations == cheap.max_escalations {
                    return Err(Error::AugmentationFailed { escalations });
                }
                escalations += 1;
                theta *= cheap.escalation_factor;
                adj = cheap_adjacency(instance, theta);
            }
        }
    }
    let mut out = MatchingSolution::from_pairs(instance, pairs);
    out.feasible = matching.feasible;
    Ok((out, escalations))
}

/// Full pipeline: dual search, cycle rotation, cheap-graph completion, and
/// budget patching. The returned matching is perfect and satisfies the
/// budget; the certificate's `phi` lower-bounds the constrained optimum.
pub fn solve_constrained_matching(
    instance: &Instance,
    c1: f64,
    config: &MatchConfig,
) -> Result<MatchSolveResult> {
    require_bipartite(instance);
    let n = instance.n;
    let certificate = dual_search_match(instance, c1, config)?;
    let mut trace = MatchTrace::default();
    if certificate.degenerate() {
        let mut solution = certificate.m_low.clone();
        solution.feasible = true;
        return Ok(MatchSolveResult {
            solution,
            certificate,
            trace,
        });
    }

    let (rotated, state) = rotate_cycle(instance, &certificate, c1)?;
    trace.cycle_len = state.cycle.len();
    trace.ell = state.ell;
    trace.tau = state.tau;
    trace.multi_cycle = state.multi_cycle;

    let fall_back = |mut trace: MatchTrace| {
        trace.fallback_to_m_low = true;
        let mut solution = certificate.m_low.clone();
        solution.feasible = true;
        MatchSolveResult {
            solution,
            certificate: certificate.clone(),
            trace,
        }
    };

    if rotated.size == n {
        // rotation kept the feasible breakpoint matching intact
        let mut solution = rotated;
        solution.feasible = true;
        return Ok(MatchSolveResult {
            solution,
            certificate,
            trace,
        });
    }

    let mut current = match augment_cheap(instance, &rotated, &config.cheap) {
        Ok((m, esc)) => {
            trace.theta_escalations = esc;
            m
        }
        Err(_) => return Ok(fall_back(trace)),
    };

    let mut rounds = 0u32;
    while current.cost > c1 && rounds < config.patch_rounds {
        rounds += 1;
        // drop the most cost-expensive edge and re-complete
        let n_of = instance.n;
        let worst = current
            .pairs
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|j| (i, instance.edge(i * n_of + j).costs[0])))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .map(|(i, _)| i)
            .expect("matching is non-empty");
        let mut pairs = current.pairs.clone();
        pairs[worst] = None;
        let shrunk = MatchingSolution::from_pairs(instance, pairs);
        match augment_cheap(instance, &shrunk, &config.cheap) {
            Ok((m, esc)) => {
                trace.theta_escalations += esc;
                current = m;
            }
            Err(_) => {
                trace.patch_rounds_used = rounds;
                return Ok(fall_back(trace));
            }
        }
    }
    trace.patch_rounds_used = rounds;
    if current.cost > c1 {
        return Ok(fall_back(trace));
    }
    current.feasible = true;
    Ok(MatchSolveResult {
        solution: current,
        certificate,
        trace,
    })
}
