//! Random weighted/costed instances on complete and complete-bipartite
//! graphs.
//!
//! Every edge carries a weight and `r` costs, each an independent draw from
//! the power distribution F(x) = x^alpha on (0,1), realized exactly as
//! `u^{1/alpha}` for a uniform `u`. Draws come from counter-based substreams
//! keyed on `(seed, edge_id, field)`, so regenerating an instance from its
//! parameters reproduces every value bit-for-bit and no draw depends on
//! enumeration order.

use std::fmt::Write as _;
use std::path::Path;

use crate::util::{mix64, unit_from_bits};
use crate::{Error, Result};

/// Host graph family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Complete,
    CompleteBipartite,
}

impl GraphKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Complete => "complete",
            GraphKind::CompleteBipartite => "complete_bipartite",
        }
    }

    fn parse(s: &str) -> Option<GraphKind> {
        match s {
            "complete" => Some(GraphKind::Complete),
            "complete_bipartite" => Some(GraphKind::CompleteBipartite),
            _ => None,
        }
    }

    /// Number of edges of the host graph on `n` vertices (per side for the
    /// bipartite kind).
    pub fn edge_count(self, n: usize) -> usize {
        match self {
            GraphKind::Complete => n * (n - 1) / 2,
            GraphKind::CompleteBipartite => n * n,
        }
    }
}

/// One edge with its weight and `r` costs.
///
/// For bipartite instances `u` is the left-side index and `v` the
/// right-side index, both in `[0, n)`. For complete instances `u < v`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeData {
    pub edge_id: usize,
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    pub costs: Vec<f64>,
}

/// A fully materialized random instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub kind: GraphKind,
    /// Vertex count (per side for bipartite instances).
    pub n: usize,
    /// Number of budget constraints carried per edge.
    pub r: usize,
    pub alpha: f64,
    pub seed: u64,
    pub edges: Vec<EdgeData>,
}

/// Budget vector together with the divergence factor used when the budgets
/// were auto-generated.
#[derive(Debug, Clone, PartialEq)]
pub struct Budgets {
    pub values: Vec<f64>,
    pub omega: f64,
}

impl Budgets {
    /// Wrap explicit budget values.
    pub fn explicit(values: Vec<f64>) -> Self {
        Budgets { values, omega: 1.0 }
    }
}

/// Inverse-CDF transform: maps a uniform `u` in (0,1) to a draw with
/// P(Z <= x) = x^alpha on (0,1). Monotone in `u`; the identity at alpha = 1.
pub fn sample_edge_value(u: f64, alpha: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "uniform input must lie strictly inside (0,1), got {u}"
        )));
    }
    if !(alpha >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be >= 1, got {alpha}"
        )));
    }
    Ok(if alpha == 1.0 {
        u
    } else {
        u.powf(alpha.recip())
    })
}

/// Substream initializer for one scalar draw. Distinct `(edge_id, field)`
/// pairs map to distinct initializers (checked by test).
fn stream_key(seed: u64, edge_id: u64, field: u64) -> u64 {
    mix64(mix64(mix64(seed) ^ edge_id) ^ field)
}

/// One power-distributed draw from the `(seed, edge_id, field)` substream.
/// Zero-probability boundary hits are resampled by advancing the stream.
fn draw_value(seed: u64, edge_id: u64, field: u64, alpha: f64) -> f64 {
    let mut state = stream_key(seed, edge_id, field);
    loop {
        let u = unit_from_bits(state);
        if u > 0.0 {
            return if alpha == 1.0 {
                u
            } else {
                u.powf(alpha.recip())
            };
        }
        state = mix64(state);
    }
}

fn validate_params(n: usize, alpha: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be >= 2, got {n}")));
    }
    if !(alpha >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be >= 1, got {alpha}"
        )));
    }
    Ok(())
}

impl Instance {
    /// Generate an instance from its defining parameters. Field 0 of each
    /// edge substream is the weight, fields 1..=r the costs.
    pub fn generate(
        kind: GraphKind,
        n: usize,
        r: usize,
        alpha: f64,
        seed: u64,
    ) -> Result<Instance> {
        validate_params(n, alpha)?;
        let m = kind.edge_count(n);
        let mut edges = Vec::with_capacity(m);
        let mut push = |edge_id: usize, u: usize, v: usize| {
            let weight = draw_value(seed, edge_id as u64, 0, alpha);
            let costs = (0..r)
                .map(|i| draw_value(seed, edge_id as u64, 1 + i as u64, alpha))
                .collect();
            edges.push(EdgeData {
                edge_id,
                u,
                v,
                weight,
                costs,
            });
        };
        match kind {
            GraphKind::Complete => {
                let mut id = 0;
                for u in 0..n {
                    for v in (u + 1)..n {
                        push(id, u, v);
                        id += 1;
                    }
                }
            }
            GraphKind::CompleteBipartite => {
                for u in 0..n {
                    for v in 0..n {
                        push(u * n + v, u, v);
                    }
                }
            }
        }
        Ok(Instance {
            kind,
            n,
            r,
            alpha,
            seed,
            edges,
        })
    }

    /// Assemble an instance from explicit edge data, validating the same
    /// invariants the deserializer enforces.
    pub fn from_edges(
        kind: GraphKind,
        n: usize,
        r: usize,
        alpha: f64,
        seed: u64,
        mut edges: Vec<EdgeData>,
    ) -> Result<Instance> {
        validate_params(n, alpha)?;
        let m = kind.edge_count(n);
        if edges.len() != m {
            return Err(Error::InvalidParameter(format!(
                "{} instance with n = {n} needs {m} edges, got {}",
                kind.as_str(),
                edges.len()
            )));
        }
        let mut seen = std::collections::HashSet::with_capacity(m);
        for (idx, e) in edges.iter_mut().enumerate() {
            if e.edge_id != idx {
                return Err(Error::InvalidParameter(format!(
                    "edge ids must be 0..{m} in order; edge {idx} has id {}",
                    e.edge_id
                )));
            }
            match kind {
                GraphKind::Complete => {
                    if e.u == e.v || e.u >= n || e.v >= n {
                        return Err(Error::InvalidParameter(format!(
                            "edge {idx}: endpoints ({}, {}) invalid for K_{n}",
                            e.u, e.v
                        )));
                    }
                    if e.u > e.v {
                        std::mem::swap(&mut e.u, &mut e.v);
                    }
                }
                GraphKind::CompleteBipartite => {
                    if e.u >= n || e.v >= n {
                        return Err(Error::InvalidParameter(format!(
                            "edge {idx}: endpoints ({}, {}) out of range for K_{{{n},{n}}}",
                            e.u, e.v
                        )));
                    }
                }
            }
            if !seen.insert((e.u, e.v)) {
                return Err(Error::InvalidParameter(format!(
                    "edge {idx}: duplicate endpoint pair ({}, {})",
                    e.u, e.v
                )));
            }
            if e.costs.len() != r {
                return Err(Error::InvalidParameter(format!(
                    "edge {idx}: expected {r} costs, got {}",
                    e.costs.len()
                )));
            }
            for &x in std::iter::once(&e.weight).chain(e.costs.iter()) {
                if !(x > 0.0 && x < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "edge {idx}: values must lie strictly inside (0,1), got {x}"
                    )));
                }
            }
        }
        Ok(Instance {
            kind,
            n,
            r,
            alpha,
            seed,
            edges,
        })
    }

    /// Total vertex count of the host graph (`n` or `2n`).
    pub fn vertex_count(&self) -> usize {
        match self.kind {
            GraphKind::Complete => self.n,
            GraphKind::CompleteBipartite => 2 * self.n,
        }
    }

    pub fn edge(&self, id: usize) -> &EdgeData {
        &self.edges[id]
    }

    /// Line-oriented text form: header `kind n r alpha seed`, then one line
    /// per edge `edge_id u v weight c_1 ... c_r`, reals at 17 significant
    /// digits so the round trip is bit-exact.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} {} {} {}",
            self.kind.as_str(),
            self.n,
            self.r,
            fmt_real(self.alpha),
            self.seed
        );
        for e in &self.edges {
            let _ = write!(out, "{} {} {} {}", e.edge_id, e.u, e.v, fmt_real(e.weight));
            for c in &e.costs {
                let _ = write!(out, " {}", fmt_real(*c));
            }
            out.push('\n');
        }
        out
    }

    /// Parse the text form produced by [`Instance::to_text`]. Errors name
    /// the first offending line.
    pub fn from_text(text: &str) -> Result<Instance> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Error::Parse {
                line: 1,
                msg: format!(
                    "header needs `kind n r alpha seed`, got {} fields",
                    fields.len()
                ),
            });
        }
        let kind = GraphKind::parse(fields[0]).ok_or_else(|| Error::Parse {
            line: 1,
            msg: format!("unknown kind {:?}", fields[0]),
        })?;
        let n: usize = parse_field(fields[1], 1, "n")?;
        let r: usize = parse_field(fields[2], 1, "r")?;
        let alpha: f64 = parse_field(fields[3], 1, "alpha")?;
        let seed: u64 = parse_field(fields[4], 1, "seed")?;

        let m = kind.edge_count(n);
        let mut edges = Vec::with_capacity(m);
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let tok: Vec<&str> = line.split_whitespace().collect();
            if tok.len() != 4 + r {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!(
                        "edge record needs {} fields for r = {r}, got {}",
                        4 + r,
                        tok.len()
                    ),
                });
            }
            let edge_id: usize = parse_field(tok[0], lineno, "edge_id")?;
            let u: usize = parse_field(tok[1], lineno, "u")?;
            let v: usize = parse_field(tok[2], lineno, "v")?;
            let weight: f64 = parse_field(tok[3], lineno, "weight")?;
            let mut costs = Vec::with_capacity(r);
            for t in &tok[4..] {
                costs.push(parse_field::<f64>(t, lineno, "cost")?);
            }
            edges.push(EdgeData {
                edge_id,
                u,
                v,
                weight,
                costs,
            });
        }
        Instance::from_edges(kind, n, r, alpha, seed, edges).map_err(|e| match e {
            Error::InvalidParameter(msg) => Error::Parse { line: 1, msg },
            other => other,
        })
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Instance> {
        let text = std::fs::read_to_string(path)?;
        Instance::from_text(&text)
    }
}

fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize, name: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("cannot parse {name} from {s:?}"),
    })
}

/// Auto-generated budgets.
///
/// Trees: `C_i = min(n, omega * n^{1 - r/(alpha(r+1))} * ln n)` for every i.
/// Bipartite matching: `C_1 = omega * n^{3/4}`.
pub fn default_budgets(instance: &Instance, omega: f64) -> Result<Budgets> {
    if !(omega > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "omega must exceed 1, got {omega}"
        )));
    }
    let n = instance.n as f64;
    let values = match instance.kind {
        GraphKind::Complete => {
            let r = instance.r;
            if r < 1 {
                return Err(Error::InvalidParameter("tree budgets need r >= 1".into()));
            }
            let expo = 1.0 - r as f64 / (instance.alpha * (r as f64 + 1.0));
            let c = (omega * n.powf(expo) * n.ln()).min(n);
            vec![c; r]
        }
        GraphKind::CompleteBipartite => {
            if instance.r != 1 {
                return Err(Error::InvalidParameter(
                    "matching budgets need r = 1".into(),
                ));
            }
            vec![omega * n.powf(0.75)]
        }
    };
    Ok(Budgets { values, omega })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_edge_value_examples() {
        assert_eq!(sample_edge_value(0.25, 1.0).unwrap(), 0.25);
        assert_eq!(sample_edge_value(0.25, 2.0).unwrap(), 0.5);
        assert!((sample_edge_value(0.0081, 4.0).unwrap() - 0.3).abs() < 1e-15);
        assert!(sample_edge_value(0.0, 1.0).is_err());
        assert!(sample_edge_value(1.0, 1.0).is_err());
    }

    #[test]
    fn sample_edge_value_monotone_in_u() {
        let mut prev = 0.0;
        for k in 1..100 {
            let u = k as f64 / 100.0;
            let v = sample_edge_value(u, 3.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn generate_edge_counts() {
        let a = Instance::generate(GraphKind::Complete, 4, 1, 1.0, 7).unwrap();
        assert_eq!(a.edges.len(), 6);
        assert!(a.edges.iter().all(|e| e.costs.len() == 1));
        let b = Instance::generate(GraphKind::CompleteBipartite, 3, 1, 2.0, 7).unwrap();
        assert_eq!(b.edges.len(), 9);
    }

    #[test]
    fn generate_is_deterministic() {
        let a = Instance::generate(GraphKind::Complete, 9, 2, 1.5, 123).unwrap();
        let b = Instance::generate(GraphKind::Complete, 9, 2, 1.5, 123).unwrap();
        assert_eq!(a, b);
        let c = Instance::generate(GraphKind::Complete, 9, 2, 1.5, 124).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn values_lie_strictly_inside_unit_interval() {
        let inst = Instance::generate(GraphKind::CompleteBipartite, 20, 2, 2.0, 99).unwrap();
        for e in &inst.edges {
            assert!(e.weight > 0.0 && e.weight < 1.0);
            for &c in &e.costs {
                assert!(c > 0.0 && c < 1.0);
            }
        }
    }

    #[test]
    fn stream_initializers_do_not_collide() {
        // Independence surrogate: every (edge, field) substream has a
        // distinct initializer.
        let n = 60usize;
        let m = GraphKind::Complete.edge_count(n);
        let mut seen = std::collections::HashSet::new();
        for edge_id in 0..m as u64 {
            for field in 0..3u64 {
                assert!(seen.insert(stream_key(42, edge_id, field)));
            }
        }
    }

    #[test]
    fn empirical_cdf_matches_power_law() {
        // 10^6 samples per alpha; empirical CDF within 3 standard errors.
        for alpha in [1.0, 2.0] {
            let total = 1_000_000u64;
            let mut counts = [0u64; 3];
            let xs = [0.1, 0.5, 0.9];
            for k in 0..total {
                let v = draw_value(2024, k, 0, alpha);
                for (i, &x) in xs.iter().enumerate() {
                    if v <= x {
                        counts[i] += 1;
                    }
                }
            }
            for (i, &x) in xs.iter().enumerate() {
                let p = x.powf(alpha);
                let se = (p * (1.0 - p) / total as f64).sqrt();
                let emp = counts[i] as f64 / total as f64;
                assert!(
                    (emp - p).abs() <= 3.0 * se,
                    "alpha={alpha} x={x}: |{emp} - {p}| > 3se={:.2e}",
                    3.0 * se
                );
            }
        }
    }

    #[test]
    fn default_budgets_tree_formula() {
        let inst = Instance::generate(GraphKind::Complete, 100, 1, 1.0, 5).unwrap();
        let b = default_budgets(&inst, 2.0).unwrap();
        let expected = 2.0 * 100f64.powf(0.5) * 100f64.ln();
        assert!((b.values[0] - expected).abs() < 1e-12);
        assert!((b.values[0] - 92.10).abs() < 5e-3);
    }

    #[test]
    fn default_budgets_clamped_at_n() {
        let inst = Instance::generate(GraphKind::Complete, 10, 1, 1.0, 5).unwrap();
        let b = default_budgets(&inst, 1e6).unwrap();
        assert_eq!(b.values[0], 10.0);
    }

    #[test]
    fn default_budgets_matching_formula() {
        let inst = Instance::generate(GraphKind::CompleteBipartite, 100, 1, 1.0, 5).unwrap();
        let b = default_budgets(&inst, 2.0).unwrap();
        let expected = 2.0 * 100f64.powf(0.75);
        assert!((b.values[0] - expected).abs() < 1e-12);
        assert!((b.values[0] - 63.25).abs() < 5e-3);
    }

    #[test]
    fn default_budgets_rejects_small_omega() {
        let inst = Instance::generate(GraphKind::Complete, 10, 1, 1.0, 5).unwrap();
        assert!(default_budgets(&inst, 1.0).is_err());
        assert!(default_budgets(&inst, 0.5).is_err());
    }

    #[test]
    fn budgets_monotone_in_omega_and_n() {
        let omegas = [1.5, 2.0, 3.0, 5.0];
        let ns = [10usize, 20, 40, 80];
        for window in omegas.windows(2) {
            let inst = Instance::generate(GraphKind::Complete, 50, 2, 1.5, 1).unwrap();
            let lo = default_budgets(&inst, window[0]).unwrap();
            let hi = default_budgets(&inst, window[1]).unwrap();
            assert!(lo.values[0] <= hi.values[0]);
        }
        for window in ns.windows(2) {
            let a = Instance::generate(GraphKind::Complete, window[0], 2, 1.5, 1).unwrap();
            let b = Instance::generate(GraphKind::Complete, window[1], 2, 1.5, 1).unwrap();
            let lo = default_budgets(&a, 2.0).unwrap();
            let hi = default_budgets(&b, 2.0).unwrap();
            assert!(lo.values[0] <= hi.values[0]);
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let inst = Instance::generate(GraphKind::CompleteBipartite, 7, 3, 2.5, 777).unwrap();
        let text = inst.to_text();
        let back = Instance::from_text(&text).unwrap();
        assert_eq!(inst, back);
        // and byte-stable under a second round
        assert_eq!(text, back.to_text());
    }

    #[test]
    fn parse_rejects_empty_input() {
        match Instance::from_text("") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_cost_arity_mismatch() {
        let inst = Instance::generate(GraphKind::Complete, 3, 2, 1.0, 1).unwrap();
        let mut text = inst.to_text();
        // claim r = 3 in the header while edges carry 2 costs
        text = text.replacen("complete 3 2", "complete 3 3", 1);
        match Instance::from_text(&text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_bad_value() {
        let text = "complete 3 1 1.0 1\n0 0 1 not_a_number 0.5\n1 0 2 0.5 0.5\n2 1 2 0.5 0.5\n";
        match Instance::from_text(text) {
            Err(Error::Parse { line: 2, msg }) => assert!(msg.contains("weight")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
