//! Benchmark network topologies and their Laplacian matrices.
//!
//! Five generators cover the usual spread of spectral structure: a ring
//! lattice (evenly spread eigenvalues), Erdős–Rényi (bell-shaped bulk),
//! Watts–Strogatz (ring plus shortcuts), preferential attachment (heavy
//! degree tail), and a star/spider web (one dominant eigenvalue equal to n).
//!
//! Every generator is deterministic in `(params, seed)`, always returns a
//! connected simple graph on exactly `n` nodes, and stores a dense 0/1
//! adjacency matrix (desk scale, n ≤ ~1000).

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Retry budget for generators that may produce disconnected draws.
const CONNECT_ATTEMPTS: usize = 100;

/// Generator tag, serialized with the short topology codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NetworkKind {
    /// Ring-shaped regular lattice.
    #[serde(rename = "RG")]
    RingRegular,
    /// Erdős–Rényi random graph.
    #[serde(rename = "ER")]
    ErdosRenyi,
    /// Watts–Strogatz small world.
    #[serde(rename = "SW")]
    WattsStrogatz,
    /// Preferential-attachment scale-free graph.
    #[serde(rename = "SF")]
    ScaleFree,
    /// Star: one hub adjacent to every peripheral node.
    #[serde(rename = "SP")]
    SpiderWeb,
}

impl NetworkKind {
    pub fn code(&self) -> &'static str {
        match self {
            NetworkKind::RingRegular => "RG",
            NetworkKind::ErdosRenyi => "ER",
            NetworkKind::WattsStrogatz => "SW",
            NetworkKind::ScaleFree => "SF",
            NetworkKind::SpiderWeb => "SP",
        }
    }
}

impl std::fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

/// Generator parameters; only the fields relevant to the kind are set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    /// Lattice degree (RG, SW).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Edge probability (ER).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Rewiring probability (SW).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_rewire: Option<f64>,
    /// Attachment count (SF).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

/// A connected simple undirected graph with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    kind: NetworkKind,
    n: usize,
    params: GenParams,
    seed: u64,
    adj: DMatrix<f64>,
}

/// Serialized form: canonical sorted edge list instead of the dense matrix.
#[derive(Debug, Serialize, Deserialize)]
struct NetworkFile {
    kind: NetworkKind,
    n: usize,
    params: GenParams,
    seed: u64,
    edges: Vec<(usize, usize)>,
}

impl Network {
    fn from_edges(
        kind: NetworkKind,
        n: usize,
        params: GenParams,
        seed: u64,
        edges: &[(usize, usize)],
    ) -> Result<Self> {
        let mut adj = DMatrix::zeros(n, n);
        for &(i, j) in edges {
            if i >= n || j >= n || i == j {
                return Err(Error::invalid(format!("bad edge ({i}, {j}) for n={n}")));
            }
            adj[(i, j)] = 1.0;
            adj[(j, i)] = 1.0;
        }
        let net = Network {
            kind,
            n,
            params,
            seed,
            adj,
        };
        if !net.is_connected() {
            return Err(Error::invalid("edge list describes a disconnected graph"));
        }
        Ok(net)
    }

    pub fn kind(&self) -> NetworkKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &GenParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Restamp the provenance seed (used for generators whose structure is
    /// seed-independent, so that cell labels stay unique per config seed).
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Dense symmetric 0/1 adjacency matrix with zero diagonal.
    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adj
    }

    /// Degree of node `i` (row sum of the adjacency matrix).
    pub fn degree(&self, i: usize) -> usize {
        self.adj.row(i).iter().sum::<f64>() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    /// Canonical edge list: i < j, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.adj[(i, j)] != 0.0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Breadth-first reachability from node 0.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for (j, visited) in seen.iter_mut().enumerate() {
                if self.adj[(i, j)] != 0.0 && !*visited {
                    *visited = true;
                    count += 1;
                    queue.push_back(j);
                }
            }
        }
        count == self.n
    }

    /// Canonical JSON form `{kind, n, params, seed, edges}`.
    pub fn to_json(&self) -> String {
        let file = NetworkFile {
            kind: self.kind,
            n: self.n,
            params: self.params,
            seed: self.seed,
            edges: self.edges(),
        };
        serde_json::to_string_pretty(&file).expect("network serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(text)?;
        Network::from_edges(file.kind, file.n, file.params, file.seed, &file.edges)
    }
}

/// Ring lattice: node i connects to its d/2 nearest neighbors on each side.
pub fn gen_ring_regular(n: usize, d: usize, seed: u64) -> Result<Network> {
    if n < 3 {
        return Err(Error::invalid(format!("ring needs n >= 3, got {n}")));
    }
    if !d.is_multiple_of(2) || d == 0 {
        return Err(Error::invalid(format!("ring degree must be even and > 0, got {d}")));
    }
    if d >= n {
        return Err(Error::invalid(format!("ring degree {d} must be < n={n}")));
    }
    let edges = ring_lattice_edges(n, d);
    Network::from_edges(
        NetworkKind::RingRegular,
        n,
        GenParams {
            d: Some(d),
            ..Default::default()
        },
        seed,
        &edges,
    )
}

fn ring_lattice_edges(n: usize, d: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(n * d / 2);
    for i in 0..n {
        for s in 1..=(d / 2) {
            let j = (i + s) % n;
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            edges.push((a, b));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Erdős–Rényi G(n, p); redraws with an incremented sub-seed until connected.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Network> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("edge probability must be in (0, 1), got {p}")));
    }
    if n < 2 {
        return Err(Error::invalid(format!("ER needs n >= 2, got {n}")));
    }
    for attempt in 0..CONNECT_ATTEMPTS {
        let sub_seed = seed.wrapping_add(attempt as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        let candidate = Network::from_edges(
            NetworkKind::ErdosRenyi,
            n,
            GenParams {
                p: Some(p),
                ..Default::default()
            },
            seed,
            &edges,
        );
        if let Ok(net) = candidate {
            return Ok(net);
        }
    }
    Err(Error::ConnectivityExhausted {
        attempts: CONNECT_ATTEMPTS,
        n,
    })
}

/// Watts–Strogatz small world: ring lattice with per-edge rewiring.
pub fn gen_watts_strogatz(n: usize, d: usize, p_rewire: f64, seed: u64) -> Result<Network> {
    if n < 3 {
        return Err(Error::invalid(format!("small world needs n >= 3, got {n}")));
    }
    if !d.is_multiple_of(2) || d == 0 {
        return Err(Error::invalid(format!("lattice degree must be even and > 0, got {d}")));
    }
    if d >= n {
        return Err(Error::invalid(format!("lattice degree {d} must be < n={n}")));
    }
    if !(0.0..=1.0).contains(&p_rewire) {
        return Err(Error::invalid(format!("rewiring probability must be in [0, 1], got {p_rewire}")));
    }

    for attempt in 0..CONNECT_ATTEMPTS {
        let sub_seed = seed.wrapping_add(attempt as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
        let mut adj = DMatrix::<f64>::zeros(n, n);
        for &(i, j) in &ring_lattice_edges(n, d) {
            adj[(i, j)] = 1.0;
            adj[(j, i)] = 1.0;
        }
        // Standard rewiring pass: for each lattice offset, each node's
        // rightward edge moves to a uniform target with probability p,
        // skipping self-loops and existing edges.
        for s in 1..=(d / 2) {
            for i in 0..n {
                if !rng.gen_bool(p_rewire) {
                    continue;
                }
                let j = (i + s) % n;
                if adj[(i, j)] == 0.0 {
                    continue; // already moved by an earlier pass
                }
                let row_degree: f64 = adj.row(i).iter().sum();
                if row_degree as usize >= n - 1 {
                    continue; // no free target for this node
                }
                let k = loop {
                    let k = rng.gen_range(0..n);
                    if k != i && adj[(i, k)] == 0.0 {
                        break k;
                    }
                };
                adj[(i, j)] = 0.0;
                adj[(j, i)] = 0.0;
                adj[(i, k)] = 1.0;
                adj[(k, i)] = 1.0;
            }
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if adj[(i, j)] != 0.0 {
                    edges.push((i, j));
                }
            }
        }
        let candidate = Network::from_edges(
            NetworkKind::WattsStrogatz,
            n,
            GenParams {
                d: Some(d),
                p_rewire: Some(p_rewire),
                ..Default::default()
            },
            seed,
            &edges,
        );
        if let Ok(net) = candidate {
            return Ok(net);
        }
    }
    Err(Error::ConnectivityExhausted {
        attempts: CONNECT_ATTEMPTS,
        n,
    })
}

/// Preferential attachment: seed clique of m+1 nodes, then each new node
/// attaches m edges with probability proportional to degree. Connected by
/// construction; the degree exponent is emergent, not enforced.
pub fn gen_scale_free(n: usize, m: usize, seed: u64) -> Result<Network> {
    if m == 0 {
        return Err(Error::invalid("attachment count m must be >= 1"));
    }
    if m >= n {
        return Err(Error::invalid(format!("attachment count m={m} must be < n={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    // Seed clique on nodes 0..=m.
    for i in 0..=m {
        for j in (i + 1)..=m {
            edges.push((i, j));
        }
    }
    // One entry per unit of degree; uniform sampling from it is
    // degree-proportional sampling.
    let mut repeated: Vec<usize> = Vec::with_capacity(2 * n * m);
    for i in 0..=m {
        for _ in 0..m {
            repeated.push(i);
        }
    }
    for v in (m + 1)..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        while targets.len() < m {
            let t = repeated[rng.gen_range(0..repeated.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push(if v < t { (v, t) } else { (t, v) });
            repeated.push(t);
            repeated.push(v);
        }
    }
    edges.sort_unstable();
    Network::from_edges(
        NetworkKind::ScaleFree,
        n,
        GenParams {
            m: Some(m),
            ..Default::default()
        },
        seed,
        &edges,
    )
}

/// Star graph: node 0 adjacent to all others, no peripheral edges.
pub fn gen_spider_web(n: usize) -> Result<Network> {
    if n < 2 {
        return Err(Error::invalid(format!("star needs n >= 2, got {n}")));
    }
    let edges: Vec<(usize, usize)> = (1..n).map(|j| (0, j)).collect();
    Network::from_edges(NetworkKind::SpiderWeb, n, GenParams::default(), 0, &edges)
}

/// Coupling-scaled Laplacian L = K·(Deg − A).
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    values: DMatrix<f64>,
    coupling: f64,
}

impl LaplacianMatrix {
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }
}

/// Build L = K·(Deg − A) from a network.
pub fn laplacian(net: &Network, coupling: f64) -> Result<LaplacianMatrix> {
    if coupling <= 0.0 || !coupling.is_finite() {
        return Err(Error::invalid(format!("coupling must be positive, got {coupling}")));
    }
    let n = net.n();
    let adj = net.adjacency();
    let mut values = DMatrix::zeros(n, n);
    for i in 0..n {
        let deg: f64 = adj.row(i).sum();
        for j in 0..n {
            values[(i, j)] = if i == j {
                coupling * deg
            } else {
                -coupling * adj[(i, j)]
            };
        }
    }
    Ok(LaplacianMatrix { values, coupling })
}

/// The reported closed-form ring eigenvalue λ_k = 2d(1 − cos(2π(k−1)/n)).
///
/// Reference function only (`k_index` is 1-based). For lattice degree d > 2
/// this does NOT equal the spectrum of the degree-d ring: the true d=4 ring
/// has λ_max = 6.25, not 16. Simulations always use the numerically computed
/// spectrum; this exists so the discrepancy can be reported.
pub fn ring_eigenvalue_formula(n: usize, d: usize, k_index: usize) -> f64 {
    assert!(k_index >= 1 && k_index <= n, "k_index must be in 1..=n");
    let angle = 2.0 * std::f64::consts::PI * (k_index as f64 - 1.0) / n as f64;
    2.0 * d as f64 * (1.0 - angle.cos())
}
