//! Spectral analysis: Laplacian spectrum, algebraic connectivity, Fiedler
//! vector, and empirical spectral distributions of the normalized adjacency
//! matrix with their limiting reference densities.
//!
//! Everything here works on an immutable snapshot of a graph. Surviving node
//! ids are mapped to contiguous matrix indices on demand, so graphs that
//! lost nodes mid-run stay analyzable. Decompositions are dense and full:
//! at the scales this toolkit targets (n <= 2000) a full symmetric
//! eigendecomposition takes fractions of a second and the distribution
//! analysis needs the whole spectrum anyway.

use faer::{Mat, Side};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId};

/// Below this, a computed lambda_2 is treated as zero (disconnected) by the
/// spectral classifier. BFS remains authoritative for the connected flag.
pub const LAMBDA2_DISCONNECT_TOL: f64 = 1e-8;

/// Entries smaller than this count as zero when fixing the Fiedler sign.
const SIGN_EPS: f64 = 1e-12;

/// Relative gap under which the Fiedler eigenvalue is flagged degenerate.
const DEGENERACY_TOL: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("spectral analysis needs at least {1} nodes, got {0}")]
    TooFewNodes(usize, usize),
    #[error("eigensolver failed to converge: {0}")]
    Eigensolver(String),
    #[error("normalization sigma undefined for k = {k}, n = {n}")]
    SigmaUndefined { k: usize, n: usize },
    #[error("density parameter k must be at least {1}, got {0}")]
    BadDegree(usize, usize),
}

/// Full Laplacian eigendecomposition report for one graph snapshot.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralReport {
    /// Surviving node ids, ascending; position = matrix index.
    pub node_ids: Vec<NodeId>,
    /// Laplacian eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Algebraic connectivity (second-smallest eigenvalue).
    pub lambda2: f64,
    /// Unit eigenvector for lambda2, aligned with `node_ids`, sign-fixed so
    /// its first nonzero entry is positive.
    pub fiedler: Vec<f64>,
    /// BFS-authoritative connectivity flag.
    pub connected: bool,
    /// True when lambda2 is (numerically) a repeated eigenvalue; the Fiedler
    /// vector is then one valid representative of the eigenspace.
    pub degenerate_fiedler: bool,
}

impl SpectralReport {
    pub fn fiedler_entry(&self, node: NodeId) -> Option<f64> {
        self.node_ids
            .binary_search(&node)
            .ok()
            .map(|idx| self.fiedler[idx])
    }
}

fn matrix_index(g: &Graph) -> Vec<usize> {
    let cap = g.nodes().last().map_or(0, |&m| m as usize + 1);
    let mut index = vec![usize::MAX; cap];
    for (row, &i) in g.nodes().iter().enumerate() {
        index[i as usize] = row;
    }
    index
}

fn build_matrix(g: &Graph, laplacian: bool) -> Mat<f64> {
    let n = g.node_count();
    let index = matrix_index(g);
    let mut m = Mat::zeros(n, n);
    for &i in g.nodes() {
        let row = index[i as usize];
        if laplacian {
            m[(row, row)] = g.degree(i) as f64;
        }
        let off = if laplacian { -1.0 } else { 1.0 };
        for &j in g.neighbors(i) {
            m[(row, index[j as usize])] = off;
        }
    }
    m
}

fn eigenvalues_of(m: &Mat<f64>) -> Result<Vec<f64>, SpectralError> {
    let mut vals = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| SpectralError::Eigensolver(format!("{e:?}")))?;
    vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(vals)
}

/// Ascending eigenvalues of the (unnormalized) adjacency matrix.
pub fn adjacency_eigenvalues(g: &Graph) -> Result<Vec<f64>, SpectralError> {
    if g.node_count() == 0 {
        return Err(SpectralError::TooFewNodes(0, 1));
    }
    eigenvalues_of(&build_matrix(g, false))
}

/// Ascending Laplacian eigenvalues without eigenvectors.
pub fn laplacian_eigenvalues(g: &Graph) -> Result<Vec<f64>, SpectralError> {
    if g.node_count() < 2 {
        return Err(SpectralError::TooFewNodes(g.node_count(), 2));
    }
    eigenvalues_of(&build_matrix(g, true))
}

/// Algebraic connectivity alone; roughly twice as fast as the full
/// decomposition, for probe loops that do not need the Fiedler vector.
pub fn lambda2_of(g: &Graph) -> Result<f64, SpectralError> {
    Ok(laplacian_eigenvalues(g)?[1])
}

/// Full symmetric eigendecomposition of the Laplacian L = D - A.
pub fn laplacian_spectrum(g: &Graph) -> Result<SpectralReport, SpectralError> {
    let n = g.node_count();
    if n < 2 {
        return Err(SpectralError::TooFewNodes(n, 2));
    }
    let m = build_matrix(g, true);
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| SpectralError::Eigensolver(format!("{e:?}")))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        evd.S()[a]
            .partial_cmp(&evd.S()[b])
            .expect("finite eigenvalues")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&c| evd.S()[c]).collect();
    let lambda2 = eigenvalues[1];

    let fiedler_col = order[1];
    let mut fiedler: Vec<f64> = (0..n).map(|r| evd.U()[(r, fiedler_col)]).collect();
    let norm = fiedler.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in &mut fiedler {
            *x /= norm;
        }
    }
    if let Some(first) = fiedler.iter().find(|x| x.abs() > SIGN_EPS) {
        if *first < 0.0 {
            for x in &mut fiedler {
                *x = -*x;
            }
        }
    }

    let degenerate_fiedler = n > 2 && {
        let gap = eigenvalues[2] - lambda2;
        gap.abs() <= DEGENERACY_TOL * lambda2.abs().max(1.0)
    };

    Ok(SpectralReport {
        node_ids: g.nodes().to_vec(),
        eigenvalues,
        lambda2,
        fiedler,
        connected: g.is_connected().expect("n >= 2"),
        degenerate_fiedler,
    })
}

/// High-probability floor for the algebraic connectivity of a random
/// k-regular graph: k - 2 sqrt(k - 1).
pub fn lambda2_lower_bound(k: usize) -> Result<f64, SpectralError> {
    if k < 1 {
        return Err(SpectralError::BadDegree(k, 1));
    }
    Ok(k as f64 - 2.0 * ((k - 1) as f64).sqrt())
}

/// Which normalization the empirical spectral distribution uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EsdMode {
    /// sigma = sqrt(k - 1); the fixed-degree limit law.
    FixedK,
    /// sigma = sqrt(k - k^2/n); the growing-degree (semicircle) limit law.
    GrowingK,
}

impl std::str::FromStr for EsdMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed_k" => Ok(EsdMode::FixedK),
            "growing_k" => Ok(EsdMode::GrowingK),
            other => Err(format!(
                "unknown esd mode {other:?} (expected fixed_k|growing_k)"
            )),
        }
    }
}

pub const ESD_BINS: usize = 16;
pub const ESD_RANGE: (f64, f64) = (-2.0, 2.0);
pub const ESD_BIN_WIDTH: f64 = 0.25;

/// Histogram of normalized adjacency eigenvalues over 16 fixed bins of
/// width 0.25 spanning [-2, 2]. Eigenvalues outside the range (notably the
/// Perron value k/sigma) are excluded from the bins and counted separately.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EsdHistogram {
    /// 17 bin edges from -2 to 2.
    pub bin_edges: [f64; 17],
    /// Probability mass per bin divided by the bin width.
    pub densities: [f64; ESD_BINS],
    /// Eigenvalues outside [-2, 2].
    pub excluded_count: usize,
    /// Matrix dimension the histogram was computed from.
    pub nodes: usize,
}

pub fn esd_bin_edges() -> [f64; 17] {
    std::array::from_fn(|t| ESD_RANGE.0 + ESD_BIN_WIDTH * t as f64)
}

fn esd_sigma(n: usize, k: usize, mode: EsdMode) -> Result<f64, SpectralError> {
    let sigma_sq = match mode {
        EsdMode::FixedK => {
            if k < 2 {
                return Err(SpectralError::BadDegree(k, 2));
            }
            (k - 1) as f64
        }
        EsdMode::GrowingK => k as f64 - (k * k) as f64 / n as f64,
    };
    if sigma_sq <= 0.0 {
        return Err(SpectralError::SigmaUndefined { k, n });
    }
    Ok(sigma_sq.sqrt())
}

pub fn esd_histogram(g: &Graph, k: usize, mode: EsdMode) -> Result<EsdHistogram, SpectralError> {
    let n = g.node_count();
    if n == 0 {
        return Err(SpectralError::TooFewNodes(0, 1));
    }
    let sigma = esd_sigma(n, k, mode)?;
    let mut counts = [0usize; ESD_BINS];
    let mut excluded = 0usize;
    for mu in adjacency_eigenvalues(g)? {
        let x = mu / sigma;
        if !(ESD_RANGE.0..=ESD_RANGE.1).contains(&x) {
            excluded += 1;
            continue;
        }
        let bin = (((x - ESD_RANGE.0) / ESD_BIN_WIDTH) as usize).min(ESD_BINS - 1);
        counts[bin] += 1;
    }
    let densities = std::array::from_fn(|b| counts[b] as f64 / (n as f64 * ESD_BIN_WIDTH));
    Ok(EsdHistogram {
        bin_edges: esd_bin_edges(),
        densities,
        excluded_count: excluded,
        nodes: n,
    })
}

/// Element-wise mean of histograms from repeated trials.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeanEsd {
    pub bin_edges: [f64; 17],
    pub densities: [f64; ESD_BINS],
    pub mean_excluded: f64,
    pub trials: usize,
}

pub fn average_histograms(hists: &[EsdHistogram]) -> Option<MeanEsd> {
    if hists.is_empty() {
        return None;
    }
    let t = hists.len() as f64;
    let densities = std::array::from_fn(|b| hists.iter().map(|h| h.densities[b]).sum::<f64>() / t);
    let mean_excluded = hists.iter().map(|h| h.excluded_count as f64).sum::<f64>() / t;
    Some(MeanEsd {
        bin_edges: esd_bin_edges(),
        densities,
        mean_excluded,
        trials: hists.len(),
    })
}

/// Limiting eigenvalue density of sqrt(k-1)-normalized adjacency matrices of
/// k-regular graphs (fixed k, n -> infinity). Zero outside [-2, 2].
pub fn mckay_density(x: f64, k: usize) -> Result<f64, SpectralError> {
    if k < 2 {
        return Err(SpectralError::BadDegree(k, 2));
    }
    // Support boundary first: for k = 2 the denominator also vanishes at
    // |x| = 2 and the naive formula evaluates 0/0.
    if 4.0 - x * x <= 0.0 {
        return Ok(0.0);
    }
    let kf = k as f64;
    let num = kf * kf - kf;
    let den = 2.0 * std::f64::consts::PI * (kf * kf - kf * x * x + x * x);
    Ok(num / den * (4.0 - x * x).sqrt())
}

/// Semicircle density, the k -> infinity limit of the above. Zero outside
/// [-2, 2].
pub fn semicircle_density(x: f64) -> f64 {
    if x.abs() > 2.0 {
        return 0.0;
    }
    (4.0 - x * x).sqrt() / (2.0 * std::f64::consts::PI)
}

/// Composite Simpson quadrature with `2 * halves` panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, halves: usize) -> f64 {
    let n = 2 * halves;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for t in 1..n {
        let w = if t % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * t as f64);
    }
    acc * h / 3.0
}

const BIN_QUAD_HALVES: usize = 4096;

/// Average value of the fixed-k reference density over each histogram bin.
pub fn mckay_bin_means(k: usize) -> Result<[f64; ESD_BINS], SpectralError> {
    mckay_density(0.0, k)?;
    let edges = esd_bin_edges();
    Ok(std::array::from_fn(|b| {
        simpson(
            |x| mckay_density(x, k).expect("k validated"),
            edges[b],
            edges[b + 1],
            BIN_QUAD_HALVES,
        ) / ESD_BIN_WIDTH
    }))
}

/// Average value of the semicircle density over each histogram bin.
pub fn semicircle_bin_means() -> [f64; ESD_BINS] {
    let edges = esd_bin_edges();
    std::array::from_fn(|b| {
        simpson(semicircle_density, edges[b], edges[b + 1], BIN_QUAD_HALVES) / ESD_BIN_WIDTH
    })
}
