//! Tensor grids over the cone: a geometric radial grid and a piecewise link
//! grid whose pieces never straddle a phase boundary, so every quadrature
//! sees a smooth integrand.

use crate::error::{Error, Result};
use crate::geometry::{LinkKind, LinkSpace};
use crate::quad::gauss_legendre_on;

/// Grid resolution knobs. The defaults resolve the r^{2α-1} integrand near
/// the vertex (geometric radial spacing) and make cap integrals spectrally
/// accurate (Gauss nodes per smooth piece).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridConfig {
    pub radial_nodes: usize,
    pub link_nodes: usize,
    pub r_max: f64,
    /// r_min = r_max * r_min_ratio.
    pub r_min_ratio: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            radial_nodes: 512,
            link_nodes: 256,
            r_max: 1.0,
            r_min_ratio: 1e-3,
        }
    }
}

impl GridConfig {
    pub fn with_r_max(mut self, r_max: f64) -> Self {
        self.r_max = r_max;
        self
    }

    pub fn with_nodes(mut self, radial: usize, link: usize) -> Self {
        self.radial_nodes = radial;
        self.link_nodes = link;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes < 16 || self.link_nodes < 16 {
            return Err(Error::Invalid("grid sizes must be at least 16".into()));
        }
        if !(self.r_max > 0.0 && self.r_min_ratio > 0.0 && self.r_min_ratio < 1.0) {
            return Err(Error::Invalid(
                "radial window must satisfy 0 < r_min < r_max".into(),
            ));
        }
        Ok(())
    }
}

/// Strictly increasing radii r_min·q^k, k = 0..m-1, with q set by the span.
#[derive(Clone, Debug)]
pub struct RadialGrid {
    nodes: Vec<f64>,
}

impl RadialGrid {
    pub fn geometric(r_min: f64, r_max: f64, m: usize) -> Self {
        assert!(m >= 2 && r_min > 0.0 && r_max > r_min);
        let q = (r_max / r_min).powf(1.0 / (m as f64 - 1.0));
        let mut nodes: Vec<f64> = (0..m).map(|k| r_min * q.powi(k as i32)).collect();
        nodes[m - 1] = r_max; // pin the endpoint exactly
        RadialGrid { nodes }
    }

    pub fn from_config(cfg: &GridConfig) -> Self {
        Self::geometric(cfg.r_max * cfg.r_min_ratio, cfg.r_max, cfg.radial_nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Index of the last node ≤ r.
    pub fn segment_below(&self, r: f64) -> usize {
        match self.nodes.binary_search_by(|x| x.total_cmp(&r)) {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        }
    }

    /// Nearest node index, if within relative tolerance.
    pub fn locate(&self, r: f64, rel_tol: f64) -> Option<usize> {
        let i = self.segment_below(r);
        let cand = [i, (i + 1).min(self.nodes.len() - 1)];
        cand.into_iter()
            .find(|&k| (self.nodes[k] - r).abs() <= rel_tol * r.abs().max(1e-300))
    }
}

/// One smooth piece [a, b] of the link coordinate with its quadrature nodes.
/// `supported` marks, per field, whether the piece lies in that field's
/// positivity set; it is filled by the builders.
#[derive(Clone, Debug)]
pub struct LinkPiece {
    pub a: f64,
    pub b: f64,
    /// Global index of the first node of this piece.
    pub first_node: usize,
    pub node_count: usize,
}

/// Piecewise quadrature grid on the link coordinate. Node weights include
/// the measure density, so ∫_Σ g dm_Σ ≈ Σ_j `weight[j]·g(node[j])`.
///
/// Spheres and suspensions use Gauss–Legendre nodes in θ per piece (the
/// integrand sin^{N-2}θ·g is analytic in θ, so the rule converges
/// spectrally for every N). Circles use closed uniform grids per piece,
/// which integrate the trigonometric eigenfunction products exactly.
#[derive(Clone, Debug)]
pub struct LinkGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    pieces: Vec<LinkPiece>,
    piece_of: Vec<usize>,
}

impl LinkGrid {
    /// Build a grid over the whole link with pieces split at `breakpoints`
    /// (sorted, strictly inside the coordinate range; duplicates ignored).
    pub fn build(link: &LinkSpace, n_nodes: usize, breakpoints: &[f64]) -> Self {
        let span = link.coordinate_span();
        let mut cuts = vec![0.0];
        for &b in breakpoints {
            if b > cuts.last().unwrap() + 1e-12 && b < span - 1e-12 {
                cuts.push(b);
            }
        }
        cuts.push(span);

        let total_len: f64 = span;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut pieces = Vec::new();
        let mut piece_of = Vec::new();

        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            // at least 16 nodes per piece, otherwise proportional to length
            let n_piece = ((n_nodes as f64 * (b - a) / total_len).round() as usize).max(16);
            let first = nodes.len();
            match link.kind() {
                LinkKind::Circle => {
                    // closed uniform rule (trapezoid): exact for the periodic
                    // harmonics the arc eigenfunctions produce
                    let m = n_piece.max(2);
                    let h = (b - a) / (m - 1) as f64;
                    for j in 0..m {
                        let s = a + j as f64 * h;
                        let w_trap = if j == 0 || j == m - 1 { 0.5 * h } else { h };
                        nodes.push(s);
                        weights.push(w_trap);
                        piece_of.push(pieces.len());
                    }
                }
                _ => {
                    let (xs, ws) = gauss_legendre_on(n_piece, a, b);
                    for (x, w) in xs.iter().zip(&ws) {
                        nodes.push(*x);
                        weights.push(w * link.coordinate_weight(*x));
                        piece_of.push(pieces.len());
                    }
                }
            }
            pieces.push(LinkPiece {
                a,
                b,
                first_node: first,
                node_count: nodes.len() - first,
            });
        }

        LinkGrid {
            nodes,
            weights,
            pieces,
            piece_of,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn pieces(&self) -> &[LinkPiece] {
        &self.pieces
    }

    pub fn piece_of(&self, node: usize) -> usize {
        self.piece_of[node]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Quadrature of g against the link measure from per-node samples.
    pub fn integrate_samples(&self, samples: &[f64]) -> f64 {
        debug_assert_eq!(samples.len(), self.len());
        self.weights.iter().zip(samples).map(|(w, s)| w * s).sum()
    }

    /// Nearest node index, if within absolute tolerance.
    pub fn locate(&self, xi: f64, tol: f64) -> Option<usize> {
        let mut best = None;
        let mut best_d = tol;
        for (j, x) in self.nodes.iter().enumerate() {
            let d = (x - xi).abs();
            if d <= best_d {
                best_d = d;
                best = Some(j);
            }
        }
        best
    }
}
