//! Ancestor labels, gamma tails and the branching random walk.
//!
//! Following a single line of ancestors from node `n`, the `j`-th label is
//! `floor(floor(n U_1) U_2 ... U_j)`, which stays within `j` of
//! `n U_1 ... U_j = n exp(-G_j)` with `G_j` gamma distributed.

mod gamma;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_model::RngStream;

pub use gamma::{
    gamma_density, gamma_lower_bound, gamma_upper_bound, ln_gamma, reg_lower_gamma, reg_upper_gamma,
};

/// Default cap on the number of leaves in one branching-random-walk sample.
pub const DEFAULT_BRW_BUDGET: u64 = 1 << 24;

/// Labels of successive single-line ancestors, with the uniforms that
/// produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelChain {
    pub start: u64,
    pub labels: Vec<u64>,
    pub uniforms: Vec<f64>,
}

impl LabelChain {
    /// Replay the chain from its uniforms and check the floor recursion, the
    /// sandwich `n U_1..U_j - j <= label_j <= n U_1..U_j`, and monotonicity.
    pub fn verify(&self) -> Result<()> {
        let bad = |j: usize, msg: String| Err(Error::Usage(format!("label chain step {j}: {msg}")));
        let mut prev = self.start;
        let mut product = self.start as f64;
        for (j, (&label, &u)) in self.labels.iter().zip(&self.uniforms).enumerate() {
            let replay = (prev as f64 * u).floor() as u64;
            if replay != label {
                return bad(j, format!("label {label} but replay gives {replay}"));
            }
            if label > prev {
                return bad(j, format!("label increased from {prev} to {label}"));
            }
            product *= u;
            let slack = 1e-9 * product.max(1.0);
            let steps = (j + 1) as f64;
            let l = label as f64;
            if l > product + slack || l < product - steps - slack {
                return bad(j, format!("label {label} outside [{}, {product}]", product - steps));
            }
            prev = label;
        }
        Ok(())
    }

    /// `-ln(U_1 ... U_j)` for the first `j` steps; gamma(j) distributed.
    pub fn gamma_sum(&self, steps: usize) -> f64 {
        self.uniforms[..steps].iter().map(|u| -u.ln()).sum()
    }
}

/// Draw `ell` steps of the ancestor-label chain starting at node `n`.
pub fn sample_label_chain(n: u64, ell: usize, rng: &mut RngStream) -> Result<LabelChain> {
    if n < 1 || ell < 1 {
        return Err(Error::Usage(format!("label chain needs n >= 1 and ell >= 1, got n={n}, ell={ell}")));
    }
    let mut labels = Vec::with_capacity(ell);
    let mut uniforms = Vec::with_capacity(ell);
    let mut cur = n;
    for _ in 0..ell {
        // U in (0, 1] keeps ln U finite.
        let u = 1.0 - rng.uniform();
        cur = (cur as f64 * u).floor() as u64;
        labels.push(cur);
        uniforms.push(u);
    }
    Ok(LabelChain {
        start: n,
        labels,
        uniforms,
    })
}

/// `exp(t - ln n - t ln(t / ln n))` given `ln n` directly; needs `t >= ln n > 0`.
pub fn rn_tail_bound_ln(ln_n: f64, t: f64) -> Result<f64> {
    if !(ln_n > 0.0) || !(t >= ln_n) {
        return Err(Error::domain(
            "rn_tail_bound",
            format!("need t >= ln n > 0, got ln n = {ln_n}, t = {t}"),
        ));
    }
    Ok((t - ln_n - t * (t / ln_n).ln()).exp().min(1.0))
}

/// Upper bound on `P{R_n > t}` for integer `t >= ln n`.
pub fn rn_tail_bound(n: u64, t: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain("rn_tail_bound", format!("need n >= 2, got {n}")));
    }
    rn_tail_bound_ln((n as f64).ln(), t as f64)
}

/// One draw of `-ln Z_ell`: the largest sum of unit exponentials along the
/// `k^ell` root-to-leaf paths of a complete k-ary tree of depth `ell`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BrwSample {
    pub ell: u32,
    pub k: u32,
    pub value: f64,
    /// Sum along the path that always takes child 0.
    pub leftmost: f64,
}

fn brw_descend(depth: u32, k: u32, rng: &mut RngStream) -> (f64, f64) {
    if depth == 0 {
        return (0.0, 0.0);
    }
    let mut best = f64::NEG_INFINITY;
    let mut leftmost = 0.0;
    for child in 0..k {
        let edge = rng.exponential();
        let (sub_best, sub_left) = brw_descend(depth - 1, k, rng);
        best = best.max(edge + sub_best);
        if child == 0 {
            leftmost = edge + sub_left;
        }
    }
    (best, leftmost)
}

/// Exact max over the full tree, depth first, O(ell) working memory.
pub fn sample_brw(ell: u32, k: u32, rng: &mut RngStream, budget: u64) -> Result<BrwSample> {
    if ell < 1 || k < 1 {
        return Err(Error::Usage(format!("brw needs ell >= 1 and k >= 1, got ell={ell}, k={k}")));
    }
    let leaves = (k as u64).checked_pow(ell).filter(|&l| l <= budget);
    if leaves.is_none() {
        return Err(Error::Resource(format!(
            "a {k}-ary tree of depth {ell} has more than {budget} leaves; use a smaller ell"
        )));
    }
    let (value, leftmost) = brw_descend(ell, k, rng);
    Ok(BrwSample { ell, k, value, leftmost })
}

/// Which tail a grid point compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominancePoint {
    pub a: f64,
    pub x: f64,
    pub tail: Tail,
    pub bound: f64,
    pub reference: f64,
}

impl DominancePoint {
    /// `bound >= reference` up to rounding; at `a = 1` both sides are
    /// `exp(-x)` and differ only in the last bits.
    pub fn holds(&self) -> bool {
        self.bound >= self.reference * (1.0 - 8.0 * f64::EPSILON)
    }

    /// `bound / reference - 1`.
    pub fn relative_slack(&self) -> f64 {
        self.bound / self.reference - 1.0
    }
}

/// Shapes checked by [`dominance_grid`].
pub const GRID_SHAPES: [f64; 5] = [1.0, 2.0, 5.0, 10.0, 20.0];

/// Both tail bounds against the reference incomplete gamma at
/// `x = 0.1a, 0.2a, ..., 5a`, skipping points outside a bound's domain.
pub fn dominance_grid() -> Result<Vec<DominancePoint>> {
    let mut out = Vec::new();
    for &a in &GRID_SHAPES {
        for step in 1..=50 {
            let x = a * step as f64 / 10.0;
            if x > a - 1.0 {
                out.push(DominancePoint {
                    a,
                    x,
                    tail: Tail::Upper,
                    bound: gamma_upper_bound(a, x)?,
                    reference: reg_upper_gamma(a, x)?,
                });
            } else if x < a - 1.0 {
                out.push(DominancePoint {
                    a,
                    x,
                    tail: Tail::Lower,
                    bound: gamma_lower_bound(a, x)?,
                    reference: reg_lower_gamma(a, x)?,
                });
            }
        }
    }
    Ok(out)
}
