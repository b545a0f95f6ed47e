use super::KoszulError;
use crate::dbar::{BidiscGrid, DiscGrid, Grid};
use crate::multiseries::PolySeries;
use crate::{par, C64};

/// Grid on which a Corona problem is sampled: the disc for `d = 1`, the
/// bidisc for `d = 2`.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Disc(DiscGrid),
    Bidisc(BidiscGrid),
}

impl Grid for Domain {
    fn dim(&self) -> usize {
        match self {
            Domain::Disc(g) => g.dim(),
            Domain::Bidisc(g) => g.dim(),
        }
    }

    fn node_count(&self) -> usize {
        match self {
            Domain::Disc(g) => g.node_count(),
            Domain::Bidisc(g) => g.node_count(),
        }
    }

    fn point(&self, k: usize) -> [C64; 2] {
        match self {
            Domain::Disc(g) => g.point(k),
            Domain::Bidisc(g) => g.point(k),
        }
    }

    fn rho(&self) -> f64 {
        match self {
            Domain::Disc(g) => g.rho(),
            Domain::Bidisc(g) => g.rho(),
        }
    }

    fn dbar(&self, values: &[C64], axis: usize) -> Vec<C64> {
        match self {
            Domain::Disc(g) => g.dbar(values, axis),
            Domain::Bidisc(g) => g.dbar(values, axis),
        }
    }
}

/// Slack allowed above 1 in the normalisation `sup|f_j| ≤ 1`.
pub const NORMALIZATION_SLACK: f64 = 1e-9;

/// Data `f_1, …, f_N` sampled on a domain grid, with the derived quantities
/// the Koszul construction needs.
#[derive(Clone, Debug)]
pub struct CoronaProblem {
    domain: Domain,
    data: Vec<PolySeries>,
    values: Vec<Vec<C64>>,
    /// `gradients[j][i]` samples `∂f_j/∂z_i`.
    gradients: Vec<Vec<Vec<C64>>>,
    delta: f64,
    sup_norms: Vec<f64>,
    gradient_bound: f64,
}

impl CoronaProblem {
    /// Samples every `f_j` and its derivatives (differentiated term by term)
    /// at every node. Fails when `N < 2`, the dimensions disagree, the data
    /// exceeds modulus one, or `Σ|f_j|` vanishes somewhere on the grid.
    pub fn new(data: Vec<PolySeries>, domain: Domain) -> Result<Self, KoszulError> {
        let d = domain.dim();
        if data.len() < 2 {
            return Err(KoszulError::Unsupported(format!(
                "need at least two functions, got {}",
                data.len()
            )));
        }
        if let Some(f) = data.iter().find(|f| f.dim() != d) {
            return Err(KoszulError::Unsupported(format!(
                "function of dimension {} on a {d}-dimensional domain",
                f.dim()
            )));
        }
        let nodes = domain.node_count();
        let sample = |f: &PolySeries| -> Vec<C64> {
            par::map_range(nodes, |k| f.eval(&domain.point(k)[..d]))
        };
        let values: Vec<Vec<C64>> = data.iter().map(sample).collect();
        let gradients: Vec<Vec<Vec<C64>>> = data
            .iter()
            .map(|f| (0..d).map(|i| sample(&f.derivative(i))).collect())
            .collect();
        let sup_norms: Vec<f64> = values
            .iter()
            .map(|v| par::max_range(nodes, |k| v[k].norm()))
            .collect();
        for (j, &s) in sup_norms.iter().enumerate() {
            if s > 1.0 + NORMALIZATION_SLACK {
                return Err(KoszulError::NotNormalized { index: j, sup: s });
            }
        }
        let delta = par::min_range(nodes, |k| values.iter().map(|v| v[k].norm()).sum());
        if !(delta > 0.0) {
            return Err(KoszulError::CoverFailure(format!(
                "Σ|f_j| vanishes on the grid (δ = {delta:e})"
            )));
        }
        let gradient_bound = gradients
            .iter()
            .map(|g| {
                par::max_range(nodes, |k| {
                    g.iter().map(|gi| gi[k].norm_sqr()).sum::<f64>().sqrt()
                })
            })
            .fold(0.0, f64::max);
        Ok(CoronaProblem {
            domain,
            data,
            values,
            gradients,
            delta,
            sup_norms,
            gradient_bound,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Number of functions `N`.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[PolySeries] {
        &self.data
    }

    pub fn values(&self) -> &[Vec<C64>] {
        &self.values
    }

    pub fn gradients(&self) -> &[Vec<Vec<C64>>] {
        &self.gradients
    }

    /// Grid minimum of `Σ|f_j|`.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn sup_norms(&self) -> &[f64] {
        &self.sup_norms
    }

    /// `max_j sup_grid (Σ_i |∂_i f_j|²)^{1/2}`.
    pub fn gradient_bound(&self) -> f64 {
        self.gradient_bound
    }

    /// Replace the grid minimum by a smaller, independently known lower bound
    /// for `Σ|f_j|` (such as a Harnack floor).
    pub fn with_delta(mut self, delta: f64) -> Result<Self, KoszulError> {
        if !(delta > 0.0 && delta <= self.delta) {
            return Err(KoszulError::CoverFailure(format!(
                "δ = {delta:e} is not a valid lower bound (grid minimum {:e})",
                self.delta
            )));
        }
        self.delta = delta;
        Ok(self)
    }

    /// Same data multiplied by a constant (used for covariance checks).
    pub fn scaled(&self, c: C64) -> Result<Self, KoszulError> {
        let data = self.data.iter().map(|f| f.scale(c)).collect();
        CoronaProblem::new(data, self.domain.clone())
    }
}
