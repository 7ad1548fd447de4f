//! Weighted quadrature grids on the line and half-line.
//!
//! A grid owns its nodes and weights with the measure factor (|x|^{2ν} or the
//! speed measure 2x^{2α+1}) already folded in, so Σ wᵢ f(xᵢ) approximates the
//! weighted integral directly. The panel touching the origin uses the
//! Jacobi-weighted rule; panels away from it use Gauss-Legendre with the
//! measure evaluated at the nodes. Panels shrink when an oscillation
//! frequency is declared, with the subdivision scale set by the zero spacing
//! of the oscillating kernel.

use super::quad::GaussRule;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridDomain {
    FullLine,
    HalfLine,
}

/// Quadrature layout controls.
#[derive(Clone, Copy, Debug)]
pub struct PanelLayout {
    /// Width of the origin-touching Jacobi panel.
    pub first_panel: f64,
    /// Target width of the remaining Gauss-Legendre panels.
    pub panel_width: f64,
    /// Nodes per panel.
    pub nodes_per_panel: usize,
    /// Largest |frequency| of e^{i k x}-type factors in the integrand;
    /// panels are capped near 16/k so each holds a bounded phase change.
    pub max_oscillation: f64,
}

impl Default for PanelLayout {
    fn default() -> Self {
        PanelLayout {
            first_panel: 1.0,
            panel_width: 1.0,
            nodes_per_panel: 24,
            max_oscillation: 0.0,
        }
    }
}

impl PanelLayout {
    pub fn with_oscillation(mut self, k: f64) -> Self {
        self.max_oscillation = self.max_oscillation.max(k.abs());
        self
    }

    fn effective_width(&self) -> f64 {
        if self.max_oscillation > 0.0 {
            self.panel_width.min(16.0 / self.max_oscillation)
        } else {
            self.panel_width
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightedGrid {
    /// Strictly increasing, never containing 0.
    pub nodes: Vec<f64>,
    /// Positive weights including the measure factor.
    pub weights: Vec<f64>,
    pub domain: GridDomain,
    /// Exponent parameter of the measure: ν for |x|^{2ν}, α for 2x^{2α+1}.
    pub nu_or_alpha: f64,
}

impl WeightedGrid {
    /// Half-line grid for the Dunkl measure x^{2ν} dx on [0, x_max].
    pub fn half_line_dunkl(nu: f64, x_max: f64, layout: PanelLayout) -> Result<WeightedGrid> {
        build_half_line(2.0 * nu, 1.0, nu, x_max, layout)
    }

    /// Half-line grid for the Bessel speed measure 2 x^{2α+1} dx on [0, x_max].
    pub fn half_line_speed(alpha: f64, x_max: f64, layout: PanelLayout) -> Result<WeightedGrid> {
        build_half_line(2.0 * alpha + 1.0, 2.0, alpha, x_max, layout)
    }

    /// Symmetric full-line grid for |x|^{2ν} dx on [−x_max, x_max].
    pub fn full_line(nu: f64, x_max: f64, layout: PanelLayout) -> Result<WeightedGrid> {
        let half = WeightedGrid::half_line_dunkl(nu, x_max, layout)?;
        let n = half.nodes.len();
        let mut nodes = Vec::with_capacity(2 * n);
        let mut weights = Vec::with_capacity(2 * n);
        for i in (0..n).rev() {
            nodes.push(-half.nodes[i]);
            weights.push(half.weights[i]);
        }
        nodes.extend_from_slice(&half.nodes);
        weights.extend_from_slice(&half.weights);
        Ok(WeightedGrid {
            nodes,
            weights,
            domain: GridDomain::FullLine,
            nu_or_alpha: nu,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Weighted integral Σ wᵢ f(xᵢ) (measure already in the weights).
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_complex(
        &self,
        f: impl Fn(f64) -> crate::ComplexScalar,
    ) -> crate::ComplexScalar {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(crate::ComplexScalar::new(0.0, 0.0), |acc, (&x, &w)| {
                acc + f(x) * w
            })
    }

    /// |Σ over the outermost panel| — proxy for the truncated tail.
    pub(crate) fn outer_band_magnitude(&self, f: impl Fn(f64) -> crate::ComplexScalar) -> f64 {
        let x_hi = match self.domain {
            GridDomain::HalfLine => self.nodes.last().copied().unwrap_or(0.0),
            GridDomain::FullLine => self.nodes.last().copied().unwrap_or(0.0),
        };
        let band = 0.95 * x_hi;
        self.nodes
            .iter()
            .zip(&self.weights)
            .filter(|(&x, _)| x.abs() >= band)
            .map(|(&x, &w)| (f(x) * w).norm())
            .sum()
    }
}

fn build_half_line(
    weight_exponent: f64,
    measure_scale: f64,
    nu_or_alpha: f64,
    x_max: f64,
    layout: PanelLayout,
) -> Result<WeightedGrid> {
    let width = layout.effective_width();
    let a = layout.first_panel.min(x_max).min(width);
    let n = layout.nodes_per_panel;

    let jacobi = GaussRule::jacobi(n, weight_exponent)?;
    let legendre = GaussRule::legendre(n)?;

    let mut nodes = Vec::new();
    let mut weights = Vec::new();

    // Origin panel [0, a]: x = a(1+u)/2, measure folded into the rule:
    // ∫_0^a x^B g dx = (a/2)^{B+1} Σ w_i g(x_i).
    let scale = measure_scale * (0.5 * a).powf(weight_exponent + 1.0);
    for (&u, &w) in jacobi.nodes.iter().zip(&jacobi.weights) {
        nodes.push(0.5 * a * (1.0 + u));
        weights.push(scale * w);
    }

    // Regular panels [p, q]: plain Legendre with the measure at the nodes.
    let mut p = a;
    while p < x_max - 1e-12 {
        let q = (p + width).min(x_max);
        let half = 0.5 * (q - p);
        let mid = 0.5 * (p + q);
        for (&u, &w) in legendre.nodes.iter().zip(&legendre.weights) {
            let x = mid + half * u;
            nodes.push(x);
            weights.push(measure_scale * w * half * x.powf(weight_exponent));
        }
        p = q;
    }

    Ok(WeightedGrid {
        nodes,
        weights,
        domain: GridDomain::HalfLine,
        nu_or_alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::gamma;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_total_weight_matches_gamma_scaling() {
        // ∫_{-∞}^{∞} |x|^{2ν} e^{-βx²} dx = Γ(ν+1/2) / β^{ν+1/2}
        for &nu in &[-0.3, 0.0, 0.5, 1.5] {
            for &beta in &[0.5, 1.0, 2.0] {
                let grid = WeightedGrid::full_line(nu, 14.0, PanelLayout::default()).unwrap();
                let got = grid.integrate(|x| (-beta * x * x).exp());
                let exact = gamma(nu + 0.5) / beta.powf(nu + 0.5);
                assert_relative_eq!(got, exact, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn speed_measure_total_matches_gamma() {
        // ∫_0^∞ 2 x^{2α+1} e^{-x²} dx = Γ(α+1)
        for &alpha in &[-0.5, 0.0, 0.5, 1.2] {
            let grid = WeightedGrid::half_line_speed(alpha, 12.0, PanelLayout::default()).unwrap();
            let got = grid.integrate(|x| (-x * x).exp());
            assert_relative_eq!(got, gamma(alpha + 1.0), max_relative = 1e-12);
        }
    }

    #[test]
    fn grid_invariants() {
        let grid = WeightedGrid::full_line(0.7, 9.0, PanelLayout::default()).unwrap();
        assert!(grid.nodes.windows(2).all(|w| w[1] > w[0]));
        assert!(grid.weights.iter().all(|&w| w > 0.0 && w.is_finite()));
        assert!(grid.nodes.iter().all(|&x| x != 0.0));
    }

    #[test]
    fn oscillation_shrinks_panels() {
        let plain = WeightedGrid::half_line_dunkl(0.5, 10.0, PanelLayout::default()).unwrap();
        let osc = WeightedGrid::half_line_dunkl(
            0.5,
            10.0,
            PanelLayout::default().with_oscillation(40.0),
        )
        .unwrap();
        assert!(osc.len() > plain.len());
        // and it integrates an oscillatory integrand accurately
        let got = osc.integrate(|x| (40.0 * x).cos() * (-x * x / 2.0).exp());
        let fine = WeightedGrid::half_line_dunkl(
            0.5,
            10.0,
            PanelLayout {
                first_panel: 0.1,
                panel_width: 0.1,
                nodes_per_panel: 32,
                max_oscillation: 0.0,
            },
        )
        .unwrap();
        let reference = fine.integrate(|x| (40.0 * x).cos() * (-x * x / 2.0).exp());
        assert_relative_eq!(got, reference, epsilon = 1e-12);
    }
}
