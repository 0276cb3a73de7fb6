use crate::error::{Error, Result};

/// Uniform node-centred mesh with `n` intervals and Dirichlet end nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    x_lo: f64,
    x_hi: f64,
    dx: f64,
    x: Vec<f64>,
}

impl Grid {
    pub fn uniform(x_lo: f64, x_hi: f64, n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::invalid(format!(
                "need at least 4 intervals, got {n}"
            )));
        }
        if !(x_lo < x_hi) || !x_lo.is_finite() || !x_hi.is_finite() {
            return Err(Error::invalid(format!("bad domain [{x_lo}, {x_hi}]")));
        }
        let len = x_hi - x_lo;
        let mut x: Vec<f64> = (0..=n).map(|j| x_lo + len * j as f64 / n as f64).collect();
        x[n] = x_hi;
        Ok(Self {
            x_lo,
            x_hi,
            dx: len / n as f64,
            x,
        })
    }

    pub fn x_lo(&self) -> f64 {
        self.x_lo
    }

    pub fn x_hi(&self) -> f64 {
        self.x_hi
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Number of intervals `N`; nodes are `0..=N`.
    pub fn n_intervals(&self) -> usize {
        self.x.len() - 1
    }

    pub fn n_nodes(&self) -> usize {
        self.x.len()
    }

    pub fn node(&self, j: usize) -> f64 {
        self.x[j]
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    pub fn nearest_node(&self, x: f64) -> usize {
        let j = ((x - self.x_lo) / self.dx).round();
        (j.max(0.0) as usize).min(self.n_intervals())
    }
}

/// Nodal solution, time and front position.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub p: Vec<f64>,
    pub t: f64,
    /// Tracked front for the shock-based schemes; the interpolated `p*`
    /// crossing for the averaging schemes.
    pub xi: f64,
    /// Left node of the interval holding the front.
    pub shock_index: usize,
}

/// Largest index `i` with `p_i ≥ p*` (0-based), for a non-increasing profile
/// that starts at or above `p*` and ends below it.
pub fn locate_shock_cell(p: &[f64], p_star: f64) -> Result<usize> {
    if p.is_empty() || p[0] < p_star || p[p.len() - 1] >= p_star {
        return Err(Error::NoCrossing);
    }
    Ok(p.iter()
        .rposition(|&v| v >= p_star)
        .expect("p[0] >= p_star"))
}

/// Linearly interpolated location of the `p*` level on nodes `x`.
pub fn profile_crossing(x: &[f64], p: &[f64], p_star: f64) -> Result<f64> {
    if x.len() != p.len() {
        return Err(Error::LengthMismatch(x.len(), p.len()));
    }
    let i = locate_shock_cell(p, p_star)?;
    let w = (p[i] - p_star) / (p[i] - p[i + 1]);
    Ok(x[i] + w * (x[i + 1] - x[i]))
}

/// Edge of the support: the node after the last one with `p > floor`.
pub fn support_edge(x: &[f64], p: &[f64], floor: f64) -> f64 {
    match p.iter().rposition(|&v| v > floor) {
        Some(j) if j + 1 < x.len() => x[j + 1],
        Some(_) => x[x.len() - 1],
        None => x[0],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn uniform_grid_endpoints_and_spacing() {
        let g = Grid::uniform(0.0, 1.0, 25).unwrap();
        assert_eq!(g.node(0), 0.0);
        assert_eq!(g.node(25), 1.0);
        assert_relative_eq!(g.dx(), 0.04);
        for w in g.nodes().windows(2) {
            assert_relative_eq!(w[1] - w[0], 0.04, max_relative = 1e-14);
        }
        assert_eq!(g.nearest_node(0.32), 8);
        assert_eq!(g.nearest_node(-3.0), 0);
        assert_eq!(g.nearest_node(7.0), 25);
    }

    #[test]
    fn rejects_tiny_or_empty_grids() {
        assert!(Grid::uniform(0.0, 1.0, 3).is_err());
        assert!(Grid::uniform(1.0, 1.0, 10).is_err());
    }

    #[test]
    fn shock_cell_examples() {
        // 0-based indices; the 1-based values are one larger.
        assert_eq!(
            locate_shock_cell(&[1.0, 0.8, 0.6, 0.2, 0.0], 0.5).unwrap(),
            2
        );
        assert_eq!(locate_shock_cell(&[1.0, 0.5, 0.4, 0.0], 0.5).unwrap(), 1);
        assert!(locate_shock_cell(&[1.0, 0.9, 0.8], 0.5).is_err());
        assert!(locate_shock_cell(&[0.4, 0.3, 0.0], 0.5).is_err());
    }

    #[test]
    fn crossing_and_support() {
        let x = [0.0, 0.1, 0.2, 0.3, 0.4];
        let p = [1.0, 0.7, 0.3, 0.0, 0.0];
        assert_relative_eq!(
            profile_crossing(&x, &p, 0.5).unwrap(),
            0.15,
            epsilon = 1e-15
        );
        assert_eq!(support_edge(&x, &p, 1e-10), 0.3);
    }
}
