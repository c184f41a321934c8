//! Quadrature rules on `[0, 1]`.

use crate::{Error, Result};

/// Nodes and positive weights on `[0, 1]` with weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::InvalidInput(format!(
                "grid needs matching nonempty nodes and weights, got {} and {}",
                nodes.len(),
                weights.len()
            )));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) || nodes.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidInput("nodes must be strictly increasing within [0, 1]".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        let total = neumaier_sum(&weights);
        if (total - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidInput(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self { nodes, weights })
    }

    /// Composite midpoint rule with `m` cells.
    pub fn midpoint(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("midpoint rule needs at least one cell".into()));
        }
        let h = 1.0 / m as f64;
        let nodes = (0..m).map(|i| (i as f64 + 0.5) * h).collect();
        Self::new(nodes, vec![h; m])
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Compensated summation.
pub fn neumaier_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Composite Simpson rule on `[a, b]` with `intervals` subintervals (rounded up to even).
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = (intervals.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_grid_invariants() {
        let g = QuadratureGrid::midpoint(7).unwrap();
        assert_eq!(g.len(), 7);
        assert!((neumaier_sum(g.weights()) - 1.0).abs() <= 1e-14);
        assert!(QuadratureGrid::midpoint(4096).is_ok());
        assert!(QuadratureGrid::midpoint(0).is_err());
        assert!(QuadratureGrid::new(vec![0.5, 0.2], vec![0.5, 0.5]).is_err());
        assert!(QuadratureGrid::new(vec![0.2, 0.5], vec![0.6, 0.6]).is_err());
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 3);
        assert!((v - (4.0 - 4.0 + 2.0)).abs() < 1e-14);
    }
}
