//! Edge conductances for first-order walks.
//!
//! A conductance only ever looks at the degrees of the two endpoints, which is
//! what keeps the resulting walk invariant under vertex re-indexing.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::Graph;

type DegreeFn = dyn Fn(usize, usize) -> f64 + Send + Sync;

#[derive(Clone)]
pub enum Conductance {
    /// `c(u, v) = 1`: the uniform walk.
    Constant,
    /// Minimum degree local rule, `c(u, v) = 1 / min(deg u, deg v)`.
    Mdlr,
    /// `c(u, v) = f(deg u, deg v)`.
    DegreeRule(Arc<DegreeFn>),
}

impl Conductance {
    pub fn degree_rule(f: impl Fn(usize, usize) -> f64 + Send + Sync + 'static) -> Self {
        Conductance::DegreeRule(Arc::new(f))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Conductance::Constant => "uniform",
            Conductance::Mdlr => "mdlr",
            Conductance::DegreeRule(_) => "degree-rule",
        }
    }

    /// Weight from the endpoint degrees alone.
    #[inline]
    pub fn from_degrees(&self, du: usize, dv: usize) -> f64 {
        match self {
            Conductance::Constant => 1.0,
            Conductance::Mdlr => 1.0 / du.min(dv) as f64,
            Conductance::DegreeRule(f) => f(du, dv),
        }
    }

    /// Conductance of the edge `(u, v)` in `g`.
    pub fn weight(&self, g: &Graph, u: usize, v: usize) -> Result<f64> {
        g.check_vertex(u)?;
        g.check_vertex(v)?;
        if !g.has_edge(u, v) {
            return Err(Error::NotAnEdge(u, v));
        }
        let w = self.from_degrees(g.degree(u), g.degree(v));
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::InvalidConductance(w));
        }
        Ok(w)
    }
}

impl fmt::Debug for Conductance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Free-function form of [`Conductance::weight`].
pub fn conductance(g: &Graph, kind: &Conductance, u: usize, v: usize) -> Result<f64> {
    kind.weight(g, u, v)
}
