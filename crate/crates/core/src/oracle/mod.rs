//! Independent checks: an explicit model of the graph-embedding module of
//! `f^(-alpha)`, its V-filtration spans, a second route to the Hodge ideals,
//! identity checks selected by name, and a Newton polyhedron multiplier ideal.

mod graph;
mod identities;
mod newton;
mod span;

pub use graph::{apply_theta_poly, graph_act, unit_relations_hold, GraphContext, GraphElement};
pub use identities::{lookup, registry, IdentityCheck, OracleContext, OracleVerdict};
pub use newton::{newton_multiplier, newton_multiplier_left, NewtonPolyhedron};
pub use span::{is_zero_vec, GraphOp, SpanBasis, TruncationBudget, Window, WindowVec};

use crate::arith::UniPoly;
use crate::error::Result;
use crate::hodge::{canonical_module_form, CanonicalForm};
use crate::weyl::FractionElement;

/// Index-0 projections of `V^0 ∩ F_k^(t-ord)` within the window.
pub fn v0_projections(g: &GraphContext, beta: &UniPoly, k: u32, budget: TruncationBudget) -> Result<Vec<FractionElement>> {
    let w = Window::new(g, budget);
    let v0 = w.v_can_span(0, beta)?;
    Ok(v0.low_part(k).iter().map(|v| w.project0(v)).filter(|u| !u.is_zero()).collect())
}

/// The Hodge module at step `k` computed from the V-filtration: fractions of
/// pole above `k + 1` are reported as an error.
pub fn hodge_via_v0(g: &GraphContext, beta: &UniPoly, k: u32, budget: TruncationBudget) -> Result<CanonicalForm> {
    let gens = v0_projections(g, beta, k, budget)?;
    canonical_module_form(&g.ctx, &gens, k + 1, budget.d)
}
