//! Buchberger's algorithm for left ideals of the Weyl algebra, elimination,
//! filtration intersection, and commutative syzygies via a module Groebner basis.

mod buchberger;
mod module;
mod orders;

pub use buchberger::{
    buchberger, buchberger_with, commutative_groebner, eliminate, filtration_intersect, normal_form, GbOptions,
    LeftIdealBasis,
};
pub use module::{commutative_syzygies, module_intersection, ModuleGb, SyzygyBasis};
pub use orders::{MonomialOrder, OrderKind};
