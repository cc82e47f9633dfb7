//! Orderability: bounded semigroup closures, a sign-vector refuter for
//! left and bi-orderability, and the power-series bi-order on `F(a, b)`.

pub mod closure;
pub mod magnus;

pub use closure::{
    find_refuting_tuple, normal_sgr_closure, olf_refute, sgr_closure, ClosureOps, ClosureResult, DiagramOps,
    FormOps, FreeReduced, OlfVerdict, OrderError, OrderMode, PresentationOps, SignCertificate, Step,
};
pub use magnus::{certified_degree, magnus_compare, magnus_expand, positive_cone_member, MagnusSeries, Monomial};
