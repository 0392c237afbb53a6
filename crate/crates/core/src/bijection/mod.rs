//! Explicit bijections: the hat operator and the inverse of `out^{σ,σ̂}`,
//! the map `α` from `[132`-avoiders to partial permutations, the map `φ`
//! between partial permutations, and the swap/delete maps behind the
//! Catalan triangle recurrence.

mod alpha;
mod hat;
mod phi;
mod triangle;

pub use alpha::{alpha, alpha_inverse};
pub use hat::{hat, hat_machine, inverse_out_hat};
pub use phi::{phi, phi_inverse};
pub use triangle::{
    classify_triangle, is_triangle_member, triangle_delete, triangle_delete_inverse, triangle_swap,
    TriangleClass, TriangleSubset,
};
