pub mod algebra;
pub mod dem;
pub mod field;
pub mod revocation;
pub mod siff;
pub mod subtree;
pub mod wire;
pub mod scheme;

pub use algebra::{G1Element, GtElement, Scalar};

/// SIFF polynomial over the pairing scalar field.
pub type Siff = siff::SiffPolynomial<Scalar>;
/// Element of the revocation group.
pub type RevocationElement = revocation::GroupElement;
