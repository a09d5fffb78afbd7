pub mod context;
pub mod eval;
pub mod ger;
pub mod tagged;
pub mod vocab;

pub use tagged::TaggedSet;
