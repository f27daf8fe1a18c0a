mod classical;
mod quantum;
mod spec;

pub use classical::*;
pub use quantum::*;
pub use spec::*;
