pub mod analytics;
pub mod arith;
pub mod bitset;
pub mod dessentialize;
pub mod error;
pub mod essentials;
pub mod expr;
pub mod oracle;
pub mod order;
pub mod progression;
pub mod report;
pub mod set;
pub mod suite;

pub use error::{Error, Result};
pub use expr::{parse_set_expr, SetExpr};
pub use set::{Eps, EventuallyPeriodicSet};
