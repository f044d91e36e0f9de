pub mod error;
pub mod expr;
pub mod field;

pub use error::{Error, ErrorKind, Result};
pub(crate) mod fmt_util;
pub mod kovacic;
pub mod ore;
pub mod solve;
pub mod structure;
pub mod tower;
