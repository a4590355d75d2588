pub mod audiosteg;
pub mod bitcodec;
pub mod error;
pub mod filesteg;
pub mod graphsteg;
pub mod imagesteg;
pub mod netsteg;
pub mod steganalysis;

pub use error::{Error, Result};
