//! Brown-Gitler modules, Dyer-Lashof extension classes and Ext computations
//! over the mod 2 Steenrod algebra, all in exact F2 linear algebra.

pub mod error;
pub mod f2;
pub mod steenrod;
pub mod amodule;
pub mod brown_gitler;
pub mod dyer_lashof;
pub mod ext;
pub mod chart;
pub mod doc;
pub mod par;
pub mod verify;

pub use error::{BgxError, Result};
