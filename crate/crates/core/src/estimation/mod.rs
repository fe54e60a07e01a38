//! Cardinality and joint estimators.

pub mod cardinality;
pub mod joint;
pub mod optimize;
pub mod special;
