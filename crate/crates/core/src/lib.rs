//! Exact computations with polynomial distributions and foliations on
//! projective space.

pub mod exactalg;
pub mod multical;
pub mod foliation;
pub mod liecoh;
pub mod extsearch;
pub mod singdim;
pub mod pipeline;
