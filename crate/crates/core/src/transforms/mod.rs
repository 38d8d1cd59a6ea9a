//! Transformations of boundary triples: fractional linear transforms of an
//! ordinary triple, `D`-boundary triples, quasi-selfadjoint contractions and
//! `π`-symmetric operators of class (LP).

pub mod dbt;
pub mod flt;
pub mod lp;
pub mod qsc;
