//! Generalized Bernoulli-Euler numbers `K_n^l` of multiboundary singularities
//! `B_n^l`: exact computation, identity checks, and two independent oracles
//! (enumeration of morsification types, and region counts of `B_n^2` fibers).

pub mod euler;
pub mod exact;
pub mod fiber;
pub mod genfun;
pub mod oracle;
pub mod report;
pub mod suites;
pub mod table;
