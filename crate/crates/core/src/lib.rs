//! Combinatorial workbench for n-ordinals, their quasibijection categories,
//! braid words, finite operads and Fox–Neuwirth strata.

pub mod braid;
pub mod cli;
pub mod maps;
pub mod operad;
pub mod ordinal;
pub mod perm;
pub mod quasicat;
pub mod strata;
