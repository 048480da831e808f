pub mod dc;
pub mod graph;
pub mod monk;
pub mod perm;
pub mod poly;
pub mod schubert;
pub mod witness;
