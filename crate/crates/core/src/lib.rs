pub mod cli;
pub mod families;
pub mod gog;
pub mod invariants;
pub mod lattice;
pub mod polycyclic;
