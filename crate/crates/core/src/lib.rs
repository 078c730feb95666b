//! Lines on real del Pezzo surfaces of degree 1 and the lattice data behind them.

pub mod dynkin;
pub mod hasse;
pub mod lattice;
pub mod pin;
pub mod qmat;
pub mod real;
pub mod roots;
pub mod snf;
pub mod tritangent;
pub mod verify;
