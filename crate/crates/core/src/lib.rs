pub mod adjoint;
pub mod constraints;
pub mod engine;
pub mod polyring;
pub mod rootsys;
pub mod scenario;
