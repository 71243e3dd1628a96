pub mod arith;
pub mod codefile;
pub mod construct;
pub mod cyclic;
pub mod gf;
pub mod lincode;
pub mod polyring;
pub mod qc;
