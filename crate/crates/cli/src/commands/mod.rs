pub mod balance;
pub mod nmsrd;
pub mod plan;
pub mod simulate;
