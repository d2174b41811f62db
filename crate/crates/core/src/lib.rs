pub mod green;
pub mod map;
pub mod partition;
pub mod rees;
pub mod semigroup;
pub mod verify;
