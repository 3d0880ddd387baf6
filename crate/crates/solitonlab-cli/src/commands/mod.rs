pub mod bt;
pub mod charges;
pub mod evolve;
pub mod glm;
pub mod laxcheck;
pub mod soliton;
pub mod verify;
