pub mod linalg;
pub mod algebra;
pub mod rep;
pub mod resolve;
pub mod coresolve;
pub mod dims;
pub mod verify;
