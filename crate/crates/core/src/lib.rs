pub mod grothendieck;
pub mod linalg;
pub mod module;
pub mod weight;
pub mod spin;
pub mod jordan;
pub mod cohomology;
pub mod zero_ses;
pub mod ndiff;
pub mod triangle;
pub mod fuzz;
pub mod analysis;
pub mod source;
pub mod report;
pub mod verify;
pub mod depth;
