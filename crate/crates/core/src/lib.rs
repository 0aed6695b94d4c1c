pub mod eval;
pub mod fol;
pub mod knowledge;
pub mod perturb;
pub mod pipeline;
pub mod probes;
pub mod surface;
pub mod text;
