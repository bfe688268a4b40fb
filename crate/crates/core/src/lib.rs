pub mod arith;
pub mod series;
pub mod linalg;
pub mod fgl;
pub mod graded;
pub mod report;
pub mod bialgebra;
pub mod theta;
pub mod weights;
pub mod acceptance;
pub mod cli;
