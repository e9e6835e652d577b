pub mod error;
pub mod exactpoly;
pub mod linalg;
pub mod report;
pub mod tensor;
pub mod bundle;
pub mod graded;
pub mod lie2;
pub mod poisson;
pub mod matched;
pub mod courant;
pub mod schema;
pub mod corpus;
