pub mod bivariate;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod laguerre;
pub mod operator;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod series;
pub mod umbral;
pub mod verify;

pub use error::{Error, Result};
pub use operator::{NormalForm, OperatorMatrix, Precision};
pub use poly::Polynomial;
pub use scalar::{gbinom, qbinom, Mode, Rational, Scalar};
pub use series::TruncatedSeries;
