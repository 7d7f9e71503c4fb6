//! Exact scalars: Gaussian rationals, rational functions of the family
//! parameter, Laurent polynomials and radical t-expressions.

pub mod expr;
pub mod field;
pub mod gauss;
pub mod laurent;
pub mod modp;
pub mod numeric;
pub mod poly;
pub mod ratfunc;
pub mod series;
pub mod texpr;

pub use expr::{parse_gauss, Env, Expr, Value};
pub use field::{Coeff, Field, Ring};
pub use gauss::GaussRat;
pub use laurent::Laurent;
pub use modp::Fp;
pub use poly::Poly;
pub use ratfunc::{ParamRat, RatFunc};
pub use series::{Series, SeriesLimit};
pub use texpr::{Limit, TExpr, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("type error: {0}")]
    Type(String),
}
