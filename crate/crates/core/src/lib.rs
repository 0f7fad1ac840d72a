pub mod characters;
pub mod error;
pub mod kappa;
pub mod lie;
pub mod linalg;
pub mod moduli;
pub mod oracle;
pub mod piecewise;
pub mod poly;
pub mod polytope;
pub mod quadrature;
pub mod rational;
pub mod symmetric;

pub use error::{Error, Result};
pub use lie::{GroupSpec, RootSystem};
pub use rational::{CartanVec, Surd, Q};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/roots.md")]
    pub mod roots {}
    #[doc = include_str!("../../../book/src/kappa.md")]
    pub mod kappa {}
    #[doc = include_str!("../../../book/src/characters.md")]
    pub mod characters {}
    #[doc = include_str!("../../../book/src/volumes.md")]
    pub mod volumes {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub mod oracle {}
    #[doc = include_str!("../../../book/src/conventions.md")]
    pub mod conventions {}
}
