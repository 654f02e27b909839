//! Exact deformation-theory calculus: Maurer-Cartan elements and gauge
//! action over Artin rings, semicosimplicial DGLAs, Thom-Whitney
//! totalization and the cocycle functor `H¹_sc`.

pub mod error;
pub mod artin;
pub mod cech;
pub mod dgla;
pub mod exactalg;
pub mod forms;
pub mod graded;
pub mod h1sc;
pub mod instances;
pub mod io;
pub mod tw;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/dglas.md")]
    mod dglas {}
    #[doc = include_str!("../../../book/src/thom_whitney.md")]
    mod thom_whitney {}
    #[doc = include_str!("../../../book/src/cocycles.md")]
    mod cocycles {}
    #[doc = include_str!("../../../book/src/cech.md")]
    mod cech {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
