//! Exact local toric periods of supercuspidal representations of `GL₂(Q_p)`.
//!
//! ```
//! use toric_period::characters::notation::parse_character;
//! use toric_period::induction::SupercuspidalData;
//! use toric_period::padic::FieldDescriptor;
//! use toric_period::period::{period_integral, EmbeddingSpec, IntegralOptions, TestVectorSpec};
//! use toric_period::quadext::QuadExtDescriptor;
//!
//! # fn main() -> toric_period::Result<()> {
//! let e = QuadExtDescriptor::new(FieldDescriptor::new(3, 14)?, -3)?;
//! let theta = parse_character(e, "4:1/4:-1,0=1/2;1,1=2/3;1,-1=1/3;1,3=1/3")?;
//! let data = SupercuspidalData::classify(&theta)?;
//! let phi = TestVectorSpec::phi0(e.base());
//! let r = period_integral(&data, &theta, &phi, &phi, &EmbeddingSpec::standard(e), &IntegralOptions::default())?;
//! assert!(r.certificate.m_plus_one_equal);
//! println!("{} (certified at m = {})", r.value, r.certificate.m);
//! # Ok(())
//! # }
//! ```

pub mod characters;
pub mod cyclo;
pub mod error;
pub mod field;
pub mod induction;
pub mod padic;
pub mod period;
pub mod quadext;
pub mod sylvester;
pub mod verify;

pub use error::{Error, Result};
