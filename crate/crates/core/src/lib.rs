//! Exact decision procedures for linking line segments into simple polygons
//! and chains, and the gadget compiler that turns interior-disjoint
//! axis-parallel families into disjoint instances with four orientations.

pub mod corpus;
pub mod error;
pub mod gadget;
pub mod geom;
pub mod instance;
pub mod linker;
pub mod verify;
pub mod visibility;

pub use error::{GeomError, InstanceError, LinkError, TransformError, VerifyError};
pub use geom::{Point, Rat, Segment};
pub use instance::{Class, EndRef, Incidence, SegmentFamily, Variant};
pub use linker::{Decision, LinkMode, Linking};
