//! Ordered cycles through four vertices of highly connected graphs.
//!
//! Every step of the construction either returns a checkable object or
//! hands a strictly better intermediate structure to the next step.
//! Checkable objects include ordered cycles, two-path linkages and 3-planar
//! witnesses. A step that does neither reports a [`pipeline::GapError`]
//! carrying a replayable debug bundle.

pub mod certificate;
pub mod connectivity;
pub mod enumerate;
pub mod generate;
pub mod graph;
pub mod io;
pub mod linkage;
pub mod oracle;
pub mod pipeline;
pub mod planarity;
pub mod separating;
pub mod skeleton;
pub mod three_planar;
pub mod walk;

pub use graph::{Cycle, Graph, GraphError, Inclusivity, Orientation, Path, VertexId};
