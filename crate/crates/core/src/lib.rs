pub mod constraints;
pub mod corpus;
pub mod drawing;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod pipeline;
pub mod structures;
pub mod svg;
pub mod transform;
pub mod xorsat;
