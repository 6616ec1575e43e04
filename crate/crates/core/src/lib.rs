//! Online string index answering most-recent (rightmost) longest-match
//! queries after every appended symbol, in time proportional to the pattern
//! length. An augmented Ukkonen suffix tree keeps, per link-tree node, a
//! hint to the most recently reoccurred string in its subtree; queries walk
//! the suffix-link chain collecting those hints. Supports a sliding-window
//! mode and a deferred-update LZ factorizer.

pub mod arena;
mod bands;
mod counters;
mod order;
mod text;

pub mod cli;
pub mod gen;
pub mod lz;
pub mod oracle;

mod link_tree;
mod query;
mod tree;
mod window;

pub use counters::CounterSet;
pub use query::MatchResult;
pub use tree::{
    ActivePoint, EdgeHandle, ExtendReport, Index, IndexError, Locus, NodeHandle,
};
