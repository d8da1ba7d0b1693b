//! Cross-language schema matching for semi-structured attribute-value
//! records (infoboxes).
//!
//! The library pairs entity types across two languages through
//! cross-language link statistics, scores attribute pairs with translated
//! value similarity, link-structure similarity, and a truncated-SVD
//! co-occurrence correlation, derives synonym sets greedily with an
//! uncertain-match revision phase, and evaluates the result with
//! frequency-weighted precision/recall, macro averages, MAP, and schema
//! overlap. A deterministic synthetic corpus generator provides planted
//! ground truth for end-to-end verification.

pub mod alignment;
pub mod corpus;
pub mod dictionary;
pub mod error;
pub mod evaluation;
pub mod pipeline;
pub mod similarity;
pub mod synth;
pub mod typemap;

pub use error::Error;
