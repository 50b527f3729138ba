//! Power-ordered arborescences over embeddings.
//!
//! Entities (words, vertices) come with a vector and a positive *power*.
//! They are inserted into a tree one by one, most powerful first by default,
//! and each new entity attaches to the existing node that maximizes a blend
//! of closeness and power. The resulting parent edges read as
//! child → more general parent.
//!
//! ```
//! use orient::builder::{build_arborescence, BuildConfig};
//! use orient::embedding::EmbeddingSet;
//! use orient::power::zipf_power;
//!
//! let e = EmbeddingSet::new(
//!     vec!["animal".into(), "dog".into(), "puppy".into()],
//!     vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.2, 0.1]],
//! )?;
//! let tree = build_arborescence(&e, &zipf_power(e.len())?, &BuildConfig::default())?;
//! assert_eq!(tree.parent_entity(2), Some(1));
//! # Ok::<(), orient::Error>(())
//! ```
//!
//! Layout: [`power`] computes powers, [`builder`] grows the tree (with
//! [`nnindex`] as the exact accelerator), [`eval`] and [`lca`] score it, and
//! [`io`] / [`cli`] handle files and the `orient` binary.

pub mod builder;
pub mod cli;
pub mod distance;
pub mod embedding;
pub mod error;
pub mod eval;
pub mod io;
pub mod lca;
pub mod nnindex;
pub mod power;
pub mod relations;
pub mod score;
pub mod subtrees;
pub mod synthetic;
pub mod tree;

pub use builder::{build_arborescence, BuildConfig, InsertionOrder, ParentRule};
pub use distance::{distance, DistanceKind};
pub use embedding::EmbeddingSet;
pub use error::{Error, Result};
pub use eval::{edge_accuracy, EvalReport};
pub use lca::LcaIndex;
pub use nnindex::BallTree;
pub use power::PowerAssignment;
pub use relations::{RelationSet, ResolvedRelations};
pub use tree::Arborescence;
