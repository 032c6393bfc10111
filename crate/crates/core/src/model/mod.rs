//! Uncertain transaction databases, itemsets, the UDB text format,
//! synthetic generation and probability transforms.

mod database;
mod format;
mod itemset;
mod synthetic;
mod transform;
mod weights;

pub(crate) use database::ItemId;
pub use database::{itemset_txn_prob, Transaction, UncertainDatabase};
pub use format::{parse_database, serialize_database, EMPTY_TRANSACTION, UDB_HEADER};
pub use itemset::{Item, Itemset, MAX_LATTICE_ITEMS};
pub use synthetic::{generate_synthetic, MAX_SYNTHETIC_ITEMS};
pub use transform::{scale_transform, squared_transform};
pub use weights::{WeightAssignment, WeightScheme};
