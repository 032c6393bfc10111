//! Mining engines an honest service provider runs, and the possible-world
//! enumeration used as a brute-force reference.

mod apriori;
mod normal;
mod query;
mod support;
mod worlds;

pub(crate) use apriori::evaluate;
pub use apriori::{maximal_checksets, maximal_itemsets, mine, MinedValue, MiningResult};
pub use normal::{normal_approx_frequentness, NormalModel};
pub use query::{MiningMode, MiningQuery};
pub(crate) use support::{itemset_probs, p_less_from_probs, tail_via_p_less};
pub use support::{
    expected_support, frequentness_probability, p_less_dp, support_distribution, variance,
    SupportDistribution,
};
pub use worlds::{enumerate_worlds, visit_worlds, PossibleWorld, MAX_WORLD_INSTANCES};
