//! Partitions, Schubert problems, reductions, enumeration and solution
//! counts.

mod lr;
mod partition;
mod problem;
mod reduction;

pub use lr::{count_in_order, count_solutions, lr_product};
pub use partition::{partitions_in_box, Partition};
pub use problem::{validate_condition, BoxShape, SchubertProblem};
pub use reduction::{
    enumerate_reduced, for_each_reduced, reduce_fully, reduction_step, CountFilter,
    ReductionOutcome,
};

impl SchubertProblem {
    pub fn count_solutions(&self) -> crate::Result<u64> {
        count_solutions(self)
    }
}
