//! Sparse matrix storage, permutations, and generalized semiring products.

pub mod dist;
pub mod matrix;
pub mod perm;
pub mod semiring;

pub use dist::{block_partition, spmv_semiring, spmv_semiring_seq, BlockLayout, DistMatrix};
pub use matrix::SparseMatrix;
pub use perm::{random_permutation, Permutation};
pub use semiring::{MinPlus, OrPattern, PlusTimes, Semiring};

#[cfg(feature = "parallel")]
pub use dist::spmv_semiring_par;
