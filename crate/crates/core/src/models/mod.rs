//! Concrete systems: spin chains, the CZY fixtures, the semion channel and group-cocycle MPOs.

pub mod channel;
pub mod czy;
pub mod group;
pub mod spin;

pub use channel::{semion_channel_check, ChannelReport, QuantumChannel};
pub use group::{group_cocycle_mpo, group_prebialgebra, FiniteGroup, GroupPreBialgebra, ThreeCocycle};
pub use spin::{charges, hamiltonian, Charges, Model, SpinChainOperator};
