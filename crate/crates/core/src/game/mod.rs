//! Domain types shared by every other module: tabular game models, policies,
//! trajectories, the public-history tree, and finite model classes.

mod class;
mod history;
mod model;
mod policy;
mod trajectory;

pub use class::{ModelClass, ModelClassJson};
pub use history::{enumerate_histories, HistoryNode, HistoryTree, DEFAULT_NODE_BUDGET};
pub use model::{FomgModel, ModelJson, PomgModel};
pub use policy::{HistoryPolicy, MarkovJointPolicy, MarkovPolicy};
pub use trajectory::{FomgStep, FomgTrajectory, PomgStep, PomgTrajectory};
