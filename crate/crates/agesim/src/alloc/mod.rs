//! Power and RB allocation: the feasible action space, the
//! violation-probability acquisition objective, the online learning loop,
//! and the random baseline.

mod action;
mod policy;

pub use action::{ActionSpace, ActionSpaceError, PowerAction};
pub use policy::{
    acquisition, random_policy, select_action, violation_probability, Agent, AgentConfig,
    InputNormalizer, StepOutcome,
};
