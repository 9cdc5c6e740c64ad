pub mod certify;
pub mod check;
pub mod fixpoint;
pub mod iterate;

use rgfp::conditions::Status;

use crate::Outcome;

pub fn outcome(s: Status) -> Outcome {
    match s {
        Status::Pass => Outcome::Pass,
        Status::Fail => Outcome::Fail,
        Status::Inconclusive => Outcome::Inconclusive,
    }
}
