//! Stable marriage with incomplete lists: classic stability, robustness to
//! small preference changes, and near stability.
//!
//! A profile is a set of ranked lists over two sides `U` and `W`. The crate
//! answers three kinds of questions about a matching:
//!
//! * is it stable, and which rotations lead to the other stable matchings
//!   ([`classic`], [`rotation`]);
//! * does it stay stable after any `d` adjacent swaps ([`robust`]);
//! * how few swaps make it stable, counted over all lists or per list
//!   ([`near`]).
//!
//! Every exact method has an exhaustive counterpart in [`oracle`].
//!
//! ```
//! use stabmatch::{generators::gen_example3, classic::u_optimal, matching::is_stable};
//!
//! let p = gen_example3();
//! let m = u_optimal(&p);
//! assert!(is_stable(&p, &m).unwrap());
//! assert_eq!(m.display(&p), "{{a2,b1}}");
//! ```

pub mod classic;
pub mod cli;
pub mod closure;
pub mod error;
pub mod generators;
pub mod io;
pub mod matching;
pub mod near;
pub mod oracle;
pub mod profile;
pub mod query;
pub mod robust;
pub mod rotation;

pub use error::{Error, Result};
pub use matching::Matching;
pub use profile::{AgentId, Profile, Side, SwapDistance, SwapOp};
pub use query::{AnalysisQuery, Mode, Objective};
