//! Contact manifolds sampled on charts: forms, connections and
//! characteristic forms.

pub mod charclass;
pub mod connection;
pub mod forms;
pub mod s3;

pub use charclass::{a_hat, bott, c1, ch_odd, todd};
pub use connection::{j0, ConnData, MatForm};
pub use forms::{Field, FormCoeff, Grid};
pub use s3::{point_fiber, std_s3, std_s3_with, Atlas, ContactChart, ValuedForm};
