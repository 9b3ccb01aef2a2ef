pub mod cli;
pub mod extremal;
pub mod geom;
pub mod legendre;
pub mod oracle;
pub mod poly;
pub mod ruled;
pub mod twist;
