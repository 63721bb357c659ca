pub mod analyzer;
pub mod cli;
pub mod io;
pub mod linalg;
pub mod module;
pub mod oracle;
pub mod selftest;
