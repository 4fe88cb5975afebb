pub mod index;
pub mod syntax;
pub mod pcf;
pub mod machine;
pub mod types;
pub mod checker;
pub mod cli;
