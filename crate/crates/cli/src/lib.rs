pub mod campaign;
pub mod claims;
pub mod commands;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod report;
