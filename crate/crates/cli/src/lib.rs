pub mod manifest;
pub mod ops;
pub mod service;
