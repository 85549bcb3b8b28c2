#![allow(dead_code)]

pub mod dec;
pub mod gen;
pub mod lifecycle;
pub mod realize;
pub mod table;
