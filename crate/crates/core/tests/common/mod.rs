#![allow(dead_code)]

pub mod agreement;
pub mod grid_oracle;
