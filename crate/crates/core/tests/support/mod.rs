#![allow(dead_code)]

pub mod brute;
pub mod rational_lp;
