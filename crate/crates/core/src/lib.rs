#![allow(clippy::needless_range_loop, clippy::mutable_key_type)]

pub mod arith;
pub mod error;
pub mod group;
pub mod cohomology;
pub mod rep;
pub mod twisted;
pub mod motives;
pub mod catalog;
pub mod measures;
pub mod selftest;
pub mod cli;
