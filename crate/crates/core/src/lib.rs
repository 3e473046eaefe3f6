#![cfg_attr(not(test), no_std)]
//! Finite partial groups and localities.
//!
//! Everything is index based: elements of a group or partial group are
//! `0..n`, sets of elements are [`ElemSet`] bit sets, and the identity is
//! whatever the structure reports (always 0 for groups built here).

extern crate alloc;

pub mod bitset;
pub mod group;
pub mod partial;
pub mod perm;
pub mod locality;
pub mod normal;
pub mod products;
pub mod report;
pub mod zoo;

pub use bitset::ElemSet;
pub use group::{generate_group, FiniteGroup, GroupError, GroupHom, Subgroup};
pub use perm::Perm;
