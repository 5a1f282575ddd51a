// Copyright 2026 The mesq Authors
// SPDX-License-Identifier: Apache-2.0

//! Multimode entangled states, squeezing and SU(1,1) algebra on two
//! independent engines.
//!
//! The [`fock`] engine works with truncated photon-number bases and checks
//! operator identities coefficient by coefficient. The [`gaussian`] engine
//! tracks means and covariances exactly and scales to any mode count. The
//! remaining modules build the physics on top of both.

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod linalg;
pub mod states;

pub use error::{Error, Result};
