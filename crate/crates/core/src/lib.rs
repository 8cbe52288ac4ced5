// SPDX-License-Identifier: Apache-2.0

pub mod arith;
pub mod cli;
pub mod lmfdb;
pub mod pairsearch;
pub mod polyfield;
pub mod qform;
pub mod quadfield;
pub mod table;
