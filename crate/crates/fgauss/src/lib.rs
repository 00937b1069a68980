// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

//! File formats, the randomized verification suite and benchmarks for the
//! `fgauss` command-line tool.

pub mod bench;
pub mod io;
pub mod verify;
