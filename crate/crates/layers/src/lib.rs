//! Convex layers of planar point sets: file formats, oracles, generators,
//! plotting and benchmarks around [`onion_core`].

pub mod bench;
pub mod io;
pub mod svg;
pub mod testkit;
pub mod verify;

pub use onion_core;

use onion_core::Schedule;
use rayon::prelude::*;

/// Runs the per-tree steps of each peel iteration on the rayon pool.
#[derive(Clone, Copy, Debug, Default)]
pub struct Parallel;

impl Schedule for Parallel {
    fn map<T, R, F>(&self, items: &mut [T], f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(usize, &mut T) -> R + Sync,
    {
        items.par_iter_mut().enumerate().map(|(i, t)| f(i, t)).collect()
    }
}
