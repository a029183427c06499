//! Lazified linear minimization: the weak-separation oracle.
//!
//! Given `c`, `x`, a gap estimate `Φ > 0` and accuracy `K >= 1`, the oracle either
//! returns a vertex `y` with `⟨c, x - y⟩ >= Φ/K` or certifies `⟨c, x - z⟩ <= Φ`
//! for every vertex `z`. Cheap candidates are tried first: the current active set,
//! then every vertex the exact LMO has returned earlier in the run.

use indexmap::IndexMap;

use crate::atom::{Atom, AtomKey};
use crate::error::{check_dim, Error, Result};
use crate::regions::FeasibleRegion;
use crate::Point;

#[derive(Clone, Debug)]
pub enum SeparationOutcome {
    /// `⟨c, x - atom⟩ = improvement >= Φ/K`.
    Positive {
        atom: Atom,
        improvement: f64,
        from_cache: bool,
    },
    /// No vertex improves by more than `Φ`; `true_gap = max_z ⟨c, x - z⟩` from the exact LMO.
    Negative { true_gap: f64 },
}

/// Every vertex returned by the exact LMO during a run, in insertion order.
#[derive(Clone, Debug, Default)]
pub struct VertexCache {
    seen: IndexMap<AtomKey, Atom>,
    cap: Option<usize>,
}

impl VertexCache {
    /// `cap` bounds the size by evicting the oldest entries; `None` is unbounded.
    pub fn new(cap: Option<usize>) -> Self {
        VertexCache {
            seen: IndexMap::new(),
            cap,
        }
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }

    pub fn contains(&self, key: &AtomKey) -> bool {
        self.seen.contains_key(key)
    }

    /// Returns `true` if the atom was new.
    pub fn insert(&mut self, atom: Atom) -> bool {
        if self.seen.contains_key(atom.key()) {
            return false;
        }
        self.seen.insert(atom.key().clone(), atom);
        if let Some(cap) = self.cap {
            while self.seen.len() > cap {
                self.seen.shift_remove_index(0);
            }
        }
        true
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.seen.values()
    }
}

/// Weak-separation oracle state for one solver run.
#[derive(Clone, Debug, Default)]
pub struct WeakSeparation {
    cache: VertexCache,
    lmo_calls: u64,
    cache_hits: u64,
}

impl WeakSeparation {
    pub fn new(cache_cap: Option<usize>) -> Self {
        WeakSeparation {
            cache: VertexCache::new(cache_cap),
            lmo_calls: 0,
            cache_hits: 0,
        }
    }

    pub fn cache(&self) -> &VertexCache {
        &self.cache
    }

    pub fn lmo_calls(&self) -> u64 {
        self.lmo_calls
    }

    pub fn cache_hits(&self) -> u64 {
        self.cache_hits
    }

    /// Calls the exact LMO, counting the call and caching the result.
    pub fn exact(&mut self, region: &dyn FeasibleRegion, c: &Point) -> Result<Atom> {
        let atom = region.lmo(c)?;
        self.lmo_calls += 1;
        self.cache.insert(atom.clone());
        Ok(atom)
    }

    /// Scans `active` first, then the cache, then falls back to the exact LMO.
    pub fn separate(
        &mut self,
        region: &dyn FeasibleRegion,
        active: &[Atom],
        c: &Point,
        x: &Point,
        phi: f64,
        accuracy: f64,
    ) -> Result<SeparationOutcome> {
        check_dim(region.dim(), c.len())?;
        check_dim(region.dim(), x.len())?;
        if !(phi > 0.0) {
            return Err(Error::InvalidInput(format!("gap estimate must be positive, got {phi}")));
        }
        if !(accuracy >= 1.0) {
            return Err(Error::InvalidInput(format!("accuracy must be >= 1, got {accuracy}")));
        }
        let cx = c.dot(x);
        let threshold = phi / accuracy;
        let candidates = active.iter().chain(self.cache.iter());
        let mut hit = None;
        for atom in candidates {
            let improvement = cx - atom.dot(c);
            if improvement >= threshold {
                hit = Some((atom.clone(), improvement));
                break;
            }
        }
        if let Some((atom, improvement)) = hit {
            self.cache_hits += 1;
            return Ok(SeparationOutcome::Positive {
                atom,
                improvement,
                from_cache: true,
            });
        }
        let best = self.exact(region, c)?;
        let gap = cx - best.dot(c);
        if gap >= threshold {
            Ok(SeparationOutcome::Positive {
                atom: best,
                improvement: gap,
                from_cache: false,
            })
        } else {
            Ok(SeparationOutcome::Negative { true_gap: gap })
        }
    }
}
