//! Generational slot arenas for tree nodes and edges.
//!
//! Handles are `(index, generation)` pairs so that references retained by
//! auxiliary structures (repr hints, band stacks) can be detected as stale
//! after sliding-window deletions instead of silently aliasing a reused slot.

use std::fmt;
use std::marker::PhantomData;
use std::ops::{Index, IndexMut};

pub struct Handle<T> {
    idx: u32,
    gen: u32,
    _marker: PhantomData<fn() -> T>,
}

impl<T> Handle<T> {
    pub(crate) fn new(idx: u32, gen: u32) -> Self {
        Handle {
            idx,
            gen,
            _marker: PhantomData,
        }
    }

    pub fn index(self) -> usize {
        self.idx as usize
    }
}

impl<T> Clone for Handle<T> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<T> Copy for Handle<T> {}
impl<T> PartialEq for Handle<T> {
    fn eq(&self, other: &Self) -> bool {
        self.idx == other.idx && self.gen == other.gen
    }
}
impl<T> Eq for Handle<T> {}
impl<T> std::hash::Hash for Handle<T> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.idx.hash(state);
        self.gen.hash(state);
    }
}
impl<T> fmt::Debug for Handle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}g{}", self.idx, self.gen)
    }
}

struct Slot<T> {
    gen: u32,
    value: Option<T>,
}

pub struct Arena<T> {
    slots: Vec<Slot<T>>,
    free: Vec<u32>,
    live: usize,
}

impl<T> Default for Arena<T> {
    fn default() -> Self {
        Arena {
            slots: Vec::new(),
            free: Vec::new(),
            live: 0,
        }
    }
}

impl<T> Arena<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn live(&self) -> usize {
        self.live
    }

    pub fn alloc(&mut self, value: T) -> Handle<T> {
        self.live += 1;
        if let Some(idx) = self.free.pop() {
            let slot = &mut self.slots[idx as usize];
            debug_assert!(slot.value.is_none());
            slot.value = Some(value);
            return Handle::new(idx, slot.gen);
        }
        let idx = self.slots.len() as u32;
        self.slots.push(Slot {
            gen: 0,
            value: Some(value),
        });
        Handle::new(idx, 0)
    }

    pub fn remove(&mut self, h: Handle<T>) -> T {
        let slot = &mut self.slots[h.idx as usize];
        assert_eq!(slot.gen, h.gen, "removing stale handle");
        let value = slot.value.take().expect("removing empty slot");
        slot.gen = slot.gen.wrapping_add(1);
        self.free.push(h.idx);
        self.live -= 1;
        value
    }

    pub fn is_live(&self, h: Handle<T>) -> bool {
        self.slots
            .get(h.idx as usize)
            .map_or(false, |s| s.gen == h.gen && s.value.is_some())
    }

    pub fn get(&self, h: Handle<T>) -> Option<&T> {
        let slot = self.slots.get(h.idx as usize)?;
        if slot.gen != h.gen {
            return None;
        }
        slot.value.as_ref()
    }

    /// Iterate live `(handle, value)` pairs in slot order.
    pub fn iter(&self) -> impl Iterator<Item = (Handle<T>, &T)> {
        self.slots.iter().enumerate().filter_map(|(i, s)| {
            s.value
                .as_ref()
                .map(|v| (Handle::new(i as u32, s.gen), v))
        })
    }
}

impl<T> Index<Handle<T>> for Arena<T> {
    type Output = T;
    fn index(&self, h: Handle<T>) -> &T {
        let slot = &self.slots[h.idx as usize];
        assert_eq!(slot.gen, h.gen, "stale handle");
        slot.value.as_ref().expect("dead handle")
    }
}

impl<T> IndexMut<Handle<T>> for Arena<T> {
    fn index_mut(&mut self, h: Handle<T>) -> &mut T {
        let slot = &mut self.slots[h.idx as usize];
        assert_eq!(slot.gen, h.gen, "stale handle");
        slot.value.as_mut().expect("dead handle")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reuse_bumps_generation() {
        let mut a = Arena::new();
        let h1 = a.alloc(1u32);
        a.remove(h1);
        let h2 = a.alloc(2u32);
        assert_eq!(h1.index(), h2.index());
        assert!(!a.is_live(h1));
        assert!(a.is_live(h2));
        assert_eq!(a.get(h1), None);
        assert_eq!(a[h2], 2);
    }
}
