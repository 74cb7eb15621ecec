//! Interned indeterminates with a fixed, name-derived total order.
//!
//! Parameters sort first, then the lattice indices `m1`, `m2`, then the
//! series variables `z1`, `z2`. Within a class names compare by their
//! alphabetic stem and then by numeric suffix, so `a < a1 < a2 < b`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

#[derive(Default)]
struct Interner {
    names: Vec<Arc<str>>,
    ids: HashMap<Arc<str>, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| RwLock::new(Interner::default()))
}

/// An indeterminate, interned by name.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Var(u32);

/// Role of an indeterminate in the ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VarClass {
    Parameter,
    Index,
    Variable,
}

impl Var {
    /// Interns `name`. Panics on an invalid identifier; use
    /// [`Var::try_new`] for untrusted input.
    pub fn new(name: &str) -> Var {
        Var::try_new(name).unwrap_or_else(|| panic!("invalid indeterminate name {name:?}"))
    }

    pub fn try_new(name: &str) -> Option<Var> {
        if !is_identifier(name) {
            return None;
        }
        if let Some(&id) = interner().read().unwrap().ids.get(name) {
            return Some(Var(id));
        }
        let mut table = interner().write().unwrap();
        if let Some(&id) = table.ids.get(name) {
            return Some(Var(id));
        }
        let id = table.names.len() as u32;
        let name: Arc<str> = Arc::from(name);
        table.names.push(name.clone());
        table.ids.insert(name, id);
        Some(Var(id))
    }

    pub fn z1() -> Var {
        Var::new("z1")
    }

    pub fn z2() -> Var {
        Var::new("z2")
    }

    pub fn name(&self) -> Arc<str> {
        interner().read().unwrap().names[self.0 as usize].clone()
    }

    pub fn class(&self) -> VarClass {
        classify(&self.name())
    }

    pub fn is_variable(&self) -> bool {
        self.class() == VarClass::Variable
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn classify(name: &str) -> VarClass {
    match name {
        "z1" | "z2" => VarClass::Variable,
        "m1" | "m2" => VarClass::Index,
        _ => VarClass::Parameter,
    }
}

fn split_suffix(name: &str) -> (&str, Option<u64>) {
    let stem_len = name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (stem, digits) = name.split_at(stem_len);
    (stem, digits.parse().ok())
}

fn compare_names(a: &str, b: &str) -> Ordering {
    let (sa, na) = split_suffix(a);
    let (sb, nb) = split_suffix(b);
    classify(a)
        .cmp(&classify(b))
        .then_with(|| sa.cmp(sb))
        .then_with(|| na.cmp(&nb))
        .then_with(|| a.cmp(b))
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        let table = interner().read().unwrap();
        compare_names(
            &table.names[self.0 as usize],
            &table.names[other.0 as usize],
        )
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Var({})", self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_follows_class_then_natural_name() {
        let mut vars: Vec<Var> = ["z2", "b", "a10", "m1", "a2", "z1", "a", "c1"]
            .iter()
            .map(|n| Var::new(n))
            .collect();
        vars.sort();
        let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["a", "a2", "a10", "b", "c1", "m1", "z1", "z2"]);
    }

    #[test]
    fn interning_is_stable() {
        assert_eq!(Var::new("b1"), Var::new("b1"));
        assert!(Var::try_new("1b").is_none());
        assert!(Var::try_new("").is_none());
        assert!(Var::z1().is_variable());
    }
}
