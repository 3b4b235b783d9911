use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

/// Role of a symbol. Informational only: arithmetic treats every symbol alike.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Independent,
    Dependent,
    Jet,
    Parameter,
}

/// Interned scalar symbol. Ids follow creation order and define the term order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u32);

struct Interner {
    names: Vec<&'static str>,
    kinds: Vec<SymbolKind>,
    by_name: HashMap<&'static str, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| {
        RwLock::new(Interner {
            names: Vec::new(),
            kinds: Vec::new(),
            by_name: HashMap::new(),
        })
    })
}

impl Symbol {
    /// Returns the symbol with this name, creating it with `kind` if it does not exist yet.
    pub fn new(name: &str, kind: SymbolKind) -> Symbol {
        if let Some(s) = Symbol::lookup(name) {
            return s;
        }
        let mut guard = interner().write().unwrap_or_else(|e| e.into_inner());
        if let Some(&id) = guard.by_name.get(name) {
            return Symbol(id);
        }
        let id = guard.names.len() as u32;
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        guard.names.push(leaked);
        guard.kinds.push(kind);
        guard.by_name.insert(leaked, id);
        Symbol(id)
    }

    pub fn param(name: &str) -> Symbol {
        Symbol::new(name, SymbolKind::Parameter)
    }

    pub fn lookup(name: &str) -> Option<Symbol> {
        let guard = interner().read().unwrap_or_else(|e| e.into_inner());
        guard.by_name.get(name).map(|&id| Symbol(id))
    }

    pub fn name(self) -> &'static str {
        let guard = interner().read().unwrap_or_else(|e| e.into_inner());
        guard.names[self.0 as usize]
    }

    pub fn kind(self) -> SymbolKind {
        let guard = interner().read().unwrap_or_else(|e| e.into_inner());
        guard.kinds[self.0 as usize]
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_idempotent() {
        let a = Symbol::new("sym_test_a", SymbolKind::Parameter);
        let b = Symbol::new("sym_test_a", SymbolKind::Jet);
        assert_eq!(a, b);
        assert_eq!(a.kind(), SymbolKind::Parameter);
        assert_eq!(a.name(), "sym_test_a");
    }
}
