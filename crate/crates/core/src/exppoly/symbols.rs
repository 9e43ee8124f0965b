//! Formal symbol tables for the exponential-polynomial algebra.
//!
//! A table declares three kinds of symbols over one commutative group:
//!
//! * additive symbols `a` with `a(x∘y) = a(x) + a(y)` (called logarithmic
//!   when the group operation is multiplication — formally identical),
//! * exponential symbols `m` with `m(x∘y) = m(x)·m(y)`; the identically-one
//!   exponential is always available as the empty exponent vector,
//! * symmetric biadditive symbols `B`, contributing a diagonal atom
//!   `B(x,x)` and a cross atom `B(x,y)` with the expansion rule
//!   `B(x∘y, x∘y) = B(x,x) + 2B(x,y) + B(y,y)`.
//!
//! A biadditive symbol may be linked to an additive one, representing the
//! composite `(x,y) ↦ a(x·y)` of an additive function with the codomain
//! product; that link is what lets residuals of shapes with `α(x·y)` on an
//! additive domain stay exact. A symbol may also be flagged as the identity
//! embedding of the domain into the codomain field, which is how the
//! variable `x` itself enters the algebra.

use std::fmt;
use std::sync::Arc;

macro_rules! id_type {
    ($name:ident) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u16);
    };
}

id_type!(AddId);
id_type!(ExpId);
id_type!(BiaddId);

/// Which equation variable a one-variable symbol has been instantiated at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarCopy {
    X,
    Y,
}

impl VarCopy {
    pub fn var_name(self) -> &'static str {
        match self {
            VarCopy::X => "x",
            VarCopy::Y => "y",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct AddSym {
    name: String,
    embedding: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ExpSym {
    name: String,
    embedding: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct BiaddSym {
    name: String,
    /// Set when this symbol denotes `(x,y) ↦ a(x·y)` for the additive
    /// symbol `a`.
    from_additive: Option<AddId>,
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
struct TableInner {
    additive: Vec<AddSym>,
    exponential: Vec<ExpSym>,
    biadditive: Vec<BiaddSym>,
}

/// Immutable, cheaply clonable symbol table. Two tables are interchangeable
/// exactly when their declared symbols agree.
#[derive(Clone)]
pub struct SymbolTable {
    inner: Arc<TableInner>,
}

impl PartialEq for SymbolTable {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}

impl Eq for SymbolTable {}

impl fmt::Debug for SymbolTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolTable")
            .field("additive", &self.inner.additive.iter().map(|s| &s.name).collect::<Vec<_>>())
            .field(
                "exponential",
                &self.inner.exponential.iter().map(|s| &s.name).collect::<Vec<_>>(),
            )
            .field(
                "biadditive",
                &self.inner.biadditive.iter().map(|s| &s.name).collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Builder for [`SymbolTable`].
#[derive(Default)]
pub struct SymbolTableBuilder {
    inner: TableInner,
}

impl SymbolTableBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn additive(&mut self, name: &str) -> AddId {
        self.inner.additive.push(AddSym { name: name.to_string(), embedding: false });
        AddId((self.inner.additive.len() - 1) as u16)
    }

    /// The identity embedding of an additive domain into the codomain
    /// field: the symbol stands for `x` itself.
    pub fn additive_embedding(&mut self) -> AddId {
        self.inner.additive.push(AddSym { name: "x".to_string(), embedding: true });
        AddId((self.inner.additive.len() - 1) as u16)
    }

    pub fn exponential(&mut self, name: &str) -> ExpId {
        self.inner.exponential.push(ExpSym { name: name.to_string(), embedding: false });
        ExpId((self.inner.exponential.len() - 1) as u16)
    }

    /// The identity embedding of a multiplicative domain: exponential,
    /// since `x·y ↦ x·y` is multiplicative.
    pub fn exponential_embedding(&mut self) -> ExpId {
        self.inner.exponential.push(ExpSym { name: "x".to_string(), embedding: true });
        ExpId((self.inner.exponential.len() - 1) as u16)
    }

    pub fn biadditive(&mut self, name: &str) -> BiaddId {
        self.inner.biadditive.push(BiaddSym { name: name.to_string(), from_additive: None });
        BiaddId((self.inner.biadditive.len() - 1) as u16)
    }

    /// Declares `(x,y) ↦ a(x·y)` as a biadditive symbol tied to `a`.
    pub fn biadditive_of(&mut self, name: &str, a: AddId) -> BiaddId {
        self.inner.biadditive.push(BiaddSym { name: name.to_string(), from_additive: Some(a) });
        BiaddId((self.inner.biadditive.len() - 1) as u16)
    }

    pub fn build(self) -> SymbolTable {
        SymbolTable { inner: Arc::new(self.inner) }
    }
}

impl SymbolTable {
    pub fn builder() -> SymbolTableBuilder {
        SymbolTableBuilder::new()
    }

    pub fn empty() -> SymbolTable {
        SymbolTableBuilder::new().build()
    }

    pub fn additive_name(&self, id: AddId) -> &str {
        &self.inner.additive[id.0 as usize].name
    }

    pub fn exponential_name(&self, id: ExpId) -> &str {
        &self.inner.exponential[id.0 as usize].name
    }

    pub fn biadditive_name(&self, id: BiaddId) -> &str {
        &self.inner.biadditive[id.0 as usize].name
    }

    pub fn is_additive_embedding(&self, id: AddId) -> bool {
        self.inner.additive[id.0 as usize].embedding
    }

    pub fn is_exponential_embedding(&self, id: ExpId) -> bool {
        self.inner.exponential[id.0 as usize].embedding
    }

    /// The biadditive symbol linked to additive `a`, if declared.
    pub fn biadditive_from(&self, a: AddId) -> Option<BiaddId> {
        self.inner
            .biadditive
            .iter()
            .position(|b| b.from_additive == Some(a))
            .map(|i| BiaddId(i as u16))
    }

    /// The unique embedding symbol, if present.
    pub fn embedding_additive(&self) -> Option<AddId> {
        self.inner.additive.iter().position(|s| s.embedding).map(|i| AddId(i as u16))
    }

    pub fn embedding_exponential(&self) -> Option<ExpId> {
        self.inner.exponential.iter().position(|s| s.embedding).map(|i| ExpId(i as u16))
    }

    pub fn additive_count(&self) -> usize {
        self.inner.additive.len()
    }

    pub fn exponential_count(&self) -> usize {
        self.inner.exponential.len()
    }

    pub fn biadditive_count(&self) -> usize {
        self.inner.biadditive.len()
    }
}
