//! Cayley tables of finite binary systems.

use crate::error::{QgError, Result};

/// A finite magma on the elements `0..order`, stored as a row-major Cayley
/// table where `table[a * n + x] = a·x`.
///
/// Left and right division tables and the two-sided unit are derived once,
/// at construction, by scanning the table. They are present exactly when the
/// corresponding axiom holds. The value is immutable afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMagma {
    pub(crate) order: usize,
    pub(crate) table: Vec<usize>,
    /// `ldiv[a * n + b] = a\b`, present iff every row is a permutation.
    pub(crate) ldiv: Option<Vec<usize>>,
    /// `rdiv[a * n + b] = b/a`, present iff every column is a permutation.
    pub(crate) rdiv: Option<Vec<usize>>,
    pub(crate) unit: Option<usize>,
}

impl FiniteMagma {
    /// Builds a magma from nested rows.
    pub fn from_table(order: usize, rows: &[Vec<usize>]) -> Result<Self> {
        if rows.len() != order {
            return Err(QgError::shape(
                "table",
                format!("expected {order} rows, found {}", rows.len()),
            ));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(QgError::shape(
                    format!("row {r}"),
                    format!("expected {order} entries, found {}", row.len()),
                ));
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(order, flat)
    }

    /// Builds a magma from a row-major table of length `order²`.
    pub fn from_flat(order: usize, table: Vec<usize>) -> Result<Self> {
        if order == 0 {
            return Err(QgError::shape("order", "order must be at least 1"));
        }
        if table.len() != order * order {
            return Err(QgError::shape(
                "table",
                format!("expected {} entries, found {}", order * order, table.len()),
            ));
        }
        if let Some(i) = table.iter().position(|&v| v >= order) {
            return Err(QgError::cell(
                i / order,
                i % order,
                format!("entry {} is outside 0..{order}", table[i]),
            ));
        }
        let n = order;

        let ldiv = (|| {
            let mut ldiv = vec![usize::MAX; n * n];
            for a in 0..n {
                for x in 0..n {
                    let slot = &mut ldiv[a * n + table[a * n + x]];
                    if *slot != usize::MAX {
                        return None;
                    }
                    *slot = x;
                }
            }
            Some(ldiv)
        })();

        let rdiv = (|| {
            let mut rdiv = vec![usize::MAX; n * n];
            for a in 0..n {
                for y in 0..n {
                    let slot = &mut rdiv[a * n + table[y * n + a]];
                    if *slot != usize::MAX {
                        return None;
                    }
                    *slot = y;
                }
            }
            Some(rdiv)
        })();

        let unit = (0..n).find(|&e| (0..n).all(|g| table[e * n + g] == g && table[g * n + e] == g));

        Ok(FiniteMagma {
            order,
            table,
            ldiv,
            rdiv,
            unit,
        })
    }

    /// Builds a magma from a multiplication function.
    pub fn from_fn(order: usize, mut mul: impl FnMut(usize, usize) -> usize) -> Result<Self> {
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(mul(a, b));
            }
        }
        Self::from_flat(order, table)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// The product `a·b`. Panics if either argument is out of range.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn row(&self, a: usize) -> &[usize] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    /// Every left translation `x ↦ a·x` is a bijection.
    pub fn is_left_quasigroup(&self) -> bool {
        self.ldiv.is_some()
    }

    /// Every right translation `y ↦ y·a` is a bijection.
    pub fn is_right_quasigroup(&self) -> bool {
        self.rdiv.is_some()
    }

    /// The table is a Latin square.
    pub fn is_quasigroup(&self) -> bool {
        self.is_left_quasigroup() && self.is_right_quasigroup()
    }

    /// `a\b`, the unique `x` with `a·x = b`.
    pub fn div_l(&self, a: usize, b: usize) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        match &self.ldiv {
            Some(t) => Ok(t[a * self.order + b]),
            None => Err(QgError::AxiomViolation(
                "left division requires every row to be a permutation".into(),
            )),
        }
    }

    /// `b/a`, the unique `y` with `y·a = b`.
    pub fn div_r(&self, a: usize, b: usize) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        match &self.rdiv {
            Some(t) => Ok(t[a * self.order + b]),
            None => Err(QgError::AxiomViolation(
                "right division requires every column to be a permutation".into(),
            )),
        }
    }

    /// Left division for hot loops. Panics when the magma is not a left
    /// quasigroup.
    #[inline]
    pub(crate) fn ld(&self, a: usize, b: usize) -> usize {
        self.ldiv.as_ref().expect("left division table")[a * self.order + b]
    }

    /// `b/a` for hot loops. Panics when the magma is not a right quasigroup.
    #[inline]
    pub(crate) fn rd(&self, a: usize, b: usize) -> usize {
        self.rdiv.as_ref().expect("right division table")[a * self.order + b]
    }

    /// The two-sided unit, if any.
    pub fn find_unit(&self) -> Option<usize> {
        self.unit
    }

    /// Elements `e` with `e·g = g` for every `g`.
    pub fn left_units(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&e| (0..self.order).all(|g| self.mul(e, g) == g))
            .collect()
    }

    /// Elements `e` with `g·e = g` for every `g`.
    pub fn right_units(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&e| (0..self.order).all(|g| self.mul(g, e) == g))
            .collect()
    }

    /// First triple `(a, b, c)` with `(ab)c ≠ a(bc)`, in lexicographic order.
    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_associative(&self) -> bool {
        self.associativity_failure().is_none()
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Associative quasigroup with a unit.
    pub fn is_group(&self) -> bool {
        self.is_quasigroup() && self.unit.is_some() && self.is_associative()
    }

    /// Checks whether `perm` is an automorphism of the table.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        let n = self.order;
        perm.len() == n && (0..n).all(|a| (0..n).all(|b| perm[self.mul(a, b)] == self.mul(perm[a], perm[b])))
    }

    fn check(&self, x: usize) -> Result<()> {
        if x < self.order {
            Ok(())
        } else {
            Err(QgError::Precondition(format!(
                "element {x} is outside 0..{}",
                self.order
            )))
        }
    }
}

/// Checks that `perm` is a permutation of `0..n`.
pub fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in perm {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return false;
        }
    }
    true
}

/// Inverse of a permutation. The caller guarantees `perm` is one.
pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &x) in perm.iter().enumerate() {
        inv[x] = i;
    }
    inv
}
