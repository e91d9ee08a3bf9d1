use crate::error::{QgError, Result};
use crate::magma::FiniteMagma;

/// Largest order [`enumerate_latin_squares`] accepts.
pub const MAX_ENUMERATION_ORDER: usize = 7;

const EMPTY: usize = usize::MAX;

/// Cell-by-cell backtracking over `n × n` Latin squares in row-major
/// order, trying symbols in increasing order, so squares come out in
/// lexicographic order of their flattened tables.
struct LatinWalker {
    n: usize,
    grid: Vec<usize>,
    row_used: Vec<u32>,
    col_used: Vec<u32>,
    free: Vec<usize>,
    started: bool,
    done: bool,
}

impl LatinWalker {
    fn new(n: usize, reduced: bool) -> Self {
        let mut w = LatinWalker {
            n,
            grid: vec![EMPTY; n * n],
            row_used: vec![0; n],
            col_used: vec![0; n],
            free: Vec::new(),
            started: false,
            done: false,
        };
        for cell in 0..n * n {
            let (r, c) = (cell / n, cell % n);
            if reduced && (r == 0 || c == 0) {
                w.place(cell, r.max(c));
            } else {
                w.free.push(cell);
            }
        }
        w
    }

    fn place(&mut self, cell: usize, v: usize) {
        let (r, c) = (cell / self.n, cell % self.n);
        self.grid[cell] = v;
        self.row_used[r] |= 1 << v;
        self.col_used[c] |= 1 << v;
    }

    fn lift(&mut self, cell: usize) -> usize {
        let (r, c) = (cell / self.n, cell % self.n);
        let v = self.grid[cell];
        self.row_used[r] &= !(1 << v);
        self.col_used[c] &= !(1 << v);
        self.grid[cell] = EMPTY;
        v
    }

    /// Advances to the next complete square; false when exhausted.
    fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        let mut k = if self.started {
            if self.free.is_empty() {
                self.done = true;
                return false;
            }
            self.free.len() - 1
        } else {
            self.started = true;
            0
        };
        loop {
            if k == self.free.len() {
                return true;
            }
            let cell = self.free[k];
            let start = if self.grid[cell] == EMPTY {
                0
            } else {
                self.lift(cell) + 1
            };
            let used = self.row_used[cell / self.n] | self.col_used[cell % self.n];
            match (start..self.n).find(|&v| used & (1 << v) == 0) {
                Some(v) => {
                    self.place(cell, v);
                    k += 1;
                }
                None => {
                    if k == 0 {
                        self.done = true;
                        return false;
                    }
                    k -= 1;
                }
            }
        }
    }
}

/// Stream of Latin squares; see [`enumerate_latin_squares`].
pub struct LatinSquares {
    walker: LatinWalker,
}

impl Iterator for LatinSquares {
    type Item = FiniteMagma;

    fn next(&mut self) -> Option<FiniteMagma> {
        if self.walker.advance() {
            Some(FiniteMagma::from_flat(self.walker.n, self.walker.grid.clone()).expect("Latin square"))
        } else {
            None
        }
    }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return Err(QgError::Capacity(format!(
            "Latin square enumeration supports orders 1..={MAX_ENUMERATION_ORDER}, got {n}"
        )));
    }
    Ok(())
}

/// Every `n × n` Latin square, or with `reduced` every one whose first row
/// and column are `0, 1, …, n−1` (equivalently, every loop with unit 0).
pub fn enumerate_latin_squares(n: usize, reduced: bool) -> Result<LatinSquares> {
    check_order(n)?;
    Ok(LatinSquares {
        walker: LatinWalker::new(n, reduced),
    })
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Number of Latin squares of order `n`. Reduced counts are always
/// enumerated; unreduced counts are enumerated up to order 5 and above
/// that obtained as `n!·(n−1)!` times the reduced count.
pub fn count_latin_squares(n: usize, reduced: bool) -> Result<u64> {
    check_order(n)?;
    if !reduced && n >= 6 {
        return Ok(count_latin_squares(n, true)? * factorial(n) * factorial(n - 1));
    }
    let mut w = LatinWalker::new(n, reduced);
    let mut count = 0;
    while w.advance() {
        count += 1;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All `3^9` tables over `{0,1,2}`, filtered by the Latin property.
    fn brute_force_order_3() -> (u64, u64) {
        let (mut total, mut reduced) = (0, 0);
        for code in 0..3u32.pow(9) {
            let table: Vec<usize> = (0..9).map(|i| (code / 3u32.pow(i) % 3) as usize).collect();
            let m = FiniteMagma::from_flat(3, table.clone()).unwrap();
            if m.is_quasigroup() {
                total += 1;
                if table[..3] == [0, 1, 2] && [table[0], table[3], table[6]] == [0, 1, 2] {
                    reduced += 1;
                }
            }
        }
        (total, reduced)
    }

    /// All `24^4` choices of four row permutations, filtered by columns.
    fn brute_force_order_4() -> (u64, u64) {
        let perms: Vec<Vec<usize>> = {
            use itertools::Itertools;
            (0..4).permutations(4).collect()
        };
        let (mut total, mut reduced) = (0, 0);
        for r0 in &perms {
            for r1 in &perms {
                for r2 in &perms {
                    for r3 in &perms {
                        let rows = [r0, r1, r2, r3];
                        let columns_ok = (0..4).all(|c| {
                            let mut seen = 0u8;
                            rows.iter().all(|r| {
                                let fresh = seen & (1 << r[c]) == 0;
                                seen |= 1 << r[c];
                                fresh
                            })
                        });
                        if columns_ok {
                            total += 1;
                            if *r0 == [0, 1, 2, 3] && (0..4).all(|i| rows[i][0] == i) {
                                reduced += 1;
                            }
                        }
                    }
                }
            }
        }
        (total, reduced)
    }

    #[test]
    fn small_counts_match_brute_force() {
        let (t3, r3) = brute_force_order_3();
        assert_eq!((t3, r3), (12, 1));
        assert_eq!(count_latin_squares(3, false).unwrap(), t3);
        assert_eq!(count_latin_squares(3, true).unwrap(), r3);
        let (t4, r4) = brute_force_order_4();
        assert_eq!((t4, r4), (576, 4));
        assert_eq!(count_latin_squares(4, false).unwrap(), t4);
        assert_eq!(count_latin_squares(4, true).unwrap(), r4);
    }

    #[test]
    fn known_counts() {
        assert_eq!(count_latin_squares(1, true).unwrap(), 1);
        assert_eq!(count_latin_squares(1, false).unwrap(), 1);
        assert_eq!(count_latin_squares(2, false).unwrap(), 2);
        assert_eq!(count_latin_squares(5, true).unwrap(), 56);
        assert_eq!(count_latin_squares(5, false).unwrap(), 161_280);
        assert_eq!(count_latin_squares(6, true).unwrap(), 9_408);
        assert_eq!(count_latin_squares(6, false).unwrap(), 812_851_200);
    }

    #[test]
    fn emissions_are_distinct_latin_squares() {
        let squares: Vec<_> = enumerate_latin_squares(4, false).unwrap().collect();
        assert_eq!(squares.len(), 576);
        for m in &squares {
            assert!(m.is_quasigroup());
        }
        let mut tables: Vec<_> = squares.iter().map(|m| m.table().to_vec()).collect();
        assert!(tables.windows(2).all(|w| w[0] < w[1]));
        tables.dedup();
        assert_eq!(tables.len(), 576);
        for m in enumerate_latin_squares(5, true).unwrap() {
            assert_eq!(m.find_unit(), Some(0));
        }
    }

    #[test]
    fn order_bounds() {
        assert!(matches!(enumerate_latin_squares(0, true), Err(QgError::Capacity(_))));
        assert!(matches!(count_latin_squares(8, true), Err(QgError::Capacity(_))));
        assert_eq!(enumerate_latin_squares(1, true).unwrap().count(), 1);
    }
}
