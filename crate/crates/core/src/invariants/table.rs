use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("malformed table: {0}")]
    Malformed(String),
    #[error("table is not a group: {0}")]
    NotAGroup(String),
}

/// A finite group given by its multiplication table. Element `0` need not be
/// the identity; it is located on load.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    name: String,
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl FiniteGroupTable {
    /// Checks closure, associativity, identity and inverses.
    pub fn new(name: &str, table: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self, TableError> {
        let n = table.len();
        if n == 0 {
            return Err(TableError::Malformed("empty table".into()));
        }
        for row in &table {
            if row.len() != n {
                return Err(TableError::Malformed(format!("row of length {} in a table of order {n}", row.len())));
            }
            if let Some(x) = row.iter().find(|&&x| x >= n) {
                return Err(TableError::NotAGroup(format!("entry {x} out of range")));
            }
        }
        let names = names.unwrap_or_else(|| (0..n).map(|i| format!("e{i}")).collect());
        if names.len() != n {
            return Err(TableError::Malformed("wrong number of element names".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| TableError::NotAGroup("no identity".into()))?;
        for x in 0..n {
            if !(0..n).any(|y| table[x][y] == identity) {
                return Err(TableError::NotAGroup(format!("element {x} has no inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(TableError::NotAGroup(format!("({a}{b}){c} != {a}({b}{c})")));
                    }
                }
            }
        }
        Ok(FiniteGroupTable { name: name.to_string(), names, table, identity })
    }

    /// `Z/n`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let names = (0..n).map(|i| format!("{i}")).collect();
        FiniteGroupTable { name: format!("Z/{n}"), names, table, identity: 0 }
    }

    /// The dihedral group of order `2m`; element `f*m + i` is `s^f r^i`.
    pub fn dihedral(m: usize) -> Self {
        let n = 2 * m;
        let table = (0..n)
            .map(|a| {
                let (f1, i) = (a / m, a % m);
                (0..n)
                    .map(|b| {
                        let (f2, j) = (b / m, b % m);
                        // r^i s = s r^-i
                        if f2 == 0 {
                            f1 * m + (i + j) % m
                        } else {
                            ((f1 + 1) % 2) * m + (j + m - i) % m
                        }
                    })
                    .collect()
            })
            .collect();
        let names = (0..n)
            .map(|a| if a < m { format!("r{a}") } else { format!("sr{}", a - m) })
            .collect();
        FiniteGroupTable { name: format!("D{n}"), names, table, identity: 0 }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn element_names(&self) -> &[String] {
        &self.names
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// For each element `g`, the list `1, g, g^2, ..., g^(k-1)` with `k` its order.
    pub fn power_tables(&self) -> Vec<Vec<usize>> {
        (0..self.order())
            .map(|g| {
                let mut cycle = vec![self.identity];
                let mut x = g;
                while x != self.identity {
                    cycle.push(x);
                    x = self.mul(x, g);
                }
                cycle
            })
            .collect()
    }

    /// Parses the plain-text format: the order on the first line, then one
    /// row of element indices per line. Blank lines and `#` comments are
    /// ignored; an optional `names:` line lists element names.
    pub fn parse(name: &str, text: &str) -> Result<Self, TableError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let order: usize = lines
            .next()
            .ok_or_else(|| TableError::Malformed("missing order".into()))?
            .parse()
            .map_err(|_| TableError::Malformed("order is not an integer".into()))?;
        let mut names = None;
        let mut rows = Vec::with_capacity(order);
        for line in lines {
            if let Some(rest) = line.strip_prefix("names:") {
                names = Some(rest.split_whitespace().map(String::from).collect());
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| TableError::Malformed(format!("bad entry {t:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        if rows.len() != order {
            return Err(TableError::Malformed(format!("expected {order} rows, found {}", rows.len())));
        }
        FiniteGroupTable::new(name, rows, names)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\nnames: {}\n", self.order(), self.names.join(" "));
        for row in &self.table {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "{}", cells.join(" "));
        }
        s
    }
}
