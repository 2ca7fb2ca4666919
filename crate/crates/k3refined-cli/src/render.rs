//! Text renderings: doubled-spin table grids and bracket sums.

use k3refined::su2::{GenusTable, SpinTable};
use k3refined::ULaurent;
use num_bigint::BigInt;

/// Spin label for a doubled spin: 0, 1/2, 1, 3/2, ...
pub fn spin_label(j2: u32) -> String {
    if j2 % 2 == 0 {
        (j2 / 2).to_string()
    } else {
        format!("{j2}/2")
    }
}

fn fmt_mult(c: &k3refined::Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Bracket-sum form, e.g. `488[0,0] + [1/2,0] + [1/2,1]`.
pub fn bracket_sum(t: &SpinTable) -> String {
    if t.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (&(jl2, jr2), c) in t.entries() {
        let bracket = format!("[{},{}]", spin_label(jl2), spin_label(jr2));
        let one = k3refined::laurent::rat(1);
        if *c == one {
            parts.push(bracket);
        } else {
            parts.push(format!("{}{}", fmt_mult(c), bracket));
        }
    }
    parts.join(" + ")
}

/// Table grid with doubled-spin indices: rows i = 2jL, columns
/// j = 2jR, empty cells printed as dots.
pub fn spin_grid(title: &str, t: &SpinTable) -> String {
    if t.is_empty() {
        return format!("{title}: 0\n");
    }
    let imax = t.entries().map(|(&(l, _), _)| l).max().unwrap_or(0);
    let jmax = t.entries().map(|(&(_, r), _)| r).max().unwrap_or(0);
    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut header = vec![title.to_string()];
    for j in 0..=jmax {
        header.push(format!("j={j}"));
    }
    cells.push(header);
    for i in 0..=imax {
        let mut row = vec![format!("i={i}")];
        for j in 0..=jmax {
            let c = t.multiplicity(i, j);
            row.push(if c == k3refined::laurent::rat(0) {
                ".".to_string()
            } else {
                fmt_mult(&c)
            });
        }
        cells.push(row);
    }
    align(&cells)
}

/// Genus grid: rows g, columns h.
pub fn genus_grid(tables: &[GenusTable]) -> String {
    let gmax = tables
        .iter()
        .filter_map(|t| t.max_genus())
        .max()
        .unwrap_or(0);
    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["r^h_g".to_string()];
    for h in 0..tables.len() {
        header.push(format!("h={h}"));
    }
    cells.push(header);
    for g in 0..=gmax {
        let mut row = vec![format!("g={g}")];
        for t in tables {
            let v = t.value(g);
            row.push(if v == BigInt::from(0) {
                ".".to_string()
            } else {
                v.to_string()
            });
        }
        cells.push(row);
    }
    align(&cells)
}

/// Right-align columns of a cell matrix.
fn align(cells: &[Vec<String>]) -> String {
    let ncols = cells.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut widths = vec![0usize; ncols];
    for row in cells {
        for (i, c) in row.iter().enumerate() {
            widths[i] = widths[i].max(c.len());
        }
    }
    let mut out = String::new();
    for row in cells {
        let mut line = String::new();
        for (i, c) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&" ".repeat(widths[i].saturating_sub(c.len())));
            line.push_str(c);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// `u^-2 + 22 + u^2` with a `0` fallback.
pub fn upoly(p: &ULaurent) -> String {
    p.to_string()
}
