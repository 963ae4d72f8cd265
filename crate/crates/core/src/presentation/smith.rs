/// Diagonal of the Smith normal form of an integer matrix with `cols` columns.
///
/// Returns `min(rows, cols)` nonnegative entries `d_1 | d_2 | ...`, zeros last.
#[allow(clippy::needless_range_loop)]
pub fn smith_diagonal(rows: &[Vec<i64>], cols: usize) -> Vec<i64> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols, "ragged matrix");
            r.iter().map(|&x| x as i128).collect()
        })
        .collect();
    let nrows = m.len();
    let mut diag = Vec::new();

    for t in 0..nrows.min(cols) {
        // pivot: smallest nonzero |entry| in the trailing block
        let pivot = (t..nrows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].abs());
        let Some((pi, pj)) = pivot else {
            diag.extend(std::iter::repeat_n(0, nrows.min(cols) - t));
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }

        loop {
            let mut dirty = false;
            for i in t + 1..nrows {
                let q = m[i][t] / m[t][t];
                if q != 0 {
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                }
                if m[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j] / m[t][t];
                if q != 0 {
                    for row in m.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if m[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // the pivot must divide the whole trailing block
                let bad = (t + 1..nrows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| m[i][j] % m[t][t] != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            m[t][j] += m[i][j];
                        }
                        continue;
                    }
                }
            }
            // move the smallest entry of row/column t onto the pivot
            let mut best = (t, t);
            for i in t..nrows {
                if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.1 == t {
                m.swap(t, best.0);
            } else {
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(m[t][t].abs());
    }
    diag.into_iter()
        .map(|d| i64::try_from(d).expect("Smith entry fits in i64"))
        .collect()
}
