//! Bit-packed kernels for p = 2. Rows are stored as `u64` words, low bit first.

pub(super) struct BitRows {
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl BitRows {
    pub(super) fn pack(rows: usize, cols: usize, data: &[u16]) -> Self {
        let words = cols.div_ceil(64);
        let packed = (0..rows)
            .map(|r| {
                let mut row = vec![0u64; words];
                for (c, &v) in data[r * cols..(r + 1) * cols].iter().enumerate() {
                    if v & 1 == 1 {
                        row[c / 64] |= 1 << (c % 64);
                    }
                }
                row
            })
            .collect();
        BitRows {
            words,
            rows: packed,
        }
    }

    pub(super) fn unpack(&self, cols: usize) -> Vec<u16> {
        let mut out = Vec::with_capacity(self.rows.len() * cols);
        for row in &self.rows {
            out.extend((0..cols).map(|c| ((row[c / 64] >> (c % 64)) & 1) as u16));
        }
        out
    }

    #[inline]
    fn bit(&self, r: usize, c: usize) -> bool {
        (self.rows[r][c / 64] >> (c % 64)) & 1 == 1
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub(super) fn rref(&mut self, cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows.len() {
                break;
            }
            let Some(i) = (r..self.rows.len()).find(|&i| self.bit(i, c)) else {
                continue;
            };
            self.rows.swap(r, i);
            let pivot_row = self.rows[r].clone();
            let w0 = c / 64;
            for k in 0..self.rows.len() {
                if k != r && self.bit(k, c) {
                    for w in w0..self.words {
                        self.rows[k][w] ^= pivot_row[w];
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

/// `a (n×m) · b (m×k)` over 𝔽2 on packed rows.
pub(super) fn mul(n: usize, m: usize, k: usize, a: &[u16], b: &[u16]) -> Vec<u16> {
    let bp = BitRows::pack(m, k, b);
    let mut out = BitRows {
        words: bp.words,
        rows: vec![vec![0u64; bp.words]; n],
    };
    for i in 0..n {
        let row = &mut out.rows[i];
        for (j, &v) in a[i * m..(i + 1) * m].iter().enumerate() {
            if v & 1 == 1 {
                for (dst, src) in row.iter_mut().zip(&bp.rows[j]) {
                    *dst ^= *src;
                }
            }
        }
    }
    out.unpack(k)
}
