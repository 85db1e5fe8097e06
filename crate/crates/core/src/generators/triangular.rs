/// `l (l + 1) / 2`
pub fn triangular(l: u64) -> u64 {
    l * (l + 1) / 2
}

/// `value = T(a) + T(b) + T(c)` with `a <= b <= c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangularTriple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub value: u64,
}

impl TriangularTriple {
    pub fn new(a: u64, b: u64, c: u64) -> Self {
        debug_assert!(a <= b && b <= c);
        TriangularTriple {
            a,
            b,
            c,
            value: triangular(a) + triangular(b) + triangular(c),
        }
    }
}

/// Largest `l` with `T(l) <= m`.
fn triangular_root(m: u64) -> u64 {
    let mut l = (((8 * m + 1) as f64).sqrt() as u64).saturating_sub(1) / 2;
    while triangular(l + 1) <= m {
        l += 1;
    }
    while triangular(l) > m {
        l -= 1;
    }
    l
}

/// Decompositions of `m` into three triangular numbers, produced lazily in
/// the order of [`decompose_triangular`].
#[derive(Debug, Clone)]
pub struct TriangularDecompositions {
    m: u64,
    c: u64,
    /// Next `b` to try for the current `c`; `None` moves on to a smaller `c`.
    b: Option<u64>,
    done: bool,
}

impl TriangularDecompositions {
    fn start_c(&mut self) {
        let rest = self.m - triangular(self.c);
        self.b = Some(triangular_root(rest).min(self.c));
    }
}

impl Iterator for TriangularDecompositions {
    type Item = TriangularTriple;

    fn next(&mut self) -> Option<TriangularTriple> {
        while !self.done {
            let rest = self.m - triangular(self.c);
            // b <= c and T(b) >= rest / 2 since a <= b
            while let Some(b) = self.b {
                if 2 * triangular(b) < rest {
                    self.b = None;
                    break;
                }
                self.b = b.checked_sub(1);
                let last = rest - triangular(b);
                let a = triangular_root(last);
                if triangular(a) == last && a <= b {
                    return Some(TriangularTriple::new(a, b, self.c));
                }
            }
            // c is the largest part, so 3 T(c) >= m
            if self.c == 0 || 3 * triangular(self.c - 1) < self.m {
                self.done = true;
            } else {
                self.c -= 1;
                self.start_c();
            }
        }
        None
    }
}

pub fn triangular_decompositions(m: u64) -> TriangularDecompositions {
    let mut it = TriangularDecompositions {
        m,
        c: triangular_root(m),
        b: None,
        done: false,
    };
    it.start_c();
    it
}

/// Every way to write `m` as a sum of three triangular numbers, sorted by
/// `(c, b, a)` descending.
pub fn decompose_triangular(m: u64) -> Vec<TriangularTriple> {
    triangular_decompositions(m).collect()
}
