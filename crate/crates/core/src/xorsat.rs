//! XOR-SAT over F2 by dense, bit-packed Gaussian elimination.

use serde::{Deserialize, Serialize};

/// One equation `sum of vars = parity (mod 2)`. Repeated indices cancel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XorRow {
    pub vars: Vec<usize>,
    pub parity: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct XorSystem {
    pub n: usize,
    pub rows: Vec<XorRow>,
}

impl XorSystem {
    pub fn new(n: usize) -> Self {
        XorSystem { n, rows: Vec::new() }
    }

    pub fn push(&mut self, vars: impl IntoIterator<Item = usize>, parity: bool) {
        let vars: Vec<usize> = vars.into_iter().collect();
        debug_assert!(vars.iter().all(|&v| v < self.n));
        self.rows.push(XorRow { vars, parity });
    }

    /// True when `x` satisfies every row.
    pub fn check(&self, x: &[bool]) -> bool {
        self.rows.iter().all(|r| r.vars.iter().fold(false, |acc, &v| acc ^ x[v]) == r.parity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveResult {
    Sat {
        assignment: Vec<bool>,
        free_vars: Vec<usize>,
    },
    /// Rows whose sum is `0 = 1`.
    Unsat {
        certificate: Vec<usize>,
    },
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat { .. })
    }

    pub fn assignment(&self) -> Option<&[bool]> {
        match self {
            SolveResult::Sat { assignment, .. } => Some(assignment),
            SolveResult::Unsat { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeros(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn flip(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }

    fn xor_from(&mut self, other: &Bits, word: usize) {
        for (a, b) in self.0[word..].iter_mut().zip(&other.0[word..]) {
            *a ^= b;
        }
    }

    fn xor_all(&mut self, other: &Bits) {
        self.xor_from(other, 0);
    }

    fn lowest_from(&self, word: usize) -> Option<usize> {
        self.0[word..].iter().position(|&w| w != 0).map(|off| {
            let w = word + off;
            w * 64 + self.0[w].trailing_zeros() as usize
        })
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                (rest != 0).then(|| {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    w * 64 + b
                })
            })
        })
    }
}

struct Pivot {
    bits: Bits,
    parity: bool,
    history: Option<Bits>,
}

/// Row echelon form of a consistent system.
pub struct Echelon {
    n: usize,
    /// Pivot row keyed by its lowest column.
    pivots: Vec<Option<(Bits, bool)>>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.iter().flatten().count()
    }

    pub fn free_vars(&self) -> Vec<usize> {
        (0..self.n).filter(|&c| self.pivots[c].is_none()).collect()
    }

    /// The solution with the given values for the free variables.
    pub fn solution_with(&self, free: &[bool]) -> Vec<bool> {
        let mut x = vec![false; self.n];
        for (c, &f) in self.free_vars().iter().zip(free) {
            x[*c] = f;
        }
        for c in (0..self.n).rev() {
            if let Some((bits, parity)) = &self.pivots[c] {
                x[c] = bits.ones().filter(|&o| o != c).fold(*parity, |acc, o| acc ^ x[o]);
            }
        }
        x
    }

    pub fn particular(&self) -> Vec<bool> {
        self.solution_with(&[])
    }

    /// Number of solutions as a power of two.
    pub fn dimension(&self) -> usize {
        self.n - self.rank()
    }
}

enum Outcome {
    Consistent(Echelon),
    Contradiction(Option<Bits>),
}

fn eliminate(sys: &XorSystem, track: bool) -> Outcome {
    let n = sys.n;
    let m = sys.rows.len();
    let mut pivots: Vec<Option<Pivot>> = (0..n).map(|_| None).collect();
    for (r, row) in sys.rows.iter().enumerate() {
        let mut bits = Bits::zeros(n);
        for &v in &row.vars {
            bits.flip(v);
        }
        let mut parity = row.parity;
        let mut history = track.then(|| {
            let mut h = Bits::zeros(m);
            h.flip(r);
            h
        });
        let mut word = 0;
        loop {
            match bits.lowest_from(word) {
                None => {
                    if parity {
                        return Outcome::Contradiction(history);
                    }
                    break;
                }
                Some(c) => match &pivots[c] {
                    Some(p) => {
                        bits.xor_from(&p.bits, c / 64);
                        parity ^= p.parity;
                        if let (Some(h), Some(ph)) = (history.as_mut(), p.history.as_ref()) {
                            h.xor_all(ph);
                        }
                        word = c / 64;
                    }
                    None => {
                        pivots[c] = Some(Pivot { bits, parity, history });
                        break;
                    }
                },
            }
        }
    }
    Outcome::Consistent(Echelon { n, pivots: pivots.into_iter().map(|p| p.map(|p| (p.bits, p.parity))).collect() })
}

/// Row echelon form, or `None` when the system is inconsistent.
pub fn echelon(sys: &XorSystem) -> Option<Echelon> {
    match eliminate(sys, false) {
        Outcome::Consistent(e) => Some(e),
        Outcome::Contradiction(_) => None,
    }
}

/// Solves the system; free variables are set to 0 and pivots are taken in
/// ascending column order.
pub fn solve(sys: &XorSystem) -> SolveResult {
    match eliminate(sys, false) {
        Outcome::Consistent(e) => {
            let assignment = e.particular();
            debug_assert!(sys.check(&assignment));
            SolveResult::Sat { assignment, free_vars: e.free_vars() }
        }
        Outcome::Contradiction(_) => match eliminate(sys, true) {
            Outcome::Contradiction(Some(h)) => SolveResult::Unsat { certificate: h.ones().collect() },
            _ => unreachable!("elimination is deterministic"),
        },
    }
}

/// Rank of the coefficient matrix (parities ignored).
pub fn rank(sys: &XorSystem) -> usize {
    let homogeneous =
        XorSystem { n: sys.n, rows: sys.rows.iter().map(|r| XorRow { vars: r.vars.clone(), parity: false }).collect() };
    match eliminate(&homogeneous, false) {
        Outcome::Consistent(e) => e.rank(),
        Outcome::Contradiction(_) => unreachable!("homogeneous systems are consistent"),
    }
}

/// True when the certificate rows sum to `0 = 1`.
pub fn verify_certificate(sys: &XorSystem, certificate: &[usize]) -> bool {
    let mut bits = Bits::zeros(sys.n);
    let mut parity = false;
    for &r in certificate {
        let row = &sys.rows[r];
        for &v in &row.vars {
            bits.flip(v);
        }
        parity ^= row.parity;
    }
    parity && bits.lowest_from(0).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(n: usize, rows: &[(&[usize], bool)]) -> XorSystem {
        let mut s = XorSystem::new(n);
        for (vars, p) in rows {
            s.push(vars.iter().copied(), *p);
        }
        s
    }

    #[test]
    fn chain_example() {
        let s = system(3, &[(&[0, 1], true), (&[1, 2], false)]);
        match solve(&s) {
            SolveResult::Sat { assignment, free_vars } => {
                assert_eq!(assignment, vec![true, false, false]);
                assert_eq!(free_vars, vec![2]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn contradiction_certificate() {
        let s = system(2, &[(&[0, 1], false), (&[0, 1], true)]);
        match solve(&s) {
            SolveResult::Unsat { certificate } => {
                assert_eq!(certificate, vec![0, 1]);
                assert!(verify_certificate(&s, &certificate));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&XorSystem::new(0)), 0);
        assert_eq!(rank(&system(2, &[(&[0, 1], true)])), 1);
        assert_eq!(rank(&system(3, &[(&[0, 1], false), (&[1, 2], false), (&[0, 2], false)])), 2);
    }

    #[test]
    fn repeated_index_cancels() {
        let s = system(1, &[(&[0, 0], true)]);
        assert!(!solve(&s).is_sat());
        let s = system(1, &[(&[0, 0], false)]);
        assert_eq!(rank(&s), 0);
    }

    #[test]
    fn wide_system_crosses_word_boundaries() {
        let n = 200;
        let mut s = XorSystem::new(n);
        for i in 0..n - 1 {
            s.push([i, i + 1], true);
        }
        s.push([0], false);
        let x = solve(&s).assignment().unwrap().to_vec();
        assert!((0..n).all(|i| x[i] == (i % 2 == 1)));
        s.push([0, n - 1], false);
        let SolveResult::Unsat { certificate } = solve(&s) else { panic!() };
        assert!(verify_certificate(&s, &certificate));
    }

    #[test]
    fn solution_space() {
        let s = system(3, &[(&[0, 1], true)]);
        let e = echelon(&s).unwrap();
        assert_eq!(e.dimension(), 2);
        let x = e.solution_with(&[true, true]);
        assert!(s.check(&x));
        assert_eq!(x, vec![false, true, true]);
    }
}
