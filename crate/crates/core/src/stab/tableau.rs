use std::fmt::Write as _;

use rand::Rng;

use super::pauli::{phase_exponent_words, words_for, Pauli, PauliString};
use super::{Basis, Gate, Measurement, StabError};
use crate::Sign;

/// Aaronson–Gottesman tableau with destabilizers.
///
/// Rows `0..n` are destabilizers, `n..2n` stabilizers, and row `2n` is a
/// scratch row for deterministic measurements. Each row is bit-packed into
/// `words` `u64`s for the X part and the same for the Z part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    words: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    signs: Vec<bool>,
}

impl Tableau {
    /// `|0…0⟩` on `n` qubits.
    pub fn new(n: usize) -> Result<Self, StabError> {
        if n == 0 {
            return Err(StabError::Empty);
        }
        let words = words_for(n);
        let rows = 2 * n + 1;
        let mut t = Self {
            n,
            words,
            xs: vec![0; rows * words],
            zs: vec![0; rows * words],
            signs: vec![false; rows],
        };
        for q in 0..n {
            t.xs[q * words + q / 64] |= 1 << (q % 64);
            t.zs[(q + n) * words + q / 64] |= 1 << (q % 64);
        }
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    fn check_qubit(&self, q: usize) -> Result<(), StabError> {
        if q >= self.n {
            Err(StabError::QubitOutOfRange { qubit: q, n: self.n })
        } else {
            Ok(())
        }
    }

    #[inline]
    fn xbit(&self, row: usize, q: usize) -> bool {
        self.xs[row * self.words + q / 64] >> (q % 64) & 1 == 1
    }

    pub fn apply(&mut self, gate: Gate) -> Result<(), StabError> {
        for q in gate.qubits() {
            self.check_qubit(q)?;
        }
        if let Gate::Cz(a, b) | Gate::Cnot(a, b) = gate {
            if a == b {
                return Err(StabError::DuplicateTargets(a));
            }
        }
        self.apply_unchecked(gate);
        Ok(())
    }

    pub fn apply_all<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<(), StabError> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    pub(crate) fn apply_unchecked(&mut self, gate: Gate) {
        let w = self.words;
        let rows = 2 * self.n;
        match gate {
            Gate::H(q) => {
                let (i, m) = (q / 64, 1u64 << (q % 64));
                for r in 0..rows {
                    let x = self.xs[r * w + i] & m;
                    let z = self.zs[r * w + i] & m;
                    if x != 0 && z != 0 {
                        self.signs[r] ^= true;
                    }
                    self.xs[r * w + i] ^= x ^ z;
                    self.zs[r * w + i] ^= x ^ z;
                }
            }
            Gate::S(q) => {
                let (i, m) = (q / 64, 1u64 << (q % 64));
                for r in 0..rows {
                    let x = self.xs[r * w + i] & m;
                    let z = self.zs[r * w + i] & m;
                    if x != 0 && z != 0 {
                        self.signs[r] ^= true;
                    }
                    self.zs[r * w + i] ^= x;
                }
            }
            Gate::X(q) => self.flip_signs_where(q, false, true),
            Gate::Z(q) => self.flip_signs_where(q, true, false),
            Gate::Y(q) => self.flip_signs_where(q, true, true),
            Gate::Cnot(c, t) => {
                let (ic, mc, sc) = (c / 64, 1u64 << (c % 64), c % 64);
                let (it, mt, st) = (t / 64, 1u64 << (t % 64), t % 64);
                for r in 0..rows {
                    let xc = (self.xs[r * w + ic] & mc) >> sc;
                    let zc = (self.zs[r * w + ic] & mc) >> sc;
                    let xt = (self.xs[r * w + it] & mt) >> st;
                    let zt = (self.zs[r * w + it] & mt) >> st;
                    if xc & zt & (xt ^ zc ^ 1) == 1 {
                        self.signs[r] ^= true;
                    }
                    self.xs[r * w + it] ^= xc << st;
                    self.zs[r * w + ic] ^= zt << sc;
                }
            }
            Gate::Cz(a, b) => {
                let (ia, ma, sa) = (a / 64, 1u64 << (a % 64), a % 64);
                let (ib, mb, sb) = (b / 64, 1u64 << (b % 64), b % 64);
                for r in 0..rows {
                    let xa = (self.xs[r * w + ia] & ma) >> sa;
                    let za = (self.zs[r * w + ia] & ma) >> sa;
                    let xb = (self.xs[r * w + ib] & mb) >> sb;
                    let zb = (self.zs[r * w + ib] & mb) >> sb;
                    if xa & xb & (za ^ zb) == 1 {
                        self.signs[r] ^= true;
                    }
                    self.zs[r * w + ia] ^= xb << sa;
                    self.zs[r * w + ib] ^= xa << sb;
                }
            }
        }
    }

    // A Pauli gate flips the sign of every row that anticommutes with it.
    fn flip_signs_where(&mut self, q: usize, on_x: bool, on_z: bool) {
        let (i, m) = (q / 64, 1u64 << (q % 64));
        for r in 0..2 * self.n {
            let x = self.xs[r * self.words + i] & m != 0;
            let z = self.zs[r * self.words + i] & m != 0;
            if (on_x && x) ^ (on_z && z) {
                self.signs[r] ^= true;
            }
        }
    }

    /// Row `h` <- row `i` * row `h`.
    fn rowsum(&mut self, h: usize, i: usize) {
        let w = self.words;
        let (hs, is) = (h * w, i * w);
        let k = {
            let (xi, zi) = (&self.xs[is..is + w], &self.zs[is..is + w]);
            let (xh, zh) = (&self.xs[hs..hs + w], &self.zs[hs..hs + w]);
            phase_exponent_words(xi, zi, xh, zh)
        };
        debug_assert!(k % 2 == 0 || h < self.n || i < self.n, "stabilizer rows anticommute");
        self.signs[h] ^= self.signs[i] ^ (k >= 2);
        for j in 0..w {
            self.xs[hs + j] ^= self.xs[is + j];
            self.zs[hs + j] ^= self.zs[is + j];
        }
    }

    fn copy_row(&mut self, dst: usize, src: usize) {
        let w = self.words;
        self.xs.copy_within(src * w..(src + 1) * w, dst * w);
        self.zs.copy_within(src * w..(src + 1) * w, dst * w);
        self.signs[dst] = self.signs[src];
    }

    fn clear_row(&mut self, r: usize) {
        let w = self.words;
        self.xs[r * w..(r + 1) * w].fill(0);
        self.zs[r * w..(r + 1) * w].fill(0);
        self.signs[r] = false;
    }

    fn row(&self, r: usize) -> PauliString {
        let w = self.words;
        PauliString::from_words(
            self.n,
            self.xs[r * w..(r + 1) * w].to_vec(),
            self.zs[r * w..(r + 1) * w].to_vec(),
            Sign::from_bit(self.signs[r]),
        )
    }

    /// Z measurement with the random branch chosen by `pick`.
    fn measure_z_with(&mut self, q: usize, pick: impl FnOnce() -> Sign) -> Measurement {
        let n = self.n;
        if let Some(p) = (n..2 * n).find(|&r| self.xbit(r, q)) {
            for r in 0..2 * n {
                if r != p && self.xbit(r, q) {
                    self.rowsum(r, p);
                }
            }
            self.copy_row(p - n, p);
            self.clear_row(p);
            let outcome = pick();
            self.zs[p * self.words + q / 64] |= 1 << (q % 64);
            self.signs[p] = outcome.bit();
            Measurement { outcome, deterministic: false }
        } else {
            let scratch = 2 * n;
            self.clear_row(scratch);
            for r in 0..n {
                if self.xbit(r, q) {
                    self.rowsum(scratch, r + n);
                }
            }
            Measurement { outcome: Sign::from_bit(self.signs[scratch]), deterministic: true }
        }
    }

    fn measure_with(&mut self, basis: Basis, q: usize, pick: impl FnOnce() -> Sign) -> Result<Measurement, StabError> {
        self.check_qubit(q)?;
        let m = match basis {
            Basis::Z => self.measure_z_with(q, pick),
            Basis::X => {
                self.apply_unchecked(Gate::H(q));
                let m = self.measure_z_with(q, pick);
                self.apply_unchecked(Gate::H(q));
                m
            }
            Basis::Y => {
                // S† then H maps Y to Z.
                for _ in 0..3 {
                    self.apply_unchecked(Gate::S(q));
                }
                self.apply_unchecked(Gate::H(q));
                let m = self.measure_z_with(q, pick);
                self.apply_unchecked(Gate::H(q));
                self.apply_unchecked(Gate::S(q));
                m
            }
        };
        Ok(m)
    }

    /// Projective single-qubit Pauli measurement; random outcomes are fair coin flips.
    pub fn measure<R: Rng + ?Sized>(&mut self, basis: Basis, q: usize, rng: &mut R) -> Result<Measurement, StabError> {
        self.measure_with(basis, q, || Sign::from_bit(rng.random::<bool>()))
    }

    /// Like [`measure`](Self::measure) but a random outcome is post-selected to
    /// `wanted`. Deterministic outcomes are returned as they are.
    pub fn measure_forced(&mut self, basis: Basis, q: usize, wanted: Sign) -> Result<Measurement, StabError> {
        self.measure_with(basis, q, || wanted)
    }

    /// Reset to `|0⟩` (measure Z, flip on -1).
    pub fn reset<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<(), StabError> {
        let m = self.measure(Basis::Z, q, rng)?;
        if m.outcome.is_minus() {
            self.apply_unchecked(Gate::X(q));
        }
        Ok(())
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        (self.n..2 * self.n).map(|r| self.row(r)).collect()
    }

    pub fn destabilizers(&self) -> Vec<PauliString> {
        (0..self.n).map(|r| self.row(r)).collect()
    }

    /// True iff `p`, sign included, is an element of the stabilizer group.
    ///
    /// `p` commutes with every stabilizer iff it is in the group up to sign;
    /// it is then the product of the stabilizers whose paired destabilizer
    /// anticommutes with it.
    pub fn is_stabilized_by(&self, p: &PauliString) -> Result<bool, StabError> {
        if p.len() != self.n {
            return Err(StabError::LengthMismatch { expected: self.n, found: p.len() });
        }
        let w = self.words;
        let anticommutes = |r: usize| {
            let mut acc = 0u32;
            for j in 0..w {
                acc += ((self.xs[r * w + j] & p.zs()[j]) ^ (self.zs[r * w + j] & p.xs()[j])).count_ones();
            }
            acc % 2 == 1
        };
        if (self.n..2 * self.n).any(anticommutes) {
            return Ok(false);
        }
        let mut acc = PauliString::identity(self.n);
        for r in 0..self.n {
            if anticommutes(r) {
                acc.mul_assign_right(&self.row(r + self.n))?;
            }
        }
        debug_assert!(acc.same_letters(p));
        Ok(acc.sign() == p.sign())
    }

    /// Canonical generators of the reduced state on `subset` (re-indexed in
    /// the given order).
    ///
    /// The subset must be in a product state with its complement. Stabilizer
    /// rows are brought to reduced row-echelon form with complement columns
    /// first; the rows left without complement support generate the reduced
    /// state, and their RREF over subset columns (X before Z per qubit) is
    /// unique for a given state.
    pub fn canonical_stabilizers(&self, subset: &[usize]) -> Result<Vec<PauliString>, StabError> {
        let mut in_subset = vec![false; self.n];
        for &q in subset {
            self.check_qubit(q)?;
            if in_subset[q] {
                return Err(StabError::DuplicateTargets(q));
            }
            in_subset[q] = true;
        }
        let complement: Vec<usize> = (0..self.n).filter(|&q| !in_subset[q]).collect();
        let mut rows = self.stabilizers();
        let mut next = 0;
        let columns = complement
            .iter()
            .flat_map(|&q| [(q, true), (q, false)])
            .chain(subset.iter().flat_map(|&q| [(q, true), (q, false)]));
        let mut complement_pivots = 0;
        for (col_index, (q, is_x)) in columns.enumerate() {
            let has = |p: &PauliString| {
                let (x, z) = p.get(q).bits();
                if is_x {
                    x
                } else {
                    z
                }
            };
            let Some(pivot) = (next..rows.len()).find(|&r| has(&rows[r])) else {
                continue;
            };
            rows.swap(next, pivot);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && has(row) {
                    row.mul_assign_right(&pivot_row)?;
                }
            }
            if col_index < 2 * complement.len() {
                complement_pivots += 1;
            }
            next += 1;
        }
        let reduced: Vec<PauliString> = rows[complement_pivots..].iter().map(|r| r.restricted(subset)).collect();
        if reduced.len() != subset.len() {
            return Err(StabError::EntangledWithComplement);
        }
        Ok(reduced)
    }

    /// One stabilizer per line with a `+`/`-` prefix.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for p in self.stabilizers() {
            let _ = writeln!(out, "{p}");
        }
        out
    }

    /// Deterministic value of measuring `basis` on `q`, if any, without
    /// disturbing the state.
    pub fn peek(&self, basis: Basis, q: usize) -> Result<Option<Sign>, StabError> {
        self.check_qubit(q)?;
        let letter = match basis {
            Basis::X => Pauli::X,
            Basis::Y => Pauli::Y,
            Basis::Z => Pauli::Z,
        };
        let p = PauliString::single(self.n, q, letter);
        if self.is_stabilized_by(&p)? {
            Ok(Some(Sign::Plus))
        } else if self.is_stabilized_by(&p.negated())? {
            Ok(Some(Sign::Minus))
        } else {
            Ok(None)
        }
    }
}
