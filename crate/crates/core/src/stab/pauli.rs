use std::fmt;
use std::str::FromStr;

use super::StabError;
use crate::Sign;

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Product `self * rhs` as `(i^k, letter)`, with `k` in 0..4.
    pub fn mul_with_phase(self, rhs: Pauli) -> (u8, Pauli) {
        let (x1, z1) = self.bits();
        let (x2, z2) = rhs.bits();
        let k = phase_exponent_bits(x1, z1, x2, z2);
        (k, Pauli::from_bits(x1 ^ x2, z1 ^ z2))
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Exponent of `i` picked up by the single-qubit product `P1 * P2`, mod 4.
fn phase_exponent_bits(x1: bool, z1: bool, x2: bool, z2: bool) -> u8 {
    let plus = (x1 && !z1 && x2 && z2) || (x1 && z1 && !x2 && z2) || (!x1 && z1 && x2 && !z2);
    let minus = (x1 && !z1 && !x2 && z2) || (x1 && z1 && x2 && !z2) || (!x1 && z1 && x2 && z2);
    match (plus, minus) {
        (true, _) => 1,
        (_, true) => 3,
        _ => 0,
    }
}

/// Word-parallel version of [`phase_exponent_bits`], summed over all lanes.
/// Returns the exponent of `i` for `P1 * P2` (mod 4), where `P1 = (x1, z1)`.
#[inline]
pub(crate) fn phase_exponent_words(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> u8 {
    let mut plus = 0u32;
    let mut minus = 0u32;
    for w in 0..x1.len() {
        let (a, b, c, d) = (x1[w], z1[w], x2[w], z2[w]);
        let xonly = a & !b;
        let yy = a & b;
        let zonly = !a & b;
        plus += ((xonly & c & d) | (yy & !c & d) | (zonly & c & !d)).count_ones();
        minus += ((xonly & !c & d) | (yy & c & !d) | (zonly & c & d)).count_ones();
    }
    (i64::from(plus) - i64::from(minus)).rem_euclid(4) as u8
}

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// A Hermitian Pauli operator on a fixed qubit range with a ±1 phase.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    len: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    sign: Sign,
}

impl PauliString {
    pub fn identity(len: usize) -> Self {
        let w = words_for(len);
        Self { len, xs: vec![0; w], zs: vec![0; w], sign: Sign::Plus }
    }

    /// `+P` on `qubit`, identity elsewhere.
    pub fn single(len: usize, qubit: usize, pauli: Pauli) -> Self {
        let mut p = Self::identity(len);
        p.set(qubit, pauli);
        p
    }

    /// Build from `(qubit, letter)` pairs; later entries overwrite earlier ones.
    pub fn from_terms(len: usize, sign: Sign, terms: &[(usize, Pauli)]) -> Self {
        let mut p = Self::identity(len);
        for &(q, l) in terms {
            p.set(q, l);
        }
        p.sign = sign;
        p
    }

    pub(crate) fn from_words(len: usize, xs: Vec<u64>, zs: Vec<u64>, sign: Sign) -> Self {
        Self { len, xs, zs, sign }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn set_sign(&mut self, sign: Sign) {
        self.sign = sign;
    }

    pub fn negated(mut self) -> Self {
        self.sign = -self.sign;
        self
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        assert!(qubit < self.len, "qubit {qubit} out of range for length {}", self.len);
        let (w, b) = (qubit / 64, qubit % 64);
        Pauli::from_bits(self.xs[w] >> b & 1 == 1, self.zs[w] >> b & 1 == 1)
    }

    pub fn set(&mut self, qubit: usize, pauli: Pauli) {
        assert!(qubit < self.len, "qubit {qubit} out of range for length {}", self.len);
        let (w, b) = (qubit / 64, qubit % 64);
        let (x, z) = pauli.bits();
        self.xs[w] = (self.xs[w] & !(1 << b)) | ((x as u64) << b);
        self.zs[w] = (self.zs[w] & !(1 << b)) | ((z as u64) << b);
    }

    pub(crate) fn xs(&self) -> &[u64] {
        &self.xs
    }

    pub(crate) fn zs(&self) -> &[u64] {
        &self.zs
    }

    pub fn weight(&self) -> usize {
        self.xs.iter().zip(&self.zs).map(|(x, z)| (x | z).count_ones() as usize).sum()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let mut acc = 0u32;
        for w in 0..self.xs.len() {
            acc += ((self.xs[w] & other.zs[w]) ^ (self.zs[w] & other.xs[w])).count_ones();
        }
        acc.is_multiple_of(2)
    }

    /// Letters only, ignoring the sign.
    pub fn same_letters(&self, other: &PauliString) -> bool {
        self.len == other.len && self.xs == other.xs && self.zs == other.zs
    }

    /// `self <- self * rhs`. Fails if the product is not Hermitian (the
    /// operands anticommute).
    pub fn mul_assign_right(&mut self, rhs: &PauliString) -> Result<(), StabError> {
        if self.len != rhs.len {
            return Err(StabError::LengthMismatch { expected: self.len, found: rhs.len });
        }
        let k = phase_exponent_words(&self.xs, &self.zs, &rhs.xs, &rhs.zs);
        if k % 2 == 1 {
            return Err(StabError::NonHermitianProduct);
        }
        for w in 0..self.xs.len() {
            self.xs[w] ^= rhs.xs[w];
            self.zs[w] ^= rhs.zs[w];
        }
        self.sign = self.sign * rhs.sign * Sign::from_bit(k == 2);
        Ok(())
    }

    /// Restrict to `qubits`, re-indexed in the given order. The sign is kept.
    pub fn restricted(&self, qubits: &[usize]) -> PauliString {
        let mut out = PauliString::identity(qubits.len());
        for (i, &q) in qubits.iter().enumerate() {
            out.set(i, self.get(q));
        }
        out.sign = self.sign;
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.sign.is_minus() { "-" } else { "+" })?;
        for q in 0..self.len {
            write!(f, "{}", self.get(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliString {
    type Err = StabError;

    /// Parses `+XZI`, `-ZZ`, or an unsigned `XY_`; `_` and `I` both mean identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (sign, body) = match s.as_bytes().first() {
            Some(b'+') => (Sign::Plus, &s[1..]),
            Some(b'-') => (Sign::Minus, &s[1..]),
            _ => (Sign::Plus, s),
        };
        let mut p = PauliString::identity(body.chars().count());
        for (q, c) in body.chars().enumerate() {
            let letter = match c {
                'I' | '_' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(StabError::Parse(format!("unexpected character {other:?} in {s:?}"))),
            };
            p.set(q, letter);
        }
        p.sign = sign;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_product(a: &PauliString, b: &PauliString) -> (u8, PauliString) {
        let mut k = 0u8;
        let mut out = PauliString::identity(a.len());
        for q in 0..a.len() {
            let (kq, l) = a.get(q).mul_with_phase(b.get(q));
            k = (k + kq) % 4;
            out.set(q, l);
        }
        (k, out)
    }

    fn arb_pauli_string(len: usize) -> impl Strategy<Value = PauliString> {
        prop::collection::vec(0u8..4, len).prop_map(move |letters| {
            let mut p = PauliString::identity(len);
            for (q, l) in letters.into_iter().enumerate() {
                p.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][l as usize]);
            }
            p
        })
    }

    #[test]
    fn single_qubit_products() {
        assert_eq!(Pauli::X.mul_with_phase(Pauli::Y), (1, Pauli::Z));
        assert_eq!(Pauli::Y.mul_with_phase(Pauli::X), (3, Pauli::Z));
        assert_eq!(Pauli::Z.mul_with_phase(Pauli::X), (1, Pauli::Y));
        assert_eq!(Pauli::Y.mul_with_phase(Pauli::Z), (1, Pauli::X));
        assert_eq!(Pauli::Z.mul_with_phase(Pauli::Z), (0, Pauli::I));
    }

    #[test]
    fn parse_and_display() {
        let p: PauliString = "-XZ_Y".parse().unwrap();
        assert_eq!(p.to_string(), "-XZIY");
        assert_eq!(p.weight(), 3);
        assert!("+XQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn anticommuting_product_is_rejected() {
        let mut a: PauliString = "X".parse().unwrap();
        let b: PauliString = "Z".parse().unwrap();
        assert!(matches!(a.mul_assign_right(&b), Err(StabError::NonHermitianProduct)));
    }

    proptest! {
        // Spans a word boundary so the packed path is exercised.
        #[test]
        fn word_phase_matches_per_qubit_phase(a in arb_pauli_string(70), b in arb_pauli_string(70)) {
            let (k, letters) = naive_product(&a, &b);
            prop_assert_eq!(phase_exponent_words(a.xs(), a.zs(), b.xs(), b.zs()), k);
            prop_assert_eq!(k % 2 == 0, a.commutes_with(&b));
            let mut c = a.clone();
            if k % 2 == 0 {
                c.mul_assign_right(&b).unwrap();
                prop_assert!(c.same_letters(&letters));
                prop_assert_eq!(c.sign(), Sign::from_bit(k == 2));
            }
        }
    }
}
