//! Exact stabilizer-tableau simulation.
//!
//! [`Tableau`] is the ground truth every other backend in this crate is
//! checked against: graph-state rewrites, the generation schedule, the tree
//! decoder and the end-to-end Pauli frame. It only knows Clifford gates and
//! single-qubit Pauli measurements; loss and errors are injected by callers
//! as explicit Pauli gates.

mod pauli;
mod tableau;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use pauli::{Pauli, PauliString};
pub use tableau::Tableau;

use crate::Sign;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StabError {
    #[error("a tableau needs at least one qubit")]
    Empty,
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("qubit {0} used twice")]
    DuplicateTargets(usize),
    #[error("Pauli string has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("product of anticommuting Pauli strings is not Hermitian")]
    NonHermitianProduct,
    #[error("qubit subset is entangled with its complement")]
    EntangledWithComplement,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Single-qubit measurement basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::X => "X",
            Basis::Y => "Y",
            Basis::Z => "Z",
        })
    }
}

/// Clifford gates understood by the tableau. `Cnot(control, target)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cz(usize, usize),
    Cnot(usize, usize),
}

impl Gate {
    pub fn qubits(self) -> impl Iterator<Item = usize> {
        let (a, b) = match self {
            Gate::H(q) | Gate::S(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => (q, None),
            Gate::Cz(a, b) | Gate::Cnot(a, b) => (a, Some(b)),
        };
        std::iter::once(a).chain(b)
    }

    /// The same gate with every qubit index passed through `f`.
    pub fn remapped(self, f: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::H(q) => Gate::H(f(q)),
            Gate::S(q) => Gate::S(f(q)),
            Gate::X(q) => Gate::X(f(q)),
            Gate::Y(q) => Gate::Y(f(q)),
            Gate::Z(q) => Gate::Z(f(q)),
            Gate::Cz(a, b) => Gate::Cz(f(a), f(b)),
            Gate::Cnot(a, b) => Gate::Cnot(f(a), f(b)),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::S(q) => write!(f, "S {q}"),
            Gate::X(q) => write!(f, "X {q}"),
            Gate::Y(q) => write!(f, "Y {q}"),
            Gate::Z(q) => write!(f, "Z {q}"),
            Gate::Cz(a, b) => write!(f, "CZ {a} {b}"),
            Gate::Cnot(a, b) => write!(f, "CNOT {a} {b}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measurement {
    pub outcome: Sign,
    pub deterministic: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn stabs(t: &Tableau) -> Vec<String> {
        t.canonical_stabilizers(&(0..t.num_qubits()).collect::<Vec<_>>())
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect()
    }

    #[test]
    fn fresh_tableau_is_all_zero() {
        assert_eq!(Tableau::new(0), Err(StabError::Empty));
        assert_eq!(stabs(&Tableau::new(1).unwrap()), ["+Z"]);
        assert_eq!(stabs(&Tableau::new(2).unwrap()), ["+ZI", "+IZ"]);
    }

    #[test]
    fn path_graph_from_gates() {
        // g_u = X_u prod_{v in N(u)} Z_v for the path 0-1-2.
        let mut t = Tableau::new(3).unwrap();
        t.apply_all([Gate::H(0), Gate::H(1), Gate::H(2), Gate::Cz(0, 1), Gate::Cz(1, 2)]).unwrap();
        for g in ["+XZI", "+ZXZ", "+IZX"] {
            assert!(t.is_stabilized_by(&g.parse().unwrap()).unwrap(), "{g}");
        }
        // Full RREF, so g_0 is reduced by g_2.
        assert_eq!(stabs(&t), ["+XIX", "+ZXZ", "+IZX"]);
    }

    #[test]
    fn gate_examples() {
        let mut t = Tableau::new(1).unwrap();
        t.apply(Gate::H(0)).unwrap();
        assert_eq!(stabs(&t), ["+X"]);

        let mut t = Tableau::new(2).unwrap();
        t.apply_all([Gate::H(0), Gate::H(1), Gate::Cz(0, 1)]).unwrap();
        assert_eq!(stabs(&t), ["+XZ", "+ZX"]);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut t = Tableau::new(1).unwrap();
        t.apply_all([Gate::H(0), Gate::Z(0)]).unwrap();
        let m = t.measure(Basis::X, 0, &mut rng).unwrap();
        assert_eq!(m, Measurement { outcome: Sign::Minus, deterministic: true });
    }

    #[test]
    fn gate_target_validation() {
        let mut t = Tableau::new(2).unwrap();
        assert_eq!(t.apply(Gate::H(2)), Err(StabError::QubitOutOfRange { qubit: 2, n: 2 }));
        assert_eq!(t.apply(Gate::Cz(1, 1)), Err(StabError::DuplicateTargets(1)));
        assert_eq!(t.apply(Gate::Cnot(0, 5)), Err(StabError::QubitOutOfRange { qubit: 5, n: 2 }));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(t.measure(Basis::Z, 9, &mut rng).is_err());
    }

    #[test]
    fn measurement_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut t = Tableau::new(1).unwrap();
        let m = t.measure(Basis::Z, 0, &mut rng).unwrap();
        assert_eq!(m, Measurement { outcome: Sign::Plus, deterministic: true });

        let mut minus = 0;
        for _ in 0..2000 {
            let mut t = Tableau::new(1).unwrap();
            let m = t.measure(Basis::X, 0, &mut rng).unwrap();
            assert!(!m.deterministic);
            minus += m.outcome.is_minus() as usize;
        }
        // 4 sigma for a fair coin over 2000 draws.
        assert!((minus as f64 - 1000.0).abs() < 90.0, "{minus}");
    }

    #[test]
    fn repeated_measurement_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for basis in [Basis::X, Basis::Y, Basis::Z] {
            let mut t = Tableau::new(3).unwrap();
            t.apply_all([Gate::H(0), Gate::Cnot(0, 1), Gate::H(2), Gate::S(2), Gate::Cz(1, 2)]).unwrap();
            let first = t.measure(basis, 1, &mut rng).unwrap();
            let second = t.measure(basis, 1, &mut rng).unwrap();
            assert!(second.deterministic);
            assert_eq!(first.outcome, second.outcome);
        }
    }

    #[test]
    fn two_vertex_graph_x_then_z() {
        // |00>+|01>+|10>-|11>: X_0 = s forces Z_1 = s.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let mut t = Tableau::new(2).unwrap();
            t.apply_all([Gate::H(0), Gate::H(1), Gate::Cz(0, 1)]).unwrap();
            let x = t.measure(Basis::X, 0, &mut rng).unwrap();
            let z = t.measure(Basis::Z, 1, &mut rng).unwrap();
            assert!(z.deterministic);
            assert_eq!(x.outcome, z.outcome);
        }
    }

    #[test]
    fn stabilizer_membership() {
        let t = Tableau::new(2).unwrap();
        assert!(t.is_stabilized_by(&"+ZI".parse().unwrap()).unwrap());
        assert!(!t.is_stabilized_by(&"-ZI".parse().unwrap()).unwrap());
        assert!(t.is_stabilized_by(&"+ZZ".parse().unwrap()).unwrap());
        assert!(!t.is_stabilized_by(&"+XI".parse().unwrap()).unwrap());
        assert!(t.is_stabilized_by(&"+Z".parse().unwrap()).is_err());
    }

    #[test]
    fn canonical_form_is_order_independent() {
        let mut a = Tableau::new(4).unwrap();
        a.apply_all([Gate::H(0), Gate::H(1), Gate::H(2), Gate::H(3), Gate::Cz(0, 1), Gate::Cz(1, 2), Gate::Cz(2, 3), Gate::Cz(0, 3)])
            .unwrap();
        // Different gate order, then the stabilizer X_0 Z_1 Z_3 applied as gates:
        // same state, different destabilizer signs.
        let mut b = Tableau::new(4).unwrap();
        b.apply_all([Gate::H(3), Gate::H(2), Gate::Cz(2, 3), Gate::H(0), Gate::Cz(0, 3), Gate::H(1), Gate::Cz(1, 2), Gate::Cz(0, 1)])
            .unwrap();
        b.apply_all([Gate::X(0), Gate::Z(1), Gate::Z(3)]).unwrap();
        assert_ne!(a, b);
        assert_eq!(stabs(&a), stabs(&b));
    }

    #[test]
    fn canonical_subset_requires_product_state() {
        let mut t = Tableau::new(3).unwrap();
        t.apply_all([Gate::H(0), Gate::Cnot(0, 1), Gate::H(2)]).unwrap();
        assert_eq!(t.canonical_stabilizers(&[0]), Err(StabError::EntangledWithComplement));
        let reduced: Vec<String> = t.canonical_stabilizers(&[2]).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(reduced, ["+X"]);
        let pair: Vec<String> = t.canonical_stabilizers(&[1, 0]).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(pair, ["+XX", "+ZZ"]);
    }

    #[test]
    fn peek_does_not_collapse() {
        let mut t = Tableau::new(2).unwrap();
        t.apply_all([Gate::H(0), Gate::Cnot(0, 1)]).unwrap();
        assert_eq!(t.peek(Basis::Z, 0).unwrap(), None);
        let before = t.clone();
        assert_eq!(t.peek(Basis::X, 1).unwrap(), None);
        assert_eq!(t, before);
        t.apply(Gate::X(1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let z0 = t.measure(Basis::Z, 0, &mut rng).unwrap().outcome;
        assert_eq!(t.peek(Basis::Z, 1).unwrap(), Some(-z0));
    }

    #[test]
    fn dump_has_one_signed_row_per_line() {
        let mut t = Tableau::new(2).unwrap();
        t.apply_all([Gate::X(1)]).unwrap();
        assert_eq!(t.dump(), "+ZI\n-IZ\n");
    }
}
