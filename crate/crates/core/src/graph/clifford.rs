use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::stab::{Gate, Pauli};
use crate::Sign;

/// Single-qubit gate used when a side effect is written out as a circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocalGate {
    H,
    S,
    X,
    Z,
}

impl LocalGate {
    pub fn on(self, q: usize) -> Gate {
        match self {
            LocalGate::H => Gate::H(q),
            LocalGate::S => Gate::S(q),
            LocalGate::X => Gate::X(q),
            LocalGate::Z => Gate::Z(q),
        }
    }
}

/// Single-qubit Clifford decorating a graph vertex, up to global phase.
///
/// Stored as the signed images `C X C†` and `C Z C†`. The decorated state is
/// `(⊗ C_v) |G⟩`. The named constants cover the tags that occur in the
/// protocol; local complementation needs the rest of the group.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SideEffect {
    x: (Sign, Pauli),
    z: (Sign, Pauli),
}

const P: Sign = Sign::Plus;
const M: Sign = Sign::Minus;

impl SideEffect {
    pub const I: Self = Self { x: (P, Pauli::X), z: (P, Pauli::Z) };
    pub const X: Self = Self { x: (P, Pauli::X), z: (M, Pauli::Z) };
    pub const Y: Self = Self { x: (M, Pauli::X), z: (M, Pauli::Z) };
    pub const Z: Self = Self { x: (M, Pauli::X), z: (P, Pauli::Z) };
    pub const H: Self = Self { x: (P, Pauli::Z), z: (P, Pauli::X) };
    pub const S: Self = Self { x: (P, Pauli::Y), z: (P, Pauli::Z) };
    pub const SDG: Self = Self { x: (M, Pauli::Y), z: (P, Pauli::Z) };
    /// `Z` followed by `H`.
    pub const HZ: Self = Self { x: (M, Pauli::Z), z: (P, Pauli::X) };
    /// `H S H`, a square root of `X`.
    pub const SQRT_X: Self = Self { x: (P, Pauli::X), z: (M, Pauli::Y) };
    /// `H S† H`.
    pub const SQRT_X_DG: Self = Self { x: (P, Pauli::X), z: (P, Pauli::Y) };

    /// The tag for `Z^bit`.
    pub fn z_if(bit: bool) -> Self {
        if bit {
            Self::Z
        } else {
            Self::I
        }
    }

    /// Conjugate a signed Pauli: returns `C (s P) C†`.
    pub fn conjugate(self, sign: Sign, p: Pauli) -> (Sign, Pauli) {
        match p {
            Pauli::I => (sign, Pauli::I),
            Pauli::X => (sign * self.x.0, self.x.1),
            Pauli::Z => (sign * self.z.0, self.z.1),
            Pauli::Y => {
                // Y = i X Z
                let (k, l) = self.x.1.mul_with_phase(self.z.1);
                let s = self.x.0 * self.z.0 * Sign::from_bit(k == 1);
                (sign * s, l)
            }
        }
    }

    /// `self` followed by `next`, i.e. the operator `next · self`.
    pub fn then(self, next: SideEffect) -> SideEffect {
        Self { x: next.conjugate(self.x.0, self.x.1), z: next.conjugate(self.z.0, self.z.1) }
    }

    pub fn inverse(self) -> SideEffect {
        *group().iter().find(|c| c.then(self) == Self::I).expect("group is closed")
    }

    pub fn is_pauli(self) -> bool {
        self.x.1 == Pauli::X && self.z.1 == Pauli::Z
    }

    /// True for `I` and `Z`, the tags a photon may carry on the wire.
    pub fn is_z_type(self) -> bool {
        self == Self::I || self == Self::Z
    }

    /// Sign `s` with `C Z C† = s Z`, if `C` maps `Z` to `±Z`.
    pub fn z_sign(self) -> Option<Sign> {
        (self.z.1 == Pauli::Z).then_some(self.z.0)
    }

    /// Sign `s` with `C X C† = s X`, if `C` maps `X` to `±X`.
    pub fn x_sign(self) -> Option<Sign> {
        (self.x.1 == Pauli::X).then_some(self.x.0)
    }

    /// A shortest gate word over {H, S, X, Z} realizing this tag, applied in order.
    pub fn gates(self) -> &'static [LocalGate] {
        &words()[&self]
    }

    pub fn name(self) -> String {
        for (c, n) in [
            (Self::I, "I"),
            (Self::X, "X"),
            (Self::Y, "Y"),
            (Self::Z, "Z"),
            (Self::H, "H"),
            (Self::S, "S"),
            (Self::SDG, "Sdg"),
            (Self::HZ, "HZ"),
        ] {
            if c == self {
                return n.to_string();
            }
        }
        self.gates().iter().map(|g| format!("{g:?}")).collect::<Vec<_>>().join("")
    }
}

impl From<LocalGate> for SideEffect {
    fn from(g: LocalGate) -> Self {
        match g {
            LocalGate::H => Self::H,
            LocalGate::S => Self::S,
            LocalGate::X => Self::X,
            LocalGate::Z => Self::Z,
        }
    }
}

impl Default for SideEffect {
    fn default() -> Self {
        Self::I
    }
}

impl fmt::Debug for SideEffect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for SideEffect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn words() -> &'static HashMap<SideEffect, Vec<LocalGate>> {
    static WORDS: OnceLock<HashMap<SideEffect, Vec<LocalGate>>> = OnceLock::new();
    WORDS.get_or_init(|| {
        let mut seen = HashMap::from([(SideEffect::I, Vec::new())]);
        let mut queue = VecDeque::from([SideEffect::I]);
        while let Some(c) = queue.pop_front() {
            for g in [LocalGate::H, LocalGate::S, LocalGate::X, LocalGate::Z] {
                let next = c.then(g.into());
                if !seen.contains_key(&next) {
                    let mut w = seen[&c].clone();
                    w.push(g);
                    seen.insert(next, w);
                    queue.push_back(next);
                }
            }
        }
        seen
    })
}

/// All 24 elements, in a fixed order.
pub fn group() -> Vec<SideEffect> {
    let mut all: Vec<_> = words().iter().map(|(c, w)| (w.len(), w.clone(), *c)).collect();
    all.sort_by(|a, b| (a.0, format!("{:?}", a.1)).cmp(&(b.0, format!("{:?}", b.1))));
    all.into_iter().map(|(_, _, c)| c).collect()
}
