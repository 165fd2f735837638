use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::linalg::{self, CMatrix};
use crate::algebra::{GateKind, GateTimes, NativeGate};
use crate::rng;

/// Virtual-Z angles indexed by quarter turns.
const QUARTER_TURNS: [f64; 4] = [0.0, FRAC_PI_2, PI, -FRAC_PI_2];

/// Physical X rotation used by a Clifford element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum XRotation {
    None,
    Plus90,
    Minus90,
    Full,
}

impl XRotation {
    const ORDER: [XRotation; 4] = [XRotation::None, XRotation::Plus90, XRotation::Minus90, XRotation::Full];

    pub fn angle(self) -> f64 {
        match self {
            XRotation::None => 0.0,
            XRotation::Plus90 => FRAC_PI_2,
            XRotation::Minus90 => -FRAC_PI_2,
            XRotation::Full => PI,
        }
    }

    fn gate_kind(self) -> Option<GateKind> {
        match self {
            XRotation::None => None,
            XRotation::Plus90 => Some(GateKind::X90),
            XRotation::Minus90 => Some(GateKind::X90m),
            XRotation::Full => Some(GateKind::X180),
        }
    }
}

/// One of the 24 single-qubit Cliffords.
///
/// The element is realized as `Zv(pre) X(angle) Zv(post)` in time order, whose
/// logical action is `Rz(-post) Rx(angle) Rz(-pre)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordElement {
    pub index: usize,
    pub unitary: CMatrix,
    pub pre_quarter_turns: u8,
    pub x: XRotation,
    pub post_quarter_turns: u8,
}

impl CliffordElement {
    pub fn pre_angle(&self) -> f64 {
        QUARTER_TURNS[self.pre_quarter_turns as usize]
    }

    pub fn post_angle(&self) -> f64 {
        QUARTER_TURNS[self.post_quarter_turns as usize]
    }
}

/// Native gate sequence for one qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NativeSequence {
    pub gates: Vec<NativeGate>,
}

impl NativeSequence {
    pub fn physical_x_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind.is_x_pulse()).count()
    }

    pub fn virtual_z_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind.is_virtual()).count()
    }

    pub fn duration_ns(&self) -> f64 {
        self.gates.iter().map(|g| g.duration_ns).sum()
    }
}

/// Multiplies out the phase so the first non-negligible entry is real and
/// positive.
pub fn canonicalize_phase(u: &CMatrix) -> CMatrix {
    let pivot = u.iter().copied().find(|z| z.norm() > 1e-9).unwrap_or(linalg::ONE);
    u * (pivot.conj() / pivot.norm())
}

struct Group {
    elements: Vec<CliffordElement>,
    product: Vec<[u8; 24]>,
    inverse: [u8; 24],
}

fn group() -> &'static Group {
    static GROUP: OnceLock<Group> = OnceLock::new();
    GROUP.get_or_init(build_group)
}

fn build_group() -> Group {
    let mut elements: Vec<CliffordElement> = Vec::with_capacity(24);
    for pre in 0..4u8 {
        for x in XRotation::ORDER {
            for post in 0..4u8 {
                let u = linalg::rz(-QUARTER_TURNS[post as usize])
                    * linalg::rx(x.angle())
                    * linalg::rz(-QUARTER_TURNS[pre as usize]);
                if elements.iter().any(|e| linalg::equal_up_to_phase(&e.unitary, &u, 1e-9)) {
                    continue;
                }
                elements.push(CliffordElement {
                    index: elements.len(),
                    unitary: canonicalize_phase(&u),
                    pre_quarter_turns: pre,
                    x,
                    post_quarter_turns: post,
                });
            }
        }
    }
    assert_eq!(elements.len(), 24, "single-qubit Clifford enumeration");
    let find = |u: &CMatrix| -> u8 {
        elements
            .iter()
            .position(|e| linalg::equal_up_to_phase(&e.unitary, u, 1e-9))
            .expect("Clifford group is closed") as u8
    };
    let product: Vec<[u8; 24]> = elements
        .iter()
        .map(|a| {
            let mut row = [0u8; 24];
            for (j, b) in elements.iter().enumerate() {
                row[j] = find(&(&a.unitary * &b.unitary));
            }
            row
        })
        .collect();
    let mut inverse = [0u8; 24];
    for (i, row) in product.iter().enumerate() {
        inverse[i] = row.iter().position(|&k| k == 0).expect("every element has an inverse") as u8;
    }
    Group { elements, product, inverse }
}

/// The 24 single-qubit Cliffords in canonical order; index 0 is the identity.
pub fn enumerate_c1() -> &'static [CliffordElement] {
    &group().elements
}

pub fn c1_element(index: usize) -> &'static CliffordElement {
    &group().elements[index]
}

/// Index of `U_a U_b` (apply `b` first).
pub fn c1_compose(a: usize, b: usize) -> usize {
    group().product[a][b] as usize
}

pub fn c1_inverse(a: usize) -> usize {
    group().inverse[a] as usize
}

/// Index of the element equal to `u` up to global phase.
pub fn c1_lookup(u: &CMatrix) -> Option<usize> {
    group().elements.iter().position(|e| linalg::equal_up_to_phase(&e.unitary, u, 1e-9))
}

/// Native sequence for element `index` on `qubit`.
pub fn compile_c1(index: usize, qubit: usize, times: &GateTimes) -> NativeSequence {
    let e = c1_element(index);
    let mut gates = Vec::with_capacity(3);
    if e.pre_quarter_turns != 0 {
        gates.push(NativeGate::virtual_z(qubit, e.pre_angle()));
    }
    if let Some(kind) = e.x.gate_kind() {
        gates.push(times.gate(kind, vec![qubit]));
    }
    if e.post_quarter_turns != 0 {
        gates.push(NativeGate::virtual_z(qubit, e.post_angle()));
    }
    NativeSequence { gates }
}

/// The element that undoes the sequence `indices` applied in order.
pub fn invert_c1_sequence(indices: &[usize]) -> usize {
    let total = indices.iter().fold(0, |acc, &i| c1_compose(i, acc));
    c1_inverse(total)
}

/// Mean number of physical X pulses over the group.
pub fn mean_physical_x_count() -> f64 {
    let times = GateTimes::single_qubit(1.0);
    (0..24).map(|i| compile_c1(i, 0, &times).physical_x_count()).sum::<usize>() as f64 / 24.0
}

pub fn random_c1<R: Rng + ?Sized>(rng: &mut R) -> usize {
    rng.random_range(0..24)
}

/// Independent uniform Clifford pair `(qubit 1, qubit 0)` for layer `position`.
pub fn sample_icrb_layer(seed: u64, position: u64) -> (usize, usize) {
    let mut r = rng::stream(seed, &[position]);
    (random_c1(&mut r), random_c1(&mut r))
}

/// Plain-text dump of the table: index, native recipe and canonical matrix.
pub fn c1_table_text() -> String {
    let mut out = String::from("# idx  pre   x     post  pulses  matrix (row-major, re+im i)\n");
    let fmt_turn = |k: u8| ["0", "+pi/2", "pi", "-pi/2"][k as usize];
    for e in enumerate_c1() {
        let x = match e.x {
            XRotation::None => "-",
            XRotation::Plus90 => "X90",
            XRotation::Minus90 => "X-90",
            XRotation::Full => "X180",
        };
        let _ = write!(
            out,
            "{:>5}  {:<5} {:<5} {:<5} {:>6}  ",
            e.index,
            fmt_turn(e.pre_quarter_turns),
            x,
            fmt_turn(e.post_quarter_turns),
            usize::from(e.x != XRotation::None)
        );
        let entries: Vec<String> = e
            .unitary
            .transpose()
            .iter()
            .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
            .collect();
        let _ = writeln!(out, "[{}]", entries.join(", "));
    }
    out
}
