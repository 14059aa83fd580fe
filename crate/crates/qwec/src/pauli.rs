//! Signed Pauli words over labelled qubits and the code tables.
//!
//! Qubit of (particle p, role) sits at bit 3p + r with r = 2 for the coin,
//! 1 for x and 0 for y, the same packing the state vector uses.

use crate::error::{QwecError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;
use std::sync::OnceLock;

pub const P0: usize = 0;
pub const P1: usize = 1;
pub const P2: usize = 2;
pub const P3: usize = 3;
pub const P4: usize = 4;
pub const PEX: usize = 5;
pub const DATA: [usize; 3] = [P0, P2, P4];
const MAX_PARTICLES: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    C,
    X,
    Y,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::C, Role::X, Role::Y];

    pub fn bit(self) -> usize {
        match self {
            Role::C => 2,
            Role::X => 1,
            Role::Y => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Role::C => "c",
            Role::X => "x",
            Role::Y => "y",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QubitId {
    pub particle: usize,
    pub role: Role,
}

impl QubitId {
    pub fn new(particle: usize, role: Role) -> Self {
        QubitId { particle, role }
    }

    pub fn bit(self) -> usize {
        3 * self.particle + self.role.bit()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (u32, u32) {
        match self {
            Letter::I => (0, 0),
            Letter::X => (1, 0),
            Letter::Y => (1, 1),
            Letter::Z => (0, 1),
        }
    }

    fn from_bits(x: u32, z: u32) -> Self {
        match (x, z) {
            (0, 0) => Letter::I,
            (1, 0) => Letter::X,
            (1, 1) => Letter::Y,
            _ => Letter::Z,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn parse(ch: char) -> Result<Self> {
        match ch {
            'I' => Ok(Letter::I),
            'X' => Ok(Letter::X),
            'Y' => Ok(Letter::Y),
            'Z' => Ok(Letter::Z),
            o => Err(QwecError::Parse(format!("bad Pauli letter {o:?}"))),
        }
    }
}

/// i^phase times a tensor product of I, X, Y, Z letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliWord {
    phase: u8,
    x: u32,
    z: u32,
}

// i-exponent picked up by sigma(x1,z1) sigma(x2,z2) on one qubit
fn g_phase(x1: u32, z1: u32, x2: u32, z2: u32) -> i32 {
    let (x1, z1, x2, z2) = (x1 as i32, z1 as i32, x2 as i32, z2 as i32);
    match (x1, z1) {
        (0, 0) => 0,
        (1, 1) => z2 - x2,
        (1, 0) => z2 * (2 * x2 - 1),
        _ => x2 * (1 - 2 * z2),
    }
}

impl PauliWord {
    pub fn identity() -> Self {
        PauliWord { phase: 0, x: 0, z: 0 }
    }

    pub fn from_masks(phase: u8, x: u32, z: u32) -> Self {
        PauliWord { phase: phase & 3, x, z }
    }

    pub fn single(q: QubitId, l: Letter) -> Self {
        let (xb, zb) = l.bits();
        let b = q.bit();
        PauliWord { phase: 0, x: xb << b, z: zb << b }
    }

    /// Letters for one particle in (c, x, y) order, e.g. "ZZI".
    pub fn on_particle(particle: usize, triple: &str) -> Self {
        Self::try_on_particle(particle, triple).expect("valid triple")
    }

    pub fn try_on_particle(particle: usize, triple: &str) -> Result<Self> {
        let ls: Vec<char> = triple.chars().filter(|c| !c.is_whitespace()).collect();
        if ls.len() != 3 || particle >= MAX_PARTICLES {
            return Err(QwecError::Parse(format!("bad triple {triple:?} on particle {particle}")));
        }
        let mut w = Self::identity();
        for (ch, role) in ls.iter().zip(Role::ALL) {
            w = w * Self::single(QubitId::new(particle, role), Letter::parse(*ch)?);
        }
        Ok(w)
    }

    /// Word given by its (P4, P2, P0) triples, the reading order of the code table.
    pub fn data(p4: &str, p2: &str, p0: &str) -> Self {
        Self::on_particle(P4, p4) * Self::on_particle(P2, p2) * Self::on_particle(P0, p0)
    }

    pub fn with_phase(mut self, k: u8) -> Self {
        self.phase = (self.phase + k) & 3;
        self
    }

    pub fn neg(self) -> Self {
        self.with_phase(2)
    }

    /// Power of i in front of the letters.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_mask(&self) -> u32 {
        self.x
    }

    pub fn z_mask(&self) -> u32 {
        self.z
    }

    pub fn letter(&self, q: QubitId) -> Letter {
        let b = q.bit();
        Letter::from_bits((self.x >> b) & 1, (self.z >> b) & 1)
    }

    pub fn triple(&self, particle: usize) -> String {
        Role::ALL.iter().map(|r| self.letter(QubitId::new(particle, *r)).symbol()).collect()
    }

    pub fn restricted_to(&self, particle: usize) -> PauliWord {
        let m = 7u32 << (3 * particle);
        PauliWord { phase: 0, x: self.x & m, z: self.z & m }
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_identity(&self) -> bool {
        self.is_identity_up_to_phase() && self.phase == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn support_particles(&self) -> Vec<usize> {
        (0..MAX_PARTICLES).filter(|p| ((self.x | self.z) >> (3 * p)) & 7 != 0).collect()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// Sign of a Hermitian word: +1 or -1.
    pub fn sign(&self) -> i8 {
        if self.phase == 0 {
            1
        } else {
            -1
        }
    }

    pub fn commutes(&self, o: &PauliWord) -> bool {
        ((self.x & o.z).count_ones() + (self.z & o.x).count_ones()).is_multiple_of(2)
    }

    pub fn times(&self, o: &PauliWord) -> PauliWord {
        let mut e = self.phase as i32 + o.phase as i32;
        let mut diff = (self.x | self.z) & (o.x | o.z);
        while diff != 0 {
            let b = diff.trailing_zeros();
            diff &= diff - 1;
            e += g_phase((self.x >> b) & 1, (self.z >> b) & 1, (o.x >> b) & 1, (o.z >> b) & 1);
        }
        PauliWord { phase: e.rem_euclid(4) as u8, x: self.x ^ o.x, z: self.z ^ o.z }
    }

    pub fn inverse(&self) -> PauliWord {
        // letters square to I, so only the phase inverts
        let ph = (4 - self.phase) & 3;
        PauliWord { phase: ph, x: self.x, z: self.z }
    }

    /// Action on a computational basis index: P|k> = i^e |k'>.
    pub fn act_on_index(&self, k: usize) -> (u8, usize) {
        let k32 = k as u32;
        let e = self.phase as u32 + (self.x & self.z).count_ones() + 2 * (self.z & k32).count_ones();
        ((e & 3) as u8, (k32 ^ self.x) as usize)
    }

    fn phase_str(&self) -> &'static str {
        ["+1", "+i", "-1", "-i"][self.phase as usize]
    }
}

impl Mul for PauliWord {
    type Output = PauliWord;
    fn mul(self, o: PauliWord) -> PauliWord {
        PauliWord::times(&self, &o)
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase_str())?;
        let sup = self.support_particles();
        for p in (0..MAX_PARTICLES).rev() {
            if DATA.contains(&p) || sup.contains(&p) {
                let t: Vec<String> = self.triple(p).chars().map(|c| c.to_string()).collect();
                let name = if p == PEX { "PEX".to_string() } else { format!("P{p}") };
                write!(f, " ({})_{{{}}}", t.join(" "), name)?;
            }
        }
        Ok(())
    }
}

impl FromStr for PauliWord {
    type Err = QwecError;

    /// Parses the canonical rendering, e.g. "+1 (Z Z I)_{P4} (Z Z I)_{P2} (I I I)_{P0}".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (ph, rest) = s.split_once(' ').unwrap_or((s, ""));
        let phase = match ph {
            "+1" | "1" => 0,
            "+i" | "i" => 1,
            "-1" => 2,
            "-i" => 3,
            o => return Err(QwecError::Parse(format!("bad phase {o:?}"))),
        };
        let mut w = PauliWord::identity().with_phase(phase);
        let mut rest = rest.trim();
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| QwecError::Parse(rest.to_string()))?;
            let close = rest.find(')').ok_or_else(|| QwecError::Parse(rest.to_string()))?;
            let letters = &rest[open + 1..close];
            let after = &rest[close + 1..];
            let lb = after.find('{').ok_or_else(|| QwecError::Parse(after.to_string()))?;
            let rb = after.find('}').ok_or_else(|| QwecError::Parse(after.to_string()))?;
            let name = &after[lb + 1..rb];
            let p = match name {
                "PEX" | "Pex" | "pex" => PEX,
                n => n
                    .strip_prefix('P')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|d| *d < PEX)
                    .ok_or_else(|| QwecError::Parse(format!("bad particle {n:?}")))?,
            };
            w = w * PauliWord::try_on_particle(p, letters)?;
            rest = after[rb + 1..].trim();
        }
        Ok(w)
    }
}

impl Serialize for PauliWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Stabilizer generator s_i of the code table, i in 0..6.
pub fn stabilizer(i: usize) -> PauliWord {
    match i {
        0 => PauliWord::data("III", "ZZI", "ZZI"),
        1 => PauliWord::data("III", "ZIZ", "ZIZ"),
        2 => PauliWord::data("ZZI", "ZZI", "III"),
        3 => PauliWord::data("ZIZ", "ZIZ", "III"),
        4 => PauliWord::data("III", "XXX", "XXX"),
        5 => PauliWord::data("XXX", "XXX", "III"),
        _ => panic!("stabilizer index {i} out of range"),
    }
}

pub fn stabilizers() -> [PauliWord; 6] {
    [0, 1, 2, 3, 4, 5].map(stabilizer)
}

pub fn gauge_z(i: usize) -> PauliWord {
    match i {
        0 => PauliWord::data("ZZI", "III", "III"),
        1 => PauliWord::data("ZIZ", "III", "III"),
        _ => panic!("gauge index {i} out of range"),
    }
}

pub fn gauge_x(i: usize) -> PauliWord {
    match i {
        0 => PauliWord::data("XIX", "XIX", "XIX"),
        1 => PauliWord::data("XXI", "XXI", "XXI"),
        _ => panic!("gauge index {i} out of range"),
    }
}

pub fn logical_z() -> PauliWord {
    PauliWord::data("ZZZ", "ZZZ", "ZZZ")
}

pub fn logical_x() -> PauliWord {
    PauliWord::data("XXX", "III", "III")
}

/// i X Z, the logical Y.
pub fn logical_y() -> PauliWord {
    logical_x().times(&logical_z()).with_phase(1)
}

/// g = (g0Z g1Z s0 s1)(g0X g1X s4).
pub fn gauge_g() -> PauliWord {
    gauge_z(0) * gauge_z(1) * stabilizer(0) * stabilizer(1) * (gauge_x(0) * gauge_x(1) * stabilizer(4))
}

/// h = g0Z g1Z s0 s1 = (I Z Z) on every data particle.
pub fn gauge_h() -> PauliWord {
    gauge_z(0) * gauge_z(1) * stabilizer(0) * stabilizer(1)
}

/// The product of Z_c on P0, P2, P4.
pub fn coin_z_all() -> PauliWord {
    PauliWord::data("ZII", "ZII", "ZII")
}

/// The product of X_c on P0, P2, P4.
pub fn coin_x_all() -> PauliWord {
    PauliWord::data("XII", "XII", "XII")
}

#[derive(Clone, Debug, PartialEq)]
pub struct CodeBasis {
    pub stabilizers: [PauliWord; 6],
    /// [g0Z, g0X, g1Z, g1X]
    pub gauges: [PauliWord; 4],
    pub logicals: (PauliWord, PauliWord),
}

impl CodeBasis {
    pub fn standard() -> Self {
        CodeBasis {
            stabilizers: stabilizers(),
            gauges: [gauge_z(0), gauge_x(0), gauge_z(1), gauge_x(1)],
            logicals: (logical_z(), logical_x()),
        }
    }

    /// stabilizers, gauges, then Z and X logicals.
    pub fn all(&self) -> Vec<(String, PauliWord)> {
        let mut v: Vec<(String, PauliWord)> =
            self.stabilizers.iter().enumerate().map(|(i, s)| (format!("s{i}"), *s)).collect();
        for (n, g) in ["g0Z", "g0X", "g1Z", "g1X"].iter().zip(self.gauges) {
            v.push((n.to_string(), g));
        }
        v.push(("Zbar".into(), self.logicals.0));
        v.push(("Xbar".into(), self.logicals.1));
        v
    }

    /// Every commutation invariant of the code, as (description, holds).
    pub fn check_invariants(&self) -> Vec<(String, bool)> {
        let mut out = Vec::new();
        let all = self.all();
        for (i, (na, a)) in all.iter().enumerate() {
            for (nb, b) in all.iter().skip(i) {
                let expect_comm = !matches!(
                    (na.as_str(), nb.as_str()),
                    ("g0Z", "g0X") | ("g1Z", "g1X") | ("Zbar", "Xbar")
                );
                out.push((format!("[{na},{nb}] commute={expect_comm}"), a.commutes(b) == expect_comm));
            }
        }
        for (i, s) in self.stabilizers.iter().enumerate() {
            out.push((format!("s{i}^2 = +I"), (*s * *s).is_identity()));
        }
        out
    }
}

/// Lowest-weight data Pauli that anticommutes with s_i and commutes with the
/// other stabilizers, the gauges and both logicals.
pub fn destabilizer(i: usize) -> PauliWord {
    static D: OnceLock<[PauliWord; 6]> = OnceLock::new();
    D.get_or_init(|| {
        let cb = CodeBasis::standard();
        let mut others: Vec<PauliWord> = cb.gauges.to_vec();
        others.extend([cb.logicals.0, cb.logicals.1]);
        let qubits: Vec<usize> = DATA.iter().flat_map(|p| (0..3).map(move |b| 3 * p + b)).collect();
        let mut found = [None; 6];
        // words in order of weight; four letters are enough for this code
        let mut words: Vec<PauliWord> = Vec::new();
        for code in 0..4u32.pow(9) {
            let (mut x, mut z, mut c) = (0u32, 0u32, code);
            for q in &qubits {
                match c % 4 {
                    1 => x |= 1 << q,
                    2 => z |= 1 << q,
                    3 => {
                        x |= 1 << q;
                        z |= 1 << q
                    }
                    _ => {}
                }
                c /= 4;
            }
            let w = PauliWord::from_masks(0, x, z);
            if w.weight() <= 4 {
                words.push(w);
            }
        }
        words.sort_by_key(|w| (w.weight(), w.x, w.z));
        for w in words {
            if !others.iter().all(|o| o.commutes(&w)) {
                continue;
            }
            let anti: Vec<usize> = (0..6).filter(|j| !cb.stabilizers[*j].commutes(&w)).collect();
            if let [j] = anti[..] {
                found[j].get_or_insert(w);
            }
        }
        found.map(|w| w.expect("destabilizer within weight 4"))
    })[i]
}

/// Six syndrome bits, bit i = m_i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Syndrome(pub u8);

impl Syndrome {
    pub fn bit(&self, i: usize) -> u8 {
        (self.0 >> i) & 1
    }

    pub fn phase_part(&self) -> u8 {
        (self.0 >> 4) & 3
    }

    pub fn bit_part(&self) -> u8 {
        self.0 & 15
    }

    pub fn from_bits(bits: [u8; 6]) -> Self {
        Syndrome(bits.iter().enumerate().fold(0, |a, (i, b)| a | ((b & 1) << i)))
    }
}

impl fmt::Display for Syndrome {
    /// m5 down to m0.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..6).rev() {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

impl FromStr for Syndrome {
    type Err = QwecError;
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.len() != 6 || !t.chars().all(|c| c == '0' || c == '1') {
            return Err(QwecError::Parse(format!("bad syndrome {s:?}")));
        }
        Ok(Syndrome(u8::from_str_radix(&t, 2).expect("binary")))
    }
}

fn data_mask() -> u32 {
    DATA.iter().fold(0, |m, p| m | (7 << (3 * p)))
}

pub fn syndrome_of(e: &PauliWord) -> Result<Syndrome> {
    if (e.x | e.z) & !data_mask() != 0 {
        return Err(QwecError::OutsideData(e.to_string()));
    }
    let mut m = 0u8;
    for (i, s) in stabilizers().iter().enumerate() {
        if !e.commutes(s) {
            m |= 1 << i;
        }
    }
    Ok(Syndrome(m))
}

/// Phase-flip rows, indexed by (m5 m4).
pub fn phase_row(m54: u8) -> Option<PauliWord> {
    match m54 {
        0 => Some(PauliWord::identity()),
        1 => Some(PauliWord::on_particle(P0, "ZII")),
        2 => Some(PauliWord::on_particle(P4, "ZII")),
        3 => Some(PauliWord::on_particle(P2, "ZII")),
        _ => None,
    }
}

/// Bit-flip rows, indexed by (m3 m2 m1 m0).
pub fn bit_row(m3210: u8) -> Option<PauliWord> {
    let (p, t) = match m3210 {
        0b0000 => return Some(PauliWord::identity()),
        0b0001 => (P0, "IXI"),
        0b0010 => (P0, "IIX"),
        0b0011 => (P0, "XII"),
        0b0100 => (P4, "IXI"),
        0b1000 => (P4, "IIX"),
        0b1100 => (P4, "XII"),
        0b0101 => (P2, "IXI"),
        0b1010 => (P2, "IIX"),
        0b1111 => (P2, "XII"),
        _ => return None,
    };
    Some(PauliWord::on_particle(p, t))
}

/// The 15 single-flip rows checked against the lookup table: the 3 phase rows,
/// the 9 bit rows, and Y on each data coin (a phase row times a bit row).
pub fn table_rows() -> Vec<(PauliWord, Syndrome)> {
    let mut v = Vec::new();
    for m54 in 1..4u8 {
        v.push((phase_row(m54).unwrap(), Syndrome(m54 << 4)));
    }
    for m in [0b0001u8, 0b0010, 0b0011, 0b0100, 0b1000, 0b1100, 0b0101, 0b1010, 0b1111] {
        v.push((bit_row(m).unwrap(), Syndrome(m)));
    }
    v.push((PauliWord::on_particle(P0, "YII"), Syndrome(0b01_0011)));
    v.push((PauliWord::on_particle(P4, "YII"), Syndrome(0b10_1100)));
    v.push((PauliWord::on_particle(P2, "YII"), Syndrome(0b11_1111)));
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decoded {
    Correction(PauliWord),
    Uncorrectable,
}

impl Decoded {
    pub fn correction(&self) -> Option<PauliWord> {
        match self {
            Decoded::Correction(w) => Some(*w),
            Decoded::Uncorrectable => None,
        }
    }
}

pub fn decode_lookup(m: Syndrome) -> Decoded {
    match (phase_row(m.phase_part()), bit_row(m.bit_part())) {
        (Some(a), Some(b)) => Decoded::Correction(a * b),
        _ => Decoded::Uncorrectable,
    }
}

/// Symplectic vector of the data part: 9 x bits then 9 z bits.
fn data_vec(w: &PauliWord) -> u32 {
    let mut v = 0u32;
    for (k, p) in DATA.iter().enumerate() {
        v |= ((w.x >> (3 * p)) & 7) << (3 * k);
        v |= ((w.z >> (3 * p)) & 7) << (9 + 3 * k);
    }
    v
}

fn in_span(gens: &[u32], target: u32) -> bool {
    let mut basis: Vec<u32> = Vec::new();
    for &g in gens {
        let mut v = g;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let mut t = target;
    for &b in &basis {
        t = t.min(t ^ b);
    }
    t == 0
}

/// True when a b^{-1} is, up to phase, in the group of stabilizers and gauges.
pub fn equivalent_mod_gauge(a: &PauliWord, b: &PauliWord) -> bool {
    if (a.x | a.z | b.x | b.z) & !data_mask() != 0 {
        return false;
    }
    let r = a.times(&b.inverse());
    let cb = CodeBasis::standard();
    let gens: Vec<u32> = cb.stabilizers.iter().chain(cb.gauges.iter()).map(data_vec).collect();
    in_span(&gens, data_vec(&r))
}

/// Single-qubit gates that may be applied to every data coin at once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransversalGate {
    H,
    ZS,
    Z,
    T,
}

impl TransversalGate {
    /// Images of X and Z under conjugation, None if not Clifford.
    fn images(self) -> Option<(PauliWord, PauliWord)> {
        let q = QubitId::new(0, Role::C);
        let x = PauliWord::single(q, Letter::X);
        let y = PauliWord::single(q, Letter::Y);
        let z = PauliWord::single(q, Letter::Z);
        match self {
            TransversalGate::H => Some((z, x)),
            // Z S X S^dag Z = Z Y Z = -Y
            TransversalGate::ZS => Some((y.neg(), z)),
            TransversalGate::Z => Some((x.neg(), z)),
            TransversalGate::T => None,
        }
    }
}

fn move_coin(w: PauliWord, p: usize) -> PauliWord {
    PauliWord { phase: w.phase, x: w.x << (3 * p), z: w.z << (3 * p) }
}

/// u p u^dagger with u applied to the coins of P0, P2 and P4.
pub fn conjugate_transversal(p: &PauliWord, u: TransversalGate) -> Result<PauliWord> {
    let (ix, iz) = u.images().ok_or_else(|| QwecError::NonClifford(format!("{u:?}")))?;
    let mut out = PauliWord { phase: p.phase, x: p.x, z: p.z };
    for &pt in &DATA {
        let q = QubitId::new(pt, Role::C);
        let b = q.bit();
        // strip the letter, then multiply in its image
        let l = p.letter(q);
        out.x &= !(1 << b);
        out.z &= !(1 << b);
        let img = match l {
            Letter::I => PauliWord::identity(),
            Letter::X => move_coin(ix, pt),
            Letter::Z => move_coin(iz, pt),
            Letter::Y => move_coin(ix, pt).times(&move_coin(iz, pt)).with_phase(1),
        };
        // letters on other qubits commute with img, so order is immaterial
        out = out.times(&img);
    }
    Ok(out)
}
