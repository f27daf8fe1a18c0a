use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Single-site Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// n-qubit Pauli operator `i^phase * prod_j X_j^{x_j} Z_j^{z_j}` in symplectic form.
///
/// Sites are 1-indexed and cyclic; site `j` is bit `j - 1` of the masks. On a
/// single site the X factor is written before the Z factor, so `x = z = 1` with
/// `phase = 1` is `Y = iXZ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

fn words(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

fn and_popcount(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(u, v)| (u & v).count_ones()).sum()
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString { n, x: vec![0; words(n)], z: vec![0; words(n)], phase: 0 }
    }

    /// Product of the listed single-site factors. Sites are 1-indexed and must be distinct.
    pub fn from_sites(n: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut p = Self::identity(n);
        for &(site, op) in factors {
            let i = p.index(site)?;
            if p.get_x(i) || p.get_z(i) {
                return Err(Error::param(format!("site {site} listed twice")));
            }
            let (xb, zb) = op.bits();
            p.set(i, xb, zb);
            if op == Pauli::Y {
                p.phase = (p.phase + 1) % 4;
            }
        }
        Ok(p)
    }

    pub fn single(n: usize, site: usize, op: Pauli) -> Result<Self> {
        Self::from_sites(n, &[(site, op)])
    }

    /// Operator with the given X and Z supports (1-indexed sites) and raw phase power.
    pub fn from_supports(n: usize, xs: &[usize], zs: &[usize], phase: u8) -> Result<Self> {
        let mut p = Self::identity(n);
        for &s in xs {
            let i = p.index(s)?;
            p.flip_x(i);
        }
        for &s in zs {
            let i = p.index(s)?;
            p.flip_z(i);
        }
        p.phase = phase % 4;
        Ok(p)
    }

    /// Builds from 64-bit masks; `n <= 64`.
    pub fn from_masks(n: usize, x: u64, z: u64, phase: u8) -> Result<Self> {
        if n > 64 {
            return Err(Error::ResourceGuard { what: "mask construction", n, max: 64 });
        }
        let keep = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if x & !keep != 0 || z & !keep != 0 {
            return Err(Error::param("mask has bits beyond n"));
        }
        Ok(PauliString { n, x: vec![x], z: vec![z], phase: phase % 4 })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Raw power of `i` in the `X^x Z^z` form.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// Power `m` such that the operator equals `i^m` times a product of I, X, Y, Z.
    pub fn pauli_phase(&self) -> u8 {
        ((self.phase as u32 + 4 * self.n as u32 - self.y_count() as u32) % 4) as u8
    }

    pub fn times_phase(&self, k: u8) -> Self {
        let mut p = self.clone();
        p.phase = (p.phase + k) % 4;
        p
    }

    pub fn negated(&self) -> Self {
        self.times_phase(2)
    }

    /// Same Pauli product with phase `+1` in the I/X/Y/Z form.
    pub fn hermitian_normalized(&self) -> Self {
        let mut p = self.clone();
        p.phase = (self.y_count() % 4) as u8;
        p
    }

    fn index(&self, site: usize) -> Result<usize> {
        if site == 0 || site > self.n {
            Err(Error::SiteOutOfRange { site, n: self.n })
        } else {
            Ok(site - 1)
        }
    }

    fn get_x(&self, i: usize) -> bool {
        (self.x[i / 64] >> (i % 64)) & 1 == 1
    }

    fn get_z(&self, i: usize) -> bool {
        (self.z[i / 64] >> (i % 64)) & 1 == 1
    }

    fn set(&mut self, i: usize, xb: bool, zb: bool) {
        let m = 1u64 << (i % 64);
        if xb {
            self.x[i / 64] |= m
        } else {
            self.x[i / 64] &= !m
        }
        if zb {
            self.z[i / 64] |= m
        } else {
            self.z[i / 64] &= !m
        }
    }

    fn flip_x(&mut self, i: usize) {
        self.x[i / 64] ^= 1u64 << (i % 64);
    }

    fn flip_z(&mut self, i: usize) {
        self.z[i / 64] ^= 1u64 << (i % 64);
    }

    /// X bit at a 1-indexed site.
    pub fn x_at(&self, site: usize) -> bool {
        self.get_x(site - 1)
    }

    pub fn z_at(&self, site: usize) -> bool {
        self.get_z(site - 1)
    }

    pub fn pauli_at(&self, site: usize) -> Pauli {
        Pauli::from_bits(self.x_at(site), self.z_at(site))
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    /// X mask as a single word; only meaningful for `n <= 64`.
    pub fn x_mask(&self) -> u64 {
        self.x[0]
    }

    pub fn z_mask(&self) -> u64 {
        self.z[0]
    }

    pub fn y_count(&self) -> usize {
        and_popcount(&self.x, &self.z) as usize
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    /// Identity up to phase.
    pub fn is_scalar(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    /// 1-indexed sites carrying an X bit.
    pub fn x_sites(&self) -> Vec<usize> {
        (1..=self.n).filter(|&s| self.x_at(s)).collect()
    }

    pub fn z_sites(&self) -> Vec<usize> {
        (1..=self.n).filter(|&s| self.z_at(s)).collect()
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as usize) % 2 == self.y_count() % 2
    }

    pub fn adjoint(&self) -> Self {
        let mut p = self.clone();
        let y = (self.y_count() % 2) as u8;
        p.phase = ((4 - self.phase) % 4 + 2 * y) % 4;
        p
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            Err(Error::SizeMismatch { left: self.n, right: other.n })
        } else {
            Ok(())
        }
    }

    /// Exact product `self * other`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        let swaps = and_popcount(&self.z, &other.x);
        let x = self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect();
        let z = self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect();
        let phase = ((self.phase as u32 + other.phase as u32 + 2 * swaps) % 4) as u8;
        Ok(PauliString { n: self.n, x, z, phase })
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        self.check_size(other)?;
        Ok((and_popcount(&self.x, &other.z) + and_popcount(&self.z, &other.x)) % 2 == 0)
    }

    /// Equal as Pauli products, ignoring phase.
    pub fn same_support(&self, other: &Self) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    /// Conjugation by a Hadamard on every site: X and Z swap, Y changes sign.
    pub fn hadamard_conjugate(&self) -> Self {
        let y = self.y_count() as u32;
        PauliString {
            n: self.n,
            x: self.z.clone(),
            z: self.x.clone(),
            phase: ((self.phase as u32 + 2 * y) % 4) as u8,
        }
    }

    /// Places this k-qubit operator on the sites `first, first+1, ...` of an
    /// `n`-qubit register, wrapping cyclically. `first` is 1-indexed.
    pub fn embed(&self, n: usize, first: usize) -> Result<Self> {
        if self.n > n {
            return Err(Error::SizeMismatch { left: self.n, right: n });
        }
        if first == 0 {
            return Err(Error::SiteOutOfRange { site: first, n });
        }
        let mut out = Self::identity(n);
        for k in 0..self.n {
            let target = (first - 1 + k) % n;
            out.set(target, self.get_x(k), self.get_z(k));
        }
        out.phase = self.phase;
        Ok(out)
    }

    /// Sign and label string, e.g. `-iXYZ`.
    pub fn label(&self) -> String {
        let prefix = match self.pauli_phase() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        let body: String = (1..=self.n).map(|s| self.pauli_at(s).symbol()).collect();
        format!("{prefix}{body}")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses labels such as `XIZ`, `-YY` or `+iXZ`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (mut k, rest) = if let Some(r) = s.strip_prefix("-i") {
            (3u8, r)
        } else if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else {
            (0, s.strip_prefix('+').unwrap_or(s))
        };
        let n = rest.chars().count();
        let mut factors = Vec::new();
        for (i, c) in rest.chars().enumerate() {
            let op = match c {
                'I' | '1' => continue,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(Error::param(format!("bad Pauli symbol '{other}'"))),
            };
            factors.push((i + 1, op));
        }
        let mut p = PauliString::from_sites(n, &factors)?;
        k %= 4;
        p.phase = (p.phase + k) % 4;
        Ok(p)
    }
}

impl Mul for &PauliString {
    type Output = PauliString;

    /// Panics on a qubit-count mismatch; use [`PauliString::try_mul`] to handle it.
    fn mul(self, rhs: &PauliString) -> PauliString {
        self.try_mul(rhs).expect("Pauli product of mismatched sizes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let prod = &p("X") * &p("Z");
        assert_eq!(prod, p("-iY"));
        assert_eq!(prod.label(), "-iY");
        assert_eq!(&p("Z") * &p("X"), p("+iY"));
        assert_eq!(&p("Y") * &p("Y"), p("I"));
    }

    #[test]
    fn single_site_multiplication_table() {
        // XY = iZ, YZ = iX, ZX = iY
        assert_eq!(&p("X") * &p("Y"), p("+iZ"));
        assert_eq!(&p("Y") * &p("Z"), p("+iX"));
        assert_eq!(&p("Y") * &p("X"), p("-iZ"));
    }

    #[test]
    fn anticommuting_strings() {
        assert!(!p("XZ").commutes_with(&p("ZI")).unwrap());
        assert!(p("XX").commutes_with(&p("ZZ")).unwrap());
        assert!(p("XX").commutes_with(&p("YY")).unwrap());
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(matches!(p("XX").try_mul(&p("X")), Err(Error::SizeMismatch { .. })));
        assert!(p("XX").commutes_with(&p("X")).is_err());
    }

    #[test]
    fn hermiticity_predicate() {
        assert!(p("Y").is_hermitian());
        assert!(!p("-iY").is_hermitian());
        assert!(p("-YXZ").is_hermitian());
        assert!(!(&p("X") * &p("Z")).is_hermitian());
    }

    #[test]
    fn hadamard_swaps_x_and_z() {
        assert_eq!(p("XZY").hadamard_conjugate(), p("-ZXY"));
    }

    #[test]
    fn embed_wraps() {
        let op = p("XZ").embed(4, 4).unwrap();
        assert_eq!(op, p("ZIIX"));
    }

    #[test]
    fn labels_round_trip() {
        for s in ["+XIZ", "-iYYX", "+iZ", "-XY"] {
            assert_eq!(p(s).label(), s);
        }
    }

    #[test]
    fn wide_registers() {
        let a = PauliString::single(130, 129, Pauli::X).unwrap();
        let b = PauliString::single(130, 129, Pauli::Z).unwrap();
        assert!(!a.commutes_with(&b).unwrap());
        assert_eq!((&a * &b).pauli_phase(), 3);
    }
}
