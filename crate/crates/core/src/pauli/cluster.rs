//! Cluster-chain operators: stabilizers, global and truncated symmetries, boundary
//! operators, string-order parameters and their decomposition into stabilizers.

use crate::error::{Error, Result};

use super::group::{check_pair, GroupElement};
use super::string::{Pauli, PauliString};

fn check_chain(n: usize) -> Result<()> {
    if n < 2 || n % 2 == 1 {
        Err(Error::InvalidQubitCount { n, min: 2 })
    } else {
        Ok(())
    }
}

/// Reduces a possibly out-of-range 1-indexed site onto `1..=n`.
pub fn wrap_site(j: i64, n: usize) -> usize {
    (j - 1).rem_euclid(n as i64) as usize + 1
}

/// Stabilizer `K_j = Z_{j-1} X_j Z_{j+1}` with cyclic neighbours.
pub fn stabilizer(j: usize, n: usize) -> Result<PauliString> {
    if n < 2 {
        return Err(Error::InvalidQubitCount { n, min: 2 });
    }
    if j == 0 || j > n {
        return Err(Error::SiteOutOfRange { site: j, n });
    }
    let left = PauliString::single(n, wrap_site(j as i64 - 1, n), Pauli::Z)?;
    let mid = PauliString::single(n, j, Pauli::X)?;
    let right = PauliString::single(n, wrap_site(j as i64 + 1, n), Pauli::Z)?;
    Ok(&(&left * &mid) * &right)
}

/// Global symmetry `U(g) = prod_{odd j} X_j^a prod_{even j} X_j^b`.
pub fn symmetry(g: GroupElement, n: usize) -> Result<PauliString> {
    check_chain(n)?;
    let xs: Vec<usize> = (1..=n).filter(|&j| if j % 2 == 1 { g.a } else { g.b }).collect();
    PauliString::from_supports(n, &xs, &[], 0)
}

/// Two-qubit representation `u(g) = X^a (x) X^b`.
pub fn local_symmetry(g: GroupElement) -> PauliString {
    let mut xs = Vec::new();
    if g.a {
        xs.push(1);
    }
    if g.b {
        xs.push(2);
    }
    PauliString::from_supports(2, &xs, &[], 0).expect("two-qubit support")
}

/// Left boundary operator `V^L(g) = Z^b (x) X^b Z^a`.
pub fn boundary_left(g: GroupElement) -> PauliString {
    let mut zs = Vec::new();
    let mut xs = Vec::new();
    if g.b {
        zs.push(1);
        xs.push(2);
    }
    if g.a {
        zs.push(2);
    }
    PauliString::from_supports(2, &xs, &zs, 0).expect("two-qubit support")
}

/// Right boundary operator `V^R(g) = Z^b X^a (x) Z^a`.
pub fn boundary_right(g: GroupElement) -> PauliString {
    let z1 = PauliString::from_supports(2, &[], if g.b { &[1] } else { &[] }, 0).unwrap();
    let x1 = PauliString::from_supports(2, if g.a { &[1] } else { &[] }, &[], 0).unwrap();
    let z2 = PauliString::from_supports(2, &[], if g.a { &[2] } else { &[] }, 0).unwrap();
    &(&z1 * &x1) * &z2
}

/// Number of two-qubit blocks.
pub fn num_blocks(n: usize) -> usize {
    n / 2
}

/// First (odd) site of block `p`, with blocks taken cyclically.
pub fn block_site(p: usize, n: usize) -> usize {
    2 * ((p - 1) % num_blocks(n)) + 1
}

fn check_blocks(p: usize, q: usize, n: usize) -> Result<()> {
    check_chain(n)?;
    let blocks = num_blocks(n);
    if p == 0 || p > blocks || q <= p || q - p >= blocks {
        return Err(Error::InvalidBlocks { p, q, blocks });
    }
    Ok(())
}

/// Truncated symmetry `U_[p,q](g)`: `u(g)` on the blocks strictly between `p` and `q`.
///
/// Blocks are cyclic, so `q` may exceed `n/2` as long as `q - p < n/2`.
pub fn truncated_symmetry(g: GroupElement, p: usize, q: usize, n: usize) -> Result<PauliString> {
    check_blocks(p, q, n)?;
    let u = local_symmetry(g);
    let mut out = PauliString::identity(n);
    for block in p + 1..q {
        out = &out * &u.embed(n, block_site(block, n))?;
    }
    Ok(out)
}

/// String-order parameter `S_[p,q](g) = V^L_p(g) U_[p,q](g) V^R_q(g)`.
pub fn sop(g: GroupElement, p: usize, q: usize, n: usize) -> Result<PauliString> {
    if g.is_trivial() {
        return Err(Error::TrivialElement);
    }
    let bulk = truncated_symmetry(g, p, q, n)?;
    let left = boundary_left(g).embed(n, block_site(p, n))?;
    let right = boundary_right(g).embed(n, block_site(q, n))?;
    Ok(&(&left * &bulk) * &right)
}

/// Twisted string-order parameter
/// `T^{(g,h)}_[p,q] = V^R_q(g) U(h) V^L_p(g) U_[p,q](g)`.
pub fn twisted_sop(
    g: GroupElement,
    h: GroupElement,
    p: usize,
    q: usize,
    n: usize,
) -> Result<PauliString> {
    check_pair(g, h)?;
    let bulk = truncated_symmetry(g, p, q, n)?;
    let right = boundary_right(g).embed(n, block_site(q, n))?;
    let left = boundary_left(g).embed(n, block_site(p, n))?;
    let uh = symmetry(h, n)?;
    Ok(&(&(&right * &uh) * &left) * &bulk)
}

/// Subset `r` of sites labelling the stabilizer product `kappa(r) = prod_j K_j^{r_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KappaIndex {
    n: usize,
    words: Vec<u64>,
}

impl KappaIndex {
    pub fn empty(n: usize) -> Self {
        KappaIndex { n, words: vec![0; n.div_ceil(64).max(1)] }
    }

    /// From 1-indexed sites; repeated sites cancel.
    pub fn from_sites(n: usize, sites: impl IntoIterator<Item = usize>) -> Self {
        let mut r = Self::empty(n);
        for s in sites {
            let i = wrap_site(s as i64, n) - 1;
            r.words[i / 64] ^= 1 << (i % 64);
        }
        r
    }

    pub fn from_words(n: usize, words: Vec<u64>) -> Self {
        KappaIndex { n, words }
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        KappaIndex { n, words: vec![mask] }
    }

    pub fn num_sites(&self) -> usize {
        self.n
    }

    pub fn contains(&self, site: usize) -> bool {
        let i = site - 1;
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn sites(&self) -> Vec<usize> {
        (1..=self.n).filter(|&s| self.contains(s)).collect()
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor(&self, other: &Self) -> Self {
        KappaIndex {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect(),
        }
    }

    /// Low 64 bits; exact for `n <= 64`.
    pub fn mask(&self) -> u64 {
        self.words[0]
    }
}

/// `kappa(r)` as an explicit Pauli string.
pub fn kappa(r: &KappaIndex) -> Result<PauliString> {
    let n = r.num_sites();
    let mut out = PauliString::identity(n);
    for j in r.sites() {
        out = &out * &stabilizer(j, n)?;
    }
    Ok(out)
}

/// Sites on which `U(g)` acts, which is also its stabilizer index.
pub fn symmetry_index(g: GroupElement, n: usize) -> KappaIndex {
    KappaIndex::from_sites(n, (1..=n).filter(|&j| if j % 2 == 1 { g.a } else { g.b }))
}

/// Stabilizer index of `S_[p,q](g)`: sites `2p..=2q-1`, odd ones weighted by `a` and even ones by `b`.
pub fn sop_index(g: GroupElement, p: usize, q: usize, n: usize) -> KappaIndex {
    KappaIndex::from_sites(
        n,
        (2 * p..=2 * q - 1).filter(|&j| if j % 2 == 1 { g.a } else { g.b }),
    )
}

/// `P = sign * kappa(r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaForm {
    pub sign: i8,
    pub index: KappaIndex,
}

/// Writes `P` as `±kappa(r)`, or returns `None` when it is not in the stabilizer group.
///
/// Each `K_j` carries the only X on site `j`, so the GF(2) system for `r` is already
/// diagonal: `r` is the X support of `P`. The sign follows from comparing phases.
pub fn kappa_decompose(p: &PauliString) -> Result<Option<KappaForm>> {
    let n = p.num_qubits();
    let index = KappaIndex::from_words(n, p.x_words().to_vec());
    let candidate = kappa(&index)?;
    if !candidate.same_support(p) {
        return Ok(None);
    }
    match (p.phase() + 4 - candidate.phase()) % 4 {
        0 => Ok(Some(KappaForm { sign: 1, index })),
        2 => Ok(Some(KappaForm { sign: -1, index })),
        _ => Ok(None),
    }
}
