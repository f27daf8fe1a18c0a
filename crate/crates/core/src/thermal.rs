//! Closed forms for the Gibbs state of the pure cluster Hamiltonian.
//!
//! At `J_X = J_ZZ = 0` the Gibbs state is `prod_j (1 + t K_j) / 2^n` with
//! `t = tanh(beta Delta / 2)`, so every stabilizer product `±kappa(r)` has expectation
//! `±t^{|r|}` and every other Pauli string vanishes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{min_over_pairs, ExpectationSet, GameSpec, PairMinimum};
use crate::pauli::{kappa_decompose, symmetry, twisted_sop, GroupElement, PauliString};

/// `(sqrt(13) - 1) / 3`: the value of `t^{n/2}` at which the minimum winning probability is 7/8.
pub fn critical_ratio() -> f64 {
    (13f64.sqrt() - 1.0) / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalPoint {
    pub n: usize,
    /// Inverse temperature; `f64::INFINITY` is the pure cluster state.
    pub beta: f64,
    pub delta: f64,
}

impl ThermalPoint {
    pub fn new(n: usize, beta: f64, delta: f64) -> Result<Self> {
        if n < 2 || n % 2 == 1 {
            return Err(Error::InvalidQubitCount { n, min: 2 });
        }
        if !(beta > 0.0) {
            return Err(Error::param(format!("beta must be positive, got {beta}")));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::param(format!("delta must be positive, got {delta}")));
        }
        Ok(ThermalPoint { n, beta, delta })
    }

    /// `T = 0` maps to `beta = inf`.
    pub fn at_temperature(n: usize, t: f64, delta: f64) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::param(format!("temperature must be finite and non-negative, got {t}")));
        }
        Self::new(n, if t == 0.0 { f64::INFINITY } else { 1.0 / t }, delta)
    }

    pub fn ground(n: usize, delta: f64) -> Result<Self> {
        Self::new(n, f64::INFINITY, delta)
    }

    /// `tanh(beta Delta / 2)`, exactly 1 at zero temperature.
    pub fn t(&self) -> f64 {
        if self.beta.is_infinite() {
            1.0
        } else {
            (0.5 * self.beta * self.delta).tanh()
        }
    }

    fn t_pow(&self, k: usize) -> f64 {
        if k == 0 {
            1.0
        } else {
            self.t().powi(k as i32)
        }
    }
}

/// `<U((a,b))> = t^{(a+b) n/2}`.
pub fn symmetry_ev(g: GroupElement, tp: &ThermalPoint) -> f64 {
    tp.t_pow((g.a as usize + g.b as usize) * tp.n / 2)
}

/// `<T^{(g,h)}_[p,q]>` from the case table, with `d = 2(q - p)` sites between corners.
pub fn twisted_ev(g: GroupElement, h: GroupElement, p: usize, q: usize, tp: &ThermalPoint) -> Result<f64> {
    crate::pauli::check_pair(g, h)?;
    if q <= p || q - p >= tp.n / 2 {
        return Err(Error::InvalidBlocks { p, q, blocks: tp.n / 2 });
    }
    let n = tp.n;
    let d = 2 * (q - p);
    let k = match (g, h) {
        (GroupElement::Z, _) => n / 2,
        (_, GroupElement::Z) => n - d / 2,
        _ => (n + d) / 2,
    };
    Ok(-tp.t_pow(k))
}

/// `<P>` for any Hermitian Pauli string in the thermal cluster state.
pub fn pauli_ev(p: &PauliString, tp: &ThermalPoint) -> Result<f64> {
    if p.num_qubits() != tp.n {
        return Err(Error::SizeMismatch { left: p.num_qubits(), right: tp.n });
    }
    if !p.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    Ok(match kappa_decompose(p)? {
        Some(form) => f64::from(form.sign) * tp.t_pow(form.index.weight()),
        None => 0.0,
    })
}

/// The five inputs of the winning probability, each reduced to a stabilizer product.
pub fn expectation_set(g: GroupElement, h: GroupElement, p: usize, q: usize, tp: &ThermalPoint) -> Result<ExpectationSet> {
    let n = tp.n;
    let ug = symmetry(g, n)?;
    let t = twisted_sop(g, h, p, q, n)?;
    Ok(ExpectationSet {
        u_g: pauli_ev(&ug, tp)?,
        u_h: pauli_ev(&symmetry(h, n)?, tp)?,
        u_gh: pauli_ev(&symmetry(g.compose(h), n)?, tp)?,
        twisted: pauli_ev(&t, tp)?,
        ug_twisted: pauli_ev(&(&ug * &t), tp)?,
    })
}

/// `(3 + 2 t^{n/2} + 3 t^n) / 8`.
pub fn min_win(tp: &ThermalPoint) -> f64 {
    let s = tp.t_pow(tp.n / 2);
    (3.0 + 2.0 * s + 3.0 * s * s) / 8.0
}

/// Minimum over the six pairs computed term by term from the win operator, for the
/// given corner layout.
pub fn min_win_over_pairs(tp: &ThermalPoint, corners: [usize; 3]) -> Result<PairMinimum> {
    min_over_pairs(|g, h| {
        let spec = GameSpec::with_corners(tp.n, g, h, corners)?;
        crate::game::win_operator(&spec)?
            .iter()
            .map(|(c, o)| Ok(c * pauli_ev(o, tp)?))
            .sum()
    })
}

/// `T_c = Delta / (2 artanh(r^{2/n}))` with `r = (sqrt(13) - 1)/3`.
pub fn critical_temperature(n: usize, delta: f64) -> Result<f64> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidQubitCount { n, min: 2 });
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::param(format!("delta must be positive, got {delta}")));
    }
    let log_t = 2.0 / n as f64 * critical_ratio().ln();
    // artanh(t) = ln((1 + t) / (1 - t)) / 2, with 1 - t = -expm1(log_t) kept precise
    let one_minus = -log_t.exp_m1();
    let artanh = 0.5 * ((2.0 - one_minus) / one_minus).ln();
    Ok(delta / (2.0 * artanh))
}

/// `n_c = 2 ln r / ln tanh(Delta / 2T)`: sizes below `n_c` beat the classical bound.
pub fn critical_size(t: f64, delta: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::param(format!("temperature must be positive, got {t}")));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::param(format!("delta must be positive, got {delta}")));
    }
    // ln tanh x = ln(1 - e^{-2x}) - ln(1 + e^{-2x})
    let e = (-delta / t).exp();
    let ln_tanh = (-e).ln_1p() - e.ln_1p();
    if ln_tanh == 0.0 {
        return Err(Error::Numerical(format!(
            "tanh(Delta/2T) rounds to 1 at T = {t}; the critical size overflows"
        )));
    }
    Ok(2.0 * critical_ratio().ln() / ln_tanh)
}

/// Per-qubit Z flip probability `1 / (1 + e^{beta Delta})` that turns the cluster state
/// into the Gibbs state. With `Delta = 2` this is `1 / (1 + e^{2 beta})`.
pub fn dephasing_probability(beta: f64, delta: f64) -> Result<f64> {
    if !(beta >= 0.0) {
        return Err(Error::param(format!("beta must be non-negative, got {beta}")));
    }
    if beta.is_infinite() {
        return Ok(0.0);
    }
    Ok(1.0 / (1.0 + (beta * delta).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use GroupElement as G;

    #[test]
    fn zero_temperature_limits() {
        let tp = ThermalPoint::ground(12, 2.0).unwrap();
        assert_eq!(min_win(&tp), 1.0);
        for g in G::ALL {
            assert_eq!(symmetry_ev(g, &tp), 1.0);
        }
        for (g, h) in G::ordered_pairs() {
            assert_eq!(twisted_ev(g, h, 1, 3, &tp).unwrap(), -1.0);
        }
    }

    #[test]
    fn high_temperature_limit() {
        let tp = ThermalPoint::new(12, 1e-12, 2.0).unwrap();
        assert!((min_win(&tp) - 3.0 / 8.0).abs() < 1e-10);
        assert_eq!(dephasing_probability(0.0, 2.0).unwrap(), 0.5);
    }

    #[test]
    fn closed_form_matches_stabilizer_reduction() {
        for n in [6, 12, 18] {
            let tp = ThermalPoint::at_temperature(n, 0.7, 2.0).unwrap();
            for (g, h) in G::ordered_pairs() {
                for q in 2..=n / 2 {
                    let e = expectation_set(g, h, 1, q, &tp).unwrap();
                    let closed = twisted_ev(g, h, 1, q, &tp).unwrap();
                    assert!((e.twisted - closed).abs() < 1e-14, "n={n} {g}{h} q={q}");
                    assert_eq!(e.u_g, symmetry_ev(g, &tp));
                }
            }
        }
    }

    #[test]
    fn critical_size_rejects_underflow() {
        assert!(critical_size(1e-3, 2.0).is_err());
        assert!(critical_size(0.0, 2.0).is_err());
    }
}
