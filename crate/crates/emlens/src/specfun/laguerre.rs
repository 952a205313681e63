//! Laguerre polynomial sequences L_n^{(0)} by upward three-term recurrence.
//!
//! The Green-function series only ever consumes the exponentially weighted
//! product e^{−x/2}·L_n(x). For large x the raw polynomials overflow f64 long
//! before the weighted product becomes representable, so the weighted form is
//! computed with a mantissa/exponent-split recurrence that stays finite for
//! x up to 1e4 and n in the thousands.

use crate::{Error, Result};

/// Plain polynomial values L_0(x)..L_N(x) and derivatives.
#[derive(Debug, Clone)]
pub struct LaguerreSeq {
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
}

/// Computes L_n(x) and L'_n(x) for n = 0..=n_max at x ≥ 0.
///
/// Upward recurrence (n+1)L_{n+1} = (2n+1−x)L_n − nL_{n−1}; derivatives via
/// L'_n(x) = n(L_n − L_{n−1})/x with L'_n(0) = −n.
pub fn laguerre_seq(n_max: usize, x: f64) -> Result<LaguerreSeq> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!(
            "laguerre_seq: x must be non-negative, got {x}"
        )));
    }
    let mut values = Vec::with_capacity(n_max + 1);
    let mut derivatives = Vec::with_capacity(n_max + 1);
    values.push(1.0);
    derivatives.push(0.0);
    if n_max >= 1 {
        values.push(1.0 - x);
        derivatives.push(-1.0);
    }
    for n in 1..n_max {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 - x) * values[n] - nf * values[n - 1]) / (nf + 1.0);
        values.push(next);
        let np = n + 1;
        let d = if x > 0.0 {
            np as f64 * (values[np] - values[np - 1]) / x
        } else {
            -(np as f64)
        };
        derivatives.push(d);
    }
    Ok(LaguerreSeq { values, derivatives })
}

/// Exponentially weighted Laguerre values w_n = e^{−x/2}·L_n(x), all bounded
/// by 1 in magnitude for x ≥ 0.
#[derive(Debug, Clone)]
pub struct WeightedLaguerre {
    pub values: Vec<f64>,
    /// d/dx [e^{−x/2} L_n(x)] = n(w_n − w_{n−1})/x − w_n/2.
    pub derivatives: Vec<f64>,
}

/// Computes w_n = e^{−x/2}L_n(x) for n = 0..=n_max without overflow.
///
/// The recurrence runs on (mantissa, binary exponent) pairs and each weighted
/// value is reassembled as m·2^e·e^{−x/2} through a single exp call, so values
/// whose true magnitude underflows simply flush to zero.
pub fn weighted_laguerre(n_max: usize, x: f64) -> Result<WeightedLaguerre> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!(
            "weighted_laguerre: x must be non-negative, got {x}"
        )));
    }
    let half = -0.5 * x;
    let assemble = |mant: f64, ex: i64| -> f64 {
        if mant == 0.0 {
            return 0.0;
        }
        let log = half + ex as f64 * std::f64::consts::LN_2 + mant.abs().ln();
        if log < -745.0 {
            0.0
        } else {
            mant.signum() * log.exp()
        }
    };

    // L_{n-1} and L_n share one binary exponent; rescaling by exact powers of
    // two keeps the recurrence arithmetic loss-free.
    const UP: f64 = 1.340_780_792_994_259_7e154; // 2^512
    const DOWN: f64 = 7.458_340_731_200_207e-155; // 2^-512
    let mut values = Vec::with_capacity(n_max + 1);
    let mut m_prev = 1.0f64;
    let mut m_cur = 1.0 - x;
    let mut exp2 = 0i64;
    values.push(assemble(m_prev, exp2));
    if n_max >= 1 {
        values.push(assemble(m_cur, exp2));
    }
    for n in 1..n_max {
        let nf = n as f64;
        let m_next = ((2.0 * nf + 1.0 - x) * m_cur - nf * m_prev) / (nf + 1.0);
        m_prev = m_cur;
        m_cur = m_next;
        let mag = m_prev.abs().max(m_cur.abs());
        if mag > UP {
            m_prev *= DOWN;
            m_cur *= DOWN;
            exp2 += 512;
        } else if mag > 0.0 && mag < DOWN {
            m_prev *= UP;
            m_cur *= UP;
            exp2 -= 512;
        }
        values.push(assemble(m_cur, exp2));
    }

    let mut derivatives = Vec::with_capacity(values.len());
    derivatives.push(-0.5 * values[0]);
    for n in 1..values.len() {
        let d = if x > 0.0 {
            n as f64 * (values[n] - values[n - 1]) / x - 0.5 * values[n]
        } else {
            -(n as f64) - 0.5
        };
        derivatives.push(d);
    }
    Ok(WeightedLaguerre { values, derivatives })
}
