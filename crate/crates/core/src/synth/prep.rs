//! Preparation routines `K_b : |b> -> |phi>`.
//!
//! [`state_prep`] is a binary-tree amplitude loader: qubit `l` is rotated,
//! conditioned on the `l` qubits above it, so that each block of the
//! register receives its share of probability. Blocks at one level that
//! need the same angle share a single uncontrolled rotation and only the
//! exceptions get controlled corrections; structured states (step
//! functions, a few bumps on a flat background) stay polynomial in size.

use std::f64::consts::FRAC_PI_4;

use crate::circuit::{pattern, Circuit, Control, Gate};
use crate::error::{Error, Result};

/// Amplitudes whose norm is off by more than this are rejected.
pub const NORM_TOL: f64 = 1e-10;

/// Angles closer than this are merged into one rotation.
const ANGLE_MERGE_TOL: f64 = 1e-14;

/// A preparation circuit together with the basis state it starts from.
#[derive(Debug, Clone, PartialEq)]
pub struct Preparation {
    pub circuit: Circuit,
    pub basis: usize,
}

fn register_width(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::param(format!(
            "amplitude vector length {len} is not a power of two"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Circuit with `apply(K, |basis_b>) = target` for a nonnegative unit vector.
pub fn state_prep(target: &[f64], basis_b: usize) -> Result<Circuit> {
    let n = register_width(target.len())?;
    if basis_b >= target.len() {
        return Err(Error::param(format!(
            "basis {basis_b} outside 0..{}",
            target.len()
        )));
    }
    if let Some(a) = target.iter().find(|a| !a.is_finite() || **a < 0.0) {
        return Err(Error::param(format!(
            "target amplitude {a} is negative or not finite"
        )));
    }
    let norm_sq: f64 = target.iter().map(|a| a * a).sum();
    if (norm_sq.sqrt() - 1.0).abs() > NORM_TOL {
        return Err(Error::param(format!(
            "target has norm {}, expected 1",
            norm_sq.sqrt()
        )));
    }

    let mut c = Circuit::new(n);
    for q in 0..n {
        if (basis_b >> (n - 1 - q)) & 1 == 1 {
            c.push(Gate::x(q))?;
        }
    }

    // prefix[k] = mass of target[..k]
    let mut prefix = Vec::with_capacity(target.len() + 1);
    prefix.push(0.0);
    for a in target {
        prefix.push(prefix.last().unwrap() + a * a);
    }
    let mass = |lo: usize, hi: usize| (prefix[hi] - prefix[lo]).max(0.0);

    let qubits: Vec<usize> = (0..n).collect();
    for level in 0..n {
        let block = 1usize << (n - level);
        let half = block / 2;
        let angles: Vec<(usize, f64)> = (0..1usize << level)
            .filter_map(|p| {
                let lo = p * block;
                let total = mass(lo, lo + block);
                (total > 0.0).then(|| {
                    let low = mass(lo, lo + half);
                    let high = mass(lo + half, lo + block);
                    (p, high.sqrt().atan2(low.sqrt()))
                })
            })
            .collect();
        let Some(common) = most_common_angle(angles.iter().map(|&(_, t)| t)) else {
            continue;
        };
        if common != 0.0 {
            c.push(Gate::ry(level, common))?;
        }
        for &(p, theta) in &angles {
            if (theta - common).abs() > ANGLE_MERGE_TOL {
                let controls = pattern(&qubits[..level], p);
                c.push(Gate::ry(level, theta - common).with_all(controls))?;
            }
        }
    }
    Ok(c)
}

fn most_common_angle(angles: impl Iterator<Item = f64>) -> Option<f64> {
    let mut sorted: Vec<f64> = angles.collect();
    sorted.sort_by(f64::total_cmp);
    let mut best: Option<(usize, f64)> = None;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] - sorted[i] <= ANGLE_MERGE_TOL {
            j += 1;
        }
        if best.is_none_or(|(count, _)| j - i > count) {
            best = Some((j - i, sorted[i]));
        }
        i = j;
    }
    best.map(|(_, t)| t)
}

/// Cycle column `(|1> + |N-1>)/sqrt 2` from `|N/2 - 1>`: a Hadamard on the top
/// qubit, then the `|0>` branch clears the middle bits.
pub fn kb_cycle(n: usize) -> Result<Preparation> {
    if n < 2 {
        return Err(Error::param(format!(
            "cycle preparation needs n >= 2, got {n}"
        )));
    }
    let mut c = Circuit::new(n);
    c.push(Gate::h(0))?;
    for q in 1..n - 1 {
        c.push(Gate::x(q).with(Control::off(0)))?;
    }
    Ok(Preparation {
        circuit: c,
        basis: (1 << (n - 1)) - 1,
    })
}

/// Rotation angles of [`kb_complete`]:
/// `cos^2(t_i) = (2^{n-i} - 1) / (2^{n-i+1} - 1)` for `i = 1..n-1`.
pub fn kb_complete_angles(n: usize) -> Vec<f64> {
    (1..n)
        .map(|i| {
            let upper = (1u64 << (n - i)) as f64;
            upper.sqrt().atan2((upper - 1.0).sqrt())
        })
        .collect()
}

/// Complete-graph column (uniform over `1..N`) from `|1>`.
pub fn kb_complete(n: usize) -> Result<Preparation> {
    kb_complete_with_angles(n, &kb_complete_angles(n))
}

/// [`kb_complete`] with caller-supplied cascade angles.
///
/// Rotation `i` splits the all-zero-prefix branch on qubit `i - 1`. Each
/// branch that settled with qubit `k` set is then spread uniformly over
/// the qubits below `k`, deepest branch first so that a single control
/// on qubit `k` suffices.
pub fn kb_complete_with_angles(n: usize, angles: &[f64]) -> Result<Preparation> {
    if n == 0 {
        return Err(Error::param("complete-graph preparation needs n >= 1"));
    }
    if angles.len() != n - 1 {
        return Err(Error::param(format!(
            "expected {} angles, got {}",
            n - 1,
            angles.len()
        )));
    }
    let mut c = Circuit::new(n);
    for (k, &theta) in angles.iter().enumerate() {
        c.push(Gate::ry(k, theta).with_all((0..k).map(Control::off)))?;
    }
    for k in (0..n.saturating_sub(1)).rev() {
        for q in k + 1..n - 1 {
            c.push(Gate::h(q).with(Control::on(k)))?;
        }
        // the last qubit still holds the 1 of |b>
        c.push(Gate::ry(n - 1, -FRAC_PI_4).with(Control::on(k)))?;
    }
    Ok(Preparation {
        circuit: c,
        basis: 1,
    })
}
