//! Sign reduction and the coordinatewise power map `v ↦ v^{p/q}`.

use serde::Serialize;

use super::vector::{norm_pow, pow_abs, Exponent, LpVector, UNDERFLOW};
use crate::error::{Error, Result};
use crate::perm_rep::Representation;

/// Drops all signs: `|v|` under the unsigned representation. Displacements can
/// only shrink, since `|ε a - b| >= ||a| - |b||`, and every norm of `v` is kept.
pub fn nonneg_reduction(rep: &Representation, v: &LpVector) -> Result<(Representation, LpVector)> {
    if v.len() != rep.n() {
        return Err(Error::Dimension {
            expected: rep.n(),
            found: v.len(),
        });
    }
    let abs = v.coords().iter().map(|x| x.abs()).collect();
    Ok((rep.unsigned(), LpVector::from_raw(v.exponent(), abs)))
}

fn check_order(p: f64, q: f64) -> Result<()> {
    if p.is_nan() || q.is_nan() || !(1.0 < p && p < q && q.is_finite()) {
        return Err(Error::ExponentOrder { p, q });
    }
    Ok(())
}

/// `w_i = v_i^{p/q}`, tagged with `r = q²/p`.
pub fn power_map(v: &LpVector, p: f64, q: f64) -> Result<LpVector> {
    check_order(p, q)?;
    if let Some((index, &value)) = v.coords().iter().enumerate().find(|(_, &x)| x < 0.0) {
        return Err(Error::NegativeCoordinate { index, value });
    }
    let alpha = p / q;
    let w = v
        .coords()
        .iter()
        .map(|&x| {
            if x < UNDERFLOW {
                0.0
            } else {
                (alpha * x.ln()).exp()
            }
        })
        .collect();
    Ok(LpVector::from_raw(Exponent::Finite(q * q / p), w))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerMapIdentities {
    /// `‖w‖_r^r` with `r = q²/p`
    pub w_r: f64,
    /// `‖v‖_q^q`
    pub v_q: f64,
    /// `‖w‖_q^q`
    pub w_q: f64,
    /// `‖v‖_p^p`
    pub v_p: f64,
    pub rel_err_r: f64,
    pub rel_err_q: f64,
}

impl PowerMapIdentities {
    pub fn max_rel_err(&self) -> f64 {
        self.rel_err_r.max(self.rel_err_q)
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Evaluates both sides of `‖w‖_r^r = ‖v‖_q^q` and `‖w‖_q^q = ‖v‖_p^p`.
pub fn power_map_identities(v: &LpVector, p: f64, q: f64) -> Result<PowerMapIdentities> {
    let w = power_map(v, p, q)?;
    let r = q * q / p;
    let (w_r, v_q) = (norm_pow(w.coords(), r), norm_pow(v.coords(), q));
    let (w_q, v_p) = (norm_pow(w.coords(), q), norm_pow(v.coords(), p));
    Ok(PowerMapIdentities {
        w_r,
        v_q,
        w_q,
        v_p,
        rel_err_r: rel_err(w_r, v_q),
        rel_err_q: rel_err(w_q, v_p),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorRatio {
    pub name: String,
    /// `‖π_g(w) - w‖_q^q`
    pub lhs: f64,
    /// `‖π_g(v) - v‖_p^p`
    pub rhs: f64,
    /// `lhs / (2^q rhs)`, zero when both sides vanish
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InterpolationReport {
    pub p: f64,
    pub q: f64,
    pub identities: PowerMapIdentities,
    pub per_generator: Vec<GeneratorRatio>,
    pub max_ratio: f64,
    pub holds: bool,
}

/// Checks `‖π_g(w) - w‖_q^q <= 2^q ‖π_g(v) - v‖_p^p` per generator with `w` the
/// power map of `v`. Signs must already be reduced away.
pub fn interpolation_check(
    rep: &Representation,
    v: &LpVector,
    p: f64,
    q: f64,
) -> Result<InterpolationReport> {
    if v.len() != rep.n() {
        return Err(Error::Dimension {
            expected: rep.n(),
            found: v.len(),
        });
    }
    if !rep.all_positive() {
        return Err(Error::InvalidArgument(
            "interpolation needs an all-positive representation; apply nonneg_reduction first"
                .into(),
        ));
    }
    let w = power_map(v, p, q)?;
    let identities = power_map_identities(v, p, q)?;
    let scale = pow_abs(2.0, q);
    let per_generator: Vec<GeneratorRatio> = rep
        .generators()
        .map(|(name, g)| {
            let lhs = norm_pow(&g.displacement_slice(w.coords()), q);
            let rhs = norm_pow(&g.displacement_slice(v.coords()), p);
            let ratio = if lhs == 0.0 { 0.0 } else { lhs / (scale * rhs) };
            GeneratorRatio {
                name: name.to_string(),
                lhs,
                rhs,
                ratio,
            }
        })
        .collect();
    let max_ratio = per_generator.iter().fold(0.0f64, |m, g| m.max(g.ratio));
    Ok(InterpolationReport {
        p,
        q,
        identities,
        holds: max_ratio <= 1.0,
        per_generator,
        max_ratio,
    })
}
