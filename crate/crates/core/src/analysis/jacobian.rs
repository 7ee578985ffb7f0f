use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::FourierMeasure;
use crate::soliton::{build_soliton, MomentumMap, SolitonParams};

/// Momentum-map Jacobian at v = (|v|, 0).
#[derive(Clone, Debug, Serialize)]
pub struct JacobianTable {
    pub v: f64,
    pub omega: f64,
    /// partials[r][c] = ∂(P1, P2, M)_r / ∂(v1, v2, ω)_c.
    pub partials: [[f64; 3]; 3],
    /// Determinant of the full 3x3 matrix.
    pub det: f64,
    /// ∂P2/∂v2 (∂P1/∂v1 ∂M/∂ω - ∂M/∂v1 ∂P1/∂ω), valid when the structural
    /// zeros vanish.
    pub det_reduced: f64,
    pub positive: bool,
    /// ∂P1/∂v1 and ∂P2/∂v2 split into the ω-independent part (kinetic term
    /// included) and the part proportional to ω^2.
    pub plus: [f64; 2],
    pub minus: [f64; 2],
    pub simplified: SimplifiedForms,
}

/// The same quantities from the simplified integrals valid at v = (|v|, 0),
/// D = |k|^2 - v^2 k1^2.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SimplifiedForms {
    /// ∂P1+/∂v1 = m + ∫k2²ρ̂²/(k²D) + ∫5v²k1²k2²ρ̂²/(k²D²) + ∫4v⁴k1⁴k2²ρ̂²/(k²D³).
    pub p1_plus: f64,
    /// ∂P2+/∂v2 = m + ∫v²k2⁴ρ̂²/(k²D²) + ∫k1²ρ̂²/(k²D) (1 - 2v²k2²/D)².
    pub p2_plus: f64,
    /// ∂Pj-/∂vj = ω²∫kj²|∇ρ̂|²/D² + ω²∫4v²k1²kj²|∇ρ̂|²/D³.
    pub p_minus: [f64; 2],
    /// ∂P1/∂ω = 2ω|v| X1.
    pub p1_omega: f64,
    /// X1 = ∫k1²|∇ρ̂|²/D², X2 = ∫k1⁴|∇ρ̂|²/D³, Y = ∫|∇ρ̂|²/D.
    pub x1: f64,
    pub x2: f64,
    pub y: f64,
    /// ∂P1/∂v1 ∂M/∂ω - ∂M/∂v1 ∂P1/∂ω assembled term by term from the
    /// positive pieces: P1+ M_ω + ω²I(X1 + 4v²X2) + ω²Y X1 + 4ω²v²(Y X2 - X1²).
    pub minor: f64,
    /// Cauchy-Schwarz step X1² <= Y X2.
    pub cauchy_schwarz_holds: bool,
}

/// Evaluates the momentum-map Jacobian at v = (v, 0) with the given
/// measure, both from the general formulas and from the simplified ones.
pub fn jacobian_entries<Q: FourierMeasure>(
    v: f64,
    omega: f64,
    map: &MomentumMap<'_, Q>,
) -> Result<JacobianTable> {
    if !(0.0..1.0).contains(&v) {
        return Err(Error::Domain(format!("jacobian needs 0 <= v < 1, got {v}")));
    }
    let params = SolitonParams::new([v, 0.0], omega)?;
    let jac = map.jacobian(params);
    let m = jac.total;
    let det_reduced = m[1][1] * (m[0][0] * m[2][2] - m[2][0] * m[0][2]);
    let det = jac.det();
    let plus = [
        jac.kinetic[0][0] + jac.plus[0][0],
        jac.kinetic[1][1] + jac.plus[1][1],
    ];
    let minus = [jac.minus[0][0], jac.minus[1][1]];

    let rho = map.density();
    let v2 = v * v;
    let f = map.measure().integrate(|k1, k2| {
        let kk = k1 * k1 + k2 * k2;
        if kk == 0.0 {
            return [0.0; 10];
        }
        let kap = kk.sqrt();
        let r2 = rho.hat_radial(kap).powi(2);
        let g = rho.hat_radial_derivative(kap).powi(2);
        let (a, b) = (k1 * k1, k2 * k2);
        let d = kk - v2 * a;
        let (d2, d3) = (d * d, d * d * d);
        let t = 1.0 - 2.0 * v2 * b / d;
        [
            b * r2 / (kk * d),
            5.0 * v2 * a * b * r2 / (kk * d2),
            4.0 * v2 * v2 * a * a * b * r2 / (kk * d3),
            v2 * b * b * r2 / (kk * d2),
            a * r2 / (kk * d) * t * t,
            a * g / d2,
            a * a * g / d3,
            g / d,
            b * g / d2,
            a * b * g / d3,
        ]
    });
    let kin = jac.kinetic;
    let p1_plus = kin[0][0] + f[0] + f[1] + f[2];
    let p2_plus = kin[1][1] + f[3] + f[4];
    let w2 = omega * omega;
    let (x1, x2, y) = (f[5], f[6], f[7]);
    let p_minus = [w2 * (x1 + 4.0 * v2 * x2), w2 * (f[8] + 4.0 * v2 * f[9])];
    let inertia = map.particle().inertia;
    let m_omega = inertia + y;
    let minor = p1_plus * m_omega
        + w2 * inertia * (x1 + 4.0 * v2 * x2)
        + w2 * y * x1
        + 4.0 * w2 * v2 * (y * x2 - x1 * x1);
    let simplified = SimplifiedForms {
        p1_plus,
        p2_plus,
        p_minus,
        p1_omega: 2.0 * omega * v * x1,
        x1,
        x2,
        y,
        minor,
        cauchy_schwarz_holds: x1 * x1 <= y * x2 * (1.0 + 1e-12),
    };
    Ok(JacobianTable {
        v,
        omega,
        partials: m,
        det,
        det_reduced,
        positive: det > 0.0 && det_reduced > 0.0,
        plus,
        minus,
        simplified,
    })
}

/// Analytic Jacobian next to central differences of a momentum function.
#[derive(Clone, Debug, Serialize)]
pub struct FdComparison {
    pub analytic: [[f64; 3]; 3],
    pub fd: [[f64; 3]; 3],
    pub h: f64,
    /// Largest entrywise relative error. Entries below 1e-8 max|J| are
    /// measured against max|J| instead of themselves.
    pub max_rel_error: f64,
}

fn compare(analytic: [[f64; 3]; 3], fd: [[f64; 3]; 3], h: f64) -> FdComparison {
    let scale = analytic
        .iter()
        .flatten()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let mut err = 0.0f64;
    for r in 0..3 {
        for c in 0..3 {
            let a = analytic[r][c];
            let denom = if a.abs() > 1e-8 * scale {
                a.abs()
            } else {
                scale
            };
            err = err.max((a - fd[r][c]).abs() / denom);
        }
    }
    FdComparison {
        analytic,
        fd,
        h,
        max_rel_error: err,
    }
}

fn central_differences(
    params: SolitonParams,
    h: f64,
    mut f: impl FnMut(SolitonParams) -> Result<([f64; 2], f64)>,
) -> Result<[[f64; 3]; 3]> {
    let mut fd = [[0.0; 3]; 3];
    for c in 0..3 {
        let (mut up, mut dn) = (params, params);
        if c < 2 {
            up.v[c] += h;
            dn.v[c] -= h;
        } else {
            up.omega += h;
            dn.omega -= h;
        }
        let (pa, ma) = f(SolitonParams::new(up.v, up.omega)?)?;
        let (pb, mb) = f(SolitonParams::new(dn.v, dn.omega)?)?;
        fd[0][c] = (pa[0] - pb[0]) / (2.0 * h);
        fd[1][c] = (pa[1] - pb[1]) / (2.0 * h);
        fd[2][c] = (ma - mb) / (2.0 * h);
    }
    Ok(fd)
}

/// Analytic partials of `map` against central differences of the same map.
pub fn jacobian_vs_finite_difference<Q: FourierMeasure>(
    params: SolitonParams,
    map: &MomentumMap<'_, Q>,
    h: f64,
) -> Result<FdComparison> {
    let analytic = map.jacobian(params).total;
    let fd = central_differences(params, h, |p| Ok(map.momenta(p)))?;
    Ok(compare(analytic, fd, h))
}

/// Lattice partials against central differences of the momenta of grid
/// solitons, computed from their field inner products.
pub fn jacobian_vs_soliton_momenta<Q: FourierMeasure>(
    params: SolitonParams,
    map: &MomentumMap<'_, Q>,
    h: f64,
) -> Result<FdComparison> {
    let analytic = map.jacobian(params).total;
    let (rho, particle) = (map.density(), map.particle());
    let fd = central_differences(params, h, |p| {
        let rec = build_soliton(p, rho, particle)?;
        Ok((rec.p, rec.m_ang))
    })?;
    Ok(compare(analytic, fd, h))
}
