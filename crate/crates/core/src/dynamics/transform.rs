use super::lab::{LabState, LabSystem};
use super::reduced::ReducedState;
use crate::coupling::field_momentum;
use crate::soliton::SolitonRecord;

/// Passes to the comoving frame: A(y) -> A(q + y), Π likewise, with P the
/// total linear momentum and M the total angular momentum.
pub fn comoving_transform(sys: &LabSystem, s: &LabState) -> ReducedState {
    let back = [-s.q[0], -s.q[1]];
    ReducedState {
        a: s.a.shifted(back),
        pi: s.pi.shifted(back),
        p: sys.linear_momentum(s),
        m_ang: sys.angular_momentum(s),
        q: s.q,
        phi: s.phi,
        t: s.t,
    }
}

/// Inverse of [`comoving_transform`]: p = P + <Π, ∇_* A>.
pub fn to_lab(s: &ReducedState) -> LabState {
    let fm = field_momentum(&s.pi, &s.a);
    LabState {
        a: s.a.shifted(s.q),
        pi: s.pi.shifted(s.q),
        q: s.q,
        p: [s.p[0] + fm[0], s.p[1] + fm[1]],
        phi: s.phi,
        m_ang: s.m_ang,
        t: s.t,
    }
}

/// Lab state of a soliton centred at q0 at time zero.
pub fn lab_soliton(rec: &SolitonRecord, q0: [f64; 2]) -> LabState {
    let mut r = ReducedState::from_soliton(rec);
    r.q = q0;
    to_lab(&r)
}
