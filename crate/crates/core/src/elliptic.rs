//! Jacobi elliptic functions sn, cn, dn, am and the complete integral K.
//!
//! Functions are parameterized by m = k² (the squared modulus), over the
//! whole real line. Values in the standard range 0 < m < 1 come from the
//! arithmetic-geometric mean with descending Landen phase recovery; other
//! parameters are mapped into that range by the negative-parameter and
//! reciprocal-parameter transformations:
//!
//! ```text
//! m < 0:  sn(u|m) = sd(v|m₁)/√(1-m),  cn(u|m) = cd(v|m₁),  dn(u|m) = nd(v|m₁)
//!         m₁ = -m/(1-m),  v = u√(1-m)
//! m > 1:  sn(u|m) = sn(v|1/m)/√m,     cn(u|m) = dn(v|1/m), dn(u|m) = cn(v|1/m)
//!         v = u√m
//! ```
//!
//! The amplitude am(u|m) is unwound for m < 1: the argument is reduced by
//! whole multiples of 2K before the phase recovery, so am(u + 2K) = am(u) + π
//! holds globally and am is monotone in u. For m > 1 the phase librates and
//! am = atan2(sn, cn) stays in (-π/2, π/2).

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_AGM: usize = 32;

/// Squared elliptic modulus m = μ².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulusSq(f64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModulusClass {
    Zero,
    Standard,
    One,
    Negative,
    GreaterThanOne,
}

impl ModulusSq {
    pub fn new(m: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::EllipticDomain(format!(
                "non-finite parameter m = {m}"
            )));
        }
        Ok(ModulusSq(m))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn class(self) -> ModulusClass {
        let m = self.0;
        if m == 0.0 {
            ModulusClass::Zero
        } else if m == 1.0 {
            ModulusClass::One
        } else if m < 0.0 {
            ModulusClass::Negative
        } else if m > 1.0 {
            ModulusClass::GreaterThanOne
        } else {
            ModulusClass::Standard
        }
    }
}

/// sn, cn, dn and the amplitude am at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
    pub am: f64,
}

/// Precomputed AGM ladder for a parameter in (0, 1).
#[derive(Debug, Clone, PartialEq)]
struct AgmLadder {
    m: f64,
    /// 1 - m, kept separately so dn stays accurate near m = 1.
    mc: f64,
    a: [f64; MAX_AGM + 1],
    c: [f64; MAX_AGM + 1],
    len: usize,
    k: f64,
}

impl AgmLadder {
    fn new(m: f64) -> Self {
        debug_assert!(m > 0.0 && m < 1.0);
        let mc = 1.0 - m;
        let mut a = [0.0; MAX_AGM + 1];
        let mut c = [0.0; MAX_AGM + 1];
        a[0] = 1.0;
        c[0] = m.sqrt();
        let mut b = mc.sqrt();
        let mut n = 0;
        while n < MAX_AGM && c[n].abs() > f64::EPSILON * a[n] {
            let an = a[n];
            a[n + 1] = 0.5 * (an + b);
            c[n + 1] = c[n] * c[n] / (4.0 * a[n + 1]);
            b = (an * b).sqrt();
            n += 1;
        }
        AgmLadder {
            m,
            mc,
            a,
            c,
            len: n,
            k: FRAC_PI_2 / a[n],
        }
    }

    /// Amplitude for |u| <= K via descending Landen back-substitution.
    fn phase(&self, u: f64) -> f64 {
        let n = self.len;
        let mut phi = (1u64 << n) as f64 * self.a[n] * u;
        for i in (1..=n).rev() {
            phi = 0.5 * (phi + (self.c[i] / self.a[i] * phi.sin()).asin());
        }
        phi
    }

    /// Returns the number of half periods `n` removed from `u` and the
    /// triple at the reduced argument r = u - 2nK, |r| <= K.
    fn reduced(&self, u: f64) -> (f64, JacobiTriple) {
        let n = (u / (2.0 * self.k)).round();
        let r = u - 2.0 * self.k * n;
        let phi = self.phase(r);
        let (sn, cn) = phi.sin_cos();
        let dn = (cn * cn + self.mc * sn * sn).sqrt();
        (
            n,
            JacobiTriple {
                sn,
                cn,
                dn,
                am: phi,
            },
        )
    }

    fn eval(&self, u: f64) -> JacobiTriple {
        let (n, t) = self.reduced(u);
        unwind(n, t)
    }
}

/// Map a reduced-argument triple back to u = r + 2nK.
fn unwind(n: f64, t: JacobiTriple) -> JacobiTriple {
    let sign = if n.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
    JacobiTriple {
        sn: sign * t.sn,
        cn: sign * t.cn,
        dn: t.dn,
        am: t.am + n * PI,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionKind {
    /// m = 0: sin, cos, 1, u.
    Trigonometric,
    /// m = 1: tanh, sech, sech, gd.
    Hyperbolic,
    /// 0 < m < 1, evaluated directly.
    Identity,
    /// m < 0, mapped to m/(m-1).
    NegativeParameter,
    /// m > 1, mapped to 1/m with cn and dn exchanged.
    Reciprocal,
}

/// How a parameter is brought into the standard range, with the AGM ladder
/// of the reduced parameter precomputed so repeated evaluation at fixed m
/// (the orbit case) costs one phase recovery per point.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionPlan {
    kind: ReductionKind,
    m: f64,
    m_reduced: f64,
    arg_scale: f64,
    ladder: Option<AgmLadder>,
}

impl ReductionPlan {
    pub fn kind(&self) -> ReductionKind {
        self.kind
    }

    pub fn parameter(&self) -> f64 {
        self.m
    }

    /// Parameter at which the standard-range kernel is evaluated.
    pub fn reduced_parameter(&self) -> f64 {
        self.m_reduced
    }

    /// Factor applied to u before evaluating in the reduced parameter.
    pub fn arg_scale(&self) -> f64 {
        self.arg_scale
    }

    /// Quarter period K(m) for m < 1.
    pub fn quarter_period(&self) -> Option<f64> {
        match self.kind {
            ReductionKind::Trigonometric => Some(FRAC_PI_2),
            ReductionKind::Identity | ReductionKind::NegativeParameter => {
                self.ladder.as_ref().map(|l| l.k / self.arg_scale)
            }
            ReductionKind::Hyperbolic | ReductionKind::Reciprocal => None,
        }
    }

    /// Real period of sn(·|m) in u; `None` at m = 1.
    pub fn real_period(&self) -> Option<f64> {
        match self.kind {
            ReductionKind::Hyperbolic => None,
            ReductionKind::Trigonometric => Some(2.0 * PI),
            _ => self.ladder.as_ref().map(|l| 4.0 * l.k / self.arg_scale),
        }
    }

    pub fn evaluate(&self, u: f64) -> JacobiTriple {
        match self.kind {
            ReductionKind::Trigonometric => {
                let (sn, cn) = u.sin_cos();
                JacobiTriple {
                    sn,
                    cn,
                    dn: 1.0,
                    am: u,
                }
            }
            ReductionKind::Hyperbolic => {
                let sech = 1.0 / u.cosh();
                JacobiTriple {
                    sn: u.tanh(),
                    cn: sech,
                    dn: sech,
                    am: u.sinh().atan(),
                }
            }
            ReductionKind::Identity => self.ladder().eval(u),
            ReductionKind::NegativeParameter => {
                let (n, t) = self.ladder().reduced(u * self.arg_scale);
                let sn = t.sn / (self.arg_scale * t.dn);
                let cn = t.cn / t.dn;
                let reduced = JacobiTriple {
                    sn,
                    cn,
                    dn: 1.0 / t.dn,
                    am: sn.atan2(cn),
                };
                unwind(n, reduced)
            }
            ReductionKind::Reciprocal => {
                let t = self.ladder().eval(u * self.arg_scale);
                let sn = t.sn / self.arg_scale;
                JacobiTriple {
                    sn,
                    cn: t.dn,
                    dn: t.cn,
                    am: sn.atan2(t.dn),
                }
            }
        }
    }

    fn ladder(&self) -> &AgmLadder {
        self.ladder
            .as_ref()
            .expect("standard-range plan carries an AGM ladder")
    }
}

/// Choose the transformation that maps `m` into the standard range.
pub fn reduce_modulus(m: f64) -> Result<ReductionPlan> {
    let class = ModulusSq::new(m)?.class();
    let plan = match class {
        ModulusClass::Zero => ReductionPlan {
            kind: ReductionKind::Trigonometric,
            m,
            m_reduced: 0.0,
            arg_scale: 1.0,
            ladder: None,
        },
        ModulusClass::One => ReductionPlan {
            kind: ReductionKind::Hyperbolic,
            m,
            m_reduced: 1.0,
            arg_scale: 1.0,
            ladder: None,
        },
        ModulusClass::Standard => ReductionPlan {
            kind: ReductionKind::Identity,
            m,
            m_reduced: m,
            arg_scale: 1.0,
            ladder: Some(AgmLadder::new(m)),
        },
        ModulusClass::Negative => {
            let m1 = -m / (1.0 - m);
            ReductionPlan {
                kind: ReductionKind::NegativeParameter,
                m,
                m_reduced: m1,
                arg_scale: (1.0 - m).sqrt(),
                ladder: Some(AgmLadder::new(m1)),
            }
        }
        ModulusClass::GreaterThanOne => {
            let m1 = 1.0 / m;
            ReductionPlan {
                kind: ReductionKind::Reciprocal,
                m,
                m_reduced: m1,
                arg_scale: m.sqrt(),
                ladder: Some(AgmLadder::new(m1)),
            }
        }
    };
    Ok(plan)
}

/// Evaluate sn, cn, dn and am at (u, m).
pub fn jacobi_eval(u: f64, m: f64) -> Result<JacobiTriple> {
    if !u.is_finite() {
        return Err(Error::EllipticDomain(format!(
            "non-finite argument u = {u}"
        )));
    }
    Ok(reduce_modulus(m)?.evaluate(u))
}

/// Complete elliptic integral of the first kind, K(m) = ∫₀^{π/2} dθ/√(1 - m sin²θ).
pub fn complete_k(m: f64) -> Result<f64> {
    match ModulusSq::new(m)?.class() {
        ModulusClass::Zero => Ok(FRAC_PI_2),
        ModulusClass::Standard => Ok(AgmLadder::new(m).k),
        ModulusClass::Negative => {
            let m1 = -m / (1.0 - m);
            Ok(AgmLadder::new(m1).k / (1.0 - m).sqrt())
        }
        ModulusClass::One => Err(Error::EllipticDomain("K(m) diverges at m = 1".into())),
        ModulusClass::GreaterThanOne => Err(Error::EllipticDomain(format!(
            "K(m) requires m < 1, got {m}"
        ))),
    }
}
