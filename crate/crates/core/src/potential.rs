//! Delay parameter, split potentials and the compiled-in test potentials.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{Antiderivative, GridFn, GridSpec};

type C = Complex64;

/// Constant delay `a` with `pi/2 <= a < pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayParameter(f64);

impl DelayParameter {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && (PI / 2.0 - 1e-12..PI).contains(&a) {
            Ok(Self(a.max(PI / 2.0)))
        } else {
            Err(Error::DelayOutOfRange(a))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// Node index nearest to `a`, kept inside `[pi/2, pi)`.
    pub fn snap(&self, grid: GridSpec) -> usize {
        let m = grid.subintervals();
        let h = grid.step();
        let mut k = (self.0 / h).round() as usize;
        let lowest = m.div_ceil(2); // first node at or above pi/2
        if (k as f64) * h < PI / 2.0 - 1e-12 {
            k = lowest;
        }
        k.min(m - 1)
    }
}

/// Potential split at the delay: `q-` lives on `(0, a)`, `q+` on `(a, pi)`.
///
/// The delay is snapped to the grid node `a_index`; both pieces keep their
/// one-sided limits at that node and vanish on the other side.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialPair {
    grid: GridSpec,
    a_index: usize,
    requested_a: f64,
    qminus: GridFn,
    qplus: GridFn,
    minus_anti: Antiderivative,
    plus_anti: Antiderivative,
}

impl PotentialPair {
    /// Builds the pair from closures for each piece, evaluated on their own
    /// closed subinterval.
    pub fn from_pieces(
        grid: GridSpec,
        a: DelayParameter,
        qminus: impl Fn(f64) -> C,
        qplus: impl Fn(f64) -> C,
    ) -> Result<Self> {
        let ka = a.snap(grid);
        let n = grid.nodes();
        let zero = C::new(0.0, 0.0);
        let mut ml = vec![zero; n];
        let mut mr = vec![zero; n];
        let mut pl = vec![zero; n];
        let mut pr = vec![zero; n];
        for k in 0..n {
            let x = grid.x(k);
            if k <= ka {
                ml[k] = qminus(x);
                if k < ka {
                    mr[k] = ml[k];
                }
            }
            if k >= ka {
                pr[k] = qplus(x);
                if k > ka {
                    pl[k] = pr[k];
                }
            }
        }
        Self::from_parts(
            a,
            ka,
            GridFn::from_one_sided(grid, ml, mr)?,
            GridFn::from_one_sided(grid, pl, pr)?,
        )
    }

    /// Assembles a pair from pieces already split at node `a_index`.
    pub fn from_parts(a: DelayParameter, a_index: usize, qminus: GridFn, qplus: GridFn) -> Result<Self> {
        qminus.is_finite().map_err(Error::NonFinite)?;
        qplus.is_finite().map_err(Error::NonFinite)?;
        Ok(Self {
            grid: qminus.grid(),
            a_index,
            requested_a: a.value(),
            minus_anti: qminus.antiderivative(),
            plus_anti: qplus.antiderivative(),
            qminus,
            qplus,
        })
    }

    pub fn zero(grid: GridSpec, a: DelayParameter) -> Self {
        let zero = |_| C::new(0.0, 0.0);
        Self::from_pieces(grid, a, zero, zero).expect("zero potential is valid")
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn a_index(&self) -> usize {
        self.a_index
    }

    /// The snapped delay actually used by every computation.
    pub fn a(&self) -> f64 {
        self.grid.x(self.a_index)
    }

    pub fn delay(&self) -> DelayParameter {
        DelayParameter(self.a())
    }

    /// Distance between the requested and the snapped delay.
    pub fn snap_distance(&self) -> f64 {
        (self.a() - self.requested_a).abs()
    }

    pub fn qminus(&self) -> &GridFn {
        &self.qminus
    }

    pub fn qplus(&self) -> &GridFn {
        &self.qplus
    }

    /// `int_0^x q-`.
    pub fn qminus_integral(&self, x: f64) -> C {
        self.minus_anti.eval(x)
    }

    /// `int_a^x q+` (zero for `x <= a`).
    pub fn qplus_integral(&self, x: f64) -> C {
        self.plus_anti.eval(x)
    }

    /// `q = q- + q+` with the jump at `a` kept as one-sided limits.
    pub fn combined(&self) -> GridFn {
        self.qminus.zip_with(&self.qplus, |m, p| m + p)
    }

    /// `q+` at an arbitrary point of `[a, pi]`; the ends use their inner limits.
    pub fn qplus_at(&self, s: f64) -> C {
        if s <= self.a() + 1e-14 {
            self.qplus.right()[self.a_index]
        } else {
            self.qplus.eval(s)
        }
    }
}

/// Splits `q` at the (snapped) delay.
pub fn split_potential(q: &GridFn, a: DelayParameter) -> Result<PotentialPair> {
    let grid = q.grid();
    let ka = a.snap(grid);
    let zero = C::new(0.0, 0.0);
    let n = grid.nodes();
    let (mut ml, mut mr) = (vec![zero; n], vec![zero; n]);
    let (mut pl, mut pr) = (vec![zero; n], vec![zero; n]);
    for k in 0..n {
        if k < ka {
            ml[k] = q.left()[k];
            mr[k] = q.right()[k];
        } else if k > ka {
            pl[k] = q.left()[k];
            pr[k] = q.right()[k];
        } else {
            ml[k] = q.left()[k];
            pr[k] = q.right()[k];
        }
    }
    PotentialPair::from_parts(
        a,
        ka,
        GridFn::from_one_sided(grid, ml, mr)?,
        GridFn::from_one_sided(grid, pl, pr)?,
    )
}

/// Compiled-in test potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// `q = 0`, `a = pi/2`.
    Zero,
    /// `q- = 0`, `q+ = 1`, `a = pi/2`.
    StepQplus,
    /// `q- = 1`, `q+ = 0`, `a = pi/2`.
    StepQminus,
    /// `q- = sin 2x`, `q+ = cos x`, `a = 0.6 pi`.
    Smooth,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [
        Builtin::Zero,
        Builtin::StepQplus,
        Builtin::StepQminus,
        Builtin::Smooth,
    ];

    pub fn default_delay(&self) -> f64 {
        match self {
            Builtin::Smooth => 0.6 * PI,
            _ => PI / 2.0,
        }
    }

    pub fn potential(&self, grid: GridSpec) -> PotentialPair {
        let a = DelayParameter::new(self.default_delay()).expect("built-in delay is valid");
        self.potential_with_delay(grid, a)
    }

    /// The same pieces split at another delay.
    pub fn potential_with_delay(&self, grid: GridSpec, a: DelayParameter) -> PotentialPair {
        let c = |v: f64| C::new(v, 0.0);
        let pair = match self {
            Builtin::Zero => PotentialPair::from_pieces(grid, a, |_| c(0.0), |_| c(0.0)),
            Builtin::StepQplus => PotentialPair::from_pieces(grid, a, |_| c(0.0), |_| c(1.0)),
            Builtin::StepQminus => PotentialPair::from_pieces(grid, a, |_| c(1.0), |_| c(0.0)),
            Builtin::Smooth => {
                PotentialPair::from_pieces(grid, a, |x| c((2.0 * x).sin()), |x| c(x.cos()))
            }
        };
        pair.expect("built-in potentials are finite")
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Builtin::Zero => "zero",
            Builtin::StepQplus => "step-qplus",
            Builtin::StepQminus => "step-qminus",
            Builtin::Smooth => "smooth",
        };
        f.write_str(s)
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.to_string() == s)
            .ok_or_else(|| Error::Config(format!("unknown built-in potential `{s}`")))
    }
}

/// Random smooth complex potential: a few low cosine/sine modes on each side
/// of `a`, rescaled to the requested `L2` norm.
pub fn random_smooth(grid: GridSpec, a: DelayParameter, seed: u64, l2_norm: f64) -> PotentialPair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = |n: usize| -> Vec<(C, C)> {
        (0..n)
            .map(|_| {
                (
                    C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            })
            .collect()
    };
    let minus = coeffs(3);
    let plus = coeffs(3);
    let eval = |cs: &[(C, C)], x: f64| -> C {
        cs.iter()
            .enumerate()
            .map(|(k, (c, s))| c * (k as f64 * x).cos() + s * ((k + 1) as f64 * x).sin())
            .sum()
    };
    let raw = PotentialPair::from_pieces(grid, a, |x| eval(&minus, x), |x| eval(&plus, x))
        .expect("finite");
    let norm = raw.combined().l2_norm();
    let scale = if norm > 0.0 { l2_norm / norm } else { 0.0 };
    PotentialPair::from_pieces(
        grid,
        a,
        |x| eval(&minus, x) * scale,
        |x| eval(&plus, x) * scale,
    )
    .expect("finite")
}
