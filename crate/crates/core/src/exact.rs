//! Exact arithmetic for rational angles and dihedral groups.
//!
//! Angles are stored as reduced fractions in units of π. Dihedral group
//! elements are integer pairs `(rot mod N, flip)`; matrices are only ever a
//! derived view.
//!
//! Conventions:
//! - `(k, false)` is the rotation by `2πk/N`.
//! - `(k, true)` is the reflection across the line at angle `kπ/N`.
//! - `(r1, f1)·(r2, f2) = (r1 + (-1)^f1 r2 mod N, f1 xor f2)`.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("invalid angle {num}/{den}: numerator and denominator must be positive")]
    InvalidAngle { num: i64, den: i64 },
    #[error("cannot parse angle {0:?}, expected \"num/den\"")]
    AngleSyntax(String),
    #[error("empty angle list")]
    EmptyAngles,
    #[error("reflection index {index} out of range for D_{order}")]
    IndexError { index: i64, order: u32 },
    #[error("dihedral order must be positive")]
    ZeroOrder,
}

/// A positive rational multiple of π, always reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle {
    num: u64,
    den: u64,
}

impl Angle {
    pub fn new(num: i64, den: i64) -> Result<Self, ExactError> {
        reduce_angle(num, den)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn ratio(&self) -> Ratio<i64> {
        Ratio::new(self.num as i64, self.den as i64)
    }

    pub fn from_ratio(r: Ratio<i64>) -> Result<Self, ExactError> {
        reduce_angle(*r.numer(), *r.denom())
    }

    pub fn radians(&self) -> f64 {
        std::f64::consts::PI * self.num as f64 / self.den as f64
    }

    /// `k` copies of this angle.
    pub fn times(&self, k: u64) -> Angle {
        let g = k.gcd(&self.den);
        Angle {
            num: self.num * (k / g),
            den: self.den / g,
        }
    }

    /// Unit vector at this angle measured from the positive x-axis.
    pub fn unit_vector(&self) -> (f64, f64) {
        let t = self.radians();
        (t.cos(), t.sin())
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Angle {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExactError::AngleSyntax(s.to_string());
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n, d),
            None => (s.trim(), "1"),
        };
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        reduce_angle(n, d)
    }
}

pub fn reduce_angle(num: i64, den: i64) -> Result<Angle, ExactError> {
    if num < 1 || den < 1 {
        return Err(ExactError::InvalidAngle { num, den });
    }
    let g = num.gcd(&den);
    Ok(Angle {
        num: (num / g) as u64,
        den: (den / g) as u64,
    })
}

/// The dihedral group `D_N` of order `2N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DihedralGroup {
    order_n: u32,
}

impl DihedralGroup {
    pub fn new(order_n: u32) -> Result<Self, ExactError> {
        if order_n == 0 {
            return Err(ExactError::ZeroOrder);
        }
        Ok(DihedralGroup { order_n })
    }

    pub fn order_n(&self) -> u32 {
        self.order_n
    }

    pub fn size(&self) -> usize {
        2 * self.order_n as usize
    }

    pub fn identity(&self) -> DihedralElement {
        DihedralElement::new(self.order_n, 0, false)
    }

    pub fn rotation(&self, k: i64) -> DihedralElement {
        DihedralElement::new(self.order_n, k, false)
    }

    /// Rotations first, then reflections, each by increasing index.
    pub fn elements(&self) -> impl Iterator<Item = DihedralElement> + '_ {
        let n = self.order_n;
        [false, true]
            .into_iter()
            .flat_map(move |flip| (0..n).map(move |r| DihedralElement { n, rot: r, flip }))
    }

    /// Position of `g` in [`DihedralGroup::elements`].
    pub fn index_of(&self, g: DihedralElement) -> usize {
        debug_assert_eq!(g.n, self.order_n);
        g.rot as usize + if g.flip { self.order_n as usize } else { 0 }
    }

    pub fn minus_id(&self) -> Option<DihedralElement> {
        contains_minus_id(self).then(|| self.rotation(self.order_n as i64 / 2))
    }
}

impl fmt::Display for DihedralGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D_{}", self.order_n)
    }
}

/// Element of `D_N`; carries `N` so that products can be checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DihedralElement {
    n: u32,
    rot: u32,
    flip: bool,
}

impl DihedralElement {
    pub fn new(n: u32, rot: i64, flip: bool) -> Self {
        assert!(n > 0, "dihedral order must be positive");
        DihedralElement {
            n,
            rot: rot.rem_euclid(n as i64) as u32,
            flip,
        }
    }

    pub fn order_n(&self) -> u32 {
        self.n
    }

    pub fn rot(&self) -> u32 {
        self.rot
    }

    pub fn flip(&self) -> bool {
        self.flip
    }

    pub fn is_identity(&self) -> bool {
        self.rot == 0 && !self.flip
    }

    /// +1 for rotations, -1 for reflections.
    pub fn det(&self) -> i32 {
        if self.flip {
            -1
        } else {
            1
        }
    }

    pub fn inverse(&self) -> Self {
        if self.flip {
            *self
        } else {
            DihedralElement::new(self.n, -(self.rot as i64), false)
        }
    }

    /// 2×2 orthogonal matrix in the standard frame, row-major.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let t = 2.0 * std::f64::consts::PI * self.rot as f64 / self.n as f64;
        let (s, c) = t.sin_cos();
        if self.flip {
            [[c, s], [s, -c]]
        } else {
            [[c, -s], [s, c]]
        }
    }

    /// Re-express this element in `D_M` where `N | M`.
    pub fn lift(&self, m: u32) -> Self {
        assert!(m.is_multiple_of(self.n), "D_{} does not embed in D_{}", self.n, m);
        DihedralElement::new(m, (self.rot * (m / self.n)) as i64, self.flip)
    }
}

impl Mul for DihedralElement {
    type Output = DihedralElement;

    fn mul(self, rhs: DihedralElement) -> DihedralElement {
        assert_eq!(self.n, rhs.n, "mixing elements of D_{} and D_{}", self.n, rhs.n);
        let r2 = if self.flip {
            -(rhs.rot as i64)
        } else {
            rhs.rot as i64
        };
        DihedralElement::new(self.n, self.rot as i64 + r2, self.flip ^ rhs.flip)
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.flip {
            write!(f, "s{}", self.rot)
        } else {
            write!(f, "r{}", self.rot)
        }
    }
}

/// `D_N` with `N` the lcm of the reduced denominators.
pub fn group_from_angles(angles: &[Angle]) -> Result<DihedralGroup, ExactError> {
    if angles.is_empty() {
        return Err(ExactError::EmptyAngles);
    }
    let n = angles.iter().fold(1u64, |acc, a| acc.lcm(&a.den));
    DihedralGroup::new(n as u32)
}

pub fn contains_minus_id(g: &DihedralGroup) -> bool {
    g.order_n.is_multiple_of(2)
}

pub fn reflection_in_direction(g: &DihedralGroup, k: i64) -> Result<DihedralElement, ExactError> {
    if k < 0 || k >= g.order_n as i64 {
        return Err(ExactError::IndexError {
            index: k,
            order: g.order_n,
        });
    }
    Ok(DihedralElement::new(g.order_n, k, true))
}

/// Subgroup of `group` generated by `gens`, as a sorted element list.
pub fn generated_subgroup(group: &DihedralGroup, gens: &[DihedralElement]) -> Vec<DihedralElement> {
    let mut seen = vec![false; group.size()];
    let id = group.identity();
    seen[group.index_of(id)] = true;
    let mut out = vec![id];
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = x * g;
            let i = group.index_of(y);
            if !seen[i] {
                seen[i] = true;
                out.push(y);
                frontier.push(y);
            }
        }
    }
    out.sort();
    out
}
