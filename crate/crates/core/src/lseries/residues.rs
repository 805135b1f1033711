use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{CompletedL, Piece};
use crate::numeric::ComplexSum;
use crate::quad::trapezoid_circle;
use crate::specialfn::pochhammer;
use crate::{i_pow, Error, Result};

/// The four pole sets, each attributed to one continuation piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PoleSet {
    S0,
    SE0,
    SH,
    SB,
}

impl PoleSet {
    pub const ALL: [PoleSet; 4] = [PoleSet::S0, PoleSet::SE0, PoleSet::SH, PoleSet::SB];

    pub fn piece(self) -> Piece {
        match self {
            PoleSet::S0 => Piece::D0,
            PoleSet::SE0 => Piece::E0,
            PoleSet::SH => Piece::EH,
            PoleSet::SB => Piece::EB,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PoleSet::S0 => "S0",
            PoleSet::SE0 => "SE0",
            PoleSet::SH => "SH",
            PoleSet::SB => "SB",
        }
    }
}

/// Closed-form residue sum of one pole set against its numerical value.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueCheck {
    pub set: PoleSet,
    pub closed_form: Complex64,
    /// The same sum with the inner limit extended by one, which is what the
    /// set notation `{[2k-δ], ..., }` gives when `[x]` is read as `floor(x)`.
    pub closed_form_extended: Complex64,
    pub contour: Complex64,
    pub points: Vec<i64>,
    /// `floor(δ) - 2k`, the inner limit of the `S_H` sum.
    pub limit_h: i64,
    /// `floor(δ)`, so that the `S_B` inner limit is `limit_b - r`.
    pub limit_b: i64,
    pub abs_error: f64,
}

impl CompletedL {
    /// The closed-form residue sum over one pole set.
    pub fn residue_sum(&self, which: PoleSet) -> Complex64 {
        self.residue_sum_with(which, 0)
    }

    fn residue_sum_with(&self, which: PoleSet, extra: i64) -> Complex64 {
        let two_k = self.group.weight() as i64;
        let e = self.i2k();
        let df = self.delta_floor() + extra;
        let mut acc = ComplexSum::new();
        match which {
            PoleSet::S0 => acc.add(self.series.a0() * (e - 1.0)),
            PoleSet::SE0 => {
                for t in &self.rpf.zero_terms {
                    let m = t.r as i64;
                    acc.add(t.coeff * (-i_pow(-m) + i_pow(two_k - m)));
                }
            }
            PoleSet::SH => {
                for b in &self.rpf.pole_blocks {
                    for r in 1..=self.block_r_max(b) {
                        let ri = r as i64;
                        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                        for m in 0..=(df - two_k) {
                            let w = pochhammer(Complex64::new(r as f64, 0.0), m as u32).re / factorial(m)
                                * sign
                                * b.alpha.powi(-(ri + m) as i32);
                            acc.add(-b.coeffs[r - 1] * i_pow(m) * w);
                        }
                    }
                }
            }
            PoleSet::SB => {
                for b in &self.rpf.pole_blocks {
                    for r in 1..=self.block_r_max(b) {
                        let ri = r as i64;
                        for m in 0..=(df - ri) {
                            let sign = if (ri + m) % 2 == 0 { 1.0 } else { -1.0 };
                            let w = pochhammer(Complex64::new(r as f64, 0.0), m as u32).re / factorial(m) * sign * b.alpha.powi(m as i32);
                            acc.add(b.coeffs[r - 1] * i_pow(m + ri - two_k) * w);
                        }
                    }
                }
            }
        }
        acc.value()
    }

    /// Integer points of one pole set inside the strip `2k-δ <= Re s <= δ`.
    pub fn pole_points(&self, which: PoleSet) -> Vec<i64> {
        let two_k = self.group.weight() as i64;
        let df = self.delta_floor();
        let mut pts = BTreeSet::new();
        match which {
            PoleSet::S0 => {
                pts.insert(0);
                pts.insert(two_k);
            }
            PoleSet::SE0 => {
                for t in &self.rpf.zero_terms {
                    pts.insert(t.r as i64);
                    pts.insert(two_k - t.r as i64);
                }
            }
            PoleSet::SH => {
                if !self.rpf.pole_blocks.is_empty() {
                    for m in 0..=(df - two_k) {
                        pts.insert(-m);
                    }
                }
            }
            PoleSet::SB => {
                for b in &self.rpf.pole_blocks {
                    for r in 1..=self.block_r_max(b) as i64 {
                        for m in 0..=(df - r) {
                            pts.insert(two_k - r - m);
                        }
                    }
                }
            }
        }
        pts.into_iter().collect()
    }

    /// `(1/2πi)∮ Φ(s) ds` on the circle `|s - s0| = radius`, `n` nodes.
    pub fn contour_residue_oracle(&self, s0: Complex64, radius: f64, n: usize) -> Result<Complex64> {
        circle(|s| self.phi_continued(s), s0, radius, n)
    }

    /// The same contour integral applied to a single piece.
    pub fn piece_contour_residue(&self, which: Piece, s0: Complex64, radius: f64, n: usize) -> Result<Complex64> {
        circle(|s| self.piece(which, s), s0, radius, n)
    }

    /// Compares `residue_sum` with piece contour integrals summed over the
    /// pole set.
    pub fn residue_check(&self, which: PoleSet, radius: f64, n: usize) -> Result<ResidueCheck> {
        let points = self.pole_points(which);
        let mut acc = ComplexSum::new();
        for &p in &points {
            acc.add(self.piece_contour_residue(which.piece(), Complex64::new(p as f64, 0.0), radius, n)?);
        }
        let closed_form = self.residue_sum(which);
        let contour = acc.value();
        Ok(ResidueCheck {
            set: which,
            closed_form,
            closed_form_extended: self.residue_sum_with(which, 1),
            contour,
            points,
            limit_h: self.delta_floor() - self.group.weight() as i64,
            limit_b: self.delta_floor(),
            abs_error: (closed_form - contour).norm(),
        })
    }
}

fn factorial(m: i64) -> f64 {
    (1..=m).fold(1.0, |a, j| a * j as f64)
}

fn circle(mut f: impl FnMut(Complex64) -> Result<Complex64>, s0: Complex64, radius: f64, n: usize) -> Result<Complex64> {
    if !(radius > 0.0) || n < 3 {
        return Err(Error::invalid("contour needs radius > 0 and n >= 3"));
    }
    trapezoid_circle(
        |s| match f(s) {
            Err(Error::PoleProximity { .. }) | Err(Error::GammaPole(_)) | Err(Error::NearPole(_)) => {
                Err(Error::CircleHitsPole)
            }
            other => other,
        },
        s0,
        radius,
        n,
    )
}
