use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::local::LocalRing;
use super::sr::stanley_reisner_ring;
use crate::error::{Error, Result};
use crate::field::{Scalar, C};
use crate::linalg::QMat;
use crate::rational::{q, Q};
use crate::toric::ToricData;

/// Scenario-supplied cohomology of a twisted sector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SectorPresentation {
    /// `B G` point sector; `integral` overrides `1/|G|`.
    Point { integral: Option<String> },
    General {
        labels: Vec<String>,
        degrees: Vec<usize>,
        /// Nonzero structure constants `(i, j, k, c)`: `e_i e_j ∋ c e_k`.
        products: Vec<(usize, usize, usize, String)>,
        integral: Vec<String>,
        /// `dim_v × dim_0` matrix of the pullback from the untwisted sector.
        restriction: Vec<Vec<String>>,
        /// Factor applied to the sector integral.
        scale: String,
    },
}

fn general_ring(labels: &[String], degrees: &[usize], products: &[(usize, usize, usize, String)], integral: &[String]) -> Result<LocalRing> {
    let d = labels.len();
    let mut mult = vec![vec![Vec::new(); d]; d];
    for (i, j, k, c) in products {
        if *i >= d || *j >= d {
            return Err(Error::Config(format!("product index ({i},{j}) out of range")));
        }
        let c = crate::rational::parse_q(c)?;
        mult[*i][*j].push((*k, c.clone()));
        if i != j {
            mult[*j][*i].push((*k, c));
        }
    }
    let ring = LocalRing {
        labels: labels.to_vec(),
        degrees: degrees.to_vec(),
        mult,
        integral: integral.iter().map(|x| crate::rational::parse_q(x)).collect::<Result<_>>()?,
    };
    ring.validate()?;
    Ok(ring)
}

#[derive(Debug, Clone)]
pub struct Sector {
    pub ring: LocalRing,
    pub restriction: QMat,
    pub scale: Q,
    pub age: Q,
    pub inv: usize,
    pub offset: usize,
}

/// `H*_orb(X)` as a direct sum of sector rings, flattened into one basis.
///
/// Elements are plain coefficient vectors of length [`dim`](Self::dim).
#[derive(Debug, Clone)]
pub struct OrbRing {
    pub sectors: Vec<Sector>,
    /// `D̄_i` for `i < m+s` (zero for extended indices).
    pub divisors: Vec<Vec<Q>>,
    dim: usize,
}

impl OrbRing {
    pub fn new(td: &ToricData, presentations: &[(usize, SectorPresentation)]) -> Result<Self> {
        let (untw, divs) = stanley_reisner_ring(&td.fan)?;
        let d0 = untw.dim();
        let mut sectors = vec![Sector {
            restriction: crate::linalg::identity(d0),
            ring: untw,
            scale: Q::one(),
            age: Q::zero(),
            inv: 0,
            offset: 0,
        }];
        let mut offset = d0;
        for (v, b) in td.boxes.iter().enumerate().skip(1) {
            let given = presentations.iter().find(|(i, _)| *i == v).map(|(_, p)| p.clone());
            let pres = match given {
                Some(p) => p,
                None if b.cone.len() == td.fan.rank() => SectorPresentation::Point { integral: None },
                None => {
                    return Err(Error::Config(format!("missing sector data for Box element {:?}", b.v.0)))
                }
            };
            let (ring, restriction, scale) = match pres {
                SectorPresentation::Point { integral } => {
                    let scale = match integral {
                        Some(s) => crate::rational::parse_q(&s)?,
                        None => Q::one() / q(td.fan.cone_multiplicity(&b.cone)),
                    };
                    let mut row = vec![Q::zero(); d0];
                    row[0] = Q::one();
                    (LocalRing::point(), vec![row], scale)
                }
                SectorPresentation::General { labels, degrees, products, integral, restriction, scale } => {
                    let ring = general_ring(&labels, &degrees, &products, &integral)?;
                    let res: QMat = restriction
                        .iter()
                        .map(|r| r.iter().map(|x| crate::rational::parse_q(x)).collect::<Result<Vec<_>>>())
                        .collect::<Result<_>>()?;
                    if res.len() != ring.dim() || res.iter().any(|r| r.len() != d0) {
                        return Err(Error::Config("restriction matrix has wrong shape".into()));
                    }
                    (ring, res, crate::rational::parse_q(&scale)?)
                }
            };
            let dim = ring.dim();
            sectors.push(Sector { ring, restriction, scale, age: b.age.clone(), inv: 0, offset });
            offset += dim;
        }
        for v in 0..sectors.len() {
            sectors[v].inv = td.inverse_box(v);
        }
        for v in 0..sectors.len() {
            if sectors[sectors[v].inv].ring.dim() != sectors[v].ring.dim() {
                return Err(Error::Config("inverse sectors have different dimensions".into()));
            }
        }
        let dim = offset;
        let mut divisors: Vec<Vec<Q>> = divs
            .into_iter()
            .map(|mut d| {
                d.resize(dim, Q::zero());
                d
            })
            .collect();
        divisors.extend((0..td.fan.s()).map(|_| vec![Q::zero(); dim]));
        Ok(OrbRing { sectors, divisors, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn untwisted(&self) -> &LocalRing {
        &self.sectors[0].ring
    }

    /// Complex dimension of `X`.
    pub fn n(&self) -> usize {
        self.untwisted().top_degree()
    }

    pub fn range(&self, v: usize) -> std::ops::Range<usize> {
        let s = &self.sectors[v];
        s.offset..s.offset + s.ring.dim()
    }

    /// Sector of a global basis index.
    pub fn sector_of(&self, idx: usize) -> usize {
        self.sectors.iter().rposition(|s| s.offset <= idx).unwrap()
    }

    /// Half the (age-shifted) real degree of basis element `idx`.
    pub fn half_degree(&self, idx: usize) -> Q {
        let v = self.sector_of(idx);
        let s = &self.sectors[v];
        q(s.ring.degrees[idx - s.offset] as i64) + &s.age
    }

    pub fn label(&self, idx: usize) -> String {
        let v = self.sector_of(idx);
        let s = &self.sectors[v];
        let l = &s.ring.labels[idx - s.offset];
        if v == 0 {
            l.clone()
        } else if l == "1" {
            format!("1_{v}")
        } else {
            format!("{l}·1_{v}")
        }
    }

    pub fn zero<S: Scalar>(&self) -> Vec<S> {
        vec![S::zero(); self.dim]
    }

    /// `1_v`.
    pub fn unit_of<S: Scalar>(&self, v: usize) -> Vec<S> {
        let mut x = self.zero();
        x[self.sectors[v].offset] = S::one();
        x
    }

    pub fn unit<S: Scalar>(&self) -> Vec<S> {
        self.unit_of(0)
    }

    pub fn divisor<S: Scalar>(&self, i: usize) -> Vec<S> {
        self.divisors[i].iter().map(S::from_q).collect()
    }

    pub fn lift<S: Scalar>(&self, x: &[Q]) -> Vec<S> {
        x.iter().map(S::from_q).collect()
    }

    fn is_untwisted<S: Scalar>(&self, x: &[S]) -> bool {
        x[self.sectors[0].ring.dim()..].iter().all(|c| c.is_zero())
    }

    /// Orbifold cup product where at least one factor is untwisted.
    pub fn cup<S: Scalar>(&self, x: &[S], y: &[S]) -> Result<Vec<S>> {
        if self.is_untwisted(x) {
            Ok(self.act(x, y))
        } else if self.is_untwisted(y) {
            Ok(self.act(y, x))
        } else {
            Err(Error::Unsupported("product of two twisted classes".into()))
        }
    }

    /// `a ∪ y` for untwisted `a` (only the untwisted block of `a` is read).
    pub fn act<S: Scalar>(&self, a: &[S], y: &[S]) -> Vec<S> {
        let d0 = self.sectors[0].ring.dim();
        let a0 = &a[..d0];
        let mut out = self.zero();
        for s in &self.sectors {
            let ys = &y[s.offset..s.offset + s.ring.dim()];
            if ys.iter().all(|c| c.is_zero()) {
                continue;
            }
            let ra: Vec<S> = s
                .restriction
                .iter()
                .map(|row| row.iter().zip(a0).fold(S::zero(), |acc, (r, x)| acc + S::from_q(r) * x.clone()))
                .collect();
            let p = s.ring.mul(&ra, ys);
            out[s.offset..s.offset + p.len()].clone_from_slice(&p);
        }
        out
    }

    /// Sector-wise product on the inertia stack.
    pub fn cup_inertia<S: Scalar>(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = self.zero();
        for (v, s) in self.sectors.iter().enumerate() {
            let r = self.range(v);
            let p = s.ring.mul(&x[r.clone()], &y[r.clone()]);
            out[r].clone_from_slice(&p);
        }
        out
    }

    /// `∫_{IX}`, including the sector scale factors.
    pub fn integrate<S: Scalar>(&self, x: &[S]) -> S {
        self.sectors.iter().enumerate().fold(S::zero(), |acc, (v, s)| {
            acc + S::from_q(&s.scale) * s.ring.integrate(&x[self.range(v)])
        })
    }

    pub fn inv_star<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let mut out = self.zero();
        for (v, s) in self.sectors.iter().enumerate() {
            let src = self.range(v);
            let dst = self.range(s.inv);
            out[dst].clone_from_slice(&x[src]);
        }
        out
    }

    /// `(x, y)_orb = ∫ x ∪ inv* y`.
    pub fn pairing<S: Scalar>(&self, x: &[S], y: &[S]) -> S {
        self.integrate(&self.cup_inertia(x, &self.inv_star(y)))
    }

    pub fn gram(&self) -> QMat {
        let basis: Vec<Vec<Q>> = (0..self.dim).map(|i| self.basis_vec(i)).collect();
        basis.iter().map(|a| basis.iter().map(|b| self.pairing(a, b)).collect()).collect()
    }

    pub fn basis_vec<S: Scalar>(&self, i: usize) -> Vec<S> {
        let mut x = self.zero();
        x[i] = S::one();
        x
    }

    /// Multiplies each homogeneous piece by its real degree.
    pub fn deg<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        x.iter()
            .enumerate()
            .map(|(i, c)| c.clone() * S::from_q(&(q(2) * self.half_degree(i))))
            .collect()
    }

    /// `f(x) = Σ_k a_k x^k` (inertia product) for `x` with nilpotent positive-degree part.
    pub fn power_series<S: Scalar>(&self, x: &[S], coeffs: &[S]) -> Vec<S> {
        let mut out: Vec<S> = self.zero();
        let mut pow: Vec<S> = self.sector_units();
        for a in coeffs {
            if pow.iter().all(|c: &S| c.is_zero()) {
                break;
            }
            out = out.iter().zip(&pow).map(|(o, p)| o.clone() + a.clone() * p.clone()).collect();
            pow = self.cup_inertia(&pow, x);
        }
        out
    }

    /// `Σ_v 1_v`, the unit of the inertia product.
    pub fn sector_units<S: Scalar>(&self) -> Vec<S> {
        let mut x = self.zero();
        for s in &self.sectors {
            x[s.offset] = S::one();
        }
        x
    }

    /// `exp(x)` for `x` nilpotent in the inertia product.
    pub fn exp_nilpotent<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let n = self.sectors.iter().map(|s| s.ring.top_degree()).max().unwrap_or(0);
        let mut coeffs = Vec::new();
        let mut f = Q::one();
        for k in 0..=n {
            if k > 0 {
                f /= q(k as i64);
            }
            coeffs.push(S::from_q(&f));
        }
        self.power_series(x, &coeffs)
    }

    /// `z^{-deg/2} z^ρ x` at a numerical `z` (principal branch of `log z`).
    pub fn z_grading_action(&self, x: &[C], z: C, rho: &[Q]) -> Vec<C> {
        let lz = z.ln();
        let rho_log: Vec<C> = rho.iter().map(|r| C::from_q(r) * lz).collect();
        let y = self.act(&self.exp_nilpotent(&rho_log), x);
        y.iter()
            .enumerate()
            .map(|(i, c)| c * (-lz * crate::rational::to_f64(&self.half_degree(i))).exp())
            .collect()
    }
}
