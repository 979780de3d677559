use super::body::{ConvexBody, Simplex};
use super::{GeometryError, RationalAffine};
use crate::rational::Rational;
use num_bigint::BigInt;
use std::collections::{BTreeSet, HashMap};

/// Lower envelope `x ↦ min_i f_i(x)` of finitely many rational affine forms.
/// Concave by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    forms: Vec<RationalAffine>,
}

impl Envelope {
    /// Panics on an empty form list.
    pub fn new(forms: Vec<RationalAffine>) -> Self {
        assert!(!forms.is_empty(), "envelope needs at least one form");
        let mut unique: Vec<RationalAffine> = Vec::with_capacity(forms.len());
        for f in forms {
            if !unique.contains(&f) {
                unique.push(f);
            }
        }
        Self { forms: unique }
    }

    pub fn single(form: RationalAffine) -> Self {
        Self { forms: vec![form] }
    }

    pub fn forms(&self) -> &[RationalAffine] {
        &self.forms
    }

    pub fn dim(&self) -> usize {
        self.forms[0].dim()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.forms
            .iter()
            .map(|f| f.eval(x))
            .min()
            .expect("nonempty envelope")
    }

    /// Index of the first form attaining the minimum at `x`.
    pub fn active(&self, x: &[Rational]) -> usize {
        let values: Vec<Rational> = self.forms.iter().map(|f| f.eval(x)).collect();
        let min = values.iter().min().unwrap();
        values.iter().position(|v| v == min).unwrap()
    }

    /// Pointwise `self + f`.
    pub fn translate(&self, f: &RationalAffine) -> Self {
        Self::new(self.forms.iter().map(|g| g.add(f)).collect())
    }

    /// `x ↦ s · self(x)` for `s ≥ 0`.
    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.forms.iter().map(|g| g.scale(s)).collect())
    }

    /// Half-spaces describing the region where form `i` is minimal.
    fn region(&self, i: usize) -> Vec<RationalAffine> {
        self.forms
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.sub(&self.forms[i]))
            .collect()
    }
}

/// Simplicial cells of `domain` on which every envelope is affine.
///
/// The domain is cut, envelope by envelope, into the convex regions where a
/// single form is minimal (lower-dimensional pieces are dropped), and each
/// final region is triangulated. Cell order is a deterministic function of
/// the input order.
pub fn subdivide_common(
    domain: &ConvexBody,
    envelopes: &[&Envelope],
) -> Result<Vec<Simplex>, GeometryError> {
    let mut cells = vec![domain.clone()];
    for env in envelopes {
        if env.dim() != domain.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: domain.dim(),
                found: env.dim(),
            });
        }
        if env.forms.len() == 1 {
            continue;
        }
        let mut next = Vec::new();
        for cell in &cells {
            for i in 0..env.forms.len() {
                match cell.intersect(&env.region(i)) {
                    Ok(piece) => next.push(piece),
                    Err(GeometryError::Degenerate { .. } | GeometryError::Empty) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        cells = next;
    }
    Ok(cells.iter().flat_map(ConvexBody::triangulate).collect())
}

/// Determinant of a small integer matrix by fraction-free elimination.
fn int_det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if p != col {
            m.swap(p, col);
            sign = -sign;
        }
        for r in col + 1..n {
            for c in col + 1..n {
                m[r][c] = (m[r][c] * m[col][col] - m[r][col] * m[col][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = m[col][col];
    }
    sign * m[n - 1][n - 1]
}

/// Least concave majorant of integer data `(a, w)` over `conv{a}`, as the
/// envelope of all non-vertical hyperplanes through `n + 1` data points that
/// lie weakly above every data point.
pub fn concave_majorant(dim: usize, data: &[(Vec<i64>, i64)]) -> Envelope {
    let lifted: Vec<Vec<i128>> = hull_candidates(dim, data)
        .into_iter()
        .map(|(a, w)| a.iter().map(|&x| x as i128).chain([*w as i128]).collect())
        .collect();
    // high points first: they reject most candidate planes early
    let mut order: Vec<usize> = (0..lifted.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(lifted[i][dim]));
    // verdict per plane, keyed by its primitive normal (last entry > 0) and offset
    let mut seen: HashMap<Vec<i128>, bool> = HashMap::new();
    let mut forms: BTreeSet<RationalAffine> = BTreeSet::new();
    let mut dirs = vec![vec![0i128; dim + 1]; dim];
    super::for_each_combination(lifted.len(), dim + 1, |idx| {
        let base = &lifted[idx[0]];
        for (d, &i) in dirs.iter_mut().zip(&idx[1..]) {
            for ((x, a), b) in d.iter_mut().zip(&lifted[i]).zip(base) {
                *x = a - b;
            }
        }
        // normal[j] = (-1)^j · minor without column j
        let mut normal: Vec<i128> = (0..=dim)
            .map(|skip| {
                let minor: Vec<Vec<i128>> = dirs
                    .iter()
                    .map(|d| {
                        d.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != skip)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let det = if minor.is_empty() { 1 } else { int_det(minor) };
                if skip % 2 == 0 {
                    det
                } else {
                    -det
                }
            })
            .collect();
        if normal[dim] == 0 {
            return;
        }
        let g = normal.iter().fold(0i128, |g, &x| gcd(g, x.abs())) * normal[dim].signum();
        for x in normal.iter_mut() {
            *x /= g;
        }
        let offset: i128 = normal.iter().zip(base).map(|(n, x)| n * x).sum();
        let mut key = normal.clone();
        key.push(offset);
        if seen.contains_key(&key) {
            return;
        }
        let above_all = order.iter().all(|&i| {
            let s: i128 = normal.iter().zip(&lifted[i]).map(|(n, x)| n * x).sum();
            s <= offset
        });
        seen.insert(key, above_all);
        if !above_all {
            return;
        }
        // w = (offset − Σ_j normal_j x_j) / normal_last
        let last_q = Rational::from_integer(BigInt::from(normal[dim]));
        let slope: Vec<Rational> = normal[..dim]
            .iter()
            .map(|&nj| -Rational::from_integer(BigInt::from(nj)) / &last_q)
            .collect();
        let constant = Rational::from_integer(BigInt::from(offset)) / &last_q;
        forms.insert(RationalAffine::new(slope, constant));
    });
    Envelope::new(forms.into_iter().collect())
}

/// Drops data points lying weakly below the midpoint of two data points
/// `a ± d` for a small lattice direction `d`; these are never vertices of the
/// upper hull, so the majorant is unchanged.
fn hull_candidates(dim: usize, data: &[(Vec<i64>, i64)]) -> Vec<&(Vec<i64>, i64)> {
    let weights: HashMap<&[i64], i64> = data.iter().map(|(a, w)| (a.as_slice(), *w)).collect();
    let mut directions: Vec<Vec<i64>> = Vec::new();
    let mut d = vec![-1i64; dim];
    loop {
        // one representative per ± pair: first nonzero entry positive
        if d.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
            directions.push(d.clone());
        }
        let Some(i) = (0..dim).rev().find(|&i| d[i] < 1) else { break };
        d[i] += 1;
        for x in d[i + 1..].iter_mut() {
            *x = -1;
        }
    }
    let mut plus = vec![0i64; dim];
    let mut minus = vec![0i64; dim];
    data.iter()
        .filter(|(a, w)| {
            !directions.iter().any(|d| {
                for j in 0..dim {
                    plus[j] = a[j] + d[j];
                    minus[j] = a[j] - d[j];
                }
                match (weights.get(plus.as_slice()), weights.get(minus.as_slice())) {
                    (Some(&wp), Some(&wm)) => 2 * (*w as i128) <= wp as i128 + wm as i128,
                    _ => false,
                }
            })
        })
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Concave piecewise-affine function on a convex body, stored as its defining
/// envelope together with a simplicial subdivision on which it is affine.
#[derive(Debug, Clone)]
pub struct PiecewiseAffine {
    pub domain: ConvexBody,
    pub envelope: Envelope,
    pub pieces: Vec<(RationalAffine, Simplex)>,
}

impl PiecewiseAffine {
    pub fn from_envelope(domain: ConvexBody, envelope: Envelope) -> Result<Self, GeometryError> {
        let cells = subdivide_common(&domain, &[&envelope])?;
        let pieces = cells
            .into_iter()
            .map(|cell| {
                let form = envelope.forms[envelope.active(&cell.centroid())].clone();
                (form, cell)
            })
            .collect();
        Ok(Self {
            domain,
            envelope,
            pieces,
        })
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.envelope.eval(x)
    }

    pub fn integral(&self) -> Rational {
        self.pieces
            .iter()
            .map(|(f, cell)| super::quadrature::simplex_moment(cell, f, None))
            .sum()
    }
}
