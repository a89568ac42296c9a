//! Finite-type Cartan data and weight arithmetic.
//!
//! Nodes are numbered `1..=n` in the public API. The numbering and the
//! long/short assignment per series are fixed:
//!
//! | type  | diagram                         | symmetrizers `r`          |
//! |-------|---------------------------------|---------------------------|
//! | A_n   | 1 - 2 - ... - n                 | all 1                     |
//! | B_n   | 1 - ... - (n-1) => n            | 2,...,2,1                 |
//! | C_n   | 1 - ... - (n-1) <= n            | 1,...,1,2                 |
//! | D_n   | 1 - ... - (n-2) < (n-1), n      | all 1                     |
//! | E_6-8 | 1 - 3 - 4 - 5 - 6 (- 7 - 8), 2 on 4 | all 1                 |
//! | F_4   | 1 - 2 => 3 - 4                  | 2,2,1,1                   |
//! | G_2   | 1 <= 2 (triple bond)            | 3,1                       |
//!
//! `C[i][j] = alpha_j(alpha_i^vee)` in the usual sense, so the fundamental
//! weight coordinates of `alpha_i` are column `i` of the matrix and
//! `r_i * C[i][j] == r_j * C[j][i]`.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "B" => Ok(Series::B),
            "C" => Ok(Series::C),
            "D" => Ok(Series::D),
            "E" => Ok(Series::E),
            "F" => Ok(Series::F),
            "G" => Ok(Series::G),
            _ => Err(Error::Parse { what: "series", input: s.to_string() }),
        }
    }
}

/// A weight in fundamental-weight coordinates: entry `j` is `lambda(alpha_j^vee)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// The fundamental weight `Lambda_i` (1-based).
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Weight::zero(rank);
        w.0[i - 1] = 1;
        w
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (idx, c) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        &self + &rhs
    }
}

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        &self - &rhs
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&Weight> for i64 {
    type Output = Weight;
    fn mul(self, rhs: &Weight) -> Weight {
        Weight(rhs.0.iter().map(|a| self * a).collect())
    }
}

#[derive(Clone, Debug)]
pub struct CartanData {
    series: Series,
    rank: usize,
    matrix: Vec<Vec<i64>>,
    symmetrizers: Vec<i64>,
    /// Positive roots in root coordinates.
    pos_roots: Vec<Vec<i64>>,
    inverse: Vec<Vec<Rational>>,
}

impl PartialEq for CartanData {
    fn eq(&self, other: &Self) -> bool {
        self.series == other.series && self.rank == other.rank
    }
}

impl Eq for CartanData {}

/// Builds the Cartan datum of type `series` and rank `rank`.
pub fn make_cartan(series: Series, rank: usize) -> Result<CartanData> {
    let valid = match series {
        Series::A => rank >= 1,
        Series::B | Series::C => rank >= 2,
        Series::D => rank >= 4,
        Series::E => (6..=8).contains(&rank),
        Series::F => rank == 4,
        Series::G => rank == 2,
    };
    if !valid {
        return Err(Error::InvalidType { series: series.letter(), rank });
    }
    let n = rank;
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut bond = |i: usize, j: usize, cij: i64, cji: i64| {
        c[i - 1][j - 1] = cij;
        c[j - 1][i - 1] = cji;
    };
    let mut r = vec![1i64; n];
    match series {
        Series::A => {
            for i in 1..n {
                bond(i, i + 1, -1, -1);
            }
        }
        Series::B => {
            for i in 1..n - 1 {
                bond(i, i + 1, -1, -1);
            }
            bond(n - 1, n, -1, -2);
            r.iter_mut().take(n - 1).for_each(|x| *x = 2);
        }
        Series::C => {
            for i in 1..n - 1 {
                bond(i, i + 1, -1, -1);
            }
            bond(n - 1, n, -2, -1);
            r[n - 1] = 2;
        }
        Series::D => {
            for i in 1..n - 2 {
                bond(i, i + 1, -1, -1);
            }
            bond(n - 2, n - 1, -1, -1);
            bond(n - 2, n, -1, -1);
        }
        Series::E => {
            bond(1, 3, -1, -1);
            bond(2, 4, -1, -1);
            for i in 3..n {
                bond(i, i + 1, -1, -1);
            }
        }
        Series::F => {
            bond(1, 2, -1, -1);
            bond(2, 3, -1, -2);
            bond(3, 4, -1, -1);
            r = vec![2, 2, 1, 1];
        }
        Series::G => {
            bond(1, 2, -1, -3);
            r = vec![3, 1];
        }
    }
    let inverse = rational_inverse(&c);
    let mut cd = CartanData { series, rank, matrix: c, symmetrizers: r, pos_roots: Vec::new(), inverse };
    cd.pos_roots = positive_roots(&cd);
    Ok(cd)
}

impl CartanData {
    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `"B2"`, `"E6"`, ...
    pub fn name(&self) -> String {
        format!("{}{}", self.series, self.rank)
    }

    pub fn nodes(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.rank
    }

    pub fn check_node(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank {
            Err(Error::IndexOutOfRange { node: i, rank: self.rank })
        } else {
            Ok(())
        }
    }

    /// `C_{i,j}` with 1-based indices.
    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.matrix[i - 1][j - 1]
    }

    /// Symmetrizer `r_i` (1-based).
    pub fn r(&self, i: usize) -> i64 {
        self.symmetrizers[i - 1]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.symmetrizers
    }

    pub fn is_simply_laced(&self) -> bool {
        self.symmetrizers.iter().all(|&x| x == 1)
    }

    /// Positive roots in root coordinates.
    pub fn pos_roots(&self) -> &[Vec<i64>] {
        &self.pos_roots
    }

    /// Positive roots in fundamental-weight coordinates.
    pub fn pos_roots_weights(&self) -> Vec<Weight> {
        self.pos_roots.iter().map(|b| self.from_root_coords(b)).collect()
    }

    /// The simple root `alpha_i` as a weight.
    pub fn simple_root(&self, i: usize) -> Weight {
        Weight((1..=self.rank).map(|j| self.c(j, i)).collect())
    }

    pub fn from_root_coords(&self, b: &[i64]) -> Weight {
        let mut w = Weight::zero(self.rank);
        for (i, &bi) in b.iter().enumerate() {
            if bi != 0 {
                for j in 0..self.rank {
                    w.0[j] += bi * self.matrix[j][i];
                }
            }
        }
        w
    }

    pub fn determinant(&self) -> Rational {
        determinant(&self.matrix)
    }

    pub fn inverse(&self) -> &[Vec<Rational>] {
        &self.inverse
    }

    /// Sum of the root coordinates of `w`.
    pub fn height(&self, w: &Weight) -> Rational {
        root_coordinates(self, w).into_iter().sum()
    }

    /// Expected `|Delta^+|` for the type.
    pub fn expected_root_count(&self) -> usize {
        let n = self.rank;
        match self.series {
            Series::A => n * (n + 1) / 2,
            Series::B | Series::C => n * n,
            Series::D => n * (n - 1),
            Series::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Series::F => 24,
            Series::G => 6,
        }
    }
}

fn rational_inverse(c: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    let n = c.len();
    let mut a: Vec<Vec<Rational>> = c
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v: Vec<Rational> = row.iter().map(|&x| Rational::from_integer(x)).collect();
            v.extend((0..n).map(|j| Rational::from_integer(i64::from(i == j))));
            v
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != Rational::from_integer(0)).expect("finite-type Cartan matrices are invertible");
        a.swap(col, pivot);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for row in 0..n {
            if row != col {
                let f = a[row][col];
                if f != Rational::from_integer(0) {
                    let pivot_row = a[col].clone();
                    for (x, v) in a[row].iter_mut().zip(pivot_row) {
                        *x -= f * v;
                    }
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn determinant(c: &[Vec<i64>]) -> Rational {
    let n = c.len();
    let mut a: Vec<Vec<Rational>> = c.iter().map(|row| row.iter().map(|&x| Rational::from_integer(x)).collect()).collect();
    let mut det = Rational::from_integer(1);
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| a[r][col] != Rational::from_integer(0)) else {
            return Rational::from_integer(0);
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let (top, bottom) = a.split_at_mut(row);
            for (x, v) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= f * *v;
            }
        }
    }
    det
}

/// Reflects a root given in root coordinates.
fn reflect_root(cd: &CartanData, i: usize, b: &[i64]) -> Vec<i64> {
    let pairing: i64 = (1..=cd.rank).map(|j| b[j - 1] * cd.c(i, j)).sum();
    let mut out = b.to_vec();
    out[i - 1] -= pairing;
    out
}

/// Positive roots by closing the simple roots under simple reflections.
pub fn positive_roots(cd: &CartanData) -> Vec<Vec<i64>> {
    let n = cd.rank;
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push(e);
    }
    let mut head = 0;
    while head < queue.len() {
        let beta = queue[head].clone();
        head += 1;
        for i in 1..=n {
            let img = reflect_root(cd, i, &beta);
            if img.iter().all(|&x| x >= 0) && seen.insert(img.clone()) {
                queue.push(img);
            }
        }
    }
    queue.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>()).then_with(|| b.cmp(a)));
    queue
}

/// `s_i(w) = w - w(alpha_i^vee) alpha_i`.
pub fn simple_reflection(cd: &CartanData, i: usize, w: &Weight) -> Result<Weight> {
    cd.check_node(i)?;
    let wi = w.0[i - 1];
    Ok(Weight((1..=cd.rank).map(|j| w.0[j - 1] - wi * cd.c(j, i)).collect()))
}

/// Solves `C c = w` exactly, i.e. writes `w` as a rational combination of simple roots.
pub fn root_coordinates(cd: &CartanData, w: &Weight) -> Vec<Rational> {
    cd.inverse.iter().map(|row| row.iter().zip(&w.0).map(|(a, &x)| *a * x).sum()).collect()
}

pub fn in_root_lattice(cd: &CartanData, w: &Weight) -> bool {
    root_coordinates(cd, w).iter().all(|c| c.is_integer())
}

/// Integral root coordinates of `w`, or `None` if `w` is not in the root lattice.
pub fn integral_root_coordinates(cd: &CartanData, w: &Weight) -> Option<Vec<i64>> {
    root_coordinates(cd, w).into_iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
}
