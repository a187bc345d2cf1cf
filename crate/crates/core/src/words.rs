//! Free-group words on the surface generators `x₁, y₁, …, x_ℓ, y_ℓ`, their
//! evaluation at a tuple of group elements, and Fox derivatives.
//!
//! Generators are indexed `0..2ℓ` internally (`x_j ↦ 2(j−1)`, `y_j ↦ 2j−1`);
//! the JSON form uses signed 1-based indices, e.g. `[1, 2, -1, -2]`.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lie::GroupElement;
use crate::linalg::LinearMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    fn signed(self) -> i64 {
        let g = self.generator as i64 + 1;
        if self.inverse {
            -g
        } else {
            g
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn generator(k: usize) -> Self {
        Word { letters: vec![Letter::new(k, false)] }
    }

    /// From signed 1-based indices.
    pub fn from_signed(ints: &[i64]) -> Result<Self> {
        let letters = ints
            .iter()
            .map(|&i| {
                if i == 0 {
                    Err(Error::Invalid("generator index 0 in word".into()))
                } else {
                    Ok(Letter::new(i.unsigned_abs() as usize - 1, i < 0))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { letters })
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.signed()).collect()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// Free reduction.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    /// Free and cyclic reduction.
    pub fn cyclically_reduced(&self) -> Word {
        let mut w = self.reduced().letters;
        while w.len() >= 2 && w[0] == w[w.len() - 1].inv() {
            w.pop();
            w.remove(0);
        }
        Word { letters: w }
    }

    /// Whether `self` is conjugate to `other` in the free group.
    pub fn is_conjugate_to(&self, other: &Word) -> bool {
        let a = self.cyclically_reduced().letters;
        let b = other.cyclically_reduced().letters;
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        (0..a.len()).any(|s| a.iter().cycle().skip(s).take(a.len()).eq(b.iter()))
    }

    /// Image under the substitution `generator k ↦ subst[k]`.
    pub fn substitute(&self, subst: &[Word]) -> Result<Word> {
        let mut letters = Vec::new();
        for l in &self.letters {
            let img = subst
                .get(l.generator)
                .ok_or(Error::LengthMismatch { expected: l.generator + 1, found: subst.len() })?;
            if l.inverse {
                letters.extend(img.inverse().letters);
            } else {
                letters.extend_from_slice(&img.letters);
            }
        }
        Ok(Word { letters })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for l in &self.letters {
            let name = if l.generator % 2 == 0 { 'x' } else { 'y' };
            write!(f, "{}{}", name, l.generator / 2 + 1)?;
            if l.inverse {
                write!(f, "⁻¹")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_signed().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let ints = Vec::<i64>::deserialize(d)?;
        Word::from_signed(&ints).map_err(serde::de::Error::custom)
    }
}

/// The standard one-relator presentation of a closed orientable surface group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    genus: usize,
    relator: Word,
}

impl Presentation {
    pub fn new(genus: usize) -> Result<Self> {
        Ok(Presentation { genus, relator: relator_word(genus)? })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn generator_count(&self) -> usize {
        2 * self.genus
    }

    pub fn generator_names(&self) -> Vec<String> {
        (1..=self.genus).flat_map(|j| [format!("x{j}"), format!("y{j}")]).collect()
    }

    pub fn relator(&self) -> &Word {
        &self.relator
    }
}

/// `[x₁,y₁]···[x_ℓ,y_ℓ]` with `[x,y] = x y x⁻¹ y⁻¹`.
pub fn relator_word(genus: usize) -> Result<Word> {
    if genus < 1 {
        return Err(Error::InvalidGenus(genus));
    }
    let letters = (0..genus)
        .flat_map(|j| {
            let (x, y) = (2 * j, 2 * j + 1);
            [Letter::new(x, false), Letter::new(y, false), Letter::new(x, true), Letter::new(y, true)]
        })
        .collect();
    Ok(Word { letters })
}

fn check_tuple(w: &Word, tuple: &[GroupElement]) -> Result<()> {
    if tuple.is_empty() {
        return Err(Error::LengthMismatch { expected: 1, found: 0 });
    }
    if let Some(m) = w.max_generator() {
        if m >= tuple.len() {
            return Err(Error::LengthMismatch { expected: m + 1, found: tuple.len() });
        }
    }
    let spec = tuple[0].spec();
    for g in &tuple[1..] {
        if g.spec() != spec {
            return Err(Error::SpecMismatch { expected: spec, found: g.spec() });
        }
    }
    Ok(())
}

/// Product of the letters, left to right. In an abelian group only the
/// exponent sums matter, so commutator words evaluate to the identity exactly.
pub fn evaluate_word(w: &Word, tuple: &[GroupElement]) -> Result<GroupElement> {
    check_tuple(w, tuple)?;
    let spec = tuple[0].spec();
    if spec.is_abelian() {
        let mut sums = vec![0i64; tuple.len()];
        for l in &w.letters {
            sums[l.generator] += if l.inverse { -1 } else { 1 };
        }
        let mut acc = spec.identity();
        for (g, &e) in tuple.iter().zip(&sums) {
            let f = if e < 0 { g.inverse() } else { g.clone() };
            for _ in 0..e.unsigned_abs() {
                acc = acc.mul_same(&f);
            }
        }
        return Ok(acc);
    }
    let mut acc = spec.identity();
    for l in &w.letters {
        let g = &tuple[l.generator];
        acc = if l.inverse { acc.mul_same(&g.inverse()) } else { acc.mul_same(g) };
    }
    Ok(acc)
}

/// Left-translated derivative of `evaluate_word` in slot `k`.
///
/// Perturbing `g_k ↦ g_k·exp(εξ)` changes the value `W` to `W·exp(ε·Dξ)`; this
/// returns `D`. Writing `w = u·ℓ·v` for each occurrence `ℓ` of `x_k^{±1}`, with
/// `V` the value of the suffix `v`, the occurrence contributes
///
/// * `+Ad(V⁻¹)` for `ℓ = x_k`,
/// * `−Ad((g_k⁻¹V)⁻¹)` for `ℓ = x_k⁻¹`.
pub fn fox_differential(w: &Word, tuple: &[GroupElement], k: usize) -> Result<LinearMap> {
    check_tuple(w, tuple)?;
    if k >= tuple.len() {
        return Err(Error::LengthMismatch { expected: k + 1, found: tuple.len() });
    }
    let spec = tuple[0].spec();
    let n = spec.dim();
    let mut out = DMatrix::zeros(n, n);
    // suffix value accumulated right to left
    let mut suffix = spec.identity();
    for l in w.letters.iter().rev() {
        let g = &tuple[l.generator];
        if l.generator == k && !l.inverse {
            out += suffix.inverse().adjoint();
        }
        suffix = if l.inverse { g.inverse().mul_same(&suffix) } else { g.mul_same(&suffix) };
        if l.generator == k && l.inverse {
            out -= suffix.inverse().adjoint();
        }
    }
    Ok(out)
}

/// All `2ℓ` Fox blocks side by side: the map `𝔤^{2ℓ} → 𝔤`.
pub fn fox_jacobian(w: &Word, tuple: &[GroupElement]) -> Result<LinearMap> {
    check_tuple(w, tuple)?;
    let n = tuple[0].spec().dim();
    let mut out = DMatrix::zeros(n, n * tuple.len());
    for k in 0..tuple.len() {
        let block = fox_differential(w, tuple, k)?;
        out.view_mut((0, k * n), (n, n)).copy_from(&block);
    }
    Ok(out)
}
