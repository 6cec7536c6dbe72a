use std::fmt;

/// A freely reduced word, stored as syllables `(generator, exponent)`.
///
/// Adjacent syllables never share a generator and exponents are nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<(usize, i64)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![(g, 1)])
    }

    pub fn power_of(g: usize, e: i64) -> Self {
        Word::from_syllables([(g, e)])
    }

    pub fn from_syllables(syllables: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut w = Word::identity();
        for (g, e) in syllables {
            w.push(g, e);
        }
        w
    }

    fn push(&mut self, g: usize, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push((g, e));
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &other.0 {
            w.push(g, e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        if let [(g, e)] = self.0[..] {
            return Word::power_of(g, e * k);
        }
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..k.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    /// `self * other * self^-1 * other^-1`
    pub fn commutator(&self, other: &Word) -> Word {
        self.mul(other).mul(&self.inverse()).mul(&other.inverse())
    }

    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inverse())
    }

    /// Exponent sum per generator, over `n` generators.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        for &(g, e) in &self.0 {
            v[g] += e;
        }
        v
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|&(g, _)| g).max()
    }

    /// Replaces generator `g` by generator `f(g)`.
    pub fn rename(&self, f: impl Fn(usize) -> usize) -> Word {
        Word::from_syllables(self.0.iter().map(|&(g, e)| (f(g), e)))
    }

    /// Substitutes a word for each generator.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut w = Word::identity();
        for &(g, e) in &self.0 {
            w = w.mul(&images[g].pow(e));
        }
        w
    }

    /// Cyclic reduction, used when comparing relators up to conjugacy.
    pub fn cyclically_reduced(&self) -> Word {
        let mut s = self.0.clone();
        loop {
            if s.len() >= 2 && s[0].0 == s[s.len() - 1].0 {
                let (_, e) = s.pop().unwrap();
                s[0].1 += e;
                if s[0].1 == 0 {
                    s.remove(0);
                }
            } else {
                return Word(s);
            }
        }
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return f.write_str("1");
        }
        for (i, &(g, e)) in self.word.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let name = self.names.get(g).map(String::as_str).unwrap_or("?");
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction_on_construction() {
        let w = Word::from_syllables([(0, 2), (1, 1), (1, -1), (0, -2)]);
        assert!(w.is_identity());
        let x = Word::generator(0);
        let y = Word::generator(1);
        assert_eq!(x.commutator(&y).syllables(), &[(0, 1), (1, 1), (0, -1), (1, -1)]);
        assert_eq!(x.commutator(&y).exponent_sums(2), vec![0, 0]);
        assert!(x.commutator(&x).is_identity());
    }

    #[test]
    fn cyclic_reduction() {
        let w = Word::from_syllables([(0, 1), (1, 2), (0, -1)]);
        assert_eq!(w.cyclically_reduced(), Word::power_of(1, 2));
    }

    #[test]
    fn display_uses_names() {
        let names = vec!["x".to_string(), "y".to_string()];
        let w = Word::from_syllables([(0, 2), (1, -1)]);
        assert_eq!(w.display(&names).to_string(), "x^2 y^-1");
        assert_eq!(Word::identity().display(&names).to_string(), "1");
    }
}
