use std::fmt;

use super::GroupError;

/// A bijection of `0..degree`, acting on the right: `p.then(q)` applies `p`
/// first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Permutation {
        Permutation((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Permutation, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(GroupError::NotAPermutation(format!("{images:?}")));
            }
        }
        Ok(Permutation(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Permutation {
        Permutation(images)
    }

    /// Image-list text `0 2 1 …`, or cycles such as `(0 1 2)(3 4)` on
    /// `degree` points.
    pub fn parse(text: &str, degree: Option<usize>) -> Result<Permutation, GroupError> {
        let t = text.trim();
        if !t.contains('(') {
            let images = t
                .split_whitespace()
                .map(|s| s.parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| GroupError::Parse(format!("bad image list {t:?}")))?;
            return Permutation::from_images(images);
        }
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        for part in t.split(')') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let inner = part
                .strip_prefix('(')
                .ok_or_else(|| GroupError::Parse(format!("bad cycle {part:?}")))?;
            let cyc = inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| GroupError::Parse(format!("bad cycle {part:?}")))?;
            cycles.push(cyc);
        }
        let top = cycles.iter().flatten().map(|&x| x as usize + 1).max().unwrap_or(0);
        let n = degree.unwrap_or(top).max(top);
        let mut images: Vec<u32> = (0..n as u32).collect();
        for cyc in &cycles {
            for (a, b) in cyc.iter().zip(cyc.iter().cycle().skip(1)) {
                images[*a as usize] = *b;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn image(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn first_moved(&self) -> Option<u32> {
        self.0
            .iter()
            .enumerate()
            .find(|&(i, &x)| i as u32 != x)
            .map(|(i, _)| i as u32)
    }

    pub fn fixes(&self, x: u32) -> bool {
        self.0[x as usize] == x
    }

    /// Restriction to an invariant subset, renumbered by position in `points`.
    pub fn restrict(&self, points: &[u32]) -> Permutation {
        let pos: std::collections::HashMap<u32, u32> = points.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect();
        Permutation(points.iter().map(|&p| pos[&self.image(p)]).collect())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_invert() {
        let p = Permutation::parse("1 2 0", None).unwrap();
        let q = Permutation::parse("(0 1)", Some(3)).unwrap();
        assert_eq!(q.images(), &[1, 0, 2]);
        // 0 -p-> 1 -q-> 0
        assert_eq!(p.then(&q).images(), &[0, 2, 1]);
        assert!(p.then(&p.inverse()).is_identity());
        assert_eq!(Permutation::parse("(1 2 3)", None).unwrap().images(), &[0, 2, 3, 1]);
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }
}
