//! Permutations of a finite point set {0, .., degree-1}.
//!
//! Points are acted on from the right: the image of point `i` under `p` is
//! `p.image(i)`, and `(a * b).image(i) = b.image(a.image(i))` (apply `a`
//! first).  Permutations compare lexicographically by image tuple, which is
//! the canonical element order used by [`crate::group::GroupTable`].

use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u8).collect(),
        }
    }

    /// Builds a permutation from explicit images; rejects non-bijections.
    pub fn from_images(images: Vec<u8>) -> Option<Perm> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if (i as usize) >= images.len() || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Perm { images })
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Option<Perm> {
        let mut images: Vec<u8> = (0..degree as u8).collect();
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                if pt >= degree || next >= degree {
                    return None;
                }
                images[pt] = next as u8;
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    /// `self` then `other`, acting on the right.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u8; self.images.len()];
        for (pt, &im) in self.images.iter().enumerate() {
            images[im as usize] = pt as u8;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i == im as usize)
    }

    /// Disjoint-cycle decomposition, fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.image(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut pt = self.image(start);
            while pt != start {
                seen[pt] = true;
                cycle.push(pt);
                pt = self.image(pt);
            }
            out.push(cycle);
        }
        out
    }

    /// Embeds into a larger point set, fixing the new points.
    pub fn pad(&self, degree: usize) -> Perm {
        debug_assert!(degree >= self.degree());
        let mut images = self.images.clone();
        images.extend(self.degree() as u8..degree as u8);
        Perm { images }
    }

    /// Shifts all points up by `offset` inside a larger point set.
    pub fn shift(&self, offset: usize, degree: usize) -> Perm {
        let mut images: Vec<u8> = (0..degree as u8).collect();
        for pt in 0..self.degree() {
            images[pt + offset] = (self.image(pt) + offset) as u8;
        }
        Perm { images }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (k, pt) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{pt}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_is_left_to_right() {
        let a = Perm::from_cycles(4, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(4, &[vec![1, 2]]).unwrap();
        // 0 --a--> 1 --b--> 2
        assert_eq!(a.compose(&b).image(0), 2);
        assert_eq!(b.compose(&a).image(0), 1);
    }

    #[test]
    fn inverse_roundtrip() {
        let p = Perm::from_cycles(5, &[vec![0, 1, 2], vec![3, 4]]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert!(p.inverse().compose(&p).is_identity());
    }

    #[test]
    fn cycle_parse_and_print() {
        let p = Perm::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(format!("{p}"), "(0 1 2 3)");
        assert_eq!(p.cycles(), vec![vec![0, 1, 2, 3]]);
    }
}
