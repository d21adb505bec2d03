//! Finite projective planes `PG(2, p)` over the prime field `GF(p)`,
//! built from homogeneous coordinates and exhaustively verified on
//! construction.

use super::ConstructionError;

/// Incidence structure of the projective plane of order `p`: `p^2 + p + 1`
/// points and as many lines, every line carrying `p + 1` points, every two
/// points on exactly one common line, every two lines meeting in exactly
/// one point.
#[derive(Clone, Debug)]
pub struct ProjectivePlane {
    pub p: usize,
    pub n: usize,
    /// lines[l] = sorted point indices incident to line l.
    pub lines: Vec<Vec<usize>>,
}

pub(super) fn is_odd_prime(p: usize) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Canonical homogeneous representatives: `(1, a, b)`, then `(0, 1, c)`,
/// then `(0, 0, 1)`.
fn representatives(p: usize) -> Vec<(usize, usize, usize)> {
    let mut reps = Vec::with_capacity(p * p + p + 1);
    for a in 0..p {
        for b in 0..p {
            reps.push((1, a, b));
        }
    }
    for c in 0..p {
        reps.push((0, 1, c));
    }
    reps.push((0, 0, 1));
    reps
}

pub fn projective_plane(p: usize) -> Result<ProjectivePlane, ConstructionError> {
    if !is_odd_prime(p) {
        return Err(ConstructionError::NotOddPrime(p));
    }
    let reps = representatives(p);
    let n = reps.len();
    let mut lines = Vec::with_capacity(n);
    for &(u, v, w) in &reps {
        let incident: Vec<usize> = reps
            .iter()
            .enumerate()
            .filter(|(_, &(x, y, z))| (u * x + v * y + w * z) % p == 0)
            .map(|(i, _)| i)
            .collect();
        lines.push(incident);
    }
    let plane = ProjectivePlane { p, n, lines };
    plane.verify()?;
    Ok(plane)
}

impl ProjectivePlane {
    /// Checks all four plane axioms exhaustively.
    pub fn verify(&self) -> Result<(), ConstructionError> {
        let fail = |msg: String| Err(ConstructionError::InternalContradiction(msg));
        if self.lines.len() != self.n || self.n != self.p * self.p + self.p + 1 {
            return fail("wrong point or line count".into());
        }
        for (l, line) in self.lines.iter().enumerate() {
            if line.len() != self.p + 1 {
                return fail(format!("line {l} has {} points", line.len()));
            }
        }
        // Every two points on exactly one common line.
        let mut on_line = vec![vec![false; self.n]; self.n];
        for (l, line) in self.lines.iter().enumerate() {
            for &q in line {
                on_line[l][q] = true;
            }
        }
        for a in 0..self.n {
            for b in a + 1..self.n {
                let common = (0..self.n)
                    .filter(|&l| on_line[l][a] && on_line[l][b])
                    .count();
                if common != 1 {
                    return fail(format!("points {a},{b} lie on {common} common lines"));
                }
            }
        }
        // Every two lines meet in exactly one point.
        for l1 in 0..self.n {
            for l2 in l1 + 1..self.n {
                let meet = self.lines[l1]
                    .iter()
                    .filter(|&&q| on_line[l2][q])
                    .count();
                if meet != 1 {
                    return fail(format!("lines {l1},{l2} meet in {meet} points"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::ConstructionError;
    use super::*;

    #[test]
    fn p3_plane_shape() {
        let plane = projective_plane(3).unwrap();
        assert_eq!(plane.n, 13);
        assert_eq!(plane.lines.len(), 13);
        assert!(plane.lines.iter().all(|l| l.len() == 4));
    }

    #[test]
    fn p5_plane_shape() {
        let plane = projective_plane(5).unwrap();
        assert_eq!(plane.n, 31);
    }

    #[test]
    fn larger_planes_verify() {
        for p in [7, 11, 13] {
            let plane = projective_plane(p).unwrap();
            assert_eq!(plane.n, p * p + p + 1);
        }
    }

    #[test]
    fn rejects_non_odd_primes() {
        for p in [0, 1, 2, 4, 9, 15] {
            assert!(matches!(
                projective_plane(p),
                Err(ConstructionError::NotOddPrime(_))
            ));
        }
    }
}
