//! Mutations of ordered decompositions of a lattice with a non-symmetric
//! pairing `[u, v) = u^T G v`.
//!
//! A decomposition is a list of summands, each a list of integer vectors, with
//! `[later, earlier) = 0`. Only rank-1 neighbours generated by `e`, `f` with
//! `[e, e) = [f, f) = 1` can be mutated:
//!
//! ```text
//! left  at i: (e, f) -> (f - [e,f) e, e)
//! right at i: (e, f) -> (f, e - [e,f) f)
//! ```

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

pub type IVec = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

/// A braid generator acting on summands `index` and `index + 1` (1-based).
/// `L_i` is the generator `sigma_i`, `R_i` its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BraidLetter {
    pub index: usize,
    pub direction: Direction,
}

impl BraidLetter {
    pub fn left(index: usize) -> Self {
        BraidLetter {
            index,
            direction: Direction::Left,
        }
    }

    pub fn right(index: usize) -> Self {
        BraidLetter {
            index,
            direction: Direction::Right,
        }
    }

    pub fn inverse(self) -> Self {
        BraidLetter {
            index: self.index,
            direction: match self.direction {
                Direction::Left => Direction::Right,
                Direction::Right => Direction::Left,
            },
        }
    }
}

impl fmt::Display for BraidLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.direction {
            Direction::Left => 'L',
            Direction::Right => 'R',
        };
        write!(f, "{c}{}", self.index)
    }
}

impl FromStr for BraidLetter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("braid letter {s:?} is not of the form L<i> or R<i>"));
        let mut chars = s.chars();
        let direction = match chars.next() {
            Some('L') | Some('l') => Direction::Left,
            Some('R') | Some('r') => Direction::Right,
            _ => return Err(bad()),
        };
        let index: usize = chars.as_str().parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(BraidLetter { index, direction })
    }
}

/// Parses a word such as `"L1 R2 L1"` (commas or whitespace).
pub fn parse_word(s: &str) -> Result<Vec<BraidLetter>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(BraidLetter::from_str)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedLattice {
    pub rank: usize,
    pub gram: Vec<IVec>,
    pub summands: Vec<Vec<IVec>>,
    pub history: Vec<BraidLetter>,
    /// `permutation[j]` is the current position of the summand that started at `j`.
    pub permutation: Vec<usize>,
}

fn overflow() -> Error {
    Error::InvalidInput("integer overflow in lattice arithmetic".into())
}

/// `[u, v) = u^T G v`, exact.
pub fn pair(gram: &[IVec], u: &[i64], v: &[i64]) -> Result<i64> {
    let mut acc: i128 = 0;
    for (i, &ui) in u.iter().enumerate() {
        if ui == 0 {
            continue;
        }
        for (j, &vj) in v.iter().enumerate() {
            acc += ui as i128 * gram[i][j] as i128 * vj as i128;
        }
    }
    i64::try_from(acc).map_err(|_| overflow())
}

fn axpy(a: i64, x: &[i64], y: &[i64]) -> Result<IVec> {
    // y + a x
    x.iter()
        .zip(y)
        .map(|(&xi, &yi)| a.checked_mul(xi).and_then(|p| p.checked_add(yi)).ok_or_else(overflow))
        .collect()
}

/// Determinant by fraction-free elimination.
pub fn bareiss_det(m: &[IVec]) -> Result<i128> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| a[i][k].checked_mul(a[k][j]).and_then(|y| x.checked_sub(y)))
                    .ok_or_else(overflow)?;
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

/// Rank of integer vectors, via determinants of the Gram-like matrix `V^T V`.
fn int_rank(vs: &[IVec]) -> Result<usize> {
    // Gaussian elimination over the rationals with i128 fraction-free rows.
    let mut rows: Vec<Vec<i128>> = vs.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for r in rank + 1..rows.len() {
            if rows[r][c] != 0 {
                let (a, b) = (rows[rank][c], rows[r][c]);
                for k in c..cols {
                    rows[r][k] = rows[r][k]
                        .checked_mul(a)
                        .and_then(|x| rows[rank][k].checked_mul(b).and_then(|y| x.checked_sub(y)))
                        .ok_or_else(overflow)?;
                }
                let g = rows[r].iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    rows[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    Ok(rank)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl PairedLattice {
    /// Builds and validates a decomposition with an empty history.
    pub fn new(gram: Vec<IVec>, summands: Vec<Vec<IVec>>) -> Result<Self> {
        let rank = gram.len();
        let lat = PairedLattice {
            rank,
            gram,
            permutation: (0..summands.len()).collect(),
            summands,
            history: Vec::new(),
        };
        lat.validate()?;
        Ok(lat)
    }

    /// Standard basis vectors as rank-1 summands.
    pub fn standard(gram: Vec<IVec>) -> Result<Self> {
        let n = gram.len();
        let summands = (0..n)
            .map(|i| {
                let mut v = alloc::vec![0; n];
                v[i] = 1;
                alloc::vec![v]
            })
            .collect();
        Self::new(gram, summands)
    }

    pub fn generators(&self) -> Vec<IVec> {
        self.summands.iter().flatten().cloned().collect()
    }

    /// Shape, non-degeneracy, span and block upper-triangularity.
    pub fn validate(&self) -> Result<()> {
        let n = self.rank;
        if n == 0 || self.gram.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("gram must be a nonempty square matrix".into()));
        }
        if bareiss_det(&self.gram)? == 0 {
            return Err(Error::InvalidInput("gram is degenerate".into()));
        }
        if self.summands.iter().any(|s| s.is_empty()) {
            return Err(Error::InvalidInput("empty summand".into()));
        }
        let gens = self.generators();
        if gens.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidInput(format!("summand vectors must have length {n}")));
        }
        if gens.len() > n {
            return Err(Error::InvalidInput("more generators than the rank".into()));
        }
        if gens.len() == n {
            let cols: Vec<IVec> = (0..n).map(|i| gens.iter().map(|g| g[i]).collect()).collect();
            let d = bareiss_det(&cols)?;
            if d.abs() != 1 {
                return Err(Error::InvalidInput(format!(
                    "summands do not form a basis (determinant {d})"
                )));
            }
        } else if int_rank(&gens)? != gens.len() {
            return Err(Error::InvalidInput("summand generators are dependent".into()));
        }
        for (i, si) in self.summands.iter().enumerate() {
            for sj in &self.summands[i + 1..] {
                for u in sj {
                    for v in si {
                        if pair(&self.gram, u, v)? != 0 {
                            return Err(Error::PairingInconsistent(format!(
                                "[{u:?}, {v:?}) != 0 for a later summand against an earlier one"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn exceptional_pair(&self, i: usize) -> Result<(IVec, IVec)> {
        if i + 1 >= self.summands.len() {
            return Err(Error::InvalidInput(format!(
                "no summands at positions {} and {}",
                i + 1,
                i + 2
            )));
        }
        let (a, b) = (&self.summands[i], &self.summands[i + 1]);
        if a.len() != 1 || b.len() != 1 {
            return Err(Error::Unsupported(format!(
                "mutation of blocks of rank {} and {} (only rank 1 is supported)",
                a.len(),
                b.len()
            )));
        }
        let (e, f) = (a[0].clone(), b[0].clone());
        for v in [&e, &f] {
            let n = pair(&self.gram, v, v)?;
            if n != 1 {
                return Err(Error::Unsupported(format!("generator {v:?} has [v, v) = {n}, not 1")));
            }
        }
        Ok((e, f))
    }
}

/// Applies one letter. The ambient Gram matrix is never modified.
pub fn mutate(dec: &PairedLattice, letter: BraidLetter) -> Result<PairedLattice> {
    if letter.index == 0 {
        return Err(Error::InvalidInput("braid letters are 1-based".into()));
    }
    let i = letter.index - 1;
    let (e, f) = dec.exceptional_pair(i)?;
    let c = pair(&dec.gram, &e, &f)?;
    let (first, second) = match letter.direction {
        Direction::Left => (axpy(c.checked_neg().ok_or_else(overflow)?, &e, &f)?, e),
        Direction::Right => {
            let e2 = axpy(c.checked_neg().ok_or_else(overflow)?, &f, &e)?;
            (f, e2)
        }
    };
    let mut out = dec.clone();
    out.summands[i] = alloc::vec![first];
    out.summands[i + 1] = alloc::vec![second];
    for p in out.permutation.iter_mut() {
        if *p == i {
            *p = i + 1;
        } else if *p == i + 1 {
            *p = i;
        }
    }
    out.history.push(letter);
    out.validate()?;
    Ok(out)
}

/// Applies a word left to right.
pub fn braid_apply(dec: &PairedLattice, word: &[BraidLetter]) -> Result<PairedLattice> {
    let mut cur = dec.clone();
    for &l in word {
        cur = mutate(&cur, l)?;
    }
    Ok(cur)
}

/// `C(m + n, n)` as a polynomial in `m`: `chi(O(a), O(b))` on `P^n` with `m = b - a`.
pub fn pn_chi(n: u32, m: i64) -> Result<i64> {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for j in 1..=n as i128 {
        num = num.checked_mul(m as i128 + j).ok_or_else(overflow)?;
        den *= j;
    }
    i64::try_from(num / den).map_err(|_| overflow())
}

/// Gram of `chi` on the line bundles `O(a_1), ..., O(a_r)` of `P^n`, in the
/// basis given by those bundles.
pub fn pn_line_bundle_gram(n: u32, degrees: &[i64]) -> Result<Vec<IVec>> {
    degrees
        .iter()
        .map(|&a| degrees.iter().map(|&b| pn_chi(n, b - a)).collect())
        .collect()
}

/// `P^1` lattice in coordinates `([O], [O_p])`: `chi(O(a), O(b)) = b - a + 1`.
pub fn p1_gram() -> Vec<IVec> {
    alloc::vec![alloc::vec![1, 1], alloc::vec![-1, 0]]
}

/// `[O(a)] = [O] + a [O_p]`.
pub fn p1_line(a: i64) -> IVec {
    alloc::vec![1, a]
}

/// Summand generators up to sign, as a sorted multiset.
pub fn classes_up_to_sign(dec: &PairedLattice) -> Vec<IVec> {
    let mut v: Vec<IVec> = dec
        .generators()
        .into_iter()
        .map(|g| {
            let neg = g.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0);
            if neg {
                g.iter().map(|x| -x).collect()
            } else {
                g
            }
        })
        .collect();
    v.sort();
    v
}

/// Formats a word as `"L1 R2"`.
pub fn format_word(word: &[BraidLetter]) -> String {
    let parts: Vec<String> = word.iter().map(|l| format!("{l}")).collect();
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1_dec() -> PairedLattice {
        PairedLattice::new(p1_gram(), alloc::vec![alloc::vec![p1_line(0)], alloc::vec![p1_line(1)]]).unwrap()
    }

    #[test]
    fn riemann_roch_on_p1() {
        for a in -3..3 {
            for b in -3..3 {
                assert_eq!(pair(&p1_gram(), &p1_line(a), &p1_line(b)).unwrap(), b - a + 1);
                assert_eq!(pn_chi(1, b - a).unwrap(), b - a + 1);
            }
        }
        assert_eq!(pn_chi(2, -3).unwrap(), 1);
        assert_eq!(pn_chi(2, -1).unwrap(), 0);
    }

    #[test]
    fn p1_left_mutation() {
        let m = mutate(&p1_dec(), BraidLetter::left(1)).unwrap();
        let minus_o_minus_1: IVec = p1_line(-1).iter().map(|x| -x).collect();
        assert_eq!(
            m.summands,
            alloc::vec![alloc::vec![minus_o_minus_1], alloc::vec![p1_line(0)]]
        );
        assert_eq!(m.permutation, alloc::vec![1, 0]);
        let back = mutate(&m, BraidLetter::right(1)).unwrap();
        assert_eq!(back.summands, p1_dec().summands);
    }

    #[test]
    fn exact_sequence_on_classes() {
        for k in -2..3 {
            let s: IVec = (0..2)
                .map(|i| p1_line(k + 1)[i] - 2 * p1_line(k)[i] + p1_line(k - 1)[i])
                .collect();
            assert_eq!(s, alloc::vec![0, 0]);
            let d = PairedLattice::new(
                p1_gram(),
                alloc::vec![alloc::vec![p1_line(k)], alloc::vec![p1_line(k + 1)]],
            )
            .unwrap();
            let m = mutate(&d, BraidLetter::left(1)).unwrap();
            let g = &m.summands[0][0];
            let o = p1_line(k - 1);
            assert!(*g == o || *g == o.iter().map(|x| -x).collect::<IVec>());
        }
    }

    #[test]
    fn braid_relation_on_p2() {
        let g = pn_line_bundle_gram(2, &[0, 1, 2]).unwrap();
        assert_eq!(
            g,
            alloc::vec![alloc::vec![1, 3, 6], alloc::vec![0, 1, 3], alloc::vec![0, 0, 1]]
        );
        let d = PairedLattice::standard(g).unwrap();
        let a = braid_apply(&d, &parse_word("L1 L2 L1").unwrap()).unwrap();
        let b = braid_apply(&d, &parse_word("L2 L1 L2").unwrap()).unwrap();
        assert_eq!(a.summands, b.summands);
        assert_eq!(a.permutation, b.permutation);
        assert_eq!(braid_apply(&d, &[]).unwrap(), d);
        let s = mutate(&d, BraidLetter::left(1)).unwrap();
        assert_eq!(s.permutation, alloc::vec![1, 0, 2]);
    }

    #[test]
    fn rejects_unsupported_and_bad_input() {
        let g = pn_line_bundle_gram(2, &[0, 1, 2]).unwrap();
        let block = PairedLattice::new(
            g.clone(),
            alloc::vec![
                alloc::vec![alloc::vec![1, 0, 0], alloc::vec![0, 1, 0]],
                alloc::vec![alloc::vec![0, 0, 1]]
            ],
        )
        .unwrap();
        assert!(matches!(
            mutate(&block, BraidLetter::left(1)),
            Err(Error::Unsupported(_))
        ));
        // wrong order violates triangularity
        assert!(matches!(
            PairedLattice::new(p1_gram(), alloc::vec![alloc::vec![p1_line(1)], alloc::vec![p1_line(0)]]),
            Err(Error::PairingInconsistent(_))
        ));
        assert!(parse_word("X1").is_err());
        assert!(parse_word("L0").is_err());
        assert_eq!(format_word(&parse_word("L1, R2").unwrap()), "L1 R2");
        assert!(mutate(&p1_dec(), BraidLetter::left(2)).is_err());
    }

    #[test]
    fn bareiss_examples() {
        assert_eq!(bareiss_det(&[alloc::vec![0, 1], alloc::vec![1, 0]]).unwrap(), -1);
        assert_eq!(
            bareiss_det(&[alloc::vec![2, 3, 1], alloc::vec![4, 1, -2], alloc::vec![0, 5, 7]]).unwrap(),
            -30
        );
        assert_eq!(bareiss_det(&[alloc::vec![1, 2], alloc::vec![2, 4]]).unwrap(), 0);
    }
}
