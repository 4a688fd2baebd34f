//! Rational vector configurations, their chirotopes and oriented matroids.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::rational::{det_sign_int, integer_scaled, rref, serde_matrix, Rational};
use super::tropical::TropicalPoint;
use crate::dual::for_each_subset;
use crate::error::{OmError, Result};
use crate::om::{binomial, OrientedMatroid};
use crate::sign::{GroundSet, Sign, SignVector};

/// Chart tag for configurations of tropical normals.
pub const TROPICAL_CHART: &str = "x4=0";
/// Chart tag for plain coordinate vectors.
pub const IDENTITY_CHART: &str = "identity";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalVectorConfig {
    ground: GroundSet,
    chart: String,
    dim: usize,
    vectors: Vec<Vec<Rational>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConfigFile {
    pub chart: String,
    pub elements: Vec<String>,
    #[serde(with = "serde_matrix")]
    pub vectors: Vec<Vec<Rational>>,
}

impl RationalVectorConfig {
    pub fn new(ground: GroundSet, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        Self::with_chart(ground, IDENTITY_CHART, vectors)
    }

    pub fn with_chart(ground: GroundSet, chart: &str, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        if vectors.len() != ground.len() {
            return Err(OmError::GroundMismatch { left: ground.len(), right: vectors.len() });
        }
        if vectors.is_empty() {
            return Err(OmError::EmptyConfig);
        }
        let dim = vectors[0].len();
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(OmError::Dimension(format!("expected {dim} coordinates, got {}", v.len())));
        }
        Ok(RationalVectorConfig { ground, chart: chart.to_string(), dim, vectors })
    }

    /// Configuration of tropical normals read as chart functionals.
    pub fn from_tropical(ground: GroundSet, normals: &[TropicalPoint]) -> Result<Self> {
        let vectors = normals.iter().map(|n| n.functional()).collect();
        Self::with_chart(ground, TROPICAL_CHART, vectors)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn chart(&self) -> &str {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Coordinate rows of the matrix whose columns are the vectors.
    fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.dim).map(|c| self.vectors.iter().map(|v| v[c].clone()).collect()).collect()
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows();
        rref(&mut rows).len()
    }

    /// Determinant signs of the leading `d` coordinates.
    pub fn chirotope_of(&self, d: usize) -> Result<Chirotope> {
        if d > self.dim {
            return Err(OmError::Dimension(format!("rank {d} exceeds dimension {}", self.dim)));
        }
        let cols: Vec<Vec<BigInt>> = self.vectors.iter().map(|v| integer_scaled(&v[..d])).collect();
        Ok(Chirotope::from_integer_columns(&cols, d))
    }

    /// Cocircuits of the realized matroid, one ± pair per hyperplane spanned
    /// by the configuration.
    pub fn om_of_config(&self) -> Result<OrientedMatroid> {
        let mut rows = self.rows();
        let d = rref(&mut rows).len();
        if d == 0 {
            return Err(OmError::EmptyConfig);
        }
        rows.truncate(d);
        let n = self.len();
        // Row operations preserve the chirotope up to a global sign, which
        // cocircuit pairs do not see.
        let cols: Vec<Vec<BigInt>> =
            (0..n).map(|e| integer_scaled(&rows.iter().map(|r| r[e].clone()).collect::<Vec<_>>())).collect();
        let chi = Chirotope::from_integer_columns(&cols, d);
        let mut cocircuits = Vec::new();
        let mut buf = vec![0usize; d];
        for_each_subset(n, d - 1, &mut |t| {
            let mut x = SignVector::zero(n);
            for e in 0..n {
                if t.binary_search(&e).is_ok() {
                    continue;
                }
                let p = t.partition_point(|&a| a < e);
                buf[..p].copy_from_slice(&t[..p]);
                buf[p] = e;
                buf[p + 1..].copy_from_slice(&t[p..]);
                let mut s = chi.sorted_sign(&buf);
                if (d - 1 - p) % 2 == 1 {
                    s = -s;
                }
                x.set(e, s);
            }
            if !x.is_zero() {
                cocircuits.push(x);
            }
        });
        OrientedMatroid::new(self.ground.clone(), d, cocircuits)
    }

    pub fn to_json(&self) -> ConfigFile {
        ConfigFile { chart: self.chart.clone(), elements: self.ground.elements().to_vec(), vectors: self.vectors.clone() }
    }

    pub fn from_json(file: ConfigFile) -> Result<Self> {
        Self::with_chart(GroundSet::new(file.elements)?, &file.chart, file.vectors)
    }
}

/// Determinant-sign cache over sorted `d`-subsets, indexed in colex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chirotope {
    n: usize,
    rank: usize,
    signs: Vec<Sign>,
    binom: Vec<Vec<usize>>,
}

impl Chirotope {
    fn from_integer_columns(cols: &[Vec<BigInt>], d: usize) -> Chirotope {
        let n = cols.len();
        let binom: Vec<Vec<usize>> = (0..=n).map(|a| (0..=d).map(|b| binomial(a, b)).collect()).collect();
        let mut signs = vec![Sign::Zero; binomial(n, d)];
        let mut refs: Vec<&[BigInt]> = Vec::with_capacity(d);
        let zero_col = vec![BigInt::zero(); d];
        for_each_subset(n, d, &mut |s| {
            refs.clear();
            refs.extend(s.iter().map(|&e| if cols[e].len() == d { cols[e].as_slice() } else { zero_col.as_slice() }));
            let idx = colex(&binom, s);
            signs[idx] = det_sign_int(&refs);
        });
        Chirotope { n, rank: d, signs, binom }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn sorted_sign(&self, sorted: &[usize]) -> Sign {
        self.signs[colex(&self.binom, sorted)]
    }

    /// `χ` of an ordered tuple: 0 on repeats, sign adjusted by the sorting parity.
    pub fn get(&self, tuple: &[usize]) -> Sign {
        assert_eq!(tuple.len(), self.rank);
        let mut t = tuple.to_vec();
        let mut odd = false;
        for i in 0..t.len() {
            for j in 0..t.len() - 1 - i {
                if t[j] > t[j + 1] {
                    t.swap(j, j + 1);
                    odd = !odd;
                }
            }
        }
        if t.windows(2).any(|w| w[0] == w[1]) {
            return Sign::Zero;
        }
        let s = self.sorted_sign(&t);
        if odd {
            -s
        } else {
            s
        }
    }

    pub fn is_uniform(&self) -> bool {
        self.signs.iter().all(|s| !s.is_zero())
    }
}

fn colex(binom: &[Vec<usize>], sorted: &[usize]) -> usize {
    sorted.iter().enumerate().map(|(i, &e)| binom[e][i + 1]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::rational::{dot, int, nullspace};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn config(vs: &[&[i64]]) -> RationalVectorConfig {
        RationalVectorConfig::new(
            GroundSet::numbered(vs.len()),
            vs.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect(),
        )
        .unwrap()
    }

    /// Oracle: a direction orthogonal to each spanning `(d−1)`-subset, found
    /// by a nullspace computation inside the column space.
    fn cocircuits_by_directions(c: &RationalVectorConfig) -> Vec<SignVector> {
        let n = c.len();
        let rows = c.rows();
        let mut basis_rows = rows.clone();
        let d = rref(&mut basis_rows).len();
        basis_rows.truncate(d);
        // coordinates of every vector in the row space basis
        let w: Vec<Vec<Rational>> = (0..n).map(|e| basis_rows.iter().map(|r| r[e].clone()).collect()).collect();
        let mut out = Vec::new();
        for_each_subset(n, d - 1, &mut |t| {
            let constraints: Vec<Vec<Rational>> = t.iter().map(|&e| w[e].clone()).collect();
            let ns = nullspace(&constraints, d);
            if ns.len() != 1 {
                return;
            }
            let signs: Vec<Sign> = (0..n).map(|e| crate::realize::rational::sign_of(&dot(&ns[0], &w[e]))).collect();
            let x = SignVector::from_signs(&signs);
            out.push(-&x);
            out.push(x);
        });
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn identity_chirotope_is_positive() {
        let c = config(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let chi = c.chirotope_of(3).unwrap();
        assert_eq!(chi.get(&[0, 1, 2]), Sign::Pos);
        assert_eq!(chi.get(&[1, 0, 2]), Sign::Neg);
        assert_eq!(chi.get(&[0, 0, 2]), Sign::Zero);
        assert!(c.chirotope_of(4).is_err());
    }

    #[test]
    fn duplicated_vectors_share_signs() {
        let c = config(&[&[1, 2, 0], &[1, 2, 0], &[0, 1, 3], &[2, -1, 1], &[1, 1, 1]]);
        let m = c.om_of_config().unwrap();
        for x in m.cocircuits() {
            assert_eq!(x.get(0), x.get(1));
        }
    }

    #[test]
    fn random_configs_match_direction_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(1..=7);
            let dim = rng.gen_range(1..=3);
            let vs: Vec<Vec<Rational>> =
                (0..n).map(|_| (0..dim).map(|_| int(rng.gen_range(-2..=2))).collect()).collect();
            let c = RationalVectorConfig::new(GroundSet::numbered(n), vs).unwrap();
            match c.om_of_config() {
                Ok(m) => {
                    assert_eq!(m.rank(), c.rank());
                    assert_eq!(m.cocircuits(), cocircuits_by_directions(&c).as_slice());
                }
                Err(OmError::EmptyConfig) => assert_eq!(c.rank(), 0),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let c = config(&[&[1, 0], &[3, -4]]);
        let text = serde_json::to_string(&c.to_json()).unwrap();
        assert!(text.contains("\"3/1\""));
        let back = RationalVectorConfig::from_json(serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
