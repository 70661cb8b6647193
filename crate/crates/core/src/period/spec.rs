use crate::cyclo::CycloNumber;
use crate::error::Result;
use crate::padic::{FieldDescriptor, PAdicScalar};
use crate::quadext::{Mat2, QuadExtDescriptor, QuadExtScalar};

/// How the torus `E^×` sits in `GL_2(F)`.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum EmbeddingMode {
    /// `a + b√D ↦ [[a, b], [bD, a]]`.
    Standard,
    /// `t ↦ M^{-1} ι(t) M` for the standard `ι`.
    Conjugated { m: Mat2, m_inv: Mat2 },
}

#[derive(Clone, Debug)]
pub struct EmbeddingSpec {
    pub e: QuadExtDescriptor,
    pub mode: EmbeddingMode,
}

impl EmbeddingSpec {
    pub fn standard(e: QuadExtDescriptor) -> EmbeddingSpec {
        EmbeddingSpec {
            e,
            mode: EmbeddingMode::Standard,
        }
    }

    pub fn conjugated(e: QuadExtDescriptor, m: Mat2) -> Result<EmbeddingSpec> {
        let m_inv = m.inv()?;
        Ok(EmbeddingSpec {
            e,
            mode: EmbeddingMode::Conjugated { m, m_inv },
        })
    }

    pub fn embed(&self, t: &QuadExtScalar) -> Mat2 {
        match &self.mode {
            EmbeddingMode::Standard => t.embed(),
            EmbeddingMode::Conjugated { m, m_inv } => *m_inv * t.embed() * *m,
        }
    }

    /// The conjugating matrix, identity in standard mode.
    pub fn conjugator(&self) -> Mat2 {
        match &self.mode {
            EmbeddingMode::Standard => Mat2::identity(self.e.base()),
            EmbeddingMode::Conjugated { m, .. } => *m,
        }
    }
}

/// The vector `Σ cᵢ π(gᵢ) φ₀`.
#[derive(Clone, Debug)]
pub struct TestVectorSpec {
    pub terms: Vec<(CycloNumber, Mat2)>,
}

impl TestVectorSpec {
    pub fn phi0(f: FieldDescriptor) -> TestVectorSpec {
        TestVectorSpec::translate_of(Mat2::identity(f))
    }

    /// `π(g) φ₀`.
    pub fn translate_of(g: Mat2) -> TestVectorSpec {
        TestVectorSpec {
            terms: vec![(CycloNumber::one(), g)],
        }
    }

    /// `π(n(u) diag(v, 1)) φ₀`.
    pub fn test_vector(u: PAdicScalar, v: PAdicScalar) -> TestVectorSpec {
        let f = u.field();
        TestVectorSpec::translate_of(Mat2::unipotent(u) * Mat2::diag(v, f.one()))
    }

    /// `φ_x = π(diag(x, 1)) φ₀`.
    pub fn phi_x(x: PAdicScalar) -> TestVectorSpec {
        let f = x.field();
        TestVectorSpec::translate_of(Mat2::diag(x, f.one()))
    }

    /// `π(h) φ`.
    pub fn translated(&self, h: &Mat2) -> TestVectorSpec {
        TestVectorSpec {
            terms: self
                .terms
                .iter()
                .map(|(c, g)| (c.clone(), *h * *g))
                .collect(),
        }
    }

    pub fn scaled(&self, c: &CycloNumber) -> TestVectorSpec {
        TestVectorSpec {
            terms: self
                .terms
                .iter()
                .map(|(d, g)| (c.clone() * d.clone(), *g))
                .collect(),
        }
    }

    pub fn plus(&self, other: &TestVectorSpec) -> TestVectorSpec {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TestVectorSpec { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Integers in `[1, p^k)` prime to `p`: representatives of `(O/ϖ^k)^×`.
pub fn unit_residues(p: u64, k: u32) -> Vec<u64> {
    if k == 0 {
        return vec![1];
    }
    (1..p.pow(k)).filter(|x| x % p != 0).collect()
}
