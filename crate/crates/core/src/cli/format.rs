//! The versioned JSON descriptor format.
//!
//! Integers are written as decimal strings; plain JSON integers are also
//! accepted on input. Polynomials are coefficient arrays, low degree first,
//! or strings such as "T^2-T+2". Unknown fields are rejected everywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact_linalg::IntMatrix;
use crate::poly::IntPolynomial;
use crate::specseq::{BoundaryKind, DegenerationDescriptor};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

/// An arbitrary-precision integer serialized as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct IntVisitor;
        impl Visitor<'_> for IntVisitor {
            type Value = Int;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Int, E> {
                BigInt::from_str(v.trim()).map(Int).map_err(|_| E::custom(format!("`{v}` is not a decimal integer")))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Int, E> {
                Ok(Int(v.into()))
            }
        }
        d.deserialize_any(IntVisitor)
    }
}

impl From<&BigInt> for Int {
    fn from(b: &BigInt) -> Self {
        Int(b.clone())
    }
}

/// A polynomial written as its coefficient array, low degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub IntPolynomial);

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.coeffs().iter().map(Int::from))
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct PolyVisitor;
        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = Poly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a coefficient array, low degree first, or a polynomial string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Poly, E> {
                v.parse().map(Poly).map_err(|e| E::custom(format!("`{v}`: {e}")))
            }
            fn visit_seq<A: de::SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Poly, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(Int(c)) = seq.next_element()? {
                    coeffs.push(c);
                }
                Ok(Poly(IntPolynomial::new(coeffs)))
            }
        }
        d.deserialize_any(PolyVisitor)
    }
}

pub type MatrixRows = Vec<Vec<Int>>;

pub fn matrix_to_rows(m: &IntMatrix) -> MatrixRows {
    m.rows_iter().map(|r| r.iter().map(Int::from).collect()).collect()
}

/// Builds a matrix; `cols` fixes the width when there are no rows.
pub fn rows_to_matrix(rows: &MatrixRows, cols: usize) -> Result<IntMatrix> {
    let width = rows.first().map_or(cols, Vec::len);
    let data = rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect();
    IntMatrix::from_rows(data, width)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DescriptorKind {
    Nilpotent,
    Family,
    Degeneration,
    WeilPoly,
}

impl DescriptorKind {
    pub fn name(self) -> &'static str {
        match self {
            DescriptorKind::Nilpotent => "nilpotent",
            DescriptorKind::Family => "family",
            DescriptorKind::Degeneration => "degeneration",
            DescriptorKind::WeilPoly => "weil-poly",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    format_version: u32,
    kind: DescriptorKind,
    payload: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NilpotentPayload {
    pub matrix: MatrixRows,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightClaim {
    pub q: Int,
    pub w: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyPayload {
    pub frobenius: MatrixRows,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub operators: BTreeMap<String, MatrixRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightClaim>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeilPayload {
    pub polynomial: Poly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohomologyEntry {
    pub degree: u32,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frobenius: Option<MatrixRows>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumEntry {
    pub index: Vec<usize>,
    pub cohomology: Vec<CohomologyEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    Restriction,
    Gysin,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub kind: MapKind,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub degree: u32,
    pub matrix: MatrixRows,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegenerationPayload {
    pub relative_dimension: usize,
    pub components: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Int>,
    pub strata: Vec<StratumEntry>,
    #[serde(default)]
    pub maps: Vec<MapEntry>,
    /// Betti numbers of the generic fiber, by degree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Nilpotent(NilpotentPayload),
    Family(FamilyPayload),
    Degeneration(DegenerationPayload),
    WeilPoly(WeilPayload),
}

/// A parsed descriptor file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescriptorFile {
    pub format_version: u32,
    pub payload: Payload,
}

fn payload_of<T: serde::de::DeserializeOwned>(v: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        Error::descriptor(format!("payload.{path}: {}", e.into_inner()))
    })
}

impl DescriptorFile {
    pub fn new(payload: Payload) -> Self {
        DescriptorFile { format_version: FORMAT_VERSION, payload }
    }

    pub fn kind(&self) -> DescriptorKind {
        match self.payload {
            Payload::Nilpotent(_) => DescriptorKind::Nilpotent,
            Payload::Family(_) => DescriptorKind::Family,
            Payload::Degeneration(_) => DescriptorKind::Degeneration,
            Payload::WeilPoly(_) => DescriptorKind::WeilPoly,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let env: Envelope = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            Error::descriptor(format!("line {} column {} at `{path}`: {inner}", inner.line(), inner.column()))
        })?;
        if env.format_version != FORMAT_VERSION {
            return Err(Error::descriptor(format!(
                "format_version {} is not supported (expected {FORMAT_VERSION})",
                env.format_version
            )));
        }
        let payload = match env.kind {
            DescriptorKind::Nilpotent => Payload::Nilpotent(payload_of(env.payload)?),
            DescriptorKind::Family => Payload::Family(payload_of(env.payload)?),
            DescriptorKind::Degeneration => Payload::Degeneration(payload_of(env.payload)?),
            DescriptorKind::WeilPoly => Payload::WeilPoly(payload_of(env.payload)?),
        };
        Ok(DescriptorFile { format_version: env.format_version, payload })
    }

    pub fn to_json(&self) -> String {
        let payload = match &self.payload {
            Payload::Nilpotent(p) => serde_json::to_value(p),
            Payload::Family(p) => serde_json::to_value(p),
            Payload::Degeneration(p) => serde_json::to_value(p),
            Payload::WeilPoly(p) => serde_json::to_value(p),
        }
        .expect("payloads serialize");
        let env = Envelope { format_version: self.format_version, kind: self.kind(), payload };
        let mut s = serde_json::to_string_pretty(&env).expect("envelope serializes");
        s.push('\n');
        s
    }
}

impl FromStr for DescriptorFile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl DegenerationPayload {
    pub fn from_descriptor(desc: &DegenerationDescriptor, betti: Option<Vec<usize>>) -> Self {
        let strata = desc
            .strata
            .iter()
            .map(|s| StratumEntry {
                index: s.index.clone(),
                cohomology: s
                    .cohomology
                    .iter()
                    .map(|(&degree, c)| CohomologyEntry {
                        degree,
                        rank: c.lattice.rank,
                        frobenius: c.frobenius.as_ref().map(|f| matrix_to_rows(f.matrix())),
                    })
                    .collect(),
            })
            .collect();
        let maps = desc
            .maps
            .iter()
            .map(|m| MapEntry {
                kind: match m.kind {
                    BoundaryKind::Restriction => MapKind::Restriction,
                    BoundaryKind::Gysin => MapKind::Gysin,
                },
                source: m.source.clone(),
                target: m.target.clone(),
                degree: m.degree,
                matrix: matrix_to_rows(m.map.matrix()),
            })
            .collect();
        DegenerationPayload {
            relative_dimension: desc.relative_dimension,
            components: desc.components,
            q: desc.q.as_ref().map(Int::from),
            strata,
            maps,
            betti,
        }
    }

    /// Builds and validates the descriptor.
    pub fn to_descriptor(&self) -> Result<DegenerationDescriptor> {
        let mut desc = DegenerationDescriptor::new(self.relative_dimension, self.components);
        desc.q = self.q.as_ref().map(|q| q.0.clone());
        for (n, s) in self.strata.iter().enumerate() {
            let ranks: Vec<(u32, usize)> = s.cohomology.iter().map(|c| (c.degree, c.rank)).collect();
            let mut degrees: Vec<u32> = ranks.iter().map(|r| r.0).collect();
            degrees.dedup();
            if degrees.len() != ranks.len() || degrees.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::descriptor(format!("payload.strata[{n}].cohomology: degrees must be increasing")));
            }
            desc.add_stratum(&s.index, &ranks);
        }
        for (n, s) in self.strata.iter().enumerate() {
            for c in &s.cohomology {
                if let Some(f) = &c.frobenius {
                    let m = rows_to_matrix(f, c.rank)
                        .map_err(|e| Error::descriptor(format!("payload.strata[{n}] frobenius: {e}")))?;
                    desc.set_frobenius(&s.index, c.degree, m)
                        .map_err(|e| Error::descriptor(format!("payload.strata[{n}] frobenius: {e}")))?;
                }
            }
        }
        for (n, m) in self.maps.iter().enumerate() {
            let cols = desc.rank(&m.source, m.degree);
            let mat =
                rows_to_matrix(&m.matrix, cols).map_err(|e| Error::descriptor(format!("payload.maps[{n}]: {e}")))?;
            let mat = if mat.nrows() == 0 { IntMatrix::zeros(0, cols) } else { mat };
            match m.kind {
                MapKind::Restriction => desc.add_restriction(&m.source, &m.target, m.degree, mat),
                MapKind::Gysin => desc.add_gysin(&m.source, &m.target, m.degree, mat),
            };
        }
        desc.validate()?;
        Ok(desc)
    }

    pub fn betti_map(&self) -> BTreeMap<usize, usize> {
        self.betti.iter().flatten().copied().enumerate().collect()
    }
}
