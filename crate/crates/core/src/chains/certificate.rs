//! Certificate data and its JSON form.

use std::fmt;

use serde_json::{json, Value};

use crate::arith::{check_discriminant, Matrix, QuadFieldElement, Rational, Scalar, Subspace};
use crate::error::{Error, Result};
use crate::forms::{FormKind, FormSpace};

/// Version written to and required from the `"format"` field.
pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ChainKind {
    Orthogonal,
    Symplectic,
    Unitary,
}

impl ChainKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ChainKind::Orthogonal => "orthogonal",
            ChainKind::Symplectic => "symplectic",
            ChainKind::Unitary => "unitary",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "orthogonal" => Ok(ChainKind::Orthogonal),
            "symplectic" => Ok(ChainKind::Symplectic),
            "unitary" => Ok(ChainKind::Unitary),
            other => Err(Error::Parse(format!("unknown chain kind {other:?}"))),
        }
    }

    /// The form kind an ambient space of this chain kind must carry.
    pub fn form_kind(self) -> FormKind {
        match self {
            ChainKind::Orthogonal => FormKind::Symmetric,
            ChainKind::Symplectic => FormKind::Alternating,
            ChainKind::Unitary => FormKind::Hermitian,
        }
    }
}

impl fmt::Display for ChainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Marks a link whose rational equivalence is the Manin–Drinfeld theorem
/// on a modular curve. Carries no data.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct ManinDrinfeldLeaf;

impl ManinDrinfeldLeaf {
    pub fn to_json(self) -> Value {
        json!({ "leaf": "manin-drinfeld" })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v.get("leaf").and_then(Value::as_str) {
            Some("manin-drinfeld") => Ok(ManinDrinfeldLeaf),
            _ => Err(Error::Parse("expected {\"leaf\": \"manin-drinfeld\"}".into())),
        }
    }
}

/// One step `nodes[i] → nodes[i+1]` of a chain together with its witnesses.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Link<S: Scalar> {
    /// Both nodes contain `i = nodes[i] ∩ nodes[i+1] ≠ 0`; `sub` connects
    /// their images in `I^⊥/I`, whose coordinates are given by the rows of
    /// `lift` (coset representatives in `I^⊥`).
    BoundaryDescent {
        i: Subspace<S>,
        lift: Matrix<S>,
        sub: Box<ChainCertificate<S>>,
    },
    /// Rank-one nodes pairing perfectly; the ambient splits as
    /// `Λ′ ⊕ Λ″` with `Λ′` spanned by the nodes.
    ProductSplit {
        lambda_prime: Subspace<S>,
        lambda_double_prime: Subspace<S>,
        base: ManinDrinfeldLeaf,
    },
    /// Orthogonal isotropic lines joined by the isotropic plane `j`.
    OrthBoundaryPlane { j: Subspace<S>, base: ManinDrinfeldLeaf },
    /// Non-orthogonal isotropic lines and a positive vector `v` orthogonal
    /// to both.
    OrthInteriorCurve { v: Vec<S>, base: ManinDrinfeldLeaf },
    /// Transversal isotropic planes; the rows of `isometry_witness` are the
    /// images of the standard basis `e₁, f₁, e₂, f₂` of `2U`, with
    /// `span(e₁, e₂) ↦ nodes[i]` and `span(f₁, f₂) ↦ nodes[i+1]`.
    OrthSegre {
        isometry_witness: Matrix<S>,
        base: ManinDrinfeldLeaf,
    },
}

impl<S: Scalar> Link<S> {
    pub fn type_name(&self) -> &'static str {
        match self {
            Link::BoundaryDescent { .. } => "BoundaryDescent",
            Link::ProductSplit { .. } => "ProductSplit",
            Link::OrthBoundaryPlane { .. } => "OrthBoundaryPlane",
            Link::OrthInteriorCurve { .. } => "OrthInteriorCurve",
            Link::OrthSegre { .. } => "OrthSegre",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = match self {
            Link::BoundaryDescent { i, lift, sub } => json!({
                "I": i.to_json(),
                "lift": lift.to_json(),
                "sub": sub.to_json(),
            }),
            Link::ProductSplit {
                lambda_prime,
                lambda_double_prime,
                base,
            } => json!({
                "lambdaPrime": lambda_prime.to_json(),
                "lambdaDoublePrime": lambda_double_prime.to_json(),
                "base": base.to_json(),
            }),
            Link::OrthBoundaryPlane { j, base } => json!({
                "J": j.to_json(),
                "base": base.to_json(),
            }),
            Link::OrthInteriorCurve { v, base } => json!({
                "v": v.iter().map(S::to_json).collect::<Vec<_>>(),
                "base": base.to_json(),
            }),
            Link::OrthSegre { isometry_witness, base } => json!({
                "isometryWitness": isometry_witness.to_json(),
                "base": base.to_json(),
            }),
        };
        v["type"] = json!(self.type_name());
        v
    }

    fn from_json(v: &Value, dim: usize, ctx: S::Ctx) -> Result<Self> {
        let field = |name: &str| {
            v.get(name)
                .ok_or_else(|| Error::Parse(format!("link is missing {name:?}")))
        };
        let ty = field("type")?
            .as_str()
            .ok_or_else(|| Error::Parse("link type must be a string".into()))?;
        let link = match ty {
            "BoundaryDescent" => Link::BoundaryDescent {
                i: Subspace::from_json(field("I")?, dim, ctx)?,
                lift: Matrix::from_json(field("lift")?, Some(dim), ctx)?,
                sub: Box::new(ChainCertificate::from_json_in(field("sub")?, ctx)?),
            },
            "ProductSplit" => Link::ProductSplit {
                lambda_prime: Subspace::from_json(field("lambdaPrime")?, dim, ctx)?,
                lambda_double_prime: Subspace::from_json(field("lambdaDoublePrime")?, dim, ctx)?,
                base: ManinDrinfeldLeaf::from_json(field("base")?)?,
            },
            "OrthBoundaryPlane" => Link::OrthBoundaryPlane {
                j: Subspace::from_json(field("J")?, dim, ctx)?,
                base: ManinDrinfeldLeaf::from_json(field("base")?)?,
            },
            "OrthInteriorCurve" => {
                let raw = field("v")?
                    .as_array()
                    .ok_or_else(|| Error::Parse("\"v\" must be an array".into()))?;
                let v = raw.iter().map(|x| S::from_json(x, ctx)).collect::<Result<Vec<_>>>()?;
                if v.len() != dim {
                    return Err(Error::Parse(format!("\"v\" has length {}, expected {dim}", v.len())));
                }
                Link::OrthInteriorCurve {
                    v,
                    base: ManinDrinfeldLeaf::from_json(field("base")?)?,
                }
            }
            "OrthSegre" => Link::OrthSegre {
                isometry_witness: Matrix::from_json(field("isometryWitness")?, Some(dim), ctx)?,
                base: ManinDrinfeldLeaf::from_json(field("base")?)?,
            },
            other => return Err(Error::Parse(format!("unknown link type {other:?}"))),
        };
        Ok(link)
    }
}

/// A chain of isotropic subspaces from `nodes[0]` to the last node, with
/// `links[i]` witnessing the step from `nodes[i]` to `nodes[i+1]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainCertificate<S: Scalar> {
    pub kind: ChainKind,
    pub ambient: FormSpace<S>,
    pub nodes: Vec<Subspace<S>>,
    pub links: Vec<Link<S>>,
}

impl<S: Scalar> ChainCertificate<S> {
    /// The single-node certificate for equal endpoints.
    pub fn trivial(kind: ChainKind, ambient: FormSpace<S>, node: Subspace<S>) -> Self {
        ChainCertificate {
            kind,
            ambient,
            nodes: vec![node],
            links: Vec::new(),
        }
    }

    pub fn start(&self) -> Option<&Subspace<S>> {
        self.nodes.first()
    }

    pub fn end(&self) -> Option<&Subspace<S>> {
        self.nodes.last()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "format": FORMAT_VERSION,
            "kind": self.kind.as_str(),
            "ambient": self.ambient.to_json(),
            "nodes": self.nodes.iter().map(Subspace::to_json).collect::<Vec<_>>(),
            "links": self.links.iter().map(Link::to_json).collect::<Vec<_>>(),
        })
    }

    /// Parses a certificate whose scalars live in the field fixed by `ctx`.
    /// Gram matrices are only checked for shape; their other properties are
    /// for the verifier to judge.
    pub fn from_json_in(v: &Value, ctx: S::Ctx) -> Result<Self> {
        match v.get("format").and_then(Value::as_u64) {
            Some(FORMAT_VERSION) => {}
            Some(other) => return Err(Error::Parse(format!("unsupported certificate format {other}"))),
            None => return Err(Error::Parse("certificate needs \"format\": 1".into())),
        }
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("certificate needs a \"kind\" string".into()))?;
        let kind = ChainKind::parse(kind)?;
        let ambient = v
            .get("ambient")
            .ok_or_else(|| Error::Parse("certificate needs an \"ambient\" space".into()))?;
        let ambient = FormSpace::from_json_unvalidated(ambient, ctx)?;
        let dim = ambient.dim();
        let list = |name: &str| {
            v.get(name)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("certificate needs a {name:?} array")))
        };
        let nodes = list("nodes")?
            .iter()
            .map(|n| Subspace::from_json(n, dim, ctx))
            .collect::<Result<Vec<_>>>()?;
        let links = list("links")?
            .iter()
            .map(|l| Link::from_json(l, dim, ctx))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChainCertificate {
            kind,
            ambient,
            nodes,
            links,
        })
    }

    /// Number of links, including those inside sub-certificates.
    pub fn total_links(&self) -> usize {
        self.links
            .iter()
            .map(|l| match l {
                Link::BoundaryDescent { sub, .. } => 1 + sub.total_links(),
                _ => 1,
            })
            .sum()
    }
}

/// A certificate over ℚ or over an imaginary quadratic field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AnyCertificate {
    Rational(ChainCertificate<Rational>),
    Hermitian(ChainCertificate<QuadFieldElement>),
}

impl AnyCertificate {
    pub fn from_json(v: &Value) -> Result<Self> {
        let ambient = v
            .get("ambient")
            .ok_or_else(|| Error::Parse("certificate needs an \"ambient\" space".into()))?;
        let kind = ambient
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("ambient space needs a \"kind\" string".into()))?;
        if FormKind::parse(kind)? == FormKind::Hermitian {
            let d = ambient
                .get("D")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse("hermitian space needs an integer \"D\"".into()))?;
            let d = check_discriminant(d)?;
            Ok(AnyCertificate::Hermitian(ChainCertificate::from_json_in(v, d)?))
        } else {
            Ok(AnyCertificate::Rational(ChainCertificate::from_json_in(v, ())?))
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyCertificate::Rational(c) => c.to_json(),
            AnyCertificate::Hermitian(c) => c.to_json(),
        }
    }

    pub fn verify(&self) -> super::VerificationReport {
        match self {
            AnyCertificate::Rational(c) => super::verify_certificate(c),
            AnyCertificate::Hermitian(c) => super::verify_certificate(c),
        }
    }
}
