//! Certificate builders.

use crate::arith::{Matrix, Rational, Scalar, Subspace};
use crate::error::{Error, Result};
use crate::forms::{FormKind, FormSpace};
use crate::isotropic::{j0_construct_avoiding, search_in_span, split_off_kernels, third_isotropic_lines, SearchConfig};

use super::certificate::{ChainCertificate, ChainKind, Link, ManinDrinfeldLeaf};

fn check_nodes<S: Scalar>(space: &FormSpace<S>, i1: &Subspace<S>, i2: &Subspace<S>) -> Result<()> {
    for s in [i1, i2] {
        if s.ambient_dim() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "subspace of a {}-dimensional space given for a {}-dimensional one",
                s.ambient_dim(),
                space.dim()
            )));
        }
    }
    if i1.dim() != i2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "endpoints have dimensions {} and {}",
            i1.dim(),
            i2.dim()
        )));
    }
    if i1.is_zero() {
        return Err(Error::DimensionMismatch("endpoints must be nonzero".into()));
    }
    if !space.is_isotropic(i1) || !space.is_isotropic(i2) {
        return Err(Error::NotIsotropic);
    }
    Ok(())
}

/// Chain between isotropic subspaces of a symplectic space.
pub fn build_chain_symplectic(
    space: &FormSpace<Rational>,
    i1: &Subspace<Rational>,
    i2: &Subspace<Rational>,
) -> Result<ChainCertificate<Rational>> {
    if space.kind() != FormKind::Alternating {
        return Err(Error::InvalidForm("symplectic chains need an alternating form".into()));
    }
    check_nodes(space, i1, i2)?;
    build_recursive(ChainKind::Symplectic, space, i1, i2)
}

/// Chain between isotropic subspaces of a Hermitian space of signature
/// `(p, q)` with `p ≤ q`.
pub fn build_chain_unitary<S: Scalar>(
    space: &FormSpace<S>,
    i1: &Subspace<S>,
    i2: &Subspace<S>,
) -> Result<ChainCertificate<S>> {
    if space.kind() != FormKind::Hermitian {
        return Err(Error::InvalidForm("unitary chains need a Hermitian form".into()));
    }
    let sig = space.signature()?;
    if sig.plus > sig.minus {
        return Err(Error::SignatureUnsupported {
            p: sig.plus,
            q: sig.minus,
        });
    }
    check_nodes(space, i1, i2)?;
    build_recursive(ChainKind::Unitary, space, i1, i2)
}

/// Case analysis shared by the symplectic and unitary builders.
fn build_recursive<S: Scalar>(
    kind: ChainKind,
    space: &FormSpace<S>,
    i1: &Subspace<S>,
    i2: &Subspace<S>,
) -> Result<ChainCertificate<S>> {
    let mut cert = ChainCertificate::trivial(kind, space.clone(), i1.clone());
    if i1 != i2 {
        let steps = connect(kind, space, i1, i2)?;
        for (node, link) in steps {
            cert.nodes.push(node);
            cert.links.push(link);
        }
    }
    Ok(cert)
}

type Steps<S> = Vec<(Subspace<S>, Link<S>)>;

/// Links from `a` to `b` (distinct), each paired with the node it reaches.
fn connect<S: Scalar>(kind: ChainKind, space: &FormSpace<S>, a: &Subspace<S>, b: &Subspace<S>) -> Result<Steps<S>> {
    let meet = a.intersect(b);
    if !meet.is_zero() {
        return Ok(vec![(b.clone(), descend(kind, space, a, b, &meet)?)]);
    }
    if space.is_perfect_pairing(a, b) {
        return connect_perfect(kind, space, a, b);
    }
    connect_through_j0(kind, space, a, b)
}

/// `a ∩ b = I ≠ 0`: pass to `I^⊥/I`.
fn descend<S: Scalar>(
    kind: ChainKind,
    space: &FormSpace<S>,
    a: &Subspace<S>,
    b: &Subspace<S>,
    meet: &Subspace<S>,
) -> Result<Link<S>> {
    let sq = space.subquotient(meet)?;
    let pa = sq.push_subspace(a)?;
    let pb = sq.push_subspace(b)?;
    let sub = build_recursive(kind, &sq.qspace, &pa, &pb)?;
    Ok(Link::BoundaryDescent {
        i: meet.clone(),
        lift: sq.lift,
        sub: Box::new(sub),
    })
}

/// Perfectly paired `a`, `b`: a product split in rank one, otherwise two
/// descents through `J₁ ⊕ (J₁^⊥ ∩ b)` for the first basis line `J₁` of `a`.
fn connect_perfect<S: Scalar>(
    kind: ChainKind,
    space: &FormSpace<S>,
    a: &Subspace<S>,
    b: &Subspace<S>,
) -> Result<Steps<S>> {
    if a.dim() == 1 {
        let lambda_prime = a.sum(b);
        let lambda_double_prime = space.orthogonal_complement(&lambda_prime);
        let link = Link::ProductSplit {
            lambda_prime,
            lambda_double_prime,
            base: ManinDrinfeldLeaf,
        };
        return Ok(vec![(b.clone(), link)]);
    }
    let j1 = Subspace::line(a.basis().row(0), space.ctx());
    let j2 = space.orthogonal_complement(&j1).intersect(b);
    let mid = j1.sum(&j2);
    let first = descend(kind, space, a, &mid, &a.intersect(&mid))?;
    let second = descend(kind, space, &mid, b, &mid.intersect(b))?;
    Ok(vec![(mid, first), (b.clone(), second)])
}

/// Transversal but not perfectly paired: `a → J₀⊕K₂ → J₀⊕K₁ → b`, the
/// middle step omitted when the two coincide.
fn connect_through_j0<S: Scalar>(
    kind: ChainKind,
    space: &FormSpace<S>,
    a: &Subspace<S>,
    b: &Subspace<S>,
) -> Result<Steps<S>> {
    let (j1, k1, j2, k2) = split_off_kernels(space, a, b)?;
    let k = k1.sum(&k2);
    let j0 = j0_construct_avoiding(space, &j1, &j2, Some(&k))?;
    let i3 = j0.sum(&k2);
    let i4 = j0.sum(&k1);
    let mut steps = connect_perfect(kind, space, a, &i3)?;
    if i3 != i4 {
        let meet = i3.intersect(&i4);
        steps.push((i4.clone(), descend(kind, space, &i3, &i4, &meet)?));
    }
    steps.extend(connect_perfect(kind, space, &i4, b)?);
    Ok(steps)
}

/// Chain between isotropic lines or planes of a rational quadratic space
/// of signature `(2, n)`.
pub fn build_chain_orthogonal(
    space: &FormSpace<Rational>,
    i1: &Subspace<Rational>,
    i2: &Subspace<Rational>,
    cfg: &SearchConfig,
) -> Result<ChainCertificate<Rational>> {
    if space.kind() != FormKind::Symmetric {
        return Err(Error::InvalidForm("orthogonal chains need a symmetric form".into()));
    }
    let sig = space.signature()?;
    if sig.plus != 2 || sig.null != 0 {
        return Err(Error::SignatureMismatch(format!(
            "expected signature (2, n), got ({}, {})",
            sig.plus, sig.minus
        )));
    }
    check_nodes(space, i1, i2)?;
    let n = sig.minus;
    match i1.dim() {
        1 => {}
        2 if n == 2 => return Err(Error::ExcludedCase),
        2 => {}
        d => {
            return Err(Error::DimensionMismatch(format!(
                "isotropic subspaces of dimension {d} do not occur in signature (2, n)"
            )))
        }
    }
    let mut cert = ChainCertificate::trivial(ChainKind::Orthogonal, space.clone(), i1.clone());
    if i1 == i2 {
        return Ok(cert);
    }
    let steps = if i1.dim() == 1 {
        vec![(i2.clone(), orth_line_link(space, i1, i2, cfg)?)]
    } else if i1.intersect(i2).is_zero() {
        vec![(i2.clone(), segre_link(space, i1, i2)?)]
    } else {
        orth_planes_through_thirds(space, i1, i2, cfg)?
    };
    for (node, link) in steps {
        cert.nodes.push(node);
        cert.links.push(link);
    }
    Ok(cert)
}

fn orth_line_link(
    space: &FormSpace<Rational>,
    i1: &Subspace<Rational>,
    i2: &Subspace<Rational>,
    cfg: &SearchConfig,
) -> Result<Link<Rational>> {
    let join = i1.sum(i2);
    if space.pairing_matrix(i1, i2).is_zero() {
        return Ok(Link::OrthBoundaryPlane {
            j: join,
            base: ManinDrinfeldLeaf,
        });
    }
    let rest = space.orthogonal_complement(&join);
    let v =
        search_in_span(rest.basis(), cfg, |v| space.norm(v).is_positive()).ok_or_else(|| Error::SearchExhausted {
            what: "positive vector orthogonal to both lines".into(),
            max_height: cfg.max_height,
        })?;
    Ok(Link::OrthInteriorCurve {
        v,
        base: ManinDrinfeldLeaf,
    })
}

/// Witness rows `a₁, b₁, a₂, b₂` with `aᵢ` the basis of `j1` and `bᵢ` the
/// dual basis of `j2`, i.e. an isometry from `2U` in the order
/// `e₁, f₁, e₂, f₂`.
fn segre_link(space: &FormSpace<Rational>, j1: &Subspace<Rational>, j2: &Subspace<Rational>) -> Result<Link<Rational>> {
    let p = space.pairing_matrix(j1, j2);
    let c = p
        .inverse()
        .ok_or_else(|| Error::PreconditionFailed("transversal isotropic planes must pair perfectly".into()))?
        .transpose();
    let dual = c.mul(j2.basis());
    let a = j1.basis();
    let witness = Matrix::from_rows(
        vec![
            a.row(0).to_vec(),
            dual.row(0).to_vec(),
            a.row(1).to_vec(),
            dual.row(1).to_vec(),
        ],
        space.dim(),
        (),
    )?;
    Ok(Link::OrthSegre {
        isometry_witness: witness,
        base: ManinDrinfeldLeaf,
    })
}

/// Planes meeting in a line `I`: `J₁ → I₄⊕I₂ → I₃⊕I₁ → J₂` where `Iᵢ`
/// complements `I` in `Jᵢ` and `I₃, I₄` are further isotropic lines of
/// `(I₁ ⊕ I₂)^⊥` through which `I` is joined.
fn orth_planes_through_thirds(
    space: &FormSpace<Rational>,
    j1: &Subspace<Rational>,
    j2: &Subspace<Rational>,
    cfg: &SearchConfig,
) -> Result<Vec<(Subspace<Rational>, Link<Rational>)>> {
    let i = j1.intersect(j2);
    let i1 = j1.complement_in(&i);
    let i2 = j2.complement_in(&i);
    let rest = space.orthogonal_complement(&i1.sum(&i2));
    let restricted = space.restrict(&rest);
    let i_coords = i
        .basis()
        .to_rows()
        .iter()
        .map(|r| rest.coordinates(r).expect("I lies in (I1 + I2)^perp"))
        .collect();
    let i_local = Subspace::from_rows(i_coords, rest.dim(), ())?;
    let (l3, l4) = third_isotropic_lines(&restricted, &i_local, cfg)?;
    let i3 = Subspace::new(&l3.basis().mul(rest.basis()));
    let i4 = Subspace::new(&l4.basis().mul(rest.basis()));
    let j3 = i4.sum(&i2);
    let j4 = i3.sum(&i1);
    Ok(vec![
        (j3.clone(), segre_link(space, j1, &j3)?),
        (j4.clone(), segre_link(space, &j3, &j4)?),
        (j2.clone(), segre_link(space, &j4, j2)?),
    ])
}
