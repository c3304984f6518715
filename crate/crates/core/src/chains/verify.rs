//! Independent certificate checker. Every condition is recomputed from the
//! certificate alone; nothing is taken from the builders.

use serde_json::{json, Value};

use crate::arith::{Matrix, Scalar, Subspace};
use crate::forms::FormSpace;

use super::certificate::{ChainCertificate, ChainKind, Link};

/// Longest chain accepted for symplectic and unitary certificates.
pub const MAX_LINKS_SYMPLECTIC_UNITARY: usize = 5;
/// Longest chain accepted between orthogonal isotropic lines.
pub const MAX_LINKS_ORTHOGONAL_LINES: usize = 2;
/// Longest chain accepted between orthogonal isotropic planes.
pub const MAX_LINKS_ORTHOGONAL_PLANES: usize = 3;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Failure {
    /// Index of the offending link, `None` for certificate-wide conditions.
    pub link: Option<usize>,
    pub condition: String,
    pub detail: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VerificationReport {
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn has_condition(&self, condition: &str) -> bool {
        self.failures.iter().any(|f| f.condition == condition)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ok": self.ok(),
            "failures": self
                .failures
                .iter()
                .map(|f| json!({ "link": f.link, "condition": f.condition, "detail": f.detail }))
                .collect::<Vec<_>>(),
        })
    }

    fn fail(&mut self, link: Option<usize>, condition: &str, detail: impl Into<String>) {
        self.failures.push(Failure {
            link,
            condition: condition.to_string(),
            detail: detail.into(),
        });
    }

    fn check(&mut self, ok: bool, link: Option<usize>, condition: &str, detail: impl FnOnce() -> String) -> bool {
        if !ok {
            self.fail(link, condition, detail());
        }
        ok
    }
}

pub fn verify_certificate<S: Scalar>(cert: &ChainCertificate<S>) -> VerificationReport {
    let mut report = VerificationReport::default();
    verify_into(cert, &mut report);
    report
}

fn verify_into<S: Scalar>(cert: &ChainCertificate<S>, r: &mut VerificationReport) {
    let space = &cert.ambient;
    if let Err(e) = space.validate() {
        r.fail(None, "ambient_valid", e.to_string());
        return;
    }
    let expected = cert.kind.form_kind();
    if !r.check(space.kind() == expected, None, "ambient_kind", || {
        format!("{} certificate over a {} space", cert.kind, space.kind())
    }) {
        return;
    }
    if cert.kind == ChainKind::Orthogonal {
        match space.signature() {
            Ok(sig) if sig.plus == 2 => {}
            Ok(sig) => r.fail(
                None,
                "ambient_signature",
                format!("orthogonal ambient has signature ({}, {})", sig.plus, sig.minus),
            ),
            Err(e) => r.fail(None, "ambient_signature", e.to_string()),
        }
    }

    if !r.check(!cert.nodes.is_empty(), None, "node_count", || {
        "certificate has no nodes".into()
    }) {
        return;
    }
    let links_ok = r.check(cert.links.len() + 1 == cert.nodes.len(), None, "link_count", || {
        format!("{} nodes but {} links", cert.nodes.len(), cert.links.len())
    });
    let dim = cert.nodes[0].dim();
    let mut nodes_ok = true;
    for (k, node) in cert.nodes.iter().enumerate() {
        nodes_ok &= r.check(node.dim() == dim, None, "equal_dimension", || {
            format!("node {k} has dimension {}, node 0 has {dim}", node.dim())
        });
        nodes_ok &= r.check(!node.is_zero(), None, "node_nonzero", || format!("node {k} is zero"));
        nodes_ok &= r.check(space.is_isotropic(node), None, "node_isotropic", || {
            format!("node {k} is not isotropic")
        });
    }
    if cert.kind == ChainKind::Orthogonal {
        nodes_ok &= r.check(dim == 1 || dim == 2, None, "node_dimension", || {
            format!("orthogonal nodes must be lines or planes, got dimension {dim}")
        });
    }
    let bound = match (cert.kind, dim) {
        (ChainKind::Orthogonal, 1) => MAX_LINKS_ORTHOGONAL_LINES,
        (ChainKind::Orthogonal, _) => MAX_LINKS_ORTHOGONAL_PLANES,
        _ => MAX_LINKS_SYMPLECTIC_UNITARY,
    };
    r.check(cert.links.len() <= bound, None, "chain_length", || {
        format!("{} links exceed the bound {bound}", cert.links.len())
    });
    if !links_ok || !nodes_ok {
        return;
    }
    for (k, link) in cert.links.iter().enumerate() {
        verify_link(cert, k, link, r);
    }
}

fn verify_link<S: Scalar>(cert: &ChainCertificate<S>, k: usize, link: &Link<S>, r: &mut VerificationReport) {
    let space = &cert.ambient;
    let (a, b) = (&cert.nodes[k], &cert.nodes[k + 1]);
    let at = Some(k);
    let orthogonal_link = matches!(
        link,
        Link::OrthBoundaryPlane { .. } | Link::OrthInteriorCurve { .. } | Link::OrthSegre { .. }
    );
    if !r.check(
        orthogonal_link == (cert.kind == ChainKind::Orthogonal),
        at,
        "link_type",
        || format!("{} link in a {} certificate", link.type_name(), cert.kind),
    ) {
        return;
    }
    match link {
        Link::BoundaryDescent { i, lift, sub } => verify_descent(space, cert.kind, a, b, i, lift, sub, k, r),
        Link::ProductSplit {
            lambda_prime,
            lambda_double_prime,
            ..
        } => verify_product(space, a, b, lambda_prime, lambda_double_prime, k, r),
        Link::OrthBoundaryPlane { j, .. } => {
            if !r.check(a.dim() == 1, at, "link_node_dimension", || {
                "boundary plane joins lines".into()
            }) {
                return;
            }
            r.check(j.dim() == 2, at, "plane_dimension", || {
                format!("J has dimension {}", j.dim())
            });
            r.check(space.is_isotropic(j), at, "plane_isotropic", || {
                "J is not isotropic".into()
            });
            r.check(j.contains(a) && j.contains(b), at, "plane_contains_nodes", || {
                "J does not contain both nodes".into()
            });
        }
        Link::OrthInteriorCurve { v, .. } => {
            if !r.check(a.dim() == 1, at, "link_node_dimension", || {
                "interior curve joins lines".into()
            }) {
                return;
            }
            let norm = space.norm(v).to_rational();
            r.check(norm.is_some_and(|n| n.is_positive()), at, "positive_norm", || {
                "(v, v) is not positive".into()
            });
            let perp = a.sum(b).basis().to_rows().iter().all(|x| space.pair(x, v).is_zero());
            r.check(perp, at, "orthogonal_to_nodes", || {
                "v is not orthogonal to both nodes".into()
            });
            r.check(!space.pairing_matrix(a, b).is_zero(), at, "nodes_paired", || {
                "nodes are orthogonal; an interior curve needs (I1, I2) != 0".into()
            });
        }
        Link::OrthSegre {
            isometry_witness: w, ..
        } => {
            if !r.check(a.dim() == 2, at, "link_node_dimension", || {
                "Segre link joins planes".into()
            }) {
                return;
            }
            if !r.check(w.rows() == 4 && w.cols() == space.dim(), at, "witness_shape", || {
                format!("witness is {}x{}, expected 4x{}", w.rows(), w.cols(), space.dim())
            }) {
                return;
            }
            let ctx = space.ctx();
            let (o, z) = (S::one(ctx), S::zero(ctx));
            let two_u = Matrix::from_fn(
                4,
                4,
                ctx,
                |i, j| if i / 2 == j / 2 && i != j { o.clone() } else { z.clone() },
            );
            r.check(space.gram_of(w) == two_u, at, "witness_gram", || {
                "witness does not carry the 2U Gram matrix".into()
            });
            let first = Subspace::new(&w.select_rows(&[0, 2]));
            let second = Subspace::new(&w.select_rows(&[1, 3]));
            r.check(&first == a, at, "witness_first_plane", || {
                "span(e1, e2) is not mapped onto the node".into()
            });
            r.check(&second == b, at, "witness_second_plane", || {
                "span(f1, f2) is not mapped onto the next node".into()
            });
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn verify_descent<S: Scalar>(
    space: &FormSpace<S>,
    kind: ChainKind,
    a: &Subspace<S>,
    b: &Subspace<S>,
    i: &Subspace<S>,
    lift: &Matrix<S>,
    sub: &ChainCertificate<S>,
    k: usize,
    r: &mut VerificationReport,
) {
    let at = Some(k);
    let meet_ok = r.check(&a.intersect(b) == i, at, "intersection", || {
        "I is not the intersection of the nodes".into()
    });
    let nonzero = r.check(!i.is_zero(), at, "intersection_nonzero", || "I is zero".into());
    if !meet_ok || !nonzero {
        return;
    }
    let perp = space.orthogonal_complement(i);
    let q = perp.dim() - i.dim();
    let sub_dim = sub.ambient.dim();
    if !r.check(lift.rows() == q && sub_dim == q, at, "lift_shape", || {
        format!(
            "I^perp/I has dimension {q}; lift has {} rows and the sub-certificate ambient dimension {sub_dim}",
            lift.rows()
        )
    }) {
        return;
    }
    let inside = lift.to_rows().iter().all(|x| perp.contains_vector(x));
    r.check(inside, at, "lift_in_perp", || "lift rows are not in I^perp".into());
    let spans = Subspace::new(lift).sum(i);
    r.check(spans == perp, at, "lift_spans_quotient", || {
        "lift and I do not span I^perp".into()
    });
    r.check(sub.ambient.gram() == &space.gram_of(lift), at, "sub_gram", || {
        "sub-certificate Gram matrix is not the induced form on the lift".into()
    });
    r.check(sub.kind == kind, at, "sub_kind", || {
        format!("sub-certificate is {}", sub.kind)
    });
    if let (Some(s0), Some(s1)) = (sub.start(), sub.end()) {
        let pull = |t: &Subspace<S>| Subspace::new(&t.basis().mul(lift)).sum(i);
        r.check(&pull(s0) == a && &pull(s1) == b, at, "sub_endpoints", || {
            "sub-certificate endpoints do not lift to the nodes".into()
        });
    }
    let mut inner = VerificationReport::default();
    verify_into(sub, &mut inner);
    for f in inner.failures {
        let where_ = f.link.map_or(String::new(), |l| format!("sub link {l}: "));
        r.fail(at, &format!("sub.{}", f.condition), format!("{where_}{}", f.detail));
    }
}

fn verify_product<S: Scalar>(
    space: &FormSpace<S>,
    a: &Subspace<S>,
    b: &Subspace<S>,
    lp: &Subspace<S>,
    lpp: &Subspace<S>,
    k: usize,
    r: &mut VerificationReport,
) {
    let at = Some(k);
    r.check(a.dim() == 1, at, "rank_one", || {
        format!("nodes have dimension {}", a.dim())
    });
    r.check(space.is_perfect_pairing(a, b), at, "perfect_pairing", || {
        "nodes do not pair perfectly".into()
    });
    r.check(&a.sum(b) == lp, at, "lambda_prime_span", || {
        "lambda' is not spanned by the nodes".into()
    });
    r.check(space.pairing_matrix(lp, lpp).is_zero(), at, "orthogonal_split", || {
        "lambda' and lambda'' are not orthogonal".into()
    });
    r.check(
        lp.dim() + lpp.dim() == space.dim() && lp.intersect(lpp).is_zero(),
        at,
        "direct_sum",
        || "lambda' + lambda'' is not a direct sum decomposition of the ambient space".into(),
    );
    r.check(
        space.restrict(lp).is_nondegenerate(),
        at,
        "lambda_prime_nondegenerate",
        || "form on lambda' is degenerate".into(),
    );
    r.check(
        space.restrict(lpp).is_nondegenerate(),
        at,
        "lambda_double_prime_nondegenerate",
        || "form on lambda'' is degenerate".into(),
    );
}
