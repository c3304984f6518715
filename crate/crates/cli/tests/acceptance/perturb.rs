//! Single-entry perturbations of certificate witnesses.
//!
//! Every rational entry below `links` (recursively, so sub-certificates
//! count) is a witness entry. A perturbation adds a small nonzero integer to
//! one of them. It is exempt when an independent check shows the result is
//! still a valid certificate:
//!
//! * it parses to the same certificate (a rescaled canonical basis), or
//! * it moves a lift row by a multiple of a unit vector lying in `I`, or
//! * it moves the interior-curve vector `v` along a unit vector orthogonal
//!   to both nodes while keeping `(v, v) > 0`.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use cuspcert::arith::{Rational, Scalar};
use cuspcert::chains::{AnyCertificate, ChainCertificate, Link};

#[derive(Clone, Debug)]
enum Seg {
    Key(String),
    Index(usize),
}

type Path = Vec<Seg>;

fn get<'a>(v: &'a Value, path: &[Seg]) -> &'a Value {
    path.iter().fold(v, |v, s| match s {
        Seg::Key(k) => &v[k.as_str()],
        Seg::Index(i) => &v[*i],
    })
}

fn get_mut<'a>(v: &'a mut Value, path: &[Seg]) -> &'a mut Value {
    path.iter().fold(v, |v, s| match s {
        Seg::Key(k) => &mut v[k.as_str()],
        Seg::Index(i) => &mut v[*i],
    })
}

fn collect(v: &Value, path: &mut Path, under_links: bool, out: &mut Vec<Path>) {
    match v {
        Value::String(s) if under_links && s.parse::<Rational>().is_ok() => out.push(path.clone()),
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                path.push(Seg::Index(i));
                collect(x, path, under_links, out);
                path.pop();
            }
        }
        Value::Object(m) => {
            for (k, x) in m {
                path.push(Seg::Key(k.clone()));
                collect(x, path, under_links || k == "links", out);
                path.pop();
            }
        }
        _ => {}
    }
}

fn witness_paths(cert: &Value) -> Vec<Path> {
    let mut out = Vec::new();
    collect(cert, &mut Vec::new(), false, &mut out);
    out
}

/// Splits a witness path into the certificate holding the link, the link
/// index and the remainder inside the link.
fn locate(path: &[Seg]) -> (&[Seg], usize, &[Seg]) {
    let at = path
        .iter()
        .rposition(|s| matches!(s, Seg::Key(k) if k == "links"))
        .expect("witness paths pass through links");
    let Seg::Index(k) = path[at + 1] else {
        panic!("links is an array")
    };
    (&path[..at], k, &path[at + 2..])
}

fn column_of(rest: &[Seg]) -> Option<usize> {
    rest.iter().rev().find_map(|s| match s {
        Seg::Index(i) => Some(*i),
        _ => None,
    })
}

fn provably_valid<S: Scalar>(cert: &ChainCertificate<S>, k: usize, rest: &[Seg], perturbed_link: &Value) -> bool {
    let space = &cert.ambient;
    let n = space.dim();
    let ctx = space.ctx();
    let field = match rest.first() {
        Some(Seg::Key(f)) => f.as_str(),
        _ => return false,
    };
    let Some(c) = column_of(rest) else { return false };
    let unit: Vec<S> = (0..n)
        .map(|i| if i == c { S::one(ctx) } else { S::zero(ctx) })
        .collect();
    match (&cert.links[k], field) {
        (Link::BoundaryDescent { i, .. }, "lift") => i.contains_vector(&unit),
        (Link::OrthInteriorCurve { .. }, "v") => {
            let (a, b) = (&cert.nodes[k], &cert.nodes[k + 1]);
            let orth = a
                .sum(b)
                .basis()
                .to_rows()
                .iter()
                .all(|x| space.pair(x, &unit).is_zero());
            let v: Option<Vec<S>> = perturbed_link["v"]
                .as_array()
                .and_then(|xs| xs.iter().map(|x| S::from_json(x, ctx).ok()).collect());
            orth && v.is_some_and(|v| space.norm(&v).to_rational().is_some_and(|r| r.is_positive()))
        }
        _ => false,
    }
}

fn exempt(original: &Value, perturbed: &Value, path: &[Seg]) -> bool {
    if let (Ok(a), Ok(b)) = (
        AnyCertificate::from_json(original),
        AnyCertificate::from_json(perturbed),
    ) {
        if a == b {
            return true;
        }
    }
    let (holder, k, rest) = locate(path);
    let perturbed_link = &get(perturbed, holder)["links"][k];
    match AnyCertificate::from_json(get(original, holder)) {
        Ok(AnyCertificate::Rational(c)) => provably_valid(&c, k, rest, perturbed_link),
        Ok(AnyCertificate::Hermitian(c)) => provably_valid(&c, k, rest, perturbed_link),
        Err(_) => false,
    }
}

#[derive(Default, Debug)]
pub struct Tally {
    pub total: usize,
    pub exempt: usize,
    pub rejected: usize,
    pub accepted: usize,
}

impl Tally {
    pub fn counted(&self) -> usize {
        self.total - self.exempt
    }

    pub fn rejection_rate(&self) -> f64 {
        if self.counted() == 0 {
            1.0
        } else {
            self.rejected as f64 / self.counted() as f64
        }
    }
}

/// Perturbs up to `per_cert` random witness entries of `cert`, one at a time.
pub fn perturb(rng: &mut ChaCha8Rng, cert: &Value, per_cert: usize, tally: &mut Tally) {
    let mut paths = witness_paths(cert);
    paths.shuffle(rng);
    for path in paths.into_iter().take(per_cert) {
        let mut bad = cert.clone();
        let slot = get_mut(&mut bad, &path);
        let x: Rational = slot.as_str().unwrap().parse().unwrap();
        let delta = Rational::from(*[-2i64, -1, 1, 2].choose(rng).unwrap());
        *slot = Value::String((x + delta).to_string());
        tally.total += 1;
        if exempt(cert, &bad, &path) {
            tally.exempt += 1;
            continue;
        }
        let accepted = AnyCertificate::from_json(&bad)
            .map(|c| c.verify().ok())
            .unwrap_or(false);
        if accepted {
            tally.accepted += 1;
        } else {
            tally.rejected += 1;
        }
    }
}
