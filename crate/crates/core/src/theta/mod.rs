//! ψ-rings, θ-rings and congruence criteria.
//!
//! Algebras are finite free over `W = W(F_q)/p^N` with an explicit
//! normal-form basis: truncated polynomial rings, monic quotients
//! `W[x]/(m)`, or a supplied multiplication table.

mod congruence;
mod squares;
mod wilkerson;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{ArithError, Ring, WittElem, WittRing};
use crate::bialgebra::monomials_up_to;
use crate::report::Report;

pub use congruence::{
    frobenius_congruence_comodule, gamma_congruence_check, replay_gamma_witness, spanning_monomials, ComoduleAlgebra,
    FrobeniusClassSpec,
};
pub use squares::{verify_weight_p_squares, WeightPSquares};
pub use wilkerson::{derive_theta, replay_wilkerson_witness, theta_consistency, theta_of, wilkerson_check, ThetaData};

const MAX_BASIS: usize = 64;

pub type Vector = Vec<WittElem>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThetaError {
    #[error("ψ is not a well-defined ring endomorphism: {0}")]
    IllDefinedPsi(String),
    #[error("congruence fails at {}", .0.label)]
    CongruenceFails(Box<Witness>),
    #[error("base ring must have characteristic p")]
    CharacteristicMismatch,
    #[error("incomplete action data: {0}")]
    IncompleteAction(String),
    #[error("normal-form basis too large: {0}")]
    SizeLimit(String),
    #[error("malformed presentation: {0}")]
    Parse(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// An element `x` whose congruence defect has nonzero residue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    /// Coordinates of `x`, rendered.
    pub element: Vec<String>,
    /// Residue mod `p` of the defect, rendered.
    pub residue: Vec<String>,
    #[serde(skip)]
    pub coords: Vec<WittElem>,
}

impl Witness {
    fn new(label: String, x: &[WittElem], residue: &[WittElem]) -> Self {
        Self {
            label,
            element: x.iter().map(|c| c.to_string()).collect(),
            residue: residue.iter().map(|c| c.to_string()).collect(),
            coords: x.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub passed: bool,
    pub precision: u32,
    pub witnesses: Vec<Witness>,
    pub checks: Report,
    pub notes: Vec<String>,
}

impl CongruenceReport {
    fn from_parts(precision: u32, witnesses: Vec<Witness>, checks: Report, notes: Vec<String>) -> Self {
        let passed = checks.passed() && witnesses.is_empty();
        Self { passed, precision, witnesses, checks, notes }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// A commutative algebra, finite free over `W`, with a chosen basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAlgebra {
    pub ring: WittRing,
    pub names: Vec<String>,
    pub mult: Vec<Vec<Vector>>,
    pub unit: Vector,
    pub generators: Vec<(String, Vector)>,
}

impl FiniteAlgebra {
    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn zero(&self) -> Vector {
        vec![self.ring.zero(); self.rank()]
    }

    pub fn basis_vector(&self, s: usize) -> Vector {
        let r = &self.ring;
        (0..self.rank()).map(|j| if j == s { r.one() } else { r.zero() }).collect()
    }

    pub fn scalar(&self, c: &WittElem) -> Vector {
        self.scale(&self.unit, c)
    }

    pub fn add(&self, x: &[WittElem], y: &[WittElem]) -> Vector {
        x.iter().zip(y).map(|(a, b)| self.ring.add(a, b)).collect()
    }

    pub fn sub(&self, x: &[WittElem], y: &[WittElem]) -> Vector {
        x.iter().zip(y).map(|(a, b)| self.ring.sub(a, b)).collect()
    }

    pub fn scale(&self, x: &[WittElem], c: &WittElem) -> Vector {
        x.iter().map(|a| self.ring.mul(a, c)).collect()
    }

    pub fn mul(&self, x: &[WittElem], y: &[WittElem]) -> Vector {
        let r = &self.ring;
        let mut out = self.zero();
        for (s, a) in x.iter().enumerate() {
            if r.is_zero(a) {
                continue;
            }
            for (t, b) in y.iter().enumerate() {
                if r.is_zero(b) {
                    continue;
                }
                let c = r.mul(a, b);
                for (k, m) in self.mult[s][t].iter().enumerate() {
                    if !r.is_zero(m) {
                        out[k] = r.add(&out[k], &r.mul(&c, m));
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &[WittElem], e: u64) -> Vector {
        let mut acc = self.unit.clone();
        let mut base = x.to_vec();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Whether every coordinate lies in `pW`.
    pub fn divisible_by_p(&self, x: &[WittElem]) -> bool {
        x.iter().all(|c| c.divisible_by_p())
    }

    /// Residues mod `p`, in the residue field.
    pub fn residue(&self, x: &[WittElem]) -> Vector {
        let k = self.ring.residue_field();
        x.iter().map(|c| k.reduce(c).expect("same family")).collect()
    }

    /// Exact division by `p`, landing in the algebra at precision `N-1`.
    pub fn divide_by_p(&self, x: &[WittElem]) -> Result<Vector, ArithError> {
        x.iter().map(|c| self.ring.divide_by_p(c)).collect()
    }

    /// The same presentation at a lower precision.
    pub fn at_precision(&self, prec: u32) -> Result<Self, ArithError> {
        let r = self.ring.with_precision(prec)?;
        let red = |v: &Vector| -> Result<Vector, ArithError> { v.iter().map(|c| r.reduce(c)).collect() };
        Ok(Self {
            ring: r.clone(),
            names: self.names.clone(),
            mult: self.mult.iter().map(|row| row.iter().map(&red).collect()).collect::<Result<_, _>>()?,
            unit: red(&self.unit)?,
            generators: self.generators.iter().map(|(n, g)| Ok((n.clone(), red(g)?))).collect::<Result<_, ArithError>>()?,
        })
    }

    pub fn reduce(&self, x: &[WittElem]) -> Result<Vector, ArithError> {
        x.iter().map(|c| self.ring.reduce(c)).collect()
    }

    pub fn lift(&self, x: &[WittElem]) -> Result<Vector, ArithError> {
        x.iter().map(|c| self.ring.lift(c)).collect()
    }

    pub fn random_element<G: rand::Rng>(&self, rng: &mut G) -> Vector {
        let r = &self.ring;
        (0..self.rank())
            .map(|_| {
                let c: Vec<i64> = (0..r.degree()).map(|_| rng.gen_range(0..r.modulus()) as i64).collect();
                r.elem(&c)
            })
            .collect()
    }

    pub fn render(&self, x: &[WittElem]) -> String {
        let mut parts = Vec::new();
        for (c, name) in x.iter().zip(&self.names) {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            parts.push(match (cs.as_str(), name.as_str()) {
                (_, "1") => cs.clone(),
                ("1", _) => name.clone(),
                _ => format!("{cs}*{name}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

/// How an algebra is presented.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// `W[x_1..x_k]` modulo monomials of degree above the bound.
    PolyRing { vars: Vec<String>, degree_bound: u32 },
    /// `W[x]/(m)` for a monic `m`, coefficients from the constant term up.
    MonicQuotient { var: String, modulus: Vector },
    /// A free module with a multiplication table; every basis element is a generator.
    FiniteFree { basis: Vec<String>, mult: Vec<Vec<Vector>>, unit: Vector },
}

fn monomial_name(vars: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl Shape {
    pub fn build(&self, ring: &WittRing) -> Result<FiniteAlgebra, ThetaError> {
        let r = ring;
        match self {
            Shape::PolyRing { vars, degree_bound } => {
                let monos = if vars.is_empty() { vec![vec![]] } else { monomials_up_to(vars.len(), *degree_bound) };
                if monos.len() > MAX_BASIS {
                    return Err(ThetaError::SizeLimit(format!("{} monomials", monos.len())));
                }
                let n = monos.len();
                let index: std::collections::BTreeMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
                let mut mult = vec![vec![vec![r.zero(); n]; n]; n];
                for (a, ma) in monos.iter().enumerate() {
                    for (b, mb) in monos.iter().enumerate() {
                        let prod: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                        if let Some(&c) = index.get(&prod) {
                            mult[a][b][c] = r.one();
                        }
                    }
                }
                let basis = |i: usize| -> Vector { (0..n).map(|j| if i == j { r.one() } else { r.zero() }).collect() };
                let generators = (0..vars.len())
                    .filter_map(|i| {
                        let mut e = vec![0; vars.len()];
                        e[i] = 1;
                        index.get(&e).map(|&k| (vars[i].clone(), basis(k)))
                    })
                    .collect();
                Ok(FiniteAlgebra {
                    ring: r.clone(),
                    names: monos.iter().map(|m| monomial_name(vars, m)).collect(),
                    mult,
                    unit: basis(0),
                    generators,
                })
            }
            Shape::MonicQuotient { var, modulus } => {
                let d = modulus.len().checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| ThetaError::Parse("modulus degree".into()))?;
                if modulus[d] != r.one() {
                    return Err(ThetaError::Parse("modulus must be monic".into()));
                }
                if d > MAX_BASIS {
                    return Err(ThetaError::SizeLimit(format!("degree {d}")));
                }
                // x^j for j < 2d-1, reduced
                let mut powers: Vec<Vector> = Vec::new();
                let mut cur: Vector = (0..d).map(|j| if j == 0 { r.one() } else { r.zero() }).collect();
                for _ in 0..(2 * d - 1) {
                    powers.push(cur.clone());
                    // multiply by x: shift, fold the top coefficient through m
                    let top = cur[d - 1].clone();
                    let mut next = vec![r.zero(); d];
                    for j in 1..d {
                        next[j] = cur[j - 1].clone();
                    }
                    for j in 0..d {
                        next[j] = r.sub(&next[j], &r.mul(&top, &modulus[j]));
                    }
                    cur = next;
                }
                let mult = (0..d).map(|a| (0..d).map(|b| powers[a + b].clone()).collect()).collect();
                let names = (0..d)
                    .map(|j| match j {
                        0 => "1".to_string(),
                        1 => var.clone(),
                        _ => format!("{var}^{j}"),
                    })
                    .collect();
                let generators = if d > 1 { vec![(var.clone(), powers[1].clone())] } else { Vec::new() };
                Ok(FiniteAlgebra { ring: r.clone(), names, mult, unit: powers[0].clone(), generators })
            }
            Shape::FiniteFree { basis, mult, unit } => {
                let n = basis.len();
                if n > MAX_BASIS {
                    return Err(ThetaError::SizeLimit(format!("rank {n}")));
                }
                if mult.len() != n || mult.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n)) || unit.len() != n {
                    return Err(ThetaError::Parse("multiplication table shape".into()));
                }
                let alg = FiniteAlgebra {
                    ring: r.clone(),
                    names: basis.clone(),
                    mult: mult.clone(),
                    unit: unit.clone(),
                    generators: Vec::new(),
                };
                let generators = (0..n).map(|i| (basis[i].clone(), alg.basis_vector(i))).collect();
                let alg = FiniteAlgebra { generators, ..alg };
                check_ring_axioms(&alg)?;
                Ok(alg)
            }
        }
    }

    pub fn to_json(&self, ring: &WittRing) -> Value {
        let enc = |v: &Vector| Value::Array(v.iter().map(|c| ring.elem_to_json(c)).collect());
        match self {
            Shape::PolyRing { vars, degree_bound } => json!({"type": "poly", "vars": vars, "degree_bound": degree_bound}),
            Shape::MonicQuotient { var, modulus } => json!({"type": "monic_quotient", "var": var, "modulus": enc(modulus)}),
            Shape::FiniteFree { basis, mult, unit } => json!({
                "type": "finite_free",
                "basis": basis,
                "mult": mult.iter().map(|row| row.iter().map(enc).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "unit": enc(unit),
            }),
        }
    }

    pub fn from_json(ring: &WittRing, v: &Value) -> Result<Self, ThetaError> {
        let bad = |s: &str| ThetaError::Parse(s.to_string());
        let vec_of = |x: &Value| -> Result<Vector, ThetaError> {
            x.as_array().ok_or_else(|| bad("vector"))?.iter().map(|e| ring.elem_from_json(e).map_err(Into::into)).collect()
        };
        let strings = |x: Option<&Value>, what: &str| -> Result<Vec<String>, ThetaError> {
            serde_json::from_value(x.cloned().ok_or_else(|| bad(what))?).map_err(|_| bad(what))
        };
        match v.get("type").and_then(Value::as_str) {
            Some("poly") => Ok(Shape::PolyRing {
                vars: strings(v.get("vars"), "vars")?,
                degree_bound: v.get("degree_bound").and_then(Value::as_u64).ok_or_else(|| bad("degree_bound"))? as u32,
            }),
            Some("monic_quotient") => Ok(Shape::MonicQuotient {
                var: v.get("var").and_then(Value::as_str).ok_or_else(|| bad("var"))?.to_string(),
                modulus: vec_of(v.get("modulus").ok_or_else(|| bad("modulus"))?)?,
            }),
            Some("finite_free") => {
                let mult = v
                    .get("mult")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("mult"))?
                    .iter()
                    .map(|row| row.as_array().ok_or_else(|| bad("mult"))?.iter().map(&vec_of).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Shape::FiniteFree {
                    basis: strings(v.get("basis"), "basis")?,
                    mult,
                    unit: vec_of(v.get("unit").ok_or_else(|| bad("unit"))?)?,
                })
            }
            _ => Err(bad("shape type")),
        }
    }
}

fn check_ring_axioms(alg: &FiniteAlgebra) -> Result<(), ThetaError> {
    let n = alg.rank();
    for s in 0..n {
        let b = alg.basis_vector(s);
        if alg.mul(&alg.unit, &b) != b {
            return Err(ThetaError::Parse(format!("unit fails on {}", alg.names[s])));
        }
        for t in 0..n {
            if alg.mult[s][t] != alg.mult[t][s] {
                return Err(ThetaError::Parse("multiplication is not commutative".into()));
            }
            for u in 0..n {
                let lhs = alg.mul(&alg.mult[s][t], &alg.basis_vector(u));
                let rhs = alg.mul(&alg.basis_vector(s), &alg.mult[t][u]);
                if lhs != rhs {
                    return Err(ThetaError::Parse("multiplication is not associative".into()));
                }
            }
        }
    }
    Ok(())
}

/// Action of `ψ` on coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffPsi {
    Identity,
    Frobenius,
}

impl CoeffPsi {
    pub fn apply(self, ring: &WittRing, c: &WittElem) -> WittElem {
        match self {
            CoeffPsi::Identity => c.clone(),
            CoeffPsi::Frobenius => ring.frobenius(c),
        }
    }
}

/// A ψ-ring: an algebra with a ring endomorphism given on coefficients and
/// on generators.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiRingPresentation {
    pub shape: Shape,
    pub psi_coeffs: CoeffPsi,
    /// `ψ(g)` for each generator of the built algebra, in normal form.
    pub psi_generators: Vec<Vector>,
    pub algebra: FiniteAlgebra,
    /// `ψ(b_s)` for each basis element.
    psi_basis: Vec<Vector>,
}

impl PsiRingPresentation {
    pub fn new(ring: &WittRing, shape: Shape, psi_coeffs: CoeffPsi, psi_generators: Vec<Vector>) -> Result<Self, ThetaError> {
        let algebra = shape.build(ring)?;
        if psi_generators.len() != algebra.generators.len() || psi_generators.iter().any(|g| g.len() != algebra.rank()) {
            return Err(ThetaError::Parse("one normal-form image per generator".into()));
        }
        let psi_basis = match &shape {
            Shape::PolyRing { vars, degree_bound } => {
                let monos = if vars.is_empty() { vec![vec![]] } else { monomials_up_to(vars.len(), *degree_bound) };
                monos
                    .iter()
                    .map(|m| {
                        m.iter().enumerate().fold(algebra.unit.clone(), |acc, (i, &e)| {
                            algebra.mul(&acc, &algebra.pow(&psi_generators[i], e as u64))
                        })
                    })
                    .collect()
            }
            Shape::MonicQuotient { .. } => {
                let img = psi_generators.first().cloned().unwrap_or_else(|| algebra.unit.clone());
                (0..algebra.rank()).map(|j| algebra.pow(&img, j as u64)).collect()
            }
            Shape::FiniteFree { .. } => psi_generators.clone(),
        };
        Ok(Self { shape, psi_coeffs, psi_generators, algebra, psi_basis })
    }

    /// `W` itself, with `ψ` acting on coefficients only.
    pub fn coefficients(ring: &WittRing, psi_coeffs: CoeffPsi) -> Self {
        Self::new(ring, Shape::PolyRing { vars: Vec::new(), degree_bound: 0 }, psi_coeffs, Vec::new()).expect("rank one")
    }

    pub fn ring(&self) -> &WittRing {
        &self.algebra.ring
    }

    pub fn psi(&self, x: &[WittElem]) -> Vector {
        let alg = &self.algebra;
        let mut out = alg.zero();
        for (s, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pc = self.psi_coeffs.apply(&alg.ring, c);
            out = alg.add(&out, &alg.scale(&self.psi_basis[s], &pc));
        }
        out
    }

    /// `ψ(1) = 1` and `ψ(b_s b_t) = ψ(b_s)ψ(b_t)`; with semilinearity this
    /// makes `ψ` a ring endomorphism preserving all relations.
    pub fn check_well_defined(&self) -> Result<(), ThetaError> {
        let alg = &self.algebra;
        if self.psi(&alg.unit) != alg.unit {
            return Err(ThetaError::IllDefinedPsi("ψ(1) ≠ 1".into()));
        }
        for s in 0..alg.rank() {
            for t in s..alg.rank() {
                let lhs = self.psi(&alg.mult[s][t]);
                let rhs = alg.mul(&self.psi_basis[s], &self.psi_basis[t]);
                if lhs != rhs {
                    return Err(ThetaError::IllDefinedPsi(format!(
                        "ψ({}·{}) = {} but ψ({})ψ({}) = {}",
                        alg.names[s],
                        alg.names[t],
                        alg.render(&lhs),
                        alg.names[s],
                        alg.names[t],
                        alg.render(&rhs)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let r = self.ring();
        json!({
            "ring": r.to_json(),
            "shape": self.shape.to_json(r),
            "psi_coeffs": match self.psi_coeffs { CoeffPsi::Identity => "identity", CoeffPsi::Frobenius => "frobenius" },
            "psi": self.psi_generators.iter().map(|g| element_to_json(&self.shape, &self.algebra, g)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, ThetaError> {
        let bad = |s: &str| ThetaError::Parse(s.to_string());
        let ring = WittRing::from_json(v.get("ring").ok_or_else(|| bad("ring"))?)?;
        let shape = Shape::from_json(&ring, v.get("shape").ok_or_else(|| bad("shape"))?)?;
        let psi_coeffs = match v.get("psi_coeffs").and_then(Value::as_str).unwrap_or("identity") {
            "identity" => CoeffPsi::Identity,
            "frobenius" => CoeffPsi::Frobenius,
            _ => return Err(bad("psi_coeffs")),
        };
        let algebra = shape.build(&ring)?;
        let psi = v
            .get("psi")
            .and_then(Value::as_array)
            .map(|a| a.iter().map(|e| element_from_json(&shape, &algebra, e)).collect::<Result<Vec<_>, _>>())
            .transpose()?
            .unwrap_or_default();
        Self::new(&ring, shape, psi_coeffs, psi)
    }
}

/// Elements in JSON: polynomial rings use `[[exponents, coeff], ...]`,
/// monic quotients a coefficient list, finite free algebras coordinates.
pub fn element_from_json(shape: &Shape, alg: &FiniteAlgebra, v: &Value) -> Result<Vector, ThetaError> {
    let r = &alg.ring;
    let bad = |s: &str| ThetaError::Parse(s.to_string());
    let arr = v.as_array().ok_or_else(|| bad("element"))?;
    match shape {
        Shape::PolyRing { vars, .. } => {
            let mut out = alg.zero();
            for term in arr {
                let pair = term.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("term"))?;
                let e: Vec<u32> = serde_json::from_value(pair[0].clone()).map_err(|_| bad("exponents"))?;
                if e.len() != vars.len() {
                    return Err(bad("exponent length"));
                }
                let c = r.elem_from_json(&pair[1])?;
                let name = monomial_name(vars, &e);
                if let Some(i) = alg.names.iter().position(|n| *n == name) {
                    out[i] = r.add(&out[i], &c);
                }
            }
            Ok(out)
        }
        Shape::MonicQuotient { .. } => {
            let mut out = alg.zero();
            let mut xpow = alg.unit.clone();
            let x = alg.generators.first().map(|g| g.1.clone()).unwrap_or_else(|| alg.zero());
            for c in arr {
                let c = r.elem_from_json(c)?;
                out = alg.add(&out, &alg.scale(&xpow, &c));
                xpow = alg.mul(&xpow, &x);
            }
            Ok(out)
        }
        Shape::FiniteFree { .. } => {
            if arr.len() != alg.rank() {
                return Err(bad("coordinate count"));
            }
            arr.iter().map(|c| r.elem_from_json(c).map_err(Into::into)).collect()
        }
    }
}

pub fn element_to_json(shape: &Shape, alg: &FiniteAlgebra, x: &[WittElem]) -> Value {
    let r = &alg.ring;
    match shape {
        Shape::PolyRing { vars, degree_bound } => {
            let monos = if vars.is_empty() { vec![vec![]] } else { monomials_up_to(vars.len(), *degree_bound) };
            Value::Array(
                monos
                    .iter()
                    .zip(x)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(m, c)| json!([m, r.elem_to_json(c)]))
                    .collect(),
            )
        }
        _ => Value::Array(x.iter().map(|c| r.elem_to_json(c)).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monic_quotient_table() {
        let r = WittRing::prime_field(2, 3).unwrap();
        // x^2 - x
        let shape = Shape::MonicQuotient { var: "x".into(), modulus: vec![r.zero(), r.int(-1), r.one()] };
        let alg = shape.build(&r).unwrap();
        let x = alg.generators[0].1.clone();
        assert_eq!(alg.mul(&x, &x), x);
        assert_eq!(alg.render(&alg.add(&x, &alg.unit)), "1+x");
    }

    #[test]
    fn ill_defined_psi() {
        let r = WittRing::prime_field(2, 3).unwrap();
        let shape = Shape::PolyRing { vars: vec!["x".into()], degree_bound: 3 };
        let alg = shape.build(&r).unwrap();
        let one_plus_x = alg.add(&alg.unit, &alg.generators[0].1);
        let p = PsiRingPresentation::new(&r, shape, CoeffPsi::Identity, vec![one_plus_x]).unwrap();
        assert!(matches!(p.check_well_defined(), Err(ThetaError::IllDefinedPsi(_))));
    }

    #[test]
    fn json_round_trip() {
        let r = WittRing::unramified(2, 2, 3).unwrap();
        let shape = Shape::PolyRing { vars: vec!["x".into(), "y".into()], degree_bound: 2 };
        let alg = shape.build(&r).unwrap();
        let x = alg.generators[0].1.clone();
        let y = alg.generators[1].1.clone();
        let p = PsiRingPresentation::new(&r, shape, CoeffPsi::Frobenius, vec![alg.mul(&x, &x), alg.add(&y, &x)]).unwrap();
        assert_eq!(PsiRingPresentation::from_json(&p.to_json()).unwrap(), p);
    }
}
