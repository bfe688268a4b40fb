//! Weight decompositions: binomial gcds, regularity certificates for the
//! standard decomposition, epimorphic families of module maps, and inheritance
//! of algebra structure by subobjects.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{is_prime, legendre_valuation, p_adic_valuation, ArithError, BigIntVal, Ring, WittElem, WittRing};
use crate::linalg::{residue_rank, solve, Matrix};
use crate::report::Report;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightsError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no maximal ideal declared: {0}")]
    NotLocal(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("diagram fails: {0}")]
    InvariantViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `gcd{C(m, i) : 0 < i < m}`; zero for `m < 2`.
pub fn binomial_gcd(m: u64) -> BigIntVal {
    let mut g = BigInt::zero();
    let mut c = BigInt::one();
    for i in 1..m {
        c = c * (m - i + 1) / i;
        g = g.gcd(&c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// `(p, k)` with `m = p^k`, `k ≥ 1`.
pub fn prime_power(m: u64) -> Option<(u64, u32)> {
    if m < 2 {
        return None;
    }
    let p = (2..=m).find(|d| m % d == 0)?;
    let mut k = 0;
    let mut x = m;
    while x % p == 0 {
        x /= p;
        k += 1;
    }
    (x == 1).then_some((p, k))
}

#[derive(Debug, Clone, PartialEq)]
pub enum CertCase {
    Critical,
    TrivialWeight,
    /// `δ: T_{p^r} ⊗ T_{m-p^r} → T_m`, subgroup `Σ_{p^r} × Σ_{m-p^r}`.
    CoprimeCase { r: u32, index: BigIntVal },
    /// `μ: T_d T_p → T_m`, subgroup `Σ_p ≀ Σ_d` of order `(p!)^d·d!`.
    DivisibleCase { d: u64, index: BigIntVal },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityCertificate {
    pub m: u64,
    pub p: u64,
    pub case: CertCase,
    /// `v_p` of the index, by each method that applies.
    pub valuations: Vec<(&'static str, u32)>,
}

impl RegularityCertificate {
    pub fn valuation(&self) -> Option<u32> {
        self.valuations.first().map(|v| v.1)
    }

    pub fn methods_agree(&self) -> bool {
        self.valuations.windows(2).all(|w| w[0].1 == w[1].1)
    }

    pub fn is_critical(&self) -> bool {
        self.case == CertCase::Critical
    }

    pub fn to_json(&self) -> Value {
        let case = match &self.case {
            CertCase::Critical => json!({"tag": "Critical"}),
            CertCase::TrivialWeight => json!({"tag": "TrivialWeight"}),
            CertCase::CoprimeCase { r, index } => json!({"tag": "CoprimeCase", "r": r, "index": index.to_string()}),
            CertCase::DivisibleCase { d, index } => json!({"tag": "DivisibleCase", "d": d, "index": index.to_string()}),
        };
        let vals: BTreeMap<&str, u32> = self.valuations.iter().copied().collect();
        json!({"m": self.m, "p": self.p, "case": case, "valuations": vals})
    }
}

/// Number of carries when adding `a` and `b` in base `p`.
fn kummer_carries(mut a: u64, mut b: u64, p: u64) -> u32 {
    let (mut carry, mut count) = (0, 0);
    while a > 0 || b > 0 || carry > 0 {
        let s = a % p + b % p + carry;
        carry = u64::from(s >= p);
        count += carry as u32;
        a /= p;
        b /= p;
    }
    count
}

fn exact_valuation(x: &BigIntVal, p: u64) -> u32 {
    p_adic_valuation(x, p).expect("index is nonzero")
}

pub fn regularity_certificate(m: u64, p: u64) -> Result<RegularityCertificate, WeightsError> {
    if !is_prime(p) {
        return Err(WeightsError::NotPrime(p));
    }
    let (case, valuations) = if m < 2 {
        (CertCase::TrivialWeight, Vec::new())
    } else if m == p {
        (CertCase::Critical, Vec::new())
    } else if m % p != 0 {
        let mut r = 0;
        while p.pow(r + 1) < m {
            r += 1;
        }
        let q = p.pow(r);
        let index = crate::arith::binomial(m, q);
        let v = exact_valuation(&index, p);
        let kummer = kummer_carries(q, m - q, p);
        let legendre = legendre_valuation(m, p) - legendre_valuation(q, p) - legendre_valuation(m - q, p);
        (CertCase::CoprimeCase { r, index }, vec![("exact", v), ("kummer", kummer), ("legendre", legendre as u32)])
    } else {
        let d = m / p;
        let order = crate::arith::factorial(p).pow(d as u32) * crate::arith::factorial(d);
        let (index, rem) = crate::arith::factorial(m).div_rem(&order);
        debug_assert!(rem.is_zero());
        let v = exact_valuation(&index, p);
        let legendre = legendre_valuation(m, p) - d * legendre_valuation(p, p) - legendre_valuation(d, p);
        (CertCase::DivisibleCase { d, index }, vec![("exact", v), ("legendre", legendre as u32)])
    };
    Ok(RegularityCertificate { m, p, case, valuations })
}

/// Maps `R^{s_j} → R^n` over `W(F_q)/p^N`, whose maximal ideal is `(p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpiFamily {
    pub ring: WittRing,
    pub maximal_ideal: Option<Vec<WittElem>>,
    pub target_rank: usize,
    pub maps: Vec<Matrix<WittRing>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpiResult {
    pub surjective: bool,
    pub residue_rank: usize,
    /// A nonzero functional on the target over the residue field, vanishing on every image.
    pub witness: Option<Vec<WittElem>>,
}

impl EpiResult {
    pub fn to_json(&self) -> Value {
        json!({
            "surjective": self.surjective,
            "residue_rank": self.residue_rank,
            "witness": self.witness.as_ref().map(|w| w.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
        })
    }
}

impl EpiFamily {
    pub fn new(ring: &WittRing, target_rank: usize, maps: Vec<Matrix<WittRing>>) -> Self {
        let ideal = if ring.precision() > 1 { vec![ring.int(ring.p() as i64)] } else { Vec::new() };
        Self { ring: ring.clone(), maximal_ideal: Some(ideal), target_rank, maps }
    }

    fn joined(&self) -> Matrix<WittRing> {
        if self.maps.is_empty() {
            return Matrix::zeros(&self.ring, self.target_rank, 0);
        }
        Matrix::hstack(&self.maps.iter().collect::<Vec<_>>())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.to_json(),
            "maximal_ideal": self.maximal_ideal.as_ref().map(|g| g.iter().map(|x| self.ring.elem_to_json(x)).collect::<Vec<_>>()),
            "target_rank": self.target_rank,
            "maps": self.maps.iter().map(Matrix::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, WeightsError> {
        let ring = WittRing::from_json(v.get("ring").ok_or_else(|| WeightsError::Parse("missing ring".into()))?)?;
        let maximal_ideal = match v.get("maximal_ideal") {
            None | Some(Value::Null) => None,
            Some(Value::Array(a)) => Some(a.iter().map(|x| ring.elem_from_json(x)).collect::<Result<Vec<_>, _>>()?),
            Some(_) => return Err(WeightsError::Parse("maximal_ideal must be a list".into())),
        };
        let n = v
            .get("target_rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| WeightsError::Parse("missing target_rank".into()))? as usize;
        let maps = v
            .get("maps")
            .and_then(Value::as_array)
            .ok_or_else(|| WeightsError::Parse("missing maps".into()))?
            .iter()
            .map(|m| {
                let cols = m.get(0).and_then(Value::as_array).map_or(0, Vec::len);
                Matrix::from_json(&ring, m, n, cols).map_err(WeightsError::from)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { ring, maximal_ideal, target_rank: n, maps })
    }
}

fn check_ideal(f: &EpiFamily) -> Result<(), WeightsError> {
    let r = &f.ring;
    let gens = f.maximal_ideal.as_ref().ok_or_else(|| WeightsError::NotLocal("maximal_ideal absent".into()))?;
    if gens.iter().any(|g| !g.divisible_by_p()) {
        return Err(WeightsError::NotLocal("a declared generator is a unit".into()));
    }
    if r.precision() > 1 && !gens.iter().any(|g| r.valuation(g) == Some(1)) {
        return Err(WeightsError::NotLocal("declared generators do not generate (p)".into()));
    }
    Ok(())
}

/// Joint surjectivity, decided on the residue field.
pub fn epi_family_check(f: &EpiFamily) -> Result<EpiResult, WeightsError> {
    check_ideal(f)?;
    if let Some(m) = f.maps.iter().find(|m| m.rows() != f.target_rank) {
        return Err(WeightsError::Dimension(format!("map with {} rows into rank {}", m.rows(), f.target_rank)));
    }
    let fr = residue_rank(&f.joined());
    let surjective = fr.rank == f.target_rank;
    Ok(EpiResult { surjective, residue_rank: fr.rank, witness: fr.left_kernel.into_iter().next() })
}

/// Enumerates the whole image; feasible when `|R|^sources` is small.
pub fn brute_force_surjective(f: &EpiFamily) -> bool {
    let r = &f.ring;
    let a = f.joined();
    let elems = r.elements();
    let mut seen = std::collections::HashSet::new();
    let mut idx = vec![0usize; a.cols()];
    loop {
        let x: Vec<WittElem> = idx.iter().map(|&i| elems[i].clone()).collect();
        seen.insert(a.apply(&x).iter().map(|c| c.coeffs().to_vec()).collect::<Vec<_>>());
        let Some(pos) = idx.iter().position(|&i| i + 1 < elems.len()) else { break };
        for i in idx.iter_mut().take(pos) {
            *i = 0;
        }
        idx[pos] += 1;
    }
    let target = (elems.len() as u128).checked_pow(f.target_rank as u32);
    target == Some(seen.len() as u128)
}

/// A truncated weight-graded monad on finite free modules, an algebra `ψ` over it,
/// and a subalgebra `N ⊆ M` with the functor applied to the inclusion.
///
/// Tensor bases follow `Matrix::kron`: `e_a ⊗ e_b` sits at `a·rank_b + b`.
#[derive(Debug, Clone)]
pub struct WeightedMonadData {
    pub ring: WittRing,
    pub bound: usize,
    pub m: StructureData,
    /// `ψ_k: T_k(M) → M`.
    pub psi: Vec<Matrix<WittRing>>,
    pub n: StructureData,
    /// `N → M`, injective.
    pub incl: Matrix<WittRing>,
    /// `T_k(incl): T_k(N) → T_k(M)`.
    pub t_incl: Vec<Matrix<WittRing>>,
}

/// A commutative algebra together with the weight pieces of the monad applied to it.
#[derive(Debug, Clone)]
pub struct StructureData {
    /// `M ⊗ M → M`.
    pub mult: Matrix<WittRing>,
    pub unit: Vec<WittElem>,
    pub t_rank: Vec<usize>,
    /// `R → T_0`.
    pub iota: Matrix<WittRing>,
    /// `M → T_1`.
    pub eta: Matrix<WittRing>,
    /// `δ: T_i ⊗ T_j → T_{i+j}` for `i, j ≥ 1`.
    pub delta: BTreeMap<(usize, usize), Matrix<WittRing>>,
    /// Further maps into `T_m` (components of `μ`), used only for the regularity test.
    pub mu: BTreeMap<usize, Vec<Matrix<WittRing>>>,
}

impl StructureData {
    pub fn rank(&self) -> usize {
        self.unit.len()
    }

    fn family(&self, ring: &WittRing, m: usize) -> EpiFamily {
        let maps = match m {
            0 => vec![self.iota.clone()],
            1 => vec![self.eta.clone()],
            _ => (1..m)
                .filter_map(|i| self.delta.get(&(i, m - i)).cloned())
                .chain(self.mu.get(&m).into_iter().flatten().cloned())
                .collect(),
        };
        EpiFamily::new(ring, self.t_rank[m], maps)
    }
}

#[derive(Debug, Clone)]
pub struct InducedStructure {
    pub psi_n: Vec<Matrix<WittRing>>,
    pub critical: Vec<usize>,
    /// Weights whose map was obtained by solving directly, because the δ-family on `N` is not onto.
    pub solved_directly: Vec<usize>,
    pub report: Report,
}

#[derive(Debug, Clone)]
pub enum InheritOutcome {
    Induced(InducedStructure),
    /// `ψ` of a basis element of `T_m(N)` leaves `N`.
    Offending { weight: usize, element: usize, image: Vec<WittElem> },
}

fn mat_eq(name: &str, a: &Matrix<WittRing>, b: &Matrix<WittRing>) -> Result<(), WeightsError> {
    if a == b {
        Ok(())
    } else {
        Err(WeightsError::InvariantViolation(name.into()))
    }
}

fn shape(name: &str, a: &Matrix<WittRing>, rows: usize, cols: usize) -> Result<(), WeightsError> {
    if a.rows() == rows && a.cols() == cols {
        Ok(())
    } else {
        Err(WeightsError::Dimension(format!("{name} is {}x{}, expected {rows}x{cols}", a.rows(), a.cols())))
    }
}

fn check_structure(s: &StructureData, bound: usize, label: &str) -> Result<(), WeightsError> {
    let n = s.rank();
    if s.t_rank.len() != bound + 1 {
        return Err(WeightsError::Dimension(format!("{label}: one T_k rank per weight")));
    }
    shape(&format!("{label}.mult"), &s.mult, n, n * n)?;
    shape(&format!("{label}.iota"), &s.iota, s.t_rank[0], 1)?;
    shape(&format!("{label}.eta"), &s.eta, s.t_rank.get(1).copied().unwrap_or(0), n)?;
    for (&(i, j), d) in &s.delta {
        if i == 0 || j == 0 || i + j > bound {
            return Err(WeightsError::Dimension(format!("{label}.delta[{i},{j}] out of range")));
        }
        shape(&format!("{label}.delta[{i},{j}]"), d, s.t_rank[i + j], s.t_rank[i] * s.t_rank[j])?;
    }
    for (&m, maps) in &s.mu {
        if m > bound || maps.iter().any(|x| x.rows() != s.t_rank[m]) {
            return Err(WeightsError::Dimension(format!("{label}.mu[{m}]")));
        }
    }
    Ok(())
}

fn alg_mul(mult: &Matrix<WittRing>, a: &Matrix<WittRing>, b: &Matrix<WittRing>) -> Matrix<WittRing> {
    mult.mul(&a.kron(b))
}

/// Solves `X·A = B`.
fn solve_right(a: &Matrix<WittRing>, b: &Matrix<WittRing>) -> Option<Matrix<WittRing>> {
    solve(&a.transpose(), &b.transpose()).ok().map(|x| x.transpose())
}

/// Extends `ψ` to `N` weight by weight: directly in critical weights, and
/// through `ι`, `η` and the `δ`-images in regular ones.
pub fn inherit_structure(data: &WeightedMonadData) -> Result<InheritOutcome, WeightsError> {
    let r = &data.ring;
    let k = data.bound;
    check_structure(&data.m, k, "M")?;
    check_structure(&data.n, k, "N")?;
    let (mr, nr) = (data.m.rank(), data.n.rank());
    shape("incl", &data.incl, mr, nr)?;
    if data.psi.len() != k + 1 || data.t_incl.len() != k + 1 {
        return Err(WeightsError::Dimension("psi and t_incl need one map per weight".into()));
    }
    for w in 0..=k {
        shape(&format!("psi[{w}]"), &data.psi[w], mr, data.m.t_rank[w])?;
        shape(&format!("t_incl[{w}]"), &data.t_incl[w], data.m.t_rank[w], data.n.t_rank[w])?;
    }

    // the weight-decomposition diagrams on M, and T(incl) natural for ι, η, δ
    let unit_m = Matrix::column(r, data.m.unit.clone());
    mat_eq("psi_iota_is_unit", &data.psi[0].mul(&data.m.iota), &unit_m)?;
    if k >= 1 {
        mat_eq("psi_eta_is_identity", &data.psi[1].mul(&data.m.eta), &Matrix::identity(r, mr))?;
    }
    for (&(i, j), d) in &data.m.delta {
        let lhs = data.psi[i + j].mul(d);
        let rhs = alg_mul(&data.m.mult, &data.psi[i], &data.psi[j]);
        mat_eq(&format!("psi_delta[{i},{j}]"), &lhs, &rhs)?;
    }
    mat_eq("t_incl_iota", &data.t_incl[0].mul(&data.n.iota), &data.m.iota)?;
    if k >= 1 {
        mat_eq("t_incl_eta", &data.t_incl[1].mul(&data.n.eta), &data.m.eta.mul(&data.incl))?;
    }
    for (&(i, j), d) in &data.n.delta {
        let dm = data.m.delta.get(&(i, j)).ok_or_else(|| WeightsError::InvariantViolation(format!("delta[{i},{j}] missing on M")))?;
        let lhs = data.t_incl[i + j].mul(d);
        let rhs = dm.mul(&data.t_incl[i].kron(&data.t_incl[j]));
        mat_eq(&format!("t_incl_delta[{i},{j}]"), &lhs, &rhs)?;
    }
    if solve(&data.incl, &Matrix::column(r, data.m.unit.clone())).is_err() {
        return Err(WeightsError::InvariantViolation("unit_in_N".into()));
    }
    mat_eq("incl_unit", &data.incl.mul(&Matrix::column(r, data.n.unit.clone())), &unit_m)?;
    let prod = alg_mul(&data.m.mult, &data.incl, &data.incl);
    mat_eq("incl_multiplicative", &data.incl.mul(&data.n.mult), &prod)?;

    let mut critical = Vec::new();
    for w in 0..=k {
        if !epi_family_check(&data.m.family(r, w))?.surjective {
            critical.push(w);
        }
    }

    let mut psi_n: Vec<Matrix<WittRing>> = Vec::new();
    let mut solved_directly = Vec::new();
    for w in 0..=k {
        let target = data.psi[w].mul(&data.t_incl[w]);
        let regular = if critical.contains(&w) {
            None
        } else {
            match w {
                0 => solve_right(&data.n.iota, &Matrix::column(r, data.n.unit.clone())),
                1 => solve_right(&data.n.eta, &Matrix::identity(r, nr)),
                _ => {
                    let pairs: Vec<(usize, usize)> = (1..w).filter(|&i| data.n.delta.contains_key(&(i, w - i))).map(|i| (i, w - i)).collect();
                    if pairs.is_empty() {
                        None
                    } else {
                        let d = Matrix::hstack(&pairs.iter().map(|ij| &data.n.delta[ij]).collect::<Vec<_>>());
                        let prods: Vec<Matrix<WittRing>> =
                            pairs.iter().map(|&(i, j)| alg_mul(&data.n.mult, &psi_n[i], &psi_n[j])).collect();
                        let p = Matrix::hstack(&prods.iter().collect::<Vec<_>>());
                        solve_right(&d, &p)
                    }
                }
            }
        };
        let map = match regular {
            Some(x) => x,
            None => {
                if !critical.contains(&w) {
                    solved_directly.push(w);
                }
                match solve(&data.incl, &target) {
                    Ok(x) => x,
                    Err(col) => {
                        return Ok(InheritOutcome::Offending { weight: w, element: col, image: target.col(col) });
                    }
                }
            }
        };
        psi_n.push(map);
    }

    let mut report = Report::new();
    for (w, map) in psi_n.iter().enumerate() {
        let ok = data.incl.mul(map) == data.psi[w].mul(&data.t_incl[w]);
        report.push(format!("incl_psi_n[{w}]"), ok, (!ok).then(|| format!("weight {w}")));
    }
    Ok(InheritOutcome::Induced(InducedStructure { psi_n, critical, solved_directly, report }))
}

type Poly = BTreeMap<Vec<u32>, WittElem>;

/// `T(V) = Sym(V ⊕ θV)` with `V` in weight 1 and `θV` in weight 2, truncated
/// at `bound`. Weight 2 is critical: `θV` is not a product of lower weights.
#[derive(Debug, Clone)]
pub struct SymTheta {
    pub ring: WittRing,
    pub rank: usize,
    pub bound: usize,
    /// Monomial exponents over `v_1..v_n, w_1..w_n`, per weight.
    pub monomials: Vec<Vec<Vec<u32>>>,
}

impl SymTheta {
    pub fn new(ring: &WittRing, rank: usize, bound: usize) -> Self {
        let mut monomials = vec![Vec::new(); bound + 1];
        let mut cur = vec![0u32; 2 * rank];
        fn rec(i: usize, left: usize, rank: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<Vec<u32>>>, bound: usize) {
            if i == 2 * rank {
                out[bound - left].push(cur.clone());
                return;
            }
            let w = if i < rank { 1 } else { 2 };
            let mut e = 0;
            while e * w <= left {
                cur[i] = e as u32;
                rec(i + 1, left - e * w, rank, cur, out, bound);
                e += 1;
            }
            cur[i] = 0;
        }
        rec(0, bound, rank, &mut cur, &mut monomials, bound);
        for m in &mut monomials {
            m.sort_by(|a, b| b.cmp(a));
        }
        Self { ring: ring.clone(), rank, bound, monomials }
    }

    pub fn t_rank(&self) -> Vec<usize> {
        self.monomials.iter().map(Vec::len).collect()
    }

    fn index(&self, w: usize, mono: &[u32]) -> usize {
        self.monomials[w].iter().position(|m| m == mono).expect("monomial of this weight")
    }

    fn weight(&self, mono: &[u32]) -> usize {
        mono.iter().enumerate().map(|(i, &e)| e as usize * if i < self.rank { 1 } else { 2 }).sum()
    }

    fn to_vector(&self, w: usize, p: &Poly) -> Vec<WittElem> {
        let mut v = vec![self.ring.zero(); self.monomials[w].len()];
        for (m, c) in p {
            let i = self.index(w, m);
            v[i] = self.ring.add(&v[i], c);
        }
        v
    }

    /// Structure maps `ι`, `η`, `δ` of the free functor on a rank-`rank` module, with algebra data attached.
    pub fn structure(&self, mult: Matrix<WittRing>, unit: Vec<WittElem>) -> StructureData {
        let r = &self.ring;
        let t_rank = self.t_rank();
        let iota = Matrix::from_fn(r, t_rank[0], 1, |_, _| r.one());
        let eta = Matrix::from_fn(r, t_rank.get(1).copied().unwrap_or(0), self.rank, |i, j| {
            if self.monomials[1][i][j] == 1 {
                r.one()
            } else {
                r.zero()
            }
        });
        let mut delta = BTreeMap::new();
        for i in 1..=self.bound {
            for j in 1..=self.bound - i {
                let m = i + j;
                let mut d = Matrix::zeros(r, t_rank[m], t_rank[i] * t_rank[j]);
                for (a, ma) in self.monomials[i].iter().enumerate() {
                    for (b, mb) in self.monomials[j].iter().enumerate() {
                        let prod: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                        d.set(self.index(m, &prod), a * t_rank[j] + b, r.one());
                    }
                }
                delta.insert((i, j), d);
            }
        }
        StructureData { mult, unit, t_rank, iota, eta, delta, mu: BTreeMap::new() }
    }

    fn poly_mul(&self, a: &Poly, b: &Poly) -> Poly {
        let r = &self.ring;
        let mut out = Poly::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let c = r.mul(ca, cb);
                let e = out.entry(m).or_insert_with(|| r.zero());
                *e = r.add(e, &c);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `T_k(f)` for `f: R^{self.rank} → R^{target.rank}`.
    pub fn functor(&self, target: &SymTheta, f: &Matrix<WittRing>) -> Vec<Matrix<WittRing>> {
        let r = &self.ring;
        let n = target.rank;
        let image = |i: usize, shift: usize| -> Poly {
            (0..n)
                .filter(|&j| !f.get(j, i).is_zero())
                .map(|j| {
                    let mut m = vec![0; 2 * n];
                    m[shift + j] = 1;
                    (m, f.get(j, i).clone())
                })
                .collect()
        };
        (0..=self.bound)
            .map(|w| {
                let cols: Vec<Vec<WittElem>> = self.monomials[w]
                    .iter()
                    .map(|mono| {
                        let mut acc: Poly = [(vec![0; 2 * n], r.one())].into_iter().collect();
                        for (i, &e) in mono.iter().enumerate() {
                            let g = if i < self.rank { image(i, 0) } else { image(i - self.rank, n) };
                            for _ in 0..e {
                                acc = self.poly_mul(&acc, &g);
                            }
                        }
                        debug_assert!(acc.keys().all(|m| target.weight(m) == w));
                        target.to_vector(w, &acc)
                    })
                    .collect();
                if cols.is_empty() {
                    Matrix::zeros(r, target.monomials[w].len(), 0)
                } else {
                    Matrix::from_rows(r, cols).transpose()
                }
            })
            .collect()
    }

    /// `ψ` sending `v_i ↦ e_i` and `w_i ↦ θ(e_i)`, multiplicatively.
    pub fn algebra_map(&self, mult: &Matrix<WittRing>, unit: &[WittElem], theta: &Matrix<WittRing>) -> Vec<Matrix<WittRing>> {
        let r = &self.ring;
        let n = self.rank;
        let times = |x: &[WittElem], y: &[WittElem]| -> Vec<WittElem> {
            let xy: Vec<WittElem> = x.iter().flat_map(|a| y.iter().map(move |b| r.mul(a, b))).collect();
            mult.apply(&xy)
        };
        (0..=self.bound)
            .map(|w| {
                let cols: Vec<Vec<WittElem>> = self.monomials[w]
                    .iter()
                    .map(|mono| {
                        let mut acc = unit.to_vec();
                        for (i, &e) in mono.iter().enumerate() {
                            let g = if i < n { Matrix::identity(r, n).col(i) } else { theta.col(i - n) };
                            for _ in 0..e {
                                acc = times(&acc, &g);
                            }
                        }
                        acc
                    })
                    .collect();
                if cols.is_empty() {
                    Matrix::zeros(r, n, 0)
                } else {
                    Matrix::from_rows(r, cols).transpose()
                }
            })
            .collect()
    }
}

/// `M = F_2[x]/(x²)` with basis `1, x`, `θ(1) = theta_one`, `θ(x) = x`, and `N = F_2·1`.
pub fn toy_instance(theta_one: [i64; 2], bound: usize) -> WeightedMonadData {
    let r = WittRing::prime_field(2, 1).expect("F_2");
    // columns: 1·1, 1·x, x·1, x·x
    let mult = Matrix::from_ints(&r, &[&[1, 0, 0, 0], &[0, 1, 1, 0]]);
    let unit = vec![r.one(), r.zero()];
    let theta = Matrix::from_ints(&r, &[&[theta_one[0], 0], &[theta_one[1], 1]]);
    let incl = Matrix::from_ints(&r, &[&[1], &[0]]);
    subobject_data(&r, bound, mult, unit, &theta, incl)
}

/// Assembles the data for a subalgebra with basis the columns of `incl`.
pub fn subobject_data(
    r: &WittRing,
    bound: usize,
    mult: Matrix<WittRing>,
    unit: Vec<WittElem>,
    theta: &Matrix<WittRing>,
    incl: Matrix<WittRing>,
) -> WeightedMonadData {
    let tm = SymTheta::new(r, unit.len(), bound);
    let tn = SymTheta::new(r, incl.cols(), bound);
    let psi = tm.algebra_map(&mult, &unit, theta);
    let t_incl = tn.functor(&tm, &incl);
    // N's product and unit, read off through the inclusion
    let prod = mult.mul(&incl.kron(&incl));
    let n_mult = solve(&incl, &prod).unwrap_or_else(|_| Matrix::zeros(r, incl.cols(), incl.cols() * incl.cols()));
    let n_unit = solve(&incl, &Matrix::column(r, unit.clone())).map(|x| x.col(0)).unwrap_or_else(|_| vec![r.zero(); incl.cols()]);
    WeightedMonadData {
        ring: r.clone(),
        bound,
        m: tm.structure(mult, unit),
        psi,
        n: tn.structure(n_mult, n_unit),
        incl,
        t_incl,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_examples() {
        assert_eq!(binomial_gcd(4), BigInt::from(2));
        assert_eq!(binomial_gcd(6), BigInt::from(1));
        assert_eq!(binomial_gcd(27), BigInt::from(3));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn certificate_examples() {
        let c = regularity_certificate(5, 3).unwrap();
        assert_eq!(c.case, CertCase::CoprimeCase { r: 1, index: BigInt::from(10) });
        assert_eq!(c.valuation(), Some(0));
        let c = regularity_certificate(6, 3).unwrap();
        assert_eq!(c.case, CertCase::DivisibleCase { d: 2, index: BigInt::from(10) });
        assert!(c.methods_agree());
        assert!(regularity_certificate(2, 2).unwrap().is_critical());
        assert_eq!(regularity_certificate(1, 2).unwrap().case, CertCase::TrivialWeight);
        assert_eq!(regularity_certificate(4, 4), Err(WeightsError::NotPrime(4)));
    }

    #[test]
    fn epi_examples() {
        let z8 = WittRing::prime_field(2, 3).unwrap();
        let id = EpiFamily::new(&z8, 2, vec![Matrix::identity(&z8, 2)]);
        assert!(epi_family_check(&id).unwrap().surjective);
        let two = EpiFamily::new(&z8, 1, vec![Matrix::from_ints(&z8, &[&[2]])]);
        let res = epi_family_check(&two).unwrap();
        assert_eq!((res.surjective, res.residue_rank), (false, 0));
        assert_eq!(res.witness.unwrap(), vec![z8.residue_field().one()]);
        let halves = EpiFamily::new(&z8, 2, vec![Matrix::from_ints(&z8, &[&[1], &[0]]), Matrix::from_ints(&z8, &[&[0], &[3]])]);
        assert!(epi_family_check(&halves).unwrap().surjective);
        assert!(brute_force_surjective(&halves));
        assert!(!brute_force_surjective(&two));
        let no_ideal = EpiFamily { maximal_ideal: None, ..two };
        assert!(matches!(epi_family_check(&no_ideal), Err(WeightsError::NotLocal(_))));
    }

    #[test]
    fn epi_json_round_trip() {
        let f4 = WittRing::unramified(2, 2, 1).unwrap();
        let f = EpiFamily::new(&f4, 1, vec![Matrix::from_rows(&f4, vec![vec![f4.generator(), f4.zero()]])]);
        assert_eq!(EpiFamily::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn sym_theta_ranks() {
        let r = WittRing::prime_field(2, 1).unwrap();
        let t = SymTheta::new(&r, 2, 3);
        // 1; x, y; x², xy, y², θx, θy; cubics and x·θ
        assert_eq!(t.t_rank(), vec![1, 2, 5, 8]);
    }

    #[test]
    fn toy_inherits() {
        let data = toy_instance([0, 0], 3);
        let InheritOutcome::Induced(s) = inherit_structure(&data).unwrap() else { panic!("expected induced structure") };
        assert_eq!(s.critical, vec![2]);
        assert!(s.report.passed());
        assert!(s.solved_directly.is_empty());
    }

    #[test]
    fn toy_detects_theta_leaving_n() {
        let data = toy_instance([0, 1], 3);
        match inherit_structure(&data).unwrap() {
            InheritOutcome::Offending { weight, image, .. } => {
                assert_eq!(weight, 2);
                assert!(!image[1].is_zero());
            }
            InheritOutcome::Induced(_) => panic!("θ(1) = x is outside N"),
        }
    }

    #[test]
    fn whole_module_and_zero() {
        let r = WittRing::prime_field(2, 1).unwrap();
        let mult = Matrix::from_ints(&r, &[&[1, 0, 0, 0], &[0, 1, 1, 0]]);
        let theta = Matrix::from_ints(&r, &[&[0, 0], &[1, 1]]);
        let data = subobject_data(&r, 3, mult.clone(), vec![r.one(), r.zero()], &theta, Matrix::identity(&r, 2));
        let InheritOutcome::Induced(s) = inherit_structure(&data).unwrap() else { panic!() };
        assert_eq!(s.psi_n, data.psi);
        let zero = subobject_data(&r, 3, Matrix::zeros(&r, 0, 0), vec![], &Matrix::zeros(&r, 0, 0), Matrix::zeros(&r, 0, 0));
        let InheritOutcome::Induced(s) = inherit_structure(&zero).unwrap() else { panic!() };
        assert!(s.psi_n.iter().all(Matrix::is_zero));
        let not_sub = subobject_data(&r, 3, mult, vec![r.one(), r.zero()], &theta, Matrix::from_ints(&r, &[&[0], &[1]]));
        assert_eq!(inherit_structure(&not_sub).unwrap_err(), WeightsError::InvariantViolation("unit_in_N".into()));
    }

    #[test]
    fn broken_diagram_is_named() {
        let mut data = toy_instance([0, 0], 3);
        let r = data.ring.clone();
        data.psi[1] = Matrix::from_ints(&r, &[&[0, 1], &[1, 0]]);
        assert_eq!(inherit_structure(&data).unwrap_err(), WeightsError::InvariantViolation("psi_eta_is_identity".into()));
    }
}
