//! Dirichlet characters, Gauss sums and the additive-to-multiplicative
//! identity.
//!
//! A character is stored as exponents on fixed generators of each
//! prime-power unit group: a primitive root for odd `p`, and `-1`, `5` for
//! powers of 2. Conductors are read off the exponents.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{euler_phi, factor, primitive_root_prime_power, radical, valuation};
use crate::error::Error;
use crate::scalar::{expi_frac, expi_rational, q_int, RootOfUnity, C64, Q};

/// Absolute tolerance for float Gauss-sum identities with unit-size values.
pub const GAUSS_TOL: f64 = 1e-10;

/// Below this modulus a Gauss sum counts as zero.
pub const NONVANISHING_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone)]
struct Component {
    p: u64,
    e: u32,
    /// `(generator, order)` pairs.
    gens: Vec<(u64, u64)>,
    exps: Vec<u64>,
    /// Discrete logs of each residue mod `p^e`; `None` for non-units.
    logs: Arc<Vec<Option<Vec<u32>>>>,
}

impl PartialEq for Component {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.gens == other.gens && self.exps == other.exps
    }
}

impl Eq for Component {}

fn standard_gens(p: u64, e: u32) -> Vec<(u64, u64)> {
    let m = p.pow(e);
    match (p, e) {
        (2, 1) => vec![],
        (2, 2) => vec![(3, 2)],
        (2, _) => vec![(m - 1, 2), (5, 1 << (e - 2))],
        _ => vec![(primitive_root_prime_power(p, e), euler_phi(m))],
    }
}

fn log_table(m: u64, gens: &[(u64, u64)]) -> Vec<Option<Vec<u32>>> {
    let mut table = vec![None; m as usize];
    let mut stack: Vec<(u64, Vec<u32>)> = vec![(1 % m, Vec::new())];
    while let Some((x, logs)) = stack.pop() {
        let Some(&(g, ord)) = gens.get(logs.len()) else {
            table[x as usize] = Some(logs);
            continue;
        };
        let mut y = x;
        for k in 0..ord {
            let mut l = logs.clone();
            l.push(k as u32);
            stack.push((y, l));
            y = y * g % m;
        }
    }
    if m == 1 {
        table[0] = Some(Vec::new());
    }
    table
}

impl Component {
    fn new(p: u64, e: u32, gens: Vec<(u64, u64)>, exps: Vec<u64>) -> Self {
        let logs = Arc::new(log_table(p.pow(e), &gens));
        Component { p, e, gens, exps, logs }
    }

    fn modulus(&self) -> u64 {
        self.p.pow(self.e)
    }

    fn value(&self, n: u64) -> Option<RootOfUnity> {
        let logs = self.logs[(n % self.modulus()) as usize].as_ref()?;
        Some(logs.iter().zip(&self.gens).zip(&self.exps).fold(RootOfUnity::ONE, |acc, ((&l, &(_, ord)), &j)| {
            acc.mul(&RootOfUnity::new(((l as u64 * j) % ord) as i64, ord))
        }))
    }

    /// Exponent `f` of the conductor `p^f` of this component.
    fn conductor_exp(&self) -> u32 {
        match (self.p, self.e) {
            (2, 1) => 0,
            (2, 2) => 2 * self.exps[0] as u32,
            (2, e) => {
                let (a, b) = (self.exps[0], self.exps[1]);
                if b != 0 {
                    e - valuation(b, 2)
                } else if a != 0 {
                    2
                } else {
                    0
                }
            }
            (p, e) => {
                let j = self.exps[0];
                if j == 0 {
                    0
                } else {
                    e - valuation(j, p)
                }
            }
        }
    }

    /// The same character on `(Z/p^f)^x` for `f` at least the conductor
    /// exponent and at most `e`.
    fn restrict(&self, f: u32) -> Component {
        let shift = self.e - f;
        if self.p == 2 {
            let gens = standard_gens(2, f);
            let a = self.exps.first().copied().unwrap_or(0);
            let b = self.exps.get(1).copied().unwrap_or(0) >> shift;
            let exps = match f {
                1 => vec![],
                2 => vec![a],
                _ => vec![a, b],
            };
            return Component::new(2, f, gens, exps);
        }
        let m = self.p.pow(f);
        let gens = vec![(self.gens[0].0 % m, euler_phi(m))];
        Component::new(self.p, f, gens, vec![self.exps[0] / self.p.pow(shift)])
    }

    /// The same character on `(Z/p^big)^x` for `big >= e`.
    fn lift(&self, big: u32) -> Component {
        let gens = standard_gens(self.p, big);
        let shift = self.p.pow(big - self.e);
        let exps = if self.p == 2 {
            let a = self.exps.first().copied().unwrap_or(0);
            let b = self.exps.get(1).copied().unwrap_or(0) * shift;
            match big {
                1 => vec![],
                2 => vec![a],
                _ => vec![a, b],
            }
        } else {
            let (g_big, ord_big) = gens[0];
            let l = self.logs[(g_big % self.modulus()) as usize].as_ref().expect("generator is a unit")[0] as u64;
            vec![(self.exps[0] * l * shift) % ord_big]
        };
        Component::new(self.p, big, gens, exps)
    }

    fn conj(&self) -> Component {
        let exps = self.gens.iter().zip(&self.exps).map(|(&(_, o), &j)| (o - j % o) % o).collect();
        Component { exps, ..self.clone() }
    }
}

/// A Dirichlet character modulo `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    components: Vec<Component>,
}

impl DirichletCharacter {
    pub fn trivial(q: u64) -> Self {
        Self::from_exponents(q, &[]).expect("zero exponents are valid")
    }

    /// Character with the given generator exponents, listed prime by prime
    /// in ascending order (for `2^e`, `e >= 3`: the exponent on `-1`, then
    /// on `5`). Missing trailing exponents are zero.
    pub fn from_exponents(q: u64, exps: &[u64]) -> Result<Self, Error> {
        if q == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        let mut it = exps.iter().copied();
        let mut components = Vec::new();
        for (p, e) in factor(q) {
            let gens = standard_gens(p, e);
            let mut ex = Vec::with_capacity(gens.len());
            for &(_, ord) in &gens {
                let j = it.next().unwrap_or(0);
                if j >= ord {
                    return Err(Error::InvalidInput(format!("exponent {j} out of range mod {ord}")));
                }
                ex.push(j);
            }
            components.push(Component::new(p, e, gens, ex));
        }
        if it.next().is_some() {
            return Err(Error::InvalidInput("too many exponents".into()));
        }
        Ok(DirichletCharacter { modulus: q, components })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponents(&self) -> Vec<u64> {
        self.components.iter().flat_map(|c| c.exps.iter().copied()).collect()
    }

    /// `chi(n)`, or `None` when `gcd(n, q) > 1`.
    pub fn value(&self, n: i64) -> Option<RootOfUnity> {
        let r = n.rem_euclid(self.modulus as i64) as u64;
        if r.gcd(&self.modulus) != 1 {
            return None;
        }
        self.components.iter().try_fold(RootOfUnity::ONE, |acc, c| Some(acc.mul(&c.value(r)?)))
    }

    pub fn value_c64(&self, n: i64) -> C64 {
        self.value(n).map_or(C64::new(0.0, 0.0), |r| r.to_c64())
    }

    /// `chi(n)` as a rational when it is `0` or `±1`.
    pub fn value_rational(&self, n: i64) -> Option<Q> {
        match self.value(n) {
            None => Some(Q::zero()),
            Some(r) => r.to_rational(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.components.iter().all(|c| c.exps.iter().all(|&j| j == 0))
    }

    /// `0` for even characters, `1` for odd ones.
    pub fn parity(&self) -> u32 {
        match self.value(-1) {
            Some(r) if !r.is_one() => 1,
            _ => 0,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.components.iter().map(|c| c.p.pow(c.conductor_exp())).product()
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> DirichletCharacter {
        let components: Vec<Component> = self
            .components
            .iter()
            .filter_map(|c| {
                let f = c.conductor_exp();
                (f > 0).then(|| c.restrict(f))
            })
            .collect();
        DirichletCharacter { modulus: self.conductor(), components }
    }

    /// The character modulo a multiple `big` of the modulus with the same
    /// values on integers coprime to `big`.
    pub fn induced(&self, big: u64) -> Result<DirichletCharacter, Error> {
        if big == 0 || !big.is_multiple_of(self.modulus) {
            return Err(Error::InvalidInput(format!("{big} is not a multiple of {}", self.modulus)));
        }
        let components = factor(big)
            .into_iter()
            .map(|(p, e)| match self.components.iter().find(|c| c.p == p) {
                Some(c) => c.lift(e),
                None => {
                    let gens = standard_gens(p, e);
                    let exps = vec![0; gens.len()];
                    Component::new(p, e, gens, exps)
                }
            })
            .collect();
        Ok(DirichletCharacter { modulus: big, components })
    }

    pub fn conj(&self) -> DirichletCharacter {
        DirichletCharacter { modulus: self.modulus, components: self.components.iter().map(Component::conj).collect() }
    }

    /// Product character modulo `lcm` of the two moduli.
    pub fn mul(&self, other: &DirichletCharacter) -> DirichletCharacter {
        let m = self.modulus.lcm(&other.modulus);
        let (a, b) = (self.induced(m).expect("lcm is a multiple"), other.induced(m).expect("lcm is a multiple"));
        let components = a
            .components
            .iter()
            .zip(&b.components)
            .map(|(x, y)| {
                let exps =
                    x.gens.iter().zip(x.exps.iter().zip(&y.exps)).map(|(&(_, o), (&i, &j))| (i + j) % o).collect();
                Component { exps, ..x.clone() }
            })
            .collect();
        DirichletCharacter { modulus: m, components }
    }

    /// Local component at `p` as a character modulo `p^{ord_p q}`.
    pub fn local_component(&self, p: u64) -> Option<DirichletCharacter> {
        let c = self.components.iter().find(|c| c.p == p)?;
        Some(DirichletCharacter { modulus: c.modulus(), components: vec![c.clone()] })
    }

    /// Primes dividing the modulus, with exponents.
    pub fn prime_powers(&self) -> Vec<(u64, u32)> {
        self.components.iter().map(|c| (c.p, c.e)).collect()
    }
}

/// All `phi(q)` characters mod `q`, in lexicographic order of exponents;
/// index 0 is trivial.
pub fn char_group(q: u64) -> Vec<DirichletCharacter> {
    let orders: Vec<u64> = factor(q).into_iter().flat_map(|(p, e)| standard_gens(p, e)).map(|(_, o)| o).collect();
    let mut out = Vec::new();
    let mut exps = vec![0u64; orders.len()];
    loop {
        out.push(DirichletCharacter::from_exponents(q, &exps).expect("exponents within range"));
        let Some(i) = (0..exps.len()).rev().find(|&i| exps[i] + 1 < orders[i]) else { break };
        exps[i] += 1;
        exps[i + 1..].iter_mut().for_each(|x| *x = 0);
    }
    out
}

/// `tau(chi) = sum_{a mod q} chi(a) e(a/q)`; equal to 1 for `q = 1`.
pub fn gauss_classical(chi: &DirichletCharacter) -> C64 {
    let q = chi.modulus;
    (0..q).map(|a| chi.value_c64(a as i64) * expi_frac(a as i64, q)).sum()
}

/// `tau_q(chi, beta) = sum_{d in (Z/q)^x} chi(d) e(d beta)`.
pub fn gauss_beta(chi: &DirichletCharacter, beta: &Q) -> C64 {
    let q = chi.modulus;
    (0..q).filter(|d| d.gcd(&q) == 1).map(|d| chi.value_c64(d as i64) * expi_rational(&(beta * q_int(d as i64)))).sum()
}

/// `1` if `q1 | gamma`, else `0`: the value of
/// `(1/q1) sum_{b mod q1} e(gamma b / q1)`.
pub fn orthogonality_avg(gamma: i64, q1: u64) -> Q {
    if gamma.rem_euclid(q1 as i64) == 0 {
        q_int(1)
    } else {
        Q::zero()
    }
}

/// Whether `c | q2 | lcm(c, rad q)` with `q2 | q`.
pub fn in_nonvanishing_window(chi: &DirichletCharacter, q2: u64) -> bool {
    let (q, c) = (chi.modulus, chi.conductor());
    q % q2 == 0 && q2.is_multiple_of(c) && c.lcm(&radical(q)) % q2 == 0
}

/// Observed Gauss sums `tau_q(chi, r/q2)` over `r` coprime to `q2`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowReport {
    pub modulus: u64,
    pub q2: u64,
    pub in_window: bool,
    pub min_abs: f64,
    pub zero_at: Option<u64>,
}

impl WindowReport {
    /// Fails only for a vanishing sum inside the window.
    pub fn passed(&self) -> bool {
        !(self.in_window && self.zero_at.is_some())
    }
}

pub fn nonvanishing_window_check(chi: &DirichletCharacter, q2: u64) -> Result<WindowReport, Error> {
    if q2 == 0 || !chi.modulus.is_multiple_of(q2) {
        return Err(Error::InvalidInput(format!("q2 = {q2} does not divide {}", chi.modulus)));
    }
    let mut min_abs = f64::INFINITY;
    let mut zero_at = None;
    for r in (0..q2.max(2)).filter(|r| r.gcd(&q2) == 1) {
        let v = gauss_beta(chi, &Q::new(r.into(), q2.into())).norm();
        if v < NONVANISHING_THRESHOLD && zero_at.is_none() {
            zero_at = Some(r);
        }
        min_abs = min_abs.min(v);
    }
    Ok(WindowReport { modulus: chi.modulus, q2, in_window: in_nonvanishing_window(chi, q2), min_abs, zero_at })
}

/// Both sides of `(tau(chi)/q) sum_{a mod q} conj(chi(-a)) e(an/q) = chi(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AddToMult {
    pub lhs: C64,
    pub rhs: C64,
}

impl AddToMult {
    pub fn passed(&self) -> bool {
        (self.lhs - self.rhs).norm() <= GAUSS_TOL
    }
}

/// Coefficients `c_r = (tau(chi)/q) conj(chi(-r))`, `r = 0..q`, expressing
/// `chi(n) = sum_r c_r e(nr/q)`.
pub fn additive_coefficients(chi: &DirichletCharacter) -> Result<Vec<C64>, Error> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive { modulus: chi.modulus, conductor: chi.conductor() });
    }
    let q = chi.modulus;
    let scale = gauss_classical(chi) / q as f64;
    Ok((0..q).map(|r| scale * chi.value_c64(-(r as i64)).conj()).collect())
}

pub fn addtomult_check(chi: &DirichletCharacter, n: i64) -> Result<AddToMult, Error> {
    let coeffs = additive_coefficients(chi)?;
    let q = chi.modulus;
    let lhs =
        coeffs.iter().enumerate().map(|(a, c)| c * expi_frac((a as i64 * n.rem_euclid(q as i64)) % q as i64, q)).sum();
    Ok(AddToMult { lhs, rhs: chi.value_c64(n) })
}
