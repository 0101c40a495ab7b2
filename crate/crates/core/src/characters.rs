//! Dirichlet characters modulo `f`.
//!
//! The unit group `(Z/fZ)^*` is split by CRT into prime-power components, each of which is
//! cyclic except for `2^k` with `k >= 3` (generated by `-1` and `5`). A character is an
//! exponent vector over those generators; its values are tabulated once for `0..f`.

use crate::error::{Error, Result};
use crate::numkernel::C64;
use num_integer::Integer;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

/// One cyclic factor of the unit group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicFactor {
    pub prime: u64,
    /// The prime power `p^k` this generator lives in.
    pub prime_power: u64,
    /// Generator as a residue modulo `prime_power`.
    pub generator: u64,
    pub order: u64,
}

#[derive(Debug, PartialEq)]
pub struct CharacterGroup {
    modulus: u64,
    factorization: Vec<(u64, u32)>,
    generators: Vec<CyclicFactor>,
    total_order: u64,
    /// Discrete logarithm vector of each residue, `None` off the units.
    dlog: Vec<Option<Vec<u64>>>,
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn multiplicative_order(g: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut x = g % m;
    let mut k = 1;
    while x != 1 {
        x = mul_mod(x, g, m);
        k += 1;
    }
    k
}

/// Generators (with orders) of `(Z/p^kZ)^*`.
fn prime_power_generators(p: u64, k: u32) -> Vec<CyclicFactor> {
    let pk = p.pow(k);
    let factor = |generator: u64, order: u64| CyclicFactor {
        prime: p,
        prime_power: pk,
        generator,
        order,
    };
    if p == 2 {
        return match k {
            1 => Vec::new(),
            2 => vec![factor(3, 2)],
            _ => vec![factor(pk - 1, 2), factor(5, pk / 4)],
        };
    }
    let phi = pk / p * (p - 1);
    let g = (2..pk)
        .find(|&g| g % p != 0 && multiplicative_order(g, pk) == phi)
        .expect("odd prime powers have primitive roots");
    vec![factor(g, phi)]
}

impl CharacterGroup {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factorization
    }

    pub fn generators(&self) -> &[CyclicFactor] {
        &self.generators
    }

    /// Euler's phi of the modulus.
    pub fn total_order(&self) -> u64 {
        self.total_order
    }

    pub fn is_unit(&self, n: i64) -> bool {
        self.dlog[n.rem_euclid(self.modulus as i64) as usize].is_some()
    }

    /// Exponent vector of a unit with respect to the generators.
    pub fn discrete_log(&self, n: i64) -> Option<&[u64]> {
        self.dlog[n.rem_euclid(self.modulus as i64) as usize].as_deref()
    }
}

/// Decomposes the unit group modulo `f`; generators and discrete logarithms are found by
/// exhaustive search.
pub fn build_group(f: u64) -> Result<Arc<CharacterGroup>> {
    if f == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    let factorization = factorize(f);
    let mut generators = Vec::new();
    // per prime-power component: residue -> exponents over that component's generators
    let mut component_logs: Vec<(u64, Vec<Option<Vec<u64>>>)> = Vec::new();
    for &(p, k) in &factorization {
        let gens = prime_power_generators(p, k);
        let pk = p.pow(k);
        for g in &gens {
            assert_eq!(
                multiplicative_order(g.generator, pk),
                g.order,
                "generator {} mod {pk}",
                g.generator
            );
        }
        let mut table: Vec<Option<Vec<u64>>> = vec![None; pk as usize];
        let mut exps = vec![0u64; gens.len()];
        loop {
            let r = gens.iter().zip(&exps).fold(1 % pk, |acc, (g, &e)| {
                (0..e).fold(acc, |a, _| mul_mod(a, g.generator, pk))
            });
            assert!(table[r as usize].is_none(), "generators of {pk} are not independent");
            table[r as usize] = Some(exps.clone());
            // mixed-radix increment
            let mut i = 0;
            while i < gens.len() {
                exps[i] += 1;
                if exps[i] < gens[i].order {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
            if i == gens.len() {
                break;
            }
        }
        if gens.is_empty() {
            table[1 % pk as usize] = Some(Vec::new());
        }
        generators.extend(gens);
        component_logs.push((pk, table));
    }
    let total_order: u64 = generators.iter().map(|g| g.order).product();
    let dlog = (0..f)
        .map(|n| {
            if n.gcd(&f) != 1 {
                return None;
            }
            let mut v = Vec::with_capacity(generators.len());
            for (pk, table) in &component_logs {
                v.extend_from_slice(table[(n % pk) as usize].as_ref()?);
            }
            Some(v)
        })
        .collect();
    Ok(Arc::new(CharacterGroup {
        modulus: f,
        factorization,
        generators,
        total_order,
        dlog,
    }))
}

/// A Dirichlet character modulo `f` with its full value table.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    group: Arc<CharacterGroup>,
    index: usize,
    exponents: Vec<u64>,
    order: u64,
    values: Vec<C64>,
}

/// Conductor data of a character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Conductor {
    pub conductor: u64,
    pub is_primitive: bool,
    pub is_principal: bool,
}

fn root_of_unity(k: u64, n: u64) -> C64 {
    // exact values at the quarter turns
    match (4 * k) % (4 * n) {
        0 => return C64::new(1.0, 0.0),
        _ if 4 * k == n => return C64::new(0.0, 1.0),
        _ if 2 * k == n => return C64::new(-1.0, 0.0),
        _ if 4 * k == 3 * n => return C64::new(0.0, -1.0),
        _ => {}
    }
    C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

impl DirichletCharacter {
    /// Character with the given exponent vector (reduced modulo the generator orders).
    pub fn from_exponents(group: &Arc<CharacterGroup>, exponents: &[u64], index: usize) -> Result<Self> {
        let gens = group.generators();
        if exponents.len() != gens.len() {
            return Err(Error::Domain(format!(
                "expected {} exponents for modulus {}, got {}",
                gens.len(),
                group.modulus,
                exponents.len()
            )));
        }
        let exponents: Vec<u64> = exponents.iter().zip(gens).map(|(e, g)| e % g.order).collect();
        let lcm = gens.iter().fold(1u64, |l, g| l.lcm(&g.order));
        let order = exponents
            .iter()
            .zip(gens)
            .fold(1u64, |l, (&e, g)| l.lcm(&(g.order / e.gcd(&g.order))));
        let values = (0..group.modulus as i64)
            .map(|n| match group.discrete_log(n) {
                None => C64::new(0.0, 0.0),
                Some(logs) => {
                    let k = logs
                        .iter()
                        .zip(&exponents)
                        .zip(gens)
                        .fold(0u64, |acc, ((&l, &e), g)| {
                            (acc + (l * e % g.order) * (lcm / g.order)) % lcm
                        });
                    root_of_unity(k, lcm)
                }
            })
            .collect();
        Ok(DirichletCharacter {
            group: Arc::clone(group),
            index,
            exponents,
            order,
            values,
        })
    }

    /// The principal character modulo `f`.
    pub fn principal(f: u64) -> Result<Self> {
        let g = build_group(f)?;
        let zeros = vec![0; g.generators().len()];
        DirichletCharacter::from_exponents(&g, &zeros, 0)
    }

    pub fn group(&self) -> &Arc<CharacterGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    /// Position in [`enumerate_characters`] order.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// `chi(n)`, with `n` read modulo `f` (so negative probes are accepted).
    #[inline]
    pub fn eval(&self, n: i64) -> C64 {
        self.values[n.rem_euclid(self.group.modulus as i64) as usize]
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Smallest modulus `d | f` from which the character is induced.
    pub fn conductor(&self) -> Conductor {
        let f = self.group.modulus;
        let is_principal = self.is_principal();
        let mut divisors: Vec<u64> = (1..=f).filter(|d| f.is_multiple_of(*d)).collect();
        divisors.sort_unstable();
        let conductor = divisors
            .into_iter()
            .find(|&d| {
                (0..f).filter(|&n| n % d == 1 % d && self.group.is_unit(n as i64)).all(|n| {
                    (self.values[n as usize] - C64::new(1.0, 0.0)).norm() < 1e-12
                })
            })
            .unwrap_or(f);
        Conductor {
            conductor,
            is_primitive: conductor == f,
            is_principal,
        }
    }

    /// Sum of the values over a full period.
    pub fn column_sum(&self) -> C64 {
        self.values.iter().sum()
    }
}

/// All `phi(f)` characters, principal first, exponents in mixed-radix order with the first
/// generator varying fastest.
pub fn enumerate_characters(group: &Arc<CharacterGroup>) -> Vec<DirichletCharacter> {
    let gens = group.generators();
    let mut out = Vec::with_capacity(group.total_order() as usize);
    let mut exps = vec![0u64; gens.len()];
    for index in 0..group.total_order() as usize {
        out.push(
            DirichletCharacter::from_exponents(group, &exps, index)
                .expect("exponent vector length matches generators"),
        );
        for (e, g) in exps.iter_mut().zip(gens) {
            *e += 1;
            if *e < g.order {
                break;
            }
            *e = 0;
        }
    }
    out
}

/// Convenience: every character modulo `f`.
pub fn characters_mod(f: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(enumerate_characters(&build_group(f)?))
}

/// One row of the character listing.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterRow {
    pub index: usize,
    pub exponents: Vec<u64>,
    pub order: u64,
    pub conductor: u64,
    pub primitive: bool,
    pub principal: bool,
}

impl From<&DirichletCharacter> for CharacterRow {
    fn from(chi: &DirichletCharacter) -> Self {
        let c = chi.conductor();
        CharacterRow {
            index: chi.index,
            exponents: chi.exponents.clone(),
            order: chi.order,
            conductor: c.conductor,
            primitive: c.is_primitive,
            principal: c.is_principal,
        }
    }
}
