//! Named algebras with frozen element orderings.
//!
//! | key | universe and operations |
//! |-----|-------------------------|
//! | `boolean2` | `{0,1}`; `zero one neg join meet` |
//! | `bool_lattice` | `{0,1}`; `join meet` |
//! | `c2` | `{0,1}`; `mul` = meet (semilattice) |
//! | `zn:n` | cyclic group `Z_n`; `add neg e` |
//! | `zp:p` | as `zn:p`, `p` must be prime |
//! | `zn_plus:n`, `z2plus` | `Z_n` plus every constant `c0 .. c{n-1}` |
//! | `zn_rho:n` | `Z_n` plus the cycle `rho(x) = x + 1` |
//! | `s3` | symmetric group; elements `1, r, r^2, s, rs, r^2 s`; `mul inv e` |
//! | `v4` | Klein four-group `{e, a, b, ab}` as XOR on 2 bits; `mul inv e` |
//! | `m_n:n` | lattice `M_n`: `0` bottom, `1` top, `2..=n+1` atoms; `join meet` |
//! | `pentagon` | `N_5`: `0`, `a=1`, `b=2`, `c=3`, top `=4` with `0<a<b<top`, `0<c<top`; `join meet zero one` |
//! | `fl2` | bounded free distributive lattice on `x, y`: `0, x∧y, x, y, x∨y, 1`; `join meet zero one` |
//! | `lattice6:i` | `i`-th six-element lattice from [`crate::lattice::enumerate_lattices`] |
//! | `proj:n` | `P_n`, `mul(x, y) = x` |
//! | `groupoid2:i` | two-element groupoid whose table `[f(0,0), f(0,1), f(1,0), f(1,1)]` spells `i` in binary, most significant first |
//! | `nand`, `nor`, `xor` | aliases for `groupoid2:14`, `groupoid2:8`, `groupoid2:6` |
//!
//! The `groupoid2` indices map to the rows of the classical table of
//! order-two groupoids as: constants `{0, 15}`, projections `{3, 5}`,
//! XOR/XNOR `{6, 9}`, AND/OR `{1, 7}`, negated projections `{10, 12}`,
//! implications `{2, 4, 11, 13}`, NOR/NAND `{8, 14}`.

use std::fmt;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::lattice;
use crate::table::FunctionTable;

/// A builtin key plus integer parameters, e.g. `m_n:6`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltinSpec {
    pub key: String,
    pub parameters: Vec<usize>,
    pub description: String,
}

impl BuiltinSpec {
    /// Parses `key[:p1[:p2...]]`, with or without a leading `builtin:`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.strip_prefix("builtin:").unwrap_or(text);
        let mut parts = text.split(':');
        let key = parts.next().unwrap_or("").to_string();
        let parameters = parts
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| Error::UnknownBuiltin(format!("{text}: parameter {p:?} is not an integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        let description = describe(&key).ok_or_else(|| Error::UnknownBuiltin(text.to_string()))?;
        Ok(BuiltinSpec {
            key,
            parameters,
            description: description.to_string(),
        })
    }

    fn param(&self, i: usize) -> Result<usize> {
        self.parameters
            .get(i)
            .copied()
            .ok_or_else(|| Error::Domain(format!("builtin {} needs parameter {}", self.key, i + 1)))
    }

    fn expect_params(&self, count: usize) -> Result<()> {
        if self.parameters.len() != count {
            return Err(Error::Domain(format!(
                "builtin {} takes {count} parameter(s), got {}",
                self.key,
                self.parameters.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for BuiltinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key)?;
        for p in &self.parameters {
            write!(f, ":{p}")?;
        }
        Ok(())
    }
}

pub const KEYS: &[(&str, &str)] = &[
    ("boolean2", "two-element Boolean algebra"),
    ("bool_lattice", "two-element lattice ({0,1}, join, meet)"),
    ("c2", "two-element meet semilattice"),
    ("zn", "cyclic group Z_n (add, neg, e)"),
    ("zp", "cyclic group of prime order"),
    ("zn_plus", "Z_n with every constant"),
    ("z2plus", "Z_2 with both constants"),
    ("zn_rho", "Z_n with the cycle x+1"),
    ("s3", "symmetric group on three letters"),
    ("v4", "Klein four-group"),
    ("m_n", "lattice M_n"),
    ("pentagon", "pentagon lattice N_5 with bounds"),
    ("fl2", "bounded free distributive lattice on two generators"),
    ("lattice6", "six-element lattice by enumeration index"),
    ("proj", "projection groupoid P_n"),
    ("groupoid2", "two-element groupoid by table index"),
    ("nand", "NAND groupoid"),
    ("nor", "NOR groupoid"),
    ("xor", "XOR groupoid"),
];

fn describe(key: &str) -> Option<&'static str> {
    KEYS.iter().find(|(k, _)| *k == key).map(|(_, d)| *d)
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn binary(n: usize, f: impl Fn(usize, usize) -> usize) -> Vec<u8> {
    (0..n * n).map(|i| f(i / n, i % n) as u8).collect()
}

fn unary(n: usize, f: impl Fn(usize) -> usize) -> Vec<u8> {
    (0..n).map(|x| f(x) as u8).collect()
}

fn cyclic_ops(n: usize) -> Vec<(String, usize, Vec<u8>)> {
    vec![
        ("add".into(), 2, binary(n, |x, y| (x + y) % n)),
        ("neg".into(), 1, unary(n, |x| (n - x) % n)),
        ("e".into(), 0, vec![0]),
    ]
}

/// The 16 two-element groupoid tables indexed as in the module docs.
pub fn groupoid2_table(index: usize) -> Result<Vec<u8>> {
    if index > 15 {
        return Err(Error::Domain(format!("groupoid2 index {index} not in 0..=15")));
    }
    Ok((0..4).map(|i| ((index >> (3 - i)) & 1) as u8).collect())
}

/// Builds the algebra named by `spec`.
pub fn builtin_algebra(spec: &BuiltinSpec) -> Result<FiniteAlgebra> {
    let name = spec.to_string().replace(':', "_");
    match spec.key.as_str() {
        "boolean2" => {
            spec.expect_params(0)?;
            FiniteAlgebra::from_tables(
                name,
                2,
                [
                    ("zero", 0, vec![0]),
                    ("one", 0, vec![1]),
                    ("neg", 1, vec![1, 0]),
                    ("join", 2, vec![0, 1, 1, 1]),
                    ("meet", 2, vec![0, 0, 0, 1]),
                ],
            )
        }
        "bool_lattice" => {
            spec.expect_params(0)?;
            FiniteAlgebra::from_tables(name, 2, [("join", 2, vec![0, 1, 1, 1]), ("meet", 2, vec![0, 0, 0, 1])])
        }
        "c2" => {
            spec.expect_params(0)?;
            FiniteAlgebra::from_tables(name, 2, [("mul", 2, vec![0, 0, 0, 1])])
        }
        "zn" | "zp" => {
            spec.expect_params(1)?;
            let n = spec.param(0)?;
            if n == 0 {
                return Err(Error::Domain("Z_n needs n >= 1".into()));
            }
            if spec.key == "zp" && !is_prime(n) {
                return Err(Error::Domain(format!("zp needs a prime, got {n}")));
            }
            FiniteAlgebra::from_tables(name, n, cyclic_ops(n))
        }
        "zn_plus" | "z2plus" => {
            let n = if spec.key == "z2plus" {
                spec.expect_params(0)?;
                2
            } else {
                spec.expect_params(1)?;
                spec.param(0)?
            };
            if n == 0 {
                return Err(Error::Domain("Z_n needs n >= 1".into()));
            }
            let mut ops = cyclic_ops(n);
            for c in 0..n {
                ops.push((format!("c{c}"), 0, vec![c as u8]));
            }
            FiniteAlgebra::from_tables(name, n, ops)
        }
        "zn_rho" => {
            spec.expect_params(1)?;
            let n = spec.param(0)?;
            if n == 0 {
                return Err(Error::Domain("Z_n needs n >= 1".into()));
            }
            let mut ops = cyclic_ops(n);
            ops.push(("rho".into(), 1, unary(n, |x| (x + 1) % n)));
            FiniteAlgebra::from_tables(name, n, ops)
        }
        "s3" => {
            spec.expect_params(0)?;
            s3(name)
        }
        "v4" => {
            spec.expect_params(0)?;
            FiniteAlgebra::from_tables(
                name,
                4,
                [
                    ("mul", 2, binary(4, |x, y| x ^ y)),
                    ("inv", 1, unary(4, |x| x)),
                    ("e", 0, vec![0]),
                ],
            )
        }
        "m_n" => {
            spec.expect_params(1)?;
            let n = spec.param(0)?;
            if n == 0 {
                return Err(Error::Domain("m_n needs n >= 1".into()));
            }
            m_n(name, n)
        }
        "pentagon" => {
            spec.expect_params(0)?;
            // covers: 0<a, a<b, b<1, 0<c, c<1
            bounded_lattice(name, 5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
        }
        "fl2" => {
            spec.expect_params(0)?;
            // 0 < x∧y < x, y < x∨y < 1
            bounded_lattice(name, 6, &[(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5)])
        }
        "lattice6" => {
            spec.expect_params(1)?;
            let i = spec.param(0)?;
            let all = lattice::enumerate_lattices(6);
            let l = all
                .get(i)
                .ok_or_else(|| Error::Domain(format!("lattice6 index {i} not below {}", all.len())))?;
            l.to_algebra(&name)
        }
        "proj" => {
            spec.expect_params(1)?;
            let n = spec.param(0)?;
            if n == 0 {
                return Err(Error::Domain("proj needs n >= 1".into()));
            }
            FiniteAlgebra::from_tables(name, n, [("mul", 2, binary(n, |x, _| x))])
        }
        "groupoid2" => {
            spec.expect_params(1)?;
            FiniteAlgebra::from_tables(name, 2, [("mul", 2, groupoid2_table(spec.param(0)?)?)])
        }
        "nand" | "nor" | "xor" => {
            spec.expect_params(0)?;
            let index = match spec.key.as_str() {
                "nand" => 14,
                "nor" => 8,
                _ => 6,
            };
            FiniteAlgebra::from_tables(name, 2, [("mul", 2, groupoid2_table(index)?)])
        }
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

/// Shorthand for `builtin_algebra(&BuiltinSpec::parse(key)?)`.
pub fn builtin(key: &str) -> Result<FiniteAlgebra> {
    builtin_algebra(&BuiltinSpec::parse(key)?)
}

fn s3(name: String) -> Result<FiniteAlgebra> {
    type Perm = [usize; 3];
    let compose = |g: &Perm, h: &Perm| -> Perm { [g[h[0]], g[h[1]], g[h[2]]] };
    let id: Perm = [0, 1, 2];
    // r = (3 1 2) and s = (2 1) in one-line notation
    let r: Perm = [2, 0, 1];
    let s: Perm = [1, 0, 2];
    let r2 = compose(&r, &r);
    let elements = [id, r, r2, s, compose(&r, &s), compose(&r2, &s)];
    let index = |p: &Perm| elements.iter().position(|q| q == p).expect("closed");
    let mul = binary(6, |x, y| index(&compose(&elements[x], &elements[y])));
    let inv = unary(6, |x| (0..6).find(|&y| mul[x * 6 + y] == 0).expect("group"));
    FiniteAlgebra::from_tables(name, 6, [("mul", 2, mul), ("inv", 1, inv), ("e", 0, vec![0])])
}

fn m_n(name: String, n: usize) -> Result<FiniteAlgebra> {
    let size = n + 2;
    let leq = |x: usize, y: usize| x == y || x == 0 || y == 1;
    let join = binary(size, |x, y| {
        if leq(x, y) {
            y
        } else if leq(y, x) {
            x
        } else {
            1
        }
    });
    let meet = binary(size, |x, y| {
        if leq(x, y) {
            x
        } else if leq(y, x) {
            y
        } else {
            0
        }
    });
    FiniteAlgebra::from_tables(name, size, [("join", 2, join), ("meet", 2, meet)])
}

/// Bounded lattice from cover pairs `(lower, upper)`; element 0 is the bottom
/// and `size - 1` the top.
fn bounded_lattice(name: String, size: usize, covers: &[(usize, usize)]) -> Result<FiniteAlgebra> {
    let order = lattice::order_from_covers(size, covers);
    let l = lattice::Lattice::from_order(order).ok_or_else(|| Error::Domain("covers do not form a lattice".into()))?;
    l.to_algebra(&name)
}

/// Unary table from a closure, for tests and examples.
pub fn unary_table(n: usize, f: impl Fn(usize) -> usize) -> Result<FunctionTable> {
    FunctionTable::new(n, 1, unary(n, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean2_has_five_ops() {
        let b = builtin("boolean2").unwrap();
        let names: Vec<&str> = b.ops().iter().map(|o| o.name.as_str()).collect();
        assert_eq!(names, ["zero", "one", "neg", "join", "meet"]);
    }

    #[test]
    fn s3_squares() {
        let g = builtin("s3").unwrap();
        let mul = &g.op("mul").unwrap().table;
        let squares: Vec<usize> = (0..6).map(|x| mul.at(x * 6 + x)).collect();
        // 1, r^2, r, 1, 1, 1
        assert_eq!(squares, [0, 2, 1, 0, 0, 0]);
        // rs really is r·s
        assert_eq!(mul.at(6 + 3), 4);
        assert_eq!(mul.at(2 * 6 + 3), 5);
    }

    #[test]
    fn m3_tables() {
        let m3 = builtin("m_n:3").unwrap();
        assert_eq!(m3.size(), 5);
        let join = &m3.op("join").unwrap().table;
        let meet = &m3.op("meet").unwrap().table;
        assert_eq!(join.get(&[2, 3]).unwrap(), 1);
        assert_eq!(meet.get(&[2, 3]).unwrap(), 0);
        assert_eq!(meet.get(&[2, 1]).unwrap(), 2);
        assert_eq!(join.get(&[0, 4]).unwrap(), 4);
    }

    #[test]
    fn pentagon_tables() {
        let n5 = builtin("pentagon").unwrap();
        let meet = &n5.op("meet").unwrap().table;
        let join = &n5.op("join").unwrap().table;
        assert_eq!(meet.get(&[1, 3]).unwrap(), 0);
        assert_eq!(meet.get(&[2, 3]).unwrap(), 0);
        assert_eq!(meet.get(&[1, 2]).unwrap(), 1);
        assert_eq!(join.get(&[1, 3]).unwrap(), 4);
        assert_eq!(n5.op("zero").unwrap().table.entries(), &[0]);
    }

    #[test]
    fn groupoid_indexing() {
        assert_eq!(groupoid2_table(1).unwrap(), [0, 0, 0, 1]);
        assert_eq!(groupoid2_table(14).unwrap(), [1, 1, 1, 0]);
        assert_eq!(groupoid2_table(13).unwrap(), [1, 1, 0, 1]);
        assert!(groupoid2_table(16).is_err());
    }

    #[test]
    fn parameter_errors() {
        assert!(builtin("zp:4").is_err());
        assert!(builtin("zn:4").is_ok());
        assert!(builtin("m_n").is_err());
        assert!(builtin("nope").is_err());
        assert!(builtin("boolean2:3").is_err());
        assert_eq!(BuiltinSpec::parse("builtin:m_n:6").unwrap().parameters, vec![6]);
    }
}
