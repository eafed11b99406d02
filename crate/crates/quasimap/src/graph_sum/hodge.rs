//! Integrals of ψ- and λ-monomials over M̄_{g,n}, read from a line-oriented
//! table and extended by the string and dilaton equations (λ-classes are
//! pulled back along forgetful maps, so both equations apply unchanged).

use crate::algebra::{fmt_q, parse_q, qi, Q};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::path::Path;

/// λ₁^e₁ λ₂^e₂.
pub type LambdaMono = (u32, u32);

const BUILTIN: &str = include_str!("../../data/hodge.txt");

#[derive(Clone, Debug, PartialEq)]
pub struct HodgeTable {
    entries: BTreeMap<(u32, Vec<u32>, LambdaMono), Q>,
}

fn stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

fn key(psi: &[u32]) -> Vec<u32> {
    let mut k = psi.to_vec();
    k.sort_unstable_by(|a, b| b.cmp(a));
    k
}

impl HodgeTable {
    /// The table shipped with the crate (g ≤ 2).
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("bundled Hodge table parses")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Records `g; psi-exponents; lambda-exponents; n; num/den`, `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("line {}: {what}", lineno + 1));
            let f: Vec<&str> = line.split(';').map(str::trim).collect();
            if f.len() != 5 {
                return Err(bad("expected 5 fields"));
            }
            let g: u32 = f[0].parse().map_err(|_| bad("genus"))?;
            let psi: Vec<u32> = if f[1] == "-" {
                Vec::new()
            } else {
                f[1].split(',').map(|s| s.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad("psi exponents"))?
            };
            let lam: Vec<u32> = f[2].split(',').map(|s| s.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad("lambda exponents"))?;
            let lam = match lam[..] {
                [a] => (a, 0),
                [a, b] => (a, b),
                _ => return Err(bad("lambda exponents")),
            };
            let n: usize = f[3].parse().map_err(|_| bad("n"))?;
            if n != psi.len() {
                return Err(bad("n disagrees with the psi list"));
            }
            let v = parse_q(f[4]).ok_or_else(|| bad("value"))?;
            if dim_defect(g, &psi, lam) != 0 {
                return Err(bad("entry is not dimension-correct"));
            }
            entries.insert((g, key(&psi), lam), v);
        }
        Ok(HodgeTable { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, &[u32], LambdaMono, &Q)> {
        self.entries.iter().map(|((g, p, l), v)| (*g, p.as_slice(), *l, v))
    }

    /// Serialize in the same format `parse` reads.
    pub fn to_text(&self) -> String {
        let mut s = String::from("# g; psi-exponents; lambda-exponents; n; value\n");
        for ((g, p, (e1, e2)), v) in &self.entries {
            let ps = if p.is_empty() { "-".to_string() } else { p.iter().map(u32::to_string).collect::<Vec<_>>().join(",") };
            s.push_str(&format!("{g}; {ps}; {e1},{e2}; {}; {}\n", p.len(), fmt_q(v)));
        }
        s
    }

    /// ∫_{M̄_{g,n}} λ^lam Π ψ_i^{psi_i}.
    pub fn integral(&self, g: u32, psi: &[u32], lam: LambdaMono) -> Result<Q> {
        if dim_defect(g, psi, lam) != 0 || !stable(g, psi.len()) {
            return Ok(qi(0));
        }
        if let Some(v) = self.entries.get(&(g, key(psi), lam)) {
            return Ok(v.clone());
        }
        self.reduce(g, psi, lam)
    }

    /// Same as `integral` but never consults the table for this exact entry.
    pub fn reduce(&self, g: u32, psi: &[u32], lam: LambdaMono) -> Result<Q> {
        let n = psi.len();
        if dim_defect(g, psi, lam) != 0 || !stable(g, n) {
            return Ok(qi(0));
        }
        if stable(g, n - 1) {
            if let Some(pos) = psi.iter().position(|&a| a == 0) {
                let mut rest = psi.to_vec();
                rest.remove(pos);
                let mut acc = qi(0);
                for j in 0..rest.len() {
                    if rest[j] > 0 {
                        let mut b = rest.clone();
                        b[j] -= 1;
                        acc += self.integral(g, &b, lam)?;
                    }
                }
                return Ok(acc);
            }
            if let Some(pos) = psi.iter().position(|&a| a == 1) {
                let mut rest = psi.to_vec();
                rest.remove(pos);
                return Ok(self.integral(g, &rest, lam)? * qi(2 * g as i64 - 3 + n as i64));
            }
        }
        Err(Error::MissingHodge(format!("(g={g}, psi={psi:?}, lambda1^{} lambda2^{})", lam.0, lam.1)))
    }
}

/// dim M̄_{g,n} minus the degree of the integrand.
fn dim_defect(g: u32, psi: &[u32], lam: LambdaMono) -> i64 {
    3 * g as i64 - 3 + psi.len() as i64 - psi.iter().map(|&a| a as i64).sum::<i64>() - lam.0 as i64 - 2 * lam.1 as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn known_values() {
        let t = HodgeTable::builtin();
        assert_eq!(t.integral(0, &[0, 0, 0], (0, 0)).unwrap(), qi(1));
        assert_eq!(t.integral(0, &[2, 0, 0, 0, 0], (0, 0)).unwrap(), qi(1));
        assert_eq!(t.integral(0, &[1, 1, 1, 0, 0, 0], (0, 0)).unwrap(), qi(6));
        assert_eq!(t.integral(1, &[1], (0, 0)).unwrap(), q(1, 24));
        assert_eq!(t.integral(2, &[4], (0, 0)).unwrap(), q(1, 1152));
        assert_eq!(t.integral(2, &[], (3, 0)).unwrap(), q(1, 2880));
        assert_eq!(t.integral(2, &[3], (1, 0)).unwrap(), q(1, 480));
        // λ_g formula in genus two
        assert_eq!(t.integral(2, &[2], (0, 1)).unwrap(), q(7, 5760));
        assert_eq!(t.integral(2, &[2, 2, 0, 0], (1, 1)).unwrap(), q(1, 360));
        // outside the dimension: zero, not an error
        assert_eq!(t.integral(2, &[3], (0, 0)).unwrap(), qi(0));
    }

    #[test]
    fn string_and_dilaton_hold_on_the_table() {
        let t = HodgeTable::builtin();
        let mut checked = 0;
        for (g, psi, lam, v) in t.entries() {
            if psi.iter().any(|&a| a <= 1) && stable(g, psi.len() - 1) {
                assert_eq!(&t.reduce(g, psi, lam).unwrap(), v, "g={g} psi={psi:?} lam={lam:?}");
                checked += 1;
            }
        }
        assert!(checked > 50);
    }

    #[test]
    fn genus_one_lambda_formula() {
        let t = HodgeTable::builtin();
        // ∫_{M̄_{1,n}} λ₁ ψ^a = (n−1)!/Π a_i! · 1/24
        assert_eq!(t.integral(1, &[2, 0, 0], (1, 0)).unwrap(), q(1, 24));
        assert_eq!(t.integral(1, &[1, 1, 0], (1, 0)).unwrap(), q(2, 24));
        assert_eq!(t.integral(1, &[1, 1, 1, 0], (1, 0)).unwrap(), q(6, 24));
    }

    #[test]
    fn missing_entries_are_reported() {
        let t = HodgeTable::parse("0; 0,0,0; 0,0; 3; 1\n").unwrap();
        let e = t.integral(1, &[1], (0, 0)).unwrap_err();
        assert!(matches!(e, Error::MissingHodge(_)));
        assert!(HodgeTable::parse("0; 1,0,0; 0,0; 3; 1\n").is_err());
        assert!(HodgeTable::parse("0; 0,0; 0,0; 3; 1\n").is_err());
    }

    #[test]
    fn text_round_trip() {
        let t = HodgeTable::builtin();
        assert_eq!(HodgeTable::parse(&t.to_text()).unwrap(), t);
    }
}
