//! Reference leading terms of the effective channels, kept as literal data,
//! and a term-by-term comparison against computed polynomials.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::codes::{CodeName, StabilizerCode};
use crate::effective::{ChannelPolys, ExactPoly};
use crate::error::{Error, Result};
use crate::pauli::{enumerate_paulis, Pauli, PauliString};
use crate::recovery::{logical_action_unchecked, syndrome_unchecked};

const STEANE: [&str; 4] = [
    "p1^7 + 7 p1^6 p2 + 7 p1^6 p3 + 7 p1^6 p4 + 3 p1^5 p2 p3 + 19 p1^5 p3 p4 + 20 p1^5 p2 p4",
    "p2^7 + 7 p1 p2^6 + 7 p2^6 p3 + 7 p2^6 p4 + 3 p1 p2^5 p4 + 19 p2^5 p3 p4 + 20 p1 p2^5 p3",
    "p3^7 + 7 p1 p3^6 + 7 p2 p3^6 + 7 p3^6 p4 + 3 p1 p3^5 p4 + 19 p1 p2 p3^5 + 20 p2 p3^5 p4",
    "p4^7 + 7 p1 p4^6 + 7 p2 p4^6 + 7 p3 p4^6 + 3 p2 p3 p4^5 + 19 p1 p2 p4^5 + 20 p1 p3 p4^5",
];

const FIVE_I: [&str; 4] = [
    "p1^5 + 5 p1^4 p2 + 5 p1^4 p3 + 5 p1^4 p4 + 10 p1^2 p2^2 p3 + 10 p1^2 p2 p3^2 + 10 p1^2 p2^2 p4 \
     + 10 p1^2 p2 p4^2 + 10 p1^2 p3^2 p4 + 10 p1^2 p3 p4^2",
    "p2^5 + 5 p1 p2^4 + 5 p2^4 p3 + 5 p2^4 p4 + 10 p1^2 p2^2 p3 + 10 p1 p2^2 p3^2 + 10 p1^2 p2^2 p4 \
     + 10 p1 p2^2 p4^2 + 10 p2^2 p3^2 p4 + 10 p2^2 p3 p4^2",
    "p3^5 + 5 p1 p3^4 + 5 p2 p3^4 + 5 p3^4 p4 + 10 p1^2 p2 p3^2 + 10 p1 p2^2 p3^2 + 10 p1^2 p3^2 p4 \
     + 10 p1 p3^2 p4^2 + 10 p2^2 p3^2 p4 + 10 p2 p3^2 p4^2",
    "p4^5 + 5 p1 p4^4 + 5 p2 p4^4 + 5 p3 p4^4 + 10 p1^2 p2 p4^2 + 10 p1 p2^2 p4^2 + 10 p1^2 p3 p4^2 \
     + 10 p1 p3^2 p4^2 + 10 p2^2 p3 p4^2 + 10 p2 p3^2 p4^2",
];

const NINE_I: &str = "p1^9 + 9 p1^8 p2 + 9 p1^8 p3 + 9 p1^8 p4 + 9 p1^7 p4^2 + 18 p1^7 p3 p4 + 27 p1^7 p2^2 \
     + 27 p1^7 p3^2 + 54 p1^7 p2 p3 + 72 p1^7 p2 p4";
const NINE_X: &str = "p2^9 + 9 p1 p2^8 + 9 p2^8 p3 + 9 p2^8 p4 + 9 p2^7 p3^2 + 18 p2^7 p3 p4 + 27 p1^2 p2^7 \
     + 27 p2^7 p4^2 + 54 p1 p2^7 p4 + 72 p1 p2^7 p3";
const NINE_Y: &str = "p3^9 + 9 p1 p3^8 + 9 p2 p3^8 + 9 p3^8 p4 + 9 p2^2 p3^7 + 18 p1 p2 p3^7 + 27 p1^2 p3^7 \
     + 27 p3^7 p4^2 + 54 p1 p3^7 p4 + 72 p2 p3^7 p4";
const NINE_Z: &str = "p4^9 + 9 p1 p4^8 + 9 p2 p4^8 + 9 p3 p4^8 + 9 p1^2 p4^7 + 18 p1 p2 p4^7 + 27 p2^2 p4^7 \
     + 27 p3^2 p4^7 + 54 p2 p3 p4^7 + 72 p1 p3 p4^7";

const FIVE_II: [&str; 4] = [
    "p1^5 + p4^5 + 5 p1^4 p2 + 5 p1^4 p3 + 5 p1^4 p4 + p1 p4^4 + p2 p4^4 + p3 p4^4",
    "4 p2^4 p3",
    "p2^5 + p3^5 + 5 p1 p3^4 + 5 p2 p3^4 + 5 p3^4 p4 + p1 p2^4 + p2^4 p3 + p2^4 p4",
    "4 p1 p4^4",
];

/// Reference terms for one code.
#[derive(Clone, Debug)]
pub struct PrintedTerms {
    pub code: CodeName,
    pub polys: [ExactPoly; 4],
    /// When set, the reference is complete on channels supported on these
    /// labels: any other computed term over them must vanish.
    pub complete_on: Option<Vec<Pauli>>,
}

/// Parses `c p1^a p2^b + ...` into a polynomial of the given degree.
pub fn parse_poly(degree: u8, s: &str) -> Result<ExactPoly> {
    let mut poly = ExactPoly::new(degree);
    for term in s.split('+').map(str::trim).filter(|t| !t.is_empty()) {
        let mut coeff = 1u64;
        let mut exps = [0u8; 4];
        for (i, tok) in term.split_whitespace().enumerate() {
            if i == 0 {
                if let Ok(c) = tok.parse::<u64>() {
                    coeff = c;
                    continue;
                }
            }
            let (var, pow) = match tok.split_once('^') {
                Some((v, p)) => (v, p.parse::<u8>().map_err(|e| Error::Parse(format!("{tok:?}: {e}")))?),
                None => (tok, 1),
            };
            let idx = match var {
                "p1" => 0,
                "p2" => 1,
                "p3" => 2,
                "p4" => 3,
                _ => return Err(Error::Parse(format!("unknown variable {var:?}"))),
            };
            exps[idx] += pow;
        }
        if exps.iter().map(|e| *e as u32).sum::<u32>() != degree as u32 {
            return Err(Error::Parse(format!("term {term:?} is not of degree {degree}")));
        }
        poly.add(exps, coeff);
    }
    Ok(poly)
}

pub fn printed_terms(code: CodeName) -> PrintedTerms {
    let (n, src, complete_on): (u8, [&str; 4], _) = match code {
        CodeName::ThreeQubit => (3, ["p1^3 + 3 p1^2 p2", "p2^3 + 3 p1 p2^2", "", ""], Some(vec![Pauli::I, Pauli::X])),
        CodeName::Steane => (7, STEANE, None),
        CodeName::FiveI => (5, FIVE_I, None),
        CodeName::NineA | CodeName::NineB => (9, [NINE_I, NINE_X, NINE_Y, NINE_Z], None),
        CodeName::Shor => (9, [NINE_I, NINE_Z, NINE_Y, NINE_X], None),
        CodeName::FiveIi => (5, FIVE_II, None),
    };
    let polys = src.map(|s| parse_poly(n, s).expect("reference data is well formed"));
    PrintedTerms { code, polys, complete_on }
}

/// Which logical class each syndrome's recovery could be assigned by a
/// minimum-weight decoder, and the class of every error relative to a fixed
/// representative of its syndrome.
pub struct ChoiceAnalysis {
    n: usize,
    syndromes: Vec<u32>,
    relative: Vec<Pauli>,
    attainable: Vec<Vec<Pauli>>,
}

impl ChoiceAnalysis {
    pub fn new(code: &StabilizerCode) -> Result<Self> {
        let size = 1usize << code.generators.len();
        let mut reps = vec![None; size];
        let mut min_weight = vec![usize::MAX; size];
        let mut syndromes = Vec::with_capacity(1 << (2 * code.n));
        for e in enumerate_paulis(code.n)? {
            let s = syndrome_unchecked(code, &e).index();
            syndromes.push(s as u32);
            if reps[s].is_none() {
                reps[s] = Some(e);
            }
            min_weight[s] = min_weight[s].min(e.weight());
        }
        let mut relative = Vec::with_capacity(syndromes.len());
        let mut attainable = vec![Vec::new(); size];
        for (e, s) in enumerate_paulis(code.n)?.zip(&syndromes) {
            let s = *s as usize;
            let rep = reps[s].expect("every syndrome seen");
            let class = logical_action_unchecked(code, &rep.multiply(&e)?);
            relative.push(class);
            if e.weight() == min_weight[s] && !attainable[s].contains(&class) {
                attainable[s].push(class);
            }
        }
        Ok(Self { n: code.n, syndromes, relative, attainable })
    }

    /// Smallest and largest total coefficient of `label` over the exponent
    /// tuples selected by `block`, across all minimum-weight tables.
    pub fn range(&self, label: Pauli, block: impl Fn(&[u8; 4]) -> bool) -> (u64, u64) {
        let mut counts = vec![[0u64; 4]; self.attainable.len()];
        for (k, (s, class)) in self.syndromes.iter().zip(&self.relative).enumerate() {
            let e = PauliString::from_lex_index(self.n, k as u64);
            if block(&e.letter_counts()) {
                counts[*s as usize][class.index()] += 1;
            }
        }
        let (mut lo, mut hi) = (0, 0);
        for (c, classes) in counts.iter().zip(&self.attainable) {
            // A recovery of relative class `r` sends class `c` to `r·c`.
            let values = classes.iter().map(|r| c[r.compose(label).index()]);
            lo += values.clone().min().unwrap_or(0);
            hi += values.max().unwrap_or(0);
        }
        (lo, hi)
    }

    pub fn depends(&self, label: Pauli, block: impl Fn(&[u8; 4]) -> bool) -> bool {
        let (lo, hi) = self.range(label, block);
        lo != hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Status {
    Match,
    Mismatch,
    NotPrinted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Match => "MATCH",
            Status::Mismatch => "MISMATCH",
            Status::NotPrinted => "NOT-PRINTED",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TermComparison {
    pub label: Pauli,
    pub exponents: [u8; 4],
    pub printed: Option<u64>,
    pub computed: u64,
    pub status: Status,
    pub choice_dependent: bool,
    /// Range of the coefficient over all minimum-weight tables.
    pub attainable: (u64, u64),
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureCheck {
    pub name: String,
    pub label: Pauli,
    pub printed: u64,
    pub computed: u64,
    pub passed: bool,
    pub choice_dependent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub code: CodeName,
    pub table_policy: String,
    pub terms: Vec<TermComparison>,
    pub checks: Vec<StructureCheck>,
}

impl Comparison {
    pub fn mismatches(&self) -> impl Iterator<Item = &TermComparison> {
        self.terms.iter().filter(|t| t.status == Status::Mismatch)
    }

    /// Mismatches that no minimum-weight table could remove.
    pub fn hard_mismatches(&self) -> impl Iterator<Item = &TermComparison> {
        self.mismatches().filter(|t| !t.choice_dependent)
    }

    pub fn all_match(&self) -> bool {
        self.mismatches().next().is_none() && self.checks.iter().all(|c| c.passed)
    }
}

fn monomial(exps: &[u8; 4]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(i, e)| if *e == 1 { format!("p{}", i + 1) } else { format!("p{}^{}", i + 1, e) })
        .collect();
    parts.join(" ")
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "code {} (table {})", self.code, self.table_policy)?;
        for t in &self.terms {
            let printed = t.printed.map(|p| p.to_string()).unwrap_or_else(|| "-".into());
            let note = if t.choice_dependent {
                format!(" [choice-dependent, {}..{}]", t.attainable.0, t.attainable.1)
            } else {
                String::new()
            };
            writeln!(
                f,
                "  {:<11} {}  {:<22} printed {:>4}  computed {:>4}{}",
                t.status.to_string(),
                t.label,
                monomial(&t.exponents),
                printed,
                t.computed,
                note
            )?;
        }
        for c in &self.checks {
            let note = if c.choice_dependent { " [choice-dependent]" } else { "" };
            writeln!(
                f,
                "  check {:<6} {} {:<28} printed {:>4}  computed {:>4}{}",
                if c.passed { "PASS" } else { "FAIL" },
                c.label,
                c.name,
                c.printed,
                c.computed,
                note
            )?;
        }
        Ok(())
    }
}

fn unit(n: usize, j: usize) -> [u8; 4] {
    let mut e = [0u8; 4];
    e[j] = n as u8;
    e
}

/// Compares `polys` against the reference terms of its code.
pub fn compare_printed(code: &StabilizerCode, polys: &ChannelPolys) -> Result<Comparison> {
    if polys.code != code.name {
        return Err(Error::Table(format!("polynomials belong to {}, not {}", polys.code, code.name)));
    }
    let reference = printed_terms(code.name);
    let choices = ChoiceAnalysis::new(code)?;
    let n = code.n;
    let allowed = |e: &[u8; 4]| match &reference.complete_on {
        Some(labels) => Pauli::ALL.iter().all(|l| labels.contains(l) || e[l.index()] == 0),
        None => true,
    };
    let mut terms = Vec::new();
    let mut checks = Vec::new();
    for label in Pauli::ALL {
        let printed = &reference.polys[label.index()];
        let computed = polys.get(label);
        // Leading window: for each variable that dominates a printed term,
        // every computed term at least that deep in it.
        let mut window: BTreeMap<usize, u8> = BTreeMap::new();
        for (e, _) in printed.terms() {
            let j = (0..4).max_by_key(|j| (e[*j], std::cmp::Reverse(*j))).expect("four slots");
            let m = window.entry(j).or_insert(e[j]);
            *m = (*m).min(e[j]);
        }
        let in_window = |e: &[u8; 4]| window.iter().any(|(j, m)| e[*j] >= *m);
        let mut tuples: Vec<[u8; 4]> = printed.terms().map(|(e, _)| e).collect();
        for (e, _) in computed.terms() {
            let extra = reference.complete_on.is_some() || in_window(&e);
            if allowed(&e) && extra && !tuples.contains(&e) {
                tuples.push(e);
            }
        }
        tuples.sort_by(|a, b| b.cmp(a));
        for e in tuples {
            let p = printed.coeff(e);
            let c = computed.coeff(e);
            let is_printed = printed.terms().any(|(t, _)| t == e);
            let status = if is_printed || reference.complete_on.is_some() {
                if p == c {
                    Status::Match
                } else {
                    Status::Mismatch
                }
            } else {
                Status::NotPrinted
            };
            let attainable = choices.range(label, |t| *t == e);
            terms.push(TermComparison {
                label,
                exponents: e,
                printed: is_printed.then_some(p),
                computed: c,
                status,
                choice_dependent: attainable.0 != attainable.1,
                attainable,
            });
        }
        for j in window.keys().copied() {
            if printed.coeff(unit(n, j)) == 0 {
                continue;
            }
            let var = format!("p{}", j + 1);
            let top = unit(n, j);
            checks.push(StructureCheck {
                name: format!("{var}^{n} coefficient"),
                label,
                printed: printed.coeff(top),
                computed: computed.coeff(top),
                passed: printed.coeff(top) == computed.coeff(top),
                choice_dependent: choices.depends(label, |t| *t == top),
            });
            let singles: Vec<[u8; 4]> = (0..4)
                .filter(|k| *k != j)
                .map(|k| {
                    let mut e = unit(n - 1, j);
                    e[k] = 1;
                    e
                })
                .filter(|e| allowed(e))
                .collect();
            let deg1_ok = singles.iter().all(|e| printed.coeff(*e) == computed.coeff(*e));
            checks.push(StructureCheck {
                name: format!("{var}^{} single terms", n - 1),
                label,
                printed: singles.iter().map(|e| printed.coeff(*e)).sum(),
                computed: singles.iter().map(|e| computed.coeff(*e)).sum(),
                passed: deg1_ok,
                choice_dependent: choices.depends(label, |t| singles.contains(t)),
            });
            let quad = |e: &[u8; 4]| e[j] as usize == n - 2 && allowed(e);
            let printed_quad: u64 = printed.terms().filter(|(e, _)| quad(e)).map(|(_, c)| c).sum();
            if printed_quad > 0 {
                let computed_quad: u64 = computed.terms().filter(|(e, _)| quad(e)).map(|(_, c)| c).sum();
                checks.push(StructureCheck {
                    name: format!("{var}^{} quadratic sum", n - 2),
                    label,
                    printed: printed_quad,
                    computed: computed_quad,
                    passed: printed_quad == computed_quad,
                    choice_dependent: choices.depends(label, quad),
                });
            }
        }
    }
    Ok(Comparison { code: code.name, table_policy: polys.table_policy.clone(), terms, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::get_code;
    use crate::effective::effective_polys;
    use crate::recovery::{build_table, Policy};

    fn compare(name: CodeName) -> Comparison {
        let code = get_code(name);
        let polys = effective_polys(code, &build_table(code, &Policy::default_for(name)).unwrap()).unwrap();
        compare_printed(code, &polys).unwrap()
    }

    #[test]
    fn parse_round_trip() {
        let p = parse_poly(3, "p1^3 + 3 p1^2 p2").unwrap();
        assert_eq!(p.coeff([2, 1, 0, 0]), 3);
        assert_eq!(p.to_string(), "p1^3 + 3 p1^2 p2");
        assert!(parse_poly(3, "p1^2").is_err());
        assert!(parse_poly(3, "p5^3").is_err());
    }

    #[test]
    fn reference_data_is_consistent() {
        for name in CodeName::ALL {
            let r = printed_terms(name);
            for (l, p) in Pauli::ALL.iter().zip(&r.polys) {
                assert!(p.coefficient_sum() > 0 || (name == CodeName::ThreeQubit && *l != Pauli::I && *l != Pauli::X));
            }
        }
        let steane = printed_terms(CodeName::Steane);
        let quad: u64 = steane.polys[0].terms().filter(|(e, _)| e[0] == 5).map(|(_, c)| c).sum();
        assert_eq!(quad, 42);
        let nine = printed_terms(CodeName::NineA);
        let quad: u64 = nine.polys[0].terms().filter(|(e, _)| e[0] == 7).map(|(_, c)| c).sum();
        assert_eq!(quad, 9 * (1 + 2 + 3 + 3 + 6 + 8));
    }

    #[test]
    fn three_qubit_matches_fully() {
        let c = compare(CodeName::ThreeQubit);
        assert!(c.all_match(), "{c}");
        assert_eq!(c.terms.len(), 4);
    }

    #[test]
    fn five_i_printed_terms_match() {
        let c = compare(CodeName::FiveI);
        assert!(c.terms.iter().filter(|t| t.printed.is_some()).all(|t| t.status == Status::Match), "{c}");
        assert!(c.checks.iter().all(|k| k.passed && !k.choice_dependent));
        assert!(c.terms.iter().all(|t| !t.choice_dependent));
    }

    #[test]
    fn five_ii_printed_terms_match() {
        let c = compare(CodeName::FiveIi);
        assert!(c.all_match(), "{c}");
    }

    #[test]
    fn steane_split_is_choice_dependent() {
        let c = compare(CodeName::Steane);
        for k in &c.checks {
            assert!(k.passed, "{}", k.name);
        }
        let split: Vec<&TermComparison> = c.terms.iter().filter(|t| t.label == Pauli::I && t.exponents[0] == 5).collect();
        assert_eq!(split.len(), 3);
        assert!(split.iter().all(|t| t.computed == 14 && t.choice_dependent));
        assert!(c.hard_mismatches().next().is_none(), "{c}");
    }

    #[test]
    fn nine_qubit_structure() {
        for name in [CodeName::NineA, CodeName::NineB, CodeName::Shor] {
            let c = compare(name);
            let quad = c.checks.iter().find(|k| k.label == Pauli::I && k.name.contains("quadratic")).unwrap();
            assert_eq!((quad.printed, quad.computed), (207, 207), "{name}");
            for k in c.checks.iter().filter(|k| !k.name.contains("quadratic")) {
                assert!(k.passed, "{name} {}", k.name);
            }
        }
    }

    #[test]
    fn fewest_y_table_reproduces_nine_qubit_terms() {
        for name in [CodeName::NineA, CodeName::Shor] {
            let code = get_code(name);
            let polys = effective_polys(code, &build_table(code, &Policy::MinWeightFewestY).unwrap()).unwrap();
            let c = compare_printed(code, &polys).unwrap();
            assert!(c.all_match(), "{c}");
        }
    }

    #[test]
    fn nine_b_differs_structurally() {
        let c = compare(CodeName::NineB);
        let hard: Vec<_> = c.hard_mismatches().filter(|t| t.label == Pauli::I).map(|t| (t.exponents, t.computed)).collect();
        assert_eq!(hard, vec![([7, 2, 0, 0], 9), ([7, 0, 1, 1], 54), ([7, 0, 0, 2], 27)]);
    }

    #[test]
    fn choice_analysis_on_perfect_code() {
        let a = ChoiceAnalysis::new(get_code(CodeName::FiveI)).unwrap();
        assert!(a.attainable.iter().all(|v| v.len() == 1));
        let s = ChoiceAnalysis::new(get_code(CodeName::Steane)).unwrap();
        assert!(s.attainable.iter().any(|v| v.len() > 1));
    }
}
