//! The worked cases. Expected values carry a short note on how they were
//! obtained by hand; nothing here is produced by the engine.

use serde::Serialize;
use serde_json::{json, Value};

pub use super::families::Family;
use super::report::CaseKind;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expectation {
    /// A verdict field: `omega_zero`, `frob_surjective`, `frob_injective`,
    /// `frob_iso`, `flatness` or `summary`.
    pub field: String,
    pub value: Value,
    pub basis: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CaseSpec {
    /// Classify a map (or the structure map of a ring) of the source.
    Map { map: String },
    /// Family checks, plus classification of `map` when present.
    Family { family: Family, map: Option<String> },
    /// `f: R -> A` base changed along `g: R -> C`.
    BaseChange { map: String, along: String },
    /// `first` followed by `second`.
    Composition { first: String, second: String },
    /// Random normal-form and membership checks in a ring of the source.
    SelfCheck { ring: String, count: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusCase {
    pub name: String,
    pub source: String,
    pub spec: CaseSpec,
    pub expected: Vec<Expectation>,
}

impl CorpusCase {
    pub fn kind(&self) -> CaseKind {
        match self.spec {
            CaseSpec::Map { .. } => CaseKind::Map,
            CaseSpec::Family { .. } => CaseKind::Family,
            CaseSpec::BaseChange { .. } | CaseSpec::Composition { .. } => CaseKind::Stability,
            CaseSpec::SelfCheck { .. } => CaseKind::SelfCheck,
        }
    }
}

fn exp(field: &str, value: Value, basis: &str) -> Expectation {
    Expectation {
        field: field.into(),
        value,
        basis: basis.into(),
    }
}

const ETALE: &str = "formally étale, pre-pristine";
const UNRAMIFIED: &str = "formally unramified, not formally étale";
const RAMIFIED: &str = "not formally unramified";

fn etale(basis: &str) -> Vec<Expectation> {
    vec![
        exp("omega_zero", json!(true), basis),
        exp("frob_surjective", json!(true), basis),
        exp("frob_injective", json!(true), basis),
        exp("frob_iso", json!(true), basis),
        exp("summary", json!(ETALE), basis),
    ]
}

fn ramified(basis: &str) -> Vec<Expectation> {
    vec![
        exp("omega_zero", json!(false), basis),
        exp("frob_surjective", json!(false), basis),
        exp("frob_iso", json!(false), basis),
        exp("summary", json!(RAMIFIED), basis),
    ]
}

fn with(mut v: Vec<Expectation>, extra: Expectation) -> Vec<Expectation> {
    v.push(extra);
    v
}

fn map_case(name: &str, source: &str, map: &str, expected: Vec<Expectation>) -> CorpusCase {
    CorpusCase {
        name: name.into(),
        source: source.into(),
        spec: CaseSpec::Map { map: map.into() },
        expected,
    }
}

fn map_cases() -> Vec<CorpusCase> {
    let flat_free = |b: &str| exp("flatness", json!("flat"), b);
    let mut v = vec![
        map_case(
            "artin-schreier/p=3",
            "prime 3\nring R = [u]\nring A = R[x] / (x^3 - x - u)\n",
            "A",
            with(
                etale("d/dx (x^3 - x - u) = -1 is a unit"),
                flat_free("free on 1, x, x^2"),
            ),
        ),
        map_case(
            "artin-schreier/p=2",
            "prime 2\nring R = [u]\nring A = R[x] / (x^2 + x + u)\n",
            "A",
            with(etale("d/dx (x^2 + x + u) = 1"), flat_free("free on 1, x")),
        ),
        map_case(
            "etale-localization/p=3",
            "prime 3\nring R = [u, v] / (u*v - 1)\nring A = R[x] / (x^2 - u)\n",
            "A",
            etale("d/dx (x^2 - u) = 2x and x^2 = u is a unit"),
        ),
        map_case(
            "localization/p=3",
            "prime 3\nring R = [u]\nring L = invert u in R\n",
            "L",
            etale("d(u_inv) = -u_inv^2 du and u_inv = u^(p-1) u_inv^p"),
        ),
        map_case(
            "separable-field/p=2",
            "prime 2\nring A = [x] / (x^2 + x + 1)\n",
            "A",
            with(etale("F_4 is separable over F_2"), flat_free("vector space over a field")),
        ),
        map_case(
            "split-etale/p=3",
            "prime 3\nring A = [x] / (x^3 - x)\n",
            "A",
            with(etale("x^3 - x has distinct roots 0, 1, 2"), flat_free("vector space over a field")),
        ),
        map_case(
            "nested-etale/p=3",
            "prime 3\nring R = [u]\nring L = invert u in R\nring A = L[x] / (x^2 - u)\n",
            "A",
            etale("d/dx (x^2 - u) = 2x is a unit because u is"),
        ),
        map_case(
            "split-then-artin-schreier/p=3",
            "prime 3\nring A1 = [x] / (x^3 - x)\nring A2 = A1[y] / (y^3 - y - x)\n",
            "A2",
            with(etale("d/dy (y^3 - y - x) = -1"), flat_free("free on 1, y, y^2")),
        ),
        map_case(
            "polynomial/absolute/p=2",
            "prime 2\nring A = [x]\n",
            "A",
            with(
                ramified("dx is a free generator of the differentials"),
                exp("frob_injective", json!(true), "F_p[x] is reduced"),
            ),
        ),
        map_case(
            "polynomial/relative/p=3",
            "prime 3\nring R = [u]\nring A = R[x]\n",
            "A",
            with(
                ramified("dx is a free generator of the differentials"),
                exp("frob_injective", json!(true), "A ⊗ F_*R is a polynomial ring mapping onto A^p[u]"),
            ),
        ),
        map_case(
            "cusp/p=2",
            "prime 2\nring R = [u]\nring A = R[x] / (x^2 - u^3)\n",
            "A",
            with(ramified("d/dx (x^2 - u^3) = 0 in characteristic 2"), flat_free("free on 1, x")),
        ),
        map_case(
            "inseparable-root/p=3",
            "prime 3\nring R = [u]\nring A = R[x] / (x^3 - u)\n",
            "A",
            with(ramified("d/dx (x^3 - u) = 0 in characteristic 3"), flat_free("free on 1, x, x^2")),
        ),
        map_case(
            "dual-numbers/p=2",
            "prime 2\nring A = [x] / (x^2)\n",
            "A",
            with(ramified("d(x^2) = 2x dx = 0, so dx is free"), flat_free("vector space over a field")),
        ),
        map_case(
            "quadratic/p=5",
            "prime 5\nring R = [u]\nring A = R[x] / (x^2 - u)\n",
            "A",
            with(
                ramified("dx is killed by 2x only, and x is not a unit"),
                flat_free("free on 1, x"),
            ),
        ),
        map_case(
            "fat-line/p=3",
            "prime 3\nring R = [u]\nring A = R[x] / (x^2)\n",
            "A",
            with(ramified("dx is killed by 2x only, and x is nilpotent"), flat_free("free on 1, x")),
        ),
    ];
    for p in [2u64, 3] {
        v.push(map_case(
            &format!("closed-immersion/p={p}"),
            &format!("prime {p}\nring R = [u]\nring A = R[] / (u)\n"),
            "A",
            vec![
                exp("omega_zero", json!(true), "surjections have zero differentials"),
                exp("frob_surjective", json!(true), "A is a quotient of R"),
                exp("frob_injective", json!(false), "A ⊗ F_*R = F_p[u']/(u'^p) and u' maps to 0"),
                exp("frob_iso", json!(false), "the kernel contains u'"),
                exp("flatness", json!("not-flat"), "F_p[u]/(u) has u-torsion"),
                exp("summary", json!(UNRAMIFIED), "unramified without being injective"),
            ],
        ));
        v.push(map_case(
            &format!("frobenius-twist/p={p}"),
            &format!("prime {p}\nring R = [u]\nring S = [s]\nmap f : R -> S {{ u -> s^{p} }}\n"),
            "f",
            with(
                ramified("ds is free because d(s^p) = 0"),
                flat_free("free on 1, s, ..., s^(p-1)"),
            ),
        ));
    }
    v
}

fn family_cases() -> Vec<CorpusCase> {
    let mut v = Vec::new();
    for n in 1..=6 {
        v.push(CorpusCase {
            name: format!("dyadic-root-tower/N={n}"),
            source: String::new(),
            spec: CaseSpec::Family {
                family: Family::DyadicRoot { n },
                map: None,
            },
            expected: Vec::new(),
        });
    }
    for p in [2u64, 3] {
        for n in 1..=6 {
            v.push(CorpusCase {
                name: format!("p-root-tower/p={p},N={n}"),
                source: String::new(),
                spec: CaseSpec::Family {
                    family: Family::PRoot { p, n },
                    map: None,
                },
                expected: Vec::new(),
            });
        }
    }
    for i in 0..=2u32 {
        for n in 1..=2u32 {
            let k = 1 << i;
            let vars: Vec<String> = (1..=k).map(|j| format!("y{j}")).collect();
            let rels: Vec<String> = vars.iter().map(|y| format!("{y}^{}", 2u64.pow(n))).collect();
            v.push(CorpusCase {
                name: format!("paired-root-tower/i={i},N={n}"),
                source: format!("prime 2\nring A = [{}] / ({})\n", vars.join(", "), rels.join(", ")),
                spec: CaseSpec::Family {
                    family: Family::PairedRoot { p: 2, i, n },
                    map: Some("A".into()),
                },
                expected: vec![
                    exp("omega_zero", json!(false), "d(y^(2^N)) = 0, so each dy_j is free"),
                    exp("frob_surjective", json!(false), "y_1 has no preimage in F_2[y^2]"),
                    exp("frob_injective", json!(false), "y_1^(2^(N-1)) is nonzero with zero square"),
                    exp("summary", json!(RAMIFIED), "differentials are nonzero"),
                ],
            });
        }
    }
    for (p, nmax) in [(2u64, 3u32), (3, 3)] {
        for n in 1..=nmax {
            v.push(CorpusCase {
                name: format!("field-pbasis/p={p},N={n}"),
                source: format!(
                    "prime {p}\nring K = [t]\nring L = [s]\nmap f : K -> L {{ t -> s^{} }}\n",
                    p.pow(n)
                ),
                spec: CaseSpec::Family {
                    family: Family::FieldPBasis { p, n },
                    map: Some("f".into()),
                },
                expected: vec![
                    exp("omega_zero", json!(false), "ds is free because d(s^(p^N)) = 0"),
                    exp("frob_surjective", json!(false), "s is not in F_p[s^p]"),
                    exp(
                        "frob_injective",
                        json!(false),
                        "z^(p^(N-1)) - t' is a nonzero nilpotent of B killed by psi",
                    ),
                ],
            });
        }
    }
    v
}

fn stability_cases() -> Vec<CorpusCase> {
    let as3 = "prime 3\nring R = [u]\nring A = R[x] / (x^3 - x - u)\n";
    let base_change = |name: &str, source: String, map: &str, along: &str| CorpusCase {
        name: format!("stability/base-change/{name}"),
        source,
        spec: CaseSpec::BaseChange {
            map: map.into(),
            along: along.into(),
        },
        expected: etale("étale maps are stable under base change"),
    };
    let composition = |name: &str, source: &str, first: &str, second: &str| CorpusCase {
        name: format!("stability/composition/{name}"),
        source: source.into(),
        spec: CaseSpec::Composition {
            first: first.into(),
            second: second.into(),
        },
        expected: etale("étale maps are stable under composition"),
    };
    vec![
        base_change(
            "artin-schreier@u=0",
            format!("{as3}ring C = []\nmap g : R -> C {{ u -> 0 }}\n"),
            "A",
            "g",
        ),
        base_change(
            "artin-schreier@u=1",
            format!("{as3}ring C = []\nmap g : R -> C {{ u -> 1 }}\n"),
            "A",
            "g",
        ),
        base_change(
            "artin-schreier@u=w^2",
            format!("{as3}ring C = [w]\nmap g : R -> C {{ u -> w^2 }}\n"),
            "A",
            "g",
        ),
        base_change(
            "artin-schreier/p=2@u=0",
            "prime 2\nring R = [u]\nring A = R[x] / (x^2 + x + u)\nring C = []\nmap g : R -> C { u -> 0 }\n".into(),
            "A",
            "g",
        ),
        base_change(
            "etale-localization@(1,1)",
            "prime 3\nring R = [u, v] / (u*v - 1)\nring A = R[x] / (x^2 - u)\nring C = []\nmap g : R -> C { u -> 1, v -> 1 }\n"
                .into(),
            "A",
            "g",
        ),
        base_change(
            "localization@u=s^2",
            "prime 3\nring R = [u]\nring L = invert u in R\nring C = [s]\nmap g : R -> C { u -> s^2 }\n".into(),
            "L",
            "g",
        ),
        base_change(
            "separable-field@line",
            "prime 2\nring K = []\nring A = K[x] / (x^2 + x + 1)\nring C = [t]\nmap g : K -> C { }\n".into(),
            "A",
            "g",
        ),
        composition(
            "artin-schreier-twice",
            "prime 3\nring R = [u]\nring A1 = R[x] / (x^3 - x - u)\nring A2 = A1[y] / (y^3 - y - x)\n",
            "A1",
            "A2",
        ),
        composition(
            "localize-then-adjoin-root",
            "prime 3\nring R = [u]\nring L = invert u in R\nring A = L[x] / (x^2 - u)\n",
            "L",
            "A",
        ),
        composition(
            "split-then-separable",
            "prime 3\nring K = []\nring A = K[x] / (x^3 - x)\nring B = A[y] / (y^2 - 2)\n",
            "A",
            "B",
        ),
        composition(
            "separable-then-split",
            "prime 2\nring K = []\nring A = K[x] / (x^2 + x + 1)\nring B = A[y] / (y^2 + y)\n",
            "A",
            "B",
        ),
    ]
}

/// Number of random instances per self-check case.
pub const SELF_CHECK_COUNT: usize = 1000;

fn self_check_cases(maps: &[CorpusCase]) -> Vec<CorpusCase> {
    let mut seen: Vec<String> = Vec::new();
    let mut out = Vec::new();
    for case in maps {
        let CaseSpec::Map { map } = &case.spec else { continue };
        // The map cases name either a ring (its structure map) or `f`,
        // whose target is declared last.
        let ring = if map == "f" { "S".to_string() } else { map.clone() };
        let key = format!("{}::{ring}", case.source);
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        out.push(CorpusCase {
            name: format!("self-check/{}", case.name),
            source: case.source.clone(),
            spec: CaseSpec::SelfCheck {
                ring,
                count: SELF_CHECK_COUNT,
            },
            expected: Vec::new(),
        });
    }
    out
}

/// Every case, sorted by name.
pub fn corpus() -> Vec<CorpusCase> {
    let maps = map_cases();
    let mut all = self_check_cases(&maps);
    all.extend(maps);
    all.extend(family_cases());
    all.extend(stability_cases());
    all.sort_by(|a, b| a.name.cmp(&b.name));
    all
}
