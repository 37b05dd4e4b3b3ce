//! Machine-checkable transcripts. Each certificate recomputes every value
//! it reports from the other modules; the verdict is the conjunction of
//! its step checks.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::casson::{casson_defect, casson_manifold, casson_surgery, CassonError};
use crate::dfloer::{brieskorn_family, chi_hf_red, d_manifold, DError, DValue};
use crate::knots::{alexander, KnotError, KnotSpec};
use crate::manifold::ManifoldExpr;
use crate::surgery::{build_brunnian, reduce, reduce_brunnian, ReduceOutcome, SurgeryError};
use crate::torelli::{
    assemble, infinity_norm_cap, norm_lower_bound_from_d, word_norm, Generator, TorelliError,
    TorelliWord,
};
use crate::{Integer, Poly};

/// Largest link size the finite-type checker evaluates by default.
pub const DEFAULT_MAX_N: u32 = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("d must be nonzero")]
    ZeroD,
    #[error("Casson invariant is not additive on the inputs (defect {defect}); the identity needs the Johnson-kernel case")]
    NonAdditiveCasson { defect: Integer },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Knot(#[from] KnotError),
    #[error(transparent)]
    D(#[from] DError),
    #[error(transparent)]
    Casson(#[from] CassonError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    Torelli(#[from] TorelliError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertificateKind {
    CayleyDiameter,
    CassonUnbounded,
    NoMorita,
    NotFiniteType,
    MoritaConsistency,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub claim: String,
    pub values: BTreeMap<String, String>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub params: BTreeMap<String, String>,
    pub steps: Vec<Step>,
    pub verdict: bool,
}

impl Certificate {
    fn new(kind: CertificateKind, params: &[(&str, String)]) -> Self {
        Self {
            kind,
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            steps: Vec::new(),
            verdict: true,
        }
    }

    fn step(&mut self, claim: impl Into<String>, values: &[(&str, String)], ok: bool) {
        self.steps.push(Step {
            claim: claim.into(),
            values: values.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            ok,
        });
        self.verdict &= ok;
    }

    fn assume(&mut self, claim: impl Into<String>) {
        self.step(claim, &[("status", "assumed".into())], true);
    }

    /// First value recorded under `key`, in step order.
    pub fn value(&self, key: &str) -> Option<&str> {
        self.steps.iter().find_map(|s| s.values.get(key)).map(String::as_str)
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(self).expect("certificate fields serialize")
    }

    /// Key-sorted JSON; identical certificates give identical bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("values serialize")
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(f, "{:?} ({})", self.kind, params.join(", "))?;
        for (i, s) in self.steps.iter().enumerate() {
            let values: Vec<String> = s.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(
                f,
                "  {:>2}. [{}] {}{}",
                i + 1,
                if s.ok { "ok" } else { "FAIL" },
                s.claim,
                if values.is_empty() { String::new() } else { format!(": {}", values.join(", ")) }
            )?;
        }
        write!(f, "verdict: {}", self.verdict)
    }
}

fn reduce_to_manifold(w: &TorelliWord) -> Result<ManifoldExpr, CertifyError> {
    let p = assemble(w, ManifoldExpr::Sphere)?;
    match reduce(&p)? {
        ReduceOutcome::Manifold { result, .. } => Ok(result),
        ReduceOutcome::Stuck { reason, .. } => Err(CertifyError::InvalidParameter(format!(
            "assembled presentation did not reduce: {reason}"
        ))),
    }
}

/// Infinite diameter of the Torelli Cayley graph for the generating set of
/// all separating twists and bounding pair maps: a Brieskorn sphere with
/// `d = -2n` needs at least `target` letters.
pub fn cayley_diameter(genus: u32, target: u64) -> Result<Certificate, CertifyError> {
    if genus < 2 {
        return Err(CertifyError::InvalidParameter(format!("genus must be at least 2, got {genus}")));
    }
    if target == 0 {
        return Err(CertifyError::InvalidParameter("target must be at least 1".into()));
    }
    let mut c = Certificate::new(
        CertificateKind::CayleyDiameter,
        &[("genus", genus.to_string()), ("target", target.to_string())],
    );
    let cap = infinity_norm_cap(genus);
    c.step(
        "every letter changes d by at most 2 ceil(floor(g/2)/2)",
        &[("cap", cap.to_string())],
        cap > 0,
    );
    // Smallest n with ceil(2n / cap) >= target.
    let n = (target - 1) * cap as u64 / 2 + 1;
    let n_i64 = i64::try_from(n).map_err(|_| CertifyError::InvalidParameter("target too large".into()))?;
    let rec = brieskorn_family(n_i64)?;
    let manifold = ManifoldExpr::surgery(rec.knot, 1).expect("nonzero");
    c.step(
        "Sigma(2, 4n+1, 8n+1) is +1 surgery on T(2, 4n+1)",
        &[("n", n.to_string()), ("knot", rec.knot.to_string()), ("manifold", manifold.to_string())],
        true,
    );
    c.assume("Sigma(2, 4n+1, 8n+1) is a Torelli surgery on S^3 along a genus g Heegaard surface");
    let d = d_manifold(&manifold)?;
    let expected = DValue::new(-2 * n_i64)?;
    c.step(
        "d = -2n from the gaps of the semigroup <2, 4n+1>",
        &[("d", d.to_string()), ("expected_d", expected.to_string())],
        d == expected && rec.d == d,
    );
    let bound = norm_lower_bound_from_d(d, genus)?;
    c.step(
        "any word realizing it has infinity-norm >= ceil(|d| / cap) >= target",
        &[("bound", bound.to_string()), ("target", target.to_string())],
        bound >= target,
    );
    Ok(c)
}

/// One separating twist produces `+1` surgery on the twist knot `K_N`,
/// whose Casson invariant is `N`, so no function of the word length bounds
/// the Casson invariant.
pub fn casson_unbounded(n: i64) -> Result<Certificate, CertifyError> {
    if n < 1 {
        return Err(CertifyError::InvalidParameter(format!("N must be at least 1, got {n}")));
    }
    let mut c = Certificate::new(CertificateKind::CassonUnbounded, &[("N", n.to_string())]);
    let k = KnotSpec::twist_family(n)?;
    let delta: Poly = alexander(&k);
    c.step(
        "K_N is the genus one double twist knot D(1, N)",
        &[("knot", k.to_string()), ("alexander", delta.to_string())],
        true,
    );
    let word = TorelliWord::new(2, vec![(Generator::sep_realized(1, k, 0), -1)]);
    let manifold = reduce_to_manifold(&word)?;
    let expected = ManifoldExpr::surgery(k, 1).expect("nonzero");
    c.step(
        "a single separating twist along K_N gives S^3_{+1}(K_N)",
        &[("word", word.to_string()), ("manifold", manifold.to_string())],
        manifold == expected,
    );
    let norm = word_norm(&word);
    c.step("the word has length 1", &[("norm", norm.to_string())], norm == 1);
    let lambda = casson_manifold(&manifold)?;
    c.step(
        "lambda(S^3_{+1}(K_N)) = N",
        &[("lambda", lambda.to_string()), ("expected_lambda", n.to_string())],
        lambda == Integer::from(n),
    );
    c.step(
        "any f with |lambda| <= f(norm) needs f(1) >= N",
        &[("f_of_1_at_least", lambda.to_string())],
        lambda >= Integer::from(n),
    );
    Ok(c)
}

/// Two Torelli pairs related by a homeomorphism of the surface with
/// different Casson defects against a power of a nonseparating twist.
pub fn no_morita(d: i64) -> Result<Certificate, CertifyError> {
    if d == 0 {
        return Err(CertifyError::ZeroD);
    }
    let mut c = Certificate::new(CertificateKind::NoMorita, &[("d", d.to_string())]);
    c.assume("curves C, K, L: a homeomorphism of S fixes C and sends K to L");
    c.assume("K and L are separating; C is nonseparating and unknotted; K = P(1,1,1), L = U");
    c.assume("all the Seifert framings agree with the surface framings");
    c.assume("Pushing C off of S has linking number 0 with each of K and L");
    c.assume("-1/d surgery on the pushed-off C turns K into P(1,1,1+2d) and keeps L unknotted");

    let k = KnotSpec::pretzel(1, 1, 1)?;
    let k_d = KnotSpec::pretzel(1, 1, 1 + 2 * d)?;
    let t23 = KnotSpec::torus(2, 3)?;
    c.step(
        "P(1,1,1) = T(2,3), so S^3_psi = S^3_{+1}(P(1,1,1)) = Sigma(2,3,5)",
        &[("canonical", k.canonical().to_string())],
        k.canonical() == t23,
    );
    let lam_psi = casson_surgery(&k, 1)?;
    let lam_eta = casson_surgery(&KnotSpec::unknot(), 1)?;
    let lam_phi = Integer::zero();
    let lam_psi_phi = casson_surgery(&k_d, 1)?;
    let lam_eta_phi = casson_surgery(&KnotSpec::unknot(), 1)?;
    c.step("lambda(S^3_psi) = 1", &[("lambda_psi", lam_psi.to_string())], lam_psi == Integer::from(1));
    c.step(
        "S^3_eta = S^3_{phi^d} = S^3",
        &[("lambda_eta", lam_eta.to_string()), ("lambda_phi_d", lam_phi.to_string())],
        lam_eta.is_zero(),
    );

    let seifert: Poly = alexander(&k_d);
    let expected_delta = Poly::from_coeffs(-1, &[d + 1, -(2 * d + 1), d + 1]);
    c.step(
        "Alexander polynomial of P(1,1,1+2d) from its Seifert matrix",
        &[("alexander", seifert.to_string())],
        seifert == expected_delta,
    );
    let a = d.abs();
    let alternative = if d >= 0 {
        Poly::from_coeffs(-1, &[d, -(2 * d - 1), d])
    } else {
        Poly::from_coeffs(-1, &[a, -(2 * a + 1), a])
    };
    let alt_lambda: Integer = alternative.second_derivative_at_one() / 2;
    c.step(
        "flag: the alternative form d t - (2d-1) + d t^-1 (|d| t - (2|d|+1) + |d| t^-1 for d < 0) disagrees with the Seifert-matrix polynomial; the Seifert-matrix value is used",
        &[
            ("alternative_alexander", alternative.to_string()),
            ("alternative_at_one", alternative.eval_at_one().to_string()),
            ("alternative_lambda", alt_lambda.to_string()),
            ("discrepancy", (alternative != seifert).to_string()),
        ],
        true,
    );
    c.step(
        "lambda(S^3_{psi phi^d}) = lambda(S^3_{+1}(P(1,1,1+2d))) = d + 1",
        &[("lambda_psi_phi_d", lam_psi_phi.to_string())],
        lam_psi_phi == Integer::from(d + 1),
    );
    c.step(
        "S^3_{eta phi^d} = S^3_{+1}(U) = S^3",
        &[("lambda_eta_phi_d", lam_eta_phi.to_string())],
        lam_eta_phi.is_zero(),
    );
    let defect_psi = casson_defect(&lam_psi_phi, &lam_psi, &lam_phi);
    let defect_eta = casson_defect(&lam_eta_phi, &lam_eta, &lam_phi);
    c.step(
        "defects: psi side = d, eta side = 0",
        &[("defect_psi", defect_psi.to_string()), ("defect_eta", defect_eta.to_string())],
        defect_psi == Integer::from(d) && defect_eta.is_zero(),
    );
    let diff = &defect_psi - &defect_eta;
    c.step(
        "the defects differ although the pairs are conjugate",
        &[("defect_difference", diff.to_string())],
        !diff.is_zero(),
    );
    Ok(c)
}

/// Order `n - 1` alternating sum of `d` over sublinks of the Brunnian link
/// `L_n` with all framings `+1`. A nonzero sum shows `d` is not a
/// finite-type invariant of order `n - 1`.
pub fn not_finite_type(n: u32, max_n: u32) -> Result<Certificate, CertifyError> {
    if n < 4 {
        return Err(CertifyError::InvalidParameter(format!("n must be at least 4, got {n}")));
    }
    if n > max_n {
        return Err(CertifyError::InvalidParameter(format!("n = {n} exceeds the limit {max_n}; raise --max-n")));
    }
    let mut c = Certificate::new(CertificateKind::NotFiniteType, &[("n", n.to_string())]);
    let link = build_brunnian(n)?;
    c.step(
        "L_n: Borromean rings with one component Bing doubled n - 3 times, framings +1, linking numbers 0",
        &[("components", link.len().to_string())],
        link.len() == n as usize && link.linking_matrix().off_diagonal_zero(),
    );
    let ids = link.ids();
    let full_mask = (1u64 << n) - 1;
    let mut sum = Integer::zero();
    let mut nonzero_proper = 0u64;
    let mut full_d = DValue::ZERO;
    let mut full_manifold = ManifoldExpr::Sphere;
    for mask in 0..=full_mask {
        let keep: Vec<u32> = (0..n as usize).filter(|i| mask >> i & 1 == 1).map(|i| ids[i]).collect();
        let manifold = if keep.is_empty() { ManifoldExpr::Sphere } else { reduce_brunnian(&link.sublink(&keep))? };
        let d = d_manifold(&manifold)?;
        if mask == full_mask {
            full_d = d;
            full_manifold = manifold;
        } else if d != DValue::ZERO {
            nonzero_proper += 1;
        }
        let sign = if keep.len().is_multiple_of(2) { 1 } else { -1 };
        sum += Integer::from(sign * d.get());
    }
    c.step(
        "every proper sublink is an unlink, so its surgery is S^3 with d = 0",
        &[("proper_terms", full_mask.to_string()), ("nonzero_proper_terms", nonzero_proper.to_string())],
        nonzero_proper == 0,
    );
    let wh = KnotSpec::whitehead_iterate(n - 3);
    let expected = ManifoldExpr::surgery(wh, 1).expect("nonzero");
    c.step(
        "S^3_Lambda(L_n) = S^3_{+1}(Wh^(n-3)(T(2,3)))",
        &[("manifold", full_manifold.to_string()), ("d_full", full_d.to_string())],
        full_manifold == expected && full_d.get() == -2,
    );
    let sign_full = if n.is_multiple_of(2) { 1 } else { -1 };
    c.step(
        "sum over L' of (-1)^|L'| d(S^3_Lambda|L'(L')) is nonzero",
        &[("alternating_sum", sum.to_string())],
        sum == Integer::from(-2 * sign_full),
    );
    let lambda_full = casson_manifold(&full_manifold)?;
    let chi_full = chi_hf_red(&lambda_full, full_d);
    let chi_sum: Integer = &chi_full * Integer::from(sign_full);
    c.step(
        "companion: lambda = 0 since the Whitehead double has trivial Alexander polynomial, so chi(HF_red) of the full surgery is d/2 and the chi sum is nonzero",
        &[
            ("lambda_full", lambda_full.to_string()),
            ("chi_full", chi_full.to_string()),
            ("chi_alternating_sum", chi_sum.to_string()),
        ],
        lambda_full.is_zero() && !chi_sum.is_zero(),
    );
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantPair {
    pub lambda: Integer,
    pub d: DValue,
}

impl InvariantPair {
    pub fn of(m: &ManifoldExpr) -> Result<Self, CertifyError> {
        Ok(Self { lambda: casson_manifold(m)?, d: d_manifold(m)? })
    }
}

/// Checks `d_ab - d_a - d_b = 2(chi_ab - chi_a - chi_b)` for a composite
/// `ab` whose Casson invariant is additive.
pub fn morita_consistency(
    ab: &InvariantPair,
    a: &InvariantPair,
    b: &InvariantPair,
) -> Result<Certificate, CertifyError> {
    let defect = casson_defect(&ab.lambda, &a.lambda, &b.lambda);
    if !defect.is_zero() {
        return Err(CertifyError::NonAdditiveCasson { defect });
    }
    let show = |p: &InvariantPair| format!("({}, {})", p.lambda, p.d);
    let mut c = Certificate::new(
        CertificateKind::MoritaConsistency,
        &[("ab", show(ab)), ("a", show(a)), ("b", show(b))],
    );
    c.step("Casson defect vanishes", &[("defect", defect.to_string())], true);
    let chi = |p: &InvariantPair| chi_hf_red(&p.lambda, p.d);
    let (chi_ab, chi_a, chi_b) = (chi(ab), chi(a), chi(b));
    let lhs = Integer::from(ab.d.get() - a.d.get() - b.d.get());
    let rhs = Integer::from(2) * (&chi_ab - &chi_a - &chi_b);
    c.step(
        "d_ab - d_a - d_b = 2(chi_ab - chi_a - chi_b)",
        &[
            ("chi_a", chi_a.to_string()),
            ("chi_ab", chi_ab.to_string()),
            ("chi_b", chi_b.to_string()),
            ("lhs", lhs.to_string()),
            ("rhs", rhs.to_string()),
        ],
        lhs == rhs,
    );
    Ok(c)
}

/// [`morita_consistency`] for gluings with disjoint support, where the
/// composite is the connected sum of the pieces.
pub fn morita_consistency_split(a: &ManifoldExpr, b: &ManifoldExpr) -> Result<Certificate, CertifyError> {
    let ab = ManifoldExpr::sum([a.clone(), b.clone()]);
    let mut c = morita_consistency(&InvariantPair::of(&ab)?, &InvariantPair::of(a)?, &InvariantPair::of(b)?)?;
    c.params.insert("manifold_a".into(), a.to_string());
    c.params.insert("manifold_b".into(), b.to_string());
    Ok(c)
}
