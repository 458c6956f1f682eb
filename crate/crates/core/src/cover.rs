//! Intersection lattices of small surfaces and invariants of double covers.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{parse_poly, BiPoly, Direction, ExtField};
use crate::germ::chart::{tangent_directions, with_extra_points};
use crate::germ::{Germ, GermError, NamedKind, ResolutionConfig};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unknown lattice preset `{0}` (expected P2, P1xP1 or ExP1)")]
    UnknownPreset(String),
    #[error("lattice: {0}")]
    LatticeSource(String),
    #[error("branch singularity #{index}: {detail}")]
    BranchSource { index: usize, detail: String },
    #[error("branch singularity #{index}: {source}")]
    Germ { index: usize, source: GermError },
    #[error("the intersection form is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("the branch class {branch:?} is not twice L = {l:?}")]
    OddBranch { branch: Vec<i64>, l: Vec<i64> },
    #[error("branch singularity #{index}: k = {k} must be at least 1")]
    InvalidK { index: usize, k: i64 },
    #[error("branch singularity #{index}: `k` {given:?} differs from the computed {computed:?}")]
    KDisagreement { index: usize, given: Vec<i64>, computed: Vec<i64> },
    #[error("branch singularity #{index}: count {count} must be positive")]
    InvalidCount { index: usize, count: i64 },
    #[error("2 chi(O_S) = {twice} is odd; the branch data has the wrong parity")]
    NonIntegralResult { twice: i64 },
    #[error("chi(O_S) = {cover} from the cover, but 1 - q + p_g = {declared}")]
    ChiMismatch { cover: i64, declared: i64 },
}

impl CoverError {
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            CoverError::DimensionMismatch(_)
                | CoverError::UnknownPreset(_)
                | CoverError::LatticeSource(_)
                | CoverError::BranchSource { .. }
                | CoverError::Germ { .. }
        )
    }
}

/// Integral intersection form with a canonical class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceLattice {
    pub gram: Vec<Vec<i64>>,
    pub canonical_class: Vec<i64>,
    pub chi_o: i64,
    pub basis_labels: Vec<String>,
}

impl SurfaceLattice {
    pub fn new(
        gram: Vec<Vec<i64>>,
        canonical_class: Vec<i64>,
        chi_o: i64,
        basis_labels: Vec<String>,
    ) -> Result<Self, CoverError> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|row| row.len() != n) {
            return Err(CoverError::DimensionMismatch("the intersection form must be a nonempty square matrix".into()));
        }
        if canonical_class.len() != n || basis_labels.len() != n {
            return Err(CoverError::DimensionMismatch(format!(
                "rank {n} but {} canonical coordinates and {} labels",
                canonical_class.len(),
                basis_labels.len()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(CoverError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(SurfaceLattice { gram, canonical_class, chi_o, basis_labels })
    }

    pub fn projective_plane() -> Self {
        SurfaceLattice { gram: vec![vec![1]], canonical_class: vec![-3], chi_o: 1, basis_labels: vec!["H".into()] }
    }

    pub fn quadric() -> Self {
        SurfaceLattice {
            gram: vec![vec![0, 1], vec![1, 0]],
            canonical_class: vec![-2, -2],
            chi_o: 1,
            basis_labels: vec!["F1".into(), "F2".into()],
        }
    }

    /// `E × P¹` with `F1` the class of `E × pt` and `F2` that of `pt × P¹`.
    pub fn elliptic_ruled() -> Self {
        SurfaceLattice {
            gram: vec![vec![0, 1], vec![1, 0]],
            canonical_class: vec![-2, 0],
            chi_o: 0,
            basis_labels: vec!["F1".into(), "F2".into()],
        }
    }

    pub fn preset(name: &str) -> Result<Self, CoverError> {
        match name {
            "P2" => Ok(Self::projective_plane()),
            "P1xP1" => Ok(Self::quadric()),
            "ExP1" => Ok(Self::elliptic_ruled()),
            other => Err(CoverError::UnknownPreset(other.into())),
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// `uᵀ · gram · v`.
    pub fn pairing(&self, u: &[i64], v: &[i64]) -> Result<i64, CoverError> {
        let n = self.rank();
        if u.len() != n || v.len() != n {
            return Err(CoverError::DimensionMismatch(format!(
                "vectors of length {} and {} against rank {n}",
                u.len(),
                v.len()
            )));
        }
        Ok((0..n)
            .map(|i| (0..n).map(|j| u[i] * self.gram[i][j] * v[j]).sum::<i64>())
            .sum())
    }

    pub fn canonical_square(&self) -> i64 {
        self.pairing(&self.canonical_class, &self.canonical_class).unwrap()
    }

    /// Adds an exceptional class `E` with `E² = −1`, orthogonal to the old
    /// basis; `K` gains `+E`.
    pub fn blow_up(&self, label: &str) -> SurfaceLattice {
        let n = self.rank();
        let mut gram: Vec<Vec<i64>> = self.gram.iter().map(|r| {
            let mut r = r.clone();
            r.push(0);
            r
        }).collect();
        let mut last = vec![0; n + 1];
        last[n] = -1;
        gram.push(last);
        let mut canonical_class = self.canonical_class.clone();
        canonical_class.push(1);
        let mut basis_labels = self.basis_labels.clone();
        basis_labels.push(label.into());
        SurfaceLattice { gram, canonical_class, chi_o: self.chi_o, basis_labels }
    }
}

pub fn blow_up_lattice(lat: &SurfaceLattice, label: &str) -> SurfaceLattice {
    lat.blow_up(label)
}

fn one() -> i64 {
    1
}

fn is_one(v: &i64) -> bool {
    *v == 1
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blow_ups: Vec<String>,
}

/// A singular point of the branch curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSingularity {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<NamedKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub germ: Option<String>,
    /// The `k` values of the even resolution, when known directly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<i64>>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub count: i64,
}

impl Default for BranchSingularity {
    fn default() -> Self {
        BranchSingularity { kind: None, germ: None, k: None, count: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSpec {
    pub lattice: LatticeSpec,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<Vec<i64>>,
    #[serde(rename = "chiO", default, skip_serializing_if = "Option::is_none")]
    pub chi_o: Option<i64>,
    #[serde(rename = "L")]
    pub l_class: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branch_singularities: Vec<BranchSingularity>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoverInvariants {
    #[serde(rename = "chiO_S")]
    pub chi_o: i64,
    #[serde(rename = "K_S_sq")]
    pub k_sq: i64,
    #[serde(rename = "e_S")]
    pub e: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub lattice: SurfaceLattice,
    #[serde(rename = "KW_sq")]
    pub kw_sq: i64,
    #[serde(rename = "L_sq")]
    pub l_sq: i64,
    #[serde(rename = "L_dot_K")]
    pub l_dot_k: i64,
    pub k_list: Vec<i64>,
    pub invariants: CoverInvariants,
}

/// Branch-curve point during the even resolution: strict transform `f` plus
/// the exceptional lines `{x = 0}`, `{y = 0}` that belong to the branch locus.
struct BranchPoint {
    f: BiPoly,
    field: Option<Arc<ExtField>>,
    weight: usize,
    exc_x: bool,
    exc_y: bool,
}

/// `k = ⌊m/2⌋` at every infinitely-near point of the canonical resolution of
/// a double cover branched along the germ, cluster-weighted.
pub fn even_resolution_of_germ(g: &Germ, cfg: &ResolutionConfig) -> Result<Vec<i64>, GermError> {
    let mut level = vec![BranchPoint {
        f: g.equation().clone(),
        field: g.field(),
        weight: 1,
        exc_x: false,
        exc_y: false,
    }];
    let mut ks = Vec::new();
    let mut depth = 0;
    while !level.is_empty() {
        let mut next = Vec::new();
        for p in level {
            let ord_f = p.f.order_at_origin().unwrap_or(0);
            let m = ord_f + p.exc_x as u32 + p.exc_y as u32;
            if m <= 1 {
                continue;
            }
            if depth >= cfg.max_depth {
                return Err(GermError::ResolutionDepthExceeded { cap: cfg.max_depth });
            }
            ks.extend(std::iter::repeat_n((m / 2) as i64, p.weight));
            let keeps_exceptional = m % 2 == 1;
            let own = if ord_f >= 1 {
                tangent_directions(&p.f, ord_f, p.field.as_ref())?
            } else {
                Vec::new()
            };
            for c in with_extra_points(own, p.exc_y, p.exc_x, p.field.as_ref()) {
                let (exc_x, exc_y) = match &c.direction {
                    Direction::Slope(t0) => (keeps_exceptional, p.exc_y && t0.is_zero()),
                    Direction::Vertical => (p.exc_x, keeps_exceptional),
                };
                next.push(BranchPoint {
                    f: p.f.blowup_substitute(ord_f, &c.direction)?,
                    field: c.field,
                    weight: p.weight * c.degree,
                    exc_x,
                    exc_y,
                });
            }
        }
        level = next;
        depth += 1;
    }
    Ok(ks)
}

/// The `k` values for one branch singularity. An explicit list takes
/// precedence over a germ, a germ over a named kind; all given sources must
/// agree.
pub fn even_resolution_multiplicities(
    index: usize,
    sing: &BranchSingularity,
    cfg: &ResolutionConfig,
) -> Result<Vec<i64>, CoverError> {
    let germ_err = |source| CoverError::Germ { index, source };
    let mut found: Vec<Vec<i64>> = Vec::new();
    if let Some(k) = &sing.k {
        if k.is_empty() {
            return Err(CoverError::BranchSource { index, detail: "`k` must not be empty".into() });
        }
        if let Some(&bad) = k.iter().find(|&&k| k < 1) {
            return Err(CoverError::InvalidK { index, k: bad });
        }
        found.push(k.clone());
    }
    if let Some(text) = &sing.germ {
        let f = parse_poly(text).map_err(|e| germ_err(e.into()))?;
        let (g, _) = Germ::reduce(f).map_err(germ_err)?;
        found.push(even_resolution_of_germ(&g, cfg).map_err(germ_err)?);
    }
    if let Some(kind) = sing.kind {
        let g = Germ::new(kind.germ(), true).map_err(germ_err)?;
        found.push(even_resolution_of_germ(&g, cfg).map_err(germ_err)?);
    }
    let Some(first) = found.first() else {
        return Err(CoverError::BranchSource { index, detail: "needs one of `kind`, `germ` or `k`".into() });
    };
    for other in &found[1..] {
        let (mut a, mut b) = (first.clone(), other.clone());
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(CoverError::KDisagreement { index, given: first.clone(), computed: other.clone() });
        }
    }
    if sing.count < 1 {
        return Err(CoverError::InvalidCount { index, count: sing.count });
    }
    Ok(first.clone())
}

/// Invariants of the canonical resolution of the double cover of `W`
/// branched along a curve `B ≡ 2L` with the given `k` values.
pub fn double_cover_invariants(
    chi_o_w: i64,
    kw_sq: i64,
    l_sq: i64,
    l_dot_k: i64,
    k_list: &[i64],
) -> Result<CoverInvariants, CoverError> {
    let twice_chi = 4 * chi_o_w + l_sq + l_dot_k - k_list.iter().map(|k| k * (k - 1)).sum::<i64>();
    if twice_chi % 2 != 0 {
        return Err(CoverError::NonIntegralResult { twice: twice_chi });
    }
    let chi_o = twice_chi / 2;
    let k_sq = 2 * (kw_sq + 2 * l_dot_k + l_sq) - 2 * k_list.iter().map(|k| (k - 1) * (k - 1)).sum::<i64>();
    Ok(CoverInvariants { chi_o, k_sq, e: 12 * chi_o - k_sq })
}

pub fn build_lattice(spec: &CoverSpec) -> Result<SurfaceLattice, CoverError> {
    let l = &spec.lattice;
    let base = match (&l.preset, &l.gram) {
        (Some(_), Some(_)) => return Err(CoverError::LatticeSource("give either `preset` or `gram`".into())),
        (None, None) => return Err(CoverError::LatticeSource("needs `preset` or `gram`".into())),
        (Some(name), None) => {
            if spec.canonical.is_some() || spec.chi_o.is_some() || l.labels.is_some() {
                return Err(CoverError::LatticeSource(
                    "a preset fixes `K`, `chiO` and the labels; remove them".into(),
                ));
            }
            SurfaceLattice::preset(name)?
        }
        (None, Some(gram)) => {
            let (Some(k), Some(chi)) = (&spec.canonical, spec.chi_o) else {
                return Err(CoverError::LatticeSource("an explicit `gram` needs `K` and `chiO`".into()));
            };
            let labels = l
                .labels
                .clone()
                .unwrap_or_else(|| (1..=gram.len()).map(|i| format!("e{i}")).collect());
            SurfaceLattice::new(gram.clone(), k.clone(), chi, labels)?
        }
    };
    Ok(l.blow_ups.iter().fold(base, |lat, label| lat.blow_up(label)))
}

pub fn cover_report(spec: &CoverSpec, cfg: &ResolutionConfig) -> Result<CoverReport, CoverError> {
    let lattice = build_lattice(spec)?;
    let mut k_list = Vec::new();
    for (i, s) in spec.branch_singularities.iter().enumerate() {
        let ks = even_resolution_multiplicities(i, s, cfg)?;
        for _ in 0..s.count {
            k_list.extend(&ks);
        }
    }
    let l = &spec.l_class;
    let l_sq = lattice.pairing(l, l)?;
    if let Some(branch) = &spec.branch {
        if branch.len() != l.len() {
            return Err(CoverError::DimensionMismatch("`branch` and `L` have different lengths".into()));
        }
        if branch.iter().zip(l).any(|(b, l)| *b != 2 * l) {
            return Err(CoverError::OddBranch { branch: branch.clone(), l: l.clone() });
        }
    }
    let l_dot_k = lattice.pairing(l, &lattice.canonical_class)?;
    let kw_sq = lattice.canonical_square();
    let invariants = double_cover_invariants(lattice.chi_o, kw_sq, l_sq, l_dot_k, &k_list)?;
    Ok(CoverReport { lattice, kw_sq, l_sq, l_dot_k, k_list, invariants })
}
