//! Seeded random fibers and fibrations built from the named singularity
//! catalog. Fibration data is filled in so that the fiber-level identities,
//! `q_f ≤ g(F)` and the `h11` component bound hold; everything else is left
//! for the audit to derive.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::fiber::{ComponentRecord, FiberSpec, SingularitySpec};
use crate::germ::NamedKind;
use crate::model::{FibrationModel, SurfaceSpec};

const SEMISTABLE_KINDS: [NamedKind; 1] = [NamedKind::Node];
const ALL_KINDS: [NamedKind; 4] = [NamedKind::Node, NamedKind::Cusp, NamedKind::Tacnode, NamedKind::Ordinary(3)];

/// Catalog-level summary of a generated fiber.
#[derive(Clone, Debug)]
pub struct FiberSummary {
    pub spec: FiberSpec,
    pub ell: i64,
    pub g_f: i64,
    pub pa_red: i64,
    pub e_f: i64,
}

fn point(at: Vec<String>, kind: NamedKind) -> SingularitySpec {
    SingularitySpec { at, kind: Some(kind), ..Default::default() }
}

fn branches(kind: NamedKind) -> usize {
    kind.expected().2 as usize
}

/// Singular points of a connected fiber with `ell` components, before
/// genera are assigned.
fn random_points<R: Rng>(rng: &mut R, ell: usize, semistable: bool) -> Vec<(Vec<usize>, NamedKind)> {
    let kinds: &[NamedKind] = if semistable { &SEMISTABLE_KINDS } else { &ALL_KINDS };
    let multi: Vec<NamedKind> = kinds.iter().copied().filter(|k| branches(*k) >= 2).collect();
    let mut points = Vec::new();
    for i in 1..ell {
        let j = rng.gen_range(0..i);
        points.push((vec![j, i], *multi.choose(rng).unwrap()));
    }
    let extra = rng.gen_range(if ell == 1 { 1 } else { 0 }..=2);
    for _ in 0..extra {
        let kind = *kinds.choose(rng).unwrap();
        let k = rng.gen_range(1..=branches(kind).min(ell));
        let mut comps: Vec<usize> = (0..ell).collect();
        comps.shuffle(rng);
        comps.truncate(k);
        comps.sort_unstable();
        points.push((comps, kind));
    }
    points
}

fn summarize(name: &str, genera: &[i64], points: &[(Vec<usize>, NamedKind)]) -> FiberSummary {
    let ids: Vec<String> = (1..=genera.len()).map(|i| format!("C{i}")).collect();
    let ell = genera.len() as i64;
    let g_f: i64 = genera.iter().sum();
    let delta: i64 = points.iter().map(|(_, k)| k.expected().1 as i64).sum();
    let pa_red = g_f + delta - ell + 1;
    let chi_top = 2 * ell - 2 * g_f - points.iter().map(|(_, k)| k.expected().2 as i64 - 1).sum::<i64>();
    FiberSummary {
        spec: FiberSpec {
            name: Some(name.into()),
            components: genera
                .iter()
                .zip(&ids)
                .map(|(&g, id)| ComponentRecord { id: id.clone(), geometric_genus: g, multiplicity: 1 })
                .collect(),
            singularities: points
                .iter()
                .map(|(at, kind)| point(at.iter().map(|&i| ids[i].clone()).collect(), *kind))
                .collect(),
        },
        ell,
        g_f,
        pa_red,
        e_f: chi_top - (2 - 2 * pa_red),
    }
}

/// A connected reduced fiber of arithmetic genus at least 1 with random
/// component genera in `0..=2`.
pub fn random_reduced_fiber<R: Rng>(rng: &mut R, name: &str, semistable: bool) -> FiberSummary {
    loop {
        let ell = rng.gen_range(1..=3);
        let points = random_points(rng, ell, semistable);
        let genera: Vec<i64> = (0..ell).map(|_| rng.gen_range(0..=2)).collect();
        let f = summarize(name, &genera, &points);
        if f.pa_red >= 1 {
            return f;
        }
    }
}

/// A connected reduced fiber of arithmetic genus `g`, if the drawn points
/// leave room for it.
pub fn random_fiber_of_genus<R: Rng>(rng: &mut R, name: &str, g: i64, semistable: bool) -> Option<FiberSummary> {
    let ell = rng.gen_range(1..=3usize);
    let points = random_points(rng, ell, semistable);
    let delta: i64 = points.iter().map(|(_, k)| k.expected().1 as i64).sum();
    let total = g - (delta - ell as i64 + 1);
    if total < 0 {
        return None;
    }
    let mut genera = vec![0i64; ell];
    for _ in 0..total {
        genera[rng.gen_range(0..ell)] += 1;
    }
    Some(summarize(name, &genera, &points))
}

/// A non-trivial fibration with random fibers. Over `P¹` semistable
/// fibrations get at least five fibers of smaller geometric genus, which
/// keeps clear of the boundary case `s1 = 4`.
pub fn random_fibration<R: Rng>(rng: &mut R, name: &str) -> FibrationModel {
    loop {
        let g = rng.gen_range(2..=4i64);
        let b = rng.gen_range(0..=2i64);
        let semistable = rng.gen_bool(0.6);
        let count = if b == 0 { rng.gen_range(5..=9) } else { rng.gen_range(0..=6) };
        let mut fibers = Vec::with_capacity(count);
        while fibers.len() < count {
            let label = format!("F{}", fibers.len() + 1);
            if let Some(f) = random_fiber_of_genus(rng, &label, g, semistable) {
                fibers.push(f);
            }
        }
        let singular: Vec<&FiberSummary> = fibers.iter().filter(|f| f.e_f > 0).collect();
        let s1 = singular.iter().filter(|f| f.g_f < g).count();
        if b == 0 && semistable && s1 < 5 {
            continue;
        }
        let min_g_f = fibers.iter().map(|f| f.g_f).chain([g]).min().unwrap();
        let q_f = rng.gen_range(0..=min_g_f);
        let q = q_f + b;
        let e_f: i64 = fibers.iter().map(|f| f.e_f).sum();
        let c2 = e_f + 4 * (g - 1) * (b - 1);
        let sum_ell: i64 = singular.iter().map(|f| f.ell - 1).sum();
        let bound = 2 * q_f * b + 2 + sum_ell;
        let room = c2 - 2 + 4 * q - bound;
        if room < 0 {
            continue;
        }
        let p_g = rng.gen_range(0..=room / 2);
        let h11 = c2 - 2 + 4 * q - 2 * p_g;
        let chi_f = 1 - q + p_g - (g - 1) * (b - 1);
        let c1_sq = 12 * chi_f - e_f + 8 * (g - 1) * (b - 1);
        let explicit = rng.gen_bool(0.5);
        return FibrationModel {
            name: name.into(),
            fiber_genus: g,
            base_genus: b,
            semistable,
            trivial: false,
            surface: SurfaceSpec {
                q,
                p_g,
                c1_sq: explicit.then_some(c1_sq),
                c2: explicit.then_some(c2),
                h11: explicit.then_some(h11),
            },
            cover: None,
            fibers: fibers.into_iter().map(|f| f.spec).collect(),
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_fibers_have_the_requested_genus() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut made = 0;
        for i in 0..50 {
            if let Some(f) = random_fiber_of_genus(&mut rng, &format!("F{i}"), 3, false) {
                assert_eq!(f.pa_red, 3);
                made += 1;
            }
        }
        assert!(made > 10);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = random_fibration(&mut ChaCha8Rng::seed_from_u64(3), "x");
        let b = random_fibration(&mut ChaCha8Rng::seed_from_u64(3), "x");
        assert_eq!(a, b);
    }
}
