use num_rational::BigRational;
use num_traits::{One, Zero};
use orbitope_lab::facelab::{
    canonical_beta, classify_faces, is_x_connected, largest_x_connected_subset, saturation,
    x_connected_subsets, WitnessCone,
};
use orbitope_lab::matmodel::{
    local_max_test, make_model, norm, sample_orbit, ModelKind, VIOLATION_TOL,
};
use orbitope_lab::polytope::{line_section, RationalPolytope};
use orbitope_lab::rational::{add, scale, QVector, Rat};
use orbitope_lab::rootsys::{RootSystem, SimpleSet};
use orbitope_lab::weyl::WeylGroup;
use proptest::prelude::*;

const SYSTEMS: [&str; 9] = ["A1", "A2", "A3", "B2", "B3", "C3", "BC2", "D3", "G2"];
const RANK2: [&str; 4] = ["A2", "B2", "BC2", "G2"];

fn setup(label: &str) -> (RootSystem, WeylGroup) {
    let rs = RootSystem::from_label(label).unwrap();
    let w = WeylGroup::generate(&rs).unwrap();
    (rs, w)
}

fn to_rat(pairs: &[(i64, i64)], n: usize) -> QVector {
    pairs
        .iter()
        .take(n)
        .map(|&(p, q)| BigRational::new(p.into(), q.into()))
        .collect()
}

fn entries() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-4i64..=4, 1i64..=3), 4)
}

fn positive_entries() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((1i64..=5, 1i64..=3), 4)
}

fn polytope(rs: &RootSystem, w: &WeylGroup, v: &[(i64, i64)]) -> (QVector, RationalPolytope) {
    let (x, _) = w.to_dominant(&to_rat(v, rs.ambient_dim())).unwrap();
    let p = RationalPolytope::hull(&w.orbit(&x).unwrap()).unwrap();
    (x, p)
}

fn barycenter(p: &RationalPolytope, indices: &[usize]) -> QVector {
    let mut b = vec![Rat::zero(); p.ambient_dim()];
    for &i in indices {
        b = add(&b, &p.vertices()[i]);
    }
    scale(&(Rat::one() / Rat::from_integer(indices.len().into())), &b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pairing_is_linear(sys in 0..SYSTEMS.len(), u in entries(), v in entries(), a in -3i64..=3, b in -3i64..=3) {
        let (rs, _) = setup(SYSTEMS[sys]);
        let n = rs.ambient_dim();
        let (u, v) = (to_rat(&u, n), to_rat(&v, n));
        let (a, b) = (Rat::from_integer(a.into()), Rat::from_integer(b.into()));
        let combo = add(&scale(&a, &u), &scale(&b, &v));
        for lambda in rs.roots() {
            let lhs = rs.pairing(lambda, &combo).unwrap();
            let rhs = &a * rs.pairing(lambda, &u).unwrap() + &b * rs.pairing(lambda, &v).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn chamber_predicate_is_weyl_equivariant(sys in 0..SYSTEMS.len(), u in entries(), v in entries(), g in 0usize..1000) {
        let (rs, w) = setup(SYSTEMS[sys]);
        let n = rs.ambient_dim();
        let (x, y) = (to_rat(&u, n), to_rat(&v, n));
        let g = g % w.order();
        prop_assert_eq!(
            rs.share_closed_chamber(&x, &y).unwrap(),
            rs.share_closed_chamber(&w.apply(g, &x), &w.apply(g, &y)).unwrap()
        );
    }

    #[test]
    fn orbit_stabilizer(sys in 0..SYSTEMS.len(), u in entries()) {
        let (rs, w) = setup(SYSTEMS[sys]);
        let x = to_rat(&u, rs.ambient_dim());
        let orbit = w.orbit(&x).unwrap();
        let stab = w.stabilizer(&x).unwrap();
        prop_assert_eq!(orbit.len() * stab.len(), w.order());
    }

    #[test]
    fn dominant_representative_is_orbit_invariant(sys in 0..SYSTEMS.len(), u in entries(), g in 0usize..1000) {
        let (rs, w) = setup(SYSTEMS[sys]);
        let x = to_rat(&u, rs.ambient_dim());
        let (d, _) = w.to_dominant(&x).unwrap();
        prop_assert!(rs.is_dominant(&d));
        let (d2, _) = w.to_dominant(&w.apply(g % w.order(), &x)).unwrap();
        prop_assert_eq!(d, d2);
    }

    #[test]
    fn average_is_fixed(sys in 0..SYSTEMS.len(), u in entries()) {
        let (rs, w) = setup(SYSTEMS[sys]);
        let avg = w.average(&to_rat(&u, rs.ambient_dim())).unwrap();
        for k in 0..w.generator_count() {
            prop_assert_eq!(&w.apply(w.generator_element(k), &avg), &avg);
        }
    }

    #[test]
    fn stabilizer_is_parabolic(sys in 0..SYSTEMS.len(), u in entries()) {
        let (rs, w) = setup(SYSTEMS[sys]);
        let (x, _) = w.to_dominant(&to_rat(&u, rs.ambient_dim())).unwrap();
        let mut stab = w.stabilizer(&x).unwrap();
        let mut para = w.parabolic_subgroup(rs.wall_set(&x).unwrap());
        stab.sort_unstable();
        para.sort_unstable();
        prop_assert_eq!(stab, para);
    }

    #[test]
    fn exposed_faces_are_lattice_faces(sys in 0..SYSTEMS.len(), u in entries(), b in entries()) {
        let (rs, w) = setup(SYSTEMS[sys]);
        let (_, p) = polytope(&rs, &w, &u);
        let beta = to_rat(&b, rs.ambient_dim());
        let face = p.exposed_face(&beta).unwrap();
        let (value, argmax) = p.support(&beta).unwrap();
        prop_assert_eq!(&face.vertex_indices, &argmax);
        for v in p.vertices() {
            prop_assert!(orbitope_lab::rational::dot(v, &beta) <= value);
        }
        prop_assert!(p.face_lattice().unwrap().contains(&face));
    }

    #[test]
    fn barycenters_locate_their_own_face(sys in 0..SYSTEMS.len(), u in entries()) {
        let (rs, w) = setup(SYSTEMS[sys]);
        let (_, p) = polytope(&rs, &w, &u);
        for face in p.face_lattice().unwrap() {
            if face.vertex_indices.is_empty() {
                continue;
            }
            let b = barycenter(&p, &face.vertex_indices);
            prop_assert_eq!(p.locate(&b), Some(face));
        }
    }

    #[test]
    fn faces_are_closed_under_intersection(sys in 0..SYSTEMS.len(), u in entries()) {
        let (rs, w) = setup(SYSTEMS[sys]);
        let (_, p) = polytope(&rs, &w, &u);
        let lattice = p.face_lattice().unwrap();
        let sets: std::collections::HashSet<&Vec<usize>> =
            lattice.iter().map(|f| &f.vertex_indices).collect();
        for a in &lattice {
            for b in &lattice {
                let meet: Vec<usize> = a
                    .vertex_indices
                    .iter()
                    .copied()
                    .filter(|i| b.vertex_indices.contains(i))
                    .collect();
                prop_assert!(meet.is_empty() || sets.contains(&meet));
            }
        }
    }

    #[test]
    fn line_sections_of_rank_two_polytopes(sys in 0..RANK2.len(), u in entries(), d in entries()) {
        let (rs, w) = setup(RANK2[sys]);
        let (_, p) = polytope(&rs, &w, &u);
        prop_assume!(p.dim() == 2);
        let base = barycenter(&p, &(0..p.vertices().len()).collect::<Vec<_>>());
        // a direction inside the plane of the polytope
        let d = to_rat(&d, rs.ambient_dim());
        let dir = add(
            &scale(&d[0], &orbitope_lab::rational::sub(&p.vertices()[0], &base)),
            &scale(&d[1], &orbitope_lab::rational::sub(&p.vertices()[1], &base)),
        );
        prop_assume!(dir.iter().any(|c| !c.is_zero()));
        let (lo, hi) = line_section(&p, &[], &base, &dir).unwrap();
        prop_assert!(lo < Rat::zero() && Rat::zero() < hi);
        for t in [&lo, &hi] {
            let end = add(&base, &scale(t, &dir));
            let face = p.locate(&end).unwrap();
            prop_assert!(face.dim < p.dim());
        }
        let (mid_lo, mid_hi) = (&lo / Rat::from_integer(2.into()), &hi / Rat::from_integer(2.into()));
        for t in [mid_lo, mid_hi] {
            prop_assert_eq!(p.locate(&add(&base, &scale(&t, &dir))).unwrap().dim, p.dim());
        }
    }

    #[test]
    fn saturation_round_trip(sys in 0..SYSTEMS.len(), u in entries()) {
        let (rs, w) = setup(SYSTEMS[sys]);
        let (x, _) = w.to_dominant(&to_rat(&u, rs.ambient_dim())).unwrap();
        prop_assume!(x.iter().any(|c| !c.is_zero()));
        for i in x_connected_subsets(&rs, &x).unwrap() {
            let j = saturation(&rs, i, &x).unwrap();
            prop_assert!(i.is_subset(j));
            prop_assert_eq!(largest_x_connected_subset(&rs, j, &x), i);
            prop_assert!(is_x_connected(&rs, i, &x).unwrap());
        }
    }

    #[test]
    fn witnesses_are_regular_in_their_cone(sys in 0..SYSTEMS.len(), bits in 0u64..16) {
        let (rs, _) = setup(SYSTEMS[sys]);
        let j = SimpleSet::from_bits(bits).intersection(SimpleSet::full(rs.rank()));
        let beta = canonical_beta(&rs, j).unwrap();
        prop_assert!(WitnessCone::new(&rs, j).contains(&rs, &rs.lower(&beta)));
        prop_assert_eq!(rs.wall_set(&rs.lower(&beta)).unwrap(), j);
    }

    #[test]
    fn exposed_face_is_independent_of_the_witness(sys in 0..SYSTEMS.len(), u in entries(), c in positive_entries()) {
        let (rs, w) = setup(SYSTEMS[sys]);
        let (x, p) = polytope(&rs, &w, &u);
        prop_assume!(x.iter().any(|c| !c.is_zero()));
        let coweights = rs.fundamental_coweights();
        let coeffs = to_rat(&c, rs.rank());
        for d in classify_faces(&rs, &w, &x).unwrap() {
            let mut beta = vec![Rat::zero(); rs.ambient_dim()];
            for k in (0..rs.rank()).filter(|k| !d.j.contains(*k)) {
                beta = add(&beta, &scale(&coeffs[k], &coweights[k]));
            }
            let cone = WitnessCone::new(&rs, d.j);
            prop_assert!(cone.contains(&rs, &rs.lower(&beta)));
            let face = p.exposed_face(&rs.lower(&beta)).unwrap();
            let mut got: Vec<&QVector> = face.vertex_indices.iter().map(|&i| &p.vertices()[i]).collect();
            let mut want: Vec<&QVector> = d.sigma_vertices.iter().collect();
            got.sort();
            want.sort();
            prop_assert_eq!(got, want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn samples_keep_their_spectrum(model in 0usize..5, u in entries(), seed in 0u64..1000) {
        let (kind, n) = [(ModelKind::Sym, 3), (ModelKind::Sym, 4), (ModelKind::Skew, 4), (ModelKind::Skew, 5), (ModelKind::Skew, 6)][model];
        let m = make_model(kind, n).unwrap();
        let x = to_rat(&u, m.cartan_dim());
        let s = sample_orbit(&m, &x, 20, seed).unwrap();
        let reference = m.invariants(&s.base_point);
        let tol = VIOLATION_TOL * norm(&s.x_cartan);
        for y in &s.points {
            for (a, b) in m.invariants(y).iter().zip(&reference) {
                prop_assert!((a - b).abs() <= tol.max(1e-15), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn hessian_is_negative_semidefinite_on_a_common_chamber(model in 0usize..3, u in entries(), v in entries(), seed in 0u64..1000) {
        let (kind, n) = [(ModelKind::Sym, 3), (ModelKind::Skew, 4), (ModelKind::Skew, 5)][model];
        let m = make_model(kind, n).unwrap();
        let w = m.weyl_group().unwrap();
        let (x, _) = w.to_dominant(&to_rat(&u, m.cartan_dim())).unwrap();
        let (beta, _) = w.to_dominant(&to_rat(&v, m.cartan_dim())).unwrap();
        let verdict = local_max_test(&m, &x, &beta, seed).unwrap();
        prop_assert!(verdict.chamber);
        prop_assert!(verdict.numeric, "{verdict:?}");
    }
}
