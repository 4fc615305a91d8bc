import numpy as np
import pytest

from twoint.errors import UnsupportedQError
from twoint.field import build_field
from twoint.geometry import (build_orbits, build_quotient_matrix,
                             intersection_spectrum, projective_point,
                             segre_transversal, segre_witness_pair,
                             QuotientMatrix)

HILL_SEGRE_LOGS = [0, 91, 14, 42, 105, 126, 133, 217]


def test_orbit_partition_q3(model3):
    assert model3.orbit_count == 52
    assert model3.orbit_size == 7
    assert model3.num_points == 364
    flat = model3.point_logs.ravel()
    assert sorted(flat.tolist()) == list(range(364))


def test_orbit_of_identity(model3):
    # orbit of w^0 is exactly the classes of tau^i = w^(52 i)
    orb = model3.orbits[0]
    assert [p.class_id for p in orb.points] == [52 * i for i in range(7)]


def test_same_orbit_under_tau_shift(model3):
    # w^14 and w^14 * w^52 lie in the same orbit
    assert model3.orbit_of_log(14) == model3.orbit_of_log(14 + 52)


def test_orbit_partition_matches_power_relation(f3, model3):
    # x ~ y iff x^14 = y^14 (the (q^2-q+1)(q-1) power map), on class reps
    e = 14
    power = {}
    for i in range(model3.orbit_count):
        for l in model3.point_logs[i]:
            power.setdefault(i, set()).add((int(l) * e) % 728)
    # each orbit collapses to a single value of the power map ...
    values = []
    for i, vals in power.items():
        assert len(vals) == 1
        values.append(vals.pop())
    # ... and distinct orbits to distinct values
    assert len(set(values)) == 52


def test_segre_transversal_q3(f3, model3):
    points, pairs = segre_transversal(f3)
    assert len(points) == 52
    # exactly one Segre class per orbit
    orbits = [model3.orbit_of_log(p.class_id) for p in points]
    assert sorted(orbits) == list(range(52))


def test_segre_transversal_q4(f4):
    points, pairs = segre_transversal(f4)
    assert len(points) == 105
    model = build_orbits(f4)
    orbits = [model.orbit_of_log(p.class_id) for p in points]
    assert sorted(orbits) == list(range(105))


def test_transversal_rejects_q2_mod_3():
    f5 = build_field(5)
    with pytest.raises(UnsupportedQError):
        segre_transversal(f5)


def test_witness_pair_examples(f3):
    assert segre_witness_pair(f3, 133) == (588, 273)
    assert segre_witness_pair(f3, 0) == (0, 0)


def test_hill_cap_witness_pairs(f3):
    # the eight published pairs for the Hill cap's Segre elements
    expect = [(0, 0), (0, 91), (560, 182), (588, 182), (560, 273),
              (672, 182), (588, 273), (672, 273)]
    got = [segre_witness_pair(f3, l) for l in HILL_SEGRE_LOGS]
    assert got == expect


def test_witness_pairs_divisibility(f3, model3):
    for a, b in model3.segre_pairs:
        assert a % 28 == 0 and b % 91 == 0
        # product lands back in the right orbit's Segre class
        assert (a + b) % 728 % 7 == 0


def test_segre_intersect_power_kernel_small(f3, f4):
    # |S cap W| divides q-1 for q in {3, 4} (exhaustive intersection)
    for f in (f3, f4):
        q = f.q
        go = f.group_order
        r = q * q - q + 1
        w_order = (q - 1) * r
        w = {l for l in range(go) if (l * w_order) % go == 0}
        step2 = go // (q * q - 1)
        step3 = go // (q ** 3 - 1)
        s = {(a + b) % go for a in range(0, go, step3) for b in range(0, go, step2)}
        inter = s & w
        assert (q - 1) % len(inter) == 0


def test_product_map_matches_coordinate_segre(f3):
    # the multiplication map has image size (q+1)(q^2+q+1) projectively and
    # the image is closed under scalars (coordinatewise factoring)
    points, _ = segre_transversal(f3)
    logs = {p.class_id for p in points}
    assert len(logs) == 52
    for l in list(logs)[:10]:
        # scalar multiples stay in the same projective class by construction
        assert (l + 364) % 728 % 364 == l % 364


def test_quotient_matrix_invariants(qmatrix3):
    qmatrix3.validate()
    m = qmatrix3.entries
    assert m.shape == (52, 52)
    assert (m.sum(axis=0) == 121).all()
    assert (m.sum(axis=1) == 121).all()
    assert (m == m.T).all()
    assert 0 <= m.min() and m.max() <= 7


def test_quotient_matrix_square_identity(qmatrix3):
    # M^2 = 81 I + 280 J, a consequence of the 2-design structure of
    # point-hyperplane incidence in PG(5,3)
    m = qmatrix3.entries.astype(np.int64)
    m2 = m @ m
    expect = 81 * np.eye(52, dtype=np.int64) + 280
    assert (m2 == expect).all()


def test_all_ones_spectrum(qmatrix3):
    spec = intersection_spectrum(np.ones(52, dtype=np.int64), qmatrix3)
    assert (spec == 121).all()


def test_empty_spectrum(qmatrix3):
    spec = intersection_spectrum(np.zeros(52, dtype=np.int64), qmatrix3)
    assert (spec == 0).all()


def test_hill_spectrum(model3, qmatrix3):
    sel = np.zeros(52, dtype=np.int64)
    for l in HILL_SEGRE_LOGS:
        sel[model3.orbit_of_log(l)] = 1
    spec = intersection_spectrum(sel, qmatrix3)
    assert set(spec.tolist()) == {11, 20}
    assert (spec == 11).sum() == 8 and (spec == 20).sum() == 44


def test_single_orbit_spectrum_against_brute_force(f3, model3, qmatrix3):
    # independent incidence count: for one orbit, count points p of the orbit
    # with Tr(p*u) = 0 for every hyperplane class u, the dumb way
    orbit = 5
    sel = np.zeros(52, dtype=np.int64)
    sel[orbit] = 1
    spec = intersection_spectrum(sel, qmatrix3)
    z = f3.trace_zero
    plogs = [int(v) for v in model3.point_logs[orbit]]
    for j in range(52):
        u = int(qmatrix3.segre_logs[j])
        count = sum(1 for pl in plogs if z[(pl + u) % 728])
        assert count == spec[j]


def test_spectrum_equals_brute_force_everywhere(f3, model3, qmatrix3):
    # spectrum via M == brute-force count over all 364 points x 364 hyperplanes
    # restricted to hyperplane-orbit representatives, for a random selection
    rng = np.random.default_rng(7)
    sel = (rng.random(52) < 0.4).astype(np.int64)
    spec = intersection_spectrum(sel, qmatrix3)
    z = f3.trace_zero
    chosen = [int(v) for i in range(52) if sel[i] for v in model3.point_logs[i]]
    for j in range(52):
        u = int(qmatrix3.segre_logs[j])
        count = sum(1 for pl in chosen if z[(pl + u) % 728])
        assert count == spec[j]


def test_matrix_json_roundtrip(qmatrix3):
    d = qmatrix3.to_json_dict()
    back = QuotientMatrix.from_json_dict(d)
    assert (back.entries == qmatrix3.entries).all()
    assert back.config_digest == qmatrix3.config_digest
    back.validate()


def test_projective_point_canonicalizes(f3):
    p = projective_point(f3, 400)
    assert p.class_id == 400 - 364
