import numpy as np
import pytest

from reebkit.chords import ChordRecord, chords_projection, dedup_chords
from reebkit.errors import WrongModel
from reebkit.numerics import integrate_flow

TWO_PI = 2 * np.pi


def brute_force_double_points(slc, tol=5e-2, exclusion=0.5):
    """Independent oracle: scan all mesh pairs for near-equal projections."""
    proj = slc.points[:, :-1]
    hits = []
    for i in range(slc.mesh.n_nodes):
        for j in range(i + 1, slc.mesh.n_nodes):
            if np.linalg.norm(proj[i] - proj[j]) < tol:
                du = slc.mesh.param_distance(slc.mesh.params[i], slc.mesh.params[j])
                if du > exclusion:
                    hits.append((i, j))
    return hits


def test_unknot_single_chord(projection_chords, unknot_entry):
    found = projection_chords["unknot"]
    assert len(found) == 1
    chord = found[0]
    assert chord.length == pytest.approx(4.0 / 3.0, abs=1e-6)
    assert chord.start_param[0] == pytest.approx(3 * np.pi / 2, abs=1e-6)
    assert chord.end_param[0] == pytest.approx(np.pi / 2, abs=1e-6)
    assert chord.pure

    # brute-force oracle agrees: the double point exists and its height gap
    # at the closest mesh pair matches the chord length at mesh resolution
    hits = brute_force_double_points(unknot_entry.slice)
    assert hits
    gaps = [abs(unknot_entry.slice.points[j][-1] - unknot_entry.slice.points[i][-1]) for i, j in hits]
    assert min(abs(g - 4.0 / 3.0) for g in gaps) < 1e-3


def test_circle_no_chords(projection_chords, circle_entry):
    assert projection_chords["circle"] == []
    assert brute_force_double_points(circle_entry.slice) == []


def test_torus_no_chords(projection_chords):
    assert projection_chords["torus_r5"] == []


def test_sheared_chord_orientation(projection_chords):
    chord = projection_chords[("sheared_unknot", -0.5)][0]
    # heights: z(pi/2) = 1/6 (upper), z(3pi/2) = -1/6 (lower start)
    assert chord.start_param[0] == pytest.approx(3 * np.pi / 2, abs=1e-6)
    assert chord.start_point[-1] == pytest.approx(-1.0 / 6.0, abs=1e-6)
    assert chord.end_point[-1] == pytest.approx(1.0 / 6.0, abs=1e-6)
    assert chord.length == pytest.approx(1.0 / 3.0, abs=1e-6)


def test_sheared_family_length_law(projection_chords):
    for c in (-0.5, -0.25, 0.25, 0.5):
        found = projection_chords[("sheared_unknot", c)]
        assert len(found) == 1
        assert found[0].length == pytest.approx(4.0 / 3.0 + 2.0 * c, abs=1e-6)


def test_flow_landing_invariant(projection_chords, unknot_entry, sheared_entries):
    models = {"unknot": unknot_entry.model}
    models.update({("sheared_unknot", c): e.model for c, e in sheared_entries.items()})
    for key, model in models.items():
        for chord in projection_chords[key]:
            end = integrate_flow(model.reeb, chord.start_point, chord.length, tol=1e-10)
            assert np.linalg.norm(end - chord.end_point) < 1e-6


def test_endpoint_membership(projection_chords, unknot_entry):
    pts = unknot_entry.slice.points
    for chord in projection_chords["unknot"]:
        assert np.min(np.linalg.norm(pts - chord.start_point, axis=1)) < 1e-6 + 2e-2
        assert np.min(np.linalg.norm(pts - chord.end_point, axis=1)) < 1e-6 + 2e-2
        # exact membership through the immersion
        assert np.linalg.norm(unknot_entry.slice.immerse(chord.start_param) - chord.start_point) < 1e-12


def test_projection_requires_euclidean_model(hopf_entry):
    with pytest.raises(WrongModel):
        chords_projection(hopf_entry.model, hopf_entry.slice)


def test_method_agreement(projection_chords, shooting_chords):
    for key in ["unknot", "circle", "torus_r5", ("sheared_unknot", -0.5), ("sheared_unknot", 0.5)]:
        proj = projection_chords[key]
        shot = shooting_chords[key]
        assert len(proj) == len(shot)
        for a, b in zip(proj, shot):
            assert np.allclose(a.start_param, b.start_param, atol=1e-4)
            assert np.allclose(a.end_param, b.end_param, atol=1e-4)
            assert abs(a.length - b.length) < 1e-5


def test_hopf_shooting_chords(shooting_chords, hopf_entry):
    found = shooting_chords["hopf_circle"]
    assert found  # the antipodal family must be detected
    model = hopf_entry.model
    for chord in found:
        # return times of the rotation flow are multiples of pi/2
        k = chord.length / (np.pi / 2)
        assert abs(k - round(k)) < 1e-6
        end = integrate_flow(model.reeb, chord.start_point, chord.length, tol=1e-10)
        assert np.linalg.norm(end - chord.end_point) < 1e-6
    assert any(abs(c.length - np.pi / 2) < 1e-6 for c in found)


def test_hopf_antipodal_structure(shooting_chords):
    for chord in shooting_chords["hopf_circle"]:
        if abs(chord.length - np.pi / 2) < 1e-6:
            gap = abs(chord.end_param[0] - chord.start_param[0])
            gap = min(gap, TWO_PI - gap)
            assert gap == pytest.approx(np.pi, abs=1e-5)


def test_search_determinism(unknot_entry):
    a = chords_projection(unknot_entry.model, unknot_entry.slice)
    b = chords_projection(unknot_entry.model, unknot_entry.slice)
    assert len(a) == len(b)
    for x, y in zip(a, b):
        assert np.array_equal(x.start_param, y.start_param)
        assert np.array_equal(x.end_param, y.end_param)
        assert x.length == y.length


def _mk(start, end, length, residual=0.0):
    return ChordRecord(
        start_param=np.array([start]),
        end_param=np.array([end]),
        start_point=np.array([start, 0.0, 0.0]),
        end_point=np.array([end, 0.0, length]),
        length=length,
        pure=True,
        start_component=0,
        end_component=0,
        residual=residual,
    )


def test_dedup_merges_jittered_copies():
    a = _mk(1.0, 2.0, 0.5, residual=1e-12)
    b = _mk(1.0 + 1e-9, 2.0 - 1e-9, 0.5 + 1e-9, residual=1e-10)
    out = dedup_chords([a, b], cluster_radius=1e-4)
    assert len(out) == 1
    assert out[0].residual == 1e-12  # best residual wins


def test_dedup_keeps_distinct_lengths():
    out = dedup_chords([_mk(1.0, 2.0, 0.5), _mk(1.0, 2.0, 1.5)], cluster_radius=1e-4)
    assert len(out) == 2
    assert out[0].length < out[1].length  # canonical sort


def test_dedup_cluster_collapse():
    rng = np.random.default_rng(0)
    records = [
        _mk(1.0 + 1e-8 * rng.normal(), 2.0 + 1e-8 * rng.normal(), 0.5 + 1e-8 * rng.normal(), residual=abs(rng.normal()))
        for _ in range(100)
    ]
    assert len(dedup_chords(records, cluster_radius=1e-4)) == 1


def test_mixed_chord_flag():
    rec = ChordRecord(
        start_param=np.array([0.0]),
        end_param=np.array([1.0]),
        start_point=np.zeros(3),
        end_point=np.array([0.0, 0.0, 1.0]),
        length=1.0,
        pure=False,
        start_component=0,
        end_component=1,
    )
    assert rec.start_component != rec.end_component
    assert not rec.pure
