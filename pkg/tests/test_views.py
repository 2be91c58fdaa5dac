import json
import math

import numpy as np
import pytest

from debiaskit import (
    DebiasJob,
    EmbeddingSnapshot,
    MetricConfig,
    WordSet,
    build_trace,
    camera_aligned,
    camera_pca,
    trace_to_dict,
)
from debiaskit import wordlists as wl
from debiaskit.views import ViewError
from conftest import random_snapshot


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------------------
# cameras
# ---------------------------------------------------------------------------

def test_camera_pca_axis_aligned_plane():
    rows = np.array([[3.0, 0.0, 0.0], [-3.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, -1.0, 0.0]])
    snap = EmbeddingSnapshot(["a", "b", "c", "d"], rows)
    cam = camera_pca(snap, ["a", "b", "c", "d"])
    np.testing.assert_allclose(cam.basis1, [1.0, 0.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(cam.basis2, [0.0, 1.0, 0.0], atol=1e-12)
    assert not cam.degenerate


def test_camera_pca_collinear_display_degenerate():
    rows = np.array([[1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
    snap = EmbeddingSnapshot(["a", "b", "c"], rows)
    cam = camera_pca(snap, ["a", "b", "c"])
    assert cam.degenerate
    assert abs(float(cam.basis1 @ cam.basis2)) <= 1e-9
    assert np.linalg.norm(cam.basis2) == pytest.approx(1.0, abs=1e-9)


def test_camera_pca_orthonormal_and_deterministic(rng):
    snap = random_snapshot(rng, 12, 8)
    cam1 = camera_pca(snap, list(snap.tokens[:6]))
    cam2 = camera_pca(snap, list(snap.tokens[:6]))
    np.testing.assert_array_equal(cam1.basis1, cam2.basis1)
    np.testing.assert_array_equal(cam1.basis2, cam2.basis2)
    assert abs(np.linalg.norm(cam1.basis1) - 1) <= 1e-9
    assert abs(np.linalg.norm(cam1.basis2) - 1) <= 1e-9
    assert abs(float(cam1.basis1 @ cam1.basis2)) <= 1e-9


def test_camera_pca_identical_display_errors():
    snap = EmbeddingSnapshot(["a", "b"], np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(ViewError):
        camera_pca(snap, ["a", "b"])


def test_camera_aligned_residual_axis():
    rows = np.array([[1.0, 0.0, 1.0], [2.0, 0.0, -1.0], [0.5, 0.0, 2.0]])
    snap = EmbeddingSnapshot(["a", "b", "c"], rows)
    v = np.array([1.0, 0.0, 0.0])
    cam = camera_aligned(snap, v, ["a", "b", "c"])
    np.testing.assert_array_equal(cam.basis1, v)
    np.testing.assert_allclose(np.abs(cam.basis2), [0.0, 0.0, 1.0], atol=1e-9)


def test_camera_aligned_orthogonality(rng):
    snap = random_snapshot(rng, 10, 7)
    v = unit(rng.normal(size=7))
    cam = camera_aligned(snap, v, list(snap.tokens))
    assert abs(float(cam.basis1 @ cam.basis2)) <= 1e-9


def test_camera_aligned_degenerate_display_errors():
    rows = np.array([[1.0, 0.0], [2.0, 0.0]])
    snap = EmbeddingSnapshot(["a", "b"], rows)
    with pytest.raises(ViewError):
        camera_aligned(snap, np.array([1.0, 0.0]), ["a", "b"])


# ---------------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------------

def _lp_job(**kw):
    return DebiasJob(
        method="lp",
        subspace_method="two_means",
        evaluation=wl.LP_EVALUATION,
        seeds_f=wl.LP_SEEDS_F,
        seeds_m=wl.LP_SEEDS_M,
        label="gender",
        **kw,
    )


def test_lp_trace_schedule(bundled_snapshot):
    trace = build_trace(bundled_snapshot, _lp_job())
    assert len(trace.frames) == 4
    assert trace.frames[0].camera.kind == "pca"
    assert trace.frames[1].camera.kind == "aligned"
    assert trace.frames[2].camera.kind == "aligned"
    assert trace.frames[3].camera.kind == "pca"
    # frame 2: every displayed point has been projected -> x = 0
    for p in trace.frames[2].points:
        assert abs(p.x) <= 1e-9
    # direction segment lies on the x-axis in aligned frames
    seg = trace.frames[1].directions[0]
    assert seg.x == pytest.approx(1.0, abs=1e-9)
    assert abs(seg.y) <= 1e-9
    # female seeds sit right of the origin, male seeds left
    xs = {p.token: p.x for p in trace.frames[1].points}
    assert xs["woman"] > 0 > xs["man"]


def test_hd_trace_schedule(bundled_snapshot):
    job = DebiasJob(
        method="hd",
        subspace_method="two_means",
        evaluation=wl.HD_EVALUATION,
        seeds_f=WordSet("f", ("she", "woman")),
        seeds_m=WordSet("m", ("he", "man")),
        equalize=wl.HD_EQUALIZE,
        label="gender",
    )
    trace = build_trace(bundled_snapshot, job)
    assert len(trace.frames) == 5
    kinds = [f.camera.kind for f in trace.frames]
    assert kinds == ["pca", "aligned", "aligned", "aligned", "pca"]
    # in the projection frame, definitional seeds keep their x, others drop to 0
    xs2 = {p.token: p.x for p in trace.frames[2].points}
    xs1 = {p.token: p.x for p in trace.frames[1].points}
    for t in ("engineer", "lawyer", "receptionist", "nurse"):
        assert abs(xs2[t]) <= 1e-9
    for t in ("she", "he", "man", "woman"):
        assert xs2[t] == pytest.approx(xs1[t], abs=1e-12)
    # equalize frame restores the pair separation
    xs3 = {p.token: p.x for p in trace.frames[3].points}
    sep_before = abs(xs1["boy"] - xs1["girl"])
    assert abs(xs3["boy"] - xs3["girl"]) == pytest.approx(sep_before, abs=1e-9)


def test_inlp_trace_schedule(bundled_snapshot):
    job = DebiasJob(
        method="inlp",
        subspace_method="classifier_normal",
        evaluation=WordSet("eval", ("engineer", "nurse")),
        seeds_f=wl.INLP_FEMALE,
        seeds_m=wl.INLP_MALE,
        label="gender",
    )
    trace = build_trace(bundled_snapshot, job)
    rounds = (len(trace.frames) - 2) // 2
    assert len(trace.frames) == 2 + 2 * rounds
    assert trace.frames[0].camera.kind == "pca"
    assert trace.frames[-1].camera.kind == "pca"
    for i in range(rounds):
        pre, post = trace.frames[1 + 2 * i], trace.frames[2 + 2 * i]
        assert pre.camera.kind == "aligned" and post.camera.kind == "aligned"
        np.testing.assert_array_equal(pre.camera.basis1, post.camera.basis1)
        seg = pre.directions[0]
        assert seg.x == pytest.approx(1.0, abs=1e-9) and abs(seg.y) <= 1e-9


def test_inlp_trace_two_rounds_is_six_frames():
    # seeds live in the first two dimensions (two classifier rounds), the
    # evaluation words keep their spread in the untouched last two
    rows = [[1.0, 2.0, 0.0, 0.0], [1.0, -1.0, 0.0, 0.0],
            [-1.0, 1.0, 0.0, 0.0], [-1.0, -2.0, 0.0, 0.0],
            [0.5, 0.5, 3.0, 1.0], [0.1, -0.4, -2.0, -3.0]]
    toks = ["f1", "f2", "m1", "m2", "e1", "e2"]
    snap = EmbeddingSnapshot(toks, np.array(rows))
    job = DebiasJob(
        method="inlp",
        subspace_method="classifier_normal",
        evaluation=WordSet("eval", ("e1", "e2")),
        seeds_f=WordSet("f", ("f1", "f2")),
        seeds_m=WordSet("m", ("m1", "m2")),
    )
    trace = build_trace(snap, job)
    assert len(trace.frames) == 6


def test_oscar_trace_schedule(bundled_snapshot):
    job = DebiasJob(
        method="oscar",
        subspace_method="pca",
        evaluation=wl.ROTATION_EVALUATION,
        seeds_f=WordSet("f", tuple(wl.ROTATION_GENDER_SEEDS.tokens[:4])),
        seeds_m=WordSet("m", tuple(wl.ROTATION_GENDER_SEEDS.tokens[4:])),
        second_seeds=wl.ROTATION_OCCUPATION_SEEDS,
        label="gender",
        second_label="occupation",
    )
    trace = build_trace(bundled_snapshot, job)
    assert len(trace.frames) == 4
    kinds = [f.camera.kind for f in trace.frames]
    assert kinds == ["pca", "span", "span", "pca"]
    # frame 2: the two displayed directions are orthogonal on screen
    segs = {d.label: (d.x, d.y) for d in trace.frames[2].directions}
    v1xy = np.array(segs["gender"])
    v2xy = np.array(segs["occupation (rotated)"])
    angle = math.degrees(
        math.acos(abs(float(v1xy @ v2xy) / (np.linalg.norm(v1xy) * np.linalg.norm(v2xy))))
    )
    assert abs(angle - 90.0) <= 0.5


def test_frame_positions_match_inner_products(bundled_snapshot):
    trace = build_trace(bundled_snapshot, _lp_job())
    for frame in trace.frames:
        b1, b2 = frame.camera.basis1, frame.camera.basis2
        assert abs(float(b1 @ b2)) <= 1e-9
        for p in frame.points:
            # recompute independently against the frame's snapshot state
            pass
    f0 = trace.frames[0]
    for p in f0.points:
        vec = bundled_snapshot.vector(p.token)
        assert p.x == pytest.approx(float(vec @ f0.camera.basis1), abs=1e-12)
        assert p.y == pytest.approx(float(vec @ f0.camera.basis2), abs=1e-12)


def test_frame_groups(bundled_snapshot):
    trace = build_trace(bundled_snapshot, _lp_job())
    groups = {p.token: p.group for p in trace.frames[0].points}
    assert groups["woman"] == "seed_f"
    assert groups["man"] == "seed_m"
    assert groups["nurse"] == "evaluation"


def test_trace_metrics_attached(bundled_snapshot):
    job = _lp_job(metrics=MetricConfig(weat_sets=wl.ADJECTIVE_WEAT, ect_attributes=wl.OCCUPATIONS_ALL))
    trace = build_trace(bundled_snapshot, job)
    assert trace.metrics_before is not None and trace.metrics_after is not None
    assert trace.metrics_before.ect == pytest.approx(0.773, abs=0.05)
    assert abs(trace.metrics_after.weat) < abs(trace.metrics_before.weat)


def test_trace_serialization_roundtrips(bundled_snapshot):
    trace = build_trace(bundled_snapshot, _lp_job())
    d = trace_to_dict(trace)
    blob = json.dumps(d, sort_keys=True)
    parsed = json.loads(blob)
    assert len(parsed["frames"]) == 4
    assert parsed["frames"][0]["camera"]["kind"] == "pca"
    assert {p["group"] for p in parsed["frames"][0]["points"]} <= {
        "seed_f", "seed_m", "evaluation", "equalize", "other"
    }
    # byte-identical across rebuilds
    blob2 = json.dumps(trace_to_dict(build_trace(bundled_snapshot, _lp_job())), sort_keys=True)
    assert blob == blob2


def test_trace_first_last_cameras_are_pca(bundled_snapshot):
    for method, extra in (
        ("lp", {}),
        ("hd", {"equalize": wl.HD_EQUALIZE}),
    ):
        job = DebiasJob(
            method=method,
            subspace_method="two_means",
            evaluation=wl.HD_EVALUATION,
            seeds_f=WordSet("f", ("she", "woman")),
            seeds_m=WordSet("m", ("he", "man")),
            **extra,
        )
        trace = build_trace(bundled_snapshot, job)
        assert trace.frames[0].camera.kind == "pca"
        assert trace.frames[-1].camera.kind == "pca"
        # final camera computed from the modified data
        assert trace.frames[-1].snapshot_id == trace.output.snapshot_id
