"""Reeb chord search.

Two complementary strategies:

* ``chords_projection`` (Euclidean models only): a chord is exactly a
  pair of slice points with equal (x, y)-projection and distinct height,
  found by Newton refinement of projection double points seeded from
  close mesh pairs.
* ``chords_shooting`` (any model): integrate the Reeb flow from mesh
  nodes, detect re-entries into a neighborhood of the slice with a grid
  index, and refine (start, time, end) with Newton on the landing system.

Chord orientation convention: the start point is the flow source, i.e.
the Reeb flow reaches the end point in positive time (in Euclidean models
the lower z of the pair).  Records are canonically sorted by
(length, start parameters, end parameters) so output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import NewtonFailuresExceeded, WrongModel
from .models import StandardRModel, StandardSphereModel
from .numerics import NewtonOptions, integrate_flow, newton_solve, rk4_step
from .slices import ParamSlice
from .spatial import GridIndex


@dataclass
class ChordRecord:
    """One Reeb chord: start/end parameters and points, flow time, purity."""

    start_param: np.ndarray
    end_param: np.ndarray
    start_point: np.ndarray
    end_point: np.ndarray
    length: float
    pure: bool
    start_component: int
    end_component: int
    action: Optional[float] = None
    residual: float = 0.0  # refinement residual, used for dedup preference

    def sort_key(self):
        return (self.length, *self.start_param.tolist(), *self.end_param.tolist())


@dataclass
class SearchOptions:
    """Chord search settings.  ``None`` entries derive from mesh spacing:
    seed radius 3x projected spacing, exclusion radius 5x parameter
    spacing, capture radius 2x ambient spacing."""

    seed_radius: Optional[float] = None
    exclusion_radius: Optional[float] = None
    min_length: float = 1e-4
    max_time: float = 6.0
    capture_radius: Optional[float] = None
    launch_stride: int = 2
    monitor_dt: float = 0.02
    cluster_radius: float = 1e-4
    newton: NewtonOptions = field(default_factory=lambda: NewtonOptions(residual_tol=1e-10, max_iterations=60))


def _ambient_spacing(points: np.ndarray, mesh_edges) -> float:
    lengths = [np.linalg.norm(points[a] - points[b]) for a, b in mesh_edges]
    return float(np.median(lengths))


def _sorted_records(records: list[ChordRecord]) -> list[ChordRecord]:
    return sorted(records, key=ChordRecord.sort_key)


def dedup_chords(raw: list[ChordRecord], cluster_radius: float = 1e-4) -> list[ChordRecord]:
    """Merge chords whose (start, end, length) triples nearly coincide.

    Within a cluster the record with the smallest refinement residual
    wins.  Output is canonically sorted.  Kept records are bucketed by
    length so candidate comparisons stay local.
    """
    kept: list[ChordRecord] = []
    buckets: dict[int, list[int]] = {}
    for rec in sorted(raw, key=lambda r: (r.residual, r.sort_key())):
        key = int(np.floor(rec.length / cluster_radius))
        close = False
        for b in (key - 1, key, key + 1):
            for idx in buckets.get(b, ()):
                other = kept[idx]
                d = max(
                    float(np.max(np.abs(rec.start_param - other.start_param), initial=0.0)),
                    float(np.max(np.abs(rec.end_param - other.end_param), initial=0.0)),
                    abs(rec.length - other.length),
                )
                if d <= cluster_radius:
                    close = True
                    break
            if close:
                break
        if not close:
            buckets.setdefault(key, []).append(len(kept))
            kept.append(rec)
    return _sorted_records(kept)


def _resolve_projection_options(slc: ParamSlice, opts: SearchOptions):
    mesh = slc.mesh
    proj_spacing = _ambient_spacing(slc.points[:, :-1], mesh.edges())
    if proj_spacing <= 0.0:  # projection-degenerate slice (e.g. a Reeb fiber)
        proj_spacing = max(_ambient_spacing(slc.points, mesh.edges()), 1e-3)
    seed_radius = opts.seed_radius or 3.0 * proj_spacing
    exclusion = opts.exclusion_radius or 5.0 * mesh.max_spacing()
    return seed_radius, exclusion


def chords_projection(model, slc: ParamSlice, opts: Optional[SearchOptions] = None) -> list[ChordRecord]:
    """All Reeb chords of a slice in a Euclidean model via projection
    double points.

    Seeds every mesh pair whose projections are within the seed radius
    while the parameters are separated beyond the exclusion radius (which
    suppresses the diagonal), refines with Newton on
    F(u, v) = proj(i(u)) - proj(i(v)), orients start at the lower height,
    deduplicates and sorts.

    Raises:
        WrongModel: the model is not a StandardRModel.
        NewtonFailuresExceeded: more than half the seeds fail (bad mesh).
    """
    if not isinstance(model, StandardRModel):
        raise WrongModel("projection chord search requires a Euclidean model")
    opts = opts or SearchOptions()
    mesh = slc.mesh
    seed_radius, exclusion = _resolve_projection_options(slc, opts)
    proj = slc.points[:, :-1]

    index = GridIndex(proj, cell_size=seed_radius)
    seeds = []
    for a, b in index.close_pairs(seed_radius):
        if slc.mesh.param_distance(mesh.params[a], mesh.params[b]) > exclusion:
            seeds.append((a, b))

    pdim = slc.param_dim

    def system(w):
        u, v = w[:pdim], w[pdim:]
        return slc.immerse(u)[:-1] - slc.immerse(v)[:-1]

    failures = 0
    raw: list[ChordRecord] = []
    for a, b in seeds:
        seed = np.concatenate([mesh.params[a], mesh.params[b]])
        result = newton_solve(system, seed, opts.newton)
        if not result.converged:
            failures += 1
            continue
        u = mesh.wrap(result.x[:pdim])
        v = mesh.wrap(result.x[pdim:])
        p_u, p_v = slc.immerse(u), slc.immerse(v)
        length = float(p_v[-1] - p_u[-1])
        if length < 0:
            u, v, p_u, p_v, length = v, u, p_v, p_u, -length
        if length <= opts.min_length:
            continue
        comp_u, comp_v = slc.component_at(u), slc.component_at(v)
        raw.append(
            ChordRecord(
                start_param=u,
                end_param=v,
                start_point=p_u,
                end_point=p_v,
                length=length,
                pure=comp_u == comp_v,
                start_component=comp_u,
                end_component=comp_v,
                residual=result.residual_norm,
            )
        )
    if seeds and failures > 0.5 * len(seeds):
        raise NewtonFailuresExceeded(
            f"{failures}/{len(seeds)} projection seeds failed to converge"
        )
    return dedup_chords(raw, opts.cluster_radius)


def _tangent_basis(p: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the hyperplane orthogonal to p (rows)."""
    d = p.size
    _, _, vt = np.linalg.svd(p[None, :] / np.linalg.norm(p))
    return vt[1:d]


def _capture_events(model, slc: ParamSlice, opts: SearchOptions, capture_radius: float):
    """Monitor Reeb trajectories from a subsample of nodes.

    Detection is armed only once a trajectory has left a 2x capture-radius
    ball around its start (suppressing trivial self-captures), and ends
    when the trajectory escapes the slice's bounding box by more than its
    diameter.  Each dip below the capture radius yields one candidate at
    the minimal-distance sample.
    """
    mesh = slc.mesh
    launches = list(range(0, mesh.n_nodes, max(1, opts.launch_stride)))
    states = slc.points[launches].copy()
    idx = GridIndex(slc.points, cell_size=capture_radius)

    lo = slc.points.min(axis=0)
    hi = slc.points.max(axis=0)
    diameter = float(np.linalg.norm(hi - lo))
    escape = diameter + 4.0 * capture_radius

    n = len(launches)
    armed = np.zeros(n, dtype=bool)
    alive = np.ones(n, dtype=bool)
    inside = np.full(n, -1.0)  # best distance while within capture radius
    best = [None] * n
    events = []

    def flush(i):
        if best[i] is not None:
            events.append(best[i])
            best[i] = None

    t = 0.0
    dt = opts.monitor_dt
    while t < opts.max_time and np.any(alive):
        states[alive] = rk4_step(model.reeb, states[alive], dt)
        t += dt
        for k in range(n):
            if not alive[k]:
                continue
            p = states[k]
            start = slc.points[launches[k]]
            box_gap = np.linalg.norm(np.maximum(lo - p, 0) + np.maximum(p - hi, 0))
            if box_gap > escape:
                flush(k)
                alive[k] = False
                continue
            if not armed[k]:
                if np.linalg.norm(p - start) > 2.0 * capture_radius:
                    armed[k] = True
                continue
            if box_gap > capture_radius:  # cannot be near any mesh point
                flush(k)
                inside[k] = -1.0
                continue
            hit = idx.nearest_within(p, capture_radius)
            if hit is None:
                flush(k)
                inside[k] = -1.0
                continue
            node, dist = hit
            if t <= opts.min_length:
                continue
            if inside[k] < 0 or dist < inside[k]:
                inside[k] = dist
                best[k] = (launches[k], t, node)
    for k in range(n):
        flush(k)
    return events


def chords_shooting(model, slc: ParamSlice, opts: Optional[SearchOptions] = None) -> list[ChordRecord]:
    """Reeb chords by flow shooting, for any built-in model.

    Capture events are pre-clustered so one Newton refinement runs per
    candidate chord; the landing system G(u, T, v) = flow_T(i(u)) - i(v)
    is squared up on spheres by projecting the residual onto the tangent
    space at the seed's end point.  Every returned chord satisfies the
    flow-landing invariant; chords shorter than twice the capture radius
    are below the arming distance and are only found by the projection
    method.
    """
    opts = opts or SearchOptions()
    mesh = slc.mesh
    capture_radius = opts.capture_radius or 2.0 * _ambient_spacing(slc.points, mesh.edges())

    events = _capture_events(model, slc, opts, capture_radius)

    # pre-cluster events: neighbors launching into the same chord
    reps = []
    taken = []
    for node_u, t_hit, node_v in events:
        key = np.concatenate([mesh.params[node_u], [t_hit], mesh.params[node_v]])
        if any(
            mesh.param_distance(key[: mesh.param_dim], other[: mesh.param_dim]) < 6.0 * mesh.max_spacing()
            and abs(key[mesh.param_dim] - other[mesh.param_dim]) < 8.0 * capture_radius
            for other in taken
        ):
            continue
        taken.append(key)
        reps.append((node_u, t_hit, node_v))

    pdim = slc.param_dim
    is_sphere = isinstance(model, StandardSphereModel)
    flow_tol = 1e-10

    failures = 0
    raw: list[ChordRecord] = []
    for node_u, t_hit, node_v in reps:
        basis = _tangent_basis(slc.points[node_v]) if is_sphere else None

        def system(w):
            u, big_t, v = w[:pdim], w[pdim], w[pdim + 1 :]
            if big_t <= 0:
                big_t = 1e-12
            landed = integrate_flow(model.reeb, slc.immerse(u), float(big_t), tol=flow_tol)
            residual = landed - slc.immerse(v)
            return basis @ residual if basis is not None else residual

        seed = np.concatenate([mesh.params[node_u], [t_hit], mesh.params[node_v]])
        newton_opts = replace(opts.newton, residual_tol=max(opts.newton.residual_tol, 1e-9))
        result = newton_solve(system, seed, newton_opts)
        if not result.converged:
            failures += 1
            continue
        u = mesh.wrap(result.x[:pdim])
        length = float(result.x[pdim])
        v = mesh.wrap(result.x[pdim + 1 :])
        if length <= opts.min_length:
            continue
        p_u, p_v = slc.immerse(u), slc.immerse(v)
        landing = float(np.linalg.norm(integrate_flow(model.reeb, p_u, length, tol=flow_tol) - p_v))
        if landing > 1e-6:
            failures += 1
            continue
        comp_u, comp_v = slc.component_at(u), slc.component_at(v)
        raw.append(
            ChordRecord(
                start_param=u,
                end_param=v,
                start_point=p_u,
                end_point=p_v,
                length=length,
                pure=comp_u == comp_v,
                start_component=comp_u,
                end_component=comp_v,
                residual=result.residual_norm,
            )
        )
    if reps and failures > 0.5 * len(reps):
        raise NewtonFailuresExceeded(f"{failures}/{len(reps)} shooting candidates failed")
    cluster = opts.cluster_radius
    if is_sphere:
        # non-isolated chord families: collapse at mesh scale
        cluster = max(cluster, 2.0 * mesh.max_spacing())
    return dedup_chords(raw, cluster)
