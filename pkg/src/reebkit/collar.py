"""Chord actions, the small/long classification, the one-dimensional
extension-feasibility oracle, explicit construction of the deformation
profile h, the deformation checks, the reparametrized-flow check, and the
aggregated collar verdict.

Two classification conventions ship side by side because the collar
inequality can be read with either sign of the action:

* ``direct``: a pure chord is long iff length > action;
* ``feasibility``: long iff length > -action, which is exactly the
  condition under which a profile with slope > -1 can interpolate the
  prescribed boundary values h = -f along the chord (the 1-D oracle).

The default is ``direct``; every report flags chords on which the two
conventions disagree rather than silently picking a side.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .chords import ChordRecord, SearchOptions, chords_projection, chords_shooting
from .errors import (
    MissingPrimitive,
    MixedChord,
    NonExact,
    ReparamDegenerate,
    WrongModel,
)
from .models import (
    DeformationSpec,
    RhoProfile,
    StandardRModel,
    StandardSphereModel,
    SymplectizationModel,
    liouville_deformed,
)
from .numerics import integrate_flow, rk4_step
from .slices import (
    DEFAULT_CLOSED_TOL,
    DEFAULT_TRANSVERSE_TOL,
    ParamSlice,
    PrimitiveField,
    check_closed,
    check_transverse,
    periods,
    primitive,
)

_SMOOTHSTEP_MAX_SLOPE = 1.875  # max of d/du [u^3 (10 - 15u + 6u^2)] on [0, 1]
LEGENDRIAN_TOL = 1e-9


class Convention(enum.Enum):
    DIRECT = "direct"
    FEASIBILITY = "feasibility"


class Classification(enum.Enum):
    SMALL = "Small"
    LONG = "Long"


class Verdict(enum.Enum):
    COLLARABLE = "Collarable"
    SCHEME_OBSTRUCTED = "SchemeObstructed"
    NON_EXACT = "NonExact"
    NOT_A_SLICE = "NotASlice"


SCHEME_OBSTRUCTED_NOTE = (
    "this deformation scheme is infeasible; non-collarability is NOT concluded"
)


@dataclass(frozen=True)
class ChordClass:
    chord: ChordRecord
    action: float
    classification: Classification
    convention: Convention


def chord_action(prim: Optional[PrimitiveField], chord: ChordRecord) -> float:
    """Action of a pure chord: f(start) - f(end), start being the flow
    source per the chord orientation convention."""
    if not chord.pure:
        raise MixedChord("action is defined for pure chords only")
    if prim is None:
        raise MissingPrimitive("no primitive available for this slice")
    return prim.value_at(chord.start_param) - prim.value_at(chord.end_param)


def classify_chord(chord: ChordRecord, action: float, convention: Convention = Convention.DIRECT) -> ChordClass:
    """Small/long classification of a pure chord under a convention.

    ``direct``: long iff length > action.  ``feasibility``: long iff
    length > -action.  Both comparisons are strict.
    """
    if not chord.pure:
        raise MixedChord("classification is defined for pure chords only")
    if convention == Convention.DIRECT:
        long = chord.length > action
    else:
        long = chord.length > -action
    return ChordClass(chord, action, Classification.LONG if long else Classification.SMALL, convention)


def feasibility_oracle_1d(length: float, h_start: float, h_end: float, margin: float = 0.0) -> bool:
    """Ground truth for chord-level extension feasibility.

    A smooth profile phi on [0, length] with phi(0) = h_start,
    phi(length) = h_end and phi' > -1 + margin everywhere exists iff the
    mean slope clears the bound:

        h_end - h_start > (-1 + margin) * length.
    """
    if length <= 0:
        raise ValueError("length must be positive")
    return h_end - h_start > (-1.0 + margin) * length


# ---------------------------------------------------------------------------
# profile construction along Reeb fibers
# ---------------------------------------------------------------------------


def _smoothstep(u):
    u = np.clip(u, 0.0, 1.0)
    return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)


@dataclass(frozen=True)
class _Piece:
    z0: float
    z1: float
    v0: float
    v1: float
    blend: float  # 0 = linear, 1 = pure smoothstep

    def eval(self, z):
        u = (z - self.z0) / (self.z1 - self.z0)
        u = np.clip(u, 0.0, 1.0)
        ramp = (1.0 - self.blend) * u + self.blend * _smoothstep(u)
        return self.v0 + (self.v1 - self.v0) * ramp

    def min_slope(self) -> float:
        mean = (self.v1 - self.v0) / (self.z1 - self.z0)
        if mean >= 0:
            return mean * (1.0 - self.blend)
        return mean * (1.0 - self.blend + _SMOOTHSTEP_MAX_SLOPE * self.blend)


def _blend_for(mean: float, margin: float) -> float:
    """Largest smoothstep blend keeping the slope above -1 + margin.

    Descending pieces trade smoothness for slope headroom: a pure
    smoothstep steepens the mean slope by up to 1.875x, so the blend
    shrinks toward linear as the mean approaches the bound.  A 2% cushion
    keeps the realized minimum strictly above the bound so the
    finite-difference verification cannot sit on the edge.
    """
    if mean >= 0:
        return 1.0
    budget = (1.0 - margin) / abs(mean) / 1.02
    if budget >= _SMOOTHSTEP_MAX_SLOPE:
        return 1.0
    return min(1.0, max(0.0, (budget - 1.0) / (_SMOOTHSTEP_MAX_SLOPE - 1.0)))


def _build_profile(zs: np.ndarray, vs: np.ndarray, margin: float, runway: float) -> list[_Piece]:
    """Piecewise profile through prescribed (z, value) pairs, decaying to
    zero over slope-safe runways beyond the extremes."""
    pieces: list[_Piece] = []
    run_lo = max(runway, _SMOOTHSTEP_MAX_SLOPE * abs(vs[0]) / (1.0 - margin) * 1.02 + 1e-9)
    pieces.append(_Piece(zs[0] - run_lo, zs[0], 0.0, float(vs[0]), 1.0))
    for i in range(len(zs) - 1):
        mean = (vs[i + 1] - vs[i]) / (zs[i + 1] - zs[i])
        pieces.append(_Piece(float(zs[i]), float(zs[i + 1]), float(vs[i]), float(vs[i + 1]), _blend_for(mean, margin)))
    run_hi = max(runway, _SMOOTHSTEP_MAX_SLOPE * abs(vs[-1]) / (1.0 - margin) * 1.02 + 1e-9)
    pieces.append(_Piece(zs[-1], zs[-1] + run_hi, float(vs[-1]), 0.0, 1.0))
    return pieces


def _eval_profile(pieces: list[_Piece], z: float) -> float:
    if z <= pieces[0].z0 or z >= pieces[-1].z1:
        return 0.0
    for piece in pieces:
        if z <= piece.z1:
            return float(piece.eval(z))
    return 0.0


class FiberBumpField:
    """Scalar field on the Euclidean ambient space built fiber by fiber.

    For a query point, nearby mesh nodes (in the projection forgetting
    the last coordinate) are grouped by parameter connectivity; each group
    marks one intersection of the query fiber with the slice, prescribing
    the value -f at its height.  Along the fiber the prescriptions are
    joined by slope-bounded pieces; transversally the field is shaped by a
    planar bump that is 1 on the projection shadow and fades out over a
    tube of 3x the projected mesh spacing.

    Only derivatives along the Reeb direction (the last coordinate) are
    controlled; the verification checks differentiate along that
    direction only.
    """

    def __init__(self, slc: ParamSlice, prim: PrimitiveField, margin: float, runway: float):
        self.slice = slc
        self.margin = margin
        self.runway = runway
        self.proj = slc.points[:, :-1]
        self.heights = slc.points[:, -1]
        self.prescriptions = -prim.values
        spacing = np.median(
            [np.linalg.norm(self.proj[a] - self.proj[b]) for a, b in slc.mesh.edges()]
        )
        self.r_plateau = 1.5 * float(spacing)
        self.r_cut = 3.0 * float(spacing)
        self._adjacency = slc.mesh.neighbors()
        self._profile_cache: dict[bytes, tuple] = {}

    def _clusters(self, near: np.ndarray) -> list[np.ndarray]:
        near_set = set(near.tolist())
        seen: set[int] = set()
        out = []
        for start in near.tolist():
            if start in seen:
                continue
            comp = [start]
            seen.add(start)
            stack = [start]
            while stack:
                a = stack.pop()
                for b in self._adjacency[a]:
                    if b in near_set and b not in seen:
                        seen.add(b)
                        comp.append(b)
                        stack.append(b)
            out.append(np.array(comp))
        return out

    def fiber_data(self, shadow_point: np.ndarray):
        """(heights, prescriptions, representative nodes) of the fiber
        intersections over a projected point, sorted by height."""
        d2 = np.sum((self.proj - shadow_point) ** 2, axis=1)
        near = np.nonzero(d2 <= self.r_cut * self.r_cut)[0]
        if near.size == 0:
            return None
        reps = []
        for cluster in self._clusters(near):
            rep = cluster[int(np.argmin(d2[cluster]))]
            reps.append(rep)
        reps = sorted(reps, key=lambda r: self.heights[r])
        zs = np.array([self.heights[r] for r in reps])
        vs = np.array([self.prescriptions[r] for r in reps])
        return zs, vs, reps, float(np.sqrt(np.min(d2)))

    def _profile_at(self, shadow_point: np.ndarray):
        key = np.round(shadow_point, 12).tobytes()
        hit = self._profile_cache.get(key)
        if hit is not None:
            return hit
        data = self.fiber_data(shadow_point)
        if data is None:
            entry = (None, 0.0)
        else:
            zs, vs, _, dist = data
            pieces = _build_profile(zs, vs, self.margin, self.runway)
            bump = float(
                1.0
                - _smoothstep((dist - self.r_plateau) / max(self.r_cut - self.r_plateau, 1e-12))
            )
            entry = (pieces, bump)
        self._profile_cache[key] = entry
        return entry

    def __call__(self, point) -> float:
        p = np.asarray(point, dtype=float)
        pieces, bump = self._profile_at(p[:-1])
        if pieces is None or bump == 0.0:
            return 0.0
        return bump * _eval_profile(pieces, float(p[-1]))

    def min_slope(self) -> float:
        """Analytic minimum of the fiber slope over all mesh-node fibers.

        The planar bump only scales profiles by a factor in [0, 1], which
        cannot push a slope below the per-piece bound.
        """
        worst = 0.0
        for node in range(self.slice.mesh.n_nodes):
            pieces, _ = self._profile_at(self.proj[node])
            if pieces is None:
                continue
            worst = min(worst, min(piece.min_slope() for piece in pieces))
        return worst


@dataclass
class ExtendResult:
    ok: bool
    h: Optional[Callable[[np.ndarray], float]]
    obstructions: list[ChordRecord] = field(default_factory=list)
    min_slope: float = 0.0
    max_h_plus_f: float = 0.0


def extend_h(
    model,
    slc: ParamSlice,
    prim: PrimitiveField,
    margin: float = 0.05,
    runway: float = 1.0,
) -> ExtendResult:
    """Extend the boundary prescription h = -f to a field on the ambient
    space with slope above -1 + margin along every Reeb fiber.

    Every fiber through a mesh node is examined; a consecutive pair of
    prescribed values violating the 1-D oracle makes the result
    ``Obstructed``, reported as the offending chords.  On success the
    returned field matches -f on the mesh nodes exactly and decays to zero
    beyond the slice's projection shadow.
    """
    if not isinstance(model, StandardRModel):
        raise WrongModel("fiber extension requires a Euclidean model")
    fld = FiberBumpField(slc, prim, margin, runway)

    obstructions: list[ChordRecord] = []
    seen_pairs: set[tuple[int, int]] = set()
    for node in range(slc.mesh.n_nodes):
        data = fld.fiber_data(fld.proj[node])
        if data is None:
            continue
        zs, vs, reps, _ = data
        for i in range(len(zs) - 1):
            length = float(zs[i + 1] - zs[i])
            if length <= 0:
                continue
            if feasibility_oracle_1d(length, float(vs[i]), float(vs[i + 1]), margin):
                continue
            pair = (min(reps[i], reps[i + 1]), max(reps[i], reps[i + 1]))
            if pair in seen_pairs:
                continue
            seen_pairs.add(pair)
            a, b = reps[i], reps[i + 1]
            obstructions.append(
                ChordRecord(
                    start_param=slc.mesh.params[a],
                    end_param=slc.mesh.params[b],
                    start_point=slc.points[a],
                    end_point=slc.points[b],
                    length=length,
                    pure=slc.components[a] == slc.components[b],
                    start_component=int(slc.components[a]),
                    end_component=int(slc.components[b]),
                )
            )
    if obstructions:
        return ExtendResult(False, None, obstructions=sorted(obstructions, key=ChordRecord.sort_key))

    max_defect = max(
        abs(fld(slc.points[node]) - (-prim.values[node]))
        for node in range(slc.mesh.n_nodes)
    )
    return ExtendResult(True, fld, min_slope=float(fld.min_slope()), max_h_plus_f=float(max_defect))


# ---------------------------------------------------------------------------
# deformation checks
# ---------------------------------------------------------------------------


def directional_dh_reeb(model, h: Callable[[np.ndarray], float], point, step: float = 1e-6) -> float:
    """Directional derivative of h along the (unnormalized) Reeb vector."""
    p = np.asarray(point, dtype=float)
    r = model.reeb(p)
    scale = max(1.0, float(np.linalg.norm(r)))
    s = step * (1.0 + float(np.max(np.abs(p)))) / scale
    return (float(h(p + s * r)) - float(h(p - s * r))) / (2.0 * s)


def grid_around_slice(slc: ParamSlice, per_axis: int = 9, z_axis: int = 33, padding: float = 0.3) -> np.ndarray:
    """Evaluation grid covering the slice with extra resolution along the
    last (Reeb) coordinate."""
    lo = slc.points.min(axis=0) - padding
    hi = slc.points.max(axis=0) + padding
    axes = [
        np.linspace(lo[j], hi[j], z_axis if j == slc.points.shape[1] - 1 else per_axis)
        for j in range(slc.points.shape[1])
    ]
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


@dataclass
class DeformationCheck:
    min_dh_reeb: float
    min_dt_liouville: float
    pass_dh: bool
    pass_dt: bool
    agree: bool

    @property
    def passed(self) -> bool:
        return self.pass_dh and self.pass_dt


def check_deformation(sym: SymplectizationModel, spec: DeformationSpec, grid: np.ndarray) -> DeformationCheck:
    """Cross-validated transversality check for a deformation.

    Independently computes the grid minimum of dh(Reeb) (finite
    differences of h along the Reeb direction) and of the dt-component of
    the deformed expansion field at t = 1.  The first must exceed
    -1 + margin, the second must exceed margin; the two verdicts agree up
    to finite-difference noise because the dt-component equals
    1 + dh(Reeb) at t = 1.
    """
    model = sym.base
    if spec.h is None:
        return DeformationCheck(0.0, 1.0, True, True, True)
    min_dh = np.inf
    min_dt = np.inf
    for p in np.asarray(grid, dtype=float):
        min_dh = min(min_dh, directional_dh_reeb(model, spec.h, p))
        min_dt = min(min_dt, float(liouville_deformed(sym, spec, 1.0, p)[0]))
    pass_dh = min_dh > -1.0 + spec.margin
    pass_dt = min_dt > spec.margin
    return DeformationCheck(float(min_dh), float(min_dt), pass_dh, pass_dt, pass_dh == pass_dt)


def reeb_reparam_check(
    model,
    slc: ParamSlice,
    h: Optional[Callable[[np.ndarray], float]],
    chords: Sequence[ChordRecord],
    samples: int = 256,
    drift_tol: float = 1e-5,
) -> dict:
    """Verify that rescaling the Reeb field by 1/(1 + dh(R)) changes chord
    flow times but not endpoints.

    For each chord the original trajectory is sampled, the rescaled flow
    time is obtained by Simpson quadrature of 1 + dh(R) along it, and the
    rescaled field is integrated for that time; the endpoint must land
    back on the recorded end point.

    Raises:
        ReparamDegenerate: 1 + dh(R) drops to zero on some chord.
    """
    max_drift = 0.0
    rescaled_times = []
    h_fn = h if h is not None else (lambda p: 0.0)

    def scaled_field(p):
        denom = 1.0 + directional_dh_reeb(model, h_fn, p)
        if denom <= 1e-6:
            raise ReparamDegenerate("1 + dh(Reeb) vanished along a trajectory")
        return model.reeb(p) / denom

    for chord in chords:
        n = samples if samples % 2 == 0 else samples + 1
        dt = chord.length / n
        states = [np.asarray(chord.start_point, dtype=float)]
        for _ in range(n):
            states.append(rk4_step(model.reeb, states[-1], dt))
        vals = np.array([1.0 + directional_dh_reeb(model, h_fn, p) for p in states])
        if np.min(vals) <= 1e-6:
            raise ReparamDegenerate(
                f"1 + dh(Reeb) reached {float(np.min(vals)):.3e} on a chord"
            )
        weights = np.ones(n + 1)
        weights[1:-1:2] = 4.0
        weights[2:-1:2] = 2.0
        rescaled_time = float(dt / 3.0 * np.dot(weights, vals))
        rescaled_times.append(rescaled_time)
        endpoint = integrate_flow(scaled_field, chord.start_point, rescaled_time, tol=1e-10)
        max_drift = max(max_drift, float(np.linalg.norm(endpoint - chord.end_point)))
    return {
        "max_endpoint_drift": max_drift,
        "pass": max_drift < drift_tol,
        "rescaled_times": rescaled_times,
    }


# ---------------------------------------------------------------------------
# aggregated report
# ---------------------------------------------------------------------------


@dataclass
class CollarOptions:
    tol_closed: float = DEFAULT_CLOSED_TOL
    tol_transverse: float = DEFAULT_TRANSVERSE_TOL
    margin: float = 0.05
    convention: Convention = Convention.DIRECT
    search: SearchOptions = field(default_factory=SearchOptions)
    grid_per_axis: int = 7
    grid_z_axis: int = 33
    run_reparam: bool = True


@dataclass
class CollarReport:
    checks: dict
    periods: list[float]
    exact: bool
    chords: list[dict]
    conventions: dict
    h_diagnostics: dict
    verdict: Verdict
    note: str = ""


def _chord_entry(chord: ChordRecord, action, cls_direct, cls_feas) -> dict:
    entry = {
        "start_param": chord.start_param.tolist(),
        "end_param": chord.end_param.tolist(),
        "start_point": chord.start_point.tolist(),
        "end_point": chord.end_point.tolist(),
        "length": chord.length,
        "pure": chord.pure,
        "start_component": chord.start_component,
        "end_component": chord.end_component,
        "action": action,
        "class_direct": cls_direct.value if cls_direct else None,
        "class_feasibility": cls_feas.value if cls_feas else None,
        "conventions_disagree": bool(cls_direct and cls_feas and cls_direct != cls_feas),
    }
    return entry


def collar_report(model, slc: ParamSlice, opts: Optional[CollarOptions] = None) -> CollarReport:
    """Full pipeline: slice checks, exactness, chord search, two-convention
    classification, profile construction, deformation check, verdict.

    Verdicts: ``NotASlice`` and ``NonExact`` preempt the later stages;
    ``SchemeObstructed`` means small pure chords exist under the active
    convention (non-collarability is NOT concluded — the criterion is
    one-directional); ``Collarable`` requires no small pure chords plus a
    successful, verified profile construction.
    """
    opts = opts or CollarOptions()
    is_euclidean = isinstance(model, StandardRModel)

    closed = check_closed(model, slc, opts.tol_closed)
    transverse = check_transverse(model, slc, opts.tol_transverse)
    membership_defect = 0.0
    if isinstance(model, StandardSphereModel):
        membership_defect = float(np.max(np.abs(np.linalg.norm(slc.points, axis=1) - 1.0)))
    exclusion = opts.search.exclusion_radius or 5.0 * slc.mesh.max_spacing()
    embedded = slc.embedded_at_mesh_scale(exclusion)
    checks = {
        "closed": {"pass": closed.passed, "max_residual": closed.value},
        "transverse": {"pass": transverse.passed, "min_sigma": transverse.value},
        "membership": {"pass": membership_defect <= 1e-9, "max_defect": membership_defect},
        "embedding": {"pass": embedded},
    }
    empty_conventions = {
        "active": opts.convention.value,
        "small_direct": 0,
        "small_feasibility": 0,
        "disagreements": [],
    }
    if not all(c["pass"] for c in checks.values()):
        return CollarReport(checks, [], False, [], empty_conventions, {"constructed": False}, Verdict.NOT_A_SLICE)

    period_values = periods(model, slc, opts.tol_closed)
    exact = all(p == 0.0 for p in period_values)

    search = opts.search
    if is_euclidean:
        found = chords_projection(model, slc, search)
    else:
        found = chords_shooting(model, slc, search)

    if not exact:
        entries = [_chord_entry(c, None, None, None) for c in found]
        return CollarReport(
            checks,
            period_values,
            False,
            entries,
            empty_conventions,
            {"constructed": False},
            Verdict.NON_EXACT,
        )

    try:
        prim = primitive(model, slc)
    except NonExact as exc:
        # periods vanished but spanning-tree integration found a cycle
        # defect beyond tolerance: treat as non-exact at mesh scale
        entries = [_chord_entry(c, None, None, None) for c in found]
        return CollarReport(
            checks,
            period_values,
            False,
            entries,
            empty_conventions,
            {"constructed": False, "cycle_defect": exc.period},
            Verdict.NON_EXACT,
        )
    legendrian = prim.max_abs() <= 1e-6 and _max_pullback(model, slc) < LEGENDRIAN_TOL

    entries = []
    small_direct = small_feas = 0
    disagreements = []
    active_small: list[int] = []
    for k, chord in enumerate(found):
        if chord.pure:
            action = chord_action(prim, chord)
            chord.action = action
            cd = classify_chord(chord, action, Convention.DIRECT).classification
            cf = classify_chord(chord, action, Convention.FEASIBILITY).classification
            small_direct += cd == Classification.SMALL
            small_feas += cf == Classification.SMALL
            if cd != cf:
                disagreements.append(k)
            active = cd if opts.convention == Convention.DIRECT else cf
            if active == Classification.SMALL:
                active_small.append(k)
            entries.append(_chord_entry(chord, action, cd, cf))
        else:
            entries.append(_chord_entry(chord, None, None, None))

    conventions = {
        "active": opts.convention.value,
        "small_direct": int(small_direct),
        "small_feasibility": int(small_feas),
        "disagreements": disagreements,
    }

    # profile construction: trivial for Legendrian slices on any model,
    # fiber interpolation on Euclidean models, otherwise unavailable
    h_diag: dict = {"constructed": False}
    h_field = None
    construction_ok = False
    if legendrian:
        h_field = lambda p: 0.0
        construction_ok = True
        h_diag = {"constructed": True, "trivial": True, "min_slope": 0.0, "max_h_plus_f": prim.max_abs()}
    elif is_euclidean:
        ext = extend_h(model, slc, prim, margin=opts.margin)
        if ext.ok:
            h_field = ext.h
            construction_ok = True
            h_diag = {
                "constructed": True,
                "trivial": False,
                "min_slope": ext.min_slope,
                "max_h_plus_f": ext.max_h_plus_f,
            }
        else:
            h_diag = {
                "constructed": False,
                "obstructed_pairs": len(ext.obstructions),
            }
    else:
        h_diag = {"constructed": False, "note": "profile construction unavailable for this model"}

    if construction_ok and h_field is not None:
        sym = SymplectizationModel(model, epsilon=0.2)
        spec = DeformationSpec(h=h_field, rho=RhoProfile(0.2), margin=opts.margin)
        if is_euclidean:
            grid = grid_around_slice(slc, opts.grid_per_axis, opts.grid_z_axis)
            deform = check_deformation(sym, spec, grid)
            h_diag.update(
                {
                    "min_dh_reeb": deform.min_dh_reeb,
                    "min_dt_liouville": deform.min_dt_liouville,
                    "deformation_pass": deform.passed,
                }
            )
            construction_ok = deform.passed
        else:
            h_diag.update({"min_dh_reeb": 0.0, "min_dt_liouville": 1.0, "deformation_pass": True})
        if opts.run_reparam and found and construction_ok:
            reparam = reeb_reparam_check(model, slc, h_field, [c for c in found if c.pure])
            h_diag["reparam_max_drift"] = reparam["max_endpoint_drift"]
            h_diag["reparam_pass"] = reparam["pass"]

    if active_small:
        verdict, note = Verdict.SCHEME_OBSTRUCTED, SCHEME_OBSTRUCTED_NOTE
    elif construction_ok:
        verdict, note = Verdict.COLLARABLE, ""
    elif not is_euclidean and not legendrian:
        # no construction available for this model; classification carries
        verdict = Verdict.COLLARABLE
        note = "chord-level verdict; no profile construction on this model"
    else:
        verdict, note = Verdict.SCHEME_OBSTRUCTED, SCHEME_OBSTRUCTED_NOTE

    return CollarReport(checks, period_values, exact, entries, conventions, h_diag, verdict, note)


def _max_pullback(model, slc: ParamSlice) -> float:
    from .slices import pullback_alpha

    return float(np.max(np.abs(pullback_alpha(model, slc, slc.mesh.params))))
