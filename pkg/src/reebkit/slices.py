"""Parametrized slices: meshes, pullback of the contact form, the two
slice checks (closed pullback, transversality to the Reeb kernel),
periods over generator loops, and primitives of exact pullbacks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import NonExact, NotClosed, OffManifold
from .numerics import line_quadrature

DEFAULT_CIRCLE_NODES = 256
DEFAULT_INTERVAL_NODES = 129
DEFAULT_CLOSED_TOL = 1e-6
DEFAULT_TRANSVERSE_TOL = 1e-4
PERIOD_ZERO_TOL = 1e-8


@dataclass(frozen=True)
class DomainFactor:
    lo: float
    hi: float
    periodic: bool

    @property
    def span(self) -> float:
        return self.hi - self.lo


def circle_factor(period: float = 2 * np.pi) -> DomainFactor:
    return DomainFactor(0.0, period, True)


def interval_factor(lo: float, hi: float) -> DomainFactor:
    return DomainFactor(lo, hi, False)


class Mesh:
    """Regular grid on a product-of-intervals domain.

    Periodic factors omit the duplicate endpoint and wrap their edges, so
    the edge graph of a circle factor is a cycle.  Node order follows
    row-major multi-index order.
    """

    def __init__(self, factors: Sequence[DomainFactor], resolution: Sequence[int]):
        if len(factors) != len(resolution):
            raise ValueError("one resolution per domain factor required")
        self.factors = tuple(factors)
        self.resolution = tuple(int(r) for r in resolution)
        axes = []
        for f, m in zip(self.factors, self.resolution):
            if m < 2:
                raise ValueError("need at least 2 nodes per factor")
            if f.periodic:
                axes.append(f.lo + f.span * np.arange(m) / m)
            else:
                axes.append(np.linspace(f.lo, f.hi, m))
        self.axes = axes
        grids = np.meshgrid(*axes, indexing="ij")
        self.params = np.stack([g.ravel() for g in grids], axis=-1)
        self.shape = tuple(len(a) for a in axes)
        self.n_nodes = self.params.shape[0]

    @property
    def param_dim(self) -> int:
        return len(self.factors)

    def spacing(self, axis: int) -> float:
        f, m = self.factors[axis], self.resolution[axis]
        return f.span / m if f.periodic else f.span / (m - 1)

    def max_spacing(self) -> float:
        return max(self.spacing(j) for j in range(self.param_dim))

    def edges(self):
        """Yield (node_a, node_b) index pairs for all grid edges."""
        idx = np.arange(self.n_nodes).reshape(self.shape)
        for axis in range(self.param_dim):
            a = idx
            b = np.roll(idx, -1, axis=axis)
            if not self.factors[axis].periodic:
                sl = [slice(None)] * self.param_dim
                sl[axis] = slice(0, -1)
                a, b = a[tuple(sl)], b[tuple(sl)]
            yield from zip(a.ravel().tolist(), b.ravel().tolist())

    def neighbors(self) -> list[list[int]]:
        """Adjacency lists of the grid graph."""
        adj: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for a, b in self.edges():
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def edge_vector(self, a: int, b: int) -> np.ndarray:
        """Parameter displacement from node a to node b along their edge,
        unwrapped across periodic seams."""
        d = self.params[b] - self.params[a]
        for j, f in enumerate(self.factors):
            if f.periodic:
                if d[j] > 0.5 * f.span:
                    d[j] -= f.span
                elif d[j] < -0.5 * f.span:
                    d[j] += f.span
        return d

    def param_distance(self, u, v) -> float:
        """Distance on the domain, shortest way around periodic factors."""
        d = np.abs(np.asarray(u, dtype=float) - np.asarray(v, dtype=float))
        for j, f in enumerate(self.factors):
            if f.periodic:
                d[..., j] = np.minimum(d[..., j], f.span - d[..., j])
        return float(np.linalg.norm(d)) if d.ndim == 1 else np.linalg.norm(d, axis=-1)

    def wrap(self, u: np.ndarray) -> np.ndarray:
        """Map parameters into the fundamental domain."""
        u = np.array(u, dtype=float)
        for j, f in enumerate(self.factors):
            if f.periodic:
                u[..., j] = f.lo + np.mod(u[..., j] - f.lo, f.span)
        return u


class ParamSlice:
    """Compact parametrized submanifold candidate with its mesh.

    ``immersion`` maps parameter arrays of shape (..., param_dim) to
    ambient points (..., ambient_dim); ``jacobian``, when given, returns
    (..., ambient_dim, param_dim).  Without it, derivatives fall back to
    central differences.  Connected components are computed from mesh
    connectivity, never declared.
    """

    def __init__(
        self,
        factors: Sequence[DomainFactor],
        immersion: Callable[[np.ndarray], np.ndarray],
        jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None,
        resolution: Optional[Sequence[int]] = None,
        fd_step: float = 1e-6,
    ):
        self.factors = tuple(factors)
        self.immersion = immersion
        self.analytic_jacobian = jacobian
        self.fd_step = fd_step
        if resolution is None:
            resolution = [
                DEFAULT_CIRCLE_NODES if f.periodic else DEFAULT_INTERVAL_NODES
                for f in factors
            ]
        self.mesh = Mesh(factors, resolution)
        self.points = np.asarray(immersion(self.mesh.params), dtype=float)
        if self.points.ndim != 2 or self.points.shape[0] != self.mesh.n_nodes:
            raise ValueError("immersion must map (N, param_dim) to (N, ambient_dim)")
        self.ambient_dim = self.points.shape[1]
        self.components = self._label_components()
        self.n_components = int(self.components.max()) + 1

    @property
    def param_dim(self) -> int:
        return self.mesh.param_dim

    def _label_components(self) -> np.ndarray:
        labels = np.full(self.mesh.n_nodes, -1, dtype=int)
        adj = self.mesh.neighbors()
        comp = 0
        for root in range(self.mesh.n_nodes):
            if labels[root] >= 0:
                continue
            stack = [root]
            labels[root] = comp
            while stack:
                a = stack.pop()
                for b in adj[a]:
                    if labels[b] < 0:
                        labels[b] = comp
                        stack.append(b)
            comp += 1
        return labels

    def immerse(self, u) -> np.ndarray:
        return np.asarray(self.immersion(np.asarray(u, dtype=float)), dtype=float)

    def jacobian_at(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.analytic_jacobian is not None:
            return np.asarray(self.analytic_jacobian(u), dtype=float)
        cols = []
        for j in range(self.param_dim):
            s = self.fd_step * (1.0 + np.abs(u[..., j]))
            up = u.copy()
            um = u.copy()
            up[..., j] += s
            um[..., j] -= s
            cols.append((self.immerse(up) - self.immerse(um)) / (2.0 * s)[..., None])
        return np.stack(cols, axis=-1)

    def nearest_node(self, u) -> int:
        d = self.mesh.params - self.mesh.wrap(np.asarray(u, dtype=float))
        for j, f in enumerate(self.factors):
            if f.periodic:
                d[:, j] = (d[:, j] + 0.5 * f.span) % f.span - 0.5 * f.span
        return int(np.argmin(np.sum(d * d, axis=1)))

    def component_at(self, u) -> int:
        return int(self.components[self.nearest_node(u)])

    def coincident_point_pairs(self, ambient_tol: float = 1e-9):
        """Mesh node pairs whose ambient images collide within tolerance.

        Used by the embedding proxy: any such pair must be at parameter
        distance below the exclusion radius to count as benign.
        """
        scale = max(1.0, float(np.max(np.abs(self.points))))
        keys: dict[tuple, list[int]] = {}
        q = np.round(self.points / (ambient_tol * scale)).astype(np.int64)
        for i, key in enumerate(map(tuple, q)):
            keys.setdefault(key, []).append(i)
        pairs = []
        for bucket in keys.values():
            for i in range(len(bucket)):
                for j in range(i + 1, len(bucket)):
                    a, b = bucket[i], bucket[j]
                    if np.linalg.norm(self.points[a] - self.points[b]) <= ambient_tol * scale:
                        pairs.append((a, b))
        return pairs

    def embedded_at_mesh_scale(self, exclusion_radius: float) -> bool:
        return all(
            self.mesh.param_distance(self.mesh.params[a], self.mesh.params[b])
            <= exclusion_radius
            for a, b in self.coincident_point_pairs()
        )


@dataclass
class CheckResult:
    passed: bool
    value: float  # max residual for closedness, min singular value for transversality


def pullback_alpha(model, slc: ParamSlice, u) -> np.ndarray:
    """Components of the pulled-back contact form at parameter point(s) u.

    Component k is alpha(immersion(u), d(immersion)/du_k); shape (..., param_dim).
    """
    u = np.asarray(u, dtype=float)
    pts = slc.immerse(u)
    if not np.all(model.on_manifold(pts, tol=1e-6)):
        raise OffManifold("immersion image leaves the model manifold")
    jac = slc.jacobian_at(u)
    comps = [model.alpha(pts, jac[..., k]) for k in range(slc.param_dim)]
    return np.stack(comps, axis=-1)


def check_closed(model, slc: ParamSlice, tol: float = DEFAULT_CLOSED_TOL) -> CheckResult:
    """Max antisymmetrized derivative of the pullback over mesh nodes.

    One-dimensional domains pass vacuously with residual 0 (there are no
    2-forms on curves).
    """
    if slc.param_dim == 1:
        return CheckResult(True, 0.0)
    u = slc.mesh.params
    derivs = []
    for j in range(slc.param_dim):
        s = 1e-6 * (1.0 + np.abs(u[:, j]))
        up = u.copy()
        um = u.copy()
        up[:, j] += s
        um[:, j] -= s
        derivs.append((pullback_alpha(model, slc, up) - pullback_alpha(model, slc, um)) / (2.0 * s)[:, None])
    residual = 0.0
    for j in range(slc.param_dim):
        for k in range(j + 1, slc.param_dim):
            residual = max(residual, float(np.max(np.abs(derivs[j][:, k] - derivs[k][:, j]))))
    return CheckResult(residual <= tol, residual)


def check_transverse(model, slc: ParamSlice, tol: float = DEFAULT_TRANSVERSE_TOL) -> CheckResult:
    """Minimum singular value of [immersion Jacobian | Reeb] over the mesh.

    The kernel of d_alpha is spanned by the Reeb vector, so tangency to it
    (or a rank drop of the Jacobian) shows up as a vanishing singular value.
    """
    jac = slc.jacobian_at(slc.mesh.params)
    reeb = model.reeb(slc.points)
    mat = np.concatenate([jac, reeb[..., None]], axis=-1)
    sigma = np.linalg.svd(mat, compute_uv=False)
    min_sigma = float(np.min(sigma[:, -1]))
    return CheckResult(min_sigma > tol, min_sigma)


def _edge_integral(model, slc: ParamSlice, u_a: np.ndarray, u_b: np.ndarray, segments: int = 4) -> float:
    form = lambda u: pullback_alpha(model, slc, u)
    return line_quadrature(form, u_a, u_b, segments=segments)


def periods(model, slc: ParamSlice, tol_closed: float = DEFAULT_CLOSED_TOL) -> list[float]:
    """Integral of the pullback around each periodic generator loop.

    Values below 1e-8 are snapped to exactly zero.  Raises NotClosed when
    the closedness check fails at ``tol_closed``.
    """
    closed = check_closed(model, slc, tol_closed)
    if not closed.passed:
        raise NotClosed(f"closedness residual {closed.value:.3e} exceeds {tol_closed:.3e}")
    mesh = slc.mesh
    out = []
    idx = np.arange(mesh.n_nodes).reshape(mesh.shape)
    for axis, f in enumerate(mesh.factors):
        if not f.periodic:
            continue
        sl = [0] * mesh.param_dim
        sl[axis] = slice(None)
        chain = idx[tuple(sl)]
        total = 0.0
        m = len(chain)
        for k in range(m):
            a, b = int(chain[k]), int(chain[(k + 1) % m])
            u_a = mesh.params[a]
            u_b = u_a + mesh.edge_vector(a, b)
            total += _edge_integral(model, slc, u_a, u_b)
        out.append(0.0 if abs(total) < PERIOD_ZERO_TOL else total)
    return out


class PrimitiveField:
    """Discrete primitive f of the pulled-back form, one value per node.

    Gauge: f = 0 at the anchor node of each component.  Off-node values
    are reconstructed by integrating the pullback from the nearest node,
    which keeps them exactly consistent with the discrete values.
    """

    def __init__(self, model, slc: ParamSlice, values: np.ndarray, anchors: dict[int, int], cycle_residual: float):
        self.model = model
        self.slice = slc
        self.values = values
        self.anchors = anchors
        self.cycle_residual = cycle_residual

    def value_at(self, u) -> float:
        slc = self.slice
        node = slc.nearest_node(u)
        u_node = slc.mesh.params[node]
        # unwrap the query next to the node across periodic seams
        u = slc.mesh.wrap(np.asarray(u, dtype=float))
        delta = u - u_node
        for j, f in enumerate(slc.factors):
            if f.periodic:
                if delta[j] > 0.5 * f.span:
                    delta[j] -= f.span
                elif delta[j] < -0.5 * f.span:
                    delta[j] += f.span
        return float(self.values[node]) + _edge_integral(self.model, slc, u_node, u_node + delta)

    def shifted(self, offsets: dict[int, float]) -> "PrimitiveField":
        """Copy with a constant added per component (gauge change)."""
        values = self.values.copy()
        for comp, c in offsets.items():
            values[self.slice.components == comp] += c
        return PrimitiveField(self.model, self.slice, values, self.anchors, self.cycle_residual)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


def primitive(
    model,
    slc: ParamSlice,
    cycle_tol: float = 1e-6,
    n_cycle_checks: int = 100,
    rng_seed: int = 0,
) -> PrimitiveField:
    """Integrate the pullback along a spanning tree of the mesh graph.

    Requires every period to vanish (raises NonExact with the offending
    value otherwise).  Path independence is verified on random off-tree
    edges: each closes a cycle against the tree, and its quadrature must
    match the endpoint difference of f within ``cycle_tol``.
    """
    for p in periods(model, slc):
        if p != 0.0:
            raise NonExact(p)
    mesh = slc.mesh
    adj = mesh.neighbors()
    values = np.zeros(mesh.n_nodes)
    visited = np.zeros(mesh.n_nodes, dtype=bool)
    tree_edges: set[tuple[int, int]] = set()
    anchors: dict[int, int] = {}
    for comp in range(slc.n_components):
        root = int(np.argmax(slc.components == comp))
        anchors[comp] = root
        visited[root] = True
        queue = [root]
        while queue:
            a = queue.pop(0)
            for b in adj[a]:
                if not visited[b]:
                    visited[b] = True
                    u_a = mesh.params[a]
                    values[b] = values[a] + _edge_integral(
                        model, slc, u_a, u_a + mesh.edge_vector(a, b)
                    )
                    tree_edges.add((min(a, b), max(a, b)))
                    queue.append(b)

    off_tree = [
        (a, b)
        for a, b in mesh.edges()
        if (min(a, b), max(a, b)) not in tree_edges
    ]
    rng = np.random.default_rng(rng_seed)
    if off_tree:
        take = min(n_cycle_checks, len(off_tree))
        chosen = rng.choice(len(off_tree), size=take, replace=False)
        worst = 0.0
        for k in chosen:
            a, b = off_tree[int(k)]
            u_a = mesh.params[a]
            integral = _edge_integral(model, slc, u_a, u_a + mesh.edge_vector(a, b))
            worst = max(worst, abs(values[a] + integral - values[b]))
        if worst > cycle_tol:
            raise NonExact(worst)
    else:
        worst = 0.0
    return PrimitiveField(model, slc, values, anchors, worst)


def load_mesh_slice(
    path,
    param_dim: int,
    periodic: Sequence[bool],
    resolution: Optional[Sequence[int]] = None,
) -> ParamSlice:
    """Build a ParamSlice from a delimited node table.

    Row format: parameter coordinates first, ambient coordinates after; a
    header row names the columns.  Nodes must fill a regular grid (every
    combination of the per-factor coordinate values present exactly once).
    Commas or whitespace delimit fields.
    """
    from scipy.interpolate import CubicSpline, RegularGridInterpolator

    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(lines) < 2:
        raise ValueError("mesh file needs a header row and at least one node row")
    delim = "," if "," in lines[0] else None
    header = [c.strip() for c in lines[0].split(delim)]
    rows = np.array([[float(c) for c in ln.split(delim)] for ln in lines[1:]])
    if rows.shape[1] != len(header):
        raise ValueError("row width does not match header")
    if rows.shape[1] <= param_dim:
        raise ValueError("fewer columns than param_dim + 1")
    if len(periodic) != param_dim:
        raise ValueError("one periodicity flag per parameter factor required")

    params, ambient = rows[:, :param_dim], rows[:, param_dim:]
    axes = [np.unique(params[:, j]) for j in range(param_dim)]
    shape = tuple(len(a) for a in axes)
    if int(np.prod(shape)) != rows.shape[0]:
        raise ValueError("nodes do not form a full regular grid")
    order = np.lexsort(tuple(params[:, j] for j in reversed(range(param_dim))))
    grid_vals = ambient[order].reshape(shape + (ambient.shape[1],))

    factors = []
    for j, per in enumerate(periodic):
        lo, hi = float(axes[j][0]), float(axes[j][-1])
        if per:
            step = float(np.median(np.diff(axes[j])))
            factors.append(DomainFactor(lo, hi + step, True))
        else:
            factors.append(DomainFactor(lo, hi, False))

    if param_dim == 1:
        xs = axes[0]
        if periodic[0]:
            xs_ext = np.append(xs, factors[0].hi)
            vals_ext = np.concatenate([grid_vals, grid_vals[:1]], axis=0)
            interp = CubicSpline(xs_ext, vals_ext, bc_type="periodic")
        else:
            interp = CubicSpline(xs, grid_vals)

        def immersion(u):
            return interp(np.asarray(u, dtype=float)[..., 0])

        def jacobian(u):
            return interp(np.asarray(u, dtype=float)[..., 0], 1)[..., None]

    else:
        ext_axes, vals = [], grid_vals
        for j, per in enumerate(periodic):
            if per:
                ext_axes.append(np.append(axes[j], factors[j].hi))
                vals = np.concatenate([vals, np.take(vals, [0], axis=j)], axis=j)
            else:
                ext_axes.append(axes[j])
        rgi = RegularGridInterpolator(tuple(ext_axes), vals, method="linear")

        def immersion(u):
            u = np.asarray(u, dtype=float)
            wrapped = u.copy()
            for j, f in enumerate(factors):
                if f.periodic:
                    wrapped[..., j] = f.lo + np.mod(wrapped[..., j] - f.lo, f.span)
            return rgi(wrapped)

        jacobian = None

    if resolution is None:
        resolution = shape
    return ParamSlice(factors, immersion, jacobian=jacobian, resolution=resolution)
