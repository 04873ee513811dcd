"""Built-in contact models and their symplectization.

Two families with closed-form contact data are provided:

* ``StandardRModel(n)``: Y = R^(2n-1) with coordinates
  (x_1, y_1, ..., x_{n-1}, y_{n-1}, z), contact form dz - sum(y_i dx_i),
  Reeb field the unit z-direction.
* ``StandardSphereModel(n)``: Y = S^(2n-1) in R^(2n) with coordinates
  (x_1, y_1, ..., x_n, y_n) and the restriction of
  (1/2) sum(x_i dy_i - y_i dx_i).  The 1/2 normalization is a convention
  of this toolkit; with it the Reeb field is 2(-y_1, x_1, ..., -y_n, x_n)
  and the flow is the rotation z_j -> e^{2it} z_j with period pi.

All evaluators broadcast over leading axes: points and vectors have shape
(..., ambient_dim).  Models are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import OffManifold, UnsupportedModel
from .numerics import jacobian_fd


class StandardRModel:
    """Euclidean model with alpha = dz - sum(y_i dx_i) and Reeb field d/dz."""

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("n must be >= 2")
        self.n = n
        self.contact_dim = 2 * n - 1
        self.ambient_dim = 2 * n - 1
        self.name = f"r{2 * n - 1}"

    def alpha(self, points, vectors):
        p = np.asarray(points, dtype=float)
        v = np.asarray(vectors, dtype=float)
        return v[..., -1] - np.sum(p[..., 1:-1:2] * v[..., 0:-1:2], axis=-1)

    def d_alpha(self, points, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return np.sum(
            u[..., 0:-1:2] * v[..., 1:-1:2] - u[..., 1:-1:2] * v[..., 0:-1:2], axis=-1
        )

    def reeb(self, points):
        p = np.asarray(points, dtype=float)
        r = np.zeros_like(p)
        r[..., -1] = 1.0
        return r

    def on_manifold(self, points, tol: float = 1e-9):
        p = np.asarray(points, dtype=float)
        return np.all(np.isfinite(p), axis=-1)

    def project(self, points):
        return np.asarray(points, dtype=float)


class StandardSphereModel:
    """Unit sphere S^(2n-1) with the (1/2)-normalized rotation-invariant form.

    Inputs near the sphere are radially projected before evaluation, i.e.
    the evaluators act through the scale-invariant extension off the
    constraint surface; points beyond the band raise OffManifold.  The
    band must admit Runge-Kutta stage points, which sit O(step^2) off the
    sphere during flow integration.
    """

    #: inputs inside this band are projected; beyond it they are rejected
    PROJECT_TOL = 1e-3

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("n must be >= 2")
        self.n = n
        self.contact_dim = 2 * n - 1
        self.ambient_dim = 2 * n
        self.name = f"s{2 * n - 1}"

    def project(self, points):
        p = np.asarray(points, dtype=float)
        r = np.linalg.norm(p, axis=-1)
        if np.any(np.abs(r - 1.0) > self.PROJECT_TOL):
            worst = float(np.max(np.abs(r - 1.0)))
            raise OffManifold(f"point off S^{self.contact_dim} by {worst:.3e}")
        return p / r[..., None]

    def alpha(self, points, vectors):
        p = self.project(points)
        v = np.asarray(vectors, dtype=float)
        x, y = p[..., 0::2], p[..., 1::2]
        vx, vy = v[..., 0::2], v[..., 1::2]
        return 0.5 * np.sum(x * vy - y * vx, axis=-1)

    def d_alpha(self, points, u, v):
        self.project(points)
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return np.sum(u[..., 0::2] * v[..., 1::2] - u[..., 1::2] * v[..., 0::2], axis=-1)

    def reeb(self, points):
        p = self.project(points)
        r = np.empty_like(p)
        r[..., 0::2] = -2.0 * p[..., 1::2]
        r[..., 1::2] = 2.0 * p[..., 0::2]
        return r

    def on_manifold(self, points, tol: float = 1e-9):
        p = np.asarray(points, dtype=float)
        return np.abs(np.linalg.norm(p, axis=-1) - 1.0) <= tol


ContactModel = StandardRModel | StandardSphereModel

#: manifest / CLI model names
MODEL_BUILDERS: dict[str, Callable[[], ContactModel]] = {
    "r3": lambda: StandardRModel(2),
    "r5": lambda: StandardRModel(3),
    "r7": lambda: StandardRModel(4),
    "s3": lambda: StandardSphereModel(2),
    "s5": lambda: StandardSphereModel(3),
}


def make_model(name: str) -> ContactModel:
    try:
        return MODEL_BUILDERS[name]()
    except KeyError:
        raise UnsupportedModel(f"unknown model name {name!r}") from None


def reeb_at(model: ContactModel, point) -> np.ndarray:
    """Reeb vector at a point, after the model's membership handling."""
    p = np.asarray(point, dtype=float)
    if not np.all(model.on_manifold(p, tol=StandardSphereModel.PROJECT_TOL)):
        raise OffManifold("point is not on the model manifold")
    return model.reeb(p)


def _smoothstep(u):
    u = np.clip(u, 0.0, 1.0)
    return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)


def _smoothstep_d(u):
    u = np.asarray(u, dtype=float)
    inside = (u > 0.0) & (u < 1.0)
    return np.where(inside, 30.0 * u * u * (1.0 - u) ** 2, 0.0)


class RhoProfile:
    """Quintic ramp on [1-epsilon, 1]: 0 below the window, 1 at t=1.

    Nondecreasing with vanishing derivative at both window ends, so the
    t=1 evaluation of deformed quantities carries no rho' term.
    """

    def __init__(self, epsilon: float = 0.2):
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        self.epsilon = float(epsilon)

    def __call__(self, t):
        return _smoothstep((np.asarray(t, dtype=float) - (1.0 - self.epsilon)) / self.epsilon)

    def derivative(self, t):
        u = (np.asarray(t, dtype=float) - (1.0 - self.epsilon)) / self.epsilon
        return _smoothstep_d(u) / self.epsilon


@dataclass(frozen=True)
class DeformationSpec:
    """Deformation data: ambient profile h, time profile rho, margin for
    the strict transversality inequality dh(Reeb) > -1.

    The time profile must ramp from 0 below 1 - epsilon to 1 at t = 1,
    nondecreasing, with vanishing slope at t = 1; this is validated on a
    sample grid at construction.
    """

    h: Optional[Callable[[np.ndarray], float]]
    rho: RhoProfile
    margin: float = 0.05
    epsilon: float = 0.2

    def __post_init__(self):
        if self.margin <= 0:
            raise ValueError("margin must be positive")
        if abs(float(self.rho(1.0)) - 1.0) > 1e-12:
            raise ValueError("rho(1) must equal 1")
        if abs(float(self.rho.derivative(1.0))) > 1e-12:
            raise ValueError("rho'(1) must vanish")
        if abs(float(self.rho(1.0 - self.epsilon))) > 1e-12:
            raise ValueError("rho must vanish at 1 - epsilon")
        ts = np.linspace(1.0 - self.epsilon, 1.0, 64)
        if np.any(np.diff(self.rho(ts)) < -1e-12):
            raise ValueError("rho must be nondecreasing")

    @staticmethod
    def trivial(margin: float = 0.05, epsilon: float = 0.2) -> "DeformationSpec":
        return DeformationSpec(h=None, rho=RhoProfile(epsilon), margin=margin, epsilon=epsilon)


class SymplectizationModel:
    """Collar (1-eps, 1+eps) x Y with the scaled form t*alpha.

    The symplectic pairing is dt ^ alpha + t * d_alpha; the undeformed
    expansion field is t * d/dt, whose dt-component is t at every point.
    Vectors on the collar are (1 + ambient_dim)-arrays with the dt
    component first.
    """

    def __init__(self, base: ContactModel, epsilon: float = 0.2):
        if not 0 < epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        self.base = base
        self.epsilon = float(epsilon)
        self.t_range = (1.0 - epsilon, 1.0 + epsilon)

    def liouville_form(self, t: float, point, vector) -> float:
        """Pairing of t*alpha with a collar vector (v_t, v_space)."""
        v = np.asarray(vector, dtype=float)
        return float(t * self.base.alpha(point, v[1:]))

    def omega(self, t: float, point, u, v) -> float:
        """Symplectic pairing dt^alpha + t*d_alpha on collar vectors."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return float(
            u[0] * self.base.alpha(point, v[1:])
            - v[0] * self.base.alpha(point, u[1:])
            + t * self.base.d_alpha(point, u[1:], v[1:])
        )

    def liouville_field(self, t: float, point) -> np.ndarray:
        out = np.zeros(1 + self.base.ambient_dim)
        out[0] = t
        return out


def hamiltonian_field(sym: SymplectizationModel, spec: DeformationSpec, t: float, point) -> np.ndarray:
    """Hamiltonian vector of H(t, x) = rho(t) h(x) on the collar.

    Solves iota_X (dt^alpha + t d_alpha) = dH by coefficient matching in
    the Euclidean model's coordinates:

        X_t    = rho * h_z
        X_xi   = rho * h_yi / t
        X_yi   = -rho * (h_xi + h_z * y_i) / t
        X_z    = rho * sum(y_i h_yi) / t - rho' * h

    Only implemented for StandardRModel bases.
    """
    base = sym.base
    if spec.h is None:
        return np.zeros(1 + base.ambient_dim)
    if not isinstance(base, StandardRModel):
        raise UnsupportedModel(
            f"Hamiltonian field not implemented for model {base.name!r}"
        )
    p = np.asarray(point, dtype=float)
    rho = float(spec.rho(t))
    rho_d = float(spec.rho.derivative(t))
    h0 = float(spec.h(p))
    grad = jacobian_fd(lambda q: np.atleast_1d(spec.h(q)), p)[0]
    gx, gy, gz = grad[0:-1:2], grad[1:-1:2], grad[-1]
    y = p[1:-1:2]
    out = np.empty(1 + base.ambient_dim)
    out[0] = rho * gz
    out[1:-1:2] = rho * gy / t            # x-components
    out[2:-1:2] = -rho * (gx + gz * y) / t  # y-components
    out[-1] = rho * float(np.dot(y, gy)) / t - rho_d * h0
    return out


def liouville_deformed(sym: SymplectizationModel, spec: DeformationSpec, t: float, point) -> np.ndarray:
    """Deformed expansion field t*d/dt + X_H at a collar point.

    At t = 1 its dt-component equals 1 + dh(Reeb), so its sign reproduces
    the transversality criterion directly.
    """
    if not sym.t_range[0] < t < sym.t_range[1]:
        raise ValueError(f"t={t} outside collar range {sym.t_range}")
    if not np.all(sym.base.on_manifold(point, tol=StandardSphereModel.PROJECT_TOL)):
        raise OffManifold("point is not on the base manifold")
    return sym.liouville_field(t, point) + hamiltonian_field(sym, spec, t, point)
