"""Barrier-safe damped Newton iteration, Hessian classification and multistart.

Two iteration modes are used:

* ``optimize`` -- Newton steps with an Armijo backtracking line search on the
  objective in the functional's sense (minimize or maximize); falls back to
  the gradient direction when the Hessian has the wrong signature.
* ``root`` -- Newton steps on grad F = 0 with merit |grad F|^2, which also
  reaches saddles and critical points of the "wrong" type.

Every trial point is checked to have positive slack before it is evaluated,
so iterates never leave the open domain.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import StartOutsideDomain
from .functionals import MAX, TAU_DOM

CONVERGED = "Converged"
DIVERGED = "DivergedToBoundary"
MAX_ITER = "MaxIter"

_ESCAPE = 1e8
_BOUNDARY_SLACK = 1e-13
_DEDUP_TOL = 1e-6
_START_LEVELS = (0.5, 0.1, 0.02)


@dataclass
class SolveOptions:
    tol_grad: float = 1e-10
    max_iter: int = 200
    backtrack: float = 0.5
    armijo: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if not self.tol_grad > 0:
            raise ValueError("tol_grad must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass
class SolveReport:
    y_star: np.ndarray
    grad_norm: float
    iterations: int
    hessian_signature: tuple
    status: str
    value: float = float("nan")
    history: list = field(default_factory=list, repr=False)

    @property
    def converged(self):
        return self.status == CONVERGED


def signature(H, rel_zero=1e-8):
    """(n_pos, n_zero, n_neg) of a symmetric matrix."""
    ev = np.linalg.eigvalsh(0.5 * (H + H.T))
    scale = np.max(np.abs(ev)) if ev.size else 0.0
    zero = np.abs(ev) <= rel_zero * scale
    return int(np.sum((ev > 0) & ~zero)), int(np.sum(zero)), int(np.sum((ev < 0) & ~zero))


def classify(f, y):
    """Hessian signature of f at y."""
    return signature(f.hessian(y))


def _newton_direction(H, g, sign):
    """Newton direction if sign*H is positive definite, else None."""
    try:
        L = np.linalg.cholesky(sign * H)
    except np.linalg.LinAlgError:
        return None
    return -np.linalg.solve(L.T, np.linalg.solve(L, sign * g))


def _root_direction(H, g):
    return -np.linalg.lstsq(H, g, rcond=None)[0]


def solve_critical(f, y0, opts=None, mode="optimize"):
    """Find a critical point of f starting from y0.

    ``mode`` is "optimize" (descent/ascent per ``f.sense``) or "root".
    """
    opts = opts or SolveOptions()
    y = np.atleast_1d(np.asarray(y0, dtype=float)).copy()
    if y.shape != (f.dim,) or not f.slack(y) > TAU_DOM:
        raise StartOutsideDomain("start point must be strictly inside the domain")
    sign = -1.0 if f.sense == MAX else 1.0       # minimize sign * f
    history = []
    status = MAX_ITER
    val, g, H = f.evaluate(y)
    it = 0
    for it in range(opts.max_iter + 1):
        gn = float(np.linalg.norm(g))
        history.append((float(val), gn, float(f.slack(y))))
        if np.linalg.norm(y) > _ESCAPE:
            # unbounded domain: the hyperplane sent to infinity approaches
            # the origin, where gradients vanish only asymptotically
            status = DIVERGED
            break
        if gn <= opts.tol_grad:
            status = CONVERGED
            break
        if f.slack(y) < _BOUNDARY_SLACK:
            status = DIVERGED
            break
        if it == opts.max_iter:
            break
        if mode == "root":
            step = _root_direction(H, g)
            merit = gn * gn
        else:
            step = _newton_direction(H, g, sign)
            if step is None or sign * (g @ step) >= 0:
                step = -sign * g
        alpha = 1.0
        accepted = False
        while alpha > 1e-20:
            y_new = y + alpha * step
            if f.slack(y_new) > TAU_DOM:
                v_new, g_new, H_new = f._evaluate(y_new)
                if mode == "root":
                    gn_new = float(g_new @ g_new)
                    ok = gn_new <= (1.0 - 2.0 * opts.armijo * alpha) * merit
                else:
                    decrease = sign * (v_new - val)
                    ok = decrease <= opts.armijo * alpha * sign * (g @ step)
                    # below rounding level of the objective, accept any step
                    # that reduces the gradient
                    if not ok and abs(v_new - val) <= 1e-13 * (1.0 + abs(val)):
                        ok = np.linalg.norm(g_new) < gn
                if ok and np.all(np.isfinite(g_new)):
                    accepted = True
                    break
            alpha *= opts.backtrack
        if not accepted:
            status = DIVERGED if f.slack(y) < 1e-8 else MAX_ITER
            break
        y, val, g, H = y_new, v_new, g_new, H_new
    return SolveReport(
        y_star=y,
        grad_norm=float(np.linalg.norm(g)),
        iterations=it,
        hessian_signature=signature(H),
        status=status,
        value=float(val),
        history=history,
    )


def _ray_to_slack(f, u, level):
    """Point t*u with slack(t*u) = level (slack is concave, slack(0) >= level)."""
    lo, hi = 0.0, 1.0
    while f.slack(hi * u) > level:
        lo, hi = hi, 2.0 * hi
        if hi > 1e12:
            return lo * u
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if f.slack(mid * u) > level:
            lo = mid
        else:
            hi = mid
    return lo * u


def start_points(f, n_starts, seed=0):
    """Origin first (when interior), then random directions scaled so the
    slack equals 0.5, 0.1, 0.02 in turn."""
    rng = np.random.default_rng(seed)
    origin = np.zeros(f.dim)
    starts = []
    if f.slack(origin) > TAU_DOM:
        starts.append(origin)
    base = f.slack(origin)
    k = 0
    while len(starts) < n_starts:
        u = rng.normal(size=f.dim)
        u /= np.linalg.norm(u)
        level = _START_LEVELS[k % len(_START_LEVELS)] * max(base, TAU_DOM)
        k += 1
        if base > TAU_DOM:
            starts.append(_ray_to_slack(f, u, level))
        else:
            starts.append(u)
    return starts[:n_starts]


def multistart(f, n_starts=16, seed=0, opts=None, modes=("optimize", "root")):
    """Run the solver from many starts and return the distinct critical points.

    Converged reports are deduplicated by |y_i - y_j| < 1e-6 in start order.
    If none converges, the first report is returned alone so its status is
    visible to the caller.
    """
    if n_starts < 1:
        raise ValueError("n_starts must be at least 1")
    opts = opts or SolveOptions(seed=seed)
    found, first = [], None
    for y0 in start_points(f, n_starts, seed):
        if not f.slack(y0) > TAU_DOM:
            continue
        for mode in modes:
            rep = solve_critical(f, y0, opts, mode=mode)
            first = first or rep
            if rep.converged and all(np.linalg.norm(rep.y_star - r.y_star) >= _DEDUP_TOL for r in found):
                found.append(rep)
    if not found and first is not None:
        return [first]
    return found
