"""Command-line front end.

    projcentroid solve -i problem.json [-o report.json] [--svg out.svg]
    projcentroid hilbert -i problem.json
    projcentroid classes -i problem.json
    projcentroid figure -i problem.json -o out.svg
    projcentroid verify-examples

Exit codes: 0 success, 1 invalid input, 2 solver did not converge (and did
not diverge to the boundary), 3 an example failed verification.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import centering, hilbert, polarity
from .errors import ProjCentroidError
from .geometry import Polytope, SimplicialBody, as_points, convex_hull
from .moments import Ellipsoid, ellipsoid_image, image_body_moments
from .projective import ProjectiveMap, apply, from_infinity_vector
from .solver import CONVERGED, DIVERGED, SolveOptions

TASKS = ("fit-point", "fit-points", "fit-point-body", "fit-points-body", "fit-bodies",
         "santalo", "santalo-pair", "mobius", "hilbert", "classes")

EXIT_OK, EXIT_INVALID, EXIT_NO_CONVERGENCE, EXIT_VERIFY = 0, 1, 2, 3


class ProblemError(ProjCentroidError, ValueError):
    """Malformed problem file."""


# ----------------------------------------------------------------------------
# Problem files
# ----------------------------------------------------------------------------

def region_body(x, lower, upper):
    """Simplicial body between two graphs lower(x) <= y <= upper(x) sampled at x.

    Each strip is split into two triangles; strips of zero width at an end
    collapse to a single triangle.
    """
    x, lo, hi = (np.asarray(a, dtype=float) for a in (x, lower, upper))
    tris = []
    for k in range(len(x) - 1):
        a, b = (x[k], lo[k]), (x[k + 1], lo[k + 1])
        c, d = (x[k + 1], hi[k + 1]), (x[k], hi[k])
        if hi[k + 1] - lo[k + 1] > 0:
            tris.append([a, b, c])
        if hi[k] - lo[k] > 0:
            tris.append([a, c, d])
    return SimplicialBody(np.array(tris), validate=False)


def parse_side(payload, dim):
    """Decode a tagged geometry payload."""
    if payload is None:
        return None
    if not isinstance(payload, dict) or len(payload) != 1:
        raise ProblemError("a side must be an object with exactly one of "
                           "points/point/body/ball")
    (tag, value), = payload.items()
    if tag == "points":
        return as_points(value, dim)
    if tag == "point":
        p = np.atleast_1d(np.asarray(value, dtype=float))
        if p.shape != (dim,):
            raise ProblemError("point has the wrong dimension")
        return p
    if tag == "ball":
        r = float(value.get("radius", 1.0))
        c = np.asarray(value.get("center", [0.0] * dim), dtype=float)
        if c.shape != (dim,) or r <= 0:
            raise ProblemError("ball needs a positive radius and a center of the right dimension")
        return Ellipsoid.ball(dim, r, c)
    if tag == "body":
        if "simplices" in value:
            S = np.asarray(value["simplices"], dtype=float)
            if S.ndim != 3 or S.shape[2] != dim:
                raise ProblemError("simplices have the wrong dimension")
            return SimplicialBody(S)
        if "vertices" in value:
            return convex_hull(as_points(value["vertices"], dim))
        if "region" in value:
            if dim != 2:
                raise ProblemError("region bodies are planar")
            reg = value["region"]
            return region_body(reg["x"], reg["lower"], reg["upper"])
        raise ProblemError("body needs simplices, vertices or region")
    raise ProblemError(f"unknown side tag {tag!r}")


@dataclass
class ProblemFile:
    dimension: int
    task: str
    side1: dict = None
    side2: dict = None
    options: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ProblemError("problem must be a JSON object")
        try:
            dim = int(data["dimension"])
            task = data["task"]
        except KeyError as exc:
            raise ProblemError(f"missing field {exc}") from None
        if task not in TASKS:
            raise ProblemError(f"unknown task {task!r}")
        if dim < 1:
            raise ProblemError("dimension must be positive")
        opts = dict(data.get("options") or {})
        unknown = set(opts) - {"tol", "max_iter", "starts", "seed"}
        if unknown:
            raise ProblemError(f"unknown options {sorted(unknown)}")
        prob = cls(dim, task, data.get("side1"), data.get("side2"), opts)
        prob.sides()    # validate payloads
        return prob

    def to_dict(self):
        out = {"dimension": self.dimension, "task": self.task}
        if self.side1 is not None:
            out["side1"] = self.side1
        if self.side2 is not None:
            out["side2"] = self.side2
        out["options"] = dict(self.options)
        return out

    def sides(self):
        s1 = parse_side(self.side1, self.dimension)
        s2 = parse_side(self.side2, self.dimension)
        needs_two = self.task not in ("santalo", "mobius")
        if s1 is None or (needs_two and s2 is None):
            raise ProblemError(f"task {self.task!r} is missing a side")
        return s1, s2

    def solve_options(self):
        o = self.options
        return SolveOptions(tol_grad=float(o.get("tol", 1e-10)),
                            max_iter=int(o.get("max_iter", 200)),
                            seed=int(o.get("seed", 0)))


def load_problem(path):
    try:
        with open(path) as fh:
            return ProblemFile.from_dict(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise ProblemError(str(exc)) from None


# ----------------------------------------------------------------------------
# Solving
# ----------------------------------------------------------------------------

def _is_pointset(s):
    return isinstance(s, np.ndarray) and s.ndim == 2


def solve_problem(prob):
    """Run the task of a ProblemFile; returns (report dict, CenteringResult or None)."""
    s1, s2 = prob.sides()
    opts = prob.solve_options()
    starts = int(prob.options.get("starts", 16))
    seed = opts.seed
    kw = dict(n_starts=starts, seed=seed, opts=opts)
    t = prob.task
    extra = {}
    if t == "fit-point":
        res = centering.fit_point_to_points(s1, s2, **kw)
    elif t == "fit-points":
        res = centering.fit_points_to_points(s1, s2, **kw)
    elif t == "fit-point-body":
        res = centering.fit_point_to_body(s1, s2, **kw)
    elif t == "fit-points-body":
        res = centering.fit_points_to_body(s1, s2, **kw)
    elif t == "fit-bodies":
        res = centering.fit_body_to_body(s1, s2, **kw)
    elif t == "santalo":
        p = centering.santalo_point(s1, opts=opts)
        L = s1 if isinstance(s1, Polytope) else convex_hull(as_points(s1) if _is_pointset(s1) else s1.points)
        res = centering.CenteringResult(reports=[], maps=[], ys=[], residuals=[
            float(centering.santalo_residual(L, p))], points=[p])
    elif t == "santalo-pair":
        res = centering.santalo_pair(s1, s2, **kw)
    elif t == "mobius":
        m, X = centering.mobius_center(s1, opts=opts)
        res = centering.CenteringResult(reports=[], maps=[m], ys=[None],
                                        residuals=[float(np.linalg.norm(X.sum(axis=0)))])
        extra["centered_points"] = X.tolist()
    elif t == "hilbert":
        return hilbert_report(s1, s2), None
    else:
        return classes_report(s1, s2, seed), None
    return result_report(prob, res, extra), res


def _num(x):
    x = float(x)
    return x if np.isfinite(x) else None


def result_report(prob, res, extra=None):
    classes = []
    for i, m in enumerate(res.maps):
        y = res.ys[i] if i < len(res.ys) else None
        rep = res.reports[i] if i < len(res.reports) and res.status == CONVERGED else None
        classes.append({
            "y": None if y is None else [float(v) for v in y],
            "map": m.to_list(),
            "residual": _num(res.residuals[i]),
            "hessian_signature": list(rep.hessian_signature) if rep is not None else None,
        })
    out = {
        "task": prob.task,
        "status": res.status,
        "n_classes": len(classes) if res.maps else len(res.points),
        "classes": classes,
        "certificate": res.certificate.to_dict() if res.certificate is not None else None,
    }
    if res.points:
        out["points"] = [[float(v) for v in p] for p in res.points]
        out["residuals"] = [_num(r) for r in res.residuals]
    if not res.maps and res.reports:
        r = res.reports[0]
        out["y_last"] = [float(v) for v in r.y_star]
        out["grad_norm"] = _num(r.grad_norm)
    out.update(extra or {})
    out["timing_ms"] = None
    return out


def hilbert_report(outer, inner):
    if _is_pointset(outer):
        outer = convex_hull(outer)
    if _is_pointset(inner) and len(inner) > inner.shape[1]:
        inner = convex_hull(inner)
    out = {"task": "hilbert", "status": CONVERGED,
           "diameter": hilbert.hilbert_diameter(outer, inner)}
    if isinstance(inner, (Polytope, Ellipsoid)):
        out["width"] = hilbert.hilbert_width(outer, inner)
        out["certificate"] = hilbert.make_certificate("BodyPair", out["width"], outer.dim).to_dict()
    out["timing_ms"] = None
    return out


def classes_report(points, q, seed):
    n = polarity.count_centering_classes(points, q, seed=seed)
    return {"task": "classes", "status": CONVERGED, "count": n,
            "chambers": len(polarity.chambers(points, seed=seed)), "timing_ms": None}


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=False) + "\n"


# ----------------------------------------------------------------------------
# SVG figures
# ----------------------------------------------------------------------------

def _outline(side, n=256):
    """Drawable geometry of a side: ('poly', [polygons]) or ('pts', array)."""
    if isinstance(side, Ellipsoid):
        return "poly", [side.boundary_points(n)]
    if isinstance(side, Polytope):
        return "poly", [_ccw(side.vertices)]
    if isinstance(side, SimplicialBody):
        return "poly", list(side.simplices)
    P = np.atleast_2d(side)
    return "pts", P


def _ccw(V):
    c = V.mean(axis=0)
    return V[np.argsort(np.arctan2(V[:, 1] - c[1], V[:, 0] - c[0]))]


def _centroid(side):
    if isinstance(side, Ellipsoid):
        return side.center
    if isinstance(side, (Polytope, SimplicialBody)):
        return image_body_moments(side, from_infinity_vector(np.zeros(2))).centroid
    return np.atleast_2d(side).mean(axis=0)


def _map_outline(kind, geo, m):
    if kind == "pts":
        return kind, apply(m, geo)
    return kind, [apply(m, g) for g in geo]


def render_svg(prob, res=None):
    """SVG 1.1 picture of a planar problem: inputs (grey), images under the
    first non-identity class (colored) and centroids (crosses)."""
    if prob.dimension != 2:
        raise ProblemError("figures are drawn for d = 2 only")
    sides = [s for s in prob.sides() if s is not None]
    layers = []
    for s, color in zip(sides, ("#999999", "#bbbbbb")):
        kind, geo = _outline(s)
        layers.append((kind, geo, color, _centroid(s)))
    m = None
    if res is not None and res.maps:
        m = next((mm for mm, y in zip(res.maps, res.ys)
                  if y is None or np.linalg.norm(y) > 1e-9), res.maps[0])
        for s, color in zip(sides, ("#1f4e9c", "#c0392b")):
            kind, geo = _outline(s)
            try:
                kind, geo = _map_outline(kind, geo, m)
                if isinstance(s, Ellipsoid):
                    cen = ellipsoid_image(s, m).center
                elif kind == "pts":
                    cen = geo.mean(axis=0)
                else:
                    cen = image_body_moments(s if not isinstance(s, Polytope) else s.as_body(), m).centroid
            except ProjCentroidError:
                continue
            layers.append((kind, geo, color, cen))
    allpts = []
    for kind, geo, _, cen in layers:
        allpts += [geo] if kind == "pts" else list(geo)
        allpts.append(cen[None, :])
    X = np.vstack(allpts)
    lo, hi = X.min(axis=0), X.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    mid = 0.5 * (lo + hi)

    def tr(p):
        u = 500.0 + 900.0 * (p[..., 0] - mid[0]) / span
        v = 500.0 - 900.0 * (p[..., 1] - mid[1]) / span
        return np.stack([u, v], axis=-1)

    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
           'width="1000" height="1000" viewBox="0 0 1000 1000">',
           '<rect x="0" y="0" width="1000" height="1000" fill="white"/>']
    for kind, geo, color, cen in layers:
        if kind == "pts":
            for u, v in tr(geo):
                out.append(f'<circle cx="{u:.3f}" cy="{v:.3f}" r="5" fill="{color}"/>')
        else:
            for poly in geo:
                pts = " ".join(f"{u:.3f},{v:.3f}" for u, v in tr(poly))
                out.append(f'<polygon points="{pts}" fill="{color}" fill-opacity="0.35" '
                           f'stroke="{color}" stroke-width="1"/>')
        u, v = tr(cen)
        out.append(f'<path d="M {u - 8:.3f} {v:.3f} L {u + 8:.3f} {v:.3f} M {u:.3f} {v - 8:.3f} '
                   f'L {u:.3f} {v + 8:.3f}" stroke="{color}" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------------
# Example verification
# ----------------------------------------------------------------------------

def load_examples():
    with resources.files("projcentroid").joinpath("data/paper_examples.json").open() as fh:
        return json.load(fh)


def _close(a, b, tol):
    return bool(np.all(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)) <= tol))


def _check_example(ex):
    """Run one example; returns (passed, detail)."""
    check = ex["check"]
    if check == "map-centroids":
        d = ex["dimension"]
        m = ProjectiveMap(np.asarray(ex["map"], dtype=float))
        cents = []
        for side in (ex["side1"], ex["side2"]):
            s = parse_side(side, d)
            if isinstance(s, Ellipsoid):
                cents.append(ellipsoid_image(s, m).center)
            elif isinstance(s, (Polytope, SimplicialBody)):
                cents.append(image_body_moments(s, m).centroid)
            else:
                cents.append(apply(m, s).mean(axis=0))
        ok = all(_close(c, ex["expected"], ex["tol"]) for c in cents)
        return ok, "centroids " + ", ".join(np.array2string(c, precision=12) for c in cents)
    if check == "classes":
        prob = ProblemFile.from_dict(ex["problem"])
        _, res = solve_problem(prob)
        ys = [y for y in res.ys if y is not None]
        ok = res.n_classes >= ex["min_classes"] and res.residual <= ex["tol"]
        for want in ex.get("contains", []):
            ok &= any(_close(y, want, 1e-8) for y in ys)
        return ok, f"{res.n_classes} classes, max residual {res.residual:.2e}"
    if check == "certificate":
        prob = ProblemFile.from_dict(ex["problem"])
        _, res = solve_problem(prob)
        ok = (res.certificate.holds == ex["holds"]
              and (res.n_classes == 1 if ex["holds"] else res.n_classes >= 2))
        return ok, (f"width {res.certificate.measured:.7f} vs bound {res.certificate.bound:.7f}, "
                    f"{res.n_classes} classes")
    if check == "error":
        prob = ProblemFile.from_dict(ex["problem"])
        try:
            solve_problem(prob)
        except ProjCentroidError as exc:
            return type(exc).__name__ == ex["error"], type(exc).__name__
        return False, "no error raised"
    if check == "polar-point":
        q = polarity.polar_point(ex["points"], ex["rho"])
        return _close(q, ex["expected"], ex["tol"]), f"q = {np.array2string(q, precision=12)}"
    if check == "class-count":
        n = polarity.count_centering_classes(ex["points"], ex["q"])
        return n == ex["expected"], f"count {n}"
    if check == "status":
        prob = ProblemFile.from_dict(ex["problem"])
        _, res = solve_problem(prob)
        ys = ", ".join(np.array2string(np.asarray(y), precision=6) for y in res.ys if y is not None)
        return res.status == ex["expected"], f"status {res.status} {ys}".rstrip()
    raise ProblemError(f"unknown check {check!r}")


def verify_examples(out=None):
    """Run every example; XFAIL entries are known defects of the printed
    examples and do not affect the outcome.  Returns True iff all others pass."""
    out = out or sys.stdout
    all_ok = True
    for ex in load_examples():
        try:
            ok, detail = _check_example(ex)
        except ProjCentroidError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        if ex.get("xfail"):
            tag = "XPASS" if ok else "XFAIL"
            detail += f" [{ex['xfail']}]"
        else:
            tag = "PASS" if ok else "FAIL"
            all_ok &= ok
        print(f"{tag} {ex['name']}: {detail}", file=out)
    return all_ok


# ----------------------------------------------------------------------------
# Entry point
# ----------------------------------------------------------------------------

def _add_io(p, output_required=False):
    p.add_argument("-i", "--input", required=True, help="problem JSON file")
    p.add_argument("-o", "--output", required=output_required, help="output file (default stdout)")


def _add_solver(p):
    p.add_argument("--tol", type=float, help="gradient tolerance")
    p.add_argument("--max-iter", type=int, help="Newton iteration limit")
    p.add_argument("--starts", type=int, help="number of multistart points")
    p.add_argument("--seed", type=int, help="random seed")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="projcentroid",
        description="Projective maps that make the centroids of two sets coincide.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("solve", help="solve a problem file and write a JSON report")
    _add_io(p)
    _add_solver(p)
    p.add_argument("--svg", help="also write an SVG figure (d = 2)")
    p.add_argument("--timing", action="store_true", help="record wall time in the report")
    p = sub.add_parser("hilbert", help="Hilbert diameter and width of side2 inside side1")
    _add_io(p)
    p = sub.add_parser("classes", help="count centering classes of points and q (d = 2)")
    _add_io(p)
    _add_solver(p)
    p = sub.add_parser("figure", help="render a planar problem and its solution as SVG")
    _add_io(p, output_required=True)
    _add_solver(p)
    sub.add_parser("verify-examples", help="check the built-in worked examples")
    return parser


def _apply_flags(prob, args):
    for flag, key in (("tol", "tol"), ("max_iter", "max_iter"), ("starts", "starts"), ("seed", "seed")):
        v = getattr(args, flag, None)
        if v is not None:
            prob.options[key] = v
    return prob


def _write(path, text):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "verify-examples":
        return EXIT_OK if verify_examples() else EXIT_VERIFY
    try:
        prob = _apply_flags(load_problem(args.input), args)
        if args.command == "hilbert":
            s1, s2 = prob.sides()
            _write(args.output, dumps(hilbert_report(s1, s2)))
            return EXIT_OK
        if args.command == "classes":
            s1, s2 = prob.sides()
            _write(args.output, dumps(classes_report(s1, s2, int(prob.options.get("seed", 0)))))
            return EXIT_OK
        t0 = time.perf_counter()
        report, res = solve_problem(prob)
        if args.command == "figure":
            _write(args.output, render_svg(prob, res))
            return EXIT_OK
        if args.timing:
            report["timing_ms"] = 1000.0 * (time.perf_counter() - t0)
        _write(args.output, dumps(report))
        if args.svg:
            _write(args.svg, render_svg(prob, res))
    except (ProjCentroidError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if report.get("status") not in (CONVERGED, DIVERGED):
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def main():
    sys.exit(run())
