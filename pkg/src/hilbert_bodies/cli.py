"""Command-line entry points.

Subcommands: ``validate`` (body-spec sanity report), ``section`` (table of
section volumes along one direction), ``identities`` (self-check suites for
the interval transform), ``classify`` (the full ellipsoid-compatibility
verdict) and ``sweep`` (per-direction residual/exponent data for external
plotting).  Every file written starts with '#'-prefixed header lines that
echo the tool version and the full configuration, so any output can be
regenerated from itself.  Files are written to a temp path and renamed, so
a failed run never leaves a partial file.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__, geometry, hilbert
from .classify import NoiseFloorError, verdict
from .geometry import BodySpecError, body_to_dict, direction
from .hilbert import WeightedSeries

_EXIT_INVALID = 2
_EXIT_MALFORMED = 3
_EXIT_INCONSISTENT = 4
_EXIT_NOISE = 5


class _CliError(Exception):
    """Error with a contractual exit code; message goes to stderr."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# shared plumbing


def _load_body_checked(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            spec = json.load(fh)
    except json.JSONDecodeError as exc:
        raise _CliError(_EXIT_MALFORMED, f"malformed JSON in {path}: {exc}") from exc
    except OSError as exc:
        raise _CliError(_EXIT_MALFORMED, f"cannot read body spec: {exc}") from exc
    try:
        return geometry.body_from_dict(spec)
    except BodySpecError as exc:
        raise _CliError(_EXIT_INVALID, f"invalid body spec: {exc}") from exc


def _parse_direction(text: str, dim: int):
    try:
        coords = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise _CliError(_EXIT_INVALID, f"bad --dir value {text!r}: {exc}") from exc
    if len(coords) != dim:
        raise _CliError(
            _EXIT_INVALID, f"--dir has {len(coords)} components, body has dimension {dim}"
        )
    try:
        return direction(coords)
    except BodySpecError as exc:
        raise _CliError(_EXIT_INVALID, str(exc)) from exc


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _emit(text: str, out: str | None) -> None:
    if out:
        _atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _header_lines(command: str, body=None, **params) -> list[str]:
    lines = [f"# hilbert-bodies {__version__}", f"# command: {command}"]
    if body is not None:
        compact = json.dumps(body_to_dict(body), sort_keys=True, separators=(",", ":"))
        lines.append(f"# body: {compact}")
    if params:
        lines.append("# config: " + " ".join(f"{k}={v}" for k, v in params.items()))
    return lines


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)  # shortest round-trip text keeps files byte-stable
    return "" if v is None else str(v)


def _csv_text(header_lines: list[str], columns: list[str], rows) -> str:
    out = list(header_lines)
    out.append(",".join(columns))
    for row in rows:
        out.append(",".join(_cell(v) for v in row))
    return "\n".join(out) + "\n"


def _json_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# validate


def cmd_validate(ns) -> int:
    body = _load_body_checked(ns.path)
    kind = body_to_dict(body)["kind"]
    print(f"kind: {kind}")
    print(f"dimension: {body.dim}")
    print("construction checks: passed (convexity, positivity, symmetry as applicable)")
    center = np.asarray(body.center, dtype=float)
    for i in range(body.dim):
        e = np.zeros(body.dim)
        e[i] = 1.0
        iv = geometry.support_interval(body, direction(e))
        step = 0.05 * 0.5 * iv.width
        probe = center + step * e
        g = float(geometry._centered_gauge_many(body, probe[None, :])[0])
        print(f"gauge sample: center + {step:.6g} * e_{i} -> {g:.6g}")
        if not 0.0 < g < 1.0:
            raise _CliError(_EXIT_INVALID, "gauge sanity sample left the body interior")
    print("valid")
    return 0


# ---------------------------------------------------------------------------
# section


def cmd_section(ns) -> int:
    body = _load_body_checked(ns.path)
    d = _parse_direction(ns.dir, body.dim)
    profile = geometry.sample_profile(
        body, d, node_count=ns.nodes, mc_samples=ns.samples, seed=ns.seed
    )
    errs = profile.stderr if profile.stderr is not None else [None] * profile.nodes.size
    cfg = dict(nodes=ns.nodes, samples=ns.samples, seed=ns.seed)
    if ns.format == "json":
        doc = {
            "version": __version__,
            "command": "section",
            "body": body_to_dict(body),
            "config": cfg,
            "direction": [float(c) for c in d.coords],
            "interval": [profile.interval.h_minus, profile.interval.h_plus],
            "source": profile.source,
            "rows": [
                {"t": float(t), "A": float(v), "stderr": (None if e is None else float(e))}
                for t, v, e in zip(profile.nodes, profile.values, errs)
            ],
        }
        _emit(_json_text(doc), ns.out)
        return 0
    head = _header_lines("section", body, **cfg, dir=ns.dir)
    head.append(f"# interval: [{profile.interval.h_minus!r}, {profile.interval.h_plus!r}]")
    rows = [
        (float(t), float(v), profile.source, None if e is None else float(e))
        for t, v, e in zip(profile.nodes, profile.values, errs)
    ]
    _emit(_csv_text(head, ["t", "A", "source", "stderr"], rows), ns.out)
    return 0


# ---------------------------------------------------------------------------
# identities


def _interior_grid(a: float, b: float, count: int) -> np.ndarray:
    return a + (b - a) * (np.arange(count) + 0.5) / count


def _random_interval(rng) -> tuple[float, float]:
    a = float(rng.uniform(-5.0, 4.5))
    b = float(rng.uniform(a + 0.5, 5.0))
    return a, b


def _suite_arch(seed: int):
    """H of the bare square-root arch is the linear map t - (a+b)/2."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    worst = 0.0
    for _ in range(20):
        a, b = _random_interval(rng)
        series = WeightedSeries(a, b, np.array([1.0]))
        ts = _interior_grid(a, b, 100)
        vals = hilbert.hilbert_on_interval(series, ts)
        worst = max(worst, float(np.max(np.abs(vals - (ts - 0.5 * (a + b))))))
    return worst, 1e-8, 20


def _multiply_by_t(series: WeightedSeries) -> WeightedSeries:
    """Series of t * F(t): exact coefficient map in the U-basis.

    With t = m + r u and u U_k = (U_{k+1} + U_{k-1})/2 (U_{-1} = 0) the new
    coefficients are m g_j + (r/2)(g_{j-1} + g_{j+1}).
    """
    g = series.coeffs
    m = 0.5 * (series.a + series.b)
    r = series.half_width
    out = np.zeros(g.size + 1)
    out[: g.size] += m * g
    out[1:] += 0.5 * r * g
    out[: g.size - 1] += 0.5 * r * g[1:]
    return WeightedSeries(series.a, series.b, out)


def _series_total_integral(series: WeightedSeries) -> float:
    # integral of w U_k over (a,b) is r^2 pi/2 for k = 0 and zero otherwise
    return series.half_width**2 * math.pi * 0.5 * float(series.coeffs[0])


def _suite_intertwine(seed: int):
    """H(t F)(t) = t HF(t) - (1/pi) * integral of F."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    worst = 0.0
    for _ in range(100):
        a, b = _random_interval(rng)
        k = int(rng.integers(0, 13))
        series = WeightedSeries(a, b, rng.normal(size=k + 1))
        ts = _interior_grid(a, b, 50)
        lhs = hilbert.hilbert_on_interval(_multiply_by_t(series), ts)
        rhs = ts * hilbert.hilbert_on_interval(series, ts) - (
            _series_total_integral(series) / math.pi
        )
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst, 1e-8, 100


def _suite_inversion(seed: int):
    """Recover sqrt-weighted polynomials from their transforms."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    worst = 0.0
    for _ in range(50):
        a, b = _random_interval(rng)
        deg = int(rng.integers(0, 11))
        series = WeightedSeries(a, b, rng.normal(size=deg + 1))
        total = _series_total_integral(series)

        def hf(x, s=series):
            return hilbert.hilbert_on_interval(s, x)

        ts = _interior_grid(a, b, 40)
        rec = np.array(
            [hilbert.finite_hilbert_invert(hf, a, b, total, t) for t in ts]
        )
        tru = hilbert.eval_weighted_series(series, ts)
        worst = max(worst, float(np.max(np.abs(rec - tru))))
    return worst, 1e-6, 50


def _suite_recurrence(_seed: int):
    """hilbert_sqrt_monomial vs the principal-value quadrature oracle.

    Also checks the degree law: H(s^k w) is a polynomial of degree k + 1.
    """
    worst = 0.0
    for a, b in ((-1.0, 1.0), (-0.3, 2.2)):
        for k in range(13):
            pc = hilbert.hilbert_sqrt_monomial(a, b, k)
            if pc.degree != k + 1:
                return math.inf, 1e-7, 26
            for frac in (0.21, 0.52, 0.83):
                t = a + (b - a) * frac

                def f(s, k=k, a=a, b=b):
                    return s**k * math.sqrt((b - s) * (s - a))

                ref = hilbert.pv_hilbert_oracle(f, a, b, t)
                err = abs(float(pc(t)) - ref) / max(1.0, abs(ref))
                worst = max(worst, err)
    return worst, 1e-7, 26


_SUITES = {
    "arch": _suite_arch,
    "intertwine": _suite_intertwine,
    "inversion": _suite_inversion,
    "recurrence": _suite_recurrence,
}


def cmd_identities(ns) -> int:
    names = list(_SUITES) if ns.suite == "all" else [ns.suite]
    all_pass = True
    print(f"identity checks (seed {ns.seed})")
    for name in names:
        err, tol, cases = _SUITES[name](ns.seed)
        ok = err < tol
        all_pass &= ok
        print(
            f"{name:<11} cases={cases:<3} max_error={err:.3e} "
            f"tol={tol:.0e} {'PASS' if ok else 'FAIL'}"
        )
    return 0 if all_pass else 1


# ---------------------------------------------------------------------------
# classify and sweep


_ODD_DIM_NOTE = (
    "note: dimension is odd; a round odd-dimensional ball already has "
    "polynomial section volume, so polynomiality of A alone certifies "
    "nothing there and the transform conditions reject such bodies too"
)


def _direction_row(index: int, r) -> tuple:
    d = r.direction.coords
    angle = math.atan2(d[1], d[0]) if d.size == 2 else None
    row = [index]
    if angle is not None:
        row.append(float(angle))
    row.extend(float(c) for c in d)
    row.extend(
        [
            r.residual_i,
            r.residual_ii,
            r.residual_iii,
            r.degree_i,
            r.degree_ii,
            r.degree_iii,
            r.asymptotics.exponent_minus,
            r.asymptotics.exponent_plus,
            r.q_factor.h_minus,
            r.q_factor.h_plus,
            r.threshold_used,
            r.warning or "",
        ]
    )
    return tuple(row)


def _direction_columns(dim: int) -> list[str]:
    cols = ["index"]
    if dim == 2:
        cols.append("angle")
    cols.extend(f"dir_{i}" for i in range(dim))
    cols.extend(
        [
            "residual_i",
            "residual_ii",
            "residual_iii",
            "degree_i",
            "degree_ii",
            "degree_iii",
            "exponent_minus",
            "exponent_plus",
            "q_root_minus",
            "q_root_plus",
            "threshold_used",
            "warning",
        ]
    )
    return cols


def _verdict_doc(body, v, cfg: dict) -> dict:
    return {
        "version": __version__,
        "command": "classify",
        "body": body_to_dict(body),
        "config": cfg,
        "ellipsoid_compatible": v.ellipsoid_compatible,
        "conditions_consistent": v.conditions_consistent,
        "pass_i": v.pass_i,
        "pass_ii": v.pass_ii,
        "pass_iii": v.pass_iii,
        "threshold": v.threshold,
        "diagnostics": list(v.diagnostics),
        "skipped": list(v.skipped),
        "directions": [
            {
                "direction": [float(c) for c in r.direction.coords],
                "residual_i": r.residual_i,
                "residual_ii": r.residual_ii,
                "residual_iii": r.residual_iii,
                "degree_i": r.degree_i,
                "degree_ii": r.degree_ii,
                "degree_iii": r.degree_iii,
                "q_roots": [r.q_factor.h_minus, r.q_factor.h_plus],
                "exponent_minus": r.asymptotics.exponent_minus,
                "exponent_plus": r.asymptotics.exponent_plus,
                "threshold_used": r.threshold_used,
                "warning": r.warning,
            }
            for r in v.directions
        ],
    }


def _run_verdict(ns, body):
    try:
        return verdict(
            body,
            direction_count=ns.directions,
            node_count=ns.nodes,
            n_max_degree=ns.max_degree,
            threshold=ns.threshold,
            mc_samples=ns.samples,
            seed=ns.seed,
        )
    except NoiseFloorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(
            "advice: raise --samples (Monte Carlo stderr shrinks like "
            "1/sqrt(samples)); quadrupling the samples halves the noise floor",
            file=sys.stderr,
        )
        raise _CliError(_EXIT_NOISE, "monte-carlo noise floor breached") from exc


def cmd_classify(ns) -> int:
    body = _load_body_checked(ns.path)
    cfg = dict(
        directions=ns.directions,
        nodes=ns.nodes,
        max_degree=ns.max_degree,
        threshold=ns.threshold,
        samples=ns.samples,
        seed=ns.seed,
    )
    v = _run_verdict(ns, body)
    doc = _verdict_doc(body, v, cfg)
    if ns.out:
        stem = ns.out
        for suffix in (".json", ".csv"):
            if stem.endswith(suffix):
                stem = stem[: -len(suffix)]
        _atomic_write(stem + ".json", _json_text(doc))
        head = _header_lines("classify", body, **cfg)
        head.append(f"# ellipsoid_compatible: {v.ellipsoid_compatible}")
        rows = [_direction_row(i, r) for i, r in enumerate(v.directions)]
        _atomic_write(
            stem + ".csv", _csv_text(head, _direction_columns(body.dim), rows)
        )
    elif ns.format == "csv":
        head = _header_lines("classify", body, **cfg)
        head.append(f"# ellipsoid_compatible: {v.ellipsoid_compatible}")
        rows = [_direction_row(i, r) for i, r in enumerate(v.directions)]
        sys.stdout.write(_csv_text(head, _direction_columns(body.dim), rows))
    else:
        sys.stdout.write(_json_text(doc))
    for line in v.diagnostics:
        print(f"diagnostic: {line}", file=sys.stderr)
    if body.dim % 2 == 1 and not v.ellipsoid_compatible:
        print(_ODD_DIM_NOTE, file=sys.stderr)
    if not v.conditions_consistent:
        return _EXIT_INCONSISTENT
    return 0 if v.ellipsoid_compatible else 1


def cmd_sweep(ns) -> int:
    body = _load_body_checked(ns.path)
    cfg = dict(
        directions=ns.directions,
        nodes=ns.nodes,
        max_degree=ns.max_degree,
        threshold=ns.threshold,
        samples=ns.samples,
        seed=ns.seed,
    )
    v = _run_verdict(ns, body)
    head = _header_lines("sweep", body, **cfg)
    for s in v.skipped:
        head.append(f"# skipped: {s}")
    rows = [_direction_row(i, r) for i, r in enumerate(v.directions)]
    out = ns.out or ns.plot_data
    if ns.format == "json":
        doc = _verdict_doc(body, v, cfg)
        doc["command"] = "sweep"
        _emit(_json_text(doc), out)
    else:
        _emit(_csv_text(head, _direction_columns(body.dim), rows), out)
    return 0


# ---------------------------------------------------------------------------
# the parser


def _add_common(p, *, mc=True, sweep=False):
    p.add_argument("--nodes", type=int, default=128, help="profile nodes (default 128)")
    p.add_argument("--seed", type=int, default=42, help="deterministic seed (default 42)")
    if mc:
        p.add_argument(
            "--samples", type=int, default=10**6,
            help="Monte Carlo samples per section (default 1000000)",
        )
    if sweep:
        p.add_argument(
            "--directions", type=int, default=32,
            help="size of the direction grid (default 32)",
        )
        p.add_argument(
            "--max-degree", type=int, default=16,
            help="highest polynomial degree tried (default 16)",
        )
        p.add_argument(
            "--threshold", type=float, default=1e-6,
            help="relative sup-residual pass threshold (default 1e-6)",
        )
    p.add_argument("--out", help="output file (stdout when omitted)")
    p.add_argument(
        "--format", choices=("csv", "json"), default="csv",
        help="output format (default csv)",
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hilbert-bodies",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "exit codes: 0 ok/compatible, 1 check failed/not compatible, "
            "2 invalid body, 3 malformed JSON, 4 inconsistent conditions, "
            "5 Monte Carlo noise floor.  HILBERT_BODIES_THREADS caps the "
            "direction-sweep parallelism; HILBERT_BODIES_PURE=1 forces the "
            "pure-python kernels."
        ),
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a body-spec JSON file")
    p.add_argument("path")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("section", help="table of section volumes along a direction")
    p.add_argument("path")
    p.add_argument("--dir", required=True, help="direction, comma-separated reals")
    _add_common(p)
    p.set_defaults(fn=cmd_section)

    p = sub.add_parser("identities", help="transform self-check suites")
    p.add_argument(
        "--suite", choices=("arch", "intertwine", "inversion", "recurrence", "all"),
        default="all",
    )
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(fn=cmd_identities)

    p = sub.add_parser("classify", help="ellipsoid-compatibility verdict")
    p.add_argument("path")
    _add_common(p, sweep=True)
    p.set_defaults(fn=cmd_classify, format="json")

    p = sub.add_parser("sweep", help="per-direction residual/exponent table")
    p.add_argument("path")
    p.add_argument("--plot-data", help="alias for --out", dest="plot_data")
    _add_common(p, sweep=True)
    p.set_defaults(fn=cmd_sweep)

    return ap


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.fn(ns)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
