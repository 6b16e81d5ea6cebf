"""Command-line front end: spectra, wavefunction tables, verification reports.

Output contract:
* JSON documents have the top-level shape {"request", "results",
  "diagnostics", "version"} with every float rendered as a decimal string of
  17 significant digits and keys emitted in sorted order, so identical
  requests produce byte-identical bytes.
* CSV output is RFC-4180-style with a header row and carries exactly the same
  numeric strings as the JSON encoding.
* Diagnostics go to stderr, one line each, prefixed WARN: or ERROR:.

Exit codes: 0 success, 2 invalid parameters, 3 no bound state found,
4 convergence failure (and 1 for a verification suite that ran but failed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .errors import (
    ConvergenceError,
    DomainError,
    NoBoundStateError,
)
from .model import PotentialParams, admissibility
from .oracle import GridConfig, deviation_report
from .spectrum import (
    CLOSED_FORM_CASES,
    SERIES_CASES,
    SolverConfig,
    approx_energy,
    classify_branch,
    closed_form,
    solve_levels,
    spectrum_residual,
)
from .verify import run_suite
from .wavefunction import eval_ground_state, normalization

_PARAM_KEYS = ("m", "a1", "b1", "a2", "b2")


def _fmt(value):
    """17-significant-digit decimal string; round-trip stable across platforms."""
    value = float(value)
    if value == 0.0:
        value = 0.0  # normalize -0.0
    return format(value, ".17g")


def _stringify(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, dict):
        return {key: _stringify(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(item) for item in obj]
    return obj


class _Diagnostics:
    def __init__(self):
        self.lines: list[str] = []

    def warn(self, message: str):
        line = f"WARN: {message}"
        self.lines.append(line)
        print(line, file=sys.stderr)

    def error(self, message: str):
        line = f"ERROR: {message}"
        self.lines.append(line)
        print(line, file=sys.stderr)


def _max_workers() -> int:
    raw = os.environ.get("KGK_NUM_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _pmap(fn, items):
    items = list(items)
    workers = _max_workers()
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))  # map preserves order


def _load_config(path):
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise DomainError(f"config file {path} must contain a JSON object")
    return data


def _resolve(ns, config, key, default=None, cast=None):
    """Flag wins over config file; config wins over the built-in default."""
    value = getattr(ns, key.replace("-", "_"), None)
    if value is None:
        value = config.get(key, default)
    if value is None:
        return None
    return cast(value) if cast else value


def _params_from(ns, config) -> PotentialParams:
    values = {}
    for key in _PARAM_KEYS:
        default = None if key == "m" else 0.0
        value = _resolve(ns, config, key, default=default, cast=float)
        if value is None:
            raise DomainError(f"missing required parameter --{key}")
        values[key] = value
    return PotentialParams(**values)


def _require_real_a(params: PotentialParams):
    if params.a1 * params.a1 < params.a2 * params.a2:
        raise DomainError("a imaginary: a1^2 < a2^2")


def _admissibility_dict(report) -> dict:
    return {
        "a_real": report.a_real,
        "c_value": report.c_value,
        "c_nonnegative": report.c_nonnegative,
        "k_positive": report.k_positive,
        "energy_subluminal": report.energy_subluminal,
        "sqrt_domain_ok": report.sqrt_domain_ok,
        "scalar_dominance": report.scalar_dominance,
        "overall": report.overall,
        "reasons": list(report.reasons),
    }


def _level_dict(level) -> dict:
    return {
        "n": level.n,
        "branch": level.branch,
        "E": level.energy,
        "method": level.method,
        "residual": level.residual,
        "iterations": level.iterations,
        "admissibility": _admissibility_dict(level.admissibility),
    }


def _emit(ns, document: dict, csv_rows, csv_header):
    fmt = document["request"].get("format", "json")
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\r\n")
        writer.writerow(csv_header)
        for row in csv_rows:
            writer.writerow(row)
        payload = buffer.getvalue()
    else:
        payload = json.dumps(_stringify(document), indent=2, sort_keys=True) + "\n"
    output = document["request"].get("output")
    if output:
        with open(output, "w", encoding="utf-8", newline="") as handle:
            handle.write(payload)
    else:
        sys.stdout.write(payload)


def _base_request(subcommand, params, fmt, output, **options):
    request = {"subcommand": subcommand, "format": fmt}
    if output:
        request["output"] = output
    if params is not None:
        request["params"] = {key: getattr(params, key) for key in _PARAM_KEYS}
    request.update({k: v for k, v in options.items() if v is not None})
    return request


def _cmd_spectrum(ns, config, diag) -> int:
    params = _params_from(ns, config)
    _require_real_a(params)
    n_max = _resolve(ns, config, "nmax", cast=int)
    if n_max is None or n_max < 0:
        raise DomainError("--nmax is required and must be >= 0")
    branch = _resolve(ns, config, "branch", default="all")
    fmt = _resolve(ns, config, "format", default="json")
    output = _resolve(ns, config, "output")

    failures: list[str] = []

    def level_rows(n):
        try:
            return solve_levels(params, n)
        except ConvergenceError as exc:
            failures.append(f"level n={n}: {exc}")
            return []

    levels = [lvl for group in _pmap(level_rows, range(n_max + 1)) for lvl in group]
    if branch != "all":
        levels = [lvl for lvl in levels if lvl.branch == branch]
    levels.sort(key=lambda lvl: (lvl.n, lvl.branch, lvl.energy))
    for message in failures:
        diag.warn(message)

    document = {
        "request": _base_request("spectrum", params, fmt, output,
                                 nmax=n_max, branch=branch),
        "results": {"levels": [_level_dict(lvl) for lvl in levels]},
        "diagnostics": diag.lines,
        "version": __version__,
    }
    rows = [
        (lvl.n, lvl.branch, _fmt(lvl.energy), lvl.method, _fmt(lvl.residual))
        for lvl in levels
    ]
    _emit(ns, document, rows, ("n", "branch", "E", "method", "residual"))
    if failures:
        return 4
    if not levels:
        diag.error("no bound state found in the requested range")
        return 3
    return 0


def _parse_method(raw: str):
    if raw == "implicit" or raw == "oracle":
        return raw, None
    for prefix, cases in (("closed:", CLOSED_FORM_CASES), ("approx:", SERIES_CASES)):
        if raw.startswith(prefix):
            case = raw[len(prefix):]
            if case not in cases:
                raise DomainError(f"unknown case {case!r} for {prefix[:-1]} method")
            return prefix[:-1], case
    raise DomainError(
        f"unknown method {raw!r}; expected implicit, closed:<case>, "
        "approx:<case> or oracle"
    )


def _select_level(levels, branch):
    matching = [lvl for lvl in levels if lvl.branch == branch]
    if not matching:
        return None
    if branch == "particle":
        return max(matching, key=lambda lvl: lvl.energy)
    return min(matching, key=lambda lvl: lvl.energy)


def _cmd_energy(ns, config, diag) -> int:
    params = _params_from(ns, config)
    n = _resolve(ns, config, "n", cast=int)
    if n is None or n < 0:
        raise DomainError("--n is required and must be >= 0")
    method_raw = _resolve(ns, config, "method", default="implicit")
    branch = _resolve(ns, config, "branch", default="particle")
    compare = _resolve(ns, config, "compare")
    fmt = _resolve(ns, config, "format", default="json")
    output = _resolve(ns, config, "output")
    method, case = _parse_method(method_raw)
    if method in ("implicit", "oracle") or compare == "oracle":
        _require_real_a(params)

    record: dict = {"n": n}
    if method == "implicit":
        level = _select_level(solve_levels(params, n), branch)
        if level is None:
            raise NoBoundStateError(f"no {branch} root of the spectrum equation at n={n}")
        record.update(_level_dict(level))
        energy = level.energy
    elif method == "closed":
        result = closed_form(params, n, case)
        for note in result.notes:
            diag.warn(note)
        chosen = [e for e in result.energies if classify_branch(params, e) == branch]
        if not chosen:
            raise NoBoundStateError(
                f"closed form {case!r} yields no {branch} level at n={n}"
            )
        energy = max(chosen) if branch == "particle" else min(chosen)
        record.update({"branch": branch, "E": energy, "method": "closed_form",
                       "case": case,
                       "admissibility": _admissibility_dict(admissibility(params, energy))})
    elif method == "approx":
        energy = approx_energy(params, n, case)
        record.update({"branch": classify_branch(params, energy), "E": energy,
                       "method": "series_approx", "case": case})
    else:  # oracle
        report = deviation_report(params, n, branch=branch)
        energy = report.oracle_energy
        record.update({"branch": branch, "E": energy, "method": "oracle",
                       "node_count": report.shooting.node_count,
                       "match_defect": report.shooting.match_defect})

    try:
        record["residual"] = abs(spectrum_residual(params, n, energy))
    except DomainError:
        pass

    if compare == "oracle" and method != "oracle":
        report = deviation_report(params, n, branch=branch)
        record["E_oracle"] = report.oracle_energy
        record["deviation"] = abs(energy - report.oracle_energy)

    document = {
        "request": _base_request("energy", params, fmt, output, n=n,
                                 method=method_raw, branch=branch, compare=compare),
        "results": record,
        "diagnostics": diag.lines,
        "version": __version__,
    }
    header = ["n", "branch", "E", "method", "residual", "E_oracle", "deviation"]
    row = [record.get("n"), record.get("branch"), _fmt(record["E"]),
           record.get("method"),
           _fmt(record["residual"]) if "residual" in record else "",
           _fmt(record["E_oracle"]) if "E_oracle" in record else "",
           _fmt(record["deviation"]) if "deviation" in record else ""]
    _emit(ns, document, [row], header)
    return 0


def _cmd_wavefunction(ns, config, diag) -> int:
    params = _params_from(ns, config)
    _require_real_a(params)
    raw_e = _resolve(ns, config, "e", default="auto")
    n = _resolve(ns, config, "n", default=0, cast=int)
    r_min = _resolve(ns, config, "rmin", cast=float)
    r_max = _resolve(ns, config, "rmax", cast=float)
    points = _resolve(ns, config, "points", default=101, cast=int)
    normalize = bool(_resolve(ns, config, "normalize", default=False))
    fmt = _resolve(ns, config, "format", default="json")
    output = _resolve(ns, config, "output")
    if r_min is None or r_max is None:
        raise DomainError("--rmin and --rmax are required")
    if not (0.0 < r_min < r_max):
        raise DomainError(f"need 0 < rmin < rmax, got rmin={r_min}, rmax={r_max}")
    if points < 2:
        raise DomainError("--points must be >= 2")

    if raw_e == "auto":
        level = _select_level(solve_levels(params, n), "particle")
        if level is None:
            raise NoBoundStateError(f"no particle root found at n={n} to seed --e auto")
        energy = level.energy
    else:
        energy = float(raw_e)

    scale = 1.0
    norm_constant = None
    if normalize:
        norm = normalization(params, energy)
        scale = norm.norm_constant
        norm_constant = norm.norm_constant

    step = (r_max - r_min) / (points - 1)
    rows = []
    for i in range(points):
        r = r_min + i * step
        g = eval_ground_state(params, energy, r)
        rows.append({"r": r, "chi": g.chi, "phi": g.phi, "psi": scale * g.psi,
                     "W": g.w, "dW": g.dw})

    results = {"energy": energy, "rows": rows}
    if norm_constant is not None:
        results["norm_constant"] = norm_constant
    document = {
        "request": _base_request("wavefunction", params, fmt, output, e=raw_e, n=n,
                                 rmin=r_min, rmax=r_max, points=points,
                                 normalize=normalize or None),
        "results": results,
        "diagnostics": diag.lines,
        "version": __version__,
    }
    csv_rows = [
        tuple(_fmt(row[key]) for key in ("r", "chi", "phi", "psi", "W", "dW"))
        for row in rows
    ]
    _emit(ns, document, csv_rows, ("r", "chi", "phi", "psi", "W", "dW"))
    return 0


def _cmd_verify(ns, config, diag) -> int:
    suite = _resolve(ns, config, "suite")
    if suite is None:
        raise DomainError("--suite is required (residuals, manifolds or limits)")
    seed = _resolve(ns, config, "seed", default=0, cast=int)
    cases = _resolve(ns, config, "cases", default=200, cast=int)
    output = _resolve(ns, config, "output")
    try:
        report = run_suite(suite, seed=seed, cases=cases)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    document = {
        "request": _base_request("verify", None, "json", output,
                                 suite=suite, seed=seed, cases=cases),
        "results": report,
        "diagnostics": diag.lines,
        "version": __version__,
    }
    _emit(ns, document, [], ())
    return 0 if report["passed"] else 1


def _cmd_scan(ns, config, diag) -> int:
    name = _resolve(ns, config, "param")
    if name not in _PARAM_KEYS:
        raise DomainError(f"--param must be one of {_PARAM_KEYS}, got {name!r}")
    start = _resolve(ns, config, "from", cast=float)
    stop = _resolve(ns, config, "to", cast=float)
    steps = _resolve(ns, config, "steps", cast=int)
    n = _resolve(ns, config, "n", default=0, cast=int)
    fmt = _resolve(ns, config, "format", default="json")
    output = _resolve(ns, config, "output")
    if start is None or stop is None or steps is None:
        raise DomainError("--from, --to and --steps are required")
    if steps < 1:
        raise DomainError("--steps must be >= 1")
    base = {key: _resolve(ns, config, key, cast=float) for key in _PARAM_KEYS}

    values = [start + (stop - start) * i / steps for i in range(steps + 1)]

    def solve_point(value):
        merged = dict(base)
        merged[name] = value
        for key, entry in merged.items():
            if entry is None:
                merged[key] = 0.0 if key != "m" else None
        if merged["m"] is None:
            raise DomainError("missing required parameter --m")
        point_params = PotentialParams(**merged)
        return value, solve_levels(point_params, n)

    rows = []
    skipped = 0
    failed = 0
    for value in values:
        try:
            value, levels = solve_point(value)
        except DomainError as exc:
            diag.warn(f"{name}={_fmt(value)} skipped: {exc}")
            skipped += 1
            continue
        except ConvergenceError as exc:
            diag.warn(f"{name}={_fmt(value)} failed: {exc}")
            failed += 1
            continue
        for lvl in levels:
            rows.append({"param": name, "value": value, "n": lvl.n,
                         "branch": lvl.branch, "E": lvl.energy,
                         "residual": lvl.residual})

    request = _base_request("scan", None, fmt, output, param=name, n=n,
                            **{"from": start, "to": stop, "steps": steps})
    request["params"] = {k: v for k, v in base.items() if v is not None}
    document = {
        "request": request,
        "results": {"rows": rows},
        "diagnostics": diag.lines,
        "version": __version__,
    }
    csv_rows = [
        (row["param"], _fmt(row["value"]), row["n"], row["branch"],
         _fmt(row["E"]), _fmt(row["residual"]))
        for row in rows
    ]
    _emit(ns, document, csv_rows, ("param", "value", "n", "branch", "E", "residual"))
    if failed:
        return 4
    if skipped == len(values):
        diag.error("every scan point had invalid parameters")
        return 2
    return 0


def _add_param_flags(parser):
    for key in _PARAM_KEYS:
        parser.add_argument(f"--{key}", type=float, default=None)
    parser.add_argument("--format", choices=("json", "csv"), default=None)
    parser.add_argument("--output", default=None)
    parser.add_argument("--config", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgk",
        description="Relativistic Kratzer bound states: spectra, wavefunctions "
                    "and independent numerical verification.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_spectrum = sub.add_parser("spectrum", help="solve levels n = 0..nmax")
    _add_param_flags(p_spectrum)
    p_spectrum.add_argument("--nmax", type=int, default=None)
    p_spectrum.add_argument("--branch", choices=("all", "particle", "antiparticle"),
                            default=None)

    p_energy = sub.add_parser("energy", help="one level by any method")
    _add_param_flags(p_energy)
    p_energy.add_argument("--n", type=int, default=None)
    p_energy.add_argument("--method", default=None)
    p_energy.add_argument("--branch", choices=("particle", "antiparticle"), default=None)
    p_energy.add_argument("--compare", choices=("oracle",), default=None)

    p_wave = sub.add_parser("wavefunction", help="tabulate the ground-state factors")
    _add_param_flags(p_wave)
    p_wave.add_argument("--e", default=None, help="energy value or 'auto'")
    p_wave.add_argument("--n", type=int, default=None)
    p_wave.add_argument("--rmin", type=float, default=None)
    p_wave.add_argument("--rmax", type=float, default=None)
    p_wave.add_argument("--points", type=int, default=None)
    p_wave.add_argument("--normalize", action="store_const", const=True, default=None)

    p_verify = sub.add_parser("verify", help="run a self-verification suite")
    p_verify.add_argument("--suite", choices=("residuals", "manifolds", "limits"),
                          default=None)
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--cases", type=int, default=None)
    p_verify.add_argument("--output", default=None)
    p_verify.add_argument("--config", default=None)

    p_scan = sub.add_parser("scan", help="sweep one coupling")
    _add_param_flags(p_scan)
    p_scan.add_argument("--param", default=None)
    p_scan.add_argument("--from", dest="from", type=float, default=None)
    p_scan.add_argument("--to", type=float, default=None)
    p_scan.add_argument("--steps", type=int, default=None)
    p_scan.add_argument("--n", type=int, default=None)

    return parser


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "energy": _cmd_energy,
    "wavefunction": _cmd_wavefunction,
    "verify": _cmd_verify,
    "scan": _cmd_scan,
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    diag = _Diagnostics()
    config = {}
    config_path = getattr(ns, "config", None)
    try:
        if config_path:
            config = _load_config(config_path)
        return _COMMANDS[ns.subcommand](ns, config, diag)
    except NoBoundStateError as exc:
        diag.error(str(exc))
        return 3
    except ConvergenceError as exc:
        diag.error(str(exc))
        return 4
    except (DomainError, ValueError, OSError) as exc:
        diag.error(str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
