"""Scenario runner for correlation-kernel checks.

A scenario is a line-oriented text file made of sections::

    [grid]
    k_min = 1e-3
    k_max = 4.5
    n_r = 96

    [testfn f1]
    variant = conserved
    kind = gaussian-windowed-bump
    centers = 1.7 1.3 -0.8 0.6
    widths = 0.25 0.25 0.25 0.25
    polarization = 0.4 -0.7 0.5

    [current]
    variant = pulse
    source = f1

    [kernel]
    variant = classical

    [task]
    check = gram_positivity
    args = f1 f2 f3

Sections ``[testfn NAME]`` and ``[task]`` may repeat.  ``#`` starts a
comment.  Commands:

``run``
    Execute every task, print one PASS/FAIL line per task, optionally
    write a JSON report (--json) and/or CSV table (--csv).  Exit code 0
    iff every task passes.
``validate``
    Parse and construct everything without running tasks.
``report``
    Like run but silent except for the JSON report on stdout.
"""

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import currents, gns, states
from .errors import PhotonWeylError, ScenarioError
from .hilbert import restrict_to_shell, scalar_product
from .kspace import Grid
from .testfn import (
    TestFunction,
    cone_orthogonal_mode,
    conserved_mode,
    random_test_function,
    translate,
    verify_continuity,
)

REPORT_SCHEMA = 1


# ---------------------------------------------------------------------------
# scenario parsing
# ---------------------------------------------------------------------------


def parse_scenario(text: str) -> List[Tuple[str, str, Dict[str, str]]]:
    """Parse scenario text into (kind, label, options) section triples."""
    sections: List[Tuple[str, str, Dict[str, str]]] = []
    current: Optional[Dict[str, str]] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ScenarioError("line %d: unterminated section header" % lineno)
            parts = line[1:-1].split()
            if not parts:
                raise ScenarioError("line %d: empty section header" % lineno)
            kind = parts[0]
            label = parts[1] if len(parts) > 1 else ""
            current = {}
            sections.append((kind, label, current))
            continue
        if current is None:
            raise ScenarioError("line %d: option outside any section" % lineno)
        if "=" not in line:
            raise ScenarioError("line %d: expected 'key = value'" % lineno)
        key, value = line.split("=", 1)
        key = key.strip()
        if key in current:
            raise ScenarioError("line %d: duplicate key %r" % (lineno, key))
        current[key] = value.strip()
    return sections


def _floats(value: str) -> List[float]:
    return [float(tok) for tok in value.split()]


def _complex_amp(value: str) -> complex:
    parts = _floats(value)
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) == 2:
        return complex(parts[0], parts[1])
    raise ScenarioError("amplitude takes one or two numbers, got %r" % value)


def _complex_vec(opts: Dict[str, str], key: str) -> np.ndarray:
    re = np.asarray(_floats(opts[key]))
    im_key = key + "_imag"
    if im_key in opts:
        return re + 1j * np.asarray(_floats(opts[im_key]))
    return re.astype(complex)


def _bool(value: str) -> bool:
    low = value.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ScenarioError("expected a boolean, got %r" % value)


class Scenario:
    """Constructed objects of a parsed scenario file."""

    def __init__(self, sections, grid_scale: float = 1.0, seed: Optional[int] = None):
        self.grid: Optional[Grid] = None
        self.testfns: Dict[str, TestFunction] = {}
        self.current = None
        self.kernel_opts: Dict[str, str] = {}
        self.tasks: List[Dict[str, str]] = []
        self._kernel_cache: Dict[str, object] = {}
        rng = np.random.default_rng(seed)

        for kind, label, opts in sections:
            if kind == "grid":
                self.grid = self._build_grid(opts, grid_scale)
            elif kind == "testfn":
                if not label:
                    raise ScenarioError("[testfn] sections need a name")
                self.testfns[label] = self._build_testfn(opts, rng)
            elif kind == "current":
                self.current = self._build_current(opts)
            elif kind == "kernel":
                self.kernel_opts = dict(opts)
            elif kind == "task":
                if "check" not in opts:
                    raise ScenarioError("[task] sections need a 'check' key")
                self.tasks.append(dict(opts))
            else:
                raise ScenarioError("unknown section kind %r" % kind)
        if self.grid is None:
            self.grid = Grid(1e-3, 4.5, 96, 24, 48)

    @staticmethod
    def _build_grid(opts, grid_scale):
        def scaled(key, default):
            return max(4, int(round(int(opts.get(key, default)) * grid_scale)))

        return Grid(
            float(opts.get("k_min", 1e-3)),
            float(opts.get("k_max", 4.5)),
            n_r=scaled("n_r", 96),
            n_theta=scaled("n_theta", 24),
            n_phi=scaled("n_phi", 48),
        )

    def _build_testfn(self, opts, rng):
        variant = opts.get("variant", "conserved")
        if variant == "random":
            tf = random_test_function(
                rng,
                n_modes=int(opts.get("n_modes", 1)),
                kind=opts.get("kind", "gaussian-windowed-bump"),
                k0_range=tuple(_floats(opts.get("k0_range", "0.8 1.6"))),
                width_range=tuple(_floats(opts.get("width_range", "0.25 0.35"))),
                amplitude=float(opts.get("amplitude", 1.0)),
            )
        elif variant in ("conserved", "cone-orthogonal"):
            common = dict(
                kind=opts.get("kind", "gaussian-windowed-bump"),
                centers=_floats(opts["centers"]),
                widths=_floats(opts["widths"]),
                amplitude=_complex_amp(opts.get("amplitude", "1")),
                window=float(opts.get("window", 5.0)),
                symmetrize=_bool(opts.get("symmetrize", "true")),
            )
            if variant == "conserved":
                mode = conserved_mode(e_spatial=_complex_vec(opts, "polarization"),
                                      **common)
            else:
                mode = cone_orthogonal_mode(**common)
            tf = TestFunction([mode])
        else:
            raise ScenarioError("unknown testfn variant %r" % variant)
        if "shift" in opts:
            tf = translate(tf, np.asarray(_floats(opts["shift"])))
        return tf

    def _build_current(self, opts):
        variant = opts.get("variant")
        if variant == "coulomb":
            return currents.CoulombCurrent(float(opts.get("strength", 1.0)))
        if variant == "pulse":
            return currents.PulseCurrent(self._named(opts, "source").modes)
        if variant == "quantum":
            return currents.QuantumCurrent.with_linear_coupling(
                self._named(opts, "alpha"),
                self._named(opts, "fx1"),
                self.grid,
            )
        if variant == "synthetic-power":
            power = float(opts.get("power", -1.0))
            axis = int(opts.get("axis", 1))

            def amp(oncone, _p=power, _a=axis):
                out = np.zeros(oncone.shape, dtype=complex)
                r = np.linalg.norm(oncone[:, 1:], axis=-1)
                out[:, _a] = r**_p
                return out

            return currents.SyntheticAmplitude(amp)
        raise ScenarioError("unknown current variant %r" % variant)

    def _named(self, opts, key):
        name = opts.get(key)
        if name is None or name not in self.testfns:
            raise ScenarioError("option %r must name a [testfn] section" % key)
        return self.testfns[name]

    # -- kernels ----------------------------------------------------------

    def kernel(self, variant=None):
        variant = variant or self.kernel_opts.get("variant", "free")
        hit = self._kernel_cache.get(variant)
        if hit is not None:
            return hit
        opts = self.kernel_opts
        greens = None
        if "greens" in opts:
            eps = float(opts["eps"]) if "eps" in opts else None
            greens = currents.Greens(opts["greens"], eps)
        n_nodes = int(opts.get("n_nodes", 24))
        if variant == "free":
            k = states.FreeVacuumKernel(self.grid, form=opts.get("form", "cone"))
        elif variant == "classical":
            k = states.ClassicalSourceKernel(
                self.current, self.grid, greens=greens, n_nodes=n_nodes,
                form=opts.get("form", "cone"))
        elif variant == "quantum":
            k = states.QuantumSourceKernel(self.current, greens=greens,
                                           n_nodes=n_nodes)
        elif variant == "product":
            k = states.ProductKernel(self.current, greens=greens, n_nodes=n_nodes)
        else:
            raise ScenarioError("unknown kernel variant %r" % variant)
        self._kernel_cache[variant] = k
        return k


# ---------------------------------------------------------------------------
# task checks
# ---------------------------------------------------------------------------


def _arg_list(scn, opts, key="args"):
    names = opts.get(key, "").split()
    if not names:
        raise ScenarioError("task needs %r naming test functions" % key)
    return [scn.testfns[n] if n in scn.testfns else _missing(n) for n in names]


def _missing(name):
    raise ScenarioError("unknown test function %r" % name)


def _task_translation(opts):
    if "translation" in opts:
        return np.asarray(_floats(opts["translation"]))
    return None


def check_norm(scn, opts):
    f = scn._named(opts, "arg")
    phi = restrict_to_shell(f, scn.grid)
    val = float(np.real(scalar_product(phi, phi)))
    lo = float(opts.get("min", 0.0))
    hi = float(opts.get("max", np.inf))
    return lo <= val <= hi, {"norm_squared": val, "min": lo, "max": hi}


def check_continuity(scn, opts):
    f = scn._named(opts, "arg")
    tol = float(opts.get("tol", 1e-10))
    n = int(opts.get("n_samples", 2000))
    rng = np.random.default_rng(int(opts.get("seed", 0)))
    lo, hi = f.bounding_box()
    span = np.maximum(np.abs(lo), np.abs(hi))
    samples = rng.uniform(-span, span, size=(n, 4))
    resid = verify_continuity(f, samples)
    return resid <= tol, {"residual": resid, "tol": tol}


def check_covariance(scn, opts):
    fns = _arg_list(scn, opts)
    h = scn._named(opts, "shift_arg")
    tol = float(opts.get("tol", 1e-10))
    resid = gns.covariance_residual(scn.kernel(opts.get("kernel")), fns, h)
    return resid <= tol, {"residual": resid, "tol": tol}


def check_gram_positivity(scn, opts):
    fns = _arg_list(scn, opts)
    tol = float(opts.get("tol", 1e-10))
    G = gns.gram_matrix(scn.kernel(opts.get("kernel")), fns)
    rep = gns.positivity_report(G, tol=tol)
    info = {
        "min_eigenvalue": rep["min_eigenvalue"],
        "max_eigenvalue": rep["max_eigenvalue"],
        "rank": rep["rank"],
        "positive": rep["positive"],
    }
    return rep["positive"], info


def check_positivity_matrix(scn, opts):
    """Negative control: the detector must flag an indefinite matrix."""
    vals = _floats(opts.get("values", "1 2 2 1"))
    n = int(round(np.sqrt(len(vals))))
    M = np.asarray(vals, dtype=complex).reshape(n, n)
    rep = gns.positivity_report(M)
    expected = _bool(opts.get("expect_positive", "false"))
    info = {"min_eigenvalue": rep["min_eigenvalue"], "positive": rep["positive"],
            "expect_positive": expected}
    return rep["positive"] == expected, info


def check_weyl(scn, opts):
    fns = _arg_list(scn, opts)
    h1 = scn._named(opts, "shift1")
    h2 = scn._named(opts, "shift2")
    tol = float(opts.get("tol", 1e-8))
    rep = gns.weyl_consistency(scn.kernel(opts.get("kernel")), fns, h1, h2)
    ok = rep["product_residual"] <= tol and rep["unitarity_residual"] <= tol
    rep = dict(rep)
    rep["tol"] = tol
    return ok, rep


def _smear_options(opts):
    greens = None
    if "greens" in opts:
        eps = float(opts["eps"]) if "eps" in opts else None
        greens = currents.Greens(opts["greens"], eps)
    n_nodes = opts.get("n_nodes", "24").split()
    n_nodes = int(n_nodes[0]) if len(n_nodes) == 1 else tuple(int(v) for v in n_nodes)
    return greens, n_nodes


def check_acl(scn, opts):
    f = scn._named(opts, "arg")
    a = _task_translation(opts)
    if a is not None:
        f = translate(f, a)
    greens, n_nodes = _smear_options(opts)
    val = complex(currents.acl_smear(scn.current, f, grid=scn.grid, greens=greens,
                                     n_nodes=n_nodes))
    info = {"acl_real": val.real, "acl_imag": val.imag}
    if "expect" in opts:
        tol = float(opts.get("tol", 1e-6))
        expect = float(opts["expect"])
        info.update({"expect": expect, "tol": tol})
        return abs(val.real - expect) <= tol and abs(val.imag) <= tol, info
    if "below" in opts:
        bound = float(opts["below"])
        info["below"] = bound
        return abs(val) <= bound, info
    if "above" in opts:
        bound = float(opts["above"])
        info["above"] = bound
        return abs(val) >= bound, info
    return True, info


def check_radiated(scn, opts):
    """Far-future identity acl(tau_a f) = 2 ahom(tau_a f)."""
    f = scn._named(opts, "arg")
    a = _task_translation(opts)
    if a is not None:
        f = translate(f, a)
    greens, n_nodes = _smear_options(opts)
    acl = currents.acl_smear(scn.current, f, grid=scn.grid, greens=greens,
                             n_nodes=n_nodes)
    ahom = currents.ahom_smear(scn.current, f, scn.grid)
    tol = float(opts.get("tol", 1e-2))
    rel = abs(complex(acl).real - 2.0 * ahom) / max(abs(2.0 * ahom), 1e-300)
    return rel <= tol, {"acl": complex(acl).real, "two_ahom": 2.0 * ahom,
                        "rel_diff": rel, "tol": tol}


def check_ir(scn, opts):
    rep = currents.ir_diagnostic(
        scn.current,
        n_shells=int(opts.get("n_shells", 8)),
        k_top=float(opts.get("k_top", 1.0)),
    )
    expect = opts.get("expect", "finite")
    info = {"verdict": rep.verdict, "ratio": rep.ratio, "expect": expect,
            "top_shell": rep.shells[0]["integral"]}
    return rep.verdict == expect, info


def check_mean_field(scn, opts):
    f = scn._named(opts, "arg")
    kernel = scn.kernel(opts.get("kernel"))
    tol = float(opts.get("tol", 1e-6))
    numeric = states.mean_field(kernel, f, step=float(opts.get("step", 1e-3)))
    analytic = kernel.mean(f)
    diff = abs(numeric - analytic)
    return diff <= tol, {"numeric_real": numeric.real, "numeric_imag": numeric.imag,
                         "analytic": float(np.real(analytic)), "diff": diff,
                         "tol": tol}


def check_second_moment(scn, opts):
    f = scn._named(opts, "arg")
    g = scn._named(opts, "arg2")
    kernel = scn.kernel(opts.get("kernel"))
    tol = float(opts.get("tol", 1e-6))
    numeric = states.second_moment_numeric(kernel, f, g,
                                           step=float(opts.get("step", 1e-3)))
    analytic = kernel.second_moment(f, g)
    diff = abs(numeric - analytic)
    return diff <= tol, {"numeric_real": numeric.real, "numeric_imag": numeric.imag,
                         "analytic_real": analytic.real,
                         "analytic_imag": analytic.imag, "diff": diff, "tol": tol}


def check_coherent(scn, opts):
    f = scn._named(opts, "arg")
    g = scn._named(opts, "arg2")
    a = _task_translation(opts)
    if a is not None:
        f = translate(f, a)
        g = translate(g, a)
    greens, n_nodes = _smear_options(opts)
    rep = states.coherent_radiation_check(scn.current, f, g, scn.grid,
                                          greens=greens, n_nodes=n_nodes)
    tol = float(opts.get("tol", 1e-2))
    return rep["residual"] <= tol, {
        "residual": rep["residual"],
        "classical_real": rep["classical"].real,
        "classical_imag": rep["classical"].imag,
        "tol": tol,
    }


def check_xbound(scn, opts):
    f = scn._named(opts, "arg")
    x = currents.x_functional(scn.current, f, scn.grid)
    phi = restrict_to_shell(f, scn.grid)
    s = float(np.real(scalar_product(phi, phi)))
    bound = s * scn.current.coupling_norm
    margin = float(opts.get("margin", 1e-10))
    return abs(x) ** 2 <= bound + margin, {
        "x_abs_squared": abs(x) ** 2,
        "bound": bound,
        "coupling_norm": scn.current.coupling_norm,
    }


CHECKS = {
    "norm": check_norm,
    "continuity": check_continuity,
    "covariance": check_covariance,
    "gram_positivity": check_gram_positivity,
    "positivity_matrix": check_positivity_matrix,
    "weyl": check_weyl,
    "acl": check_acl,
    "radiated": check_radiated,
    "ir": check_ir,
    "mean_field": check_mean_field,
    "second_moment": check_second_moment,
    "coherent": check_coherent,
    "xbound": check_xbound,
}


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------


def run_tasks(scn: Scenario, parallel: bool = False) -> List[dict]:
    def one(item):
        index, opts = item
        check = opts["check"]
        name = opts.get("name", "%s-%d" % (check, index))
        if check not in CHECKS:
            return {"name": name, "check": check, "pass": False,
                    "error": "unknown check %r" % check}
        try:
            ok, info = CHECKS[check](scn, opts)
        except PhotonWeylError as exc:
            return {"name": name, "check": check, "pass": False,
                    "error": str(exc)}
        out = {"name": name, "check": check, "pass": bool(ok)}
        out.update(info)
        return out

    items = list(enumerate(scn.tasks))
    if parallel and len(items) > 1:
        with ThreadPoolExecutor() as pool:
            return list(pool.map(one, items))
    return [one(item) for item in items]


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return {"real": obj.real, "imag": obj.imag}
    raise TypeError("not JSON serializable: %r" % type(obj))


def build_report(path: str, scn: Scenario, results: List[dict]) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "scenario": path,
        "grid": {
            "k_min": scn.grid.k_min,
            "k_max": scn.grid.k_max,
            "n_r": scn.grid.n_r,
            "n_theta": scn.grid.n_theta,
            "n_phi": scn.grid.n_phi,
        },
        "tasks": results,
        "all_pass": all(r["pass"] for r in results),
    }


def write_csv(results: List[dict], stream) -> None:
    keys = ["name", "check", "pass"]
    extra = sorted({k for r in results for k in r} - set(keys))
    writer = csv.writer(stream)
    writer.writerow(keys + extra)
    for r in results:
        row = []
        for key in keys + extra:
            val = r.get(key, "")
            if isinstance(val, bool):
                row.append("true" if val else "false")
            elif isinstance(val, float):
                row.append("%.17g" % val)
            elif isinstance(val, complex):
                row.append("%.17g%+.17gj" % (val.real, val.imag))
            else:
                row.append(val)
        writer.writerow(row)


def load_scenario(path: str, grid_scale: float, seed: Optional[int]) -> Scenario:
    with open(path, "r") as handle:
        text = handle.read()
    return Scenario(parse_scenario(text), grid_scale=grid_scale, seed=seed)


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="photonweyl", description="correlation-kernel scenario runner")
    parser.add_argument("command", choices=("run", "validate", "report"))
    parser.add_argument("scenario", help="scenario file path")
    parser.add_argument("--grid-scale", type=float, default=1.0,
                        help="multiply grid resolutions by this factor")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for random test functions")
    parser.add_argument("--parallel", action="store_true",
                        help="run tasks in a thread pool")
    parser.add_argument("--json", dest="json_path", default=None,
                        help="write a JSON report to this path")
    parser.add_argument("--csv", dest="csv_path", default=None,
                        help="write a CSV table to this path")
    args = parser.parse_args(argv)

    try:
        scn = load_scenario(args.scenario, args.grid_scale, args.seed)
    except (OSError, PhotonWeylError, KeyError, ValueError) as exc:
        print("scenario error: %s" % exc, file=sys.stderr)
        return 2

    if args.command == "validate":
        print("ok: %d test functions, %d tasks"
              % (len(scn.testfns), len(scn.tasks)))
        return 0

    results = run_tasks(scn, parallel=args.parallel)
    report = build_report(args.scenario, scn, results)

    if args.command == "run":
        for r in results:
            status = "PASS" if r["pass"] else "FAIL"
            detail = r.get("error", "")
            print("%s %s [%s]%s" % (status, r["name"], r["check"],
                                    " " + detail if detail else ""))
    if args.json_path:
        with open(args.json_path, "w") as handle:
            json.dump(report, handle, sort_keys=True, indent=2,
                      default=_json_default)
            handle.write("\n")
    if args.csv_path:
        with open(args.csv_path, "w", newline="") as handle:
            write_csv(results, handle)
    if args.command == "report":
        print(json.dumps(report, sort_keys=True, indent=2, default=_json_default))
    return 0 if report["all_pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
