"""``oblique`` command-line interface.

Every subcommand reads one JSON problem file and prints a report::

    oblique dual|decompose|metric|transform|check --input FILE
            [--tolerance T] [--format text|json]

Exit codes: 0 success, 1 an invariant exceeded its tolerance, 2 numeric or
domain error (degenerate basis, non-positive-definite metric, singular
Jacobian, ...), 3 malformed input.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from . import charts, gram, metric, reciprocal
from .errors import DimensionMismatch, InputError, NumericalError
from .euclid3 import Vec3
from .variance import Variance

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_NUMERIC = 2
EXIT_INPUT = 3

# base tolerances; each check multiplies its own scale in
DEFAULT_TOLERANCES = {
    "duality": 1e-12,
    "double_dual": 1e-10,
    "completeness": 1e-10,
    "route_disagreement": 1e-9,
    "closed_form_disagreement": 1e-9,
    "reconstruction_contravariant": 1e-9,
    "reconstruction_covariant": 1e-9,
    "conjugacy": 1e-10,
    "dual_metric": 1e-9,
    "index_round_trip": 1e-10,
    "contraction_invariance": 1e-10,
}


# -- problem file -------------------------------------------------------------


@dataclass
class Problem:
    basis: Optional[list[list[float]]] = None
    vector: Optional[list[float]] = None
    covector: Optional[list[float]] = None
    variance: Variance = Variance.CONTRAVARIANT
    metric: Optional[list[list[float]]] = None
    chart: Optional[dict] = None
    tolerance: Optional[float] = None


def _number(x: Any, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InputError(f"{where}: expected a number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise InputError(f"{where}: value must be finite")
    return x


def _vector(x: Any, where: str) -> list[float]:
    if not isinstance(x, list) or not x:
        raise InputError(f"{where}: expected a non-empty list of numbers")
    return [_number(v, f"{where}[{i}]") for i, v in enumerate(x)]


def _matrix(x: Any, where: str) -> list[list[float]]:
    if not isinstance(x, list) or not x:
        raise InputError(f"{where}: expected a non-empty list of rows")
    rows = [_vector(r, f"{where}[{i}]") for i, r in enumerate(x)]
    if len({len(r) for r in rows}) != 1:
        raise DimensionMismatch(f"{where}: rows have different lengths")
    return rows


_KNOWN_KEYS = {"basis", "vector", "covector", "variance", "metric", "chart", "tolerance"}


def parse_problem(data: Any) -> Problem:
    if not isinstance(data, dict):
        raise InputError("problem file must contain a JSON object")
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        raise InputError(f"unknown keys: {', '.join(sorted(unknown))}")
    p = Problem()
    if "basis" in data:
        p.basis = _matrix(data["basis"], "basis")
    if "vector" in data:
        p.vector = _vector(data["vector"], "vector")
    if "covector" in data:
        p.covector = _vector(data["covector"], "covector")
    if "variance" in data:
        try:
            p.variance = Variance(data["variance"])
        except ValueError:
            raise InputError("variance must be 'contravariant' or 'covariant'") from None
    if "metric" in data:
        p.metric = _matrix(data["metric"], "metric")
    if "chart" in data:
        chart = data["chart"]
        if not isinstance(chart, dict) or "name" not in chart or "point" not in chart:
            raise InputError("chart needs 'name' and 'point'")
        extra = set(chart) - {"name", "matrix", "point"}
        if extra:
            raise InputError(f"unknown chart keys: {', '.join(sorted(extra))}")
        p.chart = {
            "name": chart["name"],
            "point": _vector(chart["point"], "chart.point"),
            "matrix": _matrix(chart["matrix"], "chart.matrix") if "matrix" in chart else None,
        }
    if "tolerance" in data:
        p.tolerance = _number(data["tolerance"], "tolerance")
        if p.tolerance <= 0:
            raise InputError("tolerance must be positive")
    return p


# -- report -------------------------------------------------------------------


@dataclass
class Report:
    command: str
    base_tolerance: Optional[float]
    results: dict = field(default_factory=dict)
    defects: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    def check(self, name: str, defect: float, scale: float = 1.0) -> None:
        base = self.base_tolerance if self.base_tolerance is not None else DEFAULT_TOLERANCES[name]
        self.defects[name] = float(defect)
        self.tolerances[name] = base * scale

    @property
    def failed(self) -> list[str]:
        return [k for k, d in self.defects.items() if not d <= self.tolerances[k]]

    @property
    def status(self) -> str:
        return "fail" if self.failed else "pass"

    def as_dict(self) -> dict:
        results = dict(self.results)
        results["tolerances"] = dict(self.tolerances)
        return {
            "command": self.command,
            "results": _plain(results),
            "defects": _plain(self.defects),
            "status": self.status,
        }


def _plain(x: Any) -> Any:
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, str)) or x is None:
        return x
    return float(x) + 0.0  # also folds -0.0 into 0.0


def fmt(x: float) -> str:
    return format(x, ".17g")


def _text_lines(value: Any, indent: str) -> list[str]:
    if isinstance(value, dict):
        out = []
        for k, v in value.items():
            if isinstance(v, dict) or (isinstance(v, list) and v and isinstance(v[0], list)):
                out.append(f"{indent}{k}:")
                out.extend(_text_lines(v, indent + "  "))
            else:
                out.append(f"{indent}{k}: {_text_scalar(v)}")
        return out
    if isinstance(value, list) and value and isinstance(value[0], list):
        return [f"{indent}{_text_scalar(row)}" for row in value]
    return [f"{indent}{_text_scalar(value)}"]


def _text_scalar(v: Any) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_text_scalar(x) for x in v) + "]"
    if isinstance(v, float):
        return fmt(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render(report: Report, style: str) -> str:
    d = report.as_dict()
    if style == "json":
        return json.dumps(d, indent=2) + "\n"
    lines = [f"command: {d['command']}", "results:"]
    lines += _text_lines(d["results"], "  ")
    lines.append("defects:")
    for name, value in d["defects"].items():
        verdict = "PASS" if name not in report.failed else "FAIL"
        lines.append(f"  {verdict} {name}: {fmt(value)} (tolerance {fmt(d['results']['tolerances'][name])})")
    lines.append(f"status: {d['status']}")
    return "\n".join(lines) + "\n"


# -- helpers ------------------------------------------------------------------


def _maxabs(a) -> float:
    return float(np.max(np.abs(np.asarray(a, dtype=np.float64))))


def _basis3(p: Problem) -> reciprocal.Basis3:
    if p.basis is None:
        raise InputError("this command needs a 'basis'")
    if len(p.basis) != 3 or len(p.basis[0]) != 3:
        raise DimensionMismatch(f"expected a 3x3 basis, got {len(p.basis)}x{len(p.basis[0])}")
    return reciprocal.Basis3.from_rows(p.basis)


def _rows(b: reciprocal.Basis3) -> list[list[float]]:
    return [list(v.as_tuple()) for v in b.vectors]


def _duality_checks(report: Report, basis: reciprocal.Basis3, dual: reciprocal.Basis3) -> None:
    scale = _maxabs(basis.rows) * _maxabs(dual.rows)
    report.check("duality", _maxabs(reciprocal.duality_defect(basis, dual)), scale)


# -- commands -----------------------------------------------------------------


def cmd_dual(p: Problem, report: Report) -> None:
    basis = _basis3(p)
    dual = reciprocal.reciprocal_basis(basis)
    report.results["triple_product"] = basis.volume
    report.results["reciprocal_basis"] = _rows(dual)
    _duality_checks(report, basis, dual)


def cmd_decompose(p: Problem, report: Report) -> None:
    basis = _basis3(p)
    if p.vector is None:
        raise InputError("decompose needs a 'vector'")
    v = Vec3.of(p.vector)
    contra = reciprocal.contravariant_components(v, basis)
    co = reciprocal.covariant_components(v, basis)
    via_gram = reciprocal.components_via_gram(v, basis)
    r = report.results
    r["contravariant"] = list(contra.values)
    r["covariant"] = list(co.values)
    r["contravariant_via_gram"] = list(via_gram.values)
    report.check(
        "route_disagreement",
        _maxabs(np.subtract(contra.values, via_gram.values)),
        max(1.0, _maxabs(contra.values)),
    )
    g = gram.gram_matrix(basis)
    if gram.is_unit_diagonal(g):
        closed = gram.closed_form_inverse_unit3(g).entries @ np.array(co.values)
        r["contravariant_via_closed_form"] = list(closed)
        report.check(
            "closed_form_disagreement",
            _maxabs(np.subtract(contra.values, closed)),
            max(1.0, _maxabs(contra.values)),
        )
    vscale = max(1.0, _maxabs(p.vector))
    report.check(
        "reconstruction_contravariant",
        _maxabs(np.subtract(reciprocal.reconstruct(contra, basis).as_tuple(), p.vector)),
        vscale,
    )
    report.check(
        "reconstruction_covariant",
        _maxabs(np.subtract(reciprocal.reconstruct(co, basis).as_tuple(), p.vector)),
        vscale,
    )


def _metric_of(p: Problem) -> metric.MetricTensor:
    if p.metric is not None and p.basis is not None:
        raise InputError("give either 'metric' or 'basis', not both")
    if p.metric is not None:
        if len(p.metric) != len(p.metric[0]):
            raise DimensionMismatch("metric must be square")
        return metric.MetricTensor(p.metric)
    if p.basis is not None:
        if len(p.basis) != len(p.basis[0]):
            raise DimensionMismatch("basis must have n vectors of length n")
        return metric.metric_from_basis(metric.BasisN(p.basis))
    raise InputError("this command needs a 'metric' or a 'basis'")


def _conjugacy_check(report: Report, g: metric.MetricTensor) -> metric.MetricTensor:
    ginv = metric.inverse_metric(g)
    report.check("conjugacy", _maxabs(g.g @ ginv.g - np.eye(g.n)), g.n)
    return ginv


def cmd_metric(p: Problem, report: Report) -> None:
    g = _metric_of(p)
    ginv = _conjugacy_check(report, g)
    report.results["metric"] = g.g.tolist()
    report.results["inverse_metric"] = ginv.g.tolist()
    if p.covector is not None:
        raise InputError("metric takes a 'vector' with a 'variance', not a 'covector'")
    if p.vector is not None:
        v = metric.ComponentVector(p.vector, p.variance)
        if v.n != g.n:
            raise DimensionMismatch(f"metric is {g.n}-dimensional, vector has {v.n} components")
        if v.variance is Variance.CONTRAVARIANT:
            other = metric.lower_index(v, g)
            back = metric.raise_index(other, g)
            report.results["covariant"] = other.components.tolist()
            report.results["line_element"] = metric.line_element(v, g)
        else:
            other = metric.raise_index(v, g)
            back = metric.lower_index(other, g)
            report.results["contravariant"] = other.components.tolist()
        report.check(
            "index_round_trip",
            _maxabs(back.components - v.components),
            max(1.0, _maxabs(v.components)),
        )


def cmd_transform(p: Problem, report: Report) -> None:
    if p.chart is None:
        raise InputError("transform needs a 'chart'")
    chart_cfg = p.chart
    point = chart_cfg["point"]
    chart = charts.builtin_chart(chart_cfg["name"], chart_cfg["matrix"], len(point))
    J = charts.jacobian(chart, point)
    r = report.results
    r["chart"] = chart.name
    r["point"] = point
    r["jacobian"] = J.matrix.tolist()
    if p.vector is None and p.covector is None:
        raise InputError("transform needs a 'vector' or a 'covector'")
    if p.covector is not None and p.vector is not None and p.variance is Variance.COVARIANT:
        raise InputError("'covector' given together with a covariant 'vector'")
    contra = co = None
    if p.vector is not None:
        v = metric.ComponentVector(p.vector, p.variance)
        if v.variance is Variance.CONTRAVARIANT:
            contra = v
        else:
            co = v
    if p.covector is not None:
        co = metric.ComponentVector.covariant(p.covector)
    if contra is not None:
        r["contravariant"] = charts.push_contravariant(J, contra).components.tolist()
    if co is not None:
        r["covariant"] = charts.pull_covariant(J, co).components.tolist()
    if contra is not None and co is not None:
        before = metric.contract(co, contra)
        after = float(np.dot(r["covariant"], r["contravariant"]))
        r["contraction_before"] = before
        r["contraction_after"] = after
        scale = max(1.0, _maxabs(co.components) * _maxabs(contra.components))
        report.check("contraction_invariance", abs(after - before), scale)


def cmd_check(p: Problem, report: Report) -> None:
    r = report.results
    if p.basis is not None and len(p.basis) == 3 and len(p.basis[0]) == 3 and p.metric is None:
        basis = _basis3(p)
        dual = reciprocal.reciprocal_basis(basis)
        _duality_checks(report, basis, dual)
        double = reciprocal.reciprocal_basis(dual)
        report.check("double_dual", _maxabs(double.rows - basis.rows), _maxabs(basis.rows))
        report.check("completeness", _maxabs(reciprocal.completeness_defect(basis)))
        g = metric.metric_from_basis(basis)
        ginv = _conjugacy_check(report, g)
        gdual = metric.metric_from_basis(dual)
        report.check("dual_metric", _maxabs(gdual.g - ginv.g), _maxabs(ginv.g))
        r["triple_product"] = basis.volume
        r["reciprocal_basis"] = _rows(dual)
        r["metric"] = g.g.tolist()
        r["inverse_metric"] = ginv.g.tolist()
    else:
        g = _metric_of(p)
        ginv = _conjugacy_check(report, g)
        r["metric"] = g.g.tolist()
        r["inverse_metric"] = ginv.g.tolist()
    r["invariants"] = {name: ("PASS" if name not in report.failed else "FAIL") for name in report.defects}


COMMANDS: dict[str, Callable[[Problem, Report], None]] = {
    "dual": cmd_dual,
    "decompose": cmd_decompose,
    "metric": cmd_metric,
    "transform": cmd_transform,
    "check": cmd_check,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors are input errors, not exit 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="oblique", description="Reciprocal bases, components, metrics and charts.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "dual": "reciprocal basis and duality defect",
        "decompose": "contravariant/covariant components by both routes",
        "metric": "metric, inverse metric, index raising/lowering",
        "transform": "Jacobian and component transformation through a chart",
        "check": "run the invariant battery",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        sp.add_argument("--input", required=True, metavar="FILE")
        sp.add_argument("--tolerance", type=float, default=None, metavar="T")
        sp.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def run(argv: Optional[list[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with open(args.input, encoding="utf-8") as fh:
            problem = parse_problem(json.load(fh))
        tol = args.tolerance if args.tolerance is not None else problem.tolerance
        if tol is not None and not (math.isfinite(tol) and tol > 0):
            raise InputError("tolerance must be a positive finite number")
        report = Report(args.command, tol)
        COMMANDS[args.command](problem, report)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(str(exc), file=stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(str(exc), file=stderr)
        return EXIT_NUMERIC
    stdout.write(render(report, args.format))
    return EXIT_FAIL if report.failed else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
