"""Command-line interface: scenario-driven commands and the paper suite.

Exit codes: 0 all pass, 1 some verdict failed, 2 input or validation error.
Reports are deterministic for a fixed scenario and version.
"""

from __future__ import annotations

import json
import sys
from typing import Dict, Optional

import click

from . import __version__
from .bimodules import coend_of, compose_bimodules, dual_of, end_of
from .changeofrings import coextension_adjunction_check, extend_scalars_cat
from .complexes import cone, truncate_ge, truncate_le
from .deform import check_hlc, deform_category, factorize
from .derived import DegreeWindow, derived_hom, derived_tensor, tstruct_truncate
from .errors import DgkitError, ScenarioError, ValidationError, WindowCertificationError
from .scenario import Scenario, load_scenario
from .verify import run_paper_suite


def _window_from(scn: Scenario, entry: Dict, override: Optional[str]) -> DegreeWindow:
    if override:
        lo, hi = override.split(":")
        return DegreeWindow(int(lo), int(hi))
    wname = entry.get("window")
    if wname:
        if wname not in scn.windows:
            raise ScenarioError(f"unknown window {wname!r}", "commands")
        return scn.windows[wname]
    return DegreeWindow(-4, 0)


def run(command: str, scn: Scenario, entry: Dict, window_override: Optional[str] = None) -> Dict:
    """Dispatch one scenario command entry to its owning module."""
    out: Dict = {"command": command}
    if command == "cohomology":
        cx = scn.resolve("complexes", entry["complex"], "commands")
        out["dims"] = {str(d): v for d, v in cx.cohomology().as_dict().items()}
        out["passed"] = True
    elif command == "truncate":
        cx = scn.resolve("complexes", entry["complex"], "commands")
        n = int(entry.get("n", 0))
        if entry.get("kind", "le") == "le":
            t, comparison = truncate_le(cx, n)
        else:
            t, comparison = truncate_ge(cx, n)
        out["dims"] = {str(d): v for d, v in t.cohomology().as_dict().items()}
        out["passed"] = True
    elif command == "cone":
        f = scn.resolve("maps", entry["map"], "commands")
        c, incl, proj = cone(f)
        out["dims"] = {str(d): v for d, v in c.cohomology().as_dict().items()}
        out["passed"] = True
    elif command in ("end", "coend"):
        t = scn.resolve("bimodules", entry["bimodule"], "commands")
        res = end_of(t) if command == "end" else coend_of(t)
        out["dims"] = {str(d): res.complex.dim(d) for d in res.complex.degrees()}
        out["passed"] = True
    elif command == "compose":
        f = scn.resolve("bimodules", entry["first"], "commands")
        g = scn.resolve("bimodules", entry["second"], "commands")
        comp = compose_bimodules(f, g)
        out["components"] = {f"{a},{b}": {str(d): comp.at(a, b).dim(d)
                                          for d in comp.at(a, b).degrees()}
                             for a in comp.acat.objects for b in comp.bcat.objects}
        out["passed"] = True
    elif command == "dual":
        f = scn.resolve("bimodules", entry["bimodule"], "commands")
        d = dual_of(f)
        out["components"] = {f"{a},{b}": {str(k): v for k, v in
                                          d.at(a, b).cohomology().as_dict().items()}
                             for a in d.acat.objects for b in d.bcat.objects}
        out["passed"] = True
    elif command == "derived-tensor":
        m = scn.resolve("modules", entry["left"], "commands")
        n = scn.resolve("modules", entry["right"], "commands")
        w = _window_from(scn, entry, window_override)
        rep = derived_tensor(m, n, w)
        out["dims"] = rep.as_dict()
        out["window"] = w.as_dict()
        out["passed"] = True
    elif command == "derived-hom":
        m = scn.resolve("modules", entry["source"], "commands")
        n = scn.resolve("modules", entry["target"], "commands")
        w = _window_from(scn, entry, window_override)
        rep = derived_hom(m, n, w)
        out["dims"] = rep.as_dict()
        out["window"] = w.as_dict()
        out["passed"] = True
    elif command == "tstruct":
        m = scn.resolve("modules", entry["module"], "commands")
        rep = tstruct_truncate(m)
        out["triangle_distinguished"] = rep.triangle_is_distinguished
        out["aisle_le_dims"] = {str(a): {str(d): v for d, v in
                                         rep.tau_le.at(a).cohomology().as_dict().items()}
                                for a in m.cat.objects}
        out["aisle_ge_dims"] = {str(a): {str(d): v for d, v in
                                         rep.tau_ge.at(a).cohomology().as_dict().items()}
                                for a in m.cat.objects}
        out["passed"] = rep.triangle_is_distinguished
    elif command == "coextend-check":
        acat = scn.resolve("categories", entry["acat"], "commands")
        bcat = scn.resolve("categories", entry["bcat"], "commands")
        g = scn.resolve("bimodules", entry["bimodule"], "commands")
        pair = coextension_adjunction_check(acat, bcat, g)
        out["round_trip_strict"] = pair.round_trip_strict
        out["hom_spaces_equal"] = pair.hom_spaces_equal
        out["morphism_action_s_linear"] = pair.morphism_action_s_linear
        out["passed"] = pair.all_pass
    elif command == "extend":
        cat = scn.resolve("categories", entry["category"], "commands")
        theta = scn.resolve("morphisms", entry["morphism"], "commands")
        ext = extend_scalars_cat(cat, theta)
        out["hom_dims"] = {f"{a},{b}": {str(d): ext.category.hom(a, b).dim(d)
                                        for d in ext.category.hom(a, b).degrees()}
                           for a in cat.objects for b in cat.objects}
        out["passed"] = True
    elif command == "factorize":
        theta = scn.resolve("morphisms", entry["morphism"], "commands")
        chain = factorize(theta)
        out["report"] = chain.as_dict()
        out["passed"] = chain.all_pass
    elif command == "deform":
        cat = scn.resolve("categories", entry["category"], "commands")
        theta = scn.resolve("morphisms", entry["morphism"], "commands")
        w = _window_from(scn, entry, window_override)
        ext, report = deform_category(cat, theta, w)
        out["report"] = report.as_dict()
        out["passed"] = report.all_pass
    elif command == "check-hlc":
        cat = scn.resolve("categories", entry["category"], "commands")
        verdict = check_hlc(cat)
        out["report"] = verdict.as_dict()
        out["passed"] = verdict.all_pass
    else:
        raise ScenarioError(f"unknown command {command!r}", "commands")
    return out


COMMANDS = [
    "cohomology", "truncate", "cone", "end", "coend", "compose", "dual",
    "derived-tensor", "derived-hom", "tstruct", "coextend-check", "extend",
    "factorize", "deform", "check-hlc",
]


def _render(report: Dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True)
    lines = [f"dgkit {report['version']} :: {report['command']} :: scenario {report['scenario']}"]
    for res in report["results"]:
        status = "pass" if res.get("passed") else "FAIL"
        keys = {k: v for k, v in res.items() if k not in ("command", "passed")}
        lines.append(f"  [{status}] {res['command']} {json.dumps(keys, sort_keys=True)}")
    lines.append("all passed" if report["passed"] else
                 f"FAILED; replay: {report['replay']}")
    return "\n".join(lines)


def _emit(report: Dict, fmt: str, out_path: Optional[str]):
    text = _render(report, fmt)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


def _run_scenario_command(command: str, scenario: str, window: Optional[str],
                          field: Optional[str], out: Optional[str], fmt: str):
    try:
        scn = load_scenario(scenario)
        if field:
            # a field override rebuilds the scenario under the new field
            with open(scenario) as fh:
                doc = json.load(fh)
            doc["field"] = field
            from .scenario import load_scenario_dict
            scn = load_scenario_dict(doc, source_name=scenario)
        entries = [e for e in scn.commands if e.get("run") == command]
        if not entries:
            raise ScenarioError(f"scenario declares no {command!r} command", "commands")
        results = [run(command, scn, e, window) for e in entries]
    except (ScenarioError, ValidationError, WindowCertificationError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except DgkitError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    passed = all(r.get("passed", True) for r in results)
    report = {
        "version": __version__,
        "scenario": scenario,
        "command": command,
        "results": results,
        "passed": passed,
        "replay": f"dgkit {command} --scenario {scenario}",
    }
    _emit(report, fmt, out)
    sys.exit(0 if passed else 1)


@click.group()
@click.version_option(__version__)
def main():
    """Exact-arithmetic toolkit for small dg-categories."""


def _register(command: str):
    @main.command(name=command)
    @click.option("--scenario", required=True, type=click.Path(), help="scenario JSON file")
    @click.option("--window", default=None, help="override window as lo:hi")
    @click.option("--field", default=None, help="override field: Q or Fp:<p>")
    @click.option("--out", default=None, type=click.Path(), help="write the report to a file")
    @click.option("--format", "fmt", default="text", type=click.Choice(["json", "text"]))
    def _cmd(scenario, window, field, out, fmt, command=command):
        _run_scenario_command(command, scenario, window, field, out, fmt)

    _cmd.__name__ = f"cmd_{command.replace('-', '_')}"
    return _cmd


for _name in COMMANDS:
    _register(_name)


@main.command()
@click.option("--suite", default="paper", type=click.Choice(["paper"]))
@click.option("--filter", "name_filter", default=None, help="substring filter on check names")
@click.option("--out", default=None, type=click.Path())
@click.option("--format", "fmt", default="text", type=click.Choice(["json", "text"]))
def verify(suite, name_filter, out, fmt):
    """Run the paper verification suite (one pass/fail line per criterion)."""
    results = run_paper_suite(name_filter)
    passed = all(r.passed for r in results)
    report = {
        "version": __version__,
        "suite": suite,
        "results": [r.as_dict() for r in results],
        "passed": passed,
    }
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True)
    else:
        lines = [f"dgkit {__version__} :: verify --suite {suite}"]
        for r in results:
            lines.append(f"  [{'pass' if r.passed else 'FAIL'}] {r.name}")
        lines.append("all criteria passed" if passed else
                     "FAILURES; replay: dgkit verify --suite paper")
        text = "\n".join(lines)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)
    sys.exit(0 if passed else 1)


if __name__ == "__main__":
    main()
