"""Batch front-end: run complement switches, oracle verification and
strategy comparisons from scenario files and write machine-readable reports.

Exit codes: 0 success, 1 validation failure, 2 oracle capacity exceeded,
3 internal assertion (a bug, never bad input). Every nonzero exit prints a
one-line JSON error object on stderr. Output files are written atomically
(write-then-rename).
"""

from __future__ import annotations

import csv
import functools
import io
import json
import os
import random
import sys
import time
from pathlib import Path

import click

from .errors import CapacityError, InternalAssertionError, ValidationError
from .graph import InterQlanGraph, complement_graph, graph_to_json, make_edge, to_dot, vertex_from_name
from .oracle import verify_pipeline
from .routing import compare as compare_strategies
from .scenario import (
    Scenario,
    load_bundled_scenario,
    load_scenario,
    random_scenario,
    retained_vertices,
    scenario_graph,
    scenario_requests,
    scenario_topology,
)
from .switching import (
    AugmentationCase,
    augment_case1,
    augment_case2,
    records_to_json,
    run_pipeline,
)


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except InternalAssertionError as exc:
            _fail(3, "internal_assertion", exc)
        except CapacityError as exc:
            _fail(2, "capacity", exc)
        except ValidationError as exc:
            _fail(1, "validation", exc)

    return wrapper


def _fail(code: int, kind: str, exc: Exception) -> None:
    click.echo(json.dumps({"error": {"kind": kind, "message": str(exc)}}, sort_keys=True), err=True)
    sys.exit(code)


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _write_json(path: Path, obj) -> None:
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _resolve_scenario(ref: str) -> Scenario:
    path = Path(ref)
    if path.exists():
        return load_scenario(path)
    if "/" not in ref and "\\" not in ref and not ref.endswith(".json"):
        return load_bundled_scenario(ref)
    raise ValidationError(f"scenario file {ref!r} does not exist")


def _apply_overrides(sc: Scenario, case: str | None, retain: str | None, seed: int | None) -> Scenario:
    from dataclasses import replace

    updates = {}
    if case is not None:
        updates["case"] = case
    if retain is not None:
        updates["retain"] = tuple(x for x in (part.strip() for part in retain.split(",")) if x)
    if seed is not None:
        updates["seed"] = seed
    return replace(sc, **updates) if updates else sc


def _augment(sc: Scenario, g):
    retained = retained_vertices(sc)
    build = augment_case1 if sc.augmentation_case is AugmentationCase.CASE_I else augment_case2
    return build(g, retained)


scenario_option = click.option("--scenario", "scenario_ref", required=True,
                               help="Scenario file path, or the name of a bundled scenario.")
out_option = click.option("--out", "out_dir", default="out", show_default=True,
                          type=click.Path(file_okay=False), help="Output directory.")
seed_option = click.option("--seed", type=int, default=None, help="Override the scenario seed.")
case_option = click.option("--case", type=click.Choice(["I", "II"]), default=None,
                           help="Override the augmentation case.")
retain_option = click.option("--retain", default=None,
                             help="Comma-separated client names to exclude from the switch.")
k0_option = click.option("--k0", "k0_name", default=None,
                         help="Special-neighbor client name (default: lowest-index eligible).")
format_option = click.option("--format", "fmt", type=click.Choice(["json", "csv", "dot"]),
                             default="json", show_default=True,
                             help="Extra artifact format; JSON reports are always written.")
normalize_option = click.option("--normalize", is_flag=True,
                                help="Blank wall-clock fields so reports are byte-reproducible.")


@click.group()
@click.version_option(package_name="qlanroute")
def main() -> None:
    """Graph-complement switching and routing comparison for two-QLAN networks."""


@main.command("complement")
@scenario_option
@out_option
@seed_option
@case_option
@retain_option
@k0_option
@format_option
@click.option("--oracle", is_flag=True, help="Also certify the run with the state-vector oracle.")
@_guarded
def cmd_complement(scenario_ref, out_dir, seed, case, retain, k0_name, fmt, oracle):
    """Run the super-node measurement pipeline and write the switched graph."""
    sc = _apply_overrides(_resolve_scenario(scenario_ref), case, retain, seed)
    g = scenario_graph(sc)
    aug = _augment(sc, g)
    k0 = vertex_from_name(k0_name) if k0_name else None
    final, records = run_pipeline(aug, k0)
    out = Path(out_dir)
    _write_json(out / "result_graph.json", graph_to_json(final))
    _write_json(out / "trace.json", records_to_json(records))
    if fmt == "dot":
        _write_text(out / "result_graph.dot", to_dot(final))
        _write_text(out / "input_graph.dot", to_dot(g))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["endpoint_a", "endpoint_b"])
        for (u, v) in sorted((u.name, v.name) for (u, v) in final.edges):
            writer.writerow([u, v])
        _write_text(out / "result_edges.csv", buf.getvalue())
    matches = None
    if not sc.retain:
        matches = final == complement_graph(g)
        if not matches:
            raise InternalAssertionError("full switch output differs from the declarative complement")
    summary = {
        "scenario": sc.name or scenario_ref,
        "case": sc.case,
        "qlan1": sc.n1,
        "qlan2": sc.n2,
        "retained": list(sc.retain),
        "k0": records[0].special_neighbor.name,
        "measurements": len(records),
        "result_edges": len(final.edges),
        "matches_declarative_complement": matches,
    }
    _write_json(out / "summary.json", summary)
    if oracle:
        report = verify_pipeline(aug.graph, records, final)
        _write_json(out / "verification.json", report.to_json())
        if not report.passed:
            raise InternalAssertionError(
                f"oracle rejected the pipeline output (min fidelity {report.min_fidelity})"
            )
    click.echo(f"switched {sc.n1}+{sc.n2} network (case {sc.case}) "
               f"with {len(records)} measurements; k0 = {summary['k0']}")
    click.echo(f"result: {len(final.edges)} inter-links"
               + ("" if matches is None else f"; matches declarative complement: {matches}")
               + (f"; oracle: pass" if oracle else ""))
    click.echo(f"reports written to {out}/")


@main.command("verify")
@scenario_option
@out_option
@seed_option
@case_option
@retain_option
@k0_option
@normalize_option
@click.option("--corrupt", is_flag=True,
              help="Negative control: toggle one edge in the claimed graph before verifying.")
@_guarded
def cmd_verify(scenario_ref, out_dir, seed, case, retain, k0_name, normalize, corrupt):
    """Replay the pipeline on the state-vector oracle over every outcome branch."""
    sc = _apply_overrides(_resolve_scenario(scenario_ref), case, retain, seed)
    g = scenario_graph(sc)
    aug = _augment(sc, g)
    k0 = vertex_from_name(k0_name) if k0_name else None
    final, records = run_pipeline(aug, k0)
    claimed = final
    if corrupt:
        clients = final.clients()
        q1, q2 = [v for v in clients if v.qlan.value == 1], [v for v in clients if v.qlan.value == 2]
        pair = make_edge(q1[0], q2[0])
        edges = set(final.edges)
        edges.symmetric_difference_update({pair})
        claimed = InterQlanGraph(final.vertices, frozenset(edges))
    report = verify_pipeline(aug.graph, records, claimed)
    out = Path(out_dir)
    _write_json(out / "verification.json", report.to_json(normalize=normalize))
    for b in report.branches:
        click.echo(f"branch {b.outcome_string}: fidelity {b.fidelity:.12f} "
                   f"{'pass' if b.passed else 'FAIL'}")
    click.echo(f"verification {'passed' if report.passed else 'FAILED'} "
               f"({len(report.branches)} branches, min fidelity {report.min_fidelity:.12f})")
    if not report.passed:
        _fail(1, "verification_failed",
              ValidationError(f"{sum(not b.passed for b in report.branches)} branch(es) below tolerance"))


@main.command("compare")
@scenario_option
@out_option
@seed_option
@case_option
@retain_option
@format_option
@normalize_option
@_guarded
def cmd_compare(scenario_ref, out_dir, seed, case, retain, fmt, normalize):
    """Run both strategies on one scenario and write the side-by-side report."""
    sc = _apply_overrides(_resolve_scenario(scenario_ref), case, retain, seed)
    t0 = time.perf_counter()
    report = compare_strategies(
        scenario_topology(sc),
        scenario_graph(sc),
        scenario_requests(sc),
        case=sc.augmentation_case,
        retain=retained_vertices(sc),
        run_when_empty=sc.run_when_empty,
    )
    wall = time.perf_counter() - t0
    payload = report.to_json()
    payload["scenario"] = sc.name or scenario_ref
    payload["seed"] = sc.seed
    payload["wall_time_s"] = None if normalize else wall
    out = Path(out_dir)
    _write_json(out / "comparison.json", payload)
    if fmt == "csv":
        _write_text(out / "comparison.csv", _comparison_csv([_sweep_row(0, sc.seed, sc, report)]))
    width = max(len(a["axis"]) for a in report.axes)
    click.echo(f"{'':{width}}  {'TQR':34}  Complement")
    for axis in report.axes:
        click.echo(f"{axis['axis']:{width}}  {axis['tqr']:34}  {axis['complement']}")
    click.echo(f"{'rounds':{width}}  {report.tqr.rounds:<34}  {report.complement.rounds}")
    click.echo(
        f"{'served':{width}}  "
        f"{f'{len(report.tqr.served)}/{len(sc.requests)}':<34}  "
        f"{len(report.complement.served)}/{len(sc.requests)}"
    )
    click.echo(f"report written to {out / 'comparison.json'}")


_SWEEP_COLUMNS = [
    "index", "seed", "n1", "n2", "inter_links", "requests",
    "tqr_rounds", "tqr_swaps", "tqr_served", "tqr_failed",
    "complement_rounds", "complement_measurements", "complement_served", "complement_failed",
    "rounds_ratio",
]


def _sweep_row(index: int, seed: int, sc: Scenario, report) -> dict:
    return {
        "index": index,
        "seed": seed,
        "n1": sc.n1,
        "n2": sc.n2,
        "inter_links": len(sc.inter_links),
        "requests": len(sc.requests),
        "tqr_rounds": report.tqr.rounds,
        "tqr_swaps": report.tqr.swap_count,
        "tqr_served": len(report.tqr.served),
        "tqr_failed": len(report.tqr.failed),
        "complement_rounds": report.complement.rounds,
        "complement_measurements": report.complement.measurement_count,
        "complement_served": len(report.complement.served),
        "complement_failed": len(report.complement.failed),
        "rounds_ratio": report.rounds_ratio,
    }


def _comparison_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


@main.command("sweep")
@out_option
@click.option("--count", type=int, default=100, show_default=True,
              help="Number of seeded random scenarios to run.")
@click.option("--seed", type=int, default=0, show_default=True, help="Master seed.")
@click.option("--n1", type=int, default=3, show_default=True)
@click.option("--n2", type=int, default=4, show_default=True)
@normalize_option
@_guarded
def cmd_sweep(out_dir, count, seed, n1, n2, normalize):
    """Batch-compare seeded random scenarios; one CSV row per scenario."""
    if count < 1:
        raise ValidationError(f"sweep count must be >= 1, got {count}")
    rng = random.Random(seed)
    rows = []
    reports = []
    t0 = time.perf_counter()
    for i in range(count):
        sc_seed = rng.randrange(2**31)
        sc = random_scenario(sc_seed, n1=n1, n2=n2)
        report = compare_strategies(
            scenario_topology(sc),
            scenario_graph(sc),
            scenario_requests(sc),
            case=sc.augmentation_case,
        )
        rows.append(_sweep_row(i, sc_seed, sc, report))
        entry = report.to_json()
        entry["index"] = i
        entry["seed"] = sc_seed
        reports.append(entry)
    wall = time.perf_counter() - t0
    out = Path(out_dir)
    _write_text(out / "sweep.csv", _comparison_csv(rows))
    _write_json(out / "sweep.json", {
        "master_seed": seed,
        "count": count,
        "wall_time_s": None if normalize else wall,
        "comparisons": reports,
    })
    all_const = all(r["complement_rounds"] == 1 and r["complement_measurements"] == 2 for r in rows)
    click.echo(f"swept {count} scenarios (master seed {seed})")
    click.echo(f"complement cost constant at 1 round / 2 measurements: {all_const}")
    click.echo(f"reports written to {out}/")


if __name__ == "__main__":
    main()
