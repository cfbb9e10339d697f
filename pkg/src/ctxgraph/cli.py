"""Command-line entry point.

Exit codes: 0 on success, 1 on invalid input or a failed check, 2 when a
numeric solve did not converge.
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path
from typing import Optional

import click

from ctxgraph.alpha import independence_number
from ctxgraph.graph import Graph, GraphError, catalog, catalog_graph, from_json, parse_graph6
from ctxgraph.scenario import (
    ScenarioError,
    extended_vectors,
    f9_representation,
    kcbs_representation,
    load_representation,
    make_scenario,
    verify_basis_cover,
    verify_representation,
)
from ctxgraph.search import max_ratio_search, search_graph6_stream
from ctxgraph.simulate import NoiseModel, SimulationError, run_protocol
from ctxgraph.theta import lovasz_theta, recognize_algebraic

EXIT_INVALID = 1
EXIT_UNCONVERGED = 2

SCENARIOS = {"f9": f9_representation, "c5": kcbs_representation}


class Unconverged(click.ClickException):
    exit_code = EXIT_UNCONVERGED


class CheckFailed(click.ClickException):
    exit_code = EXIT_INVALID


def _positive(ctx, param, value):
    if value is not None and value <= 0:
        raise click.BadParameter("must be positive")
    return value


def _load_graph(graph6: Optional[str], file: Optional[str], catalog_name: Optional[str]) -> Graph:
    given = [x for x in (graph6, file, catalog_name) if x is not None]
    if len(given) != 1:
        raise click.UsageError("give exactly one of GRAPH6, --file or --catalog")
    try:
        if catalog_name is not None:
            return catalog_graph(catalog_name)
        if file is not None:
            return from_json(Path(file).read_text())
        return parse_graph6(graph6)
    except (GraphError, KeyError, OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read graph: {exc}") from None


def _vertex_set(vs) -> str:
    return "{" + ",".join(str(v + 1) for v in vs) + "}"


graph_options = [
    click.argument("graph6", required=False),
    click.option("--file", "file", type=click.Path(exists=True, dir_okay=False),
                 help="Edge-list JSON file with 'n' and 'edges' (0-based)."),
    click.option("--catalog", "catalog_name", help="Built-in graph name (see the catalog command)."),
]


def with_graph(fn):
    for opt in reversed(graph_options):
        fn = opt(fn)
    return fn


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--error-json", is_flag=True, help="Report errors as a JSON object on stderr.")
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def cli(error_json: bool, verbose: bool) -> None:
    """Exclusivity graphs: independence number, Lovasz number, ratio search and protocol simulation."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(message)s")


@cli.command()
@with_graph
@click.option("--all", "all_sets", is_flag=True, help="Also list every maximum independent set.")
def alpha(graph6, file, catalog_name, all_sets):
    """Independence number of a graph, with a witness set (vertices are 1-based)."""
    g = _load_graph(graph6, file, catalog_name)
    res = independence_number(g, all_sets=all_sets)
    click.echo(f"alpha = {res.alpha}  witness {_vertex_set(res.witness_set)}")
    if all_sets:
        click.echo(f"maximum sets ({len(res.all_maximum_sets)}): "
                   + " ".join(_vertex_set(s) for s in res.all_maximum_sets))


@cli.command()
@with_graph
@click.option("--gap-tol", default=1e-8, show_default=True, type=float, callback=_positive,
              help="Target width of the certified interval.")
def theta(graph6, file, catalog_name, gap_tol):
    """Certified interval for the Lovasz number and a recognised closed form."""
    g = _load_graph(graph6, file, catalog_name)
    res = lovasz_theta(g, gap_tol)
    form = recognize_algebraic(res.value, tol=max(10 * gap_tol, 1e-9))
    click.echo(f"[{res.lower:.8f}, {res.upper:.8f}]" + (f" ≈ {form.text}" if form else ""))
    if not res.converged:
        raise Unconverged(f"solver stopped with gap {res.gap:.3g} > {gap_tol:g}")


@cli.command()
@click.option("--n", "n", type=click.IntRange(3, 10), help="Vertex count to search exhaustively.")
@click.option("--file", "file", type=click.File("r"), help="graph6 stream to scan instead ('-' for stdin).")
@click.option("--prune/--no-prune", default=True, show_default=True,
              help="Skip graphs whose clique-cover bound cannot beat the current best.")
@click.option("--threads", type=click.IntRange(min=1),
              help="Worker processes [default: CTXGRAPH_THREADS or all cores].")
@click.option("--gap-tol", default=1e-8, show_default=True, type=float, callback=_positive,
              help="SDP interval width per graph.")
@click.option("--output", "-o", type=click.Path(dir_okay=False, writable=True),
              help="Write the SearchResult JSON here.")
@click.option("--json", "as_json", is_flag=True, help="Print the SearchResult JSON instead of the summary row.")
def search(n, file, prune, threads, gap_tol, output, as_json):
    """Maximise theta/alpha over connected graphs and report all maximisers."""
    if (n is None) == (file is None):
        raise click.UsageError("give exactly one of --n or --file")
    try:
        if n is not None:
            res = max_ratio_search(n, gap_tol=gap_tol, prune=prune, threads=threads)
        else:
            res = search_graph6_stream(file, gap_tol=gap_tol, prune=prune)
    except (GraphError, ValueError) as exc:
        raise click.UsageError(str(exc)) from None
    text = res.dumps()
    if output:
        Path(output).write_text(text + "\n")
    if as_json:
        click.echo(text)
    else:
        click.echo(res.milestone_row())
        for c in res.argmax_graphs:
            click.echo(f"  {c.canonical.canon.decode()}  alpha={c.alpha}  "
                       f"theta in [{c.theta.lower:.10f}, {c.theta.upper:.10f}]")
    if res.unconverged:
        raise Unconverged(f"{len(res.unconverged)} SDP solve(s) did not converge")


@cli.command()
@click.option("--catalog", "catalog_name", type=click.Choice(sorted(SCENARIOS)),
              help="Built-in representation.")
@click.option("--file", "file", type=click.Path(exists=True, dir_okay=False),
              help="Representation JSON: n, edges, vectors [[components], squared norm], handle.")
@click.option("--gap-tol", default=1e-8, show_default=True, type=float, callback=_positive)
def verify(catalog_name, file, gap_tol):
    """Check an orthonormal representation, and for F9 the basis cover of its extension."""
    if (catalog_name is None) == (file is None):
        raise click.UsageError("give exactly one of --catalog or --file")
    try:
        rep = SCENARIOS[catalog_name]() if catalog_name else load_representation(Path(file).read_text())
    except (ScenarioError, GraphError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read representation: {exc}") from None
    report = verify_representation(rep, gap_tol)
    for line in report.lines():
        click.echo(line)
    ok = report.passed
    if catalog_name == "f9":
        cover = verify_basis_cover(extended_vectors())
        for line in cover.lines():
            click.echo(line)
        ok = ok and cover.passed
    click.echo("PASS" if ok else "FAIL")
    if report.theta is not None and not report.theta.converged:
        raise Unconverged("Lovasz number solve did not converge")
    if not ok:
        raise CheckFailed("verification failed")


@cli.command()
@click.option("--catalog", "catalog_name", type=click.Choice(sorted(SCENARIOS)), default="f9", show_default=True)
@click.option("--file", "file", type=click.Path(exists=True, dir_okay=False), help="Representation JSON.")
@click.option("--shots", default=10**6, show_default=True, type=click.IntRange(min=1), help="Shots per setting.")
@click.option("--seed", default=1, show_default=True, type=int)
@click.option("--mix", default=0.0, show_default=True, type=click.FloatRange(0, 1), help="White-noise fraction.")
@click.option("--dark", default=0.0, show_default=True, type=click.FloatRange(0, 1), help="Dark-count fraction.")
@click.option("--output", "-o", type=click.Path(dir_okay=False, writable=True), help="Write the record JSON here.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, writable=True),
              help="Write the per-pair no-signalling table as CSV.")
def simulate(catalog_name, file, shots, seed, mix, dark, output, csv_path):
    """Monte Carlo run of the sequential protocol; prints S, its significance and the epsilon table."""
    try:
        rep = load_representation(Path(file).read_text()) if file else SCENARIOS[catalog_name]()
        record = run_protocol(make_scenario(rep), shots, NoiseModel(dark_rate=dark, misalignment=mix), seed)
    except (ScenarioError, SimulationError, GraphError, json.JSONDecodeError) as exc:
        raise click.UsageError(str(exc)) from None
    s, err = record.s_value()
    click.echo(f"S = {s:.6f} ± {err:.6f}  ({record.violation_sigma():.1f} standard deviations above 3)")
    click.echo(f"{'pair':>6} {'eps_(_,0)':>11} {'eps_(_,1)':>11} {'eps_(0,_)':>11} {'eps_(1,_)':>11} {'error':>10}")
    for r in record.epsilons():
        click.echo(f"{r.label:>6} {float(r.blank0):11.6f} {float(r.blank1):11.6f} "
                   f"{float(r.zero_blank):11.6f} {float(r.one_blank):11.6f} {r.err_second:10.6f}")
    if output:
        Path(output).write_text(record.dumps() + "\n")
    if csv_path:
        Path(csv_path).write_text(record.to_csv())


@cli.command("catalog")
def catalog_cmd():
    """List built-in graphs and representations."""
    for entry in catalog():
        g = entry.graph
        click.echo(f"{entry.name:5} n={g.n:<3} m={g.num_edges:<3} {entry.notes}")
    click.echo("representations: " + ", ".join(sorted(SCENARIOS)))


def main(argv: Optional[list[str]] = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    error_json = "--error-json" in args
    try:
        cli.main(args, prog_name="ctxgraph", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        return EXIT_INVALID
    except click.ClickException as exc:
        code = exc.exit_code if isinstance(exc, (Unconverged, CheckFailed)) else EXIT_INVALID
        if error_json:
            click.echo(json.dumps({"error": exc.format_message(), "exit_code": code}), err=True)
        else:
            exc.show()
        return code
    return 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
