"""Command-line entry point.

Exit codes are part of the contract: 0 on success, 1 for runtime
failures (gateway outages, missing transcripts, unreadable files),
2 for usage mistakes (bad flags, unanswered checkpoints), 3 when
validation produced findings.

`solve` walks the four steps with a checkpoint after each: parameter
selection, TRIZ-parameter selection, contradiction pick, principle
pick. On a terminal the checkpoints prompt; in scripts each one is
answered by a --select-* flag, or --select-all takes the default
everywhere (all parameters, all resolved numbers, the first
contradiction, every recommended principle).
"""

from __future__ import annotations

import json
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import click

from .cases import (
    CaseCollection,
    ProblemDescription,
    _case_from_doc,
    load_collection,
    save_collection,
    seed_cases,
    validate_case,
)
from .config import GatewayConfig, StorageConfig
from .errors import (
    CaseValidationError,
    DataFileError,
    UsageError,
    WorkbenchError,
)
from .evaluation import (
    EvalReport,
    export_plot_data,
    export_report,
    format_summary_table,
    load_report,
    run_contradiction_eval,
    run_solution_eval,
)
from .gateway import Gateway
from .knowledge import default_knowledge_base
from .metrics import MatchConfig, MatchMode
from .prompts import PromptStrategy
from .workflow import SessionStore, TrizWorkflow

STRATEGY_NAMES = [s.value for s in PromptStrategy]
MATCH_MODES = [m.value for m in MatchMode]


# -- config file -----------------------------------------------------------------


@dataclass
class CliConfig:
    gateway: GatewayConfig = field(default_factory=GatewayConfig)
    storage: StorageConfig = field(default_factory=StorageConfig)
    strategy_step3: PromptStrategy | None = None
    strategy_step4: PromptStrategy | None = None
    match_mode: MatchMode = MatchMode.ORDERED_PAIR
    model: str | None = None


def _pick_keys(doc: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise UsageError(f"unknown {where} config keys: {', '.join(unknown)}")


def load_cli_config(path: Path | None) -> CliConfig:
    if path is None:
        return CliConfig()
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from exc
    _pick_keys(doc, {"gateway", "storage", "defaults"}, "top-level")

    gateway_doc = doc.get("gateway", {})
    _pick_keys(gateway_doc, set(GatewayConfig.__dataclass_fields__), "gateway")
    gateway = GatewayConfig(**gateway_doc)

    storage_doc = doc.get("storage", {})
    _pick_keys(storage_doc, {"root"}, "storage")
    storage = StorageConfig(root=Path(storage_doc.get("root", "workbench_data")))

    defaults = doc.get("defaults", {})
    _pick_keys(
        defaults,
        {"strategy_step3", "strategy_step4", "match_mode", "model"},
        "defaults",
    )
    cfg = CliConfig(gateway=gateway, storage=storage, model=defaults.get("model"))
    try:
        if "strategy_step3" in defaults:
            cfg.strategy_step3 = PromptStrategy(defaults["strategy_step3"])
        if "strategy_step4" in defaults:
            cfg.strategy_step4 = PromptStrategy(defaults["strategy_step4"])
        if "match_mode" in defaults:
            cfg.match_mode = MatchMode(defaults["match_mode"])
    except ValueError as exc:
        raise UsageError(f"config file {path}: {exc}") from exc
    return cfg


# -- exit-code discipline -----------------------------------------------------------


def run_handled(fn: Callable[[], None]) -> None:
    try:
        fn()
    except CaseValidationError as exc:
        click.echo(f"invalid: {exc}", err=True)
        for finding in exc.findings:
            click.echo(f"  - {finding}", err=True)
        raise SystemExit(3)
    except UsageError as exc:
        click.echo(f"usage error: {exc}", err=True)
        raise SystemExit(2)
    except WorkbenchError as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(1)


def handled(fn):
    import functools

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        run_handled(lambda: fn(*args, **kwargs))

    return wrapper


# -- shared helpers ------------------------------------------------------------------


def _build_gateway(cfg: CliConfig, replay: Path | None) -> Gateway:
    if replay is not None:
        return Gateway.replay(replay, config=cfg.gateway)
    gateway = Gateway.live(cfg.gateway)
    return gateway.recording(cfg.storage.transcripts_dir)


def _load_any_collection(source: str) -> CaseCollection:
    if source == "seeds":
        return seed_cases()
    return load_collection(Path(source))


def _parse_numbers(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in re.split(r"[,\s]+", text.strip()) if t]
    except ValueError:
        raise UsageError(f"cannot parse {what} selection {text!r}") from None


def _choose_many(
    valid: list[int],
    *,
    flag: str | None,
    interactive: bool,
    prompt_text: str,
    what: str,
) -> list[int]:
    """Resolve a multi-choice checkpoint: flag value, prompt, or all."""
    raw = flag
    if raw is None and interactive:
        raw = click.prompt(prompt_text, default="all", show_default=True)
    if raw is None or raw.strip() in ("", "all"):
        return list(valid)
    chosen = _parse_numbers(raw, what)
    if not chosen:
        raise UsageError(f"{what} selection must not be empty")
    bad = [n for n in chosen if n not in valid]
    if bad:
        raise UsageError(f"{what} selection {bad} is not among the offered {valid}")
    return chosen


def _strategy_of(name: str | None, fallback: PromptStrategy | None):
    if name is None:
        return fallback
    return PromptStrategy(name)  # click.Choice already vetted the value


# -- root group -------------------------------------------------------------------------


@click.group()
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="JSON config file (gateway, storage, defaults).",
)
@click.pass_context
def main(ctx: click.Context, config_path: Path | None) -> None:
    """TRIZ workbench: guided solving, evaluation, case and knowledge tools."""

    def load():
        ctx.obj = load_cli_config(config_path)

    run_handled(load)


# -- solve ------------------------------------------------------------------------------


@main.command()
@click.option("--case", "case_id", default=None, help="Case id to solve.")
@click.option(
    "--collection",
    "collection_src",
    default="seeds",
    help="Collection holding --case: 'seeds' or a file path.",
)
@click.option(
    "--case-file",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="Single case document to solve.",
)
@click.option("--scenario", default=None)
@click.option("--current-state", default=None)
@click.option("--pain-point", default=None)
@click.option("--requirement", default=None)
@click.option("--model", default=None, help="Chat model id.")
@click.option("--strategy-step3", type=click.Choice(STRATEGY_NAMES), default=None)
@click.option("--strategy-step4", type=click.Choice(STRATEGY_NAMES), default=None)
@click.option(
    "--replay",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    default=None,
    help="Serve all LLM calls from recorded transcripts in this directory.",
)
@click.option("--session-id", default=None)
@click.option(
    "--storage",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Data directory (default from config: workbench_data).",
)
@click.option("--count", type=int, default=None, help="Solutions per principle.")
@click.option(
    "--select-all",
    is_flag=True,
    help="Take the default at every checkpoint (all/all/first/all).",
)
@click.option("--select-params", default=None, help="Step-1 ordinals, e.g. '1,3'.")
@click.option("--select-triz", default=None, help="TRIZ numbers for Step 3.")
@click.option("--select-pair", type=int, default=None, help="Contradiction (1-based).")
@click.option("--select-principles", default=None, help="Principle numbers.")
@click.option(
    "--interactive/--no-interactive",
    "interactive",
    default=None,
    help="Force or forbid prompting (default: prompt only on a terminal).",
)
@click.pass_obj
@handled
def solve(
    cfg: CliConfig,
    case_id,
    collection_src,
    case_file,
    scenario,
    current_state,
    pain_point,
    requirement,
    model,
    strategy_step3,
    strategy_step4,
    replay,
    session_id,
    storage,
    count,
    select_all,
    select_params,
    select_triz,
    select_pair,
    select_principles,
    interactive,
):
    """Work a problem through the four steps with checkpoints."""
    problem = _resolve_problem(
        case_id, collection_src, case_file,
        scenario, current_state, pain_point, requirement,
    )
    if interactive is None:
        interactive = sys.stdin.isatty() and not select_all
    if not interactive and not select_all:
        unanswered = [
            flag
            for flag, value in (
                ("--select-params", select_params),
                ("--select-triz", select_triz),
                ("--select-pair", select_pair),
                ("--select-principles", select_principles),
            )
            if value is None
        ]
        if unanswered:
            raise UsageError(
                "non-interactive run leaves checkpoints unanswered "
                f"({', '.join(unanswered)}); pass --select-all or the flags"
            )

    storage_cfg = StorageConfig(root=storage) if storage else cfg.storage
    gateway = _build_gateway(cfg, replay)
    workflow = TrizWorkflow(
        gateway, store=SessionStore(storage_cfg.sessions_dir)
    )
    session = workflow.start_session(
        problem,
        model_id=model or cfg.model,
        session_id=session_id,
    )
    click.echo(f"session {session.id} (model {session.model_id})")

    # step 1: problem parameters
    params = workflow.run_step1(session)
    workflow.save_session(session)
    click.echo("\nStep 1: problem parameters")
    for p in params:
        tail = f" - {p.explanation}" if p.explanation else ""
        click.echo(f"  {p.ordinal}. {p.name}{tail}")
    keep = _choose_many(
        [p.ordinal for p in params],
        flag=select_params,
        interactive=interactive,
        prompt_text="Parameters to keep (ordinals or 'all')",
        what="parameter",
    )
    selected_params = [p for p in params if p.ordinal in keep]

    # step 2: TRIZ mapping
    mappings = workflow.run_step2(session, selected_params)
    workflow.save_session(session)
    click.echo("\nStep 2: TRIZ parameter mapping")
    resolved: list[int] = []
    for m in mappings:
        if m.resolved:
            click.echo(f"  {m.source.name} -> {m.triz_number}. {m.triz_name}")
            if m.triz_number not in resolved:
                resolved.append(m.triz_number)
        else:
            click.echo(f"  {m.source.name} -> (unresolved: {m.triz_name!r})")
    if len(resolved) < 2:
        raise WorkbenchError(
            f"only {len(resolved)} TRIZ parameters resolved; "
            "contradiction analysis needs at least two"
        )
    numbers = _choose_many(
        resolved,
        flag=select_triz,
        interactive=interactive,
        prompt_text="TRIZ parameters for contradiction analysis",
        what="TRIZ parameter",
    )

    # step 3: contradictions
    relations = workflow.run_step3(
        session, numbers, _strategy_of(strategy_step3, cfg.strategy_step3)
    )
    workflow.save_session(session)
    click.echo("\nStep 3: contradictory relations")
    for i, rel in enumerate(relations, start=1):
        mark = "" if rel.complete else "  [unresolved]"
        click.echo(
            f"  {i}. improving {rel.improving_number}. {rel.improving_name} / "
            f"worsening {rel.worsening_number}. {rel.worsening_name}{mark}"
        )
    pick = select_pair
    if pick is None and interactive:
        pick = click.prompt(
            "Contradiction to address", default=1, show_default=True, type=int
        )
    if pick is None:
        pick = 1
    if not 1 <= pick <= len(relations):
        raise UsageError(
            f"contradiction {pick} is out of range 1..{len(relations)}"
        )

    # checkpoint: principles. recommend_principles moves the state, so the
    # listing comes straight from the matrix and the workflow call carries
    # the final selection.
    chosen_rel = relations[pick - 1]
    if not chosen_rel.complete:
        raise UsageError(
            f"contradiction {pick} has unresolved parameters; pick a complete one"
        )
    kb = workflow.kb
    improving, worsening = chosen_rel.pair()
    recommendations = [p.number for p in kb.matrix_lookup(improving, worsening)]
    click.echo("\nRecommended inventive principles")
    for n in recommendations:
        click.echo(f"  {n}. {kb.principle_by_number(n).name}")
    if not recommendations:
        raise WorkbenchError(
            "the matrix cell for this contradiction is empty; pick another pair"
        )
    principles = _choose_many(
        recommendations,
        flag=select_principles,
        interactive=interactive,
        prompt_text="Principles to apply",
        what="principle",
    )
    workflow.recommend_principles(session, chosen_rel, principles)
    workflow.save_session(session)

    # step 4 on the first chosen principle
    solutions = workflow.run_step4(
        session,
        principles[0],
        _strategy_of(strategy_step4, cfg.strategy_step4),
        count,
    )
    path = workflow.save_session(session)
    label = kb.principle_by_number(principles[0]).label()
    click.echo(f"\nStep 4: solutions for principle {label}")
    for s in solutions:
        click.echo(f"  {s.generation_index + 1}. {s.text}")
    click.echo(f"\nsession saved: {path} (state {session.state.value})")


def _resolve_problem(
    case_id, collection_src, case_file,
    scenario, current_state, pain_point, requirement,
) -> ProblemDescription:
    if case_file is not None:
        try:
            doc = json.loads(Path(case_file).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DataFileError(f"cannot read case file {case_file}: {exc}") from exc
        return _case_from_doc(doc).problem
    if case_id is not None:
        collection = _load_any_collection(collection_src)
        try:
            return collection.case_by_id(case_id).problem
        except KeyError:
            known = ", ".join(c.id for c in collection.cases)
            raise UsageError(
                f"no case {case_id!r} in {collection.name!r} (have: {known})"
            ) from None
    inline = {
        "--scenario": scenario,
        "--current-state": current_state,
        "--pain-point": pain_point,
        "--requirement": requirement,
    }
    if any(v is not None for v in inline.values()):
        missing = [k for k, v in inline.items() if v is None]
        if missing:
            raise UsageError(
                f"inline problem is missing {', '.join(missing)}"
            )
        return ProblemDescription(
            scenario=scenario,
            current_state=current_state,
            pain_point=pain_point,
            requirement=requirement,
        )
    raise UsageError(
        "nothing to solve: pass --case, --case-file, or all four problem fields"
    )


# -- eval --------------------------------------------------------------------------------


@main.group(name="eval")
def eval_group() -> None:
    """Batch evaluation over a case collection."""


@eval_group.command(name="run")
@click.option("--collection", default="seeds", help="'seeds' or a collection file.")
@click.option("--step", type=click.Choice(["3", "4"]), default="3")
@click.option("--strategies", default=None, help="Comma-separated strategy names.")
@click.option("--models", default=None, help="Comma-separated model ids.")
@click.option("--match-mode", type=click.Choice(MATCH_MODES), default=None)
@click.option("--aggregation", type=click.Choice(["macro", "micro"]), default="macro")
@click.option("--per-principle-count", type=int, default=None)
@click.option("--workers", type=int, default=1)
@click.option(
    "--out",
    required=True,
    type=click.Path(file_okay=False, path_type=Path),
    help="Directory for report and plot-data files.",
)
@click.option(
    "--replay",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    default=None,
)
@click.pass_obj
@handled
def eval_run(
    cfg: CliConfig,
    collection,
    step,
    strategies,
    models,
    match_mode,
    aggregation,
    per_principle_count,
    workers,
    out,
    replay,
):
    """Score a collection and write report + plot-data files."""
    step = int(step)
    if step == 4 and match_mode is not None:
        raise UsageError("--match-mode applies to step 3 only")
    if step == 3 and per_principle_count is not None:
        raise UsageError("--per-principle-count applies to step 4 only")
    cases = _load_any_collection(collection)
    gateway = _build_gateway(cfg, replay)
    strategy_list = (
        [s.strip() for s in strategies.split(",") if s.strip()]
        if strategies is not None
        else None
    )
    model_list = (
        [m.strip() for m in models.split(",") if m.strip()]
        if models is not None
        else None
    )
    # replay runs pin the timestamp so report files are byte-stable
    clock = (lambda: 0.0) if replay is not None else time.time

    if step == 3:
        report = run_contradiction_eval(
            gateway,
            cases,
            strategies=strategy_list,
            model_ids=model_list,
            cfg=MatchConfig(MatchMode(match_mode or cfg.match_mode.value)),
            aggregation=aggregation,
            clock=clock,
            workers=workers,
        )
    else:
        report = run_solution_eval(
            gateway,
            cases,
            strategies=strategy_list,
            model_ids=model_list,
            per_principle_count=(
                 3 if per_principle_count is None else per_principle_count
            ),
            aggregation=aggregation,
            clock=clock,
            workers=workers,
        )

    out.mkdir(parents=True, exist_ok=True)
    plot_paths = export_plot_data(report, out)
    json_path = export_report(report, out / "report.json")
    csv_path = export_report(report, out / "report.csv", fmt="csv")
    click.echo(format_summary_table(report))
    if report.errors:
        click.echo(f"\n{len(report.errors)} case(s) recorded errors; see report.json")
    for path in (json_path, csv_path, *plot_paths):
        click.echo(f"wrote {path}")


@eval_group.command(name="report")
@click.argument(
    "report_path", type=click.Path(exists=True, dir_okay=False, path_type=Path)
)
@handled
def eval_report(report_path: Path):
    """Print the summary table of a stored report."""
    report = load_report(report_path)
    click.echo(format_summary_table(report))
    click.echo(
        f"\n{len(report.case_scores)} scored rows, {len(report.errors)} errors, "
        f"created {report.created_at}"
    )


@eval_group.command(name="plot")
@click.argument(
    "report_path", type=click.Path(exists=True, dir_okay=False, path_type=Path)
)
@click.option(
    "--out",
    required=True,
    type=click.Path(file_okay=False, path_type=Path),
)
@handled
def eval_plot(report_path: Path, out: Path):
    """Render static SVG figures from a stored report."""
    report = load_report(report_path)
    out.mkdir(parents=True, exist_ok=True)
    path = _render_svg(report, out)
    click.echo(f"wrote {path}")


def _render_svg(report: EvalReport, out: Path) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    strategies = list(report.strategies)
    positions = {s: i for i, s in enumerate(strategies)}
    if report.step == 3:
        fig, axes = plt.subplots(1, 2, figsize=(9, 4), sharey=True)
        for ax, metric in zip(axes, ("recall", "precision")):
            for score in report.case_scores:
                value = getattr(score, metric)
                if value is None:
                    continue
                ax.plot(positions[score.strategy], value, "o", alpha=0.6)
            ax.set_xticks(range(len(strategies)))
            ax.set_xticklabels(strategies, rotation=20)
            ax.set_title(metric)
            ax.set_ylim(-0.05, 1.05)
        target = out / "dots.svg"
    else:
        fig, ax = plt.subplots(figsize=(6, 4))
        data = [
            [s.similarity for s in report.case_scores if s.strategy == name]
            for name in strategies
        ]
        kept = [(name, values) for name, values in zip(strategies, data) if values]
        if kept:
            ax.violinplot([v for _, v in kept], showmeans=True)
            ax.set_xticks(range(1, len(kept) + 1))
            ax.set_xticklabels([n for n, _ in kept], rotation=20)
        ax.set_title("solution similarity")
        target = out / "violin.svg"
    fig.tight_layout()
    fig.savefig(target, format="svg")
    plt.close(fig)
    return target


# -- cases -------------------------------------------------------------------------------


@main.group()
def cases() -> None:
    """Validate, import, and export case collections."""


def _read_json(path: Path) -> dict:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CaseValidationError(f"cannot read {path}", [str(exc)]) from exc


@cases.command(name="validate")
@click.argument(
    "path", type=click.Path(exists=True, dir_okay=False, path_type=Path)
)
@handled
def cases_validate(path: Path):
    """Check a case or collection file; findings exit with code 3."""
    doc = _read_json(path)
    if "cases" in doc:
        collection = load_collection(path)  # raises with findings if invalid
        click.echo(f"ok: collection {collection.name!r}, {len(collection.cases)} cases")
        return
    case = _case_from_doc(doc)
    findings = validate_case(case)
    if findings:
        raise CaseValidationError(f"case {case.id!r} failed validation", findings)
    click.echo(f"ok: case {case.id!r}")


@cases.command(name="import")
@click.argument("source", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option(
    "--into",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Collection file to add the cases to (created when absent).",
)
@handled
def cases_import(source: Path, into: Path):
    """Merge a case or collection file into another collection."""
    doc = _read_json(source)
    if "cases" in doc:
        incoming = load_collection(source).cases
    else:
        incoming = (_case_from_doc(doc),)
    if into.exists():
        target = load_collection(into)
    else:
        target = CaseCollection(name=into.stem, cases=())
    existing = {c.id for c in target.cases}
    clashes = [c.id for c in incoming if c.id in existing]
    if clashes:
        raise CaseValidationError(
            f"cannot import into {into}", [f"duplicate case id: {i}" for i in clashes]
        )
    merged = CaseCollection(
        name=target.name,
        cases=target.cases + tuple(incoming),
        few_shot_case_ids=target.few_shot_case_ids,
    )
    save_collection(merged, into)
    click.echo(f"imported {len(incoming)} case(s) into {into} ({len(merged.cases)} total)")


@cases.command(name="export")
@click.option("--collection", default="seeds", help="'seeds' or a collection file.")
@click.option(
    "--out", required=True, type=click.Path(dir_okay=False, path_type=Path)
)
@handled
def cases_export(collection: str, out: Path):
    """Write a collection to a JSON file (the bundled seeds by default)."""
    resolved = _load_any_collection(collection)
    save_collection(resolved, out)
    click.echo(f"wrote {out} ({len(resolved.cases)} cases)")


# -- knowledge ---------------------------------------------------------------------------


@main.group()
def matrix() -> None:
    """Contradiction-matrix queries."""


@matrix.command(name="lookup")
@click.argument("improving", type=int)
@click.argument("worsening", type=int)
@handled
def matrix_lookup(improving: int, worsening: int):
    """Print the principles of one matrix cell."""
    kb = default_knowledge_base()
    try:
        principles = kb.matrix_lookup(improving, worsening)
    except WorkbenchError as exc:
        raise UsageError(str(exc)) from exc
    imp = kb.parameter_by_number(improving)
    wor = kb.parameter_by_number(worsening)
    click.echo(f"improving {imp.number}. {imp.name} / worsening {wor.number}. {wor.name}")
    if not principles:
        click.echo("(empty cell)")
    for p in principles:
        click.echo(f"  {p.number}. {p.name}")


@main.group()
def params() -> None:
    """Engineering-parameter queries."""


@params.command(name="find")
@click.argument("query")
@handled
def params_find(query: str):
    """Resolve free text to a parameter number."""
    kb = default_knowledge_base()
    param = kb.parameter_by_name(query, fuzzy=True)
    if param is None:
        click.echo(f"no parameter matches {query!r}", err=True)
        raise SystemExit(1)
    click.echo(f"{param.number}. {param.name}")


# -- serve -------------------------------------------------------------------------------


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8321)
@click.option(
    "--storage", type=click.Path(file_okay=False, path_type=Path), default=None
)
@click.option(
    "--replay",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    default=None,
)
@click.option("--token", default=None, help="Shared API token (default: env).")
@click.option("--cors", multiple=True, help="Additional allowed origins.")
@click.option(
    "--ui",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    default=None,
    help="Static web-ui build directory, served at /ui.",
)
@click.pass_obj
@handled
def serve(cfg: CliConfig, host, port, storage, replay, token, cors, ui):
    """Run the HTTP API for the web UI and scripted clients."""
    from .api import ApiSettings, create_app, run_server

    settings = ApiSettings(
        storage=StorageConfig(root=storage) if storage else cfg.storage,
        gateway=cfg.gateway,
        replay_dir=replay,
        token=token,
        ui_dir=ui,
    )
    if cors:
        settings.cors_origins = settings.cors_origins + tuple(cors)
    app = create_app(settings)
    click.echo(f"serving on http://{host}:{port}")
    run_server(app, host=host, port=port)


if __name__ == "__main__":
    main()
