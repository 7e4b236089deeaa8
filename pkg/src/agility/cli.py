"""Command-line interface.

Machine output (JSON documents, rendered reports) goes to stdout;
diagnostics go to stderr, structured when --json is given. Exit codes:
0 success, 1 engine/validation error, 2 usage error.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path
from typing import Any, Callable

import click

from .canonical import pretty_json
from .errors import EngineError, ParseError
from .index_model import (
    default_index_document,
    load_index,
    serialize_index,
    validate_index,
)
from .pipeline import LevelPolicy
from .persistence import (
    import_responses,
    load_index_file,
    load_session,
    new_session,
    save_session,
    session_lock,
    write_index_file,
)
from .reporting import ExportFormat, ReportKind, build_report, export

_POLICY_CHOICES = {
    "paper-literal": LevelPolicy.PAPER_LITERAL,
    "below-failure": LevelPolicy.BELOW_FAILURE,
}


def emit(doc: Any) -> None:
    click.echo(json.dumps(doc, indent=2, sort_keys=True))


def engine_errors(fn: Callable) -> Callable:
    """Map engine failures onto exit code 1 with diagnostics on stderr."""

    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        json_diag = kwargs.get("json_diag", False)
        try:
            return fn(*args, **kwargs)
        except EngineError as exc:
            if json_diag:
                click.echo(json.dumps(exc.to_dict(), sort_keys=True), err=True)
            else:
                click.echo(f"error [{exc.code}]: {exc.message}", err=True)
                if exc.details is not None:
                    click.echo(json.dumps(exc.details, indent=2, sort_keys=True), err=True)
            sys.exit(1)

    return wrapper


def json_flag(fn: Callable) -> Callable:
    return click.option(
        "--json", "json_diag", is_flag=True, help="Structured diagnostics on stderr."
    )(fn)


@click.group()
def main() -> None:
    """Agility assessment engine: measurement indices and staged assessments."""


# --- index commands ------------------------------------------------------------


@main.group()
def index() -> None:
    """Inspect, validate and materialize measurement indices."""


@index.command("validate")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@json_flag
@engine_errors
def index_validate(file: Path, json_diag: bool) -> None:
    """Check FILE against every index invariant; list all violations."""
    try:
        doc = json.loads(file.read_text("utf-8"))
    except (OSError, ValueError) as exc:
        raise ParseError(f"cannot parse {file}: {exc}") from exc
    violations = validate_index(doc)
    emit({"valid": not violations, "violations": [v.to_dict() for v in violations]})
    if violations:
        sys.exit(1)


@index.command("show")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@json_flag
@engine_errors
def index_show(file: Path, json_diag: bool) -> None:
    """Print the normalized form of a valid index FILE."""
    emit(serialize_index(load_index_file(file)))


@index.command("default")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write to a file instead of stdout.")
@json_flag
@engine_errors
def index_default(out: Path | None, json_diag: bool) -> None:
    """Materialize the built-in index as an index file."""
    doc = serialize_index(load_index(default_index_document()))
    if out is None:
        emit(doc)
    else:
        write_index_file(doc, out)
        emit({"written": str(out), "name": doc["meta"]["name"], "version": doc["meta"]["version"]})


# --- session commands ------------------------------------------------------------


@main.group()
def session() -> None:
    """Create and drive assessment sessions."""


def _session_io_options(fn: Callable) -> Callable:
    fn = click.option(
        "--index", "index_override",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        default=None, help="Resolve the session's index from this file.",
    )(fn)
    fn = click.option(
        "--index-dir", type=click.Path(file_okay=False, path_type=Path),
        default=None, envvar="AGILITY_INDEX_DIR",
        help="Index catalog directory for resolving the session's index.",
    )(fn)
    return fn


def _load(session_file: Path, index_override: Path | None, index_dir: Path | None):
    return load_session(session_file, index_path=index_override, index_dir=index_dir)


@session.command("new")
@click.option("--index", "index_file", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--policy", type=click.Choice(sorted(_POLICY_CHOICES)), default="paper-literal")
@json_flag
@engine_errors
def session_new(index_file: Path, out: Path, policy: str, json_diag: bool) -> None:
    """Start a session against the index in --index, saved to --out."""
    measurement_index = load_index_file(index_file)
    sess = new_session(measurement_index, source=index_file, policy=_POLICY_CHOICES[policy])
    save_session(sess, out)
    emit({"id": sess.id, "path": str(out), "state": sess.state.value,
          "index": sess.index_ref})


@session.command("import")
@click.argument("session_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("responses", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@_session_io_options
@json_flag
@engine_errors
def session_import(session_file: Path, responses: Path, index_override: Path | None,
                   index_dir: Path | None, json_diag: bool) -> None:
    """Import answers from a CSV or JSON RESPONSES file into SESSION_FILE."""
    with session_lock(session_file):
        sess = _load(session_file, index_override, index_dir)
        report = import_responses(sess, responses)
        save_session(sess, session_file)
    emit(report)


@session.command("run")
@click.argument("session_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--stage", type=click.IntRange(1, 4), required=True)
@click.option("--option", "option", type=click.Choice(["improve", "restrict"]), default=None)
@click.option("--policy", type=click.Choice(sorted(_POLICY_CHOICES)), default=None)
@click.option("--extend-above-target", is_flag=True,
              help="Stage 3 only: assess the whole scale so R may exceed T.")
@_session_io_options
@json_flag
@engine_errors
def session_run(session_file: Path, stage: int, option: str | None, policy: str | None,
                extend_above_target: bool, index_override: Path | None,
                index_dir: Path | None, json_diag: bool) -> None:
    """Run (or explicitly rerun) one assessment stage."""
    with session_lock(session_file):
        sess = _load(session_file, index_override, index_dir)
        result = sess.run_or_rerun(
            stage,
            option=option,
            policy=_POLICY_CHOICES[policy] if policy else None,
            extend_above_target=extend_above_target,
        )
        save_session(sess, session_file)
    emit(result.to_dict())


@session.command("whatif")
@click.argument("session_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--set", "overrides", multiple=True, metavar="CHARACTERISTIC=PCT",
              help="Assume a characteristic percentage; repeatable.")
@click.option("--option", "option", type=click.Choice(["improve", "restrict"]), default=None)
@_session_io_options
@json_flag
@engine_errors
def session_whatif(session_file: Path, overrides: tuple[str, ...], option: str | None,
                   index_override: Path | None, index_dir: Path | None,
                   json_diag: bool) -> None:
    """Project stages 3 and 4 under assumed percentages (session untouched)."""
    parsed: dict[str, float] = {}
    for item in overrides:
        characteristic, _, pct = item.partition("=")
        if not characteristic or not pct:
            raise click.UsageError(f"--set takes CHARACTERISTIC=PCT, got {item!r}")
        try:
            parsed[characteristic] = float(pct)
        except ValueError:
            raise click.UsageError(f"percentage in {item!r} is not a number") from None
    sess = _load(session_file, index_override, index_dir)
    stage3, stage4 = sess.what_if(parsed, option=option)
    emit({"stage3": stage3.to_dict(), "stage4": stage4.to_dict()})


@session.command("report")
@click.argument("session_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--kind", type=click.Choice([k.value for k in ReportKind]), required=True)
@click.option("--format", "fmt", type=click.Choice([f.value for f in ExportFormat]),
              default="json")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@_session_io_options
@json_flag
@engine_errors
def session_report(session_file: Path, kind: str, fmt: str, out: Path | None,
                   index_override: Path | None, index_dir: Path | None,
                   json_diag: bool) -> None:
    """Render a report from the session's stored results."""
    sess = _load(session_file, index_override, index_dir)
    payload = export(build_report(sess, kind), fmt)
    if out is None:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    else:
        out.write_bytes(payload)
        emit({"written": str(out), "kind": kind, "format": fmt})


@session.command("close")
@click.argument("session_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@_session_io_options
@json_flag
@engine_errors
def session_close(session_file: Path, index_override: Path | None, index_dir: Path | None,
                  json_diag: bool) -> None:
    """Close a finished (or no-go) session; answers become immutable."""
    with session_lock(session_file):
        sess = _load(session_file, index_override, index_dir)
        sess.close()
        save_session(sess, session_file)
    emit({"id": sess.id, "state": sess.state.value})


# --- service ------------------------------------------------------------


@main.command("serve")
@click.option("--store", type=click.Path(file_okay=False, path_type=Path),
              envvar="AGILITY_STORE", default=Path("./sessions"))
@click.option("--index-dir", type=click.Path(file_okay=False, path_type=Path),
              envvar="AGILITY_INDEX_DIR", default=Path("./indices"))
@click.option("--bind", envvar="AGILITY_BIND", default="127.0.0.1:8000",
              metavar="HOST:PORT")
@click.option("--token", envvar="AGILITY_TOKEN", default=None,
              help="Require this bearer token on every request.")
def serve(store: Path, index_dir: Path, bind: str, token: str | None) -> None:
    """Run the HTTP service backing the coach console."""
    import uvicorn

    from .service import build_app

    host, _, port = bind.partition(":")
    app = build_app(store, index_dir, token)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))


if __name__ == "__main__":
    main()
