"""
Command-line entry point: `pcc-sim run | verify | audit | schema`.

stdout carries only reports and JSON Lines; logs and warnings go to stderr.
Exit codes: 0 success, 1 failed assertions or CDD violations, 2 usage or parse errors.
"""

import json
import sys
from pathlib import Path
from typing import NoReturn

import click
import structlog

from app.core.exceptions import DomainException, ValidationException
from app.core.log_config import configure_logging
from app.models.report import RunReport
from app.repositories.audit_repository import load_audit_log, parse_audit_filters, render_event
from app.schemas.scenario_schemas import Scenario
from app.services.fleet.scenario_loader import load_scenario
from app.services.fleet.simulator import run_scenario
from app.services.policy.association_parser import parse_association_config
from app.services.policy.cdd_verifier import collect_cdd_advisories, verify_cdd, violations_to_jsonl
from app.services.policy.manifest_parser import parse_manifest

logger = structlog.get_logger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
_U64_MAX = 2**64 - 1


def _fail_usage(message: str) -> NoReturn:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_USAGE)


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        _fail_usage(f"cannot read '{path}': {e.strerror}")


@click.group()
@click.option("--debug", is_flag=True, help="Human-readable logs on stderr.")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"]), default=None)
def cli(debug: bool, log_level: str | None) -> None:
    """Deterministic simulator of a private compute sandbox."""
    configure_logging(debug=debug or None, level=log_level)


@cli.command()
@click.argument("scenario", type=click.Path(path_type=Path))
@click.option("--seed", type=click.IntRange(0, _U64_MAX), default=None, help="Override the scenario seed.")
@click.option("--report", "report_path", type=click.Path(path_type=Path), default=None, help="Write the report here.")
def run(scenario: Path, seed: int | None, report_path: Path | None) -> None:
    """Run a scenario; exit 0 iff every assertion passes."""
    try:
        loaded = load_scenario(scenario)
    except ValidationException as e:
        _fail_usage(e.message)

    try:
        report = run_scenario(loaded, seed)
    except ValidationException as e:
        _fail_usage(e.message)
    except DomainException as e:
        logger.error("scenario_run_aborted", scenario=str(scenario), error_code=e.error_code, error=e.message)
        click.echo(f"error: {e.message}", err=True)
        sys.exit(EXIT_FAILED)

    rendered = report.to_json()
    if report_path is None:
        click.echo(rendered, nl=False)
    else:
        report_path.write_text(rendered, encoding="utf-8")
        for outcome in report.assertions:
            status = "PASS" if outcome.passed else "FAIL"
            click.echo(f"{status} {outcome.name}: {outcome.detail}", err=True)
    sys.exit(EXIT_OK if report.passed else EXIT_FAILED)


@cli.command()
@click.argument("manifest", type=click.Path(path_type=Path))
@click.option("--assoc", "assoc_path", type=click.Path(path_type=Path), required=True, help="Association config XML.")
def verify(manifest: Path, assoc_path: Path) -> None:
    """Check a manifest against CDD 9.8.6; violations print as JSON Lines."""
    try:
        parsed = parse_manifest(_read_text(manifest))
        rules = parse_association_config(_read_text(assoc_path))
    except ValidationException as e:
        _fail_usage(e.message)

    violations = verify_cdd(parsed, rules)
    click.echo(violations_to_jsonl(violations), nl=False)
    for advisory in collect_cdd_advisories(parsed, rules):
        click.echo(f"warning: {advisory.package}: {advisory.rule_id}: {advisory.detail}", err=True)
    sys.exit(EXIT_FAILED if violations else EXIT_OK)


@cli.command()
@click.argument("report", type=click.Path(path_type=Path))
@click.option("--query", "queries", multiple=True, help="field=value filter; repeat or comma-separate to AND.")
def audit(report: Path, queries: tuple[str, ...]) -> None:
    """Print the audit events of a run report that match every filter."""
    try:
        parsed = RunReport.model_validate_json(_read_text(report))
        filters = parse_audit_filters(list(queries))
        log = load_audit_log(parsed.audit_log)
    except ValueError as e:
        _fail_usage(f"invalid report '{report}': {e}")
    except ValidationException as e:
        _fail_usage(e.message)

    for event in log.query(filters):
        click.echo(render_event(event))


@cli.command()
def schema() -> None:
    """Print the scenario JSON-Schema."""
    click.echo(json.dumps(Scenario.model_json_schema(), sort_keys=True, indent=2))


if __name__ == "__main__":
    cli()
