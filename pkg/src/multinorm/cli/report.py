"""
This script displays the result of one instance, as a rich report for humans
or as a flat, sorted JSON document for scripts.

Author: Mounia Tonazzini
Date: October 2026
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any
import json

from rich.console import Console, Group
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from multinorm.abelian import FiniteAbelianGroup
from multinorm.utils import format_rational

SCHEMA_VERSION = 1


@dataclass
class Report:
    """
    Result of running one instance.

    Attributes:
        - mode (str): Mode of the instance.
        - headline (str): One-line result, e.g. "Sha(L/k) = (Z/3)^3".
        - values (dict): Flat result values (group, rational, integer, verdict...).
        - trace (list[str]): Derivation lines.
        - inputs (dict): The source mapping of the instance.
        - exit_code (int): 0 on success.
        - source (str | None): File the instance was read from.
        - structure: Equivalence structure of a single sha family, used for figures.
    """

    mode: str
    headline: str
    values: dict[str, Any] = field(default_factory=dict)
    trace: list[str] = field(default_factory=list)
    inputs: dict = field(default_factory=dict)
    exit_code: int = 0
    source: str | None = None
    structure: Any = None
    family_label: str = ""


def machine_value(value: Any) -> Any:
    """Converts a result value to a JSON value: groups become invariant-factor lists, rationals 'a/b'."""

    if isinstance(value, FiniteAbelianGroup):
        return list(value.invariant_factors)
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (list, tuple)):
        return [machine_value(v) for v in value]
    return value


def machine_document(report: Report, include_trace: bool = False) -> str:
    """
    Flat key/value JSON document, keys sorted, with `schema_version`.

    The input mapping is echoed as a compact JSON string under `input`.
    Identical reports give byte-identical documents.
    """

    document = {
        "schema_version": SCHEMA_VERSION,
        "mode": report.mode,
        "exit_code": report.exit_code,
        "headline": report.headline,
        "input": json.dumps(report.inputs, sort_keys=True, separators=(",", ":")),
    }
    if report.source is not None:
        document["source"] = report.source
    for key, value in report.values.items():
        document[f"result.{key}"] = machine_value(value)
    if include_trace:
        document["trace"] = list(report.trace)
    return json.dumps(document, sort_keys=True, indent=2)


def display_report(console: Console, report: Report, show_trace: bool = False) -> None:
    """
    Displays one report in a panel.
    """

    ok = report.exit_code == 0
    headline = Text(f"\n{report.headline}\n", justify="center",
                    style="bold green" if ok else "bold red")

    values_table = Table.grid(expand=False, padding=(0, 2))
    values_table.add_column(style="bold cyan", justify="right")
    values_table.add_column(justify="left")
    for key, value in report.values.items():
        shown = machine_value(value)
        values_table.add_row(f"{key}:", str(shown))

    parts = [headline, values_table]
    if show_trace and report.trace:
        parts.append(Text("\n" + "─" * 40 + "\n", style="grey37"))
        parts.append(Text("\n".join(report.trace)))

    title = f"[bold]{report.mode.upper()}[/bold]"
    if report.source:
        title += f" - {report.source}"
    console.print(Panel(Group(*parts), title=title, border_style="bright_blue" if ok else "red",
                        expand=False, padding=(1, 4)))
