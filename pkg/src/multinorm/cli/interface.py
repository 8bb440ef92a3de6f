"""
This script provides the command-line interface: it reads instance files,
dispatches them to the computation modules and prints the reports.

Author: Mounia Tonazzini
Date: October 2026
"""

from fractions import Fraction
from pathlib import Path
import argparse
import logging

import pandas as pd
from rich.console import Console

from multinorm.cli.instance import ALLOWED_MODES, InstanceFile, instance_from_mapping, load_instance
from multinorm.cli.report import Report, display_report, machine_document
from multinorm.exceptions import (
    CalculationError,
    InstanceParseError,
    InsufficientDataError,
    MultinormError,
    NonIntegralClassNumberError,
    ProviderContractViolation,
    ValidationError,
)
from multinorm.hnp import NO_FACTS, check_verdict, decide_hnp, explain_rules, morishita_note
from multinorm.kummer import lab_degree, validate_and_normalize
from multinorm.lee import CalibratedProvider, assemble_sha, multi_prime_sha, sha_with_trace_report
from multinorm.localnorm import PlaceKind, global_local_factor, local_norm_index, local_unit_norm_index
from multinorm.ono import (
    DEGREE_ZERO_FIELDS,
    NARROW_FIELDS,
    eval_cm_case,
    eval_E0,
    eval_ES,
    eval_ES_plus,
    eval_hS_ideal_form,
    eval_refined_E0,
    eval_refined_ES,
    eval_refined_ES_plus,
    eval_torus_class_number,
)
from multinorm.rule_catalogue import RuleCatalogue
from multinorm.units import pell_fundamental, unit_norm_index_general, unit_norm_index_over_Q
from multinorm.utils import format_rational

logger = logging.getLogger(__name__)

# Most specific classes first.
EXIT_CODES = (
    (InstanceParseError, 2),
    (FileNotFoundError, 2),
    (ValidationError, 3),
    (ProviderContractViolation, 4),
    (NonIntegralClassNumberError, 5),
    (CalculationError, 1),
    (MultinormError, 1),
)

COMMANDS = ALLOWED_MODES + ("rules",)


def exit_code_for(error: Exception) -> int:
    for error_type, code in EXIT_CODES:
        if isinstance(error, error_type):
            return code
    raise error


def _run_sha(instance: InstanceFile) -> Report:
    provider = instance.provider or CalibratedProvider()
    values, trace = {}, []
    structure, family_label = None, ""

    if len(instance.families) == 1:
        result = assemble_sha(instance.families[0], provider)
        group = result.group
        trace = sha_with_trace_report(result).splitlines()
        values.update({
            "p": result.p,
            "provider": result.provider_name,
            "order": group.order,
            "normalized_order": list(result.family.original_order),
        })
        structure, family_label = result.structure, result.family.label()
    else:
        group = multi_prime_sha([(f.p, f) for f in instance.families], provider)
        for family in instance.families:
            trace.append(f"p={family.p}:")
            trace.extend("  " + line for line in sha_with_trace_report(assemble_sha(family, provider)).splitlines())
        values.update({"primes": [f.p for f in instance.families], "order": group.order})

    values["group"] = group
    return Report(mode="sha", headline=f"Sha(L/k) = {group}", values=values, trace=trace,
                  structure=structure, family_label=family_label)


def _run_hnp(instance: InstanceFile) -> Report:
    facts = instance.facts or NO_FACTS
    verdict = decide_hnp(instance.profiles, facts)
    if not check_verdict(instance.profiles, facts, verdict):
        raise CalculationError(f"Verdict {verdict.outcome.value} ({verdict.rule_id}) failed its re-check")

    trace = [verdict.explanation]
    if verdict.holds:
        headline = f"HNP holds (rule {verdict.rule_id})"
        trace.append(RuleCatalogue().get_rule_summary(verdict.rule_id))
    else:
        headline = "HNP: inconclusive"
    note = morishita_note(facts, len(instance.profiles))
    if note:
        trace.append(note)

    values = {"outcome": verdict.outcome.value, "rule": verdict.rule_id or "none", "fields": len(instance.profiles)}
    return Report(mode="hnp", headline=headline, values=values, trace=trace)


def _show(value) -> str:
    return format_rational(value) if isinstance(value, Fraction) else str(value)


def _refined_values(instance: InstanceFile) -> tuple[dict, list[str]]:
    refined = instance.refined
    provider = instance.provider or CalibratedProvider()
    sha, family = None, None
    if instance.families:
        family = validate_and_normalize(instance.families[0])
        sha = assemble_sha(family, provider).group

    common = {"sha": sha, "family": family, "lab_index": refined.get("lab_index")}
    values, trace = {}, []
    if "unit_index" in refined:
        values["refined_E_S"] = eval_refined_ES(instance.places, refined["unit_index"], **common)
    if "unit_index_plus" in refined and "q_phi" in refined:
        values["refined_E_S_plus"] = eval_refined_ES_plus(
            instance.places, refined["unit_index_plus"], refined["q_phi"], **common
        )
    if "q_phi0" in refined and "residue_norm_index" in refined:
        values["refined_E0"] = eval_refined_E0(
            instance.places, refined["q_phi0"], refined["residue_norm_index"], **common
        )
    if instance.places:
        trace.append(f"local factor over S and R(L/k) - S: {global_local_factor(instance.places)}")
    if family is not None:
        trace.append(f"[L_ab:k] = {lab_degree(family)}, |Sha| = {sha.order}")
    return values, trace


def _run_class_number(instance: InstanceFile) -> Report:
    values, trace = {}, []
    ctx = instance.context
    if ctx is not None:
        es = eval_ES(ctx)
        values.update({"E_S": es.value, "hS_T": es.class_number})
        torus = eval_torus_class_number(ctx)
        values["tamagawa"] = torus.tamagawa
        if all(getattr(ctx, name) is not None for name in NARROW_FIELDS):
            plus = eval_ES_plus(ctx)
            values.update({"E_S_plus": plus.value, "hS_plus_T": plus.class_number})
        if all(getattr(ctx, name) is not None for name in DEGREE_ZERO_FIELDS):
            zero = eval_E0(ctx)
            values.update({"E0": zero.value, "h0_T": zero.class_number})
    if instance.ideal_form is not None:
        values["hS_T_ideal_form"] = eval_hS_ideal_form(instance.ideal_form)
    if instance.cm is not None:
        cm = instance.cm
        result = eval_cm_case(cm["hK"], cm["hKplus"], cm["Q"], cm["t"])
        values.update({"h_T_cm": result.value, "cm_integral": result.integral})
        if not result.integral:
            trace.append("CM data inconsistent: the class number is not an integer")
    if instance.refined is not None:
        refined_values, refined_trace = _refined_values(instance)
        values.update(refined_values)
        trace.extend(refined_trace)

    if not values:
        raise InsufficientDataError("The class-number blocks do not determine any invariant")
    trace = [f"{key} = {_show(v)}" for key, v in values.items()] + trace
    first_key = next(iter(values))
    return Report(mode="class-number", headline=f"{first_key} = {_show(values[first_key])}", values=values, trace=trace)


def _run_local_index(instance: InstanceFile) -> Report:
    values, trace = {}, []
    for d in instance.places:
        line = f"{d.place_id} ({d.kind.value})"
        if d.kind is not PlaceKind.FINITE or d.decomposition_subgroups:
            index = local_norm_index(d)
            values[f"{d.place_id}.norm_index"] = index
            line += f": norm index {index}"
        if d.kind is PlaceKind.FINITE and d.inertia_subgroups:
            e_v = local_unit_norm_index(d)
            values[f"{d.place_id}.unit_norm_index"] = e_v
            line += f", unit norm index {e_v}"
        trace.append(line)
    factor = global_local_factor(instance.places)
    values["global_local_factor"] = factor
    return Report(mode="local-index", headline=f"global local factor = {factor}", values=values, trace=trace)


def _run_pell(instance: InstanceFile) -> Report:
    solution = pell_fundamental(instance.pell_d)
    values = {"d": solution.d, "x": solution.x, "y": solution.y,
              "norm": solution.norm_sign, "period": solution.period}
    trace = [f"{solution.x}^2 - {solution.d}*{solution.y}^2 = {solution.norm_sign}"]
    return Report(mode="pell", headline=str(solution), values=values, trace=trace)


def _run_unit_index(instance: InstanceFile) -> Report:
    data = instance.unit_index
    if "fields" in data:
        index = unit_norm_index_over_Q(data["fields"])
        trace = [f"degrees {[f.degree for f in data['fields']]} over Q"]
    else:
        index = unit_norm_index_general(data["input"], data["free_quotient"])
        trace = [f"torsion index {data['input'].torsion_index}, degrees {list(data['input'].degrees)}"]
    return Report(mode="unit-index", headline=f"unit norm index = {index}",
                  values={"unit_norm_index": index}, trace=trace)


def _run_validate(instance: InstanceFile) -> Report:
    trace = []
    for family in instance.families:
        normalized = validate_and_normalize(family)
        trace.append(f"{normalized.label()}: valid, order {list(normalized.original_order)}")
    for profile in instance.profiles:
        trace.append(f"profile of degree {profile.degree}: consistent")
    for d in instance.places:
        trace.append(f"place {d.place_id}: valid")
    return Report(mode="validate", headline="valid", values={"valid": True}, trace=trace)


RUNNERS = {
    "sha": _run_sha,
    "hnp": _run_hnp,
    "class-number": _run_class_number,
    "local-index": _run_local_index,
    "pell": _run_pell,
    "unit-index": _run_unit_index,
    "validate": _run_validate,
}


def run(instance: InstanceFile, command: str | None = None) -> Report:
    """
    Runs one parsed instance, with the runner of `command` when given
    (validate accepts an instance of any mode).

    Returns:
        Report: Result value, derivation trace and input echo.

    Raises:
        MultinormError (and subclasses): propagated from the computation modules.
    """

    mode = command or instance.mode
    report = RUNNERS[mode](instance)
    report.inputs = instance.data
    logger.info(f"{mode}: {report.headline}")
    return report


class MultinormCLI:
    """
    Command-line interface for multinorm.
    """

    def __init__(self, console: Console | None = None):
        self.console = console or Console()

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="multinorm",
            description="Exact computations for multinorm-one tori: Sha, HNP rules, class numbers, norm indices.",
        )
        parser.add_argument("command", choices=COMMANDS)
        parser.add_argument("target", nargs="?", help="instance file (.mnt), an integer for pell, a filter for rules")
        parser.add_argument("--machine", action="store_true", help="print a flat JSON document")
        parser.add_argument("--trace", action="store_true", help="include the derivation trace")
        parser.add_argument("--batch", metavar="DIR", help="run every .mnt file of a directory")
        parser.add_argument("--export", metavar="CSV", help="with --batch, write a CSV summary")
        parser.add_argument("--plot", metavar="DIR", help="sha: save figures of the family")
        parser.add_argument("-v", "--verbose", action="store_true", help="log progress at INFO level")
        return parser

    def load(self, command: str, target: str) -> InstanceFile:
        """Loads an instance and checks that its mode matches the command."""
        if command == "pell" and target.lstrip("-").isdigit():
            return instance_from_mapping({"format_version": 1, "mode": "pell", "pell": {"d": int(target)}})
        instance = load_instance(target)
        if command != "validate" and instance.mode != command:
            raise InstanceParseError(f"Instance has mode '{instance.mode}', command is '{command}'", key="mode")
        return instance

    def run_target(self, command: str, target: str) -> Report:
        """Runs one target, turning errors into a failed report."""
        try:
            report = run(self.load(command, target), command)
        except (MultinormError, FileNotFoundError) as e:
            code = exit_code_for(e)
            return Report(mode=command, headline=f"{type(e).__name__}: {e}", exit_code=code,
                          values={"error": type(e).__name__})
        return report

    def emit(self, report: Report, machine: bool, trace: bool) -> None:
        if machine:
            print(machine_document(report, include_trace=trace))
        else:
            display_report(self.console, report, show_trace=trace)

    def run_batch(self, args) -> int:
        directory = Path(args.batch)
        if not directory.is_dir():
            self.console.print(f"[red]Batch directory not found:[/red] {directory}")
            return 2

        rows, worst = [], 0
        for path in sorted(directory.glob("*.mnt")):
            report = self.run_target(args.command, str(path))
            report.source = path.name
            self.emit(report, args.machine, args.trace)
            if report.exit_code:
                logger.warning(f"{path.name} failed: {report.headline}")
            worst = max(worst, report.exit_code)
            rows.append({
                "file": path.name,
                "mode": report.mode,
                "status": "ok" if report.exit_code == 0 else "error",
                "exit_code": report.exit_code,
                "result": report.headline,
            })

        if args.export:
            df = pd.DataFrame(rows, columns=["file", "mode", "status", "exit_code", "result"])
            df.to_csv(args.export, index=False)
            if not args.machine:
                self.console.print(f"[green]Summary saved to[/green] {args.export}")
        return worst

    def start(self, argv: list[str] | None = None) -> int:
        """Parses the arguments, runs the command and returns the exit code."""
        args = self.build_parser().parse_args(argv)

        if args.command == "rules":
            print(explain_rules(args.target))
            return 0
        if args.batch:
            return self.run_batch(args)
        if not args.target:
            self.console.print("[red]An instance file is needed (or --batch DIR).[/red]")
            return 2

        report = self.run_target(args.command, args.target)
        self.emit(report, args.machine, args.trace)

        if args.plot and report.exit_code == 0 and report.structure is not None:
            from multinorm.visualizations import FamilyVisualizer

            paths = FamilyVisualizer(report.structure, report.family_label).create_all_plots(args.plot)
            if not args.machine:
                self.console.print(f"[green]Figures saved:[/green] {', '.join(paths)}")
        return report.exit_code
