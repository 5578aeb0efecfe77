"""Command dispatch: parse a document, run the requested checks, build a report.

Every command takes the raw document text so the CLI stays a thin shell and
the full pipeline is testable without a process boundary.  Commands raise
DocumentError for unparseable input and PreconditionError when the document
lacks the sections the command needs; both map to exit code 2 in the CLI.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import product

from .coalgebra import check_coderivation_axiom, check_dual_leibniz, lift_coderivation
from .derived import (
    DeformationFamily,
    build_sh_structure,
    check_codifferential,
    check_key_lemma,
    check_sh_leibniz,
)
from .document import AlgebraDocument, parse_document
from .errors import PreconditionError
from .gauge import GaugeFamily, check_deformation, check_gauge_equivalence, gauge_transform
from .graded import format_element
from .multiop import MultiOp, check_leibniz_identity
from .report import CheckResult, Report
from .results import Violation


@dataclass(frozen=True)
class RunOptions:
    max_const: int = 6
    max_word_len: int = 4
    max_arity: int = 3
    first_violation: bool = False


def _require_family(doc: AlgebraDocument) -> DeformationFamily:
    fam = doc.to_family()
    if fam is None:
        raise PreconditionError("document has no [delta N] sections")
    return fam


def _require_gauge(doc: AlgebraDocument) -> GaugeFamily:
    gauge = doc.to_gauge()
    if gauge is None:
        raise PreconditionError("document has no [gauge N] sections")
    return gauge


def _split(name_map: dict[str, str], violations: list[Violation]) -> list[CheckResult]:
    """One CheckResult per violation tag, preserving name_map order."""
    results = []
    for tag, label in name_map.items():
        found = [v for v in violations if v.check == tag]
        results.append(CheckResult(label, not found, found))
    return results


def _cmd_validate(doc: AlgebraDocument, options: RunOptions) -> list[CheckResult]:
    detail = [
        f"generators: {len(doc.basis)}",
        f"bracket entries: {len(doc.bracket)}",
        f"family order: {len(doc.deltas) - 1 if doc.deltas else 'none'}",
        f"gauge order: {len(doc.gauges) if doc.gauges else 'none'}",
    ]
    return [CheckResult("document", True, detail=detail)]


def _cmd_check_leibniz(doc: AlgebraDocument, options: RunOptions) -> list[CheckResult]:
    violations = check_leibniz_identity(doc.to_bracket())
    return [CheckResult("leibniz-identity", not violations, violations)]


def _cmd_check_deformation(doc: AlgebraDocument, options: RunOptions) -> list[CheckResult]:
    violations = check_deformation(_require_family(doc))
    return _split(
        {
            "deformation-derivation": "derivation-rule",
            "deformation-square": "square-zero-ladder",
        },
        violations,
    )


def _op_table(op: MultiOp, label: str) -> list[str]:
    lines = []
    for key in sorted(op.constants):
        args = ", ".join(op.basis.names[i] for i in key)
        lines.append(f"{label}({args}) = {format_element(op.constants[key])}")
    if not lines:
        lines.append(f"{label} = 0")
    return lines


def _cmd_derive(doc: AlgebraDocument, options: RunOptions) -> list[CheckResult]:
    fam = _require_family(doc)
    # both construction routes run inside and must agree exactly
    structure = build_sh_structure(fam)
    results = [
        CheckResult(
            "route-agreement",
            True,
            detail=[f"arities 1..{structure.max_arity} agree on both constructions"],
        )
    ]
    for i in range(1, structure.max_arity + 1):
        op = structure.op(i)
        if op is None:
            continue
        results.append(CheckResult(f"l_{i}", None, detail=_op_table(op, f"l_{i}")))
    return results


def _cmd_check_sh(doc: AlgebraDocument, options: RunOptions) -> list[CheckResult]:
    structure = build_sh_structure(_require_family(doc))
    verdict = check_sh_leibniz(
        structure, options.max_const, first_violation=options.first_violation
    )
    return [
        CheckResult("sh-identity", verdict.passed, verdict.violations, verdict.notes)
    ]


def _cmd_check_codifferential(
    doc: AlgebraDocument, options: RunOptions
) -> list[CheckResult]:
    verdict = check_codifferential(
        _require_family(doc),
        options.max_word_len,
        first_violation=options.first_violation,
    )
    return [
        CheckResult(
            "codifferential-square", verdict.passed, verdict.violations, verdict.notes
        )
    ]


def _derivation_pool(doc: AlgebraDocument) -> list[tuple[str, MultiOp]]:
    """Nonzero deltas and gauge generators shipped with the document."""
    pool: list[tuple[str, MultiOp]] = []
    fam = doc.to_family()
    if fam is not None:
        for n, delta in enumerate(fam.deltas):
            if not delta.is_zero() and all(op != delta for _, op in pool):
                pool.append((f"delta_{n}", delta))
    gauge = doc.to_gauge()
    if gauge is not None:
        for n, xi in enumerate(gauge.xis, start=1):
            if not xi.is_zero() and all(op != xi for _, op in pool):
                pool.append((f"xi_{n}", xi))
    if not pool:
        raise PreconditionError("document ships no nonzero derivations to check")
    return pool


def _cmd_check_key_lemma(doc: AlgebraDocument, options: RunOptions) -> list[CheckResult]:
    bracket = doc.to_bracket()
    pool = _derivation_pool(doc)
    violations: list[Violation] = []
    pairs = 0
    arities = range(1, options.max_arity + 1)
    for (name1, d1), (name2, d2), i, j in product(pool, pool, arities, arities):
        verdict = check_key_lemma(bracket, d1, d2, i, j)
        pairs += 1
        for v in verdict.violations:
            violations.append(Violation(v.check, (name1, name2) + v.site, v.residual))
        if violations and options.first_violation:
            break
    detail = [
        f"derivations: {', '.join(name for name, _ in pool)}",
        f"(operation, operation, arity, arity) combinations: {pairs}",
    ]
    return [CheckResult("key-lemma", not violations, violations, detail)]


def _cmd_gauge(doc: AlgebraDocument, options: RunOptions) -> list[CheckResult]:
    fam = _require_family(doc)
    gauge = _require_gauge(doc)
    transformed = gauge_transform(fam, gauge)
    results = [
        CheckResult(
            f"delta'_{n}",
            None,
            detail=_op_table(transformed.delta(n), f"delta'_{n}"),
        )
        for n in range(transformed.order + 1)
    ]
    violations = check_deformation(transformed)
    results.append(CheckResult("transformed-family", not violations, violations))
    return results


def _cmd_check_gauge_equivalence(
    doc: AlgebraDocument, options: RunOptions
) -> list[CheckResult]:
    verdict = check_gauge_equivalence(
        _require_family(doc),
        _require_gauge(doc),
        max_len=options.max_word_len,
        first_violation=options.first_violation,
    )
    results = _split(
        {
            "gauge-conjugation": "conjugated-codifferential",
            "gauge-comultiplicative": "exponential-morphism",
            "gauge-exp-inverse": "exponential-inverse",
            "gauge-order-expansion": "orderwise-expansion",
        },
        verdict.violations,
    )
    if verdict.notes:
        results[0].detail.extend(verdict.notes)
    return results


def _cmd_check_coalgebra(doc: AlgebraDocument, options: RunOptions) -> list[CheckResult]:
    basis = doc.to_basis()
    dual = check_dual_leibniz(basis, options.max_word_len)
    results = [CheckResult("dual-leibniz", dual.passed, dual.violations)]
    lifted: list[Violation] = []
    ops: list[tuple[str, MultiOp]] = [("bracket", doc.to_bracket())]
    fam = doc.to_family()
    if fam is not None:
        ops += [(f"delta_{n}", d) for n, d in enumerate(fam.deltas) if not d.is_zero()]
    gauge = doc.to_gauge()
    if gauge is not None:
        ops += [(f"xi_{n}", x) for n, x in enumerate(gauge.xis, 1) if not x.is_zero()]
    for name, op in ops:
        verdict = check_coderivation_axiom(lift_coderivation(op), options.max_word_len)
        for v in verdict.violations:
            lifted.append(Violation(v.check, (name,) + v.site, v.residual))
    detail = [f"lifted maps: {', '.join(name for name, _ in ops)}"]
    results.append(CheckResult("coderivation-axiom", not lifted, lifted, detail))
    return results


def _cmd_report_all(doc: AlgebraDocument, options: RunOptions) -> list[CheckResult]:
    results = _cmd_validate(doc, options)
    results += _cmd_check_leibniz(doc, options)
    results += _cmd_check_coalgebra(doc, options)
    if doc.deltas:
        results += _cmd_check_deformation(doc, options)
        results += _cmd_check_sh(doc, options)
        results += _cmd_check_codifferential(doc, options)
        results += _cmd_check_key_lemma(doc, options)
    else:
        results.append(
            CheckResult("deformation-suites", None, detail=["skipped: no family"])
        )
    if doc.deltas and doc.gauges:
        results += _cmd_check_gauge_equivalence(doc, options)
    else:
        results.append(
            CheckResult("gauge-suite", None, detail=["skipped: no gauge sections"])
        )
    return results


COMMANDS = {
    "validate": _cmd_validate,
    "check-leibniz": _cmd_check_leibniz,
    "check-deformation": _cmd_check_deformation,
    "derive": _cmd_derive,
    "check-sh": _cmd_check_sh,
    "check-codifferential": _cmd_check_codifferential,
    "check-key-lemma": _cmd_check_key_lemma,
    "gauge": _cmd_gauge,
    "check-gauge-equivalence": _cmd_check_gauge_equivalence,
    "check-coalgebra": _cmd_check_coalgebra,
    "report-all": _cmd_report_all,
}

# flags that matter per command, for the report header
_OPTION_FIELDS = {
    "check-sh": ("max_const", "first_violation"),
    "check-codifferential": ("max_word_len", "first_violation"),
    "check-key-lemma": ("max_arity", "first_violation"),
    "check-gauge-equivalence": ("max_word_len", "first_violation"),
    "check-coalgebra": ("max_word_len",),
    "report-all": ("max_const", "max_word_len", "max_arity", "first_violation"),
}


def run_command(command: str, text: str, options: RunOptions | None = None) -> Report:
    if command not in COMMANDS:
        raise PreconditionError(f"unknown command {command!r}")
    options = options or RunOptions()
    started = time.monotonic()
    doc = parse_document(text)
    results = COMMANDS[command](doc, options)
    elapsed_ms = int((time.monotonic() - started) * 1000)
    shown = _OPTION_FIELDS.get(command, ())
    rendered = [(name.replace("_", "-"), getattr(options, name)) for name in shown]
    return Report(
        command=command,
        document=doc.name,
        options=rendered,
        results=results,
        elapsed_ms=elapsed_ms,
    )
