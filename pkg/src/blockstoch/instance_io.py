"""Reading and writing family instances as JSON documents.

An instance document has the fields ``blocks`` (a list of lists of
integer labels, required), ``ground`` (an optional list of labels,
checked against the union of the blocks), ``weights`` (an optional map
from label to an exact rational), and ``feasible`` (an optional flag
attached to generated instances).  Rationals are written as ``"p/q"``
strings, or as plain integers when the denominator is one.  Decimal
floats are rejected: every value must parse exactly.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

from .errors import InputError, UnknownElementError
from .family import SetFamily, WeightFunction, build_family

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")

_FIELDS = {"ground", "blocks", "weights", "feasible"}


def parse_rational(value: object) -> Fraction:
    """Parse an exact rational from an integer or a ``"p/q"`` string."""
    if isinstance(value, bool):
        raise InputError(f"expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.match(text):
            raise InputError(
                f"cannot parse {value!r} as an exact rational; "
                'write "p/q" or an integer'
            )
        num, slash, den = text.partition("/")
        if slash and int(den) == 0:
            raise InputError(f"zero denominator in {value!r}")
        return Fraction(int(num), int(den)) if slash else Fraction(int(num))
    if isinstance(value, float):
        raise InputError(
            f"decimal floats are rejected, got {value!r}; "
            'write an exact rational such as "1/2"'
        )
    raise InputError(f"expected a rational, got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    """Render a rational as ``"p/q"``, or ``"p"`` when the denominator is one."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Instance:
    """A parsed instance: the family plus an optional weight function."""

    family: SetFamily
    weights: WeightFunction | None
    feasible: bool | None = None


def _reject_float(text: str) -> Fraction:
    raise InputError(
        f"decimal floats are rejected, got {text!r}; "
        'write an exact rational such as "1/2"'
    )


def _parse_label(value: object, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{where}: labels must be integers, got {value!r}")
    if value < 0:
        raise InputError(f"{where}: labels must be non-negative, got {value}")
    return value


def parse_instance(text: str) -> Instance:
    """Parse a JSON instance document into a family and optional weights."""
    try:
        doc = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise InputError(f"instance is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError("instance must be a JSON object")
    unknown = sorted(set(doc) - _FIELDS)
    if unknown:
        raise InputError(f"unknown instance fields: {', '.join(unknown)}")
    if "blocks" not in doc:
        raise InputError('instance is missing the "blocks" field')
    raw_blocks = doc["blocks"]
    if not isinstance(raw_blocks, list):
        raise InputError('"blocks" must be a list of lists of labels')
    blocks = []
    for pos, raw in enumerate(raw_blocks):
        if not isinstance(raw, list):
            raise InputError(f"block {pos + 1} must be a list of labels")
        blocks.append(
            [_parse_label(item, f"block {pos + 1}") for item in raw]
        )
    ground = None
    if "ground" in doc and doc["ground"] is not None:
        if not isinstance(doc["ground"], list):
            raise InputError('"ground" must be a list of labels')
        ground = [_parse_label(item, '"ground"') for item in doc["ground"]]
    family = build_family(blocks, ground)

    weights: WeightFunction | None = None
    if "weights" in doc and doc["weights"] is not None:
        raw_weights = doc["weights"]
        if not isinstance(raw_weights, dict):
            raise InputError('"weights" must be a map from label to rational')
        values: dict[int, Fraction] = {}
        for key, raw in raw_weights.items():
            try:
                label = int(key)
            except ValueError:
                raise InputError(
                    f"weight key {key!r} is not an integer label"
                ) from None
            if label not in family.gamma:
                raise UnknownElementError(
                    f"weight for unknown element {label}"
                )
            values[label] = parse_rational(raw)
        weights = WeightFunction(values)

    feasible: bool | None = None
    if "feasible" in doc and doc["feasible"] is not None:
        if not isinstance(doc["feasible"], bool):
            raise InputError('"feasible" must be a boolean')
        feasible = doc["feasible"]
    return Instance(family, weights, feasible)


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def load_instance(path: str) -> Instance:
    """Read and parse an instance document from a file."""
    return parse_instance(_read_text(path))


def parse_weights_document(text: str) -> WeightFunction:
    """Parse a document holding only a weights map, for generator runs.

    Generator-backed commands take the family from the generator, so the
    document must consist of the ``weights`` field alone.
    """
    try:
        doc = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise InputError(f"document is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    extra = sorted(set(doc) - {"weights"})
    if extra:
        raise InputError(
            "a generator run takes a weights-only document; "
            f"unexpected fields: {', '.join(extra)}"
        )
    if "weights" not in doc or not isinstance(doc["weights"], dict):
        raise InputError('document must hold a "weights" map')
    values: dict[int, Fraction] = {}
    for key, raw in doc["weights"].items():
        try:
            label = int(key)
        except ValueError:
            raise InputError(f"weight key {key!r} is not an integer label") from None
        if label < 0:
            raise InputError(f"weight label {label} is negative")
        values[label] = parse_rational(raw)
    return WeightFunction(values)


def load_weights_document(path: str) -> WeightFunction:
    """Read and parse a weights-only document from a file."""
    return parse_weights_document(_read_text(path))


def weights_to_document(weights: WeightFunction | Mapping[int, Fraction]) -> dict[str, str | int]:
    """Render weights as a label-sorted map with ``"p/q"`` values."""
    items = weights.items() if isinstance(weights, WeightFunction) else sorted(weights.items())
    doc: dict[str, str | int] = {}
    for label, value in items:
        rendered = format_rational(value)
        doc[str(label)] = int(rendered) if "/" not in rendered else rendered
    return doc


def dump_instance(
    family: SetFamily,
    weights: WeightFunction | None = None,
    feasible: bool | None = None,
) -> str:
    """Render a family (and optional weights) as a canonical JSON document."""
    doc: dict[str, Any] = {
        "ground": list(family.ground),
        "blocks": [list(block.members) for block in family.blocks],
    }
    if weights is not None:
        doc["weights"] = weights_to_document(weights)
    if feasible is not None:
        doc["feasible"] = feasible
    return json.dumps(doc, indent=2) + "\n"
