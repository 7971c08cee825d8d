"""Declarative mapping rules: a small path language over source XML trees.

Rule files are UTF-8, one rule per line, ``#`` comments:

    SELECTOR -> TARGET [| TRANSFORM]

The selector is a closed XPath-like subset: child steps separated by ``/``,
optional 1-based positional predicates ``[n]``, and a terminal ``text()``
or ``@attribute`` step. Element names match on local name, so namespaced
source records need no prefix bookkeeping in the rules. No arbitrary code
can ride along in a rule file.

Targets are the nine facet names, the extras keys (contact, version,
validation, usage), or ``seeAlso``. Transforms: ``trim``, ``lowercase``,
``splitOn(<delimiter>)``.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Optional

from ..vocab import EXTRA_KEYS, FacetKind

TARGET_SEE_ALSO = "seeAlso"

_NAME_RE = re.compile(r"^[A-Za-z_][\w.\-]*$")
_STEP_RE = re.compile(r"^([A-Za-z_][\w.\-]*)(?:\[(\d+)\])?$")
_SPLIT_RE = re.compile(r"^splitOn\((.*)\)$")


class RuleSyntaxError(ValueError):
    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True, slots=True)
class Step:
    name: str
    position: Optional[int] = None  # 1-based


@dataclass(frozen=True, slots=True)
class Selector:
    steps: tuple[Step, ...]
    terminal: str  # "text()" or "@<attribute>"

    def evaluate(self, element: ET.Element) -> list[str]:
        current = [element]
        for step in self.steps:
            matched = []
            for el in current:
                hits = [child for child in el if _local(child.tag) == step.name]
                if step.position is not None:
                    if len(hits) >= step.position:
                        matched.append(hits[step.position - 1])
                else:
                    matched.extend(hits)
            current = matched
            if not current:
                return []
        values = []
        if self.terminal == "text()":
            for el in current:
                text = "".join(el.itertext()).strip()
                if text:
                    values.append(text)
        else:
            attr = self.terminal[1:]
            for el in current:
                for key, value in el.attrib.items():
                    if _local(key) == attr and value.strip():
                        values.append(value.strip())
        return values


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def parse_selector(text: str, line: int = 0) -> Selector:
    parts = text.strip().split("/")
    if not parts or not parts[-1]:
        raise RuleSyntaxError(line, f"empty selector: {text!r}")
    terminal = parts[-1].strip()
    if terminal == "text()":
        pass
    elif terminal.startswith("@"):
        if not _NAME_RE.match(terminal[1:]):
            raise RuleSyntaxError(line, f"bad attribute step {terminal!r}")
    else:
        raise RuleSyntaxError(line, "selector must end with text() or @attribute")
    steps = []
    for part in parts[:-1]:
        m = _STEP_RE.match(part.strip())
        if not m:
            raise RuleSyntaxError(line, f"bad path step {part!r}")
        name, pos = m.group(1), m.group(2)
        if pos is not None and int(pos) < 1:
            raise RuleSyntaxError(line, "positional predicates are 1-based")
        steps.append(Step(name, int(pos) if pos is not None else None))
    return Selector(tuple(steps), terminal)


VALID_TARGETS = tuple(f.value for f in FacetKind) + tuple(EXTRA_KEYS) + (TARGET_SEE_ALSO,)

TRANSFORM_TRIM = "trim"
TRANSFORM_LOWERCASE = "lowercase"


@dataclass(frozen=True, slots=True)
class MappingRule:
    selector: Selector
    selector_text: str
    target: str
    transform: Optional[str] = None  # trim | lowercase | splitOn(...)
    split_delimiter: Optional[str] = None

    def apply_transform(self, values: list[str]) -> list[str]:
        if self.transform is None:
            return values
        if self.transform == TRANSFORM_TRIM:
            return [v.strip() for v in values]
        if self.transform == TRANSFORM_LOWERCASE:
            return [v.lower() for v in values]
        # splitOn
        out = []
        for value in values:
            out.extend(p.strip() for p in value.split(self.split_delimiter) if p.strip())
        return out


@dataclass(slots=True)
class MappingRuleSet:
    source_format_id: str
    rules: list[MappingRule]

    @property
    def complete(self) -> bool:
        """A ruleset should map something into Title; flag it otherwise."""
        return any(rule.target == FacetKind.TITLE.value for rule in self.rules)

    def without_target(self, target: str) -> "MappingRuleSet":
        return MappingRuleSet(self.source_format_id, [r for r in self.rules if r.target != target])


def load_ruleset(data: bytes | str, source_format_id: str = "") -> MappingRuleSet:
    """Parse a rule file; duplicate (selector, target) pairs collapse."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    rules: list[MappingRule] = []
    seen: set[tuple[str, str]] = set()
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "->" not in line:
            raise RuleSyntaxError(line_no, "missing '->'")
        selector_text, _, rest = line.partition("->")
        target_text, _, transform_text = rest.partition("|")
        target = target_text.strip()
        if target not in VALID_TARGETS:
            raise RuleSyntaxError(line_no, f"unknown target {target!r}")
        selector = parse_selector(selector_text, line_no)
        transform = None
        delimiter = None
        transform_text = transform_text.strip()
        if transform_text:
            if transform_text in (TRANSFORM_TRIM, TRANSFORM_LOWERCASE):
                transform = transform_text
            else:
                m = _SPLIT_RE.match(transform_text)
                if not m or m.group(1) == "":
                    raise RuleSyntaxError(line_no, f"unknown transform {transform_text!r}")
                transform = transform_text
                delimiter = m.group(1)
        key = (selector_text.strip(), target)
        if key in seen:
            continue
        seen.add(key)
        rules.append(MappingRule(selector, selector_text.strip(), target, transform, delimiter))
    return MappingRuleSet(source_format_id, rules)
