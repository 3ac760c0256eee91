"""Loading class-definition documents.

A document is a JSON object describing one space and the classes over it::

    {
      "points": ["1", "2", "3"],
      "weights": [0.5, 0.25, 0.25],
      "concepts": ["000", "110", "011"],
      "functions": [[0.0, 0.5, 1.0], [1.0, 1.0, 0.2]],
      "classes": [{"concepts": [...]}, {"functions": [...]}],
      "connectives": {"imp": "1101"}
    }

``weights``, ``concepts``, ``functions``, ``classes`` and ``connectives`` are
optional. ``classes`` lists several classes over the same space for the
commands that take k of them. Concept strings give one bit per point in the
order of ``points``. Every problem is reported as a :class:`DocumentError`
naming the JSON line or the offending field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .compose import ClassicalConnective
from .core import ConceptClass, FiniteSpace, FunctionClass
from .errors import ShatterlabError, ValidationError

_KNOWN = {"points", "weights", "concepts", "functions", "classes", "connectives"}


class DocumentError(ValidationError):
    def __init__(self, where: str, message: str, source: str = "<document>"):
        self.where = where
        self.source = source
        super().__init__(f"{source}: {where}: {message}")


@dataclass(frozen=True)
class ClassDocument:
    space: FiniteSpace
    concepts: ConceptClass | None = None
    functions: FunctionClass | None = None
    classes: tuple[ConceptClass | FunctionClass, ...] = ()
    connectives: dict[str, ClassicalConnective] = field(default_factory=dict)

    def concept_class(self) -> ConceptClass:
        if self.concepts is not None:
            return self.concepts
        if self.functions is not None and self.functions.is_binary:
            return self.functions.to_concept_class()
        if self.classes:
            first = self.classes[0]
            return first if isinstance(first, ConceptClass) else first.to_concept_class()
        raise ValidationError("document has no concept class")

    def function_class(self) -> FunctionClass:
        if self.functions is not None:
            return self.functions
        if self.concepts is not None:
            return self.concepts.to_function_class()
        if self.classes:
            first = self.classes[0]
            return first if isinstance(first, FunctionClass) else first.to_function_class()
        raise ValidationError("document has no function class")

    def all_classes(self) -> list[ConceptClass | FunctionClass]:
        """``classes`` when given, otherwise whichever of concepts/functions is present."""
        if self.classes:
            return list(self.classes)
        return [c for c in (self.concepts, self.functions) if c is not None]


def _concepts(raw, n: int, where: str, src: str) -> list[list[int]]:
    if not isinstance(raw, list):
        raise DocumentError(where, "expected an array of 0/1 strings", src)
    rows = []
    for i, s in enumerate(raw):
        if not isinstance(s, str) or set(s) - {"0", "1"}:
            raise DocumentError(f"{where}[{i}]", f"expected a 0/1 string, got {s!r}", src)
        if len(s) != n:
            raise DocumentError(f"{where}[{i}]", f"has {len(s)} bits but there are {n} points", src)
        rows.append([int(ch) for ch in s])
    return rows


def _functions(raw, n: int, where: str, src: str) -> list[list[float]]:
    if not isinstance(raw, list):
        raise DocumentError(where, "expected an array of number arrays", src)
    rows = []
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != n:
            raise DocumentError(f"{where}[{i}]", f"expected an array of {n} numbers", src)
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise DocumentError(f"{where}[{i}][{j}]", f"not a number: {v!r}", src)
            if not (0.0 <= v <= 1.0):
                raise DocumentError(f"{where}[{i}][{j}]", f"value {v!r} outside [0, 1]", src)
        rows.append([float(v) for v in row])
    return rows


def parse_document(text: str, source: str = "<document>") -> ClassDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}", exc.msg, source) from None
    if not isinstance(data, dict):
        raise DocumentError("top level", "expected a JSON object", source)
    unknown = sorted(set(data) - _KNOWN)
    if unknown:
        raise DocumentError(unknown[0], "unknown field", source)
    if "points" not in data:
        raise DocumentError("points", "missing required field", source)
    points = data["points"]
    if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
        raise DocumentError("points", "expected an array of string labels", source)
    weights = data.get("weights")
    if weights is not None and (
        not isinstance(weights, list) or not all(isinstance(w, (int, float)) and not isinstance(w, bool) for w in weights)
    ):
        raise DocumentError("weights", "expected an array of numbers", source)
    try:
        space = FiniteSpace(points, weights)
    except ShatterlabError as exc:
        raise DocumentError("weights" if weights is not None and "weight" in str(exc) else "points", str(exc), source) from None
    n = len(space)

    concepts = functions = None
    if "concepts" in data:
        concepts = ConceptClass(space, _concepts(data["concepts"], n, "concepts", source))
    if "functions" in data:
        functions = FunctionClass(space, _functions(data["functions"], n, "functions", source))

    classes = []
    raw_classes = data.get("classes", [])
    if not isinstance(raw_classes, list):
        raise DocumentError("classes", "expected an array of class objects", source)
    for i, entry in enumerate(raw_classes):
        where = f"classes[{i}]"
        if not isinstance(entry, dict) or len(set(entry) & {"concepts", "functions"}) != 1 or set(entry) - {"concepts", "functions"}:
            raise DocumentError(where, "expected an object with exactly one of concepts/functions", source)
        if "concepts" in entry:
            classes.append(ConceptClass(space, _concepts(entry["concepts"], n, where + ".concepts", source)))
        else:
            classes.append(FunctionClass(space, _functions(entry["functions"], n, where + ".functions", source)))

    conns = {}
    raw_conns = data.get("connectives", {})
    if not isinstance(raw_conns, dict):
        raise DocumentError("connectives", "expected an object mapping names to truth tables", source)
    for name, bits in raw_conns.items():
        if not isinstance(bits, str):
            raise DocumentError(f"connectives.{name}", "expected a 0/1 string", source)
        try:
            conns[name] = ClassicalConnective.from_bits(bits, name)
        except ShatterlabError as exc:
            raise DocumentError(f"connectives.{name}", str(exc), source) from None

    return ClassDocument(space, concepts, functions, tuple(classes), conns)


def load_document(path) -> ClassDocument:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError("file", exc.strerror or str(exc), str(p)) from None
    except UnicodeDecodeError:
        raise DocumentError("file", "not valid UTF-8", str(p)) from None
    return parse_document(text, str(p))


def dump_document(space: FiniteSpace, concepts: ConceptClass | None = None, functions: FunctionClass | None = None) -> str:
    """Inverse of :func:`parse_document` for the single-class fields."""
    out: dict = {"points": list(space.points), "weights": [float(w) for w in space.weights]}
    if concepts is not None:
        out["concepts"] = ["".join("1" if b else "0" for b in row) for row in concepts.matrix]
    if functions is not None:
        out["functions"] = [[float(v) for v in row] for row in functions.matrix]
    return json.dumps(out, indent=2)
