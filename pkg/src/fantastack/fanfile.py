"""JSON fan files: parsing with located diagnostics, and canonical rendering."""
from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass

from fantastack.lattice import IntVector, primitive
from fantastack.stacky import StackyFanInput

FIELDS = ("name", "lattice_rank", "rays", "cones", "nu")


class FanFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.field = field


class PrimitivizedRayWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FanFile:
    lattice_rank: int
    rays: tuple[IntVector, ...]
    cones: tuple[tuple[int, ...], ...]
    nu: tuple[IntVector, ...] | None = None
    name: str | None = None

    def to_input(self) -> StackyFanInput:
        return StackyFanInput(self.lattice_rank, self.rays, self.cones, self.nu, self.name)


def _line_of(text: str, key: str) -> int | None:
    m = re.search(rf'"{re.escape(key)}"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _int_vector(value, field, length, line) -> IntVector:
    if not isinstance(value, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in value):
        raise FanFileError("expected a list of integers", line, field)
    if len(value) != length:
        raise FanFileError(f"expected length {length}, got {len(value)}", line, field)
    return tuple(value)


def parse_fan_file(text: str) -> FanFile:
    """Parse and validate a fan document.

    Non-primitive rays are divided by their gcd, with a
    :class:`PrimitivizedRayWarning`.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FanFileError(e.msg, e.lineno) from None
    if not isinstance(doc, dict):
        raise FanFileError("top level must be a JSON object", 1)
    unknown = sorted(set(doc) - set(FIELDS))
    if unknown:
        raise FanFileError("unknown field", _line_of(text, unknown[0]), unknown[0])
    for key in ("lattice_rank", "rays", "cones"):
        if key not in doc:
            raise FanFileError("missing required field", None, key)

    d = doc["lattice_rank"]
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise FanFileError("expected a positive integer", _line_of(text, "lattice_rank"), "lattice_rank")

    line = _line_of(text, "rays")
    if not isinstance(doc["rays"], list) or not doc["rays"]:
        raise FanFileError("expected a nonempty list of rays", line, "rays")
    rays = []
    for i, r in enumerate(doc["rays"]):
        v = _int_vector(r, f"rays[{i}]", d, line)
        if not any(v):
            raise FanFileError("zero vector is not a ray", line, f"rays[{i}]")
        p = primitive(v)
        if p != v:
            warnings.warn(f"rays[{i}] = {list(v)} is not primitive; using {list(p)}", PrimitivizedRayWarning, stacklevel=2)
        rays.append(p)

    line = _line_of(text, "cones")
    if not isinstance(doc["cones"], list) or not doc["cones"]:
        raise FanFileError("expected a nonempty list of cones", line, "cones")
    cones = []
    for k, c in enumerate(doc["cones"]):
        if not isinstance(c, list) or not c or any(isinstance(x, bool) or not isinstance(x, int) for x in c):
            raise FanFileError("expected a nonempty list of ray indices", line, f"cones[{k}]")
        for i in c:
            if not 0 <= i < len(rays):
                raise FanFileError(f"ray index {i} out of range 0..{len(rays) - 1}", line, f"cones[{k}]")
        cones.append(tuple(c))

    nu = None
    if doc.get("nu") is not None:
        line = _line_of(text, "nu")
        if not isinstance(doc["nu"], list) or not doc["nu"]:
            raise FanFileError("expected a nonempty list of vectors", line, "nu")
        nu = tuple(_int_vector(v, f"nu[{i}]", d, line) for i, v in enumerate(doc["nu"]))

    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise FanFileError("expected a string", _line_of(text, "name"), "name")
    return FanFile(d, tuple(rays), tuple(cones), nu, name)


def render_fan_file(f: FanFile) -> str:
    doc = {}
    if f.name is not None:
        doc["name"] = f.name
    doc["lattice_rank"] = f.lattice_rank
    doc["rays"] = [list(r) for r in f.rays]
    doc["cones"] = [list(c) for c in f.cones]
    if f.nu is not None:
        doc["nu"] = [list(v) for v in f.nu]
    return json.dumps(doc) + "\n"


def load_fan_file(path: str) -> FanFile:
    with open(path, encoding="utf-8") as fh:
        return parse_fan_file(fh.read())
