"""Instance files: a bound quiver algebra over F_p plus corpus metadata.

Module references inside ``subcategories`` are one of

* ``"P:v"``, ``"I:v"``, ``"S:v"``: projective, injective or simple at vertex ``v``;
* ``{"dims": [...], "maps": {"arrow": [[...]]}, "name": "..."}``: explicit;
* ``{"dim_vector": [...]}``: the unique enumerated indecomposable with that
  dimension vector.
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional

import jsonschema

from ..exactfield import PrimeField
from ..quivrep import (Enumeration, InadmissibleRelation, Module, QuiverAlgebra, QuiverError,
                       RelationViolation, enumerate_indecomposables, make_module, path_algebra)

SCHEMA_VERSION = "nauslander.instance/1"

_REF = {
    "oneOf": [
        {"type": "string", "pattern": "^[PIS]:.+$"},
        {"type": "object", "required": ["dims"],
         "properties": {"dims": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                        "maps": {"type": "object"}, "name": {"type": "string"}},
         "additionalProperties": False},
        {"type": "object", "required": ["dim_vector"],
         "properties": {"dim_vector": {"type": "array",
                                       "items": {"type": "integer", "minimum": 0}}},
         "additionalProperties": False},
    ]
}

INSTANCE_SCHEMA = {
    "type": "object",
    "required": ["schema", "name", "field", "quiver"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "name": {"type": "string", "minLength": 1},
        "description": {"type": "string"},
        "field": {"type": "object", "required": ["p"],
                  "properties": {"p": {"type": "integer"}}, "additionalProperties": False},
        "quiver": {
            "type": "object", "required": ["vertices", "arrows"],
            "properties": {
                "vertices": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                "arrows": {"type": "array", "items": {
                    "type": "object", "required": ["name", "source", "target"],
                    "properties": {"name": {"type": "string"}, "source": {"type": "string"},
                                   "target": {"type": "string"}},
                    "additionalProperties": False}},
            },
            "additionalProperties": False,
        },
        "relations": {"type": "array", "items": {"type": "array", "minItems": 1, "items": {
            "type": "array", "minItems": 2, "maxItems": 2,
            "prefixItems": [{"type": "integer"},
                            {"type": "array", "items": {"type": "string"}}]}}},
        "nilpotency": {"type": ["integer", "null"], "minimum": 1},
        "corpus": {
            "type": "object",
            "properties": {
                "representation_finite": {"type": "boolean"},
                "max_indecomposable_dim": {"type": ["integer", "null"], "minimum": 1},
                "dim_bound": {"type": "integer", "minimum": 1},
                "gamma_dim_bound": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
        "n": {"type": "integer", "minimum": 1},
        "subcategories": {"type": "object", "additionalProperties": {
            "type": "array", "items": _REF}},
    },
    "additionalProperties": False,
}

DEFAULT_CORPUS = {"representation_finite": False, "max_indecomposable_dim": None,
                  "dim_bound": 4, "gamma_dim_bound": 3}


class InstanceError(ValueError):
    """A rejected instance file; ``kind`` names the failure and ``location`` where it is."""

    def __init__(self, kind: str, location: str, message: str):
        super().__init__(f"{kind} at {location}: {message}")
        self.kind = kind
        self.location = location
        self.message = message


@dataclass
class Instance:
    name: str
    p: int
    vertices: List[str]
    arrows: List[dict]
    relations: list
    corpus: dict
    n: int = 1
    subcategories: Dict[str, list] = field(default_factory=dict)
    description: str = ""
    nilpotency: Optional[int] = None
    source: str = ""
    algebra: QuiverAlgebra = field(default=None, repr=False, compare=False)
    _enum: Optional[Enumeration] = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "name": self.name,
            "field": {"p": self.p},
            "quiver": {"vertices": list(self.vertices),
                       "arrows": [dict(a) for a in self.arrows]},
            "relations": copy.deepcopy(self.relations),
            "corpus": dict(self.corpus),
            "n": self.n,
            "subcategories": copy.deepcopy(self.subcategories),
        }
        if self.description:
            out["description"] = self.description
        if self.nilpotency is not None:
            out["nilpotency"] = self.nilpotency
        return out

    def enumeration(self, rng=0) -> Enumeration:
        if self._enum is None:
            self._enum = enumerate_indecomposables(
                self.algebra, self.corpus["dim_bound"],
                self.corpus.get("max_indecomposable_dim"), rng=rng)
        return self._enum

    def resolve(self, ref, location: str = "") -> Module:
        """Turn a module reference into a module over this instance's algebra."""
        alg = self.algebra
        if isinstance(ref, str):
            kind, v = ref.split(":", 1)
            if v not in alg.vertex_names:
                raise InstanceError("reference", location, f"unknown vertex {v!r}")
            i = alg.vertex_names.index(v)
            X = {"P": alg.projective, "I": alg.injective, "S": alg.simple}[kind](i)
            return X.renamed({"P": f"P{v}", "I": f"I{v}", "S": f"S{v}"}[kind])
        if "dim_vector" in ref:
            want = tuple(ref["dim_vector"])
            hits = [X for X in self.enumeration().modules if X.dims == want]
            if len(hits) != 1:
                raise InstanceError("reference", location,
                                    f"{len(hits)} enumerated indecomposables with dims {list(want)}")
            return hits[0]
        unknown = sorted(set(ref.get("maps", {})) - set(alg.arrow_names))
        if unknown:
            raise InstanceError("shape", location, f"unknown arrows {unknown}")
        try:
            return make_module(alg, ref["dims"], ref.get("maps", {}), name=ref.get("name", ""))
        except RelationViolation as exc:
            raise InstanceError("relation-violation", location, str(exc)) from None
        except (ValueError, KeyError) as exc:
            raise InstanceError("shape", location, str(exc)) from None

    def subcategory_modules(self, name: str) -> List[Module]:
        if name not in self.subcategories:
            raise InstanceError("reference", "subcategories", f"no subcategory named {name!r}")
        return [self.resolve(r, f"subcategories.{name}[{k}]")
                for k, r in enumerate(self.subcategories[name])]


def _location(err: jsonschema.ValidationError) -> str:
    path = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
    return path.lstrip(".") or "<root>"


def instance_from_dict(data: dict, source: str = "<dict>") -> Instance:
    try:
        jsonschema.validate(data, INSTANCE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InstanceError("schema", f"{source}:{_location(exc)}", exc.message) from None
    corpus = dict(DEFAULT_CORPUS)
    corpus.update(data.get("corpus", {}))
    inst = Instance(
        name=data["name"], p=data["field"]["p"], vertices=list(data["quiver"]["vertices"]),
        arrows=[dict(a) for a in data["quiver"]["arrows"]],
        relations=copy.deepcopy(data.get("relations", [])), corpus=corpus,
        n=data.get("n", 1), subcategories=copy.deepcopy(data.get("subcategories", {})),
        description=data.get("description", ""), nilpotency=data.get("nilpotency"),
        source=source)
    try:
        PrimeField(inst.p)
    except ValueError as exc:
        raise InstanceError("modulus", f"{source}:field.p", str(exc)) from None
    try:
        inst.algebra = path_algebra(
            inst.vertices, [(a["name"], a["source"], a["target"]) for a in inst.arrows],
            [[(c, tuple(path)) for c, path in r] for r in inst.relations], inst.p,
            inst.nilpotency)
    except InadmissibleRelation as exc:
        raise InstanceError("inadmissible-relation", f"{source}:relations", str(exc)) from None
    except QuiverError as exc:
        raise InstanceError("quiver", f"{source}:quiver", str(exc)) from None
    # explicit modules are checked eagerly; enumerated references wait for enumeration
    for name, refs in inst.subcategories.items():
        for k, ref in enumerate(refs):
            if isinstance(ref, str) or "dims" in ref:
                inst.resolve(ref, f"{source}:subcategories.{name}[{k}]")
    return inst


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("nauslander.workbench") / "corpus" / name))


def bundled_instances() -> List[str]:
    return sorted(p.name for p in Path(str(resources.files("nauslander.workbench") / "corpus"))
                  .glob("*.json"))


def parse_instance(path) -> Instance:
    """Load and validate an instance file; bare names fall back to the bundled corpus."""
    p = Path(path)
    if not p.exists() and not p.is_absolute() and corpus_path(p.name).exists() \
            and p.parent == Path("."):
        p = corpus_path(p.name)
    if not p.exists():
        raise InstanceError("missing-file", str(path), "no such file")
    text = p.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError("malformed-json", f"{p.name}:{exc.lineno}:{exc.colno}", exc.msg) \
            from None
    return instance_from_dict(data, p.name)


def emit_instance(inst: Instance) -> str:
    """Canonical JSON text; ``parse_instance`` of it gives back an equal instance."""
    return json.dumps(inst.to_dict(), sort_keys=True, indent=2) + "\n"
