"""
Canonical JSON codec for every document the command line reads or writes.

Canonical form: keys sorted, no insignificant whitespace, integer lists of
sets and index sets sorted ascending, a trailing newline, and a top-level
"format" field. Input documents are recognised by their field sets.
"""
import json
import logging
from dataclasses import dataclass, field, fields
from functools import singledispatch
from typing import Any, Dict, List, Optional, Tuple, Union

from ..models.family import (
    DeltaSystemCertificate, DoubleDeltaCertificate, DoubleDeltaReport, DoubleFamily, FiniteSet, IndexedFamily,
)
from ..models.generation import GenParams
from ..models.topology import (
    Box, ChainLawReport, FiniteSpace, ProductInstance, PropertyReport, ValidationReport, Violation,
)
from ..models.witness import PartialPoint, PipelineReport, SubsetCheck, WitnessAssembly
from .errors import SchemaViolation
from .validation import Path, SchemaValidator

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class FamilyBundle:
    family: IndexedFamily
    certificate: DeltaSystemCertificate


@dataclass(frozen=True)
class DoubleBundle:
    double_family: DoubleFamily
    certificate: DoubleDeltaCertificate


@dataclass(frozen=True)
class SpaceOpens:
    space: FiniteSpace
    opens: Tuple[int, ...]


@dataclass(frozen=True)
class InstanceIndices:
    instance: ProductInstance
    indices: Tuple[int, ...]


@dataclass(frozen=True)
class Document:
    """A parsed value plus, in lax mode, the unknown fields found at each path"""
    kind: str
    value: Any
    extras: Dict[Path, Dict[str, Any]] = field(default_factory=dict)


# Checked in order; the first kind whose fields are all present wins
KINDS: List[Tuple[str, Tuple[str, ...]]] = [
    ("family_bundle", ("family", "certificate")),
    ("double_bundle", ("double_family", "certificate")),
    ("space_opens", ("space", "opens")),
    ("instance_indices", ("instance", "indices")),
    ("double_certificate", ("m", "I", "J", "A_blocks", "A")),
    ("certificate", ("indices", "kernel")),
    ("double_family", ("ground_size", "blocks")),
    ("family", ("ground_size", "sets")),
    ("instance", ("factors", "boxes", "block_boundaries")),
    ("space", ("points", "basis")),
    ("box", ("support",)),
    ("gen_params", ("seed",)),
]


def detect_kind(document: Dict[str, Any]) -> str:
    for kind, required in KINDS:
        if all(key in document for key in required):
            return kind
    raise SchemaViolation(f"unrecognised document with fields {sorted(document)}")


# Decoding

def _finite_set(v: SchemaValidator, value, path: Path) -> FiniteSet:
    return FiniteSet.of(v.int_list(value, path))


def _family(v: SchemaValidator, value, path: Path) -> IndexedFamily:
    doc = v.object(value, path, ("ground_size", "sets"))
    ground = v.integer(doc["ground_size"], path + ("ground_size",), 0)
    sets = v.array(doc["sets"], path + ("sets",))
    return IndexedFamily(ground, tuple(_finite_set(v, s, path + ("sets", i)) for i, s in enumerate(sets)))


def _certificate(v: SchemaValidator, value, path: Path) -> DeltaSystemCertificate:
    doc = v.object(value, path, ("indices", "kernel"))
    return DeltaSystemCertificate(
        tuple(v.int_list(doc["indices"], path + ("indices",))),
        _finite_set(v, doc["kernel"], path + ("kernel",)),
    )


def _double_family(v: SchemaValidator, value, path: Path) -> DoubleFamily:
    doc = v.object(value, path, ("ground_size", "blocks"))
    ground = v.integer(doc["ground_size"], path + ("ground_size",), 0)
    blocks = []
    for alpha, block in enumerate(v.array(doc["blocks"], path + ("blocks",))):
        where = path + ("blocks", alpha)
        blocks.append(tuple(_finite_set(v, s, where + (g,)) for g, s in enumerate(v.array(block, where))))
    if not blocks:
        v.fail("a double family needs at least one block", path + ("blocks",))
    return DoubleFamily(ground, tuple(blocks))


def _double_certificate(v: SchemaValidator, value, path: Path) -> DoubleDeltaCertificate:
    doc = v.object(value, path, ("m", "I", "J", "A_blocks", "A"))
    per_block = {
        alpha: tuple(v.int_list(item, path + ("J", str(alpha))))
        for alpha, item in v.int_keyed(doc["J"], path + ("J",)).items()
    }
    kernels = {
        alpha: _finite_set(v, item, path + ("A_blocks", str(alpha)))
        for alpha, item in v.int_keyed(doc["A_blocks"], path + ("A_blocks",)).items()
    }
    block_indices = tuple(v.int_list(doc["I"], path + ("I",)))
    if set(per_block) != set(block_indices) or set(kernels) != set(block_indices):
        v.fail("J and A_blocks must be keyed exactly by I", path)
    return DoubleDeltaCertificate(
        m=v.integer(doc["m"], path + ("m",), 0),
        block_indices=block_indices,
        per_block_indices=per_block,
        per_block_kernels=kernels,
        global_kernel=_finite_set(v, doc["A"], path + ("A",)),
    )


def _space(v: SchemaValidator, value, path: Path) -> FiniteSpace:
    doc = v.object(value, path, ("points", "basis"))
    points = v.integer(doc["points"], path + ("points",), 1)
    basis = v.array(doc["basis"], path + ("basis",))
    return FiniteSpace(points, tuple(_finite_set(v, m, path + ("basis", i)) for i, m in enumerate(basis)))


def _box(v: SchemaValidator, value, path: Path) -> Box:
    doc = v.object(value, path, ("support",))
    constraints = {
        coord: v.integer(member, path + ("support", str(coord)), 0)
        for coord, member in v.int_keyed(doc["support"], path + ("support",)).items()
    }
    return Box.of(constraints)


def _instance(v: SchemaValidator, value, path: Path) -> ProductInstance:
    doc = v.object(value, path, ("factors", "boxes", "block_boundaries"))
    factors = tuple(_space(v, f, path + ("factors", i)) for i, f in enumerate(v.array(doc["factors"], path + ("factors",))))
    boxes = tuple(_box(v, b, path + ("boxes", i)) for i, b in enumerate(v.array(doc["boxes"], path + ("boxes",))))
    boundaries = tuple(v.int_list(doc["block_boundaries"], path + ("block_boundaries",)))
    return ProductInstance(factors, boxes, boundaries)


_OPTIONAL_PARAMS = ("point_count", "catalog_id")


def _gen_params(v: SchemaValidator, value, path: Path) -> GenParams:
    names = [f.name for f in fields(GenParams)]
    doc = v.object(value, path, ("seed",), [name for name in names if name != "seed"])
    knobs = {}
    for name in names:
        if name not in doc:
            continue
        if name == "perturb":
            knobs[name] = v.boolean(doc[name], path + (name,))
        elif name in _OPTIONAL_PARAMS:
            knobs[name] = v.optional_integer(doc[name], path + (name,), 0)
        else:
            knobs[name] = v.integer(doc[name], path + (name,), 0)
    return GenParams(**knobs)


def _bundle(first: str, second: str, build):
    def decode(v: SchemaValidator, value, path: Path):
        doc = v.object(value, path, (first, second))
        return build(v, doc, path)
    return decode


DECODERS = {
    "family": _family,
    "certificate": _certificate,
    "double_family": _double_family,
    "double_certificate": _double_certificate,
    "space": _space,
    "box": _box,
    "instance": _instance,
    "gen_params": _gen_params,
    "family_bundle": _bundle("family", "certificate", lambda v, d, p: FamilyBundle(
        _family(v, d["family"], p + ("family",)), _certificate(v, d["certificate"], p + ("certificate",)))),
    "double_bundle": _bundle("double_family", "certificate", lambda v, d, p: DoubleBundle(
        _double_family(v, d["double_family"], p + ("double_family",)),
        _double_certificate(v, d["certificate"], p + ("certificate",)))),
    "space_opens": _bundle("space", "opens", lambda v, d, p: SpaceOpens(
        _space(v, d["space"], p + ("space",)), tuple(sorted(v.int_list(d["opens"], p + ("opens",)))))),
    "instance_indices": _bundle("instance", "indices", lambda v, d, p: InstanceIndices(
        _instance(v, d["instance"], p + ("instance",)), tuple(sorted(set(v.int_list(d["indices"], p + ("indices",))))))),
}


def _unique_fields(pairs) -> Dict[str, Any]:
    fields_seen: Dict[str, Any] = {}
    for key, value in pairs:
        if key in fields_seen:
            raise SchemaViolation(f"duplicate field {key!r}")
        fields_seen[key] = value
    return fields_seen


def parse_instance(data: Union[bytes, str], strict: bool = True,
                   format_version: int = FORMAT_VERSION) -> Document:
    """Decode and validate one document; SchemaViolation carries the JSON path or the line/column"""
    try:
        raw = json.loads(data, object_pairs_hook=_unique_fields if strict else None)
    except json.JSONDecodeError as e:
        raise SchemaViolation(e.msg, line=e.lineno, column=e.colno)
    except UnicodeDecodeError as e:
        raise SchemaViolation(f"input is not UTF-8: {e.reason}")
    if not isinstance(raw, dict):
        raise SchemaViolation("expected a JSON object at the top level")

    raw = dict(raw)
    if "format" in raw:
        version = raw.pop("format")
        if not isinstance(version, int) or isinstance(version, bool) or version != format_version:
            raise SchemaViolation(f"unsupported format {version!r}, expected {format_version}", "$.format")

    kind = detect_kind(raw)
    validator = SchemaValidator(strict, format_version)
    value = DECODERS[kind](validator, raw, ())
    logger.debug(f"Parsed {kind} document")
    return Document(kind, value, validator.extras)


# Encoding

@singledispatch
def to_json(value) -> Any:
    raise TypeError(f"no JSON form for {type(value).__name__}")


@to_json.register(type(None))
@to_json.register(bool)
@to_json.register(int)
@to_json.register(str)
def _(value):
    return value


@to_json.register(list)
@to_json.register(tuple)
def _(value):
    return [to_json(item) for item in value]


@to_json.register(dict)
def _(value):
    return {str(key): to_json(item) for key, item in value.items()}


@to_json.register(FiniteSet)
def _(value: FiniteSet):
    return list(value.elements)


@to_json.register(IndexedFamily)
def _(value: IndexedFamily):
    return {"ground_size": value.ground_size, "sets": [to_json(s) for s in value.sets]}


@to_json.register(DeltaSystemCertificate)
def _(value: DeltaSystemCertificate):
    return {"indices": list(value.indices), "kernel": to_json(value.kernel)}


@to_json.register(DoubleFamily)
def _(value: DoubleFamily):
    return {"ground_size": value.ground_size, "blocks": [[to_json(s) for s in block] for block in value.blocks]}


@to_json.register(DoubleDeltaCertificate)
def _(value: DoubleDeltaCertificate):
    return {
        "m": value.m,
        "I": list(value.block_indices),
        "J": {str(alpha): list(idx) for alpha, idx in value.per_block_indices.items()},
        "A_blocks": {str(alpha): to_json(kernel) for alpha, kernel in value.per_block_kernels.items()},
        "A": to_json(value.global_kernel),
    }


@to_json.register(DoubleDeltaReport)
def _(value: DoubleDeltaReport):
    return {"ok": value.ok, "conditions": value.conditions(), "failures": list(value.failures)}


@to_json.register(FiniteSpace)
def _(value: FiniteSpace):
    return {"points": value.point_count, "basis": [to_json(member) for member in value.basis]}


@to_json.register(Box)
def _(value: Box):
    return {"support": {str(coord): member for coord, member in value.constraints}}


@to_json.register(ProductInstance)
def _(value: ProductInstance):
    return {
        "factors": [to_json(f) for f in value.factors],
        "boxes": [to_json(b) for b in value.boxes],
        "block_boundaries": list(value.block_boundaries),
    }


@to_json.register(GenParams)
def _(value: GenParams):
    return {f.name: getattr(value, f.name) for f in fields(GenParams)}


@to_json.register(Violation)
def _(value: Violation):
    return {"kind": value.kind, "point": value.point, "members": list(value.members)}


@to_json.register(ValidationReport)
def _(value: ValidationReport):
    return {"ok": value.ok, "violations": [to_json(v) for v in value.violations]}


@to_json.register(PropertyReport)
def _(value: PropertyReport):
    counterexample = None if value.counterexample is None else list(value.counterexample)
    return {"holds": value.holds, "counterexample": counterexample}


@to_json.register(ChainLawReport)
def _(value: ChainLawReport):
    return {
        "applicable": value.applicable,
        "holds": value.holds,
        "families_checked": value.families_checked,
        "counterexample": to_json(value.counterexample),
    }


@to_json.register(PartialPoint)
def _(value: PartialPoint):
    return {str(coord): point for coord, point in value.assignments}


@to_json.register(WitnessAssembly)
def _(value: WitnessAssembly):
    return {
        "q": to_json(value.q),
        "r": to_json(value.r),
        "s": to_json(value.s),
        "r_blocks": {str(alpha): to_json(piece) for alpha, piece in value.r_blocks.items()},
        "point": to_json(value.point),
    }


@to_json.register(SubsetCheck)
def _(value: SubsetCheck):
    encoded = {"I": list(value.indices), "ok": value.ok}
    if value.detail is not None:
        encoded["detail"] = value.detail
    return encoded


@to_json.register(PipelineReport)
def _(value: PipelineReport):
    return {
        "ok": value.ok,
        "J": list(value.selected),
        "certificates": {
            "support": to_json(value.support_cert),
            "kernel_selection": to_json(value.kernel_selection),
            "block_selections": {str(a): list(sel) for a, sel in value.block_selections.items()},
        },
        "subset_checks": [to_json(check) for check in value.subset_checks],
        "failed_stage": value.failed_stage,
    }


@to_json.register(FamilyBundle)
def _(value: FamilyBundle):
    return {"family": to_json(value.family), "certificate": to_json(value.certificate)}


@to_json.register(DoubleBundle)
def _(value: DoubleBundle):
    return {"double_family": to_json(value.double_family), "certificate": to_json(value.certificate)}


@to_json.register(SpaceOpens)
def _(value: SpaceOpens):
    return {"space": to_json(value.space), "opens": sorted(value.opens)}


@to_json.register(InstanceIndices)
def _(value: InstanceIndices):
    return {"instance": to_json(value.instance), "indices": sorted(set(value.indices))}


def canonical_bytes(payload: Any) -> bytes:
    return (json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n").encode("utf-8")


def emit_report(value: Any, extras: Optional[Dict[Path, Dict[str, Any]]] = None) -> bytes:
    """Canonical bytes for a model value, a report, a plain dict or a parsed Document"""
    if isinstance(value, Document):
        extras = value.extras if extras is None else extras
        value = value.value
    payload = to_json(value)
    for path, unknown in sorted((extras or {}).items(), key=lambda item: len(item[0])):
        node = payload
        for segment in path:
            node = node[segment]
        for key, item in unknown.items():
            node.setdefault(key, item)
    if isinstance(payload, dict):
        payload["format"] = FORMAT_VERSION
    return canonical_bytes(payload)
