"""
Witness plans, partial points and pipeline reports
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .family import DoubleDeltaCertificate, ExtractionParams, FiniteSet
from ..utils.errors import DomainClash, InvalidParams


@dataclass(frozen=True)
class PartialPoint:
    """A function from coordinates to factor points"""
    assignments: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        mapping = dict(self.assignments)
        if len(mapping) != len(self.assignments):
            raise DomainClash("a partial point assigns some coordinate twice")
        object.__setattr__(self, 'assignments', tuple(sorted(mapping.items())))

    @classmethod
    def of(cls, mapping: Dict[int, int]) -> "PartialPoint":
        return cls(tuple(mapping.items()))

    @property
    def domain(self) -> FiniteSet:
        return FiniteSet(tuple(coord for coord, _ in self.assignments))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.assignments)

    def union(self, *others: "PartialPoint") -> "PartialPoint":
        """Union of functions with pairwise disjoint domains"""
        merged = self.as_dict()
        for other in others:
            for coord, point in other.assignments:
                if coord in merged:
                    raise DomainClash(f"coordinate {coord} assigned by two pieces")
                merged[coord] = point
        return PartialPoint.of(merged)


@dataclass(frozen=True)
class WitnessPlan:
    """
    Selections feeding the witness assembly.

    support_cert is expressed in block-local indices (it comes from the
    double family of supports); kernel_selection, block_selections and
    block_of use global box indices. block_selections is keyed by the label
    α, and its members come from block source_block(α).
    """
    support_cert: DoubleDeltaCertificate
    kernel_selection: Tuple[int, ...]
    block_selections: Dict[int, Tuple[int, ...]]
    block_of: Dict[int, int]
    shift: int = 0

    def source_block(self, alpha: int) -> int:
        ordered = self.support_cert.block_indices
        return ordered[ordered.index(alpha) + self.shift]

    def kernel_for(self, alpha: int) -> FiniteSet:
        return self.support_cert.per_block_kernels[self.source_block(alpha)]


@dataclass(frozen=True)
class WitnessAssembly:
    """The pieces q, r, s and the total point p extending their union"""
    q: PartialPoint
    r: PartialPoint
    s: PartialPoint
    r_blocks: Dict[int, PartialPoint]
    point: PartialPoint


@dataclass(frozen=True)
class PipelineParams:
    extraction: ExtractionParams = field(default_factory=ExtractionParams)
    kernel_target: Optional[int] = None
    block_target: Optional[int] = None
    shift: int = 0
    subset_size: Optional[int] = None

    def __post_init__(self):
        if self.shift < 0:
            raise InvalidParams("shift must be non-negative")
        for name in ('kernel_target', 'block_target', 'subset_size'):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise InvalidParams(f"{name} must be at least 1")

    @property
    def effective_kernel_target(self) -> int:
        if self.kernel_target is not None:
            return self.kernel_target
        return self.extraction.block_count_target * self.extraction.per_block_target

    @property
    def effective_block_target(self) -> int:
        return self.block_target if self.block_target is not None else self.extraction.per_block_target


@dataclass(frozen=True)
class SubsetCheck:
    indices: Tuple[int, ...]
    ok: bool
    detail: Optional[str] = None


@dataclass
class PipelineReport:
    """Structured outcome of run_pipeline; filled stage by stage"""
    selected: Tuple[int, ...] = ()
    support_cert: Optional[DoubleDeltaCertificate] = None
    kernel_selection: Optional[Tuple[int, ...]] = None
    block_selections: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    subset_checks: List[SubsetCheck] = field(default_factory=list)
    failed_stage: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.failed_stage is None and all(check.ok for check in self.subset_checks)


