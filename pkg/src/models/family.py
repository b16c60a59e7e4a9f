"""
Finite set families, double families and their Δ-system certificates
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, Tuple

from ..utils.errors import InvalidInstance, InvalidParams


@dataclass(frozen=True, order=True)
class FiniteSet:
    """Strictly increasing tuple of non-negative element ids"""
    elements: Tuple[int, ...] = ()

    def __post_init__(self):
        previous = -1
        for element in self.elements:
            if not isinstance(element, int) or isinstance(element, bool) or element < 0:
                raise InvalidInstance(f"element ids must be non-negative integers, got {element!r}")
            if element <= previous:
                raise InvalidInstance(f"elements must be strictly increasing: {self.elements}")
            previous = element

    @classmethod
    def of(cls, elements: Iterable[int]) -> "FiniteSet":
        """Build from any iterable, sorting and dropping duplicates"""
        return cls(tuple(sorted(set(elements))))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, element) -> bool:
        return element in self.as_frozenset()

    def as_frozenset(self) -> frozenset:
        return frozenset(self.elements)

    def __and__(self, other: "FiniteSet") -> "FiniteSet":
        return FiniteSet.of(self.as_frozenset() & other.as_frozenset())

    def __or__(self, other: "FiniteSet") -> "FiniteSet":
        return FiniteSet.of(self.as_frozenset() | other.as_frozenset())

    def __sub__(self, other: "FiniteSet") -> "FiniteSet":
        return FiniteSet.of(self.as_frozenset() - other.as_frozenset())

    def isdisjoint(self, other: "FiniteSet") -> bool:
        return self.as_frozenset().isdisjoint(other.elements)

    def issubset(self, other: "FiniteSet") -> bool:
        return self.as_frozenset() <= other.as_frozenset()

    def __repr__(self) -> str:
        return "{" + ",".join(str(e) for e in self.elements) + "}"


def _check_ground(sets: Iterable[FiniteSet], ground_size: int, where: str):
    for position, member in enumerate(sets):
        if not isinstance(member, FiniteSet):
            raise InvalidInstance(f"{where}[{position}] is not a FiniteSet")
        if member.elements and member.elements[-1] >= ground_size:
            raise InvalidInstance(
                f"{where}[{position}] has element {member.elements[-1]} outside ground set of size {ground_size}"
            )


@dataclass(frozen=True)
class IndexedFamily:
    """Indexed family of finite sets over a declared ground set; repeats allowed"""
    ground_size: int
    sets: Tuple[FiniteSet, ...] = ()

    def __post_init__(self):
        if self.ground_size < 0:
            raise InvalidInstance("ground_size must be non-negative")
        object.__setattr__(self, 'sets', tuple(self.sets))
        _check_ground(self.sets, self.ground_size, "sets")

    @classmethod
    def from_lists(cls, ground_size: int, sets: Iterable[Iterable[int]]) -> "IndexedFamily":
        return cls(ground_size, tuple(FiniteSet.of(s) for s in sets))

    def __len__(self) -> int:
        return len(self.sets)

    def __getitem__(self, index: int) -> FiniteSet:
        return self.sets[index]


@dataclass(frozen=True)
class DeltaSystemCertificate:
    """Index set J with kernel A: every pairwise intersection over J equals A"""
    indices: Tuple[int, ...]
    kernel: FiniteSet

    def __post_init__(self):
        object.__setattr__(self, 'indices', tuple(sorted(set(self.indices))))


@dataclass(frozen=True)
class DoubleFamily:
    """Block-indexed family A(α, γ); blocks may differ in length"""
    ground_size: int
    blocks: Tuple[Tuple[FiniteSet, ...], ...]

    def __post_init__(self):
        if self.ground_size < 0:
            raise InvalidInstance("ground_size must be non-negative")
        blocks = tuple(tuple(block) for block in self.blocks)
        if not blocks:
            raise InvalidInstance("a double family needs at least one block")
        for alpha, block in enumerate(blocks):
            _check_ground(block, self.ground_size, f"blocks[{alpha}]")
        object.__setattr__(self, 'blocks', blocks)

    @classmethod
    def from_lists(cls, ground_size: int, blocks) -> "DoubleFamily":
        return cls(ground_size, tuple(tuple(FiniteSet.of(s) for s in block) for block in blocks))

    @property
    def total_sets(self) -> int:
        return sum(len(block) for block in self.blocks)

    def block_family(self, alpha: int) -> IndexedFamily:
        return IndexedFamily(self.ground_size, self.blocks[alpha])

    def member(self, alpha: int, gamma: int) -> FiniteSet:
        return self.blocks[alpha][gamma]


@dataclass(frozen=True)
class DoubleDeltaCertificate:
    """Witness (m, I, {J_α}, {A_α}, A) for the two-level Δ-system conditions"""
    m: int
    block_indices: Tuple[int, ...]
    per_block_indices: Dict[int, Tuple[int, ...]]
    per_block_kernels: Dict[int, FiniteSet]
    global_kernel: FiniteSet

    def __post_init__(self):
        if self.m < 0:
            raise InvalidInstance("m must be non-negative")
        block_indices = tuple(sorted(set(self.block_indices)))
        per_block = {alpha: tuple(sorted(set(idx))) for alpha, idx in self.per_block_indices.items()}
        if set(per_block) != set(block_indices) or set(self.per_block_kernels) != set(block_indices):
            raise InvalidInstance("per-block indices and kernels must be keyed exactly by I")
        object.__setattr__(self, 'block_indices', block_indices)
        object.__setattr__(self, 'per_block_indices', dict(sorted(per_block.items())))
        object.__setattr__(self, 'per_block_kernels', dict(sorted(self.per_block_kernels.items())))


@dataclass(frozen=True)
class ExtractionParams:
    """Targets for the two-level extraction: |I| ≥ s and |J_α| ≥ t"""
    block_count_target: int = 2
    per_block_target: int = 2

    def __post_init__(self):
        if self.block_count_target < 2 or self.per_block_target < 2:
            raise InvalidParams("block_count_target and per_block_target must both be at least 2")


@dataclass(frozen=True)
class DoubleDeltaReport:
    """Per-condition outcome of verifying a double Δ-system certificate"""
    block_ranges: bool
    kernels_pairwise: bool
    within_block: bool
    cross_block: bool
    uniform_size: bool
    failures: Tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return all((self.block_ranges, self.kernels_pairwise, self.within_block,
                    self.cross_block, self.uniform_size))

    def conditions(self) -> Dict[str, bool]:
        return {
            "1_block_ranges": self.block_ranges,
            "2_kernels_pairwise": self.kernels_pairwise,
            "3_within_block": self.within_block,
            "4_cross_block": self.cross_block,
            "5_uniform_size": self.uniform_size,
        }
