"""
Finite base-presented spaces, canonical boxes and product instances
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .family import FiniteSet
from ..utils.errors import InvalidInstance, InvalidParams


@dataclass(frozen=True)
class FiniteSpace:
    """
    A finite space given by a basis over points 0..point_count-1.

    Only structural checks happen here; the basis axioms are reported by
    TopologyService.validate_space so that invalid presentations can be
    inspected rather than rejected.
    """
    point_count: int
    basis: Tuple[FiniteSet, ...]

    def __post_init__(self):
        if self.point_count < 1:
            raise InvalidInstance("a space needs at least one point")
        basis = tuple(self.basis)
        for position, member in enumerate(basis):
            if member.elements and member.elements[-1] >= self.point_count:
                raise InvalidInstance(f"basis[{position}] references a point outside 0..{self.point_count - 1}")
        object.__setattr__(self, 'basis', basis)

    @classmethod
    def from_lists(cls, point_count: int, basis: Iterable[Iterable[int]]) -> "FiniteSpace":
        return cls(point_count, tuple(FiniteSet.of(member) for member in basis))

    def member(self, index: int) -> FiniteSet:
        if not 0 <= index < len(self.basis):
            raise InvalidInstance(f"basis member {index} does not exist")
        return self.basis[index]

    def nonempty_members(self) -> List[int]:
        return [index for index, member in enumerate(self.basis) if len(member) > 0]


@dataclass(frozen=True)
class Box:
    """Canonical open: coordinate ξ in support is constrained to a basis member of factor ξ"""
    constraints: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        pairs = tuple(sorted(dict(self.constraints).items()))
        if len(pairs) != len(self.constraints):
            raise InvalidInstance("a box constrains each coordinate at most once")
        object.__setattr__(self, 'constraints', pairs)

    @classmethod
    def of(cls, constraints: Mapping[int, int]) -> "Box":
        return cls(tuple(constraints.items()))

    @property
    def support(self) -> FiniteSet:
        return FiniteSet(tuple(coord for coord, _ in self.constraints))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.constraints)

    def constraint(self, coord: int) -> Optional[int]:
        return self.as_dict().get(coord)


@dataclass(frozen=True)
class ProductInstance:
    """Factors X_ξ, indexed boxes U_γ and block cut points over box indices"""
    factors: Tuple[FiniteSpace, ...]
    boxes: Tuple[Box, ...] = ()
    block_boundaries: Tuple[int, ...] = (0,)

    def __post_init__(self):
        factors = tuple(self.factors)
        boxes = tuple(self.boxes)
        boundaries = tuple(self.block_boundaries)
        for gamma, box in enumerate(boxes):
            for coord, member in box.constraints:
                if not 0 <= coord < len(factors):
                    raise InvalidInstance(f"boxes[{gamma}] constrains missing factor {coord}")
                if not 0 <= member < len(factors[coord].basis):
                    raise InvalidInstance(f"boxes[{gamma}] references missing basis member {member} of factor {coord}")
                if len(factors[coord].basis[member]) == 0:
                    raise InvalidInstance(f"boxes[{gamma}] uses an empty basis member of factor {coord}")
        if not boundaries or boundaries[0] != 0 or boundaries[-1] != len(boxes):
            raise InvalidInstance("block boundaries must start at 0 and end at the box count")
        if any(b >= c for b, c in zip(boundaries, boundaries[1:])):
            raise InvalidInstance("block boundaries must be strictly ascending")
        object.__setattr__(self, 'factors', factors)
        object.__setattr__(self, 'boxes', boxes)
        object.__setattr__(self, 'block_boundaries', boundaries)

    @property
    def block_count(self) -> int:
        return len(self.block_boundaries) - 1

    def block_range(self, alpha: int) -> range:
        return range(self.block_boundaries[alpha], self.block_boundaries[alpha + 1])

    def block_of(self, gamma: int) -> int:
        for alpha in range(self.block_count):
            if gamma in self.block_range(alpha):
                return alpha
        raise InvalidInstance(f"box {gamma} is outside every block")

    def open_of(self, gamma: int, coord: int) -> Optional[FiniteSet]:
        """The constrained factor open U_ξ^γ, or None when ξ is outside B_γ"""
        member = self.boxes[gamma].constraint(coord)
        if member is None:
            return None
        return self.factors[coord].basis[member]


@dataclass(frozen=True)
class Violation:
    """One failed basis axiom"""
    kind: str  # cover | intersection | empty
    point: Optional[int] = None
    members: Tuple[int, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class PropertyQuery:
    """Finite (n, k) pair: every length-n list must admit a good k-sublist"""
    n: int
    k: int

    def __post_init__(self):
        if self.n < 1 or not 1 <= self.k <= self.n:
            raise InvalidParams(f"need 1 <= k <= n, got n={self.n}, k={self.k}")


@dataclass(frozen=True)
class PropertyReport:
    holds: bool
    counterexample: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class ChainLawReport:
    """Outcome of checking the chain law on X×Y; counterexample lists (x member, y member) pairs"""
    applicable: bool
    holds: bool
    families_checked: int = 0
    counterexample: Optional[Tuple[Tuple[int, int], ...]] = None
