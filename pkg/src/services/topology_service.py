"""
Finite spaces, canonical boxes and centeredness checks
"""
import logging
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence

from ..config.settings import get_config
from ..models.family import FiniteSet
from ..models.topology import Box, FiniteSpace, ProductInstance, ValidationReport, Violation
from ..utils.errors import InvalidInstance

logger = logging.getLogger(__name__)


class TopologyService:
    """Coordinatewise reasoning about finite spaces and their products"""

    def __init__(self, settings=None):
        self.settings = settings or get_config()

    def validate_space(self, space: FiniteSpace) -> ValidationReport:
        """Report cover, intersection-refinement and empty-member violations"""
        violations: List[Violation] = []
        basis = [member.as_frozenset() for member in space.basis]

        for index, member in enumerate(basis):
            if not member:
                violations.append(Violation("empty", members=(index,)))

        covered = set().union(*basis) if basis else set()
        for point in range(space.point_count):
            if point not in covered:
                violations.append(Violation("cover", point=point))

        for first, second in combinations(range(len(basis)), 2):
            meet = basis[first] & basis[second]
            for point in sorted(meet):
                if not any(point in member and member <= meet for member in basis):
                    violations.append(Violation("intersection", point=point, members=(first, second)))

        if violations:
            logger.debug(f"Space with {space.point_count} points has {len(violations)} violations")
        return ValidationReport(tuple(violations))

    def is_centered(self, space: FiniteSpace, opens: Sequence[int]) -> bool:
        """A finite list is centered iff its total intersection is non-empty; [] is centered"""
        common = None
        for index in opens:
            member = space.member(index).as_frozenset()
            common = member if common is None else common & member
            if not common:
                return False
        return True

    def common_points(self, instance: ProductInstance, indices: Iterable[int]) -> Optional[Dict[int, FrozenSet[int]]]:
        """Per constrained coordinate, the points shared by all constraints there; None when some is empty"""
        shared: Dict[int, FrozenSet[int]] = {}
        for gamma in self._checked(instance, indices):
            for coord, member in instance.boxes[gamma].constraints:
                points = instance.factors[coord].basis[member].as_frozenset()
                shared[coord] = shared[coord] & points if coord in shared else points
                if not shared[coord]:
                    return None
        return shared

    def boxes_centered(self, instance: ProductInstance, indices: Iterable[int]) -> bool:
        return self.common_points(instance, indices) is not None

    def boxes_linked(self, instance: ProductInstance, indices: Iterable[int]) -> bool:
        """Pairwise non-empty intersections (the linked, weaker notion)"""
        chosen = self._checked(instance, indices)
        return all(self.boxes_centered(instance, pair) for pair in combinations(chosen, 2))

    @staticmethod
    def project_box(box: Box, coords: FiniteSet) -> Box:
        """Canonical image of a box under the projection onto coords"""
        keep = coords.as_frozenset()
        return Box(tuple((coord, member) for coord, member in box.constraints if coord in keep))

    def point_in_boxes(self, instance: ProductInstance, point: Dict[int, int], indices: Iterable[int]) -> bool:
        """Membership of a point (defined at least on every support) in each listed box"""
        for gamma in self._checked(instance, indices):
            for coord, member in instance.boxes[gamma].constraints:
                if coord not in point or point[coord] not in instance.factors[coord].basis[member]:
                    return False
        return True

    @staticmethod
    def _checked(instance: ProductInstance, indices: Iterable[int]) -> List[int]:
        chosen = sorted(set(indices))
        if chosen and (chosen[0] < 0 or chosen[-1] >= len(instance.boxes)):
            raise InvalidInstance(f"box indices must lie in 0..{len(instance.boxes) - 1}")
        return chosen
