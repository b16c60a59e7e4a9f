"""
Finite (n, k)-centeredness and linkedness checks, plus chain composition
across product coordinates
"""
import logging
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from ..config.settings import get_config
from ..models.topology import (
    Box, ChainLawReport, FiniteSpace, ProductInstance, PropertyQuery, PropertyReport,
)
from ..utils.errors import CapExceeded, InvalidInstance, InvalidParams
from .topology_service import TopologyService

logger = logging.getLogger(__name__)


class PrecaliberService:
    """
    Exhaustive property checks over lists of basic opens.

    Lists are multisets of non-empty basis members (repetition allowed), so
    once n exceeds (basis size)·(k−1) a repeated member forces the property.
    """

    def __init__(self, settings=None, topology_service: Optional[TopologyService] = None):
        self.settings = settings or get_config()
        self.topology_service = topology_service or TopologyService(self.settings)
        self.basis_cap = self.settings.PROPERTY_BASIS_CAP
        self.n_cap = self.settings.PROPERTY_N_CAP
        self.candidate_cap = self.settings.CHAIN_CANDIDATE_CAP
        self.family_cap = self.settings.CHAIN_FAMILY_CAP

    def has_centeredness_property(self, space: FiniteSpace, q: PropertyQuery) -> PropertyReport:
        """Every length-n list of basic opens has a k-sublist with a common point"""
        return self._check(space, q, self._has_centered_sublist)

    def has_linked_property(self, space: FiniteSpace, q: PropertyQuery) -> PropertyReport:
        """Every length-n list of basic opens has a pairwise intersecting k-sublist"""
        return self._check(space, q, self._has_linked_sublist)

    def centeredness_profile(self, space: FiniteSpace, n_max: int) -> List[Dict[str, object]]:
        """(n, k) verdicts for both properties, n ascending then k ascending"""
        rows = []
        for n in range(1, n_max + 1):
            for k in range(1, n + 1):
                q = PropertyQuery(n, k)
                rows.append({
                    "n": n,
                    "k": k,
                    "centered": self.has_centeredness_property(space, q).holds,
                    "linked": self.has_linked_property(space, q).holds,
                })
        return rows

    def chain_compose_select(self, instance: ProductInstance, coords: Sequence[int],
                             candidates, k: int) -> Optional[Tuple[int, ...]]:
        """
        Walk the coordinates in order; at each one keep the largest group of
        survivors whose constraints there share a point (unconstrained boxes
        always survive; ties go to the lexicographically least group).
        Returns the k least survivors, or None when fewer than k remain.
        """
        if k < 1:
            raise InvalidParams("k must be at least 1")
        survivors = sorted(set(candidates))
        if len(survivors) > self.candidate_cap:
            raise CapExceeded("chain_candidate_cap", self.candidate_cap, len(survivors))
        if survivors and (survivors[0] < 0 or survivors[-1] >= len(instance.boxes)):
            raise InvalidInstance("candidate indices out of range")

        for coord in coords:
            if not 0 <= coord < len(instance.factors):
                raise InvalidInstance(f"coordinate {coord} is not a factor")
            free = [gamma for gamma in survivors if instance.open_of(gamma, coord) is None]
            constrained = [gamma for gamma in survivors if instance.open_of(gamma, coord) is not None]
            if not constrained:
                continue
            best: Optional[List[int]] = None
            for point in range(instance.factors[coord].point_count):
                group = [gamma for gamma in constrained if point in instance.open_of(gamma, coord)]
                if best is None or len(group) > len(best) or (len(group) == len(best) and group < best):
                    best = group
            survivors = sorted(free + best)
            logger.debug(f"Coordinate {coord}: {len(survivors)} survivors")

        if len(survivors) < k:
            return None
        return tuple(survivors[:k])

    def check_chain_law(self, x: FiniteSpace, y: FiniteSpace, outer: PropertyQuery,
                        inner: PropertyQuery) -> ChainLawReport:
        """
        With outer = (n, k) and inner = (k, m): when Y has outer and X has inner,
        every length-n list of basic boxes U×V over X×Y must yield an m-sized
        centered selection through chain_compose_select (Y first, then X).
        """
        if inner.n != outer.k:
            raise InvalidInstance("the inner pair must start where the outer pair ends")
        applicable = (self.has_centeredness_property(y, outer).holds
                      and self.has_centeredness_property(x, inner).holds)
        if not applicable:
            return ChainLawReport(applicable=False, holds=True)

        pairs = [(u, v) for u in x.nonempty_members() for v in y.nonempty_members()]
        total = comb(len(pairs) + outer.n - 1, outer.n)
        if total > self.family_cap:
            raise CapExceeded("chain_family_cap", self.family_cap, total)

        checked = 0
        for family in combinations_with_replacement(pairs, outer.n):
            instance = ProductInstance(
                factors=(x, y),
                boxes=tuple(Box(((0, u), (1, v))) for u, v in family),
                block_boundaries=(0, len(family)),
            )
            selection = self.chain_compose_select(instance, (1, 0), range(len(family)), inner.k)
            checked += 1
            if selection is None or not self.topology_service.boxes_centered(instance, selection):
                return ChainLawReport(applicable=True, holds=False, families_checked=checked,
                                      counterexample=tuple(family))
        return ChainLawReport(applicable=True, holds=True, families_checked=checked)

    # Enumeration

    def _check(self, space: FiniteSpace, q: PropertyQuery, predicate) -> PropertyReport:
        members = space.nonempty_members()
        if len(members) > self.basis_cap:
            raise CapExceeded("property_basis_cap", self.basis_cap, len(members))
        if q.n > self.n_cap:
            raise CapExceeded("property_n_cap", self.n_cap, q.n)

        opens = {index: space.basis[index].as_frozenset() for index in members}
        for family in combinations_with_replacement(members, q.n):
            if not predicate([opens[index] for index in family], q.k):
                logger.debug(f"(n={q.n}, k={q.k}) fails on {family}")
                return PropertyReport(holds=False, counterexample=tuple(family))
        return PropertyReport(holds=True)

    @staticmethod
    def _has_centered_sublist(opens, k: int) -> bool:
        # a k-sublist has a common point iff some point lies in k members
        counts: Dict[int, int] = {}
        for member in opens:
            for point in member:
                counts[point] = counts.get(point, 0) + 1
                if counts[point] >= k:
                    return True
        return k <= 0

    @staticmethod
    def _has_linked_sublist(opens, k: int) -> bool:
        if k <= 1:
            return len(opens) >= k
        for chosen in combinations(range(len(opens)), k):
            if all(opens[i] & opens[j] for i, j in combinations(chosen, 2)):
                return True
        return False
