"""
Single-level Δ-system (sunflower) extraction and verification
"""
import logging
import math
from collections import defaultdict
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from ..config.settings import get_config
from ..models.family import DeltaSystemCertificate, FiniteSet, IndexedFamily
from ..utils.errors import CapExceeded, DegenerateSize, InvalidInstance, InvalidParams, NotDeltaSystem

logger = logging.getLogger(__name__)

Member = Tuple[int, FrozenSet[int]]


class DeltaSystemService:
    """Find and check Δ-systems in indexed families of finite sets"""

    def __init__(self, settings=None):
        self.settings = settings or get_config()
        self.exhaustive_cap = self.settings.EXHAUSTIVE_CAP

    # Verification

    def kernel_of(self, family: IndexedFamily, indices) -> FiniteSet:
        """Common pairwise intersection over indices, or NotDeltaSystem"""
        chosen = self._checked_indices(family, indices)
        kernel = family[chosen[0]] & family[chosen[1]]
        for i, j in combinations(chosen, 2):
            if family[i] & family[j] != kernel:
                raise NotDeltaSystem(
                    f"sets {i} and {j} meet in {family[i] & family[j]!r}, expected {kernel!r}"
                )
        return kernel

    def verify_delta_system(self, family: IndexedFamily, cert: DeltaSystemCertificate) -> bool:
        chosen = self._checked_indices(family, cert.indices)
        return all(family[i] & family[j] == cert.kernel for i, j in combinations(chosen, 2))

    @staticmethod
    def er_threshold(k: int, r: int) -> int:
        """k!·(r−1)^k: more distinct k-sets than this always contain an r-member Δ-system"""
        if k < 0 or r < 2:
            raise InvalidParams("er_threshold needs k >= 0 and r >= 2")
        return math.factorial(k) * (r - 1) ** k

    # Exact oracle

    def find_delta_system_exact(self, family: IndexedFamily, r: int) -> Optional[DeltaSystemCertificate]:
        """Complete search; returns the lexicographically least J of size r"""
        self._check_r(r)
        if len(family) > self.exhaustive_cap:
            raise CapExceeded("exhaustive_cap", self.exhaustive_cap, len(family))
        if r > len(family):
            return None

        members = [s.as_frozenset() for s in family.sets]
        found = _search_exact(members, r)
        if found is None:
            logger.debug(f"No Δ-system of size {r} among {len(family)} sets")
            return None
        indices, kernel = found
        return DeltaSystemCertificate(tuple(indices), FiniteSet.of(kernel))

    # Constructive extractor

    def find_delta_system_er(self, family: IndexedFamily, r: int) -> Optional[DeltaSystemCertificate]:
        """
        Constructive extraction following the Erdős–Rado recursion.

        Repeated sets are collapsed first; a set repeated r times is returned
        directly with itself as the kernel. The remaining distinct sets are
        bucketed by cardinality and the recursion runs on the largest bucket
        first, then on the others.
        """
        self._check_r(r)
        if len(family) < r:
            return None

        occurrences: Dict[FiniteSet, List[int]] = defaultdict(list)
        for index, member in enumerate(family.sets):
            occurrences[member].append(index)

        repeated = [indices[:r] for indices in occurrences.values() if len(indices) >= r]
        if repeated:
            indices = min(repeated)
            logger.debug(f"Repetition shortcut on set {family[indices[0]]!r}")
            return DeltaSystemCertificate(tuple(indices), family[indices[0]])

        buckets: Dict[int, List[Member]] = defaultdict(list)
        for member, indices in occurrences.items():
            buckets[len(member)].append((indices[0], member.as_frozenset()))

        for size in sorted(buckets, key=lambda s: (-len(buckets[s]), s)):
            bucket = sorted(buckets[size])
            found = _sunflower(bucket, r)
            if found is not None:
                indices, kernel = found
                cert = DeltaSystemCertificate(tuple(indices), FiniteSet.of(kernel))
                logger.debug(f"Recursion found kernel {cert.kernel!r} in bucket of {size}-sets")
                return cert
        return None

    def find_largest(self, family: IndexedFamily, use_exact: Optional[bool] = None) -> Optional[DeltaSystemCertificate]:
        """
        Δ-system of the largest size the chosen finder reaches (at least 2).

        Sub-selections of a Δ-system of size ≥ 2 keep its kernel, so sizes
        are tried upward and the last success is kept.
        """
        if use_exact is None:
            use_exact = len(family) <= self.exhaustive_cap
        finder = self.find_delta_system_exact if use_exact else self.find_delta_system_er
        best = None
        for r in range(2, len(family) + 1):
            cert = finder(family, r)
            if cert is None:
                break
            best = cert
        return best

    # Helpers

    @staticmethod
    def _check_r(r: int):
        if r < 2:
            raise InvalidParams("Δ-systems need r >= 2")

    @staticmethod
    def _checked_indices(family: IndexedFamily, indices) -> Tuple[int, ...]:
        chosen = tuple(sorted(set(indices)))
        if len(chosen) < 2:
            raise DegenerateSize("a kernel needs at least two members")
        if chosen[0] < 0 or chosen[-1] >= len(family):
            raise InvalidInstance(f"indices must lie in 0..{len(family) - 1}")
        return chosen


def _search_exact(members: Sequence[FrozenSet[int]], r: int) -> Optional[Tuple[List[int], FrozenSet[int]]]:
    """Depth-first search in lexicographic order; the first hit is the least J"""
    count = len(members)
    chosen: List[int] = []

    def extend(start: int, kernel: Optional[FrozenSet[int]]):
        if len(chosen) == r:
            return list(chosen), kernel
        for candidate in range(start, count - (r - len(chosen)) + 1):
            candidate_set = members[candidate]
            if not chosen:
                new_kernel = None
            elif kernel is None:
                new_kernel = members[chosen[0]] & candidate_set
            else:
                if not kernel <= candidate_set:
                    continue
                if any(members[i] & candidate_set != kernel for i in chosen):
                    continue
                new_kernel = kernel
            chosen.append(candidate)
            found = extend(candidate + 1, new_kernel)
            chosen.pop()
            if found is not None:
                return found
        return None

    return extend(0, None)


def _sunflower(members: List[Member], r: int) -> Optional[Tuple[List[int], FrozenSet[int]]]:
    """
    Erdős–Rado recursion over distinct sets.

    A greedy maximal pairwise-disjoint subcollection with r members is a
    Δ-system with empty kernel. Otherwise every other member meets its union;
    the element covering the most members is removed from those members and
    the recursion continues on them, adding the element back to the kernel.
    Elements are tried in order of coverage until one succeeds.
    """
    if len(members) < r:
        return None

    disjoint: List[int] = []
    used = set()
    for index, member in members:
        if used.isdisjoint(member):
            disjoint.append(index)
            used |= member
    if len(disjoint) >= r:
        return sorted(disjoint)[:r], frozenset()

    coverage = defaultdict(int)
    for _, member in members:
        for element in member & used:
            coverage[element] += 1
    for element in sorted(coverage, key=lambda e: (-coverage[e], e)):
        if coverage[element] < r:
            break
        link = [(index, member - {element}) for index, member in members if element in member]
        found = _sunflower(link, r)
        if found is not None:
            indices, kernel = found
            return indices, kernel | {element}
    return None
