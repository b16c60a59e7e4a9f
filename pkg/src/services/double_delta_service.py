"""
Two-level Δ-system extraction and verification
"""
import logging
from collections import defaultdict
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from ..config.settings import get_config
from ..models.family import (
    DeltaSystemCertificate, DoubleDeltaCertificate, DoubleDeltaReport, DoubleFamily,
    ExtractionParams, FiniteSet, IndexedFamily,
)
from ..utils.errors import CapExceeded, DegenerateSize, NotDeltaSystem
from ..utils.worker_pool import ordered_map
from .delta_service import DeltaSystemService

logger = logging.getLogger(__name__)


class DoubleDeltaService:
    """Handle double Δ-system certificates over block-indexed families"""

    def __init__(self, settings=None, delta_service: Optional[DeltaSystemService] = None):
        self.settings = settings or get_config()
        self.delta_service = delta_service or DeltaSystemService(self.settings)
        self.exact_set_cap = self.settings.DOUBLE_EXACT_SET_CAP
        self.exact_block_cap = self.settings.DOUBLE_EXACT_BLOCK_CAP
        self.workers = self.settings.WORKERS

    def extract_double_delta(self, dfam: DoubleFamily,
                             params: ExtractionParams) -> Optional[DoubleDeltaCertificate]:
        """
        Run the four phases: per-block Δ-systems, pigeonhole on kernel size,
        Δ-system of kernels, then filtering against earlier blocks.

        Fibers of the pigeonhole are tried largest first (smaller m on ties);
        the targets s and t are only checked at the end of each attempt, so
        raising them can never turn a failure into a certificate.

        Only the largest fiber is needed for the combinatorial argument; a
        fiber that falls short of the targets is followed by the next one, so
        this finds a certificate whenever the largest-fiber-only procedure
        does and sometimes when it does not.
        """
        # Phase 1
        per_block = ordered_map(
            lambda alpha: self.delta_service.find_largest(dfam.block_family(alpha)),
            range(len(dfam.blocks)),
            self.workers,
        )
        first_phase = {alpha: cert for alpha, cert in enumerate(per_block) if cert is not None}
        logger.info(f"Phase 1: {len(first_phase)}/{len(dfam.blocks)} blocks carry a Δ-system")

        # Phase 2
        fibers: Dict[int, List[int]] = defaultdict(list)
        for alpha, cert in first_phase.items():
            fibers[len(cert.kernel)].append(alpha)
        ordered_fibers = sorted(fibers.items(), key=lambda item: (-len(item[1]), item[0]))

        for m, fiber in ordered_fibers:
            cert = self._extract_from_fiber(dfam, first_phase, m, fiber)
            if cert is None:
                continue
            if len(cert.block_indices) < params.block_count_target:
                logger.debug(f"Fiber m={m}: only {len(cert.block_indices)} blocks survive")
                continue
            short = [a for a, idx in cert.per_block_indices.items() if len(idx) < params.per_block_target]
            if short:
                logger.debug(f"Fiber m={m}: blocks {short} filtered below target")
                continue
            logger.info(f"Double Δ-system found: m={m}, I={list(cert.block_indices)}")
            return cert
        return None

    def _extract_from_fiber(self, dfam: DoubleFamily, first_phase: Dict[int, DeltaSystemCertificate],
                            m: int, fiber: List[int]) -> Optional[DoubleDeltaCertificate]:
        if len(fiber) < 2:
            return None

        # Phase 3
        kernels = IndexedFamily(dfam.ground_size, tuple(first_phase[alpha].kernel for alpha in fiber))
        kernel_cert = self.delta_service.find_largest(kernels)
        if kernel_cert is None:
            return None
        block_indices = [fiber[position] for position in kernel_cert.indices]
        global_kernel = kernel_cert.kernel

        # Phase 4
        union_of_kernels = set()
        for alpha in block_indices:
            union_of_kernels |= first_phase[alpha].kernel.as_frozenset()
        forbidden = set(union_of_kernels)
        selections: Dict[int, Tuple[int, ...]] = {}
        for alpha in block_indices:
            kernel = first_phase[alpha].kernel.as_frozenset()
            kept = tuple(
                gamma for gamma in first_phase[alpha].indices
                if (dfam.member(alpha, gamma).as_frozenset() - kernel).isdisjoint(forbidden)
            )
            selections[alpha] = kept
            for gamma in kept:
                forbidden |= dfam.member(alpha, gamma).as_frozenset()
            logger.debug(f"Phase 4: block {alpha} keeps {len(kept)}/{len(first_phase[alpha].indices)}")

        if any(len(kept) < 2 for kept in selections.values()):
            return None
        return DoubleDeltaCertificate(
            m=m,
            block_indices=tuple(block_indices),
            per_block_indices=selections,
            per_block_kernels={alpha: first_phase[alpha].kernel for alpha in block_indices},
            global_kernel=global_kernel,
        )

    def verify_double_delta(self, dfam: DoubleFamily, cert: DoubleDeltaCertificate) -> DoubleDeltaReport:
        """Check the five certificate conditions by direct enumeration"""
        if len(cert.block_indices) < 2:
            raise DegenerateSize("a double Δ-system needs at least two blocks")
        if any(len(indices) < 2 for indices in cert.per_block_indices.values()):
            raise DegenerateSize("every selected block needs at least two members")

        failures: List[str] = []
        in_range: Dict[int, List[int]] = {}
        block_ranges = True
        for alpha in cert.block_indices:
            if not 0 <= alpha < len(dfam.blocks):
                block_ranges = False
                failures.append(f"block {alpha} does not exist")
                in_range[alpha] = []
                continue
            size = len(dfam.blocks[alpha])
            bad = [gamma for gamma in cert.per_block_indices[alpha] if not 0 <= gamma < size]
            if bad:
                block_ranges = False
                failures.append(f"block {alpha}: indices {bad} out of range")
            in_range[alpha] = [gamma for gamma in cert.per_block_indices[alpha] if 0 <= gamma < size]

        kernels = cert.per_block_kernels
        kernels_pairwise = True
        for alpha, beta in combinations(cert.block_indices, 2):
            if kernels[alpha] & kernels[beta] != cert.global_kernel:
                kernels_pairwise = False
                failures.append(f"A_{alpha} ∩ A_{beta} = {kernels[alpha] & kernels[beta]!r}")

        within_block = True
        for alpha in cert.block_indices:
            for gamma, delta in combinations(in_range[alpha], 2):
                meet = dfam.member(alpha, gamma) & dfam.member(alpha, delta)
                if meet != kernels[alpha]:
                    within_block = False
                    failures.append(f"A({alpha},{gamma}) ∩ A({alpha},{delta}) = {meet!r}")

        cross_block = True
        for alpha, beta in combinations(cert.block_indices, 2):
            for gamma in in_range[alpha]:
                for delta in in_range[beta]:
                    meet = dfam.member(alpha, gamma) & dfam.member(beta, delta)
                    if meet != cert.global_kernel:
                        cross_block = False
                        failures.append(f"A({alpha},{gamma}) ∩ A({beta},{delta}) = {meet!r}")

        uniform_size = all(len(kernels[alpha]) == cert.m for alpha in cert.block_indices)
        if not uniform_size:
            failures.append(f"some |A_α| differs from m={cert.m}")

        return DoubleDeltaReport(
            block_ranges=block_ranges,
            kernels_pairwise=kernels_pairwise,
            within_block=within_block,
            cross_block=cross_block,
            uniform_size=uniform_size,
            failures=tuple(failures),
        )

    def find_double_delta_exact(self, dfam: DoubleFamily,
                                params: ExtractionParams) -> Optional[DoubleDeltaCertificate]:
        """
        Complete oracle on tiny instances.

        All conditions are pairwise, so a certificate meeting the targets
        exists iff one with exactly s blocks and exactly t members per block
        exists. Block sets are tried in lexicographic order and the
        per-block choices by backtracking in lexicographic order.
        """
        if dfam.total_sets > self.exact_set_cap:
            raise CapExceeded("double_exact_set_cap", self.exact_set_cap, dfam.total_sets)
        if len(dfam.blocks) > self.exact_block_cap:
            raise CapExceeded("double_exact_block_cap", self.exact_block_cap, len(dfam.blocks))

        s, t = params.block_count_target, params.per_block_target
        candidates: Dict[int, List[Tuple[Tuple[int, ...], FiniteSet]]] = {}
        for alpha, block in enumerate(dfam.blocks):
            family = dfam.block_family(alpha)
            options = []
            for chosen in combinations(range(len(block)), t):
                try:
                    options.append((chosen, self.delta_service.kernel_of(family, chosen)))
                except NotDeltaSystem:
                    continue
            candidates[alpha] = options

        eligible = [alpha for alpha in range(len(dfam.blocks)) if candidates[alpha]]
        for blocks in combinations(eligible, s):
            found = _backtrack_blocks(dfam, blocks, candidates)
            if found is not None:
                picks, global_kernel = found
                return DoubleDeltaCertificate(
                    m=len(picks[0][1]),
                    block_indices=blocks,
                    per_block_indices={alpha: picks[pos][0] for pos, alpha in enumerate(blocks)},
                    per_block_kernels={alpha: picks[pos][1] for pos, alpha in enumerate(blocks)},
                    global_kernel=global_kernel,
                )
        return None


def _backtrack_blocks(dfam: DoubleFamily, blocks: Tuple[int, ...], candidates):
    """Pick one t-subset per block so that all pairwise conditions hold; None if impossible"""
    picks: List[Tuple[Tuple[int, ...], FiniteSet]] = []

    def admits(alpha: int, chosen: Tuple[int, ...], kernel: FiniteSet, global_kernel: FiniteSet) -> bool:
        if len(kernel) != len(picks[0][1]):
            return False
        for position, (previous, previous_kernel) in enumerate(picks):
            if previous_kernel & kernel != global_kernel:
                return False
            beta = blocks[position]
            for gamma in chosen:
                for delta in previous:
                    if dfam.member(alpha, gamma) & dfam.member(beta, delta) != global_kernel:
                        return False
        return True

    def extend(position: int, global_kernel: Optional[FiniteSet]):
        if position == len(blocks):
            return list(picks), global_kernel
        alpha = blocks[position]
        for chosen, kernel in candidates[alpha]:
            if picks:
                candidate_global = global_kernel if global_kernel is not None else picks[0][1] & kernel
                if not admits(alpha, chosen, kernel, candidate_global):
                    continue
            else:
                candidate_global = None
            picks.append((chosen, kernel))
            found = extend(position + 1, candidate_global)
            picks.pop()
            if found is not None:
                return found
        return None

    return extend(0, None)
