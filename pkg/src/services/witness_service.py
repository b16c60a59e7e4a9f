"""
Witness-point pipeline over finite products: support reduction, kernel and
block centered selections, and assembly of a common point from the pieces
q (global kernel), r (block kernels) and s (remaining support).
"""
import logging
from itertools import combinations
from math import prod
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from ..config.settings import get_config
from ..models.family import DoubleDeltaCertificate, DoubleFamily, ExtractionParams, FiniteSet
from ..models.topology import ProductInstance
from ..models.witness import (
    PartialPoint, PipelineParams, PipelineReport, SubsetCheck, WitnessAssembly, WitnessPlan,
)
from ..utils.errors import CapExceeded, DomainClash, InvalidInstance, PlanInvalid
from ..utils.worker_pool import ordered_map
from .double_delta_service import DoubleDeltaService
from .topology_service import TopologyService

logger = logging.getLogger(__name__)


class WitnessService:
    """Run the witness construction on product instances"""

    def __init__(self, settings=None, double_delta_service: Optional[DoubleDeltaService] = None,
                 topology_service: Optional[TopologyService] = None):
        self.settings = settings or get_config()
        self.double_delta_service = double_delta_service or DoubleDeltaService(self.settings)
        self.topology_service = topology_service or TopologyService(self.settings)
        self.point_cap = self.settings.PRODUCT_POINT_CAP
        self.subset_size = self.settings.SUBSET_SIZE
        self.workers = self.settings.WORKERS

    # Stage 1: supports

    @staticmethod
    def support_family(instance: ProductInstance) -> Optional[DoubleFamily]:
        """The supports B_γ grouped by the instance's blocks, over the coordinate ground set"""
        if instance.block_count == 0:
            return None
        blocks = tuple(
            tuple(instance.boxes[gamma].support for gamma in instance.block_range(alpha))
            for alpha in range(instance.block_count)
        )
        return DoubleFamily(len(instance.factors), blocks)

    def reduce_supports(self, instance: ProductInstance,
                        params: ExtractionParams) -> Optional[DoubleDeltaCertificate]:
        dfam = self.support_family(instance)
        if dfam is None:
            return None
        return self.double_delta_service.extract_double_delta(dfam, params)

    @staticmethod
    def certified_boxes(instance: ProductInstance, cert: DoubleDeltaCertificate, alpha: int) -> Tuple[int, ...]:
        """Global box indices of the certificate's block-α selection"""
        offset = instance.block_boundaries[alpha]
        return tuple(offset + gamma for gamma in cert.per_block_indices[alpha])

    # Stage 2: centered selections

    def select_kernel_centered(self, instance: ProductInstance, cert: DoubleDeltaCertificate,
                               target: int) -> Optional[Tuple[int, ...]]:
        """Largest selection whose projections onto A share a point; least indices on ties"""
        eligible = sorted(
            gamma for alpha in cert.block_indices for gamma in self.certified_boxes(instance, cert, alpha)
        )
        selection = self._largest_centered(instance, eligible, cert.global_kernel)
        if len(selection) < target:
            logger.info(f"Kernel selection reaches {len(selection)} < target {target}")
            return None
        return selection

    def select_block_centered(self, instance: ProductInstance, cert: DoubleDeltaCertificate, alpha: int,
                              target: int, within: Optional[Iterable[int]] = None,
                              shift: int = 0) -> Optional[Tuple[int, ...]]:
        """
        Largest selection from block source(α) whose projections onto that
        block's kernel share a point. With shift s the source is the block s
        positions after α in the certificate's ordered block set.
        """
        ordered = cert.block_indices
        if alpha not in ordered:
            raise InvalidInstance(f"block {alpha} is not selected by the certificate")
        position = ordered.index(alpha) + shift
        if position >= len(ordered):
            return None
        source = ordered[position]

        pool = self.certified_boxes(instance, cert, source)
        if within is not None:
            allowed = set(within)
            pool = tuple(gamma for gamma in pool if gamma in allowed)
        selection = self._largest_centered(instance, pool, cert.per_block_kernels[source])
        if len(selection) < target:
            logger.debug(f"Block {alpha} (source {source}) reaches {len(selection)} < target {target}")
            return None
        return selection

    def _largest_centered(self, instance: ProductInstance, pool: List[int],
                          coords: FiniteSet) -> Tuple[int, ...]:
        """Exhaustive over points of the coordinate product; prunes groups that cannot win"""
        pool = sorted(pool)
        axes = list(coords)
        size = prod(instance.factors[coord].point_count for coord in axes)
        if size > self.point_cap:
            raise CapExceeded("product_point_cap", self.point_cap, size)

        best: List[int] = []
        found = False

        def descend(position: int, group: List[int]):
            nonlocal best, found
            if len(group) < len(best):
                return
            if position == len(axes):
                if not found or len(group) > len(best) or group < best:
                    best, found = group, True
                return
            coord = axes[position]
            for point in range(instance.factors[coord].point_count):
                narrowed = [
                    gamma for gamma in group
                    if instance.open_of(gamma, coord) is None or point in instance.open_of(gamma, coord)
                ]
                descend(position + 1, narrowed)

        descend(0, pool)
        return tuple(best)

    # Stage 3: plan checks and assembly

    def build_plan(self, instance: ProductInstance, cert: DoubleDeltaCertificate,
                   block_selections: Dict[int, Tuple[int, ...]], shift: int = 0) -> WitnessPlan:
        block_of = {gamma: alpha for alpha, members in block_selections.items() for gamma in members}
        return WitnessPlan(
            support_cert=cert,
            kernel_selection=tuple(sorted(block_of)),
            block_selections=dict(sorted(block_selections.items())),
            block_of=dict(sorted(block_of.items())),
            shift=shift,
        )

    def check_plan(self, instance: ProductInstance, plan: WitnessPlan):
        """Raise PlanInvalid unless the plan's selections, kernel chain and exclusions hold"""
        cert = plan.support_cert
        ordered = cert.block_indices
        for alpha in plan.block_selections:
            if alpha not in ordered or ordered.index(alpha) + plan.shift >= len(ordered):
                raise PlanInvalid(f"block label {alpha} has no source block under shift {plan.shift}")
        union = sorted(gamma for members in plan.block_selections.values() for gamma in members)
        if tuple(union) != tuple(plan.kernel_selection) or len(set(union)) != len(union):
            raise PlanInvalid("the selection must be the disjoint union of the block selections")

        for alpha, members in plan.block_selections.items():
            certified = set(self.certified_boxes(instance, cert, plan.source_block(alpha)))
            if not set(members) <= certified:
                raise PlanInvalid(f"block {alpha} selects boxes outside the certificate")
            kernel = plan.kernel_for(alpha)
            if not cert.global_kernel.issubset(kernel):
                raise PlanInvalid(f"A is not contained in the kernel of block {alpha}")
            for gamma in members:
                if not kernel.issubset(instance.boxes[gamma].support):
                    raise PlanInvalid(f"kernel of block {alpha} is not inside B_{gamma}")
            projected = [self.topology_service.project_box(instance.boxes[g], kernel) for g in members]
            if not _projections_centered(instance, projected):
                raise PlanInvalid(f"block {alpha} selection is not centered on its kernel")

        selected = list(plan.kernel_selection)
        projected = [self.topology_service.project_box(instance.boxes[g], cert.global_kernel) for g in selected]
        if not _projections_centered(instance, projected):
            raise PlanInvalid("selection is not centered on A")

        for gamma in selected:
            outside = instance.boxes[gamma].support - plan.kernel_for(plan.block_of[gamma])
            rank = plan.source_block(plan.block_of[gamma])
            for delta in selected:
                if delta == gamma or plan.source_block(plan.block_of[delta]) > rank:
                    continue
                if not outside.isdisjoint(instance.boxes[delta].support):
                    raise PlanInvalid(f"(B_{gamma} minus its block kernel) meets B_{delta}")

    def assemble_witness(self, instance: ProductInstance, plan: WitnessPlan,
                         finite_indices: Iterable[int]) -> WitnessAssembly:
        """Build q ∪ r ∪ s for a finite subfamily and extend it by least points"""
        chosen = sorted(set(finite_indices))
        if not chosen:
            raise PlanInvalid("the finite subfamily must be non-empty")
        if not set(chosen) <= set(plan.kernel_selection):
            raise PlanInvalid("the finite subfamily must come from the plan's selection")

        cert = plan.support_cert
        q = {coord: self._least_common_point(instance, chosen, coord) for coord in cert.global_kernel}

        r: Dict[int, int] = {}
        r_blocks: Dict[int, PartialPoint] = {}
        for alpha in sorted({plan.block_of[gamma] for gamma in chosen}):
            members = [gamma for gamma in chosen if plan.block_of[gamma] == alpha]
            kernel = plan.kernel_for(alpha)
            r_alpha = {coord: self._least_common_point(instance, members, coord) for coord in kernel}
            r_blocks[alpha] = PartialPoint.of(r_alpha)
            for coord in kernel - cert.global_kernel:
                if coord in r:
                    raise DomainClash(f"coordinate {coord} lies in two block kernels outside A")
                r[coord] = r_alpha[coord]

        s: Dict[int, int] = {}
        for gamma in chosen:
            kernel = plan.kernel_for(plan.block_of[gamma])
            for coord in instance.boxes[gamma].support - kernel:
                if coord in s:
                    raise DomainClash(f"coordinate {coord} lies outside the kernels of two boxes")
                s[coord] = min(instance.open_of(gamma, coord))

        q_point, r_point, s_point = PartialPoint.of(q), PartialPoint.of(r), PartialPoint.of(s)
        partial = q_point.union(r_point, s_point).as_dict()
        for coord in range(len(instance.factors)):
            partial.setdefault(coord, 0)

        if not self.topology_service.point_in_boxes(instance, partial, chosen):
            raise PlanInvalid(f"assembled point misses some box of {chosen}")
        return WitnessAssembly(q=q_point, r=r_point, s=s_point, r_blocks=r_blocks,
                               point=PartialPoint.of(partial))

    @staticmethod
    def _least_common_point(instance: ProductInstance, members: List[int], coord: int) -> int:
        common: Optional[FrozenSet[int]] = None
        for gamma in members:
            opened = instance.open_of(gamma, coord)
            if opened is None:
                continue
            common = opened.as_frozenset() if common is None else common & opened.as_frozenset()
        if common is None:
            return 0
        if not common:
            raise PlanInvalid(f"constraints at coordinate {coord} have no common point")
        return min(common)

    # End to end

    def run_pipeline(self, instance: ProductInstance, params: PipelineParams) -> PipelineReport:
        """
        Run the stages in order and stop at the first that fails.

        A block whose centered selection comes up short is dropped from the
        plan rather than failing the run; the stage fails only when fewer than
        the target number of blocks remain.
        """
        report = PipelineReport()

        logger.info("Stage reduce_supports")
        cert = self.reduce_supports(instance, params.extraction)
        if cert is None:
            report.failed_stage = "reduce_supports"
            return report
        report.support_cert = cert

        logger.info("Stage select_kernel_centered")
        kernel_selection = self.select_kernel_centered(instance, cert, params.effective_kernel_target)
        if kernel_selection is None:
            report.failed_stage = "select_kernel_centered"
            return report
        report.kernel_selection = kernel_selection

        logger.info("Stage select_block_centered")
        selections: Dict[int, Tuple[int, ...]] = {}
        for alpha in cert.block_indices:
            selection = self.select_block_centered(instance, cert, alpha, params.effective_block_target,
                                                   within=kernel_selection, shift=params.shift)
            if selection is not None:
                selections[alpha] = selection
        report.block_selections = selections
        if len(selections) < params.extraction.block_count_target:
            report.failed_stage = "select_block_centered"
            return report

        plan = self.build_plan(instance, cert, selections, params.shift)
        try:
            self.check_plan(instance, plan)
        except PlanInvalid as e:
            logger.error(f"Plan check failed: {e}")
            report.failed_stage = "verify_plan"
            return report
        report.selected = plan.kernel_selection

        subset_size = params.subset_size or self.subset_size
        subsets = [
            subset
            for size in range(1, min(subset_size, len(plan.kernel_selection)) + 1)
            for subset in combinations(plan.kernel_selection, size)
        ]
        logger.info(f"Stage assemble_witness over {len(subsets)} subsets")
        report.subset_checks = ordered_map(lambda subset: self._check_subset(instance, plan, subset),
                                           subsets, self.workers)
        if not report.ok:
            report.failed_stage = "assemble_witness"
        return report

    def _check_subset(self, instance: ProductInstance, plan: WitnessPlan, subset: Tuple[int, ...]) -> SubsetCheck:
        try:
            self.assemble_witness(instance, plan, subset)
        except (PlanInvalid, DomainClash) as e:
            logger.error(f"Assembly failed on {subset}: {e}")
            return SubsetCheck(indices=subset, ok=False, detail=str(e))
        return SubsetCheck(indices=subset, ok=True)


def _projections_centered(instance: ProductInstance, boxes) -> bool:
    shared: Dict[int, FrozenSet[int]] = {}
    for box in boxes:
        for coord, member in box.constraints:
            points = instance.factors[coord].basis[member].as_frozenset()
            shared[coord] = shared[coord] & points if coord in shared else points
            if not shared[coord]:
                return False
    return True
