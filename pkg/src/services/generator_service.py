"""
Seeded generators for families, double families, spaces and product instances
"""
import logging
from typing import List, Optional

from ..config.settings import get_config
from ..models.family import DoubleFamily, FiniteSet, IndexedFamily
from ..models.generation import GenParams
from ..models.topology import Box, FiniteSpace, ProductInstance
from ..utils.errors import InvalidParams
from ..utils.rng import DeterministicRng
from .topology_service import TopologyService

logger = logging.getLogger(__name__)

CATALOG = {
    0: "discrete",
    1: "particular_point",
    2: "chain",
    3: "indiscrete_plus_point",
}


class GeneratorService:
    """
    Every generator is a pure function of its GenParams: each call builds a
    fresh DeterministicRng from the seed, so output never depends on call
    order or on other generators.
    """

    def __init__(self, settings=None, topology_service: Optional[TopologyService] = None):
        self.settings = settings or get_config()
        self.topology_service = topology_service or TopologyService(self.settings)

    def gen_family(self, p: GenParams) -> IndexedFamily:
        self._check_family_knobs(p)
        return self._family(DeterministicRng(p.seed), p, p.set_count)

    def gen_double_family(self, p: GenParams) -> DoubleFamily:
        self._check_family_knobs(p)
        self._check_range("block_count", p.block_count, 1, self.settings.GEN_MAX_BLOCKS)
        self._check_range("min_block_size", p.min_block_size, 0, self.settings.GEN_MAX_SETS)
        self._check_range("max_block_size", p.max_block_size, p.min_block_size, self.settings.GEN_MAX_SETS)

        rng = DeterministicRng(p.seed)
        blocks = []
        for _ in range(p.block_count):
            size = rng.between(p.min_block_size, p.max_block_size)
            blocks.append(self._family(rng, p, size).sets)
        return DoubleFamily(p.ground_size, tuple(blocks))

    def gen_space(self, p: GenParams) -> FiniteSpace:
        self._check_space_knobs(p)
        return self._space(DeterministicRng(p.seed), p, p.catalog_id)

    def gen_instance(self, p: GenParams) -> ProductInstance:
        self._check_space_knobs(p)
        self._check_range("factor_count", p.factor_count, 0, self.settings.GEN_MAX_FACTORS)
        self._check_range("box_count", p.box_count, 0, self.settings.GEN_MAX_BOXES)
        self._check_range("max_support", p.max_support, 0, self.settings.GEN_MAX_FACTORS)
        self._check_range("block_count", p.block_count, 1, self.settings.GEN_MAX_BLOCKS)

        rng = DeterministicRng(p.seed)
        factors = tuple(self._space(rng.spawn(), p, p.catalog_id) for _ in range(p.factor_count))

        boxes: List[Box] = []
        for _ in range(p.box_count):
            size = rng.between(0, min(p.max_support, p.factor_count))
            support = rng.sample(p.factor_count, size)
            constraints = {coord: rng.choice(factors[coord].nonempty_members()) for coord in support}
            boxes.append(Box.of(constraints))

        blocks = min(p.block_count, p.box_count)
        if blocks == 0:
            boundaries = (0,)
        else:
            boundaries = tuple(alpha * p.box_count // blocks for alpha in range(blocks + 1))
        logger.debug(f"Instance: {len(factors)} factors, {len(boxes)} boxes, {blocks} blocks")
        return ProductInstance(factors, tuple(boxes), boundaries)

    # Catalog

    @staticmethod
    def catalog_space(catalog_id: int, point_count: int) -> FiniteSpace:
        """Fixed small spaces; duplicates are dropped keeping the first occurrence"""
        points = list(range(point_count))
        name = CATALOG.get(catalog_id)
        if name == "discrete":
            basis = [[x] for x in points] + [points]
        elif name == "particular_point":
            basis = [[0]] + [[0, x] for x in points[1:]]
        elif name == "chain":
            basis = [points[:end] for end in range(1, point_count + 1)]
        elif name == "indiscrete_plus_point":
            basis = [points[:-1], [points[-1]]] if point_count > 1 else [points]
        else:
            raise InvalidParams(f"unknown catalog id {catalog_id}")

        unique: List[FiniteSet] = []
        for member in basis:
            candidate = FiniteSet.of(member)
            if candidate not in unique:
                unique.append(candidate)
        return FiniteSpace(point_count, tuple(unique))

    # Internals

    def _family(self, rng: DeterministicRng, p: GenParams, count: int) -> IndexedFamily:
        sets = []
        for _ in range(count):
            size = rng.between(p.min_set_size, p.max_set_size)
            sets.append(FiniteSet.of(rng.sample(p.ground_size, size)))
        return IndexedFamily(p.ground_size, tuple(sets))

    def _space(self, rng: DeterministicRng, p: GenParams, catalog_id: Optional[int]) -> FiniteSpace:
        if catalog_id is None:
            catalog_id = rng.below(len(CATALOG))
        point_count = p.point_count if p.point_count is not None else rng.between(1, p.max_points)
        space = self.catalog_space(catalog_id, point_count)
        if p.perturb:
            space = self._perturb(rng, space)
        return space

    def _perturb(self, rng: DeterministicRng, space: FiniteSpace) -> FiniteSpace:
        """Add one random non-empty member when the result is still a basis"""
        for _ in range(self.settings.GEN_PERTURB_ATTEMPTS):
            size = rng.between(1, space.point_count)
            extra = FiniteSet.of(rng.sample(space.point_count, size))
            if extra in space.basis:
                continue
            candidate = FiniteSpace(space.point_count, space.basis + (extra,))
            if self.topology_service.validate_space(candidate).ok:
                return candidate
        return space

    def _check_family_knobs(self, p: GenParams):
        self._check_range("set_count", p.set_count, 0, self.settings.GEN_MAX_SETS)
        self._check_range("ground_size", p.ground_size, 0, self.settings.GEN_MAX_GROUND)
        self._check_range("min_set_size", p.min_set_size, 0, p.ground_size)
        self._check_range("max_set_size", p.max_set_size, p.min_set_size, p.ground_size)

    def _check_space_knobs(self, p: GenParams):
        self._check_range("max_points", p.max_points, 1, self.settings.GEN_MAX_POINTS)
        if p.point_count is not None:
            self._check_range("point_count", p.point_count, 1, self.settings.GEN_MAX_POINTS)
        if p.catalog_id is not None and p.catalog_id not in CATALOG:
            raise InvalidParams(f"catalog_id must be one of {sorted(CATALOG)}")

    @staticmethod
    def _check_range(name: str, value: int, low: int, high: int):
        if not low <= value <= high:
            raise InvalidParams(f"{name} must lie in {low}..{high}, got {value}")
